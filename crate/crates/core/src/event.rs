//! Event, shift and manpower records, plus the indexed in-memory [`EventLog`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rink::NormalizedPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    Pass,
    Reception,
    FailedReception,
    PuckRecovery,
    Carry,
    Shot,
    Block,
    Save,
    Faceoff,
    Stoppage,
    ZoneEntry,
    ZoneExit,
    Penalty,
}

impl EventType {
    pub const ALL: [EventType; 13] = [
        EventType::Pass,
        EventType::Reception,
        EventType::FailedReception,
        EventType::PuckRecovery,
        EventType::Carry,
        EventType::Shot,
        EventType::Block,
        EventType::Save,
        EventType::Faceoff,
        EventType::Stoppage,
        EventType::ZoneEntry,
        EventType::ZoneExit,
        EventType::Penalty,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventType::Pass => "pass",
            EventType::Reception => "reception",
            EventType::FailedReception => "failed_reception",
            EventType::PuckRecovery => "puck_recovery",
            EventType::Carry => "carry",
            EventType::Shot => "shot",
            EventType::Block => "block",
            EventType::Save => "save",
            EventType::Faceoff => "faceoff",
            EventType::Stoppage => "stoppage",
            EventType::ZoneEntry => "zone_entry",
            EventType::ZoneExit => "zone_exit",
            EventType::Penalty => "penalty",
        }
    }

    /// Event types that halt play and therefore close any open sequence.
    pub fn is_stoppage(self) -> bool {
        matches!(self, EventType::Stoppage | EventType::Faceoff | EventType::Penalty)
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        EventType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassType {
    D2d,
    Stretch,
    Slot,
    Outlet,
    Ew,
    Rim,
    Other,
}

impl PassType {
    pub const ALL: [PassType; 7] = [
        PassType::D2d,
        PassType::Stretch,
        PassType::Slot,
        PassType::Outlet,
        PassType::Ew,
        PassType::Rim,
        PassType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PassType::D2d => "d2d",
            PassType::Stretch => "stretch",
            PassType::Slot => "slot",
            PassType::Outlet => "outlet",
            PassType::Ew => "ew",
            PassType::Rim => "rim",
            PassType::Other => "other",
        }
    }
}

impl fmt::Display for PassType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PassType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        PassType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotAttrs {
    pub deflected: bool,
    pub on_goal: bool,
    pub goal: bool,
    pub distance_ft: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryAttrs {
    pub controlled: bool,
    pub attackers: u8,
    pub defenders: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExitAttrs {
    pub controlled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassAttrs {
    pub pass_type: PassType,
    pub linked_reception_id: Option<String>,
}

/// Type-specific attributes. The variant present must agree with the
/// event's type; events of other types carry [`EventAttrs::None`].
#[derive(Debug, Clone, PartialEq, Default)]
pub enum EventAttrs {
    #[default]
    None,
    Shot(ShotAttrs),
    ZoneEntry(EntryAttrs),
    ZoneExit(ExitAttrs),
    Pass(PassAttrs),
}

impl EventAttrs {
    pub fn matches(&self, ty: EventType) -> bool {
        match self {
            EventAttrs::Shot(_) => ty == EventType::Shot,
            EventAttrs::ZoneEntry(_) => ty == EventType::ZoneEntry,
            EventAttrs::ZoneExit(_) => ty == EventType::ZoneExit,
            EventAttrs::Pass(_) => ty == EventType::Pass,
            EventAttrs::None => !matches!(
                ty,
                EventType::Shot | EventType::ZoneEntry | EventType::ZoneExit | EventType::Pass
            ),
        }
    }
}

/// Skater counts from one team's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Manpower {
    pub own: u8,
    pub opp: u8,
}

impl Manpower {
    pub const EVEN: Manpower = Manpower { own: 5, opp: 5 };
    pub const MIN_SKATERS: u8 = 3;
    pub const MAX_SKATERS: u8 = 6;

    pub fn new(own: u8, opp: u8) -> Self {
        Self { own, opp }
    }

    pub fn in_bounds(self) -> bool {
        let ok = |n: u8| (Self::MIN_SKATERS..=Self::MAX_SKATERS).contains(&n);
        ok(self.own) && ok(self.opp)
    }

    pub fn flipped(self) -> Self {
        Self::new(self.opp, self.own)
    }
}

impl fmt::Display for Manpower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}v{}", self.own, self.opp)
    }
}

impl FromStr for Manpower {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(['v', 'V'])
            .ok_or_else(|| Error::Config(format!("manpower must look like 5v5, got `{s}`")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| Error::Config(format!("bad skater count in `{s}`")))
        };
        Ok(Manpower::new(parse(a)?, parse(b)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub event_id: String,
    pub game_id: String,
    pub league: String,
    pub season: String,
    pub period: u32,
    pub t_s: f64,
    pub team_id: String,
    pub player_id: Option<String>,
    pub event_type: EventType,
    /// Location in the acting team's attacking frame.
    pub point: NormalizedPoint,
    pub possession_team: Option<String>,
    /// Skater counts from `team_id`'s point of view.
    pub manpower: Manpower,
    pub attrs: EventAttrs,
}

impl Event {
    pub fn shot(&self) -> Option<&ShotAttrs> {
        match &self.attrs {
            EventAttrs::Shot(a) => Some(a),
            _ => None,
        }
    }

    pub fn entry(&self) -> Option<&EntryAttrs> {
        match &self.attrs {
            EventAttrs::ZoneEntry(a) => Some(a),
            _ => None,
        }
    }

    pub fn exit(&self) -> Option<&ExitAttrs> {
        match &self.attrs {
            EventAttrs::ZoneExit(a) => Some(a),
            _ => None,
        }
    }

    pub fn pass(&self) -> Option<&PassAttrs> {
        match &self.attrs {
            EventAttrs::Pass(a) => Some(a),
            _ => None,
        }
    }

    /// The event's location in `team`'s attacking frame, assuming the two
    /// teams attack in opposite directions.
    pub fn point_for(&self, team: &str) -> NormalizedPoint {
        if self.team_id == team {
            self.point
        } else {
            self.point.mirrored()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    F,
    D,
    G,
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "F" => Ok(Position::F),
            "D" => Ok(Position::D),
            "G" => Ok(Position::G),
            other => Err(other.to_string()),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Position::F => "F",
            Position::D => "D",
            Position::G => "G",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shift {
    pub game_id: String,
    pub player_id: String,
    pub team_id: String,
    pub position: Position,
    pub period: u32,
    pub start_s: f64,
    pub end_s: f64,
}

impl Shift {
    /// Closed-interval membership: a player is on ice at both shift edges.
    pub fn covers(&self, period: u32, t_s: f64) -> bool {
        self.period == period && self.start_s <= t_s && t_s <= self.end_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManpowerInterval {
    pub game_id: String,
    pub period: u32,
    pub start_s: f64,
    pub end_s: f64,
    pub home_team: String,
    pub home_skaters: u8,
    pub away_team: String,
    pub away_skaters: u8,
}

impl ManpowerInterval {
    pub fn manpower_for(&self, team: &str) -> Option<Manpower> {
        if team == self.home_team {
            Some(Manpower::new(self.home_skaters, self.away_skaters))
        } else if team == self.away_team {
            Some(Manpower::new(self.away_skaters, self.home_skaters))
        } else {
            None
        }
    }

    pub fn is_even_strength(&self) -> bool {
        self.home_skaters == 5 && self.away_skaters == 5
    }

    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

/// Immutable, indexed collection of events in file order.
#[derive(Debug, Clone, Default)]
pub struct EventLog {
    events: Vec<Event>,
    by_game: BTreeMap<String, Vec<usize>>,
    by_period: BTreeMap<(String, u32), Vec<usize>>,
    by_id: BTreeMap<String, usize>,
}

impl EventLog {
    pub fn new(events: Vec<Event>) -> Self {
        let mut by_game: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_period: BTreeMap<(String, u32), Vec<usize>> = BTreeMap::new();
        let mut by_id = BTreeMap::new();
        for (i, e) in events.iter().enumerate() {
            by_game.entry(e.game_id.clone()).or_default().push(i);
            by_period.entry((e.game_id.clone(), e.period)).or_default().push(i);
            by_id.entry(e.event_id.clone()).or_insert(i);
        }
        for idx in by_period.values_mut() {
            idx.sort_by(|&a, &b| events[a].t_s.total_cmp(&events[b].t_s).then(a.cmp(&b)));
        }
        Self {
            events,
            by_game,
            by_period,
            by_id,
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn get(&self, idx: usize) -> &Event {
        &self.events[idx]
    }

    pub fn index_of(&self, event_id: &str) -> Option<usize> {
        self.by_id.get(event_id).copied()
    }

    pub fn by_id(&self, event_id: &str) -> Option<&Event> {
        self.index_of(event_id).map(|i| &self.events[i])
    }

    pub fn game_ids(&self) -> impl Iterator<Item = &str> {
        self.by_game.keys().map(String::as_str)
    }

    /// File-order indices of one game's events.
    pub fn game_indices(&self, game_id: &str) -> &[usize] {
        self.by_game.get(game_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn teams_in_game(&self, game_id: &str) -> BTreeSet<&str> {
        self.game_indices(game_id)
            .iter()
            .map(|&i| self.events[i].team_id.as_str())
            .collect()
    }

    /// The other team that appears in `game_id`, when exactly two do.
    pub fn opponent(&self, game_id: &str, team: &str) -> Option<String> {
        let teams = self.teams_in_game(game_id);
        if teams.len() != 2 || !teams.contains(team) {
            return None;
        }
        teams.into_iter().find(|t| *t != team).map(str::to_string)
    }

    /// Indices of events in `[t0, t1]` of one period, ordered by time.
    pub fn window(&self, game_id: &str, period: u32, t0: f64, t1: f64) -> &[usize] {
        let Some(idx) = self.by_period.get(&(game_id.to_string(), period)) else {
            return &[];
        };
        let lo = idx.partition_point(|&i| self.events[i].t_s < t0);
        let hi = idx.partition_point(|&i| self.events[i].t_s <= t1);
        &idx[lo..hi.max(lo)]
    }

    pub fn count_by_type(&self) -> BTreeMap<EventType, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.events {
            *counts.entry(e.event_type).or_insert(0) += 1;
        }
        counts
    }

    /// Splits the log into one log per game, in game-id order.
    pub fn split_by_game(&self) -> Vec<EventLog> {
        self.by_game
            .values()
            .map(|idx| EventLog::new(idx.iter().map(|&i| self.events[i].clone()).collect()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manpower_parse_and_display() {
        let m: Manpower = "5v4".parse().unwrap();
        assert_eq!(m, Manpower::new(5, 4));
        assert_eq!(m.to_string(), "5v4");
        assert_eq!(m.flipped(), Manpower::new(4, 5));
        assert!(!Manpower::new(7, 5).in_bounds());
        assert!("five".parse::<Manpower>().is_err());
    }

    #[test]
    fn attrs_match_type() {
        assert!(EventAttrs::None.matches(EventType::Reception));
        assert!(!EventAttrs::None.matches(EventType::Shot));
        let pass = EventAttrs::Pass(PassAttrs {
            pass_type: PassType::Ew,
            linked_reception_id: None,
        });
        assert!(pass.matches(EventType::Pass));
        assert!(!pass.matches(EventType::Shot));
    }

    #[test]
    fn event_type_names_round_trip() {
        for t in EventType::ALL {
            assert_eq!(t.as_str().parse::<EventType>().unwrap(), t);
        }
        for t in PassType::ALL {
            assert_eq!(t.as_str().parse::<PassType>().unwrap(), t);
        }
    }
}

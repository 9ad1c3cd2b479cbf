//! Possession sequences, their pace transitions and the zonal split.
//!
//! A sequence is a maximal run of one team's possession events. It closes
//! when another team is labeled in possession, when the manpower seen by
//! the possessing team changes, at a stoppage (stoppage, faceoff, penalty
//! or a period boundary), or at the end of the game's events. The
//! transition into the final event of a closed sequence carries no pace.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::event::{Event, EventLog, EventType, Manpower};
use crate::rink::{NormalizedPoint, RinkSpec, Zone};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceConfig {
    pub possession_types: BTreeSet<EventType>,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        Self {
            possession_types: [
                EventType::Pass,
                EventType::Reception,
                EventType::PuckRecovery,
                EventType::Shot,
            ]
            .into_iter()
            .collect(),
        }
    }
}

impl SequenceConfig {
    pub fn is_possession_event(&self, e: &Event) -> bool {
        self.possession_types.contains(&e.event_type) && e.possession_team.as_deref() == Some(e.team_id.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    PossessionChange,
    ManpowerChange,
    Stoppage,
    ZoneTransition,
    EndOfData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PossessionSequence {
    pub sequence_id: String,
    pub game_id: String,
    pub team_id: String,
    pub period: u32,
    /// Set on zonal sequences only.
    pub zone: Option<Zone>,
    /// Log indices of the possession events, in order.
    pub events: Vec<usize>,
    pub termination: TerminationReason,
    pub manpower: Manpower,
    /// Log index of the event that closed the sequence, if any.
    pub closed_at: Option<usize>,
}

impl PossessionSequence {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Whether the transition into the last event carries pace. Only
    /// sequences cut at a zone boundary keep it; the next zonal sequence
    /// starts from that same event.
    pub fn keeps_final_transition(&self) -> bool {
        self.termination == TerminationReason::ZoneTransition
    }

    pub fn first_event<'a>(&self, log: &'a EventLog) -> &'a Event {
        log.get(self.events[0])
    }
}

/// One transition between successive possession events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaceSample {
    pub d_total: f64,
    pub d_ew: f64,
    pub d_ns: f64,
    pub d_n: f64,
    pub dt: f64,
    pub from_idx: usize,
    pub to_idx: usize,
    pub from: NormalizedPoint,
    pub to: NormalizedPoint,
}

impl PaceSample {
    pub fn between(a: &Event, b: &Event, from_idx: usize, to_idx: usize) -> PaceSample {
        let dx = b.point.x_north - a.point.x_north;
        let dy = b.point.y_east - a.point.y_east;
        PaceSample {
            d_total: (dx * dx + dy * dy).sqrt(),
            d_ew: dy.abs(),
            d_ns: dx.abs(),
            d_n: dx.max(0.0),
            dt: b.t_s - a.t_s,
            from_idx,
            to_idx,
            from: a.point,
            to: b.point,
        }
    }

    pub fn from_event<'a>(&self, log: &'a EventLog) -> &'a Event {
        log.get(self.from_idx)
    }

    pub fn to_event<'a>(&self, log: &'a EventLog) -> &'a Event {
        log.get(self.to_idx)
    }

    pub fn from_player<'a>(&self, log: &'a EventLog) -> Option<&'a str> {
        self.from_event(log).player_id.as_deref()
    }

    pub fn to_player<'a>(&self, log: &'a EventLog) -> Option<&'a str> {
        self.to_event(log).player_id.as_deref()
    }

    /// Same transition seen from the other end of the rink.
    pub fn mirrored(&self) -> PaceSample {
        PaceSample {
            from: self.from.mirrored(),
            to: self.to.mirrored(),
            ..*self
        }
    }
}

/// Samples of one sequence plus the count of transitions dropped because
/// their elapsed time was not positive.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Samples {
    pub samples: Vec<PaceSample>,
    pub dropped_nonpositive_dt: usize,
}

struct Open {
    team: String,
    manpower: Manpower,
    period: u32,
    events: Vec<usize>,
}

fn build_game(log: &EventLog, game_id: &str, cfg: &SequenceConfig) -> Vec<PossessionSequence> {
    let mut out = Vec::new();
    let mut open: Option<Open> = None;
    let close = |open: &mut Option<Open>, reason: TerminationReason, at: Option<usize>, out: &mut Vec<_>| {
        if let Some(o) = open.take() {
            let first = log.get(o.events[0]);
            out.push(PossessionSequence {
                sequence_id: format!("{}:{:05}", game_id, out.len()),
                game_id: first.game_id.clone(),
                team_id: o.team,
                period: o.period,
                zone: None,
                events: o.events,
                termination: reason,
                manpower: o.manpower,
                closed_at: at,
            });
        }
    };

    for &i in log.game_indices(game_id) {
        let e = log.get(i);
        if open.as_ref().is_some_and(|o| o.period != e.period) {
            close(&mut open, TerminationReason::Stoppage, Some(i), &mut out);
        }
        if e.event_type.is_stoppage() {
            close(&mut open, TerminationReason::Stoppage, Some(i), &mut out);
            continue;
        }
        if let (Some(o), Some(holder)) = (open.as_ref(), e.possession_team.as_deref()) {
            if holder != o.team {
                close(&mut open, TerminationReason::PossessionChange, Some(i), &mut out);
            }
        }
        if !cfg.is_possession_event(e) {
            continue;
        }
        if open.as_ref().is_some_and(|o| o.manpower != e.manpower) {
            close(&mut open, TerminationReason::ManpowerChange, Some(i), &mut out);
        }
        match open.as_mut() {
            Some(o) => o.events.push(i),
            None => {
                open = Some(Open {
                    team: e.team_id.clone(),
                    manpower: e.manpower,
                    period: e.period,
                    events: vec![i],
                })
            }
        }
    }
    close(&mut open, TerminationReason::EndOfData, None, &mut out);
    out
}

/// Builds standard-rule sequences for every game, in game-id order.
pub fn build_sequences(log: &EventLog, cfg: &SequenceConfig) -> Vec<PossessionSequence> {
    let games: Vec<&str> = log.game_ids().collect();
    games
        .par_iter()
        .map(|g| build_game(log, g, cfg))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Pace transitions of one sequence.
pub fn pace_samples(seq: &PossessionSequence, log: &EventLog) -> Samples {
    let mut out = Samples::default();
    let n = seq.events.len();
    if n < 2 {
        return out;
    }
    let last = if seq.keeps_final_transition() { n - 1 } else { n - 2 };
    out.samples.reserve(last);
    for k in 0..last {
        let (a, b) = (seq.events[k], seq.events[k + 1]);
        let s = PaceSample::between(log.get(a), log.get(b), a, b);
        if s.dt > 0.0 {
            out.samples.push(s);
        } else {
            out.dropped_nonpositive_dt += 1;
        }
    }
    out
}

/// Cuts standard sequences at zone changes. The transition that crosses a
/// zone boundary belongs to the destination zone, and its origin event
/// seeds the new zonal sequence.
pub fn split_by_zone(seqs: &[PossessionSequence], log: &EventLog, rink: &RinkSpec) -> Vec<PossessionSequence> {
    let mut out = Vec::with_capacity(seqs.len() * 2);
    for parent in seqs {
        let zone_at = |k: usize| rink.zone_of(log.get(parent.events[k]).point);
        let piece = |events: Vec<usize>, zone: Zone, reason, closed_at, n: usize| PossessionSequence {
            sequence_id: format!("{}/{}", parent.sequence_id, n),
            zone: Some(zone),
            events,
            termination: reason,
            closed_at,
            ..parent.clone_header()
        };
        let mut current_zone = zone_at(0);
        let mut current = vec![parent.events[0]];
        let mut n = 0;
        for k in 1..parent.events.len() {
            let z = zone_at(k);
            if z != current_zone {
                let seed = parent.events[k - 1];
                let done = std::mem::replace(&mut current, vec![seed]);
                out.push(piece(done, current_zone, TerminationReason::ZoneTransition, Some(parent.events[k]), n));
                n += 1;
                current_zone = z;
            }
            current.push(parent.events[k]);
        }
        out.push(piece(current, current_zone, parent.termination, parent.closed_at, n));
    }
    out
}

impl PossessionSequence {
    fn clone_header(&self) -> PossessionSequence {
        PossessionSequence {
            sequence_id: self.sequence_id.clone(),
            game_id: self.game_id.clone(),
            team_id: self.team_id.clone(),
            period: self.period,
            zone: self.zone,
            events: Vec::new(),
            termination: self.termination,
            manpower: self.manpower,
            closed_at: self.closed_at,
        }
    }
}

/// Locates the standard sequence that was open at a given log index.
#[derive(Debug, Default)]
pub struct SequenceSpans {
    // game -> (first index, exclusive end index, sequence position)
    spans: BTreeMap<String, Vec<(usize, usize, usize)>>,
}

impl SequenceSpans {
    pub fn new(seqs: &[PossessionSequence]) -> Self {
        let mut spans: BTreeMap<String, Vec<(usize, usize, usize)>> = BTreeMap::new();
        for (pos, s) in seqs.iter().enumerate() {
            let first = s.events[0];
            let end = s.closed_at.unwrap_or(usize::MAX);
            spans.entry(s.game_id.clone()).or_default().push((first, end, pos));
        }
        for v in spans.values_mut() {
            v.sort_unstable();
        }
        Self { spans }
    }

    /// Position of the sequence of `team` whose span contains log index
    /// `idx`, meaning it started at or before `idx` and was not closed
    /// before it.
    pub fn containing(&self, seqs: &[PossessionSequence], game_id: &str, team: &str, idx: usize) -> Option<usize> {
        let v = self.spans.get(game_id)?;
        let k = v.partition_point(|&(first, _, _)| first <= idx);
        let &(_, end, pos) = v.get(k.checked_sub(1)?)?;
        (idx < end && seqs[pos].team_id == team).then_some(pos)
    }
}

#[derive(Serialize)]
struct SequenceLine<'a> {
    sequence_id: &'a str,
    game_id: &'a str,
    team_id: &'a str,
    zone: Option<Zone>,
    manpower: String,
    event_ids: Vec<&'a str>,
    reason: TerminationReason,
}

/// Debug export, one JSON object per sequence.
pub fn write_sequences_jsonl<W: Write>(seqs: &[PossessionSequence], log: &EventLog, mut w: W) -> Result<()> {
    for s in seqs {
        let line = SequenceLine {
            sequence_id: &s.sequence_id,
            game_id: &s.game_id,
            team_id: &s.team_id,
            zone: s.zone,
            manpower: s.manpower.to_string(),
            event_ids: s.events.iter().map(|&i| log.get(i).event_id.as_str()).collect(),
            reason: s.termination,
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::event::{Event, EventAttrs, EventLog, EventType, Manpower, PassAttrs, PassType, ShotAttrs};
    use crate::rink::NormalizedPoint;

    /// Compact event builder for hand-written scenarios.
    pub fn ev(id: &str, team: &str, ty: EventType, t: f64, x: f64, y: f64) -> Event {
        let attrs = match ty {
            EventType::Shot => EventAttrs::Shot(ShotAttrs {
                deflected: false,
                on_goal: true,
                goal: false,
                distance_ft: None,
            }),
            EventType::Pass => EventAttrs::Pass(PassAttrs {
                pass_type: PassType::Other,
                linked_reception_id: None,
            }),
            _ => EventAttrs::None,
        };
        Event {
            event_id: id.to_string(),
            game_id: "g1".into(),
            league: "NHL".into(),
            season: "2017-18".into(),
            period: 1,
            t_s: t,
            team_id: team.to_string(),
            player_id: Some(format!("{team}-{id}")),
            event_type: ty,
            point: NormalizedPoint::new(x, y),
            possession_team: Some(team.to_string()),
            manpower: Manpower::EVEN,
            attrs,
        }
    }

    pub fn log(events: Vec<Event>) -> EventLog {
        EventLog::new(events)
    }
}

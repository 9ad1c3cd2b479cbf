//! Reading, writing and validating event, shift and manpower files.
//!
//! Events arrive as CSV or JSON-lines with identical field names (see
//! `docs/schema.md`). Raw coordinates are center-origin rink coordinates;
//! each event is rotated into its team's attacking frame using the
//! [`AttackTable`] on the way in and rotated back on the way out.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{
    EntryAttrs, Event, EventAttrs, EventLog, EventType, ExitAttrs, Manpower, ManpowerInterval, PassAttrs, PassType,
    Shift, ShotAttrs,
};
use crate::rink::{AttackSign, RinkSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    /// Guesses the format from a file extension; anything that is not
    /// `.jsonl`/`.ndjson`/`.json` is read as CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson" | "json") => Format::JsonLines,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json-lines" | "jsonl" => Ok(Format::JsonLines),
            other => Err(Error::Config(format!("unknown input format `{other}`"))),
        }
    }
}

/// Attack direction per (game, team, period).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AttackTable {
    entries: HashMap<(String, String, u32), AttackSign>,
    fallback: Option<AttackSign>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AttackRow {
    game_id: String,
    team_id: String,
    period: u32,
    sign: i64,
}

impl AttackTable {
    /// Every lookup answers +1: the input is already in attacking frames.
    pub fn identity() -> Self {
        Self {
            entries: HashMap::new(),
            fallback: Some(AttackSign::Positive),
        }
    }

    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, game_id: &str, team_id: &str, period: u32, sign: AttackSign) {
        self.entries
            .insert((game_id.to_string(), team_id.to_string(), period), sign);
    }

    pub fn get(&self, game_id: &str, team_id: &str, period: u32) -> Option<AttackSign> {
        self.entries
            .get(&(game_id.to_string(), team_id.to_string(), period))
            .copied()
            .or(self.fallback)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut table = AttackTable::new();
        let mut rdr = csv::Reader::from_reader(reader);
        for (i, row) in rdr.deserialize::<AttackRow>().enumerate() {
            let row = row?;
            let sign = AttackSign::from_factor(row.sign).ok_or_else(|| Error::Bounds {
                line: i + 2,
                field: "sign",
                message: format!("expected 1 or -1, got {}", row.sign),
            })?;
            table.insert(&row.game_id, &row.team_id, row.period, sign);
        }
        Ok(table)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut rows: Vec<_> = self.entries.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        let mut wtr = csv::Writer::from_writer(writer);
        for ((game_id, team_id, period), sign) in rows {
            wtr.serialize(AttackRow {
                game_id: game_id.clone(),
                team_id: team_id.clone(),
                period: *period,
                sign: sign.factor() as i64,
            })?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(File::open(path)?)
    }
}

/// Flat on-disk representation shared by the CSV and JSON-lines formats.
/// Field order is the documented CSV column order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub event_id: String,
    pub game_id: String,
    pub league: String,
    pub season: String,
    pub period: u32,
    pub t_s: f64,
    pub team_id: String,
    #[serde(default)]
    pub player_id: Option<String>,
    pub event_type: String,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub possession_team: Option<String>,
    pub own_skaters: u8,
    pub opp_skaters: u8,
    #[serde(default)]
    pub shot_deflected: Option<bool>,
    #[serde(default)]
    pub shot_on_goal: Option<bool>,
    #[serde(default)]
    pub shot_goal: Option<bool>,
    #[serde(default)]
    pub shot_distance_ft: Option<f64>,
    #[serde(default)]
    pub entry_controlled: Option<bool>,
    #[serde(default)]
    pub entry_attackers: Option<u8>,
    #[serde(default)]
    pub entry_defenders: Option<u8>,
    #[serde(default)]
    pub exit_controlled: Option<bool>,
    #[serde(default)]
    pub pass_type: Option<String>,
    #[serde(default)]
    pub linked_reception_id: Option<String>,
}

pub const EVENT_COLUMNS: [&str; 24] = [
    "event_id",
    "game_id",
    "league",
    "season",
    "period",
    "t_s",
    "team_id",
    "player_id",
    "event_type",
    "x",
    "y",
    "possession_team",
    "own_skaters",
    "opp_skaters",
    "shot_deflected",
    "shot_on_goal",
    "shot_goal",
    "shot_distance_ft",
    "entry_controlled",
    "entry_attackers",
    "entry_defenders",
    "exit_controlled",
    "pass_type",
    "linked_reception_id",
];

fn non_empty(s: Option<String>) -> Option<String> {
    s.filter(|v| !v.is_empty())
}

impl EventRecord {
    fn into_event(self, line: usize, rink: &RinkSpec, attack: &AttackTable) -> Result<Event> {
        let parse_err = |message: String| Error::Parse { line, message };
        let event_type: EventType = self.event_type.parse().map_err(|value| Error::UnknownEventType {
            line,
            value,
        })?;
        if self.event_id.is_empty() {
            return Err(parse_err("empty event_id".into()));
        }
        if self.period < 1 {
            return Err(Error::Bounds {
                line,
                field: "period",
                message: "must be at least 1".into(),
            });
        }
        if !self.t_s.is_finite() || self.t_s < 0.0 {
            return Err(Error::Bounds {
                line,
                field: "t_s",
                message: format!("must be a non-negative time, got {}", self.t_s),
            });
        }
        for (field, n) in [("own_skaters", self.own_skaters), ("opp_skaters", self.opp_skaters)] {
            if !(Manpower::MIN_SKATERS..=Manpower::MAX_SKATERS).contains(&n) {
                return Err(Error::Bounds {
                    line,
                    field,
                    message: format!("{n} skaters is outside 3..=6"),
                });
            }
        }

        let shot = [
            self.shot_deflected.is_some(),
            self.shot_on_goal.is_some(),
            self.shot_goal.is_some(),
        ];
        let entry = [
            self.entry_controlled.is_some(),
            self.entry_attackers.is_some(),
            self.entry_defenders.is_some(),
        ];
        let pass_type = non_empty(self.pass_type);
        let linked = non_empty(self.linked_reception_id);
        let groups: [(&str, EventType, bool, bool); 4] = [
            (
                "shot",
                EventType::Shot,
                shot.iter().any(|&b| b) || self.shot_distance_ft.is_some(),
                shot.iter().all(|&b| b),
            ),
            ("entry", EventType::ZoneEntry, entry.iter().any(|&b| b), entry.iter().all(|&b| b)),
            ("exit", EventType::ZoneExit, self.exit_controlled.is_some(), self.exit_controlled.is_some()),
            ("pass", EventType::Pass, pass_type.is_some() || linked.is_some(), pass_type.is_some()),
        ];
        let mut attrs = EventAttrs::None;
        for (name, ty, any, all) in groups {
            if any && ty != event_type {
                return Err(parse_err(format!("{name} attributes on a {event_type} event")));
            }
            if any && !all {
                return Err(parse_err(format!("incomplete {name} attributes")));
            }
            if !(any && ty == event_type) {
                continue;
            }
            attrs = match ty {
                EventType::Shot => EventAttrs::Shot(ShotAttrs {
                    deflected: self.shot_deflected.unwrap_or_default(),
                    on_goal: self.shot_on_goal.unwrap_or_default(),
                    goal: self.shot_goal.unwrap_or_default(),
                    distance_ft: self.shot_distance_ft,
                }),
                EventType::ZoneEntry => {
                    let (a, d) = (self.entry_attackers.unwrap_or(0), self.entry_defenders.unwrap_or(0));
                    for (field, n) in [("entry_attackers", a), ("entry_defenders", d)] {
                        if n > 5 {
                            return Err(Error::Bounds {
                                line,
                                field,
                                message: format!("{n} is outside 0..=5"),
                            });
                        }
                    }
                    EventAttrs::ZoneEntry(EntryAttrs {
                        controlled: self.entry_controlled.unwrap_or_default(),
                        attackers: a,
                        defenders: d,
                    })
                }
                EventType::ZoneExit => EventAttrs::ZoneExit(ExitAttrs {
                    controlled: self.exit_controlled.unwrap_or_default(),
                }),
                _ => {
                    let raw = pass_type.clone().unwrap_or_default();
                    let pass_type: PassType = raw
                        .parse()
                        .map_err(|v| parse_err(format!("unknown pass_type `{v}`")))?;
                    EventAttrs::Pass(PassAttrs {
                        pass_type,
                        linked_reception_id: linked.clone(),
                    })
                }
            };
        }

        let sign = attack.get(&self.game_id, &self.team_id, self.period).ok_or_else(|| {
            parse_err(format!(
                "no attack direction for game {} team {} period {}",
                self.game_id, self.team_id, self.period
            ))
        })?;
        let point = rink.normalize(self.x, self.y, sign).map_err(|_| Error::EventOutsideRink {
            event_id: self.event_id.clone(),
            x: self.x,
            y: self.y,
        })?;

        Ok(Event {
            event_id: self.event_id,
            game_id: self.game_id,
            league: self.league,
            season: self.season,
            period: self.period,
            t_s: self.t_s,
            team_id: self.team_id,
            player_id: non_empty(self.player_id),
            event_type,
            point,
            possession_team: non_empty(self.possession_team),
            manpower: Manpower::new(self.own_skaters, self.opp_skaters),
            attrs,
        })
    }

    pub fn from_event(e: &Event, sign: AttackSign) -> Self {
        let s = sign.factor();
        let mut rec = EventRecord {
            event_id: e.event_id.clone(),
            game_id: e.game_id.clone(),
            league: e.league.clone(),
            season: e.season.clone(),
            period: e.period,
            t_s: e.t_s,
            team_id: e.team_id.clone(),
            player_id: e.player_id.clone(),
            event_type: e.event_type.as_str().to_string(),
            x: s * e.point.x_north,
            y: s * e.point.y_east,
            possession_team: e.possession_team.clone(),
            own_skaters: e.manpower.own,
            opp_skaters: e.manpower.opp,
            ..Default::default()
        };
        match &e.attrs {
            EventAttrs::None => {}
            EventAttrs::Shot(a) => {
                rec.shot_deflected = Some(a.deflected);
                rec.shot_on_goal = Some(a.on_goal);
                rec.shot_goal = Some(a.goal);
                rec.shot_distance_ft = a.distance_ft;
            }
            EventAttrs::ZoneEntry(a) => {
                rec.entry_controlled = Some(a.controlled);
                rec.entry_attackers = Some(a.attackers);
                rec.entry_defenders = Some(a.defenders);
            }
            EventAttrs::ZoneExit(a) => rec.exit_controlled = Some(a.controlled),
            EventAttrs::Pass(a) => {
                rec.pass_type = Some(a.pass_type.as_str().to_string());
                rec.linked_reception_id = a.linked_reception_id.clone();
            }
        }
        rec
    }
}

pub fn parse_events<R: Read>(reader: R, format: Format, rink: &RinkSpec, attack: &AttackTable) -> Result<EventLog> {
    let events = match format {
        Format::Csv => parse_csv(reader, rink, attack)?,
        Format::JsonLines => parse_json_lines(reader, rink, attack)?,
    };
    Ok(EventLog::new(events))
}

pub fn load_events(path: impl AsRef<Path>, rink: &RinkSpec, attack: &AttackTable) -> Result<EventLog> {
    let path = path.as_ref();
    let file = BufReader::with_capacity(1 << 20, File::open(path)?);
    parse_events(file, Format::from_path(path), rink, attack)
}

fn parse_csv<R: Read>(reader: R, rink: &RinkSpec, attack: &AttackTable) -> Result<Vec<Event>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    for required in EVENT_COLUMNS {
        if !headers.iter().any(|h| h == required) {
            return Err(Error::Parse {
                line: 1,
                message: format!("missing column `{required}`"),
            });
        }
    }
    let mut events = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let more = rdr.read_record(&mut record).map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::Parse {
                line,
                message: e.to_string(),
            }
        })?;
        if !more {
            break;
        }
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let rec: EventRecord = record.deserialize(Some(&headers)).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        events.push(rec.into_event(line, rink, attack)?);
    }
    Ok(events)
}

fn parse_json_lines<R: Read>(reader: R, rink: &RinkSpec, attack: &AttackTable) -> Result<Vec<Event>> {
    let mut events = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: EventRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        events.push(rec.into_event(i + 1, rink, attack)?);
    }
    Ok(events)
}

fn sign_for(attack: &AttackTable, e: &Event) -> Result<AttackSign> {
    attack.get(&e.game_id, &e.team_id, e.period).ok_or_else(|| {
        Error::Config(format!(
            "no attack direction for game {} team {} period {}",
            e.game_id, e.team_id, e.period
        ))
    })
}

/// Writes events back to raw rink coordinates.
pub fn write_events<W: Write>(log: &EventLog, format: Format, attack: &AttackTable, writer: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(writer);
            for e in log.events() {
                wtr.serialize(EventRecord::from_event(e, sign_for(attack, e)?))?;
            }
            wtr.flush()?;
        }
        Format::JsonLines => {
            let mut w = std::io::BufWriter::new(writer);
            for e in log.events() {
                serde_json::to_writer(&mut w, &EventRecord::from_event(e, sign_for(attack, e)?))?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn read_shifts<R: Read>(reader: R) -> Result<Vec<Shift>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<Shift>().enumerate() {
        let shift = row?;
        if !(shift.start_s < shift.end_s) {
            return Err(Error::Bounds {
                line: i + 2,
                field: "end_s",
                message: format!("shift end {} is not after start {}", shift.end_s, shift.start_s),
            });
        }
        out.push(shift);
    }
    Ok(out)
}

pub fn write_shifts<W: Write>(shifts: &[Shift], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for s in shifts {
        wtr.serialize(s)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_manpower<R: Read>(reader: R) -> Result<Vec<ManpowerInterval>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<ManpowerInterval>().enumerate() {
        let iv = row?;
        for (field, n) in [("home_skaters", iv.home_skaters), ("away_skaters", iv.away_skaters)] {
            if !(Manpower::MIN_SKATERS..=Manpower::MAX_SKATERS).contains(&n) {
                return Err(Error::Bounds {
                    line: i + 2,
                    field,
                    message: format!("{n} skaters is outside 3..=6"),
                });
            }
        }
        out.push(iv);
    }
    Ok(out)
}

pub fn write_manpower<W: Write>(intervals: &[ManpowerInterval], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for iv in intervals {
        wtr.serialize(iv)?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    TimestampRegression {
        game_id: String,
        period: u32,
        event_id: String,
        t_s: f64,
        previous_t_s: f64,
    },
    ManpowerMismatch {
        game_id: String,
        event_id: String,
        event: String,
        interval: String,
    },
    ManpowerUncovered {
        game_id: String,
        event_id: String,
    },
    DanglingLink {
        game_id: String,
        event_id: String,
        linked_reception_id: String,
    },
    MissingAttrs {
        game_id: String,
        event_id: String,
        event_type: EventType,
    },
}

impl Finding {
    pub fn game_id(&self) -> &str {
        match self {
            Finding::TimestampRegression { game_id, .. }
            | Finding::ManpowerMismatch { game_id, .. }
            | Finding::ManpowerUncovered { game_id, .. }
            | Finding::DanglingLink { game_id, .. }
            | Finding::MissingAttrs { game_id, .. } => game_id,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn by_game(&self) -> BTreeMap<&str, Vec<&Finding>> {
        let mut out: BTreeMap<&str, Vec<&Finding>> = BTreeMap::new();
        for f in &self.findings {
            out.entry(f.game_id()).or_default().push(f);
        }
        out
    }
}

pub fn validate(log: &EventLog, _shifts: &[Shift], manpower: &[ManpowerInterval]) -> ValidationReport {
    let mut findings = Vec::new();
    let mut intervals: HashMap<(&str, u32), Vec<&ManpowerInterval>> = HashMap::new();
    for iv in manpower {
        intervals.entry((iv.game_id.as_str(), iv.period)).or_default().push(iv);
    }
    let mut games_with_intervals: HashMap<&str, bool> = HashMap::new();
    for iv in manpower {
        games_with_intervals.insert(iv.game_id.as_str(), true);
    }

    let mut last_t: HashMap<(&str, u32), f64> = HashMap::new();
    for e in log.events() {
        let key = (e.game_id.as_str(), e.period);
        if let Some(&prev) = last_t.get(&key) {
            if e.t_s < prev {
                findings.push(Finding::TimestampRegression {
                    game_id: e.game_id.clone(),
                    period: e.period,
                    event_id: e.event_id.clone(),
                    t_s: e.t_s,
                    previous_t_s: prev,
                });
            }
        }
        let prev = last_t.entry(key).or_insert(e.t_s);
        *prev = prev.max(e.t_s);

        if games_with_intervals.contains_key(e.game_id.as_str()) {
            let covering: Vec<Manpower> = intervals
                .get(&key)
                .into_iter()
                .flatten()
                .filter(|iv| iv.start_s <= e.t_s && e.t_s <= iv.end_s)
                .filter_map(|iv| iv.manpower_for(&e.team_id))
                .collect();
            if covering.is_empty() {
                findings.push(Finding::ManpowerUncovered {
                    game_id: e.game_id.clone(),
                    event_id: e.event_id.clone(),
                });
            } else if !covering.contains(&e.manpower) {
                findings.push(Finding::ManpowerMismatch {
                    game_id: e.game_id.clone(),
                    event_id: e.event_id.clone(),
                    event: e.manpower.to_string(),
                    interval: covering[0].to_string(),
                });
            }
        }

        if !e.attrs.matches(e.event_type) {
            findings.push(Finding::MissingAttrs {
                game_id: e.game_id.clone(),
                event_id: e.event_id.clone(),
                event_type: e.event_type,
            });
        }
        if let Some(linked) = e.pass().and_then(|p| p.linked_reception_id.as_ref()) {
            if log.by_id(linked).is_none() {
                findings.push(Finding::DanglingLink {
                    game_id: e.game_id.clone(),
                    event_id: e.event_id.clone(),
                    linked_reception_id: linked.clone(),
                });
            }
        }
    }
    ValidationReport { findings }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "event_id,game_id,league,season,period,t_s,team_id,player_id,event_type,x,y,possession_team,own_skaters,opp_skaters,shot_deflected,shot_on_goal,shot_goal,shot_distance_ft,entry_controlled,entry_attackers,entry_defenders,exit_controlled,pass_type,linked_reception_id\n";

    fn parse(body: &str) -> Result<EventLog> {
        let text = format!("{HEADER}{body}");
        parse_events(text.as_bytes(), Format::Csv, &RinkSpec::NHL, &AttackTable::identity())
    }

    #[test]
    fn empty_stream_gives_empty_log() {
        assert!(parse("").unwrap().is_empty());
        let log = parse_events(&b""[..], Format::JsonLines, &RinkSpec::NHL, &AttackTable::identity()).unwrap();
        assert!(log.is_empty());
    }

    #[test]
    fn single_pass_row_is_normalized() {
        let mut attack = AttackTable::new();
        attack.insert("g1", "A", 1, AttackSign::Negative);
        let text = format!("{HEADER}e1,g1,NHL,2017-18,1,12.5,A,p1,pass,30,10,A,5,5,,,,,,,,,ew,\n");
        let log = parse_events(text.as_bytes(), Format::Csv, &RinkSpec::NHL, &attack).unwrap();
        assert_eq!(log.len(), 1);
        let e = log.get(0);
        assert_eq!((e.point.x_north, e.point.y_east), (-30.0, -10.0));
        assert_eq!(e.pass().unwrap().pass_type, PassType::Ew);
        assert_eq!(e.pass().unwrap().linked_reception_id, None);
    }

    #[test]
    fn manpower_out_of_bounds_names_field() {
        let err = parse("e1,g1,NHL,2017-18,1,1,A,p1,reception,0,0,A,7,5,,,,,,,,,,\n").unwrap_err();
        match err {
            Error::Bounds { field, line, .. } => {
                assert_eq!(field, "own_skaters");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_type_and_outside_rink_errors() {
        let err = parse("e1,g1,NHL,s,1,1,A,p1,dangle,0,0,A,5,5,,,,,,,,,,\n").unwrap_err();
        assert!(matches!(err, Error::UnknownEventType { line: 2, .. }));
        let err = parse("e9,g1,NHL,s,1,1,A,p1,reception,-99,41,A,5,5,,,,,,,,,,\n").unwrap_err();
        match err {
            Error::EventOutsideRink { event_id, .. } => assert_eq!(event_id, "e9"),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse("e1,g1,NHL,s,1,oops,A,p1,reception,0,0,A,5,5,,,,,,,,,,\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn attribute_columns_must_match_type() {
        let err = parse("e1,g1,NHL,s,1,1,A,p1,reception,0,0,A,5,5,true,true,false,,,,,,,\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse("e1,g1,NHL,s,1,1,A,p1,shot,70,0,A,5,5,true,,,,,,,,,\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn missing_attack_entry_is_an_error() {
        let text = format!("{HEADER}e1,g1,NHL,s,1,1,A,p1,reception,0,0,A,5,5,,,,,,,,,,\n");
        let err = parse_events(text.as_bytes(), Format::Csv, &RinkSpec::NHL, &AttackTable::new()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn validate_reports_each_problem_kind() {
        let clean = parse(
            "e1,g1,NHL,s,1,100,A,p1,pass,0,0,A,5,5,,,,,,,,,d2d,e2\n\
             e2,g1,NHL,s,1,101,A,p2,reception,10,0,A,5,5,,,,,,,,,,\n",
        )
        .unwrap();
        assert!(validate(&clean, &[], &[]).is_clean());

        let regress = parse(
            "e1,g1,NHL,s,1,120,A,p1,reception,0,0,A,5,5,,,,,,,,,,\n\
             e2,g1,NHL,s,1,100,A,p2,reception,10,0,A,5,5,,,,,,,,,,\n",
        )
        .unwrap();
        let report = validate(&regress, &[], &[]);
        assert_eq!(report.findings.len(), 1);
        assert!(matches!(report.findings[0], Finding::TimestampRegression { .. }));

        let dangling = parse("e1,g1,NHL,s,1,100,A,p1,pass,0,0,A,5,5,,,,,,,,,d2d,nope\n").unwrap();
        let report = validate(&dangling, &[], &[]);
        assert_eq!(report.findings.len(), 1);
        assert!(matches!(report.findings[0], Finding::DanglingLink { .. }));

        let bare_shot = parse("e1,g1,NHL,s,1,100,A,p1,shot,70,0,A,5,5,,,,,,,,,,\n").unwrap();
        let report = validate(&bare_shot, &[], &[]);
        assert!(matches!(report.findings[0], Finding::MissingAttrs { .. }));
    }

    #[test]
    fn validate_checks_manpower_intervals() {
        let log = parse(
            "e1,g1,NHL,s,1,10,A,p1,reception,0,0,A,5,5,,,,,,,,,,\n\
             e2,g1,NHL,s,1,70,B,q1,reception,0,0,B,4,5,,,,,,,,,,\n\
             e3,g1,NHL,s,1,90,B,q1,reception,0,0,B,5,5,,,,,,,,,,\n",
        )
        .unwrap();
        let iv = |s: f64, e: f64, h: u8, a: u8| ManpowerInterval {
            game_id: "g1".into(),
            period: 1,
            start_s: s,
            end_s: e,
            home_team: "A".into(),
            home_skaters: h,
            away_team: "B".into(),
            away_skaters: a,
        };
        let report = validate(&log, &[], &[iv(0.0, 60.0, 5, 5), iv(60.0, 80.0, 5, 4)]);
        assert_eq!(report.findings.len(), 1, "{report:?}");
        assert!(matches!(report.findings[0], Finding::ManpowerUncovered { .. }));
        let report = validate(&log, &[], &[iv(0.0, 60.0, 5, 5), iv(60.0, 1200.0, 5, 4)]);
        assert_eq!(report.findings.len(), 1);
        assert!(matches!(report.findings[0], Finding::ManpowerMismatch { .. }));
    }
}

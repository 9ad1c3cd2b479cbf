//! Outcome analyses: pace before zone entries and shots, pass speeds by
//! reception outcome, and the league tendency counters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::event::{Event, EventType, Manpower, ManpowerInterval, PassType};
use crate::metrics::{Dimension, GroupBy, GroupKey, SpeedVector};
use crate::pipeline::{Analysis, SequenceKind};
use crate::rink::Zone;
use crate::sequence::{pace_samples, SequenceSpans};
use crate::table::{num, text, Table};

pub const DEFAULT_ENTRY_SHOT_WINDOW_S: f64 = 5.0;
pub const DEFAULT_PRESHOT_WINDOW_S: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DangerClass {
    High,
    Medium,
    Low,
    VeryLow,
}

impl DangerClass {
    pub const ALL: [DangerClass; 4] = [DangerClass::High, DangerClass::Medium, DangerClass::Low, DangerClass::VeryLow];

    pub fn as_str(self) -> &'static str {
        match self {
            DangerClass::High => "High Danger",
            DangerClass::Medium => "Medium Danger",
            DangerClass::Low => "Low Danger",
            DangerClass::VeryLow => "Very Low Danger",
        }
    }
}

impl fmt::Display for DangerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The ten entry types in table order.
pub const ENTRY_TYPES: [&str; 10] = [
    "1-on-0", "3-on-1", "2-on-1", "3-on-2", "1-on-1", "2-on-2", "3-on-3", "1-on-2", "2-on-3", "dump-in",
];

pub fn danger_class(entry_type: &str) -> Option<DangerClass> {
    Some(match entry_type {
        "1-on-0" | "3-on-1" | "2-on-1" => DangerClass::High,
        "3-on-2" | "1-on-1" | "2-on-2" => DangerClass::Medium,
        "3-on-3" | "1-on-2" | "2-on-3" => DangerClass::Low,
        "dump-in" => DangerClass::VeryLow,
        _ => return None,
    })
}

/// `"a-on-d"` for controlled entries, `"dump-in"` otherwise, `"other"` for
/// controlled entries without skater counts.
pub fn entry_type_key(e: &Event) -> Option<String> {
    let a = e.entry()?;
    Some(if !a.controlled {
        "dump-in".to_string()
    } else if a.attackers == 0 && a.defenders == 0 {
        "other".to_string()
    } else {
        format!("{}-on-{}", a.attackers, a.defenders)
    })
}

#[derive(Debug, Clone)]
pub struct EntryOptions {
    pub manpower: Option<Manpower>,
    pub shot_window_s: f64,
}

impl Default for EntryOptions {
    fn default() -> Self {
        Self {
            manpower: Some(Manpower::EVEN),
            shot_window_s: DEFAULT_ENTRY_SHOT_WINDOW_S,
        }
    }
}

/// What happened around one entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryObservation {
    pub event_id: String,
    pub entry_type: String,
    pub shots_on_goal: usize,
    pub goals: usize,
    /// ϕ_T of the possession leading into the entry.
    pub preceding_phi_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryRow {
    pub entry_type: String,
    pub class: Option<DangerClass>,
    pub n: usize,
    pub n_with_shot: usize,
    pub shots_on_goal: usize,
    pub goals: usize,
    pub shot_after_pct: Option<f64>,
    pub shooting_pct: Option<f64>,
    /// Mean preceding ϕ_T over entries where it is defined.
    pub phi_t: Option<f64>,
    pub n_with_pace: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRow {
    pub class: DangerClass,
    pub n: usize,
    pub phi_t: Option<f64>,
    pub n_with_pace: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub observations: Vec<EntryObservation>,
    pub rows: Vec<EntryRow>,
    pub classes: Vec<ClassRow>,
}

pub fn observe_entries(an: &Analysis, opts: &EntryOptions) -> Vec<EntryObservation> {
    let log = &an.log;
    let spans = SequenceSpans::new(&an.standard);
    let mut out = Vec::new();
    for (idx, e) in log.events().iter().enumerate() {
        if e.event_type != EventType::ZoneEntry || opts.manpower.is_some_and(|m| e.manpower != m) {
            continue;
        }
        let Some(entry_type) = entry_type_key(e) else { continue };
        let (mut shots_on_goal, mut goals) = (0, 0);
        for &j in log.window(&e.game_id, e.period, e.t_s, e.t_s + opts.shot_window_s) {
            let s = log.get(j);
            if j <= idx || s.team_id != e.team_id || s.event_type != EventType::Shot {
                continue;
            }
            if let Some(a) = s.shot() {
                if a.on_goal || a.goal {
                    shots_on_goal += 1;
                }
                if a.goal {
                    goals += 1;
                }
            }
        }
        let preceding_phi_t = spans
            .containing(&an.standard, &e.game_id, &e.team_id, idx)
            .and_then(|pos| {
                let samples = pace_samples(&an.standard[pos], log).samples;
                let before = samples.iter().filter(|s| s.to_event(log).t_s <= e.t_s);
                SpeedVector::from_samples(before).phi_t()
            });
        out.push(EntryObservation {
            event_id: e.event_id.clone(),
            entry_type,
            shots_on_goal,
            goals,
            preceding_phi_t,
        });
    }
    out
}

fn pct(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

pub fn entry_table(an: &Analysis, opts: &EntryOptions) -> EntryReport {
    let observations = observe_entries(an, opts);
    let mut by_type: BTreeMap<&str, Vec<&EntryObservation>> = BTreeMap::new();
    for o in &observations {
        by_type.entry(o.entry_type.as_str()).or_default().push(o);
    }
    let mut order: Vec<&str> = ENTRY_TYPES.iter().copied().filter(|t| by_type.contains_key(t)).collect();
    order.extend(by_type.keys().copied().filter(|t| !ENTRY_TYPES.contains(t)));

    let rows: Vec<EntryRow> = order
        .iter()
        .map(|&t| {
            let obs = &by_type[t];
            let n_with_shot = obs.iter().filter(|o| o.shots_on_goal > 0).count();
            let shots: usize = obs.iter().map(|o| o.shots_on_goal).sum();
            let goals: usize = obs.iter().map(|o| o.goals).sum();
            let paces: Vec<f64> = obs.iter().filter_map(|o| o.preceding_phi_t).collect();
            EntryRow {
                entry_type: t.to_string(),
                class: danger_class(t),
                n: obs.len(),
                n_with_shot,
                shots_on_goal: shots,
                goals,
                shot_after_pct: pct(n_with_shot, obs.len()),
                shooting_pct: pct(goals, shots),
                phi_t: mean(&paces),
                n_with_pace: paces.len(),
            }
        })
        .collect();

    let classes = DangerClass::ALL
        .iter()
        .map(|&class| {
            let obs: Vec<&EntryObservation> = observations
                .iter()
                .filter(|o| danger_class(&o.entry_type) == Some(class))
                .collect();
            let paces: Vec<f64> = obs.iter().filter_map(|o| o.preceding_phi_t).collect();
            ClassRow {
                class,
                n: obs.len(),
                phi_t: mean(&paces),
                n_with_pace: paces.len(),
            }
        })
        .collect();

    EntryReport {
        observations,
        rows,
        classes,
    }
}

pub fn entry_report_table(r: &EntryReport) -> Table {
    let mut t = Table::new([
        "entry_type", "n", "shot_after_pct", "shooting_pct", "entry_class", "class_phi_t", "type_phi_t",
    ]);
    let mut class_shown = BTreeSet::new();
    for row in &r.rows {
        let (class_name, class_phi) = match row.class {
            Some(c) if class_shown.insert(c) => {
                let phi = r.classes.iter().find(|x| x.class == c).and_then(|x| x.phi_t);
                (text(c.as_str()), num(phi))
            }
            Some(c) => (text(c.as_str()), num(None)),
            None => (text(""), num(None)),
        };
        t.push(vec![
            text(&row.entry_type),
            row.n.into(),
            num(row.shot_after_pct),
            num(row.shooting_pct),
            class_name,
            class_phi,
            num(row.phi_t),
        ]);
    }
    t
}

#[derive(Debug, Clone)]
pub struct ShotOptions {
    pub manpower: Option<Manpower>,
    pub window_s: f64,
}

impl Default for ShotOptions {
    fn default() -> Self {
        Self {
            manpower: Some(Manpower::EVEN),
            window_s: DEFAULT_PRESHOT_WINDOW_S,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotObservation {
    pub event_id: String,
    pub phi_t: f64,
    pub goal: bool,
    pub distance_ft: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuintileRow {
    pub quintile: usize,
    pub n: usize,
    pub goals: usize,
    pub mean_phi_t: f64,
    pub true_shooting_pct: f64,
    pub mean_distance_ft: f64,
}

/// Non-deflected shots with a defined pre-shot ϕ_T, in log order.
pub fn observe_shots(an: &Analysis, opts: &ShotOptions) -> Vec<ShotObservation> {
    let log = &an.log;
    let spans = SequenceSpans::new(&an.standard);
    let goal = an.rink.attacked_goal();
    let mut out = Vec::new();
    for (idx, e) in log.events().iter().enumerate() {
        let Some(attrs) = e.shot() else { continue };
        if e.event_type != EventType::Shot || attrs.deflected || opts.manpower.is_some_and(|m| e.manpower != m) {
            continue;
        }
        let Some(pos) = spans.containing(&an.standard, &e.game_id, &e.team_id, idx) else {
            continue;
        };
        let samples = pace_samples(&an.standard[pos], log).samples;
        let lo = e.t_s - opts.window_s;
        let inside = samples.iter().filter(|s| {
            let t = s.to_event(log).t_s;
            lo <= t && t <= e.t_s
        });
        let Some(phi_t) = SpeedVector::from_samples(inside).phi_t() else { continue };
        out.push(ShotObservation {
            event_id: e.event_id.clone(),
            phi_t,
            goal: attrs.goal,
            distance_ft: attrs.distance_ft.unwrap_or_else(|| e.point.distance_to(goal)),
        });
    }
    out
}

/// Splits shots into five pace groups of near-equal size.
pub fn quintiles(mut shots: Vec<ShotObservation>) -> Result<Vec<QuintileRow>> {
    if shots.len() < 5 {
        return Err(Error::Analysis(format!(
            "{} eligible shots; at least 5 are needed for quintiles",
            shots.len()
        )));
    }
    shots.sort_by(|a, b| a.phi_t.total_cmp(&b.phi_t).then_with(|| a.event_id.cmp(&b.event_id)));
    let (q, r) = (shots.len() / 5, shots.len() % 5);
    let mut rows = Vec::with_capacity(5);
    let mut start = 0;
    for k in 0..5 {
        let size = q + usize::from(k < r);
        let group = &shots[start..start + size];
        start += size;
        let n = group.len() as f64;
        let goals = group.iter().filter(|s| s.goal).count();
        rows.push(QuintileRow {
            quintile: k + 1,
            n: group.len(),
            goals,
            mean_phi_t: group.iter().map(|s| s.phi_t).sum::<f64>() / n,
            true_shooting_pct: 100.0 * goals as f64 / n,
            mean_distance_ft: group.iter().map(|s| s.distance_ft).sum::<f64>() / n,
        });
    }
    Ok(rows)
}

pub fn preshot_quintiles(an: &Analysis, opts: &ShotOptions) -> Result<Vec<QuintileRow>> {
    quintiles(observe_shots(an, opts))
}

pub fn quintile_table(rows: &[QuintileRow]) -> Table {
    let mut t = Table::new(["quintile", "n", "goals", "true_shooting_pct", "shot_distance_ft", "phi_t"]);
    for r in rows {
        t.push(vec![
            r.quintile.into(),
            r.n.into(),
            r.goals.into(),
            num(r.true_shooting_pct),
            num(r.mean_distance_ft),
            num(r.mean_phi_t),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReceptionOutcome {
    Success,
    Fail,
}

impl ReceptionOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            ReceptionOutcome::Success => "success",
            ReceptionOutcome::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassRow {
    pub pass_type: PassType,
    pub outcome: ReceptionOutcome,
    pub n: usize,
    pub mean_speed: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PassReport {
    pub rows: Vec<PassRow>,
    pub dropped_nonpositive_dt: usize,
    pub unlinked: usize,
}

/// A pass linked to its reception, with the pass speed when defined.
pub struct LinkedPass<'a> {
    pub pass: &'a Event,
    pub reception: &'a Event,
    pub outcome: ReceptionOutcome,
}

impl LinkedPass<'_> {
    /// Straight-line distance in the passer's frame.
    pub fn distance(&self) -> f64 {
        self.pass.point.distance_to(self.reception.point_for(&self.pass.team_id))
    }

    pub fn dt(&self) -> f64 {
        self.reception.t_s - self.pass.t_s
    }

    pub fn speed(&self) -> Option<f64> {
        let dt = self.dt();
        (dt > 0.0).then(|| self.distance() / dt)
    }
}

/// Resolves a pass's linked reception. `Err(())` marks an unlinked pass.
pub fn link_pass<'a>(an: &'a Analysis, pass: &'a Event) -> std::result::Result<LinkedPass<'a>, ()> {
    let id = pass.pass().and_then(|p| p.linked_reception_id.as_deref()).ok_or(())?;
    let reception = an.log.by_id(id).ok_or(())?;
    let outcome = match reception.event_type {
        EventType::Reception => ReceptionOutcome::Success,
        EventType::FailedReception => ReceptionOutcome::Fail,
        _ => return Err(()),
    };
    Ok(LinkedPass {
        pass,
        reception,
        outcome,
    })
}

pub fn pass_reception_speeds(an: &Analysis, manpower: Option<Manpower>) -> PassReport {
    let mut groups: BTreeMap<(PassType, ReceptionOutcome), (usize, f64)> = BTreeMap::new();
    let mut report = PassReport::default();
    for pass in an.log.events() {
        if pass.event_type != EventType::Pass || manpower.is_some_and(|m| pass.manpower != m) {
            continue;
        }
        let Ok(link) = link_pass(an, pass) else {
            report.unlinked += 1;
            continue;
        };
        let Some(speed) = link.speed() else {
            report.dropped_nonpositive_dt += 1;
            continue;
        };
        let ty = pass.pass().map(|p| p.pass_type).unwrap_or(PassType::Other);
        let g = groups.entry((ty, link.outcome)).or_default();
        g.0 += 1;
        g.1 += speed;
    }
    report.rows = groups
        .into_iter()
        .map(|((pass_type, outcome), (n, sum))| PassRow {
            pass_type,
            outcome,
            n,
            mean_speed: sum / n as f64,
        })
        .collect();
    report
}

pub fn pass_table(r: &PassReport) -> Table {
    let mut t = Table::new(["pass_type", "outcome", "n", "mean_speed"]);
    for row in &r.rows {
        t.push(vec![
            text(row.pass_type.as_str()),
            text(row.outcome.as_str()),
            row.n.into(),
            num(row.mean_speed),
        ]);
    }
    t
}

pub const ODD_MAN_RUSHES: [(u8, u8); 4] = [(1, 0), (2, 1), (3, 1), (3, 2)];

pub fn is_odd_man_rush(e: &Event) -> bool {
    e.entry()
        .is_some_and(|a| a.controlled && ODD_MAN_RUSHES.contains(&(a.attackers, a.defenders)))
}

/// Raw counts for one group of the tendency table.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TendencyCounts {
    pub games: BTreeSet<String>,
    pub minutes_5v5: f64,
    /// Indexed by [`Zone::index`].
    pub zone_passes: [u64; 3],
    pub zone_time_min: [f64; 3],
    pub nz_ew_over_10: u64,
    pub nz_ew_over_15: u64,
    pub dz_controlled_exits: u64,
    pub dz_d2d_passes: u64,
    pub dz_stretch_passes: u64,
    pub odd_man_rushes: u64,
}

impl TendencyCounts {
    pub fn n_games(&self) -> usize {
        self.games.len()
    }

    pub fn per_game(&self, v: f64) -> Option<f64> {
        (!self.games.is_empty()).then(|| v / self.games.len() as f64)
    }

    pub fn per_60(&self, v: f64) -> Option<f64> {
        (self.minutes_5v5 > 0.0).then(|| 60.0 * v / self.minutes_5v5)
    }
}

#[derive(Debug, Clone)]
pub struct TendencyOptions {
    pub group_by: GroupBy,
    pub manpower: Option<Manpower>,
}

impl Default for TendencyOptions {
    fn default() -> Self {
        Self {
            group_by: GroupBy::new([Dimension::League, Dimension::Season, Dimension::Period]),
            manpower: Some(Manpower::EVEN),
        }
    }
}

fn event_key(by: &GroupBy, e: &Event) -> GroupKey {
    by.key(&GroupKey {
        league: Some(e.league.clone()),
        season: Some(e.season.clone()),
        period: Some(e.period),
        ..Default::default()
    })
}

pub fn tendency_counters(
    an: &Analysis,
    intervals: &[ManpowerInterval],
    opts: &TendencyOptions,
) -> BTreeMap<GroupKey, TendencyCounts> {
    let by = &opts.group_by;
    let log = &an.log;
    let mut out: BTreeMap<GroupKey, TendencyCounts> = BTreeMap::new();
    let keep = |e: &Event| opts.manpower.is_none_or(|m| e.manpower == m);
    let zone = |p| an.rink.zone_of(p);

    // Every group seen in the log counts its games, even without events
    // passing the filter.
    let mut game_meta: BTreeMap<&str, &Event> = BTreeMap::new();
    for e in log.events() {
        out.entry(event_key(by, e)).or_default().games.insert(e.game_id.clone());
        game_meta.entry(e.game_id.as_str()).or_insert(e);
    }

    for e in log.events().iter().filter(|e| keep(e)) {
        let c = out.entry(event_key(by, e)).or_default();
        match e.event_type {
            EventType::Pass => {
                let z = zone(e.point);
                c.zone_passes[z.index()] += 1;
                if let Some(p) = e.pass() {
                    if z == Zone::DZ && p.pass_type == PassType::D2d {
                        c.dz_d2d_passes += 1;
                    }
                    if z == Zone::DZ && p.pass_type == PassType::Stretch {
                        c.dz_stretch_passes += 1;
                    }
                }
                if let Ok(link) = link_pass(an, e) {
                    let r = link.reception.point_for(&e.team_id);
                    if link.outcome == ReceptionOutcome::Success && z == Zone::NZ && zone(r) == Zone::NZ {
                        let ew = (r.y_east - e.point.y_east).abs();
                        c.nz_ew_over_10 += u64::from(ew > 10.0);
                        c.nz_ew_over_15 += u64::from(ew > 15.0);
                    }
                }
            }
            EventType::ZoneExit if e.exit().is_some_and(|x| x.controlled) => c.dz_controlled_exits += 1,
            EventType::ZoneEntry if is_odd_man_rush(e) => c.odd_man_rushes += 1,
            _ => {}
        }
    }

    for seq in an.sequences(SequenceKind::Zonal) {
        if opts.manpower.is_some_and(|m| seq.manpower != m) {
            continue;
        }
        let first = seq.first_event(log);
        let dt: f64 = an.samples(seq).iter().map(|s| s.dt).sum();
        if let Some(z) = seq.zone {
            out.entry(event_key(by, first)).or_default().zone_time_min[z.index()] += dt / 60.0;
        }
    }

    for iv in intervals.iter().filter(|iv| iv.is_even_strength()) {
        let Some(meta) = game_meta.get(iv.game_id.as_str()) else { continue };
        let key = by.key(&GroupKey {
            league: Some(meta.league.clone()),
            season: Some(meta.season.clone()),
            period: Some(iv.period),
            ..Default::default()
        });
        if let Some(c) = out.get_mut(&key) {
            c.minutes_5v5 += iv.duration_s() / 60.0;
        }
    }
    out
}

pub fn tendency_table(by: &GroupBy, groups: &BTreeMap<GroupKey, TendencyCounts>) -> Table {
    let mut cols: Vec<String> = by.dims().iter().map(|d| d.as_str().to_string()).collect();
    cols.extend(
        [
            "games",
            "minutes_5v5",
            "dz_passes",
            "dz_time_min",
            "nz_passes",
            "nz_time_min",
            "oz_passes",
            "oz_time_min",
            "nz_ew_over_10_per60",
            "nz_ew_over_15_per60",
            "dz_controlled_exits",
            "dz_d2d_passes",
            "dz_stretch_passes",
            "odd_man_rushes",
        ]
        .map(String::from),
    );
    let mut t = Table::new(cols);
    for (k, c) in groups {
        let mut row: Vec<_> = by.dims().iter().map(|&d| text(k.value(d))).collect();
        row.push(c.n_games().into());
        row.push(num(c.minutes_5v5));
        for z in Zone::ALL {
            row.push(num(c.per_game(c.zone_passes[z.index()] as f64)));
            row.push(num(c.per_game(c.zone_time_min[z.index()])));
        }
        row.push(num(c.per_60(c.nz_ew_over_10 as f64)));
        row.push(num(c.per_60(c.nz_ew_over_15 as f64)));
        for v in [c.dz_controlled_exits, c.dz_d2d_passes, c.dz_stretch_passes, c.odd_man_rushes] {
            row.push(num(c.per_game(v as f64)));
        }
        t.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::EventType::*;
    use crate::event::{EntryAttrs, EventAttrs, EventLog, PassAttrs, ShotAttrs};
    use crate::pipeline::AnalysisConfig;
    use crate::rink::RinkSpec;
    use crate::sequence::testutil::ev;

    fn analysis(events: Vec<Event>) -> Analysis {
        Analysis::new(EventLog::new(events), RinkSpec::NHL, AnalysisConfig::default())
    }

    fn entry(id: &str, t: f64, controlled: bool, a: u8, d: u8) -> Event {
        let mut e = ev(id, "A", ZoneEntry, t, 26.0, 0.0);
        e.possession_team = Some("A".into());
        e.attrs = EventAttrs::ZoneEntry(EntryAttrs {
            controlled,
            attackers: a,
            defenders: d,
        });
        e
    }

    fn shot(id: &str, t: f64, on_goal: bool, goal: bool) -> Event {
        let mut e = ev(id, "A", Shot, t, 60.0, 0.0);
        e.attrs = EventAttrs::Shot(ShotAttrs {
            deflected: false,
            on_goal,
            goal,
            distance_ft: None,
        });
        e
    }

    #[test]
    fn danger_mapping_is_total() {
        let classes: Vec<_> = ENTRY_TYPES.iter().map(|t| danger_class(t).unwrap()).collect();
        use DangerClass::*;
        assert_eq!(classes, [High, High, High, Medium, Medium, Medium, Low, Low, Low, VeryLow]);
        assert_eq!(danger_class("2-on-1"), Some(High));
        assert_eq!(danger_class("other"), None);
        assert_eq!(danger_class("4-on-1"), None);
    }

    #[test]
    fn entry_window_and_preceding_pace() {
        let an = analysis(vec![
            ev("1", "A", PuckRecovery, 0.0, -10.0, 0.0),
            ev("2", "A", Pass, 1.0, 10.0, 0.0),
            ev("3", "A", Reception, 2.0, 22.0, 16.0),
            entry("4", 3.0, true, 2, 1),
            ev("5", "A", Pass, 4.0, 40.0, 16.0),
            shot("6", 6.0, true, true),
            shot("7", 8.5, true, false),
            ev("8", "B", PuckRecovery, 9.0, -60.0, 0.0),
            entry("9", 20.0, false, 0, 0),
            entry("10", 30.0, true, 0, 0),
        ]);
        let r = entry_table(&an, &EntryOptions::default());
        let two_on_one = r.rows.iter().find(|x| x.entry_type == "2-on-1").unwrap();
        // Only the shot at 6.0 lies within 5 s of the entry.
        assert_eq!((two_on_one.shots_on_goal, two_on_one.goals), (1, 1));
        assert_eq!(two_on_one.shot_after_pct, Some(100.0));
        assert_eq!(two_on_one.shooting_pct, Some(100.0));
        // Preceding transitions: 20 ft in 1 s, then 20 ft in 1 s.
        assert_eq!(two_on_one.phi_t, Some(20.0));
        assert_eq!(two_on_one.class, Some(DangerClass::High));

        let dump = r.rows.iter().find(|x| x.entry_type == "dump-in").unwrap();
        assert_eq!(dump.phi_t, None);
        assert_eq!(dump.shot_after_pct, Some(0.0));
        assert_eq!(dump.shooting_pct, None);
        assert!(r.rows.iter().any(|x| x.entry_type == "other" && x.class.is_none()));
        let high = r.classes.iter().find(|c| c.class == DangerClass::High).unwrap();
        assert_eq!((high.n, high.phi_t), (1, Some(20.0)));

        let wide = entry_table(
            &an,
            &EntryOptions {
                shot_window_s: 6.0,
                ..Default::default()
            },
        );
        assert_eq!(wide.rows[0].shots_on_goal, 2);
        assert_eq!(wide.rows[0].shooting_pct, Some(50.0));
    }

    fn shot_seq(id: usize, speed: f64, goal: bool) -> Vec<Event> {
        let g = format!("g{id:02}");
        let mut v = vec![
            ev("a", "A", PuckRecovery, 0.0, 30.0, 0.0),
            ev("b", "A", Pass, 1.0, 30.0 + speed, 0.0),
            shot("c", 2.0, true, goal),
            ev("d", "A", Faceoff, 3.0, 0.0, 0.0),
        ];
        for e in &mut v {
            e.game_id = g.clone();
            e.event_id = format!("{g}-{}", e.event_id);
        }
        v
    }

    #[test]
    fn quintile_sizes_and_order() {
        let mut events = Vec::new();
        for i in 0..12 {
            events.extend(shot_seq(i, 5.0 + i as f64, i >= 10));
        }
        let an = analysis(events);
        let rows = preshot_quintiles(&an, &ShotOptions::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [3, 3, 2, 2, 2]);
        assert_eq!(rows[0].mean_phi_t, 6.0);
        assert_eq!(rows[4].true_shooting_pct, 100.0);
        assert_eq!(rows[0].true_shooting_pct, 0.0);
        let goal_x = RinkSpec::NHL.attacked_goal().x_north;
        assert!((rows[2].mean_distance_ft - (goal_x - 60.0)).abs() < 1e-12);

        let few = analysis((0..4).flat_map(|i| shot_seq(i, 10.0, false)).collect());
        assert!(matches!(preshot_quintiles(&few, &ShotOptions::default()), Err(Error::Analysis(_))));

        let same = analysis((0..10).flat_map(|i| shot_seq(i, 10.0, false)).collect());
        let rows = preshot_quintiles(&same, &ShotOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.n == 2 && r.mean_phi_t == 10.0));
    }

    fn pass_to(id: &str, t: f64, x: f64, y: f64, ty: PassType, link: Option<&str>) -> Event {
        let mut e = ev(id, "A", Pass, t, x, y);
        e.attrs = EventAttrs::Pass(PassAttrs {
            pass_type: ty,
            linked_reception_id: link.map(str::to_string),
        });
        e
    }

    #[test]
    fn pass_speed_examples() {
        let an = analysis(vec![
            pass_to("1", 5.0, 0.0, 0.0, PassType::Ew, Some("2")),
            ev("2", "A", Reception, 5.5, 20.0, 15.0),
            pass_to("3", 6.0, 20.0, 15.0, PassType::Ew, Some("4")),
            ev("4", "A", Reception, 6.0, 25.0, 15.0),
            pass_to("5", 7.0, 0.0, 0.0, PassType::Ew, None),
            pass_to("6", 8.0, 0.0, 0.0, PassType::Rim, Some("7")),
            ev("7", "A", FailedReception, 9.0, 10.0, 0.0),
        ]);
        let r = pass_reception_speeds(&an, None);
        assert_eq!(r.dropped_nonpositive_dt, 1);
        assert_eq!(r.unlinked, 1);
        let ew = r.rows.iter().find(|x| x.pass_type == PassType::Ew).unwrap();
        assert_eq!((ew.n, ew.mean_speed, ew.outcome), (1, 50.0, ReceptionOutcome::Success));
        let rim = r.rows.iter().find(|x| x.pass_type == PassType::Rim).unwrap();
        assert_eq!((rim.mean_speed, rim.outcome), (10.0, ReceptionOutcome::Fail));
    }

    #[test]
    fn tendency_examples() {
        let an = analysis(vec![
            pass_to("1", 1.0, 0.0, -6.0, PassType::Ew, Some("2")),
            ev("2", "A", Reception, 2.0, 5.0, 6.0),
            entry("3", 3.0, true, 3, 2),
            entry("4", 4.0, true, 2, 2),
            pass_to("5", 5.0, -60.0, 0.0, PassType::D2d, None),
        ]);
        let opts = TendencyOptions::default();
        let g = tendency_counters(&an, &[], &opts);
        assert_eq!(g.len(), 1);
        let c = g.values().next().unwrap();
        assert_eq!((c.nz_ew_over_10, c.nz_ew_over_15), (1, 0));
        assert_eq!(c.odd_man_rushes, 1);
        assert_eq!(c.zone_passes, [1, 1, 0]);
        assert_eq!(c.dz_d2d_passes, 1);
        assert_eq!(c.per_60(1.0), None);

        let empty = analysis(vec![]);
        assert!(tendency_counters(&empty, &[], &opts).is_empty());
        let t = tendency_table(&opts.group_by, &g);
        assert_eq!(&t.columns[..3], ["league", "season", "period"]);
    }
}

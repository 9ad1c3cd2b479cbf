//! Player pace: individual attribution and with-or-without-you splits.
//!
//! Both analyses read zonal sequences at 5v5 by default. Individual pace
//! splits each transition between the players on its two events;
//! WOWY compares the team's per-sequence pace with and without a player
//! on the ice.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::event::{Manpower, ManpowerInterval, Position, Shift};
use crate::metrics::{merge_aggregates, relative_to, Aggregate, AggregationMode, GroupKey, RelativePace, Speeds, SpeedVector};
use crate::pipeline::{Analysis, SequenceKind};
use crate::rink::Zone;
use crate::table::{num, text, Table};

pub const DEFAULT_MIN_TOI_MIN: f64 = 200.0;

type PlayerKey = (String, String);

/// Shifts indexed by game and player, with each player's team and position.
#[derive(Debug, Clone, Default)]
pub struct ShiftIndex {
    shifts: BTreeMap<(String, String), Vec<Shift>>,
    positions: BTreeMap<PlayerKey, Position>,
    games: BTreeMap<PlayerKey, BTreeSet<String>>,
}

impl ShiftIndex {
    pub fn new(shifts: &[Shift]) -> Self {
        let mut idx = ShiftIndex::default();
        for s in shifts {
            idx.shifts
                .entry((s.game_id.clone(), s.player_id.clone()))
                .or_default()
                .push(s.clone());
            let key = (s.team_id.clone(), s.player_id.clone());
            idx.positions.entry(key.clone()).or_insert(s.position);
            idx.games.entry(key).or_default().insert(s.game_id.clone());
        }
        for v in idx.shifts.values_mut() {
            v.sort_by(|a, b| (a.period, a.start_s).partial_cmp(&(b.period, b.start_s)).unwrap());
        }
        idx
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn position(&self, team: &str, player: &str) -> Option<Position> {
        self.positions.get(&(team.to_string(), player.to_string())).copied()
    }

    /// `(team, player)` pairs with their position, sorted.
    pub fn players(&self) -> impl Iterator<Item = (&PlayerKey, &Position)> {
        self.positions.iter()
    }

    pub fn games_of(&self, team: &str, player: &str) -> Option<&BTreeSet<String>> {
        self.games.get(&(team.to_string(), player.to_string()))
    }

    pub fn on_ice(&self, game: &str, player: &str, period: u32, t: f64) -> bool {
        self.shifts
            .get(&(game.to_string(), player.to_string()))
            .is_some_and(|v| v.iter().any(|s| s.covers(period, t)))
    }

    fn shifts_of(&self, game: &str, player: &str) -> &[Shift] {
        self.shifts
            .get(&(game.to_string(), player.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// 5v5 minutes per `(team, player)`: shift time overlapping even-strength
/// 5v5 intervals.
pub fn toi_5v5(shifts: &[Shift], intervals: &[ManpowerInterval]) -> BTreeMap<PlayerKey, f64> {
    let mut even: BTreeMap<(&str, u32), Vec<(f64, f64)>> = BTreeMap::new();
    for iv in intervals.iter().filter(|iv| iv.is_even_strength()) {
        even.entry((iv.game_id.as_str(), iv.period))
            .or_default()
            .push((iv.start_s, iv.end_s));
    }
    let mut out: BTreeMap<PlayerKey, f64> = BTreeMap::new();
    for s in shifts {
        let overlap: f64 = even
            .get(&(s.game_id.as_str(), s.period))
            .map(|v| {
                v.iter()
                    .map(|&(a, b)| (b.min(s.end_s) - a.max(s.start_s)).max(0.0))
                    .sum()
            })
            .unwrap_or(0.0);
        *out.entry((s.team_id.clone(), s.player_id.clone())).or_default() += overlap / 60.0;
    }
    out
}

/// Individual vectors keyed by team, player and zone, plus the distance and
/// time that could not be attributed because an event had no player.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Attribution {
    pub vectors: Aggregate,
    pub unattributed_d: f64,
    pub unattributed_dt: f64,
    pub total_d: f64,
    pub total_dt: f64,
}

fn key(team: &str, player: &str, zone: Option<Zone>) -> GroupKey {
    GroupKey {
        team: Some(team.to_string()),
        player: Some(player.to_string()),
        zone,
        ..Default::default()
    }
}

pub fn individual_attribution(an: &Analysis, manpower: Option<Manpower>) -> Attribution {
    let shards = an.per_game(SequenceKind::Zonal, |seqs| {
        let mut a = Attribution::default();
        for seq in seqs.iter().filter(|s| manpower.is_none_or(|m| s.manpower == m)) {
            for s in an.samples(seq) {
                a.total_d += s.d_total;
                a.total_dt += s.dt;
                let p = (s.from_player(&an.log), s.to_player(&an.log));
                match p {
                    (Some(x), Some(y)) if x == y => {
                        a.vectors.entry(key(&seq.team_id, x, seq.zone)).or_default().push(&s);
                    }
                    (x, y) => {
                        for who in [x, y] {
                            match who {
                                Some(who) => a
                                    .vectors
                                    .entry(key(&seq.team_id, who, seq.zone))
                                    .or_default()
                                    .push_scaled(&s, 0.5),
                                None => {
                                    a.unattributed_d += 0.5 * s.d_total;
                                    a.unattributed_dt += 0.5 * s.dt;
                                }
                            }
                        }
                    }
                }
            }
        }
        a
    });
    let mut out = Attribution::default();
    let mut parts = Vec::with_capacity(shards.len());
    for s in shards {
        out.unattributed_d += s.unattributed_d;
        out.unattributed_dt += s.unattributed_dt;
        out.total_d += s.total_d;
        out.total_dt += s.total_dt;
        parts.push(s.vectors);
    }
    out.vectors = merge_aggregates(parts);
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum WowyWeighting {
    /// Unweighted mean of per-sequence speeds.
    #[default]
    PerSequence,
    /// Pooled distance over pooled time.
    TimeWeighted,
}

#[derive(Debug, Clone)]
pub struct WowyOptions {
    pub manpower: Option<Manpower>,
    pub weighting: WowyWeighting,
}

impl Default for WowyOptions {
    fn default() -> Self {
        Self {
            manpower: Some(Manpower::EVEN),
            weighting: WowyWeighting::PerSequence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WowyZone {
    pub zone: Zone,
    pub with: Option<Speeds>,
    pub without: Option<Speeds>,
    pub pct: RelativePace,
    pub n_with: usize,
    pub n_without: usize,
    /// On ice for some but not all of the sequence's events.
    pub n_partial: usize,
    /// Sequences without any pace transition.
    pub n_no_pace: usize,
}

impl WowyZone {
    /// Number of team sequences considered in this zone.
    pub fn total(&self) -> usize {
        self.n_with + self.n_without + self.n_partial + self.n_no_pace
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wowy {
    pub team: String,
    pub player: String,
    pub zones: Vec<WowyZone>,
}

impl Wowy {
    pub fn zone(&self, z: Zone) -> &WowyZone {
        &self.zones[z.index()]
    }
}

#[derive(Default)]
struct Split {
    n: usize,
    sums: [f64; 4],
    pooled: SpeedVector,
}

impl Split {
    fn add(&mut self, v: &SpeedVector) {
        let s = v.speeds(AggregationMode::TimeWeighted).expect("sequence with pace");
        for (acc, x) in self.sums.iter_mut().zip(s.as_array()) {
            *acc += x;
        }
        self.n += 1;
        self.pooled.merge(v);
    }

    fn speeds(&self, w: WowyWeighting) -> Option<Speeds> {
        match w {
            WowyWeighting::TimeWeighted => self.pooled.speeds(AggregationMode::TimeWeighted),
            WowyWeighting::PerSequence => (self.n > 0).then(|| {
                let n = self.n as f64;
                Speeds {
                    t: self.sums[0] / n,
                    ew: self.sums[1] / n,
                    ns: self.sums[2] / n,
                    n: self.sums[3] / n,
                }
            }),
        }
    }
}

/// Per-sequence vectors and per-game sequence ranges, computed once and
/// shared across many WOWY queries.
pub struct WowyContext<'a> {
    an: &'a Analysis,
    vectors: Vec<SpeedVector>,
    games: BTreeMap<&'a str, std::ops::Range<usize>>,
}

impl<'a> WowyContext<'a> {
    pub fn new(an: &'a Analysis) -> Self {
        let vectors = an.sequence_vectors(SequenceKind::Zonal);
        let games = an
            .game_ranges(SequenceKind::Zonal)
            .iter()
            .map(|r| (an.zonal[r.start].game_id.as_str(), r.clone()))
            .collect();
        Self { an, vectors, games }
    }

    pub fn wowy(&self, shifts: &ShiftIndex, team: &str, player: &str, opts: &WowyOptions) -> Result<Wowy> {
        let games = shifts
            .games_of(team, player)
            .ok_or_else(|| Error::Analysis(format!("no shifts for player {player} of team {team}")))?;
        let mut with: [Split; 3] = Default::default();
        let mut without: [Split; 3] = Default::default();
        let mut partial = [0usize; 3];
        let mut no_pace = [0usize; 3];
        for g in games {
            let Some(range) = self.games.get(g.as_str()) else { continue };
            let player_shifts = shifts.shifts_of(g, player);
            for i in range.clone() {
                let seq = &self.an.zonal[i];
                if seq.team_id != team || opts.manpower.is_some_and(|m| seq.manpower != m) {
                    continue;
                }
                let z = seq.zone.expect("zonal sequence").index();
                let v = &self.vectors[i];
                if v.speeds(AggregationMode::TimeWeighted).is_none() {
                    no_pace[z] += 1;
                    continue;
                }
                let on = seq
                    .events
                    .iter()
                    .filter(|&&e| {
                        let e = self.an.log.get(e);
                        player_shifts.iter().any(|s| s.covers(e.period, e.t_s))
                    })
                    .count();
                if on == seq.events.len() {
                    with[z].add(v);
                } else if on == 0 {
                    without[z].add(v);
                } else {
                    partial[z] += 1;
                }
            }
        }
        let zones = Zone::ALL
            .iter()
            .map(|&zone| {
                let z = zone.index();
                let w = with[z].speeds(opts.weighting);
                let wo = without[z].speeds(opts.weighting);
                WowyZone {
                    zone,
                    with: w,
                    without: wo,
                    pct: RelativePace::between(w, wo),
                    n_with: with[z].n,
                    n_without: without[z].n,
                    n_partial: partial[z],
                    n_no_pace: no_pace[z],
                }
            })
            .collect();
        Ok(Wowy {
            team: team.to_string(),
            player: player.to_string(),
            zones,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayerPaceRow {
    pub team: String,
    pub player: String,
    pub position: Position,
    pub toi_min: f64,
    /// Indexed by [`Zone::index`].
    pub individual: Vec<RelativePace>,
    pub wowy: Vec<WowyZone>,
}

#[derive(Debug, Clone)]
pub struct PlayerOptions {
    pub min_toi_min: f64,
    pub mode: AggregationMode,
    pub wowy: WowyOptions,
}

impl Default for PlayerOptions {
    fn default() -> Self {
        Self {
            min_toi_min: DEFAULT_MIN_TOI_MIN,
            mode: AggregationMode::TimeWeighted,
            wowy: WowyOptions::default(),
        }
    }
}

/// One row per skater meeting the TOI filter, with individual pace
/// adjusted for team, position and zone, and WOWY differences per zone.
pub fn player_rows(
    an: &Analysis,
    shifts: &[Shift],
    intervals: &[ManpowerInterval],
    opts: &PlayerOptions,
) -> Result<Vec<PlayerPaceRow>> {
    let index = ShiftIndex::new(shifts);
    if index.is_empty() {
        return Err(Error::Analysis("player analytics need shift data".into()));
    }
    let toi = toi_5v5(shifts, intervals);
    let attribution = individual_attribution(an, opts.wowy.manpower);

    let mut baseline: BTreeMap<(String, Position, Zone), SpeedVector> = BTreeMap::new();
    for (k, v) in &attribution.vectors {
        let (Some(team), Some(player), Some(zone)) = (&k.team, &k.player, k.zone) else { continue };
        match index.position(team, player) {
            Some(Position::G) | None => {}
            Some(pos) => baseline.entry((team.clone(), pos, zone)).or_default().merge(v),
        }
    }

    let ctx = WowyContext::new(an);
    let mut rows = Vec::new();
    for ((team, player), &position) in index.players() {
        if position == Position::G {
            continue;
        }
        let toi_min = toi.get(&(team.clone(), player.clone())).copied().unwrap_or(0.0);
        if toi_min < opts.min_toi_min {
            continue;
        }
        let vectors: Vec<SpeedVector> = Zone::ALL
            .iter()
            .map(|&z| attribution.vectors.get(&key(team, player, Some(z))).copied().unwrap_or_default())
            .collect();
        if vectors.iter().all(|v| v.sum_dt <= 0.0) {
            continue;
        }
        let individual = Zone::ALL
            .iter()
            .zip(&vectors)
            .map(|(&z, v)| {
                let base = baseline.get(&(team.clone(), position, z)).copied().unwrap_or_default();
                relative_to(v, &base, opts.mode)
            })
            .collect();
        let wowy = ctx.wowy(&index, team, player, &opts.wowy)?.zones;
        rows.push(PlayerPaceRow {
            team: team.clone(),
            player: player.clone(),
            position,
            toi_min,
            individual,
            wowy,
        });
    }
    Ok(rows)
}

/// Wide table: per zone, individual and WOWY percentages for all four
/// components.
pub fn player_table(rows: &[PlayerPaceRow]) -> Table {
    let mut cols: Vec<String> = ["team", "player", "position", "toi_min"].map(String::from).to_vec();
    for z in Zone::ALL {
        for c in ["t", "ew", "ns", "n"] {
            cols.push(format!("{}_ind_pct_{c}", z.as_str().to_lowercase()));
        }
        for c in ["t", "ew", "ns", "n"] {
            cols.push(format!("{}_wowy_pct_{c}", z.as_str().to_lowercase()));
        }
        cols.push(format!("{}_n_with", z.as_str().to_lowercase()));
        cols.push(format!("{}_n_without", z.as_str().to_lowercase()));
    }
    let mut t = Table::new(cols);
    for r in rows {
        let mut row = vec![text(&r.team), text(&r.player), text(r.position.to_string()), num(r.toi_min)];
        for z in Zone::ALL {
            row.extend(r.individual[z.index()].as_array().map(num));
            let w = &r.wowy[z.index()];
            row.extend(w.pct.as_array().map(num));
            row.push(w.n_with.into());
            row.push(w.n_without.into());
        }
        t.push(row);
    }
    t
}

/// Rows sorted by WOWY ϕ_T % in `zone`, best first; undefined values last.
pub fn ranked(rows: &[PlayerPaceRow], zone: Zone) -> Vec<&PlayerPaceRow> {
    let mut v: Vec<&PlayerPaceRow> = rows.iter().collect();
    let score = |r: &PlayerPaceRow| r.wowy[zone.index()].pct.t;
    v.sort_by(|a, b| match (score(a), score(b)) {
        (Some(x), Some(y)) => y.total_cmp(&x).then_with(|| (&a.team, &a.player).cmp(&(&b.team, &b.player))),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => (&a.team, &a.player).cmp(&(&b.team, &b.player)),
    });
    v
}

/// Top or bottom `n` by WOWY ϕ_T % in `zone`, in the layout of the
/// published player tables.
pub fn wowy_leaderboard(rows: &[PlayerPaceRow], zone: Zone, n: usize, bottom: bool) -> Table {
    let sorted: Vec<&PlayerPaceRow> = ranked(rows, zone)
        .into_iter()
        .filter(|r| r.wowy[zone.index()].pct.t.is_some())
        .collect();
    let picked: Vec<&PlayerPaceRow> = if bottom {
        sorted.iter().rev().take(n).copied().collect()
    } else {
        sorted.into_iter().take(n).collect()
    };
    let mut t = Table::new(["team", "player", "position", "toi_min", "phi_t_pct", "phi_ew_pct", "phi_ns_pct", "phi_n_pct"]);
    for r in picked {
        let mut row = vec![text(&r.team), text(&r.player), text(r.position.to_string()), num(r.toi_min.round())];
        row.extend(r.wowy[zone.index()].pct.as_array().map(num));
        t.push(row);
    }
    t
}

pub fn wowy_table(w: &Wowy) -> Table {
    let mut t = Table::new([
        "team", "player", "zone", "with_t", "with_ew", "with_ns", "with_n", "without_t", "without_ew", "without_ns",
        "without_n", "pct_t", "pct_ew", "pct_ns", "pct_n", "n_with", "n_without", "n_partial", "n_no_pace",
    ]);
    for z in &w.zones {
        let mut row = vec![text(&w.team), text(&w.player), text(z.zone.as_str())];
        row.extend(z.with.map_or([None; 4], |s| s.as_array().map(Some)).map(num));
        row.extend(z.without.map_or([None; 4], |s| s.as_array().map(Some)).map(num));
        row.extend(z.pct.as_array().map(num));
        row.extend([z.n_with, z.n_without, z.n_partial, z.n_no_pace].map(Into::into));
        t.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::EventType::*;
    use crate::event::{Event, EventLog};
    use crate::pipeline::AnalysisConfig;
    use crate::rink::RinkSpec;
    use crate::sequence::testutil::ev;

    fn with_player(mut e: Event, p: Option<&str>) -> Event {
        e.player_id = p.map(str::to_string);
        e
    }

    fn analysis(events: Vec<Event>) -> Analysis {
        Analysis::new(EventLog::new(events), RinkSpec::NHL, AnalysisConfig::default())
    }

    fn shift(game: &str, player: &str, pos: Position, start: f64, end: f64) -> Shift {
        Shift {
            game_id: game.into(),
            player_id: player.into(),
            team_id: "A".into(),
            position: pos,
            period: 1,
            start_s: start,
            end_s: end,
        }
    }

    #[test]
    fn pass_splits_and_carry_is_full() {
        // NZ: pass P1 -> reception P2 (30 ft, 1.5 s), then P2 carries and shoots.
        let an = analysis(vec![
            with_player(ev("1", "A", Pass, 0.0, 0.0, 0.0), Some("P1")),
            with_player(ev("2", "A", Reception, 1.5, 18.0, 24.0), Some("P2")),
            with_player(ev("3", "A", Shot, 3.5, 18.0, 4.0), Some("P2")),
            ev("4", "B", PuckRecovery, 4.0, 0.0, 0.0),
        ]);
        let a = individual_attribution(&an, None);
        let p1 = a.vectors[&key("A", "P1", Some(Zone::NZ))];
        let p2 = a.vectors[&key("A", "P2", Some(Zone::NZ))];
        assert_eq!((p1.sum_d_total, p1.sum_dt), (15.0, 0.75));
        // The transition into the shot is final and carries no pace.
        assert_eq!((p2.sum_d_total, p2.sum_dt), (15.0, 0.75));

        let an = analysis(vec![
            with_player(ev("1", "A", Reception, 0.0, 0.0, 0.0), Some("P2")),
            with_player(ev("2", "A", Pass, 2.0, 20.0, 0.0), Some("P2")),
            with_player(ev("3", "A", Reception, 3.0, 20.0, 10.0), None),
            with_player(ev("4", "A", Pass, 4.0, 20.0, 20.0), Some("P3")),
            ev("5", "A", Faceoff, 5.0, 0.0, 0.0),
        ]);
        let a = individual_attribution(&an, None);
        let p2 = a.vectors[&key("A", "P2", Some(Zone::NZ))];
        assert_eq!((p2.sum_d_total, p2.sum_dt), (20.0 + 5.0, 2.0 + 0.5));
        assert_eq!((a.unattributed_d, a.unattributed_dt), (5.0, 0.5));
        let attributed: f64 = a.vectors.values().map(|v| v.sum_d_total).sum();
        assert_eq!(attributed, a.total_d - a.unattributed_d);
    }

    #[test]
    fn toi_counts_only_5v5_overlap() {
        let shifts = vec![shift("g1", "P1", Position::F, 0.0, 120.0), shift("g1", "P1", Position::F, 200.0, 260.0)];
        let iv = |s, e, h, a| ManpowerInterval {
            game_id: "g1".into(),
            period: 1,
            start_s: s,
            end_s: e,
            home_team: "A".into(),
            home_skaters: h,
            away_team: "B".into(),
            away_skaters: a,
        };
        let toi = toi_5v5(&shifts, &[iv(0.0, 60.0, 5, 5), iv(60.0, 180.0, 5, 4), iv(180.0, 1200.0, 5, 5)]);
        assert_eq!(toi[&("A".to_string(), "P1".to_string())], 2.0);
    }

    /// Three NZ sequences of team A: fast, fast, slow.
    fn wowy_log() -> Vec<Event> {
        let seq = |base: &str, t0: f64, speed: f64| {
            vec![
                ev(&format!("{base}a"), "A", PuckRecovery, t0, 0.0, -20.0),
                ev(&format!("{base}b"), "A", Pass, t0 + 1.0, 0.0, speed - 20.0),
                ev(&format!("{base}c"), "A", Reception, t0 + 2.0, 0.0, 2.0 * speed - 20.0),
                ev(&format!("{base}d"), "A", Faceoff, t0 + 3.0, 0.0, 0.0),
            ]
        };
        let mut v = seq("s1", 0.0, 20.0);
        v.extend(seq("s2", 10.0, 20.0));
        v.extend(seq("s3", 20.0, 16.0));
        v
    }

    #[test]
    fn wowy_splits_and_partition() {
        let an = analysis(wowy_log());
        let shifts = vec![shift("g1", "P1", Position::F, 0.0, 11.5), shift("g1", "X", Position::D, 0.0, 40.0)];
        let idx = ShiftIndex::new(&shifts);
        let ctx = WowyContext::new(&an);
        let w = ctx.wowy(&idx, "A", "P1", &WowyOptions::default()).unwrap();
        let nz = w.zone(Zone::NZ);
        // s1 on ice throughout, s2 partial (shift ends at 11.5), s3 off ice.
        assert_eq!((nz.n_with, nz.n_without, nz.n_partial), (1, 1, 1));
        assert_eq!(nz.with.unwrap().t, 20.0);
        assert_eq!(nz.without.unwrap().t, 16.0);
        assert_eq!(nz.pct.t, Some(25.0));
        assert_eq!(nz.total(), 3);

        let always = ctx.wowy(&idx, "A", "X", &WowyOptions::default()).unwrap();
        let nz = always.zone(Zone::NZ);
        assert_eq!(nz.n_without, 0);
        assert_eq!(nz.pct, RelativePace::UNDEFINED);
        assert!(ctx.wowy(&idx, "A", "nobody", &WowyOptions::default()).is_err());
    }

    #[test]
    fn rows_skip_goalies_and_low_toi() {
        let an = analysis(
            wowy_log()
                .into_iter()
                .map(|e| {
                    let p = if e.event_id.starts_with("s3") { "P2" } else { "P1" };
                    with_player(e, Some(p))
                })
                .collect(),
        );
        let shifts = vec![
            shift("g1", "P1", Position::F, 0.0, 18.0),
            shift("g1", "P2", Position::F, 18.0, 40.0),
            shift("g1", "G1", Position::G, 0.0, 40.0),
        ];
        let iv = ManpowerInterval {
            game_id: "g1".into(),
            period: 1,
            start_s: 0.0,
            end_s: 1200.0,
            home_team: "A".into(),
            home_skaters: 5,
            away_team: "B".into(),
            away_skaters: 5,
        };
        let opts = PlayerOptions {
            min_toi_min: 0.0,
            ..Default::default()
        };
        let rows = player_rows(&an, &shifts, &[iv.clone()], &opts).unwrap();
        let names: Vec<_> = rows.iter().map(|r| r.player.as_str()).collect();
        assert_eq!(names, ["P1", "P2"]);
        let p1 = &rows[0];
        // Same team/position baseline pools P1 (20 ft/s) and P2 (16 ft/s) by time.
        let expected = 100.0 * (20.0 - 56.0 / 3.0) / (56.0 / 3.0);
        assert!((p1.individual[Zone::NZ.index()].t.unwrap() - expected).abs() < 1e-9);
        assert_eq!(p1.wowy[Zone::NZ.index()].pct.t, Some(25.0));

        let strict = player_rows(&an, &shifts, &[iv], &PlayerOptions::default()).unwrap();
        assert!(strict.is_empty());
        let board = wowy_leaderboard(&rows, Zone::NZ, 1, true);
        assert_eq!(board.rows[0][1], text("P2"));
    }
}

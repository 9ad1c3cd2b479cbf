//! Seeded synthetic seasons with a ground-truth ledger.
//!
//! The generator plays out possessions as chains of gain and release events
//! with speeds drawn from per-zone baselines and team multipliers. While it
//! does so it records, by its own bookkeeping, every pace transition the
//! analysis pipeline should later recover, so pipeline aggregates can be
//! compared against known answers.
//!
//! Random numbers come from `ChaCha8Rng` (rand_chacha 0.3) seeded with
//! [`GenConfig::seed`]; generation is single-threaded and byte-for-byte
//! reproducible.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{
    EntryAttrs, Event, EventAttrs, EventLog, EventType, ExitAttrs, Manpower, ManpowerInterval, PassAttrs, PassType,
    Position, ShotAttrs, Shift,
};
use crate::ingest::{write_events, write_manpower, write_shifts, AttackTable, Format};
use crate::rink::{AttackSign, NormalizedPoint, RinkSpec, Zone};

pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamConfig {
    pub id: String,
    /// Speed multipliers for DZ, NZ and OZ.
    #[serde(default = "unit_mult")]
    pub zone_mult: [f64; 3],
}

fn unit_mult() -> [f64; 3] {
    [1.0; 3]
}

impl TeamConfig {
    pub fn new(id: &str) -> Self {
        Self {
            id: id.to_string(),
            zone_mult: unit_mult(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub seed: u64,
    pub n_games: usize,
    pub league: String,
    pub season: String,
    pub rink: RinkSpec,
    pub teams: Vec<TeamConfig>,
    /// ft/s for transitions ending in DZ, NZ and OZ.
    pub base_speed: [f64; 3],
    pub periods: u32,
    pub period_length_s: f64,
    pub max_possessions_per_period: Option<usize>,
    /// Range of puck holders per possession, inclusive.
    pub holders: (usize, usize),
    /// Per-possession speed factor range.
    pub seq_factor: (f64, f64),
    /// Per-transition speed noise range.
    pub noise: (f64, f64),
    pub p_failed_reception: f64,
    /// Share of possession-ending passes that are intercepted unlinked.
    pub p_interception: f64,
    /// Failed receptions travel this much faster than completed ones.
    pub failed_speed_offset: f64,
    pub p_shot_in_oz: f64,
    pub p_deflected: f64,
    pub p_blocked: f64,
    pub p_on_goal: f64,
    pub p_freeze: f64,
    /// Goal probability at the slowest and fastest possession factor.
    pub goal_prob: (f64, f64),
    /// Entry type (`"a-on-d"` or `"dump-in"`) and weight; weights sum to 1.
    pub entry_mix: Vec<(String, f64)>,
    pub p_controlled_exit: f64,
    pub shift_length_s: (f64, f64),
    /// Chance of a penalty at each turnover.
    pub p_penalty: f64,
    pub penalty_length_s: f64,
    /// Speed multiplier applied to moves made by a player.
    pub player_effects: BTreeMap<String, f64>,
    /// Record traversed cells per sample in the ledger (slow).
    pub ledger_cells: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_games: 10,
            league: "SYN".into(),
            season: "2017-18".into(),
            rink: RinkSpec::NHL,
            teams: ["A", "B", "C", "D"].iter().map(|t| TeamConfig::new(t)).collect(),
            base_speed: [20.0, 24.0, 18.0],
            periods: 3,
            period_length_s: 1200.0,
            max_possessions_per_period: None,
            holders: (1, 4),
            seq_factor: (0.7, 1.3),
            noise: (0.8, 1.2),
            p_failed_reception: 0.08,
            p_interception: 0.4,
            failed_speed_offset: 0.2,
            p_shot_in_oz: 0.6,
            p_deflected: 0.1,
            p_blocked: 0.2,
            p_on_goal: 0.7,
            p_freeze: 0.5,
            goal_prob: (0.02, 0.27),
            entry_mix: default_entry_mix(),
            p_controlled_exit: 0.6,
            shift_length_s: (35.0, 55.0),
            p_penalty: 0.01,
            penalty_length_s: 120.0,
            player_effects: BTreeMap::new(),
            ledger_cells: false,
        }
    }
}

fn default_entry_mix() -> Vec<(String, f64)> {
    [
        ("1-on-0", 0.02),
        ("3-on-1", 0.02),
        ("2-on-1", 0.05),
        ("3-on-2", 0.08),
        ("1-on-1", 0.08),
        ("2-on-2", 0.12),
        ("3-on-3", 0.08),
        ("1-on-2", 0.07),
        ("2-on-3", 0.08),
        ("dump-in", 0.40),
    ]
    .iter()
    .map(|(k, w)| (k.to_string(), *w))
    .collect()
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.teams.len() < 2 {
            return bad("at least two teams are required");
        }
        if self.n_games == 0 || self.periods == 0 {
            return bad("n_games and periods must be positive");
        }
        if !(self.period_length_s > 10.0) {
            return bad("period_length_s must exceed 10 s");
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !self.base_speed.iter().all(|&v| positive(v))
            || !self.teams.iter().flat_map(|t| t.zone_mult).all(positive)
            || !self.player_effects.values().all(|&v| positive(v))
        {
            return bad("speeds and multipliers must be positive");
        }
        for (lo, hi) in [self.seq_factor, self.noise, self.shift_length_s] {
            if !(positive(lo) && lo <= hi) {
                return bad("ranges must be positive with lo <= hi");
            }
        }
        if self.holders.0 == 0 || self.holders.0 > self.holders.1 {
            return bad("holders range must satisfy 1 <= min <= max");
        }
        let probs = [
            self.p_failed_reception,
            self.p_interception,
            self.p_shot_in_oz,
            self.p_deflected,
            self.p_blocked,
            self.p_on_goal,
            self.p_freeze,
            self.goal_prob.0,
            self.goal_prob.1,
            self.p_controlled_exit,
            self.p_penalty,
        ];
        if !probs.iter().all(|p| (0.0..=1.0).contains(p)) {
            return bad("probabilities must lie in [0, 1]");
        }
        if self.failed_speed_offset <= -1.0 || self.penalty_length_s <= 0.0 {
            return bad("failed_speed_offset must exceed -1 and penalty_length_s must be positive");
        }
        let total: f64 = self.entry_mix.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-9 || self.entry_mix.iter().any(|(_, w)| *w < 0.0) {
            return bad("entry_mix weights must be non-negative and sum to 1");
        }
        for (k, _) in &self.entry_mix {
            parse_entry_type(k).ok_or_else(|| Error::Config(format!("bad entry type `{k}`")))?;
        }
        self.rink.validate()?;
        let (xm, ym) = self.bounds();
        if xm <= self.rink.blue_line_offset_ft || ym <= 0.0 || !self.rink.contains(xm, ym) {
            return bad("rink too small for the generator's playing box");
        }
        Ok(())
    }

    /// Half-extents of the box the puck stays in.
    fn bounds(&self) -> (f64, f64) {
        (self.rink.half_length() - 12.0, self.rink.half_width() - 6.5)
    }
}

fn parse_entry_type(k: &str) -> Option<EntryAttrs> {
    if k == "dump-in" {
        return Some(EntryAttrs {
            controlled: false,
            attackers: 0,
            defenders: 0,
        });
    }
    let (a, d) = k.split_once("-on-")?;
    Some(EntryAttrs {
        controlled: true,
        attackers: a.parse().ok()?,
        defenders: d.parse().ok()?,
    })
}

/// One expected pace transition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerSample {
    pub game_id: String,
    pub sequence_id: String,
    pub team: String,
    pub opponent: String,
    pub period: u32,
    pub manpower: String,
    /// Zone of the transition's destination.
    pub zone: Zone,
    pub d_total: f64,
    pub d_ew: f64,
    pub d_ns: f64,
    pub d_n: f64,
    pub dt: f64,
    pub from_player: String,
    pub to_player: String,
    pub from: [f64; 2],
    pub to: [f64; 2],
    /// `(cell index, share)` pairs from dense sampling along the segment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<(usize, f64)>>,
}

/// Plain sums for ledger aggregates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LedgerSums {
    pub d_total: f64,
    pub d_ew: f64,
    pub d_ns: f64,
    pub d_n: f64,
    pub dt: f64,
    pub n: u64,
}

impl LedgerSums {
    fn add(&mut self, s: &LedgerSample) {
        self.d_total += s.d_total;
        self.d_ew += s.d_ew;
        self.d_ns += s.d_ns;
        self.d_n += s.d_n;
        self.dt += s.dt;
        self.n += 1;
    }

    fn absorb(&mut self, o: &LedgerSums) {
        self.d_total += o.d_total;
        self.d_ew += o.d_ew;
        self.d_ns += o.d_ns;
        self.d_n += o.d_n;
        self.dt += o.dt;
        self.n += o.n;
    }

    pub fn phi_t(&self) -> Option<f64> {
        (self.dt > 0.0).then(|| self.d_total / self.dt)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TruthLedger {
    pub rng: String,
    pub seed: u64,
    /// Possessions played, one per expected sequence.
    pub possessions: usize,
    pub samples: Vec<LedgerSample>,
}

impl TruthLedger {
    /// Sums grouped by `key`, accumulated per game in sample order and then
    /// combined in game-id order.
    pub fn expected<K: Ord + Clone>(&self, key: impl Fn(&LedgerSample) -> Option<K>) -> BTreeMap<K, LedgerSums> {
        let mut per_game: BTreeMap<&str, BTreeMap<K, LedgerSums>> = BTreeMap::new();
        for s in &self.samples {
            if let Some(k) = key(s) {
                per_game.entry(&s.game_id).or_default().entry(k).or_default().add(s);
            }
        }
        let mut out: BTreeMap<K, LedgerSums> = BTreeMap::new();
        for game in per_game.into_values() {
            for (k, v) in game {
                out.entry(k).or_default().absorb(&v);
            }
        }
        out
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        #[derive(Serialize)]
        struct Header<'a> {
            kind: &'static str,
            rng: &'a str,
            seed: u64,
            possessions: usize,
            samples: usize,
        }
        #[derive(Serialize)]
        struct Expected<'a> {
            kind: &'static str,
            mode: &'static str,
            team: &'a str,
            zone: Option<Zone>,
            #[serde(flatten)]
            sums: LedgerSums,
        }
        #[derive(Serialize)]
        struct Sample<'a> {
            kind: &'static str,
            #[serde(flatten)]
            sample: &'a LedgerSample,
        }
        let header = Header {
            kind: "header",
            rng: &self.rng,
            seed: self.seed,
            possessions: self.possessions,
            samples: self.samples.len(),
        };
        serde_json::to_writer(&mut w, &header)?;
        w.write_all(b"\n")?;
        for s in &self.samples {
            serde_json::to_writer(&mut w, &Sample { kind: "sample", sample: s })?;
            w.write_all(b"\n")?;
        }
        let standard = self.expected(|s| Some(s.team.clone()));
        for (team, sums) in &standard {
            let line = Expected {
                kind: "expected",
                mode: "standard",
                team,
                zone: None,
                sums: *sums,
            };
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")?;
        }
        let zonal = self.expected(|s| Some((s.team.clone(), s.zone)));
        for ((team, zone), sums) in &zonal {
            let line = Expected {
                kind: "expected",
                mode: "zonal",
                team,
                zone: Some(*zone),
                sums: *sums,
            };
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// A generated season.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub events: Vec<Event>,
    pub shifts: Vec<Shift>,
    pub intervals: Vec<ManpowerInterval>,
    pub attack: AttackTable,
    pub ledger: TruthLedger,
}

impl Synthetic {
    pub fn log(&self) -> EventLog {
        EventLog::new(self.events.clone())
    }

    /// Writes `events.<csv|jsonl>`, `shifts.csv`, `manpower.csv`,
    /// `attack.csv` and `ledger.jsonl` into `dir`.
    pub fn write_dir(&self, dir: &Path, format: Format) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let name = match format {
            Format::Csv => "events.csv",
            Format::JsonLines => "events.jsonl",
        };
        let log = self.log();
        let buf = |p: &str| -> Result<BufWriter<File>> { Ok(BufWriter::with_capacity(1 << 20, File::create(dir.join(p))?)) };
        write_events(&log, format, &self.attack, buf(name)?)?;
        write_shifts(&self.shifts, buf("shifts.csv")?)?;
        write_manpower(&self.intervals, buf("manpower.csv")?)?;
        self.attack.write_csv(buf("attack.csv")?)?;
        let mut w = buf("ledger.jsonl")?;
        self.ledger.write_jsonl(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

pub fn generate(cfg: &GenConfig) -> Result<Synthetic> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Synthetic {
        events: Vec::new(),
        shifts: Vec::new(),
        intervals: Vec::new(),
        attack: AttackTable::new(),
        ledger: TruthLedger {
            rng: RNG_NAME.to_string(),
            seed: cfg.seed,
            possessions: 0,
            samples: Vec::new(),
        },
    };
    let n = cfg.teams.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    for g in 0..cfg.n_games {
        let (home, away) = pairs[g % pairs.len()];
        let game_id = format!("G{:05}", g + 1);
        GameGen::new(cfg, &mut rng, game_id, [home, away], &mut out).play();
    }
    Ok(out)
}

fn zone_at(x: f64, blue: f64) -> Zone {
    if x < -blue {
        Zone::DZ
    } else if x > blue {
        Zone::OZ
    } else {
        Zone::NZ
    }
}

fn zone_idx(z: Zone) -> usize {
    match z {
        Zone::DZ => 0,
        Zone::NZ => 1,
        Zone::OZ => 2,
    }
}

/// Cells crossed by a segment with equal shares, found by walking 4,000
/// evenly spaced points along it.
fn sampled_cells(rink: &RinkSpec, a: NormalizedPoint, b: NormalizedPoint) -> Vec<(usize, f64)> {
    let cell = rink.cell_size_ft;
    let cols = (rink.length_ft / cell).ceil() as i64;
    let rows = (rink.width_ft / cell).ceil() as i64;
    let (ox, oy) = (-(cols as f64) * cell / 2.0, -(rows as f64) * cell / 2.0);
    let n = 4000;
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        let x = a.x_north + t * (b.x_north - a.x_north);
        let y = a.y_east + t * (b.y_east - a.y_east);
        let c = (((x - ox) / cell).floor() as i64).clamp(0, cols - 1);
        let r = (((y - oy) / cell).floor() as i64).clamp(0, rows - 1);
        let idx = (r * cols + c) as usize;
        if !seen.contains(&idx) {
            seen.push(idx);
        }
    }
    let share = 1.0 / seen.len() as f64;
    seen.into_iter().map(|c| (c, share)).collect()
}

/// One possession event, as the ledger needs it.
struct Link {
    point: NormalizedPoint,
    t: f64,
    player: String,
}

enum Ending {
    /// The other team gains the puck at `point` (its own frame) after `t`.
    Turnover { point: NormalizedPoint, t: f64 },
    /// Play stopped at `t`; a faceoff follows at `dot` (in the frame of the
    /// team that had the puck).
    Whistle { t: f64, dot: NormalizedPoint },
    PeriodOver,
}

struct Roster {
    forwards: Vec<String>,
    defense: Vec<String>,
    goalie: String,
}

impl Roster {
    fn new(team: &str) -> Self {
        Self {
            forwards: (1..=12).map(|i| format!("{team}-F{i:02}")).collect(),
            defense: (1..=6).map(|i| format!("{team}-D{i:02}")).collect(),
            goalie: format!("{team}-G01"),
        }
    }
}

/// Line changes of one team in one period: `(start, end, group)`.
type Rotation = Vec<(f64, f64, usize)>;

struct GameGen<'a> {
    cfg: &'a GenConfig,
    rng: &'a mut ChaCha8Rng,
    out: &'a mut Synthetic,
    game_id: String,
    teams: [usize; 2],
    rosters: [Roster; 2],
    period: u32,
    f_rot: [Rotation; 2],
    d_rot: [Rotation; 2],
    /// Side short-handed and expiry time.
    penalty: Option<(usize, f64)>,
    interval_start: f64,
    n_events: usize,
    n_possessions: usize,
}

impl<'a> GameGen<'a> {
    fn new(cfg: &'a GenConfig, rng: &'a mut ChaCha8Rng, game_id: String, teams: [usize; 2], out: &'a mut Synthetic) -> Self {
        let rosters = teams.map(|t| Roster::new(&cfg.teams[t].id));
        Self {
            cfg,
            rng,
            out,
            game_id,
            teams,
            rosters,
            period: 0,
            f_rot: [Vec::new(), Vec::new()],
            d_rot: [Vec::new(), Vec::new()],
            penalty: None,
            interval_start: 0.0,
            n_events: 0,
            n_possessions: 0,
        }
    }

    fn team_id(&self, side: usize) -> &str {
        &self.cfg.teams[self.teams[side]].id
    }

    fn play(mut self) {
        for period in 1..=self.cfg.periods {
            self.period = period;
            for side in 0..2 {
                let home_sign = if period % 2 == 1 { AttackSign::Positive } else { AttackSign::Negative };
                let sign = if side == 0 { home_sign } else { home_sign.flipped() };
                let team = self.team_id(side).to_string();
                self.out.attack.insert(&self.game_id, &team, period, sign);
            }
            self.rotations();
            self.play_period();
        }
    }

    fn rotations(&mut self) {
        let len = self.cfg.period_length_s;
        for side in 0..2 {
            for (lines, rot) in [(4usize, 0usize), (3, 1)] {
                let mut v = Vec::new();
                let mut t = 0.0;
                let mut group = 0;
                while t < len {
                    let end = (t + self.rng.gen_range(self.cfg.shift_length_s.0..=self.cfg.shift_length_s.1)).min(len);
                    v.push((t, end, group));
                    t = end;
                    group = (group + 1) % lines;
                }
                let players: Vec<(String, Position)> = if rot == 0 {
                    self.rosters[side].forwards.iter().map(|p| (p.clone(), Position::F)).collect()
                } else {
                    self.rosters[side].defense.iter().map(|p| (p.clone(), Position::D)).collect()
                };
                let per = if rot == 0 { 3 } else { 2 };
                for &(s, e, g) in &v {
                    for (p, pos) in &players[g * per..g * per + per] {
                        self.out.shifts.push(Shift {
                            game_id: self.game_id.clone(),
                            player_id: p.clone(),
                            team_id: self.team_id(side).to_string(),
                            position: *pos,
                            period: self.period,
                            start_s: s,
                            end_s: e,
                        });
                    }
                }
                if rot == 0 {
                    self.f_rot[side] = v;
                } else {
                    self.d_rot[side] = v;
                }
            }
            self.out.shifts.push(Shift {
                game_id: self.game_id.clone(),
                player_id: self.rosters[side].goalie.clone(),
                team_id: self.team_id(side).to_string(),
                position: Position::G,
                period: self.period,
                start_s: 0.0,
                end_s: len,
            });
        }
    }

    fn on_ice(&self, side: usize, t: f64) -> Vec<&str> {
        let group = |rot: &Rotation| rot.iter().find(|(s, e, _)| *s <= t && t <= *e).map_or(0, |r| r.2);
        let f = group(&self.f_rot[side]);
        let d = group(&self.d_rot[side]);
        let r = &self.rosters[side];
        r.forwards[f * 3..f * 3 + 3]
            .iter()
            .chain(&r.defense[d * 2..d * 2 + 2])
            .map(String::as_str)
            .collect()
    }

    fn skater(&mut self, side: usize, t: f64, not: Option<&str>) -> String {
        let pool: Vec<String> = self
            .on_ice(side, t)
            .into_iter()
            .filter(|p| Some(*p) != not)
            .map(str::to_string)
            .collect();
        pool.choose(self.rng).expect("skaters on ice").clone()
    }

    fn manpower(&self, side: usize) -> Manpower {
        match self.penalty {
            Some((short, _)) if short == side => Manpower::new(4, 5),
            Some(_) => Manpower::new(5, 4),
            None => Manpower::EVEN,
        }
    }

    fn close_interval(&mut self, t: f64) {
        let [home, away] = [self.manpower(0).own, self.manpower(1).own];
        self.out.intervals.push(ManpowerInterval {
            game_id: self.game_id.clone(),
            period: self.period,
            start_s: self.interval_start,
            end_s: t,
            home_team: self.team_id(0).to_string(),
            home_skaters: home,
            away_team: self.team_id(1).to_string(),
            away_skaters: away,
        });
        self.interval_start = t;
    }

    #[allow(clippy::too_many_arguments)]
    fn emit(
        &mut self,
        side: usize,
        ty: EventType,
        t: f64,
        point: NormalizedPoint,
        player: Option<String>,
        possession: Option<usize>,
        attrs: EventAttrs,
    ) -> String {
        self.n_events += 1;
        let event_id = format!("{}-{:06}", self.game_id, self.n_events);
        let e = Event {
            event_id: event_id.clone(),
            game_id: self.game_id.clone(),
            league: self.cfg.league.clone(),
            season: self.cfg.season.clone(),
            period: self.period,
            t_s: t,
            team_id: self.team_id(side).to_string(),
            player_id: player,
            event_type: ty,
            point,
            possession_team: possession.map(|s| self.team_id(s).to_string()),
            manpower: self.manpower(side),
            attrs,
        };
        self.out.events.push(e);
        event_id
    }

    fn set_attrs(&mut self, event_id: &str, attrs: EventAttrs) {
        if let Some(e) = self.out.events.iter_mut().rev().find(|e| e.event_id == event_id) {
            e.attrs = attrs;
        }
    }

    fn clamp(&self, x: f64, y: f64) -> NormalizedPoint {
        let (xm, ym) = self.cfg.bounds();
        NormalizedPoint::new(x.clamp(-xm, xm), y.clamp(-ym, ym))
    }

    fn walk(&mut self, p: NormalizedPoint) -> NormalizedPoint {
        for _ in 0..32 {
            let (dx, dy) = (self.rng.gen_range(-10.0..40.0), self.rng.gen_range(-25.0..25.0));
            let q = self.clamp(p.x_north + dx, p.y_east + dy);
            let (dx, dy) = (q.x_north - p.x_north, q.y_east - p.y_east);
            if (dx * dx + dy * dy).sqrt() >= 1.0 {
                return q;
            }
        }
        let back = if p.x_north > 0.0 { -5.0 } else { 5.0 };
        self.clamp(p.x_north + back, p.y_east)
    }

    fn jitter(&mut self, p: NormalizedPoint, r: f64) -> NormalizedPoint {
        let (dx, dy) = (self.rng.gen_range(-r..=r), self.rng.gen_range(-r..=r));
        self.clamp(p.x_north + dx, p.y_east + dy)
    }

    fn speed(&mut self, side: usize, to: NormalizedPoint, factor: f64, mover: &str) -> f64 {
        let z = zone_idx(zone_at(to.x_north, self.cfg.rink.blue_line_offset_ft));
        let noise = self.rng.gen_range(self.cfg.noise.0..=self.cfg.noise.1);
        let effect = self.cfg.player_effects.get(mover).copied().unwrap_or(1.0);
        self.cfg.base_speed[z] * self.cfg.teams[self.teams[side]].zone_mult[z] * factor * noise * effect
    }

    fn dist(a: NormalizedPoint, b: NormalizedPoint) -> f64 {
        let (dx, dy) = (b.x_north - a.x_north, b.y_east - a.y_east);
        (dx * dx + dy * dy).sqrt()
    }

    fn late(&self, t: f64) -> bool {
        t > self.cfg.period_length_s - 1.0
    }

    /// Blue-line events for a move of the puck from `a` to `b`.
    fn crossings(&mut self, side: usize, a: (NormalizedPoint, f64), b: (NormalizedPoint, f64), player: &str) {
        let blue = self.cfg.rink.blue_line_offset_ft;
        let (p, q) = (a.0, b.0);
        let at = |x: f64| {
            let f = (x - p.x_north) / (q.x_north - p.x_north);
            (a.1 + f * (b.1 - a.1), p.y_east + f * (q.y_east - p.y_east))
        };
        if p.x_north < -blue && q.x_north >= -blue {
            let (t, y) = at(-blue);
            let controlled = self.rng.gen_bool(self.cfg.p_controlled_exit);
            let pt = self.clamp(-blue + 0.5, y);
            self.emit(
                side,
                EventType::ZoneExit,
                t,
                pt,
                Some(player.to_string()),
                Some(side),
                EventAttrs::ZoneExit(ExitAttrs { controlled }),
            );
        }
        if p.x_north <= blue && q.x_north > blue {
            let (t, y) = at(blue);
            let pick: f64 = self.rng.gen();
            let mut acc = 0.0;
            let mut chosen = self.cfg.entry_mix.last().map(|(k, _)| k.clone()).unwrap_or_default();
            for (k, w) in &self.cfg.entry_mix {
                acc += w;
                if pick < acc {
                    chosen = k.clone();
                    break;
                }
            }
            let attrs = parse_entry_type(&chosen).expect("validated entry mix");
            let pt = self.clamp(blue + 0.5, y);
            self.emit(
                side,
                EventType::ZoneEntry,
                t,
                pt,
                Some(player.to_string()),
                Some(side),
                EventAttrs::ZoneEntry(attrs),
            );
        }
    }

    fn pass_type(&mut self, zone: Zone) -> PassType {
        use PassType::*;
        let table: &[(PassType, f64)] = match zone {
            Zone::DZ => &[(D2d, 0.3), (Stretch, 0.15), (Outlet, 0.3), (Rim, 0.1), (Other, 0.15)],
            Zone::NZ => &[(Ew, 0.35), (Stretch, 0.15), (Other, 0.5)],
            Zone::OZ => &[(Ew, 0.3), (Slot, 0.25), (D2d, 0.1), (Other, 0.35)],
        };
        let pick: f64 = self.rng.gen();
        let mut acc = 0.0;
        for &(ty, w) in table {
            acc += w;
            if pick < acc {
                return ty;
            }
        }
        Other
    }

    fn play_period(&mut self) {
        self.penalty = None;
        self.interval_start = 0.0;
        let mut possessions = 0;
        let mut side = self.rng.gen_range(0..2usize);
        let mut t = 0.0;
        let mut start = Some(self.faceoff(side, t, NormalizedPoint::new(0.0, 0.0)));
        loop {
            if self.cfg.max_possessions_per_period.is_some_and(|m| possessions >= m) {
                break;
            }
            let Some((p0, t0)) = start.take() else { break };
            if self.late(t0 + 2.0) {
                break;
            }
            // Power plays end at the first possession boundary after expiry.
            if let Some((_, expires)) = self.penalty {
                if t0 >= expires {
                    self.close_interval(t0);
                    self.penalty = None;
                }
            }
            possessions += 1;
            match self.possession(side, p0, t0) {
                Ending::Turnover { point, t: tn } => {
                    t = tn;
                    side = 1 - side;
                    if self.penalty.is_none() && self.rng.gen_bool(self.cfg.p_penalty) && !self.late(t + 3.0) {
                        let short = self.rng.gen_range(0..2usize);
                        let who = self.skater(short, t, None);
                        self.emit(short, EventType::Penalty, t, NormalizedPoint::new(0.0, 0.0), Some(who), None, EventAttrs::None);
                        self.close_interval(t);
                        self.penalty = Some((short, t + self.cfg.penalty_length_s));
                        side = self.rng.gen_range(0..2usize);
                        start = Some(self.faceoff(side, t, NormalizedPoint::new(0.0, 0.0)));
                    } else {
                        start = Some((point, t));
                    }
                }
                Ending::Whistle { t: tw, dot } => {
                    t = tw;
                    let winner = self.rng.gen_range(0..2usize);
                    let dot = if winner == side { dot } else { dot.mirrored() };
                    side = winner;
                    start = Some(self.faceoff(side, t, dot));
                }
                Ending::PeriodOver => break,
            }
        }
        let end = self.cfg.period_length_s;
        let _ = t;
        self.emit(0, EventType::Stoppage, end, NormalizedPoint::new(0.0, 0.0), None, None, EventAttrs::None);
        self.close_interval(end);
    }

    /// Emits a faceoff won by `side` and returns where and when its first
    /// recovery happens.
    fn faceoff(&mut self, side: usize, t: f64, dot: NormalizedPoint) -> (NormalizedPoint, f64) {
        let who = self.skater(side, t, None);
        self.emit(side, EventType::Faceoff, t, dot, Some(who), None, EventAttrs::None);
        let p = self.jitter(dot, 8.0);
        (p, t + self.rng.gen_range(0.5..1.5))
    }

    fn possession(&mut self, side: usize, p0: NormalizedPoint, t0: f64) -> Ending {
        let cfg = self.cfg;
        let opp = 1 - side;
        let factor = self.rng.gen_range(cfg.seq_factor.0..=cfg.seq_factor.1);
        let mut holders = self.rng.gen_range(cfg.holders.0..=cfg.holders.1);
        let mut chain: Vec<Link> = Vec::new();
        let mut holder = self.skater(side, t0, None);
        self.emit(side, EventType::PuckRecovery, t0, p0, Some(holder.clone()), Some(side), EventAttrs::None);
        chain.push(Link {
            point: p0,
            t: t0,
            player: holder.clone(),
        });
        let (mut p, mut t) = (p0, t0);
        let mut blocked_once = false;
        let mut i = 0;
        let blue = cfg.rink.blue_line_offset_ft;

        let ending = loop {
            let last = i + 1 >= holders;
            // The holder moves the puck to where they release it.
            let q = self.walk(p);
            let v = self.speed(side, q, factor, &holder);
            let tq = t + Self::dist(p, q) / v;
            if self.late(tq) {
                break Ending::PeriodOver;
            }
            self.crossings(side, (p, t), (q, tq), &holder);

            if last && zone_at(q.x_north, blue) == Zone::OZ && self.rng.gen_bool(cfg.p_shot_in_oz) {
                let deflected = self.rng.gen_bool(cfg.p_deflected);
                let blocked = self.rng.gen_bool(cfg.p_blocked);
                let on_goal = !blocked && self.rng.gen_bool(cfg.p_on_goal);
                let span = cfg.seq_factor.1 - cfg.seq_factor.0;
                let w = if span > 0.0 { (factor - cfg.seq_factor.0) / span } else { 0.5 };
                let p_goal = cfg.goal_prob.0 + (cfg.goal_prob.1 - cfg.goal_prob.0) * w;
                let goal = on_goal && self.rng.gen_bool(p_goal.clamp(0.0, 1.0));
                let goal_pt = NormalizedPoint::new(cfg.rink.half_length() - cfg.rink.goal_line_offset_ft, 0.0);
                let attrs = EventAttrs::Shot(ShotAttrs {
                    deflected,
                    on_goal,
                    goal,
                    distance_ft: None,
                });
                self.emit(side, EventType::Shot, tq, q, Some(holder.clone()), Some(side), attrs);
                chain.push(Link {
                    point: q,
                    t: tq,
                    player: holder.clone(),
                });
                if blocked {
                    let bp = self.clamp(0.5 * (q.x_north + goal_pt.x_north), 0.5 * q.y_east);
                    let rp = self.jitter(bp, 5.0);
                    let rp = if Self::dist(q, rp) < 1.0 { self.clamp(q.x_north - 3.0, q.y_east) } else { rp };
                    let v = self.speed(side, rp, factor, &holder);
                    let tr = tq + Self::dist(q, rp) / v;
                    let tb = 0.5 * (tq + tr);
                    if self.late(tr) {
                        break Ending::PeriodOver;
                    }
                    let blocker = self.skater(opp, tb, None);
                    self.emit(opp, EventType::Block, tb, bp.mirrored(), Some(blocker), Some(side), EventAttrs::None);
                    if !blocked_once && self.rng.gen_bool(0.5) {
                        blocked_once = true;
                        holder = self.skater(side, tr, None);
                        self.emit(side, EventType::PuckRecovery, tr, rp, Some(holder.clone()), Some(side), EventAttrs::None);
                        chain.push(Link {
                            point: rp,
                            t: tr,
                            player: holder.clone(),
                        });
                        p = rp;
                        t = tr;
                        holders += 1;
                        i += 1;
                        continue;
                    }
                    break Ending::Turnover {
                        point: rp.mirrored(),
                        t: tr,
                    };
                }
                if goal {
                    break Ending::Whistle {
                        t: tq,
                        dot: NormalizedPoint::new(0.0, 0.0),
                    };
                }
                if on_goal {
                    let ts = tq + 0.05;
                    let goalie = self.rosters[opp].goalie.clone();
                    self.emit(opp, EventType::Save, ts, goal_pt.mirrored(), Some(goalie), Some(side), EventAttrs::None);
                    if self.rng.gen_bool(cfg.p_freeze) {
                        let dot = NormalizedPoint::new(goal_pt.x_north - 20.0, if q.y_east >= 0.0 { 22.0 } else { -22.0 });
                        break Ending::Whistle { t: ts, dot };
                    }
                    let rp = self.jitter(NormalizedPoint::new(goal_pt.x_north - 8.0, q.y_east * 0.3), 6.0);
                    break Ending::Turnover {
                        point: rp.mirrored(),
                        t: ts + self.rng.gen_range(0.3..1.2),
                    };
                }
                let behind = self.jitter(NormalizedPoint::new(goal_pt.x_north + 5.0, q.y_east * 0.5), 4.0);
                break Ending::Turnover {
                    point: behind.mirrored(),
                    t: tq + self.rng.gen_range(0.8..2.0),
                };
            }

            // Otherwise the release is a pass.
            let ty = self.pass_type(zone_at(q.x_north, blue));
            let pass_id = self.emit(
                side,
                EventType::Pass,
                tq,
                q,
                Some(holder.clone()),
                Some(side),
                EventAttrs::Pass(PassAttrs {
                    pass_type: ty,
                    linked_reception_id: None,
                }),
            );
            chain.push(Link {
                point: q,
                t: tq,
                player: holder.clone(),
            });
            let r = self.walk(q);
            let v = self.speed(side, r, factor, &holder);
            let receiver = self.skater(side, tq, Some(&holder));
            let failing = last || self.rng.gen_bool(cfg.p_failed_reception);
            if failing && last && self.rng.gen_bool(cfg.p_interception) {
                let ti = tq + Self::dist(q, r) / v;
                if self.late(ti) {
                    break Ending::PeriodOver;
                }
                break Ending::Turnover {
                    point: r.mirrored(),
                    t: ti,
                };
            }
            if failing {
                let tf = tq + Self::dist(q, r) / (v * (1.0 + cfg.failed_speed_offset));
                if self.late(tf) {
                    break Ending::PeriodOver;
                }
                self.crossings(side, (q, tq), (r, tf), &holder);
                let fid = self.emit(side, EventType::FailedReception, tf, r, Some(receiver), Some(side), EventAttrs::None);
                self.set_attrs(
                    &pass_id,
                    EventAttrs::Pass(PassAttrs {
                        pass_type: ty,
                        linked_reception_id: Some(fid),
                    }),
                );
                let rp = self.jitter(r, 4.0);
                break Ending::Turnover {
                    point: rp.mirrored(),
                    t: tf + self.rng.gen_range(0.2..1.0),
                };
            }
            let tr = tq + Self::dist(q, r) / v;
            if self.late(tr) {
                break Ending::PeriodOver;
            }
            self.crossings(side, (q, tq), (r, tr), &holder);
            let rid = self.emit(side, EventType::Reception, tr, r, Some(receiver.clone()), Some(side), EventAttrs::None);
            self.set_attrs(
                &pass_id,
                EventAttrs::Pass(PassAttrs {
                    pass_type: ty,
                    linked_reception_id: Some(rid),
                }),
            );
            chain.push(Link {
                point: r,
                t: tr,
                player: receiver.clone(),
            });
            holder = receiver;
            p = r;
            t = tr;
            i += 1;
        };
        self.record(side, &chain);
        ending
    }

    /// Ledger entries of one possession: every transition but the last.
    fn record(&mut self, side: usize, chain: &[Link]) {
        let seq_id = format!("{}:{:05}", self.game_id, self.n_possessions);
        self.n_possessions += 1;
        self.out.ledger.possessions += 1;
        if chain.len() < 3 {
            return;
        }
        let blue = self.cfg.rink.blue_line_offset_ft;
        let team = self.team_id(side).to_string();
        let opponent = self.team_id(1 - side).to_string();
        let manpower = self.manpower(side).to_string();
        for w in chain[..chain.len() - 1].windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let dx = b.point.x_north - a.point.x_north;
            let dy = b.point.y_east - a.point.y_east;
            let cells = self.cfg.ledger_cells.then(|| sampled_cells(&self.cfg.rink, a.point, b.point));
            self.out.ledger.samples.push(LedgerSample {
                game_id: self.game_id.clone(),
                sequence_id: seq_id.clone(),
                team: team.clone(),
                opponent: opponent.clone(),
                period: self.period,
                manpower: manpower.clone(),
                zone: zone_at(b.point.x_north, blue),
                d_total: (dx * dx + dy * dy).sqrt(),
                d_ew: dy.abs(),
                d_ns: dx.abs(),
                d_n: if dx > 0.0 { dx } else { 0.0 },
                dt: b.t - a.t,
                from_player: a.player.clone(),
                to_player: b.player.clone(),
                from: [a.point.x_north, a.point.y_east],
                to: [b.point.x_north, b.point.y_east],
                cells,
            });
        }
    }
}

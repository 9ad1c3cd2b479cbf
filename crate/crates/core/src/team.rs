//! Team attacking and defending pace against the league average.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::event::Manpower;
use crate::metrics::{relative_to, AggregationMode, Dimension, GroupBy, RelativePace, SpeedVector};
use crate::pipeline::{Analysis, SequenceKind};
use crate::polygrid::{Polygrid, SpeedGrid, DEFAULT_SIGMA};
use crate::rink::Zone;
use crate::table::{num, text, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Attacking,
    Defending,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Attacking, Side::Defending];

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Attacking => "attacking",
            Side::Defending => "defending",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "attacking" => Ok(Side::Attacking),
            "defending" => Ok(Side::Defending),
            other => Err(Error::Config(format!("unknown side `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TeamOptions {
    /// `None` keeps every manpower state.
    pub manpower: Option<Manpower>,
    /// Exclude the subject team from its own baseline.
    pub leave_one_out: bool,
    pub mode: AggregationMode,
}

impl Default for TeamOptions {
    fn default() -> Self {
        Self {
            manpower: Some(Manpower::EVEN),
            leave_one_out: false,
            mode: AggregationMode::TimeWeighted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeamZoneRow {
    pub league: String,
    pub season: String,
    pub team: String,
    pub side: Side,
    pub zone: Zone,
    pub vector: SpeedVector,
    pub baseline: SpeedVector,
    pub pct: RelativePace,
}

type LeagueKey = (String, String, Zone);

/// Attacking and defending vectors per team and zone with percentages
/// against the league's pooled attacking pace.
pub fn team_zonal(an: &Analysis, opts: &TeamOptions) -> Vec<TeamZoneRow> {
    let by = GroupBy::new([
        Dimension::League,
        Dimension::Season,
        Dimension::Team,
        Dimension::Opponent,
        Dimension::Zone,
    ]);
    let agg = an.aggregate(SequenceKind::Zonal, &by, opts.manpower);

    let mut sides: BTreeMap<(LeagueKey, String, Side), SpeedVector> = BTreeMap::new();
    for (k, v) in &agg {
        let (Some(league), Some(season), Some(team), Some(zone)) = (&k.league, &k.season, &k.team, k.zone) else {
            continue;
        };
        let lk = (league.clone(), season.clone(), zone);
        sides.entry((lk.clone(), team.clone(), Side::Attacking)).or_default().merge(v);
        if let Some(opp) = &k.opponent {
            sides.entry((lk, opp.clone(), Side::Defending)).or_default().merge(v);
        }
    }

    // Team vectors merged in team order give the league pool.
    let mut league: BTreeMap<LeagueKey, SpeedVector> = BTreeMap::new();
    for ((lk, _, side), v) in &sides {
        if *side == Side::Attacking {
            league.entry(lk.clone()).or_default().merge(v);
        }
    }

    sides
        .iter()
        .map(|((lk, team, side), v)| {
            let baseline = if opts.leave_one_out {
                sides
                    .iter()
                    .filter(|((k, t, s), _)| k == lk && t != team && *s == Side::Attacking)
                    .fold(SpeedVector::new(), |acc, (_, v)| acc.merged(v))
            } else {
                league[lk]
            };
            TeamZoneRow {
                league: lk.0.clone(),
                season: lk.1.clone(),
                team: team.clone(),
                side: *side,
                zone: lk.2,
                vector: *v,
                baseline,
                pct: relative_to(v, &baseline, opts.mode),
            }
        })
        .collect()
}

pub fn team_table(rows: &[TeamZoneRow], mode: AggregationMode) -> Table {
    let mut t = Table::new([
        "league", "season", "team", "side", "zone", "phi_t", "phi_ew", "phi_ns", "phi_n", "pct_t", "pct_ew", "pct_ns",
        "pct_n", "sum_d_total", "sum_dt", "n_samples",
    ]);
    for r in rows {
        let sp = r.vector.speeds(mode);
        let mut row = vec![
            text(&r.league),
            text(&r.season),
            text(&r.team),
            text(r.side.as_str()),
            text(r.zone.as_str()),
        ];
        row.extend(sp.map_or([None; 4], |s| s.as_array().map(Some)).map(num));
        row.extend(r.pct.as_array().map(num));
        row.extend([num(r.vector.sum_d_total), num(r.vector.sum_dt), r.vector.n_samples.into()]);
        t.push(row);
    }
    t
}

/// Pearson correlation; `None` for fewer than two pairs or zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (xs[i] - mx, ys[i] - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Teams present in both seasons with their ϕ_T percentages, plus the
/// correlation between seasons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Repeatability {
    pub side: Side,
    pub zone: Zone,
    pub season_a: String,
    pub season_b: String,
    pub pairs: Vec<(String, f64, f64)>,
    pub r: Option<f64>,
}

pub fn repeatability(rows: &[TeamZoneRow], side: Side, zone: Zone, season_a: &str, season_b: &str) -> Repeatability {
    let pick = |season: &str| -> BTreeMap<&str, f64> {
        rows.iter()
            .filter(|r| r.side == side && r.zone == zone && r.season == season)
            .filter_map(|r| r.pct.t.map(|p| (r.team.as_str(), p)))
            .collect()
    };
    let (a, b) = (pick(season_a), pick(season_b));
    let pairs: Vec<(String, f64, f64)> = a
        .iter()
        .filter_map(|(t, x)| b.get(t).map(|y| (t.to_string(), *x, *y)))
        .collect();
    let xs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.2).collect();
    Repeatability {
        side,
        zone,
        season_a: season_a.to_string(),
        season_b: season_b.to_string(),
        r: pearson(&xs, &ys),
        pairs,
    }
}

pub fn repeatability_table(reps: &[Repeatability]) -> Table {
    let mut t = Table::new(["side", "zone", "team", "season_a", "pct_t_a", "season_b", "pct_t_b", "pearson_r"]);
    for rep in reps {
        for (team, a, b) in &rep.pairs {
            t.push(vec![
                text(rep.side.as_str()),
                text(rep.zone.as_str()),
                text(team),
                text(&rep.season_a),
                num(*a),
                text(&rep.season_b),
                num(*b),
                num(rep.r),
            ]);
        }
    }
    t
}

#[derive(Debug, Clone)]
pub struct GridOptions {
    pub manpower: Option<Manpower>,
    /// Cells with less accumulated time are masked.
    pub tau: f64,
    pub smooth: bool,
    pub sigma: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            manpower: Some(Manpower::EVEN),
            tau: 60.0,
            smooth: true,
            sigma: DEFAULT_SIGMA,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TeamGrid {
    pub team: String,
    pub side: Side,
    pub team_grid: Polygrid,
    pub league_grid: Polygrid,
    /// Team minus league, per cell.
    pub diff: SpeedGrid,
}

/// League polygrid in the attacking frame, or mirrored for defending views.
pub fn league_polygrid(an: &Analysis, side: Side, manpower: Option<Manpower>) -> Result<Polygrid> {
    an.grid(
        |s| manpower.is_none_or(|m| s.manpower == m),
        side == Side::Defending,
    )
}

/// Team grid against the league. Defending grids hold the opponents'
/// samples mirrored so the team's own DZ sits on the left.
pub fn team_polygrid(an: &Analysis, team: &str, side: Side, opts: &GridOptions) -> Result<TeamGrid> {
    let league_grid = league_polygrid(an, side, opts.manpower)?;
    team_polygrid_with(an, team, side, opts, league_grid)
}

pub fn team_polygrid_with(
    an: &Analysis,
    team: &str,
    side: Side,
    opts: &GridOptions,
    league_grid: Polygrid,
) -> Result<TeamGrid> {
    let mp = opts.manpower;
    let team_grid = match side {
        Side::Attacking => an.grid(|s| s.team_id == team && mp.is_none_or(|m| s.manpower == m), false)?,
        Side::Defending => an.grid(
            |s| an.opponent(&s.game_id, &s.team_id) == Some(team) && mp.is_none_or(|m| s.manpower == m),
            true,
        )?,
    };
    let diff = team_grid
        .speeds(opts.tau)
        .diff_with(&league_grid.speeds(opts.tau), opts.smooth.then_some(opts.sigma))?;
    Ok(TeamGrid {
        team: team.to_string(),
        side,
        team_grid,
        league_grid,
        diff,
    })
}

/// Teams appearing in the log, sorted.
pub fn teams(an: &Analysis) -> Vec<String> {
    let mut v: Vec<String> = an.log.events().iter().map(|e| e.team_id.clone()).collect();
    v.sort();
    v.dedup();
    v
}

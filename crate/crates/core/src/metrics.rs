//! Speed aggregation over arbitrary grouping dimensions.
//!
//! [`SpeedVector`] is a commutative monoid over distance and time sums, so
//! shards aggregate independently and merge in any order. Speeds are
//! derived on demand, time-weighted (`Σd / Σdt`) unless the mean of
//! per-transition speeds is requested.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::event::{Manpower, Position};
use crate::rink::Zone;
use crate::sequence::PaceSample;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum AggregationMode {
    #[default]
    TimeWeighted,
    MeanOfSpeeds,
}

/// The four pace components in ft/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Speeds {
    pub t: f64,
    pub ew: f64,
    pub ns: f64,
    pub n: f64,
}

impl Speeds {
    pub fn as_array(&self) -> [f64; 4] {
        [self.t, self.ew, self.ns, self.n]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SpeedVector {
    pub sum_d_total: f64,
    pub sum_d_ew: f64,
    pub sum_d_ns: f64,
    pub sum_d_n: f64,
    pub sum_dt: f64,
    /// Weighted sums of per-transition speeds, for the mean-of-speeds mode.
    pub sum_v: [f64; 4],
    pub sum_w: f64,
    pub n_samples: u64,
}

impl SpeedVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_samples<'a>(samples: impl IntoIterator<Item = &'a PaceSample>) -> Self {
        let mut v = Self::new();
        for s in samples {
            v.push(s);
        }
        v
    }

    pub fn push(&mut self, s: &PaceSample) {
        self.push_scaled(s, 1.0);
    }

    /// Adds a fraction `w` of a sample's distance and time. Speeds of the
    /// transition are unchanged by the split.
    pub fn push_scaled(&mut self, s: &PaceSample, w: f64) {
        self.sum_d_total += w * s.d_total;
        self.sum_d_ew += w * s.d_ew;
        self.sum_d_ns += w * s.d_ns;
        self.sum_d_n += w * s.d_n;
        self.sum_dt += w * s.dt;
        if s.dt > 0.0 {
            let inv = 1.0 / s.dt;
            self.sum_v[0] += w * s.d_total * inv;
            self.sum_v[1] += w * s.d_ew * inv;
            self.sum_v[2] += w * s.d_ns * inv;
            self.sum_v[3] += w * s.d_n * inv;
            self.sum_w += w;
        }
        self.n_samples += 1;
    }

    pub fn merge(&mut self, other: &SpeedVector) {
        self.sum_d_total += other.sum_d_total;
        self.sum_d_ew += other.sum_d_ew;
        self.sum_d_ns += other.sum_d_ns;
        self.sum_d_n += other.sum_d_n;
        self.sum_dt += other.sum_dt;
        for k in 0..4 {
            self.sum_v[k] += other.sum_v[k];
        }
        self.sum_w += other.sum_w;
        self.n_samples += other.n_samples;
    }

    pub fn merged(mut self, other: &SpeedVector) -> Self {
        self.merge(other);
        self
    }

    /// `None` when no time has accumulated.
    pub fn speeds(&self, mode: AggregationMode) -> Option<Speeds> {
        match mode {
            AggregationMode::TimeWeighted => (self.sum_dt > 0.0).then(|| Speeds {
                t: self.sum_d_total / self.sum_dt,
                ew: self.sum_d_ew / self.sum_dt,
                ns: self.sum_d_ns / self.sum_dt,
                n: self.sum_d_n / self.sum_dt,
            }),
            AggregationMode::MeanOfSpeeds => (self.sum_w > 0.0).then(|| Speeds {
                t: self.sum_v[0] / self.sum_w,
                ew: self.sum_v[1] / self.sum_w,
                ns: self.sum_v[2] / self.sum_w,
                n: self.sum_v[3] / self.sum_w,
            }),
        }
    }

    pub fn phi_t(&self) -> Option<f64> {
        self.speeds(AggregationMode::TimeWeighted).map(|s| s.t)
    }
}

/// Percent differences against a baseline; `None` marks a component whose
/// baseline is zero or undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelativePace {
    pub t: Option<f64>,
    pub ew: Option<f64>,
    pub ns: Option<f64>,
    pub n: Option<f64>,
}

impl RelativePace {
    pub const UNDEFINED: RelativePace = RelativePace {
        t: None,
        ew: None,
        ns: None,
        n: None,
    };

    pub fn as_array(&self) -> [Option<f64>; 4] {
        [self.t, self.ew, self.ns, self.n]
    }

    pub fn between(a: Option<Speeds>, baseline: Option<Speeds>) -> RelativePace {
        let (Some(a), Some(b)) = (a, baseline) else {
            return Self::UNDEFINED;
        };
        let pct = |x: f64, base: f64| (base != 0.0 && base.is_finite()).then(|| 100.0 * (x - base) / base);
        RelativePace {
            t: pct(a.t, b.t),
            ew: pct(a.ew, b.ew),
            ns: pct(a.ns, b.ns),
            n: pct(a.n, b.n),
        }
    }
}

pub fn relative_to(a: &SpeedVector, baseline: &SpeedVector, mode: AggregationMode) -> RelativePace {
    RelativePace::between(a.speeds(mode), baseline.speeds(mode))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Dimension {
    League,
    Season,
    Team,
    Opponent,
    Zone,
    Period,
    Manpower,
    Player,
    Position,
}

impl Dimension {
    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::League => "league",
            Dimension::Season => "season",
            Dimension::Team => "team",
            Dimension::Opponent => "opponent",
            Dimension::Zone => "zone",
            Dimension::Period => "period",
            Dimension::Manpower => "manpower",
            Dimension::Player => "player",
            Dimension::Position => "position",
        }
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "league" => Dimension::League,
            "season" => Dimension::Season,
            "team" => Dimension::Team,
            "opponent" => Dimension::Opponent,
            "zone" => Dimension::Zone,
            "period" => Dimension::Period,
            "manpower" => Dimension::Manpower,
            "player" => Dimension::Player,
            "position" => Dimension::Position,
            other => return Err(Error::Config(format!("unknown grouping dimension `{other}`"))),
        })
    }
}

/// A set of grouping dimensions, kept in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupBy(Vec<Dimension>);

impl GroupBy {
    pub fn new(dims: impl IntoIterator<Item = Dimension>) -> Self {
        let mut v: Vec<_> = dims.into_iter().collect();
        v.sort();
        v.dedup();
        Self(v)
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.0
    }

    pub fn contains(&self, d: Dimension) -> bool {
        self.0.contains(&d)
    }

    pub fn key(&self, ctx: &GroupKey) -> GroupKey {
        let keep = |d| self.contains(d);
        GroupKey {
            league: ctx.league.clone().filter(|_| keep(Dimension::League)),
            season: ctx.season.clone().filter(|_| keep(Dimension::Season)),
            team: ctx.team.clone().filter(|_| keep(Dimension::Team)),
            opponent: ctx.opponent.clone().filter(|_| keep(Dimension::Opponent)),
            zone: ctx.zone.filter(|_| keep(Dimension::Zone)),
            period: ctx.period.filter(|_| keep(Dimension::Period)),
            manpower: ctx.manpower.filter(|_| keep(Dimension::Manpower)),
            player: ctx.player.clone().filter(|_| keep(Dimension::Player)),
            position: ctx.position.filter(|_| keep(Dimension::Position)),
        }
    }
}

impl FromStr for GroupBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupBy::new(dims))
    }
}

impl fmt::Display for GroupBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.iter().map(|d| d.as_str()).collect();
        f.write_str(&names.join(","))
    }
}

/// Values of the grouping dimensions; unused dimensions stay `None`. A
/// fully populated key doubles as the context of a sample.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupKey {
    pub league: Option<String>,
    pub season: Option<String>,
    pub team: Option<String>,
    pub opponent: Option<String>,
    pub zone: Option<Zone>,
    pub period: Option<u32>,
    pub manpower: Option<Manpower>,
    pub player: Option<String>,
    pub position: Option<Position>,
}

impl GroupKey {
    pub fn value(&self, d: Dimension) -> String {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        match d {
            Dimension::League => opt(&self.league),
            Dimension::Season => opt(&self.season),
            Dimension::Team => opt(&self.team),
            Dimension::Opponent => opt(&self.opponent),
            Dimension::Zone => self.zone.map(|z| z.to_string()).unwrap_or_default(),
            Dimension::Period => self.period.map(|p| p.to_string()).unwrap_or_default(),
            Dimension::Manpower => self.manpower.map(|m| m.to_string()).unwrap_or_default(),
            Dimension::Player => opt(&self.player),
            Dimension::Position => self.position.map(|p| p.to_string()).unwrap_or_default(),
        }
    }
}

pub type Aggregate = BTreeMap<GroupKey, SpeedVector>;

pub fn aggregate<'a>(samples: impl IntoIterator<Item = (GroupKey, &'a PaceSample)>) -> Aggregate {
    let mut out = Aggregate::new();
    for (key, s) in samples {
        out.entry(key).or_default().push(s);
    }
    out
}

/// Merges shard aggregates in the order given.
pub fn merge_aggregates(shards: impl IntoIterator<Item = Aggregate>) -> Aggregate {
    let mut out = Aggregate::new();
    for shard in shards {
        for (k, v) in shard {
            out.entry(k).or_default().merge(&v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rink::NormalizedPoint;
    use proptest::prelude::*;

    fn sample(dx: f64, dy: f64, dt: f64) -> PaceSample {
        PaceSample {
            d_total: (dx * dx + dy * dy).sqrt(),
            d_ew: dy.abs(),
            d_ns: dx.abs(),
            d_n: dx.max(0.0),
            dt,
            from_idx: 0,
            to_idx: 1,
            from: NormalizedPoint::default(),
            to: NormalizedPoint::new(dx, dy),
        }
    }

    #[test]
    fn single_sample_speed() {
        let v = SpeedVector::from_samples(&[sample(30.0, 40.0, 2.0)]);
        assert_eq!(v.phi_t(), Some(25.0));
    }

    #[test]
    fn time_weighted_is_not_mean_of_speeds() {
        let v = SpeedVector::from_samples(&[sample(50.0, 0.0, 2.0), sample(10.0, 0.0, 8.0)]);
        assert_eq!(v.phi_t(), Some(6.0));
        let mean = v.speeds(AggregationMode::MeanOfSpeeds).unwrap().t;
        assert_eq!(mean, (25.0 + 1.25) / 2.0);
    }

    #[test]
    fn empty_group_is_undefined() {
        let v = SpeedVector::new();
        assert_eq!(v.speeds(AggregationMode::TimeWeighted), None);
        assert_eq!(v.n_samples, 0);
    }

    #[test]
    fn relative_percentages() {
        let s = |t, n| Speeds { t, ew: t, ns: t, n };
        let r = RelativePace::between(Some(s(20.0, 6.5)), Some(s(20.0, 10.0)));
        assert!((r.n.unwrap() + 35.0).abs() < 1e-12);
        assert_eq!(r.t, Some(0.0));
        let r = RelativePace::between(Some(s(6.0, 1.0)), Some(s(5.0, 0.0)));
        assert!((r.t.unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(r.n, None);
        assert_eq!(RelativePace::between(Some(s(1.0, 1.0)), None), RelativePace::UNDEFINED);
    }

    #[test]
    fn group_by_parsing_and_projection() {
        let g: GroupBy = "zone, team,zone".parse().unwrap();
        assert_eq!(g.dims(), &[Dimension::Team, Dimension::Zone]);
        assert_eq!(g.to_string(), "team,zone");
        assert!("speed".parse::<GroupBy>().is_err());
        let ctx = GroupKey {
            league: Some("NHL".into()),
            team: Some("A".into()),
            zone: Some(Zone::OZ),
            period: Some(2),
            ..Default::default()
        };
        let k = g.key(&ctx);
        assert_eq!(k.team.as_deref(), Some("A"));
        assert_eq!(k.zone, Some(Zone::OZ));
        assert_eq!(k.league, None);
        assert_eq!(k.period, None);
    }

    fn arb_samples() -> impl Strategy<Value = Vec<(u8, PaceSample)>> {
        proptest::collection::vec(
            (0u8..4, -80.0f64..80.0, -40.0f64..40.0, 0.05f64..6.0).prop_map(|(g, dx, dy, dt)| (g, sample(dx, dy, dt))),
            0..200,
        )
    }

    fn key(g: u8) -> GroupKey {
        GroupKey {
            period: Some(g as u32),
            ..Default::default()
        }
    }

    proptest! {
        #[test]
        fn sharded_merge_matches_single_pass(items in arb_samples(), cut in 0usize..200) {
            let single = aggregate(items.iter().map(|(g, s)| (key(*g), s)));
            let cut = cut.min(items.len());
            let left = aggregate(items[..cut].iter().map(|(g, s)| (key(*g), s)));
            let right = aggregate(items[cut..].iter().map(|(g, s)| (key(*g), s)));
            let lr = merge_aggregates([left.clone(), right.clone()]);
            let rl = merge_aggregates([right, left]);
            prop_assert_eq!(lr.keys().collect::<Vec<_>>(), single.keys().collect::<Vec<_>>());
            for (k, v) in &single {
                for other in [&lr[k], &rl[k]] {
                    prop_assert_eq!(other.n_samples, v.n_samples);
                    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
                    prop_assert!(close(other.sum_d_total, v.sum_d_total));
                    prop_assert!(close(other.sum_dt, v.sum_dt));
                    prop_assert!(close(other.sum_d_n, v.sum_d_n));
                }
            }
            // Same canonical merge order twice is bit-exact.
            let again = merge_aggregates([
                aggregate(items[..cut].iter().map(|(g, s)| (key(*g), s))),
                aggregate(items[cut..].iter().map(|(g, s)| (key(*g), s))),
            ]);
            prop_assert_eq!(again, lr);
        }

        #[test]
        fn component_ordering_and_scaling(items in arb_samples(), c in 0.1f64..10.0) {
            prop_assume!(!items.is_empty());
            let v = SpeedVector::from_samples(items.iter().map(|(_, s)| s));
            let sp = v.speeds(AggregationMode::TimeWeighted).unwrap();
            prop_assert!(sp.n <= sp.ns && sp.ns <= sp.t && sp.ew <= sp.t);

            let slowed: Vec<_> = items.iter().map(|(_, s)| PaceSample { dt: s.dt * c, ..*s }).collect();
            let slow = SpeedVector::from_samples(&slowed).speeds(AggregationMode::TimeWeighted).unwrap();
            prop_assert!((slow.t * c - sp.t).abs() <= 1e-9 * sp.t.max(1e-12));

            let scaled: Vec<_> = items.iter().map(|(_, s)| sample(s.to.x_north * c, s.to.y_east * c, s.dt)).collect();
            let fast = SpeedVector::from_samples(&scaled).speeds(AggregationMode::TimeWeighted).unwrap();
            prop_assert!((fast.t - c * sp.t).abs() <= 1e-9 * (c * sp.t).max(1e-12));
            prop_assert!((fast.n - c * sp.n).abs() <= 1e-9 * (c * sp.t).max(1e-12));
        }
    }
}

//! Shared analysis context: a loaded log with its standard and zonal
//! sequences, plus game-sharded aggregation helpers.
//!
//! Every sharded computation evaluates games in parallel and merges the
//! shard results in game-id order, so outputs do not depend on the number
//! of worker threads.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::Result;
use crate::event::{EventLog, Manpower};
use crate::metrics::{merge_aggregates, Aggregate, AggregationMode, GroupBy, GroupKey, SpeedVector};
use crate::polygrid::{Allocation, GridLayout, Polygrid};
use crate::rink::RinkSpec;
use crate::sequence::{build_sequences, pace_samples, split_by_zone, PaceSample, PossessionSequence, SequenceConfig};

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub sequence: SequenceConfig,
    pub mode: AggregationMode,
    pub allocation: Allocation,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            sequence: SequenceConfig::default(),
            mode: AggregationMode::TimeWeighted,
            allocation: Allocation::Equal,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub log: EventLog,
    pub rink: RinkSpec,
    pub config: AnalysisConfig,
    pub standard: Vec<PossessionSequence>,
    pub zonal: Vec<PossessionSequence>,
    standard_games: Vec<Range<usize>>,
    zonal_games: Vec<Range<usize>>,
    opponents: BTreeMap<(String, String), String>,
}

/// Which sequences to read samples from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    Standard,
    Zonal,
}

impl Analysis {
    pub fn new(log: EventLog, rink: RinkSpec, config: AnalysisConfig) -> Self {
        let standard = build_sequences(&log, &config.sequence);
        let zonal = split_by_zone(&standard, &log, &rink);
        let standard_games = game_ranges(&standard);
        let zonal_games = game_ranges(&zonal);
        let mut opponents = BTreeMap::new();
        for g in log.game_ids() {
            let teams: Vec<&str> = log.teams_in_game(g).into_iter().collect();
            if let [a, b] = teams[..] {
                opponents.insert((g.to_string(), a.to_string()), b.to_string());
                opponents.insert((g.to_string(), b.to_string()), a.to_string());
            }
        }
        Self {
            log,
            rink,
            config,
            standard,
            zonal,
            standard_games,
            zonal_games,
            opponents,
        }
    }

    pub fn sequences(&self, kind: SequenceKind) -> &[PossessionSequence] {
        match kind {
            SequenceKind::Standard => &self.standard,
            SequenceKind::Zonal => &self.zonal,
        }
    }

    /// Sequence-index ranges, one per game in game-id order.
    pub fn game_ranges(&self, kind: SequenceKind) -> &[Range<usize>] {
        match kind {
            SequenceKind::Standard => &self.standard_games,
            SequenceKind::Zonal => &self.zonal_games,
        }
    }

    pub fn opponent(&self, game_id: &str, team: &str) -> Option<&str> {
        self.opponents
            .get(&(game_id.to_string(), team.to_string()))
            .map(String::as_str)
    }

    /// Full grouping context of a sequence's samples.
    pub fn context(&self, seq: &PossessionSequence) -> GroupKey {
        let first = seq.first_event(&self.log);
        GroupKey {
            league: Some(first.league.clone()),
            season: Some(first.season.clone()),
            team: Some(seq.team_id.clone()),
            opponent: self.opponent(&seq.game_id, &seq.team_id).map(str::to_string),
            zone: seq.zone,
            period: Some(seq.period),
            manpower: Some(seq.manpower),
            player: None,
            position: None,
        }
    }

    pub fn samples(&self, seq: &PossessionSequence) -> Vec<PaceSample> {
        pace_samples(seq, &self.log).samples
    }

    /// Runs `f` on each game's sequences in parallel and returns the
    /// results in game-id order.
    pub fn per_game<T, F>(&self, kind: SequenceKind, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&[PossessionSequence]) -> T + Sync + Send,
    {
        let seqs = self.sequences(kind);
        self.game_ranges(kind)
            .par_iter()
            .map(|r| f(&seqs[r.clone()]))
            .collect()
    }

    /// Aggregates samples of sequences passing `manpower` by `group_by`.
    pub fn aggregate(&self, kind: SequenceKind, group_by: &GroupBy, manpower: Option<Manpower>) -> Aggregate {
        let shards = self.per_game(kind, |seqs| {
            let mut agg = Aggregate::new();
            for seq in seqs.iter().filter(|s| manpower.is_none_or(|m| s.manpower == m)) {
                let key = group_by.key(&self.context(seq));
                let v = agg.entry(key).or_default();
                for s in self.samples(seq) {
                    v.push(&s);
                }
            }
            agg
        });
        merge_aggregates(shards)
    }

    /// Count of transitions dropped for non-positive elapsed time.
    pub fn dropped_samples(&self, kind: SequenceKind) -> usize {
        self.per_game(kind, |seqs| {
            seqs.iter()
                .map(|s| pace_samples(s, &self.log).dropped_nonpositive_dt)
                .sum::<usize>()
        })
        .into_iter()
        .sum()
    }

    pub fn grid_layout(&self) -> Result<GridLayout> {
        GridLayout::padded(self.rink)
    }

    /// Accumulates the samples of selected standard sequences into a grid.
    /// `mirror` flips each sample into the opposing frame.
    pub fn grid<P>(&self, select: P, mirror: bool) -> Result<Polygrid>
    where
        P: Fn(&PossessionSequence) -> bool + Sync + Send,
    {
        let layout = self.grid_layout()?;
        let allocation = self.config.allocation;
        let shards = self.per_game(SequenceKind::Standard, |seqs| -> Result<Polygrid> {
            let mut g = Polygrid::new(layout.clone()).with_allocation(allocation);
            for seq in seqs.iter().filter(|s| select(s)) {
                for s in self.samples(seq) {
                    let s = if mirror { s.mirrored() } else { s };
                    g.accumulate(&s)?;
                }
            }
            Ok(g)
        });
        let mut total = Polygrid::new(layout).with_allocation(allocation);
        for shard in shards {
            total.merge(&shard?)?;
        }
        Ok(total)
    }

    /// Speed vector of every selected sequence, in sequence order.
    pub fn sequence_vectors(&self, kind: SequenceKind) -> Vec<SpeedVector> {
        self.per_game(kind, |seqs| {
            seqs.iter()
                .map(|s| SpeedVector::from_samples(&self.samples(s)))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    }
}

fn game_ranges(seqs: &[PossessionSequence]) -> Vec<Range<usize>> {
    let mut out: Vec<Range<usize>> = Vec::new();
    for (i, s) in seqs.iter().enumerate() {
        match out.last_mut() {
            Some(r) if seqs[r.start].game_id == s.game_id => r.end = i + 1,
            _ => out.push(i..i + 1),
        }
    }
    out
}

/// Builds a thread pool of the requested size and runs `f` inside it;
/// `None` uses the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| crate::error::Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::EventType::*;
    use crate::metrics::Dimension;
    use crate::rink::Zone;
    use crate::sequence::testutil::{ev, log};

    fn two_games() -> EventLog {
        let mut events = vec![
            ev("a1", "A", Pass, 0.0, -50.0, 0.0),
            ev("a2", "A", Reception, 1.0, -40.0, 0.0),
            ev("a3", "A", Pass, 2.0, 0.0, 0.0),
            ev("a4", "A", Reception, 3.0, 10.0, 0.0),
            ev("b1", "B", PuckRecovery, 4.0, 20.0, 0.0),
            ev("b2", "B", Pass, 5.0, 30.0, 10.0),
            ev("b3", "B", Reception, 6.0, 40.0, 10.0),
        ];
        let mut g2: Vec<_> = events
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.game_id = "g2".into();
                e.event_id = format!("{}-2", e.event_id);
                e
            })
            .collect();
        events.append(&mut g2);
        log(events)
    }

    #[test]
    fn game_ranges_and_opponents() {
        let a = Analysis::new(two_games(), RinkSpec::NHL, AnalysisConfig::default());
        assert_eq!(a.game_ranges(SequenceKind::Standard).len(), 2);
        assert_eq!(a.opponent("g2", "A"), Some("B"));
        assert_eq!(a.opponent("g2", "C"), None);
        let by: GroupBy = GroupBy::new([Dimension::Team, Dimension::Zone]);
        let agg = a.aggregate(SequenceKind::Zonal, &by, Some(Manpower::EVEN));
        let nz_a = GroupKey {
            team: Some("A".into()),
            zone: Some(Zone::NZ),
            ..Default::default()
        };
        // Per game: A's NZ piece is a2 -> a3 -> a4, where the final
        // transition is dropped; the crossing a2 -> a3 carries 40 ft in 1 s.
        assert_eq!(agg[&nz_a].n_samples, 2);
        assert_eq!(agg[&nz_a].phi_t(), Some(40.0));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let a = Analysis::new(two_games(), RinkSpec::NHL, AnalysisConfig::default());
        let by: GroupBy = "team,zone,period".parse().unwrap();
        let one = with_threads(Some(1), || a.aggregate(SequenceKind::Zonal, &by, None)).unwrap();
        let four = with_threads(Some(4), || a.aggregate(SequenceKind::Zonal, &by, None)).unwrap();
        assert_eq!(one, four);
        let g1 = with_threads(Some(1), || a.grid(|_| true, false)).unwrap().unwrap();
        let g4 = with_threads(Some(4), || a.grid(|_| true, false)).unwrap().unwrap();
        assert_eq!(g1, g4);
    }
}

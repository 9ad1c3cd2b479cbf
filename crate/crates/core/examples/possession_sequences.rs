//! Possession sequences, their termination reasons and the zonal split.

use std::collections::BTreeMap;

use rinkpace::pipeline::{Analysis, AnalysisConfig, SequenceKind};
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};

fn main() -> rinkpace::Result<()> {
    let season = generate(&GenConfig {
        seed: 4,
        n_games: 1,
        ..Default::default()
    })?;
    let an = Analysis::new(season.log(), RinkSpec::NHL, AnalysisConfig::default());

    for kind in [SequenceKind::Standard, SequenceKind::Zonal] {
        let seqs = an.sequences(kind);
        let mut reasons: BTreeMap<String, usize> = BTreeMap::new();
        for s in seqs {
            *reasons.entry(format!("{:?}", s.termination)).or_default() += 1;
        }
        println!("{kind:?}: {} sequences, {reasons:?}", seqs.len());
    }

    let seq = an.sequences(SequenceKind::Standard).iter().max_by_key(|s| s.len()).unwrap();
    println!("\nlongest sequence {} ({} events, {:?})", seq.sequence_id, seq.len(), seq.termination);
    for s in an.samples(seq) {
        let (a, b) = (s.from_event(&an.log), s.to_event(&an.log));
        println!(
            "  {:>13} -> {:<13} d={:6.2} ft  dt={:5.2} s  ({:?})",
            a.event_type.as_str(),
            b.event_type.as_str(),
            s.d_total,
            s.dt,
            an.rink.zone_of(b.point)
        );
    }
    Ok(())
}

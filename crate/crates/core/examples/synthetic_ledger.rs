//! Generate a season and check pipeline aggregates against the generator's
//! truth ledger.

use rinkpace::metrics::{Dimension, GroupBy};
use rinkpace::pipeline::{Analysis, AnalysisConfig, SequenceKind};
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};

fn main() -> rinkpace::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let season = generate(&GenConfig {
        seed,
        n_games: 12,
        ..Default::default()
    })?;
    let ledger = &season.ledger;
    println!("{} (seed {}): {} events, {} ledger samples", ledger.rng, ledger.seed, season.events.len(), ledger.samples.len());

    let an = Analysis::new(season.log(), RinkSpec::NHL, AnalysisConfig::default());
    let agg = an.aggregate(SequenceKind::Zonal, &GroupBy::new([Dimension::Team, Dimension::Zone]), None);
    let expected = ledger.expected(|s| Some((s.team.clone(), s.zone)));
    let mut worst: f64 = 0.0;
    for (key, v) in agg.iter().filter(|(_, v)| v.n_samples > 0) {
        let e = &expected[&(key.team.clone().unwrap(), key.zone.unwrap())];
        let rel = (v.phi_t().unwrap() - e.phi_t().unwrap()).abs() / e.phi_t().unwrap();
        worst = worst.max(rel);
        println!("{} {}: pipeline {:.6} ledger {:.6}", key.team.as_deref().unwrap(), key.zone.unwrap(), v.phi_t().unwrap(), e.phi_t().unwrap());
    }
    println!("largest relative difference: {worst:e}");
    Ok(())
}

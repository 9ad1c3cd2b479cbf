//! Speed components by zone, and by team and zone, for a synthetic season in
//! which team A moves the puck 10% faster.

use rinkpace::event::Manpower;
use rinkpace::metrics::{AggregationMode, GroupBy};
use rinkpace::pipeline::{Analysis, AnalysisConfig, SequenceKind};
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};

fn main() -> rinkpace::Result<()> {
    let mut cfg = GenConfig {
        seed: 9,
        n_games: 20,
        ..Default::default()
    };
    cfg.teams[0].zone_mult = [1.1; 3];
    let season = generate(&cfg)?;
    let an = Analysis::new(season.log(), RinkSpec::NHL, AnalysisConfig::default());

    for by in ["zone", "team,zone"] {
        let by: GroupBy = by.parse()?;
        println!("--by {by}");
        for (key, v) in an.aggregate(SequenceKind::Zonal, &by, Some(Manpower::EVEN)) {
            let labels: Vec<String> = by.dims().iter().map(|&d| key.value(d)).collect();
            let tw = v.speeds(AggregationMode::TimeWeighted).unwrap();
            let ms = v.speeds(AggregationMode::MeanOfSpeeds).unwrap();
            println!(
                "  {:<8} ϕ_T {:5.2}  ϕ_EW {:5.2}  ϕ_NS {:5.2}  ϕ_N {:5.2}  (mean of speeds ϕ_T {:5.2}, n={})",
                labels.join(" "),
                tw.t,
                tw.ew,
                tw.ns,
                tw.n,
                ms.t,
                v.n_samples
            );
        }
    }
    Ok(())
}

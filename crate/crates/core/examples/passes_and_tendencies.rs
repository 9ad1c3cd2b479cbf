//! Pass speeds by type and outcome, and league tendency counters by period.

use rinkpace::metrics::GroupBy;
use rinkpace::outcome::{self, TendencyOptions};
use rinkpace::pipeline::{Analysis, AnalysisConfig};
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};

fn main() -> rinkpace::Result<()> {
    let season = generate(&GenConfig {
        seed: 8,
        n_games: 12,
        ..Default::default()
    })?;
    let an = Analysis::new(season.log(), RinkSpec::NHL, AnalysisConfig::default());

    let passes = outcome::pass_reception_speeds(&an, None);
    println!("unlinked passes: {}, dropped for dt <= 0: {}", passes.unlinked, passes.dropped_nonpositive_dt);
    outcome::pass_table(&passes).write_csv(std::io::stdout())?;

    let opts = TendencyOptions {
        group_by: "period".parse::<GroupBy>()?,
        ..Default::default()
    };
    let groups = outcome::tendency_counters(&an, &season.intervals, &opts);
    println!();
    outcome::tendency_table(&opts.group_by, &groups).write_csv(std::io::stdout())?;
    Ok(())
}

//! Zone entries by danger class and pre-shot pace quintiles.

use rinkpace::outcome::{self, EntryOptions, ShotOptions};
use rinkpace::pipeline::{Analysis, AnalysisConfig};
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};

fn main() -> rinkpace::Result<()> {
    let season = generate(&GenConfig {
        seed: 33,
        n_games: 40,
        ..Default::default()
    })?;
    let an = Analysis::new(season.log(), RinkSpec::NHL, AnalysisConfig::default());

    let report = outcome::entry_table(&an, &EntryOptions::default());
    for c in &report.classes {
        println!("{:<14} {:>5} entries, preceding ϕ_T {:.2} ft/s", c.class.as_str(), c.n, c.phi_t.unwrap_or(f64::NAN));
    }
    outcome::entry_report_table(&report).write_csv(std::io::stdout())?;

    println!();
    let q = outcome::preshot_quintiles(&an, &ShotOptions::default())?;
    outcome::quintile_table(&q).write_csv(std::io::stdout())?;
    Ok(())
}

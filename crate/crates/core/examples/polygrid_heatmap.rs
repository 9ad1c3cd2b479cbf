//! Accumulate a league polygrid, smooth it and write CSV and SVG heatmaps
//! to the directory given as the first argument (default: `heatmaps`).

use std::fs::File;

use rinkpace::heatmap::{self, Palette};
use rinkpace::pipeline::{Analysis, AnalysisConfig};
use rinkpace::polygrid::DEFAULT_SIGMA;
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};
use rinkpace::team::{self, GridOptions, Side};

fn main() -> rinkpace::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "heatmaps".into());
    std::fs::create_dir_all(&dir)?;

    let mut cfg = GenConfig {
        seed: 5,
        n_games: 24,
        ..Default::default()
    };
    cfg.teams[1].zone_mult = [1.0, 1.15, 0.9];
    let season = generate(&cfg)?;
    let an = Analysis::new(season.log(), RinkSpec::NHL, AnalysisConfig::default());

    let league = team::league_polygrid(&an, Side::Attacking, None)?;
    println!(
        "league grid: {} samples, {:.0} ft, {:.0} s, leaked {:.3} s",
        league.n_samples,
        league.total_dist(),
        league.total_time(),
        league.leaked_time
    );
    let speeds = league.speeds(60.0).smooth(DEFAULT_SIGMA);
    heatmap::write_csv(&speeds, File::create(format!("{dir}/league.csv"))?)?;
    heatmap::write_svg(&speeds, Palette::sequential_for(&speeds), "League speed (ft/s)", File::create(format!("{dir}/league.svg"))?)?;

    let opts = GridOptions {
        manpower: None,
        ..Default::default()
    };
    let b = team::team_polygrid_with(&an, "B", Side::Attacking, &opts, league)?;
    println!("team B vs league: max |Δ| = {:.2} ft/s over {} cells", b.diff.max_abs(), b.diff.unmasked().count());
    heatmap::write_svg(&b.diff, Palette::diverging_for(&b.diff), "B attacking vs league", File::create(format!("{dir}/B_diff.svg"))?)?;
    println!("wrote {dir}/league.csv, {dir}/league.svg, {dir}/B_diff.svg");
    Ok(())
}

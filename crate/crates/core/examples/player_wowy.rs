//! Individual pace and with-or-without-you splits. One forward line of team
//! A speeds up every move it makes by 12%.

use rinkpace::pipeline::{Analysis, AnalysisConfig};
use rinkpace::player::{self, PlayerOptions, ShiftIndex, WowyContext, WowyOptions};
use rinkpace::rink::{RinkSpec, Zone};
use rinkpace::synth::{generate, GenConfig};

fn main() -> rinkpace::Result<()> {
    let mut cfg = GenConfig {
        seed: 21,
        n_games: 30,
        ..Default::default()
    };
    for p in ["A-F01", "A-F02", "A-F03"] {
        cfg.player_effects.insert(p.into(), 1.12);
    }
    let season = generate(&cfg)?;
    let an = Analysis::new(season.log(), RinkSpec::NHL, AnalysisConfig::default());

    let index = ShiftIndex::new(&season.shifts);
    let ctx = WowyContext::new(&an);
    for p in ["A-F01", "A-F04"] {
        let w = ctx.wowy(&index, "A", p, &WowyOptions::default())?;
        for z in &w.zones {
            println!(
                "{p} {}: with {:5.2} without {:5.2} -> {:+5.1}%  (n {} / {}, partial {})",
                z.zone,
                z.with.map_or(f64::NAN, |s| s.t),
                z.without.map_or(f64::NAN, |s| s.t),
                z.pct.t.unwrap_or(f64::NAN),
                z.n_with,
                z.n_without,
                z.n_partial
            );
        }
    }

    let opts = PlayerOptions {
        min_toi_min: 150.0,
        ..Default::default()
    };
    let rows = player::player_rows(&an, &season.shifts, &season.intervals, &opts)?;
    println!("\n{} skaters over 150 min; top NZ by WOWY ϕ_T %:", rows.len());
    player::wowy_leaderboard(&rows, Zone::NZ, 5, false).write_csv(std::io::stdout())?;
    Ok(())
}

//! Rink presets, zones and the attacking frame.

use rinkpace::polygrid::GridLayout;
use rinkpace::rink::{AttackSign, RinkSpec};

fn main() -> rinkpace::Result<()> {
    for name in ["nhl", "ahl", "shl"] {
        let rink = RinkSpec::resolve(name)?;
        let grid = GridLayout::padded(rink)?;
        println!(
            "{name}: {}x{} ft, blue lines at ±{} ft, {}x{} cells, {} on the ice",
            rink.length_ft,
            rink.width_ft,
            rink.blue_line_offset_ft,
            grid.n_cols,
            grid.n_rows,
            grid.valid_count()
        );
    }

    let rink = RinkSpec::NHL;
    // The same raw point seen by the two teams of a period.
    for sign in [AttackSign::Positive, AttackSign::Negative] {
        let p = rink.normalize(60.0, -20.0, sign)?;
        println!("raw (60, -20), sign {:+}: {:?} in {}", sign.factor(), p, rink.zone_of(p));
    }
    println!("corner point (95, 40) on ice: {}", rink.contains(95.0, 40.0));
    Ok(())
}

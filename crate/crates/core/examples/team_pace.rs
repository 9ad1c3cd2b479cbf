//! Team attacking and defending pace relative to league, and the
//! season-to-season repeatability of those percentages.

use rinkpace::pipeline::{Analysis, AnalysisConfig};
use rinkpace::rink::{RinkSpec, Zone};
use rinkpace::synth::{generate, GenConfig, Synthetic};
use rinkpace::team::{self, Side, TeamOptions};

fn season(name: &str, seed: u64) -> rinkpace::Result<Synthetic> {
    let mut cfg = GenConfig {
        seed,
        n_games: 24,
        season: name.into(),
        ..Default::default()
    };
    // Persistent team styles across both seasons.
    for (t, m) in cfg.teams.iter_mut().zip([1.08, 1.0, 0.95, 1.02]) {
        t.zone_mult = [m; 3];
    }
    generate(&cfg)
}

fn main() -> rinkpace::Result<()> {
    let mut events = season("2016-17", 1)?.events;
    // Keep game ids distinct across seasons.
    for e in season("2017-18", 2)?.events {
        events.push(rinkpace::event::Event {
            game_id: format!("S2{}", e.game_id),
            event_id: format!("S2{}", e.event_id),
            ..e
        });
    }
    let an = Analysis::new(rinkpace::event::EventLog::new(events), RinkSpec::NHL, AnalysisConfig::default());
    let rows = team::team_zonal(&an, &TeamOptions::default());
    for r in rows.iter().filter(|r| r.season == "2017-18" && r.side == Side::Attacking && r.zone == Zone::NZ) {
        println!("{} NZ attacking ϕ_T {:+.1}% vs league", r.team, r.pct.t.unwrap());
    }
    for side in Side::BOTH {
        let rep = team::repeatability(&rows, side, Zone::NZ, "2016-17", "2017-18");
        println!("{side} NZ repeatability r = {:.2} over {} teams", rep.r.unwrap_or(f64::NAN), rep.pairs.len());
    }
    Ok(())
}

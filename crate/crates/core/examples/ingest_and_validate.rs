//! Write a small synthetic log to CSV and JSON lines, read it back and
//! validate it.

use rinkpace::ingest::{self, Format};
use rinkpace::rink::RinkSpec;
use rinkpace::synth::{generate, GenConfig};

fn main() -> rinkpace::Result<()> {
    let season = generate(&GenConfig {
        seed: 1,
        n_games: 2,
        ..Default::default()
    })?;
    let log = season.log();

    for format in [Format::Csv, Format::JsonLines] {
        let mut bytes = Vec::new();
        ingest::write_events(&log, format, &season.attack, &mut bytes)?;
        let back = ingest::parse_events(&bytes[..], format, &RinkSpec::NHL, &season.attack)?;
        println!("{format:?}: {} bytes, {} events, identical: {}", bytes.len(), back.len(), back.events() == log.events());
    }

    for (ty, n) in log.count_by_type() {
        println!("{:>16} {n}", ty.as_str());
    }

    let report = ingest::validate(&log, &season.shifts, &season.intervals);
    println!("validation findings: {}", report.findings.len());

    // Break one timestamp and look again.
    let mut events = log.events().to_vec();
    events[10].t_s = -1.0;
    let broken = rinkpace::event::EventLog::new(events);
    for f in ingest::validate(&broken, &season.shifts, &season.intervals).findings.iter().take(3) {
        println!("  {}", serde_json::to_string(f)?);
    }
    Ok(())
}

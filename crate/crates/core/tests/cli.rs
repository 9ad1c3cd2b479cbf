use std::path::Path;

use rinkpace::cli::run;
use rinkpace::heatmap::read_csv_values;
use rinkpace::ingest::{self, Format};
use rinkpace::player::toi_5v5;
use rinkpace::synth::{generate, GenConfig};

fn rp(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("rinkpace").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn season(dir: &Path, games: &str) {
    let d = dir.to_str().unwrap();
    let (code, _, err) = rp(&["generate", "--seed", "17", "--games", games, "--teams", "2", "--output-dir", d]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn pace_zonal_by_zone_has_three_rows_of_four_speeds() {
    let dir = tempfile::tempdir().unwrap();
    season(dir.path(), "2");
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = rp(&["pace-zonal", "--data", d, "--by", "zone", "--manpower", "5v5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("zone,phi_t,phi_ew,phi_ns,phi_n"));
    for (line, z) in lines[1..].iter().zip(["DZ", "NZ", "OZ"]) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], z);
        assert!(f[1..5].iter().all(|v| v.parse::<f64>().unwrap() > 0.0));
    }
    let (code, json, _) = rp(&["pace-zonal", "--data", d, "--by", "zone,period", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(json.lines().count(), 9);
}

#[test]
fn team_equal_to_league_gives_a_zero_difference_grid() {
    let s = generate(&GenConfig {
        seed: 3,
        n_games: 4,
        ..Default::default()
    })
    .unwrap();
    // Keep team A's events only: A is then the whole league.
    let only_a = rinkpace::event::EventLog::new(s.events.iter().filter(|e| e.team_id == "A").cloned().collect());
    let dir = tempfile::tempdir().unwrap();
    let events = dir.path().join("events.csv");
    ingest::write_events(&only_a, Format::Csv, &s.attack, std::fs::File::create(&events).unwrap()).unwrap();
    s.attack.write_csv(std::fs::File::create(dir.path().join("attack.csv")).unwrap()).unwrap();
    let d = dir.path().to_str().unwrap();
    for smooth in [false, true] {
        let mut args = vec!["pace-grid", "--data", d, "--team", "A", "--diff-vs-league", "--tau", "1", "--manpower", "all"];
        if smooth {
            args.push("--smooth");
        }
        let (code, out, err) = rp(&args);
        assert_eq!(code, 0, "{err}");
        let values: Vec<f64> = read_csv_values(&out).into_iter().flatten().flatten().collect();
        assert!(values.len() > 100);
        assert!(values.iter().all(|&v| v == 0.0));
    }
}

#[test]
fn players_min_toi_filters_low_minutes() {
    let dir = tempfile::tempdir().unwrap();
    season(dir.path(), "10");
    let d = dir.path().to_str().unwrap();
    let shifts = ingest::read_shifts(std::fs::File::open(dir.path().join("shifts.csv")).unwrap()).unwrap();
    let intervals = ingest::read_manpower(std::fs::File::open(dir.path().join("manpower.csv")).unwrap()).unwrap();
    let toi = toi_5v5(&shifts, &intervals);
    let low: Vec<&String> = toi.iter().filter(|(_, &m)| (100.0..200.0).contains(&m)).map(|((_, p), _)| p).collect();
    assert!(!low.is_empty(), "need a player between 100 and 200 minutes");

    let (code, out, err) = rp(&["players", "--data", d, "--min-toi", "200"]);
    assert_eq!(code, 0, "{err}");
    let listed: Vec<String> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect();
    for p in &low {
        assert!(!listed.contains(p), "{p} should be filtered");
    }
    for ((_, p), m) in &toi {
        if *m >= 200.0 && !p.ends_with("G01") {
            assert!(listed.contains(p), "{p} has {m} minutes");
        }
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    season(dir.path(), "6");
    let d = dir.path().to_str().unwrap();
    let commands: [&[&str]; 6] = [
        &["pace-zonal", "--data", d, "--by", "team,zone,period"],
        &["pace-grid", "--data", d, "--team", "A", "--diff-vs-league", "--smooth", "--tau", "5"],
        &["export-heatmap", "--data", d, "--team", "B", "--side", "defending", "--tau", "5", "--format", "svg"],
        &["teams", "--data", d, "--format", "json"],
        &["players", "--data", d, "--min-toi", "0"],
        &["entries", "--data", d],
    ];
    for args in commands {
        let one = rp(&[args, &["--threads", "1"]].concat());
        let many = rp(&[args, &["--threads", "4"]].concat());
        assert_eq!(one.0, 0, "{}", one.2);
        assert!(!one.1.is_empty());
        assert_eq!(one.1, many.1, "{args:?}");
    }
}

#[test]
fn files_go_to_the_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    season(dir.path(), "2");
    let d = dir.path().to_str().unwrap();
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();
    assert_eq!(rp(&["teams", "--data", d, "--output-dir", o, "--format", "json"]).0, 0);
    assert_eq!(rp(&["pace-grid", "--data", d, "--output-dir", o]).0, 0);
    let svg = out.join("a.svg");
    assert_eq!(rp(&["export-heatmap", "--data", d, "--out", svg.to_str().unwrap()]).0, 0);
    assert!(out.join("teams.jsonl").exists());
    assert_eq!(read_csv_values(&std::fs::read_to_string(out.join("pace-grid.csv")).unwrap()).len(), 17);
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    season(dir.path(), "1");
    let d = dir.path().to_str().unwrap();
    assert_eq!(rp(&["validate", "--data", d]).0, 0);
    assert_eq!(rp(&["teams", "--data", d, "--bogus"]).0, 2);
    assert_eq!(rp(&["pace-zonal", "--data", d, "--by", "colour"]).0, 2);
    assert_eq!(rp(&["pace-grid", "--data", d, "--diff-vs-league"]).0, 2);
    assert_eq!(rp(&["wowy", "--data", d, "--player", "Z-F99"]).0, 1);
    assert_eq!(rp(&["pace-zonal", "--events", "/no/such/file.csv"]).0, 1);

    // A log with an out-of-rink coordinate is an analysis error.
    let text = std::fs::read_to_string(dir.path().join("events.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let xi = header.iter().position(|h| *h == "x").unwrap();
    let mut f: Vec<String> = lines[5].split(',').map(String::from).collect();
    f[xi] = "150".into();
    lines[5] = f.join(",");
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let (code, _, err) = rp(&["pace-zonal", "--events", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("outside the rink"), "{err}");
}

#[test]
fn generate_is_reproducible_and_honours_multipliers() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let d = dir.path().to_str().unwrap();
        let (code, _, err) = rp(&["generate", "--seed", "9", "--games", "2", "--team-mult", "A=1.1", "--team-mult", "B=1,1.2,1", "--output-dir", d]);
        assert_eq!(code, 0, "{err}");
    }
    for f in ["events.csv", "ledger.jsonl"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
    let d = a.path().to_str().unwrap();
    assert_eq!(rp(&["generate", "--team-mult", "Q=2", "--output-dir", d]).0, 2);
}

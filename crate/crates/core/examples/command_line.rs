//! Drive the command line in-process: generate a season into a temporary
//! directory, then run a few subcommands against it.

fn main() {
    let dir = std::env::temp_dir().join("rinkpace-example");
    let data = dir.to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["generate", "--seed", "3", "--games", "4", "--output-dir", data],
        &["pace-zonal", "--data", data, "--by", "zone", "--manpower", "5v5"],
        &["teams", "--data", data, "--format", "json"],
        &["export-heatmap", "--data", data, "--team", "A", "--diff-vs-league", "--tau", "5", "--format", "csv"],
    ];
    for args in runs {
        println!("$ rinkpace {}", args.join(" "));
        let mut out = Vec::new();
        let code = rinkpace::cli::run(std::iter::once("rinkpace").chain(args.iter().copied()), &mut out, &mut std::io::stderr());
        let text = String::from_utf8_lossy(&out);
        for line in text.lines().take(6) {
            println!("{line}");
        }
        println!("(exit {code})\n");
    }
}

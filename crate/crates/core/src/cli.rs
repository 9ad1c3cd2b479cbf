//! The `rinkpace` command line.
//!
//! [`run`] parses arguments, runs one subcommand and returns the process
//! exit code: 0 on success, 1 when the analysis fails, 2 on usage errors.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::event::{EventLog, Manpower, ManpowerInterval, Shift};
use crate::heatmap::{self, Palette};
use crate::ingest::{self, AttackTable, Format};
use crate::metrics::{AggregationMode, GroupBy};
use crate::outcome::{self, EntryOptions, ShotOptions, TendencyOptions};
use crate::pipeline::{with_threads, Analysis, AnalysisConfig, SequenceKind};
use crate::player::{self, PlayerOptions, ShiftIndex, WowyOptions, WowyWeighting};
use crate::polygrid::{Allocation, SpeedGrid, DEFAULT_SIGMA};
use crate::rink::{RinkSpec, Zone};
use crate::synth::{self, GenConfig, TeamConfig};
use crate::table::{num, text, OutputFormat, Table};
use crate::team::{self, GridOptions, Side, TeamOptions};

#[derive(Debug, Parser)]
#[command(name = "rinkpace", version, about = "Pace-of-play analytics for hockey event data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an event log for timestamp, manpower and link problems.
    Validate(ValidateArgs),
    /// Speed components grouped by zone, period, manpower and more.
    PaceZonal(PaceZonalArgs),
    /// Per-cell speed grid, optionally as a team-minus-league difference.
    PaceGrid(GridArgs),
    /// Team attacking and defending pace relative to league, per zone.
    Teams(TeamsArgs),
    /// Individual and on/off-ice (WOWY) pace per skater.
    Players(PlayersArgs),
    /// With-or-without-you split for one player.
    Wowy(WowyArgs),
    /// Zone entries by type with shot rates and preceding pace.
    Entries(EntriesArgs),
    /// Pre-shot pace quintiles with true shooting percentage.
    Shots(ShotsArgs),
    /// Pass speeds by pass type and reception outcome.
    Passes(PassesArgs),
    /// League tendency counters per group.
    Tendencies(TendenciesArgs),
    /// Write a seeded synthetic season with its truth ledger.
    Generate(GenerateArgs),
    /// Render a speed grid as a CSV matrix or SVG heatmap.
    ExportHeatmap(HeatmapArgs),
}

#[derive(Debug, Args)]
struct Input {
    /// Rink preset (nhl, ahl, shl) or path to a rink JSON file.
    #[arg(long, default_value = "nhl")]
    rink: String,
    /// Directory holding events.csv|events.jsonl, shifts.csv, manpower.csv and attack.csv.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Event log (.csv or .jsonl).
    #[arg(long)]
    events: Option<PathBuf>,
    /// Attack-direction table; without one, coordinates are taken as already normalized.
    #[arg(long)]
    attack: Option<PathBuf>,
    #[arg(long)]
    shifts: Option<PathBuf>,
    /// Manpower intervals CSV.
    #[arg(long)]
    intervals: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Average per-sample speeds instead of pooling distance over time.
    #[arg(long)]
    mean_of_speeds: bool,
    /// Split segment shares by chord length instead of equally.
    #[arg(long)]
    chord_allocation: bool,
}

#[derive(Debug, Args)]
struct Output {
    /// Write `<command>.csv|jsonl` here instead of standard output.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

impl From<TableFormat> for OutputFormat {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Csv => OutputFormat::Csv,
            TableFormat::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PaceZonalArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    /// Comma-separated dimensions: league, season, team, opponent, zone, period, manpower.
    #[arg(long, default_value = "zone")]
    by: String,
    /// Manpower filter such as 5v5, or `all`.
    #[arg(long, default_value = "5v5")]
    manpower: String,
    /// Read whole possession sequences instead of zonal pieces.
    #[arg(long)]
    standard: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Attacking,
    Defending,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Attacking => Side::Attacking,
            SideArg::Defending => Side::Defending,
        }
    }
}

#[derive(Debug, Args)]
struct GridSelect {
    /// Team to map; without it the league grid is produced.
    #[arg(long)]
    team: Option<String>,
    #[arg(long, value_enum, default_value = "attacking")]
    side: SideArg,
    /// Team minus league per cell.
    #[arg(long)]
    diff_vs_league: bool,
    /// Apply the 3x3 Gaussian before output (before differencing with --diff-vs-league).
    #[arg(long)]
    smooth: bool,
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Seconds of accumulated time below which a cell is masked.
    #[arg(long, default_value_t = 60.0)]
    tau: f64,
    #[arg(long, default_value = "5v5")]
    manpower: String,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    select: GridSelect,
}

#[derive(Debug, Args)]
struct TeamsArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value = "5v5")]
    manpower: String,
    /// Exclude the team itself from its league baseline.
    #[arg(long)]
    leave_one_out: bool,
    /// Season-to-season correlation instead, e.g. `2016-17,2017-18`.
    #[arg(long)]
    repeatability: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Weighting {
    PerSequence,
    TimeWeighted,
}

impl From<Weighting> for WowyWeighting {
    fn from(w: Weighting) -> Self {
        match w {
            Weighting::PerSequence => WowyWeighting::PerSequence,
            Weighting::TimeWeighted => WowyWeighting::TimeWeighted,
        }
    }
}

#[derive(Debug, Args)]
struct PlayersArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    /// Minimum 5v5 time on ice in minutes.
    #[arg(long, default_value_t = player::DEFAULT_MIN_TOI_MIN)]
    min_toi: f64,
    /// Rank by WOWY ϕ_T % in this zone (DZ, NZ, OZ).
    #[arg(long)]
    zone: Option<String>,
    #[arg(long, conflicts_with = "bottom")]
    top: Option<usize>,
    #[arg(long)]
    bottom: Option<usize>,
    #[arg(long, value_enum, default_value = "per-sequence")]
    weighting: Weighting,
}

#[derive(Debug, Args)]
struct WowyArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    #[arg(long)]
    player: String,
    /// Needed only when the player appears for several teams.
    #[arg(long)]
    team: Option<String>,
    #[arg(long, default_value = "5v5")]
    manpower: String,
    #[arg(long, value_enum, default_value = "per-sequence")]
    weighting: Weighting,
}

#[derive(Debug, Args)]
struct EntriesArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    /// Seconds after an entry in which shots count.
    #[arg(long, default_value_t = outcome::DEFAULT_ENTRY_SHOT_WINDOW_S)]
    entry_shot_window: f64,
    #[arg(long, default_value = "5v5")]
    manpower: String,
}

#[derive(Debug, Args)]
struct ShotsArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    /// Seconds of pace measured before each shot.
    #[arg(long, default_value_t = outcome::DEFAULT_PRESHOT_WINDOW_S)]
    window: f64,
    #[arg(long, default_value = "5v5")]
    manpower: String,
}

#[derive(Debug, Args)]
struct PassesArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value = "5v5")]
    manpower: String,
}

#[derive(Debug, Args)]
struct TendenciesArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value = "league,season,period")]
    by: String,
    #[arg(long, default_value = "5v5")]
    manpower: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EventFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generator settings as JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    games: Option<usize>,
    /// Number of teams, named A, B, C, ...
    #[arg(long)]
    teams: Option<usize>,
    /// Zone multipliers as TEAM=m or TEAM=dz,nz,oz; repeatable.
    #[arg(long = "team-mult")]
    team_mult: Vec<String>,
    /// Speed effect of a player's own moves as PLAYER=m; repeatable.
    #[arg(long = "player-effect")]
    player_effect: Vec<String>,
    /// Record cells traversed by each ledger sample.
    #[arg(long)]
    ledger_cells: bool,
    #[arg(long, default_value = "nhl")]
    rink: String,
    #[arg(long)]
    output_dir: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: EventFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HeatmapFormat {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
struct HeatmapArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    select: GridSelect,
    #[arg(long, value_enum, default_value = "svg")]
    format: HeatmapFormat,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 2,
            };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(Error::Config(m)) if m.starts_with("usage: ") => {
            let _ = writeln!(stderr, "error: {}", &m[7..]);
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn usage(m: impl std::fmt::Display) -> Error {
    Error::Config(format!("usage: {m}"))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Generate(a) => generate(a, out),
        Command::Validate(a) => pooled(a.input.threads, a, validate, out),
        Command::PaceZonal(a) => pooled(a.input.threads, a, pace_zonal, out),
        Command::PaceGrid(a) => pooled(a.input.threads, a, pace_grid, out),
        Command::Teams(a) => pooled(a.input.threads, a, teams, out),
        Command::Players(a) => pooled(a.input.threads, a, players, out),
        Command::Wowy(a) => pooled(a.input.threads, a, wowy, out),
        Command::Entries(a) => pooled(a.input.threads, a, entries, out),
        Command::Shots(a) => pooled(a.input.threads, a, shots, out),
        Command::Passes(a) => pooled(a.input.threads, a, passes, out),
        Command::Tendencies(a) => pooled(a.input.threads, a, tendencies, out),
        Command::ExportHeatmap(a) => pooled(a.input.threads, a, export_heatmap, out),
    }
}

/// Runs `f` on a worker pool of the requested size, buffering its output.
fn pooled<A: Send>(
    threads: Option<usize>,
    args: A,
    f: fn(A, &mut dyn Write) -> Result<()>,
    out: &mut dyn Write,
) -> Result<()> {
    if threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    let mut buf = Vec::new();
    let res = with_threads(threads, || f(args, &mut buf))?;
    out.write_all(&buf)?;
    res
}

struct Loaded {
    analysis: Analysis,
    shifts: Vec<Shift>,
    intervals: Vec<ManpowerInterval>,
}

impl Input {
    fn path(&self, given: &Option<PathBuf>, names: &[&str]) -> Option<PathBuf> {
        given.clone().or_else(|| {
            let dir = self.data.as_ref()?;
            names.iter().map(|n| dir.join(n)).find(|p| p.exists())
        })
    }

    fn load_log(&self) -> Result<(EventLog, RinkSpec)> {
        let rink = RinkSpec::resolve(&self.rink)?;
        let events = self
            .path(&self.events, &["events.csv", "events.jsonl"])
            .ok_or_else(|| usage("an event log is required (--events or --data)"))?;
        let attack = match self.path(&self.attack, &["attack.csv"]) {
            Some(p) => AttackTable::load(p)?,
            None => AttackTable::identity(),
        };
        Ok((ingest::load_events(events, &rink, &attack)?, rink))
    }

    fn load(&self) -> Result<Loaded> {
        let (log, rink) = self.load_log()?;
        let shifts = match self.path(&self.shifts, &["shifts.csv"]) {
            Some(p) => ingest::read_shifts(File::open(p)?)?,
            None => Vec::new(),
        };
        let intervals = match self.path(&self.intervals, &["manpower.csv"]) {
            Some(p) => ingest::read_manpower(File::open(p)?)?,
            None => Vec::new(),
        };
        let config = AnalysisConfig {
            mode: self.mode(),
            allocation: if self.chord_allocation { Allocation::Chord } else { Allocation::Equal },
            ..Default::default()
        };
        Ok(Loaded {
            analysis: Analysis::new(log, rink, config),
            shifts,
            intervals,
        })
    }

    fn mode(&self) -> AggregationMode {
        if self.mean_of_speeds {
            AggregationMode::MeanOfSpeeds
        } else {
            AggregationMode::TimeWeighted
        }
    }
}

fn manpower_filter(s: &str) -> Result<Option<Manpower>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| usage(format!("bad --manpower `{s}`; expected e.g. 5v5 or all")))
}

fn zone_arg(s: &str) -> Result<Zone> {
    Zone::ALL
        .into_iter()
        .find(|z| z.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| usage(format!("bad --zone `{s}`; expected DZ, NZ or OZ")))
}

fn group_by(s: &str) -> Result<GroupBy> {
    s.parse().map_err(|e| usage(format!("bad --by: {e}")))
}

impl Output {
    fn emit(&self, name: &str, table: &Table, out: &mut dyn Write) -> Result<()> {
        let format = OutputFormat::from(self.format);
        match &self.output_dir {
            Some(dir) => {
                let ext = match format {
                    OutputFormat::Csv => "csv",
                    OutputFormat::Json => "jsonl",
                };
                let mut w = create(&dir.join(format!("{name}.{ext}")))?;
                table.write(format, &mut w)?;
                w.flush()?;
            }
            None => table.write(format, out)?,
        }
        Ok(())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn validate(a: ValidateArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = a.input.load()?;
    let report = ingest::validate(&loaded.analysis.log, &loaded.shifts, &loaded.intervals);
    let mut t = Table::new(["game_id", "kind", "detail"]);
    for f in &report.findings {
        let v = serde_json::to_value(f)?;
        let kind = v["kind"].as_str().unwrap_or_default().to_string();
        t.push(vec![text(f.game_id()), text(kind), text(v.to_string())]);
    }
    a.output.emit("validate", &t, out)?;
    if report.is_clean() {
        Ok(())
    } else {
        Err(Error::Analysis(format!("{} validation finding(s)", report.findings.len())))
    }
}

fn pace_zonal(a: PaceZonalArgs, out: &mut dyn Write) -> Result<()> {
    let by = group_by(&a.by)?;
    let mp = manpower_filter(&a.manpower)?;
    let loaded = a.input.load()?;
    let an = &loaded.analysis;
    let kind = if a.standard { SequenceKind::Standard } else { SequenceKind::Zonal };
    let agg = an.aggregate(kind, &by, mp);
    let mut cols: Vec<String> = by.dims().iter().map(|d| d.as_str().to_string()).collect();
    cols.extend(["phi_t", "phi_ew", "phi_ns", "phi_n", "n_samples", "time_s", "distance_ft"].map(String::from));
    let mut t = Table::new(cols);
    for (k, v) in &agg {
        let mut row: Vec<_> = by.dims().iter().map(|&d| text(k.value(d))).collect();
        match v.speeds(an.config.mode) {
            Some(s) => row.extend(s.as_array().map(num)),
            None => row.extend([None; 4].map(num)),
        }
        row.push(v.n_samples.into());
        row.push(num(v.sum_dt));
        row.push(num(v.sum_d_total));
        t.push(row);
    }
    a.output.emit("pace-zonal", &t, out)
}

fn grid_for(an: &Analysis, s: &GridSelect) -> Result<SpeedGrid> {
    let side = Side::from(s.side);
    let opts = GridOptions {
        manpower: manpower_filter(&s.manpower)?,
        tau: s.tau,
        smooth: s.smooth,
        sigma: s.sigma,
    };
    if !(s.sigma > 0.0) {
        return Err(usage("--sigma must be positive"));
    }
    match (&s.team, s.diff_vs_league) {
        (None, true) => Err(usage("--diff-vs-league needs --team")),
        (Some(team), true) => Ok(team::team_polygrid(an, team, side, &opts)?.diff),
        (Some(team), false) => {
            let g = team::team_polygrid(an, team, side, &opts)?.team_grid.speeds(s.tau);
            Ok(if s.smooth { g.smooth(s.sigma) } else { g })
        }
        (None, false) => {
            let g = team::league_polygrid(an, side, opts.manpower)?.speeds(s.tau);
            Ok(if s.smooth { g.smooth(s.sigma) } else { g })
        }
    }
}

fn grid_table(g: &SpeedGrid) -> Table {
    let l = &g.layout;
    let mut t = Table::new(["col", "row", "x_center", "y_center", "value"]);
    for (i, v) in g.unmasked() {
        let (c, r) = l.col_row(i);
        let (x0, x1, y0, y1) = l.cell_rect(i);
        t.push(vec![c.into(), r.into(), num(0.5 * (x0 + x1)), num(0.5 * (y0 + y1)), num(v)]);
    }
    t
}

fn pace_grid(a: GridArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = a.input.load()?;
    let g = grid_for(&loaded.analysis, &a.select)?;
    match a.output.format {
        // The CSV form is the plain heatmap matrix.
        TableFormat::Csv => match &a.output.output_dir {
            Some(dir) => {
                let mut w = create(&dir.join("pace-grid.csv"))?;
                heatmap::write_csv(&g, &mut w)?;
                w.flush()?;
                Ok(())
            }
            None => heatmap::write_csv(&g, out),
        },
        TableFormat::Json => a.output.emit("pace-grid", &grid_table(&g), out),
    }
}

fn teams(a: TeamsArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = a.input.load()?;
    let opts = TeamOptions {
        manpower: manpower_filter(&a.manpower)?,
        leave_one_out: a.leave_one_out,
        mode: a.input.mode(),
    };
    let rows = team::team_zonal(&loaded.analysis, &opts);
    match &a.repeatability {
        None => a.output.emit("teams", &team::team_table(&rows, opts.mode), out),
        Some(spec) => {
            let (sa, sb) = spec
                .split_once(',')
                .ok_or_else(|| usage("--repeatability takes two seasons, e.g. 2016-17,2017-18"))?;
            let mut reps = Vec::new();
            for side in Side::BOTH {
                for z in Zone::ALL {
                    reps.push(team::repeatability(&rows, side, z, sa.trim(), sb.trim()));
                }
            }
            a.output.emit("repeatability", &team::repeatability_table(&reps), out)
        }
    }
}

fn players(a: PlayersArgs, out: &mut dyn Write) -> Result<()> {
    let zone = a.zone.as_deref().map(zone_arg).transpose()?;
    if (a.top.is_some() || a.bottom.is_some()) && zone.is_none() {
        return Err(usage("--top/--bottom need --zone"));
    }
    let loaded = a.input.load()?;
    let opts = PlayerOptions {
        min_toi_min: a.min_toi,
        mode: a.input.mode(),
        wowy: WowyOptions {
            weighting: a.weighting.into(),
            ..Default::default()
        },
    };
    let rows = player::player_rows(&loaded.analysis, &loaded.shifts, &loaded.intervals, &opts)?;
    let table = match zone {
        None => player::player_table(&rows),
        Some(z) => {
            let (n, bottom) = match (a.top, a.bottom) {
                (_, Some(n)) => (n, true),
                (Some(n), None) => (n, false),
                (None, None) => (rows.len(), false),
            };
            player::wowy_leaderboard(&rows, z, n, bottom)
        }
    };
    a.output.emit("players", &table, out)
}

fn wowy(a: WowyArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = a.input.load()?;
    let index = ShiftIndex::new(&loaded.shifts);
    let team = match &a.team {
        Some(t) => t.clone(),
        None => {
            let teams: Vec<&String> = index.players().filter(|((_, p), _)| *p == a.player).map(|((t, _), _)| t).collect();
            match teams[..] {
                [t] => t.clone(),
                [] => return Err(Error::Analysis(format!("player {} has no shifts", a.player))),
                _ => return Err(usage(format!("player {} played for several teams; pass --team", a.player))),
            }
        }
    };
    let opts = WowyOptions {
        manpower: manpower_filter(&a.manpower)?,
        weighting: a.weighting.into(),
    };
    let w = player::WowyContext::new(&loaded.analysis).wowy(&index, &team, &a.player, &opts)?;
    a.output.emit("wowy", &player::wowy_table(&w), out)
}

fn entries(a: EntriesArgs, out: &mut dyn Write) -> Result<()> {
    if !(a.entry_shot_window >= 0.0) {
        return Err(usage("--entry-shot-window must be non-negative"));
    }
    let loaded = a.input.load()?;
    let opts = EntryOptions {
        manpower: manpower_filter(&a.manpower)?,
        shot_window_s: a.entry_shot_window,
    };
    let report = outcome::entry_table(&loaded.analysis, &opts);
    a.output.emit("entries", &outcome::entry_report_table(&report), out)
}

fn shots(a: ShotsArgs, out: &mut dyn Write) -> Result<()> {
    if !(a.window > 0.0) {
        return Err(usage("--window must be positive"));
    }
    let loaded = a.input.load()?;
    let opts = ShotOptions {
        manpower: manpower_filter(&a.manpower)?,
        window_s: a.window,
    };
    let rows = outcome::preshot_quintiles(&loaded.analysis, &opts)?;
    a.output.emit("shots", &outcome::quintile_table(&rows), out)
}

fn passes(a: PassesArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = a.input.load()?;
    let report = outcome::pass_reception_speeds(&loaded.analysis, manpower_filter(&a.manpower)?);
    a.output.emit("passes", &outcome::pass_table(&report), out)
}

fn tendencies(a: TendenciesArgs, out: &mut dyn Write) -> Result<()> {
    let opts = TendencyOptions {
        group_by: group_by(&a.by)?,
        manpower: manpower_filter(&a.manpower)?,
    };
    let loaded = a.input.load()?;
    let groups = outcome::tendency_counters(&loaded.analysis, &loaded.intervals, &opts);
    a.output.emit("tendencies", &outcome::tendency_table(&opts.group_by, &groups), out)
}

fn export_heatmap(a: HeatmapArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = a.input.load()?;
    let g = grid_for(&loaded.analysis, &a.select)?;
    let mut buf = Vec::new();
    match a.format {
        HeatmapFormat::Csv => heatmap::write_csv(&g, &mut buf)?,
        HeatmapFormat::Svg => {
            let palette = if a.select.diff_vs_league {
                Palette::diverging_for(&g)
            } else {
                Palette::sequential_for(&g)
            };
            let who = a.select.team.as_deref().unwrap_or("League");
            let what = if a.select.diff_vs_league { "vs league" } else { "speed" };
            let side = Side::from(a.select.side);
            heatmap::write_svg(&g, palette, &format!("{who} {side} {what} (ft/s)"), &mut buf)?;
        }
    }
    match &a.out {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(&buf)?;
            w.flush()?;
        }
        None => out.write_all(&buf)?,
    }
    Ok(())
}

fn parse_assignment(s: &str) -> Result<(String, Vec<f64>)> {
    let (k, v) = s.split_once('=').ok_or_else(|| usage(format!("expected NAME=value, got `{s}`")))?;
    let vals = v
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("bad number in `{s}`")))?;
    Ok((k.trim().to_string(), vals))
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg: GenConfig = match &a.config {
        Some(p) => serde_json::from_reader(File::open(p)?)?,
        None => GenConfig::default(),
    };
    cfg.seed = a.seed;
    cfg.rink = RinkSpec::resolve(&a.rink)?;
    if let Some(n) = a.games {
        cfg.n_games = n;
    }
    if let Some(n) = a.teams {
        if n > 26 {
            return Err(usage("--teams supports at most 26 teams"));
        }
        cfg.teams = (0..n).map(|i| TeamConfig::new(&((b'A' + i as u8) as char).to_string())).collect();
    }
    for m in &a.team_mult {
        let (team, vals) = parse_assignment(m)?;
        let mult = match vals[..] {
            [m] => [m; 3],
            [dz, nz, oz] => [dz, nz, oz],
            _ => return Err(usage(format!("--team-mult takes one or three values: `{m}`"))),
        };
        let t = cfg
            .teams
            .iter_mut()
            .find(|t| t.id == team)
            .ok_or_else(|| usage(format!("unknown team `{team}` in --team-mult")))?;
        t.zone_mult = mult;
    }
    for e in &a.player_effect {
        let (player, vals) = parse_assignment(e)?;
        let [v] = vals[..] else {
            return Err(usage(format!("--player-effect takes one value: `{e}`")));
        };
        cfg.player_effects.insert(player, v);
    }
    cfg.ledger_cells |= a.ledger_cells;
    let s = synth::generate(&cfg)?;
    let format = match a.format {
        EventFormat::Csv => Format::Csv,
        EventFormat::Jsonl => Format::JsonLines,
    };
    s.write_dir(&a.output_dir, format)?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    counts.insert("events", s.events.len());
    counts.insert("shifts", s.shifts.len());
    counts.insert("intervals", s.intervals.len());
    counts.insert("ledger_samples", s.ledger.samples.len());
    counts.insert("possessions", s.ledger.possessions);
    let mut t = Table::new(["item", "count"]);
    for (k, v) in counts {
        t.push(vec![text(k), v.into()]);
    }
    t.write_csv(out)
}

use std::fs;
use std::io::{self, BufRead, BufReader, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use noisebench::analysis::{
    amdahl_fit, bandwidth_report, compare_runs, scaling_analysis, CompareOptions, ComparisonVerdict, Verdict,
    DEFAULT_EFFICIENCY_THRESHOLD,
};
use noisebench::experiment::{
    execute_plan, generate_synthetic, load_plan, ExecutionMode, NoopObserver, SyntheticSpec, DEFAULT_WARMUP_FACTOR,
};
use noisebench::ingest::{
    parse_bandwidth_csv, parse_step_csv, parse_step_log, StepPattern, TimingSeries, BandwidthRecord,
    DEFAULT_SAMPLE_SIZE, DEFAULT_WARMUP, STEP_HEADER,
};
use noisebench::report::{
    bandwidth_table, ratio_table, regression_gate, render_table, scaling_curve, thread_scaling, timestep_box, Cell,
    GatePolicy, InputDigest, Metadata, PlotKind, RenderOptions, ReportDocument, Section, SeriesDocument, Table,
    TableStyle,
};
use noisebench::stats::{
    power_estimate_with, summarize, Execution, NoiseShape, PowerConfig, SampleSummary, Sidedness, TestVariant,
};
use noisebench::{Error, Result, DEFAULT_ALPHA};

const SEED_ENV: &str = "NOISEBENCH_SEED";

const PATTERN_HELP: &str = "\
Regular expression applied to every log line. It must define the named \
captures `step` (a non-negative integer) and `seconds` (a positive decimal), \
e.g. 'STEP (?<step>\\d+) TIME (?<seconds>[0-9.]+)'. Non-matching lines are \
skipped; at least one line must match.";

/// Decide with statistical confidence whether a configuration change made a
/// noisy iterative application faster.
#[derive(Parser)]
#[command(name = "noisebench", version, about)]
struct Cli {
    /// Disable coloured output (also honoured: NO_COLOR).
    #[arg(long, global = true, env = "NO_COLOR", value_parser = clap::builder::FalseyValueParser::new())]
    no_color: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a step CSV or free-form log into a normalized series document.
    Ingest(IngestArgs),
    /// Summary statistics with confidence intervals for one or more runs.
    Summarize(SummarizeArgs),
    /// Compare a candidate run against a baseline and classify the change.
    Compare(CompareArgs),
    /// Expand or execute a placement sweep plan.
    Sweep {
        #[command(subcommand)]
        action: SweepAction,
    },
    /// Strong-scaling speedup, efficiency and Amdahl fit.
    Scaling(ScalingArgs),
    /// Bandwidth/runtime tables with best values marked, and cross-setting ratios.
    Bandwidth(BandwidthArgs),
    /// Write plot data as tab-separated text.
    Plot(PlotArgs),
    /// Generate a seeded synthetic step-timing CSV.
    Synth(SynthArgs),
    /// Monte-Carlo power of the t-test for a given effect and noise level.
    Power(PowerArgs),
}

#[derive(Args, Clone)]
struct SeriesInput {
    /// Pattern for free-form logs (see `ingest --help`).
    #[arg(long, value_name = "REGEX")]
    pattern: Option<String>,
}

#[derive(Args)]
struct IngestArgs {
    /// Input file, or `-` for standard input.
    input: PathBuf,
    #[arg(long, value_name = "REGEX", long_help = PATTERN_HELP)]
    pattern: Option<String>,
    /// Identifier recorded in the document (default: input file stem).
    #[arg(long)]
    run_id: Option<String>,
    /// Output file (default: standard output).
    #[arg(short, long, conflicts_with = "results_dir")]
    output: Option<PathBuf>,
    /// Write `<run_id>.json` into this directory.
    #[arg(long)]
    results_dir: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct WindowArgs {
    /// Steps with index below this are dropped.
    #[arg(long, default_value_t = DEFAULT_WARMUP)]
    warmup: u64,
    /// Number of post-warmup steps sampled.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
    n: usize,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    window: WindowArgs,
    /// Confidence level of the intervals.
    #[arg(long, default_value_t = 0.95)]
    ci: f64,
    /// Also print the across-run mean of every step in the window.
    #[arg(long)]
    per_step: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    series: SeriesInput,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Pooled,
    Welch,
    Paired,
}

impl From<VariantArg> for TestVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Pooled => TestVariant::Pooled,
            VariantArg::Welch => TestVariant::Welch,
            VariantArg::Paired => TestVariant::Paired,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SidednessArg {
    TwoSided,
    Less,
    Greater,
}

impl From<SidednessArg> for Sidedness {
    fn from(s: SidednessArg) -> Self {
        match s {
            SidednessArg::TwoSided => Sidedness::TwoSided,
            SidednessArg::Less => Sidedness::Less,
            SidednessArg::Greater => Sidedness::Greater,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GateArg {
    #[value(name = "fail_on_slower", alias = "fail-on-slower")]
    FailOnSlower,
    #[value(name = "fail_on_not_faster", alias = "fail-on-not-faster")]
    FailOnNotFaster,
}

impl From<GateArg> for GatePolicy {
    fn from(g: GateArg) -> Self {
        match g {
            GateArg::FailOnSlower => GatePolicy::FailOnSlower,
            GateArg::FailOnNotFaster => GatePolicy::FailOnNotFaster,
        }
    }
}

#[derive(Args)]
struct CompareArgs {
    baseline: PathBuf,
    candidate: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[command(flatten)]
    window: WindowArgs,
    /// t-test variant; `paired` pairs steps of the common window.
    #[arg(long, value_enum, default_value = "pooled")]
    variant: VariantArg,
    /// Alternative hypothesis for baseline relative to candidate.
    #[arg(long, value_enum, default_value = "two-sided")]
    sidedness: SidednessArg,
    #[arg(long, default_value_t = 0.95)]
    ci: f64,
    /// Print a one-line JSON verdict and exit 3 when the policy is violated.
    #[arg(long, value_enum)]
    gate: Option<GateArg>,
    /// Print the full verdict as JSON.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    series: SeriesInput,
}

#[derive(Subcommand)]
enum SweepAction {
    /// Print the expanded configurations and their launch commands.
    Plan {
        plan: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run every configuration one at a time.
    Run {
        plan: PathBuf,
        /// Print the commands instead of running them.
        #[arg(long)]
        dry_run: bool,
    },
}

#[derive(Args)]
struct ScalingArgs {
    /// CSV with header `resources,seconds`.
    points: PathBuf,
    /// Baseline resource count (default: the smallest).
    #[arg(long)]
    baseline: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_EFFICIENCY_THRESHOLD)]
    threshold: f64,
    /// Also fit Amdahl's law to the speedups.
    #[arg(long)]
    fit: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BandwidthArgs {
    /// Bandwidth CSV files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Ratio of setting A over setting B; names may be `setting@node`.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pair: Vec<String>,
    /// Best-value marker.
    #[arg(long, default_value = "*")]
    marker: String,
    /// Padded plain text instead of Markdown.
    #[arg(long)]
    plain: bool,
    /// Also write the report document (JSON) here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotArg {
    TimestepBox,
    ScalingCurve,
    ThreadScaling,
}

impl From<PlotArg> for PlotKind {
    fn from(p: PlotArg) -> Self {
        match p {
            PlotArg::TimestepBox => PlotKind::TimestepBox,
            PlotArg::ScalingCurve => PlotKind::ScalingCurve,
            PlotArg::ThreadScaling => PlotKind::ThreadScaling,
        }
    }
}

#[derive(Args)]
struct PlotArgs {
    #[arg(value_enum)]
    kind: PlotArg,
    /// Series files for timestep-box and thread-scaling (`THREADS=PATH` for
    /// the latter unless the series records its configuration); one
    /// `resources,seconds` CSV for scaling-curve.
    #[arg(required = true)]
    inputs: Vec<String>,
    #[command(flatten)]
    window: WindowArgs,
    /// Baseline resource count for scaling-curve.
    #[arg(long)]
    baseline: Option<u32>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    series: SeriesInput,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Normal,
    Lognormal,
}

impl From<ShapeArg> for NoiseShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Normal => NoiseShape::Normal,
            ShapeArg::Lognormal => NoiseShape::Lognormal,
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Mean step time in seconds.
    #[arg(long, default_value_t = 250.0)]
    mean: f64,
    /// Standard deviation as a fraction of the mean.
    #[arg(long, default_value_t = 0.10)]
    cv: f64,
    #[arg(long, default_value_t = 37)]
    steps: usize,
    #[arg(long, default_value_t = 2)]
    warmup: usize,
    #[arg(long, default_value_t = DEFAULT_WARMUP_FACTOR)]
    warmup_factor: f64,
    /// Fractional reduction of the mean step time.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    effect: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "normal")]
    shape: ShapeArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PowerArgs {
    #[arg(long)]
    effect: f64,
    #[arg(long)]
    cv: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "normal")]
    shape: ShapeArg,
    #[arg(long, value_enum, default_value = "pooled")]
    variant: VariantArg,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    json: bool,
}

struct Ui {
    color: bool,
}

impl Ui {
    fn verdict(&self, v: Verdict) -> String {
        if !self.color {
            return v.to_string();
        }
        let code = match v {
            Verdict::Faster => "32",
            Verdict::Slower => "31",
            Verdict::Indistinguishable => "33",
        };
        format!("\x1b[{code}m{v}\x1b[0m")
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| Error::io("<stdin>", e))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| Error::io(path, e))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn default_run_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty() && s != "-")
        .unwrap_or_else(|| "stdin".to_string())
}

fn first_content_line(bytes: &[u8]) -> String {
    BufReader::new(bytes)
        .lines()
        .map_while(|l| l.ok())
        .map(|l| l.trim_start_matches('\u{feff}').trim().to_string())
        .find(|l| !l.is_empty())
        .unwrap_or_default()
}

/// Load a series document, step CSV or (with a pattern) free-form log.
fn load_series(path: &Path, pattern: Option<&str>) -> Result<(TimingSeries, InputDigest)> {
    let bytes = read_input(path)?;
    let label = path.display().to_string();
    let digest = InputDigest::of(label.clone(), &bytes);
    let head = first_content_line(&bytes);
    let mut series = if head.starts_with('{') {
        let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?;
        SeriesDocument::from_json(&text)?.series
    } else if let Some(p) = pattern {
        parse_step_log(bytes.as_slice(), &StepPattern::new(p)?, &label)?
    } else if head == STEP_HEADER {
        parse_step_csv(bytes.as_slice(), &label)?
    } else {
        return Err(Error::Config(format!(
            "{label}: not a step CSV (`{STEP_HEADER}` header) or series document; pass --pattern for logs"
        )));
    };
    if series.run_id == label {
        series.run_id = default_run_id(path);
    }
    Ok((series, digest))
}

fn windowed(series: &TimingSeries, w: &WindowArgs) -> Result<TimingSeries> {
    let trimmed = if series.trimmed {
        series.clone()
    } else {
        series.trim_warmup(w.warmup)?
    };
    trimmed.sample_first_n(w.n)
}

fn run_ingest(args: IngestArgs) -> Result<()> {
    let bytes = read_input(&args.input)?;
    let label = args.input.display().to_string();
    let mut series = match &args.pattern {
        Some(p) => parse_step_log(bytes.as_slice(), &StepPattern::new(p)?, &label)?,
        None => parse_step_csv(bytes.as_slice(), &label)?,
    };
    series.run_id = args.run_id.clone().unwrap_or_else(|| default_run_id(&args.input));
    let doc = SeriesDocument::new(series, InputDigest::of(label, &bytes));
    let json = doc.to_json();
    match (&args.output, &args.results_dir) {
        (_, Some(dir)) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = dir.join(format!("{}.json", doc.series.run_id));
            write_output(Some(&path), &json)?;
            eprintln!("wrote {} ({} steps)", path.display(), doc.series.len());
            Ok(())
        }
        (out, None) => write_output(out.as_deref(), &json),
    }
}

fn summary_cells(name: &str, s: &SampleSummary) -> Vec<Cell> {
    vec![
        Cell::text(name),
        Cell::text(s.n.to_string()),
        Cell::number(s.mean, 4),
        Cell::number(s.std, 4),
        s.cv.map_or_else(|| Cell::text("-"), |cv| Cell::number(cv, 4)),
        Cell::number(s.ci_lo, 4),
        Cell::number(s.ci_hi, 4),
    ]
}

fn run_summarize(args: SummarizeArgs, out: &mut String) -> Result<()> {
    let mut windows = Vec::new();
    for path in &args.inputs {
        let (series, _) = load_series(path, args.series.pattern.as_deref())?;
        windows.push(windowed(&series, &args.window)?);
    }
    let mut rows = Vec::new();
    for w in &windows {
        rows.push((w.run_id.clone(), summarize(&w.durations(), args.ci)?));
    }
    let aggregate = if windows.len() > 1 {
        let means: Vec<f64> = rows.iter().map(|r| r.1.mean).collect();
        let pooled: Vec<f64> = windows.iter().flat_map(|w| w.durations()).collect();
        Some((summarize(&means, args.ci)?, summarize(&pooled, args.ci)?))
    } else {
        None
    };
    let per_step = if args.per_step && windows.len() > 1 {
        let first = windows[0].indices();
        for w in &windows[1..] {
            if w.indices() != first {
                return Err(Error::Alignment(format!(
                    "{} and {} cover different steps",
                    windows[0].run_id, w.run_id
                )));
            }
        }
        let mut steps = Vec::new();
        for (i, &step) in first.iter().enumerate() {
            let values: Vec<f64> = windows.iter().map(|w| w.steps()[i].seconds).collect();
            steps.push((step, summarize(&values, args.ci)?));
        }
        Some(steps)
    } else {
        None
    };

    if args.json {
        let value = serde_json::json!({
            "runs": rows.iter().map(|(id, s)| serde_json::json!({"run_id": id, "summary": s})).collect::<Vec<_>>(),
            "mean_of_means": aggregate.as_ref().map(|a| &a.0),
            "pooled": aggregate.as_ref().map(|a| &a.1),
            "per_step": per_step.as_ref().map(|p| p.iter().map(|(step, s)| serde_json::json!({"step": step, "summary": s})).collect::<Vec<_>>()),
        });
        out.push_str(&serde_json::to_string_pretty(&value).unwrap_or_default());
        out.push('\n');
        return Ok(());
    }
    let ci_pct = format!("{}%", args.ci * 100.0);
    let header = ["Run", "n", "Mean (s)", "Std (s)", "CV", &format!("CI {ci_pct} lo"), &format!("CI {ci_pct} hi")];
    let mut table = Table::new(header);
    for (id, s) in &rows {
        table.push_row(summary_cells(id, s));
    }
    if let Some((mom, pooled)) = &aggregate {
        table.push_row(summary_cells("mean of means", mom));
        table.push_row(summary_cells("pooled", pooled));
    }
    out.push_str(&render_table(&table, &RenderOptions::default())?);
    for w in &windows {
        for warning in &w.warnings {
            eprintln!("warning: {}: {warning}", w.run_id);
        }
    }
    if let Some(steps) = per_step {
        let mut table = Table::new(["Step", "n", "Mean (s)", "Std (s)", "CV", "CI lo", "CI hi"]);
        for (step, s) in &steps {
            table.push_row(summary_cells(&step.to_string(), s));
        }
        out.push('\n');
        out.push_str(&render_table(&table, &RenderOptions::default())?);
    }
    Ok(())
}

fn describe_verdict(v: &ComparisonVerdict, ui: &Ui) -> String {
    let t = &v.mean_test;
    let mut s = format!(
        "{} vs {} over steps {}..{} (n={})\n",
        v.baseline_id,
        v.candidate_id,
        v.window.first_step,
        v.window.first_step + v.window.n as u64 - 1,
        v.window.n
    );
    for (name, sum) in [("baseline", &v.baseline_summary), ("candidate", &v.candidate_summary)] {
        s.push_str(&format!(
            "  {name:<9} mean {:.4} s  std {:.4} s  cv {}  {}% CI [{:.4}, {:.4}]\n",
            sum.mean,
            sum.std,
            sum.cv.map_or("-".to_string(), |c| format!("{c:.4}")),
            sum.ci_level * 100.0,
            sum.ci_lo,
            sum.ci_hi
        ));
    }
    s.push_str(&format!(
        "  speedup {:.4}  t {:.4}  dof {:.2}  p {:.4e}  alpha {}\n",
        v.speedup, t.t_stat, t.dof, t.p_value, t.alpha
    ));
    match &v.variance_test {
        Some(f) => s.push_str(&format!(
            "  variance ratio (candidate/baseline) {:.4}  p {:.4e}{}\n",
            f.f_stat,
            f.p_value,
            if f.significant { "  significant" } else { "" }
        )),
        None => s.push_str("  variance ratio undefined (both samples constant)\n"),
    }
    s.push_str(&format!("verdict: {}\n", ui.verdict(v.verdict)));
    s
}

fn run_compare(args: CompareArgs, ui: &Ui, out: &mut String) -> Result<i32> {
    let pattern = args.series.pattern.as_deref();
    let (baseline, _) = load_series(&args.baseline, pattern)?;
    let (candidate, _) = load_series(&args.candidate, pattern)?;
    let opts = CompareOptions {
        alpha: args.alpha,
        variant: args.variant.into(),
        sidedness: args.sidedness.into(),
        n: args.window.n,
        warmup: args.window.warmup,
        ci_level: args.ci,
    };
    let verdict = compare_runs(&baseline, &candidate, &opts)?;
    for w in &verdict.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(gate) = args.gate {
        let outcome = regression_gate(&verdict, gate.into());
        eprint!("{}", describe_verdict(&verdict, ui));
        out.push_str(&outcome.line);
        out.push('\n');
        return Ok(outcome.exit_code);
    }
    if args.json {
        out.push_str(&serde_json::to_string_pretty(&verdict).unwrap_or_default());
        out.push('\n');
    } else {
        out.push_str(&describe_verdict(&verdict, ui));
    }
    Ok(0)
}

fn run_sweep(action: SweepAction, out: &mut String) -> Result<i32> {
    match action {
        SweepAction::Plan { plan, json } => {
            let plan = load_plan(&plan)?;
            if json {
                out.push_str(&serde_json::to_string_pretty(&plan).unwrap_or_default());
                out.push('\n');
                return Ok(0);
            }
            let mut table = Table::new(["Label", "Nodes", "Ranks", "Ranks/node", "Threads", "Distribution", "Binding"]);
            for c in &plan.configs {
                table.push_row(vec![
                    Cell::text(&c.label),
                    Cell::text(c.nodes.to_string()),
                    Cell::text(c.total_ranks().to_string()),
                    Cell::text(c.ranks_per_node.to_string()),
                    Cell::text(c.threads_per_rank.to_string()),
                    Cell::text(c.distribution.as_str()),
                    Cell::text(c.cores_per_socket_bind.map_or("-".to_string(), |k| format!("{k}/socket"))),
                ]);
            }
            out.push_str(&render_table(&table, &RenderOptions::default())?);
            out.push_str(&format!(
                "{} configuration(s) x {} repetition(s)\n",
                plan.configs.len(),
                plan.repetitions
            ));
            Ok(0)
        }
        SweepAction::Run { plan, dry_run } => {
            let plan = load_plan(&plan)?;
            let mode = if dry_run { ExecutionMode::DryRun } else { ExecutionMode::Run };
            let mut buf = Vec::new();
            let artifacts = execute_plan(&plan, mode, &mut NoopObserver, &mut buf)?;
            out.push_str(&String::from_utf8_lossy(&buf));
            let failed = artifacts.iter().filter(|a| !a.success).count();
            if !dry_run {
                eprintln!(
                    "{} run(s), {failed} failed; index: {}",
                    artifacts.len(),
                    plan.results_index.display()
                );
            }
            Ok(0)
        }
    }
}

fn read_points(path: &Path) -> Result<Vec<(u32, f64)>> {
    let bytes = read_input(path)?;
    let mut points = Vec::new();
    let mut header_seen = false;
    for (i, line) in BufReader::new(bytes.as_slice()).lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != "resources,seconds" {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected header `resources,seconds`, found `{line}`"),
                });
            }
            header_seen = true;
            continue;
        }
        let bad = |message: String| Error::Parse { line: i + 1, message };
        let (n, t) = line
            .split_once(',')
            .ok_or_else(|| bad(format!("expected 2 fields in `{line}`")))?;
        let n: u32 = n.trim().parse().map_err(|e| bad(format!("resources: {e}")))?;
        let t: f64 = t.trim().parse().map_err(|e| bad(format!("seconds: {e}")))?;
        points.push((n, t));
    }
    if !header_seen {
        return Err(Error::Parse {
            line: 1,
            message: "empty input".into(),
        });
    }
    Ok(points)
}

fn run_scaling(args: ScalingArgs, out: &mut String) -> Result<()> {
    let points = read_points(&args.points)?;
    let baseline = args
        .baseline
        .or_else(|| points.iter().map(|p| p.0).min())
        .unwrap_or(1);
    let series = scaling_analysis(&points, baseline, args.threshold)?;
    let fit = if args.fit { Some(amdahl_fit(&series)?) } else { None };
    if args.json {
        let value = serde_json::json!({ "series": series, "amdahl": fit });
        out.push_str(&serde_json::to_string_pretty(&value).unwrap_or_default());
        out.push('\n');
        return Ok(());
    }
    let mut table = Table::new(["N", "Time (s)", "Speedup", "Efficiency", "Ideal", "Meets threshold"]);
    for p in &series.points {
        table.push_row(vec![
            Cell::number(f64::from(p.resources), 0),
            Cell::number(p.seconds, 2),
            Cell::number(p.speedup, 4),
            Cell::number(p.efficiency, 4),
            Cell::number(p.ideal, 4),
            Cell::text(if p.meets_threshold { "yes" } else { "no" }),
        ]);
    }
    out.push_str(&render_table(&table, &RenderOptions::default())?);
    match series.largest_efficient {
        Some(n) => out.push_str(&format!("efficiency >= {} up to N = {n}\n", series.threshold)),
        None => out.push_str(&format!("no point reaches efficiency {}\n", series.threshold)),
    }
    if let Some(f) = fit {
        out.push_str(&format!(
            "Amdahl fit: parallel fraction {:.6}, RMS residual {:.3e}, max speedup {}\n",
            f.parallel_fraction,
            f.residual,
            f.max_speedup.map_or("unbounded".to_string(), |m| format!("{m:.4}"))
        ));
    }
    Ok(())
}

fn run_bandwidth(args: BandwidthArgs, out: &mut String) -> Result<()> {
    let mut records: Vec<BandwidthRecord> = Vec::new();
    let mut digests = Vec::new();
    for path in &args.inputs {
        let bytes = read_input(path)?;
        digests.push(InputDigest::of(path.display().to_string(), &bytes));
        records.extend(parse_bandwidth_csv(bytes.as_slice())?);
    }
    let pairs: Vec<(String, String)> = args
        .pair
        .chunks(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect();
    let report = bandwidth_report(&records, &pairs)?;
    if args.json {
        out.push_str(&serde_json::to_string_pretty(&report).unwrap_or_default());
        out.push('\n');
        return Ok(());
    }
    let opts = RenderOptions {
        style: if args.plain { TableStyle::Plain } else { TableStyle::Markdown },
        marker: args.marker.clone(),
    };
    let records_table = bandwidth_table(&records, &report).titled("Bandwidth and runtime");
    out.push_str(&render_table(&records_table, &opts)?);
    let mut sections = vec![Section::Table(records_table)];
    if !report.ratios.is_empty() {
        let ratios = ratio_table(&report).titled("Ratios");
        out.push('\n');
        out.push_str(&render_table(&ratios, &opts)?);
        sections.push(Section::Table(ratios));
    }
    if let Some(path) = &args.report {
        let doc = ReportDocument {
            title: "Memory bandwidth report".into(),
            sections,
            metadata: Metadata::now(digests),
        };
        doc.validate()?;
        let json = serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n";
        write_output(Some(path), &json)?;
    }
    Ok(())
}

fn run_plot(args: PlotArgs) -> Result<()> {
    let pattern = args.series.pattern.as_deref();
    let text = match PlotKind::from(args.kind) {
        PlotKind::ScalingCurve => {
            let [path] = args.inputs.as_slice() else {
                return Err(Error::Config("scaling-curve takes exactly one points file".into()));
            };
            let points = read_points(Path::new(path))?;
            let baseline = args
                .baseline
                .or_else(|| points.iter().map(|p| p.0).min())
                .unwrap_or(1);
            scaling_curve(&scaling_analysis(&points, baseline, DEFAULT_EFFICIENCY_THRESHOLD)?)
        }
        PlotKind::TimestepBox => {
            let mut groups = Vec::new();
            for input in &args.inputs {
                let (series, _) = load_series(Path::new(input), pattern)?;
                let w = windowed(&series, &args.window)?;
                groups.push((w.run_id.clone(), w.durations()));
            }
            timestep_box(&groups)?
        }
        PlotKind::ThreadScaling => {
            let mut points = Vec::new();
            for input in &args.inputs {
                let (threads, path) = match input.split_once('=') {
                    Some((t, p)) if t.parse::<u32>().is_ok() => (t.parse::<u32>().ok(), p),
                    _ => (None, input.as_str()),
                };
                let (series, _) = load_series(Path::new(path), pattern)?;
                let threads = threads
                    .or_else(|| series.config.as_ref().map(|c| c.threads_per_rank))
                    .ok_or_else(|| {
                        Error::Config(format!("{path}: thread count unknown; pass THREADS={path}"))
                    })?;
                let w = windowed(&series, &args.window)?;
                points.push((threads, summarize(&w.durations(), 0.95)?));
            }
            thread_scaling(&points)?
        }
    };
    write_output(args.output.as_deref(), &text)
}

fn run_synth(args: SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        mean: args.mean,
        cv: args.cv,
        n_steps: args.steps,
        warmup_steps: args.warmup,
        warmup_factor: args.warmup_factor,
        effect_fraction: args.effect,
        seed: args.seed,
        noise_shape: args.shape.into(),
    };
    let series = generate_synthetic(&spec)?;
    write_output(args.output.as_deref(), &series.to_csv())
}

fn run_power(args: PowerArgs, out: &mut String) -> Result<()> {
    let cfg = PowerConfig::new(args.effect, args.cv, args.n, args.alpha)
        .trials(args.trials)
        .seed(args.seed)
        .noise(args.shape.into())
        .variant(args.variant.into());
    let exec = if args.sequential { Execution::Sequential } else { Execution::default() };
    let est = power_estimate_with(&cfg, exec)?;
    if args.json {
        let value = serde_json::json!({ "config": cfg, "estimate": est });
        out.push_str(&serde_json::to_string_pretty(&value).unwrap_or_default());
        out.push('\n');
    } else {
        out.push_str(&format!(
            "power {:.4} ({} of {} trials rejected, standard error {:.4})\n",
            est.power, est.rejections, est.trials, est.standard_error
        ));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    let ui = Ui {
        color: !cli.no_color && io::stdout().is_terminal(),
    };
    let mut out = String::new();
    let code = match cli.command {
        Command::Ingest(a) => run_ingest(a).map(|_| 0),
        Command::Summarize(a) => run_summarize(a, &mut out).map(|_| 0),
        Command::Compare(a) => run_compare(a, &ui, &mut out),
        Command::Sweep { action } => run_sweep(action, &mut out),
        Command::Scaling(a) => run_scaling(a, &mut out).map(|_| 0),
        Command::Bandwidth(a) => run_bandwidth(a, &mut out).map(|_| 0),
        Command::Plot(a) => run_plot(a).map(|_| 0),
        Command::Synth(a) => run_synth(a).map(|_| 0),
        Command::Power(a) => run_power(a, &mut out).map(|_| 0),
    }?;
    if !out.is_empty() {
        write_output(None, &out)?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! The `refinekit` command line.
//!
//! Exit codes: 0 when the refinement holds, 1 when it does not, 2 for usage,
//! input and budget errors and for oracle disagreements.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::aut::{read_aut, TauNames};
use crate::engine::{refines, CheckError, ExplorationConfig, Metrics, Relation, Strategy, Variant, Verdict};
use crate::generate::gen_ladder;
use crate::lts::Lts;
use crate::minimise::minimise;
use crate::oracle::{check_budget, oracle_refines, DEFAULT_ORACLE_BUDGET};

pub const EXIT_REFINES: i32 = 0;
pub const EXIT_NOT_REFINES: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "refinekit", version, about = "Refinement checking for labelled transition systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether IMPL refines SPEC.
    Check(CheckArgs),
    /// Run benchmark sweeps and print CSV.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelationArg {
    Trace,
    StableFailures,
    FailuresDivergences,
}

impl From<RelationArg> for Relation {
    fn from(r: RelationArg) -> Self {
        match r {
            RelationArg::Trace => Relation::Trace,
            RelationArg::StableFailures => Relation::StableFailures,
            RelationArg::FailuresDivergences => Relation::FailuresDivergences,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Df,
    Bf,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Df => Strategy::DepthFirst,
            StrategyArg::Bf => Strategy::BreadthFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Improved,
    Legacy,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Improved => Variant::Improved,
            VariantArg::Legacy => Variant::Legacy,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricsFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    relation: RelationArg,
    #[arg(long, value_enum, default_value = "df")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "improved")]
    variant: VariantArg,
    /// Reduce both LTSs modulo divergence-preserving branching bisimulation first.
    #[arg(long)]
    minimize: bool,
    /// Run the legacy failures-divergences algorithm although it is unsound.
    #[arg(long)]
    allow_unsound_legacy_fdr: bool,
    /// Print the visible trace leading to the witness.
    #[arg(long)]
    counterexample: bool,
    /// Append exploration metrics in the given format.
    #[arg(long, value_enum)]
    metrics: Option<MetricsFormat>,
    /// Cross-check the verdict against the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Name of the internal action in the input files (`i` is always accepted).
    #[arg(long, value_name = "NAME", default_value = crate::lts::DEFAULT_TAU)]
    tau: String,
    /// Give up after pushing this many pairs.
    #[arg(long, value_name = "N")]
    node_budget: Option<u64>,
    #[arg(value_name = "SPEC.aut")]
    spec: PathBuf,
    #[arg(value_name = "IMPL.aut")]
    impl_: PathBuf,
}

#[derive(Debug, Subcommand)]
enum BenchCommand {
    /// Self-refinement of the ladder family L_n^k.
    Ladder(LadderArgs),
}

/// An inclusive range `A:B:STEP`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl SweepRange {
    pub fn values(self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.step)
    }
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}"));
        let (start, end, step) = match parts.as_slice() {
            [single] => (parse(single)?, parse(single)?, 1),
            [a, b] => (parse(a)?, parse(b)?, 1),
            [a, b, c] => (parse(a)?, parse(b)?, parse(c)?),
            _ => return Err(format!("expected A:B:STEP, got {s:?}")),
        };
        if step == 0 || start == 0 || start > end {
            return Err(format!("invalid range {s:?}: need 1 <= A <= B and STEP >= 1"));
        }
        Ok(SweepRange { start, end, step })
    }
}

#[derive(Debug, Args)]
struct LadderArgs {
    #[arg(long, value_name = "A:B:STEP")]
    n_range: SweepRange,
    #[arg(long, value_name = "A:B:STEP")]
    k_range: SweepRange,
    #[arg(long, value_enum, default_value = "improved")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "df")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "trace")]
    relation: RelationArg,
    #[arg(long, value_name = "N")]
    node_budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LtsSize {
    pub states: usize,
    pub transitions: usize,
}

impl LtsSize {
    pub fn of(lts: &Lts) -> Self {
        LtsSize {
            states: lts.num_states(),
            transitions: lts.num_transitions(),
        }
    }
}

/// Everything reported for one `check` run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub verdict: Verdict,
    /// Seconds spent in the refinement check itself.
    pub wall_time: f64,
    /// Seconds spent minimising the inputs.
    pub preprocessing_time: f64,
    pub spec_size: LtsSize,
    pub impl_size: LtsSize,
    pub spec_size_reduced: LtsSize,
    pub impl_size_reduced: LtsSize,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_REFINES };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(args) => run_check(&args, out),
        Command::Bench(BenchCommand::Ladder(args)) => run_ladder(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn load(path: &Path, tau: &TauNames) -> Result<Lts, String> {
    match read_aut(path, tau) {
        Ok(Ok(lts)) => Ok(lts),
        Ok(Err(e)) => Err(format!("{}: {e}", path.display())),
        Err(e) => Err(format!("{}: {e}", path.display())),
    }
}

fn run_check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, String> {
    let relation = Relation::from(args.relation);
    let variant = Variant::from(args.variant);
    if variant == Variant::Legacy && relation == Relation::FailuresDivergences && !args.allow_unsound_legacy_fdr {
        return Err(format!(
            "{} (--allow-unsound-legacy-fdr)",
            CheckError::UnsoundLegacyFdr
        ));
    }

    let tau = TauNames::new(&args.tau);
    let spec = load(&args.spec, &tau)?;
    let impl_ = load(&args.impl_, &tau)?;

    let started = Instant::now();
    let (spec_checked, impl_checked) = if args.minimize {
        (minimise(&spec), minimise(&impl_))
    } else {
        (spec.clone(), impl_.clone())
    };
    let preprocessing_time = started.elapsed().as_secs_f64();

    if args.oracle {
        check_budget(&spec_checked, &impl_checked, DEFAULT_ORACLE_BUDGET)
            .map_err(|e| format!("--oracle rejected: {e}"))?;
    }

    let config = ExplorationConfig {
        relation,
        strategy: args.strategy.into(),
        variant,
        invariant_checks: false,
        allow_unsound_legacy_fdr: args.allow_unsound_legacy_fdr,
        node_budget: args.node_budget,
    };
    let started = Instant::now();
    let verdict = refines(&spec_checked, &impl_checked, &config).map_err(|e| e.to_string())?;
    let wall_time = started.elapsed().as_secs_f64();

    let report = RunReport {
        verdict,
        wall_time,
        preprocessing_time,
        spec_size: LtsSize::of(&spec),
        impl_size: LtsSize::of(&impl_),
        spec_size_reduced: LtsSize::of(&spec_checked),
        impl_size_reduced: LtsSize::of(&impl_checked),
    };
    print_report(&report, args, out).map_err(|e| e.to_string())?;

    if args.oracle {
        let expected = oracle_refines(&spec_checked, &impl_checked, relation).map_err(|e| e.to_string())?;
        if expected != report.verdict.refines {
            return Err(format!(
                "oracle disagreement: engine says {}, oracle says {expected}",
                report.verdict.refines
            ));
        }
        writeln!(out, "oracle: agrees").map_err(|e| e.to_string())?;
    }

    Ok(if report.verdict.refines {
        EXIT_REFINES
    } else {
        EXIT_NOT_REFINES
    })
}

fn print_report(report: &RunReport, args: &CheckArgs, out: &mut dyn Write) -> std::io::Result<()> {
    let verdict = &report.verdict;
    writeln!(out, "refines: {}", verdict.refines)?;
    if let Some(kind) = verdict.witness_kind {
        writeln!(out, "witness: {kind}")?;
    }
    if args.counterexample {
        if let Some(trace) = &verdict.counterexample {
            writeln!(out, "counterexample: {}", trace.join(" "))?;
        }
    }
    match args.metrics {
        Some(MetricsFormat::Json) => {
            let json = serde_json::to_string(report).map_err(std::io::Error::other)?;
            writeln!(out, "{json}")?;
        }
        Some(MetricsFormat::Csv) => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record([
                "working_max",
                "antichain_hits",
                "antichain_misses",
                "antichain_max",
                "pairs_done",
                "wall_time",
                "preprocessing_time",
            ])?;
            let m = &verdict.metrics;
            writer.write_record([
                m.working_max.to_string(),
                m.antichain_hits.to_string(),
                m.antichain_misses.to_string(),
                m.antichain_max.to_string(),
                m.pairs_done.to_string(),
                format!("{:.6}", report.wall_time),
                format!("{:.6}", report.preprocessing_time),
            ])?;
            writer.flush()?;
        }
        None => {}
    }
    Ok(())
}

/// Column order of `bench ladder` output.
pub const BENCH_COLUMNS: [&str; 8] = [
    "n",
    "k",
    "verdict",
    "wall_time",
    "working_max",
    "antichain_hits",
    "antichain_misses",
    "antichain_max",
];

/// One row of `bench ladder`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    /// `true`, `false` or `budget-exceeded`.
    pub verdict: String,
    pub wall_time: f64,
    pub metrics: Metrics,
}

pub fn bench_ladder_cell(n: usize, k: usize, config: &ExplorationConfig) -> BenchRow {
    let ladder = gen_ladder(n, k);
    let started = Instant::now();
    let result = refines(&ladder, &ladder, config);
    let wall_time = started.elapsed().as_secs_f64();
    let (verdict, metrics) = match result {
        Ok(v) => (v.refines.to_string(), v.metrics),
        Err(CheckError::BudgetExceeded(m)) => ("budget-exceeded".to_string(), m),
        Err(e) => (format!("error: {e}"), Metrics::default()),
    };
    BenchRow {
        n,
        k,
        verdict,
        wall_time,
        metrics,
    }
}

fn run_ladder(args: &LadderArgs, out: &mut dyn Write) -> Result<i32, String> {
    let config = ExplorationConfig {
        relation: args.relation.into(),
        strategy: args.strategy.into(),
        variant: args.variant.into(),
        invariant_checks: false,
        allow_unsound_legacy_fdr: true,
        node_budget: args.node_budget,
    };
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(BENCH_COLUMNS).map_err(|e| e.to_string())?;
    for n in args.n_range.values() {
        for k in args.k_range.values() {
            let row = bench_ladder_cell(n, k, &config);
            let m = row.metrics;
            writer
                .write_record([
                    row.n.to_string(),
                    row.k.to_string(),
                    row.verdict,
                    format!("{:.6}", row.wall_time),
                    m.working_max.to_string(),
                    m.antichain_hits.to_string(),
                    m.antichain_misses.to_string(),
                    m.antichain_max.to_string(),
                ])
                .map_err(|e| e.to_string())?;
            writer.flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(EXIT_REFINES)
}

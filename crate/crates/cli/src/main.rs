use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use miov_cli::bench::{bench_layout, BenchReport};
use miov_cli::{table_io, ParseError};
use miov_core::reorder::{self, apply_layout, export_bilp, first_visit_order, Strategy};
use miov_core::trace::{export_dot, export_graph_tsv, locality_report};
use miov_core::{
    build_move_table, build_multibwt, invert, load_fasta, load_plain, split_runs,
    trace_inversion, Layout, MoveTable, RunPosition, StringCollection,
};

#[derive(Parser)]
#[command(name = "miov", version, about = "Build, trace and reorder move structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a move table from a string collection.
    Build {
        input: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Record the run-to-run transitions of a full inversion.
    Trace {
        table: PathBuf,
        #[arg(long)]
        include_terminator_edges: bool,
        #[arg(long, conflicts_with = "dot")]
        tsv: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Lay the runs out in a new memory order.
    Reorder {
        table: PathBuf,
        /// identity, first-visit, greedy, exact or file:PATH
        #[arg(long, default_value = "exact")]
        strategy: LayoutChoice,
        #[arg(long, default_value_t = reorder::DEFAULT_MAX_RUNS)]
        max_runs: usize,
        /// Count only the runs the walk lands in for first-visit.
        #[arg(long)]
        exclude_hops: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the layout, one run label per line.
        #[arg(long)]
        layout_out: Option<PathBuf>,
    },
    /// Recover the strings, one per line.
    Invert {
        table: PathBuf,
        /// Print each string in the reversed order it is recovered in.
        #[arg(long)]
        raw_reversed: bool,
    },
    /// Check a table's invariants, optionally against its source corpus.
    Verify {
        table: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        corpus_args: CorpusArgs,
    },
    /// Write the layout problem as a binary program in LP format.
    ExportLp {
        table: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split runs until each receives at most D run-head LF images.
    Split {
        table: PathBuf,
        #[arg(short, default_value_t = 4)]
        d: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time full inversions under several layouts.
    Bench {
        table: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "identity,first-visit,greedy")]
        layouts: Vec<LayoutChoice>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = reorder::DEFAULT_MAX_RUNS)]
        max_runs: usize,
    },
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long, default_value = "$", value_parser = parse_terminator)]
    terminator: u8,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Fasta,
}

#[derive(Clone, Debug)]
enum LayoutChoice {
    Builtin(Strategy),
    File(PathBuf),
}

impl std::str::FromStr for LayoutChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(LayoutChoice::File(path.into())),
            Some(_) => Err("file: needs a path".into()),
            None => s.parse().map(LayoutChoice::Builtin),
        }
    }
}

impl LayoutChoice {
    fn name(&self) -> String {
        match self {
            LayoutChoice::Builtin(s) => s.name().to_string(),
            LayoutChoice::File(_) => "file".to_string(),
        }
    }
}

fn parse_terminator(s: &str) -> Result<u8, String> {
    match s.as_bytes() {
        [b] => Ok(*b),
        _ => Err("terminator must be a single byte".into()),
    }
}

/// Exit status for a failed verification, distinct from usage and I/O.
#[derive(Debug)]
struct VerifyFailed;

impl std::fmt::Display for VerifyFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerifyFailed {}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).context("reading standard input")?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_table(path: &Path) -> Result<MoveTable> {
    let bytes = read_input(path)?;
    table_io::parse(&bytes).with_context(|| format!("parsing table {}", path.display()))
}

fn load_corpus(path: &Path, args: &CorpusArgs) -> Result<StringCollection> {
    let bytes = read_input(path)?;
    let collection = match args.format {
        Format::Plain => load_plain(&bytes, args.terminator),
        Format::Fasta => load_fasta(&bytes, args.terminator),
    };
    collection.with_context(|| format!("loading {}", path.display()))
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn resolve_layout(
    choice: &LayoutChoice,
    table: &MoveTable,
    graph: &miov_core::TransitionGraph,
    max_runs: usize,
    exclude_hops: bool,
) -> Result<Layout> {
    let layout = match choice {
        LayoutChoice::File(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading layout {}", path.display()))?;
            let layout = Layout::from_text(&text)
                .with_context(|| format!("layout file {}", path.display()))?;
            if layout.len() != table.n_runs() {
                bail!("layout file lists {} runs, table has {}", layout.len(), table.n_runs());
            }
            layout
        }
        LayoutChoice::Builtin(Strategy::FirstVisit) => first_visit_order(table, !exclude_hops)?,
        LayoutChoice::Builtin(strategy) => {
            reorder::reorder(table, graph, *strategy, max_runs)?.layout
        }
    };
    Ok(layout)
}

fn cmd_build(input: &Path, corpus: &CorpusArgs, output: Option<&Path>) -> Result<ExitCode> {
    let collection = load_corpus(input, corpus)?;
    let table = build_move_table(&build_multibwt(&collection));
    emit(output, &table_io::serialize(&table))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(path: &Path, include_terminator_edges: bool, dot: bool) -> Result<ExitCode> {
    let table = load_table(path)?;
    let graph = trace_inversion(&table, include_terminator_edges)?;
    let text = if dot {
        export_dot(&graph, &Layout::identity(table.n_runs()))?
    } else {
        format!("# total {}\n{}", graph.total_weight(), export_graph_tsv(&graph))
    };
    emit(None, text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reorder(
    path: &Path,
    choice: &LayoutChoice,
    max_runs: usize,
    exclude_hops: bool,
    output: Option<&Path>,
    layout_out: Option<&Path>,
) -> Result<ExitCode> {
    let table = load_table(path)?;
    let graph = trace_inversion(&table, false)?;
    let layout = resolve_layout(choice, &table, &graph, max_runs, exclude_hops)?;
    let report = locality_report(&graph, &layout)?;
    let reordered = apply_layout(&table, &layout)?;
    emit(output, &table_io::serialize(&reordered))?;
    if let Some(p) = layout_out {
        fs::write(p, layout.to_text()).with_context(|| format!("writing {}", p.display()))?;
    }
    let line = format!(
        "{} {} {} {:.6}",
        choice.name(),
        report.adjacent,
        report.total,
        report.fraction
    );
    // the table owns stdout unless it went to a file
    if output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_invert(path: &Path, raw_reversed: bool) -> Result<ExitCode> {
    let table = load_table(path)?;
    let collection = invert(&table)?;
    let mut out = Vec::with_capacity(collection.total_len());
    for s in collection.strings() {
        if raw_reversed {
            out.extend(s.iter().rev());
        } else {
            out.extend_from_slice(s);
        }
        out.push(b'\n');
    }
    emit(None, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(path: &Path, corpus: Option<&Path>, corpus_args: &CorpusArgs) -> Result<ExitCode> {
    let bytes = read_input(path)?;
    let table = match table_io::parse(&bytes) {
        Ok(t) => t,
        Err(ParseError::Structure(e)) => {
            println!("FAIL structure: {e}");
            return Err(VerifyFailed.into());
        }
        Err(e) => return Err(e).with_context(|| format!("parsing table {}", path.display())),
    };
    println!("ok   structure: {} runs, {} rows", table.n_runs(), table.total());

    let mut failures = 0;
    let terminator = corpus_args.terminator;
    let issues = table.consistency_issues(terminator);
    if issues.is_empty() {
        println!("ok   lf pointers: every ptr/off is the LF image of its run head");
    }
    for issue in &issues {
        failures += 1;
        println!("FAIL lf pointers: {issue}");
    }
    let mut over_end = Vec::new();
    for &run in table.bwt_order() {
        let len = table.row(run).len;
        if let Err(e) = table.lf_walk(RunPosition::new(run, len), |_| {}) {
            over_end.push(format!("run {run}: {e}"));
        }
    }
    if issues.is_empty() && over_end.is_empty() {
        if let Err(e) = invert(&table) {
            over_end.push(format!("inversion: {e}"));
        }
    }
    for msg in &over_end {
        failures += 1;
        println!("FAIL walk: {msg}");
    }

    if let Some(corpus_path) = corpus {
        let collection = load_corpus(corpus_path, corpus_args)?;
        let bwt = build_multibwt(&collection);
        if table.decode() == bwt.chars() {
            println!("ok   corpus: decoded BWT matches the corpus");
            let lf = bwt.lf_all();
            let mut mismatches = 0usize;
            for row in 1..=bwt.len() {
                match table.lf_row(row) {
                    Ok(v) if v == lf[row - 1] => {}
                    _ => {
                        mismatches += 1;
                        if mismatches <= 5 {
                            let p = table.pos_of(row)?;
                            println!("FAIL lf oracle: row {row} (run {} offset {})", p.run, p.offset);
                        }
                    }
                }
            }
            if mismatches == 0 {
                println!("ok   lf oracle: {} positions agree with C + rank", bwt.len());
            }
            failures += mismatches;
        } else {
            failures += 1;
            println!("FAIL corpus: decoded BWT differs from the corpus BWT");
        }
    }

    if failures > 0 {
        return Err(VerifyFailed.into());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export_lp(path: &Path, output: Option<&Path>) -> Result<ExitCode> {
    let table = load_table(path)?;
    let graph = trace_inversion(&table, false)?;
    emit(output, export_bilp(&graph)?.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_split(path: &Path, d: usize, output: Option<&Path>) -> Result<ExitCode> {
    let table = load_table(path)?;
    let split = split_runs(&table, d)?;
    let (_, before) = table.hop_stats()?;
    let (_, after) = split.hop_stats()?;
    emit(output, &table_io::serialize(&split))?;
    eprintln!("runs {} -> {}, max hops {before} -> {after}", table.n_runs(), split.n_runs());
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(path: &Path, layouts: &[LayoutChoice], reps: usize, max_runs: usize) -> Result<ExitCode> {
    if reps == 0 {
        bail!("--reps must be at least 1");
    }
    if layouts.is_empty() {
        bail!("--layouts needs at least one layout");
    }
    let table = load_table(path)?;
    let graph = trace_inversion(&table, false)?;
    let mut out = format!("{}\n", BenchReport::TSV_HEADER);
    for choice in layouts {
        let layout = resolve_layout(choice, &table, &graph, max_runs, false)?;
        let report = bench_layout(&table, &graph, &choice.name(), &layout, reps)?;
        out.push_str(&report.tsv_row());
        out.push('\n');
    }
    emit(None, out.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build { input, corpus, output } => cmd_build(&input, &corpus, output.as_deref()),
        Command::Trace { table, include_terminator_edges, tsv: _, dot } => {
            cmd_trace(&table, include_terminator_edges, dot)
        }
        Command::Reorder { table, strategy, max_runs, exclude_hops, output, layout_out } => {
            cmd_reorder(
                &table,
                &strategy,
                max_runs,
                exclude_hops,
                output.as_deref(),
                layout_out.as_deref(),
            )
        }
        Command::Invert { table, raw_reversed } => cmd_invert(&table, raw_reversed),
        Command::Verify { table, corpus, corpus_args } => {
            cmd_verify(&table, corpus.as_deref(), &corpus_args)
        }
        Command::ExportLp { table, output } => cmd_export_lp(&table, output.as_deref()),
        Command::Split { table, d, output } => cmd_split(&table, d, output.as_deref()),
        Command::Bench { table, layouts, reps, max_runs } => {
            cmd_bench(&table, &layouts, reps, max_runs)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) if e.is::<VerifyFailed>() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gpdcoh::{Budget, DEFAULT_BUDGET};

use gpdcoh_cli::commands::{self, Failure, Theorem};
use gpdcoh_cli::render;
use gpdcoh_cli::schema::{Document, Kind, ReportDoc};

/// Non-abelian 2-cocycles of finite groupoids.
#[derive(Parser)]
#[command(name = "gpdcoh", version)]
struct Cli {
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Search node budget.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document against its axioms.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Cohomology classes of a groupoid with coefficients in a family.
    H2 {
        groupoid: PathBuf,
        family: PathBuf,
        #[arg(long)]
        witnesses: bool,
    },
    /// Twisted product of a cocycle, as an extension.
    Twist { cocycle: PathBuf },
    /// Weak action of a fibration through a cleavage.
    Fiber {
        fibration: PathBuf,
        #[arg(long, conflicts_with = "cleavage", required_unless_present = "cleavage")]
        canonical: bool,
        #[arg(long)]
        cleavage: Option<PathBuf>,
    },
    /// Comparison isomorphism from a fibration to the twisted product of its fiber action.
    Gamma {
        fibration: PathBuf,
        #[arg(long)]
        cleavage: Option<PathBuf>,
    },
    /// Check a theorem on the given inputs.
    Check {
        #[arg(value_enum)]
        theorem: Theorem,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Nerve of a groupoid, or of the automorphism 2-groupoid of a family.
    Nerve { path: PathBuf },
    /// Simplicial map classifying a cocycle.
    Map { cocycle: PathBuf },
    /// Random single-cell mutations that validation must catch.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 256)]
        cases: usize,
    },
}

fn run(cli: &Cli) -> commands::Outcome {
    let budget = Budget::new(cli.budget);
    match &cli.command {
        Command::Validate { path, kind } => commands::validate(path, *kind),
        Command::H2 { groupoid, family, witnesses } => commands::h2_classes(groupoid, family, &budget, *witnesses),
        Command::Twist { cocycle } => commands::twist_cmd(cocycle),
        Command::Fiber { fibration, cleavage, .. } => commands::fiber_cmd(fibration, cleavage.as_deref()),
        Command::Gamma { fibration, cleavage } => commands::gamma_cmd(fibration, cleavage.as_deref()),
        Command::Check { theorem, inputs } => commands::check(*theorem, inputs, &budget),
        Command::Nerve { path } => commands::nerve_cmd(path),
        Command::Map { cocycle } => commands::map_cmd(cocycle),
        Command::Fuzz { seed, cases } => commands::fuzz(*seed, *cases),
    }
}

fn subject(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::H2 { .. } => "h2",
        Command::Twist { .. } => "twist",
        Command::Fiber { .. } => "fiber",
        Command::Gamma { .. } => "gamma",
        Command::Check { .. } => "check",
        Command::Nerve { .. } => "nerve",
        Command::Map { .. } => "map",
        Command::Fuzz { .. } => "fuzz",
    }
}

fn emit(cli: &Cli, doc: &Document) -> std::io::Result<()> {
    let text = render::render(&serde_json::to_value(doc).expect("documents serialize"));
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("gpdcoh: {e}");
            return ExitCode::from(2);
        }
    }
    let (doc, code) = match run(&cli) {
        Ok(done) => done,
        Err(Failure { code, violations }) => {
            for v in &violations {
                eprintln!("gpdcoh: {}: {}", v.rule, v.message);
            }
            let report = ReportDoc { subject: subject(&cli.command).into(), ok: false, violations, result: Default::default() };
            (Document::new(Kind::Report, &report), code)
        }
    };
    if let Err(e) = emit(&cli, &doc) {
        eprintln!("gpdcoh: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use phscalc_cli::corpus::{self, Faults};
use phscalc_cli::exec::{run_document, run_task, Options};
use phscalc_cli::{parse, parse_poly, Document, Task, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "phscalc", version, about = "Exact calculus of real affine varieties with circle actions")]
struct Cli {
    /// Append key=value blocks to every report
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every task in an input file (`-` for stdin)
    Run {
        file: PathBuf,
        /// Slice range for graded tasks without their own mmax
        #[arg(long)]
        mmax: Option<i64>,
    },
    /// Validate a declared pair
    Validate(PairArgs),
    /// Convert between DPD and phs form
    Convert(PairArgs),
    /// Graded pieces, involution, generation degree and center ideal
    Graded {
        #[command(flatten)]
        args: PairArgs,
        #[arg(long)]
        mmax: Option<i64>,
    },
    /// Real forms of a pair
    Classify(PairArgs),
    /// Decide equivariant isomorphism of two declared pairs
    Equiv { file: PathBuf, first: String, second: String },
    /// Downgrade a torus action on affine space to a circle action
    Downgrade {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
    },
    /// Checks for the exotic real structures on the fourfold
    Mj {
        #[command(subcommand)]
        cmd: MjCmd,
    },
    /// Run the built-in example corpus
    Corpus {
        /// Only cases whose name contains this text
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(clap::Args)]
struct PairArgs {
    file: PathBuf,
    /// Pair name; defaults to the last declared pair
    #[arg(long)]
    pair: Option<String>,
}

#[derive(Subcommand)]
enum MjCmd {
    /// det M_P = 1, sigma_P^2 = id and the formula for h_P
    Verify {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        r: u32,
    },
    /// Whether P2(z) = c*P1(c^2*z) mod z^r for a real c
    Equiv {
        #[arg(long = "P1", allow_hyphen_values = true)]
        p1: String,
        #[arg(long = "P2", allow_hyphen_values = true)]
        p2: String,
        #[arg(long)]
        r: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    HopfSign,
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load(path: &PathBuf) -> Result<Document, String> {
    let src = read_input(path)?;
    parse(&src).map_err(|e| format!("{}: {e}", path.display()))
}

fn single(doc: &Document, task: Task, opts: &Options) -> i32 {
    if let Some(name) = task_pair(&task) {
        if doc.pair(name).is_none() {
            eprintln!("undeclared pair {name}");
            return EXIT_INPUT;
        }
    }
    let rep = run_task(doc, &task, opts);
    print!("{}", rep.render(opts.machine));
    rep.status.exit_code()
}

fn task_pair(task: &Task) -> Option<&String> {
    match task {
        Task::Validate(p) | Task::Convert(p) | Task::Classify(p) | Task::Graded { pair: p, .. } => p.as_ref(),
        _ => None,
    }
}

fn poly_arg(s: &str) -> Result<phscalc_core::arith::Poly1, String> {
    parse_poly(s).map_err(|e| format!("polynomial {s:?}: {e}"))
}

fn run(cli: Cli) -> Result<i32, String> {
    let mut opts = Options { machine: cli.machine, ..Options::default() };
    Ok(match cli.cmd {
        Cmd::Run { file, mmax } => {
            opts.mmax = mmax;
            let (out, code) = run_document(&load(&file)?, &opts);
            print!("{out}");
            code
        }
        Cmd::Validate(a) => single(&load(&a.file)?, Task::Validate(a.pair), &opts),
        Cmd::Convert(a) => single(&load(&a.file)?, Task::Convert(a.pair), &opts),
        Cmd::Classify(a) => single(&load(&a.file)?, Task::Classify(a.pair), &opts),
        Cmd::Graded { args, mmax } => {
            opts.mmax = mmax;
            single(&load(&args.file)?, Task::Graded { pair: args.pair, mmax: None }, &opts)
        }
        Cmd::Equiv { file, first, second } => {
            let doc = load(&file)?;
            for n in [&first, &second] {
                if doc.pair(n).is_none() {
                    return Err(format!("undeclared pair {n}"));
                }
            }
            single(&doc, Task::Equiv(first, second), &opts)
        }
        Cmd::Downgrade { weights, labels } => {
            let rep = run_task(&Document::empty(), &Task::Downgrade { weights, labels }, &opts);
            print!("{}", rep.render(opts.machine));
            rep.status.exit_code()
        }
        Cmd::Mj { cmd } => {
            let task = match cmd {
                MjCmd::Verify { p, r } => Task::MjVerify { p: poly_arg(&p)?, r },
                MjCmd::Equiv { p1, p2, r } => Task::MjEquiv { p1: poly_arg(&p1)?, p2: poly_arg(&p2)?, r },
            };
            let rep = run_task(&Document::empty(), &task, &opts);
            print!("{}", rep.render(opts.machine));
            rep.status.exit_code()
        }
        Cmd::Corpus { filter, inject_fault } => {
            let faults = Faults { hopf_sign: matches!(inject_fault, Some(Fault::HopfSign)) };
            let results = corpus::run(filter.as_deref(), &faults);
            let rep = corpus::report(&results);
            print!("{}", rep.render(opts.machine));
            rep.status.exit_code()
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    };
    ExitCode::from(u8::try_from(code).unwrap_or(2))
}

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use online_sap::fast::ValidationMode;
use online_sap::generators::{gen_complete, gen_minmax_adversary, gen_random, gen_random_degrees, gen_star_chain, pad_with_single_edges};
use online_sap::harness::{bench, run, small_suite, verify_instance, write_bench_csv, Engine, RunOptions};
use online_sap::io::{parse_rational, read_instance_file, write_instance};
use online_sap::{Error, Rational, Result};

#[derive(Parser)]
#[command(name = "sap", version, about = "Online bipartite matching with shortest augmenting paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated instance.
    #[command(subcommand)]
    Gen(GenKind),
    /// Run an engine over an instance file and emit per-arrival telemetry.
    Run(RunArgs),
    /// Check invariants on an instance file or the built-in corpus.
    Verify(VerifyArgs),
    /// Sweep random instances and report replacement totals.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenKind {
    Complete {
        #[arg(long)]
        clients: usize,
        #[arg(long)]
        servers: usize,
    },
    Random {
        #[arg(long)]
        servers: usize,
        #[arg(long)]
        clients: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Draw each degree uniformly from degree..=max-degree.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Adversary {
        #[arg(long = "L")]
        l: usize,
        /// Pad with single-edge pairs up to this many clients.
        #[arg(long)]
        pad: Option<usize>,
    },
    StarChain {
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, default_value = "naive")]
    engine: Engine,
    #[arg(long, value_parser = parse_rational)]
    epsilon: Option<Rational>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    analyze: bool,
    /// Telemetry destination; standard output when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    file: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    analyze: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn gen(kind: GenKind) -> Result<()> {
    let inst = match kind {
        GenKind::Complete { clients, servers } => gen_complete(clients, servers)?,
        GenKind::Random { servers, clients, degree, max_degree: None, seed } => {
            gen_random(servers, clients, degree, seed)?
        }
        GenKind::Random { servers, clients, degree, max_degree: Some(max), seed } => {
            gen_random_degrees(servers, clients, degree, max, seed)?
        }
        GenKind::Adversary { l, pad } => {
            let inst = gen_minmax_adversary(l)?;
            match pad {
                Some(n) => {
                    if l * l > n / 2 {
                        return Err(Error::InvalidParameter(format!("L = {l} needs at least {} clients", 2 * l * l)));
                    }
                    pad_with_single_edges(&inst, n)?
                }
                None => inst,
            }
        }
        GenKind::StarChain { depth } => gen_star_chain(depth)?,
    };
    io::stdout().lock().write_all(write_instance(&inst).as_bytes())?;
    Ok(())
}

fn run_cmd(args: RunArgs) -> Result<bool> {
    let inst = read_instance_file(&args.file)?;
    let opts = RunOptions {
        engine: args.engine,
        epsilon: args.epsilon,
        h: args.h,
        analyze: args.analyze,
        validation: ValidationMode::default(),
    };
    let outcome = run(&inst, &opts)?;
    outcome.write_csv(output(args.csv.as_ref())?)?;
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    Ok(true)
}

fn verify_cmd(args: VerifyArgs) -> Result<bool> {
    let cases = match (&args.suite, &args.file) {
        (Some(name), None) if name == "small" => small_suite()?,
        (Some(name), None) => return Err(Error::InvalidParameter(format!("unknown suite {name:?}"))),
        (None, Some(path)) => vec![(path.display().to_string(), read_instance_file(path)?)],
        _ => return Err(Error::InvalidParameter("give either a file or --suite small".into())),
    };
    let analyze = args.analyze || args.suite.is_some();
    let mut ok = true;
    for (name, inst) in cases {
        let report = verify_instance(&inst, analyze)?;
        println!("== {name}");
        print!("{report}");
        ok &= report.all_passed();
    }
    println!("{}", if ok { "all checks passed" } else { "some checks FAILED" });
    Ok(ok)
}

fn bench_cmd(args: BenchArgs) -> Result<bool> {
    let rows = bench(&args.sizes, args.seeds, args.degree)?;
    write_bench_csv(output(args.csv.as_ref())?, &rows)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(kind) => gen(kind).map(|_| true),
        Command::Run(args) => run_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Bench(args) => bench_cmd(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

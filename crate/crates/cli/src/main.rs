//! `spinorlab` command-line front end.
//!
//! Exit codes: 0 on success (for `verify`: every check passed), 1 when a
//! verification check failed, 2 on an operational error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spinorlab::analysis::{self, Tolerances};
use spinorlab::constructors::{self, SeededSampler};
use spinorlab::harness::{self, SuiteConfig, SuiteName, DEFAULT_SEED};
use spinorlab::kahler::{kaehler_spectrum, ComplexStructureMatrix};
use spinorlab::{Spinor, SpinorError, SpinorSpace};

#[derive(Parser)]
#[command(
    name = "spinorlab",
    version,
    about = "Spinor nullity, purity and almost-CR structure toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a spinor and summarize its almost-CR data.
    Classify(ClassifyArgs),
    /// Run randomized verification suites and write a report.
    Verify(VerifyArgs),
    /// Print the Kaehler-form spectrum for the standard complex structure.
    Spectrum(SpectrumArgs),
    /// Build a spinor and save it to a file.
    Construct(ConstructArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Psi1,
    Psi2,
    Random,
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in spinor.
    #[arg(long, value_enum, conflicts_with = "file")]
    builtin: Option<Builtin>,
    /// Ambient dimension for built-in spinors.
    #[arg(long)]
    n: Option<usize>,
    /// Spinor file.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, env = "SPINORLAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Relative singular-value threshold for the numerical rank.
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Also print a machine-readable block.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run (repeatable or comma separated); `all` selects every suite.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    suite: Vec<String>,
    #[arg(long, default_value_t = 2)]
    nmin: usize,
    #[arg(long, default_value_t = 12)]
    nmax: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "SPINORLAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Report file; without it the report goes to stdout when `--json` is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Even ambient dimension `2m`.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Target nullity; builds the tensor-product spinor of that nullity.
    #[arg(long, conflicts_with_all = ["builtin", "file"])]
    nullity: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(args) => classify(args),
        Command::Verify(args) => verify(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Construct(args) => construct(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_source(source: &SourceArgs) -> Result<Spinor, SpinorError> {
    if let Some(path) = &source.file {
        return harness::load_spinor(path);
    }
    let builtin = source
        .builtin
        .ok_or_else(|| SpinorError::Config("give either --file or --builtin".into()))?;
    let n = source
        .n
        .ok_or_else(|| SpinorError::Config("--builtin needs --n".into()))?;
    match builtin {
        Builtin::Psi1 => constructors::psi_pure(n),
        Builtin::Psi2 => constructors::psi_totally_impure(n),
        Builtin::Random => Ok(constructors::random_spinor(
            SpinorSpace::new(n)?,
            &mut SeededSampler::new(source.seed),
        )),
    }
}

fn tolerances(tol_rank: Option<f64>) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = tol_rank {
        tol.rank = t;
    }
    tol
}

fn classify(args: ClassifyArgs) -> Result<u8, SpinorError> {
    let psi = load_source(&args.source)?;
    let tol = tolerances(args.tol_rank);
    let report = analysis::nullity_with(&psi, &tol)?;
    let class = analysis::classify_with(&psi, &tol)?;
    let frame = match analysis::cr_frame_with(&psi, &tol) {
        Ok(frame) => Some(frame),
        Err(SpinorError::EmptyDistribution) => None,
        Err(e) => return Err(e),
    };
    let xi = analysis::xi_vector_with(&psi, &tol)?;

    println!("{class}");
    println!("  dimension n      : {}", psi.space().n());
    println!("  nullity          : {}", report.nullity);
    println!("  rank gap         : {:.3e}", report.rank_gap);
    match &frame {
        Some(f) => {
            println!("  dim D            : {}", f.dim_d());
            println!("  dim D^perp       : {}", f.dperp_basis.len());
            println!("  J residual       : {:.3e}", f.j_residual);
        }
        None => println!("  dim D            : 0"),
    }
    println!("  xi               : {:?}", xi.as_slice());

    if args.json {
        let frame_json = frame.as_ref().map(|f| {
            json!({
                "dim_d": f.dim_d(),
                "d_basis": f.d_basis.iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>(),
                "j_matrix": f.j_matrix.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
                "dperp_basis": f.dperp_basis.iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>(),
            })
        });
        let block = json!({
            "n": psi.space().n(),
            "classification": class,
            "nullity": report.nullity,
            "singular_values": report.singular_values,
            "rank_gap": report.rank_gap,
            "xi": xi.as_slice(),
            "cr_frame": frame_json,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&block).map_err(|e| SpinorError::Io(e.to_string()))?
        );
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8, SpinorError> {
    let mut suites = Vec::new();
    for name in &args.suite {
        if name == "all" {
            suites.extend(SuiteName::ALL);
        } else if !name.is_empty() {
            suites.push(name.parse()?);
        }
    }
    let config = SuiteConfig {
        n_min: args.nmin,
        n_max: args.nmax,
        trials: args.trials,
        seed: args.seed,
        tolerances: tolerances(args.tol_rank),
        suites,
        ..SuiteConfig::default()
    };
    let report = harness::run_suite(&config)?;
    if let Some(path) = &args.out {
        report.write(path)?;
    } else if args.json {
        print!("{}", report.to_json()?);
    }
    if args.out.is_some() || !args.json {
        for suite in SuiteName::ALL {
            let recs: Vec<_> = report.records.iter().filter(|r| r.suite == suite).collect();
            if recs.is_empty() {
                continue;
            }
            let passed = recs
                .iter()
                .filter(|r| r.status == harness::Status::Pass)
                .count();
            let verdict = if passed == recs.len() { "PASS" } else { "FAIL" };
            println!("{verdict} {suite:<12} {passed}/{} checks", recs.len());
        }
        let s = report.summary;
        println!(
            "total {} passed {} failed {} errors {} ({:.2} s)",
            s.total, s.passed, s.failed, s.errors, report.timing.wall_time_s
        );
    }
    Ok(report.exit_code() as u8)
}

fn spectrum(args: SpectrumArgs) -> Result<u8, SpinorError> {
    if !args.n.is_multiple_of(2) {
        return Err(SpinorError::Parity(format!(
            "spectrum needs even dimension, got {}",
            args.n
        )));
    }
    SpinorSpace::new(args.n)?;
    let j = ComplexStructureMatrix::standard(args.n / 2)?;
    let spec = kaehler_spectrum(&j)?;
    if args.json {
        let levels: Vec<_> = spec
            .levels
            .iter()
            .map(|l| json!({"r": l.r, "eigenvalue": [l.eigenvalue.re, l.eigenvalue.im], "multiplicity": l.multiplicity}))
            .collect();
        let block = json!({
            "n": args.n,
            "m": spec.m(),
            "levels": levels,
            "max_eigenvalue_residual": spec.max_eigenvalue_residual,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&block).map_err(|e| SpinorError::Io(e.to_string()))?
        );
    } else {
        println!("m = {}", spec.m());
        for l in &spec.levels {
            println!(
                "r = {}  eigenvalue = {:+}i  multiplicity = {}",
                l.r, l.eigenvalue.im, l.multiplicity
            );
        }
    }
    Ok(0)
}

fn construct(args: ConstructArgs) -> Result<u8, SpinorError> {
    let psi = match args.nullity {
        Some(target) => {
            let n = args
                .source
                .n
                .ok_or_else(|| SpinorError::Config("--nullity needs --n".into()))?;
            constructors::construct_with_nullity(n, target)?
        }
        None => load_source(&args.source)?,
    };
    harness::save_spinor(&psi, &args.out)?;
    println!(
        "wrote spinor in dimension {} to {}",
        psi.space().n(),
        args.out.display()
    );
    Ok(0)
}

//! `pnspace`: run verification suites against JSON space descriptions
//! and compute one-off values in the DF text format.
//!
//! Exit codes: 0 when the aggregate verdict passes (expected-failure
//! testbeds count their documented failure as a pass), 1 for failures
//! and bad input, 2 when a check came back inconclusive.

mod document;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pnspace_core::distfn::sibley;
use pnspace_core::error::PnError;
use pnspace_core::pnspace::SpaceKind;
use pnspace_core::quotient::{
    dist_to_subspace, quotient_norm, QuotientSpace, QuotientStrategy, SampleSchedule, Subspace,
};
use pnspace_core::spacefile::{
    load_distfn, load_space_spec, parse_norm_name, parse_subspace_arg, parse_tnorm_name,
};
use pnspace_core::trifn::TriangleFn;
use pnspace_core::vector::Vector;

#[derive(Parser)]
#[command(
    name = "pnspace",
    version,
    about = "Verification runner for probabilistic normed spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a JSON report.
    Run(RunArgs),
    /// One-off calculations printed to stdout.
    #[command(subcommand)]
    Compute(ComputeCmd),
}

#[derive(Args)]
struct RunArgs {
    /// Path to a JSON space description.
    #[arg(long)]
    space: PathBuf,
    /// Subspace override: `c00-sum-kernel` or semicolon-separated basis
    /// vectors such as "1 0 0; 0 1 0".
    #[arg(long)]
    subspace: Option<String>,
    /// Suite to run; repeat the flag to run several.
    #[arg(long = "suite", required = true)]
    suites: Vec<String>,
    /// Sample count handed to each randomized check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// RNG seed; runs never take implicit entropy.
    #[arg(long)]
    seed: u64,
    /// Horizon for sequence scans and closedness probes.
    #[arg(long, default_value_t = 100)]
    horizon: usize,
    /// Numeric tolerance for metric solves.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ComputeCmd {
    /// Sibley distance between two DF files.
    Sibley {
        lhs: PathBuf,
        rhs: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Triangle-function convolution of two DF files, printed as DF text.
    Tau {
        /// `min`, `product`, `lukasiewicz`, or a TN v1 file path.
        #[arg(long)]
        tnorm: String,
        /// Use the dual (inf) convolution instead of the sup convolution.
        #[arg(long)]
        dual: bool,
        lhs: PathBuf,
        rhs: PathBuf,
    },
    /// Quotient norm of a point, printed as DF text.
    QuotientNorm {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        subspace: Option<String>,
        /// Space-separated coordinates, e.g. "0.3 0.4".
        #[arg(long)]
        point: String,
    },
    /// Classical distance from a point to a spanned subspace.
    Dist {
        /// `l1`, `l2`, or `linf`.
        #[arg(long)]
        norm: String,
        /// Semicolon-separated basis vectors, e.g. "1 0; 0 1".
        #[arg(long)]
        basis: String,
        /// Space-separated coordinates.
        #[arg(long)]
        point: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            if matches!(err, PnError::Inconclusive(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, PnError> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Compute(cmd) => {
            compute(cmd)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(args: RunArgs) -> Result<ExitCode, PnError> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(PnError::Domain(format!(
            "--tol must be positive and finite, got {}",
            args.tol
        )));
    }
    if args.samples == 0 {
        return Err(PnError::Domain("--samples must be positive".into()));
    }
    let started = Instant::now();

    let spec = load_space_spec(&args.space)?;
    let (space, spec_subspace) = spec.into_parts();
    let subspace = match &args.subspace {
        Some(text) => Some(parse_subspace_arg(text, &space)?),
        None => spec_subspace,
    };
    let ctx = suites::SuiteContext {
        space,
        subspace,
        samples: args.samples,
        seed: args.seed,
        horizon: args.horizon,
        tol: args.tol,
    };

    let mut rows = Vec::new();
    for suite in &args.suites {
        for report in suites::run_suite(suite, &ctx)? {
            rows.push((suite.clone(), report));
        }
    }

    let config = document::ConfigEcho {
        space: args.space.display().to_string(),
        subspace: args.subspace.clone(),
        suites: args.suites.clone(),
        samples: args.samples,
        seed: args.seed,
        horizon: args.horizon,
        tol: args.tol,
    };
    let doc = document::assemble(config, rows);
    let json = doc.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, &json)?,
        None => print!("{json}"),
    }
    eprintln!(
        "ran {} suite(s) in {:.2}s",
        args.suites.len(),
        started.elapsed().as_secs_f64()
    );

    Ok(if doc.any_inconclusive {
        ExitCode::from(2)
    } else if doc.aggregate {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn compute(cmd: ComputeCmd) -> Result<(), PnError> {
    match cmd {
        ComputeCmd::Sibley { lhs, rhs, tol } => {
            let f = load_distfn(&lhs)?;
            let g = load_distfn(&rhs)?;
            // Distances to the identity have an exact closed form.
            let value = if g.is_eps0() {
                f.sibley_to_eps0().value()
            } else if f.is_eps0() {
                g.sibley_to_eps0().value()
            } else {
                sibley(&f, &g, tol)?.value()
            };
            println!("{value}");
        }
        ComputeCmd::Tau {
            tnorm,
            dual,
            lhs,
            rhs,
        } => {
            let t = parse_tnorm_name(&tnorm, Path::new("."))?;
            let tau = if dual {
                TriangleFn::InfConvDual(t)
            } else {
                TriangleFn::SupConv(t)
            };
            let out = tau.apply(&load_distfn(&lhs)?, &load_distfn(&rhs)?);
            print!("{}", out.to_df_text());
        }
        ComputeCmd::QuotientNorm {
            space,
            subspace,
            point,
        } => {
            let spec = load_space_spec(&space)?;
            let (sp, spec_subspace) = spec.into_parts();
            let w = match &subspace {
                Some(text) => parse_subspace_arg(text, &sp)?,
                None => spec_subspace.ok_or_else(|| {
                    PnError::Domain(
                        "no subspace given: pass --subspace or put one in the space description"
                            .into(),
                    )
                })?,
            };
            let p = parse_point(&point, sp.kind())?;
            let strategy = match sp.kind() {
                SpaceKind::FiniteDim(_) => QuotientStrategy::Exact,
                SpaceKind::C00 => QuotientStrategy::Sampled(SampleSchedule::default()),
            };
            let q = QuotientSpace::new(sp, w, strategy)?;
            print!("{}", quotient_norm(&q, &p)?.to_df_text());
        }
        ComputeCmd::Dist { norm, basis, point } => {
            let kind = parse_norm_name(&norm)?;
            let coords = parse_coords(&point)?;
            let dim = coords.len();
            let p = Vector::dense(coords)?;
            let basis_vecs = basis
                .split(';')
                .map(|chunk| Vector::dense(parse_coords(chunk)?))
                .collect::<Result<Vec<_>, _>>()?;
            let w = Subspace::span(basis_vecs, dim)?;
            println!("{}", dist_to_subspace(&p, &w, kind)?);
        }
    }
    Ok(())
}

fn parse_coords(text: &str) -> Result<Vec<f64>, PnError> {
    let coords = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| PnError::Domain(format!("bad coordinate `{tok}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.is_empty() {
        return Err(PnError::Domain("empty point".into()));
    }
    Ok(coords)
}

fn parse_point(text: &str, kind: SpaceKind) -> Result<Vector, PnError> {
    let coords = parse_coords(text)?;
    match kind {
        SpaceKind::FiniteDim(dim) => {
            if coords.len() != dim {
                return Err(PnError::DimensionMismatch(format!(
                    "point has {} coordinates, the space has dimension {dim}",
                    coords.len()
                )));
            }
            Vector::dense(coords)
        }
        // c00 points are given densely and stored by their support.
        SpaceKind::C00 => Vector::sparse(
            coords
                .into_iter()
                .enumerate()
                .filter(|(_, v)| *v != 0.0),
        ),
    }
}

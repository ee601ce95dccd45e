//! `hermix`: fit heterogeneous mixtures by moment matching.
//!
//! Exit status: 0 on success, 1 for usage, parse and input errors, 2 when a
//! well-formed problem cannot be solved. Failures after argument parsing
//! print a JSON document with an `error` key on stdout.

pub mod error;
pub mod families;
pub mod input;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hermix_core::eigensolve::{filter_real, residual, solve_variety, sort_points, DEFAULT_REAL_TOL};
use hermix_core::mixfit::{self, default_match_order, eda_scan, mixture_cdf, MixtureProblem, Sample};
use hermix_core::poly::{buchberger, parse_system, quotient_basis, MonomialOrder};
use hermix_core::rng::sample_mixture;
use hermix_core::Error;

pub use error::{CliError, EXIT_SOLVE, EXIT_USAGE};
pub use families::parse_family_list;
pub use input::{parse_sample, read_sample};

#[derive(Debug, Parser)]
#[command(name = "hermix", version, about = "Moment-matching fits of heterogeneous finite mixtures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit mixture weights and unknown parameters to a sample.
    Fit(FitArgs),
    /// Fit every subset of a family pool and rank the subsets by KS distance.
    Eda(EdaArgs),
    /// Draw a sample from a fully specified mixture.
    Gen(GenArgs),
    /// Solve a zero-dimensional polynomial system.
    Roots(RootsArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sample file, one value per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Components, e.g. "gaussian:mu=0,sigma2=1;exponential:theta=?t".
    #[arg(long)]
    pub families: String,
    /// Number of raw moments to match; defaults to the number of unknowns.
    #[arg(long)]
    pub moments: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write `x,empirical_cdf,fitted_cdf` rows to this CSV file.
    #[arg(long)]
    pub emit_cdf: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Largest accepted |Im| of a coordinate, relative above magnitude 1.
    #[arg(long, default_value_t = DEFAULT_REAL_TOL)]
    pub real_tol: f64,
}

#[derive(Debug, Args)]
pub struct EdaArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Candidate families, same grammar as `fit --families`.
    #[arg(long)]
    pub pool: String,
    #[arg(long)]
    pub subset_size: usize,
    #[arg(long)]
    pub moments: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Fully specified components.
    #[arg(long)]
    pub families: String,
    /// Comma-separated weights summing to 1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Vec<f64>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    /// One polynomial per flag, e.g. --poly "x^2 + y^2 - 1".
    #[arg(long = "poly", required = true, allow_hyphen_values = true)]
    pub polys: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_REAL_TOL)]
    pub real_tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Successful output: the text and where it goes.
struct Output {
    text: String,
    path: Option<PathBuf>,
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn load_sample(path: &Path) -> Result<Sample, CliError> {
    Sample::from_rationals(read_sample(path)?).map_err(CliError::Input)
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--real-tol must be positive, got {tol}")))
    }
}

fn cdf_csv(report: &mixfit::FitReport, sample: &Sample) -> Result<String, CliError> {
    let best = report.best_feasible().ok_or(CliError::NoFeasibleCandidate)?;
    let comps = best.fitted_components(&report.components).map_err(CliError::Solve)?;
    let xs = sample.sorted();
    let n = xs.len() as f64;
    let mut out = String::from("x,empirical_cdf,fitted_cdf\n");
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        let fitted = mixture_cdf(&comps, &best.weights, xs[i]).map_err(CliError::Solve)?;
        out.push_str(&format!("{},{},{}\n", report::num(xs[i]), report::num(j as f64 / n), report::num(fitted)));
        i = j;
    }
    Ok(out)
}

fn run_fit(args: &FitArgs) -> Result<Output, (CliError, Option<Box<mixfit::FitReport>>)> {
    let prepare = || -> Result<(MixtureProblem, Sample), CliError> {
        check_tol(args.real_tol)?;
        let components = parse_family_list(&args.families)?;
        let sample = load_sample(&args.input)?;
        let order = args.moments.unwrap_or_else(|| default_match_order(&components));
        let target = sample.target_moments(order).map_err(CliError::Input)?;
        let problem = MixtureProblem::new(components, Some(order), &target).map_err(CliError::Input)?;
        Ok((problem, sample))
    };
    let (problem, sample) = prepare().map_err(|e| (e, None))?;
    let report =
        mixfit::fit_with(&problem, Some(&sample), args.seed, args.real_tol).map_err(|e| (CliError::Solve(e), None))?;
    let doc = match report::fit(&report) {
        Ok(doc) => doc,
        Err(e) => return Err((e, Some(Box::new(report)))),
    };
    if let Some(path) = &args.emit_cdf {
        let csv = cdf_csv(&report, &sample).map_err(|e| (e, None))?;
        write_file(path, &csv).map_err(|e| (e, None))?;
    }
    Ok(Output { text: report::render(&doc), path: args.output.clone() })
}

fn run_eda(args: &EdaArgs) -> Result<Output, CliError> {
    let pool = parse_family_list(&args.pool)?;
    let sample = load_sample(&args.input)?;
    if args.moments == 0 {
        return Err(CliError::Usage("--moments must be at least 1".into()));
    }
    let entries = eda_scan(&sample, &pool, args.subset_size, args.moments, args.seed).map_err(|e| match e {
        Error::InvalidParameter(_) | Error::EmptyInput(_) => CliError::Input(e),
        other => CliError::Solve(other),
    })?;
    if entries.iter().all(|e| e.best_ks().is_none()) {
        return Err(CliError::NoFeasibleCandidate);
    }
    let doc = report::eda(&entries, pool.len(), args.subset_size, args.moments, args.seed);
    Ok(Output { text: report::render(&doc), path: args.output.clone() })
}

fn run_gen(args: &GenArgs) -> Result<Output, CliError> {
    let components = parse_family_list(&args.families)?;
    let (values, _) = sample_mixture(&components, &args.weights, args.n, args.seed).map_err(CliError::Input)?;
    let mut text = String::with_capacity(values.len() * 20);
    for v in values {
        text.push_str(&format!("{v}\n"));
    }
    Ok(Output { text, path: args.output.clone() })
}

fn run_roots(args: &RootsArgs) -> Result<Output, CliError> {
    check_tol(args.real_tol)?;
    let (ring, polys) = parse_system(&args.polys).map_err(|e| match e {
        Error::Parse { position, message } => CliError::Parse { position, message },
        other => CliError::Input(other),
    })?;
    let solve = || -> hermix_core::Result<_> {
        let g = buchberger(&polys, MonomialOrder::DegRevLex)?;
        let beta = quotient_basis(&g)?;
        let mut all = solve_variety(&g, &beta, args.seed)?;
        for p in all.iter_mut() {
            p.residual = residual(&polys, &p.coordinates);
        }
        sort_points(&mut all);
        let real = filter_real(&all, args.real_tol, &polys);
        Ok((beta.len(), all, real))
    };
    let (dim, all, real) = solve().map_err(CliError::Solve)?;
    let doc = report::roots(ring.vars(), dim, &all, &real);
    Ok(Output { text: report::render(&doc), path: args.output.clone() })
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Fit(a) => run_fit(a),
        Command::Eda(a) => run_eda(a).map_err(|e| (e, None)),
        Command::Gen(a) => run_gen(a).map_err(|e| (e, None)),
        Command::Roots(a) => run_roots(a).map_err(|e| (e, None)),
    };
    let result = result.and_then(|out| match &out.path {
        Some(path) => write_file(path, &out.text).map_err(|e| (e, None)),
        None => stdout.write_all(out.text.as_bytes()).map_err(|e| (CliError::io(Path::new("<stdout>"), e), None)),
    });
    match result {
        Ok(()) => 0,
        Err((err, report)) => {
            let _ = writeln!(stderr, "hermix: {err}");
            let _ = stdout.write_all(report::render(&report::error(&err, report.as_deref())).as_bytes());
            err.exit_code()
        }
    }
}

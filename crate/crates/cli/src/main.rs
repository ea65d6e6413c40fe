use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bifree::{
    format_f64, plot_rows, read_bivariate, read_samples, read_univariate, write_bivariate,
    write_univariate, CliError,
};
use bifree_core::{
    bifree_max_convolve, ecdf_from_samples, free_max_convolve, free_min_convolve,
    max_stable_residual, merge_grids, nfold, nth_root, psi_ratio, wedge_moment_closed_form,
    wedge_moment_limit, AffineNormalization, BivariateCdf, ProjectionPairLaw, RootOutcome,
    DEFAULT_EPS_CDF, DEFAULT_EPS_LIM,
};
use clap::{Parser, Subcommand, ValueEnum};

const DEFAULT_SPREAD: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "bifree", version, about = "Free and bi-free extremal convolutions of CDF grids")]
struct Args {
    /// Tolerance for distribution-function axioms.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS_CDF)]
    tol: f64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a CDF file against the distribution-function axioms.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Bi)]
        kind: Kind,
    },
    /// Free max or min convolution of two univariate CDFs.
    Uniconv {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, value_enum, default_value_t = Op::Max)]
        op: Op,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bi-free max-convolution of two bivariate CDFs.
    Biconv {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n-fold bi-free max-convolution power.
    Nfold {
        path: PathBuf,
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n-th root candidate; exit 1 with a report when it is not a CDF.
    Root {
        path: PathBuf,
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// sup |H(a x + b, c y + d) - F(x, y)| for H the n-fold power of F.
    #[command(allow_negative_numbers = true)]
    Stability {
        path: PathBuf,
        n: u32,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    /// Wedge moment of two projection pairs by three independent routes.
    Oracle {
        p: f64,
        q: f64,
        r: f64,
        p2: f64,
        q2: f64,
        r2: f64,
        /// Two-point stability tolerance of the limit ladder.
        #[arg(long, default_value_t = DEFAULT_EPS_LIM)]
        tol_lim: f64,
        /// Largest accepted pairwise difference between the routes.
        #[arg(long, default_value_t = DEFAULT_SPREAD)]
        tol_spread: f64,
    },
    /// Empirical CDF of TSV samples.
    Ecdf {
        samples: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// x, y, F rows of a bivariate CDF for contour plots.
    Plotdata {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Uni,
    Bi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Op {
    Max,
    Min,
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{}", String::from_utf8_lossy(bytes));
            Ok(())
        }
    }
}

fn emit_bivariate(out: Option<&Path>, f: &BivariateCdf) -> Result<(), CliError> {
    match out {
        Some(path) => write_bivariate(path, f),
        None => emit(None, &bifree::bivariate_to_json(f)),
    }
}

fn report(violations: &[impl std::fmt::Display]) -> String {
    let mut s = format!("{} violation(s)", violations.len());
    for v in violations {
        s.push_str(&format!("\n  {v}"));
    }
    s
}

fn summary(h: &BivariateCdf, f: &BivariateCdf, g: &BivariateCdf, tol: f64) -> Result<(), CliError> {
    let (nx, ny) = h.shape();
    eprintln!("grid {nx} x {ny}, total mass {}", h.total_mass());
    let (fm, gm) = merge_grids(f, g)?;
    let ((f1, f2), (g1, g2)) = (fm.marginals(), gm.marginals());
    let (h1, h2) = h.marginals();
    let exact = h1 == free_max_convolve(&f1, &g1, tol)? && h2 == free_max_convolve(&f2, &g2, tol)?;
    eprintln!("marginals {}", if exact { "exact" } else { "MISMATCH" });
    if psi_ratio(h).is_unit(0.0) {
        eprintln!("psi ≡ 1 (product of marginals)");
    }
    Ok(())
}

fn run(args: Args) -> Result<(), CliError> {
    let tol = args.tol;
    match args.cmd {
        Cmd::Validate { path, kind } => {
            let violations = match kind {
                Kind::Uni => read_univariate(&path)?.validate(tol),
                Kind::Bi => read_bivariate(&path)?.validate(tol),
            };
            if violations.is_empty() {
                println!("OK");
                Ok(())
            } else {
                Err(CliError::Domain(report(&violations)))
            }
        }
        Cmd::Uniconv { f, g, op, out } => {
            let (f, g) = (read_univariate(&f)?, read_univariate(&g)?);
            let h = match op {
                Op::Max => free_max_convolve(&f, &g, tol)?,
                Op::Min => free_min_convolve(&f, &g, tol)?,
            };
            match out {
                Some(path) => write_univariate(&path, &h),
                None => emit(None, &bifree::univariate_to_json(&h)),
            }
        }
        Cmd::Biconv { f, g, out } => {
            let (f, g) = (read_bivariate(&f)?, read_bivariate(&g)?);
            let h = bifree_max_convolve(&f, &g, tol)?;
            summary(&h, &f, &g, tol)?;
            emit_bivariate(out.as_deref(), &h)
        }
        Cmd::Nfold { path, n, out } => {
            let h = nfold(&read_bivariate(&path)?, n, tol)?;
            emit_bivariate(out.as_deref(), &h)
        }
        Cmd::Root { path, n, out } => match nth_root(&read_bivariate(&path)?, n, tol)? {
            RootOutcome::Root(r) => emit_bivariate(out.as_deref(), &r),
            RootOutcome::NotDivisible(v) => Err(CliError::Domain(format!(
                "not {n}-divisible: the root candidate has {}",
                report(&v)
            ))),
        },
        Cmd::Stability { path, n, a, b, c, d } => {
            let norm = AffineNormalization::new(a, b, c, d)?;
            let res = max_stable_residual(&read_bivariate(&path)?, n, &norm, tol)?;
            println!("{res:.9e}");
            Ok(())
        }
        Cmd::Oracle { p, q, r, p2, q2, r2, tol_lim, tol_spread } => {
            let law = |p, q, r| ProjectionPairLaw::new(p, q, r).map_err(|e| CliError::Domain(e.to_string()));
            let (a, b) = (law(p, q, r)?, law(p2, q2, r2)?);
            let closed = wedge_moment_closed_form(&a, &b);
            let limit = wedge_moment_limit(&a, &b, tol_lim)
                .map_err(|e| CliError::Domain(e.to_string()))?
                .value;
            let cell = bifree_max_convolve(&a.indicator_cdf(), &b.indicator_cdf(), tol)?.value(0, 0);
            let spread = (closed - limit).abs().max((closed - cell).abs()).max((limit - cell).abs());
            println!("closed_form\t{}", format_f64(closed));
            println!("wedge_limit\t{}", format_f64(limit));
            println!("indicator_cell\t{}", format_f64(cell));
            println!("spread\t{spread:e}");
            if spread > tol_spread {
                return Err(CliError::Domain(format!("spread {spread:e} exceeds {tol_spread:e}")));
            }
            Ok(())
        }
        Cmd::Ecdf { samples, out } => {
            let e = ecdf_from_samples(&read_samples(&samples)?)?;
            emit_bivariate(out.as_deref(), &e)
        }
        Cmd::Plotdata { path, out } => {
            let f = read_bivariate(&path)?;
            let violations = f.validate(tol);
            if !violations.is_empty() {
                return Err(CliError::Domain(report(&violations)));
            }
            emit(out.as_deref(), plot_rows(&f).as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! `edeg` — expected degrees of real Grassmannians from the command line.
//!
//! Every numerical result line carries a method tag and an error measure.
//! With `--json`, each result is additionally a machine-readable run record
//! on its own line; records are reproducible bit for bit for a fixed seed
//! (the `wall_time_s` field is the one intentionally non-reproducible
//! entry, which is why plain output never includes it).
//!
//! Exit codes: 0 success, 2 parameter error, 3 numerical non-convergence.

use clap::{Parser, Subcommand, ValueEnum};
use edeg_core::asymptotics::{
    self, lambda_closed, lambda_mc_coefficient, lambda_mc_sphere,
};
use edeg_core::complex_degree::{delta_complex, delta_complex_asymptotic};
use edeg_core::edeg::{self, Method};
use edeg_core::mc_schubert::{check_delta0, estimate_delta13};
use edeg_core::zonoid::{
    radial_maximum, sphere_moment, sphere_moment_quadrature, Direction, ZonoidModel,
};
use edeg_core::Error;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "edeg",
    version,
    about = "Expected degrees of real Grassmannians: exact complex degrees, elliptic line integrals, zonoid quadrature, Monte Carlo Schubert problems, and closed-form asymptotics"
)]
struct Cli {
    /// Emit one JSON run record per result line on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the Monte Carlo drivers (0 = library default).
    /// Results do not depend on this value.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Relative tolerance for the deterministic quadratures.
    #[arg(long, global = true, default_value_t = 1e-10)]
    rel_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LambdaMethod {
    Closed,
    Sphere,
    Coefficient,
}

#[derive(Subcommand)]
enum Command {
    /// Exact degree of the complex Grassmannian (an integer), or its
    /// large-n asymptotic with --asymptotic.
    Complex {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        asymptotic: bool,
    },
    /// delta_{1,n} by a chosen deterministic route.
    Delta1 {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "line-integral")]
        method: String,
    },
    /// delta_{k,n} by any supported method (see `delta --help`).
    Delta {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "line-integral")]
        method: String,
        /// Monte Carlo trials (monte-carlo method only).
        #[arg(long, default_value_t = edeg::DEFAULT_MC_TRIALS)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Leading-order asymptotic a_k b_k^n n^(-k(k+1)/4) (real case) or the
    /// complex analogue with --complex.
    Asymptotic {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        complex: bool,
    },
    /// The polynomial-space constant Lambda_k.
    Lambda {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = LambdaMethod::Closed)]
        method: LambdaMethod,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Radial function of the singular-value body at a direction
    /// (default: the symmetric direction mu).
    Radial {
        #[arg(long)]
        k: usize,
        /// Comma-separated coordinates; normalized internally.
        #[arg(long, value_delimiter = ',')]
        u: Option<Vec<f64>>,
    },
    /// Sphere moment G(m) over the positive-orthant sphere: closed form
    /// against quadrature.
    Moments {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u32,
    },
    /// Monte Carlo estimate of delta_{1,3} from random four-line Schubert
    /// problems. A seed is required in --json mode.
    Mc {
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Deterministic check that n random hyperplanes of RP^n meet in one
    /// point.
    CheckDelta0 {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// CSV table `n,method,value,asymptote,ratio` of delta_{1,n} against
    /// its asymptotic over a range of n.
    Table {
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value = "line-integral")]
        method: String,
    },
}

/// One result line, serialized losslessly in --json mode.
#[derive(Serialize, Deserialize)]
struct RunRecord {
    command: String,
    parameters: serde_json::Value,
    value: serde_json::Value,
    error: f64,
    method: String,
    seed: Option<u64>,
    wall_time_s: f64,
    version: String,
}

struct Emitter {
    json: bool,
    start: Instant,
}

impl Emitter {
    #[allow(clippy::too_many_arguments)]
    fn emit(
        &self,
        command: &str,
        parameters: serde_json::Value,
        value: serde_json::Value,
        error: f64,
        method: &str,
        seed: Option<u64>,
        human: String,
    ) {
        if self.json {
            let record = RunRecord {
                command: command.to_string(),
                parameters,
                value,
                error,
                method: method.to_string(),
                seed,
                wall_time_s: self.start.elapsed().as_secs_f64(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            };
            println!(
                "{}",
                serde_json::to_string(&record).expect("record serializes")
            );
        } else {
            println!("{human}");
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Ignore the error if a global pool already exists; determinism
        // does not depend on the pool size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let emitter = Emitter {
        json: cli.json,
        start: Instant::now(),
    };
    match run(&cli, &emitter) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::QuadratureNonConvergence { .. }
                | Error::NewtonNonConvergence { .. }
                | Error::Degenerate(_)
                | Error::NanSample { .. } => 3,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}

fn parse_method(s: &str) -> Result<Method, Error> {
    s.parse()
}

fn run(cli: &Cli, out: &Emitter) -> Result<(), Error> {
    let tol = cli.rel_tol;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain("--rel-tol must be positive".into()));
    }
    match &cli.command {
        Command::Complex { k, n, asymptotic } => {
            let params = serde_json::json!({ "k": k, "n": n, "asymptotic": asymptotic });
            if *asymptotic {
                let v = delta_complex_asymptotic(*k, *n)?;
                out.emit(
                    "complex",
                    params,
                    serde_json::json!(v),
                    v / f64::from(*n),
                    "asymptotic",
                    None,
                    format!("delta_C({k},{n}) ~ {v:e} (leading order, relative error O(1/n)) [asymptotic]"),
                );
            } else {
                let v = delta_complex(*k, *n)?;
                out.emit(
                    "complex",
                    params,
                    serde_json::json!(v.to_string()),
                    0.0,
                    "exact",
                    None,
                    format!("delta_C({k},{n}) = {v} [exact]"),
                );
            }
        }
        Command::Delta1 { n, method } => {
            let method = parse_method(method)?;
            let r = edeg::delta_real(1, *n, method, tol, None)?;
            emit_edeg(out, "delta1", &r);
        }
        Command::Delta {
            k,
            n,
            method,
            trials,
            seed,
        } => {
            let method = parse_method(method)?;
            if method == Method::MonteCarlo && cli.json && seed.is_none() {
                return Err(Error::Domain(
                    "--seed is required for the monte-carlo method in --json mode".into(),
                ));
            }
            let mc = Some((*trials, seed.unwrap_or(edeg::DEFAULT_MC_SEED)));
            let r = edeg::delta_real(*k, *n, method, tol, mc)?;
            emit_edeg(out, "delta", &r);
        }
        Command::Asymptotic { k, n, complex } => {
            let params = serde_json::json!({ "k": k, "n": n, "complex": complex });
            let v = if *complex {
                delta_complex_asymptotic(*k, *n)?
            } else {
                asymptotics::delta_real_asymptotic(*k, *n)?
            };
            let tag = if *complex {
                "asymptotic-complex"
            } else {
                "asymptotic"
            };
            out.emit(
                "asymptotic",
                params,
                serde_json::json!(v),
                v / f64::from(*n),
                tag,
                None,
                format!("delta({k},{n}) ~ {v:e} (leading order, relative error O(1/n)) [{tag}]"),
            );
        }
        Command::Lambda {
            k,
            method,
            samples,
            seed,
        } => {
            let (value, err, tag, seed_out) = match method {
                LambdaMethod::Closed => (lambda_closed(*k)?, 0.0, "closed-form", None),
                LambdaMethod::Sphere => {
                    let e = lambda_mc_sphere(*k, *samples, *seed)?;
                    (e.mean, e.std_error, "sphere-mc", Some(*seed))
                }
                LambdaMethod::Coefficient => {
                    let e = lambda_mc_coefficient(*k, *samples, *seed)?;
                    (e.mean, e.std_error, "coefficient-mc", Some(*seed))
                }
            };
            out.emit(
                "lambda",
                serde_json::json!({ "k": k, "samples": samples, "seed": seed_out }),
                serde_json::json!(value),
                err,
                tag,
                seed_out,
                format!("Lambda_{k} = {value} +- {err:e} [{tag}]"),
            );
        }
        Command::Radial { k, u } => {
            let model = ZonoidModel::new(*k)?;
            let direction = match u {
                Some(coords) => Direction::new(coords.clone())?,
                None => Direction::mu(*k),
            };
            let r = model.radial(&direction)?;
            let rmax = radial_maximum(*k);
            out.emit(
                "radial",
                serde_json::json!({ "k": k, "u": direction.coords() }),
                serde_json::json!(r),
                model.quad_tol(),
                "zonoid-newton",
                None,
                format!(
                    "r(u) = {r} +- {:e} [zonoid-newton]  (R = {rmax}, calibration |s_k - 1| = {:.2e})",
                    model.quad_tol(),
                    model.calibration_deviation()
                ),
            );
        }
        Command::Moments { k, m } => {
            let closed = sphere_moment(*k, *m);
            let quad = sphere_moment_quadrature(*k, *m, 32);
            out.emit(
                "moments",
                serde_json::json!({ "k": k, "m": m }),
                serde_json::json!(closed),
                (closed - quad).abs(),
                "closed-form-vs-quadrature",
                None,
                format!(
                    "G({m}) over S^{k}_pos = {closed} [closed-form]; quadrature {quad} (|diff| = {:.2e})",
                    (closed - quad).abs()
                ),
            );
        }
        Command::Mc { trials, seed } => {
            if cli.json && seed.is_none() {
                return Err(Error::Domain(
                    "--seed is required for `mc` in --json mode".into(),
                ));
            }
            let seed = seed.unwrap_or(edeg::DEFAULT_MC_SEED);
            let est = estimate_delta13(*trials, seed)?;
            out.emit(
                "mc",
                serde_json::json!({ "trials": trials, "degenerate_resamples": est.degenerate_resamples }),
                serde_json::json!(est.estimate.mean),
                est.estimate.std_error,
                "monte-carlo",
                Some(seed),
                format!(
                    "delta(1,3) = {} +- {} [monte-carlo] ({} trials, seed {seed}, {} degenerate resamples)",
                    est.estimate.mean, est.estimate.std_error, trials, est.degenerate_resamples
                ),
            );
        }
        Command::CheckDelta0 { n, seed } => {
            let count = check_delta0(*n, *seed)?;
            out.emit(
                "check-delta0",
                serde_json::json!({ "n": n }),
                serde_json::json!(count),
                0.0,
                "hyperplane-intersection",
                Some(*seed),
                format!("delta(0,{n}) = {count} (exact) [hyperplane-intersection]"),
            );
        }
        Command::Table {
            n_min,
            n_max,
            method,
        } => {
            let method = parse_method(method)?;
            if *n_min < 3 || n_max < n_min {
                return Err(Error::Domain(
                    "table requires 3 <= n-min <= n-max".into(),
                ));
            }
            println!("n,method,value,asymptote,ratio");
            for n in *n_min..=*n_max {
                let r = edeg::delta_real(1, n, method, tol, None)?;
                let asym = asymptotics::delta_real_asymptotic(1, n)?;
                println!(
                    "{n},{},{},{},{}",
                    r.method.tag(),
                    r.value,
                    asym,
                    r.value / asym
                );
            }
        }
    }
    Ok(())
}

fn emit_edeg(out: &Emitter, command: &str, r: &edeg::EdegResult) {
    out.emit(
        command,
        serde_json::json!({ "k": r.k, "n": r.n, "tol": r.tol }),
        serde_json::json!(r.value),
        r.error_bound,
        r.method.tag(),
        r.seed,
        format!(
            "delta({},{}) = {} +- {:e} [{}]",
            r.k,
            r.n,
            r.value,
            r.error_bound,
            r.method.tag()
        ),
    );
}

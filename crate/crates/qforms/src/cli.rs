//! Command-line front end: argument parsing, dispatch and exit codes.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage or configuration error.

use crate::arith::{parse_rational, rational_to_string};
use crate::error::Error;
use crate::fourier::{chi_coefficient, mixed_decomposition, CoefficientSpec};
use crate::io::{to_csv, to_json, Cache};
use crate::jacobi::{heat_decomposition, phi_laurent};
use crate::lattice::{lattice_coefficient, TrConvention};
use crate::numeric::eval::eval_phased;
use crate::numeric::verify::{self, compare, sample_gamma1, sample_points, series_order_for, Gamma, Report};
use crate::numeric::{Cx, PrecisionContext};
use crate::phased::Phased;
use crate::quantum::{self, RationalPoint};
use crate::series::QSeries;
use crate::theta::quasimodular_kernel;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde_json::{json, Value};
use std::time::Instant;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qforms", version, about = "Fourier coefficients of negative-index Jacobi forms, exactly and numerically")]
pub struct Cli {
    /// Series cache directory (overridden by QFORMS_CACHE)
    #[arg(long, global = true, default_value = ".qforms-cache")]
    pub cache_dir: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Convention {
    Verified,
    AsPrinted,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Identity {
    /// Appell–Lerch decomposition of φ_{M,N}
    #[value(alias = "thm13")]
    Appell,
    /// rank–crank heat equation
    Pde,
    /// φ_{M,N+M} as heat-operator iterates of φ_N
    Heat,
    /// modular and multiplier laws of the partial theta functions
    #[value(name = "partial-theta", alias = "prop32")]
    PartialTheta,
    /// elliptic and modular laws of ϑ
    #[value(name = "theta-laws", alias = "lemma31")]
    ThetaLaws,
    /// φ_{0,N} as a power of the crank generating function
    Phicrank,
    /// sum and product forms of ϑ
    Theta,
    /// partial-fraction form of the crank generating function
    Crank,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum QuantumAction {
    Member,
    Gamma,
    Lvalues,
    Asymptotics,
    Value,
    Cocycle,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fourier coefficient of φ_{M,N+M} at ζ^r with its mixed partial theta decomposition
    Coeff {
        /// Power of ϑ(z+1/2) in the numerator (even)
        #[arg(long = "M")]
        m: u32,
        /// Index of the denominator power beyond M
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value = "20")]
        order: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The same coefficient for M = 0 from the root-lattice sum
    Lattice {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value = "20")]
        order: String,
        #[arg(long, value_enum, default_value = "verified")]
        convention: Convention,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Heat-operator decomposition, or the quasimodular kernel when --M is omitted
    Pde {
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "M")]
        m: Option<u32>,
        #[arg(long, default_value = "12")]
        order: String,
    },
    /// Laurent coefficients D_j of φ_{M,N} about z = 0
    Laurent {
        #[arg(long = "M")]
        m: u32,
        #[arg(long = "N")]
        n: u32,
        /// Number of coefficients beyond the leading one
        #[arg(long, default_value = "2")]
        count: usize,
        #[arg(long, default_value = "10")]
        order: String,
    },
    /// Pointwise numerical verification of an identity at random points
    Verify {
        #[arg(long, value_enum)]
        identity: Identity,
        #[arg(long = "N", default_value = "2")]
        n: u32,
        /// Power of ϑ(z+1/2) (even)
        #[arg(long = "M", default_value = "0")]
        m: u32,
        #[arg(long, default_value = "1")]
        r: i64,
        #[arg(long, default_value = "3")]
        points: usize,
        #[arg(long, default_value = "128")]
        bits: u32,
        #[arg(long, default_value = "1")]
        seed: u64,
    },
    /// Quantum modularity checks at a rational point
    Quantum {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        r: i64,
        #[arg(long, default_value = "1/2")]
        point: String,
        #[arg(long, value_enum)]
        action: QuantumAction,
        #[arg(long, default_value = "128")]
        bits: u32,
        /// Number of expansion coefficients
        #[arg(long, default_value = "4")]
        terms: usize,
        #[arg(long, default_value = "1")]
        seed: u64,
    },
    /// Exact coefficient evaluated at τ against contour quadrature of φ
    Oracle {
        #[arg(long = "M")]
        m: u32,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// τ as "re,im"
        #[arg(long, default_value = "0,1.2", allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value = "128")]
        bits: u32,
        #[arg(long, default_value = "64")]
        points: usize,
    },
}

/// Outcome of a command: exit code and what goes to stdout.
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_) | Error::OddM | Error::NotInCoset(_) | Error::VersionMismatch { .. } => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn rat(s: &str, what: &str) -> Result<Rational, Error> {
    parse_rational(s).map_err(|e| Error::Invalid(format!("--{what}: {e}")))
}

fn phased_json(p: &Phased) -> Value {
    json!({ "phase": if p.ipow == 1 { "i" } else { "1" }, "series": to_json(&p.series) })
}

fn series_json(s: &QSeries) -> Value {
    serde_json::to_value(to_json(s)).unwrap()
}

fn reports_json(reports: &[Report]) -> (bool, Value) {
    let ok = reports.iter().all(|r| r.passed);
    (ok, json!({ "passed": ok, "reports": reports }))
}

fn parse_tau(s: &str, ctx: &PrecisionContext) -> Result<Cx, Error> {
    let (a, b) = s.split_once(',').ok_or_else(|| Error::Invalid(format!("--tau must be \"re,im\", got {s:?}")))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("bad number {x:?} in --tau")));
    Ok(ctx.c(p(a)?, p(b)?))
}

/// Cached coefficient, the hit flag, and a warning when a stored entry was unreadable.
fn cached(cache: &Cache, key: &str, f: impl FnOnce() -> Result<Phased, Error>) -> Result<(Phased, bool, Option<String>), Error> {
    let ikey = format!("{key} phase");
    let mut warning = None;
    match (cache.load(key), cache.load(&ikey)) {
        (Ok(Some(s)), Ok(Some(ph))) => return Ok((Phased { ipow: (!ph.is_zero()) as u8, series: s }, true, None)),
        (Err(e), _) | (_, Err(e)) => warning = Some(format!("ignored cache entry: {e}")),
        _ => {}
    }
    let p = f()?;
    // the phase is stored as a second, constant series
    let flag = QSeries::constant(Rational::from(p.ipow), None);
    if let Err(e) = cache.store(key, &p.series).and_then(|_| cache.store(&ikey, &flag)) {
        warning = Some(format!("cache not written: {e}"));
    }
    Ok((p, false, warning))
}

fn run_inner(cli: &Cli) -> Result<(i32, String), Error> {
    let cache = Cache::from_env(&cli.cache_dir);
    let started = Instant::now();
    let elapsed = |v: &mut Value| {
        v["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    };
    match &cli.command {
        Command::Coeff { m, n, r, order, format } => {
            if m % 2 == 1 {
                return Err(Error::OddM);
            }
            let (r, order) = (rat(r, "r")?, rat(order, "order")?);
            let spec = CoefficientSpec::new(m / 2, *n, r.clone(), order.clone());
            let key = format!("coeff M={m} N={n} r={} order={}", rational_to_string(&r), rational_to_string(&order));
            let (chi, hit, warning) = cached(&cache, &key, || chi_coefficient(&spec))?;
            if let Format::Csv = format {
                return Ok((EXIT_PASS, to_csv(&chi.series)));
            }
            let terms: Vec<Value> = mixed_decomposition(&spec)?
                .iter()
                .map(|t| json!({ "prefactor": phased_json(&t.prefactor), "derivative_order": t.derivative_order, "theta": series_json(&t.theta_part) }))
                .collect();
            let mut v = json!({
                "M": m, "N": n, "r": rational_to_string(&r), "order": rational_to_string(&order),
                "coefficient": phased_json(&chi), "decomposition": terms, "cache_hit": hit,
            });
            if let Some(w) = warning {
                v["cache_warning"] = json!(w);
            }
            elapsed(&mut v);
            Ok((EXIT_PASS, v.to_string()))
        }
        Command::Lattice { n, r, order, convention, format } => {
            let (r, order) = (rat(r, "r")?, rat(order, "order")?);
            let conv = match convention {
                Convention::Verified => TrConvention::Verified,
                Convention::AsPrinted => TrConvention::AsPrinted,
            };
            let (p, count) = lattice_coefficient(*n, &r, &order, conv)?;
            if let Format::Csv = format {
                return Ok((EXIT_PASS, to_csv(&p.series)));
            }
            let mut v = json!({ "N": n, "r": rational_to_string(&r), "series": phased_json(&p), "terms_enumerated": count });
            elapsed(&mut v);
            Ok((EXIT_PASS, v.to_string()))
        }
        Command::Pde { n, m, order } => {
            let order = rat(order, "order")?;
            let v = match m {
                None => {
                    let k = quasimodular_kernel(*n, &order)?;
                    json!({
                        "N": n, "kernel": k.entries.iter().map(series_json).collect::<Vec<_>>(),
                        "certified_order": rational_to_string(&k.certified_order), "degenerate": k.degenerate,
                    })
                }
                Some(m) => {
                    let h = heat_decomposition(*n, *m, &order)?;
                    json!({
                        "N": n, "M": m, "f": h.f.iter().map(series_json).collect::<Vec<_>>(),
                        "normalized": h.normalized.iter().map(series_json).collect::<Vec<_>>(),
                        "scale": series_json(&h.scale), "residual_checked_through": h.residual_checked_through,
                    })
                }
            };
            Ok((EXIT_PASS, v.to_string()))
        }
        Command::Laurent { m, n, count, order } => {
            let order = rat(order, "order")?;
            let l = phi_laurent(*m, *n, *count, &order)?;
            let d: Vec<Value> = (0..=*count as i64)
                .map(|j| {
                    let idx = *n as i64 - 2 * j;
                    json!({ "j": idx, "D": phased_json(&l.d(idx)) })
                })
                .collect();
            Ok((EXIT_PASS, json!({ "M": m, "N": n, "D": d }).to_string()))
        }
        Command::Verify { identity, n, m, r, points, bits, seed } => {
            if m % 2 == 1 {
                return Err(Error::OddM);
            }
            let half = m / 2;
            let ctx = PrecisionContext::new(*bits);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let pts = sample_points(*points, &mut rng, &ctx);
            let mut reports = Vec::new();
            for (z, tau) in &pts {
                match identity {
                    Identity::Appell => reports.push(verify::verify_appell_decomposition(*n, half, z, tau, &ctx)?),
                    Identity::Heat => {
                        if half == 0 {
                            return Err(Error::Invalid("heat decomposition needs M >= 2".into()));
                        }
                        let h = heat_decomposition(*n, half, &series_order_for(tau, &ctx))?;
                        reports.push(verify::verify_heat_decomposition(&h, z, tau, &ctx)?);
                    }
                    Identity::Pde => reports.push(verify::verify_rank_crank_pde(z, tau, &ctx)?),
                    Identity::Phicrank => reports.push(verify::verify_phicrank(*n, z, tau, &ctx)?),
                    Identity::Theta => reports.push(verify::verify_theta_forms(z, tau, &ctx)?),
                    Identity::Crank => reports.push(verify::verify_crank_partial_fraction(z, tau, &ctx)?),
                    Identity::ThetaLaws => {
                        reports.push(verify::verify_theta_elliptic(1, 1, z, tau, &ctx)?);
                        let g = sample_gamma1(1, &mut rng);
                        reports.extend(verify::verify_theta_modular(&g, z, tau, &ctx)?);
                    }
                    Identity::PartialTheta => {
                        let g = sample_gamma1(*n, &mut rng);
                        reports.extend(verify::verify_partial_theta_modular(*n, *r, &g, tau, &ctx)?);
                    }
                }
            }
            let (ok, mut v) = reports_json(&reports);
            v["identity"] = json!(identity.to_possible_value().map(|p| p.get_name().to_string()));
            elapsed(&mut v);
            Ok((if ok { EXIT_PASS } else { EXIT_FAIL }, v.to_string()))
        }
        Command::Quantum { n, r, point, action, bits, terms, seed } => {
            let ctx = PrecisionContext::new(*bits);
            let p = RationalPoint::parse(point)?;
            let member = quantum::quantum_member(*n, *r, &p)?;
            let base = json!({ "N": n, "r": r, "point": p.to_string(), "member": member });
            let need_member = |v: &Value| -> Result<(), Error> {
                if !member {
                    return Err(Error::Invalid(format!("{p} is not in the quantum set for N = {n}, r = {r}: {v}")));
                }
                Ok(())
            };
            let (ok, mut v) = match action {
                QuantumAction::Member => (true, base),
                QuantumAction::Gamma => {
                    need_member(&base)?;
                    let g = quantum::gamma_seq(*n, *r, &p, &ctx)?;
                    let vals: Vec<(f64, f64)> = g.values.iter().map(|c| c.to_f64_pair()).collect();
                    let mut v = base;
                    v["period"] = json!(g.period());
                    v["mean_abs"] = json!(g.mean_value().abs_f64());
                    v["values"] = json!(vals);
                    (true, v)
                }
                QuantumAction::Lvalues => {
                    need_member(&base)?;
                    let g = quantum::gamma_seq(*n, *r, &p, &ctx)?;
                    let mut rows = Vec::new();
                    let mut ok = true;
                    for m in 0..2 * *terms as u32 {
                        let a = quantum::l_value(m, &g, &ctx)?;
                        let b = quantum::l_value_abel(m, &g, &ctx)?;
                        let rep = compare(&format!("L(-{m})"), p.to_string(), &a, &b, &ctx);
                        ok &= rep.passed;
                        rows.push(json!({ "m": m, "bernoulli": a.to_f64_pair(), "abel": b.to_f64_pair(), "residual": rep.residual }));
                    }
                    let mut v = base;
                    v["l_values"] = json!(rows);
                    (ok, v)
                }
                QuantumAction::Asymptotics => {
                    need_member(&base)?;
                    let ts = [0.2, 0.1, 0.05, 0.025];
                    let n0: Vec<usize> = (1..=(*terms).min(3)).collect();
                    let rep = quantum::theta_limit_checks(*n, *r, &p, &ts, &n0, &ctx)?;
                    let ok = rep.rows.iter().all(|row| {
                        let last = |s: &Vec<f64>| s.last().is_some_and(|x| (x - row.terms as f64).abs() <= 0.2);
                        last(&row.upper_slopes) && last(&row.lower_slopes)
                    });
                    let mut v = base;
                    v["report"] = serde_json::to_value(&rep).unwrap();
                    (ok, v)
                }
                QuantumAction::Value => {
                    let rv = quantum::root_of_unity_value(*n, *r, &p, &ctx)?;
                    let ok = rv.max_discrepancy < 1e-10;
                    let mut v = base;
                    v["value"] = serde_json::to_value(&rv).unwrap();
                    (ok, v)
                }
                QuantumAction::Cocycle => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let g: Gamma = sample_gamma1(*n, &mut rng);
                    let tau = ctx.c(0.3, -0.8);
                    let (l, rr) = quantum::cocycle_residual(*n, *r, &g, &tau, &ctx)?;
                    let rep = compare("cocycle", format!("tau = {tau}"), &l, &rr, &ctx);
                    let mut v = base;
                    v["gamma"] = json!([[g.a, g.b], [g.c, g.d]]);
                    v["report"] = serde_json::to_value(&rep).unwrap();
                    (rep.residual < 1e-15, v)
                }
            };
            v["passed"] = json!(ok);
            elapsed(&mut v);
            Ok((if ok { EXIT_PASS } else { EXIT_FAIL }, v.to_string()))
        }
        Command::Oracle { m, n, r, tau, bits, points } => {
            if m % 2 == 1 {
                return Err(Error::OddM);
            }
            let mut ctx = PrecisionContext::new(*bits);
            ctx.quadrature_points = *points;
            let r = rat(r, "r")?;
            let tau = parse_tau(tau, &ctx)?;
            ctx.check_upper(&tau)?;
            let spec = CoefficientSpec::new(m / 2, *n, r.clone(), series_order_for(&tau, &ctx));
            let exact = eval_phased(&chi_coefficient(&spec)?, &tau, &ctx);
            let num = verify::fourier_quadrature(*m, n + m, &r, &tau, &ctx)?;
            let rep = compare("fourier coefficient", format!("tau = {tau}"), &exact, &num, &ctx);
            let mut v = json!({ "M": m, "N": n, "r": rational_to_string(&r), "exact": exact.to_f64_pair(), "quadrature": num.to_f64_pair(), "report": rep });
            elapsed(&mut v);
            Ok((if rep.passed { EXIT_PASS } else { EXIT_FAIL }, v.to_string()))
        }
    }
}

/// Runs a parsed command. Errors are reported as `{"error": …}` with their exit code.
pub fn run(cli: &Cli) -> Outcome {
    match run_inner(cli) {
        Ok((code, output)) => Outcome { code, output },
        Err(e) => Outcome { code: exit_code(&e), output: json!({ "error": e.to_string() }).to_string() },
    }
}

/// Parses `args` (program name first) and runs; usage errors exit with 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            Outcome { code, output: e.to_string() }
        }
    }
}

//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits nonzero if any criterion fails outside the documented known failure
//! (the upper-side slopes at N = 2, r = 1, h/k = 1/4 on the pinned t grid).

use qforms::fourier::{chi_coefficient, CoefficientSpec};
use qforms::jacobi::{hankel_nonvanishing, heat_decomposition};
use qforms::lattice::{lattice_coefficient, n1_coefficient, TrConvention};
use qforms::numeric::eval::eval_phased;
use qforms::numeric::verify::{self, fourier_quadrature, sample_gamma1, sample_points, series_order_for, Gamma};
use qforms::numeric::{Cx, PrecisionContext};
use qforms::quantum::{self, ExactIdentity, GaussClause, GaussTable, PeriodicSeq, RationalPoint};
use qforms::theta::{quasimodular_kernel, theta_series, tn_determinant_ratio, ThetaSpec, Variant};
use qforms::{q, Phased};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use std::time::Instant;

struct Outcome {
    passed: bool,
    detail: String,
    /// failure confined to the documented known failure
    known: bool,
}

fn pass_if(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail, known: false }
}

fn err(e: impl std::fmt::Display) -> Outcome {
    pass_if(false, format!("error: {e}"))
}

fn rel(a: &Cx, b: &Cx) -> f64 {
    (a - b).abs_f64() / a.abs_f64().max(1.0)
}

/// Same phase, same truncation and the same reduced exponents and coefficients.
fn bit_exact(a: &Phased, b: &Phased) -> bool {
    a.ipow == b.ipow && a.series.trunc() == b.series.trunc() && a.series.terms().eq(b.series.terms())
}

fn coset_r(n: u32, k: i64) -> Rational {
    Rational::from(k) + q(n as i64 % 2, 2)
}

fn lattice_cases() -> Vec<(u32, Rational)> {
    let mut v = Vec::new();
    for n in 2..=5u32 {
        for k in -2..5 {
            v.push((n, coset_r(n, k)));
        }
    }
    v
}

fn n1_cases() -> Vec<Rational> {
    (-5..=7).step_by(2).map(|k| q(k, 2)).collect()
}

fn c1() -> Outcome {
    let t0 = Instant::now();
    let o = Rational::from(20);
    let mut bad = Vec::new();
    for (n, r) in lattice_cases() {
        let a = chi_coefficient(&CoefficientSpec::new(0, n, r.clone(), o.clone()));
        let b = lattice_coefficient(n, &r, &o, TrConvention::Verified);
        match (a, b) {
            (Ok(a), Ok((b, _))) if bit_exact(&a, &b) => {}
            _ => bad.push(format!("N={n} r={r}")),
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    pass_if(bad.is_empty() && secs < 60.0, format!("28 cases to q^20 in {secs:.1} s, mismatches {bad:?}"))
}

fn c2() -> Outcome {
    let o = Rational::from(20);
    let mut bad = Vec::new();
    for r in n1_cases() {
        let a = chi_coefficient(&CoefficientSpec::new(0, 1, r.clone(), o.clone()));
        let b = n1_coefficient(&r, &o);
        match (a, b) {
            (Ok(a), Ok(b)) if bit_exact(&a, &b) => {}
            _ => bad.push(r.to_string()),
        }
    }
    pass_if(bad.is_empty(), format!("r in -5/2..7/2 to q^20, mismatches {bad:?}"))
}

fn c3() -> Outcome {
    let ctx = PrecisionContext::new(256);
    let taus = [ctx.c(0.0, 1.2), ctx.c(0.1, 1.4)];
    let mut cases: Vec<(u32, Rational)> = lattice_cases();
    cases.extend(n1_cases().into_iter().map(|r| (1, r)));
    let mut worst = 0f64;
    for (n, r) in &cases {
        for tau in &taus {
            let exact = match chi_coefficient(&CoefficientSpec::new(0, *n, r.clone(), series_order_for(tau, &ctx))) {
                Ok(c) => eval_phased(&c, tau, &ctx),
                Err(e) => return err(format!("N={n} r={r}: {e}")),
            };
            let num = match fourier_quadrature(0, *n, r, tau, &ctx) {
                Ok(v) => v,
                Err(e) => return err(format!("N={n} r={r}: {e}")),
            };
            worst = worst.max(rel(&exact, &num));
        }
    }
    pass_if(worst < 1e-20, format!("{} evaluations at 256 bits, worst relative residual {worst:.2e} (< 1e-20)", 2 * cases.len()))
}

fn c4() -> Outcome {
    // working order above q^20 so that the certified order reaches it
    let o = Rational::from(22);
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [3u32, 4, 5, 6, 8] {
        match quasimodular_kernel(n, &o) {
            Ok(k) => {
                ok &= k.certified_order >= 20;
                lines.push(format!("N={n} certified q^{}", k.certified_order));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("N={n}: {e}"));
            }
        }
    }
    pass_if(ok, lines.join(", "))
}

fn c5() -> Outcome {
    let o = Rational::from(20);
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [4u32, 6, 8] {
        match tn_determinant_ratio(n, &o) {
            Ok(r) => lines.push(format!("N={n} ratio {}", r.coeff(&Rational::new()))),
            Err(e) => {
                ok = false;
                lines.push(format!("N={n}: {e}"));
            }
        }
    }
    pass_if(ok, format!("constant to q^20: {}", lines.join(", ")))
}

fn c6() -> Outcome {
    let ctx = PrecisionContext::new(256);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0f64;
    for (n, m) in [(1u32, 0u32), (2, 0), (3, 0), (1, 1), (2, 1), (4, 0)] {
        for (z, tau) in sample_points(3, &mut rng, &ctx) {
            match verify::verify_appell_decomposition(n, m, &z, &tau, &ctx) {
                Ok(r) => worst = worst.max(r.residual),
                Err(e) => return err(format!("(N, M) = ({n}, {m}): {e}")),
            }
        }
    }
    pass_if(worst < 1e-25, format!("18 points at 256 bits, worst residual {worst:.2e} (< 1e-25)"))
}

fn c7() -> Outcome {
    let ctx = PrecisionContext::new(200);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0f64;
    for (z, tau) in sample_points(3, &mut rng, &ctx) {
        match verify::verify_rank_crank_pde(&z, &tau, &ctx) {
            Ok(r) => worst = worst.max(r.residual),
            Err(e) => return err(e),
        }
    }
    pass_if(worst < 1e-20, format!("3 points at 200 bits, derivatives stable under point doubling, worst residual {worst:.2e} (< 1e-20)"))
}

fn c8() -> Outcome {
    let ctx = PrecisionContext::new(160);
    let (z, tau) = (ctx.c(0.31, 0.17), ctx.c(0.11, 1.3));
    let mut worst = 0f64;
    let mut ok = true;
    for (n, m) in [(1u32, 1u32), (2, 1), (1, 2)] {
        let h = match heat_decomposition(n, m, &series_order_for(&tau, &ctx)) {
            Ok(h) => h,
            Err(e) => return err(format!("(N, M) = ({n}, {m}): {e}")),
        };
        ok &= h.residual_checked_through >= 2 * m as i64 + 4;
        match verify::verify_heat_decomposition(&h, &z, &tau, &ctx) {
            Ok(r) => worst = worst.max(r.residual),
            Err(e) => return err(format!("(N, M) = ({n}, {m}): {e}")),
        }
    }
    let mut hankel_zero = Vec::new();
    for n in 1..=8u32 {
        for m in 1..=6usize {
            if hankel_nonvanishing(n, m).is_err() {
                hankel_zero.push((n, m));
            }
        }
    }
    ok &= worst < 1e-20 && hankel_zero.is_empty();
    pass_if(
        ok,
        format!("Taylor residual zero through x^(2M+4), pointwise worst {worst:.2e} (< 1e-20), vanishing Hankel determinants {hankel_zero:?}"),
    )
}

fn c9() -> Outcome {
    let o = Rational::from(30);
    let ts = |n: u32, r: i64, nu: u8, v: Variant| theta_series(&ThetaSpec::new(n, Rational::from(r), nu, v), &o);
    let mut count = 0;
    for n in 1..=8u32 {
        let nn = n as i64;
        for nu in 0..2u8 {
            for r in -2 * nn..=2 * nn {
                let (a, b, c) = match (ts(n, r, nu, Variant::Tilde), ts(n, r + nn, nu, Variant::Tilde), ts(n, -r, nu, Variant::Tilde)) {
                    (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                    _ => return err(format!("theta series failed at N={n} r={r}")),
                };
                let b = if n % 2 == 1 { b.neg() } else { b };
                let c = if nu == 1 { c.neg() } else { c };
                if !a.agrees_with(&b) || !a.agrees_with(&c) {
                    return pass_if(false, format!("shift or negation fails at N={n} r={r} nu={nu}"));
                }
                count += 2;
            }
        }
    }
    let special = ts(1, 0, 0, Variant::Full).map(|s| s.is_zero()).unwrap_or(false)
        && (0..4).all(|r| ts(2, r, 1, Variant::Tilde).map(|s| s.is_zero()).unwrap_or(false));
    pass_if(special, format!("{count} shift/negation identities to q^30 (shift sign (-1)^N), vanishing cases {special}"))
}

fn c10() -> Outcome {
    let ctx = PrecisionContext::new(200);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0f64;
    let mut count = 0;
    for n in [2u32, 4, 6] {
        for r in 0..(n as i64 / 2) {
            for _ in 0..5 {
                let g = sample_gamma1(n, &mut rng);
                let tau = sample_points(1, &mut rng, &ctx).remove(0).1;
                match verify::verify_partial_theta_modular(n, r, &g, &tau, &ctx) {
                    Ok(reps) => {
                        for rep in reps {
                            worst = worst.max(rep.residual);
                            count += 1;
                        }
                    }
                    Err(e) => return err(format!("N={n} r={r}: {e}")),
                }
            }
        }
    }
    pass_if(worst < 1e-20, format!("{count} T/S/multiplier checks at 200 bits, worst residual {worst:.2e} (< 1e-20)"))
}

fn c11() -> Outcome {
    let ctx = PrecisionContext::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut notes = Vec::new();
    let mut ok = true;

    let pairs = [(2u32, 0i64), (2, 1), (4, 0), (4, 1), (4, 2), (6, 1), (6, 3), (8, 2)];
    let mut mean_ok = 0;
    for i in 0..200 {
        let (n, r) = pairs[i % pairs.len()];
        let p = quantum::sample_quantum_points(n, r, 1, &mut rng).unwrap().remove(0);
        if quantum::gamma_seq(n, r, &p, &ctx).is_ok() {
            mean_ok += 1;
        }
    }
    ok &= mean_ok == 200;
    notes.push(format!("mean zero at {mean_ok}/200 points"));

    let (mut fired, mut worst) = (0u64, 0f64);
    for c in 1..=200i64 {
        let table = GaussTable::new(c);
        for a in 0..c {
            for b in 0..c {
                if quantum::gauss_vanishing(a, b, c) != GaussClause::None {
                    fired += 1;
                    worst = worst.max(table.abs(a, b));
                }
            }
        }
    }
    ok &= worst < 1e-25;
    notes.push(format!("{fired} vanishing clauses, max |G| {worst:.1e}"));

    let mut lworst = 0f64;
    for _ in 0..20 {
        let k = rng.gen_range(2..13usize);
        let mut vals: Vec<Rational> = (0..k).map(|_| q(rng.gen_range(-9..10), rng.gen_range(1..6))).collect();
        let mean: Rational = vals.iter().sum::<Rational>() / k as u32;
        for v in vals.iter_mut() {
            *v -= &mean;
        }
        let seq = PeriodicSeq::new(vals.iter().map(|v| ctx.rat(v)).collect());
        for m in 0..4u32 {
            match (quantum::l_value(m, &seq, &ctx), quantum::l_value_abel(m, &seq, &ctx)) {
                (Ok(a), Ok(b)) => lworst = lworst.max(rel(&a, &b)),
                (Err(e), _) | (_, Err(e)) => return err(e),
            }
        }
    }
    ok &= lworst < 1e-15;
    notes.push(format!("Bernoulli vs Abel on 20 sequences {lworst:.1e}"));

    let alt = [q(-1, 1), q(1, 1)];
    let exact = quantum::l_value_exact(1, &alt).ok() == Some(q(1, 4)) && quantum::l_value_abel_exact(1, &alt).ok() == Some(q(1, 4));
    ok &= exact;
    notes.push(format!("L(-1, (1, -1)) = 1/4 by both routes {exact}"));
    pass_if(ok, notes.join(", "))
}

fn c12() -> Outcome {
    let ctx = PrecisionContext::new(128);
    let ts = [0.2, 0.1, 0.05, 0.025];
    let mut ok = true;
    let mut only_known = true;
    let mut notes = Vec::new();
    for (n, r, h, k) in [(2u32, 1i64, 1i64, 4i64), (2, 0, 1, 2), (4, 1, 1, 2)] {
        let p = RationalPoint::new(h, k).unwrap();
        let rep = match quantum::theta_limit_checks(n, r, &p, &ts, &[1, 2, 3], &ctx) {
            Ok(rep) => rep,
            Err(e) => return err(format!("({n}, {r}, {p}): {e}")),
        };
        let mut up = Vec::new();
        let mut lo = Vec::new();
        for row in &rep.rows {
            let (u, l) = (*row.upper_slopes.last().unwrap(), *row.lower_slopes.last().unwrap());
            let target = row.terms as f64;
            let (uo, lo_ok) = ((u - target).abs() <= 0.2, (l - target).abs() <= 0.2);
            ok &= uo && lo_ok;
            if !lo_ok || (!uo && (n, r, h, k) != (2, 1, 1, 4)) {
                only_known = false;
            }
            up.push(format!("{u:.2}"));
            lo.push(format!("{l:.2}"));
        }
        notes.push(format!("({n},{r},{p}) upper [{}] lower [{}]", up.join(" "), lo.join(" ")));
    }
    let mut out = pass_if(ok, format!("slopes for n0 = 1,2,3 on the last t pair: {}", notes.join("; ")));
    if !ok && only_known {
        out.known = true;
        out.detail.push_str("; known: (2,1,1/4) upper side not yet asymptotic at t = 0.025");
    }
    out
}

fn c13() -> Outcome {
    let ctx = PrecisionContext::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = 0f64;
    let mut gs = Vec::new();
    for _ in 0..2 {
        let g: Gamma = sample_gamma1(4, &mut rng);
        let tau = ctx.c(rng.gen_range(-0.5..0.5), -rng.gen_range(0.5..1.2));
        match quantum::cocycle_residual(4, 1, &g, &tau, &ctx) {
            Ok((l, r)) => worst = worst.max(rel(&l, &r)),
            Err(e) => return err(e),
        }
        gs.push(format!("[[{}, {}], [{}, {}]]", g.a, g.b, g.c, g.d));
    }
    pass_if(worst < 1e-15, format!("N=4 r=1 at {}, worst residual {worst:.2e} (< 1e-15)", gs.join(" and ")))
}

fn c14() -> Outcome {
    let ctx = PrecisionContext::new(160);
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, r, h, k) in [(2u32, 1i64, 1i64, 4i64), (2, 0, 1, 2), (4, 1, 1, 2)] {
        let p = RationalPoint::new(h, k).unwrap();
        match quantum::root_of_unity_value(n, r, &p, &ctx) {
            Ok(v) => {
                ok &= v.max_discrepancy < 1e-10;
                notes.push(format!("({n},{r},{p}) {:?} {:.1e}", v.branch, v.max_discrepancy));
            }
            Err(e) => return err(format!("({n}, {r}, {p}): {e}")),
        }
    }
    let o = Rational::from(30);
    let mut exact = Vec::new();
    for id in ExactIdentity::ALL {
        let holds = quantum::identity_holds(id, &o, 10).unwrap_or(false);
        ok &= holds;
        exact.push(format!("{id:?} {holds}"));
    }
    pass_if(ok, format!("three-way agreement (< 1e-10): {}; exact to q^30: {}", notes.join(", "), exact.join(", ")))
}

fn main() {
    let checks: [(u32, &str, fn() -> Outcome); 14] = [
        (1, "lattice sum equals mixed partial theta form", c1),
        (2, "N = 1 closed form", c2),
        (3, "exact coefficients against contour quadrature", c3),
        (4, "quasimodular kernel residuals", c4),
        (5, "determinant ratio constant", c5),
        (6, "Appell-Lerch decomposition pointwise", c6),
        (7, "rank-crank heat equation", c7),
        (8, "heat decomposition", c8),
        (9, "theta shift, negation and vanishing", c9),
        (10, "partial theta modular laws", c10),
        (11, "quantum set, Gauss sums and L-values", c11),
        (12, "asymptotic expansions at rationals", c12),
        (13, "Eichler cocycle", c13),
        (14, "values at roots of unity", c14),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    let total = Instant::now();
    for (id, name, f) in checks {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let out = f();
        let verdict = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict} {name} ({:.1} s): {}", t0.elapsed().as_secs_f64(), out.detail);
        if !out.passed && !out.known {
            unexpected += 1;
        }
    }
    println!("acceptance finished in {:.1} s, unexpected failures: {unexpected}", total.elapsed().as_secs_f64());
    if unexpected > 0 {
        std::process::exit(1);
    }
}

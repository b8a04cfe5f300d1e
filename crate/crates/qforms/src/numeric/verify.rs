//! Pointwise checks of identities between analytic objects.
//!
//! Every check reports the relative residual `|L − R| / max(1, |L|)` and
//! passes when it is below the context tolerance.

use super::eval::{self, eval_phased, stable_cauchy};
use super::{Cx, PrecisionContext};
use crate::arith::kronecker;
use crate::error::{Error, Result};
use crate::fourier::delta_e;
use crate::jacobi::{phi_laurent, HeatDecomposition};
use rand::Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub identity: String,
    pub point: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn compare(identity: &str, point: String, lhs: &Cx, rhs: &Cx, ctx: &PrecisionContext) -> Report {
    let r = (lhs - rhs).abs_f64() / lhs.abs_f64().max(1.0);
    let tol = ctx.tol();
    Report { identity: identity.to_string(), point, residual: r, tolerance: tol, passed: r < tol }
}

fn at(z: &Cx, tau: &Cx) -> String {
    format!("z = {z}, tau = {tau}")
}

/// A 2×2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Gamma {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Invalid(format!("[[{a}, {b}], [{c}, {d}]] is not unimodular")));
        }
        Ok(Gamma { a, b, c, d })
    }

    pub fn in_gamma1(&self, m: i64) -> bool {
        self.c.rem_euclid(m) == 0 && self.a.rem_euclid(m) == 1 % m && self.d.rem_euclid(m) == 1 % m
    }

    pub fn act(&self, tau: &Cx) -> Cx {
        let num = &tau.scale_i64(self.a) + &Cx::from_rational(tau.prec(), &Rational::from(self.b));
        &num / &self.j(tau)
    }

    /// `cτ + d`.
    pub fn j(&self, tau: &Cx) -> Cx {
        &tau.scale_i64(self.c) + &Cx::from_rational(tau.prec(), &Rational::from(self.d))
    }
}

/// A random element of `Γ_1(2N)` with `c ≠ 0`.
pub fn sample_gamma1<R: Rng>(n: u32, rng: &mut R) -> Gamma {
    let m = 2 * n as i64;
    loop {
        let k: i64 = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let c = m * k;
        let d = 1 + m * rng.gen_range(-3..=3);
        if Integer::from(c).gcd(&Integer::from(d)) != 1 {
            continue;
        }
        let a = Integer::from(d).invert(&Integer::from(c.abs())).map(|x| x.to_i64().unwrap()).unwrap_or(1);
        let b = (a * d - 1) / c;
        if let Ok(g) = Gamma::new(a, b, c, d) {
            if g.in_gamma1(m) {
                return g;
            }
        }
    }
}

/// `χ_r(γ) = e(b r²/2N) · (2Nc / d)`.
pub fn multiplier(n: u32, r: i64, g: &Gamma, ctx: &PrecisionContext) -> Cx {
    let ph = ctx.e(&ctx.rat(&Rational::from((g.b * r * r, 2 * n as i64))));
    if g.c == 0 {
        ph
    } else {
        ph.scale_i64(kronecker(2 * n as i64 * g.c, g.d) as i64)
    }
}

/// Random sample points with `Im τ ∈ [0.8, 1.5]` and `z` inside the chamber.
pub fn sample_points<R: Rng>(count: usize, rng: &mut R, ctx: &PrecisionContext) -> Vec<(Cx, Cx)> {
    (0..count)
        .map(|_| {
            let ti = rng.gen_range(0.8..1.5);
            let tau = ctx.c(rng.gen_range(-0.4..0.4), ti);
            let z = ctx.c(rng.gen_range(0.05..0.95), ti * rng.gen_range(0.1..0.45));
            (z, tau)
        })
        .collect()
}

/// q-order needed so that truncating a series at `τ` costs less than the tolerance.
pub fn series_order_for(tau: &Cx, ctx: &PrecisionContext) -> Rational {
    let need = (ctx.bits as f64 + 48.0) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI * tau.im.to_f64());
    Rational::from(need.ceil() as i64 + 4)
}

/// `φ_{2M,N+2M} = (−1)^{1+δ_e} Σ_j D_{2j+δ_e+1}/(2j+δ_e)! · D_w^{2j+δ_e} F_N |_{w=1}`.
pub fn verify_appell_decomposition(n: u32, m: u32, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Report> {
    let lhs = eval::phi(2 * m, n + 2 * m, z, tau, ctx)?;
    let d = delta_e(n);
    let top = (n - 1 - d) / 2 + m;
    let lau = phi_laurent(2 * m, n + 2 * m, top as usize, &series_order_for(tau, ctx))?;
    let mut rhs = ctx.zero();
    for j in 0..=top {
        let k = 2 * j + d;
        let dj = eval_phased(&lau.d(k as i64 + 1), tau, ctx);
        let fac = Integer::from(Integer::factorial(k));
        let fw = eval::f_n_dw_termwise(n, k, z, tau, ctx)?;
        rhs = &rhs + &(&dj * &fw).scale_rat(&Rational::from((Integer::from(1), fac)));
    }
    if d == 0 {
        rhs = -rhs;
    }
    Ok(compare(&format!("appell decomposition N={n} M={m}"), at(z, tau), &lhs, &rhs, ctx))
}

/// Radius for Cauchy circles in `τ` keeping `z + nτ` off the integers.
fn tau_radius(z: &Cx, tau: &Cx) -> Result<f64> {
    let ti = tau.im.to_f64();
    let k = (3.0 / ti).ceil() as i64 + 2;
    let (zr, zi) = z.to_f64_pair();
    let tr = tau.re.to_f64();
    let mut best = ti / 2.0;
    for n in -k..=k {
        if n == 0 {
            continue;
        }
        let re = zr + n as f64 * tr;
        let im = zi + n as f64 * ti;
        let dist = (re - re.round()).hypot(im);
        best = best.min(dist / (2.0 * n.abs() as f64));
    }
    if best < 1e-6 {
        return Err(Error::Numeric("PoleOnContour: no pole-free tau-circle".into()));
    }
    Ok(best.min(0.2))
}

/// `2η²(C*)³ = (6 D_q + D_ζ²) R*`.
pub fn verify_rank_crank_pde(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Report> {
    let c = eval::crank_star(z, tau, ctx)?;
    let lhs = (&eval::eta(tau, ctx)?.powi(2) * &c.powi(3)).scale_i64(2);
    let two_pi_i = ctx.i().scale(&Float::with_val(ctx.prec(), ctx.pi() * 2u32));
    let rz = eval::pole_distance(z, tau);
    if rz < 1e-6 {
        return Err(Error::Numeric("PoleOnContour: z is at a pole".into()));
    }
    let dzz = stable_cauchy(|x| eval::rank_star(x, tau, ctx), z, (rz / 2.0).min(0.2), 2, ctx)?;
    let rt = tau_radius(z, tau)?;
    let dt = stable_cauchy(|t| eval::rank_star(z, t, ctx), tau, rt, 1, ctx)?;
    let rhs = &(&dt / &two_pi_i).scale_i64(6) + &(&dzz / &two_pi_i.powi(2));
    Ok(compare("rank-crank pde", at(z, tau), &lhs, &rhs, ctx))
}

/// `φ_N = i^N η^{−2N} (C*)^N`.
pub fn verify_phicrank(n: u32, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Report> {
    let lhs = eval::phi(0, n, z, tau, ctx)?;
    let c = eval::crank_star(z, tau, ctx)?.powi(n as i64);
    let e = eval::eta(tau, ctx)?.powi(-2 * n as i64);
    let rhs = &(&Cx::i_pow(ctx.prec(), n as i64) * &e) * &c;
    Ok(compare(&format!("phicrank N={n}"), at(z, tau), &lhs, &rhs, ctx))
}

/// Crank product against its partial fraction expansion.
pub fn verify_crank_partial_fraction(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Report> {
    let a = eval::crank_star(z, tau, ctx)?;
    let b = eval::crank_star_partial_fraction(z, tau, ctx)?;
    Ok(compare("crank partial fraction", at(z, tau), &a, &b, ctx))
}

/// Theta sum form against the triple product.
pub fn verify_theta_forms(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Report> {
    let a = eval::theta(z, tau, ctx)?;
    let b = eval::theta_product(z, tau, ctx)?;
    Ok(compare("theta sum vs product", at(z, tau), &a, &b, ctx))
}

/// `ϑ(z + λτ + μ) = (−1)^{λ+μ} q^{−λ²/2} e(−λz) ϑ(z)`.
pub fn verify_theta_elliptic(lambda: i64, mu: i64, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Report> {
    let shifted = &(z + &tau.scale_i64(lambda)) + &ctx.rat(&Rational::from(mu));
    let lhs = eval::theta(&shifted, tau, ctx)?;
    let ex = &tau.scale_rat(&Rational::from((-lambda * lambda, 2))) + &z.scale_i64(-lambda);
    let mut rhs = &ctx.e(&ex) * &eval::theta(z, tau, ctx)?;
    if (lambda + mu) % 2 != 0 {
        rhs = -rhs;
    }
    Ok(compare(&format!("theta elliptic lambda={lambda} mu={mu}"), at(z, tau), &lhs, &rhs, ctx))
}

/// `ϑ(z/(cτ+d); γτ) = ψ(γ)³ (cτ+d)^{1/2} e(cz²/(2(cτ+d))) ϑ(z; τ)` with
/// `ψ(γ) = η(γτ) / ((cτ+d)^{1/2} η(τ))`; also checks `|ratio| = 1` and `ratio^8 = 1`.
pub fn verify_theta_modular(g: &Gamma, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Vec<Report>> {
    let j = g.j(tau);
    let sj = j.sqrt();
    let gt = g.act(tau);
    let lhs = eval::theta(&(z / &j), &gt, ctx)?;
    let ex = (&z.powi(2).scale_i64(g.c) / &j).scale_rat(&Rational::from((1, 2)));
    let base = &(&sj * &ctx.e(&ex)) * &eval::theta(z, tau, ctx)?;
    let ratio = &lhs / &base;
    let psi = &eval::eta(&gt, ctx)? / &(&sj * &eval::eta(tau, ctx)?);
    let name = format!("theta modular [[{}, {}], [{}, {}]]", g.a, g.b, g.c, g.d);
    let one = ctx.one();
    Ok(vec![
        compare(&name, at(z, tau), &ratio, &psi.powi(3), ctx),
        compare(&format!("{name} |ratio|"), at(z, tau), &Cx::real(ratio.abs()), &one, ctx),
        compare(&format!("{name} ratio^8"), at(z, tau), &ratio.powi(8), &one, ctx),
    ])
}

/// Translation, inversion and multiplier laws of `ϑ̃_{1/2+ν}(N, r)` for even `N`.
pub fn verify_partial_theta_modular(n: u32, r: i64, g: &Gamma, tau: &Cx, ctx: &PrecisionContext) -> Result<Vec<Report>> {
    if n % 2 == 1 {
        return Err(Error::Invalid(format!("N must be even, got {n}")));
    }
    Gamma::new(g.a, g.b, g.c, g.d)?;
    let nn = n as i64;
    let rr = Rational::from(r);
    let th = |k: i64, nu: u8, t: &Cx| eval::theta_tilde(n, &Rational::from(k), nu, t, ctx);
    let mut out = Vec::new();
    let pt = format!("tau = {tau}");
    let t1 = tau + &ctx.one();
    let lhs = th(r, 1, &t1)?;
    let rhs = &ctx.e(&ctx.rat(&Rational::from((r * r, 2 * nn)))) * &th(r, 1, tau)?;
    out.push(compare(&format!("partial theta T N={n} r={r}"), pt.clone(), &lhs, &rhs, ctx));
    let st = (-tau).inv();
    let lhs = th(r, 1, &st)?;
    let mut sum = ctx.zero();
    let two_pi = Float::with_val(ctx.prec(), ctx.pi() * 2u32);
    for k in 1..nn / 2 {
        let ang = Float::with_val(ctx.prec(), &two_pi * Rational::from((k * r, nn)));
        sum = &sum + &th(k, 1, tau)?.scale(&ang.sin());
    }
    let pre = (&(-ctx.i()) * tau).pow_rat(&Rational::from((3, 2)));
    let c = Float::with_val(ctx.prec(), 2u32) / Float::with_val(ctx.prec(), nn).sqrt();
    let rhs = (&pre * &sum).scale(&c);
    out.push(compare(&format!("partial theta S N={n} r={r}"), pt.clone(), &lhs, &rhs, ctx));
    if g.in_gamma1(2 * nn) {
        let chi = multiplier(n, r, g, ctx);
        let gt = g.act(tau);
        for nu in 0..2u8 {
            let lhs = eval::theta_tilde(n, &rr, nu, &gt, ctx)?;
            let w = g.j(tau).pow_rat(&Rational::from((1 + 2 * nu as i64, 2)));
            let rhs = &(&chi * &w) * &th(r, nu, tau)?;
            let name = format!("partial theta multiplier N={n} r={r} nu={nu} [[{}, {}], [{}, {}]]", g.a, g.b, g.c, g.d);
            out.push(compare(&name, pt.clone(), &lhs, &rhs, ctx));
        }
    }
    Ok(out)
}

/// `φ_{2M,N+2M} = Σ_j f_j H^j φ_N` at a point, with `H = 2N D_q + D_ζ²` applied by
/// mixed Cauchy derivatives of `φ_N`.
pub fn verify_heat_decomposition(h: &HeatDecomposition, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Report> {
    let (n, m) = (h.n, h.m);
    let lhs = eval::phi(2 * m, n + 2 * m, z, tau, ctx)?;
    let rz = (eval::pole_distance(z, tau) / 3.0).min(0.1);
    let rt = (tau.im.to_f64() / 8.0).min(0.05);
    let two_pi_i = ctx.i().scale(&Float::with_val(ctx.prec(), ctx.pi() * 2u32));
    let base = |x: &Cx, t: &Cx| eval::phi(0, n, x, t, ctx);
    let mut rhs = ctx.zero();
    for (j, fj) in h.f.iter().enumerate() {
        let j = j as u32;
        let mut hj = ctx.zero();
        for k in 0..=j {
            let d = eval::mixed_cauchy(base, z, rz, 2 * (j - k), tau, rt, k, ctx)?;
            let c = Integer::from(Integer::binomial_u(j, k)) * Integer::from(2 * n).pow(k);
            hj = &hj + &(&d / &two_pi_i.powi((2 * j - k) as i64)).scale_rat(&Rational::from(c));
        }
        rhs = &rhs + &(&eval::eval_series(fj, tau, ctx) * &hj);
    }
    Ok(compare(&format!("heat decomposition N={n} M={m}"), at(z, tau), &lhs, &rhs, ctx))
}

/// `χ(M, N, r; τ) = ∫_0^1 φ_{M,N}(x + iy) e(−r(x + iy)) dx` with `y = Im τ / 2`,
/// by the trapezoid rule with point doubling.
pub fn fourier_quadrature(m: u32, n: u32, r: &Rational, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    let y = Float::with_val(ctx.prec(), &tau.im / 2u32);
    let pass = |p: usize| -> Result<Cx> {
        let mut acc = ctx.zero();
        for j in 0..p {
            let x = Float::with_val(ctx.prec(), Rational::from((2 * j as i64 + 1, 2 * p as i64)));
            let z = Cx::new(x, y.clone());
            let v = &eval::phi(m, n, &z, tau, ctx)? * &ctx.e(&(-z.scale_rat(r)));
            acc = &acc + &v;
        }
        Ok(acc.scale_rat(&Rational::from((1, p as i64))))
    };
    let mut p = ctx.quadrature_points.max(8);
    let mut prev = pass(p)?;
    while p < 1 << 15 {
        p *= 2;
        let next = pass(p)?;
        if (&next - &prev).abs_f64() <= ctx.tol() * next.abs_f64().max(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numeric("NonConvergent: Fourier quadrature unstable under point doubling".into()))
}

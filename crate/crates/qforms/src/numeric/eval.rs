//! Theta, eta, the forms `φ_{M,N}`, rank/crank series and the Appell–Lerch
//! sums `F_N`, each summed until the dropped terms fall below working precision.

use super::{Cx, PrecisionContext};
use crate::error::{Error, Result};
use crate::phased::Phased;
use crate::series::QSeries;
use rug::ops::Pow;
use rug::{Integer, Rational};

const MAX_TERMS: i64 = 200_000;

/// `Σ_n term(n)` for terms decaying in both directions away from `vertex`.
pub fn bilateral<F>(ctx: &PrecisionContext, vertex: i64, mut term: F) -> Result<Cx>
where
    F: FnMut(i64) -> Result<Cx>,
{
    let eps = ctx.eps().to_f64();
    let mut sum = ctx.zero();
    let mut biggest = 0f64;
    for dir in [1i64, -1] {
        let mut quiet = 0;
        let mut k = if dir == 1 { 0 } else { 1 };
        loop {
            let n = vertex + dir * k;
            let t = term(n)?;
            let a = t.abs_f64();
            biggest = biggest.max(a);
            sum = &sum + &t;
            if a <= eps * biggest.max(f64::MIN_POSITIVE) && k >= 2 {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            k += 1;
            if k > MAX_TERMS {
                return Err(Error::Numeric("PrecisionExhausted: series tail not below tolerance".into()));
            }
        }
    }
    Ok(sum)
}

/// Value of a truncated series at `q = e(τ)` (terms beyond the truncation are ignored).
pub fn eval_series(s: &QSeries, tau: &Cx, ctx: &PrecisionContext) -> Cx {
    let mut acc = ctx.zero();
    for (e, c) in s.terms() {
        let t = ctx.e(&tau.scale_rat(&e)).scale_rat(c);
        acc = &acc + &t;
    }
    acc
}

pub fn eval_phased(p: &Phased, tau: &Cx, ctx: &PrecisionContext) -> Cx {
    &Cx::i_pow(ctx.prec(), p.ipow as i64) * &eval_series(&p.series, tau, ctx)
}

fn half(ctx: &PrecisionContext) -> Rational {
    let _ = ctx;
    Rational::from((1, 2))
}

/// `ϑ(z; τ) = i Σ (−1)^n q^{(n+1/2)²/2} ζ^{n+1/2}`.
pub fn theta(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    let v = (-z.im.to_f64() / tau.im.to_f64()).round() as i64;
    let s = bilateral(ctx, v, |n| {
        let nu = Rational::from(n) + half(ctx);
        let x = &tau.scale_rat(&(Rational::from(&nu * &nu) / 2u32)) + &z.scale_rat(&nu);
        let t = ctx.e(&x);
        Ok(if n % 2 == 0 { t } else { -t })
    })?;
    Ok(&ctx.i() * &s)
}

/// `ϑ` from the triple product `−i q^{1/8} ζ^{−1/2} (1 − ζ) Π (1 − q^n)(1 − ζq^n)(1 − ζ^{−1}q^n)`.
pub fn theta_product(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    let one = ctx.one();
    let q = ctx.e(tau);
    let zeta = ctx.e(z);
    let zinv = zeta.inv();
    let mut p = &(-ctx.i()) * &ctx.e(&tau.scale_rat(&Rational::from((1, 8))));
    p = &p * &ctx.e(&z.scale_rat(&Rational::from((-1, 2))));
    p = &p * &(&one - &zeta);
    let big = zeta.abs_f64().max(zinv.abs_f64()).max(1.0);
    let eps = ctx.eps().to_f64();
    let mut qn = q.clone();
    for _ in 0..MAX_TERMS {
        let f = &(&(&one - &qn) * &(&one - &(&zeta * &qn))) * &(&one - &(&zinv * &qn));
        p = &p * &f;
        if qn.abs_f64() * big < eps {
            return Ok(p);
        }
        qn = &qn * &q;
    }
    Err(Error::Numeric("PrecisionExhausted: product did not converge".into()))
}

/// `η(τ) = q^{1/24} Π (1 − q^n)`.
pub fn eta(tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    let one = ctx.one();
    let q = ctx.e(tau);
    let mut p = ctx.e(&tau.scale_rat(&Rational::from((1, 24))));
    let eps = ctx.eps().to_f64();
    let mut qn = q.clone();
    for _ in 0..MAX_TERMS {
        p = &p * &(&one - &qn);
        if qn.abs_f64() < eps {
            return Ok(p);
        }
        qn = &qn * &q;
    }
    Err(Error::Numeric("PrecisionExhausted: eta product did not converge".into()))
}

/// Euclidean distance from `z` to the lattice `Zτ + Z`.
pub fn pole_distance(z: &Cx, tau: &Cx) -> f64 {
    let (zr, zi) = z.to_f64_pair();
    let (tr, ti) = tau.to_f64_pair();
    let k0 = (zi / ti).round() as i64;
    let mut best = f64::INFINITY;
    for k in k0 - 1..=k0 + 1 {
        let re = zr - k as f64 * tr;
        let im = zi - k as f64 * ti;
        let re = re - re.round();
        best = best.min(re.hypot(im));
    }
    best
}

/// Distance below which evaluation near a pole is refused.
pub const POLE_EPS: f64 = 1e-8;

/// `φ_{M,N}(z; τ) = ϑ(z + 1/2)^M / ϑ(z)^N`.
pub fn phi(m: u32, n: u32, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    if pole_distance(z, tau) < POLE_EPS {
        return Err(Error::Numeric("NearPole: z is too close to the lattice".into()));
    }
    let h = ctx.rat(&Rational::from((1, 2)));
    let num = theta(&(z + &h), tau, ctx)?.powi(m as i64);
    let den = theta(z, tau, ctx)?.powi(n as i64);
    Ok(&num / &den)
}

/// `C*` from the product: `ζ^{1/2} q^{−1/24} (q)_∞ / ((1 − ζ)(ζq)_∞(ζ^{−1}q)_∞)`.
pub fn crank_star(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    if pole_distance(z, tau) < POLE_EPS {
        return Err(Error::Numeric("NearPole: z is too close to the lattice".into()));
    }
    let one = ctx.one();
    let q = ctx.e(tau);
    let zeta = ctx.e(z);
    let zinv = zeta.inv();
    let mut p = &ctx.e(&z.scale_rat(&Rational::from((1, 2)))) * &ctx.e(&tau.scale_rat(&Rational::from((-1, 24))));
    p = &p / &(&one - &zeta);
    let big = zeta.abs_f64().max(zinv.abs_f64()).max(1.0);
    let eps = ctx.eps().to_f64();
    let mut qn = q.clone();
    for _ in 0..MAX_TERMS {
        let den = &(&one - &(&zeta * &qn)) * &(&one - &(&zinv * &qn));
        p = &(&p * &(&one - &qn)) / &den;
        if qn.abs_f64() * big < eps {
            return Ok(p);
        }
        qn = &qn * &q;
    }
    Err(Error::Numeric("PrecisionExhausted: crank product did not converge".into()))
}

/// `ζ^{1/2}/η Σ (−1)^n q^{e(n)} / (1 − ζ q^n)` for a quadratic exponent `e`.
fn appell(z: &Cx, tau: &Cx, ctx: &PrecisionContext, a: i64, b: i64) -> Result<Cx> {
    ctx.check_upper(tau)?;
    if pole_distance(z, tau) < POLE_EPS {
        return Err(Error::Numeric("NearPole: z is too close to the lattice".into()));
    }
    let one = ctx.one();
    let s = bilateral(ctx, 0, |n| {
        let ex = Rational::from((n * (a * n + b), 2));
        let num = ctx.e(&tau.scale_rat(&ex));
        let den = &one - &ctx.e(&(z + &tau.scale_i64(n)));
        let t = &num / &den;
        Ok(if n % 2 == 0 { t } else { -t })
    })?;
    let pre = &ctx.e(&z.scale_rat(&Rational::from((1, 2)))) / &eta(tau, ctx)?;
    Ok(&pre * &s)
}

/// `C*` from its partial fraction expansion.
pub fn crank_star_partial_fraction(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    appell(z, tau, ctx, 1, 1)
}

/// `R* = ζ^{1/2}/η Σ (−1)^n q^{n(3n+1)/2} / (1 − ζ q^n)`.
pub fn rank_star(z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    appell(z, tau, ctx, 3, 1)
}

/// `F_N(z, u; τ) = ζ^{N/2} w^{N/2} Σ (−w)^{Nn} q^{N n(n+1)/2} / (1 − ζ w q^n)`.
pub fn f_n(n: u32, z: &Cx, u: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    let nn = n as i64;
    let one = ctx.one();
    let zu = z + u;
    if pole_distance(&zu, tau) < POLE_EPS {
        return Err(Error::Numeric("NearPole: z + u is too close to the lattice".into()));
    }
    let s = bilateral(ctx, 0, |k| {
        let x = &tau.scale_rat(&Rational::from((nn * k * (k + 1), 2))) + &u.scale_i64(nn * k);
        let num = ctx.e(&x);
        let den = &one - &ctx.e(&(&zu + &tau.scale_i64(k)));
        let t = &num / &den;
        Ok(if (nn * k) % 2 == 0 { t } else { -t })
    })?;
    Ok(&ctx.e(&zu.scale_rat(&Rational::from((nn, 2)))) * &s)
}

/// `f^{(k)}(x0)` by the trapezoid rule on a circle of radius `radius`.
pub fn cauchy_derivative<F>(f: F, x0: &Cx, radius: f64, k: u32, points: usize, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Cx) -> Result<Cx>,
{
    let mut acc = ctx.zero();
    for j in 0..points {
        let th = ctx.rat(&Rational::from((j as i64, points as i64)));
        let unit = ctx.e(&th);
        let x = x0 + &unit.scale(&rug::Float::with_val(ctx.prec(), radius));
        let v = f(&x)?;
        acc = &acc + &(&v * &unit.powi(-(k as i64)));
    }
    let fact = Integer::from(Integer::factorial(k));
    let scale = rug::Float::with_val(ctx.prec(), &fact) / rug::Float::with_val(ctx.prec(), radius).pow(k as i32);
    Ok(acc.scale(&scale).scale_rat(&Rational::from((1, points as i64))))
}

/// Cauchy derivative repeated with doubled points until two passes agree to tolerance.
pub fn stable_cauchy<F>(f: F, x0: &Cx, radius: f64, k: u32, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Cx) -> Result<Cx>,
{
    let mut p = ((ctx.bits as usize + 64).next_power_of_two()).max(32);
    let mut prev = cauchy_derivative(&f, x0, radius, k, p, ctx)?;
    for _ in 0..4 {
        p *= 2;
        let next = cauchy_derivative(&f, x0, radius, k, p, ctx)?;
        let diff = (&next - &prev).abs_f64();
        if diff <= ctx.tol() * next.abs_f64().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numeric("NonConvergent: Cauchy quadrature unstable under point doubling".into()))
}

/// `∂_τ^a ∂_z^b f(z0, τ0)` by nested trapezoid rules on circles, doubled until stable.
pub fn mixed_cauchy<F>(f: F, z0: &Cx, rz: f64, b: u32, tau0: &Cx, rt: f64, a: u32, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Cx, &Cx) -> Result<Cx>,
{
    let pass = |p: usize| -> Result<Cx> {
        let inner = |t: &Cx| -> Result<Cx> {
            if b == 0 {
                f(z0, t)
            } else {
                cauchy_derivative(|x| f(x, t), z0, rz, b, p, ctx)
            }
        };
        if a == 0 {
            inner(tau0)
        } else {
            cauchy_derivative(inner, tau0, rt, a, p, ctx)
        }
    };
    let mut p = 32;
    let mut prev = pass(p)?;
    for _ in 0..4 {
        p *= 2;
        let next = pass(p)?;
        if (&next - &prev).abs_f64() <= ctx.tol() * next.abs_f64().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numeric("NonConvergent: mixed Cauchy quadrature unstable under point doubling".into()))
}

/// Largest radius about `u = 0` keeping `z + u` away from `Zτ + Z`, halved.
pub fn f_n_radius(z: &Cx, tau: &Cx) -> Result<f64> {
    let d = pole_distance(z, tau);
    if d < 1e-6 {
        return Err(Error::Numeric("PoleOnContour: no pole-free u-circle".into()));
    }
    Ok((d / 2.0).min(0.25))
}

/// `D_w^k F_N |_{w=1}` by Cauchy quadrature in `u` (`D_w = (1/2πi) ∂_u`).
pub fn f_n_dw_cauchy(n: u32, k: u32, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    let rad = f_n_radius(z, tau)?;
    let d = stable_cauchy(|u| f_n(n, z, u, tau, ctx), &ctx.zero(), rad, k, ctx)?;
    let two_pi_i = ctx.i().scale(&rug::Float::with_val(ctx.prec(), ctx.pi() * 2u32));
    Ok(&d / &two_pi_i.powi(k as i64))
}

/// Numerators `P_j` with `D_y^j (1/(1−y)) = P_j(y) / (1−y)^{j+1}`.
pub fn eulerian_numerators(k: u32) -> Vec<Vec<Integer>> {
    let mut out = vec![vec![Integer::from(1)]];
    for j in 0..k as usize {
        let p = &out[j];
        // P_{j+1} = y (P_j' (1 − y) + (j+1) P_j)
        let mut inner = vec![Integer::new(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            if i > 0 {
                let d = Integer::from(c * i as u64);
                inner[i - 1] += &d;
                inner[i] -= &d;
            }
            inner[i] += Integer::from(c * (j as u64 + 1));
        }
        let mut next = vec![Integer::new()];
        next.extend(inner);
        while next.len() > 1 && next.last().is_some_and(|c| *c == 0) {
            next.pop();
        }
        out.push(next);
    }
    out
}

/// `D_w^k F_N |_{w=1}` by differentiating each term `c w^a / (1 − βw)` exactly.
pub fn f_n_dw_termwise(n: u32, k: u32, z: &Cx, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    if pole_distance(z, tau) < POLE_EPS {
        return Err(Error::Numeric("NearPole: z is too close to the lattice".into()));
    }
    let nn = n as i64;
    let one = ctx.one();
    let polys = eulerian_numerators(k);
    let binom: Vec<Integer> = (0..=k).map(|j| Integer::from(Integer::binomial_u(k, j))).collect();
    let s = bilateral(ctx, 0, |m| {
        let c = ctx.e(&tau.scale_rat(&Rational::from((nn * m * (m + 1), 2))));
        let beta = ctx.e(&(z + &tau.scale_i64(m)));
        let omb = &one - &beta;
        let a = Rational::from((nn + 2 * nn * m, 2));
        let mut acc = ctx.zero();
        for j in 0..=k as usize {
            let mut pv = ctx.zero();
            for (i, coef) in polys[j].iter().enumerate() {
                pv = &pv + &beta.powi(i as i64).scale_rat(&Rational::from(coef));
            }
            let w = &binom[j] * a.clone().pow_ref_k(k - j as u32);
            acc = &acc + &(&pv / &omb.powi(j as i64 + 1)).scale_rat(&w);
        }
        let t = &c * &acc;
        Ok(if (nn * m) % 2 == 0 { t } else { -t })
    })?;
    Ok(&ctx.e(&z.scale_rat(&Rational::from((nn, 2)))) * &s)
}

trait PowK {
    fn pow_ref_k(self, k: u32) -> Rational;
}

impl PowK for Rational {
    fn pow_ref_k(self, k: u32) -> Rational {
        let mut acc = Rational::from(1);
        for _ in 0..k {
            acc *= &self;
        }
        acc
    }
}

/// `ϑ̃_{1/2+ν}(N, r; τ) = Σ (−1)^{nN} (n + r/N)^ν q^{N(n + r/N)²/2}` for rational `r`.
pub fn theta_tilde(n: u32, r: &Rational, nu: u8, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    let nn = n as i64;
    let v = -(r.to_f64() / nn as f64).round() as i64;
    bilateral(ctx, v, |k| {
        let s = Rational::from(k) + Rational::from(r / nn);
        let ex = Rational::from(&s * &s) * nn / 2u32;
        let mut t = ctx.e(&tau.scale_rat(&ex));
        if nu == 1 {
            t = t.scale_rat(&s);
        }
        Ok(if (nn * k) % 2 == 0 { t } else { -t })
    })
}

/// Partial theta `Σ_{n≥0} (−1)^{Nn} (n + r/N)^ν q^{N(n + r/N)²/2}` with optional `D_q^j`.
pub fn partial_theta(n: u32, r: &Rational, nu: u8, dq: u32, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    ctx.check_upper(tau)?;
    let nn = n as i64;
    let eps = ctx.eps().to_f64();
    let mut acc = ctx.zero();
    let mut biggest = 0f64;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let s = Rational::from(k) + Rational::from(r / nn);
        let ex = Rational::from(&s * &s) * nn / 2u32;
        let mut t = ctx.e(&tau.scale_rat(&ex));
        if nu == 1 {
            t = t.scale_rat(&s);
        }
        for _ in 0..dq {
            t = t.scale_rat(&ex);
        }
        if (nn * k) % 2 == 1 {
            t = -t;
        }
        let a = t.abs_f64();
        biggest = biggest.max(a);
        acc = &acc + &t;
        if a <= eps * biggest.max(f64::MIN_POSITIVE) && k > 2 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Numeric("PrecisionExhausted: partial theta did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_sum_matches_product() {
        let ctx = PrecisionContext::new(128);
        let z = ctx.c(0.31, 0.17);
        let tau = ctx.c(0.11, 1.3);
        let a = theta(&z, &tau, &ctx).unwrap();
        let b = theta_product(&z, &tau, &ctx).unwrap();
        assert!((&a - &b).abs_f64() < 1e-35);
    }

    #[test]
    fn theta_derivative_at_zero() {
        let ctx = PrecisionContext::new(128);
        let tau = ctx.c(0.0, 1.0);
        let d = stable_cauchy(|z| theta(z, &tau, &ctx), &ctx.zero(), 0.1, 1, &ctx).unwrap();
        let e3 = eta(&tau, &ctx).unwrap().powi(3);
        let want = e3.scale(&rug::Float::with_val(ctx.prec(), ctx.pi() * -2i32));
        assert!((&d - &want).abs_f64() < 1e-30);
    }

    #[test]
    fn eulerian_small() {
        let p = eulerian_numerators(3);
        assert_eq!(p[1], vec![Integer::from(0), Integer::from(1)]);
        assert_eq!(p[2], vec![Integer::from(0), Integer::from(1), Integer::from(1)]);
        assert_eq!(p[3], vec![Integer::from(0), Integer::from(1), Integer::from(4), Integer::from(1)]);
    }

    #[test]
    fn f_n_derivatives_agree() {
        let ctx = PrecisionContext::new(96);
        let z = ctx.c(0.23, 0.31);
        let tau = ctx.c(0.07, 1.1);
        for (n, k) in [(3u32, 2u32), (2, 1), (1, 0)] {
            let a = f_n_dw_cauchy(n, k, &z, &tau, &ctx).unwrap();
            let b = f_n_dw_termwise(n, k, &z, &tau, &ctx).unwrap();
            assert!((&a - &b).abs_f64() < 1e-20, "N = {n}, k = {k}");
        }
    }
}

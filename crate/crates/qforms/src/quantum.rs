//! Quantum modularity of the weight 3/2 partial theta functions for even `N`:
//! quantum sets, Gauss sums, the periodic sequence `γ_{N,r}`, L-values at
//! negative integers, asymptotic expansions toward rationals, the
//! nonholomorphic Eichler integral with its cocycles, and finite evaluations
//! at roots of unity.

use crate::arith::{bernoulli_poly, factorial, gcd_i64, ord2};
use crate::error::{Error, Result};
use crate::gens::{eta_power, qpoch};
use crate::numeric::eval::{partial_theta, stable_cauchy, theta_tilde};
use crate::numeric::quad::{exp_sinh, tanh_sinh};
use crate::numeric::verify::{multiplier, Gamma};
use crate::numeric::{Cx, PrecisionContext};
use crate::series::QSeries;
use rand::Rng;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

/// A reduced fraction `h/k` with `k > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalPoint {
    pub h: i64,
    pub k: i64,
}

impl RationalPoint {
    pub fn new(h: i64, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::Invalid(format!("denominator must be positive, got {k}")));
        }
        if gcd_i64(h, k) != 1 {
            return Err(Error::Invalid(format!("{h}/{k} is not reduced")));
        }
        Ok(RationalPoint { h, k })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (h, k) = s.split_once('/').unwrap_or((s, "1"));
        let h = h.trim().parse().map_err(|_| Error::Invalid(format!("bad point {s:?}")))?;
        let k = k.trim().parse().map_err(|_| Error::Invalid(format!("bad point {s:?}")))?;
        Self::new(h, k)
    }

    pub fn as_rational(&self) -> Rational {
        Rational::from((self.h, self.k))
    }

    /// Image under a Möbius transformation; `None` at the cusp `∞`.
    pub fn act(&self, g: &Gamma) -> Option<Self> {
        let num = g.a * self.h + g.b * self.k;
        let den = g.c * self.h + g.d * self.k;
        if den == 0 {
            return None;
        }
        let s = den.signum();
        Some(RationalPoint { h: s * num, k: s * den })
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.h, self.k)
    }
}

/// Which of the three residue classes of `r` the quantum set depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `N/2 ∤ r`
    Generic,
    /// `r ≡ N/2 (mod N)`
    Half,
    /// `r ≡ 0 (mod N)`
    Zero,
}

fn check_even(n: u32) -> Result<()> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Invalid(format!("N must be positive and even, got {n}")));
    }
    Ok(())
}

pub fn branch(n: u32, r: i64) -> Result<Branch> {
    check_even(n)?;
    let nn = n as i64;
    Ok(if r.rem_euclid(nn) == 0 {
        Branch::Zero
    } else if r.rem_euclid(nn / 2) == 0 {
        Branch::Half
    } else {
        Branch::Generic
    })
}

/// Membership of `h/k` in the quantum set of `Θ_{3/2}(N, r)`.
pub fn quantum_member(n: u32, r: i64, p: &RationalPoint) -> Result<bool> {
    let on = ord2(n as i64).unwrap();
    let ok = ord2(p.k).unwrap();
    Ok(match branch(n, r)? {
        Branch::Generic => p.k % (n as i64 / 2) == 0 && ok == on - 1,
        Branch::Half => ok > on,
        Branch::Zero => ok == on,
    })
}

/// Membership of `h/k` in the quantum set of `G(a, b; τ) = Σ_{n≥0} (−1)^n q^{(n + a/b)²}`.
pub fn for_quantum_member(a: i64, b: i64, p: &RationalPoint) -> Result<bool> {
    if a <= 0 || gcd_i64(a, b) != 1 {
        return Err(Error::Invalid(format!("need a > 0 and gcd(a, b) = 1, got ({a}, {b})")));
    }
    Ok(p.h > 0 && (2 * p.h) % b == 0 && p.h % b != 0 && (p.k - a).rem_euclid(b.abs()) == 0 && p.k >= a)
}

/// `G(a, b; τ)` summed directly.
pub fn g_partial(a: i64, b: i64, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    partial_theta(1, &Rational::from((a, b)), 0, 0, &tau.scale_i64(2), ctx)
}

/// Random points of the quantum set of `Θ_{3/2}(N, r)`.
pub fn sample_quantum_points<R: Rng>(n: u32, r: i64, count: usize, rng: &mut R) -> Result<Vec<RationalPoint>> {
    let on = ord2(n as i64).unwrap();
    let br = branch(n, r)?;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let odd = 2 * rng.gen_range(0..6) + 1;
        let k = match br {
            Branch::Generic => (n as i64 / 2) * odd,
            Branch::Half => (1i64 << (on + 1 + rng.gen_range(0..3))) * odd,
            Branch::Zero => (1i64 << on) * odd,
        };
        let h = rng.gen_range(-3 * k..=3 * k);
        if let Ok(p) = RationalPoint::new(h, k) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `G(a, b, c) = Σ_{n=0}^{c−1} e((an² + bn)/c)` at working precision.
pub fn gauss_sum(a: i64, b: i64, c: i64, ctx: &PrecisionContext) -> Result<Cx> {
    if c < 1 {
        return Err(Error::Invalid(format!("c must be positive, got {c}")));
    }
    let mut acc = ctx.zero();
    for n in 0..c {
        let j = (a * n * n + b * n).rem_euclid(c);
        acc = &acc + &ctx.e(&ctx.rat(&Rational::from((j, c))));
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GaussClause {
    /// `(a, c) > 1` and `(a, c) ∤ b`
    Case1,
    /// `c ≡ 0 (mod 4)` and `b` odd
    Case2,
    /// `b ≡ 0 (mod c)` and `c/(a, c) ≡ 2 (mod 4)`
    Case3,
    None,
}

/// The first vanishing criterion that applies to `G(a, b, c)`.
pub fn gauss_vanishing(a: i64, b: i64, c: i64) -> GaussClause {
    let g = gcd_i64(a, c);
    if g > 1 && b % g != 0 {
        GaussClause::Case1
    } else if c % 4 == 0 && b.rem_euclid(2) == 1 {
        GaussClause::Case2
    } else if b.rem_euclid(c) == 0 && (c / g) % 4 == 2 {
        GaussClause::Case3
    } else {
        GaussClause::None
    }
}

/// Roots of unity of order `c` in 2^{-100} fixed point, for bulk Gauss sums.
/// Each entry is rounded to within 2^{-100}, so a `c`-term sum is exact to `c · 2^{-100}`.
pub struct GaussTable {
    c: i64,
    roots: Vec<(i128, i128)>,
}

const FIXED_BITS: u32 = 100;

impl GaussTable {
    pub fn new(c: i64) -> Self {
        let ctx = PrecisionContext::new(160);
        let scale = Float::with_val(ctx.prec(), Float::i_exp(1, FIXED_BITS as i32));
        let roots = (0..c)
            .map(|j| {
                let z = ctx.e(&ctx.rat(&Rational::from((j, c))));
                let f = |x: &Float| Float::with_val(ctx.prec(), x * &scale).round().to_integer().unwrap().to_i128().unwrap();
                (f(&z.re), f(&z.im))
            })
            .collect();
        GaussTable { c, roots }
    }

    /// `|G(a, b, c)|`.
    pub fn abs(&self, a: i64, b: i64) -> f64 {
        let c = self.c;
        let (mut re, mut im) = (0i128, 0i128);
        for n in 0..c {
            let j = (a * n % c * n + b * n).rem_euclid(c) as usize;
            re += self.roots[j].0;
            im += self.roots[j].1;
        }
        let s = 2f64.powi(-(FIXED_BITS as i32));
        (re as f64 * s).hypot(im as f64 * s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// A sequence `χ: Z → C` of period `values.len()`, with `values[j] = χ(j)`.
#[derive(Clone, Debug)]
pub struct PeriodicSeq {
    pub values: Vec<Cx>,
    pub parity: Parity,
}

impl PeriodicSeq {
    pub fn new(values: Vec<Cx>) -> Self {
        let k = values.len();
        let close = |a: &Cx, b: &Cx| (a - b).abs_f64() <= 1e-30 * (1.0 + a.abs_f64());
        let even = (0..k).all(|j| close(&values[j], &values[(k - j) % k]));
        let odd = (0..k).all(|j| close(&values[j], &-&values[(k - j) % k]));
        let parity = if even {
            Parity::Even
        } else if odd {
            Parity::Odd
        } else {
            Parity::None
        };
        PeriodicSeq { values, parity }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, n: i64) -> &Cx {
        &self.values[n.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn mean_value(&self) -> Cx {
        let mut acc = Cx::zero(self.values[0].prec());
        for v in &self.values {
            acc = &acc + v;
        }
        acc.scale_rat(&Rational::from((1, self.values.len() as i64)))
    }

    fn check_mean_zero(&self, ctx: &PrecisionContext) -> Result<()> {
        let scale = self.values.iter().map(|v| v.abs_f64()).fold(1.0, f64::max);
        if self.mean_value().abs_f64() > 10.0 * ctx.tol() * scale {
            return Err(Error::MeanValueNonzero);
        }
        Ok(())
    }
}

/// `γ_{N,r}(n) = m · e(hn²/2kN)` for `n ≡ ±r (mod N)`, zero otherwise, where
/// `m = 2` when `r ≡ −r (mod N)`; period `2kN`.
pub fn gamma_seq(n: u32, r: i64, p: &RationalPoint, ctx: &PrecisionContext) -> Result<PeriodicSeq> {
    check_even(n)?;
    let nn = n as i64;
    if !(0..nn).contains(&r) {
        return Err(Error::Invalid(format!("need 0 <= r < N, got r = {r}")));
    }
    let period = 2 * p.k * nn;
    let mult = if (2 * r) % nn == 0 { 2 } else { 1 };
    let values: Vec<Cx> = (0..period)
        .map(|m| {
            let hit = (m - r).rem_euclid(nn) == 0 || (m + r).rem_euclid(nn) == 0;
            if hit {
                let ph = Rational::from((p.h * (m * m % period), period));
                ctx.e(&ctx.rat(&ph)).scale_i64(mult)
            } else {
                ctx.zero()
            }
        })
        .collect();
    let seq = PeriodicSeq::new(values);
    if quantum_member(n, r, p)? {
        seq.check_mean_zero(ctx)?;
    }
    Ok(seq)
}

/// `L(−m, χ) = −k^m/(m+1) Σ_{n=1}^{k} χ(n) B_{m+1}(n/k)` for mean-zero `χ` of period `k`.
pub fn l_value(m: u32, chi: &PeriodicSeq, ctx: &PrecisionContext) -> Result<Cx> {
    chi.check_mean_zero(ctx)?;
    let k = chi.period() as i64;
    let mut acc = ctx.zero();
    for n in 1..=k {
        let b = bernoulli_poly(m as usize + 1, &Rational::from((n, k)));
        acc = &acc + &chi.at(n).scale_rat(&b);
    }
    let pre = -Rational::from(rug::Integer::from(k).pow(m)) / (m + 1);
    Ok(acc.scale_rat(&pre))
}

/// Exact `L(−m, χ)` for a rational mean-zero sequence, by the Bernoulli formula.
pub fn l_value_exact(m: u32, chi: &[Rational]) -> Result<Rational> {
    let k = chi.len() as i64;
    if chi.iter().sum::<Rational>() != 0 {
        return Err(Error::MeanValueNonzero);
    }
    let mut acc = Rational::new();
    for n in 1..=k {
        acc += &chi[(n % k) as usize] * bernoulli_poly(m as usize + 1, &Rational::from((n, k)));
    }
    Ok(-acc * Rational::from(rug::Integer::from(k).pow(m)) / (m + 1))
}

/// Exact `L(−m, χ)` from the Abel generating function
/// `f(t) = Σ χ(n) e^{−nt} = Σ_{a=1}^{k} χ(a) e^{−at} / (1 − e^{−kt})`,
/// whose Taylor coefficients are `(−1)^m L(−m, χ)/m!`.
pub fn l_value_abel_exact(m: u32, chi: &[Rational]) -> Result<Rational> {
    let k = chi.len() as i64;
    if chi.iter().sum::<Rational>() != 0 {
        return Err(Error::MeanValueNonzero);
    }
    let len = m as usize + 2;
    // numerator and denominator divided by t
    let mut num = vec![Rational::new(); len];
    let mut den = vec![Rational::new(); len];
    for j in 0..len {
        let fj = Rational::from(factorial(j as u32 + 1));
        let mut s = Rational::new();
        for a in 1..=k {
            s += &chi[(a % k) as usize] * Rational::from(rug::Integer::from(-a).pow(j as u32 + 1));
        }
        num[j] = s / &fj;
        den[j] = -Rational::from(rug::Integer::from(-k).pow(j as u32 + 1)) / fj;
    }
    let mut quo = vec![Rational::new(); len];
    for j in 0..len {
        let mut s = num[j].clone();
        for i in 0..j {
            s -= Rational::from(&quo[i] * &den[j - i]);
        }
        quo[j] = s / &den[0];
    }
    let sign = if m.is_multiple_of(2) { 1 } else { -1 };
    Ok(Rational::from(factorial(m)) * &quo[m as usize] * sign)
}

/// `L(−m, χ) = (−1)^m f^{(m)}(0)` with `f` the Abel generating function,
/// differentiated by a Cauchy integral around `t = 0`.
pub fn l_value_abel(m: u32, chi: &PeriodicSeq, ctx: &PrecisionContext) -> Result<Cx> {
    chi.check_mean_zero(ctx)?;
    let k = chi.period() as i64;
    let f = |t: &Cx| -> Result<Cx> {
        let mut num = ctx.zero();
        for a in 1..=k {
            num = &num + &(chi.at(a) * &(-t.scale_i64(a)).exp());
        }
        Ok(&num / &(&ctx.one() - &(-t.scale_i64(k)).exp()))
    };
    let radius = std::f64::consts::PI / k as f64;
    let d = stable_cauchy(f, &ctx.zero(), radius, m, ctx)?;
    Ok(if m.is_multiple_of(2) { d } else { -d })
}

/// `a_j = (1/N) (−1)^j L(−2j−1, γ_{N,r}) / j! · (2N)^{−j}` for `j < count`.
pub fn asymptotic_coeffs(n: u32, r: i64, p: &RationalPoint, count: usize, ctx: &PrecisionContext) -> Result<Vec<Cx>> {
    if !quantum_member(n, r, p)? {
        return Err(Error::Invalid(format!("{p} is not in the quantum set for N = {n}, r = {r}")));
    }
    let g = gamma_seq(n, r, p, ctx)?;
    let nn = n as i64;
    (0..count)
        .map(|j| {
            let l = l_value(2 * j as u32 + 1, &g, ctx)?;
            let mut c = Rational::from((1, nn)) / Rational::from(factorial(j as u32));
            c /= Rational::from(rug::Integer::from(2 * nn).pow(j as u32));
            if j % 2 == 1 {
                c = -c;
            }
            Ok(l.scale_rat(&c))
        })
        .collect()
}

/// `h/k + i t/2π`, with `sign = −1` for the lower half-plane.
pub fn near_point(p: &RationalPoint, t: &Float, sign: i32, ctx: &PrecisionContext) -> Cx {
    let im = Float::with_val(ctx.prec(), t / Float::with_val(ctx.prec(), ctx.pi() * 2u32)) * sign;
    Cx::new(Float::with_val(ctx.prec(), &p.as_rational()), im)
}

/// `Θ^+_{3/2}(N, r; τ) + (r/N) q^{r²/2N}` by direct summation.
pub fn upper_side(n: u32, r: i64, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    let nn = n as i64;
    let a = partial_theta(n, &Rational::from(r), 1, 0, tau, ctx)?;
    let b = partial_theta(n, &Rational::from(-r), 1, 0, tau, ctx)?;
    let c = ctx.e(&tau.scale_rat(&Rational::from((r * r, 2 * nn)))).scale_rat(&Rational::from((r, nn)));
    Ok(&(&a + &b) + &c)
}

/// `Γ(−1/2; x) = 2e^{−x}/√x − 2√π erfc(√x)` for real `x > 0`.
pub fn upper_gamma_minus_half(x: &Float, ctx: &PrecisionContext) -> Float {
    let p = ctx.prec();
    let sx = Float::with_val(p, x.sqrt_ref());
    let a = Float::with_val(p, Float::with_val(p, -x).exp() * 2u32) / &sx;
    let b = Float::with_val(p, ctx.pi().sqrt() * 2u32) * Float::with_val(p, sx.erfc_ref());
    a - b
}

fn check_lower(tau: &Cx) -> Result<()> {
    if tau.im >= 0 {
        return Err(Error::Invalid("tau must lie in the lower half-plane".into()));
    }
    Ok(())
}

/// Nonholomorphic Eichler integral on the lower half-plane:
/// `−1/(2N√π) Σ_{n≥1} m(n) n Γ(−1/2; 4π n²|y|/2N) e(τn²/2N)`, plus the
/// `−1/(π√(2N|y|))` contribution of the constant term when `r ≡ 0`.
pub fn eichler_star(n: u32, r: i64, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    check_even(n)?;
    check_lower(tau)?;
    let nn = n as i64;
    let p = ctx.prec();
    let y = Float::with_val(p, -&tau.im);
    let four_pi_y = Float::with_val(p, ctx.pi() * 4u32) * &y;
    let eps = ctx.eps().to_f64();
    let mut acc = ctx.zero();
    let mut biggest = 0f64;
    let mut quiet = 0;
    let mut m = 1i64;
    loop {
        let mult = ((m - r).rem_euclid(nn) == 0) as i64 + ((m + r).rem_euclid(nn) == 0) as i64;
        if mult > 0 {
            let x = Float::with_val(p, &four_pi_y * Rational::from((m * m, 2 * nn)));
            let g = upper_gamma_minus_half(&x, ctx);
            let t = ctx.e(&tau.scale_rat(&Rational::from((m * m, 2 * nn)))).scale(&g).scale_i64(mult * m);
            let a = t.abs_f64();
            biggest = biggest.max(a);
            acc = &acc + &t;
            if a <= eps * biggest.max(f64::MIN_POSITIVE) {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        m += 1;
        if m > 2_000_000 {
            return Err(Error::Numeric("PrecisionExhausted: Eichler series did not converge".into()));
        }
    }
    let pre = Float::with_val(p, ctx.pi().sqrt() * (2 * nn)).recip();
    let mut out = -acc.scale(&pre);
    if r.rem_euclid(nn) == 0 {
        let c = Float::with_val(p, Float::with_val(p, &y * (2 * nn)).sqrt() * ctx.pi()).recip();
        out = &out - &Cx::real(c);
    }
    Ok(out)
}

/// `κ = −√i / (2π√N)`.
fn kappa(n: u32, ctx: &PrecisionContext) -> Cx {
    let p = ctx.prec();
    let d = Float::with_val(p, Float::with_val(p, n).sqrt() * ctx.pi()) * 2u32;
    -ctx.i().sqrt().scale(&d.recip())
}

/// `∫ f` over `s ∈ [0, ∞)` split at `s = 1`.
fn half_line<F>(f: F, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Float) -> Result<Cx>,
{
    let p = ctx.prec();
    let zero = Float::new(p);
    let one = Float::with_val(p, 1);
    let a = tanh_sinh(&f, &zero, &one, ctx)?;
    let b = exp_sinh(&f, &one, ctx)?;
    Ok(&a + &b)
}

/// The Eichler integral by quadrature along the vertical ray from `τ̄`:
/// `κ ∫_{τ̄}^{i∞} ϑ̃_{1/2}(N, r; z) (z − τ)^{−3/2} dz`.
pub fn eichler_star_quadrature(n: u32, r: i64, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    check_even(n)?;
    check_lower(tau)?;
    let rr = Rational::from(r);
    let base = tau.conj();
    let e = Rational::from((-3, 2));
    let f = |s: &Float| -> Result<Cx> {
        let z = &base + &Cx::new(Float::new(ctx.prec()), s.clone());
        let v = theta_tilde(n, &rr, 0, &z, ctx)?;
        Ok(&(&v * &(&z - tau).pow_rat(&e)) * &ctx.i())
    };
    Ok(&kappa(n, ctx) * &half_line(f, ctx)?)
}

/// Cocycle `r_x(τ) = −κ ∫_x^{i∞} ϑ̃_{1/2}(N, r; z)(z − τ)^{−3/2} dz` for `x = −d/c`.
/// Near the real endpoint the integrand is evaluated through `γ`, which maps `x` to `i∞`.
pub fn cocycle(n: u32, r: i64, g: &Gamma, tau: &Cx, ctx: &PrecisionContext) -> Result<Cx> {
    check_even(n)?;
    check_lower(tau)?;
    if g.c == 0 {
        return Ok(ctx.zero());
    }
    let rr = Rational::from(r);
    let x = ctx.rat(&Rational::from((-g.d, g.c)));
    let chi = multiplier(n, r, g, ctx);
    let switch = 1.0 / g.c.abs() as f64;
    let e = Rational::from((-3, 2));
    let half = Rational::from((1, 2));
    let f = |s: &Float| -> Result<Cx> {
        let z = &x + &Cx::new(Float::new(ctx.prec()), s.clone());
        let v = if s.to_f64() >= switch {
            theta_tilde(n, &rr, 0, &z, ctx)?
        } else {
            let w = g.j(&z);
            &theta_tilde(n, &rr, 0, &g.act(&z), ctx)? / &(&chi * &w.pow_rat(&half))
        };
        Ok(&(&v * &(&z - tau).pow_rat(&e)) * &ctx.i())
    };
    Ok(&(-kappa(n, ctx)) * &half_line(f, ctx)?)
}

/// Residual of `Θ*(γτ) χ_r(γ)^{−1} (cτ+d)^{−3/2} − Θ*(τ) = r_{−d/c}(τ)`.
pub fn cocycle_residual(n: u32, r: i64, g: &Gamma, tau: &Cx, ctx: &PrecisionContext) -> Result<(Cx, Cx)> {
    let gt = g.act(tau);
    let chi = multiplier(n, r, g, ctx);
    let w = g.j(tau).pow_rat(&Rational::from((-3, 2)));
    let lhs = &(&eichler_star(n, r, &gt, ctx)? * &w) / &chi;
    let lhs = &lhs - &eichler_star(n, r, tau, ctx)?;
    let rhs = cocycle(n, r, g, tau, ctx)?;
    Ok((lhs, rhs))
}

/// Error of truncated expansions on each side, and log-log slopes between consecutive `t`.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeRow {
    pub terms: usize,
    pub upper_errors: Vec<f64>,
    pub lower_errors: Vec<f64>,
    pub upper_slopes: Vec<f64>,
    pub lower_slopes: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub n: u32,
    pub r: i64,
    pub point: RationalPoint,
    pub t: Vec<f64>,
    pub coeffs: Vec<(f64, f64)>,
    pub rows: Vec<SlopeRow>,
}

fn slopes(errs: &[f64], ts: &[f64]) -> Vec<f64> {
    errs.windows(2).zip(ts.windows(2)).map(|(e, t)| (e[0] / e[1]).ln() / (t[0] / t[1]).ln()).collect()
}

/// Compares the upper-side partial theta and the lower-side Eichler integral with
/// truncations of the common asymptotic expansion `Σ a_j (±t)^j`.
pub fn theta_limit_checks(n: u32, r: i64, p: &RationalPoint, ts: &[f64], terms: &[usize], ctx: &PrecisionContext) -> Result<LimitReport> {
    let max_terms = terms.iter().copied().max().unwrap_or(1);
    let a = asymptotic_coeffs(n, r, p, max_terms, ctx)?;
    let mut up = Vec::new();
    let mut lo = Vec::new();
    for &t in ts {
        let tf = Float::with_val(ctx.prec(), t);
        up.push(upper_side(n, r, &near_point(p, &tf, 1, ctx), ctx)?);
        lo.push(eichler_star(n, r, &near_point(p, &tf, -1, ctx), ctx)?);
    }
    let rows = terms
        .iter()
        .map(|&n0| {
            let mut ue = Vec::new();
            let mut le = Vec::new();
            for (i, &t) in ts.iter().enumerate() {
                let (mut su, mut sl) = (ctx.zero(), ctx.zero());
                for (j, aj) in a.iter().take(n0).enumerate() {
                    let tp = Float::with_val(ctx.prec(), t).pow(j as u32);
                    su = &su + &aj.scale(&tp);
                    sl = &sl + &aj.scale(&if j % 2 == 0 { tp } else { -tp });
                }
                ue.push((&up[i] - &su).abs_f64());
                le.push((&lo[i] - &sl).abs_f64());
            }
            SlopeRow { terms: n0, upper_slopes: slopes(&ue, ts), lower_slopes: slopes(&le, ts), upper_errors: ue, lower_errors: le }
        })
        .collect();
    Ok(LimitReport { n, r, point: *p, t: ts.to_vec(), coeffs: a.iter().map(|c| c.to_f64_pair()).collect(), rows })
}

#[derive(Clone, Debug)]
struct Dual {
    v: Cx,
    d: Cx,
}

impl Dual {
    fn constant(v: Cx) -> Self {
        let d = Cx::zero(v.prec());
        Dual { v, d }
    }

    fn mul(&self, o: &Dual) -> Dual {
        Dual { v: &self.v * &o.v, d: &(&self.v * &o.d) + &(&self.d * &o.v) }
    }

    fn div(&self, o: &Dual) -> Dual {
        let v = &self.v / &o.v;
        let d = &(&self.d - &(&v * &o.d)) / &o.v;
        Dual { v, d }
    }

    fn add(&self, o: &Dual) -> Dual {
        Dual { v: &self.v + &o.v, d: &self.d + &o.d }
    }
}

fn order_of(num: i64, den: i64) -> i64 {
    den / gcd_i64(num, den)
}

/// `Σ_{n≥0} (n + r/N) Q^{(n + r/N)²}` at `Q = e(hN/2k)`, through the
/// hypergeometric side of the two-variable partial theta identity, differentiated in `A` with dual numbers.
fn hypergeometric_value(n: u32, r: i64, p: &RationalPoint, ctx: &PrecisionContext) -> Result<Cx> {
    let nn = n as i64;
    let (h, k) = (p.h, p.k);
    let q_at = |num: i64, den: i64| ctx.e(&ctx.rat(&Rational::from((num, den))));
    let big_q = |j: i64| q_at(h * nn * j, 2 * k);
    let order = order_of(h * nn, 2 * k);
    let a0 = -q_at(h * (2 * r - nn), 2 * k);
    let one = ctx.one();
    let mut total = Dual::constant(ctx.zero());
    let mut m = 0i64;
    // (Q; Q²)_m vanishes once 2j + 1 ≡ 0 mod ord(Q) for some j < m
    while (0..m).all(|j| (2 * j + 1) % order != 0) {
        let mut t = Dual::constant(one.clone());
        for j in 0..m {
            let qj = big_q(2 * j + 1);
            t = t.mul(&Dual::constant(&one - &qj));
            t = t.mul(&Dual { v: &one - &(&a0 * &qj), d: -qj });
        }
        let aq = Dual { v: &a0 * &big_q(1), d: big_q(1) };
        for _ in 0..m {
            t = t.mul(&aq);
        }
        for j in 0..(2 * m + 1) {
            let qj = big_q(1 + j);
            let f = Dual { v: &one + &(&a0 * &qj), d: qj };
            if f.v.abs_f64() < 1e-30 {
                return Err(Error::RouteUnavailable("hypergeometric denominator vanishes".into()));
            }
            t = t.div(&f);
        }
        total = total.add(&t);
        m += 1;
        if m > 100_000 {
            return Err(Error::RouteUnavailable("hypergeometric series does not terminate".into()));
        }
    }
    let val = &total.v.scale_rat(&Rational::from((r, nn))) + &(&a0 * &total.d);
    Ok(&q_at(h * r * r, 2 * k * nn) * &val)
}

/// `Θ_{3/2}(2, 1)` at `p = e(hN/k)` of even order via the sum-of-tails identity,
/// rescaled to `Θ_{3/2}(N, N/2)` at `e(h/k)`.
fn sum_of_tails_half(n: u32, p: &RationalPoint, ctx: &PrecisionContext) -> Result<Cx> {
    let nn = n as i64;
    let m = order_of(p.h * nn, p.k);
    if m % 2 == 1 {
        return Err(Error::RouteUnavailable(format!("e({}/{}) has odd order", p.h * nn, p.k)));
    }
    let pw = |j: i64| ctx.e(&ctx.rat(&Rational::from((p.h * nn * j, p.k))));
    let one = ctx.one();
    let mut s = ctx.zero();
    for t in 0..m {
        let mut pt = one.clone();
        for j in 1..=t {
            pt = &pt * &(&one - &pw(2 * j));
        }
        for j in 0..=t {
            pt = &pt / &(&one - &pw(2 * j + 1));
        }
        s = &s - &pt;
    }
    Ok(&ctx.e(&ctx.rat(&Rational::from((p.h * nn, 8 * p.k)))) * &s)
}

/// `Σ_{n≥0} n q^{Nn²/2}` at `e(h/k)` from the odd-order evaluation of
/// `4Σ(−1)^n n p^{n²}` with `p = −e(hN/2k)`.
fn sum_of_tails_zero(n: u32, p: &RationalPoint, ctx: &PrecisionContext) -> Result<Cx> {
    let x = Rational::from((p.h * n as i64, 2 * p.k)) + Rational::from((1, 2));
    let m = x.denom().to_i64().unwrap();
    if m % 2 == 0 {
        return Err(Error::RouteUnavailable(format!("-e({}/{}) has even order", p.h * n as i64, 2 * p.k)));
    }
    let num = x.numer().to_i64().unwrap();
    let pw = |j: i64| ctx.e(&ctx.rat(&Rational::from((num * j, m))));
    let one = ctx.one();
    let mut s = ctx.zero();
    let mut pt = one.clone();
    for t in 0..m {
        if t > 0 {
            let pj = pw(t);
            pt = &(&pt * &(&one - &pj)) / &(&one + &pj);
        }
        s = &s + &pt;
    }
    Ok(s.scale_rat(&Rational::from((-1, 4))))
}

/// Finite value of `Θ_{3/2}(N, r) = Σ_{n≥0} (n + r/N) q^{N(n + r/N)²/2}` at `q = e(h/k)`.
pub fn partial_theta_at_root(n: u32, r: i64, p: &RationalPoint, ctx: &PrecisionContext) -> Result<Cx> {
    if !quantum_member(n, r, p)? {
        return Err(Error::RouteUnavailable(format!("{p} is not in the quantum set for N = {n}, r = {r}")));
    }
    let nn = n as i64;
    let rr = r.rem_euclid(nn);
    // Θ(N, r + N) = Θ(N, r) − (r/N) q^{r²/2N}
    let shift = |v: Cx| -> Cx {
        let mut v = v;
        let mut cur = rr;
        while cur < r {
            let c = ctx.e(&ctx.rat(&Rational::from((p.h * cur * cur, 2 * nn * p.k)))).scale_rat(&Rational::from((cur, nn)));
            v = &v - &c;
            cur += nn;
        }
        while cur > r {
            cur -= nn;
            let c = ctx.e(&ctx.rat(&Rational::from((p.h * cur * cur, 2 * nn * p.k)))).scale_rat(&Rational::from((cur, nn)));
            v = &v + &c;
        }
        v
    };
    let base = match branch(n, r)? {
        Branch::Generic => hypergeometric_value(n, rr, p, ctx)?,
        Branch::Half => sum_of_tails_half(n, p, ctx)?,
        Branch::Zero => sum_of_tails_zero(n, p, ctx)?,
    };
    Ok(shift(base))
}

/// Richardson extrapolation of `upper_side` to `t → 0⁺` on `t_0/2^j`.
pub fn numeric_limit(n: u32, r: i64, p: &RationalPoint, t0: f64, levels: usize, ctx: &PrecisionContext) -> Result<Cx> {
    let mut table: Vec<Vec<Cx>> = Vec::new();
    for j in 0..levels {
        let t = Float::with_val(ctx.prec(), t0) / Float::with_val(ctx.prec(), Float::i_exp(1, j as i32));
        let mut row = vec![upper_side(n, r, &near_point(p, &t, 1, ctx), ctx)?];
        for i in 1..=j {
            let f = Float::with_val(ctx.prec(), Float::i_exp(1, i as i32));
            let num = &row[i - 1].scale(&f) - &table[j - 1][i - 1];
            row.push(num.scale(&(f - 1u32).recip()));
        }
        table.push(row);
    }
    Ok(table[levels - 1][levels - 1].clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct RootValue {
    pub n: u32,
    pub r: i64,
    pub point: RationalPoint,
    pub branch: Branch,
    /// `Θ(N, r) + Θ(N, N − r)` at `e(h/k)` from the finite formula
    pub finite: (f64, f64),
    /// `L(−1, γ_{N,r}) / N`
    pub leading: (f64, f64),
    /// extrapolated radial limit of the upper side
    pub limit: (f64, f64),
    pub max_discrepancy: f64,
}

/// The three evaluations of the upper side at `h/k` that must agree.
pub fn root_of_unity_value(n: u32, r: i64, p: &RationalPoint, ctx: &PrecisionContext) -> Result<RootValue> {
    let nn = n as i64;
    if !(0..nn).contains(&r) {
        return Err(Error::Invalid(format!("need 0 <= r < N, got r = {r}")));
    }
    let fin = &partial_theta_at_root(n, r, p, ctx)? + &partial_theta_at_root(n, nn - r, p, ctx)?;
    let a0 = asymptotic_coeffs(n, r, p, 1, ctx)?.remove(0);
    let lim = numeric_limit(n, r, p, 0.02, 8, ctx)?;
    let d = (&fin - &a0).abs_f64().max((&fin - &lim).abs_f64()).max((&a0 - &lim).abs_f64());
    Ok(RootValue {
        n,
        r,
        point: *p,
        branch: branch(n, r)?,
        finite: fin.to_f64_pair(),
        leading: a0.to_f64_pair(),
        limit: lim.to_f64_pair(),
        max_discrepancy: d,
    })
}

/// Exact q-series identities behind the finite evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExactIdentity {
    /// the hypergeometric–partial theta identity in two variables `A`, `q`
    Hypergeometric,
    /// `Σ_{n≥1} n q^{(n²+n)/2}` as a sum of tails, with Lambert part `Σ (−1)^{n+1} q^n/(1 − q^n)`
    SumOfTailsHalf,
    /// `4Σ_{n≥1} (−1)^n n q^{n²}` as a sum of tails
    SumOfTailsZero,
    /// `Σ_{n≥0} q^{(n+1/2)²/2} = η(2τ)²/η(τ)`
    EtaQuotientHalf,
    /// `Σ_{n≥0} (−1)^n q^{n²} = η(τ)²/(2η(2τ)) + 1/2`
    EtaQuotientZero,
}

impl ExactIdentity {
    pub const ALL: [ExactIdentity; 5] = [
        ExactIdentity::Hypergeometric,
        ExactIdentity::SumOfTailsHalf,
        ExactIdentity::SumOfTailsZero,
        ExactIdentity::EtaQuotientHalf,
        ExactIdentity::EtaQuotientZero,
    ];
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

type APoly = Vec<QSeries>;

fn apoly_mul(a: &APoly, b: &APoly, deg: usize, order: &Rational) -> Result<APoly> {
    let mut out = vec![QSeries::zero(Some(order.clone())); deg + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= deg && !x.is_zero() && !y.is_zero() {
                out[i + j] = out[i + j].try_add(&x.try_mul(y)?)?;
            }
        }
    }
    Ok(out)
}

fn mono(c: i64, e: i64, order: &Rational) -> QSeries {
    QSeries::monomial(Rational::from(c), &Rational::from(e), Some(order.clone()))
}

fn hypergeometric_residual(order: &Rational, deg: usize) -> Result<Vec<QSeries>> {
    let zero = QSeries::zero(Some(order.clone()));
    let mut lhs: APoly = vec![zero.clone(); deg + 1];
    for m in 0..=deg as i64 {
        let mut t: APoly = vec![zero.clone(); deg + 1];
        t[m as usize] = qpoch(&r(1, 1), &r(1, 1), &r(2, 1), Some(m as usize), order).try_mul(&mono(1, m, order))?;
        for j in 0..m {
            let mut f: APoly = vec![zero.clone(); deg + 1];
            f[0] = mono(1, 0, order);
            f[1] = mono(-1, 2 * j + 1, order);
            t = apoly_mul(&t, &f, deg, order)?;
        }
        for j in 0..(2 * m + 1) {
            let f: APoly = (0..=deg as i64).map(|i| mono(if i % 2 == 0 { 1 } else { -1 }, i * (1 + j), order)).collect();
            t = apoly_mul(&t, &f, deg, order)?;
        }
        for i in 0..=deg {
            lhs[i] = lhs[i].try_add(&t[i])?;
        }
    }
    (0..=deg as i64)
        .map(|m| lhs[m as usize].try_sub(&mono(if m % 2 == 0 { 1 } else { -1 }, m * (m + 1), order)).map_err(Error::from))
        .collect()
}

fn sum_of_tails_half_residual(order: &Rational) -> Result<QSeries> {
    let o = Some(order.clone());
    let lhs = QSeries::from_terms((1..).map(|n: i64| (r(n * n + n, 2), Rational::from(n))).take_while(|(e, _)| e < order), o.clone());
    let inf = qpoch(&r(1, 1), &r(2, 1), &r(2, 1), None, order).try_mul(&qpoch(&r(1, 1), &r(1, 1), &r(2, 1), None, order).try_inv()?)?;
    let mut lambert = QSeries::zero(o.clone());
    for n in 1..=order.to_f64().ceil() as i64 {
        let geo = QSeries::from_terms((1..).map(|j: i64| (Rational::from(n * j), Rational::from(if n % 2 == 0 { -1 } else { 1 }))).take_while(|(e, _)| e < order), o.clone());
        lambert = lambert.try_add(&geo)?;
    }
    let mut rhs = inf.try_mul(&lambert)?;
    for n in 0..=(order.to_f64().ceil() as usize) {
        let pn = qpoch(&r(1, 1), &r(2, 1), &r(2, 1), Some(n), order).try_mul(&qpoch(&r(1, 1), &r(1, 1), &r(2, 1), Some(n + 1), order).try_inv()?)?;
        rhs = rhs.try_add(&inf.try_sub(&pn)?)?;
    }
    Ok(lhs.try_sub(&rhs)?)
}

fn sum_of_tails_zero_residual(order: &Rational) -> Result<QSeries> {
    let o = Some(order.clone());
    let lhs = QSeries::from_terms((1..).map(|n: i64| (Rational::from(n * n), Rational::from(4 * n * if n % 2 == 0 { 1 } else { -1 }))).take_while(|(e, _)| e < order), o.clone());
    let ratio = |n: Option<usize>| -> Result<QSeries> {
        Ok(qpoch(&r(1, 1), &r(1, 1), &r(1, 1), n, order).try_mul(&qpoch(&r(-1, 1), &r(1, 1), &r(1, 1), n, order).try_inv()?)?)
    };
    let inf = ratio(None)?;
    let mut lambert = QSeries::zero(o.clone());
    for n in 1..=order.to_f64().ceil() as i64 {
        let geo = QSeries::from_terms((0..).map(|j: i64| (Rational::from(n + 2 * n * j), Rational::from(1))).take_while(|(e, _)| e < order), o.clone());
        lambert = lambert.try_add(&geo)?;
    }
    let mut rhs = inf.try_mul(&lambert)?.scale(&r(-2, 1));
    for n in 0..=(order.to_f64().ceil() as usize) {
        rhs = rhs.try_add(&inf.try_sub(&ratio(Some(n))?)?)?;
    }
    Ok(lhs.try_sub(&rhs)?)
}

/// `η(τ)^a η(2τ)^b`.
fn eta_quotient(a: i64, b: i64, order: &Rational) -> Result<QSeries> {
    let lead = r(a + 2 * b, 24);
    let rel = Rational::from(order - &lead) + 1;
    let x = eta_power(a, &rel);
    let y = eta_power(b, &Rational::from(&rel / 2)).rescale(&r(2, 1));
    Ok(x.try_mul(&y)?.truncate(order))
}

/// Residual series of an identity: all entries vanish below `order` when it holds.
/// The two-variable identity is returned coefficient-wise in `A` up to `A^{deg}`.
pub fn identity_residual(id: ExactIdentity, order: &Rational, deg: usize) -> Result<Vec<QSeries>> {
    let o = Some(order.clone());
    Ok(match id {
        ExactIdentity::Hypergeometric => hypergeometric_residual(order, deg)?,
        ExactIdentity::SumOfTailsHalf => vec![sum_of_tails_half_residual(order)?],
        ExactIdentity::SumOfTailsZero => vec![sum_of_tails_zero_residual(order)?],
        ExactIdentity::EtaQuotientHalf => {
            let lhs = QSeries::from_terms((0..).map(|n: i64| (r((2 * n + 1) * (2 * n + 1), 8), Rational::from(1))).take_while(|(e, _)| e < order), o);
            vec![lhs.try_sub(&eta_quotient(-1, 2, order)?)?]
        }
        ExactIdentity::EtaQuotientZero => {
            let lhs = QSeries::from_terms((0..).map(|n: i64| (Rational::from(n * n), Rational::from(if n % 2 == 0 { 1 } else { -1 }))).take_while(|(e, _)| e < order), o.clone());
            let rhs = eta_quotient(2, -1, order)?.scale(&r(1, 2)).try_add(&QSeries::constant(r(1, 2), o))?;
            vec![lhs.try_sub(&rhs)?]
        }
    })
}

pub fn identity_holds(id: ExactIdentity, order: &Rational, deg: usize) -> Result<bool> {
    Ok(identity_residual(id, order, deg)?.iter().all(|s| s.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(h: i64, k: i64) -> RationalPoint {
        RationalPoint::new(h, k).unwrap()
    }

    #[test]
    fn quantum_set_examples() {
        assert!(quantum_member(2, 1, &pt(1, 4)).unwrap());
        assert!(!quantum_member(2, 1, &pt(1, 2)).unwrap());
        assert!(quantum_member(2, 0, &pt(1, 2)).unwrap());
        assert!(!quantum_member(2, 0, &pt(1, 4)).unwrap());
        assert!(quantum_member(4, 1, &pt(1, 2)).unwrap());
        assert!(quantum_member(3, 1, &pt(1, 2)).is_err());
    }

    #[test]
    fn gauss_examples() {
        let ctx = PrecisionContext::new(128);
        assert!(gauss_sum(1, 0, 2, &ctx).unwrap().abs_f64() < 1e-35);
        assert!(gauss_sum(1, 1, 4, &ctx).unwrap().abs_f64() < 1e-35);
        assert_eq!(gauss_vanishing(1, 1, 4), GaussClause::Case2);
        assert!((gauss_sum(1, 0, 1, &ctx).unwrap().re.to_f64() - 1.0).abs() < 1e-35);
        let t = GaussTable::new(12);
        assert!(t.abs(1, 1) < 1e-25);
        assert!((t.abs(1, 0) - gauss_sum(1, 0, 12, &ctx).unwrap().abs_f64()).abs() < 1e-12);
    }

    #[test]
    fn l_values_of_alternating_sequence() {
        let chi = [Rational::from(1), Rational::from(-1)];
        // period 2 with χ(1) = 1, χ(2) = −1 stored as [χ(0), χ(1)]
        let chi = [chi[1].clone(), chi[0].clone()];
        assert_eq!(l_value_exact(1, &chi).unwrap(), q(1, 4));
        assert_eq!(l_value_abel_exact(1, &chi).unwrap(), q(1, 4));
        assert_eq!(l_value_exact(0, &chi).unwrap(), q(1, 2));
        assert_eq!(l_value_abel_exact(0, &chi).unwrap(), q(1, 2));
        let ctx = PrecisionContext::new(128);
        let seq = PeriodicSeq::new(vec![ctx.rat(&Rational::from(-1)), ctx.one()]);
        let a = l_value(1, &seq, &ctx).unwrap();
        let b = l_value_abel(1, &seq, &ctx).unwrap();
        assert!((a.re.to_f64() - 0.25).abs() < 1e-30);
        assert!((&a - &b).abs_f64() < 1e-25);
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn gamma_sequence_is_mean_zero_and_even() {
        let ctx = PrecisionContext::new(128);
        for (n, r, h, k) in [(2, 1, 1, 4), (2, 0, 1, 2), (4, 1, 1, 2)] {
            let g = gamma_seq(n, r, &pt(h, k), &ctx).unwrap();
            assert_eq!(g.period(), (2 * k * n as i64) as usize);
            assert_eq!(g.parity, Parity::Even);
            assert!(g.mean_value().abs_f64() < 1e-30);
            for m in 1..4 {
                assert!(l_value(2 * m, &g, &ctx).unwrap().abs_f64() < 1e-30);
            }
        }
        let g = gamma_seq(2, 0, &pt(1, 2), &ctx).unwrap();
        assert!((g.values[0].re.to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn exact_identities_low_order() {
        let o = Rational::from(12);
        for id in ExactIdentity::ALL {
            assert!(identity_holds(id, &o, 4).unwrap(), "{id:?}");
        }
    }

    #[test]
    fn finite_values_agree_with_leading_coefficient() {
        let ctx = PrecisionContext::new(128);
        for (n, r, h, k) in [(2, 1, 1, 4), (2, 0, 1, 2), (4, 1, 1, 2), (6, 1, 1, 3), (6, 3, 5, 4), (4, 0, 1, 4)] {
            let p = pt(h, k);
            let nn = n as i64;
            let fin = &partial_theta_at_root(n, r, &p, &ctx).unwrap() + &partial_theta_at_root(n, nn - r, &p, &ctx).unwrap();
            let a0 = asymptotic_coeffs(n, r, &p, 1, &ctx).unwrap().remove(0);
            assert!((&fin - &a0).abs_f64() < 1e-30, "{n} {r} {p}");
        }
        assert!(matches!(partial_theta_at_root(2, 1, &pt(1, 2), &ctx), Err(Error::RouteUnavailable(_))));
    }

    #[test]
    fn g_partial_at_zero_shift_is_an_eta_quotient() {
        use crate::numeric::eval::eta;
        let ctx = PrecisionContext::new(128);
        let tau = ctx.c(0.1, 0.7);
        let g = g_partial(0, 1, &tau, &ctx).unwrap();
        let e1 = eta(&tau, &ctx).unwrap();
        let e2 = eta(&tau.scale_i64(2), &ctx).unwrap();
        let want = &(&(&e1 * &e1) / &e2.scale_i64(2)) + &ctx.rat(&q(1, 2));
        assert!((&g - &want).abs_f64() < 1e-30);
        assert!(for_quantum_member(1, 4, &pt(2, 5)).unwrap());
        assert!(!for_quantum_member(1, 4, &pt(4, 5)).unwrap());
    }

    #[test]
    fn incomplete_gamma_asymptotics() {
        let ctx = PrecisionContext::new(128);
        let x = Float::with_val(ctx.prec(), 200);
        let g = upper_gamma_minus_half(&x, &ctx);
        let lead = Float::with_val(ctx.prec(), Float::with_val(ctx.prec(), -&x).exp() / x.clone().sqrt()) * 2u32;
        let ratio = Float::with_val(ctx.prec(), &g / &lead).to_f64();
        // Γ(−1/2; x) ~ e^{−x} x^{−3/2}, and 2e^{−x}/√x − 2√π erfc(√x) ≈ e^{−x}x^{−3/2}
        assert!((ratio * 2.0 * 200.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn eichler_series_matches_quadrature() {
        let ctx = PrecisionContext::new(64);
        let tau = ctx.c(0.3, -0.8);
        for r in [1, 0] {
            let a = eichler_star(4, r, &tau, &ctx).unwrap();
            let b = eichler_star_quadrature(4, r, &tau, &ctx).unwrap();
            assert!((&a - &b).abs_f64() < 1e-15, "{r}: {a} vs {b}");
        }
    }

    #[test]
    fn cocycle_law() {
        let ctx = PrecisionContext::new(64);
        let tau = ctx.c(0.3, -0.8);
        let g = Gamma::new(1, 0, 8, 1).unwrap();
        let (l, r) = cocycle_residual(4, 1, &g, &tau, &ctx).unwrap();
        assert!((&l - &r).abs_f64() < 1e-15, "{l} vs {r}");
    }
}

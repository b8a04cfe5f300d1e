//! Double-exponential quadrature on finite and half-infinite intervals.

use super::{Cx, PrecisionContext};
use crate::error::{Error, Result};
use rug::Float;

fn t_max(ctx: &PrecisionContext) -> f64 {
    let need = ctx.bits as f64 * std::f64::consts::LN_2 + 20.0;
    (need / std::f64::consts::FRAC_PI_2).asinh() + 0.25
}

fn fl(ctx: &PrecisionContext, x: f64) -> Float {
    Float::with_val(ctx.prec(), x)
}

/// One tanh-sinh pass with step `h` on `[a, b]`.
fn tanh_sinh_pass<F>(f: &F, a: &Float, b: &Float, h: f64, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Float) -> Result<Cx>,
{
    let p = ctx.prec();
    let half_pi = Float::with_val(p, ctx.pi() / 2u32);
    let len = Float::with_val(p, b - a);
    let tm = t_max(ctx);
    let n = (tm / h).ceil() as i64;
    let mut acc = ctx.zero();
    for k in -n..=n {
        let t = fl(ctx, k as f64 * h);
        let u = Float::with_val(p, &half_pi * t.clone().sinh());
        // (1 + tanh u)/2 = 1/(1 + e^{−2u})
        let e = Float::with_val(p, Float::with_val(p, -2 * u.clone()).exp());
        let frac = Float::with_val(p, 1u32 / Float::with_val(p, 1u32 + &e));
        let x = Float::with_val(p, a + Float::with_val(p, &len * &frac));
        if x <= *a || x >= *b {
            continue;
        }
        let ch = Float::with_val(p, u.clone().cosh());
        let w = Float::with_val(p, &half_pi * t.cosh()) / Float::with_val(p, &ch * &ch);
        let w = Float::with_val(p, w * &len) / 2u32;
        let v = f(&x)?;
        acc = &acc + &v.scale(&w);
    }
    Ok(acc.scale(&fl(ctx, h)))
}

/// `∫_a^b f` by tanh-sinh, halving the step until two passes agree.
pub fn tanh_sinh<F>(f: F, a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Float) -> Result<Cx>,
{
    let mut h = 0.5;
    let mut prev = tanh_sinh_pass(&f, a, b, h, ctx)?;
    for _ in 0..10 {
        h /= 2.0;
        let next = tanh_sinh_pass(&f, a, b, h, ctx)?;
        if (&next - &prev).abs_f64() <= ctx.tol() * next.abs_f64().max(1e-30) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numeric("NonConvergent: tanh-sinh quadrature".into()))
}

fn exp_sinh_pass<F>(f: &F, a: &Float, h: f64, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Float) -> Result<Cx>,
{
    let p = ctx.prec();
    let half_pi = Float::with_val(p, ctx.pi() / 2u32);
    let tm = t_max(ctx);
    let n = (tm / h).ceil() as i64;
    let mut acc = ctx.zero();
    for k in -n..=n {
        let t = fl(ctx, k as f64 * h);
        let g = Float::with_val(p, Float::with_val(p, &half_pi * t.clone().sinh()).exp());
        let x = Float::with_val(p, a + &g);
        if x <= *a || !x.is_finite() {
            continue;
        }
        let w = Float::with_val(p, &half_pi * t.cosh()) * &g;
        let v = f(&x)?;
        let term = v.scale(&w);
        if !term.is_finite() {
            continue;
        }
        acc = &acc + &term;
    }
    Ok(acc.scale(&fl(ctx, h)))
}

/// `∫_a^∞ f` by exp-sinh, halving the step until two passes agree.
pub fn exp_sinh<F>(f: F, a: &Float, ctx: &PrecisionContext) -> Result<Cx>
where
    F: Fn(&Float) -> Result<Cx>,
{
    let mut h = 0.5;
    let mut prev = exp_sinh_pass(&f, a, h, ctx)?;
    for _ in 0..10 {
        h /= 2.0;
        let next = exp_sinh_pass(&f, a, h, ctx)?;
        if (&next - &prev).abs_f64() <= ctx.tol() * next.abs_f64().max(1e-30) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numeric("NonConvergent: exp-sinh quadrature".into()))
}

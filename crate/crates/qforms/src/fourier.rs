//! Fourier coefficients of `φ_{2M,N+2M}` as mixed partial theta functions,
//! taken in the chamber `0 ≤ Im z < Im τ`.

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::jacobi::phi_laurent;
use crate::phased::Phased;
use crate::series::QSeries;
use crate::theta::{theta_series, ThetaSpec, Variant};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// `φ_{2M,N+2M}` at `ζ^r`, known below `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSpec {
    /// `M`: the numerator is `ϑ(z+1/2)^{2M}`.
    pub half_power: u32,
    pub n: u32,
    pub r: Rational,
    pub order: Rational,
}

impl CoefficientSpec {
    pub fn new(half_power: u32, n: u32, r: Rational, order: Rational) -> Self {
        CoefficientSpec { half_power, n, r, order }
    }
}

/// One summand `prefactor · D_q^j Θ`.
#[derive(Clone, Debug)]
pub struct MixedTerm {
    pub prefactor: Phased,
    pub derivative_order: u32,
    pub theta_part: QSeries,
}

/// 1 if `N` is even, else 0.
pub fn delta_e(n: u32) -> u32 {
    n.is_multiple_of(2) as u32
}

/// `r` if `r ≥ N/2`, else `N − r`; `r` must lie in `N/2 + Z`.
pub fn rho_fold(n: u32, r: &Rational) -> Result<Rational> {
    let half = Rational::from((n as i64, 2));
    if *Rational::from(r - &half).denom() != 1 {
        return Err(Error::NotInCoset(r.to_string()));
    }
    Ok(if *r >= half { r.clone() } else { Rational::from(n as i64) - r })
}

fn decompose_at(spec: &CoefficientSpec, work: &Rational) -> Result<Vec<MixedTerm>> {
    let n = spec.n;
    let m = spec.half_power;
    let d = delta_e(n);
    let top = (n - 1 - d) / 2 + m;
    let rho = rho_fold(n, &spec.r)?;
    let lau = phi_laurent(2 * m, n + 2 * m, top as usize, work)?;
    let theta = theta_series(&ThetaSpec::new(n, rho, d as u8, Variant::Partial), work)?;
    let shift = (-Rational::from(&spec.r * &spec.r)) / (2 * n as i64);
    let sign: i64 = if d == 1 { 1 } else { -1 };
    let mut out = Vec::with_capacity(top as usize + 1);
    let mut dth = theta;
    for j in 0..=top {
        let k = (2 * j + d + 1) as i64;
        let c = Integer::from(n).pow(j + d) * Integer::from(1u32 << j) * sign;
        let c = Rational::from((c, factorial(2 * j + d)));
        let prefactor = lau.d(k).scale(&c).shift(&shift);
        out.push(MixedTerm { prefactor, derivative_order: j, theta_part: dth.clone() });
        dth = dth.dq();
    }
    Ok(out)
}

fn sum_terms(terms: &[MixedTerm]) -> Result<Phased> {
    let mut acc: Option<Phased> = None;
    for t in terms {
        let v = t.prefactor.mul(&Phased::real(t.theta_part.clone()))?;
        acc = Some(match acc {
            None => v,
            Some(a) => a.add(&v)?,
        });
    }
    acc.ok_or_else(|| Error::Invalid("empty decomposition".into()))
}

fn validate(spec: &CoefficientSpec) -> Result<()> {
    if spec.n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    rho_fold(spec.n, &spec.r).map(|_| ())
}

/// Decomposition and its sum, with the working order raised until the sum is
/// certified up to `spec.order`.
fn solve(spec: &CoefficientSpec) -> Result<(Vec<MixedTerm>, Phased)> {
    validate(spec)?;
    let n = spec.n as i64;
    let mut work = (&spec.order + Rational::from(&spec.r * &spec.r) / (2 * n))
        + Rational::from((n + 2 * spec.half_power as i64, 8))
        + 1u32;
    for _ in 0..4 {
        let terms = decompose_at(spec, &work)?;
        let total = sum_terms(&terms)?;
        let t = total.series.trunc().clone().expect("truncated");
        if t >= spec.order {
            return Ok((terms, total.truncate(&spec.order)));
        }
        work += Rational::from(&spec.order - &t) + 1u32;
    }
    Err(Error::Numeric("could not reach the requested order".into()))
}

/// `χ(2M, N+2M, r; τ)` as an exact phased series below `spec.order`.
pub fn chi_coefficient(spec: &CoefficientSpec) -> Result<Phased> {
    Ok(solve(spec)?.1)
}

/// The summands whose total is [`chi_coefficient`].
pub fn mixed_decomposition(spec: &CoefficientSpec) -> Result<Vec<MixedTerm>> {
    Ok(solve(spec)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{lattice_coefficient, n1_coefficient, TrConvention};
    use crate::q;

    #[test]
    fn fold_and_delta() {
        assert_eq!(delta_e(3), 0);
        assert_eq!(delta_e(4), 1);
        assert_eq!(rho_fold(2, &q(1, 1)).unwrap(), 1);
        assert_eq!(rho_fold(3, &q(1, 2)).unwrap(), q(5, 2));
        assert!(matches!(rho_fold(3, &q(1, 1)), Err(Error::NotInCoset(_))));
    }

    #[test]
    fn matches_closed_form_for_n1() {
        let o = Rational::from(12);
        for r2 in [-3i64, -1, 1, 3, 5] {
            let r = q(r2, 2);
            let a = chi_coefficient(&CoefficientSpec::new(0, 1, r.clone(), o.clone())).unwrap();
            let b = n1_coefficient(&r, &o).unwrap();
            assert!(a.agrees_with(&b), "r = {r}");
        }
    }

    #[test]
    fn matches_lattice_form() {
        let o = Rational::from(8);
        for n in 2..5u32 {
            for k in -2..(n as i64 + 3) {
                let r = Rational::from(k) + Rational::from((n as i64 % 2, 2));
                let a = chi_coefficient(&CoefficientSpec::new(0, n, r.clone(), o.clone())).unwrap();
                let (b, _) = lattice_coefficient(n, &r, &o, TrConvention::Verified).unwrap();
                assert!(a.agrees_with(&b), "N = {n}, r = {r}");
            }
        }
    }

    #[test]
    fn term_counts() {
        let o = Rational::from(6);
        let t = mixed_decomposition(&CoefficientSpec::new(0, 4, q(2, 1), o.clone())).unwrap();
        assert_eq!(t.len(), 2);
        let t = mixed_decomposition(&CoefficientSpec::new(0, 1, q(1, 2), o.clone())).unwrap();
        assert_eq!(t.len(), 1);
        let t = mixed_decomposition(&CoefficientSpec::new(2, 3, q(3, 2), o)).unwrap();
        assert_eq!(t.len(), (3 - 1) / 2 + 2 + 1);
    }
}

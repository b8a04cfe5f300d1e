//! Expansions in the elliptic variable.
//!
//! All series use `x = 2πi w`, where `w` is the distance to the expansion
//! center, so that `D_ζ = ∂_x` and Laurent coefficients are taken against
//! `(2πiz)^{-j}` without stray factors of `2πi`.

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::gens::{eisenstein, eta_power, euler_product};
use crate::linalg;
use crate::phased::Phased;
use crate::series::QSeries;
use rug::{Integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Center {
    Zero,
    MinusHalf,
}

/// `i^ipow · Σ_{k=low}^{low+len−1} c_k x^k + O(x^{low+len})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSeries {
    pub ipow: u8,
    pub low: i64,
    pub coeffs: Vec<QSeries>,
    pub center: Center,
}

impl ZSeries {
    pub fn new(k: i64, low: i64, coeffs: Vec<QSeries>, center: Center) -> Self {
        let k = k.rem_euclid(4) as u8;
        let coeffs = if k >= 2 { coeffs.iter().map(QSeries::neg).collect() } else { coeffs };
        ZSeries { ipow: k % 2, low, coeffs, center }
    }

    /// Exclusive bound on the known x-powers.
    pub fn x_trunc(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    /// Real coefficient of `x^k` (the phase is kept separately); zero below `low`.
    pub fn coeff(&self, k: i64) -> QSeries {
        assert!(k < self.x_trunc(), "x^{k} is beyond the x-truncation {}", self.x_trunc());
        if k < self.low {
            QSeries::zero(None)
        } else {
            self.coeffs[(k - self.low) as usize].clone()
        }
    }

    /// Coefficient of `x^k` with its phase.
    pub fn phased_coeff(&self, k: i64) -> Phased {
        Phased { ipow: self.ipow, series: self.coeff(k) }
    }

    /// 1 for odd support, 0 for even support, `None` when mixed.
    pub fn parity(&self) -> Option<u8> {
        let mut p: Option<u8> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = (self.low + i as i64).rem_euclid(2) as u8;
            match p {
                None => p = Some(q),
                Some(v) if v != q => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    pub fn scale(&self, c: &QSeries) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.try_mul(c)).collect::<std::result::Result<_, _>>()?;
        Ok(ZSeries { coeffs, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        ZSeries { coeffs: self.coeffs.iter().map(QSeries::neg).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let low = self.low + other.low;
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = QSeries::zero(None);
            for i in 0..=n {
                let (a, b) = (&self.coeffs[i], &other.coeffs[n - i]);
                if a.is_zero() && a.is_exact() || b.is_zero() && b.is_exact() {
                    continue;
                }
                acc = acc.try_add(&a.try_mul(b)?)?;
            }
            out.push(acc);
        }
        Ok(ZSeries::new((self.ipow + other.ipow) as i64, low, out, self.center))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ipow != other.ipow {
            return Err(Error::Invalid("adding x-series with different phases".into()));
        }
        let low = self.low.min(other.low);
        let hi = self.x_trunc().min(other.x_trunc());
        let mut out = Vec::new();
        for k in low..hi {
            out.push(self.coeff(k).try_add(&other.coeff(k))?);
        }
        Ok(ZSeries { ipow: self.ipow, low, coeffs: out, center: self.center })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplicative inverse; the lowest stored coefficient must be invertible.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeffs.first().ok_or_else(|| Error::Invalid("empty x-series".into()))?;
        let b0 = c0.try_inv()?;
        let len = self.coeffs.len();
        let mut b: Vec<QSeries> = vec![b0.clone()];
        for n in 1..len {
            let mut acc = QSeries::zero(None);
            for k in 1..=n {
                let c = &self.coeffs[k];
                if c.is_zero() && c.is_exact() {
                    continue;
                }
                acc = acc.try_add(&c.try_mul(&b[n - k])?)?;
            }
            b.push(acc.try_mul(&b0)?.neg());
        }
        Ok(ZSeries::new(-(self.ipow as i64), -self.low, b, self.center))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let len = self.coeffs.len();
        let mut acc = ZSeries { ipow: 0, low: 0, coeffs: one_coeffs(len), center: self.center };
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `exp` of a series without constant term (phase must be real).
    pub fn exp(&self) -> Result<Self> {
        if self.ipow != 0 || self.low < 1 && (self.low..1).any(|k| !self.coeff(k).is_zero()) {
            return Err(Error::Invalid("exp needs a real series vanishing at x = 0".into()));
        }
        let len = self.x_trunc().max(1) as usize;
        let a: Vec<QSeries> = (0..len as i64).map(|k| if k < self.low { QSeries::zero(None) } else { self.coeff(k) }).collect();
        // n e_n = Σ_{k=1}^n k a_k e_{n−k}
        let mut e: Vec<QSeries> = vec![QSeries::one(None)];
        for n in 1..len {
            let mut acc = QSeries::zero(None);
            for k in 1..=n {
                if a[k].is_zero() && a[k].is_exact() {
                    continue;
                }
                acc = acc.try_add(&a[k].try_mul(&e[n - k])?.scale(&Rational::from(k as u64)))?;
            }
            e.push(acc.scale(&Rational::from((1, n as i64))));
        }
        Ok(ZSeries { ipow: 0, low: 0, coeffs: e, center: self.center })
    }

    /// `D_q` applied to every coefficient.
    pub fn dq(&self) -> Self {
        ZSeries { coeffs: self.coeffs.iter().map(QSeries::dq).collect(), ..self.clone() }
    }

    /// `∂_x`.
    pub fn dx(&self) -> Self {
        let mut out = Vec::new();
        let mut low = self.low - 1;
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            out.push(c.scale(&Rational::from(k)));
        }
        if self.low == 0 && !out.is_empty() {
            out.remove(0);
            low = 0;
        }
        ZSeries { low, coeffs: out, ..self.clone() }
    }

    /// Heat operator `2N D_q + ∂_x²`.
    pub fn heat(&self, n: u32) -> Self {
        let two_n = Rational::from(2 * n as u64);
        let d2 = self.dx().dx();
        let lo = self.low.min(d2.low);
        let hi = self.x_trunc().min(d2.x_trunc());
        let coeffs = (lo..hi)
            .map(|k| {
                let a = if k < self.low { QSeries::zero(None) } else { self.coeff(k).dq().scale(&two_n) };
                let b = if k < d2.low { QSeries::zero(None) } else { d2.coeff(k) };
                a.try_add(&b).expect("grid")
            })
            .collect();
        ZSeries { low: lo, coeffs, ..self.clone() }
    }
}

fn one_coeffs(len: usize) -> Vec<QSeries> {
    (0..len).map(|k| if k == 0 { QSeries::one(None) } else { QSeries::zero(None) }).collect()
}

/// `H(ζ^r q^m) = (2Nm + r²) ζ^r q^m`: the eigenvalue on a monomial.
pub fn heat_monomial(n: u32, r: &Rational, m: &Rational) -> Rational {
    Rational::from(2 * n as u64) * m + Rational::from(r * r)
}

/// Expansion of `ϑ(z)` about 0 (`Center::Zero`) or of `ϑ(w + 1/2)` about `w = 0`
/// (`Center::MinusHalf`), known for x-powers below `x_order`.
pub fn theta_z_expansion(center: Center, x_order: usize, q_order: &Rational) -> Result<ZSeries> {
    match center {
        Center::Zero => {
            // ix η³ exp(−2 Σ G_{2k} x^{2k}/(2k)!)
            let len = x_order.saturating_sub(1).max(1);
            let mut a = vec![QSeries::zero(None); len];
            let mut k = 1u32;
            while ((2 * k) as usize) < len {
                let g = eisenstein(2 * k, q_order)?;
                let f = Rational::from((Integer::from(-2), factorial(2 * k)));
                a[2 * k as usize] = g.scale(&f);
                k += 1;
            }
            let e = ZSeries { ipow: 0, low: 0, coeffs: a, center }.exp()?;
            let e = e.scale(&eta_power(3, q_order))?;
            Ok(ZSeries { ipow: 1, low: 1, coeffs: e.coeffs, center })
        }
        Center::MinusHalf => {
            // −2cosh(x/2) q^{1/8} (q)_∞ Π_{j≥1} (1 + 2cosh(x) q^j + q^{2j})
            let len = x_order.max(1);
            let t = Some(q_order.clone());
            let mut p = ZSeries { ipow: 0, low: 0, coeffs: one_coeffs(len), center };
            let mut j = 1i64;
            while Rational::from(j) < *q_order {
                let mut f = vec![QSeries::zero(None); len];
                let jq = Rational::from(j);
                f[0] = QSeries::from_terms(
                    vec![(Rational::new(), Rational::from(1)), (jq.clone(), Rational::from(2)), (Rational::from(2 * j), Rational::from(1))],
                    t.clone(),
                );
                for k in (2..len).step_by(2) {
                    f[k] = QSeries::monomial(Rational::from((Integer::from(2), factorial(k as u32))), &jq, t.clone());
                }
                p = p.mul(&ZSeries { ipow: 0, low: 0, coeffs: f, center })?;
                j += 1;
            }
            let ch: Vec<QSeries> = (0..len)
                .map(|k| {
                    if k % 2 == 1 {
                        QSeries::zero(None)
                    } else {
                        // 2 (1/2)^k / k!
                        let c = Rational::from((Integer::from(2), factorial(k as u32) << k as u32));
                        QSeries::constant(-c, None)
                    }
                })
                .collect();
            p = p.mul(&ZSeries { ipow: 0, low: 0, coeffs: ch, center })?;
            let lead = euler_product(q_order).shift(&Rational::from((1, 8)));
            p.scale(&lead)
        }
    }
}

/// Laurent coefficients of `φ_{M,N} = Σ_j D_j x^{−j}` about `z = 0`.
#[derive(Clone, Debug)]
pub struct Laurent {
    pub m: u32,
    pub n: u32,
    pub series: ZSeries,
}

impl Laurent {
    /// `D_j`, the coefficient of `x^{−j}`, with its phase.
    pub fn d(&self, j: i64) -> Phased {
        self.series.phased_coeff(-j)
    }
}

/// `φ_{M,N}` about 0 with `D_N, …, D_{N−2·count}` known.
pub fn phi_laurent(m: u32, n: u32, count: usize, q_order: &Rational) -> Result<Laurent> {
    if n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    let x_order = 2 * count + 2;
    let th = theta_z_expansion(Center::Zero, x_order + 1, q_order)?;
    // drop the leading x so the unit part is invertible
    let unit = ZSeries { low: 0, ..th };
    let mut s = unit.pow(-(n as i64))?;
    s.low -= n as i64;
    if m > 0 {
        let sh = theta_z_expansion(Center::MinusHalf, x_order, q_order)?;
        s = s.mul(&ZSeries { center: Center::Zero, ..sh.pow(m as i64)? })?;
    }
    Ok(Laurent { m, n, series: s })
}

/// `φ_{M,N}` expanded about `z = −1/2` in `x = 2πi(z + 1/2)`.
pub fn phi_about_minus_half(m: u32, n: u32, x_order: usize, q_order: &Rational) -> Result<ZSeries> {
    // φ_{M,N}(w − 1/2) = (−1)^N ϑ(w)^M ϑ(w + 1/2)^{−N}
    let sh = theta_z_expansion(Center::MinusHalf, x_order, q_order)?;
    let mut s = sh.pow(-(n as i64))?;
    if n % 2 == 1 {
        s = s.neg();
    }
    if m > 0 {
        let th = theta_z_expansion(Center::Zero, x_order + 1, q_order)?;
        s = s.mul(&ZSeries { center: Center::MinusHalf, ..th.pow(m as i64)? })?;
    }
    Ok(s)
}

/// Higher-order Euler numbers `E^{(N)}_{2j} = (d/dv)^{2j} sec^N(v)|_0`, `j = 0..=j_max`.
pub fn euler_numbers(n: u32, j_max: usize) -> Vec<Integer> {
    let len = j_max + 1;
    // cos v = Σ (−1)^j v^{2j}/(2j)!, indexed by j
    let cos: Vec<Rational> = (0..len)
        .map(|j| {
            let s = if j % 2 == 0 { 1 } else { -1 };
            Rational::from((Integer::from(s), factorial(2 * j as u32)))
        })
        .collect();
    let mut sec = vec![Rational::from(1)];
    for k in 1..len {
        let mut acc = Rational::new();
        for i in 1..=k {
            acc += Rational::from(&cos[i] * &sec[k - i]);
        }
        sec.push(-acc);
    }
    let mut p = vec![Rational::new(); len];
    p[0] = Rational::from(1);
    for _ in 0..n {
        let mut out = vec![Rational::new(); len];
        for i in 0..len {
            for k in 0..len - i {
                out[i + k] += Rational::from(&p[i] * &sec[k]);
            }
        }
        p = out;
    }
    p.iter()
        .enumerate()
        .map(|(j, c)| {
            let v = Rational::from(c * factorial(2 * j as u32));
            assert_eq!(*v.denom(), 1);
            v.numer().clone()
        })
        .collect()
}

/// Exact determinant of an integer matrix by fraction-free elimination.
pub fn bareiss(mut a: Vec<Vec<Integer>>) -> Integer {
    let n = a.len();
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Integer::from(1);
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// `det(E^{(N)}_{2(j+k)})_{0 ≤ j,k < M}`; a zero value is an error.
pub fn hankel_nonvanishing(n: u32, m: usize) -> Result<Integer> {
    if m == 0 {
        return Ok(Integer::from(1));
    }
    let e = euler_numbers(n, 2 * m - 2);
    let a: Vec<Vec<Integer>> = (0..m).map(|j| (0..m).map(|k| e[j + k].clone()).collect()).collect();
    let d = bareiss(a);
    if d == 0 {
        return Err(Error::ZeroDeterminant);
    }
    Ok(d)
}

/// Solution of `φ_{2M,N+2M} = Σ_j f_j H^j φ_N`.
#[derive(Clone, Debug)]
pub struct HeatDecomposition {
    pub n: u32,
    pub m: u32,
    /// Kernel normalized with `f_M = 1`.
    pub normalized: Vec<QSeries>,
    /// Factor `c` with `φ_{2M,N+2M} = c Σ_j normalized_j H^j φ_N`.
    pub scale: QSeries,
    /// `c · normalized`: the coefficients for which the identity holds.
    pub f: Vec<QSeries>,
    /// Highest x-power about `z = −1/2` at which the identity was checked.
    pub residual_checked_through: i64,
    /// `det T` at the working truncation.
    pub det: QSeries,
}

/// Decompose `φ_{2M,N+2M}` over heat iterates of `φ_N` by matching Taylor
/// coefficients about `z = −1/2`.
pub fn heat_decomposition(n: u32, m: u32, q_order: &Rational) -> Result<HeatDecomposition> {
    if n == 0 || m == 0 {
        return Err(Error::Invalid("N and M must be positive".into()));
    }
    let check = 2 * m as i64 + 4;
    let x_order = (check + 2 * m as i64 + 1) as usize;
    let base = phi_about_minus_half(0, n, x_order, q_order)?;
    let mut iters = vec![base];
    for j in 0..m as usize {
        let h = iters[j].heat(n);
        iters.push(h);
    }
    let mk = m as usize;
    let t = |k: usize, j: usize| iters[j].coeff(2 * k as i64);
    let a: Vec<Vec<QSeries>> = (0..mk).map(|k| (0..mk).map(|j| t(k, j)).collect()).collect();
    let b: Vec<QSeries> = (0..mk).map(|k| t(k, mk).neg()).collect();
    let det = linalg::det(&a)?;
    let (mut f, _) = linalg::solve(&a, &b).map_err(|e| match e {
        Error::SingularSystem(s) => Error::SingularSystem(format!("Taylor matrix: {s}")),
        other => other,
    })?;
    f.push(QSeries::one(None));
    let mut sum: Option<ZSeries> = None;
    for (j, fj) in f.iter().enumerate() {
        let term = iters[j].scale(fj)?;
        sum = Some(match sum {
            None => term,
            Some(s) => s.add(&term)?,
        });
    }
    let sum = sum.unwrap();
    let target = phi_about_minus_half(2 * m, n + 2 * m, x_order, q_order)?;
    let lead = 2 * m as i64;
    let c = target.coeff(lead).try_mul(&sum.coeff(lead).try_inv()?)?;
    let scaled = sum.scale(&c)?;
    for k in 0..=check {
        let d = target.coeff(k).try_sub(&scaled.coeff(k))?;
        if !d.is_zero_to_trunc() {
            return Err(Error::ResidualNonzero(format!("x^{k} about z = -1/2 for (N, M) = ({n}, {m})")));
        }
    }
    let fs = f.iter().map(|x| x.try_mul(&c)).collect::<std::result::Result<_, _>>()?;
    Ok(HeatDecomposition { n, m, normalized: f, scale: c, f: fs, residual_checked_through: check, det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::eta_power;
    use crate::q;

    #[test]
    fn theta_about_zero() {
        let o = Rational::from(12);
        let t = theta_z_expansion(Center::Zero, 8, &o).unwrap();
        assert_eq!(t.ipow, 1);
        assert!(t.coeff(1).agrees_with(&eta_power(3, &o)));
        assert!(t.coeff(2).is_zero());
        assert_eq!(t.parity(), Some(1));
    }

    #[test]
    fn theta_about_minus_half_is_even() {
        let t = theta_z_expansion(Center::MinusHalf, 8, &Rational::from(10)).unwrap();
        assert_eq!(t.ipow, 0);
        assert_eq!(t.parity(), Some(0));
        // x^0: −2 q^{1/8} (1 + q + ...)
        assert_eq!(t.coeff(0).coeff(&q(1, 8)), -2);
    }

    #[test]
    fn laurent_leading_terms() {
        let o = Rational::from(20);
        let l = phi_laurent(0, 1, 3, &o).unwrap();
        let d1 = l.d(1);
        // −i η^{−3}
        assert!(d1.agrees_with(&Phased::new(3, eta_power(-3, &o))));
        for n in 1..5u32 {
            let l = phi_laurent(0, n, 2, &o).unwrap();
            assert!(l.d(n as i64).agrees_with(&Phased::new(-(n as i64), eta_power(-3 * n as i64, &o))));
        }
        let l = phi_laurent(2, 5, 4, &o).unwrap();
        for j in [4i64, 2, 0, -2] {
            assert!(l.d(j).is_zero());
        }
        assert!(!l.d(3).is_zero());
    }

    #[test]
    fn heat_on_monomials_and_constants() {
        assert_eq!(heat_monomial(2, &q(2, 1), &q(3, 1)), 16);
        let c = ZSeries { ipow: 0, low: 0, coeffs: vec![QSeries::constant(q(5, 1), None); 4], center: Center::Zero };
        let h = c.heat(3);
        // ∂_x² (5 + 5x + 5x² + 5x³) = 10 + 30x
        assert_eq!(h.coeff(0).coeff(&q(0, 1)), 10);
        assert_eq!(h.coeff(1).coeff(&q(0, 1)), 30);
    }

    #[test]
    fn euler_and_hankel() {
        let e1 = euler_numbers(1, 3);
        assert_eq!(e1, vec![Integer::from(1), Integer::from(1), Integer::from(5), Integer::from(61)]);
        for n in 1..9u32 {
            let e = euler_numbers(n, 3);
            assert_eq!(e[0], 1);
            assert_eq!(e[1], n);
        }
        assert_eq!(hankel_nonvanishing(1, 2).unwrap(), 4);
        for n in 1..9u32 {
            for m in 1..7usize {
                assert!(hankel_nonvanishing(n, m).is_ok());
            }
        }
    }

    #[test]
    fn heat_decomposition_small() {
        for (n, m) in [(1u32, 1u32), (2, 1), (1, 2)] {
            let h = heat_decomposition(n, m, &Rational::from(8)).unwrap();
            assert_eq!(h.f.len(), m as usize + 1);
            assert_eq!(*h.normalized.last().unwrap(), QSeries::one(None));
        }
    }
}

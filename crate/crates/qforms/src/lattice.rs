//! The root lattice `A_{N−1}`, the shifted cones `T_s` and the lattice form of
//! the Fourier coefficients of `1/ϑ^N`.

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::gens::eta_power;
use crate::phased::Phased;
use crate::series::QSeries;
use rug::{Integer, Rational};

/// `A_{N−1}` with its Cartan matrix and positive roots `α_i + … + α_j`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub n: usize,
    pub cartan: Vec<Vec<i64>>,
    /// `(i, j)` stands for `α_i + … + α_j` (0-based, inclusive).
    pub positive_roots: Vec<(usize, usize)>,
}

/// Coordinates over the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeVector {
    pub coeffs: Vec<Rational>,
}

impl RootSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("A_(N-1) needs N >= 2, got {n}")));
        }
        let r = n - 1;
        let cartan = (0..r)
            .map(|i| (0..r).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
            .collect();
        let positive_roots = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
        Ok(RootSystem { n, cartan, positive_roots })
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// `C a`: the pairings `(t | α_i)` with the simple roots.
    pub fn dual(&self, t: &LatticeVector) -> Vec<Rational> {
        self.cartan
            .iter()
            .map(|row| row.iter().zip(&t.coeffs).map(|(c, a)| Rational::from(a * *c)).sum())
            .collect()
    }

    pub fn pairing(&self, t: &LatticeVector, s: &LatticeVector) -> Result<Rational> {
        if t.coeffs.len() != self.rank() || s.coeffs.len() != self.rank() {
            return Err(Error::Invalid("dimension mismatch".into()));
        }
        Ok(self.dual(t).iter().zip(&s.coeffs).map(|(a, b)| Rational::from(a * b)).sum())
    }

    pub fn norm(&self, t: &LatticeVector) -> Result<Rational> {
        self.pairing(t, t)
    }

    /// `Π_{α>0} (t | α)`.
    pub fn root_product(&self, t: &LatticeVector) -> Rational {
        let d = self.dual(t);
        let mut p = Rational::from(1);
        for &(i, j) in &self.positive_roots {
            let s: Rational = d[i..=j].iter().sum();
            p *= s;
            if p == 0 {
                break;
            }
        }
        p
    }

    /// Smallest Cartan eigenvalue `4 sin²(π/2N)`.
    pub fn min_eigenvalue(&self) -> f64 {
        let s = (std::f64::consts::PI / (2.0 * self.n as f64)).sin();
        4.0 * s * s
    }
}

/// Reading of the cone condition and sign prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TrConvention {
    /// `s ≤ 0 ⇒ m_{N−1} ≥ 0`, `s ≥ 1 ⇒ m_{N−1} ≤ −1`, prefactor `sign(N/2 − r)`.
    #[default]
    Verified,
    /// `(m_{N−1} − 1/2)(s − 1/2) ≥ 0`, prefactor `sign(r − N/2)`.
    AsPrinted,
}

/// `d_N = Π_{j=1}^N j!`.
pub fn d_n(n: u32) -> Integer {
    (1..=n).fold(Integer::from(1), |acc, j| acc * factorial(j))
}

fn cone_ok(conv: TrConvention, s: &Rational, m_last: i64) -> bool {
    match conv {
        TrConvention::Verified => {
            if *s <= 0 {
                m_last >= 0
            } else {
                m_last <= -1
            }
        }
        TrConvention::AsPrinted => {
            let half = Rational::from((1, 2));
            (Rational::from(m_last) - &half) * Rational::from(s - &half) >= 0
        }
    }
}

/// Members of `T_s` with `t²/(2(N−1)) < bound`, paired with that exponent.
/// `box_scale` widens the search box (1 is the certified minimum).
pub fn enumerate_tr(
    rs: &RootSystem,
    s: &Rational,
    bound: &Rational,
    conv: TrConvention,
    box_scale: u32,
) -> Vec<(LatticeVector, Rational)> {
    let n = rs.n as i64;
    let r = rs.rank();
    let base: Vec<Rational> = (1..n)
        .map(|k| Rational::from(((n - k) * k, 2)) - Rational::from(s * k) / n)
        .collect();
    // t² ≥ λ |a|²  ⇒  |a_k| ≤ sqrt(2(N−1) bound / λ)
    let radius = (2.0 * (n - 1) as f64 * bound.to_f64().max(0.0) / rs.min_eigenvalue()).sqrt() * box_scale as f64 + 1.0;
    let ranges: Vec<(i64, i64)> = base
        .iter()
        .map(|b| {
            let bf = b.to_f64();
            (((-radius - bf) / (n - 1) as f64).floor() as i64 - 1, ((radius - bf) / (n - 1) as f64).ceil() as i64 + 1)
        })
        .collect();
    let mut out = Vec::new();
    let mut m: Vec<i64> = ranges.iter().map(|x| x.0).collect();
    let limit = Rational::from(bound * (2 * (n - 1)));
    loop {
        if cone_ok(conv, s, m[r - 1]) {
            let coeffs: Vec<Rational> = (0..r).map(|k| Rational::from(&base[k] + (n - 1) * m[k])).collect();
            let t = LatticeVector { coeffs };
            let t2 = rs.norm(&t).unwrap();
            if t2 < limit {
                let e = t2 / (2 * (n - 1));
                out.push((t, e));
            }
        }
        let mut k = 0;
        loop {
            if k == r {
                return out;
            }
            m[k] += 1;
            if m[k] <= ranges[k].1 {
                break;
            }
            m[k] = ranges[k].0;
            k += 1;
        }
    }
}

/// The Fourier coefficient of `ϑ^{−N}` at `ζ^r` (`r ∈ N/2 + Z`) in lattice form, known below `order`.
pub fn lattice_coefficient(n: u32, r: &Rational, order: &Rational, conv: TrConvention) -> Result<(Phased, usize)> {
    if n < 2 {
        return Err(Error::Invalid(format!("lattice form needs N >= 2, got {n}")));
    }
    let half_n = Rational::from((n as i64, 2));
    let s = Rational::from(r - &half_n);
    if *s.denom() != 1 {
        return Err(Error::NotInCoset(r.to_string()));
    }
    let rs = RootSystem::new(n as usize)?;
    let shift = Rational::from(r * r) / (2 * n as i64);
    let eta_val = Rational::from((n as i64 * (n as i64 + 1), 24));
    // Σ is needed up to order + r²/2N + N(N+1)/24
    let bound = Rational::from(order + &shift) + &eta_val;
    let members = enumerate_tr(&rs, &s, &bound, conv, 1);
    let count = members.len();
    let pairs = members.into_iter().map(|(t, e)| (e, rs.root_product(&t)));
    let sum = QSeries::from_terms(pairs, Some(bound));
    let sign = match conv {
        TrConvention::Verified => if s <= 0 { 1 } else { -1 },
        TrConvention::AsPrinted => if s >= 0 { 1 } else { -1 },
    };
    let scale = Rational::from((Integer::from(sign), d_n(n - 1)));
    let e = eta_power(-(n as i64) * (n as i64 + 1), &Rational::from(order + &shift));
    let series = sum.try_mul(&e)?.shift(&(-shift)).scale(&scale).truncate(order);
    Ok((Phased::new(n as i64, series), count))
}

/// Closed form of the Fourier coefficients of `1/ϑ`:
/// `i q^{−r²/2} η^{−3} Σ_{m≥0} (−1)^m q^{(m + |r − 1/2| + 1/2)²/2}`.
pub fn n1_coefficient(r: &Rational, order: &Rational) -> Result<Phased> {
    let shift: Rational = Rational::from(r * r) / 2u32;
    let need = Rational::from(order + &shift) + Rational::from((1, 8));
    let a = (r - Rational::from((1, 2))).abs() + Rational::from((1, 2));
    let mut pairs = Vec::new();
    let mut m = 0i64;
    loop {
        let x = Rational::from(&a + m);
        let e = Rational::from(&x * &x) / 2;
        if e >= need {
            break;
        }
        pairs.push((e, Rational::from(if m % 2 == 0 { 1 } else { -1 })));
        m += 1;
    }
    let tail = QSeries::from_terms(pairs, Some(need));
    let e = eta_power(-3, &Rational::from(order + &shift));
    let s = tail.try_mul(&e)?.shift(&(-shift)).truncate(order);
    Ok(Phased::new(1, s))
}

/// `Σ_{t ∈ (1/N) A_{N−1}} q^{t²/(2(N−1))}` below `order`.
pub fn full_lattice_theta(n: u32, order: &Rational) -> Result<QSeries> {
    let rs = RootSystem::new(n as usize)?;
    let r = rs.rank();
    let nn = n as i64;
    // t = b/N, exponent bᵀCb / (2N²(N−1))
    let grid = 2 * nn * nn * (nn - 1);
    let limit = Rational::from(order * grid);
    let radius = (limit.to_f64().max(0.0) / rs.min_eigenvalue()).sqrt().ceil() as i64 + 1;
    let mut b = vec![-radius; r];
    let mut pairs = Vec::new();
    loop {
        let v = LatticeVector { coeffs: b.iter().map(|x| Rational::from(*x)).collect() };
        let t2 = rs.norm(&v).unwrap();
        if t2 < limit {
            pairs.push((t2.numer().to_i64().unwrap(), Rational::from(1)));
        }
        let mut k = 0;
        loop {
            if k == r {
                return Ok(QSeries::from_grid_terms(grid as u64, pairs, Some(order.clone())));
            }
            b[k] += 1;
            if b[k] <= radius {
                break;
            }
            b[k] = -radius;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector { coeffs: x.iter().map(|a| Rational::from(*a)).collect() }
    }

    #[test]
    fn cartan_pairings() {
        let rs = RootSystem::new(3).unwrap();
        assert_eq!(rs.pairing(&v(&[1, 0]), &v(&[1, 0])).unwrap(), 2);
        assert_eq!(rs.pairing(&v(&[1, 0]), &v(&[0, 1])).unwrap(), -1);
        assert_eq!(rs.norm(&v(&[1, 1])).unwrap(), 2);
        assert_eq!(RootSystem::new(5).unwrap().positive_roots.len(), 10);
        assert!(rs.pairing(&v(&[1]), &v(&[1, 0])).is_err());
    }

    #[test]
    fn d_values() {
        assert_eq!(d_n(3), 12);
        assert_eq!(d_n(4), 288);
    }

    #[test]
    fn enumeration_stable() {
        for n in 2..5usize {
            let rs = RootSystem::new(n).unwrap();
            for s in -2..3i64 {
                let s = Rational::from(s);
                let a = enumerate_tr(&rs, &s, &Rational::from(6), TrConvention::Verified, 1);
                let b = enumerate_tr(&rs, &s, &Rational::from(6), TrConvention::Verified, 2);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn n1_leading() {
        let c = n1_coefficient(&q(1, 1), &Rational::from(3)).unwrap();
        assert_eq!(c.ipow, 1);
        assert_eq!(c.series.coeff(&q(-1, 8)), 1);
        assert_eq!(c.series.coeff(&q(7, 8)), 3);
        assert_eq!(c.series.coeff(&q(11, 8)), -1);
    }

    #[test]
    fn full_theta_counts() {
        let t = full_lattice_theta(3, &Rational::from(2)).unwrap();
        assert_eq!(t.coeff(&Rational::new()), 1);
        // brute-force ball count
        let rs = RootSystem::new(3).unwrap();
        let mut cnt = std::collections::BTreeMap::new();
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                let t2 = rs.norm(&v(&[a, b])).unwrap();
                let e = t2 / (2 * 9 * 2);
                if e < 2 {
                    *cnt.entry(e).or_insert(0i64) += 1;
                }
            }
        }
        for (e, c) in cnt {
            assert_eq!(t.coeff(&e), c);
        }
    }
}

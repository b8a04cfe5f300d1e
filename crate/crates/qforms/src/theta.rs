//! Weight 1/2 and 3/2 theta functions, their partial (half-lattice) versions,
//! and the linear relations among their derivatives.
//!
//! With `ν ∈ {0, 1}` and `s = n + c/N`:
//!
//! * `Full`:  `Σ_{n∈Z} (−1)^{nN} s^ν q^{N s²/2}` with `c = r − N/2`
//! * `Tilde`: the same sum with `c = r`
//! * `Partial`: the `Tilde` sum restricted to `n ≥ 0`
//! * `PartialPlus` / `PartialMinus`: `Partial(r) ± Partial(−r)`

use crate::error::{Error, Result};
use crate::gens::{eta_power, serre_tower};
use crate::linalg;
use crate::series::QSeries;
use rug::{Integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Full,
    Tilde,
    Partial,
    PartialPlus,
    PartialMinus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSpec {
    pub n: u32,
    pub r: Rational,
    /// 0 for weight 1/2, 1 for weight 3/2.
    pub nu: u8,
    pub variant: Variant,
}

impl ThetaSpec {
    pub fn new(n: u32, r: Rational, nu: u8, variant: Variant) -> Self {
        ThetaSpec { n, r, nu, variant }
    }
}

/// Sum over `n ≥ n_min` (or all `n`) of `(−1)^{nN} (n + c/N)^ν q^{(Nn + c)²/2N}`.
fn lattice_sum(n: u32, c: &Rational, nu: u8, half: bool, order: &Rational) -> QSeries {
    let big_n = Integer::from(n);
    let b = c.denom().clone();
    let a = c.numer().clone();
    let grid_i = Integer::from(2 * n) * &b * &b;
    let grid = grid_i.to_u64().expect("theta grid fits in u64");
    let nb = Integer::from(&big_n * &b);
    // keys are (N n b + a)^2 < grid * order
    let bound = Rational::from(order * &grid_i);
    let bound_i = if bound <= 0 { Integer::new() } else { bound.ceil().numer().clone() };
    let root = Integer::from(bound_i.sqrt_ref()) + 1u32;
    let lo = if half {
        Integer::new()
    } else {
        Rational::from((Integer::from(-&root) - &a, nb.clone())).floor().numer().clone() - 1u32
    };
    let hi = Rational::from((Integer::from(&root - &a), nb.clone())).ceil().numer().clone() + 1u32;
    let cap = Rational::from(order * &grid_i);
    let mut pairs = Vec::new();
    let mut k = lo;
    while k <= hi {
        let m = Integer::from(&nb * &k) + &a;
        let key = Integer::from(m.square_ref());
        if key.clone() < cap {
            let mut coeff = if nu == 0 {
                Rational::from(1)
            } else {
                Rational::from((m.clone(), nb.clone()))
            };
            if n % 2 == 1 && k.is_odd() {
                coeff = -coeff;
            }
            pairs.push((key.to_i64().expect("theta exponent fits in i64"), coeff));
        }
        k += 1u32;
    }
    QSeries::from_grid_terms(grid, pairs, Some(order.clone()))
}

/// The series of `spec`, exact below `order`.
pub fn theta_series(spec: &ThetaSpec, order: &Rational) -> Result<QSeries> {
    if spec.n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    if spec.nu > 1 {
        return Err(Error::Invalid(format!("nu must be 0 or 1, got {}", spec.nu)));
    }
    let n = spec.n;
    let half_n = Rational::from((n as i64, 2));
    Ok(match spec.variant {
        Variant::Full => lattice_sum(n, &Rational::from(&spec.r - &half_n), spec.nu, false, order),
        Variant::Tilde => lattice_sum(n, &spec.r, spec.nu, false, order),
        Variant::Partial => lattice_sum(n, &spec.r, spec.nu, true, order),
        Variant::PartialPlus | Variant::PartialMinus => {
            let p = lattice_sum(n, &spec.r, spec.nu, true, order);
            let m = lattice_sum(n, &Rational::from(-&spec.r), spec.nu, true, order);
            if spec.variant == Variant::PartialPlus {
                p.try_add(&m)?
            } else {
                p.try_sub(&m)?
            }
        }
    })
}

fn tilde32(n: u32, r: i64, order: &Rational) -> QSeries {
    lattice_sum(n, &Rational::from(r), 1, false, order)
}

/// `(Θ^+, Θ^−)` for the weight 3/2 partial theta with even `N`, `0 ≤ r < N`.
pub fn theta_sum_diff(n: u32, r: i64, order: &Rational) -> Result<(QSeries, QSeries)> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Invalid(format!("N must be even and positive, got {n}")));
    }
    if r < 0 || r >= n as i64 {
        return Err(Error::Invalid(format!("r = {r} outside [0, {}]", n - 1)));
    }
    let mk = |v| theta_series(&ThetaSpec::new(n, Rational::from(r), 1, v), order);
    Ok((mk(Variant::PartialPlus)?, mk(Variant::PartialMinus)?))
}

/// Number of residues in `{r, −r} mod N` counted with multiplicity.
pub fn class_multiplicity(n: u32, r: i64, m: i64) -> i64 {
    let n = n as i64;
    (m - r).rem_euclid(n).eq(&0) as i64 + (m + r).rem_euclid(n).eq(&0) as i64
}

/// `Θ^+(N, r)` rebuilt from the class sum
/// `Θ^+ + (r/N) q^{r²/2N} = (1/N) Σ_{m>0} mult(m) m q^{m²/2N}`.
pub fn theta_plus_class_sum(n: u32, r: i64, order: &Rational) -> Result<QSeries> {
    if r < 0 || r >= n as i64 {
        return Err(Error::Invalid(format!("r = {r} outside [0, {}]", n.saturating_sub(1))));
    }
    let grid = 2 * n as u64;
    let cap = Rational::from(order * grid);
    let mut pairs = vec![(r * r, Rational::from((-r, n as i64)))];
    let mut m = 1i64;
    while m * m < cap {
        let mult = class_multiplicity(n, r, m);
        if mult > 0 {
            pairs.push((m * m, Rational::from((mult * m, n as i64))));
        }
        m += 1;
    }
    Ok(QSeries::from_grid_terms(grid, pairs, Some(order.clone())))
}

/// A normalized relation `Σ_j f_j X^j θ_r = 0` holding for every residue `r`.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub n: u32,
    /// `f_0, …, f_J` with `f_J = 1`.
    pub entries: Vec<QSeries>,
    /// Order up to which every residual is certified to vanish.
    pub certified_order: Rational,
    /// Residues whose rows were used as pivots.
    pub representatives: Vec<i64>,
    /// True for `N = 2`, where every component vanishes identically.
    pub degenerate: bool,
}

/// `X^j θ_r`: Serre tower on `ϑ̃_{3/2}(N, r)` for even `N`, `D_q^j ϑ_{1/2}(N, r)` for odd `N`.
pub fn kernel_column(n: u32, r: i64, j: u32, order: &Rational) -> QSeries {
    if n.is_multiple_of(2) {
        serre_tower(j, &tilde32(n, r, order))
    } else {
        let s = lattice_sum(n, &(Rational::from(r) - Rational::from((n as i64, 2))), 0, false, order);
        s.dq_n(j)
    }
}

/// Solve for the relation among `X^0 θ, …, X^J θ` (`J = ⌊(N−1)/2⌋`… see [`kernel_column`]).
pub fn quasimodular_kernel(n: u32, order: &Rational) -> Result<Kernel> {
    if n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    let top = if n.is_multiple_of(2) { n / 2 - 1 } else { (n - 1) / 2 };
    if n == 2 {
        return Ok(Kernel {
            n,
            entries: vec![QSeries::one(None)],
            certified_order: order.clone(),
            representatives: vec![],
            degenerate: true,
        });
    }
    let cols: Vec<Vec<QSeries>> = (0..n as i64)
        .map(|r| (0..=top).map(|j| kernel_column(n, r, j, order)).collect())
        .collect();
    let rows: Vec<usize> = (0..n as usize).filter(|&r| !cols[r][0].is_zero()).collect();
    let a: Vec<Vec<QSeries>> = rows.iter().map(|&r| cols[r][..top as usize].to_vec()).collect();
    let b: Vec<QSeries> = rows.iter().map(|&r| cols[r][top as usize].neg()).collect();
    let (mut entries, pivots) = if top == 0 { (vec![], vec![]) } else { linalg::solve(&a, &b)? };
    entries.push(QSeries::one(None));
    let mut certified: Option<Rational> = None;
    for r in 0..n as usize {
        let mut res = QSeries::zero(None);
        for (j, f) in entries.iter().enumerate() {
            res = res.try_add(&f.try_mul(&cols[r][j])?)?;
        }
        if !res.is_zero_to_trunc() {
            return Err(Error::ResidualNonzero(format!("N = {n}, r = {r}")));
        }
        let t = res.trunc().clone().unwrap_or_else(|| order.clone());
        certified = Some(match certified {
            Some(c) if c < t => c,
            _ => t,
        });
    }
    Ok(Kernel {
        n,
        entries,
        certified_order: certified.unwrap_or_else(|| order.clone()),
        representatives: pivots.iter().map(|&p| rows[p] as i64).collect(),
        degenerate: false,
    })
}

/// The matrix `(E^j ϑ̃_{3/2}(N, r))_{r = 1..N/2−1, j = 0..N/2−2}`.
pub fn tn_matrix(n: u32, order: &Rational) -> Vec<Vec<QSeries>> {
    let m = n / 2 - 1;
    (1..=m as i64)
        .map(|r| {
            let t = tilde32(n, r, order);
            (0..m).map(|j| serre_tower(j, &t)).collect()
        })
        .collect()
}

/// `det(T_N) / η^{(N−1)(N−2)/2}`; fails unless the ratio is constant to its truncation.
pub fn tn_determinant_ratio(n: u32, order: &Rational) -> Result<QSeries> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Invalid(format!("N must be even and at least 4, got {n}")));
    }
    let d = linalg::det(&tn_matrix(n, order))?;
    let k = ((n - 1) * (n - 2) / 2) as i64;
    let e = eta_power(k, order);
    let ratio = d.try_mul(&e.try_inv()?)?;
    let constant = ratio.coeff(&Rational::new());
    for (x, _) in ratio.terms() {
        if x != 0 {
            return Err(Error::NonConstantRatio);
        }
    }
    if constant == 0 {
        return Err(Error::NonConstantRatio);
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn spec(n: u32, r: Rational, nu: u8, v: Variant) -> ThetaSpec {
        ThetaSpec::new(n, r, nu, v)
    }

    #[test]
    fn special_vanishing() {
        let o = Rational::from(30);
        assert!(theta_series(&spec(1, q(0, 1), 0, Variant::Full), &o).unwrap().is_zero());
        for r in 0..4 {
            assert!(theta_series(&spec(2, Rational::from(r), 1, Variant::Tilde), &o).unwrap().is_zero());
        }
    }

    #[test]
    fn partial_first_terms() {
        let t = theta_series(&spec(2, q(1, 1), 1, Variant::Partial), &Rational::from(7)).unwrap();
        assert_eq!(t.coeff(&q(1, 4)), q(1, 2));
        assert_eq!(t.coeff(&q(9, 4)), q(3, 2));
        assert_eq!(t.coeff(&q(25, 4)), q(5, 2));
        assert_eq!(t.len(), 3);
        assert_eq!(t.grid() % 4, 0);
    }

    #[test]
    fn shift_and_negation() {
        let o = Rational::from(40);
        for n in 1..7u32 {
            for nu in 0..2u8 {
                for r in -3..5i64 {
                    let a = theta_series(&spec(n, Rational::from(r), nu, Variant::Tilde), &o).unwrap();
                    let b = theta_series(&spec(n, Rational::from(r + n as i64), nu, Variant::Tilde), &o).unwrap();
                    let c = theta_series(&spec(n, Rational::from(-r), nu, Variant::Tilde), &o).unwrap();
                    let b = if n % 2 == 1 { b.neg() } else { b };
                    assert!(a.agrees_with(&b));
                    let c = if nu == 1 { c.neg() } else { c };
                    assert!(a.agrees_with(&c));
                }
            }
        }
    }

    #[test]
    fn difference_and_class_sum() {
        let o = Rational::from(25);
        for n in [2u32, 4, 6, 8] {
            for r in 0..n as i64 {
                let (plus, minus) = theta_sum_diff(n, r, &o).unwrap();
                let corr = QSeries::monomial(Rational::from((r, n as i64)), &Rational::from((r * r, 2 * n as i64)), Some(o.clone()));
                assert!(minus.agrees_with(&(&tilde32(n, r, &o) + &corr)));
                assert!(plus.agrees_with(&theta_plus_class_sum(n, r, &o).unwrap()));
            }
        }
        assert!(theta_sum_diff(4, 4, &o).is_err());
        assert!(theta_sum_diff(3, 1, &o).is_err());
    }

    #[test]
    fn kernel_small_n() {
        let o = Rational::from(25);
        let k2 = quasimodular_kernel(2, &o).unwrap();
        assert!(k2.degenerate);
        for n in [1u32, 3, 4, 5, 6] {
            let k = quasimodular_kernel(n, &o).unwrap();
            assert!(!k.degenerate);
            assert_eq!(*k.entries.last().unwrap(), QSeries::one(None));
            assert!(k.certified_order > 0);
        }
        let k3 = quasimodular_kernel(3, &o).unwrap();
        assert_eq!(k3.entries.len(), 2);
    }

    #[test]
    fn determinant_ratio_n4() {
        let r = tn_determinant_ratio(4, &Rational::from(30)).unwrap();
        assert_eq!(r.coeff(&Rational::new()), q(1, 4));
        let r6 = tn_determinant_ratio(6, &Rational::from(30)).unwrap();
        assert!(r6.coeff(&Rational::new()) != 0);
        assert!(tn_determinant_ratio(5, &Rational::from(10)).is_err());
    }
}

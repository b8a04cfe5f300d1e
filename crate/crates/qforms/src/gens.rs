//! Standard q-series generators: eta powers, Pochhammer products, Eisenstein
//! series and the Ramanujan–Serre derivative tower.

use crate::arith::bernoulli_numbers;
use crate::series::{QSeries, Result, SeriesError};
use rug::ops::Pow;
use rug::Rational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// `(q)_∞ = ∏(1 − q^n)` via the pentagonal number theorem, truncated at `order`.
pub fn euler_product(order: &Rational) -> QSeries {
    let mut pairs = Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if Rational::from(e) < *order {
                any = true;
                let sign = if kk % 2 == 0 { 1 } else { -1 };
                pairs.push((Rational::from(e), Rational::from(sign)));
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    QSeries::from_terms(pairs, Some(order.clone()))
}

/// `η(τ) = q^{1/24}(q)_∞`, truncated at `order`.
pub fn eta(order: &Rational) -> QSeries {
    eta_power(1, order)
}

/// `η^k` for any integer `k`, truncated at `order`.
pub fn eta_power(k: i64, order: &Rational) -> QSeries {
    let lead = rat(k, 24);
    // (q)_∞^k needs relative precision order − k/24
    let rel = Rational::from(order - &lead);
    if rel <= 0 {
        return QSeries::zero(Some(order.clone()));
    }
    let p = euler_product(&rel);
    let pk = p.try_pow(k).expect("power of a unit series");
    pk.shift(&lead)
}

/// `∏_{j=0}^{n-1} (1 − c q^{a + j s})`; `n = None` means the infinite product.
pub fn qpoch(c: &Rational, a: &Rational, s: &Rational, n: Option<usize>, order: &Rational) -> QSeries {
    let mut acc = QSeries::one(Some(order.clone()));
    let mut j = 0usize;
    loop {
        if n.is_some_and(|n| j >= n) {
            break;
        }
        let e = a + Rational::from(s * j as u64);
        if n.is_none() && e >= *order {
            break;
        }
        if e < *order {
            let f = QSeries::from_terms(vec![(Rational::new(), Rational::from(1)), (e, Rational::from(-c))], None);
            acc = acc.try_mul(&f).expect("pochhammer factor");
        }
        j += 1;
        if n.is_none() && *s <= 0 {
            panic!("infinite product needs a positive step");
        }
    }
    acc.truncate(order)
}

/// Divisor power sum σ_k(n).
pub fn sigma(k: u32, n: u64) -> rug::Integer {
    let mut s = rug::Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += rug::Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += rug::Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `G_k = −B_k/(2k) + Σ σ_{k−1}(n) q^n` for even `k ≥ 2`.
pub fn eisenstein(k: u32, order: &Rational) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(SeriesError::Invalid(format!("Eisenstein weight must be even and >= 2, got {k}")));
    }
    let b = bernoulli_numbers(k as usize);
    let mut pairs = vec![(Rational::new(), -Rational::from(&b[k as usize] / (2 * k)))];
    let mut n = 1u64;
    while Rational::from(n) < *order {
        pairs.push((Rational::from(n), Rational::from(sigma(k - 1, n))));
        n += 1;
    }
    Ok(QSeries::from_terms(pairs, Some(order.clone())))
}

/// `E_2 = 1 − 24 Σ σ_1(n) q^n = −24 G_2`.
pub fn e2(order: &Rational) -> QSeries {
    eisenstein(2, order).expect("weight 2").scale(&Rational::from(-24))
}

/// Ramanujan–Serre derivative `E_k = D_q − (k/12) E_2`.
pub fn serre(k: &Rational, a: &QSeries) -> QSeries {
    let order = a.trunc().clone().unwrap_or_else(|| {
        panic!("serre derivative of an exact series needs an explicit truncation")
    });
    let e = e2(&order);
    let c = Rational::from(k / 12);
    &a.dq() - &(&e * a).scale(&c)
}

/// `E^n = E_{2n−1/2} ∘ … ∘ E_{7/2} ∘ E_{3/2}`; `n = 0` is the identity.
pub fn serre_tower(n: u32, a: &QSeries) -> QSeries {
    let mut s = a.clone();
    for j in 0..n {
        let k = Rational::from((4 * j as i64 + 3, 2));
        s = serre(&k, &s);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_pentagonal_signs() {
        let e = eta(&Rational::from(51));
        for (x, c) in e.terms() {
            let m = &x - rat(1, 24);
            assert_eq!(*m.denom(), 1);
            let m = m.numer().to_i64().unwrap();
            let pent = (-20i64..=20).find(|k| k * (3 * k - 1) / 2 == m);
            let k = pent.expect("support on generalized pentagonal numbers");
            assert_eq!(*c, if k % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(e.coeff(&Rational::from((5 * 24 + 1, 24))), 1);
    }

    #[test]
    fn eta_inverse_cubed_counts() {
        // (q)_∞^{-3}: 1 + 3q + 9q^2 + 22q^3 + 51q^4
        let p = euler_product(&Rational::from(6)).try_pow(-3).unwrap();
        let want = [1, 3, 9, 22, 51, 108];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(p.coeff(&Rational::from(n as i64)), *w);
        }
    }

    #[test]
    fn eta_power_matches_repeated_product() {
        let o = Rational::from(12);
        let e = eta(&o);
        let mut p = QSeries::one(None);
        for _ in 0..5 {
            p = &p * &e;
        }
        assert!(p.agrees_with(&eta_power(5, &o)));
    }

    #[test]
    fn eisenstein_leading_terms() {
        let g2 = eisenstein(2, &Rational::from(5)).unwrap();
        assert_eq!(g2.coeff(&Rational::new()), rat(-1, 24));
        assert_eq!(g2.coeff(&Rational::from(2)), 3);
        assert_eq!(g2.coeff(&Rational::from(3)), 4);
        let g4 = eisenstein(4, &Rational::from(3)).unwrap();
        // -B_4/8 with B_4 = -1/30, i.e. E_4/240
        assert_eq!(g4.coeff(&Rational::new()), rat(1, 240));
        let e = e2(&Rational::from(3));
        assert_eq!(e.coeff(&Rational::from(1)), -24);
        assert_eq!(e.coeff(&Rational::from(2)), -72);
        assert!(eisenstein(3, &Rational::from(3)).is_err());
        assert!(eisenstein(0, &Rational::from(3)).is_err());
    }

    #[test]
    fn serre_of_one() {
        let one = QSeries::one(Some(Rational::from(6)));
        let s = serre(&rat(3, 2), &one);
        assert!(s.agrees_with(&e2(&Rational::from(6)).scale(&rat(-1, 8))));
    }

    #[test]
    fn serre_raises_weight_of_delta() {
        // E_12(Δ) = D_q Δ − E_2 Δ = 0 for the cusp form Δ = η^24
        let o = Rational::from(10);
        let d = eta_power(24, &o);
        let s = serre(&Rational::from(12), &d);
        assert!(s.is_zero_to_trunc());
    }

    #[test]
    fn pochhammer_finite_and_infinite() {
        let o = Rational::from(20);
        let inf = qpoch(&Rational::from(1), &Rational::from(1), &Rational::from(1), None, &o);
        assert!(inf.agrees_with(&euler_product(&o)));
        let fin = qpoch(&Rational::from(1), &Rational::from(1), &Rational::from(2), Some(2), &o);
        // (1 - q)(1 - q^3)
        let want = QSeries::from_terms(
            vec![(Rational::from(0), Rational::from(1)), (Rational::from(1), Rational::from(-1)), (Rational::from(3), Rational::from(-1)), (Rational::from(4), Rational::from(1))],
            Some(o),
        );
        assert!(fin.agrees_with(&want));
    }
}

//! Small exact number-theory helpers shared by the series and numeric layers.

use rug::{Integer, Rational};

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn lcm_u64(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    let g = gcd_i64(a as i64, b as i64) as u64;
    (a / g).checked_mul(b)
}

/// 2-adic valuation; `None` for zero.
pub fn ord2(n: i64) -> Option<u32> {
    if n == 0 {
        None
    } else {
        Some(n.trailing_zeros())
    }
}

pub fn factorial(n: u32) -> Integer {
    let mut f = Integer::from(1);
    for k in 2..=n {
        f *= k;
    }
    f
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Bernoulli numbers B_0..=B_n with B_1 = -1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::from(1));
    for m in 1..=n {
        let mut s = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from(binomial(m as u32 + 1, j as u32)) * bj;
        }
        b.push(-s / Rational::from(m as u32 + 1));
    }
    b
}

/// B_n(x) = sum_k C(n,k) B_k x^{n-k}.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let b = bernoulli_numbers(n);
    let mut s = Rational::new();
    let mut xp = Rational::from(1);
    for k in (0..=n).rev() {
        s += Rational::from(binomial(n as u32, k as u32)) * &b[k] * &xp;
        xp *= x;
    }
    s
}

/// Kronecker symbol (a/n) for all integers, with (a/-1) = sign(a) and (a/0) = [a = +-1].
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    let mut a = a;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        n >>= tz;
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Parse "p/q", "p" or "-p/q" exactly. Decimal input is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(format!("decimal input not accepted: {t:?}, use p/q"));
    }
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: Integer = num.parse().map_err(|_| format!("bad numerator in {t:?}"))?;
    let q: Integer = den.parse().map_err(|_| format!("bad denominator in {t:?}"))?;
    if q == 0 {
        return Err(format!("zero denominator in {t:?}"));
    }
    Ok(Rational::from((p, q)))
}

pub fn rational_to_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floor of a rational as i64 (panics on overflow).
pub fn floor_i64(r: &Rational) -> i64 {
    let (q, _) = r.numer().clone().div_rem_floor(r.denom().clone());
    q.to_i64().expect("floor overflow")
}

/// Ceiling of a rational as i64 (panics on overflow).
pub fn ceil_i64(r: &Rational) -> i64 {
    let (q, _) = r.numer().clone().div_rem_ceil(r.denom().clone());
    q.to_i64().expect("ceil overflow")
}

pub fn denom_u64(r: &Rational) -> u64 {
    r.denom().to_u64().expect("denominator overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(6);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[3], 0);
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[6], Rational::from((1, 42)));
    }

    #[test]
    fn bernoulli_poly_values() {
        // B_2(x) = x^2 - x + 1/6
        let x = Rational::from((1, 3));
        assert_eq!(bernoulli_poly(2, &x), Rational::from((1, 9)) - Rational::from((1, 3)) + Rational::from((1, 6)));
        assert_eq!(bernoulli_poly(3, &Rational::from(1)), 0);
    }

    #[test]
    fn kronecker_table() {
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(3, 7), -1);
        assert_eq!(kronecker(5, 8), -1);
        assert_eq!(kronecker(7, 8), 1);
        assert_eq!(kronecker(4, 6), 0);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(1, -1), 1);
        assert_eq!(kronecker(8, -7), kronecker(8, 7));
        assert_eq!(kronecker(-8, -7), -kronecker(-8, 7));
        // multiplicativity in the bottom argument
        for a in -20..20i64 {
            for m in 1..15i64 {
                for n in 1..15i64 {
                    assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
                }
            }
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13] {
            for a in 1..p {
                let is_sq = (1..p).any(|x| (x * x) % p == a);
                assert_eq!(kronecker(a, p), if is_sq { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational::from((3, 2)));
        assert_eq!(parse_rational("-5").unwrap(), Rational::from(-5));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}

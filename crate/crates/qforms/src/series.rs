//! Exact truncated Puiseux series in q with rational coefficients.
//!
//! A [`QSeries`] stores coefficients on the grid `(1/D)Z` together with a
//! truncation order θ: every coefficient at an exponent `>= θ` is unknown.
//! Exact (finite) series carry no truncation.

use crate::arith::{ceil_i64, denom_u64, gcd_i64, lcm_u64};
use rug::{Integer, Rational};
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest grid denominator the arithmetic will build before refusing.
pub const MAX_GRID: u64 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("grid overflow: lcm of {0} and {1} exceeds the configured bound")]
    GridOverflow(u64, u64),
    #[error("series is not invertible: no certified nonzero leading coefficient")]
    NotInvertible,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Truncation order: coefficients at exponents `>= order` are unspecified.
/// `None` means the series is exact.
pub type Order = Option<Rational>;

pub fn order_min(a: &Order, b: &Order) -> Order {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(if x < y { x.clone() } else { y.clone() }),
    }
}

fn order_add(a: &Order, v: &Rational) -> Order {
    a.as_ref().map(|x| Rational::from(x + v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    grid: u64,
    trunc: Order,
    terms: BTreeMap<i64, Rational>,
}

impl QSeries {
    /// The zero series known below `trunc`.
    pub fn zero(trunc: Order) -> Self {
        QSeries { grid: 1, trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: Order) -> Self {
        Self::monomial(Rational::from(1), &Rational::new(), trunc)
    }

    pub fn constant(c: Rational, trunc: Order) -> Self {
        Self::monomial(c, &Rational::new(), trunc)
    }

    /// `c q^e`, truncated.
    pub fn monomial(c: Rational, e: &Rational, trunc: Order) -> Self {
        Self::from_terms(vec![(e.clone(), c)], trunc)
    }

    /// Build from (exponent, coefficient) pairs. Repeated exponents are summed;
    /// the grid is the lcm of the exponent denominators.
    pub fn from_terms<I>(pairs: I, trunc: Order) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let pairs: Vec<(Rational, Rational)> = pairs.into_iter().collect();
        let mut grid = 1u64;
        for (e, _) in &pairs {
            grid = lcm_u64(grid, denom_u64(e)).expect("grid overflow");
        }
        let mut s = QSeries { grid, trunc, terms: BTreeMap::new() };
        for (e, c) in pairs {
            if c == 0 || !s.below_trunc(&e) {
                continue;
            }
            let n = s.key_of(&e).expect("exponent on grid");
            *s.terms.entry(n).or_default() += c;
        }
        s.purge();
        s
    }

    /// Build on an explicit grid from (grid numerator, coefficient) pairs.
    pub fn from_grid_terms<I>(grid: u64, pairs: I, trunc: Order) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        assert!(grid > 0, "grid must be positive");
        let mut s = QSeries { grid, trunc, terms: BTreeMap::new() };
        let cap = s.cap();
        for (n, c) in pairs {
            if c == 0 || cap.is_some_and(|k| n >= k) {
                continue;
            }
            *s.terms.entry(n).or_default() += c;
        }
        s.purge();
        s
    }

    fn purge(&mut self) {
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn grid(&self) -> u64 {
        self.grid
    }

    pub fn trunc(&self) -> &Order {
        &self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Grid-numerator view of the stored terms.
    pub fn grid_terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        let d = self.grid;
        self.terms.iter().map(move |(k, v)| (Rational::from((*k, d)), v))
    }

    /// Coefficient of `q^e` (zero if `e` is off-grid or absent).
    /// Panics if `e` lies at or beyond the truncation order.
    pub fn coeff(&self, e: &Rational) -> Rational {
        assert!(self.below_trunc(e), "coefficient requested beyond truncation");
        match self.key_of(e) {
            Some(n) => self.terms.get(&n).cloned().unwrap_or_default(),
            None => Rational::new(),
        }
    }

    pub fn below_trunc(&self, e: &Rational) -> bool {
        self.trunc.as_ref().is_none_or(|t| e < t)
    }

    fn key_of(&self, e: &Rational) -> Option<i64> {
        let x = Rational::from(e * self.grid);
        if *x.denom() == 1 {
            Some(x.numer().to_i64().expect("exponent overflow"))
        } else {
            None
        }
    }

    /// First grid numerator that is not certified (exclusive bound), if truncated.
    fn cap(&self) -> Option<i64> {
        self.trunc.as_ref().map(|t| ceil_i64(&Rational::from(t * self.grid)))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational> {
        self.terms.keys().next().map(|k| Rational::from((*k, self.grid)))
    }

    /// Lower bound for the valuation usable in truncation bookkeeping:
    /// the true valuation, or the truncation order if nothing is known.
    fn val_bound(&self) -> Order {
        match self.valuation() {
            Some(v) => Some(v),
            None => self.trunc.clone(),
        }
    }

    /// Re-express on a grid that is a multiple of the current one.
    pub fn regrid(&self, grid: u64) -> Result<Self> {
        if grid == 0 || !grid.is_multiple_of(self.grid) {
            return Err(SeriesError::Invalid(format!("grid {grid} is not a multiple of {}", self.grid)));
        }
        let f = (grid / self.grid) as i64;
        Ok(QSeries {
            grid,
            trunc: self.trunc.clone(),
            terms: self.terms.iter().map(|(k, v)| (k * f, v.clone())).collect(),
        })
    }

    /// Coarsest grid carrying the stored terms (the stored grid is kept otherwise).
    pub fn compact(&self) -> Self {
        let mut g = self.grid as i64;
        for k in self.terms.keys() {
            g = gcd_i64(g, *k);
            if g == 1 {
                break;
            }
        }
        if g <= 1 {
            return self.clone();
        }
        QSeries {
            grid: self.grid / g as u64,
            trunc: self.trunc.clone(),
            terms: self.terms.iter().map(|(k, v)| (k / g, v.clone())).collect(),
        }
    }

    fn aligned(a: &Self, b: &Self) -> Result<(Self, Self)> {
        if a.grid == b.grid {
            return Ok((a.clone(), b.clone()));
        }
        let g = lcm_u64(a.grid, b.grid)
            .filter(|g| *g <= MAX_GRID)
            .ok_or(SeriesError::GridOverflow(a.grid, b.grid))?;
        Ok((a.regrid(g)?, b.regrid(g)?))
    }

    /// Lower the truncation order to `t` (no-op if already lower).
    pub fn truncate(&self, t: &Rational) -> Self {
        let trunc = order_min(&self.trunc, &Some(t.clone()));
        let mut s = QSeries { grid: self.grid, trunc, terms: self.terms.clone() };
        if let Some(cap) = s.cap() {
            s.terms.retain(|k, _| *k < cap);
        }
        s
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = Self::aligned(self, other)?;
        a.trunc = order_min(&a.trunc, &b.trunc);
        for (k, v) in b.terms {
            *a.terms.entry(k).or_insert_with(Rational::new) += v;
        }
        if let Some(cap) = a.cap() {
            a.terms.retain(|k, _| *k < cap);
        }
        a.purge();
        Ok(a)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QSeries {
            grid: self.grid,
            trunc: self.trunc.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, Rational::from(-v))).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return QSeries::zero(self.trunc.clone());
        }
        QSeries {
            grid: self.grid,
            trunc: self.trunc.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, Rational::from(v * c))).collect(),
        }
    }

    /// Multiply by the exact monomial `q^e`.
    pub fn shift(&self, e: &Rational) -> Self {
        let g = lcm_u64(self.grid, denom_u64(e)).expect("grid overflow");
        let s = self.regrid(g).expect("regrid");
        let off = s.key_of(e).expect("on grid");
        QSeries {
            grid: g,
            trunc: order_add(&s.trunc, e),
            terms: s.terms.into_iter().map(|(k, v)| (k + off, v)).collect(),
        }
    }

    /// Substitute `q -> q^k` for rational `k > 0`.
    pub fn rescale(&self, k: &Rational) -> Self {
        assert!(*k > 0, "rescale factor must be positive");
        let kn = k.numer().to_i64().expect("rescale numerator");
        let kd = k.denom().to_u64().expect("rescale denominator");
        let mut s = QSeries {
            grid: self.grid * kd,
            trunc: self.trunc.as_ref().map(|t| Rational::from(t * k)),
            terms: self.terms.iter().map(|(n, v)| (n * kn, v.clone())).collect(),
        };
        s = s.compact_grid_only();
        s
    }

    fn compact_grid_only(self) -> Self {
        let g = gcd_i64(self.grid as i64, self.terms.keys().fold(0i64, |acc, k| gcd_i64(acc, *k)));
        if g <= 1 {
            return self;
        }
        QSeries {
            grid: self.grid / g as u64,
            trunc: self.trunc,
            terms: self.terms.into_iter().map(|(k, v)| (k / g, v)).collect(),
        }
    }

    /// Product with truncation `min(θ_a + val(b), θ_b + val(a))`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::aligned(self, other)?;
        let trunc = match (&a.val_bound(), &b.val_bound()) {
            (va, vb) => {
                let ta = match (&a.trunc, vb) {
                    (Some(t), Some(v)) => Some(Rational::from(t + v)),
                    (Some(_), None) => None,
                    (None, _) => None,
                };
                let tb = match (&b.trunc, va) {
                    (Some(t), Some(v)) => Some(Rational::from(t + v)),
                    (Some(_), None) => None,
                    (None, _) => None,
                };
                order_min(&ta, &tb)
            }
        };
        let mut out = QSeries { grid: a.grid, trunc, terms: BTreeMap::new() };
        let cap = out.cap();
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ka, va) in &a.terms {
            let range: Box<dyn Iterator<Item = (&i64, &Rational)>> = match cap {
                Some(c) => Box::new(b.terms.range(..(c - ka))),
                None => Box::new(b.terms.iter()),
            };
            for (kb, vb) in range {
                let p = Rational::from(va * vb);
                *acc.entry(ka + kb).or_default() += p;
            }
        }
        out.terms = acc;
        out.purge();
        Ok(out)
    }

    /// Multiplicative inverse; valid to `θ − 2·val(a)`.
    pub fn try_inv(&self) -> Result<Self> {
        let (&k0, c0) = self.terms.iter().next().ok_or(SeriesError::NotInvertible)?;
        // offsets relative to the leading exponent live on a subgrid of step `step`
        let mut step = 0i64;
        for k in self.terms.keys() {
            step = gcd_i64(step, k - k0);
        }
        let trunc = self.trunc.as_ref().map(|t| {
            let v = Rational::from((k0, self.grid));
            Rational::from(t - &v) - v
        });
        let mut out = QSeries { grid: self.grid, trunc, terms: BTreeMap::new() };
        let cap = match out.cap() {
            Some(c) => c,
            None => {
                if self.terms.len() == 1 {
                    out.terms.insert(-k0, Rational::from(1) / c0.clone());
                    return Ok(out);
                }
                return Err(SeriesError::Invalid("inverse of an exact non-monomial needs a truncation".into()));
            }
        };
        let inv_c0 = Rational::from(1) / c0.clone();
        if step == 0 {
            if -k0 < cap {
                out.terms.insert(-k0, inv_c0);
            }
            return Ok(out);
        }
        // b_m at exponent (-k0 + m*step), a_j at (k0 + j*step)
        let a: Vec<(usize, &Rational)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(k, v)| (((k - k0) / step) as usize, v))
            .collect();
        if cap <= -k0 {
            return Ok(out);
        }
        let len = ((cap - 1 + k0) / step + 1) as usize;
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        b.push(inv_c0.clone());
        for m in 1..len {
            let mut s = Rational::new();
            for (j, aj) in &a {
                if *j > m {
                    break;
                }
                if b[m - j] != 0 {
                    s += Rational::from(*aj * &b[m - j]);
                }
            }
            b.push(-s * &inv_c0);
        }
        for (m, v) in b.into_iter().enumerate() {
            if v != 0 {
                out.terms.insert(-k0 + m as i64 * step, v);
            }
        }
        Ok(out)
    }

    /// Integer power; negative powers go through the inverse.
    /// Uses the power-series recurrence for `(1 + u)^k` on the support subgrid.
    pub fn try_pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(QSeries::one(self.trunc.as_ref().map(|_| {
                // 1 is only certified where the input is; use the input's relative precision
                let v = self.valuation().unwrap_or_default();
                Rational::from(self.trunc.as_ref().unwrap() - &v)
            })));
        }
        let (&k0, c0) = self.terms.iter().next().ok_or(SeriesError::NotInvertible)?;
        let v0 = Rational::from((k0, self.grid));
        let mut step = 0i64;
        for key in self.terms.keys() {
            step = gcd_i64(step, key - k0);
        }
        let lead_exp = Rational::from(&v0 * k);
        // relative precision of the input is θ - v0; it carries over to the power
        let trunc = self
            .trunc
            .as_ref()
            .map(|t| Rational::from(t - &v0) + &lead_exp);
        let lead_coeff = pow_rational(c0, k);
        let g = lcm_u64(self.grid, denom_u64(&lead_exp)).ok_or(SeriesError::GridOverflow(self.grid, 0))?;
        let mut out = QSeries { grid: g, trunc, terms: BTreeMap::new() };
        let scale = (g / self.grid) as i64;
        let lead_key = out.key_of(&lead_exp).expect("lead on grid");
        if step == 0 {
            if out.cap().is_none_or(|c| lead_key < c) {
                out.terms.insert(lead_key, lead_coeff);
            }
            return Ok(out);
        }
        let cap = match out.cap() {
            Some(c) => c,
            None => {
                if k > 0 {
                    let mut r = QSeries::one(None);
                    for _ in 0..k {
                        r = r.try_mul(self)?;
                    }
                    return Ok(r);
                }
                return Err(SeriesError::Invalid("negative power of an exact non-monomial needs a truncation".into()));
            }
        };
        let gstep = step * scale;
        if cap <= lead_key {
            return Ok(out);
        }
        let len = ((cap - 1 - lead_key) / gstep + 1) as usize;
        // normalized u_j = a_j / c0
        let inv_c0 = Rational::from(1) / c0.clone();
        let mut u = vec![Rational::new(); len];
        for (key, v) in &self.terms {
            let j = ((key - k0) / step) as usize;
            if j < len {
                u[j] = Rational::from(v * &inv_c0);
            }
        }
        // Miller recurrence: b_m = (1/m) sum_{j=1}^m ((k+1)j - m) u_j b_{m-j}
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        b.push(Rational::from(1));
        for m in 1..len {
            let mut s = Rational::new();
            for j in 1..=m {
                if u[j] == 0 || b[m - j] == 0 {
                    continue;
                }
                let w = (k + 1) * j as i64 - m as i64;
                if w == 0 {
                    continue;
                }
                s += Rational::from(&u[j] * &b[m - j]) * w;
            }
            b.push(s / m as i64);
        }
        for (m, v) in b.into_iter().enumerate() {
            if v != 0 {
                out.terms.insert(lead_key + m as i64 * gstep, v * &lead_coeff);
            }
        }
        Ok(out)
    }

    /// D_q = q d/dq: multiplies each coefficient by its exponent.
    pub fn dq(&self) -> Self {
        let d = self.grid as i64;
        let mut s = QSeries {
            grid: self.grid,
            trunc: self.trunc.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, (v * Rational::from((*k, d)))))
                .collect(),
        };
        s.purge();
        s
    }

    pub fn dq_n(&self, n: u32) -> Self {
        let mut s = self.clone();
        for _ in 0..n {
            s = s.dq();
        }
        s
    }

    /// True if all coefficients below the truncation are zero.
    pub fn is_zero_to_trunc(&self) -> bool {
        self.terms.is_empty()
    }

    /// Equality of all coefficients below the common truncation order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Same grid, truncation and terms (bit-exact identity).
    pub fn identical(&self, other: &Self) -> bool {
        self == other
    }
}

fn pow_rational(c: &Rational, k: i64) -> Rational {
    let mut r = Rational::from(1);
    let base = if k < 0 { Rational::from(1) / c.clone() } else { c.clone() };
    for _ in 0..k.unsigned_abs() {
        r *= &base;
    }
    r
}

impl std::ops::Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.try_add(rhs).expect("series add")
    }
}

impl std::ops::Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.try_sub(rhs).expect("series sub")
    }
}

impl std::ops::Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.try_mul(rhs).expect("series mul")
    }
}

impl std::ops::Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

impl std::fmt::Display for QSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})q^({})", c, e)?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = &self.trunc {
            write!(f, " + O(q^({}))", t)?;
        }
        Ok(())
    }
}

/// Exact integer value of a rational known to be integral.
pub fn to_integer(r: &Rational) -> Option<Integer> {
    if *r.denom() == 1 {
        Some(r.numer().clone())
    } else {
        None
    }
}

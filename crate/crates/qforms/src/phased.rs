//! A rational q-series times a power of `i`.
//!
//! Every exact object in this crate is a real rational series times `1` or `i`
//! (the theta function about `z = 0` carries a factor `i`), so one phase bit is
//! enough. The sign is folded into the series: the phase is `i^0` or `i^1`.

use crate::series::{QSeries, Result, SeriesError};
use rug::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phased {
    /// 0 for a real series, 1 for `i` times a real series.
    pub ipow: u8,
    pub series: QSeries,
}

impl Phased {
    pub fn real(series: QSeries) -> Self {
        Phased { ipow: 0, series }
    }

    /// `i^k · series` for any integer `k`.
    pub fn new(k: i64, series: QSeries) -> Self {
        let k = k.rem_euclid(4) as u8;
        let series = if k >= 2 { series.neg() } else { series };
        Phased { ipow: k % 2, series }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Phased::new((self.ipow + other.ipow) as i64, self.series.try_mul(&other.series)?))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Phased::new(-(self.ipow as i64), self.series.try_inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        Ok(Phased::new(self.ipow as i64 * k, self.series.try_pow(k)?))
    }

    /// Sum; both sides must share a phase unless one of them vanishes.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ipow == other.ipow {
            return Ok(Phased { ipow: self.ipow, series: self.series.try_add(&other.series)? });
        }
        if self.series.is_zero() {
            let mut s = other.clone();
            s.series = s.series.try_add(&QSeries::zero(self.series.trunc().clone()))?;
            return Ok(s);
        }
        if other.series.is_zero() {
            return other.add(self);
        }
        Err(SeriesError::Invalid("adding series with different phases".into()))
    }

    pub fn neg(&self) -> Self {
        Phased { ipow: self.ipow, series: self.series.neg() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Phased { ipow: self.ipow, series: self.series.scale(c) }
    }

    pub fn dq(&self) -> Self {
        Phased { ipow: self.ipow, series: self.series.dq() }
    }

    pub fn shift(&self, e: &Rational) -> Self {
        Phased { ipow: self.ipow, series: self.series.shift(e) }
    }

    pub fn truncate(&self, t: &Rational) -> Self {
        Phased { ipow: self.ipow, series: self.series.truncate(t) }
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    /// Agreement below the common truncation (a zero series matches either phase).
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.ipow == other.ipow {
            self.series.agrees_with(&other.series)
        } else {
            self.series.is_zero() && other.series.is_zero()
        }
    }
}

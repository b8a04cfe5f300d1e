//! Independent high-precision evaluation of the analytic objects, used as an
//! oracle for the exact pipelines.

pub mod complex;
pub mod eval;
pub mod quad;
pub mod verify;

pub use complex::Cx;

use crate::error::{Error, Result};
use rug::{Float, Rational};

/// Working precision, quadrature size and pass tolerance `2^{−bits/2}`.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    pub bits: u32,
    pub quadrature_points: usize,
    pub tolerance: Float,
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Self {
        let prec = bits + 32;
        PrecisionContext { bits, quadrature_points: 64, tolerance: complex::pow2_neg(prec, bits / 2) }
    }

    /// Internal MPFR precision (guard bits included).
    pub fn prec(&self) -> u32 {
        self.bits + 32
    }

    pub fn tol(&self) -> f64 {
        self.tolerance.to_f64()
    }

    /// Threshold below which a summand is dropped, relative to the largest one.
    pub fn eps(&self) -> Float {
        complex::pow2_neg(self.prec(), self.bits + 16)
    }

    pub fn pi(&self) -> Float {
        complex::pi(self.prec())
    }

    pub fn c(&self, re: f64, im: f64) -> Cx {
        Cx::from_f64(self.prec(), re, im)
    }

    pub fn rat(&self, r: &Rational) -> Cx {
        Cx::from_rational(self.prec(), r)
    }

    pub fn zero(&self) -> Cx {
        Cx::zero(self.prec())
    }

    pub fn one(&self) -> Cx {
        Cx::one(self.prec())
    }

    pub fn i(&self) -> Cx {
        Cx::i(self.prec())
    }

    /// `e(x) = exp(2πi x)`.
    pub fn e(&self, x: &Cx) -> Cx {
        let two_pi = Float::with_val(self.prec(), self.pi() * 2u32);
        (&self.i() * &x.scale(&two_pi)).exp()
    }

    pub fn check_upper(&self, tau: &Cx) -> Result<()> {
        if tau.im <= 0 {
            return Err(Error::Invalid("tau must lie in the upper half-plane".into()));
        }
        Ok(())
    }
}

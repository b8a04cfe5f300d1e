//! Complex numbers over MPFR floats.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

fn fl<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T>,
{
    Float::with_val(prec, v)
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Cx { re: fl(prec, 1), im: Float::new(prec) }
    }

    pub fn i(prec: u32) -> Self {
        Cx { re: Float::new(prec), im: fl(prec, 1) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx { re: fl(prec, re), im: fl(prec, im) }
    }

    pub fn real(re: Float) -> Self {
        let p = re.prec();
        Cx { re, im: Float::new(p) }
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        Cx { re: fl(prec, r), im: Float::new(prec) }
    }

    /// `i^k`.
    pub fn i_pow(prec: u32, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(prec),
            1 => Self::i(prec),
            2 => -Self::one(prec),
            _ => -Self::i(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Cx { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        Cx { re: fl(p, &self.re * s), im: fl(p, &self.im * s) }
    }

    pub fn scale_rat(&self, s: &Rational) -> Self {
        let p = self.prec();
        Cx { re: fl(p, &self.re * s), im: fl(p, &self.im * s) }
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        let p = self.prec();
        Cx { re: fl(p, &self.re * s), im: fl(p, &self.im * s) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        fl(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        fl(p, self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn arg(&self) -> Float {
        let p = self.prec();
        fl(p, self.im.atan2_ref(&self.re))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = fl(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Cx { re: fl(p, &m * &c), im: fl(p, &m * &s) }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        Cx { re: fl(p, self.abs().ln()), im: self.arg() }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return Self::zero(self.prec());
        }
        self.ln().scale_rat(&Rational::from((1, 2))).exp()
    }

    /// Principal power `self^w`.
    pub fn pow_cx(&self, w: &Cx) -> Self {
        (&self.ln() * w).exp()
    }

    /// Principal power with a rational exponent.
    pub fn pow_rat(&self, e: &Rational) -> Self {
        if *e.denom() == 1 {
            if let Some(k) = e.numer().to_i64() {
                return self.powi(k);
            }
        }
        self.ln().scale_rat(e).exp()
    }

    pub fn powi(&self, k: i64) -> Self {
        if k < 0 {
            return self.inv().powi(-k);
        }
        let mut acc = Self::one(self.prec());
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn inv(&self) -> Self {
        let p = self.prec();
        let d = self.norm_sqr();
        Cx { re: fl(p, &self.re / &d), im: fl(p, -Float::with_val(p, &self.im / &d)) }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64_pair();
        write!(f, "{a:.17e}{b:+.17e}i")
    }
}

impl<'a> Add<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        Cx { re: fl(p, &self.re + &o.re), im: fl(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        Cx { re: fl(p, &self.re - &o.re), im: fl(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn mul(self, o: &Cx) -> Cx {
        let p = self.prec().max(o.prec());
        let re = fl(p, &self.re * &o.re) - fl(p, &self.im * &o.im);
        let im = fl(p, &self.re * &o.im) + fl(p, &self.im * &o.re);
        Cx { re, im }
    }
}

impl<'a> Div<&'a Cx> for &'a Cx {
    type Output = Cx;
    fn div(self, o: &Cx) -> Cx {
        self * &o.inv()
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx { re: -self.re, im: -self.im }
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        -self.clone()
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr<Cx> for Cx {
            type Output = Cx;
            fn $m(self, o: Cx) -> Cx {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Cx> for Cx {
            type Output = Cx;
            fn $m(self, o: &Cx) -> Cx {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Cx> for &'a Cx {
            type Output = Cx;
            fn $m(self, o: Cx) -> Cx {
                self.$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

/// `π` at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `2^{−k}` at `prec` bits.
pub fn pow2_neg(prec: u32, k: u32) -> Float {
    Float::with_val(prec, Float::with_val(prec, 2).pow(-(k as i32)))
}

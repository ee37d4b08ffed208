use std::fmt;

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Smallest working precision accepted for coefficients, in bits.
pub const MIN_PRECISION_BITS: u32 = 64;

/// Default working precision, in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// A complex number with arbitrary-precision binary floating components.
#[derive(Clone, PartialEq)]
pub struct Coefficient {
    re: Float,
    im: Float,
}

impl Coefficient {
    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    /// Parses a pair of decimal strings at the given precision.
    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self> {
        let parse_one = |s: &str| -> Result<Float> {
            let s = s.trim();
            let parsed = Float::parse(s)
                .map_err(|e| Error::Parse(format!("coefficient string {s:?}: {e}")))?;
            let value = Float::with_val(prec, parsed);
            if !value.is_finite() {
                return Err(Error::Parse(format!("coefficient string {s:?} is not finite")));
            }
            Ok(value)
        };
        Ok(Self { re: parse_one(re)?, im: parse_one(im)? })
    }

    /// `exp(2 pi i k / n)`. Quarter turns are produced exactly.
    pub fn root_of_unity(k: u64, n: u64, prec: u32) -> Self {
        assert!(n > 0, "root of unity of order zero");
        let k = k % n;
        if (4 * k) % n == 0 {
            let (re, im) = match 4 * k / n {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            return Self::from_f64(re, im, prec);
        }
        // Extra bits so the rounded angle does not dominate the error.
        let work = prec + 32;
        let mut angle = Float::with_val(work, Constant::Pi) * 2u32;
        angle *= Float::with_val(work, k);
        angle /= Float::with_val(work, n);
        let (sin, cos) = angle.sin_cos(Float::new(work));
        Self { re: Float::with_val(prec, cos), im: Float::with_val(prec, sin) }
    }

    /// `exp(x)` as a real coefficient, with `x` taken exactly from the f64.
    pub fn exp_real(x: f64, prec: u32) -> Self {
        Self { re: Float::with_val(prec, x).exp(), im: Float::new(prec) }
    }

    pub fn precision(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.precision();
        let mut n = Float::with_val(prec, self.re.square_ref());
        n += Float::with_val(prec, self.im.square_ref());
        n
    }

    /// Natural log of the modulus, computed at working precision and
    /// rounded to f64. Returns `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        (self.norm_sqr().ln() / 2u32).to_f64()
    }

    pub fn arg(&self) -> f64 {
        let prec = self.precision();
        Float::with_val(prec, self.im.atan2_ref(&self.re)).to_f64()
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn neg(&self) -> Self {
        Self { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.precision().max(other.precision());
        Self {
            re: Float::with_val(prec, &self.re + &other.re),
            im: Float::with_val(prec, &self.im + &other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.precision().max(other.precision()));
        out.add_product(self, other);
        out
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        let prec = self.precision();
        let mut t = Float::with_val(prec, &a.re * &b.re);
        self.re += &t;
        t.assign(&a.im * &b.im);
        self.re -= &t;
        t.assign(&a.re * &b.im);
        self.im += &t;
        t.assign(&a.im * &b.re);
        self.im += &t;
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        let prec = self.precision();
        Self {
            re: Float::with_val(prec, &self.re / &n),
            im: -Float::with_val(prec, &self.im / &n),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.precision());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale(&self, factor: &Float) -> Self {
        let prec = self.precision();
        Self {
            re: Float::with_val(prec, &self.re * factor),
            im: Float::with_val(prec, &self.im * factor),
        }
    }

    /// Modulus as an arbitrary-precision float.
    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// Shortest decimal rendering that parses back to the same value at
    /// this precision.
    pub fn component_strings(&self) -> (String, String) {
        (decimal_string(&self.re), decimal_string(&self.im))
    }
}

fn decimal_string(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if x.is_integer() && x.clone().abs() < Float::with_val(64, 2u64.pow(53)) {
        return format!("{}", x.to_f64() as i64);
    }
    // ceil(prec * log10(2)) + 1 significant digits always round-trip; search
    // for the shortest digit count that still does.
    let prec = x.prec();
    let round_trips = |digits: usize| {
        let s = x.to_string_radix(10, Some(digits));
        Float::parse(&s).map(|p| Float::with_val(prec, p) == *x).unwrap_or(false)
    };
    let (mut lo, mut hi) = (1usize, (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if round_trips(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    x.to_string_radix(10, Some(hi))
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.to_complex64();
        write!(f, "({} {:+}i)", c.re, c.im)
    }
}

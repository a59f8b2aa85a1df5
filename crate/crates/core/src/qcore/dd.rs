//! Double-double arithmetic and compensated accumulation.
//!
//! A [`DoubleDouble`] stores an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand. Only the handful of operations the
//! series loops need are provided.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::context::Precision;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// `1 - x`, exact in the sense of double-double.
    #[inline]
    pub fn one_minus(x: DoubleDouble) -> Self {
        DoubleDouble::ONE - x
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * DoubleDouble::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * DoubleDouble::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}

/// Arithmetic shared by `f64` and [`DoubleDouble`] so loops can be written once.
pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn of(x: f64) -> Self;
    fn val(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
    #[inline]
    fn val(self) -> f64 {
        self
    }
}

impl Real for DoubleDouble {
    #[inline]
    fn of(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    #[inline]
    fn val(self) -> f64 {
        self.to_f64()
    }
}

/// Running sum that is either Neumaier-compensated (standard mode) or
/// accumulated in double-double (extended mode).
#[derive(Debug, Clone, Copy)]
pub struct Accumulator {
    precision: Precision,
    sum: f64,
    comp: f64,
    dd: DoubleDouble,
}

impl Accumulator {
    pub fn new(precision: Precision) -> Self {
        Accumulator {
            precision,
            sum: 0.0,
            comp: 0.0,
            dd: DoubleDouble::ZERO,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        match self.precision {
            Precision::Standard => {
                let t = self.sum + x;
                if self.sum.abs() >= x.abs() {
                    self.comp += (self.sum - t) + x;
                } else {
                    self.comp += (x - t) + self.sum;
                }
                self.sum = t;
            }
            Precision::Extended => self.dd = self.dd + DoubleDouble::from_f64(x),
        }
    }

    #[inline]
    pub fn add_dd(&mut self, x: DoubleDouble) {
        match self.precision {
            Precision::Standard => {
                self.add(x.hi);
                self.add(x.lo);
            }
            Precision::Extended => self.dd = self.dd + x,
        }
    }

    pub fn value(&self) -> f64 {
        match self.precision {
            Precision::Standard => self.sum + self.comp,
            Precision::Extended => self.dd.to_f64(),
        }
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Accumulator::new(Precision::Standard);
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

//! Positive reals stored by their base-2 logarithm.
//!
//! Every partial product `M_i^n` of a weight sequence is a [`Log2Value`]. When all
//! weights are powers of two the logarithm is an integer and every product identity
//! becomes integer arithmetic; otherwise the logarithm is carried as an `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// The positive real `2^e` (exact integer `e`) or `2^v` (floating `v`).
///
/// Equality and ordering compare the represented reals, so `Exact(1) == Float(1.0)`.
/// Mixing the two kinds in arithmetic yields `Float`; an exact value never turns
/// into a float on its own.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Log2Value {
    Exact(i64),
    Float(f64),
}

impl Log2Value {
    pub const ONE: Log2Value = Log2Value::Exact(0);

    pub fn is_exact(&self) -> bool {
        matches!(self, Log2Value::Exact(_))
    }

    /// Integer exponent, if exact.
    pub fn exponent(&self) -> Option<i64> {
        match *self {
            Log2Value::Exact(e) => Some(e),
            Log2Value::Float(_) => None,
        }
    }

    pub fn log2(&self) -> f64 {
        match *self {
            Log2Value::Exact(e) => e as f64,
            Log2Value::Float(v) => v,
        }
    }

    /// The represented real. Exact values are exact powers of two (or 0 / inf when
    /// outside the `f64` range).
    pub fn value(&self) -> f64 {
        self.scale(1.0)
    }

    /// `x * 2^self`, exact for dyadic values while the result stays in range.
    pub fn scale(&self, x: f64) -> f64 {
        match *self {
            Log2Value::Exact(e) => mul_pow2(x, e),
            Log2Value::Float(v) => x * v.exp2(),
        }
    }

    /// `x / 2^self`.
    pub fn divide(&self, x: f64) -> f64 {
        (-*self).scale(x)
    }

    pub fn recip(self) -> Self {
        -self
    }

    /// `self^k`, i.e. the logarithm times `k`.
    pub fn powi(self, k: i64) -> Option<Self> {
        match self {
            Log2Value::Exact(e) => e.checked_mul(k).map(Log2Value::Exact),
            Log2Value::Float(v) => Some(Log2Value::Float(v * k as f64)),
        }
    }

    /// Multiplication of the underlying reals.
    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        match (self, rhs) {
            (Log2Value::Exact(a), Log2Value::Exact(b)) => a.checked_add(b).map(Log2Value::Exact),
            (a, b) => Some(Log2Value::Float(a.log2() + b.log2())),
        }
    }

    /// Division of the underlying reals.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        match (self, rhs) {
            (Log2Value::Exact(a), Log2Value::Exact(b)) => a.checked_sub(b).map(Log2Value::Exact),
            (a, b) => Some(Log2Value::Float(a.log2() - b.log2())),
        }
    }

    /// Absolute difference of logarithms.
    pub fn log2_distance(&self, other: &Self) -> f64 {
        match (*self, *other) {
            (Log2Value::Exact(a), Log2Value::Exact(b)) => a.abs_diff(b) as f64,
            (a, b) => (a.log2() - b.log2()).abs(),
        }
    }

    /// Equality within `tol` in log2; zero tolerance for two exact values.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (*self, *other) {
            (Log2Value::Exact(a), Log2Value::Exact(b)) => a == b,
            _ => self.log2_distance(other) <= tol,
        }
    }
}

/// `x * 2^e` without intermediate overflow for large `|e|`.
fn mul_pow2(mut x: f64, mut e: i64) -> f64 {
    const STEP: i64 = 1000;
    while e > STEP {
        x *= 2f64.powi(STEP as i32);
        e -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP as i32);
        e += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Default for Log2Value {
    fn default() -> Self {
        Log2Value::ONE
    }
}

impl PartialEq for Log2Value {
    fn eq(&self, other: &Self) -> bool {
        match (*self, *other) {
            (Log2Value::Exact(a), Log2Value::Exact(b)) => a == b,
            (a, b) => a.log2() == b.log2(),
        }
    }
}

impl PartialOrd for Log2Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (*self, *other) {
            (Log2Value::Exact(a), Log2Value::Exact(b)) => Some(a.cmp(&b)),
            (a, b) => a.log2().partial_cmp(&b.log2()),
        }
    }
}

impl Add for Log2Value {
    type Output = Log2Value;

    /// Product of the underlying reals. Panics on exponent overflow.
    fn add(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("log2 exponent overflow")
    }
}

impl Sub for Log2Value {
    type Output = Log2Value;

    fn sub(self, rhs: Self) -> Self {
        self.checked_div(rhs).expect("log2 exponent overflow")
    }
}

impl Neg for Log2Value {
    type Output = Log2Value;

    fn neg(self) -> Self {
        match self {
            Log2Value::Exact(e) => Log2Value::Exact(-e),
            Log2Value::Float(v) => Log2Value::Float(-v),
        }
    }
}

impl fmt::Display for Log2Value {
    /// Prints the logarithm: an integer for exact values.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Log2Value::Exact(e) => write!(f, "{e}"),
            Log2Value::Float(v) => write!(f, "{v:?}"),
        }
    }
}

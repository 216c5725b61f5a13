//! Forward-mode automatic differentiation.
//!
//! A Jacobian column is obtained by evaluating the expression tree once with
//! the matching coordinate seeded to `dot = 1`; an n-dimensional field needs
//! n passes and no allocation per node.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Numeric type the expression evaluator is generic over.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    /// The primal value, used for domain checks.
    fn value(self) -> f64;
    fn powi(self, k: i32) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn constant(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

/// A dual number `val + dot·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub val: f64,
    pub dot: f64,
}

impl Dual {
    #[inline]
    pub fn new(val: f64, dot: f64) -> Self {
        Self { val, dot }
    }

    /// An independent variable (derivative 1).
    #[inline]
    pub fn var(val: f64) -> Self {
        Self { val, dot: 1.0 }
    }
}

impl Add for Dual {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.val + rhs.val, self.dot + rhs.dot)
    }
}

impl Sub for Dual {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.val - rhs.val, self.dot - rhs.dot)
    }
}

impl Mul for Dual {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.val * rhs.val, self.dot * rhs.val + self.val * rhs.dot)
    }
}

impl Div for Dual {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = 1.0 / rhs.val;
        Self::new(
            self.val * inv,
            (self.dot * rhs.val - self.val * rhs.dot) * inv * inv,
        )
    }
}

impl Neg for Dual {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.val, -self.dot)
    }
}

impl Scalar for Dual {
    #[inline]
    fn constant(v: f64) -> Self {
        Self::new(v, 0.0)
    }
    #[inline]
    fn value(self) -> f64 {
        self.val
    }
    #[inline]
    fn powi(self, k: i32) -> Self {
        match k {
            0 => Self::new(1.0, 0.0),
            _ => Self::new(self.val.powi(k), self.dot * k as f64 * self.val.powi(k - 1)),
        }
    }
    #[inline]
    fn sin(self) -> Self {
        Self::new(self.val.sin(), self.dot * self.val.cos())
    }
    #[inline]
    fn cos(self) -> Self {
        Self::new(self.val.cos(), -self.dot * self.val.sin())
    }
    #[inline]
    fn exp(self) -> Self {
        let e = self.val.exp();
        Self::new(e, self.dot * e)
    }
    #[inline]
    fn sqrt(self) -> Self {
        let s = self.val.sqrt();
        Self::new(s, self.dot / (2.0 * s))
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.val.is_finite() && self.dot.is_finite()
    }
}

//! Scalar abstractions.
//!
//! Two traits split the numeric surface:
//!
//! * [`Scalar`] is the minimal field-with-elementary-functions interface that
//!   expression evaluation and closed-form metric components are written
//!   against. It is implemented for every floating point type and for
//!   [`Dual`] numbers over any `Scalar`, so nesting `Dual<Dual<f64>>` yields
//!   exact second derivatives.
//! * [`Real`] is the concrete field the geometry is computed in (`f32` or
//!   `f64`).

use std::fmt::{self, Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Arithmetic plus the closed set of elementary functions used by the
/// expression language.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    /// Real part, projected all the way down to `f64`.
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn powi(self, n: i32) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl<T> Scalar for T
where
    T: Float + FromPrimitive + ToPrimitive + Debug,
{
    #[inline]
    fn from_f64(x: f64) -> Self {
        <T as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }
    #[inline]
    fn value(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
    #[inline]
    fn sin(self) -> Self {
        Float::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        Float::cos(self)
    }
    #[inline]
    fn tan(self) -> Self {
        Float::tan(self)
    }
    #[inline]
    fn exp(self) -> Self {
        Float::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        Float::ln(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        Float::sqrt(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        Float::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        Float::cosh(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        Float::powi(self, n)
    }
}

/// Floating point field used for all geometric computation.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Base step for central differences: `1e-5` in double precision,
    /// `cbrt(eps)` for coarser types.
    fn fd_base_step() -> Self {
        let eps = Self::epsilon().as_f64();
        if eps < 1e-12 {
            Self::lit(1e-5)
        } else {
            Self::lit(eps.cbrt())
        }
    }

    /// Central-difference step for a coordinate of magnitude `|x|`.
    fn fd_step(x: Self) -> Self {
        Self::fd_base_step() * Float::max(Self::one(), Float::abs(x))
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Sum
        + AddAssign
        + SubAssign
        + MulAssign
        + Send
        + Sync
        + 'static
{
}

/// First-order dual number `re + eps·ε` with `ε² = 0`.
#[derive(Clone, Copy, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub eps: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(re: S, eps: S) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: S) -> Self {
        Dual { re, eps: S::zero() }
    }

    /// Independent variable seeded with unit tangent.
    pub fn variable(re: S) -> Self {
        Dual { re, eps: S::one() }
    }
}

impl<S: Debug> Debug for Dual<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}ε", self.re, self.eps)
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q = self.re / rhs.re;
        Dual::new(q, (self.eps - q * rhs.eps) / rhs.re)
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    fn from_f64(x: f64) -> Self {
        Dual::constant(S::from_f64(x))
    }
    fn value(self) -> f64 {
        self.re.value()
    }
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.eps * self.re.cos())
    }
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.eps * self.re.sin()))
    }
    fn tan(self) -> Self {
        let t = self.re.tan();
        Dual::new(t, self.eps * (S::one() + t * t))
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.eps * e)
    }
    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.eps / self.re)
    }
    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        Dual::new(r, self.eps / (S::from_f64(2.0) * r))
    }
    fn sinh(self) -> Self {
        Dual::new(self.re.sinh(), self.eps * self.re.cosh())
    }
    fn cosh(self) -> Self {
        Dual::new(self.re.cosh(), self.eps * self.re.sinh())
    }
    fn powi(self, n: i32) -> Self {
        match n {
            0 => Dual::constant(S::one()),
            _ => {
                let lower = self.re.powi(n - 1);
                Dual::new(lower * self.re, self.eps * S::from_f64(n as f64) * lower)
            }
        }
    }
}

/// Derivative of a scalar function of one variable at `x`.
pub fn derivative<S, F>(f: F, x: S) -> S
where
    S: Scalar,
    F: Fn(Dual<S>) -> Dual<S>,
{
    f(Dual::variable(x)).eps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let d = derivative(|x| x * x * x, 2.0_f64);
        assert_eq!(d, 12.0);
    }

    #[test]
    fn nested_duals_give_second_derivative() {
        // d²/dx² sin(x) = -sin(x)
        let x = 0.7_f64;
        let inner = Dual::new(Dual::variable(x), Dual::constant(1.0));
        let y = Scalar::sin(inner);
        assert!((y.eps.eps + x.sin()).abs() < 1e-15);
        assert!((y.eps.re - x.cos()).abs() < 1e-15);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = Dual::variable(1.3_f64);
        let a = x.powi(4);
        let b = x * x * x * x;
        assert!((a.re - b.re).abs() < 1e-14);
        assert!((a.eps - b.eps).abs() < 1e-13);
        let z = x.powi(-2);
        assert!((z.eps + 2.0 / 1.3_f64.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn fd_step_scales_with_magnitude() {
        assert_eq!(f64::fd_step(0.5), 1e-5);
        assert!((f64::fd_step(-3.0) - 3e-5).abs() < 1e-20);
        assert!(f32::fd_base_step() > 1e-3);
    }
}

//! The numeric abstraction shared by the exact and Monte Carlo lanes.
//!
//! Exact computations run over arbitrary-precision rationals ([`Rat`]) so
//! that guarantee inequalities can be compared with zero tolerance; Monte
//! Carlo computations run over `f64`. Everything downstream of a weight
//! assignment (greedy bases, remainders, thresholds, traces) is generic
//! over [`Scalar`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};

/// Arbitrary-precision rational, the exact-lane scalar.
pub type Rat = BigRational;

pub trait Scalar:
    Clone
    + PartialOrd
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_usize(n: usize) -> Self;
    /// Exact for `f64`; shortest lossy conversion for rationals.
    fn to_f64_lossy(&self) -> f64;
    fn is_negative(&self) -> bool;

    fn half(self) -> Self {
        self / Self::from_usize(2)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as num_traits::One>::one()
    }
    fn from_usize(n: usize) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Builds the exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion of a finite `f64` (every finite double is a dyadic
/// rational). Errors on NaN/infinities.
pub fn rat_from_f64(x: f64) -> crate::Result<Rat> {
    Rat::from_f64(x).ok_or_else(|| crate::Error::input(format!("non-finite value {x}")))
}

/// A selection threshold: finite, or the sentinel that forces rejection of
/// an element whose acceptance would be infeasible.
#[derive(Clone, Debug, PartialEq)]
pub enum Threshold<W> {
    Finite(W),
    Unbounded,
}

impl<W: Scalar> Threshold<W> {
    /// Acceptance test: weak inequality, so a weight equal to the threshold
    /// is accepted. The unbounded sentinel rejects everything.
    pub fn accepts(&self, weight: &W) -> bool {
        match self {
            Threshold::Finite(t) => weight >= t,
            Threshold::Unbounded => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Threshold::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&W> {
        match self {
            Threshold::Finite(t) => Some(t),
            Threshold::Unbounded => None,
        }
    }

    pub fn to_f64_lossy(&self) -> f64 {
        match self {
            Threshold::Finite(t) => t.to_f64_lossy(),
            Threshold::Unbounded => f64::INFINITY,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(W) -> U) -> Threshold<U> {
        match self {
            Threshold::Finite(t) => Threshold::Finite(f(t)),
            Threshold::Unbounded => Threshold::Unbounded,
        }
    }
}

/// Sums weights of a set under an assignment.
pub fn set_weight<W: Scalar>(weights: &[W], s: crate::ElemSet) -> W {
    let mut total = W::zero();
    for id in s.iter() {
        total += weights[id].clone();
    }
    total
}

/// Mean and standard error of a sample.
pub fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_accept_is_weak_inequality() {
        let t = Threshold::Finite(rat(3, 2));
        assert!(t.accepts(&rat(3, 2)));
        assert!(t.accepts(&rat(2, 1)));
        assert!(!t.accepts(&rat(1, 1)));
        assert!(!Threshold::<Rat>::Unbounded.accepts(&rat(1000, 1)));
    }

    #[test]
    fn rational_from_f64_is_exact_for_dyadics() {
        assert_eq!(rat_from_f64(0.5).unwrap(), rat(1, 2));
        assert_eq!(rat_from_f64(0.75).unwrap(), rat(3, 4));
        assert!(rat_from_f64(f64::NAN).is_err());
    }
}

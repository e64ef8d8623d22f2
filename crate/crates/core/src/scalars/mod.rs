//! Exact coefficient rings and linear algebra over them.
//!
//! Everything above this module is generic over [`Scalar`]. Two rings
//! implement it: [`GaussianRational`] (the field ℚ(i), used for all concrete
//! forms) and [`ParamPolynomial`] (polynomials over ℚ(i) in named real
//! parameters, used when a quantity must be certified to vanish
//! identically).

mod gaussian;
pub mod linalg;
mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use gaussian::GaussianRational;
pub use linalg::{in_span, solve_linear, AffineSolution, Matrix};
pub use poly::{poly_is_zero, ParamPolynomial};

/// Outcome of asking a ring element to serve as an elimination pivot.
#[derive(Clone, Debug, PartialEq)]
pub enum Pivot<S> {
    Zero,
    Invertible(S),
    /// Nonzero, but vanishes somewhere on parameter space.
    Ambiguous,
}

/// An exact commutative ring with conjugation.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_gaussian(g: GaussianRational) -> Self;
    fn pivot(&self) -> Pivot<Self>;

    fn from_integer(n: i64) -> Self {
        Self::from_gaussian(GaussianRational::from_integer(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Image in 𝔽_p, for a fixed prime p ≡ 1 mod 4 and i ↦ √−1, when the
    /// denominators are prime to p. Lets elimination pick rows cheaply.
    fn residue(&self) -> Option<u64> {
        None
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }

    fn one() -> Self {
        GaussianRational::one()
    }

    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }

    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }

    fn from_gaussian(g: GaussianRational) -> Self {
        g
    }

    fn pivot(&self) -> Pivot<Self> {
        match self.inv() {
            Some(inv) => Pivot::Invertible(inv),
            None => Pivot::Zero,
        }
    }

    fn is_one(&self) -> bool {
        GaussianRational::is_one(self)
    }

    fn residue(&self) -> Option<u64> {
        GaussianRational::residue(self)
    }
}

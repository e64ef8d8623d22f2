use std::fmt;
use std::ops::{Add, Sub};

use super::blade::Blade;
use super::graded::{check_dims, evaluate, interior, Form, Polyvector};
use crate::error::Result;
use crate::scalars::{GaussianRational, Scalar};

/// `X + ξ` in `(T ⊕ T*) ⊗ ℂ`, with `X` a vector and `ξ` a covector.
#[derive(Clone, PartialEq)]
pub struct GeneralizedSection<S = GaussianRational> {
    vec: Polyvector<S>,
    cov: Form<S>,
}

impl<S: Scalar> GeneralizedSection<S> {
    pub fn new(vec: Polyvector<S>, cov: Form<S>) -> Result<Self> {
        check_dims(vec.dim(), cov.dim())?;
        vec.expect_degree(1, "section vector part must be a vector")?;
        cov.expect_degree(1, "section covector part must be a 1-form")?;
        Ok(GeneralizedSection { vec, cov })
    }

    pub fn zero(dim: usize) -> Self {
        GeneralizedSection { vec: Polyvector::zero(dim), cov: Form::zero(dim) }
    }

    pub fn from_vector(vec: Polyvector<S>) -> Result<Self> {
        let dim = vec.dim();
        Self::new(vec, Form::zero(dim))
    }

    pub fn from_covector(cov: Form<S>) -> Result<Self> {
        let dim = cov.dim();
        Self::new(Polyvector::zero(dim), cov)
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }

    pub fn vector(&self) -> &Polyvector<S> {
        &self.vec
    }

    pub fn covector(&self) -> &Form<S> {
        &self.cov
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero() && self.cov.is_zero()
    }

    /// Coordinates `(X¹, …, Xᴺ, ξ₁, …, ξ_N)`.
    pub fn coords(&self) -> Vec<S> {
        let mut out = self.vec.coords(1);
        out.extend(self.cov.coords(1));
        out
    }

    pub fn from_coords(dim: usize, coords: &[S]) -> Self {
        assert_eq!(coords.len(), 2 * dim, "section coordinate length");
        GeneralizedSection {
            vec: Polyvector::from_coords(dim, 1, &coords[..dim]),
            cov: Form::from_coords(dim, 1, &coords[dim..]),
        }
    }

    /// The `k`-th basis section: `∂_{k+1}` for `k < dim`, else `e_{k+1-dim}`.
    pub fn basis(dim: usize, k: usize) -> Self {
        if k < dim {
            GeneralizedSection { vec: Polyvector::generator(dim, k + 1), cov: Form::zero(dim) }
        } else {
            GeneralizedSection { vec: Polyvector::zero(dim), cov: Form::generator(dim, k + 1 - dim) }
        }
    }

    pub fn conj(&self) -> Self {
        GeneralizedSection { vec: self.vec.conj(), cov: self.cov.conj() }
    }

    pub fn scale(&self, s: &S) -> Self {
        GeneralizedSection { vec: self.vec.scale(s), cov: self.cov.scale(s) }
    }

    /// `(X + ξ)·a = i_X a + ξ ∧ a`.
    pub fn clifford_act(&self, a: &Form<S>) -> Result<Form<S>> {
        check_dims(self.dim(), a.dim())?;
        Ok(&interior(&self.vec, a)? + &self.cov.wedge(a)?)
    }

    /// `⟨X+ξ, Y+η⟩ = ½(ξ(Y) + η(X))`.
    pub fn inner_product(&self, other: &Self) -> Result<S> {
        check_dims(self.dim(), other.dim())?;
        let half = S::from_gaussian(GaussianRational::from_ratio(1, 2));
        let s = evaluate(&self.cov, &other.vec)? + &evaluate(&other.cov, &self.vec)?;
        Ok(s * &half)
    }

    /// `ξ(X)`, the scalar `i_X ξ`.
    pub fn self_pairing(&self) -> S {
        interior(&self.vec, &self.cov).map(|f| f.coeff(Blade::UNIT)).unwrap_or_else(|_| S::zero())
    }
}

impl<'a, 'b, S: Scalar> Add<&'b GeneralizedSection<S>> for &'a GeneralizedSection<S> {
    type Output = GeneralizedSection<S>;
    fn add(self, o: &'b GeneralizedSection<S>) -> GeneralizedSection<S> {
        GeneralizedSection { vec: &self.vec + &o.vec, cov: &self.cov + &o.cov }
    }
}

impl<'a, 'b, S: Scalar> Sub<&'b GeneralizedSection<S>> for &'a GeneralizedSection<S> {
    type Output = GeneralizedSection<S>;
    fn sub(self, o: &'b GeneralizedSection<S>) -> GeneralizedSection<S> {
        GeneralizedSection { vec: &self.vec - &o.vec, cov: &self.cov - &o.cov }
    }
}

impl<S: Scalar> fmt::Display for GeneralizedSection<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.vec.is_zero(), self.cov.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.vec),
            (true, false) => write!(f, "{}", self.cov),
            (false, false) => write!(f, "{} + {}", self.vec, self.cov),
        }
    }
}

impl<S: Scalar> fmt::Debug for GeneralizedSection<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Section({self})")
    }
}

/// Free-function form of [`GeneralizedSection::clifford_act`].
pub fn clifford_act<S: Scalar>(s: &GeneralizedSection<S>, a: &Form<S>) -> Result<Form<S>> {
    s.clifford_act(a)
}

/// Free-function form of [`GeneralizedSection::inner_product`].
pub fn inner_product<S: Scalar>(s: &GeneralizedSection<S>, t: &GeneralizedSection<S>) -> Result<S> {
    s.inner_product(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = GaussianRational;

    fn e(idx: &[usize]) -> Form {
        Form::monomial(3, idx, G::one()).unwrap()
    }

    fn d(k: usize) -> Polyvector {
        Polyvector::generator(3, k)
    }

    fn sec(v: Polyvector, c: Form) -> GeneralizedSection {
        GeneralizedSection::new(v, c).unwrap()
    }

    #[test]
    fn clifford_examples() {
        let s = sec(d(1), e(&[3]));
        // i_{∂1}e12 = e2, e3∧e12 = e123
        assert_eq!(s.clifford_act(&e(&[1, 2])).unwrap(), &e(&[2]) + &e(&[1, 2, 3]));
        let t = sec(d(1), e(&[1]));
        let twice = t.clifford_act(&t.clifford_act(&e(&[2])).unwrap()).unwrap();
        assert_eq!(twice, e(&[2]));
        assert_eq!(t.inner_product(&t).unwrap(), G::one());
        let u = GeneralizedSection::from_covector(e(&[1])).unwrap();
        assert!(u.clifford_act(&e(&[1])).unwrap().is_zero());
    }

    #[test]
    fn inner_product_examples() {
        let x = GeneralizedSection::from_vector(d(1)).unwrap();
        let y = GeneralizedSection::from_covector(e(&[1])).unwrap();
        assert_eq!(x.inner_product(&y).unwrap(), G::from_ratio(1, 2));
        let z = GeneralizedSection::from_covector(e(&[2])).unwrap();
        assert!(x.inner_product(&z).unwrap().is_zero());
        assert!(x.inner_product(&x).unwrap().is_zero());
    }

    #[test]
    fn rejects_higher_degree_parts() {
        assert!(GeneralizedSection::new(Polyvector::monomial(3, &[1, 2], G::one()).unwrap(), Form::zero(3)).is_err());
        assert!(GeneralizedSection::<G>::new(Polyvector::zero(3), Form::one(3)).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let s = sec(&d(1) - &d(3), e(&[2]).scale(&G::i()));
        assert_eq!(GeneralizedSection::from_coords(3, &s.coords()), s);
        assert_eq!(GeneralizedSection::<G>::basis(3, 4).covector(), &e(&[2]));
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, BitXor, Neg, Sub};

use super::blade::{blades_of_grade, contraction_sign, index_label, wedge_sign, Blade, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalars::{GaussianRational, Scalar};

/// Marker distinguishing forms (blades of `e_i`) from polyvectors (blades
/// of `∂_i`).
pub trait Kind {
    const SYMBOL: &'static str;
}

#[derive(Debug)]
pub enum FormKind {}

#[derive(Debug)]
pub enum VectorKind {}

impl Kind for FormKind {
    const SYMBOL: &'static str = "e";
}

impl Kind for VectorKind {
    const SYMBOL: &'static str = "∂";
}

/// A sparse mixed-degree element of the exterior algebra on an
/// `dim`-dimensional space. Zero coefficients are never stored.
pub struct Graded<K, S = GaussianRational> {
    dim: usize,
    terms: BTreeMap<Blade, S>,
    kind: PhantomData<fn() -> K>,
}

pub type Form<S = GaussianRational> = Graded<FormKind, S>;
pub type Polyvector<S = GaussianRational> = Graded<VectorKind, S>;

impl<K, S: Clone> Clone for Graded<K, S> {
    fn clone(&self) -> Self {
        Graded { dim: self.dim, terms: self.terms.clone(), kind: PhantomData }
    }
}

impl<K, S: PartialEq> PartialEq for Graded<K, S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.terms == other.terms
    }
}

impl<K, S: Eq> Eq for Graded<K, S> {}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a, found: b })
    }
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

impl<K, S: Scalar> Graded<K, S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Graded { dim, terms: BTreeMap::new(), kind: PhantomData }
    }

    pub fn scalar(dim: usize, c: S) -> Self {
        Self::from_terms(dim, [(Blade::UNIT, c)])
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    /// `e_index` (or `∂_index`), 1-based.
    pub fn generator(dim: usize, index: usize) -> Self {
        assert!((1..=dim).contains(&index), "generator {index} outside 1..={dim}");
        Self::from_terms(dim, [(Blade::generator(index), S::one())])
    }

    /// `c · e_{i1} ∧ … ∧ e_{ip}` for an arbitrary index list.
    pub fn monomial(dim: usize, indices: &[usize], c: S) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > dim) {
            return Err(Error::Parse(format!("index {bad} outside 1..={dim}")));
        }
        Ok(match Blade::from_indices(indices)? {
            None => Self::zero(dim),
            Some((b, odd)) => Self::from_terms(dim, [(b, if odd { -c } else { c })]),
        })
    }

    /// Sums the given terms, merging repeated blades and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Blade, S)>>(dim: usize, terms: I) -> Self {
        let mut out = Self::zero(dim);
        for (b, c) in terms {
            debug_assert!(b.max_index() <= dim);
            out.add_term(b, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, b: Blade, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&b) {
            Some(old) => {
                let sum = old + &c;
                if !sum.is_zero() {
                    self.terms.insert(b, sum);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, b: Blade) -> S {
        self.terms.get(&b).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The grade-`k` part.
    pub fn grade(&self, k: usize) -> Self {
        Self::from_terms(
            self.dim,
            self.terms.iter().filter(|(b, _)| b.grade() == k).map(|(b, c)| (*b, c.clone())),
        )
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(|b| b.grade()).min()
    }

    pub fn highest_degree(&self) -> Option<usize> {
        self.terms.keys().map(|b| b.grade()).max()
    }

    /// `Some(k)` when every term has grade `k` (the zero element has none).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let lo = self.lowest_degree()?;
        (self.highest_degree() == Some(lo)).then_some(lo)
    }

    pub(crate) fn expect_degree(&self, k: usize, what: &'static str) -> Result<()> {
        if self.terms.keys().all(|b| b.grade() == k) {
            Ok(())
        } else {
            Err(Error::NotHomogeneous(what))
        }
    }

    /// Coefficient of the top blade `e_{1…dim}`.
    pub fn top_coefficient(&self) -> S {
        self.coeff(Blade::top(self.dim))
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.conj() == *c)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Graded<K, T> {
        Graded::from_terms(self.dim, self.terms.iter().map(|(b, c)| (*b, f(c))))
    }

    /// Coordinates of the grade-`k` part in the lexicographic blade order
    /// of [`blades_of_grade`].
    pub fn coords(&self, k: usize) -> Vec<S> {
        blades_of_grade(self.dim, k).into_iter().map(|b| self.coeff(b)).collect()
    }

    pub fn from_coords(dim: usize, k: usize, coords: &[S]) -> Self {
        let blades = blades_of_grade(dim, k);
        assert_eq!(blades.len(), coords.len(), "coordinate vector length");
        Self::from_terms(dim, blades.into_iter().zip(coords.iter().cloned()))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let c = ca.clone() * cb;
                    out.add_term(a.union(*b), if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `a ∧ a ∧ … ∧ a` (`k` factors); `a^0 = 1`.
    pub fn wedge_pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc ^ self;
        }
        acc
    }

    /// The wedge exponential `Σ aᵏ/k!`, a finite sum for elements with no
    /// degree-0 part and only even degrees.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.keys().any(|b| b.grade() == 0 || b.grade() % 2 == 1) {
            return Err(Error::ValidationFailed(
                "exponential needs a purely even form without constant term".into(),
            ));
        }
        let mut out = Self::one(self.dim);
        let mut power = Self::one(self.dim);
        let mut k = 0;
        loop {
            power = &power ^ self;
            k += 1;
            if power.is_zero() {
                return Ok(out);
            }
            let inv = S::from_gaussian(GaussianRational::from_ratio(1, factorial(k)));
            out = &out + &power.scale(&inv);
        }
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        check_dims(self.dim, other.dim).expect("exterior algebra dimensions differ");
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, if negate { -c.clone() } else { c.clone() });
        }
        out
    }
}

impl<'a, 'b, K, S: Scalar> Add<&'b Graded<K, S>> for &'a Graded<K, S> {
    type Output = Graded<K, S>;
    fn add(self, o: &'b Graded<K, S>) -> Graded<K, S> {
        self.combine(o, false)
    }
}

impl<'a, 'b, K, S: Scalar> Sub<&'b Graded<K, S>> for &'a Graded<K, S> {
    type Output = Graded<K, S>;
    fn sub(self, o: &'b Graded<K, S>) -> Graded<K, S> {
        self.combine(o, true)
    }
}

impl<K, S: Scalar> Add for Graded<K, S> {
    type Output = Graded<K, S>;
    fn add(self, o: Graded<K, S>) -> Graded<K, S> {
        &self + &o
    }
}

impl<K, S: Scalar> Sub for Graded<K, S> {
    type Output = Graded<K, S>;
    fn sub(self, o: Graded<K, S>) -> Graded<K, S> {
        &self - &o
    }
}

impl<'a, K, S: Scalar> Neg for &'a Graded<K, S> {
    type Output = Graded<K, S>;
    fn neg(self) -> Graded<K, S> {
        self.map(|c| -c.clone())
    }
}

impl<K, S: Scalar> Neg for Graded<K, S> {
    type Output = Graded<K, S>;
    fn neg(self) -> Graded<K, S> {
        -&self
    }
}

/// Wedge product. Panics on a dimension mismatch; use
/// [`Graded::wedge`] for the checked version.
impl<'a, 'b, K, S: Scalar> BitXor<&'b Graded<K, S>> for &'a Graded<K, S> {
    type Output = Graded<K, S>;
    fn bitxor(self, o: &'b Graded<K, S>) -> Graded<K, S> {
        self.wedge(o).expect("exterior algebra dimensions differ")
    }
}

impl<K, S: Scalar> BitXor for Graded<K, S> {
    type Output = Graded<K, S>;
    fn bitxor(self, o: Graded<K, S>) -> Graded<K, S> {
        &self ^ &o
    }
}

/// Interior product `i_v a`. A blade `∂_{j1}∧…∧∂_{jp}` (ascending) acts as
/// `i_{∂_{jp}} ∘ … ∘ i_{∂_{j1}}`, so `i_{X∧Y} = i_Y ∘ i_X`.
pub fn interior<S: Scalar>(v: &Polyvector<S>, a: &Form<S>) -> Result<Form<S>> {
    check_dims(v.dim, a.dim)?;
    let mut out = Form::zero(a.dim);
    for (vb, vc) in &v.terms {
        for (fb, fc) in &a.terms {
            if let Some((rest, neg)) = contraction_sign(*vb, *fb) {
                let c = vc.clone() * fc;
                out.add_term(rest, if neg { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// Full evaluation `a(v)`: the scalar part of `i_v a`. For 1-forms this
/// is `ξ(X)`; for 2-forms `α(X∧Y) = α(X, Y)` with `e_{ij}(∂_i, ∂_j) = 1`.
pub fn evaluate<S: Scalar>(a: &Form<S>, v: &Polyvector<S>) -> Result<S> {
    Ok(interior(v, a)?.coeff(Blade::UNIT))
}

/// `σ(a)`: multiplies the grade-k part by `(-1)^{k(k-1)/2}`.
pub fn sigma<S: Scalar>(a: &Form<S>) -> Form<S> {
    Form::from_terms(
        a.dim,
        a.terms.iter().map(|(b, c)| {
            let k = b.grade();
            if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                (*b, -c.clone())
            } else {
                (*b, c.clone())
            }
        }),
    )
}

/// Top-degree coefficient of `σ(a) ∧ b`. The sign map acts on the first
/// argument.
pub fn mukai_pair<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Result<S> {
    check_dims(a.dim, b.dim)?;
    if a.dim % 2 == 1 {
        return Err(Error::OddDimension(a.dim));
    }
    Ok(top_pairing(&sigma(a), b))
}

/// Top coefficient of `a ∧ b` without forming the full product.
pub fn top_pairing<K, S: Scalar>(a: &Graded<K, S>, b: &Graded<K, S>) -> S {
    let top = Blade::top(a.dim);
    let mut acc = S::zero();
    for (ba, ca) in &a.terms {
        let want = ba.complement(a.dim);
        if let Some(cb) = b.terms.get(&want) {
            let neg = wedge_sign(*ba, want).expect("complementary blades");
            debug_assert_eq!(ba.union(want), top);
            let c = ca.clone() * cb;
            acc = if neg { acc - &c } else { acc + &c };
        }
    }
    acc
}

fn needs_parens(s: &str) -> bool {
    s.char_indices().any(|(k, c)| k > 0 && (c == '+' || c == '-' || c == ' '))
}

impl<K: Kind, S: Scalar> fmt::Display for Graded<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(b, _)| (b.grade(), b.indices()));
        for (k, (b, c)) in ordered.into_iter().enumerate() {
            let coeff = c.to_string();
            let mut term = if b.grade() == 0 {
                coeff
            } else {
                let label = format!("{}{}", K::SYMBOL, index_label(*b));
                match coeff.as_str() {
                    "1" => label,
                    "-1" => format!("-{label}"),
                    s if needs_parens(s) => format!("({s}){label}"),
                    s => format!("{s}·{label}"),
                }
            };
            if k > 0 {
                match term.strip_prefix('-') {
                    Some(rest) => {
                        write!(f, " - ")?;
                        term = rest.to_string();
                    }
                    None => write!(f, " + ")?,
                }
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

impl<K: Kind, S: Scalar> fmt::Debug for Graded<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[dim {}] {}", self.dim, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = GaussianRational;

    fn e(dim: usize, idx: &[usize]) -> Form {
        Form::monomial(dim, idx, G::one()).unwrap()
    }

    fn d(dim: usize, idx: &[usize]) -> Polyvector {
        Polyvector::monomial(dim, idx, G::one()).unwrap()
    }

    fn i() -> G {
        G::i()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(&e(3, &[1]) ^ &e(3, &[2]), e(3, &[1, 2]));
        assert_eq!(&e(3, &[2]) ^ &e(3, &[1]), -e(3, &[1, 2]));
        assert_eq!(e(3, &[3, 1, 2]), e(3, &[1, 2, 3]));
        let p = &e(2, &[1]) + &e(2, &[2]).scale(&i());
        let q = &e(2, &[1]) - &e(2, &[2]).scale(&i());
        assert_eq!(&p ^ &q, e(2, &[1, 2]).scale(&G::from_parts((0, 1), (-2, 1))));
        assert!(e(3, &[1]).wedge(&e(4, &[1])).is_err());
    }

    #[test]
    fn interior_examples() {
        let e12 = e(3, &[1, 2]);
        assert_eq!(interior(&d(3, &[1]), &e12).unwrap(), e(3, &[2]));
        assert_eq!(interior(&d(3, &[2]), &e12).unwrap(), -e(3, &[1]));
        assert!(interior(&d(3, &[3]), &e12).unwrap().is_zero());
        // i_{∂1∧∂2} e12 = i_{∂2} i_{∂1} e12 = 1
        assert_eq!(evaluate(&e12, &d(3, &[1, 2])).unwrap(), G::one());
    }

    #[test]
    fn exp_is_finite() {
        let w = &e(4, &[1, 2]) + &e(4, &[3, 4]);
        let x = w.exp().unwrap();
        let expect = &(&Form::one(4) + &w) + &e(4, &[1, 2, 3, 4]);
        assert_eq!(x, expect);
        assert!(e(4, &[1]).exp().is_err());
    }

    #[test]
    fn mukai_examples() {
        let a = &Form::one(2) + &e(2, &[1, 2]).scale(&i());
        assert_eq!(mukai_pair(&a, &a.conj()).unwrap(), G::from_parts((0, 1), (-2, 1)));
        assert!(mukai_pair(&Form::<G>::one(4), &Form::one(4)).unwrap().is_zero());
        let t = &e(6, &[1]) + &e(6, &[2]).scale(&i());
        assert!(mukai_pair(&t, &t.conj()).unwrap().is_zero());
        assert!(matches!(mukai_pair(&Form::<G>::one(3), &Form::one(3)), Err(Error::OddDimension(3))));
    }

    #[test]
    fn degrees_and_display() {
        let a = &(&Form::<G>::one(6) + &e(6, &[3, 6])) - &e(6, &[1, 2, 4]).scale(&G::from_integer(2));
        assert_eq!(a.lowest_degree(), Some(0));
        assert_eq!(a.highest_degree(), Some(3));
        assert_eq!(a.homogeneous_degree(), None);
        assert_eq!(a.grade(2), e(6, &[3, 6]));
        assert_eq!(a.to_string(), "1 + e36 - 2·e124");
        let b = e(6, &[1]).scale(&"1+i".parse().unwrap());
        assert_eq!(b.to_string(), "(1+i)e1");
        assert_eq!(Form::<G>::zero(2).to_string(), "0");
        assert_eq!(d(3, &[2]).to_string(), "∂2");
    }

    #[test]
    fn coords_round_trip() {
        let a = &e(4, &[1, 3]) - &e(4, &[2, 4]);
        let c = a.coords(2);
        assert_eq!(c.len(), 6);
        assert_eq!(Form::from_coords(4, 2, &c), a);
    }
}

//! Nilpotent Lie algebras given by the differentials of a Malcev basis.
//!
//! An algebra is stored as the list `de_1, …, de_n` of real 2-forms with
//! `de_i ∈ ∧²⟨e_1, …, e_{i-1}⟩`. The bracket on vectors is fixed by
//! `dα(X, Y) = −α([X, Y])`, so `de_k = Σ c e_{ij}` gives
//! `[∂_i, ∂_j] = −Σ c ∂_k`.

mod filtration;
mod notation;

use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exterior::{blades_of_grade, check_dims, evaluate, interior, Blade, Form, GeneralizedSection, Polyvector};
use crate::scalars::{GaussianRational, Matrix, Scalar};

pub use filtration::{nilpotent_degree, Filtration};
pub use notation::{form_from_json, form_to_json, parse_form, parse_form_expr, FormExpr, TermJson};

type G = GaussianRational;

#[derive(Clone, PartialEq)]
pub struct NilAlgebra {
    dim: usize,
    d_gen: Vec<Form>,
}

impl NilAlgebra {
    /// Validates the Malcev staircase, reality of the structure constants
    /// and `d² = 0` on generators.
    pub fn new(d_gen: Vec<Form>) -> Result<Self> {
        let dim = d_gen.len();
        if dim > crate::exterior::MAX_DIM {
            return Err(Error::TooLarge(dim));
        }
        for (k, de) in d_gen.iter().enumerate() {
            check_dims(dim, de.dim())?;
            let i = k + 1;
            if de.terms().any(|(b, _)| b.grade() != 2) {
                return Err(Error::ValidationFailed(format!("de{i} is not a 2-form")));
            }
            if !de.is_real() {
                return Err(Error::NonRealAlgebra);
            }
            if let Some((b, _)) = de.terms().find(|(b, _)| b.max_index() >= i) {
                return Err(Error::ValidationFailed(format!(
                    "de{i} contains e{:?}, outside ∧²⟨e1..e{}⟩",
                    b.indices(),
                    i - 1
                )));
            }
        }
        let g = NilAlgebra { dim, d_gen };
        for i in 1..=dim {
            let dd = g.d(g.de(i))?;
            if !dd.is_zero() {
                return Err(Error::ValidationFailed(format!("d(de{i}) = {dd} ≠ 0")));
            }
        }
        Ok(g)
    }

    /// The abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        NilAlgebra { dim: n, d_gen: vec![Form::zero(n); n] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `de_i`, 1-based.
    pub fn de(&self, i: usize) -> &Form {
        &self.d_gen[i - 1]
    }

    pub fn differentials(&self) -> &[Form] {
        &self.d_gen
    }

    pub fn is_abelian(&self) -> bool {
        self.d_gen.iter().all(Form::is_zero)
    }

    fn d_blade(&self, b: Blade) -> Form {
        let mut out = Form::zero(self.dim);
        for (pos, i) in b.indices().into_iter().enumerate() {
            let de = self.de(i);
            if de.is_zero() {
                continue;
            }
            let rest = Form::from_terms(self.dim, [(b.without(Blade::generator(i)), G::one())]);
            let term = de ^ &rest;
            out = if pos % 2 == 0 { &out + &term } else { &out - &term };
        }
        out
    }

    /// The Chevalley–Eilenberg differential, extended from generators as a
    /// degree +1 antiderivation. Constants are closed.
    pub fn d<S: Scalar>(&self, a: &Form<S>) -> Result<Form<S>> {
        check_dims(self.dim, a.dim())?;
        let mut out = Form::zero(self.dim);
        for (b, c) in a.terms() {
            for (db, dc) in self.d_blade(*b).terms() {
                out.add_term(*db, S::from_gaussian(dc.clone()) * c);
            }
        }
        Ok(out)
    }

    /// Matrix of `d : ∧ᵏ → ∧ᵏ⁺¹` in the lexicographic blade bases.
    pub fn d_matrix(&self, k: usize) -> Matrix<G> {
        let rows = blades_of_grade(self.dim, k + 1).len();
        let cols: Vec<Vec<G>> = blades_of_grade(self.dim, k)
            .into_iter()
            .map(|b| self.d_blade(b).coords(k + 1))
            .collect();
        Matrix::from_columns(rows, &cols)
    }

    pub fn lie_bracket<S: Scalar>(&self, x: &Polyvector<S>, y: &Polyvector<S>) -> Result<Polyvector<S>> {
        check_dims(self.dim, x.dim())?;
        check_dims(self.dim, y.dim())?;
        x.expect_degree(1, "bracket argument")?;
        y.expect_degree(1, "bracket argument")?;
        let xy = x.wedge(y)?;
        let mut out = Polyvector::zero(self.dim);
        for k in 1..=self.dim {
            let de = self.de(k).map(|c| S::from_gaussian(c.clone()));
            let v = evaluate(&de, &xy)?;
            out.add_term(Blade::generator(k), -v);
        }
        Ok(out)
    }

    /// Cartan's formula `𝓛_X = i_X d + d i_X`.
    pub fn lie_derivative<S: Scalar>(&self, x: &Polyvector<S>, a: &Form<S>) -> Result<Form<S>> {
        x.expect_degree(1, "Lie derivative direction")?;
        Ok(&interior(x, &self.d(a)?)? + &self.d(&interior(x, a)?)?)
    }

    /// `[X+ξ, Y+η] = [X,Y] + 𝓛_X η − 𝓛_Y ξ − ½ d(i_X η − i_Y ξ)`.
    pub fn courant_bracket<S: Scalar>(
        &self,
        s: &GeneralizedSection<S>,
        t: &GeneralizedSection<S>,
    ) -> Result<GeneralizedSection<S>> {
        let (x, xi) = (s.vector(), s.covector());
        let (y, eta) = (t.vector(), t.covector());
        let vec = self.lie_bracket(x, y)?;
        let half = S::from_gaussian(G::from_ratio(1, 2));
        let pairing = &interior(x, eta)? - &interior(y, xi)?;
        let correction = self.d(&pairing)?.scale(&half);
        debug_assert!(correction.is_zero(), "invariant pairings are constant");
        let cov = &(&self.lie_derivative(x, eta)? - &self.lie_derivative(y, xi)?) - &correction;
        GeneralizedSection::new(vec, cov)
    }

    /// The bracket on invariant sections after dropping the exact term:
    /// `[X,Y] + i_X dη − i_Y dξ`.
    pub fn courant_bracket_invariant<S: Scalar>(
        &self,
        s: &GeneralizedSection<S>,
        t: &GeneralizedSection<S>,
    ) -> Result<GeneralizedSection<S>> {
        let vec = self.lie_bracket(s.vector(), t.vector())?;
        let cov = &interior(s.vector(), &self.d(t.covector())?)? - &interior(t.vector(), &self.d(s.covector())?)?;
        GeneralizedSection::new(vec, cov)
    }

    pub fn filtration(&self) -> Filtration {
        Filtration::compute(self)
    }

    pub fn nil_index(&self) -> usize {
        self.filtration().nil_index()
    }

    /// Compact tuple notation, or `None` when a coefficient is not an
    /// integer.
    pub fn to_compact(&self) -> Option<String> {
        if self.dim > 9 {
            return None;
        }
        let mut entries = Vec::with_capacity(self.dim);
        for de in &self.d_gen {
            if de.is_zero() {
                entries.push("0".to_string());
                continue;
            }
            let mut text = String::new();
            for (b, c) in de.terms() {
                if !c.is_real() || !c.re().is_integer() {
                    return None;
                }
                let n = c.re().to_integer();
                let neg = n.is_negative();
                let mag = n.abs();
                if neg {
                    text.push('-');
                } else if !text.is_empty() {
                    text.push('+');
                }
                if !mag.is_one() {
                    text.push_str(&format!("{mag}*"));
                }
                text.extend(b.indices().iter().map(|i| i.to_string()));
            }
            entries.push(text);
        }
        Some(format!("({})", entries.join(",")))
    }

    pub fn parse_compact(text: &str) -> Result<Self> {
        notation::parse_algebra(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        notation::algebra_from_json(text)
    }

    pub fn to_json(&self) -> String {
        notation::algebra_to_json(self)
    }

    /// The subalgebra-dual obtained by dropping the generators listed in
    /// `drop` and renumbering the rest; fails unless the remaining
    /// differentials avoid the dropped generators.
    pub fn restrict(&self, drop: &[usize]) -> Result<Self> {
        let keep: Vec<usize> = (1..=self.dim).filter(|i| !drop.contains(i)).collect();
        let n = keep.len();
        let mut d_gen = Vec::with_capacity(n);
        for &i in &keep {
            let mut de = Form::zero(n);
            for (b, c) in self.de(i).terms() {
                let idx = b.indices();
                if idx.iter().any(|j| drop.contains(j)) {
                    return Err(Error::ValidationFailed(format!(
                        "de{i} involves a dropped generator"
                    )));
                }
                let renum: Vec<usize> = idx.iter().map(|j| keep.iter().position(|k| k == j).unwrap() + 1).collect();
                de = &de + &Form::monomial(n, &renum, c.clone())?;
            }
            d_gen.push(de);
        }
        NilAlgebra::new(d_gen)
    }

    /// The subalgebra spanned by `∂_k` for `k` in `keep`, renumbered in
    /// order; its differentials are the restrictions of those of `keep`.
    pub fn subalgebra(&self, keep: &[usize]) -> Result<Self> {
        let n = keep.len();
        let local = |idx: &[usize]| -> Option<Vec<usize>> {
            idx.iter().map(|j| keep.iter().position(|k| k == j).map(|p| p + 1)).collect()
        };
        for k in (1..=self.dim).filter(|k| !keep.contains(k)) {
            if self.de(k).terms().any(|(b, _)| local(&b.indices()).is_some()) {
                return Err(Error::ValidationFailed(format!("∂{k} appears in a bracket of kept vectors")));
            }
        }
        let mut d_gen = Vec::with_capacity(n);
        for &i in keep {
            let mut de = Form::zero(n);
            for (b, c) in self.de(i).terms() {
                if let Some(renum) = local(&b.indices()) {
                    de = &de + &Form::monomial(n, &renum, c.clone())?;
                }
            }
            d_gen.push(de);
        }
        NilAlgebra::new(d_gen)
    }
}

impl std::str::FromStr for NilAlgebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_compact(s)
    }
}

impl fmt::Display for NilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_compact() {
            Some(s) => write!(f, "{s}"),
            None => {
                let parts: Vec<String> = self.d_gen.iter().map(|d| d.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for NilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NilAlgebra{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: &str) -> NilAlgebra {
        s.parse().unwrap()
    }

    fn e(n: usize, idx: &[usize]) -> Form {
        Form::monomial(n, idx, G::one()).unwrap()
    }

    fn dv(n: usize, k: usize) -> Polyvector {
        Polyvector::generator(n, k)
    }

    #[test]
    fn differential_examples() {
        let h = alg("(0,0,12)");
        assert_eq!(h.d(&e(3, &[3])).unwrap(), e(3, &[1, 2]));
        assert!(h.d(&Form::<G>::one(3)).unwrap().is_zero());
        let g = alg("(0,0,12,13)");
        // e12∧e4 − e3∧e13 = e124
        assert_eq!(g.d(&e(4, &[3, 4])).unwrap(), e(4, &[1, 2, 4]));
    }

    #[test]
    fn bracket_examples() {
        let h = alg("(0,0,12)");
        assert_eq!(h.lie_bracket(&dv(3, 1), &dv(3, 2)).unwrap(), -dv(3, 3));
        assert!(h.lie_bracket(&dv(3, 1), &dv(3, 3)).unwrap().is_zero());
        assert!(NilAlgebra::abelian(2).lie_bracket(&dv(2, 1), &dv(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let h = alg("(0,0,12)");
        assert_eq!(h.lie_derivative(&dv(3, 2), &e(3, &[3])).unwrap(), -e(3, &[1]));
        let t = NilAlgebra::abelian(3);
        assert!(t.lie_derivative(&dv(3, 1), &e(3, &[2])).unwrap().is_zero());
        assert!(t.lie_derivative(&dv(3, 1), &Form::one(3)).unwrap().is_zero());
    }

    #[test]
    fn courant_examples() {
        let h = alg("(0,0,12)");
        let s = GeneralizedSection::new(dv(3, 1), e(3, &[3])).unwrap();
        let t = GeneralizedSection::from_vector(dv(3, 2)).unwrap();
        let r = h.courant_bracket(&s, &t).unwrap();
        assert_eq!(r.vector(), &-dv(3, 3));
        assert_eq!(r.covector(), &e(3, &[1]));
        let a = NilAlgebra::abelian(2);
        let s = GeneralizedSection::new(dv(2, 1), e(2, &[2])).unwrap();
        let t = GeneralizedSection::from_vector(dv(2, 2)).unwrap();
        assert!(a.courant_bracket(&s, &t).unwrap().is_zero());
    }

    #[test]
    fn rejects_invalid_algebras() {
        // de2 = e12 breaks the staircase
        assert!(matches!("(0,12)".parse::<NilAlgebra>(), Err(Error::ValidationFailed(_))));
        // d(e34) = -e123
        assert!(matches!("(0,0,0,12,34)".parse::<NilAlgebra>(), Err(Error::ValidationFailed(_))));
        let complex = vec![Form::zero(3), Form::zero(3), Form::monomial(3, &[1, 2], G::i()).unwrap()];
        assert!(NilAlgebra::new(complex).is_err());
    }

    #[test]
    fn compact_round_trip() {
        for s in ["(0,0,12,13,14,34-25)", "(0,0,0,12,13,14+35)", "(0,0,0,0,0,0)", "(0,0,0,12,14,2*13+24)"] {
            let g = alg(s);
            assert_eq!(alg(&g.to_compact().unwrap()), g);
        }
    }

    #[test]
    fn restriction_to_leaf() {
        let g = alg("(0,0,0,0,0,0,0,14-23)");
        let leaf = g.restrict(&[7]).unwrap();
        assert_eq!(leaf.dim(), 7);
        assert_eq!(leaf.de(7), &(&e(7, &[1, 4]) - &e(7, &[2, 3])));
        assert!(alg("(0,0,12)").restrict(&[1]).is_err());
    }

    #[test]
    fn subalgebra_of_leaf_directions() {
        let g = alg("(0,0,12,13,14,15,16,36-45-27)");
        let leaf = g.subalgebra(&[3, 4, 5, 6, 7, 8]).unwrap();
        assert_eq!(leaf, alg("(0,0,0,0,0,14-23)"));
        // ∂1, ∂2 bracket into ∂3
        assert!(g.subalgebra(&[1, 2]).is_err());
    }
}

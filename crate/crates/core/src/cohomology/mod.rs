//! Chevalley–Eilenberg cohomology of a nilpotent Lie algebra and the exact
//! decision of whether it carries a symplectic form.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::{blades_of_grade, top_pairing, Form};
use crate::nilalg::NilAlgebra;
use crate::scalars::linalg::{null_space, rank, solve_linear, span_basis};
use crate::scalars::{poly_is_zero, GaussianRational, Matrix, ParamPolynomial, Scalar};

type G = GaussianRational;

/// Betti numbers `b_0, …, b_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn b(&self, k: usize) -> usize {
        self.0[k]
    }

    /// `b_0 = b_n = 1`, `b_k = b_{n-k}` and vanishing Euler characteristic.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.0.len() - 1;
        if self.0[0] != 1 || self.0[n] != 1 {
            return Err(format!("b_0 = {}, b_n = {}", self.0[0], self.0[n]));
        }
        if let Some(k) = (0..=n).find(|&k| self.0[k] != self.0[n - k]) {
            return Err(format!("b_{k} = {} but b_{} = {}", self.0[k], n - k, self.0[n - k]));
        }
        let chi: i64 = self.0.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        if n >= 1 && chi != 0 {
            return Err(format!("Euler characteristic {chi}"));
        }
        Ok(())
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn exact_rank(m: &Matrix<G>) -> usize {
    rank(m).expect("rational elimination never reports ambiguity")
}

pub fn betti(g: &NilAlgebra) -> BettiVector {
    let n = g.dim();
    let ranks: Vec<usize> = (0..n).map(|k| exact_rank(&g.d_matrix(k))).collect();
    let b = (0..=n)
        .map(|k| {
            let total = blades_of_grade(n, k).len();
            let out = if k < n { ranks[k] } else { 0 };
            let inc = if k > 0 { ranks[k - 1] } else { 0 };
            total - out - inc
        })
        .collect();
    BettiVector(b)
}

/// A basis of the closed `k`-forms.
pub fn closed_basis(g: &NilAlgebra, k: usize) -> Vec<Form> {
    let n = g.dim();
    if k == n {
        return vec![Form::monomial(n, &(1..=n).collect::<Vec<_>>(), G::one()).unwrap()];
    }
    null_space(&g.d_matrix(k))
        .expect("rational elimination never reports ambiguity")
        .into_iter()
        .map(|v| Form::from_coords(n, k, &v))
        .collect()
}

/// A basis of the exact `k`-forms.
pub fn exact_basis(g: &NilAlgebra, k: usize) -> Vec<Form> {
    if k == 0 {
        return Vec::new();
    }
    let n = g.dim();
    let images: Vec<Vec<G>> = blades_of_grade(n, k - 1)
        .into_iter()
        .map(|b| g.d(&Form::from_terms(n, [(b, G::one())])).unwrap().coords(k))
        .collect();
    span_basis(&images, blades_of_grade(n, k).len())
        .expect("rational elimination never reports ambiguity")
        .into_iter()
        .map(|v| Form::from_coords(n, k, &v))
        .collect()
}

/// For a closed homogeneous form, `Some(b)` with `db = a` if `a` is exact,
/// else `None`. The zero form is exact with primitive zero.
pub fn is_exact(a: &Form, g: &NilAlgebra) -> Result<Option<Form>> {
    let n = g.dim();
    if a.is_zero() {
        return Ok(Some(Form::zero(n)));
    }
    let k = a.homogeneous_degree().ok_or(Error::NotHomogeneous("exactness argument"))?;
    if !g.d(a)?.is_zero() {
        return Err(Error::NotClosed);
    }
    if k == 0 {
        return Ok(None);
    }
    match solve_linear(&g.d_matrix(k - 1), Some(&a.coords(k))) {
        Ok(sol) => {
            let b = Form::from_coords(n, k - 1, &sol.particular);
            debug_assert_eq!(&g.d(&b)?, a);
            Ok(Some(b))
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Whether the classes of `reps` span `Hᵏ`. Fails if a representative is
/// not closed.
pub fn spans_cohomology(g: &NilAlgebra, k: usize, reps: &[Form]) -> Result<bool> {
    for r in reps {
        if !g.d(r)?.is_zero() {
            return Err(Error::NotClosed);
        }
    }
    let mut vectors: Vec<Vec<G>> = exact_basis(g, k).iter().map(|f| f.coords(k)).collect();
    vectors.extend(reps.iter().map(|f| f.coords(k)));
    let spanned = span_basis(&vectors, blades_of_grade(g.dim(), k).len())?.len();
    Ok(spanned == closed_basis(g, k).len())
}

#[derive(Clone, Debug, PartialEq)]
pub enum SymplecticDecision {
    /// A closed real 2-form `ω` with `ωⁿ ≠ 0`.
    Yes { witness: Form, top: G },
    /// `(Σ tᵢωᵢ)ⁿ` vanishes identically over a basis of `m` closed 2-forms.
    No { closed_dim: usize },
}

impl SymplecticDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, SymplecticDecision::Yes { .. })
    }
}

fn var_name(i: usize) -> String {
    format!("t{i:02}")
}

/// Top coefficient of `aᵖ` via one pairing of two half powers.
pub fn top_power<S: Scalar>(a: &Form<S>, p: usize) -> S {
    let lo = a.wedge_pow(p / 2);
    let hi = if p % 2 == 0 { lo.clone() } else { &lo ^ a };
    top_pairing(&lo, &hi)
}

/// Decides exactly whether some closed real 2-form is nondegenerate.
///
/// The top coefficient of `(Σ tᵢωᵢ)ⁿ` is a polynomial over the closed
/// 2-forms `ωᵢ`. It vanishes identically iff no symplectic form exists;
/// otherwise a rational witness is searched for on the support of one of
/// its monomials.
pub fn symplectic_decision(g: &NilAlgebra) -> Result<SymplecticDecision> {
    let dim = g.dim();
    if dim % 2 == 1 {
        return Err(Error::OddDimension(dim));
    }
    let n = dim / 2;
    let basis = closed_basis(g, 2);
    let m = basis.len();
    let mut generic: Form<ParamPolynomial> = Form::zero(dim);
    for (i, w) in basis.iter().enumerate() {
        let t = ParamPolynomial::var(&var_name(i));
        generic = &generic + &w.map(|c| ParamPolynomial::constant(c.clone()) * &t);
    }
    let poly = top_power(&generic, n);
    if poly_is_zero(&poly) {
        return Ok(SymplecticDecision::No { closed_dim: m });
    }
    let witness_at = |point: &[G]| -> Form {
        basis.iter().zip(point).fold(Form::zero(dim), |acc, (w, t)| &acc + &w.scale(t))
    };
    let check = |point: &[G]| -> Option<SymplecticDecision> {
        let w = witness_at(point);
        let top = top_power(&w, n);
        (!top.is_zero()).then_some(SymplecticDecision::Yes { witness: w, top })
    };
    // restricting to the support of a monomial keeps the polynomial nonzero
    let vars = poly.variables().to_vec();
    let (exps, _) = poly.terms().next().expect("nonzero polynomial");
    let support: Vec<usize> = vars
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, _)| v[1..].parse::<usize>().expect("generated variable name"))
        .collect();
    const VALUES: [i64; 5] = [1, -1, 2, -2, 0];
    let mut digits = vec![0usize; support.len()];
    loop {
        let mut point = vec![G::zero(); m];
        for (slot, &d) in support.iter().zip(&digits) {
            point[*slot] = G::from_integer(VALUES[d]);
        }
        if let Some(found) = check(&point) {
            return Ok(found);
        }
        let mut k = 0;
        while k < digits.len() && digits[k] == VALUES.len() - 1 {
            digits[k] = 0;
            k += 1;
        }
        if k == digits.len() {
            break;
        }
        digits[k] += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    loop {
        let point: Vec<G> = (0..m).map(|_| G::from_ratio(rng.gen_range(-50..=50), rng.gen_range(1..=7))).collect();
        if let Some(found) = check(&point) {
            return Ok(found);
        }
    }
}

use super::NilAlgebra;
use crate::error::{Error, Result};
use crate::exterior::{blades_of_grade, Form};
use crate::scalars::linalg::{in_span, null_space, span_basis};
use crate::scalars::{GaussianRational, Matrix};

type G = GaussianRational;

/// `0 = V_0 ⊂ V_1 ⊂ … ⊂ V_s = 𝔤*` with `V_i = {v : dv ∈ ∧²V_{i-1}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    dim: usize,
    // spaces[i] is a basis of V_{i+1}, in reduced row-echelon coordinates
    spaces: Vec<Vec<Vec<G>>>,
}

fn wedge_span(dim: usize, basis: &[Vec<G>], p: usize) -> Vec<Vec<G>> {
    let forms: Vec<Form> = basis.iter().map(|v| Form::from_coords(dim, 1, v)).collect();
    blades_of_grade(forms.len(), p)
        .into_iter()
        .map(|choice| {
            choice
                .indices()
                .into_iter()
                .fold(Form::one(dim), |acc, k| &acc ^ &forms[k - 1])
                .coords(p)
        })
        .collect()
}

impl Filtration {
    pub(super) fn compute(g: &NilAlgebra) -> Self {
        let n = g.dim();
        let d1: Vec<Vec<G>> = (1..=n).map(|k| g.de(k).coords(2)).collect();
        let rows = blades_of_grade(n, 2).len();
        let mut spaces: Vec<Vec<Vec<G>>> = Vec::new();
        let mut prev: Vec<Vec<G>> = Vec::new();
        loop {
            // unknowns (c, w): Σ c_k de_k − Σ w_j W_j = 0
            let w = wedge_span(n, &prev, 2);
            let mut cols = d1.clone();
            cols.extend(w.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
            let m = Matrix::from_columns(rows, &cols);
            let null = null_space(&m).expect("rational elimination never reports ambiguity");
            let projected: Vec<Vec<G>> = null.into_iter().map(|v| v[..n].to_vec()).collect();
            let next = span_basis(&projected, n).expect("rational elimination never reports ambiguity");
            assert!(next.len() > prev.len(), "filtration stalled: algebra is not nilpotent");
            let done = next.len() == n;
            spaces.push(next.clone());
            prev = next;
            if done {
                break;
            }
        }
        Filtration { dim: n, spaces }
    }

    /// `s`, the number of steps to exhaust `𝔤*`.
    pub fn nil_index(&self) -> usize {
        self.spaces.len()
    }

    /// `dim V_1, …, dim V_s`.
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Vec::len).collect()
    }

    /// Basis of `V_i` (`V_0` is empty).
    pub fn space(&self, i: usize) -> Vec<Form> {
        if i == 0 {
            return Vec::new();
        }
        let k = i.min(self.spaces.len());
        self.spaces[k - 1].iter().map(|v| Form::from_coords(self.dim, 1, v)).collect()
    }

    /// Whether the homogeneous `p`-form `a` lies in `∧ᵖ V_i`.
    pub fn contains(&self, a: &Form, i: usize) -> Result<bool> {
        let p = match a.homogeneous_degree() {
            Some(p) => p,
            None if a.is_zero() => return Ok(true),
            None => return Err(Error::NotHomogeneous("filtration membership")),
        };
        if i == 0 {
            return Ok(p == 0);
        }
        let basis = &self.spaces[i.min(self.spaces.len()) - 1];
        let span = wedge_span(self.dim, basis, p);
        in_span(&span, &a.coords(p))
    }
}

/// The least `i` with `a ∈ ∧ᵖ V_i`.
pub fn nilpotent_degree(a: &Form, f: &Filtration) -> Result<usize> {
    if a.is_zero() {
        return Err(Error::ZeroForm("nilpotent degree"));
    }
    if a.homogeneous_degree().is_none() {
        return Err(Error::NotHomogeneous("nilpotent degree argument"));
    }
    for i in 0..=f.nil_index() {
        if f.contains(a, i)? {
            return Ok(i);
        }
    }
    unreachable!("∧ᵖ V_s is everything")
}

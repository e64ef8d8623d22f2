use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{check_dims, mukai_pair, top_pairing, Blade, Form, GeneralizedSection};
use crate::nilalg::FormExpr;
use crate::scalars::linalg::null_space;
use crate::scalars::{GaussianRational, Matrix};

type G = GaussianRational;

/// `ρ = exp(B + iω) ∧ θ_1 ∧ … ∧ θ_k` with `B`, `ω` real 2-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct PureSpinorAnsatz {
    b: Form,
    omega: Form,
    thetas: Vec<Form>,
}

pub(crate) fn wedge_all(dim: usize, forms: &[Form]) -> Form {
    forms.iter().fold(Form::one(dim), |acc, t| &acc ^ t)
}

pub(crate) fn real_part(a: &Form) -> Form {
    a.map(|c| c.real_part())
}

pub(crate) fn imag_part(a: &Form) -> Form {
    a.map(|c| c.imag_part())
}

impl PureSpinorAnsatz {
    pub fn new(b: Form, omega: Form, thetas: Vec<Form>) -> Result<Self> {
        let dim = b.dim();
        check_dims(dim, omega.dim())?;
        for (x, what) in [(&b, "B"), (&omega, "ω")] {
            x.expect_degree(2, "B and ω")?;
            if !x.is_real() {
                return Err(Error::ValidationFailed(format!("{what} must be real")));
            }
        }
        for t in &thetas {
            check_dims(dim, t.dim())?;
            t.expect_degree(1, "θ")?;
        }
        if wedge_all(dim, &thetas).is_zero() {
            return Err(Error::DependentForms);
        }
        Ok(PureSpinorAnsatz { b, omega, thetas })
    }

    /// Splits a parsed form into its structured pieces; a bare 2-form is
    /// the symplectic ansatz `exp(iω)`.
    pub fn from_expr(expr: &FormExpr) -> Result<Self> {
        match expr {
            FormExpr::Spinor { thetas, exponent } => {
                Self::new(real_part(exponent), imag_part(exponent), thetas.clone())
            }
            FormExpr::TwoForm(w) => Self::new(Form::zero(w.dim()), w.clone(), Vec::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn b(&self) -> &Form {
        &self.b
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn thetas(&self) -> &[Form] {
        &self.thetas
    }

    /// `k`, the number of 1-form factors.
    pub fn kind(&self) -> usize {
        self.thetas.len()
    }

    /// `Ω = θ_1 ∧ … ∧ θ_k`.
    pub fn big_omega(&self) -> Form {
        wedge_all(self.dim(), &self.thetas)
    }

    pub fn exponent(&self) -> Form {
        &self.b + &self.omega.scale(&G::i())
    }

    pub fn to_form(&self) -> Form {
        &self.exponent().exp().expect("2-form exponent") ^ &self.big_omega()
    }

    /// Top coefficient of `ω^{n−k} ∧ Ω ∧ Ω̄` in dimension `2n`.
    pub fn nondegeneracy_value(&self) -> Result<G> {
        let dim = self.dim();
        if dim % 2 == 1 {
            return Err(Error::OddDimension(dim));
        }
        let (n, k) = (dim / 2, self.kind());
        if k > n {
            return Ok(G::zero());
        }
        let big = self.big_omega();
        let frame = &big ^ &big.conj();
        Ok(top_pairing(&self.omega.wedge_pow(n - k), &frame))
    }
}

pub fn ansatz_to_form(a: &PureSpinorAnsatz) -> Form {
    a.to_form()
}

/// The Clifford annihilator of a form.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilatorBasis {
    pub sections: Vec<GeneralizedSection>,
    pub is_pure: bool,
}

/// Matrix of `s ↦ s·ρ` on the basis sections `∂_1…∂_N, e_1…e_N`, with rows
/// indexed by the blades that occur (plus those of `extra`).
pub(crate) fn action_matrix(rho: &Form, extra: Option<&Form>) -> (Matrix<G>, Option<Vec<G>>) {
    let dim = rho.dim();
    let images: Vec<Form> = (0..2 * dim)
        .map(|k| GeneralizedSection::basis(dim, k).clifford_act(rho).expect("same dimension"))
        .collect();
    let mut rows: BTreeMap<Blade, usize> = BTreeMap::new();
    for f in images.iter().chain(extra) {
        for (b, _) in f.terms() {
            let next = rows.len();
            rows.entry(*b).or_insert(next);
        }
    }
    let mut m = Matrix::zeros(rows.len(), 2 * dim);
    for (j, f) in images.iter().enumerate() {
        for (b, c) in f.terms() {
            m.set(rows[b], j, c.clone());
        }
    }
    let rhs = extra.map(|f| {
        let mut v = vec![G::zero(); rows.len()];
        for (b, c) in f.terms() {
            v[rows[b]] = c.clone();
        }
        v
    });
    (m, rhs)
}

pub fn annihilator(rho: &Form) -> Result<AnnihilatorBasis> {
    if rho.is_zero() {
        return Err(Error::ZeroForm("annihilator"));
    }
    let (m, _) = action_matrix(rho, None);
    let sections: Vec<GeneralizedSection> = null_space(&m)?
        .into_iter()
        .map(|v| GeneralizedSection::from_coords(rho.dim(), &v))
        .collect();
    debug_assert!(sections.len() <= rho.dim());
    let is_pure = sections.len() == rho.dim();
    Ok(AnnihilatorBasis { sections, is_pure })
}

pub fn is_pure(rho: &Form) -> Result<bool> {
    Ok(annihilator(rho)?.is_pure)
}

/// Lowest degree of a pure spinor.
pub fn type_of(rho: &Form) -> Result<usize> {
    if !is_pure(rho)? {
        return Err(Error::Impure);
    }
    Ok(rho.lowest_degree().expect("nonzero form"))
}

/// Frozen values of `c_{n,k}` in `(ρ, ρ̄) = c_{n,k} · ω^{n−k}∧Ω∧Ω̄`, found
/// by expanding both sides on random ansatzes.
const MUKAI_CONSTANTS: [((usize, usize), ((i64, i64), (i64, i64))); 6] = [
    ((1, 0), ((0, 1), (-2, 1))),
    ((2, 0), ((-2, 1), (0, 1))),
    ((3, 0), ((0, 1), (4, 3))),
    ((3, 1), ((-2, 1), (0, 1))),
    ((3, 2), ((0, 1), (2, 1))),
    ((3, 3), ((-1, 1), (0, 1))),
];

/// `c_{n,k}`: the frozen table where available, otherwise
/// `(−1)^{k(k−1)/2} (−2i)^{n−k} / (n−k)!`.
pub fn mukai_constant(n: usize, k: usize) -> G {
    if let Some((_, (re, im))) = MUKAI_CONSTANTS.iter().find(|(nk, _)| *nk == (n, k)) {
        return G::from_parts(*re, *im);
    }
    assert!(k <= n);
    let sign = if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
    let fact: i64 = (1..=(n - k) as i64).product();
    G::from_integer(sign) * G::from_parts((0, 1), (-2, 1)).pow((n - k) as u32) * G::from_ratio(1, fact)
}

/// Nondegeneracy of a raw pure spinor: `(ρ, ρ̄) ≠ 0`. Returns the pairing.
pub fn nondegenerate_form(rho: &Form) -> Result<(bool, G)> {
    if !is_pure(rho)? {
        return Err(Error::Impure);
    }
    if rho.dim() % 2 == 1 {
        return Ok((false, G::zero()));
    }
    let v = mukai_pair(rho, &rho.conj())?;
    Ok((!v.is_zero(), v))
}

/// Nondegeneracy of a structured ansatz: `ω^{n−k}∧Ω∧Ω̄ ≠ 0`.
pub fn nondegenerate_ansatz(a: &PureSpinorAnsatz) -> Result<(bool, G)> {
    if a.dim() % 2 == 1 {
        return Ok((false, G::zero()));
    }
    let v = a.nondegeneracy_value()?;
    Ok((!v.is_zero(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Polyvector;
    use crate::nilalg::parse_form_expr;

    fn e(n: usize, idx: &[usize]) -> Form {
        Form::monomial(n, idx, G::one()).unwrap()
    }

    fn theta(n: usize, a: usize, b: usize) -> Form {
        &e(n, &[a]) + &e(n, &[b]).scale(&G::i())
    }

    #[test]
    fn ansatz_examples() {
        let a = PureSpinorAnsatz::new(Form::zero(6), Form::zero(6), vec![theta(6, 1, 2)]).unwrap();
        assert_eq!(a.to_form(), theta(6, 1, 2));
        let w = &e(6, &[3, 6]) - &e(6, &[4, 5]);
        let a = PureSpinorAnsatz::new(Form::zero(6), w.clone(), vec![theta(6, 1, 2)]).unwrap();
        let iw = w.scale(&G::i());
        let half = G::from_ratio(-1, 2);
        let series = &(&Form::one(6) + &iw) + &w.wedge_pow(2).scale(&half);
        assert_eq!(a.to_form(), &series ^ &theta(6, 1, 2));
        let s = PureSpinorAnsatz::new(Form::zero(4), e(4, &[1, 2]), vec![]).unwrap();
        assert_eq!(s.to_form(), e(4, &[1, 2]).scale(&G::i()).exp().unwrap());
        assert_eq!(
            PureSpinorAnsatz::new(Form::zero(4), Form::zero(4), vec![e(4, &[1]), e(4, &[1])]),
            Err(Error::DependentForms)
        );
        assert!(PureSpinorAnsatz::new(e(4, &[1, 2]).scale(&G::i()), Form::zero(4), vec![]).is_err());
    }

    #[test]
    fn annihilator_examples() {
        let one = annihilator(&Form::one(6)).unwrap();
        assert!(one.is_pure);
        assert!(one.sections.iter().all(|s| s.covector().is_zero()));
        let t = annihilator(&theta(6, 1, 2)).unwrap();
        assert!(t.is_pure);
        let covectors = t.sections.iter().filter(|s| s.vector().is_zero()).count();
        assert_eq!(covectors, 1);
        let impure = &Form::one(4) + &e(4, &[1, 2, 3, 4]);
        assert!(!annihilator(&impure).unwrap().is_pure);
        assert!(annihilator(&Form::zero(4)).is_err());
        for s in &t.sections {
            for u in &t.sections {
                assert!(s.inner_product(u).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn types() {
        let sympl = e(6, &[1, 2]).scale(&G::i()).exp().unwrap();
        assert_eq!(type_of(&sympl).unwrap(), 0);
        let cx = &(&theta(6, 1, 2) ^ &theta(6, 3, 4)) ^ &theta(6, 5, 6);
        assert_eq!(type_of(&cx).unwrap(), 3);
        let r = parse_form_expr("(1+i2)exp i(36-45)", 6).unwrap().to_form();
        assert_eq!(type_of(&r).unwrap(), 1);
        assert_eq!(type_of(&(&Form::one(4) + &e(4, &[1, 2, 3, 4]))), Err(Error::Impure));
    }

    #[test]
    fn nondegeneracy_examples() {
        let w = -(&e(6, &[3, 6]) + &e(6, &[4, 5]));
        let a = PureSpinorAnsatz::new(Form::zero(6), w, vec![theta(6, 1, 2)]).unwrap();
        let (ok, v) = nondegenerate_ansatz(&a).unwrap();
        assert!(ok);
        assert_eq!(v, G::from_parts((0, 1), (-4, 1)));
        let (ok, p) = nondegenerate_form(&a.to_form()).unwrap();
        assert!(ok);
        assert_eq!(p, mukai_constant(3, 1) * v);
        assert!(!nondegenerate_form(&theta(6, 1, 2)).unwrap().0);
        let torus = parse_form_expr("12+34+56", 6).unwrap().spinor();
        assert!(nondegenerate_form(&torus).unwrap().0);
    }

    fn random_ansatz(rng: &mut rand_chacha::ChaCha8Rng, n: usize, k: usize) -> PureSpinorAnsatz {
        use rand::Rng;
        let dim = 2 * n;
        let mut small = |rng: &mut rand_chacha::ChaCha8Rng| G::from_integer(rng.gen_range(-3..=3));
        let two = |rng: &mut rand_chacha::ChaCha8Rng, small: &mut dyn FnMut(&mut rand_chacha::ChaCha8Rng) -> G| {
            let c: Vec<G> = (0..dim * (dim - 1) / 2).map(|_| small(rng)).collect();
            Form::from_coords(dim, 2, &c)
        };
        loop {
            let b = two(rng, &mut small);
            let w = two(rng, &mut small);
            let thetas: Vec<Form> = (0..k)
                .map(|_| {
                    let c: Vec<G> = (0..dim)
                        .map(|_| G::from_parts((rng.gen_range(-3..=3), 1), (rng.gen_range(-3..=3), 1)))
                        .collect();
                    Form::from_coords(dim, 1, &c)
                })
                .collect();
            if let Ok(a) = PureSpinorAnsatz::new(b, w, thetas) {
                return a;
            }
        }
    }

    #[test]
    fn frozen_constants_match_brute_force() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &((n, k), _) in &MUKAI_CONSTANTS {
            let mut seen_nonzero = false;
            for _ in 0..6 {
                let a = random_ansatz(&mut rng, n, k);
                let structured = a.nondegeneracy_value().unwrap();
                let rho = a.to_form();
                let pairing = mukai_pair(&rho, &rho.conj()).unwrap();
                assert_eq!(pairing, mukai_constant(n, k) * structured.clone(), "({n},{k})");
                seen_nonzero |= !structured.is_zero();
            }
            assert!(seen_nonzero, "({n},{k}) never exercised");
        }
    }

    #[test]
    fn complex_structure_annihilates_antiholomorphic_vectors() {
        let t = theta(2, 1, 2);
        let x = &Polyvector::generator(2, 1) + &Polyvector::generator(2, 2).scale(&G::i());
        let s = GeneralizedSection::from_vector(x).unwrap();
        assert!(s.clifford_act(&t).unwrap().is_zero());
    }
}

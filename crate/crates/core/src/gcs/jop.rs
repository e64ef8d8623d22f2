use super::spinor::annihilator;
use crate::error::{Error, Result};
use crate::exterior::{Form, GeneralizedSection};
use crate::scalars::linalg::inverse;
use crate::scalars::{GaussianRational, Matrix};

type G = GaussianRational;

/// The real operator on `T ⊕ T*` with `+i`-eigenspace the annihilator of a
/// spinor, in the basis `∂_1…∂_N, e_1…e_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct JOperator {
    pub matrix: Matrix<G>,
}

impl JOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows() / 2
    }

    pub fn apply(&self, s: &GeneralizedSection) -> GeneralizedSection {
        GeneralizedSection::from_coords(self.dim(), &self.matrix.mul_vec(&s.coords()))
    }

    /// `J² = −1`.
    pub fn squares_to_minus_one(&self) -> bool {
        let n = self.matrix.rows();
        let sq = self.matrix.mul(&self.matrix);
        (0..n).all(|i| (0..n).all(|j| *sq.get(i, j) == if i == j { -G::one() } else { G::zero() }))
    }

    /// `⟨Jv, Jw⟩ = ⟨v, w⟩` on all basis pairs.
    pub fn is_orthogonal(&self) -> bool {
        let dim = self.dim();
        let basis: Vec<GeneralizedSection> = (0..2 * dim).map(|k| GeneralizedSection::basis(dim, k)).collect();
        let images: Vec<GeneralizedSection> = basis.iter().map(|b| self.apply(b)).collect();
        (0..2 * dim).all(|a| {
            (0..2 * dim).all(|b| {
                images[a].inner_product(&images[b]).expect("same dimension")
                    == basis[a].inner_product(&basis[b]).expect("same dimension")
            })
        })
    }
}

/// Realifies the splitting `L ⊕ L̄` of a pure nondegenerate spinor.
pub fn j_operator(rho: &Form) -> Result<JOperator> {
    let ann = annihilator(rho)?;
    if !ann.is_pure {
        return Err(Error::Impure);
    }
    let size = 2 * rho.dim();
    let mut cols: Vec<Vec<G>> = ann.sections.iter().map(GeneralizedSection::coords).collect();
    cols.extend(ann.sections.iter().map(|s| s.conj().coords()));
    let m = Matrix::from_columns(size, &cols);
    let m_inv = inverse(&m).map_err(|_| Error::Degenerate)?;
    let mut eig = Matrix::zeros(size, size);
    for k in 0..size {
        eig.set(k, k, if k < rho.dim() { G::i() } else { -G::i() });
    }
    let matrix = m.mul(&eig).mul(&m_inv);
    let j = JOperator { matrix };
    debug_assert!((0..size).all(|a| (0..size).all(|b| j.matrix.get(a, b).is_real())));
    assert!(j.squares_to_minus_one(), "J² = −1 by construction");
    Ok(j)
}

//! B-field and β-field actions, the Schouten bracket on invariant
//! polyvectors, holomorphic dual frames, and the deformation of a complex
//! structure `θ_1∧…∧θ_n` by `β = x_{n−1}∧x_n` to type `n−2`.

use crate::error::{Error, Result};
use crate::exterior::{check_dims, evaluate, interior, Form, Polyvector};
use crate::gcs::{check_gcs, normalize_theta, projectively_equal, GcsReport, PureSpinorAnsatz};
use crate::nilalg::NilAlgebra;
use crate::scalars::linalg::inverse;
use crate::scalars::{GaussianRational, Matrix};

type G = GaussianRational;

fn wedge_all(dim: usize, forms: &[Form]) -> Form {
    forms.iter().fold(Form::one(dim), |acc, t| &acc ^ t)
}

/// `ρ ↦ e^B ∧ ρ` for a closed real 2-form `B`.
pub fn b_transform(rho: &Form, b: &Form, g: &NilAlgebra) -> Result<Form> {
    check_dims(g.dim(), rho.dim())?;
    check_dims(g.dim(), b.dim())?;
    b.expect_degree(2, "B-field")?;
    if !b.is_real() {
        return Err(Error::ValidationFailed("B-field must be real".into()));
    }
    if !g.d(b)?.is_zero() {
        return Err(Error::NotClosed);
    }
    let out = &b.exp()? ^ rho;
    debug_assert_eq!(out.lowest_degree(), rho.lowest_degree());
    debug_assert_eq!(g.d(&out)?.is_zero(), g.d(rho)?.is_zero());
    Ok(out)
}

/// `ρ ↦ (1 + i_β + ½ i_β² + …) ρ`; the series stops once `i_β^k ρ = 0`.
pub fn beta_transform(rho: &Form, beta: &Polyvector) -> Result<Form> {
    check_dims(rho.dim(), beta.dim())?;
    beta.expect_degree(2, "β-field")?;
    let mut out = rho.clone();
    let mut term = rho.clone();
    let mut k = 0i64;
    loop {
        term = interior(beta, &term)?;
        if term.is_zero() {
            return Ok(out);
        }
        k += 1;
        term = term.scale(&G::from_ratio(1, k));
        out = &out + &term;
    }
}

fn blade_vector(dim: usize, idx: &[usize]) -> Polyvector {
    Polyvector::monomial(dim, idx, G::one()).expect("indices in range")
}

/// Schouten bracket of invariant polyvectors. On decomposables
/// `[X_1∧…∧X_p, Y_1∧…∧Y_q] = Σ (−1)^{i+j} [X_i,Y_j] ∧ X_1…X̂_i…X_p ∧ Y_1…Ŷ_j…Y_q`,
/// so that `[X∧Y, X∧Y] = 2[X,Y]∧X∧Y`.
pub fn schouten(p: &Polyvector, q: &Polyvector, g: &NilAlgebra) -> Result<Polyvector> {
    let dim = g.dim();
    check_dims(dim, p.dim())?;
    check_dims(dim, q.dim())?;
    let mut out = Polyvector::zero(dim);
    for (bp, cp) in p.terms() {
        for (bq, cq) in q.terms() {
            let xs = bp.indices();
            let ys = bq.indices();
            for (i, &x) in xs.iter().enumerate() {
                for (j, &y) in ys.iter().enumerate() {
                    let bracket = g.lie_bracket(&Polyvector::generator(dim, x), &Polyvector::generator(dim, y))?;
                    if bracket.is_zero() {
                        continue;
                    }
                    let rest_x: Vec<usize> = xs.iter().enumerate().filter(|(a, _)| *a != i).map(|(_, v)| *v).collect();
                    let rest_y: Vec<usize> = ys.iter().enumerate().filter(|(b, _)| *b != j).map(|(_, v)| *v).collect();
                    let term = &(&bracket ^ &blade_vector(dim, &rest_x)) ^ &blade_vector(dim, &rest_y);
                    let mut c = cp * cq;
                    if (i + j) % 2 == 1 {
                        c = -c;
                    }
                    out = &out + &term.scale(&c);
                }
            }
        }
    }
    Ok(out)
}

/// Vectors `x_i` with `θ_j(x_i) = δ_ij` and `θ̄_j(x_i) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFrame {
    pub thetas: Vec<Form>,
    pub xs: Vec<Polyvector>,
}

pub fn dual_frame(thetas: &[Form]) -> Result<DualFrame> {
    let n = thetas.len();
    let dim = thetas.first().map(Form::dim).unwrap_or(0);
    if dim != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: dim });
    }
    for t in thetas {
        check_dims(dim, t.dim())?;
        t.expect_degree(1, "frame element")?;
    }
    let rows: Vec<Vec<G>> = thetas.iter().chain(&thetas.iter().map(Form::conj).collect::<Vec<_>>()).map(|t| t.coords(1)).collect();
    let inv = inverse(&Matrix::from_rows(rows)).map_err(|_| Error::Degenerate)?;
    let xs: Vec<Polyvector> = (0..n)
        .map(|i| {
            let col: Vec<G> = (0..dim).map(|r| inv.get(r, i).clone()).collect();
            Polyvector::from_coords(dim, 1, &col)
        })
        .collect();
    for (i, x) in xs.iter().enumerate() {
        for (j, t) in thetas.iter().enumerate() {
            debug_assert_eq!(evaluate(t, x)?, if i == j { G::one() } else { G::zero() });
            debug_assert!(evaluate(&t.conj(), x)?.is_zero());
        }
    }
    Ok(DualFrame { thetas: thetas.to_vec(), xs })
}

/// Output of the type-lowering deformation of a complex structure.
#[derive(Clone, Debug, PartialEq)]
pub struct Deformation {
    pub thetas: Vec<Form>,
    pub beta: Polyvector,
    pub ansatz: PureSpinorAnsatz,
    pub form: Form,
    pub report: GcsReport,
}

/// Deforms the complex structure `θ_1∧…∧θ_n` by `β = x_{n−1}∧x_n` into
/// `e^{θ_{n−1}∧θ_n} ∧ θ_1∧…∧θ_{n−2}`, checking every step.
pub fn complex_to_lower_type(thetas: &[Form], g: &NilAlgebra) -> Result<Deformation> {
    let n = thetas.len();
    if n < 2 {
        return Err(Error::ValidationFailed("need at least two holomorphic forms".into()));
    }
    check_dims(g.dim(), 2 * n)?;
    let omega = wedge_all(g.dim(), thetas);
    let input = check_gcs(&omega, g)?;
    if !input.is_gcs() || input.kind != n {
        return Err(Error::ValidationFailed(format!("not a complex structure: {:?}", input.failures)));
    }
    let thetas = normalize_theta(thetas, g)?;
    let frame = dual_frame(&thetas)?;
    let beta = &frame.xs[n - 2] ^ &frame.xs[n - 1];
    if !schouten(&beta, &beta, g)?.is_zero() {
        return Err(Error::ValidationFailed("[β,β] ≠ 0".into()));
    }
    let form = beta_transform(&omega, &beta)?;
    let expected_exp = &thetas[n - 2] ^ &thetas[n - 1];
    let expected = &expected_exp.exp()? ^ &wedge_all(g.dim(), &thetas[..n - 2]);
    if !projectively_equal(&expected, &form) {
        return Err(Error::ValidationFailed("deformed spinor has unexpected shape".into()));
    }
    let report = check_gcs(&form, g)?;
    if !report.is_gcs() || report.kind != n - 2 || !report.closed {
        return Err(Error::ValidationFailed(format!("deformation is not a closed type-{} structure", n - 2)));
    }
    let ansatz = PureSpinorAnsatz::new(
        expected_exp.map(|c| c.real_part()),
        expected_exp.map(|c| c.imag_part()),
        thetas[..n - 2].to_vec(),
    )?;
    debug_assert_eq!(ansatz.to_form(), expected);
    Ok(Deformation { thetas, beta, ansatz, form, report })
}

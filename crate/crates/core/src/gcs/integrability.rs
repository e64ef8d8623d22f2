use serde::Serialize;

use super::spinor::{action_matrix, annihilator, nondegenerate_ansatz, PureSpinorAnsatz};
use crate::error::{Error, Result};
use crate::exterior::{mukai_pair, Form, GeneralizedSection};
use crate::nilalg::NilAlgebra;
use crate::scalars::linalg::{rank, solve_linear, Matrix};
use crate::scalars::GaussianRational;

type G = GaussianRational;

/// Solutions of `dρ = (X+ξ)·ρ`: one particular section plus the annihilator.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilitySolution {
    pub particular: GeneralizedSection,
    pub annihilator: Vec<GeneralizedSection>,
}

/// Solves `dρ = (X+ξ)·ρ` for an invariant section, or `None` when there is none.
pub fn integrability_solve(rho: &Form, g: &NilAlgebra) -> Result<Option<IntegrabilitySolution>> {
    if rho.is_zero() {
        return Err(Error::ZeroForm("integrability"));
    }
    let drho = g.d(rho)?;
    let (m, rhs) = action_matrix(rho, Some(&drho));
    let rhs = rhs.expect("requested");
    match solve_linear(&m, Some(&rhs)) {
        Ok(sol) => {
            let dim = rho.dim();
            Ok(Some(IntegrabilitySolution {
                particular: GeneralizedSection::from_coords(dim, &sol.particular),
                annihilator: sol
                    .null_basis
                    .iter()
                    .map(|v| GeneralizedSection::from_coords(dim, v))
                    .collect(),
            }))
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Whether the annihilator of a pure `ρ` is closed under the Courant bracket.
pub fn involutivity_check(rho: &Form, g: &NilAlgebra) -> Result<bool> {
    let ann = annihilator(rho)?;
    if !ann.is_pure {
        return Err(Error::Impure);
    }
    involutive(&ann.sections, g)
}

fn involutive(sections: &[GeneralizedSection], g: &NilAlgebra) -> Result<bool> {
    // closed iff adjoining every bracket leaves the rank unchanged
    let mut columns: Vec<Vec<G>> = sections.iter().map(GeneralizedSection::coords).collect();
    for (a, s) in sections.iter().enumerate() {
        for t in &sections[a + 1..] {
            columns.push(g.courant_bracket(s, t)?.coords());
        }
    }
    let m = Matrix::from_columns(2 * g.dim(), &columns);
    Ok(rank(&m)? == sections.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "GCS")]
    Gcs,
    #[serde(rename = "NOT_GCS")]
    NotGcs,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Gcs => "GCS",
            Verdict::NotGcs => "NOT_GCS",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GcsReport {
    pub pure: bool,
    #[serde(rename = "type")]
    pub kind: usize,
    pub nondegenerate: bool,
    pub closed: bool,
    pub integrable: bool,
    pub involutive: bool,
    pub verdict: Verdict,
    pub failures: Vec<String>,
}

impl GcsReport {
    pub fn is_gcs(&self) -> bool {
        self.verdict == Verdict::Gcs
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "pure: {}\ntype: {}\nnondegenerate: {}\nclosed: {}\nintegrable: {}\ninvolutive: {}\nverdict: {}\n",
            self.pure, self.kind, self.nondegenerate, self.closed, self.integrable, self.involutive, self.verdict
        );
        for f in &self.failures {
            out.push_str(&format!("failure: {f}\n"));
        }
        out
    }
}

fn report(rho: &Form, g: &NilAlgebra, structured: Option<&PureSpinorAnsatz>) -> Result<GcsReport> {
    let mut failures = Vec::new();
    if rho.is_zero() {
        return Ok(GcsReport {
            pure: false,
            kind: 0,
            nondegenerate: false,
            closed: true,
            integrable: false,
            involutive: false,
            verdict: Verdict::NotGcs,
            failures: vec!["zero form".into()],
        });
    }
    let kind = rho.lowest_degree().expect("nonzero form");
    let ann = annihilator(rho)?;
    let pure = ann.is_pure;
    let closed = g.d(rho)?.is_zero();
    let integrable = integrability_solve(rho, g)?.is_some();
    let (nondegenerate, involutive) = if pure {
        let nd = rho.dim() % 2 == 0 && !mukai_pair(rho, &rho.conj())?.is_zero();
        if let Some(a) = structured {
            if nondegenerate_ansatz(a)?.0 != nd {
                failures.push("pairing and ω^(n-k)∧Ω∧Ω̄ disagree".into());
            }
        }
        (nd, involutive(&ann.sections, g)?)
    } else {
        failures.push("not pure".into());
        (false, false)
    };
    if pure && !nondegenerate {
        failures.push("degenerate: L ∩ L̄ ≠ 0".into());
    }
    if !integrable {
        failures.push("not integrable: dρ ≠ (X+ξ)·ρ".into());
    }
    if pure && integrable != involutive {
        failures.push("Courant involutivity disagrees with integrability".into());
    }
    let verdict = if pure && nondegenerate && integrable { Verdict::Gcs } else { Verdict::NotGcs };
    Ok(GcsReport { pure, kind, nondegenerate, closed, integrable, involutive, verdict, failures })
}

/// Full verification of a form as a generalized complex structure on `g`.
pub fn check_gcs(rho: &Form, g: &NilAlgebra) -> Result<GcsReport> {
    crate::exterior::check_dims(g.dim(), rho.dim())?;
    report(rho, g, None)
}

/// As [`check_gcs`], also cross-checking the structured nondegeneracy test.
pub fn check_ansatz(a: &PureSpinorAnsatz, g: &NilAlgebra) -> Result<GcsReport> {
    crate::exterior::check_dims(g.dim(), a.dim())?;
    report(&a.to_form(), g, Some(a))
}

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::max_type_bound;
use crate::error::{Error, Result};
use crate::exterior::{blades_of_grade, Blade, Form};
use crate::nilalg::{nilpotent_degree, NilAlgebra};
use crate::scalars::linalg::{in_span, null_space};
use crate::scalars::{poly_is_zero, GaussianRational, Matrix, ParamPolynomial};

type G = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "LEM41")]
    Lem41,
    #[serde(rename = "LEM42")]
    Lem42,
    #[serde(rename = "LEM43")]
    Lem43,
    #[serde(rename = "THM45")]
    Thm45,
    #[serde(rename = "THM38")]
    Thm38,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId::Lem41, CaseId::Lem42, CaseId::Lem43, CaseId::Thm45, CaseId::Thm38];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Lem41 => "LEM41",
            CaseId::Lem42 => "LEM42",
            CaseId::Lem43 => "LEM43",
            CaseId::Thm45 => "THM45",
            CaseId::Thm38 => "THM38",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown exclusion case `{s}`")))
    }
}

/// A family of algebras and one type that the table leaves empty for them,
/// with the ansatz used to replay the nonexistence argument.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExclusionCase {
    pub id: CaseId,
    pub algebras: Vec<String>,
    pub excluded_type: usize,
    pub ansatz_family: &'static str,
    pub samples: usize,
    pub seed: u64,
}

impl ExclusionCase {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// The five cases, with 20 samples at seed 0.
pub fn exclusion_cases() -> Vec<ExclusionCase> {
    let case = |id, algebras: &[&str], excluded_type, ansatz_family| ExclusionCase {
        id,
        algebras: algebras.iter().map(|s| s.to_string()).collect(),
        excluded_type,
        ansatz_family,
        samples: 20,
        seed: 0,
    };
    vec![
        case(
            CaseId::Lem41,
            &["(0,0,0,12,14,15+23)", "(0,0,0,12,14,15+23+24)", "(0,0,0,12,14,15+24)", "(0,0,0,12,14,15)"],
            2,
            "θ2 random in V_2 \\ V_1; θ1 ranges over closed 1-forms with dθ2∧θ1 = 0; B+iω over all solutions of dρ = 0",
        ),
        case(
            CaseId::Lem42,
            &["(0,0,0,12,14,13+42)", "(0,0,0,12,14,23+24)"],
            2,
            "θ2 random of nilpotent degree 2 or 3; θ1 ranges over closed 1-forms with dθ2∧θ1 = 0; B+iω over all solutions of dρ = 0",
        ),
        case(
            CaseId::Lem43,
            &["(0,0,12,13,23,14)", "(0,0,12,13,23,14-25)"],
            2,
            "θ1 = e1 + z2·e2; θ2 random among forms in V_3 with dθ2∧θ1 = 0; B+iω = Σ k_ij e_ij over all solutions of dρ = 0",
        ),
        case(
            CaseId::Thm45,
            &["(0,0,12,13,23,14)", "(0,0,12,13,23,14-25)"],
            1,
            "θ1 = e1 + z2·e2; B+iω = Σ k_ij e_ij over all solutions of dρ = 0",
        ),
        case(
            CaseId::Thm38,
            &["(0,0,12,13,14,15)", "(0,0,12,13,14,34+52)", "(0,0,12,13,14,23+15)", "(0,0,12,13,14+23,34+52)", "(0,0,12,13,14+23,24+15)"],
            2,
            "none: the filtration bound alone",
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ReplayOutcome {
    #[serde(rename = "EXCLUDED_AT_SAMPLES")]
    ExcludedAtSamples,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample { algebra: String, frame: String, detail: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraReplay {
    pub algebra: String,
    pub samples: usize,
    /// Whether the vanishings the argument predicts held at every sample.
    pub forced_vanishings: bool,
    pub observations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayReport {
    pub case: CaseId,
    pub excluded_type: usize,
    pub samples: usize,
    pub seed: u64,
    /// Sampling is evidence for the computation, not a proof of the claim.
    pub label: &'static str,
    pub outcome: ReplayOutcome,
    pub algebras: Vec<AlgebraReplay>,
}

impl ReplayReport {
    pub fn excluded(&self) -> bool {
        self.outcome == ReplayOutcome::ExcludedAtSamples && self.algebras.iter().all(|a| a.forced_vanishings)
    }

    pub fn to_text(&self) -> String {
        let verdict = match &self.outcome {
            ReplayOutcome::ExcludedAtSamples => "EXCLUDED_AT_SAMPLES".to_string(),
            ReplayOutcome::Counterexample { algebra, frame, detail } => {
                format!("COUNTEREXAMPLE on {algebra}: Ω = {frame} ({detail})")
            }
        };
        let mut out = format!(
            "{} type {} [{}] samples={} seed={}: {verdict}\n",
            self.case, self.excluded_type, self.label, self.samples, self.seed
        );
        for a in &self.algebras {
            out.push_str(&format!(
                "  {:<26} samples={} forced vanishings {}\n",
                a.algebra,
                a.samples,
                if a.forced_vanishings { "observed" } else { "NOT observed" }
            ));
            for o in &a.observations {
                out.push_str(&format!("    {o}\n"));
            }
        }
        out
    }
}

fn rand_g(rng: &mut ChaCha8Rng) -> G {
    G::from_parts((rng.gen_range(-4..=4), rng.gen_range(1..=3)), (rng.gen_range(-4..=4), rng.gen_range(1..=3)))
}

fn rand_nonreal(rng: &mut ChaCha8Rng) -> G {
    loop {
        let z = rand_g(rng);
        if !z.is_real() {
            return z;
        }
    }
}

fn rand_nonzero(rng: &mut ChaCha8Rng) -> G {
    loop {
        let z = rand_g(rng);
        if !z.is_zero() {
            return z;
        }
    }
}

fn random_combination(rng: &mut ChaCha8Rng, basis: &[Form], dim: usize) -> Form {
    basis.iter().fold(Form::zero(dim), |acc, b| &acc + &b.scale(&rand_g(rng)))
}

fn e(dim: usize, idx: &[usize]) -> Form {
    Form::monomial(dim, idx, G::one()).expect("index in range")
}

fn blade(idx: &[usize]) -> Blade {
    Blade::from_indices(idx).expect("index in range").expect("distinct indices").0
}

/// `{x ∈ span(space) : f(x) = 0}` for a linear map into `deg`-forms.
fn kernel(space: &[Form], deg: usize, f: impl Fn(&Form) -> Form) -> Vec<Form> {
    let Some(first) = space.first() else { return Vec::new() };
    let dim = first.dim();
    let rows = blades_of_grade(dim, deg).len();
    let cols: Vec<Vec<G>> = space.iter().map(|x| f(x).coords(deg)).collect();
    let m = Matrix::from_columns(rows, &cols);
    null_space(&m)
        .expect("rational elimination never reports ambiguity")
        .into_iter()
        .map(|c| space.iter().zip(&c).fold(Form::zero(dim), |acc, (x, t)| &acc + &x.scale(t)))
        .collect()
}

/// All complex 2-forms `K` with `dK ∧ Ω = 0`, i.e. `d(e^K Ω) = 0` for closed `Ω`.
fn exponent_solutions(g: &NilAlgebra, big_omega: &Form) -> Vec<Form> {
    let dim = g.dim();
    let space: Vec<Form> = blades_of_grade(dim, 2).into_iter().map(|b| Form::from_terms(dim, [(b, G::one())])).collect();
    let deg = 3 + big_omega.lowest_degree().unwrap_or(0);
    kernel(&space, deg, |k| &g.d(k).expect("same dimension") ^ big_omega)
}

fn lift(a: &Form) -> Form<ParamPolynomial> {
    a.map(|c| ParamPolynomial::constant(c.clone()))
}

/// Top coefficient of `ω^{n−k} ∧ Ω ∧ Ω̄` with `ω = Im K` and
/// `K = Σ (u_m + i v_m) N_m` over real parameters.
fn nondegeneracy_polynomial(solutions: &[Form], big_omega: &Form, k: usize) -> ParamPolynomial {
    let dim = big_omega.dim();
    let mut omega: Form<ParamPolynomial> = Form::zero(dim);
    for (m, nm) in solutions.iter().enumerate() {
        let u = ParamPolynomial::var(&format!("u{m}"));
        let v = ParamPolynomial::var(&format!("v{m}"));
        omega = &omega + &nm.map(|c| ParamPolynomial::constant(c.imag_part()) * &u);
        omega = &omega + &nm.map(|c| ParamPolynomial::constant(c.real_part()) * &v);
    }
    let volume = lift(&(big_omega ^ &big_omega.conj()));
    (&omega.wedge_pow(dim / 2 - k) ^ &volume).top_coefficient()
}

/// `θ ∧ θ̄` over `θ = Σ (u_m + i v_m) S_m`, coefficientwise.
fn frame_is_real_everywhere(solutions: &[Form]) -> bool {
    let Some(first) = solutions.first() else { return true };
    let dim = first.dim();
    let mut theta: Form<ParamPolynomial> = Form::zero(dim);
    for (m, s) in solutions.iter().enumerate() {
        let t = ParamPolynomial::var(&format!("u{m}")) + ParamPolynomial::var(&format!("v{m}")).scale(&G::i());
        theta = &theta + &lift(s).scale(&t);
    }
    let bar = theta.conj();
    (&theta ^ &bar).terms().all(|(_, c)| poly_is_zero(c))
}

fn zero_at(forms: &[Form], b: Blade) -> bool {
    forms.iter().all(|f| f.coeff(b).is_zero())
}

enum Draw {
    /// The drawn frame has `Ω∧Ω̄ = 0`; draw again.
    Degenerate,
    Done { excluded: bool, vanishings: bool, frame: Form, note: Option<String> },
}

// θ1 from the closed 1-forms with θ1∧dθ2 = 0, then the exponent solve
fn type2_from_theta2(
    g: &NilAlgebra,
    rng: &mut ChaCha8Rng,
    theta2: &Form,
    theta1_zero_at: &[usize],
    k_zero_at: &[&[usize]],
) -> Draw {
    let dim = g.dim();
    let d2 = g.d(theta2).expect("same dimension");
    let v1 = g.filtration().space(1);
    let closed = kernel(&v1, 3, |x| x ^ &d2);
    let mut vanishings = theta1_zero_at.iter().all(|&i| zero_at(&closed, blade(&[i])));
    if closed.is_empty() || frame_is_real_everywhere(&closed) {
        let frame = theta2.clone();
        let note = Some(if closed.is_empty() { "no closed Ω".to_string() } else { "θ1∧θ̄1 ≡ 0".to_string() });
        return Draw::Done { excluded: true, vanishings, frame, note };
    }
    let theta1 = random_combination(rng, &closed, dim);
    let big_omega = &theta1 ^ theta2;
    if (&big_omega ^ &big_omega.conj()).is_zero() {
        return Draw::Degenerate;
    }
    debug_assert!(g.d(&big_omega).unwrap().is_zero());
    let sols = exponent_solutions(g, &big_omega);
    vanishings &= k_zero_at.iter().all(|idx| zero_at(&sols, blade(idx)));
    let excluded = poly_is_zero(&nondegeneracy_polynomial(&sols, &big_omega, 2));
    Draw::Done { excluded, vanishings, frame: big_omega, note: None }
}

fn draw(case: CaseId, g: &NilAlgebra, algebra: &str, rng: &mut ChaCha8Rng, round: usize) -> Draw {
    let dim = g.dim();
    let f = g.filtration();
    match case {
        CaseId::Thm45 => {
            let theta = &e(dim, &[1]) + &e(dim, &[2]).scale(&rand_nonreal(rng));
            let sols = exponent_solutions(g, &theta);
            let vanishings = [[5, 6], [4, 6], [4, 5], [3, 6]].iter().all(|idx| zero_at(&sols, blade(idx)));
            let excluded = poly_is_zero(&nondegeneracy_polynomial(&sols, &theta, 1));
            Draw::Done { excluded, vanishings, frame: theta, note: None }
        }
        CaseId::Lem43 => {
            let z2 = rand_nonreal(rng);
            let theta1 = &e(dim, &[1]) + &e(dim, &[2]).scale(&z2);
            let family = kernel(&f.space(3), 3, |x| &theta1 ^ &g.d(x).expect("same dimension"));
            let expected_span: Vec<Vec<G>> = [e(dim, &[1]), e(dim, &[2]), e(dim, &[3]), &e(dim, &[4]) + &e(dim, &[5]).scale(&z2)]
                .iter()
                .map(|x| x.coords(1))
                .collect();
            let mut vanishings = family.iter().all(|t| in_span(&expected_span, &t.coords(1)).expect("exact"));
            let theta2 = random_combination(rng, &family, dim);
            let big_omega = &theta1 ^ &theta2;
            if (&big_omega ^ &big_omega.conj()).is_zero() {
                return Draw::Degenerate;
            }
            let sols = exponent_solutions(g, &big_omega);
            // B + iω vanishes on the leaves of Ω∧Ω̄
            let volume = &big_omega ^ &big_omega.conj();
            vanishings &= sols.iter().all(|k| (k ^ &volume).is_zero());
            let excluded = poly_is_zero(&nondegeneracy_polynomial(&sols, &big_omega, 2));
            Draw::Done { excluded, vanishings, frame: big_omega, note: None }
        }
        CaseId::Lem41 => {
            let theta2 = loop {
                let t = random_combination(rng, &f.space(2), dim);
                if !t.is_zero() && nilpotent_degree(&t, &f).expect("nonzero") == 2 {
                    break t;
                }
            };
            type2_from_theta2(g, rng, &theta2, &[3], &[&[5, 6]])
        }
        CaseId::Lem42 => {
            if round % 2 == 0 {
                let theta2 = loop {
                    let t = random_combination(rng, &f.space(2), dim);
                    if !t.is_zero() && nilpotent_degree(&t, &f).expect("nonzero") == 2 {
                        break t;
                    }
                };
                type2_from_theta2(g, rng, &theta2, &[3], &[])
            } else {
                let theta2 = &(&random_combination(rng, &f.space(2), dim) + &e(dim, &[5]).scale(&rand_nonzero(rng)))
                    + &e(dim, &[6]).scale(&rand_nonzero(rng));
                let killed: &[usize] = if algebra == "(0,0,0,12,14,13+42)" { &[3, 2] } else { &[3, 1] };
                type2_from_theta2(g, rng, &theta2, killed, &[])
            }
        }
        CaseId::Thm38 => unreachable!("no sampling"),
    }
}

/// Replays a nonexistence argument on random members of its ansatz family.
pub fn replay_exclusion(case: &ExclusionCase) -> Result<ReplayReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
    let mut algebras = Vec::new();
    let mut outcome = ReplayOutcome::ExcludedAtSamples;
    for text in &case.algebras {
        let g: NilAlgebra = text.parse()?;
        if case.id == CaseId::Thm38 {
            let bound = max_type_bound(&g);
            algebras.push(AlgebraReplay {
                algebra: text.clone(),
                samples: 0,
                forced_vanishings: bound < case.excluded_type,
                observations: vec![format!("type bound {bound}")],
            });
            if bound >= case.excluded_type {
                outcome = ReplayOutcome::Counterexample {
                    algebra: text.clone(),
                    frame: String::new(),
                    detail: format!("bound {bound} allows type {}", case.excluded_type),
                };
            }
            continue;
        }
        let mut vanishings = true;
        let mut notes: Vec<String> = Vec::new();
        let mut done = 0;
        let mut misses = 0;
        while done < case.samples {
            match draw(case.id, &g, text, &mut rng, done) {
                Draw::Degenerate => {
                    misses += 1;
                    if misses > 100 * (case.samples + 1) {
                        return Err(super::catalog_error(format!("{}: ansatz keeps degenerating", case.id)));
                    }
                }
                Draw::Done { excluded, vanishings: v, frame, note } => {
                    done += 1;
                    vanishings &= v;
                    if let Some(n) = note {
                        if !notes.contains(&n) {
                            notes.push(n);
                        }
                    }
                    if !excluded && outcome == ReplayOutcome::ExcludedAtSamples {
                        outcome = ReplayOutcome::Counterexample {
                            algebra: text.clone(),
                            frame: frame.to_string(),
                            detail: "nondegeneracy polynomial is not identically zero".into(),
                        };
                    }
                }
            }
        }
        algebras.push(AlgebraReplay { algebra: text.clone(), samples: done, forced_vanishings: vanishings, observations: notes });
    }
    Ok(ReplayReport {
        case: case.id,
        excluded_type: case.excluded_type,
        samples: case.samples,
        seed: case.seed,
        label: "EVIDENCE",
        outcome,
        algebras,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_ids_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
        }
        assert!("LEM44".parse::<CaseId>().is_err());
    }

    #[test]
    fn exponent_solutions_close_the_spinor() {
        let g: NilAlgebra = "(0,0,12,13,23,14)".parse().unwrap();
        let theta = &e(6, &[1]) + &e(6, &[2]).scale(&G::from_parts((1, 2), (3, 1)));
        for k in exponent_solutions(&g, &theta) {
            let rho = &k.exp().unwrap() ^ &theta;
            assert!(g.d(&rho).unwrap().is_zero());
        }
    }

    #[test]
    fn nondegeneracy_polynomial_detects_a_witness() {
        // the torus admits type 1 with θ = e1 + i e2, so the quantity is not identically zero
        let g = NilAlgebra::abelian(6);
        let theta = &e(6, &[1]) + &e(6, &[2]).scale(&G::i());
        let sols = exponent_solutions(&g, &theta);
        assert_eq!(sols.len(), 15);
        assert!(!poly_is_zero(&nondegeneracy_polynomial(&sols, &theta, 1)));
    }

    #[test]
    fn short_replays() {
        for case in exclusion_cases() {
            let r = replay_exclusion(&case.clone().with_samples(2)).unwrap();
            assert!(r.excluded(), "{}", r.to_text());
        }
    }
}

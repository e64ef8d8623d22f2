use serde::Serialize;

use super::type_bound;
use crate::cohomology::{betti, is_exact, spans_cohomology, symplectic_decision, SymplecticDecision};
use crate::error::Result;
use crate::exterior::{Form, Polyvector};
use crate::gcs::{check_gcs, projective_ratio, projectively_equal};
use crate::nilalg::{parse_form, NilAlgebra};
use crate::scalars::{poly_is_zero, GaussianRational, ParamPolynomial};
use crate::transforms::{b_transform, beta_transform};

type G = GaussianRational;

/// Nilpotent, with `b_2 = 3`, admitting neither symplectic nor
/// generalized complex structures of type 1 in the expected way.
pub const EIGHT_DIM_ALGEBRA: &str = "(0,0,12,13,14,15,16,36-45-27)";

const EIGHT_DIM_H2: [&str; 3] = ["23", "34-25", "17"];
/// The leaf algebra in its normal form.
pub const EIGHT_DIM_LEAF: &str = "(0,0,0,0,0,12+34)";
const IWASAWA: &str = "(0,0,0,0,13-24,14+23)";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EightDReport {
    pub algebra: String,
    pub nil_index: usize,
    pub filtration_dims: Vec<usize>,
    pub type_bound: usize,
    pub b2: usize,
    pub h2_representatives: Vec<String>,
    pub h2_spanned: bool,
    /// Fourfold products of the representatives, with repetition, that are exact.
    pub exact_products: usize,
    pub total_products: usize,
    pub symplectic: bool,
    /// `θ ∧ θ̄` is a multiple of `e12` for every closed complex 1-form `θ`.
    pub closed_theta_in_e12: bool,
    pub leaf_algebra: String,
    pub leaf_symplectic: bool,
    /// Decision on the normal form of the leaf, for comparison.
    pub normal_leaf_symplectic: bool,
    pub failures: Vec<String>,
}

impl EightDReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "algebra: {}\nnil index: {}\nfiltration dims: {:?}\ntype bound: {}\nb2: {}\nH2 representatives: {}\nH2 spanned: {}\n\
             exact fourfold products: {}/{}\nsymplectic: {}\nclosed θ∧θ̄ ∈ ⟨e12⟩: {}\nleaf: {}\nleaf symplectic: {}\n{EIGHT_DIM_LEAF} symplectic: {}\n",
            self.algebra,
            self.nil_index,
            self.filtration_dims,
            self.type_bound,
            self.b2,
            self.h2_representatives.join(", "),
            self.h2_spanned,
            self.exact_products,
            self.total_products,
            self.symplectic,
            self.closed_theta_in_e12,
            self.leaf_algebra,
            self.leaf_symplectic,
            self.normal_leaf_symplectic,
        );
        for f in &self.failures {
            out.push_str(&format!("failure: {f}\n"));
        }
        out.push_str(if self.passed() { "verdict: PASS\n" } else { "verdict: FAIL\n" });
        out
    }
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for m in multisets(n, k - 1) {
        let start = m.last().copied().unwrap_or(0);
        for i in start..n {
            let mut next = m.clone();
            next.push(i);
            out.push(next);
        }
    }
    out
}

/// Verifies the eight-dimensional example: type 1 is the only type the
/// filtration allows, there is no symplectic form, and the 6-dimensional
/// algebra on `e3, …, e8` that a type-1 structure would make symplectic
/// is not symplectic either.
pub fn verify_8d() -> Result<EightDReport> {
    let g: NilAlgebra = EIGHT_DIM_ALGEBRA.parse()?;
    let mut failures = Vec::new();
    let f = g.filtration();
    let bound = type_bound(&g);
    if f.nil_index() != 7 {
        failures.push(format!("nil index {} ≠ 7", f.nil_index()));
    }
    if bound.bound != 1 {
        failures.push(format!("type bound {} ≠ 1", bound.bound));
    }

    let b2 = betti(&g).b(2);
    let reps: Vec<Form> = EIGHT_DIM_H2.iter().map(|s| parse_form(s, &g)).collect::<Result<_>>()?;
    let h2_spanned = b2 == reps.len() && spans_cohomology(&g, 2, &reps)?;
    if !h2_spanned {
        failures.push(format!("representatives do not span H2 (b2 = {b2})"));
    }
    let products = multisets(reps.len(), 4);
    let mut exact_products = 0;
    for m in &products {
        let p = m.iter().fold(Form::one(8), |acc, &i| &acc ^ &reps[i]);
        if is_exact(&p, &g)?.is_some() {
            exact_products += 1;
        }
    }
    if exact_products != products.len() {
        failures.push(format!("only {exact_products}/{} fourfold products are exact", products.len()));
    }
    let symplectic = symplectic_decision(&g)?.is_yes();
    if symplectic {
        failures.push("found a symplectic form".into());
    }

    // generic closed complex 1-form over real parameters
    let closed = f.space(1);
    let mut theta: Form<ParamPolynomial> = Form::zero(8);
    for (m, c) in closed.iter().enumerate() {
        let z = ParamPolynomial::var(&format!("u{m}")) + ParamPolynomial::var(&format!("v{m}")).scale(&G::i());
        theta = &theta + &c.map(|x| ParamPolynomial::constant(x.clone()) * &z);
    }
    let e12 = parse_form("12", &g)?.terms().next().map(|(b, _)| *b).expect("monomial");
    let closed_theta_in_e12 = closed.len() == 2
        && (&theta ^ &theta.conj()).terms().all(|(b, c)| *b == e12 || poly_is_zero(c));
    if !closed_theta_in_e12 {
        failures.push("θ∧θ̄ leaves ⟨e12⟩".into());
    }

    let leaf = g.subalgebra(&(3..=8).collect::<Vec<_>>())?;
    let leaf_symplectic = match symplectic_decision(&leaf)? {
        SymplecticDecision::Yes { .. } => true,
        SymplecticDecision::No { .. } => false,
    };
    let leaf_text = leaf.to_compact().unwrap_or_else(|| leaf.to_json());
    if leaf_symplectic {
        failures.push(format!("leaf {leaf_text} is symplectic"));
    }
    let normal_leaf_symplectic = symplectic_decision(&EIGHT_DIM_LEAF.parse()?)?.is_yes();
    if normal_leaf_symplectic {
        failures.push(format!("{EIGHT_DIM_LEAF} is symplectic"));
    }

    Ok(EightDReport {
        algebra: EIGHT_DIM_ALGEBRA.to_string(),
        nil_index: f.nil_index(),
        filtration_dims: f.dims(),
        type_bound: bound.bound,
        b2,
        h2_representatives: EIGHT_DIM_H2.iter().map(|s| s.to_string()).collect(),
        h2_spanned,
        exact_products,
        total_products: products.len(),
        symplectic,
        closed_theta_in_e12,
        leaf_algebra: leaf_text,
        leaf_symplectic,
        normal_leaf_symplectic,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IwasawaStep {
    pub label: String,
    pub form: String,
    pub expected: String,
    /// The computed form is a nonzero multiple of the expected one.
    pub projective: bool,
    /// The multiple, when it exists.
    pub ratio: Option<String>,
    pub gcs: bool,
    #[serde(rename = "type")]
    pub kind: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IwasawaReport {
    pub algebra: String,
    pub steps: Vec<IwasawaStep>,
    pub endpoints_agree: bool,
    pub failures: Vec<String>,
}

impl IwasawaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("algebra: {}\n", self.algebra);
        for s in &self.steps {
            out.push_str(&format!(
                "{}\n  computed: {}\n  expected: {}\n  projective match: {}{}\n  {} of type {}\n",
                s.label,
                s.form,
                s.expected,
                s.projective,
                s.ratio.as_ref().map(|r| format!(" (ratio {r})")).unwrap_or_default(),
                if s.gcs { "GCS" } else { "NOT_GCS" },
                s.kind
            ));
        }
        out.push_str(&format!("endpoints agree: {}\n", self.endpoints_agree));
        for f in &self.failures {
            out.push_str(&format!("failure: {f}\n"));
        }
        out.push_str(if self.passed() { "verdict: PASS\n" } else { "verdict: FAIL\n" });
        out
    }
}

fn vector(text: &str) -> Polyvector {
    // 1-vectors written like forms: "3-i4" is ∂3 − i∂4
    let f: Form = crate::nilalg::parse_form_expr(&format!("({text})"), 6).expect("literal").to_form();
    Polyvector::from_coords(6, 1, &f.coords(1))
}

/// Two β-transforms of the complex structures on the Iwasawa algebra,
/// followed by closed B-fields, reach the same type-1 structure.
pub fn iwasawa_demo() -> Result<IwasawaReport> {
    let g: NilAlgebra = IWASAWA.parse()?;
    let form = |s: &str| parse_form(s, &g);
    let b = form("35-46")?;
    let quarter = |s: i64| G::from_ratio(s, 4);
    let paths = [
        ("A", "(1+i2)(3+i4)(5+i6)", (vector("3-i4") ^ vector("5-i6")).scale(&quarter(-1)), "(1+i2)exp(-35+46+i(-45-36))", b.clone()),
        ("B", "(1+i2)(3-i4)(5-i6)", (vector("3+i4") ^ vector("5+i6")).scale(&quarter(1)), "(1+i2)exp(35-46+i(-45-36))", -&b),
    ];
    let endpoint_text = "(1+i2)exp i(-45-36)";
    let endpoint = form(endpoint_text)?;
    let mut steps = Vec::new();
    let mut failures = Vec::new();
    let mut ends = Vec::new();
    let mut step = |label: String, got: &Form, expected: &Form, expected_text: &str| -> Result<()> {
        let report = check_gcs(got, &g)?;
        let ratio = projective_ratio(got, expected);
        if ratio.is_none() {
            failures.push(format!("{label}: not a multiple of {expected_text}"));
        }
        if !report.is_gcs() {
            failures.push(format!("{label}: not a generalized complex structure"));
        }
        steps.push(IwasawaStep {
            label,
            form: got.to_string(),
            expected: expected_text.to_string(),
            projective: ratio.is_some(),
            ratio: ratio.map(|r| r.to_string()),
            gcs: report.is_gcs(),
            kind: report.kind,
        });
        Ok(())
    };
    for (name, rho_text, beta, target_text, bfield) in paths {
        let rho = form(rho_text)?;
        step(format!("{name}: complex structure"), &rho, &rho, rho_text)?;
        let lowered = beta_transform(&rho, &beta)?;
        step(format!("{name}: β-transform"), &lowered, &form(target_text)?, target_text)?;
        let shifted = b_transform(&lowered, &bfield, &g)?;
        step(format!("{name}: B-transform by {bfield}"), &shifted, &endpoint, endpoint_text)?;
        ends.push(shifted);
    }
    let endpoints_agree = projectively_equal(&ends[0], &ends[1]);
    if !endpoints_agree {
        failures.push("the two paths end at different structures".into());
    }
    Ok(IwasawaReport { algebra: IWASAWA.to_string(), steps, endpoints_agree, failures })
}

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilgc::catalog::{
    exclusion_cases, iwasawa_demo, replay_exclusion, type_bound, verify_8d, verify_table, witness_ansatz, CaseId,
};
use nilgc::cohomology::{betti, symplectic_decision, SymplecticDecision};
use nilgc::error::Error;
use nilgc::exterior::{Form, Polyvector};
use nilgc::gcs::{check_ansatz, check_gcs, GcsReport};
use nilgc::nilalg::{form_from_json, form_to_json, parse_form_expr, FormExpr, NilAlgebra};
use nilgc::scalars::GaussianRational;
use nilgc::transforms::{b_transform, beta_transform, schouten};

#[derive(Parser)]
#[command(name = "nilgc", version, about = "Generalized complex structures on nilpotent Lie algebras")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AlgebraArg {
    /// Compact notation, e.g. "(0,0,12,13,23,14+25)".
    #[arg(long)]
    algebra: Option<String>,
    /// JSON file `{"dim": n, "d": {...}}`.
    #[arg(long)]
    algebra_file: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormArg {
    /// Compact notation, e.g. "(1+i2)exp i(36-45)"; a bare 2-form ω means exp(iω).
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    /// JSON list of `{"c": scalar, "blade": [...]}` terms.
    #[arg(long)]
    form_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an algebra and check d² = 0 and the Malcev condition.
    Validate(AlgebraArg),
    /// All Betti numbers.
    Betti(AlgebraArg),
    /// The filtration V_1 ⊂ V_2 ⊂ … by closed-ness modulo lower terms.
    Filtration(AlgebraArg),
    /// Largest type allowed by the filtration.
    Bound(AlgebraArg),
    /// Full verification of a form as a generalized complex structure.
    Check {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        form: FormArg,
    },
    /// Verify the six-dimensional table.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Replay the nonexistence arguments behind the table's dashes.
    Exclusions {
        #[command(subcommand)]
        action: ExclusionAction,
    },
    /// Decide exactly whether a symplectic form exists.
    Symplectic {
        #[command(subcommand)]
        action: SymplecticAction,
    },
    /// Apply a B-field or β-transform and check the result.
    Transform {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        form: FormArg,
        /// Closed real 2-form, e.g. "35-46".
        #[arg(long, allow_hyphen_values = true, conflicts_with = "beta", required_unless_present = "beta")]
        b_field: Option<String>,
        /// Bivector in form notation over ∂_i: "c×(3-i4)(5-i6)" or a sum like "35-i36".
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// The two deformation paths on the Iwasawa algebra.
    IwasawaDemo,
    /// The eight-dimensional algebra without generalized complex structures.
    #[command(name = "counterexample-8d")]
    Counterexample8d,
}

#[derive(Subcommand)]
enum TableAction {
    Verify,
}

#[derive(Subcommand)]
enum ExclusionAction {
    Replay {
        /// LEM41, LEM42, LEM43, THM45 or THM38; all cases when omitted.
        #[arg(long = "case")]
        case: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum SymplecticAction {
    Decide(AlgebraArg),
}

/// Failure modes, mapped onto exit codes 1 and 2.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::DimensionMismatch { .. } | Error::TooLarge(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_algebra(a: &AlgebraArg) -> Result<NilAlgebra, Failure> {
    match (&a.algebra, &a.algebra_file) {
        (Some(text), _) => Ok(text.parse()?),
        (None, Some(path)) => Ok(NilAlgebra::from_json(&read(path)?)?),
        (None, None) => Err(Failure::Usage("an algebra is required".into())),
    }
}

/// Reads the form argument: compact text keeps its structure for the
/// cross-checks, a JSON file is taken literally.
fn load_form(f: &FormArg, g: &NilAlgebra) -> Result<(Form, Option<String>), Failure> {
    match (&f.form, &f.form_file) {
        (Some(text), _) => {
            let expr = parse_form_expr(text, g.dim())?;
            Ok((expr.spinor(), Some(text.clone())))
        }
        (None, Some(path)) => Ok((form_from_json(&read(path)?, g.dim())?, None)),
        (None, None) => Err(Failure::Usage("a form is required".into())),
    }
}

fn report_for(rho: &Form, text: &Option<String>, g: &NilAlgebra) -> Result<GcsReport, Failure> {
    let ansatz = text.as_ref().and_then(|t| witness_ansatz(t, g).ok());
    Ok(match ansatz {
        Some(a) => check_ansatz(&a, g)?,
        None => check_gcs(rho, g)?,
    })
}

fn form_value(a: &Form) -> Value {
    json!({ "text": a.to_string(), "terms": serde_json::from_str::<Value>(&form_to_json(a)).expect("valid JSON") })
}

// a closed pipe is not an error worth reporting
fn emit(json_mode: bool, value: Value, text: String) {
    let mut out = if json_mode { serde_json::to_string_pretty(&value).expect("plain data") } else { text };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    let _ = std::io::stdout().write_all(out.as_bytes());
}

fn algebra_name(g: &NilAlgebra) -> String {
    g.to_compact().unwrap_or_else(|| format!("{}-dimensional algebra", g.dim()))
}

fn parse_beta(text: &str, dim: usize) -> Result<Polyvector, Failure> {
    let (scale, body) = match text.split_once(['×', '*']) {
        Some((c, rest)) if rest.trim_start().starts_with('(') => {
            (c.trim().parse::<GaussianRational>().map_err(|e| Failure::Usage(e.to_string()))?, rest)
        }
        _ => (GaussianRational::from_integer(1), text),
    };
    let bivector_form = match parse_form_expr(body, dim)? {
        FormExpr::TwoForm(w) => w,
        FormExpr::Spinor { thetas, exponent } if thetas.len() == 2 && exponent.is_zero() => &thetas[0] ^ &thetas[1],
        _ => return Err(Failure::Usage(format!("`{text}` is not a bivector"))),
    };
    Ok(Polyvector::from_coords(dim, 2, &bivector_form.coords(2)).scale(&scale))
}

fn run(cli: &Cli) -> Outcome {
    let js = cli.json;
    match &cli.command {
        Command::Validate(a) => {
            let g = load_algebra(a)?;
            let f = g.filtration();
            let name = algebra_name(&g);
            emit(
                js,
                json!({ "algebra": name, "dim": g.dim(), "nil_index": f.nil_index(), "valid": true,
                        "json": serde_json::from_str::<Value>(&g.to_json()).expect("valid JSON") }),
                format!("{name}: valid nilpotent algebra, dimension {}, nilpotency index {}", g.dim(), f.nil_index()),
            );
            Ok(true)
        }
        Command::Betti(a) => {
            let g = load_algebra(a)?;
            let b = betti(&g);
            let ok = b.check_invariants();
            emit(
                js,
                json!({ "algebra": algebra_name(&g), "betti": b.0, "invariants": ok.is_ok() }),
                match &ok {
                    Ok(()) => format!("b = {b}"),
                    Err(e) => format!("b = {b}\nfailure: {e}"),
                },
            );
            Ok(ok.is_ok())
        }
        Command::Filtration(a) => {
            let g = load_algebra(a)?;
            let f = g.filtration();
            let spaces: Vec<Vec<String>> =
                (1..=f.nil_index()).map(|i| f.space(i).iter().map(Form::to_string).collect()).collect();
            let mut text = format!("nil index {}\n", f.nil_index());
            for (i, s) in spaces.iter().enumerate() {
                text.push_str(&format!("V_{} (dim {}): {}\n", i + 1, s.len(), s.join(", ")));
            }
            emit(js, json!({ "algebra": algebra_name(&g), "nil_index": f.nil_index(), "dims": f.dims(), "spaces": spaces }), text);
            Ok(true)
        }
        Command::Bound(a) => {
            let g = load_algebra(a)?;
            let b = type_bound(&g);
            let j = b.jump_start.map_or("none".to_string(), |j| j.to_string());
            emit(
                js,
                json!({ "algebra": algebra_name(&g), "nil_index": b.nil_index, "dims": g.filtration().dims(),
                        "jump_start": b.jump_start, "bound": b.bound }),
                format!("nil index {}, jumps of one from j = {j}: types above {} excluded", b.nil_index, b.bound),
            );
            Ok(true)
        }
        Command::Check { algebra, form } => {
            let g = load_algebra(algebra)?;
            let (rho, text) = load_form(form, &g)?;
            let r = report_for(&rho, &text, &g)?;
            emit(js, serde_json::to_value(&r).expect("plain data"), r.to_text());
            Ok(r.is_gcs())
        }
        Command::Table { action: TableAction::Verify } => {
            let r = verify_table()?;
            emit(js, serde_json::from_str(&r.to_json()).expect("valid JSON"), r.to_text());
            Ok(r.passed())
        }
        Command::Exclusions { action: ExclusionAction::Replay { case, samples, seed } } => {
            let wanted = case.as_deref().map(str::parse::<CaseId>).transpose()?;
            let mut reports = Vec::new();
            for c in exclusion_cases().into_iter().filter(|c| wanted.is_none_or(|w| w == c.id)) {
                let c = match samples {
                    Some(n) => c.with_samples(*n),
                    None => c,
                };
                let c = match seed {
                    Some(s) => c.with_seed(*s),
                    None => c,
                };
                reports.push(replay_exclusion(&c)?);
            }
            let ok = reports.iter().all(|r| r.excluded());
            let text: String = reports.iter().map(|r| r.to_text()).collect();
            emit(js, serde_json::to_value(&reports).expect("plain data"), text);
            Ok(ok)
        }
        Command::Symplectic { action: SymplecticAction::Decide(a) } => {
            let g = load_algebra(a)?;
            let name = algebra_name(&g);
            // either answer is a certified decision
            Ok(match symplectic_decision(&g)? {
                SymplecticDecision::Yes { witness, top } => {
                    emit(
                        js,
                        json!({ "algebra": name, "decision": "YES", "witness": form_value(&witness), "top": top.to_string() }),
                        format!("YES: ω = {witness}, top coefficient of ω^n = {top}"),
                    );
                    true
                }
                SymplecticDecision::No { closed_dim } => {
                    emit(
                        js,
                        json!({ "algebra": name, "decision": "NO", "closed_2_forms": closed_dim }),
                        format!("NO: the top power vanishes identically over all {closed_dim} closed 2-forms"),
                    );
                    true
                }
            })
        }
        Command::Transform { algebra, form, b_field, beta } => {
            let g = load_algebra(algebra)?;
            let (rho, _) = load_form(form, &g)?;
            let (kind, out, extra) = match (b_field, beta) {
                (Some(b), _) => {
                    let b = match parse_form_expr(b, g.dim())? {
                        FormExpr::TwoForm(w) => w,
                        _ => return Err(Failure::Usage("--b-field takes a 2-form".into())),
                    };
                    ("B-field", b_transform(&rho, &b, &g)?, json!({ "b_field": form_value(&b) }))
                }
                (None, Some(text)) => {
                    let beta = parse_beta(text, g.dim())?;
                    let sq = schouten(&beta, &beta, &g)?;
                    ("β", beta_transform(&rho, &beta)?, json!({ "beta": beta.to_string(), "schouten_square_zero": sq.is_zero() }))
                }
                (None, None) => return Err(Failure::Usage("one of --b-field, --beta is required".into())),
            };
            let r = check_gcs(&out, &g)?;
            let mut text = format!("{kind} transform: {out}\n");
            if let Some(sq) = extra.get("schouten_square_zero") {
                text.push_str(&format!("[β,β] = 0: {sq}\n"));
            }
            text.push_str(&r.to_text());
            emit(
                js,
                json!({ "transform": kind, "input": form_value(&rho), "parameters": extra, "result": form_value(&out),
                        "report": serde_json::to_value(&r).expect("plain data") }),
                text,
            );
            Ok(r.is_gcs())
        }
        Command::IwasawaDemo => {
            let r = iwasawa_demo()?;
            emit(js, serde_json::from_str(&r.to_json()).expect("valid JSON"), r.to_text());
            Ok(r.passed())
        }
        Command::Counterexample8d => {
            let r = verify_8d()?;
            let mut text = r.to_text();
            if r.passed() {
                text.push_str("no left-invariant generalized complex structure\n");
            }
            emit(js, serde_json::from_str(&r.to_json()).expect("valid JSON"), text);
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

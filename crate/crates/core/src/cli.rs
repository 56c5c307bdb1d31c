//! Command-line front end. Every command prints one canonical JSON report on
//! stdout (keys sorted, always including `"summary"`) and repeats the summary
//! on stderr.
//!
//! Exit codes: `0` success / virtually nilpotent, `10` not virtually
//! nilpotent or refutation not applicable, `1` failed certificate check or a
//! suspected theorem violation, `2` input error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::endomorphism::{EndoForm, Endomorphism, Injectivity, DEFAULT_KERNEL_SEARCH_BOUND};
use crate::group::GroupDescriptor;
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::nilpotency::is_virtually_nilpotent;
use crate::scale_invariance::{
    b_matrix, bounded_intersection, certificate_check, fixed_point_of_square, lemma25_m,
    refute_strong_scale_invariance, Certificate, NotApplicable, Refutation, ScaleError,
};
use crate::serial::{to_canonical_json, EndoDoc, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 10;

#[derive(Parser, Debug)]
#[command(name = "semidirect", version, about = "Exact computations in Z^n ⋊_A Z")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide virtual nilpotency of Z^n ⋊_A Z.
    Classify {
        /// Matrix document, or `-` for stdin.
        matrix: PathBuf,
    },
    /// Analyse an endomorphism given by generator images.
    Endo {
        /// Endomorphism document, or `-` for stdin.
        file: PathBuf,
        #[command(subcommand)]
        action: EndoAction,
    },
    /// Verify a certificate document.
    Check { certificate: PathBuf },
    /// Exponent m with B_m ≡ 0 (mod r).
    Lemma25 {
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: BigInt,
    },
    /// Smith normal form U A V = D.
    Snf { matrix: PathBuf },
}

#[derive(Subcommand, Debug)]
enum EndoAction {
    /// Check the defining relations and report structure and injectivity.
    Validate,
    /// Index of the image subgroup.
    Index,
    /// Non-trivial fixed point of f².
    FixedPoint,
    /// Build a certificate against strong scale-invariance.
    Refute {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Where to write the certificate; printed inside the report otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Elements of a box lying in f^k(G) for every k up to the depth.
    Intersect {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        radius: u32,
    },
}

/// A matrix document wrapped with its schema version; bare arrays are also
/// accepted.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WrappedMatrix {
    schema_version: u32,
    matrix: IntMatrix,
}

struct Outcome {
    code: i32,
    report: Value,
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl ToString) -> Failure {
    Failure { code: EXIT_INPUT, message: message.to_string() }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command, stdin) {
        Ok(Outcome { code, report }) => {
            let summary = report.get("summary").and_then(Value::as_str).unwrap_or_default().to_string();
            let _ = writeln!(stdout, "{}", to_canonical_json(&report));
            let _ = writeln!(stderr, "{summary}");
            code
        }
        Err(Failure { code, message }) => {
            let _ = writeln!(stderr, "error: {message}");
            code
        }
    }
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut s = String::new();
    if path == Path::new("-") {
        stdin.read_to_string(&mut s).map_err(|e| input_error(format!("reading stdin: {e}")))?;
    } else {
        s = fs::read_to_string(path).map_err(|e| input_error(format!("reading {}: {e}", path.display())))?;
    }
    Ok(s)
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| input_error(format!("schema error: {e}")))
}

fn check_version(v: u32) -> Result<(), Failure> {
    if v != SCHEMA_VERSION {
        return Err(input_error(format!("schema error: unsupported schema_version {v}")));
    }
    Ok(())
}

fn read_matrix(path: &Path, stdin: &mut dyn Read) -> Result<IntMatrix, Failure> {
    let text = read_input(path, stdin)?;
    if text.trim_start().starts_with('[') {
        return parse(&text);
    }
    let w: WrappedMatrix = parse(&text)?;
    check_version(w.schema_version)?;
    Ok(w.matrix)
}

fn read_endo(path: &Path, stdin: &mut dyn Read) -> Result<Endomorphism, Failure> {
    let doc: EndoDoc = parse(&read_input(path, stdin)?)?;
    check_version(doc.schema_version)?;
    doc.into_endomorphism().map_err(input_error)
}

fn with_summary(mut report: Value, summary: String) -> Value {
    report.as_object_mut().expect("reports are objects").insert("summary".into(), Value::String(summary));
    report
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize infallibly")
}

fn dec(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    match command {
        Command::Classify { matrix } => {
            let a = read_matrix(&matrix, stdin)?;
            GroupDescriptor::new(a.clone()).map_err(input_error)?;
            let v = is_virtually_nilpotent(&a).map_err(input_error)?;
            let (code, summary) = match (&v.witness_z, v.nilpotency_degree) {
                (Some(z), Some(k)) if v.virtually_nilpotent => {
                    (EXIT_OK, format!("virtually nilpotent (z={z}, degree {k})"))
                }
                _ => (EXIT_NEGATIVE, "not virtually nilpotent".to_string()),
            };
            Ok(Outcome { code, report: with_summary(to_value(&v), summary) })
        }
        Command::Endo { file, action } => {
            let f = read_endo(&file, stdin)?;
            endo_action(&f, action)
        }
        Command::Check { certificate } => {
            let c: Certificate = parse(&read_input(&certificate, stdin)?)?;
            let report = certificate_check(&c);
            let (code, summary) = if report.ok {
                (EXIT_OK, "certificate valid".to_string())
            } else {
                (EXIT_CHECK_FAILED, format!("certificate rejected: {}", report.diagnoses.join("; ")))
            };
            Ok(Outcome { code, report: with_summary(to_value(&report), summary) })
        }
        Command::Lemma25 { matrix, r } => {
            let a = read_matrix(&matrix, stdin)?;
            let m = lemma25_m(&a, &r).map_err(input_error)?;
            let report = json!({
                "r": dec(&r),
                "m": m.to_string(),
                "b_m": to_value(&b_matrix(&a, m)),
            });
            Ok(Outcome { code: EXIT_OK, report: with_summary(report, format!("m = {m}")) })
        }
        Command::Snf { matrix } => {
            let a = read_matrix(&matrix, stdin)?;
            let s = smith_normal_form(&a);
            let factors: Vec<String> = s.invariant_factors().iter().map(ToString::to_string).collect();
            let report = json!({
                "U": to_value(&s.u),
                "D": to_value(&s.d),
                "V": to_value(&s.v),
                "invariant_factors": factors,
            });
            let summary = format!("invariant factors [{}]", factors.join(", "));
            Ok(Outcome { code: EXIT_OK, report: with_summary(report, summary) })
        }
    }
}

fn injectivity_value(i: &Injectivity) -> Value {
    match i {
        Injectivity::Injective => json!({ "status": "injective" }),
        Injectivity::NotInjective { kernel_witness } => {
            json!({ "status": "not_injective", "kernel_witness": to_value(kernel_witness) })
        }
        Injectivity::Undecided { bound } => json!({ "status": "undecided", "search_bound": bound }),
    }
}

fn scale_failure(e: ScaleError) -> Failure {
    match e {
        ScaleError::TheoremViolationSuspected(_) | ScaleError::FixedPointEquationFailed(_) => {
            Failure { code: EXIT_CHECK_FAILED, message: e.to_string() }
        }
        e => input_error(e),
    }
}

fn endo_action(f: &Endomorphism, action: EndoAction) -> Result<Outcome, Failure> {
    let g = f.descriptor();
    match action {
        EndoAction::Validate => {
            let form = f.form().map_err(input_error)?;
            let injectivity = f.injectivity(DEFAULT_KERNEL_SEARCH_BOUND).map_err(input_error)?;
            let (form_value, kind) = match &form {
                EndoForm::Structured(s) => (json!({ "structured": to_value(s) }), "structured"),
                EndoForm::General(h) => (json!({ "general": { "h": to_value(h) } }), "general"),
            };
            let status = match injectivity {
                Injectivity::Injective => "injective",
                Injectivity::NotInjective { .. } => "not injective",
                Injectivity::Undecided { .. } => "injectivity undecided",
            };
            let report = json!({
                "valid": true,
                "form": form_value,
                "injectivity": injectivity_value(&injectivity),
            });
            Ok(Outcome { code: EXIT_OK, report: with_summary(report, format!("valid {kind} endomorphism, {status}")) })
        }
        EndoAction::Index => {
            let index = f.image_index().map_err(input_error)?;
            let report = json!({ "image_index": dec(&index) });
            Ok(Outcome { code: EXIT_OK, report: with_summary(report, format!("[G : f(G)] = {index}")) })
        }
        EndoAction::FixedPoint => {
            let r = fixed_point_of_square(f).map_err(scale_failure)?;
            let summary =
                format!("fixed point {} of f² ({} branch)", r.point, to_value(&r.branch).as_str().unwrap_or(""));
            Ok(Outcome { code: EXIT_OK, report: with_summary(to_value(&r), summary) })
        }
        EndoAction::Refute { depth, out } => {
            match refute_strong_scale_invariance(g, f, depth).map_err(scale_failure)? {
                Refutation::Certificate(c) => {
                    let mut report = json!({
                        "fixed_point": to_value(&c.fixed_point),
                        "depth_checked": c.depth_checked,
                    });
                    match &out {
                        Some(path) => {
                            fs::write(path, to_canonical_json(&*c) + "\n")
                                .map_err(|e| input_error(format!("writing {}: {e}", path.display())))?;
                            report["certificate_path"] = Value::String(path.display().to_string());
                        }
                        None => report["certificate"] = to_value(&*c),
                    }
                    let summary = format!("fixed point {} verified to depth {}", c.fixed_point.point, c.depth_checked);
                    Ok(Outcome { code: EXIT_OK, report: with_summary(report, summary) })
                }
                Refutation::NotApplicable(na) => {
                    let (report, summary) = match na {
                        NotApplicable::VirtuallyNilpotent(v) => (
                            json!({ "not_applicable": "virtually_nilpotent", "verdict": to_value(&v) }),
                            "not applicable: group is virtually nilpotent",
                        ),
                        NotApplicable::NotInjective { kernel_witness } => (
                            json!({ "not_applicable": "not_injective", "kernel_witness": to_value(&kernel_witness) }),
                            "not applicable: endomorphism is not injective",
                        ),
                    };
                    Ok(Outcome { code: EXIT_NEGATIVE, report: with_summary(report, summary.into()) })
                }
            }
        }
        EndoAction::Intersect { depth, radius } => {
            let elements = bounded_intersection(f, depth, radius).map_err(scale_failure)?;
            let summary = match elements.as_slice() {
                [e] if e.is_identity() => "1 element (identity)".to_string(),
                [_] => "1 element".to_string(),
                es => format!("{} elements", es.len()),
            };
            let report = json!({
                "depth": depth,
                "radius": radius,
                "count": elements.len(),
                "elements": to_value(&elements),
            });
            Ok(Outcome { code: EXIT_OK, report: with_summary(report, summary) })
        }
    }
}

/// Entry point for the binary.
pub fn main_with_std() -> i32 {
    run(std::env::args_os(), &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

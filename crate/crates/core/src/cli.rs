//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 a predicted identity failed,
//! 3 a minimal generator window cannot span the code.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::ideal::{
    build_double_ideal, build_ideal_matrix, rank_report_double, rank_report_single, RotationMatrix,
};
use crate::matrix::DenseMatrix;
use crate::oracle::{brute_code_dimension, run_campaign, CampaignTarget, InstanceSpec};
use crate::poly::{find_roots, Polynomial, DEFAULT_SCAN_BOUND};
use crate::quasi_cyclic::{
    build_code, generator_matrix_full, generator_matrix_minimal, minimum_distance,
    shift_closure_check, QuasiCyclicCode,
};
use crate::text::{coeffs_from_raw, parse_field, RawCoeff};

/// Environment variable overriding the prime-field root-scan bound.
pub const SCAN_BOUND_VAR: &str = "IDEALFORGE_SCAN_BOUND";

const COEFF_GRAMMAR: &str =
    "ascending comma-separated coefficients, integers or a/b, e.g. 1,0,-1 for 1 - x^2";
const FIELD_GRAMMAR: &str = "Q or Fp for a prime p below 2^31, e.g. F7";

#[derive(Parser, Debug)]
#[command(
    name = "idealforge",
    version,
    about = "Exact ideal matrices, double ideal matrices and quasi-cyclic codes"
)]
#[command(propagate_version = true)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Pretty, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Pretty,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank of the generalized ideal matrix [f, Hf, ..., H^{m-1} f].
    Rank(RankArgs),
    /// Rank of the double ideal matrix built from (phi1, f1) and (phi2, f2).
    DoubleRank(DoubleRankArgs),
    /// Build a quasi-cyclic code and report its invariants.
    Code(CodeArgs),
    /// Run a randomized verification campaign.
    Verify(VerifyArgs),
    /// Roots of a polynomial in its field.
    Roots(RootsArgs),
}

/// A coefficient list, validated for grammar at parse time and reduced into
/// the field later.
#[derive(Clone, Debug)]
struct CoeffList(Vec<String>);

fn parse_coeff_list(s: &str) -> std::result::Result<CoeffList, String> {
    let t = s.trim();
    let t = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .unwrap_or(t)
        .trim();
    if t.is_empty() {
        return Ok(CoeffList(Vec::new()));
    }
    let tokens: Vec<String> = t.split(',').map(|c| c.trim().to_string()).collect();
    for tok in &tokens {
        if Scalar::parse(FieldSpec::rationals(), tok).is_err() {
            return Err(format!("bad coefficient {tok:?}; expected {COEFF_GRAMMAR}"));
        }
    }
    Ok(CoeffList(tokens))
}

fn parse_field_arg(s: &str) -> std::result::Result<FieldSpec, String> {
    parse_field(s).map_err(|e| format!("{e}; expected {FIELD_GRAMMAR}"))
}

impl CoeffList {
    fn scalars(&self, field: FieldSpec, flag: &str) -> Result<Vec<Scalar>> {
        self.0
            .iter()
            .map(|t| Scalar::parse(field, t))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse(format!("{flag}: {e} in {field}; expected {COEFF_GRAMMAR}")))
    }

    fn poly(&self, field: FieldSpec, flag: &str) -> Result<Polynomial> {
        Ok(Polynomial::new(field, self.scalars(field, flag)?))
    }

    /// A vector of length `n`; shorter lists are padded with zeros.
    fn vector(&self, field: FieldSpec, n: usize, flag: &str) -> Result<Vec<Scalar>> {
        let mut v = self.scalars(field, flag)?;
        if v.len() > n {
            return Err(Error::Parse(format!(
                "{flag}: {} coefficients given, at most {n} expected",
                v.len()
            )));
        }
        v.resize(n, field.zero());
        Ok(v)
    }
}

fn rotation(phi: Polynomial, flag: &str) -> Result<RotationMatrix> {
    RotationMatrix::new(phi).map_err(|e| match e {
        Error::NotMonic | Error::ZeroConstantTerm | Error::DegreeZero | Error::ZeroPolynomial => {
            Error::Parse(format!(
                "{flag}: {e}; expected the ascending coefficients of a monic polynomial of \
                 degree at least 1 with nonzero constant term"
            ))
        }
        other => other,
    })
}

#[derive(Args, Debug)]
struct RankArgs {
    /// Field: Q or Fp.
    #[arg(long, value_parser = parse_field_arg)]
    field: FieldSpec,
    /// Monic modulus phi, ascending coefficients.
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true)]
    phi: CoeffList,
    /// Generator vector f (padded with zeros to deg phi).
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true)]
    f: CoeffList,
    /// Number of columns.
    #[arg(long)]
    m: usize,
}

#[derive(Args, Debug)]
struct DoubleRankArgs {
    #[arg(long, value_parser = parse_field_arg)]
    field: FieldSpec,
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true)]
    phi1: CoeffList,
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true)]
    phi2: CoeffList,
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true)]
    f1: CoeffList,
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true)]
    f2: CoeffList,
    #[arg(long)]
    m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenMat {
    Full,
    Minimal,
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// Prime field Fp.
    #[arg(long, value_parser = parse_field_arg, conflicts_with = "input")]
    field: Option<FieldSpec>,
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true, conflicts_with = "input")]
    phi1: Option<CoeffList>,
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true, conflicts_with = "input")]
    phi2: Option<CoeffList>,
    /// Left generating polynomial, degree below deg phi1.
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true, conflicts_with = "input")]
    a: Option<CoeffList>,
    /// Right generating polynomial, degree below deg phi2.
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true, conflicts_with = "input")]
    b: Option<CoeffList>,
    /// JSON code descriptor {field, phi1, phi2, a, b}; a full report is accepted too.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Cross-check the dimension by enumeration and check shift closure.
    #[arg(long)]
    verify: bool,
    /// Print the block generator matrix or a minimal window of it.
    #[arg(long, value_enum)]
    genmat: Option<GenMat>,
    /// First row of the minimal window.
    #[arg(long, default_value_t = 0, requires = "genmat")]
    start: usize,
    /// Compute the minimum Hamming distance by enumeration.
    #[arg(long)]
    min_distance: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Campaign target, by name or numbered alias (e.g. single-rank or thm2.5).
    #[arg(long)]
    target: String,
    #[arg(long, value_parser = parse_field_arg, default_value = "F2")]
    field: FieldSpec,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest degree of the first modulus.
    #[arg(long)]
    n1_max: Option<usize>,
    /// Largest degree of the second modulus.
    #[arg(long)]
    n2_max: Option<usize>,
    /// Largest column count (matrix targets) or message length (code targets).
    #[arg(long)]
    m_max: Option<usize>,
    /// Also draw non-squarefree moduli and check that they are refused.
    #[arg(long)]
    allow_non_squarefree: bool,
}

#[derive(Args, Debug)]
struct RootsArgs {
    #[arg(long, value_parser = parse_field_arg)]
    field: FieldSpec,
    #[arg(long, value_parser = parse_coeff_list, allow_hyphen_values = true)]
    poly: CoeffList,
}

/// A command's result: a document for `--output json`, its pretty form and
/// the exit code.
struct Report {
    json: Value,
    pretty: String,
    code: i32,
}

/// Runs the CLI with the given arguments, writing the primary output to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Rank(a) => cmd_rank(a),
        Command::DoubleRank(a) => cmd_double_rank(a),
        Command::Code(a) => cmd_code(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Roots(a) => cmd_roots(a),
    };
    match result {
        Ok(report) => {
            let _ = match cli.output {
                Output::Json => writeln!(out, "{}", to_pretty_json(&report.json)),
                Output::Pretty => write!(out, "{}", report.pretty),
            };
            report.code
        }
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            if cli.output == Output::Json {
                let _ = writeln!(out, "{}", to_pretty_json(&error_document(&e, code)));
            }
            code
        }
    }
}

fn to_pretty_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// 3 for a span deficit, 2 for a failed identity, 1 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SpanDeficit { .. } => 3,
        Error::TheoremViolation(_) => 2,
        _ => 1,
    }
}

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn error_document(e: &Error, code: i32) -> Value {
    let mut doc = json!({
        "error": error_kind(e),
        "message": e.to_string(),
        "exit_code": code,
    });
    if let Error::SpanDeficit {
        r,
        dim,
        rows,
        reason,
    } = e
    {
        doc["r"] = json!(r);
        doc["dim"] = json!(dim);
        doc["rows"] = json!(rows);
        doc["reason"] = json!(reason);
    }
    doc
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn show_vector(v: &[Scalar]) -> String {
    let cells: Vec<String> = v.iter().map(Scalar::to_string).collect();
    format!("[{}]", cells.join(" "))
}

fn with_matrix(report: impl Serialize, matrix: &DenseMatrix) -> Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    v["matrix"] = serde_json::to_value(matrix).expect("matrix serializes");
    v
}

fn cmd_rank(a: &RankArgs) -> Result<Report> {
    let h = rotation(a.phi.poly(a.field, "--phi")?, "--phi")?;
    let f = a.f.vector(a.field, h.degree(), "--f")?;
    if a.m == 0 {
        return Err(Error::Parse("--m: must be at least 1".into()));
    }
    let report = rank_report_single(&h, &f, a.m)?;
    let matrix = build_ideal_matrix(&h, &f, a.m)?;
    let mut pretty = String::new();
    let _ = writeln!(pretty, "field    {}", report.field);
    let _ = writeln!(pretty, "phi      {}", report.phi);
    let _ = writeln!(pretty, "f        {}", show_vector(&report.f));
    let _ = writeln!(pretty, "m        {}", report.m);
    let _ = writeln!(pretty, "gcd      {} (d = {})", report.d_poly, report.d);
    let _ = writeln!(
        pretty,
        "leading columns independent: {}",
        yes_no(report.leading_columns_independent)
    );
    let _ = writeln!(
        pretty,
        "consecutive windows independent: {}",
        yes_no(report.windows_independent)
    );
    let _ = write!(pretty, "{matrix}");
    let _ = writeln!(
        pretty,
        "rank {} (predicted {}, {})",
        report.r_observed,
        report.r_predicted,
        if report.agrees { "agrees" } else { "DISAGREES" }
    );
    Ok(Report {
        code: if report.consistent() { 0 } else { 2 },
        json: with_matrix(&report, &matrix),
        pretty,
    })
}

fn cmd_double_rank(a: &DoubleRankArgs) -> Result<Report> {
    let h1 = rotation(a.phi1.poly(a.field, "--phi1")?, "--phi1")?;
    let h2 = rotation(a.phi2.poly(a.field, "--phi2")?, "--phi2")?;
    let f1 = a.f1.vector(a.field, h1.degree(), "--f1")?;
    let f2 = a.f2.vector(a.field, h2.degree(), "--f2")?;
    if a.m == 0 {
        return Err(Error::Parse("--m: must be at least 1".into()));
    }
    let report = rank_report_double(&h1, &h2, &f1, &f2, a.m)?;
    let matrix = build_double_ideal(&h1, &h2, &f1, &f2, a.m)?;
    let mut pretty = String::new();
    let _ = writeln!(pretty, "field    {}", report.field);
    let _ = writeln!(pretty, "phi1     {}", report.phi1);
    let _ = writeln!(pretty, "phi2     {}", report.phi2);
    let _ = writeln!(pretty, "f1       {}", show_vector(&report.f1));
    let _ = writeln!(pretty, "f2       {}", show_vector(&report.f2));
    let _ = writeln!(pretty, "m        {}", report.m);
    let _ = writeln!(pretty, "phi3     {} (deg {})", report.phi3, report.n3);
    let _ = writeln!(
        pretty,
        "d        {} = e1 {} + e2 {} + e {} ({})",
        report.d, report.e1, report.e2, report.e, report.d_poly
    );
    let _ = writeln!(
        pretty,
        "leading columns independent: {}",
        yes_no(report.leading_columns_independent)
    );
    let _ = writeln!(
        pretty,
        "consecutive windows independent: {}",
        yes_no(report.windows_independent)
    );
    let _ = write!(pretty, "{matrix}");
    let _ = writeln!(
        pretty,
        "rank {} (predicted {}, {})",
        report.r_observed,
        report.r_predicted,
        if report.agrees { "agrees" } else { "DISAGREES" }
    );
    Ok(Report {
        code: if report.consistent() { 0 } else { 2 },
        json: with_matrix(&report, &matrix),
        pretty,
    })
}

/// The code descriptor file format. Extra keys (as in a full report) are
/// ignored.
#[derive(Debug, Deserialize)]
struct CodeDescriptor {
    field: String,
    phi1: Vec<RawCoeff>,
    phi2: Vec<RawCoeff>,
    a: Vec<RawCoeff>,
    b: Vec<RawCoeff>,
}

fn load_code(a: &CodeArgs) -> Result<QuasiCyclicCode> {
    if let Some(path) = &a.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("--input {}: {e}", path.display())))?;
        let d: CodeDescriptor = serde_json::from_str(&text).map_err(|e| {
            Error::Parse(format!(
                "--input {}: {e}; expected {{\"field\": \"F2\", \"phi1\": [...], \"phi2\": [...], \
                 \"a\": [...], \"b\": [...]}}",
                path.display()
            ))
        })?;
        let field = parse_field(&d.field)?;
        let poly = |raw: &[RawCoeff], key: &str| -> Result<Polynomial> {
            coeffs_from_raw(field, raw)
                .map(|c| Polynomial::new(field, c))
                .map_err(|e| Error::Parse(format!("--input key {key}: {e}")))
        };
        return build_code(
            field,
            poly(&d.phi1, "phi1")?,
            poly(&d.phi2, "phi2")?,
            poly(&d.a, "a")?,
            poly(&d.b, "b")?,
        );
    }
    let missing = |flag: &str| Error::Parse(format!("{flag} is required unless --input is given"));
    let field = a.field.ok_or_else(|| missing("--field"))?;
    let get = |v: &Option<CoeffList>, flag: &str| -> Result<Polynomial> {
        v.as_ref().ok_or_else(|| missing(flag))?.poly(field, flag)
    };
    build_code(
        field,
        get(&a.phi1, "--phi1")?,
        get(&a.phi2, "--phi2")?,
        get(&a.a, "--a")?,
        get(&a.b, "--b")?,
    )
}

#[derive(Debug, Serialize)]
struct Verification {
    brute_force_dim: usize,
    shift_closed: bool,
    agrees: bool,
}

#[derive(Debug, Serialize)]
struct GeneratorReport {
    kind: &'static str,
    start: usize,
    rows: usize,
    rank: usize,
    matrix: DenseMatrix,
}

/// The descriptor keys first, then derived invariants.
#[derive(Debug, Serialize)]
struct CodeReport {
    field: FieldSpec,
    phi1: Polynomial,
    phi2: Polynomial,
    a: Vec<Scalar>,
    b: Vec<Scalar>,
    phi3: Polynomial,
    g_bar: Polynomial,
    h_bar: Polynomial,
    k: usize,
    l: usize,
    m: usize,
    t: usize,
    dim: usize,
    d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_distance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Verification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorReport>,
}

fn cmd_code(a: &CodeArgs) -> Result<Report> {
    let code = load_code(a)?;
    let verification = if a.verify {
        let brute_force_dim = brute_code_dimension(&code)?;
        let shift_closed = shift_closure_check(&code)?;
        Some(Verification {
            agrees: brute_force_dim == code.dim() && shift_closed,
            brute_force_dim,
            shift_closed,
        })
    } else {
        None
    };
    let generator = match a.genmat {
        None => None,
        Some(kind) => {
            let (name, matrix) = match kind {
                GenMat::Full => ("full", generator_matrix_full(&code)?),
                GenMat::Minimal => ("minimal", generator_matrix_minimal(&code, a.start)?),
            };
            Some(GeneratorReport {
                kind: name,
                start: if kind == GenMat::Full { 0 } else { a.start },
                rows: matrix.rows(),
                rank: matrix.rank(),
                matrix,
            })
        }
    };
    let min_distance = if a.min_distance {
        Some(minimum_distance(&code)?)
    } else {
        None
    };
    let report = CodeReport {
        field: code.field(),
        phi1: code.phi1().clone(),
        phi2: code.phi2().clone(),
        a: code.a_bar().to_vector(code.k()),
        b: code.b_bar().to_vector(code.l()),
        phi3: code.phi3().clone(),
        g_bar: code.g_bar().clone(),
        h_bar: code.h_bar().clone(),
        k: code.k(),
        l: code.l(),
        m: code.m(),
        t: code.t(),
        dim: code.dim(),
        d: code.d_cor(),
        min_distance,
        verification,
        generator,
    };

    let mut pretty = String::new();
    let _ = writeln!(pretty, "code over {}", report.field);
    let _ = writeln!(pretty, "phi1     {} (k = {})", report.phi1, report.k);
    let _ = writeln!(pretty, "phi2     {} (l = {})", report.phi2, report.l);
    let _ = writeln!(pretty, "phi3     {} (m = {})", report.phi3, report.m);
    let _ = writeln!(pretty, "a        {}", code.a_bar());
    let _ = writeln!(pretty, "b        {}", code.b_bar());
    let _ = writeln!(pretty, "g_bar    {}", report.g_bar);
    let _ = writeln!(pretty, "h_bar    {}", report.h_bar);
    let _ = writeln!(
        pretty,
        "t = {}, d = {}, length {}",
        report.t,
        report.d,
        code.length()
    );
    if let Some(d) = report.min_distance {
        let _ = writeln!(pretty, "minimum distance {d}");
    }
    if let Some(v) = &report.verification {
        let _ = writeln!(
            pretty,
            "verification: brute-force dimension {}, shift-closed {}, {}",
            v.brute_force_dim,
            yes_no(v.shift_closed),
            if v.agrees { "agrees" } else { "DISAGREES" }
        );
    }
    if let Some(g) = &report.generator {
        let _ = writeln!(
            pretty,
            "generator matrix ({}, rows {}..{} of {}):",
            g.kind,
            g.start,
            g.start + g.rows,
            code.generator_rows()
        );
        let _ = write!(pretty, "{}", g.matrix);
        let _ = writeln!(pretty, "rank {}", g.rank);
    }
    let _ = writeln!(pretty, "dimension {}", report.dim);

    let agrees = report.verification.as_ref().is_none_or(|v| v.agrees);
    Ok(Report {
        code: if agrees { 0 } else { 2 },
        json: serde_json::to_value(&report).expect("report serializes"),
        pretty,
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Report> {
    let target: CampaignTarget = a.target.parse()?;
    let mut spec = InstanceSpec::defaults(target, a.field, a.seed);
    if let Some(v) = a.n1_max {
        spec.n1_max = v;
    }
    if let Some(v) = a.n2_max {
        spec.n2_max = v;
    }
    if let Some(v) = a.m_max {
        spec.m_max = v;
    }
    spec.squarefree_only = !a.allow_non_squarefree;
    let summary = run_campaign(target, &spec, a.trials)?;
    let mut pretty = String::new();
    let _ = writeln!(
        pretty,
        "target {} ({}) over {}, seed {}",
        target,
        target.alias(),
        a.field,
        a.seed
    );
    let _ = writeln!(
        pretty,
        "trials {}, agreements {}, failures {} ({} ms)",
        summary.trials,
        summary.agreements,
        summary.failures.len(),
        summary.elapsed.as_millis()
    );
    for (regime, count) in &summary.regimes {
        let _ = writeln!(pretty, "  {regime}: {count}");
    }
    for f in summary.failures.iter().take(5) {
        let _ = writeln!(
            pretty,
            "failure {}",
            serde_json::to_string(f).expect("failure serializes")
        );
    }
    Ok(Report {
        code: if summary.all_agree() { 0 } else { 2 },
        json: serde_json::to_value(&summary).expect("summary serializes"),
        pretty,
    })
}

fn scan_bound() -> Result<u64> {
    match std::env::var(SCAN_BOUND_VAR) {
        Err(_) => Ok(DEFAULT_SCAN_BOUND),
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "{SCAN_BOUND_VAR}={v:?}: expected a nonnegative integer"
            ))
        }),
    }
}

fn cmd_roots(a: &RootsArgs) -> Result<Report> {
    let p = a.poly.poly(a.field, "--poly")?;
    let roots = find_roots(&p, scan_bound()?)?;
    let mut pretty = String::new();
    let _ = writeln!(pretty, "poly     {} over {}", p, a.field);
    let _ = writeln!(pretty, "roots    {}", show_vector(roots.roots()));
    let _ = writeln!(
        pretty,
        "splits into distinct linear factors: {}",
        yes_no(roots.is_complete())
    );
    Ok(Report {
        json: json!({
            "field": a.field,
            "poly": p,
            "roots": roots.roots(),
            "complete": roots.is_complete(),
        }),
        pretty,
        code: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["idealforge"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn coefficient_grammar_errors_name_the_flag() {
        let (code, _, err) = call(&[
            "rank", "--field", "F2", "--phi", "1,x,1", "--f", "1", "--m", "2",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("--phi"), "{err}");
        assert!(err.contains("ascending"), "{err}");
        let (code, _, err) = call(&[
            "rank", "--field", "F4", "--phi", "1,1", "--f", "1", "--m", "1",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("--field") && err.contains("F7"), "{err}");
    }

    #[test]
    fn error_kinds_are_variant_names() {
        assert_eq!(error_kind(&Error::ZeroCode), "ZeroCode");
        assert_eq!(
            error_kind(&Error::NotSquarefree("x".into())),
            "NotSquarefree"
        );
        let e = Error::SpanDeficit {
            r: 2,
            dim: 4,
            rows: 2,
            reason: "r".into(),
        };
        assert_eq!(error_kind(&e), "SpanDeficit");
        assert_eq!(exit_code(&e), 3);
        assert_eq!(error_document(&e, 3)["dim"], 4);
    }

    #[test]
    fn vectors_pad_and_reject_overflow() {
        let q = FieldSpec::rationals();
        let c = parse_coeff_list("1,2").unwrap();
        assert_eq!(c.vector(q, 3, "--f").unwrap().len(), 3);
        assert!(c.vector(q, 1, "--f").is_err());
        let f5 = FieldSpec::prime(5).unwrap();
        let err = parse_coeff_list("1/5")
            .unwrap()
            .scalars(f5, "--a")
            .unwrap_err();
        assert!(err.to_string().contains("--a"));
    }
}

//! Job dispatch, JSON ingestion, and deterministic report emission.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::equivariant::{
    abbv_integrate, component_integral, concentration_check, euler_class, invert_localized,
    projective_space_components, projective_space_o1_restrictions, ComponentAlgebra, EquivariantElement,
    FixedComponent,
};
use crate::ktheory::{
    evaluate_at_one, fixed_point_sum, is_character, lambda_minus_one, projective_space_dataset, KFixedPoint,
    LaurentPoly,
};
use crate::linalg::Matrix;
use crate::parse::parse_expr;
use crate::poly::{GradedPoly, LinearForm};
use crate::random::{random_complex, random_full_subcomplex, random_invertible_element, random_scalar};
use crate::ratfunc::RationalFunction;
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::simplicial::{SimplicialComplex, SubcomplexSelection};
use crate::torsor::{canonical_lift_if_unique, torsor_difference, LocalizationSequence};
use crate::ExactScalar as Q;

pub const CIRCLE_FIXTURE: &str = include_str!("../fixtures/circle.json");
pub const P1_UNIT_FIXTURE: &str = include_str!("../fixtures/p1_unit.json");
pub const P1_EULER_FIXTURE: &str = include_str!("../fixtures/p1_euler.json");
pub const P1_O1_FIXTURE: &str = include_str!("../fixtures/p1_o1.json");
pub const P2_LINE_POINT_FIXTURE: &str = include_str!("../fixtures/p2_line_point.json");
pub const P2_KTHEORY_D3_FIXTURE: &str = include_str!("../fixtures/p2_ktheory_d3.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Les,
    Lifts,
    Abbv,
    Ktheory,
    Verify,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Les => "les",
            Command::Lifts => "lifts",
            Command::Abbv => "abbv",
            Command::Ktheory => "ktheory",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "les" => Command::Les,
            "lifts" => Command::Lifts,
            "abbv" => Command::Abbv,
            "ktheory" => Command::Ktheory,
            "verify" => Command::Verify,
            _ => return Err(format!("unknown command {s:?} (expected les, lifts, abbv, ktheory or verify)")),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?} (expected json or text)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub degree: Option<i64>,
    pub seed: u64,
    /// Wall-clock timing makes output nondeterministic, so it is opt-in.
    pub timing: bool,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self { command, input: None, degree: None, seed: 42, timing: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{command} needs --input")]
    MissingInput { command: Command },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("parse error in {context} at position {position}: {message}")]
    Expression { context: String, position: usize, message: String },
    #[error("validation error ({invariant}): {message}")]
    Validation { invariant: String, message: String },
    #[error("engine error: {0}")]
    Engine(String),
}

fn invalid(invariant: &str, message: impl Into<String>) -> CliError {
    CliError::Validation { invariant: invariant.to_string(), message: message.into() }
}

fn engine(e: impl fmt::Display) -> CliError {
    CliError::Engine(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub all_passed: bool,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: Command) -> Self {
        Self { command: command.to_string(), all_passed: true, results: json!({}), checks: Vec::new(), timing_ms: None }
    }

    fn with(command: Command, results: Value, checks: Vec<Check>) -> Self {
        let all_passed = checks.iter().all(|c| c.passed);
        Self { command: command.to_string(), all_passed, results, checks, timing_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let start = Instant::now();
    let source = match &job.input {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?,
        ),
        None => None,
    };
    let mut report = match (job.command, source) {
        (Command::Verify, _) => verify(job.seed),
        (command, Some(src)) => run_source(command, &src, job.degree, job.seed)?,
        (command, None) => return Err(CliError::MissingInput { command }),
    };
    if job.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs a non-`verify` command on JSON text.
pub fn run_source(command: Command, source: &str, degree: Option<i64>, seed: u64) -> Result<Report, CliError> {
    match command {
        Command::Les => run_les(&from_json(source)?, degree),
        Command::Lifts => run_lifts(&from_json(source)?, degree),
        Command::Abbv => run_abbv(&from_json(source)?, seed),
        Command::Ktheory => run_ktheory(&from_json(source)?),
        Command::Verify => Ok(verify(seed)),
    }
}

fn from_json<'a, T: Deserialize<'a>>(source: &'a str) -> Result<T, CliError> {
    serde_json::from_str(source).map_err(|e| CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", report.command);
    out.push_str("results:");
    render_value(&mut out, &report.results, 1);
    out.push('\n');
    out.push_str("checks:\n");
    for c in &report.checks {
        let _ = writeln!(out, "  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "summary: {passed}/{} passed", report.checks.len());
    if let Some(ms) = report.timing_ms {
        let _ = writeln!(out, "timing_ms: {ms}");
    }
    out
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar_text).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar_text(v) {
        let _ = write!(out, " {s}");
        return;
    }
    match v {
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str(" {}");
            }
            for (k, val) in map {
                let _ = write!(out, "\n{pad}{k}:");
                render_value(out, val, depth + 1);
            }
        }
        Value::Array(items) => {
            for item in items {
                let _ = write!(out, "\n{pad}-");
                render_value(out, item, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

// ---- shared input pieces ----

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ScalarIn {
    Int(i64),
    Str(String),
}

impl ScalarIn {
    fn value<F: Scalar>(&self, context: &str) -> Result<F, CliError> {
        match self {
            ScalarIn::Int(n) => Ok(F::from_int(*n)),
            ScalarIn::Str(s) => parse_scalar(s).ok_or_else(|| invalid("rational literal", format!("{context}: {s:?}"))),
        }
    }
}

fn scalars<F: Scalar>(v: &[ScalarIn], context: &str) -> Result<Vec<F>, CliError> {
    v.iter().map(|s| s.value(context)).collect()
}

fn q_str(x: &Q) -> String {
    format_scalar(x)
}

fn q_vec(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(q_str(x))).collect())
}

fn matrix_value(m: &Matrix<Q>) -> Value {
    Value::Array(m.row_vectors().iter().map(|r| q_vec(r)).collect())
}

// ---- les / lifts ----

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum VertexSpec {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum VertexRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ClosedRef {
    Vertex(VertexRef),
    Simplex(Vec<VertexRef>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassInput {
    coordinates: Option<Vec<ScalarIn>>,
    cocycle: Option<Vec<ScalarIn>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexInput {
    vertices: VertexSpec,
    simplices: Vec<Vec<VertexRef>>,
    #[serde(default)]
    closed: Vec<ClosedRef>,
    degree: Option<i64>,
    class: Option<ClassInput>,
}

struct Pair {
    x: SimplicialComplex,
    z: SubcomplexSelection,
    seq: Arc<LocalizationSequence<Q>>,
}

fn resolve(x: &SimplicialComplex, v: &VertexRef) -> Result<usize, CliError> {
    match v {
        VertexRef::Index(i) if *i < x.num_vertices() => Ok(*i),
        VertexRef::Index(i) => Err(invalid("known vertex", format!("index {i} out of range"))),
        VertexRef::Label(l) => x.vertex_by_label(l).ok_or_else(|| invalid("known vertex", format!("unknown label {l:?}"))),
    }
}

fn build_pair(input: &ComplexInput) -> Result<Pair, CliError> {
    let labels: Vec<String> = match &input.vertices {
        VertexSpec::Count(n) => (0..*n).map(|i| format!("v{i}")).collect(),
        VertexSpec::Labels(l) => l.clone(),
    };
    let shell = SimplicialComplex::from_parts(labels.clone(), Vec::new());
    let generators: Vec<Vec<usize>> = input
        .simplices
        .iter()
        .map(|s| s.iter().map(|v| resolve(&shell, v)).collect())
        .collect::<Result<_, _>>()?;
    let all_vertices: Vec<Vec<usize>> = (0..labels.len()).map(|v| vec![v]).collect();
    let generators: Vec<Vec<usize>> = all_vertices.into_iter().chain(generators).collect();
    let x = SimplicialComplex::new(labels, &generators).map_err(|e| invalid("simplicial complex", e.to_string()))?;
    let closed: Vec<Vec<usize>> = input
        .closed
        .iter()
        .map(|c| match c {
            ClosedRef::Vertex(v) => resolve(&x, v).map(|i| vec![i]),
            ClosedRef::Simplex(s) => s.iter().map(|v| resolve(&x, v)).collect(),
        })
        .collect::<Result<_, _>>()?;
    let z = SubcomplexSelection::from_simplices(&x, &closed).map_err(|e| invalid("closed subcomplex", e.to_string()))?;
    z.require_full(&x).map_err(|e| invalid("full closed subcomplex", e.to_string()))?;
    let seq = LocalizationSequence::for_closed_locus(&x, &z).map_err(engine)?;
    Ok(Pair { x, z, seq })
}

fn pair_summary(p: &Pair) -> Value {
    let names = |vs: Vec<usize>| -> Vec<String> { vs.into_iter().map(|v| p.x.labels()[v].clone()).collect() };
    let closed: Vec<usize> = p.z.vertices().iter().copied().collect();
    let open: Vec<usize> = (0..p.x.num_vertices()).filter(|v| !p.z.vertices().contains(v)).collect();
    json!({
        "simplices_per_dimension": (0..p.x.num_levels()).map(|d| p.x.simplices(d).len()).collect::<Vec<_>>(),
        "closed_vertices": names(closed),
        "complement_vertices": names(open),
    })
}

fn run_les(input: &ComplexInput, degree: Option<i64>) -> Result<Report, CliError> {
    let p = build_pair(input)?;
    let exactness = p.seq.check_exactness();
    let wanted: Vec<i64> = match degree.or(input.degree) {
        Some(d) => vec![d],
        None => p.seq.degrees().collect(),
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for d in wanted {
        let les = p.seq.les(d);
        let ex = exactness.degrees.iter().find(|e| e.degree == d);
        rows.push(json!({
            "degree": d,
            "supported_dim": p.seq.supported_cohomology(d).dimension(),
            "absolute_dim": p.seq.absolute_cohomology(d).dimension(),
            "complement_dim": p.seq.complement_cohomology(d).dimension(),
            "forg": matrix_value(&les.forg),
            "jstar": matrix_value(&les.jstar),
            "delta": matrix_value(&les.delta),
            "forg_rank": les.forg.rank(),
            "jstar_rank": les.jstar.rank(),
            "delta_rank": les.delta.rank(),
        }));
        let ok = les.composites_vanish() && ex.is_none_or(|e| e.passed());
        checks.push(Check::new(
            format!("exactness in degree {d}"),
            ok,
            if ok { "composites vanish and ranks match" } else { "sequence not exact" },
        ));
    }
    let results = json!({ "pair": pair_summary(&p), "degrees": rows });
    Ok(Report::with(Command::Les, results, checks))
}

fn run_lifts(input: &ComplexInput, degree: Option<i64>) -> Result<Report, CliError> {
    let p = build_pair(input)?;
    let d = degree.or(input.degree).ok_or_else(|| invalid("degree given", "lifts needs --degree or a \"degree\" field"))?;
    let basis = p.seq.absolute_cohomology(d);
    let class_in = input.class.as_ref().ok_or_else(|| invalid("class given", "lifts needs a \"class\" field"))?;
    let class = match (&class_in.coordinates, &class_in.cocycle) {
        (Some(c), None) => p.seq.absolute_class(d, scalars(c, "class coordinates")?).map_err(engine)?,
        (None, Some(v)) => basis.class_of_cocycle(scalars(v, "class cocycle")?).map_err(engine)?,
        _ => return Err(invalid("class given", "exactly one of \"coordinates\" or \"cocycle\"")),
    };
    let t = p.seq.supported_lifts(&class).map_err(engine)?;
    let canonical = canonical_lift_if_unique(&t);
    let verdict = match t.dim() {
        0 => "singleton (canonical lift)".to_string(),
        1 => "non-singleton (affine line)".to_string(),
        k => format!("non-singleton (affine space of dimension {k})"),
    };
    let forgets = t.forget(t.base_lift()).map_err(engine)? == class.coordinates;
    let directions_in_kernel = t.delta_image_basis().iter().all(|v| t.forget(v).is_ok_and(|f| f.iter().all(|c| c == &Q::from_int(0))));
    let results = json!({
        "pair": pair_summary(&p),
        "degree": d,
        "class": q_vec(&class.coordinates),
        "ambient_dim": t.ambient_dim(),
        "direction_dim": t.dim(),
        "base_lift": q_vec(t.base_lift()),
        "directions": t.delta_image_basis().iter().map(|v| q_vec(v)).collect::<Vec<_>>(),
        "canonical_lift": canonical.map(|c| q_vec(&c.coordinates)),
        "verdict": verdict,
    });
    let checks = vec![
        Check::new("base lift forgets to the class", forgets, format!("degree {d}")),
        Check::new("directions forget to zero", directions_in_kernel, format!("{} directions", t.dim())),
    ];
    Ok(Report::with(Command::Lifts, results, checks))
}

// ---- abbv ----

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum AlgebraInput {
    Named(String),
    Truncated { truncated: usize },
    Monomials { monomials: Vec<Vec<u32>> },
    Table { degrees: Vec<u32>, table: Vec<Vec<Vec<ScalarIn>>> },
}

impl Default for AlgebraInput {
    fn default() -> Self {
        AlgebraInput::Named("point".into())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum WeightInput {
    Form(Vec<i64>),
    WithMultiplicity { form: Vec<i64>, multiplicity: u32 },
}

impl WeightInput {
    fn pair(&self) -> (LinearForm, u32) {
        match self {
            WeightInput::Form(c) => (LinearForm::new(c.clone()), 1),
            WeightInput::WithMultiplicity { form, multiplicity } => (LinearForm::new(form.clone()), *multiplicity),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ElementInput {
    Poly(String),
    Coefficients(Vec<String>),
    Full {
        coefficients: Vec<String>,
        #[serde(default)]
        denominator: Vec<WeightInput>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentInput {
    #[serde(default)]
    algebra: AlgebraInput,
    weights: Vec<WeightInput>,
    #[serde(default)]
    corrections: Vec<Option<ElementInput>>,
    integral: Option<Vec<ScalarIn>>,
    restriction: ElementInput,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AbbvInput {
    num_vars: usize,
    components: Vec<ComponentInput>,
}

fn parse_poly(s: &str, r: usize, context: &str) -> Result<GradedPoly<Q>, CliError> {
    let e = parse_expr(s, 'x', r).map_err(|e| CliError::Expression {
        context: context.to_string(),
        position: e.position,
        message: e.message,
    })?;
    e.eval(&GradedPoly::zero(r)).ok_or_else(|| invalid("polynomial expression", format!("{context}: negative power of a polynomial")))
}

fn build_algebra(a: &AlgebraInput, context: &str) -> Result<ComponentAlgebra<Q>, CliError> {
    let bad = |e: crate::equivariant::EquivariantError| invalid("component algebra", format!("{context}: {e}"));
    match a {
        AlgebraInput::Named(n) if n == "point" => Ok(ComponentAlgebra::point()),
        AlgebraInput::Named(n) => Err(invalid("component algebra", format!("{context}: unknown algebra {n:?}"))),
        AlgebraInput::Truncated { truncated } => Ok(ComponentAlgebra::truncated(*truncated)),
        AlgebraInput::Monomials { monomials } => ComponentAlgebra::monomial(monomials).map_err(bad),
        AlgebraInput::Table { degrees, table } => {
            let t = table
                .iter()
                .map(|row| row.iter().map(|v| scalars(v, context)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            ComponentAlgebra::new(degrees.clone(), t).map_err(bad)
        }
    }
}

fn build_element(
    e: &ElementInput,
    algebra: &Arc<ComponentAlgebra<Q>>,
    r: usize,
    context: &str,
) -> Result<EquivariantElement<Q>, CliError> {
    let (coeffs, den): (Vec<GradedPoly<Q>>, Vec<(LinearForm, u32)>) = match e {
        ElementInput::Poly(s) => {
            return Ok(EquivariantElement::from_poly(algebra.clone(), parse_poly(s, r, context)?));
        }
        ElementInput::Coefficients(cs) => {
            (cs.iter().map(|s| parse_poly(s, r, context)).collect::<Result<_, _>>()?, Vec::new())
        }
        ElementInput::Full { coefficients, denominator } => (
            coefficients.iter().map(|s| parse_poly(s, r, context)).collect::<Result<_, _>>()?,
            denominator.iter().map(WeightInput::pair).collect(),
        ),
    };
    EquivariantElement::new(algebra.clone(), coeffs, den).map_err(|e| invalid("equivariant element", format!("{context}: {e}")))
}

fn build_components(input: &AbbvInput) -> Result<(Vec<FixedComponent<Q>>, Vec<EquivariantElement<Q>>), CliError> {
    let r = input.num_vars;
    if input.components.is_empty() {
        return Err(invalid("at least one component", "no components given"));
    }
    let mut comps = Vec::new();
    let mut restrictions = Vec::new();
    for (i, c) in input.components.iter().enumerate() {
        let ctx = format!("component {i}");
        let algebra = Arc::new(build_algebra(&c.algebra, &ctx)?);
        let weights: Vec<(LinearForm, u32)> = c.weights.iter().map(WeightInput::pair).collect();
        let corrections = c
            .corrections
            .iter()
            .map(|o| o.as_ref().map(|e| build_element(e, &algebra, r, &ctx)).transpose())
            .collect::<Result<Vec<_>, _>>()?;
        let integral = match &c.integral {
            Some(v) => scalars(v, &ctx)?,
            None => {
                let top = algebra.top_degree();
                let tops: Vec<usize> = (0..algebra.dim()).filter(|&k| algebra.degrees()[k] == top).collect();
                if tops.len() != 1 {
                    return Err(invalid("integration functional", format!("{ctx}: give \"integral\" explicitly")));
                }
                (0..algebra.dim()).map(|k| if k == tops[0] { Q::from_int(1) } else { Q::from_int(0) }).collect()
            }
        };
        let fc = FixedComponent::new(algebra.clone(), r, weights, corrections, integral)
            .map_err(|e| invalid("nonzero normal weights", format!("{ctx}: {e}")))?;
        restrictions.push(build_element(&c.restriction, &algebra, r, &ctx)?);
        comps.push(fc);
    }
    Ok((comps, restrictions))
}

fn random_point<R: Rng>(rng: &mut R, r: usize) -> Vec<Q> {
    (0..r).map(|_| random_scalar(rng, 9)).collect()
}

fn run_abbv(input: &AbbvInput, seed: u64) -> Result<Report, CliError> {
    let (comps, restrictions) = build_components(input)?;
    let concentration = concentration_check(&comps);
    let mut checks: Vec<Check> = concentration
        .components
        .iter()
        .map(|v| Check::new(format!("concentration at component {}", v.index), v.passed, v.reason.clone().unwrap_or_else(|| "euler class is a localized unit".into())))
        .collect();
    if !concentration.passed() {
        // the localized sum is undefined; report which components break it
        let results = json!({ "num_vars": input.num_vars, "result": Value::Null });
        return Ok(Report::with(Command::Abbv, results, checks));
    }
    let total = abbv_integrate(&comps, &restrictions).map_err(engine)?;
    let mut summands = Vec::new();
    let mut comp_rows = Vec::new();
    for (i, (fc, alpha)) in comps.iter().zip(&restrictions).enumerate() {
        let e = euler_class(fc).map_err(engine)?;
        let s = invert_localized(&e).and_then(|inv| alpha.mul(&inv)).and_then(|x| component_integral(fc, &x)).map_err(engine)?;
        comp_rows.push(json!({
            "index": i,
            "euler_class": e.to_string(),
            "summand": s.to_string(),
            "concentration": concentration.components[i].reason.clone().unwrap_or_else(|| "pass".into()),
        }));
        summands.push(s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spot = Vec::new();
    while spot.len() < 3 {
        let pt = random_point(&mut rng, input.num_vars);
        let Ok(Some(v)) = total.eval(&pt) else { continue };
        let parts: Option<Vec<Q>> = summands.iter().map(|s| s.eval(&pt).ok().flatten()).collect();
        let Some(parts) = parts else { continue };
        let sum = parts.into_iter().fold(Q::from_int(0), |a, b| a + b);
        checks.push(Check::new(
            format!("spot check {}", spot.len() + 1),
            sum == v,
            format!("at ({}): {}", pt.iter().map(q_str).collect::<Vec<_>>().join(", "), q_str(&v)),
        ));
        spot.push(json!({ "point": q_vec(&pt), "value": q_str(&v) }));
    }
    let results = json!({
        "num_vars": input.num_vars,
        "result": total.to_string(),
        "numerator": total.numerator().to_string(),
        "denominator": total.denominator().iter().map(|(l, m)| json!({"form": l.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
        "polynomial": total.as_polynomial().map(|p| p.to_string()),
        "components": comp_rows,
        "spot_checks": spot,
    });
    Ok(Report::with(Command::Abbv, results, checks))
}

// ---- ktheory ----

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum FiberInput {
    Expr(String),
    Terms(BTreeMap<String, ScalarIn>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KPointInput {
    fiber: FiberInput,
    conormal: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KInput {
    num_vars: usize,
    points: Vec<KPointInput>,
}

fn build_fiber(f: &FiberInput, r: usize, context: &str) -> Result<LaurentPoly<Q>, CliError> {
    match f {
        FiberInput::Expr(s) => {
            let e = parse_expr(s, 't', r).map_err(|e| CliError::Expression {
                context: context.to_string(),
                position: e.position,
                message: e.message,
            })?;
            e.eval(&LaurentPoly::zero(r)).ok_or_else(|| invalid("Laurent expression", format!("{context}: negative power of a non-monomial")))
        }
        FiberInput::Terms(map) => {
            let terms = map
                .iter()
                .map(|(k, v)| {
                    let exps: Vec<i64> = k
                        .split(',')
                        .map(|p| p.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| invalid("exponent key", format!("{context}: bad exponent key {k:?}")))?;
                    Ok((exps, v.value(context)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            LaurentPoly::from_terms(r, terms).map_err(|e| invalid("exponent arity", format!("{context}: {e}")))
        }
    }
}

fn run_ktheory(input: &KInput) -> Result<Report, CliError> {
    let r = input.num_vars;
    let points = input
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ctx = format!("point {i}");
            let fiber = build_fiber(&p.fiber, r, &ctx)?;
            KFixedPoint::new(fiber, p.conormal.clone()).map_err(|e| invalid("nontrivial conormal characters", format!("{ctx}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sum = fixed_point_sum(&points).map_err(engine)?;
    let reversed: Vec<KFixedPoint<Q>> = points.iter().rev().cloned().collect();
    let rev_sum = fixed_point_sum(&reversed).map_err(engine)?;
    let lambdas: Vec<String> = points.iter().map(|p| lambda_minus_one(p).map(|l| l.to_string())).collect::<Result<_, _>>().map_err(engine)?;
    let (character, value) = if r == 1 {
        let ch = is_character(&sum).map_err(engine)?;
        let value = evaluate_at_one(&sum).ok();
        (ch.map(|c| c.to_string()), value.map(|v| q_str(&v)))
    } else {
        (None, None)
    };
    let results = json!({
        "num_vars": r,
        "fraction": sum.to_string(),
        "numerator": sum.numerator().to_string(),
        "denominator": sum.denominator().to_string(),
        "lambda_minus_one": lambdas,
        "character": character,
        "value_at_one": value,
    });
    let checks = vec![Check::new("permutation invariance", rev_sum == sum, "reversed summation order")];
    Ok(Report::with(Command::Ktheory, results, checks))
}

// ---- verify ----

pub fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn fixture_check(name: &str, command: Command, source: &str, expect: impl Fn(&Report) -> Option<String>, seed: u64) -> Check {
    match run_source(command, source, None, seed) {
        Ok(report) => match expect(&report) {
            None if report.passed() => Check::new(name, true, "matches expected output"),
            None => Check::new(name, false, "internal checks failed"),
            Some(why) => Check::new(name, false, why),
        },
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn expect_field(report: &Report, key: &str, want: Value) -> Option<String> {
    let got = &report.results[key];
    (got != &want).then(|| format!("{key}: expected {want}, got {got}"))
}

/// The built-in suite. Deterministic for a fixed seed.
pub fn verify(seed: u64) -> Report {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    checks.push(fixture_check(
        "circle example",
        Command::Lifts,
        CIRCLE_FIXTURE,
        |r| {
            expect_field(r, "ambient_dim", json!(2))
                .or_else(|| expect_field(r, "direction_dim", json!(1)))
                .or_else(|| expect_field(r, "canonical_lift", Value::Null))
                .or_else(|| expect_field(r, "verdict", json!("non-singleton (affine line)")))
        },
        seed,
    ));

    // exactness and torsor laws on random pairs
    let (mut complexes, mut degrees, mut bad, mut torsors, mut torsor_bad) = (0, 0, 0, 0, 0);
    for _ in 0..50 {
        let x = random_complex(&mut rng, 30);
        let z = random_full_subcomplex(&mut rng, &x);
        let seq = LocalizationSequence::<Q>::for_closed_locus(&x, &z).expect("full subcomplex");
        let report = seq.check_exactness();
        complexes += 1;
        degrees += report.degrees.len();
        bad += report.degrees.iter().filter(|d| !d.passed()).count();
        for d in seq.degrees() {
            let hz = seq.supported_cohomology(d);
            let coords: Vec<Q> = (0..hz.dimension()).map(|_| random_scalar(&mut rng, 3)).collect();
            let c_coords = seq.forg(d).mul_vec(&coords).expect("shapes agree");
            let c = seq.absolute_class(d, c_coords).expect("class");
            let Ok(t) = seq.supported_lifts(&c) else {
                torsor_bad += 1;
                continue;
            };
            torsors += 1;
            let a: Vec<Q> = (0..t.dim()).map(|_| random_scalar(&mut rng, 3)).collect();
            let b: Vec<Q> = (0..t.dim()).map(|_| random_scalar(&mut rng, 3)).collect();
            let (la, lb) = (t.point(&a), t.point(&b));
            let diff_ok = torsor_difference(&t, &la, &lb)
                .is_ok_and(|diff| diff.iter().zip(a.iter().zip(&b)).all(|(d, (x, y))| d.clone() == x.clone() - y.clone()));
            let forg_ok = [&la, &lb].iter().all(|l| t.forget(l).is_ok_and(|f| f == c.coordinates));
            if !(diff_ok && forg_ok) {
                torsor_bad += 1;
            }
        }
    }
    checks.push(Check::new(
        "exactness sweep",
        bad == 0,
        format!("{complexes} random pairs, {degrees} degrees, {bad} failures"),
    ));
    checks.push(Check::new("torsor laws", torsor_bad == 0, format!("{torsors} torsors, {torsor_bad} failures")));

    // ABBV identities on projective spaces
    for n in 1..=3usize {
        let comps = projective_space_components::<Q>(n);
        let units: Vec<_> = comps.iter().map(FixedComponent::unit).collect();
        let eulers: Vec<_> = comps.iter().map(|c| euler_class(c).expect("valid")).collect();
        let zero = abbv_integrate(&comps, &units).map(|r| r.is_zero());
        checks.push(Check::new(format!("abbv P^{n} unit restrictions"), zero == Ok(true), "integrates to 0"));
        let want = RationalFunction::from_poly(GradedPoly::constant(n + 1, Q::from_int(n as i64 + 1)));
        let got = abbv_integrate(&comps, &eulers);
        checks.push(Check::new(
            format!("abbv P^{n} euler restrictions"),
            got.as_ref().is_ok_and(|g| *g == want),
            format!("integrates to {}", n + 1),
        ));
    }
    let p1 = projective_space_components::<Q>(1);
    let o1 = projective_space_o1_restrictions(&p1);
    checks.push(Check::new(
        "abbv P^1 c1(O(1))",
        abbv_integrate(&p1, &o1).is_ok_and(|r| r.as_polynomial() == Some(&GradedPoly::one(2))),
        "integrates to 1",
    ));
    for (name, src, want) in [
        ("abbv fixture P^1 unit", P1_UNIT_FIXTURE, "0"),
        ("abbv fixture P^1 euler", P1_EULER_FIXTURE, "2"),
        ("abbv fixture P^1 O(1)", P1_O1_FIXTURE, "1"),
        ("abbv fixture P^2 line and point", P2_LINE_POINT_FIXTURE, "1"),
    ] {
        checks.push(fixture_check(name, Command::Abbv, src, |r| expect_field(r, "polynomial", json!(want)), seed));
    }

    // localized inversion
    let mut inv_bad = 0;
    for _ in 0..100 {
        let e = random_invertible_element::<Q, _>(&mut rng, 6);
        let ok = invert_localized(&e)
            .and_then(|inv| inv.mul(&e))
            .is_ok_and(|p| p == EquivariantElement::unit(e.algebra().clone(), e.num_vars()));
        if !ok {
            inv_bad += 1;
        }
    }
    checks.push(Check::new("localized inversion", inv_bad == 0, format!("100 random elements, {inv_bad} failures")));

    // K-theoretic Euler characteristics of O(d) on projective spaces
    let mut chi_bad = Vec::new();
    let mut acyclic_bad = Vec::new();
    let mut serre_bad = Vec::new();
    let chi = |n: usize, d: i64| evaluate_at_one(&fixed_point_sum(&projective_space_dataset::<Q>(n, d)).ok()?).ok();
    for n in 1..=3usize {
        for d in 0..=5i64 {
            let want = Q::from_integer(binomial(n as u64 + d as u64, n as u64));
            if chi(n, d) != Some(want.clone()) {
                chi_bad.push(format!("({n},{d})"));
            }
            let sign = if n % 2 == 0 { Q::from_int(1) } else { Q::from_int(-1) };
            if chi(n, -d - n as i64 - 1) != Some(sign * want) {
                serre_bad.push(format!("({n},{d})"));
            }
        }
        for d in 1..=n as i64 {
            if !fixed_point_sum(&projective_space_dataset::<Q>(n, -d)).is_ok_and(|s| s.is_zero()) {
                acyclic_bad.push(format!("({n},{})", -d));
            }
        }
    }
    let detail = |bad: &[String], ok: &str| if bad.is_empty() { ok.to_string() } else { format!("failed at {}", bad.join(" ")) };
    checks.push(Check::new("chi P^n O(d)", chi_bad.is_empty(), detail(&chi_bad, "C(n+d, n) for n <= 3, 0 <= d <= 5")));
    checks.push(Check::new("chi acyclic range", acyclic_bad.is_empty(), detail(&acyclic_bad, "zero for -n <= d <= -1")));
    checks.push(Check::new("chi serre pattern", serre_bad.is_empty(), detail(&serre_bad, "sign (-1)^n under d -> -d-n-1")));
    checks.push(fixture_check(
        "ktheory fixture P^2 O(3)",
        Command::Ktheory,
        P2_KTHEORY_D3_FIXTURE,
        |r| expect_field(r, "value_at_one", json!("10")),
        seed,
    ));

    let names: Vec<&str> = checks.iter().map(|c| c.name.as_str()).collect();
    let results = json!({ "seed": seed, "suite": names });
    Report::with(Command::Verify, results, checks)
}

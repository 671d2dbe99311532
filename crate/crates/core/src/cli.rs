//! Command-line jobs: flags or a JSON job file in, a JSON or text report out.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::casimir::{
    build_casimir, casimir_report, centrality_check, duals, DualSide, InvariantForm,
};
use crate::error::Error;
use crate::exactnum::{fmt_rational, int, parse_rational, Rational};
use crate::liealg::{build_algebra, family_bracket, loop_bracket, AlgebraId, Family, LoopElem, LoopVector, StructureTable};
use crate::rootsys::{check_triangularity, roots_json, FullWeight, RootSystem};
use crate::superpoly::{SPoly, SuperMono};
use crate::verma::{
    block_deficits, block_json, candidate_factors, gram_block, irreducible, reconcile, shapovalov_det,
    singular_blocks, symbolic_weight, weight_from_map, weight_grid, weight_to_json, weight_vars, window_centrality,
    Verma,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_HEIGHT: i64 = 4;
const DEFAULT_WINDOW: i64 = 3;
const DEFAULT_K16_BAND: i32 = 5;
const DEFAULT_LOOP_BAND: i32 = 2;
const DEFAULT_POINTS: usize = 25;

#[derive(Parser, Debug)]
#[command(name = "superlie", version, about = "Exact computations in Poisson and contact Lie superalgebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Bracket of two generating functions
    Bracket {
        f: String,
        g: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Structure table as JSON
    DumpAlgebra(Opts),
    /// Roots, weights, positivity and ρ
    Roots(Opts),
    /// Build the Casimir element and test it for centrality
    CasimirCheck(Opts),
    /// Gram matrix of one weight space
    Gram(Opts),
    /// Gram determinants factored into linear candidates
    Shapdet(Opts),
    /// Irreducibility verdict for a numeric highest weight
    Irreducible(Opts),
    /// Abstract vs explicit criterion vs Gram determinants on a weight grid
    Reconcile {
        #[command(flatten)]
        opts: Opts,
        /// grid size
        #[arg(long)]
        points: Option<usize>,
    },
    /// Run a JSON job file
    Job { path: PathBuf },
}

#[derive(Args, Debug, Default, Clone)]
pub struct Opts {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub band: Option<i32>,
    /// height bound (po/sh), grade window (k16 casimir-check)
    #[arg(long, allow_hyphen_values = true)]
    pub height: Option<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub deficit: Option<Vec<i64>>,
    /// weights file, or an inline JSON object such as {"a{1}": "1/2"}
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, value_enum)]
    pub duals: Option<DualsArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DualsArg {
    #[default]
    Right,
    Left,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JobCommand {
    Bracket,
    DumpAlgebra,
    Roots,
    CasimirCheck,
    Gram,
    Shapdet,
    Irreducible,
    Reconcile,
}

/// Inline coordinates or a path to a JSON file holding them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsArg {
    Inline(BTreeMap<String, Value>),
    File(PathBuf),
}

/// One job, as read from a job file or assembled from flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: JobCommand,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficit: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsArg>,
    /// explicit reconcile grid
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<BTreeMap<String, Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default)]
    pub duals: DualsArg,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// bracket operands
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
}

fn weights_arg(w: &str) -> Result<WeightsArg, CliError> {
    if w.trim_start().starts_with('{') {
        serde_json::from_str(w)
            .map(WeightsArg::Inline)
            .map_err(|e| CliError::Usage(format!("bad inline weights: {e}")))
    } else {
        Ok(WeightsArg::File(PathBuf::from(w)))
    }
}

impl JobSpec {
    fn from_opts(command: JobCommand, o: Opts) -> Result<JobSpec, CliError> {
        Ok(JobSpec {
            command,
            family: o.family.ok_or_else(|| CliError::Usage("--family is required".into()))?,
            k: o.k,
            band: o.band,
            height: o.height,
            deficit: o.deficit,
            weights: o.weights.map(|w| weights_arg(&w)).transpose()?,
            grid: None,
            points: None,
            duals: o.duals.unwrap_or_default(),
            format: o.format.unwrap_or_default(),
            out: o.out,
            f: None,
            g: None,
        })
    }

    /// Read a job file; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<JobSpec, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read job file {}: {e}", path.display())))?;
        let mut spec: JobSpec = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad job file {}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        if let Some(WeightsArg::File(p)) = &mut spec.weights {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        if let Some(p) = &mut spec.out {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

/// A finished job: its JSON document, a text rendering and the check verdict.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.text.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// Parse arguments, run, print or write the report; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let spec = match spec_from_cli(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&spec) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn spec_from_cli(cli: Cli) -> Result<JobSpec, CliError> {
    Ok(match cli.command {
        CliCommand::Bracket { f, g, opts } => {
            let mut s = JobSpec::from_opts(JobCommand::Bracket, opts)?;
            s.f = Some(f);
            s.g = Some(g);
            s
        }
        CliCommand::DumpAlgebra(o) => JobSpec::from_opts(JobCommand::DumpAlgebra, o)?,
        CliCommand::Roots(o) => JobSpec::from_opts(JobCommand::Roots, o)?,
        CliCommand::CasimirCheck(o) => JobSpec::from_opts(JobCommand::CasimirCheck, o)?,
        CliCommand::Gram(o) => JobSpec::from_opts(JobCommand::Gram, o)?,
        CliCommand::Shapdet(o) => JobSpec::from_opts(JobCommand::Shapdet, o)?,
        CliCommand::Irreducible(o) => JobSpec::from_opts(JobCommand::Irreducible, o)?,
        CliCommand::Reconcile { opts, points } => {
            let mut s = JobSpec::from_opts(JobCommand::Reconcile, opts)?;
            s.points = points;
            s
        }
        CliCommand::Job { path } => JobSpec::load(&path)?,
    })
}

/// Run a job and deliver its output; the exit code reflects the checks.
pub fn execute(spec: &JobSpec) -> Result<i32, CliError> {
    let report = run(spec)?;
    let body = report.render(spec.format);
    match &spec.out {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(report.exit_code())
}

fn algebra_of(spec: &JobSpec) -> Result<AlgebraId, CliError> {
    let family = Family::parse(&spec.family).map_err(|e| CliError::Usage(e.to_string()))?;
    let k = match (family, spec.k) {
        (Family::K16, None) => 3,
        (_, Some(k)) => k,
        (_, None) => return Err(CliError::Usage(format!("--k is required for {family}"))),
    };
    let band = match family {
        Family::K16 => Some(spec.band.unwrap_or(DEFAULT_K16_BAND)),
        Family::LoopPo | Family::LoopSh => Some(spec.band.unwrap_or(DEFAULT_LOOP_BAND)),
        _ => {
            if spec.band.is_some() {
                return Err(CliError::Usage(format!("{family} takes no --band")));
            }
            None
        }
    };
    AlgebraId::new(family, k, band).map_err(|e| CliError::Usage(e.to_string()))
}

fn height_of(spec: &JobSpec) -> Result<i64, CliError> {
    let h = spec.height.unwrap_or(DEFAULT_HEIGHT);
    if h < 1 {
        return Err(CliError::Usage(format!("height bound must be positive, got {h}")));
    }
    Ok(h)
}

fn root_system(table: &StructureTable) -> Result<RootSystem, CliError> {
    if table.algebra.family.is_loop() {
        return Err(CliError::Usage(format!("{} has no triangular decomposition here", table.algebra)));
    }
    Ok(RootSystem::new(table)?)
}

fn side_of(spec: &JobSpec) -> DualSide {
    match spec.duals {
        DualsArg::Right => DualSide::Right,
        DualsArg::Left => DualSide::Left,
    }
}

fn rational_of(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| CliError::Usage(e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| CliError::Usage(format!("weight {n} is not an integer; quote rationals"))),
        other => Err(CliError::Usage(format!("bad weight coordinate {other}"))),
    }
}

fn weight_map(m: &BTreeMap<String, Value>) -> Result<BTreeMap<String, Rational>, CliError> {
    m.iter().map(|(k, v)| Ok((k.clone(), rational_of(v)?))).collect()
}

fn load_weights(spec: &JobSpec) -> Result<BTreeMap<String, Rational>, CliError> {
    match &spec.weights {
        None => Err(CliError::Usage("numeric jobs need --weights".into())),
        Some(WeightsArg::Inline(m)) => weight_map(m),
        Some(WeightsArg::File(p)) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read weights {}: {e}", p.display())))?;
            let m: BTreeMap<String, Value> = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad weights file {}: {e}", p.display())))?;
            weight_map(&m)
        }
    }
}

/// Execute the pipeline behind one job.
pub fn run(spec: &JobSpec) -> Result<Report, CliError> {
    let id = algebra_of(spec)?;
    match spec.command {
        JobCommand::Bracket => run_bracket(spec, id),
        JobCommand::DumpAlgebra => run_dump(id),
        JobCommand::Roots => run_roots(id),
        JobCommand::CasimirCheck => run_casimir(spec, id),
        JobCommand::Gram => run_gram(spec, id, false),
        JobCommand::Shapdet => run_gram(spec, id, true),
        JobCommand::Irreducible => run_irreducible(spec, id),
        JobCommand::Reconcile => run_reconcile(spec, id),
    }
}

fn operand(spec: &JobSpec, k: usize, which: &str) -> Result<SPoly, CliError> {
    let s = match which {
        "f" => spec.f.as_deref(),
        _ => spec.g.as_deref(),
    }
    .ok_or_else(|| CliError::Usage(format!("bracket needs operand {which}")))?;
    SPoly::parse(k, s).map_err(|e| CliError::Usage(e.to_string()))
}

fn to_loop_vector(base: &StructureTable, p: &SPoly) -> Result<LoopVector, CliError> {
    let mut v = LoopVector::default();
    for (m, c) in p.terms() {
        let id = base
            .id_of(SuperMono { tdeg: 0, mask: m.mask })
            .ok_or_else(|| CliError::Usage(format!("monomial {m:?} is not in {}", base.algebra)))?;
        let e = LoopElem { tdeg: m.tdeg, base: id };
        v = v.add(&LoopVector::elem(e).scale(&(c * int(base.basis[id].sign))));
    }
    Ok(v)
}

fn from_loop_vector(base: &StructureTable, v: &LoopVector) -> SPoly {
    let k = base.k();
    let mut p = SPoly::zero(k);
    for (e, c) in &v.terms {
        let g = SPoly::t_pow(k, e.tdeg).smul(&base.basis[e.base].gen).expect("same k");
        p = p.add(&g.scale(c));
    }
    p
}

fn run_bracket(spec: &JobSpec, id: AlgebraId) -> Result<Report, CliError> {
    let k = id.k;
    let f = operand(spec, k, "f")?;
    let g = operand(spec, k, "g")?;
    let (result, central) = match id.family {
        Family::Po | Family::K16 => (family_bracket(id.family, &f, &g), None),
        Family::Sh => {
            let mut r = family_bracket(id.family, &f, &g);
            let c = r.coeff(SuperMono::new(0, 0));
            r.add_term(SuperMono::new(0, 0), -c);
            (r, None)
        }
        Family::LoopPo | Family::LoopSh => {
            let base = build_algebra(AlgebraId {
                family: id.family.base(),
                k,
                band: None,
            })?;
            let x = to_loop_vector(&base, &f)?;
            let y = to_loop_vector(&base, &g)?;
            let b = loop_bracket(&base, &x, &y);
            (from_loop_vector(&base, &b), Some(b.central))
        }
    };
    let mut json = json!({
        "version": 1,
        "family": id.family,
        "k": k,
        "f": f.to_string(),
        "g": g.to_string(),
        "bracket": result.to_string(),
    });
    let mut text = format!("[{f}, {g}] = {result}");
    if let Some(c) = central {
        json["central"] = json!(fmt_rational(&c));
        let _ = write!(text, " + ({}) z", fmt_rational(&c));
    }
    text.push('\n');
    Ok(Report { json, text, passed: true })
}

fn run_dump(id: AlgebraId) -> Result<Report, CliError> {
    let table = build_algebra(id)?;
    let mut text = format!("{}: dim {}, {} nonzero brackets", table.algebra, table.dim(), table.entries().len());
    if table.incomplete_count() > 0 {
        let _ = write!(text, ", {} out of band", table.incomplete_count());
    }
    text.push('\n');
    for b in &table.basis {
        let _ = writeln!(text, "{:>5}  {}  p={}", b.id, b.label(), b.parity);
    }
    Ok(Report {
        json: table.to_json(),
        text,
        passed: true,
    })
}

fn run_roots(id: AlgebraId) -> Result<Report, CliError> {
    let table = build_algebra(id)?;
    let rs = root_system(&table)?;
    let tri = check_triangularity(&table, &rs);
    let mut json = roots_json(&table, &rs);
    json["triangularity"] = json!({
        "passed": tri.passed(),
        "violations": tri.violations.len(),
        "skipped": tri.skipped,
    });
    let mut text = format!(
        "{}: {} positive, {} negative, rank {}\n",
        table.algebra,
        rs.positive.len(),
        rs.negative.len(),
        rs.rank()
    );
    for &i in rs.positive.iter().chain(&rs.negative) {
        let _ = writeln!(
            text,
            "{:>5}  {:<28} {:<16} {}  p={}",
            i,
            table.basis[i].label(),
            rs.graded(i).to_string(),
            if rs.is_positive(i) { "+" } else { "-" },
            table.parity(i)
        );
    }
    let _ = writeln!(text, "triangularity: {}", if tri.passed() { "ok" } else { "FAILED" });
    Ok(Report {
        json,
        text,
        passed: tri.passed(),
    })
}

fn run_casimir(spec: &JobSpec, id: AlgebraId) -> Result<Report, CliError> {
    let table = build_algebra(id)?;
    let rs = root_system(&table)?;
    let form = InvariantForm::new(&table);
    let side = side_of(spec);
    let d = duals(&table, &form, side)?;
    if id.family != Family::K16 {
        let c = build_casimir(&table, &rs, &d, None)?;
        let failures = centrality_check(&table, &rs, &c)?;
        let json = casimir_report(&table, &rs, &d, &failures);
        let text = format!(
            "{} ({} duals, conv sign {}): {} basis elements fail to commute with C\n",
            table.algebra,
            side.name(),
            crate::superpoly::CONV_SIGN,
            failures.len()
        );
        return Ok(Report {
            json,
            text,
            passed: failures.is_empty(),
        });
    }
    let window = spec.height.unwrap_or(DEFAULT_WINDOW);
    let band = id.band.expect("k16 is banded") as i64;
    if window < 0 || band < window + 2 {
        return Err(CliError::Usage(format!(
            "band T = {band} is too small for grade window {window}; need T ≥ window + 2"
        )));
    }
    let c = build_casimir(&table, &rs, &d, Some(window))?;
    let space = weight_vars(&table, &rs);
    let verma = Verma::new(&table, &rs, space.clone(), symbolic_weight(&space))?;
    let rep = window_centrality(&verma, &c, window)?;
    let mut json = casimir_report(&table, &rs, &d, &[]);
    json["window"] = json!(window);
    json["checked"] = json!(rep.checked);
    json["eigenvalue"] = match &rep.eigenvalue {
        Some(p) => json!(p.to_string()),
        None => Value::Null,
    };
    json["failures"] = Value::Array(
        rep.failures
            .iter()
            .map(|(f, v)| {
                json!({
                    "basis": table.basis[*f].label(),
                    "id": f,
                    "bracket": verma.uea.format(v),
                })
            })
            .collect(),
    );
    let text = format!(
        "{} (window {window}, {} duals): C·v_a = {}; {} of {} negative roots fail\n",
        table.algebra,
        side.name(),
        rep.eigenvalue.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "not scalar".into()),
        rep.failures.len(),
        rep.checked
    );
    Ok(Report {
        json,
        text,
        passed: rep.passed(),
    })
}

fn check_deficit(rs: &RootSystem, d: &[i64]) -> Result<(), CliError> {
    let want = rs.grading(rs.positive.first().copied().unwrap_or(0)).len();
    if d.len() != want {
        return Err(CliError::Usage(format!("deficit needs {want} entries, got {}", d.len())));
    }
    if rs.height(d) < 0 {
        return Err(CliError::Usage(format!("deficit {d:?} is not a positive combination")));
    }
    Ok(())
}

fn run_gram(spec: &JobSpec, id: AlgebraId, factor: bool) -> Result<Report, CliError> {
    let table = build_algebra(id)?;
    let rs = root_system(&table)?;
    let form = InvariantForm::new(&table);
    let d = duals(&table, &form, side_of(spec))?;
    let space = weight_vars(&table, &rs);
    let verma = Verma::new(&table, &rs, space.clone(), symbolic_weight(&space))?;
    let deficits = match (&spec.deficit, factor) {
        (Some(def), _) => {
            check_deficit(&rs, def)?;
            vec![def.clone()]
        }
        (None, true) => block_deficits(&rs.enumerate_quasiroots(&table, height_of(spec)?), &rs),
        (None, false) => return Err(CliError::Usage("gram needs --deficit".into())),
    };
    let mut blocks = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for def in &deficits {
        let block = gram_block(&verma, &d, def)?;
        let _ = writeln!(text, "deficit {def:?}: {}×{}, det = {}", block.basis.len(), block.basis.len(), block.det);
        if !factor {
            blocks.push(block_json(&verma, &block, None));
            continue;
        }
        let qs = rs.enumerate_quasiroots(&table, rs.height(def));
        let cands = candidate_factors(&table, &rs, &space, &qs);
        match shapovalov_det(&block.det, &cands) {
            Ok(rep) => {
                passed &= rep.passed();
                for &(n, m) in &rep.factors {
                    let _ = writeln!(text, "  ({})^{m}", cands[n].linear);
                }
                let _ = writeln!(text, "  residual {}  {}", rep.residual, if rep.passed() { "PASS" } else { "FAIL" });
                blocks.push(block_json(&verma, &block, Some((&rep, &cands))));
            }
            Err(Error::Degenerate(_)) => {
                passed = false;
                let _ = writeln!(text, "  degenerate block");
                let mut v = block_json(&verma, &block, None);
                v["degenerate"] = json!(true);
                v["passed"] = json!(false);
                blocks.push(v);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let json = if spec.deficit.is_some() {
        blocks.pop().expect("one block")
    } else {
        json!({
            "version": 1,
            "family": table.algebra.family,
            "k": table.k(),
            "height": height_of(spec)?,
            "blocks": blocks,
            "passed": passed,
        })
    };
    Ok(Report { json, text, passed })
}

fn run_irreducible(spec: &JobSpec, id: AlgebraId) -> Result<Report, CliError> {
    let table = build_algebra(id)?;
    let rs = root_system(&table)?;
    let form = InvariantForm::new(&table);
    let d = duals(&table, &form, side_of(spec))?;
    let space = weight_vars(&table, &rs);
    let a = weight_from_map(&space, &load_weights(spec)?).map_err(|e| CliError::Usage(e.to_string()))?;
    let bound = height_of(spec)?;
    let qs = rs.enumerate_quasiroots(&table, bound);
    let witnesses = irreducible(&table, &rs, &a, &qs);
    let verma = Verma::<Rational>::new(&table, &rs, crate::exactnum::NoCtx, a.coords.clone())?;
    let singular = singular_blocks(&verma, &d, &block_deficits(&qs, &rs))?;
    let verdict = |reducible: bool| if reducible { "reducible" } else { "irreducible" };
    let agree = witnesses.is_empty() == singular.is_empty();
    let json = json!({
        "version": 1,
        "family": table.algebra.family,
        "k": table.k(),
        "height": bound,
        "weight": weight_to_json(&space, &a),
        "verdict": verdict(!witnesses.is_empty()),
        "witnesses": witnesses.iter().map(|q| q.describe(&table)).collect::<Vec<_>>(),
        "gram_verdict": verdict(!singular.is_empty()),
        "singular_blocks": singular,
        "agree": agree,
    });
    let mut text = format!(
        "{} up to height {bound}: {} (Gram: {})\n",
        table.algebra,
        verdict(!witnesses.is_empty()),
        verdict(!singular.is_empty())
    );
    for q in &witnesses {
        let _ = writeln!(text, "  witness {}", q.describe(&table));
    }
    Ok(Report { json, text, passed: agree })
}

fn run_reconcile(spec: &JobSpec, id: AlgebraId) -> Result<Report, CliError> {
    let table = build_algebra(id)?;
    let rs = root_system(&table)?;
    let form = InvariantForm::new(&table);
    let d = duals(&table, &form, side_of(spec))?;
    let space = weight_vars(&table, &rs);
    let bound = height_of(spec)?;
    let grid: Vec<FullWeight> = match &spec.grid {
        Some(points) => points
            .iter()
            .map(|m| weight_from_map(&space, &weight_map(m)?).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<_, _>>()?,
        None => {
            let qs = rs.enumerate_quasiroots(&table, bound);
            let cands = candidate_factors(&table, &rs, &space, &qs);
            weight_grid(rs.rank(), &cands, spec.points.unwrap_or(DEFAULT_POINTS))
        }
    };
    let rep = reconcile(&table, &rs, &d, &grid, bound)?;
    let n = rep.rows.len();
    let pct = |m: usize| if n == 0 { 100.0 } else { 100.0 * m as f64 / n as f64 };
    let mut text = format!("{} up to height {bound}, {n} weights\n", table.algebra);
    let _ = writeln!(text, "  abstract vs Gram     {:>4}/{n}  {:5.1}%", rep.abstract_vs_gram(), pct(rep.abstract_vs_gram()));
    let _ = writeln!(text, "  explicit vs Gram     {:>4}/{n}  {:5.1}%", rep.explicit_vs_gram(), pct(rep.explicit_vs_gram()));
    let _ = writeln!(text, "  abstract vs explicit {:>4}/{n}  {:5.1}%", rep.abstract_vs_explicit(), pct(rep.abstract_vs_explicit()));
    let short = |b: bool| if b { "red" } else { "irr" };
    for r in &rep.rows {
        let coords: Vec<String> = r.weight.coords.iter().map(fmt_rational).collect();
        let _ = writeln!(
            text,
            "  [{}]  abstract {}  explicit {}  gram {}",
            coords.join(", "),
            short(r.abstract_reducible),
            short(r.explicit_reducible),
            short(r.gram_reducible)
        );
    }
    Ok(Report {
        json: rep.to_json(&table, &space),
        text,
        passed: rep.passed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(command: JobCommand, family: &str, k: Option<usize>) -> JobSpec {
        JobSpec {
            command,
            family: family.into(),
            k,
            band: None,
            height: None,
            deficit: None,
            weights: None,
            grid: None,
            points: None,
            duals: DualsArg::Right,
            format: Format::Json,
            out: None,
            f: None,
            g: None,
        }
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(run(&spec(JobCommand::Roots, "gl", Some(1))), Err(CliError::Usage(_))));
        assert!(matches!(run(&spec(JobCommand::Roots, "po", None)), Err(CliError::Usage(_))));
        assert!(matches!(run(&spec(JobCommand::Roots, "po", Some(0))), Err(CliError::Usage(_))));
        let mut s = spec(JobCommand::CasimirCheck, "k16", None);
        s.band = Some(3);
        assert!(matches!(run(&s), Err(CliError::Usage(_))));
        assert!(matches!(run(&spec(JobCommand::Gram, "po", Some(1))), Err(CliError::Usage(_))));
        assert!(matches!(run(&spec(JobCommand::Irreducible, "po", Some(1))), Err(CliError::Usage(_))));
    }

    #[test]
    fn bracket_job() {
        let mut s = spec(JobCommand::Bracket, "po", Some(1));
        s.f = Some("x1".into());
        s.g = Some("y1".into());
        let r = run(&s).unwrap();
        assert_eq!(r.json["bracket"], "1");
        s.family = "sh".into();
        s.k = Some(2);
        s.f = Some("x1".into());
        s.g = Some("y1".into());
        assert_eq!(run(&s).unwrap().json["bracket"], "0");
        s.family = "loop-po".into();
        s.k = Some(1);
        s.f = Some("t*x1".into());
        s.g = Some("t^-1*y1".into());
        let r = run(&s).unwrap();
        assert_eq!(r.json["bracket"], "1");
        assert!(!r.json["central"].as_str().unwrap().starts_with('0'));
    }

    #[test]
    fn shapdet_po1() {
        let mut s = spec(JobCommand::Shapdet, "po", Some(1));
        s.deficit = Some(vec![1]);
        let r = run(&s).unwrap();
        assert!(r.passed);
        assert_eq!(r.json["det"], "a{}");
        assert_eq!(r.json["factors"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn job_round_trip() {
        let s = spec(JobCommand::Reconcile, "po", Some(1));
        let text = serde_json::to_string(&s).unwrap();
        let back: JobSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<JobSpec>(r#"{"command":"roots","family":"po","kk":1}"#).is_err());
    }

    #[test]
    fn empty_grid() {
        let mut s = spec(JobCommand::Reconcile, "po", Some(1));
        s.points = Some(0);
        let r = run(&s).unwrap();
        assert!(r.passed);
        assert_eq!(r.json["points"], 0);
        assert!(r.json["agreement"]["abstract_gram_pct"].is_null());
    }
}

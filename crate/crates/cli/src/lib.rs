//! Scenario runner: parse a scenario description, dispatch to the
//! computation modules, and emit audit-ready reports. Reports are
//! deterministic (no timestamps) and self-describing: every numeric claim
//! carries the window and tolerances that produced it, plus the tool
//! version and a hash of the scenario.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use kazlab_core::groups::{
    affine_decay_scan, schrodinger_decay_scan, AffineSign, WindowFunction,
};
use kazlab_core::io::{
    coefficients_csv, decomposition_to_json, matrix_from_csv, matrix_to_csv, scan_to_csv,
    window_from_csv, MeasureFile, RepSequenceFile,
};
use kazlab_core::kazhdan::{
    dyadic_witness, doubling_chain_certificate, invariance_defect_points, DEFAULT_RECOVERY_N,
};
use kazlab_core::measure::CircleMeasure;
use kazlab_core::repr::{commutant_projection, decompose, UnitaryRep, DEFAULT_CLUSTER_TOL};
use kazlab_core::tensorprod::{c0_series, weak_mixing_diagnostic};
use kazlab_core::weyl::{weyl_criterion_scan, IntegerSequence, SequenceKind};
use kazlab_core::Angle;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Machine-readable failure, with a distinct code per family.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "SCHEMA",
            CliError::Io(_) => "IO",
            CliError::Compute(_) => "COMPUTE",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Io(_) => 3,
            CliError::Compute(_) => 4,
        }
    }

    pub fn record(&self) -> Value {
        json!({ "error": { "code": self.code(), "message": self.to_string() } })
    }
}

macro_rules! compute_from {
    ($($ty:ty),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self { CliError::Compute(e.to_string()) }
        })*
    };
}
compute_from!(
    kazlab_core::MeasureError,
    kazlab_core::RealMeasureError,
    kazlab_core::WeylError,
    kazlab_core::KazhdanError,
    kazlab_core::RepError,
    kazlab_core::TensorError,
    kazlab_core::GroupError
);

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<kazlab_core::io::IoError> for CliError {
    fn from(e: kazlab_core::io::IoError) -> Self {
        match e {
            kazlab_core::io::IoError::Io(inner) => CliError::Io(inner.to_string()),
            kazlab_core::io::IoError::Toml(inner) => CliError::Schema(inner.to_string()),
            kazlab_core::io::IoError::Field(msg) => CliError::Schema(msg),
            other => CliError::Compute(other.to_string()),
        }
    }
}

/// Data file format for scans and coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    #[default]
    Csv,
    Json,
}

/// A deterministic batch job: one command kind plus its parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OutputSpec {
    /// Output directory; the CLI-level --out-dir wins when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Basename override for the main data artifact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
    /// Basename override for the report/verdict JSON.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default)]
    pub format: DataFormat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum Command {
    MeasureEval(MeasureEvalParams),
    WeylScan(WeylScanParams),
    KazhdanWitness(KazhdanWitnessParams),
    KazhdanCertify(KazhdanCertifyParams),
    RepProject(RepProjectParams),
    TensorDiagnose(TensorDiagnoseParams),
    HeisenbergDecay(HeisenbergDecayParams),
    AffineDecay(AffineDecayParams),
}

impl Command {
    pub fn kind(&self) -> &'static str {
        match self {
            Command::MeasureEval(_) => "measure-eval",
            Command::WeylScan(_) => "weyl-scan",
            Command::KazhdanWitness(_) => "kazhdan-witness",
            Command::KazhdanCertify(_) => "kazhdan-certify",
            Command::RepProject(_) => "rep-project",
            Command::TensorDiagnose(_) => "tensor-diagnose",
            Command::HeisenbergDecay(_) => "heisenberg-decay",
            Command::AffineDecay(_) => "affine-decay",
        }
    }
}

/// A measure either inline or from a file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSource {
    Path(String),
    Inline(MeasureFile),
}

impl MeasureSource {
    fn load(&self) -> Result<CircleMeasure, CliError> {
        let file = match self {
            MeasureSource::Path(path) => {
                let text = std::fs::read_to_string(path)?;
                MeasureFile::parse(&text)?
            }
            MeasureSource::Inline(file) => file.clone(),
        };
        Ok(file.to_measure()?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureEvalParams {
    pub measure: MeasureSource,
    #[serde(default = "default_lo")]
    pub lo: i64,
    #[serde(default = "default_hi")]
    pub hi: i64,
}

fn default_lo() -> i64 {
    -64
}
fn default_hi() -> i64 {
    64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylScanParams {
    pub seq: String,
    pub theta: String,
    pub n: usize,
    #[serde(default = "default_harmonics")]
    pub harmonics: u32,
}

fn default_harmonics() -> u32 {
    kazlab_core::weyl::DEFAULT_HARMONICS
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KazhdanWitnessParams {
    /// The query set; the witness construction supports `lacunary:2^k`.
    pub set: String,
    pub epsilon: f64,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_window")]
    pub window: usize,
}

fn default_depth() -> usize {
    40
}
fn default_window() -> usize {
    30
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KazhdanCertifyParams {
    /// The certified set; the chain certificate is for `lacunary:2^k+k`.
    pub set: String,
    pub measure: MeasureSource,
    pub k: usize,
    #[serde(default = "default_recovery")]
    pub recovery_n: usize,
}

fn default_recovery() -> usize {
    DEFAULT_RECOVERY_N
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepProjectParams {
    /// CSV file with the generator matrix (re/im interleaved).
    pub rep: String,
    /// CSV file with the operator to project.
    pub operator: String,
    #[serde(default = "default_cluster_tol")]
    pub cluster_tol: f64,
}

fn default_cluster_tol() -> f64 {
    DEFAULT_CLUSTER_TOL
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequenceSource {
    Path(String),
    Inline(RepSequenceFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorDiagnoseParams {
    pub sequence: SequenceSource,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Generator word whose C₀ series is traced alongside the diagnostic.
    #[serde(default = "default_word")]
    pub word: Vec<i64>,
}

fn default_threshold() -> f64 {
    1e-3
}
fn default_word() -> Vec<i64> {
    vec![1]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowSource {
    /// `gaussian` (Heisenberg) or `bump` (affine).
    Named(String),
    /// CSV file with x,re,im rows.
    File { file: String },
}

impl Default for WindowSource {
    fn default() -> Self {
        WindowSource::Named("gaussian".into())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeisenbergDecayParams {
    pub lambda: f64,
    #[serde(default)]
    pub window: WindowSource,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    pub pmax: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_radius() -> f64 {
    20.0
}
fn default_points() -> usize {
    4097
}
fn default_steps() -> usize {
    0 // 0 means one step per unit of the parameter
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineDecayParams {
    pub a: f64,
    #[serde(default = "default_bump_window")]
    pub window: WindowSource,
    #[serde(default = "default_center")]
    pub center: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    pub bmax: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_bump_window() -> WindowSource {
    WindowSource::Named("bump".into())
}
fn default_center() -> f64 {
    8.0
}
fn default_width() -> f64 {
    0.8
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        toml::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    /// Hash of the canonical serialization; embedded in every report.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("scenarios serialize");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        format!("{:x}", hasher.finalize())
    }
}

/// Files written by a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
}

struct ReportCtx {
    hash: String,
    seed: u64,
    kind: &'static str,
    dir: PathBuf,
    data_name: Option<String>,
    report_name: Option<String>,
    format: DataFormat,
    files: Vec<PathBuf>,
}

impl ReportCtx {
    fn envelope(&self, tolerances: BTreeMap<&'static str, f64>, results: Value) -> Value {
        json!({
            "tool_version": TOOL_VERSION,
            "scenario_hash": self.hash,
            "seed": self.seed,
            "command": self.kind,
            "tolerances": tolerances,
            "results": results,
        })
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, text)?;
        self.files.push(path);
        Ok(())
    }

    fn write_data(&mut self, default_base: &str, csv: &str, rows: Value) -> Result<(), CliError> {
        let (name, body) = match self.format {
            DataFormat::Csv => (
                self.data_name
                    .clone()
                    .unwrap_or_else(|| format!("{default_base}.csv")),
                csv.to_owned(),
            ),
            DataFormat::Json => (
                self.data_name
                    .clone()
                    .unwrap_or_else(|| format!("{default_base}.json")),
                serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
            ),
        };
        self.write_text(&name, &body)
    }

    fn write_report(&mut self, default_base: &str, report: &Value) -> Result<(), CliError> {
        let name = self
            .report_name
            .clone()
            .unwrap_or_else(|| format!("{default_base}.json"));
        let body = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
        self.write_text(&name, &body)
    }
}

/// Runs a scenario and writes its outputs under `out_dir` (the scenario's
/// own output.dir, when set, wins). Fully deterministic given the
/// scenario and seed.
pub fn run(scenario: &Scenario, out_dir: &Path) -> Result<RunOutcome, CliError> {
    let dir = scenario
        .output
        .dir
        .clone()
        .unwrap_or_else(|| out_dir.to_path_buf());
    std::fs::create_dir_all(&dir)?;
    let mut ctx = ReportCtx {
        hash: scenario.hash(),
        seed: scenario.seed,
        kind: scenario.command.kind(),
        dir,
        data_name: scenario.output.data.clone(),
        report_name: scenario.output.report.clone(),
        format: scenario.output.format,
        files: Vec::new(),
    };
    match &scenario.command {
        Command::MeasureEval(p) => run_measure_eval(p, &mut ctx)?,
        Command::WeylScan(p) => run_weyl_scan(p, &mut ctx)?,
        Command::KazhdanWitness(p) => run_kazhdan_witness(p, &mut ctx)?,
        Command::KazhdanCertify(p) => run_kazhdan_certify(p, &mut ctx)?,
        Command::RepProject(p) => run_rep_project(p, &mut ctx)?,
        Command::TensorDiagnose(p) => run_tensor_diagnose(p, &mut ctx)?,
        Command::HeisenbergDecay(p) => run_heisenberg_decay(p, &mut ctx)?,
        Command::AffineDecay(p) => run_affine_decay(p, &mut ctx)?,
    }
    Ok(RunOutcome { files: ctx.files })
}

fn parse_angle(text: &str) -> Result<Angle, CliError> {
    text.parse()
        .map_err(|e: kazlab_core::fixed::AngleParseError| CliError::Schema(e.to_string()))
}

fn run_measure_eval(p: &MeasureEvalParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    if p.lo > p.hi {
        return Err(CliError::Schema(format!(
            "empty index range [{}, {}]",
            p.lo, p.hi
        )));
    }
    let measure = p.measure.load()?;
    let csv = coefficients_csv(&measure, p.lo, p.hi);
    let rows: Vec<Value> = (p.lo..=p.hi)
        .map(|n| {
            let fc = measure.fourier_coefficient(n);
            json!({ "n": n, "re": fc.value.re, "im": fc.value.im, "nyquist_warning": fc.nyquist_warning })
        })
        .collect();
    ctx.write_data("coefficients", &csv, json!(rows))?;
    let total = measure.total_mass();
    let report = ctx.envelope(
        BTreeMap::new(),
        json!({
            "range": [p.lo, p.hi],
            "total_mass": [total.re, total.im],
            "atoms": measure.atoms().len(),
            "grid": measure.grid_len(),
            "factors": measure.factors().len(),
        }),
    );
    ctx.write_report("report", &report)
}

fn run_weyl_scan(p: &WeylScanParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    let seq = IntegerSequence::parse(&p.seq).map_err(|e| CliError::Schema(e.to_string()))?;
    let theta = parse_angle(&p.theta)?;
    let reports = weyl_criterion_scan(&seq, theta, p.harmonics, p.n)?;
    let mut csv = String::from("harmonic,n,re,im,magnitude\n");
    let mut rows = Vec::new();
    for r in &reports {
        for (n, s) in &r.partial_sums {
            csv.push_str(&format!(
                "{},{n},{:.17e},{:.17e},{:.17e}\n",
                r.harmonic,
                s.re,
                s.im,
                s.norm()
            ));
            rows.push(json!({
                "harmonic": r.harmonic, "n": n, "re": s.re, "im": s.im, "magnitude": s.norm()
            }));
        }
    }
    ctx.write_data("weyl_scan", &csv, json!(rows))?;
    let finals: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "harmonic": r.harmonic,
                "magnitude": r.magnitude,
                "re": r.final_mean.re,
                "im": r.final_mean.im,
            })
        })
        .collect();
    let report = ctx.envelope(
        BTreeMap::new(),
        json!({
            "seq": p.seq,
            "theta": theta.to_string(),
            "n": p.n,
            "harmonics": p.harmonics,
            "final_means": finals,
            "note": "finite-horizon residuals; equidistribution is asymptotic and is not asserted",
        }),
    );
    ctx.write_report("report", &report)
}

fn run_kazhdan_witness(p: &KazhdanWitnessParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    let seq = IntegerSequence::parse(&p.set).map_err(|e| CliError::Schema(e.to_string()))?;
    match seq.kind {
        SequenceKind::Lacunary {
            base: 2,
            add_index: false,
        } => {}
        _ => {
            return Err(CliError::Compute(format!(
                "the Dirac-convolution witness relies on each element dividing the next; \
                 it is implemented for `lacunary:2^k`, got {:?}",
                p.set
            )))
        }
    }
    let (witness, verdict) = dyadic_witness(p.epsilon, p.depth, p.window)?;
    let measure_file = MeasureFile::from_measure(&witness.measure).render();
    ctx.write_text("witness_measure.toml", &measure_file)?;
    let mut tolerances = BTreeMap::new();
    tolerances.insert("epsilon", p.epsilon);
    tolerances.insert("consistency_slack", kazlab_core::kazhdan::CONSISTENCY_SLACK);
    let mut report = ctx.envelope(
        tolerances,
        json!({
            "set": p.set,
            "depth": p.depth,
            "tail_bounds": witness.tail_bounds,
        }),
    );
    merge_verdict(&mut report, &verdict);
    ctx.write_report("verdict", &report)
}

fn merge_verdict(report: &mut Value, verdict: &kazlab_core::WitnessVerdict) {
    let v = serde_json::to_value(verdict).expect("verdicts serialize");
    let obj = report.as_object_mut().expect("report is an object");
    for (k, val) in v.as_object().expect("verdict is an object") {
        obj.insert(k.clone(), val.clone());
    }
}

fn run_kazhdan_certify(p: &KazhdanCertifyParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    let seq = IntegerSequence::parse(&p.set).map_err(|e| CliError::Schema(e.to_string()))?;
    match seq.kind {
        SequenceKind::Lacunary {
            base: 2,
            add_index: true,
        } => {}
        _ => {
            return Err(CliError::Compute(format!(
                "the doubling-chain certificate uses 2n_k = n_{{k+1}} + k − 1; \
                 it is implemented for `lacunary:2^k+k`, got {:?}",
                p.set
            )))
        }
    }
    let measure = p.measure.load()?;
    let verdict = doubling_chain_certificate(&measure, p.k, p.recovery_n)?;
    let mut tolerances = BTreeMap::new();
    tolerances.insert("chain_threshold", kazlab_core::kazhdan::CHAIN_THRESHOLD);
    tolerances.insert("consistency_slack", kazlab_core::kazhdan::CONSISTENCY_SLACK);
    let mut report = ctx.envelope(
        tolerances,
        json!({
            "set": p.set,
            "k_max": p.k,
            "recovery_n": p.recovery_n,
        }),
    );
    merge_verdict(&mut report, &verdict);
    ctx.write_report("verdict", &report)
}

fn run_rep_project(p: &RepProjectParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    let rep_matrix = matrix_from_csv(&std::fs::read_to_string(&p.rep)?)?;
    let operator = matrix_from_csv(&std::fs::read_to_string(&p.operator)?)?;
    let rep = UnitaryRep::cyclic(rep_matrix)?;
    let decomp = decompose(&rep, p.cluster_tol)?;
    let projected = commutant_projection(&decomp, &operator)?;
    ctx.write_text("decomposition.json", &decomposition_to_json(&decomp))?;
    let projected_csv = matrix_to_csv(&projected);
    ctx.write_text("projected.csv", &projected_csv)?;
    let norm_sq = kazlab_core::repr::projection_norm_sq(&decomp, &operator)?;
    let mut tolerances = BTreeMap::new();
    tolerances.insert("cluster_tol", p.cluster_tol);
    let report = ctx.envelope(
        tolerances,
        json!({
            "dimension": rep.dim,
            "classes": decomp.classes.len(),
            "projection_norm_sq": norm_sq,
        }),
    );
    ctx.write_report("report", &report)
}

fn run_tensor_diagnose(p: &TensorDiagnoseParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    let file = match &p.sequence {
        SequenceSource::Path(path) => RepSequenceFile::parse(&std::fs::read_to_string(path)?)?,
        SequenceSource::Inline(file) => file.clone(),
    };
    let seq = file.to_sequence()?;
    let diag = weak_mixing_diagnostic(&seq, p.threshold)?;
    let trace = c0_series(&seq, &p.word, None)?;
    let mut csv = String::from("n,v_n,c0_partial\n");
    let mut rows = Vec::new();
    for (i, v) in diag.values.iter().enumerate() {
        csv.push_str(&format!(
            "{},{:.17e},{:.17e}\n",
            i + 1,
            v,
            trace.partial_sums[i]
        ));
        rows.push(json!({ "n": i + 1, "v_n": v, "c0_partial": trace.partial_sums[i] }));
    }
    ctx.write_data("diagnostic", &csv, json!(rows))?;
    let mut tolerances = BTreeMap::new();
    tolerances.insert("threshold", p.threshold);
    let report = ctx.envelope(
        tolerances,
        json!({
            "slots": seq.len(),
            "word": p.word,
            "min_v": diag.min_value,
            "window": diag.window,
            "criterion_met_at_horizon": diag.criterion_met,
            "c0_divergence_flagged": trace.divergence_flagged,
            "note": "weak-mixing evidence at this window only; no limit claim",
        }),
    );
    ctx.write_report("report", &report)
}

fn load_window(
    source: &WindowSource,
    center: f64,
    width: f64,
    radius: f64,
    points: usize,
    affine: bool,
) -> Result<WindowFunction, CliError> {
    match source {
        WindowSource::File { file } => Ok(window_from_csv(&std::fs::read_to_string(file)?)?),
        WindowSource::Named(name) => match name.as_str() {
            "gaussian" if !affine => Ok(WindowFunction::gaussian(radius, points)?),
            "bump" => Ok(WindowFunction::bump(center, width, 0.0, radius, points)?),
            other => Err(CliError::Schema(format!(
                "unknown window {other:?}; use \"gaussian\", \"bump\", or {{ file = \"…\" }}"
            ))),
        },
    }
}

fn param_grid(max: f64, steps: usize) -> Vec<f64> {
    let count = if steps == 0 {
        (max.ceil() as usize).max(1) + 1
    } else {
        steps
    };
    (0..count)
        .map(|i| max * i as f64 / (count - 1) as f64)
        .collect()
}

fn run_heisenberg_decay(p: &HeisenbergDecayParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    let window = load_window(&p.window, 0.0, 1.0, p.radius, p.points, false)?;
    let momenta = param_grid(p.pmax, p.steps);
    let scan = schrodinger_decay_scan(p.lambda, &window, &window, &momenta)?;
    let csv = scan_to_csv(&scan, "p");
    let rows: Vec<Value> = scan
        .iter()
        .map(|(param, mag)| json!({ "p": param, "magnitude": mag }))
        .collect();
    ctx.write_data("decay", &csv, json!(rows))?;
    let first = scan.first().map(|x| x.1).unwrap_or(0.0);
    let last = scan.last().map(|x| x.1).unwrap_or(0.0);
    let report = ctx.envelope(
        BTreeMap::new(),
        json!({
            "lambda": p.lambda,
            "radius": p.radius,
            "points": p.points,
            "pmax": p.pmax,
            "magnitude_at_0": first,
            "magnitude_at_pmax": last,
            "note": "finite-window decay evidence for the coefficient vanishing of the Schrödinger family",
        }),
    );
    ctx.write_report("report", &report)
}

fn run_affine_decay(p: &AffineDecayParams, ctx: &mut ReportCtx) -> Result<(), CliError> {
    let window = load_window(&p.window, p.center, p.width, p.radius, p.points, true)?;
    let bs = param_grid(p.bmax, p.steps);
    let scan = affine_decay_scan(AffineSign::Plus, p.a, &window, &window, &bs)?;
    let csv = scan_to_csv(&scan, "b");
    let rows: Vec<Value> = scan
        .iter()
        .map(|(param, mag)| json!({ "b": param, "magnitude": mag }))
        .collect();
    ctx.write_data("decay", &csv, json!(rows))?;
    let first = scan.first().map(|x| x.1).unwrap_or(0.0);
    let last = scan.last().map(|x| x.1).unwrap_or(0.0);
    let report = ctx.envelope(
        BTreeMap::new(),
        json!({
            "a": p.a,
            "bmax": p.bmax,
            "magnitude_at_0": first,
            "magnitude_at_bmax": last,
            "note": "finite-window Riemann–Lebesgue decay evidence for the affine family",
        }),
    );
    ctx.write_report("report", &report)
}

/// Explicit integer points 2^0..2^window; helper shared with tests.
pub fn dyadic_points(window: usize) -> Vec<BigInt> {
    (0..=window).map(|k| BigInt::from(1u8) << k).collect()
}

/// Defect of a measure file over an explicit dyadic window (exposed for
/// scripting convenience).
pub fn dyadic_defect(measure: &CircleMeasure, window: usize) -> Result<f64, CliError> {
    Ok(invariance_defect_points(measure, &dyadic_points(window))?.sup)
}

//! File formats: measure description files (TOML with [atoms]/[density]/
//! [bernoulli]/[riesz] sections), coefficient and window CSV, matrix CSV
//! with interleaved re/im entries, decomposition JSON, and representation
//! sequence description files.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixed::Angle;
use crate::groups::{GroupError, WindowFunction};
use crate::measure::{bernoulli_witness, riesz_product, CircleMeasure, MeasureError, DEFAULT_GRID};
use crate::repr::{BlockDecomposition, UnitaryRep};
use crate::tensorprod::{RepSequence, Slot, TensorError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot parse measure file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Window(#[from] GroupError),
    #[error("bad field: {0}")]
    Field(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Measure description file. All sections are optional and add up: atoms,
/// one absolutely continuous part (uniform, samples, or a Riesz product),
/// and a two-point Dirac convolution.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MeasureFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bernoulli: Option<BernoulliSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riesz: Option<RieszFileSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomSpec {
    /// Angle in turns: `1/3`, `sqrt2`, `golden`, `0.25`, or a raw `0x…` word.
    pub angle: String,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    Uniform {
        mass: f64,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    Samples {
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

/// Either explicit decreasing weights or the ε-schedule a_j = ε/(4πj).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BernoulliSpec {
    Weights { weights: Vec<f64> },
    Schedule { epsilon: f64, depth: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RieszFileSpec {
    pub frequencies: Vec<u64>,
    pub coefficients: Vec<f64>,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

impl MeasureFile {
    pub fn parse(text: &str) -> Result<MeasureFile, IoError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_measure(&self) -> Result<CircleMeasure, IoError> {
        if self.density.is_some() && self.riesz.is_some() {
            return Err(IoError::Field(
                "[density] and [riesz] both define the absolutely continuous part".into(),
            ));
        }
        let mut atoms = Vec::new();
        for spec in &self.atoms {
            let angle: Angle = spec
                .angle
                .parse()
                .map_err(|e| IoError::Field(format!("atom angle: {e}")))?;
            atoms.push((angle, Complex64::new(spec.re, spec.im)));
        }
        let density = match (&self.density, &self.riesz) {
            (Some(DensitySpec::Uniform { mass, grid }), _) => {
                Some(vec![Complex64::new(*mass, 0.0); *grid])
            }
            (Some(DensitySpec::Samples { re, im }), _) => {
                if !im.is_empty() && im.len() != re.len() {
                    return Err(IoError::Field(format!(
                        "density has {} re samples but {} im samples",
                        re.len(),
                        im.len()
                    )));
                }
                Some(
                    re.iter()
                        .enumerate()
                        .map(|(i, r)| Complex64::new(*r, im.get(i).copied().unwrap_or(0.0)))
                        .collect(),
                )
            }
            (None, Some(spec)) => riesz_product(&spec.frequencies, &spec.coefficients, spec.grid)?
                .density_samples()
                .map(<[Complex64]>::to_vec),
            (None, None) => None,
        };
        let mut measure = CircleMeasure::mixture(atoms, density);
        if let Some(bern) = &self.bernoulli {
            let weights = match bern {
                BernoulliSpec::Weights { weights } => weights.clone(),
                BernoulliSpec::Schedule { epsilon, depth } => {
                    crate::kazhdan::dyadic_witness_weights(*epsilon, *depth)
                }
            };
            let witness = bernoulli_witness(&weights)?;
            measure = merge_factors(measure, witness.measure);
        }
        Ok(measure)
    }

    /// Round-trippable description of a measure (sampled densities are
    /// written out in full).
    pub fn from_measure(measure: &CircleMeasure) -> MeasureFile {
        let atoms = measure
            .atoms()
            .iter()
            .map(|(angle, mass)| AtomSpec {
                angle: angle.to_string(),
                re: mass.re,
                im: mass.im,
            })
            .collect();
        let density = measure.density_samples().map(|samples| DensitySpec::Samples {
            re: samples.iter().map(|s| s.re).collect(),
            im: samples.iter().map(|s| s.im).collect(),
        });
        let bernoulli = if measure.factors().is_empty() {
            None
        } else {
            Some(BernoulliSpec::Weights {
                weights: measure.factors().iter().map(|f| f.weight).collect(),
            })
        };
        MeasureFile {
            atoms,
            density,
            bernoulli,
            riesz: None,
        }
    }

    pub fn render(&self) -> String {
        toml::to_string_pretty(self).expect("measure files serialize")
    }
}

fn merge_factors(base: CircleMeasure, factors: CircleMeasure) -> CircleMeasure {
    CircleMeasure::with_parts(
        base.atoms().to_vec(),
        base.density_samples().map(<[Complex64]>::to_vec),
        factors.factors().to_vec(),
    )
}

/// Coefficient rows `n,re,im`.
pub fn coefficients_csv(measure: &CircleMeasure, lo: i64, hi: i64) -> String {
    let mut out = String::from("n,re,im\n");
    for n in lo..=hi {
        let v = measure.coefficient_value(n);
        out.push_str(&format!("{n},{:.17e},{:.17e}\n", v.re, v.im));
    }
    out
}

/// One matrix row per line, entries interleaved `re,im,re,im,…`.
pub fn matrix_to_csv(m: &nalgebra::DMatrix<Complex64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let mut fields = Vec::with_capacity(2 * m.ncols());
        for j in 0..m.ncols() {
            fields.push(format!("{:.17e}", m[(i, j)].re));
            fields.push(format!("{:.17e}", m[(i, j)].im));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<nalgebra::DMatrix<Complex64>, IoError> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| IoError::Field(format!("matrix line {}: {e}", lineno + 1)))?;
        if fields.len() % 2 != 0 {
            return Err(IoError::Field(format!(
                "matrix line {} has {} fields; need re,im pairs",
                lineno + 1,
                fields.len()
            )));
        }
        rows.push(
            fields
                .chunks(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        );
    }
    if rows.is_empty() {
        return Err(IoError::Field("empty matrix".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(IoError::Field("ragged matrix rows".into()));
    }
    Ok(nalgebra::DMatrix::from_fn(rows.len(), cols, |i, j| {
        rows[i][j]
    }))
}

/// Decomposition export: one record per class with its eigenvalue tuple,
/// multiplicity, irreducible dimension, and basis columns.
#[derive(Debug, Serialize)]
pub struct DecompositionExport {
    pub classes: Vec<ClassExport>,
}

#[derive(Debug, Serialize)]
pub struct ClassExport {
    pub eigenvalues: Vec<[f64; 2]>,
    pub multiplicity: usize,
    pub dimension: usize,
    /// Copy bases, column-major, entries as [re, im].
    pub basis: Vec<Vec<[f64; 2]>>,
}

pub fn decomposition_to_json(decomp: &BlockDecomposition) -> String {
    let classes = decomp
        .classes
        .iter()
        .map(|class| ClassExport {
            eigenvalues: class.labels.iter().map(|l| [l.re, l.im]).collect(),
            multiplicity: class.multiplicity(),
            dimension: class.dim,
            basis: class
                .copies
                .iter()
                .map(|copy| copy.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&DecompositionExport { classes }).expect("export serializes")
}

/// Window rows `x,re,im`.
pub fn window_to_csv(w: &WindowFunction) -> String {
    let (lo, _, n) = w.grid();
    let h = w.step();
    let mut out = String::from("x,re,im\n");
    for (i, s) in w.samples().iter().enumerate() {
        let x = lo + i as f64 * h;
        out.push_str(&format!("{x:.17e},{:.17e},{:.17e}\n", s.re, s.im));
        let _ = n;
    }
    out
}

pub fn window_from_csv(text: &str) -> Result<WindowFunction, IoError> {
    let mut xs = Vec::new();
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 2 {
            return Err(IoError::Field(format!(
                "window line {} needs x,re[,im]",
                lineno + 1
            )));
        }
        let parse = |s: &str| -> Result<f64, IoError> {
            s.trim()
                .parse()
                .map_err(|e| IoError::Field(format!("window line {}: {e}", lineno + 1)))
        };
        xs.push(parse(fields[0])?);
        let re = parse(fields[1])?;
        let im = if fields.len() > 2 { parse(fields[2])? } else { 0.0 };
        samples.push(Complex64::new(re, im));
    }
    if xs.len() < 8 {
        return Err(IoError::Field("window needs at least 8 samples".into()));
    }
    let h = xs[1] - xs[0];
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(IoError::Field("window grid is not uniform".into()));
        }
    }
    Ok(WindowFunction::from_samples(
        xs[0],
        *xs.last().unwrap(),
        samples,
    )?)
}

/// Scan rows `param,magnitude`.
pub fn scan_to_csv(rows: &[(f64, f64)], param_name: &str) -> String {
    let mut out = format!("{param_name},magnitude\n");
    for (p, v) in rows {
        out.push_str(&format!("{p:.17e},{v:.17e}\n"));
    }
    out
}

/// Representation sequence description: one [[slot]] per factor with the
/// diagonal eigenvalue phases (in turns) and the anchor coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepSequenceFile {
    pub slot: Vec<SlotSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlotSpec {
    pub dim: usize,
    /// One phase per dimension, in turns (`1/3`, `0.25`, `sqrt2`, …).
    pub phases: Vec<String>,
    pub anchor_re: Vec<f64>,
    #[serde(default)]
    pub anchor_im: Vec<f64>,
}

impl RepSequenceFile {
    pub fn parse(text: &str) -> Result<RepSequenceFile, IoError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_sequence(&self) -> Result<RepSequence, IoError> {
        let mut slots = Vec::with_capacity(self.slot.len());
        for (i, spec) in self.slot.iter().enumerate() {
            if spec.phases.len() != spec.dim || spec.anchor_re.len() != spec.dim {
                return Err(IoError::Field(format!(
                    "slot {i}: dim {} with {} phases and {} anchor entries",
                    spec.dim,
                    spec.phases.len(),
                    spec.anchor_re.len()
                )));
            }
            if !spec.anchor_im.is_empty() && spec.anchor_im.len() != spec.dim {
                return Err(IoError::Field(format!(
                    "slot {i}: {} imaginary anchor entries for dim {}",
                    spec.anchor_im.len(),
                    spec.dim
                )));
            }
            let eigs: Vec<Complex64> = spec
                .phases
                .iter()
                .map(|p| {
                    p.parse::<Angle>()
                        .map(|a| a.unit())
                        .map_err(|e| IoError::Field(format!("slot {i} phase: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let anchor_raw = nalgebra::DVector::from_fn(spec.dim, |r, _| {
                Complex64::new(
                    spec.anchor_re[r],
                    spec.anchor_im.get(r).copied().unwrap_or(0.0),
                )
            });
            let norm = anchor_raw.norm();
            if norm < 1e-12 {
                return Err(IoError::Field(format!("slot {i}: zero anchor")));
            }
            slots.push(Slot {
                rep: UnitaryRep::diagonal(&eigs),
                anchor: anchor_raw.map(|z| z / norm),
            });
        }
        Ok(RepSequence::new(slots)?)
    }
}

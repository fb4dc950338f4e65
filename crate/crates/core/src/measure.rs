//! Finite complex measures on the circle 𝕋 and their Fourier–Stieltjes
//! transforms σ̂(n) = ∫ e^{2iπnθ} dσ(θ).
//!
//! A measure is a sum of three parts:
//!   * finitely many atoms at exact [`Angle`] positions,
//!   * a grid density over one period (trapezoid weight 1/G on the periodic
//!     grid, interpreted as the band-limited interpolant of its samples),
//!   * a symbolic convolution product of two-point Dirac factors
//!     (1−a)δ₀ + a δ_pos, kept unexpanded so its transform is an exact
//!     per-factor product.
//!
//! Atom positions use exact wrapping arithmetic, so coefficients at huge
//! lacunary indices (2ᵏ, 2ᵏ+k) stay meaningful.

use std::sync::OnceLock;

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::fixed::Angle;

pub const DEFAULT_GRID: usize = 1 << 16;

#[derive(Debug, Clone, Error)]
pub enum MeasureError {
    #[error("operation requires a circle-domain measure, got {0}")]
    DomainMismatch(&'static str),
    #[error("not a probability measure: {0}")]
    NonProbability(String),
    #[error("two-point factor weights must be decreasing and inside (0,1): {0}")]
    BadWeights(String),
    #[error("grid of {got} samples cannot resolve frequency content up to {needed}")]
    InsufficientResolution { needed: usize, got: usize },
    #[error("frequencies must grow at least geometrically (m[{k}] < 2·m[{}])", k - 1)]
    LacunarityViolation { k: usize },
    #[error("Riesz coefficient {k} is outside [-1, 1]")]
    CoefficientOutOfRange { k: usize },
    #[error("convolution not representable: {0}")]
    UnsupportedConvolution(&'static str),
    #[error("densities live on different grids ({0} vs {1} samples)")]
    ResolutionMismatch(usize, usize),
    #[error("expanding {0} two-point factors would exceed the atom cap")]
    ExpansionTooLarge(usize),
}

/// One factor (1−a)δ₀ + a δ_position of an infinite Dirac convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointFactor {
    pub position: Angle,
    pub weight: f64,
}

/// Symbolic record of a Riesz product Π(1 + α_k cos(2π m_k θ)).
#[derive(Debug, Clone, PartialEq)]
pub struct RieszSpec {
    pub frequencies: Vec<u64>,
    pub coefficients: Vec<f64>,
}

/// A Fourier–Stieltjes coefficient together with its index. The warning
/// flag is set when the density part of the measure cannot resolve the
/// index (|n| at or beyond the grid Nyquist frequency); the density then
/// contributes zero, which is exact for the band-limited interpretation
/// of the samples but says nothing about any sharper underlying density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub index: i64,
    pub value: Complex64,
    pub nyquist_warning: bool,
}

/// A finite complex measure on 𝕋.
#[derive(Debug, Clone, Default)]
pub struct CircleMeasure {
    atoms: Vec<(Angle, Complex64)>,
    density: Option<Vec<Complex64>>,
    factors: Vec<TwoPointFactor>,
    riesz: Option<RieszSpec>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl CircleMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Point mass at the given angle.
    pub fn dirac(position: Angle) -> Self {
        Self::from_atoms(vec![(position, Complex64::new(1.0, 0.0))])
    }

    /// Atomic measure; coinciding positions are merged.
    pub fn from_atoms(atoms: Vec<(Angle, Complex64)>) -> Self {
        let mut merged: std::collections::BTreeMap<u128, Complex64> = Default::default();
        for (pos, mass) in atoms {
            *merged.entry(pos.raw()).or_insert_with(|| Complex64::new(0.0, 0.0)) += mass;
        }
        CircleMeasure {
            atoms: merged
                .into_iter()
                .map(|(raw, mass)| (Angle(raw), mass))
                .collect(),
            ..Default::default()
        }
    }

    /// Normalized Lebesgue measure scaled by `mass`, on the default grid.
    pub fn lebesgue(mass: f64) -> Self {
        CircleMeasure {
            density: Some(vec![Complex64::new(mass, 0.0); DEFAULT_GRID]),
            ..Default::default()
        }
    }

    /// Density given by samples over one period (value samples, weight 1/G).
    pub fn from_density_samples(samples: Vec<Complex64>) -> Self {
        CircleMeasure {
            density: Some(samples),
            ..Default::default()
        }
    }

    /// Atoms plus a density part.
    pub fn mixture(atoms: Vec<(Angle, Complex64)>, density: Option<Vec<Complex64>>) -> Self {
        let mut m = Self::from_atoms(atoms);
        m.density = density;
        m
    }

    /// All three summands at once. Factor weights must already be valid
    /// (strictly inside (0,1)); use [`bernoulli_witness`] to build them
    /// from a schedule.
    pub fn with_parts(
        atoms: Vec<(Angle, Complex64)>,
        density: Option<Vec<Complex64>>,
        factors: Vec<TwoPointFactor>,
    ) -> Self {
        let mut m = Self::mixture(atoms, density);
        m.factors = factors;
        m
    }

    pub fn atoms(&self) -> &[(Angle, Complex64)] {
        &self.atoms
    }

    pub fn density_samples(&self) -> Option<&[Complex64]> {
        self.density.as_deref()
    }

    pub fn factors(&self) -> &[TwoPointFactor] {
        &self.factors
    }

    pub fn riesz_spec(&self) -> Option<&RieszSpec> {
        self.riesz.as_ref()
    }

    pub fn grid_len(&self) -> Option<usize> {
        self.density.as_ref().map(|d| d.len())
    }

    /// Mass of the atom sitting exactly at `position` (zero if none).
    pub fn atom_mass_at(&self, position: Angle) -> Complex64 {
        self.atoms
            .iter()
            .find(|(p, _)| *p == position)
            .map(|(_, m)| *m)
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Σ atom masses + quadrature mass of the density + mass of the factor
    /// product (1 when factors are present: each factor is a probability
    /// measure).
    pub fn total_mass(&self) -> Complex64 {
        let mut total = self.atoms.iter().map(|(_, m)| m).sum::<Complex64>();
        if let Some(d) = &self.density {
            total += d.iter().sum::<Complex64>() / Complex64::new(d.len() as f64, 0.0);
        }
        if !self.factors.is_empty() {
            total += Complex64::new(1.0, 0.0);
        }
        total
    }

    /// Checks that this is a probability measure: real nonnegative masses,
    /// real nonnegative density, factor weights in (0,1), total mass 1.
    pub fn validate_probability(&self) -> Result<(), MeasureError> {
        for (pos, mass) in &self.atoms {
            if mass.im.abs() > 1e-12 || mass.re < -1e-12 {
                return Err(MeasureError::NonProbability(format!(
                    "atom at {pos} has mass {mass}"
                )));
            }
        }
        if let Some(d) = &self.density {
            for (i, s) in d.iter().enumerate() {
                if s.im.abs() > 1e-9 || s.re < -1e-9 {
                    return Err(MeasureError::NonProbability(format!(
                        "density sample {i} is {s}"
                    )));
                }
            }
        }
        for f in &self.factors {
            if !(f.weight > 0.0 && f.weight < 1.0) {
                return Err(MeasureError::NonProbability(format!(
                    "factor weight {} outside (0,1)",
                    f.weight
                )));
            }
        }
        let total = self.total_mass();
        if (total - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(MeasureError::NonProbability(format!(
                "total mass is {total}"
            )));
        }
        Ok(())
    }

    fn spectrum(&self) -> Option<&[Complex64]> {
        let d = self.density.as_ref()?;
        Some(self.spectrum.get_or_init(|| {
            let g = d.len();
            let mut buf = d.clone();
            FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
            let scale = Complex64::new(1.0 / g as f64, 0.0);
            buf.iter_mut().for_each(|x| *x *= scale);
            buf
        }))
    }

    /// Density contribution to σ̂(n): the grid is treated as a band-limited
    /// interpolant, so indices at or beyond Nyquist contribute zero (with
    /// the warning flag set by the caller).
    fn density_coefficient(&self, n: i64) -> Option<(Complex64, bool)> {
        let spectrum = self.spectrum()?;
        let g = spectrum.len() as i64;
        if 2 * n.abs() >= g {
            return Some((Complex64::new(0.0, 0.0), true));
        }
        let idx = n.rem_euclid(g) as usize;
        Some((spectrum[idx], false))
    }

    fn factor_coefficient(&self, n: i64) -> Complex64 {
        self.factors
            .iter()
            .map(|f| {
                Complex64::new(1.0 - f.weight, 0.0)
                    + Complex64::new(f.weight, 0.0) * f.position.mul_int(n).unit()
            })
            .product()
    }

    /// σ̂(n) with its Nyquist warning flag.
    pub fn fourier_coefficient(&self, n: i64) -> FourierCoefficient {
        let mut value = Complex64::new(0.0, 0.0);
        for (pos, mass) in &self.atoms {
            value += mass * pos.mul_int(n).unit();
        }
        let mut warning = false;
        if let Some((dv, w)) = self.density_coefficient(n) {
            value += dv;
            warning = w;
        }
        if !self.factors.is_empty() {
            value += self.factor_coefficient(n);
        }
        FourierCoefficient {
            index: n,
            value,
            nyquist_warning: warning,
        }
    }

    /// σ̂(n) as a bare value.
    pub fn coefficient_value(&self, n: i64) -> Complex64 {
        self.fourier_coefficient(n).value
    }

    /// σ̂(n) for indices beyond i64 (lacunary witnesses reach 2ᵏ+k for
    /// large k). Atoms and factors wrap exactly; a density part beyond
    /// Nyquist contributes zero and raises the warning flag.
    pub fn coefficient_value_big(&self, n: &num_bigint::BigInt) -> (Complex64, bool) {
        use num_traits::ToPrimitive;
        if let Some(small) = n.to_i64() {
            let fc = self.fourier_coefficient(small);
            return (fc.value, fc.nyquist_warning);
        }
        let mut value = Complex64::new(0.0, 0.0);
        for (pos, mass) in &self.atoms {
            value += mass * pos.mul_bigint(n).unit();
        }
        let mut warning = false;
        if self.density.is_some() {
            warning = true; // far beyond any grid Nyquist
        }
        if !self.factors.is_empty() {
            value += self
                .factors
                .iter()
                .map(|f| {
                    Complex64::new(1.0 - f.weight, 0.0)
                        + Complex64::new(f.weight, 0.0) * f.position.mul_bigint(n).unit()
                })
                .product::<Complex64>();
        }
        (value, warning)
    }

    /// ∫ |λⁿ − 1| dσ for a probability measure, by atom sums and grid
    /// quadrature. Two-point factors are expanded (they are only used
    /// with small depth in the inequality checks).
    pub fn abs_deviation_integral(&self, n: i64) -> Result<f64, MeasureError> {
        self.validate_probability()?;
        let mut total = 0.0;
        for (pos, mass) in &self.atoms {
            total += mass.re * (pos.mul_int(n).unit() - Complex64::new(1.0, 0.0)).norm();
        }
        if let Some(d) = &self.density {
            let g = d.len();
            let mut acc = 0.0;
            for (i, s) in d.iter().enumerate() {
                let angle = Angle::from_rational(i as i128, g as i128)
                    .expect("grid angle")
                    .mul_int(n);
                acc += s.re * (angle.unit() - Complex64::new(1.0, 0.0)).norm();
            }
            total += acc / g as f64;
        }
        if !self.factors.is_empty() {
            let expanded = expand_factors(&self.factors)?;
            for (pos, mass) in expanded {
                total += mass.re * (pos.mul_int(n).unit() - Complex64::new(1.0, 0.0)).norm();
            }
        }
        Ok(total)
    }

    /// The factor product expanded into 2^J explicit atoms (test oracle and
    /// inequality helper; capped at J = 12).
    pub fn expand_factors_to_atoms(&self) -> Result<CircleMeasure, MeasureError> {
        let expanded = expand_factors(&self.factors)?;
        let mut atoms = self.atoms.clone();
        atoms.extend(expanded);
        Ok(CircleMeasure::mixture(atoms, self.density.clone()))
    }
}

fn expand_factors(factors: &[TwoPointFactor]) -> Result<Vec<(Angle, Complex64)>, MeasureError> {
    // Expansion is an oracle and inequality helper only; 2^12 atoms is the cap.
    if factors.len() > 12 {
        return Err(MeasureError::ExpansionTooLarge(factors.len()));
    }
    let mut atoms: Vec<(Angle, Complex64)> = vec![(Angle::ZERO, Complex64::new(1.0, 0.0))];
    for f in factors {
        let mut next = Vec::with_capacity(atoms.len() * 2);
        for (pos, mass) in &atoms {
            next.push((*pos, mass * (1.0 - f.weight)));
            next.push((pos.wrapping_add(f.position), mass * f.weight));
        }
        atoms = next;
    }
    Ok(atoms)
}

/// Truncated infinite convolution of two-point Dirac measures with atoms
/// at 1 and e^{iπ2^{-j+1}} (turn 2^{-j}), kept symbolic so that the
/// transform is an exact per-factor product.
#[derive(Debug, Clone)]
pub struct BernoulliWitness {
    pub measure: CircleMeasure,
    /// tail_bounds[k] = 2π·a_{k+1} dominates |σ̂(2ᵏ) − 1| for k < J.
    pub tail_bounds: Vec<f64>,
}

pub fn bernoulli_witness(weights: &[f64]) -> Result<BernoulliWitness, MeasureError> {
    if weights.is_empty() || weights.len() > 120 {
        return Err(MeasureError::BadWeights(format!(
            "need 1..=120 weights, got {}",
            weights.len()
        )));
    }
    for (j, w) in weights.iter().enumerate() {
        if !(*w > 0.0 && *w < 1.0) {
            return Err(MeasureError::BadWeights(format!("a_{} = {w}", j + 1)));
        }
        if j > 0 && *w > weights[j - 1] {
            return Err(MeasureError::BadWeights(format!(
                "a_{} = {w} exceeds a_{} = {}",
                j + 1,
                j,
                weights[j - 1]
            )));
        }
    }
    let factors = weights
        .iter()
        .enumerate()
        .map(|(j, w)| TwoPointFactor {
            position: Angle::dyadic(j as u32 + 1),
            weight: *w,
        })
        .collect();
    let tail_bounds = weights
        .iter()
        .map(|w| 2.0 * std::f64::consts::PI * w)
        .collect();
    Ok(BernoulliWitness {
        measure: CircleMeasure {
            factors,
            ..Default::default()
        },
        tail_bounds,
    })
}

/// Riesz product density Π_{k≤K} (1 + α_k cos(2π m_k θ)) sampled on a grid
/// fine enough to hold the full trigonometric polynomial exactly.
pub fn riesz_product(
    frequencies: &[u64],
    coefficients: &[f64],
    g_res: usize,
) -> Result<CircleMeasure, MeasureError> {
    assert_eq!(
        frequencies.len(),
        coefficients.len(),
        "one coefficient per frequency"
    );
    for (k, alpha) in coefficients.iter().enumerate() {
        if alpha.abs() > 1.0 {
            return Err(MeasureError::CoefficientOutOfRange { k });
        }
    }
    for k in 1..frequencies.len() {
        if frequencies[k] < 2 * frequencies[k - 1] {
            return Err(MeasureError::LacunarityViolation { k });
        }
    }
    let degree: u64 = frequencies.iter().sum();
    if g_res as u64 <= 2 * degree {
        return Err(MeasureError::InsufficientResolution {
            needed: 2 * degree as usize + 1,
            got: g_res,
        });
    }
    let mut samples = vec![Complex64::new(1.0, 0.0); g_res];
    for (m, alpha) in frequencies.iter().zip(coefficients) {
        for (i, s) in samples.iter_mut().enumerate() {
            let frac = ((*m as u128 * i as u128) % g_res as u128) as f64 / g_res as f64;
            let factor = 1.0 + alpha * (std::f64::consts::TAU * frac).cos();
            *s *= factor;
        }
    }
    // Each factor is nonnegative for |α| ≤ 1; clip the roundoff dust.
    for s in &mut samples {
        if s.re < 0.0 && s.re > -1e-9 {
            s.re = 0.0;
        }
    }
    let mut measure = CircleMeasure::from_density_samples(samples);
    measure.riesz = Some(RieszSpec {
        frequencies: frequencies.to_vec(),
        coefficients: coefficients.to_vec(),
    });
    Ok(measure)
}

/// Convolution of two measures. Supported shapes: one side is δ₀
/// (identity), both purely atomic or atomic+density on equal grids, or
/// both pure two-point factor products (factor lists concatenate).
pub fn convolve(a: &CircleMeasure, b: &CircleMeasure) -> Result<CircleMeasure, MeasureError> {
    if is_unit_dirac(a) {
        return Ok(b.clone());
    }
    if is_unit_dirac(b) {
        return Ok(a.clone());
    }
    let a_has_factors = !a.factors.is_empty();
    let b_has_factors = !b.factors.is_empty();
    if a_has_factors || b_has_factors {
        let pure = |m: &CircleMeasure| m.atoms.is_empty() && m.density.is_none();
        if a_has_factors && b_has_factors && pure(a) && pure(b) {
            let mut factors = a.factors.clone();
            factors.extend_from_slice(&b.factors);
            return Ok(CircleMeasure {
                factors,
                ..Default::default()
            });
        }
        return Err(MeasureError::UnsupportedConvolution(
            "two-point factor products only convolve with factor products or δ₀",
        ));
    }
    let mut atoms = Vec::with_capacity(a.atoms.len() * b.atoms.len());
    for (pa, ma) in &a.atoms {
        for (pb, mb) in &b.atoms {
            atoms.push((pa.wrapping_add(*pb), ma * mb));
        }
    }
    let density = match (&a.density, &b.density) {
        (None, None) => None,
        _ => {
            let g = match (a.grid_len(), b.grid_len()) {
                (Some(ga), Some(gb)) if ga != gb => {
                    return Err(MeasureError::ResolutionMismatch(ga, gb))
                }
                (Some(g), _) | (_, Some(g)) => g,
                (None, None) => unreachable!(),
            };
            // Convolution multiplies transforms, so work on the spectra:
            // (a_atoms + a_dens) * (b_atoms + b_dens) minus the pure atom
            // term, which is already accounted for above.
            let zero = vec![Complex64::new(0.0, 0.0); g];
            let sa = a.spectrum().map(<[Complex64]>::to_vec).unwrap_or_else(|| zero.clone());
            let sb = b.spectrum().map(<[Complex64]>::to_vec).unwrap_or(zero);
            let mut spectrum = vec![Complex64::new(0.0, 0.0); g];
            for (idx, out) in spectrum.iter_mut().enumerate() {
                // Spectrum bin idx holds σ̂(n) for n ≡ idx (mod G), |n| < G/2.
                let n = if idx as i64 * 2 >= g as i64 {
                    idx as i64 - g as i64
                } else {
                    idx as i64
                };
                let atoms_a: Complex64 = a
                    .atoms
                    .iter()
                    .map(|(p, m)| m * p.mul_int(n).unit())
                    .sum();
                let atoms_b: Complex64 = b
                    .atoms
                    .iter()
                    .map(|(p, m)| m * p.mul_int(n).unit())
                    .sum();
                *out = sa[idx] * atoms_b + sb[idx] * atoms_a + sa[idx] * sb[idx];
            }
            let mut samples = spectrum;
            FftPlanner::new().plan_fft_forward(g).process(&mut samples);
            Some(samples)
        }
    };
    Ok(CircleMeasure::mixture(atoms, density))
}

fn is_unit_dirac(m: &CircleMeasure) -> bool {
    m.density.is_none()
        && m.factors.is_empty()
        && m.atoms.len() == 1
        && m.atoms[0].0 == Angle::ZERO
        && (m.atoms[0].1 - Complex64::new(1.0, 0.0)).norm() < 1e-15
}

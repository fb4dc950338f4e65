//! Finite measures on ℝ^d with transforms σ̂(t) = ∫ e^{i t·x} dσ(x).
//!
//! Supported shapes: finitely many atoms, plus one separable product
//! density whose 1-d components are Dirac points, exact uniform intervals,
//! or compactly supported sample grids integrated by the trapezoid rule.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum RealMeasureError {
    #[error("point/argument has dimension {got}, measure has dimension {want}")]
    DimensionMismatch { want: usize, got: usize },
    #[error(
        "density samples do not vanish at the grid boundary (|edge|/max = {ratio:.2e}); \
         truncated tails need the decay flag or a larger window"
    )]
    UnboundedSupport { ratio: f64 },
    #[error("component density must be nonnegative with unit mass: {0}")]
    BadComponent(String),
    #[error("not a probability measure: {0}")]
    NonProbability(String),
}

/// One coordinate factor of a separable product density.
#[derive(Debug, Clone)]
pub enum Component1d {
    /// Dirac mass at a point.
    Point(f64),
    /// Exact uniform probability density on [−radius, radius].
    Uniform { radius: f64 },
    /// Probability density samples on a uniform grid over [lo, hi],
    /// integrated with trapezoid weights.
    Grid { lo: f64, hi: f64, samples: Vec<f64> },
}

impl Component1d {
    /// Sampled grid component. Unless `decay_confirmed` is set, the samples
    /// must vanish at the window edges (relative to their maximum), so that
    /// a truncated unbounded density is not silently misread as compact.
    pub fn grid(
        lo: f64,
        hi: f64,
        samples: Vec<f64>,
        decay_confirmed: bool,
    ) -> Result<Self, RealMeasureError> {
        if samples.len() < 2 || !(hi > lo) {
            return Err(RealMeasureError::BadComponent(format!(
                "{} samples on [{lo}, {hi}]",
                samples.len()
            )));
        }
        let max = samples.iter().cloned().fold(0.0f64, f64::max);
        if samples.iter().any(|s| *s < -1e-12) || max <= 0.0 {
            return Err(RealMeasureError::BadComponent(
                "negative or everywhere-zero samples".into(),
            ));
        }
        let edge = samples[0].abs().max(samples[samples.len() - 1].abs());
        if !decay_confirmed && edge > 1e-10 * max {
            return Err(RealMeasureError::UnboundedSupport { ratio: edge / max });
        }
        let c = Component1d::Grid { lo, hi, samples };
        let mass = c.mass();
        if (mass - 1.0).abs() > 1e-8 {
            return Err(RealMeasureError::BadComponent(format!("mass {mass}")));
        }
        Ok(c)
    }

    /// Standard normal density truncated to [−radius, radius]; the radius
    /// must be large enough that the truncated tails are negligible.
    pub fn gaussian(radius: f64, points: usize) -> Result<Self, RealMeasureError> {
        let h = 2.0 * radius / (points - 1) as f64;
        let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let samples: Vec<f64> = (0..points)
            .map(|i| {
                let x = -radius + i as f64 * h;
                norm * (-0.5 * x * x).exp()
            })
            .collect();
        Component1d::grid(-radius, radius, samples, false)
    }

    fn mass(&self) -> f64 {
        match self {
            Component1d::Point(_) | Component1d::Uniform { .. } => 1.0,
            Component1d::Grid { lo, hi, samples } => {
                let h = (hi - lo) / (samples.len() - 1) as f64;
                trapezoid(samples, h)
            }
        }
    }

    /// ∫ e^{itx} dχ(x) for this factor.
    pub fn transform(&self, t: f64) -> Complex64 {
        match self {
            Component1d::Point(x) => Complex64::from_polar(1.0, t * x),
            Component1d::Uniform { radius } => {
                let z = t * radius;
                if z.abs() < 1e-8 {
                    Complex64::new(1.0 - z * z / 6.0, 0.0)
                } else {
                    Complex64::new(z.sin() / z, 0.0)
                }
            }
            Component1d::Grid { lo, hi, samples } => {
                let n = samples.len();
                let h = (hi - lo) / (n - 1) as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, s) in samples.iter().enumerate() {
                    let x = lo + i as f64 * h;
                    let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                    acc += Complex64::from_polar(w * s * h, t * x);
                }
                acc
            }
        }
    }
}

/// A finite measure on ℝ^d: atoms plus at most one separable density.
#[derive(Debug, Clone, Default)]
pub struct RealMeasure {
    dim: usize,
    atoms: Vec<(Vec<f64>, Complex64)>,
    density_mass: f64,
    components: Vec<Component1d>,
}

impl RealMeasure {
    pub fn dirac(point: Vec<f64>) -> Self {
        let dim = point.len();
        RealMeasure {
            dim,
            atoms: vec![(point, Complex64::new(1.0, 0.0))],
            density_mass: 0.0,
            components: Vec::new(),
        }
    }

    pub fn from_atoms(dim: usize, atoms: Vec<(Vec<f64>, Complex64)>) -> Result<Self, RealMeasureError> {
        for (p, _) in &atoms {
            if p.len() != dim {
                return Err(RealMeasureError::DimensionMismatch {
                    want: dim,
                    got: p.len(),
                });
            }
        }
        Ok(RealMeasure {
            dim,
            atoms,
            density_mass: 0.0,
            components: Vec::new(),
        })
    }

    /// Product density `mass · χ₁ ⊗ … ⊗ χ_d`.
    pub fn product_density(mass: f64, components: Vec<Component1d>) -> Self {
        RealMeasure {
            dim: components.len(),
            atoms: Vec::new(),
            density_mass: mass,
            components,
        }
    }

    /// The Heisenberg-side witness of a bounded-momentum set: δ₀ in the
    /// first n coordinates times a uniform cube of half-width δ/√n in the
    /// last n. Any (q,p) then satisfies |σ̂(q,p) − 1| ≤ δ|p|, and the
    /// measure has no atom at the origin.
    pub fn origin_cube_witness(n: usize, delta: f64) -> Self {
        let half_width = delta / (n as f64).sqrt();
        let mut components: Vec<Component1d> = (0..n).map(|_| Component1d::Point(0.0)).collect();
        components.extend((0..n).map(|_| Component1d::Uniform { radius: half_width }));
        RealMeasure::product_density(1.0, components)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[(Vec<f64>, Complex64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Complex64 {
        self.atoms.iter().map(|(_, m)| m).sum::<Complex64>()
            + Complex64::new(
                self.density_mass * self.components.iter().map(Component1d::mass).product::<f64>(),
                0.0,
            )
    }

    pub fn validate_probability(&self) -> Result<(), RealMeasureError> {
        for (p, m) in &self.atoms {
            if m.im.abs() > 1e-12 || m.re < -1e-12 {
                return Err(RealMeasureError::NonProbability(format!(
                    "atom at {p:?} has mass {m}"
                )));
            }
        }
        if self.density_mass < -1e-12 {
            return Err(RealMeasureError::NonProbability(format!(
                "density mass {}",
                self.density_mass
            )));
        }
        let total = self.total_mass();
        if (total - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(RealMeasureError::NonProbability(format!(
                "total mass {total}"
            )));
        }
        Ok(())
    }

    /// σ̂(t) = ∫ e^{i t·x} dσ(x) by atom sums plus per-factor quadrature.
    pub fn transform(&self, t: &[f64]) -> Result<Complex64, RealMeasureError> {
        if t.len() != self.dim {
            return Err(RealMeasureError::DimensionMismatch {
                want: self.dim,
                got: t.len(),
            });
        }
        let mut value = Complex64::new(0.0, 0.0);
        for (x, mass) in &self.atoms {
            let phase: f64 = t.iter().zip(x).map(|(ti, xi)| ti * xi).sum();
            value += mass * Complex64::from_polar(1.0, phase);
        }
        if self.density_mass != 0.0 {
            let mut prod = Complex64::new(self.density_mass, 0.0);
            for (c, ti) in self.components.iter().zip(t) {
                prod *= c.transform(*ti);
            }
            value += prod;
        }
        Ok(value)
    }

    /// sup over the query set of |σ̂(t) − 1|, with the per-point values.
    pub fn invariance_defect(
        &self,
        points: &[Vec<f64>],
    ) -> Result<(f64, Vec<f64>), RealMeasureError> {
        self.validate_probability()?;
        let mut per_point = Vec::with_capacity(points.len());
        let mut sup = 0.0f64;
        for p in points {
            let d = (self.transform(p)? - Complex64::new(1.0, 0.0)).norm();
            sup = sup.max(d);
            per_point.push(d);
        }
        Ok((sup, per_point))
    }
}

fn trapezoid(samples: &[f64], h: f64) -> f64 {
    let n = samples.len();
    let inner: f64 = samples[1..n - 1].iter().sum();
    h * (inner + 0.5 * (samples[0] + samples[n - 1]))
}

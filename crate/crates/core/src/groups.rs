//! The Heisenberg groups H_n and Aff₊(ℝ): group law, Schrödinger/affine
//! matrix coefficients by grid quadrature, coefficient-decay scans, and
//! the projections that reduce their Kazhdan-set questions to ℝ^{2n} and ℝ.
//!
//! Quadrature windows live on uniform grids with honest compact support;
//! shifts and dilations that would push mass off the grid are typed errors
//! rather than silent truncations.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum GroupError {
    #[error("elements have mismatched dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("the Schrödinger family needs a nonzero parameter λ")]
    ZeroLambda,
    #[error("dilation parameter a must be positive, got {0}")]
    NonPositiveDilation(f64),
    #[error("window needs at least 8 samples on a nondegenerate interval: {0}")]
    BadWindow(String),
    #[error(
        "window samples do not vanish at the grid edge (|edge|/max = {ratio:.2e}); \
         enlarge the window so the support is honestly compact"
    )]
    UnboundedSupport { ratio: f64 },
    #[error("shifted support [{lo:.2}, {hi:.2}] exits the grid; use a window with radius ≥ {needed:.2}")]
    ShiftExitsGrid { lo: f64, hi: f64, needed: f64 },
    #[error("window support touches {0}; the affine family needs support strictly inside (0, ∞) or (−∞, 0)")]
    SupportCrossesZero(f64),
    #[error("quadrature-based coefficients are implemented for n = 1; build product windows for higher n")]
    HigherRankWindow,
}

/// Element (t, q, p) of the Heisenberg group H_n.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergElement {
    pub t: f64,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl HeisenbergElement {
    pub fn new(t: f64, q: Vec<f64>, p: Vec<f64>) -> Result<Self, GroupError> {
        if q.len() != p.len() {
            return Err(GroupError::DimensionMismatch(q.len(), p.len()));
        }
        Ok(HeisenbergElement { t, q, p })
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergElement {
            t: 0.0,
            q: vec![0.0; n],
            p: vec![0.0; n],
        }
    }

    /// (t₁,q₁,p₁)(t₂,q₂,p₂) = (t₁+t₂+½(p₁·q₂ − p₂·q₁), q₁+q₂, p₁+p₂).
    pub fn compose(&self, other: &Self) -> Result<Self, GroupError> {
        if self.rank() != other.rank() {
            return Err(GroupError::DimensionMismatch(self.rank(), other.rank()));
        }
        let twist: f64 = self
            .p
            .iter()
            .zip(&other.q)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            - other.p.iter().zip(&self.q).map(|(a, b)| a * b).sum::<f64>();
        Ok(HeisenbergElement {
            t: self.t + other.t + 0.5 * twist,
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
            p: self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement {
            t: -self.t,
            q: self.q.iter().map(|x| -x).collect(),
            p: self.p.iter().map(|x| -x).collect(),
        }
    }
}

/// Element (a, b) of Aff₊(ℝ): x ↦ ax + b with a > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineElement {
    pub a: f64,
    pub b: f64,
}

impl AffineElement {
    pub fn new(a: f64, b: f64) -> Result<Self, GroupError> {
        if !(a > 0.0) {
            return Err(GroupError::NonPositiveDilation(a));
        }
        Ok(AffineElement { a, b })
    }

    pub fn identity() -> Self {
        AffineElement { a: 1.0, b: 0.0 }
    }

    /// (a,b)(a′,b′) = (aa′, b + ab′).
    pub fn compose(&self, other: &Self) -> Self {
        AffineElement {
            a: self.a * other.a,
            b: self.b + self.a * other.b,
        }
    }

    pub fn inverse(&self) -> Self {
        AffineElement {
            a: 1.0 / self.a,
            b: -self.b / self.a,
        }
    }
}

/// Square-integrable window sampled on a uniform grid over [lo, hi], with
/// compact support read off the samples. Values off the grid are zero.
#[derive(Debug, Clone)]
pub struct WindowFunction {
    lo: f64,
    hi: f64,
    samples: Vec<Complex64>,
    support_lo: f64,
    support_hi: f64,
}

impl WindowFunction {
    pub fn from_samples(lo: f64, hi: f64, samples: Vec<Complex64>) -> Result<Self, GroupError> {
        if samples.len() < 8 || !(hi > lo) {
            return Err(GroupError::BadWindow(format!(
                "{} samples on [{lo}, {hi}]",
                samples.len()
            )));
        }
        let max = samples.iter().map(|s| s.norm()).fold(0.0f64, f64::max);
        if max <= 0.0 {
            return Err(GroupError::BadWindow("identically zero window".into()));
        }
        let edge = samples[0].norm().max(samples[samples.len() - 1].norm());
        if edge > 1e-12 * max {
            return Err(GroupError::UnboundedSupport { ratio: edge / max });
        }
        let h = (hi - lo) / (samples.len() - 1) as f64;
        let first = samples.iter().position(|s| s.norm() > 1e-14 * max).unwrap();
        let last = samples.len() - 1 - samples.iter().rev().position(|s| s.norm() > 1e-14 * max).unwrap();
        Ok(WindowFunction {
            lo,
            hi,
            support_lo: lo + first as f64 * h,
            support_hi: lo + last as f64 * h,
            samples,
        })
    }

    /// L²-normalized Gaussian e^{−x²/2}/π^{1/4} on [−radius, radius].
    pub fn gaussian(radius: f64, points: usize) -> Result<Self, GroupError> {
        let h = 2.0 * radius / (points - 1) as f64;
        let norm = std::f64::consts::PI.powf(-0.25);
        let samples = (0..points)
            .map(|i| {
                let x = -radius + i as f64 * h;
                Complex64::new(norm * (-0.5 * x * x).exp(), 0.0)
            })
            .collect();
        Self::from_samples(-radius, radius, samples)
    }

    /// L²-normalized Gaussian bump centered at `center` with width `width`,
    /// on the grid [lo, hi]; smooth and compactly supported in practice.
    pub fn bump(center: f64, width: f64, lo: f64, hi: f64, points: usize) -> Result<Self, GroupError> {
        let h = (hi - lo) / (points - 1) as f64;
        let norm = (std::f64::consts::PI * width * width).powf(-0.25);
        let samples = (0..points)
            .map(|i| {
                let x = lo + i as f64 * h;
                let z = (x - center) / width;
                Complex64::new(norm * (-0.5 * z * z).exp(), 0.0)
            })
            .collect();
        Self::from_samples(lo, hi, samples)
    }

    pub fn grid(&self) -> (f64, f64, usize) {
        (self.lo, self.hi, self.samples.len())
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn support(&self) -> (f64, f64) {
        (self.support_lo, self.support_hi)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.samples.len() - 1) as f64
    }

    /// Cubic Lagrange interpolation on the grid; zero outside [lo, hi].
    pub fn eval(&self, x: f64) -> Complex64 {
        if x < self.lo || x > self.hi {
            return Complex64::new(0.0, 0.0);
        }
        let h = self.step();
        let pos = (x - self.lo) / h;
        let i = (pos.floor() as usize).min(self.samples.len() - 2);
        let t = pos - i as f64;
        let get = |j: isize| -> Complex64 {
            let idx = i as isize + j;
            if idx < 0 || idx >= self.samples.len() as isize {
                Complex64::new(0.0, 0.0)
            } else {
                self.samples[idx as usize]
            }
        };
        // Lagrange basis on nodes t = −1, 0, 1, 2.
        let lm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let l0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let l1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let l2 = (t + 1.0) * t * (t - 1.0) / 6.0;
        get(-1) * lm1 + get(0) * l0 + get(1) * l1 + get(2) * l2
    }

    /// Trapezoid L² norm.
    pub fn norm(&self) -> f64 {
        let h = self.step();
        let n = self.samples.len();
        let mut acc = 0.0;
        for (i, s) in self.samples.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * s.norm_sqr();
        }
        (acc * h).sqrt()
    }
}

/// ⟨π_{±λ}(t,q,p)u, v⟩ for the rank-one Schrödinger representation
/// π_{±λ}(t,q,p)u : x ↦ e^{i(±λt ± √λ qx + (λ/2)qp)} u(x + √λ p),
/// by trapezoid quadrature on v's grid. The sign of `lambda_signed`
/// selects π_{+|λ|} or π_{−|λ|}.
pub fn schrodinger_coefficient(
    lambda_signed: f64,
    g: &HeisenbergElement,
    u: &WindowFunction,
    v: &WindowFunction,
) -> Result<Complex64, GroupError> {
    if g.rank() != 1 {
        return Err(GroupError::HigherRankWindow);
    }
    let (sign, lambda) = split_lambda(lambda_signed)?;
    let shift = lambda.sqrt() * g.p[0];
    check_shift(u, shift)?;
    let phase0 = sign * lambda * g.t + 0.5 * lambda * g.q[0] * g.p[0];
    let freq = sign * lambda.sqrt() * g.q[0];
    let h = v.step();
    let (lo, _, n) = v.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, vs) in v.samples().iter().enumerate() {
        let x = lo + i as f64 * h;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let phase = Complex64::from_polar(1.0, phase0 + freq * x);
        acc += phase * u.eval(x + shift) * vs.conj() * w;
    }
    Ok(acc * h)
}

fn split_lambda(lambda_signed: f64) -> Result<(f64, f64), GroupError> {
    if lambda_signed == 0.0 || !lambda_signed.is_finite() {
        return Err(GroupError::ZeroLambda);
    }
    Ok((lambda_signed.signum(), lambda_signed.abs()))
}

fn check_shift(u: &WindowFunction, shift: f64) -> Result<(), GroupError> {
    let (lo, hi, _) = u.grid();
    let (slo, shi) = u.support();
    let new_lo = slo - shift;
    let new_hi = shi - shift;
    if new_lo < lo || new_hi > hi {
        let needed = new_lo.abs().max(new_hi.abs());
        return Err(GroupError::ShiftExitsGrid {
            lo: new_lo,
            hi: new_hi,
            needed,
        });
    }
    Ok(())
}

/// ⟨π_{±λ}(g)u, v⟩ for rank n ≥ 1 with separable windows u = ⊗u_i,
/// v = ⊗v_i: the coefficient splits as
/// e^{±iλt} · Π_i ⟨π_{±λ}(0, q_i, p_i)u_i, v_i⟩, each factor a 1-d
/// quadrature.
pub fn schrodinger_coefficient_product(
    lambda_signed: f64,
    g: &HeisenbergElement,
    us: &[WindowFunction],
    vs: &[WindowFunction],
) -> Result<Complex64, GroupError> {
    let n = g.rank();
    if us.len() != n || vs.len() != n {
        return Err(GroupError::DimensionMismatch(us.len().max(vs.len()), n));
    }
    let (sign, lambda) = split_lambda(lambda_signed)?;
    let mut value = Complex64::from_polar(1.0, sign * lambda * g.t);
    for i in 0..n {
        let slice = HeisenbergElement::new(0.0, vec![g.q[i]], vec![g.p[i]])?;
        value *= schrodinger_coefficient(lambda_signed, &slice, &us[i], &vs[i])?;
    }
    Ok(value)
}

/// π_{±λ}(g)u resampled on u's own grid.
pub fn apply_schrodinger(
    lambda_signed: f64,
    g: &HeisenbergElement,
    u: &WindowFunction,
) -> Result<WindowFunction, GroupError> {
    if g.rank() != 1 {
        return Err(GroupError::HigherRankWindow);
    }
    let (sign, lambda) = split_lambda(lambda_signed)?;
    let shift = lambda.sqrt() * g.p[0];
    check_shift(u, shift)?;
    let phase0 = sign * lambda * g.t + 0.5 * lambda * g.q[0] * g.p[0];
    let freq = sign * lambda.sqrt() * g.q[0];
    let h = u.step();
    let (lo, hi, n) = u.grid();
    let samples = (0..n)
        .map(|i| {
            let x = lo + i as f64 * h;
            Complex64::from_polar(1.0, phase0 + freq * x) * u.eval(x + shift)
        })
        .collect();
    WindowFunction::from_samples(lo, hi, samples)
}

/// |⟨π_{±λ}(0,0,p)u, v⟩| over a grid of momenta: the finite-window
/// evidence for the coefficient decay of the Schrödinger family.
pub fn schrodinger_decay_scan(
    lambda_signed: f64,
    u: &WindowFunction,
    v: &WindowFunction,
    momenta: &[f64],
) -> Result<Vec<(f64, f64)>, GroupError> {
    momenta
        .iter()
        .map(|p| {
            let g = HeisenbergElement::new(0.0, vec![0.0], vec![*p])?;
            Ok((*p, schrodinger_coefficient(lambda_signed, &g, u, v)?.norm()))
        })
        .collect()
}

/// Forgets the center coordinate: (t, q, p) ↦ (q, p) ∈ ℝ^{2n}. Kazhdan
/// questions in H_n delegate to the image set in ℝ^{2n}.
pub fn heisenberg_projection(elements: &[HeisenbergElement]) -> Vec<Vec<f64>> {
    elements
        .iter()
        .map(|g| {
            let mut point = g.q.clone();
            point.extend_from_slice(&g.p);
            point
        })
        .collect()
}

/// The one-dimensional characters π_{y,η}(t,q,p) = e^{i(y·q + η·p)}.
pub fn one_dim_heisenberg(
    y: &[f64],
    eta: &[f64],
    g: &HeisenbergElement,
) -> Result<Complex64, GroupError> {
    if y.len() != g.rank() || eta.len() != g.rank() {
        return Err(GroupError::DimensionMismatch(y.len().max(eta.len()), g.rank()));
    }
    let phase: f64 = y.iter().zip(&g.q).map(|(a, b)| a * b).sum::<f64>()
        + eta.iter().zip(&g.p).map(|(a, b)| a * b).sum::<f64>();
    Ok(Complex64::from_polar(1.0, phase))
}

/// Which of the two infinite-dimensional affine representations: π₊ acts
/// on L²(0,∞), π₋ on L²(−∞,0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineSign {
    Plus,
    Minus,
}

fn check_affine_support(sign: AffineSign, w: &WindowFunction) -> Result<(), GroupError> {
    let (slo, shi) = w.support();
    match sign {
        AffineSign::Plus if slo <= 0.0 => Err(GroupError::SupportCrossesZero(slo)),
        AffineSign::Minus if shi >= 0.0 => Err(GroupError::SupportCrossesZero(shi)),
        _ => Ok(()),
    }
}

/// ⟨π_±(a,b)f₁, f₂⟩ with π_±(a,b)f : s ↦ √a e^{2iπbs} f(as), by trapezoid
/// quadrature on f₂'s grid.
pub fn affine_coefficient(
    sign: AffineSign,
    g: &AffineElement,
    f1: &WindowFunction,
    f2: &WindowFunction,
) -> Result<Complex64, GroupError> {
    check_affine_support(sign, f1)?;
    check_affine_support(sign, f2)?;
    check_dilation(g.a, f1, f2)?;
    let h = f2.step();
    let (lo, _, n) = f2.grid();
    let sqrt_a = g.a.sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, fs) in f2.samples().iter().enumerate() {
        let s = lo + i as f64 * h;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let phase = Complex64::from_polar(sqrt_a, std::f64::consts::TAU * g.b * s);
        acc += phase * f1.eval(g.a * s) * fs.conj() * w;
    }
    Ok(acc * h)
}

fn check_dilation(a: f64, f1: &WindowFunction, f2: &WindowFunction) -> Result<(), GroupError> {
    // π(a,b)f₁ is supported on supp(f₁)/a; it must stay on f₂'s grid side
    // and inside f₁'s own grid when resampled.
    let (slo, shi) = f1.support();
    let (lo, hi, _) = f1.grid();
    let (nlo, nhi) = (slo / a, shi / a);
    if nlo < lo.min(0.0) - 1e-9 || nhi > hi.max(0.0) + 1e-9 {
        return Err(GroupError::ShiftExitsGrid {
            lo: nlo,
            hi: nhi,
            needed: nlo.abs().max(nhi.abs()),
        });
    }
    let _ = f2;
    Ok(())
}

/// π_±(a,b)f resampled on f's own grid.
pub fn apply_affine(
    sign: AffineSign,
    g: &AffineElement,
    f: &WindowFunction,
) -> Result<WindowFunction, GroupError> {
    check_affine_support(sign, f)?;
    check_dilation(g.a, f, f)?;
    let h = f.step();
    let (lo, hi, n) = f.grid();
    let sqrt_a = g.a.sqrt();
    let samples = (0..n)
        .map(|i| {
            let s = lo + i as f64 * h;
            Complex64::from_polar(sqrt_a, std::f64::consts::TAU * g.b * s) * f.eval(g.a * s)
        })
        .collect();
    WindowFunction::from_samples(lo, hi, samples)
}

/// |⟨π_±(a,b)f₁, f₂⟩| over a grid of translation parameters b.
pub fn affine_decay_scan(
    sign: AffineSign,
    a: f64,
    f1: &WindowFunction,
    f2: &WindowFunction,
    bs: &[f64],
) -> Result<Vec<(f64, f64)>, GroupError> {
    bs.iter()
        .map(|b| {
            let g = AffineElement::new(a, *b)?;
            Ok((*b, affine_coefficient(sign, &g, f1, f2)?.norm()))
        })
        .collect()
}

/// Q₀ = {ln a : (a, b) ∈ Q}: the projection whose image decides whether a
/// subset of Aff₊(ℝ) is a Kazhdan set, delegated to the real-line tests.
pub fn affine_projection(elements: &[AffineElement]) -> Vec<f64> {
    elements.iter().map(|g| g.a.ln()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_heisenberg(rng: &mut impl Rng, n: usize) -> HeisenbergElement {
        HeisenbergElement {
            t: rng.gen::<f64>() * 4.0 - 2.0,
            q: (0..n).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect(),
            p: (0..n).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect(),
        }
    }

    #[test]
    fn heisenberg_group_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=3);
            let a = random_heisenberg(&mut rng, n);
            let b = random_heisenberg(&mut rng, n);
            let cc = random_heisenberg(&mut rng, n);
            let left = a.compose(&b).unwrap().compose(&cc).unwrap();
            let right = a.compose(&b.compose(&cc).unwrap()).unwrap();
            assert!((left.t - right.t).abs() < 1e-12);
            for i in 0..n {
                assert!((left.q[i] - right.q[i]).abs() < 1e-12);
                assert!((left.p[i] - right.p[i]).abs() < 1e-12);
            }
            let e = HeisenbergElement::identity(n);
            let ae = a.compose(&e).unwrap();
            assert!((ae.t - a.t).abs() < 1e-15);
            let inv = a.compose(&a.inverse()).unwrap();
            assert!(inv.t.abs() < 1e-12);
            assert!(inv.q.iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn affine_group_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..1000 {
            let a = AffineElement::new(rng.gen::<f64>() * 3.0 + 0.1, rng.gen::<f64>() * 4.0 - 2.0).unwrap();
            let b = AffineElement::new(rng.gen::<f64>() * 3.0 + 0.1, rng.gen::<f64>() * 4.0 - 2.0).unwrap();
            let cc = AffineElement::new(rng.gen::<f64>() * 3.0 + 0.1, rng.gen::<f64>() * 4.0 - 2.0).unwrap();
            let left = a.compose(&b).compose(&cc);
            let right = a.compose(&b.compose(&cc));
            assert!((left.a - right.a).abs() < 1e-12);
            assert!((left.b - right.b).abs() < 1e-12);
            let e = AffineElement::identity();
            assert_eq!(a.compose(&e), a);
            let inv = a.compose(&a.inverse());
            assert!((inv.a - 1.0).abs() < 1e-12);
            assert!(inv.b.abs() < 1e-12);
        }
        assert!(AffineElement::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn schrodinger_identity_coefficient_is_one() {
        let u = WindowFunction::gaussian(20.0, 4097).unwrap();
        let g = HeisenbergElement::identity(1);
        let v = schrodinger_coefficient(1.0, &g, &u, &u).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        assert!((u.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn schrodinger_coefficient_bounded_by_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let u = WindowFunction::gaussian(20.0, 2049).unwrap();
        for _ in 0..20 {
            let g = HeisenbergElement::new(
                rng.gen::<f64>() * 2.0,
                vec![rng.gen::<f64>() * 2.0],
                vec![rng.gen::<f64>() * 6.0 - 3.0],
            )
            .unwrap();
            let v = schrodinger_coefficient(-1.5, &g, &u, &u).unwrap();
            assert!(v.norm() <= u.norm() * u.norm() + 1e-8);
        }
    }

    #[test]
    fn schrodinger_gaussian_momentum_decay() {
        let u = WindowFunction::gaussian(20.0, 4097).unwrap();
        let momenta: Vec<f64> = (0..=10).map(|p| p as f64).collect();
        let scan = schrodinger_decay_scan(1.0, &u, &u, &momenta).unwrap();
        for w in scan.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12, "monotone decay");
        }
        assert!(scan[10].1 < 0.01 * scan[0].1);
        // Gaussian overlap has the closed form e^{−p²/4}.
        for (p, v) in &scan {
            let exact = (-p * p / 4.0).exp();
            assert!((v - exact).abs() < 1e-6, "p = {p}: {v} vs {exact}");
        }
    }

    #[test]
    fn schrodinger_homomorphism_via_resampling() {
        // Grid-aligned shifts keep the resampling exact, so the two-step
        // application must match the one-step coefficient tightly.
        let u = WindowFunction::gaussian(20.0, 4097).unwrap();
        let h = u.step();
        let g1 = HeisenbergElement::new(0.4, vec![0.9], vec![256.0 * h]).unwrap();
        let g2 = HeisenbergElement::new(-0.2, vec![-0.5], vec![512.0 * h]).unwrap();
        let product = g1.compose(&g2).unwrap();
        let direct = schrodinger_coefficient(1.0, &product, &u, &u).unwrap();
        let two_step = {
            let after_g2 = apply_schrodinger(1.0, &g2, &u).unwrap();
            let after_g1 = apply_schrodinger(1.0, &g1, &after_g2).unwrap();
            let v = u.clone();
            // ⟨w, v⟩ with w = π(g1)π(g2)u.
            let step = v.step();
            let (lo, _, n) = v.grid();
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                acc += after_g1.samples()[i] * v.samples()[i].conj() * w;
            }
            let _ = lo;
            acc * step
        };
        assert!(
            (direct - two_step).norm() < 1e-8,
            "{direct} vs {two_step}"
        );
    }

    #[test]
    fn schrodinger_unitarity_under_resampling() {
        let u = WindowFunction::gaussian(20.0, 4097).unwrap();
        let g = HeisenbergElement::new(0.3, vec![0.7], vec![1.37]).unwrap();
        let moved = apply_schrodinger(1.0, &g, &u).unwrap();
        assert!((moved.norm() - u.norm()).abs() < 1e-8);
    }

    #[test]
    fn shift_off_grid_is_an_error() {
        let u = WindowFunction::gaussian(10.0, 1025).unwrap();
        let g = HeisenbergElement::new(0.0, vec![0.0], vec![9.0]).unwrap();
        assert!(matches!(
            schrodinger_coefficient(1.0, &g, &u, &u),
            Err(GroupError::ShiftExitsGrid { .. })
        ));
        let g2 = HeisenbergElement::new(0.0, vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            schrodinger_coefficient(1.0, &g2, &u, &u),
            Err(GroupError::HigherRankWindow)
        ));
        assert!(matches!(
            schrodinger_coefficient(0.0, &HeisenbergElement::identity(1), &u, &u),
            Err(GroupError::ZeroLambda)
        ));
    }

    #[test]
    fn product_windows_extend_rank() {
        // Separable rank-2 coefficient vs two explicit 1-d factors and the
        // identity/unit checks.
        let u = WindowFunction::gaussian(18.0, 2049).unwrap();
        let id2 = HeisenbergElement::identity(2);
        let v = schrodinger_coefficient_product(1.0, &id2, &[u.clone(), u.clone()], &[u.clone(), u.clone()])
            .unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-7);
        let g = HeisenbergElement::new(0.3, vec![0.4, -0.7], vec![1.1, 0.6]).unwrap();
        let whole =
            schrodinger_coefficient_product(1.0, &g, &[u.clone(), u.clone()], &[u.clone(), u.clone()])
                .unwrap();
        let f1 = schrodinger_coefficient(
            1.0,
            &HeisenbergElement::new(0.0, vec![0.4], vec![1.1]).unwrap(),
            &u,
            &u,
        )
        .unwrap();
        let f2 = schrodinger_coefficient(
            1.0,
            &HeisenbergElement::new(0.0, vec![-0.7], vec![0.6]).unwrap(),
            &u,
            &u,
        )
        .unwrap();
        let expected = Complex64::from_polar(1.0, 0.3) * f1 * f2;
        assert!((whole - expected).norm() < 1e-12);
    }

    #[test]
    fn heisenberg_characters_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let y = vec![0.7, -1.2];
        let eta = vec![2.0 * std::f64::consts::PI, 0.3];
        for _ in 0..100 {
            let a = random_heisenberg(&mut rng, 2);
            let b = random_heisenberg(&mut rng, 2);
            let va = one_dim_heisenberg(&y, &eta, &a).unwrap();
            let vb = one_dim_heisenberg(&y, &eta, &b).unwrap();
            let vab = one_dim_heisenberg(&y, &eta, &a.compose(&b).unwrap()).unwrap();
            assert!((vab - va * vb).norm() < 1e-12);
        }
        // y = (2π, 0), q = e₁: e^{2iπ} = 1.
        let g = HeisenbergElement::new(5.0, vec![1.0, 0.0], vec![0.0, 0.0]).unwrap();
        let v = one_dim_heisenberg(&[2.0 * std::f64::consts::PI, 0.0], &[0.0, 0.0], &g).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn heisenberg_projection_forgets_center() {
        let q = vec![
            HeisenbergElement::new(5.0, vec![0.0], vec![0.0]).unwrap(),
            HeisenbergElement::new(-1.0, vec![2.0], vec![3.0]).unwrap(),
        ];
        let projected = heisenberg_projection(&q);
        assert_eq!(projected[0], vec![0.0, 0.0]);
        assert_eq!(projected[1], vec![2.0, 3.0]);
    }

    #[test]
    fn affine_identity_and_unitarity() {
        let f = WindowFunction::bump(8.0, 0.8, 0.0, 20.0, 4097).unwrap();
        let g = AffineElement::identity();
        let v = affine_coefficient(AffineSign::Plus, &g, &f, &f).unwrap();
        let n2 = f.norm() * f.norm();
        assert!((v - Complex64::new(n2, 0.0)).norm() < 1e-10);
        for a in [0.8, 1.0, 1.3] {
            let g = AffineElement::new(a, 0.77).unwrap();
            let moved = apply_affine(AffineSign::Plus, &g, &f).unwrap();
            assert!(
                (moved.norm() - f.norm()).abs() < 1e-8,
                "a = {a}: {} vs {}",
                moved.norm(),
                f.norm()
            );
        }
    }

    #[test]
    fn affine_translation_decay() {
        let f = WindowFunction::bump(8.0, 0.8, 0.0, 20.0, 4097).unwrap();
        let bs: Vec<f64> = (0..=50).map(|b| b as f64).collect();
        let scan = affine_decay_scan(AffineSign::Plus, 1.0, &f, &f, &bs).unwrap();
        assert!(scan[50].1 < 0.01 * scan[0].1);
        // Envelope max over |b| ≥ B is nonincreasing in B.
        let mut tail_max = 0.0f64;
        let mut envelope = Vec::new();
        for (_, v) in scan.iter().rev() {
            tail_max = tail_max.max(*v);
            envelope.push(tail_max);
        }
        envelope.reverse();
        for w in envelope.windows(2) {
            assert!(w[0] >= w[1] - 1e-15);
        }
    }

    #[test]
    fn affine_support_rules() {
        // A bump reaching 0 is rejected for π₊.
        let touching = WindowFunction::bump(1.0, 0.8, -5.0, 15.0, 2049).unwrap();
        assert!(matches!(
            affine_coefficient(AffineSign::Plus, &AffineElement::identity(), &touching, &touching),
            Err(GroupError::SupportCrossesZero(_))
        ));
        // Dilating mass past the grid end is an error.
        let f = WindowFunction::bump(12.0, 0.8, 0.0, 20.0, 2049).unwrap();
        let g = AffineElement::new(0.5, 0.0).unwrap();
        assert!(matches!(
            affine_coefficient(AffineSign::Plus, &g, &f, &f),
            Err(GroupError::ShiftExitsGrid { .. })
        ));
    }

    #[test]
    fn affine_projection_values() {
        let q = vec![
            AffineElement::new(std::f64::consts::E, 7.0).unwrap(),
            AffineElement::new(1.0, 3.0).unwrap(),
        ];
        let ln = affine_projection(&q);
        assert!((ln[0] - 1.0).abs() < 1e-12);
        assert!(ln[1].abs() < 1e-12);
        // Multiplicativity of the projection.
        let ab = q[0].compose(&q[1]);
        assert!((ab.a.ln() - (ln[0] + ln[1])).abs() < 1e-12);
    }

    #[test]
    fn window_validation() {
        assert!(matches!(
            WindowFunction::gaussian(2.0, 64),
            Err(GroupError::UnboundedSupport { .. })
        ));
        assert!(WindowFunction::from_samples(0.0, 1.0, vec![Complex64::new(0.0, 0.0); 32]).is_err());
    }
}

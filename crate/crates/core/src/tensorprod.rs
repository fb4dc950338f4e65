//! Truncated incomplete tensor products of representation sequences.
//!
//! The infinite tensor space is never materialized: every quantity here is
//! a product or sum of per-slot scalars ⟨π_n(g)x_n, y_n⟩, which is all the
//! anchored (incomplete) product construction needs. A dense Kronecker
//! route exists for small truncations as a cross-check.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::CMatrix;
use crate::repr::{decompose, CVector, RepError, UnitaryRep, DEFAULT_CLUSTER_TOL};

#[derive(Debug, Clone, Error)]
pub enum TensorError {
    #[error("anchor in slot {slot} has norm {norm}, expected 1")]
    AnchorNotUnit { slot: usize, norm: f64 },
    #[error("slot {slot} acts for a different group than slot 0")]
    GroupMismatch { slot: usize },
    #[error("vector spec is not elementary: {0}")]
    NonElementary(String),
    #[error("per-slot inequality violated ({0}); this is a theorem, so the implementation is wrong")]
    InternalConsistency(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// One slot of the product: a finite-dimensional representation with its
/// unit anchor vector.
#[derive(Debug, Clone)]
pub struct Slot {
    pub rep: UnitaryRep,
    pub anchor: CVector,
}

/// A finite truncation (π_1 ⊗ … ⊗ π_L, anchors a_n).
#[derive(Debug, Clone)]
pub struct RepSequence {
    pub slots: Vec<Slot>,
}

impl RepSequence {
    pub fn new(slots: Vec<Slot>) -> Result<Self, TensorError> {
        assert!(!slots.is_empty(), "at least one slot");
        let group = slots[0].rep.group;
        for (slot, s) in slots.iter().enumerate() {
            let norm = s.anchor.norm();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(TensorError::AnchorNotUnit { slot, norm });
            }
            if s.rep.group != group {
                return Err(TensorError::GroupMismatch { slot });
            }
        }
        Ok(RepSequence { slots })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// ⟨π_n(g)a_n, a_n⟩ per slot.
    fn anchor_coefficients(&self, word: &[i64]) -> Result<Vec<Complex64>, TensorError> {
        self.slots
            .iter()
            .map(|s| {
                let m = s.rep.apply_word(word)?;
                Ok(s.anchor.dotc(&(&m * &s.anchor)))
            })
            .collect()
    }
}

/// Declared model for the tail of the C₀ series; the divergence flag and
/// tail estimate are heuristics relative to this declaration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayModel {
    /// Increments shrink like rⁿ, 0 < r < 1.
    Geometric { ratio: f64 },
    /// Increments shrink like n^(−p), p > 1.
    Power { exponent: f64 },
}

/// Partial sums of Σ_n |1 − ⟨π_n(g)a_n, a_n⟩| with a heuristic tail verdict.
#[derive(Debug, Clone)]
pub struct ConvergenceTrace {
    pub word: Vec<i64>,
    pub terms: Vec<f64>,
    /// Nondecreasing partial sums, one per slot.
    pub partial_sums: Vec<f64>,
    /// Tail estimate under the declared decay model, from the last term.
    pub tail_estimate: Option<f64>,
    /// Set when the observed increments do not follow the declared model
    /// (or, with no model, fail to decay at all).
    pub divergence_flagged: bool,
}

/// Exact partial sums of the convergence series deciding whether
/// ⊗π_n(g) makes sense on the anchored product space.
pub fn c0_series(
    seq: &RepSequence,
    word: &[i64],
    model: Option<DecayModel>,
) -> Result<ConvergenceTrace, TensorError> {
    let coeffs = seq.anchor_coefficients(word)?;
    let terms: Vec<f64> = coeffs
        .iter()
        .map(|z| (Complex64::new(1.0, 0.0) - z).norm())
        .collect();
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for t in &terms {
        acc += t;
        partial_sums.push(acc);
    }
    let last = *terms.last().unwrap_or(&0.0);
    let tail_estimate = model.and_then(|m| match m {
        DecayModel::Geometric { ratio } if ratio > 0.0 && ratio < 1.0 => {
            Some(last * ratio / (1.0 - ratio))
        }
        DecayModel::Power { exponent } if exponent > 1.0 => {
            Some(last * terms.len() as f64 / (exponent - 1.0))
        }
        _ => None,
    });
    let divergence_flagged = flags_divergence(&terms, model);
    Ok(ConvergenceTrace {
        word: word.to_vec(),
        terms,
        partial_sums,
        tail_estimate,
        divergence_flagged,
    })
}

fn flags_divergence(terms: &[f64], model: Option<DecayModel>) -> bool {
    if terms.len() < 4 {
        return false;
    }
    let half = terms.len() / 2;
    let head: f64 = terms[..half].iter().sum::<f64>() / half as f64;
    let tail: f64 = terms[half..].iter().sum::<f64>() / (terms.len() - half) as f64;
    if tail < 1e-14 {
        return false;
    }
    // Slack factor 4 on the decay the declared model predicts between the
    // first-half and second-half averages.
    match model {
        None => tail >= 0.9 * head,
        Some(DecayModel::Geometric { ratio }) => {
            let expected = head * ratio.powf(half as f64);
            tail > 4.0 * expected.max(1e-300)
        }
        Some(DecayModel::Power { exponent }) => {
            // Average positions of the two halves differ by about 3×.
            let expected = head * 3.0f64.powf(-exponent);
            tail > 4.0 * expected.max(1e-300)
        }
    }
}

/// Default per-level defect schedule ε_n for building almost-invariant
/// tensor products: geometric ε_n = ε²·2^{−(n+2)}, which keeps
/// Σ_n ε_n < ε²/2 and makes (1/((n+1)ε_n²))·Σ_{j=n}^{2n} ε_j² vanish —
/// the two scheduling constraints the construction needs.
pub fn invariance_schedule(epsilon: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|n| epsilon * epsilon * 0.5f64.powi(n as i32 + 2))
        .collect()
}

/// Override of finitely many slots of an elementary vector.
pub type SlotOverride = (usize, CVector);

fn slot_vector<'a>(
    seq: &'a RepSequence,
    overrides: &'a [SlotOverride],
    slot: usize,
) -> Result<&'a CVector, TensorError> {
    let mut found: Option<&CVector> = None;
    for (idx, v) in overrides {
        if *idx == slot {
            if found.is_some() {
                return Err(TensorError::NonElementary(format!(
                    "slot {slot} overridden twice"
                )));
            }
            found = Some(v);
        }
    }
    Ok(found.unwrap_or(&seq.slots[slot].anchor))
}

fn check_overrides(seq: &RepSequence, overrides: &[SlotOverride]) -> Result<(), TensorError> {
    for (idx, v) in overrides {
        if *idx >= seq.len() {
            return Err(TensorError::NonElementary(format!(
                "override slot {idx} beyond truncation length {}",
                seq.len()
            )));
        }
        let want = seq.slots[*idx].rep.dim;
        if v.len() != want {
            return Err(TensorError::NonElementary(format!(
                "override in slot {idx} has dimension {}, rep has {want}",
                v.len()
            )));
        }
    }
    Ok(())
}

/// ⟨π(g)𝒙, 𝒚⟩ = Π_n ⟨π_n(g)x_n, y_n⟩ for elementary vectors that differ
/// from the anchors in finitely many slots. The tensor space itself is
/// never materialized.
pub fn elementary_coefficient(
    seq: &RepSequence,
    word: &[i64],
    x_overrides: &[SlotOverride],
    y_overrides: &[SlotOverride],
) -> Result<Complex64, TensorError> {
    check_overrides(seq, x_overrides)?;
    check_overrides(seq, y_overrides)?;
    let mut product = Complex64::new(1.0, 0.0);
    for n in 0..seq.len() {
        let x = slot_vector(seq, x_overrides, n)?;
        let y = slot_vector(seq, y_overrides, n)?;
        let m = seq.slots[n].rep.apply_word(word)?;
        product *= y.dotc(&(&m * x));
    }
    Ok(product)
}

/// Dense Kronecker route to the same coefficient, for small truncations
/// only; cross-checks [`elementary_coefficient`].
pub fn dense_tensor_coefficient(
    seq: &RepSequence,
    word: &[i64],
    x_overrides: &[SlotOverride],
    y_overrides: &[SlotOverride],
) -> Result<Complex64, TensorError> {
    check_overrides(seq, x_overrides)?;
    check_overrides(seq, y_overrides)?;
    let mut big = CMatrix::identity(1, 1);
    let mut x_big = CVector::from_element(1, Complex64::new(1.0, 0.0));
    let mut y_big = CVector::from_element(1, Complex64::new(1.0, 0.0));
    for n in 0..seq.len() {
        let m = seq.slots[n].rep.apply_word(word)?;
        big = big.kronecker(&m);
        x_big = kron_vec(&x_big, slot_vector(seq, x_overrides, n)?);
        y_big = kron_vec(&y_big, slot_vector(seq, y_overrides, n)?);
    }
    Ok(y_big.dotc(&(&big * &x_big)))
}

fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::from_element(a.len() * b.len(), Complex64::new(0.0, 0.0));
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Invariance defect of the anchor under a finite query set.
#[derive(Debug, Clone)]
pub struct TensorDefectReport {
    /// sup over the set of ‖π(g)𝒂 − 𝒂‖, from the product formula.
    pub defect: f64,
    /// sup over the set of the per-slot bound 2 Σ_n |1 − ⟨π_n(g)a_n, a_n⟩|.
    pub bound: f64,
    /// (word, defect, bound) per element.
    pub per_element: Vec<(Vec<i64>, f64, f64)>,
}

/// ‖π(g)𝒂 − 𝒂‖² = 2(1 − Re Π_n⟨π_n(g)a_n, a_n⟩), dominated by
/// 2 Σ_n |1 − ⟨π_n(g)a_n, a_n⟩|. Both sides are computed and the
/// domination is checked on every element.
pub fn invariance_defect_tensor(
    seq: &RepSequence,
    query: &[Vec<i64>],
) -> Result<TensorDefectReport, TensorError> {
    let mut per_element = Vec::with_capacity(query.len());
    let mut sup_defect = 0.0f64;
    let mut sup_bound = 0.0f64;
    for word in query {
        let coeffs = seq.anchor_coefficients(word)?;
        let product: Complex64 = coeffs.iter().product();
        let defect_sq = (2.0 * (1.0 - product.re)).max(0.0);
        let defect = defect_sq.sqrt();
        let bound = 2.0
            * coeffs
                .iter()
                .map(|z| (Complex64::new(1.0, 0.0) - z).norm())
                .sum::<f64>();
        if defect_sq > bound + 1e-10 {
            return Err(TensorError::InternalConsistency(format!(
                "defect² = {defect_sq} exceeds 2Σ|1−⟨π_n(g)a_n,a_n⟩| = {bound} at {word:?}"
            )));
        }
        sup_defect = sup_defect.max(defect);
        sup_bound = sup_bound.max(bound);
        per_element.push((word.clone(), defect, bound));
    }
    Ok(TensorDefectReport {
        defect: sup_defect,
        bound: sup_bound,
        per_element,
    })
}

/// Finite-window reading of the weak-mixing criterion for ⊗π_n.
#[derive(Debug, Clone)]
pub struct WeakMixingDiagnostic {
    /// v_n = m(|⟨π_n(·)a_n, a_n⟩|²) per slot, by the closed projection form.
    pub values: Vec<f64>,
    pub min_value: f64,
    pub window: usize,
    pub threshold: f64,
    /// True when the window minimum fell below the threshold. A statement
    /// about the computed window only, not about the liminf.
    pub criterion_met: bool,
}

/// v_n = Σ_χ ‖P_χ a_n‖⁴ per slot (the closed form of the invariant mean
/// for abelian reps); small values along a subsequence are the finite
/// evidence for weak mixing of the product.
pub fn weak_mixing_diagnostic(
    seq: &RepSequence,
    threshold: f64,
) -> Result<WeakMixingDiagnostic, TensorError> {
    let mut values = Vec::with_capacity(seq.len());
    for slot in &seq.slots {
        let decomp = decompose(&slot.rep, DEFAULT_CLUSTER_TOL)?;
        let mut v = 0.0;
        for class in &decomp.classes {
            let mass: f64 = class
                .copies
                .iter()
                .map(|q| (q.adjoint() * &slot.anchor).norm_squared())
                .sum();
            v += mass * mass;
        }
        values.push(v);
    }
    let min_value = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(WeakMixingDiagnostic {
        min_value,
        window: values.len(),
        threshold,
        criterion_met: min_value < threshold,
        values,
    })
}

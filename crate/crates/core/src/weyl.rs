//! Weyl/Cesàro character sums (1/N) Σ_{k≤N} e^{2iπ h n_k θ} in exact
//! wrapped arithmetic, and finite-horizon equidistribution scans.
//!
//! Every mean is reported with the horizon that produced it. A small
//! residual at finite N is evidence of equidistribution, never a proof;
//! the classification in [`first_kind_scan`] is explicitly heuristic.
//!
//! Precision note: θ is a 128-bit dyadic word, so `wrap(n_k·θ)` is the
//! exact fractional part of n_k times the *stored* word. Non-dyadic
//! rationals p/q are rounded on input; multiplying by n_k consumes
//! log2(n_k) fractional bits, so residue cycles against q are faithful
//! while log2(n_k) + log2(q) stays below 128.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use thiserror::Error;

use crate::fixed::{biguint_low_128, Angle};

pub const DEFAULT_HARMONICS: u32 = 8;
pub const DEFAULT_TOL: f64 = 0.05;

#[derive(Debug, Clone, Error)]
pub enum WeylError {
    #[error("requested N = {requested} exceeds the sequence horizon {horizon}")]
    HorizonExceeded { requested: usize, horizon: usize },
    #[error("cannot parse integer sequence from {0:?}")]
    Unparseable(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    /// Integer-coefficient polynomial in k, leading coefficient first.
    Polynomial(Vec<BigInt>),
    /// n_k = base^k, optionally plus k.
    Lacunary { base: u64, add_index: bool },
    /// Explicit list, n_k = values[k-1].
    Explicit(Vec<BigInt>),
}

/// A deterministic integer sequence (n_k)_{k≥1}.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerSequence {
    pub kind: SequenceKind,
    pub horizon: usize,
}

impl IntegerSequence {
    pub fn polynomial(coeffs: Vec<i64>) -> Self {
        IntegerSequence {
            kind: SequenceKind::Polynomial(coeffs.into_iter().map(BigInt::from).collect()),
            horizon: 10_000_000,
        }
    }

    pub fn lacunary(base: u64, add_index: bool) -> Self {
        IntegerSequence {
            kind: SequenceKind::Lacunary { base, add_index },
            horizon: 1_000_000,
        }
    }

    pub fn explicit(values: Vec<BigInt>) -> Self {
        let horizon = values.len();
        IntegerSequence {
            kind: SequenceKind::Explicit(values),
            horizon,
        }
    }

    /// Parses `poly:1,0,0`, `lacunary:2^k`, `lacunary:3^k+k`, `list:1,5,9`.
    pub fn parse(text: &str) -> Result<Self, WeylError> {
        let (tag, body) = text
            .split_once(':')
            .ok_or_else(|| WeylError::Unparseable(text.into()))?;
        match tag.trim() {
            "poly" => {
                let coeffs = body
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| WeylError::Unparseable(text.into()))?;
                Ok(IntegerSequence::polynomial(coeffs))
            }
            "lacunary" => {
                let body = body.trim();
                let (base_txt, add_index) = match body.strip_suffix("+k") {
                    Some(rest) => (rest, true),
                    None => (body, false),
                };
                let base_txt = base_txt
                    .strip_suffix("^k")
                    .ok_or_else(|| WeylError::Unparseable(text.into()))?;
                let base: u64 = base_txt
                    .trim()
                    .parse()
                    .map_err(|_| WeylError::Unparseable(text.into()))?;
                if base < 2 {
                    return Err(WeylError::Unparseable(text.into()));
                }
                Ok(IntegerSequence::lacunary(base, add_index))
            }
            "list" => {
                let values = body
                    .split(',')
                    .map(|c| c.trim().parse::<BigInt>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| WeylError::Unparseable(text.into()))?;
                Ok(IntegerSequence::explicit(values))
            }
            _ => Err(WeylError::Unparseable(text.into())),
        }
    }

    /// n_k in exact big-integer arithmetic, k ≥ 1.
    pub fn term(&self, k: usize) -> Result<BigInt, WeylError> {
        if k == 0 || k > self.horizon {
            return Err(WeylError::HorizonExceeded {
                requested: k,
                horizon: self.horizon,
            });
        }
        Ok(match &self.kind {
            SequenceKind::Polynomial(coeffs) => {
                let kb = BigInt::from(k);
                let mut acc = BigInt::from(0);
                for c in coeffs {
                    acc = acc * &kb + c;
                }
                acc
            }
            SequenceKind::Lacunary { base, add_index } => {
                let mut v = BigInt::from(*base).pow(k as u32);
                if *add_index {
                    v += BigInt::from(k);
                }
                v
            }
            SequenceKind::Explicit(values) => values[k - 1].clone(),
        })
    }

    fn check_horizon(&self, n: usize) -> Result<(), WeylError> {
        if n > self.horizon {
            return Err(WeylError::HorizonExceeded {
                requested: n,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    /// Streams wrap(n_k·θ) for k = 1..=n. The per-term cost is O(1) for
    /// lacunary sequences and O(deg) for polynomials; the reduction
    /// n_k mod 2¹²⁸ is exact, so the angle is the true fractional part.
    pub fn angles<'a>(
        &'a self,
        theta: Angle,
        n: usize,
    ) -> Result<impl Iterator<Item = Angle> + 'a, WeylError> {
        self.check_horizon(n)?;
        let reduced_coeffs: Vec<u128> = match &self.kind {
            SequenceKind::Polynomial(coeffs) => coeffs.iter().map(reduce_bigint).collect(),
            _ => Vec::new(),
        };
        let mut power: u128 = 1;
        Ok((1..=n).map(move |k| match &self.kind {
            SequenceKind::Polynomial(_) => {
                let kw = k as u128;
                let mut acc: u128 = 0;
                for c in &reduced_coeffs {
                    acc = acc.wrapping_mul(kw).wrapping_add(*c);
                }
                theta.mul_wrapped(acc)
            }
            SequenceKind::Lacunary { base, add_index } => {
                power = power.wrapping_mul(*base as u128);
                let mut v = power;
                if *add_index {
                    v = v.wrapping_add(k as u128);
                }
                theta.mul_wrapped(v)
            }
            SequenceKind::Explicit(values) => theta.mul_bigint(&values[k - 1]),
        }))
    }
}

/// n mod 2¹²⁸ as a wrapped word (negative values wrap).
fn reduce_bigint(n: &BigInt) -> u128 {
    let mag = biguint_low_128(n.magnitude());
    if n.is_negative() {
        mag.wrapping_neg()
    } else {
        mag
    }
}

/// (1/N) Σ_{k=1}^{N} e^{2iπ·wrap(n_k θ)}.
pub fn cesaro_character_mean(
    seq: &IntegerSequence,
    theta: Angle,
    n: usize,
) -> Result<Complex64, WeylError> {
    let mut sum = Complex64::new(0.0, 0.0);
    for angle in seq.angles(theta, n)? {
        sum += angle.unit();
    }
    Ok(sum / n as f64)
}

/// Cesàro means of one harmonic at the checkpoints of a geometric schedule.
#[derive(Debug, Clone)]
pub struct WeylReport {
    pub theta: Angle,
    pub harmonic: u32,
    /// (N, S_N) along the doubling schedule, ending at the full horizon.
    pub partial_sums: Vec<(usize, Complex64)>,
    pub final_mean: Complex64,
    pub magnitude: f64,
}

/// One report per harmonic h ∈ [1, H]: the Cesàro mean of e^{2iπ h n_k θ}.
pub fn weyl_criterion_scan(
    seq: &IntegerSequence,
    theta: Angle,
    harmonics: u32,
    n: usize,
) -> Result<Vec<WeylReport>, WeylError> {
    assert!(harmonics >= 1, "at least one harmonic");
    let mut reports = Vec::with_capacity(harmonics as usize);
    for h in 1..=harmonics {
        let h_theta = theta.mul_int(h as i64);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut partials = Vec::new();
        let mut checkpoint = 1usize;
        for (k, angle) in seq.angles(h_theta, n)?.enumerate() {
            sum += angle.unit();
            let count = k + 1;
            if count == checkpoint || count == n {
                partials.push((count, sum / count as f64));
                if count == checkpoint {
                    checkpoint *= 2;
                }
            }
        }
        let final_mean = sum / n as f64;
        reports.push(WeylReport {
            theta,
            harmonic: h,
            partial_sums: partials,
            final_mean,
            magnitude: final_mean.norm(),
        });
    }
    Ok(reports)
}

/// Finite-horizon classification of grid points. `decayed` means every
/// harmonic mean up to H fell below `tol` at horizon N — a heuristic
/// verdict about an asymptotic property, carried with its parameters.
#[derive(Debug, Clone)]
pub struct FirstKindScan {
    pub decayed: Vec<Angle>,
    pub undetermined: Vec<Angle>,
    pub n: usize,
    pub harmonics: u32,
    pub tol: f64,
}

pub fn first_kind_scan(
    seq: &IntegerSequence,
    grid: &[Angle],
    n: usize,
    harmonics: u32,
    tol: f64,
) -> Result<FirstKindScan, WeylError> {
    let mut decayed = Vec::new();
    let mut undetermined = Vec::new();
    for &theta in grid {
        let mut all_small = true;
        for h in 1..=harmonics {
            let mean = cesaro_character_mean(seq, theta.mul_int(h as i64), n)?;
            if mean.norm() >= tol {
                all_small = false;
                break;
            }
        }
        if all_small {
            decayed.push(theta);
        } else {
            undetermined.push(theta);
        }
    }
    Ok(FirstKindScan {
        decayed,
        undetermined,
        n,
        harmonics,
        tol,
    })
}

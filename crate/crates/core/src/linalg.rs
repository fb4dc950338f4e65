//! Dense complex linear algebra helpers: Hilbert–Schmidt inner products,
//! a cyclic Jacobi eigensolver for Hermitian matrices, and joint
//! diagonalization of commuting unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

/// ⟨A, B⟩ = tr(B*A), linear in the first argument.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖U*U − I‖ in Frobenius norm. Zero also for rectangular isometries.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let k = u.ncols();
    hs_norm(&(u.adjoint() * u - CMatrix::identity(k, k)))
}

pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    hs_norm(&(a * b - b * a))
}

#[derive(Debug, Clone, Error)]
pub enum EigenError {
    #[error("Jacobi sweep did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error(
        "ambiguous eigenvalue clustering: gap {gap:.3e} is below the tolerance {tol:.3e} \
         but the values are numerically distinct; retry with a different tolerance"
    )]
    AmbiguousClustering { gap: f64, tol: f64 },
    #[error("eigenvector residual {0:.3e} exceeds 1e-8; input is not normal enough")]
    Residual(f64),
}

/// Eigendecomposition A = V diag(λ) V* of a complex Hermitian matrix by
/// cyclic Jacobi sweeps. Eigenvalues are returned in ascending order.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix), EigenError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    // Symmetrize away roundoff so the iteration sees an exactly Hermitian input.
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = 0.5 * (a[(i, j)] + a[(j, i)].conj());
        }
    }
    let mut v = CMatrix::identity(n, n);
    let scale = hs_norm(&m).max(1.0);
    let target = 1e-15 * scale;
    let max_sweeps = 60;
    for sweep in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= target {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
            let vals: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
            let mut vecs = CMatrix::zeros(n, n);
            for (new, &old) in order.iter().enumerate() {
                vecs.set_column(new, &v.column(old));
            }
            return Ok((vals, vecs));
        }
        let _ = sweep;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let gabs = g.norm();
                if gabs <= 1e-300 {
                    continue;
                }
                // Phase that makes the (p,q) entry real, then a real Givens
                // rotation on the resulting symmetric 2x2 block.
                let u_phase = g.conj() / gabs; // applied at index q
                let alpha = m[(p, p)].re;
                let beta = m[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * gabs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, u)·R with R the real Givens rotation: the
                // identity except J[p,p]=c, J[p,q]=s, J[q,p]=−s·u,
                // J[q,q]=c·u with u = u_phase.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = Complex64::new(-s, 0.0) * u_phase;
                let jqq = Complex64::new(c, 0.0) * u_phase;
                // Right-multiply columns p, q of M and V by J.
                for i in 0..n {
                    let mp = m[(i, p)];
                    let mq = m[(i, q)];
                    m[(i, p)] = mp * jpp + mq * jqp;
                    m[(i, q)] = mp * jpq + mq * jqq;
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * jpp + vq * jqp;
                    v[(i, q)] = vp * jpq + vq * jqq;
                }
                // Left-multiply rows p, q of M by J†.
                for j in 0..n {
                    let mp = m[(p, j)];
                    let mq = m[(q, j)];
                    m[(p, j)] = jpp.conj() * mp + jqp.conj() * mq;
                    m[(q, j)] = jpq.conj() * mp + jqq.conj() * mq;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
            }
        }
    }
    Err(EigenError::NoConvergence(max_sweeps))
}

/// One joint eigenspace of a commuting family of unitaries.
#[derive(Debug, Clone)]
pub struct JointBlock {
    /// Orthonormal basis of the eigenspace, one column per vector.
    pub basis: CMatrix,
    /// Joint eigenvalue, one entry per input matrix.
    pub labels: Vec<Complex64>,
}

/// Simultaneous eigenspaces of a family of commuting unitaries.
///
/// Each unitary is split into commuting Hermitian real/imaginary parts and
/// the current eigenspaces are refined against both. Eigenvalues closer
/// than `cluster_tol` are merged; a merge that spans numerically distinct
/// values raises [`EigenError::AmbiguousClustering`] instead of silently
/// picking a side.
pub fn joint_eigenspaces(
    unitaries: &[CMatrix],
    cluster_tol: f64,
) -> Result<Vec<JointBlock>, EigenError> {
    assert!(!unitaries.is_empty());
    let d = unitaries[0].nrows();
    let mut blocks: Vec<CMatrix> = vec![CMatrix::identity(d, d)];
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, -0.5);
    for u in unitaries {
        let re = (u + u.adjoint()) * half;
        let im = (u - u.adjoint()) * half_i;
        for herm in [&re, &im] {
            let mut refined = Vec::new();
            for q in &blocks {
                if q.ncols() == 1 {
                    refined.push(q.clone());
                    continue;
                }
                let compressed = q.adjoint() * herm * q;
                let (vals, vecs) = hermitian_eigen(&compressed)?;
                let rotated = q * vecs;
                for range in cluster_ranges(&vals, cluster_tol)? {
                    refined.push(rotated.columns(range.0, range.1 - range.0).into_owned());
                }
            }
            blocks = refined;
        }
    }
    let mut out = Vec::with_capacity(blocks.len());
    for basis in blocks {
        let k = basis.ncols() as f64;
        let mut labels = Vec::with_capacity(unitaries.len());
        for u in unitaries {
            let lambda = hs_inner(&(u * &basis), &basis) / Complex64::new(k, 0.0);
            // Every basis column must actually be an eigenvector.
            let residual = hs_norm(&(u * &basis - &basis * lambda));
            if residual > 1e-8 {
                return Err(EigenError::Residual(residual));
            }
            labels.push(lambda);
        }
        out.push(JointBlock { basis, labels });
    }
    // Canonical order so downstream reports are reproducible.
    out.sort_by(|a, b| {
        for (x, y) in a.labels.iter().zip(&b.labels) {
            match x
                .re
                .partial_cmp(&y.re)
                .unwrap()
                .then(x.im.partial_cmp(&y.im).unwrap())
            {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(out)
}

/// Split an ascending list of eigenvalues into clusters separated by more
/// than `tol`. Values inside one cluster must agree up to the numerical
/// noise floor, otherwise the clustering is ambiguous.
fn cluster_ranges(vals: &[f64], tol: f64) -> Result<Vec<(usize, usize)>, EigenError> {
    let noise_floor = 64.0 * f64::EPSILON * vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || vals[i] - vals[i - 1] > tol {
            let spread = vals[i - 1] - vals[start];
            if spread > noise_floor {
                return Err(EigenError::AmbiguousClustering {
                    gap: spread,
                    tol,
                });
            }
            ranges.push((start, i));
            start = i;
        }
    }
    Ok(ranges)
}

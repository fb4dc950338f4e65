//! Finite-dimensional unitary representations of ℤ and ℤ^d, block
//! decompositions into equivalence classes of irreducibles, the closed-form
//! projection of a Hilbert–Schmidt operator onto the commutant, and the
//! invariant-mean formulas for |⟨π(·)x, y⟩|², each with a Cesàro
//! cross-check route.

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    commutator_norm, hs_norm, joint_eigenspaces, unitarity_defect, CMatrix, EigenError,
};

pub type CVector = DVector<Complex64>;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

#[derive(Debug, Clone, Error)]
pub enum RepError {
    #[error("generator {index} is not unitary (defect {defect:.3e})")]
    NotUnitary { index: usize, defect: f64 },
    #[error("generators {i} and {j} do not commute (‖[U_i,U_j]‖ = {norm:.3e})")]
    NonCommuting { i: usize, j: usize, norm: f64 },
    #[error("representations live on different groups")]
    GroupMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("decomposition does not match the representation: {0}")]
    InvalidDecomposition(String),
    #[error("tensor dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// The (abelian) group a representation acts for: ℤ^rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Group {
    pub rank: usize,
}

impl Group {
    pub const Z: Group = Group { rank: 1 };

    pub fn lattice(rank: usize) -> Group {
        Group { rank }
    }
}

/// A unitary representation given by one commuting generator matrix per
/// group generator.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    pub group: Group,
    pub dim: usize,
    pub generators: Vec<CMatrix>,
}

impl UnitaryRep {
    pub fn new(group: Group, generators: Vec<CMatrix>) -> Result<Self, RepError> {
        assert_eq!(group.rank, generators.len(), "one matrix per generator");
        let dim = generators[0].nrows();
        for (index, u) in generators.iter().enumerate() {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(RepError::DimensionMismatch(format!(
                    "generator {index} is {}x{}, expected {dim}x{dim}",
                    u.nrows(),
                    u.ncols()
                )));
            }
            let defect = unitarity_defect(u);
            if defect > 1e-10 {
                return Err(RepError::NotUnitary { index, defect });
            }
        }
        for i in 0..generators.len() {
            for j in (i + 1)..generators.len() {
                let norm = commutator_norm(&generators[i], &generators[j]);
                if norm > 1e-10 {
                    return Err(RepError::NonCommuting { i, j, norm });
                }
            }
        }
        Ok(UnitaryRep {
            group,
            dim,
            generators,
        })
    }

    /// Representation of ℤ generated by a single unitary.
    pub fn cyclic(u: CMatrix) -> Result<Self, RepError> {
        Self::new(Group::Z, vec![u])
    }

    /// Diagonal representation of ℤ with the given eigenvalues.
    pub fn diagonal(eigenvalues: &[Complex64]) -> Self {
        let d = eigenvalues.len();
        let u = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                eigenvalues[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        UnitaryRep {
            group: Group::Z,
            dim: d,
            generators: vec![u],
        }
    }

    pub fn trivial(dim: usize) -> Self {
        UnitaryRep {
            group: Group::Z,
            dim,
            generators: vec![CMatrix::identity(dim, dim)],
        }
    }

    /// π(g) for a word g in the commuting generators (exponent vector).
    pub fn apply_word(&self, word: &[i64]) -> Result<CMatrix, RepError> {
        if word.len() != self.group.rank {
            return Err(RepError::DimensionMismatch(format!(
                "word has {} exponents, group rank is {}",
                word.len(),
                self.group.rank
            )));
        }
        let mut out = CMatrix::identity(self.dim, self.dim);
        for (u, &e) in self.generators.iter().zip(word) {
            if e != 0 {
                out *= matrix_power(u, e);
            }
        }
        Ok(out)
    }

    /// Entrywise conjugate representation.
    pub fn conjugate(&self) -> UnitaryRep {
        UnitaryRep {
            group: self.group,
            dim: self.dim,
            generators: self.generators.iter().map(|u| u.map(|z| z.conj())).collect(),
        }
    }
}

fn matrix_power(u: &CMatrix, e: i64) -> CMatrix {
    let base = if e < 0 { u.adjoint() } else { u.clone() };
    let mut exp = e.unsigned_abs();
    let mut result = CMatrix::identity(u.nrows(), u.ncols());
    let mut sq = base;
    while exp > 0 {
        if exp & 1 == 1 {
            result = &result * &sq;
        }
        sq = &sq * &sq;
        exp >>= 1;
    }
    result
}

/// Tensor product of two representations of the same group: the generators
/// are Kronecker products. Refuses dimensions above `DEFAULT_DIMENSION_CAP`.
pub fn tensor(a: &UnitaryRep, b: &UnitaryRep) -> Result<UnitaryRep, RepError> {
    tensor_with_cap(a, b, DEFAULT_DIMENSION_CAP)
}

pub fn tensor_with_cap(a: &UnitaryRep, b: &UnitaryRep, cap: usize) -> Result<UnitaryRep, RepError> {
    if a.group != b.group {
        return Err(RepError::GroupMismatch);
    }
    let dim = a.dim * b.dim;
    if dim > cap {
        return Err(RepError::DimensionCap { dim, cap });
    }
    let generators = a
        .generators
        .iter()
        .zip(&b.generators)
        .map(|(ua, ub)| ua.kronecker(ub))
        .collect();
    Ok(UnitaryRep {
        group: a.group,
        dim,
        generators,
    })
}

/// One equivalence class of irreducible blocks: `copies[u]` is the isometry
/// of the u-th copy onto ℂ^{dim}; all copies carry the same irreducible in
/// these bases.
#[derive(Debug, Clone)]
pub struct RepClass {
    /// Joint eigenvalue per generator (abelian classes, where dim = 1).
    pub labels: Vec<Complex64>,
    /// Irreducible dimension d_j.
    pub dim: usize,
    /// d×d_j isometries, one per copy (the multiplicity set I_j).
    pub copies: Vec<CMatrix>,
}

impl RepClass {
    pub fn multiplicity(&self) -> usize {
        self.copies.len()
    }
}

/// Orthogonal, exhaustive block structure of a compact representation.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub space_dim: usize,
    pub classes: Vec<RepClass>,
}

impl BlockDecomposition {
    /// Sanity checks: isometric copies, global orthonormality, exhaustion,
    /// invariance of every copy, and one common irreducible matrix per
    /// class. Intended for user-supplied (non-abelian compact) structures;
    /// `decompose` output satisfies this by construction.
    pub fn validate(&self, rep: &UnitaryRep) -> Result<(), RepError> {
        let total: usize = self
            .classes
            .iter()
            .map(|c| c.multiplicity() * c.dim)
            .sum();
        if total != rep.dim || self.space_dim != rep.dim {
            return Err(RepError::InvalidDecomposition(format!(
                "blocks span dimension {total}, space has {}",
                rep.dim
            )));
        }
        let mut assembled = CMatrix::zeros(rep.dim, rep.dim);
        let mut col = 0;
        for class in &self.classes {
            for copy in &class.copies {
                if copy.nrows() != rep.dim || copy.ncols() != class.dim {
                    return Err(RepError::InvalidDecomposition(format!(
                        "copy is {}x{}, expected {}x{}",
                        copy.nrows(),
                        copy.ncols(),
                        rep.dim,
                        class.dim
                    )));
                }
                assembled.view_mut((0, col), (rep.dim, class.dim)).copy_from(copy);
                col += class.dim;
            }
        }
        let defect = unitarity_defect(&assembled);
        if defect > 1e-8 {
            return Err(RepError::InvalidDecomposition(format!(
                "copies are not jointly orthonormal (defect {defect:.3e})"
            )));
        }
        for (j, class) in self.classes.iter().enumerate() {
            for u in &rep.generators {
                let reference = class.copies[0].adjoint() * u * &class.copies[0];
                for (i, copy) in class.copies.iter().enumerate() {
                    let compressed = copy.adjoint() * u * copy;
                    let invariance = hs_norm(&(u * copy - copy * &compressed));
                    if invariance > 1e-8 {
                        return Err(RepError::InvalidDecomposition(format!(
                            "class {j} copy {i} is not invariant (residual {invariance:.3e})"
                        )));
                    }
                    let same = hs_norm(&(&compressed - &reference));
                    if same > 1e-8 {
                        return Err(RepError::InvalidDecomposition(format!(
                            "class {j} copy {i} carries a different irreducible \
                             (deviation {same:.3e})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Joint eigendecomposition of a representation of ℤ^d, with eigenvalues
/// clustered at tolerance `cluster_tol` into equivalence classes of
/// characters.
pub fn decompose(rep: &UnitaryRep, cluster_tol: f64) -> Result<BlockDecomposition, RepError> {
    let blocks = joint_eigenspaces(&rep.generators, cluster_tol)?;
    let classes = blocks
        .into_iter()
        .map(|b| RepClass {
            labels: b.labels,
            dim: 1,
            copies: (0..b.basis.ncols())
                .map(|i| b.basis.columns(i, 1).into_owned())
                .collect(),
        })
        .collect();
    Ok(BlockDecomposition {
        space_dim: rep.dim,
        classes,
    })
}

fn check_operator(decomp: &BlockDecomposition, a: &CMatrix) -> Result<(), RepError> {
    if a.nrows() != decomp.space_dim || a.ncols() != decomp.space_dim {
        return Err(RepError::DimensionMismatch(format!(
            "operator is {}x{}, decomposition space has dimension {}",
            a.nrows(),
            a.ncols(),
            decomp.space_dim
        )));
    }
    Ok(())
}

/// Orthogonal projection of A ∈ HS(H) onto the commutant of the
/// representation:
///
/// P A = Σ_j (1/d_j) Σ_{u,v∈I_j} tr(V_u* A V_v) · V_u V_v*.
pub fn commutant_projection(
    decomp: &BlockDecomposition,
    a: &CMatrix,
) -> Result<CMatrix, RepError> {
    check_operator(decomp, a)?;
    let d = decomp.space_dim;
    let mut out = CMatrix::zeros(d, d);
    for class in &decomp.classes {
        let scale = Complex64::new(1.0 / class.dim as f64, 0.0);
        let compressed: Vec<CMatrix> = class.copies.iter().map(|v| a * v).collect();
        for vu in &class.copies {
            for (v_idx, vv) in class.copies.iter().enumerate() {
                // tr(V_u* A V_v)
                let block = vu.adjoint() * &compressed[v_idx];
                let trace: Complex64 = (0..class.dim).map(|i| block[(i, i)]).sum();
                out += (vu * vv.adjoint()) * (trace * scale);
            }
        }
    }
    Ok(out)
}

/// Closed-form squared HS norm of the commutant projection:
/// ‖P A‖² = Σ_j (1/d_j) Σ_{u,v} |tr(A_{u,v})|².
pub fn projection_norm_sq(decomp: &BlockDecomposition, a: &CMatrix) -> Result<f64, RepError> {
    check_operator(decomp, a)?;
    let mut total = 0.0;
    for class in &decomp.classes {
        let compressed: Vec<CMatrix> = class.copies.iter().map(|v| a * v).collect();
        let mut class_sum = 0.0;
        for vu in &class.copies {
            for av in &compressed {
                let block = vu.adjoint() * av;
                let trace: Complex64 = (0..class.dim).map(|i| block[(i, i)]).sum();
                class_sum += trace.norm_sqr();
            }
        }
        total += class_sum / class.dim as f64;
    }
    Ok(total)
}

/// Cesàro route to the same projection for ℤ:
/// (1/(2N+1)) Σ_{n=−N}^{N} Uⁿ A U⁻ⁿ.
pub fn cesaro_commutant_mean(u: &CMatrix, a: &CMatrix, n: usize) -> CMatrix {
    let mut sum = a.clone();
    let mut fwd = a.clone();
    let mut bwd = a.clone();
    let ua = u.adjoint();
    for _ in 1..=n {
        fwd = u * fwd * &ua;
        bwd = &ua * bwd * u;
        sum += &fwd;
        sum += &bwd;
    }
    sum * Complex64::new(1.0 / (2 * n + 1) as f64, 0.0)
}

/// The class-j blocks of the vector 𝒃_{x,y}: a d_j×d_j matrix
/// (1/√d_j) Σ_{i∈I_j} x_{i,j} ȳ_{i,j}ᵀ per class.
#[derive(Debug, Clone)]
pub struct BVector {
    pub blocks: Vec<CMatrix>,
}

impl BVector {
    pub fn norm_sq(&self) -> f64 {
        self.blocks.iter().map(|b| hs_norm(b).powi(2)).sum()
    }
}

pub fn b_vector(
    decomp: &BlockDecomposition,
    x: &CVector,
    y: &CVector,
) -> Result<BVector, RepError> {
    if x.len() != decomp.space_dim || y.len() != decomp.space_dim {
        return Err(RepError::DimensionMismatch(format!(
            "vectors of length {}/{} against space dimension {}",
            x.len(),
            y.len(),
            decomp.space_dim
        )));
    }
    let mut blocks = Vec::with_capacity(decomp.classes.len());
    for class in &decomp.classes {
        let scale = Complex64::new(1.0 / (class.dim as f64).sqrt(), 0.0);
        let mut block = CMatrix::zeros(class.dim, class.dim);
        for copy in &class.copies {
            let xi = copy.adjoint() * x;
            let yi = copy.adjoint() * y;
            for r in 0..class.dim {
                for c in 0..class.dim {
                    block[(r, c)] += xi[r] * yi[c].conj();
                }
            }
        }
        blocks.push(block * scale);
    }
    Ok(BVector { blocks })
}

/// Gram-sum route to ‖𝒃_{x,y}‖², for cross-checking [`BVector::norm_sq`]:
/// Σ_j (1/d_j) Σ_{u,v} ⟨x_u, x_v⟩ · conj(⟨y_u, y_v⟩).
pub fn b_norm_sq_gram(
    decomp: &BlockDecomposition,
    x: &CVector,
    y: &CVector,
) -> Result<f64, RepError> {
    let mut total = Complex64::new(0.0, 0.0);
    for class in &decomp.classes {
        let xs: Vec<CVector> = class.copies.iter().map(|v| v.adjoint() * x).collect();
        let ys: Vec<CVector> = class.copies.iter().map(|v| v.adjoint() * y).collect();
        let mut class_sum = Complex64::new(0.0, 0.0);
        for (xu, yu) in xs.iter().zip(&ys) {
            for (xv, yv) in xs.iter().zip(&ys) {
                let gx = xv.dotc(xu); // ⟨x_u, x_v⟩, linear in the first slot
                let gy = yv.dotc(yu);
                class_sum += gx * gy.conj();
            }
        }
        total += class_sum / Complex64::new(class.dim as f64, 0.0);
    }
    Ok(total.re)
}

/// Invariant mean of |⟨π(·)x, y⟩|² in closed form: ‖𝒃_{x,y}‖², which for
/// abelian classes is Σ_χ |⟨P_χ x, P_χ y⟩|².
pub fn mean_square_coefficient(
    decomp: &BlockDecomposition,
    x: &CVector,
    y: &CVector,
) -> Result<f64, RepError> {
    Ok(b_vector(decomp, x, y)?.norm_sq())
}

/// Cesàro route for ℤ: (1/(2N+1)) Σ_{n=−N}^{N} |⟨Uⁿx, y⟩|².
pub fn cesaro_mean_square(u: &CMatrix, x: &CVector, y: &CVector, n: usize) -> f64 {
    let mut sum = y.dotc(x).norm_sqr();
    let ua = u.adjoint();
    let mut fwd = x.clone();
    let mut bwd = x.clone();
    for _ in 1..=n {
        fwd = u * fwd;
        bwd = &ua * bwd;
        sum += y.dotc(&fwd).norm_sqr();
        sum += y.dotc(&bwd).norm_sqr();
    }
    sum / (2 * n + 1) as f64
}

/// Upper bound Σ_j (1/d_j) ‖x̃_j‖²·‖ỹ_j‖² for the invariant mean.
pub fn mean_square_upper_bound(
    decomp: &BlockDecomposition,
    x: &CVector,
    y: &CVector,
) -> Result<f64, RepError> {
    let mut total = 0.0;
    for class in &decomp.classes {
        let x_sq: f64 = class
            .copies
            .iter()
            .map(|v| (v.adjoint() * x).norm_squared())
            .sum();
        let y_sq: f64 = class
            .copies
            .iter()
            .map(|v| (v.adjoint() * y).norm_squared())
            .sum();
        total += x_sq * y_sq / class.dim as f64;
    }
    Ok(total)
}

/// Dimension of the joint fixed space (classes whose label tuple is all
/// ones), computed through `decompose`.
pub fn invariant_dimension(rep: &UnitaryRep, cluster_tol: f64) -> Result<usize, RepError> {
    let decomp = decompose(rep, cluster_tol)?;
    Ok(decomp
        .classes
        .iter()
        .filter(|c| {
            c.labels
                .iter()
                .all(|l| (l - Complex64::new(1.0, 0.0)).norm() < 1e-8)
        })
        .map(|c| c.multiplicity() * c.dim)
        .sum())
}

/// Independent spectral-projector route to the commutant projection of a
/// single unitary with known, well-separated eigenvalues: P_λ is the
/// Lagrange interpolation polynomial of U at λ, and the projection is
/// Σ_λ P_λ A P_λ. Used to cross-check [`commutant_projection`].
pub fn eigen_projector_projection(
    u: &CMatrix,
    eigenvalues: &[Complex64],
    a: &CMatrix,
) -> CMatrix {
    let d = u.nrows();
    let identity = CMatrix::identity(d, d);
    let mut out = CMatrix::zeros(d, d);
    for (i, lam) in eigenvalues.iter().enumerate() {
        let mut p = identity.clone();
        for (j, mu) in eigenvalues.iter().enumerate() {
            if i != j {
                p = p * (u - &identity * *mu) * (Complex64::new(1.0, 0.0) / (lam - mu));
            }
        }
        out += &p * a * &p;
    }
    out
}

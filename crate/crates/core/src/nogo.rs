//! Numerical witness that a frame of positive operators has no dual frame of
//! positive operators.
//!
//! For a dual pair the map `A ↦ Σ w ⟨F(α),A⟩ E(α)` is the identity, whose
//! Choi matrix has a negative partial transpose. If both families were
//! positive the same Choi matrix would be a sum of product operators and
//! hence PPT.
//!
//! Choi ordering: `J(Φ) = Σ_{ij} Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|`, the output factor
//! first. For the frame map this is `J = Σ_α w_α E(α) ⊗ F(α)^T`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QframeError, Result};
use crate::frames::{canonical_dual, frame_operator, is_dual_pair, is_positive_frame, random_frame_with, Frame};
use crate::operator_space::{hermitian_eigen, kron, seeded_rng, HermitianOp};

/// Threshold below which a dual element counts as non-positive, relative
/// to its HS norm.
pub const NEGATIVE_EIG_TOL: f64 = 1e-10;
pub const VERDICT_NO_POSITIVE_DUAL: &str = "no_positive_dual_witnessed";
pub const VERDICT_INCONCLUSIVE: &str = "inconclusive";

/// `d² × d²` Hermitian matrix on `C^d ⊗ C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl ChoiMatrix {
    pub fn new(dim: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(QframeError::DimensionMismatch {
                expected: dim * dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Conjugation by the tensor swap `|k⟩|l⟩ ↦ |l⟩|k⟩`.
    pub fn swap_factors(&self) -> Self {
        let d = self.dim;
        let s = |r: usize| (r % d) * d + r / d;
        let matrix = DMatrix::from_fn(d * d, d * d, |r, c| self.matrix[(s(r), s(c))]);
        Self { dim: d, matrix }
    }
}

/// `Σ_α w_α E(α) ⊗ F(α)^T`, the Choi matrix of `A ↦ Σ w ⟨F(α),A⟩ E(α)`.
pub fn choi_of_pair(frame: &Frame, dual: &Frame) -> Result<ChoiMatrix> {
    let d = frame.dim();
    if dual.dim() != d {
        return Err(QframeError::DimensionMismatch {
            expected: d,
            found: dual.dim(),
        });
    }
    if frame.labels() != dual.labels() {
        return Err(QframeError::LabelMismatch("frames are indexed by different label sets".into()));
    }
    let mut matrix = DMatrix::<Complex64>::zeros(d * d, d * d);
    for ((f, e), w) in frame.elements().iter().zip(dual.elements()).zip(frame.weights()) {
        matrix += kron(e.as_matrix(), &f.as_matrix().transpose()) * Complex64::new(*w, 0.0);
    }
    ChoiMatrix::new(d, matrix)
}

/// `Σ_{ij} |i⟩⟨j| ⊗ |i⟩⟨j|`.
pub fn identity_choi(d: usize) -> ChoiMatrix {
    let matrix = DMatrix::from_fn(d * d, d * d, |r, c| {
        if r % (d + 1) == 0 && c % (d + 1) == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    ChoiMatrix { dim: d, matrix }
}

/// Transpose on the second tensor factor.
pub fn partial_transpose(choi: &ChoiMatrix) -> ChoiMatrix {
    let d = choi.dim;
    let matrix = DMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, k) = (r / d, r % d);
        let (j, l) = (c / d, c % d);
        choi.matrix[(i * d + l, j * d + k)]
    });
    ChoiMatrix { dim: d, matrix }
}

/// Smallest eigenvalue of the partial transpose; negative values certify
/// entanglement.
pub fn min_eig_pt(choi: &ChoiMatrix) -> f64 {
    partial_transpose(choi).eigenvalues()[0]
}

/// `(min_α λ_min(E(α)), min_α λ_min(E(α)) / ‖E(α)‖_HS)`.
fn min_element_eigenvalue(frame: &Frame) -> (f64, f64) {
    frame.elements().iter().fold((f64::INFINITY, f64::INFINITY), |(abs, rel), e| {
        let m = e.min_eigenvalue();
        let norm = e.hs_norm();
        let r = if norm > 0.0 { m / norm } else { 0.0 };
        (abs.min(m), rel.min(r))
    })
}

/// Witness report for one positive frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub dim: usize,
    pub frame_seed: Option<u64>,
    /// `min_α λ_min(E(α))` for the canonical dual.
    pub min_dual_eig: f64,
    pub choi_pt_min_eig: f64,
    pub verdict: String,
}

impl WitnessReport {
    pub fn witnessed(&self) -> bool {
        self.verdict == VERDICT_NO_POSITIVE_DUAL
    }
}

/// Canonical-dual negativity and the Choi contradiction for a positive frame.
pub fn positive_dual_witness(frame: &Frame) -> Result<WitnessReport> {
    if !is_positive_frame(frame) {
        return Err(QframeError::Precondition("frame has an element that is not positive semidefinite".into()));
    }
    let dual = canonical_dual(frame)?;
    let (min_dual_eig, relative) = min_element_eigenvalue(&dual);
    let choi_pt_min_eig = min_eig_pt(&choi_of_pair(frame, &dual)?);
    let verdict = if relative < -NEGATIVE_EIG_TOL {
        VERDICT_NO_POSITIVE_DUAL
    } else {
        VERDICT_INCONCLUSIVE
    };
    Ok(WitnessReport {
        dim: frame.dim(),
        frame_seed: None,
        min_dual_eig,
        choi_pt_min_eig,
        verdict: verdict.to_owned(),
    })
}

/// Per-element-norm relative minimum eigenvalue of the canonical dual.
pub fn canonical_dual_relative_min_eig(frame: &Frame) -> Result<f64> {
    Ok(min_element_eigenvalue(&canonical_dual(frame)?).1)
}

/// Label count used for the random positive frame of a batch seed.
pub fn batch_frame_size(d: usize, seed: u64) -> usize {
    d * d + 1 + (seed % 3) as usize
}

/// Witnesses over random positive frames, one per seed.
pub fn witness_batch(d: usize, seeds: impl IntoIterator<Item = u64>) -> Result<Vec<WitnessReport>> {
    seeds
        .into_iter()
        .map(|seed| {
            let frame = random_frame_with(d, batch_frame_size(d, seed), true, &mut seeded_rng(seed))?;
            let mut report = positive_dual_witness(&frame)?;
            report.frame_seed = Some(seed);
            Ok(report)
        })
        .collect()
}

/// Outcome of perturbing the canonical dual inside the affine family of duals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineSweep {
    /// Dimension of the perturbation space, `(n - d²) · d²`.
    pub freedom: usize,
    /// Relative minimum eigenvalue of each perturbed dual.
    pub min_relative_eigs: Vec<f64>,
    /// Largest duality residual among the perturbed duals.
    pub max_residual: f64,
}

impl AffineSweep {
    /// True when no perturbed dual was positive.
    pub fn all_non_positive(&self) -> bool {
        self.min_relative_eigs.iter().all(|&m| m < -NEGATIVE_EIG_TOL)
    }
}

/// Random duals `E' = E + G` with `Σ_α w_α ⟨F(α),·⟩ G(α) = 0`.
///
/// In coordinates `G = R - V S^{-1} V^T W R` for Gaussian `R`, rescaled so
/// that `‖G‖_F` is a random fraction in `[0.05, 2)` of `‖E‖_F`.
pub fn affine_dual_sweep(frame: &Frame, count: usize, seed: u64) -> Result<AffineSweep> {
    use rand::Rng;
    use rand_distr::StandardNormal;

    let dual = canonical_dual(frame)?;
    let n = frame.len();
    let dd = frame.dim() * frame.dim();
    let v = frame.coords();
    let w = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(frame.weights()));
    let s_inv = frame_operator(frame)
        .matrix()
        .clone()
        .cholesky()
        .ok_or_else(|| QframeError::NotAFrame("frame operator is not positive definite".into()))?
        .inverse();
    let projector = DMatrix::<f64>::identity(n, n) - v * s_inv * v.transpose() * &w;
    let dual_norm = dual.coords().norm();
    let mut rng = seeded_rng(seed);
    let mut min_relative_eigs = Vec::with_capacity(count);
    let mut max_residual = 0.0f64;
    for _ in 0..count {
        let r = DMatrix::<f64>::from_fn(n, dd, |_, _| rng.sample(StandardNormal));
        let g = &projector * r;
        let g_norm = g.norm();
        let coords = if n == dd || g_norm <= 1e-12 {
            dual.coords().clone()
        } else {
            let t: f64 = rng.random_range(0.05..2.0);
            dual.coords() + g * (t * dual_norm / g_norm)
        };
        let perturbed = Frame::from_coords(&dual, &coords, dual.weights().to_vec(), dual.convention())?;
        max_residual = max_residual.max(is_dual_pair(frame, &perturbed)?.residual);
        min_relative_eigs.push(min_element_eigenvalue(&perturbed).1);
    }
    Ok(AffineSweep {
        freedom: (n - dd) * dd,
        min_relative_eigs,
        max_residual,
    })
}

/// `Σ_α w_α E(α) ⊗ F(α)^T` for explicit operator lists (no duality needed).
pub fn choi_of_families(frame: &[HermitianOp], dual: &[HermitianOp], weights: &[f64]) -> Result<ChoiMatrix> {
    let d = frame.first().ok_or(QframeError::Empty("operator family"))?.dim();
    if frame.len() != dual.len() || frame.len() != weights.len() {
        return Err(QframeError::LengthMismatch {
            context: "operator families",
            expected: frame.len(),
            found: dual.len().min(weights.len()),
        });
    }
    let mut matrix = DMatrix::<Complex64>::zeros(d * d, d * d);
    for ((f, e), w) in frame.iter().zip(dual).zip(weights) {
        if f.dim() != d || e.dim() != d {
            return Err(QframeError::DimensionMismatch {
                expected: d,
                found: if f.dim() != d { f.dim() } else { e.dim() },
            });
        }
        matrix += kron(e.as_matrix(), &f.as_matrix().transpose()) * Complex64::new(*w, 0.0);
    }
    ChoiMatrix::new(d, matrix)
}

//! Frames for `Herm(C^d)` over a finite, weighted label set.
//!
//! A [`Frame`] is a list of Hermitian operators `F(α)` with positive
//! weights `w_α` whose frame operator `S(A) = Σ_α w_α ⟨F(α),A⟩ F(α)` is
//! invertible. Frame representations send `A` to the real function
//! `α ↦ ⟨F(α),A⟩`; a dual frame `E` reconstructs `A = Σ_α w_α ⟨F(α),A⟩ E(α)`.
//!
//! Internally every element is stored together with its coordinates in the
//! orthonormal generalized Gell-Mann basis, so frame operators and duals are
//! plain real linear algebra of size `d² × d²`.

mod builders;
mod covariance;

pub use builders::{
    herm_basis_frame, leonhardt_frame, closed_form_dual, closed_form_dual_for, random_frame, random_frame_with,
    wootters_frame, ClosedFormDual,
};
pub use covariance::{covariance_check, displacement_covariance, CovarianceReport, DisplacementMatch};

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{QframeError, Result};
use crate::operator_space::{coords_ggm, symmetric_eigenvalues, synthesize_ggm, HermitianOp, PSD_TOL};

/// Residual threshold for the dual-frame reconstruction identity.
pub const DUALITY_TOL: f64 = 1e-10;
/// Relative smallest frame-operator eigenvalue below which a family does not span.
pub const SPAN_TOL: f64 = 1e-12;

/// Opaque phase-space label, e.g. `[q, p]` for lattice frames.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub Vec<i64>);

impl Label {
    pub fn pair(q: i64, p: i64) -> Self {
        Self(vec![q, p])
    }

    pub fn as_pair(&self) -> Option<(i64, i64)> {
        match self.0.as_slice() {
            [q, p] => Some((*q, *p)),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Wootters,
    Leonhardt,
    Custom,
}

impl FrameKind {
    pub fn name(self) -> &'static str {
        match self {
            FrameKind::Wootters => "wootters",
            FrameKind::Leonhardt => "leonhardt",
            FrameKind::Custom => "custom",
        }
    }
}

/// Normalization convention of a frame's elements and weights.
///
/// * `Raw`: constants as constructed.
/// * `StateNormalized`: one global scale so that `Σ_α w_α F(α) = I`; state
///   representations then integrate to one.
/// * `Standard`: unit-trace elements with the uniform weight that makes
///   `Σ_α w_α F(α) = I`; effects represented through the frame then sum to
///   one pointwise as well.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    Raw,
    StateNormalized,
    Standard,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Raw => "raw",
            Convention::StateNormalized => "state_normalized",
            Convention::Standard => "standard",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = QframeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Convention::Raw),
            "state_normalized" => Ok(Convention::StateNormalized),
            "standard" => Ok(Convention::Standard),
            other => Err(QframeError::Convention(format!("unknown convention `{other}`"))),
        }
    }
}

/// A frame for `Herm(C^d)`.
#[derive(Clone, Debug)]
pub struct Frame {
    dim: usize,
    labels: Vec<Label>,
    elements: Vec<HermitianOp>,
    weights: Vec<f64>,
    kind: FrameKind,
    convention: Convention,
    /// Row `α` holds the basis coordinates of `F(α)`.
    coords: DMatrix<f64>,
    id: String,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.labels == other.labels
            && self.weights == other.weights
            && self.elements == other.elements
            && self.kind == other.kind
            && self.convention == other.convention
    }
}

impl Frame {
    /// Validates lengths, weights, dimensions and the spanning property.
    pub fn new(
        dim: usize,
        labels: Vec<Label>,
        elements: Vec<HermitianOp>,
        weights: Vec<f64>,
        kind: FrameKind,
        convention: Convention,
    ) -> Result<Self> {
        let frame = Self::assemble(dim, labels, elements, weights, kind, convention)?;
        let eig = symmetric_eigenvalues(&frame.operator_matrix());
        let (lo, hi) = (eig[0], eig[eig.len() - 1]);
        if !(hi > 0.0) || lo <= SPAN_TOL * hi {
            return Err(QframeError::NotAFrame(format!(
                "frame operator is singular (eigenvalues {lo:e} .. {hi:e})"
            )));
        }
        Ok(frame)
    }

    /// Builds the structure without the spanning check.
    fn assemble(
        dim: usize,
        labels: Vec<Label>,
        elements: Vec<HermitianOp>,
        weights: Vec<f64>,
        kind: FrameKind,
        convention: Convention,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(QframeError::InvalidDimension {
                dim,
                reason: "frames need d >= 2".into(),
            });
        }
        let n = elements.len();
        if labels.len() != n {
            return Err(QframeError::LengthMismatch {
                context: "frame labels",
                expected: n,
                found: labels.len(),
            });
        }
        if weights.len() != n {
            return Err(QframeError::LengthMismatch {
                context: "frame weights",
                expected: n,
                found: weights.len(),
            });
        }
        if n < dim * dim {
            return Err(QframeError::NotAFrame(format!(
                "{n} elements cannot span the {}-dimensional operator space",
                dim * dim
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(QframeError::NotAFrame(format!("weight {w} is not positive and finite")));
        }
        let mut coords = DMatrix::zeros(n, dim * dim);
        for (a, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(QframeError::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            coords.set_row(a, &coords_ggm(e).transpose());
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(QframeError::NonFinite("frame elements"));
        }
        let id = fingerprint(dim, &labels, &weights, &elements);
        Ok(Self {
            dim,
            labels,
            elements,
            weights,
            kind,
            convention,
            coords,
            id,
        })
    }

    /// Frame from basis coordinates (one row per element).
    pub(crate) fn from_coords(
        template: &Frame,
        coords: &DMatrix<f64>,
        weights: Vec<f64>,
        convention: Convention,
    ) -> Result<Self> {
        let elements = coords
            .row_iter()
            .map(|r| synthesize_ggm(template.dim, &r.transpose()))
            .collect();
        Self::new(
            template.dim,
            template.labels.clone(),
            elements,
            weights,
            template.kind,
            convention,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn elements(&self) -> &[HermitianOp] {
        &self.elements
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Content fingerprint; representations carry it to identify their frame.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Basis coordinates of all elements, one row per label.
    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn label_index(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `Σ_α w_α F(α)`.
    pub fn weighted_sum(&self) -> HermitianOp {
        let mut acc = HermitianOp::zeros(self.dim);
        for (w, e) in self.weights.iter().zip(&self.elements) {
            acc.axpy(*w, e);
        }
        acc
    }

    /// Copy with one element replaced; the result must still span.
    pub fn with_element(&self, index: usize, element: HermitianOp) -> Result<Self> {
        let mut elements = self.elements.clone();
        if index >= elements.len() {
            return Err(QframeError::IndexOutOfRange {
                index,
                len: elements.len(),
            });
        }
        elements[index] = element;
        Self::new(
            self.dim,
            self.labels.clone(),
            elements,
            self.weights.clone(),
            FrameKind::Custom,
            self.convention,
        )
    }

    fn operator_matrix(&self) -> DMatrix<f64> {
        let w = DMatrix::from_diagonal(&DVector::from_column_slice(&self.weights));
        self.coords.transpose() * w * &self.coords
    }
}

fn fingerprint(dim: usize, labels: &[Label], weights: &[f64], elements: &[HermitianOp]) -> String {
    let mut h = Sha256::new();
    h.update((dim as u64).to_le_bytes());
    for l in labels {
        h.update((l.0.len() as u64).to_le_bytes());
        for x in &l.0 {
            h.update(x.to_le_bytes());
        }
    }
    for w in weights {
        h.update(w.to_bits().to_le_bytes());
    }
    for e in elements {
        for z in e.as_matrix().iter() {
            h.update(z.re.to_bits().to_le_bytes());
            h.update(z.im.to_bits().to_le_bytes());
        }
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Real-linear map on `Herm(C^d)` in basis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: DMatrix<f64>,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(QframeError::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: DMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, a: &HermitianOp) -> Result<HermitianOp> {
        if a.dim() != self.dim {
            return Err(QframeError::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        Ok(synthesize_ggm(self.dim, &(&self.matrix * coords_ggm(a))))
    }

    /// Adjoint with respect to the Hilbert–Schmidt inner product.
    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.transpose(),
        }
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.matrix)
    }
}

/// Real function on a frame's label set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFunction {
    pub frame_id: String,
    pub values: Vec<f64>,
}

impl RepFunction {
    pub fn new(frame_id: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(QframeError::NonFinite("representation values"));
        }
        Ok(Self {
            frame_id: frame_id.into(),
            values,
        })
    }

    pub fn zeros(frame: &Frame) -> Self {
        Self {
            frame_id: frame.id().to_owned(),
            values: vec![0.0; frame.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            frame_id: self.frame_id.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `Σ_α w_α f(α)`.
    pub fn weighted_sum(&self, weights: &[f64]) -> f64 {
        self.values.iter().zip(weights).map(|(v, w)| v * w).sum()
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `S(A) = Σ_α w_α ⟨F(α),A⟩ F(α)`.
pub fn frame_operator(frame: &Frame) -> Superoperator {
    Superoperator {
        dim: frame.dim,
        matrix: frame.operator_matrix(),
    }
}

/// Optimal frame bounds `(λ_min(S), λ_max(S))`.
pub fn frame_bounds(frame: &Frame) -> Result<(f64, f64)> {
    let eig = frame_operator(frame).eigenvalues();
    let (a, b) = (eig[0], eig[eig.len() - 1]);
    if !(b > 0.0) || a <= SPAN_TOL * b {
        return Err(QframeError::NotAFrame(format!("frame operator is singular (λ_min = {a:e})")));
    }
    Ok((a, b))
}

fn inverse_frame_operator(frame: &Frame) -> Result<DMatrix<f64>> {
    frame
        .operator_matrix()
        .cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| QframeError::NotAFrame("frame operator is not positive definite".into()))
}

/// Canonical dual `E(α) = S^{-1} F(α)`, the minimum-norm dual.
pub fn canonical_dual(frame: &Frame) -> Result<Frame> {
    let s_inv = inverse_frame_operator(frame)?;
    let coords = &frame.coords * s_inv;
    Frame::from_coords(frame, &coords, frame.weights.clone(), frame.convention)
}

/// Dual whose elements all have unit trace, so effect representations through
/// it sum to one pointwise.
///
/// Requires `Σ_α w_α F(α) = I`; the result is the canonical dual shifted
/// along the identity, `S^{-1}F(α) + (1 - tr S^{-1}F(α)) I/d`. For frames
/// whose canonical dual already has unit traces the two coincide.
pub fn unit_trace_dual(frame: &Frame) -> Result<Frame> {
    let d = frame.dim;
    let deviation = frame.weighted_sum().max_abs_diff(&HermitianOp::identity(d));
    if deviation > DUALITY_TOL {
        return Err(QframeError::Convention(format!(
            "unit-trace dual needs Σ w F = I (deviation {deviation:e})"
        )));
    }
    let s_inv = inverse_frame_operator(frame)?;
    let mut coords = &frame.coords * s_inv;
    let sqrt_d = (d as f64).sqrt();
    for mut row in coords.row_iter_mut() {
        // coordinate 0 is tr(E)/√d; I/d has coordinate 1/√d there and zero elsewhere
        let trace = row[0] * sqrt_d;
        row[0] += (1.0 - trace) / sqrt_d;
    }
    Frame::from_coords(frame, &coords, frame.weights.clone(), frame.convention)
}

/// Result of a duality test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityCheck {
    pub is_dual: bool,
    /// `max_i ‖Σ_α w_α ⟨F(α),B_i⟩ E(α) - B_i‖_HS` over the orthonormal basis.
    pub residual: f64,
}

fn check_compatible(frame: &Frame, dual: &Frame) -> Result<()> {
    if frame.dim != dual.dim {
        return Err(QframeError::DimensionMismatch {
            expected: frame.dim,
            found: dual.dim,
        });
    }
    if frame.labels != dual.labels {
        return Err(QframeError::LabelMismatch("frames are indexed by different label sets".into()));
    }
    if frame.weights.iter().zip(&dual.weights).any(|(a, b)| (a - b).abs() > 1e-14 * a.abs().max(1.0)) {
        return Err(QframeError::LabelMismatch("frames carry different weights".into()));
    }
    Ok(())
}

/// Matrix of `A ↦ Σ_α w_α ⟨F(α),A⟩ E(α)` in basis coordinates.
pub(crate) fn synthesis_matrix(frame: &Frame, dual: &Frame) -> DMatrix<f64> {
    let w = DMatrix::from_diagonal(&DVector::from_column_slice(&frame.weights));
    dual.coords.transpose() * w * &frame.coords
}

pub fn is_dual_pair(frame: &Frame, dual: &Frame) -> Result<DualityCheck> {
    check_compatible(frame, dual)?;
    let m = synthesis_matrix(frame, dual) - DMatrix::<f64>::identity(frame.dim * frame.dim, frame.dim * frame.dim);
    let residual = m.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(DualityCheck {
        is_dual: residual <= DUALITY_TOL,
        residual,
    })
}

/// `A(α) = ⟨F(α),A⟩`.
pub fn represent(frame: &Frame, a: &HermitianOp) -> Result<RepFunction> {
    if a.dim() != frame.dim {
        return Err(QframeError::DimensionMismatch {
            expected: frame.dim,
            found: a.dim(),
        });
    }
    let values = &frame.coords * coords_ggm(a);
    RepFunction::new(frame.id.clone(), values.iter().copied().collect())
}

/// `Σ_α w_α rep(α) E(α)`.
pub fn reconstruct(frame: &Frame, rep: &RepFunction) -> Result<HermitianOp> {
    if rep.len() != frame.len() {
        return Err(QframeError::LengthMismatch {
            context: "representation",
            expected: frame.len(),
            found: rep.len(),
        });
    }
    let weighted = DVector::from_iterator(rep.len(), rep.values.iter().zip(&frame.weights).map(|(v, w)| v * w));
    Ok(synthesize_ggm(frame.dim, &(frame.coords.transpose() * weighted)))
}

/// True iff every element is positive semidefinite within `1e-10`.
pub fn is_positive_frame(frame: &Frame) -> bool {
    frame.elements.iter().all(|e| e.min_eigenvalue() >= -PSD_TOL)
}

/// Rescales a frame to the requested [`Convention`].
pub fn renormalize(frame: &Frame, convention: Convention) -> Result<Frame> {
    let d = frame.dim;
    let proportional_to_identity = |op: &HermitianOp| -> Result<f64> {
        let c = op.trace() / d as f64;
        let deviation = op.max_abs_diff(&HermitianOp::identity(d).scale(c));
        if deviation > DUALITY_TOL * c.abs().max(1.0) || c <= 0.0 {
            return Err(QframeError::Convention(format!(
                "Σ w F is not a positive multiple of the identity (deviation {deviation:e})"
            )));
        }
        Ok(c)
    };
    match convention {
        Convention::Raw => Ok(frame.clone()),
        Convention::StateNormalized => {
            let c = proportional_to_identity(&frame.weighted_sum())?;
            let elements = frame.elements.iter().map(|e| e.scale(1.0 / c)).collect();
            Frame::new(d, frame.labels.clone(), elements, frame.weights.clone(), frame.kind, convention)
        }
        Convention::Standard => {
            let traces: Vec<f64> = frame.elements.iter().map(HermitianOp::trace).collect();
            let t = traces[0];
            let spread = traces.iter().map(|x| (x - t).abs()).fold(0.0, f64::max);
            if !(t > 0.0) || spread > 1e-12 * t.abs().max(1.0) {
                return Err(QframeError::Convention(format!(
                    "standard convention needs equal positive element traces (found {:.3e} .. {:.3e})",
                    traces.iter().copied().fold(f64::INFINITY, f64::min),
                    traces.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                )));
            }
            let elements: Vec<HermitianOp> = frame.elements.iter().map(|e| e.scale(1.0 / t)).collect();
            let mut sum = HermitianOp::zeros(d);
            for e in &elements {
                sum.axpy(1.0, e);
            }
            let c = proportional_to_identity(&sum)?;
            let weights = vec![1.0 / c; elements.len()];
            Frame::new(d, frame.labels.clone(), elements, weights, frame.kind, convention)
        }
    }
}

/// Frame of a linear, invertible representation `A ↦ W·coords(A)`.
///
/// Row `α` of `w` is a linear functional on `Herm(C^d)`; by the Riesz
/// representation it is `⟨F(α), ·⟩` for the operator with those coordinates.
/// The result is a frame exactly when `w` has full column rank.
pub fn frame_of_linear_map(dim: usize, w: &DMatrix<f64>, labels: Option<Vec<Label>>) -> Result<Frame> {
    if w.ncols() != dim * dim {
        return Err(QframeError::DimensionMismatch {
            expected: dim * dim,
            found: w.ncols(),
        });
    }
    let labels = labels.unwrap_or_else(|| (0..w.nrows() as i64).map(|i| Label(vec![i])).collect());
    let elements = w.row_iter().map(|r| synthesize_ggm(dim, &r.transpose())).collect();
    Frame::new(dim, labels, elements, vec![1.0; w.nrows()], FrameKind::Custom, Convention::Raw)
}

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::{frame_bounds, is_dual_pair, synthesis_matrix, Convention, Frame, FrameKind, Label};
use crate::error::{QframeError, Result};
use crate::operator_space::{
    herm_basis, random_hermitian, random_unit_vector, root_of_unity, seeded_rng, ComplexMatrix, HermitianOp,
};

const SPAN_ATTEMPTS: usize = 16;
// Draws with a worse frame-operator condition number are redrawn so that
// canonical duals stay inside the 1e-10 duality tolerance.
const MAX_CONDITION: f64 = 1e4;

/// `phase · X^a Z^b P`, built entrywise: it maps `φ_k` to `ω^{-bk} φ_{a-k}`.
fn displaced_parity(d: usize, a: i64, b: i64, phase: Complex64) -> ComplexMatrix {
    let di = d as i64;
    let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for k in 0..di {
        let row = (a - k).rem_euclid(di) as usize;
        m[(row, k as usize)] = root_of_unity(-b * k, di) * phase;
    }
    ComplexMatrix::new(m).expect("square by construction")
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

fn wootters_core(d: usize, q: i64, p: i64) -> ComplexMatrix {
    displaced_parity(d, 2 * q, 2 * p, root_of_unity(2 * q * p, d as i64))
}

fn leonhardt_core(d: usize, q: i64, p: i64) -> ComplexMatrix {
    displaced_parity(d, q, p, root_of_unity(q * p, 2 * d as i64))
}

fn lattice(n: usize) -> impl Iterator<Item = (i64, i64)> {
    let n = n as i64;
    (0..n).flat_map(move |q| (0..n).map(move |p| (q, p)))
}

fn lattice_frame(
    d: usize,
    side: usize,
    kind: FrameKind,
    scale: f64,
    core: fn(usize, i64, i64) -> ComplexMatrix,
) -> Result<Frame> {
    let mut labels = Vec::with_capacity(side * side);
    let mut elements = Vec::with_capacity(side * side);
    for (q, p) in lattice(side) {
        labels.push(Label::pair(q, p));
        let m = core(d, q, p).scale(Complex64::new(scale, 0.0));
        elements.push(HermitianOp::new(m)?);
    }
    let n = elements.len();
    Frame::new(d, labels, elements, vec![1.0; n], kind, Convention::Raw)
}

fn check_wootters_dim(d: usize) -> Result<()> {
    if d == 2 {
        return Err(QframeError::UnsupportedDimension {
            kind: "wootters",
            dim: d,
            reason: "the exponents 2q and 2p vanish mod 2, so every element is a multiple of P and the family does not span"
                .into(),
        });
    }
    if !is_prime(d) {
        return Err(QframeError::UnsupportedDimension {
            kind: "wootters",
            dim: d,
            reason: "d must be an odd prime".into(),
        });
    }
    Ok(())
}

fn check_leonhardt_dim(d: usize) -> Result<()> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(QframeError::UnsupportedDimension {
            kind: "leonhardt",
            dim: d,
            reason: "d must be even".into(),
        });
    }
    Ok(())
}

/// Wootters phase-point frame on `Z_d × Z_d`:
/// `F(q,p) = d^{-2} X^{2q} Z^{2p} P e^{4πi qp/d}` for odd prime `d`.
pub fn wootters_frame(d: usize) -> Result<Frame> {
    check_wootters_dim(d)?;
    lattice_frame(d, d, FrameKind::Wootters, 1.0 / (d * d) as f64, wootters_core)
}

/// Leonhardt frame on `Z_{2d} × Z_{2d}`:
/// `F(q,p) = (4d²)^{-1} X^q Z^p P e^{iπ qp/d}` for even `d`.
pub fn leonhardt_frame(d: usize) -> Result<Frame> {
    check_leonhardt_dim(d)?;
    lattice_frame(d, 2 * d, FrameKind::Leonhardt, 1.0 / (4 * d * d) as f64, leonhardt_core)
}

/// The orthonormal basis of [`herm_basis`] as a (Parseval) frame.
pub fn herm_basis_frame(d: usize) -> Result<Frame> {
    let elements = herm_basis(d)?;
    let n = elements.len();
    let labels = (0..n as i64).map(|i| Label(vec![i])).collect();
    Frame::new(d, labels, elements, vec![1.0; n], FrameKind::Custom, Convention::Raw)
}

/// Published closed-form dual together with the global scalar that makes it
/// an exact dual of its frame.
#[derive(Clone, Debug)]
pub struct ClosedFormDual {
    pub dual: Frame,
    /// Factor applied to the closed-form elements.
    pub scalar: f64,
    pub residual: f64,
}

/// Closed-form dual of the raw Wootters or Leonhardt frame.
///
/// Wootters: `E(q,p) = d^{-1} X^{2q} Z^{2p} P e^{4πi qp/d}`;
/// Leonhardt: `E(q,p) = (2d)^{-1} X^q Z^p P e^{iπ qp/d}`.
pub fn closed_form_dual(kind: FrameKind, d: usize) -> Result<ClosedFormDual> {
    let frame = match kind {
        FrameKind::Wootters => wootters_frame(d)?,
        FrameKind::Leonhardt => leonhardt_frame(d)?,
        FrameKind::Custom => {
            return Err(QframeError::Precondition("closed-form duals exist only for wootters and leonhardt".into()))
        }
    };
    closed_form_dual_for(&frame)
}

/// Closed-form dual fitted against an existing Wootters or Leonhardt frame,
/// whatever its convention.
///
/// The scalar `c` minimizes `‖c·M - I‖_F` where `M` is the synthesis map of
/// the unscaled closed form, i.e. `c = tr(M) / ‖M‖_F²`.
pub fn closed_form_dual_for(frame: &Frame) -> Result<ClosedFormDual> {
    let d = frame.dim();
    let (prefactor, core): (f64, fn(usize, i64, i64) -> ComplexMatrix) = match frame.kind() {
        FrameKind::Wootters => {
            check_wootters_dim(d)?;
            (1.0 / d as f64, wootters_core)
        }
        FrameKind::Leonhardt => {
            check_leonhardt_dim(d)?;
            (1.0 / (2 * d) as f64, leonhardt_core)
        }
        FrameKind::Custom => {
            return Err(QframeError::Precondition("closed-form duals exist only for wootters and leonhardt".into()))
        }
    };
    let elements = frame
        .labels()
        .iter()
        .map(|l| {
            let (q, p) = l
                .as_pair()
                .ok_or_else(|| QframeError::LabelMismatch(format!("label {l} is not a lattice pair")))?;
            HermitianOp::new(core(d, q, p).scale(Complex64::new(prefactor, 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let unscaled = Frame::new(
        d,
        frame.labels().to_vec(),
        elements,
        frame.weights().to_vec(),
        frame.kind(),
        frame.convention(),
    )?;
    let m = synthesis_matrix(frame, &unscaled);
    let scalar = m.trace() / m.norm_squared();
    let dual = Frame::new(
        d,
        unscaled.labels().to_vec(),
        unscaled.elements().iter().map(|e| e.scale(scalar)).collect(),
        unscaled.weights().to_vec(),
        unscaled.kind(),
        unscaled.convention(),
    )?;
    let check = is_dual_pair(frame, &dual)?;
    if !check.is_dual {
        return Err(QframeError::NotDual { residual: check.residual });
    }
    Ok(ClosedFormDual {
        dual,
        scalar,
        residual: check.residual,
    })
}

/// Random spanning frame of `n` elements; with `positive`, every element is a
/// rank-one projector scaled by a factor in `[0.5, 1.5)`.
pub fn random_frame_with<R: Rng + ?Sized>(d: usize, n: usize, positive: bool, rng: &mut R) -> Result<Frame> {
    if d < 2 {
        return Err(QframeError::InvalidDimension {
            dim: d,
            reason: "frames need d >= 2".into(),
        });
    }
    if n < d * d {
        return Err(QframeError::NotAFrame(format!("{n} elements cannot span dimension {}", d * d)));
    }
    for _ in 0..SPAN_ATTEMPTS {
        let elements: Vec<HermitianOp> = (0..n)
            .map(|_| {
                if positive {
                    let v = random_unit_vector(d, rng);
                    let s: f64 = rng.random_range(0.5..1.5);
                    HermitianOp::projector(&v).expect("unit vector").scale(s)
                } else {
                    random_hermitian(d, rng)
                }
            })
            .collect();
        let labels = (0..n as i64).map(|i| Label(vec![i])).collect();
        match Frame::new(d, labels, elements, vec![1.0; n], FrameKind::Custom, Convention::Raw) {
            Ok(f) => {
                let (lo, hi) = frame_bounds(&f)?;
                if hi / lo <= MAX_CONDITION {
                    return Ok(f);
                }
            }
            Err(QframeError::NotAFrame(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(QframeError::SpanFailure(SPAN_ATTEMPTS))
}

pub fn random_frame(d: usize, n: usize, seed: u64, positive: bool) -> Result<Frame> {
    random_frame_with(d, n, positive, &mut seeded_rng(seed))
}

use std::collections::HashMap;

use super::{Frame, DUALITY_TOL};
use crate::error::{QframeError, Result};
use crate::operator_space::{generators, HermitianOp};

/// Lattice translation matching one displacement `X^a Z^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementMatch {
    pub displacement: (usize, usize),
    /// Best translation `(s, t)`, present when its residual is within tolerance.
    pub translation: Option<(i64, i64)>,
    /// Smallest worst-case residual over all candidate translations.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceReport {
    pub covariant: bool,
    pub matches: Vec<DisplacementMatch>,
    pub worst_residual: f64,
}

/// Lattice side and the index of each `(q, p)` label.
type LatticeIndex = (i64, HashMap<(i64, i64), usize>);

/// Labels as a full `Z_n × Z_n` lattice, indexed by position.
fn lattice_index(frame: &Frame) -> Result<LatticeIndex> {
    let n = (frame.len() as f64).sqrt().round() as i64;
    if (n * n) as usize != frame.len() {
        return Err(QframeError::LabelMismatch(format!("{} labels do not form a square lattice", frame.len())));
    }
    let mut index = HashMap::with_capacity(frame.len());
    for (i, l) in frame.labels().iter().enumerate() {
        let (q, p) = l
            .as_pair()
            .ok_or_else(|| QframeError::LabelMismatch(format!("label {l} is not a lattice pair")))?;
        if !(0..n).contains(&q) || !(0..n).contains(&p) || index.insert((q, p), i).is_some() {
            return Err(QframeError::LabelMismatch(format!("label {l} is not a distinct point of Z_{n} x Z_{n}")));
        }
    }
    Ok((n, index))
}

/// Searches lattice translations `(q,p) ↦ (q+s, p+t)` that realize
/// conjugation by `X^a Z^b` on the frame elements.
pub fn displacement_covariance(frame: &Frame, a: usize, b: usize) -> Result<DisplacementMatch> {
    let (n, index) = lattice_index(frame)?;
    let g = generators(frame.dim())?;
    let u = g.x.pow(a).mul(&g.z.pow(b));
    let moved: Vec<HermitianOp> = frame
        .elements()
        .iter()
        .map(|e| e.conjugate_by(&u))
        .collect::<Result<_>>()?;
    let mut best: Option<((i64, i64), f64)> = None;
    for s in 0..n {
        for t in 0..n {
            let mut worst = 0.0f64;
            for (i, l) in frame.labels().iter().enumerate() {
                let (q, p) = l.as_pair().expect("checked by lattice_index");
                let j = index[&((q + s).rem_euclid(n), (p + t).rem_euclid(n))];
                let r = moved[i].sub(&frame.elements()[j])?.hs_norm();
                worst = worst.max(r);
                if best.is_some_and(|(_, b)| worst >= b) {
                    break;
                }
            }
            if best.is_none_or(|(_, b)| worst < b) {
                best = Some(((s, t), worst));
            }
        }
    }
    let (translation, residual) = best.expect("lattice is non-empty");
    Ok(DisplacementMatch {
        displacement: (a, b),
        translation: (residual <= DUALITY_TOL).then_some(translation),
        residual,
    })
}

/// Checks every displacement `X^a Z^b`, `a, b ∈ Z_d`, against lattice
/// translations of the frame's labels.
pub fn covariance_check(frame: &Frame) -> Result<CovarianceReport> {
    let d = frame.dim();
    let mut matches = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            matches.push(displacement_covariance(frame, a, b)?);
        }
    }
    let worst_residual = matches.iter().map(|m| m.residual).fold(0.0, f64::max);
    Ok(CovarianceReport {
        covariant: matches.iter().all(|m| m.translation.is_some()),
        matches,
        worst_residual,
    })
}

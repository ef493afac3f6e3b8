//! JSON and CSV file formats.
//!
//! Floats are written as the shortest decimal that parses back to the same
//! double, so every artifact reloads bit-exactly.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{QframeError, Result};
use crate::frames::{Convention, Frame, FrameKind, Label, RepFunction};
use crate::operator_space::{validate_povm, ComplexMatrix, HermitianOp, Povm, HERMITICITY_TOL};
use crate::quasiprob::{CondQuasiProb, Via};

/// `{ "dim": d, "re": [[...]], "im": [[...]] }`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl OperatorJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        let a = m.as_matrix();
        Self {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| a[(i, j)].re).collect()).collect(),
            im: (0..d).map(|i| (0..d).map(|j| a[(i, j)].im).collect()).collect(),
        }
    }

    pub fn from_op(op: &HermitianOp) -> Self {
        Self::from_matrix(op.matrix())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let m = ComplexMatrix::from_parts(&self.re, &self.im)?;
        if m.dim() != self.dim {
            return Err(QframeError::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        Ok(m)
    }

    /// Hermitian operator, accepting deviations up to `tol`.
    pub fn to_hermitian_with(&self, tol: f64) -> Result<HermitianOp> {
        let m = self.to_matrix()?;
        let deviation = m.hermiticity_deviation();
        if deviation > tol {
            return Err(QframeError::NotHermitian { deviation });
        }
        Ok(HermitianOp::hermitian_part(&m))
    }

    pub fn to_hermitian(&self) -> Result<HermitianOp> {
        self.to_hermitian_with(HERMITICITY_TOL)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameJson {
    pub dim: usize,
    pub labels: Vec<Label>,
    pub weights: Vec<f64>,
    pub elements: Vec<OperatorJson>,
    pub kind: FrameKind,
    pub convention: Convention,
}

impl FrameJson {
    pub fn from_frame(frame: &Frame) -> Self {
        Self {
            dim: frame.dim(),
            labels: frame.labels().to_vec(),
            weights: frame.weights().to_vec(),
            elements: frame.elements().iter().map(OperatorJson::from_op).collect(),
            kind: frame.kind(),
            convention: frame.convention(),
        }
    }

    pub fn to_frame_with(&self, tol: f64) -> Result<Frame> {
        let elements = self
            .elements
            .iter()
            .map(|e| e.to_hermitian_with(tol))
            .collect::<Result<_>>()?;
        Frame::new(
            self.dim,
            self.labels.clone(),
            elements,
            self.weights.clone(),
            self.kind,
            self.convention,
        )
    }

    pub fn to_frame(&self) -> Result<Frame> {
        self.to_frame_with(HERMITICITY_TOL)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmJson {
    pub dim: usize,
    pub effects: Vec<OperatorJson>,
}

impl PovmJson {
    pub fn from_povm(povm: &Povm) -> Self {
        Self {
            dim: povm.dim(),
            effects: povm.effects().iter().map(OperatorJson::from_op).collect(),
        }
    }

    pub fn to_povm_with(&self, tol: f64) -> Result<Povm> {
        let effects: Vec<HermitianOp> = self
            .effects
            .iter()
            .map(|e| e.to_hermitian_with(tol))
            .collect::<Result<_>>()?;
        if let Some(e) = effects.iter().find(|e| e.dim() != self.dim) {
            return Err(QframeError::DimensionMismatch {
                expected: self.dim,
                found: e.dim(),
            });
        }
        validate_povm(effects)
    }
}

/// The frame a representation refers to: its id or the full frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameRef {
    Id(String),
    Frame(Box<FrameJson>),
}

/// `{ "frame": <frame-json or id>, "values": [...], "via": "F"|"E" }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    pub frame: FrameRef,
    pub values: Vec<f64>,
    pub via: Via,
}

impl RepJson {
    pub fn new(rep: &RepFunction, via: Via) -> Self {
        Self {
            frame: FrameRef::Id(rep.frame_id.clone()),
            values: rep.values.clone(),
            via,
        }
    }

    pub fn embedded(rep: &RepFunction, frame: &Frame, via: Via) -> Self {
        Self {
            frame: FrameRef::Frame(Box::new(FrameJson::from_frame(frame))),
            values: rep.values.clone(),
            via,
        }
    }

    /// The representation together with its embedded frame, if any.
    pub fn to_rep(&self) -> Result<(RepFunction, Option<Frame>)> {
        match &self.frame {
            FrameRef::Id(id) => Ok((RepFunction::new(id.clone(), self.values.clone())?, None)),
            FrameRef::Frame(f) => {
                let frame = f.to_frame()?;
                if frame.len() != self.values.len() {
                    return Err(QframeError::LengthMismatch {
                        context: "representation",
                        expected: frame.len(),
                        found: self.values.len(),
                    });
                }
                Ok((RepFunction::new(frame.id().to_owned(), self.values.clone())?, Some(frame)))
            }
        }
    }
}

pub fn cond_to_json(m: &CondQuasiProb) -> Vec<RepJson> {
    m.reps.iter().map(|r| RepJson::new(r, m.via)).collect()
}

pub fn cond_from_json(reps: &[RepJson]) -> Result<CondQuasiProb> {
    let via = reps.first().ok_or(QframeError::Empty("effect representations"))?.via;
    if reps.iter().any(|r| r.via != via) {
        return Err(QframeError::Format("effect representations mix F and E".into()));
    }
    let reps = reps.iter().map(|r| Ok(r.to_rep()?.0)).collect::<Result<_>>()?;
    Ok(CondQuasiProb { reps, via })
}

/// Parses JSON; errors carry the origin plus serde's line and column.
pub fn from_json_str<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| QframeError::Format(format!("{origin}: {e}")))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| QframeError::Format(format!("{}: {e}", path.display())))?;
    from_json_str(&text, &path.display().to_string())
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| QframeError::Format(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json_string(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| QframeError::Format(format!("{}: {e}", path.display())))
}

pub fn read_operator(path: &Path, tol: f64) -> Result<HermitianOp> {
    read_json::<OperatorJson>(path)?.to_hermitian_with(tol)
}

pub fn read_frame(path: &Path, tol: f64) -> Result<Frame> {
    read_json::<FrameJson>(path)?.to_frame_with(tol)
}

pub fn read_povm(path: &Path, tol: f64) -> Result<Povm> {
    read_json::<PovmJson>(path)?.to_povm_with(tol)
}

/// CSV with one row per label: `q,p` columns for lattice labels, otherwise
/// one `label` column of `;`-joined components, then one column per series.
pub fn table_to_csv(labels: &[Label], headers: &[&str], columns: &[&[f64]]) -> Result<String> {
    if headers.len() != columns.len() {
        return Err(QframeError::LengthMismatch {
            context: "csv columns",
            expected: headers.len(),
            found: columns.len(),
        });
    }
    if let Some(c) = columns.iter().find(|c| c.len() != labels.len()) {
        return Err(QframeError::LengthMismatch {
            context: "csv column",
            expected: labels.len(),
            found: c.len(),
        });
    }
    let csv_err = |e: csv::Error| QframeError::Format(e.to_string());
    let lattice = labels.iter().all(|l| l.as_pair().is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = if lattice {
        vec!["q".into(), "p".into()]
    } else {
        vec!["label".into()]
    };
    header.extend(headers.iter().map(|h| h.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for (i, l) in labels.iter().enumerate() {
        let mut row: Vec<String> = match l.as_pair() {
            Some((q, p)) if lattice => vec![q.to_string(), p.to_string()],
            _ => vec![l.0.iter().map(i64::to_string).collect::<Vec<_>>().join(";")],
        };
        row.extend(columns.iter().map(|c| c[i].to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| QframeError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| QframeError::Format(e.to_string()))
}

/// [`table_to_csv`] for a single representation.
pub fn rep_to_csv(labels: &[Label], values: &[f64]) -> Result<String> {
    table_to_csv(labels, &["value"], &[values])
}

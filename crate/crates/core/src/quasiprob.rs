//! Deformed-probability and quasi-probability formulations of quantum
//! mechanics over a frame `F` and a dual `E`.
//!
//! States are always represented through `F`. Effects are represented either
//! through `F` (then probabilities need the `Θ` kernel, see
//! [`deformed_prob`]) or through `E` (then the ordinary law of total
//! probability applies, see [`total_prob`]).

use serde::{Deserialize, Serialize};

use crate::error::{QframeError, Result};
use crate::frames::{is_dual_pair, represent, Frame, Label, RepFunction, DUALITY_TOL};
use crate::operator_space::{DensityOp, Povm};
use crate::star_algebra::{theta_kernel, Kernel2};

/// Tolerance for the sign and range conditions of a classical model.
pub const CLASSICAL_TOL: f64 = 1e-10;
/// Entries below this count as negative in a [`NegativityReport`].
pub const NEGATIVE_ENTRY_TOL: f64 = 1e-12;

/// Which frame an effect representation was computed through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Via {
    #[serde(rename = "F")]
    FrameF,
    #[serde(rename = "E")]
    DualE,
}

impl std::str::FromStr for Via {
    type Err = QframeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" | "frame" => Ok(Via::FrameF),
            "E" | "e" | "dual" => Ok(Via::DualE),
            other => Err(QframeError::Format(format!("unknown representation tag `{other}`"))),
        }
    }
}

/// Quasi-probability density `ρ(α) = ⟨ρ, F(α)⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiDensity {
    pub rep: RepFunction,
}

/// Conditional quasi-probabilities, one function per outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct CondQuasiProb {
    pub reps: Vec<RepFunction>,
    pub via: Via,
}

impl CondQuasiProb {
    /// `Σ_k M_k(α)` for every label.
    pub fn pointwise_sum(&self) -> Vec<f64> {
        let n = self.reps.first().map_or(0, RepFunction::len);
        (0..n).map(|a| self.reps.iter().map(|r| r.values[a]).sum()).collect()
    }
}

/// Probability from one of the representation calculi, reported unclamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probability {
    pub value: f64,
    /// Whether `value` lies in `[0, 1]` within `1e-10`.
    pub valid: bool,
}

impl Probability {
    fn new(value: f64) -> Self {
        Self {
            value,
            valid: (-CLASSICAL_TOL..=1.0 + CLASSICAL_TOL).contains(&value),
        }
    }
}

/// A frame together with a verified dual and the dual's Gram kernel.
#[derive(Clone, Debug)]
pub struct DualPair {
    frame: Frame,
    dual: Frame,
    theta: Kernel2,
    residual: f64,
}

impl DualPair {
    pub fn new(frame: Frame, dual: Frame) -> Result<Self> {
        Self::with_tolerance(frame, dual, DUALITY_TOL)
    }

    /// Accepts the pair when its duality residual is at most `tol`.
    pub fn with_tolerance(frame: Frame, dual: Frame, tol: f64) -> Result<Self> {
        let check = is_dual_pair(&frame, &dual)?;
        if check.residual > tol {
            return Err(QframeError::NotDual { residual: check.residual });
        }
        let theta = theta_kernel(&dual);
        Ok(Self {
            frame,
            dual,
            theta,
            residual: check.residual,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn dual(&self) -> &Frame {
        &self.dual
    }

    pub fn theta(&self) -> &Kernel2 {
        &self.theta
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn weights(&self) -> &[f64] {
        self.frame.weights()
    }

    fn expect_state(&self, rho: &QuasiDensity) -> Result<()> {
        expect_frame(&rho.rep, &self.frame, "state representation")
    }

    fn expect_effects(&self, m: &CondQuasiProb, via: Via) -> Result<()> {
        if m.via != via {
            return Err(QframeError::FrameMismatch(format!(
                "effect representation is via {:?}, expected {via:?}",
                m.via
            )));
        }
        let frame = match via {
            Via::FrameF => &self.frame,
            Via::DualE => &self.dual,
        };
        for r in &m.reps {
            expect_frame(r, frame, "effect representation")?;
        }
        Ok(())
    }
}

fn expect_frame(rep: &RepFunction, frame: &Frame, what: &str) -> Result<()> {
    if rep.frame_id != frame.id() {
        return Err(QframeError::FrameMismatch(format!(
            "{what} belongs to frame {}, expected {}",
            rep.frame_id,
            frame.id()
        )));
    }
    if rep.len() != frame.len() {
        return Err(QframeError::LengthMismatch {
            context: "representation",
            expected: frame.len(),
            found: rep.len(),
        });
    }
    Ok(())
}

pub fn rep_state(frame: &Frame, rho: &DensityOp) -> Result<QuasiDensity> {
    Ok(QuasiDensity {
        rep: represent(frame, rho.op())?,
    })
}

/// Represents each effect through `frame`, tagging the result with `via`.
pub fn rep_effects(frame: &Frame, povm: &Povm, via: Via) -> Result<CondQuasiProb> {
    let reps = povm
        .effects()
        .iter()
        .map(|e| represent(frame, e))
        .collect::<Result<_>>()?;
    Ok(CondQuasiProb { reps, via })
}

/// `M̃_k(α) = Σ_β w_β M_k(β) Θ(α,β)`: effect representation through `F`
/// turned into the representation through the dual behind `Θ`.
pub fn convert_effect_rep(m: &CondQuasiProb, theta: &Kernel2, weights: &[f64]) -> Result<CondQuasiProb> {
    if m.via != Via::FrameF {
        return Err(QframeError::FrameMismatch("conversion expects effects represented through F".into()));
    }
    let n = theta.len();
    if weights.len() != n {
        return Err(QframeError::LengthMismatch {
            context: "weights",
            expected: n,
            found: weights.len(),
        });
    }
    let reps = m
        .reps
        .iter()
        .map(|r| {
            if r.len() != n {
                return Err(QframeError::FrameMismatch(format!(
                    "kernel has {n} points, representation has {}",
                    r.len()
                )));
            }
            let weighted: Vec<f64> = r.values.iter().zip(weights).map(|(v, w)| v * w).collect();
            let values = (0..n)
                .map(|a| (0..n).map(|b| theta.get(a, b) * weighted[b]).sum())
                .collect();
            RepFunction::new(theta.frame_id().to_owned(), values)
        })
        .collect::<Result<_>>()?;
    Ok(CondQuasiProb { reps, via: Via::DualE })
}

/// Deformed calculus `Pr(k) = Σ_{α,β} w_α w_β ρ(α) M_k(β) ⟨E(α),E(β)⟩`.
pub fn deformed_prob(pair: &DualPair, rho: &QuasiDensity, m: &CondQuasiProb, k: usize) -> Result<Probability> {
    pair.expect_state(rho)?;
    pair.expect_effects(m, Via::FrameF)?;
    let effect = m.reps.get(k).ok_or(QframeError::IndexOutOfRange {
        index: k,
        len: m.reps.len(),
    })?;
    let w = pair.weights();
    let n = w.len();
    let mut total = 0.0;
    for a in 0..n {
        let ra = w[a] * rho.rep.values[a];
        if ra == 0.0 {
            continue;
        }
        let inner: f64 = (0..n).map(|b| w[b] * effect.values[b] * pair.theta.get(a, b)).sum();
        total += ra * inner;
    }
    Ok(Probability::new(total))
}

/// Law of total probability `Pr(k) = Σ_α w_α ρ(α) M̃_k(α)`.
pub fn total_prob(pair: &DualPair, rho: &QuasiDensity, m: &CondQuasiProb, k: usize) -> Result<Probability> {
    pair.expect_state(rho)?;
    pair.expect_effects(m, Via::DualE)?;
    let effect = m.reps.get(k).ok_or(QframeError::IndexOutOfRange {
        index: k,
        len: m.reps.len(),
    })?;
    let value = rho
        .rep
        .values
        .iter()
        .zip(&effect.values)
        .zip(pair.weights())
        .map(|((r, e), w)| w * r * e)
        .sum();
    Ok(Probability::new(value))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub min_value: f64,
    /// `Σ_α w_α max(0, -f(α))`.
    pub negative_mass: f64,
    /// Entries below `-1e-12`.
    pub count_negative: usize,
}

pub fn negativity(rep: &RepFunction, weights: &[f64]) -> NegativityReport {
    let min_value = rep.values.iter().copied().fold(f64::INFINITY, f64::min);
    let negative_mass = rep
        .values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (-v).max(0.0))
        .sum();
    let count_negative = rep.values.iter().filter(|&&v| v < -NEGATIVE_ENTRY_TOL).count();
    NegativityReport {
        min_value,
        negative_mass,
        count_negative,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A state representation takes a negative value.
    NegativeState,
    /// A state representation does not integrate to one.
    StateNormalization,
    /// An effect representation leaves `[0, 1]`.
    EffectRange,
    /// Effect representations do not sum to one at a point.
    EffectCompleteness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index into the supplied states or POVMs.
    pub item: usize,
    pub outcome: Option<usize>,
    pub label: Option<Label>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalityReport {
    pub classical_for_this_pair: bool,
    pub violations: Vec<Violation>,
}

/// Checks whether a fixed frame/dual pair yields a classical model for the
/// given states and measurements: non-negative normalized state functions,
/// effect functions in `[0, 1]` summing to one pointwise. The law of total
/// probability holds automatically for the `E`-represented effects.
pub fn classicality_check(pair: &DualPair, states: &[DensityOp], povms: &[Povm]) -> Result<ClassicalityReport> {
    classicality_check_with(pair, states, povms, CLASSICAL_TOL)
}

/// [`classicality_check`] with an explicit tolerance.
pub fn classicality_check_with(
    pair: &DualPair,
    states: &[DensityOp],
    povms: &[Povm],
    tol: f64,
) -> Result<ClassicalityReport> {
    let labels = pair.frame().labels();
    let weights = pair.weights();
    let mut violations = Vec::new();
    for (item, rho) in states.iter().enumerate() {
        let rep = rep_state(pair.frame(), rho)?.rep;
        for (a, &v) in rep.values.iter().enumerate() {
            if v < -tol {
                violations.push(Violation {
                    kind: ViolationKind::NegativeState,
                    item,
                    outcome: None,
                    label: Some(labels[a].clone()),
                    value: v,
                });
            }
        }
        let total = rep.weighted_sum(weights);
        if (total - 1.0).abs() > tol {
            violations.push(Violation {
                kind: ViolationKind::StateNormalization,
                item,
                outcome: None,
                label: None,
                value: total,
            });
        }
    }
    for (item, povm) in povms.iter().enumerate() {
        let m = rep_effects(pair.dual(), povm, Via::DualE)?;
        for (k, r) in m.reps.iter().enumerate() {
            for (a, &v) in r.values.iter().enumerate() {
                if !(-tol..=1.0 + tol).contains(&v) {
                    violations.push(Violation {
                        kind: ViolationKind::EffectRange,
                        item,
                        outcome: Some(k),
                        label: Some(labels[a].clone()),
                        value: v,
                    });
                }
            }
        }
        for (a, s) in m.pointwise_sum().into_iter().enumerate() {
            if (s - 1.0).abs() > tol {
                violations.push(Violation {
                    kind: ViolationKind::EffectCompleteness,
                    item,
                    outcome: None,
                    label: Some(labels[a].clone()),
                    value: s,
                });
            }
        }
    }
    Ok(ClassicalityReport {
        classical_for_this_pair: violations.is_empty(),
        violations,
    })
}

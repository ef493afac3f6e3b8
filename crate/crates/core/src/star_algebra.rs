//! Representation space as an algebra in its own right: the `Θ` inner
//! product, the three-point ⋆-product kernel, pure-state idempotence and the
//! validity conditions for state and effect functions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QframeError, Result};
use crate::frames::{is_dual_pair, reconstruct, represent, Frame, RepFunction};
use crate::operator_space::{random_pure_state_with, seeded_rng, HermitianOp, ComplexMatrix};
use crate::quasiprob::{CondQuasiProb, Via};

/// Largest label count for which the full ⋆ kernel is materialized.
pub const MAX_KERNEL_POINTS: usize = 256;
/// Sup-norm tolerance for `ρ ⋆ ρ = ρ`.
pub const PURITY_TOL: f64 = 1e-9;
/// Tolerance for normalization and sign conditions on representations.
pub const VALIDITY_TOL: f64 = 1e-10;
/// Haar-random pure states added to every probe set.
pub const DEFAULT_RANDOM_PROBES: usize = 200;

/// `Θ(α,β) = ⟨E(α),E(β)⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Kernel2Json", try_from = "Kernel2Json")]
pub struct Kernel2 {
    frame_id: String,
    matrix: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Kernel2Json {
    frame_id: String,
    shape: [usize; 2],
    values: Vec<f64>,
}

impl From<Kernel2> for Kernel2Json {
    fn from(k: Kernel2) -> Self {
        let n = k.len();
        Self {
            frame_id: k.frame_id,
            shape: [n, n],
            values: k.matrix.transpose().iter().copied().collect(),
        }
    }
}

impl TryFrom<Kernel2Json> for Kernel2 {
    type Error = QframeError;

    fn try_from(j: Kernel2Json) -> Result<Self> {
        let [r, c] = j.shape;
        if r != c || j.values.len() != r * c {
            return Err(QframeError::Format(format!("kernel shape {r}x{c} does not match {} values", j.values.len())));
        }
        Ok(Self {
            frame_id: j.frame_id,
            matrix: DMatrix::from_row_slice(r, c, &j.values),
        })
    }
}

impl Kernel2 {
    /// Id of the dual frame whose Gram matrix this is.
    pub fn frame_id(&self) -> &str {
        &self.frame_id
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[(a, b)]
    }
}

/// `f(α,β,γ) = ⟨F(α), E(β)E(γ)⟩`, stored row-major in `(α, β, γ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Kernel3Json", try_from = "Kernel3Json")]
pub struct Kernel3 {
    frame_id: String,
    dual_id: String,
    n: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Kernel3Json {
    frame_id: String,
    dual_id: String,
    shape: [usize; 3],
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<Kernel3> for Kernel3Json {
    fn from(k: Kernel3) -> Self {
        Self {
            frame_id: k.frame_id,
            dual_id: k.dual_id,
            shape: [k.n; 3],
            re: k.data.iter().map(|z| z.re).collect(),
            im: k.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<Kernel3Json> for Kernel3 {
    type Error = QframeError;

    fn try_from(j: Kernel3Json) -> Result<Self> {
        let [a, b, c] = j.shape;
        let len = a * b * c;
        if a != b || b != c || j.re.len() != len || j.im.len() != len {
            return Err(QframeError::Format("kernel shape does not match its data".into()));
        }
        Ok(Self {
            frame_id: j.frame_id,
            dual_id: j.dual_id,
            n: a,
            data: j.re.into_iter().zip(j.im).map(|(r, i)| Complex64::new(r, i)).collect(),
        })
    }
}

impl Kernel3 {
    pub fn frame_id(&self) -> &str {
        &self.frame_id
    }

    pub fn dual_id(&self) -> &str {
        &self.dual_id
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> Complex64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    /// `max |f(α,β,γ) - conj f(α,γ,β)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    worst = worst.max((self.get(a, b, c) - self.get(a, c, b).conj()).norm());
                }
            }
        }
        worst
    }
}

/// Complex function on a label set, such as a ⋆ product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarProduct {
    pub frame_id: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StarProduct {
    fn from_values(frame_id: String, values: &[Complex64]) -> Self {
        Self {
            frame_id,
            re: values.iter().map(|z| z.re).collect(),
            im: values.iter().map(|z| z.im).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn max_imag(&self) -> f64 {
        self.im.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Real part as a representation function.
    pub fn real_part(&self) -> RepFunction {
        RepFunction {
            frame_id: self.frame_id.clone(),
            values: self.re.clone(),
        }
    }

    /// Sup-norm distance to a complex target given by its parts.
    pub fn sup_distance(&self, re: &[f64], im: &[f64]) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .zip(re.iter().zip(im))
            .map(|((a, b), (c, d))| Complex64::new(a - c, b - d).norm())
            .fold(0.0, f64::max)
    }
}

/// Complex representation `⟨F(α), A⟩` of a possibly non-Hermitian operator.
pub fn represent_complex(frame: &Frame, a: &ComplexMatrix) -> Result<StarProduct> {
    if a.dim() != frame.dim() {
        return Err(QframeError::DimensionMismatch {
            expected: frame.dim(),
            found: a.dim(),
        });
    }
    let values: Vec<Complex64> = frame.elements().iter().map(|f| f.matrix().trace_product(a)).collect();
    Ok(StarProduct::from_values(frame.id().to_owned(), &values))
}

/// Gram matrix of the dual elements, from their orthonormal coordinates.
pub fn theta_kernel(dual: &Frame) -> Kernel2 {
    let v = dual.coords();
    let mut matrix = v * v.transpose();
    // exact symmetry; the product is symmetric up to rounding only
    matrix = (&matrix + matrix.transpose()) * 0.5;
    Kernel2 {
        frame_id: dual.id().to_owned(),
        matrix,
    }
}

fn require_dual(frame: &Frame, dual: &Frame) -> Result<()> {
    let check = is_dual_pair(frame, dual)?;
    if !check.is_dual {
        return Err(QframeError::NotDual { residual: check.residual });
    }
    Ok(())
}

/// Materializes the ⋆ kernel for a dual pair with at most
/// [`MAX_KERNEL_POINTS`] labels.
pub fn star_kernel(frame: &Frame, dual: &Frame) -> Result<Kernel3> {
    require_dual(frame, dual)?;
    let n = frame.len();
    if n > MAX_KERNEL_POINTS {
        return Err(QframeError::KernelTooLarge {
            n,
            limit: MAX_KERNEL_POINTS,
        });
    }
    let d = frame.dim();
    let dd = d * d;
    // row α holds conj(vec F(α)); for Hermitian F this gives tr(F(α) P) = row · vec(P)
    let mut lhs = DMatrix::<Complex64>::zeros(n, dd);
    for (a, f) in frame.elements().iter().enumerate() {
        let m = f.as_matrix();
        for i in 0..d {
            for j in 0..d {
                lhs[(a, i * d + j)] = m[(i, j)].conj();
            }
        }
    }
    let mut data = vec![Complex64::new(0.0, 0.0); n * n * n];
    let mut products = DMatrix::<Complex64>::zeros(dd, n);
    for b in 0..n {
        let eb = dual.elements()[b].as_matrix();
        for (c, ec) in dual.elements().iter().enumerate() {
            let p = eb * ec.as_matrix();
            for i in 0..d {
                for j in 0..d {
                    products[(i * d + j, c)] = p[(i, j)];
                }
            }
        }
        let block = &lhs * &products;
        for a in 0..n {
            for c in 0..n {
                data[(a * n + b) * n + c] = block[(a, c)];
            }
        }
    }
    Ok(Kernel3 {
        frame_id: frame.id().to_owned(),
        dual_id: dual.id().to_owned(),
        n,
        data,
    })
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(QframeError::LengthMismatch {
            context: what,
            expected,
            found,
        });
    }
    Ok(())
}

fn check_frame_id(rep: &RepFunction, id: &str) -> Result<()> {
    if rep.frame_id != id {
        return Err(QframeError::FrameMismatch(format!(
            "representation belongs to frame {}, expected {id}",
            rep.frame_id
        )));
    }
    Ok(())
}

/// `⟨A,B⟩_Θ = Σ_{α,β} w_α w_β A(α) B(β) Θ(α,β)`.
pub fn frame_ip(a: &RepFunction, b: &RepFunction, theta: &Kernel2, weights: &[f64]) -> Result<f64> {
    let n = theta.len();
    check_len("weights", n, weights.len())?;
    check_len("representation", n, a.len())?;
    check_len("representation", n, b.len())?;
    if a.frame_id != b.frame_id {
        return Err(QframeError::FrameMismatch("representations belong to different frames".into()));
    }
    let wa: Vec<f64> = a.values.iter().zip(weights).map(|(v, w)| v * w).collect();
    let mut total = 0.0;
    for (j, (bv, w)) in b.values.iter().zip(weights).enumerate() {
        let wb = bv * w;
        if wb == 0.0 {
            continue;
        }
        total += wb * (0..n).map(|i| wa[i] * theta.get(i, j)).sum::<f64>();
    }
    Ok(total)
}

/// `(A ⋆ B)(α) = Σ_{β,γ} w_β w_γ A(β) B(γ) f(α,β,γ)`.
pub fn star_product(a: &RepFunction, b: &RepFunction, f: &Kernel3, weights: &[f64]) -> Result<StarProduct> {
    let n = f.len();
    check_len("weights", n, weights.len())?;
    check_len("representation", n, a.len())?;
    check_len("representation", n, b.len())?;
    check_frame_id(a, f.frame_id())?;
    check_frame_id(b, f.frame_id())?;
    let wa: Vec<f64> = a.values.iter().zip(weights).map(|(v, w)| v * w).collect();
    let wb: Vec<f64> = b.values.iter().zip(weights).map(|(v, w)| v * w).collect();
    let values: Vec<Complex64> = (0..n)
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (y, &ay) in wa.iter().enumerate() {
                if ay == 0.0 {
                    continue;
                }
                let row = &f.data[(x * n + y) * n..(x * n + y + 1) * n];
                let inner: Complex64 = row.iter().zip(&wb).map(|(k, &bz)| k * bz).sum();
                acc += inner * ay;
            }
            acc
        })
        .collect();
    Ok(StarProduct::from_values(f.frame_id.clone(), &values))
}

/// ⋆ product without the kernel: reconstruct through the dual, multiply,
/// represent through the frame. Agrees with [`star_product`] on dual pairs.
pub fn star_product_direct(frame: &Frame, dual: &Frame, a: &RepFunction, b: &RepFunction) -> Result<StarProduct> {
    check_frame_id(a, frame.id())?;
    check_frame_id(b, frame.id())?;
    let pa = reconstruct(dual, a)?;
    let pb = reconstruct(dual, b)?;
    represent_complex(frame, &pa.matrix().mul(pb.matrix()))
}

/// True iff `‖ρ⋆ρ - ρ‖_∞ ≤ 1e-9` and `Σ w ρ = 1` within `1e-10`.
pub fn is_pure_state_rep(rho: &RepFunction, f: &Kernel3, weights: &[f64]) -> Result<bool> {
    let square = star_product(rho, rho, f, weights)?;
    let zeros = vec![0.0; rho.len()];
    let idempotent = square.sup_distance(&rho.values, &zeros) <= PURITY_TOL;
    let normalized = (rho.weighted_sum(weights) - 1.0).abs() <= VALIDITY_TOL;
    Ok(idempotent && normalized)
}

/// `ι(α) = ⟨F(α), I⟩`, the unit of the ⋆ product built on `frame`.
pub fn identity_element(frame: &Frame) -> RepFunction {
    RepFunction {
        frame_id: frame.id().to_owned(),
        values: frame.elements().iter().map(HermitianOp::trace).collect(),
    }
}

/// `⟨ρ, ρ_pure⟩_Θ ≥ -1e-10` on every probe and `Σ w ρ = 1`.
pub fn validate_state_rep(rho: &RepFunction, probes: &[RepFunction], theta: &Kernel2, weights: &[f64]) -> Result<bool> {
    if probes.is_empty() {
        return Err(QframeError::Empty("probe set"));
    }
    if (rho.weighted_sum(weights) - 1.0).abs() > VALIDITY_TOL {
        return Ok(false);
    }
    for p in probes {
        if frame_ip(rho, p, theta, weights)? < -VALIDITY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Effect functions pair non-negatively with every probe and sum to
/// `identity` pointwise. Effects through the dual use the plain weighted
/// pairing; effects through the frame use `⟨·,·⟩_Θ`, which then must be given.
pub fn validate_effect_rep(
    m: &CondQuasiProb,
    probes: &[RepFunction],
    identity: &RepFunction,
    theta: Option<&Kernel2>,
    weights: &[f64],
) -> Result<bool> {
    if probes.is_empty() {
        return Err(QframeError::Empty("probe set"));
    }
    if m.reps.is_empty() {
        return Err(QframeError::Empty("effect representations"));
    }
    for r in &m.reps {
        check_len("effect representation", identity.len(), r.len())?;
        check_frame_id(r, &identity.frame_id)?;
    }
    let complete = m
        .pointwise_sum()
        .iter()
        .zip(&identity.values)
        .all(|(s, i)| (s - i).abs() <= VALIDITY_TOL);
    if !complete {
        return Ok(false);
    }
    for r in &m.reps {
        for p in probes {
            let pairing = match (m.via, theta) {
                (Via::DualE, _) => {
                    check_len("probe", r.len(), p.len())?;
                    r.values.iter().zip(&p.values).zip(weights).map(|((a, b), w)| a * b * w).sum()
                }
                (Via::FrameF, Some(theta)) => {
                    let relabeled = RepFunction {
                        frame_id: p.frame_id.clone(),
                        values: r.values.clone(),
                    };
                    frame_ip(&relabeled, p, theta, weights)?
                }
                (Via::FrameF, None) => {
                    return Err(QframeError::Precondition("effects through the frame need the Θ kernel".into()))
                }
            };
            if pairing < -VALIDITY_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pure-state probes: eigenprojectors of `candidates` followed by
/// `random` Haar-random pure states, all represented through `frame`.
pub fn probe_states(frame: &Frame, candidates: &[HermitianOp], random: usize, seed: u64) -> Result<Vec<RepFunction>> {
    let d = frame.dim();
    let mut probes = Vec::with_capacity(candidates.len() * d + random);
    for c in candidates {
        let (_, vectors) = c.eigen();
        for v in vectors.column_iter() {
            probes.push(represent(frame, &HermitianOp::projector(&v.into_owned())?)?);
        }
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..random {
        probes.push(represent(frame, random_pure_state_with(d, &mut rng).op())?);
    }
    Ok(probes)
}

/// A dual pair with its kernels: the algebra `⋆_f` on functions represented
/// through `frame`.
#[derive(Clone, Debug)]
pub struct StarAlgebra {
    frame: Frame,
    dual: Frame,
    theta: Kernel2,
    kernel: Option<Kernel3>,
}

impl StarAlgebra {
    /// Builds `Θ` and, for at most [`MAX_KERNEL_POINTS`] labels, the full ⋆
    /// kernel; larger frames evaluate products directly.
    pub fn new(frame: Frame, dual: Frame) -> Result<Self> {
        let kernel = if frame.len() <= MAX_KERNEL_POINTS {
            Some(star_kernel(&frame, &dual)?)
        } else {
            require_dual(&frame, &dual)?;
            None
        };
        let theta = theta_kernel(&dual);
        Ok(Self {
            frame,
            dual,
            theta,
            kernel,
        })
    }

    /// The algebra with frame and dual exchanged, acting on functions
    /// represented through the dual.
    pub fn swapped(&self) -> Result<Self> {
        Self::new(self.dual.clone(), self.frame.clone())
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

    pub fn kernel(&self) -> Option<&Kernel3> {
        self.kernel.as_ref()
    }

    pub fn weights(&self) -> &[f64] {
        self.frame.weights()
    }

    pub fn represent(&self, op: &HermitianOp) -> Result<RepFunction> {
        represent(&self.frame, op)
    }

    pub fn reconstruct(&self, rep: &RepFunction) -> Result<HermitianOp> {
        check_frame_id(rep, self.frame.id())?;
        reconstruct(&self.dual, rep)
    }

    pub fn identity(&self) -> RepFunction {
        identity_element(&self.frame)
    }

    pub fn frame_ip(&self, a: &RepFunction, b: &RepFunction) -> Result<f64> {
        check_frame_id(a, self.frame.id())?;
        frame_ip(a, b, &self.theta, self.weights())
    }

    pub fn product(&self, a: &RepFunction, b: &RepFunction) -> Result<StarProduct> {
        match &self.kernel {
            Some(k) => star_product(a, b, k, self.weights()),
            None => star_product_direct(&self.frame, &self.dual, a, b),
        }
    }

    pub fn is_pure_state_rep(&self, rho: &RepFunction) -> Result<bool> {
        match &self.kernel {
            Some(k) => is_pure_state_rep(rho, k, self.weights()),
            None => {
                let square = self.product(rho, rho)?;
                let zeros = vec![0.0; rho.len()];
                Ok(square.sup_distance(&rho.values, &zeros) <= PURITY_TOL
                    && (rho.weighted_sum(self.weights()) - 1.0).abs() <= VALIDITY_TOL)
            }
        }
    }

    /// State validity against eigenprojector and Haar probes.
    pub fn validate_state_rep(&self, rho: &RepFunction, random_probes: usize, seed: u64) -> Result<bool> {
        let candidate = self.reconstruct(rho)?;
        let probes = probe_states(&self.frame, &[candidate], random_probes, seed)?;
        validate_state_rep(rho, &probes, &self.theta, self.weights())
    }

    /// Effect validity; completeness is checked against the unit of the
    /// algebra the effects live in (`⟨E(α), I⟩` for effects through the dual).
    pub fn validate_effect_rep(&self, m: &CondQuasiProb, random_probes: usize, seed: u64) -> Result<bool> {
        let (identity, rebuild_with) = match m.via {
            Via::DualE => (identity_element(&self.dual), &self.frame),
            Via::FrameF => (identity_element(&self.frame), &self.dual),
        };
        let candidates = m
            .reps
            .iter()
            .map(|r| reconstruct(rebuild_with, r))
            .collect::<Result<Vec<_>>>()?;
        let probes = probe_states(&self.frame, &candidates, random_probes, seed)?;
        validate_effect_rep(m, &probes, &identity, Some(&self.theta), self.weights())
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    use super::*;
    use crate::frames::{canonical_dual, herm_basis_frame, leonhardt_frame, closed_form_dual, renormalize, wootters_frame, Convention, FrameKind};
    use crate::operator_space::{hs_inner, random_hermitian, random_state, symmetric_eigenvalues, DensityOp, Povm};
    use crate::quasiprob::rep_effects;

    fn wootters_algebra() -> StarAlgebra {
        let f = renormalize(&wootters_frame(3).unwrap(), Convention::Standard).unwrap();
        let e = canonical_dual(&f).unwrap();
        StarAlgebra::new(f, e).unwrap()
    }

    fn basis_state(d: usize, k: usize) -> DensityOp {
        let mut v = DVector::zeros(d);
        v[k] = Complex64::new(1.0, 0.0);
        DensityOp::pure(&v).unwrap()
    }

    #[test]
    fn theta_examples() {
        let basis = herm_basis_frame(3).unwrap();
        let t = theta_kernel(&basis);
        assert!((t.matrix() - DMatrix::<f64>::identity(9, 9)).amax() < 1e-14);

        let e = canonical_dual(&wootters_frame(3).unwrap()).unwrap();
        let t = theta_kernel(&e);
        for a in 0..9 {
            for b in 0..9 {
                let direct = hs_inner(&e.elements()[a], &e.elements()[b]).unwrap();
                assert_abs_diff_eq!(t.get(a, b), direct, epsilon = 1e-12);
                if a != b {
                    assert!(t.get(a, b).abs() < 1e-12);
                }
            }
        }
        let e = closed_form_dual(FrameKind::Leonhardt, 2).unwrap().dual;
        let t = theta_kernel(&e);
        assert!(symmetric_eigenvalues(t.matrix())[0] >= -1e-10);
        assert_eq!(t.matrix(), &t.matrix().transpose());
    }

    #[test]
    fn star_kernel_examples() {
        let alg = wootters_algebra();
        let k = alg.kernel().unwrap();
        assert_eq!(k.data.len(), 729);
        assert!(k.hermiticity_deviation() <= 1e-12);

        let basis = herm_basis_frame(2).unwrap();
        let k = star_kernel(&basis, &basis).unwrap();
        let b = basis.elements();
        for (x, y, z) in [(0, 1, 2), (3, 1, 1), (2, 3, 1)] {
            let direct = b[x].matrix().trace_product(&b[y].matrix().mul(b[z].matrix()));
            assert!((k.get(x, y, z) - direct).norm() < 1e-14);
        }

        let f = wootters_frame(3).unwrap();
        assert!(matches!(star_kernel(&f, &f), Err(QframeError::NotDual { .. })));
    }

    #[test]
    fn kernel_size_guard() {
        let f = leonhardt_frame(8).unwrap();
        assert_eq!(f.len(), 256);
        let big = crate::frames::random_frame(3, 257, 1, false).unwrap();
        let e = canonical_dual(&big).unwrap();
        assert!(matches!(star_kernel(&big, &e), Err(QframeError::KernelTooLarge { n: 257, .. })));
        // the algebra falls back to direct evaluation
        let alg = StarAlgebra::new(big, e).unwrap();
        assert!(alg.kernel().is_none());
        let rho = alg.represent(basis_state(3, 0).op()).unwrap();
        let sq = alg.product(&rho, &rho).unwrap();
        assert!(sq.sup_distance(&rho.values, &vec![0.0; rho.len()]) <= 1e-9);
    }

    #[test]
    fn isometry_and_ip_examples() {
        let alg = wootters_algebra();
        let mut rng = seeded_rng(7);
        for _ in 0..20 {
            let a = random_hermitian(3, &mut rng);
            let b = random_hermitian(3, &mut rng);
            let ip = alg.frame_ip(&alg.represent(&a).unwrap(), &alg.represent(&b).unwrap()).unwrap();
            assert_abs_diff_eq!(ip, hs_inner(&a, &b).unwrap(), epsilon = 1e-10);
        }
        let pure = alg.represent(random_pure_state_with(3, &mut rng).op()).unwrap();
        assert_abs_diff_eq!(alg.frame_ip(&pure, &pure).unwrap(), 1.0, epsilon = 1e-10);
        let p0 = alg.represent(basis_state(3, 0).op()).unwrap();
        let p1 = alg.represent(basis_state(3, 1).op()).unwrap();
        assert_abs_diff_eq!(alg.frame_ip(&p0, &p1).unwrap(), 0.0, epsilon = 1e-10);
        let zero = RepFunction::zeros(alg.frame());
        assert_eq!(alg.frame_ip(&pure, &zero).unwrap(), 0.0);
    }

    #[test]
    fn homomorphism_identity_and_idempotence() {
        let alg = wootters_algebra();
        let mut rng = seeded_rng(11);
        let iota = alg.identity();
        for v in &iota.values {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
        }
        for _ in 0..10 {
            let a = random_hermitian(3, &mut rng);
            let b = random_hermitian(3, &mut rng);
            let ra = alg.represent(&a).unwrap();
            let rb = alg.represent(&b).unwrap();
            let prod = alg.product(&ra, &rb).unwrap();
            let expected = represent_complex(alg.frame(), &a.matrix().mul(b.matrix())).unwrap();
            assert!(prod.sup_distance(&expected.re, &expected.im) <= 1e-10);
            let direct = star_product_direct(alg.frame(), alg.dual(), &ra, &rb).unwrap();
            assert!(prod.sup_distance(&direct.re, &direct.im) <= 1e-10);

            let left = alg.product(&iota, &rb).unwrap();
            let right = alg.product(&rb, &iota).unwrap();
            let zeros = vec![0.0; rb.len()];
            assert!(left.sup_distance(&rb.values, &zeros) <= 1e-10);
            assert!(right.sup_distance(&rb.values, &zeros) <= 1e-10);
        }
        let p = alg.represent(basis_state(3, 2).op()).unwrap();
        let sq = alg.product(&p, &p).unwrap();
        assert!(sq.sup_distance(&p.values, &[0.0; 9]) <= 1e-10);
    }

    #[test]
    fn purity_examples() {
        let alg = wootters_algebra();
        let zero = alg.represent(basis_state(3, 0).op()).unwrap();
        assert!(alg.is_pure_state_rep(&zero).unwrap());
        let mixed = alg.represent(DensityOp::maximally_mixed(3).op()).unwrap();
        assert!(!alg.is_pure_state_rep(&mixed).unwrap());
        let ninth = alg.represent(&HermitianOp::identity(3).scale(1.0 / 9.0)).unwrap();
        let sq = alg.product(&mixed, &mixed).unwrap();
        assert!(sq.sup_distance(&ninth.values, &[0.0; 9]) <= 1e-10);
        let rank2 = basis_state(3, 0).op().add(basis_state(3, 1).op()).unwrap();
        assert!(!alg.is_pure_state_rep(&alg.represent(&rank2).unwrap()).unwrap());
    }

    #[test]
    fn validity_examples() {
        let alg = wootters_algebra();
        for seed in 0..10 {
            let rho = alg.represent(random_state(3, seed).unwrap().op()).unwrap();
            assert!(alg.validate_state_rep(&rho, 50, seed).unwrap());
        }
        let bad = HermitianOp::from_real(&DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.5, -0.5]))).unwrap();
        let rep = alg.represent(&bad).unwrap();
        assert!(!alg.validate_state_rep(&rep, 0, 0).unwrap());
        assert!(matches!(
            validate_state_rep(&rep, &[], alg.theta(), alg.weights()),
            Err(QframeError::Empty(_))
        ));

        let z = Povm::computational(3);
        let via_e = rep_effects(alg.dual(), &z, Via::DualE).unwrap();
        assert!(alg.validate_effect_rep(&via_e, 50, 3).unwrap());
        let via_f = rep_effects(alg.frame(), &z, Via::FrameF).unwrap();
        assert!(alg.validate_effect_rep(&via_f, 50, 3).unwrap());
    }

    #[test]
    fn swapped_algebra_unit_is_dual_identity() {
        let f = leonhardt_frame(2).unwrap();
        let e = closed_form_dual(FrameKind::Leonhardt, 2).unwrap().dual;
        let alg = StarAlgebra::new(f, e).unwrap();
        let swapped = alg.swapped().unwrap();
        let iota = swapped.identity();
        assert_eq!(iota, identity_element(alg.dual()));
        let mut rng = seeded_rng(5);
        for _ in 0..5 {
            let b = swapped.represent(&random_hermitian(2, &mut rng)).unwrap();
            let prod = swapped.product(&iota, &b).unwrap();
            assert!(prod.sup_distance(&b.values, &vec![0.0; b.len()]) <= 1e-10);
        }
        let via_e = rep_effects(alg.dual(), &Povm::computational(2), Via::DualE).unwrap();
        let sum = via_e.pointwise_sum();
        for (s, i) in sum.iter().zip(&iota.values) {
            assert_abs_diff_eq!(*s, *i, epsilon = 1e-10);
        }
    }

    #[test]
    fn kernel_json_round_trip() {
        let alg = wootters_algebra();
        let k = alg.kernel().unwrap();
        let back: Kernel3 = serde_json::from_str(&serde_json::to_string(k).unwrap()).unwrap();
        assert_eq!(&back, k);
        let back: Kernel2 = serde_json::from_str(&serde_json::to_string(alg.theta()).unwrap()).unwrap();
        assert_eq!(&back, alg.theta());
    }
}

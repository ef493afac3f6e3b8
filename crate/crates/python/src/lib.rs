//! Python bindings for `qframe-core`.
//!
//! Operators cross the boundary as nested lists of Python `complex` values
//! (row-major); representations are plain lists of floats indexed like the
//! frame's labels.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qframe_core::frames::{self, Convention, RepFunction};
use qframe_core::nogo;
use qframe_core::operator_space::{self as ops, ComplexMatrix, DensityOp, HermitianOp, Povm};
use qframe_core::quasiprob::{self, Via};
use qframe_core::star_algebra;
use qframe_core::QframeError;

create_exception!(qframe, QframeException, PyException, "Error raised by the qframe library.");

fn py_err(e: QframeError) -> PyErr {
    QframeException::new_err(e.to_string())
}

type Matrix = Vec<Vec<Complex64>>;
/// `(kind, item, outcome, value)` of one classicality violation.
type ViolationTuple = (String, usize, Option<usize>, f64);

fn to_matrix(rows: &Matrix) -> PyResult<ComplexMatrix> {
    let re: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let im: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
    ComplexMatrix::from_parts(&re, &im).map_err(py_err)
}

fn to_hermitian(rows: &Matrix) -> PyResult<HermitianOp> {
    HermitianOp::new(to_matrix(rows)?).map_err(py_err)
}

fn to_state(rows: &Matrix) -> PyResult<DensityOp> {
    ops::validate_state(&to_hermitian(rows)?).map_err(py_err)
}

fn to_povm(effects: &[Matrix]) -> PyResult<Povm> {
    let effects = effects.iter().map(to_hermitian).collect::<PyResult<Vec<_>>>()?;
    ops::validate_povm(effects).map_err(py_err)
}

fn from_op(op: &HermitianOp) -> Matrix {
    let m = op.as_matrix();
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn parse_via(via: &str) -> PyResult<Via> {
    via.parse().map_err(py_err)
}

/// A frame for the Hermitian operators on `C^d`.
#[pyclass(module = "qframe", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Frame {
    inner: frames::Frame,
}

impl Frame {
    fn wrap(inner: frames::Frame) -> Self {
        Self { inner }
    }

    fn rep(&self, values: Vec<f64>) -> PyResult<RepFunction> {
        if values.len() != self.inner.len() {
            return Err(py_err(QframeError::LengthMismatch {
                context: "representation",
                expected: self.inner.len(),
                found: values.len(),
            }));
        }
        RepFunction::new(self.inner.id(), values).map_err(py_err)
    }
}

#[pymethods]
impl Frame {
    /// Wootters phase-point frame for an odd prime `d`.
    #[staticmethod]
    fn wootters(d: usize) -> PyResult<Self> {
        frames::wootters_frame(d).map(Self::wrap).map_err(py_err)
    }

    /// Leonhardt frame on the doubled lattice for an even `d`.
    #[staticmethod]
    fn leonhardt(d: usize) -> PyResult<Self> {
        frames::leonhardt_frame(d).map(Self::wrap).map_err(py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (d, n, seed, positive = false))]
    fn random(d: usize, n: usize, seed: u64, positive: bool) -> PyResult<Self> {
        frames::random_frame(d, n, seed, positive).map(Self::wrap).map_err(py_err)
    }

    /// Reads a frame JSON file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        qframe_core::io::read_frame(path.as_ref(), ops::HERMITICITY_TOL)
            .map(Self::wrap)
            .map_err(py_err)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        qframe_core::io::write_json(path.as_ref(), &qframe_core::io::FrameJson::from_frame(&self.inner)).map_err(py_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn id(&self) -> &str {
        self.inner.id()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    #[getter]
    fn convention(&self) -> &'static str {
        self.inner.convention().name()
    }

    #[getter]
    fn labels(&self) -> Vec<Vec<i64>> {
        self.inner.labels().iter().map(|l| l.0.clone()).collect()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    fn elements(&self) -> Vec<Matrix> {
        self.inner.elements().iter().map(from_op).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Frame(kind={}, dim={}, n={}, id={})",
            self.inner.kind().name(),
            self.inner.dim(),
            self.inner.len(),
            self.inner.id()
        )
    }

    /// Rescales the frame: `raw`, `state_normalized` or `standard`.
    fn renormalize(&self, convention: &str) -> PyResult<Self> {
        let c: Convention = convention.parse().map_err(py_err)?;
        frames::renormalize(&self.inner, c).map(Self::wrap).map_err(py_err)
    }

    fn canonical_dual(&self) -> PyResult<Self> {
        frames::canonical_dual(&self.inner).map(Self::wrap).map_err(py_err)
    }

    fn unit_trace_dual(&self) -> PyResult<Self> {
        frames::unit_trace_dual(&self.inner).map(Self::wrap).map_err(py_err)
    }

    /// Closed-form dual with its fitted global scalar: `(dual, scalar, residual)`.
    fn closed_form_dual(&self) -> PyResult<(Self, f64, f64)> {
        let p = frames::closed_form_dual_for(&self.inner).map_err(py_err)?;
        Ok((Self::wrap(p.dual), p.scalar, p.residual))
    }

    /// Optimal frame bounds `(a, b)`.
    fn bounds(&self) -> PyResult<(f64, f64)> {
        frames::frame_bounds(&self.inner).map_err(py_err)
    }

    /// `(is_dual, residual)` for a candidate dual.
    fn is_dual(&self, dual: &Frame) -> PyResult<(bool, f64)> {
        let c = frames::is_dual_pair(&self.inner, &dual.inner).map_err(py_err)?;
        Ok((c.is_dual, c.residual))
    }

    fn is_positive(&self) -> bool {
        frames::is_positive_frame(&self.inner)
    }

    /// `⟨F(α), A⟩` for every label.
    fn represent(&self, op: Matrix) -> PyResult<Vec<f64>> {
        let rep = frames::represent(&self.inner, &to_hermitian(&op)?).map_err(py_err)?;
        Ok(rep.values)
    }

    /// `Σ_α w_α f(α) F(α)`.
    fn reconstruct(&self, values: Vec<f64>) -> PyResult<Matrix> {
        let op = frames::reconstruct(&self.inner, &self.rep(values)?).map_err(py_err)?;
        Ok(from_op(&op))
    }

    /// Negativity summary of a function on this frame's labels.
    fn negativity<'py>(&self, py: Python<'py>, values: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
        let report = quasiprob::negativity(&self.rep(values)?, self.inner.weights());
        let out = PyDict::new(py);
        out.set_item("min_value", report.min_value)?;
        out.set_item("negative_mass", report.negative_mass)?;
        out.set_item("count_negative", report.count_negative)?;
        Ok(out)
    }

    /// Canonical-dual negativity and Choi contradiction for a positive frame.
    fn positive_dual_witness<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = nogo::positive_dual_witness(&self.inner).map_err(py_err)?;
        witness_dict(py, &r)
    }
}

/// A frame with a verified dual: the quasi-probability calculus.
#[pyclass(module = "qframe", frozen)]
struct DualPair {
    inner: quasiprob::DualPair,
}

#[pymethods]
impl DualPair {
    #[new]
    fn new(frame: &Frame, dual: &Frame) -> PyResult<Self> {
        quasiprob::DualPair::new(frame.inner.clone(), dual.inner.clone())
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    #[getter]
    fn frame(&self) -> Frame {
        Frame::wrap(self.inner.frame().clone())
    }

    #[getter]
    fn dual(&self) -> Frame {
        Frame::wrap(self.inner.dual().clone())
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual()
    }

    /// Quasi-probability density of a state.
    fn rep_state(&self, rho: Matrix) -> PyResult<Vec<f64>> {
        let q = quasiprob::rep_state(self.inner.frame(), &to_state(&rho)?).map_err(py_err)?;
        Ok(q.rep.values)
    }

    /// Conditional quasi-probabilities of a POVM, through `"F"` or `"E"`.
    #[pyo3(signature = (effects, via = "E"))]
    fn rep_effects(&self, effects: Vec<Matrix>, via: &str) -> PyResult<Vec<Vec<f64>>> {
        let via = parse_via(via)?;
        let frame = match via {
            Via::FrameF => self.inner.frame(),
            Via::DualE => self.inner.dual(),
        };
        let m = quasiprob::rep_effects(frame, &to_povm(&effects)?, via).map_err(py_err)?;
        Ok(m.reps.into_iter().map(|r| r.values).collect())
    }

    /// `(trace, deformed, total)` probabilities of outcome `k`.
    fn probabilities(&self, rho: Matrix, effects: Vec<Matrix>, k: usize) -> PyResult<(f64, f64, f64)> {
        let rho = to_state(&rho)?;
        let povm = to_povm(&effects)?;
        let r = quasiprob::rep_state(self.inner.frame(), &rho).map_err(py_err)?;
        let via_f = quasiprob::rep_effects(self.inner.frame(), &povm, Via::FrameF).map_err(py_err)?;
        let via_e = quasiprob::rep_effects(self.inner.dual(), &povm, Via::DualE).map_err(py_err)?;
        let trace = ops::born_rule(&rho, &povm, k).map_err(py_err)?;
        let deformed = quasiprob::deformed_prob(&self.inner, &r, &via_f, k).map_err(py_err)?;
        let total = quasiprob::total_prob(&self.inner, &r, &via_e, k).map_err(py_err)?;
        Ok((trace, deformed.value, total.value))
    }

    /// Classical-model check over the given states and POVMs:
    /// `(classical, [(kind, item, outcome, value), ...])`.
    fn classicality_check(
        &self,
        states: Vec<Matrix>,
        povms: Vec<Vec<Matrix>>,
    ) -> PyResult<(bool, Vec<ViolationTuple>)> {
        let states = states.iter().map(to_state).collect::<PyResult<Vec<_>>>()?;
        let povms = povms.iter().map(|p| to_povm(p)).collect::<PyResult<Vec<_>>>()?;
        let report = quasiprob::classicality_check(&self.inner, &states, &povms).map_err(py_err)?;
        let violations = report
            .violations
            .iter()
            .map(|v| (format!("{:?}", v.kind), v.item, v.outcome, v.value))
            .collect();
        Ok((report.classical_for_this_pair, violations))
    }

    /// Choi matrix `Σ_α w_α E(α) ⊗ F(α)^T` and its partial-transpose minimum eigenvalue.
    fn choi_pt_min_eig(&self) -> PyResult<f64> {
        let choi = nogo::choi_of_pair(self.inner.frame(), self.inner.dual()).map_err(py_err)?;
        Ok(nogo::min_eig_pt(&choi))
    }
}

/// ⋆-product algebra on representation space.
#[pyclass(module = "qframe", frozen)]
struct StarAlgebra {
    inner: star_algebra::StarAlgebra,
}

impl StarAlgebra {
    fn rep(&self, values: Vec<f64>) -> PyResult<RepFunction> {
        let n = self.inner.frame().len();
        if values.len() != n {
            return Err(py_err(QframeError::LengthMismatch {
                context: "representation",
                expected: n,
                found: values.len(),
            }));
        }
        RepFunction::new(self.inner.frame().id(), values).map_err(py_err)
    }
}

#[pymethods]
impl StarAlgebra {
    #[new]
    fn new(frame: &Frame, dual: &Frame) -> PyResult<Self> {
        star_algebra::StarAlgebra::new(frame.inner.clone(), dual.inner.clone())
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    fn represent(&self, op: Matrix) -> PyResult<Vec<f64>> {
        Ok(self.inner.represent(&to_hermitian(&op)?).map_err(py_err)?.values)
    }

    fn reconstruct(&self, values: Vec<f64>) -> PyResult<Matrix> {
        Ok(from_op(&self.inner.reconstruct(&self.rep(values)?).map_err(py_err)?))
    }

    /// Inner product that mirrors the Hilbert–Schmidt product.
    fn inner_product(&self, a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
        self.inner.frame_ip(&self.rep(a)?, &self.rep(b)?).map_err(py_err)
    }

    /// `a ⋆ b` as a list of complex values.
    fn product(&self, a: Vec<f64>, b: Vec<f64>) -> PyResult<Vec<Complex64>> {
        let p = self.inner.product(&self.rep(a)?, &self.rep(b)?).map_err(py_err)?;
        Ok(p.re.iter().zip(&p.im).map(|(&re, &im)| Complex64::new(re, im)).collect())
    }

    fn identity(&self) -> Vec<f64> {
        self.inner.identity().values
    }

    fn is_pure_state(&self, values: Vec<f64>) -> PyResult<bool> {
        self.inner.is_pure_state_rep(&self.rep(values)?).map_err(py_err)
    }
}

fn witness_dict<'py>(py: Python<'py>, r: &nogo::WitnessReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("dim", r.dim)?;
    out.set_item("frame_seed", r.frame_seed)?;
    out.set_item("min_dual_eig", r.min_dual_eig)?;
    out.set_item("choi_pt_min_eig", r.choi_pt_min_eig)?;
    out.set_item("verdict", &r.verdict)?;
    Ok(out)
}

/// Closed-form dual of the raw Wootters or Leonhardt frame: `(dual, scalar, residual)`.
#[pyfunction]
fn closed_form_dual(kind: &str, d: usize) -> PyResult<(Frame, f64, f64)> {
    let kind = match kind {
        "wootters" => frames::FrameKind::Wootters,
        "leonhardt" => frames::FrameKind::Leonhardt,
        other => return Err(QframeException::new_err(format!("no closed-form dual for `{other}`"))),
    };
    let p = frames::closed_form_dual(kind, d).map_err(py_err)?;
    Ok((Frame::wrap(p.dual), p.scalar, p.residual))
}

#[pyfunction]
fn random_state(d: usize, seed: u64) -> PyResult<Matrix> {
    Ok(from_op(ops::random_state(d, seed).map_err(py_err)?.op()))
}

#[pyfunction]
fn random_povm(d: usize, m: usize, seed: u64) -> PyResult<Vec<Matrix>> {
    Ok(ops::random_povm(d, m, seed).map_err(py_err)?.effects().iter().map(from_op).collect())
}

/// `tr(ρ E_k)`.
#[pyfunction]
fn born_rule(rho: Matrix, effects: Vec<Matrix>, k: usize) -> PyResult<f64> {
    ops::born_rule(&to_state(&rho)?, &to_povm(&effects)?, k).map_err(py_err)
}

/// Witness reports for random positive frames, one per seed in `start..start+count`.
#[pyfunction]
#[pyo3(signature = (d, count, start = 0))]
fn witness_batch<'py>(py: Python<'py>, d: usize, count: u64, start: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let reports = nogo::witness_batch(d, start..start + count).map_err(py_err)?;
    reports.iter().map(|r| witness_dict(py, r)).collect()
}

/// Partial-transpose minimum eigenvalue of the identity channel's Choi matrix.
#[pyfunction]
fn identity_choi_pt_min_eig(d: usize) -> f64 {
    nogo::min_eig_pt(&nogo::identity_choi(d))
}

#[pymodule]
fn qframe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QframeException", m.py().get_type::<QframeException>())?;
    m.add_class::<Frame>()?;
    m.add_class::<DualPair>()?;
    m.add_class::<StarAlgebra>()?;
    m.add_function(wrap_pyfunction!(closed_form_dual, m)?)?;
    m.add_function(wrap_pyfunction!(random_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_povm, m)?)?;
    m.add_function(wrap_pyfunction!(born_rule, m)?)?;
    m.add_function(wrap_pyfunction!(witness_batch, m)?)?;
    m.add_function(wrap_pyfunction!(identity_choi_pt_min_eig, m)?)?;
    Ok(())
}

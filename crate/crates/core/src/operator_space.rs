//! Dense complex-matrix substrate: Hermitian operators with the
//! Hilbert–Schmidt inner product, the Weyl generators `X`, `Z` and the
//! parity `P`, and validated quantum states and POVMs.
//!
//! Phase convention: `Z = diag(ω^k)` with `ω = exp(2πi/d)` and
//! `X φ_k = φ_{k+1}`, which gives `ZX = ω XZ`, equivalently
//! `XZ = ω^{-1} ZX` (see [`xz_commutation_sign`]).

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{QframeError, Result};

/// Maximum entrywise `|M - M^dag|` accepted for a Hermitian operator.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a positive semidefinite operator.
pub const PSD_TOL: f64 = 1e-10;
/// Maximum deviation of a state trace (or POVM sum) from its target.
pub const NORMALIZATION_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Square `d×d` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(QframeError::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(QframeError::InvalidDimension {
                dim: 0,
                reason: "matrix must be non-empty".into(),
            });
        }
        Ok(Self(m))
    }

    /// Builds a matrix from separate real and imaginary row-major arrays.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d {
            return Err(QframeError::LengthMismatch {
                context: "imaginary rows",
                expected: d,
                found: im.len(),
            });
        }
        let mut m = DMatrix::from_element(d, d, ZERO);
        for (i, (rr, ri)) in re.iter().zip(im).enumerate() {
            if rr.len() != d || ri.len() != d {
                return Err(QframeError::LengthMismatch {
                    context: "matrix row",
                    expected: d,
                    found: rr.len().min(ri.len()),
                });
            }
            for j in 0..d {
                m[(i, j)] = Complex64::new(rr[j], ri[j]);
            }
        }
        Self::new(m)
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn zeros(d: usize) -> Self {
        Self(DMatrix::from_element(d, d, ZERO))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = DMatrix::identity(self.dim(), self.dim());
        let mut base = self.0.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Self(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.map(|z| z * c))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise `|M - M^dag|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.adjoint().mul(self);
        prod.max_abs_diff(&Self::identity(self.dim())) <= tol
    }

    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += self.0[(i, j)] * other.0[(j, i)];
            }
        }
        acc
    }
}

/// Hermitian operator on `C^d`; an element of the real Hilbert space `Herm(C^d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOp {
    matrix: ComplexMatrix,
}

impl HermitianOp {
    /// Accepts `m` when `max |M - M^dag| <= 1e-12` and stores its exact
    /// Hermitian part.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let deviation = m.hermiticity_deviation();
        if !deviation.is_finite() {
            return Err(QframeError::NonFinite("operator entries"));
        }
        if deviation > HERMITICITY_TOL {
            return Err(QframeError::NotHermitian { deviation });
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(M + M^dag) / 2`, with no tolerance check.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        let a = m.as_matrix();
        let sym = (a + a.adjoint()).map(|z| z * 0.5);
        Self {
            matrix: ComplexMatrix(sym),
        }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(ComplexMatrix::new(m.map(|x| Complex64::new(x, 0.0)))?)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d),
        }
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(d),
        }
    }

    /// Rank-one projector `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn projector(v: &DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QframeError::Precondition("projector of a zero vector".into()));
        }
        let u = v / Complex64::new(norm, 0.0);
        Ok(Self::hermitian_part(&ComplexMatrix(&u * u.adjoint())))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        self.matrix.as_matrix()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            matrix: ComplexMatrix(self.as_matrix() * Complex64::new(c, 0.0)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            matrix: ComplexMatrix(self.as_matrix() + other.as_matrix()),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            matrix: ComplexMatrix(self.as_matrix() - other.as_matrix()),
        })
    }

    /// In-place `self += c · other`; dimensions must already agree.
    pub fn axpy(&mut self, c: f64, other: &Self) {
        let c = Complex64::new(c, 0.0);
        self.matrix.0.zip_apply(other.as_matrix(), |a, b| *a += c * b);
    }

    /// Conjugation `U A U^dag`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim(), u.dim())?;
        let m = u.as_matrix() * self.as_matrix() * u.as_matrix().adjoint();
        Ok(Self::hermitian_part(&ComplexMatrix(m)))
    }

    /// Transpose, which for a Hermitian operator equals its complex conjugate.
    pub fn transpose(&self) -> Self {
        Self {
            matrix: ComplexMatrix(self.as_matrix().transpose()),
        }
    }

    pub fn hs_norm(&self) -> f64 {
        self.matrix.hs_norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(self.as_matrix()).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues (ascending) with eigenvectors as matching columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        hermitian_eigen(self.as_matrix())
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }
}

/// Hermitian eigendecomposition, eigenvalues sorted ascending.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues of a real symmetric matrix, sorted ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(QframeError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Density operator: positive semidefinite with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOp(HermitianOp);

impl DensityOp {
    pub fn op(&self) -> &HermitianOp {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Pure state `|ψ⟩⟨ψ|` from an unnormalized vector.
    pub fn pure(psi: &DVector<Complex64>) -> Result<Self> {
        validate_state(&HermitianOp::projector(psi)?)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(HermitianOp::identity(d).scale(1.0 / d as f64))
    }

    /// Convex mixture `p·self + (1-p)·other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        let m = self.0.scale(p).add(&other.0.scale(1.0 - p))?;
        validate_state(&m)
    }
}

/// Positive operator-valued measure; effect `k` is outcome `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianOp>,
}

impl Povm {
    pub fn effects(&self) -> &[HermitianOp] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        let effects = (0..d)
            .map(|k| {
                let mut m = DMatrix::from_element(d, d, ZERO);
                m[(k, k)] = ONE;
                HermitianOp::hermitian_part(&ComplexMatrix(m))
            })
            .collect();
        Self { effects }
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn from_basis(u: &DMatrix<Complex64>) -> Result<Self> {
        let effects = (0..u.ncols())
            .map(|c| HermitianOp::projector(&u.column(c).into_owned()))
            .collect::<Result<Vec<_>>>()?;
        validate_povm(effects)
    }
}

/// The Weyl generators of dimension `d`.
#[derive(Clone, Debug)]
pub struct Generators {
    pub x: ComplexMatrix,
    pub z: ComplexMatrix,
    pub p: ComplexMatrix,
}

/// `X φ_k = φ_{k+1}`, `Z = diag(ω^k)`, `P φ_k = φ_{-k}` (indices mod `d`).
pub fn generators(d: usize) -> Result<Generators> {
    if d < 2 {
        return Err(QframeError::InvalidDimension {
            dim: d,
            reason: "generators need d >= 2".into(),
        });
    }
    let mut x = DMatrix::from_element(d, d, ZERO);
    let mut z = DMatrix::from_element(d, d, ZERO);
    let mut p = DMatrix::from_element(d, d, ZERO);
    for k in 0..d {
        x[((k + 1) % d, k)] = ONE;
        p[((d - k) % d, k)] = ONE;
        z[(k, k)] = root_of_unity(k as i64, d as i64);
    }
    Ok(Generators {
        x: ComplexMatrix(x),
        z: ComplexMatrix(z),
        p: ComplexMatrix(p),
    })
}

/// `exp(2πi k / n)`.
///
/// The exponent is reduced to an angle of at most π/4 in exact integer
/// arithmetic and then rotated by whole quarter turns, which keeps the phase
/// error near one ulp so that powers like `Z^d` stay within 1e-14 of `I`.
pub(crate) fn root_of_unity(k: i64, n: i64) -> Complex64 {
    let r = k.rem_euclid(n);
    // 4r = quarter * n + rem, angle = (π/2)(quarter + rem / n)
    let quarter = (4 * r) / n;
    let rem = 4 * r - quarter * n;
    let (c, s) = if 2 * rem <= n {
        let phi = FRAC_PI_2 * rem as f64 / n as f64;
        (phi.cos(), phi.sin())
    } else {
        let phi = FRAC_PI_2 * (n - rem) as f64 / n as f64;
        (phi.sin(), phi.cos())
    };
    match quarter {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// The sign `s` with `XZ = ω^s ZX`, detected numerically.
///
/// Returns `-1` for the generators built by [`generators`] when `d > 2`; at
/// `d = 2` both signs hold and `+1` is reported.
pub fn xz_commutation_sign(d: usize) -> Result<i32> {
    let g = generators(d)?;
    let xz = g.x.mul(&g.z);
    let zx = g.z.mul(&g.x);
    for s in [1i32, -1] {
        let phased = zx.scale(root_of_unity(s as i64, d as i64));
        if xz.max_abs_diff(&phased) <= 1e-12 {
            return Ok(s);
        }
    }
    Err(QframeError::Precondition(
        "XZ is not a root-of-unity multiple of ZX".into(),
    ))
}

/// Hilbert–Schmidt inner product `tr(AB)`.
pub fn hs_inner(a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let t = a.matrix().trace_product(b.matrix());
    debug_assert!(t.im.abs() <= HERMITICITY_TOL * (a.hs_norm() * b.hs_norm()).max(1.0));
    Ok(t.re)
}

pub fn validate_state(rho: &HermitianOp) -> Result<DensityOp> {
    let min_eigenvalue = rho.min_eigenvalue();
    let trace = rho.trace();
    let positive = min_eigenvalue >= -PSD_TOL;
    let normalized = (trace - 1.0).abs() <= NORMALIZATION_TOL;
    match (positive, normalized) {
        (true, true) => Ok(DensityOp(rho.clone())),
        (false, false) => Err(QframeError::NotPositiveNorNormalized {
            min_eigenvalue,
            trace,
        }),
        (false, true) => Err(QframeError::NotPositive { min_eigenvalue }),
        (true, false) => Err(QframeError::NotNormalized { trace }),
    }
}

pub fn validate_povm(effects: Vec<HermitianOp>) -> Result<Povm> {
    let first = effects.first().ok_or(QframeError::Empty("POVM"))?;
    let d = first.dim();
    let mut sum = HermitianOp::zeros(d);
    for (index, e) in effects.iter().enumerate() {
        check_dims(d, e.dim())?;
        let min_eigenvalue = e.min_eigenvalue();
        if min_eigenvalue < -PSD_TOL {
            return Err(QframeError::NegativeEffect {
                index,
                min_eigenvalue,
            });
        }
        sum.axpy(1.0, e);
    }
    let deviation = sum.max_abs_diff(&HermitianOp::identity(d));
    if deviation > NORMALIZATION_TOL {
        return Err(QframeError::IncompletePovm { deviation });
    }
    Ok(Povm { effects })
}

/// `tr(M_k ρ)`; round-off down to `-1e-12` is reported as zero.
pub fn born_rule(rho: &DensityOp, povm: &Povm, k: usize) -> Result<f64> {
    let effect = povm.effects.get(k).ok_or(QframeError::IndexOutOfRange {
        index: k,
        len: povm.len(),
    })?;
    let p = hs_inner(effect, rho.op())?;
    Ok(if (-1e-12..0.0).contains(&p) { 0.0 } else { p })
}

/// Orthonormal basis of `Herm(C^d)` (generalized Gell-Mann matrices).
///
/// Ordering: `I/√d`, then the `d-1` traceless diagonal elements, then for
/// every `j < k` the symmetric and antisymmetric off-diagonal pair.
#[derive(Clone, Debug)]
pub struct HermBasis {
    dim: usize,
    elements: Vec<HermitianOp>,
}

impl HermBasis {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(QframeError::InvalidDimension {
                dim: d,
                reason: "Hermitian basis needs d >= 2".into(),
            });
        }
        let elements = (0..d * d)
            .map(|i| {
                let mut c = DVector::zeros(d * d);
                c[i] = 1.0;
                synthesize_ggm(d, &c)
            })
            .collect();
        Ok(Self { dim: d, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[HermitianOp] {
        &self.elements
    }

    /// Coordinates `tr(B_i A)` of `A` in this basis.
    pub fn coords(&self, a: &HermitianOp) -> Result<DVector<f64>> {
        check_dims(self.dim, a.dim())?;
        Ok(coords_ggm(a))
    }

    /// `Σ_i c_i B_i`.
    pub fn synthesize(&self, c: &DVector<f64>) -> Result<HermitianOp> {
        if c.len() != self.dim * self.dim {
            return Err(QframeError::LengthMismatch {
                context: "basis coordinates",
                expected: self.dim * self.dim,
                found: c.len(),
            });
        }
        Ok(synthesize_ggm(self.dim, c))
    }
}

pub fn herm_basis(d: usize) -> Result<Vec<HermitianOp>> {
    Ok(HermBasis::new(d)?.elements)
}

pub(crate) fn coords_ggm(a: &HermitianOp) -> DVector<f64> {
    let d = a.dim();
    let m = a.as_matrix();
    let mut c = DVector::zeros(d * d);
    c[0] = a.trace() / (d as f64).sqrt();
    let mut prefix = 0.0;
    for l in 1..d {
        prefix += m[(l - 1, l - 1)].re;
        let lf = l as f64;
        c[l] = (prefix - lf * m[(l, l)].re) / (lf * (lf + 1.0)).sqrt();
    }
    let mut idx = d;
    for j in 0..d {
        for k in (j + 1)..d {
            c[idx] = std::f64::consts::SQRT_2 * m[(j, k)].re;
            c[idx + 1] = -std::f64::consts::SQRT_2 * m[(j, k)].im;
            idx += 2;
        }
    }
    c
}

pub(crate) fn synthesize_ggm(d: usize, c: &DVector<f64>) -> HermitianOp {
    let mut m = DMatrix::from_element(d, d, ZERO);
    let id = c[0] / (d as f64).sqrt();
    for k in 0..d {
        m[(k, k)].re += id;
    }
    for l in 1..d {
        let lf = l as f64;
        let s = c[l] / (lf * (lf + 1.0)).sqrt();
        for k in 0..l {
            m[(k, k)].re += s;
        }
        m[(l, l)].re -= lf * s;
    }
    let mut idx = d;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let (sym, anti) = (c[idx], c[idx + 1]);
            m[(j, k)] = Complex64::new(sym * h, -anti * h);
            m[(k, j)] = Complex64::new(sym * h, anti * h);
            idx += 2;
        }
    }
    HermitianOp {
        matrix: ComplexMatrix(m),
    }
}

/// Seeded generator shared by all fixture constructors.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// GUE-distributed Hermitian operator.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOp {
    let g = gaussian_matrix(d, d, rng);
    HermitianOp::hermitian_part(&ComplexMatrix(g))
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<Complex64> {
    let v: DVector<Complex64> = gaussian_matrix(d, 1, rng).column(0).into_owned();
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

pub fn random_pure_state_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOp {
    let v = random_unit_vector(d, rng);
    DensityOp(HermitianOp::projector(&v).expect("unit vector is non-zero"))
}

/// Ginibre-induced mixed state `G G^dag / tr(G G^dag)`.
pub fn random_state_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOp {
    let g = gaussian_matrix(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOp(HermitianOp::hermitian_part(&ComplexMatrix(m / Complex64::new(tr, 0.0))))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = gaussian_matrix(d, d, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let z = r[(i, i)];
            if z.norm() > 0.0 { z / z.norm() } else { ONE }
        } else {
            ZERO
        }
    });
    q * phases
}

pub fn random_state(d: usize, seed: u64) -> Result<DensityOp> {
    if d < 2 {
        return Err(QframeError::InvalidDimension {
            dim: d,
            reason: "random states need d >= 2".into(),
        });
    }
    Ok(random_state_with(d, &mut seeded_rng(seed)))
}

pub fn random_povm_with<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Povm> {
    let raw: Vec<DMatrix<Complex64>> = (0..m)
        .map(|_| {
            let g = gaussian_matrix(d, d, rng);
            &g * g.adjoint()
        })
        .collect();
    let total = raw.iter().fold(DMatrix::from_element(d, d, ZERO), |acc, x| acc + x);
    let (vals, vecs) = hermitian_eigen(&total);
    let inv_sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        d,
        vals.iter().map(|&v| Complex64::new(1.0 / v.sqrt(), 0.0)),
    ));
    let s = &vecs * inv_sqrt * vecs.adjoint();
    let effects = raw
        .iter()
        .map(|x| HermitianOp::hermitian_part(&ComplexMatrix(&s * x * &s)))
        .collect();
    validate_povm(effects)
}

/// Random POVM with `m` effects `S^{-1/2} M'_k S^{-1/2}`, `S = Σ M'_k`.
pub fn random_povm(d: usize, m: usize, seed: u64) -> Result<Povm> {
    if d < 2 || m < 2 {
        return Err(QframeError::InvalidDimension {
            dim: d.min(m),
            reason: "random POVMs need d >= 2 and m >= 2".into(),
        });
    }
    random_povm_with(d, m, &mut seeded_rng(seed))
}

/// Tensor product of two square matrices.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

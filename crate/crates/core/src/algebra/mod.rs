//! 2×2 complex matrix arithmetic, the Pauli basis, qubit states and their
//! Bloch coordinates, plus small Hermitian eigensolvers.

mod eigen;

pub use eigen::{herm_eigen2, herm_eigen4, EigenPair};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type ComplexScalar = Complex64;

/// Entrywise tolerance for "is Hermitian" checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Slack allowed on positive-semidefiniteness and state constraints.
pub const PSD_TOL: f64 = 1e-10;
/// Bound for density ↔ Bloch round trips.
pub const ROUNDTRIP_TOL: f64 = 1e-14;
/// Largest Bloch norm accepted as a state.
pub const BLOCH_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("matrix is not Hermitian (max |A - A*| = {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("Bloch vector norm {0} exceeds 1")]
    OutsideBlochBall(f64),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Identity,
    X,
    Y,
    Z,
}

impl Axis {
    pub const PAULI: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// A general 2×2 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Mat2::real(a, 0.0, 0.0, d)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Real coordinates (m0, m1, m2, m3) with `self = ½(m0 I + m1 σx + m2 σy + m3 σz)`.
    /// Complex in general; real exactly when `self` is Hermitian.
    pub fn pauli_coords(&self) -> [Complex64; 4] {
        [
            self.trace(),
            (pauli(Axis::X) * *self).trace(),
            (pauli(Axis::Y) * *self).trace(),
            (pauli(Axis::Z) * *self).trace(),
        ]
    }

    pub fn from_pauli_coords(c: [Complex64; 4]) -> Self {
        let half = 0.5;
        let m = pauli(Axis::Identity).scale(c[0])
            + pauli(Axis::X).scale(c[1])
            + pauli(Axis::Y).scale(c[2])
            + pauli(Axis::Z).scale(c[3]);
        m.scale_real(half)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale_real(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<Complex64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Complex64) -> Mat2 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: f64) -> Mat2 {
        self.scale_real(rhs)
    }
}

pub fn pauli(which: Axis) -> Mat2 {
    match which {
        Axis::Identity => Mat2::identity(),
        Axis::X => Mat2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Mat2::new(ZERO, -I, I, ZERO),
        Axis::Z => Mat2::new(ONE, ZERO, ZERO, -ONE),
    }
}

pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    *a * *b - *b * *a
}

/// `ν₁σx + ν₂σy + ν₃σz`.
pub fn pauli_combination(nu: [f64; 3]) -> Mat2 {
    pauli(Axis::X) * nu[0] + pauli(Axis::Y) * nu[1] + pauli(Axis::Z) * nu[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        BlochVector::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        dot(self.to_array(), self.to_array()).sqrt()
    }

    pub fn dist(self, other: BlochVector) -> f64 {
        let d = [self.x - other.x, self.y - other.y, self.z - other.z];
        dot(d, d).sqrt()
    }

    pub fn is_state(self) -> bool {
        self.norm() <= 1.0 + BLOCH_NORM_TOL
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Qubit density matrix `[[α, β], [β̄, 1−α]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    alpha: f64,
    beta: Complex64,
}

impl DensityMatrix {
    /// Validates `0 ≤ α ≤ 1` and `|β|² ≤ α(1−α)` up to [`PSD_TOL`].
    pub fn new(alpha: f64, beta: Complex64) -> Result<Self, AlgebraError> {
        if !alpha.is_finite() || !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(AlgebraError::InvalidState("non-finite entry".into()));
        }
        if alpha < -PSD_TOL || alpha > 1.0 + PSD_TOL {
            return Err(AlgebraError::InvalidState(format!(
                "alpha = {alpha} outside [0, 1]"
            )));
        }
        let slack = beta.norm_sqr() - alpha * (1.0 - alpha);
        if slack > PSD_TOL {
            return Err(AlgebraError::InvalidState(format!(
                "|beta|^2 exceeds alpha(1 - alpha) by {slack:e}"
            )));
        }
        Ok(DensityMatrix { alpha, beta })
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            alpha: 0.5,
            beta: ZERO,
        }
    }

    /// `|0⟩⟨0|`, Bloch (0, 0, 1).
    pub fn ground() -> Self {
        DensityMatrix {
            alpha: 1.0,
            beta: ZERO,
        }
    }

    /// `|1⟩⟨1|`, Bloch (0, 0, −1).
    pub fn excited() -> Self {
        DensityMatrix {
            alpha: 0.0,
            beta: ZERO,
        }
    }

    /// Reads `α` and `β` off a matrix that should be a state; the lower
    /// row is checked against Hermiticity and unit trace.
    pub fn from_matrix(m: &Mat2) -> Result<Self, AlgebraError> {
        let herm = m.hermiticity_defect();
        if herm > PSD_TOL {
            return Err(AlgebraError::NotHermitian(herm));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > PSD_TOL {
            return Err(AlgebraError::InvalidState(format!("trace = {tr}")));
        }
        DensityMatrix::new(m.get(0, 0).re, m.get(0, 1))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(
            self.alpha.into(),
            self.beta,
            self.beta.conj(),
            (1.0 - self.alpha).into(),
        )
    }

    pub fn bloch(&self) -> BlochVector {
        density_to_bloch(self)
    }

    /// `Tr(m ρ)`.
    pub fn expect(&self, m: &Mat2) -> Complex64 {
        (*m * self.matrix()).trace()
    }
}

/// `x = 2 Re β`, `y = −2 Im β`, `z = 2α − 1`.
pub fn density_to_bloch(rho: &DensityMatrix) -> BlochVector {
    BlochVector::new(
        2.0 * rho.beta.re,
        -2.0 * rho.beta.im,
        2.0 * rho.alpha - 1.0,
    )
}

pub fn bloch_to_density(r: BlochVector) -> Result<DensityMatrix, AlgebraError> {
    let norm = r.norm();
    if !norm.is_finite() || norm > 1.0 + BLOCH_NORM_TOL {
        return Err(AlgebraError::OutsideBlochBall(norm));
    }
    Ok(DensityMatrix {
        alpha: 0.5 * (1.0 + r.z),
        beta: Complex64::new(0.5 * r.x, -0.5 * r.y),
    })
}

/// 4×4 Hermitian matrix (Choi matrices of qubit channels).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMat4([[Complex64; 4]; 4]);

impl HermitianMat4 {
    pub fn new(entries: [[Complex64; 4]; 4]) -> Result<Self, AlgebraError> {
        let m = HermitianMat4(entries);
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(AlgebraError::NotHermitian(defect));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let mut e = [[ZERO; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = ONE;
        }
        HermitianMat4(e)
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut e = [[ZERO; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = d[i].into();
        }
        HermitianMat4(e)
    }

    /// Block-diagonal `a ⊕ b`.
    pub fn block_diag(a: &Mat2, b: &Mat2) -> Result<Self, AlgebraError> {
        let mut e = [[ZERO; 4]; 4];
        for r in 0..2 {
            for c in 0..2 {
                e[r][c] = a.get(r, c);
                e[r + 2][c + 2] = b.get(r, c);
            }
        }
        HermitianMat4::new(e)
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.0[r][c] - self.0[c][r].conj()).norm());
            }
        }
        worst
    }
}

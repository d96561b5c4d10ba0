use num_complex::Complex64;

use super::{apply, AffineChannel, Channel, ChannelError};
use crate::algebra::{bloch_to_density, dot, BlochVector, DensityMatrix, BLOCH_NORM_TOL};

/// `|det(I − T)|` below this means the fixed point is not unique.
pub const SINGULAR_DET_TOL: f64 = 1e-12;
/// Spectral radii at or above `1 − GEOMETRIC_MARGIN` count as radius one.
pub const GEOMETRIC_MARGIN: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-11;

pub type Covariance = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssumptionA {
    /// Spectral radius < 1: iterates converge geometrically.
    HoldsGeometric,
    /// Some mode of `T_lin` has modulus one; the limit, when it exists,
    /// depends on the initial state or is reached only without a rate.
    FailsSpectralRadiusOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelAnalysis {
    pub rho_inf: DensityMatrix,
    pub v: BlochVector,
    /// `I₃ − v·vᵀ`.
    pub covariance: Covariance,
    pub spectral_radius: f64,
    pub assumption_a: AssumptionA,
}

pub fn covariance_of(v: BlochVector) -> Covariance {
    let v = v.to_array();
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = if i == j { 1.0 } else { 0.0 } - v[i] * v[j];
        }
    }
    c
}

/// Solves `(I₃ − T)·r = t` by Gaussian elimination with partial pivoting.
pub fn fixed_point(ch: &AffineChannel) -> Result<BlochVector, ChannelError> {
    let t = ch.t_lin();
    let mut a = [[0.0; 4]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = if i == j { 1.0 } else { 0.0 } - t[i][j];
        }
        a[i][3] = ch.t_vec()[i];
    }
    let mut det = 1.0;
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap_or(col);
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        if a[col][col] == 0.0 {
            break;
        }
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    if !(det.abs() >= SINGULAR_DET_TOL) {
        return Err(ChannelError::NonUniqueFixedPoint(det.abs()));
    }
    let mut r = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = ((row + 1)..3).map(|k| a[row][k] * r[k]).sum();
        r[row] = (a[row][3] - tail) / a[row][row];
    }
    let r = BlochVector::from_array(r);

    let image = ch.map_bloch(r);
    if image.dist(r) >= RESIDUAL_TOL || r.norm() > 1.0 + BLOCH_NORM_TOL {
        return Err(ChannelError::InvalidFixedPoint(r.to_array()));
    }
    Ok(r)
}

/// Eigenvalues of `T_lin` within this distance of 1 count as unit modes.
const UNIT_MODE_TOL: f64 = 1e-7;

/// `lim Φⁿ(ρ₀)` in Bloch coordinates for maps whose fixed point is not
/// unique.
///
/// On the augmented 4×4 matrix `A = [[1, 0], [t, T]]` the limit of `Aⁿ` is
/// the spectral projector onto the unit eigenspace, `Π (A − μ)/(1 − μ)` over
/// the contracting eigenvalues `μ` of `T`. Unit modes of a channel are never
/// defective since its powers stay bounded.
///
/// Fails with [`ChannelError::NoLimit`] when a unimodular non-unit mode
/// (a rotation or a reflection) keeps the iterates moving.
pub fn limit_from(ch: &AffineChannel, rho0: &DensityMatrix) -> Result<BlochVector, ChannelError> {
    type M4 = [[Complex64; 4]; 4];
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let mut a: M4 = [[zero; 4]; 4];
    a[0][0] = one;
    for i in 0..3 {
        a[i + 1][0] = ch.t_vec()[i].into();
        for j in 0..3 {
            a[i + 1][j + 1] = ch.t_lin()[i][j].into();
        }
    }
    let mut proj: M4 = [[zero; 4]; 4];
    for (i, row) in proj.iter_mut().enumerate() {
        row[i] = one;
    }
    for mu in cubic_eigenvalues(ch.t_lin()) {
        if (mu - 1.0).norm() <= UNIT_MODE_TOL {
            continue;
        }
        if mu.norm() >= 1.0 - UNIT_MODE_TOL {
            return Err(ChannelError::NoLimit);
        }
        let scale = (one - mu).inv();
        let mut factor = a;
        for (i, row) in factor.iter_mut().enumerate() {
            row[i] -= mu;
            for x in row.iter_mut() {
                *x *= scale;
            }
        }
        let mut next: M4 = [[zero; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|k| proj[i][k] * factor[k][j]).sum();
            }
        }
        proj = next;
    }
    let r0 = rho0.bloch().to_array();
    let mut r = [0.0; 3];
    for (i, ri) in r.iter_mut().enumerate() {
        *ri = proj[i + 1][0].re + (0..3).map(|j| proj[i + 1][j + 1].re * r0[j]).sum::<f64>();
    }
    Ok(BlochVector::from_array(r))
}

/// Largest eigenvalue modulus of a real 3×3 matrix.
///
/// Roots of the characteristic cubic by Cardano's formula in complex
/// arithmetic. The matrix is first shifted by its mean eigenvalue so a
/// multiple of the identity gives an exactly vanishing cubic, and a
/// discriminant that is zero up to rounding is snapped to zero so repeated
/// roots stay repeated.
pub fn spectral_radius(t: &[[f64; 3]; 3]) -> f64 {
    cubic_eigenvalues(t)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub(crate) fn cubic_eigenvalues(t: &[[f64; 3]; 3]) -> [Complex64; 3] {
    let shift = (t[0][0] + t[1][1] + t[2][2]) / 3.0;
    let mut b = *t;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] -= shift;
    }
    let trace_b = b[0][0] + b[1][1] + b[2][2];
    // char poly of B: y³ − tr·y² + c2·y − det
    let c2 = b[0][0] * b[1][1] - b[0][1] * b[1][0] + b[0][0] * b[2][2] - b[0][2] * b[2][0]
        + b[1][1] * b[2][2]
        - b[1][2] * b[2][1];
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    // remove the (rounding-level) trace: y = w + tr/3
    let s = trace_b / 3.0;
    let p = c2 - trace_b * trace_b / 3.0;
    let q = -det + s * c2 - 2.0 * s * s * s;

    let roots = depressed_cubic_roots(p, q);
    roots.map(|w| w + s + shift)
}

/// Roots of `w³ + p·w + q`.
fn depressed_cubic_roots(p: f64, q: f64) -> [Complex64; 3] {
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let half_q = q / 2.0;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;
    let scale = (half_q * half_q).max(third_p.abs().powi(3));
    let mut roots = if disc.abs() <= 64.0 * f64::EPSILON * scale {
        // repeated root
        let u = (-half_q).cbrt();
        [
            Complex64::new(2.0 * u, 0.0),
            Complex64::new(-u, 0.0),
            Complex64::new(-u, 0.0),
        ]
    } else {
        let sq = Complex64::new(disc, 0.0).sqrt();
        let mut u = (Complex64::new(-half_q, 0.0) + sq).powf(1.0 / 3.0);
        if u.norm() == 0.0 {
            u = (Complex64::new(-half_q, 0.0) - sq).powf(1.0 / 3.0);
        }
        if u.norm() == 0.0 {
            [Complex64::new(0.0, 0.0); 3]
        } else {
            let w = |u: Complex64| u - Complex64::new(third_p, 0.0) / u;
            [w(u), w(u * omega), w(u * omega * omega)]
        }
    };
    // Newton polish on simple roots
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let f = *z * *z * *z + *z * p + q;
            let df = *z * *z * 3.0 + p;
            if df.norm() <= 1e-8 * (1.0 + z.norm_sqr()) {
                break;
            }
            let next = *z - f / df;
            if !(next.re.is_finite() && next.im.is_finite()) {
                break;
            }
            let f_next = next * next * next + next * p + q;
            if f_next.norm() < f.norm() {
                *z = next;
            } else {
                break;
            }
        }
    }
    roots
}

/// Stationary data for the channel.
///
/// With a unique fixed point `rho0` is ignored. Otherwise the limit of
/// `Φⁿ(rho0)` is used and the verdict is
/// [`AssumptionA::FailsSpectralRadiusOne`].
pub fn analyze(ch: &Channel, rho0: Option<&DensityMatrix>) -> Result<ChannelAnalysis, ChannelError> {
    let affine = ch.affine();
    let radius = spectral_radius(affine.t_lin());
    let v = match fixed_point(&affine) {
        Ok(v) => v,
        Err(ChannelError::NonUniqueFixedPoint(det)) => match rho0 {
            Some(rho) => limit_from(&affine, rho)?,
            None => return Err(ChannelError::NonUniqueFixedPoint(det)),
        },
        Err(e) => return Err(e),
    };
    let assumption_a = if radius < 1.0 - GEOMETRIC_MARGIN {
        AssumptionA::HoldsGeometric
    } else {
        AssumptionA::FailsSpectralRadiusOne
    };
    Ok(ChannelAnalysis {
        rho_inf: bloch_to_density(v)?,
        v,
        covariance: covariance_of(v),
        spectral_radius: radius,
        assumption_a,
    })
}

/// `[ρ₀, Φ(ρ₀), …, Φⁿ(ρ₀)]`.
pub fn iterate(ch: &Channel, rho0: &DensityMatrix, n: usize) -> Result<Vec<DensityMatrix>, ChannelError> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(*rho0);
    let mut cur = *rho0;
    for _ in 0..n {
        cur = apply(ch, &cur)?;
        out.push(cur);
    }
    Ok(out)
}

/// `νᵀ C ν`.
pub fn quadratic_form(c: &Covariance, nu: [f64; 3]) -> f64 {
    let cn = [dot(c[0], nu), dot(c[1], nu), dot(c[2], nu)];
    dot(nu, cn)
}

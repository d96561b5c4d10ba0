//! Named qubit channels with their closed-form stationary data.

use num_complex::Complex64;

use crate::algebra::{pauli, Axis, BlochVector, DensityMatrix, Mat2};
use crate::channel::{covariance_of, AffineChannel, ChannelError, Covariance, KrausChannel, KrausConvention};

/// Below this, `1 − cos u cos v` is treated as zero.
pub const TRIG_DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectedFixedPoint {
    Unique(DensityMatrix),
    NonUnique,
}

/// A channel bundled with its known affine form and stationary data.
#[derive(Debug, Clone, PartialEq)]
pub struct ZooEntry {
    pub channel: KrausChannel,
    pub expected_affine: AffineChannel,
    /// For a non-unique fixed point: the limit from the maximally mixed state.
    pub expected_v: BlochVector,
    pub expected_c: Covariance,
    pub expected_rho_inf: ExpectedFixedPoint,
}

fn check_probability(name: &str, p: f64) -> Result<(), ChannelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ChannelError::InvalidParameter(format!("{name} = {p} is not in [0, 1]")))
    }
}

fn diag3(d: [f64; 3]) -> [[f64; 3]; 3] {
    [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
}

fn entry(
    channel: KrausChannel,
    t_lin: [[f64; 3]; 3],
    t_vec: [f64; 3],
    v: BlochVector,
    unique: bool,
) -> Result<ZooEntry, ChannelError> {
    let expected_rho_inf = if unique {
        ExpectedFixedPoint::Unique(crate::algebra::bloch_to_density(v)?)
    } else {
        ExpectedFixedPoint::NonUnique
    };
    Ok(ZooEntry {
        channel,
        expected_affine: AffineChannel::from_parts(t_lin, t_vec),
        expected_v: v,
        expected_c: covariance_of(v),
        expected_rho_inf,
    })
}

/// `L₁ = √(1−p) I`, `L₂,₃,₄ = √(p/3) σ_{x,y,z}`.
pub fn depolarizing(p: f64) -> Result<ZooEntry, ChannelError> {
    check_probability("p", p)?;
    let s = (p / 3.0).sqrt();
    let ops = vec![
        Mat2::identity().scale_real((1.0 - p).sqrt()),
        pauli(Axis::X).scale_real(s),
        pauli(Axis::Y).scale_real(s),
        pauli(Axis::Z).scale_real(s),
    ];
    let l = 1.0 - 4.0 * p / 3.0;
    let channel = KrausChannel::new(ops, KrausConvention::LeftAdjoint)?;
    entry(channel, diag3([l; 3]), [0.0; 3], BlochVector::ORIGIN, p > 0.0)
}

/// `L₁ = √(1−p) I`, `L₂ = √p |0⟩⟨0|`, `L₃ = √p |1⟩⟨1|`.
///
/// Never has a unique fixed point: the z-axis is preserved.
pub fn phase_damping(p: f64) -> Result<ZooEntry, ChannelError> {
    check_probability("p", p)?;
    let s = p.sqrt();
    let ops = vec![
        Mat2::identity().scale_real((1.0 - p).sqrt()),
        Mat2::diag(s, 0.0),
        Mat2::diag(0.0, s),
    ];
    let channel = KrausChannel::new(ops, KrausConvention::LeftAdjoint)?;
    entry(channel, diag3([1.0 - p, 1.0 - p, 1.0]), [0.0; 3], BlochVector::ORIGIN, false)
}

/// `L₁ = diag(1, √(1−p))`, `L₂ = √p |0⟩⟨1|`, acting as `Σ L ρ L*`.
pub fn amplitude_damping(p: f64) -> Result<ZooEntry, ChannelError> {
    check_probability("p", p)?;
    let ops = vec![Mat2::diag(1.0, (1.0 - p).sqrt()), Mat2::real(0.0, p.sqrt(), 0.0, 0.0)];
    let s = (1.0 - p).sqrt();
    let channel = KrausChannel::new(ops, KrausConvention::RightAdjoint)?;
    let v = if p > 0.0 { BlochVector::new(0.0, 0.0, 1.0) } else { BlochVector::ORIGIN };
    entry(channel, diag3([s, s, 1.0 - p]), [0.0, 0.0, p], v, p > 0.0)
}

/// `L₁ = cos(v/2)cos(u/2) I + sin(v/2)sin(u/2) σ_z`,
/// `L₂ = sin(v/2)cos(u/2) σ_x − i cos(v/2)sin(u/2) σ_y`.
pub fn trigonometric(u: f64, v: f64) -> Result<ZooEntry, ChannelError> {
    if !u.is_finite() || !v.is_finite() {
        return Err(ChannelError::InvalidParameter(format!("angles ({u}, {v}) must be finite")));
    }
    let denom = 1.0 - u.cos() * v.cos();
    if denom < TRIG_DEGENERACY_TOL {
        return Err(ChannelError::InvalidParameter(format!(
            "1 - cos u cos v = {denom:e} is degenerate for (u, v) = ({u}, {v})"
        )));
    }
    let (su, cu) = (u / 2.0).sin_cos();
    let (sv, cv) = (v / 2.0).sin_cos();
    let l1 = Mat2::identity().scale_real(cv * cu) + pauli(Axis::Z).scale_real(sv * su);
    let l2 = pauli(Axis::X).scale_real(sv * cu) - pauli(Axis::Y).scale(Complex64::new(0.0, cv * su));
    let channel = KrausChannel::new(vec![l1, l2], KrausConvention::LeftAdjoint)?;
    let t3 = u.sin() * v.sin();
    entry(
        channel,
        diag3([u.cos(), v.cos(), u.cos() * v.cos()]),
        [0.0, 0.0, t3],
        BlochVector::new(0.0, 0.0, t3 / denom),
        true,
    )
}

/// Channel of the two-state Markov chain with rows `(p, 1−p)`, `(q, 1−q)`:
/// `L₁ = [[√p, √(1−p)], [0, 0]]`, `L₂ = [[0, 0], [√q, √(1−q)]]`, acting as
/// `Σ L* ρ L`.
pub fn markov_chain(p: f64, q: f64) -> Result<ZooEntry, ChannelError> {
    for (name, x) in [("p", p), ("q", q)] {
        if !(x > 0.0 && x < 1.0) {
            return Err(ChannelError::InvalidParameter(format!("{name} = {x} is not in (0, 1)")));
        }
    }
    let l1 = Mat2::real(p.sqrt(), (1.0 - p).sqrt(), 0.0, 0.0);
    let l2 = Mat2::real(0.0, 0.0, q.sqrt(), (1.0 - q).sqrt());
    let channel = KrausChannel::new(vec![l1, l2], KrausConvention::LeftAdjoint)?;
    let a = (p * (1.0 - p)).sqrt();
    let b = (q * (1.0 - q)).sqrt();
    let norm = 1.0 + q - p;
    let beta = q * a + (1.0 - p) * b;
    let v = BlochVector::new(2.0 * beta / norm, 0.0, (p + q - 1.0) / norm);
    entry(
        channel,
        [[0.0, 0.0, a - b], [0.0, 0.0, 0.0], [0.0, 0.0, p - q]],
        [a + b, 0.0, p + q - 1.0],
        v,
        true,
    )
}

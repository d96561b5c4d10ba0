//! Qubit channels in Kraus, affine Bloch and KRSW diagonal form.
//!
//! Every trace-preserving qubit map acts on Bloch vectors as
//! `r ↦ T_lin·r + t_vec`. Kraus channels carry an explicit convention tag
//! because two adjoint placements are in common use:
//!
//! * [`KrausConvention::LeftAdjoint`]: `Φ(ρ) = Σ L_i* ρ L_i`, normalized by `Σ L_i L_i* = I`;
//! * [`KrausConvention::RightAdjoint`]: `Φ(ρ) = Σ L_i ρ L_i*`, normalized by `Σ L_i* L_i = I`.

mod analysis;
mod cp;
mod random;
pub mod spec;

pub use analysis::{
    analyze, covariance_of, fixed_point, iterate, limit_from, quadratic_form, spectral_radius,
    AssumptionA, ChannelAnalysis, Covariance,
};
pub use cp::{choi, is_cp_choi, krsw_cp_conditions, min_choi_eigenvalue, KrswCpReport};
pub use random::random_kraus_channel;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    bloch_to_density, pauli, AlgebraError, Axis, BlochVector, DensityMatrix, Mat2,
};

/// Tolerance on the Kraus normalization identity.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Slack allowed when checking that an affine map keeps the Bloch ball.
pub const BALL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("a Kraus channel needs 1 to 4 operators, got {0}")]
    KrausCount(usize),
    #[error("Kraus operators violate the {convention:?} normalization (defect {defect:e})")]
    NotNormalized {
        convention: KrausConvention,
        defect: f64,
    },
    #[error("affine map sends a state outside the Bloch ball (norm {0})")]
    LeavesBlochBall(f64),
    #[error("fixed point is not unique (|det(I - T)| = {0:e}); supply an initial state")]
    NonUniqueFixedPoint(f64),
    #[error("fixed point {0:?} is not a valid state")]
    InvalidFixedPoint([f64; 3]),
    #[error("iterates from the initial state do not converge")]
    NoLimit,
    #[error("KRSW inequality test needs |t3| + |lambda3| <= 1, got {0}")]
    Inapplicable(f64),
    #[error("random Kraus generator hit a singular normalizer {0} times")]
    SingularNormalizer(usize),
    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KrausConvention {
    LeftAdjoint,
    RightAdjoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<Mat2>,
    convention: KrausConvention,
}

impl KrausChannel {
    pub fn new(ops: Vec<Mat2>, convention: KrausConvention) -> Result<Self, ChannelError> {
        if ops.is_empty() || ops.len() > 4 {
            return Err(ChannelError::KrausCount(ops.len()));
        }
        let ch = KrausChannel { ops, convention };
        let defect = ch.normalization_defect();
        if !(defect <= NORMALIZATION_TOL) {
            return Err(ChannelError::NotNormalized { convention, defect });
        }
        Ok(ch)
    }

    pub fn ops(&self) -> &[Mat2] {
        &self.ops
    }

    pub fn convention(&self) -> KrausConvention {
        self.convention
    }

    /// Max entry of `Σ L L* − I` (left) or `Σ L* L − I` (right).
    pub fn normalization_defect(&self) -> f64 {
        let sum = self.ops.iter().fold(Mat2::zero(), |acc, l| {
            acc + match self.convention {
                KrausConvention::LeftAdjoint => *l * l.adjoint(),
                KrausConvention::RightAdjoint => l.adjoint() * *l,
            }
        });
        sum.max_abs_diff(&Mat2::identity())
    }

    /// The map extended linearly to all of M₂(ℂ).
    pub fn apply_matrix(&self, m: &Mat2) -> Mat2 {
        self.ops.iter().fold(Mat2::zero(), |acc, l| {
            acc + match self.convention {
                KrausConvention::LeftAdjoint => l.adjoint() * *m * *l,
                KrausConvention::RightAdjoint => *l * *m * l.adjoint(),
            }
        })
    }

    pub fn to_affine(&self) -> AffineChannel {
        kraus_to_affine(self)
    }
}

/// `r ↦ T_lin·r + t_vec` on Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineChannel {
    t_lin: [[f64; 3]; 3],
    t_vec: [f64; 3],
}

impl AffineChannel {
    /// Checks the image of the unit sphere (26-direction grid) stays in the ball.
    pub fn new(t_lin: [[f64; 3]; 3], t_vec: [f64; 3]) -> Result<Self, ChannelError> {
        let ch = AffineChannel::from_parts(t_lin, t_vec);
        let worst = ch.max_image_norm();
        if !(worst <= 1.0 + BALL_TOL) {
            return Err(ChannelError::LeavesBlochBall(worst));
        }
        Ok(ch)
    }

    /// Like [`AffineChannel::new`] and additionally requires a PSD Choi matrix.
    pub fn new_cptp(t_lin: [[f64; 3]; 3], t_vec: [f64; 3]) -> Result<Self, ChannelError> {
        let ch = AffineChannel::new(t_lin, t_vec)?;
        let min = min_choi_eigenvalue(&Channel::Affine(ch))?;
        if min < -crate::algebra::PSD_TOL {
            return Err(ChannelError::InvalidParameter(format!(
                "Choi matrix has eigenvalue {min:e} < 0"
            )));
        }
        Ok(ch)
    }

    pub(crate) const fn from_parts(t_lin: [[f64; 3]; 3], t_vec: [f64; 3]) -> Self {
        AffineChannel { t_lin, t_vec }
    }

    pub fn t_lin(&self) -> &[[f64; 3]; 3] {
        &self.t_lin
    }

    pub fn t_vec(&self) -> &[f64; 3] {
        &self.t_vec
    }

    pub fn map_bloch(&self, r: BlochVector) -> BlochVector {
        let r = r.to_array();
        let mut out = self.t_vec;
        for (i, o) in out.iter_mut().enumerate() {
            *o += (0..3).map(|j| self.t_lin[i][j] * r[j]).sum::<f64>();
        }
        BlochVector::from_array(out)
    }

    /// Largest `‖T·d + t‖` over the 26 grid directions `d ∈ {−1,0,1}³∖0` normalized.
    pub fn max_image_norm(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in -1i32..=1 {
            for j in -1i32..=1 {
                for k in -1i32..=1 {
                    if (i, j, k) == (0, 0, 0) {
                        continue;
                    }
                    let d = BlochVector::new(i as f64, j as f64, k as f64);
                    let n = d.norm();
                    let d = BlochVector::new(d.x / n, d.y / n, d.z / n);
                    worst = worst.max(self.map_bloch(d).norm());
                }
            }
        }
        worst
    }

    /// Linear extension to M₂(ℂ) via Pauli coordinates; `Φ(I) = I + t·σ`.
    pub fn apply_matrix(&self, m: &Mat2) -> Mat2 {
        let c = m.pauli_coords();
        let mut out = [c[0], Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        for i in 0..3 {
            out[i + 1] = c[0] * self.t_vec[i]
                + (0..3)
                    .map(|j| c[j + 1] * self.t_lin[i][j])
                    .sum::<Complex64>();
        }
        Mat2::from_pauli_coords(out)
    }
}

/// The KRSW diagonal normal form: `T_lin = diag(λ)`, translation `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrswChannel {
    pub lambda: [f64; 3],
    pub tvec: [f64; 3],
}

impl KrswChannel {
    pub const fn new(lambda: [f64; 3], tvec: [f64; 3]) -> Self {
        KrswChannel { lambda, tvec }
    }

    pub fn to_affine(&self) -> AffineChannel {
        krsw_to_affine(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Kraus(KrausChannel),
    Affine(AffineChannel),
    Krsw(KrswChannel),
}

impl From<KrausChannel> for Channel {
    fn from(k: KrausChannel) -> Self {
        Channel::Kraus(k)
    }
}

impl From<AffineChannel> for Channel {
    fn from(a: AffineChannel) -> Self {
        Channel::Affine(a)
    }
}

impl From<KrswChannel> for Channel {
    fn from(k: KrswChannel) -> Self {
        Channel::Krsw(k)
    }
}

impl Channel {
    pub fn identity() -> Self {
        Channel::Affine(AffineChannel::from_parts(
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            [0.0; 3],
        ))
    }

    pub fn affine(&self) -> AffineChannel {
        match self {
            Channel::Kraus(k) => kraus_to_affine(k),
            Channel::Affine(a) => *a,
            Channel::Krsw(k) => krsw_to_affine(k),
        }
    }

    pub fn apply_matrix(&self, m: &Mat2) -> Mat2 {
        match self {
            Channel::Kraus(k) => k.apply_matrix(m),
            Channel::Affine(a) => a.apply_matrix(m),
            Channel::Krsw(k) => krsw_to_affine(k).apply_matrix(m),
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, ChannelError> {
        apply(self, rho)
    }
}

/// One use of the channel on a state.
pub fn apply(ch: &Channel, rho: &DensityMatrix) -> Result<DensityMatrix, ChannelError> {
    match ch {
        Channel::Kraus(k) => {
            let defect = k.normalization_defect();
            if !(defect <= NORMALIZATION_TOL) {
                return Err(ChannelError::NotNormalized {
                    convention: k.convention,
                    defect,
                });
            }
            Ok(DensityMatrix::from_matrix(&k.apply_matrix(&rho.matrix()))?)
        }
        Channel::Affine(_) | Channel::Krsw(_) => {
            let r = ch.affine().map_bloch(rho.bloch());
            bloch_to_density(r).map_err(|_| ChannelError::LeavesBlochBall(r.norm()))
        }
    }
}

/// `T_lin[i][j] = ½ Tr(σ_i Φ(σ_j))`, `t_vec[i] = ½ Tr(σ_i Φ(I))`.
pub fn kraus_to_affine(ch: &KrausChannel) -> AffineChannel {
    let image_of_identity = ch.apply_matrix(&Mat2::identity());
    let mut t_lin = [[0.0; 3]; 3];
    let mut t_vec = [0.0; 3];
    for (i, &ai) in Axis::PAULI.iter().enumerate() {
        let si = pauli(ai);
        t_vec[i] = 0.5 * (si * image_of_identity).trace().re;
        for (j, &aj) in Axis::PAULI.iter().enumerate() {
            t_lin[i][j] = 0.5 * (si * ch.apply_matrix(&pauli(aj))).trace().re;
        }
    }
    AffineChannel::from_parts(t_lin, t_vec)
}

pub fn krsw_to_affine(ch: &KrswChannel) -> AffineChannel {
    let l = ch.lambda;
    AffineChannel::from_parts(
        [[l[0], 0.0, 0.0], [0.0, l[1], 0.0], [0.0, 0.0, l[2]]],
        ch.tvec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bloch_to_density;

    fn amplitude_damping_ops(p: f64) -> Vec<Mat2> {
        vec![
            Mat2::diag(1.0, (1.0 - p).sqrt()),
            Mat2::real(0.0, p.sqrt(), 0.0, 0.0),
        ]
    }

    #[test]
    fn conventions_are_checked() {
        assert!(KrausChannel::new(amplitude_damping_ops(0.3), KrausConvention::RightAdjoint).is_ok());
        assert!(matches!(
            KrausChannel::new(amplitude_damping_ops(0.3), KrausConvention::LeftAdjoint),
            Err(ChannelError::NotNormalized { .. })
        ));
        assert!(matches!(
            KrausChannel::new(vec![], KrausConvention::LeftAdjoint),
            Err(ChannelError::KrausCount(0))
        ));
    }

    #[test]
    fn identity_channel_keeps_states() {
        let rho = bloch_to_density(BlochVector::new(0.1, -0.4, 0.5)).unwrap();
        let id = Channel::identity();
        assert_eq!(apply(&id, &rho).unwrap().bloch(), rho.bloch());
        let kraus = Channel::Kraus(
            KrausChannel::new(vec![Mat2::identity()], KrausConvention::LeftAdjoint).unwrap(),
        );
        assert!(apply(&kraus, &rho).unwrap().bloch().dist(rho.bloch()) < 1e-15);
    }

    #[test]
    fn amplitude_damping_affine_form() {
        let p = 0.36;
        let k = KrausChannel::new(amplitude_damping_ops(p), KrausConvention::RightAdjoint).unwrap();
        let a = kraus_to_affine(&k);
        let s = (1.0 - p).sqrt();
        let want = [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, 1.0 - p]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((a.t_lin()[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        assert!((a.t_vec()[2] - p).abs() < 1e-15);
    }

    #[test]
    fn krsw_embedding() {
        let a = krsw_to_affine(&KrswChannel::new([0.5; 3], [0.0, 0.0, 0.25]));
        assert_eq!(a.t_lin(), &[[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]]);
        assert_eq!(a.t_vec(), &[0.0, 0.0, 0.25]);
        let dead = Channel::Krsw(KrswChannel::new([0.0; 3], [0.0; 3]));
        let out = apply(&dead, &DensityMatrix::ground()).unwrap();
        assert_eq!(out, DensityMatrix::maximally_mixed());
    }

    #[test]
    fn affine_ball_check() {
        assert!(AffineChannel::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], [0.0, 0.0, 0.5]).is_err());
        assert!(AffineChannel::new([[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]], [0.0, 0.0, 0.5]).is_ok());
        // the transpose-like map is positive but not CP
        let tr = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        assert!(AffineChannel::new(tr, [0.0; 3]).is_ok());
        assert!(AffineChannel::new_cptp(tr, [0.0; 3]).is_err());
    }

    #[test]
    fn affine_matrix_extension_matches_bloch_action() {
        let a = AffineChannel::from_parts(
            [[0.2, 0.1, 0.0], [-0.1, 0.3, 0.05], [0.0, 0.2, 0.4]],
            [0.1, -0.2, 0.3],
        );
        let rho = bloch_to_density(BlochVector::new(0.3, 0.2, -0.6)).unwrap();
        let via_matrix = DensityMatrix::from_matrix(&a.apply_matrix(&rho.matrix())).unwrap();
        assert!(via_matrix.bloch().dist(a.map_bloch(rho.bloch())) < 1e-15);
    }
}

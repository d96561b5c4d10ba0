//! The walk: site `k = 1..n` carries `Φᵏ(ρ₀)`, and collective observables
//! are sums of one single-site observable over a block of sites.

mod clt;
mod lattice;
mod ldp;
mod words;

pub use clt::{clt_diagnostic, gaussian_cdf, ks_distance, CltReport};
pub use lattice::{
    exact_distribution, exact_moments, log_weights, sum_moments, LatticeDistribution, MAX_MOMENT_ORDER,
};
pub use ldp::{
    lambda_limit, lambda_n, ldp_diagnostic, ldp_diagnostic_tail, legendre_numeric, rate_function, LdpReport,
    RateFunction, Tail,
};
pub use words::{
    commutator_identity_check, ordered_wick_moment, symmetrized_expectation, wick_moment, wick_moment_windows,
    word_expectation, CommutatorReport, Letter, WordSpec, MAX_SYMMETRIZED_DEGREE, MAX_WORD_DEGREE,
};

use thiserror::Error;

use crate::algebra::{dot, pauli_combination, AlgebraError, BlochVector, DensityMatrix, Mat2};
use crate::channel::{analyze, AffineChannel, Channel, ChannelAnalysis, ChannelError};

/// Slack for `⌊n·t⌋` so that `n·t` landing a rounding error below an
/// integer still counts that site.
pub const FLOOR_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("walk needs at least one site")]
    NoSites,
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("window ({0}, {1}] is invalid; need 0 <= t0 < t1")]
    InvalidWindow(f64, f64),
    #[error("window ({t0}, {t1}] holds no site at n = {n}")]
    EmptyWindow { t0: f64, t1: f64, n: usize },
    #[error("window endpoint {t} is not on the 1/{n} grid")]
    OffGrid { t: f64, n: usize },
    #[error("word degree {degree} exceeds the maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("empty word")]
    EmptyWord,
    #[error("moment order {0} is outside 1..=12")]
    MomentOrder(usize),
    #[error("limit variance {0:e} vanishes; the law collapses")]
    DegenerateVariance(f64),
    #[error("direction is degenerate: |<nu, v>| = |nu|")]
    DegenerateDirection,
    #[error("x = {x} is not strictly inside (-{norm}, {norm})")]
    OutsideSupport { x: f64, norm: f64 },
    #[error("x = {x} is on the wrong side of the mean {mean} for the {tail:?} tail")]
    WrongTail { x: f64, mean: f64, tail: Tail },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A channel, an initial state and a site count.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec {
    pub channel: Channel,
    pub rho0: DensityMatrix,
    pub n: usize,
}

impl WalkSpec {
    pub fn new(channel: Channel, rho0: DensityMatrix, n: usize) -> Result<Self, WalkError> {
        if n == 0 {
            return Err(WalkError::NoSites);
        }
        Ok(WalkSpec { channel, rho0, n })
    }

    /// Starts at the channel's unique fixed point.
    pub fn stationary(channel: Channel, n: usize) -> Result<Self, WalkError> {
        let rho = analyze(&channel, None)?.rho_inf;
        WalkSpec::new(channel, rho, n)
    }

    pub fn with_n(&self, n: usize) -> Result<Self, WalkError> {
        WalkSpec::new(self.channel.clone(), self.rho0, n)
    }

    /// Stationary data, using `rho0` to resolve a non-unique fixed point.
    pub fn analysis(&self) -> Result<ChannelAnalysis, WalkError> {
        Ok(analyze(&self.channel, Some(&self.rho0))?)
    }

    /// Bloch vectors of `Φᵏ(ρ₀)` for `k = 0..=last`.
    pub fn trajectory(&self, last: usize) -> Vec<BlochVector> {
        trajectory(&self.channel.affine(), self.rho0.bloch(), last)
    }
}

pub(crate) fn trajectory(ch: &AffineChannel, r0: BlochVector, last: usize) -> Vec<BlochVector> {
    let mut out = Vec::with_capacity(last + 1);
    let mut r = r0;
    out.push(r);
    for _ in 0..last {
        r = ch.map_bloch(r);
        out.push(r);
    }
    out
}

/// The single-site observable `ν·σ − center·I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    nu: [f64; 3],
    center: f64,
}

impl Direction {
    pub fn new(nu: [f64; 3], center: f64) -> Result<Self, WalkError> {
        let norm = dot(nu, nu).sqrt();
        if !(norm > 0.0) || !norm.is_finite() || !center.is_finite() {
            return Err(WalkError::ZeroDirection);
        }
        Ok(Direction { nu, center })
    }

    /// `ν·σ` without centering.
    pub fn raw(nu: [f64; 3]) -> Result<Self, WalkError> {
        Direction::new(nu, 0.0)
    }

    /// Centered at the stationary mean `⟨ν, v⟩`.
    pub fn centered(nu: [f64; 3], v: BlochVector) -> Result<Self, WalkError> {
        Direction::new(nu, dot(nu, v.to_array()))
    }

    pub fn nu(&self) -> [f64; 3] {
        self.nu
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn norm(&self) -> f64 {
        dot(self.nu, self.nu).sqrt()
    }

    pub fn matrix(&self) -> Mat2 {
        pauli_combination(self.nu) - Mat2::identity() * self.center
    }

    pub fn a_plus(&self) -> f64 {
        self.norm() - self.center
    }

    pub fn a_minus(&self) -> f64 {
        -self.norm() - self.center
    }

    /// Probability of the `a_plus` outcome in the state with Bloch vector `r`.
    pub fn plus_probability(&self, r: BlochVector) -> f64 {
        (0.5 * (1.0 + dot(self.nu, r.to_array()) / self.norm())).clamp(0.0, 1.0)
    }
}

/// The time interval `(t0, t1]`, covering sites `⌊n·t0⌋+1 ..= ⌊n·t1⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub t0: f64,
    pub t1: f64,
}

impl Window {
    pub fn new(t0: f64, t1: f64) -> Result<Self, WalkError> {
        if !(t0 >= 0.0 && t1 > t0 && t1.is_finite()) {
            return Err(WalkError::InvalidWindow(t0, t1));
        }
        Ok(Window { t0, t1 })
    }

    /// `(0, t]`.
    pub fn up_to(t: f64) -> Result<Self, WalkError> {
        Window::new(0.0, t)
    }

    fn floor(n: usize, t: f64) -> usize {
        (n as f64 * t + FLOOR_SLACK).floor() as usize
    }

    /// First and last site (1-based, inclusive); `first > last` when empty.
    pub fn site_range(&self, n: usize) -> (usize, usize) {
        (Window::floor(n, self.t0) + 1, Window::floor(n, self.t1))
    }

    pub fn site_count(&self, n: usize) -> usize {
        let (a, b) = self.site_range(n);
        (b + 1).saturating_sub(a)
    }

    pub fn contains_site(&self, n: usize, k: usize) -> bool {
        let (a, b) = self.site_range(n);
        a <= k && k <= b
    }

    /// Both endpoints are multiples of `1/n` up to rounding.
    pub fn check_grid(&self, n: usize) -> Result<(), WalkError> {
        for t in [self.t0, self.t1] {
            let nt = n as f64 * t;
            if (nt - nt.round()).abs() > FLOOR_SLACK {
                return Err(WalkError::OffGrid { t, n });
            }
        }
        Ok(())
    }

    pub fn overlap(&self, other: &Window) -> f64 {
        (self.t1.min(other.t1) - self.t0.max(other.t0)).max(0.0)
    }
}

/// Two-point law of the direction observable at each site of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteLaw {
    pub a_plus: f64,
    pub a_minus: f64,
    pub probs: Vec<f64>,
}

impl SiteLaw {
    pub fn new(a_plus: f64, a_minus: f64, probs: Vec<f64>) -> Result<Self, WalkError> {
        if !(a_plus > a_minus) {
            return Err(WalkError::InvalidParameter(format!(
                "site law needs a_plus > a_minus, got {a_plus} and {a_minus}"
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(WalkError::InvalidParameter(format!("site probability {p} is not in [0, 1]")));
        }
        Ok(SiteLaw { a_plus, a_minus, probs })
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .map(|p| p * self.a_plus + (1.0 - p) * self.a_minus)
            .sum()
    }
}

pub fn site_laws(spec: &WalkSpec, dir: &Direction, win: &Window) -> Result<SiteLaw, WalkError> {
    let (first, last) = win.site_range(spec.n);
    if first > last {
        return Err(WalkError::EmptyWindow {
            t0: win.t0,
            t1: win.t1,
            n: spec.n,
        });
    }
    let traj = spec.trajectory(last);
    let probs = traj[first..=last].iter().map(|r| dir.plus_probability(*r)).collect();
    SiteLaw::new(dir.a_plus(), dir.a_minus(), probs)
}

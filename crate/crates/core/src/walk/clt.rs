use std::f64::consts::SQRT_2;

use super::{exact_distribution, site_laws, Direction, LatticeDistribution, WalkError, WalkSpec, Window};
use crate::channel::{quadratic_form, AssumptionA};

/// Limit variances at or below this count as degenerate.
pub const DEGENERATE_VARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltReport {
    pub n: usize,
    pub ks_distance: f64,
    pub target_variance: f64,
    /// `FailsSpectralRadiusOne` flags a limit that depends on the initial
    /// state or is reached without a geometric rate.
    pub assumption_a: AssumptionA,
}

/// CDF of `N(0, variance)`.
pub fn gaussian_cdf(x: f64, variance: f64) -> f64 {
    0.5 * libm::erfc(-x / (SQRT_2 * variance.sqrt()))
}

/// Two-sided sup distance between a lattice law, with values multiplied
/// by `scale`, and `N(0, variance)`. Checks both one-sided limits of the
/// step CDF at every atom.
pub fn ks_distance(dist: &LatticeDistribution, scale: f64, variance: f64) -> f64 {
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (s, w) in dist.weights.iter().enumerate() {
        let g = gaussian_cdf(dist.value(s) * scale, variance);
        let above = below + w;
        worst = worst.max((below - g).abs()).max((above - g).abs());
        below = above;
    }
    worst
}

/// Distance between the exact law of
/// `n^{−1/2}·Σ_{k ≤ ⌊nt⌋} (ν·σ − ⟨ν,v⟩)_k / ‖ν‖` and its Gaussian limit
/// `N(0, t·νᵀCν/‖ν‖²)`.
pub fn clt_diagnostic(spec: &WalkSpec, nu: [f64; 3], t: f64) -> Result<CltReport, WalkError> {
    let analysis = spec.analysis()?;
    let dir = Direction::centered(nu, analysis.v)?;
    let norm = dir.norm();
    let target_variance = t * quadratic_form(&analysis.covariance, nu) / (norm * norm);
    if target_variance <= DEGENERATE_VARIANCE_TOL {
        return Err(WalkError::DegenerateVariance(target_variance));
    }
    let law = site_laws(spec, &dir, &Window::up_to(t)?)?;
    let dist = exact_distribution(&law);
    let scale = 1.0 / ((spec.n as f64).sqrt() * norm);
    Ok(CltReport {
        n: spec.n,
        ks_distance: ks_distance(&dist, scale, target_variance),
        target_variance,
        assumption_a: analysis.assumption_a,
    })
}

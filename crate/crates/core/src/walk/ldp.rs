use super::lattice::log_sum_exp;
use super::{log_weights, site_laws, Direction, WalkError, WalkSpec, Window, FLOOR_SLACK};
use crate::algebra::{dot, BlochVector};

/// `|⟨ν,v⟩| ≥ (1 − DEGENERACY_TOL)·‖ν‖` counts as a degenerate direction.
pub const DEGENERACY_TOL: f64 = 1e-12;
const GOLDEN_TOL: f64 = 1e-10;
const MAX_BRACKET_DOUBLINGS: usize = 60;

/// `log(p·eᵃ + (1−p)·e⁻ᵃ)` without overflow.
fn two_point_cgf(a: f64, p: f64) -> f64 {
    let (u, w) = (a + p.ln(), -a + (1.0 - p).ln());
    let hi = u.max(w);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (-(u - w).abs()).exp().ln_1p()
}

/// `(1/n)·log ω(exp(t·Σ_{k ≤ n} (ν·σ)_k))`.
pub fn lambda_n(spec: &WalkSpec, nu: [f64; 3], t: f64) -> Result<f64, WalkError> {
    let dir = Direction::raw(nu)?;
    let law = site_laws(spec, &dir, &Window::up_to(1.0)?)?;
    let a = dir.norm() * t;
    Ok(law.probs.iter().map(|&p| two_point_cgf(a, p)).sum::<f64>() / spec.n as f64)
}

/// Stationary data entering the limiting cumulant generating function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFunction {
    nu: [f64; 3],
    v: BlochVector,
}

impl RateFunction {
    pub fn new(nu: [f64; 3], v: BlochVector) -> Result<Self, WalkError> {
        Direction::raw(nu)?;
        let rf = RateFunction { nu, v };
        if rf.mean().abs() > rf.norm() * (1.0 + 1e-12) {
            return Err(WalkError::InvalidParameter(format!(
                "|<nu, v>| = {} exceeds |nu| = {}",
                rf.mean().abs(),
                rf.norm()
            )));
        }
        Ok(rf)
    }

    pub fn nu(&self) -> [f64; 3] {
        self.nu
    }

    pub fn v(&self) -> BlochVector {
        self.v
    }

    pub fn norm(&self) -> f64 {
        dot(self.nu, self.nu).sqrt()
    }

    /// `⟨ν, v⟩`.
    pub fn mean(&self) -> f64 {
        dot(self.nu, self.v.to_array())
    }

    pub fn is_degenerate(&self) -> bool {
        self.mean().abs() >= (1.0 - DEGENERACY_TOL) * self.norm()
    }

    fn plus_probability(&self) -> f64 {
        (0.5 * (1.0 + self.mean() / self.norm())).clamp(0.0, 1.0)
    }
}

/// `Λ(t) = log cosh(‖ν‖t) + log(1 + ⟨ν,v⟩/‖ν‖·tanh(‖ν‖t))`, evaluated as
/// the log of a two-point exponential moment.
pub fn lambda_limit(rf: &RateFunction, t: f64) -> f64 {
    two_point_cgf(rf.norm() * t, rf.plus_probability())
}

fn x_log_ratio(a: f64, num: f64, den: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * (num / den).ln()
    }
}

/// Closed-form rate function.
///
/// Finite on the closed interval `[−‖ν‖, ‖ν‖]` (the endpoints carry the
/// limit of the Legendre transform) and `+∞` outside. For a degenerate
/// direction it is 0 at `⟨ν,v⟩` and `+∞` elsewhere.
pub fn rate_function(rf: &RateFunction, x: f64) -> f64 {
    let (n, m) = (rf.norm(), rf.mean());
    if rf.is_degenerate() {
        return if (x - m).abs() <= DEGENERACY_TOL * n { 0.0 } else { f64::INFINITY };
    }
    if x.abs() > n {
        return f64::INFINITY;
    }
    let r = x / n;
    0.5 * (x_log_ratio(1.0 + r, n + x, n + m) + x_log_ratio(1.0 - r, n - x, n - m))
}

/// `sup_t (t·x − Λ(t))` by golden-section search on a doubling bracket.
pub fn legendre_numeric(rf: &RateFunction, x: f64) -> Result<f64, WalkError> {
    let n = rf.norm();
    if !(x.abs() < n) {
        return Err(WalkError::OutsideSupport { x, norm: n });
    }
    let m = rf.mean();
    if x == m {
        return Ok(0.0);
    }
    if rf.is_degenerate() {
        return Err(WalkError::DegenerateDirection);
    }
    let sign = if x > m { 1.0 } else { -1.0 };
    let g = |s: f64| sign * s * x - lambda_limit(rf, sign * s);

    let mut h = 1.0;
    let mut doublings = 0;
    while g(2.0 * h) > g(h) {
        h *= 2.0;
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS {
            return Err(WalkError::OutsideSupport { x, norm: n });
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 2.0 * h);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    while hi - lo > GOLDEN_TOL {
        if gc > gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - inv_phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + inv_phi * (hi - lo);
            gd = g(d);
        }
    }
    Ok(g(0.5 * (lo + hi)).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// `P(S_n/n ≥ x)`, for `x` above the mean.
    Upper,
    /// `P(S_n/n ≤ x)`, for `x` below the mean.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdpReport {
    pub n: usize,
    pub x: f64,
    pub tail: Tail,
    /// `−(1/n)·log P(tail event)`.
    pub empirical_rate: f64,
    pub limit_rate: f64,
}

/// Upper-tail large-deviation diagnostic for `S_n = Σ_{k ≤ n} (ν·σ)_k`.
pub fn ldp_diagnostic(spec: &WalkSpec, nu: [f64; 3], x: f64) -> Result<LdpReport, WalkError> {
    ldp_diagnostic_tail(spec, nu, x, Tail::Upper)
}

pub fn ldp_diagnostic_tail(spec: &WalkSpec, nu: [f64; 3], x: f64, tail: Tail) -> Result<LdpReport, WalkError> {
    let v = spec.analysis()?.v;
    let rf = RateFunction::new(nu, v)?;
    if rf.is_degenerate() {
        return Err(WalkError::DegenerateDirection);
    }
    let norm = rf.norm();
    if !(x.abs() < norm) {
        return Err(WalkError::OutsideSupport { x, norm });
    }
    let dir = Direction::raw(nu)?;
    let law = site_laws(spec, &dir, &Window::up_to(1.0)?)?;
    let n = spec.n;
    let mean = law.mean() / n as f64;
    let wrong_side = match tail {
        Tail::Upper => x <= mean,
        Tail::Lower => x >= mean,
    };
    if wrong_side {
        return Err(WalkError::WrongTail { x, mean, tail });
    }
    let lw = log_weights(&law);
    // value of index s is (2s − n)·‖ν‖
    let cut = n as f64 * (x + norm) / (2.0 * norm);
    let log_p = match tail {
        Tail::Upper => {
            let s0 = ((cut - FLOOR_SLACK).ceil().max(0.0) as usize).min(n + 1);
            log_sum_exp(&lw[s0..])
        }
        Tail::Lower => {
            let s1 = ((cut + FLOOR_SLACK).floor().max(0.0) as usize).min(n);
            log_sum_exp(&lw[..=s1])
        }
    };
    Ok(LdpReport {
        n,
        x,
        tail,
        empirical_rate: -log_p / n as f64,
        limit_rate: rate_function(&rf, x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DensityMatrix;
    use crate::channel::Channel;
    use crate::zoo;

    fn fair() -> RateFunction {
        RateFunction::new([1.0, 0.0, 0.0], BlochVector::ORIGIN).unwrap()
    }

    #[test]
    fn lambda_limit_cases() {
        let rf = fair();
        assert_eq!(lambda_limit(&rf, 0.0), 0.0);
        for t in [-3.0, -0.4, 0.7, 2.5, 400.0] {
            let want = if t < 100.0 { f64::cosh(t).ln() } else { t - 2f64.ln() };
            assert!((lambda_limit(&rf, t) - want).abs() < 1e-12);
        }
        let amp = RateFunction::new([0.0, 0.0, 1.0], BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        for t in [-5.0, -1.0, 0.3, 4.0] {
            assert!((lambda_limit(&amp, t) - t).abs() < 1e-12);
        }
        let rf = RateFunction::new([0.5, 1.0, -2.0], BlochVector::new(0.2, 0.3, 0.1)).unwrap();
        let h = 1e-6;
        let slope = (lambda_limit(&rf, h) - lambda_limit(&rf, -h)) / (2.0 * h);
        assert!((slope - rf.mean()).abs() < 1e-8);
    }

    #[test]
    fn rate_function_values() {
        let rf = fair();
        let want = 0.5 * (1.5 * 1.5f64.ln() + 0.5 * 0.5f64.ln());
        assert!((rate_function(&rf, 0.5) - want).abs() < 1e-15);
        assert!((want - 0.130_812).abs() < 1e-6);
        assert_eq!(rate_function(&rf, 0.0), 0.0);
        assert!((rate_function(&rf, 1.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(rate_function(&rf, 1.0 + 1e-9), f64::INFINITY);
        let rf = RateFunction::new([0.0, 2.0, 0.0], BlochVector::new(0.0, 0.4, 0.0)).unwrap();
        assert_eq!(rate_function(&rf, 0.8), 0.0);
        assert!((rate_function(&rf, -2.0) - (4.0f64 / 1.2).ln()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_rate_function() {
        let rf = RateFunction::new([0.0, 0.0, 1.0], BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!(rf.is_degenerate());
        assert_eq!(rate_function(&rf, 1.0), 0.0);
        assert_eq!(rate_function(&rf, 0.5), f64::INFINITY);
        assert_eq!(legendre_numeric(&rf, 0.5), Err(WalkError::DegenerateDirection));
    }

    #[test]
    fn legendre_matches_closed_form() {
        let rf = RateFunction::new([1.0, -0.5, 0.3], BlochVector::new(0.3, 0.2, -0.6)).unwrap();
        let n = rf.norm();
        for i in 1..20 {
            let x = -n + 2.0 * n * i as f64 / 20.0;
            let a = legendre_numeric(&rf, x).unwrap();
            assert!((a - rate_function(&rf, x)).abs() < 1e-9, "x = {x}");
        }
        assert_eq!(legendre_numeric(&rf, rf.mean()), Ok(0.0));
        assert!(legendre_numeric(&rf, n).is_err());
    }

    #[test]
    fn lambda_n_of_fair_coins() {
        let spec = WalkSpec::new(Channel::identity(), DensityMatrix::maximally_mixed(), 10).unwrap();
        for t in [-2.0, 0.0, 0.5, 3.0] {
            assert!((lambda_n(&spec, [0.0, 3.0, 4.0], t).unwrap() - (5.0 * t).cosh().ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn fair_coin_tail() {
        let spec = WalkSpec::new(Channel::identity(), DensityMatrix::maximally_mixed(), 2000).unwrap();
        let r = ldp_diagnostic(&spec, [1.0, 0.0, 0.0], 0.5).unwrap();
        assert!((r.empirical_rate - r.limit_rate).abs() < 0.01);
        assert!(r.empirical_rate > r.limit_rate);
        let low = ldp_diagnostic_tail(&spec, [1.0, 0.0, 0.0], -0.5, Tail::Lower).unwrap();
        assert!((low.empirical_rate - r.empirical_rate).abs() < 1e-12);
        assert!(matches!(
            ldp_diagnostic(&spec, [1.0, 0.0, 0.0], -0.5),
            Err(WalkError::WrongTail { .. })
        ));
        assert!(matches!(
            ldp_diagnostic(&spec, [1.0, 0.0, 0.0], 1.0),
            Err(WalkError::OutsideSupport { .. })
        ));
    }

    #[test]
    fn degenerate_direction_is_refused() {
        let ch = Channel::Kraus(zoo::amplitude_damping(0.5).unwrap().channel);
        let spec = WalkSpec::stationary(ch, 100).unwrap();
        assert_eq!(
            ldp_diagnostic(&spec, [0.0, 0.0, 1.0], 0.5),
            Err(WalkError::DegenerateDirection)
        );
    }
}

use super::{SiteLaw, WalkError};

pub const MAX_MOMENT_ORDER: usize = 12;

/// Law of a sum of two-valued site outcomes: mass `weights[s]` at
/// `offset + s·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDistribution {
    pub offset: f64,
    pub step: f64,
    pub weights: Vec<f64>,
}

impl LatticeDistribution {
    pub fn value(&self, s: usize) -> f64 {
        self.offset + s as f64 * self.step
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    pub fn raw_moment(&self, order: u32) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(s, w)| w * self.value(s).powi(order as i32))
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Poisson-binomial law of the window sum, `O(m²)`.
pub fn exact_distribution(law: &SiteLaw) -> LatticeDistribution {
    let m = law.probs.len();
    let mut w = vec![0.0; m + 1];
    w[0] = 1.0;
    for (k, &p) in law.probs.iter().enumerate() {
        for s in (1..=k + 1).rev() {
            w[s] = w[s] * (1.0 - p) + w[s - 1] * p;
        }
        w[0] *= 1.0 - p;
    }
    LatticeDistribution {
        offset: m as f64 * law.a_minus,
        step: law.a_plus - law.a_minus,
        weights: w,
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// Natural logarithms of the Poisson-binomial weights, kept in log form
/// throughout so deep tails do not underflow.
pub fn log_weights(law: &SiteLaw) -> Vec<f64> {
    let m = law.probs.len();
    let mut lw = vec![f64::NEG_INFINITY; m + 1];
    lw[0] = 0.0;
    for (k, &p) in law.probs.iter().enumerate() {
        let (lp, lq) = (p.ln(), (1.0 - p).ln());
        for s in (1..=k + 1).rev() {
            lw[s] = log_add(lw[s] + lq, lw[s - 1] + lp);
        }
        lw[0] += lq;
    }
    lw
}

/// `log Σ exp(xᵢ)`.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + xs.iter().map(|x| (x - hi).exp()).sum::<f64>().ln()
}

fn binomials(order: usize) -> Vec<Vec<f64>> {
    let mut c = vec![vec![0.0; order + 1]; order + 1];
    for j in 0..=order {
        c[j][0] = 1.0;
        for i in 1..=j {
            c[j][i] = c[j - 1][i - 1] + if i < j { c[j - 1][i] } else { 0.0 };
        }
    }
    c
}

/// Raw moments `0..=order` of a sum of independent two-point variables,
/// each given as `(a_plus, a_minus, P(a_plus))`.
pub fn sum_moments(sites: impl IntoIterator<Item = (f64, f64, f64)>, order: usize) -> Vec<f64> {
    let c = binomials(order);
    let mut acc = vec![0.0; order + 1];
    acc[0] = 1.0;
    let mut site = vec![0.0; order + 1];
    let mut next = vec![0.0; order + 1];
    for (hi, lo, p) in sites {
        let (mut ph, mut pl) = (1.0, 1.0);
        for m in site.iter_mut() {
            *m = p * ph + (1.0 - p) * pl;
            ph *= hi;
            pl *= lo;
        }
        for j in 0..=order {
            next[j] = (0..=j).map(|i| c[j][i] * acc[i] * site[j - i]).sum();
        }
        std::mem::swap(&mut acc, &mut next);
    }
    acc
}

/// Raw moments `0..=max_order` of the window sum, `O(m·P²)`.
pub fn exact_moments(law: &SiteLaw, max_order: usize) -> Result<Vec<f64>, WalkError> {
    if !(1..=MAX_MOMENT_ORDER).contains(&max_order) {
        return Err(WalkError::MomentOrder(max_order));
    }
    Ok(sum_moments(
        law.probs.iter().map(|&p| (law.a_plus, law.a_minus, p)),
        max_order,
    ))
}

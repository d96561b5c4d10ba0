use num_complex::Complex64;

use super::{sum_moments, Direction, WalkError, WalkSpec, Window};
use crate::algebra::{commutator, herm_eigen2, pauli, Axis, BlochVector, Mat2};
use crate::channel::Covariance;

pub const MAX_WORD_DEGREE: usize = 8;
pub const MAX_SYMMETRIZED_DEGREE: usize = 6;

/// One factor `n^{−1/2}·Σ_{k ∈ window} (direction)_k` of a word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Letter {
    pub dir: Direction,
    pub window: Window,
}

/// An ordered product of letters.
#[derive(Debug, Clone, PartialEq)]
pub struct WordSpec {
    letters: Vec<Letter>,
}

impl WordSpec {
    pub fn new(letters: Vec<Letter>) -> Result<Self, WalkError> {
        if letters.is_empty() {
            return Err(WalkError::EmptyWord);
        }
        if letters.len() > MAX_WORD_DEGREE {
            return Err(WalkError::DegreeOverflow {
                degree: letters.len(),
                max: MAX_WORD_DEGREE,
            });
        }
        Ok(WordSpec { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn reversed(&self) -> WordSpec {
        WordSpec {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Bit `i` set when letter `i` covers site `k`.
    fn active(&self, n: usize, k: usize) -> usize {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| l.window.contains_site(n, k))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    fn last_site(&self, n: usize) -> usize {
        self.letters.iter().map(|l| l.window.site_range(n).1).max().unwrap_or(0)
    }
}

fn trace_against(coords: &[Complex64; 4], r: BlochVector) -> Complex64 {
    (coords[0] + coords[1] * r.x + coords[2] * r.y + coords[3] * r.z) * 0.5
}

/// `ω(L₁ L₂ ⋯ L_d)` for the walk truncated to `n` sites.
///
/// Expanding each letter over its sites, distinct sites commute, so every
/// assignment factorizes into per-site traces of ordered sub-products. A
/// dynamic program over sites tracks which letter positions are already
/// placed: `O(n·3^d)`.
pub fn word_expectation(spec: &WalkSpec, word: &WordSpec) -> Result<Complex64, WalkError> {
    let d = word.degree();
    if d > MAX_WORD_DEGREE {
        return Err(WalkError::DegreeOverflow {
            degree: d,
            max: MAX_WORD_DEGREE,
        });
    }
    let n = spec.n;
    for l in word.letters() {
        l.window.check_grid(n)?;
    }
    let full = (1usize << d) - 1;
    let mats: Vec<Mat2> = word.letters().iter().map(|l| l.dir.matrix()).collect();
    let coords: Vec<[Complex64; 4]> = (0..=full)
        .map(|u| {
            (0..d)
                .filter(|i| u >> i & 1 == 1)
                .fold(Mat2::identity(), |acc, i| acc * mats[i])
                .pauli_coords()
        })
        .collect();

    let last = word.last_site(n);
    let traj = spec.trajectory(last);
    let zero = Complex64::new(0.0, 0.0);
    let mut dp = vec![zero; full + 1];
    dp[0] = Complex64::new(1.0, 0.0);
    let mut traces = vec![zero; full + 1];
    for (k, r) in traj.iter().enumerate().skip(1) {
        let active = word.active(n, k);
        if active == 0 {
            continue;
        }
        let mut u = active;
        while u > 0 {
            traces[u] = trace_against(&coords[u], *r);
            u = (u - 1) & active;
        }
        let mut next = dp.clone();
        for (s, &w) in dp.iter().enumerate() {
            if w == zero {
                continue;
            }
            let avail = active & !s;
            let mut u = avail;
            while u > 0 {
                next[s | u] += w * traces[u];
                u = (u - 1) & avail;
            }
        }
        dp = next;
    }
    Ok(dp[full] * (n as f64).powf(-(d as f64) / 2.0))
}

/// `ω` of the average of the word over all orderings of its letters.
///
/// Polarization writes the symmetrized product as
/// `(2^d d!)⁻¹ Σ_ε (Π εᵢ)(Σ εᵢ Lᵢ)^d`; each power of a real combination
/// is a sum of commuting site observables, so its moment is classical.
/// Sign vectors come in `±ε` pairs with equal terms, so `ε₀ = +1` is fixed.
pub fn symmetrized_expectation(spec: &WalkSpec, word: &WordSpec) -> Result<f64, WalkError> {
    let d = word.degree();
    if d > MAX_SYMMETRIZED_DEGREE {
        return Err(WalkError::DegreeOverflow {
            degree: d,
            max: MAX_SYMMETRIZED_DEGREE,
        });
    }
    let n = spec.n;
    let last = word.last_site(n);
    let traj = spec.trajectory(last);
    let actives: Vec<usize> = (0..=last).map(|k| if k == 0 { 0 } else { word.active(n, k) }).collect();
    let mats: Vec<Mat2> = word.letters().iter().map(|l| l.dir.matrix()).collect();

    let mut total = 0.0;
    for signs in 0..1usize << (d - 1) {
        let eps = |i: usize| if i > 0 && signs >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
        let sign: f64 = (0..d).map(eps).product();
        let mut cache: Vec<Option<[(f64, Mat2); 2]>> = vec![None; 1 << d];
        let mut sites = Vec::with_capacity(last);
        for k in 1..=last {
            let active = actives[k];
            if active == 0 {
                continue;
            }
            if cache[active].is_none() {
                let h = (0..d)
                    .filter(|i| active >> i & 1 == 1)
                    .fold(Mat2::zero(), |acc, i| acc + mats[i] * eps(i));
                let [hi, lo] = herm_eigen2(&h)?;
                cache[active] = Some([(hi.value, hi.projector), (lo.value, lo.projector)]);
            }
            let [(hi, proj), (lo, _)] = cache[active].expect("cached above");
            let r = traj[k];
            let p = trace_against(&proj.pauli_coords(), r).re.clamp(0.0, 1.0);
            sites.push((hi, lo, p));
        }
        total += sign * sum_moments(sites, d)[d];
    }
    let d_factorial: f64 = (1..=d).map(|i| i as f64).product();
    let norm = 2.0 / (2f64.powi(d as i32) * d_factorial);
    Ok(total * norm * (n as f64).powf(-(d as f64) / 2.0))
}

fn pairing_sum<F>(items: &[usize], weight: &F) -> Complex64
where
    F: Fn(usize, usize) -> Complex64,
{
    match items {
        [] => Complex64::new(1.0, 0.0),
        [_] => Complex64::new(0.0, 0.0),
        [first, rest @ ..] => {
            let mut total = Complex64::new(0.0, 0.0);
            for j in 0..rest.len() {
                let w = weight(*first, rest[j]);
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let remaining: Vec<usize> = rest.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
                total += w * pairing_sum(&remaining, weight);
            }
            total
        }
    }
}

/// `E[Π_j B^{(i_j)}(window_j)]` for a Brownian motion with covariance
/// `C·t`, where `B(window)` is the increment over the window. Components
/// are indexed 0, 1, 2 for x, y, z.
pub fn wick_moment_windows(c: &Covariance, letters: &[(usize, Window)]) -> f64 {
    if letters.len() % 2 == 1 {
        return 0.0;
    }
    let idx: Vec<usize> = (0..letters.len()).collect();
    pairing_sum(&idx, &|a, b| {
        let ((i, wa), (j, wb)) = (letters[a], letters[b]);
        Complex64::new(c[i][j] * wa.overlap(&wb), 0.0)
    })
    .re
}

/// `E[Π_j B^{(i_j)}_{t_j}]`: sum over perfect matchings of
/// `C_{i,i′}·min(t, t′)`. Components are indexed 0, 1, 2.
pub fn wick_moment(c: &Covariance, letters: &[(usize, f64)]) -> f64 {
    if letters.len() % 2 == 1 {
        return 0.0;
    }
    let idx: Vec<usize> = (0..letters.len()).collect();
    pairing_sum(&idx, &|a, b| {
        let ((i, ta), (j, tb)) = (letters[a], letters[b]);
        Complex64::new(c[i][j] * ta.min(tb), 0.0)
    })
    .re
}

/// Limit of an ordered word of centered Pauli letters: the pairing sum
/// with the one-site covariance `D_ij = δ_ij − v_i v_j + i ε_ijk v_k`,
/// each pair taken in word order.
pub fn ordered_wick_moment(v: BlochVector, letters: &[(usize, Window)]) -> Complex64 {
    if letters.len() % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let va = v.to_array();
    let d = |i: usize, j: usize| {
        let re = if i == j { 1.0 } else { 0.0 } - va[i] * va[j];
        let im = match (i, j) {
            (0, 1) => va[2],
            (1, 2) => va[0],
            (2, 0) => va[1],
            (1, 0) => -va[2],
            (2, 1) => -va[0],
            (0, 2) => -va[1],
            _ => 0.0,
        };
        Complex64::new(re, im)
    };
    let idx: Vec<usize> = (0..letters.len()).collect();
    pairing_sum(&idx, &|a, b| {
        let ((i, wa), (j, wb)) = (letters[a], letters[b]);
        d(i, j) * wa.overlap(&wb)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// Largest entry of `[σ_a − v_a, σ_b − v_b] − 2iσ_c` over cyclic `(a, b, c)`.
    pub per_site_defect: f64,
    /// Identity coefficient of `[Z_t, X_t]` at finite `n`: `2i·(⌊nt⌋/n)·v₂`.
    pub exact_coefficient: Complex64,
    /// Its `n → ∞` value `2i·t·v₂`.
    pub limit_coefficient: Complex64,
    pub holds: bool,
}

/// Checks that centering drops out of single-site commutators, and
/// reports the identity term of the collective commutator
/// `[Z_t, X_t] = 2i n^{−1/2} Y_t + 2i (⌊nt⌋/n) v₂`.
pub fn commutator_identity_check(v: BlochVector, n: usize, t: f64) -> CommutatorReport {
    let va = v.to_array();
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let centered = |i: usize| pauli(axes[i]) - Mat2::identity() * va[i];
    let mut defect: f64 = 0.0;
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let lhs = commutator(&centered(a), &centered(b));
        let rhs = pauli(axes[c]).scale(Complex64::new(0.0, 2.0));
        defect = defect.max(lhs.max_abs_diff(&rhs));
    }
    let sites = (n as f64 * t + super::FLOOR_SLACK).floor();
    CommutatorReport {
        per_site_defect: defect,
        exact_coefficient: Complex64::new(0.0, 2.0 * sites / n as f64 * va[1]),
        limit_coefficient: Complex64::new(0.0, 2.0 * t * va[1]),
        holds: defect <= 1e-15,
    }
}

#![allow(dead_code)]

use num_complex::Complex64;
use qubit_walk::algebra::{bloch_to_density, Mat2};
use qubit_walk::walk::{WalkSpec, WordSpec};

/// Dense `2ⁿ × 2ⁿ` complex matrix, row-major.
#[derive(Clone)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Dense {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let n = self.dim;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }
}

/// `ρ₁ ⊗ ρ₂ ⊗ ⋯ ⊗ ρₙ`, site 1 on the most significant bit.
pub fn kron_all(factors: &[Mat2]) -> Dense {
    let n = factors.len();
    let dim = 1 << n;
    let mut out = Dense::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut v = Complex64::new(1.0, 0.0);
            for (k, f) in factors.iter().enumerate() {
                let shift = n - 1 - k;
                v *= f.get(i >> shift & 1, j >> shift & 1);
            }
            out.data[i * dim + j] = v;
        }
    }
    out
}

/// `m` acting on site `k` (1-based) of `n`.
pub fn embed(m: &Mat2, k: usize, n: usize) -> Dense {
    let factors: Vec<Mat2> = (1..=n).map(|s| if s == k { *m } else { Mat2::identity() }).collect();
    kron_all(&factors)
}

/// Word expectation by explicit tensor products; for `n ≤ 6`.
pub fn brute_force_word(spec: &WalkSpec, word: &WordSpec) -> Complex64 {
    let n = spec.n;
    let traj = spec.trajectory(n);
    let states: Vec<Mat2> = traj[1..].iter().map(|r| bloch_to_density(*r).unwrap().matrix()).collect();
    let rho = kron_all(&states);
    let dim = 1 << n;
    let mut product = Dense::zeros(dim);
    for i in 0..dim {
        product.data[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    for letter in word.letters() {
        let mut collective = Dense::zeros(dim);
        for k in 1..=n {
            if letter.window.contains_site(n, k) {
                let e = embed(&letter.dir.matrix(), k, n);
                for (c, x) in collective.data.iter_mut().zip(&e.data) {
                    *c += x;
                }
            }
        }
        product = product.mul(&collective);
    }
    rho.mul(&product).trace() * (n as f64).powf(-(word.degree() as f64) / 2.0)
}

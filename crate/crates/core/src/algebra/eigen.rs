use num_complex::Complex64;

use super::{AlgebraError, HermitianMat4, Mat2, HERMITIAN_TOL};

/// Spectral gap below which a 2×2 Hermitian matrix is treated as a multiple of I.
const DEGENERATE_GAP: f64 = 1e-15;
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub projector: Mat2,
}

/// Closed-form spectral decomposition of a 2×2 Hermitian matrix, largest
/// eigenvalue first.
///
/// A matrix proportional to I gets its eigenvalue twice with projectors
/// `diag(1,0)` and `diag(0,1)`.
pub fn herm_eigen2(m: &Mat2) -> Result<[EigenPair; 2], AlgebraError> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(AlgebraError::NotHermitian(defect));
    }
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b.norm());
    if radius <= DEGENERATE_GAP * mean.abs().max(1.0) {
        return Ok([
            EigenPair {
                value: mean,
                projector: Mat2::diag(1.0, 0.0),
            },
            EigenPair {
                value: mean,
                projector: Mat2::diag(0.0, 1.0),
            },
        ]);
    }
    // P± = ½(I ± (m − mean·I)/radius)
    let shifted = Mat2::new(
        half_diff.into(),
        b,
        b.conj(),
        (-half_diff).into(),
    ) * (1.0 / radius);
    let half_id = Mat2::identity() * 0.5;
    Ok([
        EigenPair {
            value: mean + radius,
            projector: half_id + shifted * 0.5,
        },
        EigenPair {
            value: mean - radius,
            projector: half_id - shifted * 0.5,
        },
    ])
}

type Block = [[Complex64; 4]; 4];

fn off_diagonal_norm(a: &Block) -> f64 {
    let mut s = 0.0;
    for (r, row) in a.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            if r != c {
                s += z.norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a 4×4 Hermitian matrix by cyclic complex Jacobi
/// rotations, sorted descending.
pub fn herm_eigen4(m: &HermitianMat4) -> Result<[f64; 4], AlgebraError> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(AlgebraError::NotHermitian(defect));
    }
    let mut a: Block = *m.entries();
    // symmetrize so rounding in the input cannot feed asymmetric drift
    for r in 0..4 {
        a[r][r] = Complex64::new(a[r][r].re, 0.0);
        for c in (r + 1)..4 {
            let avg = 0.5 * (a[r][c] + a[c][r].conj());
            a[r][c] = avg;
            a[c][r] = avg.conj();
        }
    }
    let scale = a
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1.0);

    let mut converged = off_diagonal_norm(&a) < JACOBI_OFF_TOL * scale;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(AlgebraError::NoConvergence(sweeps));
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) < JACOBI_OFF_TOL * scale;
    }

    let mut eig = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// One Jacobi step annihilating `a[p][q]`: first a phase on column q makes
/// the pivot real, then a real plane rotation zeroes it.
fn rotate(a: &mut Block, p: usize, q: usize) {
    let g = a[p][q];
    let mag = g.norm();
    if mag == 0.0 {
        return;
    }
    let phase = g / mag;
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = U·R with U = diag(1, e^{-iφ}) on (p, q) and R = [[c, s], [−s, c]].
    // Columns p and q of J:
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    // A ← A·J (columns p, q)
    for row in a.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp * jpp + xq * jqp;
        row[q] = xp * jpq + xq * jqq;
    }
    // A ← J*·A (rows p, q)
    for col in 0..4 {
        let (xp, xq) = (a[p][col], a[q][col]);
        a[p][col] = jpp.conj() * xp + jqp.conj() * xq;
        a[q][col] = jpq.conj() * xp + jqq.conj() * xq;
    }
    a[p][q] = Complex64::new(0.0, 0.0);
    a[q][p] = Complex64::new(0.0, 0.0);
    a[p][p] = Complex64::new(a[p][p].re, 0.0);
    a[q][q] = Complex64::new(a[q][q].re, 0.0);
}

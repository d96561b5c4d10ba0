use num_complex::Complex64;

use super::{Channel, ChannelError, KrswChannel};
use crate::algebra::{herm_eigen4, HermitianMat4, Mat2};

/// Choi matrix `(Φ(E_ij))_{ij}` with `E_ij` the matrix units; entry
/// `(2i + a, 2j + b)` is `Φ(E_ij)[a][b]`.
pub fn choi(ch: &Channel) -> Result<HermitianMat4, ChannelError> {
    let zero = Complex64::new(0.0, 0.0);
    let mut e = [[zero; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut unit = Mat2::zero();
            unit.0[i][j] = Complex64::new(1.0, 0.0);
            let block = ch.apply_matrix(&unit);
            for a in 0..2 {
                for b in 0..2 {
                    e[2 * i + a][2 * j + b] = block.get(a, b);
                }
            }
        }
    }
    Ok(HermitianMat4::new(e)?)
}

pub fn min_choi_eigenvalue(ch: &Channel) -> Result<f64, ChannelError> {
    let ev = herm_eigen4(&choi(ch)?)?;
    Ok(ev[3])
}

/// Completely positive iff the smallest Choi eigenvalue is `≥ −tol`.
pub fn is_cp_choi(ch: &Channel, tol: f64) -> Result<bool, ChannelError> {
    Ok(min_choi_eigenvalue(ch)? >= -tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KrswCpReport {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
}

impl KrswCpReport {
    pub fn verdict(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }
}

/// `(t1² + t2²)·num/den`, with 0 when the prefactor vanishes and +∞ for
/// a vanishing denominator otherwise.
fn weighted_ratio(tt: f64, num: f64, den: f64) -> f64 {
    if tt == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        tt * num / den
    }
}

/// The three inequality conditions for complete positivity of a KRSW map.
///
/// Each `±` in the first two conditions must hold for both signs. Only
/// applicable when `|t3| + |λ3| ≤ 1`.
pub fn krsw_cp_conditions(ch: &KrswChannel) -> Result<KrswCpReport, ChannelError> {
    let [l1, l2, l3] = ch.lambda;
    let [t1, t2, t3] = ch.tvec;
    let reach = t3.abs() + l3.abs();
    if !(reach <= 1.0 + 1e-12) {
        return Err(ChannelError::Inapplicable(reach));
    }
    let tt = t1 * t1 + t2 * t2;

    let upper1 = (1.0 + l3).powi(2) - t3 * t3;
    let upper2 = (1.0 - l3).powi(2) - t3 * t3;
    let mut cond1 = true;
    let mut cond2 = true;
    for sign in [1.0, -1.0] {
        let mid1 = upper1 - weighted_ratio(tt, 1.0 + l3 + sign * t3, 1.0 - l3 + sign * t3);
        cond1 &= (l1 + l2).powi(2) <= mid1 && mid1 <= upper1;
        let mid2 = upper2 - weighted_ratio(tt, 1.0 - l3 + sign * t3, 1.0 + l3 + sign * t3);
        cond2 &= (l1 - l2).powi(2) <= mid2 && mid2 <= upper2;
    }

    let (q1, q2, q3) = (l1 * l1, l2 * l2, l3 * l3);
    let lhs = (1.0 - (q1 + q2 + q3) - (tt + t3 * t3)).powi(2);
    let rhs = 4.0 * (q1 * (t1 * t1 + q2) + q2 * (t2 * t2 + q3) + q3 * (t3 * t3 + q1) - 2.0 * l1 * l2 * l3);
    let cond3 = lhs >= rhs;

    Ok(KrswCpReport {
        cond1,
        cond2,
        cond3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::herm_eigen4;

    fn krsw(l: [f64; 3], t: [f64; 3]) -> Channel {
        Channel::Krsw(KrswChannel::new(l, t))
    }

    #[test]
    fn choi_of_identity() {
        let c = choi(&Channel::identity()).unwrap();
        assert!((c.trace().re - 2.0).abs() < 1e-15);
        let ev = herm_eigen4(&c).unwrap();
        for (a, b) in ev.iter().zip([2.0, 0.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(is_cp_choi(&Channel::identity(), 1e-12).unwrap());
    }

    #[test]
    fn choi_of_transpose_like_map() {
        let ch = krsw([1.0, 1.0, -1.0], [0.0; 3]);
        let min = min_choi_eigenvalue(&ch).unwrap();
        assert!((min + 1.0).abs() < 1e-14, "{min}");
        assert!(!is_cp_choi(&ch, 1e-10).unwrap());
    }

    #[test]
    fn conditions_examples() {
        let third = 1.0 / 3.0;
        let r = krsw_cp_conditions(&KrswChannel::new([third; 3], [0.0; 3])).unwrap();
        assert!(r.verdict());
        assert!(is_cp_choi(&krsw([third; 3], [0.0; 3]), 1e-12).unwrap());

        let r = krsw_cp_conditions(&KrswChannel::new([1.0, 1.0, -1.0], [0.0; 3])).unwrap();
        assert!(!r.cond3);
        assert!(!r.verdict());

        let r = krsw_cp_conditions(&KrswChannel::new([0.0; 3], [0.0; 3])).unwrap();
        assert_eq!(r, KrswCpReport { cond1: true, cond2: true, cond3: true });
    }

    #[test]
    fn conditions_inapplicable() {
        assert!(matches!(
            krsw_cp_conditions(&KrswChannel::new([0.0, 0.0, 0.8], [0.0, 0.0, 0.5])),
            Err(ChannelError::Inapplicable(_))
        ));
    }

    #[test]
    fn amplitude_damping_sits_on_the_boundary() {
        let p: f64 = 0.4;
        let s = (1.0 - p).sqrt();
        let k = KrswChannel::new([s, s, 1.0 - p], [0.0, 0.0, p]);
        assert!(min_choi_eigenvalue(&Channel::Krsw(k)).unwrap().abs() < 1e-12);
        let inside = KrswChannel::new([0.99 * s, 0.99 * s, 1.0 - p], [0.0, 0.0, p]);
        assert!(krsw_cp_conditions(&inside).unwrap().verdict());
        assert!(min_choi_eigenvalue(&Channel::Krsw(inside)).unwrap() > -1e-12);
        let outside = KrswChannel::new([1.01 * s, 1.01 * s, 1.0 - p], [0.0, 0.0, p]);
        assert!(!krsw_cp_conditions(&outside).unwrap().verdict());
        assert!(min_choi_eigenvalue(&Channel::Krsw(outside)).unwrap() < 0.0);
    }
}

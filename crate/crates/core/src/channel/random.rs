use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ChannelError, KrausChannel, KrausConvention};
use crate::algebra::{herm_eigen2, Mat2};

const MAX_RETRIES: usize = 8;
const MIN_NORMALIZER_EIGENVALUE: f64 = 1e-12;

fn gaussian_matrix(rng: &mut ChaCha8Rng) -> Mat2 {
    let mut draw = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    Mat2::new(draw(), draw(), draw(), draw())
}

/// `S^{−1/2}` of a positive definite Hermitian `S` via its eigenprojectors.
fn inverse_sqrt(s: &Mat2) -> Option<Mat2> {
    let pairs = herm_eigen2(s).ok()?;
    if pairs[1].value < MIN_NORMALIZER_EIGENVALUE {
        return None;
    }
    Some(
        pairs
            .iter()
            .fold(Mat2::zero(), |acc, p| acc + p.projector * p.value.sqrt().recip()),
    )
}

/// A random CPTP map with `count` Kraus operators, deterministic in `seed`.
///
/// Draws complex Gaussian `G_i` and normalizes them with
/// `S = Σ G_i G_i*` (left convention, `L_i = S^{−1/2} G_i`) or
/// `S = Σ G_i* G_i` (right convention, `L_i = G_i S^{−1/2}`).
pub fn random_kraus_channel(
    seed: u64,
    count: usize,
    convention: KrausConvention,
) -> Result<KrausChannel, ChannelError> {
    if !(1..=4).contains(&count) {
        return Err(ChannelError::KrausCount(count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let gs: Vec<Mat2> = (0..count).map(|_| gaussian_matrix(&mut rng)).collect();
        let s = gs.iter().fold(Mat2::zero(), |acc, g| {
            acc + match convention {
                KrausConvention::LeftAdjoint => *g * g.adjoint(),
                KrausConvention::RightAdjoint => g.adjoint() * *g,
            }
        });
        let Some(root) = inverse_sqrt(&s) else {
            continue;
        };
        let ops = gs
            .into_iter()
            .map(|g| match convention {
                KrausConvention::LeftAdjoint => root * g,
                KrausConvention::RightAdjoint => g * root,
            })
            .collect();
        return KrausChannel::new(ops, convention);
    }
    Err(ChannelError::SingularNormalizer(MAX_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{is_cp_choi, Channel};

    #[test]
    fn single_operator_is_unitary() {
        for conv in [KrausConvention::LeftAdjoint, KrausConvention::RightAdjoint] {
            let ch = random_kraus_channel(11, 1, conv).unwrap();
            let u = ch.ops()[0];
            assert!((u * u.adjoint()).max_abs_diff(&Mat2::identity()) < 1e-12);
            assert!((u.adjoint() * u).max_abs_diff(&Mat2::identity()) < 1e-12);
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = random_kraus_channel(5, 3, KrausConvention::LeftAdjoint).unwrap();
        let b = random_kraus_channel(5, 3, KrausConvention::LeftAdjoint).unwrap();
        let c = random_kraus_channel(6, 3, KrausConvention::LeftAdjoint).unwrap();
        assert_eq!(a, b);
        let diff = a
            .ops()
            .iter()
            .zip(c.ops())
            .map(|(x, y)| x.max_abs_diff(y))
            .fold(0.0, f64::max);
        assert!(diff > 1e-6);
    }

    #[test]
    fn random_channels_are_cp() {
        for seed in 0..50 {
            for count in 1..=4 {
                let conv = if seed % 2 == 0 {
                    KrausConvention::LeftAdjoint
                } else {
                    KrausConvention::RightAdjoint
                };
                let ch = random_kraus_channel(seed, count, conv).unwrap();
                assert!(ch.normalization_defect() < 1e-10);
                assert!(is_cp_choi(&Channel::Kraus(ch), 1e-10).unwrap());
            }
        }
    }

    #[test]
    fn bad_count() {
        assert!(random_kraus_channel(0, 5, KrausConvention::LeftAdjoint).is_err());
    }
}

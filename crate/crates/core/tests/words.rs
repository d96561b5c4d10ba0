mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use qubit_walk::algebra::{bloch_to_density, BlochVector};
use qubit_walk::channel::{random_kraus_channel, Channel, KrausConvention};
use qubit_walk::walk::{
    symmetrized_expectation, word_expectation, Direction, Letter, WalkError, WalkSpec, Window, WordSpec,
    MAX_SYMMETRIZED_DEGREE, MAX_WORD_DEGREE,
};

fn channel(seed: u64) -> Channel {
    Channel::Kraus(random_kraus_channel(seed, 1 + (seed % 4) as usize, KrausConvention::LeftAdjoint).unwrap())
}

fn window(n: usize, a: usize, b: usize) -> Window {
    Window::new(a as f64 / n as f64, b as f64 / n as f64).unwrap()
}

prop_compose! {
    fn letter(n: usize)(
        nu in [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0],
        center in -0.5f64..0.5,
        a in 0..n,
        len in 1..=n,
    ) -> Letter {
        let nu = if nu.iter().all(|x| x.abs() < 1e-3) { [1.0, 0.0, 0.0] } else { nu };
        let b = (a + len).min(n);
        Letter { dir: Direction::new(nu, center).unwrap(), window: window(n, a, b) }
    }
}

prop_compose! {
    fn setup(max_degree: usize)(n in 1usize..=5)(
        letters in prop::collection::vec(letter(n), 1..=max_degree),
        seed in any::<u64>(),
        r in [-0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5],
        n in Just(n),
    ) -> (WalkSpec, WordSpec) {
        let rho0 = bloch_to_density(BlochVector::from_array(r)).unwrap();
        (WalkSpec::new(channel(seed), rho0, n).unwrap(), WordSpec::new(letters).unwrap())
    }
}

/// `S(w) = (1/d!) Σ_π w∘π`, by explicit permutation.
fn permutation_average(spec: &WalkSpec, word: &WordSpec) -> f64 {
    fn permute(rest: Vec<Letter>, prefix: &mut Vec<Letter>, spec: &WalkSpec, acc: &mut (f64, usize)) {
        if rest.is_empty() {
            let w = WordSpec::new(prefix.clone()).unwrap();
            acc.0 += word_expectation(spec, &w).unwrap().re;
            acc.1 += 1;
            return;
        }
        for i in 0..rest.len() {
            let mut r = rest.clone();
            prefix.push(r.remove(i));
            permute(r, prefix, spec, acc);
            prefix.pop();
        }
    }
    let mut acc = (0.0, 0);
    permute(word.letters().to_vec(), &mut Vec::new(), spec, &mut acc);
    acc.0 / acc.1 as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dp_matches_tensor_products((spec, word) in setup(4)) {
        let a = word_expectation(&spec, &word).unwrap();
        let b = common::brute_force_word(&spec, &word);
        prop_assert!((a - b).norm() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn reversal_conjugates((spec, word) in setup(5)) {
        let a = word_expectation(&spec, &word).unwrap();
        let b = word_expectation(&spec, &word.reversed()).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn polarization_matches_permutations((spec, word) in setup(4)) {
        let sym = symmetrized_expectation(&spec, &word).unwrap();
        let avg = permutation_average(&spec, &word);
        prop_assert!((sym - avg).abs() < 1e-11, "{} vs {}", sym, avg);
    }
}

#[test]
fn degree_limits() {
    let full = Window::up_to(1.0).unwrap();
    let x = Letter {
        dir: Direction::raw([1.0, 0.0, 0.0]).unwrap(),
        window: full,
    };
    assert!(matches!(WordSpec::new(vec![]), Err(WalkError::EmptyWord)));
    assert!(matches!(
        WordSpec::new(vec![x; MAX_WORD_DEGREE + 1]),
        Err(WalkError::DegreeOverflow { .. })
    ));
    let spec = WalkSpec::new(Channel::identity(), bloch_to_density(BlochVector::ORIGIN).unwrap(), 4).unwrap();
    let long = WordSpec::new(vec![x; MAX_SYMMETRIZED_DEGREE + 1]).unwrap();
    assert!(matches!(
        symmetrized_expectation(&spec, &long),
        Err(WalkError::DegreeOverflow { .. })
    ));
    assert!(word_expectation(&spec, &long).is_ok());
}

#[test]
fn off_grid_window_is_rejected() {
    let spec = WalkSpec::new(Channel::identity(), bloch_to_density(BlochVector::ORIGIN).unwrap(), 4).unwrap();
    let w = WordSpec::new(vec![Letter {
        dir: Direction::raw([0.0, 0.0, 1.0]).unwrap(),
        window: Window::up_to(0.3).unwrap(),
    }])
    .unwrap();
    assert!(matches!(word_expectation(&spec, &w), Err(WalkError::OffGrid { .. })));
}

#[test]
fn single_site_commutator() {
    // σxσy = iσz, and z = -1 here.
    let spec = WalkSpec::new(Channel::identity(), bloch_to_density(BlochVector::new(0.0, 0.0, -1.0)).unwrap(), 1)
        .unwrap();
    let full = Window::up_to(1.0).unwrap();
    let letter = |nu| Letter {
        dir: Direction::raw(nu).unwrap(),
        window: full,
    };
    let xy = WordSpec::new(vec![letter([1.0, 0.0, 0.0]), letter([0.0, 1.0, 0.0])]).unwrap();
    let w = word_expectation(&spec, &xy).unwrap();
    assert!((w - Complex64::new(0.0, -1.0)).norm() < 1e-15);
}

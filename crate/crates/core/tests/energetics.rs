mod common;

use common::*;
use fpwork::energetics::{
    additive_energy as lib_add, dilate_level_set, excess_additive_energy, moment_t_k, multiplicative_energy_with,
    pigeonhole_decompose, restricted_sigma, sigma_k as lib_sigma, sym_level_set, SymKind, ZeroPolicy,
};
use fpwork::harmonic::{convolve_add, IntegerProfile};
use fpwork::spectral::{les_inequality_check, spectrum, spectrum_mult_energy_report, SpectrumParams};
use fpwork::{Error, ResidueSet};
use proptest::prelude::*;

const PRIMES: &[u64] = &[5, 7, 11, 13, 17];

proptest! {
    #[test]
    fn energies_match_brute_force((a, b) in set_pair_in(PRIMES)) {
        prop_assert_eq!(lib_add(&a, &b).unwrap().value, additive_energy(&a, &b));
        let (a0, b0) = (a.without(0), b.without(0));
        prop_assert_eq!(
            multiplicative_energy_with(&a, &b, ZeroPolicy::Exclude).unwrap().value,
            multiplicative_energy(&a0, &b0)
        );
    }

    #[test]
    fn excess_energy_is_nonnegative(a in set_in(PRIMES)) {
        let e = excess_additive_energy(&a).unwrap();
        prop_assert!(e.cmp_integer(0).is_ge());
    }

    #[test]
    fn symmetric_sets_have_sigma_equal_to_moment(half in set_in(&[5, 7, 11])) {
        let a = half.union(&half.negate());
        for k in 1..=2 {
            prop_assert_eq!(lib_sigma(&a, 2 * k).unwrap() as u128, moment_t_k(&a, k).unwrap());
        }
    }

    #[test]
    fn additive_level_sets_match_definition((q, r) in set_pair_in(PRIMES), t in 1u64..4) {
        let f = q.field();
        let got = sym_level_set(&q, &r, t, SymKind::Additive).unwrap();
        for x in 0..f.p() {
            let n = r.iter().filter(|&y| q.contains(f.sub(x, y))).count() as u64;
            prop_assert_eq!(got.contains(x), n >= t);
        }
    }

    #[test]
    fn dilate_level_sets_match_definition((a, b) in set_pair_in(PRIMES), tau in 1u64..4) {
        let f = a.field();
        let got = dilate_level_set(&a, &b, tau).unwrap();
        for s in 1..f.p() {
            let n = b.iter().filter(|&y| a.contains(f.mul(s, y))).count() as u64;
            prop_assert_eq!(got.contains(s), n >= tau);
        }
        prop_assert!(!got.contains(0));
    }

    #[test]
    fn decomposition_postconditions((a, half) in set_pair_in(&[11, 13, 31])) {
        let p_set = half.union(&half.negate());
        let sigma = restricted_sigma(&a, &p_set).unwrap();
        match pigeonhole_decompose(&a, &p_set) {
            Err(Error::EmptyMass) => prop_assert_eq!(sigma, 0),
            Err(e) => prop_assert!(false, "unexpected {e}"),
            Ok(d) => {
                let l = 1.0 + (a.len() as f64).log2().floor();
                prop_assert!(d.subset.is_subset(&a) && !d.subset.is_empty());
                let conv = convolve_add(&IntegerProfile::indicator(&a), &IntegerProfile::indicator(&p_set)).unwrap();
                prop_assert!(d.subset.iter().all(|x| conv.get(x) >= d.level));
                prop_assert!(d.level as f64 <= 4.0 * l * d.subset.len() as f64);
                let mass = (d.subset.len() as u64 * d.level) as f64;
                prop_assert!(mass <= sigma as f64 && mass * 8.0 * l * l >= sigma as f64);
            }
        }
    }

    #[test]
    fn spectrum_is_symmetric_and_bounded(a in set_in(&[11, 31, 101]), eps in 0.05f64..=1.0) {
        prop_assume!(!a.is_empty());
        let params = SpectrumParams::new(a.clone(), eps).unwrap();
        let spec = spectrum(&params);
        prop_assert!(spec.contains(0) && spec.is_symmetric());
        for k in [2, 3] {
            prop_assert!(les_inequality_check(&params, &spec, k).unwrap().ok);
        }
        // any element outside the spectrum is rejected
        if let Some(r) = (0..a.field().p()).find(|&r| !spec.contains(r)) {
            let b = ResidueSet::singleton(a.field(), r);
            prop_assert!(matches!(les_inequality_check(&params, &b, 2), Err(Error::NotInSpectrum(_))));
        }
    }
}

#[test]
fn mult_energy_report_respects_size_hypothesis() {
    let f = field(101);
    let mut r = rng(30);
    let a = random_set(f, 30, &mut r);
    let params = SpectrumParams::new(a, 0.3).unwrap();
    let spec = spectrum(&params);
    let small = ResidueSet::new(f, spec.elements().iter().copied().take(3));
    let report = spectrum_mult_energy_report(&params, &small).unwrap();
    assert_eq!(report.emult, multiplicative_energy(&small, &small));
    assert!(report.size as f64 <= report.size_limit);
    let full = ResidueSet::full(f);
    let everything = SpectrumParams::new(ResidueSet::singleton(f, 0), 1.0).unwrap();
    assert!(matches!(spectrum_mult_energy_report(&everything, &full), Err(Error::HypothesisViolated(_))));
}

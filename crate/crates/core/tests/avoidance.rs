mod common;

use common::*;
use fpwork::avoidance::{
    avoids as lib_avoids, bound_catalog, bound_threshold, catalog_entry, count_solutions, deviation_regime,
    family_counts, max_avoiding, Regime, SearchMode, SearchOptions,
};
use fpwork::families::{AffineEquation, EquationFamily};
use fpwork::{Error, ResidueSet};
use proptest::prelude::*;

fn equation(p: u64) -> impl Strategy<Value = AffineEquation> {
    (1..p, 1..p, 1..p, 0..p).prop_map(move |(a, b, c, d)| AffineEquation::new(field(p), a, b, c, d).unwrap())
}

fn family_over(p: u64) -> impl Strategy<Value = EquationFamily> {
    prop::collection::vec(equation(p), 1..=3).prop_filter_map("proportional duplicates", move |eqs| {
        EquationFamily::new(field(p), eqs).ok()
    })
}

proptest! {
    #[test]
    fn counts_match_triple_loop(eq in equation(13), (a1, a2) in set_pair_in(&[13]), a3 in set_in(&[13])) {
        let f = field(13);
        prop_assert_eq!(count_solutions(&eq, &a1, &a2, &a3).unwrap().count, solutions(&eq, f, &a1, &a2, &a3));
    }

    #[test]
    fn counts_match_on_convolution_path(eq in equation(31), seed in any::<u64>()) {
        // |A|^2 > p ln p switches to the convolution path
        let f = field(31);
        let mut r = rng(seed);
        let a = random_set(f, 20, &mut r);
        prop_assert_eq!(count_solutions(&eq, &a, &a, &a).unwrap().count, solutions(&eq, f, &a, &a, &a));
    }

    #[test]
    fn avoids_agrees_with_counts(fam in family_over(11), a in set_in(&[11])) {
        let counts = family_counts(&a, &fam).unwrap();
        prop_assert_eq!(lib_avoids(&a, &fam).unwrap(), counts.iter().all(|c| c.count == 0));
        prop_assert_eq!(lib_avoids(&a, &fam).unwrap(), avoids(&a, &fam));
        let report = deviation_regime(&fam, &a).unwrap();
        prop_assert_eq!(report.below + report.typical + report.above, fam.len());
        for row in &report.rows {
            prop_assert_eq!(row.count, counts[row.equation].count);
            if row.count == 0 && !a.is_empty() {
                prop_assert_eq!(row.regime, Regime::Below);
            }
        }
    }

    #[test]
    fn exhaustive_search_matches_enumeration(fam in prop::sample::select(&[5u64, 7, 11][..]).prop_flat_map(family_over)) {
        let f = fam.field();
        let found = max_avoiding(&fam, &SearchOptions::exhaustive()).unwrap();
        let naive = subsets(f).filter(|s| avoids(s, &fam)).map(|s| s.len()).max().unwrap();
        prop_assert!(found.exact);
        prop_assert_eq!(found.size, naive);
        prop_assert!(avoids(&found.witness, &fam));
    }

    #[test]
    fn heuristics_return_valid_witnesses(fam in family_over(13), seed in any::<u64>()) {
        let exact = max_avoiding(&fam, &SearchOptions::exhaustive()).unwrap().size;
        for options in [SearchOptions::greedy(seed), SearchOptions::randomized(seed, 8)] {
            let found = max_avoiding(&fam, &options).unwrap();
            prop_assert!(avoids(&found.witness, &fam));
            prop_assert!(found.size <= exact && found.size == found.witness.len());
            prop_assert_eq!(&max_avoiding(&fam, &options).unwrap(), &found);
        }
    }
}

#[test]
fn budgets_and_limits() {
    let f = field(37);
    let fam = EquationFamily::new(f, vec![AffineEquation::from_signed(f, 1, 1, -1, 0).unwrap()]).unwrap();
    assert!(matches!(max_avoiding(&fam, &SearchOptions::exhaustive()), Err(Error::BudgetExceeded(_))));
    let small = field(13);
    let fam = EquationFamily::new(small, vec![AffineEquation::from_signed(small, 1, 1, -1, 0).unwrap()]).unwrap();
    let options = SearchOptions { mode: SearchMode::Exhaustive, budget: Some(3), seed: 0 };
    assert!(matches!(max_avoiding(&fam, &options), Err(Error::BudgetExceeded(_))));
    assert!(matches!(max_avoiding(&EquationFamily::new(small, vec![]).unwrap(), &options), Err(Error::EmptyFamily)));
}

#[test]
fn catalog_thresholds() {
    let names: Vec<String> = bound_catalog().into_iter().map(|e| e.name).collect();
    for name in ["matching-invariant", "star-invariant", "star-invariant-energy", "non-averaging", "parity-construction"] {
        assert!(names.iter().any(|n| n == name), "{name}");
    }
    let entry = catalog_entry("non-averaging").unwrap();
    let th = bound_threshold(&entry, 1000, 8).unwrap();
    assert!((th - 1000.0 / 4.0).abs() < 1e-9);
    assert!(bound_threshold(&entry, 1000, 0).is_err());
    assert!(catalog_entry("no-such-entry").is_none());
}

#[test]
fn empty_set_avoids_everything() {
    let f = field(11);
    let fam = EquationFamily::new(f, vec![AffineEquation::new(f, 1, 1, 1, 3).unwrap()]).unwrap();
    assert!(lib_avoids(&ResidueSet::empty(f), &fam).unwrap());
}

use std::collections::BTreeMap;

use fukaya_core::ainfty::{hochschild, TableCategory};
use fukaya_core::fukaya_t2::{build_pair_category, Conventions};
use fukaya_core::glinalg::GradedSpace;
use fukaya_core::novikov::int;
use fukaya_core::Novikov;

/// k[ε]/ε² concentrated in degree 0.
fn dual_numbers() -> TableCategory {
    let one = Novikov::one(int(10));
    let mut t = TableCategory::new(vec!["A".into()], 7, int(10));
    t.set_hom(0, 0, GradedSpace::new([("e", 0), ("eps", 0)]).unwrap());
    t.set_unit(0, 0);
    for (a, b, out) in [(0, 0, 0), (0, 1, 1), (1, 0, 1)] {
        t.add_mu(&[0, 0, 0], &[a, b], out, &one).unwrap();
    }
    t
}

#[test]
fn dual_numbers_have_one_class_per_positive_degree() {
    // over Q: HH⁰ = A, HHⁿ = Q for n ≥ 1
    let r = hochschild(&dual_numbers(), 4, (0, 2), 2).unwrap();
    assert_eq!(r.ranks, BTreeMap::from([(0, 2), (1, 1), (2, 1)]));
    assert!(r.certified);
}

#[test]
fn window_must_fit_below_the_cap() {
    assert!(hochschild(&dual_numbers(), 2, (0, 2), 2).is_err());
}

#[test]
fn pair_category_low_degrees() {
    let pair = build_pair_category(int(1), int(10), Conventions::default(), 7).unwrap();
    let r = hochschild(&pair, 4, (0, 1), 2).unwrap();
    assert_eq!(r.ranks.get(&0), Some(&1));
    assert_eq!(r.ranks.get(&1), Some(&2));
}

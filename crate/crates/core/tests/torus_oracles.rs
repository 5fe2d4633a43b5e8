use std::collections::BTreeMap;

use fukaya_core::ainfty::{chains, for_each_basis_tuple, AInfty};
use fukaya_core::fukaya_t2::{build_gamma_category, Conventions, LagrangianLine, TorusCategory};
use fukaya_core::mirror_dict::{check_dictionary, gamma_entries, genus2_report, predicted_euler, MirrorEntry, SheafLabel};
use fukaya_core::novikov::{int, rat};
use fukaya_core::twisted::hf_ranks;
use fukaya_core::Rat;

fn slopes_012() -> TorusCategory {
    let lines = (0..3).map(|k| LagrangianLine::new(1, k, int(0), None, int(1)).unwrap()).collect();
    TorusCategory::new(vec!["L0".into(), "L1".into(), "L2".into()], lines, Conventions::default(), int(10), 2).unwrap()
}

#[test]
fn slope_triangles_give_theta_series() {
    let g = slopes_012();
    // triangle with integer width c has area c²/4; c's parity picks the output point
    let mut oracle: [BTreeMap<Rat, u64>; 2] = Default::default();
    for c in -20i64..=20 {
        let area = rat(c * c, 4);
        if area < int(10) {
            *oracle[c.rem_euclid(2) as usize].entry(area).or_default() += 1;
        }
    }
    let mut found = Vec::new();
    for chain in chains(&g, 2).filter(|c| c[0] != c[1] && c[1] != c[2] && c[0] != c[2]) {
        for_each_basis_tuple(&g, &chain, &mut |t| {
            for (o, v) in g.mu(&chain, t)? {
                if !v.is_zero() {
                    found.push((chain.clone(), t.to_vec(), o, v));
                }
            }
            Ok(())
        })
        .unwrap();
    }
    for (chain, ..) in &found {
        let rotations = [[2, 1, 0], [1, 0, 2], [0, 2, 1]];
        assert!(rotations.iter().any(|r| r == chain.as_slice()), "triangle on chain {chain:?}");
    }
    let outputs: Vec<_> = found.iter().filter(|(c, ..)| c == &[2, 1, 0]).collect();
    assert_eq!(outputs.len(), 2);
    let mut seen: Vec<BTreeMap<Rat, u64>> = outputs
        .iter()
        .map(|(.., v)| v.terms().iter().map(|(e, c)| (e.clone(), (if *c < int(0) { -c } else { c.clone() }).to_integer().try_into().unwrap())).collect())
        .collect();
    seen.sort_by_key(|m| m.keys().next().cloned());
    assert_eq!(seen, oracle.to_vec());
}

#[test]
fn dictionary_matches_on_gamma() {
    let g = build_gamma_category(4, int(1), int(10), Conventions::default(), 2).unwrap();
    let report = check_dictionary(&g, &gamma_entries(&g)).unwrap();
    assert!(report.passed(), "{:?}", report.mismatches().collect::<Vec<_>>());
    assert_eq!(report.rows.len(), 36);
}

#[test]
fn dictionary_detects_a_wrong_label() {
    let g = build_gamma_category(3, int(1), int(10), Conventions::default(), 2).unwrap();
    let mut entries: Vec<MirrorEntry> = gamma_entries(&g);
    entries[3].sheaf = SheafLabel::LineBundle(5);
    let name = entries[3].name.clone();
    let report = check_dictionary(&g, &entries).unwrap();
    assert!(!report.passed());
    assert!(report.mismatches().all(|r| r.source == name || r.target == name));
}

#[test]
fn euler_pairing_is_riemann_roch() {
    let g = build_gamma_category(4, int(1), int(10), Conventions::default(), 2).unwrap();
    let entries = gamma_entries(&g);
    // χ(O(a), O(b)) = b − a, χ(O(a), O_p) = 1, χ(O_p, O(a)) = −1, χ(O_p, O_p) = 0
    let rr = |s: SheafLabel, t: SheafLabel| -> i64 {
        let sign = |k: i32| if k % 2 == 0 { 1 } else { -1 };
        match (s, t) {
            (SheafLabel::LineBundle(a), SheafLabel::LineBundle(b)) => b - a,
            (SheafLabel::LineBundle(_), SheafLabel::Skyscraper(k)) => sign(k),
            (SheafLabel::Skyscraper(k), SheafLabel::LineBundle(_)) => -sign(k),
            (SheafLabel::Skyscraper(_), SheafLabel::Skyscraper(_)) => 0,
        }
    };
    for x in &entries {
        for y in &entries {
            assert_eq!(predicted_euler(x.sheaf, y.sheaf), rr(x.sheaf, y.sheaf));
            assert_eq!(hf_ranks(&g, x.object, y.object).unwrap().euler(), rr(x.sheaf, y.sheaf), "{} {}", x.name, y.name);
        }
    }
}

#[test]
fn genus_two_cone() {
    let r = genus2_report(int(1), int(10), Conventions::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.end_ranks, BTreeMap::from([(0, 1), (1, 4), (2, 1)]));
    assert_eq!(r.euler, -2);
    assert_eq!(r.cup_pairing_rank, 4);
    assert!(r.cup_unital && r.certified);
}

use std::collections::BTreeMap;

use fukaya_core::ainfty::{AInfty, TableCategory};
use fukaya_core::glinalg::GradedSpace;
use fukaya_core::fukaya_t2::{build_gamma_category, Conventions, LagrangianLine, TorusCategory};
use fukaya_core::novikov::{int, rat};
use fukaya_core::twisted::{cone, hf_ranks, twist, validate, TwistedCategory, TwistedComplex};
use fukaya_core::Novikov;
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn line() -> impl Strategy<Value = LagrangianLine> {
    (-3i64..=3, -3i64..=3, 0i64..8, -1i64..=1)
        .prop_filter("primitive direction", |(p, q, _, _)| gcd(*p, *q) == 1)
        .prop_map(|(p, q, k, lift)| LagrangianLine::new(p, q, rat(k, 8), Some(lift), int(1)).unwrap())
}

fn torus(lines: Vec<LagrangianLine>, cap: usize) -> TorusCategory {
    let names = (0..lines.len()).map(|i| format!("L{i}")).collect();
    TorusCategory::new(names, lines, Conventions::default(), int(10), cap).unwrap()
}

fn ranks(cat: &dyn AInfty, x: usize, y: usize) -> BTreeMap<i32, usize> {
    hf_ranks(cat, x, y).unwrap().ranks.into_iter().filter(|(_, n)| *n > 0).collect()
}

fn one() -> Novikov {
    Novikov::one(int(10))
}

/// L_f, L_s, τL_s, τ²L_s with a cone on a chosen basis morphism and shifted copies.
fn cone_category(g: &TorusCategory, y0: usize, y1: usize, b: usize) -> TwistedCategory<'_> {
    let c = cone(g, y0, y1, &BTreeMap::from([(b, one())])).unwrap();
    let mut objects = vec![("C".to_string(), c.clone()), ("C[1]".to_string(), c.shifted(1))];
    for z in 0..g.object_count() {
        objects.push((g.object_name(z), TwistedComplex::object(z, 0)));
    }
    TwistedCategory::new(g, objects, 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lines_satisfy_duality(a in line(), b in line()) {
        prop_assume!(!a.is_parallel(&b));
        let g = torus(vec![a.clone(), b.clone()], 2);
        let (ab, ba) = (ranks(&g, 0, 1), ranks(&g, 1, 0));
        let mirrored: BTreeMap<i32, usize> = ba.iter().map(|(d, n)| (1 - d, *n)).collect();
        prop_assert_eq!(&ab, &mirrored);
        let total: usize = ab.values().sum();
        prop_assert_eq!(total, a.intersection_number(&b).unsigned_abs() as usize);
        prop_assert_eq!(a.degree_to(&b).unwrap() + b.degree_to(&a).unwrap(), 1);
    }

    #[test]
    fn cones_satisfy_duality_and_shift(y0 in 0usize..4, y1 in 0usize..4, pick in 0usize..4, z in 0usize..4) {
        let g = build_gamma_category(2, int(1), int(10), Conventions::default(), 3).unwrap();
        let n = g.hom(y0, y1).dim();
        prop_assume!(n > 0);
        let tw = cone_category(&g, y0, y1, pick % n);
        let zi = 2 + z;
        let to = ranks(&tw, 0, zi);
        let from: BTreeMap<i32, usize> = ranks(&tw, zi, 0).iter().map(|(d, n)| (1 - d, *n)).collect();
        prop_assert_eq!(&to, &from);
        // hom(C[1], Z) is hom(C, Z) one degree up
        let shifted: BTreeMap<i32, usize> = to.iter().map(|(d, n)| (d + 1, *n)).collect();
        prop_assert_eq!(ranks(&tw, 1, zi), shifted);
        prop_assert_eq!(hf_ranks(&tw, 1, zi).unwrap().euler(), -hf_ranks(&tw, 0, zi).unwrap().euler());
    }

    #[test]
    fn cone_requires_a_closed_morphism(y0 in 0usize..4, y1 in 0usize..4, pick in 0usize..4) {
        let g = build_gamma_category(2, int(1), int(10), Conventions::default(), 3).unwrap();
        let n = g.hom(y0, y1).dim();
        prop_assume!(n > 0);
        let tw = cone_category(&g, y0, y1, pick % n);
        for z in 2..tw.object_count() {
            for (x, y) in [(0, z), (z, 0)] {
                for b in 0..tw.hom(x, y).dim() {
                    let closed = tw.mu(&[x, y], &[b]).unwrap().is_empty();
                    let built = cone(&tw, x, y, &BTreeMap::from([(b, one())]));
                    prop_assert_eq!(built.is_ok(), closed);
                }
            }
        }
    }
}

#[test]
fn iterated_cone_of_three_lines_is_twisted() {
    let g = build_gamma_category(2, int(1), int(10), Conventions::default(), 4).unwrap();
    // L_s → τL_s → τ²L_s
    let first = cone(&g, 1, 2, &BTreeMap::from([(0, one())])).unwrap();
    assert!(validate(&g, &first).unwrap().passed());
    let tw = TwistedCategory::new(&g, vec![("C".into(), first), ("tt".into(), TwistedComplex::object(3, 0))], 4).unwrap();
    let mut built = 0;
    for b in 0..tw.hom(0, 1).dim() {
        if !tw.mu(&[0, 1], &[b]).unwrap().is_empty() {
            continue;
        }
        let second = cone(&tw, 0, 1, &BTreeMap::from([(b, one())])).unwrap();
        assert!(validate(&tw, &second).unwrap().passed());
        let outer = TwistedCategory::new(&tw, vec![("E".into(), second), ("C".into(), TwistedComplex::object(0, 0)), ("tt".into(), TwistedComplex::object(1, 0))], 2).unwrap();
        // χ(E, E) = χ over the three summands with their signs
        let chi = |x: usize, y: usize| hf_ranks(&outer, x, y).unwrap().euler();
        let k = tw.hom(0, 1).degree(b);
        let sign = if (1 - k) % 2 == 0 { 1 } else { -1 };
        assert_eq!(chi(0, 2), chi(2, 2) + sign * chi(1, 2));
        built += 1;
    }
    assert!(built > 0, "no closed basis morphism C → τ²L_s");
}

#[test]
fn twist_along_the_fibre_matches_the_twisted_line() {
    let g = build_gamma_category(2, int(1), int(10), Conventions::default(), 3).unwrap();
    let t = twist(&g, 0, 1).unwrap();
    let tw = TwistedCategory::new(&g, vec![("T".into(), t), ("tL_s".into(), TwistedComplex::object(2, 0)), ("L_f".into(), TwistedComplex::object(0, 0)), ("L_s".into(), TwistedComplex::object(1, 0)), ("ttL_s".into(), TwistedComplex::object(3, 0))], 3).unwrap();
    for z in 2..5 {
        assert_eq!(ranks(&tw, 0, z), ranks(&tw, 1, z), "against {}", tw.object_name(z));
    }
}

#[test]
fn twist_of_the_zero_module_is_the_identity() {
    let mut t = TableCategory::new(vec!["Y".into(), "X".into()], 3, int(10));
    for x in 0..2 {
        t.set_hom(x, x, GradedSpace::new([("e", 0)]).unwrap());
        t.set_unit(x, 0);
        t.add_mu(&[x, x, x], &[0, 0], 0, &one()).unwrap();
    }
    t.set_hom(0, 1, GradedSpace::zero());
    t.set_hom(1, 0, GradedSpace::zero());
    let tc = twist(&t, 0, 1).unwrap();
    assert_eq!(tc, TwistedComplex::object(1, 0));
    let tw = TwistedCategory::new(&t, vec![("T".into(), tc), ("X".into(), TwistedComplex::object(1, 0))], 3).unwrap();
    assert_eq!(ranks(&tw, 0, 0), ranks(&tw, 1, 1));
    assert_eq!(ranks(&tw, 0, 1), BTreeMap::from([(0, 1)]));
}

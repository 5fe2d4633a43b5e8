//! Rank dictionary between line objects on T² and sheaves on the Tate curve,
//! and the genus-2 cone report on the product of two tori.
//!
//! τᵏL_s corresponds to O(kp) and L_f to the shifted skyscraper O_p[−1], so
//! that hom(L_s, L_f) sits in degree 1. Sheaf-side ranks are predicted in
//! closed form from Riemann–Roch and Serre duality.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ainfty::{
    check_ainfty_relations, cohomology_category, transfer_minimal_model, AInfty, GradedCategory, TensorCategory,
};
use crate::error::{Error, Result};
use crate::fukaya_t2::{build_pair_category, Conventions};
use crate::glinalg::SparseVec;
use crate::novikov::{Novikov, Rat};
use crate::twisted::{cone, hf_ranks, TwistedCategory, TwistedComplex};

/// Sheaf-side label of a dictionary entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheafLabel {
    /// O(kp); k = 0 is the structure sheaf.
    LineBundle(i64),
    /// O_p[shift].
    Skyscraper(i32),
}

impl SheafLabel {
    pub fn describe(&self) -> String {
        match self {
            SheafLabel::LineBundle(0) => String::from("O"),
            SheafLabel::LineBundle(k) => format!("O({k}p)"),
            SheafLabel::Skyscraper(0) => String::from("O_p"),
            SheafLabel::Skyscraper(s) => format!("O_p[{s}]"),
        }
    }
}

/// Graded ranks of Ext*(s, t), dropping zero entries.
pub fn predicted_ranks(s: SheafLabel, t: SheafLabel) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    match (s, t) {
        (SheafLabel::LineBundle(a), SheafLabel::LineBundle(b)) => {
            if b > a {
                out.insert(0, (b - a) as usize);
            } else if b < a {
                out.insert(1, (a - b) as usize);
            } else {
                out.insert(0, 1);
                out.insert(1, 1);
            }
        }
        // Hom(L, O_p) = k in degree 0; Ext(O_p, L) = k in degree 1.
        (SheafLabel::LineBundle(_), SheafLabel::Skyscraper(s)) => {
            out.insert(-s, 1);
        }
        (SheafLabel::Skyscraper(s), SheafLabel::LineBundle(_)) => {
            out.insert(1 + s, 1);
        }
        (SheafLabel::Skyscraper(s), SheafLabel::Skyscraper(t)) => {
            out.insert(s - t, 1);
            out.insert(s - t + 1, 1);
        }
    }
    out
}

/// χ(s, t) from Riemann–Roch: b − a for line bundles, ±1 against a point.
pub fn predicted_euler(s: SheafLabel, t: SheafLabel) -> i64 {
    predicted_ranks(s, t).iter().map(|(d, r)| if d.rem_euclid(2) == 0 { *r as i64 } else { -(*r as i64) }).sum()
}

/// One object of the dictionary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorEntry {
    pub object: usize,
    pub name: String,
    pub sheaf: SheafLabel,
}

/// The entries for a category built by `build_gamma_category`: L_f, L_s, τL_s, ….
pub fn gamma_entries(cat: &dyn AInfty) -> Vec<MirrorEntry> {
    (0..cat.object_count())
        .map(|x| MirrorEntry {
            object: x,
            name: cat.object_name(x),
            sheaf: if x == 0 { SheafLabel::Skyscraper(-1) } else { SheafLabel::LineBundle(x as i64 - 1) },
        })
        .collect()
}

/// One compared pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DictionaryRow {
    pub source: String,
    pub target: String,
    pub source_sheaf: String,
    pub target_sheaf: String,
    pub computed: BTreeMap<i32, usize>,
    pub expected: BTreeMap<i32, usize>,
}

impl DictionaryRow {
    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DictionaryReport {
    pub rows: Vec<DictionaryRow>,
}

impl DictionaryReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(DictionaryRow::matches)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &DictionaryRow> {
        self.rows.iter().filter(|r| !r.matches())
    }
}

fn nonzero(ranks: &BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    ranks.iter().filter(|(_, r)| **r > 0).map(|(d, r)| (*d, *r)).collect()
}

/// Compares computed hom ranks with the sheaf-side prediction on every pair of entries.
pub fn check_dictionary(cat: &dyn AInfty, entries: &[MirrorEntry]) -> Result<DictionaryReport> {
    let mut rows = Vec::new();
    for s in entries {
        for t in entries {
            let computed = nonzero(&hf_ranks(cat, s.object, t.object)?.ranks);
            rows.push(DictionaryRow {
                source: s.name.clone(),
                target: t.name.clone(),
                source_sheaf: s.sheaf.describe(),
                target_sheaf: t.sheaf.describe(),
                computed,
                expected: predicted_ranks(s.sheaf, t.sheaf),
            });
        }
    }
    Ok(DictionaryReport { rows })
}

/// Ranks of hom(Z, cone) against the exact-triangle prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleCheck {
    pub test_object: String,
    pub computed: BTreeMap<i32, usize>,
    pub predicted: BTreeMap<i32, usize>,
}

impl TriangleCheck {
    pub fn total(&self) -> usize {
        self.computed.values().sum()
    }
}

/// Structured summary of the genus-2 cone on T² × T².
#[derive(Clone, Debug)]
pub struct Genus2Report {
    /// Relation check of the product sector and the twisted layer, arity ≤ 3.
    pub relations_pass: bool,
    pub end_ranks: BTreeMap<i32, usize>,
    pub euler: i64,
    pub triangles: Vec<TriangleCheck>,
    /// Rank of the transferred pairing H¹ ⊗ H¹ → H² on End(cone).
    pub cup_pairing_rank: usize,
    /// Whether the transferred unit class acts as the identity on End(cone).
    pub cup_unital: bool,
    pub certified: bool,
}

impl Genus2Report {
    pub fn passed(&self) -> bool {
        let end: Vec<usize> = (0..=2).map(|d| self.end_ranks.get(&d).copied().unwrap_or(0)).collect();
        self.relations_pass
            && end == [1, 4, 1]
            && self.end_ranks.values().sum::<usize>() == 6
            && self.euler == -2
            && self.triangles.iter().all(|t| t.total() >= 3 && t.computed == t.predicted)
            && self.cup_pairing_rank == 4
            && self.cup_unital
    }
}

/// hom(Z, Y₀[1−k] ⊕ Y₁) predicted from the long exact sequence, given the
/// ranks of composition with the cone morphism c of degree k.
fn triangle_prediction(h: &GradedCategory, cutoff: &Rat, z: usize, y0: usize, y1: usize, c: &SparseVec, k: i32) -> BTreeMap<i32, usize> {
    let src = h.hom(z, y0);
    let dst = h.hom(z, y1);
    // rank of c· : H^j(Z, Y₀) → H^{j+k}(Z, Y₁)
    let rank_from = |j: i32| -> usize {
        let rows: Vec<SparseVec> =
            src.indices_in(j).into_iter().map(|i| h.compose(z, y0, y1, &SparseVec::from([(i, Novikov::one(cutoff.clone()))]), c)).collect();
        crate::glinalg::rank_of_rows_lenient(rows).map(|r| r.rank).unwrap_or(0)
    };
    let mut degrees: Vec<i32> = dst.dims().keys().copied().collect();
    degrees.extend(src.dims().keys().map(|&j| j + k - 1));
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = BTreeMap::new();
    for i in degrees {
        let from_y1 = dst.dim_in(i) - rank_from(i - k);
        let from_y0 = src.dim_in(i + 1 - k) - rank_from(i + 1 - k);
        if from_y1 + from_y0 > 0 {
            out.insert(i, from_y1 + from_y0);
        }
    }
    out
}

/// Builds the product sector H(A) ⊗ A of the pair category, the tori
/// L_f × L_s and L_s × L_f meeting at one point of degree 1, the cone on that
/// point, and reports ranks, Euler characteristic, exact-triangle consistency
/// and the transferred product on End(cone).
pub fn genus2_report(area: Rat, cutoff: Rat, conv: Conventions) -> Result<Genus2Report> {
    let left = build_pair_category(area.clone(), cutoff.clone(), conv, 3)?;
    let h = cohomology_category(&left)?;
    let right = build_pair_category(area, cutoff.clone(), conv, 7)?;
    // Pair-category objects: 0 = L_s, 1 = L_f.
    let product = TensorCategory::new(h, right, vec![(String::from("L_f"), 1, 0), (String::from("L_s"), 0, 1)])?;
    let point = product.hom(0, 1);
    if point.dim() != 1 || point.degree(0) != 1 {
        return Err(Error::Invalid(String::from("the product tori must meet once in degree 1")));
    }
    let c = SparseVec::from([(0, Novikov::one(cutoff.clone()))]);
    let cone_obj = cone(&product, 0, 1, &c)?;
    let tw = TwistedCategory::new(
        &product,
        vec![
            (String::from("L_f"), TwistedComplex::object(0, 0)),
            (String::from("L_s"), TwistedComplex::object(1, 0)),
            (String::from("Cone(p)"), cone_obj),
        ],
        3,
    )?;
    let relations_pass = check_ainfty_relations(&product, 3)?.passed() && check_ainfty_relations(&tw, 3)?.passed();
    let end = hf_ranks(&tw, 2, 2)?;
    let mut certified = end.certified;
    let product_h = cohomology_category(&product)?;
    let mut triangles = Vec::new();
    for z in 0..2 {
        let computed = hf_ranks(&tw, z, 2)?;
        certified &= computed.certified;
        triangles.push(TriangleCheck {
            test_object: product.object_name(z),
            computed: nonzero(&computed.ranks),
            predicted: triangle_prediction(&product_h, &cutoff, z, 0, 1, &c, 1),
        });
    }
    // Product on the minimal model of End(cone).
    let model = transfer_minimal_model(&tw, 3)?;
    let hm = cohomology_category(&model)?;
    let space = hm.hom(2, 2);
    let top: Vec<usize> = space.indices_in(2);
    let ones: Vec<usize> = space.indices_in(1);
    let unit_class: Vec<usize> = space.indices_in(0);
    let basis = |i: usize| SparseVec::from([(i, Novikov::one(cutoff.clone()))]);
    let mut pairing_rows = Vec::new();
    for &x in &ones {
        let mut row = SparseVec::new();
        for (j, &y) in ones.iter().enumerate() {
            let v = hm.compose(2, 2, 2, &basis(x), &basis(y));
            if let Some(cf) = top.first().and_then(|t| v.get(t)) {
                row.insert(j, cf.clone());
            }
        }
        pairing_rows.push(row);
    }
    let pairing = crate::glinalg::rank_of_rows_lenient(pairing_rows)?;
    certified &= pairing.certified;
    // The unit class u satisfies u·x = λx for a fixed nonzero λ; rescaled it is the unit.
    let cup_unital = match unit_class.as_slice() {
        [u] => {
            let probe = hm.compose(2, 2, 2, &basis(*u), &basis(*u));
            match probe.get(u) {
                Some(lambda) if !lambda.is_zero() && probe.len() == 1 => (0..space.dim()).all(|x| {
                    let scaled = basis(x).into_iter().map(|(i, v)| (i, v.mul_ref(lambda))).collect::<SparseVec>();
                    crate::ainfty::vectors_equal(&hm.compose(2, 2, 2, &basis(*u), &basis(x)), &scaled)
                        && crate::ainfty::vectors_equal(&hm.compose(2, 2, 2, &basis(x), &basis(*u)), &scaled)
                }),
                _ => false,
            }
        }
        _ => false,
    };
    Ok(Genus2Report { relations_pass, end_ranks: nonzero(&end.ranks), euler: end.euler(), triangles, cup_pairing_rank: pairing.rank, cup_unital, certified })
}

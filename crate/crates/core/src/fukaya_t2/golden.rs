//! Structure-constant tables as TSV, for committed reference files and
//! truncation-stability checks.
//!
//! Header lines start with `#`: one `# line` row per object serialized as
//! (name, p, q, offset_num, offset_den, grading_lift, orientation), then
//! `# area`, `# cutoff` and `# arities`; other `#` lines are ignored. Body
//! rows are (chain, inputs, output, exponent, coefficient), one per monomial,
//! sorted.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use super::lines::LagrangianLine;
use super::model::{Conventions, TorusCategory};
use crate::ainfty::{chains, for_each_basis_tuple, AInfty};
use crate::error::{Error, Result};
use crate::novikov::Rat;

/// One monomial of one structure constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GoldenRow {
    pub chain: String,
    pub inputs: String,
    pub output: String,
    pub exponent: Rat,
    pub coefficient: Rat,
}

/// A parsed or computed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenTable {
    pub lines: Vec<String>,
    pub area: Rat,
    pub cutoff: Rat,
    pub arities: Vec<usize>,
    pub rows: Vec<GoldenRow>,
}

/// Every μᵈ monomial for d in `arities`, over chains whose consecutive objects differ.
pub fn golden_table(cat: &TorusCategory, arities: &[usize]) -> Result<GoldenTable> {
    let mut rows = BTreeSet::new();
    for &d in arities {
        for chain in chains(cat, d) {
            if chain.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let names: Vec<String> = chain.iter().map(|&x| cat.object_name(x)).collect();
            let chain_s = names.join(">");
            let out_space = cat.hom(chain[0], chain[d]);
            for_each_basis_tuple(cat, &chain, &mut |t| {
                let labels: Vec<String> = t.iter().enumerate().map(|(k, &i)| cat.hom(chain[k], chain[k + 1]).label(i).to_string()).collect();
                let inputs = labels.join(",");
                for (o, c) in cat.mu(&chain, t)? {
                    for (e, a) in c.terms() {
                        rows.insert(GoldenRow {
                            chain: chain_s.clone(),
                            inputs: inputs.clone(),
                            output: out_space.label(o).to_string(),
                            exponent: e.clone(),
                            coefficient: a.clone(),
                        });
                    }
                }
                Ok(())
            })?;
        }
    }
    let lines = cat
        .lines()
        .iter()
        .zip(cat.names())
        .map(|(l, n)| {
            let (p, q) = l.oriented_direction();
            let off = if l.orientation() > 0 { l.offset().clone() } else { (-l.offset().clone()) - (-l.offset().clone()).floor() };
            format!("{n}\t{p}\t{q}\t{}\t{}\t{}\t{}", off.numer(), off.denom(), l.grading_branch(), l.orientation())
        })
        .collect();
    Ok(GoldenTable { lines, area: cat.torus_area().clone(), cutoff: cat.cutoff(), arities: arities.to_vec(), rows: rows.into_iter().collect() })
}

impl GoldenTable {
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str("# line\t");
            s.push_str(l);
            s.push('\n');
        }
        s.push_str(&format!("# area\t{}\n", self.area));
        s.push_str(&format!("# cutoff\t{}\n", self.cutoff));
        let arities: Vec<String> = self.arities.iter().map(|d| d.to_string()).collect();
        s.push_str(&format!("# arities\t{}\n", arities.join(",")));
        s.push_str("chain\tinputs\toutput\texponent\tcoefficient\n");
        for r in &self.rows {
            s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.chain, r.inputs, r.output, r.exponent, r.coefficient));
        }
        s
    }

    pub fn parse(text: &str) -> Result<GoldenTable> {
        let bad = |what: &str| Error::Invalid(format!("golden table: {what}"));
        let rat = |s: &str| Rat::from_str(s).map_err(|_| bad("unparsable rational"));
        let mut lines = Vec::new();
        let mut cutoff = None;
        let mut area = None;
        let mut arities = Vec::new();
        let mut rows = Vec::new();
        for raw in text.lines() {
            if let Some(rest) = raw.strip_prefix("# line\t") {
                lines.push(rest.to_string());
            } else if let Some(rest) = raw.strip_prefix("# cutoff\t") {
                cutoff = Some(rat(rest.trim())?);
            } else if let Some(rest) = raw.strip_prefix("# area\t") {
                area = Some(rat(rest.trim())?);
            } else if let Some(rest) = raw.strip_prefix("# arities\t") {
                arities = rest.split(',').map(|d| d.trim().parse::<usize>().map_err(|_| bad("unparsable arity"))).collect::<Result<_>>()?;
            } else if raw.starts_with('#') || raw.starts_with("chain\t") || raw.trim().is_empty() {
                continue;
            } else {
                let f: Vec<&str> = raw.split('\t').collect();
                if f.len() != 5 {
                    return Err(bad("expected five columns"));
                }
                rows.push(GoldenRow {
                    chain: f[0].to_string(),
                    inputs: f[1].to_string(),
                    output: f[2].to_string(),
                    exponent: rat(f[3])?,
                    coefficient: rat(f[4])?,
                });
            }
        }
        Ok(GoldenTable {
            lines,
            area: area.ok_or_else(|| bad("missing area"))?,
            cutoff: cutoff.ok_or_else(|| bad("missing cutoff"))?,
            arities,
            rows,
        })
    }

    /// Rebuilds the category described by the header at another cutoff.
    pub fn rebuild(&self, cutoff: Rat, conv: Conventions) -> Result<TorusCategory> {
        let bad = |what: &str| Error::Invalid(format!("golden line: {what}"));
        let mut names = Vec::new();
        let mut lines = Vec::new();
        for l in &self.lines {
            let f: Vec<&str> = l.split('\t').collect();
            if f.len() != 7 {
                return Err(bad("expected seven fields"));
            }
            let int = |s: &str| s.parse::<i64>().map_err(|_| bad("unparsable integer"));
            let offset = Rat::new(f[3].parse().map_err(|_| bad("unparsable offset"))?, f[4].parse().map_err(|_| bad("unparsable offset"))?);
            names.push(f[0].to_string());
            lines.push(LagrangianLine::new(int(f[1])?, int(f[2])?, offset, Some(int(f[5])?), self.area.clone())?);
        }
        let cap = self.arities.iter().copied().max().unwrap_or(2);
        TorusCategory::new(names, lines, conv, cutoff, cap)
    }

    /// Rows with exponent strictly below `bound`.
    pub fn below(&self, bound: &Rat) -> BTreeSet<GoldenRow> {
        self.rows.iter().filter(|r| r.exponent < *bound).cloned().collect()
    }
}

/// Rows present in exactly one of the two tables, among exponents below `bound`.
pub fn compare_below(a: &GoldenTable, b: &GoldenTable, bound: &Rat) -> Vec<GoldenRow> {
    let (x, y) = (a.below(bound), b.below(bound));
    x.symmetric_difference(&y).cloned().collect()
}

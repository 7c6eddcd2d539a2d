//! Comparison of Hecke algebras of `GL_r` over a mixed-characteristic field `E`
//! and a Laurent series field `E′` that are close: `O_E/π^n ≅ O_{E′}/t^n`.
//!
//! A double coset `K^n k1 ∇(ν) k2 K^n` of `E` is sent to `K′^n k1′ ∇′(ν) k2′ K′^n`
//! with `k1′, k2′` the entrywise images of `k1, k2` under the ring isomorphism.
//! Both Hecke algebras are computed by the same code, each from its own field;
//! nothing but the final tables is shared.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{Family, Index};
use crate::hecke::{DoubleCoset, HeckeAlgebra, HeckeElem, DEFAULT_BUDGET};
use crate::localfield::{close_field_iso, CloseFieldIso, FieldDesc};

/// A mixed-characteristic field and a Laurent series field with the same residue field,
/// compared at level `n ≤ e`.
pub struct CloseFieldPair {
    mixed: HeckeAlgebra,
    equal: HeckeAlgebra,
    iso: Option<CloseFieldIso>,
}

impl std::fmt::Debug for CloseFieldPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CloseFieldPair({:?}, {:?})", self.mixed, self.equal)
    }
}

/// The finite set `C` of dominant cocharacters whose double cosets generate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportBound {
    pub nus: Vec<Vec<i64>>,
}

impl SupportBound {
    /// All dominant `ν` with `|ν_j| ≤ bound`.
    pub fn cube(r: usize, bound: i64) -> Self {
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..r {
            let mut next = Vec::new();
            for v in &out {
                let top = v.last().copied().unwrap_or(bound);
                for x in -bound..=top {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out.sort();
        SupportBound { nus: out }
    }

    /// `"1"` for the cube `|ν_j| ≤ 1`, or an explicit list `"1,0;0,0;0,-1"`.
    pub fn parse(spec: &str, r: usize) -> Result<Self> {
        let spec = spec.trim();
        if let Ok(b) = spec.parse::<i64>() {
            if b < 0 {
                return Err(Error::Invalid("negative support bound".into()));
            }
            return Ok(Self::cube(r, b));
        }
        let mut nus = Vec::new();
        for part in spec.split(';') {
            let nu: Vec<i64> = part
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad cocharacter entry {x:?}"))))
                .collect::<Result<_>>()?;
            if nu.len() != r || !nu.windows(2).all(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!("{nu:?} is not a dominant cocharacter of rank {r}")));
            }
            nus.push(nu);
        }
        nus.sort();
        nus.dedup();
        Ok(SupportBound { nus })
    }

    /// `max |ν_j|` over the set.
    pub fn radius(&self) -> i64 {
        self.nus.iter().flatten().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn contains(&self, nu: &[i64]) -> bool {
        self.nus.iter().any(|v| v == nu)
    }
}

/// Double cosets of one cocharacter on both sides, matched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassMatch {
    pub nu: Vec<i64>,
    pub lhs_count: usize,
    pub rhs_count: usize,
    pub pairs: Vec<(DoubleCoset, DoubleCoset)>,
}

impl ClassMatch {
    pub fn ok(&self) -> bool {
        self.lhs_count == self.rhs_count && self.pairs.len() == self.lhs_count
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coset: DoubleCoset,
    pub coeff: i64,
}

fn terms(h: &HeckeElem) -> Vec<Term> {
    h.terms.iter().map(|(d, &c)| Term { coset: d.clone(), coeff: c }).collect()
}

/// One compared product `h_a * h_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub product: [DoubleCoset; 2],
    pub lhs_terms: Vec<Term>,
    pub rhs_terms: Vec<Term>,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub nu: Vec<i64>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub field_a: String,
    pub field_b: String,
    pub rank: usize,
    pub level: u32,
    pub depth: u32,
    pub generators: usize,
    pub products: usize,
    pub discrepancies: usize,
    pub class_counts: Vec<ClassCount>,
    pub classes_match: bool,
    pub left_coset_mismatches: usize,
    pub involution_ok: bool,
    pub support_closed: bool,
    pub all_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub instances: Vec<Instance>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.summary.all_equal
    }
    pub fn discrepancies(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.equal)
    }
}

impl CloseFieldPair {
    pub fn new(mixed: &FieldDesc, equal: &FieldDesc, r: usize, n: u32) -> Result<Self> {
        Self::with_budget(mixed, equal, r, n, DEFAULT_BUDGET)
    }

    pub fn with_budget(mixed: &FieldDesc, equal: &FieldDesc, r: usize, n: u32, budget: u64) -> Result<Self> {
        if !mixed.is_mixed() {
            return Err(Error::InvalidField(format!("{mixed} is not of mixed characteristic")));
        }
        if equal.is_mixed() {
            return Err(Error::InvalidField(format!("{equal} is not a Laurent series field")));
        }
        if mixed.residue() != equal.residue() {
            return Err(Error::Mismatch(format!("{mixed} and {equal} have different residue fields")));
        }
        let iso = if n > 0 {
            let iso = close_field_iso(mixed, n)?;
            if iso.target().field() != equal {
                return Err(Error::Mismatch(format!("{equal} is not the target of the digit isomorphism")));
            }
            let report = iso.verify();
            if !report.ok() {
                return Err(Error::Verification(format!("ring isomorphism fails: {:?}", report.failures)));
            }
            Some(iso)
        } else {
            if let Some(e) = mixed.e() {
                if e < n {
                    return Err(Error::NotClose { e, n });
                }
            }
            None
        };
        Ok(CloseFieldPair {
            mixed: HeckeAlgebra::with_budget(mixed, r, n, budget)?,
            equal: HeckeAlgebra::with_budget(equal, r, n, budget)?,
            iso,
        })
    }

    pub fn lhs(&self) -> &HeckeAlgebra {
        &self.mixed
    }
    pub fn rhs(&self) -> &HeckeAlgebra {
        &self.equal
    }
    pub fn level(&self) -> u32 {
        self.mixed.level()
    }
    pub fn rank(&self) -> usize {
        self.mixed.rank()
    }

    /// The image of a double coset of `E`: residues moved entrywise through the ring isomorphism.
    pub fn transport(&self, d: &DoubleCoset) -> Result<DoubleCoset> {
        let Some(iso) = &self.iso else {
            return self.equal.canonicalize(d);
        };
        let (k1, k2) = self.mixed.residue_pair(d)?;
        let k1: Vec<_> = k1.iter().map(|x| iso.forward(x)).collect();
        let k2: Vec<_> = k2.iter().map(|x| iso.forward(x)).collect();
        self.equal.coset_of(&d.nu, &k1, &k2)
    }

    /// `η_n`: indicator functions of matched double cosets correspond.
    pub fn eta(&self, h: &HeckeElem) -> Result<HeckeElem> {
        if h.level != self.level() {
            return Err(Error::Mismatch(format!("level {} element for a level {} pair", h.level, self.level())));
        }
        let mut out = HeckeElem::zero(h.level);
        for (d, &c) in &h.terms {
            out.add_term(self.transport(d)?, c);
        }
        Ok(out)
    }
}

/// `η_n` restricted to elements supported in `bound`.
pub fn eta_map(h: &HeckeElem, pair: &CloseFieldPair, bound: &SupportBound) -> Result<HeckeElem> {
    if let Some(d) = h.terms.keys().find(|d| !bound.contains(&d.nu)) {
        return Err(Error::Invalid(format!("support {:?} lies outside the bound", d.nu)));
    }
    pair.eta(h)
}

/// For each `ν ∈ C`, enumerates the double cosets in `K∇(ν)K` on each side and matches them.
pub fn match_double_cosets(pair: &CloseFieldPair, bound: &SupportBound) -> Result<Vec<ClassMatch>> {
    let mut out = Vec::new();
    for nu in &bound.nus {
        let (lhs, rhs) = std::thread::scope(|s| {
            let l = s.spawn(|| pair.mixed.double_cosets(nu));
            let r = pair.equal.double_cosets(nu);
            (l.join().expect("enumeration thread"), r)
        });
        let (lhs, rhs) = (lhs?, rhs?);
        let rhs_set: BTreeSet<&DoubleCoset> = rhs.iter().collect();
        let mut pairs = Vec::new();
        let mut hit = BTreeSet::new();
        for d in &lhs {
            let image = pair.transport(d)?;
            if rhs_set.contains(&image) && hit.insert(image.clone()) {
                pairs.push((d.clone(), image));
            }
        }
        let m = ClassMatch { nu: nu.clone(), lhs_count: lhs.len(), rhs_count: rhs.len(), pairs };
        if !m.ok() {
            return Err(Error::Verification(format!(
                "double cosets of nu={nu:?}: {} on the mixed side, {} on the Laurent side, {} matched",
                m.lhs_count,
                m.rhs_count,
                m.pairs.len()
            )));
        }
        out.push(m);
    }
    Ok(out)
}

/// Checks `η(h_a * h_b) = η(h_a) * η(h_b)` for basis elements supported in `bound`,
/// for products of up to `depth` factors (built by multiplying the support of the
/// previous round with the generators).
pub fn verify_algebra_iso(pair: &CloseFieldPair, bound: &SupportBound, depth: u32) -> Result<VerifyReport> {
    if depth < 2 {
        return Err(Error::Invalid("depth must be at least 2".into()));
    }
    let n = pair.level();
    let lhs_alg = &pair.mixed;
    let rhs_alg = &pair.equal;
    let (lhs_gens, rhs_gens) = std::thread::scope(|s| {
        let l = s.spawn(|| basis_in(lhs_alg, bound));
        let r = basis_in(rhs_alg, bound);
        (l.join().expect("enumeration thread"), r)
    });
    let (lhs_gens, rhs_gens) = (lhs_gens?, rhs_gens?);
    let mut class_counts = Vec::new();
    for nu in &bound.nus {
        let lhs = lhs_gens.iter().filter(|d| &d.nu == nu).count();
        let rhs = rhs_gens.iter().filter(|d| &d.nu == nu).count();
        class_counts.push(ClassCount { nu: nu.clone(), lhs, rhs });
    }
    let image: BTreeSet<DoubleCoset> = lhs_gens.iter().map(|d| pair.transport(d)).collect::<Result<_>>()?;
    let classes_match = class_counts.iter().all(|c| c.lhs == c.rhs) && image == rhs_gens.iter().cloned().collect();

    let mut left_coset_mismatches = 0;
    let mut involution_ok = true;
    for d in &lhs_gens {
        let t = pair.transport(d)?;
        if lhs_alg.left_cosets(d)?.len() != rhs_alg.left_cosets(&t)?.len() {
            left_coset_mismatches += 1;
        }
        if pair.transport(&lhs_alg.inverse(d)?)? != rhs_alg.inverse(&t)? {
            involution_ok = false;
        }
    }
    let unit_ok = pair.eta(&lhs_alg.unit()?)? == rhs_alg.unit()?;

    let radius = bound.radius();
    let mut instances = Vec::new();
    let mut support_closed = true;
    let mut frontier: Vec<DoubleCoset> = lhs_gens.clone();
    for round in 2..=depth {
        let pairs: Vec<(DoubleCoset, DoubleCoset)> =
            frontier.iter().flat_map(|a| lhs_gens.iter().map(move |b| (a.clone(), b.clone()))).collect();
        if pairs.len() as u64 > lhs_alg.budget() {
            return Err(Error::Budget { what: format!("products at depth {round}"), needed: pairs.len() as u64, budget: lhs_alg.budget() });
        }
        let moved: Vec<(DoubleCoset, DoubleCoset)> =
            pairs.iter().map(|(a, b)| Ok((pair.transport(a)?, pair.transport(b)?))).collect::<Result<_>>()?;
        let (lhs, rhs) = std::thread::scope(|s| {
            let l = s.spawn(|| {
                pairs
                    .iter()
                    .map(|(a, b)| lhs_alg.convolve(&HeckeElem::basis(n, a.clone()), &HeckeElem::basis(n, b.clone())))
                    .collect::<Result<Vec<_>>>()
            });
            let r = moved
                .iter()
                .map(|(a, b)| rhs_alg.convolve(&HeckeElem::basis(n, a.clone()), &HeckeElem::basis(n, b.clone())))
                .collect::<Result<Vec<_>>>();
            (l.join().expect("product thread"), r)
        });
        let (lhs, rhs) = (lhs?, rhs?);
        let mut next = BTreeSet::new();
        for (((a, b), l), r) in pairs.into_iter().zip(lhs).zip(rhs) {
            for d in l.terms.keys() {
                if d.size() > radius * round as i64 {
                    support_closed = false;
                }
                next.insert(d.clone());
            }
            let l = pair.eta(&l)?;
            instances.push(Instance { product: [a, b], equal: l == r, lhs_terms: terms(&l), rhs_terms: terms(&r) });
        }
        frontier = next.into_iter().collect();
    }
    let discrepancies = instances.iter().filter(|i| !i.equal).count();
    let summary = Summary {
        field_a: lhs_alg.field().name(),
        field_b: rhs_alg.field().name(),
        rank: pair.rank(),
        level: n,
        depth,
        generators: lhs_gens.len(),
        products: instances.len(),
        discrepancies,
        class_counts,
        classes_match,
        left_coset_mismatches,
        involution_ok: involution_ok && unit_ok,
        support_closed,
        all_equal: discrepancies == 0 && classes_match && left_coset_mismatches == 0 && involution_ok && unit_ok && support_closed,
    };
    Ok(VerifyReport { instances, summary })
}

fn basis_in(alg: &HeckeAlgebra, bound: &SupportBound) -> Result<Vec<DoubleCoset>> {
    let mut out = Vec::new();
    for nu in &bound.nus {
        out.extend(alg.double_cosets(nu)?);
    }
    out.sort();
    Ok(out)
}

/// Structure constants `h_a * h_b = Σ c h_d` for all generators `a, b`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTable {
    pub entries: Vec<TableEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub a: DoubleCoset,
    pub b: DoubleCoset,
    pub terms: Vec<Term>,
}

/// The table of the Laurent side, computed from its own double cosets.
pub fn structure_table(alg: &HeckeAlgebra, bound: &SupportBound) -> Result<StructureTable> {
    let gens = basis_in(alg, bound)?;
    let n = alg.level();
    let mut entries = Vec::new();
    for a in &gens {
        for b in &gens {
            let p = alg.convolve(&HeckeElem::basis(n, a.clone()), &HeckeElem::basis(n, b.clone()))?;
            entries.push(TableEntry { a: a.clone(), b: b.clone(), terms: terms(&p) });
        }
    }
    Ok(StructureTable { entries })
}

/// The table of the mixed side, written in the Laurent side's names through `η_n`.
pub fn transported_table(pair: &CloseFieldPair, bound: &SupportBound) -> Result<StructureTable> {
    let alg = &pair.mixed;
    let gens = basis_in(alg, bound)?;
    let n = alg.level();
    let mut entries = Vec::new();
    for a in &gens {
        for b in &gens {
            let p = alg.convolve(&HeckeElem::basis(n, a.clone()), &HeckeElem::basis(n, b.clone()))?;
            entries.push(TableEntry { a: pair.transport(a)?, b: pair.transport(b)?, terms: terms(&pair.eta(&p)?) });
        }
    }
    entries.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    Ok(StructureTable { entries })
}

/// Result of [`family_hecke`]: the family of tables and the indices whose table equals the tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: Family<StructureTable>,
    pub agreeing: Vec<u64>,
    pub exceptional: Vec<u64>,
}

/// Structure-constant tables for `E_0, E_1, …` assembled over `ℕ ∪ {∞}` with tail `E′`.
pub fn family_hecke(
    fields: &[FieldDesc],
    laurent: &FieldDesc,
    r: usize,
    n: u32,
    bound: &SupportBound,
    budget: u64,
) -> Result<FamilyReport> {
    let tail_alg = HeckeAlgebra::with_budget(laurent, r, n, budget)?;
    let tail = structure_table(&tail_alg, bound)?;
    let mut stalks = BTreeMap::new();
    let mut agreeing = Vec::new();
    for (i, field) in fields.iter().enumerate() {
        let pair = CloseFieldPair::with_budget(field, laurent, r, n, budget)?;
        let table = transported_table(&pair, bound)?;
        if table == tail {
            agreeing.push(i as u64);
        }
        stalks.insert(i as u64, table);
    }
    let family = Family::make(tail, stalks.into_iter().map(|(i, t)| (Index::Nat(i), t)))?;
    let exceptional = family.exceptional_indices();
    Ok(FamilyReport { family, agreeing, exceptional })
}

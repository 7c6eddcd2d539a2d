//! Double cosets of `K^n` in `GL_r(E)` and the convolution product.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::group::{cartan_decompose, left_label, GrpElt};
use super::matrix::{self, Mat};
use crate::error::{Error, Result};
use crate::localfield::{FieldDesc, TruncRing};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A double coset `K^n k1 ∇(ν) k2 K^n`.
///
/// `residue` is the least pair `(k1 mod π^n, k2 mod π^n)` describing the coset,
/// as the digit expansions of the entries of `k1` then `k2`, row-major.
/// It is empty at level 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DoubleCoset {
    pub nu: Vec<i64>,
    #[serde(default)]
    pub residue: Vec<u32>,
}

impl DoubleCoset {
    pub fn rank(&self) -> usize {
        self.nu.len()
    }
    pub fn is_dominant(&self) -> bool {
        self.nu.windows(2).all(|w| w[0] >= w[1])
    }
    /// `max_j |ν_j|`.
    pub fn size(&self) -> i64 {
        self.nu.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
    fn det_val(&self) -> u32 {
        let low = self.nu.iter().copied().min().unwrap_or(0);
        self.nu.iter().map(|&v| (v - low) as u32).sum()
    }
}

/// A finitely supported integer combination of double-coset indicators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeElem {
    pub level: u32,
    pub terms: BTreeMap<DoubleCoset, i64>,
}

impl HeckeElem {
    pub fn zero(level: u32) -> Self {
        HeckeElem { level, terms: BTreeMap::new() }
    }
    pub fn basis(level: u32, d: DoubleCoset) -> Self {
        HeckeElem { level, terms: BTreeMap::from([(d, 1)]) }
    }
    pub fn from_terms(level: u32, terms: impl IntoIterator<Item = (DoubleCoset, i64)>) -> Self {
        let mut out = HeckeElem::zero(level);
        for (d, c) in terms {
            out.add_term(d, c);
        }
        out
    }
    pub fn add_term(&mut self, d: DoubleCoset, c: i64) {
        let e = self.terms.entry(d).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }
    pub fn add(&self, other: &HeckeElem) -> Result<HeckeElem> {
        if self.level != other.level {
            return Err(Error::Mismatch(format!("levels {} and {}", self.level, other.level)));
        }
        let mut out = self.clone();
        for (d, &c) in &other.terms {
            out.add_term(d.clone(), c);
        }
        Ok(out)
    }
    pub fn scale(&self, c: i64) -> HeckeElem {
        if c == 0 {
            return HeckeElem::zero(self.level);
        }
        HeckeElem { level: self.level, terms: self.terms.iter().map(|(d, &v)| (d.clone(), v * c)).collect() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, d: &DoubleCoset) -> i64 {
        self.terms.get(d).copied().unwrap_or(0)
    }
}

type Pair = (Mat, Mat);
type Product = Arc<BTreeMap<DoubleCoset, i64>>;

/// Left-coset representatives of one double coset, at the precision they were computed.
#[derive(Clone, Debug)]
pub struct LeftCosets {
    pub labels: Vec<Vec<u32>>,
    ring: TruncRing,
    shift: i64,
    reps: Vec<Mat>,
}

impl LeftCosets {
    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// The Hecke algebra of `GL_r(E)` relative to `K^n = ker(GL_r(O) → GL_r(O/π^n))`.
///
/// Stabilizers, left-coset lists and basis products are cached; the
/// structure is safe to share between threads.
pub struct HeckeAlgebra {
    field: FieldDesc,
    r: usize,
    n: u32,
    budget: u64,
    small: Option<TruncRing>,
    stabilizers: Mutex<HashMap<Vec<i64>, Arc<Vec<Pair>>>>,
    cosets: Mutex<HashMap<DoubleCoset, Arc<LeftCosets>>>,
    products: Mutex<HashMap<(DoubleCoset, DoubleCoset), Product>>,
}

impl std::fmt::Debug for HeckeAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HeckeAlgebra(GL_{}({}), level {})", self.r, self.field, self.n)
    }
}

impl HeckeAlgebra {
    pub fn new(field: &FieldDesc, r: usize, n: u32) -> Result<Self> {
        Self::with_budget(field, r, n, DEFAULT_BUDGET)
    }

    pub fn with_budget(field: &FieldDesc, r: usize, n: u32, budget: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        let small = if n > 0 { Some(field.ring(n)?) } else { None };
        Ok(HeckeAlgebra {
            field: field.clone(),
            r,
            n,
            budget,
            small,
            stabilizers: Mutex::new(HashMap::new()),
            cosets: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn level(&self) -> u32 {
        self.n
    }
    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn check_budget(&self, what: impl Into<String>, needed: u64) -> Result<()> {
        if needed > self.budget {
            return Err(Error::Budget { what: what.into(), needed, budget: self.budget });
        }
        Ok(())
    }

    fn check_nu(&self, nu: &[i64]) -> Result<()> {
        if nu.len() != self.r {
            return Err(Error::Invalid(format!("cocharacter {nu:?} has length {} for rank {}", nu.len(), self.r)));
        }
        if !nu.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!("cocharacter {nu:?} is not dominant")));
        }
        Ok(())
    }

    /// `GL_r(O/π^n)`, enumerated (a single element at level 0).
    pub fn finite_group(&self) -> Result<Vec<Mat>> {
        match &self.small {
            Some(ring) => matrix::general_linear(ring, self.r, self.budget),
            None => Ok(vec![]),
        }
    }

    /// Image of `{k ∈ GL_r(O) : ∇(ν)^{−1}k∇(ν) ∈ GL_r(O)}` under
    /// `k ↦ (k, ∇(ν)^{−1}k^{−1}∇(ν))` in `GL_r(O/π^n)²`: the pairs `(a, b)` with
    /// `a·∇(ν)·b ∈ K^n∇(ν)K^n`.
    pub fn stabilizer(&self, nu: &[i64]) -> Result<Arc<Vec<Pair>>> {
        self.check_nu(nu)?;
        if let Some(s) = self.stabilizers.lock().unwrap().get(nu) {
            return Ok(s.clone());
        }
        let Some(ring) = &self.small else {
            return Ok(Arc::new(vec![]));
        };
        let r = self.r;
        let n = self.n;
        let basis = ring.residue_field().basis();
        let mut gens: Vec<Pair> = Vec::new();
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let d = nu[i] - nu[j];
                let lo = d.max(0);
                let hi = (n as i64).max(n as i64 + d);
                for m in lo..hi {
                    for &b in &basis {
                        let t = ring.teichmuller(b);
                        let a = ring.mul_pi_pow(&t, m as u32);
                        let c = ring.neg(&ring.mul_pi_pow(&t, (m - d) as u32));
                        gens.push((matrix::elementary(ring, r, i, j, &a), matrix::elementary(ring, r, i, j, &c)));
                    }
                }
            }
        }
        for u in matrix::unit_gens(ring, 0) {
            let v = ring.inv(&u)?;
            for i in 0..r {
                gens.push((matrix::diag_unit(ring, r, i, &u), matrix::diag_unit(ring, r, i, &v)));
            }
        }
        let id = matrix::identity(ring, r);
        let mut seen: HashSet<Pair> = HashSet::from([(id.clone(), id.clone())]);
        let mut out = vec![(id.clone(), id)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            for g in &gens {
                let (a, b) = &out[idx];
                let next = (matrix::mul(ring, r, a, &g.0), matrix::mul(ring, r, &g.1, b));
                if seen.insert(next.clone()) {
                    out.push(next);
                    self.check_budget(format!("stabilizer of nu={nu:?}"), out.len() as u64)?;
                    queue.push_back(out.len() - 1);
                }
            }
        }
        let s = Arc::new(out);
        self.stabilizers.lock().unwrap().insert(nu.to_vec(), s.clone());
        Ok(s)
    }

    fn residue_key(&self, k1: &[crate::localfield::El], k2: &[crate::localfield::El]) -> Vec<u32> {
        let ring = self.small.as_ref().expect("positive level");
        let mut key = matrix::digits(ring, k1);
        key.extend(matrix::digits(ring, k2));
        key
    }

    /// The double coset `K^n k1 ∇(ν) k2 K^n` for `k1, k2 ∈ GL_r(O/π^n)`.
    pub fn coset_of(&self, nu: &[i64], k1: &[crate::localfield::El], k2: &[crate::localfield::El]) -> Result<DoubleCoset> {
        self.check_nu(nu)?;
        let Some(ring) = &self.small else {
            return Ok(DoubleCoset { nu: nu.to_vec(), residue: vec![] });
        };
        let r = self.r;
        let stab = self.stabilizer(nu)?;
        let mut best: Option<Vec<u32>> = None;
        for (a, b) in stab.iter() {
            let key = self.residue_key(&matrix::mul(ring, r, k1, a), &matrix::mul(ring, r, b, k2));
            if best.as_ref().map_or(true, |bk| key < *bk) {
                best = Some(key);
            }
        }
        Ok(DoubleCoset { nu: nu.to_vec(), residue: best.expect("stabilizer contains the identity") })
    }

    /// `h_{∇(ν)}`'s coset.
    pub fn nabla(&self, nu: &[i64]) -> Result<DoubleCoset> {
        match &self.small {
            Some(ring) => {
                let id = matrix::identity(ring, self.r);
                self.coset_of(nu, &id, &id)
            }
            None => self.coset_of(nu, &[], &[]),
        }
    }

    /// The identity coset `K^n`.
    pub fn unit_coset(&self) -> Result<DoubleCoset> {
        self.nabla(&vec![0; self.r])
    }

    pub fn unit(&self) -> Result<HeckeElem> {
        Ok(HeckeElem::basis(self.n, self.unit_coset()?))
    }

    /// `K^n k K^n` for `k ∈ GL_r(O/π^n)`.
    pub fn unit_class(&self, k: &[crate::localfield::El]) -> Result<DoubleCoset> {
        match &self.small {
            Some(ring) => self.coset_of(&vec![0; self.r], k, &matrix::identity(ring, self.r)),
            None => self.unit_coset(),
        }
    }

    /// Double cosets `K^n\K/K^n`, one for each element of `GL_r(O/π^n)`.
    pub fn transversal(&self) -> Result<Vec<DoubleCoset>> {
        if self.small.is_none() {
            return Ok(vec![self.unit_coset()?]);
        }
        let mut out: Vec<DoubleCoset> =
            self.finite_group()?.iter().map(|k| self.unit_class(k)).collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Decodes a residue into `(k1, k2)` modulo `π^n`.
    pub fn residue_pair(&self, d: &DoubleCoset) -> Result<Pair> {
        let Some(ring) = &self.small else {
            return Ok((vec![], vec![]));
        };
        let r = self.r;
        let half = r * r * self.n as usize;
        if d.residue.len() != 2 * half {
            return Err(Error::Invalid(format!(
                "residue of length {} (expected {} digits)",
                d.residue.len(),
                2 * half
            )));
        }
        let k1 = matrix::from_digits(ring, r, &d.residue[..half])?;
        let k2 = matrix::from_digits(ring, r, &d.residue[half..])?;
        if !matrix::is_invertible(ring, r, &k1) || !matrix::is_invertible(ring, r, &k2) {
            return Err(Error::NotUnit);
        }
        Ok((k1, k2))
    }

    /// Validates a user-supplied coset and puts it in canonical form.
    /// An empty residue at positive level means `∇(ν)` itself.
    pub fn canonicalize(&self, d: &DoubleCoset) -> Result<DoubleCoset> {
        self.check_nu(&d.nu)?;
        if self.small.is_none() {
            if !d.residue.is_empty() {
                return Err(Error::Invalid("level 0 cosets carry no residue".into()));
            }
            return Ok(d.clone());
        }
        if d.residue.is_empty() {
            return self.nabla(&d.nu);
        }
        let (k1, k2) = self.residue_pair(d)?;
        self.coset_of(&d.nu, &k1, &k2)
    }

    /// The canonical double coset containing `g`.
    pub fn canonical_double_coset(&self, g: &GrpElt) -> Result<DoubleCoset> {
        if g.field() != &self.field || g.rank() != self.r {
            return Err(Error::Mismatch("group element from another group".into()));
        }
        let need = self.n + g.det_val() + 1;
        if g.precision() < need {
            return Err(Error::Precision(format!("canonical form needs precision {need}, element has {}", g.precision())));
        }
        let c = cartan_decompose(g)?;
        match &self.small {
            Some(ring) => {
                let k1 = matrix::convert(ring, &c.ring, &c.k1);
                let k2 = matrix::convert(ring, &c.ring, &c.k2);
                self.coset_of(&c.nu, &k1, &k2)
            }
            None => self.coset_of(&c.nu, &[], &[]),
        }
    }

    /// A representative `k1·∇(ν)·k2` read at precision `w`.
    pub fn representative(&self, d: &DoubleCoset, w: u32) -> Result<GrpElt> {
        let ring = self.field.ring(w)?;
        let nabla = GrpElt::nabla(&ring, &d.nu);
        let Some(small) = &self.small else {
            return Ok(nabla);
        };
        let (k1, k2) = self.residue_pair(d)?;
        let k1 = GrpElt::integral_unit(&ring, self.r, matrix::convert(&ring, small, &k1))?;
        let k2 = GrpElt::integral_unit(&ring, self.r, matrix::convert(&ring, small, &k2))?;
        k1.mul(&nabla)?.mul(&k2)
    }

    /// All level-`n` double cosets inside `K∇(ν)K`, sorted.
    pub fn double_cosets(&self, nu: &[i64]) -> Result<Vec<DoubleCoset>> {
        self.check_nu(nu)?;
        let Some(ring) = &self.small else {
            return Ok(vec![DoubleCoset { nu: nu.to_vec(), residue: vec![] }]);
        };
        let r = self.r;
        let group = self.finite_group()?;
        self.check_budget("pairs in GL_r(O/pi^n)^2", (group.len() as u64).saturating_mul(group.len() as u64))?;
        let stab = self.stabilizer(nu)?;
        let mut visited: HashSet<Vec<u32>> = HashSet::new();
        let mut out = Vec::new();
        for k1 in &group {
            for k2 in &group {
                if visited.contains(&self.residue_key(k1, k2)) {
                    continue;
                }
                let mut best: Option<Vec<u32>> = None;
                for (a, b) in stab.iter() {
                    let key = self.residue_key(&matrix::mul(ring, r, k1, a), &matrix::mul(ring, r, b, k2));
                    if best.as_ref().map_or(true, |bk| key < *bk) {
                        best = Some(key.clone());
                    }
                    visited.insert(key);
                }
                out.push(DoubleCoset { nu: nu.to_vec(), residue: best.expect("nonempty") });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Left cosets `K^n x ⊂ K^n g K^n`, as the orbit of `K^n g` under right multiplication by `K^n`.
    pub fn left_cosets(&self, d: &DoubleCoset) -> Result<Arc<LeftCosets>> {
        if let Some(l) = self.cosets.lock().unwrap().get(d) {
            return Ok(l.clone());
        }
        let w = self.n + d.det_val() + 1;
        let g = self.representative(d, w)?;
        let ring = g.ring().clone();
        let r = self.r;
        let gens = matrix::congruence_gens(&ring, r, self.n);
        let start = g.integral_part().clone();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([left_label(&ring, r, &start, self.n)?]);
        let mut reps = vec![start];
        let mut idx = 0;
        while idx < reps.len() {
            for s in &gens {
                let next = matrix::mul(&ring, r, &reps[idx], s);
                if seen.insert(left_label(&ring, r, &next, self.n)?) {
                    reps.push(next);
                    self.check_budget(format!("left cosets of nu={:?}", d.nu), reps.len() as u64)?;
                }
            }
            idx += 1;
        }
        let mut labelled: Vec<(Vec<u32>, Mat)> =
            reps.into_iter().map(|m| Ok((left_label(&ring, r, &m, self.n)?, m))).collect::<Result<_>>()?;
        labelled.sort();
        let (labels, reps): (Vec<_>, Vec<_>) = labelled.into_iter().unzip();
        let out = Arc::new(LeftCosets { labels, ring, shift: g.shift(), reps });
        self.cosets.lock().unwrap().insert(d.clone(), out.clone());
        Ok(out)
    }

    /// `h_a * h_b = Σ c_g h_g` with `c_g = #{(i, j) : x_i y_j ∈ K^n g}`.
    pub fn basis_product(&self, a: &DoubleCoset, b: &DoubleCoset) -> Result<Product> {
        let key = (a.clone(), b.clone());
        if let Some(p) = self.products.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let xs = self.left_cosets(a)?;
        let ys = self.left_cosets(b)?;
        self.check_budget("coset pairs", (xs.len() as u64) * (ys.len() as u64))?;
        let r = self.r;
        let w = self.n + a.det_val() + b.det_val() + 1;
        let ring = self.field.ring(w)?;
        let lift = |l: &LeftCosets| -> Vec<Mat> { l.reps.iter().map(|m| matrix::convert(&ring, &l.ring, m)).collect() };
        let xr = lift(&xs);
        let yr = lift(&ys);
        let shift = xs.shift + ys.shift;
        let mut counts: BTreeMap<Vec<u32>, (i64, Mat)> = BTreeMap::new();
        for x in &xr {
            for y in &yr {
                let z = matrix::mul(&ring, r, x, y);
                let label = left_label(&ring, r, &z, self.n)?;
                counts.entry(label).or_insert((0, z)).0 += 1;
            }
        }
        let mut by_coset: BTreeMap<DoubleCoset, Vec<i64>> = BTreeMap::new();
        for (count, z) in counts.into_values() {
            let g = GrpElt::from_integral(&ring, r, z, shift)?;
            let d = self.canonical_double_coset(&g)?;
            by_coset.entry(d).or_default().push(count);
        }
        let mut out = BTreeMap::new();
        for (d, cs) in by_coset {
            let c = cs[0];
            let size = self.left_cosets(&d)?.len();
            if cs.iter().any(|&x| x != c) || cs.len() != size {
                return Err(Error::Verification(format!(
                    "product {a:?} * {b:?}: coset {d:?} has {} of {size} left cosets hit with counts {cs:?}",
                    cs.len()
                )));
            }
            out.insert(d, c);
        }
        let p = Arc::new(out);
        self.products.lock().unwrap().insert(key, p.clone());
        Ok(p)
    }

    pub fn convolve(&self, a: &HeckeElem, b: &HeckeElem) -> Result<HeckeElem> {
        if a.level != self.n || b.level != self.n {
            return Err(Error::Mismatch(format!("levels {} and {} in an algebra of level {}", a.level, b.level, self.n)));
        }
        let mut out = HeckeElem::zero(self.n);
        for (da, &ca) in &a.terms {
            for (db, &cb) in &b.terms {
                for (d, &c) in self.basis_product(da, db)?.iter() {
                    out.add_term(d.clone(), ca * cb * c);
                }
            }
        }
        Ok(out)
    }

    /// `K^n g^{−1} K^n` for `g` in the given coset.
    pub fn inverse(&self, d: &DoubleCoset) -> Result<DoubleCoset> {
        let nu: Vec<i64> = d.nu.iter().rev().map(|v| -v).collect();
        let Some(ring) = &self.small else {
            return self.coset_of(&nu, &[], &[]);
        };
        let r = self.r;
        // (k1 ∇(ν) k2)^{−1} = k2^{−1} w ∇(ν*) w k1^{−1} with w the order-reversing permutation
        let (k1, k2) = self.residue_pair(d)?;
        let mut rev = vec![ring.zero(); r * r];
        for i in 0..r {
            rev[i * r + (r - 1 - i)] = ring.one();
        }
        let left = matrix::mul(ring, r, &matrix::inverse(ring, r, &k2)?, &rev);
        let right = matrix::mul(ring, r, &rev, &matrix::inverse(ring, r, &k1)?);
        self.coset_of(&nu, &left, &right)
    }

    /// Dominant cocharacters with all entries in `[−bound, bound]`.
    pub fn bounded_cocharacters(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..self.r {
            let mut next = Vec::new();
            for v in &out {
                let top = v.last().copied().unwrap_or(bound);
                for x in (-bound..=top).rev() {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// All double cosets whose cocharacter lies in `[−bound, bound]^r`.
    pub fn bounded_basis(&self, bound: i64) -> Result<BTreeSet<DoubleCoset>> {
        let mut out = BTreeSet::new();
        for nu in self.bounded_cocharacters(bound) {
            out.extend(self.double_cosets(&nu)?);
        }
        Ok(out)
    }
}

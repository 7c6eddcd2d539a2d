//! The torsion tower `O/π^M[t_1, …, t_n]` cut out by Weierstrass factors.
//!
//! Stage `j` adjoins a root `t_j` of a monic Eisenstein polynomial `g_j` over
//! stage `j − 1`: `g_1` is the factor of `f/X` and `g_{j+1}` the factor of
//! `f − t_j`. An element of stage `l` is a polynomial in `t_l` of degree
//! `< deg g_l` with stage `l − 1` coefficients, stored as consecutive blocks.

use std::sync::Arc;

use serde::Serialize;

use super::formal::{FormalGroup, Source};
use crate::error::{Error, Result};
use crate::localfield::{El, TruncRing};
use crate::series::CoeffRing;

/// Element of a [`TowerRing`]: base coordinates in the monomial basis.
pub type TowerEl = Vec<El>;

#[derive(Clone, Debug)]
struct Level {
    /// Low coefficients of `g = t^d + Σ_{i<d} low[i] t^i` over the previous stage.
    low: Vec<TowerEl>,
    /// Size of the previous stage.
    below: usize,
    /// Ramification index over `E`.
    e: u32,
    /// Valuation of each basis monomial in units of `v(t_l)`.
    mono_val: Vec<u32>,
}

impl Level {
    fn d(&self) -> usize {
        self.low.len()
    }
}

/// The ring `O/π^M[t_1, …, t_depth]/(g_1, …, g_depth)`.
#[derive(Clone, Debug)]
pub struct TowerRing {
    base: TruncRing,
    levels: Arc<Vec<Level>>,
    depth: usize,
}

impl TowerRing {
    pub fn new(base: TruncRing) -> Self {
        TowerRing { base, levels: Arc::new(Vec::new()), depth: 0 }
    }

    pub fn base(&self) -> &TruncRing {
        &self.base
    }
    pub fn depth(&self) -> usize {
        self.depth
    }
    pub fn size(&self) -> usize {
        self.size_at(self.depth)
    }
    fn size_at(&self, depth: usize) -> usize {
        self.levels[..depth].iter().map(Level::d).product()
    }
    /// Ramification index of the top stage over `E`.
    pub fn ramification(&self) -> u32 {
        if self.depth == 0 {
            1
        } else {
            self.levels[self.depth - 1].e
        }
    }
    /// `deg g_l` for `1 ≤ l ≤ depth`.
    pub fn stage_degree(&self, l: usize) -> usize {
        self.levels[l - 1].d()
    }

    /// The same tower cut at stage `depth`.
    pub fn at(&self, depth: usize) -> TowerRing {
        assert!(depth <= self.levels.len());
        TowerRing { base: self.base.clone(), levels: self.levels.clone(), depth }
    }

    /// Adjoins a root of the monic polynomial with low coefficients `low`
    /// (elements of this ring). The polynomial must be Eisenstein.
    pub fn extend(&self, low: Vec<TowerEl>) -> Result<TowerRing> {
        let d = low.len();
        if d == 0 {
            return Err(Error::Invalid("a stage polynomial has positive degree".into()));
        }
        if !low.iter().all(|c| self.val(c).is_none_or(|v| v >= 1)) || self.val(&low[0]) != Some(1) {
            return Err(Error::Invalid("stage polynomial is not Eisenstein".into()));
        }
        let below = self.size();
        let prev_val: Vec<u32> = if self.depth == 0 { vec![0] } else { self.levels[self.depth - 1].mono_val.clone() };
        let mut mono_val = Vec::with_capacity(below * d);
        for a in 0..d {
            mono_val.extend(prev_val.iter().map(|&v| a as u32 + d as u32 * v));
        }
        let level = Level { low, below, e: self.ramification() * d as u32, mono_val };
        let mut levels: Vec<Level> = self.levels[..self.depth].to_vec();
        levels.push(level);
        Ok(TowerRing { base: self.base.clone(), depth: self.depth + 1, levels: Arc::new(levels) })
    }

    pub fn zero(&self) -> TowerEl {
        vec![self.base.zero(); self.size()]
    }
    pub fn one(&self) -> TowerEl {
        self.from_base(&self.base.one())
    }
    pub fn from_base(&self, c: &El) -> TowerEl {
        let mut out = self.zero();
        out[0] = c.clone();
        out
    }

    /// Embeds an element of stage `k ≤ depth`.
    pub fn embed(&self, a: &TowerEl) -> TowerEl {
        let mut out = self.zero();
        out[..a.len()].clone_from_slice(a);
        out
    }

    /// The generator `t_i`, `1 ≤ i ≤ depth`.
    pub fn gen(&self, i: usize) -> TowerEl {
        assert!(i >= 1 && i <= self.depth);
        let stage = self.at(i);
        let lower = self.at(i - 1);
        let x = stage.reduce(i, vec![lower.zero(), lower.one()]);
        self.embed(&x)
    }

    pub fn add(&self, a: &TowerEl, b: &TowerEl) -> TowerEl {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    pub fn neg(&self, a: &TowerEl) -> TowerEl {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    pub fn sub(&self, a: &TowerEl, b: &TowerEl) -> TowerEl {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    pub fn scale_base(&self, c: &El, a: &TowerEl) -> TowerEl {
        a.iter().map(|x| self.base.mul(c, x)).collect()
    }
    pub fn is_zero(&self, a: &TowerEl) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    pub fn mul(&self, a: &TowerEl, b: &TowerEl) -> TowerEl {
        self.mul_at(self.depth, a, b)
    }

    fn mul_at(&self, depth: usize, a: &[El], b: &[El]) -> TowerEl {
        if depth == 0 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        let level = &self.levels[depth - 1];
        let (d, w) = (level.d(), level.below);
        let lower = self.at(depth - 1);
        let mut prod: Vec<TowerEl> = vec![lower.zero(); 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * w..(i + 1) * w];
            if ai.iter().all(|x| self.base.is_zero(x)) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * w..(j + 1) * w];
                if bj.iter().all(|x| self.base.is_zero(x)) {
                    continue;
                }
                let t = self.mul_at(depth - 1, ai, bj);
                prod[i + j] = lower.add(&prod[i + j], &t);
            }
        }
        self.at(depth).reduce(depth, prod)
    }

    /// Reduces a polynomial in `t_depth` with stage `depth − 1` coefficients.
    fn reduce(&self, depth: usize, mut poly: Vec<TowerEl>) -> TowerEl {
        let level = &self.levels[depth - 1];
        let d = level.d();
        let lower = self.at(depth - 1);
        for k in (d..poly.len()).rev() {
            let lead = std::mem::replace(&mut poly[k], lower.zero());
            if lower.is_zero(&lead) {
                continue;
            }
            for (i, g) in level.low.iter().enumerate() {
                let t = lower.mul(&lead, g);
                poly[k - d + i] = lower.sub(&poly[k - d + i], &t);
            }
        }
        poly.resize(d, lower.zero());
        poly.concat()
    }

    pub fn pow(&self, a: &TowerEl, mut e: u64) -> TowerEl {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Valuation in units of `v(t_depth)`; `None` for zero.
    pub fn val(&self, a: &TowerEl) -> Option<u32> {
        let e = self.ramification();
        a.iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(i, c)| {
                let mono = if self.depth == 0 { 0 } else { self.levels[self.depth - 1].mono_val[i] };
                e * self.base.val(c) + mono
            })
            .min()
    }

    /// Whether `a ∈ π^k` times the ring (every base coordinate divisible by `π^k`).
    pub fn divisible_by_pi_pow(&self, a: &TowerEl, k: u32) -> bool {
        a.iter().all(|c| self.base.val(c) >= k)
    }

    pub fn inv(&self, a: &TowerEl) -> Result<TowerEl> {
        let c = self.base.inv(&a[0])?;
        let w = self.sub(&self.scale_base(&c, a), &self.one());
        let minus_w = self.neg(&w);
        let mut sum = self.one();
        let mut term = self.one();
        for _ in 0..=(self.ramification() * self.base.precision()) {
            term = self.mul(&term, &minus_w);
            if self.is_zero(&term) {
                return Ok(self.scale_base(&c, &sum));
            }
            sum = self.add(&sum, &term);
        }
        Err(Error::Verification("maximal ideal is not nilpotent".into()))
    }

    /// `Σ c_k x^k` for base coefficients.
    pub fn eval_base(&self, coeffs: &[El], x: &TowerEl) -> TowerEl {
        coeffs.iter().rev().fold(self.zero(), |acc, c| {
            let mut out = self.mul(&acc, x);
            out[0] = self.base.add(&out[0], c);
            out
        })
    }

    /// `Σ c_k x^k` for coefficients from a lower stage.
    pub fn eval(&self, coeffs: &[TowerEl], x: &TowerEl) -> TowerEl {
        coeffs.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), &self.embed(c)))
    }

    /// Base coordinates as digit lists.
    pub fn digits(&self, a: &TowerEl) -> Vec<Vec<u32>> {
        a.iter().map(|c| self.base.digits(c)).collect()
    }
}

impl CoeffRing for TowerRing {
    type Elem = TowerEl;
    fn zero(&self) -> TowerEl {
        TowerRing::zero(self)
    }
    fn one(&self) -> TowerEl {
        TowerRing::one(self)
    }
    fn from_i64(&self, v: i64) -> TowerEl {
        self.from_base(&self.base.from_int(v))
    }
    fn add(&self, a: &TowerEl, b: &TowerEl) -> TowerEl {
        TowerRing::add(self, a, b)
    }
    fn neg(&self, a: &TowerEl) -> TowerEl {
        TowerRing::neg(self, a)
    }
    fn mul(&self, a: &TowerEl, b: &TowerEl) -> TowerEl {
        TowerRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &TowerEl) -> bool {
        TowerRing::is_zero(self, a)
    }
}

fn trunc_mul(ring: &TowerRing, a: &[TowerEl], b: &[TowerEl], len: usize) -> Vec<TowerEl> {
    let mut out = vec![ring.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !ring.is_zero(y) {
                out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
            }
        }
    }
    out
}

fn series_inverse(ring: &TowerRing, s: &[TowerEl]) -> Result<Vec<TowerEl>> {
    let c = ring.inv(&s[0])?;
    let mut out = vec![c.clone()];
    for k in 1..s.len() {
        let mut acc = ring.zero();
        for i in 1..=k {
            acc = ring.add(&acc, &ring.mul(&s[i], &out[k - i]));
        }
        out.push(ring.neg(&ring.mul(&c, &acc)));
    }
    Ok(out)
}

/// Weierstrass factor of a series `h` (coefficients `h[0..=D]`) over a tower stage.
///
/// Returns the monic `g` with `h = unit · g`, or the low coefficients when
/// `h` is already monic of that degree. `exact` marks `h` as a polynomial
/// whose cutoff loses nothing. The truncated iteration is trusted only when
/// the cutoff leaves enough room for the `π`-adic contraction; otherwise a
/// precision error is returned.
pub fn weierstrass(ring: &TowerRing, h: &[TowerEl], exact: bool) -> Result<Vec<TowerEl>> {
    let d = h
        .iter()
        .position(|c| ring.val(c) == Some(0))
        .ok_or_else(|| Error::Invalid("series is not distinguished: no unit coefficient".into()))?;
    let low = &h[..d];
    let high = &h[d..];
    if high[0] == ring.one() && high[1..].iter().all(|c| ring.is_zero(c)) {
        return Ok(low.to_vec());
    }
    let len = high.len();
    if exact && high[1..].iter().all(|c| ring.is_zero(c)) {
        let inv = ring.inv(&high[0])?;
        return Ok(low.iter().map(|c| ring.mul(&inv, c)).collect());
    }
    let v_min = low.iter().filter_map(|c| ring.val(c)).min();
    let need = ring.ramification() * ring.base().precision();
    if let Some(v) = v_min {
        let steps = need.div_ceil(v) as usize;
        if !exact && len < d * steps + 1 {
            return Err(Error::Precision(format!(
                "Weierstrass factor of degree {d} needs degree cutoff at least {}",
                d * steps + d
            )));
        }
    }
    let inv_high = series_inverse(ring, high)?;
    let mut quotient = inv_high.clone();
    for _ in 0..=(need as usize * len + 2) {
        // α(Q·h_low): coefficients of X^{k+d}
        let prod = trunc_mul(ring, &quotient, low, len + d);
        let mut rhs: Vec<TowerEl> = prod[d..].iter().map(|c| ring.neg(c)).collect();
        rhs[0] = ring.add(&rhs[0], &ring.one());
        let next = trunc_mul(ring, &inv_high, &rhs, len);
        if next == quotient {
            let g = trunc_mul(ring, &quotient, low, d);
            return Ok(g);
        }
        quotient = next;
    }
    Err(Error::Precision("Weierstrass iteration did not stabilize".into()))
}

/// The stages `O ⊂ O[t_1] ⊂ … ⊂ O[t_n]` of a formal group, with the absolute
/// torsion polynomials `G_j = f_{π^j}/f_{π^{j−1}}` over `O`.
#[derive(Clone, Debug)]
pub struct Tower {
    group: FormalGroup,
    exact: bool,
    f: Vec<El>,
    ring: TowerRing,
    /// Low coefficients of `g_j` over stage `j − 1`.
    stage: Vec<Vec<TowerEl>>,
    /// Monic `G_j` over `O`, all coefficients.
    torsion: Vec<Vec<El>>,
    /// `f_{π^j}` for `j = 1..=n`.
    iterates: Vec<Vec<El>>,
}

/// Builds the torsion tower of depth `n ≥ 1`.
pub fn torsion_tower(group: &FormalGroup, n: usize) -> Result<Tower> {
    if n == 0 {
        return Err(Error::Invalid("tower depth must be positive".into()));
    }
    let (fs, exact) = group.torsion_series()?;
    let f: Vec<El> = fs.coeffs().to_vec();
    let base = group.integral_ring().clone();
    let top = f.iter().rposition(|c| !base.is_zero(c)).unwrap_or(0);
    let degree = group.degree();

    let mut ring = TowerRing::new(base.clone());
    let h: Vec<TowerEl> = f[1..].iter().map(|c| vec![c.clone()]).collect();
    let mut stage = vec![weierstrass(&ring, &h, exact)?];
    for j in 1..n {
        ring = ring.extend(stage[j - 1].clone())?;
        let mut h: Vec<TowerEl> = f.iter().map(|c| ring.from_base(c)).collect();
        h[0] = ring.sub(&h[0], &ring.gen(j));
        stage.push(weierstrass(&ring, &h, exact)?);
    }
    ring = ring.extend(stage[n - 1].clone())?;

    let i1 = group.integral_series();
    let base_ring = ring.at(0);
    let mut iterates = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    let mut current = fs.clone();
    let mut previous_factor: Vec<El> = vec![base.zero(), base.one()];
    for j in 1..=n {
        if j > 1 {
            current = i1.compose1(&fs, &current)?;
        }
        let exact_j = exact && (top as u64).pow(j as u32) <= degree as u64;
        let h: Vec<TowerEl> = current.coeffs().iter().map(|c| vec![c.clone()]).collect();
        let mut factor: Vec<El> = weierstrass(&base_ring, &h, exact_j)?.into_iter().map(|mut c| c.remove(0)).collect();
        factor.push(base.one());
        torsion.push(divide_monic(&base, &factor, &previous_factor)?);
        iterates.push(current.coeffs().to_vec());
        previous_factor = factor;
    }
    Ok(Tower { group: group.clone(), exact, f, ring, stage, torsion, iterates })
}

/// Exact quotient of polynomials over `O/π^M` by a monic divisor.
fn divide_monic(base: &TruncRing, num: &[El], den: &[El]) -> Result<Vec<El>> {
    let dd = den.len() - 1;
    if num.len() < den.len() {
        return Err(Error::Verification("torsion factors are not nested".into()));
    }
    let mut rem = num.to_vec();
    let mut quot = vec![base.zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        for (i, g) in den.iter().enumerate() {
            rem[k + i] = base.sub(&rem[k + i], &base.mul(&c, g));
        }
        quot[k] = c;
    }
    if !rem.iter().all(|c| base.is_zero(c)) {
        return Err(Error::Verification("torsion factors are not nested".into()));
    }
    Ok(quot)
}

/// Outcome of the tower checks.
#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub field: String,
    pub source: Source,
    pub q: u32,
    pub depth: usize,
    pub precision: u32,
    pub degree: usize,
    pub stage_degrees: Vec<usize>,
    pub torsion_degrees: Vec<usize>,
    pub torsion_count: usize,
    pub checks: Vec<(String, bool)>,
}

impl TowerReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|(_, b)| *b)
    }
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, b)| !b).map(|(s, _)| s.as_str()).collect()
    }
}

/// Outcome of [`Tower::unit_action_check`].
#[derive(Clone, Debug, Serialize)]
pub struct UnitActionReport {
    pub unit: Vec<u32>,
    pub level: usize,
    /// `G_n([u](t_n)) = 0`: the image is again a primitive `π^n`-torsion point.
    pub permutes_torsion: bool,
    pub fixes_generator: bool,
    /// Whether `u ≡ 1 (mod π^n)`.
    pub congruent_to_one: bool,
}

impl UnitActionReport {
    pub fn ok(&self) -> bool {
        self.permutes_torsion && self.fixes_generator == self.congruent_to_one
    }
}

/// JSON form of a [`Tower`].
#[derive(Clone, Debug, Serialize)]
pub struct TowerJson {
    pub field: String,
    pub depth: usize,
    pub precision: u32,
    /// `G_j` over `O`, coefficient digit lists from degree 0.
    pub torsion_polynomials: Vec<Vec<Vec<u32>>>,
    /// `g_j` over stage `j − 1`: each coefficient as base digit lists in the monomial basis.
    pub stage_polynomials: Vec<Vec<Vec<Vec<u32>>>>,
    pub report: TowerReport,
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.stage.len()
    }
    pub fn ring(&self) -> &TowerRing {
        &self.ring
    }
    pub fn group(&self) -> &FormalGroup {
        &self.group
    }
    /// The torsion series used for the tower, modulo `π^M`.
    pub fn series(&self) -> &[El] {
        &self.f
    }
    /// Low coefficients of `g_j`, `1 ≤ j ≤ n`.
    pub fn stage_polynomial(&self, j: usize) -> &[TowerEl] {
        &self.stage[j - 1]
    }
    /// `G_j` over `O`, `1 ≤ j ≤ n`.
    pub fn torsion_polynomial(&self, j: usize) -> &[El] {
        &self.torsion[j - 1]
    }
    /// `f_{π^j}`, `1 ≤ j ≤ n`.
    pub fn iterate(&self, j: usize) -> &[El] {
        &self.iterates[j - 1]
    }

    /// `Σ c_k x^k` at stage `l` for a series `c` of cutoff `D`; the truncation is
    /// accepted only if `x^{D+1}` vanishes modulo `π^M`.
    pub fn eval_series(&self, level: usize, coeffs: &[El], exact: bool, x: &TowerEl) -> Result<TowerEl> {
        let ring = self.ring.at(level);
        if !exact {
            let v = ring.val(x).unwrap_or(u32::MAX) as u64;
            let need = ring.ramification() as u64 * ring.base().precision() as u64;
            if v.saturating_mul(coeffs.len() as u64) < need {
                return Err(Error::Precision(format!(
                    "degree cutoff {} too small to evaluate at stage {level}",
                    coeffs.len() - 1
                )));
            }
        }
        Ok(ring.eval_base(coeffs, x))
    }

    pub fn check(&self) -> Result<TowerReport> {
        let n = self.depth();
        let base = self.ring.base();
        let q = base.q() as usize;
        let mut checks = Vec::new();
        for j in 1..=n {
            let below = self.ring.at(j - 1);
            let low = &self.stage[j - 1];
            let eisenstein =
                low.iter().all(|c| below.val(c).is_none_or(|v| v >= 1)) && below.val(&low[0]) == Some(1);
            let expected = if j == 1 { q - 1 } else { q };
            checks.push((format!("stage polynomial {j} is Eisenstein of degree {expected}"), eisenstein && low.len() == expected));

            let big = &self.torsion[j - 1];
            let d = big.len() - 1;
            let eis_o = base.is_one(&big[d]) && big[..d].iter().all(|c| base.val(c) >= 1) && base.val(&big[0]) == 1;
            let expected = q.pow(j as u32 - 1) * (q - 1);
            checks.push((format!("torsion polynomial {j} is Eisenstein of degree {expected}"), eis_o && d == expected));

            let stage = self.ring.at(j);
            let t = stage.gen(j);
            checks.push((format!("torsion polynomial {j} vanishes at t_{j}"), stage.is_zero(&stage.eval_base(big, &t))));
            let image = self.eval_series(j, &self.f, self.exact, &t)?;
            let target = if j == 1 { stage.zero() } else { stage.gen(j - 1) };
            let name = if j == 1 { "f_pi(t_1) = 0".to_string() } else { format!("f_pi(t_{j}) = t_{}", j - 1) };
            checks.push((name, image == target));
        }
        let count = 1 + self.torsion.iter().map(|g| g.len() - 1).sum::<usize>();
        checks.push((format!("torsion count is q^{n}"), count == q.pow(n as u32)));
        for (j, ok) in self.limit_coordinate_check()? {
            checks.push((format!("t_{}^(q^{}) = t_{j}^(q^{j}) mod pi^{}", j + 1, j + 1, j + 1), ok));
        }
        Ok(TowerReport {
            field: self.group.field().name(),
            source: self.group.source().clone(),
            q: base.q(),
            depth: n,
            precision: base.precision(),
            degree: self.group.degree(),
            stage_degrees: self.stage.iter().map(Vec::len).collect(),
            torsion_degrees: self.torsion.iter().map(|g| g.len() - 1).collect(),
            torsion_count: count,
            checks,
        })
    }

    /// `t_{j+1}^{q^{j+1}} ≡ t_j^{q^j} (mod π^{j+1})` for `1 ≤ j < n`.
    pub fn limit_coordinate_check(&self) -> Result<Vec<(usize, bool)>> {
        let n = self.depth();
        let ring = &self.ring;
        let q = ring.base().q() as u64;
        let mut out = Vec::new();
        for j in 1..n {
            let k = j as u32 + 1;
            if k > ring.base().precision() {
                return Err(Error::Precision(format!("congruence mod pi^{k} needs precision {k}")));
            }
            let a = ring.pow(&ring.gen(j + 1), q.pow(j as u32 + 1));
            let b = ring.pow(&ring.gen(j), q.pow(j as u32));
            out.push((j, ring.divisible_by_pi_pow(&ring.sub(&a, &b), k)));
        }
        Ok(out)
    }

    /// `[u](t_n)` for a unit `u ∈ O/π^M`.
    pub fn unit_image(&self, u: &El) -> Result<TowerEl> {
        let base = self.ring.base();
        if !base.is_unit(u) {
            return Err(Error::NotUnit);
        }
        let n = self.depth();
        let series = self.group.mult_by(base, u)?;
        self.eval_series(n, series.coeffs(), false, &self.ring.gen(n))
    }

    /// Checks that `[u]` maps `t_n` to a root of `G_n`, and that it
    /// fixes `t_n` exactly when `u ≡ 1 (mod π^n)`.
    pub fn unit_action_check(&self, u: &El) -> Result<UnitActionReport> {
        let n = self.depth();
        let base = self.ring.base();
        let x = self.unit_image(u)?;
        let ring = &self.ring;
        let torsion_root = ring.is_zero(&ring.eval_base(&self.torsion[n - 1], &x));
        Ok(UnitActionReport {
            unit: base.digits(u),
            level: n,
            permutes_torsion: torsion_root,
            fixes_generator: x == ring.gen(n),
            congruent_to_one: base.val(&base.sub(u, &base.one())) >= n as u32,
        })
    }

    pub fn to_json(&self) -> Result<TowerJson> {
        let base = self.ring.base();
        Ok(TowerJson {
            field: self.group.field().name(),
            depth: self.depth(),
            precision: base.precision(),
            torsion_polynomials: self.torsion.iter().map(|g| g.iter().map(|c| base.digits(c)).collect()).collect(),
            stage_polynomials: self
                .stage
                .iter()
                .enumerate()
                .map(|(j, low)| {
                    let below = self.ring.at(j);
                    let mut coeffs: Vec<Vec<Vec<u32>>> = low.iter().map(|c| below.digits(c)).collect();
                    coeffs.push(below.digits(&below.one()));
                    coeffs
                })
                .collect(),
            report: self.check()?,
        })
    }
}

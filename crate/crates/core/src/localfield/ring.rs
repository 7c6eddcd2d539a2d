//! The finite rings `O/π^N`.
//!
//! Mixed characteristic elements are polynomials `Σ_{i<e} c_i x^i` in the
//! Eisenstein root with `c_i ∈ Z_q` stored modulo `p^{M_i}`, `M_i = ⌈(N−i)/e⌉`.
//! Since `v(Σ c_i x^i) = min_i (e·v_p(c_i) + i)`, this is a canonical form for
//! the quotient by `π^N`. Layout: coordinate `k` of `c_i` sits at `i·f + k`.
//! Laurent elements are the `N` coefficients of `t^0..t^{N−1}` as residue codes.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use smallvec::{smallvec, SmallVec};

use super::{FieldDesc, Kind};
use crate::error::{Error, Result};
use crate::fq::ResidueField;

/// Raw element of a [`TruncRing`]; meaningful only together with its ring.
pub type El = SmallVec<[u64; 16]>;

struct MixedCtx {
    p: u64,
    e: usize,
    f: usize,
    /// `p^{M_0}`, the working modulus for intermediate products.
    m0: u64,
    /// `p^{M_i}` for each `i < e`.
    mods: Vec<u64>,
    /// Eisenstein coefficients `a_0..a_{e−1}` (each `f` coordinates, mod `m0`).
    eis: Vec<u64>,
    /// Lift of the residue polynomial, `f + 1` entries mod `m0`.
    ypoly: Vec<u64>,
    /// `p/π` as an element (valid at this precision).
    rho: El,
}

enum Repr {
    Mixed(MixedCtx),
    Laurent(ResidueField),
}

struct RingInner {
    field: FieldDesc,
    n: u32,
    repr: Repr,
    pi: El,
    teich: OnceLock<Vec<El>>,
}

/// The ring `O/π^N` for a fixed field and precision; cheap to clone.
#[derive(Clone)]
pub struct TruncRing(Arc<RingInner>);

impl PartialEq for TruncRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.n == other.0.n && self.0.field == other.0.field)
    }
}
impl Eq for TruncRing {}

impl fmt::Debug for TruncRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O/pi^{} of {}", self.0.n, self.0.field)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl MixedCtx {
    fn len(&self) -> usize {
        self.e * self.f
    }

    /// Product of two `Z_q` coefficients mod `m0`, accumulated (with sign) into `out`.
    fn zq_mul_acc(&self, a: &[u64], b: &[u64], out: &mut [u64], negate: bool) {
        let m = self.m0;
        if self.f == 1 {
            let t = mulmod(a[0], b[0], m);
            out[0] = if negate { (out[0] + m - t) % m } else { (out[0] + t) % m };
            return;
        }
        let f = self.f;
        let mut wide = [0u128; 32];
        for i in 0..f {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f {
                wide[i + j] += mulmod(a[i], b[j], m) as u128;
            }
        }
        let mut w: SmallVec<[u64; 32]> = wide[..2 * f - 1].iter().map(|&c| (c % m as u128) as u64).collect();
        for s in (f..2 * f - 1).rev() {
            let lead = w[s];
            if lead == 0 {
                continue;
            }
            for k in 0..f {
                let t = mulmod(lead, self.ypoly[k], m);
                w[s - f + k] = (w[s - f + k] + m - t) % m;
            }
        }
        for k in 0..f {
            out[k] = if negate { (out[k] + m - w[k]) % m } else { (out[k] + w[k]) % m };
        }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> El {
        let (e, f) = (self.e, self.f);
        // product coefficients of x^s, s < 2e − 1, each an element of Z_q
        let mut prod: SmallVec<[u64; 64]> = smallvec![0; (2 * e - 1) * f];
        for i in 0..e {
            let ai = &a[i * f..(i + 1) * f];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..e {
                let bj = &b[j * f..(j + 1) * f];
                if bj.iter().all(|&c| c == 0) {
                    continue;
                }
                let (lo, hi) = ((i + j) * f, (i + j + 1) * f);
                self.zq_mul_acc(ai, bj, &mut prod[lo..hi], false);
            }
        }
        // x^e = −Σ a_i x^i
        let mut lead: SmallVec<[u64; 8]> = smallvec![0; f];
        for s in (e..2 * e - 1).rev() {
            lead.copy_from_slice(&prod[s * f..(s + 1) * f]);
            if lead.iter().all(|&c| c == 0) {
                continue;
            }
            for i in 0..e {
                let (lo, hi) = ((s - e + i) * f, (s - e + i + 1) * f);
                self.zq_mul_acc(&lead, &self.eis[i * f..(i + 1) * f], &mut prod[lo..hi], true);
            }
        }
        let mut out: El = prod[..e * f].iter().copied().collect();
        self.reduce(&mut out);
        out
    }

    fn reduce(&self, a: &mut [u64]) {
        for i in 0..self.e {
            let md = self.mods[i];
            for c in &mut a[i * self.f..(i + 1) * self.f] {
                *c %= md;
            }
        }
    }
}

fn pow_u64(p: u64, k: u32) -> u64 {
    p.pow(k)
}

impl TruncRing {
    pub(crate) fn new(field: FieldDesc, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("precision must be positive".into()));
        }
        if n > field.max_precision() {
            return Err(Error::Precision(format!(
                "precision {n} exceeds the supported maximum {} for {field}",
                field.max_precision()
            )));
        }
        let (repr, pi) = match field.kind() {
            Kind::Laurent => {
                let mut pi: El = smallvec![0; n as usize];
                if n > 1 {
                    pi[1] = 1;
                }
                (Repr::Laurent(field.residue().clone()), pi)
            }
            Kind::Mixed { eisenstein } => {
                let p = field.p() as u64;
                let e = eisenstein.len() - 1;
                let f = field.f() as usize;
                let mexp = |i: usize| -> u32 { (n as usize).saturating_sub(i).div_ceil(e) as u32 };
                let m0 = pow_u64(p, mexp(0));
                let mods: Vec<u64> = (0..e).map(|i| pow_u64(p, mexp(i))).collect();
                let eis: Vec<u64> = eisenstein[..e].iter().flat_map(|c| c.iter().map(|&v| v % m0)).collect();
                let mut ypoly: Vec<u64> = field.residue().defining_poly().iter().map(|&c| c as u64 % m0).collect();
                if f == 1 {
                    ypoly = vec![0, 1 % m0];
                }
                let mut ctx = MixedCtx { p, e, f, m0, mods, eis, ypoly, rho: El::new() };
                // ρ = p/x = −w^{-1}(x^{e−1} + a_{e−1}x^{e−2} + … + a_1), a_0 = p·w
                let z = super::zq::Zq::new(p, field.residue().defining_poly(), mexp(0).max(1));
                let a0 = &eisenstein[0];
                let w: Vec<u64> = a0.iter().map(|&c| (c / p) % z.modulus).collect();
                let winv = z.inv(&w, field.residue().inv(z.residue(&w)).expect("Eisenstein constant term"));
                let mut rho: El = smallvec![0; e * f];
                for i in 0..e {
                    let coeff: Vec<u64> =
                        if i == e - 1 { z.one() } else { eisenstein[i + 1].iter().map(|&c| c % z.modulus).collect() };
                    let t = z.neg(&z.mul(&winv, &coeff));
                    rho[i * f..(i + 1) * f].copy_from_slice(&t);
                }
                ctx.reduce(&mut rho);
                ctx.rho = rho;
                let mut pi: El = smallvec![0; e * f];
                if e > 1 {
                    pi[f] = 1;
                } else {
                    // x = −a_0 when e = 1
                    let t = z.neg(&a0.iter().map(|&c| c % z.modulus).collect::<Vec<_>>());
                    pi[..f].copy_from_slice(&t);
                }
                ctx.reduce(&mut pi);
                (Repr::Mixed(ctx), pi)
            }
        };
        Ok(TruncRing(Arc::new(RingInner { field, n, repr, pi, teich: OnceLock::new() })))
    }

    pub fn field(&self) -> &FieldDesc {
        &self.0.field
    }
    /// The precision `N`.
    pub fn precision(&self) -> u32 {
        self.0.n
    }
    pub fn residue_field(&self) -> &ResidueField {
        self.0.field.residue()
    }
    pub fn q(&self) -> u32 {
        self.0.field.q()
    }
    /// Number of elements `q^N`, if it fits in `u64`.
    pub fn order(&self) -> Option<u64> {
        (self.q() as u64).checked_pow(self.0.n)
    }
    /// The same field at another precision.
    pub fn at(&self, n: u32) -> Result<TruncRing> {
        if n == self.0.n {
            return Ok(self.clone());
        }
        TruncRing::new(self.0.field.clone(), n)
    }

    fn width(&self) -> usize {
        match &self.0.repr {
            Repr::Mixed(c) => c.len(),
            Repr::Laurent(_) => self.0.n as usize,
        }
    }

    pub fn zero(&self) -> El {
        smallvec![0; self.width()]
    }

    pub fn one(&self) -> El {
        self.from_int(1)
    }

    pub fn pi(&self) -> El {
        self.0.pi.clone()
    }

    pub fn from_int(&self, v: i64) -> El {
        let mut out = self.zero();
        match &self.0.repr {
            Repr::Mixed(c) => out[0] = (v as i128).rem_euclid(c.mods[0] as i128) as u64,
            Repr::Laurent(k) => out[0] = k.from_int(v) as u64,
        }
        out
    }

    /// Embeds an element of the unramified base given by `f` integer coordinates in `y`.
    pub fn from_unramified(&self, coords: &[i64]) -> El {
        let mut out = self.zero();
        match &self.0.repr {
            Repr::Mixed(c) => {
                let wide: Vec<i128> = coords.iter().map(|&v| v as i128).collect();
                let zq = super::zq::Zq::new(c.p, self.residue_field().defining_poly(), self.mexp(0).max(1));
                let r = zq.from_ints(&wide);
                for k in 0..c.f {
                    out[k] = r[k] % c.mods[0];
                }
            }
            Repr::Laurent(k) => {
                let v: Vec<u32> = coords.iter().map(|&c| k.from_int(c)).collect();
                out[0] = k.from_coords(&v) as u64;
            }
        }
        out
    }

    fn mexp(&self, i: usize) -> u32 {
        match &self.0.repr {
            Repr::Mixed(c) => (self.0.n as usize).saturating_sub(i).div_ceil(c.e) as u32,
            Repr::Laurent(_) => 0,
        }
    }

    /// Checks that `a` is a canonical element of this ring.
    pub fn contains(&self, a: &El) -> bool {
        if a.len() != self.width() {
            return false;
        }
        match &self.0.repr {
            Repr::Mixed(c) => (0..c.e).all(|i| a[i * c.f..(i + 1) * c.f].iter().all(|&v| v < c.mods[i])),
            Repr::Laurent(k) => a.iter().all(|&v| v < k.q() as u64),
        }
    }

    pub fn add(&self, a: &El, b: &El) -> El {
        match &self.0.repr {
            Repr::Mixed(c) => {
                let mut out = a.clone();
                for i in 0..c.e {
                    let md = c.mods[i];
                    for k in i * c.f..(i + 1) * c.f {
                        let s = out[k] + b[k];
                        out[k] = if s >= md { s - md } else { s };
                    }
                }
                out
            }
            Repr::Laurent(k) => a.iter().zip(b).map(|(&x, &y)| k.add(x as u32, y as u32) as u64).collect(),
        }
    }

    pub fn neg(&self, a: &El) -> El {
        match &self.0.repr {
            Repr::Mixed(c) => {
                let mut out = a.clone();
                for i in 0..c.e {
                    let md = c.mods[i];
                    for v in &mut out[i * c.f..(i + 1) * c.f] {
                        if *v != 0 {
                            *v = md - *v;
                        }
                    }
                }
                out
            }
            Repr::Laurent(k) => a.iter().map(|&x| k.neg(x as u32) as u64).collect(),
        }
    }

    pub fn sub(&self, a: &El, b: &El) -> El {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &El, b: &El) -> El {
        match &self.0.repr {
            Repr::Mixed(c) => c.mul(a, b),
            Repr::Laurent(k) => {
                let n = a.len();
                let mut out = self.zero();
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for j in 0..n - i {
                        let y = b[j];
                        if y != 0 {
                            out[i + j] = k.add(out[i + j] as u32, k.mul(x as u32, y as u32)) as u64;
                        }
                    }
                }
                out
            }
        }
    }

    pub fn is_zero(&self, a: &El) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &El) -> bool {
        *a == self.one()
    }

    pub fn pow(&self, a: &El, mut e: u64) -> El {
        let mut base = a.clone();
        let mut acc = self.one();
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

    /// `π`-adic valuation, equal to `N` for zero.
    pub fn val(&self, a: &El) -> u32 {
        match &self.0.repr {
            Repr::Mixed(c) => {
                let mut best = self.0.n;
                for i in 0..c.e {
                    for &v in &a[i * c.f..(i + 1) * c.f] {
                        if v != 0 {
                            let mut v = v;
                            let mut k = 0u32;
                            while v % c.p == 0 {
                                v /= c.p;
                                k += 1;
                            }
                            best = best.min(k * c.e as u32 + i as u32);
                        }
                    }
                }
                best
            }
            Repr::Laurent(_) => a.iter().position(|&c| c != 0).map_or(self.0.n, |i| i as u32),
        }
    }

    pub fn is_unit(&self, a: &El) -> bool {
        self.residue(a) != 0
    }

    /// Image in the residue field, as a code.
    pub fn residue(&self, a: &El) -> u32 {
        match &self.0.repr {
            Repr::Mixed(c) => a[..c.f].iter().rev().fold(0u64, |acc, &v| acc * c.p + v % c.p) as u32,
            Repr::Laurent(_) => a[0] as u32,
        }
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: &El) -> Result<El> {
        let r = self.residue_field().inv(self.residue(a)).ok_or(Error::NotUnit)?;
        let mut z = self.teichmuller(r);
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.0.n {
            z = self.mul(&z, &self.sub(&two, &self.mul(a, &z)));
            prec *= 2;
        }
        Ok(z)
    }

    fn teich_table(&self) -> &Vec<El> {
        self.0.teich.get_or_init(|| {
            let k = self.residue_field();
            match &self.0.repr {
                Repr::Laurent(_) => (0..k.q())
                    .map(|c| {
                        let mut v = self.zero();
                        v[0] = c as u64;
                        v
                    })
                    .collect(),
                Repr::Mixed(c) => {
                    let zq = super::zq::Zq::new(c.p, k.defining_poly(), self.mexp(0).max(1));
                    (0..k.q())
                        .map(|code| {
                            let t = zq.teichmuller(code);
                            let mut v = self.zero();
                            for j in 0..c.f {
                                v[j] = t[j] % c.mods[0];
                            }
                            v
                        })
                        .collect()
                }
            }
        })
    }

    /// Teichmüller lift `[c]` of a residue code.
    pub fn teichmuller(&self, code: u32) -> El {
        self.teich_table()[code as usize].clone()
    }

    pub fn mul_pi(&self, a: &El) -> El {
        match &self.0.repr {
            Repr::Laurent(_) => {
                let mut out = self.zero();
                out[1..].copy_from_slice(&a[..a.len() - 1]);
                out
            }
            Repr::Mixed(c) => c.mul(a, &self.0.pi),
        }
    }

    pub fn mul_pi_pow(&self, a: &El, k: u32) -> El {
        if k >= self.0.n {
            return self.zero();
        }
        let mut out = a.clone();
        for _ in 0..k {
            out = self.mul_pi(&out);
        }
        out
    }

    /// `π^k` (zero once `k ≥ N`).
    pub fn pi_pow(&self, k: u32) -> El {
        self.mul_pi_pow(&self.one(), k)
    }

    /// Division by `π` inside the same ring, assuming `val(a) ≥ 1`.
    ///
    /// The result is correct modulo `π^{N−1}`; the top digit is whatever the
    /// canonical representatives produce, which is deterministic.
    pub fn div_pi_unchecked(&self, a: &El) -> El {
        match &self.0.repr {
            Repr::Laurent(_) => {
                let mut out = self.zero();
                out[..a.len() - 1].copy_from_slice(&a[1..]);
                out
            }
            Repr::Mixed(c) => {
                let f = c.f;
                let mut shifted = self.zero();
                shifted[..(c.e - 1) * f].copy_from_slice(&a[f..]);
                let mut c0 = self.zero();
                for k in 0..f {
                    c0[k] = a[k] / c.p;
                }
                let t = c.mul(&c0, &c.rho);
                self.add(&shifted, &t)
            }
        }
    }

    /// Exact division by `π^k`; the quotient lives in `O/π^{N−k}`.
    pub fn div_pi_pow(&self, a: &El, k: u32) -> Result<(TruncRing, El)> {
        let v = self.val(a);
        if v < k || k >= self.0.n {
            return Err(Error::InexactDivision { shift: k, val: v });
        }
        let mut out = a.clone();
        for _ in 0..k {
            out = self.div_pi_unchecked(&out);
        }
        let target = self.at(self.0.n - k)?;
        let red = target.reduce_from(self, &out);
        Ok((target, red))
    }

    /// Canonical representative of `a mod π^j`, kept in this ring.
    pub fn truncate(&self, a: &El, j: u32) -> El {
        if j >= self.0.n {
            return a.clone();
        }
        match &self.0.repr {
            Repr::Laurent(_) => {
                let mut out = a.clone();
                for v in &mut out[j as usize..] {
                    *v = 0;
                }
                out
            }
            Repr::Mixed(c) => {
                let mut out = a.clone();
                for i in 0..c.e {
                    let md = pow_u64(c.p, (j as usize).saturating_sub(i).div_ceil(c.e) as u32);
                    for v in &mut out[i * c.f..(i + 1) * c.f] {
                        *v %= md;
                    }
                }
                out
            }
        }
    }

    /// Image of `a ∈ src` under the canonical surjection `src → self` (requires `N_self ≤ N_src`).
    pub fn reduce_from(&self, src: &TruncRing, a: &El) -> El {
        debug_assert!(self.0.field == src.0.field && self.0.n <= src.0.n);
        match &self.0.repr {
            Repr::Laurent(_) => a[..self.0.n as usize].iter().copied().collect(),
            Repr::Mixed(c) => {
                let mut out = a.clone();
                c.reduce(&mut out);
                out
            }
        }
    }

    /// The canonical representative of `a ∈ src` (with `N_src ≤ N_self`) read in this ring.
    pub fn lift_from(&self, src: &TruncRing, a: &El) -> El {
        debug_assert!(self.0.field == src.0.field && self.0.n >= src.0.n);
        match &self.0.repr {
            Repr::Laurent(_) => {
                let mut out = self.zero();
                out[..a.len()].copy_from_slice(a);
                out
            }
            Repr::Mixed(_) => a.clone(),
        }
    }

    /// Teichmüller digits `(c_0, …, c_{N−1})` with `a = Σ [c_j] π^j`.
    pub fn digits(&self, a: &El) -> Vec<u32> {
        if let Repr::Laurent(_) = &self.0.repr {
            return a.iter().map(|&c| c as u32).collect();
        }
        let mut out = Vec::with_capacity(self.0.n as usize);
        let mut cur = a.clone();
        for j in 0..self.0.n {
            let c = self.residue(&cur);
            out.push(c);
            if j + 1 < self.0.n {
                let diff = self.sub(&cur, &self.teichmuller(c));
                cur = self.div_pi_unchecked(&diff);
            }
        }
        out
    }

    /// Inverse of [`digits`](Self::digits); missing trailing digits are zero.
    pub fn from_digits(&self, digits: &[u32]) -> Result<El> {
        if digits.len() > self.0.n as usize {
            return Err(Error::Mismatch(format!(
                "{} digits given for precision {}",
                digits.len(),
                self.0.n
            )));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= self.q()) {
            return Err(Error::Invalid(format!("digit {d} is not a residue code")));
        }
        if let Repr::Laurent(_) = &self.0.repr {
            let mut out = self.zero();
            for (o, &d) in out.iter_mut().zip(digits) {
                *o = d as u64;
            }
            return Ok(out);
        }
        let mut acc = self.zero();
        for &d in digits.iter().rev() {
            acc = self.add(&self.mul_pi(&acc), &self.teichmuller(d));
        }
        Ok(acc)
    }

    /// Element with index `idx < q^N` in the digit enumeration order.
    pub fn element_at(&self, mut idx: u64) -> El {
        let q = self.q() as u64;
        let digits: Vec<u32> = (0..self.0.n)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect();
        self.from_digits(&digits).expect("digits in range")
    }

    /// All elements, in digit order; the caller is responsible for the size.
    pub fn elements(&self) -> impl Iterator<Item = El> + '_ {
        (0..self.order().unwrap_or(u64::MAX)).map(move |i| self.element_at(i))
    }

    /// Uniformly random element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> El {
        match &self.0.repr {
            Repr::Mixed(c) => {
                let mut out = self.zero();
                for i in 0..c.e {
                    for v in &mut out[i * c.f..(i + 1) * c.f] {
                        *v = rng.gen_range(0..c.mods[i]);
                    }
                }
                out
            }
            Repr::Laurent(k) => (0..self.0.n).map(|_| rng.gen_range(0..k.q()) as u64).collect(),
        }
    }

    /// Uniformly random unit.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> El {
        loop {
            let a = self.random(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::ZqCoeff;

    fn ring(p: u32, e: usize, n: u32) -> TruncRing {
        FieldDesc::qp_root(p, e).unwrap().ring(n).unwrap()
    }

    #[test]
    fn z2_mod_8() {
        let r = ring(2, 1, 3);
        let three = r.from_int(3);
        assert_eq!(r.mul(&three, &three), r.one());
        assert_eq!(r.digits(&r.from_int(7)), vec![1, 1, 1]);
    }

    #[test]
    fn eisenstein_relation() {
        let r = ring(2, 2, 4);
        let x = r.pi();
        let xx = r.mul(&x, &x);
        assert_eq!(xx, r.from_int(2));
        assert_eq!(r.val(&xx), 2);
        assert_eq!(r.val(&r.from_int(4)), 4);
        assert_eq!(r.val(&r.from_int(6)), 2);
    }

    #[test]
    fn laurent_geometric_series() {
        let r = FieldDesc::laurent_series(2, 1).unwrap().ring(3).unwrap();
        let a = r.add(&r.one(), &r.pi());
        let inv = r.inv(&a).unwrap();
        assert_eq!(r.digits(&inv), vec![1, 1, 1]);
        assert!(r.inv(&r.pi()).is_err());
    }

    #[test]
    fn teichmuller_digits_mod_9() {
        let r = ring(3, 1, 2);
        assert_eq!(r.teichmuller(2), r.from_int(8));
        assert_eq!(r.digits(&r.from_int(5)), vec![2, 2]);
        assert_eq!(r.digits(&r.zero()), vec![0, 0]);
    }

    #[test]
    fn digits_roundtrip_exhaustive() {
        let fields = [
            FieldDesc::qp_root(2, 1).unwrap(),
            FieldDesc::qp_root(2, 3).unwrap(),
            FieldDesc::qp_root(3, 2).unwrap(),
            FieldDesc::unramified(2, 2).unwrap(),
            FieldDesc::make(2, 2, None, Some(&[ZqCoeff::Digits(vec![0, 2]), ZqCoeff::Int(2), ZqCoeff::Int(1)]))
                .unwrap(),
            FieldDesc::laurent_series(3, 1).unwrap(),
        ];
        for k in &fields {
            for n in 1..=4 {
                let r = k.ring(n).unwrap();
                if r.order().unwrap() > 512 {
                    continue;
                }
                let mut seen = std::collections::HashSet::new();
                for a in r.elements() {
                    assert!(r.contains(&a));
                    assert_eq!(r.from_digits(&r.digits(&a)).unwrap(), a, "{k} N={n}");
                    assert!(seen.insert(a));
                }
            }
        }
    }

    #[test]
    fn division_by_pi() {
        let r = ring(2, 2, 5);
        let a = r.from_int(6);
        let (r3, b) = r.div_pi_pow(&a, 2).unwrap();
        assert_eq!(r3.precision(), 3);
        assert_eq!(b, r3.from_int(3));
        assert!(matches!(r.div_pi_pow(&r.one(), 1), Err(Error::InexactDivision { .. })));
    }

    #[test]
    fn truncation_is_canonical() {
        let r = ring(2, 3, 7);
        for a in [r.from_int(13), r.pi(), r.add(&r.pi(), &r.from_int(5))] {
            for j in 0..=7 {
                let t = r.truncate(&a, j);
                assert!(r.val(&r.sub(&a, &t)) >= j);
                assert_eq!(r.truncate(&t, j), t);
                let shifted = r.add(&a, &r.mul(&r.pi_pow(j), &r.from_int(5)));
                assert_eq!(r.truncate(&shifted, j), t);
            }
        }
    }
}

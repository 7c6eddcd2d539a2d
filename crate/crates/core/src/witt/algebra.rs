//! Coordinate algebras for Witt vectors: finite `O`-algebras that can be enumerated.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fq::ResidueField;
use crate::localfield::{El, TruncRing};

/// A finite commutative `O`-algebra `A`.
pub trait WittAlgebra: Clone + Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// The structure map `O/π^M → A` applied to a table coefficient.
    fn from_base(&self, base: &TruncRing, c: &El) -> Self::Elem;
    /// Smallest `M` for which the structure map factors through `O/π^M`.
    fn required_precision(&self) -> u32;
    /// Whether `π = 0` in `A` (so `A` is an `O/π`-algebra).
    fn residue_algebra(&self) -> bool;
    /// `q`, the size of the residue field.
    fn q(&self) -> u32;

    fn order(&self) -> u64;
    fn element_at(&self, idx: u64) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.element_at(rng.gen_range(0..self.order()))
    }
    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
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
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The residue field `F_q`.
#[derive(Clone, Debug)]
pub struct FiniteField(pub ResidueField);

impl WittAlgebra for FiniteField {
    type Elem = u32;

    fn name(&self) -> String {
        format!("F_{}", self.0.q())
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.0.add(*a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.0.mul(*a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        self.0.neg(*a)
    }
    fn from_base(&self, base: &TruncRing, c: &El) -> u32 {
        base.residue(c)
    }
    fn required_precision(&self) -> u32 {
        1
    }
    fn residue_algebra(&self) -> bool {
        true
    }
    fn q(&self) -> u32 {
        self.0.q()
    }
    fn order(&self) -> u64 {
        self.0.q() as u64
    }
    fn element_at(&self, idx: u64) -> u32 {
        idx as u32
    }
}

/// `F_q[u]/u^k`, elements as coefficient vectors of length `k`.
#[derive(Clone, Debug)]
pub struct TruncPoly {
    fq: ResidueField,
    k: usize,
}

impl TruncPoly {
    pub fn new(fq: ResidueField, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("truncation length must be positive".into()));
        }
        Ok(TruncPoly { fq, k })
    }
    pub fn var(&self) -> Vec<u32> {
        let mut v = vec![0; self.k];
        if self.k > 1 {
            v[1] = 1;
        }
        v
    }
    pub fn len(&self) -> usize {
        self.k
    }
    pub fn is_empty(&self) -> bool {
        false
    }
}

impl WittAlgebra for TruncPoly {
    type Elem = Vec<u32>;

    fn name(&self) -> String {
        format!("F_{}[u]/u^{}", self.fq.q(), self.k)
    }
    fn zero(&self) -> Vec<u32> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.k];
        v[0] = 1;
        v
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| self.fq.add(*x, *y)).collect()
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let mut out = vec![0; self.k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b[..self.k - i].iter().enumerate() {
                out[i + j] = self.fq.add(out[i + j], self.fq.mul(x, y));
            }
        }
        out
    }
    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        a.iter().map(|x| self.fq.neg(*x)).collect()
    }
    fn from_base(&self, base: &TruncRing, c: &El) -> Vec<u32> {
        let mut v = self.zero();
        v[0] = base.residue(c);
        v
    }
    fn required_precision(&self) -> u32 {
        1
    }
    fn residue_algebra(&self) -> bool {
        true
    }
    fn q(&self) -> u32 {
        self.fq.q()
    }
    fn order(&self) -> u64 {
        (self.fq.q() as u64).saturating_pow(self.k as u32)
    }
    fn element_at(&self, mut idx: u64) -> Vec<u32> {
        let q = self.fq.q() as u64;
        (0..self.k)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect()
    }
}

/// The truncated perfection `F_q[u^{1/q^∞}]/(u)` cut at `u^{1/q^s}`:
/// isomorphic to `F_q[v]/v^{q^s}` with `v = u^{1/q^s}`.
#[derive(Clone, Debug)]
pub struct PerfectTrunc {
    inner: TruncPoly,
    s: u32,
}

impl PerfectTrunc {
    pub fn new(fq: ResidueField, s: u32) -> Result<Self> {
        let k = (fq.q() as usize).checked_pow(s).ok_or_else(|| Error::Invalid("root level too large".into()))?;
        Ok(PerfectTrunc { inner: TruncPoly::new(fq, k)?, s })
    }
    /// The element `u^{1/q^s}`.
    pub fn root(&self) -> Vec<u32> {
        self.inner.var()
    }
    pub fn level(&self) -> u32 {
        self.s
    }
}

impl WittAlgebra for PerfectTrunc {
    type Elem = Vec<u32>;

    fn name(&self) -> String {
        format!("F_{}[u^(1/{}^{})]/(u)", self.inner.fq.q(), self.inner.fq.q(), self.s)
    }
    fn zero(&self) -> Vec<u32> {
        self.inner.zero()
    }
    fn one(&self) -> Vec<u32> {
        self.inner.one()
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        self.inner.add(a, b)
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        self.inner.mul(a, b)
    }
    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        self.inner.neg(a)
    }
    fn from_base(&self, base: &TruncRing, c: &El) -> Vec<u32> {
        self.inner.from_base(base, c)
    }
    fn required_precision(&self) -> u32 {
        1
    }
    fn residue_algebra(&self) -> bool {
        true
    }
    fn q(&self) -> u32 {
        self.inner.q()
    }
    fn order(&self) -> u64 {
        self.inner.order()
    }
    fn element_at(&self, idx: u64) -> Vec<u32> {
        self.inner.element_at(idx)
    }
}

/// `O/π^m` itself, an `O`-algebra that is not killed by `π` once `m > 1`.
#[derive(Clone, Debug)]
pub struct Quotient(pub TruncRing);

impl WittAlgebra for Quotient {
    type Elem = El;

    fn name(&self) -> String {
        format!("O/pi^{} of {}", self.0.precision(), self.0.field())
    }
    fn zero(&self) -> El {
        self.0.zero()
    }
    fn one(&self) -> El {
        self.0.one()
    }
    fn add(&self, a: &El, b: &El) -> El {
        self.0.add(a, b)
    }
    fn mul(&self, a: &El, b: &El) -> El {
        self.0.mul(a, b)
    }
    fn neg(&self, a: &El) -> El {
        self.0.neg(a)
    }
    fn from_base(&self, base: &TruncRing, c: &El) -> El {
        self.0.reduce_from(base, c)
    }
    fn required_precision(&self) -> u32 {
        self.0.precision()
    }
    fn residue_algebra(&self) -> bool {
        self.0.precision() == 1
    }
    fn q(&self) -> u32 {
        self.0.q()
    }
    fn order(&self) -> u64 {
        self.0.order().unwrap_or(u64::MAX)
    }
    fn element_at(&self, idx: u64) -> El {
        self.0.element_at(idx)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> El {
        self.0.random(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_polynomials() {
        let a = TruncPoly::new(ResidueField::new(2, 1, None).unwrap(), 3).unwrap();
        let u = a.var();
        assert_eq!(a.mul(&u, &u), vec![0, 0, 1]);
        assert_eq!(a.pow(&u, 3), a.zero());
        assert_eq!(a.order(), 8);
        let p = PerfectTrunc::new(ResidueField::new(2, 1, None).unwrap(), 2).unwrap();
        let v = p.root();
        assert_eq!(p.pow(&v, 4), p.zero());
        assert_ne!(p.pow(&v, 3), p.zero());
    }
}

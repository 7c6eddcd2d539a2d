//! Witt vectors `W^n(A)` over a coordinate algebra, evaluated through a [`LawTable`].

use super::algebra::WittAlgebra;
use super::laws::{ghost_solve_num, LawTable};
use super::mpoly::{MPoly, Mono, MAX_LEN};
use crate::error::{Error, Result};
use crate::localfield::{El, TruncRing};

/// A length-`n` coordinate vector `(a_0, …, a_{n−1})`.
pub type WittVec<E> = Vec<E>;

#[derive(Clone, Debug)]
struct Compiled<E> {
    terms: Vec<(Mono, E)>,
}

/// `W^n(A)` with the law polynomials pushed into `A`.
#[derive(Clone, Debug)]
pub struct WittRing<A: WittAlgebra> {
    algebra: A,
    table: LawTable,
    sum: Vec<Compiled<A::Elem>>,
    prod: Vec<Compiled<A::Elem>>,
    neg: Vec<Compiled<A::Elem>>,
    max_exp: usize,
}

impl<A: WittAlgebra> WittRing<A> {
    pub fn new(table: &LawTable, algebra: A) -> Result<Self> {
        if algebra.q() != table.q() {
            return Err(Error::Mismatch(format!("{} is not an algebra over {}", algebra.name(), table.field())));
        }
        if table.precision() < algebra.required_precision() {
            return Err(Error::Precision(format!(
                "{} needs laws to precision {}, table has {}",
                algebra.name(),
                algebra.required_precision(),
                table.precision()
            )));
        }
        let compile = |polys: &[MPoly]| -> Vec<Compiled<A::Elem>> {
            polys
                .iter()
                .map(|p| Compiled {
                    terms: p
                        .terms()
                        .map(|(m, c)| (*m, algebra.from_base(table.ring(), c)))
                        .filter(|(_, c)| !algebra.is_zero(c))
                        .collect(),
                })
                .collect()
        };
        let max_exp = [table.sum(), table.prod(), table.neg()]
            .iter()
            .flat_map(|ps| ps.iter())
            .flat_map(|p| p.max_exponents())
            .max()
            .unwrap_or(0) as usize;
        Ok(WittRing {
            sum: compile(table.sum()),
            prod: compile(table.prod()),
            neg: compile(table.neg()),
            algebra,
            table: table.clone(),
            max_exp,
        })
    }

    pub fn algebra(&self) -> &A {
        &self.algebra
    }
    pub fn table(&self) -> &LawTable {
        &self.table
    }
    pub fn len(&self) -> usize {
        self.table.len()
    }
    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn check(&self, v: &[A::Elem]) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::Mismatch(format!("vector of length {} in W^{}", v.len(), self.len())));
        }
        Ok(())
    }

    fn powers(&self, v: &[A::Elem]) -> Vec<Vec<A::Elem>> {
        v.iter()
            .map(|a| {
                let mut row = Vec::with_capacity(self.max_exp + 1);
                row.push(self.algebra.one());
                for k in 0..self.max_exp {
                    row.push(self.algebra.mul(&row[k], a));
                }
                row
            })
            .collect()
    }

    fn eval(&self, laws: &[Compiled<A::Elem>], x: &[A::Elem], y: Option<&[A::Elem]>) -> WittVec<A::Elem> {
        let a = &self.algebra;
        let px = self.powers(x);
        let py = y.map(|y| self.powers(y));
        laws.iter()
            .map(|law| {
                let mut acc = a.zero();
                for (m, c) in &law.terms {
                    let mut t = c.clone();
                    for (j, row) in px.iter().enumerate() {
                        if m[j] > 0 {
                            t = a.mul(&t, &row[m[j] as usize]);
                        }
                    }
                    if let Some(py) = &py {
                        for (j, row) in py.iter().enumerate() {
                            let e = m[MAX_LEN + j];
                            if e > 0 {
                                t = a.mul(&t, &row[e as usize]);
                            }
                        }
                    }
                    acc = a.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    pub fn zero(&self) -> WittVec<A::Elem> {
        vec![self.algebra.zero(); self.len()]
    }
    pub fn one(&self) -> WittVec<A::Elem> {
        self.teichmuller(&self.algebra.one())
    }

    /// `[a] = (a, 0, …, 0)`.
    pub fn teichmuller(&self, a: &A::Elem) -> WittVec<A::Elem> {
        let mut v = self.zero();
        v[0] = a.clone();
        v
    }

    pub fn add(&self, x: &[A::Elem], y: &[A::Elem]) -> Result<WittVec<A::Elem>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.eval(&self.sum, x, Some(y)))
    }
    pub fn mul(&self, x: &[A::Elem], y: &[A::Elem]) -> Result<WittVec<A::Elem>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.eval(&self.prod, x, Some(y)))
    }
    pub fn neg(&self, x: &[A::Elem]) -> Result<WittVec<A::Elem>> {
        self.check(x)?;
        Ok(self.eval(&self.neg, x, None))
    }
    pub fn sub(&self, x: &[A::Elem], y: &[A::Elem]) -> Result<WittVec<A::Elem>> {
        self.add(x, &self.neg(y)?)
    }

    /// Frobenius; on an `O/π`-algebra it is the coordinatewise `q`-th power.
    pub fn frobenius(&self, x: &[A::Elem]) -> Result<WittVec<A::Elem>> {
        self.check(x)?;
        if !self.algebra.residue_algebra() {
            return Err(Error::Invalid(format!(
                "Frobenius on W({}) needs an algebra killed by pi",
                self.algebra.name()
            )));
        }
        let q = self.algebra.q() as u64;
        Ok(x.iter().map(|a| self.algebra.pow(a, q)).collect())
    }

    /// Verschiebung `(a_0, …, a_{n−2}) ↦ (0, a_0, …, a_{n−2})` on `W^n`.
    pub fn verschiebung(&self, x: &[A::Elem]) -> Result<WittVec<A::Elem>> {
        self.check(x)?;
        let mut v = Vec::with_capacity(x.len());
        v.push(self.algebra.zero());
        v.extend_from_slice(&x[..x.len() - 1]);
        Ok(v)
    }

    /// Precision of `O/π^P` from which [`structure_image`](Self::structure_image) reads its input.
    pub fn structure_precision(&self) -> u32 {
        self.algebra.required_precision() + self.len() as u32 - 1
    }

    /// The image of `c ∈ O` under the structure map `O → W^n(A)`, with `c`
    /// given modulo `π^P` for `P ≥` [`structure_precision`](Self::structure_precision).
    ///
    /// Its ghost components are `(c, c, …)`; coordinate `j` is solved exactly
    /// modulo `π^{P−j}` and pushed into `A`.
    pub fn structure_image(&self, src: &TruncRing, c: &El) -> Result<WittVec<A::Elem>> {
        let need = self.structure_precision();
        if src.precision() < need {
            return Err(Error::Precision(format!(
                "the structure map into W^{}({}) needs its input modulo pi^{need}",
                self.len(),
                self.algebra.name()
            )));
        }
        let big = src.at(need + 1)?;
        let lifted = if src.precision() >= big.precision() { big.reduce_from(src, c) } else { big.lift_from(src, c) };
        let coords = ghost_solve_num(&big, &vec![lifted; self.len()])?;
        let out_ring = big.at(self.algebra.required_precision())?;
        Ok(coords.iter().map(|a| self.algebra.from_base(&out_ring, &out_ring.reduce_from(&big, a))).collect())
    }

    /// Multiplication by `π`, computed as a product with the image of `π` under the structure map.
    pub fn mul_pi(&self, x: &[A::Elem]) -> Result<WittVec<A::Elem>> {
        let src = self.table.ring().at(self.structure_precision())?;
        let pi = self.structure_image(&src, &src.pi())?;
        self.mul(&pi, x)
    }

    /// Truncation `W^n → W^m` (quotient by `im V^m`).
    pub fn truncate(&self, x: &[A::Elem], m: usize) -> Result<WittVec<A::Elem>> {
        self.check(x)?;
        if m == 0 || m > x.len() {
            return Err(Error::Invalid(format!("cannot truncate W^{} to W^{m}", x.len())));
        }
        Ok(x[..m].to_vec())
    }

    /// All of `W^n(A)` in lexicographic order of coordinate indices.
    pub fn elements(&self) -> Vec<WittVec<A::Elem>> {
        let base = self.algebra.elements();
        let mut out: Vec<WittVec<A::Elem>> = vec![Vec::new()];
        for _ in 0..self.len() {
            out = out
                .into_iter()
                .flat_map(|v| {
                    base.iter().map(move |a| {
                        let mut w = v.clone();
                        w.push(a.clone());
                        w
                    })
                })
                .collect();
        }
        out
    }
}

/// A unit covector `(…, 0, a_{−(L−1)}, …, a_0)`, stored as `[a_{−(L−1)}, …, a_0]`
/// with no leading zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Covector<E> {
    entries: Vec<E>,
}

impl<E: Clone + PartialEq> Covector<E> {
    pub fn new<A: WittAlgebra<Elem = E>>(algebra: &A, entries: Vec<E>) -> Self {
        let zero = algebra.zero();
        let start = entries.iter().position(|a| *a != zero).unwrap_or(entries.len());
        Covector { entries: entries[start..].to_vec() }
    }

    /// Entries from the leftmost nonzero one down to `a_0`.
    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    /// `a_{−k}`, zero outside the support.
    pub fn entry<A: WittAlgebra<Elem = E>>(&self, algebra: &A, k: usize) -> E {
        let l = self.entries.len();
        if k < l {
            self.entries[l - 1 - k].clone()
        } else {
            algebra.zero()
        }
    }

    /// `V(…, a_{−1}, a_0) = (…, a_{−2}, a_{−1})`.
    pub fn shift<A: WittAlgebra<Elem = E>>(&self, algebra: &A) -> Self {
        let l = self.entries.len();
        Covector::new(algebra, self.entries[..l.saturating_sub(1)].to_vec())
    }

    fn padded<A: WittAlgebra<Elem = E>>(&self, algebra: &A, len: usize) -> Vec<E> {
        let mut v = vec![algebra.zero(); len - self.entries.len()];
        v.extend_from_slice(&self.entries);
        v
    }

    /// Sum in the colimit of `W^L` along `V`, computed in the smallest `W^L`
    /// containing both supports; `ring` must have length at least `L`.
    pub fn add<A: WittAlgebra<Elem = E>>(&self, ring: &WittRing<A>, other: &Self) -> Result<Self> {
        let l = self.entries.len().max(other.entries.len());
        if l == 0 {
            return Ok(self.clone());
        }
        if l > ring.len() {
            return Err(Error::Invalid(format!("covectors of length {l} need laws of length at least {l}")));
        }
        let sub = WittRing::new(&ring.table().truncate(l)?, ring.algebra().clone())?;
        let s = sub.add(&self.padded(ring.algebra(), l), &other.padded(ring.algebra(), l))?;
        Ok(Covector::new(ring.algebra(), s))
    }
}

//! Classical `p`-typical Witt polynomials over `Z`, computed with exact big integers.
//!
//! This is an independent oracle for the laws of `O = Z_p`: it uses integer
//! coefficients and exact division instead of truncated `O/π^P` arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::laws::LawTable;
use super::mpoly::{mono_name, x_var, y_var, Mono, MPoly, SLOTS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly(BTreeMap<Mono, BigInt>);

impl IntPoly {
    fn var(slot: usize) -> Self {
        let mut m = [0; SLOTS];
        m[slot] = 1;
        IntPoly(BTreeMap::from([(m, BigInt::one())]))
    }

    fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.0.clone();
        for (m, c) in &other.0 {
            *out.entry(*m).or_insert_with(BigInt::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        IntPoly(out)
    }

    fn scale(&self, c: &BigInt) -> IntPoly {
        let mut out: BTreeMap<Mono, BigInt> = self.0.iter().map(|(m, v)| (*m, v * c)).collect();
        out.retain(|_, c| !c.is_zero());
        IntPoly(out)
    }

    fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let mut m = *ma;
                for (x, y) in m.iter_mut().zip(mb) {
                    *x += y;
                }
                *out.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        IntPoly(out)
    }

    fn pow(&self, e: u64) -> IntPoly {
        let mut acc = IntPoly(BTreeMap::from([([0; SLOTS], BigInt::one())]));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.0 {
            if !(c % d).is_zero() {
                return None;
            }
            out.insert(*m, c / d);
        }
        Some(IntPoly(out))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.0.iter()
    }
}

fn ghosts(p: u64, coords: &[IntPoly]) -> Vec<IntPoly> {
    (0..coords.len())
        .map(|j| {
            coords[..=j].iter().enumerate().fold(IntPoly::default(), |acc, (i, a)| {
                acc.add(&a.pow(p.pow((j - i) as u32)).scale(&BigInt::from(p).pow(i as u32)))
            })
        })
        .collect()
}

fn solve(p: u64, ghost: &[IntPoly]) -> Vec<IntPoly> {
    let mut out: Vec<IntPoly> = Vec::new();
    for (j, b) in ghost.iter().enumerate() {
        let mut rest = b.clone();
        for (i, a) in out.iter().enumerate() {
            let t = a.pow(p.pow((j - i) as u32)).scale(&-BigInt::from(p).pow(i as u32));
            rest = rest.add(&t);
        }
        out.push(rest.div_exact(&BigInt::from(p).pow(j as u32)).expect("classical Witt polynomials are integral"));
    }
    out
}

/// Classical sum and product polynomials `(S_j, P_j)` for `j < n` over `Z`.
pub fn classical_laws(p: u64, n: usize) -> (Vec<IntPoly>, Vec<IntPoly>) {
    let xs = ghosts(p, &(0..n).map(|j| IntPoly::var(x_var(j))).collect::<Vec<_>>());
    let ys = ghosts(p, &(0..n).map(|j| IntPoly::var(y_var(j))).collect::<Vec<_>>());
    let sum = solve(p, &xs.iter().zip(&ys).map(|(a, b)| a.add(b)).collect::<Vec<_>>());
    let prod = solve(p, &xs.iter().zip(&ys).map(|(a, b)| a.mul(b)).collect::<Vec<_>>());
    (sum, prod)
}

/// Outcome of comparing a `Z_p` law table with the classical polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecializeReport {
    pub p: u32,
    pub n: usize,
    pub monomials_compared: usize,
    /// `None` on a match; otherwise law, coordinate and monomial of the first difference.
    pub first_mismatch: Option<String>,
}

impl SpecializeReport {
    pub fn matched(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares the sum and product laws of a `Z_p` table with [`classical_laws`].
pub fn specialize_check(table: &LawTable) -> Result<SpecializeReport> {
    let field = table.field();
    if field.e() != Some(1) || field.f() != 1 {
        return Err(Error::InvalidField(format!("{field} is not Z_p; the classical comparison needs q = p and pi = p")));
    }
    let p = field.p();
    let ring = table.ring();
    let modulus = BigInt::from(p).pow(ring.precision());
    let (sum, prod) = classical_laws(p as u64, table.len());
    let mut compared = 0;
    for (name, ours, theirs) in [("sum", table.sum(), &sum), ("product", table.prod(), &prod)] {
        for (j, (a, b)) in ours.iter().zip(theirs.iter()).enumerate() {
            let expected = oracle_reduced(b, &modulus, ring);
            let mut monos: Vec<&Mono> = a.terms().map(|(m, _)| m).chain(expected.terms().map(|(m, _)| m)).collect();
            monos.sort();
            monos.dedup();
            for m in monos {
                compared += 1;
                if a.coeff(m) != expected.coeff(m) {
                    return Ok(SpecializeReport {
                        p,
                        n: table.len(),
                        monomials_compared: compared,
                        first_mismatch: Some(format!("{name} law, coordinate {j}, monomial {}", mono_name(m))),
                    });
                }
            }
        }
    }
    Ok(SpecializeReport { p, n: table.len(), monomials_compared: compared, first_mismatch: None })
}

fn oracle_reduced(poly: &IntPoly, modulus: &BigInt, ring: &crate::localfield::TruncRing) -> MPoly {
    let mut out = MPoly::zero();
    for (m, c) in poly.terms() {
        let r = ((c % modulus) + modulus) % modulus;
        let v = r.to_i64().expect("modulus fits in i64");
        out.add_term(ring, *m, ring.from_int(v));
    }
    out
}

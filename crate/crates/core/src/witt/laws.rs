//! Ghost components and the universal sum, product and negation polynomials.

use std::collections::BTreeMap;

use serde::Serialize;

use super::mpoly::{mono_name, x_var, y_var, MPoly, MAX_LEN};
use crate::error::{Error, Result};
use crate::localfield::{El, FieldDesc, TruncRing};

/// `w_j(a) = Σ_{i≤j} π^i a_i^{q^{j−i}}` for polynomial coordinates.
pub fn ghost_map(ring: &TruncRing, coords: &[MPoly]) -> Vec<MPoly> {
    let q = ring.q() as u64;
    (0..coords.len())
        .map(|j| {
            let mut acc = MPoly::zero();
            for (i, a) in coords[..=j].iter().enumerate() {
                let term = a.pow(ring, q.pow((j - i) as u32)).scale(ring, &ring.pi_pow(i as u32));
                acc = acc.add(ring, &term);
            }
            acc
        })
        .collect()
}

/// Inverts [`ghost_map`]: `a_j = (b_j − Σ_{i<j} π^i a_i^{q^{j−i}}) / π^j`.
///
/// With `b` known modulo `π^P`, coordinate `j` is exact modulo `π^{P−j}`.
/// A non-divisible numerator is reported as a congruence failure at stage `j`.
pub fn ghost_solve(ring: &TruncRing, ghosts: &[MPoly]) -> Result<Vec<MPoly>> {
    let q = ring.q() as u64;
    let mut out: Vec<MPoly> = Vec::with_capacity(ghosts.len());
    for (j, b) in ghosts.iter().enumerate() {
        let mut rest = b.clone();
        for (i, a) in out.iter().enumerate() {
            let term = a.pow(ring, q.pow((j - i) as u32)).scale(ring, &ring.pi_pow(i as u32));
            rest = rest.sub(ring, &term);
        }
        let a = rest.div_pi_pow(ring, j as u32).ok_or(Error::GhostCongruence { stage: j })?;
        out.push(a);
    }
    Ok(out)
}

/// Ghost components of numbers in `O/π^P`.
pub fn ghost_map_num(ring: &TruncRing, coords: &[El]) -> Vec<El> {
    let q = ring.q() as u64;
    (0..coords.len())
        .map(|j| {
            coords[..=j].iter().enumerate().fold(ring.zero(), |acc, (i, a)| {
                let t = ring.mul_pi_pow(&ring.pow(a, q.pow((j - i) as u32)), i as u32);
                ring.add(&acc, &t)
            })
        })
        .collect()
}

/// Numeric [`ghost_solve`]; coordinate `j` is exact modulo `π^{P−j}`.
pub fn ghost_solve_num(ring: &TruncRing, ghosts: &[El]) -> Result<Vec<El>> {
    let q = ring.q() as u64;
    let mut out: Vec<El> = Vec::with_capacity(ghosts.len());
    // chains[i] holds a_i^{q^{j−i}} for the current stage j
    let mut chains: Vec<El> = Vec::with_capacity(ghosts.len());
    for (j, b) in ghosts.iter().enumerate() {
        let mut rest = b.clone();
        for (i, c) in chains.iter_mut().enumerate() {
            *c = ring.pow(c, q);
            rest = ring.sub(&rest, &ring.mul_pi_pow(c, i as u32));
        }
        if ring.val(&rest) < j as u32 {
            return Err(Error::GhostCongruence { stage: j });
        }
        let mut a = rest;
        for _ in 0..j {
            a = ring.div_pi_unchecked(&a);
        }
        let a = ring.truncate(&a, ring.precision() - j as u32);
        chains.push(a.clone());
        out.push(a);
    }
    Ok(out)
}

/// Universal Witt polynomials of length `n` for `O`, with coefficients in `O/π^M`.
#[derive(Clone, Debug)]
pub struct LawTable {
    field: FieldDesc,
    n: usize,
    ring: TruncRing,
    sum: Vec<MPoly>,
    prod: Vec<MPoly>,
    neg: Vec<MPoly>,
}

fn variables(ring: &TruncRing, n: usize, slot: fn(usize) -> usize) -> Vec<MPoly> {
    (0..n).map(|j| MPoly::var(ring, slot(j))).collect()
}

/// Solves the ghost equations at headroom `M + n` and reduces to `O/π^M`.
pub fn law_polynomials(field: &FieldDesc, n: usize, m: u32) -> Result<LawTable> {
    if n == 0 || n > MAX_LEN {
        return Err(Error::Invalid(format!("length must be between 1 and {MAX_LEN}, got {n}")));
    }
    if m == 0 {
        return Err(Error::Invalid("coefficient precision must be positive".into()));
    }
    let big = field.ring(m + n as u32)?;
    let ring = field.ring(m)?;
    let xs = ghost_map(&big, &variables(&big, n, x_var));
    let ys = ghost_map(&big, &variables(&big, n, y_var));

    let solve = |ghosts: Vec<MPoly>| -> Result<Vec<MPoly>> {
        let coords = ghost_solve(&big, &ghosts)?;
        Ok(coords.iter().map(|c| c.map(&ring, |v| ring.reduce_from(&big, v))).collect())
    };
    let sum = solve(xs.iter().zip(&ys).map(|(a, b)| a.add(&big, b)).collect())?;
    let prod = solve(xs.iter().zip(&ys).map(|(a, b)| a.mul(&big, b)).collect())?;
    let neg = solve(xs.iter().map(|a| a.neg(&big)).collect())?;

    let table = LawTable { field: field.clone(), n, ring, sum, prod, neg };
    table.check_ghost_consistency()?;
    Ok(table)
}

impl LawTable {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }
    pub fn q(&self) -> u32 {
        self.ring.q()
    }
    pub fn ring(&self) -> &TruncRing {
        &self.ring
    }
    pub fn sum(&self) -> &[MPoly] {
        &self.sum
    }
    pub fn prod(&self) -> &[MPoly] {
        &self.prod
    }
    pub fn neg(&self) -> &[MPoly] {
        &self.neg
    }

    /// Checks `w_j(S) = w_j(X) + w_j(Y)`, `w_j(P) = w_j(X)·w_j(Y)` and
    /// `w_j(N) = −w_j(X)` in `(O/π^M)[X, Y]`.
    pub fn check_ghost_consistency(&self) -> Result<()> {
        let r = &self.ring;
        let xs = ghost_map(r, &variables(r, self.n, x_var));
        let ys = ghost_map(r, &variables(r, self.n, y_var));
        let (ws, wp, wn) = (ghost_map(r, &self.sum), ghost_map(r, &self.prod), ghost_map(r, &self.neg));
        for j in 0..self.n {
            let bad = |what: &str| Error::Verification(format!("{what} law is not ghost-consistent at coordinate {j}"));
            if !ws[j].sub(r, &xs[j].add(r, &ys[j])).is_zero() {
                return Err(bad("sum"));
            }
            if !wp[j].sub(r, &xs[j].mul(r, &ys[j])).is_zero() {
                return Err(bad("product"));
            }
            if !wn[j].add(r, &xs[j]).is_zero() {
                return Err(bad("negation"));
            }
        }
        Ok(())
    }

    /// Truncation to the first `k` coordinates.
    pub fn truncate(&self, k: usize) -> Result<LawTable> {
        if k == 0 || k > self.n {
            return Err(Error::Invalid(format!("cannot truncate length {} to {k}", self.n)));
        }
        Ok(LawTable {
            field: self.field.clone(),
            n: k,
            ring: self.ring.clone(),
            sum: self.sum[..k].to_vec(),
            prod: self.prod[..k].to_vec(),
            neg: self.neg[..k].to_vec(),
        })
    }

    pub fn to_json(&self) -> LawTableJson {
        let render = |polys: &[MPoly]| -> Vec<BTreeMap<String, Vec<u32>>> {
            polys
                .iter()
                .map(|p| p.terms().map(|(m, c)| (mono_name(m), self.ring.digits(c))).collect())
                .collect()
        };
        LawTableJson {
            field: self.field.name(),
            q: self.q(),
            n: self.n,
            precision: self.precision(),
            sum: render(&self.sum),
            prod: render(&self.prod),
            neg: render(&self.neg),
        }
    }
}

/// JSON form of a [`LawTable`]: one monomial → digit-list map per coordinate.
#[derive(Clone, Debug, Serialize)]
pub struct LawTableJson {
    pub field: String,
    pub q: u32,
    pub n: usize,
    pub precision: u32,
    pub sum: Vec<BTreeMap<String, Vec<u32>>>,
    pub prod: Vec<BTreeMap<String, Vec<u32>>>,
    pub neg: Vec<BTreeMap<String, Vec<u32>>>,
}

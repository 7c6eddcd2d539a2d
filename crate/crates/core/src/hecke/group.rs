//! Elements of `GL_r(E)` at finite precision, Cartan decomposition and
//! Hermite labels of left cosets.

use serde::Serialize;

use super::matrix::{self, Mat};
use crate::error::{Error, Result};
use crate::localfield::{El, FieldDesc, TruncRing};

/// `g = π^shift · A` with `A` an integral matrix known modulo `π^W`.
#[derive(Clone, Debug)]
pub struct GrpElt {
    ring: TruncRing,
    r: usize,
    shift: i64,
    entries: Mat,
}

/// An entry `π^val · Σ [d_j] π^j` of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub val: i64,
    pub digits: Vec<u32>,
}

impl Entry {
    pub fn new(val: i64, digits: Vec<u32>) -> Self {
        Entry { val, digits }
    }
    pub fn int(ring: &TruncRing, v: i64) -> Self {
        Entry { val: 0, digits: ring.digits(&ring.from_int(v)) }
    }
}

impl GrpElt {
    /// From an integral matrix and a power of `π`; the determinant must be nonzero mod `π^W`.
    pub fn from_integral(ring: &TruncRing, r: usize, entries: Mat, shift: i64) -> Result<Self> {
        if entries.len() != r * r {
            return Err(Error::Invalid(format!("{} entries for rank {r}", entries.len())));
        }
        let det = matrix::det(ring, r, &entries);
        if ring.is_zero(&det) {
            return Err(Error::Precision(format!(
                "determinant vanishes modulo pi^{}: invertibility cannot be certified",
                ring.precision()
            )));
        }
        Ok(GrpElt { ring: ring.clone(), r, shift, entries })
    }

    /// From entries `π^val · (digits)`, with the common denominator pulled out.
    /// Entries are read at working precision `precision` after clearing denominators.
    pub fn from_entries(field: &FieldDesc, r: usize, precision: u32, entries: &[Entry]) -> Result<Self> {
        let ring = field.ring(precision)?;
        if entries.len() != r * r {
            return Err(Error::Invalid(format!("{} entries for rank {r}", entries.len())));
        }
        let vals: Vec<i64> = entries
            .iter()
            .map(|e| e.digits.iter().position(|&d| d != 0).map(|k| e.val + k as i64))
            .flatten()
            .collect();
        let low = vals.iter().copied().min().ok_or_else(|| Error::Invalid("zero matrix".into()))?;
        let mut mat = Vec::with_capacity(r * r);
        for e in entries {
            let take = e.digits.len().min(precision as usize);
            let base = ring.from_digits(&e.digits[..take])?;
            let k = (e.val - low) as u32;
            mat.push(ring.mul_pi_pow(&base, k));
        }
        Self::from_integral(&ring, r, mat, low)
    }

    /// `∇(ν) = diag(π^{ν_1}, …, π^{ν_r})`.
    pub fn nabla(ring: &TruncRing, nu: &[i64]) -> Self {
        let r = nu.len();
        let low = nu.iter().copied().min().unwrap_or(0);
        let mut m = vec![ring.zero(); r * r];
        for (i, &v) in nu.iter().enumerate() {
            m[i * r + i] = ring.pi_pow((v - low) as u32);
        }
        GrpElt { ring: ring.clone(), r, shift: low, entries: m }
    }

    pub fn identity(ring: &TruncRing, r: usize) -> Self {
        GrpElt { ring: ring.clone(), r, shift: 0, entries: matrix::identity(ring, r) }
    }

    /// An element of `GL_r(O)` given modulo `π^W`.
    pub fn integral_unit(ring: &TruncRing, r: usize, entries: Mat) -> Result<Self> {
        if !matrix::is_invertible(ring, r, &entries) {
            return Err(Error::NotUnit);
        }
        Ok(GrpElt { ring: ring.clone(), r, shift: 0, entries })
    }

    pub fn ring(&self) -> &TruncRing {
        &self.ring
    }
    pub fn field(&self) -> &FieldDesc {
        self.ring.field()
    }
    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn shift(&self) -> i64 {
        self.shift
    }
    pub fn integral_part(&self) -> &Mat {
        &self.entries
    }
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn mul(&self, other: &GrpElt) -> Result<GrpElt> {
        if self.ring != other.ring || self.r != other.r {
            return Err(Error::Mismatch("group elements over different rings".into()));
        }
        let m = matrix::mul(&self.ring, self.r, &self.entries, &other.entries);
        Self::from_integral(&self.ring, self.r, m, self.shift + other.shift)
    }

    /// The same element read at lower precision.
    pub fn at(&self, precision: u32) -> Result<GrpElt> {
        let ring = self.ring.at(precision)?;
        let m = matrix::convert(&ring, &self.ring, &self.entries);
        Self::from_integral(&ring, self.r, m, self.shift)
    }

    /// Valuation of `det A` (the determinant of `g` has valuation this plus `r·shift`).
    pub fn det_val(&self) -> u32 {
        self.ring.val(&matrix::det(&self.ring, self.r, &self.entries))
    }
}

/// `g = k1 · ∇(ν) · k2` with `ν` dominant and `k1, k2 ∈ GL_r(O)` at the working precision of `g`.
#[derive(Clone, Debug)]
pub struct Cartan {
    pub nu: Vec<i64>,
    pub k1: Mat,
    pub k2: Mat,
    pub ring: TruncRing,
}

/// Smith normal form with minimal-valuation pivots.
pub fn cartan_decompose(g: &GrpElt) -> Result<Cartan> {
    let ring = &g.ring;
    let r = g.r;
    let w = ring.precision();
    let mut d = g.entries.clone();
    let mut left = matrix::identity(ring, r);
    let mut right = matrix::identity(ring, r);
    let mut exps = Vec::with_capacity(r);
    for t in 0..r {
        let mut best = (w, t, t);
        for i in t..r {
            for j in t..r {
                let v = ring.val(&d[i * r + j]);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (v, pi, pj) = best;
        if v >= w {
            return Err(Error::Precision(format!("elementary divisor not certified modulo pi^{w}")));
        }
        if pi != t {
            for j in 0..r {
                d.swap(t * r + j, pi * r + j);
                left.swap(j * r + t, j * r + pi);
            }
        }
        if pj != t {
            for i in 0..r {
                d.swap(i * r + t, i * r + pj);
                right.swap(t * r + i, pj * r + i);
            }
        }
        let unit = matrix::exact_div(ring, &d[t * r + t], v)?;
        let uinv = ring.inv(&unit)?;
        for i in t + 1..r {
            if ring.is_zero(&d[i * r + t]) {
                continue;
            }
            let c = ring.mul(&matrix::exact_div(ring, &d[i * r + t], v)?, &uinv);
            for j in 0..r {
                let x = ring.mul(&c, &d[t * r + j]);
                d[i * r + j] = ring.sub(&d[i * r + j], &x);
                let y = ring.mul(&c, &left[j * r + i]);
                left[j * r + t] = ring.add(&left[j * r + t], &y);
            }
        }
        for j in t + 1..r {
            if ring.is_zero(&d[t * r + j]) {
                continue;
            }
            let c = ring.mul(&matrix::exact_div(ring, &d[t * r + j], v)?, &uinv);
            for i in 0..r {
                let x = ring.mul(&c, &d[i * r + t]);
                d[i * r + j] = ring.sub(&d[i * r + j], &x);
                let y = ring.mul(&c, &right[j * r + i]);
                right[t * r + i] = ring.add(&right[t * r + i], &y);
            }
        }
        for i in 0..r {
            right[t * r + i] = ring.mul(&unit, &right[t * r + i]);
        }
        exps.push(v);
    }
    // pivots come out ascending; reverse for a dominant ν
    let mut k1 = vec![ring.zero(); r * r];
    let mut k2 = vec![ring.zero(); r * r];
    for i in 0..r {
        for j in 0..r {
            k1[i * r + j] = left[i * r + (r - 1 - j)].clone();
            k2[i * r + j] = right[(r - 1 - i) * r + j].clone();
        }
    }
    let nu = exps.iter().rev().map(|&v| v as i64 + g.shift).collect();
    Ok(Cartan { nu, k1, k2, ring: ring.clone() })
}

/// Label of the left coset `K^n·A` of an integral invertible matrix `A`:
/// the Hermite form `H` of its row lattice and the residue of `A·H^{−1}` modulo `π^n`.
/// Needs `W > n + val(det A)`.
pub(crate) fn left_label(ring: &TruncRing, r: usize, a: &[El], n: u32) -> Result<Vec<u32>> {
    let w = ring.precision();
    let mut h = a.to_vec();
    let mut exps = Vec::with_capacity(r);
    for c in 0..r {
        let (v, p) = (c..r).map(|i| (ring.val(&h[i * r + c]), i)).min().expect("nonempty");
        if v >= w {
            return Err(Error::Precision(format!("Hermite pivot not certified modulo pi^{w}")));
        }
        for j in 0..r {
            h.swap(c * r + j, p * r + j);
        }
        let uinv = ring.inv(&matrix::exact_div(ring, &h[c * r + c], v)?)?;
        for j in 0..r {
            h[c * r + j] = ring.mul(&h[c * r + j], &uinv);
        }
        h[c * r + c] = ring.pi_pow(v);
        for i in c + 1..r {
            if ring.is_zero(&h[i * r + c]) {
                continue;
            }
            let f = matrix::exact_div(ring, &h[i * r + c], v)?;
            for j in 0..r {
                let t = ring.mul(&f, &h[c * r + j]);
                h[i * r + j] = ring.sub(&h[i * r + j], &t);
            }
            h[i * r + c] = ring.zero();
        }
        exps.push(v);
    }
    for c in 1..r {
        let a_c = exps[c];
        for i in 0..c {
            let x = &h[i * r + c];
            let rem = ring.truncate(x, a_c);
            let quot = matrix::exact_div(ring, &ring.sub(x, &rem), a_c)?;
            for j in c..r {
                let t = ring.mul(&quot, &h[c * r + j]);
                h[i * r + j] = ring.sub(&h[i * r + j], &t);
            }
            h[i * r + c] = rem;
        }
    }
    let total: u32 = exps.iter().sum();
    let mut label: Vec<u32> = exps.clone();
    for c in 1..r {
        for i in 0..c {
            let d = ring.digits(&h[i * r + c]);
            label.extend_from_slice(&d[..exps[c] as usize]);
        }
    }
    if n == 0 {
        return Ok(label);
    }
    if w < n + total + 1 {
        return Err(Error::Precision(format!("left coset label needs precision {} (have {w})", n + total + 1)));
    }
    // k·H = A, solved column by column
    let mut k = vec![ring.zero(); r * r];
    for c in 0..r {
        for i in 0..r {
            let mut x = a[i * r + c].clone();
            for j in 0..c {
                let t = ring.mul(&k[i * r + j], &h[j * r + c]);
                x = ring.sub(&x, &t);
            }
            k[i * r + c] = matrix::exact_div(ring, &ring.truncate(&x, w), exps[c])?;
        }
    }
    for x in &k {
        let d = ring.digits(x);
        label.extend_from_slice(&d[..n as usize]);
    }
    Ok(label)
}

//! Finite residue fields `F_q = F_p[y]/(m(y))`.
//!
//! Elements are encoded as integer codes `c = c_0 + c_1 p + ... + c_{f-1} p^{f-1}`
//! for the polynomial `c_0 + c_1 y + ... + c_{f-1} y^{f-1}`. Codes order the
//! field deterministically, which the canonical forms elsewhere rely on.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported residue field size (operation tables are dense).
pub const MAX_Q: u32 = 256;

/// Default defining polynomials, coefficients low degree first.
/// Checked for irreducibility by the unit tests and again at construction.
const DEFAULT_POLYS: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The shipped default defining polynomial for `F_{p^f}`, if any.
pub fn default_poly(p: u32, f: u32) -> Option<Vec<u32>> {
    if f == 1 {
        return Some(vec![0, 1]);
    }
    DEFAULT_POLYS
        .iter()
        .find(|(pp, ff, _)| *pp == p && *ff == f)
        .map(|(_, _, c)| c.to_vec())
}

fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    // b monic
    let db = b.len() - 1;
    while a.len() > db {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - db;
            for (i, &bc) in b[..db].iter().enumerate() {
                a[off + i] = (a[off + i] + p - (lead * bc) % p) % p;
            }
        }
    }
    a
}

/// Brute-force irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly_rem(poly.to_vec(), &div, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

struct Inner {
    p: u32,
    f: u32,
    q: u32,
    poly: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    generator: u32,
}

/// A finite field `F_q`, cheap to clone.
#[derive(Clone)]
pub struct ResidueField(Arc<Inner>);

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.poly == other.0.poly)
    }
}
impl Eq for ResidueField {}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[y]/{:?}", self.0.p, self.0.poly)
    }
}

impl ResidueField {
    /// Builds `F_{p^f}`; `defining_poly` (monic, low degree first) defaults to the shipped table.
    pub fn new(p: u32, f: u32, defining_poly: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if f == 0 {
            return Err(Error::InvalidField("residue degree f must be positive".into()));
        }
        let q = (p as u64).checked_pow(f).filter(|&q| q <= MAX_Q as u64).ok_or_else(|| {
            Error::InvalidField(format!("residue field {p}^{f} exceeds the supported size {MAX_Q}"))
        })? as u32;
        let poly = match defining_poly {
            Some(poly) => poly,
            None => default_poly(p, f).ok_or_else(|| {
                Error::InvalidField(format!("no default defining polynomial for {p}^{f}"))
            })?,
        };
        if poly.len() != f as usize + 1 || *poly.last().unwrap() != 1 {
            return Err(Error::InvalidField(format!(
                "defining polynomial must be monic of degree {f}"
            )));
        }
        if poly.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("defining polynomial coefficients must lie in [0, p)".into()));
        }
        if !is_irreducible(&poly, p) {
            return Err(Error::InvalidField(format!("defining polynomial {poly:?} is reducible over F_{p}")));
        }

        let decode = |c: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(f as usize);
            let mut c = c;
            for _ in 0..f {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        for a in 0..q {
            let da = decode(a);
            neg[a as usize] = encode(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>()) as u16;
            for b in 0..q {
                let db = decode(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = encode(&s) as u16;
                let mut prod = vec![0u32; 2 * f as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = poly_rem(prod, &poly, p);
                let mut r = r;
                r.resize(f as usize, 0);
                mul[a as usize * qs + b as usize] = encode(&r) as u16;
            }
        }
        let mut inv = vec![0u16; qs];
        for a in 1..qs {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u16;
        }
        let generator = (1..q)
            .find(|&g| {
                let mut x = g;
                let mut order = 1;
                while x != 1 {
                    x = mul[x as usize * qs + g as usize] as u32;
                    order += 1;
                }
                order == q - 1
            })
            .unwrap_or(1);
        Ok(ResidueField(Arc::new(Inner { p, f, q, poly, add, mul, neg, inv, generator })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn f(&self) -> u32 {
        self.0.f
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn defining_poly(&self) -> &[u32] {
        &self.0.poly
    }
    /// A generator of the cyclic group `F_q^x`.
    pub fn generator(&self) -> u32 {
        self.0.generator
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.0.add[a as usize * self.0.q as usize + b as usize] as u32
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.mul[a as usize * self.0.q as usize + b as usize] as u32
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize] as u32
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.0.inv[a as usize] as u32)
    }
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }
    /// Polynomial coefficients (over `F_p`) of the element with the given code.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.0.f as usize);
        let mut c = a;
        for _ in 0..self.0.f {
            v.push(c % self.0.p);
            c /= self.0.p;
        }
        v
    }
    pub fn from_coords(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &d| acc * self.0.p + d % self.0.p)
    }
    /// Codes of the `F_p`-basis `1, y, ..., y^{f-1}`.
    pub fn basis(&self) -> Vec<u32> {
        (0..self.0.f).map(|i| self.0.p.pow(i)).collect()
    }
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }
}

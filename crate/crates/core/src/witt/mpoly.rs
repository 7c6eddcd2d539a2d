//! Sparse polynomials in `X_0..X_3, Y_0..Y_3` over `O/π^P`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::localfield::{El, TruncRing};

/// Number of variable slots; `X_j` is slot `j`, `Y_j` is slot `MAX_LEN + j`.
pub const MAX_LEN: usize = 4;
pub const SLOTS: usize = 2 * MAX_LEN;

pub type Mono = [u16; SLOTS];

pub fn x_var(j: usize) -> usize {
    j
}
pub fn y_var(j: usize) -> usize {
    MAX_LEN + j
}

/// Polynomial with nonzero coefficients only.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, El>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(ring: &TruncRing, c: El) -> Self {
        let mut p = MPoly::zero();
        p.add_term(ring, [0; SLOTS], c);
        p
    }

    pub fn var(ring: &TruncRing, slot: usize) -> Self {
        let mut m = [0; SLOTS];
        m[slot] = 1;
        let mut p = MPoly::zero();
        p.add_term(ring, m, ring.one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &El)> {
        self.terms.iter()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, m: &Mono) -> Option<&El> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, ring: &TruncRing, m: Mono, c: El) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = ring.add(old, &c);
                if ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, ring: &TruncRing, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ring, *m, c.clone());
        }
        out
    }

    pub fn neg(&self, ring: &TruncRing) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, ring.neg(c))).collect() }
    }

    pub fn sub(&self, ring: &TruncRing, other: &MPoly) -> MPoly {
        self.add(ring, &other.neg(ring))
    }

    pub fn scale(&self, ring: &TruncRing, c: &El) -> MPoly {
        let mut out = MPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(ring, *m, ring.mul(v, c));
        }
        out
    }

    pub fn mul(&self, ring: &TruncRing, other: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Mono, El> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = *ma;
                for (x, y) in m.iter_mut().zip(mb) {
                    *x += y;
                }
                let t = ring.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(old) => *old = ring.add(old, &t),
                    None => {
                        acc.insert(m, t);
                    }
                }
            }
        }
        acc.retain(|_, c| !ring.is_zero(c));
        MPoly { terms: acc }
    }

    pub fn pow(&self, ring: &TruncRing, mut e: u64) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::constant(ring, ring.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    /// Applies a coefficient map (e.g. a change of precision).
    pub fn map(&self, target: &TruncRing, mut f: impl FnMut(&El) -> El) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(target, *m, f(c));
        }
        out
    }

    /// Minimum valuation of the coefficients (`None` for zero).
    pub fn min_val(&self, ring: &TruncRing) -> Option<u32> {
        self.terms.values().map(|c| ring.val(c)).min()
    }

    /// Exact division by `π^k`; each coefficient must have valuation `≥ k`.
    /// The quotient is correct modulo `π^{P−k}` and kept in the same ring.
    pub fn div_pi_pow(&self, ring: &TruncRing, k: u32) -> Option<MPoly> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if ring.val(c) < k {
                return None;
            }
            let mut v = c.clone();
            for _ in 0..k {
                v = ring.div_pi_unchecked(&v);
            }
            out.add_term(ring, *m, ring.truncate(&v, ring.precision() - k));
        }
        Some(out)
    }

    /// Largest exponent of each slot.
    pub fn max_exponents(&self) -> Mono {
        let mut out = [0; SLOTS];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(m) {
                *o = (*o).max(e);
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|&e| e as u32).sum()).max().unwrap_or(0)
    }
}

/// Renders a monomial as `X0^2*Y1` (or `1`).
pub fn mono_name(m: &Mono) -> String {
    let mut s = String::new();
    for (slot, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        let (letter, idx) = if slot < MAX_LEN { ('X', slot) } else { ('Y', slot - MAX_LEN) };
        let _ = write!(s, "{letter}{idx}");
        if e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

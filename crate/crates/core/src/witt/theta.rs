//! The counit `θ_N : W^N(F_q) → O/π^N`, `(a_j) ↦ Σ [a_j^{1/q^j}] π^j`.
//!
//! On `F_q` every `q`-th root is the element itself, so `θ_N` sends a vector
//! to the element with those Teichmüller digits. Its ring structure is checked
//! against Witt arithmetic computed from a law table for short lengths and,
//! for any length, by lifting coordinates to Teichmüller representatives in
//! `O/π^N`, adding or multiplying ghost components and solving back.

use serde::Serialize;

use super::algebra::FiniteField;
use super::laws::{ghost_solve_num, law_polynomials};
use super::vector::WittRing;
use crate::error::{Error, Result};
use crate::localfield::{El, FieldDesc, TruncRing};

const EXHAUSTIVE_LIMIT: u64 = 512;
const SAMPLES: usize = 3000;
/// Pairs recomputed directly during exhaustive runs.
const CROSS_CHECKS: u64 = 256;
/// Longest length for which the law table is also used as a cross-check.
const TABLE_LIMIT: u32 = 3;

/// `θ_N` of a vector over `F_q` (residue codes).
pub fn theta(ring: &TruncRing, coords: &[u32]) -> Result<El> {
    ring.from_digits(coords)
}

/// Inverse of [`theta`].
pub fn theta_inverse(ring: &TruncRing, a: &El) -> Vec<u32> {
    ring.digits(a)
}

/// Witt arithmetic on `W^N(F_q)` through Teichmüller lifts to `O/π^N`.
#[derive(Clone, Debug)]
pub struct GhostLift {
    ring: TruncRing,
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
    Neg,
}

impl GhostLift {
    pub fn new(field: &FieldDesc, n: u32) -> Result<Self> {
        Ok(GhostLift { ring: field.ring(n)? })
    }

    fn ghosts(&self, x: &[u32]) -> Vec<El> {
        let r = &self.ring;
        // Teichmüller lifts are fixed by the q-th power, so w_j = Σ_{i≤j} π^i [x_i]
        let mut acc = r.zero();
        x.iter()
            .enumerate()
            .map(|(i, &c)| {
                acc = r.add(&acc, &r.mul_pi_pow(&r.teichmuller(c), i as u32));
                acc.clone()
            })
            .collect()
    }

    fn apply(&self, op: Op, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
        let r = &self.ring;
        let n = r.precision() as usize;
        if x.len() != n || (!matches!(op, Op::Neg) && y.len() != n) {
            return Err(Error::Mismatch(format!("vectors must have length {n}")));
        }
        let gx = self.ghosts(x);
        let g: Vec<El> = match op {
            Op::Add => gx.iter().zip(self.ghosts(y)).map(|(a, b)| r.add(a, &b)).collect(),
            Op::Mul => gx.iter().zip(self.ghosts(y)).map(|(a, b)| r.mul(a, &b)).collect(),
            Op::Neg => gx.iter().map(|a| r.neg(a)).collect(),
        };
        Ok(ghost_solve_num(r, &g)?.iter().map(|a| r.residue(a)).collect())
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
        self.apply(Op::Add, x, y)
    }
    pub fn mul(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
        self.apply(Op::Mul, x, y)
    }
    pub fn neg(&self, x: &[u32]) -> Result<Vec<u32>> {
        self.apply(Op::Neg, x, &[])
    }
}

/// Fast arithmetic on `W^N(F_q)` for exhaustive checks, with vectors encoded
/// as integers `Σ a_j q^j`.
///
/// A vector is `Σ_{i<j} V^i[a_i] + V^j(a_j, a_{j+1}, …)`, so adding `V^j[b]`
/// only changes the tail, through the table of `t + [b]` on `W^{N−j}`.
/// Products are sums of the products `x · V^j[b]`, tabulated for all `x`.
/// Every tabulated entry comes from [`GhostLift`].
#[derive(Clone, Debug)]
pub struct LiftedWitt {
    n: u32,
    q: u64,
    /// `teich_add[L][t·q + b] = t + [b]` in `W^L`, for `L ≤ N`.
    teich_add: Vec<Vec<u64>>,
    /// `shifted_mul[j][b·q^N + x] = x · V^j[b]`.
    shifted_mul: Vec<Vec<u64>>,
}

impl LiftedWitt {
    pub fn new(field: &FieldDesc, n: u32) -> Result<Self> {
        let q = field.q() as u64;
        let order = q.checked_pow(n).filter(|&o| o <= 1 << 16).ok_or_else(|| Error::Budget {
            what: format!("W^{n}(F_{q}) lookup tables"),
            needed: q.saturating_pow(n),
            budget: 1 << 16,
        })?;
        let mut teich_add = vec![Vec::new()];
        for l in 1..=n {
            let lift = GhostLift::new(field, l)?;
            let size = q.pow(l);
            let mut table = Vec::with_capacity((size * q) as usize);
            for t in 0..size {
                let tv = decode(t, q, l);
                for b in 0..q {
                    let mut bv = vec![0; l as usize];
                    bv[0] = b as u32;
                    table.push(encode(&lift.add(&tv, &bv)?, q));
                }
            }
            teich_add.push(table);
        }
        let lift = GhostLift::new(field, n)?;
        let mut shifted_mul = Vec::with_capacity(n as usize);
        for j in 0..n {
            let mut table = vec![0; (order * q) as usize];
            for b in 1..q {
                let mut y = vec![0; n as usize];
                y[j as usize] = b as u32;
                for x in 0..order {
                    table[(b * order + x) as usize] = encode(&lift.mul(&decode(x, q, n), &y)?, q);
                }
            }
            shifted_mul.push(table);
        }
        Ok(LiftedWitt { n, q, teich_add, shifted_mul })
    }

    pub fn order(&self) -> u64 {
        self.q.pow(self.n)
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        let (q, n) = (self.q, self.n);
        let mut s = x;
        let mut rest = y;
        let mut scale = 1;
        for j in 0..n {
            let b = rest % q;
            rest /= q;
            if b != 0 {
                let (low, tail) = (s % scale, s / scale);
                s = low + scale * self.teich_add[(n - j) as usize][(tail * q + b) as usize];
            }
            scale *= q;
        }
        s
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        let order = self.order();
        let mut acc = 0;
        let mut rest = y;
        for table in &self.shifted_mul {
            let b = rest % self.q;
            rest /= self.q;
            if b != 0 {
                acc = self.add(acc, table[(b * order + x) as usize]);
            }
        }
        acc
    }
}

/// `Σ a_j q^j`.
pub fn encode(v: &[u32], q: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &d| acc * q + d as u64)
}

/// Inverse of [`encode`] for vectors of length `n`.
pub fn decode(mut idx: u64, q: u64, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = (idx % q) as u32;
            idx /= q;
            d
        })
        .collect()
}

/// Outcome of checking that `θ_N` is a ring isomorphism.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub field: String,
    pub n: u32,
    pub order: u64,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    /// Whether the law table was compared with the lifted arithmetic.
    pub table_cross_checked: bool,
    pub failures: Vec<String>,
}

impl ThetaReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `θ_N` is bijective, additive and multiplicative, on all pairs
/// when `|O/π^N| ≤ 512` and on a seeded sample otherwise.
///
/// Exhaustive runs use [`LiftedWitt`]; a seeded sample of pairs is also
/// recomputed directly with [`GhostLift`], and for `N ≤ 3` every pair is
/// compared with the law table.
pub fn verify_theta(field: &FieldDesc, n: u32) -> Result<ThetaReport> {
    use rand::{Rng, SeedableRng};

    let ring = field.ring(n)?;
    let q = field.q() as u64;
    let lift = GhostLift::new(field, n)?;
    let order = ring.order().unwrap_or(u64::MAX);
    let table = if n <= TABLE_LIMIT {
        let t = law_polynomials(field, n as usize, 1)?;
        Some(WittRing::new(&t, FiniteField(field.residue().clone()))?)
    } else {
        None
    };
    let mut failures = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7e7a);

    let direct = |x: &[u32], y: &[u32], failures: &mut Vec<String>| -> Result<(Vec<u32>, Vec<u32>)> {
        let (tx, ty) = (theta(&ring, x)?, theta(&ring, y)?);
        let (s, p) = (lift.add(x, y)?, lift.mul(x, y)?);
        if theta(&ring, &s)? != ring.add(&tx, &ty) {
            failures.push(format!("theta is not additive at {x:?}, {y:?}"));
        }
        if theta(&ring, &p)? != ring.mul(&tx, &ty) {
            failures.push(format!("theta is not multiplicative at {x:?}, {y:?}"));
        }
        Ok((s, p))
    };

    if order > EXHAUSTIVE_LIMIT {
        for _ in 0..SAMPLES {
            let (a, b) = (ring.random(&mut rng), ring.random(&mut rng));
            direct(&ring.digits(&a), &ring.digits(&b), &mut failures)?;
        }
        return Ok(ThetaReport {
            field: field.name(),
            n,
            order,
            pairs_checked: SAMPLES as u64,
            exhaustive: false,
            table_cross_checked: false,
            failures,
        });
    }

    let fast = LiftedWitt::new(field, n)?;
    let images: Vec<El> = (0..order).map(|i| theta(&ring, &decode(i, q, n))).collect::<Result<_>>()?;
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() as u64 != order {
        failures.push(format!("theta has {} distinct images out of {order}", sorted.len()));
    }
    for (i, img) in images.iter().enumerate() {
        if encode(&theta_inverse(&ring, img), q) != i as u64 {
            failures.push(format!("theta_inverse does not invert theta at {:?}", decode(i as u64, q, n)));
        }
    }
    for x in 0..order {
        for y in 0..order {
            let (xi, yi) = (x as usize, y as usize);
            let (s, p) = (fast.add(x, y), fast.mul(x, y));
            if images[s as usize] != ring.add(&images[xi], &images[yi]) {
                failures.push(format!("theta is not additive at {:?}, {:?}", decode(x, q, n), decode(y, q, n)));
            }
            if images[p as usize] != ring.mul(&images[xi], &images[yi]) {
                failures.push(format!("theta is not multiplicative at {:?}, {:?}", decode(x, q, n), decode(y, q, n)));
            }
            if let Some(w) = &table {
                let (xv, yv) = (decode(x, q, n), decode(y, q, n));
                if encode(&w.add(&xv, &yv)?, q) != s || encode(&w.mul(&xv, &yv)?, q) != p {
                    failures.push(format!("law table and lifted arithmetic disagree at {xv:?}, {yv:?}"));
                }
            }
        }
    }
    for _ in 0..CROSS_CHECKS.min(order * order) {
        let (x, y) = (rng.gen_range(0..order), rng.gen_range(0..order));
        let (s, p) = direct(&decode(x, q, n), &decode(y, q, n), &mut failures)?;
        if encode(&s, q) != fast.add(x, y) || encode(&p, q) != fast.mul(x, y) {
            failures.push(format!("tabulated and direct lifted arithmetic disagree at {x}, {y}"));
        }
    }

    Ok(ThetaReport {
        field: field.name(),
        n,
        order,
        pairs_checked: order * order,
        exhaustive: true,
        table_cross_checked: table.is_some(),
        failures,
    })
}

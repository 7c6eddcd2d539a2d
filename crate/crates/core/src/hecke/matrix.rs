//! Square matrices over `O/π^N`, stored row-major.

use crate::error::{Error, Result};
use crate::localfield::{El, TruncRing};

pub type Mat = Vec<El>;

pub(crate) fn identity(ring: &TruncRing, r: usize) -> Mat {
    let mut m = vec![ring.zero(); r * r];
    for i in 0..r {
        m[i * r + i] = ring.one();
    }
    m
}

pub(crate) fn mul(ring: &TruncRing, r: usize, a: &[El], b: &[El]) -> Mat {
    let mut out = vec![ring.zero(); r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = &a[i * r + k];
            if ring.is_zero(aik) {
                continue;
            }
            for j in 0..r {
                let t = ring.mul(aik, &b[k * r + j]);
                out[i * r + j] = ring.add(&out[i * r + j], &t);
            }
        }
    }
    out
}

/// Entrywise transfer between two precisions of the same field.
pub(crate) fn convert(to: &TruncRing, from: &TruncRing, a: &[El]) -> Mat {
    if to.precision() <= from.precision() {
        a.iter().map(|x| to.reduce_from(from, x)).collect()
    } else {
        a.iter().map(|x| to.lift_from(from, x)).collect()
    }
}

/// Digit expansions of all entries, row-major.
pub(crate) fn digits(ring: &TruncRing, a: &[El]) -> Vec<u32> {
    a.iter().flat_map(|x| ring.digits(x)).collect()
}

pub(crate) fn from_digits(ring: &TruncRing, r: usize, d: &[u32]) -> Result<Mat> {
    let n = ring.precision() as usize;
    if d.len() != r * r * n {
        return Err(Error::Invalid(format!("expected {} digits for a {r}x{r} matrix, got {}", r * r * n, d.len())));
    }
    d.chunks(n).map(|c| ring.from_digits(c)).collect()
}

pub(crate) fn elementary(ring: &TruncRing, r: usize, i: usize, j: usize, c: &El) -> Mat {
    let mut m = identity(ring, r);
    m[i * r + j] = ring.add(&m[i * r + j], c);
    m
}

pub(crate) fn diag_unit(ring: &TruncRing, r: usize, i: usize, u: &El) -> Mat {
    let mut m = identity(ring, r);
    m[i * r + i] = u.clone();
    m
}

/// `a / π^k` for `val(a) ≥ k`, as the canonical representative modulo `π^{N−k}`.
pub(crate) fn exact_div(ring: &TruncRing, a: &El, k: u32) -> Result<El> {
    if k == 0 {
        return Ok(a.clone());
    }
    let n = ring.precision();
    if k >= n {
        return Err(Error::Precision(format!("division by pi^{k} at precision {n}")));
    }
    let v = ring.val(a);
    if v < k {
        return Err(Error::InexactDivision { shift: k, val: v });
    }
    let mut out = a.clone();
    for _ in 0..k {
        out = ring.div_pi_unchecked(&out);
    }
    Ok(ring.truncate(&out, n - k))
}

pub(crate) fn det(ring: &TruncRing, r: usize, a: &[El]) -> El {
    fn rec(ring: &TruncRing, r: usize, a: &[El], rows: &[usize], cols: &mut Vec<usize>) -> El {
        let Some((&row, rest)) = rows.split_first() else {
            return ring.one();
        };
        let mut acc = ring.zero();
        for idx in 0..cols.len() {
            let col = cols.remove(idx);
            let minor = rec(ring, r, a, rest, cols);
            cols.insert(idx, col);
            let t = ring.mul(&a[row * r + col], &minor);
            acc = if idx % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
        }
        acc
    }
    let rows: Vec<usize> = (0..r).collect();
    rec(ring, r, a, &rows, &mut rows.clone())
}

pub(crate) fn is_invertible(ring: &TruncRing, r: usize, a: &[El]) -> bool {
    ring.is_unit(&det(ring, r, a))
}

/// Inverse in `GL_r(O/π^N)` by Gauss–Jordan elimination with unit pivots.
pub(crate) fn inverse(ring: &TruncRing, r: usize, a: &[El]) -> Result<Mat> {
    let mut m = a.to_vec();
    let mut inv = identity(ring, r);
    for c in 0..r {
        let p = (c..r).find(|&i| ring.is_unit(&m[i * r + c])).ok_or(Error::NotUnit)?;
        for j in 0..r {
            m.swap(c * r + j, p * r + j);
            inv.swap(c * r + j, p * r + j);
        }
        let u = ring.inv(&m[c * r + c])?;
        for j in 0..r {
            m[c * r + j] = ring.mul(&m[c * r + j], &u);
            inv[c * r + j] = ring.mul(&inv[c * r + j], &u);
        }
        for i in 0..r {
            if i == c || ring.is_zero(&m[i * r + c]) {
                continue;
            }
            let f = m[i * r + c].clone();
            for j in 0..r {
                let t = ring.mul(&f, &m[c * r + j]);
                m[i * r + j] = ring.sub(&m[i * r + j], &t);
                let t = ring.mul(&f, &inv[c * r + j]);
                inv[i * r + j] = ring.sub(&inv[i * r + j], &t);
            }
        }
    }
    Ok(inv)
}

/// `π^j [b]` for `j < N` and `b` running over an `F_p`-basis of the residue field.
/// Their integer combinations exhaust `π^start O/π^N`.
pub(crate) fn additive_gens(ring: &TruncRing, start: u32) -> Vec<El> {
    let basis = ring.residue_field().basis();
    (start..ring.precision())
        .flat_map(|j| basis.iter().map(move |&b| ring.mul_pi_pow(&ring.teichmuller(b), j)))
        .collect()
}

/// Generators of the unit group `1 + π^start O` (of `O^×` when `start = 0`).
pub(crate) fn unit_gens(ring: &TruncRing, start: u32) -> Vec<El> {
    let mut out = Vec::new();
    if start == 0 {
        let g = ring.residue_field().generator();
        if g != 1 {
            out.push(ring.teichmuller(g));
        }
    }
    for c in additive_gens(ring, start.max(1)) {
        out.push(ring.add(&ring.one(), &c));
    }
    out
}

/// Generators of the congruence subgroup `K^n ⊂ GL_r(O/π^N)` (`K` itself for `n = 0`).
pub(crate) fn congruence_gens(ring: &TruncRing, r: usize, n: u32) -> Vec<Mat> {
    let mut out = Vec::new();
    for c in additive_gens(ring, n) {
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    out.push(elementary(ring, r, i, j, &c));
                }
            }
        }
    }
    for u in unit_gens(ring, n) {
        if n == 0 {
            out.push(diag_unit(ring, r, 0, &u));
        } else {
            for i in 0..r {
                out.push(diag_unit(ring, r, i, &u));
            }
        }
    }
    out
}

/// All of `GL_r(O/π^n)` in digit order.
pub(crate) fn general_linear(ring: &TruncRing, r: usize, budget: u64) -> Result<Vec<Mat>> {
    let size = ring.order().and_then(|o| o.checked_pow((r * r) as u32)).unwrap_or(u64::MAX);
    if size > budget {
        return Err(Error::Budget { what: format!("enumerating {r}x{r} matrices over O/pi^{}", ring.precision()), needed: size, budget });
    }
    let order = ring.order().expect("bounded");
    let mut out = Vec::new();
    for mut idx in 0..size {
        let m: Mat = (0..r * r)
            .map(|_| {
                let e = ring.element_at(idx % order);
                idx /= order;
                e
            })
            .rev()
            .collect();
        if is_invertible(ring, r, &m) {
            out.push(m);
        }
    }
    Ok(out)
}

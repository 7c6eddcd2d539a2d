//! Close fields: the ring isomorphism `O_E/π^n ≅ F_q[t]/t^n` for `e ≥ n`,
//! and spreading out extensions of `F_q((t))` to extensions of `E`.
//!
//! The isomorphism sends `Σ [c_j] π^j` to `Σ c_j t^j`; it depends on `π`
//! being the fixed Eisenstein root of the descriptor.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ring::{El, TruncRing};
use super::zq::Zq;
use super::{FieldDesc, Kind, ZqCoeff};
use crate::error::{Error, Result};

/// Exhaustive verification limit for ring-isomorphism checks.
const EXHAUSTIVE_LIMIT: u64 = 512;
const SAMPLES: usize = 4000;

/// The digit isomorphism between `O_E/π^n` and `F_q[t]/t^n`.
#[derive(Clone, Debug)]
pub struct CloseFieldIso {
    source: TruncRing,
    target: TruncRing,
}

/// Outcome of checking that a [`CloseFieldIso`] is a ring isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub failures: Vec<String>,
}

impl IsoReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds the digit isomorphism; refuses unless `e ≥ n`.
pub fn close_field_iso(field: &FieldDesc, n: u32) -> Result<CloseFieldIso> {
    if let Some(e) = field.e() {
        if e < n {
            return Err(Error::NotClose { e, n });
        }
    }
    let laurent = FieldDesc::laurent(field.residue().clone());
    Ok(CloseFieldIso { source: field.ring(n)?, target: laurent.ring(n)? })
}

impl CloseFieldIso {
    pub fn source(&self) -> &TruncRing {
        &self.source
    }
    pub fn target(&self) -> &TruncRing {
        &self.target
    }
    pub fn level(&self) -> u32 {
        self.source.precision()
    }

    pub fn forward(&self, a: &El) -> El {
        self.target.from_digits(&self.source.digits(a)).expect("digits in range")
    }

    pub fn backward(&self, b: &El) -> El {
        self.source.from_digits(&self.target.digits(b)).expect("digits in range")
    }

    /// Checks additivity, multiplicativity, `π ↦ t` and `[c] ↦ c` (all pairs when
    /// the ring has at most 512 elements, a seeded sample otherwise).
    pub fn verify(&self) -> IsoReport {
        let (s, t) = (&self.source, &self.target);
        let mut failures = Vec::new();
        if self.forward(&s.pi()) != t.pi() {
            failures.push("pi does not map to t".to_string());
        }
        for c in 0..s.q() {
            if self.forward(&s.teichmuller(c)) != t.teichmuller(c) {
                failures.push(format!("Teichmüller lift of {c} does not map to the constant {c}"));
            }
        }
        let mut check = |a: &El, b: &El| {
            let (fa, fb) = (self.forward(a), self.forward(b));
            if self.forward(&s.add(a, b)) != t.add(&fa, &fb) {
                failures.push(format!("additivity fails at {:?}, {:?}", s.digits(a), s.digits(b)));
            }
            if self.forward(&s.mul(a, b)) != t.mul(&fa, &fb) {
                failures.push(format!("multiplicativity fails at {:?}, {:?}", s.digits(a), s.digits(b)));
            }
            if self.backward(&fa) != *a {
                failures.push(format!("not injective at {:?}", s.digits(a)));
            }
        };
        let order = s.order().unwrap_or(u64::MAX);
        if order <= EXHAUSTIVE_LIMIT {
            let all: Vec<El> = s.elements().collect();
            for a in &all {
                for b in &all {
                    check(a, b);
                }
            }
            IsoReport { pairs_checked: order * order, exhaustive: true, failures }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLES {
                let (a, b) = (s.random(&mut rng), s.random(&mut rng));
                check(&a, &b);
            }
            IsoReport { pairs_checked: SAMPLES as u64, exhaustive: false, failures }
        }
    }
}

/// A totally ramified extension of `E` spread out from one of `F_q((t))`.
#[derive(Clone, Debug)]
pub struct SpreadExtension {
    /// The extension as an absolute field over the unramified base.
    pub field: FieldDesc,
    /// The lifted coefficients `a_0, …, a_{r−1}` in `O_E/π^n`.
    pub lifted: Vec<El>,
    /// The same coefficients as `F_q[t]/t^n` digit lists after reduction.
    pub reduced: Vec<Vec<u32>>,
}

/// Spreads `T^r + t(a_{r−1}T^{r−1} + … + a_0)` over `F_q((t))` (coefficients
/// given as digit lists in `t`) to `T^r + π(a_{r−1}T^{r−1} + … + a_0)` over `E`.
///
/// The lifts are `Σ [d_k] π^k`. The returned field is described by the norm of
/// that polynomial down to the unramified base, which is again Eisenstein.
pub fn spread_extension(coeffs: &[Vec<u32>], field: &FieldDesc, n: u32) -> Result<SpreadExtension> {
    let iso = close_field_iso(field, n)?;
    let Kind::Mixed { eisenstein } = field.kind() else {
        return Err(Error::InvalidField("spreading out needs a mixed characteristic base".into()));
    };
    let r = coeffs.len();
    if r == 0 {
        return Err(Error::Invalid("the polynomial must have degree at least 1".into()));
    }
    if coeffs[0].first().copied().unwrap_or(0) == 0 {
        return Err(Error::Invalid("a_0 must be a unit for the polynomial to be Eisenstein".into()));
    }
    let q = field.q();
    if coeffs.iter().flatten().any(|&d| d >= q) {
        return Err(Error::Invalid("digit out of range".into()));
    }

    let lifted: Vec<El> = coeffs
        .iter()
        .map(|d| {
            let n_digits = d.len().min(n as usize);
            iso.source().from_digits(&d[..n_digits])
        })
        .collect::<Result<_>>()?;
    let reduced: Vec<Vec<u32>> = lifted.iter().map(|a| iso.target().digits(&iso.forward(a))).collect();

    let p = field.p() as u64;
    let z = Zq::new(p, field.residue().defining_poly(), field.coeff_digits());
    let e = eisenstein.len() - 1;
    // G(x, X) = X^r + Σ_j x·a_j(x) X^j with a_j(x) = Σ_k [d_k] x^k, as a polynomial in x over W[X].
    let max_x = coeffs.iter().map(|d| d.len()).max().unwrap_or(0) + 1;
    let mut g: Vec<Vec<Vec<u64>>> = vec![vec![z.zero(); r + 1]; max_x.max(1)];
    g[0][r] = z.one();
    for (j, digits) in coeffs.iter().enumerate() {
        for (k, &d) in digits.iter().enumerate() {
            let t = z.teichmuller(d);
            g[k + 1][j] = z.add(&g[k + 1][j], &t);
        }
    }
    // x^m reduced modulo the Eisenstein polynomial, as e coefficients.
    let powers = x_powers(&z, eisenstein, max_x + e);
    // matrix of multiplication by G on the basis 1, x, …, x^{e−1}; entries in W[X]
    let mut mat = vec![vec![vec![z.zero(); r + 1]; e]; e];
    for col in 0..e {
        for (k, gk) in g.iter().enumerate() {
            let xp = &powers[k + col];
            for row in 0..e {
                if z.is_zero(&xp[row]) {
                    continue;
                }
                for (deg, c) in gk.iter().enumerate() {
                    let t = z.mul(c, &xp[row]);
                    mat[row][col][deg] = z.add(&mat[row][col][deg], &t);
                }
            }
        }
    }
    let norm = poly_det(&z, &mat);
    let absolute: Vec<ZqCoeff> = norm[..=e * r]
        .iter()
        .map(|c| ZqCoeff::YPoly(c.iter().map(|&v| v as i64).collect()))
        .collect();
    let out = FieldDesc::mixed(field.residue().clone(), &absolute)?;
    Ok(SpreadExtension { field: out, lifted, reduced })
}

fn x_powers(z: &Zq, eisenstein: &[Vec<u64>], count: usize) -> Vec<Vec<Vec<u64>>> {
    let e = eisenstein.len() - 1;
    let mut cur = vec![z.zero(); e];
    cur[0] = z.one();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(cur.clone());
        // multiply by x
        let top = cur[e - 1].clone();
        for i in (1..e).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = z.zero();
        for i in 0..e {
            let t = z.mul(&top, &eisenstein[i]);
            cur[i] = z.sub(&cur[i], &t);
        }
    }
    out
}

fn poly_mul(z: &Zq, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out = vec![z.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if z.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = z.add(&out[i + j], &z.mul(x, y));
        }
    }
    out
}

/// Determinant of a square matrix over `W[X]` by Laplace expansion along the first row.
fn poly_det(z: &Zq, m: &[Vec<Vec<Vec<u64>>>]) -> Vec<Vec<u64>> {
    let size = m.len();
    if size == 1 {
        return m[0][0].clone();
    }
    let mut acc: Vec<Vec<u64>> = vec![z.zero()];
    for col in 0..size {
        let minor: Vec<Vec<Vec<Vec<u64>>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, v)| v.clone()).collect())
            .collect();
        let mut term = poly_mul(z, &m[0][col], &poly_det(z, &minor));
        if col % 2 == 1 {
            term = term.iter().map(|c| z.neg(c)).collect();
        }
        if term.len() > acc.len() {
            acc.resize(term.len(), z.zero());
        }
        for (i, c) in term.iter().enumerate() {
            acc[i] = z.add(&acc[i], c);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_isomorphisms() {
        let q2 = FieldDesc::qp_root(2, 1).unwrap();
        let iso = close_field_iso(&q2, 1).unwrap();
        assert!(iso.verify().ok());
        let r2 = FieldDesc::qp_root(2, 2).unwrap();
        let iso = close_field_iso(&r2, 2).unwrap();
        assert_eq!(iso.forward(&iso.source().pi()), iso.target().pi());
        assert!(iso.source().is_zero(&iso.source().from_int(2)));
        let rep = iso.verify();
        assert!(rep.ok() && rep.exhaustive);
        assert!(matches!(close_field_iso(&q2, 2), Err(Error::NotClose { e: 1, n: 2 })));
    }

    #[test]
    fn spread_quadratic() {
        let r2 = FieldDesc::qp_root(2, 2).unwrap();
        let ext = spread_extension(&[vec![1], vec![]], &r2, 2).unwrap();
        assert_eq!(ext.field, FieldDesc::qp_root(2, 4).unwrap());
        assert_eq!(ext.reduced, vec![vec![1, 0], vec![0, 0]]);
    }

    #[test]
    fn spread_roundtrip_with_digits() {
        let k = FieldDesc::qp_root(2, 4).unwrap();
        let input = vec![vec![1, 1, 0, 1], vec![0, 1, 1]];
        let ext = spread_extension(&input, &k, 3).unwrap();
        assert_eq!(ext.field.e(), Some(8));
        assert_eq!(ext.reduced, vec![vec![1, 1, 0], vec![0, 1, 1]]);
    }
}

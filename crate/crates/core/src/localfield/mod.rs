//! Nonarchimedean local fields at finite precision.
//!
//! A [`FieldDesc`] is either a totally ramified extension of the unramified
//! ring `W(F_q)` cut out by an Eisenstein polynomial (mixed characteristic),
//! or the Laurent series field `F_q((t))`. The uniformizer is the Eisenstein
//! root, respectively `t`. Truncated arithmetic in `O/π^N` lives in [`ring`].

mod close;
mod descriptor;
mod elem;
mod padic;
mod ring;
pub mod zq;

use std::fmt;
use std::sync::Arc;

pub use close::{close_field_iso, spread_extension, CloseFieldIso, SpreadExtension};
pub use descriptor::{FieldFile, KindSpec};
pub use elem::TruncElem;
pub use padic::{PField, PNum};
pub use ring::{El, TruncRing};

use crate::error::{Error, Result};
use crate::fq::ResidueField;
use zq::Zq;

/// A coefficient of an Eisenstein polynomial, as an element of `W(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZqCoeff {
    /// An ordinary integer.
    Int(i64),
    /// Teichmüller digits `Σ [d_k] p^k` with `d_k` residue codes.
    Digits(Vec<u32>),
    /// Integer coefficients of a polynomial in the residue generator `y`.
    YPoly(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Kind {
    /// Eisenstein coefficients (monic, low degree first) in `Z_q / p^K`.
    Mixed { eisenstein: Vec<Vec<u64>> },
    Laurent,
}

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    residue: ResidueField,
    kind: Kind,
    /// Precision (in powers of p) at which Eisenstein coefficients are stored.
    coeff_digits: u32,
}

/// Validated description of a local field; cheap to clone.
#[derive(Clone)]
pub struct FieldDesc(Arc<FieldInner>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for FieldDesc {}

impl FieldDesc {
    /// Mixed characteristic field `W(F_q)[x]/(eisenstein)`.
    pub fn mixed(residue: ResidueField, eisenstein: &[ZqCoeff]) -> Result<Self> {
        let p = residue.p() as u64;
        let digits = zq::max_digits(p);
        let z = Zq::new(p, residue.defining_poly(), digits);
        if eisenstein.len() < 2 {
            return Err(Error::InvalidField("Eisenstein polynomial must have degree at least 1".into()));
        }
        let coeffs: Vec<Vec<u64>> = eisenstein
            .iter()
            .map(|c| match c {
                ZqCoeff::Int(v) => Ok(z.from_int(*v as i128)),
                ZqCoeff::YPoly(v) => {
                    if v.len() > z.f {
                        return Err(Error::InvalidField(format!(
                            "coefficient {v:?} has more than f = {} entries",
                            z.f
                        )));
                    }
                    Ok(z.from_ints(&v.iter().map(|&c| c as i128).collect::<Vec<_>>()))
                }
                ZqCoeff::Digits(ds) => {
                    let mut acc = z.zero();
                    let mut pk = z.one();
                    for &d in ds {
                        if d >= residue.q() {
                            return Err(Error::InvalidField(format!("digit {d} is not a residue code")));
                        }
                        acc = z.add(&acc, &z.mul(&z.teichmuller(d), &pk));
                        pk = z.mul(&pk, &z.from_int(p as i128));
                    }
                    Ok(acc)
                }
            })
            .collect::<Result<_>>()?;
        if coeffs.last().unwrap() != &z.one() {
            return Err(Error::InvalidField("Eisenstein polynomial must be monic".into()));
        }
        let e = coeffs.len() - 1;
        for (i, c) in coeffs[..e].iter().enumerate() {
            if z.val(c) < 1 {
                return Err(Error::InvalidField(format!(
                    "not Eisenstein: coefficient of x^{i} is not divisible by {p}"
                )));
            }
        }
        if z.val(&coeffs[0]) != 1 {
            return Err(Error::InvalidField(format!(
                "not Eisenstein: constant term must have valuation exactly 1 (it is divisible by {p}^2 or zero)"
            )));
        }
        Ok(FieldDesc(Arc::new(FieldInner {
            residue,
            kind: Kind::Mixed { eisenstein: coeffs },
            coeff_digits: digits,
        })))
    }

    /// Equal characteristic field `F_q((t))`.
    pub fn laurent(residue: ResidueField) -> Self {
        FieldDesc(Arc::new(FieldInner { residue, kind: Kind::Laurent, coeff_digits: 0 }))
    }

    /// Builds a descriptor from raw data; `eisenstein = None` means `F_q((t))`.
    pub fn make(p: u32, f: u32, defining_poly: Option<Vec<u32>>, eisenstein: Option<&[ZqCoeff]>) -> Result<Self> {
        let residue = ResidueField::new(p, f, defining_poly)?;
        match eisenstein {
            Some(eis) => FieldDesc::mixed(residue, eis),
            None => Ok(FieldDesc::laurent(residue)),
        }
    }

    /// `Q_p(p^{1/e})` for `e >= 1`, i.e. Eisenstein polynomial `x^e - p`.
    pub fn qp_root(p: u32, e: usize) -> Result<Self> {
        let mut eis = vec![ZqCoeff::Int(0); e + 1];
        eis[0] = ZqCoeff::Int(-(p as i64));
        eis[e] = ZqCoeff::Int(1);
        FieldDesc::make(p, 1, None, Some(&eis))
    }

    /// The unramified extension of `Q_p` of degree `f` (uniformizer `p`).
    pub fn unramified(p: u32, f: u32) -> Result<Self> {
        FieldDesc::make(p, f, None, Some(&[ZqCoeff::Int(-(p as i64)), ZqCoeff::Int(1)]))
    }

    /// `F_{p^f}((t))` with the default residue polynomial.
    pub fn laurent_series(p: u32, f: u32) -> Result<Self> {
        FieldDesc::make(p, f, None, None)
    }

    pub fn residue(&self) -> &ResidueField {
        &self.0.residue
    }
    pub fn p(&self) -> u32 {
        self.0.residue.p()
    }
    pub fn f(&self) -> u32 {
        self.0.residue.f()
    }
    pub fn q(&self) -> u32 {
        self.0.residue.q()
    }
    pub fn is_mixed(&self) -> bool {
        matches!(self.0.kind, Kind::Mixed { .. })
    }

    /// Ramification index; `None` for `F_q((t))`, where every `e >= n` hypothesis holds.
    pub fn e(&self) -> Option<u32> {
        match &self.0.kind {
            Kind::Mixed { eisenstein } => Some(eisenstein.len() as u32 - 1),
            Kind::Laurent => None,
        }
    }

    /// Whether `e >= n`, so that `p` vanishes in `O/π^n`.
    pub fn satisfies_closeness(&self, n: u32) -> bool {
        self.e().map_or(true, |e| e >= n)
    }

    /// Largest supported precision `N` for `O/π^N`.
    pub fn max_precision(&self) -> u32 {
        match &self.0.kind {
            Kind::Mixed { eisenstein } => (eisenstein.len() as u32 - 1) * self.0.coeff_digits,
            Kind::Laurent => 4096,
        }
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }
    pub(crate) fn coeff_digits(&self) -> u32 {
        self.0.coeff_digits
    }

    /// The ring `O/π^N`.
    pub fn ring(&self, precision: u32) -> Result<TruncRing> {
        TruncRing::new(self.clone(), precision)
    }

    /// Eisenstein coefficients as balanced integers, when they are rational integers.
    pub fn eisenstein_ints(&self) -> Option<Vec<i64>> {
        let Kind::Mixed { eisenstein } = &self.0.kind else { return None };
        let md = (self.p() as u64).pow(self.0.coeff_digits);
        eisenstein
            .iter()
            .map(|c| {
                if c[1..].iter().any(|&x| x != 0) {
                    return None;
                }
                let v = c[0];
                Some(if v > md / 2 { -((md - v) as i64) } else { v as i64 })
            })
            .collect()
    }

    /// Short human-readable name, e.g. `Q_2[x]/(x^2 - 2)` or `F_2((t))`.
    pub fn name(&self) -> String {
        let base = if self.f() == 1 {
            format!("{}", self.p())
        } else {
            format!("{}^{}", self.p(), self.f())
        };
        match &self.0.kind {
            Kind::Laurent => format!("F_{base}((t))"),
            Kind::Mixed { eisenstein } => {
                let e = eisenstein.len() - 1;
                let ring = if self.f() == 1 { format!("Q_{}", self.p()) } else { format!("Q_{base}") };
                match self.eisenstein_ints() {
                    Some(ints) if e == 1 && ints[0] == -(self.p() as i64) => ring,
                    Some(ints) => format!("{ring}[x]/({})", fmt_int_poly(&ints, "x")),
                    None => format!("{ring}[x]/(Eisenstein, e={e})"),
                }
            }
        }
    }
}

fn fmt_int_poly(c: &[i64], var: &str) -> String {
    let mut out = String::new();
    for (i, &v) in c.iter().enumerate().rev() {
        if v == 0 {
            continue;
        }
        let mag = v.unsigned_abs();
        if out.is_empty() {
            if v < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if v < 0 { " - " } else { " + " });
        }
        match i {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if mag != 1 {
                    out.push_str(&mag.to_string());
                }
                out.push_str(var);
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
    }
    out
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

//! Elements of the field `E` at capped relative precision.
//!
//! A [`PNum`] is `π^val · unit` with the unit known modulo `π^rel`. Values
//! known only to lie in `π^k O` are stored with `rel = 0` and `val = k`; exact
//! zero is separate. Precision is tracked honestly: sums lose relative digits
//! on cancellation, and conversions to `O/π^M` fail when too few digits remain.

use std::fmt;

use super::ring::{El, TruncRing};
use super::FieldDesc;
use crate::error::{Error, Result};

const ZERO_VAL: i64 = i64::MAX / 4;

#[derive(Clone, PartialEq, Eq)]
pub struct PNum {
    val: i64,
    rel: u32,
    unit: El,
}

/// Arithmetic context for [`PNum`] values of one field with relative cap `R`.
#[derive(Clone, Debug)]
pub struct PField {
    ring: TruncRing,
    /// `p/π^e` in `ring`, used to embed integers divisible by `p`.
    p_unit: Option<El>,
    e: i64,
}

impl PField {
    pub fn new(field: &FieldDesc, rel_cap: u32) -> Result<Self> {
        let ring = field.ring(rel_cap)?;
        let (p_unit, e) = match field.e() {
            Some(e) => {
                let big = field.ring(rel_cap + e).map_err(|_| {
                    Error::Precision(format!("relative precision {rel_cap} is too large for {field}"))
                })?;
                let p = big.from_int(field.p() as i64);
                let (r, u) = big.div_pi_pow(&p, e)?;
                debug_assert_eq!(r.precision(), rel_cap);
                (Some(u), e as i64)
            }
            None => (None, 0),
        };
        Ok(PField { ring, p_unit, e })
    }

    pub fn ring(&self) -> &TruncRing {
        &self.ring
    }
    pub fn cap(&self) -> u32 {
        self.ring.precision()
    }

    pub fn zero(&self) -> PNum {
        PNum { val: ZERO_VAL, rel: 0, unit: self.ring.zero() }
    }

    pub fn one(&self) -> PNum {
        PNum { val: 0, rel: self.cap(), unit: self.ring.one() }
    }

    /// `O(π^k)`: an unknown element of `π^k O`.
    pub fn big_o(&self, k: i64) -> PNum {
        PNum { val: k, rel: 0, unit: self.ring.zero() }
    }

    pub fn pi_pow(&self, k: i64) -> PNum {
        PNum { val: k, rel: self.cap(), unit: self.ring.one() }
    }

    pub fn from_int(&self, v: i64) -> PNum {
        if v == 0 {
            return self.zero();
        }
        let p = self.ring.field().p() as i64;
        let (mut m, mut k) = (v, 0i64);
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        match &self.p_unit {
            None if k > 0 => self.zero(),
            None => self.from_unit(0, self.ring.from_int(m), self.cap()),
            Some(pu) => {
                let unit = self.ring.mul(&self.ring.from_int(m), &self.ring.pow(pu, k as u64));
                self.from_unit(k * self.e, unit, self.cap())
            }
        }
    }

    /// An element `π^val · unit` (the unit must be a unit of `O/π^cap`), known to `rel` digits.
    pub fn from_unit(&self, val: i64, unit: El, rel: u32) -> PNum {
        let rel = rel.min(self.cap());
        PNum { val, rel, unit: self.ring.truncate(&unit, rel) }
    }

    /// The element of `O/π^N` as a number known modulo `π^N`.
    pub fn from_integral(&self, src: &TruncRing, a: &El) -> PNum {
        if src.is_zero(a) {
            return self.big_o(src.precision() as i64);
        }
        let v = src.val(a);
        let (r, u) = src.div_pi_pow(a, v).expect("exact by valuation");
        let rel = r.precision().min(self.cap());
        let unit = if r.precision() >= self.cap() {
            self.ring.reduce_from(&r, &u)
        } else {
            self.ring.lift_from(&r, &u)
        };
        self.from_unit(v as i64, unit, rel)
    }

    /// The element of `O` whose canonical representative in `O/π^cap` is `a`,
    /// read as an exact number (its higher digits are zero).
    pub fn from_integral_exact(&self, a: &El) -> PNum {
        if self.ring.is_zero(a) {
            return self.zero();
        }
        let v = self.ring.val(a);
        let (r, u) = self.ring.div_pi_pow(a, v).expect("exact by valuation");
        self.from_unit(v as i64, self.ring.lift_from(&r, &u), self.cap())
    }

    pub fn is_exact_zero(&self, a: &PNum) -> bool {
        a.val == ZERO_VAL
    }

    fn abs_prec(a: &PNum) -> i64 {
        if a.val == ZERO_VAL {
            ZERO_VAL
        } else {
            a.val + a.rel as i64
        }
    }

    pub fn mul(&self, a: &PNum, b: &PNum) -> PNum {
        if a.val == ZERO_VAL || b.val == ZERO_VAL {
            return self.zero();
        }
        let val = a.val + b.val;
        let rel = a.rel.min(b.rel);
        if rel == 0 {
            return self.big_o(val);
        }
        let unit = self.ring.truncate(&self.ring.mul(&a.unit, &b.unit), rel);
        PNum { val, rel, unit }
    }

    pub fn neg(&self, a: &PNum) -> PNum {
        PNum { val: a.val, rel: a.rel, unit: self.ring.truncate(&self.ring.neg(&a.unit), a.rel) }
    }

    pub fn add(&self, a: &PNum, b: &PNum) -> PNum {
        if a.val == ZERO_VAL {
            return b.clone();
        }
        if b.val == ZERO_VAL {
            return a.clone();
        }
        let abs = Self::abs_prec(a).min(Self::abs_prec(b));
        let v = a.val.min(b.val);
        let target = abs - v;
        if target <= 0 {
            return self.big_o(abs);
        }
        let target = target as u32;
        let shifted = |x: &PNum| -> El {
            let s = x.val - v;
            if x.rel == 0 || s >= target as i64 {
                self.ring.zero()
            } else {
                self.ring.mul_pi_pow(&x.unit, s as u32)
            }
        };
        let sum = self.ring.truncate(&self.ring.add(&shifted(a), &shifted(b)), target);
        let w = self.ring.val(&sum).min(target);
        if w >= target {
            return self.big_o(abs);
        }
        let mut unit = sum;
        for _ in 0..w {
            unit = self.ring.div_pi_unchecked(&unit);
        }
        let rel = target - w;
        PNum { val: v + w as i64, rel, unit: self.ring.truncate(&unit, rel) }
    }

    pub fn sub(&self, a: &PNum, b: &PNum) -> PNum {
        self.add(a, &self.neg(b))
    }

    pub fn inv(&self, a: &PNum) -> Result<PNum> {
        if a.rel == 0 {
            return Err(Error::Precision("cannot invert a number with no known digits".into()));
        }
        let u = self.ring.inv(&a.unit)?;
        Ok(PNum { val: -a.val, rel: a.rel, unit: self.ring.truncate(&u, a.rel) })
    }

    /// Multiplies by `π^k` for any integer `k`.
    pub fn shift(&self, a: &PNum, k: i64) -> PNum {
        if a.val == ZERO_VAL {
            return a.clone();
        }
        PNum { val: a.val + k, rel: a.rel, unit: a.unit.clone() }
    }

    /// Valuation, or `None` for numbers without known digits (including exact zero).
    pub fn valuation(&self, a: &PNum) -> Option<i64> {
        (a.rel > 0).then_some(a.val)
    }

    /// Lower bound on the valuation (`None` for exact zero).
    pub fn val_bound(&self, a: &PNum) -> Option<i64> {
        (a.val != ZERO_VAL).then_some(a.val)
    }

    pub fn abs_precision(&self, a: &PNum) -> Option<i64> {
        (a.val != ZERO_VAL).then(|| Self::abs_prec(a))
    }

    /// Image in `O/π^M`; fails if the number is not integral or not known to `π^M`.
    pub fn to_integral(&self, a: &PNum, target: &TruncRing) -> Result<El> {
        if a.val == ZERO_VAL {
            return Ok(target.zero());
        }
        let m = target.precision() as i64;
        if a.val >= m {
            return Ok(target.zero());
        }
        if a.rel > 0 && a.val < 0 {
            return Err(Error::Integrality(format!("coefficient has valuation {}", a.val)));
        }
        if Self::abs_prec(a) < m {
            return Err(Error::Precision(format!(
                "value known only modulo pi^{}, need pi^{m}",
                Self::abs_prec(a)
            )));
        }
        let need = (m - a.val) as u32;
        let unit = if need <= self.cap() {
            let r = self.ring.at(need)?;
            r.reduce_from(&self.ring, &a.unit)
        } else {
            return Err(Error::Precision(format!("relative cap {} below {need}", self.cap())));
        };
        let r = self.ring.at(need)?;
        let lifted = target.lift_from(&r, &unit);
        Ok(target.mul_pi_pow(&lifted, a.val as u32))
    }

    /// `(valuation, known unit digits)`; `O(π^k)` gives `(k, [])`.
    pub fn parts(&self, a: &PNum) -> (i64, Vec<u32>) {
        if a.val == ZERO_VAL {
            return (0, Vec::new());
        }
        let d = self.ring.digits(&a.unit);
        (a.val, d[..a.rel as usize].to_vec())
    }

    pub fn format(&self, a: &PNum) -> String {
        if a.val == ZERO_VAL {
            return "0".into();
        }
        if a.rel == 0 {
            return format!("O(pi^{})", a.val);
        }
        let d = self.ring.digits(&a.unit);
        format!("pi^{} * {:?}", a.val, &d[..a.rel as usize])
    }
}

impl fmt::Debug for PNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.val == ZERO_VAL {
            write!(f, "0")
        } else {
            write!(f, "pi^{}*{:?}+O(rel {})", self.val, self.unit, self.rel)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_halves() {
        let k = FieldDesc::qp_root(2, 1).unwrap();
        let pf = PField::new(&k, 20).unwrap();
        let half = pf.inv(&pf.from_int(2)).unwrap();
        assert_eq!(pf.valuation(&half), Some(-1));
        let one = pf.mul(&half, &pf.from_int(2));
        let r = k.ring(10).unwrap();
        assert_eq!(pf.to_integral(&one, &r).unwrap(), r.one());
        assert!(matches!(pf.to_integral(&half, &r), Err(Error::Integrality(_))));
        let s = pf.add(&half, &half);
        assert_eq!(pf.to_integral(&s, &r).unwrap(), r.one());
    }

    #[test]
    fn cancellation_loses_digits() {
        let k = FieldDesc::qp_root(3, 1).unwrap();
        let pf = PField::new(&k, 6).unwrap();
        let a = pf.from_int(1);
        let b = pf.from_int(1 + 27);
        let d = pf.sub(&b, &a);
        assert_eq!(pf.valuation(&d), Some(3));
        assert_eq!(pf.abs_precision(&d), Some(6));
        let r = k.ring(7).unwrap();
        assert!(matches!(pf.to_integral(&d, &r), Err(Error::Precision(_))));
        let r = k.ring(6).unwrap();
        assert_eq!(pf.to_integral(&d, &r).unwrap(), r.from_int(27));
    }

    #[test]
    fn ramified_integers() {
        let k = FieldDesc::qp_root(2, 2).unwrap();
        let pf = PField::new(&k, 12).unwrap();
        let six = pf.from_int(6);
        assert_eq!(pf.valuation(&six), Some(2));
        let r = k.ring(8).unwrap();
        assert_eq!(pf.to_integral(&six, &r).unwrap(), r.from_int(6));
        let lk = FieldDesc::laurent_series(2, 1).unwrap();
        let lp = PField::new(&lk, 8).unwrap();
        assert!(lp.is_exact_zero(&lp.from_int(6)));
    }
}

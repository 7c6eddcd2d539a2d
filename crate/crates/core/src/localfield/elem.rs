use std::fmt;

use serde::{Serialize, Serializer};

use super::ring::{El, TruncRing};
use crate::error::{Error, Result};

/// An element of `O/π^N` that carries its ring; binary operations check
/// that both operands share field and precision.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncElem {
    ring: TruncRing,
    el: El,
}

impl TruncElem {
    pub fn new(ring: &TruncRing, el: El) -> Result<Self> {
        if !ring.contains(&el) {
            return Err(Error::Invalid(format!("{el:?} is not a canonical element of {ring:?}")));
        }
        Ok(TruncElem { ring: ring.clone(), el })
    }

    pub(crate) fn from_raw(ring: &TruncRing, el: El) -> Self {
        TruncElem { ring: ring.clone(), el }
    }

    pub fn from_int(ring: &TruncRing, v: i64) -> Self {
        TruncElem::from_raw(ring, ring.from_int(v))
    }

    pub fn pi(ring: &TruncRing) -> Self {
        TruncElem::from_raw(ring, ring.pi())
    }

    pub fn teichmuller(ring: &TruncRing, code: u32) -> Self {
        TruncElem::from_raw(ring, ring.teichmuller(code))
    }

    pub fn from_digits(ring: &TruncRing, digits: &[u32]) -> Result<Self> {
        Ok(TruncElem::from_raw(ring, ring.from_digits(digits)?))
    }

    pub fn ring(&self) -> &TruncRing {
        &self.ring
    }
    pub fn raw(&self) -> &El {
        &self.el
    }
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Mismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TruncElem::from_raw(&self.ring, self.ring.add(&self.el, &other.el)))
    }
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TruncElem::from_raw(&self.ring, self.ring.sub(&self.el, &other.el)))
    }
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TruncElem::from_raw(&self.ring, self.ring.mul(&self.el, &other.el)))
    }
    pub fn neg(&self) -> Self {
        TruncElem::from_raw(&self.ring, self.ring.neg(&self.el))
    }
    pub fn inv(&self) -> Result<Self> {
        Ok(TruncElem::from_raw(&self.ring, self.ring.inv(&self.el)?))
    }
    pub fn pow(&self, e: u64) -> Self {
        TruncElem::from_raw(&self.ring, self.ring.pow(&self.el, e))
    }
    pub fn val(&self) -> u32 {
        self.ring.val(&self.el)
    }
    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.el)
    }

    /// Canonical surjection to `O/π^m`, `m ≤ N`.
    pub fn reduce(&self, m: u32) -> Result<Self> {
        if m > self.precision() {
            return Err(Error::Mismatch(format!(
                "cannot reduce precision {} to the larger {m}",
                self.precision()
            )));
        }
        let target = self.ring.at(m)?;
        let el = target.reduce_from(&self.ring, &self.el);
        Ok(TruncElem::from_raw(&target, el))
    }

    /// Exact division by `π^j`, lowering the precision by `j`.
    pub fn div_pi(&self, j: u32) -> Result<Self> {
        let (ring, el) = self.ring.div_pi_pow(&self.el, j)?;
        Ok(TruncElem::from_raw(&ring, el))
    }

    pub fn digits(&self) -> Vec<u32> {
        self.ring.digits(&self.el)
    }
}

impl fmt::Debug for TruncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod pi^{})", self.digits(), self.precision())
    }
}

/// Elements serialize as their digit lists, low degree first.
impl Serialize for TruncElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.digits().serialize(s)
    }
}

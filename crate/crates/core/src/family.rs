//! Eventually constant data over the one-point compactification `ℕ ∪ {∞}`.
//!
//! A [`Family`] is a tail value (taken at `∞` and at all but finitely many
//! naturals) plus finitely many exceptions. Clopen subsets are finite sets of
//! naturals or their complements, the latter always containing `∞`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Nat(u64),
    Infinity,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Nat(i) => write!(f, "{i}"),
            Index::Infinity => write!(f, "inf"),
        }
    }
}

/// A clopen subset of `ℕ ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clopen {
    /// A finite set of naturals.
    Finite(BTreeSet<u64>),
    /// The complement of a finite set of naturals (contains `∞`).
    Cofinite(BTreeSet<u64>),
}

impl Clopen {
    pub fn finite(items: impl IntoIterator<Item = u64>) -> Self {
        Clopen::Finite(items.into_iter().collect())
    }
    pub fn cofinite(missing: impl IntoIterator<Item = u64>) -> Self {
        Clopen::Cofinite(missing.into_iter().collect())
    }
    pub fn everything() -> Self {
        Clopen::Cofinite(BTreeSet::new())
    }

    pub fn contains(&self, i: Index) -> bool {
        match (self, i) {
            (Clopen::Finite(s), Index::Nat(n)) => s.contains(&n),
            (Clopen::Finite(_), Index::Infinity) => false,
            (Clopen::Cofinite(s), Index::Nat(n)) => !s.contains(&n),
            (Clopen::Cofinite(_), Index::Infinity) => true,
        }
    }

    pub fn complement(&self) -> Clopen {
        match self {
            Clopen::Finite(s) => Clopen::Cofinite(s.clone()),
            Clopen::Cofinite(s) => Clopen::Finite(s.clone()),
        }
    }

    fn mentioned(&self) -> &BTreeSet<u64> {
        match self {
            Clopen::Finite(s) | Clopen::Cofinite(s) => s,
        }
    }
}

/// An eventually constant function `ℕ ∪ {∞} → V` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily<V>", bound(deserialize = "V: Deserialize<'de> + Clone + PartialEq"))]
pub struct Family<V> {
    tail: V,
    exceptions: BTreeMap<u64, V>,
}

#[derive(Deserialize)]
struct RawFamily<V> {
    tail: V,
    #[serde(default = "BTreeMap::new")]
    exceptions: BTreeMap<u64, V>,
}

impl<V: Clone + PartialEq> TryFrom<RawFamily<V>> for Family<V> {
    type Error = Error;
    fn try_from(raw: RawFamily<V>) -> Result<Self> {
        Ok(Family::from_parts(raw.tail, raw.exceptions))
    }
}

impl<V: Clone + PartialEq> Family<V> {
    pub fn constant(tail: V) -> Self {
        Family { tail, exceptions: BTreeMap::new() }
    }

    fn from_parts(tail: V, exceptions: BTreeMap<u64, V>) -> Self {
        let exceptions = exceptions.into_iter().filter(|(_, v)| *v != tail).collect();
        Family { tail, exceptions }
    }

    /// Builds a family in canonical form; an exception at `∞` is rejected
    /// because the value there is the tail by definition.
    pub fn make(tail: V, exceptions: impl IntoIterator<Item = (Index, V)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, v) in exceptions {
            match i {
                Index::Infinity => {
                    return Err(Error::Family("the value at infinity is the tail; it cannot be an exception".into()))
                }
                Index::Nat(n) => {
                    if map.insert(n, v).is_some() {
                        return Err(Error::Family(format!("duplicate exception at {n}")));
                    }
                }
            }
        }
        Ok(Family::from_parts(tail, map))
    }

    pub fn tail(&self) -> &V {
        &self.tail
    }
    pub fn exceptions(&self) -> &BTreeMap<u64, V> {
        &self.exceptions
    }

    pub fn stalk(&self, i: Index) -> &V {
        match i {
            Index::Nat(n) => self.exceptions.get(&n).unwrap_or(&self.tail),
            Index::Infinity => &self.tail,
        }
    }

    pub fn map<W: Clone + PartialEq>(&self, mut f: impl FnMut(&V) -> W) -> Family<W> {
        let tail = f(&self.tail);
        let exceptions = self.exceptions.iter().map(|(&k, v)| (k, f(v))).collect();
        Family::from_parts(tail, exceptions)
    }

    pub fn zip_with<W, U>(&self, other: &Family<W>, mut f: impl FnMut(&V, &W) -> U) -> Family<U>
    where
        W: Clone + PartialEq,
        U: Clone + PartialEq,
    {
        let keys: BTreeSet<u64> = self.exceptions.keys().chain(other.exceptions.keys()).copied().collect();
        let tail = f(&self.tail, &other.tail);
        let exceptions = keys
            .into_iter()
            .map(|k| (k, f(self.stalk(Index::Nat(k)), other.stalk(Index::Nat(k)))))
            .collect();
        Family::from_parts(tail, exceptions)
    }

    /// Glues families given on a clopen cover. Pieces may overlap only where
    /// they agree; every point must be covered.
    pub fn glue(cover: &[(Clopen, Family<V>)]) -> Result<Self> {
        let mut keys = BTreeSet::new();
        for (set, fam) in cover {
            keys.extend(set.mentioned().iter().copied());
            keys.extend(fam.exceptions.keys().copied());
        }
        // one natural beyond every mentioned key stands for all remaining points and ∞
        let generic = keys.iter().next_back().map_or(0, |&k| k + 1);
        let value_at = |i: u64, stand_in: Index| -> Result<V> {
            let mut found: Option<&V> = None;
            for (set, fam) in cover {
                if set.contains(Index::Nat(i)) {
                    let v = fam.stalk(stand_in);
                    match found {
                        Some(prev) if prev != v => {
                            return Err(Error::Family(format!("pieces disagree at {}", stand_in)))
                        }
                        _ => found = Some(v),
                    }
                }
            }
            found.cloned().ok_or_else(|| Error::Family(format!("point {stand_in} is not covered")))
        };
        let tail = value_at(generic, Index::Infinity)?;
        let mut exceptions = BTreeMap::new();
        for &k in &keys {
            exceptions.insert(k, value_at(k, Index::Nat(k))?);
        }
        Ok(Family::from_parts(tail, exceptions))
    }

    /// The pair `(set, self)` for use in [`glue`](Self::glue).
    pub fn restrict(&self, set: Clopen) -> (Clopen, Family<V>) {
        (set, self.clone())
    }

    /// Naturals at which the value differs from the tail.
    pub fn exceptional_indices(&self) -> Vec<u64> {
        self.exceptions.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let f = Family::make(5, [(Index::Nat(3), 5)]).unwrap();
        assert!(f.exceptions().is_empty());
        assert_eq!(f, Family::constant(5));
        assert!(Family::make(1, [(Index::Infinity, 2)]).is_err());
    }

    #[test]
    fn evaluation() {
        let f = Family::make(1, [(Index::Nat(0), 7), (Index::Nat(2), 9)]).unwrap();
        assert_eq!(*f.stalk(Index::Nat(1)), 1);
        assert_eq!(*f.stalk(Index::Nat(0)), 7);
        assert_eq!(*f.stalk(Index::Infinity), 1);
    }

    #[test]
    fn glue_two_pieces() {
        let cover = vec![
            (Clopen::finite([0, 1]), Family::constant(2)),
            (Clopen::cofinite([0, 1]), Family::constant(3)),
        ];
        let g = Family::glue(&cover).unwrap();
        assert_eq!(g, Family::make(3, [(Index::Nat(0), 2), (Index::Nat(1), 2)]).unwrap());
    }

    #[test]
    fn glue_errors() {
        let gap = vec![(Clopen::finite([0]), Family::constant(1)), (Clopen::cofinite([0, 1]), Family::constant(1))];
        assert!(Family::glue(&gap).is_err());
        let clash = vec![(Clopen::finite([0, 1]), Family::constant(1)), (Clopen::cofinite([0]), Family::constant(2))];
        assert!(Family::glue(&clash).is_err());
        let agree = vec![(Clopen::finite([0, 1]), Family::constant(1)), (Clopen::cofinite([0]), Family::constant(1))];
        assert_eq!(Family::glue(&agree).unwrap(), Family::constant(1));
    }

    #[test]
    fn json_shape() {
        let f = Family::make(1, [(Index::Nat(4), 2)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"tail":1,"exceptions":{"4":2}}"#);
        let back: Family<i32> = serde_json::from_str(r#"{"tail":1,"exceptions":{"4":2,"5":1}}"#).unwrap();
        assert_eq!(back, f);
    }
}

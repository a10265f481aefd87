//! Subsets of a finite ground set.
//!
//! Universes of up to 64 elements are stored as a bitmask; larger ones as a
//! sorted, deduplicated index list. The representation is a function of the
//! universe size alone, so derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest universe that uses the bitmask representation.
pub const MASK_LIMIT: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Mask(u64),
    List(Vec<usize>),
}

/// A set of element indices drawn from `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    universe: usize,
    repr: Repr,
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        let repr = if universe <= MASK_LIMIT {
            Repr::Mask(0)
        } else {
            Repr::List(Vec::new())
        };
        Subset { universe, repr }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Subset::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I>(universe: usize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Subset::empty(universe);
        for i in indices {
            if i >= universe {
                return Err(Error::ElementOutOfRange {
                    index: i,
                    size: universe,
                });
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Builds a subset from a bitmask. Bits at or above `universe` are ignored.
    ///
    /// # Panics
    ///
    /// Panics if `universe > 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= MASK_LIMIT, "bitmask subsets need universe <= 64");
        let keep = if universe == 64 {
            u64::MAX
        } else {
            (1u64 << universe) - 1
        };
        Subset {
            universe,
            repr: Repr::Mask(mask & keep),
        }
    }

    pub fn singleton(universe: usize, index: usize) -> Result<Self> {
        Subset::from_indices(universe, [index])
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// The bitmask, when the universe is small enough to have one.
    pub fn as_mask(&self) -> Option<u64> {
        match self.repr {
            Repr::Mask(m) => Some(m),
            Repr::List(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Mask(m) => m.count_ones() as usize,
            Repr::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when `1 <= |S| <= universe - 1`.
    pub fn is_proper_nonempty(&self) -> bool {
        let k = self.len();
        k >= 1 && k < self.universe
    }

    pub fn contains(&self, index: usize) -> bool {
        match &self.repr {
            Repr::Mask(m) => index < 64 && (m >> index) & 1 == 1,
            Repr::List(v) => v.binary_search(&index).is_ok(),
        }
    }

    /// Inserts `index`; returns whether it was newly added.
    ///
    /// # Panics
    ///
    /// Panics if `index` is outside the universe.
    pub fn insert(&mut self, index: usize) -> bool {
        assert!(index < self.universe, "index {index} outside universe {}", self.universe);
        match &mut self.repr {
            Repr::Mask(m) => {
                let bit = 1u64 << index;
                let fresh = *m & bit == 0;
                *m |= bit;
                fresh
            }
            Repr::List(v) => match v.binary_search(&index) {
                Ok(_) => false,
                Err(pos) => {
                    v.insert(pos, index);
                    true
                }
            },
        }
    }

    pub fn remove(&mut self, index: usize) -> bool {
        match &mut self.repr {
            Repr::Mask(m) => {
                if index >= 64 {
                    return false;
                }
                let bit = 1u64 << index;
                let present = *m & bit != 0;
                *m &= !bit;
                present
            }
            Repr::List(v) => match v.binary_search(&index) {
                Ok(pos) => {
                    v.remove(pos);
                    true
                }
                Err(_) => false,
            },
        }
    }

    pub fn iter(&self) -> Iter<'_> {
        match &self.repr {
            Repr::Mask(m) => Iter::Mask(*m),
            Repr::List(v) => Iter::List(v.iter()),
        }
    }

    /// Indices of the universe not in this subset, ascending.
    pub fn complement(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| !self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.universe, other.universe);
        match (&self.repr, &other.repr) {
            (Repr::Mask(a), Repr::Mask(b)) => Subset {
                universe: self.universe,
                repr: Repr::Mask(a & b),
            },
            _ => Subset {
                universe: self.universe,
                repr: Repr::List(self.iter().filter(|&i| other.contains(i)).collect()),
            },
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.universe, other.universe);
        match (&self.repr, &other.repr) {
            (Repr::Mask(a), Repr::Mask(b)) => Subset {
                universe: self.universe,
                repr: Repr::Mask(a | b),
            },
            _ => {
                let mut out = self.clone();
                for i in other.iter() {
                    out.insert(i);
                }
                out
            }
        }
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Mask(a), Repr::Mask(b)) => a & !b == 0,
            _ => self.iter().all(|i| other.contains(i)),
        }
    }

    pub fn is_strict_subset(&self, other: &Subset) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Mask(a), Repr::Mask(b)) => a & b == 0,
            _ => self.iter().all(|i| !other.contains(i)),
        }
    }
}

/// Orders by cardinality, then lexicographically by ascending members.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Ascending iterator over subset members.
pub enum Iter<'a> {
    Mask(u64),
    List(std::slice::Iter<'a, usize>),
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            Iter::Mask(m) => {
                if *m == 0 {
                    None
                } else {
                    let i = m.trailing_zeros() as usize;
                    *m &= *m - 1;
                    Some(i)
                }
            }
            Iter::List(it) => it.next().copied(),
        }
    }
}

impl<'a> IntoIterator for &'a Subset {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

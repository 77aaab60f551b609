use std::fmt;

use super::bits::{words_for, StateSet};
use super::KripkeError;

/// A binary relation on `0..size`, stored as a dense bit matrix (one bit row per state).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        let stride = words_for(size);
        Relation {
            size,
            stride,
            bits: vec![0; stride * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut r = Relation::empty(size);
        for x in 0..size {
            r.insert(x, x);
        }
        r
    }

    pub fn full(size: usize) -> Self {
        let mut r = Relation::empty(size);
        for x in 0..size {
            for y in 0..size {
                r.insert(x, y);
            }
        }
        r
    }

    pub fn from_pairs<I>(size: usize, pairs: I) -> Result<Self, KripkeError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Relation::empty(size);
        for (x, y) in pairs {
            for s in [x, y] {
                if s >= size {
                    return Err(KripkeError::StateOutOfRange { state: s, size });
                }
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// Bit `x * size + y` of `mask` encodes the pair `(x, y)`; needs `size * size <= 64`.
    pub fn from_mask(size: usize, mask: u64) -> Self {
        assert!(size * size <= 64, "mask form needs size * size <= 64");
        let mut r = Relation::empty(size);
        for x in 0..size {
            for y in 0..size {
                if mask >> (x * size + y) & 1 == 1 {
                    r.insert(x, y);
                }
            }
        }
        r
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.size * self.size <= 64, "mask form needs size * size <= 64");
        self.pairs()
            .fold(0, |m, (x, y)| m | 1 << (x * self.size + y))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.stride..(x + 1) * self.stride]
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.size && y < self.size && self.row(x)[y / 64] >> (y % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        assert!(x < self.size && y < self.size, "pair ({x},{y}) outside relation of size {}", self.size);
        let stride = self.stride;
        self.bits[x * stride + y / 64] |= 1 << (y % 64);
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        if x < self.size && y < self.size {
            let stride = self.stride;
            self.bits[x * stride + y / 64] &= !(1 << (y % 64));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |x| (0..self.size).filter(move |&y| self.contains(x, y)).map(move |y| (x, y)))
    }

    /// `{y | x R y}`.
    pub fn successors(&self, x: usize) -> StateSet {
        StateSet::from_words(self.size, self.row(x).to_vec())
    }

    /// `{x | x R y}`.
    pub fn predecessors(&self, y: usize) -> StateSet {
        StateSet::from_states(self.size, (0..self.size).filter(|&x| self.contains(x, y)))
    }

    fn check_size(&self, other: &Relation) -> Result<(), KripkeError> {
        if self.size != other.size {
            return Err(KripkeError::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }

    /// `self ; other`: `(x, z)` iff some `y` has `x self y` and `y other z`.
    pub fn compose(&self, other: &Relation) -> Result<Relation, KripkeError> {
        self.check_size(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.size);
        for x in 0..self.size {
            for y in self.successors(x).iter() {
                let stride = self.stride;
                let (src, dst) = (&other.bits[y * stride..(y + 1) * stride], x * stride);
                for (i, w) in src.iter().enumerate() {
                    out.bits[dst + i] |= w;
                }
            }
        }
        out
    }

    pub fn converse(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for (x, y) in self.pairs() {
            out.insert(y, x);
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, KripkeError> {
        self.check_size(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Ok(Relation {
            size: self.size,
            stride: self.stride,
            bits,
        })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.size == other.size && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Smallest transitive superset, by squaring `R ∪ R;R` to a fixpoint.
    pub fn transitive_closure(&self) -> Relation {
        let mut cur = self.clone();
        loop {
            let sq = cur.compose_unchecked(&cur);
            if sq.is_subset(&cur) {
                return cur;
            }
            cur = cur.union(&sq).expect("same size");
        }
    }

    pub fn reflexive_transitive_closure(&self) -> Relation {
        self.union(&Relation::identity(self.size))
            .expect("same size")
            .transitive_closure()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|x| self.contains(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose_unchecked(self).is_subset(self)
    }

    /// Forward image `{v | ∃u ∈ set. u R v}`.
    pub fn image(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.size);
        for x in set.iter() {
            out.union_with(self.row(x));
        }
        out
    }

    /// `{u | ∃v ∈ set. u R v}`.
    pub fn preimage(&self, set: &StateSet) -> StateSet {
        StateSet::from_states(
            self.size,
            (0..self.size).filter(|&x| set.intersects_words(self.row(x))),
        )
    }

    /// `{u | ∀v. u R v ⇒ v ∈ set}`.
    pub fn universal_preimage(&self, set: &StateSet) -> StateSet {
        StateSet::from_states(
            self.size,
            (0..self.size).filter(|&x| set.contains_words(self.row(x))),
        )
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

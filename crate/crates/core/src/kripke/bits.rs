use std::fmt;

const WORD: usize = 64;

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of the states `0..universe` of a finite frame.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    universe: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = StateSet::empty(universe);
        for w in &mut s.words {
            *w = !0;
        }
        s.trim();
        s
    }

    /// Panics if a state is out of range.
    pub fn from_states<I: IntoIterator<Item = usize>>(universe: usize, states: I) -> Self {
        let mut s = StateSet::empty(universe);
        for x in states {
            s.insert(x);
        }
        s
    }

    /// The low `universe` bits of `mask`, for universes of at most 64 states.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask form needs a universe of at most 64 states");
        let mut s = StateSet::empty(universe);
        if universe > 0 {
            s.words[0] = mask;
            s.trim();
        }
        s
    }

    pub(crate) fn from_words(universe: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(universe));
        let mut s = StateSet { universe, words };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the ambient universe (not the number of members).
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.universe, "state {x} outside universe of {}", self.universe);
        self.words[x / WORD] |= 1 << (x % WORD);
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.universe {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + b)
                }
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn zip_with(&self, other: &StateSet, f: impl Fn(u64, u64) -> u64) -> StateSet {
        assert_eq!(self.universe, other.universe, "state sets over different universes");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        StateSet::from_words(self.universe, words)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> StateSet {
        let words = self.words.iter().map(|w| !w).collect();
        StateSet::from_words(self.universe, words)
    }

    pub fn union_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.universe == other.universe
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn intersects_words(&self, other: &[u64]) -> bool {
        self.words.iter().zip(other).any(|(a, b)| a & b != 0)
    }

    pub(crate) fn contains_words(&self, other: &[u64]) -> bool {
        self.words.iter().zip(other).all(|(a, b)| b & !a == 0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

//! Exhaustive enumeration of small H-frames and bounded countermodel search.
//!
//! Frames come out in a fixed order: by size, then by preorder `H` (ascending
//! off-diagonal bitmask), then by stable `R` (ascending bitmask, bit
//! `x * n + y` for the pair `(x, y)`). The size is capped at 8 so that a
//! relation fits in one `u64`; anything past 4 is far beyond practical reach.

use crate::correspondence::{check_inclusion, resolve_spec, CorrespondenceError, InclusionSpec};
use crate::formula::Formula;
use crate::kripke::{HFrame, HModel, Relation};
use crate::semantics::{satisfies, valid_in_frame, FrameValidity};

pub const MAX_FRAME_SIZE: usize = 8;

/// All preorders on `0..n`, identity first.
pub fn enumerate_preorders(n: usize) -> Vec<Relation> {
    assert!((1..=MAX_FRAME_SIZE).contains(&n), "frame size must be in 1..={MAX_FRAME_SIZE}");
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let id = (0..n).fold(0u64, |m, x| m | 1 << (x * n + x));
    (0u64..1 << off.len())
        .map(|sub| {
            off.iter()
                .enumerate()
                .filter(|(i, _)| sub >> i & 1 == 1)
                .fold(id, |m, (_, &(x, y))| m | 1 << (x * n + y))
        })
        .filter(|&m| is_transitive_mask(n, m))
        .map(|m| Relation::from_mask(n, m))
        .collect()
}

fn is_transitive_mask(n: usize, m: u64) -> bool {
    let row = |x: usize| (m >> (x * n)) & ((1u64 << n) - 1);
    (0..n).all(|x| {
        let r = row(x);
        (0..n).filter(|&y| r >> y & 1 == 1).all(|y| row(y) & !r == 0)
    })
}

/// `up[x * n + y]` is the set of pairs `(x', y')` with `x' H x` and `y H y'`;
/// `R` is stable iff it contains `up[b]` for each of its bits `b`.
fn upward_masks(h: &Relation) -> Vec<u64> {
    let n = h.size();
    let mut up = vec![0u64; n * n];
    for x in 0..n {
        for y in 0..n {
            for x2 in (0..n).filter(|&x2| h.contains(x2, x)) {
                for y2 in (0..n).filter(|&y2| h.contains(y, y2)) {
                    up[x * n + y] |= 1 << (x2 * n + y2);
                }
            }
        }
    }
    up
}

/// All relations `R` with `H;R;H ⊆ R`, ascending by bitmask.
pub fn stable_relations(h: &Relation) -> Vec<Relation> {
    stable_masks(h)
        .into_iter()
        .map(|m| Relation::from_mask(h.size(), m))
        .collect()
}

fn stable_masks(h: &Relation) -> Vec<u64> {
    let n = h.size();
    assert!(n * n <= 64, "frame size must be at most {MAX_FRAME_SIZE}");
    let up = upward_masks(h);
    let total: u64 = if n * n == 64 { u64::MAX } else { (1u64 << (n * n)) - 1 };
    let mut out = vec![];
    let mut m: u64 = 0;
    loop {
        let mut bits = m;
        let mut ok = true;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            if up[b] & !m != 0 {
                ok = false;
                break;
            }
            bits &= bits - 1;
        }
        if ok {
            out.push(m);
        }
        if m == total {
            break;
        }
        m += 1;
    }
    out
}

/// Streams every H-frame of size `1..=n` in the canonical order.
pub fn enumerate_frames(n: usize) -> FrameIter {
    FrameIter {
        max: n,
        size: 0,
        preorders: vec![],
        next_h: 0,
        h: None,
        rs: vec![],
        next_r: 0,
    }
}

pub struct FrameIter {
    max: usize,
    size: usize,
    preorders: Vec<Relation>,
    next_h: usize,
    h: Option<Relation>,
    rs: Vec<u64>,
    next_r: usize,
}

impl Iterator for FrameIter {
    type Item = HFrame;

    fn next(&mut self) -> Option<HFrame> {
        loop {
            if let Some(h) = &self.h {
                if let Some(&m) = self.rs.get(self.next_r) {
                    self.next_r += 1;
                    let r = Relation::from_mask(self.size, m);
                    return Some(HFrame::from_parts_unchecked(h.clone(), r));
                }
            }
            if let Some(h) = self.preorders.get(self.next_h) {
                self.rs = stable_masks(h);
                self.next_r = 0;
                self.h = Some(h.clone());
                self.next_h += 1;
                continue;
            }
            if self.size >= self.max {
                return None;
            }
            self.size += 1;
            self.preorders = enumerate_preorders(self.size);
            self.next_h = 0;
            self.h = None;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    CountermodelFound {
        model: HModel,
        state: usize,
        /// Frames scanned before and including the refuting one.
        frames_checked: usize,
    },
    /// Not a validity proof: only frames up to `bound` were inspected.
    NoCountermodelUpToBound { bound: usize, frames_checked: usize },
}

impl SearchVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchVerdict::CountermodelFound { .. })
    }

    pub fn frames_checked(&self) -> usize {
        match self {
            SearchVerdict::CountermodelFound { frames_checked, .. }
            | SearchVerdict::NoCountermodelUpToBound { frames_checked, .. } => *frames_checked,
        }
    }
}

/// Scans frames up to `bound` satisfying every inclusion in `sigma` and
/// returns the first model and state falsifying `f`.
pub fn find_countermodel(f: &Formula, bound: usize, sigma: &[InclusionSpec]) -> SearchVerdict {
    find_countermodel_where(f, bound, |fr| sigma.iter().all(|s| check_inclusion(fr, s)))
}

/// [`find_countermodel`] with an arbitrary frame filter.
pub fn find_countermodel_where<P>(f: &Formula, bound: usize, mut keep: P) -> SearchVerdict
where
    P: FnMut(&HFrame) -> bool,
{
    let mut frames_checked = 0;
    for fr in enumerate_frames(bound) {
        if !keep(&fr) {
            continue;
        }
        frames_checked += 1;
        if let FrameValidity::Counterexample(c) = valid_in_frame(&fr, f) {
            let model = HModel::new(fr, c.valuation).expect("enumerated valuations are H-sets");
            debug_assert!(!satisfies(&model, c.state, f).expect("state in range"));
            return SearchVerdict::CountermodelFound {
                model,
                state: c.state,
                frames_checked,
            };
        }
    }
    SearchVerdict::NoCountermodelUpToBound {
        bound,
        frames_checked,
    }
}

/// Bounded search over the frames satisfying the named conditions; each name
/// is a registry row (`transitive`, `reflexive`, ...) or inclusion text.
pub fn decide_bounded(
    sigma: &[&str],
    f: &Formula,
    bound: usize,
) -> Result<SearchVerdict, CorrespondenceError> {
    let specs = sigma
        .iter()
        .map(|s| resolve_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(find_countermodel(f, bound, &specs))
}

//! Satisfaction, truth sets and validity on finite H-models and H-frames.
//!
//! [`satisfies`] follows the satisfaction clauses state by state.
//! [`truth_set`] computes the same thing bottom-up, one relational image per
//! connective; the two are cross-checked in tests.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Formula, FormulaSet};
use crate::kripke::{HFrame, HModel, Relation, StateSet};

/// The set of states where a formula holds. Always an H-set.
pub type TruthSet = StateSet;

/// An atom-to-H-set assignment.
pub type Valuation = BTreeMap<String, StateSet>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("state {state} outside universe of {size} states")]
    UnknownState { state: usize, size: usize },
}

fn holds(frame: &HFrame, val: &Valuation, u: usize, f: &Formula) -> bool {
    let n = frame.size();
    let h = frame.h();
    let r = frame.r();
    let lc = frame.left_converse();
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(p) => val.get(p).is_some_and(|s| s.contains(u)),
        Formula::And(a, b) => holds(frame, val, u, a) && holds(frame, val, u, b),
        Formula::Or(a, b) => holds(frame, val, u, a) || holds(frame, val, u, b),
        Formula::Imp(a, b) => (0..n)
            .filter(|&v| h.contains(u, v))
            .all(|v| !holds(frame, val, v, a) || holds(frame, val, v, b)),
        Formula::Coimp(a, b) => (0..n)
            .filter(|&v| h.contains(v, u))
            .any(|v| holds(frame, val, v, a) && !holds(frame, val, v, b)),
        Formula::BDia(a) => (0..n)
            .filter(|&v| r.contains(v, u))
            .any(|v| holds(frame, val, v, a)),
        Formula::WBox(a) => (0..n)
            .filter(|&v| r.contains(u, v))
            .all(|v| holds(frame, val, v, a)),
        Formula::WDia(a) => (0..n)
            .filter(|&v| lc.contains(v, u))
            .any(|v| holds(frame, val, v, a)),
        Formula::BBox(a) => (0..n)
            .filter(|&v| lc.contains(u, v))
            .all(|v| holds(frame, val, v, a)),
    }
}

/// `M, u ⊨ f`, by structural recursion on the satisfaction clauses.
pub fn satisfies(m: &HModel, u: usize, f: &Formula) -> Result<bool, SemanticsError> {
    if u >= m.size() {
        return Err(SemanticsError::UnknownState {
            state: u,
            size: m.size(),
        });
    }
    Ok(holds(m.frame(), m.valuation(), u, f))
}

/// Bottom-up truth set of `f` on `frame` under `val`.
pub fn truth_set_in(frame: &HFrame, val: &Valuation, f: &Formula) -> TruthSet {
    let n = frame.size();
    let ts = |x: &Formula| truth_set_in(frame, val, x);
    // {u | ∀v. u rel v ⇒ v ∈ set}
    let all = |rel: &Relation, set: &StateSet| rel.universal_preimage(set);
    match f {
        Formula::Top => StateSet::full(n),
        Formula::Bot => StateSet::empty(n),
        Formula::Atom(p) => val.get(p).cloned().unwrap_or_else(|| StateSet::empty(n)),
        Formula::And(a, b) => ts(a).intersection(&ts(b)),
        Formula::Or(a, b) => ts(a).union(&ts(b)),
        Formula::Imp(a, b) => all(frame.h(), &ts(a).complement().union(&ts(b))),
        Formula::Coimp(a, b) => frame.h().image(&ts(a).difference(&ts(b))),
        Formula::BDia(a) => frame.r().image(&ts(a)),
        Formula::WBox(a) => all(frame.r(), &ts(a)),
        Formula::WDia(a) => frame.left_converse().image(&ts(a)),
        Formula::BBox(a) => all(frame.left_converse(), &ts(a)),
    }
}

/// `⟦f⟧_M`.
pub fn truth_set(m: &HModel, f: &Formula) -> TruthSet {
    truth_set_in(m.frame(), m.valuation(), f)
}

/// `⟦f⟧_M = U`.
pub fn valid_in_model(m: &HModel, f: &Formula) -> bool {
    truth_set(m, f).is_full()
}

/// Enumerates the subsets of `0..n` closed under `h`-successors, in increasing
/// order of their bitmask (state 0 is the least significant bit).
pub fn enumerate_h_sets(h: &Relation) -> Vec<StateSet> {
    let n = h.size();
    let mut out = Vec::new();
    // decide states from the highest index down, "out" before "in"
    let mut chosen: Vec<Option<bool>> = vec![None; n];
    fn go(h: &Relation, k: usize, chosen: &mut Vec<Option<bool>>, out: &mut Vec<StateSet>) {
        let n = h.size();
        if k == 0 {
            out.push(StateSet::from_states(
                n,
                (0..n).filter(|&x| chosen[x] == Some(true)),
            ));
            return;
        }
        let x = k - 1;
        for inside in [false, true] {
            let consistent = (x..n).all(|y| match chosen[y] {
                None => true,
                Some(y_in) => {
                    !(inside && !y_in && h.contains(x, y)) && !(y_in && !inside && h.contains(y, x))
                }
            });
            if consistent {
                chosen[x] = Some(inside);
                go(h, x, chosen, out);
                chosen[x] = None;
            }
        }
    }
    go(h, n, &mut chosen, &mut out);
    out
}

/// Iterates every valuation of `atoms` into `h_sets`, the first atom varying fastest.
pub(crate) struct Valuations<'a> {
    atoms: Vec<String>,
    h_sets: &'a [StateSet],
    digits: Vec<usize>,
    done: bool,
}

impl<'a> Valuations<'a> {
    pub(crate) fn new(atoms: Vec<String>, h_sets: &'a [StateSet]) -> Self {
        let done = h_sets.is_empty() && !atoms.is_empty();
        Valuations {
            digits: vec![0; atoms.len()],
            atoms,
            h_sets,
            done,
        }
    }
}

impl Iterator for Valuations<'_> {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.done {
            return None;
        }
        let val = self
            .atoms
            .iter()
            .zip(&self.digits)
            .map(|(a, &d)| (a.clone(), self.h_sets[d].clone()))
            .collect();
        self.done = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.h_sets.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(val)
    }
}

/// A valuation and a state where a formula fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub valuation: Valuation,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameValidity {
    Valid,
    Counterexample(Counterexample),
}

impl FrameValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, FrameValidity::Valid)
    }
}

/// Checks `f` under every valuation of its own atoms; returns the first failure.
pub fn valid_in_frame(fr: &HFrame, f: &Formula) -> FrameValidity {
    let h_sets = enumerate_h_sets(fr.h());
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    for val in Valuations::new(atoms, &h_sets) {
        let ts = truth_set_in(fr, &val, f);
        if let Some(state) = ts.complement().first() {
            return FrameValidity::Counterexample(Counterexample {
                valuation: val,
                state,
            });
        }
    }
    FrameValidity::Valid
}

/// If every member of `gamma` holds at `u`, so does `f`.
pub fn holds_consequence(
    m: &HModel,
    u: usize,
    gamma: &FormulaSet,
    f: &Formula,
) -> Result<bool, SemanticsError> {
    for g in gamma {
        if !satisfies(m, u, g)? {
            return Ok(true);
        }
    }
    satisfies(m, u, f)
}

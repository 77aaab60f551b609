//! Finite relations, preorders, stable relations and H-models.
//!
//! An H-frame is a nonempty finite universe with a preorder `H` and a relation
//! `R` that is stable (`H;R;H ⊆ R`). Valuations send atoms to H-sets, the
//! subsets closed under H-successors.

mod bits;
mod file;
mod relation;

use std::collections::BTreeMap;

use thiserror::Error;

pub use bits::StateSet;
pub use file::{model_from_json, model_to_file, read_model_file, BuildOptions, Label, ModelFile};
pub use relation::Relation;

use crate::formula::is_atom_name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("relations over {left} and {right} states cannot be combined")]
    SizeMismatch { left: usize, right: usize },
    #[error("state {state} outside universe of {size} states")]
    StateOutOfRange { state: usize, size: usize },
    #[error("universe is empty")]
    EmptyUniverse,
    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown state label `{0}`")]
    UnknownLabel(String),
    #[error("`{0}` is not a valid atom name")]
    BadAtomName(String),
    #[error("H is not a preorder")]
    NotPreorder,
    #[error("R is not stable: {0}")]
    NotStable(StabilityViolation),
    #[error("V({atom}) is not an H-set: {from} is in it and {from} H {to}, but {to} is not")]
    NotHSet {
        atom: String,
        from: String,
        to: String,
    },
    #[error("malformed model file: {0}")]
    Format(String),
}

/// A triple showing `H;R ⊆ R` or `R;H ⊆ R` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityViolation {
    /// `true` for `x H y R z`, `false` for `x R y H z`.
    pub h_first: bool,
    pub triple: (String, String, String),
}

impl std::fmt::Display for StabilityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (x, y, z) = &self.triple;
        if self.h_first {
            write!(f, "{x} H {y} R {z} but not {x} R {z}")
        } else {
            write!(f, "{x} R {y} H {z} but not {x} R {z}")
        }
    }
}

pub fn compose(a: &Relation, b: &Relation) -> Result<Relation, KripkeError> {
    a.compose(b)
}

pub fn converse(r: &Relation) -> Relation {
    r.converse()
}

pub fn transitive_closure(r: &Relation) -> Relation {
    r.transitive_closure()
}

pub fn reflexive_transitive_closure(r: &Relation) -> Relation {
    r.reflexive_transitive_closure()
}

pub fn is_preorder(h: &Relation) -> bool {
    h.is_reflexive() && h.is_transitive()
}

/// `H;R;H ⊆ R`.
pub fn is_stable(h: &Relation, r: &Relation) -> Result<bool, KripkeError> {
    Ok(stability_closure(h, r)?.is_subset(r))
}

fn stability_violation(h: &Relation, r: &Relation) -> Option<(bool, usize, usize, usize)> {
    for (x, y) in h.pairs() {
        for z in r.successors(y).iter() {
            if !r.contains(x, z) {
                return Some((true, x, y, z));
            }
        }
    }
    for (x, y) in r.pairs() {
        for z in h.successors(y).iter() {
            if !r.contains(x, z) {
                return Some((false, x, y, z));
            }
        }
    }
    None
}

/// `H;R;H`, the least stable relation containing `R` when `H` is a preorder.
pub fn stability_closure(h: &Relation, r: &Relation) -> Result<Relation, KripkeError> {
    h.compose(r)?.compose(h)
}

/// Left converse `H;R˘;H` of a stable relation.
pub fn left_converse(h: &Relation, r: &Relation) -> Result<Relation, KripkeError> {
    if !is_preorder(h) {
        return Err(KripkeError::NotPreorder);
    }
    if let Some((h_first, x, y, z)) = stability_violation(h, r) {
        return Err(KripkeError::NotStable(StabilityViolation {
            h_first,
            triple: (x.to_string(), y.to_string(), z.to_string()),
        }));
    }
    Ok(left_converse_unchecked(h, r))
}

pub(crate) fn left_converse_unchecked(h: &Relation, r: &Relation) -> Relation {
    h.compose_unchecked(&r.converse()).compose_unchecked(h)
}

/// Closed under H-successors.
pub fn is_h_set(h: &Relation, x: &StateSet) -> bool {
    h_set_violation(h, x).is_none()
}

fn h_set_violation(h: &Relation, x: &StateSet) -> Option<(usize, usize)> {
    x.iter()
        .find_map(|u| h.successors(u).difference(x).first().map(|v| (u, v)))
}

/// Smallest H-set containing `x` (its H-image, as `H` is reflexive and transitive).
pub fn h_closure(h: &Relation, x: &StateSet) -> StateSet {
    h.image(x).union(x)
}

/// A finite H-frame `(U, H, R)` with state labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HFrame {
    labels: Vec<String>,
    h: Relation,
    r: Relation,
    lc: Relation,
}

impl HFrame {
    /// Validates that the universe is nonempty, `h` is a preorder and `r` is stable.
    pub fn new(labels: Vec<String>, h: Relation, r: Relation) -> Result<Self, KripkeError> {
        if labels.is_empty() {
            return Err(KripkeError::EmptyUniverse);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(KripkeError::DuplicateLabel(l.clone()));
            }
        }
        if h.size() != labels.len() || r.size() != labels.len() {
            return Err(KripkeError::SizeMismatch {
                left: labels.len(),
                right: if h.size() != labels.len() { h.size() } else { r.size() },
            });
        }
        if !is_preorder(&h) {
            return Err(KripkeError::NotPreorder);
        }
        if let Some((h_first, x, y, z)) = stability_violation(&h, &r) {
            return Err(KripkeError::NotStable(StabilityViolation {
                h_first,
                triple: (labels[x].clone(), labels[y].clone(), labels[z].clone()),
            }));
        }
        let lc = left_converse_unchecked(&h, &r);
        Ok(HFrame { labels, h, r, lc })
    }

    /// Frame whose states are labelled `0`, `1`, ...
    pub fn unlabeled(h: Relation, r: Relation) -> Result<Self, KripkeError> {
        let labels = (0..h.size()).map(|i| i.to_string()).collect();
        HFrame::new(labels, h, r)
    }

    pub(crate) fn from_parts_unchecked(h: Relation, r: Relation) -> Self {
        let labels = (0..h.size()).map(|i| i.to_string()).collect();
        let lc = left_converse_unchecked(&h, &r);
        HFrame { labels, h, r, lc }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, state: usize) -> &str {
        &self.labels[state]
    }

    pub fn state(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn h(&self) -> &Relation {
        &self.h
    }

    pub fn r(&self) -> &Relation {
        &self.r
    }

    /// The left converse `⌣R = H;R˘;H`.
    pub fn left_converse(&self) -> &Relation {
        &self.lc
    }
}

/// An H-frame with a valuation sending atoms to H-sets. Atoms without an
/// entry are false everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HModel {
    frame: HFrame,
    valuation: BTreeMap<String, StateSet>,
}

impl HModel {
    pub fn new(frame: HFrame, valuation: BTreeMap<String, StateSet>) -> Result<Self, KripkeError> {
        for (atom, set) in &valuation {
            if !is_atom_name(atom) {
                return Err(KripkeError::BadAtomName(atom.clone()));
            }
            if set.universe() != frame.size() {
                return Err(KripkeError::SizeMismatch {
                    left: frame.size(),
                    right: set.universe(),
                });
            }
            if let Some((u, v)) = h_set_violation(frame.h(), set) {
                return Err(KripkeError::NotHSet {
                    atom: atom.clone(),
                    from: frame.label(u).to_string(),
                    to: frame.label(v).to_string(),
                });
            }
        }
        Ok(HModel { frame, valuation })
    }

    pub fn frame(&self) -> &HFrame {
        &self.frame
    }

    pub fn size(&self) -> usize {
        self.frame.size()
    }

    pub fn valuation(&self) -> &BTreeMap<String, StateSet> {
        &self.valuation
    }

    /// `V(atom)`, empty when the atom is not assigned.
    pub fn value(&self, atom: &str) -> StateSet {
        self.valuation
            .get(atom)
            .cloned()
            .unwrap_or_else(|| StateSet::empty(self.size()))
    }

    pub fn h(&self) -> &Relation {
        self.frame.h()
    }

    pub fn r(&self) -> &Relation {
        self.frame.r()
    }

    pub fn left_converse(&self) -> &Relation {
        self.frame.left_converse()
    }

    pub fn label(&self, state: usize) -> &str {
        self.frame.label(state)
    }

    pub fn state(&self, label: &str) -> Option<usize> {
        self.frame.state(label)
    }

    /// Resolves a list of labels to a state set.
    pub fn states_of(&self, labels: &[&str]) -> Result<StateSet, KripkeError> {
        let mut set = StateSet::empty(self.size());
        for l in labels {
            let s = self
                .state(l)
                .ok_or_else(|| KripkeError::UnknownLabel(l.to_string()))?;
            set.insert(s);
        }
        Ok(set)
    }
}

/// Builds a model from labelled data.
///
/// `H` becomes the reflexive-transitive closure of `h_pairs`. `R` must be
/// stable unless `options.stabilize` is set, in which case `H;R;H` is used.
/// Valuation entries must be H-sets unless `options.h_close` is set.
pub fn build_model(
    universe: &[&str],
    h_pairs: &[(&str, &str)],
    r_pairs: &[(&str, &str)],
    valuation: &BTreeMap<String, Vec<String>>,
    options: BuildOptions,
) -> Result<HModel, KripkeError> {
    if universe.is_empty() {
        return Err(KripkeError::EmptyUniverse);
    }
    let labels: Vec<String> = universe.iter().map(|s| s.to_string()).collect();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(KripkeError::DuplicateLabel(l.clone()));
        }
    }
    let index = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| KripkeError::UnknownLabel(l.to_string()))
    };
    let n = labels.len();
    let resolve = |pairs: &[(&str, &str)]| -> Result<Relation, KripkeError> {
        let mut idx = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx.push((index(a)?, index(b)?));
        }
        Relation::from_pairs(n, idx)
    };
    let h = resolve(h_pairs)?.reflexive_transitive_closure();
    let mut r = resolve(r_pairs)?;
    if options.stabilize {
        r = stability_closure(&h, &r)?;
    }
    let frame = HFrame::new(labels.clone(), h, r)?;
    let mut val = BTreeMap::new();
    for (atom, states) in valuation {
        let mut set = StateSet::empty(n);
        for s in states {
            set.insert(index(s)?);
        }
        if options.h_close {
            set = h_closure(frame.h(), &set);
        }
        val.insert(atom.clone(), set);
    }
    HModel::new(frame, val)
}

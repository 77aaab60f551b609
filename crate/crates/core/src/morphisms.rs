//! Bounded morphisms for the language `L(◇,■)` and truth preservation along them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::{HModel, Relation};
use crate::semantics::{truth_set_in, TruthSet, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("map has {got} entries but the source model has {expected} states")]
    NotTotal { expected: usize, got: usize },
    #[error("state {state} mapped to {target}, outside a target of {size} states")]
    TargetOutOfRange { state: usize, target: usize, size: usize },
    #[error("unknown source label `{0}`")]
    UnknownSource(String),
    #[error("unknown target label `{0}`")]
    UnknownTarget(String),
    #[error("source label `{0}` is not mapped")]
    Unmapped(String),
    #[error("map file: {0}")]
    Format(String),
    #[error("the map is not a bounded morphism: ({0}) fails")]
    NotBoundedMorphism(Condition),
}

/// A total function from source states to target states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMap {
    targets: Vec<usize>,
}

impl StateMap {
    pub fn new(m1: &HModel, m2: &HModel, targets: Vec<usize>) -> Result<Self, MorphismError> {
        if targets.len() != m1.size() {
            return Err(MorphismError::NotTotal {
                expected: m1.size(),
                got: targets.len(),
            });
        }
        if let Some((state, &target)) = targets.iter().enumerate().find(|(_, &t)| t >= m2.size()) {
            return Err(MorphismError::TargetOutOfRange {
                state,
                target,
                size: m2.size(),
            });
        }
        Ok(StateMap { targets })
    }

    /// Builds the map from source-label → target-label pairs; every source state must appear.
    pub fn from_labels(
        m1: &HModel,
        m2: &HModel,
        pairs: &BTreeMap<String, String>,
    ) -> Result<Self, MorphismError> {
        let mut targets = vec![None; m1.size()];
        for (s, t) in pairs {
            let u = m1.state(s).ok_or_else(|| MorphismError::UnknownSource(s.clone()))?;
            let v = m2.state(t).ok_or_else(|| MorphismError::UnknownTarget(t.clone()))?;
            targets[u] = Some(v);
        }
        let targets = targets
            .into_iter()
            .enumerate()
            .map(|(u, t)| t.ok_or_else(|| MorphismError::Unmapped(m1.label(u).to_string())))
            .collect::<Result<_, _>>()?;
        StateMap::new(m1, m2, targets)
    }

    /// Reads a JSON object of source label → target label.
    pub fn from_json(m1: &HModel, m2: &HModel, text: &str) -> Result<Self, MorphismError> {
        let raw: BTreeMap<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| MorphismError::Format(e.to_string()))?;
        let pairs = raw
            .into_iter()
            .map(|(k, v)| match v {
                serde_json::Value::String(s) => Ok((k, s)),
                serde_json::Value::Number(n) => Ok((k, n.to_string())),
                other => Err(MorphismError::Format(format!("bad target {other} for `{k}`"))),
            })
            .collect::<Result<_, _>>()?;
        StateMap::from_labels(m1, m2, &pairs)
    }

    pub fn read(m1: &HModel, m2: &HModel, path: &Path) -> Result<Self, MorphismError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MorphismError::Format(format!("{}: {e}", path.display())))?;
        StateMap::from_json(m1, m2, &text)
    }

    pub fn apply(&self, u: usize) -> usize {
        self.targets[u]
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// The same map with `state` sent to `target` instead.
    pub fn with(&self, state: usize, target: usize) -> StateMap {
        let mut targets = self.targets.clone();
        targets[state] = target;
        StateMap { targets }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    Atom,
    HForth,
    HBack,
    HConverseBack,
    LcForth,
    LcBack,
    LcConverseBack,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::Atom,
        Condition::HForth,
        Condition::HBack,
        Condition::HConverseBack,
        Condition::LcForth,
        Condition::LcBack,
        Condition::LcConverseBack,
    ];
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Atom => "Atom",
            Condition::HForth => "H-forth",
            Condition::HBack => "H-back",
            Condition::HConverseBack => "H˘-back",
            Condition::LcForth => "⌣R-forth",
            Condition::LcBack => "⌣R-back",
            Condition::LcConverseBack => "⌣R˘-back",
        })
    }
}

/// A violating tuple. `source` holds source labels, `target` the target label
/// that has no matching preimage (back conditions) or the image pair that is
/// missing (forth conditions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub source: Vec<String>,
    pub target: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: Condition,
    pub witness: Option<Witness>,
}

impl ConditionResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub conditions: Vec<ConditionResult>,
}

impl MorphismReport {
    pub fn is_bounded_morphism(&self) -> bool {
        self.conditions.iter().all(ConditionResult::passed)
    }

    pub fn first_failure(&self) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| !c.passed())
    }

    pub fn get(&self, c: Condition) -> &ConditionResult {
        self.conditions
            .iter()
            .find(|r| r.condition == c)
            .expect("every condition is reported")
    }
}

fn forth(m1: &HModel, m2: &HModel, f: &StateMap, r1: &Relation, r2: &Relation) -> Option<Witness> {
    r1.pairs()
        .find(|&(u, v)| !r2.contains(f.apply(u), f.apply(v)))
        .map(|(u, v)| Witness {
            source: vec![m1.label(u).into(), m1.label(v).into()],
            target: vec![m2.label(f.apply(u)).into(), m2.label(f.apply(v)).into()],
            atom: None,
        })
}

/// `f(u) r2 v'` must be matched by some `u r1 v` with `f(v) = v'`.
fn back(m1: &HModel, m2: &HModel, f: &StateMap, r1: &Relation, r2: &Relation) -> Option<Witness> {
    (0..m1.size()).find_map(|u| {
        r2.successors(f.apply(u))
            .iter()
            .find(|&w| !r1.successors(u).iter().any(|v| f.apply(v) == w))
            .map(|w| Witness {
                source: vec![m1.label(u).into()],
                target: vec![m2.label(w).into()],
                atom: None,
            })
    })
}

/// Checks the seven conditions; each reports its first violation in
/// ascending state order.
pub fn check_bounded_morphism(m1: &HModel, m2: &HModel, f: &StateMap) -> MorphismReport {
    let atoms: BTreeSet<&String> = m1.valuation().keys().chain(m2.valuation().keys()).collect();
    let atom_witness = (0..m1.size()).find_map(|u| {
        atoms
            .iter()
            .find(|p| m1.value(p).contains(u) != m2.value(p).contains(f.apply(u)))
            .map(|p| Witness {
                source: vec![m1.label(u).into()],
                target: vec![m2.label(f.apply(u)).into()],
                atom: Some((*p).clone()),
            })
    });
    let (h1, h2) = (m1.h(), m2.h());
    let (lc1, lc2) = (m1.left_converse(), m2.left_converse());
    let witnesses = [
        atom_witness,
        forth(m1, m2, f, h1, h2),
        back(m1, m2, f, h1, h2),
        back(m1, m2, f, &h1.converse(), &h2.converse()),
        forth(m1, m2, f, lc1, lc2),
        back(m1, m2, f, lc1, lc2),
        back(m1, m2, f, &lc1.converse(), &lc2.converse()),
    ];
    MorphismReport {
        conditions: Condition::ALL
            .into_iter()
            .zip(witnesses)
            .map(|(condition, witness)| ConditionResult { condition, witness })
            .collect(),
    }
}

/// Every `L(◇,■)` formula over `vars` with depth at most `depth`, shallowest first.
/// The count grows doubly exponentially; depth 2 over one variable is 8193 formulas.
pub fn enumerate_formulas(vars: &[String], depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = [Formula::Top, Formula::Bot]
        .into_iter()
        .chain(vars.iter().map(Formula::atom))
        .collect();
    for _ in 0..depth {
        let prev = all.clone();
        let mut next = [Formula::Top, Formula::Bot]
            .into_iter()
            .chain(vars.iter().map(Formula::atom))
            .collect::<Vec<_>>();
        for a in &prev {
            next.push(Formula::wdia(a.clone()));
            next.push(Formula::bbox(a.clone()));
        }
        for a in &prev {
            for b in &prev {
                next.push(Formula::and(a.clone(), b.clone()));
                next.push(Formula::or(a.clone(), b.clone()));
                next.push(Formula::imp(a.clone(), b.clone()));
                next.push(Formula::coimp(a.clone(), b.clone()));
            }
        }
        all = next;
    }
    all
}

/// Size of [`enumerate_formulas`] without building it.
pub fn count_formulas(vars: usize, depth: usize) -> u128 {
    let base = 2 + vars as u128;
    (0..depth).fold(base, |c, _| base + 2 * c + 4 * c * c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthViolation {
    pub formula: String,
    pub source_state: String,
    pub target_state: String,
    pub holds_in_source: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub vars: Vec<String>,
    pub depth: usize,
    /// Number of formulas the check covers.
    pub formulas: u128,
    /// Distinct (source truth set, target truth set) pairs reached.
    pub classes: usize,
    pub violation: Option<TruthViolation>,
}

impl PreservationReport {
    pub fn preserved(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `M₁,u ⊨ φ ⟺ M₂,f(u) ⊨ φ` for every `L(◇,■)` formula over `vars` of
/// depth at most `depth`, whether or not `f` is a bounded morphism.
///
/// Formulas are explored level by level but only one representative is kept
/// for each pair of truth sets `(⟦φ⟧_{M₁}, ⟦φ⟧_{M₂})`. Connectives act on truth
/// sets, so the pairs reached are exactly those of the full enumeration.
pub fn find_truth_violation(
    m1: &HModel,
    m2: &HModel,
    f: &StateMap,
    vars: &[String],
    depth: usize,
) -> PreservationReport {
    type Key = (TruthSet, TruthSet);
    let eval = |op: &Formula, args: &[&Key]| -> Key {
        let bind = |side: usize| -> Valuation {
            args.iter()
                .enumerate()
                .map(|(i, k)| (format!("x{i}"), if side == 0 { k.0.clone() } else { k.1.clone() }))
                .collect()
        };
        (
            truth_set_in(m1.frame(), &bind(0), op),
            truth_set_in(m2.frame(), &bind(1), op),
        )
    };
    let violates = |k: &Key| (0..m1.size()).find(|&u| k.0.contains(u) != k.1.contains(f.apply(u)));

    let mut seen: HashSet<Key> = HashSet::new();
    let mut reps: Vec<(Formula, Key)> = vec![];
    let mut report = |phi: Formula, key: Key, reps: &mut Vec<(Formula, Key)>| -> Option<TruthViolation> {
        if !seen.insert(key.clone()) {
            return None;
        }
        let bad = violates(&key).map(|u| TruthViolation {
            formula: phi.to_string(),
            source_state: m1.label(u).to_string(),
            target_state: m2.label(f.apply(u)).to_string(),
            holds_in_source: key.0.contains(u),
        });
        reps.push((phi, key));
        bad
    };

    let x0 = Formula::atom("x0");
    let x1 = Formula::atom("x1");
    let unary = [Formula::wdia(x0.clone()), Formula::bbox(x0.clone())];
    let binary = [
        Formula::and(x0.clone(), x1.clone()),
        Formula::or(x0.clone(), x1.clone()),
        Formula::imp(x0.clone(), x1.clone()),
        Formula::coimp(x0, x1),
    ];

    let finish = |violation, reps: &Vec<(Formula, Key)>| PreservationReport {
        vars: vars.to_vec(),
        depth,
        formulas: count_formulas(vars.len(), depth),
        classes: reps.len(),
        violation,
    };

    let base = [Formula::Top, Formula::Bot]
        .into_iter()
        .chain(vars.iter().map(Formula::atom));
    for phi in base {
        let key = (
            truth_set_in(m1.frame(), m1.valuation(), &phi),
            truth_set_in(m2.frame(), m2.valuation(), &phi),
        );
        if let Some(v) = report(phi, key, &mut reps) {
            return finish(Some(v), &reps);
        }
    }
    for _ in 0..depth {
        let prev = reps.clone();
        for (phi, key) in &prev {
            for (op, wrap) in unary.iter().zip([Formula::wdia as fn(Formula) -> Formula, Formula::bbox]) {
                let k = eval(op, &[key]);
                if let Some(v) = report(wrap(phi.clone()), k, &mut reps) {
                    return finish(Some(v), &reps);
                }
            }
        }
        let ctors: [fn(Formula, Formula) -> Formula; 4] =
            [Formula::and, Formula::or, Formula::imp, Formula::coimp];
        for (a, ka) in &prev {
            for (b, kb) in &prev {
                for (op, ctor) in binary.iter().zip(ctors) {
                    let k = eval(op, &[ka, kb]);
                    if let Some(v) = report(ctor(a.clone(), b.clone()), k, &mut reps) {
                        return finish(Some(v), &reps);
                    }
                }
            }
        }
        if reps.len() == prev.len() {
            break;
        }
    }
    finish(None, &reps)
}

/// [`find_truth_violation`] guarded by the bounded-morphism precondition.
pub fn check_truth_preservation(
    m1: &HModel,
    m2: &HModel,
    f: &StateMap,
    vars: &[String],
    depth: usize,
) -> Result<PreservationReport, MorphismError> {
    if let Some(bad) = check_bounded_morphism(m1, m2, f).first_failure() {
        return Err(MorphismError::NotBoundedMorphism(bad.condition));
    }
    Ok(find_truth_violation(m1, m2, f, vars, depth))
}

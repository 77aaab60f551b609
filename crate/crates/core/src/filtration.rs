//! Filtrations of finite H-models through subformula-closed sets.
//!
//! States are identified when they agree on every formula of `Δ`. The finest
//! filtration lifts `H` and `R` to classes, closes the lifted `H` transitively
//! and makes `R` stable as `H⁺;R;H⁺`; the transitive variant additionally
//! closes `R` transitively, which is a filtration when `R` is transitive.
//!
//! Only `⊤ ⊥ ∧ ∨ → ⊐ ◆ □` may occur in `Δ`: the filtration conditions do
//! not speak about `◇`/`■`, so desugar those first.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::correspondence::{check_inclusion, InclusionSpec};
use crate::formula::{Formula, FormulaSet};
use crate::kripke::{HFrame, HModel, KripkeError, Relation, StateSet};
use crate::semantics::truth_set;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("Δ is not closed under subformulas (missing `{0}`)")]
    NotSubformulaClosed(String),
    #[error("`{0}` uses ◇ or ■; desugar it before filtrating")]
    UnsupportedModality(String),
    #[error("R is not transitive")]
    NotTransitive,
    #[error("filtration conditions fail: {0}")]
    ConditionsFailed(String),
    #[error("filtrated structure is not an H-model: {0}")]
    Kripke(#[from] KripkeError),
}

/// Classes of `Δ`-equivalent states, ordered by least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl Partition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, state: usize) -> usize {
        self.class_of[state]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Lifts `r` to classes: `[x] r̲ [y]` iff `x' r y'` for some members.
    pub fn lift(&self, r: &Relation) -> Relation {
        let mut out = Relation::empty(self.len());
        for (x, y) in r.pairs() {
            out.insert(self.class_of[x], self.class_of[y]);
        }
        out
    }
}

fn check_delta(delta: &FormulaSet) -> Result<(), FiltrationError> {
    if let Some(f) = delta.iter().find(|f| !f.is_core()) {
        return Err(FiltrationError::UnsupportedModality(f.to_string()));
    }
    let closure = delta.closure();
    if let Some(missing) = closure.iter().find(|f| !delta.contains(f)) {
        return Err(FiltrationError::NotSubformulaClosed(missing.to_string()));
    }
    Ok(())
}

pub fn equivalence_classes(m: &HModel, delta: &FormulaSet) -> Result<Partition, FiltrationError> {
    check_delta(delta)?;
    let truths: Vec<StateSet> = delta.iter().map(|f| truth_set(m, f)).collect();
    let mut by_vector: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = vec![];
    let mut class_of = vec![0; m.size()];
    for x in 0..m.size() {
        let v: Vec<bool> = truths.iter().map(|t| t.contains(x)).collect();
        let c = *by_vector.entry(v).or_insert_with(|| {
            classes.push(vec![]);
            classes.len() - 1
        });
        classes[c].push(x);
        class_of[x] = c;
    }
    Ok(Partition { classes, class_of })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    Finest,
    Transitive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationResult {
    pub partition: Partition,
    pub model: HModel,
    pub variant: Variant,
}

impl FiltrationResult {
    /// Class label ↦ labels of its members.
    pub fn classes_map(&self, m: &HModel) -> BTreeMap<String, Vec<String>> {
        self.partition
            .classes()
            .iter()
            .enumerate()
            .map(|(c, members)| {
                (
                    self.model.label(c).to_string(),
                    members.iter().map(|&x| m.label(x).to_string()).collect(),
                )
            })
            .collect()
    }
}

fn build(
    m: &HModel,
    delta: &FormulaSet,
    partition: Partition,
    r: Relation,
    h: Relation,
    variant: Variant,
) -> Result<FiltrationResult, FiltrationError> {
    let labels = partition
        .classes()
        .iter()
        .map(|c| m.label(c[0]).to_string())
        .collect();
    let frame = HFrame::new(labels, h, r)?;
    let valuation = delta
        .iter()
        .filter_map(|f| match f {
            Formula::Atom(p) => {
                let set = StateSet::from_states(
                    partition.len(),
                    m.value(p).iter().map(|x| partition.class_of(x)),
                );
                Some((p.clone(), set))
            }
            _ => None,
        })
        .collect();
    let model = HModel::new(frame, valuation)?;
    Ok(FiltrationResult {
        partition,
        model,
        variant,
    })
}

fn lifted(m: &HModel, delta: &FormulaSet) -> Result<(Partition, Relation, Relation), FiltrationError> {
    let partition = equivalence_classes(m, delta)?;
    let h_plus = partition.lift(m.h()).transitive_closure();
    let r = partition.lift(m.r());
    let r_s = h_plus
        .compose(&r)
        .and_then(|x| x.compose(&h_plus))
        .expect("lifted relations share a size");
    Ok((partition, h_plus, r_s))
}

/// `(U_Δ, H̲⁺, H̲⁺;R̲;H̲⁺, V_Δ)`.
pub fn finest_filtration(m: &HModel, delta: &FormulaSet) -> Result<FiltrationResult, FiltrationError> {
    let (partition, h, r) = lifted(m, delta)?;
    build(m, delta, partition, r, h, Variant::Finest)
}

/// The finest filtration with `R` closed transitively; needs a transitive `R`.
pub fn transitive_filtration(m: &HModel, delta: &FormulaSet) -> Result<FiltrationResult, FiltrationError> {
    if !m.r().is_transitive() {
        return Err(FiltrationError::NotTransitive);
    }
    let (partition, h, r) = lifted(m, delta)?;
    build(m, delta, partition, r.transitive_closure(), h, Variant::Transitive)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    /// 1 to 7.
    pub condition: u8,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionsReport {
    pub conditions: Vec<ConditionCheck>,
}

impl ConditionsReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.witness.is_none())
    }

    pub fn failed(&self) -> Vec<u8> {
        self.conditions
            .iter()
            .filter(|c| c.witness.is_some())
            .map(|c| c.condition)
            .collect()
    }
}

/// Checks the seven filtration conditions of `filt` against `m` and `Δ`
/// exhaustively, recording the first violation of each.
pub fn verify_filtration_conditions(
    m: &HModel,
    delta: &FormulaSet,
    filt: &FiltrationResult,
) -> ConditionsReport {
    let n = m.size();
    let md = &filt.model;
    let cls = |x: usize| filt.partition.class_of(x);
    let lab = |x: usize| m.label(x);
    let truths: Vec<(&Formula, StateSet)> = delta.iter().map(|f| (f, truth_set(m, f))).collect();
    let truth = |f: &Formula| -> StateSet {
        truths
            .iter()
            .find(|(g, _)| *g == f)
            .map(|(_, t)| t.clone())
            .unwrap_or_else(|| truth_set(m, f))
    };
    let pairs = || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)));

    // (1) the universe is the set of Δ-classes
    let c1 = match equivalence_classes(m, delta) {
        Err(e) => Some(e.to_string()),
        Ok(p) if md.size() != p.len() => Some(format!("{} classes but {} states", p.len(), md.size())),
        Ok(_) => pairs()
            .find(|&(x, y)| {
                let same = truths.iter().all(|(_, t)| t.contains(x) == t.contains(y));
                same != (cls(x) == cls(y))
            })
            .map(|(x, y)| format!("states {} and {} classified wrongly", lab(x), lab(y))),
    };
    // (2) xHy ⇒ [x]H_Δ[y]
    let c2 = m
        .h()
        .pairs()
        .find(|&(x, y)| !md.h().contains(cls(x), cls(y)))
        .map(|(x, y)| format!("{} H {} not lifted", lab(x), lab(y)));
    // (3) [x]H_Δ[y] and x ⊨ φ ⇒ y ⊨ φ
    let c3 = pairs()
        .filter(|&(x, y)| md.h().contains(cls(x), cls(y)))
        .find_map(|(x, y)| {
            truths
                .iter()
                .find(|(_, t)| t.contains(x) && !t.contains(y))
                .map(|(f, _)| format!("[{}] H [{}] but `{f}` holds at {} only", lab(x), lab(y), lab(x)))
        });
    // (4) xRy ⇒ [x]R_Δ[y]
    let c4 = m
        .r()
        .pairs()
        .find(|&(x, y)| !md.r().contains(cls(x), cls(y)))
        .map(|(x, y)| format!("{} R {} not lifted", lab(x), lab(y)));
    let r_pairs: Vec<(usize, usize)> = pairs().filter(|&(x, y)| md.r().contains(cls(x), cls(y))).collect();
    // (5) □φ ∈ Δ, [x]R_Δ[y], x ⊨ □φ ⇒ y ⊨ φ
    let c5 = truths.iter().find_map(|(f, t)| match f {
        Formula::WBox(phi) => {
            let inner = truth(phi);
            r_pairs
                .iter()
                .find(|&&(x, y)| t.contains(x) && !inner.contains(y))
                .map(|&(x, y)| format!("`{f}` at {} but `{phi}` fails at {}", lab(x), lab(y)))
        }
        _ => None,
    });
    // (6) ◆φ ∈ Δ, [x]R_Δ[y], x ⊨ φ ⇒ y ⊨ ◆φ
    let c6 = truths.iter().find_map(|(f, t)| match f {
        Formula::BDia(phi) => {
            let inner = truth(phi);
            r_pairs
                .iter()
                .find(|&&(x, y)| inner.contains(x) && !t.contains(y))
                .map(|&(x, y)| format!("`{phi}` at {} but `{f}` fails at {}", lab(x), lab(y)))
        }
        _ => None,
    });
    // (7) V_Δ(p) = {[x] | x ∈ V(p)}
    let c7 = delta.iter().find_map(|f| match f {
        Formula::Atom(p) => {
            let expected = StateSet::from_states(md.size(), m.value(p).iter().map(cls));
            (md.value(p) != expected).then(|| format!("valuation of `{p}` differs"))
        }
        _ => None,
    });
    ConditionsReport {
        conditions: [c1, c2, c3, c4, c5, c6, c7]
            .into_iter()
            .zip(1u8..)
            .map(|(witness, condition)| ConditionCheck { condition, witness })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationFailure {
    pub state: String,
    pub formula: String,
    pub holds_in_source: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthReport {
    pub pairs_checked: usize,
    pub failures: Vec<PreservationFailure>,
}

impl TruthReport {
    pub fn preserved(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `M,x ⊨ φ ⟺ M_Δ,[x] ⊨ φ` for every state and every `φ ∈ Δ`; requires
/// the filtration conditions to hold.
pub fn verify_truth_preservation(
    m: &HModel,
    delta: &FormulaSet,
    filt: &FiltrationResult,
) -> Result<TruthReport, FiltrationError> {
    let conditions = verify_filtration_conditions(m, delta, filt);
    if !conditions.all_pass() {
        return Err(FiltrationError::ConditionsFailed(format!("{:?}", conditions.failed())));
    }
    let mut failures = vec![];
    let mut pairs_checked = 0;
    for f in delta {
        let src = truth_set(m, f);
        let dst = truth_set(&filt.model, f);
        for x in 0..m.size() {
            pairs_checked += 1;
            let a = src.contains(x);
            if a != dst.contains(filt.partition.class_of(x)) {
                failures.push(PreservationFailure {
                    state: m.label(x).to_string(),
                    formula: f.to_string(),
                    holds_in_source: a,
                });
            }
        }
    }
    Ok(TruthReport {
        pairs_checked,
        failures,
    })
}

/// First `(x, y) ∈ ⌣R` whose classes are not related by the left converse of
/// the filtrated frame.
pub fn converse_lifting_violation(m: &HModel, filt: &FiltrationResult) -> Option<(usize, usize)> {
    let lc = filt.model.left_converse();
    let cls = |x: usize| filt.partition.class_of(x);
    m.left_converse().pairs().find(|&(x, y)| !lc.contains(cls(x), cls(y)))
}

/// `None` when the source frame does not satisfy `spec`; otherwise whether
/// the filtrated frame does.
pub fn inclusion_transfers(m: &HModel, filt: &FiltrationResult, spec: &InclusionSpec) -> Option<bool> {
    check_inclusion(m.frame(), spec).then(|| check_inclusion(filt.model.frame(), spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::subformula_closure;
    use crate::kripke::build_model;
    use crate::kripke::fixtures::*;
    use crate::parse;

    fn delta(s: &str) -> FormulaSet {
        subformula_closure(&parse(s).unwrap())
    }

    #[test]
    fn classes_of_m1() {
        let p = equivalence_classes(&m1(), &delta("<*>p")).unwrap();
        assert_eq!(p.classes(), &[vec![0], vec![1, 2], vec![3]]);
        let one = equivalence_classes(&m1(), &FormulaSet::new()).unwrap();
        assert_eq!(one.len(), 1);
        let full = build_model(&["a", "b"], &[("a", "b")], &[], &val(&[("p", &["a", "b"])]), Default::default()).unwrap();
        assert_eq!(equivalence_classes(&full, &delta("p")).unwrap().len(), 1);
    }

    #[test]
    fn delta_must_be_closed_and_core() {
        let mut d = FormulaSet::new();
        d.insert(parse("<*>p").unwrap());
        assert!(matches!(
            equivalence_classes(&m1(), &d),
            Err(FiltrationError::NotSubformulaClosed(_))
        ));
        assert!(matches!(
            finest_filtration(&m1(), &delta("<>p")),
            Err(FiltrationError::UnsupportedModality(_))
        ));
    }

    #[test]
    fn finest_on_m1() {
        let m = m1();
        let d = delta("<*>p");
        let filt = finest_filtration(&m, &d).unwrap();
        let md = &filt.model;
        assert_eq!(md.size(), 3);
        assert_eq!(md.frame().labels(), &["0", "1", "3"]);
        assert!(md.h().contains(0, 1));
        assert!(md.h().contains(1, 2));
        assert!(md.h().contains(0, 2));
        assert_eq!(Partition::lift(&filt.partition, m.r()), Relation::from_pairs(3, [(0, 2), (1, 2)]).unwrap());
        assert!(verify_filtration_conditions(&m, &d, &filt).all_pass());
        let tr = verify_truth_preservation(&m, &d, &filt).unwrap();
        assert!(tr.preserved());
        assert_eq!(tr.pairs_checked, 8);
        assert_eq!(converse_lifting_violation(&m, &filt), None);
        let classes = filt.classes_map(&m);
        assert_eq!(classes["1"], vec!["1", "2"]);
    }

    #[test]
    fn collapse_and_no_collapse() {
        let m = m1();
        let filt = finest_filtration(&m, &FormulaSet::new()).unwrap();
        assert_eq!(filt.model.size(), 1);
        assert!(filt.model.r().contains(0, 0));
        // distinct vectors everywhere, H = id: an isomorphic copy
        let m = build_model(
            &["0", "1"],
            &[],
            &[("0", "1")],
            &val(&[("p", &["0"])]),
            Default::default(),
        )
        .unwrap();
        let filt = finest_filtration(&m, &delta("p")).unwrap();
        assert_eq!(filt.model.h(), m.h());
        assert_eq!(filt.model.r(), m.r());
    }

    #[test]
    fn transitive_variant() {
        let chain = build_model(&["0", "1", "2"], &[], &[("0", "1"), ("1", "2")], &val(&[]), Default::default()).unwrap();
        assert!(matches!(
            transitive_filtration(&chain, &delta("p")),
            Err(FiltrationError::NotTransitive)
        ));
        let m = build_model(
            &["0", "1", "2"],
            &[],
            &[("0", "1"), ("1", "2"), ("0", "2")],
            &val(&[("p", &["1"])]),
            Default::default(),
        )
        .unwrap();
        let d = delta("[]<*>p");
        let filt = transitive_filtration(&m, &d).unwrap();
        assert!(filt.model.r().is_transitive());
        assert!(verify_filtration_conditions(&m, &d, &filt).all_pass());
        assert!(verify_truth_preservation(&m, &d, &filt).unwrap().preserved());
        let empty = build_model(&["0", "1"], &[], &[], &val(&[("p", &["1"])]), Default::default()).unwrap();
        let d = delta("p");
        assert_eq!(
            transitive_filtration(&empty, &d).unwrap().model,
            finest_filtration(&empty, &d).unwrap().model
        );
    }

    #[test]
    fn corrupted_h_fails_condition_2() {
        let m = m1();
        let d = delta("<*>p");
        let mut filt = finest_filtration(&m, &d).unwrap();
        let frame = HFrame::new(
            filt.model.frame().labels().to_vec(),
            Relation::identity(3),
            Relation::from_pairs(3, [(0, 2), (1, 2)]).unwrap(),
        )
        .unwrap();
        filt.model = HModel::new(frame, filt.model.valuation().clone()).unwrap();
        let rep = verify_filtration_conditions(&m, &d, &filt);
        assert_eq!(rep.failed(), vec![2]);
        assert!(verify_truth_preservation(&m, &d, &filt).is_err());
    }

    #[test]
    fn inclusion_transfer() {
        let m = m1();
        let filt = finest_filtration(&m, &delta("<*>p")).unwrap();
        let spec: InclusionSpec = "R <= H".parse().unwrap();
        assert_eq!(inclusion_transfers(&m, &filt, &spec), None);
        let spec: InclusionSpec = "R <= R".parse().unwrap();
        assert_eq!(inclusion_transfers(&m, &filt, &spec), Some(true));
    }
}

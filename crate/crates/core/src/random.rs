//! Seeded generators for frames, models and formulas.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::kripke::{h_closure, stability_closure, HFrame, HModel, Relation, StateSet};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each pair independently with probability `density`.
pub fn random_relation<R: Rng>(rng: &mut R, n: usize, density: f64) -> Relation {
    let mut r = Relation::empty(n);
    for x in 0..n {
        for y in 0..n {
            if rng.gen_bool(density) {
                r.insert(x, y);
            }
        }
    }
    r
}

pub fn random_set<R: Rng>(rng: &mut R, n: usize) -> StateSet {
    StateSet::from_states(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

/// Reflexive-transitive closure of a sparse random relation.
pub fn random_preorder<R: Rng>(rng: &mut R, n: usize) -> Relation {
    random_relation(rng, n, 0.2).reflexive_transitive_closure()
}

pub fn random_frame<R: Rng>(rng: &mut R, n: usize) -> HFrame {
    let h = random_preorder(rng, n);
    let density = rng.gen_range(0.05..0.4);
    let r = stability_closure(&h, &random_relation(rng, n, density)).expect("same size");
    HFrame::unlabeled(h, r).expect("closures give an H-frame")
}

/// A frame whose `R` is transitive (the transitive closure of a stable
/// relation stays stable).
pub fn random_transitive_frame<R: Rng>(rng: &mut R, n: usize) -> HFrame {
    let fr = random_frame(rng, n);
    let r = fr.r().transitive_closure();
    HFrame::unlabeled(fr.h().clone(), r).expect("closures give an H-frame")
}

pub fn random_valuation<R: Rng>(rng: &mut R, fr: &HFrame, atoms: &[&str]) -> BTreeMap<String, StateSet> {
    atoms
        .iter()
        .map(|a| (a.to_string(), h_closure(fr.h(), &random_set(rng, fr.size()))))
        .collect()
}

pub fn random_model<R: Rng>(rng: &mut R, n: usize, atoms: &[&str]) -> HModel {
    let fr = random_frame(rng, n);
    let val = random_valuation(rng, &fr, atoms);
    HModel::new(fr, val).expect("H-closed valuation")
}

/// Which connectives [`random_formula`] may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Language {
    /// `⊤ ⊥ ∧ ∨ → ⊐ ◆ □`.
    Core,
    /// `⊤ ⊥ ∧ ∨ → ⊐ ◇ ■`.
    WhiteDiaBlackBox,
    /// All connectives.
    Full,
}

/// A formula of depth at most `depth`; leaves are atoms most of the time.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize, lang: Language) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::atom(*atoms.choose(rng).expect("at least one atom")),
        };
    }
    let unary: &[fn(Formula) -> Formula] = match lang {
        Language::Core => &[Formula::bdia, Formula::wbox],
        Language::WhiteDiaBlackBox => &[Formula::wdia, Formula::bbox],
        Language::Full => &[Formula::bdia, Formula::wbox, Formula::wdia, Formula::bbox],
    };
    let binary: [fn(Formula, Formula) -> Formula; 4] =
        [Formula::and, Formula::or, Formula::imp, Formula::coimp];
    let k = rng.gen_range(0..unary.len() + binary.len());
    if k < unary.len() {
        unary[k](random_formula(rng, atoms, depth - 1, lang))
    } else {
        let l = random_formula(rng, atoms, depth - 1, lang);
        let r = random_formula(rng, atoms, depth - 1, lang);
        binary[k - unary.len()](l, r)
    }
}

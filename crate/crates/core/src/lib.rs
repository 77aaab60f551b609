//! Model checking and proof tools for bi-intuitionistic stable tense logic.
//!
//! Formulas are built from `⊤ ⊥ ∧ ∨ → ⊐` and the modalities `◆ □ ◇ ■`, and
//! are interpreted on finite H-frames: a preorder `H` together with a
//! relation `R` satisfying `H;R;H ⊆ R`.

pub mod formula;
pub mod kripke;
pub mod semantics;
pub mod morphology;
pub mod correspondence;
pub mod morphisms;
pub mod search;
pub mod hilbert;
pub mod filtration;
pub mod random;

pub use formula::{parse, render, Formula, FormulaSet};
pub use kripke::{HFrame, HModel, Relation, StateSet};

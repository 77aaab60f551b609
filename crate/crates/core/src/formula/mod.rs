//! Formula syntax for the bi-intuitionistic tense language.
//!
//! The AST carries the four modalities as primitive nodes. `◇` and `■` are
//! also definable from `◆`/`□` (see [`desugar`]), and both forms are kept so
//! the equivalence can be tested rather than assumed.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parse::{parse, ParseError};

/// A formula of the language with `⊤ ⊥ ∧ ∨ → ⊐` and `◆ □ ◇ ■`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    /// Coimplication `φ ⊐ ψ`, true where some H-predecessor has φ but not ψ.
    Coimp(Box<Formula>, Box<Formula>),
    /// Black diamond `◆`, looks back along R.
    BDia(Box<Formula>),
    /// White box `□`, looks forward along R.
    WBox(Box<Formula>),
    /// White diamond `◇`, looks back along the left converse.
    WDia(Box<Formula>),
    /// Black box `■`, looks forward along the left converse.
    BBox(Box<Formula>),
}

/// True when `name` is a legal atom identifier: `[a-z][A-Za-z0-9_]*`.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn coimp(l: Formula, r: Formula) -> Formula {
        Formula::Coimp(Box::new(l), Box::new(r))
    }

    pub fn bdia(f: Formula) -> Formula {
        Formula::BDia(Box::new(f))
    }

    pub fn wbox(f: Formula) -> Formula {
        Formula::WBox(Box::new(f))
    }

    pub fn wdia(f: Formula) -> Formula {
        Formula::WDia(Box::new(f))
    }

    pub fn bbox(f: Formula) -> Formula {
        Formula::BBox(Box::new(f))
    }

    /// Intuitionistic negation `¬φ := φ → ⊥`.
    pub fn neg(f: Formula) -> Formula {
        Formula::imp(f, Formula::Bot)
    }

    /// Co-negation `⌐φ := ⊤ ⊐ φ`.
    pub fn coneg(f: Formula) -> Formula {
        Formula::coimp(Formula::Top, f)
    }

    /// `φ ↔ ψ := (φ → ψ) ∧ (ψ → φ)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    /// Conjunction of a list with `⋀∅ = ⊤`, associated to the right.
    pub fn conjunction<I>(items: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = items.into_iter().rev();
        match iter.next() {
            None => Formula::Top,
            Some(last) => iter.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => vec![],
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imp(l, r)
            | Formula::Coimp(l, r) => vec![l, r],
            Formula::BDia(f) | Formula::WBox(f) | Formula::WDia(f) | Formula::BBox(f) => vec![f],
        }
    }

    /// Nesting depth; constants and atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(name) = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// True when only `⊤ ⊥ atoms ∧ ∨ → ⊐ ◆ □` occur.
    pub fn is_core(&self) -> bool {
        !matches!(self, Formula::WDia(_) | Formula::BBox(_))
            && self.children().into_iter().all(Formula::is_core)
    }

    /// True when only `⊤ ⊥ atoms ∧ ∨ → ⊐ ◇ ■` occur (the language of bounded morphisms).
    pub fn is_white_dia_black_box(&self) -> bool {
        !matches!(self, Formula::BDia(_) | Formula::WBox(_))
            && self
                .children()
                .into_iter()
                .all(Formula::is_white_dia_black_box)
    }

    /// Splits `l → r` into its sides.
    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("T"),
            Formula::Bot => f.write_str("F"),
            Formula::Atom(name) => f.write_str(name),
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} | {r})"),
            Formula::Imp(l, r) => write!(f, "({l} -> {r})"),
            Formula::Coimp(l, r) => write!(f, "({l} -< {r})"),
            Formula::BDia(x) => write!(f, "<*>{x}"),
            Formula::WBox(x) => write!(f, "[]{x}"),
            Formula::WDia(x) => write!(f, "<>{x}"),
            Formula::BBox(x) => write!(f, "[*]{x}"),
        }
    }
}

/// Canonical fully parenthesized ASCII text; `parse(&render(f))` gives back `f`.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

/// Simultaneous replacement of atoms; atoms without an entry stay unchanged.
pub fn substitute(f: &Formula, map: &BTreeMap<String, Formula>) -> Formula {
    let sub = |x: &Formula| Box::new(substitute(x, map));
    match f {
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Atom(name) => map.get(name).cloned().unwrap_or_else(|| f.clone()),
        Formula::And(l, r) => Formula::And(sub(l), sub(r)),
        Formula::Or(l, r) => Formula::Or(sub(l), sub(r)),
        Formula::Imp(l, r) => Formula::Imp(sub(l), sub(r)),
        Formula::Coimp(l, r) => Formula::Coimp(sub(l), sub(r)),
        Formula::BDia(x) => Formula::BDia(sub(x)),
        Formula::WBox(x) => Formula::WBox(sub(x)),
        Formula::WDia(x) => Formula::WDia(sub(x)),
        Formula::BBox(x) => Formula::BBox(sub(x)),
    }
}

/// Rewrites `◇φ` to `⊤ ⊐ □(φ → ⊥)` and `■φ` to `◆(⊤ ⊐ φ) → ⊥`, recursively.
pub fn desugar(f: &Formula) -> Formula {
    let d = |x: &Formula| Box::new(desugar(x));
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(_) => f.clone(),
        Formula::And(l, r) => Formula::And(d(l), d(r)),
        Formula::Or(l, r) => Formula::Or(d(l), d(r)),
        Formula::Imp(l, r) => Formula::Imp(d(l), d(r)),
        Formula::Coimp(l, r) => Formula::Coimp(d(l), d(r)),
        Formula::BDia(x) => Formula::BDia(d(x)),
        Formula::WBox(x) => Formula::WBox(d(x)),
        Formula::WDia(x) => Formula::coneg(Formula::wbox(Formula::neg(desugar(x)))),
        Formula::BBox(x) => Formula::neg(Formula::bdia(Formula::coneg(desugar(x)))),
    }
}

/// A duplicate-free set of formulas, ordered structurally.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaSet(BTreeSet<Formula>);

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet(BTreeSet::new())
    }

    pub fn insert(&mut self, f: Formula) -> bool {
        self.0.insert(f)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Every member's immediate subformulas are members too.
    pub fn is_subformula_closed(&self) -> bool {
        self.0
            .iter()
            .all(|f| f.children().into_iter().all(|c| self.0.contains(c)))
    }

    /// Closure of the whole set under immediate subformulas.
    pub fn closure(&self) -> FormulaSet {
        let mut out = FormulaSet::new();
        for f in &self.0 {
            add_subformulas(f, &mut out);
        }
        out
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        FormulaSet(iter.into_iter().collect())
    }
}

impl IntoIterator for FormulaSet {
    type Item = Formula;
    type IntoIter = std::collections::btree_set::IntoIter<Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::collections::btree_set::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

fn add_subformulas(f: &Formula, out: &mut FormulaSet) {
    if out.insert(f.clone()) {
        for c in f.children() {
            add_subformulas(c, out);
        }
    }
}

/// Smallest set containing `f` and closed under immediate subformulas.
pub fn subformula_closure(f: &Formula) -> FormulaSet {
    let mut out = FormulaSet::new();
    add_subformulas(f, &mut out);
    out
}

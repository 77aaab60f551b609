//! Inclusions between compositions of `R` and its left converse, and their
//! modal correspondents.
//!
//! An [`InclusionSpec`] `S₁;…;S_k ⊆ S_{k+1};…;S_m` (an empty chain meaning
//! `H`) holds on a frame exactly when the diamond scheme
//! `D_k⋯D₁p → D_m⋯D_{k+1}p` is frame-valid, and exactly when the box scheme
//! `B_{k+1}⋯B_m p → B₁⋯B_k p` is, where `R` gives `◆`/`□` and `⌣R` gives `◇`/`■`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{parse, Formula};
use crate::kripke::{HFrame, Relation};
use crate::semantics::{valid_in_frame, Counterexample, FrameValidity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    /// The accessibility relation `R`.
    R,
    /// The left converse `⌣R`.
    LC,
}

impl Selector {
    fn diamond(self, f: Formula) -> Formula {
        match self {
            Selector::R => Formula::bdia(f),
            Selector::LC => Formula::wdia(f),
        }
    }

    fn boxed(self, f: Formula) -> Formula {
        match self {
            Selector::R => Formula::wbox(f),
            Selector::LC => Formula::bbox(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("cannot read inclusion `{text}`: {reason}")]
    BadSpec { text: String, reason: String },
    #[error("unknown correspondence row `{0}`")]
    UnknownRow(String),
}

/// `lhs ⊆ rhs` where each side is a composition chain; `[]` stands for `H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InclusionSpec {
    pub lhs: Vec<Selector>,
    pub rhs: Vec<Selector>,
}

impl InclusionSpec {
    pub fn new(lhs: Vec<Selector>, rhs: Vec<Selector>) -> Self {
        InclusionSpec { lhs, rhs }
    }

    /// Shapes `H ⊆ …` and `R ⊆ …`, whose diamond forms are `p → D⋯p` and
    /// `◆p → D⋯p`; bounded search over these frame classes is backed by the
    /// finite model property.
    pub fn has_fmp_shape(&self) -> bool {
        self.lhs.is_empty() || self.lhs == [Selector::R]
    }
}

fn fmt_chain(chain: &[Selector], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if chain.is_empty() {
        return f.write_str("H");
    }
    let parts: Vec<&str> = chain
        .iter()
        .map(|s| match s {
            Selector::R => "R",
            Selector::LC => "LC",
        })
        .collect();
    f.write_str(&parts.join(";"))
}

impl fmt::Display for InclusionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_chain(&self.lhs, f)?;
        f.write_str(" <= ")?;
        fmt_chain(&self.rhs, f)
    }
}

impl FromStr for InclusionSpec {
    type Err = CorrespondenceError;

    /// Reads `LC;R <= H` style text.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| CorrespondenceError::BadSpec {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (l, r) = text.split_once("<=").ok_or_else(|| bad("missing `<=`"))?;
        let chain = |side: &str| -> Result<Vec<Selector>, CorrespondenceError> {
            let side = side.trim();
            if side == "H" {
                return Ok(vec![]);
            }
            side.split(';')
                .map(|tok| match tok.trim() {
                    "R" => Ok(Selector::R),
                    "LC" => Ok(Selector::LC),
                    "" => Err(bad("empty chain element (write `H` for the empty chain)")),
                    other => Err(bad(&format!("unknown relation `{other}`"))),
                })
                .collect()
        };
        Ok(InclusionSpec {
            lhs: chain(l)?,
            rhs: chain(r)?,
        })
    }
}

/// Composes the chain left to right; the empty chain is `H`.
pub fn relation_of_chain(fr: &HFrame, chain: &[Selector]) -> Relation {
    let pick = |s: &Selector| match s {
        Selector::R => fr.r(),
        Selector::LC => fr.left_converse(),
    };
    match chain.split_first() {
        None => fr.h().clone(),
        Some((first, rest)) => rest.iter().fold(pick(first).clone(), |acc, s| {
            acc.compose(pick(s)).expect("frame relations share a size")
        }),
    }
}

pub fn check_inclusion(fr: &HFrame, spec: &InclusionSpec) -> bool {
    relation_of_chain(fr, &spec.lhs).is_subset(&relation_of_chain(fr, &spec.rhs))
}

fn p() -> Formula {
    Formula::atom("p")
}

/// `D_k⋯D₁p → D_m⋯D_{k+1}p`.
pub fn diamond_form(spec: &InclusionSpec) -> Formula {
    let side = |chain: &[Selector]| chain.iter().fold(p(), |f, s| s.diamond(f));
    Formula::imp(side(&spec.lhs), side(&spec.rhs))
}

/// `B_{k+1}⋯B_m p → B₁⋯B_k p`.
pub fn box_form(spec: &InclusionSpec) -> Formula {
    let side = |chain: &[Selector]| chain.iter().rev().fold(p(), |f, s| s.boxed(f));
    Formula::imp(side(&spec.rhs), side(&spec.lhs))
}

/// One named frame condition with its inclusion and modal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceRow {
    pub name: &'static str,
    pub spec: InclusionSpec,
    pub diamond_form: Formula,
    pub box_form: Formula,
    pub mixed_form: Option<Formula>,
}

const ROWS: [(&str, &str, Option<&str>); 20] = [
    ("reflexive", "H <= R", None),
    ("converse reflexive", "H <= LC", None),
    ("pathetic", "R <= H", None),
    ("converse pathetic", "LC <= H", None),
    ("functional", "LC;R <= H", Some("<>p -> []p")),
    ("injective", "R;LC <= H", Some("<*>p -> [*]p")),
    ("surjective", "H <= LC;R", Some("[*]p -> <*>p")),
    ("total", "H <= R;LC", Some("[]p -> <>p")),
    ("weakly symmetric", "R <= LC", Some("p -> []<>p")),
    ("strongly symmetric", "LC <= R", Some("<>[]p -> p")),
    ("transitive", "R;R <= R", None),
    ("converse transitive", "LC;LC <= LC", None),
    ("dense", "R <= R;R", None),
    ("converse dense", "LC <= LC;LC", None),
    ("Euclidean", "LC;R <= R", Some("<>[]p -> []p")),
    ("weak Euclidean", "LC;R <= LC", Some("<>p -> []<>p")),
    ("converse Euclidean", "R;LC <= R", None),
    ("weak converse Euclidean", "R;LC <= LC", None),
    ("confluent", "LC;R <= R;LC", Some("<>[]p -> []<>p")),
    ("divergent", "R;LC <= LC;R", Some("<*>[*]p -> [*]<*>p")),
];

/// The twenty standard frame conditions, in their customary order.
pub fn table_registry() -> Vec<CorrespondenceRow> {
    ROWS.iter()
        .map(|(name, spec, mixed)| {
            let spec: InclusionSpec = spec.parse().expect("registry spec parses");
            CorrespondenceRow {
                name,
                diamond_form: diamond_form(&spec),
                box_form: box_form(&spec),
                mixed_form: mixed.map(|m| parse(m).expect("registry mixed form parses")),
                spec,
            }
        })
        .collect()
}

fn normalize(name: &str) -> String {
    name.trim()
        .to_lowercase()
        .replace(['_', '-'], " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Looks a row up by name, ignoring case and treating `_`/`-` as spaces.
pub fn find_row(name: &str) -> Result<CorrespondenceRow, CorrespondenceError> {
    let key = normalize(name);
    table_registry()
        .into_iter()
        .find(|row| normalize(row.name) == key)
        .ok_or_else(|| CorrespondenceError::UnknownRow(name.to_string()))
}

/// A registry row name or, failing that, inclusion text such as `R;R <= R`.
pub fn resolve_spec(text: &str) -> Result<InclusionSpec, CorrespondenceError> {
    match find_row(text) {
        Ok(row) => Ok(row.spec),
        Err(_) if text.contains("<=") => text.parse(),
        Err(e) => Err(e),
    }
}

/// True when bounded search under `sigma` is backed by a proved finite model
/// property: every spec has the `H ⊆ …` / `R ⊆ …` shape, or the set is
/// transitivity optionally with reflexivity.
pub fn fmp_guaranteed(sigma: &[InclusionSpec]) -> bool {
    if sigma.iter().all(InclusionSpec::has_fmp_shape) {
        return true;
    }
    let transitive: InclusionSpec = "R;R <= R".parse().expect("static spec");
    let reflexive: InclusionSpec = "H <= R".parse().expect("static spec");
    sigma.contains(&transitive) && sigma.iter().all(|s| *s == transitive || *s == reflexive)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub inclusion: bool,
    pub diamond: FrameValidity,
    pub boxed: FrameValidity,
}

impl CorrespondenceReport {
    pub fn agree(&self) -> bool {
        self.inclusion == self.diamond.is_valid() && self.inclusion == self.boxed.is_valid()
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match (&self.diamond, &self.boxed) {
            (FrameValidity::Counterexample(c), _) | (_, FrameValidity::Counterexample(c)) => Some(c),
            _ => None,
        }
    }
}

/// Evaluates the inclusion and the validity of both modal forms on `fr`.
pub fn verify_correspondence(fr: &HFrame, spec: &InclusionSpec) -> CorrespondenceReport {
    CorrespondenceReport {
        inclusion: check_inclusion(fr, spec),
        diamond: valid_in_frame(fr, &diamond_form(spec)),
        boxed: valid_in_frame(fr, &box_form(spec)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::fixtures::*;
    use crate::render;

    fn spec(s: &str) -> InclusionSpec {
        s.parse().unwrap()
    }

    #[test]
    fn spec_text_roundtrip() {
        for (_, text, _) in ROWS {
            assert_eq!(spec(text).to_string(), text);
        }
        assert_eq!(spec(" LC ; R<=H").lhs, vec![Selector::LC, Selector::R]);
        assert!("R <=".parse::<InclusionSpec>().is_err());
        assert!("R ; X <= H".parse::<InclusionSpec>().is_err());
        assert!("R".parse::<InclusionSpec>().is_err());
    }

    #[test]
    fn chain_relations() {
        let fr = m1().frame().clone();
        assert_eq!(relation_of_chain(&fr, &[]), h1());
        assert_eq!(
            relation_of_chain(&fr, &[Selector::LC]),
            Relation::from_pairs(4, [(3, 0), (3, 1), (2, 0), (2, 1)]).unwrap()
        );
        let r = Relation::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        let fr = HFrame::unlabeled(Relation::identity(3), r).unwrap();
        assert!(relation_of_chain(&fr, &[Selector::R, Selector::R]).contains(0, 2));
    }

    #[test]
    fn inclusion_examples() {
        let h = h1();
        let fr = HFrame::unlabeled(h.clone(), h).unwrap();
        assert!(check_inclusion(&fr, &spec("H <= R")));
        let fr2 = m2().frame().clone();
        assert!(!check_inclusion(&fr2, &spec("H <= LC")));
        assert!(check_inclusion(&fr2, &spec("LC;R <= LC;R")));
    }

    #[test]
    fn forms_examples() {
        let s = spec("H <= R");
        assert_eq!(render(&diamond_form(&s)), "(p -> <*>p)");
        assert_eq!(render(&box_form(&s)), "([]p -> p)");
        let s = spec("LC;R <= H");
        assert_eq!(diamond_form(&s), parse("<*><>p -> p").unwrap());
        assert_eq!(box_form(&s), parse("p -> [*][]p").unwrap());
        let s = spec("R;R <= R");
        assert_eq!(diamond_form(&s), parse("<*><*>p -> <*>p").unwrap());
        assert_eq!(box_form(&s), parse("[]p -> [][]p").unwrap());
    }

    /// Diamond and box forms as printed in the standard correspondence table.
    const PRINTED: [(&str, &str, &str); 20] = [
        ("reflexive", "p -> <*>p", "[]p -> p"),
        ("converse reflexive", "p -> <>p", "[*]p -> p"),
        ("pathetic", "<*>p -> p", "p -> []p"),
        ("converse pathetic", "<>p -> p", "p -> [*]p"),
        ("functional", "<*><>p -> p", "p -> [*][]p"),
        ("injective", "<><*>p -> p", "p -> [][*]p"),
        ("surjective", "p -> <*><>p", "[*][]p -> p"),
        ("total", "p -> <><*>p", "[][*]p -> p"),
        ("weakly symmetric", "<*>p -> <>p", "[*]p -> []p"),
        ("strongly symmetric", "<>p -> <*>p", "[]p -> [*]p"),
        ("transitive", "<*><*>p -> <*>p", "[]p -> [][]p"),
        ("converse transitive", "<><>p -> <>p", "[*]p -> [*][*]p"),
        ("dense", "<*>p -> <*><*>p", "[][]p -> []p"),
        ("converse dense", "<>p -> <><>p", "[*][*]p -> [*]p"),
        ("Euclidean", "<*><>p -> <*>p", "[]p -> [*][]p"),
        ("weak Euclidean", "<*><>p -> <>p", "[*]p -> [*][]p"),
        ("converse Euclidean", "<><*>p -> <*>p", "[]p -> [][*]p"),
        ("weak converse Euclidean", "<><*>p -> <>p", "[*]p -> [][*]p"),
        ("confluent", "<*><>p -> <><*>p", "[][*]p -> [*][]p"),
        ("divergent", "<><*>p -> <*><>p", "[*][]p -> [][*]p"),
    ];

    #[test]
    fn registry_matches_printed_table() {
        let reg = table_registry();
        assert_eq!(reg.len(), 20);
        for (row, (name, d, b)) in reg.iter().zip(PRINTED) {
            assert_eq!(row.name, name);
            assert_eq!(row.diamond_form, parse(d).unwrap(), "{name}");
            assert_eq!(row.box_form, parse(b).unwrap(), "{name}");
        }
        let eu = find_row("euclidean").unwrap();
        assert_eq!(eu.spec.to_string(), "LC;R <= R");
        assert_eq!(eu.diamond_form, parse("<*><>p -> <*>p").unwrap());
        let conf = find_row("confluent").unwrap();
        assert_eq!(conf.mixed_form, Some(parse("<>[]p -> []<>p").unwrap()));
    }

    #[test]
    fn lookup() {
        assert_eq!(find_row("Weak_converse-Euclidean").unwrap().name, "weak converse Euclidean");
        assert!(matches!(find_row("nope"), Err(CorrespondenceError::UnknownRow(_))));
        assert_eq!(resolve_spec("reflexive").unwrap(), spec("H <= R"));
        assert_eq!(resolve_spec("R <= R;R").unwrap(), spec("R <= R;R"));
        assert!(resolve_spec("nonsense").is_err());
    }

    #[test]
    fn verify_examples() {
        let fr = HFrame::unlabeled(
            Relation::identity(2),
            Relation::from_pairs(2, [(0, 1)]).unwrap(),
        )
        .unwrap();
        let rep = verify_correspondence(&fr, &spec("R;R <= R"));
        assert!(rep.agree());
        assert!(rep.inclusion);
        let rep = verify_correspondence(&fr, &spec("H <= R"));
        assert!(rep.agree());
        assert!(!rep.inclusion);
        assert!(rep.counterexample().is_some());
        let rep = verify_correspondence(&fr, &spec("LC;R <= LC;R"));
        assert!(rep.inclusion && rep.diamond.is_valid() && rep.boxed.is_valid());
    }

    #[test]
    fn fmp_classes() {
        assert!(fmp_guaranteed(&[]));
        assert!(fmp_guaranteed(&[spec("H <= R"), spec("R <= R;LC")]));
        assert!(fmp_guaranteed(&[spec("R;R <= R")]));
        assert!(fmp_guaranteed(&[spec("R;R <= R"), spec("H <= R")]));
        assert!(!fmp_guaranteed(&[spec("R;R <= R"), spec("R <= LC")]));
        assert!(!fmp_guaranteed(&[spec("LC;R <= H")]));
    }
}

//! The Hilbert-style proof system: axiom schemes A0–A13, the rules MP,
//! Mon⊐, Mon□ and Mon◆, derivation checking and provability certificates.
//!
//! Axioms are schemes: a line cites a scheme and is accepted when it is a
//! substitution instance of the scheme's template, so uniform substitution is
//! never a separate step. Line references are 1-based.

mod builder;
pub mod corpus;
mod file;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{parse, substitute, Formula};
use crate::kripke::HFrame;
use crate::search::enumerate_frames;
use crate::semantics::{valid_in_frame, FrameValidity};

pub use builder::ProofBuilder;
pub use file::{
    certificate_from_json, certificate_to_json, derivation_from_json, derivation_to_json,
    CertificateFile, LineFile, ProofFile,
};

/// Scheme variable ↦ formula.
pub type Substitution = BTreeMap<String, Formula>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomScheme {
    pub id: &'static str,
    pub template: Formula,
}

const TEMPLATES: [(&str, &str); 14] = [
    ("A0", "p -> (q -> p)"),
    ("A1", "(p -> (q -> r)) -> ((p -> q) -> (p -> r))"),
    ("A2", "p -> (p | q)"),
    ("A3", "q -> (p | q)"),
    ("A4", "(p -> r) -> ((q -> r) -> ((p | q) -> r))"),
    ("A5", "(p & q) -> p"),
    ("A6", "(p & q) -> q"),
    ("A7", "p -> (q -> (p & q))"),
    ("A8", "F -> p"),
    ("A9", "p -> T"),
    ("A10", "p -> (q | (p -< q))"),
    ("A11", "((q | r) -< q) -> r"),
    ("A12", "p -> []<*>p"),
    ("A13", "<*>[]p -> p"),
];

/// The fourteen axiom schemes, in order.
pub fn axiom_schemes() -> &'static [AxiomScheme] {
    static SCHEMES: OnceLock<Vec<AxiomScheme>> = OnceLock::new();
    SCHEMES.get_or_init(|| {
        TEMPLATES
            .iter()
            .map(|(id, t)| AxiomScheme {
                id,
                template: parse(t).expect("axiom templates parse"),
            })
            .collect()
    })
}

pub fn axiom(id: &str) -> Option<&'static AxiomScheme> {
    axiom_schemes().iter().find(|a| a.id == id)
}

/// Extends `subst` so that `template` instantiates to `f`; every atom of the
/// template is a variable.
pub fn match_template(template: &Formula, f: &Formula, subst: &mut Substitution) -> bool {
    use Formula::*;
    match (template, f) {
        (Atom(v), _) => match subst.get(v) {
            Some(bound) => bound == f,
            None => {
                subst.insert(v.clone(), f.clone());
                true
            }
        },
        (Top, Top) | (Bot, Bot) => true,
        (And(a, b), And(c, d))
        | (Or(a, b), Or(c, d))
        | (Imp(a, b), Imp(c, d))
        | (Coimp(a, b), Coimp(c, d)) => match_template(a, c, subst) && match_template(b, d, subst),
        (BDia(a), BDia(c)) | (WBox(a), WBox(c)) | (WDia(a), WDia(c)) | (BBox(a), BBox(c)) => {
            match_template(a, c, subst)
        }
        _ => false,
    }
}

/// Every scheme that `f` instantiates, with its substitution.
pub fn match_axiom(f: &Formula) -> Vec<(&'static AxiomScheme, Substitution)> {
    axiom_schemes()
        .iter()
        .filter_map(|a| {
            let mut s = Substitution::new();
            match_template(&a.template, f, &mut s).then_some((a, s))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    /// Instance of scheme `id`; an empty substitution means "any instance".
    Axiom { id: String, subst: Substitution },
    /// Instance of the `index`-th extra axiom (1-based) of the logic.
    Sigma { index: usize, subst: Substitution },
    /// `⋀Γ' → γ` for the `index`-th premise `γ` (1-based); certificates only.
    Premise(usize),
    /// From line `minor` (`φ`) and line `major` (`φ → ψ`).
    MP { minor: usize, major: usize },
    MonCoimp(usize),
    MonBox(usize),
    MonBDia(usize),
}

impl Justification {
    pub fn rule_name(&self) -> String {
        match self {
            Justification::Axiom { id, .. } => id.clone(),
            Justification::Sigma { .. } => "Sigma".into(),
            Justification::Premise(_) => "Premise".into(),
            Justification::MP { .. } => "MP".into(),
            Justification::MonCoimp(_) => "MonCoimp".into(),
            Justification::MonBox(_) => "MonBox".into(),
            Justification::MonBDia(_) => "MonBDia".into(),
        }
    }

    pub fn refs(&self) -> Vec<usize> {
        match self {
            Justification::Axiom { .. } => vec![],
            Justification::Sigma { index, .. } | Justification::Premise(index) => vec![*index],
            Justification::MP { minor, major } => vec![*minor, *major],
            Justification::MonCoimp(i) | Justification::MonBox(i) | Justification::MonBDia(i) => vec![*i],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub lines: Vec<Line>,
}

impl Derivation {
    pub fn new(lines: Vec<Line>) -> Self {
        Derivation { lines }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.lines.iter().map(|l| l.formula.clone()).collect()
    }
}

/// What a derivation may cite besides the A-schemes: extra axioms `Σ`, and
/// premises when checked as part of a certificate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofContext {
    pub sigma: Vec<Formula>,
    pub premises: Option<Vec<Formula>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineViolation {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for LineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

fn instance_check(template: &Formula, subst: &Substitution, f: &Formula, what: &str) -> Result<(), String> {
    if subst.is_empty() {
        let mut s = Substitution::new();
        return if match_template(template, f, &mut s) {
            Ok(())
        } else {
            Err(format!("not an instance of {what} `{template}`"))
        };
    }
    let inst = substitute(template, subst);
    if &inst == f {
        Ok(())
    } else {
        Err(format!("{what} under the given substitution is `{inst}`, not `{f}`"))
    }
}

/// Checks line `index` (1-based) of `d` under `ctx`.
pub fn check_line(d: &Derivation, index: usize, ctx: &ProofContext) -> Result<(), LineViolation> {
    let fail = |reason: String| LineViolation { line: index, reason };
    let line = d
        .lines
        .get(index.wrapping_sub(1))
        .ok_or_else(|| fail(format!("no line {index}")))?;
    let f = &line.formula;
    let earlier = |i: usize| -> Result<&Formula, LineViolation> {
        if i == 0 || i >= index {
            Err(fail(format!("reference {i} is not an earlier line")))
        } else {
            Ok(&d.lines[i - 1].formula)
        }
    };
    let premise_imp = |i: usize| -> Result<(&Formula, &Formula), LineViolation> {
        earlier(i)?
            .as_imp()
            .ok_or_else(|| fail(format!("line {i} is not an implication")))
    };
    match &line.justification {
        Justification::Axiom { id, subst } => {
            let scheme = axiom(id).ok_or_else(|| fail(format!("unknown axiom `{id}`")))?;
            instance_check(&scheme.template, subst, f, id).map_err(fail)
        }
        Justification::Sigma { index: k, subst } => {
            let template = k
                .checked_sub(1)
                .and_then(|k| ctx.sigma.get(k))
                .ok_or_else(|| fail(format!("no extra axiom {k}")))?;
            instance_check(template, subst, f, &format!("extra axiom {k}")).map_err(fail)
        }
        Justification::Premise(k) => {
            let premises = ctx
                .premises
                .as_ref()
                .ok_or_else(|| fail("premises are only available in a certificate".into()))?;
            let gamma = k
                .checked_sub(1)
                .and_then(|k| premises.get(k))
                .ok_or_else(|| fail(format!("no premise {k}")))?;
            let expected = Formula::imp(Formula::conjunction(premises.iter().cloned()), gamma.clone());
            if *f == expected {
                Ok(())
            } else {
                Err(fail(format!("premise {k} line must read `{expected}`")))
            }
        }
        Justification::MP { minor, major } => {
            let phi = earlier(*minor)?;
            let imp = earlier(*major)?;
            if *imp == Formula::imp(phi.clone(), f.clone()) {
                Ok(())
            } else {
                Err(fail(format!(
                    "line {major} is not `line {minor} -> line {index}`"
                )))
            }
        }
        Justification::MonCoimp(i) => {
            let (d1, d2) = premise_imp(*i)?;
            let ok = match f {
                Formula::Imp(l, r) => match (&**l, &**r) {
                    (Formula::Coimp(a, psi1), Formula::Coimp(b, psi2)) => {
                        **a == *d1 && **b == *d2 && psi1 == psi2
                    }
                    _ => false,
                },
                _ => false,
            };
            ok.then_some(())
                .ok_or_else(|| fail(format!("not `({d1} -< ψ) -> ({d2} -< ψ)`")))
        }
        Justification::MonBox(i) => {
            let (a, b) = premise_imp(*i)?;
            let expected = Formula::imp(Formula::wbox(a.clone()), Formula::wbox(b.clone()));
            (*f == expected)
                .then_some(())
                .ok_or_else(|| fail(format!("expected `{expected}`")))
        }
        Justification::MonBDia(i) => {
            let (a, b) = premise_imp(*i)?;
            let expected = Formula::imp(Formula::bdia(a.clone()), Formula::bdia(b.clone()));
            (*f == expected)
                .then_some(())
                .ok_or_else(|| fail(format!("expected `{expected}`")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationReport {
    pub lines: usize,
    pub conclusion: Option<String>,
    pub violations: Vec<LineViolation>,
}

impl DerivationReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty() && self.conclusion.is_some()
    }
}

pub fn check_derivation(d: &Derivation) -> DerivationReport {
    check_derivation_in(d, &ProofContext::default())
}

/// Checks every line; an empty derivation is rejected.
pub fn check_derivation_in(d: &Derivation, ctx: &ProofContext) -> DerivationReport {
    let mut violations: Vec<LineViolation> = (1..=d.lines.len())
        .filter_map(|i| check_line(d, i, ctx).err())
        .collect();
    if d.lines.is_empty() {
        violations.push(LineViolation {
            line: 0,
            reason: "empty derivation".into(),
        });
    }
    DerivationReport {
        lines: d.lines.len(),
        conclusion: d.conclusion().map(|c| c.to_string()),
        violations,
    }
}

/// A witness that `Γ' ⊢ φ` in the logic extended by `sigma`: a derivation
/// of `⋀Γ' → φ` (with `⋀∅ = ⊤`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvabilityCertificate {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub sigma: Vec<Formula>,
    pub derivation: Derivation,
}

impl ProvabilityCertificate {
    /// The formula the derivation has to end with.
    pub fn target(&self) -> Formula {
        Formula::imp(
            Formula::conjunction(self.premises.iter().cloned()),
            self.conclusion.clone(),
        )
    }

    pub fn context(&self) -> ProofContext {
        ProofContext {
            sigma: self.sigma.clone(),
            premises: Some(self.premises.clone()),
        }
    }
}

pub fn check_certificate(c: &ProvabilityCertificate) -> DerivationReport {
    let mut report = check_derivation_in(&c.derivation, &c.context());
    let target = c.target();
    if let Some(last) = c.derivation.conclusion() {
        if *last != target {
            report.violations.push(LineViolation {
                line: c.derivation.lines.len(),
                reason: format!("derivation ends with `{last}` but the certificate needs `{target}`"),
            });
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("derivation rejected: {0}")]
    Rejected(String),
    #[error("proof file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    /// 1-based line number.
    pub line: usize,
    pub formula: String,
    /// Position of the frame in the enumeration order (counting all frames).
    pub frame_index: usize,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub bound: usize,
    pub frames_checked: usize,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every formula for validity on every H-frame up to `bound` that
/// validates all of `sigma`; reports the first failing frame per formula.
pub fn validity_sweep(formulas: &[Formula], bound: usize, sigma: &[Formula]) -> SweepReport {
    let mut failures: Vec<Option<SweepFailure>> = vec![None; formulas.len()];
    let mut frames_checked = 0;
    let keep = |fr: &HFrame| sigma.iter().all(|s| valid_in_frame(fr, s).is_valid());
    for (frame_index, fr) in enumerate_frames(bound).enumerate() {
        if !keep(&fr) {
            continue;
        }
        frames_checked += 1;
        for (i, f) in formulas.iter().enumerate() {
            if failures[i].is_some() {
                continue;
            }
            if let FrameValidity::Counterexample(c) = valid_in_frame(&fr, f) {
                failures[i] = Some(SweepFailure {
                    line: i + 1,
                    formula: f.to_string(),
                    frame_index,
                    state: c.state,
                });
            }
        }
    }
    SweepReport {
        bound,
        frames_checked,
        failures: failures.into_iter().flatten().collect(),
    }
}

/// Every line of an accepted derivation should be valid on every frame of the
/// logic; any failure would mean an unsound rule or axiom.
pub fn soundness_sweep(
    d: &Derivation,
    bound: usize,
    ctx: &ProofContext,
) -> Result<SweepReport, HilbertError> {
    let report = check_derivation_in(d, ctx);
    if !report.accepted() {
        let first = report
            .violations
            .first()
            .map(|v| v.to_string())
            .unwrap_or_default();
        return Err(HilbertError::Rejected(first));
    }
    Ok(validity_sweep(&d.formulas(), bound, &ctx.sigma))
}

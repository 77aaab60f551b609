use crate::formula::{substitute, Formula};

use super::{axiom, Derivation, Justification, Line, Substitution};

/// Appends justified lines and returns their 1-based numbers. The derived
/// helpers expand into plain A0/A1/A7/MP steps.
///
/// Misuse (citing a non-implication where one is needed) panics: the builder
/// is for assembling proofs whose shape is known in advance.
#[derive(Debug, Default, Clone)]
pub struct ProofBuilder {
    lines: Vec<Line>,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn formula(&self, line: usize) -> &Formula {
        &self.lines[line - 1].formula
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(Line {
            formula,
            justification,
        });
        self.lines.len()
    }

    fn imp_parts(&self, line: usize) -> (Formula, Formula) {
        let (a, b) = self
            .formula(line)
            .as_imp()
            .unwrap_or_else(|| panic!("line {line} is not an implication"));
        (a.clone(), b.clone())
    }

    pub fn axiom(&mut self, id: &str, subst: &[(&str, Formula)]) -> usize {
        let scheme = axiom(id).unwrap_or_else(|| panic!("unknown axiom {id}"));
        let subst: Substitution = subst.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let formula = substitute(&scheme.template, &subst);
        self.push(
            formula,
            Justification::Axiom {
                id: id.to_string(),
                subst,
            },
        )
    }

    /// Instance of extra axiom `index` (1-based) whose template is `template`.
    pub fn sigma(&mut self, index: usize, template: &Formula, subst: &[(&str, Formula)]) -> usize {
        let subst: Substitution = subst.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let formula = substitute(template, &subst);
        self.push(formula, Justification::Sigma { index, subst })
    }

    /// `⋀premises → premises[index - 1]`.
    pub fn premise(&mut self, index: usize, premises: &[Formula]) -> usize {
        let formula = Formula::imp(
            Formula::conjunction(premises.iter().cloned()),
            premises[index - 1].clone(),
        );
        self.push(formula, Justification::Premise(index))
    }

    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let (a, b) = self.imp_parts(major);
        assert_eq!(&a, self.formula(minor), "MP premise mismatch");
        self.push(b, Justification::MP { minor, major })
    }

    pub fn mon_box(&mut self, line: usize) -> usize {
        let (a, b) = self.imp_parts(line);
        self.push(
            Formula::imp(Formula::wbox(a), Formula::wbox(b)),
            Justification::MonBox(line),
        )
    }

    pub fn mon_bdia(&mut self, line: usize) -> usize {
        let (a, b) = self.imp_parts(line);
        self.push(
            Formula::imp(Formula::bdia(a), Formula::bdia(b)),
            Justification::MonBDia(line),
        )
    }

    pub fn mon_coimp(&mut self, line: usize, psi: Formula) -> usize {
        let (a, b) = self.imp_parts(line);
        self.push(
            Formula::imp(Formula::coimp(a, psi.clone()), Formula::coimp(b, psi)),
            Justification::MonCoimp(line),
        )
    }

    /// From `⊢ x` infer `⊢ a → x`.
    pub fn weaken(&mut self, line: usize, a: Formula) -> usize {
        let x = self.formula(line).clone();
        let k = self.axiom("A0", &[("p", x), ("q", a)]);
        self.mp(line, k)
    }

    /// From `⊢ x → (a → b)` and `⊢ x → a` infer `⊢ x → b`.
    pub fn mp_under(&mut self, outer: usize, inner: usize) -> usize {
        let (x, ab) = self.imp_parts(outer);
        let (a, b) = ab
            .as_imp()
            .map(|(a, b)| (a.clone(), b.clone()))
            .expect("nested implication");
        let s = self.axiom("A1", &[("p", x), ("q", a), ("r", b)]);
        let step = self.mp(outer, s);
        self.mp(inner, step)
    }

    /// From `⊢ a → b` and `⊢ b → c` infer `⊢ a → c`.
    pub fn chain(&mut self, ab: usize, bc: usize) -> usize {
        let (a, _) = self.imp_parts(ab);
        let w = self.weaken(bc, a);
        self.mp_under(w, ab)
    }

    /// `⊢ a → a`.
    pub fn identity(&mut self, a: Formula) -> usize {
        let aa = Formula::imp(a.clone(), a.clone());
        let l1 = self.axiom("A0", &[("p", a.clone()), ("q", aa.clone())]);
        let l2 = self.axiom("A1", &[("p", a.clone()), ("q", aa), ("r", a.clone())]);
        let l3 = self.mp(l1, l2);
        let l4 = self.axiom("A0", &[("p", a.clone()), ("q", a)]);
        self.mp(l4, l3)
    }

    /// From `⊢ a → b` infer `⊢ (b → c) → (a → c)`.
    pub fn precompose(&mut self, ab: usize, c: Formula) -> usize {
        let (a, b) = self.imp_parts(ab);
        let bc = Formula::imp(b.clone(), c.clone());
        let l1 = self.weaken(ab, bc.clone());
        let l2 = self.axiom("A0", &[("p", bc.clone()), ("q", a.clone())]);
        let l3 = self.axiom("A1", &[("p", a), ("q", b), ("r", c)]);
        let l4 = self.weaken(l3, bc);
        let l5 = self.mp_under(l4, l2);
        self.mp_under(l5, l1)
    }

    /// From `⊢ a → b` infer `⊢ (x → a) → (x → b)`.
    pub fn postcompose(&mut self, ab: usize, x: Formula) -> usize {
        let (a, b) = self.imp_parts(ab);
        let k = self.weaken(ab, x.clone());
        let s = self.axiom("A1", &[("p", x), ("q", a), ("r", b)]);
        self.mp(k, s)
    }

    /// From `⊢ x → a` and `⊢ x → b` infer `⊢ x → (a ∧ b)`.
    pub fn and_intro_under(&mut self, xa: usize, xb: usize) -> usize {
        let (_, a) = self.imp_parts(xa);
        let (_, b) = self.imp_parts(xb);
        let pair = self.axiom("A7", &[("p", a), ("q", b)]);
        let curried = self.chain(xa, pair);
        self.mp_under(curried, xb)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn finish(self) -> Derivation {
        Derivation::new(self.lines)
    }
}

//! Bundled derivations and certificates, and single-line mutations of them.

use crate::formula::{parse, Formula};

use super::{Derivation, Justification, ProofBuilder, ProvabilityCertificate};

fn f(s: &str) -> Formula {
    parse(s).expect("corpus formulas parse")
}

/// `p → p`.
pub fn identity() -> Derivation {
    let mut b = ProofBuilder::new();
    b.identity(f("p"));
    b.finish()
}

/// `□p ∧ □q → □(p ∧ q)`, through the adjunction `◆ ⊣ □`.
pub fn box_conjunction() -> Derivation {
    let mut b = ProofBuilder::new();
    let (bp, bq) = (f("[]p"), f("[]q"));
    let both = Formula::and(bp.clone(), bq.clone());
    let left = b.axiom("A5", &[("p", bp.clone()), ("q", bq.clone())]);
    let right = b.axiom("A6", &[("p", bp), ("q", bq)]);
    let dl = b.mon_bdia(left);
    let dr = b.mon_bdia(right);
    let tp = b.axiom("A13", &[("p", f("p"))]);
    let tq = b.axiom("A13", &[("p", f("q"))]);
    let to_p = b.chain(dl, tp);
    let to_q = b.chain(dr, tq);
    let to_pq = b.and_intro_under(to_p, to_q);
    let boxed = b.mon_box(to_pq);
    let unit = b.axiom("A12", &[("p", both)]);
    b.chain(unit, boxed);
    b.finish()
}

fn certificate(premises: Vec<Formula>, conclusion: Formula, b: ProofBuilder) -> ProvabilityCertificate {
    ProvabilityCertificate {
        premises,
        conclusion,
        sigma: vec![],
        derivation: b.finish(),
    }
}

/// `(p ⊐ q) → r ⊢ p → (q ∨ r)`.
pub fn coimp_residuation_forward() -> ProvabilityCertificate {
    let mut b = ProofBuilder::new();
    let (p, q, r) = (f("p"), f("q"), f("r"));
    let pq = Formula::coimp(p.clone(), q.clone());
    let q_or_r = Formula::or(q.clone(), r.clone());
    // (p ⊐ q → r) → (p ⊐ q → q ∨ r)
    let r_in = b.axiom("A3", &[("p", q.clone()), ("q", r.clone())]);
    let widen = b.postcompose(r_in, pq.clone());
    // (p ⊐ q → q ∨ r) → ((q ∨ (p ⊐ q)) → q ∨ r)
    let q_in = b.axiom("A2", &[("p", q.clone()), ("q", r.clone())]);
    let cases = b.axiom("A4", &[("p", q.clone()), ("q", pq.clone()), ("r", q_or_r.clone())]);
    let by_cases = b.mp(q_in, cases);
    let combined = b.chain(widen, by_cases);
    // (q ∨ (p ⊐ q) → q ∨ r) → (p → q ∨ r)
    let a10 = b.axiom("A10", &[("p", p.clone()), ("q", q)]);
    let pre = b.precompose(a10, q_or_r.clone());
    b.chain(combined, pre);
    let premise = Formula::imp(pq, r);
    certificate(vec![premise], Formula::imp(p, q_or_r), b)
}

/// `⊢ (p ⊐ q) → p`, the residual of `⊢ p → (q ∨ p)`.
pub fn coimp_residuation_backward() -> ProvabilityCertificate {
    let mut b = ProofBuilder::new();
    let (p, q) = (f("p"), f("q"));
    let inj = b.axiom("A3", &[("p", q.clone()), ("q", p.clone())]);
    let mono = b.mon_coimp(inj, q.clone());
    let a11 = b.axiom("A11", &[("q", q.clone()), ("r", p.clone())]);
    let thm = b.chain(mono, a11);
    b.weaken(thm, Formula::Top);
    certificate(vec![], Formula::imp(Formula::coimp(p.clone(), q), p), b)
}

/// `⊢ (p ∧ q) → □◆p`, the transpose of `⊢ ◆(p ∧ q) → ◆p`.
pub fn bdia_box_forward() -> ProvabilityCertificate {
    let mut b = ProofBuilder::new();
    let (p, q) = (f("p"), f("q"));
    let pq = Formula::and(p.clone(), q.clone());
    let proj = b.axiom("A5", &[("p", p.clone()), ("q", q)]);
    let dia = b.mon_bdia(proj);
    let boxed = b.mon_box(dia);
    let unit = b.axiom("A12", &[("p", pq.clone())]);
    let thm = b.chain(unit, boxed);
    b.weaken(thm, Formula::Top);
    certificate(vec![], Formula::imp(pq, Formula::wbox(Formula::bdia(p))), b)
}

/// `⊢ ◆□p → (p ∨ q)`, the transpose of `⊢ p → □(p ∨ q)`.
pub fn bdia_box_backward() -> ProvabilityCertificate {
    let mut b = ProofBuilder::new();
    let (p, q) = (f("p"), f("q"));
    let p_or_q = Formula::or(p.clone(), q.clone());
    let inj = b.axiom("A2", &[("p", p.clone()), ("q", q)]);
    let boxed = b.mon_box(inj);
    let dia = b.mon_bdia(boxed);
    let counit = b.axiom("A13", &[("p", p_or_q.clone())]);
    let thm = b.chain(dia, counit);
    b.weaken(thm, Formula::Top);
    certificate(vec![], Formula::imp(Formula::bdia(Formula::wbox(p)), p_or_q), b)
}

/// `◆q ⊢ ◆q`, citing the premise directly.
pub fn premise_identity() -> ProvabilityCertificate {
    let premises = vec![f("<*>q")];
    let mut b = ProofBuilder::new();
    b.premise(1, &premises);
    certificate(premises.clone(), premises[0].clone(), b)
}

pub fn bundled_derivations() -> Vec<(&'static str, Derivation)> {
    vec![("identity", identity()), ("box_conjunction", box_conjunction())]
}

pub fn bundled_certificates() -> Vec<(&'static str, ProvabilityCertificate)> {
    vec![
        ("coimp_residuation_forward", coimp_residuation_forward()),
        ("coimp_residuation_backward", coimp_residuation_backward()),
        ("bdia_box_forward", bdia_box_forward()),
        ("bdia_box_backward", bdia_box_backward()),
        ("premise_identity", premise_identity()),
    ]
}

/// Corruptions of a single line each: swapped or self-referencing citations,
/// a different monotonicity rule, an axiom line wrapped in `□`, or an
/// out-of-range premise.
pub fn mutants(d: &Derivation) -> Vec<(String, Derivation)> {
    let mut out = vec![];
    for (i, line) in d.lines.iter().enumerate() {
        let n = i + 1;
        let mut with = |what: String, edit: &dyn Fn(&mut super::Line)| {
            let mut m = d.clone();
            edit(&mut m.lines[i]);
            out.push((format!("line {n}: {what}"), m));
        };
        match line.justification.clone() {
            Justification::MP { minor, major } => {
                with("MP references swapped".into(), &|l| {
                    l.justification = Justification::MP {
                        minor: major,
                        major: minor,
                    }
                });
                with("MP cites itself".into(), &|l| {
                    l.justification = Justification::MP { minor, major: n }
                });
            }
            Justification::MonBox(k) => {
                with("MonBox read as MonBDia".into(), &|l| l.justification = Justification::MonBDia(k));
            }
            Justification::MonBDia(k) => {
                with("MonBDia read as MonBox".into(), &|l| l.justification = Justification::MonBox(k));
            }
            Justification::MonCoimp(k) => {
                with("MonCoimp read as MonBox".into(), &|l| l.justification = Justification::MonBox(k));
            }
            Justification::Axiom { .. } | Justification::Sigma { .. } => {
                with("formula boxed".into(), &|l| l.formula = Formula::wbox(l.formula.clone()));
            }
            Justification::Premise(k) => {
                with("premise index out of range".into(), &|l| {
                    l.justification = Justification::Premise(k + 100)
                });
                with("premise formula boxed".into(), &|l| l.formula = Formula::wbox(l.formula.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{check_certificate, check_derivation, check_derivation_in};
    use super::*;

    #[test]
    fn bundled_derivations_are_accepted() {
        for (name, d) in bundled_derivations() {
            let r = check_derivation(&d);
            assert!(r.accepted(), "{name}: {:?}", r.violations);
        }
        assert_eq!(identity().lines.len(), 5);
        assert_eq!(identity().conclusion(), Some(&f("p -> p")));
        assert_eq!(box_conjunction().conclusion(), Some(&f("[]p & []q -> [](p & q)")));
    }

    #[test]
    fn bundled_certificates_are_accepted() {
        for (name, c) in bundled_certificates() {
            let r = check_certificate(&c);
            assert!(r.accepted(), "{name}: {:?}", r.violations);
        }
        let c = coimp_residuation_forward();
        assert_eq!(c.target(), f("((p -< q) -> r) -> (p -> (q | r))"));
    }

    /// The JSON copies under `data/proofs`; regenerate with `BIST_WRITE_CORPUS=1`.
    #[test]
    fn data_files_match_corpus() {
        use super::super::{certificate_to_json, derivation_to_json};
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/proofs");
        let write = std::env::var_os("BIST_WRITE_CORPUS").is_some();
        let files = bundled_derivations()
            .into_iter()
            .map(|(n, d)| (n, derivation_to_json(&d)))
            .chain(bundled_certificates().into_iter().map(|(n, c)| (n, certificate_to_json(&c))));
        for (name, json) in files {
            let path = dir.join(format!("{name}.json"));
            let json = json + "\n";
            if write {
                std::fs::create_dir_all(&dir).unwrap();
                std::fs::write(&path, &json).unwrap();
            }
            assert_eq!(std::fs::read_to_string(&path).unwrap(), json, "{}", path.display());
        }
    }

    #[test]
    fn every_mutant_is_rejected() {
        let mut count = 0;
        for (_, d) in bundled_derivations() {
            for (what, m) in mutants(&d) {
                assert!(!check_derivation(&m).accepted(), "{what}");
                count += 1;
            }
        }
        for (_, c) in bundled_certificates() {
            for (what, m) in mutants(&c.derivation) {
                assert!(!check_derivation_in(&m, &c.context()).accepted(), "{what}");
                count += 1;
            }
        }
        assert!(count >= 20);
    }
}

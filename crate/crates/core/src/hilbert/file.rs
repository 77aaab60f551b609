//! JSON proof files.
//!
//! A derivation is an array of lines
//! `{"formula": "p -> p", "rule": "MP", "refs": [4, 3], "subst": {"q": "p"}}`
//! where `rule` is `A0`…`A13`, `Sigma`, `Premise`, `MP`, `MonCoimp`, `MonBox`
//! or `MonBDia`. A certificate is an object with `premises`, `conclusion`,
//! `sigma` and `derivation`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::{parse, Formula};

use super::{axiom, Derivation, HilbertError, Justification, Line, ProvabilityCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineFile {
    pub formula: String,
    pub rule: String,
    #[serde(default)]
    pub refs: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subst: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    #[serde(default)]
    pub premises: Vec<String>,
    pub conclusion: String,
    #[serde(default)]
    pub sigma: Vec<String>,
    pub derivation: Vec<LineFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProofFile {
    Derivation(Vec<LineFile>),
    Certificate(CertificateFile),
}

fn formula(text: &str, context: &str) -> Result<Formula, HilbertError> {
    parse(text).map_err(|e| HilbertError::Format(format!("{context}: {e}")))
}

impl LineFile {
    fn to_line(&self, number: usize) -> Result<Line, HilbertError> {
        let ctx = format!("line {number}");
        let bad = |msg: String| HilbertError::Format(format!("{ctx}: {msg}"));
        let f = formula(&self.formula, &ctx)?;
        let subst = self
            .subst
            .iter()
            .map(|(k, v)| Ok((k.clone(), formula(v, &ctx)?)))
            .collect::<Result<BTreeMap<_, _>, HilbertError>>()?;
        let refs = |n: usize| -> Result<&[usize], HilbertError> {
            if self.refs.len() == n {
                Ok(&self.refs)
            } else {
                Err(bad(format!("rule {} takes {n} reference(s)", self.rule)))
            }
        };
        if !subst.is_empty() && !(self.rule == "Sigma" || axiom(&self.rule).is_some()) {
            return Err(bad(format!("rule {} takes no substitution", self.rule)));
        }
        let justification = match self.rule.as_str() {
            r if axiom(r).is_some() => {
                refs(0)?;
                Justification::Axiom {
                    id: r.to_string(),
                    subst,
                }
            }
            "Sigma" => Justification::Sigma {
                index: refs(1)?[0],
                subst,
            },
            "Premise" => Justification::Premise(refs(1)?[0]),
            "MP" => {
                let r = refs(2)?;
                Justification::MP {
                    minor: r[0],
                    major: r[1],
                }
            }
            "MonCoimp" => Justification::MonCoimp(refs(1)?[0]),
            "MonBox" => Justification::MonBox(refs(1)?[0]),
            "MonBDia" => Justification::MonBDia(refs(1)?[0]),
            other => return Err(bad(format!("unknown rule `{other}`"))),
        };
        Ok(Line {
            formula: f,
            justification,
        })
    }

    fn from_line(line: &Line) -> LineFile {
        let subst = match &line.justification {
            Justification::Axiom { subst, .. } | Justification::Sigma { subst, .. } => subst
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
            _ => BTreeMap::new(),
        };
        LineFile {
            formula: line.formula.to_string(),
            rule: line.justification.rule_name(),
            refs: line.justification.refs(),
            subst,
        }
    }
}

fn lines_from(files: &[LineFile]) -> Result<Derivation, HilbertError> {
    files
        .iter()
        .enumerate()
        .map(|(i, l)| l.to_line(i + 1))
        .collect::<Result<Vec<_>, _>>()
        .map(Derivation::new)
}

fn lines_to(d: &Derivation) -> Vec<LineFile> {
    d.lines.iter().map(LineFile::from_line).collect()
}

impl ProofFile {
    pub fn from_json(text: &str) -> Result<ProofFile, HilbertError> {
        serde_json::from_str(text).map_err(|e| HilbertError::Format(e.to_string()))
    }
}

pub fn derivation_from_json(text: &str) -> Result<Derivation, HilbertError> {
    let files: Vec<LineFile> =
        serde_json::from_str(text).map_err(|e| HilbertError::Format(e.to_string()))?;
    lines_from(&files)
}

pub fn derivation_to_json(d: &Derivation) -> String {
    serde_json::to_string_pretty(&lines_to(d)).expect("derivations serialize")
}

impl CertificateFile {
    pub fn to_certificate(&self) -> Result<ProvabilityCertificate, HilbertError> {
        let list = |xs: &[String], what: &str| -> Result<Vec<Formula>, HilbertError> {
            xs.iter()
                .enumerate()
                .map(|(i, s)| formula(s, &format!("{what} {}", i + 1)))
                .collect()
        };
        Ok(ProvabilityCertificate {
            premises: list(&self.premises, "premise")?,
            conclusion: formula(&self.conclusion, "conclusion")?,
            sigma: list(&self.sigma, "sigma")?,
            derivation: lines_from(&self.derivation)?,
        })
    }

    pub fn from_certificate(c: &ProvabilityCertificate) -> CertificateFile {
        let list = |xs: &[Formula]| xs.iter().map(|f| f.to_string()).collect();
        CertificateFile {
            premises: list(&c.premises),
            conclusion: c.conclusion.to_string(),
            sigma: list(&c.sigma),
            derivation: lines_to(&c.derivation),
        }
    }
}

pub fn certificate_from_json(text: &str) -> Result<ProvabilityCertificate, HilbertError> {
    let file: CertificateFile =
        serde_json::from_str(text).map_err(|e| HilbertError::Format(e.to_string()))?;
    file.to_certificate()
}

pub fn certificate_to_json(c: &ProvabilityCertificate) -> String {
    serde_json::to_string_pretty(&CertificateFile::from_certificate(c)).expect("certificates serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_lines() {
        let text = r#"[
            {"formula": "(p & q) -> p", "rule": "A5"},
            {"formula": "[](p & q) -> []p", "rule": "MonBox", "refs": [1]},
            {"formula": "F -> q", "rule": "A8", "subst": {"p": "q"}}
        ]"#;
        let d = derivation_from_json(text).unwrap();
        assert_eq!(d.lines.len(), 3);
        assert_eq!(d.lines[1].justification, Justification::MonBox(1));
        assert!(super::super::check_derivation(&d).accepted());
        let back = derivation_from_json(&derivation_to_json(&d)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn rejects_malformed_lines() {
        for bad in [
            r#"[{"formula": "p", "rule": "MP", "refs": [1]}]"#,
            r#"[{"formula": "p ->", "rule": "A0"}]"#,
            r#"[{"formula": "p", "rule": "Cut"}]"#,
            r#"[{"formula": "p", "rule": "A0", "refs": [1]}]"#,
            r#"[{"formula": "p", "rule": "MP", "refs": [1, 2], "subst": {"p": "q"}}]"#,
            r#"[{"formula": "p", "rule": "A0", "extra": 1}]"#,
            r#"{"formula": "p"}"#,
        ] {
            assert!(derivation_from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn certificate_roundtrip() {
        let text = r#"{"premises": ["<*>q"], "conclusion": "<*>q",
                      "derivation": [{"formula": "<*>q -> <*>q", "rule": "Premise", "refs": [1]}]}"#;
        let c = certificate_from_json(text).unwrap();
        assert!(super::super::check_certificate(&c).accepted());
        assert_eq!(certificate_from_json(&certificate_to_json(&c)).unwrap(), c);
        assert!(matches!(ProofFile::from_json(text).unwrap(), ProofFile::Certificate(_)));
        assert!(matches!(ProofFile::from_json("[]").unwrap(), ProofFile::Derivation(_)));
    }
}

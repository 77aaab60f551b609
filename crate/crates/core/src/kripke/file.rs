//! JSON model files.
//!
//! ```json
//! { "universe": [0, 1, 2, 3],
//!   "H": [[0, 1], [2, 3]],
//!   "R": [[0, 3], [1, 3]],
//!   "valuation": { "p": [1, 2, 3] },
//!   "options": { "stabilize": false, "h_close": false } }
//! ```
//!
//! Labels may be JSON strings or integers; integers are read as their decimal text.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{build_model, HModel, KripkeError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildOptions {
    /// Replace `R` by `H;R;H` instead of rejecting an unstable `R`.
    pub stabilize: bool,
    /// Replace each valuation set by its H-closure instead of rejecting it.
    pub h_close: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl Label {
    pub fn text(&self) -> String {
        match self {
            Label::Int(i) => i.to_string(),
            Label::Str(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub universe: Vec<Label>,
    #[serde(rename = "H", default)]
    pub h: Vec<(Label, Label)>,
    #[serde(rename = "R", default)]
    pub r: Vec<(Label, Label)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<BuildOptions>,
}

impl ModelFile {
    pub fn build(&self) -> Result<HModel, KripkeError> {
        let universe: Vec<String> = self.universe.iter().map(Label::text).collect();
        let pairs = |ps: &[(Label, Label)]| -> Vec<(String, String)> {
            ps.iter().map(|(a, b)| (a.text(), b.text())).collect()
        };
        let h = pairs(&self.h);
        let r = pairs(&self.r);
        let valuation = self
            .valuation
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(Label::text).collect()))
            .collect();
        let u: Vec<&str> = universe.iter().map(String::as_str).collect();
        let h: Vec<(&str, &str)> = h.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let r: Vec<(&str, &str)> = r.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        build_model(&u, &h, &r, &valuation, self.options.unwrap_or_default())
    }
}

pub fn model_from_json(text: &str) -> Result<HModel, KripkeError> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| KripkeError::Format(e.to_string()))?;
    file.build()
}

pub fn read_model_file(path: &Path) -> Result<HModel, KripkeError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| KripkeError::Format(format!("{}: {e}", path.display())))?;
    model_from_json(&text)
}

/// Serializable form of a model. `H` is written without its reflexive pairs;
/// reading it back restores them.
pub fn model_to_file(m: &HModel) -> ModelFile {
    let lab = |i: usize| Label::Str(m.label(i).to_string());
    ModelFile {
        universe: (0..m.size()).map(lab).collect(),
        h: m
            .h()
            .pairs()
            .filter(|(x, y)| x != y)
            .map(|(x, y)| (lab(x), lab(y)))
            .collect(),
        r: m.r().pairs().map(|(x, y)| (lab(x), lab(y))).collect(),
        valuation: m
            .valuation()
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(lab).collect()))
            .collect(),
        options: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::fixtures::m1;

    #[test]
    fn reads_integer_labels() {
        let text = r#"{"universe":[0,1,2,3],"H":[[0,1],[2,3]],"R":[[0,3],[1,3]],"valuation":{"p":[1,2,3]}}"#;
        assert_eq!(model_from_json(text).unwrap(), m1());
    }

    #[test]
    fn roundtrip_through_file_form() {
        let m = m1();
        let json = serde_json::to_string(&model_to_file(&m)).unwrap();
        assert_eq!(model_from_json(&json).unwrap(), m);
    }

    #[test]
    fn options_are_honoured() {
        let text = r#"{"universe":["a","b"],"H":[["a","b"]],"R":[],"valuation":{"p":["a"]},"options":{"h_close":true}}"#;
        let m = model_from_json(text).unwrap();
        assert_eq!(m.value("p").count(), 2);
        let strict = r#"{"universe":["a","b"],"H":[["a","b"]],"valuation":{"p":["a"]}}"#;
        assert!(matches!(model_from_json(strict), Err(KripkeError::NotHSet { .. })));
    }

    #[test]
    fn malformed_json_is_a_format_error() {
        assert!(matches!(model_from_json("{"), Err(KripkeError::Format(_))));
        assert!(matches!(
            model_from_json(r#"{"universe":[0],"bogus":1}"#),
            Err(KripkeError::Format(_))
        ));
    }
}

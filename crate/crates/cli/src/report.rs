use serde::Serialize;
use serde_json::Value;

/// How a command ended. Maps onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Positive,
    Negative,
    InternalFailure,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Positive => 0,
            Verdict::Negative => 1,
            Verdict::InternalFailure => 3,
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Positive
        } else {
            Verdict::Negative
        }
    }
}

/// What a command hands back: a verdict, a JSON payload and the text shown
/// without `--json`.
#[derive(Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub result: Value,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub verdict: Verdict,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub verdict: &'static str,
    pub error: String,
}

pub const TOOL: &str = "bist";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

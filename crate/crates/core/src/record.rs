//! The structured JSON record written for every run.

use serde::Serialize;

use crate::ccomplex::OracleMode;
use crate::instance::InstanceSpec;

pub const SCHEMA: &str = "gsplit-record/1";

#[derive(Clone, Debug, Serialize)]
pub struct Parameters {
    pub radius: usize,
    pub translate_radius: usize,
    pub window: usize,
    pub dim_cap: usize,
    pub mode: OracleMode,
    pub seed: u64,
    pub stabilizer_radius: usize,
    pub ccomplex_radius: usize,
    pub override_hypotheses: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Definite,
    InconclusiveAtTruncation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Definite => 0,
            Status::InconclusiveAtTruncation => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub group: String,
    pub parameters: Parameters,
    pub instance: InstanceSpec,
    pub status: Status,
    pub result: serde_json::Value,
    /// DOT files written next to the record.
    pub artifacts: Vec<String>,
}

impl Record {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }
}

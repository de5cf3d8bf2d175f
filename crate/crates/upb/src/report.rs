//! Pieces shared by every JSON report.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use upb_core::rng::SPLITTING_SCHEME;
use upb_core::symbolic::ProductVector;

use crate::formats::{pairs, to_json, Pair, SCHEMA_VERSION};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub schema_version: String,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub rng_scheme: String,
}

impl Header {
    pub fn new(command: &str) -> Self {
        Header {
            schema_version: SCHEMA_VERSION.into(),
            tool: TOOL.into(),
            tool_version: VERSION.into(),
            command: command.into(),
            rng_scheme: SPLITTING_SCHEME.into(),
        }
    }
}

/// Wall-clock figures. Only present when asked for, since they would
/// otherwise break byte-for-byte reproducibility of reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

pub struct Stopwatch(Option<Instant>);

impl Stopwatch {
    pub fn start(enabled: bool) -> Self {
        Stopwatch(enabled.then(Instant::now))
    }

    pub fn finish(&self) -> Option<Timings> {
        self.0.map(|t| Timings {
            total_ms: t.elapsed().as_secs_f64() * 1e3,
        })
    }
}

/// Product vector as one list of `[re, im]` pairs per party.
pub fn product_record(p: &ProductVector) -> Vec<Vec<Pair>> {
    p.locals.iter().map(pairs).collect()
}

/// What a subcommand hands back to the binary.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// The report or artifact, already serialized.
    pub body: String,
    /// One-paragraph human summary for stderr.
    pub summary: String,
    /// False when results contradict the expectation; the exit code is then 1.
    pub ok: bool,
}

impl Outcome {
    pub fn json<T: Serialize>(value: &T, summary: String, ok: bool) -> anyhow::Result<Self> {
        Ok(Outcome {
            body: to_json(value)?,
            summary,
            ok,
        })
    }
}

pub fn verdict_name(is_upb: bool) -> &'static str {
    if is_upb {
        "UPB"
    } else {
        "extendible"
    }
}

use std::fmt;

use higgspair::PoincarePolynomial;
use num_rational::BigRational;
use serde_json::{json, Value};

/// Why a run did not succeed, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, parameters or input files. Exit code 1.
    Validation(String),
    /// A formula-integrity, golden or selftest failure. Exit code 2.
    Integrity(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Integrity(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Validation(_) => "validation",
            Failure::Integrity(_) => "integrity",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Integrity(m) => f.write_str(m),
        }
    }
}

pub fn invalid(e: impl fmt::Display) -> Failure {
    Failure::Validation(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// One report in every format the command supports.
pub struct Output {
    pub json: Value,
    pub pretty: String,
    pub csv: Option<String>,
}

impl Output {
    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values are serializable");
                s.push('\n');
                Ok(s)
            }
            Format::Pretty => Ok(self.pretty.clone()),
            Format::Csv => self.csv.clone().ok_or_else(|| invalid("csv output is not available for this command")),
        }
    }
}

/// Exact rational as `"p/q"`, or `"p"` when integral.
pub fn rational(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    s.trim().parse::<BigRational>().map_err(|_| invalid(format!("expected a rational \"p/q\", got {s:?}")))
}

/// Nonzero terms as `[exponent, "coefficient"]` pairs in ascending order.
pub fn poly(p: &PoincarePolynomial) -> Value {
    Value::Array(p.nonzero_terms().map(|(e, c)| json!([e, c.to_string()])).collect())
}

//! Problem files, JSON emission and error objects.

use std::io;

use polypick::{Complex64, Error, PickProblem, PolydiscPoint};
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_budget: Option<usize>,
    /// Always true: every command is deterministic.
    #[serde(default = "yes")]
    pub deterministic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_dir: Option<String>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub n: usize,
    pub nodes: Vec<Vec<Complex64>>,
    pub targets: Vec<Complex64>,
    #[serde(default)]
    pub options: ProblemOptions,
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    /// Not JSON, or JSON not matching the schema.
    Malformed(String),
    Io(String),
    Numeric(Error),
    /// Verification ran but some check failed; carries the full result.
    Checks(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Malformed(_) => 3,
            Failure::Io(_) | Failure::Numeric(_) | Failure::Checks(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (code, message, details) = match self {
            Failure::Malformed(m) => ("MalformedJson", m.clone(), Value::Null),
            Failure::Io(m) => ("Io", m.clone(), Value::Null),
            Failure::Numeric(e) => (e.code(), e.to_string(), error_details(e)),
            Failure::Checks(v) => {
                let mut v = v.clone();
                v["error"] = json!({ "code": "VerificationFailed", "message": "at least one check failed" });
                return v;
            }
        };
        let mut error = json!({ "code": code, "message": message });
        if !details.is_null() {
            error["details"] = details;
        }
        json!({ "schema_version": SCHEMA_VERSION, "error": error })
    }
}

fn error_details(e: &Error) -> Value {
    match e {
        Error::DimensionMismatch { expected, got } => json!({ "expected": expected, "got": got }),
        Error::NotExtremal { min_eigenvalue } => json!({ "min_eigenvalue": min_eigenvalue }),
        Error::DegenerateCombination { var } => json!({ "var": var }),
        Error::NoConvergence { starts, best_residual } => json!({ "starts": starts, "best_residual": best_residual }),
        Error::InconsistentRatio { sigma_ratio, tau_ratio } => json!({ "sigma_ratio": sigma_ratio, "tau_ratio": tau_ratio }),
        Error::UnsolvablePair { i, j } => json!({ "i": i, "j": j }),
        Error::NotExtremalDatum { scale } | Error::UnsolvableDatum { scale } => json!({ "scale": scale }),
        _ => Value::Null,
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Failure::Malformed(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Failure::Malformed(format!("unsupported schema_version {}", file.schema_version)));
        }
        Ok(file)
    }

    pub fn problem(&self) -> Result<PickProblem, Failure> {
        if self.nodes.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: self.nodes.len() }.into());
        }
        if self.targets.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: self.targets.len() }.into());
        }
        let mut nodes = Vec::with_capacity(3);
        for node in &self.nodes {
            if node.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: node.len() }.into());
            }
            nodes.push(PolydiscPoint::new(node.clone())?);
        }
        let nodes: [PolydiscPoint; 3] = nodes.try_into().expect("three nodes");
        Ok(PickProblem::new(nodes, [self.targets[0], self.targets[1], self.targets[2]])?)
    }

    pub fn from_problem(p: &PickProblem) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: p.dim(),
            nodes: p.nodes.iter().map(|z| z.coords().to_vec()).collect(),
            targets: p.targets.to_vec(),
            options: ProblemOptions { deterministic: true, ..ProblemOptions::default() },
        }
    }
}

/// Writes every float with 17 significant digits.
struct Fixed17<F>(F);

impl<F: Formatter> Formatter for Fixed17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T, pretty: bool) -> String {
    let mut buf = Vec::new();
    let result = if pretty {
        value.serialize(&mut serde_json::Serializer::with_formatter(&mut buf, Fixed17(PrettyFormatter::new())))
    } else {
        value.serialize(&mut serde_json::Serializer::with_formatter(&mut buf, Fixed17(CompactFormatter)))
    };
    result.expect("serialization into memory cannot fail");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}

/// `{:.16e}` for CSV cells.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

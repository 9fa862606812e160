use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use infoex_core::io::parse_json;
use infoex_core::{Error, Tolerances};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::{Common, Format};

/// Process exit codes.
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_AUDIT: i32 = 4;

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Precondition(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Precondition(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInformationallyComplete { .. }
            | Error::Precondition(_)
            | Error::NotPrime(_)
            | Error::NoDetection => Failure::Precondition(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

/// What a successful command reports back. `audit_failure` set means the
/// output was written but a bound was violated beyond tolerance.
#[derive(Debug, Default)]
pub struct Outcome {
    pub audit_failure: Option<String>,
}

impl Outcome {
    pub fn check(slacks: &[(&str, f64)], tol: &Tolerances) -> Self {
        let bad: Vec<String> = slacks
            .iter()
            .filter(|(_, s)| *s < -tol.state)
            .map(|(name, s)| format!("{name} slack {s:.3e}"))
            .collect();
        Outcome {
            audit_failure: (!bad.is_empty()).then(|| bad.join(", ")),
        }
    }
}

/// Settings shared by every subcommand, with defaults filled in.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(common: &Common, default_format: Format) -> CliResult<Self> {
        let mut tolerances = Tolerances::default();
        if let Some(t) = common.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(Failure::Validation(format!(
                    "--tolerance must be positive, got {t}"
                )));
            }
            tolerances = tolerances.with_state(t);
        }
        Ok(Self {
            tolerances,
            seed: common.seed,
            out: common.out.clone(),
            format: common.format.unwrap_or(default_format),
        })
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Validation(format!("cannot write to stdout: {e}"))),
        }
    }

    /// JSON object with the run settings merged in.
    pub fn write_json<T: Serialize>(&self, command: &str, body: &T) -> CliResult<()> {
        #[derive(Serialize)]
        struct Envelope<'a, T> {
            command: &'a str,
            seed: u64,
            tolerances: Tolerances,
            #[serde(flatten)]
            body: &'a T,
        }
        let env = Envelope {
            command,
            seed: self.seed,
            tolerances: self.tolerances,
            body,
        };
        let mut text = serde_json::to_string_pretty(&env).expect("plain data serializes");
        text.push('\n');
        self.emit(&text)
    }

    /// Rows as CSV with a header, or as a JSON `rows` array.
    pub fn write_rows<T: Serialize>(&self, command: &str, rows: &[T]) -> CliResult<()> {
        match self.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Rows<'a, T> {
                    rows: &'a [T],
                }
                self.write_json(command, &Rows { rows })
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(r)
                        .map_err(|e| Failure::Validation(e.to_string()))?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| Failure::Validation(e.to_string()))?;
                self.emit(&String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
        }
    }

    /// Explicit header plus numeric records.
    pub fn write_table(
        &self,
        command: &str,
        header: &[String],
        rows: &[Vec<String>],
    ) -> CliResult<()> {
        match self.format {
            Format::Json => {
                let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                    .iter()
                    .map(|r| {
                        header
                            .iter()
                            .zip(r)
                            .map(|(h, v)| {
                                let value = v
                                    .parse::<f64>()
                                    .ok()
                                    .and_then(serde_json::Number::from_f64)
                                    .map_or_else(
                                        || serde_json::Value::String(v.clone()),
                                        serde_json::Value::Number,
                                    );
                                (h.clone(), value)
                            })
                            .collect()
                    })
                    .collect();
                #[derive(Serialize)]
                struct Rows {
                    rows: Vec<serde_json::Map<String, serde_json::Value>>,
                }
                self.write_json(command, &Rows { rows: objects })
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let fail = |e: csv::Error| Failure::Validation(e.to_string());
                w.write_record(header).map_err(fail)?;
                for r in rows {
                    w.write_record(r).map_err(fail)?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| Failure::Validation(e.to_string()))?;
                self.emit(&String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

/// Prefix core errors with the file they came from.
pub fn in_file<T>(path: &Path, r: infoex_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Validation(m) => Failure::Validation(format!("{}: {m}", path.display())),
        Failure::Precondition(m) => Failure::Precondition(format!("{}: {m}", path.display())),
    })
}

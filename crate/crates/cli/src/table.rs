//! Output encoding shared by the commands: CSV with fixed 17-digit floats and
//! JSON documents built from serde structs.

use dipole_core::quantize::{CellStatus, SpectrumEntry, SpectrumRow};
use dipole_core::Frame;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scientific notation with 17 significant digits; empty for `None`.
pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

/// Writes `header` and `rows` as CSV.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("write to memory");
    for row in rows {
        writer.write_record(row).expect("write to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

pub const SPECTRUM_HEADER: [&str; 8] = [
    "n", "l", "frame", "omega", "varpi", "tau", "energy", "status",
];

/// One spectrum row in flat form; the numeric fields are null unless
/// `status` is `ok`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumRecord {
    pub n: u32,
    pub l: i32,
    pub frame: Frame,
    pub omega: Option<f64>,
    pub varpi: Option<f64>,
    pub tau: Option<f64>,
    pub energy: Option<f64>,
    pub status: CellStatus,
}

impl From<&SpectrumRow> for SpectrumRecord {
    fn from(row: &SpectrumRow) -> Self {
        let e = row.entry.as_ref();
        Self {
            n: row.n,
            l: row.l,
            frame: row.frame,
            omega: e.map(|e| e.omega),
            varpi: e.map(|e| e.varpi),
            tau: e.map(|e| e.tau),
            energy: e.map(|e| e.energy),
            status: row.status,
        }
    }
}

impl SpectrumRecord {
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.l.to_string(),
            self.frame.to_string(),
            optional(self.omega),
            optional(self.varpi),
            optional(self.tau),
            optional(self.energy),
            self.status.as_str().to_string(),
        ]
    }

    fn into_row(self) -> Result<SpectrumRow, DecodeError> {
        let numbers = [self.omega, self.varpi, self.tau, self.energy];
        let entry = match (self.status, numbers) {
            (CellStatus::Ok, [Some(omega), Some(varpi), Some(tau), Some(energy)]) => {
                Some(SpectrumEntry {
                    n: self.n,
                    l: self.l,
                    frame: self.frame,
                    omega,
                    varpi,
                    tau,
                    energy,
                })
            }
            (CellStatus::Ok, _) => {
                return Err(DecodeError::MissingValues {
                    n: self.n,
                    l: self.l,
                })
            }
            (_, [None, None, None, None]) => None,
            (status, _) => {
                return Err(DecodeError::UnexpectedValues {
                    n: self.n,
                    l: self.l,
                    status: status.as_str(),
                })
            }
        };
        Ok(SpectrumRow {
            n: self.n,
            l: self.l,
            frame: self.frame,
            status: self.status,
            entry,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDocument {
    pub frame: Frame,
    pub rows: Vec<SpectrumRecord>,
}

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed spectrum document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("row (n={n}, l={l}) has status ok but lacks numeric values")]
    MissingValues { n: u32, l: i32 },
    #[error("row (n={n}, l={l}) has status {status} but carries numeric values")]
    UnexpectedValues {
        n: u32,
        l: i32,
        status: &'static str,
    },
    #[error("row (n={n}, l={l}) is in frame {row}, document says {document}")]
    FrameMismatch {
        n: u32,
        l: i32,
        row: Frame,
        document: Frame,
    },
}

/// Reads the JSON written by `spectrum` back into rows.
pub fn parse_spectrum_json(text: &str) -> Result<Vec<SpectrumRow>, DecodeError> {
    let doc: SpectrumDocument = serde_json::from_str(text)?;
    doc.rows
        .into_iter()
        .map(|record| {
            if record.frame != doc.frame {
                return Err(DecodeError::FrameMismatch {
                    n: record.n,
                    l: record.l,
                    row: record.frame,
                    document: doc.frame,
                });
            }
            record.into_row()
        })
        .collect()
}

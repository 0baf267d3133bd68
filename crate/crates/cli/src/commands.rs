//! The five subcommands. Each returns its full output instead of printing, so
//! the binary and the tests share one code path.

use dipole_core::heun::normalize_samples;
use dipole_core::oracle::linspace;
use dipole_core::params::effective_frequency_at;
use dipole_core::quantize::{
    allowed_frequencies_n1, allowed_frequencies_with, default_bracket, solve_level, CellStatus,
    Method,
};
use dipole_core::{
    energy_level, radial_wavefunction, spectrum, truncation_residual, Error, Frame, RadialSolution,
    SpectrumRow,
};
use serde::Serialize;

use crate::config::{set_param, Format, RunConfig};
use crate::table::{
    csv_table, json, number, optional, SpectrumDocument, SpectrumRecord, SPECTRUM_HEADER,
};
use crate::validate::run_checks;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_ROOT: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// What a command produced: the document for stdout or `--out`, messages for
/// stderr, and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub body: String,
    pub diagnostics: Vec<String>,
}

impl Output {
    fn new(body: String, diagnostics: Vec<String>, failure_code: i32) -> Self {
        let code = if diagnostics.is_empty() {
            EXIT_OK
        } else {
            failure_code
        };
        Self {
            code,
            body,
            diagnostics,
        }
    }

    fn failure(code: i32, message: String) -> Self {
        Self {
            code,
            body: String::new(),
            diagnostics: vec![message],
        }
    }
}

fn cell_diagnostics(rows: &[SpectrumRow]) -> Vec<String> {
    rows.iter()
        .filter(|r| r.status != CellStatus::Ok)
        .map(|r| format!("n={} l={} {}: {}", r.n, r.l, r.frame, r.status.as_str()))
        .collect()
}

fn spectrum_records(cfg: &RunConfig) -> (Vec<SpectrumRecord>, Vec<String>) {
    let rows = spectrum(
        &cfg.params,
        cfg.n_range.to_range(),
        cfg.l_range.to_range(),
        cfg.frame,
        &cfg.search_options(),
    );
    let diagnostics = cell_diagnostics(&rows);
    (rows.iter().map(SpectrumRecord::from).collect(), diagnostics)
}

/// Energies and allowed frequencies over the configured (n, ℓ) grid.
pub fn cmd_spectrum(cfg: &RunConfig) -> Output {
    let (records, diagnostics) = spectrum_records(cfg);
    let body = match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = records.iter().map(SpectrumRecord::csv_fields).collect();
            csv_table(&SPECTRUM_HEADER, &rows)
        }
        Format::Json => json(&SpectrumDocument {
            frame: cfg.frame,
            rows: records,
        }),
    };
    Output::new(body, diagnostics, EXIT_NO_ROOT)
}

pub const FREQUENCY_HEADER: [&str; 9] = [
    "n",
    "l",
    "frame",
    "method",
    "root_index",
    "omega",
    "varpi",
    "residual",
    "status",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyRecord {
    pub n: u32,
    pub l: i32,
    pub frame: Frame,
    pub method: Method,
    pub root_index: Option<usize>,
    pub omega: Option<f64>,
    pub varpi: Option<f64>,
    /// |b_{n+1}(ω)|
    pub residual: Option<f64>,
    pub status: CellStatus,
}

impl FrequencyRecord {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.l.to_string(),
            self.frame.to_string(),
            self.method.as_str().to_string(),
            self.root_index.map(|i| i.to_string()).unwrap_or_default(),
            optional(self.omega),
            optional(self.varpi),
            optional(self.residual),
            self.status.as_str().to_string(),
        ]
    }
}

#[derive(Serialize)]
struct FrequencyDocument<'a> {
    frame: Frame,
    rows: &'a [FrequencyRecord],
}

fn method_records(cfg: &RunConfig, n: u32, l: i32, method: Method) -> Vec<FrequencyRecord> {
    let p = &cfg.params;
    let frame = cfg.frame;
    let opts = cfg.search_options();
    let roots = match method {
        Method::Cubic => allowed_frequencies_n1(p, l, frame).and_then(|mut roots| {
            if let Some(cap) = opts.omega_cap {
                roots.retain(|&w| w <= cap);
            }
            if roots.is_empty() {
                Err(Error::NoPositiveRoot)
            } else {
                Ok(roots)
            }
        }),
        Method::Bisection => default_bracket(p, n, l, frame)
            .and_then(|bracket| allowed_frequencies_with(p, n, l, frame, bracket, &opts)),
    };
    let blank = FrequencyRecord {
        n,
        l,
        frame,
        method,
        root_index: None,
        omega: None,
        varpi: None,
        residual: None,
        status: CellStatus::Ok,
    };
    match roots {
        Ok(roots) => roots
            .into_iter()
            .enumerate()
            .map(|(index, omega)| FrequencyRecord {
                root_index: Some(index),
                omega: Some(omega),
                varpi: Some(effective_frequency_at(omega, frame.angular_velocity(p))),
                residual: truncation_residual(p, l, frame, n, omega)
                    .ok()
                    .map(f64::abs),
                ..blank.clone()
            })
            .collect(),
        Err(err) => vec![FrequencyRecord {
            status: CellStatus::from_error(&err),
            ..blank
        }],
    }
}

/// Allowed cyclotron frequencies per (n, ℓ). For n = 1 both the cubic and the
/// recurrence search are reported, interleaved by root index.
pub fn cmd_frequencies(cfg: &RunConfig) -> Output {
    let mut records = Vec::new();
    for n in cfg.n_range.to_range() {
        for l in cfg.l_range.to_range() {
            let mut cell = method_records(cfg, n, l, Method::Bisection);
            if n == 1 {
                cell.extend(method_records(cfg, n, l, Method::Cubic));
            }
            cell.sort_by_key(|r| (r.root_index, r.method != Method::Cubic));
            records.extend(cell);
        }
    }
    let diagnostics: Vec<String> = records
        .iter()
        .filter(|r| r.status != CellStatus::Ok)
        .map(|r| {
            format!(
                "n={} l={} {} ({}): {}",
                r.n,
                r.l,
                r.frame,
                r.method.as_str(),
                r.status.as_str()
            )
        })
        .collect();
    let body = match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = records.iter().map(FrequencyRecord::csv_fields).collect();
            csv_table(&FREQUENCY_HEADER, &rows)
        }
        Format::Json => json(&FrequencyDocument {
            frame: cfg.frame,
            rows: &records,
        }),
    };
    Output::new(body, diagnostics, EXIT_NO_ROOT)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub y: f64,
    pub r: f64,
    pub f: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_normalized: Option<f64>,
}

#[derive(Serialize)]
struct WavefunctionDocument {
    n: u32,
    l: i32,
    frame: Frame,
    root_index: usize,
    omega: f64,
    varpi: f64,
    energy: f64,
    samples: Vec<Sample>,
}

/// Samples of F on an even grid in y from 0 to `y_max`.
pub fn cmd_wavefunction(cfg: &RunConfig) -> Output {
    let w = &cfg.wavefunction;
    let p = &cfg.params;
    let roots = match solve_level(p, w.n, w.l, cfg.frame, &cfg.search_options()) {
        Ok((_, roots)) => roots,
        Err(err) => {
            let code = match CellStatus::from_error(&err) {
                CellStatus::Degenerate | CellStatus::NoRoot => EXIT_NO_ROOT,
                _ => EXIT_USAGE,
            };
            return Output::failure(code, format!("n={} l={}: {err}", w.n, w.l));
        }
    };
    let Some(&omega) = roots.get(w.root_index) else {
        return Output::failure(
            EXIT_NO_ROOT,
            format!(
                "n={} l={}: root index {} requested, {} roots found",
                w.n,
                w.l,
                w.root_index,
                roots.len()
            ),
        );
    };
    let solved = RadialSolution::quantized(p, w.l, cfg.frame, w.n, omega)
        .and_then(|rs| energy_level(p, w.n, w.l, omega, cfg.frame).map(|e| (rs, e)));
    let (solution, energy) = match solved {
        Ok(v) => v,
        Err(err) => return Output::failure(EXIT_USAGE, err.to_string()),
    };
    let ys = linspace(0.0, w.y_max, w.grid_points);
    let rs: Vec<f64> = ys.iter().map(|&y| solution.scales.to_physical(y)).collect();
    let mut fs = Vec::with_capacity(ys.len());
    for &y in &ys {
        match radial_wavefunction(&solution, y) {
            Ok(f) => fs.push(f),
            Err(err) => return Output::failure(EXIT_USAGE, err.to_string()),
        }
    }
    let normalized = w.normalized.then(|| normalize_samples(&rs, &fs));
    let samples: Vec<Sample> = (0..ys.len())
        .map(|i| Sample {
            y: ys[i],
            r: rs[i],
            f: fs[i],
            f_normalized: normalized.as_ref().map(|v| v[i]),
        })
        .collect();
    let body = match cfg.format {
        Format::Csv => {
            let mut header = vec!["y", "r", "F"];
            if w.normalized {
                header.push("F_normalized");
            }
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|s| {
                    let mut row = vec![number(s.y), number(s.r), number(s.f)];
                    if let Some(v) = s.f_normalized {
                        row.push(number(v));
                    }
                    row
                })
                .collect();
            csv_table(&header, &rows)
        }
        Format::Json => json(&WavefunctionDocument {
            n: w.n,
            l: w.l,
            frame: cfg.frame,
            root_index: w.root_index,
            omega,
            varpi: solution.scales.varpi,
            energy,
            samples,
        }),
    };
    Output::new(body, Vec::new(), EXIT_OK)
}

/// Runs the oracle checks and emits the JSON report regardless of `--format`.
pub fn cmd_validate(cfg: &RunConfig) -> Output {
    let report = run_checks(cfg);
    let diagnostics: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.failed())
        .map(|c| format!("check {} failed: {}", c.name, c.summary()))
        .collect();
    Output::new(json(&report), diagnostics, EXIT_VALIDATION)
}

#[derive(Serialize)]
struct SweepRecord {
    value: f64,
    #[serde(flatten)]
    row: SpectrumRecord,
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    parameter: &'a str,
    frame: Frame,
    rows: Vec<SweepRecord>,
}

/// Spectrum repeated for each value of one parameter.
pub fn cmd_sweep(cfg: &RunConfig) -> Output {
    let Some(sweep) = &cfg.sweep else {
        return Output::failure(
            EXIT_USAGE,
            "sweep needs a `sweep` section in the config".into(),
        );
    };
    let values = match sweep.points() {
        Ok(v) => v,
        Err(err) => return Output::failure(EXIT_USAGE, err.to_string()),
    };
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for value in values {
        let mut point = cfg.clone();
        if let Err(err) = set_param(&mut point.params, &sweep.parameter, value) {
            return Output::failure(EXIT_USAGE, err.to_string());
        }
        if let Err(err) = point.params.validate() {
            return Output::failure(EXIT_USAGE, format!("{} = {value}: {err}", sweep.parameter));
        }
        let (rows, cell_messages) = spectrum_records(&point);
        diagnostics.extend(
            cell_messages
                .into_iter()
                .map(|m| format!("{} = {value}: {m}", sweep.parameter)),
        );
        records.extend(rows.into_iter().map(|row| SweepRecord { value, row }));
    }
    let body = match cfg.format {
        Format::Csv => {
            let mut header = vec!["parameter", "value"];
            header.extend(SPECTRUM_HEADER);
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    let mut fields = vec![sweep.parameter.clone(), number(r.value)];
                    fields.extend(r.row.csv_fields());
                    fields
                })
                .collect();
            csv_table(&header, &rows)
        }
        Format::Json => json(&SweepDocument {
            parameter: &sweep.parameter,
            frame: cfg.frame,
            rows: records,
        }),
    };
    Output::new(body, diagnostics, EXIT_NO_ROOT)
}

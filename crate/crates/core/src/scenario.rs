//! Scenario files and CSV time scans.
//!
//! A scenario binds the three coefficient functions to system constants and a
//! time grid:
//!
//! ```text
//! # comment
//! [system]
//! m = 1.0
//! omega0 = 1.0
//! hbar = 1.0
//!
//! [coefficients]
//! beta1 = "1"
//! beta2 = "0.2*cos(t)"
//! beta3 = "1 + 0.1*sin(t)"
//!
//! [scan]
//! t_start = 0.0
//! t_end = 6.283185307179586
//! steps = 100
//! ```
//!
//! The `[system]` section and each of its keys are optional (default 1.0).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::tdct::{self, CoefficientSample, CoefficientSource, SystemConstants, TdctError};
use crate::timefunc::{DomainError, ParseError, TimeFunction};

/// Exact CSV header written by [`run_scan`].
pub const CSV_COLUMNS: [&str; 14] = [
    "t", "beta1", "beta2", "beta3", "beta3_dot", "gamma_mix", "rho1", "theta2", "r2", "phi2", "theta_o", "r_o",
    "phi_o", "Omega2",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: invalid expression for {key}: {source}")]
    Expression { line: usize, key: String, source: ParseError },
    #[error("missing key '{key}' in [{section}]")]
    MissingKey { section: &'static str, key: &'static str },
    #[error("invalid scan: {0}")]
    InvalidScan(String),
    #[error("beta3 must be positive on the scan grid; beta3({t}) = {value}")]
    Positivity { t: f64, value: f64 },
    #[error("coefficient cannot be evaluated on the scan grid: {0}")]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Invalid(#[from] TdctError),
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("failed to write scan output: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Tdct(#[from] TdctError),
}

/// `β₁, β₂, β₃` as functions of time, with the derivatives taken once up front.
#[derive(Debug, Clone)]
pub struct Coefficients {
    beta1: TimeFunction,
    beta2: TimeFunction,
    beta3: TimeFunction,
    beta2_dot: TimeFunction,
    beta3_dot: TimeFunction,
    beta3_ddot: TimeFunction,
}

impl Coefficients {
    pub fn new(beta1: TimeFunction, beta2: TimeFunction, beta3: TimeFunction) -> Self {
        let beta2_dot = beta2.derivative();
        let beta3_dot = beta3.derivative();
        let beta3_ddot = beta3_dot.derivative();
        Self { beta1, beta2, beta3, beta2_dot, beta3_dot, beta3_ddot }
    }

    pub fn parse(beta1: &str, beta2: &str, beta3: &str) -> Result<Self, ParseError> {
        Ok(Self::new(beta1.parse()?, beta2.parse()?, beta3.parse()?))
    }

    pub fn beta3(&self) -> &TimeFunction {
        &self.beta3
    }

    fn try_sample(&self, t: f64) -> Result<Result<CoefficientSample, TdctError>, DomainError> {
        Ok(CoefficientSample::new(
            t,
            self.beta1.eval(t)?,
            self.beta2.eval(t)?,
            self.beta3.eval(t)?,
            self.beta2_dot.eval(t)?,
            self.beta3_dot.eval(t)?,
            self.beta3_ddot.eval(t)?,
        ))
    }
}

impl CoefficientSource for Coefficients {
    fn sample(&self, t: f64) -> Result<CoefficientSample, TdctError> {
        self.try_sample(t).map_err(|e| TdctError::Coefficients { t, message: e.to_string() })?
    }
}

/// Uniform grid `t_start + i·(t_end − t_start)/steps`, `i = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scan {
    t_start: f64,
    t_end: f64,
    steps: usize,
}

impl Scan {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self, ScenarioError> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(ScenarioError::InvalidScan("t_start and t_end must be finite".into()));
        }
        if t_end <= t_start {
            return Err(ScenarioError::InvalidScan(format!("t_end ({t_end}) must exceed t_start ({t_start})")));
        }
        if steps == 0 {
            return Err(ScenarioError::InvalidScan("steps must be at least 1".into()));
        }
        Ok(Self { t_start, t_end, steps })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = (self.t_end - self.t_start) / self.steps as f64;
        (0..=self.steps).map(move |i| if i == self.steps { self.t_end } else { self.t_start + i as f64 * h })
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub constants: SystemConstants,
    pub coefficients: Coefficients,
    pub scan: Scan,
}

impl Scenario {
    /// Checks that every coefficient is defined and `β₃ > 0` on the grid.
    pub fn new(constants: SystemConstants, coefficients: Coefficients, scan: Scan) -> Result<Self, ScenarioError> {
        for t in scan.points() {
            let beta3 = coefficients.beta3.eval(t)?;
            if beta3 <= 0.0 {
                return Err(ScenarioError::Positivity { t, value: beta3 });
            }
            coefficients.try_sample(t)??;
        }
        Ok(Self { constants, coefficients, scan })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    System,
    Coefficients,
    Scan,
}

#[derive(Default)]
struct Raw {
    m: Option<f64>,
    omega0: Option<f64>,
    hbar: Option<f64>,
    beta: [Option<(TimeFunction, usize)>; 3],
    t_start: Option<f64>,
    t_end: Option<f64>,
    steps: Option<usize>,
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), ScenarioError> {
    if slot.is_some() {
        return Err(ScenarioError::Format { line, message: format!("duplicate key '{key}'") });
    }
    *slot = Some(value);
    Ok(())
}

fn parse_decimal(value: &str, key: &str, line: usize) -> Result<f64, ScenarioError> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ScenarioError::Format { line, message: format!("'{key}' expects a decimal number, got '{value}'") }),
    }
}

fn parse_quoted(value: &str, key: &str, line: usize) -> Result<String, ScenarioError> {
    value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .filter(|inner| !inner.contains('"'))
        .map(str::to_owned)
        .ok_or_else(|| ScenarioError::Format {
            line,
            message: format!("'{key}' expects a double-quoted expression, got {value}"),
        })
}

/// Parses scenario text; see the module docs for the format.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut raw = Raw::default();
    let mut section = None;
    for (index, full) in text.lines().enumerate() {
        let line = index + 1;
        let content = strip_comment(full).trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = Some(match name.trim() {
                "system" => Section::System,
                "coefficients" => Section::Coefficients,
                "scan" => Section::Scan,
                other => {
                    return Err(ScenarioError::Format { line, message: format!("unknown section [{other}]") })
                }
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ScenarioError::Format {
            line,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let Some(current) = section else {
            return Err(ScenarioError::Format { line, message: format!("key '{key}' appears before any section") });
        };
        match (current, key) {
            (Section::System, "m") => set_once(&mut raw.m, parse_decimal(value, key, line)?, key, line)?,
            (Section::System, "omega0") => set_once(&mut raw.omega0, parse_decimal(value, key, line)?, key, line)?,
            (Section::System, "hbar") => set_once(&mut raw.hbar, parse_decimal(value, key, line)?, key, line)?,
            (Section::Coefficients, "beta1" | "beta2" | "beta3") => {
                let src = parse_quoted(value, key, line)?;
                let f = TimeFunction::parse(&src).map_err(|source| ScenarioError::Expression {
                    line,
                    key: key.to_string(),
                    source,
                })?;
                let slot = match key {
                    "beta1" => 0,
                    "beta2" => 1,
                    _ => 2,
                };
                set_once(&mut raw.beta[slot], (f, line), key, line)?;
            }
            (Section::Scan, "t_start") => set_once(&mut raw.t_start, parse_decimal(value, key, line)?, key, line)?,
            (Section::Scan, "t_end") => set_once(&mut raw.t_end, parse_decimal(value, key, line)?, key, line)?,
            (Section::Scan, "steps") => {
                let steps = value.parse::<usize>().map_err(|_| ScenarioError::Format {
                    line,
                    message: format!("'steps' expects a positive integer, got '{value}'"),
                })?;
                set_once(&mut raw.steps, steps, key, line)?;
            }
            _ => return Err(ScenarioError::Format { line, message: format!("unknown key '{key}' in this section") }),
        }
    }

    let constants = SystemConstants::new(raw.m.unwrap_or(1.0), raw.omega0.unwrap_or(1.0), raw.hbar.unwrap_or(1.0))?;
    let [b1, b2, b3] = raw.beta;
    let b1 = b1.ok_or(ScenarioError::MissingKey { section: "coefficients", key: "beta1" })?.0;
    let b2 = b2.ok_or(ScenarioError::MissingKey { section: "coefficients", key: "beta2" })?.0;
    let b3 = b3.ok_or(ScenarioError::MissingKey { section: "coefficients", key: "beta3" })?.0;
    let scan = Scan::new(
        raw.t_start.ok_or(ScenarioError::MissingKey { section: "scan", key: "t_start" })?,
        raw.t_end.ok_or(ScenarioError::MissingKey { section: "scan", key: "t_end" })?,
        raw.steps.ok_or(ScenarioError::MissingKey { section: "scan", key: "steps" })?,
    )?;
    Scenario::new(constants, Coefficients::new(b1, b2, b3), scan)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })?;
    parse_scenario(&text)
}

/// Formats a value with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one CSV row per grid point and returns the number of data rows.
pub fn run_scan(sc: &Scenario, out: &mut impl Write) -> Result<usize, ScanError> {
    let k = &sc.constants;
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    let mut rows = 0;
    for t in sc.scan.points() {
        let s = sc.coefficients.sample(t)?;
        let w2 = tdct::w2_params(&s, k)?;
        let w = tdct::w_combined(&s, k)?;
        let fields = [
            t,
            s.beta1(),
            s.beta2(),
            s.beta3(),
            s.beta3_dot(),
            tdct::gamma_mix(&s, k),
            tdct::w1_rho(&s)?,
            w2.theta(),
            w2.r(),
            w2.phi(),
            w.theta(),
            w.r(),
            w.phi(),
            tdct::omega_squared(&s, k),
        ];
        let line: Vec<String> = fields.iter().map(|v| fmt_float(*v)).collect();
        writeln!(out, "{}", line.join(","))?;
        rows += 1;
    }
    out.flush()?;
    Ok(rows)
}

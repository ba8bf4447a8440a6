use std::fmt::Write as _;
use std::path::Path;

use crate::config::{Kind, RawConfig, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::run::{evaluate, fmt17, RunOptions, RunReport};

pub const SWEEP_FILE: &str = "sweep.csv";

/// Fields a sweep may vary, with the kinds they apply to.
pub const SWEEPABLE: &[(&str, &[Kind])] = &[
    ("theta0", &[Kind::TwoLevel]),
    ("energy", &[Kind::TwoLevel]),
    ("dimension", &[Kind::Grover]),
    ("e_perp", &[Kind::Grover]),
    ("horizon", &[Kind::TwoLevel, Kind::Grover, Kind::Custom]),
];

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<RunReport, String>,
}

/// Parses a comma-separated list; blank entries are ignored.
pub fn parse_values(list: &str) -> CliResult<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::schema("--values", format!("`{s}` is not a finite number")))
        })
        .collect()
}

fn check_param(base: &RawConfig, param: &str) -> CliResult<()> {
    let kind = base.resolved_kind()?;
    match SWEEPABLE.iter().find(|(name, _)| *name == param) {
        None => {
            let names: Vec<&str> = SWEEPABLE.iter().map(|(n, _)| *n).collect();
            Err(CliError::schema("--param", format!("`{param}` is not sweepable (one of {names:?})")))
        }
        Some((_, kinds)) if !kinds.contains(&kind) => Err(CliError::schema(
            "--param",
            format!("`{param}` does not apply to kind `{}`", kind.name()),
        )),
        Some(_) => Ok(()),
    }
}

fn with_value(base: &RawConfig, param: &str, value: f64) -> CliResult<RawConfig> {
    let mut raw = base.clone();
    match param {
        "theta0" => raw.theta0 = Some(value),
        "energy" => raw.energy = Some(value),
        "e_perp" => raw.e_perp = Some(value),
        "horizon" => raw.horizon = Some(value),
        "dimension" => {
            if value < 0.0 || value.fract() != 0.0 || value > usize::MAX as f64 {
                return Err(CliError::schema("dimension", format!("must be a non-negative integer, got {value}")));
            }
            raw.dimension = Some(value as usize);
        }
        _ => unreachable!("checked by check_param"),
    }
    Ok(raw)
}

/// One run per value. Failures are kept in their row and do not stop the sweep.
pub fn sweep(base: &RawConfig, param: &str, values: &[f64]) -> CliResult<Vec<SweepRow>> {
    check_param(base, param)?;
    Ok(values
        .iter()
        .map(|&value| {
            let outcome = with_value(base, param, value)
                .and_then(|raw| ScenarioConfig::from_raw(&raw))
                .and_then(|cfg| evaluate(&cfg, RunOptions::default()))
                .map(|eval| eval.report)
                .map_err(|e| e.to_string());
            SweepRow { value, outcome }
        })
        .collect())
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\"").replace(['\n', '\r'], " "))
}

pub fn sweep_csv(param: &str, rows: &[SweepRow]) -> String {
    let mut out = format!("{param},theta_T,path_length,slack,bound_time,measured_crossing_time,error\n");
    for row in rows {
        match &row.outcome {
            Ok(r) => {
                let crossing = r
                    .grover
                    .as_ref()
                    .and_then(|g| g.measured_crossing_time)
                    .map(fmt17)
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{crossing},",
                    fmt17(row.value),
                    fmt17(r.qsl.theta_t),
                    fmt17(r.qsl.path_length),
                    fmt17(r.qsl.slack),
                    fmt17(r.qsl.bound_time),
                );
            }
            Err(msg) => {
                let _ = writeln!(out, "{},,,,,,{}", fmt17(row.value), quoted(msg));
            }
        }
    }
    out
}

/// Runs the sweep and writes `sweep.csv` into `out_dir` (or the working
/// directory).
pub fn run_sweep(base: &RawConfig, param: &str, values: &[f64], out_dir: Option<&Path>) -> CliResult<Vec<SweepRow>> {
    let rows = sweep(base, param, values)?;
    let path = out_dir.map_or_else(|| Path::new(SWEEP_FILE).to_path_buf(), |d| d.join(SWEEP_FILE));
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(&path, sweep_csv(param, &rows)).map_err(|e| CliError::io(&path, e))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_raw_str;

    #[test]
    fn values_parse_and_skip_blanks() {
        assert_eq!(parse_values("1, 2.5,,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert!(parse_values("").unwrap().is_empty());
        assert!(parse_values("1,x").is_err());
        assert!(parse_values("nan").is_err());
    }

    #[test]
    fn param_must_fit_kind() {
        let raw = parse_raw_str(r#"{"theta0": 0.5, "energy": 1, "horizon": 1}"#).unwrap();
        assert!(sweep(&raw, "dimension", &[4.0]).is_err());
        assert!(sweep(&raw, "colour", &[4.0]).is_err());
        assert!(sweep(&raw, "energy", &[]).unwrap().is_empty());
    }

    #[test]
    fn failing_rows_are_recorded() {
        let raw = parse_raw_str(r#"{"theta0": 0.5, "energy": 1, "horizon": 1, "num_steps": 100}"#).unwrap();
        let rows = sweep(&raw, "theta0", &[0.5, 2.0, 0.7]).unwrap();
        assert!(rows[0].outcome.is_ok() && rows[2].outcome.is_ok());
        assert!(rows[1].outcome.as_ref().unwrap_err().contains("theta0"));
        let csv = sweep_csv("theta0", &rows);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(2).unwrap().starts_with("2.0000000000000000e0,,,,,,\""));
    }
}

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use itqsl::models::{
    grover_crossing_time, grover_model, grover_runtime, grover_runtime_large_n, two_level_dispersion_integral,
    two_level_hamiltonian, two_level_theta,
};
use itqsl::{
    fidelity_to, propagate_exact, qsl_report_with, saturation_certificate_with, HermitianOperator, QslReport,
    StateVector, TimeGrid, Trajectory,
};
use serde::{Deserialize, Serialize};

use crate::config::{RawConfig, Scenario, ScenarioConfig};
use crate::error::{CliError, CliResult};

pub const TRAJECTORY_HEADER: &str = "t,log_norm,theta,delta_h,fidelity_target";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationSummary {
    /// Over checked samples only.
    pub max_residual: f64,
    pub fraction_skipped: f64,
    pub min_lambda: Option<f64>,
    pub is_saturating: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroverSummary {
    pub runtime_bound_exact: f64,
    #[serde(rename = "runtime_bound_largeN")]
    pub runtime_bound_large_n: f64,
    /// `None` when `r(t)` stays above ε up to the horizon.
    pub measured_crossing_time: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelSummary {
    pub closed_form_integral: f64,
    #[serde(rename = "closed_form_theta_T")]
    pub closed_form_theta_t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub propagator: String,
    pub num_samples: usize,
    /// Only filled in on request, since it breaks byte-for-byte reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: RawConfig,
    #[serde(flatten)]
    pub qsl: QslReport,
    pub bound_holds: bool,
    pub saturation: SaturationSummary,
    pub final_fidelity_target: f64,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub grover: Option<GroverSummary>,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub two_level: Option<TwoLevelSummary>,
    pub metadata: Metadata,
}

impl RunReport {
    pub fn all_finite(&self) -> bool {
        let q = &self.qsl;
        let s = &self.saturation;
        let mut values = vec![
            q.theta_t,
            q.path_length,
            q.avg_speed,
            q.bound_time,
            q.actual_time,
            q.slack,
            s.max_residual,
            s.fraction_skipped,
            self.final_fidelity_target,
        ];
        values.extend(s.min_lambda);
        if let Some(g) = &self.grover {
            values.extend([g.runtime_bound_exact, g.runtime_bound_large_n]);
            values.extend(g.measured_crossing_time);
        }
        if let Some(t) = &self.two_level {
            values.extend([t.closed_form_integral, t.closed_form_theta_t]);
        }
        values.extend(self.metadata.elapsed_seconds);
        values.iter().all(|v| v.is_finite())
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        // serde_json::Value keeps object keys in a BTreeMap
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A completed run held in memory.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub report: RunReport,
    pub trajectory: Trajectory,
    /// `(t, |⟨target|φ(t)⟩|²)` per sample.
    pub fidelity: Vec<(f64, f64)>,
}

impl Evaluation {
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.trajectory.samples.len() + 1));
        out.push_str(TRAJECTORY_HEADER);
        out.push('\n');
        for (s, (_, f)) in self.trajectory.samples.iter().zip(&self.fidelity) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt17(s.t),
                fmt17(s.log_norm),
                fmt17(s.theta),
                fmt17(s.delta_h),
                fmt17(*f)
            );
        }
        out
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub record_timing: bool,
}

fn model(cfg: &ScenarioConfig) -> CliResult<(HermitianOperator, StateVector, StateVector)> {
    Ok(match &cfg.scenario {
        Scenario::TwoLevel(p) => {
            let (h, psi0) = two_level_hamiltonian(p)?;
            let ground = h.eig()?.eigenvectors[0].clone();
            (h, psi0, ground)
        }
        Scenario::Grover { params, embed } => {
            let m = grover_model(params, *embed)?;
            (m.hamiltonian, m.psi0, m.marked)
        }
        Scenario::Custom {
            hamiltonian,
            initial_state,
        } => {
            // degenerate ground spaces: the first eigenvector returned
            let ground = hamiltonian.eig()?.eigenvectors[0].clone();
            (hamiltonian.clone(), initial_state.clone(), ground)
        }
    })
}

/// Runs the scenario without touching the filesystem.
pub fn evaluate(cfg: &ScenarioConfig, opts: RunOptions) -> CliResult<Evaluation> {
    let start = Instant::now();
    let (h, psi0, target) = model(cfg)?;
    let grid = TimeGrid::new(cfg.horizon, cfg.num_steps)?;
    let trajectory = propagate_exact(&h, &psi0, grid)?;
    let qsl = qsl_report_with(&trajectory, &cfg.tolerances)?;
    let cert = saturation_certificate_with(&trajectory, &h, cfg.tolerances.angle_floor)?;
    let fidelity = fidelity_to(&trajectory, &target)?;

    let grover = match &cfg.scenario {
        Scenario::Grover { params, embed } => Some(GroverSummary {
            runtime_bound_exact: grover_runtime(params)?,
            runtime_bound_large_n: grover_runtime_large_n(params)?,
            measured_crossing_time: grover_crossing_time(params, *embed)?,
        }),
        _ => None,
    };
    let two_level = match &cfg.scenario {
        Scenario::TwoLevel(p) => Some(TwoLevelSummary {
            closed_form_integral: two_level_dispersion_integral(p),
            closed_form_theta_t: two_level_theta(p, p.horizon),
        }),
        _ => None,
    };

    let report = RunReport {
        scenario: cfg.to_raw(),
        bound_holds: qsl.bound_holds(cfg.tolerances.quadrature),
        qsl,
        saturation: SaturationSummary {
            max_residual: cert.max_residual(),
            fraction_skipped: cert.fraction_skipped(),
            min_lambda: cert.min_lambda(),
            is_saturating: cert.is_saturating(cfg.tolerances.residual),
        },
        final_fidelity_target: fidelity.last().map_or(f64::NAN, |&(_, f)| f),
        grover,
        two_level,
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            propagator: "spectral".to_string(),
            num_samples: trajectory.samples.len(),
            elapsed_seconds: opts.record_timing.then(|| start.elapsed().as_secs_f64()),
        },
    };
    if !report.all_finite() {
        return Err(CliError::Numeric(itqsl::Error::NumericalInconsistency(
            "report contains a non-finite value".into(),
        )));
    }
    Ok(Evaluation {
        report,
        trajectory,
        fidelity,
    })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Runs the scenario and writes the trajectory CSV and the report JSON.
pub fn run(cfg: &ScenarioConfig, out_dir: Option<&Path>, opts: RunOptions) -> CliResult<Evaluation> {
    let eval = evaluate(cfg, opts)?;
    let outputs = cfg.outputs.resolved(out_dir);
    write_file(&outputs.trajectory_csv, &eval.trajectory_csv())?;
    write_file(&outputs.report_json, &eval.report.to_json())?;
    Ok(eval)
}

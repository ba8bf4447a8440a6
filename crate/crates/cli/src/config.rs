//! Scenario configuration: a single JSON object per file.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use itqsl::models::{GroverParams, TwoLevelParams, EMBED_LIMIT};
use itqsl::qstate::HERMITICITY_TOL;
use itqsl::{Complex64, HermitianOperator, StateVector, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::error::{CliError, CliResult};

pub const DEFAULT_NUM_STEPS: usize = 1000;
pub const DEFAULT_TRAJECTORY_CSV: &str = "trajectory.csv";
pub const DEFAULT_REPORT_JSON: &str = "report.json";
/// Largest dimension accepted for an embedded (dense) Grover model.
pub const MAX_EMBED_DIMENSION: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    TwoLevel,
    Grover,
    Custom,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::TwoLevel => "two_level",
            Kind::Grover => "grover",
            Kind::Custom => "custom",
        }
    }

    fn fields(self) -> &'static [&'static str] {
        match self {
            Kind::TwoLevel => &["theta0", "energy"],
            Kind::Grover => &["dimension", "e_w", "e_perp", "epsilon", "embed"],
            Kind::Custom => &["hamiltonian", "initial_state"],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_json: Option<PathBuf>,
}

/// The file format as written, before validation. Also used as the scenario
/// echo in reports, with every default filled in.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<RawOutputs>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_perp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed: Option<bool>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<[f64; 2]>>,
}

impl RawConfig {
    fn present(&self, field: &str) -> bool {
        match field {
            "theta0" => self.theta0.is_some(),
            "energy" => self.energy.is_some(),
            "dimension" => self.dimension.is_some(),
            "e_w" => self.e_w.is_some(),
            "e_perp" => self.e_perp.is_some(),
            "epsilon" => self.epsilon.is_some(),
            "embed" => self.embed.is_some(),
            "hamiltonian" => self.hamiltonian.is_some(),
            "initial_state" => self.initial_state.is_some(),
            _ => false,
        }
    }

    /// The declared kind, or the one implied by the model fields present.
    pub fn resolved_kind(&self) -> CliResult<Kind> {
        if let Some(kind) = self.kind {
            return Ok(kind);
        }
        let implied: Vec<Kind> = [Kind::TwoLevel, Kind::Grover, Kind::Custom]
            .into_iter()
            .filter(|k| k.fields().iter().any(|f| self.present(f)))
            .collect();
        match implied.as_slice() {
            [kind] => Ok(*kind),
            [] => Err(CliError::schema("kind", "missing, and no model fields to infer it from")),
            _ => Err(CliError::schema("kind", "missing, and the model fields are ambiguous")),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Scenario {
    TwoLevel(TwoLevelParams),
    Grover { params: GroverParams, embed: bool },
    Custom { hamiltonian: HermitianOperator, initial_state: StateVector },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outputs {
    pub trajectory_csv: PathBuf,
    pub report_json: PathBuf,
}

impl Outputs {
    /// Relative paths are taken relative to `out_dir` when one is given.
    pub fn resolved(&self, out_dir: Option<&Path>) -> Outputs {
        let join = |p: &PathBuf| match out_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        };
        Outputs {
            trajectory_csv: join(&self.trajectory_csv),
            report_json: join(&self.report_json),
        }
    }
}

/// A validated scenario with defaults applied.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub horizon: f64,
    pub num_steps: usize,
    pub tolerances: Tolerances,
    pub outputs: Outputs,
}

impl ScenarioConfig {
    pub fn kind(&self) -> Kind {
        match self.scenario {
            Scenario::TwoLevel(_) => Kind::TwoLevel,
            Scenario::Grover { .. } => Kind::Grover,
            Scenario::Custom { .. } => Kind::Custom,
        }
    }

    pub fn dimension(&self) -> usize {
        match &self.scenario {
            Scenario::TwoLevel(_) => 2,
            Scenario::Grover { params, embed } => {
                if *embed {
                    params.dimension
                } else {
                    2
                }
            }
            Scenario::Custom { hamiltonian, .. } => hamiltonian.dimension(),
        }
    }

    pub fn from_raw(raw: &RawConfig) -> CliResult<Self> {
        let kind = raw.resolved_kind()?;
        for other in [Kind::TwoLevel, Kind::Grover, Kind::Custom] {
            if other == kind {
                continue;
            }
            if let Some(f) = other.fields().iter().find(|f| raw.present(f)) {
                return Err(CliError::schema(*f, format!("not allowed for kind `{}`", kind.name())));
            }
        }

        let horizon = required(raw.horizon, "horizon")?;
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(CliError::schema("horizon", format!("must be positive, got {horizon}")));
        }
        let num_steps = raw.num_steps.unwrap_or(DEFAULT_NUM_STEPS);
        check_num_steps(num_steps)?;
        let tolerances = raw.tolerances.unwrap_or_default();
        check_tolerances(&tolerances)?;
        let outputs = raw.outputs.clone().unwrap_or_default();
        let outputs = Outputs {
            trajectory_csv: outputs
                .trajectory_csv
                .unwrap_or_else(|| DEFAULT_TRAJECTORY_CSV.into()),
            report_json: outputs.report_json.unwrap_or_else(|| DEFAULT_REPORT_JSON.into()),
        };

        let scenario = match kind {
            Kind::TwoLevel => Scenario::TwoLevel(two_level(raw, horizon)?),
            Kind::Grover => grover(raw, horizon)?,
            Kind::Custom => custom(raw)?,
        };
        Ok(Self {
            scenario,
            horizon,
            num_steps,
            tolerances,
            outputs,
        })
    }

    /// The configuration with every default made explicit.
    pub fn to_raw(&self) -> RawConfig {
        let mut raw = RawConfig {
            kind: Some(self.kind()),
            horizon: Some(self.horizon),
            num_steps: Some(self.num_steps),
            tolerances: Some(self.tolerances),
            outputs: Some(RawOutputs {
                trajectory_csv: Some(self.outputs.trajectory_csv.clone()),
                report_json: Some(self.outputs.report_json.clone()),
            }),
            ..RawConfig::default()
        };
        match &self.scenario {
            Scenario::TwoLevel(p) => {
                raw.theta0 = Some(p.theta0);
                raw.energy = Some(p.energy);
            }
            Scenario::Grover { params, embed } => {
                raw.dimension = Some(params.dimension);
                raw.e_w = Some(params.e_w);
                raw.e_perp = Some(params.e_perp);
                raw.epsilon = Some(params.epsilon);
                raw.embed = Some(*embed);
            }
            Scenario::Custom {
                hamiltonian,
                initial_state,
            } => {
                let m = hamiltonian.matrix();
                raw.hamiltonian = Some(
                    (0..m.nrows())
                        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
                        .collect(),
                );
                raw.initial_state = Some(initial_state.amplitudes().iter().copied().map(pair).collect());
            }
        }
        raw
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn required<T: Copy>(value: Option<T>, field: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::schema(field, "required field is missing"))
}

pub fn check_num_steps(n: usize) -> CliResult<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(CliError::schema("num_steps", format!("must be even and at least 2, got {n}")));
    }
    Ok(())
}

fn check_tolerances(t: &Tolerances) -> CliResult<()> {
    for (name, v) in [
        ("tolerances.saturation", t.saturation),
        ("tolerances.residual", t.residual),
        ("tolerances.quadrature", t.quadrature),
        ("tolerances.angle_floor", t.angle_floor),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(CliError::schema(name, format!("must be finite and non-negative, got {v}")));
        }
    }
    Ok(())
}

fn two_level(raw: &RawConfig, horizon: f64) -> CliResult<TwoLevelParams> {
    let theta0 = required(raw.theta0, "theta0")?;
    let energy = required(raw.energy, "energy")?;
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(CliError::schema("theta0", format!("must lie in (0, pi/2), got {theta0}")));
    }
    if !(energy.is_finite() && energy > 0.0) {
        return Err(CliError::schema("energy", format!("must be positive, got {energy}")));
    }
    Ok(TwoLevelParams {
        theta0,
        energy,
        horizon,
    })
}

fn grover(raw: &RawConfig, horizon: f64) -> CliResult<Scenario> {
    let dimension = required(raw.dimension, "dimension")?;
    let e_w = required(raw.e_w, "e_w")?;
    let e_perp = required(raw.e_perp, "e_perp")?;
    let epsilon = required(raw.epsilon, "epsilon")?;
    if dimension < 2 {
        return Err(CliError::schema("dimension", format!("must be at least 2, got {dimension}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(CliError::schema("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    if e_perp - e_w <= 0.0 {
        return Err(CliError::schema(
            "e_perp",
            format!("NonPositiveGap: e_perp − e_w = {} must be positive", e_perp - e_w),
        ));
    }
    let embed = raw.embed.unwrap_or(dimension <= EMBED_LIMIT);
    if embed && dimension > MAX_EMBED_DIMENSION {
        return Err(CliError::schema(
            "embed",
            format!("dense embedding is limited to dimension {MAX_EMBED_DIMENSION}, got {dimension}"),
        ));
    }
    let params = GroverParams {
        dimension,
        e_w,
        e_perp,
        horizon,
        epsilon,
    };
    Ok(Scenario::Grover { params, embed })
}

fn custom(raw: &RawConfig) -> CliResult<Scenario> {
    let rows = raw
        .hamiltonian
        .as_ref()
        .ok_or_else(|| CliError::schema("hamiltonian", "required field is missing"))?;
    let amplitudes = raw
        .initial_state
        .as_ref()
        .ok_or_else(|| CliError::schema("initial_state", "required field is missing"))?;
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    let hamiltonian = HermitianOperator::from_rows(&rows, HERMITICITY_TOL).map_err(|e| match e {
        itqsl::Error::NotHermitian { max_deviation } => CliError::Hermiticity { max_deviation },
        e => CliError::schema("hamiltonian", e.to_string()),
    })?;
    if amplitudes.len() != hamiltonian.dimension() {
        return Err(CliError::schema(
            "initial_state",
            format!(
                "has {} amplitudes but the hamiltonian has dimension {}",
                amplitudes.len(),
                hamiltonian.dimension()
            ),
        ));
    }
    // normalized on load so configs may give unnormalized vectors
    let initial_state = StateVector::new(amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .map_err(|e| CliError::schema("initial_state", e.to_string()))?
        .normalize();
    Ok(Scenario::Custom {
        hamiltonian,
        initial_state,
    })
}

fn map_json_error(e: serde_json::Error) -> CliError {
    match e.classify() {
        Category::Syntax | Category::Eof | Category::Io => CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
        Category::Data => {
            let msg = e.to_string();
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.starts_with("unknown field") || msg.starts_with("missing field"))
                .unwrap_or("config")
                .to_string();
            CliError::Schema { field, reason: msg }
        }
    }
}

pub fn parse_raw_str(text: &str) -> CliResult<RawConfig> {
    serde_json::from_str(text).map_err(map_json_error)
}

pub fn load_raw(path: &Path) -> CliResult<RawConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_raw_str(&text)
}

pub fn parse_config_str(text: &str) -> CliResult<ScenarioConfig> {
    ScenarioConfig::from_raw(&parse_raw_str(text)?)
}

pub fn parse_config(path: &Path) -> CliResult<ScenarioConfig> {
    ScenarioConfig::from_raw(&load_raw(path)?)
}

//! Scenario files: one TOML document per scenario, unknown keys rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use uniaxial_cp::{AtomSpec, AxisResponse, Geometry, Material, QuadSpec, Transition};

/// Speed of light in m/s, used only for the optional SI distance conversion.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("invalid value for `{key}`: {reason}")]
    Key { key: String, reason: String },
}

fn key_err(key: impl Into<String>, reason: impl ToString) -> ConfigError {
    ConfigError::Key {
        key: key.into(),
        reason: reason.to_string(),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub units: Option<UnitsCfg>,
    pub material: MaterialCfg,
    pub geometry: GeometryCfg,
    pub atom: AtomCfg,
    #[serde(default)]
    pub evaluation: EvaluationCfg,
    pub sweep: Option<SweepCfg>,
    #[serde(default)]
    pub quad: QuadCfg,
    pub output: Option<OutputCfg>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsCfg {
    /// Reference angular frequency `ω_ref` in s⁻¹.
    pub omega_ref_hz: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialCfg {
    pub parallel: AxisCfg,
    pub perpendicular: AxisCfg,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum AxisCfg {
    Vacuum,
    Dielectric { n: f64 },
    DrudeLorentz { omega_p: f64, omega_t: f64, gamma: f64 },
    DrudeConductor { omega_p: f64, gamma: f64 },
    LosslessPlasma { omega_p: f64 },
}

impl AxisCfg {
    pub fn to_response(self) -> uniaxial_cp::Result<AxisResponse> {
        match self {
            AxisCfg::Vacuum => Ok(AxisResponse::Vacuum),
            AxisCfg::Dielectric { n } => AxisResponse::dielectric(n),
            AxisCfg::DrudeLorentz { omega_p, omega_t, gamma } => AxisResponse::drude_lorentz(omega_p, omega_t, gamma),
            AxisCfg::DrudeConductor { omega_p, gamma } => AxisResponse::drude_conductor(omega_p, gamma),
            AxisCfg::LosslessPlasma { omega_p } => AxisResponse::lossless_plasma(omega_p),
        }
    }

    fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        match (self, name) {
            (AxisCfg::Dielectric { n }, "n") => Some(n),
            (AxisCfg::DrudeLorentz { omega_p, .. }, "omega_p")
            | (AxisCfg::DrudeConductor { omega_p, .. }, "omega_p")
            | (AxisCfg::LosslessPlasma { omega_p }, "omega_p") => Some(omega_p),
            (AxisCfg::DrudeLorentz { omega_t, .. }, "omega_t") => Some(omega_t),
            (AxisCfg::DrudeLorentz { gamma, .. }, "gamma") | (AxisCfg::DrudeConductor { gamma, .. }, "gamma") => {
                Some(gamma)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    HalfSpace,
    Slab,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryCfg {
    pub kind: GeometryKind,
    pub thickness: Option<f64>,
    /// Atom-surface distance; required unless the sweep runs over it.
    pub distance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomCfg {
    #[serde(default = "default_state")]
    pub state: String,
    pub transitions: Vec<TransitionCfg>,
}

fn default_state() -> String {
    "i".into()
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionCfg {
    /// Signed `ω_mi` in units of `ω_ref`.
    pub omega: f64,
    pub mu_par_sq: f64,
    pub mu_perp_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Exact,
    Nonretarded,
    RetardedAsymptotic,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Nonretarded => "nonretarded",
            Mode::RetardedAsymptotic => "retarded",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationCfg {
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCfg {
    /// `distance`, `thickness`, or `parallel.<field>` / `perpendicular.<field>`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadCfg {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputCfg {
    pub path: PathBuf,
}

/// What a sweep varies.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepTarget {
    Distance,
    Thickness,
    Material { perpendicular: bool, field: String },
}

/// One fully resolved evaluation point, all lengths in units of `c/ω_ref`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    /// Sweep value as written in the scenario (metres for lengths when `[units]` is set).
    pub sweep_value: f64,
    pub material: Material,
    pub geometry: Geometry,
    pub distance: f64,
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub atom: AtomSpec,
    pub mode: Mode,
    pub quad: QuadSpec,
    pub output: Option<PathBuf>,
    pub sweep: Option<SweepTarget>,
    pub points: Vec<Point>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let default_name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        Self::parse(&text, default_name.as_deref().unwrap_or("scenario"))
    }

    pub fn parse(text: &str, default_name: &str) -> Result<Self, ConfigError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        file.resolve(default_name)
    }

    /// Override the relative tolerance.
    pub fn with_tol(mut self, tol: f64) -> Result<Self, ConfigError> {
        self.quad = QuadSpec::new(tol, self.quad.abs_tol, self.quad.max_subdivisions).map_err(|e| key_err("--tol", e))?;
        Ok(self)
    }
}

fn sweep_values(s: &SweepCfg) -> Result<Vec<f64>, ConfigError> {
    if s.count < 1 {
        return Err(key_err("sweep.count", "must be >= 1"));
    }
    for (k, v) in [("sweep.start", s.start), ("sweep.stop", s.stop)] {
        if !v.is_finite() {
            return Err(key_err(k, "must be finite"));
        }
    }
    if s.count == 1 {
        return Ok(vec![s.start]);
    }
    if !(s.start < s.stop) {
        return Err(key_err("sweep.stop", "must exceed sweep.start when sweep.count > 1"));
    }
    let n = (s.count - 1) as f64;
    let v = match s.spacing {
        Spacing::Linear => (0..s.count)
            .map(|i| s.start + (s.stop - s.start) * i as f64 / n)
            .collect(),
        Spacing::Log => {
            if !(s.start > 0.0) {
                return Err(key_err("sweep.start", "must be > 0 for log spacing"));
            }
            let (a, b) = (s.start.log10(), s.stop.log10());
            (0..s.count).map(|i| 10f64.powf(a + (b - a) * i as f64 / n)).collect()
        }
    };
    let mut v: Vec<f64> = v;
    v[0] = s.start;
    v[s.count - 1] = s.stop;
    Ok(v)
}

fn parse_target(p: &str) -> Result<SweepTarget, ConfigError> {
    match p {
        "distance" => Ok(SweepTarget::Distance),
        "thickness" => Ok(SweepTarget::Thickness),
        _ => match p.split_once('.') {
            Some((axis @ ("parallel" | "perpendicular"), field @ ("n" | "omega_p" | "omega_t" | "gamma"))) => {
                Ok(SweepTarget::Material {
                    perpendicular: axis == "perpendicular",
                    field: field.to_string(),
                })
            }
            _ => Err(key_err(
                "sweep.parameter",
                format!("unknown parameter `{p}` (expected distance, thickness, or <parallel|perpendicular>.<n|omega_p|omega_t|gamma>)"),
            )),
        },
    }
}

impl ScenarioFile {
    pub fn resolve(&self, default_name: &str) -> Result<Scenario, ConfigError> {
        let length_scale = match &self.units {
            None => 1.0,
            Some(u) => {
                if !(u.omega_ref_hz > 0.0 && u.omega_ref_hz.is_finite()) {
                    return Err(key_err("units.omega_ref_hz", "must be finite and > 0"));
                }
                u.omega_ref_hz / SPEED_OF_LIGHT
            }
        };

        if self.atom.transitions.is_empty() {
            return Err(key_err("atom.transitions", "at least one transition is required"));
        }
        let mut transitions = Vec::new();
        for (i, t) in self.atom.transitions.iter().enumerate() {
            let tr = Transition::new(t.omega, t.mu_par_sq, t.mu_perp_sq)
                .map_err(|e| key_err(format!("atom.transitions[{i}]"), e))?;
            transitions.push(tr);
        }
        let atom = AtomSpec::new(transitions, self.atom.state.clone()).map_err(|e| key_err("atom", e))?;

        let mut quad = QuadSpec::default();
        if let Some(v) = self.quad.rel_tol {
            quad.rel_tol = v;
        }
        if let Some(v) = self.quad.abs_tol {
            quad.abs_tol = v;
        }
        if let Some(v) = self.quad.max_subdivisions {
            quad.max_subdivisions = v;
        }
        quad.validate().map_err(|e| key_err("quad", e))?;

        match (self.geometry.kind, self.geometry.thickness) {
            (GeometryKind::HalfSpace, Some(_)) => {
                return Err(key_err("geometry.thickness", "not allowed for kind = \"half_space\""))
            }
            (GeometryKind::Slab, None) if !self.sweeps("thickness") => {
                return Err(key_err("geometry.thickness", "required for kind = \"slab\""))
            }
            _ => {}
        }
        if self.geometry.distance.is_none() && !self.sweeps("distance") {
            return Err(key_err("geometry.distance", "required unless the sweep runs over distance"));
        }

        let target = self.sweep.as_ref().map(|s| parse_target(&s.parameter)).transpose()?;
        if target == Some(SweepTarget::Thickness) && self.geometry.kind == GeometryKind::HalfSpace {
            return Err(key_err("sweep.parameter", "thickness sweep needs kind = \"slab\""));
        }
        let values = match &self.sweep {
            Some(s) => sweep_values(s)?,
            None => vec![self.geometry.distance.unwrap_or(f64::NAN)],
        };

        let mut points = Vec::with_capacity(values.len());
        for &v in &values {
            let mut par = self.material.parallel;
            let mut perp = self.material.perpendicular;
            let mut distance = self.geometry.distance;
            let mut thickness = self.geometry.thickness;
            match &target {
                Some(SweepTarget::Distance) => distance = Some(v),
                Some(SweepTarget::Thickness) => thickness = Some(v),
                Some(SweepTarget::Material { perpendicular, field }) => {
                    let (axis, name) = if *perpendicular { (&mut perp, "perpendicular") } else { (&mut par, "parallel") };
                    match axis.field_mut(field) {
                        Some(slot) => *slot = v,
                        None => {
                            return Err(key_err(
                                "sweep.parameter",
                                format!("material.{name} has no field `{field}`"),
                            ))
                        }
                    }
                }
                None => {}
            }
            let key = |axis: &str| {
                if target.is_some() {
                    format!("material.{axis} (at sweep value {v})")
                } else {
                    format!("material.{axis}")
                }
            };
            let p = par.to_response().map_err(|e| key_err(key("parallel"), e))?;
            let q = perp.to_response().map_err(|e| key_err(key("perpendicular"), e))?;
            let material = Material::new(p, q).map_err(|e| key_err("material", e))?;
            let z = distance.unwrap() * length_scale;
            if !(z > 0.0 && z.is_finite()) {
                return Err(key_err(
                    if target == Some(SweepTarget::Distance) { "sweep.start" } else { "geometry.distance" },
                    format!("distance must be finite and > 0, got {}", distance.unwrap()),
                ));
            }
            let geometry = match self.geometry.kind {
                GeometryKind::HalfSpace => Geometry::HalfSpace,
                GeometryKind::Slab => {
                    let l = thickness.unwrap() * length_scale;
                    let g = Geometry::Slab { thickness: l };
                    g.validate().map_err(|e| {
                        key_err(
                            if target == Some(SweepTarget::Thickness) { "sweep.start" } else { "geometry.thickness" },
                            e,
                        )
                    })?;
                    g
                }
            };
            points.push(Point {
                sweep_value: v,
                material,
                geometry,
                distance: z,
            });
        }

        let mode = self.evaluation.mode;
        let downward = atom.transitions.iter().any(|t| t.omega_mi < 0.0);
        if downward && self.geometry.kind == GeometryKind::Slab {
            return Err(key_err(
                "atom.transitions",
                "downward transitions (omega < 0) are only supported for kind = \"half_space\"",
            ));
        }
        if mode == Mode::RetardedAsymptotic {
            let p = &points[0];
            for t in &atom.transitions {
                uniaxial_cp::asymptotics::retarded_f(&p.material, &p.geometry, t.omega_mi.abs(), p.distance)
                    .map_err(|e| key_err("evaluation.mode", e))?;
            }
        }

        Ok(Scenario {
            name: self.name.clone().unwrap_or_else(|| default_name.to_string()),
            atom,
            mode,
            quad,
            output: self.output.as_ref().map(|o| o.path.clone()),
            sweep: target,
            points,
        })
    }

    fn sweeps(&self, p: &str) -> bool {
        self.sweep.as_ref().map_or(false, |s| s.parameter == p)
    }
}

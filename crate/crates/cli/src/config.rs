//! TOML run configuration.
//!
//! ```toml
//! scheme = "real_rigidity"
//!
//! [grid]
//! min = 0.1
//! max = 10.0
//! points = 100
//!
//! [mechanics]
//! kind = "free_mass"
//!
//! [real_rigidity]
//! upsilon = 1.0
//! psi = 0.6
//! eta = 0.9
//! ```

use std::path::{Path, PathBuf};

use optospring::formulas::{matching_condition, MatchOutcome, RigidityMode};
use optospring::{FrequencyGrid, MassSign, Spacing, Susceptibility};
use serde::{Deserialize, Serialize};

use crate::error::{at, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    PositionMeter,
    VirtualRigidity,
    RealRigidity,
    Hybrid,
}

impl Scheme {
    pub fn section(self) -> &'static str {
        match self {
            Scheme::PositionMeter => "position_meter",
            Scheme::VirtualRigidity => "virtual_rigidity",
            Scheme::RealRigidity => "real_rigidity",
            Scheme::Hybrid => "hybrid",
        }
    }

    /// Parameters that `sweep` and `optimize` may vary.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Scheme::PositionMeter => &["upsilon", "eta"],
            Scheme::VirtualRigidity => &["upsilon", "phi", "eta"],
            Scheme::RealRigidity => &["upsilon", "psi", "eta"],
            Scheme::Hybrid => &["upsilon_i", "r", "eta_i", "eta_s", "omega_s", "k"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridConfig {
    pub fn build(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::spaced(self.min, self.max, self.points, self.spacing).map_err(at("grid"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mass {
    #[default]
    Positive,
    Negative,
}

/// Mechanical mode. Oscillators are given by their eigenfrequency in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MechanicsConfig {
    #[default]
    FreeMass,
    Oscillator {
        omega0: f64,
        #[serde(default)]
        mass: Mass,
    },
}

impl MechanicsConfig {
    pub fn build(&self, field: &str) -> Result<Susceptibility> {
        match *self {
            MechanicsConfig::FreeMass => Ok(Susceptibility::FreeMass),
            MechanicsConfig::Oscillator { omega0, mass } => {
                if !(omega0.is_finite() && omega0 >= 0.0) {
                    return Err(CliError::validation(
                        format!("{field}.omega0"),
                        format!("must be finite and >= 0, got {omega0}"),
                    ));
                }
                let sign = match mass {
                    Mass::Positive => MassSign::Positive,
                    Mass::Negative => MassSign::Negative,
                };
                Susceptibility::oscillator(omega0 * omega0, sign).map_err(at(field))
            }
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionMeterConfig {
    pub upsilon: f64,
    #[serde(default = "one")]
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VirtualRigidityConfig {
    pub upsilon: f64,
    pub phi: f64,
    #[serde(default = "one")]
    pub eta: f64,
}

/// Double pass: per-pass coupling Υ and half inter-pass phase ψ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealRigidityConfig {
    pub upsilon: f64,
    pub psi: f64,
    #[serde(default = "one")]
    pub eta: f64,
}

/// Signal channel from `[mechanics]`; auxiliary channel either a
/// negative-mass spin oscillator at `omega_s` or an explicit `[hybrid.auxiliary]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HybridConfig {
    pub upsilon_i: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default = "one")]
    pub eta_i: f64,
    #[serde(default = "one")]
    pub eta_s: f64,
    pub mode: RigidityMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_s: Option<f64>,
    /// Auxiliary rigidity; the matched value when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auxiliary: Option<MechanicsConfig>,
}

impl HybridConfig {
    pub fn auxiliary_mechanics(&self) -> Result<Susceptibility> {
        match (&self.auxiliary, self.omega_s) {
            (Some(m), None) => m.build("hybrid.auxiliary"),
            (None, Some(w)) => Susceptibility::spin(w).map_err(at("hybrid.omega_s")),
            (None, None) => Err(CliError::validation(
                "hybrid",
                "one of `omega_s` or `auxiliary` is required",
            )),
            (Some(_), Some(_)) => Err(CliError::validation(
                "hybrid",
                "`omega_s` and `auxiliary` are mutually exclusive",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    /// Cavity half-bandwidth γ in rad/s.
    pub half_bandwidth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// Minimum of S_sum over the grid.
    #[default]
    BandMin,
    /// S_sum at a single frequency `omega`.
    AtOmega,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default)]
    pub statistic: Statistic,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    Uniform,
    /// Weights `1/S_sql(Ω)`, i.e. the band mean of S_sum/S_sql.
    InverseSql,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeParam {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

fn default_sweeps() -> usize {
    3
}

fn default_rel_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub params: Vec<OptimizeParam>,
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default)]
    pub weighting: Weighting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: Scheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub grid: GridConfig,
    #[serde(default)]
    pub mechanics: MechanicsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position_meter: Option<PositionMeterConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virtual_rigidity: Option<VirtualRigidityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_rigidity: Option<RealRigidityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hybrid: Option<HybridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<CavityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeConfig>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        config.resolved()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Checks scheme-required blocks, ranges and the sweep and optimize blocks.
    pub fn resolved(self) -> Result<Self> {
        self.grid.build()?;
        self.mechanics.build("mechanics")?;
        let present = [
            (Scheme::PositionMeter, self.position_meter.is_some()),
            (Scheme::VirtualRigidity, self.virtual_rigidity.is_some()),
            (Scheme::RealRigidity, self.real_rigidity.is_some()),
            (Scheme::Hybrid, self.hybrid.is_some()),
        ];
        for (scheme, is_present) in present {
            if scheme == self.scheme && !is_present {
                return Err(CliError::validation(
                    scheme.section(),
                    format!("block required by scheme `{}`", scheme.section()),
                ));
            }
            if scheme != self.scheme && is_present {
                return Err(CliError::validation(
                    scheme.section(),
                    format!("block not used by scheme `{}`", self.scheme.section()),
                ));
            }
        }
        if let Some(c) = &self.cavity {
            positive("cavity.half_bandwidth", c.half_bandwidth)?;
        }
        self.check_values()?;
        if let Some(s) = &self.sweep {
            self.check_parameter("sweep.parameter", &s.parameter)?;
            finite("sweep.min", s.min)?;
            finite("sweep.max", s.max)?;
            if s.steps < 1 {
                return Err(CliError::validation("sweep.steps", "must be >= 1"));
            }
            if s.statistic == Statistic::AtOmega {
                match s.omega {
                    Some(w) => positive("sweep.omega", w).map(|_| ())?,
                    None => {
                        return Err(CliError::validation(
                            "sweep.omega",
                            "required when statistic = \"at_omega\"",
                        ))
                    }
                }
            }
        }
        if let Some(o) = &self.optimize {
            if o.params.is_empty() {
                return Err(CliError::validation(
                    "optimize.params",
                    "at least one parameter is required",
                ));
            }
            for (i, p) in o.params.iter().enumerate() {
                self.check_parameter(&format!("optimize.params[{i}].name"), &p.name)?;
                if !(p.lo.is_finite() && p.hi.is_finite() && p.lo <= p.hi) {
                    return Err(CliError::validation(
                        format!("optimize.params[{i}]"),
                        format!("need finite lo <= hi, got [{}, {}]", p.lo, p.hi),
                    ));
                }
            }
            if !(o.rel_tol > 0.0 && o.rel_tol.is_finite()) {
                return Err(CliError::validation(
                    "optimize.rel_tol",
                    "must be finite and > 0",
                ));
            }
        }
        Ok(self)
    }

    fn check_parameter(&self, field: &str, name: &str) -> Result<()> {
        if self.scheme.parameters().contains(&name) {
            Ok(())
        } else {
            Err(CliError::validation(
                field,
                format!(
                    "`{name}` is not a parameter of scheme `{}` (expected one of {})",
                    self.scheme.section(),
                    self.scheme.parameters().join(", ")
                ),
            ))
        }
    }

    /// Range checks on the active scheme block.
    pub fn check_values(&self) -> Result<()> {
        if let Some(p) = &self.position_meter {
            positive("position_meter.upsilon", p.upsilon)?;
            efficiency("position_meter.eta", p.eta)?;
        }
        if let Some(p) = &self.virtual_rigidity {
            positive("virtual_rigidity.upsilon", p.upsilon)?;
            finite("virtual_rigidity.phi", p.phi)?;
            efficiency("virtual_rigidity.eta", p.eta)?;
        }
        if let Some(p) = &self.real_rigidity {
            positive("real_rigidity.upsilon", p.upsilon)?;
            finite("real_rigidity.psi", p.psi)?;
            efficiency("real_rigidity.eta", p.eta)?;
        }
        if let Some(h) = &self.hybrid {
            positive("hybrid.upsilon_i", h.upsilon_i)?;
            if !(h.r.is_finite() && h.r >= 0.0) {
                return Err(CliError::validation(
                    "hybrid.r",
                    format!("must be finite and >= 0, got {}", h.r),
                ));
            }
            efficiency("hybrid.eta_i", h.eta_i)?;
            efficiency("hybrid.eta_s", h.eta_s)?;
            if let Some(w) = h.omega_s {
                if !(w.is_finite() && w >= 0.0) {
                    return Err(CliError::validation(
                        "hybrid.omega_s",
                        format!("must be finite and >= 0, got {w}"),
                    ));
                }
            }
            if let Some(k) = h.k {
                finite("hybrid.k", k)?;
            }
            self.hybrid_rigidity()?;
        }
        Ok(())
    }

    /// Auxiliary rigidity of the hybrid scheme: `hybrid.k`, or the matched
    /// value when that is absent.
    pub fn hybrid_rigidity(&self) -> Result<f64> {
        let h = self
            .hybrid
            .as_ref()
            .ok_or_else(|| CliError::validation("hybrid", "block required"))?;
        let chi_s = h.auxiliary_mechanics()?;
        if let Some(k) = h.k {
            return Ok(k);
        }
        let chi_i = self.mechanics.build("mechanics")?;
        match matching_condition(&chi_i, &chi_s, &self.grid.build()?) {
            MatchOutcome::Scalar(k) => Ok(k),
            MatchOutcome::Profile(_) => Err(CliError::validation(
                "hybrid.k",
                "no frequency-independent rigidity matches these channels; set `k` explicitly",
            )),
        }
    }

    /// Copy with one scheme parameter replaced. Values are range-checked.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        self.check_parameter("parameter", name)?;
        let mut c = self.clone();
        match (c.scheme, name) {
            (Scheme::PositionMeter, n) => {
                let p = c.position_meter.as_mut().expect("resolved");
                *field_mut(n, &mut [("upsilon", &mut p.upsilon), ("eta", &mut p.eta)]) = value;
            }
            (Scheme::VirtualRigidity, n) => {
                let p = c.virtual_rigidity.as_mut().expect("resolved");
                *field_mut(
                    n,
                    &mut [
                        ("upsilon", &mut p.upsilon),
                        ("phi", &mut p.phi),
                        ("eta", &mut p.eta),
                    ],
                ) = value;
            }
            (Scheme::RealRigidity, n) => {
                let p = c.real_rigidity.as_mut().expect("resolved");
                *field_mut(
                    n,
                    &mut [
                        ("upsilon", &mut p.upsilon),
                        ("psi", &mut p.psi),
                        ("eta", &mut p.eta),
                    ],
                ) = value;
            }
            (Scheme::Hybrid, "omega_s") => {
                let h = c.hybrid.as_mut().expect("resolved");
                if h.auxiliary.is_some() {
                    return Err(CliError::validation(
                        "hybrid.omega_s",
                        "cannot vary omega_s when `auxiliary` is given",
                    ));
                }
                h.omega_s = Some(value);
            }
            (Scheme::Hybrid, "k") => c.hybrid.as_mut().expect("resolved").k = Some(value),
            (Scheme::Hybrid, n) => {
                let h = c.hybrid.as_mut().expect("resolved");
                *field_mut(
                    n,
                    &mut [
                        ("upsilon_i", &mut h.upsilon_i),
                        ("r", &mut h.r),
                        ("eta_i", &mut h.eta_i),
                        ("eta_s", &mut h.eta_s),
                    ],
                ) = value;
            }
        }
        c.check_values()?;
        Ok(c)
    }

    /// Resolved config as TOML, for output headers.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn field_mut<'a>(name: &str, fields: &'a mut [(&str, &'a mut f64)]) -> &'a mut f64 {
    let i = fields
        .iter()
        .position(|(n, _)| *n == name)
        .expect("parameter checked against scheme");
    &mut *fields[i].1
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::validation(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::validation(
            field,
            format!("must be finite, got {v}"),
        ))
    }
}

fn efficiency(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(CliError::validation(
            field,
            format!("must lie in (0, 1], got {v}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HYBRID: &str = r#"
scheme = "hybrid"
[grid]
min = 0.1
max = 1.0
points = 10
[hybrid]
upsilon_i = 1.0
r = 0.5
omega_s = 2.0
mode = "virtual"
"#;

    #[test]
    fn resolved_toml_round_trips() {
        let c = RunConfig::from_toml_str(HYBRID).unwrap();
        let again = RunConfig::from_toml_str(&c.to_toml()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.hybrid.as_ref().unwrap().eta_i, 1.0);
    }

    #[test]
    fn matched_rigidity_follows_omega_s() {
        let c = RunConfig::from_toml_str(HYBRID).unwrap();
        assert_eq!(c.hybrid_rigidity().unwrap(), 4.0);
        let moved = c.with_parameter("omega_s", 3.0).unwrap();
        assert_eq!(moved.hybrid_rigidity().unwrap(), 9.0);
        let pinned = c.with_parameter("k", 1.5).unwrap();
        assert_eq!(pinned.hybrid_rigidity().unwrap(), 1.5);
    }

    #[test]
    fn with_parameter_checks_name_and_range() {
        let c = RunConfig::from_toml_str(HYBRID).unwrap();
        assert!(c.with_parameter("psi", 0.1).is_err());
        match c.with_parameter("eta_s", 2.0) {
            Err(CliError::Validation { field, .. }) => assert_eq!(field, "hybrid.eta_s"),
            other => panic!("{other:?}"),
        }
        assert_eq!(c.with_parameter("r", 1.0).unwrap().hybrid.unwrap().r, 1.0);
    }

    #[test]
    fn oscillator_block() {
        let m: MechanicsConfig =
            toml::from_str("kind = \"oscillator\"\nomega0 = 2.0\nmass = \"negative\"").unwrap();
        assert_eq!(
            m.build("mechanics").unwrap(),
            Susceptibility::oscillator(4.0, MassSign::Negative).unwrap()
        );
        assert!(toml::from_str::<MechanicsConfig>("kind = \"oscillator\"\nomega = 2.0").is_err());
    }
}

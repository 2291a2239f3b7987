//! JSON run configuration: strict parsing (unknown keys are errors) and
//! conversion into the core model types.

use serde::{Deserialize, Serialize};

use qdot_core::{
    level_energies, AxisSpec, CapacitanceNetwork, ChargingModel, DeviceSpec, GammaTable, GridSpec,
    OperatingPoint, SweepAxis, SweepTemplate, DEFAULT_CLASSIFY_TOL,
};

/// A whole run configuration as it appears on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub device: DeviceConfig,
    pub operating: OperatingConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    /// Level splitting: eps_t = +delta_eps/2, eps_b = -delta_eps/2.
    pub delta_eps: f64,
    pub gamma: GammaConfig,
    pub charging: ChargingConfig,
}

/// Either a single uniform rate or the full eight-channel table
/// (per dot and neighbour occupation, as [left, right] pairs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GammaConfig {
    Uniform(f64),
    Table(GammaTableConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaTableConfig {
    pub t0: [f64; 2],
    pub t1: [f64; 2],
    pub b0: [f64; 2],
    pub b1: [f64; 2],
}

/// Charging model selector. `mode` picks the variant; only that variant's
/// keys may be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargingConfig {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_b0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_t_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_t_right: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_b_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_b_right: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_mutual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatingConfig {
    pub t_mean: f64,
    pub delta_t: f64,
    pub delta_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub axes: Vec<AxisConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    /// One of "u", "delta_t", "delta_v".
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Only "csv" is supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// "full" (round-trip shortest representation, the default) or a
    /// significant-digit count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrecisionConfig {
    Named(String),
    Digits(u8),
}

/// How to print floating-point fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Full,
    Digits(u8),
}

impl Precision {
    pub fn format(self, value: f64) -> String {
        match self {
            // `{}` on f64 is the shortest representation that parses back
            // to the same bits.
            Precision::Full => format!("{value}"),
            Precision::Digits(d) => format!("{value:.*e}", usize::from(d)),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, String> {
        serde_json::from_str(text).map_err(|e| format!("config: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn device_spec(&self) -> Result<DeviceSpec, String> {
        let (eps_t, eps_b) = level_energies(self.device.delta_eps);
        let gamma = match &self.device.gamma {
            GammaConfig::Uniform(g) => GammaTable::uniform(*g)
                .map_err(|e| format!("config key device.gamma: {e}"))?,
            GammaConfig::Table(t) => {
                let table = [[t.t0, t.t1], [t.b0, t.b1]];
                GammaTable::from_fn(|dot, n, lead| {
                    table[dot as usize][n as usize][lead as usize]
                })
                .map_err(|e| format!("config key device.gamma: {e}"))?
            }
        };
        let charging = self.charging_model()?;
        DeviceSpec::new(eps_t, eps_b, gamma, charging)
            .map_err(|e| format!("config key device.charging: {e}"))
    }

    fn charging_model(&self) -> Result<ChargingModel, String> {
        let c = &self.device.charging;
        let require = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| format!("config key device.charging.{name}: required for mode \"{}\"", c.mode))
        };
        let forbid = |names: &[(&str, Option<f64>)]| -> Result<(), String> {
            for (name, v) in names {
                if v.is_some() {
                    return Err(format!(
                        "config key device.charging.{name}: not valid for mode \"{}\"",
                        c.mode
                    ));
                }
            }
            Ok(())
        };
        let model = match c.mode.as_str() {
            "symmetric" => {
                forbid(&[
                    ("u_t0", c.u_t0),
                    ("u_b0", c.u_b0),
                    ("c_t_left", c.c_t_left),
                    ("c_t_right", c.c_t_right),
                    ("c_b_left", c.c_b_left),
                    ("c_b_right", c.c_b_right),
                    ("c_mutual", c.c_mutual),
                ])?;
                ChargingModel::Symmetric {
                    kappa: require("kappa", c.kappa)?,
                    coupling: require("coupling", c.coupling)?,
                }
            }
            "direct" => {
                forbid(&[
                    ("kappa", c.kappa),
                    ("c_t_left", c.c_t_left),
                    ("c_t_right", c.c_t_right),
                    ("c_b_left", c.c_b_left),
                    ("c_b_right", c.c_b_right),
                    ("c_mutual", c.c_mutual),
                ])?;
                ChargingModel::Direct {
                    coupling: require("coupling", c.coupling)?,
                    u_top0: require("u_t0", c.u_t0)?,
                    u_bottom0: require("u_b0", c.u_b0)?,
                }
            }
            "capacitive" => {
                forbid(&[("kappa", c.kappa), ("coupling", c.coupling), ("u_t0", c.u_t0), ("u_b0", c.u_b0)])?;
                let network = CapacitanceNetwork::new(
                    require("c_t_left", c.c_t_left)?,
                    require("c_t_right", c.c_t_right)?,
                    require("c_b_left", c.c_b_left)?,
                    require("c_b_right", c.c_b_right)?,
                    require("c_mutual", c.c_mutual)?,
                )
                .map_err(|e| format!("config key device.charging: {e}"))?;
                ChargingModel::Capacitive { network }
            }
            other => {
                return Err(format!(
                    "config key device.charging.mode: unknown mode \"{other}\" (valid: symmetric, direct, capacitive)"
                ))
            }
        };
        model.validate().map_err(|e| format!("config key device.charging: {e}"))?;
        Ok(model)
    }

    pub fn operating_point(&self) -> Result<OperatingPoint, String> {
        OperatingPoint::new(
            self.operating.t_mean,
            self.operating.delta_t,
            self.operating.delta_v,
        )
        .map_err(|e| format!("config key operating.t_mean/operating.delta_t: {e}"))
    }

    pub fn template(&self) -> Result<SweepTemplate, String> {
        Ok(SweepTemplate {
            device: self.device_spec()?,
            operating: self.operating_point()?,
        })
    }

    pub fn grid_spec(&self) -> Result<Option<GridSpec>, String> {
        let Some(grid) = &self.grid else { return Ok(None) };
        let mut axes = Vec::new();
        for (i, axis) in grid.axes.iter().enumerate() {
            let sweep_axis = parse_axis(&axis.param)
                .map_err(|e| format!("config key grid.axes[{i}].param: {e}"))?;
            axes.push(AxisSpec {
                axis: sweep_axis,
                min: axis.min,
                max: axis.max,
                steps: axis.steps,
            });
        }
        GridSpec::new(axes)
            .map(Some)
            .map_err(|e| format!("config key grid.axes: {e}"))
    }

    pub fn classify_tol(&self) -> f64 {
        self.grid
            .as_ref()
            .and_then(|g| g.classify_tol)
            .unwrap_or(DEFAULT_CLASSIFY_TOL)
    }

    pub fn precision(&self) -> Result<Precision, String> {
        let Some(output) = &self.output else { return Ok(Precision::Full) };
        if let Some(format) = &output.format {
            if format != "csv" {
                return Err(format!(
                    "config key output.format: unsupported format \"{format}\" (only csv)"
                ));
            }
        }
        match &output.precision {
            None => Ok(Precision::Full),
            Some(PrecisionConfig::Named(name)) if name == "full" => Ok(Precision::Full),
            Some(PrecisionConfig::Named(name)) => Err(format!(
                "config key output.precision: unknown precision \"{name}\" (use \"full\" or a digit count)"
            )),
            Some(PrecisionConfig::Digits(d)) => Ok(Precision::Digits(*d)),
        }
    }

    pub fn output_path(&self) -> Option<&str> {
        self.output.as_ref().and_then(|o| o.path.as_deref())
    }
}

pub fn parse_axis(name: &str) -> Result<SweepAxis, String> {
    match name {
        "u" => Ok(SweepAxis::Coupling),
        "delta_t" => Ok(SweepAxis::DeltaT),
        "delta_v" => Ok(SweepAxis::DeltaV),
        other => Err(format!("unknown axis \"{other}\" (valid: u, delta_t, delta_v)")),
    }
}

//! Built-in figure presets: the shared device constants plus the per-figure
//! axes and fixed forces. Only constants the figures actually pin are baked
//! in; curve-family values that vary between plotted lines must be supplied
//! as overrides.

use std::collections::BTreeMap;

use qdot_core::{
    level_energies, AxisSpec, ChargingModel, ContourQuantity, DeviceSpec, GammaTable, GridSpec,
    OperatingPoint, SweepAxis, SweepTemplate,
};

pub const FIGURE_NAMES: [&str; 8] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4", "fig5", "fig6",
];

/// A fully resolved figure run.
#[derive(Debug)]
pub struct FigureRun {
    pub name: &'static str,
    pub template: SweepTemplate,
    pub grid: GridSpec,
    /// Zero-contour sidecar to emit, if the figure has one.
    pub contour: Option<ContourQuantity>,
}

#[derive(Debug, Clone, Copy)]
struct AxisRange {
    min: f64,
    max: f64,
    steps: usize,
}

/// Mutable knobs a preset exposes; everything overridable via `--set`.
#[derive(Debug, Clone)]
struct Knobs {
    t_mean: f64,
    delta_eps: f64,
    kappa: f64,
    gamma: f64,
    coupling: f64,
    delta_t: Option<f64>,
    delta_v: Option<f64>,
    u_range: AxisRange,
    dt_range: AxisRange,
    dv_range: AxisRange,
}

impl Default for Knobs {
    fn default() -> Self {
        // Shared constants of all figures: T = 7.5, delta_eps = 3,
        // kappa = 20, uniform bare rate 1 (natural units).
        Knobs {
            t_mean: 7.5,
            delta_eps: 3.0,
            kappa: 20.0,
            gamma: 1.0,
            coupling: 40.0,
            delta_t: None,
            delta_v: None,
            u_range: AxisRange { min: 0.0, max: 80.0, steps: 401 },
            dt_range: AxisRange { min: -5.0, max: 5.0, steps: 201 },
            dv_range: AxisRange { min: -5.0, max: 5.0, steps: 201 },
        }
    }
}

/// Resolve a figure name plus `key=value` overrides into a runnable sweep.
pub fn figure_run(name: &str, overrides: &[(String, f64)]) -> Result<FigureRun, String> {
    let (name, axes, contour, knobs) = match name {
        // Particle current vs coupling at fixed temperature gradient; the
        // bias picks the curve within the family and must be supplied.
        "fig2a" => (
            "fig2a",
            vec![SweepAxis::Coupling],
            None,
            Knobs { delta_t: Some(5.0), ..Knobs::default() },
        ),
        "fig2b" => (
            "fig2b",
            vec![SweepAxis::Coupling],
            None,
            Knobs { delta_v: Some(5.0), ..Knobs::default() },
        ),
        // Energy current vs coupling at delta_t = 0.2. The bias-3 curve is
        // the reference member of the family (the entropy-decomposition
        // sweep fig5 uses the same point), so it doubles as the default.
        "fig2c" => (
            "fig2c",
            vec![SweepAxis::Coupling],
            None,
            Knobs { delta_t: Some(0.2), delta_v: Some(3.0), ..Knobs::default() },
        ),
        "fig2d" => (
            "fig2d",
            vec![SweepAxis::Coupling],
            None,
            Knobs { delta_v: Some(3.0), ..Knobs::default() },
        ),
        "fig3" => (
            "fig3",
            vec![SweepAxis::DeltaT, SweepAxis::DeltaV],
            Some(ContourQuantity::ParticleCurrent),
            Knobs::default(),
        ),
        "fig4" => (
            "fig4",
            vec![SweepAxis::DeltaT, SweepAxis::DeltaV],
            Some(ContourQuantity::EnergyCurrent),
            Knobs::default(),
        ),
        "fig5" => (
            "fig5",
            vec![SweepAxis::Coupling],
            None,
            Knobs { delta_t: Some(0.2), delta_v: Some(3.0), ..Knobs::default() },
        ),
        "fig6" => (
            "fig6",
            vec![SweepAxis::DeltaT, SweepAxis::DeltaV],
            None,
            Knobs::default(),
        ),
        other => {
            return Err(format!(
                "unknown figure \"{other}\" (valid: {})",
                FIGURE_NAMES.join(", ")
            ))
        }
    };
    let knobs = apply_overrides(knobs, overrides, &axes)?;
    build_run(name, axes, contour, knobs)
}

fn apply_overrides(
    mut knobs: Knobs,
    overrides: &[(String, f64)],
    axes: &[SweepAxis],
) -> Result<Knobs, String> {
    for (key, value) in overrides {
        match key.as_str() {
            "t_mean" => knobs.t_mean = *value,
            "delta_eps" => knobs.delta_eps = *value,
            "kappa" => knobs.kappa = *value,
            "gamma" => knobs.gamma = *value,
            "u" => {
                if axes.contains(&SweepAxis::Coupling) {
                    return Err("key \"u\" is a swept axis for this figure; override u_min/u_max/u_steps instead".into());
                }
                knobs.coupling = *value;
            }
            "delta_t" => {
                if axes.contains(&SweepAxis::DeltaT) {
                    return Err("key \"delta_t\" is a swept axis for this figure; override dt_min/dt_max/dt_steps instead".into());
                }
                knobs.delta_t = Some(*value);
            }
            "delta_v" => {
                if axes.contains(&SweepAxis::DeltaV) {
                    return Err("key \"delta_v\" is a swept axis for this figure; override dv_min/dv_max/dv_steps instead".into());
                }
                knobs.delta_v = Some(*value);
            }
            "u_min" => knobs.u_range.min = *value,
            "u_max" => knobs.u_range.max = *value,
            "u_steps" => knobs.u_range.steps = *value as usize,
            "dt_min" => knobs.dt_range.min = *value,
            "dt_max" => knobs.dt_range.max = *value,
            "dt_steps" => knobs.dt_range.steps = *value as usize,
            "dv_min" => knobs.dv_range.min = *value,
            "dv_max" => knobs.dv_range.max = *value,
            "dv_steps" => knobs.dv_range.steps = *value as usize,
            other => {
                return Err(format!(
                    "unknown override key \"{other}\" (valid: t_mean, delta_eps, kappa, gamma, u, delta_t, delta_v, <axis>_min/max/steps for axis in u, dt, dv)"
                ))
            }
        }
    }
    Ok(knobs)
}

fn build_run(
    name: &'static str,
    axes: Vec<SweepAxis>,
    contour: Option<ContourQuantity>,
    knobs: Knobs,
) -> Result<FigureRun, String> {
    let delta_t = match (axes.contains(&SweepAxis::DeltaT), knobs.delta_t) {
        (true, _) => 0.0, // placeholder; the axis supplies the value
        (false, Some(v)) => v,
        (false, None) => {
            return Err(format!(
                "figure {name} needs --set delta_t=<value>: the per-curve temperature gradient is not a baked constant"
            ))
        }
    };
    let delta_v = match (axes.contains(&SweepAxis::DeltaV), knobs.delta_v) {
        (true, _) => 0.0,
        (false, Some(v)) => v,
        (false, None) => {
            return Err(format!(
                "figure {name} needs --set delta_v=<value>: the per-curve voltage bias is not a baked constant"
            ))
        }
    };
    let (eps_t, eps_b) = level_energies(knobs.delta_eps);
    let device = DeviceSpec::new(
        eps_t,
        eps_b,
        GammaTable::uniform(knobs.gamma).map_err(|e| e.to_string())?,
        ChargingModel::Symmetric { kappa: knobs.kappa, coupling: knobs.coupling },
    )
    .map_err(|e| e.to_string())?;
    let operating =
        OperatingPoint::new(knobs.t_mean, delta_t, delta_v).map_err(|e| e.to_string())?;
    let ranges: BTreeMap<&str, AxisRange> = BTreeMap::from([
        ("u", knobs.u_range),
        ("dt", knobs.dt_range),
        ("dv", knobs.dv_range),
    ]);
    let axis_specs: Vec<AxisSpec> = axes
        .iter()
        .map(|axis| {
            let range = match axis {
                SweepAxis::Coupling => ranges["u"],
                SweepAxis::DeltaT => ranges["dt"],
                SweepAxis::DeltaV => ranges["dv"],
            };
            AxisSpec { axis: *axis, min: range.min, max: range.max, steps: range.steps }
        })
        .collect();
    let grid = GridSpec::new(axis_specs).map_err(|e| e.to_string())?;
    Ok(FigureRun {
        name,
        template: SweepTemplate { device, operating },
        grid,
        contour,
    })
}

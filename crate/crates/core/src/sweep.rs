//! Parameter-grid evaluation, inverse-current classification, zero-current
//! contours, region disjointness and the near-equilibrium reciprocity check.
//!
//! Grid points are independent pure computations; they are evaluated in
//! parallel and collected into a row-major table whose content does not
//! depend on the degree of parallelism.

use rayon::prelude::*;

use crate::contour::{extract_zero_contours, Polyline};
use crate::device::{DeviceSpec, OperatingPoint};
use crate::error::{Error, Result};
use crate::observables::TransportReport;
use crate::steady_state::ProbabilityVector;
use crate::transport::solve_transport;

/// Default dead-band tolerance for classification (natural units).
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-12;

/// Sweepable parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Inter-dot coupling energy U.
    Coupling,
    /// Temperature gradient.
    DeltaT,
    /// Voltage bias.
    DeltaV,
}

impl SweepAxis {
    /// Column name used in tabular output.
    pub fn key(self) -> &'static str {
        match self {
            SweepAxis::Coupling => "u",
            SweepAxis::DeltaT => "delta_t",
            SweepAxis::DeltaV => "delta_v",
        }
    }
}

/// One swept axis: an inclusive [min, max] range sampled at `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn value_at(&self, index: usize) -> f64 {
        self.min + (self.max - self.min) * index as f64 / (self.steps - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value_at(i)).collect()
    }
}

/// A 1D or 2D sweep grid. Row-major: the first axis is the slow one.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    axes: Vec<AxisSpec>,
}

impl GridSpec {
    pub fn new(axes: Vec<AxisSpec>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidGrid(format!(
                "expected 1 or 2 axes, got {}",
                axes.len()
            )));
        }
        if axes.len() == 2 && axes[0].axis == axes[1].axis {
            return Err(Error::InvalidGrid(format!(
                "duplicate axis {}",
                axes[0].axis.key()
            )));
        }
        for a in &axes {
            if a.steps < 2 {
                return Err(Error::InvalidGrid(format!(
                    "axis {} needs at least 2 steps, got {}",
                    a.axis.key(),
                    a.steps
                )));
            }
            if !(a.min < a.max) {
                return Err(Error::InvalidGrid(format!(
                    "axis {}: min {} must be below max {}",
                    a.axis.key(),
                    a.min,
                    a.max
                )));
            }
        }
        Ok(GridSpec { axes })
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of the flat `index` in row-major order.
    pub fn coords(&self, index: usize) -> Vec<f64> {
        match self.axes.len() {
            1 => vec![self.axes[0].value_at(index)],
            2 => {
                let inner = self.axes[1].steps;
                vec![
                    self.axes[0].value_at(index / inner),
                    self.axes[1].value_at(index % inner),
                ]
            }
            _ => unreachable!("validated arity"),
        }
    }
}

/// The fixed device and operating point that grid coordinates perturb.
#[derive(Debug, Clone)]
pub struct SweepTemplate {
    pub device: DeviceSpec,
    pub operating: OperatingPoint,
}

impl SweepTemplate {
    /// The template with the given axis values substituted in.
    pub fn at(&self, assignments: &[(SweepAxis, f64)]) -> Result<(DeviceSpec, OperatingPoint)> {
        let mut device = self.device.clone();
        let mut op = self.operating;
        for &(axis, value) in assignments {
            match axis {
                SweepAxis::Coupling => {
                    device.charging = device.charging.with_coupling(value)?;
                }
                SweepAxis::DeltaT => op.delta_t = value,
                SweepAxis::DeltaV => op.delta_v = value,
            }
        }
        Ok((device, op))
    }

    /// Check every grid corner up front so a sweep cannot die halfway
    /// through on a constraint that was knowable at submission.
    fn validate_grid(&self, grid: &GridSpec) -> Result<()> {
        let corners: Vec<Vec<f64>> = match grid.axes().len() {
            1 => vec![vec![grid.axes()[0].min], vec![grid.axes()[0].max]],
            _ => {
                let (a, b) = (grid.axes()[0], grid.axes()[1]);
                [a.min, a.max]
                    .into_iter()
                    .flat_map(|x| [b.min, b.max].into_iter().map(move |y| vec![x, y]))
                    .collect()
            }
        };
        for corner in corners {
            let assignments: Vec<(SweepAxis, f64)> = grid
                .axes()
                .iter()
                .zip(corner.iter())
                .map(|(a, &v)| (a.axis, v))
                .collect();
            let (_, op) = self.at(&assignments)?;
            op.validate()?;
        }
        Ok(())
    }
}

/// Inverse-current flags for one evaluated point.
///
/// A current is inverse when it opposes *both* applied forces, which
/// requires the forces to share a sign; the two flags can never both be set
/// at the same point without breaking the second law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClassification {
    pub inverse_particle: bool,
    pub inverse_energy: bool,
    /// Relevant current magnitude below the tolerance; the point cannot be
    /// meaningfully classified.
    pub dead_band: bool,
}

/// Classify a point against the quadrant rule: a current is inverse iff
/// both forces exceed +tol and the current is below -tol, or the mirrored
/// statement with every sign flipped.
pub fn classify(
    report: &TransportReport,
    delta_t: f64,
    delta_v: f64,
    tol: f64,
) -> PointClassification {
    let inverse = |current: f64| {
        (delta_t > tol && delta_v > tol && current < -tol)
            || (delta_t < -tol && delta_v < -tol && current > tol)
    };
    let inverse_particle = inverse(report.j_rho);
    let inverse_energy = inverse(report.j_u);
    debug_assert!(
        !(inverse_particle && inverse_energy),
        "both inverse flags set at dT={delta_t}, dV={delta_v}: second-law violation"
    );
    PointClassification {
        inverse_particle,
        inverse_energy,
        dead_band: report.j_rho.abs() <= tol || report.j_u.abs() <= tol,
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Swept-axis values, in axis order.
    pub coords: Vec<f64>,
    pub probabilities: ProbabilityVector,
    pub report: TransportReport,
    pub class: PointClassification,
}

/// Row-major table of evaluated grid points.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub grid: GridSpec,
    pub classify_tol: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Smallest entropy current over the table.
    pub fn min_entropy_current(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.report.j_s)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest conservation residual magnitudes (charge, energy, first law).
    pub fn max_residuals(&self) -> (f64, f64, f64) {
        self.rows.iter().fold((0.0, 0.0, 0.0), |acc, r| {
            (
                f64::max(acc.0, r.report.residual_charge.abs()),
                f64::max(acc.1, r.report.residual_energy.abs()),
                f64::max(acc.2, r.report.residual_first_law.abs()),
            )
        })
    }
}

/// Evaluate the template over the grid. Points are computed independently
/// (in parallel) and emitted in row-major order; every point re-asserts the
/// conservation-law invariants of its report.
pub fn sweep(template: &SweepTemplate, grid: &GridSpec, classify_tol: f64) -> Result<SweepTable> {
    template.validate_grid(grid)?;
    let results: Vec<Result<SweepRow>> = (0..grid.len())
        .into_par_iter()
        .map(|index| evaluate_row(template, grid, index, classify_tol))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for row in results {
        rows.push(row?);
    }
    Ok(SweepTable {
        grid: grid.clone(),
        classify_tol,
        rows,
    })
}

fn evaluate_row(
    template: &SweepTemplate,
    grid: &GridSpec,
    index: usize,
    classify_tol: f64,
) -> Result<SweepRow> {
    let coords = grid.coords(index);
    let assignments: Vec<(SweepAxis, f64)> = grid
        .axes()
        .iter()
        .zip(coords.iter())
        .map(|(a, &v)| (a.axis, v))
        .collect();
    let coord_string = || {
        assignments
            .iter()
            .map(|(a, v)| format!("{}={}", a.key(), v))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let (device, op) = template
        .at(&assignments)
        .map_err(|e| Error::SweepPointFailed { coords: coord_string(), source: Box::new(e) })?;
    let solution = solve_transport(&device, &op)
        .map_err(|e| Error::SweepPointFailed { coords: coord_string(), source: Box::new(e) })?;
    if let Some((name, detail)) = solution.report.check_invariants() {
        return Err(Error::InvariantViolation {
            name,
            coords: coord_string(),
            detail,
        });
    }
    let class = classify(&solution.report, op.delta_t, op.delta_v, classify_tol);
    Ok(SweepRow {
        coords,
        probabilities: solution.probabilities,
        report: solution.report,
        class,
    })
}

/// Currents whose zero level set can be extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourQuantity {
    ParticleCurrent,
    EnergyCurrent,
}

impl ContourQuantity {
    fn of(self, report: &TransportReport) -> f64 {
        match self {
            ContourQuantity::ParticleCurrent => report.j_rho,
            ContourQuantity::EnergyCurrent => report.j_u,
        }
    }
}

/// Zero contours of `quantity` over a 2D sweep. Edge roots are found by
/// bisection on fresh model solves, to an absolute tolerance of 1e-12 times
/// the largest |quantity| on the grid.
pub fn zero_contour(
    template: &SweepTemplate,
    table: &SweepTable,
    quantity: ContourQuantity,
) -> Result<Vec<Polyline>> {
    let axes = table.grid.axes();
    if axes.len() != 2 {
        return Err(Error::InvalidGrid(
            "contour extraction needs a 2D grid".into(),
        ));
    }
    let xs = axes[0].values();
    let ys = axes[1].values();
    let values: Vec<f64> = table.rows.iter().map(|r| quantity.of(&r.report)).collect();
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let (axis0, axis1) = (axes[0].axis, axes[1].axis);
    let eval = |x: f64, y: f64| -> f64 {
        let (device, op) = template
            .at(&[(axis0, x), (axis1, y)])
            .expect("grid was validated");
        let solution = solve_transport(&device, &op).expect("grid was validated");
        quantity.of(&solution.report)
    };
    Ok(extract_zero_contours(&xs, &ys, &values, eval, 1e-12 * scale))
}

/// Count and bounding box of one inverse-current region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSummary {
    pub count: usize,
    /// (axis0 min, axis0 max, axis1 min, axis1 max) over flagged points.
    pub bounding_box: Option<(f64, f64, f64, f64)>,
}

impl RegionSummary {
    fn from_points(points: &[(f64, f64)]) -> Self {
        let bounding_box = if points.is_empty() {
            None
        } else {
            Some(points.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
                |acc, p| {
                    (
                        f64::min(acc.0, p.0),
                        f64::max(acc.1, p.0),
                        f64::min(acc.2, p.1),
                        f64::max(acc.3, p.1),
                    )
                },
            ))
        };
        RegionSummary { count: points.len(), bounding_box }
    }
}

/// Disjointness audit of the two inverse-current regions on a 2D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointnessReport {
    pub particle: RegionSummary,
    pub energy: RegionSummary,
    /// Points carrying both flags; nonempty means a physics-violating bug.
    pub overlaps: Vec<(f64, f64)>,
}

impl DisjointnessReport {
    pub fn is_disjoint(&self) -> bool {
        self.overlaps.is_empty()
    }
}

/// Collect the inverse-current regions of a 2D sweep and any overlap
/// between them.
pub fn region_disjointness(table: &SweepTable) -> Result<DisjointnessReport> {
    if table.grid.axes().len() != 2 {
        return Err(Error::InvalidGrid(
            "region disjointness needs a 2D grid".into(),
        ));
    }
    let mut particle = Vec::new();
    let mut energy = Vec::new();
    let mut overlaps = Vec::new();
    for row in &table.rows {
        let p = (row.coords[0], row.coords[1]);
        if row.class.inverse_particle {
            particle.push(p);
        }
        if row.class.inverse_energy {
            energy.push(p);
        }
        if row.class.inverse_particle && row.class.inverse_energy {
            overlaps.push(p);
        }
    }
    Ok(DisjointnessReport {
        particle: RegionSummary::from_points(&particle),
        energy: RegionSummary::from_points(&energy),
        overlaps,
    })
}

/// Near-equilibrium linear-response matrix and its Onsager asymmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnsagerReport {
    /// Response of the fluxes (N_L, mean heat current) to the affinities
    /// (dV/T, dT/T^2), by central finite differences around equilibrium.
    pub matrix: [[f64; 2]; 2],
    /// |L_12 - L_21| / max |L_ij|.
    pub relative_asymmetry: f64,
}

/// Finite-difference the fluxes around dT = dV = 0 with parameter step `h`.
///
/// Fluxes are the particle current N_L and the mean of the two lead heat
/// currents, (Q_L_out + Q_R_in)/2; affinities are dV/T and dT/T^2.
pub fn onsager_check(device: &DeviceSpec, t_mean: f64, h: f64) -> Result<OnsagerReport> {
    if !(h > 0.0) {
        return Err(Error::InvalidGrid(format!("step h must be positive, got {h}")));
    }
    let fluxes = |delta_t: f64, delta_v: f64| -> Result<[f64; 2]> {
        let op = OperatingPoint::new(t_mean, delta_t, delta_v)?;
        let sol = solve_transport(device, &op)?;
        Ok([
            sol.report.n_left,
            0.5 * (sol.report.q_left_out + sol.report.q_right_in),
        ])
    };
    let plus_v = fluxes(0.0, h)?;
    let minus_v = fluxes(0.0, -h)?;
    let plus_t = fluxes(h, 0.0)?;
    let minus_t = fluxes(-h, 0.0)?;
    let d_affinity_v = 2.0 * h / t_mean;
    let d_affinity_t = 2.0 * h / (t_mean * t_mean);
    let mut matrix = [[0.0; 2]; 2];
    for flux in 0..2 {
        matrix[flux][0] = (plus_v[flux] - minus_v[flux]) / d_affinity_v;
        matrix[flux][1] = (plus_t[flux] - minus_t[flux]) / d_affinity_t;
    }
    let max = matrix
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    let relative_asymmetry = if max > 0.0 {
        (matrix[0][1] - matrix[1][0]).abs() / max
    } else {
        0.0
    };
    Ok(OnsagerReport { matrix, relative_asymmetry })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{level_energies, GammaTable};
    use crate::electrostatics::ChargingModel;

    fn preset_template(delta_t: f64, delta_v: f64) -> SweepTemplate {
        let (eps_t, eps_b) = level_energies(3.0);
        SweepTemplate {
            device: DeviceSpec::new(
                eps_t,
                eps_b,
                GammaTable::uniform(1.0).unwrap(),
                ChargingModel::Symmetric { kappa: 20.0, coupling: 40.0 },
            )
            .unwrap(),
            operating: OperatingPoint::new(7.5, delta_t, delta_v).unwrap(),
        }
    }

    fn coupling_axis(min: f64, max: f64, steps: usize) -> AxisSpec {
        AxisSpec { axis: SweepAxis::Coupling, min, max, steps }
    }

    #[test]
    fn grid_validation_rejects_bad_shapes() {
        assert!(GridSpec::new(vec![]).is_err());
        assert!(GridSpec::new(vec![coupling_axis(0.0, 1.0, 1)]).is_err());
        assert!(GridSpec::new(vec![coupling_axis(1.0, 0.0, 5)]).is_err());
        assert!(GridSpec::new(vec![coupling_axis(0.0, 1.0, 3), coupling_axis(0.0, 2.0, 3)]).is_err());
    }

    #[test]
    fn equilibrium_sweep_is_all_zero() {
        let template = preset_template(0.0, 0.0);
        let grid = GridSpec::new(vec![coupling_axis(0.0, 50.0, 11)]).unwrap();
        let table = sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(table.rows.len(), 11);
        for row in &table.rows {
            assert!(row.report.j_rho.abs() < 1e-12);
            assert!(row.report.j_u.abs() < 1e-12);
            assert!(row.class.dead_band);
            assert!(!row.class.inverse_particle && !row.class.inverse_energy);
        }
    }

    #[test]
    fn rows_come_out_row_major() {
        let template = preset_template(0.5, 0.5);
        let grid = GridSpec::new(vec![
            AxisSpec { axis: SweepAxis::DeltaT, min: -1.0, max: 1.0, steps: 3 },
            AxisSpec { axis: SweepAxis::DeltaV, min: -2.0, max: 2.0, steps: 2 },
        ])
        .unwrap();
        let table = sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).unwrap();
        let coords: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.coords[0], r.coords[1])).collect();
        assert_eq!(
            coords,
            vec![
                (-1.0, -2.0),
                (-1.0, 2.0),
                (0.0, -2.0),
                (0.0, 2.0),
                (1.0, -2.0),
                (1.0, 2.0)
            ]
        );
    }

    #[test]
    fn coupling_sweep_finds_the_energy_current_sign_change() {
        // dT = 0.2, dV = 3: J_u starts positive and turns negative as the
        // coupling grows.
        let template = preset_template(0.2, 3.0);
        let grid = GridSpec::new(vec![coupling_axis(0.0, 80.0, 81)]).unwrap();
        let table = sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).unwrap();
        let first = table.rows.first().unwrap().report.j_u;
        let min = table.rows.iter().map(|r| r.report.j_u).fold(f64::INFINITY, f64::min);
        assert!(first > 0.0);
        assert!(min < 0.0);
    }

    #[test]
    fn classify_follows_the_quadrant_rule() {
        let template = preset_template(0.2, 3.0);
        let sol = solve_transport(&template.device, &template.operating).unwrap();
        let mut report = sol.report;
        report.j_rho = -0.01;
        report.j_u = 0.4;
        assert!(classify(&report, 5.0, 5.0, 1e-12).inverse_particle);
        // Opposing forces can never host an inverse current.
        assert!(!classify(&report, 5.0, -5.0, 1e-12).inverse_particle);
        assert!(!classify(&report, 5.0, -5.0, 1e-12).inverse_energy);
        // A zero force cannot be opposed.
        assert!(!classify(&report, 0.0, 3.0, 1e-12).inverse_particle);
        // The mirrored quadrant with both signs flipped.
        report.j_rho = 0.01;
        report.j_u = -0.4;
        assert!(classify(&report, -5.0, -5.0, 1e-12).inverse_particle);
        assert!(!classify(&report, -5.0, -5.0, 1e-12).inverse_energy);
    }

    #[test]
    fn dead_band_marks_tiny_currents() {
        let template = preset_template(0.2, 3.0);
        let sol = solve_transport(&template.device, &template.operating).unwrap();
        let mut report = sol.report;
        report.j_rho = 0.5e-12;
        report.j_u = 0.3;
        let class = classify(&report, 5.0, 5.0, 1e-12);
        assert!(class.dead_band);
        assert!(!class.inverse_particle);
    }

    #[test]
    fn zero_bias_grid_is_vacuously_disjoint() {
        // With dV pinned at zero one force is absent everywhere, so neither
        // flag can ever be raised no matter how the currents behave.
        let template = preset_template(0.0, 0.0);
        let grid = GridSpec::new(vec![
            AxisSpec { axis: SweepAxis::Coupling, min: 0.0, max: 60.0, steps: 5 },
            AxisSpec { axis: SweepAxis::DeltaT, min: -1.0, max: 1.0, steps: 5 },
        ])
        .unwrap();
        let table = sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).unwrap();
        let report = region_disjointness(&table).unwrap();
        assert!(report.is_disjoint());
        assert_eq!(report.particle.count, 0);
        assert_eq!(report.energy.count, 0);
    }

    #[test]
    fn opposed_force_quadrants_stay_empty() {
        let template = preset_template(0.0, 0.0);
        let grid = GridSpec::new(vec![
            AxisSpec { axis: SweepAxis::DeltaT, min: 0.5, max: 4.0, steps: 6 },
            AxisSpec { axis: SweepAxis::DeltaV, min: -4.0, max: -0.5, steps: 6 },
        ])
        .unwrap();
        let table = sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).unwrap();
        let report = region_disjointness(&table).unwrap();
        assert_eq!(report.particle.count, 0);
        assert_eq!(report.energy.count, 0);
    }

    #[test]
    fn sweep_aborts_with_offending_coordinates() {
        let template = preset_template(0.0, 0.0);
        // delta_t up to 16 drives the right bath temperature negative.
        let grid = GridSpec::new(vec![AxisSpec {
            axis: SweepAxis::DeltaT,
            min: 0.0,
            max: 16.0,
            steps: 5,
        }])
        .unwrap();
        match sweep(&template, &grid, DEFAULT_CLASSIFY_TOL) {
            Err(Error::NonPositiveTemperature { .. }) | Err(Error::SweepPointFailed { .. }) => {}
            other => panic!("expected a grid-validation failure, got {other:?}"),
        }
    }

    #[test]
    fn capacitive_template_cannot_sweep_coupling() {
        let (eps_t, eps_b) = level_energies(3.0);
        let template = SweepTemplate {
            device: DeviceSpec::new(
                eps_t,
                eps_b,
                GammaTable::uniform(1.0).unwrap(),
                ChargingModel::Capacitive {
                    network: crate::electrostatics::CapacitanceNetwork::symmetric(0.05, 0.05)
                        .unwrap(),
                },
            )
            .unwrap(),
            operating: OperatingPoint::new(7.5, 0.2, 3.0).unwrap(),
        };
        let grid = GridSpec::new(vec![coupling_axis(0.0, 10.0, 3)]).unwrap();
        assert!(sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).is_err());
    }

    #[test]
    fn onsager_matrix_is_nearly_symmetric() {
        let template = preset_template(0.0, 0.0);
        let report = onsager_check(&template.device, 7.5, 1e-4).unwrap();
        assert!(
            report.relative_asymmetry < 1e-5,
            "asymmetry {}",
            report.relative_asymmetry
        );
        assert!(report.matrix[0][0] > 0.0);
        assert!(report.matrix[1][1] > 0.0);
    }

    #[test]
    fn onsager_cross_coefficient_tracks_the_level_sign() {
        // Decoupled dots: the thermoelectric cross term follows the sign of
        // the mu-referenced level energy.
        let gamma = GammaTable::uniform(1.0).unwrap();
        let above = DeviceSpec::new(
            1.2,
            1.2,
            gamma,
            ChargingModel::Direct { coupling: 0.0, u_top0: 0.0, u_bottom0: 0.0 },
        )
        .unwrap();
        let below = DeviceSpec::new(
            -1.2,
            -1.2,
            gamma,
            ChargingModel::Direct { coupling: 0.0, u_top0: 0.0, u_bottom0: 0.0 },
        )
        .unwrap();
        let r_above = onsager_check(&above, 5.0, 1e-4).unwrap();
        let r_below = onsager_check(&below, 5.0, 1e-4).unwrap();
        assert!(r_above.matrix[0][1] > 0.0);
        assert!(r_below.matrix[0][1] < 0.0);
    }

    #[test]
    fn onsager_differences_converge_quadratically() {
        let template = preset_template(0.0, 0.0);
        let l_h = onsager_check(&template.device, 7.5, 4e-3).unwrap().matrix;
        let l_h2 = onsager_check(&template.device, 7.5, 2e-3).unwrap().matrix;
        let l_h4 = onsager_check(&template.device, 7.5, 1e-3).unwrap().matrix;
        for i in 0..2 {
            for j in 0..2 {
                let d1 = (l_h[i][j] - l_h2[i][j]).abs();
                let d2 = (l_h2[i][j] - l_h4[i][j]).abs();
                if d2 > 1e-12 {
                    let ratio = d1 / d2;
                    assert!(
                        (2.5..6.0).contains(&ratio),
                        "entry ({i},{j}): ratio {ratio}, d1 {d1}, d2 {d2}"
                    );
                }
            }
        }
    }
}

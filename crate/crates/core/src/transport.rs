//! One-call pipeline from a device and operating point to the full
//! steady-state solution.

use crate::device::{BathSpec, DeviceSpec, OperatingPoint};
use crate::electrostatics::{charging_energies, lead_offsets, ChargingEnergies, LeadOffsets};
use crate::error::Result;
use crate::kinetics::{build_generator, rate_table, Generator};
use crate::observables::TransportReport;
use crate::steady_state::{solve_stationary, ProbabilityVector};

/// Everything computed at a single operating point.
#[derive(Debug, Clone, Copy)]
pub struct PointSolution {
    pub left: BathSpec,
    pub right: BathSpec,
    pub charging: ChargingEnergies,
    pub offsets: LeadOffsets,
    pub generator: Generator,
    pub probabilities: ProbabilityVector,
    pub report: TransportReport,
}

/// Derive the baths, charging energies and offsets, build the generator,
/// solve for the stationary state and assemble the transport report.
pub fn solve_transport(device: &DeviceSpec, op: &OperatingPoint) -> Result<PointSolution> {
    let (left, right) = op.baths()?;
    let charging = charging_energies(&device.charging, op.delta_v)?;
    let offsets = lead_offsets(&device.charging, op.delta_v)?;
    let rates = rate_table(device, (&left, &right), &offsets, &charging);
    let generator = build_generator(&rates);
    let probabilities = solve_stationary(&generator)?;
    let report = TransportReport::compute(&rates, &probabilities, &left, &right);
    Ok(PointSolution {
        left,
        right,
        charging,
        offsets,
        generator,
        probabilities,
        report,
    })
}

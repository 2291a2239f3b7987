//! Steady-state transport in two capacitively coupled quantum dots.
//!
//! Two single-level dots in the Coulomb-blockade regime exchange electrons
//! with two reservoirs held at different temperatures and chemical
//! potentials. The dots exchange energy (never particles) through their
//! mutual charging energy, which couples the particle and heat flows
//! strongly enough that one current can run against both applied forces.
//! This crate builds the four-state rate equation for that system, solves
//! it, and reports particle/heat/energy currents, the entropy current and
//! its forward/inverse decomposition, and the conservation-law residuals,
//! plus the grid-sweep, contour and classification machinery used to map
//! where the inverse currents live.
//!
//! Units: energies in units of the bare tunnel rate (hbar*gamma = 1),
//! k_B = 1, q = 1; rates in units of gamma.

// Negated comparisons like `!(x > 0.0)` are deliberate: they reject NaN
// along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contour;
pub mod device;
pub mod electrostatics;
pub mod error;
pub mod kinetics;
pub mod observables;
pub mod steady_state;
pub mod sweep;
pub mod transport;
pub mod validate;

pub use device::{
    level_energies, BathSpec, DeviceSpec, Dot, GammaTable, Lead, OperatingPoint, SystemState,
    STATES,
};
pub use electrostatics::{
    charging_energies, lead_offsets, CapacitanceNetwork, ChargingEnergies, ChargingModel,
    LeadOffsets,
};
pub use error::{Error, Result};
pub use kinetics::{build_generator, fermi_minus, fermi_plus, rate_table, Direction, Generator, RateTable};
pub use observables::{entropy_currents, heat_current, particle_current, TransportReport};
pub use steady_state::{evolve, gibbs_equilibrium, solve_stationary, ProbabilityVector};
pub use sweep::{
    classify, onsager_check, region_disjointness, sweep, zero_contour, AxisSpec, ContourQuantity,
    DisjointnessReport, GridSpec, OnsagerReport, PointClassification, SweepAxis, SweepRow,
    SweepTable, SweepTemplate, DEFAULT_CLASSIFY_TOL,
};
pub use transport::{solve_transport, PointSolution};

//! Particle, heat and energy currents per lead, the entropy current and its
//! inverse/forward decomposition, and the conservation-law residuals.
//!
//! The internal sign convention is "into the system positive" at both leads.
//! The headline quantities are derived views of that: `j_rho` is the
//! particle current at the left lead and `j_u` the heat current deposited
//! into the right reservoir, so each carries the sign of the flow it names.

use crate::device::{BathSpec, Dot, Lead, SystemState};
use crate::kinetics::{Direction, RateTable};
use crate::steady_state::ProbabilityVector;

/// Net particle current from `lead` into the system (units of gamma).
pub fn particle_current(lead: Lead, rates: &RateTable, p: &ProbabilityVector) -> f64 {
    channel_sum(lead, rates, p, |_, _| 1.0)
}

/// Heat flowing out of the reservoir at `lead` into the system. Each
/// transferred electron carries its channel energy measured from that
/// reservoir's chemical potential.
fn reservoir_heat_outflow(lead: Lead, rates: &RateTable, p: &ProbabilityVector) -> f64 {
    channel_sum(lead, rates, p, |dot, n| rates.argument(dot, n, lead))
}

/// Sum over the eight (dot, n) channels at one lead of
/// weight * (Gamma_in * p_empty - Gamma_out * p_occupied).
fn channel_sum(
    lead: Lead,
    rates: &RateTable,
    p: &ProbabilityVector,
    weight: impl Fn(Dot, u8) -> f64,
) -> f64 {
    let mut total = 0.0;
    for dot in Dot::ALL {
        for n_other in 0..2u8 {
            let empty = occupation_state(dot, 0, n_other);
            let occupied = occupation_state(dot, 1, n_other);
            let flow = rates.rate(dot, n_other, lead, Direction::In) * p.prob(empty)
                - rates.rate(dot, n_other, lead, Direction::Out) * p.prob(occupied);
            total += weight(dot, n_other) * flow;
        }
    }
    total
}

fn occupation_state(dot: Dot, n_self: u8, n_other: u8) -> SystemState {
    let (n_top, n_bottom) = match dot {
        Dot::Top => (n_self, n_other),
        Dot::Bottom => (n_other, n_self),
    };
    SystemState::new(n_top, n_bottom).expect("occupations are 0/1")
}

/// Heat current in the per-lead reporting conventions: at the left lead the
/// heat extracted from the reservoir (positive into the system), at the
/// right lead the heat deposited into the reservoir (positive out of the
/// system).
pub fn heat_current(lead: Lead, rates: &RateTable, p: &ProbabilityVector) -> f64 {
    match lead {
        Lead::Left => reservoir_heat_outflow(Lead::Left, rates, p),
        Lead::Right => -reservoir_heat_outflow(Lead::Right, rates, p),
    }
}

/// Entropy current J_S = Q_R_in/T_R - Q_L_out/T_L and its split into the
/// part carried by the energy current through the thermal gradient (J_S^r)
/// and the part driven by the particle current (J_S^f). The decomposition
/// J_S = J_S^r + J_S^f is an algebraic identity.
pub fn entropy_currents(
    q_left_out: f64,
    q_right_in: f64,
    left: &BathSpec,
    right: &BathSpec,
) -> (f64, f64, f64) {
    let t_l = left.temperature;
    let t_r = right.temperature;
    let total = q_right_in / t_r - q_left_out / t_l;
    let inverse_part = q_right_in * (1.0 / t_r - 1.0 / t_l);
    let forward_part = (q_right_in - q_left_out) / t_l;
    (total, inverse_part, forward_part)
}

/// Full steady-state transport summary at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportReport {
    /// Net particle current from the left lead into the system.
    pub n_left: f64,
    /// Net particle current from the right lead into the system.
    pub n_right: f64,
    /// Heat extracted from the left reservoir.
    pub q_left_out: f64,
    /// Heat deposited into the right reservoir.
    pub q_right_in: f64,
    /// Energy current into the system at the left lead.
    pub e_left: f64,
    /// Energy current into the system at the right lead.
    pub e_right: f64,
    /// Reported particle current J_rho = N_L (q = 1).
    pub j_rho: f64,
    /// Reported energy current J_u = Q_R_in.
    pub j_u: f64,
    /// Entropy current of the reservoirs.
    pub j_s: f64,
    /// Entropy contribution of the (possibly inverse) energy current.
    pub j_s_inverse: f64,
    /// Entropy contribution of the forward particle current.
    pub j_s_forward: f64,
    pub residual_charge: f64,
    pub residual_energy: f64,
    pub residual_first_law: f64,
}

impl TransportReport {
    /// Assemble every observable from the rates, the stationary state and
    /// the two baths.
    pub fn compute(
        rates: &RateTable,
        p: &ProbabilityVector,
        left: &BathSpec,
        right: &BathSpec,
    ) -> TransportReport {
        let n_left = particle_current(Lead::Left, rates, p);
        let n_right = particle_current(Lead::Right, rates, p);
        let q_left_out = reservoir_heat_outflow(Lead::Left, rates, p);
        let q_right_in = -reservoir_heat_outflow(Lead::Right, rates, p);
        let e_left = q_left_out + left.chemical_potential * n_left;
        let e_right = -q_right_in + right.chemical_potential * n_right;
        let delta_v = left.chemical_potential - right.chemical_potential;
        let (j_s, j_s_inverse, j_s_forward) =
            entropy_currents(q_left_out, q_right_in, left, right);
        TransportReport {
            n_left,
            n_right,
            q_left_out,
            q_right_in,
            e_left,
            e_right,
            j_rho: n_left,
            j_u: q_right_in,
            j_s,
            j_s_inverse,
            j_s_forward,
            residual_charge: n_left + n_right,
            residual_energy: e_left + e_right,
            residual_first_law: (q_right_in - q_left_out) - n_left * delta_v,
        }
    }

    /// First violated conservation/consistency bound, if any. These are the
    /// per-point checks the sweep re-asserts everywhere.
    pub fn check_invariants(&self) -> Option<(&'static str, String)> {
        if self.residual_charge.abs() > 1e-12 {
            return Some(("charge conservation", format!("N_L + N_R = {}", self.residual_charge)));
        }
        if self.residual_energy.abs() > 1e-10 {
            return Some(("energy conservation", format!("E_L + E_R = {}", self.residual_energy)));
        }
        if self.residual_first_law.abs() > 1e-10 {
            return Some((
                "first law",
                format!("(Q_R_in - Q_L_out) - J_rho*dV = {}", self.residual_first_law),
            ));
        }
        if self.j_s < -1e-12 {
            return Some(("second law", format!("J_S = {}", self.j_s)));
        }
        let decomposition = self.j_s - (self.j_s_inverse + self.j_s_forward);
        if decomposition.abs() > 1e-14 {
            return Some((
                "entropy decomposition",
                format!("J_S - (J_S_r + J_S_f) = {decomposition}"),
            ));
        }
        None
    }
}

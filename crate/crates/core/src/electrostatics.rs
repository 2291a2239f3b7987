//! Charging energies of the coupled-dot system from its capacitance network.
//!
//! Three interchangeable parametrizations are supported:
//!
//! * `Capacitive` — the full network of dot-lead capacitances plus the
//!   inter-dot capacitance; charging energies come out of the electrostatic
//!   energy differences.
//! * `Symmetric` — all four dot-lead capacitances equal, reduced to the
//!   two knobs (kappa = q^2/C_alpha, U). The lead-referenced offsets have the
//!   closed form kappa/4 - U/2 -+ dV/2. For U < kappa/4 this is exactly the
//!   symmetric network; for larger U it is the smooth algebraic continuation
//!   (no physical capacitance realizes it, but the rate model stays
//!   perfectly well defined).
//! * `Direct` — charging energies given explicitly.

use crate::device::{Dot, Lead};
use crate::error::{Error, Result};

/// Dot-lead capacitances and the inter-dot capacitance, in units of
/// q^2 / (hbar*gamma).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitanceNetwork {
    /// c_dot_lead[dot][lead]
    dot_lead: [[f64; 2]; 2],
    /// Inter-dot capacitance C.
    mutual: f64,
}

impl CapacitanceNetwork {
    pub fn new(
        c_top_left: f64,
        c_top_right: f64,
        c_bottom_left: f64,
        c_bottom_right: f64,
        c_mutual: f64,
    ) -> Result<Self> {
        let named = [
            ("C_tL", c_top_left),
            ("C_tR", c_top_right),
            ("C_bL", c_bottom_left),
            ("C_bR", c_bottom_right),
            ("C", c_mutual),
        ];
        for (name, value) in named {
            if !(value > 0.0) {
                return Err(Error::NonPositiveCapacitance { name, value });
            }
        }
        let net = CapacitanceNetwork {
            dot_lead: [[c_top_left, c_top_right], [c_bottom_left, c_bottom_right]],
            mutual: c_mutual,
        };
        let det = net.determinant();
        if !(det > 0.0) {
            return Err(Error::SingularCapacitanceMatrix { det });
        }
        Ok(net)
    }

    /// All four dot-lead capacitances equal to `c_alpha`.
    pub fn symmetric(c_alpha: f64, c_mutual: f64) -> Result<Self> {
        Self::new(c_alpha, c_alpha, c_alpha, c_alpha, c_mutual)
    }

    pub fn capacitance(&self, dot: Dot, lead: Lead) -> f64 {
        self.dot_lead[dot.idx()][lead.idx()]
    }

    pub fn mutual(&self) -> f64 {
        self.mutual
    }

    /// Total capacitance C_sum_alpha = C_alpha^L + C_alpha^R + C.
    pub fn total(&self, dot: Dot) -> f64 {
        self.dot_lead[dot.idx()][0] + self.dot_lead[dot.idx()][1] + self.mutual
    }

    /// C_sum_t * C_sum_b - C^2.
    pub fn determinant(&self) -> f64 {
        self.total(Dot::Top) * self.total(Dot::Bottom) - self.mutual * self.mutual
    }
}

/// Selectable charging-energy parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChargingModel {
    Capacitive {
        network: CapacitanceNetwork,
    },
    Symmetric {
        /// kappa = q^2 / C_alpha.
        kappa: f64,
        /// Inter-dot coupling energy U, treated as an independent knob.
        coupling: f64,
    },
    Direct {
        coupling: f64,
        u_top0: f64,
        u_bottom0: f64,
    },
}

impl ChargingModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChargingModel::Capacitive { network } => {
                // Re-run the network checks in case the value was built by hand.
                CapacitanceNetwork::new(
                    network.dot_lead[0][0],
                    network.dot_lead[0][1],
                    network.dot_lead[1][0],
                    network.dot_lead[1][1],
                    network.mutual,
                )?;
                Ok(())
            }
            ChargingModel::Symmetric { kappa, coupling } => {
                if !(kappa > 0.0) {
                    return Err(Error::InvalidChargingModel(format!(
                        "kappa must be positive, got {kappa}"
                    )));
                }
                if !(coupling >= 0.0) {
                    return Err(Error::InvalidChargingModel(format!(
                        "coupling must be non-negative, got {coupling}"
                    )));
                }
                Ok(())
            }
            ChargingModel::Direct { coupling, .. } => {
                if !(coupling >= 0.0) {
                    return Err(Error::InvalidChargingModel(format!(
                        "coupling must be non-negative, got {coupling}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// The same model with the inter-dot coupling replaced, used by U-sweeps.
    ///
    /// The capacitive model has no single coupling knob (U is a derived
    /// quantity of the whole network), so it cannot be swept this way.
    pub fn with_coupling(&self, coupling: f64) -> Result<ChargingModel> {
        let model = match *self {
            ChargingModel::Capacitive { .. } => {
                return Err(Error::InvalidChargingModel(
                    "cannot sweep the coupling of a capacitive model; use symmetric or direct"
                        .into(),
                ))
            }
            ChargingModel::Symmetric { kappa, .. } => {
                ChargingModel::Symmetric { kappa, coupling }
            }
            ChargingModel::Direct { u_top0, u_bottom0, .. } => {
                ChargingModel::Direct { coupling, u_top0, u_bottom0 }
            }
        };
        model.validate()?;
        Ok(model)
    }

    /// The symmetric capacitance network realizing a Symmetric model,
    /// which exists exactly for 0 < U < kappa/4.
    pub fn equivalent_network(kappa: f64, coupling: f64) -> Result<CapacitanceNetwork> {
        if !(coupling > 0.0 && coupling < kappa / 4.0) {
            return Err(Error::InvalidChargingModel(format!(
                "no symmetric network realizes coupling {coupling} with kappa {kappa}; feasible range is (0, kappa/4)"
            )));
        }
        let c_alpha = 1.0 / kappa;
        // Invert U = C / (4 C_alpha (C_alpha + C)) for C.
        let c_mutual = 4.0 * coupling * c_alpha * c_alpha / (1.0 - 4.0 * coupling * c_alpha);
        CapacitanceNetwork::symmetric(c_alpha, c_mutual)
    }
}

/// Charging energies: the inter-dot coupling U and the single-occupation
/// energies U_t0, U_b0. The occupied-neighbour values satisfy
/// U_alpha1 = U_alpha0 + U exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargingEnergies {
    pub coupling: f64,
    pub u_top0: f64,
    pub u_bottom0: f64,
}

impl ChargingEnergies {
    pub fn u0(&self, dot: Dot) -> f64 {
        match dot {
            Dot::Top => self.u_top0,
            Dot::Bottom => self.u_bottom0,
        }
    }

    /// Charging energy of `dot` when the other dot holds `n_other` electrons.
    pub fn u(&self, dot: Dot, n_other: u8) -> f64 {
        self.u0(dot) + f64::from(n_other) * self.coupling
    }

    pub fn u_top1(&self) -> f64 {
        self.u_top0 + self.coupling
    }

    pub fn u_bottom1(&self) -> f64 {
        self.u_bottom0 + self.coupling
    }
}

/// Lead-referenced offsets U_alpha^nu = U_alpha0 - mu_nu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadOffsets {
    values: [[f64; 2]; 2],
}

impl LeadOffsets {
    pub fn get(&self, dot: Dot, lead: Lead) -> f64 {
        self.values[dot.idx()][lead.idx()]
    }
}

/// Solve the two-by-two electrostatic system for the dot potentials given
/// the dot charges and lead voltages. Substituting the result back into the
/// charge equations reproduces the inputs to machine precision.
pub fn solve_potentials(
    net: &CapacitanceNetwork,
    q_top: f64,
    q_bottom: f64,
    v_left: f64,
    v_right: f64,
) -> Result<(f64, f64)> {
    let det = net.determinant();
    if !(det > 0.0) {
        return Err(Error::SingularCapacitanceMatrix { det });
    }
    let (r_top, r_bottom) = charge_vector(net, q_top, q_bottom, v_left, v_right);
    let c = net.mutual;
    let phi_top = (net.total(Dot::Bottom) * r_top + c * r_bottom) / det;
    let phi_bottom = (c * r_top + net.total(Dot::Top) * r_bottom) / det;
    Ok((phi_top, phi_bottom))
}

fn charge_vector(
    net: &CapacitanceNetwork,
    q_top: f64,
    q_bottom: f64,
    v_left: f64,
    v_right: f64,
) -> (f64, f64) {
    (
        q_top + net.capacitance(Dot::Top, Lead::Left) * v_left
            + net.capacitance(Dot::Top, Lead::Right) * v_right,
        q_bottom + net.capacitance(Dot::Bottom, Lead::Left) * v_left
            + net.capacitance(Dot::Bottom, Lead::Right) * v_right,
    )
}

/// Electrostatic energy of the occupation state (n_t, n_b) at the given lead
/// voltages (Q_alpha = n_alpha * q with q = 1).
pub fn electrostatic_energy(
    net: &CapacitanceNetwork,
    n_top: u8,
    n_bottom: u8,
    v_left: f64,
    v_right: f64,
) -> Result<f64> {
    if n_top > 1 {
        return Err(Error::InvalidOccupation(n_top));
    }
    if n_bottom > 1 {
        return Err(Error::InvalidOccupation(n_bottom));
    }
    let q_top = f64::from(n_top);
    let q_bottom = f64::from(n_bottom);
    let (phi_top, phi_bottom) = solve_potentials(net, q_top, q_bottom, v_left, v_right)?;
    let (r_top, r_bottom) = charge_vector(net, q_top, q_bottom, v_left, v_right);
    Ok(0.5 * (r_top * phi_top + r_bottom * phi_bottom))
}

/// Inter-dot coupling energy U = q^2 C / (C_sum_t C_sum_b - C^2).
pub fn coupling_from_network(net: &CapacitanceNetwork) -> f64 {
    net.mutual / net.determinant()
}

/// Charging energies for the given model at voltage bias `delta_v`
/// (symmetric split: V_L = +dV/2, V_R = -dV/2).
pub fn charging_energies(model: &ChargingModel, delta_v: f64) -> Result<ChargingEnergies> {
    model.validate()?;
    match *model {
        ChargingModel::Capacitive { network } => {
            let v_left = delta_v / 2.0;
            let v_right = -delta_v / 2.0;
            let e00 = electrostatic_energy(&network, 0, 0, v_left, v_right)?;
            let e10 = electrostatic_energy(&network, 1, 0, v_left, v_right)?;
            let e01 = electrostatic_energy(&network, 0, 1, v_left, v_right)?;
            Ok(ChargingEnergies {
                coupling: coupling_from_network(&network),
                u_top0: e10 - e00,
                u_bottom0: e01 - e00,
            })
        }
        ChargingModel::Symmetric { kappa, coupling } => Ok(ChargingEnergies {
            coupling,
            u_top0: kappa / 4.0 - coupling / 2.0,
            u_bottom0: kappa / 4.0 - coupling / 2.0,
        }),
        ChargingModel::Direct { coupling, u_top0, u_bottom0 } => Ok(ChargingEnergies {
            coupling,
            u_top0,
            u_bottom0,
        }),
    }
}

/// Lead-referenced offsets U_alpha^nu = U_alpha0 - mu_nu at voltage bias
/// `delta_v`, with mu_L = +dV/2 and mu_R = -dV/2.
pub fn lead_offsets(model: &ChargingModel, delta_v: f64) -> Result<LeadOffsets> {
    let energies = charging_energies(model, delta_v)?;
    let mu = [delta_v / 2.0, -delta_v / 2.0];
    let mut values = [[0.0; 2]; 2];
    for dot in Dot::ALL {
        for lead in Lead::ALL {
            values[dot.idx()][lead.idx()] = energies.u0(dot) - mu[lead.idx()];
        }
    }
    Ok(LeadOffsets { values })
}

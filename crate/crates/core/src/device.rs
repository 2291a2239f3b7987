//! Physical configuration types: dots, leads, occupation states, baths and
//! operating points.
//!
//! Natural units throughout: energies in units of the bare tunnel rate
//! (hbar*gamma = 1), k_B = 1, q = 1. A quantity quoted as "7.5 hbar*gamma"
//! enters as the plain number 7.5.

use crate::error::{Error, Result};
use crate::electrostatics::ChargingModel;

/// The two quantum dots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dot {
    Top,
    Bottom,
}

impl Dot {
    pub const ALL: [Dot; 2] = [Dot::Top, Dot::Bottom];

    /// The companion dot.
    pub fn other(self) -> Dot {
        match self {
            Dot::Top => Dot::Bottom,
            Dot::Bottom => Dot::Top,
        }
    }

    pub(crate) fn idx(self) -> usize {
        match self {
            Dot::Top => 0,
            Dot::Bottom => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Dot::Top => "t",
            Dot::Bottom => "b",
        }
    }
}

/// The two particle reservoirs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lead {
    Left,
    Right,
}

impl Lead {
    pub const ALL: [Lead; 2] = [Lead::Left, Lead::Right];

    pub(crate) fn idx(self) -> usize {
        match self {
            Lead::Left => 0,
            Lead::Right => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Lead::Left => "L",
            Lead::Right => "R",
        }
    }
}

/// Joint occupation (n_t, n_b) of the two dots.
///
/// The index map is fixed so probability vectors read
/// (p00, p10, p01, p11): 0 <-> (0,0), 1 <-> (1,0), 2 <-> (0,1), 3 <-> (1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemState {
    n_top: u8,
    n_bottom: u8,
}

/// All four states in index order.
pub const STATES: [SystemState; 4] = [
    SystemState { n_top: 0, n_bottom: 0 },
    SystemState { n_top: 1, n_bottom: 0 },
    SystemState { n_top: 0, n_bottom: 1 },
    SystemState { n_top: 1, n_bottom: 1 },
];

impl SystemState {
    pub fn new(n_top: u8, n_bottom: u8) -> Result<Self> {
        if n_top > 1 {
            return Err(Error::InvalidOccupation(n_top));
        }
        if n_bottom > 1 {
            return Err(Error::InvalidOccupation(n_bottom));
        }
        Ok(SystemState { n_top, n_bottom })
    }

    /// Position of this state in the fixed (p00, p10, p01, p11) ordering.
    pub fn index(self) -> usize {
        self.n_top as usize + 2 * self.n_bottom as usize
    }

    /// Inverse of [`SystemState::index`].
    pub fn from_index(index: usize) -> Result<Self> {
        if index > 3 {
            return Err(Error::InvalidStateIndex(index));
        }
        Ok(STATES[index])
    }

    /// Occupation of the given dot.
    pub fn occupation(self, dot: Dot) -> u8 {
        match dot {
            Dot::Top => self.n_top,
            Dot::Bottom => self.n_bottom,
        }
    }

    /// Total electron number n_t + n_b.
    pub fn total_occupation(self) -> u8 {
        self.n_top + self.n_bottom
    }

    /// The state with the given dot's occupation flipped.
    pub fn flipped(self, dot: Dot) -> SystemState {
        match dot {
            Dot::Top => SystemState { n_top: 1 - self.n_top, ..self },
            Dot::Bottom => SystemState { n_bottom: 1 - self.n_bottom, ..self },
        }
    }
}

/// A thermal/chemical reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    /// Temperature (k_B = 1), strictly positive.
    pub temperature: f64,
    /// Chemical potential.
    pub chemical_potential: f64,
}

impl BathSpec {
    pub fn new(temperature: f64, chemical_potential: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::InvalidBathTemperature(temperature));
        }
        Ok(BathSpec { temperature, chemical_potential })
    }
}

/// Mean temperature, temperature gradient and voltage bias.
///
/// The two baths derive from this: T_L = T + dT/2, T_R = T - dT/2, and the
/// chemical potentials split symmetrically, mu_L = +dV/2, mu_R = -dV/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub t_mean: f64,
    pub delta_t: f64,
    pub delta_v: f64,
}

impl OperatingPoint {
    pub fn new(t_mean: f64, delta_t: f64, delta_v: f64) -> Result<Self> {
        let op = OperatingPoint { t_mean, delta_t, delta_v };
        op.validate()?;
        Ok(op)
    }

    pub fn validate(&self) -> Result<()> {
        let t_min = self.t_mean - self.delta_t.abs() / 2.0;
        if !(t_min > 0.0) {
            return Err(Error::NonPositiveTemperature {
                t_mean: self.t_mean,
                delta_t: self.delta_t,
                t_min,
            });
        }
        Ok(())
    }

    /// The (left, right) baths implied by this operating point.
    pub fn baths(&self) -> Result<(BathSpec, BathSpec)> {
        self.validate()?;
        let left = BathSpec {
            temperature: self.t_mean + self.delta_t / 2.0,
            chemical_potential: self.delta_v / 2.0,
        };
        let right = BathSpec {
            temperature: self.t_mean - self.delta_t / 2.0,
            chemical_potential: -self.delta_v / 2.0,
        };
        Ok((left, right))
    }
}

/// Split a level difference symmetrically around the zero reference:
/// eps_t = +delta_eps/2, eps_b = -delta_eps/2.
pub fn level_energies(delta_eps: f64) -> (f64, f64) {
    (delta_eps / 2.0, -delta_eps / 2.0)
}

/// Bare tunnel rates gamma\[dot\]\[n\]\[lead\], where n is the occupation of
/// the *other* dot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaTable {
    rates: [[[f64; 2]; 2]; 2],
}

impl GammaTable {
    /// All eight channels set to the same rate.
    pub fn uniform(gamma: f64) -> Result<Self> {
        Self::from_fn(|_, _, _| gamma)
    }

    /// Lead-symmetric table: the rate for (dot, n) is the same at both leads.
    pub fn lead_symmetric(f: impl Fn(Dot, u8) -> f64) -> Result<Self> {
        Self::from_fn(|dot, n, _| f(dot, n))
    }

    pub fn from_fn(f: impl Fn(Dot, u8, Lead) -> f64) -> Result<Self> {
        let mut rates = [[[0.0; 2]; 2]; 2];
        for dot in Dot::ALL {
            for n in 0..2u8 {
                for lead in Lead::ALL {
                    let value = f(dot, n, lead);
                    if !(value >= 0.0) {
                        return Err(Error::NegativeTunnelRate {
                            value,
                            channel: format!("gamma_{}{}^{}", dot.label(), n, lead.label()),
                        });
                    }
                    rates[dot.idx()][n as usize][lead.idx()] = value;
                }
            }
        }
        Ok(GammaTable { rates })
    }

    /// Bare rate for electron exchange on `dot` through `lead` while the
    /// other dot holds `n_other` electrons.
    pub fn rate(&self, dot: Dot, n_other: u8, lead: Lead) -> f64 {
        self.rates[dot.idx()][n_other as usize][lead.idx()]
    }

    /// True when every (dot, n) channel couples equally to both leads.
    pub fn is_lead_symmetric(&self) -> bool {
        Dot::ALL.iter().all(|&dot| {
            (0..2u8).all(|n| self.rate(dot, n, Lead::Left) == self.rate(dot, n, Lead::Right))
        })
    }

    /// Sum of the bare rates over both leads for the (dot, n) channel.
    pub fn channel_sum(&self, dot: Dot, n_other: u8) -> f64 {
        self.rate(dot, n_other, Lead::Left) + self.rate(dot, n_other, Lead::Right)
    }
}

/// Full physical system definition: level energies, bare tunnel couplings
/// and the charging model.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceSpec {
    pub eps_top: f64,
    pub eps_bottom: f64,
    pub gamma: GammaTable,
    pub charging: ChargingModel,
}

impl DeviceSpec {
    pub fn new(eps_top: f64, eps_bottom: f64, gamma: GammaTable, charging: ChargingModel) -> Result<Self> {
        charging.validate()?;
        Ok(DeviceSpec { eps_top, eps_bottom, gamma, charging })
    }

    /// Level energy of the given dot.
    pub fn level(&self, dot: Dot) -> f64 {
        match dot {
            Dot::Top => self.eps_top,
            Dot::Bottom => self.eps_bottom,
        }
    }
}

//! Fermi functions, tunneling rates and the master-equation generator.

use crate::device::{BathSpec, DeviceSpec, Dot, Lead, STATES};
use crate::electrostatics::{ChargingEnergies, LeadOffsets};

/// Rates below this are clamped to zero to avoid denormal slowdowns.
pub const RATE_CLAMP: f64 = 1e-300;

/// Tunneling direction relative to the dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Electron enters the dot (+).
    In,
    /// Electron leaves the dot (-).
    Out,
}

impl Direction {
    fn idx(self) -> usize {
        match self {
            Direction::In => 0,
            Direction::Out => 1,
        }
    }
}

/// Occupation probability of a reservoir level at energy `x`:
/// f^+ = 1 / (1 + exp((x - mu)/T)).
///
/// Evaluated through exp of a non-positive argument only, so it never
/// overflows; far in the tail it underflows cleanly to 0 or rounds to 1.
pub fn fermi_plus(x: f64, bath: &BathSpec) -> f64 {
    stable_logistic(-(x - bath.chemical_potential) / bath.temperature)
}

/// Hole occupation f^- = 1 - f^+, computed in the same stable form rather
/// than by subtraction so the deep tail keeps full relative precision.
pub fn fermi_minus(x: f64, bath: &BathSpec) -> f64 {
    stable_logistic((x - bath.chemical_potential) / bath.temperature)
}

/// 1 / (1 + e^{-z}) without overflow for any finite z.
fn stable_logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Directed tunneling rates Gamma[dot][n_other][lead][direction].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTable {
    rates: [[[[f64; 2]; 2]; 2]; 2],
    /// mu-referenced Fermi argument per (dot, n_other, lead), kept for the
    /// energy bookkeeping of the observables.
    arguments: [[[f64; 2]; 2]; 2],
}

impl RateTable {
    pub fn rate(&self, dot: Dot, n_other: u8, lead: Lead, direction: Direction) -> f64 {
        self.rates[dot.idx()][n_other as usize][lead.idx()][direction.idx()]
    }

    /// The energy argument (eps_alpha + U_alpha0 - mu_nu + n*U) the channel's
    /// Fermi factor was evaluated at.
    pub fn argument(&self, dot: Dot, n_other: u8, lead: Lead) -> f64 {
        self.arguments[dot.idx()][n_other as usize][lead.idx()]
    }

    /// Negate one directed rate in place. Fault-injection hook for the
    /// validation suite; never used on a real evaluation path.
    pub(crate) fn corrupt_rate_sign(&mut self, dot: Dot, n_other: u8, lead: Lead) {
        let cell = &mut self.rates[dot.idx()][n_other as usize][lead.idx()];
        cell[Direction::In.idx()] = -cell[Direction::In.idx()];
    }

    #[cfg(test)]
    pub(crate) fn from_raw(rates: [[[[f64; 2]; 2]; 2]; 2]) -> Self {
        RateTable { rates, arguments: [[[0.0; 2]; 2]; 2] }
    }
}

/// Evaluate all sixteen directed rates
/// Gamma_alpha_n^(nu,+-) = gamma_alpha_n^nu * f_nu^(+-)(eps_alpha + U_alpha_n).
///
/// The Fermi argument is formed as level + offset (+ n*U) with the offsets
/// already mu-referenced, so absolute chemical potentials never appear.
pub fn rate_table(
    device: &DeviceSpec,
    baths: (&BathSpec, &BathSpec),
    offsets: &LeadOffsets,
    charging: &ChargingEnergies,
) -> RateTable {
    let mut rates = [[[[0.0; 2]; 2]; 2]; 2];
    let mut arguments = [[[0.0; 2]; 2]; 2];
    for dot in Dot::ALL {
        for n_other in 0..2u8 {
            for lead in Lead::ALL {
                let bath = match lead {
                    Lead::Left => baths.0,
                    Lead::Right => baths.1,
                };
                let argument = device.level(dot)
                    + offsets.get(dot, lead)
                    + f64::from(n_other) * charging.coupling;
                let gamma = device.gamma.rate(dot, n_other, lead);
                // The offsets already carry -mu, so evaluate against a
                // zero-chemical-potential bath at the same temperature.
                let reduced = BathSpec { temperature: bath.temperature, chemical_potential: 0.0 };
                let f_in = fermi_plus(argument, &reduced);
                let f_out = fermi_minus(argument, &reduced);
                let cell = &mut rates[dot.idx()][n_other as usize][lead.idx()];
                cell[Direction::In.idx()] = clamp_rate(gamma * f_in);
                cell[Direction::Out.idx()] = clamp_rate(gamma * f_out);
                arguments[dot.idx()][n_other as usize][lead.idx()] = argument;
            }
        }
    }
    RateTable { rates, arguments }
}

fn clamp_rate(rate: f64) -> f64 {
    if rate < RATE_CLAMP {
        0.0
    } else {
        rate
    }
}

/// The 4x4 transition-rate matrix together with the rate table it was built
/// from. Column-stochastic: every column sums to zero, off-diagonals are
/// non-negative, and the two no-direct-transition entries (0,0) <-> (1,1)
/// stay exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    matrix: [[f64; 4]; 4],
    rates: RateTable,
}

impl Generator {
    /// Entry M[row][col]: gain of state `row` from state `col`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row][col]
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.matrix
    }

    pub fn rates(&self) -> &RateTable {
        &self.rates
    }

    /// Largest |M_ii|, the stiffness scale of the generator.
    pub fn max_diagonal(&self) -> f64 {
        (0..4).map(|i| self.matrix[i][i].abs()).fold(0.0, f64::max)
    }

    /// Infinity norm of the matrix.
    pub fn norm_inf(&self) -> f64 {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Action y = M p.
    pub fn apply(&self, p: &[f64; 4]) -> [f64; 4] {
        let mut y = [0.0; 4];
        for (row, y_row) in y.iter_mut().enumerate() {
            *y_row = (0..4).map(|col| self.matrix[row][col] * p[col]).sum();
        }
        y
    }

    /// True if every state is reachable from every other along channels with
    /// a positive rate in at least one direction.
    pub fn is_irreducible(&self) -> bool {
        self.unreachable_from(0).is_empty()
    }

    /// States not reachable from `start` treating positive entries as
    /// undirected edges.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn unreachable_from(&self, start: usize) -> Vec<usize> {
        let mut seen = [false; 4];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(s) = stack.pop() {
            for t in 0..4 {
                if !seen[t] && (self.matrix[t][s] > 0.0 || self.matrix[s][t] > 0.0) {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..4).filter(|&s| !seen[s]).collect()
    }

    /// Human-readable diagnosis of why the state graph is disconnected.
    pub(crate) fn diagnose_reducibility(&self) -> String {
        for dot in Dot::ALL {
            let total: f64 = (0..2u8)
                .flat_map(|n| {
                    Lead::ALL.into_iter().flat_map(move |lead| {
                        [Direction::In, Direction::Out]
                            .into_iter()
                            .map(move |d| self.rates.rate(dot, n, lead, d))
                    })
                })
                .sum();
            if total == 0.0 {
                return format!("all tunneling rates for dot {} vanish", dot.label());
            }
        }
        let unreachable = self.unreachable_from(0);
        if unreachable.is_empty() {
            "generator numerically singular".to_string()
        } else {
            let labels: Vec<String> = unreachable
                .iter()
                .map(|&i| {
                    let s = STATES[i];
                    format!("|{},{}>", s.occupation(Dot::Top), s.occupation(Dot::Bottom))
                })
                .collect();
            format!("states {} are disconnected from |0,0>", labels.join(", "))
        }
    }
}

/// Assemble the generator from a rate table.
///
/// For each state and each dot, the flip of that dot's occupation is a
/// transition whose rate sums the per-lead directed rates at the other
/// dot's current occupation; the diagonal collects the negative column sum.
pub fn build_generator(rates: &RateTable) -> Generator {
    let mut matrix = [[0.0f64; 4]; 4];
    for state in STATES {
        let col = state.index();
        for dot in Dot::ALL {
            let target = state.flipped(dot).index();
            let n_other = state.occupation(dot.other());
            let direction = if state.occupation(dot) == 0 {
                Direction::In
            } else {
                Direction::Out
            };
            let rate: f64 = Lead::ALL
                .into_iter()
                .map(|lead| rates.rate(dot, n_other, lead, direction))
                .sum();
            matrix[target][col] += rate;
            matrix[col][col] -= rate;
        }
    }
    Generator { matrix, rates: *rates }
}

/// Probability of the reservoir state with occupation `n` for the channel
/// argument `x` at inverse-temperature scale of `bath`: convenience used by
/// tests and the equilibrium construction.
pub fn channel_fermi(x: f64, bath: &BathSpec, direction: Direction) -> f64 {
    match direction {
        Direction::In => fermi_plus(x, bath),
        Direction::Out => fermi_minus(x, bath),
    }
}

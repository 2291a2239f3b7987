//! Stationary solution of M p = 0, the time-evolution oracle, and the
//! closed-form equilibrium distribution.

use crate::device::{BathSpec, SystemState, STATES};
use crate::electrostatics::ChargingEnergies;
use crate::error::{Error, Result};
use crate::kinetics::Generator;

/// Clamp for tiny negative components produced by round-off; anything more
/// negative signals a solver bug and is a hard error.
const NEGATIVE_CLAMP: f64 = 1e-13;

/// Pivot threshold below which the replaced-row system is treated as
/// singular (reducible generator).
const PIVOT_TOLERANCE: f64 = 1e-13;

/// Stationary occupation probabilities (p00, p10, p01, p11).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityVector {
    p: [f64; 4],
}

impl ProbabilityVector {
    /// Validate an externally supplied vector: components in [0, 1] and
    /// unit sum to within 1e-12.
    pub fn new(p: [f64; 4]) -> Result<Self> {
        for (i, &x) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidProbability(format!(
                    "component {i} is {x}, outside [0, 1]"
                )));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!("sum is {sum}, not 1")));
        }
        Ok(ProbabilityVector { p })
    }

    /// Concentrated on a single state.
    pub fn delta(state: SystemState) -> Self {
        let mut p = [0.0; 4];
        p[state.index()] = 1.0;
        ProbabilityVector { p }
    }

    /// Accept solver output: clamp round-off negatives (>= -1e-13) to zero
    /// and renormalize; reject anything more negative.
    fn from_solver(mut p: [f64; 4]) -> Result<Self> {
        Self::clamp_negatives(&mut p)?;
        let sum: f64 = p.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidProbability(format!("degenerate sum {sum}")));
        }
        for x in &mut p {
            *x /= sum;
        }
        Ok(ProbabilityVector { p })
    }

    /// Accept integrator output: clamp round-off negatives but keep the sum
    /// untouched (the integrator conserves it; renormalizing here would hide
    /// drift and perturb exact fixed points).
    fn from_evolution(mut p: [f64; 4]) -> Result<Self> {
        Self::clamp_negatives(&mut p)?;
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbability(format!(
                "integration drifted the total probability to {sum}"
            )));
        }
        Ok(ProbabilityVector { p })
    }

    fn clamp_negatives(p: &mut [f64; 4]) -> Result<()> {
        for (i, x) in p.iter_mut().enumerate() {
            if *x < 0.0 {
                if *x < -NEGATIVE_CLAMP {
                    return Err(Error::NegativeProbability { value: *x, index: i });
                }
                *x = 0.0;
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> &[f64; 4] {
        &self.p
    }

    /// Probability of the given occupation state.
    pub fn prob(&self, state: SystemState) -> f64 {
        self.p[state.index()]
    }

    pub fn p00(&self) -> f64 {
        self.p[0]
    }

    pub fn p10(&self) -> f64 {
        self.p[1]
    }

    pub fn p01(&self) -> f64 {
        self.p[2]
    }

    pub fn p11(&self) -> f64 {
        self.p[3]
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &ProbabilityVector) -> f64 {
        self.p
            .iter()
            .zip(other.p.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Solve M p = 0 with the normalization sum(p) = 1.
///
/// Row 0 of the generator is replaced by the all-ones row (any single row of
/// an irreducible generator is redundant) and the 4x4 system is solved by
/// Gaussian elimination with partial pivoting. A pivot below 1e-13 means the
/// state graph is disconnected and is reported as such.
#[allow(clippy::needless_range_loop)]
pub fn solve_stationary(gen: &Generator) -> Result<ProbabilityVector> {
    let mut a = *gen.matrix();
    a[0] = [1.0; 4];
    let mut b = [1.0, 0.0, 0.0, 0.0];

    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot_row][col].abs() < PIVOT_TOLERANCE {
            return Err(Error::ReducibleGenerator(gen.diagnose_reducibility()));
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..4 {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..4 {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut p = [0.0; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for col in row + 1..4 {
            acc -= a[row][col] * p[col];
        }
        p[row] = acc / a[row][row];
    }
    ProbabilityVector::from_solver(p)
}

/// Residual ||M p||_inf relative to ||M||_inf, for verifying a solution.
pub fn stationary_residual(gen: &Generator, p: &ProbabilityVector) -> f64 {
    let norm = gen.norm_inf();
    if norm == 0.0 {
        return 0.0;
    }
    let y = gen.apply(p.as_array());
    y.iter().map(|x| x.abs()).fold(0.0, f64::max) / norm
}

/// Integrate dp/dt = M p with the classical fourth-order Runge-Kutta scheme
/// at a fixed step. This is the brute-force oracle for `solve_stationary`:
/// deterministic, no adaptivity.
///
/// The step must satisfy dt * max|M_ii| < 0.1.
pub fn evolve(
    gen: &Generator,
    p0: &ProbabilityVector,
    t_final: f64,
    dt: f64,
) -> Result<ProbabilityVector> {
    let product = dt * gen.max_diagonal();
    if !(product < 0.1) || !(dt > 0.0) {
        return Err(Error::StepTooLarge { dt, product });
    }
    if t_final <= 0.0 {
        return Ok(*p0);
    }
    let steps = (t_final / dt).ceil() as u64;
    let h = t_final / steps as f64;
    let mut p = *p0.as_array();
    for _ in 0..steps {
        let k1 = gen.apply(&p);
        let k2 = gen.apply(&combine(&p, &k1, h / 2.0));
        let k3 = gen.apply(&combine(&p, &k2, h / 2.0));
        let k4 = gen.apply(&combine(&p, &k3, h));
        for i in 0..4 {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    ProbabilityVector::from_evolution(p)
}

fn combine(p: &[f64; 4], k: &[f64; 4], factor: f64) -> [f64; 4] {
    [
        p[0] + factor * k[0],
        p[1] + factor * k[1],
        p[2] + factor * k[2],
        p[3] + factor * k[3],
    ]
}

/// Grand-canonical equilibrium of the four-state system at a common bath:
/// p(n_t, n_b) proportional to exp(-(E - mu N)/T) with
/// E = n_t eps_t + n_b eps_b + n_t U_t0 + n_b U_b0 + n_t n_b U.
///
/// Requires both baths to be identical; at zero applied forces this equals
/// the stationary state exactly (detailed balance).
pub fn gibbs_equilibrium(
    levels: (f64, f64),
    charging: &ChargingEnergies,
    left: &BathSpec,
    right: &BathSpec,
) -> Result<ProbabilityVector> {
    if left != right {
        return Err(Error::BathsDiffer {
            t_l: left.temperature,
            mu_l: left.chemical_potential,
            t_r: right.temperature,
            mu_r: right.chemical_potential,
        });
    }
    let (eps_top, eps_bottom) = levels;
    let bath = left;
    let mut exponents = [0.0; 4];
    for state in STATES {
        let n_t = f64::from(state.occupation(crate::device::Dot::Top));
        let n_b = f64::from(state.occupation(crate::device::Dot::Bottom));
        let energy = n_t * eps_top
            + n_b * eps_bottom
            + n_t * charging.u_top0
            + n_b * charging.u_bottom0
            + n_t * n_b * charging.coupling;
        let particles = n_t + n_b;
        exponents[state.index()] =
            -(energy - bath.chemical_potential * particles) / bath.temperature;
    }
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut weights = [0.0; 4];
    for (w, &e) in weights.iter_mut().zip(exponents.iter()) {
        *w = (e - max).exp();
    }
    ProbabilityVector::from_solver(weights)
}

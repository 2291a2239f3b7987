//! Randomized invariant suite: Gibbs equality, solve/evolve oracle
//! equivalence, conservation laws, second law, mirror antisymmetry, Onsager
//! reciprocity and the electrostatics cross-checks, all over seeded
//! pseudo-random feasible parameter draws.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::device::{level_energies, DeviceSpec, Dot, GammaTable, Lead, OperatingPoint, SystemState};
use crate::electrostatics::{
    charging_energies, coupling_from_network, electrostatic_energy, lead_offsets,
    CapacitanceNetwork, ChargingModel,
};
use crate::error::Result;
use crate::kinetics::{build_generator, rate_table};
use crate::observables::TransportReport;
use crate::steady_state::{evolve, gibbs_equilibrium, solve_stationary, ProbabilityVector};
use crate::sweep::onsager_check;
use crate::transport::solve_transport;

/// Deliberate corruptions for exercising the suite's failure paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negate one directed tunneling rate before building the generator.
    FlipRateSign,
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub trials: usize,
    /// Worst observed deviation (check-specific metric).
    pub worst: f64,
    /// One line per failing trial, including the reproducing draw.
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Results of the whole suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// Stable plain-text rendering, one line per check plus failure detail.
    pub fn render(&self) -> String {
        let mut out = format!("validation suite: seed={} trials={}\n", self.seed, self.trials);
        for check in &self.checks {
            out.push_str(&format!(
                "[{}] {:<28} trials={:<5} worst={:.3e}\n",
                if check.passed() { "PASS" } else { "FAIL" },
                check.name,
                check.trials,
                check.worst,
            ));
            for failure in &check.failures {
                out.push_str(&format!("       {failure}\n"));
            }
        }
        out.push_str(if self.passed() { "result: PASS\n" } else { "result: FAIL\n" });
        out
    }
}

/// A random feasible draw: device, operating point, and enough provenance
/// to reproduce it.
#[derive(Debug, Clone)]
pub struct Draw {
    pub index: usize,
    pub device: DeviceSpec,
    pub operating: OperatingPoint,
}

impl Draw {
    fn describe(&self) -> String {
        format!(
            "draw {}: eps=({}, {}), charging={:?}, op=(T={}, dT={}, dV={})",
            self.index,
            self.device.eps_top,
            self.device.eps_bottom,
            self.device.charging,
            self.operating.t_mean,
            self.operating.delta_t,
            self.operating.delta_v
        )
    }
}

/// Parameter ranges kept moderate so every drawn generator is comfortably
/// away from degeneracy: temperatures in [4, 12], forces in [-5, 5],
/// per-channel bare rates in [0.3, 2].
pub fn draw_feasible(rng: &mut impl Rng, index: usize, equilibrium: bool, lead_symmetric: bool) -> Draw {
    let delta_eps = rng.gen_range(-4.0..4.0);
    let (eps_t, eps_b) = level_energies(delta_eps);
    let gamma = if lead_symmetric {
        let mut values = [[0.0; 2]; 2];
        for row in &mut values {
            for v in row.iter_mut() {
                *v = rng.gen_range(0.3..2.0);
            }
        }
        GammaTable::lead_symmetric(|dot, n| values[dot.idx()][n as usize]).unwrap()
    } else {
        let mut values = [[[0.0; 2]; 2]; 2];
        for plane in &mut values {
            for row in plane.iter_mut() {
                for v in row.iter_mut() {
                    *v = rng.gen_range(0.3..2.0);
                }
            }
        }
        GammaTable::from_fn(|dot, n, lead| values[dot.idx()][n as usize][lead.idx()]).unwrap()
    };
    let charging = match rng.gen_range(0..if lead_symmetric { 2 } else { 3 }) {
        0 => ChargingModel::Symmetric {
            kappa: rng.gen_range(8.0..30.0),
            coupling: rng.gen_range(0.0..10.0),
        },
        1 => ChargingModel::Direct {
            coupling: rng.gen_range(0.0..10.0),
            u_top0: rng.gen_range(-4.0..4.0),
            u_bottom0: rng.gen_range(-4.0..4.0),
        },
        _ => ChargingModel::Capacitive {
            network: CapacitanceNetwork::new(
                rng.gen_range(0.03..0.3),
                rng.gen_range(0.03..0.3),
                rng.gen_range(0.03..0.3),
                rng.gen_range(0.03..0.3),
                rng.gen_range(0.01..0.3),
            )
            .unwrap(),
        },
    };
    let t_mean = rng.gen_range(4.0..12.0);
    let (delta_t, delta_v) = if equilibrium {
        (0.0, 0.0)
    } else {
        (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
    };
    Draw {
        index,
        device: DeviceSpec::new(eps_t, eps_b, gamma, charging).unwrap(),
        operating: OperatingPoint::new(t_mean, delta_t, delta_v).unwrap(),
    }
}

fn draw_batch(seed: u64, stream: u64, trials: usize, equilibrium: bool, lead_symmetric: bool) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..trials)
        .map(|i| draw_feasible(&mut rng, i, equilibrium, lead_symmetric))
        .collect()
}

/// Conservation-law and second-law checks shared by every trial that
/// produces a transport report.
fn report_violation(report: &TransportReport) -> Option<(&'static str, String)> {
    report.check_invariants()
}

/// Run the full suite. `fault` corrupts the model on purpose so tests can
/// confirm that violations are caught and named.
pub fn run_suite(seed: u64, trials: usize, fault: Option<Fault>) -> SuiteReport {
    let checks = vec![
        check_gibbs_equality(seed, trials),
        check_oracle_equivalence(seed, trials),
        check_conservation_laws(seed, trials, fault),
        check_mirror_antisymmetry(seed, trials),
        check_onsager(seed, trials.min(200)),
        check_electrostatics(seed, trials),
    ];
    SuiteReport { seed, trials, checks }
}

fn check_gibbs_equality(seed: u64, trials: usize) -> CheckResult {
    let draws = draw_batch(seed, 1, trials, true, false);
    let outcomes: Vec<(f64, Option<String>)> = draws
        .par_iter()
        .map(|draw| {
            let run = || -> Result<(f64, Option<String>)> {
                let sol = solve_transport(&draw.device, &draw.operating)?;
                let gibbs = gibbs_equilibrium(
                    (draw.device.eps_top, draw.device.eps_bottom),
                    &sol.charging,
                    &sol.left,
                    &sol.right,
                )?;
                let diff = sol.probabilities.max_abs_diff(&gibbs);
                let current_scale = [
                    sol.report.n_left,
                    sol.report.n_right,
                    sol.report.q_left_out,
                    sol.report.q_right_in,
                ]
                .iter()
                .map(|x| x.abs())
                .fold(0.0, f64::max);
                let worst = diff.max(current_scale);
                if diff > 1e-12 {
                    return Ok((worst, Some(format!("gibbs mismatch {diff:.3e} ({})", draw.describe()))));
                }
                if current_scale > 1e-12 {
                    return Ok((
                        worst,
                        Some(format!(
                            "nonzero equilibrium current {current_scale:.3e} ({})",
                            draw.describe()
                        )),
                    ));
                }
                Ok((worst, None))
            };
            run().unwrap_or_else(|e| (f64::INFINITY, Some(format!("{e} ({})", draw.describe()))))
        })
        .collect();
    collect_check("gibbs equilibrium", trials, outcomes)
}

fn check_oracle_equivalence(seed: u64, trials: usize) -> CheckResult {
    let draws = draw_batch(seed, 2, trials, false, false);
    let outcomes: Vec<(f64, Option<String>)> = draws
        .par_iter()
        .map(|draw| {
            let run = || -> Result<(f64, Option<String>)> {
                let sol = solve_transport(&draw.device, &draw.operating)?;
                let evolved = relax_to_stationary(&draw.device, &sol)?;
                let diff = evolved.max_abs_diff(&sol.probabilities);
                if diff > 1e-8 {
                    return Ok((diff, Some(format!("solve/evolve gap {diff:.3e} ({})", draw.describe()))));
                }
                Ok((diff, None))
            };
            run().unwrap_or_else(|e| (f64::INFINITY, Some(format!("{e} ({})", draw.describe()))))
        })
        .collect();
    collect_check("stationary oracle", trials, outcomes)
}

/// Integrate from a point mass until the state stops moving, doubling the
/// horizon as needed, then hand back the relaxed state.
pub fn relax_to_stationary(
    device: &DeviceSpec,
    solution: &crate::transport::PointSolution,
) -> Result<ProbabilityVector> {
    let gen = &solution.generator;
    let slowest_channel = Dot::ALL
        .iter()
        .flat_map(|&dot| (0..2u8).map(move |n| device.gamma.channel_sum(dot, n)))
        .fold(f64::INFINITY, f64::min);
    let dt = 0.05 / gen.max_diagonal().max(1e-3);
    let horizon = 60.0 / slowest_channel.max(1e-3);
    let mut p = evolve(gen, &ProbabilityVector::delta(SystemState::new(0, 0)?), horizon, dt)?;
    for _ in 0..8 {
        let next = evolve(gen, &p, horizon, dt)?;
        let moved = next.max_abs_diff(&p);
        p = next;
        if moved < 1e-11 {
            break;
        }
    }
    Ok(p)
}

fn check_conservation_laws(seed: u64, trials: usize, fault: Option<Fault>) -> CheckResult {
    let draws = draw_batch(seed, 3, trials, false, false);
    let outcomes: Vec<(f64, Option<String>)> = draws
        .par_iter()
        .map(|draw| {
            let run = || -> Result<(f64, Option<String>)> {
                let (left, right) = draw.operating.baths()?;
                let charging = charging_energies(&draw.device.charging, draw.operating.delta_v)?;
                let offsets = lead_offsets(&draw.device.charging, draw.operating.delta_v)?;
                let mut rates = rate_table(&draw.device, (&left, &right), &offsets, &charging);
                if fault == Some(Fault::FlipRateSign) {
                    rates.corrupt_rate_sign(Dot::Top, 0, Lead::Left);
                }
                let gen = build_generator(&rates);
                let p = solve_stationary(&gen)?;
                let report = TransportReport::compute(&rates, &p, &left, &right);
                let worst = report
                    .residual_charge
                    .abs()
                    .max(report.residual_energy.abs())
                    .max(report.residual_first_law.abs());
                if let Some((name, detail)) = report_violation(&report) {
                    return Ok((worst, Some(format!("{name}: {detail} ({})", draw.describe()))));
                }
                Ok((worst, None))
            };
            run().unwrap_or_else(|e| (f64::INFINITY, Some(format!("{e} ({})", draw.describe()))))
        })
        .collect();
    collect_check("conservation and second law", trials, outcomes)
}

fn check_mirror_antisymmetry(seed: u64, trials: usize) -> CheckResult {
    let draws = draw_batch(seed, 4, trials, false, true);
    let outcomes: Vec<(f64, Option<String>)> = draws
        .par_iter()
        .map(|draw| {
            let run = || -> Result<(f64, Option<String>)> {
                let fwd = solve_transport(&draw.device, &draw.operating)?;
                let mirrored = OperatingPoint::new(
                    draw.operating.t_mean,
                    -draw.operating.delta_t,
                    -draw.operating.delta_v,
                )?;
                let rev = solve_transport(&draw.device, &mirrored)?;
                let particle = (fwd.report.j_rho + rev.report.j_rho).abs();
                let heat = (fwd.report.q_right_in + rev.report.q_left_out).abs();
                let worst = particle.max(heat);
                if worst > 1e-12 {
                    return Ok((
                        worst,
                        Some(format!("mirror residual {worst:.3e} ({})", draw.describe())),
                    ));
                }
                Ok((worst, None))
            };
            run().unwrap_or_else(|e| (f64::INFINITY, Some(format!("{e} ({})", draw.describe()))))
        })
        .collect();
    collect_check("mirror antisymmetry", trials, outcomes)
}

fn check_onsager(seed: u64, trials: usize) -> CheckResult {
    let draws = draw_batch(seed, 5, trials, true, false);
    let outcomes: Vec<(f64, Option<String>)> = draws
        .par_iter()
        .map(|draw| {
            let run = || -> Result<(f64, Option<String>)> {
                let report = onsager_check(&draw.device, draw.operating.t_mean, 1e-4)?;
                let asym = report.relative_asymmetry;
                if asym > 1e-5 {
                    return Ok((asym, Some(format!("asymmetry {asym:.3e} ({})", draw.describe()))));
                }
                if report.matrix[0][0] <= 0.0 || report.matrix[1][1] <= 0.0 {
                    return Ok((
                        asym,
                        Some(format!("non-positive diagonal response ({})", draw.describe())),
                    ));
                }
                Ok((asym, None))
            };
            run().unwrap_or_else(|e| (f64::INFINITY, Some(format!("{e} ({})", draw.describe()))))
        })
        .collect();
    collect_check("onsager reciprocity", trials, outcomes)
}

fn check_electrostatics(seed: u64, trials: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6u64.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for index in 0..trials {
        let network = CapacitanceNetwork::new(
            rng.gen_range(0.03..0.3),
            rng.gen_range(0.03..0.3),
            rng.gen_range(0.03..0.3),
            rng.gen_range(0.03..0.3),
            rng.gen_range(0.01..0.3),
        )
        .unwrap();
        let v_l = rng.gen_range(-2.0..2.0);
        let v_r = rng.gen_range(-2.0..2.0);
        let energy = |nt, nb| electrostatic_energy(&network, nt, nb, v_l, v_r).unwrap();
        let second_difference = energy(1, 1) - energy(0, 1) - energy(1, 0) + energy(0, 0);
        let closed_form = coupling_from_network(&network);
        let gap = (second_difference - closed_form).abs();
        worst = worst.max(gap);
        if gap > 1e-12 {
            failures.push(format!(
                "draw {index}: coupling second-difference gap {gap:.3e} (network {network:?})"
            ));
        }

        // Reduced parametrization against its realizing network.
        let kappa = rng.gen_range(8.0..30.0);
        let coupling = rng.gen_range(0.001..1.0) * kappa / 4.0 * 0.98;
        let delta_v = rng.gen_range(-4.0..4.0);
        let sym = ChargingModel::Symmetric { kappa, coupling };
        let cap = ChargingModel::Capacitive {
            network: ChargingModel::equivalent_network(kappa, coupling).unwrap(),
        };
        let o_sym = lead_offsets(&sym, delta_v).unwrap();
        let o_cap = lead_offsets(&cap, delta_v).unwrap();
        for dot in Dot::ALL {
            for lead in Lead::ALL {
                let gap = (o_sym.get(dot, lead) - o_cap.get(dot, lead)).abs();
                worst = worst.max(gap);
                if gap > 1e-12 {
                    failures.push(format!(
                        "draw {index}: offset mismatch {gap:.3e} (kappa={kappa}, U={coupling}, dV={delta_v})"
                    ));
                }
            }
        }
    }
    CheckResult { name: "electrostatics cross-checks", trials, worst, failures }
}

fn collect_check(
    name: &'static str,
    trials: usize,
    outcomes: Vec<(f64, Option<String>)>,
) -> CheckResult {
    let worst = outcomes.iter().map(|(w, _)| *w).fold(0.0, f64::max);
    let failures = outcomes.into_iter().filter_map(|(_, f)| f).collect();
    CheckResult { name, trials, worst, failures }
}

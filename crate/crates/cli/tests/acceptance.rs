//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured margin (run with `--nocapture` to see them). Tolerances are
//! part of the contract and are pinned here, not configurable.

use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdot_core::validate::{draw_feasible, relax_to_stationary};
use qdot_core::{
    fermi_plus, gibbs_equilibrium, level_energies, onsager_check, region_disjointness,
    solve_transport, sweep, AxisSpec, BathSpec, ChargingModel, DeviceSpec, Dot, GammaTable,
    GridSpec, Lead, OperatingPoint, SweepAxis, SweepTable, SweepTemplate, TransportReport,
    DEFAULT_CLASSIFY_TOL,
};

const SEED: u64 = 0x5EED_0001;

fn pass(tag: &str, detail: String) {
    println!("[PASS] {tag}: {detail}");
}

/// Conservation bounds asserted on every report any criterion produces.
fn assert_conserved(report: &TransportReport, context: &str) {
    assert!(
        report.residual_charge.abs() < 1e-12,
        "{context}: charge residual {}",
        report.residual_charge
    );
    assert!(
        report.residual_energy.abs() < 1e-10,
        "{context}: energy residual {}",
        report.residual_energy
    );
    assert!(
        report.residual_first_law.abs() < 1e-10,
        "{context}: first-law residual {}",
        report.residual_first_law
    );
}

fn preset_template(delta_t: f64, delta_v: f64, coupling: f64) -> SweepTemplate {
    let (eps_t, eps_b) = level_energies(3.0);
    SweepTemplate {
        device: DeviceSpec::new(
            eps_t,
            eps_b,
            GammaTable::uniform(1.0).unwrap(),
            ChargingModel::Symmetric { kappa: 20.0, coupling },
        )
        .unwrap(),
        operating: OperatingPoint::new(7.5, delta_t, delta_v).unwrap(),
    }
}

/// The U = 40 force map shared by the second-law, inverse-region and
/// disjointness criteria (the fig3/fig4/fig6 preset grid).
fn shared_force_map() -> &'static (SweepTable, f64) {
    static TABLE: OnceLock<(SweepTable, f64)> = OnceLock::new();
    TABLE.get_or_init(|| {
        let template = preset_template(0.0, 0.0, 40.0);
        let grid = GridSpec::new(vec![
            AxisSpec { axis: SweepAxis::DeltaT, min: -5.0, max: 5.0, steps: 201 },
            AxisSpec { axis: SweepAxis::DeltaV, min: -5.0, max: 5.0, steps: 201 },
        ])
        .unwrap();
        let start = Instant::now();
        let table = sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).unwrap();
        (table, start.elapsed().as_secs_f64())
    })
}

#[test]
fn a01_equilibrium_nullity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_current = 0.0f64;
    let mut worst_gibbs = 0.0f64;
    for index in 0..1000 {
        let draw = draw_feasible(&mut rng, index, true, false);
        let sol = solve_transport(&draw.device, &draw.operating).unwrap();
        for current in [
            sol.report.n_left,
            sol.report.n_right,
            sol.report.q_left_out,
            sol.report.q_right_in,
            sol.report.e_left,
            sol.report.e_right,
            sol.report.j_rho,
            sol.report.j_u,
            sol.report.j_s,
        ] {
            worst_current = worst_current.max(current.abs());
            assert!(current.abs() < 1e-12, "draw {index}: current {current}");
        }
        let gibbs = gibbs_equilibrium(
            (draw.device.eps_top, draw.device.eps_bottom),
            &sol.charging,
            &sol.left,
            &sol.right,
        )
        .unwrap();
        let diff = sol.probabilities.max_abs_diff(&gibbs);
        worst_gibbs = worst_gibbs.max(diff);
        assert!(diff < 1e-12, "draw {index}: gibbs mismatch {diff}");
        assert_conserved(&sol.report, "a01");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "took {elapsed:.2} s (budget 5 s)");
    pass(
        "a01 equilibrium nullity",
        format!("1000 draws, max |current| = {worst_current:.2e}, max gibbs gap = {worst_gibbs:.2e}, {elapsed:.2} s"),
    );
}

#[test]
fn a02_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut worst = 0.0f64;
    for index in 0..1000 {
        let draw = draw_feasible(&mut rng, index, false, false);
        let sol = solve_transport(&draw.device, &draw.operating).unwrap();
        let relaxed = relax_to_stationary(&draw.device, &sol).unwrap();
        let diff = relaxed.max_abs_diff(&sol.probabilities);
        worst = worst.max(diff);
        assert!(diff < 1e-8, "draw {index}: solve/evolve gap {diff}");
        assert_conserved(&sol.report, "a02");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "took {elapsed:.2} s (budget 60 s)");
    pass(
        "a02 oracle equivalence",
        format!("1000 draws, max gap = {worst:.2e}, {elapsed:.2} s"),
    );
}

#[test]
fn a03_conservation_laws() {
    // The per-report bounds are asserted inside every other criterion via
    // assert_conserved and by the sweep's own per-point checks; this pass
    // measures the margins over a fresh nonequilibrium population.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for index in 0..1000 {
        let draw = draw_feasible(&mut rng, index, false, false);
        let sol = solve_transport(&draw.device, &draw.operating).unwrap();
        assert_conserved(&sol.report, "a03");
        worst = (
            worst.0.max(sol.report.residual_charge.abs()),
            worst.1.max(sol.report.residual_energy.abs()),
            worst.2.max(sol.report.residual_first_law.abs()),
        );
    }
    let (table, _) = shared_force_map();
    let (charge, energy, first_law) = table.max_residuals();
    assert!(charge < 1e-12 && energy < 1e-10 && first_law < 1e-10);
    pass(
        "a03 conservation laws",
        format!(
            "charge <= {:.2e}, energy <= {:.2e}, first law <= {:.2e} (draws), grid maxima {:.2e}/{:.2e}/{:.2e}",
            worst.0, worst.1, worst.2, charge, energy, first_law
        ),
    );
}

#[test]
fn a04_second_law_on_the_force_map() {
    let (table, elapsed) = shared_force_map();
    assert_eq!(table.rows.len(), 201 * 201);
    let min_j_s = table.min_entropy_current();
    assert!(min_j_s >= -1e-12, "min J_S = {min_j_s}");
    assert!(*elapsed < 10.0, "grid took {elapsed:.2} s (budget 10 s)");
    pass(
        "a04 second law",
        format!("201x201 grid, min J_S = {min_j_s:.3e}, {elapsed:.2} s"),
    );
}

#[test]
fn a05_inverse_particle_region_exists() {
    let (table, _) = shared_force_map();
    let positive_quadrant: Vec<_> = table
        .rows
        .iter()
        .filter(|r| r.class.inverse_particle && r.coords[0] > 0.0 && r.coords[1] > 0.0)
        .collect();
    assert!(
        !positive_quadrant.is_empty(),
        "no inverse-particle points in the dT > 0, dV > 0 quadrant"
    );
    for row in &positive_quadrant {
        assert!(row.report.j_rho < 0.0);
        assert!(
            row.report.j_u > 0.0,
            "at (dT, dV) = ({}, {}): J_u = {}",
            row.coords[0],
            row.coords[1],
            row.report.j_u
        );
    }
    pass(
        "a05 inverse particle current",
        format!(
            "{} points in the positive quadrant, all with J_rho < 0 < J_u",
            positive_quadrant.len()
        ),
    );
}

#[test]
fn a06_inverse_energy_region_is_confined_to_small_gradients() {
    let (table, _) = shared_force_map();
    let energy_extent = table
        .rows
        .iter()
        .filter(|r| r.class.inverse_energy)
        .map(|r| r.coords[0].abs())
        .fold(0.0f64, f64::max);
    let particle_extent = table
        .rows
        .iter()
        .filter(|r| r.class.inverse_particle)
        .map(|r| r.coords[0].abs())
        .fold(0.0f64, f64::max);
    let energy_count = table.rows.iter().filter(|r| r.class.inverse_energy).count();
    assert!(energy_count > 0, "inverse-energy region is empty");
    assert!(
        energy_extent < particle_extent,
        "inverse-energy |dT| extent {energy_extent} is not smaller than inverse-particle {particle_extent}"
    );
    pass(
        "a06 inverse energy confinement",
        format!(
            "{energy_count} points, |dT| extent {energy_extent:.2} < {particle_extent:.2} (particle)"
        ),
    );
}

#[test]
fn a07_inverse_regions_are_disjoint() {
    let (table, _) = shared_force_map();
    let report = region_disjointness(table).unwrap();
    assert!(report.particle.count > 0 && report.energy.count > 0);
    assert!(
        report.is_disjoint(),
        "overlapping points: {:?}",
        report.overlaps
    );
    pass(
        "a07 region disjointness",
        format!(
            "particle = {} points, energy = {} points, overlap = 0",
            report.particle.count, report.energy.count
        ),
    );
}

#[test]
fn a08_entropy_decomposition_along_the_coupling_sweep() {
    let template = preset_template(0.2, 3.0, 40.0);
    let grid = GridSpec::new(vec![AxisSpec {
        axis: SweepAxis::Coupling,
        min: 0.0,
        max: 80.0,
        steps: 401,
    }])
    .unwrap();
    let table = sweep(&template, &grid, DEFAULT_CLASSIFY_TOL).unwrap();
    let mut compensated = 0usize;
    for row in &table.rows {
        let r = &row.report;
        let identity = (r.j_s - (r.j_s_inverse + r.j_s_forward)).abs();
        assert!(identity < 1e-14, "decomposition identity off by {identity}");
        assert_conserved(r, "a08");
        if r.j_s_inverse < 0.0 && r.j_s_forward > 0.0 && r.j_s > 0.0 {
            compensated += 1;
        }
    }
    assert!(
        compensated > 0,
        "no coupling value shows J_S_r < 0 with J_S_f > 0 and J_S > 0"
    );
    pass(
        "a08 entropy decomposition",
        format!("{compensated}/401 sweep points show compensated negative entropy"),
    );
}

#[test]
fn a09_decoupled_dots_factorize_and_match_the_single_level_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut worst = 0.0f64;
    for index in 0..100 {
        // U = 0 and neighbour-independent couplings: two independent
        // single-level conductors.
        let draw = draw_feasible(&mut rng, index, false, false);
        let g = |dot: Dot, lead: Lead| draw.device.gamma.rate(dot, 0, lead);
        let device = DeviceSpec::new(
            draw.device.eps_top,
            draw.device.eps_bottom,
            GammaTable::from_fn(|dot, _, lead| g(dot, lead)).unwrap(),
            ChargingModel::Direct { coupling: 0.0, u_top0: 0.4, u_bottom0: -0.7 },
        )
        .unwrap();
        let sol = solve_transport(&device, &draw.operating).unwrap();
        assert_conserved(&sol.report, "a09");

        // Per-dot single-level formulas.
        let mut n_left = 0.0;
        let mut q_left = 0.0;
        let mut occupation = [0.0f64; 2];
        for dot in Dot::ALL {
            let x_l = sol.generator.rates().argument(dot, 0, Lead::Left);
            let x_r = sol.generator.rates().argument(dot, 0, Lead::Right);
            let f_l = fermi_plus(x_l, &BathSpec::new(sol.left.temperature, 0.0).unwrap());
            let f_r = fermi_plus(x_r, &BathSpec::new(sol.right.temperature, 0.0).unwrap());
            let g_l = g(dot, Lead::Left);
            let g_r = g(dot, Lead::Right);
            let n_dot = g_l * g_r / (g_l + g_r) * (f_l - f_r);
            n_left += n_dot;
            q_left += x_l * n_dot; // tight coupling: each electron carries x
            occupation[dot as usize] = (g_l * f_l + g_r * f_r) / (g_l + g_r);
        }
        let gap_n = (sol.report.n_left - n_left).abs();
        let gap_q = (sol.report.q_left_out - q_left).abs();
        let expected = [
            (1.0 - occupation[0]) * (1.0 - occupation[1]),
            occupation[0] * (1.0 - occupation[1]),
            (1.0 - occupation[0]) * occupation[1],
            occupation[0] * occupation[1],
        ];
        let gap_p = sol
            .probabilities
            .as_array()
            .iter()
            .zip(expected.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(gap_n).max(gap_q).max(gap_p);
        assert!(gap_n < 1e-10, "draw {index}: particle current gap {gap_n}");
        assert!(gap_q < 1e-10, "draw {index}: heat current gap {gap_q}");
        assert!(gap_p < 1e-10, "draw {index}: factorization gap {gap_p}");
    }
    pass(
        "a09 decoupled-dot oracle",
        format!("100 draws, max deviation {worst:.2e}"),
    );
}

#[test]
fn a10_mirror_antisymmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut worst = 0.0f64;
    for index in 0..100 {
        let draw = draw_feasible(&mut rng, index, false, true);
        let fwd = solve_transport(&draw.device, &draw.operating).unwrap();
        let mirrored = OperatingPoint::new(
            draw.operating.t_mean,
            -draw.operating.delta_t,
            -draw.operating.delta_v,
        )
        .unwrap();
        let rev = solve_transport(&draw.device, &mirrored).unwrap();
        let gap = (fwd.report.j_rho + rev.report.j_rho).abs();
        worst = worst.max(gap);
        assert!(gap < 1e-12, "draw {index}: J_rho mirror residual {gap}");
        assert_conserved(&fwd.report, "a10");
        assert_conserved(&rev.report, "a10");
    }
    pass("a10 mirror antisymmetry", format!("100 draws, max residual {worst:.2e}"));
}

#[test]
fn a11_onsager_reciprocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let mut worst = 0.0f64;
    for index in 0..100 {
        let draw = draw_feasible(&mut rng, index, true, false);
        let report = onsager_check(&draw.device, draw.operating.t_mean, 1e-4).unwrap();
        worst = worst.max(report.relative_asymmetry);
        assert!(
            report.relative_asymmetry < 1e-5,
            "draw {index}: asymmetry {}",
            report.relative_asymmetry
        );
    }
    pass("a11 onsager reciprocity", format!("100 devices, max asymmetry {worst:.2e}"));
}

#[test]
fn a12_electrostatics_cross_checks() {
    use qdot_core::electrostatics::{
        charging_energies, coupling_from_network, electrostatic_energy, lead_offsets,
        CapacitanceNetwork,
    };
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 12);
    let mut worst = 0.0f64;
    for index in 0..200 {
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
        let e = |nt, nb| electrostatic_energy(&network, nt, nb, v_l, v_r).unwrap();
        let second_difference = e(1, 1) - e(0, 1) - e(1, 0) + e(0, 0);
        let gap = (second_difference - coupling_from_network(&network)).abs();
        worst = worst.max(gap);
        assert!(gap < 1e-12, "draw {index}: coupling gap {gap}");

        let kappa = rng.gen_range(8.0..30.0);
        let coupling = rng.gen_range(0.01..0.99) * kappa / 4.0;
        let delta_v = rng.gen_range(-4.0..4.0);
        let sym = ChargingModel::Symmetric { kappa, coupling };
        let cap = ChargingModel::Capacitive {
            network: ChargingModel::equivalent_network(kappa, coupling).unwrap(),
        };
        let o_sym = lead_offsets(&sym, delta_v).unwrap();
        let o_cap = lead_offsets(&cap, delta_v).unwrap();
        let e_sym = charging_energies(&sym, delta_v).unwrap();
        let e_cap = charging_energies(&cap, delta_v).unwrap();
        let gap_u = (e_sym.coupling - e_cap.coupling).abs();
        worst = worst.max(gap_u);
        assert!(gap_u < 1e-12);
        for dot in Dot::ALL {
            for lead in Lead::ALL {
                let gap = (o_sym.get(dot, lead) - o_cap.get(dot, lead)).abs();
                worst = worst.max(gap);
                assert!(gap < 1e-12, "draw {index}: offset gap {gap}");
            }
        }
    }
    pass("a12 electrostatics cross-checks", format!("200 draws, max gap {worst:.2e}"));
}

#[test]
fn a13_sweep_determinism_across_parallelism() {
    use std::process::Command;
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("grid.json");
    std::fs::write(
        &config_path,
        r#"{
            "device": {
                "delta_eps": 3.0,
                "gamma": 1.0,
                "charging": {"mode": "symmetric", "kappa": 20.0, "coupling": 40.0}
            },
            "operating": {"t_mean": 7.5, "delta_t": 0.0, "delta_v": 0.0},
            "grid": {"axes": [
                {"param": "delta_t", "min": -5.0, "max": 5.0, "steps": 51},
                {"param": "delta_v", "min": -5.0, "max": 5.0, "steps": 51}
            ]}
        }"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2", "7"] {
        let out_path = dir.path().join(format!("t{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_qdot"))
            .args([
                "sweep",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out_path.to_str().unwrap(),
                "--threads",
                threads,
            ])
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&out_path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    pass(
        "a13 determinism",
        format!("3 thread counts, {} identical bytes", outputs[0].len()),
    );
}

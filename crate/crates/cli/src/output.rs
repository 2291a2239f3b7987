//! Tabular and report output: CSV rows in the fixed column order, contour
//! sidecar JSON, the single-point report and sweep summaries.

use std::io::Write;

use qdot_core::contour::Polyline;
use qdot_core::{ContourQuantity, DisjointnessReport, PointSolution, SweepTable};

use crate::config::Precision;

/// Fixed observable columns, appended after the swept parameter columns.
pub const RESULT_COLUMNS: [&str; 16] = [
    "J_rho",
    "J_u",
    "N_L",
    "N_R",
    "Q_L_out",
    "Q_R_in",
    "J_S",
    "J_S_r",
    "J_S_f",
    "p00",
    "p10",
    "p01",
    "p11",
    "residual_firstlaw",
    "inverse_particle",
    "inverse_energy",
];

/// Write the table as CSV: header, then one row per grid point in row-major
/// order. Numeric fields default to round-trip precision; flags are 0/1.
pub fn write_csv(out: &mut impl Write, table: &SweepTable, precision: Precision) -> std::io::Result<()> {
    let mut header: Vec<&str> = table.grid.axes().iter().map(|a| a.axis.key()).collect();
    header.extend(RESULT_COLUMNS);
    writeln!(out, "{}", header.join(","))?;
    for row in &table.rows {
        let mut fields: Vec<String> = row.coords.iter().map(|v| precision.format(*v)).collect();
        let r = &row.report;
        let p = &row.probabilities;
        for value in [
            r.j_rho,
            r.j_u,
            r.n_left,
            r.n_right,
            r.q_left_out,
            r.q_right_in,
            r.j_s,
            r.j_s_inverse,
            r.j_s_forward,
            p.p00(),
            p.p10(),
            p.p01(),
            p.p11(),
            r.residual_first_law,
        ] {
            fields.push(precision.format(value));
        }
        fields.push(flag(row.class.inverse_particle));
        fields.push(flag(row.class.inverse_energy));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

fn flag(b: bool) -> String {
    if b { "1".into() } else { "0".into() }
}

/// Contour sidecar: the extracted zero polylines plus the two zero-force
/// axes of the grid, kept separate so presentation can choose what to draw.
pub fn contour_sidecar_json(
    quantity: ContourQuantity,
    table: &SweepTable,
    contours: &[Polyline],
) -> String {
    let axes = table.grid.axes();
    let quantity_name = match quantity {
        ContourQuantity::ParticleCurrent => "J_rho",
        ContourQuantity::EnergyCurrent => "J_u",
    };
    let polyline_json = |line: &Polyline| -> serde_json::Value {
        serde_json::Value::Array(
            line.iter()
                .map(|(x, y)| serde_json::json!([x, y]))
                .collect(),
        )
    };
    let contours_json: Vec<serde_json::Value> = contours.iter().map(polyline_json).collect();
    let boundaries = serde_json::json!([
        [[axes[0].min, 0.0], [axes[0].max, 0.0]],
        [[0.0, axes[1].min], [0.0, axes[1].max]],
    ]);
    serde_json::to_string_pretty(&serde_json::json!({
        "quantity": quantity_name,
        "axes": [axes[0].axis.key(), axes[1].axis.key()],
        "contours": contours_json,
        "quadrant_boundaries": boundaries,
    }))
    .expect("sidecar serializes")
}

/// Human-readable single-point report.
pub fn render_point(solution: &PointSolution) -> String {
    let r = &solution.report;
    let p = &solution.probabilities;
    let mut out = String::new();
    out.push_str("steady-state transport report\n");
    out.push_str(&format!(
        "  baths: T_L = {}, T_R = {}, mu_L = {}, mu_R = {}\n",
        solution.left.temperature,
        solution.right.temperature,
        solution.left.chemical_potential,
        solution.right.chemical_potential,
    ));
    out.push_str(&format!(
        "  p = (p00, p10, p01, p11) = ({}, {}, {}, {})\n",
        p.p00(),
        p.p10(),
        p.p01(),
        p.p11()
    ));
    out.push_str(&format!("  J_rho   = {}\n", r.j_rho));
    out.push_str(&format!("  J_u     = {}\n", r.j_u));
    out.push_str(&format!("  N_L     = {}\n  N_R     = {}\n", r.n_left, r.n_right));
    out.push_str(&format!(
        "  Q_L_out = {}\n  Q_R_in  = {}\n",
        r.q_left_out, r.q_right_in
    ));
    out.push_str(&format!("  E_L     = {}\n  E_R     = {}\n", r.e_left, r.e_right));
    out.push_str(&format!("  J_S     = {}\n", r.j_s));
    out.push_str(&format!("  J_S_r   = {}\n", r.j_s_inverse));
    out.push_str(&format!("  J_S_f   = {}\n", r.j_s_forward));
    out.push_str(&format!(
        "  residuals: charge = {}, energy = {}, first law = {}\n",
        r.residual_charge, r.residual_energy, r.residual_first_law
    ));
    out
}

/// One-paragraph sweep summary for standard output.
pub fn render_summary(table: &SweepTable, disjointness: Option<&DisjointnessReport>) -> String {
    let (charge, energy, first_law) = table.max_residuals();
    let inverse_particle = table.rows.iter().filter(|r| r.class.inverse_particle).count();
    let inverse_energy = table.rows.iter().filter(|r| r.class.inverse_energy).count();
    let mut out = format!(
        "sweep: {} points, min J_S = {}, max residuals: charge = {:.3e}, energy = {:.3e}, first law = {:.3e}\n",
        table.rows.len(),
        table.min_entropy_current(),
        charge,
        energy,
        first_law,
    );
    out.push_str(&format!(
        "regions: inverse_particle = {inverse_particle} points, inverse_energy = {inverse_energy} points\n"
    ));
    if let Some(report) = disjointness {
        if report.is_disjoint() {
            out.push_str("inverse-current regions are disjoint\n");
        } else {
            out.push_str(&format!(
                "WARNING: {} points carry both inverse flags (first at {:?})\n",
                report.overlaps.len(),
                report.overlaps[0]
            ));
        }
    }
    out
}

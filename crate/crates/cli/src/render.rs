//! Text rendering of matrices and match results.

use padic_orbits::building::{
    render_symbol_matrix, MoyPrasadLattice, ResidueQuotientElement, RootDatum,
};
use padic_orbits::matching::MatchResult;
use padic_orbits::orbits::LieMatrix;
use padic_orbits::padic::PadicNumber;

/// Column-aligned numeric matrix from cell strings.
pub fn render_cells(cells: &[Vec<String>]) -> String {
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:<width$}")).collect();
        out.push_str(&format!("  {}\n", line.join(" ").trim_end()));
    }
    out
}

/// Residue matrix of a quotient element.
pub fn render_residue_matrix(v: &ResidueQuotientElement, rd: &RootDatum) -> String {
    let m = v.residue_matrix(rd);
    let cells: Vec<Vec<String>> = m
        .iter()
        .map(|row| row.iter().map(|e| e.to_string()).collect())
        .collect();
    render_cells(&cells)
}

/// The `V = g/g⁺` occupancy pattern: `k` where the quotient is nonzero.
pub fn render_quotient_pattern(lat: &MoyPrasadLattice, rd: &RootDatum) -> String {
    let g = lat.exponent_matrix(rd, false);
    let plus = lat.exponent_matrix(rd, true);
    let cells: Vec<Vec<String>> = g
        .iter()
        .zip(plus.iter())
        .map(|(gr, pr)| {
            gr.iter()
                .zip(pr.iter())
                .map(|(a, b)| if a < b { "k".to_string() } else { "0".to_string() })
                .collect()
        })
        .collect();
    render_cells(&cells)
}

/// Matrix of field elements, with an optional symbolic name for a
/// distinguished value (so table entries print as `a` rather than digits).
pub fn render_padic_matrix(m: &LieMatrix, symbol: Option<(&PadicNumber, &str)>) -> String {
    let one = PadicNumber::one(m.context().clone());
    let cells: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    if e.is_zero() {
                        return "0".to_string();
                    }
                    if *e == one {
                        return "1".to_string();
                    }
                    if *e == one.neg() {
                        return "-1".to_string();
                    }
                    if let Some((value, name)) = symbol {
                        if e == value {
                            return name.to_string();
                        }
                        if *e == value.neg() {
                            return format!("-{name}");
                        }
                    }
                    e.to_string()
                })
                .collect()
        })
        .collect();
    render_cells(&cells)
}

/// The full table block for one matched label.
pub fn render_match(r: &MatchResult, rd: &RootDatum) -> String {
    let mut out = String::new();
    out.push_str(&format!("label: {}\n", r.label));
    out.push_str(&format!("H = {}\n", r.subspace.describe(rd)));
    out.push_str(&format!("facet point: {}\n", r.facet_point));
    out.push_str(&format!("alcove point: {}\n", r.alcove_point));
    out.push_str(&format!("orbit dimension: {}\n", r.orbit_dim));
    out.push_str("g_F:\n");
    out.push_str(&render_symbol_matrix(&r.lattice.exponent_matrix(rd, false)));
    out.push_str("g_F^+:\n");
    out.push_str(&render_symbol_matrix(&r.lattice.exponent_matrix(rd, true)));
    out.push_str("v:\n");
    out.push_str(&render_residue_matrix(&r.v, rd));
    out.push_str(&format!(
        "checks: {}\n",
        if r.checks.all_green() { "ok" } else { "FAILED" }
    ));
    out
}

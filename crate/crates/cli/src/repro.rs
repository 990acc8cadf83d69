//! Reproduction reports for the worked examples, diffed against embedded
//! golden files.

use anyhow::{anyhow, bail, Result};

use padic_orbits::building::{
    moy_prasad, render_symbol_matrix, ApartmentPoint, RootDatum,
};
use padic_orbits::linalg::{rat, rat_frac, Rat};
use padic_orbits::matching::match_label;
use padic_orbits::orbits::{sl_labels, sp_labels, Algebra, OrbitDatum};
use padic_orbits::padic::{FieldContext, PadicNumber};
use padic_orbits::quadforms::AnisoTag;

use crate::render::{render_padic_matrix, render_quotient_pattern, render_residue_matrix};

const GOLDEN_SL3_P7: &str = include_str!("../golden/sl3_p7.txt");
const GOLDEN_SP4_P5: &str = include_str!("../golden/sp4_p5.txt");
const GOLDEN_TABLE1_P5: &str = include_str!("../golden/table1_p5.txt");
const GOLDEN_TABLE1_P7: &str = include_str!("../golden/table1_p7.txt");

/// Symbolic name of a field scalar when it is one of the canonical
/// square-class values, else its digit expansion.
fn scalar_symbol(ctx: &FieldContext, v: &PadicNumber) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let one = PadicNumber::one(ctx.clone());
    let eps = ctx.epsilon().lift();
    let eps2 = eps.mul(&eps).expect("same context");
    let candidates = [
        (one.clone(), "1"),
        (eps.clone(), "eps"),
        (one.shift(1), "pi"),
        (eps.shift(1), "eps*pi"),
        (eps2.clone(), "eps*eps"),
        (eps2.shift(1), "eps*eps*pi"),
    ];
    for (value, name) in &candidates {
        if v == value {
            return (*name).into();
        }
        if *v == value.neg() {
            return format!("-{name}");
        }
    }
    v.to_string()
}

fn sl3_facet_point(a1: Rat, a2: Rat) -> ApartmentPoint {
    // coordinates (x1, x2, x3), sum zero, with α1(x) = a1, α2(x) = a2
    let x1 = (&a1 * rat(2) + &a2) / rat(3);
    let x2 = &x1 - &a1;
    let x3 = &x2 - &a2;
    ApartmentPoint::new(Algebra::Sl(3), vec![x1, x2, x3]).expect("sum-zero point")
}

pub fn sl3_report(p: u64) -> Result<String> {
    let ctx = FieldContext::new(p, 1).map_err(|e| anyhow!(e))?;
    let rd = RootDatum::new(Algebra::Sl(3));
    let mut out = String::new();
    out.push_str(&format!("sl3 reproduction (p = {p})\n\n"));
    out.push_str("== facet lattices ==\n");
    let facets: [(&str, Rat, Rat); 5] = [
        ("F1 (alcove interior)", rat_frac(1, 3), rat_frac(1, 3)),
        ("F2 (edge on the alpha2 wall)", rat_frac(1, 2), rat(0)),
        ("F3 (origin)", rat(0), rat(0)),
        ("F4 (vertex alpha1 = 1)", rat(1), rat(0)),
        ("F5 (vertex alpha2 = 1)", rat(0), rat(1)),
    ];
    for (name, a1, a2) in facets {
        let x = sl3_facet_point(a1, a2);
        let lat = moy_prasad(&x, &rd);
        out.push_str(&format!("{name}, point {x}:\n"));
        out.push_str("g_F:\n");
        out.push_str(&render_symbol_matrix(&lat.exponent_matrix(&rd, false)));
        out.push_str("g_F^+:\n");
        out.push_str(&render_symbol_matrix(&lat.exponent_matrix(&rd, true)));
        out.push_str("V_F:\n");
        out.push_str(&render_quotient_pattern(&lat, &rd));
        out.push('\n');
    }
    out.push_str("== matched residue images ==\n");
    for label in sl_labels(3, &ctx) {
        let r = match_label(&label).map_err(|e| anyhow!(e))?;
        if !r.checks.all_green() {
            bail!("match checks failed for {label}");
        }
        match label.lambda().parts() {
            [2, 1] => {
                out.push_str(&format!(
                    "lambda (2,1): H = {}\nv:\n{}",
                    r.subspace.describe(&rd),
                    render_residue_matrix(&r.v, &rd)
                ));
                out.push('\n');
            }
            [3] => {
                let d = match label.datum() {
                    OrbitDatum::Sl(d) => d.value().clone(),
                    _ => unreachable!(),
                };
                out.push_str(&format!(
                    "lambda (3), d = {d}: H = {}\nv:\n{}",
                    r.subspace.describe(&rd),
                    render_residue_matrix(&r.v, &rd)
                ));
                out.push('\n');
            }
            _ => {}
        }
    }
    Ok(out)
}

pub fn sp4_report(p: u64) -> Result<String> {
    let ctx = FieldContext::new(p, 1).map_err(|e| anyhow!(e))?;
    let rd = RootDatum::new(Algebra::Sp(2));
    let mut out = String::new();
    out.push_str(&format!("sp4 reproduction (p = {p})\n\n"));

    let labels: Vec<_> = sp_labels(2, &ctx)
        .into_iter()
        .filter(|l| l.lambda().parts() == [4])
        .collect();
    let mut results = Vec::new();
    out.push_str("== subspaces and facet points ==\n");
    for label in &labels {
        let tuple = match label.datum() {
            OrbitDatum::Sp(t) => t,
            _ => unreachable!(),
        };
        let a = tuple.class(4).unwrap().aniso().diagonal_entries(&ctx)[0].clone();
        let r = match_label(label).map_err(|e| anyhow!(e))?;
        if !r.checks.all_green() {
            bail!("match checks failed for {label}");
        }
        out.push_str(&format!(
            "a = {}: H = {}, facet point {}\n",
            scalar_symbol(&ctx, &a),
            r.subspace.describe(&rd),
            r.facet_point
        ));
        results.push((a, r));
    }
    out.push('\n');

    out.push_str("== lattices ==\n");
    for coords in [vec![rat(0), rat(0)], vec![rat_frac(-1, 2), rat_frac(-1, 2)]] {
        let x = ApartmentPoint::new(Algebra::Sp(2), coords).expect("point");
        let lat = moy_prasad(&x, &rd);
        out.push_str(&format!("at {x}:\n"));
        out.push_str("g_F:\n");
        out.push_str(&render_symbol_matrix(&lat.exponent_matrix(&rd, false)));
        out.push_str("g_F^+:\n");
        out.push_str(&render_symbol_matrix(&lat.exponent_matrix(&rd, true)));
        out.push('\n');
    }

    out.push_str("== representatives X_a ==\n");
    for (a, r) in &results {
        let rep = r.label.representative().map_err(|e| anyhow!(e))?;
        out.push_str(&format!("a = {}:\n", scalar_symbol(&ctx, a)));
        out.push_str(&render_padic_matrix(&rep, Some((a, &scalar_symbol(&ctx, a)))));
    }
    out.push('\n');

    out.push_str("== residue images v_a ==\n");
    for (a, r) in &results {
        out.push_str(&format!(
            "a = {} (ac = {}):\n{}",
            scalar_symbol(&ctx, a),
            a.ac(),
            render_residue_matrix(&r.v, &rd)
        ));
    }
    Ok(out)
}

pub fn table1_report(p: u64) -> Result<String> {
    let ctx = FieldContext::new(p, 1).map_err(|e| anyhow!(e))?;
    let mut out = String::new();
    out.push_str(&format!(
        "anisotropic quadratic form classes (p = {p}, eps = {}, -1 {} a square)\n",
        ctx.epsilon().index(),
        if padic_orbits::quadforms::minus_one_is_square(&ctx) {
            "is"
        } else {
            "is not"
        }
    ));
    let mut count = 0;
    for dim in 1..=4u32 {
        for tag in AnisoTag::of_dim(dim) {
            let class =
                padic_orbits::quadforms::QFormClass::from_parts(0, tag, &ctx).map_err(|e| anyhow!(e))?;
            let entries = tag.diagonal_entries(&ctx);
            let rep: Vec<String> = entries.iter().map(|e| scalar_symbol(&ctx, e)).collect();
            out.push_str(&format!(
                "dim {dim}  disc {:<6}  hasse {:+}  rep diag({})\n",
                class.disc().symbol(),
                class.hasse(),
                rep.join(",")
            ));
            count += 1;
        }
    }
    out.push_str(&format!("total: {count}\n"));
    Ok(out)
}

/// Run a reproduction; returns the report and the embedded golden it must
/// match, when one exists for this `(report, p)` pair.
pub fn run(which: &str, p: u64) -> Result<(String, Option<&'static str>)> {
    match which {
        "sl3" => {
            let report = sl3_report(p)?;
            let golden = (p == 7).then_some(GOLDEN_SL3_P7);
            Ok((report, golden))
        }
        "sp4" => {
            let report = sp4_report(p)?;
            let golden = (p == 5).then_some(GOLDEN_SP4_P5);
            Ok((report, golden))
        }
        "table1" => {
            let report = table1_report(p)?;
            let golden = match p {
                5 => Some(GOLDEN_TABLE1_P5),
                7 => Some(GOLDEN_TABLE1_P7),
                _ => None,
            };
            Ok((report, golden))
        }
        other => bail!("unknown reproduction `{other}` (expected sl3, sp4 or table1)"),
    }
}

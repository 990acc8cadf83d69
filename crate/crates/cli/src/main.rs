//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error (bad prime, bad
//! label, unparseable input), 3 internal invariant violation (failed
//! match check, lattice membership error, golden mismatch).

mod render;
mod repro;
mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use padic_orbits::building::{moy_prasad, phi_x, render_symbol_matrix, ApartmentPoint, RootDatum};
use padic_orbits::denefpas::{
    build_psi_lm, evaluate, parse as parse_formula, DPStructure, Value,
};
use padic_orbits::linalg::Rat;
use padic_orbits::matching::{match_all, match_label, MatchResult};
use padic_orbits::orbits::{
    sl_labels, sp_labels, Algebra, OrbitLabel, OrbitLabelData,
};
use padic_orbits::padic::{gcd_u64, FieldContext, PadicNumber};
use padic_orbits::quadforms::{enumerate_classes, witt_decompose, DiagonalForm};

#[derive(Parser)]
#[command(
    name = "padic-orbits",
    version,
    about = "Rational nilpotent orbits over local fields: enumeration, lattices, matching, and the three-sorted valued-field language",
    after_help = "Defaults for --p and --precision can be overridden with the \
environment variables PADIC_ORBITS_P and PADIC_ORBITS_PRECISION."
)]
struct Cli {
    /// Residue characteristic (an odd prime)
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Residue extension degree (the residue field has q = p^k elements)
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Working precision in base-p digits
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate orbit labels and print representatives
    Orbits {
        #[command(subcommand)]
        action: OrbitsCmd,
    },
    /// Classify quadratic forms over the field
    Qform {
        #[command(subcommand)]
        action: QformCmd,
    },
    /// Apartment geometry and Moy-Prasad lattices
    Building {
        #[command(subcommand)]
        action: BuildingCmd,
    },
    /// Match orbit labels to (facet, residue image) pairs
    Match(MatchArgs),
    /// Parse and evaluate formulas of the three-sorted language
    Dp {
        #[command(subcommand)]
        action: DpCmd,
    },
    /// Reproduce the worked examples and diff against embedded goldens
    Repro {
        /// Which report: sl3, sp4 or table1
        which: String,
    },
}

#[derive(Subcommand)]
enum OrbitsCmd {
    /// List every rational nilpotent orbit label
    List(AlgebraArgs),
    /// Print the explicit representative of one label
    Rep {
        /// Label as JSON: {"alg": "sl", "lambda": [3], "datum": {"j":0,"i":0}}
        #[arg(long)]
        label: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    /// Algebra family: sl or sp
    #[arg(long)]
    algebra: String,
    /// n of sl_n, or n of sp_2n
    #[arg(long)]
    n: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum QformCmd {
    /// Classify a diagonal form given as comma-separated entries, e.g. 1,eps,pi,eps*pi
    Classify {
        #[arg(long)]
        entries: String,
        #[arg(long)]
        json: bool,
    },
    /// List all isometry classes of a given dimension
    Classes {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum BuildingCmd {
    /// Moy-Prasad lattice pair at an apartment point
    Lattice {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        n: u32,
        /// Rational coordinates, e.g. "-1/2,-1/2" (sum-zero for sl)
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        json: bool,
        /// Write an SVG of the rank-2 apartment with the point marked
        #[arg(long)]
        svg: Option<String>,
    },
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    algebra: String,
    #[arg(long)]
    n: u32,
    /// Match a single label given as JSON instead of the whole algebra
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    json: bool,
    /// Table output (the default)
    #[arg(long)]
    table: bool,
}

#[derive(Subcommand)]
enum DpCmd {
    /// Evaluate a formula; output is JSON {result, exact, flags}
    Eval {
        /// Formula text, or @path to read it from a file
        #[arg(long)]
        formula: String,
        /// Number of coset constants d_1..d_m
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Z-sort quantifier window, lo:hi
        #[arg(long = "z-window", default_value = "-16:16")]
        z_window: String,
        /// VF-sort valuation window, lo:hi
        #[arg(long = "vf-val-window", default_value = "-4:4")]
        vf_val_window: String,
        /// VF-sort unit digits per ball representative
        #[arg(long = "vf-digits", default_value_t = 2)]
        vf_digits: u32,
        /// Restrict VF quantifiers to the valuation ring
        #[arg(long = "ring-mode")]
        ring_mode: bool,
        /// Free-variable assignment name=expr (repeatable); expr is an
        /// integer for Z/RF and a scalar like -3*pi or eps for VF
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Evaluate the coset-count formulas psi_{l,m} over the divisors of m
    Psi {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Domain(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Internal(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (including --help/--version,
            // which are not errors)
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn context(cli: &Cli) -> Result<FieldContext, Failure> {
    let p = cli.p.or_else(|| env_u64("PADIC_ORBITS_P")).unwrap_or(7);
    let k = cli.k.unwrap_or(1);
    let precision = cli
        .precision
        .or_else(|| env_u64("PADIC_ORBITS_PRECISION").map(|v| v as u32))
        .unwrap_or(32);
    FieldContext::with_precision(p, k, precision).map_err(domain)
}

fn parse_algebra(name: &str, n: u32) -> Result<Algebra, Failure> {
    match name {
        "sl" if n >= 2 => Ok(Algebra::Sl(n)),
        "sl" => Err(Failure::Domain("sl needs --n at least 2".into())),
        "sp" if n >= 1 => Ok(Algebra::Sp(n)),
        "sp" => Err(Failure::Domain("sp needs --n at least 1".into())),
        other => Err(Failure::Domain(format!(
            "unknown algebra `{other}` (expected sl or sp)"
        ))),
    }
}

fn labels_of(algebra: Algebra, ctx: &FieldContext) -> Vec<OrbitLabel> {
    match algebra {
        Algebra::Sl(n) => sl_labels(n, ctx),
        Algebra::Sp(n) => sp_labels(n, ctx),
    }
}

fn parse_point(algebra: Algebra, s: &str) -> Result<ApartmentPoint, Failure> {
    let coords: Result<Vec<Rat>, _> = s.split(',').map(|c| Rat::from_str(c.trim())).collect();
    let coords = coords.map_err(|e| Failure::Domain(format!("bad coordinate: {e}")))?;
    ApartmentPoint::new(algebra, coords).map_err(domain)
}

fn parse_window(s: &str) -> Result<(i64, i64), Failure> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Failure::Domain(format!("window `{s}` must be lo:hi")))?;
    let lo: i64 = lo.trim().parse().map_err(domain)?;
    let hi: i64 = hi.trim().parse().map_err(domain)?;
    if lo > hi {
        return Err(Failure::Domain(format!("empty window `{s}`")));
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = context(&cli)?;
    match &cli.command {
        Command::Orbits { action } => match action {
            OrbitsCmd::List(args) => {
                let algebra = parse_algebra(&args.algebra, args.n)?;
                let labels = labels_of(algebra, &ctx);
                if args.json {
                    let data: Vec<_> = labels.iter().map(|l| l.to_data()).collect();
                    println!("{}", serde_json::to_string_pretty(&data).map_err(internal)?);
                } else {
                    for l in &labels {
                        println!("{l}");
                    }
                    println!("total: {}", labels.len());
                }
                Ok(())
            }
            OrbitsCmd::Rep { label, json } => {
                let data: OrbitLabelData =
                    serde_json::from_str(label).map_err(|e| Failure::Domain(e.to_string()))?;
                let label = OrbitLabel::from_data(&ctx, &data).map_err(domain)?;
                let rep = label.representative().map_err(internal)?;
                if *json {
                    let rows: Vec<Vec<_>> = rep
                        .rows()
                        .iter()
                        .map(|r| r.iter().map(|e| e.to_data()).collect())
                        .collect();
                    let out = serde_json::json!({
                        "label": label.to_data(),
                        "matrix": rows,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).map_err(internal)?);
                } else {
                    println!("{label}");
                    print!("{}", render::render_padic_matrix(&rep, None));
                }
                Ok(())
            }
        },
        Command::Qform { action } => match action {
            QformCmd::Classify { entries, json } => {
                let form = DiagonalForm::parse(&ctx, entries).map_err(domain)?;
                let class = witt_decompose(&form).map_err(internal)?;
                if *json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&class.to_data()).map_err(internal)?
                    );
                } else {
                    println!("{class}");
                }
                Ok(())
            }
            QformCmd::Classes { dim, json } => {
                let classes = enumerate_classes(*dim, &ctx);
                if *json {
                    let data: Vec<_> = classes.iter().map(|c| c.to_data()).collect();
                    println!("{}", serde_json::to_string_pretty(&data).map_err(internal)?);
                } else {
                    for c in &classes {
                        println!("{c}");
                    }
                    println!("total: {}", classes.len());
                }
                Ok(())
            }
        },
        Command::Building { action } => match action {
            BuildingCmd::Lattice {
                algebra,
                n,
                point,
                json,
                svg,
            } => {
                let algebra = parse_algebra(algebra, *n)?;
                let rd = RootDatum::new(algebra);
                let x = parse_point(algebra, point)?;
                let lat = moy_prasad(&x, &rd);
                if let Some(path) = svg {
                    let picture = svg::render_apartment(&rd, &[x.clone()]).map_err(domain)?;
                    if path == "-" {
                        print!("{picture}");
                        return Ok(());
                    }
                    std::fs::write(path, picture).map_err(internal)?;
                    println!("svg written to {path}");
                }
                if *json {
                    let out = serde_json::json!({
                        "point": x.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "lattice": serde_json::to_value(lat.to_data(&rd)).map_err(internal)?,
                        "quotient_dimension": lat.quotient_dimension(),
                        "integral_roots": phi_x(&x, &rd).len(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out).map_err(internal)?);
                } else {
                    println!("point: {x}");
                    println!("integral roots: {}", phi_x(&x, &rd).len());
                    println!("quotient dimension: {}", lat.quotient_dimension());
                    println!("g_F:");
                    print!("{}", render_symbol_matrix(&lat.exponent_matrix(&rd, false)));
                    println!("g_F^+:");
                    print!("{}", render_symbol_matrix(&lat.exponent_matrix(&rd, true)));
                }
                Ok(())
            }
        },
        Command::Match(args) => run_match(&ctx, args),
        Command::Dp { action } => run_dp(&ctx, action),
        Command::Repro { which } => {
            let (report, golden) = repro::run(which, ctx.p()).map_err(domain)?;
            print!("{report}");
            if let Some(golden) = golden {
                if report != golden {
                    let diff = first_difference(&report, golden);
                    return Err(Failure::Internal(format!(
                        "reproduction diverges from the embedded golden file ({diff})"
                    )));
                }
                println!("golden: ok");
            }
            Ok(())
        }
    }
}

fn first_difference(a: &str, b: &str) -> String {
    for (i, (la, lb)) in a.lines().zip(b.lines()).enumerate() {
        if la != lb {
            return format!("line {}: `{la}` vs `{lb}`", i + 1);
        }
    }
    format!(
        "length mismatch: {} vs {} lines",
        a.lines().count(),
        b.lines().count()
    )
}

fn run_match(ctx: &FieldContext, args: &MatchArgs) -> Result<(), Failure> {
    let algebra = parse_algebra(&args.algebra, args.n)?;
    let rd = RootDatum::new(algebra);
    let results: Vec<MatchResult> = if let Some(text) = &args.label {
        let data: OrbitLabelData =
            serde_json::from_str(text).map_err(|e| Failure::Domain(e.to_string()))?;
        let label = OrbitLabel::from_data(ctx, &data).map_err(domain)?;
        if label.algebra() != algebra {
            return Err(Failure::Domain(
                "label algebra disagrees with --algebra/--n".into(),
            ));
        }
        vec![match_label(&label).map_err(internal)?]
    } else {
        let report = match_all(algebra, ctx);
        if let Some((label, err)) = report.failures.first() {
            return Err(Failure::Internal(format!("match failed for {label}: {err}")));
        }
        report.results
    };
    if results.iter().any(|r| !r.checks.all_green()) {
        return Err(Failure::Internal(
            "a matched pair failed its verification checks".into(),
        ));
    }
    if args.json {
        let data: Vec<_> = results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "label": r.label.to_data(),
                    "subspace": r.subspace.describe(&rd),
                    "facet_point": r.facet_point.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "alcove_point": r.alcove_point.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "lattice": serde_json::to_value(r.lattice.to_data(&rd)).unwrap(),
                    "orbit_dimension": r.orbit_dim,
                    "checks_ok": r.checks.all_green(),
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&data).map_err(internal)?);
    } else {
        let mut out = String::new();
        for r in &results {
            out.push_str(&render::render_match(r, &rd));
            out.push('\n');
        }
        let _ = write!(out, "matched: {}\n", results.len());
        print!("{out}");
    }
    Ok(())
}

fn run_dp(ctx: &FieldContext, action: &DpCmd) -> Result<(), Failure> {
    match action {
        DpCmd::Eval {
            formula,
            m,
            z_window,
            vf_val_window,
            vf_digits,
            ring_mode,
            assign,
        } => {
            let text = if let Some(path) = formula.strip_prefix('@') {
                std::fs::read_to_string(path).map_err(domain)?
            } else {
                formula.clone()
            };
            let f = parse_formula(&text).map_err(domain)?;
            let (zlo, zhi) = parse_window(z_window)?;
            let (vlo, vhi) = parse_window(vf_val_window)?;
            let st = DPStructure::new(ctx, *m)
                .map_err(domain)?
                .with_z_window(zlo, zhi)
                .with_vf_window(vlo, vhi, *vf_digits)
                .with_ring_mode(*ring_mode);
            let free = f.free_vars();
            let mut assignment = BTreeMap::new();
            for item in assign {
                let (name, expr) = item.split_once('=').ok_or_else(|| {
                    Failure::Domain(format!("assignment `{item}` must be name=expr"))
                })?;
                let sort = free.get(name).ok_or_else(|| {
                    Failure::Domain(format!("`{name}` is not a free variable of the formula"))
                })?;
                let value = match sort {
                    padic_orbits::denefpas::Sort::Zz => {
                        Value::Zz(expr.trim().parse().map_err(domain)?)
                    }
                    padic_orbits::denefpas::Sort::Rf => {
                        let idx: u64 = expr.trim().parse().map_err(domain)?;
                        if idx >= ctx.q() {
                            return Err(Failure::Domain(format!(
                                "residue index {idx} out of range for q = {}",
                                ctx.q()
                            )));
                        }
                        Value::Rf(ctx.residue(idx))
                    }
                    padic_orbits::denefpas::Sort::Vf => {
                        if expr.trim() == "0" {
                            Value::Vf(PadicNumber::zero(ctx.clone()))
                        } else {
                            let form = DiagonalForm::parse(ctx, expr.trim()).map_err(domain)?;
                            Value::Vf(form.entries()[0].clone())
                        }
                    }
                };
                assignment.insert(name.to_string(), value);
            }
            let ev = evaluate(&f, &st, &assignment).map_err(domain)?;
            let out = serde_json::json!({
                "result": ev.result.to_string(),
                "exact": ev.exact,
                "flags": ev.flags.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string(&out).map_err(internal)?);
            Ok(())
        }
        DpCmd::Psi { m, json } => {
            let st = DPStructure::new(ctx, *m).map_err(domain)?;
            let mut rows = Vec::new();
            for ell in 1..=*m {
                if m % ell != 0 {
                    continue;
                }
                let psi = build_psi_lm(ell, *m).map_err(domain)?;
                let ev = evaluate(&psi, &st, &BTreeMap::new()).map_err(internal)?;
                rows.push((ell, ev.result));
            }
            let expected = gcd_u64(*m, ctx.q() - 1);
            if *json {
                let out = serde_json::json!({
                    "q": ctx.q(),
                    "m": m,
                    "psi": rows
                        .iter()
                        .map(|(ell, r)| serde_json::json!({"ell": ell, "holds": r.to_string()}))
                        .collect::<Vec<_>>(),
                    "gcd": expected,
                });
                println!("{}", serde_json::to_string_pretty(&out).map_err(internal)?);
            } else {
                for (ell, r) in &rows {
                    println!("psi(ell={ell}, m={m}) = {r}");
                }
                println!("gcd(m, q-1) = {expected}");
            }
            Ok(())
        }
    }
}

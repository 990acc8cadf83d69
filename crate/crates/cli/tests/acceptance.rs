//! Acceptance criteria, one test per criterion. Each prints a PASS line
//! with its runtime (visible under `--nocapture`) and enforces the stated
//! budget.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_orbits::building::{moy_prasad, phi_x, ApartmentPoint, RootDatum};
use padic_orbits::denefpas::{build_psi_lm, evaluate, DPStructure, Formula, Sort, Term, Truth};
use padic_orbits::linalg::rat_frac;
use padic_orbits::matching::match_all;
use padic_orbits::orbits::{
    orbit_dimension, sl_dimension_formula, sl_labels, Algebra,
};
use padic_orbits::padic::{gcd_u64, FieldContext, PadicNumber};
use padic_orbits::partitions::enumerate_partitions;
use padic_orbits::quadforms::{
    alpha_class, classify_gram, hilbert_symbol, witt_decompose, AnisoTag, DiagonalForm,
    QFormClass, SquareClass,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padic-orbits"))
}

fn finish(criterion: u32, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its budget: {elapsed:?} > {budget:?}"
    );
    println!("criterion {criterion} PASS ({elapsed:?}): {what}");
}

#[test]
fn criterion_1_sl3_orbit_counts() {
    let t = Instant::now();
    for (p, expected) in [(7u64, 11usize), (5, 5)] {
        let out = bin()
            .args(["orbits", "list", "--algebra", "sl", "--n", "3", "--p", &p.to_string()])
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "p={p}: {:?}", out.status);
        let stdout = String::from_utf8(out.stdout).unwrap();
        let labels = stdout.lines().filter(|l| l.starts_with("sl3 ")).count();
        assert_eq!(labels, expected, "p={p}");
        assert!(stdout.trim_end().ends_with(&format!("total: {expected}")));
    }
    finish(1, "sl3 yields 11 labels at p=7 and 5 at p=5", t, Duration::from_secs(1));
}

fn golden(path: &str) -> String {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(root.join(path)).expect("golden file")
}

#[test]
fn criterion_2_sl3_golden_table() {
    let t = Instant::now();
    let out = bin()
        .args(["repro", "sl3", "--p", "7"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{:?}", out.status);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let expected = golden("golden/sl3_p7.txt") + "golden: ok\n";
    assert_eq!(stdout, expected, "sl3 reproduction must be byte-exact");
    // all nine coset data must appear with their angular components
    for d in ["7^0 * (1)", "7^0 * (2)", "7^0 * (3)", "7^1 * (1)", "7^1 * (2)", "7^1 * (3)", "7^2 * (1)", "7^2 * (2)", "7^2 * (3)"] {
        assert!(stdout.contains(&format!("d = {d}:")), "missing {d}");
    }
    finish(2, "five lattice pairs and all v matrices are byte-exact", t, Duration::from_secs(1));
}

#[test]
fn criterion_3_sp4_golden_data() {
    let t = Instant::now();
    let out = bin()
        .args(["repro", "sp4", "--p", "5"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{:?}", out.status);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let expected = golden("golden/sp4_p5.txt") + "golden: ok\n";
    assert_eq!(stdout, expected, "sp4 reproduction must be byte-exact");
    assert!(stdout.contains("H = H(e1-e2) n H(2e2+1), facet point (-1/2, -1/2)"));
    assert!(stdout.contains("H = H(e1-e2) n H(2e2), facet point (0, 0)"));
    finish(3, "subspaces, facet points, lattices, X_a and v_a are byte-exact", t, Duration::from_secs(1));
}

#[test]
fn criterion_4_anisotropic_table() {
    let t = Instant::now();
    for p in [3u64, 5, 7, 13] {
        let ctx = FieldContext::with_precision(p, 1, 8).unwrap();
        let counts: Vec<usize> = (1..=4).map(|d| AnisoTag::of_dim(d).len()).collect();
        assert_eq!(counts, vec![4, 6, 4, 1], "p={p}");

        let alpha = alpha_class(&ctx);
        let eps = ctx.epsilon().lift();
        let pi = PadicNumber::uniformizer(ctx.clone());
        let one = PadicNumber::one(ctx.clone());
        let class_of = |witt: u32, tag: AnisoTag| QFormClass::from_parts(witt, tag, &ctx).unwrap();

        // dimension 1: the four square classes, Hasse +1
        let d1: Vec<(SquareClass, i32)> = AnisoTag::of_dim(1)
            .into_iter()
            .map(|t| {
                let c = class_of(0, t);
                (c.disc(), c.hasse())
            })
            .collect();
        assert_eq!(
            d1,
            vec![
                (SquareClass::One, 1),
                (SquareClass::Eps, 1),
                (SquareClass::Pi, 1),
                (SquareClass::EpsPi, 1)
            ],
            "p={p}"
        );

        // dimension 2: diag(1, α) and diag(ϖ, αϖ) carry disc α with
        // Hasse ±1; diag(t, t'ϖ) carries disc tt'ϖ and Hasse (t, t'ϖ)
        let u_plus = class_of(0, AnisoTag::Dim2UnitPlus);
        assert_eq!((u_plus.disc(), u_plus.hasse()), (alpha, 1), "p={p}");
        let u_minus = class_of(0, AnisoTag::Dim2UnitMinus);
        assert_eq!((u_minus.disc(), u_minus.hasse()), (alpha, -1), "p={p}");
        for (t, tp) in [
            (one.clone(), one.clone()),
            (one.clone(), eps.clone()),
            (eps.clone(), one.clone()),
            (eps.clone(), eps.clone()),
        ] {
            let tag = AnisoTag::Dim2Ramified(
                unit_tag(&t, &ctx),
                unit_tag(&tp, &ctx),
            );
            let c = class_of(0, tag);
            let tp_pi = tp.shift(1);
            let expected_disc = SquareClass::of(&t.mul(&tp_pi).unwrap()).unwrap();
            let expected_hasse = hilbert_symbol(&t, &tp_pi).unwrap();
            assert_eq!((c.disc(), c.hasse()), (expected_disc, expected_hasse), "p={p}");
        }

        // dimension 3: disc t with Hasse -1, and disc αtϖ with Hasse (α, ϖ)
        for (tag, t) in [
            (AnisoTag::Dim3UnitDisc(padic_orbits::quadforms::UnitTag::One), one.clone()),
            (AnisoTag::Dim3UnitDisc(padic_orbits::quadforms::UnitTag::Eps), eps.clone()),
        ] {
            let c = class_of(0, tag);
            assert_eq!((c.disc(), c.hasse()), (SquareClass::of(&t).unwrap(), -1), "p={p}");
        }
        let alpha_rep = alpha.representative(&ctx);
        let alpha_pi_symbol = hilbert_symbol(&alpha_rep, &pi).unwrap();
        for (tag, t) in [
            (AnisoTag::Dim3Ramified(padic_orbits::quadforms::UnitTag::One), one.clone()),
            (AnisoTag::Dim3Ramified(padic_orbits::quadforms::UnitTag::Eps), eps.clone()),
        ] {
            let c = class_of(0, tag);
            let expected_disc = alpha.mul(SquareClass::of(&t.shift(1)).unwrap());
            assert_eq!((c.disc(), c.hasse()), (expected_disc, alpha_pi_symbol), "p={p}");
        }

        // dimension 4: the unique class, disc 1, Hasse -1
        let d4 = class_of(0, AnisoTag::Dim4);
        assert_eq!((d4.disc(), d4.hasse()), (SquareClass::One, -1), "p={p}");

        // pairwise distinct within each dimension
        for dim in 1..=4u32 {
            let classes: Vec<QFormClass> = AnisoTag::of_dim(dim)
                .into_iter()
                .map(|tag| class_of(0, tag))
                .collect();
            for i in 0..classes.len() {
                for j in i + 1..classes.len() {
                    assert!(
                        (classes[i].disc(), classes[i].hasse())
                            != (classes[j].disc(), classes[j].hasse()),
                        "p={p} dim={dim}"
                    );
                }
            }
        }
    }
    finish(4, "15 anisotropic classes with the table invariants at p in {3,5,7,13}", t, Duration::from_secs(1));
}

fn unit_tag(v: &PadicNumber, ctx: &FieldContext) -> padic_orbits::quadforms::UnitTag {
    if *v == PadicNumber::one(ctx.clone()) {
        padic_orbits::quadforms::UnitTag::One
    } else {
        padic_orbits::quadforms::UnitTag::Eps
    }
}

#[test]
fn criterion_5_hilbert_symbol_oracle() {
    let t = Instant::now();
    for p in [3u64, 5, 7] {
        let ctx = FieldContext::with_precision(p, 1, 8).unwrap();
        let eps = ctx.epsilon().index();
        let reps = [
            (SquareClass::One, 1u64),
            (SquareClass::Eps, eps),
            (SquareClass::Pi, p),
            (SquareClass::EpsPi, eps * p),
        ];
        let m = p.pow(5);
        let sq: Vec<u64> = (0..m).map(|z| z * z % m).collect();
        let mut is_square = vec![false; m as usize];
        for &s in &sq {
            is_square[s as usize] = true;
        }
        for (ca, ia) in &reps {
            for (cb, ib) in &reps {
                let formula = hilbert_symbol(
                    &ca.representative(&ctx),
                    &cb.representative(&ctx),
                )
                .unwrap();
                let mut solvable = false;
                'search: for x in 0..m {
                    let ax2 = ia % m * sq[x as usize] % m;
                    let x_unit = x % p != 0;
                    for y in 0..m {
                        if !x_unit && y % p == 0 {
                            continue;
                        }
                        if is_square[((ax2 + ib % m * sq[y as usize]) % m) as usize] {
                            solvable = true;
                            break 'search;
                        }
                    }
                }
                assert_eq!(formula == 1, solvable, "p={p} ({ca},{cb})");
            }
        }
    }
    finish(5, "tame symbol equals conic solvability mod p^5 on all 16 pairs, p in {3,5,7}", t, Duration::from_secs(30));
}

#[test]
fn criterion_6_matching_soundness_sweep() {
    let t = Instant::now();
    let mut total = 0usize;
    for p in [5u64, 7, 11] {
        let ctx = FieldContext::with_precision(p, 1, 8).unwrap();
        for n in 2..=4u32 {
            let report = match_all(Algebra::Sl(n), &ctx);
            assert!(report.failures.is_empty(), "sl{n} p={p}: {:?}", report.failures.len());
            for r in &report.results {
                assert!(r.checks.all_green(), "sl{n} p={p} {}", r.label);
            }
            total += report.results.len();
        }
        for n in 1..=3u32 {
            let report = match_all(Algebra::Sp(n), &ctx);
            assert!(report.failures.is_empty(), "sp{} p={p}", 2 * n);
            for r in &report.results {
                assert!(r.checks.all_green(), "sp{} p={p} {}", 2 * n, r.label);
            }
            total += report.results.len();
        }
    }
    finish(
        6,
        &format!("matching sweep green on {total} labels (sl_n n<=4, sp_2n 2n<=6, q in {{5,7,11}})"),
        t,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_7_dimension_double_check() {
    let t = Instant::now();
    for n in 2..=6u32 {
        for lambda in enumerate_partitions(n as u64) {
            assert_eq!(
                orbit_dimension(Algebra::Sl(n), &lambda),
                sl_dimension_formula(n, &lambda),
                "n={n} lambda={lambda}"
            );
        }
    }
    // constancy across labels sharing lambda
    let ctx = FieldContext::with_precision(7, 1, 8).unwrap();
    for n in 2..=4u32 {
        let mut by_lambda: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for label in sl_labels(n, &ctx) {
            let dim = orbit_dimension(label.algebra(), label.lambda());
            let key = label.lambda().parts().to_vec();
            if let Some(prev) = by_lambda.insert(key.clone(), dim) {
                assert_eq!(prev, dim, "n={n} lambda={key:?}");
            }
        }
    }
    finish(7, "centralizer rank equals the transpose formula for all sl_n, n<=6", t, Duration::from_secs(30));
}

#[test]
fn criterion_8_psi_trichotomy() {
    let t = Instant::now();
    let fields = [(5u64, 1u32), (7, 1), (3, 2), (11, 1), (13, 1)];
    for (p, k) in fields {
        let ctx = FieldContext::with_precision(p, k, 8).unwrap();
        let q = ctx.q();
        for m in 1..=6u64 {
            let st = DPStructure::new(&ctx, m).unwrap();
            let mut holders = Vec::new();
            for ell in 1..=m {
                if m % ell != 0 {
                    continue;
                }
                let psi = build_psi_lm(ell, m).unwrap();
                let ev = evaluate(&psi, &st, &BTreeMap::new()).unwrap();
                assert!(ev.exact, "psi is residue-quantified only");
                if ev.result == Truth::True {
                    holders.push(ell);
                }
            }
            assert_eq!(holders, vec![gcd_u64(m, q - 1)], "q={q} m={m}");
        }
    }
    finish(8, "exactly one psi_(l,m) holds, at l = gcd(m, q-1), for q in {5,7,9,11,13}", t, Duration::from_secs(10));
}

#[test]
fn criterion_9_property_suites() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);

    // p-adic arithmetic laws
    let ctx7 = FieldContext::with_precision(7, 1, 16).unwrap();
    for _ in 0..1000 {
        let mut n = rng.gen_range(1i64..100_000);
        if n % 7 == 0 {
            n += 1;
        }
        let x = PadicNumber::from_integer(ctx7.clone(), n).shift(rng.gen_range(-4..4));
        let mut m = rng.gen_range(1i64..100_000);
        if m % 7 == 0 {
            m += 1;
        }
        let y = PadicNumber::from_integer(ctx7.clone(), m).shift(rng.gen_range(-4..4));
        let prod = x.mul(&y).unwrap();
        assert_eq!(prod.ord().unwrap(), x.ord().unwrap() + y.ord().unwrap());
        assert_eq!(prod.ac(), x.ac().mul(&y.ac()));
        assert_eq!(
            x.mul(&x.inv().unwrap()).unwrap(),
            PadicNumber::one(ctx7.clone())
        );
        if let Ok(sum) = x.add(&y) {
            if !sum.is_zero() {
                assert!(sum.ord().unwrap() >= x.ord().unwrap().min(y.ord().unwrap()));
            }
        }
    }

    // quadratic form round-trips
    for _ in 0..1000 {
        let p = if rng.gen_bool(0.5) { 5 } else { 7 };
        let c = FieldContext::with_precision(p, 1, 8).unwrap();
        let dim = rng.gen_range(1..=4usize);
        let entries: Vec<PadicNumber> = (0..dim)
            .map(|_| c.residue(rng.gen_range(1..c.q())).lift().shift(rng.gen_range(0..=1)))
            .collect();
        let class = witt_decompose(&DiagonalForm::new(c.clone(), entries).unwrap()).unwrap();
        let back = classify_gram(&c, &class.minimal_representative(&c)).unwrap();
        assert_eq!(back, class);
    }

    // lattice facet-constancy
    let mut done = 0;
    while done < 1000 {
        let alg = if rng.gen_bool(0.5) { Algebra::Sl(3) } else { Algebra::Sp(2) };
        let rd = RootDatum::new(alg);
        let dim = match alg {
            Algebra::Sl(n) => n as usize,
            Algebra::Sp(n) => n as usize,
        };
        let raw: Vec<_> = (0..dim)
            .map(|_| rat_frac(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=6)))
            .collect();
        let coords = match alg {
            Algebra::Sl(_) => {
                let sum: padic_orbits::linalg::Rat = raw.iter().cloned().sum();
                let shift = sum / rat_frac(dim as i64, 1);
                raw.into_iter().map(|c| c - &shift).collect::<Vec<_>>()
            }
            _ => raw,
        };
        let Ok(x) = ApartmentPoint::new(alg, coords.clone()) else { continue };
        // a second point pushed slightly inside the same facet
        let nudged: Vec<_> = coords
            .iter()
            .map(|c| c + rat_frac(rng.gen_range(-1i64..=1), 10_007))
            .collect();
        let Ok(y) = ApartmentPoint::new(alg, nudged) else { continue };
        if phi_x(&x, &rd) != phi_x(&y, &rd) {
            continue; // crossed a wall; resample
        }
        let same_floors = rd.roots().iter().all(|r| {
            r.eval(&x).floor() == r.eval(&y).floor()
        });
        if !same_floors {
            continue;
        }
        assert_eq!(moy_prasad(&x, &rd), moy_prasad(&y, &rd));
        done += 1;
    }

    // NNF equivalence on random closed formulas
    let c5 = FieldContext::with_precision(5, 1, 8).unwrap();
    let st = DPStructure::new(&c5, 2)
        .unwrap()
        .with_z_window(-6, 6)
        .with_vf_window(-1, 1, 1);
    let mut counter = 0usize;
    for _ in 0..1000 {
        let f = random_formula(&mut rng, &mut counter, &mut Vec::new(), 3, 1);
        let a = evaluate(&f, &st, &BTreeMap::new()).unwrap();
        let b = evaluate(&f.to_nnf(), &st, &BTreeMap::new()).unwrap();
        assert_eq!(a.result, b.result, "{f}");
    }

    finish(9, "padic laws, form round-trips, facet constancy, NNF equivalence at 1000 cases each", t, Duration::from_secs(120));
}

fn random_formula(
    rng: &mut ChaCha8Rng,
    counter: &mut usize,
    scope: &mut Vec<(String, Sort)>,
    depth: usize,
    z_quota: usize,
) -> Formula {
    fn term(rng: &mut ChaCha8Rng, sort: Sort, scope: &[(String, Sort)], depth: usize) -> Term {
        let vars: Vec<&(String, Sort)> = scope.iter().filter(|(_, s)| *s == sort).collect();
        if depth == 0 || rng.gen_bool(0.45) {
            if !vars.is_empty() && rng.gen_bool(0.7) {
                let (n, s) = vars[rng.gen_range(0..vars.len())];
                return Term::sorted_var(n, *s);
            }
            return Term::int(rng.gen_range(-3i64..=3), sort);
        }
        match sort {
            Sort::Zz => {
                if rng.gen_bool(0.4) {
                    Term::Ord(Box::new(term(rng, Sort::Vf, scope, depth - 1)))
                } else {
                    Term::add(
                        term(rng, Sort::Zz, scope, depth - 1),
                        term(rng, Sort::Zz, scope, depth - 1),
                    )
                }
            }
            Sort::Rf => {
                if rng.gen_bool(0.3) {
                    Term::Ac(Box::new(term(rng, Sort::Vf, scope, depth - 1)))
                } else {
                    Term::mul(
                        term(rng, Sort::Rf, scope, depth - 1),
                        term(rng, Sort::Rf, scope, depth - 1),
                    )
                }
            }
            Sort::Vf => Term::mul(
                term(rng, Sort::Vf, scope, depth - 1),
                term(rng, Sort::Vf, scope, depth - 1),
            ),
        }
    }
    if depth == 0 || rng.gen_bool(0.35) {
        let s = [Sort::Vf, Sort::Rf, Sort::Zz][rng.gen_range(0..3)];
        return match rng.gen_range(0..3) {
            0 => Formula::Eq(term(rng, s, scope, 2), term(rng, s, scope, 2)),
            1 => Formula::Le(
                term(rng, Sort::Zz, scope, 2),
                term(rng, Sort::Zz, scope, 2),
            ),
            _ => Formula::Cong(
                rng.gen_range(2u64..=4),
                term(rng, Sort::Zz, scope, 2),
                term(rng, Sort::Zz, scope, 2),
            ),
        };
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_formula(rng, counter, scope, depth - 1, z_quota)),
        1 => Formula::and(
            random_formula(rng, counter, scope, depth - 1, z_quota),
            random_formula(rng, counter, scope, depth - 1, z_quota),
        ),
        2 => Formula::or(
            random_formula(rng, counter, scope, depth - 1, z_quota),
            random_formula(rng, counter, scope, depth - 1, z_quota),
        ),
        _ => {
            let sort = match rng.gen_range(0..3) {
                0 if z_quota > 0 => Sort::Zz,
                1 => Sort::Vf,
                _ => Sort::Rf,
            };
            let quota = if sort == Sort::Zz { z_quota - 1 } else { z_quota };
            *counter += 1;
            let name = format!("q{}", counter);
            scope.push((name.clone(), sort));
            let body = random_formula(rng, counter, scope, depth - 1, quota);
            scope.pop();
            if rng.gen_bool(0.5) {
                Formula::Exists(name, sort, Box::new(body))
            } else {
                Formula::Forall(name, sort, Box::new(body))
            }
        }
    }
}

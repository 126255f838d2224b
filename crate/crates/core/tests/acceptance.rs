//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL summary line (plus detail lines for anything that failed).
//!
//! Run with `cargo test --test acceptance -- --test-threads=1` for
//! uncontended timings.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lipschitz_core::analyzer::{
    analyze, random_coefficients, reproduce_table, AnalyzeOptions, Certificate, NormalForm,
    Outcome, TableConfig, TableReport,
};
use lipschitz_core::curve::pullback_ideal;
use lipschitz_core::double::{build_unfolding, double_of, doubled_ring, MatrixGerm};
use lipschitz_core::groebner::{ideal_member, verify_lift, Budget, Ideal};
use lipschitz_core::poly::{
    ratio, Monomial, MonomialOrder, Order, Polynomial, Rational, Ring, RingContext, UnivariatePoly,
};
use lipschitz_core::tangent::{
    default_action, default_jet_degree, is_reduced_point_minors, normal_space_basis,
};

fn line(text: &str) {
    let _ = writeln!(std::io::stderr(), "{text}");
}

fn verdict(criterion: u32, name: &str, pass: bool, detail: &str) {
    line(&format!(
        "criterion {criterion} [{name}]: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    ));
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn catalog(max_k: u32, max_l: u32, min_k: u32) -> Vec<NormalForm> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for l in 2..=max_l {
            out.push(NormalForm::new(1, Some(k), Some(l)).unwrap());
        }
    }
    for row in 2..=4 {
        for k in min_k.max(2)..=max_k {
            out.push(NormalForm::new(row, Some(k), None).unwrap());
        }
    }
    out.push(NormalForm::new(5, None, None).unwrap());
    out.push(NormalForm::new(6, None, None).unwrap());
    out
}

// ---------------------------------------------------------------------------
// 1. normal spaces

#[test]
fn criterion_1_normal_space_reproduction() {
    let mut failures = Vec::new();
    let forms = catalog(5, 5, 2);
    for nf in &forms {
        let start = Instant::now();
        let action = default_action(nf.germ());
        let res =
            normal_space_basis(nf.germ(), action.as_ref(), default_jet_degree(nf.germ())).unwrap();
        let elapsed = start.elapsed();
        let shown = nf.displayed_normal_matrices();
        let dim_ok = res.codimension == nf.milnor_number();
        let basis_ok = res.is_quotient_basis(&shown);
        let fast = elapsed < Duration::from_secs(5);
        if !(dim_ok && basis_ok && res.stable && fast) {
            let listed: Vec<String> = nf
                .displayed_normal_space()
                .iter()
                .map(|p| p.label())
                .collect();
            failures.push(format!(
                "  {} [{}]: dim {} (milnor {}), stable {}, {:?}, computed [{}], listed [{}] {}",
                nf.name(),
                nf.table_label(),
                res.codimension,
                nf.milnor_number(),
                res.stable,
                elapsed,
                res.labels().join(", "),
                listed.join(", "),
                if basis_ok {
                    "spans the quotient"
                } else {
                    "does not span the quotient"
                }
            ));
        }
    }
    for f in &failures {
        line(f);
    }
    verdict(
        1,
        "normal-space reproduction",
        failures.is_empty(),
        &format!(
            "{} of {} germs match",
            forms.len() - failures.len(),
            forms.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// 2, 6 (audit part), 7 share one audited table run.

struct TableRun {
    report: TableReport,
    elapsed: Duration,
}

fn table() -> &'static TableRun {
    static RUN: OnceLock<TableRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = TableConfig {
            max_k: 4,
            max_l: 4,
            audit: true,
            ..TableConfig::default()
        };
        let start = Instant::now();
        let report = reproduce_table(&cfg);
        TableRun {
            report,
            elapsed: start.elapsed(),
        }
    })
}

#[test]
fn criterion_2_lemma_verdict_table() {
    let run = table();
    for c in run.report.failures() {
        line(&format!("  {c}"));
    }
    let fast = run.elapsed < Duration::from_secs(120);
    verdict(
        2,
        "lemma verdict table",
        run.report.all_pass() && fast,
        &format!(
            "{} of {} cells, {:.1} s",
            run.report.passed(),
            run.report.cells.len(),
            run.elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_7_witness_replay() {
    let run = table();
    let mut total = 0;
    let mut bad = Vec::new();
    for c in &run.report.cells {
        let Some(v) = &c.verdict else { continue };
        if v.outcome != Outcome::NotLipschitz {
            continue;
        }
        total += 1;
        let Certificate::Witness(w) = &v.certificate else {
            bad.push(format!("  {c}: no witness certificate"));
            continue;
        };
        let r = w.replay().unwrap();
        let same = r.element_order == Order::Finite(w.element_order)
            && r.ideal_order == w.ideal_order
            && w.verify().unwrap();
        if !same {
            bad.push(format!("  {c}: replay gives {:?}", r));
        }
    }
    for b in &bad {
        line(b);
    }
    verdict(
        7,
        "witness replay",
        bad.is_empty() && total > 0,
        &format!("{} of {total} witnesses re-verified", total - bad.len()),
    );
}

// ---------------------------------------------------------------------------
// 3. lemma curves

#[test]
fn criterion_3_lemma_curve_pullbacks() {
    let forms = catalog(5, 5, 2);
    let mut checked = 0;
    let mut bad = Vec::new();
    for nf in &forms {
        let mut dirs: Vec<(String, BTreeMap<String, Rational>)> =
            vec![("zero".into(), BTreeMap::new())];
        for p in nf.params() {
            dirs.push((
                format!("{}=1", p.name),
                BTreeMap::from([(p.name.clone(), ratio(1, 1))]),
            ));
        }
        dirs.push(("random".into(), random_coefficients(nf, 0x5eed)));
        for (label, c) in dirs {
            let theta = nf.theta(&c).unwrap();
            let u = build_unfolding(nf.germ(), &theta, "t").unwrap();
            let ideal = u.double_ideal().unwrap();
            let curve = nf.lemma_curve(u.doubled_ring()).unwrap();
            let s = pullback_ideal(&curve, ideal.ideal()).unwrap();
            checked += 1;
            let want = Order::Finite(nf.containment_exponent());
            if s.ideal_order != want {
                bad.push(format!(
                    "  {} θ {label}: ideal order {} along ({curve}), expected {want}",
                    nf.name(),
                    s.ideal_order
                ));
            }
        }
    }
    for b in &bad {
        line(b);
    }
    verdict(
        3,
        "lemma curve pullbacks",
        bad.is_empty(),
        &format!(
            "{} of {checked} (germ, direction) pairs",
            checked - bad.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// 4. reduced 1-minors route on a symmetric 3×3 germ

#[test]
fn criterion_4_reduced_minors_route() {
    let f = MatrixGerm::parse("vars: x, y, z\nsym: x, y, z ; y, x, 0 ; z, 0, y").unwrap();
    assert!(is_reduced_point_minors(&f));
    let action = default_action(&f);
    let res = normal_space_basis(&f, action.as_ref(), default_jet_degree(&f)).unwrap();
    let basis = res.normal_matrices();

    let mut directions: Vec<(String, MatrixGerm)> = res
        .normal_basis
        .iter()
        .map(|e| (e.label(), e.matrix.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..3 {
        let mut theta = MatrixGerm::zero(f.ring(), 3, 3, true);
        for b in &basis {
            let c = ratio(rng.gen_range(1..=9), rng.gen_range(1..=4));
            theta = theta.add(&b.scale(&c)).unwrap();
        }
        directions.push((format!("random {i}"), theta));
    }
    // Non-constant directions, which the constant route cannot decide.
    directions.push((
        "x·E11".into(),
        MatrixGerm::parse_in("sym: x, 0, 0 ; 0, 0, 0 ; 0, 0, 0", f.ring()).unwrap(),
    ));
    directions.push((
        "yz·E23".into(),
        MatrixGerm::parse_in("sym: 0, 0, 0 ; 0, 0, y*z ; 0, y*z, 0", f.ring()).unwrap(),
    ));

    let opts = AnalyzeOptions {
        routes: vec!["diagonal".into()],
        ..AnalyzeOptions::default()
    };
    let mut bad = Vec::new();
    for (label, theta) in &directions {
        let v = analyze(&f, theta, &opts).unwrap();
        let replayed = v.replay().unwrap();
        let two_steps = matches!(&v.certificate, Certificate::Inclusion(t) if t.steps.len() == 2);
        let full = analyze(&f, theta, &AnalyzeOptions::default()).unwrap();
        if v.outcome != Outcome::Lipschitz
            || v.route != "diagonal"
            || !replayed
            || !two_steps
            || full.outcome != Outcome::Lipschitz
        {
            bad.push(format!(
                "  θ = {label}: {} via {}, replay {replayed}",
                v.outcome, v.route
            ));
        }
    }
    for b in &bad {
        line(b);
    }
    verdict(
        4,
        "reduced-minors route",
        bad.is_empty() && res.codimension == 4,
        &format!(
            "codimension {}, {} of {} directions certified through I_D(θ) ⊆ I_Δ ⊆ I_D(F̃)",
            res.codimension,
            directions.len() - bad.len(),
            directions.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// 5. Gröbner membership against a bounded-degree linear-algebra oracle

fn monomials(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=max_deg - used).map(move |k| {
                    let mut v = e.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

fn random_poly(ring: &Ring, rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> Polynomial {
    let mons = monomials(ring.arity(), max_deg);
    let t = (0..terms).map(|_| {
        let m = mons[rng.gen_range(0..mons.len())].clone();
        (
            Monomial::new(m),
            ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
        )
    });
    Polynomial::from_terms(ring, t)
}

/// Solvability of `Σ cᵢ gᵢ = p` with `deg(cᵢ gᵢ) ≤ bound`, by dense
/// Gaussian elimination on the coefficient system.
fn oracle_member(p: &Polynomial, gens: &[Polynomial], bound: u32) -> bool {
    let n = p.ring().arity();
    let rows: HashMap<Vec<u32>, usize> = monomials(n, bound)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for g in gens {
        let dg = g.total_degree().unwrap_or(0);
        if dg > bound {
            continue;
        }
        for m in monomials(n, bound - dg) {
            let prod = g.mul_term(&Monomial::new(m), &Rational::one());
            let mut col = vec![Rational::zero(); rows.len()];
            for (mon, c) in prod.terms() {
                col[rows[mon.exponents()]] = c.clone();
            }
            columns.push(col);
        }
    }
    let mut rhs = vec![Rational::zero(); rows.len()];
    for (mon, c) in p.terms() {
        match rows.get(mon.exponents()) {
            Some(&i) => rhs[i] = c.clone(),
            None => return false,
        }
    }
    // augmented matrix, row-major
    let ncols = columns.len();
    let mut a: Vec<Vec<Rational>> = (0..rows.len())
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(p) = (pivot_row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][col].recip();
        for v in a[pivot_row].iter_mut() {
            *v *= inv.clone();
        }
        for r in 0..a.len() {
            if r != pivot_row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot = a[pivot_row].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot).skip(col) {
                    *v -= &factor * p;
                }
            }
        }
        pivot_row += 1;
    }
    a[pivot_row..].iter().all(|row| row[ncols].is_zero())
}

#[test]
fn criterion_5_groebner_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let names = ["x", "y", "z"];
    let (mut certified, mut disagreements, mut lift_failures) = (0, 0, 0);
    let instances = 240;
    for i in 0..instances {
        let n = rng.gen_range(1..=3);
        let order = [MonomialOrder::Lex, MonomialOrder::GrevLex][i % 2];
        let ring = RingContext::new(&names[..n], order).unwrap();
        let m = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..m)
            .map(|_| {
                let terms = rng.gen_range(1..=3);
                random_poly(&ring, &mut rng, 3, terms)
            })
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let p = if rng.gen_bool(0.5) {
            gens.iter().fold(Polynomial::zero(&ring), |acc, g| {
                let c = random_poly(&ring, &mut rng, 1, 2);
                &acc + &(&c * g)
            })
        } else {
            random_poly(&ring, &mut rng, 3, 3)
        };
        let ideal = Ideal::new(&ring, gens.clone()).unwrap();
        let member = ideal_member(&p, &ideal, &Budget::default()).unwrap();
        let maxdeg = gens
            .iter()
            .chain([&p])
            .filter_map(Polynomial::total_degree)
            .max()
            .unwrap_or(0);
        if oracle_member(&p, &gens, maxdeg + 2) {
            certified += 1;
            if !member {
                disagreements += 1;
                line(&format!("  disagreement: {p} in ⟨{gens:?}⟩"));
            }
        }
        if member {
            let lift = ideal.lift(&p, &Budget::default()).unwrap();
            if !lift.is_some_and(|c| verify_lift(&p, ideal.generators(), &c)) {
                lift_failures += 1;
            }
        }
    }
    verdict(
        5,
        "Gröbner oracle equivalence",
        disagreements == 0 && lift_failures == 0 && certified >= 100,
        &format!(
            "{instances} ideals, {certified} memberships certified by the oracle, \
             {disagreements} disagreements, {lift_failures} cofactor failures"
        ),
    );
}

// ---------------------------------------------------------------------------
// 6. property suites

const CASES: u32 = 512;

fn xy() -> Ring {
    RingContext::new(&["x", "y"], MonomialOrder::GrevLex).unwrap()
}

fn poly_strategy(ring: Ring, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let n = ring.arity();
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n), -6i64..=6, 1i64..=4),
        0..5,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            &ring,
            terms
                .into_iter()
                .map(|(e, a, b)| (Monomial::new(e), ratio(a, b))),
        )
    })
}

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| ratio(a, b))
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn double_properties() -> Result<(), String> {
    let r = xy();
    let d = doubled_ring(&r).unwrap();
    run_property(
        "double linearity",
        (
            poly_strategy(r.clone(), 3),
            poly_strategy(r.clone(), 3),
            rational_strategy(),
            rational_strategy(),
        ),
        |(p, q, a, b)| {
            let lhs = double_of(&(&p.scale(&a) + &q.scale(&b))).unwrap();
            let rhs = &double_of(&p).unwrap().scale(&a) + &double_of(&q).unwrap().scale(&b);
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    )?;
    run_property(
        "double Leibniz",
        (poly_strategy(r.clone(), 3), poly_strategy(r, 3)),
        |(p, q)| {
            // (pq)_D = p · q_D + q(z') · p_D
            let pd = double_of(&p).unwrap();
            let qd = double_of(&q).unwrap();
            let pe = p.embed_by_name(&d).unwrap();
            let qe = q.embed_by_name(&d).unwrap();
            let q_primed = &qe - &qd;
            let lhs = double_of(&(&p * &q)).unwrap();
            let rhs = &(&pe * &qd) + &(&q_primed * &pd);
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    )
}

fn substitution_homomorphism() -> Result<(), String> {
    let src = RingContext::new(&["x", "y", "z"], MonomialOrder::Lex).unwrap();
    let dst = RingContext::new(&["s", "u"], MonomialOrder::GrevLex).unwrap();
    let images = prop::collection::vec(poly_strategy(dst, 2), 3);
    run_property(
        "substitution homomorphism",
        (poly_strategy(src.clone(), 2), poly_strategy(src, 2), images),
        |(p, q, imgs)| {
            let c = |f: &Polynomial| f.compose(&imgs).unwrap();
            prop_assert_eq!(c(&(&p * &q)), &c(&p) * &c(&q));
            prop_assert_eq!(c(&(&p + &q)), &c(&p) + &c(&q));
            let by_name: BTreeMap<String, Polynomial> = ["x", "y", "z"]
                .iter()
                .map(|n| n.to_string())
                .zip(imgs.iter().cloned())
                .collect();
            prop_assert_eq!(p.substitute(&by_name).unwrap(), c(&p));
            Ok(())
        },
    )
}

fn valuation_additivity() -> Result<(), String> {
    let uni = || prop::collection::vec(rational_strategy(), 0..7).prop_map(UnivariatePoly::new);
    run_property("order additivity", (uni(), uni()), |(f, g)| {
        let sum = match (f.order_of_vanishing(), g.order_of_vanishing()) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        };
        prop_assert_eq!(f.mul(&g).order_of_vanishing(), sum);
        Ok(())
    })
}

#[test]
fn criterion_6_property_suites() {
    let results = [
        ("double linearity and Leibniz", double_properties()),
        ("substitution homomorphism", substitution_homomorphism()),
        ("order additivity", valuation_additivity()),
    ];
    let mut ok = true;
    for (name, r) in &results {
        if let Err(e) = r {
            ok = false;
            line(&format!("  {name}: {e}"));
        }
    }
    let run = table();
    let contradictions: Vec<_> = run
        .report
        .cells
        .iter()
        .filter(|c| c.error.as_deref().is_some_and(|e| e.contains("audit")))
        .collect();
    for c in &contradictions {
        line(&format!("  {c}"));
    }
    let audited = run
        .report
        .cells
        .iter()
        .all(|c| c.verdict.as_ref().is_some_and(|v| v.audited));
    ok &= contradictions.is_empty() && audited;
    verdict(
        6,
        "property suites",
        ok,
        &format!(
            "{CASES} cases per property, {} audited table cells, {} contradictions",
            run.report.cells.len(),
            contradictions.len()
        ),
    );
}

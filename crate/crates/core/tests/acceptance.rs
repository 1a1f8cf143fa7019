//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{PolySeed, C};
use rayon::prelude::*;
use toeplitz_core::bounds::{in_region, RegionPoint};
use toeplitz_core::cli::{execute, parse_config};
use toeplitz_core::coeffs::{a3_closed_form, a4_closed_form, coeffs_from_subordination};
use toeplitz_core::highdim::{
    functional_lz, random_point, soundness_sweep, t41_check, t41_functionals_from_jet, t42_lhs, t42_sides,
    DirectionalJet, Norm, SeedMapping,
};
use toeplitz_core::schwarz::{indexed_rng, jet_from_schur, sample_params, SchwarzJet};
use toeplitz_core::{sharp_bound_t23, sharpness_search, verify_attainment, PsiTarget, TruncatedSeries};

struct Outcome {
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail, notes: Vec::new() }
}

fn within(limit: Duration, t: Duration) -> bool {
    t < limit
}

fn bound_of(p: &PsiTarget) -> f64 {
    sharp_bound_t23(p).unwrap().bound
}

fn c1_bound_halfplane() -> Outcome {
    let cfg = parse_config(["toeplitz", "bound", "--psi", "halfplane"]).unwrap();
    let start = Instant::now();
    let out = execute(&cfg).unwrap();
    let elapsed = start.elapsed();
    let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
    let bound = v["bound"].as_f64().unwrap();
    let err = (bound - 2.0).abs();
    outcome(
        err <= 1e-13 && within(Duration::from_millis(1), elapsed),
        format!("bound {bound:?}, |err| {err:.1e}, {elapsed:?}"),
    )
}

fn c2_order_alpha() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let a = i as f64 / 10.0;
        let want = (1.0 - a).powi(2) * (3.0 - 2.0 * a).powi(2) / 9.0
            + (1.0 - a).powi(2) * (2.0 - a).powi(2) * (3.0 - 2.0 * a).powi(2) / 36.0;
        worst = worst.max((bound_of(&PsiTarget::order_alpha(a).unwrap()) - want).abs());
    }
    outcome(worst <= 1e-12, format!("10 values of alpha, worst |err| {worst:.1e}"))
}

fn c3_strong_beta() -> Outcome {
    let mut worst: f64 = 0.0;
    for b in [2.0f64 / 3.0, 0.7, 0.8, 0.9, 1.0] {
        let want = b.powi(4) + b * b * (1.0 + 17.0 * b * b).powi(2) / 324.0;
        worst = worst.max((bound_of(&PsiTarget::strong_beta(b).unwrap()) - want).abs());
    }
    outcome(worst <= 1e-12, format!("5 values of beta, worst |err| {worst:.1e}"))
}

fn random_target(seed: u64, i: u64) -> PsiTarget {
    use rand::Rng;
    let mut rng = indexed_rng(seed ^ 0x5eed, i);
    match i % 4 {
        0 => PsiTarget::halfplane(),
        1 => PsiTarget::order_alpha(rng.random_range(0.0..1.0)).unwrap(),
        2 => PsiTarget::strong_beta(rng.random_range(0.01..=1.0)).unwrap(),
        _ => PsiTarget::custom_jet(
            rng.random_range(0.1..3.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        )
        .unwrap(),
    }
}

/// `a₂, a₃, a₄` from the Taylor coefficients of `Ψ∘ω`, expanded by hand.
fn hand_coefficients(p: &PsiTarget, j: &SchwarzJet) -> [C; 3] {
    let d = p.jet();
    let p1 = d.d1 * j.c1;
    let p2 = d.d1 * j.c2 + d.d2 * j.c1 * j.c1 / 2.0;
    let p3 = d.d1 * j.c3 + d.d2 * j.c1 * j.c2 + d.d3 * j.c1 * j.c1 * j.c1 / 6.0;
    let a2 = p1 / 2.0;
    let a3 = (p2 + 2.0 * a2 * p1) / 6.0;
    let a4 = (p3 + 2.0 * a2 * p2 + 3.0 * a3 * p1) / 12.0;
    [a2, a3, a4]
}

fn c4_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let worst = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let p = random_target(4, i);
            let j = jet_from_schur(&sample_params(4, i));
            let v = coeffs_from_subordination(&p, &j);
            let (a3, a4) = (a3_closed_form(&p, &j).unwrap(), a4_closed_form(&p, &j).unwrap());
            let h = hand_coefficients(&p, &j);
            [
                (v.a3 - a3).norm(),
                (v.a4 - a4).norm(),
                (v.a2 - h[0]).norm(),
                (v.a3 - h[1]).norm(),
                (v.a4 - h[2]).norm(),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && within(Duration::from_secs(2), elapsed),
        format!("10^4 pairs, worst |diff| {worst:.1e}, {elapsed:?}"),
    )
}

/// `|c₃ + ν₁c₁c₂ + ν₂c₁³|` checked against the bound `|ν₂|` as stated, on
/// a lattice of real `(ν₁, ν₂)` in each region, both signs of `ν₁`.
fn c5_lemma_sweeps() -> Outcome {
    let start = Instant::now();
    let lambdas: Vec<C> = [0.0, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0, 10.0]
        .iter()
        .flat_map(|&r| (0..16).map(move |k| C::from_polar(r, std::f64::consts::PI * k as f64 / 8.0)))
        .collect();
    let mut lattice: Vec<(u8, f64, f64)> = Vec::new();
    for i in -12..=12 {
        for k in -8..=12 {
            let (nu1, nu2) = (i as f64 * 0.5, k as f64 * 0.5);
            for r in 1..=7u8 {
                if in_region(r, &RegionPoint::real(nu1, nu2)) {
                    lattice.push((r, nu1, nu2));
                }
            }
        }
    }
    let tol = 1e-12;
    // per-sample tallies: lemma-1 violations, per-region stated-form violations,
    // per-region violations of max{1, |ν₂|}
    let (v1, v2, v2c) = (0..100_000u64)
        .into_par_iter()
        .map(|i| {
            let j = jet_from_schur(&sample_params(5, i));
            let mut v1 = 0usize;
            for &l in &lambdas {
                if (j.c2 + l * j.c1 * j.c1).norm() > l.norm().max(1.0) + tol {
                    v1 += 1;
                }
            }
            let mut v2 = [0usize; 7];
            let mut v2c = [0usize; 7];
            for &(r, nu1, nu2) in &lattice {
                let value = (j.c3 + nu1 * j.c1 * j.c2 + nu2 * j.c1 * j.c1 * j.c1).norm();
                if value > nu2.abs() + tol {
                    v2[r as usize - 1] += 1;
                }
                if value > nu2.abs().max(1.0) + tol {
                    v2c[r as usize - 1] += 1;
                }
            }
            (v1, v2, v2c)
        })
        .reduce(
            || (0, [0; 7], [0; 7]),
            |a, b| {
                let mut v2 = a.1;
                let mut v2c = a.2;
                for r in 0..7 {
                    v2[r] += b.1[r];
                    v2c[r] += b.2[r];
                }
                (a.0 + b.0, v2, v2c)
            },
        );
    let elapsed = start.elapsed();
    let stated: usize = v2.iter().sum();
    let corrected: usize = v2c.iter().sum();
    let mut o = outcome(
        v1 == 0 && stated == 0 && within(Duration::from_secs(30), elapsed),
        format!(
            "10^5 jets, lemma 1: {v1} violations over {} values of lambda; lemma 2 (bound |nu2|): {stated} violations over {} lattice points; {elapsed:?}",
            lambdas.len(),
            lattice.len()
        ),
    );
    o.notes.push(format!("lemma 2 violations per region 1..7 with bound |nu2|: {v2:?}"));
    o.notes.push(format!(
        "lemma 2 with bound max(1, |nu2|): {corrected} violations, per region {v2c:?}"
    ));
    let z3 = SchwarzJet::from_coeffs(C::default(), C::default(), C::new(1.0, 0.0));
    o.notes.push(format!(
        "omega = z^3 at (nu1, nu2) = (0, 0): |c3| = {}, stated bound 0",
        (z3.c3).norm()
    ));
    o
}

fn families() -> Vec<PsiTarget> {
    vec![
        PsiTarget::halfplane(),
        PsiTarget::order_alpha(0.5).unwrap(),
        PsiTarget::strong_beta(0.8).unwrap(),
    ]
}

fn c6_soundness() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in families() {
        let start = Instant::now();
        let s = sharpness_search(&p, 100_000, 6).unwrap();
        let elapsed = start.elapsed();
        let excess = s.best - s.bound;
        ok &= excess <= 1e-9 && within(Duration::from_secs(60), elapsed);
        parts.push(format!("{}: best - bound {excess:.1e} ({elapsed:?})", p.label()));
    }
    outcome(ok, parts.join("; "))
}

fn c7_sharpness() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in families() {
        let s = sharpness_search(&p, 100_000, 7).unwrap();
        let g0 = s.best_gamma[0];
        let unimodular = (g0[0].hypot(g0[1]) - 1.0).abs() <= 1e-3;
        ok &= s.gap <= 1e-6 && unimodular;
        parts.push(format!("{}: gap {:.1e}, |gamma0| {:.6}", p.label(), s.gap, g0[0].hypot(g0[1])));
    }
    let mut worst: f64 = 0.0;
    let mut targets = families();
    targets.extend((0..10).map(|i| PsiTarget::order_alpha(i as f64 / 10.0).unwrap()));
    targets.extend([2.0 / 3.0, 0.7, 0.8, 0.9, 1.0].map(|b| PsiTarget::strong_beta(b).unwrap()));
    for p in &targets {
        worst = worst.max(verify_attainment(p).unwrap().gap.abs());
    }
    ok &= worst <= 1e-10;
    parts.push(format!("extremal attainment worst gap {worst:.1e} over {} targets", targets.len()));
    outcome(ok, parts.join("; "))
}

fn c8_higher_dimensions() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [2, 3] {
        for norm in [Norm::L2, Norm::Linf] {
            let r = soundness_sweep(None, norm, n, 10_000, 8 + n as u64).unwrap();
            ok &= r.violations == 0;
            parts.push(format!(
                "n={n} {}: {} checks, {} violations",
                norm.name(),
                r.checks,
                r.violations
            ));
        }
    }

    // equality for the ball extremal at z = ru
    let mut eq_ball: f64 = 0.0;
    let mut rng = indexed_rng(88, 0);
    for p in families() {
        let bound = bound_of(&p);
        for n in [2, 3] {
            for norm in [Norm::L2, Norm::Linf] {
                let u = toeplitz_core::highdim::random_unit_vector(&mut rng, n, norm);
                let m = SeedMapping::extremal_ball(p.clone(), u.clone(), norm).unwrap();
                for r in [0.1, 0.5, 0.9] {
                    let z: Vec<C> = u.iter().map(|c| c * r).collect();
                    eq_ball = eq_ball.max((t41_check(&m, &z).unwrap().lhs - bound).abs());
                }
            }
        }
    }
    ok &= eq_ball <= 1e-9;
    parts.push(format!("ball extremal |lhs - bound| {eq_ball:.1e}"));

    // polydisk extremal for the half-plane at z = (r, 0, …)
    let mut eq_poly: f64 = 0.0;
    for n in [2, 3] {
        let m = SeedMapping::extremal_polydisk(PsiTarget::halfplane(), n).unwrap();
        for r in [0.1f64, 0.5, 0.9] {
            let mut z = vec![C::default(); n];
            z[0] = C::new(r, 0.0);
            let s = t42_sides(&m, &z).unwrap();
            let want = r.powi(5) + r.powi(7);
            eq_poly = eq_poly.max((s.lhs - want).abs()).max((s.rhs - want).abs());
        }
    }
    ok &= eq_poly <= 1e-9;
    parts.push(format!("polydisk extremal |lhs - (r^5 + r^7)| {eq_poly:.1e}"));

    let elapsed = start.elapsed();
    ok &= within(Duration::from_secs(60), elapsed);
    parts.push(format!("{elapsed:?}"));
    outcome(ok, parts.join("; "))
}

fn c9_multilinear_collapse() -> Outcome {
    let mut rng = indexed_rng(99, 0);
    let mut worst: f64 = 0.0;
    let mut worst_t41: f64 = 0.0;
    let mut trials = 0;
    while trials < 2000 {
        let seed = PolySeed::random(&mut rng);
        let zv = random_point(&mut rng, 2, Norm::Linf, 1.0);
        let z = [zv[0], zv[1]];
        if toeplitz_core::highdim::max_coordinate(&zv).is_err() {
            continue;
        }
        trials += 1;
        let b = seed.directional_coeffs(&z);
        let jet = DirectionalJet::new(zv.clone(), TruncatedSeries::new(b, 3)).unwrap();
        let oracle = seed.t42_lhs_oracle(&z);
        worst = worst.max((t42_lhs(&jet) - oracle).abs() / oracle.max(1.0));

        for norm in [Norm::L2, Norm::Linf] {
            let (a3, a4) = t41_functionals_from_jet(norm, &jet).unwrap();
            let nz = norm.of(&zv);
            let d3 = seed.multilinear_vec(&[z; 3]).map(|c| c / 6.0);
            let d4 = seed.multilinear_vec(&[z; 4]).map(|c| c / 24.0);
            let o3 = functional_lz(norm, &zv, &d3).unwrap() / nz.powi(3);
            let o4 = functional_lz(norm, &zv, &d4).unwrap() / nz.powi(4);
            worst_t41 = worst_t41.max((a3 - o3).norm()).max((a4 - o4).norm());
        }
    }
    outcome(
        worst <= 1e-11 && worst_t41 <= 1e-11,
        format!("{trials} cubic seeds on C^2: polydisk left side worst rel diff {worst:.1e}; ball functionals worst {worst_t41:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 half-plane bound equals 2", c1_bound_halfplane),
        ("2 order-alpha bound formula", c2_order_alpha),
        ("3 strong-beta bound formula", c3_strong_beta),
        ("4 recurrence vs closed forms", c4_oracle_equivalence),
        ("5 lemma sweeps", c5_lemma_sweeps),
        ("6 search never exceeds the bound", c6_soundness),
        ("7 bound is attained", c7_sharpness),
        ("8 ball and polydisk inequalities", c8_higher_dimensions),
        ("9 multilinear collapse", c9_multilinear_collapse),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let o = run();
        println!("[{}] criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        for n in &o.notes {
            println!("       {n}");
        }
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}

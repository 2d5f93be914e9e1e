//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use hyperbisect::gf2poly::{ideal_member, ideal_member_by_expansion};
use hyperbisect::lambda::{verdict, Certificate, Status};
use hyperbisect::momentcurve::{count_bisections, enumerate_bisections, verify_bisection, IntervalFamily};
use hyperbisect::parity::{lemma_i_parity, lemma_ii_parity, Parity};
use hyperbisect::rational::{int, ratio, Rational};
use hyperbisect::testmap::{
    act_on_join, act_on_target, max_relative_imbalance, phi, psi, solve_bisection, JoinPoint,
    SolveOutcome, SolverConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn power_of_two_family() -> Outcome {
    let start = Instant::now();
    for m in 1..=5u32 {
        let d = 1u64 << (m - 1);
        let j = (1u64 << m) - 1;
        check(!ideal_member(j, 2, d), || format!("m={m}: library says member"))?;
        let (code, out, _) = run_cli(&["ideal", "member", &d.to_string(), &j.to_string(), "2"]);
        check(code == 0 && out.starts_with("member=false\n"), || {
            format!("m={m}: cli exit {code}, output {out:?}")
        })?;
        // the surviving monomial t1^d t2^(d-1) has an odd coefficient
        check(is_odd(&binomial(j, d)), || format!("C({j},{d}) even"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("m = 1..5 all outside the ideal".into())
}

fn lemma_one_exhaustive() -> Outcome {
    let start = Instant::now();
    for d in 1..=16u64 {
        for k in 2..=8u64 {
            let p = lemma_i_parity(d, k).map_err(|e| e.to_string())?;
            let exact = is_odd(&unordered_count(d, k));
            check(p.is_odd() == exact, || format!("d={d} k={k}: {p} vs exact"))?;
            check(p.is_odd() == d.is_power_of_two(), || format!("d={d} k={k}: {p}"))?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok("112 cases match big-integer parity".into())
}

fn lemma_two_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut closed_form_misses = Vec::new();
    for d in 1..=12u64 {
        for k in 2..=7u64 {
            for ell in 1..=(d - 1) / 2 {
                let p = lemma_ii_parity(d, k, ell).map_err(|e| e.to_string())?;
                let exact = is_odd(&anchored_count(d, k, ell));
                check(p.is_odd() == exact, || format!("d={d} k={k} l={ell}: {p} vs exact"))?;
                let free = d - ell;
                let predicted = k % 2 == 1 && free >= 2 && free.is_power_of_two();
                if p.is_odd() != predicted {
                    closed_form_misses.push(format!("(d={d},k={k},l={ell}) is {p}"));
                }
                cases += 1;
            }
        }
    }
    within(start, Duration::from_secs(10))?;
    check(closed_form_misses.is_empty(), || {
        format!(
            "{cases} cases match big-integer parity, but the closed form \"odd iff k odd and d = 2^a + l\" fails at {}",
            closed_form_misses.join(", ")
        )
    })?;
    Ok(format!("{cases} cases match big-integer parity and the closed form"))
}

fn ideal_oracles_agree() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for j in 1..=20u32 {
        for k in 1..=4usize {
            for d in 1..=6u32 {
                let fast = ideal_member(j as u64, k as u64, d as u64);
                let slow = ideal_member_by_expansion(j, k, d);
                check(fast == slow, || format!("j={j} k={k} d={d}: {fast} vs {slow}"))?;
                cases += 1;
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{cases} triples agree"))
}

const COUNT_CASES: [(u64, u64, u64); 8] = [
    (1, 2, 0),
    (2, 2, 0),
    (1, 3, 0),
    (2, 3, 0),
    (2, 2, 1),
    (2, 3, 1),
    (3, 2, 1),
    (3, 3, 1),
];

/// Intervals of uneven width and spacing, with non-integer midpoints.
fn irregular_family(d: usize, j: usize, ell: usize) -> IntervalFamily {
    let params: Vec<Rational> = (0..j as i64)
        .flat_map(|r| {
            let lo = int(ell as i64 + 1 + 3 * r) + ratio(r % 3, 5);
            let hi = lo.clone() + ratio(1, 2) + ratio(r % 2, 3);
            [lo, hi]
        })
        .collect();
    IntervalFamily::new(d, params, ell).unwrap()
}

fn count_law() -> Outcome {
    let start = Instant::now();
    let expected = [1u64, 3, 1, 15, 3, 6, 10, 105];
    for (&(d, k, ell), &want) in COUNT_CASES.iter().zip(&expected) {
        let j = ((d - ell) * k + ell) as usize;
        let closed = count_bisections(d, k, ell).map_err(|e| e.to_string())?;
        check(closed == want.into(), || format!("{d},{k},{ell}: closed form {closed}"))?;
        let families = [
            IntervalFamily::evenly_spaced(d as usize, j, ell as usize).unwrap(),
            irregular_family(d as usize, j, ell as usize),
        ];
        for family in &families {
            let e = enumerate_bisections(family, k as usize).map_err(|e| e.to_string())?;
            check(e.is_generic(), || format!("{d},{k},{ell}: {} rejected", e.rejected))?;
            check(e.arrangements.len() as u64 == want, || {
                format!("{d},{k},{ell}: enumerated {}", e.arrangements.len())
            })?;
            for a in &e.arrangements {
                check(verify_bisection(a, family), || format!("{d},{k},{ell}: {a:?} fails"))?;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("8 tuples, 2 families each".into())
}

fn parity_bridge() -> Outcome {
    for &(d, k, ell) in &COUNT_CASES {
        let count = count_bisections(d, k, ell).map_err(|e| e.to_string())?;
        let lemma = if ell == 0 {
            lemma_i_parity(d, k)
        } else {
            lemma_ii_parity(d, k, ell)
        }
        .map_err(|e| e.to_string())?;
        let from_count = if is_odd(&count) { Parity::Odd } else { Parity::Even };
        check(from_count == lemma, || format!("{d},{k},{ell}: count {count}, lemma {lemma}"))?;
    }
    Ok("count parity equals lemma parity on all 8 tuples".into())
}

fn frontier_reproduction() -> Outcome {
    for (k, golden) in [
        (2, include_str!("golden/frontier_k2_j40.csv")),
        (3, include_str!("golden/frontier_k3_j40.csv")),
    ] {
        let (code, out, err) = run_cli(&["lambda", "table", "--k", &k.to_string(), "--jmax", "40"]);
        check(code == 0, || format!("k={k}: exit {code}: {err}"))?;
        check(out == golden, || format!("k={k}: output differs from golden file"))?;
    }
    let table = hyperbisect::lambda::frontier_table(2, 40).map_err(|e| e.to_string())?;
    for r in &table.rows {
        let j = r.j;
        check(r.d_conjecture == j.div_ceil(2), || format!("j={j}: conjecture {}", r.d_conjecture))?;
        if j % 2 == 0 && (j / 2).is_power_of_two() {
            check(r.d_thm25i == Some(j / 2), || format!("j={j}: d_thm25i {:?}", r.d_thm25i))?;
        }
        if (j + 1).is_power_of_two() {
            check(r.d_thm1 == Some(j.div_ceil(2)), || format!("j={j}: d_thm1 {:?}", r.d_thm1))?;
        }
    }
    Ok("k=2 and k=3 tables byte-identical to golden files".into())
}

fn equivariance() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xe9);
    for case in 0..1000 {
        let d = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let j = rng.gen_range(1..=4);
        let measures: Vec<_> = (0..j)
            .map(|_| {
                let n = rng.gen_range(1..=25);
                random_measure(&mut rng, d, n)
            })
            .collect();
        let g = random_group_element(&mut rng, k);
        let dirs: Vec<Vec<f64>> = (0..k).map(|_| unit_vector(&mut rng, d + 1)).collect();

        let base = phi(&measures, &dirs).map_err(|e| e.to_string())?;
        let moved = phi(&measures, &g.act_on_directions(&dirs)).map_err(|e| e.to_string())?;
        let (_, expect) = act_on_target(&g, &vec![0.0; k], &base);
        for (a, b) in moved.iter().zip(&expect) {
            check((a - b).abs() <= 1e-12, || format!("case {case}: phi {a} vs {b}"))?;
        }

        let mut lambdas: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        if rng.gen_bool(0.3) {
            let zero = rng.gen_range(0..k);
            lambdas[zero] = 0.0;
        }
        let s: f64 = lambdas.iter().sum();
        if s == 0.0 {
            lambdas[0] = 1.0;
        }
        let s: f64 = lambdas.iter().sum();
        let lambdas: Vec<f64> = lambdas.iter().map(|l| l / s).collect();
        let point = JoinPoint::new(lambdas.clone(), dirs).map_err(|e| e.to_string())?;
        let p = psi(&measures, &point).map_err(|e| e.to_string())?;
        let moved = psi(&measures, &act_on_join(&g, &point).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let (w, v) = act_on_target(&g, &p.w_part, &p.v_part);
        for (a, b) in moved.w_part.iter().zip(&w).chain(moved.v_part.iter().zip(&v)) {
            check((a - b).abs() <= 1e-12, || format!("case {case}: psi {a} vs {b}"))?;
        }
        if lambdas.contains(&0.0) {
            check(p.v_part.iter().all(|&x| x == 0.0), || format!("case {case}: v_part {:?}", p.v_part))?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok("1000 random triples".into())
}

fn solver_at_desk_scale() -> Outcome {
    let mut successes = 0;
    let mut slowest = Duration::ZERO;
    let mut notes = Vec::new();
    for instance in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + instance);
        let measures = four_disks(&mut rng, 200);
        let config = SolverConfig {
            seed: instance,
            ..SolverConfig::default()
        };
        let start = Instant::now();
        let outcome = solve_bisection(&measures, 2, 2, &config).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        match outcome {
            SolveOutcome::Found(sol) => {
                // independent hard-sign recheck
                let values = phi(&measures, &sol.directions).map_err(|e| e.to_string())?;
                let imbalance = max_relative_imbalance(&measures, &values);
                if imbalance <= 1e-2 && took <= Duration::from_secs(10) {
                    successes += 1;
                } else {
                    notes.push(format!("#{instance}: imbalance {imbalance}, {took:.2?}"));
                }
            }
            SolveOutcome::NotFound {
                best_max_imbalance, ..
            } => notes.push(format!("#{instance}: not found, best {best_max_imbalance}")),
        }
    }
    check(successes >= 18, || format!("{successes}/20 succeeded; {}", notes.join("; ")))?;
    Ok(format!("{successes}/20 succeeded, slowest {slowest:.2?}"))
}

fn degenerate_rejection() -> Outcome {
    let v = verdict(1, 3, 2).map_err(|e| e.to_string())?;
    check(v.status == Status::NotIn, || format!("verdict {v}"))?;
    check(v.certificate == Certificate::MomentCurveNecessity, || format!("verdict {v}"))?;
    let (code, out, _) = run_cli(&["lambda", "check", "1", "3", "2", "--expect-in"]);
    check(code == 1 && out.contains("status=NOT_IN"), || format!("cli exit {code}: {out}"))?;

    let measures = interval_grids(&[(0.0, 1.0), (3.0, 4.0), (6.0, 7.0)], 100);
    let outcome = solve_bisection(&measures, 2, 1, &SolverConfig::default()).map_err(|e| e.to_string())?;
    match outcome {
        SolveOutcome::NotFound {
            best_max_imbalance, ..
        } => Ok(format!("NOT_IN verdict; solver NOT_FOUND (best imbalance {best_max_imbalance:.3})")),
        SolveOutcome::Found(s) => Err(format!("solver claims a solution: {s:?}")),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("power-of-two family outside the ideal", power_of_two_family),
        ("unanchored count parity, exhaustive", lemma_one_exhaustive),
        ("anchored count parity, exhaustive", lemma_two_exhaustive),
        ("ideal membership oracles agree", ideal_oracles_agree),
        ("moment-curve count law", count_law),
        ("parity bridge", parity_bridge),
        ("frontier tables", frontier_reproduction),
        ("test-map equivariance", equivariance),
        ("solver at desk scale", solver_at_desk_scale),
        ("degenerate family rejected", degenerate_rejection),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

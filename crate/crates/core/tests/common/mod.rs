#![allow(dead_code)]

use hyperbisect::testmap::{DiscreteMeasure, GroupElement, WeightedPoint};
use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    factorial(n) / (factorial(r) * factorial(n - r))
}

/// `(dk)! / (d!^k k!)` by direct big-integer arithmetic.
pub fn unordered_count(d: u64, k: u64) -> BigUint {
    let denom = (0..k).fold(BigUint::one(), |acc, _| acc * factorial(d)) * factorial(k);
    factorial(d * k) / denom
}

/// `C(j, d) * ((d-l)(k-1))! / ((d-l)!^(k-1) (k-1)!)` with `j = (d-l)k + l`.
pub fn anchored_count(d: u64, k: u64, ell: u64) -> BigUint {
    let free = d - ell;
    let j = free * k + ell;
    binomial(j, d) * unordered_count(free, k - 1)
}

pub fn is_odd(n: &BigUint) -> bool {
    n.bit(0)
}

pub fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn random_measure(rng: &mut ChaCha8Rng, d: usize, n: usize) -> DiscreteMeasure {
    let points = (0..n)
        .map(|_| WeightedPoint {
            x: (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect(),
            w: rng.gen_range(0.1..2.0),
        })
        .collect();
    DiscreteMeasure::new(points).unwrap()
}

pub fn random_group_element(rng: &mut ChaCha8Rng, k: usize) -> GroupElement {
    let signs = (0..k).map(|_| rng.gen_bool(0.5)).collect();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    GroupElement::new(signs, perm).unwrap()
}

/// `n` uniform samples from each of four pairwise disjoint unit disks.
pub fn four_disks(rng: &mut ChaCha8Rng, n: usize) -> Vec<DiscreteMeasure> {
    let mut centers: Vec<[f64; 2]> = Vec::new();
    while centers.len() < 4 {
        let c = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        if centers
            .iter()
            .all(|o| ((o[0] - c[0]).powi(2) + (o[1] - c[1]).powi(2)).sqrt() > 2.5)
        {
            centers.push(c);
        }
    }
    centers
        .iter()
        .map(|c| {
            let mut pts = Vec::with_capacity(n);
            while pts.len() < n {
                let (x, y): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if x * x + y * y <= 1.0 {
                    pts.push(vec![c[0] + x, c[1] + y]);
                }
            }
            DiscreteMeasure::uniform(pts).unwrap()
        })
        .collect()
}

/// Uniform grid of `n` points on each interval.
pub fn interval_grids(intervals: &[(f64, f64)], n: usize) -> Vec<DiscreteMeasure> {
    intervals
        .iter()
        .map(|&(a, b)| {
            DiscreteMeasure::uniform(
                (0..n)
                    .map(|i| vec![a + (b - a) * (i as f64 + 0.5) / n as f64])
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hyperbisect").chain(args.iter().copied());
    let code = hyperbisect::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

//! Numerical search for a `k`-element arrangement bisecting point-cloud measures.
//!
//! The hard objective (signed mass on either side) is piecewise constant in
//! the arrangement, so the search minimises a softened version,
//! `sum_i (sum_p w_p tanh(p_H(x_p) / T) / total_i)^2`, lowering `T` over a
//! few stages. Each stage is a Nelder-Mead run; every candidate is judged
//! by the exact imbalances from [`phi`], never by the softened value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::NelderMead;
use super::{max_relative_imbalance, normalize, phi, AffineHyperplane, DiscreteMeasure};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Accept when `max_i |phi_i| / total_i` is at most this.
    pub tolerance: f64,
    pub max_restarts: usize,
    pub seed: u64,
    /// Softening temperatures, as fractions of the data diameter.
    pub temperatures: Vec<f64>,
    pub max_evals_per_stage: usize,
    /// Hard-sign local search steps after the last stage; 0 disables it.
    pub polish_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-2,
            max_restarts: 32,
            seed: 0,
            temperatures: vec![1.0, 0.1, 0.01],
            max_evals_per_stage: 3000,
            polish_steps: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Unit vectors in `R^(d+1)`, one per hyperplane.
    pub directions: Vec<Vec<f64>>,
    pub hyperplanes: Vec<AffineHyperplane>,
    /// Signed `phi_i / total_i` per measure.
    pub imbalances: Vec<f64>,
    pub max_imbalance: f64,
    /// 1-based index of the successful restart.
    pub restarts_used: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveOutcome {
    Found(Solution),
    NotFound {
        restarts_used: usize,
        seed: u64,
        /// Smallest `max_i |phi_i| / total_i` seen over all restarts.
        best_max_imbalance: f64,
    },
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Found(s) => Some(s),
            SolveOutcome::NotFound { .. } => None,
        }
    }
}

/// Points of all measures, centred and scaled into the unit ball, with
/// weights divided by each measure's total.
struct Normalized {
    measures: Vec<Vec<(Vec<f64>, f64)>>,
    center: Vec<f64>,
    radius: f64,
}

impl Normalized {
    fn new(measures: &[DiscreteMeasure], d: usize) -> Self {
        let count: usize = measures.iter().map(|m| m.points().len()).sum();
        let mut center = vec![0.0; d];
        for p in measures.iter().flat_map(|m| m.points()) {
            for (c, x) in center.iter_mut().zip(&p.x) {
                *c += x / count as f64;
            }
        }
        let radius = measures
            .iter()
            .flat_map(|m| m.points())
            .map(|p| dist(&p.x, &center))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let scaled = measures
            .iter()
            .map(|m| {
                m.points()
                    .iter()
                    .map(|p| {
                        let x = p.x.iter().zip(&center).map(|(x, c)| (x - c) / radius).collect();
                        (x, p.w / m.total())
                    })
                    .collect()
            })
            .collect();
        Self {
            measures: scaled,
            center,
            radius,
        }
    }

    fn soft_objective(&self, theta: &[f64], d: usize, temperature: f64) -> f64 {
        let mut dirs: Vec<&[f64]> = Vec::new();
        let mut norms = Vec::new();
        for w in theta.chunks(d + 1) {
            let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-9 {
                return f64::INFINITY;
            }
            dirs.push(w);
            norms.push(n);
        }
        let mut total = 0.0;
        for m in &self.measures {
            let mut s = 0.0;
            for (x, w) in m {
                let mut p = 1.0;
                for (dir, n) in dirs.iter().zip(&norms) {
                    p *= (dir[..d].iter().zip(x).map(|(u, xi)| u * xi).sum::<f64>() + dir[d]) / n;
                }
                s += w * (p / temperature).tanh();
            }
            total += s * s;
        }
        total
    }

    /// Signed `phi_i / total_i` with hard signs, in normalized coordinates.
    fn hard_imbalances(&self, theta: &[f64], d: usize) -> Vec<f64> {
        self.measures
            .iter()
            .map(|m| {
                m.iter()
                    .map(|(x, w)| {
                        let sign = theta.chunks(d + 1).fold(1.0, |acc, dir| {
                            let v = dir[..d].iter().zip(x).map(|(u, xi)| u * xi).sum::<f64>() + dir[d];
                            acc * if v > 0.0 {
                                1.0
                            } else if v < 0.0 {
                                -1.0
                            } else {
                                0.0
                            }
                        });
                        w * sign
                    })
                    .sum()
            })
            .collect()
    }

    /// Directions for the original coordinates from normalized-space ones.
    fn denormalize(&self, theta: &[f64], d: usize) -> Vec<Vec<f64>> {
        theta
            .chunks(d + 1)
            .map(|w| {
                let u: Vec<f64> = w[..d].iter().map(|x| x / self.radius).collect();
                let c = w[d] - u.iter().zip(&self.center).map(|(a, b)| a * b).sum::<f64>();
                let mut out = u;
                out.push(c);
                normalize(&mut out);
                out
            })
            .collect()
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

struct Attempt {
    directions: Vec<Vec<f64>>,
    imbalances: Vec<f64>,
    max_imbalance: f64,
}

fn evaluate(measures: &[DiscreteMeasure], directions: Vec<Vec<f64>>) -> Option<Attempt> {
    let values = phi(measures, &directions).ok()?;
    let max_imbalance = max_relative_imbalance(measures, &values);
    let imbalances = values
        .iter()
        .zip(measures)
        .map(|(v, m)| v / m.total())
        .collect();
    Some(Attempt {
        directions,
        imbalances,
        max_imbalance,
    })
}

fn random_start(norm: &Normalized, k: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let pool: Vec<&Vec<f64>> = norm.measures.iter().flatten().map(|(x, _)| x).collect();
    let mut theta = Vec::with_capacity(k * (d + 1));
    for _ in 0..k {
        let normal = loop {
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 && n <= 1.0 {
                break v.into_iter().map(|x| x / n).collect::<Vec<_>>();
            }
        };
        let through = pool[rng.gen_range(0..pool.len())];
        let c = -normal.iter().zip(through).map(|(a, b)| a * b).sum::<f64>();
        let mut w = normal;
        w.push(c);
        normalize(&mut w);
        theta.extend(w);
    }
    theta
}

fn run_restart(
    measures: &[DiscreteMeasure],
    norm: &Normalized,
    k: usize,
    d: usize,
    config: &SolverConfig,
    index: usize,
) -> Option<Attempt> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let mut theta = random_start(norm, k, d, &mut rng);
    // normalized data lies in the unit ball
    let diameter = 2.0;
    let mut best: Option<(Attempt, Vec<f64>)> = None;
    for &t in &config.temperatures {
        let temperature = t * diameter;
        let nm = NelderMead {
            max_evals: config.max_evals_per_stage,
            f_tolerance: 1e-14,
            initial_step: 0.25 * t.sqrt().min(1.0),
        };
        let m = nm.minimize(|th| norm.soft_objective(th, d, temperature), &theta);
        theta = m.x;
        for w in theta.chunks_mut(d + 1) {
            normalize(w);
        }
        if let Some(a) = evaluate(measures, norm.denormalize(&theta, d)) {
            let done = a.max_imbalance <= config.tolerance;
            if best.as_ref().is_none_or(|(b, _)| a.max_imbalance < b.max_imbalance) {
                best = Some((a, theta.clone()));
            }
            if done {
                return best.map(|(a, _)| a);
            }
        }
    }
    let (attempt, theta) = best?;
    if config.polish_steps == 0 {
        return Some(attempt);
    }
    let polished = polish(norm, theta, d, config, &mut rng);
    match evaluate(measures, norm.denormalize(&polished, d)) {
        Some(p) if p.max_imbalance < attempt.max_imbalance => Some(p),
        _ => Some(attempt),
    }
}

/// Random local search on the hard-sign imbalances, accepting sideways
/// moves so it can drift across plateaus.
fn polish(
    norm: &Normalized,
    mut theta: Vec<f64>,
    d: usize,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let score = |th: &[f64]| {
        let s = norm.hard_imbalances(th, d);
        let max = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (max, s.iter().map(|v| v * v).sum::<f64>())
    };
    let mut current = score(&theta);
    let mut sigma = 0.02;
    let mut stale = 0;
    for _ in 0..config.polish_steps {
        if current.0 <= config.tolerance {
            break;
        }
        let mut cand: Vec<f64> = theta.iter().map(|x| x + sigma * rng.gen_range(-1.0..1.0)).collect();
        for w in cand.chunks_mut(d + 1) {
            normalize(w);
        }
        let s = score(&cand);
        if s.1 < current.1 {
            stale = 0;
        } else {
            stale += 1;
        }
        if s.1 <= current.1 {
            theta = cand;
            current = s;
        }
        if stale >= 100 {
            sigma *= 0.5;
            stale = 0;
        }
    }
    theta
}

const BATCH: usize = 8;

/// Searches for `k` hyperplanes in `R^d` bisecting every measure up to
/// `config.tolerance` relative imbalance.
///
/// Restarts run in parallel batches; the lowest-index successful restart
/// wins, so the result depends only on the inputs and the seed.
pub fn solve_bisection(
    measures: &[DiscreteMeasure],
    k: usize,
    d: usize,
    config: &SolverConfig,
) -> Result<SolveOutcome> {
    if measures.is_empty() || k == 0 || d == 0 {
        return Err(invalid("need at least one measure, k >= 1 and d >= 1"));
    }
    if measures.iter().any(|m| m.dim() != d) {
        return Err(invalid(format!("measures must live in R^{d}")));
    }
    if measures.iter().any(|m| !(m.total() > 0.0)) {
        return Err(invalid("measures must have positive total mass"));
    }
    if config.temperatures.is_empty() || config.temperatures.iter().any(|&t| !(t > 0.0)) {
        return Err(invalid("temperatures must be positive"));
    }
    if !(config.tolerance >= 0.0) {
        return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
    }

    let norm = Normalized::new(measures, d);
    let mut best_failure = f64::INFINITY;
    let mut start = 0;
    while start < config.max_restarts {
        let end = (start + BATCH).min(config.max_restarts);
        let attempts: Vec<Option<Attempt>> = (start..end)
            .into_par_iter()
            .map(|i| run_restart(measures, &norm, k, d, config, i))
            .collect();
        for (offset, attempt) in attempts.into_iter().enumerate() {
            let Some(a) = attempt else { continue };
            if a.max_imbalance <= config.tolerance {
                let hyperplanes = a
                    .directions
                    .iter()
                    .map(|w| match super::sphere_to_hyperplane(w) {
                        Ok(super::SphereHyperplane::Finite(h)) => Ok(h),
                        _ => Err(Error::Domain("solution direction left the sphere".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(SolveOutcome::Found(Solution {
                    directions: a.directions,
                    hyperplanes,
                    imbalances: a.imbalances,
                    max_imbalance: a.max_imbalance,
                    restarts_used: start + offset + 1,
                    seed: config.seed,
                }));
            }
            best_failure = best_failure.min(a.max_imbalance);
        }
        start = end;
    }
    Ok(SolveOutcome::NotFound {
        restarts_used: config.max_restarts,
        seed: config.seed,
        best_max_imbalance: best_failure,
    })
}

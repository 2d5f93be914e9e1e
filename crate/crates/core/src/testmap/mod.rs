//! Test maps for bisection by arrangements of oriented hyperplanes, for
//! measures given as weighted point clouds.
//!
//! An oriented affine hyperplane in `R^d` is a unit vector `w = (u, c)` in
//! `R^(d+1)` with functional `p(x) = <x, u> + c`; the poles `(0, ..., 0, ±1)`
//! are hyperplanes at infinity. The signed permutation group acts on
//! `k`-tuples of such vectors by flipping and reordering them.

mod nelder_mead;
mod solver;

pub use solver::{solve_bisection, Solution, SolveOutcome, SolverConfig};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::momentcurve::OrientedHyperplane;
use crate::rational::to_f64;

pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub x: Vec<f64>,
    pub w: f64,
}

/// Finite measure supported on finitely many weighted points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct DiscreteMeasure {
    points: Vec<WeightedPoint>,
    total: f64,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    points: Vec<WeightedPoint>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.points)
    }
}

impl From<DiscreteMeasure> for RawMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        RawMeasure { points: m.points }
    }
}

impl DiscreteMeasure {
    pub fn new(points: Vec<WeightedPoint>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(invalid("measure has no points"));
        };
        let d = first.x.len();
        if d == 0 {
            return Err(invalid("points must have at least one coordinate"));
        }
        for p in &points {
            if p.x.len() != d {
                return Err(invalid("points of one measure must share a dimension"));
            }
            if !(p.w > 0.0 && p.w.is_finite()) || p.x.iter().any(|c| !c.is_finite()) {
                return Err(invalid("weights must be positive and coordinates finite"));
            }
        }
        let total = points.iter().map(|p| p.w).sum();
        Ok(Self { points, total })
    }

    /// Unit weights.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(points.into_iter().map(|x| WeightedPoint { x, w: 1.0 }).collect())
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn dim(&self) -> usize {
        self.points[0].x.len()
    }
}

/// Measure file: `{"d": int, "measures": [{"points": [{"x": [..], "w": ..}]}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureInput {
    pub d: usize,
    pub measures: Vec<DiscreteMeasure>,
}

impl MeasureInput {
    pub fn from_json(text: &str) -> Result<Self> {
        let input: MeasureInput =
            serde_json::from_str(text).map_err(|e| Error::InputFormat(e.to_string()))?;
        if input.d == 0 || input.measures.is_empty() {
            return Err(Error::InputFormat("need d >= 1 and at least one measure".into()));
        }
        if let Some(m) = input.measures.iter().find(|m| m.dim() != input.d) {
            return Err(Error::InputFormat(format!(
                "measure of dimension {} in a d = {} file",
                m.dim(),
                input.d
            )));
        }
        Ok(input)
    }
}

/// Affine hyperplane with functional `p(x) = <x, normal> - offset`, in floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineHyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl AffineHyperplane {
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    /// Unit normal of the lifted linear hyperplane in `R^(d+1)`.
    pub fn to_sphere(&self) -> Vec<f64> {
        let mut w = self.normal.clone();
        w.push(-self.offset);
        normalize(&mut w);
        w
    }
}

impl From<&OrientedHyperplane> for AffineHyperplane {
    fn from(h: &OrientedHyperplane) -> Self {
        Self {
            normal: h.normal.iter().map(to_f64).collect(),
            offset: to_f64(&h.offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SphereHyperplane {
    Finite(AffineHyperplane),
    AtInfinity,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn normalize(w: &mut [f64]) {
    let n = norm(w);
    if n > 0.0 {
        w.iter_mut().for_each(|x| *x /= n);
    }
}

fn check_unit(w: &[f64]) -> Result<()> {
    if w.len() < 2 || (norm(w) - 1.0).abs() > UNIT_TOLERANCE {
        return Err(invalid(format!(
            "direction must be a unit vector in R^(d+1), d >= 1 (norm {})",
            norm(w)
        )));
    }
    Ok(())
}

/// Reads `w = (u, c)` as the hyperplane `<x, u> + c = 0`, keeping orientation.
pub fn sphere_to_hyperplane(w: &[f64]) -> Result<SphereHyperplane> {
    check_unit(w)?;
    let (u, c) = w.split_at(w.len() - 1);
    if u.iter().all(|&x| x == 0.0) {
        return Ok(SphereHyperplane::AtInfinity);
    }
    Ok(SphereHyperplane::Finite(AffineHyperplane {
        normal: u.to_vec(),
        offset: -c[0],
    }))
}

fn finite_hyperplanes(directions: &[Vec<f64>]) -> Result<Vec<AffineHyperplane>> {
    directions
        .iter()
        .map(|w| match sphere_to_hyperplane(w)? {
            SphereHyperplane::Finite(h) => Ok(h),
            SphereHyperplane::AtInfinity => Err(Error::Domain(
                "direction is a pole (hyperplane at infinity)".into(),
            )),
        })
        .collect()
}

/// Sign of `p_H(x)` as -1, 0 or 1.
fn product_sign(hs: &[AffineHyperplane], x: &[f64]) -> f64 {
    let mut s = 1.0;
    for h in hs {
        let v = h.eval(x);
        if v == 0.0 {
            return 0.0;
        }
        if v < 0.0 {
            s = -s;
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiEvaluation {
    /// `mu_i(p_H >= 0) - mu_i(p_H <= 0)` per measure.
    pub values: Vec<f64>,
    /// Mass lying exactly on the union of the arrangement, per measure.
    pub boundary_mass: Vec<f64>,
}

/// Signed imbalance of each measure across the arrangement given by `k` unit
/// vectors in `R^(d+1)`; zero for every measure exactly when it is bisected.
pub fn phi(measures: &[DiscreteMeasure], directions: &[Vec<f64>]) -> Result<Vec<f64>> {
    phi_with_diagnostics(measures, directions).map(|e| e.values)
}

pub fn phi_with_diagnostics(
    measures: &[DiscreteMeasure],
    directions: &[Vec<f64>],
) -> Result<PhiEvaluation> {
    let hs = finite_hyperplanes(directions)?;
    check_dims(measures, &hs)?;
    let mut values = Vec::with_capacity(measures.len());
    let mut boundary_mass = Vec::with_capacity(measures.len());
    for m in measures {
        let (mut v, mut b) = (0.0, 0.0);
        for p in &m.points {
            let s = product_sign(&hs, &p.x);
            if s == 0.0 {
                b += p.w;
            }
            v += p.w * s;
        }
        values.push(v);
        boundary_mass.push(b);
    }
    Ok(PhiEvaluation {
        values,
        boundary_mass,
    })
}

fn check_dims(measures: &[DiscreteMeasure], hs: &[AffineHyperplane]) -> Result<()> {
    if let Some(h) = hs.first() {
        let d = h.normal.len();
        if hs.iter().any(|h| h.normal.len() != d) || measures.iter().any(|m| m.dim() != d) {
            return Err(invalid("directions and measures disagree on the dimension"));
        }
    }
    Ok(())
}

/// `max_i |phi_i| / total_i`
pub fn max_relative_imbalance(measures: &[DiscreteMeasure], values: &[f64]) -> f64 {
    measures
        .iter()
        .zip(values)
        .map(|(m, v)| v.abs() / m.total())
        .fold(0.0, f64::max)
}

/// Point `lambda_1 w_1 + ... + lambda_k w_k` of the `k`-fold join of spheres.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinPoint {
    lambdas: Vec<f64>,
    directions: Vec<Vec<f64>>,
}

impl JoinPoint {
    pub fn new(lambdas: Vec<f64>, directions: Vec<Vec<f64>>) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != directions.len() {
            return Err(invalid("need one weight per direction, k >= 1"));
        }
        if lambdas.iter().any(|&l| !(l >= 0.0)) {
            return Err(invalid("join weights must be nonnegative"));
        }
        if (lambdas.iter().sum::<f64>() - 1.0).abs() > UNIT_TOLERANCE {
            return Err(invalid("join weights must sum to 1"));
        }
        for w in &directions {
            check_unit(w)?;
        }
        Ok(Self { lambdas, directions })
    }

    /// The barycentric point `(1/k) w_1 + ... + (1/k) w_k`.
    pub fn barycentric(directions: Vec<Vec<f64>>) -> Result<Self> {
        let k = directions.len();
        Self::new(vec![1.0 / k as f64; k], directions)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn k(&self) -> usize {
        self.lambdas.len()
    }
}

/// Element `(beta_1, ..., beta_k) ⋊ tau` of the signed permutation group.
/// `permutation[i]` is `tau(i)`, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    signs: Vec<bool>,
    permutation: Vec<usize>,
}

impl GroupElement {
    pub fn new(signs: Vec<bool>, permutation: Vec<usize>) -> Result<Self> {
        let k = signs.len();
        if permutation.len() != k {
            return Err(invalid("signs and permutation must have the same length"));
        }
        let mut seen = vec![false; k];
        for &t in &permutation {
            if t >= k || seen[t] {
                return Err(invalid("permutation is not a bijection"));
            }
            seen[t] = true;
        }
        Ok(Self { signs, permutation })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            signs: vec![false; k],
            permutation: (0..k).collect(),
        }
    }

    /// `epsilon_i`: flips the orientation of slot `i`.
    pub fn sign_flip(k: usize, i: usize) -> Self {
        let mut g = Self::identity(k);
        g.signs[i] = true;
        g
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut g = Self::identity(k);
        g.permutation.swap(a, b);
        g
    }

    pub fn k(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[bool] {
        &self.signs
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn inverse_permutation(&self) -> Vec<usize> {
        let mut inv = vec![0; self.k()];
        for (i, &t) in self.permutation.iter().enumerate() {
            inv[t] = i;
        }
        inv
    }

    /// `(-1)^(beta_1 + ... + beta_k)`
    pub fn character(&self) -> f64 {
        if self.signs.iter().filter(|&&b| b).count() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// New slot `q` holds `(-1)^beta_q` times the old entry `tau^-1(q)`.
    pub fn act_on_directions(&self, directions: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let inv = self.inverse_permutation();
        (0..self.k())
            .map(|q| {
                let w = &directions[inv[q]];
                if self.signs[q] {
                    w.iter().map(|x| -x).collect()
                } else {
                    w.clone()
                }
            })
            .collect()
    }

    fn permute<T: Clone>(&self, ys: &[T]) -> Vec<T> {
        let inv = self.inverse_permutation();
        (0..self.k()).map(|q| ys[inv[q]].clone()).collect()
    }
}

pub fn act_on_join(g: &GroupElement, point: &JoinPoint) -> Result<JoinPoint> {
    if g.k() != point.k() {
        return Err(invalid("group element and join point have different k"));
    }
    Ok(JoinPoint {
        lambdas: g.permute(&point.lambdas),
        directions: g.act_on_directions(&point.directions),
    })
}

/// Coordinates of the `W_k` part are permuted; every coordinate of the
/// measure part is multiplied by the sign character.
pub fn act_on_target(g: &GroupElement, w_part: &[f64], v_part: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let chi = g.character();
    (g.permute(w_part), v_part.iter().map(|v| chi * v).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiValue {
    pub w_part: Vec<f64>,
    pub v_part: Vec<f64>,
}

/// `(lambda_i - 1/k)_i ⊕ (lambda_1 ... lambda_k) * phi(w_1, ..., w_k)`.
///
/// On the face where some `lambda_i` vanishes the measure part is zero and
/// `phi` is never evaluated.
pub fn psi(measures: &[DiscreteMeasure], point: &JoinPoint) -> Result<PsiValue> {
    let k = point.k() as f64;
    let w_part = point.lambdas.iter().map(|l| l - 1.0 / k).collect();
    let prod: f64 = point.lambdas.iter().product();
    let v_part = if prod == 0.0 {
        vec![0.0; measures.len()]
    } else {
        phi(measures, &point.directions)?
            .into_iter()
            .map(|v| prod * v)
            .collect()
    };
    Ok(PsiValue { w_part, v_part })
}

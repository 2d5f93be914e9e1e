//! Exact constructions on the binomial moment curve
//! `t -> (C(t,1), C(t,2), ..., C(t,d))`.
//!
//! Measures here are uniform (in the curve parameter) on disjoint
//! parameter intervals. A hyperplane meets the curve in at most `d`
//! points, so an arrangement of `k` hyperplanes bisecting `j = dk`
//! intervals has to cut every interval exactly once, at its midpoint.
//! That turns bisecting arrangements into set partitions of the interval
//! midpoints, which this module enumerates, verifies and counts.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::rational::{self, int, Rational};
use crate::upoly::UPoly;

/// Point on the binomial moment curve at parameter `t`.
pub fn moment_point(t: &Rational, d: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(d);
    let mut c = Rational::one();
    for i in 0..d {
        c = c * (t - int(i as i64)) / int(i as i64 + 1);
        out.push(c.clone());
    }
    out
}

/// Oriented affine hyperplane `{x : <x, normal> = offset}` with functional
/// `p(x) = <x, normal> - offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedHyperplane {
    #[serde(with = "rational::serde_str_vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub offset: Rational,
}

impl OrientedHyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        if normal.is_empty() || normal.iter().all(Zero::is_zero) {
            return Err(invalid("hyperplane normal must be a nonzero vector"));
        }
        Ok(Self { normal, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.normal
            .iter()
            .zip(x)
            .fold(-self.offset.clone(), |acc, (u, xi)| acc + u * xi)
    }

    pub fn flip(&self) -> Self {
        Self {
            normal: self.normal.iter().map(|u| -u).collect(),
            offset: -self.offset.clone(),
        }
    }

    /// Representative of `{H(c u, c a) : c > 0}` ∪ `{H(-c u, -c a)}` with
    /// first nonzero normal coordinate equal to 1.
    pub fn canonical(&self) -> Self {
        let lead = self
            .normal
            .iter()
            .find(|u| !u.is_zero())
            .expect("nonzero normal")
            .clone();
        Self {
            normal: self.normal.iter().map(|u| u / &lead).collect(),
            offset: &self.offset / &lead,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.normal.iter().find(|u| !u.is_zero()).is_some_and(One::is_one)
    }

    /// Same point set, either orientation.
    pub fn same_hyperplane(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.canonical() == other.canonical()
    }

    /// The functional pulled back along the moment curve: a polynomial in
    /// `t` of degree at most `d`.
    pub fn restrict_to_curve(&self) -> UPoly {
        let mut q = UPoly::constant(-self.offset.clone());
        let mut basis = UPoly::constant(Rational::one());
        for (i, u) in self.normal.iter().enumerate() {
            // basis = C(t, i + 1)
            basis = basis
                .mul(&UPoly::linear_root(&int(i as i64)))
                .scale(&(Rational::one() / int(i as i64 + 1)));
            q = q.add(&basis.scale(u));
        }
        q
    }
}

impl PartialOrd for OrientedHyperplane {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrientedHyperplane {
    fn cmp(&self, other: &Self) -> Ordering {
        self.normal
            .cmp(&other.normal)
            .then_with(|| self.offset.cmp(&other.offset))
    }
}

/// Ordered tuple of oriented hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Arrangement {
    pub hyperplanes: Vec<OrientedHyperplane>,
}

impl Arrangement {
    pub fn new(hyperplanes: Vec<OrientedHyperplane>) -> Self {
        Self { hyperplanes }
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// No two members coincide, in either orientation.
    pub fn is_essential(&self) -> bool {
        let canon: Vec<_> = self.hyperplanes.iter().map(|h| h.canonical()).collect();
        (0..canon.len()).all(|r| (r + 1..canon.len()).all(|s| canon[r] != canon[s]))
    }

    /// Canonical orientation of every member, members sorted.
    pub fn canonical(&self) -> Self {
        let mut hs: Vec<_> = self.hyperplanes.iter().map(|h| h.canonical()).collect();
        hs.sort();
        Self { hyperplanes: hs }
    }

    /// `p_H(alpha(t)) = prod_i p_i(alpha(t))`.
    pub fn restrict_to_curve(&self) -> UPoly {
        self.hyperplanes
            .iter()
            .fold(UPoly::constant(Rational::one()), |acc, h| {
                acc.mul(&h.restrict_to_curve())
            })
    }
}

/// `j` disjoint parameter intervals on the moment curve in `R^d`, plus
/// `anchor_count` anchor points at parameters `0, 1, ..., anchor_count - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalFamily {
    d: usize,
    parameters: Vec<Rational>,
    anchor_count: usize,
}

impl IntervalFamily {
    pub fn new(d: usize, parameters: Vec<Rational>, anchor_count: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if parameters.is_empty() || parameters.len() % 2 != 0 {
            return Err(invalid(format!(
                "need an even, nonzero number of interval endpoints, got {}",
                parameters.len()
            )));
        }
        if parameters.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("interval endpoints must be strictly increasing"));
        }
        if anchor_count > 0 && parameters[0] <= int(anchor_count as i64 - 1) {
            return Err(invalid(format!(
                "anchors at 0..{} must precede the first interval",
                anchor_count - 1
            )));
        }
        Ok(Self {
            d,
            parameters,
            anchor_count,
        })
    }

    /// Intervals `[n + 1 + 3r, n + 2 + 3r]` after the `n` anchors.
    pub fn evenly_spaced(d: usize, j: usize, anchor_count: usize) -> Result<Self> {
        let start = anchor_count as i64 + 1;
        let params = (0..j as i64)
            .flat_map(|r| [int(start + 3 * r), int(start + 3 * r + 1)])
            .collect();
        Self::new(d, params, anchor_count)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn j(&self) -> usize {
        self.parameters.len() / 2
    }

    pub fn anchor_count(&self) -> usize {
        self.anchor_count
    }

    pub fn parameters(&self) -> &[Rational] {
        &self.parameters
    }

    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.parameters.chunks(2).map(|c| (&c[0], &c[1]))
    }

    pub fn midpoints(&self) -> Vec<Rational> {
        self.intervals()
            .map(|(lo, hi)| (lo + hi) / int(2))
            .collect()
    }

    pub fn anchors(&self) -> Vec<Rational> {
        (0..self.anchor_count as i64).map(int).collect()
    }
}

/// Solves for the hyperplane through `d` affinely independent points of `R^d`.
pub fn hyperplane_through(points: &[Vec<Rational>]) -> Result<OrientedHyperplane> {
    let d = points.len();
    if d == 0 {
        return Err(invalid("need at least one point"));
    }
    if points.iter().any(|p| p.len() != d) {
        return Err(invalid(format!("need {d} points in R^{d}")));
    }
    // Rows [x_i | -1] against unknowns (u, a): <x_i, u> - a = 0.
    let mut rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(-Rational::one());
            r
        })
        .collect();
    let null = nullspace_vector(&mut rows, d + 1)
        .ok_or_else(|| Error::Degenerate("points are affinely dependent".into()))?;
    let (normal, offset) = (null[..d].to_vec(), null[d].clone());
    OrientedHyperplane::new(normal, offset)
        .map(|h| h.canonical())
        .map_err(|_| Error::Degenerate("points are affinely dependent".into()))
}

/// A basis vector of the kernel when it is one-dimensional, else `None`.
fn nullspace_vector(rows: &mut [Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for cc in 0..cols {
                    let delta = &f * &rows[r][cc];
                    rows[i][cc] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[row][free].clone();
    }
    Some(v)
}

/// Whether `t -> p(alpha(t))` vanishes at every given parameter and at no
/// other real point.
pub fn curve_roots_check(h: &OrientedHyperplane, params: &[Rational]) -> bool {
    let q = h.restrict_to_curve();
    if q.is_zero() {
        return false;
    }
    let (mut quot, rem) = q.div_rem(&UPoly::from_roots(params));
    if !rem.is_zero() {
        return false;
    }
    // Extra multiplicity at a listed root is allowed; anything else is not.
    for t in params {
        while quot.eval(t).is_zero() {
            quot = quot.div_rem(&UPoly::linear_root(t)).0;
        }
    }
    quot.count_real_roots() == 0
}

/// Exact check that every interval's mass is split in half: on each interval
/// the product polynomial has exactly one root, a simple one, at the midpoint.
pub fn verify_bisection(arr: &Arrangement, family: &IntervalFamily) -> bool {
    if arr.is_empty() || arr.hyperplanes.iter().any(|h| h.dim() != family.d()) {
        return false;
    }
    let p = arr.restrict_to_curve();
    if p.is_zero() {
        return false;
    }
    let sturm = p.sturm();
    family.intervals().all(|(lo, hi)| {
        let mid = (lo + hi) / int(2);
        p.root_multiplicity(&mid) == 1 && sturm.count_in_open(lo, hi) == 1
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// Verified arrangements, canonical and sorted.
    pub arrangements: Vec<Arrangement>,
    pub candidates: usize,
    /// Candidates that failed construction or verification; nonzero means
    /// the family is not generic.
    pub rejected: usize,
}

impl Enumeration {
    pub fn is_generic(&self) -> bool {
        self.rejected == 0
    }
}

/// Every bisecting arrangement built from partitions of the midpoints.
///
/// Without anchors (`j == d k`) each hyperplane passes through `d`
/// midpoints. With `l` anchors (`j == (d - l) k + l`) one hyperplane takes
/// `d` midpoints and the other `k - 1` take `d - l` midpoints each plus
/// every anchor.
pub fn enumerate_bisections(family: &IntervalFamily, k: usize) -> Result<Enumeration> {
    let d = family.d();
    let j = family.j();
    let ell = family.anchor_count();
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    let blocks: Vec<Vec<Vec<usize>>> = if ell == 0 {
        if j != d * k {
            return Err(invalid(format!("need j == d k, got j={j}, d={d}, k={k}")));
        }
        set_partitions(&(0..j).collect::<Vec<_>>(), d)
    } else {
        if ell >= d || k < 2 {
            return Err(invalid(format!(
                "anchored case needs 1 <= ell <= d - 1 and k >= 2, got ell={ell}, d={d}, k={k}"
            )));
        }
        if j != (d - ell) * k + ell {
            return Err(invalid(format!(
                "need j == (d - ell) k + ell, got j={j}, d={d}, k={k}, ell={ell}"
            )));
        }
        let all: Vec<usize> = (0..j).collect();
        let mut out = Vec::new();
        for free in combinations(&all, d) {
            let rest: Vec<usize> = all.iter().copied().filter(|i| !free.contains(i)).collect();
            for mut part in set_partitions(&rest, d - ell) {
                part.push(free.clone());
                out.push(part);
            }
        }
        out
    };

    let mids = family.midpoints();
    let anchors: Vec<Vec<Rational>> = family.anchors().iter().map(|t| moment_point(t, d)).collect();
    let candidates = blocks.len();
    let verified: Vec<Option<Arrangement>> = blocks
        .par_iter()
        .map(|partition| {
            let hs = partition
                .iter()
                .map(|block| {
                    let mut pts: Vec<Vec<Rational>> =
                        block.iter().map(|&i| moment_point(&mids[i], d)).collect();
                    if block.len() < d {
                        pts.extend(anchors.iter().cloned());
                    }
                    hyperplane_through(&pts)
                })
                .collect::<Result<Vec<_>>>()
                .ok()?;
            let arr = Arrangement::new(hs).canonical();
            (arr.is_essential() && verify_bisection(&arr, family)).then_some(arr)
        })
        .collect();
    let mut arrangements: Vec<Arrangement> = verified.into_iter().flatten().collect();
    arrangements.sort();
    let rejected = candidates - arrangements.len();
    Ok(Enumeration {
        arrangements,
        candidates,
        rejected,
    })
}

/// Unordered partitions of `items` into blocks of `size` (`items.len()` a
/// multiple of `size`). Each block lists items in input order.
fn set_partitions(items: &[usize], size: usize) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    if size == 0 || items.len() % size != 0 {
        return Vec::new();
    }
    let first = items[0];
    let mut out = Vec::new();
    for mut block in combinations(&items[1..], size - 1) {
        block.insert(0, first);
        let rest: Vec<usize> = items[1..]
            .iter()
            .copied()
            .filter(|i| !block.contains(i))
            .collect();
        for mut tail in set_partitions(&rest, size) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if items.len() < r {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], r - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `(1/m!) * C(s m; s, ..., s)`
fn unordered_blocks(s: u64, m: u64) -> BigUint {
    factorial(s * m) / (factorial(m) * num_traits::pow(factorial(s), m as usize))
}

/// Closed-form number of unordered, orientation-free bisecting arrangements:
/// `(1/k!) C(dk; d, ..., d)` without anchors, and
/// `C((d-l)k + l; d) (1/(k-1)!) C((d-l)(k-1); d-l, ..., d-l)` with `l` anchors.
pub fn count_bisections(d: u64, k: u64, ell: u64) -> Result<BigUint> {
    if d == 0 || k == 0 {
        return Err(invalid("d and k must be positive"));
    }
    if ell == 0 {
        return Ok(unordered_blocks(d, k));
    }
    if ell >= d || k < 2 {
        return Err(invalid(format!(
            "anchored count needs 1 <= ell <= d - 1 and k >= 2, got d={d}, k={k}, ell={ell}"
        )));
    }
    let free = d - ell;
    let j = free * k + ell;
    let choose = factorial(j) / (factorial(d) * factorial(j - d));
    Ok(choose * unordered_blocks(free, k - 1))
}

/// Sign of the product functional at a parameter value, for quick checks.
pub fn sign_on_curve(arr: &Arrangement, t: &Rational) -> Ordering {
    let v = arr.restrict_to_curve().eval(t);
    if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

//! Polynomials over F2 in `k` variables, reduced modulo `<t_1^cap, ..., t_k^cap>`.

use std::collections::{BTreeSet, HashSet};

/// A polynomial over F2 whose monomials all have exponents below `cap`.
///
/// Coefficients live in {0, 1}, so the polynomial is just its support and
/// addition is symmetric difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Poly {
    num_vars: usize,
    cap: u32,
    monomials: BTreeSet<Vec<u32>>,
}

impl F2Poly {
    pub fn zero(num_vars: usize, cap: u32) -> Self {
        assert!(num_vars >= 1 && cap >= 1);
        Self {
            num_vars,
            cap,
            monomials: BTreeSet::new(),
        }
    }

    pub fn one(num_vars: usize, cap: u32) -> Self {
        let mut p = Self::zero(num_vars, cap);
        p.monomials.insert(vec![0; num_vars]);
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, exponents: &[u32]) -> bool {
        self.monomials.contains(exponents)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &[u32]> {
        self.monomials.iter().map(Vec::as_slice)
    }

    /// Adds a monomial (F2 addition, so an existing one cancels).
    /// Monomials with an exponent at or above the cap are the zero class.
    pub fn toggle(&mut self, exponents: Vec<u32>) {
        assert_eq!(exponents.len(), self.num_vars);
        if exponents.iter().any(|&e| e >= self.cap) {
            return;
        }
        if !self.monomials.remove(&exponents) {
            self.monomials.insert(exponents);
        }
    }

    /// Multiplies by `t_1 + ... + t_k`.
    pub fn mul_by_variable_sum(&self) -> Self {
        let mut out = Self::zero(self.num_vars, self.cap);
        for m in &self.monomials {
            for i in 0..self.num_vars {
                if m[i] + 1 >= self.cap {
                    continue;
                }
                let mut shifted = m.clone();
                shifted[i] += 1;
                out.toggle(shifted);
            }
        }
        out
    }
}

/// `(t_1 + ... + t_k)^j` modulo `<t_1^(d+1), ..., t_k^(d+1)>`, by `j`
/// truncated multiplications.
pub fn truncated_power_of_sum(j: u32, k: usize, d: u32) -> F2Poly {
    assert!(k >= 1 && d >= 1);
    let mut p = F2Poly::one(k, d + 1);
    for _ in 0..j {
        p = p.mul_by_variable_sum();
        if p.is_zero() {
            break;
        }
    }
    p
}

/// Whether `(t_1 + ... + t_k)^j` lies in `<t_1^(d+1), ..., t_k^(d+1)>`.
///
/// Decided by searching for a carry-free composition of `j` into `k` parts
/// each at most `d`: a surviving monomial exists exactly when one does.
pub fn ideal_member(j: u64, k: u64, d: u64) -> bool {
    carry_free_composition(j, k, d).is_none()
}

/// Same predicate as [`ideal_member`], by full truncated expansion.
pub fn ideal_member_by_expansion(j: u32, k: usize, d: u32) -> bool {
    truncated_power_of_sum(j, k, d).is_zero()
}

/// Finds parts `a_1 >= ... >= a_k` (some possibly zero) with pairwise
/// disjoint binary supports, `sum a_i == j` and every `a_i <= d`.
pub fn carry_free_composition(j: u64, k: u64, d: u64) -> Option<Vec<u64>> {
    if k == 0 {
        return if j == 0 { Some(Vec::new()) } else { None };
    }
    if j > d.saturating_mul(k) {
        return None;
    }
    let bits: Vec<u64> = (0..64)
        .rev()
        .map(|b| 1u64 << b)
        .filter(|&bit| j & bit != 0)
        .collect();
    if bits.first().is_some_and(|&top| top > d) {
        return None;
    }
    // Parts beyond the number of set bits are always zero.
    let used = bits.len().min(k as usize);
    let mut parts = vec![0u64; used];
    let mut failed = HashSet::new();
    if place_bits(&bits, 0, &mut parts, d, &mut failed) {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts.resize(k as usize, 0);
        Some(parts)
    } else {
        None
    }
}

fn place_bits(
    bits: &[u64],
    idx: usize,
    parts: &mut [u64],
    d: u64,
    failed: &mut HashSet<(usize, Vec<u64>)>,
) -> bool {
    if idx == bits.len() {
        return true;
    }
    let mut key = parts.to_vec();
    key.sort_unstable();
    let key = (idx, key);
    if failed.contains(&key) {
        return false;
    }
    let bit = bits[idx];
    let mut tried = Vec::with_capacity(parts.len());
    for i in 0..parts.len() {
        // Parts with equal load are interchangeable.
        if parts[i] + bit > d || tried.contains(&parts[i]) {
            continue;
        }
        tried.push(parts[i]);
        parts[i] += bit;
        if place_bits(bits, idx + 1, parts, d, failed) {
            return true;
        }
        parts[i] -= bit;
    }
    failed.insert(key);
    false
}

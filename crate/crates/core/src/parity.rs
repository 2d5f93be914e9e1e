//! p-adic valuations of factorials and the parity of the multinomial
//! quantities that decide the explicit bisection criteria.
//!
//! Everything here works with valuations in machine words; the
//! corresponding big-integer values are only ever computed in tests.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    fn from_valuation(v: u64) -> Self {
        if v == 0 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Odd => f.write_str("odd"),
            Parity::Even => f.write_str("even"),
        }
    }
}

/// Valuation data of `n!` at a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicProfile {
    pub n: u64,
    pub p: u64,
    /// Exponent of `p` in `n!`.
    pub valuation: u64,
    /// Sum of the base-`p` digits of `n`.
    pub digit_sum: u64,
}

impl PadicProfile {
    pub fn new(n: u64, p: u64) -> Result<Self> {
        check_prime(p)?;
        let digit_sum = digit_sum(n, p);
        let valuation = (n - digit_sum) / (p - 1);
        Ok(Self {
            n,
            p,
            valuation,
            digit_sum,
        })
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(invalid(format!("{p} is not prime")))
    }
}

fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// Floor-sum form: sum over i >= 1 of floor(n / p^i).
fn valuation_floor_sum(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Exponent of the prime `p` in `n!`.
///
/// Computed both as a floor sum and from the base-`p` digit sum; the two
/// forms are identical for every input.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    let profile = PadicProfile::new(n, p)?;
    let floor_sum = valuation_floor_sum(n, p);
    debug_assert_eq!(floor_sum, profile.valuation);
    Ok(floor_sum)
}

/// Both forms of the valuation, for callers that want to compare them.
pub fn legendre_valuation_forms(n: u64, p: u64) -> Result<(u64, u64)> {
    let profile = PadicProfile::new(n, p)?;
    Ok((valuation_floor_sum(n, p), profile.valuation))
}

fn e2(n: u64) -> u64 {
    valuation_floor_sum(n, 2)
}

/// Parity of the multinomial coefficient `n! / (k_1! ... k_t!)`.
pub fn multinomial_parity(n: u64, parts: &[u64]) -> Result<Parity> {
    let sum: u64 = parts.iter().sum();
    if sum != n {
        return Err(invalid(format!(
            "parts sum to {sum}, expected {n}"
        )));
    }
    let v = e2(n) - parts.iter().map(|&k| e2(k)).sum::<u64>();
    let parity = Parity::from_valuation(v);
    debug_assert_eq!(parity.is_odd(), is_carry_free(n, parts));
    Ok(parity)
}

/// Kummer's criterion: the parts are pairwise bitwise disjoint and their
/// union is `n`.
pub fn is_carry_free(n: u64, parts: &[u64]) -> bool {
    let mut seen = 0u64;
    for &k in parts {
        if seen & k != 0 {
            return false;
        }
        seen |= k;
    }
    seen == n
}

fn check_k(k: u64) -> Result<()> {
    if k < 2 {
        return Err(invalid(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

/// 2-adic valuation of `(1/k!) * C(dk; d, ..., d)`.
pub fn unordered_partition_valuation(d: u64, k: u64) -> u64 {
    e2(d * k) - e2(k) - k * e2(d)
}

/// Parity of `(1/k!) * C(dk; d, ..., d)`, the number of ways to split
/// `dk` labelled points into `k` unlabelled blocks of size `d`.
pub fn lemma_i_parity(d: u64, k: u64) -> Result<Parity> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    check_k(k)?;
    let parity = Parity::from_valuation(unordered_partition_valuation(d, k));
    debug_assert_eq!(parity.is_odd(), d.is_power_of_two());
    Ok(parity)
}

/// Closed form of [`lemma_i_parity`]: odd iff `d` is a power of two.
pub fn lemma_i_closed_form(d: u64) -> Parity {
    if d.is_power_of_two() {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// 2-adic valuation of
/// `C((d-l)k + l; d) * (1/(k-1)!) * C((d-l)(k-1); d-l, ..., d-l)`.
pub fn anchored_count_valuation(d: u64, k: u64, ell: u64) -> u64 {
    let free = d - ell;
    let j = free * k + ell;
    let binom = e2(j) - e2(d) - e2(j - d);
    binom + unordered_partition_valuation_k1(free, k - 1)
}

// (1/m!) C(free*m; free, ..., free), also valid for m = 1.
fn unordered_partition_valuation_k1(free: u64, m: u64) -> u64 {
    e2(free * m) - e2(m) - m * e2(free)
}

/// Parity of the anchored count for `1 <= ell <= d - 1`.
pub fn lemma_ii_parity(d: u64, k: u64, ell: u64) -> Result<Parity> {
    check_k(k)?;
    if ell == 0 || ell >= d {
        return Err(invalid(format!(
            "ell must satisfy 1 <= ell <= d - 1, got ell={ell}, d={d}"
        )));
    }
    Ok(Parity::from_valuation(anchored_count_valuation(d, k, ell)))
}

/// The stated closed form for the anchored parity, defined when
/// `2 <= 2 ell <= d - 1`: odd iff `k` is odd and `d = 2^a + ell` with `a >= 1`.
///
/// It matches [`lemma_ii_parity`] for every `k >= 3`. For `k = 2` the
/// second factor of the count is 1, the count is `C(2d - ell, d)`, and the
/// two disagree, e.g. at `(d, ell) = (4, 1)` where `C(7, 4) = 35` is odd.
pub fn lemma_ii_closed_form(d: u64, k: u64, ell: u64) -> Option<Parity> {
    if ell == 0 || 2 * ell > d.saturating_sub(1) {
        return None;
    }
    let free = d - ell;
    let odd = k % 2 == 1 && free >= 2 && free.is_power_of_two();
    Some(if odd { Parity::Odd } else { Parity::Even })
}

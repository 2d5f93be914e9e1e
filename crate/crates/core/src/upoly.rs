//! Dense univariate polynomials with rational coefficients, and exact real
//! root counting via Sturm sequences.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::rational::{int, Rational};

/// Coefficients in increasing degree; no trailing zeros (zero is `[]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `t - root`
    pub fn linear_root(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        roots
            .into_iter()
            .fold(Self::constant(Rational::one()), |acc, r| acc.mul(&Self::linear_root(r)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let c = &rem[shift + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * b;
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (same real roots, all simple).
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Multiplicity of `root` as a root (0 when it is not a root).
    /// Panics on the zero polynomial.
    pub fn root_multiplicity(&self, root: &Rational) -> usize {
        assert!(!self.is_zero(), "zero polynomial has every root");
        let lin = Self::linear_root(root);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(r.neg());
        }
        chain.pop();
        chain
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    /// Panics on the zero polynomial.
    pub fn count_roots_in_open(&self, lo: &Rational, hi: &Rational) -> usize {
        self.sturm().count_in_open(lo, hi)
    }

    /// Sturm sequence of the square-free part, for repeated interval queries.
    /// Panics on the zero polynomial.
    pub fn sturm(&self) -> SturmSequence {
        assert!(!self.is_zero());
        SturmSequence {
            chain: self.square_free().sturm_chain(),
        }
    }

    /// Number of distinct real roots. Panics on the zero polynomial.
    pub fn count_real_roots(&self) -> usize {
        assert!(!self.is_zero());
        let chain = self.square_free().sturm_chain();
        let at_infinity = |negative: bool| {
            sign_changes(chain.iter().map(|q| {
                let lead = q.leading().unwrap();
                let odd = q.degree().unwrap() % 2 == 1;
                let s = if lead.is_positive() { Ordering::Greater } else { Ordering::Less };
                if negative && odd {
                    s.reverse()
                } else {
                    s
                }
            }))
        };
        at_infinity(true) - at_infinity(false)
    }
}

pub struct SturmSequence {
    chain: Vec<UPoly>,
}

impl SturmSequence {
    fn changes_at(&self, x: &Rational) -> usize {
        sign_changes(self.chain.iter().map(|q| q.eval(x).cmp(&Rational::zero())))
    }

    /// Distinct roots in `(lo, hi)`. The chain counts roots in `(lo, hi]`,
    /// so a root at `hi` is taken back off.
    pub fn count_in_open(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        let at_hi = usize::from(self.chain[0].eval(hi).is_zero());
        self.changes_at(lo) - self.changes_at(hi) - at_hi
    }
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

//! Partitions, the σ-monomial basis of `B_n`-invariant polynomials, and the
//! signed-permutation action.
//!
//! Every `B_n`-invariant polynomial is a polynomial in
//! `σ_r = e_r(x_1², …, x_n²)`, `r = 1..=n`. A partition `λ ⊢ q` with parts
//! at most `n` names the degree-`2q` monomial `σ_{λ_1} ⋯ σ_{λ_k}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Evaluate;

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    /// The empty partition of zero.
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Polynomial degree of the associated σ-monomial.
    pub fn degree(&self) -> u32 {
        2 * self.weight()
    }

    /// Renders the σ-monomial, e.g. `(2,1,1)` as `s2*s1^2`.
    pub fn monomial(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let part = self.0[i];
            let run = self.0[i..].iter().take_while(|&&p| p == part).count();
            if run == 1 {
                out.push(format!("s{part}"));
            } else {
                out.push(format!("s{part}^{run}"));
            }
            i += run;
        }
        out.join("*")
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `q` with every part at most `max_part`, in decreasing
/// lexicographic order. `q = 0` yields the single empty partition.
pub fn partitions_of(q: u32, max_part: u32) -> Vec<Partition> {
    fn fill(rest: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=cap.min(rest)).rev() {
            prefix.push(part);
            fill(rest - part, part, prefix, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    if max_part == 0 {
        if q == 0 {
            out.push(Partition::empty());
        }
        return out;
    }
    fill(q, max_part, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions of `q` with parts at most `max_part`, read off the
/// truncated Euler product `∏_{k ≤ max_part} 1/(1 − x^k)`.
pub fn partition_count_bounded(q: u32, max_part: u32) -> Result<u64> {
    let q = q as usize;
    let mut coeffs = vec![0u64; q + 1];
    coeffs[0] = 1;
    for k in 1..=(max_part as usize).min(q) {
        for i in k..=q {
            coeffs[i] = coeffs[i]
                .checked_add(coeffs[i - k])
                .ok_or(Error::Overflow("partition count"))?;
        }
    }
    Ok(coeffs[q])
}

/// `p(q)`, the number of unrestricted partitions of `q`.
pub fn partition_count(q: u32) -> Result<u64> {
    partition_count_bounded(q, q)
}

/// The σ-monomial basis of homogeneous invariants of degree `d` in `n`
/// variables.
pub fn basis_for_degree(d: u32, n: usize) -> Result<Vec<Partition>> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let cap = u32::try_from(n).unwrap_or(u32::MAX);
    Ok(partitions_of(d / 2, cap))
}

/// All of `σ_0 = 1, σ_1, …, σ_n` at `x`, from the coefficients of
/// `∏ (1 + t x_i²)`.
pub fn sigma_all(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, xi) in x.iter().enumerate() {
        let sq = xi * xi;
        for k in (1..=i + 1).rev() {
            e[k] += sq * e[k - 1];
        }
    }
    e
}

/// `σ_r(x) = e_r(x_1², …, x_n²)` for `1 ≤ r ≤ n`.
pub fn sigma_eval(r: usize, x: &[f64]) -> Result<f64> {
    let n = x.len();
    if r == 0 || r > n {
        return Err(Error::SigmaIndex { r, n });
    }
    Ok(sigma_all(x)[r])
}

/// A linear combination of σ-monomials plus a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantPolynomial {
    n: usize,
    terms: BTreeMap<Partition, f64>,
    constant: f64,
}

impl InvariantPolynomial {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Self {
            n,
            terms: BTreeMap::new(),
            constant: 0.0,
        })
    }

    /// Adds `coeff · σ_λ`. Parts larger than `n` are rejected; the empty
    /// partition adds to the constant.
    pub fn with_term(mut self, partition: Partition, coeff: f64) -> Result<Self> {
        if let Some(&part) = partition.parts().iter().find(|&&p| p as usize > self.n) {
            return Err(Error::PartExceedsDimension { part, n: self.n });
        }
        if partition.is_empty() {
            self.constant += coeff;
        } else {
            *self.terms.entry(partition).or_insert(0.0) += coeff;
        }
        Ok(self)
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    /// `A σ2 + B σ1² + C σ1 + D`.
    pub fn quartic(n: usize, a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let mut p = Self::new(n)?;
        if a != 0.0 {
            p = p.with_term(Partition(vec![2]), a)?;
        }
        p.with_term(Partition(vec![1, 1]), b)?
            .with_term(Partition(vec![1]), c)
            .map(|p| p.with_constant(d))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Partition, f64> {
        &self.terms
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn coefficient(&self, partition: &Partition) -> f64 {
        if partition.is_empty() {
            self.constant
        } else {
            self.terms.get(partition).copied().unwrap_or(0.0)
        }
    }

    /// Highest degree among terms with non-zero coefficient.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(_, &c)| c != 0.0)
            .map(|(p, _)| p.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let sigma = sigma_all(x);
        self.terms
            .iter()
            .map(|(p, c)| c * p.parts().iter().map(|&r| sigma[r as usize]).product::<f64>())
            .sum::<f64>()
            + self.constant
    }
}

impl Evaluate for InvariantPolynomial {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval_unchecked(x)
    }
}

/// An element of `B_n` acting by `y[perm[i]] = signs[i] · x[i]`, i.e. the
/// monomial matrix with entry `signs[i]` at row `perm[i]`, column `i`.
/// Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(format!("not a permutation: {perm:?}")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!("signs must be ±1: {signs:?}")));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// `-I`.
    pub fn negation(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![-1; n],
        }
    }

    /// Simple reflection `k` of the fundamental chamber
    /// `x_0 ≥ x_1 ≥ … ≥ x_{n-1} ≥ 0`: for `k < n - 1` the swap of `x_k` and
    /// `x_{k+1}`, for `k = n - 1` the sign change of `x_{n-1}`.
    pub fn simple_reflection(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidArgument(format!("no simple reflection {k} for n = {n}")));
        }
        let mut g = Self::identity(n);
        if k + 1 < n {
            g.perm.swap(k, k + 1);
        } else {
            g.signs[k] = -1;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: x.len(),
            });
        }
        let mut y = vec![0.0; x.len()];
        for (i, &xi) in x.iter().enumerate() {
            y[self.perm[i]] = f64::from(self.signs[i]) * xi;
        }
        Ok(y)
    }

    /// Exact action on integer vectors.
    pub fn apply_i64(&self, x: &[i64]) -> Vec<i64> {
        let mut y = vec![0; x.len()];
        for (i, &xi) in x.iter().enumerate() {
            y[self.perm[i]] = i64::from(self.signs[i]) * xi;
        }
        y
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        Self { perm, signs }
    }

    pub fn inverse(&self) -> Self {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        Self { perm, signs }
    }

    /// The `n × n` monomial matrix, row-major.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[self.perm[i]][i] = f64::from(self.signs[i]);
        }
        m
    }

    /// Every element of `B_n`, permutations in lexicographic order and
    /// signs as binary counters within each permutation.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        let order = group_order(n)?;
        if order > 10_000_000 {
            return Err(Error::Unsupported(format!("enumerating B_{n} ({order} elements)")));
        }
        let mut out = Vec::with_capacity(order as usize);
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            for mask in 0u32..(1u32 << n) {
                let signs = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                out.push(Self {
                    perm: perm.clone(),
                    signs,
                });
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(out)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `|B_n| = 2^n · n!`, which is also the number of chambers.
pub fn group_order(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut order: u64 = 1;
    for k in 1..=n as u64 {
        order = order
            .checked_mul(2 * k)
            .ok_or(Error::Overflow("group order"))?;
    }
    Ok(order)
}

/// Number of reflecting hyperplanes of `B_n`: `n` coordinate mirrors plus
/// `n(n-1)` mirrors `x_i = ±x_j`.
pub fn mirror_count(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    (n as u64).checked_mul(n as u64).ok_or(Error::Overflow("mirror count"))
}

//! Factorization, divisors, prime signatures and exact combinatorial numbers.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Arbitrary-precision count. Only the Möbius-type families ever go negative.
pub type BigCount = BigInt;

const SMALL_PRIME_LIMIT: u64 = 1 << 16;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// The first `m` primes, or `None` if `m` exceeds the internal table.
pub fn first_primes(m: usize) -> Option<&'static [u64]> {
    small_primes().get(..m)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer together with its canonical prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Builds from `(prime, exponent)` pairs. Primes must be strictly increasing
    /// and exponents positive; the product must fit in 64 bits.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        let mut last = 1;
        for &(p, e) in &factors {
            if p <= last || e == 0 || !is_prime(p) {
                return Err(domain(format!("invalid factor list {factors:?}")));
            }
            last = p;
            let pe = p
                .checked_pow(e)
                .ok_or_else(|| domain("factorization overflows 64 bits"))?;
            value = value
                .checked_mul(pe)
                .ok_or_else(|| domain("factorization overflows 64 bits"))?;
        }
        Ok(Self { value, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, e)| e)
    }

    /// Number of distinct prime factors, ω(n).
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Number of prime factors with multiplicity, Ω(n).
    pub fn big_omega(&self) -> u32 {
        self.exponents().sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents().all(|e| e == 1)
    }

    pub fn signature(&self) -> PrimeSignature {
        PrimeSignature::new(self.exponents().collect())
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        divisors(self)
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multiset of exponents of a factorization, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeSignature(Vec<u32>);

impl PrimeSignature {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// The smallest integer carrying this signature: largest exponent on 2,
    /// next on 3, and so on. It never exceeds any other integer with the
    /// same signature.
    pub fn canonical(&self) -> Result<FactoredInteger> {
        let primes =
            first_primes(self.0.len()).ok_or_else(|| domain("signature has too many primes"))?;
        FactoredInteger::from_factors(primes.iter().copied().zip(self.0.iter().copied()).collect())
    }
}

/// Factors `n` by trial division over a cached prime table.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(domain("cannot factor 0"));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest >= SMALL_PRIME_LIMIT * SMALL_PRIME_LIMIT && !is_prime(rest) {
        // Composite with every prime factor above the table.
        let mut p = SMALL_PRIME_LIMIT + 1;
        while p.saturating_mul(p) <= rest {
            if rest.is_multiple_of(p) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                factors.push((p, e));
                if is_prime(rest) {
                    break;
                }
            }
            p += 2;
        }
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInteger { value: n, factors })
}

/// Ascending list of all divisors of `f`.
pub fn divisors(f: &FactoredInteger) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in f.factors() {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The divisors of a fixed integer addressed by their exponent vectors.
///
/// Index `i` is the mixed-radix encoding of the exponent vector with the
/// first prime least significant. If `d | m` then `index(d) <= index(m)`,
/// so ascending index order is a valid order for divisor recursions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorLattice {
    n: FactoredInteger,
    strides: Vec<usize>,
    exps: Vec<Vec<u32>>,
    values: Vec<u64>,
}

impl DivisorLattice {
    pub fn new(n: &FactoredInteger) -> Self {
        let mut strides = Vec::with_capacity(n.omega());
        let mut size = 1usize;
        for e in n.exponents() {
            strides.push(size);
            size *= e as usize + 1;
        }
        let mut exps = Vec::with_capacity(size);
        let mut values = Vec::with_capacity(size);
        for idx in 0..size {
            let mut v = 1u64;
            let ev: Vec<u32> = n
                .factors()
                .iter()
                .zip(&strides)
                .map(|(&(p, e), &s)| {
                    let k = ((idx / s) % (e as usize + 1)) as u32;
                    v *= p.pow(k);
                    k
                })
                .collect();
            exps.push(ev);
            values.push(v);
        }
        Self {
            n: n.clone(),
            strides,
            exps,
            values,
        }
    }

    pub fn top(&self) -> &FactoredInteger {
        &self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, idx: usize) -> u64 {
        self.values[idx]
    }

    pub fn exps(&self, idx: usize) -> &[u32] {
        &self.exps[idx]
    }

    pub fn big_omega(&self, idx: usize) -> u32 {
        self.exps[idx].iter().sum()
    }

    pub fn index_of_exps(&self, exps: &[u32]) -> usize {
        exps.iter()
            .zip(&self.strides)
            .map(|(&e, &s)| e as usize * s)
            .sum()
    }

    /// Index of `m / d^power`, or `None` when `d^power` does not divide `m`.
    pub fn quotient(&self, m: usize, d: usize, power: u32) -> Option<usize> {
        let mut idx = 0;
        for ((&em, &ed), &s) in self.exps[m].iter().zip(&self.exps[d]).zip(&self.strides) {
            let need = ed * power;
            if need > em {
                return None;
            }
            idx += (em - need) as usize * s;
        }
        Some(idx)
    }

    pub fn divides(&self, d: usize, m: usize) -> bool {
        self.exps[d].iter().zip(&self.exps[m]).all(|(a, b)| a <= b)
    }

    /// Indices of the divisors of the divisor at `m`, in ascending index order.
    pub fn divisors_of(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        (0..=m).filter(move |&d| self.divides(d, m))
    }
}

const TABLE_CAP: usize = 1024;

fn pascal() -> &'static RwLock<Vec<Vec<BigInt>>> {
    static TABLE: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

/// C(n, k); zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigCount {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = k as u64;
    if n as usize >= TABLE_CAP {
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        return acc;
    }
    let n = n as usize;
    {
        let rows = pascal().read().expect("binomial table poisoned");
        if let Some(row) = rows.get(n) {
            return row[k as usize].clone();
        }
    }
    let mut rows = pascal().write().expect("binomial table poisoned");
    while rows.len() <= n {
        let prev = rows.last().expect("nonempty");
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(BigInt::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows[n][k as usize].clone()
}

/// Number of multisets of size `m` drawn from `l` kinds.
pub fn multichoose(l: u64, m: u64) -> BigCount {
    if m == 0 {
        return BigInt::one();
    }
    if l == 0 {
        return BigInt::zero();
    }
    binomial(l + m - 1, m as i64)
}

fn stirling_table() -> &'static RwLock<Vec<Vec<BigInt>>> {
    static TABLE: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

fn stirling_next_row(prev: &[BigInt]) -> Vec<BigInt> {
    let m = prev.len();
    let mut row = vec![BigInt::zero(); m + 1];
    for k in 1..=m {
        let mut v = prev[k - 1].clone();
        if k < m {
            v += &prev[k] * k;
        }
        row[k] = v;
    }
    row
}

/// Stirling number of the second kind S(m, k).
pub fn stirling2(m: u64, k: u64) -> BigCount {
    if k > m {
        return BigInt::zero();
    }
    let (m, k) = (m as usize, k as usize);
    if m >= TABLE_CAP {
        let mut row = vec![BigInt::one()];
        for _ in 0..m {
            row = stirling_next_row(&row);
        }
        return row[k].clone();
    }
    {
        let rows = stirling_table().read().expect("stirling table poisoned");
        if let Some(row) = rows.get(m) {
            return row[k].clone();
        }
    }
    let mut rows = stirling_table().write().expect("stirling table poisoned");
    while rows.len() <= m {
        let next = stirling_next_row(rows.last().expect("nonempty"));
        rows.push(next);
    }
    rows[m][k].clone()
}

pub fn factorial(k: u64) -> BigCount {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Product of the first `m` primes.
pub fn primorial(m: usize) -> Result<FactoredInteger> {
    PrimeSignature::new(vec![1; m]).canonical()
}

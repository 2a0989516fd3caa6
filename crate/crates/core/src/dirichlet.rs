//! Truncated arithmetic functions and their Dirichlet algebra.
//!
//! Two carriers share the same operations:
//!
//! * [`DirichletSeq`] holds dense values `a(1..=N)`; convolution is the
//!   divisor-sieve double loop, `O(N log N)` coefficient products.
//! * [`LatticeSeq`] holds values only on the divisors of one fixed integer.
//!   The divisor set is closed under every operation here, so single-point
//!   evaluations at large `n` never touch non-divisors.
//!
//! Coefficients are either plain integers ([`BigInt`]) or polynomials in a
//! part-counting variable ([`PartPoly`]), the latter giving the bivariate
//! tables `t(n, k)`.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{DivisorLattice, FactoredInteger, PrimeSignature};
use crate::error::{domain, usage, Result};

/// Values a Dirichlet convolution can run over.
pub trait Coefficient: Clone + Debug + PartialEq {
    fn zero_coeff() -> Self;
    fn one_coeff() -> Self;
    fn is_zero_coeff(&self) -> bool;
    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self);
}

impl Coefficient for BigInt {
    fn zero_coeff() -> Self {
        Zero::zero()
    }
    fn one_coeff() -> Self {
        One::one()
    }
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *self += a * b;
        }
    }
}

/// A polynomial `Σ c_k z^k` with exact coefficients, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartPoly(Vec<BigInt>);

impl PartPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn monomial(k: usize, c: BigInt) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// Number of stored coefficients (degree + 1, or 0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at `z = 1`.
    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl Coefficient for PartPoly {
    fn zero_coeff() -> Self {
        Self(Vec::new())
    }
    fn one_coeff() -> Self {
        Self(vec![BigInt::one()])
    }
    fn is_zero_coeff(&self) -> bool {
        self.0.is_empty()
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        if a.0.is_empty() || b.0.is_empty() {
            return;
        }
        let len = a.0.len() + b.0.len() - 1;
        if self.0.len() < len {
            self.0.resize(len, BigInt::zero());
        }
        for (i, x) in a.0.iter().enumerate() {
            if Zero::is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                self.0[i + j] += x * y;
            }
        }
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }
}

/// Dense truncated arithmetic function `a(1..=N)`.
#[derive(Clone, Debug)]
pub struct DirichletSeq<T> {
    // values[i] = a(i + 1)
    values: Vec<T>,
}

/// Integer-valued sequence.
pub type ArithSeq = DirichletSeq<BigInt>;
/// Sequence of part-count polynomials: entry `n` holds `Σ_k t(n, k) z^k`.
pub type BivariateTable = DirichletSeq<PartPoly>;

impl<T: Coefficient> DirichletSeq<T> {
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(usage("a sequence needs at least a(1)"));
        }
        Ok(Self { values })
    }

    pub fn from_fn(limit: usize, mut f: impl FnMut(u64) -> T) -> Result<Self> {
        Self::from_values((1..=limit as u64).map(&mut f).collect())
    }

    /// The convolution identity ε = (1, 0, 0, ...).
    pub fn identity(limit: usize) -> Self {
        let mut values = vec![T::zero_coeff(); limit.max(1)];
        values[0] = T::one_coeff();
        Self { values }
    }

    pub fn limit(&self) -> usize {
        self.values.len()
    }

    /// `a(n)` for `1 <= n <= N`.
    pub fn get(&self, n: u64) -> &T {
        &self.values[n as usize - 1]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.limit() != other.limit() {
            return Err(usage(format!(
                "convolution limits differ: {} vs {}",
                self.limit(),
                other.limit()
            )));
        }
        let n = self.limit();
        let mut out = vec![T::zero_coeff(); n];
        for d in 1..=n {
            let a = &self.values[d - 1];
            if a.is_zero_coeff() {
                continue;
            }
            for (j, b) in other.values[..n / d].iter().enumerate() {
                out[d * (j + 1) - 1].add_product(a, b);
            }
        }
        Ok(Self { values: out })
    }

    /// `l`-th Dirichlet power by repeated squaring; `l = 0` gives ε.
    pub fn power(&self, mut l: u32) -> Self {
        let mut acc = Self::identity(self.limit());
        let mut base = self.clone();
        while l > 0 {
            if l & 1 == 1 {
                acc = acc.convolve(&base).expect("equal limits");
            }
            l >>= 1;
            if l > 0 {
                base = base.convolve(&base).expect("equal limits");
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.values[0] == T::one_coeff() && self.values[1..].iter().all(T::is_zero_coeff)
    }
}

impl DirichletSeq<BigInt> {
    /// Dirichlet inverse; requires `a(1) = 1`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.values[0].is_one() {
            return Err(domain("Dirichlet inverse needs a(1) = 1"));
        }
        let n = self.limit();
        let mut out = vec![BigInt::zero(); n];
        out[0] = BigInt::one();
        // Accumulate Σ_{d|m, d<m} out(d) a(m/d) into acc[m], finalising out(d)
        // before it is pushed to its multiples.
        let mut acc = vec![BigInt::zero(); n];
        for d in 1..=n {
            if d > 1 {
                out[d - 1] = -std::mem::take(&mut acc[d - 1]);
            }
            let b = &out[d - 1];
            if Zero::is_zero(b) {
                continue;
            }
            for j in 2..=n / d {
                let a = &self.values[j - 1];
                if !Zero::is_zero(a) {
                    acc[d * j - 1] += b * a;
                }
            }
        }
        Ok(Self { values: out })
    }
}

impl<T: PartialEq> PartialEq for DirichletSeq<T> {
    /// Sequences are compared up to the shorter limit.
    fn eq(&self, other: &Self) -> bool {
        let n = self.values.len().min(other.values.len());
        self.values[..n] == other.values[..n]
    }
}

impl BivariateTable {
    /// `t(n, k)`.
    pub fn entry(&self, n: u64, k: usize) -> BigInt {
        self.get(n).coeff(k)
    }

    /// Collapse the part variable (`z = 1`).
    pub fn marginal(&self) -> ArithSeq {
        DirichletSeq {
            values: self.values.iter().map(PartPoly::sum).collect(),
        }
    }
}

/// A function on the divisors of one fixed integer.
#[derive(Clone, Debug)]
pub struct LatticeSeq<T> {
    lattice: Arc<DivisorLattice>,
    values: Vec<T>,
}

impl<T: Coefficient> LatticeSeq<T> {
    pub fn from_fn(lattice: Arc<DivisorLattice>, f: impl FnMut(usize) -> T) -> Self {
        let values = (0..lattice.len()).map(f).collect();
        Self { lattice, values }
    }

    pub fn from_values(lattice: Arc<DivisorLattice>, values: Vec<T>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(usage("value count does not match the divisor count"));
        }
        Ok(Self { lattice, values })
    }

    pub fn identity(lattice: Arc<DivisorLattice>) -> Self {
        Self::from_fn(lattice, |i| {
            if i == 0 {
                T::one_coeff()
            } else {
                T::zero_coeff()
            }
        })
    }

    pub fn lattice(&self) -> &Arc<DivisorLattice> {
        &self.lattice
    }

    pub fn get(&self, idx: usize) -> &T {
        &self.values[idx]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value at the top of the lattice, i.e. at `n` itself.
    pub fn at_top(&self) -> &T {
        self.values.last().expect("lattice is never empty")
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.lattice.top() != other.lattice.top() {
            return Err(usage("sequences live on different divisor lattices"));
        }
        Ok(())
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let lat = &self.lattice;
        let mut out = vec![T::zero_coeff(); lat.len()];
        for (m, slot) in out.iter_mut().enumerate() {
            for d in lat.divisors_of(m) {
                let q = lat.quotient(m, d, 1).expect("d divides m");
                slot.add_product(&self.values[d], &other.values[q]);
            }
        }
        Ok(Self {
            lattice: Arc::clone(lat),
            values: out,
        })
    }

    pub fn power(&self, mut l: u32) -> Self {
        let mut acc = Self::identity(Arc::clone(&self.lattice));
        let mut base = self.clone();
        while l > 0 {
            if l & 1 == 1 {
                acc = acc.convolve(&base).expect("same lattice");
            }
            l >>= 1;
            if l > 0 {
                base = base.convolve(&base).expect("same lattice");
            }
        }
        acc
    }
}

impl LatticeSeq<BigInt> {
    pub fn inverse(&self) -> Result<Self> {
        if !self.values[0].is_one() {
            return Err(domain("Dirichlet inverse needs a(1) = 1"));
        }
        let lat = &self.lattice;
        let mut out = vec![BigInt::zero(); lat.len()];
        out[0] = BigInt::one();
        for m in 1..lat.len() {
            let mut s = BigInt::zero();
            for d in lat.divisors_of(m).filter(|&d| d != m) {
                let q = lat.quotient(m, d, 1).expect("d divides m");
                s.add_product(&out[d], &self.values[q]);
            }
            out[m] = -s;
        }
        Ok(Self {
            lattice: Arc::clone(lat),
            values: out,
        })
    }
}

type Slot = Arc<Mutex<Option<BigInt>>>;

/// Concurrent memo table keyed by `(key, prime signature)`.
///
/// Each entry is computed at most once: concurrent callers for the same key
/// block on the entry lock while the first caller computes. Errors are not
/// cached.
#[derive(Debug)]
pub struct SignatureMemo<K> {
    entries: Mutex<HashMap<(K, PrimeSignature), Slot>>,
    computations: AtomicU64,
}

impl<K> Default for SignatureMemo<K> {
    fn default() -> Self {
        Self {
            entries: Mutex::new(HashMap::new()),
            computations: AtomicU64::new(0),
        }
    }
}

impl<K: Clone + Eq + Hash> SignatureMemo<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Evaluates `compute` at the smallest integer sharing `n`'s signature,
    /// caching the result under `(key, signature)`.
    pub fn eval(
        &self,
        key: &K,
        n: &FactoredInteger,
        compute: impl FnOnce(&FactoredInteger) -> Result<BigInt>,
    ) -> Result<BigInt> {
        let sig = n.signature();
        let slot = {
            let mut map = self.entries.lock().expect("memo poisoned");
            Arc::clone(map.entry((key.clone(), sig.clone())).or_default())
        };
        let mut guard = slot.lock().expect("memo entry poisoned");
        if let Some(v) = guard.as_ref() {
            return Ok(v.clone());
        }
        let canonical = sig.canonical()?;
        let v = compute(&canonical)?;
        self.computations.fetch_add(1, Ordering::Relaxed);
        *guard = Some(v.clone());
        Ok(v)
    }

    /// Number of values actually computed (cache misses that succeeded).
    pub fn computations(&self) -> u64 {
        self.computations.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("memo poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

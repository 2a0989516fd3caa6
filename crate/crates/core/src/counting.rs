//! Exact counts of colored factorizations.
//!
//! Every family is prime independent, so evaluation works on the divisor
//! lattice of `n` (see [`DivisorLattice`]) and the public cached entry point
//! [`eval_by_signature`] reduces `n` to the smallest integer with the same
//! prime signature first.
//!
//! Most families are reachable by more than one algorithm, selected with
//! [`Method`]:
//!
//! | family        | `Dirichlet`               | `Recursion`                   | `Closed`                      |
//! |---------------|---------------------------|-------------------------------|-------------------------------|
//! | `A`, `B`      | `f^{*l}`, `g^{*l}`        | per-prime log recursion       | Stirling sum (squarefree `n`) |
//! | `fkl`, `gkl`  | bivariate power           | per-prime log recursion       | `l^k S(m,k)` (squarefree `n`) |
//! | `a`, `b`      | `f̄^{*l}`, `ḡ^{*l}`        | binomial transform            | transform of the Stirling sum |
//! | `At`          | inverse of `c_l`          | divisor-sum sieve             | `Σ l^k f̃_k(n)`                |
//! | `Bt`          | `Σ k! g_{k,l}` (power)    | `Σ k! g_{k,l}` (recursion)    | `Σ l^k k! S(m,k)` (squarefree)|
//! | `at`, `bt`    | transform of `At`/`Bt` computed with the same method                                     |||
//! | `muf`, `mug`  | inverse of `g`, `f`       | log recursion at `l = -1`     | `Σ (-1)^k f_k`, `Σ (-1)^k g_k`|
//! | `dl`          | power of the all-ones seq | -                             | `Π C(e_j + l - 1, l - 1)`     |
//! | `fl`          | power of `ζ - 1`          | -                             | alternating binomial sum      |
//!
//! Exactly-`l`-colored values are taken to be 0 at `n = 1`.
//!
//! Lattice methods refuse an `n` whose divisor lattice needs more than
//! [`work_limit`] divisor pairs per convolution, returning
//! [`Error::Resource`]; [`set_work_limit`] changes the bound.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    binomial, factorial, factorize, primorial, stirling2, BigCount, DivisorLattice, FactoredInteger,
};
use crate::dirichlet::{ArithSeq, Coefficient, LatticeSeq, PartPoly, SignatureMemo};
use crate::error::{domain, usage, Error, Result};

/// Which family of counting function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `A_l`: unordered, at most `l` colors.
    A,
    /// `B_l`: unordered distinct, at most `l` colors.
    B,
    /// `a_l`: unordered, exactly `l` colors.
    ExactA,
    /// `b_l`: unordered distinct, exactly `l` colors.
    ExactB,
    /// `Ã_l`: ordered, at most `l` colors.
    OrderedA,
    /// `B̃_l`: ordered distinct, at most `l` colors.
    OrderedB,
    /// `ã_l`: ordered, exactly `l` colors.
    OrderedExactA,
    /// `b̃_l`: ordered distinct, exactly `l` colors.
    OrderedExactB,
    /// `μ_f`: even-minus-odd unordered factorizations.
    MuF,
    /// `μ_g`: even-minus-odd distinct factorizations.
    MuG,
    /// `d_l`: ordered `l`-tuples of parts `>= 1`.
    Divisor,
    /// `f̃_l`: ordered factorizations into exactly `l` parts `>= 2`.
    OrderedParts,
    /// `f_{k,l}`: unordered, at most `l` colors, exactly `k` parts.
    PartsA,
    /// `g_{k,l}`: unordered distinct, at most `l` colors, exactly `k` parts.
    PartsB,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 14] = [
        FamilyKind::A,
        FamilyKind::B,
        FamilyKind::ExactA,
        FamilyKind::ExactB,
        FamilyKind::OrderedA,
        FamilyKind::OrderedB,
        FamilyKind::OrderedExactA,
        FamilyKind::OrderedExactB,
        FamilyKind::MuF,
        FamilyKind::MuG,
        FamilyKind::Divisor,
        FamilyKind::OrderedParts,
        FamilyKind::PartsA,
        FamilyKind::PartsB,
    ];

    /// ASCII name used on the command line.
    pub fn alias(self) -> &'static str {
        match self {
            FamilyKind::A => "A",
            FamilyKind::B => "B",
            FamilyKind::ExactA => "a",
            FamilyKind::ExactB => "b",
            FamilyKind::OrderedA => "At",
            FamilyKind::OrderedB => "Bt",
            FamilyKind::OrderedExactA => "at",
            FamilyKind::OrderedExactB => "bt",
            FamilyKind::MuF => "muf",
            FamilyKind::MuG => "mug",
            FamilyKind::Divisor => "dl",
            FamilyKind::OrderedParts => "fl",
            FamilyKind::PartsA => "fkl",
            FamilyKind::PartsB => "gkl",
        }
    }

    pub fn needs_parts(self) -> bool {
        matches!(self, FamilyKind::PartsA | FamilyKind::PartsB)
    }

    pub fn is_moebius(self) -> bool {
        matches!(self, FamilyKind::MuF | FamilyKind::MuG)
    }

    pub fn is_exact(self) -> bool {
        matches!(
            self,
            FamilyKind::ExactA
                | FamilyKind::ExactB
                | FamilyKind::OrderedExactA
                | FamilyKind::OrderedExactB
        )
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.alias())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.alias() == s)
            .ok_or_else(|| usage(format!("unknown family '{s}'")))
    }
}

/// A fully parameterised counting function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountFamily {
    pub kind: FamilyKind,
    /// Number of colors (or parts, for [`FamilyKind::OrderedParts`]); fixed to -1 for the Möbius pair.
    pub l: i64,
    /// Number of parts, only for `f_{k,l}` and `g_{k,l}`.
    pub k: Option<u32>,
}

impl CountFamily {
    pub fn new(kind: FamilyKind, l: i64, k: Option<u32>) -> Result<Self> {
        let l = if kind.is_moebius() { -1 } else { l };
        if !kind.is_moebius() && l < 1 {
            return Err(domain(format!("{kind} needs l >= 1, got {l}")));
        }
        match (kind.needs_parts(), k) {
            (true, None) => return Err(usage(format!("{kind} needs a part count k"))),
            (false, Some(_)) => return Err(usage(format!("{kind} takes no part count"))),
            _ => {}
        }
        Ok(Self { kind, l, k })
    }

    pub fn colors(&self) -> u32 {
        self.l as u32
    }
}

impl fmt::Display for CountFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[l={}", self.kind, self.l)?;
        if let Some(k) = self.k {
            write!(f, ",k={k}")?;
        }
        write!(f, "]")
    }
}

/// Algorithm selector; see the module table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Dirichlet,
    Recursion,
    Closed,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Method::Dirichlet),
            "recursion" => Ok(Method::Recursion),
            "closed" => Ok(Method::Closed),
            _ => Err(usage(format!("unknown method '{s}'"))),
        }
    }
}

/// Unordered families with at-most-`l` colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Unordered {
    /// Parts may repeat (`A_l`, `f_{k,l}`).
    Plain,
    /// Parts pairwise distinct as (value, color) (`B_l`, `g_{k,l}`).
    Distinct,
}

impl Unordered {
    fn distinct(self) -> bool {
        self == Unordered::Distinct
    }
}

/// The four exactly-`l`-colored families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactFamily {
    A,
    B,
    OrderedA,
    OrderedB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Moebius {
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisorKind {
    /// `d_l`: ordered `l`-tuples of parts `>= 1`.
    Divisor,
    /// `f̃_l`: ordered `l`-tuples of parts `>= 2`.
    ExactParts,
}

/// Tally of the exact divisions performed by the per-prime recursion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RecursionAudit {
    /// Divisions by the pivot exponent, each verified to leave no remainder.
    pub divisions: u64,
    /// Non-pivot prime equations checked against the pivot result.
    pub cross_checks: u64,
}

/// Default bound on divisor pairs `(d, m)` with `d | m | n`, which is the
/// cost of one convolution over the divisor lattice of `n`.
pub const DEFAULT_WORK_LIMIT: u64 = 531_441;

static WORK_LIMIT: AtomicU64 = AtomicU64::new(DEFAULT_WORK_LIMIT);

/// Sets the process-wide bound on lattice work; see [`DEFAULT_WORK_LIMIT`].
pub fn set_work_limit(limit: u64) {
    WORK_LIMIT.store(limit, AtomicOrdering::Relaxed);
}

pub fn work_limit() -> u64 {
    WORK_LIMIT.load(AtomicOrdering::Relaxed)
}

fn lattice_for(n: &FactoredInteger) -> Result<Arc<DivisorLattice>> {
    let pairs: u128 = n
        .exponents()
        .map(|e| (e as u128 + 1) * (e as u128 + 2) / 2)
        .product();
    let limit = work_limit();
    if pairs > limit as u128 {
        return Err(Error::Resource {
            projected: format!("{pairs} divisor pairs for n = {}", n.value()),
            limit,
        });
    }
    Ok(Arc::new(DivisorLattice::new(n)))
}

fn lattice_of(n: u64) -> Result<Arc<DivisorLattice>> {
    lattice_for(&factorize(n)?)
}

fn check_colors(l: i64) -> Result<u32> {
    if l < 1 {
        return Err(domain(format!("l must be >= 1, got {l}")));
    }
    u32::try_from(l).map_err(|_| domain("l too large"))
}

// ---------------------------------------------------------------------------
// Uncolored unordered counts

/// Unordered factorizations of the divisors of a lattice, with parts bounded above.
struct PartCounter<'a> {
    lat: &'a DivisorLattice,
    distinct: bool,
    memo: HashMap<(usize, u64), PartPoly>,
}

impl<'a> PartCounter<'a> {
    fn new(lat: &'a DivisorLattice, distinct: bool) -> Self {
        Self {
            lat,
            distinct,
            memo: HashMap::new(),
        }
    }

    /// `Σ_k (#factorizations of lattice[m] into k parts, each <= max) z^k`.
    fn count(&mut self, m: usize, max: u64) -> PartPoly {
        if m == 0 {
            return PartPoly::one_coeff();
        }
        let max = max.min(self.lat.value(m));
        if let Some(p) = self.memo.get(&(m, max)) {
            return p.clone();
        }
        let mut acc = PartPoly::zero_coeff();
        let divs: Vec<usize> = self.lat.divisors_of(m).filter(|&d| d != 0).collect();
        let shift = PartPoly::monomial(1, BigInt::one());
        for d in divs {
            let dv = self.lat.value(d);
            if dv > max {
                continue;
            }
            let q = self.lat.quotient(m, d, 1).expect("d divides m");
            let next_max = if self.distinct { dv - 1 } else { dv };
            let sub = self.count(q, next_max);
            acc.add_product(&shift, &sub);
        }
        self.memo.insert((m, max), acc.clone());
        acc
    }
}

fn uncolored_parts(lat: &Arc<DivisorLattice>, distinct: bool) -> LatticeSeq<PartPoly> {
    let mut counter = PartCounter::new(lat, distinct);
    LatticeSeq::from_fn(Arc::clone(lat), |m| counter.count(m, u64::MAX))
}

fn scalar_count(n: u64, max_part: u64, distinct: bool) -> Result<BigCount> {
    fn go(
        lat: &DivisorLattice,
        memo: &mut HashMap<(usize, u64), BigInt>,
        m: usize,
        max: u64,
        distinct: bool,
    ) -> BigInt {
        if m == 0 {
            return BigInt::one();
        }
        let max = max.min(lat.value(m));
        if let Some(v) = memo.get(&(m, max)) {
            return v.clone();
        }
        let mut acc = BigInt::zero();
        for d in lat.divisors_of(m).filter(|&d| d != 0) {
            let dv = lat.value(d);
            if dv <= max {
                let q = lat.quotient(m, d, 1).expect("d divides m");
                acc += go(lat, memo, q, if distinct { dv - 1 } else { dv }, distinct);
            }
        }
        memo.insert((m, max), acc.clone());
        acc
    }
    let lat = lattice_of(n)?;
    let top = lat.len() - 1;
    Ok(go(&lat, &mut HashMap::new(), top, max_part, distinct))
}

/// Number of unordered factorizations of `n` into parts `>= 2` and `<= max_part`.
pub fn count_unordered(n: u64, max_part: u64) -> Result<BigCount> {
    scalar_count(n, max_part, false)
}

/// Number of unordered factorizations of `n` into distinct parts `<= max_part`.
pub fn count_distinct(n: u64, max_part: u64) -> Result<BigCount> {
    scalar_count(n, max_part, true)
}

/// `f_k(n)` (or `g_k(n)` when `distinct`): uncolored factorizations with exactly `k` parts.
pub fn count_by_parts(n: u64, k: u32, distinct: bool) -> Result<BigCount> {
    let lat = lattice_of(n)?;
    let top = lat.len() - 1;
    Ok(PartCounter::new(&lat, distinct)
        .count(top, u64::MAX)
        .coeff(k as usize))
}

// ---------------------------------------------------------------------------
// Per-prime recursion

/// Values the logarithmic recursion can run over: plain counts or part polynomials.
trait Recurrent: Coefficient {
    /// `self += factor * z^shift * x`
    fn add_scaled_shifted(&mut self, x: &Self, factor: i64, shift: u32);
    fn scaled(&self, factor: i64) -> Self;
    fn div_exact(&self, d: u32) -> Option<Self>;
}

impl Recurrent for BigInt {
    fn add_scaled_shifted(&mut self, x: &Self, factor: i64, _shift: u32) {
        *self += x * factor;
    }
    fn scaled(&self, factor: i64) -> Self {
        self * factor
    }
    fn div_exact(&self, d: u32) -> Option<Self> {
        let (q, r) = self.div_rem(&BigInt::from(d));
        r.is_zero().then_some(q)
    }
}

impl Recurrent for PartPoly {
    fn add_scaled_shifted(&mut self, x: &Self, factor: i64, shift: u32) {
        self.add_product(&PartPoly::monomial(shift as usize, BigInt::from(factor)), x);
    }
    fn scaled(&self, factor: i64) -> Self {
        PartPoly::new(self.coeffs().iter().map(|c| c * factor).collect())
    }
    fn div_exact(&self, d: u32) -> Option<Self> {
        self.coeffs()
            .iter()
            .map(|c| c.div_exact(d))
            .collect::<Option<Vec<_>>>()
            .map(PartPoly::new)
    }
}

/// Runs the logarithmic-derivative recursion on every divisor of the lattice.
///
/// With `n = Π π_j^{e_j}` the real identity
/// `F(n) log n = l Σ_{d^i | n, d >= 2} s_i z^i F(n / d^i) log d`
/// splits, by linear independence of prime logarithms, into one integer
/// equation per prime: `e_j(n) F(n) = l Σ s_i z^i F(n / d^i) e_j(d)`.
/// The pivot prime has the largest exponent; every other prime's equation
/// is checked against the result. `s_i = 1` for the plain family and
/// `(-1)^{i+1}` for the distinct one.
fn log_recursion<T: Recurrent>(
    lat: &Arc<DivisorLattice>,
    l: i64,
    distinct: bool,
) -> Result<(LatticeSeq<T>, RecursionAudit)> {
    let w = lat.top().omega();
    let mut vals: Vec<T> = Vec::with_capacity(lat.len());
    vals.push(T::one_coeff());
    let mut audit = RecursionAudit::default();
    for m in 1..lat.len() {
        let em = lat.exps(m);
        let mut acc: Vec<T> = vec![T::zero_coeff(); w];
        for d in lat.divisors_of(m).filter(|&d| d != 0) {
            let ed = lat.exps(d);
            let mut i = 1u32;
            while let Some(q) = lat.quotient(m, d, i) {
                let sign = if distinct && i.is_multiple_of(2) {
                    -1
                } else {
                    1
                };
                for j in 0..w {
                    if ed[j] > 0 {
                        acc[j].add_scaled_shifted(&vals[q], sign * ed[j] as i64, i);
                    }
                }
                i += 1;
            }
        }
        let pivot = (0..w)
            .max_by_key(|&j| (em[j], std::cmp::Reverse(j)))
            .expect("m > 1");
        let numer = acc[pivot].scaled(l);
        let value = numer.div_exact(em[pivot]).ok_or_else(|| {
            Error::Inconsistency(format!(
                "per-prime recursion: {numer:?} not divisible by {} at {}",
                em[pivot],
                lat.value(m)
            ))
        })?;
        audit.divisions += 1;
        for j in (0..w).filter(|&j| j != pivot && em[j] > 0) {
            if acc[j].scaled(l) != value.scaled(em[j] as i64) {
                return Err(Error::Inconsistency(format!(
                    "per-prime recursion: prime equations disagree at {}",
                    lat.value(m)
                )));
            }
            audit.cross_checks += 1;
        }
        vals.push(value);
    }
    Ok((LatticeSeq::from_values(Arc::clone(lat), vals)?, audit))
}

fn check_recursion_l(l: i64) -> Result<()> {
    match l {
        0 => Err(domain("l = 0 is not allowed")),
        l if l < -1 => Err(domain(format!(
            "negative l is only supported for l = -1, got {l}"
        ))),
        _ => Ok(()),
    }
}

/// `A_l(n)` or `B_l(n)` by the per-prime recursion, with its division audit.
/// `l = -1` yields `μ_g` (plain) or `μ_f` (distinct).
pub fn colored_atmost_audited(
    n: u64,
    l: i64,
    family: Unordered,
) -> Result<(BigCount, RecursionAudit)> {
    check_recursion_l(l)?;
    let lat = lattice_of(n)?;
    let (seq, audit) = log_recursion::<BigInt>(&lat, l, family.distinct())?;
    Ok((seq.at_top().clone(), audit))
}

/// `f_{k,l}(n)` or `g_{k,l}(n)` by the per-prime recursion, with its division audit.
pub fn colored_by_parts_audited(
    n: u64,
    k: u32,
    l: i64,
    family: Unordered,
) -> Result<(BigCount, RecursionAudit)> {
    check_recursion_l(l)?;
    let lat = lattice_of(n)?;
    let (seq, audit) = log_recursion::<PartPoly>(&lat, l, family.distinct())?;
    Ok((seq.at_top().coeff(k as usize), audit))
}

// ---------------------------------------------------------------------------
// At-most colored, unordered

fn uncolored_scalar(lat: &Arc<DivisorLattice>, distinct: bool) -> LatticeSeq<BigInt> {
    let parts = uncolored_parts(lat, distinct);
    LatticeSeq::from_fn(Arc::clone(lat), |m| parts.get(m).sum())
}

fn closed_unordered(n: &FactoredInteger, l: u32, k: Option<u32>) -> Result<BigCount> {
    if !n.is_squarefree() {
        return Err(domain(format!(
            "closed form needs a squarefree n, got {}",
            n.value()
        )));
    }
    let m = n.omega() as u64;
    if m == 0 {
        return Ok(if k.unwrap_or(0) == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    let term = |k: u64| BigInt::from(l).pow(k as u32) * stirling2(m, k);
    Ok(match k {
        Some(k) => term(k as u64),
        None => (1..=m).map(term).sum(),
    })
}

/// `A_l(n)` (plain) or `B_l(n)` (distinct).
///
/// `Dirichlet` takes the `l`-th Dirichlet power of `f` or `g`; `Recursion`
/// runs the per-prime recursion and also accepts `l = -1`; `Closed` is the
/// Stirling sum and needs a squarefree `n`.
pub fn colored_atmost(n: u64, l: i64, family: Unordered, method: Method) -> Result<BigCount> {
    match method {
        Method::Recursion => colored_atmost_audited(n, l, family).map(|(v, _)| v),
        Method::Dirichlet => {
            let l = check_colors(l)?;
            let lat = lattice_of(n)?;
            Ok(uncolored_scalar(&lat, family.distinct())
                .power(l)
                .at_top()
                .clone())
        }
        Method::Closed => closed_unordered(&factorize(n)?, check_colors(l)?, None),
    }
}

/// `f_{k,l}(n)` or `g_{k,l}(n)`: at most `l` colors and exactly `k` parts.
pub fn colored_by_parts(
    n: u64,
    k: u32,
    l: i64,
    family: Unordered,
    method: Method,
) -> Result<BigCount> {
    match method {
        Method::Recursion => colored_by_parts_audited(n, k, l, family).map(|(v, _)| v),
        Method::Dirichlet => {
            let l = check_colors(l)?;
            let lat = lattice_of(n)?;
            Ok(uncolored_parts(&lat, family.distinct())
                .power(l)
                .at_top()
                .coeff(k as usize))
        }
        Method::Closed => closed_unordered(&factorize(n)?, check_colors(l)?, Some(k)),
    }
}

// ---------------------------------------------------------------------------
// Ordered

/// `f̃_k(n)`: ordered factorizations into exactly `k` parts `>= 2`, by the
/// alternating binomial formula over the exponents of `n`.
pub fn ordered_exact_parts(n: u64, k: u32) -> Result<BigCount> {
    ordered_exact_parts_of(&factorize(n)?, k)
}

fn ordered_exact_parts_of(n: &FactoredInteger, k: u32) -> Result<BigCount> {
    if n.value() == 1 {
        return Ok(if k == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    let k = k as u64;
    let mut total = BigInt::zero();
    for i in 0..k {
        let mut prod = binomial(k, i as i64);
        for e in n.exponents() {
            prod *= binomial(e as u64 + k - i - 1, e as i64);
        }
        if i % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

fn ordered_colored_of(n: &FactoredInteger, l: u32, method: Method) -> Result<BigCount> {
    if n.value() == 1 {
        return Ok(BigInt::one());
    }
    match method {
        Method::Closed => {
            let mut total = BigInt::zero();
            for k in 1..=n.big_omega() {
                total += BigInt::from(l).pow(k) * ordered_exact_parts_of(n, k)?;
            }
            Ok(total)
        }
        Method::Dirichlet => {
            let lat = lattice_for(n)?;
            let c = LatticeSeq::from_fn(Arc::clone(&lat), |m| {
                if m == 0 {
                    BigInt::one()
                } else {
                    BigInt::from(-(l as i64))
                }
            });
            Ok(c.inverse()?.at_top().clone())
        }
        Method::Recursion => {
            let lat = lattice_for(n)?;
            let mut vals = vec![BigInt::one()];
            for m in 1..lat.len() {
                let s: BigInt = lat
                    .divisors_of(m)
                    .filter(|&d| d != m)
                    .map(|d| &vals[d])
                    .sum();
                vals.push(s * l);
            }
            Ok(vals.pop().expect("nonempty"))
        }
    }
}

/// `Ã_l(n)`: ordered factorizations with at most `l` colors.
pub fn ordered_colored(n: u64, l: i64, method: Method) -> Result<BigCount> {
    ordered_colored_of(&factorize(n)?, check_colors(l)?, method)
}

fn ordered_distinct_of(n: &FactoredInteger, l: u32, method: Method) -> Result<BigCount> {
    if n.value() == 1 {
        return Ok(BigInt::one());
    }
    if method == Method::Closed {
        return Ok(primorial_ordered_closed_form(squarefree_rank(n)?, l as u64));
    }
    let lat = lattice_for(n)?;
    let poly = if method == Method::Dirichlet {
        uncolored_parts(&lat, true).power(l).at_top().clone()
    } else {
        log_recursion::<PartPoly>(&lat, l as i64, true)?
            .0
            .at_top()
            .clone()
    };
    Ok(poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| factorial(k as u64) * c)
        .skip(1)
        .sum())
}

/// `B̃_l(n) = Σ_k k! g_{k,l}(n)`.
pub fn ordered_distinct_colored(n: u64, l: i64, method: Method) -> Result<BigCount> {
    ordered_distinct_of(&factorize(n)?, check_colors(l)?, method)
}

// ---------------------------------------------------------------------------
// Exactly l colors

/// `φ_l = Σ_{i=0}^{l} (-1)^{l-i} C(l,i) Φ_i` with `Φ_0 = 0`.
pub fn binomial_inverse(at_most: &[BigInt]) -> BigInt {
    // at_most[i] = Φ_{i+1}
    let l = at_most.len() as u64;
    let mut total = BigInt::zero();
    for (idx, v) in at_most.iter().enumerate() {
        let i = idx as u64 + 1;
        let term = binomial(l, i as i64) * v;
        if (l - i).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `Φ_l = Σ_{i=0}^{l} C(l,i) φ_i` with `φ_0 = 0`.
pub fn binomial_forward(exact: &[BigInt]) -> BigInt {
    let l = exact.len() as u64;
    exact
        .iter()
        .enumerate()
        .map(|(idx, v)| binomial(l, idx as i64 + 1) * v)
        .sum()
}

fn squarefree_rank(n: &FactoredInteger) -> Result<u64> {
    if !n.is_squarefree() {
        return Err(domain(format!(
            "closed form needs a squarefree n, got {}",
            n.value()
        )));
    }
    Ok(n.omega() as u64)
}

fn at_most_ladder(
    n: &FactoredInteger,
    l: u32,
    family: ExactFamily,
    method: Method,
) -> Result<Vec<BigInt>> {
    if method == Method::Closed && family != ExactFamily::OrderedA {
        let m = squarefree_rank(n)?;
        let closed = match family {
            ExactFamily::A | ExactFamily::B => squarefree_closed_form,
            _ => primorial_ordered_closed_form,
        };
        return Ok((1..=l).map(|i| closed(m, i as u64)).collect());
    }
    match family {
        ExactFamily::A | ExactFamily::B => {
            let lat = lattice_for(n)?;
            let distinct = family == ExactFamily::B;
            match method {
                Method::Recursion => (1..=l)
                    .map(|i| {
                        Ok(log_recursion::<BigInt>(&lat, i as i64, distinct)?
                            .0
                            .at_top()
                            .clone())
                    })
                    .collect(),
                _ => {
                    let base = uncolored_scalar(&lat, distinct);
                    let mut cur = base.clone();
                    let mut out = vec![cur.at_top().clone()];
                    for _ in 1..l {
                        cur = cur.convolve(&base)?;
                        out.push(cur.at_top().clone());
                    }
                    Ok(out)
                }
            }
        }
        ExactFamily::OrderedA => (1..=l).map(|i| ordered_colored_of(n, i, method)).collect(),
        ExactFamily::OrderedB => {
            let lat = lattice_for(n)?;
            let polys: Vec<PartPoly> = match method {
                Method::Recursion => (1..=l)
                    .map(|i| {
                        Ok(log_recursion::<PartPoly>(&lat, i as i64, true)?
                            .0
                            .at_top()
                            .clone())
                    })
                    .collect::<Result<_>>()?,
                Method::Dirichlet => {
                    let base = uncolored_parts(&lat, true);
                    let mut cur = base.clone();
                    let mut out = vec![cur.at_top().clone()];
                    for _ in 1..l {
                        cur = cur.convolve(&base)?;
                        out.push(cur.at_top().clone());
                    }
                    out
                }
                Method::Closed => unreachable!("handled above"),
            };
            Ok(polys
                .iter()
                .map(|p| {
                    p.coeffs()
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, c)| factorial(k as u64) * c)
                        .sum()
                })
                .collect())
        }
    }
}

/// Families whose `Closed` method exists only at squarefree `n`.
fn closed_needs_squarefree(kind: FamilyKind) -> bool {
    use FamilyKind::*;
    matches!(
        kind,
        A | B | PartsA | PartsB | ExactA | ExactB | OrderedB | OrderedExactB
    )
}

/// Algorithm used when none is requested: the closed form wherever it
/// applies to `n`, otherwise a fixed choice per family.
pub fn default_method(kind: FamilyKind, n: &FactoredInteger) -> Method {
    if closed_needs_squarefree(kind) && n.is_squarefree() {
        return Method::Closed;
    }
    match kind {
        FamilyKind::A
        | FamilyKind::B
        | FamilyKind::PartsA
        | FamilyKind::PartsB
        | FamilyKind::OrderedB
        | FamilyKind::OrderedExactB
        | FamilyKind::Divisor => Method::Dirichlet,
        FamilyKind::ExactA | FamilyKind::ExactB | FamilyKind::MuF | FamilyKind::MuG => {
            Method::Recursion
        }
        FamilyKind::OrderedA | FamilyKind::OrderedExactA | FamilyKind::OrderedParts => {
            Method::Closed
        }
    }
}

fn exact_of(n: &FactoredInteger, l: u32, family: ExactFamily, method: Method) -> Result<BigCount> {
    if n.value() == 1 {
        return Ok(BigInt::zero());
    }
    match (family, method) {
        (ExactFamily::A | ExactFamily::B, Method::Dirichlet) => {
            let lat = lattice_for(n)?;
            let mut bar = uncolored_scalar(&lat, family == ExactFamily::B)
                .values()
                .to_vec();
            bar[0] = BigInt::zero();
            Ok(LatticeSeq::from_values(lat, bar)?.power(l).at_top().clone())
        }
        _ => Ok(binomial_inverse(&at_most_ladder(n, l, family, method)?)),
    }
}

/// Exactly-`l`-colored counts `a_l`, `b_l`, `ã_l`, `b̃_l`.
///
/// All go through the signed binomial transform of the matching at-most
/// family, except `a`/`b` with `Dirichlet`, which take `f̄^{*l}` / `ḡ^{*l}`
/// (`f̄` is `f` with `f̄(1) = 0`).
pub fn colored_exact(n: u64, l: i64, family: ExactFamily, method: Method) -> Result<BigCount> {
    exact_of(&factorize(n)?, check_colors(l)?, family, method)
}

// ---------------------------------------------------------------------------
// Möbius pair, closed forms, divisor-like

fn moebius_of(n: &FactoredInteger, which: Moebius, method: Method) -> Result<BigCount> {
    let lat = lattice_for(n)?;
    // μ_f pairs with the distinct family, μ_g with the plain one.
    let distinct = which == Moebius::F;
    match method {
        Method::Recursion => Ok(log_recursion::<BigInt>(&lat, -1, distinct)?
            .0
            .at_top()
            .clone()),
        Method::Dirichlet => Ok(uncolored_scalar(&lat, distinct).inverse()?.at_top().clone()),
        Method::Closed => {
            let parts = uncolored_parts(&lat, which == Moebius::G);
            Ok(parts
                .at_top()
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
                .sum())
        }
    }
}

/// `μ_f(n)` or `μ_g(n)`.
pub fn generalized_moebius(n: u64, which: Moebius, method: Method) -> Result<BigCount> {
    moebius_of(&factorize(n)?, which, method)
}

/// `Σ_{k=0}^{m} l^k S(m, k)`: `A_l` and `B_l` at any squarefree number with `m` primes.
pub fn squarefree_closed_form(m: u64, l: u64) -> BigCount {
    (0..=m)
        .map(|k| BigInt::from(l).pow(k as u32) * stirling2(m, k))
        .sum()
}

/// `Σ_{k=0}^{m} l^k k! S(m, k)`: `Ã_l` and `B̃_l` at any squarefree number with `m` primes.
pub fn primorial_ordered_closed_form(m: u64, l: u64) -> BigCount {
    (0..=m)
        .map(|k| BigInt::from(l).pow(k as u32) * factorial(k) * stirling2(m, k))
        .sum()
}

fn divisor_like_of(
    n: &FactoredInteger,
    l: u32,
    kind: DivisorKind,
    method: Method,
) -> Result<BigCount> {
    match (kind, method) {
        (DivisorKind::Divisor, Method::Dirichlet)
        | (DivisorKind::ExactParts, Method::Dirichlet) => {
            let lat = lattice_for(n)?;
            let skip_one = kind == DivisorKind::ExactParts;
            let base = LatticeSeq::from_fn(Arc::clone(&lat), |m| {
                if m == 0 && skip_one {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            });
            Ok(base.power(l).at_top().clone())
        }
        (DivisorKind::Divisor, Method::Closed) => Ok(n
            .exponents()
            .map(|e| binomial(e as u64 + l as u64 - 1, l as i64 - 1))
            .product()),
        (DivisorKind::ExactParts, Method::Closed) => ordered_exact_parts_of(n, l),
        (_, Method::Recursion) => Err(usage("divisor-like families have no recursion path")),
    }
}

/// `d_l(n)` or `f̃_l(n)`.
pub fn divisor_like(n: u64, l: i64, kind: DivisorKind) -> Result<BigCount> {
    divisor_like_of(&factorize(n)?, check_colors(l)?, kind, Method::Dirichlet)
}

// ---------------------------------------------------------------------------
// Dispatch and caching

fn check_method(family: &CountFamily, method: Method) -> Result<()> {
    use FamilyKind::*;
    let ok = match family.kind {
        Divisor | OrderedParts => method != Method::Recursion,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(usage(format!(
            "method {method:?} is not available for {}",
            family.kind
        )))
    }
}

/// Every method that can evaluate `kind` at `n`.
pub fn supported_methods(kind: FamilyKind, n: &FactoredInteger) -> Vec<Method> {
    let probe = CountFamily {
        kind,
        l: 1,
        k: None,
    };
    [Method::Dirichlet, Method::Recursion, Method::Closed]
        .into_iter()
        .filter(|&m| check_method(&probe, m).is_ok())
        .filter(|&m| m != Method::Closed || n.is_squarefree() || !closed_needs_squarefree(kind))
        .collect()
}

/// Evaluates `family` at `n` without caching. `method = None` picks the
/// family's default algorithm.
pub fn evaluate(
    family: &CountFamily,
    n: &FactoredInteger,
    method: Option<Method>,
) -> Result<BigCount> {
    let method = method.unwrap_or_else(|| default_method(family.kind, n));
    check_method(family, method)?;
    let l = family.l;
    let v = n.value();
    match family.kind {
        FamilyKind::A => colored_atmost(v, l, Unordered::Plain, method),
        FamilyKind::B => colored_atmost(v, l, Unordered::Distinct, method),
        FamilyKind::PartsA | FamilyKind::PartsB => {
            let fam = if family.kind == FamilyKind::PartsA {
                Unordered::Plain
            } else {
                Unordered::Distinct
            };
            let k = family.k.ok_or_else(|| usage("missing k"))?;
            colored_by_parts(v, k, l, fam, method)
        }
        FamilyKind::ExactA => exact_of(n, family.colors(), ExactFamily::A, method),
        FamilyKind::ExactB => exact_of(n, family.colors(), ExactFamily::B, method),
        FamilyKind::OrderedExactA => exact_of(n, family.colors(), ExactFamily::OrderedA, method),
        FamilyKind::OrderedExactB => exact_of(n, family.colors(), ExactFamily::OrderedB, method),
        FamilyKind::OrderedA => ordered_colored_of(n, family.colors(), method),
        FamilyKind::OrderedB => ordered_distinct_of(n, family.colors(), method),
        FamilyKind::MuF => moebius_of(n, Moebius::F, method),
        FamilyKind::MuG => moebius_of(n, Moebius::G, method),
        FamilyKind::Divisor => divisor_like_of(n, family.colors(), DivisorKind::Divisor, method),
        FamilyKind::OrderedParts => {
            divisor_like_of(n, family.colors(), DivisorKind::ExactParts, method)
        }
    }
}

type MemoKey = (CountFamily, Method);

fn memo() -> &'static SignatureMemo<MemoKey> {
    static MEMO: OnceLock<SignatureMemo<MemoKey>> = OnceLock::new();
    MEMO.get_or_init(SignatureMemo::new)
}

/// Cached evaluation keyed by `(family, method, prime signature of n)`.
pub fn eval_by_signature(
    family: &CountFamily,
    method: Option<Method>,
    n: &FactoredInteger,
) -> Result<BigCount> {
    let method = method.unwrap_or_else(|| default_method(family.kind, n));
    check_method(family, method)?;
    memo().eval(&(*family, method), n, |c| evaluate(family, c, Some(method)))
}

/// Number of distinct values computed so far by [`eval_by_signature`].
pub fn signature_cache_computations() -> u64 {
    memo().computations()
}

/// `(a(1), ..., a(limit))` via the signature cache.
pub fn sequence(family: &CountFamily, method: Option<Method>, limit: u64) -> Result<ArithSeq> {
    let values = (1..=limit)
        .map(|n| eval_by_signature(family, method, &factorize(n)?))
        .collect::<Result<Vec<_>>>()?;
    ArithSeq::from_values(values)
}

/// `a(π^m)` for `m = 1..=max`, with `π = 2`.
pub fn prime_power_slice(
    family: &CountFamily,
    method: Option<Method>,
    max: u32,
) -> Result<Vec<BigCount>> {
    (1..=max)
        .map(|m| {
            let n = FactoredInteger::from_factors(vec![(2, m)])?;
            eval_by_signature(family, method, &n)
        })
        .collect()
}

/// `a(Q_m)` for `m = 1..=max`, `Q_m` the `m`-th primorial.
pub fn primorial_slice(
    family: &CountFamily,
    method: Option<Method>,
    max: u32,
) -> Result<Vec<BigCount>> {
    (1..=max as usize)
        .map(|m| eval_by_signature(family, method, &primorial(m)?))
        .collect()
}

//! Brute-force reference counts.
//!
//! Nothing here touches the counting module: every value is either the
//! length of an explicit list from [`crate::enumeration`], or a sum of
//! elementary weights over uncolored multisets and sequences.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, divisors, factorial, factorize, multichoose};
use crate::counting::{evaluate, supported_methods, CountFamily, FamilyKind, Method};
use crate::enumeration::{
    enum_colored, enum_factorizations, enum_prime_colored, ColoredFactorization, Flags,
};
use crate::error::{usage, Error, Result};

/// Largest `n` the oracle accepts.
pub const MAX_N: u64 = 10_000;
/// Largest `l` the oracle accepts.
pub const MAX_L: i64 = 4;

const LIST_GUARD: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleMethod {
    /// Length of a filtered explicit list.
    Enumeration,
    /// Combinatorial weights summed over uncolored factorizations.
    Weights,
}

fn flags(kind: FamilyKind) -> Flags {
    use FamilyKind::*;
    Flags {
        ordered: matches!(kind, OrderedA | OrderedB | OrderedExactA | OrderedExactB),
        distinct: matches!(kind, B | ExactB | OrderedB | OrderedExactB | PartsB),
        exact: kind.is_exact(),
    }
}

fn parity_sum(list: &[ColoredFactorization]) -> BigInt {
    list.iter()
        .map(|f| {
            if f.len() % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            }
        })
        .sum()
}

/// Multiplicities of the distinct values of a sorted part list.
fn multiplicities(f: &ColoredFactorization) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let mut last = None;
    for p in &f.parts {
        if last == Some(p.value) {
            *out.last_mut().expect("run started") += 1;
        } else {
            out.push(1);
            last = Some(p.value);
        }
    }
    out
}

fn weight(f: &ColoredFactorization, l: u64, distinct: bool) -> BigInt {
    multiplicities(f)
        .into_iter()
        .map(|m| {
            if distinct {
                binomial(l, m as i64)
            } else {
                multichoose(l, m)
            }
        })
        .product()
}

/// Ordered `l`-tuples of positive integers with product `n`.
fn divisor_tuples(n: u64, l: u32, divs: &[u64]) -> BigInt {
    if l == 0 {
        return if n == 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    divs.iter()
        .filter(|&&d| n.is_multiple_of(d))
        .map(|&d| divisor_tuples(n / d, l - 1, divs))
        .sum()
}

fn by_enumeration(n: u64, family: &CountFamily) -> Result<BigInt> {
    use FamilyKind::*;
    let l = family.l.max(1) as u32;
    let len = |v: Vec<ColoredFactorization>| BigInt::from(v.len());
    Ok(match family.kind {
        A | B | ExactA | ExactB | OrderedA | OrderedB | OrderedExactA | OrderedExactB => {
            let list = enum_colored(n, l, flags(family.kind), LIST_GUARD)?;
            // The exact families are fixed to 0 at n = 1.
            if n == 1 && family.kind.is_exact() {
                BigInt::zero()
            } else {
                BigInt::from(list.len())
            }
        }
        PartsA | PartsB => {
            let k = family.k.ok_or_else(|| usage("missing k"))? as usize;
            let list = enum_colored(n, l, flags(family.kind), LIST_GUARD)?;
            BigInt::from(list.iter().filter(|f| f.len() == k).count())
        }
        MuF => parity_sum(&enum_factorizations(n, false, false, n, LIST_GUARD)?),
        MuG => parity_sum(&enum_factorizations(n, false, true, n, LIST_GUARD)?),
        Divisor => len(enum_prime_colored(n, l, false, LIST_GUARD)?),
        OrderedParts => {
            if n == 1 {
                BigInt::zero()
            } else {
                len(enum_prime_colored(n, l, true, LIST_GUARD)?)
            }
        }
    })
}

fn by_weights(n: u64, family: &CountFamily) -> Result<BigInt> {
    use FamilyKind::*;
    let l = family.l.max(1) as u64;
    let unordered = |distinct| enum_factorizations(n, false, distinct, n, LIST_GUARD);
    Ok(match family.kind {
        A | B => {
            let distinct = family.kind == B;
            unordered(false)?
                .iter()
                .map(|f| weight(f, l, distinct))
                .sum()
        }
        PartsA | PartsB => {
            let k = family.k.ok_or_else(|| usage("missing k"))? as usize;
            let distinct = family.kind == PartsB;
            unordered(false)?
                .iter()
                .filter(|f| f.len() == k)
                .map(|f| weight(f, l, distinct))
                .sum()
        }
        OrderedA => enum_factorizations(n, true, false, n, LIST_GUARD)?
            .iter()
            .map(|f| BigInt::from(l).pow(f.len() as u32))
            .sum(),
        OrderedB => unordered(false)?
            .iter()
            .map(|f| factorial(f.len() as u64) * weight(f, l, true))
            .sum(),
        MuF => parity_sum(&unordered(false)?),
        MuG => parity_sum(&unordered(true)?),
        Divisor => divisor_tuples(n, l as u32, &divisors(&factorize(n)?)),
        OrderedParts => BigInt::from(
            enum_factorizations(n, true, false, n, LIST_GUARD)?
                .iter()
                .filter(|f| f.len() as u64 == l)
                .count(),
        ),
        ExactA | ExactB | OrderedExactA | OrderedExactB => {
            return Err(usage(format!(
                "the weight method does not cover exact-color family {}",
                family.kind
            )))
        }
    })
}

/// Reference value of `family` at `n`.
///
/// Guarded to `n <= 10^4` and `l <= 4`.
pub fn oracle_count(n: u64, family: &CountFamily, method: OracleMethod) -> Result<BigInt> {
    if n > MAX_N || family.l > MAX_L {
        return Err(Error::Resource {
            projected: format!("n = {n}, l = {}", family.l),
            limit: MAX_N,
        });
    }
    match method {
        OracleMethod::Enumeration => by_enumeration(n, family),
        OracleMethod::Weights => by_weights(n, family),
    }
}

/// Whether [`OracleMethod::Weights`] covers this family.
pub fn weights_apply(kind: FamilyKind) -> bool {
    !kind.is_exact()
}

/// A disagreement between a counting method and the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub family: CountFamily,
    pub method: Method,
    pub n: u64,
    pub expected: String,
    pub got: String,
}

/// Outcome of checking one family against the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub kind: FamilyKind,
    pub checks: u64,
    pub mismatches: Vec<Mismatch>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares every supported method for `kind` with the oracle over
/// `n <= max_n`, `l <= max_l` and, for the part-refined families,
/// `k <= Ω(n) + 1`.
pub fn cross_validate(kind: FamilyKind, max_n: u64, max_l: i64) -> Result<FamilyReport> {
    let oracle_method = if weights_apply(kind) {
        OracleMethod::Weights
    } else {
        OracleMethod::Enumeration
    };
    let mut report = FamilyReport {
        kind,
        checks: 0,
        mismatches: Vec::new(),
    };
    let ls: Vec<i64> = if kind.is_moebius() {
        vec![-1]
    } else {
        (1..=max_l).collect()
    };
    for n in 1..=max_n {
        let f = factorize(n)?;
        let methods = supported_methods(kind, &f);
        for &l in &ls {
            let ks: Vec<Option<u32>> = if kind.needs_parts() {
                (0..=f.big_omega() + 1).map(Some).collect()
            } else {
                vec![None]
            };
            for k in ks {
                let family = CountFamily::new(kind, l, k)?;
                let expected = oracle_count(n, &family, oracle_method)?;
                for &method in &methods {
                    let got = evaluate(&family, &f, Some(method))?;
                    report.checks += 1;
                    if got != expected {
                        report.mismatches.push(Mismatch {
                            family,
                            method,
                            n,
                            expected: expected.to_string(),
                            got: got.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(kind: FamilyKind, l: i64, k: Option<u32>) -> CountFamily {
        CountFamily::new(kind, l, k).unwrap()
    }

    #[test]
    fn worked_example() {
        use FamilyKind::*;
        let expect = [
            (A, 16),
            (B, 12),
            (ExactA, 8),
            (ExactB, 6),
            (OrderedA, 42),
            (OrderedB, 30),
            (OrderedExactA, 26),
            (OrderedExactB, 20),
        ];
        for (kind, v) in expect {
            let f = fam(kind, 2, None);
            assert_eq!(
                oracle_count(12, &f, OracleMethod::Enumeration).unwrap(),
                BigInt::from(v),
                "{kind}"
            );
            if weights_apply(kind) {
                assert_eq!(
                    oracle_count(12, &f, OracleMethod::Weights).unwrap(),
                    BigInt::from(v),
                    "{kind}"
                );
            }
        }
    }

    #[test]
    fn moebius_and_divisor() {
        let mug = fam(FamilyKind::MuG, -1, None);
        assert_eq!(
            oracle_count(12, &mug, OracleMethod::Weights).unwrap(),
            BigInt::one()
        );
        let d2 = fam(FamilyKind::Divisor, 2, None);
        for m in [OracleMethod::Enumeration, OracleMethod::Weights] {
            assert_eq!(oracle_count(12, &d2, m).unwrap(), BigInt::from(6));
        }
        let f2 = fam(FamilyKind::OrderedParts, 2, None);
        for m in [OracleMethod::Enumeration, OracleMethod::Weights] {
            assert_eq!(oracle_count(12, &f2, m).unwrap(), BigInt::from(4));
        }
    }

    #[test]
    fn cross_validation_passes() {
        for kind in FamilyKind::ALL {
            let r = cross_validate(kind, 40, 2).unwrap();
            assert!(
                r.passed() && r.checks > 0,
                "{kind}: {:?}",
                r.mismatches.first()
            );
        }
    }

    #[test]
    fn guard() {
        let a = fam(FamilyKind::A, 2, None);
        assert!(matches!(
            oracle_count(10_001, &a, OracleMethod::Weights),
            Err(Error::Resource { .. })
        ));
        let a5 = fam(FamilyKind::A, 5, None);
        assert!(matches!(
            oracle_count(12, &a5, OracleMethod::Weights),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn methods_agree_up_to_120() {
        for n in 1..=120 {
            for l in 1..=3 {
                for kind in FamilyKind::ALL.into_iter().filter(|k| weights_apply(*k)) {
                    let ks: Vec<Option<u32>> = if kind.needs_parts() {
                        (0..=7).map(Some).collect()
                    } else {
                        vec![None]
                    };
                    for k in ks {
                        let f = fam(kind, l, k);
                        assert_eq!(
                            oracle_count(n, &f, OracleMethod::Enumeration).unwrap(),
                            oracle_count(n, &f, OracleMethod::Weights).unwrap(),
                            "{f} at {n}"
                        );
                    }
                }
            }
        }
    }
}

//! Explicit lists of factorizations, plain and colored.
//!
//! Unordered lists are built by the descending-largest-part recursion;
//! colored unordered lists decorate each uncolored multiset with one color
//! multiset (or color set, when distinct) per distinct part value; ordered
//! colored lists are the distinct permutations of the colored multisets.
//! Every list is returned in descending lexicographic order of its part
//! sequences, comparing parts by `(value, color)`.
//!
//! Text form of a factorization: parts `value.color` joined by `*`, e.g.
//! `6.1*2.2`; the empty factorization of 1 is written `1`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, divisors, factorize, multichoose};
use crate::error::{domain, usage, Error, Result};

/// Default cap on the number of factorizations a single call may emit.
pub const DEFAULT_GUARD: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoredPart {
    pub value: u64,
    pub color: u32,
}

impl fmt::Display for ColoredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.value, self.color)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredFactorization {
    pub parts: Vec<ColoredPart>,
    pub ordered: bool,
}

impl ColoredFactorization {
    /// Builds an unordered factorization, sorting parts into canonical order.
    pub fn unordered(mut parts: Vec<ColoredPart>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            parts,
            ordered: false,
        }
    }

    pub fn ordered(parts: Vec<ColoredPart>) -> Self {
        Self {
            parts,
            ordered: true,
        }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Product of the part values, `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.parts
            .iter()
            .try_fold(1u64, |acc, p| acc.checked_mul(p.value))
    }

    /// Whether the parts are in canonical (descending) order.
    pub fn is_canonical(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// No `(value, color)` pair occurs twice.
    pub fn is_distinct(&self) -> bool {
        let mut sorted = self.parts.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Number of different colors used.
    pub fn colors_used(&self) -> usize {
        let mut colors: Vec<u32> = self.parts.iter().map(|p| p.color).collect();
        colors.sort_unstable();
        colors.dedup();
        colors.len()
    }
}

impl fmt::Display for ColoredFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("1");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for ColoredFactorization {
    type Err = Error;

    /// Parses the `value.color` text form; the result is marked ordered and
    /// keeps the given part order.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::ordered(Vec::new()));
        }
        let parts = s
            .split('*')
            .map(|tok| {
                let (v, c) = tok
                    .split_once('.')
                    .ok_or_else(|| usage(format!("part '{tok}' is not value.color")))?;
                let value: u64 = v
                    .parse()
                    .map_err(|_| usage(format!("bad part value '{v}'")))?;
                let color: u32 = c
                    .parse()
                    .map_err(|_| usage(format!("bad part color '{c}'")))?;
                if value < 2 || color < 1 {
                    return Err(usage(format!("part '{tok}' out of range")));
                }
                Ok(ColoredPart { value, color })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::ordered(parts))
    }
}

/// Shape of a colored enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flags {
    pub ordered: bool,
    pub distinct: bool,
    /// Keep only factorizations that use every one of the `l` colors.
    pub exact: bool,
}

fn guard_check(projected: &BigInt, guard: u64) -> Result<()> {
    if *projected > BigInt::from(guard) {
        return Err(Error::Resource {
            projected: projected.to_string(),
            limit: guard,
        });
    }
    Ok(())
}

/// Counts unordered uncolored factorizations for the guard projection.
fn count_multisets(
    n: u64,
    max: u64,
    distinct: bool,
    divs: &[u64],
    memo: &mut HashMap<(u64, u64), BigInt>,
) -> BigInt {
    if n == 1 {
        return BigInt::one();
    }
    let max = max.min(n);
    if let Some(v) = memo.get(&(n, max)) {
        return v.clone();
    }
    let mut acc = BigInt::zero();
    for &d in divs
        .iter()
        .filter(|&&d| d >= 2 && d <= max && n.is_multiple_of(d))
    {
        acc += count_multisets(
            n / d,
            if distinct { d - 1 } else { d },
            distinct,
            divs,
            memo,
        );
    }
    memo.insert((n, max), acc.clone());
    acc
}

fn multisets(
    n: u64,
    max: u64,
    distinct: bool,
    divs: &[u64],
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if n == 1 {
        out.push(prefix.clone());
        return;
    }
    for &d in divs
        .iter()
        .rev()
        .filter(|&&d| d >= 2 && d <= max.min(n) && n.is_multiple_of(d))
    {
        prefix.push(d);
        multisets(
            n / d,
            if distinct { d - 1 } else { d },
            distinct,
            divs,
            prefix,
            out,
        );
        prefix.pop();
    }
}

fn sequences(
    n: u64,
    max: u64,
    distinct: bool,
    divs: &[u64],
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if n == 1 {
        out.push(prefix.clone());
        return;
    }
    for &d in divs
        .iter()
        .rev()
        .filter(|&&d| d >= 2 && d <= max && n.is_multiple_of(d))
    {
        if distinct && prefix.contains(&d) {
            continue;
        }
        prefix.push(d);
        sequences(n / d, max, distinct, divs, prefix, out);
        prefix.pop();
    }
}

fn uncolored(parts: Vec<u64>, ordered: bool) -> ColoredFactorization {
    let parts = parts
        .into_iter()
        .map(|value| ColoredPart { value, color: 1 })
        .collect();
    ColoredFactorization { parts, ordered }
}

fn sort_desc(list: &mut [ColoredFactorization]) {
    list.sort_unstable_by(|a, b| b.parts.cmp(&a.parts));
}

/// Descending multisets of parts `>= 2`, each `<= max_part`, with product `n`.
fn uncolored_multisets(n: u64, distinct: bool, max_part: u64, guard: u64) -> Result<Vec<Vec<u64>>> {
    let divs = divisors(&factorize(n)?);
    let projected = count_multisets(n, max_part, distinct, &divs, &mut HashMap::new());
    guard_check(&projected, guard)?;
    let mut out = Vec::new();
    multisets(n, max_part, distinct, &divs, &mut Vec::new(), &mut out);
    Ok(out)
}

/// All uncolored factorizations of `n` with parts `<= max_part` (every color is 1).
///
/// Unordered factorizations come from the descending-largest-part
/// recursion, ordered ones from a first-part recursion over divisors; with
/// `distinct` no part value repeats.
pub fn enum_factorizations(
    n: u64,
    ordered: bool,
    distinct: bool,
    max_part: u64,
    guard: u64,
) -> Result<Vec<ColoredFactorization>> {
    if n == 0 {
        return Err(domain("cannot factor 0"));
    }
    let mut list: Vec<ColoredFactorization> = if ordered {
        let divs = divisors(&factorize(n)?);
        let mut memo = HashMap::new();
        let projected = count_sequences(n, max_part, &divs, &mut memo);
        guard_check(&projected, guard)?;
        let mut out = Vec::new();
        sequences(n, max_part, distinct, &divs, &mut Vec::new(), &mut out);
        out.into_iter().map(|p| uncolored(p, true)).collect()
    } else {
        uncolored_multisets(n, distinct, max_part, guard)?
            .into_iter()
            .map(|p| uncolored(p, false))
            .collect()
    };
    sort_desc(&mut list);
    Ok(list)
}

fn count_sequences(n: u64, max: u64, divs: &[u64], memo: &mut HashMap<u64, BigInt>) -> BigInt {
    if n == 1 {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut acc = BigInt::zero();
    for &d in divs
        .iter()
        .filter(|&&d| d >= 2 && d <= max && n.is_multiple_of(d))
    {
        acc += count_sequences(n / d, max, divs, memo);
    }
    memo.insert(n, acc.clone());
    acc
}

/// Non-increasing color sequences of length `m` from `1..=l`; strictly
/// decreasing when `distinct`.
fn color_choices(l: u32, m: usize, distinct: bool) -> Vec<Vec<u32>> {
    fn go(max: u32, m: usize, distinct: bool, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for c in (1..=max).rev() {
            prefix.push(c);
            go(if distinct { c - 1 } else { c }, m, distinct, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(l, m, distinct, &mut Vec::new(), &mut out);
    out
}

/// Groups a descending part list into `(value, multiplicity)` runs.
fn runs(parts: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &v in parts {
        match out.last_mut() {
            Some((w, m)) if *w == v => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

fn colorings(parts: &[u64], l: u32, distinct: bool) -> Vec<Vec<ColoredPart>> {
    let mut acc: Vec<Vec<ColoredPart>> = vec![Vec::new()];
    for (value, m) in runs(parts) {
        let choices = color_choices(l, m, distinct);
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for prefix in &acc {
            for colors in &choices {
                let mut p = prefix.clone();
                p.extend(colors.iter().map(|&color| ColoredPart { value, color }));
                next.push(p);
            }
        }
        acc = next;
    }
    acc
}

/// Rearranges `v` into the next lexicographically larger permutation.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn distinct_permutations(parts: &[ColoredPart]) -> Vec<Vec<ColoredPart>> {
    let mut cur = parts.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn projected_colored(multisets: &[Vec<u64>], l: u32, flags: Flags) -> BigInt {
    let mut total = BigInt::zero();
    for parts in multisets {
        let mut weight = BigInt::one();
        let mut perms = BigInt::from(1u8);
        let mut k = 0u64;
        for (_, m) in runs(parts) {
            weight *= if flags.distinct {
                binomial(l as u64, m as i64)
            } else {
                multichoose(l as u64, m as u64)
            };
            k += m as u64;
            perms *= k;
        }
        if flags.ordered {
            // k! bounds the number of distinct orderings.
            weight *= perms;
        }
        total += weight;
    }
    total
}

/// All `l`-colored factorizations of `n` of the requested shape.
///
/// Fails with [`Error::Resource`] when the projected list size exceeds `guard`.
pub fn enum_colored(n: u64, l: u32, flags: Flags, guard: u64) -> Result<Vec<ColoredFactorization>> {
    if l < 1 {
        return Err(domain("l must be >= 1"));
    }
    let multisets = uncolored_multisets(n, false, n, guard)?;
    guard_check(&projected_colored(&multisets, l, flags), guard)?;
    let mut list = Vec::new();
    for parts in &multisets {
        for colored in colorings(parts, l, flags.distinct) {
            if flags.exact && !uses_all_colors(&colored, l) {
                continue;
            }
            if flags.ordered {
                list.extend(
                    distinct_permutations(&colored)
                        .into_iter()
                        .map(ColoredFactorization::ordered),
                );
            } else {
                list.push(ColoredFactorization {
                    parts: colored,
                    ordered: false,
                });
            }
        }
    }
    sort_desc(&mut list);
    Ok(list)
}

fn uses_all_colors(parts: &[ColoredPart], l: u32) -> bool {
    let mut seen = vec![false; l as usize + 1];
    for p in parts {
        seen[p.color as usize] = true;
    }
    seen[1..].iter().all(|&s| s)
}

/// Unordered `l`-colored factorizations of `n` into prime parts.
pub fn enum_prime_colored(
    n: u64,
    l: u32,
    exact: bool,
    guard: u64,
) -> Result<Vec<ColoredFactorization>> {
    if l < 1 {
        return Err(domain("l must be >= 1"));
    }
    let f = factorize(n)?;
    let projected: BigInt = f
        .exponents()
        .map(|e| multichoose(l as u64, e as u64))
        .product();
    guard_check(&projected, guard)?;
    let mut primes: Vec<u64> = Vec::new();
    for &(p, e) in f.factors().iter().rev() {
        primes.extend(std::iter::repeat_n(p, e as usize));
    }
    let mut list: Vec<ColoredFactorization> = colorings(&primes, l, false)
        .into_iter()
        .filter(|c| !exact || uses_all_colors(c, l))
        .map(|parts| ColoredFactorization {
            parts,
            ordered: false,
        })
        .collect();
    sort_desc(&mut list);
    Ok(list)
}

/// Rough size of a list, for callers that want to pre-check guards.
pub fn projected_size(n: u64, l: u32, flags: Flags) -> Result<u64> {
    let multisets = uncolored_multisets(n, false, n, u64::MAX)?;
    Ok(projected_colored(&multisets, l, flags)
        .to_u64()
        .unwrap_or(u64::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(list: &[ColoredFactorization]) -> Vec<String> {
        list.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn uncolored_twelve() {
        let list = enum_factorizations(12, false, false, 12, DEFAULT_GUARD).unwrap();
        assert_eq!(
            strings(&list),
            ["12.1", "6.1*2.1", "4.1*3.1", "3.1*2.1*2.1"]
        );
        let list = enum_factorizations(12, false, true, 12, DEFAULT_GUARD).unwrap();
        assert_eq!(list.len(), 3);
        let list = enum_factorizations(1, true, false, 1, DEFAULT_GUARD).unwrap();
        assert_eq!(strings(&list), ["1"]);
        let list = enum_factorizations(12, true, false, 12, DEFAULT_GUARD).unwrap();
        assert_eq!(list.len(), 8);
        let list = enum_factorizations(12, true, true, 12, DEFAULT_GUARD).unwrap();
        assert_eq!(list.len(), 5);
        let list = enum_factorizations(12, false, false, 4, DEFAULT_GUARD).unwrap();
        assert_eq!(strings(&list), ["4.1*3.1", "3.1*2.1*2.1"]);
    }

    #[test]
    fn colored_twelve() {
        let f = |ordered, distinct, exact| {
            enum_colored(
                12,
                2,
                Flags {
                    ordered,
                    distinct,
                    exact,
                },
                DEFAULT_GUARD,
            )
            .unwrap()
            .len()
        };
        assert_eq!(f(false, false, false), 16);
        assert_eq!(f(false, true, false), 12);
        assert_eq!(f(false, false, true), 8);
        assert_eq!(f(false, true, true), 6);
        assert_eq!(f(true, false, false), 42);
        assert_eq!(f(true, true, false), 30);
        assert_eq!(f(true, false, true), 26);
        assert_eq!(f(true, true, true), 20);
    }

    #[test]
    fn distinct_exact_list_matches_worked_example() {
        let list = enum_colored(
            12,
            2,
            Flags {
                ordered: false,
                distinct: true,
                exact: true,
            },
            DEFAULT_GUARD,
        )
        .unwrap();
        assert_eq!(
            strings(&list),
            [
                "6.2*2.1",
                "6.1*2.2",
                "4.2*3.1",
                "4.1*3.2",
                "3.2*2.2*2.1",
                "3.1*2.2*2.1"
            ]
        );
    }

    #[test]
    fn prime_colored() {
        assert_eq!(
            enum_prime_colored(12, 2, false, DEFAULT_GUARD)
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            enum_prime_colored(12, 2, true, DEFAULT_GUARD)
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            strings(&enum_prime_colored(1, 2, false, DEFAULT_GUARD).unwrap()),
            ["1"]
        );
    }

    #[test]
    fn guard_reports_projection() {
        let err = enum_colored(
            720,
            3,
            Flags {
                ordered: true,
                ..Flags::default()
            },
            100,
        )
        .unwrap_err();
        match err {
            Error::Resource { projected, limit } => {
                assert_eq!(limit, 100);
                assert!(projected.parse::<u64>().unwrap() > 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_form_round_trips() {
        for s in ["6.1*2.2", "1", "3.2*2.2*2.1"] {
            assert_eq!(s.parse::<ColoredFactorization>().unwrap().to_string(), s);
        }
        assert!("6*2".parse::<ColoredFactorization>().is_err());
        assert!("1.1".parse::<ColoredFactorization>().is_err());
        assert!("6.0".parse::<ColoredFactorization>().is_err());
    }

    #[test]
    fn invariants_up_to_120() {
        for n in 1..=120u64 {
            for l in 1..=2 {
                for bits in 0..8u8 {
                    let flags = Flags {
                        ordered: bits & 1 != 0,
                        distinct: bits & 2 != 0,
                        exact: bits & 4 != 0,
                    };
                    let list = enum_colored(n, l, flags, DEFAULT_GUARD).unwrap();
                    let mut seen = std::collections::HashSet::new();
                    for fz in &list {
                        assert_eq!(fz.product(), Some(n));
                        assert!(fz
                            .parts
                            .iter()
                            .all(|p| p.value >= 2 && (1..=l).contains(&p.color)));
                        if !flags.ordered {
                            assert!(fz.is_canonical());
                            assert_eq!(ColoredFactorization::unordered(fz.parts.clone()), *fz);
                        }
                        if flags.distinct {
                            assert!(fz.is_distinct());
                        }
                        if flags.exact {
                            assert_eq!(fz.colors_used(), l as usize);
                        }
                        assert!(seen.insert(fz.parts.clone()), "duplicate {fz}");
                    }
                }
            }
        }
    }
}

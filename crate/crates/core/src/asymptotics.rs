//! Riemann zeta on the real axis and the average order of `Ã_l`.
//!
//! `Σ_{n<=x} Ã_l(n)` grows like `x^β / (β · l · |ζ'(β)|)` where
//! `ζ(β) = (l+1)/l`. Floating point is confined to this module; the partial
//! sums themselves are exact.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest `x` accepted by [`average_order_report`].
pub const MAX_X: u64 = 10_000_000;

const EM_CUTOFF: u32 = 50;

// B_2, B_4, ..., B_12
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

fn check_s(s: f64) -> Result<()> {
    if !s.is_finite() || s <= 1.0 + 1e-6 {
        return Err(domain(format!(
            "zeta is evaluated only for s > 1 + 1e-6, got {s}"
        )));
    }
    Ok(())
}

/// Returns `(ζ(s), ζ'(s))` by Euler-Maclaurin summation.
fn zeta_pair(s: f64) -> (f64, f64) {
    let m = EM_CUTOFF as f64;
    let ln_m = m.ln();
    let mut z = 0.0;
    let mut dz = 0.0;
    for n in (1..EM_CUTOFF).rev() {
        let nf = n as f64;
        let t = nf.powf(-s);
        z += t;
        dz -= t * nf.ln();
    }
    let ms = m.powf(-s);
    let tail = m * ms / (s - 1.0);
    z += tail + 0.5 * ms;
    dz += -tail * ln_m - tail / (s - 1.0) - 0.5 * ms * ln_m;

    // Σ_j B_{2j}/(2j)! · s(s+1)...(s+2j-2) · M^{-s-2j+1}
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut d_rising = 1.0; // derivative of `rising` in s
    let mut fact = 2.0; // (2j)!
    let mut mpow = ms / m; // M^{-s-2j+1}
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = b / fact * rising * mpow;
        z += term;
        dz += b / fact * (d_rising - rising * ln_m) * mpow;
        let j = j as f64 + 1.0;
        // extend the rising product by (s+2j-1)(s+2j)
        let (a, c) = (s + 2.0 * j - 1.0, s + 2.0 * j);
        d_rising = d_rising * a * c + rising * (a + c);
        rising *= a * c;
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        mpow /= m * m;
    }
    (z, dz)
}

/// Riemann zeta for real `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(zeta_pair(s).0)
}

/// Derivative of the Riemann zeta function for real `s > 1`.
pub fn zeta_prime(s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(zeta_pair(s).1)
}

/// Growth constants of the partial sums of `Ã_l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    pub l: u64,
    /// Root of `ζ(β) = (l+1)/l`.
    pub beta: f64,
    /// `-1 / (l β ζ'(β))`, the mean-value constant.
    pub alpha: f64,
    /// `-1 / (l ζ'(β))`, the residue of the generating function at `β`.
    pub alpha_residue: f64,
    /// `|ζ(β) - (l+1)/l|`.
    pub residual: f64,
}

/// Solves `ζ(β) = (l+1)/l` by bisection on `[1 + 1e-6, 40]` followed by Newton polishing.
pub fn solve_beta(l: u64) -> Result<AsymptoticParams> {
    if l == 0 {
        return Err(domain("l must be >= 1"));
    }
    let target = (l as f64 + 1.0) / l as f64;
    let f = |s: f64| zeta_pair(s).0 - target;
    let (mut lo, mut hi) = (1.0 + 1e-6, 40.0);
    if f(hi) > 0.0 {
        return Err(domain(format!("(l+1)/l is too close to 1 for l = {l}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..8 {
        let (z, dz) = zeta_pair(beta);
        let step = (z - target) / dz;
        let next = beta - step;
        if !(lo..=hi).contains(&next) {
            break;
        }
        beta = next;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let (z, dz) = zeta_pair(beta);
    let lf = l as f64;
    Ok(AsymptoticParams {
        l,
        beta,
        alpha: -1.0 / (lf * beta * dz),
        alpha_residue: -1.0 / (lf * dz),
        residual: (z - target).abs(),
    })
}

fn sieve_u128(l: u64, x: usize) -> Option<Vec<u128>> {
    let mut a = vec![0u128; x + 1];
    a[1] = 1;
    let l = l as u128;
    for d in 1..=x {
        let add = a[d].checked_mul(l)?;
        let mut m = 2 * d;
        while m <= x {
            a[m] = a[m].checked_add(add)?;
            m += d;
        }
    }
    Some(a)
}

fn sieve_big(l: u64, x: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::zero(); x + 1];
    a[1] = BigInt::from(1);
    for d in 1..=x {
        let add = &a[d] * l;
        let mut m = 2 * d;
        while m <= x {
            a[m] += &add;
            m += d;
        }
    }
    a
}

/// `Ã_l(1..=x)` by the divisor-sum sieve `Ã_l(n) = l Σ_{d|n, d<n} Ã_l(d)`.
pub fn ordered_colored_sieve(l: u64, x: u64) -> Result<Vec<BigInt>> {
    if x > MAX_X {
        return Err(Error::Resource {
            projected: x.to_string(),
            limit: MAX_X,
        });
    }
    let x = x as usize;
    let mut v = match sieve_u128(l, x) {
        Some(a) => a.into_iter().map(BigInt::from).collect(),
        None => sieve_big(l, x),
    };
    v.remove(0);
    Ok(v)
}

fn partial_sum(l: u64, x: usize) -> BigInt {
    match sieve_u128(l, x) {
        Some(a) => a
            .iter()
            .try_fold(0u128, |acc, v| acc.checked_add(*v))
            .map_or_else(|| a.iter().map(|&v| BigInt::from(v)).sum(), BigInt::from),
        None => sieve_big(l, x).into_iter().sum(),
    }
}

/// Empirical versus predicted mean of `Ã_l(n)` over `n <= x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageOrderReport {
    pub l: u64,
    pub x: u64,
    /// Exact `Σ_{n<=x} Ã_l(n)` in decimal.
    pub sum: String,
    pub beta: f64,
    pub alpha: f64,
    /// `sum / x`
    pub empirical: f64,
    /// `alpha · x^(beta-1)`
    pub predicted: f64,
    /// `empirical / predicted`
    pub ratio: f64,
    /// The same ratio computed with the residue constant instead of `alpha`.
    pub ratio_residue: f64,
}

pub fn average_order_report(l: u64, x: u64) -> Result<AverageOrderReport> {
    average_order_report_guarded(l, x, MAX_X)
}

/// [`average_order_report`] with a caller-chosen bound on `x`.
pub fn average_order_report_guarded(l: u64, x: u64, max_x: u64) -> Result<AverageOrderReport> {
    if x > max_x {
        return Err(Error::Resource {
            projected: x.to_string(),
            limit: max_x,
        });
    }
    if x == 0 {
        return Err(domain("x must be >= 1"));
    }
    let params = solve_beta(l)?;
    let sum = partial_sum(l, x as usize);
    let xf = x as f64;
    let empirical = sum.to_f64().unwrap_or(f64::INFINITY) / xf;
    let growth = xf.powf(params.beta - 1.0);
    let predicted = params.alpha * growth;
    Ok(AverageOrderReport {
        l,
        x,
        sum: sum.to_string(),
        beta: params.beta,
        alpha: params.alpha,
        empirical,
        predicted,
        ratio: empirical / predicted,
        ratio_residue: empirical / (params.alpha_residue * growth),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((zeta(2.0).unwrap() - pi2_6).abs() < 1e-12);
        assert!((zeta(4.0).unwrap() - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-12);
        assert!(zeta(30.0).unwrap() - 1.0 < 1e-9);
        assert!(zeta(30.0).unwrap() > 1.0);
        assert!(matches!(zeta(1.0), Err(Error::Domain(_))));
        assert!(matches!(zeta_prime(0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta_near_one() {
        // ζ(s) = 1/(s-1) + γ + O(s-1)
        let gamma = 0.577_215_664_901_532_9;
        let s = 1.0 + 1e-5;
        assert!((zeta(s).unwrap() - 1.0 / (s - 1.0) - gamma).abs() < 1e-4);
    }

    #[test]
    fn zeta_prime_matches_finite_difference() {
        for s in [1.2, 1.5, 1.7286, 2.0, 3.0, 7.5, 20.0] {
            let h = 1e-6;
            let fd = (zeta(s + h).unwrap() - zeta(s - h).unwrap()) / (2.0 * h);
            assert!((zeta_prime(s).unwrap() - fd).abs() < 1e-8, "s = {s}");
        }
        // ζ'(2) = -0.9375482543...
        assert!((zeta_prime(2.0).unwrap() + 0.937_548_254_315_843_8).abs() < 1e-12);
    }

    #[test]
    fn kalmar_constant() {
        let p = solve_beta(1).unwrap();
        assert!((p.beta - 1.728_647_238_998_183).abs() < 1e-9);
        assert!(p.residual <= 1e-10);
        assert!((p.alpha - 0.318_173_6).abs() < 1e-6);
    }

    #[test]
    fn beta_increases_with_l() {
        let betas: Vec<f64> = (1..=10).map(|l| solve_beta(l).unwrap().beta).collect();
        assert!(betas.windows(2).all(|w| w[0] < w[1]));
        for (l, b) in (1..=10).zip(&betas) {
            let r = (zeta(*b).unwrap() - (l as f64 + 1.0) / l as f64).abs();
            assert!(r <= 1e-10);
        }
    }

    #[test]
    fn sieve_prefix() {
        let v = ordered_colored_sieve(1, 8).unwrap();
        let expect: Vec<BigInt> = [1, 1, 1, 2, 1, 3, 1, 4]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(v, expect);
        assert_eq!(ordered_colored_sieve(2, 12).unwrap()[11], BigInt::from(42));
        assert!(matches!(
            ordered_colored_sieve(1, MAX_X + 1),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn big_fallback_matches() {
        let a: Vec<BigInt> = sieve_u128(5, 5000)
            .unwrap()
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(a, sieve_big(5, 5000));
    }
}

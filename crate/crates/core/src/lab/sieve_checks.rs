//! Finite checks of the two sieve lemmas and of the reciprocal prime sum
//! over primes where some `F_k(p)` shares a factor with `q`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::arith::{for_each_prime, is_prime, mul_mod, primes_up_to, CompensatedSum};
use crate::error::{Error, Result};
use crate::multfun::{map_segments, MultiplicativeFunction, ResidueFunction, SieveConfig};
use crate::polynomials::IntPolynomial;

use super::distribution::segment_residues;

/// Upper end accepted by the lemma checks.
pub const MAX_CHECK_X: u64 = 100_000_000;

fn check_x(x: u64) -> Result<()> {
    if !(2..=MAX_CHECK_X).contains(&x) {
        return Err(Error::InvalidParameters(format!(
            "x = {x} must lie in [2, 1e8]"
        )));
    }
    Ok(())
}

fn check_q(q: u64) -> Result<()> {
    if q.is_multiple_of(2) {
        return Err(Error::EvenPrime(2));
    }
    if q < 3 {
        return Err(Error::InvalidParameters("q must be at least 3".into()));
    }
    Ok(())
}

/// Primes `p <= x` with `gcd(F_1(p) ... F_K(p), q) > 1`.
fn flagged_primes(x: u64, q: u64, polys: &[IntPolynomial]) -> Vec<u64> {
    let reduced: Vec<_> = polys.iter().map(|f| f.reduce_mod(q)).collect();
    let mut out = Vec::new();
    for_each_prime(2, x, |p| {
        let v = reduced
            .iter()
            .fold(1 % q, |acc, f| mul_mod(acc, f.eval(p % q), q));
        if v.gcd(&q) > 1 {
            out.push(p);
        }
    });
    out
}

fn product_tree(values: &[u64]) -> BigUint {
    match values.len() {
        0 => BigUint::from(1u32),
        1 => BigUint::from(values[0]),
        n => product_tree(&values[..n / 2]) * product_tree(&values[n / 2..]),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LowerBoundStatus {
    Pass,
    /// Below the bound. The lemma only holds for large `x`.
    Flag,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoprimeLowerBound {
    pub x: u64,
    pub q: u64,
    pub family: Vec<String>,
    /// `#{n <= x : gcd(f(n), q) = 1}` for `f = f_1 ... f_K`
    pub count: u64,
    pub flagged_primes: usize,
    /// `prod (1 - 1/p)` over flagged primes
    pub product: f64,
    /// `x/20 * product`
    pub bound: f64,
    pub status: LowerBoundStatus,
}

/// Compares the number of `n <= x` with `f(n)` coprime to `q` against
/// `x/20 * prod_{p <= x flagged} (1 - 1/p)`. The comparison is exact:
/// `20 count prod p >= x prod (p - 1)`.
pub fn coprime_lower_bound_check(
    x: u64,
    q: u64,
    functions: &[MultiplicativeFunction],
) -> Result<CoprimeLowerBound> {
    check_x(x)?;
    check_q(q)?;
    if functions.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let k = functions.len() as u64;
    let residues: Vec<ResidueFunction> = functions.iter().map(|f| f.residues(q)).collect();
    let count = map_segments(
        x,
        &SieveConfig::default(),
        8 + 8 * k,
        |a, b, base| {
            let mut values = Vec::new();
            segment_residues(a, b, base, &residues, &mut values);
            values
                .chunks_exact(k as usize)
                .filter(|ys| ys.iter().all(|y| y.gcd(&q) == 1))
                .count() as u64
        },
        0u64,
        |s, t| s + t,
    )?;
    let polys: Vec<IntPolynomial> = functions.iter().map(|f| f.prime_poly().clone()).collect();
    let flagged = flagged_primes(x, q, &polys);
    let minus: Vec<u64> = flagged.iter().map(|p| p - 1).collect();
    let lhs = BigUint::from(count) * 20u32 * product_tree(&flagged);
    let rhs = BigUint::from(x) * product_tree(&minus);
    let mut log = CompensatedSum::default();
    for &p in &flagged {
        log.add((-1.0 / p as f64).ln_1p());
    }
    let product = log.value().exp();
    Ok(CoprimeLowerBound {
        x,
        q,
        family: functions.iter().map(|f| f.name().to_string()).collect(),
        count,
        flagged_primes: flagged.len(),
        product,
        bound: x as f64 / 20.0 * product,
        status: if lhs >= rhs {
            LowerBoundStatus::Pass
        } else {
            LowerBoundStatus::Flag
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReciprocalSum {
    pub x: u64,
    pub q: u64,
    pub flagged_primes: usize,
    /// `sum 1/p` over flagged primes
    pub sum: f64,
    /// Bound on the rounding error of `sum`.
    pub rounding_budget: f64,
    /// `prod (1 - 1/p)` over flagged primes
    pub product: f64,
}

/// `sum_{p <= x, gcd(F_1(p) ... F_K(p), q) > 1} 1/p`.
pub fn remark_b_product(x: u64, q: u64, polys: &[IntPolynomial]) -> Result<ReciprocalSum> {
    check_x(x)?;
    if q < 2 {
        return Err(Error::InvalidParameters("q must be at least 2".into()));
    }
    let flagged = flagged_primes(x, q, polys);
    let (mut sum, mut log) = (CompensatedSum::default(), CompensatedSum::default());
    for &p in &flagged {
        sum.add(1.0 / p as f64);
        log.add((-1.0 / p as f64).ln_1p());
    }
    let value = sum.value();
    Ok(ReciprocalSum {
        x,
        q,
        flagged_primes: flagged.len(),
        sum: value,
        rounding_budget: (flagged.len() as f64 + 2.0) * value * f64::EPSILON,
        product: log.value().exp(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiftedCount {
    pub u: u64,
    pub v: u64,
    pub z: u64,
    pub primes: usize,
    /// `#{u < n <= v : n != a_p mod p for every chosen p}`
    pub count: u64,
    /// `X prod (1 - 1/p)`
    pub main_term: f64,
    /// `count / main_term - 1`
    pub relative_error: f64,
    /// `exp(-log X / (2 log Z))`
    pub lemma_scale: f64,
    pub within_lemma_scale: bool,
}

/// Largest interval length scanned directly.
pub const MAX_SIFT_LENGTH: u64 = 100_000_000;

/// Sifts `(u, v]` by one forbidden class per prime.
pub fn sifted_interval_count(
    u: u64,
    v: u64,
    z: u64,
    choices: &BTreeMap<u64, u64>,
) -> Result<SiftedCount> {
    let len = v.saturating_sub(u);
    if !(z >= 3 && len >= z) {
        return Err(Error::InvalidParameters(format!(
            "need v - u >= z >= 3, got X = {len}, z = {z}"
        )));
    }
    if len > MAX_SIFT_LENGTH {
        return Err(Error::ComplexityGate(format!(
            "interval length {len} exceeds {MAX_SIFT_LENGTH}"
        )));
    }
    if let Some((&p, _)) = choices.iter().find(|(&p, _)| p > z || !is_prime(p)) {
        return Err(Error::InvalidParameters(format!("{p} is not a prime <= z")));
    }
    let mut alive = vec![true; len as usize];
    let mut log = CompensatedSum::default();
    for (&p, &a) in choices {
        // first n > u with n = a mod p
        let start = u + 1 + (a % p + p - (u + 1) % p) % p;
        let mut n = start;
        while n <= v {
            alive[(n - u - 1) as usize] = false;
            n += p;
        }
        log.add((-1.0 / p as f64).ln_1p());
    }
    let count = alive.iter().filter(|&&b| b).count() as u64;
    let main_term = len as f64 * log.value().exp();
    let relative_error = count as f64 / main_term - 1.0;
    let lemma_scale = (-0.5 * (len as f64).ln() / (z as f64).ln()).exp();
    Ok(SiftedCount {
        u,
        v,
        z,
        primes: choices.len(),
        count,
        main_term,
        relative_error,
        lemma_scale,
        within_lemma_scale: relative_error.abs() <= lemma_scale,
    })
}

/// `a_p = a` for every prime `p <= z`.
pub fn constant_choices(z: u64, a: u64) -> BTreeMap<u64, u64> {
    primes_up_to(z).into_iter().map(|p| (p, a % p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    fn id_phi_sigma() -> Vec<MultiplicativeFunction> {
        vec![
            MultiplicativeFunction::identity(),
            MultiplicativeFunction::euler_phi(),
            MultiplicativeFunction::sigma(),
        ]
    }

    #[test]
    fn coprime_count_matches_enumeration() {
        let fs = id_phi_sigma();
        for (x, q) in [(3000u64, 17u64), (2000, 15), (500, 3)] {
            let r = coprime_lower_bound_check(x, q, &fs).unwrap();
            let want = (1..=x)
                .filter(|&n| {
                    let fac = factorize(n);
                    let prod: BigInt = fs.iter().map(|f| f.eval_factored(&fac)).product();
                    (prod % q).to_u64().unwrap().gcd(&q) == 1
                })
                .count() as u64;
            assert_eq!(r.count, want, "x={x} q={q}");
            let brute: f64 = primes_up_to(x)
                .into_iter()
                .filter(|&p| {
                    ((p as u128 * (p as u128 - 1) * (p as u128 + 1)) % q as u128).gcd(&(q as u128))
                        > 1
                })
                .map(|p| 1.0 - 1.0 / p as f64)
                .product();
            assert!((r.product - brute).abs() < 1e-12);
            assert_eq!(
                r.status == LowerBoundStatus::Pass,
                r.count as f64 >= r.bound
            );
        }
    }

    #[test]
    fn huge_prime_modulus_flags_nothing() {
        let q = 1_000_000_007;
        let r =
            coprime_lower_bound_check(10_000, q, &[MultiplicativeFunction::identity()]).unwrap();
        assert_eq!((r.count, r.flagged_primes, r.product), (10_000, 0, 1.0));
        assert_eq!(r.bound, 500.0);
        assert_eq!(r.status, LowerBoundStatus::Pass);
        assert_eq!(
            remark_b_product(10_000, q, &[IntPolynomial::from_coeffs(&[-1, 1])])
                .unwrap()
                .sum,
            0.0
        );
    }

    #[test]
    fn reciprocal_sums() {
        let t = remark_b_product(1_000_000, 17, &[IntPolynomial::t()]).unwrap();
        assert_eq!(t.flagged_primes, 1);
        assert_eq!(t.sum, 1.0 / 17.0);
        let r = remark_b_product(100_000, 17, &[IntPolynomial::from_coeffs(&[-1, 1])]).unwrap();
        let mut want = 0.0;
        for p in primes_up_to(100_000).into_iter().filter(|p| p % 17 == 1) {
            want += 1.0 / p as f64;
        }
        assert!((r.sum - want).abs() < 1e-12);
        assert!(r.rounding_budget > 0.0);
    }

    #[test]
    fn sift_examples() {
        let two = BTreeMap::from([(2u64, 0u64)]);
        let r = sifted_interval_count(0, 10_000, 3, &two).unwrap();
        assert_eq!(
            (r.count, r.main_term, r.relative_error),
            (5000, 5000.0, 0.0)
        );
        let r = sifted_interval_count(7, 10_007, 5, &BTreeMap::new()).unwrap();
        assert_eq!(r.count, 10_000);
        let r = sifted_interval_count(0, 1000, 7, &constant_choices(7, 1)).unwrap();
        let want = (1..=1000u64)
            .filter(|n| [2, 3, 5, 7].iter().all(|p| n % p != 1 % p))
            .count() as u64;
        assert_eq!(r.count, want);
        assert!(sifted_interval_count(0, 1000, 5, &constant_choices(7, 0)).is_err());
        assert!(sifted_interval_count(0, 2, 3, &two).is_err());
    }
}

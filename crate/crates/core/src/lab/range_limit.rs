//! Primes in one residue class mod a small prime `p` overload a single class
//! tuple mod `p` once `p` is about `(log x)^(1/(K-1))`.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{for_each_prime, is_prime};
use crate::error::{Error, Result};
use crate::polynomials::IntPolynomial;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RangeLimitReport {
    pub x: u64,
    pub k: usize,
    pub p0: u64,
    /// `2 (log x)^(1/(K-1))`
    pub big_x: f64,
    /// Primes in `(2X/3, X]`.
    pub candidates: Vec<u64>,
    pub p: u64,
    /// `F_k(p0) mod p`, the class tuple every counted prime lands in.
    pub class: Vec<u64>,
    /// `#{primes n <= x : n = p0 mod p}`
    pub lower_count: u64,
    /// `4x / (3 p^K)`
    pub threshold: f64,
    pub pass: bool,
}

/// Counts primes `n <= x` with `n = p0 mod p`; each has `f_k(n) = F_k(n) = F_k(p0) mod p`.
/// Without an explicit `p` the smallest candidate is used.
pub fn range_limit_demo(
    x: u64,
    polys: &[IntPolynomial],
    p0: u64,
    p: Option<u64>,
) -> Result<RangeLimitReport> {
    let k = polys.len();
    if k < 2 {
        return Err(Error::InvalidParameters(
            "construction requires K >= 2".into(),
        ));
    }
    if !(16..=crate::multfun::MAX_SIEVE).contains(&x) {
        return Err(Error::InvalidParameters(format!(
            "x = {x} must lie in [16, 1e9]"
        )));
    }
    if !is_prime(p0) {
        return Err(Error::NotPrime(p0));
    }
    let big_x = 2.0 * (x as f64).ln().powf(1.0 / (k - 1) as f64);
    let lo = 2.0 * big_x / 3.0;
    let candidates: Vec<u64> = (lo.floor() as u64 + 1..=big_x.floor() as u64)
        .filter(|&n| is_prime(n) && n as f64 > lo)
        .collect();
    if candidates.is_empty() {
        return Err(Error::NoPrimeInInterval { lo, hi: big_x });
    }
    let p = match p {
        Some(p) if candidates.contains(&p) => p,
        Some(p) => {
            return Err(Error::Precondition(format!(
                "{p} is not a prime in ({lo:.3}, {big_x:.3}]; candidates {candidates:?}"
            )))
        }
        None => candidates[0],
    };
    let mut class = Vec::with_capacity(k);
    for f in polys {
        let exact = f.eval(&p0.into());
        let r = f.eval_mod(p0 as i64, p);
        if exact == 0.into() || r.gcd(&p) != 1 {
            return Err(Error::Precondition(format!(
                "F({p0}) = {exact} is not a unit mod {p}"
            )));
        }
        class.push(r);
    }
    let mut lower_count = 0;
    let target = p0 % p;
    for_each_prime(2, x, |n| {
        if n % p == target {
            lower_count += 1;
        }
    });
    let threshold = 4.0 * x as f64 / (3.0 * (p as f64).powi(k as i32));
    Ok(RangeLimitReport {
        x,
        k,
        p0,
        big_x,
        candidates,
        p,
        class,
        lower_count,
        threshold,
        pass: lower_count as f64 >= threshold,
    })
}

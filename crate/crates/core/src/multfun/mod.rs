//! Polynomial-like multiplicative functions evaluated through sieves.
//!
//! A function is fixed by its prime polynomial `F` (so that `f(p) = F(p)`)
//! together with an explicit rule for higher prime powers. The rule is part
//! of the function: `n -> (F(p) = p - 1)` is satisfied both by Euler's
//! totient and by the completely multiplicative function with
//! `f(p^e) = (p - 1)^e`, and the two differ at `n = 12`.

mod semismooth;
mod sieve;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::mul_mod;
use crate::error::{Error, Result};
use crate::polynomials::{IntPolynomial, ReducedPoly};

pub use semismooth::{semismooth_count, SemismoothReport};
pub use sieve::{
    build_spf, build_spf_with, map_segments, scan_segment, SieveConfig, SpfTable,
    DEFAULT_SEGMENT_WIDTH, MAX_SIEVE,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PrimePowerRule {
    /// `f(p^e) = F(p)^e`
    CompletelyMult,
    /// `f(p^e) = p^e - p^(e-1)`
    EulerPhi,
    /// `f(p^e) = 1 + p + ... + p^e`
    Sigma,
    /// `f(p^e) = p^e`
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativeFunction {
    name: String,
    prime_poly: IntPolynomial,
    rule: PrimePowerRule,
}

impl MultiplicativeFunction {
    pub fn identity() -> Self {
        Self {
            name: "id".into(),
            prime_poly: IntPolynomial::t(),
            rule: PrimePowerRule::Identity,
        }
    }

    pub fn euler_phi() -> Self {
        Self {
            name: "phi".into(),
            prime_poly: IntPolynomial::from_coeffs(&[-1, 1]),
            rule: PrimePowerRule::EulerPhi,
        }
    }

    pub fn sigma() -> Self {
        Self {
            name: "sigma".into(),
            prime_poly: IntPolynomial::from_coeffs(&[1, 1]),
            rule: PrimePowerRule::Sigma,
        }
    }

    pub fn completely_multiplicative(prime_poly: IntPolynomial) -> Self {
        Self {
            name: format!("cm[{prime_poly}]"),
            prime_poly,
            rule: PrimePowerRule::CompletelyMult,
        }
    }

    /// Parses a preset name (`id`, `phi`, `sigma`) or a JSON coefficient
    /// list such as `[0,-1,0,1]`, which yields a completely multiplicative
    /// function.
    pub fn from_token(token: &str) -> Result<Self> {
        match token.trim() {
            "id" => Ok(Self::identity()),
            "phi" => Ok(Self::euler_phi()),
            "sigma" => Ok(Self::sigma()),
            t if t.starts_with('[') => serde_json::from_str::<IntPolynomial>(t)
                .map(Self::completely_multiplicative)
                .map_err(|e| Error::Parse(format!("bad coefficient list {t}: {e}"))),
            t => Err(Error::Parse(format!(
                "unknown function '{t}' (expected id, phi, sigma or a coefficient list)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prime_poly(&self) -> &IntPolynomial {
        &self.prime_poly
    }

    pub fn rule(&self) -> PrimePowerRule {
        self.rule
    }

    /// Exact `f(p^e)`.
    pub fn prime_power(&self, p: u64, e: u32) -> BigInt {
        let pb = BigInt::from(p);
        match self.rule {
            PrimePowerRule::CompletelyMult => {
                num_traits::pow(self.prime_poly.eval(&pb), e as usize)
            }
            PrimePowerRule::EulerPhi => {
                if e == 0 {
                    BigInt::one()
                } else {
                    num_traits::pow(pb.clone(), e as usize - 1) * (pb - 1)
                }
            }
            PrimePowerRule::Sigma => (0..=e).fold(BigInt::from(0), |acc, _| acc * &pb + 1),
            PrimePowerRule::Identity => num_traits::pow(pb, e as usize),
        }
    }

    /// `f(n)` from the factorization of `n`.
    pub fn eval_factored(&self, factors: &[(u64, u32)]) -> BigInt {
        factors
            .iter()
            .fold(BigInt::one(), |acc, &(p, e)| acc * self.prime_power(p, e))
    }

    /// Residue form of the function modulo `q`, for sieve loops.
    pub fn residues(&self, q: u64) -> ResidueFunction {
        assert!(
            q >= 1 && q <= u32::MAX as u64,
            "modulus must fit in 32 bits"
        );
        ResidueFunction {
            rule: self.rule,
            poly: self.prime_poly.reduce_mod(q),
            q,
        }
    }
}

impl fmt::Display for MultiplicativeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `f(p^e) mod q` without materializing `f(p^e)`.
#[derive(Clone, Debug)]
pub struct ResidueFunction {
    rule: PrimePowerRule,
    poly: ReducedPoly,
    q: u64,
}

impl ResidueFunction {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `F(p) mod q`.
    #[inline]
    pub fn at_prime(&self, p: u64) -> u64 {
        self.poly.eval(p)
    }

    #[inline]
    pub fn prime_power(&self, p: u64, e: u32) -> u64 {
        let q = self.q;
        let pm = p % q;
        match (self.rule, e) {
            (_, 0) => 1 % q,
            (_, 1) => self.poly.eval(pm),
            (PrimePowerRule::CompletelyMult, _) => {
                let base = self.poly.eval(pm);
                (0..e).fold(1 % q, |acc, _| mul_mod(acc, base, q))
            }
            (PrimePowerRule::EulerPhi, _) => {
                let pow = (1..e).fold(1 % q, |acc, _| mul_mod(acc, pm, q));
                mul_mod(pow, (pm + q - 1 % q) % q, q)
            }
            (PrimePowerRule::Sigma, _) => (0..=e).fold(0, |acc, _| (mul_mod(acc, pm, q) + 1) % q),
            (PrimePowerRule::Identity, _) => (0..e).fold(1 % q, |acc, _| mul_mod(acc, pm, q)),
        }
    }
}

/// `f(n)` for `n = 1` or `n` inside the table's range.
pub fn evaluate(f: &MultiplicativeFunction, n: u64, table: &SpfTable) -> Result<BigInt> {
    Ok(f.eval_factored(&table.factorize(n)?))
}

/// The `j`-th largest prime factor of `n` counted with multiplicity, or 1
/// when `n` has fewer than `j` prime factors.
pub fn jth_largest_prime_factor(n: u64, j: usize, table: &SpfTable) -> Result<u64> {
    if n == 0 || j == 0 {
        return Err(Error::InvalidParameters("n and j must be positive".into()));
    }
    let factors = table.factorize(n)?;
    let jth = largest_factors_desc(&factors).nth(j - 1).unwrap_or(1);
    Ok(jth)
}

fn largest_factors_desc(factors: &[(u64, u32)]) -> impl Iterator<Item = u64> + '_ {
    factors
        .iter()
        .rev()
        .flat_map(|&(p, e)| std::iter::repeat_n(p, e as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use num_integer::Integer;
    use num_rational::BigRational;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn all_rules() -> Vec<MultiplicativeFunction> {
        vec![
            MultiplicativeFunction::identity(),
            MultiplicativeFunction::euler_phi(),
            MultiplicativeFunction::sigma(),
            MultiplicativeFunction::completely_multiplicative(IntPolynomial::from_coeffs(&[-1, 1])),
            MultiplicativeFunction::completely_multiplicative(IntPolynomial::from_coeffs(&[
                1, 0, 1,
            ])),
        ]
    }

    #[test]
    fn evaluate_examples() {
        let t = build_spf(2, 100).unwrap();
        let phi = MultiplicativeFunction::euler_phi();
        assert_eq!(evaluate(&phi, 12, &t).unwrap(), BigInt::from(4));
        assert_eq!(
            evaluate(&MultiplicativeFunction::sigma(), 6, &t).unwrap(),
            BigInt::from(12)
        );
        let cm =
            MultiplicativeFunction::completely_multiplicative(IntPolynomial::from_coeffs(&[-1, 1]));
        assert_eq!(evaluate(&cm, 12, &t).unwrap(), BigInt::from(2));
        for f in all_rules() {
            assert_eq!(evaluate(&f, 1, &t).unwrap(), BigInt::one());
        }
        assert!(evaluate(&phi, 100, &t).is_err());
    }

    #[test]
    fn jth_largest_examples() {
        let t = build_spf(2, 100).unwrap();
        assert_eq!(jth_largest_prime_factor(12, 1, &t).unwrap(), 3);
        assert_eq!(jth_largest_prime_factor(12, 2, &t).unwrap(), 2);
        assert_eq!(jth_largest_prime_factor(12, 3, &t).unwrap(), 2);
        assert_eq!(jth_largest_prime_factor(12, 4, &t).unwrap(), 1);
        assert_eq!(jth_largest_prime_factor(1, 1, &t).unwrap(), 1);
    }

    #[test]
    fn presets_and_tokens() {
        assert_eq!(
            MultiplicativeFunction::from_token("phi").unwrap(),
            MultiplicativeFunction::euler_phi()
        );
        let cm = MultiplicativeFunction::from_token("[0,-1,0,1]").unwrap();
        assert_eq!(cm.rule(), PrimePowerRule::CompletelyMult);
        assert_eq!(cm.prime_poly(), &IntPolynomial::from_coeffs(&[0, -1, 0, 1]));
        assert!(MultiplicativeFunction::from_token("tau").is_err());
    }

    #[test]
    fn value_at_primes_is_the_prime_polynomial() {
        let t = build_spf(2, 5000).unwrap();
        for f in all_rules() {
            for p in crate::arith::primes_up_to(4999) {
                assert_eq!(
                    evaluate(&f, p, &t).unwrap(),
                    f.prime_poly().eval(&BigInt::from(p))
                );
            }
        }
    }

    #[test]
    fn totient_matches_rational_product() {
        let t = build_spf(2, 10_001).unwrap();
        let phi = MultiplicativeFunction::euler_phi();
        for n in 2..=10_000u64 {
            let mut r = BigRational::from_integer(BigInt::from(n));
            for (p, _) in factorize(n) {
                r *= BigRational::new(BigInt::from(p - 1), BigInt::from(p));
            }
            assert!(r.is_integer());
            assert_eq!(evaluate(&phi, n, &t).unwrap(), r.to_integer(), "n = {n}");
        }
    }

    #[test]
    fn multiplicative_on_random_coprime_pairs() {
        let t = build_spf(2, 1_000_001).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        let rules = all_rules();
        let mut checked = 0;
        while checked < 10_000 {
            let m = rng.gen_range(1..=1_000_000u64);
            let n = rng.gen_range(1..=1_000_000u64);
            if m.gcd(&n) != 1 {
                continue;
            }
            // f(mn) from an independent trial-division factorization of mn
            let mn = factorize(m * n);
            for f in &rules {
                let lhs = f.eval_factored(&mn);
                let rhs = evaluate(f, m, &t).unwrap() * evaluate(f, n, &t).unwrap();
                assert_eq!(lhs, rhs, "{} at ({m}, {n})", f.name());
            }
            checked += 1;
        }
    }

    #[test]
    fn residues_agree_with_exact_values() {
        for f in all_rules() {
            for q in [1u64, 2, 9, 17, 101, 65_537] {
                let r = f.residues(q);
                for p in [2u64, 3, 5, 17, 101, 7919] {
                    for e in 0..6 {
                        let exact = f.prime_power(p, e).mod_floor(&BigInt::from(q));
                        assert_eq!(
                            BigInt::from(r.prime_power(p, e)),
                            exact,
                            "{} {p}^{e} mod {q}",
                            f.name()
                        );
                    }
                }
            }
        }
    }
}

//! Nice families of prime polynomials, the good-prime predicate and the
//! near-primality measure `delta(q) = sum_{p | q} 1/p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, for_each_prime};
use crate::error::{Error, Result};
use crate::polynomials::{discriminant, is_squarefree_over_q, IntPolynomial};

/// A validated list `F_1, ..., F_K` of nonconstant integer polynomials whose
/// product has no repeated roots.
///
/// Two degree constants are kept apart on purpose. `degree_sum` is
/// `sum deg F_k` for exactly this list, which is the degree parameter of the
/// prime-power character sum bound when the bound is applied to this list.
/// `d_main` is `1 + sum deg F_k`, the constant entering the good-prime
/// condition and the choice `J = (K + 1) * d_main`; it equals the
/// `degree_sum` of the list augmented with `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceFamily {
    polys: Vec<IntPolynomial>,
    degree_sum: usize,
    d_main: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NiceViolation {
    /// Member `index` is constant (or zero).
    ConstantMember { index: usize, poly: IntPolynomial },
    /// The product of all members has a repeated root.
    RepeatedRoot { product: IntPolynomial },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("empty polynomial family")]
    Empty,
    #[error("family is not nice: {0:?}")]
    NotNice(Vec<NiceViolation>),
}

/// Validates the two defining conditions, listing every violation found.
pub fn check_nice(polys: Vec<IntPolynomial>) -> std::result::Result<NiceFamily, FamilyError> {
    if polys.is_empty() {
        return Err(FamilyError::Empty);
    }
    let mut violations: Vec<NiceViolation> = polys
        .iter()
        .enumerate()
        .filter(|(_, f)| f.is_constant())
        .map(|(index, f)| NiceViolation::ConstantMember {
            index,
            poly: f.clone(),
        })
        .collect();
    if polys.iter().all(|f| !f.is_zero()) {
        let product = IntPolynomial::product(&polys);
        if !is_squarefree_over_q(&product) {
            violations.push(NiceViolation::RepeatedRoot { product });
        }
    }
    if !violations.is_empty() {
        return Err(FamilyError::NotNice(violations));
    }
    let degree_sum = polys.iter().map(|f| f.degree().unwrap()).sum();
    Ok(NiceFamily {
        polys,
        degree_sum,
        d_main: degree_sum + 1,
    })
}

impl NiceFamily {
    pub fn new(polys: Vec<IntPolynomial>) -> std::result::Result<Self, FamilyError> {
        check_nice(polys)
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// `sum_k deg F_k` of this list.
    pub fn degree_sum(&self) -> usize {
        self.degree_sum
    }

    /// `1 + sum_k deg F_k`.
    pub fn d_main(&self) -> usize {
        self.d_main
    }

    pub fn product(&self) -> IntPolynomial {
        IntPolynomial::product(&self.polys)
    }

    /// Discriminant of the product; nonzero for a nice family.
    pub fn discriminant(&self) -> BigInt {
        discriminant(&self.product()).expect("nice families are nonconstant")
    }

    /// True when some member is divisible by `T`.
    pub fn has_multiple_of_t(&self) -> bool {
        self.polys.iter().any(IntPolynomial::is_multiple_of_t)
    }
}

/// Per-condition breakdown of the good-prime predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodPrimeReport {
    pub p: u64,
    /// (a) `p > 5`
    pub exceeds_five: bool,
    /// (b) `p > (1 + sum deg F_k)^2`
    pub exceeds_degree_square: bool,
    /// (c) `p` divides no leading coefficient
    pub coprime_to_leading: bool,
    /// (d) `p` does not divide the discriminant of the product
    pub coprime_to_discriminant: bool,
    pub good: bool,
}

fn divides(p: u64, n: &BigInt) -> bool {
    n.mod_floor(&BigInt::from(p)).is_zero()
}

pub fn is_good_prime(fam: &NiceFamily, p: u64) -> GoodPrimeReport {
    good_prime_report(fam, p, &fam.discriminant())
}

fn good_prime_report(fam: &NiceFamily, p: u64, disc: &BigInt) -> GoodPrimeReport {
    let exceeds_five = p > 5;
    let d = fam.d_main() as u128;
    let exceeds_degree_square = p as u128 > d * d;
    let coprime_to_leading = fam
        .polys
        .iter()
        .all(|f| !divides(p, f.leading_coeff().unwrap()));
    let coprime_to_discriminant = !divides(p, disc);
    GoodPrimeReport {
        p,
        exceeds_five,
        exceeds_degree_square,
        coprime_to_leading,
        coprime_to_discriminant,
        good: exceeds_five
            && exceeds_degree_square
            && coprime_to_leading
            && coprime_to_discriminant,
    }
}

/// All good primes in `[lo, hi]`.
pub fn good_primes_in_range(fam: &NiceFamily, lo: u64, hi: u64) -> Vec<u64> {
    let disc = fam.discriminant();
    let mut out = Vec::new();
    for_each_prime(lo, hi, |p| {
        if good_prime_report(fam, p, &disc).good {
            out.push(p);
        }
    });
    out
}

/// `delta(q)` exactly and as a float.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Delta {
    pub numerator: u64,
    pub denominator: u64,
    pub value: f64,
}

impl Delta {
    pub fn as_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator)
    }
}

/// Sum of reciprocals of the distinct prime divisors of `q >= 2`.
pub fn delta(q: u64) -> Result<Delta> {
    if q < 2 {
        return Err(Error::TooSmall("q"));
    }
    let exact = factorize(q)
        .into_iter()
        .fold(Ratio::<u64>::zero(), |acc, (p, _)| acc + Ratio::new(1, p));
    Ok(Delta {
        numerator: *exact.numer(),
        denominator: *exact.denom(),
        value: *exact.numer() as f64 / *exact.denom() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(c)
    }

    fn id_phi_sigma() -> NiceFamily {
        check_nice(vec![p(&[0, 1]), p(&[-1, 1]), p(&[1, 1])]).unwrap()
    }

    #[test]
    fn check_nice_examples() {
        let fam = id_phi_sigma();
        assert_eq!(fam.degree_sum(), 3);
        assert_eq!(fam.d_main(), 4);

        let err = check_nice(vec![p(&[-1, 1]), p(&[-1, 1])]).unwrap_err();
        assert_eq!(
            err,
            FamilyError::NotNice(vec![NiceViolation::RepeatedRoot {
                product: p(&[1, -2, 1])
            }])
        );

        let err = check_nice(vec![p(&[5]), p(&[-1, 1])]).unwrap_err();
        assert_eq!(
            err,
            FamilyError::NotNice(vec![NiceViolation::ConstantMember {
                index: 0,
                poly: p(&[5])
            }])
        );
        assert_eq!(check_nice(vec![]).unwrap_err(), FamilyError::Empty);
    }

    #[test]
    fn good_prime_examples() {
        let fam = id_phi_sigma();
        assert!(is_good_prime(&fam, 17).good);
        let r13 = is_good_prime(&fam, 13);
        assert!(!r13.good && !r13.exceeds_degree_square && r13.exceeds_five);
        let r2 = is_good_prime(&fam, 2);
        assert!(!r2.exceeds_five && !r2.exceeds_degree_square && !r2.coprime_to_discriminant);
        assert!(r2.coprime_to_leading);
        assert_eq!(fam.discriminant(), BigInt::from(4));
    }

    #[test]
    fn good_primes_in_range_examples() {
        assert_eq!(
            good_primes_in_range(&id_phi_sigma(), 2, 30),
            vec![17, 19, 23, 29]
        );
        let phi = check_nice(vec![p(&[-1, 1])]).unwrap();
        assert_eq!(good_primes_in_range(&phi, 2, 10), vec![7]);
        assert_eq!(good_primes_in_range(&phi, 10, 9), Vec::<u64>::new());
    }

    #[test]
    fn good_primes_of_id_phi_sigma_are_exactly_from_17() {
        let got = good_primes_in_range(&id_phi_sigma(), 2, 5000);
        let expected: Vec<u64> = primes_up_to(5000)
            .into_iter()
            .filter(|&p| p >= 17)
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn primes_dividing_discriminant_are_never_good() {
        // disc((T^2 + 1)(T - 3)) = -4 * res(T^2 + 1, T - 3)^2 = -4 * 100
        let fam = check_nice(vec![p(&[1, 0, 1]), p(&[-3, 1])]).unwrap();
        let disc = fam.discriminant();
        for q in primes_up_to(200) {
            if divides(q, &disc) {
                assert!(!is_good_prime(&fam, q).good);
            }
        }
        assert!(!is_good_prime(&fam, 5).coprime_to_discriminant);
    }

    #[test]
    fn leading_coefficient_condition() {
        let fam = check_nice(vec![p(&[1, 11])]).unwrap();
        let r = is_good_prime(&fam, 11);
        assert!(!r.coprime_to_leading && !r.good);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(17).unwrap().as_ratio(), Ratio::new(1, 17));
        assert_eq!(delta(15).unwrap().as_ratio(), Ratio::new(8, 15));
        assert_eq!(delta(12).unwrap().as_ratio(), Ratio::new(5, 6));
        assert_eq!(delta(1), Err(Error::TooSmall("q")));
    }

    #[test]
    fn delta_additive_over_coprime_squarefree() {
        let squarefree = [3u64, 5, 7, 11, 13, 15, 21, 33, 35, 77, 143];
        for &a in &squarefree {
            for &b in &squarefree {
                if a.gcd(&b) == 1 {
                    assert_eq!(
                        delta(a * b).unwrap().as_ratio(),
                        delta(a).unwrap().as_ratio() + delta(b).unwrap().as_ratio()
                    );
                }
            }
        }
    }
}

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::{factorize, CompensatedSum};
use crate::error::{Error, Result};

/// Largest phase order accepted by the exact cyclotomic tests.
pub const MAX_EXACT_ORDER: u64 = 20_000_000;

/// A sum of roots of unity `sum_k counts[k] * exp(2 pi i k / order)`, kept as
/// integer multiplicities so that it can be compared exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseHistogram {
    order: u64,
    counts: Vec<u64>,
}

impl PhaseHistogram {
    pub fn new(order: u64) -> Self {
        assert!(order >= 1);
        Self {
            order,
            counts: vec![0; order as usize],
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of unit terms, `sum_k counts[k]`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    #[inline]
    pub fn add(&mut self, phase: u64) {
        self.counts[phase as usize] += 1;
    }

    pub fn add_n(&mut self, phase: u64, n: u64) {
        self.counts[phase as usize] += n;
    }

    pub fn merge(mut self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }

    /// The same element over a multiple of the order.
    pub fn lift(&self, order: u64) -> Self {
        assert_eq!(order % self.order, 0);
        let step = order / self.order;
        let mut out = Self::new(order);
        for (k, &c) in self.counts.iter().enumerate() {
            out.counts[k * step as usize] = c;
        }
        out
    }

    /// Multiplies by the positive integer `n`.
    pub fn scaled(&self, n: u64) -> Self {
        Self {
            order: self.order,
            counts: self.counts.iter().map(|c| c * n).collect(),
        }
    }

    /// Product in the group ring, over `lcm` of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.lcm(&other.order);
        let (sa, sb) = (order / self.order, order / other.order);
        let mut out = Self::new(order);
        for (i, &a) in self.counts.iter().enumerate().filter(|(_, &a)| a > 0) {
            for (j, &b) in other.counts.iter().enumerate().filter(|(_, &b)| b > 0) {
                let k = (i as u64 * sa + j as u64 * sb) % order;
                out.counts[k as usize] += a * b;
            }
        }
        out
    }

    /// Floating value and an upper bound on its rounding error.
    ///
    /// Each term carries its own cosine and sine error; the compensated
    /// accumulation adds a relative error on the final value.
    pub fn to_complex(&self) -> (Complex64, f64) {
        let l = self.order as f64;
        let (mut re, mut im) = (CompensatedSum::default(), CompensatedSum::default());
        let mut bins = 0u64;
        for (k, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            let (s, co) = (std::f64::consts::TAU * k as f64 / l).sin_cos();
            re.add(c as f64 * co);
            im.add(c as f64 * s);
            bins += 1;
        }
        let value = Complex64::new(re.value(), im.value());
        let total = self.total() as f64;
        let budget = total * (2f64.powi(-47) + bins as f64 * 2f64.powi(-100))
            + value.norm() * 2f64.powi(-50);
        (value, budget)
    }

    /// Exact test for the value being zero.
    pub fn is_exact_zero(&self) -> Result<bool> {
        let terms: Vec<(u64, i64)> = self.signed_terms(1).collect();
        vanishes(self.order, &terms)
    }

    /// Exact equality of the two complex values.
    pub fn exact_eq(&self, other: &Self) -> Result<bool> {
        let order = self.order.lcm(&other.order);
        let mut terms: Vec<(u64, i64)> = self.signed_terms(order / self.order).collect();
        terms.extend(
            other
                .signed_terms(order / other.order)
                .map(|(k, c)| (k, -c)),
        );
        vanishes(order, &terms)
    }

    fn signed_terms(&self, step: u64) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(k, &c)| (k as u64 * step, c as i64))
    }
}

/// Whether `sum c * zeta^k` vanishes for a primitive `order`-th root of unity.
///
/// `Q(zeta_L)` is the tensor product of the `Q(zeta_{r^a})` over `r^a || L`,
/// each with power basis `1, ..., zeta^(phi(r^a) - 1)`. An exponent `k` is
/// split into its residues modulo the `r^a`, and each coordinate is reduced
/// with `Phi_{r^a}(X) = sum_{t < r} X^(t r^(a-1))`. The element is zero iff
/// every reduced coordinate is.
fn vanishes(order: u64, terms: &[(u64, i64)]) -> Result<bool> {
    if order > MAX_EXACT_ORDER {
        return Err(Error::ComplexityGate(format!(
            "exact cyclotomic test for order {order} exceeds {MAX_EXACT_ORDER}"
        )));
    }
    let parts: Vec<(u64, u64)> = factorize(order)
        .into_iter()
        .map(|(r, a)| (r, r.pow(a)))
        .collect();
    let mut strides = Vec::with_capacity(parts.len());
    let mut stride = 1u64;
    for &(_, n) in &parts {
        strides.push(stride);
        stride *= n;
    }
    let mut dense = vec![0i64; order as usize];
    for &(k, c) in terms {
        let idx: u64 = parts
            .iter()
            .zip(&strides)
            .map(|(&(_, n), &s)| (k % n) * s)
            .sum();
        dense[idx as usize] += c;
    }
    for (&(r, n), &s) in parts.iter().zip(&strides) {
        let block = n / r;
        let phi = n - block;
        for idx in 0..dense.len() {
            let digit = (idx as u64 / s) % n;
            if digit < phi || dense[idx] == 0 {
                continue;
            }
            let c = std::mem::take(&mut dense[idx]);
            let base = idx as u64 - digit * s;
            let low = digit - phi;
            for t in 0..r - 1 {
                dense[(base + (low + t * block) * s) as usize] -= c;
            }
        }
    }
    Ok(dense.iter().all(|&c| c == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(order: u64, phases: &[(u64, u64)]) -> PhaseHistogram {
        let mut h = PhaseHistogram::new(order);
        for &(k, c) in phases {
            h.add_n(k, c);
        }
        h
    }

    #[test]
    fn known_vanishing_sums() {
        // full orbit of a root of unity
        for l in [1u64, 2, 3, 6, 9, 12, 30, 105] {
            let h = hist(l, &(0..l).map(|k| (k, 1)).collect::<Vec<_>>());
            assert_eq!(h.is_exact_zero().unwrap(), l > 1, "L = {l}");
        }
        // 1 + w + w^2 with w = zeta_6^2, plus -1 + -1 = zeta_6^3 twice cancelling 1 + 1
        assert!(hist(6, &[(0, 1), (2, 1), (4, 1)]).is_exact_zero().unwrap());
        assert!(hist(6, &[(0, 2), (3, 2)]).is_exact_zero().unwrap());
        assert!(!hist(6, &[(0, 2), (3, 1)]).is_exact_zero().unwrap());
        // orbit sums of zeta_3 and zeta_5: 0 + (-1)
        let mut h = hist(15, &[(0, 1), (5, 1), (10, 1)]);
        h = h.merge(&hist(15, &[(3, 1), (6, 1), (9, 1), (12, 1)]));
        assert!(!h.is_exact_zero().unwrap());
        assert!(PhaseHistogram::new(7).is_exact_zero().unwrap());
    }

    #[test]
    fn exact_equality_across_orders() {
        // -1 over order 2 equals zeta_4^2 over order 4 and zeta_6^3 over order 6
        let a = hist(2, &[(1, 1)]);
        let b = hist(4, &[(2, 1)]);
        let c = hist(6, &[(1, 1), (5, 1), (0, 0)]);
        assert!(a.exact_eq(&b).unwrap());
        // zeta_6 + zeta_6^5 = 1
        assert!(c.exact_eq(&hist(3, &[(0, 1)])).unwrap());
        assert!(!a.exact_eq(&hist(3, &[(0, 1)])).unwrap());
    }

    #[test]
    fn float_value_and_budget() {
        let h = hist(4, &[(0, 3), (1, 2), (2, 1)]);
        let (v, budget) = h.to_complex();
        assert!((v.re - 2.0).abs() <= budget && (v.im - 2.0).abs() <= budget);
        assert!(budget > 0.0 && budget < 1e-12);
    }

    #[test]
    fn order_gate() {
        assert!(matches!(
            vanishes(MAX_EXACT_ORDER + 1, &[]),
            Err(Error::ComplexityGate(_))
        ));
    }

    proptest! {
        /// The exact test agrees with the float value whenever the float value
        /// is far from zero, and with direct cancellation of a planted zero.
        #[test]
        fn exact_zero_agrees_with_numerics(
            order in 1u64..120,
            phases in proptest::collection::vec((0u64..1000, 1u64..5), 0..12),
        ) {
            let h = hist(order, &phases.iter().map(|&(k, c)| (k % order, c)).collect::<Vec<_>>());
            let (v, budget) = h.to_complex();
            if v.norm() > 1e-6 {
                prop_assert!(!h.is_exact_zero().unwrap());
            }
            if h.is_exact_zero().unwrap() {
                prop_assert!(v.norm() <= budget);
            }
            // h * (1 + zeta_d + ... + zeta_d^(d-1)) = 0 for any d > 1 dividing the order
            if let Some(d) = (2..=order).find(|d| order % d == 0) {
                let orbit = hist(d, &(0..d).map(|k| (k, 1)).collect::<Vec<_>>());
                prop_assert!(h.mul(&orbit).is_exact_zero().unwrap());
            }
        }

        #[test]
        fn product_matches_complex_product(
            a in proptest::collection::vec((0u64..60, 1u64..4), 1..6),
            b in proptest::collection::vec((0u64..60, 1u64..4), 1..6),
        ) {
            let ha = hist(12, &a.iter().map(|&(k, c)| (k % 12, c)).collect::<Vec<_>>());
            let hb = hist(10, &b.iter().map(|&(k, c)| (k % 10, c)).collect::<Vec<_>>());
            let prod = ha.mul(&hb);
            prop_assert_eq!(prod.order(), 60);
            let (va, _) = ha.to_complex();
            let (vb, _) = hb.to_complex();
            let (vp, budget) = prod.to_complex();
            prop_assert!((va * vb - vp).norm() <= 1e-9 + budget);
            prop_assert!(prod.exact_eq(&hb.mul(&ha)).unwrap());
        }
    }
}

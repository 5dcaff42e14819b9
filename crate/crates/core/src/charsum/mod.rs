//! Complete multiplicative character sums of polynomials, evaluated by brute
//! force with exact phase bookkeeping, and audits of the bounds they obey.

mod audit;
mod histogram;

pub(crate) use audit::prop1_violations;
pub use audit::{
    cochrane_check, cochrane_params, composite_bound_check, proof_polynomials, prop1_check,
    t_zero_check, weil_check, AuditStatus, BoundName, CharSumResult, CochraneData, CompositeReport,
    LocalFactor, TZeroOutcome,
};
pub use histogram::{PhaseHistogram, MAX_EXACT_ORDER};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::memory_budget_bytes;
use crate::chargroup::{CharacterTuple, CompositeModulus, DlogTable};
use crate::error::{Error, Result};
use crate::polynomials::{IntPolynomial, ReducedPoly};

/// Largest modulus summed by brute force.
pub const MAX_BRUTE_MODULUS: u64 = 10_000_000;

const NOT_A_UNIT: u32 = u32::MAX;
const PARALLEL_CUTOFF: u64 = 1 << 15;

/// A complete sum as an exact phase histogram together with its float value.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSum {
    pub histogram: PhaseHistogram,
    pub value: Complex64,
    pub abs_value: f64,
    pub rounding_budget: f64,
}

impl CharSum {
    pub fn from_histogram(histogram: PhaseHistogram) -> Self {
        let (value, rounding_budget) = histogram.to_complex();
        Self {
            abs_value: value.norm(),
            value,
            rounding_budget,
            histogram,
        }
    }
}

/// Discrete logs of `x` and of every `F_k(x)` modulo each prime power of
/// `q`, for all `x mod q`, so that sums over many character tuples share one
/// pass of polynomial evaluation.
#[derive(Clone, Debug)]
pub struct SumKernel {
    modulus: CompositeModulus,
    polys: usize,
    /// `inds[(x * (K + 1) + slot) * w + i]`, slot 0 holding `x` itself.
    inds: Vec<u32>,
}

impl SumKernel {
    pub fn new(modulus: &CompositeModulus, polys: &[IntPolynomial]) -> Result<Self> {
        let q = modulus.q();
        if q > MAX_BRUTE_MODULUS {
            return Err(Error::ComplexityGate(format!(
                "brute-force sums need q <= {MAX_BRUTE_MODULUS}, got {q}"
            )));
        }
        let w = modulus.locals().len();
        let slots = polys.len() + 1;
        let needed = q * (slots * w) as u64 * 4;
        let budget = memory_budget_bytes();
        if needed > budget {
            return Err(Error::MemoryBudget {
                needed_mb: needed.div_ceil(1 << 20),
                budget_mb: budget >> 20,
                suggested_width: 0,
            });
        }
        let tables: Vec<DlogTable> = modulus
            .locals()
            .iter()
            .map(|l| l.dlog_table())
            .collect::<Result<_>>()?;
        let reduced: Vec<Vec<ReducedPoly>> = modulus
            .locals()
            .iter()
            .map(|l| {
                std::iter::once(IntPolynomial::t())
                    .chain(polys.iter().cloned())
                    .map(|f| f.reduce_mod(l.modulus()))
                    .collect()
            })
            .collect();
        let mut inds = vec![0u32; q as usize * slots * w];
        inds.par_chunks_mut(slots * w)
            .enumerate()
            .for_each(|(x, row)| {
                for (i, table) in tables.iter().enumerate() {
                    for (slot, f) in reduced[i].iter().enumerate() {
                        row[slot * w + i] =
                            table.get(f.eval(x as u64)).map_or(NOT_A_UNIT, |k| k as u32);
                    }
                }
            });
        Ok(Self {
            modulus: modulus.clone(),
            polys: polys.len(),
            inds,
        })
    }

    pub fn modulus(&self) -> &CompositeModulus {
        &self.modulus
    }

    /// Discrete log of `F_k(x)` modulo the `i`-th prime power (`k = 0` is
    /// `x` itself), or `None` for a non-unit.
    pub fn ind(&self, x: u64, k: usize, i: usize) -> Option<u64> {
        let w = self.modulus.locals().len();
        let v = self.inds[(x as usize * (self.polys + 1) + k) * w + i];
        (v != NOT_A_UNIT).then_some(v as u64)
    }

    /// Phase multipliers `A_{k,i} * L / phi(p_i^e_i) mod L`, row-major in `k`.
    pub fn weights(&self, tuple: &CharacterTuple) -> Result<Vec<u64>> {
        if tuple.modulus() != &self.modulus {
            return Err(Error::ModulusMismatch(format!(
                "tuple modulo {}, kernel modulo {}",
                tuple.q(),
                self.modulus.q()
            )));
        }
        if tuple.len() != self.polys {
            return Err(Error::InvalidParameters(format!(
                "{} characters for {} polynomials",
                tuple.len(),
                self.polys
            )));
        }
        let l = self.modulus.phase_order();
        Ok((0..tuple.len())
            .flat_map(|k| {
                (0..self.modulus.locals().len()).map(move |i| {
                    tuple.local(k, i).phase_multiplier() * self.modulus.phase_scale(i) % l
                })
            })
            .collect())
    }

    /// The sum for one tuple, as a histogram over `L = lcm phi(p^e)`.
    pub fn histogram(
        &self,
        tuple: &CharacterTuple,
        with_unit_restriction: bool,
    ) -> Result<PhaseHistogram> {
        let weights = self.weights(tuple)?;
        Ok(self.histogram_for_weights(&weights, with_unit_restriction))
    }

    /// Same as [`Self::histogram`] with the phase multipliers given directly.
    pub fn histogram_for_weights(
        &self,
        weights: &[u64],
        with_unit_restriction: bool,
    ) -> PhaseHistogram {
        let q = self.modulus.q();
        let l = self.modulus.phase_order();
        let threads = rayon::current_num_threads() as u64;
        let parallel =
            q >= PARALLEL_CUTOFF && threads > 1 && threads * l * 8 <= memory_budget_bytes();
        if !parallel {
            return self.scan(0, q, weights, with_unit_restriction);
        }
        let chunk = q.div_ceil(threads);
        let parts: Vec<PhaseHistogram> = (0..threads)
            .into_par_iter()
            .map(|t| {
                self.scan(
                    t * chunk,
                    ((t + 1) * chunk).min(q),
                    weights,
                    with_unit_restriction,
                )
            })
            .collect();
        parts
            .iter()
            .fold(PhaseHistogram::new(l), |acc, h| acc.merge(h))
    }

    fn scan(&self, lo: u64, hi: u64, weights: &[u64], unit: bool) -> PhaseHistogram {
        debug_assert_eq!(weights.len(), self.polys * self.modulus.locals().len());
        let l = self.modulus.phase_order();
        let w = self.modulus.locals().len();
        let row_len = (self.polys + 1) * w;
        let mut h = PhaseHistogram::new(l);
        'x: for x in lo..hi {
            let row = &self.inds[x as usize * row_len..(x as usize + 1) * row_len];
            if unit && row[..w].contains(&NOT_A_UNIT) {
                continue;
            }
            let mut phase = 0u64;
            for (&v, &a) in row[w..].iter().zip(weights) {
                if v == NOT_A_UNIT {
                    continue 'x;
                }
                phase = (phase + a * v as u64) % l;
            }
            h.add(phase);
        }
        h
    }
}

/// `sum_{x mod q} [chi_0(x)] prod_k chi_k(F_k(x))`, where each `chi_k`
/// vanishes on integers sharing a factor with `q`.
pub fn complete_sum(
    q: u64,
    polys: &[IntPolynomial],
    tuple: &CharacterTuple,
    with_unit_restriction: bool,
) -> Result<CharSum> {
    if q.is_multiple_of(2) {
        return Err(Error::EvenPrime(2));
    }
    if tuple.q() != q {
        return Err(Error::ModulusMismatch(format!(
            "tuple modulo {}, sum modulo {q}",
            tuple.q()
        )));
    }
    let kernel = SumKernel::new(tuple.modulus(), polys)?;
    Ok(CharSum::from_histogram(
        kernel.histogram(tuple, with_unit_restriction)?,
    ))
}

//! Counting `V = {(v_1, ..., v_J) units mod q : prod_j F_k(v_j) = u_k for all k}`
//! directly and through the orthogonality of characters.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, CompensatedSum};
use crate::chargroup::CompositeModulus;
use crate::charsum::{prop1_violations, SumKernel};
use crate::error::{Error, Result};
use crate::families::NiceFamily;
use crate::multfun::MultiplicativeFunction;
use crate::polynomials::IntPolynomial;

/// Largest `q^K` handled by fiber convolution.
pub const MAX_FIBER_STATES: u64 = 10_000_000;
/// Cap on multiply-add steps of the convolution.
pub const MAX_FIBER_WORK: u64 = 4_000_000_000;
/// Largest number of character tuples `phi(q)^K`.
pub const MAX_CHARACTER_TUPLES: u64 = 10_000_000;

const TUPLE_BLOCK: u64 = 1 << 14;

fn check_targets(md: &CompositeModulus, fam: &NiceFamily, u: &[u64]) -> Result<()> {
    if u.len() != fam.len() {
        return Err(Error::InvalidParameters(format!(
            "{} targets for {} polynomials",
            u.len(),
            fam.len()
        )));
    }
    let q = md.q();
    for &x in u {
        if (x % q).gcd(&q) != 1 {
            return Err(Error::NotAUnit {
                x: x % q,
                modulus: q,
            });
        }
    }
    Ok(())
}

fn check_j(j: u32) -> Result<()> {
    if j == 0 {
        return Err(Error::InvalidParameters("J must be at least 1".into()));
    }
    Ok(())
}

/// Exact number of `J`-tuples of units for every value vector
/// `(prod_j F_1(v_j), ..., prod_j F_K(v_j)) mod q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDistribution {
    q: u64,
    k: usize,
    j: u32,
    /// Indexed by `sum_k y_k q^(K-1-k)`.
    counts: Vec<u128>,
}

impl FiberDistribution {
    fn index(&self, u: &[u64]) -> usize {
        u.iter().fold(0u64, |acc, &y| acc * self.q + y % self.q) as usize
    }

    pub fn get(&self, u: &[u64]) -> u128 {
        self.counts[self.index(u)]
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    pub fn j(&self) -> u32 {
        self.j
    }
}

fn decode(mut idx: u64, q: u64, k: usize, out: &mut [u64]) {
    for slot in out[..k].iter_mut().rev() {
        *slot = idx % q;
        idx /= q;
    }
}

/// All `#V` at once by `J`-fold multiplicative convolution of the fiber
/// counts of `v -> (F_1(v), ..., F_K(v))` over admissible units `v`.
pub fn fiber_distribution(q: u64, fam: &NiceFamily, j: u32) -> Result<FiberDistribution> {
    check_j(j)?;
    let md = CompositeModulus::new(q)?;
    let k = fam.len();
    let states = (q as u128)
        .checked_pow(k as u32)
        .filter(|&s| s <= MAX_FIBER_STATES as u128);
    let Some(states) = states else {
        return Err(Error::ComplexityGate(format!(
            "q^K = {q}^{k} exceeds {MAX_FIBER_STATES}; use the character formula"
        )));
    };
    let reduced: Vec<_> = fam.polys().iter().map(|f| f.reduce_mod(q)).collect();
    let mut fiber = vec![0u128; states as usize];
    let mut admissible = 0u128;
    for v in (0..q).filter(|v| v.gcd(&q) == 1) {
        let ys: Vec<u64> = reduced.iter().map(|f| f.eval(v)).collect();
        if ys.iter().all(|y| y.gcd(&q) == 1) {
            let idx = ys.iter().fold(0u64, |acc, &y| acc * q + y);
            fiber[idx as usize] += 1;
            admissible += 1;
        }
    }
    if admissible.checked_pow(j).is_none() {
        return Err(Error::ComplexityGate(format!(
            "{admissible}^{j} tuples overflow the exact counter"
        )));
    }
    let units = md.group_order() as u128;
    let support: Vec<(Vec<u64>, u128)> = fiber
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(idx, &c)| {
            let mut ys = vec![0; k];
            decode(idx as u64, q, k, &mut ys);
            (ys, c)
        })
        .collect();
    let work = (j as u128 - 1) * units.pow(k as u32) * support.len() as u128;
    if work > MAX_FIBER_WORK as u128 {
        return Err(Error::ComplexityGate(format!(
            "fiber convolution needs about {work} steps (limit {MAX_FIBER_WORK}); use the character formula"
        )));
    }
    let mut dist = fiber.clone();
    let mut a = vec![0u64; k];
    for _ in 1..j {
        let mut next = vec![0u128; states as usize];
        for (idx, &c) in dist.iter().enumerate().filter(|(_, &c)| c > 0) {
            decode(idx as u64, q, k, &mut a);
            for (b, cb) in &support {
                let out = a
                    .iter()
                    .zip(b)
                    .fold(0u64, |acc, (&x, &y)| acc * q + x * y % q);
                next[out as usize] += c * cb;
            }
        }
        dist = next;
    }
    Ok(FiberDistribution {
        q,
        k,
        j,
        counts: dist,
    })
}

/// Exact `#V` for the targets `u`.
pub fn vm_bruteforce(q: u64, fam: &NiceFamily, u: &[u64], j: u32) -> Result<u128> {
    check_targets(&CompositeModulus::new(q)?, fam, u)?;
    Ok(fiber_distribution(q, fam, j)?.get(u))
}

/// The right side of `phi(q)^K #V = sum_chi prod_k conj(chi_k)(u_k) S_chi^J`,
/// with every complete sum `S_chi` evaluated once.
#[derive(Clone, Debug)]
pub struct CharacterEngine {
    md: CompositeModulus,
    k: usize,
    j: u32,
    /// Per tuple: `S^J` and the error bound on it.
    powers: Vec<(Complex64, f64)>,
    trivial_sum: u64,
}

/// Tuple `t` in mixed radix: digit `(k, i)` is the exponent of the `i`-th
/// local component of `chi_k`, with 0 for the trivial character.
fn tuple_weights(md: &CompositeModulus, k: usize, mut t: u64, out: &mut [u64]) {
    let l = md.phase_order();
    for kk in 0..k {
        for (i, local) in md.locals().iter().enumerate() {
            let n = local.group_order();
            out[kk * md.locals().len() + i] = (t % n) * md.phase_scale(i) % l;
            t /= n;
        }
    }
}

impl CharacterEngine {
    pub fn new(q: u64, fam: &NiceFamily, j: u32) -> Result<Self> {
        check_j(j)?;
        let md = CompositeModulus::new(q)?;
        let k = fam.len();
        let tuples = (md.group_order() as u128).pow(k as u32);
        if tuples > MAX_CHARACTER_TUPLES as u128 {
            return Err(Error::ComplexityGate(format!(
                "phi(q)^K = {tuples} character tuples exceeds {MAX_CHARACTER_TUPLES}"
            )));
        }
        let tuples = tuples as u64;
        let kernel = SumKernel::new(&md, fam.polys())?;
        let w = k * md.locals().len();
        let jf = j as f64;
        let mut powers = Vec::with_capacity(tuples as usize);
        let mut start = 0;
        while start < tuples {
            let end = (start + TUPLE_BLOCK).min(tuples);
            let block: Vec<(Complex64, f64)> = (start..end)
                .into_par_iter()
                .map(|t| {
                    let mut weights = vec![0u64; w];
                    tuple_weights(&md, k, t, &mut weights);
                    let (s, b) = kernel.histogram_for_weights(&weights, true).to_complex();
                    let a = s.norm() + b;
                    let err = jf * a.powi(j as i32 - 1) * b
                        + a.powi(j as i32) * (2.0 * jf + 16.0) * 2f64.powi(-52);
                    (s.powu(j), err)
                })
                .collect();
            powers.extend(block);
            start = end;
        }
        let trivial_sum = kernel.histogram_for_weights(&vec![0; w], true).total();
        Ok(Self {
            md,
            k,
            j,
            powers,
            trivial_sum,
        })
    }

    /// `S_{chi_0} = #{x mod q : x and every F_k(x) are units}`.
    pub fn trivial_sum(&self) -> u64 {
        self.trivial_sum
    }

    pub fn tuples(&self) -> u64 {
        self.powers.len() as u64
    }

    /// `#V` for the targets `u`.
    pub fn count(&self, u: &[u64]) -> Result<CharacterCount> {
        let md = &self.md;
        let q = md.q();
        let l = md.phase_order();
        let w = md.locals().len();
        for &x in u {
            if (x % q).gcd(&q) != 1 {
                return Err(Error::NotAUnit {
                    x: x % q,
                    modulus: q,
                });
            }
        }
        if u.len() != self.k {
            return Err(Error::InvalidParameters(format!(
                "{} targets for {} polynomials",
                u.len(),
                self.k
            )));
        }
        let inds: Vec<u64> = u
            .iter()
            .flat_map(|&x| {
                md.locals()
                    .iter()
                    .map(move |loc| loc.ind(x % loc.modulus()))
            })
            .collect::<Result<_>>()?;
        let mut weights = vec![0u64; self.k * w];
        let (mut re, mut im) = (CompensatedSum::default(), CompensatedSum::default());
        let mut err = CompensatedSum::default();
        let mut magnitude = CompensatedSum::default();
        for (t, &(power, e)) in self.powers.iter().enumerate() {
            tuple_weights(md, self.k, t as u64, &mut weights);
            let phase = weights
                .iter()
                .zip(&inds)
                .fold(0u64, |acc, (&a, &i)| (acc + a * i) % l);
            let conj = Complex64::from_polar(1.0, -std::f64::consts::TAU * phase as f64 / l as f64);
            let term = conj * power;
            re.add(term.re);
            im.add(term.im);
            err.add(e);
            magnitude.add(power.norm());
        }
        let n = self.powers.len() as f64;
        let value = re.value() / n;
        Ok(CharacterCount {
            value,
            imag: im.value() / n,
            rounding_budget: (err.value() + magnitude.value() * 2f64.powi(-49)) / n
                + value.abs() * 2f64.powi(-52),
            tuples: self.powers.len() as u64,
            trivial_sum: self.trivial_sum,
            main_term: (self.trivial_sum as f64).powi(self.j as i32) / n,
        })
    }

    /// Only the all-trivial tuple: `S_{chi_0}^J / phi(q)^K`.
    pub fn main_term(&self) -> f64 {
        (self.trivial_sum as f64).powi(self.j as i32) / self.powers.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterCount {
    pub value: f64,
    /// Imaginary part left over by rounding; zero in exact arithmetic.
    pub imag: f64,
    pub rounding_budget: f64,
    pub tuples: u64,
    pub trivial_sum: u64,
    pub main_term: f64,
}

pub fn vm_via_characters(q: u64, fam: &NiceFamily, u: &[u64], j: u32) -> Result<CharacterCount> {
    check_targets(&CompositeModulus::new(q)?, fam, u)?;
    CharacterEngine::new(q, fam, j)?.count(u)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimAudit {
    pub q: u64,
    pub k: usize,
    pub j: u32,
    pub u: Vec<u64>,
    /// Exact count when fiber convolution is within its gates.
    pub count: Option<u128>,
    pub count_via_characters: f64,
    pub rounding_budget: f64,
    /// `S_{chi_0}`
    pub trivial_sum: u64,
    /// `S_{chi_0}^J / phi(q)^K`
    pub main_term: f64,
    /// `|phi(q)^K #V - S_{chi_0}^J|`
    pub deviation: f64,
    /// Largest bound on `|S_chi|` over nontrivial tuples.
    pub max_tuple_bound: f64,
    /// `phi(q)^K * max_tuple_bound^J`
    pub error_bound: f64,
    pub bound_ok: bool,
    /// `#V phi(q)^K / q^J`
    pub ratio: f64,
    pub augmented: bool,
    pub degree_sum: usize,
}

/// Largest `q (D - 1)^{omega(q1)} prod_{p | q1} f_p^{-1/D}` over nontrivial
/// types. Each `f_p >= p`, so the maximum takes `f_p = p` on the primes whose
/// factor `(D - 1) p^{-1/D}` helps, or on the single best prime.
fn max_composite_bound(q: u64, d: usize) -> f64 {
    let df = d as f64;
    let factors: Vec<f64> = factorize(q)
        .into_iter()
        .map(|(p, _)| (df - 1.0) * (p as f64).powf(-1.0 / df))
        .collect();
    let above: Vec<f64> = factors.iter().copied().filter(|&f| f > 1.0).collect();
    let best = if above.is_empty() {
        factors.iter().copied().fold(f64::MIN, f64::max)
    } else {
        above.iter().product()
    };
    q as f64 * best
}

/// Compares `#V` with the main term and with the error bound coming from
/// the character sum estimates.
pub fn vm_claim_audit(q: u64, fam: &NiceFamily, u: &[u64], j: u32) -> Result<ClaimAudit> {
    let md = CompositeModulus::new(q)?;
    check_targets(&md, fam, u)?;
    let augmented = !fam.has_multiple_of_t();
    let mut list: Vec<IntPolynomial> = Vec::new();
    if augmented {
        list.push(IntPolynomial::t());
    }
    list.extend(fam.polys().iter().cloned());
    let violations: Vec<String> = md
        .locals()
        .iter()
        .flat_map(|l| prop1_violations(l.p(), &list))
        .collect();
    if !violations.is_empty() {
        return Err(Error::Precondition(violations.join("; ")));
    }
    let d = if augmented {
        fam.d_main()
    } else {
        fam.degree_sum()
    };

    let engine = CharacterEngine::new(q, fam, j)?;
    let chars = engine.count(u)?;
    let count = match vm_bruteforce(q, fam, u, j) {
        Ok(c) => Some(c),
        Err(Error::ComplexityGate(_)) => None,
        Err(e) => return Err(e),
    };
    let phi_k = BigInt::from(md.group_order()).pow(fam.len() as u32);
    let main = BigInt::from(engine.trivial_sum()).pow(j);
    let (deviation, slack) = match count {
        Some(c) => (
            (&phi_k * BigInt::from(c) - &main).abs().to_f64().unwrap(),
            0.0,
        ),
        None => {
            let pk = phi_k.to_f64().unwrap();
            (
                (pk * chars.value - main.to_f64().unwrap()).abs(),
                pk * chars.rounding_budget,
            )
        }
    };
    let max_tuple_bound = max_composite_bound(q, d);
    let error_bound = phi_k.to_f64().unwrap() * max_tuple_bound.powi(j as i32);
    let count_f = count.map_or(chars.value, |c| c as f64);
    Ok(ClaimAudit {
        q,
        k: fam.len(),
        j,
        u: u.to_vec(),
        count,
        count_via_characters: chars.value,
        rounding_budget: chars.rounding_budget,
        trivial_sum: engine.trivial_sum(),
        main_term: engine.main_term(),
        deviation,
        max_tuple_bound,
        error_bound,
        bound_ok: deviation <= error_bound * (1.0 + 1e-12) + slack,
        ratio: count_f * phi_k.to_f64().unwrap() / (q as f64).powi(j as i32),
        augmented,
        degree_sum: d,
    })
}

/// `u_k = f_k(m)^{-1} a_k mod q`.
pub fn target_units(
    functions: &[MultiplicativeFunction],
    m: u64,
    a: &[u64],
    q: u64,
) -> Result<Vec<u64>> {
    if functions.len() != a.len() || m == 0 {
        return Err(Error::InvalidParameters(
            "need m >= 1 and one class per function".into(),
        ));
    }
    let factors = factorize(m);
    functions
        .iter()
        .zip(a)
        .map(|(f, &ak)| {
            let res = f.residues(q);
            let fm = factors.iter().fold(1 % q, |acc, &(p, e)| {
                crate::arith::mul_mod(acc, res.prime_power(p, e), q)
            });
            let inv = crate::arith::inv_mod(fm, q).ok_or(Error::NotAUnit { x: fm, modulus: q })?;
            Ok(crate::arith::mul_mod(inv, ak % q, q))
        })
        .collect()
}

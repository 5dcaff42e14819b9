use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{complete_sum, CharSum};
use crate::arith::{is_prime, valuation};
use crate::chargroup::{compose_tuple, CharacterTuple, DirichletCharacter};
use crate::error::{Error, Result};
use crate::families::{is_good_prime, NiceFamily};
use crate::polynomials::{
    discriminant, is_squarefree_over_q, p_content_valuation, FpPoly, IntPolynomial, ModPRoot,
};

/// Largest degree of `F = prod F_k^{A_k}` built by [`proof_polynomials`].
pub const MAX_PROOF_DEGREE: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundName {
    Weil,
    Cochrane,
    Prop1,
    Composite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuditStatus {
    Pass,
    Fail,
    HypothesisNotEstablished,
}

/// One bound audit. `satisfied` holds exactly when the status is `Pass`.
#[derive(Clone, Debug, Serialize)]
pub struct CharSumResult {
    pub modulus: u64,
    pub polys: Vec<IntPolynomial>,
    pub characters: CharacterTuple,
    #[serde(skip)]
    pub sum: CharSum,
    pub abs_value: f64,
    pub bound: f64,
    pub bound_name: BoundName,
    pub satisfied: bool,
    pub rounding_budget: f64,
    pub status: AuditStatus,
}

/// Compares a sum with a bound. A zero bound is decided exactly; otherwise
/// the rounding budget has to be negligible next to the bound.
fn judge(sum: &CharSum, bound: f64) -> Result<AuditStatus> {
    if bound == 0.0 {
        return Ok(if sum.histogram.is_exact_zero()? {
            AuditStatus::Pass
        } else {
            AuditStatus::Fail
        });
    }
    if sum.rounding_budget >= 1e-6 * bound {
        return Err(Error::RoundingBudget {
            budget: sum.rounding_budget,
            bound,
        });
    }
    Ok(if sum.abs_value <= bound + sum.rounding_budget {
        AuditStatus::Pass
    } else {
        AuditStatus::Fail
    })
}

fn result(
    characters: CharacterTuple,
    polys: &[IntPolynomial],
    sum: CharSum,
    bound: f64,
    bound_name: BoundName,
    status: AuditStatus,
) -> CharSumResult {
    CharSumResult {
        modulus: characters.q(),
        polys: polys.to_vec(),
        characters,
        abs_value: sum.abs_value,
        rounding_budget: sum.rounding_budget,
        sum,
        bound,
        bound_name,
        satisfied: status == AuditStatus::Pass,
        status,
    }
}

fn single_modulus_tuple(q: u64, chars: &[DirichletCharacter]) -> Result<CharacterTuple> {
    compose_tuple(q, chars.iter().map(|c| vec![c.clone()]).collect())
}

fn divides(p: u64, n: &BigInt) -> bool {
    n.mod_floor(&BigInt::from(p)).is_zero()
}

/// Audits `|sum_{x in F_p} prod chi_k(F_k(x))| <= (sum d_k - 1) sqrt(p)`.
///
/// The hypothesis on some `F_k` not being an `ord(chi_k)`-th power up to a
/// constant is taken as established when that `F_k` is nonconstant and
/// squarefree mod `p` and `chi_k` is nontrivial. Otherwise the status is
/// `HypothesisNotEstablished`.
pub fn weil_check(
    p: u64,
    polys: &[IntPolynomial],
    chars: &[DirichletCharacter],
) -> Result<CharSumResult> {
    if polys.len() != chars.len() {
        return Err(Error::InvalidParameters(format!(
            "{} characters for {} polynomials",
            chars.len(),
            polys.len()
        )));
    }
    let tuple = single_modulus_tuple(p, chars)?;
    let reduced: Vec<FpPoly> = polys.iter().map(|f| FpPoly::from_int(f, p)).collect();
    if let Some(k) = reduced.iter().position(FpPoly::is_zero) {
        return Err(Error::Precondition(format!("F_{} vanishes mod {p}", k + 1)));
    }
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            if !reduced[i].is_coprime_to(&reduced[j]) {
                return Err(Error::Precondition(format!(
                    "F_{} and F_{} share a factor mod {p}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let established = reduced
        .iter()
        .zip(chars)
        .any(|(f, chi)| !chi.is_trivial() && f.degree() > Some(0) && f.is_squarefree());
    let d: usize = reduced.iter().map(|f| f.radical().degree().unwrap()).sum();
    let bound = d.saturating_sub(1) as f64 * (p as f64).sqrt();
    let sum = complete_sum(p, polys, &tuple, false)?;
    let status = if established {
        judge(&sum, bound)?
    } else {
        AuditStatus::HypothesisNotEstablished
    };
    Ok(result(tuple, polys, sum, bound, BoundName::Weil, status))
}

/// The data `t`, `F~`, `A`, `M` attached to `F` and `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CochraneData {
    pub t: u32,
    /// Coefficients of `F~ = p^{-t} F' mod p`, ascending.
    pub f_tilde: Vec<u64>,
    /// Roots of `F~` that are not roots of `F mod p`, with multiplicity.
    pub a_set: Vec<ModPRoot>,
    /// Largest multiplicity in `a_set`, 0 when empty.
    pub m_max: u32,
}

impl CochraneData {
    /// `sum nu_alpha` over the root set.
    pub fn nu_sum(&self) -> u32 {
        self.a_set.iter().map(|r| r.multiplicity).sum()
    }
}

pub fn cochrane_params(f: &IntPolynomial, p: u64) -> Result<CochraneData> {
    if f.is_constant() {
        return Err(Error::Precondition("F must be nonconstant".into()));
    }
    let d = f.derivative();
    let t = p_content_valuation(&d, p)?;
    let f_tilde = FpPoly::from_int(&d.div_exact_scalar(&BigInt::from(p).pow(t)), p);
    let fp = FpPoly::from_int(f, p);
    let a_set: Vec<ModPRoot> = f_tilde
        .roots()?
        .into_iter()
        .filter(|r| fp.eval(r.residue) != 0)
        .collect();
    let m_max = a_set.iter().map(|r| r.multiplicity).max().unwrap_or(0);
    Ok(CochraneData {
        t,
        f_tilde: f_tilde.coeffs().to_vec(),
        a_set,
        m_max,
    })
}

/// Audits `|sum_{x mod p^m} chi(F(x))| <= (sum nu) p^{t/(M+1)} p^{m(1 - 1/(M+1))}`
/// for the generator character `chi` modulo `p^m`.
pub fn cochrane_check(
    f: &IntPolynomial,
    p: u64,
    m: u32,
    chi: &DirichletCharacter,
) -> Result<CharSumResult> {
    if chi.modulus().p() != p || chi.modulus().m() != m {
        return Err(Error::ModulusMismatch(format!(
            "character modulo {}, expected {p}^{m}",
            chi.modulus().modulus()
        )));
    }
    if chi.exponent() != 1 {
        return Err(Error::HypothesisViolated(format!(
            "the bound is stated for the generator character, got exponent {}",
            chi.exponent()
        )));
    }
    let data = cochrane_params(f, p)?;
    if m < data.t + 2 {
        return Err(Error::HypothesisViolated(format!(
            "need m >= t + 2, got m = {m}, t = {}",
            data.t
        )));
    }
    let m1 = (data.m_max + 1) as f64;
    let pf = p as f64;
    let bound =
        data.nu_sum() as f64 * pf.powf(data.t as f64 / m1) * pf.powf(m as f64 * (1.0 - 1.0 / m1));
    let tuple = single_modulus_tuple(chi.modulus().modulus(), std::slice::from_ref(chi))?;
    let polys = [f.clone()];
    let sum = complete_sum(tuple.q(), &polys, &tuple, false)?;
    let status = judge(&sum, bound)?;
    Ok(result(
        tuple,
        &polys,
        sum,
        bound,
        BoundName::Cochrane,
        status,
    ))
}

/// Every failed precondition of the prime-power bound for `polys` at `p`.
pub(crate) fn prop1_violations(p: u64, polys: &[IntPolynomial]) -> Vec<String> {
    let mut out = Vec::new();
    for (k, f) in polys.iter().enumerate() {
        if f.is_constant() {
            out.push(format!("F_{} is constant", k + 1));
        } else if divides(p, f.leading_coeff().unwrap()) {
            out.push(format!(
                "{p} divides the leading coefficient of F_{}",
                k + 1
            ));
        }
    }
    if out.is_empty() {
        let product = IntPolynomial::product(polys);
        if !is_squarefree_over_q(&product) {
            out.push("the product has a multiple root".into());
        } else if divides(p, &discriminant(&product).expect("nonconstant product")) {
            out.push(format!("{p} divides the discriminant of the product"));
        }
    }
    out
}

/// Audits `|sum_{x mod p^m} prod chi_k(F_k(x))| <= (D - 1) p^{m(1 - 1/D)}`
/// with `D = sum deg F_k`.
pub fn prop1_check(
    p: u64,
    m: u32,
    polys: &[IntPolynomial],
    chars: &[DirichletCharacter],
) -> Result<CharSumResult> {
    if p == 2 {
        return Err(Error::EvenPrime(2));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if polys.is_empty() || polys.len() != chars.len() {
        return Err(Error::InvalidParameters(format!(
            "{} characters for {} polynomials",
            chars.len(),
            polys.len()
        )));
    }
    let mut violations = prop1_violations(p, polys);
    if !chars.iter().any(DirichletCharacter::is_primitive) {
        violations.push(format!("no character is primitive modulo {p}^{m}"));
    }
    if !violations.is_empty() {
        return Err(Error::Precondition(violations.join("; ")));
    }
    let q = p.checked_pow(m).ok_or(Error::ModulusTooLarge(p))?;
    let tuple = single_modulus_tuple(q, chars)?;
    let d: usize = polys.iter().map(|f| f.degree().unwrap()).sum();
    let df = d as f64;
    let bound = (df - 1.0) * (q as f64).powf(1.0 - 1.0 / df);
    let sum = complete_sum(q, polys, &tuple, false)?;
    let status = judge(&sum, bound)?;
    Ok(result(tuple, polys, sum, bound, BoundName::Prop1, status))
}

fn check_exponents(fam: &NiceFamily, exponents: &[u64]) -> Result<()> {
    if exponents.len() != fam.len() || exponents.contains(&0) {
        return Err(Error::InvalidParameters(format!(
            "need {} exponents, all >= 1",
            fam.len()
        )));
    }
    Ok(())
}

/// `G = sum_k A_k F_k' prod_{j != k} F_j`
fn g_polynomial(fam: &NiceFamily, exponents: &[u64]) -> IntPolynomial {
    let polys = fam.polys();
    let mut g = IntPolynomial::zero();
    for (k, (f, &a)) in polys.iter().zip(exponents).enumerate() {
        let others = IntPolynomial::product(
            polys
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, p)| p),
        );
        g = &g + &(&f.derivative() * &others).scale(&BigInt::from(a));
    }
    g
}

/// `F = prod F_k^{A_k}` and `G`, after checking `F' = (prod F_k^{A_k - 1}) G`.
pub fn proof_polynomials(
    fam: &NiceFamily,
    exponents: &[u64],
) -> Result<(IntPolynomial, IntPolynomial)> {
    check_exponents(fam, exponents)?;
    let degree: u64 = fam
        .polys()
        .iter()
        .zip(exponents)
        .map(|(f, &a)| f.degree().unwrap() as u64 * a)
        .sum();
    if degree > MAX_PROOF_DEGREE {
        return Err(Error::ComplexityGate(format!(
            "deg F = {degree} exceeds {MAX_PROOF_DEGREE}"
        )));
    }
    let powers = |shift: u64| {
        fam.polys()
            .iter()
            .zip(exponents)
            .fold(IntPolynomial::constant(BigInt::one()), |acc, (f, &a)| {
                &acc * &f.pow(a - shift)
            })
    };
    let f = powers(0);
    let g = g_polynomial(fam, exponents);
    assert_eq!(f.derivative(), &powers(1) * &g, "product rule identity");
    Ok((f, g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TZeroOutcome {
    /// `p` does not divide every coefficient of `G`.
    Holds,
    Fails,
    /// Every `A_k` is divisible by `p`, so no character is primitive.
    HypothesisVoid,
}

/// Whether the content of `G` is prime to `p`, for a good prime `p`.
pub fn t_zero_check(fam: &NiceFamily, p: u64, exponents: &[u64]) -> Result<TZeroOutcome> {
    check_exponents(fam, exponents)?;
    if !is_good_prime(fam, p).good {
        return Err(Error::Precondition(format!(
            "{p} is not a good prime for the family"
        )));
    }
    if exponents.iter().all(|a| a % p == 0) {
        return Ok(TZeroOutcome::HypothesisVoid);
    }
    Ok(
        match p_content_valuation(&g_polynomial(fam, exponents), p)? {
            0 => TZeroOutcome::Holds,
            _ => TZeroOutcome::Fails,
        },
    )
}

/// One prime `p^e || q` in a composite audit.
#[derive(Clone, Debug, Serialize)]
pub struct LocalFactor {
    pub p: u64,
    pub e: u32,
    /// `f_p`, lcm of the local conductors.
    pub conductor: u64,
    /// `|sum_{x mod p^e} chi_{0,p}(x) prod chi_{k,p}(F_k(x))|`
    pub abs_value: f64,
    /// `(p^e / f_p) (D - 1) f_p^{1 - 1/D}` when `f_p > 1`, else `p^e`.
    pub bound: f64,
    pub satisfied: bool,
    /// Whether the local sum equals `p^e / f_p` times the sum modulo `f_p`
    /// with the reduced characters; `None` when `f_p = 1`.
    pub reduction_exact: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositeReport {
    #[serde(flatten)]
    pub result: CharSumResult,
    /// `T` was prepended to the family.
    pub augmented: bool,
    pub degree_sum: usize,
    pub q0: u64,
    pub q1: u64,
    pub locals: Vec<LocalFactor>,
    /// The global sum equals the product of the local sums exactly.
    pub crt_exact: bool,
}

/// Audits `|S| <= q (D - 1)^{omega(q1)} prod_{p | q1} f_p^{-1/D}` for
/// `S = sum_{x mod q} chi_0(x) prod chi_k(F_k(x))`.
///
/// `D` is the degree sum of `(T, F_1, ..., F_K)`, or of the family alone when
/// some `F_k` is divisible by `T`.
pub fn composite_bound_check(
    q: u64,
    fam: &NiceFamily,
    tuple: &CharacterTuple,
) -> Result<CompositeReport> {
    if tuple.q() != q {
        return Err(Error::ModulusMismatch(format!(
            "tuple modulo {}, expected {q}",
            tuple.q()
        )));
    }
    if tuple.len() != fam.len() {
        return Err(Error::InvalidParameters(format!(
            "{} characters for {} polynomials",
            tuple.len(),
            fam.len()
        )));
    }
    if tuple.is_all_trivial() {
        return Err(Error::BoundVacuous);
    }
    let augmented = !fam.has_multiple_of_t();
    let mut list = Vec::with_capacity(fam.len() + 1);
    if augmented {
        list.push(IntPolynomial::t());
    }
    list.extend(fam.polys().iter().cloned());
    let violations: Vec<String> = tuple
        .modulus()
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
    let df = d as f64;

    let polys = fam.polys();
    let global = complete_sum(q, polys, tuple, true)?;
    let mut locals = Vec::new();
    let mut product = None::<super::PhaseHistogram>;
    for (i, l) in tuple.modulus().locals().iter().enumerate() {
        let (_, f) = tuple.type_map()[i];
        let local_tuple = compose_tuple(
            l.modulus(),
            (0..tuple.len())
                .map(|k| vec![tuple.local(k, i).clone()])
                .collect(),
        )?;
        let local = complete_sum(l.modulus(), polys, &local_tuple, true)?;
        let (bound, reduction_exact) = if f > 1 {
            let s = valuation(f, l.p());
            let reduced = compose_tuple(
                f,
                (0..tuple.len())
                    .map(|k| tuple.local(k, i).reduce_to(s).map(|c| vec![c]))
                    .collect::<Result<_>>()?,
            )?;
            let small = complete_sum(f, polys, &reduced, true)?;
            let exact = local
                .histogram
                .exact_eq(&small.histogram.scaled(l.modulus() / f))?;
            let bound = (l.modulus() / f) as f64 * (df - 1.0) * (f as f64).powf(1.0 - 1.0 / df);
            (bound, Some(exact))
        } else {
            (l.modulus() as f64, None)
        };
        let satisfied = judge(&local, bound)? == AuditStatus::Pass;
        product = Some(match product {
            None => local.histogram.clone(),
            Some(h) => h.mul(&local.histogram),
        });
        locals.push(LocalFactor {
            p: l.p(),
            e: l.m(),
            conductor: f,
            abs_value: local.abs_value,
            bound,
            satisfied,
            reduction_exact,
        });
    }
    let crt_exact = global.histogram.exact_eq(&product.expect("q > 1"))?;
    let omega = locals.iter().filter(|l| l.conductor > 1).count() as i32;
    let bound = q as f64
        * (df - 1.0).powi(omega)
        * locals
            .iter()
            .filter(|l| l.conductor > 1)
            .map(|l| (l.conductor as f64).powf(-1.0 / df))
            .product::<f64>();
    let status = judge(&global, bound)?;
    Ok(CompositeReport {
        result: result(
            tuple.clone(),
            polys,
            global,
            bound,
            BoundName::Composite,
            status,
        ),
        augmented,
        degree_sum: d,
        q0: tuple.q0(),
        q1: tuple.q1(),
        locals,
        crt_exact,
    })
}

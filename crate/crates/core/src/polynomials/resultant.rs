use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

/// Resultant of two nonzero integer polynomials (Sylvester convention).
///
/// Uses the subresultant pseudo-remainder sequence, so every intermediate
/// division is exact over the integers.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::UndefinedResultant);
    };
    let (mut a, mut b, mut sign) = if df < dg {
        // res(F, G) = (-1)^(deg F deg G) res(G, F)
        (g.clone(), f.clone(), if df * dg % 2 == 1 { -1 } else { 1 })
    } else {
        (f.clone(), g.clone(), 1)
    };
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    if db == 0 {
        return Ok(BigInt::from(sign) * num_traits::pow(b.coeff(0), da));
    }

    let ca = a.content();
    let cb = b.content();
    a = a.div_exact_scalar(&ca);
    b = b.div_exact_scalar(&cb);
    let scale = num_traits::pow(ca, db) * num_traits::pow(cb, da);

    let mut g_acc = BigInt::one();
    let mut h_acc = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let divisor = &g_acc * num_traits::pow(h_acc.clone(), delta);
        b = r.div_exact_scalar(&divisor);
        g_acc = a.leading_coeff().unwrap().clone();
        h_acc = match delta {
            0 => h_acc,
            1 => g_acc.clone(),
            d => num_traits::pow(g_acc.clone(), d) / num_traits::pow(h_acc, d - 1),
        };
        if b.degree() == Some(0) {
            break;
        }
    }
    let da = a.degree().unwrap();
    let lb = b.coeff(0);
    let h = if da == 0 {
        h_acc
    } else {
        num_traits::pow(lb, da) / num_traits::pow(h_acc, da - 1)
    };
    Ok(BigInt::from(sign) * scale * h)
}

/// `disc(F) = (-1)^(n(n-1)/2) res(F, F') / lc(F)` for `F` of degree `n >= 1`.
pub fn discriminant(f: &IntPolynomial) -> Result<BigInt> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::ConstantDiscriminant),
    };
    let r = resultant(f, &f.derivative())?;
    let d = r / f.leading_coeff().unwrap();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

/// Greatest common divisor over the rationals, returned as a primitive
/// integer polynomial with positive leading coefficient.
pub fn gcd_over_q(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    let mut a = f.primitive_part();
    let mut b = g.primitive_part();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.pseudo_rem(&b);
        a = b;
        b = r.primitive_part();
    }
    a
}

/// True iff `gcd(F, F')` is a constant, i.e. `F` has no repeated root over
/// an algebraic closure of the rationals.
pub fn is_squarefree_over_q(f: &IntPolynomial) -> bool {
    if f.is_constant() {
        return !f.is_zero();
    }
    gcd_over_q(f, &f.derivative()).degree() == Some(0)
}

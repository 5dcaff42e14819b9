//! Dirichlet characters modulo odd prime powers and their CRT composition.
//!
//! A character modulo `p^m` is stored as an exponent `A` in `[1, N]`,
//! `N = phi(p^m)`, against the generator character
//! `x -> exp(2 pi i ind_g(x) / N)` where `g` is the smallest primitive root
//! modulo `p^m`. Values are kept as exact phases (integers modulo `N`); the
//! trivial character has `A = N`.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factorize, inv_mod, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest modulus accepted for characters.
pub const MAX_MODULUS: u64 = 1_000_000_000;

/// Largest modulus for which a full discrete-log table is built.
pub const MAX_TABLE_MODULUS: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePowerModulus {
    p: u64,
    m: u32,
    modulus: u64,
    g: u64,
    group_order: u64,
    /// `ind_g(1 + p^s)` for `s = 1..m`, generators of the kernel subgroups.
    kernel_ind: Vec<u64>,
}

/// Smallest primitive root modulo `p^m`, `p` an odd prime.
pub fn primitive_root(p: u64, m: u32) -> Result<u64> {
    Ok(PrimePowerModulus::new(p, m)?.g)
}

impl PrimePowerModulus {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidParameters(
                "prime power exponent must be >= 1".into(),
            ));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_MODULUS)
            .ok_or(Error::ModulusTooLarge(p))?;
        let group_order = modulus / p * (p - 1);
        let order_primes: Vec<u64> = factorize(group_order).into_iter().map(|(r, _)| r).collect();
        let g = (2..modulus)
            .find(|&g| {
                g % p != 0
                    && order_primes
                        .iter()
                        .all(|&r| pow_mod(g, group_order / r, modulus) != 1)
            })
            .expect("odd prime powers have primitive roots");
        let mut out = Self {
            p,
            m,
            modulus,
            g,
            group_order,
            kernel_ind: Vec::new(),
        };
        let mut pk = 1u64;
        for _ in 1..m {
            pk *= p;
            let ind = out.ind(1 + pk)?;
            out.kernel_ind.push(ind);
        }
        Ok(out)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The chosen primitive root.
    pub fn g(&self) -> u64 {
        self.g
    }

    /// `phi(p^m) = p^(m-1) (p - 1)`
    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    /// Discrete logarithm to base `g` by baby-step giant-step.
    pub fn ind(&self, x: u64) -> Result<u64> {
        let n = self.modulus;
        let x = x % n;
        if x.is_multiple_of(self.p) {
            return Err(Error::NotAUnit { x, modulus: n });
        }
        let order = self.group_order;
        let step = (order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = 1u64;
        for j in 0..step {
            baby.entry(cur).or_insert(j);
            cur = mul_mod(cur, self.g, n);
        }
        let giant = inv_mod(pow_mod(self.g, step, n), n).expect("g is a unit");
        let mut gamma = x;
        for i in 0..=step {
            if let Some(&j) = baby.get(&gamma) {
                return Ok((i * step + j) % order);
            }
            gamma = mul_mod(gamma, giant, n);
        }
        unreachable!("every unit is a power of a primitive root")
    }

    /// Full discrete-log table by walking the powers of `g`.
    pub fn dlog_table(&self) -> Result<DlogTable> {
        if self.modulus > MAX_TABLE_MODULUS {
            return Err(Error::ModulusTooLarge(self.modulus));
        }
        let mut ind = vec![u32::MAX; self.modulus as usize];
        let mut cur = 1u64;
        for k in 0..self.group_order {
            ind[cur as usize] = k as u32;
            cur = mul_mod(cur, self.g, self.modulus);
        }
        Ok(DlogTable {
            modulus: self.modulus,
            group_order: self.group_order,
            ind,
        })
    }
}

/// Discrete logarithms of every residue modulo a prime power; non-units map
/// to `None`.
#[derive(Clone, Debug)]
pub struct DlogTable {
    modulus: u64,
    group_order: u64,
    ind: Vec<u32>,
}

impl DlogTable {
    #[inline]
    pub fn get(&self, x: u64) -> Option<u64> {
        let v = self.ind[(x % self.modulus) as usize];
        (v != u32::MAX).then_some(v as u64)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }
}

/// Free-function form of [`PrimePowerModulus::ind`].
pub fn ind(modulus: &PrimePowerModulus, x: u64) -> Result<u64> {
    modulus.ind(x)
}

/// An exact character value: zero, or `exp(2 pi i k / order)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharValue {
    Zero,
    Phase(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: PrimePowerModulus,
    exponent: u64,
    conductor: u64,
}

impl DirichletCharacter {
    /// `chi = (generator character)^exponent`; the exponent is normalized
    /// into `[1, N]`.
    pub fn new(modulus: PrimePowerModulus, exponent: u64) -> Self {
        let n = modulus.group_order;
        let exponent = match exponent % n {
            0 => n,
            a => a,
        };
        let conductor = direct_conductor(&modulus, exponent);
        Self {
            modulus,
            exponent,
            conductor,
        }
    }

    pub fn trivial(modulus: PrimePowerModulus) -> Self {
        let n = modulus.group_order;
        Self::new(modulus, n)
    }

    /// The generator character itself (`A = 1`).
    pub fn generator(modulus: PrimePowerModulus) -> Self {
        Self::new(modulus, 1)
    }

    /// Every character modulo `p^m`, ordered by exponent `1..=N`.
    pub fn all(modulus: &PrimePowerModulus) -> impl Iterator<Item = DirichletCharacter> + '_ {
        (1..=modulus.group_order).map(move |a| Self::new(modulus.clone(), a))
    }

    pub fn modulus(&self) -> &PrimePowerModulus {
        &self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `A mod N`, the multiplier applied to discrete logs.
    pub fn phase_multiplier(&self) -> u64 {
        self.exponent % self.modulus.group_order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == self.modulus.group_order
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus.modulus
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        let n = self.modulus.group_order;
        n / self.exponent.gcd(&n)
    }

    /// Exact value: the phase `A ind(x) mod N`, or zero when `p | x`.
    pub fn value(&self, x: u64) -> CharValue {
        match self.modulus.ind(x) {
            Ok(k) => CharValue::Phase(mul_mod(
                self.phase_multiplier(),
                k,
                self.modulus.group_order,
            )),
            Err(_) => CharValue::Zero,
        }
    }

    /// Same as [`Self::value`] through a precomputed table.
    #[inline]
    pub fn value_with(&self, table: &DlogTable, x: u64) -> CharValue {
        match table.get(x) {
            Some(k) => CharValue::Phase(mul_mod(
                self.phase_multiplier(),
                k,
                self.modulus.group_order,
            )),
            None => CharValue::Zero,
        }
    }

    /// The character modulo `p^s` inducing this one; requires the conductor
    /// to divide `p^s` and `s >= 1`.
    pub fn reduce_to(&self, s: u32) -> Result<DirichletCharacter> {
        if s == 0 || s > self.modulus.m {
            return Err(Error::InvalidParameters(format!("cannot reduce to p^{s}")));
        }
        let target = PrimePowerModulus::new(self.modulus.p, s)?;
        if target.modulus % self.conductor != 0 {
            return Err(Error::InvalidParameters(format!(
                "conductor {} does not divide {}",
                self.conductor, target.modulus
            )));
        }
        let n = self.modulus.group_order;
        let ratio = n / target.group_order;
        let phase = mul_mod(self.phase_multiplier(), self.modulus.ind(target.g)?, n);
        debug_assert_eq!(phase % ratio, 0);
        Ok(Self::new(target, phase / ratio))
    }
}

/// Smallest `p^s` such that the character is trivial on `{x = 1 mod p^s}`.
///
/// For odd `p` and `s >= 1` that subgroup is cyclic, generated by `1 + p^s`,
/// so each level is decided by a single value.
fn direct_conductor(modulus: &PrimePowerModulus, exponent: u64) -> u64 {
    let n = modulus.group_order;
    let a = exponent % n;
    if a == 0 {
        return 1;
    }
    let mut pk = 1u64;
    for &k in &modulus.kernel_ind {
        pk *= modulus.p;
        if mul_mod(a, k, n) == 0 {
            return pk;
        }
    }
    modulus.modulus
}

/// Free-function form of [`DirichletCharacter::conductor`].
pub fn conductor(chi: &DirichletCharacter) -> u64 {
    chi.conductor
}

/// Free-function form of [`DirichletCharacter::value`].
pub fn character_value(chi: &DirichletCharacter, x: u64) -> CharValue {
    chi.value(x)
}

#[derive(Serialize, Deserialize)]
struct CharacterWire {
    p: u64,
    m: u32,
    #[serde(rename = "A")]
    a: u64,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterWire {
            p: self.modulus.p,
            m: self.modulus.m,
            a: self.exponent,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CharacterWire::deserialize(d)?;
        let modulus = PrimePowerModulus::new(w.p, w.m).map_err(serde::de::Error::custom)?;
        Ok(DirichletCharacter::new(modulus, w.a))
    }
}

/// An odd modulus `q >= 3` with its prime-power decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeModulus {
    q: u64,
    locals: Vec<PrimePowerModulus>,
    phase_order: u64,
}

impl CompositeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidParameters(format!(
                "modulus {q} must be >= 3"
            )));
        }
        if q.is_multiple_of(2) {
            return Err(Error::EvenPrime(2));
        }
        let locals = factorize(q)
            .into_iter()
            .map(|(p, e)| PrimePowerModulus::new(p, e))
            .collect::<Result<Vec<_>>>()?;
        let phase_order = locals.iter().fold(1u64, |acc, l| acc.lcm(&l.group_order));
        Ok(Self {
            q,
            locals,
            phase_order,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn locals(&self) -> &[PrimePowerModulus] {
        &self.locals
    }

    /// Common denominator `L = lcm_p phi(p^e)` for phases of characters mod `q`.
    pub fn phase_order(&self) -> u64 {
        self.phase_order
    }

    /// Factor lifting a local phase (over `phi(p^e)`) to the common order.
    pub fn phase_scale(&self, i: usize) -> u64 {
        self.phase_order / self.locals[i].group_order
    }

    /// Number of characters modulo `q`, `phi(q)`.
    pub fn group_order(&self) -> u64 {
        self.locals.iter().map(|l| l.group_order).product()
    }
}

/// A tuple `chi_1, ..., chi_K` of characters modulo `q`, each given by its
/// local components modulo the prime powers `p^e || q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTuple {
    modulus: CompositeModulus,
    /// `chars[k][i]` is the component of `chi_k` modulo the `i`-th prime power.
    chars: Vec<Vec<DirichletCharacter>>,
    /// `(p, f_p)` with `f_p` the lcm of the local conductors at `p`.
    type_map: Vec<(u64, u64)>,
    q0: u64,
    q1: u64,
}

/// Builds the tuple and its type; local characters must match the prime
/// powers of `q` in ascending prime order.
pub fn compose_tuple(q: u64, chars: Vec<Vec<DirichletCharacter>>) -> Result<CharacterTuple> {
    let modulus = CompositeModulus::new(q)?;
    for (k, row) in chars.iter().enumerate() {
        if row.len() != modulus.locals.len() {
            return Err(Error::ModulusMismatch(format!(
                "character {k} has {} local components, q = {q} has {} prime factors",
                row.len(),
                modulus.locals.len()
            )));
        }
        for (chi, local) in row.iter().zip(&modulus.locals) {
            if chi.modulus != *local {
                return Err(Error::ModulusMismatch(format!(
                    "character {k} is modulo {}, expected {}",
                    chi.modulus.modulus, local.modulus
                )));
            }
        }
    }
    let type_map: Vec<(u64, u64)> = modulus
        .locals
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let f = chars
                .iter()
                .map(|row| row[i].conductor)
                .fold(1, |a, b| a.lcm(&b));
            (l.p, f)
        })
        .collect();
    let q1 = modulus
        .locals
        .iter()
        .zip(&type_map)
        .filter(|(_, &(_, f))| f > 1)
        .map(|(l, _)| l.modulus)
        .product();
    Ok(CharacterTuple {
        q0: q / q1,
        q1,
        modulus,
        chars,
        type_map,
    })
}

impl CharacterTuple {
    /// Builds a tuple from per-index maps `prime -> exponent`; primes of `q`
    /// that are missing get the trivial character.
    pub fn from_exponents(q: u64, exponents: &[BTreeMap<u64, u64>]) -> Result<Self> {
        let modulus = CompositeModulus::new(q)?;
        let chars = exponents
            .iter()
            .map(|row| {
                if let Some(p) = row
                    .keys()
                    .find(|p| !modulus.locals.iter().any(|l| l.p == **p))
                {
                    return Err(Error::ModulusMismatch(format!("{p} does not divide {q}")));
                }
                Ok(modulus
                    .locals
                    .iter()
                    .map(|l| {
                        let a = row.get(&l.p).copied().unwrap_or(l.group_order);
                        DirichletCharacter::new(l.clone(), a)
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        compose_tuple(q, chars)
    }

    pub fn modulus(&self) -> &CompositeModulus {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.q
    }

    /// Number of characters `K` in the tuple.
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn local(&self, k: usize, i: usize) -> &DirichletCharacter {
        &self.chars[k][i]
    }

    pub fn chars(&self) -> &[Vec<DirichletCharacter>] {
        &self.chars
    }

    /// `(p, f_p)` for every prime `p | q`.
    pub fn type_map(&self) -> &[(u64, u64)] {
        &self.type_map
    }

    pub fn q0(&self) -> u64 {
        self.q0
    }

    /// Unitary divisor of `q` supported on the primes with `f_p > 1`.
    pub fn q1(&self) -> u64 {
        self.q1
    }

    pub fn is_all_trivial(&self) -> bool {
        self.q1 == 1
    }

    /// `chi_k(x)` as a phase over [`CompositeModulus::phase_order`].
    pub fn value(&self, k: usize, x: u64) -> CharValue {
        let l = self.modulus.phase_order;
        let mut phase = 0u64;
        for (i, chi) in self.chars[k].iter().enumerate() {
            match chi.value(x % chi.modulus.modulus) {
                CharValue::Zero => return CharValue::Zero,
                CharValue::Phase(a) => phase = (phase + a * self.modulus.phase_scale(i)) % l,
            }
        }
        CharValue::Phase(phase)
    }
}

/// Serialized as an array (one entry per `k`) of objects keyed by prime.
impl Serialize for CharacterTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [DirichletCharacter]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for chi in self.0 {
                    map.serialize_entry(&chi.modulus.p.to_string(), chi)?;
                }
                map.end()
            }
        }
        s.collect_seq(self.chars.iter().map(|row| Row(row)))
    }
}

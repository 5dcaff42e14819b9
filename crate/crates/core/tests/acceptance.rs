//! Acceptance suite. Prints one line per criterion and fails if any
//! criterion fails. Run with `cargo test --release --test acceptance`.

use std::io::Write;

use num_integer::Integer;

use equilab::chargroup::{DirichletCharacter, PrimePowerModulus};
use equilab::charsum::{cochrane_check, prop1_check, AuditStatus};
use equilab::families::NiceFamily;
use equilab::lab::{
    constant_choices, coprime_lower_bound_check, fiber_distribution, joint_distribution,
    range_limit_demo, sifted_interval_count, vm_claim_audit, CharacterEngine, ExperimentConfig,
    LowerBoundStatus,
};
use equilab::multfun::MultiplicativeFunction;
use equilab::polynomials::IntPolynomial;

/// Criterion 1: largest allowed `|characters - brute force|`.
const ORTHOGONALITY_TOL: f64 = 1e-6;
/// Criterion 3: Cochrane bound for `T^2 + T`, `p = 3`, `m = 2`.
const COCHRANE_BOUND: f64 = 3.0;
/// Criterion 4.
const CLAIM_AGREEMENT_TOL: f64 = 1e-3;
const CLAIM_ERROR_BOUND: f64 = 1_020_100.0;
const CLAIM_RATIO_RANGE: (f64, f64) = (0.90, 0.95);
/// Criterion 5: max relative deviation observed at `x = 1e6` before this
/// suite was written, and the least admissible mean class count.
const D6: f64 = 27.16268019650479;
const MIN_MEAN_CLASS_COUNT: f64 = 500.0;
/// Criterion 6.
const RANGE_LIMIT_THRESHOLD: f64 = 4e6 / (3.0 * 361.0);
/// Criterion 7.
const SIFT_TOL: f64 = 0.25;

struct Outcome {
    pass: bool,
    warn: bool,
    detail: String,
    /// Everything computed, for the thread comparison.
    fingerprint: String,
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_coeffs(c)
}

fn fam(polys: &[&[i64]]) -> NiceFamily {
    NiceFamily::new(polys.iter().map(|c| poly(c)).collect()).unwrap()
}

fn units(q: u64) -> Vec<u64> {
    (1..q).filter(|x| x.gcd(&q) == 1).collect()
}

fn orthogonality() -> Outcome {
    let families = [fam(&[&[-1, 1]]), fam(&[&[-1, 1], &[1, 1]])];
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut fp = String::new();
    for q in [5u64, 7, 9, 15, 25] {
        for f in &families {
            for j in 1..=3 {
                let brute = fiber_distribution(q, f, j).unwrap();
                let engine = CharacterEngine::new(q, f, j).unwrap();
                let us = units(q);
                let targets: Vec<Vec<u64>> = if f.len() == 1 {
                    us.iter().map(|&u| vec![u]).collect()
                } else {
                    us.iter()
                        .flat_map(|&a| us.iter().map(move |&b| vec![a, b]))
                        .collect()
                };
                for u in targets {
                    let c = engine.count(&u).unwrap();
                    let b = brute.get(&u);
                    worst = worst.max((c.value - b as f64).abs());
                    checked += 1;
                    fp.push_str(&format!("{b}:{:e};", c.value));
                }
            }
        }
    }
    Outcome {
        pass: worst < ORTHOGONALITY_TOL,
        warn: false,
        detail: format!(
            "{checked} targets, max |chars - brute| = {worst:.3e} (tol {ORTHOGONALITY_TOL:e})"
        ),
        fingerprint: fp,
    }
}

fn prop1_exhaustive() -> Outcome {
    let polys = [poly(&[-1, 1]), poly(&[1, 1])];
    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut counts_ok = true;
    let mut fp = String::new();
    for (primes, m) in [(&[7u64, 11, 13, 17, 19, 23][..], 1u32), (&[3, 5, 7][..], 2)] {
        for &p in primes {
            let modulus = PrimePowerModulus::new(p, m).unwrap();
            let chars: Vec<DirichletCharacter> = DirichletCharacter::all(&modulus).collect();
            let mut pairs = 0u64;
            for a in &chars {
                for b in &chars {
                    if !(a.is_primitive() || b.is_primitive()) {
                        continue;
                    }
                    let r = prop1_check(p, m, &polys, &[a.clone(), b.clone()]).unwrap();
                    pairs += 1;
                    if r.status != AuditStatus::Pass {
                        violations += 1;
                    }
                    fp.push_str(&format!("{:e};", r.abs_value));
                }
            }
            let n = modulus.group_order();
            let imprimitive = if m == 1 { 1 } else { p - 1 };
            counts_ok &= pairs == n * n - imprimitive * imprimitive;
            checked += pairs;
        }
    }
    Outcome {
        pass: violations == 0 && counts_ok,
        warn: false,
        detail: format!("{checked} character pairs, {violations} violations, pair counts as expected: {counts_ok}"),
        fingerprint: fp,
    }
}

fn cochrane() -> Outcome {
    let chi = DirichletCharacter::generator(PrimePowerModulus::new(3, 2).unwrap());
    let r = cochrane_check(&poly(&[0, 1, 1]), 3, 2, &chi).unwrap();
    let square = cochrane_check(&poly(&[0, 0, 1]), 3, 2, &chi).unwrap();
    let zero = square.sum.histogram.is_exact_zero().unwrap();
    Outcome {
        pass: r.bound == COCHRANE_BOUND
            && r.status == AuditStatus::Pass
            && zero
            && square.bound == 0.0,
        warn: false,
        detail: format!(
            "|S(T^2+T)| = {:.6} <= {}, S(T^2) exactly zero: {zero}",
            r.abs_value, r.bound
        ),
        fingerprint: format!("{:e};{:e}", r.abs_value, square.abs_value),
    }
}

/// `#V` for `F = T - 1`, `J = 4` from pair counts: `sum_w P(w) P(u / w)`.
fn pair_oracle(q: u64, u: u64) -> u128 {
    let mut pairs = vec![0u128; q as usize];
    let adm: Vec<u64> = units(q)
        .into_iter()
        .filter(|&v| !(v + q - 1).is_multiple_of(q))
        .collect();
    for &a in &adm {
        for &b in &adm {
            pairs[((a - 1) * (b - 1) % q) as usize] += 1;
        }
    }
    let inv = |w: u64| (1..q).find(|&y| y * w % q == 1).unwrap();
    units(q)
        .iter()
        .map(|&w| pairs[w as usize] * pairs[(u * inv(w) % q) as usize])
        .sum()
}

fn claim() -> Outcome {
    let a = vm_claim_audit(101, &fam(&[&[-1, 1]]), &[1], 4).unwrap();
    let count = a.count.unwrap();
    let oracle = pair_oracle(101, 1);
    let agree = (count as f64 - a.count_via_characters).abs() <= CLAIM_AGREEMENT_TOL;
    let within = a.deviation <= CLAIM_ERROR_BOUND && a.error_bound == CLAIM_ERROR_BOUND;
    let ratio_ok = (CLAIM_RATIO_RANGE.0..=CLAIM_RATIO_RANGE.1).contains(&a.ratio);
    Outcome {
        pass: count == oracle && agree && within && ratio_ok && a.trivial_sum == 99,
        warn: false,
        detail: format!(
            "#V = {count} (pair oracle {oracle}, characters {:.6}), |100 #V - 99^4| = {} <= {}, ratio {:.6}",
            a.count_via_characters, a.deviation, a.error_bound, a.ratio
        ),
        fingerprint: format!("{count};{:e};{:e}", a.count_via_characters, a.ratio),
    }
}

fn id_phi_sigma() -> Vec<MultiplicativeFunction> {
    vec![
        MultiplicativeFunction::identity(),
        MultiplicativeFunction::euler_phi(),
        MultiplicativeFunction::sigma(),
    ]
}

fn empirical() -> Outcome {
    let big = joint_distribution(&ExperimentConfig::new(10_000_000, 17, id_phi_sigma())).unwrap();
    let small = joint_distribution(&ExperimentConfig::new(100_000, 17, id_phi_sigma())).unwrap();
    let conserved = big.counts.0.iter().map(|c| c.1).sum::<u64>() == big.rhs_count;
    let trend = big.stats.tv_distance < small.stats.tv_distance;
    Outcome {
        pass: conserved && big.stats.mean >= MIN_MEAN_CLASS_COUNT && big.stats.max_rel_dev <= D6,
        warn: !trend,
        detail: format!(
            "conserved {conserved}, mean {:.2}, max_rel_dev {:.6} <= D6 {D6}, TV {:.6} (1e5: {:.6})",
            big.stats.mean, big.stats.max_rel_dev, big.stats.tv_distance, small.stats.tv_distance
        ),
        fingerprint: serde_json::to_string(&big).unwrap() + &serde_json::to_string(&small).unwrap(),
    }
}

/// Primes `n <= x` with `n = a mod m` by a plain Eratosthenes sieve.
fn primes_in_class(x: u64, a: u64, m: u64) -> u64 {
    let mut composite = vec![false; x as usize + 1];
    let mut count = 0;
    for n in 2..=x as usize {
        if composite[n] {
            continue;
        }
        if n as u64 % m == a {
            count += 1;
        }
        for k in (n * n..=x as usize).step_by(n) {
            composite[k] = true;
        }
    }
    count
}

fn range_limit() -> Outcome {
    let r = range_limit_demo(1_000_000, &[poly(&[-1, 1]), poly(&[1, 1])], 3, Some(19)).unwrap();
    let oracle = primes_in_class(1_000_000, 3, 19);
    Outcome {
        pass: r.pass
            && r.lower_count == oracle
            && (r.threshold - RANGE_LIMIT_THRESHOLD).abs() < 1e-9,
        warn: false,
        detail: format!(
            "{} primes = 3 mod 19 (oracle {oracle}) >= {:.3}",
            r.lower_count, r.threshold
        ),
        fingerprint: format!("{};{:e}", r.lower_count, r.threshold),
    }
}

fn sift() -> Outcome {
    let r = sifted_interval_count(0, 1_000_000, 100, &constant_choices(100, 0)).unwrap();
    let primes: Vec<u64> = (2..=100u64)
        .filter(|&p| (2..p).all(|d| p % d != 0))
        .collect();
    let oracle = (1..=1_000_000u64)
        .filter(|n| primes.iter().all(|p| n % p != 0))
        .count() as u64;
    Outcome {
        pass: r.count == oracle && r.relative_error.abs() <= SIFT_TOL,
        warn: false,
        detail: format!(
            "count {} (oracle {oracle}), main term {:.3}, |count/main - 1| = {:.5} <= {SIFT_TOL}",
            r.count,
            r.main_term,
            r.relative_error.abs()
        ),
        fingerprint: format!("{};{:e}", r.count, r.main_term),
    }
}

fn coprime_lower() -> Outcome {
    let r = coprime_lower_bound_check(1_000_000, 17, &id_phi_sigma()).unwrap();
    Outcome {
        pass: r.status == LowerBoundStatus::Pass,
        warn: false,
        detail: format!(
            "count {} vs x/20 prod(1 - 1/p) = {:.3} over {} flagged primes: {:?}",
            r.count, r.bound, r.flagged_primes, r.status
        ),
        fingerprint: serde_json::to_string(&r).unwrap(),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 8] = [
    ("orthogonality identity", orthogonality),
    ("exhaustive prime-power audit", prop1_exhaustive),
    ("Cochrane instance", cochrane),
    ("claim audit q = 101", claim),
    ("empirical equidistribution x = 1e7", empirical),
    ("range-limit counterexample", range_limit),
    ("sieve lemma X = 1e6", sift),
    ("coprime lower bound x = 1e6", coprime_lower),
];

fn run_all(threads: usize) -> Vec<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| CRITERIA.iter().map(|(_, f)| f()).collect())
}

fn line(out: &mut impl Write, n: usize, name: &str, pass: bool, warn: bool, detail: &str) {
    let tag = match (pass, warn) {
        (false, _) => "FAIL",
        (true, true) => "WARN",
        (true, false) => "PASS",
    };
    writeln!(out, "[{tag}] {n}. {name}: {detail}").unwrap();
}

#[test]
fn acceptance() {
    // Written past the test harness capture so the lines always show.
    let mut out = std::io::stdout().lock();
    writeln!(out, "\nacceptance criteria").unwrap();
    let eight = run_all(8);
    let mut all = true;
    for (i, ((name, _), o)) in CRITERIA.iter().zip(&eight).enumerate() {
        line(&mut out, i + 1, name, o.pass, o.warn, &o.detail);
        all &= o.pass;
    }
    let one = run_all(1);
    let differing: Vec<usize> = (0..CRITERIA.len())
        .filter(|&i| one[i].fingerprint != eight[i].fingerprint)
        .map(|i| i + 1)
        .collect();
    let same = differing.is_empty();
    line(
        &mut out,
        9,
        "determinism across 1 and 8 threads",
        same,
        false,
        &if same {
            "criteria 1-8 identical".to_string()
        } else {
            format!("criteria {differing:?} differ")
        },
    );
    all &= same;
    out.flush().unwrap();
    assert!(all, "some acceptance criteria failed");
}

use num_integer::Integer;
use proptest::prelude::*;

use equilab::families::NiceFamily;
use equilab::lab::{
    fiber_distribution, joint_distribution, vm_claim_audit, CharacterEngine, ExperimentConfig,
};
use equilab::multfun::{semismooth_count, MultiplicativeFunction, SieveConfig};
use equilab::polynomials::IntPolynomial;
use equilab::Error;

#[test]
fn semismooth_ratio_stays_bounded() {
    let cfg = SieveConfig::default();
    for x in [10_000u64, 100_000, 1_000_000, 10_000_000] {
        for y in [100u64, 1000] {
            for j in [2u32, 3] {
                if y > x {
                    continue;
                }
                let r = semismooth_count(x, y, j, &cfg).unwrap();
                assert!(
                    r.ratio > 0.0 && r.ratio <= 10.0,
                    "x={x} y={y} J={j}: ratio {}",
                    r.ratio
                );
            }
        }
    }
}

fn functions() -> impl Strategy<Value = Vec<MultiplicativeFunction>> {
    let pool = vec![
        MultiplicativeFunction::identity(),
        MultiplicativeFunction::euler_phi(),
        MultiplicativeFunction::sigma(),
        MultiplicativeFunction::completely_multiplicative(IntPolynomial::from_coeffs(&[1, 0, 1])),
    ];
    proptest::sample::subsequence(pool, 1..=3)
}

fn odd_modulus() -> impl Strategy<Value = u64> {
    (1u64..30).prop_map(|k| 2 * k + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classes_sum_to_rhs_count(fs in functions(), q in odd_modulus(), x in 100u64..20_000, width in 1usize..5000) {
        prop_assume!(x >= q);
        let mut cfg = ExperimentConfig::new(x, q, fs.clone());
        cfg.segment_width = width;
        let r = joint_distribution(&cfg).unwrap();
        prop_assert_eq!(r.counts.0.iter().map(|c| c.1).sum::<u64>(), r.rhs_count);
        let res: Vec<_> = fs.iter().map(|f| f.residues(q)).collect();
        let direct = (1..=x)
            .filter(|&n| {
                res.iter().all(|f| {
                    let v = equilab::arith::factorize(n)
                        .into_iter()
                        .fold(1 % q, |acc, (p, e)| acc * f.prime_power(p, e) % q);
                    v.gcd(&q) == 1
                })
            })
            .count() as u64;
        prop_assert_eq!(r.rhs_count, direct);
    }

    #[test]
    fn claim_bound_holds(q in odd_modulus(), j in 1u32..5, shift in 1i64..4, pick in 0usize..1000) {
        let f = NiceFamily::new(vec![IntPolynomial::from_coeffs(&[-shift, 1])]).unwrap();
        let units: Vec<u64> = (1..q).filter(|x| x.gcd(&q) == 1).collect();
        let u = units[pick % units.len()];
        match vm_claim_audit(q, &f, &[u], j) {
            Ok(a) => prop_assert!(a.bound_ok, "q={} J={} deviation {} bound {}", q, j, a.deviation, a.error_bound),
            Err(Error::Precondition(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn characters_match_convolution(q in odd_modulus(), j in 1u32..4, c in -3i64..4) {
        prop_assume!(c != 0);
        let f = NiceFamily::new(vec![IntPolynomial::from_coeffs(&[c, 0, 1])]).unwrap();
        let brute = fiber_distribution(q, &f, j).unwrap();
        let engine = CharacterEngine::new(q, &f, j).unwrap();
        for u in (1..q).filter(|x| x.gcd(&q) == 1) {
            let v = engine.count(&[u]).unwrap();
            prop_assert!((v.value - brute.get(&[u]) as f64).abs() < 1e-6);
        }
    }
}

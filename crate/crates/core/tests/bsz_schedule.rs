use mobsum_core::arith::{mobius_oracle, mobius_sieve, primes_in, AdditiveCharacter};
use mobsum_core::bsz::{
    custom_params, decomposition_report, distinct_products_check, make_params, pj_cardinality_check, prime_blocks,
    sieve_sets, wj_sums,
};
use mobsum_core::dynamics::{period, MobiusMatrix};
use mobsum_core::field::{FpElem, PrimeModulus};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn toy_schedule_blocks_are_disjoint() {
    let params = custom_params(1.0, 1 << 16, 1, 15).unwrap();
    let blocks = prime_blocks(&params).unwrap();
    for pair in blocks.windows(2) {
        assert!(pair[0].primes.iter().all(|q| !pair[1].primes.contains(q)));
    }
    let b3 = blocks.iter().find(|b| b.j == 3).unwrap();
    assert_eq!(b3.primes, vec![11, 13]);
    let sets = sieve_sets(&params, &blocks).unwrap();
    let check = distinct_products_check(&blocks, &sets, params.n).unwrap();
    assert!(check.pairs <= params.n);
}

#[test]
fn cardinality_ratios_stay_moderate() {
    for alpha in [0.2, 0.1] {
        let params = make_params(alpha, 100_000).unwrap();
        let blocks = prime_blocks(&params).unwrap();
        for row in pj_cardinality_check(&params, &blocks) {
            assert!(row.ratio <= 5.0, "j = {} ratio {}", row.j, row.ratio);
        }
    }
}

#[test]
fn block_sums_match_naive_double_loop() {
    let p = PrimeModulus::new(1009).unwrap();
    let m = MobiusMatrix::from_u64(2, 3, 5, 8, p).unwrap();
    let tr = period(&m, FpElem::new(4, p)).unwrap();
    let psi = AdditiveCharacter::from_u64(1, p);
    let n = 100_000;
    let mu = mobius_sieve(n).unwrap();
    let nu = |k: u64| Complex64::new(f64::from(mu.get(k)), 0.0);
    let f = |k: u64| psi.eval_raw(tr.value_at(k));
    let params = make_params(0.2, n).unwrap();
    let blocks = prime_blocks(&params).unwrap();
    let sets = sieve_sets(&params, &blocks).unwrap();
    let w = wj_sums(&nu, &f, &blocks, &sets).unwrap();
    let xs: Vec<u64> = std::iter::successors(Some(4u64), |&x| Some(m.apply_raw(x)))
        .take(tr.period as usize)
        .collect();
    for ((b, s), &wj) in blocks.iter().zip(&sets).zip(&w) {
        let mut naive = 0.0;
        for &q in &s.members {
            let mut inner = Complex64::new(0.0, 0.0);
            for &r in &b.primes {
                let x = xs[(q * r % tr.period) as usize];
                let theta = std::f64::consts::TAU * x as f64 / 1009.0;
                inner += f64::from(mobius_oracle(r)) * Complex64::new(theta.cos(), theta.sin());
            }
            naive += inner.norm();
        }
        assert!(wj >= 0.0);
        assert!(
            (wj - naive).abs() <= 1e-9 * (1.0 + naive),
            "j = {}: {wj} vs {naive}",
            b.j
        );
    }
    let report = decomposition_report(&nu, &f, &params, tr.period).unwrap();
    let again = decomposition_report(&nu, &f, &params, tr.period).unwrap();
    assert_eq!(report, again);
    assert!(report.quotient.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn schedules_satisfy_counting_bound(alpha in 0.12f64..0.49, n in 1000u64..200_000) {
        let params = make_params(alpha, n).unwrap();
        let blocks = prime_blocks(&params).unwrap();
        let sets = sieve_sets(&params, &blocks).unwrap();
        let check = distinct_products_check(&blocks, &sets, n).unwrap();
        prop_assert!(check.pairs <= n);
        prop_assert_eq!(check.collisions, 0);
        if let (Some(first), Some(last)) = (blocks.first(), blocks.last()) {
            let flat: Vec<u64> = blocks.iter().flat_map(|b| b.primes.clone()).collect();
            prop_assert_eq!(flat, primes_in(params.r(first.j), params.r(last.j + 1)));
        }
    }
}

use mobsum_core::dynamics::{
    orbit, period, power_matrix, projective_orbit, recurrence_stream, spectral_form, theta_sq_order, MobiusMatrix,
    ProjectivePoint,
};
use mobsum_core::field::{FpElem, PrimeModulus};
use mobsum_core::sample::{random_admissible, random_matrix, seeded, Admissibility};
use proptest::prelude::*;

fn window_rules() -> Admissibility {
    Admissibility {
        min_period: 2,
        pole_free_window: Some(2000),
        irreducible: None,
    }
}

#[test]
fn map_recurrence_and_closed_form_agree() {
    let mut rng = seeded(11);
    for p in [101u64, 1009] {
        let p = PrimeModulus::new(p).unwrap();
        for _ in 0..10 {
            let tr = random_admissible(p, window_rules(), &mut rng).unwrap();
            let form = spectral_form(&tr.matrix, tr.seed).unwrap();
            let steps = tr.period.min(2000);
            let mapped = orbit(&tr.matrix, tr.seed).take(steps as usize);
            let ratios = recurrence_stream(&tr.matrix, tr.seed)
                .skip(1)
                .map(|s| s.ratio(&tr.matrix));
            for ((n, x), r) in (1..=steps).zip(mapped).zip(ratios) {
                assert_eq!(Some(x.value()), r, "recurrence at n = {n}");
                assert_eq!(form.eval(n).unwrap(), x, "closed form at n = {n}");
                assert_eq!(tr.value_at(n), x.value());
            }
        }
    }
}

#[test]
fn extended_map_is_a_permutation() {
    let p = PrimeModulus::new(1009).unwrap();
    let mut rng = seeded(5);
    for _ in 0..5 {
        let m = random_matrix(p, &mut rng);
        let mut image: Vec<u64> = (0..p.get()).map(|x| m.apply_raw(x)).collect();
        image.sort_unstable();
        assert!(image.iter().copied().eq(0..p.get()));
        assert_eq!(m.apply_raw(m.pole()), m.pole_image());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn period_divides_theta_square_order(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = PrimeModulus::new(1009).unwrap();
        let m = random_matrix(p, &mut rng);
        let x0 = FpElem::new(seed % 1009, p);
        let tr = period(&m, x0).unwrap();
        let ord = theta_sq_order(&m).unwrap();
        prop_assert_eq!(ord % tr.projective_period(), 0);
        prop_assert_eq!(tr.elem_at(tr.period), x0);
        // non-fixed points move in orbits of size exactly ord(ϑ²)
        if spectral_form(&m, x0).is_ok() {
            prop_assert_eq!(tr.projective_period(), ord);
        }
    }

    #[test]
    fn decimation_matches_matrix_power(seed in any::<u64>(), k in 1u64..40) {
        let mut rng = seeded(seed);
        let p = PrimeModulus::new(1009).unwrap();
        let m = random_matrix(p, &mut rng);
        let x0 = ProjectivePoint::Finite(seed % 1009);
        let Ok(mk) = power_matrix(&m, k) else { return Ok(()) };
        let base: Vec<_> = projective_orbit(&m, x0).take((40 * k) as usize).collect();
        let decimated: Vec<_> = projective_orbit(&mk, x0).take(40).collect();
        for (i, y) in decimated.iter().enumerate() {
            prop_assert_eq!(*y, base[(k as usize) * (i + 1) - 1]);
        }
    }

    #[test]
    fn scaling_preserves_the_map(a in 1u64..101, b in 0u64..101, c in 1u64..101, lambda in 1u64..101) {
        let p = PrimeModulus::new(101).unwrap();
        let d = p.mul(p.add(1, p.mul(b, c)), p.inv(a).unwrap());
        let m = MobiusMatrix::from_u64(a, b, c, d, p).unwrap();
        let f = |v| FpElem::new(p.mul(lambda, v), p);
        let n = mobsum_core::dynamics::normalize_to_sl2(f(a), f(b), f(c), f(d));
        if let Ok(n) = n {
            for x in 0..101 {
                prop_assert_eq!(n.apply_raw(x), m.apply_raw(x));
            }
        }
    }
}

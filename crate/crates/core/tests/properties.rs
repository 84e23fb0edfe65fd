use fateq_core::bounds::{main2_best_delta, main2_bound};
use fateq_core::manifolds::{sample_sphere, CliffordTorus, MinimalInstance, Sampler};
use fateq_core::moments::{cos_moment, MomentTable};
use fateq_core::rng::SeedStream;
use fateq_core::special::reg_inc_beta;
use fateq_core::sphere::{cap_fraction, extrinsic_distance, strip_fraction, SpherePoint};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn incomplete_beta_reflection(x in 0.0f64..=1.0, a in 1e-3f64..=100.0, b in 1e-3f64..=100.0) {
        let lhs = reg_inc_beta(x, a, b).unwrap();
        let rhs = reg_inc_beta(1.0 - x, b, a).unwrap();
        prop_assert!((0.0..=1.0).contains(&lhs));
        prop_assert!((lhs + rhs - 1.0).abs() < 1e-12, "x={x} a={a} b={b}: {lhs} + {rhs}");
    }
}

proptest! {
    #[test]
    fn caps_complement(n in 1usize..400, r in 0.0f64..=std::f64::consts::PI) {
        let total = cap_fraction(n, r).unwrap() + cap_fraction(n, std::f64::consts::PI - r).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strip_within_unit_interval(n in 1usize..600, eps in 1e-6f64..1.57) {
        let f = strip_fraction(n, eps).unwrap();
        prop_assert!(f > 0.0 && f <= 1.0);
    }

    #[test]
    fn best_delta_is_a_maximizer(m in 1usize..500, eps in 1e-3f64..1.57, d in 0.0f64..0.4999) {
        let best = main2_best_delta(m, eps).unwrap();
        prop_assert!(main2_bound(m, eps, d).unwrap() <= main2_bound(m, eps, best).unwrap() + 1e-12);
    }

    #[test]
    fn moment_ratio(m in 1usize..200, k in 0usize..60) {
        let t = MomentTable::<f64>::build(m, k + 1).unwrap();
        let r = t.values()[k + 1] / t.values()[k];
        let want = (2 * k + 1) as f64 / (m + 2 * k + 1) as f64;
        prop_assert!((r - want).abs() <= 4.0 * f64::EPSILON * want);
        prop_assert_eq!(t.values()[k], cos_moment::<f64>(m, k).unwrap());
    }

    #[test]
    fn distance_is_symmetric_and_bounded(n in 1usize..20, seed in any::<u64>()) {
        let pts = sample_sphere(n, 2, SeedStream::new(seed, 0)).unwrap();
        let d = extrinsic_distance(&pts[0], &pts[1]).unwrap();
        prop_assert!((0.0..=std::f64::consts::PI).contains(&d));
        prop_assert_eq!(d, extrinsic_distance(&pts[1], &pts[0]).unwrap());
    }

    #[test]
    fn torus_samples_stay_on_the_sphere(dims in prop::collection::vec(1usize..5, 1..4), seed in any::<u64>()) {
        let inst: MinimalInstance = CliffordTorus::new(&dims).unwrap().into();
        let pts = fateq_core::manifolds::sample_minimal_instance(&inst, 64, SeedStream::new(seed, 1)).unwrap();
        for p in pts {
            prop_assert_eq!(p.ambient_dimension(), inst.ambient_dim());
            prop_assert!(SpherePoint::new(p.into_coords()).is_ok());
        }
    }

    #[test]
    fn sampling_is_reproducible(n in 1usize..12, count in 1usize..3000, root in any::<u64>(), index in any::<u64>()) {
        let s = SeedStream::new(root, index);
        prop_assert_eq!(sample_sphere(n, count, s).unwrap(), sample_sphere(n, count, s).unwrap());
    }
}

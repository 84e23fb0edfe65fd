//! Statistical checks of the extrinsic concentration theorems on the
//! implemented minimal instances and submersions.

use fateq_core::bounds::{main1_bound, main2_best_delta, main2_bound};
use fateq_core::manifolds::{
    sample_sphere, CliffordTorus, GreatSubsphere, MinimalInstance, ProductSubmersion, Sampler,
};
use fateq_core::moments::moment_domination_check;
use fateq_core::montecarlo::{
    estimate_moments, estimate_strip_occupancy, estimate_submersion_occupancy, two_piece_classify,
    Sampling, TwoPieceKind,
};
use fateq_core::rng::SeedStream;
use fateq_core::sphere::strip_fraction;
use fateq_core::Point;

const ROOT: u64 = 20_240_601;

fn instances() -> Vec<MinimalInstance> {
    vec![
        CliffordTorus::new(&[1, 1]).unwrap().into(),
        CliffordTorus::new(&[2, 1]).unwrap().into(),
        CliffordTorus::new(&[3, 3]).unwrap().into(),
        CliffordTorus::new(&[1, 2, 4]).unwrap().into(),
        GreatSubsphere::coordinate(3, 9).unwrap().into(),
        GreatSubsphere::random(5, 8, SeedStream::new(ROOT, 99))
            .unwrap()
            .into(),
    ]
}

/// Random `(p, ε)` pairs: `p` uniform on the ambient sphere, `ε` uniform in
/// `(0.02, π/2 − 0.02)`.
fn draws(n: usize, count: usize, stream: SeedStream) -> Vec<(Point, f64)> {
    let ps = sample_sphere(n, count, stream).unwrap();
    let mut rng = stream.child(1).chunk_rng(0);
    ps.into_iter()
        .map(|p| {
            (
                p,
                0.02 + (std::f64::consts::FRAC_PI_2 - 0.04) * rng.uniform(),
            )
        })
        .collect()
}

#[test]
fn main_bounds_dominate_occupancy() {
    for (i, inst) in instances().iter().enumerate() {
        let m = inst.intrinsic_dim();
        let stream = SeedStream::new(ROOT, 100 + i as u64);
        for (j, (p, eps)) in draws(inst.ambient_dim(), 20, stream)
            .into_iter()
            .enumerate()
        {
            let s = Sampling::new(100_000, stream.child(10 + j as u64)).with_workers(4);
            let e = estimate_strip_occupancy(inst, &p, eps, &s).unwrap();
            assert!(
                e.dominates(main1_bound(m, eps).unwrap()),
                "instance {i}, eps {eps}"
            );
            let best = main2_best_delta(m, eps).unwrap();
            assert!(
                e.dominates(main2_bound(m, eps, best).unwrap()),
                "instance {i}, eps {eps}"
            );
        }
    }
}

#[test]
fn moments_are_dominated_by_sphere_moments() {
    for (i, inst) in instances().iter().enumerate() {
        let stream = SeedStream::new(ROOT, 200 + i as u64);
        let (p, _) = draws(inst.ambient_dim(), 1, stream).remove(0);
        let s = Sampling::new(100_000, stream.child(5)).with_workers(4);
        let mom = estimate_moments(inst, &p, 10, &s).unwrap();
        let verdicts = moment_domination_check(&mom, inst.intrinsic_dim()).unwrap();
        assert!(
            verdicts.iter().all(|v| v.pass),
            "instance {i}: {verdicts:?}"
        );
    }
}

#[test]
fn submersion_occupancy_equals_base_strip() {
    let stream = SeedStream::new(ROOT, 300);
    let mut rng = stream.child(2).chunk_rng(0);
    for (j, (p, eps)) in draws(4, 20, stream).into_iter().enumerate() {
        let delta = 10f64.powf(-2.0 + 4.0 * rng.uniform());
        let sub = ProductSubmersion::new(4, delta).unwrap();
        let s = Sampling::new(100_000, stream.child(10 + j as u64)).with_workers(4);
        let e = estimate_submersion_occupancy(&sub, &p, eps, &s).unwrap();
        assert!(
            e.consistent_with(strip_fraction(4, eps).unwrap()),
            "delta {delta}, eps {eps}"
        );
    }
}

#[test]
fn torus_always_crosses_random_equators() {
    let torus: MinimalInstance = CliffordTorus::new(&[1, 1]).unwrap().into();
    let stream = SeedStream::new(ROOT, 400);
    let ps = sample_sphere(3, 100, stream).unwrap();
    for (j, p) in ps.iter().enumerate() {
        let s = Sampling::new(10_000, stream.child(j as u64));
        let v = two_piece_classify(&torus, p, 1e-9, &s).unwrap();
        assert_eq!(v.kind, TwoPieceKind::Crosses);
    }
}

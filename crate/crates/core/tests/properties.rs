mod common;

use common::*;
use frechet_core::exact::Rational;
use frechet_core::model::{
    cdf_from_density, density_from_cdf, density_values_from_theta, theta_from_density, Density,
    FrechetClass, PairMoments,
};
use frechet_core::rays::{class_rays, RayOptions};
use frechet_core::sampler::{empirical_moments, sample};
use frechet_core::solvers::{fit_density_direct, fit_lambda};
use proptest::prelude::*;

fn margin() -> impl Strategy<Value = Rational> {
    (2i64..=12).prop_flat_map(|d| (1..d).prop_map(move |n| r(n, d)))
}

fn class_and_weights() -> impl Strategy<Value = (Vec<Rational>, Vec<u8>)> {
    (2usize..=3)
        .prop_flat_map(|m| prop::collection::vec(margin(), m))
        .prop_flat_map(|p| (Just(p), prop::collection::vec(0u8..6, 11)))
}

/// A class member: rays mixed with weights taken from `raw`.
fn member(p: &[Rational], raw: &[u8]) -> (FrechetClass, Density) {
    let class = FrechetClass::new(p.to_vec()).unwrap();
    let rays = class_rays(&class, &RayOptions::default()).unwrap();
    let mut w: Vec<i64> = raw
        .iter()
        .cycle()
        .take(rays.len())
        .map(|&v| i64::from(v))
        .collect();
    if w.iter().all(|&v| v == 0) {
        w[0] = 1;
    }
    let total: i64 = w.iter().sum();
    let lambda: Vec<Rational> = w.into_iter().map(|v| r(v, total)).collect();
    let f = rays.combine(&lambda).unwrap();
    (class, f)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 100,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn theta_round_trip_is_exact((p, raw) in class_and_weights()) {
        let (class, f) = member(&p, &raw);
        let theta = theta_from_density(&class, &f).unwrap();
        prop_assert!(theta.satisfies_class_conditions());
        prop_assert_eq!(density_values_from_theta(&class, &theta).unwrap(), f.values().to_vec());
        prop_assert_eq!(density_from_cdf(&cdf_from_density(&f)).unwrap(), f);
    }

    #[test]
    fn mixtures_of_rays_stay_in_the_class((p, raw) in class_and_weights()) {
        let (class, f) = member(&p, &raw);
        prop_assert!(f.belongs_to(&class));
        prop_assert_eq!(margins_of(f.values(), p.len()), p);
    }

    #[test]
    fn ray_and_direct_fits_agree(
        (p, raw) in class_and_weights(),
        nudge in prop::collection::vec(-2i64..=2, 3),
    ) {
        let m = p.len();
        let (class, f) = member(&p, &raw);
        let mut mu = pair_moments_of(f.values(), m);
        for (v, k) in mu.iter_mut().zip(&nudge) {
            *v += r(*k, 10);
            if *v < r(0, 1) || *v > r(1, 1) {
                *v = r(0, 1);
            }
        }
        let mu2 = PairMoments::new(m, mu.clone()).unwrap();
        let rays = class_rays(&class, &RayOptions::default()).unwrap();
        let a = fit_lambda(&rays, &mu2).unwrap();
        let b = fit_density_direct(&class, &mu2).unwrap();
        prop_assert_eq!(a.is_feasible(), b.is_feasible());
        for fit in [a, b] {
            if let Some(g) = &fit.density {
                prop_assert_eq!(pair_moments_of(g.values(), m), mu.clone());
                prop_assert!(g.belongs_to(&class));
            } else {
                let cert = fit.certificate.unwrap();
                prop_assert!(cert.verify(&fit.system.a, &fit.system.b));
            }
        }
    }

    #[test]
    fn fitted_members_are_feasible((p, raw) in class_and_weights()) {
        let (class, f) = member(&p, &raw);
        let mu2 = f.pair_moments();
        prop_assert!(fit_density_direct(&class, &mu2).unwrap().is_feasible());
    }

    #[test]
    fn sampling_is_deterministic((p, raw) in class_and_weights(), seed in any::<u64>()) {
        let (_, f) = member(&p, &raw);
        let a = sample(&f, 200, seed).unwrap();
        prop_assert_eq!(&a, &sample(&f, 200, seed).unwrap());
        prop_assert_eq!(a.counts().iter().sum::<u64>(), 200);
        for (k, count) in a.counts().iter().enumerate() {
            if f.values()[k] == r(0, 1) {
                prop_assert_eq!(*count, 0);
            }
        }
        prop_assert_eq!(empirical_moments(&a, 1).unwrap().len(), p.len());
    }
}

use std::cmp::Ordering;

use proptest::prelude::*;

use orbital_l2::l2_analyzer::{k_star, reducible_k_star, shell_mass_with, Sampling};
use orbital_l2::orbital_fourier::{IntegrandSpec, RegularPoint};
use orbital_l2::rational::{cmp_f64_rat, fmt_rat, parse_rat, rat, to_f64};
use orbital_l2::root_systems::{build_root_system, product, Family, RootSystem};
use orbital_l2::subroot_systems::{epsilon0, simple_subsystem};
use orbital_l2::weyl_groups::{generate, WeylGroup, DEFAULT_GROUP_CAP};

const SMALL: [(Family, usize); 9] = [
    (Family::A, 1),
    (Family::A, 2),
    (Family::A, 3),
    (Family::B, 2),
    (Family::B, 3),
    (Family::C, 3),
    (Family::D, 4),
    (Family::G, 2),
    (Family::F, 4),
];

fn small_type() -> impl Strategy<Value = (Family, usize)> {
    prop::sample::select(SMALL.to_vec())
}

fn group(f: Family, n: usize) -> (RootSystem, WeylGroup) {
    let rs = build_root_system(f, n).unwrap();
    let w = generate(&rs, DEFAULT_GROUP_CAP).unwrap();
    (rs, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reducible_threshold_is_max_of_factors(picks in prop::collection::vec(small_type(), 1..4)) {
        let factors: Vec<RootSystem> = picks.iter().map(|&(f, n)| build_root_system(f, n).unwrap()).collect();
        let direct = factors.iter().map(|rs| k_star(rs).unwrap()).max().unwrap();
        let prs = product(factors).unwrap();
        prop_assert_eq!(reducible_k_star(&prs).unwrap(), direct);
    }

    #[test]
    fn sign_is_multiplicative((f, n) in small_type(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (_, w) = group(f, n);
        let a = &w.elements()[i.index(w.order())];
        let b = &w.elements()[j.index(w.order())];
        let c = a.compose(b);
        let at = w.position(c.matrix()).expect("closed under products");
        prop_assert_eq!(w.elements()[at].sign(), a.sign() * b.sign());
        prop_assert_eq!(c.matrix().determinant(), rat(c.sign() as i64, 1));
    }

    #[test]
    fn numerator_is_skew((f, n) in small_type(), i in any::<prop::sample::Index>(), c in prop::collection::vec(-6.0f64..6.0, 4)) {
        let (rs, w) = group(f, n);
        let spec = IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), 1.5).unwrap();
        let basis = rs.orthonormal_basis();
        let mut h = vec![0.0; rs.ambient_dim()];
        for (b, x) in basis.iter().zip(&c) {
            for (hi, bi) in h.iter_mut().zip(b) {
                *hi += x * bi;
            }
        }
        let e = &w.elements()[i.index(w.order())];
        let a = spec.numerator(&h).unwrap();
        let b = spec.numerator(&e.act(&h).unwrap()).unwrap();
        prop_assert!((b - a * e.sign() as f64).norm() < 1e-9 * (1.0 + a.norm()));
        let v = spec.integrand(&h).unwrap();
        prop_assert!(v >= 0.0 && v.is_finite());
    }

    #[test]
    fn simple_subsystems_beat_the_whole((f, n) in small_type(), mask in 1u32..255) {
        let rs = build_root_system(f, n).unwrap();
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!subset.is_empty() && subset.len() < n);
        let psi = simple_subsystem(&rs, &subset).unwrap();
        prop_assert!(psi.is_closed());
        let gap = psi.ratio().unwrap() - rs.ratio();
        prop_assert!(gap >= epsilon0(&rs).unwrap() * rat(2, 1));
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn float_comparison_agrees_when_clear(p in -1000i64..1000, q in 1i64..1000, x in -10.0f64..10.0) {
        let r = rat(p, q);
        let y = to_f64(&r);
        if (x - y).abs() > 1e-9 {
            prop_assert_eq!(cmp_f64_rat(x, &r), x.partial_cmp(&y).unwrap());
        }
        prop_assert_eq!(cmp_f64_rat(p as f64, &rat(p, 1)), Ordering::Equal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn shell_mass_ignores_worker_count(seed in any::<u64>(), workers in 2usize..5, k in 1.0f64..2.0) {
        let (rs, w) = group(Family::B, 2);
        let spec = IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), k).unwrap();
        let base = Sampling::new(9_000, seed);
        let a = shell_mass_with(&spec, 4.0, &base.with_workers(Some(1))).unwrap();
        let b = shell_mass_with(&spec, 4.0, &base.with_workers(Some(workers))).unwrap();
        prop_assert_eq!(a.mass.to_bits(), b.mass.to_bits());
        prop_assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }
}

#[test]
fn signs_sum_to_zero() {
    for (f, n) in SMALL {
        let (_, w) = group(f, n);
        let total: i64 = w.elements().iter().map(|e| e.sign() as i64).sum();
        assert_eq!(total, 0, "{f:?}{n}");
    }
}

use num_complex::Complex64;
use proptest::prelude::*;
use qvortex::flow::{
    laurent_coefficients, laurent_order_for, velocity_images_bounded, velocity_laurent,
    velocity_qlog, velocity_qlog_bounded,
};
use qvortex::{AnnulusGeometry, TruncationPolicy, Vortex, VortexSystem};

fn policy() -> TruncationPolicy {
    TruncationPolicy::new(5000, 1e-15, 40).unwrap()
}

/// Annulus with r1 = 1, one vortex and one field point at least `gap` apart.
fn setup() -> impl Strategy<Value = (AnnulusGeometry, Complex64, f64, Complex64)> {
    (1.5f64..20.0, 0.05f64..0.95, 0.0f64..6.3, -2.0f64..2.0, 0.03f64..0.97, 0.0f64..6.3)
        .prop_filter_map("kappa away from 0", |(q, a0, t0, kappa, a, t)| {
            if kappa.abs() < 0.05 {
                return None;
            }
            let g = AnnulusGeometry::from_q(q).ok()?;
            let z0 = Complex64::from_polar(g.radius_at(a0), t0);
            let z = Complex64::from_polar(g.radius_at(a), t);
            ((z - z0).norm() > 0.05 * (g.r2() - g.r1())).then_some((g, z0, kappa, z))
        })
}

fn single(g: AnnulusGeometry, z0: Complex64, kappa: f64) -> VortexSystem {
    VortexSystem::single(g, Vortex::new(z0, kappa).unwrap()).unwrap()
}

fn scale_of(z: Complex64, z0: Complex64, kappa: f64) -> f64 {
    kappa.abs() / (z - z0).norm() + 1.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn images_match_qlog_within_tail_bounds((g, z0, kappa, z) in setup()) {
        let sys = single(g, z0, kappa);
        let a = velocity_images_bounded(&sys, z, 40).unwrap();
        let b = velocity_qlog_bounded(&sys, z, &policy()).unwrap();
        let slack = a.tail_bound + b.tail_bound + 1e-10 * scale_of(z, z0, kappa);
        prop_assert!((a.value - b.value).norm() < slack);
    }

    #[test]
    fn laurent_with_bounded_order_matches_qlog((g, z0, kappa, z) in setup()) {
        let sys = single(g, z0, kappa);
        let m = laurent_order_for(&sys, g.r1(), g.r2(), 1e-13);
        let l = velocity_laurent(&sys, &laurent_coefficients(&sys, m), z).unwrap();
        let b = velocity_qlog(&sys, z, &policy()).unwrap();
        prop_assert!((l - b).norm() < 1e-10 * scale_of(z, z0, kappa));
    }

    #[test]
    fn walls_are_streamlines((g, z0, kappa, _z) in setup(), t in 0.0f64..6.3) {
        let sys = single(g, z0, kappa);
        for r in [g.r1(), g.r2()] {
            let w = Complex64::from_polar(r, t);
            let v = velocity_qlog(&sys, w, &policy()).unwrap();
            prop_assert!((v * w).re.abs() / r < 1e-10 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn linear_in_strength((g, z0, kappa, z) in setup(), s in 0.2f64..5.0) {
        let a = velocity_qlog(&single(g, z0, kappa), z, &policy()).unwrap();
        let b = velocity_qlog(&single(g, z0, kappa * s), z, &policy()).unwrap();
        prop_assert!((b - a * s).norm() <= 1e-12 * b.norm().max(1e-300) * 10.0);
    }

    #[test]
    fn rotation_covariance((g, z0, kappa, z) in setup(), phi in 0.0f64..6.3) {
        let rot = Complex64::from_polar(1.0, phi);
        let a = velocity_qlog(&single(g, z0, kappa), z, &policy()).unwrap();
        let b = velocity_qlog(&single(g, z0 * rot, kappa), z * rot, &policy()).unwrap();
        prop_assert!((b - a * rot.conj()).norm() < 1e-11 * scale_of(z, z0, kappa));
    }

    #[test]
    fn conjugation_symmetry((g, z0, kappa, z) in setup()) {
        // mirror the vortex in the real axis, same strength: V̄'(z) = -conj(V̄(z̄))
        let a = velocity_qlog(&single(g, z0, kappa), z.conj(), &policy()).unwrap();
        let b = velocity_qlog(&single(g, z0.conj(), kappa), z, &policy()).unwrap();
        prop_assert!((b + a.conj()).norm() < 1e-11 * scale_of(z, z0, kappa));
    }

    #[test]
    fn scale_covariance((g, z0, kappa, z) in setup(), s in 0.1f64..10.0) {
        let a = velocity_qlog(&single(g, z0, kappa), z, &policy()).unwrap();
        let gs = g.scaled(s).unwrap();
        let b = velocity_qlog(&single(gs, z0 * s, kappa), z * s, &policy()).unwrap();
        prop_assert!((b * s - a).norm() < 1e-11 * scale_of(z, z0, kappa));
    }

    #[test]
    fn superposition((g, z0, kappa, z) in setup(), t in 0.0f64..6.3) {
        let other = Complex64::from_polar(g.geometric_mean(), t);
        prop_assume!((other - z0).norm() > 1e-3 && (other - z).norm() > 0.05);
        let pair = VortexSystem::new(
            g,
            vec![Vortex::new(z0, kappa).unwrap(), Vortex::new(other, -0.7).unwrap()],
        ).unwrap();
        let sum = velocity_qlog(&single(g, z0, kappa), z, &policy()).unwrap()
            + velocity_qlog(&single(g, other, -0.7), z, &policy()).unwrap();
        let both = velocity_qlog(&pair, z, &policy()).unwrap();
        prop_assert!((both - sum).norm() < 1e-12 * (1.0 + both.norm()));
    }
}

use num_complex::Complex64;
use proptest::prelude::*;
use qvortex::images::{cascade, lattice_images, reflect};
use qvortex::{AnnulusGeometry, Vortex};

proptest! {
    #[test]
    fn cascade_images_alternate_and_stay_outside(
        q in 1.2f64..30.0, a in 0.05f64..0.95, t in 0.0f64..6.3, depth in 1usize..12,
    ) {
        let g = AnnulusGeometry::from_q(q).unwrap();
        let v = Vortex::new(Complex64::from_polar(g.radius_at(a), t), 1.0).unwrap();
        let set = cascade(&v, &g, depth).unwrap();
        prop_assert_eq!(set.images.len(), 2 * depth);
        for im in &set.images {
            prop_assert!(!g.contains_closed(im.position));
            let want = if im.generation % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(im.strength_sign, want);
        }
    }

    #[test]
    fn reflection_is_an_involution(r in 0.1f64..10.0, re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() > 1e-3);
        prop_assert!((reflect(reflect(z, r), r) - z).norm() <= 1e-12 * z.norm());
    }

    #[test]
    fn lattice_shells_scale_by_q(q in 1.2f64..10.0, a in 0.05f64..0.95, n in 1usize..6) {
        let g = AnnulusGeometry::from_q(q).unwrap();
        let z0 = Complex64::from_polar(g.radius_at(a), 0.4);
        let lat = lattice_images(&Vortex::new(z0, 1.0).unwrap(), &g, n);
        prop_assert_eq!(lat.len(), 2 * (2 * n + 1));
        for im in &lat {
            if im.sign > 0 {
                let want = z0 * q.powi(im.shell);
                prop_assert!((im.position - want).norm() <= 1e-12 * want.norm());
            }
        }
    }
}

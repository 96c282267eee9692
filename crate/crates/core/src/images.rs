//! Image vortices generated by repeated reflection in the two cylinders.
//!
//! A vortex at `z₀` reflected in the inner circle lands at `r1²/z̄₀` with the
//! opposite sign; that image reflected in the outer circle lands at `q z₀` with
//! the original sign, and so on. Starting with the outer circle instead gives
//! the second cascade. Both cascades together fill the lattice
//!
//! ```text
//!   +κ at z₀ qⁿ,   -κ at (r1²/z̄₀) qⁿ,   n ∈ ℤ
//! ```
//!
//! using `r2²/qⁿ = r1²/q^{n-1}`. The bijection between cascade generations and
//! lattice shells is:
//!
//! | family      | generation `2j`      | generation `2j+1`          |
//! |-------------|----------------------|----------------------------|
//! | inner-first | `+` at `z₀ q^j`      | `-` at `(r1²/z̄₀) q^{-j}`   |
//! | outer-first | `+` at `z₀ q^{-j}`   | `-` at `(r1²/z̄₀) q^{j+1}`  |
//!
//! so cascades of depth `d` reach lattice shells up to `⌈d/2⌉`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{AnnulusGeometry, Vortex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "inner-first")]
    InnerFirst,
    #[serde(rename = "outer-first")]
    OuterFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Cylinder {
    Inner,
    Outer,
}

impl Cylinder {
    pub fn radius(self, geom: &AnnulusGeometry) -> f64 {
        match self {
            Cylinder::Inner => geom.r1(),
            Cylinder::Outer => geom.r2(),
        }
    }
}

/// Inverse point of `z` with respect to the circle of radius `radius`.
#[inline]
pub fn reflect(z: Complex64, radius: f64) -> Complex64 {
    (radius * radius) / z.conj()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageVortex {
    pub position: Complex64,
    /// `+1` or `-1`, multiplying the parent strength.
    pub strength_sign: i8,
    pub generation: u32,
    pub family: Family,
}

impl ImageVortex {
    /// The cylinder whose reflection produced this image.
    pub fn reflected_in(&self) -> Cylinder {
        let odd = self.generation % 2 == 1;
        match (self.family, odd) {
            (Family::InnerFirst, true) | (Family::OuterFirst, false) => Cylinder::Inner,
            _ => Cylinder::Outer,
        }
    }

    /// Lattice shell `n` and sign of this image (see the module table).
    pub fn lattice_index(&self) -> (i32, i8) {
        let j = (self.generation / 2) as i32;
        match (self.family, self.generation % 2 == 1) {
            (Family::InnerFirst, false) => (j, 1),
            (Family::InnerFirst, true) => (-j, -1),
            (Family::OuterFirst, false) => (-j, 1),
            (Family::OuterFirst, true) => (j + 1, -1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageSet {
    pub parent: Vortex,
    /// Ordered by generation, inner-first before outer-first within a generation.
    pub images: Vec<ImageVortex>,
    pub depth: usize,
}

/// Both reflection cascades of `parent`, `depth` generations each.
///
/// Positions come from the inversion recurrence, not from the closed-form lattice.
pub fn cascade(parent: &Vortex, geom: &AnnulusGeometry, depth: usize) -> Result<ImageSet> {
    if depth == 0 {
        return Err(Error::invalid("cascade depth", "depth must be at least 1"));
    }
    if !geom.contains_open(parent.position) {
        return Err(Error::domain(
            "cascade",
            format!(
                "parent at |z| = {} is not strictly inside ({}, {})",
                parent.position.norm(),
                geom.r1(),
                geom.r2()
            ),
        ));
    }
    let mut images = Vec::with_capacity(2 * depth);
    let mut inner_prev = parent.position;
    let mut outer_prev = parent.position;
    for g in 1..=depth as u32 {
        let odd = g % 2 == 1;
        let sign = if odd { -1 } else { 1 };
        // inner-first reflects in C1 on odd generations, outer-first in C2
        let (inner_cyl, outer_cyl) = if odd {
            (Cylinder::Inner, Cylinder::Outer)
        } else {
            (Cylinder::Outer, Cylinder::Inner)
        };
        inner_prev = reflect(inner_prev, inner_cyl.radius(geom));
        outer_prev = reflect(outer_prev, outer_cyl.radius(geom));
        images.push(ImageVortex {
            position: inner_prev,
            strength_sign: sign,
            generation: g,
            family: Family::InnerFirst,
        });
        images.push(ImageVortex {
            position: outer_prev,
            strength_sign: sign,
            generation: g,
            family: Family::OuterFirst,
        });
    }
    Ok(ImageSet {
        parent: *parent,
        images,
        depth,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeImage {
    pub position: Complex64,
    pub sign: i8,
    pub shell: i32,
    /// The `n = 0` positive entry, i.e. the vortex itself.
    pub is_parent: bool,
}

/// Closed-form lattice `z_k qⁿ` (sign +1) and `(r1²/z̄_k) qⁿ` (sign -1) for `|n| ≤ n_range`.
///
/// Ordered by `|n|`, then `n ≥ 0` before `n < 0`, then positive before negative.
pub fn lattice_images(parent: &Vortex, geom: &AnnulusGeometry, n_range: usize) -> Vec<LatticeImage> {
    let q = geom.q();
    let z0 = parent.position;
    let w0 = reflect(z0, geom.r1());
    let mut out = Vec::with_capacity(2 * (2 * n_range + 1));
    let mut push_shell = |n: i32| {
        let s = q.powi(n);
        out.push(LatticeImage {
            position: z0 * s,
            sign: 1,
            shell: n,
            is_parent: n == 0,
        });
        out.push(LatticeImage {
            position: w0 * s,
            sign: -1,
            shell: n,
            is_parent: false,
        });
    };
    push_shell(0);
    for n in 1..=n_range as i32 {
        push_shell(n);
        push_shell(-n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn cascade_table_for_real_parent() {
        let g = AnnulusGeometry::new(1.0, 4.0).unwrap();
        let v = Vortex::at(2.0, 0.0, 1.0).unwrap();
        let set = cascade(&v, &g, 2).unwrap();
        let by = |gen: u32, fam: Family| {
            set.images
                .iter()
                .find(|i| i.generation == gen && i.family == fam)
                .unwrap()
                .position
        };
        assert!(close(by(1, Family::InnerFirst), c(0.5, 0.0), 1e-15));
        assert!(close(by(1, Family::OuterFirst), c(8.0, 0.0), 1e-15));
        assert!(close(by(2, Family::OuterFirst), c(0.125, 0.0), 1e-15));
        assert!(close(by(2, Family::InnerFirst), c(32.0, 0.0), 1e-15));
    }

    #[test]
    fn depth_one_has_two_images_and_zero_is_rejected() {
        let g = AnnulusGeometry::new(1.0, 3.0).unwrap();
        let v = Vortex::at(0.0, 2.0, 1.0).unwrap();
        assert_eq!(cascade(&v, &g, 1).unwrap().images.len(), 2);
        assert!(cascade(&v, &g, 0).is_err());
        let outside = Vortex::at(3.5, 0.0, 1.0).unwrap();
        assert!(matches!(cascade(&outside, &g, 2), Err(Error::Domain { .. })));
    }

    #[test]
    fn cascade_matches_closed_forms() {
        let g = AnnulusGeometry::new(0.7, 1.9).unwrap();
        let q = g.q();
        let v = Vortex::at(0.9, -0.8, 1.0).unwrap();
        let z0 = v.position;
        let w0 = g.r1() * g.r1() / z0.conj();
        let set = cascade(&v, &g, 12).unwrap();
        for img in &set.images {
            let (n, sign) = img.lattice_index();
            let expected = if sign > 0 { z0 } else { w0 } * q.powi(n);
            assert_eq!(sign, img.strength_sign);
            assert!(close(img.position, expected, 1e-12), "{img:?} vs {expected}");
        }
    }

    #[test]
    fn cascade_signs_alternate_and_images_stay_outside() {
        let g = AnnulusGeometry::new(1.0, 2.0).unwrap();
        let v = Vortex::at(1.2, 0.7, -2.0).unwrap();
        let set = cascade(&v, &g, 9).unwrap();
        for img in &set.images {
            let expected = if img.generation % 2 == 1 { -1 } else { 1 };
            assert_eq!(img.strength_sign, expected);
            let r = img.position.norm();
            assert!(r <= g.r1() || r >= g.r2());
        }
        // generation order, inner-first leading
        for (i, img) in set.images.iter().enumerate() {
            assert_eq!(img.generation as usize, i / 2 + 1);
            let fam = if i % 2 == 0 { Family::InnerFirst } else { Family::OuterFirst };
            assert_eq!(img.family, fam);
        }
    }

    #[test]
    fn reflection_is_an_involution_along_the_cascade() {
        let g = AnnulusGeometry::new(1.0, 2.5).unwrap();
        let v = Vortex::at(-1.1, 1.3, 1.0).unwrap();
        let set = cascade(&v, &g, 8).unwrap();
        for fam in [Family::InnerFirst, Family::OuterFirst] {
            let chain: Vec<_> = set.images.iter().filter(|i| i.family == fam).collect();
            let mut prev = v.position;
            for img in chain {
                let back = reflect(img.position, img.reflected_in().radius(&g));
                assert!(close(back, prev, 1e-12));
                prev = img.position;
            }
        }
    }

    #[test]
    fn lattice_basic_shapes() {
        let g = AnnulusGeometry::new(1.0, 2.0).unwrap();
        let v = Vortex::at(1.5, 0.2, 1.0).unwrap();
        let l0 = lattice_images(&v, &g, 0);
        assert_eq!(l0.len(), 2);
        assert!(l0[0].is_parent && l0[0].position == v.position && l0[0].sign == 1);
        assert_eq!(l0[1].sign, -1);
        assert!(close(l0[1].position, reflect(v.position, 1.0), 1e-15));

        let l = lattice_images(&v, &g, 7);
        assert_eq!(l.len(), 30);
        assert_eq!(l.iter().map(|i| i.sign as i32).sum::<i32>(), 0);
        assert_eq!(l.iter().filter(|i| i.is_parent).count(), 1);
        for img in l.iter().filter(|i| !i.is_parent) {
            let r = img.position.norm();
            assert!(r <= g.r1() || r >= g.r2());
        }
        // modulus ladder
        for img in l.iter().filter(|i| i.sign > 0) {
            let expected = v.position.norm() * g.q().powi(img.shell);
            assert!((img.position.norm() - expected).abs() <= 1e-13 * expected);
        }
    }

    #[test]
    fn lattice_and_cascades_cover_the_same_points() {
        let g = AnnulusGeometry::new(1.0, 1.7).unwrap();
        let v = Vortex::at(1.1, 0.6, 1.0).unwrap();
        let find = |pts: &[(Complex64, i8)], p: Complex64, s: i8| {
            pts.iter().any(|&(x, t)| t == s && close(x, p, 1e-11))
        };
        for n in 1..6usize {
            let lattice: Vec<_> = lattice_images(&v, &g, n)
                .iter()
                .map(|i| (i.position, i.sign))
                .collect();
            let deep = cascade(&v, &g, 2 * n + 1).unwrap();
            let mut from_cascade: Vec<_> =
                deep.images.iter().map(|i| (i.position, i.strength_sign)).collect();
            from_cascade.push((v.position, 1));
            // every lattice point is reached by depth 2n+1
            for &(p, s) in &lattice {
                assert!(find(&from_cascade, p, s), "missing {p} ({s}) at n = {n}");
            }
            // every image of depth 2n lies on the n-shell lattice
            let shallow = cascade(&v, &g, 2 * n).unwrap();
            for img in &shallow.images {
                assert!(find(&lattice, img.position, img.strength_sign));
            }
        }
    }
}

//! The annulus `r1 ≤ |z| ≤ r2` and the point vortices living in it.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcalc::QBase;

/// Relative slack for "on the boundary" tests, in units of the radius.
pub const BOUNDARY_REL_TOL: f64 = 1e-12;

/// Relative separation (in units of `r2`) below which two points are treated as coincident.
pub const COINCIDENCE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusGeometry {
    r1: f64,
    r2: f64,
}

impl AnnulusGeometry {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite()) || r1 <= 0.0 || r2 <= r1 {
            return Err(Error::invalid(
                "geometry",
                format!("need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}"),
            ));
        }
        let g = AnnulusGeometry { r1, r2 };
        // q must clear the base gap as well
        QBase::new(g.q())?;
        Ok(g)
    }

    /// Geometry with `r1 = 1` and `r2 = √q`.
    pub fn from_q(q: f64) -> Result<Self> {
        Self::new(1.0, q.sqrt())
    }

    #[inline]
    pub fn r1(&self) -> f64 {
        self.r1
    }

    #[inline]
    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// `q = r2² / r1²`.
    #[inline]
    pub fn q(&self) -> f64 {
        (self.r2 * self.r2) / (self.r1 * self.r1)
    }

    pub fn base(&self) -> QBase {
        QBase::new(self.q()).expect("validated at construction")
    }

    /// `√(r1 r2)`, where a lone vortex stands still.
    pub fn geometric_mean(&self) -> f64 {
        (self.r1 * self.r2).sqrt()
    }

    /// Radius whose position parameter `log_q(r² / r1²)` equals `alpha`.
    pub fn radius_at(&self, alpha: f64) -> f64 {
        self.r1 * self.q().powf(alpha / 2.0)
    }

    pub fn contains_open(&self, z: Complex64) -> bool {
        let r = z.norm();
        r > self.r1 && r < self.r2
    }

    /// Closed annulus with a relative slack of [`BOUNDARY_REL_TOL`].
    pub fn contains_closed(&self, z: Complex64) -> bool {
        let r = z.norm();
        r >= self.r1 * (1.0 - BOUNDARY_REL_TOL) && r <= self.r2 * (1.0 + BOUNDARY_REL_TOL)
    }

    pub(crate) fn require_closed(&self, op: &'static str, z: Complex64) -> Result<()> {
        if self.contains_closed(z) {
            Ok(())
        } else {
            Err(Error::domain(
                op,
                format!(
                    "|z| = {} lies outside the annulus [{}, {}]",
                    z.norm(),
                    self.r1,
                    self.r2
                ),
            ))
        }
    }

    /// The same annulus scaled by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.r1 * s, self.r2 * s)
    }
}

/// A point vortex: conjugate velocity `iκ/(z - z_k)` in free space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vortex {
    pub position: Complex64,
    pub strength: f64,
}

impl Vortex {
    pub fn new(position: Complex64, strength: f64) -> Result<Self> {
        if !(position.re.is_finite() && position.im.is_finite()) {
            return Err(Error::invalid("vortex", format!("position {position} is not finite")));
        }
        if !strength.is_finite() || strength == 0.0 {
            return Err(Error::invalid(
                "vortex",
                format!("strength must be finite and nonzero, got {strength}"),
            ));
        }
        Ok(Vortex { position, strength })
    }

    pub fn at(x: f64, y: f64, strength: f64) -> Result<Self> {
        Self::new(Complex64::new(x, y), strength)
    }
}

/// Vortices strictly inside an annulus, at pairwise distinct positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VortexSystem {
    geom: AnnulusGeometry,
    vortices: Vec<Vortex>,
}

impl VortexSystem {
    pub fn new(geom: AnnulusGeometry, vortices: Vec<Vortex>) -> Result<Self> {
        if vortices.is_empty() {
            return Err(Error::invalid("vortex system", "at least one vortex is required"));
        }
        for (k, v) in vortices.iter().enumerate() {
            if !geom.contains_open(v.position) {
                return Err(Error::domain(
                    "vortex system",
                    format!(
                        "vortex {k} at |z| = {} is not strictly inside ({}, {})",
                        v.position.norm(),
                        geom.r1(),
                        geom.r2()
                    ),
                ));
            }
        }
        let tol = COINCIDENCE_REL_TOL * geom.r2();
        for i in 0..vortices.len() {
            for j in i + 1..vortices.len() {
                if (vortices[i].position - vortices[j].position).norm() <= tol {
                    return Err(Error::invalid(
                        "vortex system",
                        format!("vortices {i} and {j} coincide"),
                    ));
                }
            }
        }
        Ok(VortexSystem { geom, vortices })
    }

    pub fn single(geom: AnnulusGeometry, vortex: Vortex) -> Result<Self> {
        Self::new(geom, vec![vortex])
    }

    #[inline]
    pub fn geom(&self) -> &AnnulusGeometry {
        &self.geom
    }

    #[inline]
    pub fn vortices(&self) -> &[Vortex] {
        &self.vortices
    }

    pub fn len(&self) -> usize {
        self.vortices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vortices.is_empty()
    }

    /// Same strengths and geometry, new positions.
    pub fn with_positions(&self, positions: &[Complex64]) -> Result<Self> {
        assert_eq!(positions.len(), self.vortices.len());
        let vortices = self
            .vortices
            .iter()
            .zip(positions)
            .map(|(v, &p)| Vortex::new(p, v.strength))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.geom, vortices)
    }

    /// Error if `z` sits on one of the vortices.
    pub(crate) fn check_not_on_vortex(&self, z: Complex64) -> Result<()> {
        let tol = COINCIDENCE_REL_TOL * self.geom.r2();
        for (index, v) in self.vortices.iter().enumerate() {
            if (z - v.position).norm() <= tol {
                return Err(Error::Singularity { index, z });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_invariants() {
        let g = AnnulusGeometry::new(1.0, 4.0).unwrap();
        assert_eq!(g.q(), 16.0);
        assert_eq!(g.geometric_mean(), 2.0);
        assert!((g.radius_at(0.5) - 2.0).abs() < 1e-15);
        assert!(AnnulusGeometry::new(2.0, 1.0).is_err());
        assert!(AnnulusGeometry::new(0.0, 1.0).is_err());
        assert!(AnnulusGeometry::new(1.0, 1.0).is_err());
    }

    #[test]
    fn vortex_validation() {
        assert!(Vortex::at(1.0, 0.0, 0.0).is_err());
        assert!(Vortex::at(f64::NAN, 0.0, 1.0).is_err());
        let g = AnnulusGeometry::new(1.0, 2.0).unwrap();
        let inside = Vortex::at(1.5, 0.0, 1.0).unwrap();
        let on_wall = Vortex::at(2.0, 0.0, 1.0).unwrap();
        assert!(VortexSystem::single(g, inside).is_ok());
        assert!(VortexSystem::single(g, on_wall).is_err());
        assert!(VortexSystem::new(g, vec![]).is_err());
        assert!(VortexSystem::new(g, vec![inside, inside]).is_err());
    }
}

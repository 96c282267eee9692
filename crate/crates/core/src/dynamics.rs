//! Vortex motion in the annulus.
//!
//! A vortex is carried by everything except its own singular term: its images
//! and the full fields of the other vortices. Its position obeys `ż = conj(V̄)`.
//! For a single vortex the radius is conserved and the vortex circles at
//!
//! ```text
//! ω = κ/(r²(q-1)) [ Ln_q(1 - r²/r1²) - Ln_q(1 - r2²/r²) ]
//! ```
//!
//! Both q-log arguments exceed 1 here, so the pole-sum form is used.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{qlog_field, velocity_qlog};
use crate::geometry::{AnnulusGeometry, Vortex, VortexSystem, COINCIDENCE_REL_TOL};
use crate::qcalc::{q_log_polesum, TruncationPolicy};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Position parameter `α = log_q(|z|²/r1²)`: 0 on the inner wall, 1 on the outer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaParam {
    pub alpha: f64,
}

impl AlphaParam {
    pub fn of(geom: &AnnulusGeometry, z: Complex64) -> Result<Self> {
        if !geom.contains_open(z) {
            return Err(Error::domain(
                "alpha",
                format!("|z| = {} is not strictly inside the annulus", z.norm()),
            ));
        }
        let alpha = (z.norm_sqr() / geom.r1().powi(2)).ln() / geom.q().ln();
        Ok(AlphaParam { alpha })
    }

    pub fn radius(&self, geom: &AnnulusGeometry) -> f64 {
        geom.radius_at(self.alpha)
    }
}

/// Uniform circular motion of a lone vortex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitState {
    pub radius: f64,
    pub phase: f64,
    pub omega: f64,
    /// Contribution of the images in the inner cylinder.
    pub omega1: f64,
    /// Contribution of the images in the outer cylinder.
    pub omega2: f64,
}

impl OrbitState {
    /// `2π/|ω|`; infinite at the rest point.
    pub fn period(&self) -> f64 {
        TAU / self.omega.abs()
    }

    pub fn position_at(&self, t: f64) -> Complex64 {
        Complex64::from_polar(self.radius, self.omega * t + self.phase)
    }
}

/// `Ln_q(1 - x)` for real `x` in `(0, q)`, by the pole sum.
fn ln_q_one_minus(x: f64, geom: &AnnulusGeometry, policy: &TruncationPolicy) -> Result<f64> {
    Ok(q_log_polesum(Complex64::new(-x, 0.0), geom.base(), policy)?.re)
}

/// Angular velocity of a single vortex of strength `kappa` at `radius`.
pub fn orbit_frequency(
    geom: &AnnulusGeometry,
    kappa: f64,
    radius: f64,
    policy: &TruncationPolicy,
) -> Result<OrbitState> {
    if !(radius > geom.r1() && radius < geom.r2()) {
        return Err(Error::domain(
            "orbit_frequency",
            format!("radius {radius} is not inside ({}, {})", geom.r1(), geom.r2()),
        ));
    }
    let r2 = radius * radius;
    let scale = kappa / (r2 * (geom.q() - 1.0));
    let inner_images = ln_q_one_minus(geom.r2().powi(2) / r2, geom, policy)?;
    let outer_images = ln_q_one_minus(r2 / geom.r1().powi(2), geom, policy)?;
    let omega1 = -scale * inner_images;
    let omega2 = scale * outer_images;
    Ok(OrbitState {
        radius,
        phase: 0.0,
        omega: omega1 + omega2,
        omega1,
        omega2,
    })
}

/// Conjugate velocity advecting vortex `k`.
pub fn self_velocity(sys: &VortexSystem, k: usize, policy: &TruncationPolicy) -> Result<Complex64> {
    let geom = sys.geom();
    let vs = sys.vortices();
    let me = vs.get(k).ok_or_else(|| {
        Error::invalid("vortex index", format!("{k} out of range for {} vortices", vs.len()))
    })?;
    let z = me.position;
    let r2 = z.norm_sqr();
    // Ln_q(1 - z/z_k) and Ln_q(1 - z_k/z) cancel at z = z_k
    let logs = ln_q_one_minus(geom.r2().powi(2) / r2, geom, policy)?
        - ln_q_one_minus(r2 / geom.r1().powi(2), geom, policy)?;
    let mut v = I * me.strength * logs / (z * (geom.q() - 1.0));
    let tol = COINCIDENCE_REL_TOL * geom.r2();
    for (j, other) in vs.iter().enumerate() {
        if j == k {
            continue;
        }
        if (other.position - z).norm() <= tol {
            return Err(Error::Singularity { index: j, z });
        }
        v += qlog_field(geom, other, z, policy)?.value;
    }
    Ok(v)
}

/// Why an integration stopped early.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Halt {
    pub time: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `positions[k][i]` is vortex `k` at `times[i]`.
    pub positions: Vec<Vec<Complex64>>,
    /// Initial `|z_k|`.
    pub conserved_radii: Vec<f64>,
    pub halt: Option<Halt>,
}

impl Trajectory {
    /// Largest `| |z_k(t)| - |z_k(0)| |` over the whole run.
    pub fn radius_drift(&self) -> f64 {
        self.positions
            .iter()
            .zip(&self.conserved_radii)
            .flat_map(|(path, &r0)| path.iter().map(move |z| (z.norm() - r0).abs()))
            .fold(0.0, f64::max)
    }

    pub fn final_positions(&self) -> Vec<Complex64> {
        self.positions.iter().map(|p| *p.last().unwrap()).collect()
    }
}

fn rates(sys: &VortexSystem, positions: &[Complex64], policy: &TruncationPolicy) -> Result<Vec<Complex64>> {
    let moved = sys.with_positions(positions)?;
    (0..positions.len())
        .map(|k| self_velocity(&moved, k, policy).map(|v| v.conj()))
        .collect()
}

fn rk4_step(
    sys: &VortexSystem,
    z: &[Complex64],
    h: f64,
    policy: &TruncationPolicy,
) -> Result<Vec<Complex64>> {
    let shift = |k: &[Complex64], s: f64| -> Vec<Complex64> {
        z.iter().zip(k).map(|(a, b)| a + b * s).collect()
    };
    let k1 = rates(sys, z, policy)?;
    let k2 = rates(sys, &shift(&k1, h / 2.0), policy)?;
    let k3 = rates(sys, &shift(&k2, h / 2.0), policy)?;
    let k4 = rates(sys, &shift(&k3, h), policy)?;
    Ok((0..z.len())
        .map(|i| z[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
        .collect())
}

/// Fixed-step classical Runge-Kutta from `t = 0` to `t_end`. The last step is
/// shortened to land on `t_end`. If a vortex leaves the annulus or meets
/// another one, the partial trajectory is returned with [`Trajectory::halt`] set.
pub fn integrate(
    sys: &VortexSystem,
    t_end: f64,
    dt: f64,
    policy: &TruncationPolicy,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::invalid("t_end", format!("must be non-negative, got {t_end}")));
    }
    let mut z: Vec<Complex64> = sys.vortices().iter().map(|v| v.position).collect();
    let mut traj = Trajectory {
        times: vec![0.0],
        positions: z.iter().map(|&p| vec![p]).collect(),
        conserved_radii: z.iter().map(|p| p.norm()).collect(),
        halt: None,
    };
    let steps = (t_end / dt * (1.0 - 1e-12)).ceil() as usize;
    for i in 0..steps {
        let t0 = i as f64 * dt;
        let h = dt.min(t_end - t0);
        match rk4_step(sys, &z, h, policy) {
            Ok(next) => z = next,
            Err(e) if e.is_convergence() => return Err(e),
            Err(e) => {
                traj.halt = Some(Halt {
                    time: t0,
                    reason: e.to_string(),
                });
                return Ok(traj);
            }
        }
        if let Err(e) = sys.with_positions(&z) {
            traj.halt = Some(Halt {
                time: t0 + h,
                reason: e.to_string(),
            });
            return Ok(traj);
        }
        traj.times.push(if i + 1 == steps { t_end } else { t0 + h });
        for (path, p) in traj.positions.iter_mut().zip(&z) {
            path.push(*p);
        }
    }
    Ok(traj)
}

/// Step for a lone vortex so that `|ω| dt = 0.01`, or `fallback` at the rest point.
pub fn default_step(orbit: &OrbitState, fallback: f64) -> f64 {
    if orbit.omega == 0.0 {
        fallback
    } else {
        0.01 / orbit.omega.abs()
    }
}

/// Velocity and angular frequency of a limiting geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitValue {
    pub velocity: Complex64,
    pub omega: f64,
}

fn check_limit_point(z: Complex64, poles: &[Complex64], scale: f64) -> Result<()> {
    for (index, &p) in poles.iter().enumerate() {
        if (z - p).norm() <= COINCIDENCE_REL_TOL * scale {
            return Err(Error::Singularity { index, z });
        }
    }
    Ok(())
}

/// Outer cylinder removed: vortex outside one cylinder of radius `r1`,
/// with a negative image at `r1²/z̄₀` and a positive one at the centre.
pub fn limit_one_cylinder(r1: f64, kappa: f64, z0: Complex64, z: Complex64) -> Result<LimitValue> {
    let a2 = z0.norm_sqr();
    if !(r1 > 0.0 && a2 > r1 * r1) {
        return Err(Error::domain(
            "limit_one_cylinder",
            format!("need |z0| > r1 > 0, got |z0| = {}, r1 = {r1}", a2.sqrt()),
        ));
    }
    let w = r1 * r1 / z0.conj();
    check_limit_point(z, &[z0, w, Complex64::new(0.0, 0.0)], z0.norm())?;
    let velocity = I * kappa / (z - z0) - I * kappa / z * w / (z - w);
    let omega = kappa * r1 * r1 / (a2 * (a2 - r1 * r1));
    Ok(LimitValue { velocity, omega })
}

/// `iκ [ln(z - z₀) - ln(z - r1²/z̄₀) + ln z]`.
pub fn limit_one_cylinder_potential(r1: f64, kappa: f64, z0: Complex64, z: Complex64) -> Complex64 {
    let w = r1 * r1 / z0.conj();
    I * kappa * ((z - z0).ln() - (z - w).ln() + z.ln())
}

/// Inner cylinder removed: vortex inside a disk of radius `r2`, with one
/// negative image at `r2²/z̄₀`.
pub fn limit_one_disk(r2: f64, kappa: f64, z0: Complex64, z: Complex64) -> Result<LimitValue> {
    let a2 = z0.norm_sqr();
    if !(r2 > 0.0 && a2 < r2 * r2) {
        return Err(Error::domain(
            "limit_one_disk",
            format!("need |z0| < r2, got |z0| = {}, r2 = {r2}", a2.sqrt()),
        ));
    }
    let mut poles = vec![z0];
    if a2 > 0.0 {
        poles.push(r2 * r2 / z0.conj());
    }
    check_limit_point(z, &poles, r2)?;
    let mut velocity = I * kappa / (z - z0);
    if a2 > 0.0 {
        velocity -= I * kappa / (z - poles[1]);
    }
    Ok(LimitValue {
        velocity,
        omega: -kappa / (r2 * r2 - a2),
    })
}

/// `iκ [ln(z - z₀) - ln(z - r2²/z̄₀) + ln(-r2²/z̄₀)]`.
pub fn limit_one_disk_potential(r2: f64, kappa: f64, z0: Complex64, z: Complex64) -> Complex64 {
    let w = r2 * r2 / z0.conj();
    I * kappa * ((z - z0).ln() - (z - w).ln() + (-w).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitCase {
    OneCylinder,
    OneDisk,
}

/// Worst relative discrepancy between the full annulus solution and a limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub q: f64,
    pub velocity_rel_err: f64,
    pub omega_rel_err: f64,
}

/// Compares the annulus at each `q` with the limit. For the cylinder `r1`
/// is held and `r2 = r1 √q`; for the disk `r2` is held and `r1 = r2/√q`.
/// Points that fall outside the annulus at some `q` are an error.
pub fn limit_convergence(
    case: LimitCase,
    radius: f64,
    vortex: Vortex,
    points: &[Complex64],
    qs: &[f64],
    policy: &TruncationPolicy,
) -> Result<Vec<LimitRow>> {
    qs.iter()
        .map(|&q| {
            let geom = match case {
                LimitCase::OneCylinder => AnnulusGeometry::new(radius, radius * q.sqrt())?,
                LimitCase::OneDisk => AnnulusGeometry::new(radius / q.sqrt(), radius)?,
            };
            let sys = VortexSystem::single(geom, vortex)?;
            let (z0, kappa) = (vortex.position, vortex.strength);
            let limit = |z| match case {
                LimitCase::OneCylinder => limit_one_cylinder(radius, kappa, z0, z),
                LimitCase::OneDisk => limit_one_disk(radius, kappa, z0, z),
            };
            let mut worst = 0.0_f64;
            for &z in points {
                let full = velocity_qlog(&sys, z, policy)?;
                let lim = limit(z)?.velocity;
                worst = worst.max((full - lim).norm() / lim.norm());
            }
            let orbit = orbit_frequency(&geom, kappa, z0.norm(), policy)?;
            let lim_omega = limit(z0 + z0.norm() * 0.5)?.omega;
            Ok(LimitRow {
                q,
                velocity_rel_err: worst,
                omega_rel_err: ((orbit.omega - lim_omega) / lim_omega).abs(),
            })
        })
        .collect()
}

/// `n` deterministic sample points for a limit comparison around a fixed
/// cylinder (`radius = r1`) or disk (`radius = r2`), kept away from `z0`.
/// They lie inside the annulus for every `q ≥ 10³`.
pub fn limit_sample_points(case: LimitCase, radius: f64, z0: Complex64, n: usize) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut out = Vec::with_capacity(n);
    let mut j = 0usize;
    while out.len() < n && j < 10 * n + 10 {
        let t = (j % n.max(1)) as f64 / n.max(1) as f64;
        let rho = match case {
            LimitCase::OneCylinder => radius * (1.15 + 2.0 * t),
            LimitCase::OneDisk => radius * (0.25 + 0.65 * t),
        };
        let z = Complex64::from_polar(rho, 0.3 + golden * j as f64);
        if (z - z0).norm() >= 0.05 * radius {
            out.push(z);
        }
        j += 1;
    }
    out
}

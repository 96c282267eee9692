//! Jacobi theta form of the stream function.
//!
//! With the outer radius scaled to 1, `τ = -ln z` maps the annulus onto a
//! rectangle of width `-ln r1` and height `2π`. In these coordinates
//!
//! ```text
//! Ψ(z) = Σ κ_k ln | Θ₁(i(τ - τ_k)/2) / Θ₁(i(τ + τ̄_k)/2) |
//! ```
//!
//! with nome `q̃ = r1 = 1/√q`. Only `|Θ₁|` enters, and `Θ₁(x + π) = -Θ₁(x)`, so
//! the branch of the logarithm drops out.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{AnnulusGeometry, Vortex, VortexSystem, BOUNDARY_REL_TOL};
use crate::qcalc::{q_exp_star, Nome, TruncationPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaParams {
    q_tilde: f64,
    g: f64,
}

impl ThetaParams {
    pub fn new(q_tilde: f64, policy: &TruncationPolicy) -> Result<Self> {
        if !(q_tilde > 0.0 && q_tilde < 1.0) {
            return Err(Error::invalid(
                "q_tilde",
                format!("need 0 < q_tilde < 1, got {q_tilde}"),
            ));
        }
        policy.validate()?;
        let g = euler_product(q_tilde * q_tilde, policy)?;
        Ok(ThetaParams { q_tilde, g })
    }

    /// Nome of an annulus: `q̃ = r1/r2`.
    pub fn for_geometry(geom: &AnnulusGeometry, policy: &TruncationPolicy) -> Result<Self> {
        Self::new(geom.base().q_tilde(), policy)
    }

    pub fn q_tilde(&self) -> f64 {
        self.q_tilde
    }

    /// `G = Π_{n≥1} (1 - q̃²ⁿ)`.
    pub fn g(&self) -> f64 {
        self.g
    }
}

/// `Π_{n≥1} (1 - pⁿ)`.
fn euler_product(p: f64, policy: &TruncationPolicy) -> Result<f64> {
    let mut prod = 1.0;
    let mut pn = 1.0;
    for _ in 0..policy.max_terms {
        pn *= p;
        prod *= 1.0 - pn;
        // remaining factors change ln G by at most p^{n+1}/((1-p)(1-p^{n+1}))
        let tail = pn * p / ((1.0 - p) * (1.0 - pn * p));
        if tail.exp_m1() * prod <= policy.abs_tol.max(f64::EPSILON * prod) {
            return Ok(prod);
        }
    }
    Err(Error::NoConvergence {
        op: "euler_product",
        terms: policy.max_terms,
        bound: pn,
        tol: policy.abs_tol,
    })
}

/// Rectangle coordinates of a point and of the vortices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RectangleCoords {
    pub tau: Complex64,
    pub tau_k: Vec<Complex64>,
}

/// `τ = -ln z` on the principal branch.
pub fn to_tau(z: Complex64) -> Complex64 {
    -z.ln()
}

pub fn from_tau(tau: Complex64) -> Complex64 {
    (-tau).exp()
}

pub fn to_rectangle(sys: &VortexSystem, z: Complex64) -> Result<RectangleCoords> {
    sys.geom().require_closed("to_rectangle", z)?;
    Ok(RectangleCoords {
        tau: to_tau(z),
        tau_k: sys.vortices().iter().map(|v| to_tau(v.position)).collect(),
    })
}

/// `Θ₁(x; q̃) = 2G q̃^{1/4} sin x Π (1 - q̃²ⁿ e^{2ix})(1 - q̃²ⁿ e^{-2ix})`.
pub fn theta1(x: Complex64, params: &ThetaParams, policy: &TruncationPolicy) -> Result<Complex64> {
    let p = params.q_tilde * params.q_tilde;
    let e = (2.0 * Complex64::i() * x).exp();
    let prod = theta_product(p, e, policy)?;
    Ok(2.0 * params.g * params.q_tilde.powf(0.25) * x.sin() * prod)
}

/// `Π_{n≥1} (1 - pⁿ e)(1 - pⁿ/e)`.
fn theta_product(p: f64, e: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    let einv = 1.0 / e;
    let spread = e.norm() + einv.norm();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut pn = 1.0;
    let mut bound = f64::INFINITY;
    for _ in 0..policy.max_terms {
        pn *= p;
        prod *= (1.0 - pn * e) * (1.0 - pn * einv);
        let first = spread * pn * p;
        if first < 0.5 {
            let log_tail = first / ((1.0 - p) * (1.0 - first));
            bound = prod.norm() * log_tail.exp_m1();
            if bound <= policy.abs_tol.max(f64::EPSILON * prod.norm()) {
                return Ok(prod);
            }
        }
    }
    if policy.abs_tol == 0.0 {
        return Ok(prod);
    }
    Err(Error::NoConvergence {
        op: "theta1",
        terms: policy.max_terms,
        bound,
        tol: policy.abs_tol,
    })
}

/// Θ₁ assembled from two q-exponentials `E*_{q̃²}`.
pub fn theta1_composed(
    x: Complex64,
    params: &ThetaParams,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let p = params.q_tilde * params.q_tilde;
    let nome = Nome::new(p)?;
    let e = (2.0 * Complex64::i() * x).exp();
    let plus = q_exp_star(p * e / (p - 1.0), nome, policy)?;
    let minus = q_exp_star(p / e / (p - 1.0), nome, policy)?;
    Ok(2.0 * params.g * params.q_tilde.powf(0.25) * x.sin() * plus * minus)
}

/// `ln|Θ₁(x)|` with the prefactor `2G q̃^{1/4}` dropped (it cancels in Ψ).
/// `e = e^{2ix}` is passed directly so no logarithm is ever taken.
fn log_abs_theta_core(e: Complex64, p: f64, policy: &TruncationPolicy) -> Result<f64> {
    // |sin x| = |e^{-ix}| |e - 1| / 2 and |e^{-ix}| = |e|^{-1/2}
    let sin_abs = (e - 1.0).norm() / (2.0 * e.norm().sqrt());
    let prod = theta_product(p, e, policy)?;
    Ok(sin_abs.ln() + prod.norm().ln())
}

/// Stream function from the theta ratio. The system must have `r2 = 1`;
/// see [`rescale_to_unit_outer`].
pub fn stream_theta(sys: &VortexSystem, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let geom = sys.geom();
    if (geom.r2() - 1.0).abs() > BOUNDARY_REL_TOL {
        return Err(Error::invalid(
            "stream_theta",
            format!("outer radius must be 1, got {}", geom.r2()),
        ));
    }
    geom.require_closed("stream_theta", z)?;
    sys.check_not_on_vortex(z)?;
    let p = geom.r1() * geom.r1();
    let mut psi = 0.0;
    for (k, v) in sys.vortices().iter().enumerate() {
        // e^{2ix} for x = i(τ - τ_k)/2 and x = i(τ + τ̄_k)/2
        let num = log_abs_theta_core(z / v.position, p, policy)?;
        let den = log_abs_theta_core(z * v.position.conj(), p, policy)?;
        if !den.is_finite() {
            return Err(Error::ImagePole {
                vortex: k,
                shell: 0,
                image: 1.0 / v.position.conj(),
                z,
            });
        }
        psi += v.strength * (num - den);
    }
    Ok(psi)
}

/// Similar system with `r2 = 1`, and the scale factor `1/r2` applied.
pub fn rescale_to_unit_outer(sys: &VortexSystem) -> (VortexSystem, f64) {
    let s = 1.0 / sys.geom().r2();
    if s == 1.0 {
        return (sys.clone(), 1.0);
    }
    let geom = AnnulusGeometry::new(sys.geom().r1() * s, 1.0).expect("similar annulus");
    let vortices = sys
        .vortices()
        .iter()
        .map(|v| Vortex::new(v.position * s, v.strength).expect("finite"))
        .collect();
    (
        VortexSystem::new(geom, vortices).expect("similar system"),
        s,
    )
}

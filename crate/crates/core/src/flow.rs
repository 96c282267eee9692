//! Conjugate velocity `V̄ = u - iv`, complex potential and stream function of
//! point vortices in the annulus, computed three independent ways:
//!
//! * **Laurent**: explicit coefficients `a_n`, `b_{n+2}` solved from the two
//!   wall conditions, truncated at order `M`.
//! * **Images**: the lattice of image vortices `z_k qⁿ` (+) and `(r1²/z̄_k) qⁿ` (-),
//!   summed in matched shells, plus a `+κ` image at the centre.
//! * **q-log**: four q-logarithms per vortex,
//!
//!   ```text
//!   V̄(z) = Σ iκ_k [ 1/(z - z_k) + ( Ln_q(1 - z/z_k) - Ln_q(1 - z z̄_k/r1²)
//!                                  + Ln_q(1 - r2²/(z z̄_k)) - Ln_q(1 - z_k/z) ) / (z(q-1)) ]
//!   ```
//!
//! The potential `F` with `F' = V̄` is built from Jackson q-exponentials and the
//! stream function is `Ψ = Im F`.
//!
//! The image double sum only converges conditionally. Pairing the `±` terms of
//! equal shell leaves a net image strength of `-κ` inside the inner cylinder, so
//! the pairwise sum alone differs from the other two representations by `iκ/z`.
//! The centre image restores zero circulation around the inner cylinder, which
//! is what the Laurent solution (with `b₁ = 0`) has.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AnnulusGeometry, Vortex, VortexSystem, COINCIDENCE_REL_TOL};
use crate::images::reflect;
use crate::qcalc::{q_exp, q_log_series, QBase, TruncationPolicy, Truncated};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Laurent order used when nothing else is asked for.
pub const DEFAULT_LAURENT_ORDER: usize = 60;

/// Largest order the automatic choice will go to.
pub const MAX_AUTO_LAURENT_ORDER: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Laurent,
    Images,
    Qlog,
}

impl Representation {
    pub const ALL: [Representation; 3] = [
        Representation::Laurent,
        Representation::Images,
        Representation::Qlog,
    ];
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Laurent => "laurent",
            Representation::Images => "images",
            Representation::Qlog => "qlog",
        })
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laurent" => Ok(Representation::Laurent),
            "images" => Ok(Representation::Images),
            "qlog" => Ok(Representation::Qlog),
            other => Err(Error::invalid(
                "representation",
                format!("unknown representation {other:?}"),
            )),
        }
    }
}

/// Laurent coefficients of the regular part of `V̄`.
///
/// Stored in units of the geometric-mean radius `s = √(r1 r2)`: with
/// `ζ = z/s` the regular part is `(1/s) [Σ ã_n ζⁿ + Σ b̃_{n+2} ζ^{-(n+2)}]`.
/// In those units the coefficients decay geometrically for any annulus, so
/// high orders neither overflow nor underflow. [`a`](Self::a) and
/// [`b`](Self::b) return the unscaled values.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentCoefficients {
    pub order: usize,
    pub scale: f64,
    a_scaled: Vec<Complex64>,
    b_scaled: Vec<Complex64>,
}

impl LaurentCoefficients {
    /// `a_n`, `0 ≤ n ≤ order`.
    pub fn a(&self, n: usize) -> Complex64 {
        self.a_scaled[n] / self.scale.powi(n as i32 + 1)
    }

    /// `b_j`, `1 ≤ j ≤ order + 2`; `b_1` is always zero.
    pub fn b(&self, j: usize) -> Complex64 {
        assert!(j >= 1 && j <= self.order + 2, "b index {j} out of range");
        if j == 1 {
            return Complex64::new(0.0, 0.0);
        }
        self.b_scaled[j - 2] * self.scale.powi(j as i32 - 1)
    }

    pub fn a_scaled(&self) -> &[Complex64] {
        &self.a_scaled
    }

    pub fn b_scaled(&self) -> &[Complex64] {
        &self.b_scaled
    }
}

/// Coefficients `a_n`, `b_{n+2}` for `n = 0..=order`.
pub fn laurent_coefficients(sys: &VortexSystem, order: usize) -> LaurentCoefficients {
    let geom = sys.geom();
    let q = geom.q();
    let s = geom.geometric_mean();
    let rho1_sq = (geom.r1() / s).powi(2);
    let rho2_sq = (geom.r2() / s).powi(2);
    let mut a = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut b = vec![Complex64::new(0.0, 0.0); order + 1];
    for v in sys.vortices() {
        let zeta = v.position / s;
        let x1 = 1.0 / (zeta * q);
        let x2 = zeta.conj() / rho2_sq;
        let x3 = rho1_sq / zeta.conj();
        let x4 = zeta / q;
        let (mut p1, mut p2, mut p3, mut p4) = (x1, x2, x3, x4);
        for n in 0..=order {
            let m = (n + 1) as f64;
            let damp = 1.0 / -(-m * q.ln()).exp_m1();
            a[n] += v.strength * I * (p2 - p1) * damp;
            b[n] += -v.strength * I * (p3 - p4) * damp;
            p1 *= x1;
            p2 *= x2;
            p3 *= x3;
            p4 *= x4;
        }
    }
    LaurentCoefficients {
        order,
        scale: s,
        a_scaled: a,
        b_scaled: b,
    }
}

/// `Σ_{m ≥ m0} uᵐ/(qᵐ - 1)` bound for `u < q`.
fn power_tail(u: f64, q: f64, m0: usize) -> f64 {
    let r = u / q;
    if r == 0.0 {
        return 0.0;
    }
    let m = m0 as f64;
    let first = (m * r.ln()).exp() / -(-m * q.ln()).exp_m1();
    first / (1.0 - r)
}

/// Bound on the Laurent truncation error at radius `radius` for order `order`.
pub fn laurent_tail_bound(sys: &VortexSystem, order: usize, radius: f64) -> f64 {
    let geom = sys.geom();
    let q = geom.q();
    let r1s = geom.r1() * geom.r1();
    let r2s = geom.r2() * geom.r2();
    let m0 = order + 2;
    sys.vortices()
        .iter()
        .map(|v| {
            let rk = v.position.norm();
            let us = [radius / rk, radius * rk / r1s, r2s / (radius * rk), rk / radius];
            v.strength.abs() / radius * us.iter().map(|&u| power_tail(u, q, m0)).sum::<f64>()
        })
        .sum()
}

/// Smallest order `≥ DEFAULT_LAURENT_ORDER` whose tail bound is below `tol` for
/// every radius in `[r_min, r_max]` (checked at the two ends, where the bound peaks).
pub fn laurent_order_for(sys: &VortexSystem, r_min: f64, r_max: f64, tol: f64) -> usize {
    let ok = |m: usize| {
        laurent_tail_bound(sys, m, r_min) <= tol && laurent_tail_bound(sys, m, r_max) <= tol
    };
    let mut lo = DEFAULT_LAURENT_ORDER;
    if ok(lo) {
        return lo;
    }
    let mut hi = lo * 2;
    while !ok(hi) {
        if hi >= MAX_AUTO_LAURENT_ORDER {
            return MAX_AUTO_LAURENT_ORDER;
        }
        lo = hi;
        hi = (hi * 2).min(MAX_AUTO_LAURENT_ORDER);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Relative residuals of the two wall systems (inner, outer) after substituting
/// the coefficients, maximised over `n`.
pub fn laurent_system_residuals(sys: &VortexSystem, coeffs: &LaurentCoefficients) -> (f64, f64) {
    let geom = sys.geom();
    let (r1s, r2s) = (geom.r1().powi(2), geom.r2().powi(2));
    let mut worst = (0.0_f64, 0.0_f64);
    for n in 0..=coeffs.order {
        let m = (n + 1) as i32;
        let a = coeffs.a(n);
        let bbar = coeffs.b(n + 2).conj();
        let mut src1 = Complex64::new(0.0, 0.0);
        let mut src2 = Complex64::new(0.0, 0.0);
        let mut scale1 = a.norm();
        let mut scale2 = a.norm();
        for v in sys.vortices() {
            let t1 = -I * v.strength / v.position.powi(m);
            let t2 = -I * v.strength * v.position.conj().powi(m) / r2s.powi(m);
            src1 += t1;
            src2 += t2;
            scale1 = scale1.max(t1.norm());
            scale2 = scale2.max(t2.norm());
        }
        let w1 = bbar / r1s.powi(m);
        let w2 = bbar / r2s.powi(m);
        let res1 = (src1 + a + w1).norm() / scale1.max(w1.norm());
        let res2 = (src2 + a + w2).norm() / scale2.max(w2.norm());
        worst = (worst.0.max(res1), worst.1.max(res2));
    }
    worst
}

fn check_point(sys: &VortexSystem, op: &'static str, z: Complex64) -> Result<()> {
    sys.geom().require_closed(op, z)?;
    sys.check_not_on_vortex(z)
}

/// Laurent-series conjugate velocity.
pub fn velocity_laurent(
    sys: &VortexSystem,
    coeffs: &LaurentCoefficients,
    z: Complex64,
) -> Result<Complex64> {
    velocity_laurent_bounded(sys, coeffs, z).map(|t| t.value)
}

pub fn velocity_laurent_bounded(
    sys: &VortexSystem,
    coeffs: &LaurentCoefficients,
    z: Complex64,
) -> Result<Truncated<Complex64>> {
    check_point(sys, "velocity_laurent", z)?;
    let s = coeffs.scale;
    let zeta = z / s;
    let inv = 1.0 / zeta;
    // Horner in ζ and in 1/ζ
    let mut taylor = Complex64::new(0.0, 0.0);
    for a in coeffs.a_scaled.iter().rev() {
        taylor = taylor * zeta + a;
    }
    let mut laurent = Complex64::new(0.0, 0.0);
    for b in coeffs.b_scaled.iter().rev() {
        laurent = laurent * inv + b;
    }
    laurent *= inv * inv;
    let mut value = (taylor + laurent) / s;
    for v in sys.vortices() {
        value += I * v.strength / (z - v.position);
    }
    Ok(Truncated {
        value,
        tail_bound: laurent_tail_bound(sys, coeffs.order, z.norm()),
        terms: coeffs.order + 1,
    })
}

/// Image-lattice conjugate velocity over shells `|n| ≤ n_range`.
pub fn velocity_images(sys: &VortexSystem, z: Complex64, n_range: usize) -> Result<Complex64> {
    velocity_images_bounded(sys, z, n_range).map(|t| t.value)
}

pub fn velocity_images_bounded(
    sys: &VortexSystem,
    z: Complex64,
    n_range: usize,
) -> Result<Truncated<Complex64>> {
    check_point(sys, "velocity_images", z)?;
    let geom = sys.geom();
    let q = geom.q();
    let tol = COINCIDENCE_REL_TOL * geom.r2();
    let az = z.norm();
    let mut total = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for (k, v) in sys.vortices().iter().enumerate() {
        let a = v.position;
        let b = reflect(a, geom.r1());
        let term = |p: Complex64, shell: i32| -> Result<Complex64> {
            let d = z - p;
            if d.norm() <= tol {
                return Err(Error::ImagePole {
                    vortex: k,
                    shell,
                    image: p,
                    z,
                });
            }
            Ok(1.0 / d)
        };
        let mut acc = term(a, 0)? - term(b, 0)?;
        let mut up = 1.0;
        for n in 1..=n_range as i32 {
            up *= q;
            let down = 1.0 / up;
            let outer = term(a * up, n)? - term(b * up, n)?;
            let inner = term(a * down, -n)? - term(b * down, -n)?;
            acc += outer + inner;
        }
        acc += 1.0 / z;
        total += I * v.strength * acc;

        let (ra, rb) = (a.norm(), b.norm());
        let gap = 1.0 - 1.0 / q;
        let far = q.powi(n_range as i32 + 1);
        let near = 1.0 / far;
        let outer_tail = 1.0 / ((ra * far - az) * gap) + 1.0 / ((rb * far - az) * gap);
        let inner_tail = (ra + rb) * near / (gap * (az - ra * near) * (az - rb * near));
        bound += v.strength.abs() * (outer_tail + inner_tail);
    }
    Ok(Truncated {
        value: total,
        tail_bound: bound,
        terms: 2 * n_range + 1,
    })
}

/// Closed-form conjugate velocity from four q-logarithms per vortex.
pub fn velocity_qlog(
    sys: &VortexSystem,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    velocity_qlog_bounded(sys, z, policy).map(|t| t.value)
}

pub fn velocity_qlog_bounded(
    sys: &VortexSystem,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<Truncated<Complex64>> {
    check_point(sys, "velocity_qlog", z)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut terms = 0;
    for v in sys.vortices() {
        let t = qlog_field(sys.geom(), v, z, policy)?;
        total += t.value;
        bound += t.tail_bound;
        terms = terms.max(t.terms);
    }
    Ok(Truncated {
        value: total,
        tail_bound: bound,
        terms,
    })
}

/// Full q-log field of one vortex at `z`; no domain checks.
pub(crate) fn qlog_field(
    geom: &AnnulusGeometry,
    v: &Vortex,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<Truncated<Complex64>> {
    let base = geom.base();
    let q = base.q();
    let (r1s, r2s) = (geom.r1().powi(2), geom.r2().powi(2));
    let zk = v.position;
    let l1 = q_log_series(z / zk, base, policy)?;
    let l2 = q_log_series(z * zk.conj() / r1s, base, policy)?;
    let l3 = q_log_series(r2s / (z * zk.conj()), base, policy)?;
    let l4 = q_log_series(zk / z, base, policy)?;
    let logs = l1.value - l2.value + l3.value - l4.value;
    let b = l1.tail_bound + l2.tail_bound + l3.tail_bound + l4.tail_bound;
    Ok(Truncated {
        value: I * v.strength * (1.0 / (z - zk) + logs / (z * (q - 1.0))),
        tail_bound: v.strength.abs() * b / (z.norm() * (q - 1.0)),
        terms: l1.terms.max(l2.terms).max(l3.terms).max(l4.terms),
    })
}

/// The compact form with q-derivatives in the bases `q^α` and `q^{1-α}`,
/// `α = log_q(|z_k|²/r1²)`. Equal to
/// [`velocity_qlog`]; much slower.
pub fn velocity_alpha_form(
    sys: &VortexSystem,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    use crate::qcalc::{q_log, q_number_real, try_q_derivative};
    check_point(sys, "velocity_alpha_form", z)?;
    let geom = sys.geom();
    let base = geom.base();
    let q = base.q();
    let mut total = Complex64::new(0.0, 0.0);
    for v in sys.vortices() {
        let zk = v.position;
        let alpha = (zk.norm_sqr() / geom.r1().powi(2)).ln() / q.ln();
        let inner = QBase::new(q.powf(alpha))?;
        let outer = QBase::new(q.powf(1.0 - alpha))?;
        let ln = |x: Complex64| q_log(x, base, policy);
        // derivatives in the series variables x = z/z_k and y = z_k/z
        let d1 = try_q_derivative(ln, z / zk, inner)?;
        let d2 = try_q_derivative(ln, zk / z, outer)?;
        let images = q_number_real(alpha, base) * d1
            - (zk * zk) / (z * z) * q_number_real(1.0 - alpha, base) * d2;
        total += I * v.strength / (z - zk) - I * v.strength / zk * images;
    }
    Ok(total)
}

fn qexp_args(sys_geom: (f64, f64, f64), z: Complex64, zk: Complex64) -> [Complex64; 4] {
    let (q, r1s, r2s) = sys_geom;
    let c = 1.0 - q;
    [
        z / (c * zk),
        zk / (c * z),
        z * zk.conj() / (c * r1s),
        r2s / (c * z * zk.conj()),
    ]
}

/// Complex potential `F` (up to an additive constant) with principal logarithms
/// taken factor by factor. Only derivatives of `F` and differences of `Im F`
/// are meaningful.
pub fn potential(sys: &VortexSystem, z: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    check_point(sys, "potential", z)?;
    let geom = sys.geom();
    let base = geom.base();
    let consts = (base.q(), geom.r1().powi(2), geom.r2().powi(2));
    let mut f = Complex64::new(0.0, 0.0);
    for v in sys.vortices() {
        let [e1, e2, e3, e4] = qexp_args(consts, z, v.position);
        let e1 = q_exp(e1, base, policy)?;
        let e2 = q_exp(e2, base, policy)?;
        let e3 = q_exp(e3, base, policy)?;
        let e4 = q_exp(e4, base, policy)?;
        let logs = (z - v.position).ln() + e1.ln() + e2.ln() - e3.ln() - e4.ln();
        f += I * v.strength * logs;
    }
    Ok(f)
}

/// Stream function `Ψ = Im F`. Branch free.
pub fn stream(sys: &VortexSystem, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    potential(sys, z, policy).map(|f| f.im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub z: Complex64,
    /// `V̄ = u - iv`.
    pub velocity_conj: Complex64,
    pub potential: Complex64,
    pub stream: f64,
}

impl FieldSample {
    /// `(u, v)`.
    pub fn velocity(&self) -> (f64, f64) {
        (self.velocity_conj.re, -self.velocity_conj.im)
    }
}

/// A vortex system paired with one velocity representation and its truncation.
#[derive(Debug, Clone)]
pub struct FlowModel<'a> {
    sys: &'a VortexSystem,
    repr: Representation,
    policy: TruncationPolicy,
    laurent: Option<LaurentCoefficients>,
}

impl<'a> FlowModel<'a> {
    /// Laurent order, when used, is chosen so the tail bound over the closed
    /// annulus stays below `policy.abs_tol` (never below [`DEFAULT_LAURENT_ORDER`]).
    pub fn new(sys: &'a VortexSystem, repr: Representation, policy: TruncationPolicy) -> Self {
        let order = match repr {
            Representation::Laurent => {
                let g = sys.geom();
                let tol = if policy.abs_tol > 0.0 { policy.abs_tol } else { 1e-12 };
                Some(laurent_order_for(sys, g.r1(), g.r2(), tol))
            }
            _ => None,
        };
        Self::with_laurent_order(sys, repr, policy, order)
    }

    pub fn with_laurent_order(
        sys: &'a VortexSystem,
        repr: Representation,
        policy: TruncationPolicy,
        order: Option<usize>,
    ) -> Self {
        let laurent = match repr {
            Representation::Laurent => Some(laurent_coefficients(
                sys,
                order.unwrap_or(DEFAULT_LAURENT_ORDER),
            )),
            _ => None,
        };
        FlowModel {
            sys,
            repr,
            policy,
            laurent,
        }
    }

    pub fn system(&self) -> &VortexSystem {
        self.sys
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn laurent_order(&self) -> Option<usize> {
        self.laurent.as_ref().map(|c| c.order)
    }

    pub fn velocity_bounded(&self, z: Complex64) -> Result<Truncated<Complex64>> {
        match self.repr {
            Representation::Laurent => {
                velocity_laurent_bounded(self.sys, self.laurent.as_ref().unwrap(), z)
            }
            Representation::Images => velocity_images_bounded(self.sys, z, self.policy.image_pairs),
            Representation::Qlog => velocity_qlog_bounded(self.sys, z, &self.policy),
        }
    }

    pub fn velocity(&self, z: Complex64) -> Result<Complex64> {
        self.velocity_bounded(z).map(|t| t.value)
    }

    pub fn sample(&self, z: Complex64) -> Result<FieldSample> {
        let velocity_conj = self.velocity(z)?;
        let potential = potential(self.sys, z, &self.policy)?;
        Ok(FieldSample {
            z,
            velocity_conj,
            potential,
            stream: potential.im,
        })
    }

    pub fn boundary_residual(&self, samples_per_circle: usize) -> Result<BoundaryResidual> {
        boundary_residual_with(self.sys, samples_per_circle, |z| self.velocity(z))
    }
}

/// Largest normal velocity found on each wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryResidual {
    pub inner: f64,
    pub outer: f64,
    /// Samples dropped because they sat on a singularity.
    pub skipped: usize,
}

impl BoundaryResidual {
    pub fn max(&self) -> f64 {
        self.inner.max(self.outer)
    }
}

/// Maximum of `|Re(V̄ z)| / |z|` over `samples_per_circle` equally spaced points
/// on each wall.
pub fn boundary_residual(
    sys: &VortexSystem,
    repr: Representation,
    samples_per_circle: usize,
    policy: &TruncationPolicy,
) -> Result<BoundaryResidual> {
    FlowModel::new(sys, repr, *policy).boundary_residual(samples_per_circle)
}

pub fn boundary_residual_with<F>(
    sys: &VortexSystem,
    samples_per_circle: usize,
    velocity: F,
) -> Result<BoundaryResidual>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if samples_per_circle < 4 {
        return Err(Error::invalid(
            "samples_per_circle",
            format!("need at least 4, got {samples_per_circle}"),
        ));
    }
    let geom = sys.geom();
    let mut out = BoundaryResidual {
        inner: 0.0,
        outer: 0.0,
        skipped: 0,
    };
    for (radius, slot) in [(geom.r1(), 0), (geom.r2(), 1)] {
        for j in 0..samples_per_circle {
            let theta = TAU * j as f64 / samples_per_circle as f64;
            let z = Complex64::from_polar(radius, theta);
            let vbar = match velocity(z) {
                Ok(v) => v,
                Err(Error::Singularity { .. }) | Err(Error::ImagePole { .. }) => {
                    out.skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let normal = (vbar * z).re.abs() / radius;
            if slot == 0 {
                out.inner = out.inner.max(normal);
            } else {
                out.outer = out.outer.max(normal);
            }
        }
    }
    Ok(out)
}

/// `n` points strictly inside the annulus on a golden-angle spiral, radii
/// spread evenly over the middle 96% of `[r1, r2]`. Points closer than
/// `min_sep` to anything in `avoid` are skipped and replaced.
pub fn sample_points(
    geom: &AnnulusGeometry,
    n: usize,
    avoid: &[Complex64],
    min_sep: f64,
) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let (r1, r2) = (geom.r1(), geom.r2());
    let mut out = Vec::with_capacity(n);
    let mut j = 0usize;
    while out.len() < n && j < 100 * n + 100 {
        let t = ((j * 7) % n.max(1)) as f64 / n.max(1) as f64 + 0.5 / n.max(1) as f64;
        let r = r1 + (r2 - r1) * (0.02 + 0.96 * t.fract());
        let z = Complex64::from_polar(r, golden * j as f64 + 0.1);
        if avoid.iter().all(|a| (z - a).norm() >= min_sep) {
            out.push(z);
        }
        j += 1;
    }
    out
}

//! q-numbers, the q-derivative, the q-logarithm and the Jackson q-exponentials.
//!
//! Conventions used throughout the crate:
//!
//! * [`QBase`] holds a base `q > 1`. For the annulus it is `q = r2² / r1²`.
//! * [`Nome`] holds a base `0 < p < 1`. It shows up as `q̃² = 1/q` in the theta
//!   function representation and as the base of the infinite product for `E*`.
//! * [`q_log`] takes the *series variable* `x` and returns `Ln_q(1 - x)`:
//!
//!   ```text
//!   Ln_q(1 - x) = -Σ_{n≥1} xⁿ / [n],   |x| < q
//!   ```
//!
//!   [`q_log_polesum`] takes `z` and returns `Ln_q(1 + z)` through the pole sum
//!   `(q - 1) Σ_{n≥1} z / (qⁿ + z)`. So `q_log(-z) == q_log_polesum(z)`.
//!
//! Every infinite series or product is truncated by a [`TruncationPolicy`]. The
//! tail bound reported alongside a value is the first omitted term divided by
//! `1 - ratio`, where `ratio` bounds the decay of all later terms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bases closer to 1 than this are rejected; `(qⁿ - 1)/(q - 1)` loses all
/// precision there.
pub const MIN_BASE_GAP: f64 = 1e-9;

/// Relative distance to `-qⁿ` below which the pole sum refuses to evaluate.
pub const POLE_REL_TOL: f64 = 1e-9;

/// A base `q > 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 1.0 + MIN_BASE_GAP {
            return Err(Error::invalid(
                "q base",
                format!("q must be finite and greater than 1 + {MIN_BASE_GAP:e}, got {q}"),
            ));
        }
        Ok(QBase(q))
    }

    #[inline]
    pub fn q(self) -> f64 {
        self.0
    }

    /// The base `1/q` in (0, 1).
    pub fn reciprocal(self) -> Nome {
        Nome(1.0 / self.0)
    }

    /// `q̃ = 1/√q`, the theta-function nome when the outer radius is 1.
    pub fn q_tilde(self) -> f64 {
        self.0.sqrt().recip()
    }

    #[inline]
    fn ln(self) -> f64 {
        self.0.ln()
    }
}

/// A base `0 < p < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Nome(f64);

impl Nome {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 || p >= 1.0 - MIN_BASE_GAP {
            return Err(Error::invalid(
                "nome",
                format!("base must lie in (0, 1 - {MIN_BASE_GAP:e}), got {p}"),
            ));
        }
        Ok(Nome(p))
    }

    #[inline]
    pub fn p(self) -> f64 {
        self.0
    }

    pub fn reciprocal(self) -> QBase {
        QBase(1.0 / self.0)
    }
}

/// Either regime of base accepted by [`q_exp_star`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Base {
    Above(QBase),
    Below(Nome),
}

impl From<QBase> for Base {
    fn from(b: QBase) -> Self {
        Base::Above(b)
    }
}

impl From<Nome> for Base {
    fn from(b: Nome) -> Self {
        Base::Below(b)
    }
}

/// Cutoffs for every infinite sum and product in the crate.
///
/// `abs_tol == 0` means "sum exactly `max_terms` terms"; otherwise summation
/// stops as soon as the tail bound drops below `abs_tol`, and running out of
/// terms first is a convergence error. `image_pairs` is the number of lattice
/// shells used by the image-sum velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub image_pairs: usize,
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, abs_tol: f64, image_pairs: usize) -> Result<Self> {
        let p = TruncationPolicy {
            max_terms,
            abs_tol,
            image_pairs,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::invalid("truncation", "max_terms must be at least 1"));
        }
        if self.image_pairs == 0 {
            return Err(Error::invalid("truncation", "image_pairs must be at least 1"));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::invalid(
                "truncation",
                format!("abs_tol must be finite and non-negative, got {}", self.abs_tol),
            ));
        }
        Ok(())
    }

    /// `Some(tol)` when summation is tolerance driven.
    fn target(&self) -> Option<f64> {
        (self.abs_tol > 0.0).then_some(self.abs_tol)
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_terms: 200,
            abs_tol: 1e-12,
            image_pairs: 40,
        }
    }
}

/// A truncated sum together with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    pub tail_bound: f64,
    pub terms: usize,
}

fn finish<T>(
    op: &'static str,
    policy: &TruncationPolicy,
    value: T,
    tail_bound: f64,
    terms: usize,
) -> Result<Truncated<T>> {
    if let Some(tol) = policy.target() {
        if !(tail_bound <= tol) {
            return Err(Error::NoConvergence {
                op,
                terms,
                bound: tail_bound,
                tol,
            });
        }
    }
    Ok(Truncated {
        value,
        tail_bound,
        terms,
    })
}

/// `[n] = 1 + q + … + q^{n-1} = (qⁿ - 1)/(q - 1)`; zero for `n = 0`.
pub fn q_number(n: u32, base: QBase) -> f64 {
    let q = base.q();
    if q < 1.5 || n > i32::MAX as u32 {
        return q_number_real(n as f64, base);
    }
    // exact for small integer powers
    (q.powi(n as i32) - 1.0) / (q - 1.0)
}

/// The real q-number `[α] = (q^α - 1)/(q - 1)`.
pub fn q_number_real(alpha: f64, base: QBase) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    (alpha * base.ln()).exp_m1() / (base.q() - 1.0)
}

/// `[n]! = [1][2]…[n]`, with `[0]! = 1`.
pub fn q_factorial(n: u32, base: QBase) -> Result<f64> {
    let mut acc = 1.0_f64;
    for k in 1..=n {
        acc *= q_number(k, base);
        if !acc.is_finite() {
            return Err(Error::Range {
                op: "q_factorial",
                detail: format!("[{k}]! overflows f64 at q = {}", base.q()),
            });
        }
    }
    Ok(acc)
}

/// Jackson q-derivative `(f(qz) - f(z)) / ((q - 1) z)`.
pub fn q_derivative<F>(f: F, z: Complex64, base: QBase) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    try_q_derivative(|w| Ok(f(w)), z, base)
}

/// [`q_derivative`] for a fallible function.
pub fn try_q_derivative<F>(f: F, z: Complex64, base: QBase) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::domain(
            "q_derivative",
            "z = 0; use the series coefficients instead",
        ));
    }
    let q = base.q();
    Ok((f(z * q)? - f(z)?) / ((q - 1.0) * z))
}

/// `Ln_q(1 - x) = -Σ xⁿ/[n]` for `|x| < q`.
pub fn q_log(x: Complex64, base: QBase, policy: &TruncationPolicy) -> Result<Complex64> {
    q_log_series(x, base, policy).map(|t| t.value)
}

/// [`q_log`] with its tail bound.
pub fn q_log_series(
    x: Complex64,
    base: QBase,
    policy: &TruncationPolicy,
) -> Result<Truncated<Complex64>> {
    let q = base.q();
    let ax = x.norm();
    if !(ax < q) {
        return Err(Error::domain(
            "q_log",
            format!("|x| = {ax} must be below q = {q}"),
        ));
    }
    if ax == 0.0 {
        return Ok(Truncated {
            value: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
            terms: 0,
        });
    }
    // xⁿ/[n] = (q - 1) (x/q)ⁿ / (1 - q⁻ⁿ)
    let ratio = x / q;
    let r = ax / q;
    let lnq = base.ln();
    let mut pw = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut bound = f64::INFINITY;
    let mut n = 0usize;
    while n < policy.max_terms {
        n += 1;
        pw *= ratio;
        let denom = -(-(n as f64) * lnq).exp_m1();
        sum -= pw * ((q - 1.0) / denom);
        let next_denom = -(-((n + 1) as f64) * lnq).exp_m1();
        bound = (q - 1.0) * r.powi(n as i32 + 1) / next_denom / (1.0 - r);
        if let Some(tol) = policy.target() {
            if bound <= tol {
                break;
            }
        }
    }
    finish("q_log", policy, sum, bound, n)
}

fn check_poles(z: Complex64, base: QBase) -> Result<()> {
    let q = base.q();
    let az = z.norm();
    let mut qn = q;
    let mut n = 1u32;
    while qn <= 2.0 * az + 1.0 && n < 4096 {
        if (z + qn).norm() < POLE_REL_TOL * qn {
            return Err(Error::PoleProximity { z, n });
        }
        qn *= q;
        n += 1;
    }
    if (z + qn).norm() < POLE_REL_TOL * qn {
        return Err(Error::PoleProximity { z, n });
    }
    Ok(())
}

/// `Ln_q(1 + z) = (q - 1) Σ z/(qⁿ + z)` for `|z| < q`.
pub fn q_log_polesum(z: Complex64, base: QBase, policy: &TruncationPolicy) -> Result<Complex64> {
    q_log_polesum_series(z, base, policy).map(|t| t.value)
}

/// [`q_log_polesum`] with its tail bound.
pub fn q_log_polesum_series(
    z: Complex64,
    base: QBase,
    policy: &TruncationPolicy,
) -> Result<Truncated<Complex64>> {
    check_poles(z, base)?;
    let q = base.q();
    let az = z.norm();
    if !(az < q) {
        return Err(Error::domain(
            "q_log_polesum",
            format!("|z| = {az} must be below q = {q}"),
        ));
    }
    if az == 0.0 {
        return Ok(Truncated {
            value: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let mut qn = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut bound = f64::INFINITY;
    let mut n = 0usize;
    while n < policy.max_terms {
        n += 1;
        qn *= q;
        sum += z / (qn + z);
        bound = polesum_tail(az, qn * q, q);
        if let Some(tol) = policy.target() {
            if bound <= tol {
                break;
            }
        }
    }
    finish("q_log_polesum", policy, sum * (q - 1.0), bound, n)
}

/// Bound on `(q - 1) Σ_{n>N} |z/(qⁿ + z)|` given `q^{N+1}`.
fn polesum_tail(az: f64, q_next: f64, q: f64) -> f64 {
    if q_next.is_infinite() {
        return 0.0;
    }
    let t = az / q_next;
    q * t / (1.0 - t)
}

/// The `n_terms`-image approximation of `Ln_q(1 + z)` and a bound on its remainder.
///
/// The value is `(q - 1) Σ_{n=1..N} z/(qⁿ + z)`. The remainder
/// `(q - 1) Σ_{k≥1} (-1)^{k-1} z^k / (q^{Nk} (q^k - 1))` is bounded by
/// `q t / (1 - t)` with `t = |z| / q^{N+1}`.
pub fn q_log_truncated(z: Complex64, base: QBase, n_terms: usize) -> Result<(Complex64, f64)> {
    if n_terms == 0 {
        return Err(Error::invalid("n_terms", "at least one pole term is required"));
    }
    let policy = TruncationPolicy {
        max_terms: n_terms,
        abs_tol: 0.0,
        image_pairs: 1,
    };
    let t = q_log_polesum_series(z, base, &policy)?;
    Ok((t.value, t.tail_bound))
}

/// `E_q(z) = Σ zⁿ/[n]!`, entire for `q > 1`.
pub fn q_exp(z: Complex64, base: QBase, policy: &TruncationPolicy) -> Result<Complex64> {
    q_exp_series(z, base, policy).map(|t| t.value)
}

/// [`q_exp`] with its tail bound.
pub fn q_exp_series(
    z: Complex64,
    base: QBase,
    policy: &TruncationPolicy,
) -> Result<Truncated<Complex64>> {
    let az = z.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    if az == 0.0 {
        return Ok(Truncated {
            value: sum,
            tail_bound: 0.0,
            terms: 1,
        });
    }
    let mut bound = f64::INFINITY;
    let mut n = 0u32;
    while (n as usize) < policy.max_terms {
        n += 1;
        term *= z / q_number(n, base);
        sum += term;
        let next = term.norm() * az / q_number(n + 1, base);
        let r = az / q_number(n + 2, base);
        bound = if r < 1.0 { next / (1.0 - r) } else { f64::INFINITY };
        if let Some(tol) = policy.target() {
            if bound <= tol {
                break;
            }
        }
    }
    finish("q_exp", policy, sum, bound, n as usize + 1)
}

/// `b^{n-1} / [n]_b`, the ratio between consecutive coefficients of `E*_b`.
fn star_ratio(n: u32, base: Base) -> f64 {
    let n = n as f64;
    match base {
        Base::Above(b) => {
            let q = b.q();
            (q - 1.0) / (q - ((1.0 - n) * b.ln()).exp())
        }
        Base::Below(p) => {
            let lp = p.p().ln();
            ((n - 1.0) * lp).exp() * (1.0 - p.p()) / -(n * lp).exp_m1()
        }
    }
}

/// `E*_b(z) = Σ b^{n(n-1)/2} zⁿ/[n]_b!`.
///
/// With `b > 1` the series is used only for `|z| < 1`; with `0 < b < 1` it is entire.
pub fn q_exp_star(
    z: Complex64,
    base: impl Into<Base>,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    q_exp_star_series(z, base, policy).map(|t| t.value)
}

/// [`q_exp_star`] with its tail bound.
pub fn q_exp_star_series(
    z: Complex64,
    base: impl Into<Base>,
    policy: &TruncationPolicy,
) -> Result<Truncated<Complex64>> {
    let base = base.into();
    let az = z.norm();
    if let Base::Above(b) = base {
        if !(az < 1.0) {
            return Err(Error::domain(
                "q_exp_star",
                format!("|z| = {az} must be below 1 for base q = {} > 1", b.q()),
            ));
        }
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    if az == 0.0 {
        return Ok(Truncated {
            value: sum,
            tail_bound: 0.0,
            terms: 1,
        });
    }
    let mut bound = f64::INFINITY;
    let mut n = 0u32;
    while (n as usize) < policy.max_terms {
        n += 1;
        term *= z * star_ratio(n, base);
        sum += term;
        let next = term.norm() * az * star_ratio(n + 1, base);
        let r = az * star_ratio(n + 2, base);
        bound = if r < 1.0 { next / (1.0 - r) } else { f64::INFINITY };
        if let Some(tol) = policy.target() {
            if bound <= tol {
                break;
            }
        }
    }
    finish("q_exp_star", policy, sum, bound, n as usize + 1)
}

/// `E*_p(z) = Π_{k≥0} (1 + z p^k (1 - p))` for `0 < p < 1`.
pub fn q_exp_star_product(
    z: Complex64,
    nome: Nome,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    q_exp_star_product_series(z, nome, policy).map(|t| t.value)
}

/// [`q_exp_star_product`] with a bound on the truncation error of the product.
pub fn q_exp_star_product_series(
    z: Complex64,
    nome: Nome,
    policy: &TruncationPolicy,
) -> Result<Truncated<Complex64>> {
    let p = nome.p();
    let az = z.norm();
    let mut prod = Complex64::new(1.0, 0.0);
    if az == 0.0 {
        return Ok(Truncated {
            value: prod,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let mut pk = 1.0;
    let mut bound = f64::INFINITY;
    let mut k = 0usize;
    while k < policy.max_terms {
        prod *= 1.0 + z * (pk * (1.0 - p));
        k += 1;
        pk *= p;
        // Remaining factors are 1 + ε_j with Σ|ε_j| = |z| p^k.
        let first = az * (1.0 - p) * pk;
        bound = if first < 0.5 {
            let log_tail = az * pk / (1.0 - first);
            prod.norm() * log_tail.exp_m1()
        } else {
            f64::INFINITY
        };
        if let Some(tol) = policy.target() {
            if bound <= tol {
                break;
            }
        }
    }
    finish("q_exp_star_product", policy, prod, bound, k)
}

/// The q-harmonic series `H(q) = Σ 1/[n] = -Ln_q(0)`.
pub fn q_harmonic(base: QBase, policy: &TruncationPolicy) -> Result<f64> {
    q_harmonic_series(base, policy).map(|t| t.value)
}

/// [`q_harmonic`] with its tail bound.
pub fn q_harmonic_series(base: QBase, policy: &TruncationPolicy) -> Result<Truncated<f64>> {
    let q = base.q();
    let mut sum = 0.0;
    let mut bound = f64::INFINITY;
    let mut n = 0u32;
    while (n as usize) < policy.max_terms {
        n += 1;
        sum += q_number(n, base).recip();
        // 1/[m+1] < (1/q)·1/[m]
        bound = q_number(n + 1, base).recip() / (1.0 - q.recip());
        if let Some(tol) = policy.target() {
            if bound <= tol {
                break;
            }
        }
    }
    finish("q_harmonic", policy, sum, bound, n as usize)
}

/// The q-harmonic number `H_N(q) = Σ_{n=1..N} 1/[n]`.
pub fn q_harmonic_number(n: u32, base: QBase) -> f64 {
    (1..=n).map(|k| q_number(k, base).recip()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qb(q: f64) -> QBase {
        QBase::new(q).unwrap()
    }

    fn precise() -> TruncationPolicy {
        TruncationPolicy::new(5000, 1e-16, 40).unwrap()
    }

    #[test]
    fn base_rejects_q_at_or_below_one() {
        assert!(QBase::new(1.0).is_err());
        assert!(QBase::new(0.5).is_err());
        assert!(QBase::new(1.0 + 1e-10).is_err());
        assert!(QBase::new(f64::NAN).is_err());
        let b = qb(4.0);
        let qt2 = b.q_tilde().powi(2);
        assert!(qt2 > 0.0 && qt2 < 1.0);
        assert!((qt2 - 0.25).abs() < 1e-15);
        assert!(Nome::new(1.0).is_err());
        assert!(Nome::new(0.0).is_err());
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(0, 1e-12, 4).is_err());
        assert!(TruncationPolicy::new(10, -1.0, 4).is_err());
        assert!(TruncationPolicy::new(10, 1e-12, 0).is_err());
        assert!(TruncationPolicy::new(10, 0.0, 1).is_ok());
    }

    #[test]
    fn q_number_examples() {
        assert_eq!(q_number(3, qb(2.0)), 7.0);
        assert_eq!(q_number(0, qb(7.0)), 0.0);
        // [5] at q = 1.0001 is 1 + q + q² + q³ + q⁴ = 5.00100010001 exactly
        let q: f64 = 1.0001;
        let direct: f64 = (0..5).map(|k| q.powi(k)).sum();
        assert!((q_number(5, qb(q)) - direct).abs() < 1e-12);
        // [n] → n as q → 1
        let gaps: Vec<f64> = [1.01, 1.001, 1.0001, 1.00001]
            .iter()
            .map(|&q| (q_number(5, qb(q)) - 5.0).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps[3] < 1e-3);
    }

    #[test]
    fn q_number_recurrence() {
        for q in [1.3, 2.0, 4.0, 16.0] {
            let b = qb(q);
            for n in 1..40 {
                let lhs = q_number(n + 1, b);
                let rhs = q * q_number(n, b) + 1.0;
                assert!((lhs - rhs).abs() <= 1e-14 * lhs);
            }
        }
    }

    #[test]
    fn q_factorial_examples() {
        assert_eq!(q_factorial(0, qb(3.0)).unwrap(), 1.0);
        assert_eq!(q_factorial(3, qb(2.0)).unwrap(), 21.0);
        // brute-force product 1·4·13·40
        let oracle: f64 = (1..=4).map(|k| (0..k).map(|j| 3f64.powi(j)).sum::<f64>()).product();
        assert_eq!(oracle, 2080.0);
        assert!((q_factorial(4, qb(3.0)).unwrap() - oracle).abs() < 1e-9);
    }

    #[test]
    fn q_factorial_overflow_is_range_error() {
        let err = q_factorial(200, qb(10.0)).unwrap_err();
        assert!(matches!(err, Error::Range { .. }));
    }

    #[test]
    fn q_derivative_examples() {
        let d = q_derivative(|z| z * z * z, c(1.0, 0.0), qb(2.0)).unwrap();
        assert!((d - c(7.0, 0.0)).norm() < 1e-14);
        let d = q_derivative(|_| c(3.0, -1.0), c(0.4, 0.2), qb(2.0)).unwrap();
        assert_eq!(d, c(0.0, 0.0));
        assert!(q_derivative(|z| z, c(0.0, 0.0), qb(2.0)).is_err());

        let b = qb(4.0);
        let p = precise();
        let x = c(0.3, 0.0);
        let d = try_q_derivative(|w| q_log(w, b, &p), x, b).unwrap();
        assert!((d + 1.0 / (1.0 - x)).norm() < 1e-12);
    }

    #[test]
    fn q_log_examples() {
        let p = precise();
        assert_eq!(q_log(c(0.0, 0.0), qb(2.0), &p).unwrap(), c(0.0, 0.0));

        // partial-sum oracle: H(2) = Σ 1/(2ⁿ - 1), 400 terms
        let h2: f64 = (1..=400).map(|n| 1.0 / (2f64.powi(n) - 1.0)).sum();
        let v = q_log(c(1.0, 0.0), qb(2.0), &p).unwrap();
        assert!((v + h2).norm() < 1e-14, "{v} vs {}", -h2);

        let b = qb(3.0);
        let series = q_log(c(-0.5, 0.0), b, &p).unwrap();
        let poles = q_log_polesum(c(0.5, 0.0), b, &p).unwrap();
        assert!((series - poles).norm() < 1e-12);
    }

    #[test]
    fn q_log_domain_and_convergence_errors() {
        let b = qb(2.0);
        assert!(matches!(
            q_log(c(2.0, 0.0), b, &precise()),
            Err(Error::Domain { .. })
        ));
        let tight = TruncationPolicy::new(5, 1e-14, 1).unwrap();
        match q_log(c(1.9, 0.0), b, &tight) {
            Err(Error::NoConvergence { bound, terms, .. }) => {
                assert_eq!(terms, 5);
                assert!(bound > 1e-14);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn q_log_series_bound_is_honest() {
        let b = qb(2.0);
        let reference = q_log(c(1.5, 0.5), b, &precise()).unwrap();
        for n in [5, 10, 20, 40] {
            let pol = TruncationPolicy::new(n, 0.0, 1).unwrap();
            let t = q_log_series(c(1.5, 0.5), b, &pol).unwrap();
            assert!((t.value - reference).norm() <= t.tail_bound * (1.0 + 1e-9) + 1e-15);
        }
    }

    #[test]
    fn polesum_examples() {
        let p = precise();
        let b = qb(2.0);
        assert_eq!(q_log_polesum(c(0.0, 0.0), b, &p).unwrap(), c(0.0, 0.0));
        let lhs = q_log_polesum(c(0.5, 0.0), b, &p).unwrap();
        let rhs = q_log(c(-0.5, 0.0), b, &p).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        match q_log_polesum(c(-2.0, 0.0), b, &p) {
            Err(Error::PoleProximity { n, .. }) => assert_eq!(n, 1),
            other => panic!("expected pole error, got {other:?}"),
        }
    }

    #[test]
    fn q_exp_examples() {
        let p = precise();
        let b = qb(3.0);
        assert_eq!(q_exp(c(0.0, 0.0), b, &p).unwrap(), c(1.0, 0.0));
        let z = c(0.4, 0.3);
        let prod = q_exp(-z, b, &p).unwrap() * q_exp_star(z, b, &p).unwrap();
        assert!((prod - 1.0).norm() < 1e-12);

        // direct summation oracle Σ 1/[n]!₂
        let mut fact = 1.0;
        let mut oracle = 1.0;
        for n in 1..60 {
            fact *= 2f64.powi(n) - 1.0;
            oracle += 1.0 / fact;
        }
        let v = q_exp(c(1.0, 0.0), qb(2.0), &p).unwrap();
        assert!((v - oracle).norm() < 1e-14);
    }

    #[test]
    fn q_exp_star_examples() {
        let p = precise();
        assert_eq!(q_exp_star(c(0.0, 0.0), qb(2.0), &p).unwrap(), c(1.0, 0.0));
        let b = qb(4.0);
        let z = c(0.3, 0.0);
        let lhs = q_exp(z, b, &p).unwrap();
        let rhs = q_exp_star(z, b.reciprocal(), &p).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);

        let nome = Nome::new(0.25).unwrap();
        let z = c(0.7, 0.0);
        let s = q_exp_star(z, nome, &p).unwrap();
        let pr = q_exp_star_product(z, nome, &p).unwrap();
        assert!((s - pr).norm() < 1e-12);

        assert!(matches!(
            q_exp_star(c(1.0, 0.0), qb(2.0), &p),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn q_exp_star_product_examples() {
        let p = precise();
        let nome = Nome::new(0.5).unwrap();
        assert_eq!(q_exp_star_product(c(0.0, 0.0), nome, &p).unwrap(), c(1.0, 0.0));
        let z = c(0.6, 0.0);
        let pr = q_exp_star_product(z, nome, &p).unwrap();
        let s = q_exp_star(z, nome, &p).unwrap();
        assert!((pr - s).norm() < 1e-12);

        // (1 - z; q̃²)_∞ written through E*
        let qt2 = 0.3;
        let nome = Nome::new(qt2).unwrap();
        let z = c(0.4, 0.0);
        let mut direct = c(1.0, 0.0);
        for n in 0..200 {
            direct *= 1.0 - z * qt2.powi(n);
        }
        let via_exp = q_exp_star_product(z / (qt2 - 1.0), nome, &p).unwrap();
        assert!((direct - via_exp).norm() < 1e-12);
    }

    #[test]
    fn q_harmonic_examples() {
        let p = precise();
        let h = q_harmonic(qb(1e6), &p).unwrap();
        assert!((h - 1.0).abs() < 1e-5);
        let oracle: f64 = (1..=200).map(|n| 1.0 / (2f64.powi(n) - 1.0)).sum();
        assert!((q_harmonic(qb(2.0), &p).unwrap() - oracle).abs() < 1e-14);
        for q in [1.5, 2.0, 10.0] {
            assert_eq!(q_harmonic_number(1, qb(q)), 1.0);
        }
        assert!(q_harmonic_number(30, qb(2.0)) < oracle);
    }

    #[test]
    fn truncated_log_examples() {
        let b = qb(4.0);
        let z = c(0.5, 0.0);
        let full = q_log_polesum(z, b, &precise()).unwrap();
        let (v, r) = q_log_truncated(z, b, 60).unwrap();
        assert!((v - full).norm() < 1e-14);
        assert!(r < 1e-14);

        let (v5, r5) = q_log_truncated(z, b, 5).unwrap();
        assert!((full - v5).norm() <= r5);

        assert_eq!(q_log_truncated(c(0.0, 0.0), b, 3).unwrap(), (c(0.0, 0.0), 0.0));
        assert!(q_log_truncated(c(-4.0, 0.0), b, 3).is_err());
    }

    #[test]
    fn pole_terms_at_one_are_q_harmonic_numbers() {
        // each pole of Ln_q(1 - x) at x = 1 contributes exactly -1/[n]
        let b = qb(3.0);
        for n in 1..8 {
            let (v, _) = q_log_truncated(c(-1.0, 0.0), b, n).unwrap();
            assert!((v.re + q_harmonic_number(n as u32, b)).abs() < 1e-14);
        }
    }

    #[test]
    fn large_q_limits() {
        let b = qb(1e6);
        let p = precise();
        for z in [c(0.5, 0.0), c(-0.7, 0.3), c(0.0, 1.0), c(0.6, -0.8)] {
            let ln = q_log_polesum(z, b, &p).unwrap();
            assert!((ln - z).norm() < 1e-5 * z.norm());
            let e = q_exp(z, b, &p).unwrap();
            assert!((e - (1.0 + z)).norm() < 1e-5);
        }
        for z in [c(0.5, 0.0), c(-0.3, 0.4), c(0.2, 0.7)] {
            let lhs = q_log(z * b.q(), b, &p).unwrap() / (b.q() - 1.0);
            assert!((lhs - z / (z - 1.0)).norm() < 1e-5);
        }
    }
}

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the region where the operation is defined.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A constructor rejected its parameters.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    /// The truncation policy ran out of terms before the tail bound met the tolerance.
    #[error("{op} did not converge: tail bound {bound:e} > tolerance {tol:e} after {terms} terms")]
    NoConvergence {
        op: &'static str,
        terms: usize,
        bound: f64,
        tol: f64,
    },

    /// Argument of the pole-sum q-logarithm sits on (or next to) the pole at -q^n.
    #[error("argument {z} is within pole tolerance of -q^{n}")]
    PoleProximity { z: Complex64, n: u32 },

    /// Evaluation point coincides with vortex `index`.
    #[error("evaluation point {z} coincides with vortex {index}")]
    Singularity { index: usize, z: Complex64 },

    /// Evaluation point coincides with an image vortex.
    #[error("evaluation point {z} coincides with image at {image} (vortex {vortex}, shell {shell})")]
    ImagePole {
        vortex: usize,
        shell: i32,
        image: Complex64,
        z: Complex64,
    },

    /// Result not representable as a finite double.
    #[error("range error in {op}: {detail}")]
    Range { op: &'static str, detail: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

//! Point vortices in the annulus `r1 ≤ |z| ≤ r2` between two coaxial cylinders.
//!
//! The conjugate velocity is available three ways (Laurent series, image
//! lattice, q-logarithm closed form), the stream function two ways
//! (q-exponentials, theta functions), along with vortex motion and the two
//! limits where one cylinder disappears.
//!
//! ```
//! use num_complex::Complex64;
//! use qvortex::flow::{velocity_images, velocity_qlog};
//! use qvortex::{AnnulusGeometry, TruncationPolicy, Vortex, VortexSystem};
//!
//! let geom = AnnulusGeometry::new(1.0, 2.0)?;
//! let sys = VortexSystem::single(geom, Vortex::at(1.4, 0.0, 1.0)?)?;
//! let z = Complex64::new(0.0, 1.5);
//! let a = velocity_qlog(&sys, z, &TruncationPolicy::default())?;
//! let b = velocity_images(&sys, z, 40)?;
//! assert!((a - b).norm() < 1e-10);
//! # Ok::<(), qvortex::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod images;
pub mod qcalc;
pub mod theta;

pub use error::{Error, Result};
pub use flow::{FlowModel, Representation};
pub use geometry::{AnnulusGeometry, Vortex, VortexSystem};
pub use qcalc::{Nome, QBase, TruncationPolicy};

//! Normal velocity on the walls as the image lattice grows.

use qvortex::flow::{boundary_residual, boundary_residual_with, velocity_images, Representation};
use qvortex::{AnnulusGeometry, TruncationPolicy, Vortex, VortexSystem};

fn main() -> qvortex::Result<()> {
    let geom = AnnulusGeometry::new(1.0, 2.0)?;
    let sys = VortexSystem::single(geom, Vortex::at(1.2, 0.5, 1.0)?)?;
    for n in [0, 1, 2, 4, 8, 16, 32] {
        let r = boundary_residual_with(&sys, 256, |z| velocity_images(&sys, z, n))?;
        println!("n = {n:>2}: inner {:.2e}  outer {:.2e}", r.inner, r.outer);
    }
    let policy = TruncationPolicy::new(2000, 1e-15, 40)?;
    for repr in Representation::ALL {
        let r = boundary_residual(&sys, repr, 256, &policy)?;
        println!("{repr:<8} max {:.2e}", r.max());
    }
    Ok(())
}

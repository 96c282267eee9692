//! The annulus flow approaching a single cylinder (r2 → ∞) and a single disk
//! (r1 → 0).

use num_complex::Complex64;
use qvortex::dynamics::{limit_convergence, limit_sample_points, LimitCase};
use qvortex::{TruncationPolicy, Vortex};

fn main() -> qvortex::Result<()> {
    let policy = TruncationPolicy::new(5000, 1e-15, 40)?;
    let qs = [1e2, 1e3, 1e4, 1e5, 1e6];
    for (case, z0) in [
        (LimitCase::OneCylinder, Complex64::new(1.5, 0.5)),
        (LimitCase::OneDisk, Complex64::new(0.3, 0.2)),
    ] {
        println!("{case:?}");
        let pts = limit_sample_points(case, 1.0, z0, 20);
        for row in limit_convergence(case, 1.0, Vortex::new(z0, 1.0)?, &pts, &qs, &policy)? {
            println!(
                "  q = {:>8.0e}  velocity {:.3e}  omega {:.3e}",
                row.q, row.velocity_rel_err, row.omega_rel_err
            );
        }
    }
    Ok(())
}

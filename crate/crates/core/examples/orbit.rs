//! Angular frequency across the gap and one integrated revolution.

use num_complex::Complex64;
use qvortex::dynamics::{default_step, integrate, orbit_frequency};
use qvortex::{AnnulusGeometry, TruncationPolicy, Vortex, VortexSystem};

fn main() -> qvortex::Result<()> {
    let policy = TruncationPolicy::new(5000, 1e-15, 40)?;
    let geom = AnnulusGeometry::new(1.0, 3.0)?;

    println!("{:>8} {:>14} {:>14} {:>14}", "radius", "omega", "omega1", "omega2");
    for j in 1..12 {
        let r = 1.0 + 2.0 * j as f64 / 12.0;
        let o = orbit_frequency(&geom, 1.0, r, &policy)?;
        println!("{r:>8.4} {:>14.6} {:>14.6} {:>14.6}", o.omega, o.omega1, o.omega2);
    }
    println!("rest point at sqrt(r1 r2) = {:.6}", geom.geometric_mean());

    let z0 = Complex64::new(1.3, 0.2);
    let sys = VortexSystem::single(geom, Vortex::new(z0, 1.0)?)?;
    let o = orbit_frequency(&geom, 1.0, z0.norm(), &policy)?;
    let traj = integrate(&sys, o.period(), default_step(&o, 0.01), &policy)?;
    let end = traj.final_positions()[0];
    println!(
        "one period T = {:.6}: {} steps, |z(T) - z(0)| = {:.2e}, radius drift {:.2e}",
        o.period(),
        traj.times.len() - 1,
        (end - z0).norm(),
        traj.radius_drift()
    );
    Ok(())
}

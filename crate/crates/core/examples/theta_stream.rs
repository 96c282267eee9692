//! Stream function from the theta ratio against `Im F` from the q-exponentials.

use num_complex::Complex64;
use qvortex::flow::stream;
use qvortex::theta::{rescale_to_unit_outer, stream_theta, theta1, theta1_composed, ThetaParams};
use qvortex::{AnnulusGeometry, TruncationPolicy, Vortex, VortexSystem};

fn main() -> qvortex::Result<()> {
    let policy = TruncationPolicy::new(5000, 1e-15, 40)?;
    let geom = AnnulusGeometry::new(2.0, 5.0)?;
    let sys = VortexSystem::single(geom, Vortex::at(3.0, 1.0, 1.0)?)?;
    let (unit, scale) = rescale_to_unit_outer(&sys);
    println!("rescaled: r1 = {}, r2 = {}, scale = {scale}", unit.geom().r1(), unit.geom().r2());

    let params = ThetaParams::for_geometry(unit.geom(), &policy)?;
    println!("q~ = {}, G = {}", params.q_tilde(), params.g());
    let x = Complex64::new(0.8, 0.3);
    println!("theta1 product  {}", theta1(x, &params, &policy)?);
    println!("theta1 composed {}", theta1_composed(x, &params, &policy)?);

    // the rescale shifts Im F by a constant; on the unit system the two agree outright
    println!("\n{:>24} {:>20} {:>20} {:>10} {:>10}", "z", "psi (theta)", "psi (q-exp)", "diff", "unit diff");
    for k in 0..8 {
        let z = Complex64::from_polar(2.2 + 0.35 * k as f64, 0.9 * k as f64);
        let a = stream_theta(&unit, z * scale, &policy)?;
        let b = stream(&sys, z, &policy)?;
        let u = stream(&unit, z * scale, &policy)?;
        println!("{:>24.5} {a:>20.14} {b:>20.14} {:>10.1e} {:>10.1e}", z, a - b, a - u);
    }
    Ok(())
}

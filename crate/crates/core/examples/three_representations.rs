//! The conjugate velocity of two vortices from the Laurent series, the image
//! lattice and the q-log closed form, side by side.

use num_complex::Complex64;
use qvortex::flow::{sample_points, FlowModel, Representation};
use qvortex::{AnnulusGeometry, TruncationPolicy, Vortex, VortexSystem};

fn main() -> qvortex::Result<()> {
    let geom = AnnulusGeometry::new(1.0, 2.5)?;
    let sys = VortexSystem::new(
        geom,
        vec![Vortex::at(1.6, 0.4, 1.0)?, Vortex::at(-0.9, -1.5, -0.5)?],
    )?;
    let policy = TruncationPolicy::new(2000, 1e-14, 40)?;

    let models: Vec<FlowModel> = Representation::ALL
        .iter()
        .map(|&r| FlowModel::new(&sys, r, policy))
        .collect();
    println!("Laurent order chosen: {:?}", models[0].laurent_order());

    let avoid: Vec<Complex64> = sys.vortices().iter().map(|v| v.position).collect();
    for z in sample_points(&geom, 6, &avoid, 0.1) {
        println!("z = {z:.4}");
        let mut values = Vec::new();
        for m in &models {
            let v = m.velocity_bounded(z)?;
            println!(
                "  {:<8} {:.12}  (tail ≤ {:.1e})",
                m.representation().to_string(),
                v.value,
                v.tail_bound
            );
            values.push(v.value);
        }
        let spread = (values[0] - values[1]).norm().max((values[0] - values[2]).norm());
        println!("  spread {spread:.1e}");
    }
    Ok(())
}

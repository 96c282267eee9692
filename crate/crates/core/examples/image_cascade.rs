//! Successive reflections of one vortex in the two cylinders.

use qvortex::images::{cascade, lattice_images};
use qvortex::{AnnulusGeometry, Vortex};

fn main() -> qvortex::Result<()> {
    let geom = AnnulusGeometry::new(1.0, 4.0)?;
    let vortex = Vortex::at(2.0, 0.0, 1.0)?;

    let set = cascade(&vortex, &geom, 6)?;
    println!("{:>4} {:>12} {:>12} {:>5}  family", "gen", "re", "im", "sign");
    for im in &set.images {
        println!(
            "{:>4} {:>12.6} {:>12.6} {:>5}  {:?}",
            im.generation, im.position.re, im.position.im, im.strength_sign, im.family
        );
    }

    println!("\nlattice, shells |n| <= 2:");
    for im in lattice_images(&vortex, &geom, 2) {
        println!("  shell {:>2} sign {:>2}  {}", im.shell, im.sign, im.position);
    }
    Ok(())
}

//! q-numbers, the q-logarithm in both of its forms, the Jackson exponentials
//! and the q-harmonic series.

use num_complex::Complex64;
use qvortex::qcalc::{
    q_exp, q_exp_star, q_factorial, q_harmonic, q_harmonic_number, q_log_polesum, q_log_series,
    q_number,
};
use qvortex::{QBase, TruncationPolicy};

fn main() -> qvortex::Result<()> {
    let policy = TruncationPolicy::new(2000, 1e-15, 40)?;
    let q = QBase::new(2.0)?;

    println!("q = {}", q.q());
    for n in 1..=6 {
        println!("  [{n}] = {:<6} [{n}]! = {}", q_number(n, q), q_factorial(n, q)?);
    }

    let x = Complex64::new(0.7, 0.4);
    let series = q_log_series(x, q, &policy)?;
    let poles = q_log_polesum(-x, q, &policy)?;
    println!("Ln_q(1 - x), x = {x}");
    println!("  power series: {} ({} terms, tail ≤ {:.1e})", series.value, series.terms, series.tail_bound);
    println!("  pole sum:     {poles}");

    let z = Complex64::new(0.3, -0.5);
    let product = q_exp(-z, q, &policy)? * q_exp_star(z, q, &policy)?;
    println!("E_q(-z) E*_q(z) = {product}");

    let h = q_harmonic(q, &policy)?;
    println!("H(q) = {h}");
    for n in [5, 10, 20, 40] {
        println!("  H_{n:<2} = {:.15}", q_harmonic_number(n, q));
    }
    Ok(())
}

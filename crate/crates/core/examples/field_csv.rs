//! Writes a velocity/stream-function grid through the command-line front end.
//!
//! `cargo run --example field_csv -- out.csv`

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "field.csv".into());
    let code = qvortex::cli::run([
        "qvortex", "field", "--r1", "1", "--r2", "2", "--vortex", "1.4,0.3,1", "--vortex",
        "-1.2,-0.8,-1", "--nx", "81", "--ny", "81", "--representation", "theta", "--output", &out,
    ]);
    if code == 0 {
        println!("wrote {out}");
    }
    std::process::exit(code);
}

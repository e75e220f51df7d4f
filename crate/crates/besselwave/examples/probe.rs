//! Scratch probe for acceptance-criterion calibration.

use std::time::Instant;

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("criterion index"))
        .collect();
    for &i in &args {
        let t0 = Instant::now();
        match besselwave::checks::run_one(i) {
            Ok(out) => {
                println!("{out}");
                println!("  elapsed {:.1}s", t0.elapsed().as_secs_f64());
            }
            Err(e) => println!("criterion {i}: ERROR {e}"),
        }
    }
}

//! Cross-validates the pruning pipeline against the brute-force oracles
//! on a family of random networks. Pass a seed count (default 50).
//!
//!     cargo run --release --example random_sweep 200

use std::time::Instant;

use anred::{sweep, SweepConfig};

fn main() {
    let seeds: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed count"))
        .unwrap_or(50);
    let config = SweepConfig {
        seeds: 1..=seeds,
        ..SweepConfig::default()
    };
    let start = Instant::now();
    let outcome = sweep(&config).expect("feasible generator shape");
    let elapsed = start.elapsed();

    println!(
        "{} networks, {} goal instances, {} checks in {:.2?}",
        outcome.networks, outcome.instances, outcome.checks, elapsed
    );
    println!(
        "{} enumerations skipped over budget",
        outcome.skipped_enumerations
    );
    if outcome.violation_count == 0 {
        println!("all checks passed");
    } else {
        println!("{} violations:", outcome.violation_count);
        for v in &outcome.violations {
            println!("  {v}");
        }
        std::process::exit(1);
    }
}

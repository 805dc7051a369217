//! Finds a shortest run to the goal "c"=2 under both stepping
//! disciplines: one transition per step, then any compatible set of
//! transitions per step.
//!
//!     cargo run --example reachability_witness

use anred::format::{parse_partial_state, render_step};
use anred::{parse_model, reachable, Limits, Semantics, Verdict};

const DEMO: &str = include_str!("../models/demo.an");

fn main() {
    let net = parse_model(DEMO).expect("demo model parses");
    let initial = net.zero_state();
    let goal = parse_partial_state(&net, "\"c\"=2").expect("goal parses");

    for semantics in [Semantics::Async, Semantics::Step] {
        let result = reachable(&net, &initial, &goal, semantics, Limits::default(), true);
        match result.verdict {
            Verdict::Reachable => {
                let witness = result.witness.expect("witness was requested");
                println!(
                    "{semantics:?}: reachable in {} steps ({} states explored)",
                    witness.len(),
                    result.states_explored
                );
                for step in witness.steps() {
                    println!("  {}", render_step(&net, step));
                }
            }
            Verdict::Unreachable => println!("{semantics:?}: unreachable"),
            Verdict::Inconclusive => println!("{semantics:?}: budget exhausted"),
        }
    }

    // The frozen goal has no run at all.
    let frozen = parse_partial_state(&net, "\"d\"=1").expect("goal parses");
    let result = reachable(&net, &initial, &frozen, Semantics::Async, Limits::default(), false);
    println!(
        "\"d\"=1 under Async: {:?} after {} states",
        result.verdict, result.states_explored
    );
}

//! Counts the reachable states of the demo network before and after
//! pruning it for the goal "c"=2. The pruned model explores a strictly
//! smaller space while keeping the goal reachable.
//!
//!     cargo run --example state_counts

use anred::format::parse_partial_state;
use anred::{count_states, parse_model, reduce, Limits};

const DEMO: &str = include_str!("../models/demo.an");

fn main() {
    let net = parse_model(DEMO).expect("demo model parses");
    let initial = net.zero_state();
    let goal = parse_partial_state(&net, "\"c\"=2").expect("goal parses")[0];

    let before = count_states(&net, &initial, Limits::default());
    println!(
        "original: {} reachable states over {} transitions",
        before.states,
        net.transition_count()
    );

    for (label, filter) in [("unfiltered", false), ("filtered", true)] {
        let result = reduce(&net, &initial, goal, filter);
        let after = count_states(result.reduced(), &initial, Limits::default());
        println!(
            "{label} pruning: {} reachable states over {} transitions",
            after.states,
            result.reduced().transition_count()
        );
    }
}

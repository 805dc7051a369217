//! Prunes the demo network for the goal "c"=2, with and without the
//! feasibility filter, and prints what each pass keeps. The filtered pass
//! notices that "d" can never leave state 0, so the shortcut conditioned
//! on "d"=1 goes, and with it everything that only serves detours.
//!
//!     cargo run --example reduce_for_goal

use anred::format::{parse_partial_state, render_transition};
use anred::{parse_model, reduce};

const DEMO: &str = include_str!("../models/demo.an");

fn main() {
    let net = parse_model(DEMO).expect("demo model parses");
    let initial = net.zero_state();
    let goal = parse_partial_state(&net, "\"c\"=2").expect("goal parses")[0];

    for (label, filter) in [("without filter", false), ("with filter", true)] {
        let result = reduce(&net, &initial, goal, filter);
        println!(
            "{label}: kept {} of {} transitions, {} objectives",
            result.kept().len(),
            net.transition_count(),
            result.objectives().len()
        );
        for &id in result.kept() {
            println!("  {}", render_transition(&net, net.transition(id)));
        }
        println!();
    }

    // A goal whose automaton is frozen is refuted outright: no local path
    // can ever satisfy the condition "d"=1, so nothing is worth keeping.
    let frozen = parse_partial_state(&net, "\"d\"=1").expect("goal parses")[0];
    let refuted = reduce(&net, &initial, frozen, true);
    println!(
        "goal \"d\"=1: statically refuted = {}, kept {} transitions",
        refuted.statically_refuted(),
        refuted.kept().len()
    );
}

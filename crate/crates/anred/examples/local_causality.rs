//! Shows the machinery below the pruning: objectives (one automaton's
//! state changes), their acyclic local paths, and the validity fixed
//! point that decides which objectives are feasible from the initial
//! state.
//!
//!     cargo run --example local_causality

use anred::format::{parse_objective, render_objective, render_transition};
use anred::{compute_valid, filtered_local_paths, local_paths, parse_model};

const DEMO: &str = include_str!("../models/demo.an");

fn main() {
    let net = parse_model(DEMO).expect("demo model parses");
    let initial = net.zero_state();
    let objective = parse_objective(&net, "\"c\"=0..2").expect("objective parses");

    println!("local paths of {}:", render_objective(&net, objective));
    for path in local_paths(&net, objective) {
        let rendered: Vec<String> = path
            .transitions()
            .iter()
            .map(|&id| render_transition(&net, net.transition(id)))
            .collect();
        println!("  {}", rendered.join(" ; "));
    }

    // The fixed point refuses objectives no run from the initial state
    // can realize; here "d" can never reach state 1.
    let validity = compute_valid(&net, &initial);
    println!(
        "\nvalidity fixed point admits {} of {} objectives; refused:",
        validity.admitted_count(),
        validity.objective_count()
    );
    for (o, ok) in validity.objectives() {
        if !ok {
            println!("  {}", render_objective(&net, o));
        }
    }

    // Filtering the paths against the fixed point drops the shortcut that
    // hinges on the unrealizable condition "d"=1.
    println!("\nfeasible local paths of {}:", render_objective(&net, objective));
    for path in filtered_local_paths(&net, &initial, Some(&validity), objective) {
        let rendered: Vec<String> = path
            .transitions()
            .iter()
            .map(|&id| render_transition(&net, net.transition(id)))
            .collect();
        println!("  {}", rendered.join(" ; "));
    }
}

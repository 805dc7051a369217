//! Reads a model file and walks its structure: automata, declared local
//! states, and guarded transitions. Pass a path to inspect another model.
//!
//!     cargo run --example parse_and_inspect [model.an]

use anred::format::render_transition;
use anred::parse_model;

const DEMO: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/models/demo.an");

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| DEMO.to_owned());
    let text = std::fs::read_to_string(&path).expect("model file reads");
    let net = parse_model(&text).expect("model file parses");

    println!("{path}");
    println!(
        "{} automata, {} local states, {} transitions",
        net.automaton_count(),
        net.local_state_count(),
        net.transition_count()
    );
    for a in 0..net.automaton_count() {
        let labels: Vec<String> = net
            .state_labels(a)
            .iter()
            .map(|l| l.to_string())
            .collect();
        println!("\nautomaton \"{}\" [{}]", net.automaton_name(a), labels.join(", "));
        for &id in net.automaton_transitions(a) {
            println!("  {}", render_transition(&net, net.transition(id)));
        }
    }
}

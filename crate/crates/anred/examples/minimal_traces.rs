//! Enumerates the minimal goal-reaching runs of the demo network by brute
//! force and judges two hand-written runs: a roundabout one that raises
//! and lowers "b" for nothing, and the straight three-step climb.
//!
//!     cargo run --example minimal_traces

use anred::format::{parse_partial_state, render_trace};
use anred::{enumerate_minimal_traces, minimality, parse_model, Semantics, Step, Trace};

const DEMO: &str = include_str!("../models/demo.an");

fn main() {
    let net = parse_model(DEMO).expect("demo model parses");
    let initial = net.zero_state();
    let goal = parse_partial_state(&net, "\"c\"=2").expect("goal parses")[0];

    for semantics in [Semantics::Async, Semantics::Step] {
        let traces = enumerate_minimal_traces(&net, &initial, goal, semantics, 6, 1_000_000)
            .expect("budget is ample");
        println!("{semantics:?}: {} minimal goal-reaching traces", traces.len());
        for trace in &traces {
            println!("  {}", render_trace(&net, trace));
        }
    }

    // The roundabout run reaches the goal but embeds the climb, so it is
    // not minimal; dropping its "b" detour leaves a shorter witness.
    let find = |a: &str, from: u32, to: u32| {
        net.transitions()
            .find(|(_, t)| {
                net.automaton_name(t.automaton()) == a
                    && net.state_label(t.origin()) == from
                    && net.state_label(t.destination()) == to
            })
            .map(|(id, _)| id)
            .expect("demo transition exists")
    };
    let step = |ids: &[_]| Step::new(&net, ids.iter().copied()).expect("one move per automaton");
    let roundabout = Trace::from_steps(vec![
        step(&[find("a", 0, 1)]),
        step(&[find("b", 0, 1), find("c", 0, 1)]),
        step(&[find("a", 1, 0)]),
        step(&[find("b", 1, 0)]),
        step(&[find("c", 1, 2)]),
    ]);
    let climb = Trace::from_steps(vec![
        step(&[find("a", 0, 1)]),
        step(&[find("c", 0, 1)]),
        step(&[find("c", 1, 2)]),
    ]);

    for (label, trace) in [("roundabout", &roundabout), ("climb", &climb)] {
        let verdict = minimality(&net, &initial, goal, trace).expect("trace reaches the goal");
        println!(
            "{label}: {} | strict {} | lenient {}",
            render_trace(&net, trace),
            verdict.strict,
            verdict.lenient
        );
    }
}

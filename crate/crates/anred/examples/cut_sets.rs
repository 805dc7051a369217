//! Checks candidate cut sets for the goal "c"=2: a cut holds when every
//! route to the goal must first produce one of its local states, so
//! blocking them all severs the goal.
//!
//!     cargo run --example cut_sets

use anred::format::{parse_local_states, render_partial_state};
use anred::{parse_model, verify_cut_set, Limits};

const DEMO: &str = include_str!("../models/demo.an");

fn main() {
    let net = parse_model(DEMO).expect("demo model parses");
    let initial = net.zero_state();
    let goal = parse_local_states(&net, "\"c\"=2").expect("goal parses")[0];

    // "a"=1 is unavoidable: the climb needs it to lift "c". "b"=1 sits
    // only on detours, and "c"=1 can be bypassed through the shortcut
    // in principle, but the shortcut needs the frozen "d"=1.
    for candidate in ["\"a\"=1", "\"b\"=1", "\"c\"=1", "\"b\"=1,\"c\"=1"] {
        let cut = parse_local_states(&net, candidate).expect("cut parses");
        let holds = verify_cut_set(&net, &initial, goal, &cut, Limits::default())
            .expect("cut avoids the initial state and the goal");
        println!(
            "cut {{{}}} {}",
            render_partial_state(&net, &cut),
            if holds { "holds" } else { "fails" }
        );
    }
}

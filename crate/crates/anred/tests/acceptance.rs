//! End-to-end acceptance checks.
//!
//! Each numbered test prints one `acceptance N PASS|FAIL` line and asserts
//! it. Together they pin down what this crate promises: exact golden
//! results on the bundled demonstration model, agreement with independent
//! brute-force oracles over hundreds of pinned-seed random networks, and
//! explicit time budgets.

mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use anred::{
    compute_valid, compute_valid_ordered, count_states, encode_sequential_goal,
    enumerate_minimal_traces, minimality, random_network, reachable, reduce, sweep,
    verify_cut_set, GeneratorParams, IterationOrder, Limits, LocalState, Semantics, Step,
    SweepConfig, SweepOutcome, Trace, TransitionId, Verdict,
};

fn conclude(n: usize, what: &str, pass: bool) {
    println!("acceptance {n} {}: {what}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "acceptance criterion {n} failed: {what}");
}

/// One 500-seed sweep shared by the criteria that examine it.
fn shared_sweep() -> &'static (SweepOutcome, Duration) {
    static SWEEP: OnceLock<(SweepOutcome, Duration)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let config = SweepConfig {
            seeds: 1..=500,
            ..SweepConfig::default()
        };
        let started = Instant::now();
        let outcome = sweep(&config).expect("default generator parameters are feasible");
        (outcome, started.elapsed())
    })
}

fn violations_mentioning(outcome: &SweepOutcome, needles: &[&str]) -> usize {
    outcome
        .violations
        .iter()
        .filter(|v| needles.iter().any(|n| v.contains(n)))
        .count()
}

#[test]
fn criterion_1_golden_reduction_on_the_demo() {
    let started = Instant::now();
    let net = common::demo();
    let initial = net.zero_state();
    let goal = common::local(&net, "c", 2);
    let result = reduce(&net, &initial, goal, true);

    let golden: BTreeSet<TransitionId> = [
        common::tid(&net, "a", 0, 1),
        common::tid(&net, "c", 0, 1),
        common::tid(&net, "c", 1, 2),
    ]
    .into_iter()
    .collect();
    let mut pass = *result.kept() == golden;

    // The shortcut conditioned on the frozen automaton must be gone, along
    // with every transition producing or requiring "b"=1.
    pass &= !result.kept().contains(&common::tid(&net, "c", 0, 2));
    let b1 = common::local(&net, "b", 1);
    for (id, t) in net.transitions() {
        if t.destination() == b1 || t.condition().contains(&b1) {
            pass &= !result.kept().contains(&id);
        }
    }

    // An independent saturation of the closure rules lands on the same
    // objective set and kept set.
    let (naive_objectives, naive_kept) = common::naive_reduce(&net, &initial, goal, true);
    pass &= naive_kept == *result.kept();
    let objectives: BTreeSet<(usize, usize, usize)> = result
        .objectives()
        .iter()
        .map(|o| (o.automaton(), o.from().state, o.to().state))
        .collect();
    pass &= objectives == naive_objectives;

    // The pruning shrinks the reachable space: 12 states down to 4.
    let original = count_states(&net, &initial, Limits::default());
    let reduced = count_states(result.reduced(), &initial, Limits::default());
    pass &= original.exact && reduced.exact;
    pass &= original.states == 12 && reduced.states == 4;

    pass &= started.elapsed() < Duration::from_secs(1);
    conclude(1, "golden reduction of the demo model for goal \"c\"=2", pass);
}

#[test]
fn criterion_2_static_refutation_of_the_frozen_goal() {
    let started = Instant::now();
    let net = common::demo();
    let initial = net.zero_state();
    let goal = common::local(&net, "d", 1);
    let result = reduce(&net, &initial, goal, true);

    let mut pass = result.statically_refuted();
    pass &= !result.trivially_satisfied();
    pass &= result.kept().is_empty();
    pass &= result.reduced().transition_count() == 0;

    // Exhaustive search agrees, on the original and on the emptied model.
    let full = reachable(&net, &initial, &[goal], Semantics::Async, Limits::default(), false);
    pass &= full.verdict == Verdict::Unreachable;
    let emptied = reachable(
        result.reduced(),
        &initial,
        &[goal],
        Semantics::Async,
        Limits::default(),
        false,
    );
    pass &= emptied.verdict == Verdict::Unreachable;

    pass &= started.elapsed() < Duration::from_secs(1);
    conclude(2, "goal \"d\"=1 is statically refuted and truly unreachable", pass);
}

#[test]
fn criterion_3_minimal_traces_stay_within_the_kept_set() {
    let (outcome, elapsed) = shared_sweep();
    let mut pass = outcome.networks == 500;
    pass &= outcome.skipped_enumerations == 0;
    pass &= violations_mentioning(outcome, &["dropped a minimal trace"]) == 0;
    pass &= outcome.violation_count == 0;
    pass &= *elapsed < Duration::from_secs(300);
    for v in &outcome.violations {
        eprintln!("sweep violation: {v}");
    }
    conclude(
        3,
        "across 500 seeded networks no pruning drops a minimal trace",
        pass,
    );
}

#[test]
fn criterion_4_pruning_preserves_reachability() {
    let (outcome, _) = shared_sweep();
    let mut pass = violations_mentioning(
        outcome,
        &[
            "changed the",
            "reached a new state",
            "search reaches the goal",
        ],
    ) == 0;
    pass &= outcome.violation_count == 0;
    conclude(
        4,
        "pruned networks keep every goal verdict and explore no new states",
        pass,
    );
}

#[test]
fn criterion_5_validity_is_sound_and_a_fixed_point() {
    let (outcome, _) = shared_sweep();
    let mut pass = violations_mentioning(outcome, &["fixed point refuses", "validity differs"]) == 0;
    pass &= outcome.violation_count == 0;

    // The computed assignment is the least fixed point of the functional,
    // checked by independent Kleene iteration, and does not move under one
    // more application.
    let mut nets = vec![common::demo()];
    for seed in 1..=60u64 {
        let params = GeneratorParams {
            seed,
            ..GeneratorParams::default()
        };
        nets.push(random_network(&params).expect("default parameters are feasible"));
    }
    for net in &nets {
        let initial = net.zero_state();
        let oracle = compute_valid(net, &initial);
        let computed: common::NaiveValidity = oracle
            .objectives()
            .map(|(o, ok)| ((o.automaton(), o.from().state, o.to().state), ok))
            .collect();
        pass &= computed == common::naive_validity(net, &initial);
        pass &= common::validity_functional(net, &initial, &computed) == computed;
        for order in [IterationOrder::Queue, IterationOrder::Stack, IterationOrder::Sorted] {
            let again = compute_valid_ordered(net, &initial, order);
            pass &= again
                .objectives()
                .zip(oracle.objectives())
                .all(|((_, a), (_, b))| a == b);
        }
    }
    conclude(
        5,
        "refused objectives are unrealizable and the fixed point is order-independent",
        pass,
    );
}

#[test]
fn criterion_6_the_roundabout_run_is_not_minimal_but_the_climb_is() {
    let net = common::demo();
    let initial = net.zero_state();
    let goal = common::local(&net, "c", 2);
    let step = |ids: &[TransitionId]| Step::new(&net, ids.iter().copied()).unwrap();

    let roundabout = Trace::from_steps(vec![
        step(&[common::tid(&net, "a", 0, 1)]),
        step(&[common::tid(&net, "b", 0, 1), common::tid(&net, "c", 0, 1)]),
        step(&[common::tid(&net, "a", 1, 0)]),
        step(&[common::tid(&net, "b", 1, 0)]),
        step(&[common::tid(&net, "c", 1, 2)]),
    ]);
    let climb = Trace::from_steps(vec![
        step(&[common::tid(&net, "a", 0, 1)]),
        step(&[common::tid(&net, "c", 0, 1)]),
        step(&[common::tid(&net, "c", 1, 2)]),
    ]);

    let five = minimality(&net, &initial, goal, &roundabout).unwrap();
    let three = minimality(&net, &initial, goal, &climb).unwrap();
    let mut pass = !five.lenient && !five.strict;
    pass &= three.lenient && three.strict;

    // Brute-force enumeration finds exactly the climb.
    let minimal = enumerate_minimal_traces(&net, &initial, goal, Semantics::Async, 6, 1_000_000)
        .expect("budget is ample");
    pass &= minimal == vec![climb];
    conclude(6, "the 5-step roundabout is non-minimal, its 3-step climb minimal", pass);
}

#[test]
fn criterion_7_cut_set_verdicts_match_direct_search() {
    let mut pass = true;

    // Spot checks on the demo model.
    let net = common::demo();
    let initial = net.zero_state();
    let goal = common::local(&net, "c", 2);
    let a1 = common::local(&net, "a", 1);
    let b1 = common::local(&net, "b", 1);
    pass &= verify_cut_set(&net, &initial, goal, &[a1], Limits::default()) == Ok(true);
    pass &= verify_cut_set(&net, &initial, goal, &[b1], Limits::default()) == Ok(false);
    pass &= common::naive_cut_blocks(&net, &initial, goal, &[a1]);
    pass &= !common::naive_cut_blocks(&net, &initial, goal, &[b1]);

    // Random networks with random cuts drawn away from the initial state.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC07);
    let mut checked = 0usize;
    for seed in 1..=200u64 {
        let params = GeneratorParams {
            seed,
            ..GeneratorParams::default()
        };
        let net = random_network(&params).expect("default parameters are feasible");
        let initial = net.zero_state();
        for _ in 0..2 {
            let a = rng.gen_range(0..net.automaton_count());
            let goal = LocalState::new(a, rng.gen_range(1..net.state_count(a)));
            let mut cut: Vec<LocalState> = Vec::new();
            for _ in 0..rng.gen_range(1..=3usize) {
                let b = rng.gen_range(0..net.automaton_count());
                let ls = LocalState::new(b, rng.gen_range(1..net.state_count(b)));
                if ls != goal && !cut.contains(&ls) {
                    cut.push(ls);
                }
            }
            if cut.is_empty() {
                continue;
            }
            let expected = common::naive_cut_blocks(&net, &initial, goal, &cut);
            match verify_cut_set(&net, &initial, goal, &cut, Limits::default()) {
                Ok(holds) => {
                    checked += 1;
                    if holds != expected {
                        pass = false;
                        eprintln!("seed {seed}: cut verdict {holds} but direct search says {expected}");
                    }
                }
                Err(e) => {
                    pass = false;
                    eprintln!("seed {seed}: unexpected precondition failure: {e}");
                }
            }
        }
    }
    pass &= checked >= 300;
    conclude(7, "cut-set verdicts equal brute-force route search", pass);
}

#[test]
fn criterion_8_reduction_is_fast_on_wide_networks() {
    let mut pass = true;
    for seed in [1u64, 2, 3] {
        let params = GeneratorParams {
            automata: 300..=300,
            states: 2..=2,
            transitions: 2..=2,
            conditions: 1..=2,
            seed,
        };
        let net = random_network(&params).expect("two transitions fit two states");
        pass &= net.automaton_count() == 300;
        pass &= net.transition_count() == 600;
        let initial = net.zero_state();
        let goal = LocalState::new(0, 1);
        let started = Instant::now();
        let result = reduce(&net, &initial, goal, true);
        let elapsed = started.elapsed();
        pass &= result.kept().len() <= net.transition_count();
        if elapsed >= Duration::from_millis(500) {
            pass = false;
            eprintln!("seed {seed}: reduction took {elapsed:?}");
        }
    }
    conclude(8, "reducing 300 x 2 x 2 networks takes under half a second", pass);
}

#[test]
fn criterion_9_single_stage_sequential_goal_matches_direct_reduction() {
    let net = common::demo();
    let initial = net.zero_state();
    let goal = common::local(&net, "c", 2);
    let direct = reduce(&net, &initial, goal, true);

    let (extended, staged_goal) = encode_sequential_goal(&net, &[vec![goal]]).unwrap();
    // The demo initial state is all-zero, and so is the stage automaton's.
    let staged = reduce(&extended, &extended.zero_state(), staged_goal, true);

    // Original transitions keep their positions in the extended network;
    // the stage automaton's moves come after them.
    let restricted: BTreeSet<TransitionId> = staged
        .kept()
        .iter()
        .copied()
        .filter(|&id| extended.transition(id).automaton() < net.automaton_count())
        .collect();
    let mut pass = restricted == *direct.kept();
    pass &= staged.kept().len() == restricted.len() + 1;
    pass &= staged.trivially_satisfied() == direct.trivially_satisfied();
    pass &= staged.statically_refuted() == direct.statically_refuted();
    conclude(9, "one-stage sequential goal reduces exactly like the direct goal", pass);
}

//! Shared fixtures and independent reference implementations.
//!
//! Everything here recomputes results the slow, obvious way so the test
//! suites can cross-check the library's worklist and search algorithms
//! against plain definitions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use anred::reach::enabled;
use anred::{parse_model, GlobalState, LocalState, Network, Step, TransitionId};

pub fn demo() -> Network {
    parse_model(include_str!("../../models/demo.an")).unwrap()
}

/// Looks up a local state by automaton name and declared label.
pub fn local(net: &Network, name: &str, label: u32) -> LocalState {
    let automaton = net.automaton_index(name).unwrap();
    LocalState::new(automaton, net.state_by_label(automaton, label).unwrap())
}

/// Looks up a transition by automaton name and declared endpoint labels.
pub fn tid(net: &Network, name: &str, from: u32, to: u32) -> TransitionId {
    let origin = local(net, name, from);
    let destination = local(net, name, to);
    net.transitions()
        .find(|(_, t)| t.origin() == origin && t.destination() == destination)
        .map(|(id, _)| id)
        .unwrap()
}

/// Validity of every objective, keyed by (automaton, from, to) ordinals.
pub type NaiveValidity = BTreeMap<(usize, usize, usize), bool>;

/// All simple local paths of `automaton` from ordinal `from` to ordinal
/// `to`, found by direct backtracking over the transition table.
pub fn naive_local_paths(
    net: &Network,
    automaton: usize,
    from: usize,
    to: usize,
) -> Vec<Vec<TransitionId>> {
    let mut out = Vec::new();
    if from == to {
        out.push(Vec::new());
        return out;
    }
    let mut seen = vec![false; net.state_count(automaton)];
    seen[from] = true;
    let mut stack = Vec::new();
    search(net, automaton, from, to, &mut seen, &mut stack, &mut out);
    out
}

fn search(
    net: &Network,
    automaton: usize,
    at: usize,
    to: usize,
    seen: &mut [bool],
    stack: &mut Vec<TransitionId>,
    out: &mut Vec<Vec<TransitionId>>,
) {
    for (id, t) in net.transitions() {
        if t.automaton() != automaton || t.origin().state != at {
            continue;
        }
        let next = t.destination().state;
        if seen[next] {
            continue;
        }
        stack.push(id);
        if next == to {
            out.push(stack.clone());
        } else {
            seen[next] = true;
            search(net, automaton, next, to, seen, stack, out);
            seen[next] = false;
        }
        stack.pop();
    }
}

fn path_conditions_hold(
    net: &Network,
    initial: &GlobalState,
    valid: &NaiveValidity,
    path: &[TransitionId],
) -> bool {
    path.iter().all(|&id| {
        net.transition(id)
            .condition()
            .iter()
            .all(|&g| valid[&(g.automaton, initial.get(g.automaton), g.state)])
    })
}

/// One application of the validity functional: an objective is admitted
/// when it is reflexive or some simple local path realizes it using only
/// transitions whose conditions are admitted objectives rooted at the
/// initial state of their automaton, per the given assignment.
pub fn validity_functional(
    net: &Network,
    initial: &GlobalState,
    valid: &NaiveValidity,
) -> NaiveValidity {
    let mut out = NaiveValidity::new();
    for a in 0..net.automaton_count() {
        for i in 0..net.state_count(a) {
            for j in 0..net.state_count(a) {
                let ok = i == j
                    || naive_local_paths(net, a, i, j)
                        .iter()
                        .any(|path| path_conditions_hold(net, initial, valid, path));
                out.insert((a, i, j), ok);
            }
        }
    }
    out
}

/// Least fixed point of the validity functional by Kleene iteration from
/// the everything-refused assignment.
pub fn naive_validity(net: &Network, initial: &GlobalState) -> NaiveValidity {
    let mut valid = NaiveValidity::new();
    for a in 0..net.automaton_count() {
        for i in 0..net.state_count(a) {
            for j in 0..net.state_count(a) {
                valid.insert((a, i, j), false);
            }
        }
    }
    loop {
        let next = validity_functional(net, initial, &valid);
        if next == valid {
            return valid;
        }
        valid = next;
    }
}

/// The goal-driven closure computed the slow way: re-run the three growth
/// rules against the full objective set until nothing changes.
///
/// Returns the closed objective set (as ordinal triples) and the union of
/// the admitted path transitions over it.
pub fn naive_reduce(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    filter: bool,
) -> (BTreeSet<(usize, usize, usize)>, BTreeSet<TransitionId>) {
    let validity = filter.then(|| naive_validity(net, initial));
    let admitted_path_transitions = |a: usize, i: usize, j: usize| -> BTreeSet<TransitionId> {
        let mut out = BTreeSet::new();
        for path in naive_local_paths(net, a, i, j) {
            let ok = match &validity {
                None => true,
                Some(v) => path_conditions_hold(net, initial, v, &path),
            };
            if ok {
                out.extend(path);
            }
        }
        out
    };

    let mut objectives = BTreeSet::new();
    objectives.insert((goal.automaton, initial.get(goal.automaton), goal.state));
    loop {
        let mut kept = BTreeSet::new();
        for &(a, i, j) in &objectives {
            kept.extend(admitted_path_transitions(a, i, j));
        }
        let mut grown = objectives.clone();
        for &id in &kept {
            let t = net.transition(id);
            for &g in t.condition() {
                grown.insert((g.automaton, initial.get(g.automaton), g.state));
            }
            let targets: Vec<usize> = objectives
                .iter()
                .filter(|&&(a, _, _)| a == t.automaton())
                .map(|&(_, _, j)| j)
                .collect();
            for j in targets {
                grown.insert((t.automaton(), t.destination().state, j));
            }
        }
        if grown == objectives {
            return (objectives, kept);
        }
        objectives = grown;
    }
}

/// Decides by direct search whether the cut blocks every route to the
/// goal: breadth-first over the full one-move dynamics, accepting a goal
/// state on sight and refusing to continue past any state where a cut
/// local state has been produced.
pub fn naive_cut_blocks(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    cut: &[LocalState],
) -> bool {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(initial.clone());
    queue.push_back(initial.clone());
    while let Some(state) = queue.pop_front() {
        if state.contains(goal) {
            return false;
        }
        if cut.iter().any(|&c| state.contains(c)) {
            continue;
        }
        for id in enabled(net, &state) {
            let next = net.apply(&state, &Step::single(net, id)).unwrap();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    true
}

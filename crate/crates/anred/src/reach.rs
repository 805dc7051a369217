//! Explicit-state reachability by breadth-first search.
//!
//! Two firing disciplines are supported: one transition per step, and
//! whole steps of compatible transitions, at most one per automaton. The
//! step discipline reaches at least every state the single-move one does
//! and sometimes strictly more, because two transitions may each disable
//! the other's condition while still firing together; its fan-out is
//! exponential in the enabled transitions, so it is meant for small
//! instances. Budgets turn exhaustion into an explicit inconclusive
//! verdict, never a claim of unreachability.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::network::{GlobalState, LocalState, Network, TransitionId};
use crate::semantics::{Step, Trace};

/// Firing discipline used when expanding a state.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum Semantics {
    /// One transition per step.
    #[default]
    Async,
    /// Any non-empty set of enabled transitions, at most one per automaton.
    Step,
}

/// Exploration budgets. Hitting one makes the outcome inconclusive.
#[derive(Copy, Clone, Debug)]
pub struct Limits {
    /// Most states to visit, counting the initial one.
    pub max_states: usize,
    /// Longest trace considered, in steps; `None` means unbounded.
    pub max_depth: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_states: 10_000_000,
            max_depth: None,
        }
    }
}

/// Answer of a reachability query.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Reachable,
    Unreachable,
    /// A budget was exhausted before the search could decide.
    Inconclusive,
}

/// Outcome of one reachability search.
#[derive(Clone, Debug)]
pub struct ReachResult {
    pub verdict: Verdict,
    /// A shortest goal-reaching trace, when one was requested and found.
    pub witness: Option<Trace>,
    pub states_explored: usize,
    pub frontier_peak: usize,
}

/// Every state visited by one exploration.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub states: HashSet<GlobalState>,
    /// False when a budget stopped the walk before exhaustion.
    pub exact: bool,
    pub frontier_peak: usize,
}

/// Cardinality of the single-move reachable set.
#[derive(Copy, Clone, Debug)]
pub struct StateCount {
    pub states: usize,
    pub exact: bool,
}

/// Searches breadth-first for a state where every local state of `goal`
/// holds. The witness, if requested, is shortest in number of steps and
/// deterministic: states expand in discovery order and successors are
/// enumerated in ascending transition order.
pub fn reachable(
    net: &Network,
    initial: &GlobalState,
    goal: &[LocalState],
    semantics: Semantics,
    limits: Limits,
    want_witness: bool,
) -> ReachResult {
    if initial.satisfies(goal) {
        return ReachResult {
            verdict: Verdict::Reachable,
            witness: want_witness.then(Trace::new),
            states_explored: 1,
            frontier_peak: 1,
        };
    }

    let mut visited: HashSet<GlobalState> = HashSet::new();
    let mut parents: HashMap<GlobalState, (GlobalState, Step)> = HashMap::new();
    let mut queue: VecDeque<(GlobalState, usize)> = VecDeque::new();
    let mut frontier_peak = 1;
    let mut truncated = false;

    visited.insert(initial.clone());
    queue.push_back((initial.clone(), 0));

    while let Some((state, depth)) = queue.pop_front() {
        if limits.max_depth.is_some_and(|d| depth >= d) {
            // Expanding would exceed the allowed trace length; remember
            // that something was left on the table, unless nothing fires.
            if !enabled(net, &state).is_empty() {
                truncated = true;
            }
            continue;
        }
        let mut found = None;
        let exhausted = for_each_successor(net, &state, semantics, |step, next| {
            if visited.len() >= limits.max_states {
                return false;
            }
            if visited.contains(&next) {
                return true;
            }
            visited.insert(next.clone());
            if want_witness {
                parents.insert(next.clone(), (state.clone(), step));
            }
            if next.satisfies(goal) {
                found = Some(next);
                return false;
            }
            queue.push_back((next, depth + 1));
            frontier_peak = frontier_peak.max(queue.len());
            true
        });
        if let Some(hit) = found {
            let witness = want_witness.then(|| rebuild(initial, &hit, &parents));
            return ReachResult {
                verdict: Verdict::Reachable,
                witness,
                states_explored: visited.len(),
                frontier_peak,
            };
        }
        if !exhausted {
            truncated = true;
            break;
        }
    }

    ReachResult {
        verdict: if truncated {
            Verdict::Inconclusive
        } else {
            Verdict::Unreachable
        },
        witness: None,
        states_explored: visited.len(),
        frontier_peak,
    }
}

/// Collects every state reachable from `initial` under the given
/// discipline, within the budgets.
pub fn explore(
    net: &Network,
    initial: &GlobalState,
    semantics: Semantics,
    limits: Limits,
) -> Exploration {
    let mut visited: HashSet<GlobalState> = HashSet::new();
    let mut queue: VecDeque<(GlobalState, usize)> = VecDeque::new();
    let mut frontier_peak = 1;
    let mut truncated = false;

    visited.insert(initial.clone());
    queue.push_back((initial.clone(), 0));

    while let Some((state, depth)) = queue.pop_front() {
        if limits.max_depth.is_some_and(|d| depth >= d) {
            if !enabled(net, &state).is_empty() {
                truncated = true;
            }
            continue;
        }
        let exhausted = for_each_successor(net, &state, semantics, |_, next| {
            if visited.len() >= limits.max_states {
                return false;
            }
            if visited.insert(next.clone()) {
                queue.push_back((next, depth + 1));
                frontier_peak = frontier_peak.max(queue.len());
            }
            true
        });
        if !exhausted {
            truncated = true;
            break;
        }
    }

    Exploration {
        states: visited,
        exact: !truncated,
        frontier_peak,
    }
}

/// Counts the states reachable by single moves.
pub fn count_states(net: &Network, initial: &GlobalState, limits: Limits) -> StateCount {
    let e = explore(net, initial, Semantics::Async, limits);
    StateCount {
        states: e.states.len(),
        exact: e.exact,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CutSetError {
    #[error("cut set contains initial local state {automaton:?}={state}")]
    CutIntersectsInitial { automaton: String, state: u32 },
    #[error("cut set contains the goal itself")]
    GoalInCut,
    #[error("exploration budget exhausted before a verdict")]
    Inconclusive,
}

/// Decides whether every run to `goal` must first enter one of the `cut`
/// local states. Transitions whose destination lies in the cut are removed;
/// the goal staying unreachable in the pruned network is exactly the claim,
/// because a run avoiding the cut never needs those transitions.
pub fn verify_cut_set(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    cut: &[LocalState],
    limits: Limits,
) -> Result<bool, CutSetError> {
    for &ls in cut {
        if initial.contains(ls) {
            return Err(CutSetError::CutIntersectsInitial {
                automaton: net.automaton_name(ls.automaton).to_owned(),
                state: net.state_label(ls),
            });
        }
        if ls == goal {
            return Err(CutSetError::GoalInCut);
        }
    }
    let pruned = net.restrict(|_, t| !cut.contains(&t.destination()));
    let result = reachable(&pruned, initial, &[goal], Semantics::Async, limits, false);
    match result.verdict {
        Verdict::Reachable => Ok(false),
        Verdict::Unreachable => Ok(true),
        Verdict::Inconclusive => Err(CutSetError::Inconclusive),
    }
}

/// Ids of the transitions enabled at `state`, ascending.
pub fn enabled(net: &Network, state: &GlobalState) -> Vec<TransitionId> {
    net.transitions()
        .filter(|(_, t)| t.pre().all(|ls| state.contains(ls)))
        .map(|(id, _)| id)
        .collect()
}

/// Feeds `visit` every (step, successor) of `state` in a fixed order until
/// it declines; returns whether the enumeration ran to completion. Under
/// the step discipline every combination of enabled transitions with at
/// most one per automaton is a step, since conditions are read before
/// anything moves.
pub(crate) fn for_each_successor(
    net: &Network,
    state: &GlobalState,
    semantics: Semantics,
    mut visit: impl FnMut(Step, GlobalState) -> bool,
) -> bool {
    let enabled = enabled(net, state);
    match semantics {
        Semantics::Async => {
            for id in enabled {
                let step = Step::single(net, id);
                let next = net.apply(state, &step).expect("enabled transition plays");
                if !visit(step, next) {
                    return false;
                }
            }
            true
        }
        Semantics::Step => {
            // Group by automaton, then walk the product of "skip or fire
            // one" per group, least-significant group last.
            let mut groups: Vec<Vec<TransitionId>> = Vec::new();
            let mut last = usize::MAX;
            for id in enabled {
                let a = net.transition(id).automaton();
                if a != last {
                    groups.push(Vec::new());
                    last = a;
                }
                groups.last_mut().unwrap().push(id);
            }
            if groups.is_empty() {
                return true;
            }
            let mut choice = vec![0usize; groups.len()]; // 0 = skip, k = fire kth
            loop {
                // Advance the mixed-radix counter; all-skip was emitted
                // first and is silently dropped.
                let mut pos = groups.len();
                loop {
                    if pos == 0 {
                        return true;
                    }
                    pos -= 1;
                    if choice[pos] < groups[pos].len() {
                        choice[pos] += 1;
                        break;
                    }
                    choice[pos] = 0;
                }
                let ids: Vec<TransitionId> = choice
                    .iter()
                    .zip(&groups)
                    .filter(|(&c, _)| c > 0)
                    .map(|(&c, g)| g[c - 1])
                    .collect();
                let step = Step::new(net, ids).expect("one transition per automaton");
                let next = net.apply(state, &step).expect("enabled transitions play");
                if !visit(step, next) {
                    return false;
                }
            }
        }
    }
}

fn rebuild(
    initial: &GlobalState,
    hit: &GlobalState,
    parents: &HashMap<GlobalState, (GlobalState, Step)>,
) -> Trace {
    let mut steps = Vec::new();
    let mut at = hit;
    while at != initial {
        let (prev, step) = &parents[at];
        steps.push(step.clone());
        at = prev;
    }
    steps.reverse();
    Trace::from_steps(steps)
}

//! Local causality: objectives, acyclic local paths, and a feasibility
//! filter for the conditions read along them.
//!
//! An objective asks one automaton to move between two of its local states.
//! Its local paths are the acyclic transition sequences realizing it inside
//! that automaton alone; everything the rest of the network must provide
//! shows up as conditions on those transitions. Feasibility of an objective
//! from a fixed initial state is approximated by a least fixed point: an
//! objective is admitted as soon as one of its local paths reads only
//! conditions whose own initial-rooted objectives are admitted. The
//! approximation errs only on the permissive side; an objective it refuses
//! is realizable by no trace.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::network::{GlobalState, LocalState, Network, Transition, TransitionId};

/// A request to move one automaton from one local state to another.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Objective {
    from: LocalState,
    to: LocalState,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("objective endpoints belong to different automata")]
pub struct MismatchedObjective;

impl Objective {
    pub fn new(from: LocalState, to: LocalState) -> Result<Self, MismatchedObjective> {
        if from.automaton != to.automaton {
            return Err(MismatchedObjective);
        }
        Ok(Self { from, to })
    }

    pub fn from(&self) -> LocalState {
        self.from
    }

    pub fn to(&self) -> LocalState {
        self.to
    }

    pub fn automaton(&self) -> usize {
        self.from.automaton
    }

    /// Already satisfied where it starts: both endpoints coincide.
    pub fn is_trivial(&self) -> bool {
        self.from == self.to
    }
}

/// An acyclic sequence of consecutive transitions within one automaton.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LocalPath(Box<[TransitionId]>);

impl LocalPath {
    pub fn transitions(&self) -> &[TransitionId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Dense numbering of every objective of a network.
#[derive(Clone, Debug)]
pub(crate) struct ObjectiveIndex {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    total: usize,
}

impl ObjectiveIndex {
    pub(crate) fn new(net: &Network) -> Self {
        let mut offsets = Vec::with_capacity(net.automaton_count());
        let mut sizes = Vec::with_capacity(net.automaton_count());
        let mut total = 0;
        for a in 0..net.automaton_count() {
            offsets.push(total);
            sizes.push(net.state_count(a));
            total += net.state_count(a) * net.state_count(a);
        }
        Self { offsets, sizes, total }
    }

    pub(crate) fn len(&self) -> usize {
        self.total
    }

    pub(crate) fn index(&self, o: Objective) -> usize {
        let a = o.automaton();
        self.offsets[a] + o.from().state * self.sizes[a] + o.to().state
    }

    pub(crate) fn objective(&self, i: usize) -> Objective {
        let a = match self.offsets.binary_search(&i) {
            Ok(mut a) => {
                // Zero-state automata share offsets; take the last match.
                while a + 1 < self.offsets.len() && self.offsets[a + 1] == i {
                    a += 1;
                }
                a
            }
            Err(a) => a - 1,
        };
        let rel = i - self.offsets[a];
        Objective {
            from: LocalState::new(a, rel / self.sizes[a]),
            to: LocalState::new(a, rel % self.sizes[a]),
        }
    }
}

/// Judgement on which objectives can be realized from a fixed initial
/// state. Implementations may over-approximate but must never refuse an
/// objective some trace realizes.
pub trait ValidityPredicate {
    fn is_valid(&self, objective: Objective) -> bool;
}

/// Order in which pending work is drained; results never depend on it.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum IterationOrder {
    #[default]
    Queue,
    Stack,
    Sorted,
}

/// One container abstracting over the three drain orders.
pub(crate) struct Worklist<T: Ord + Copy> {
    order: IterationOrder,
    queue: VecDeque<T>,
    sorted: BTreeSet<T>,
}

impl<T: Ord + Copy> Worklist<T> {
    pub(crate) fn new(order: IterationOrder) -> Self {
        Self {
            order,
            queue: VecDeque::new(),
            sorted: BTreeSet::new(),
        }
    }

    pub(crate) fn push(&mut self, item: T) {
        match self.order {
            IterationOrder::Queue | IterationOrder::Stack => self.queue.push_back(item),
            IterationOrder::Sorted => {
                self.sorted.insert(item);
            }
        }
    }

    pub(crate) fn pop(&mut self) -> Option<T> {
        match self.order {
            IterationOrder::Queue => self.queue.pop_front(),
            IterationOrder::Stack => self.queue.pop_back(),
            IterationOrder::Sorted => self.sorted.pop_first(),
        }
    }
}

/// The computed least fixed point: a verdict for every objective.
#[derive(Clone, Debug)]
pub struct ValidityOracle {
    index: ObjectiveIndex,
    valid: Vec<bool>,
    initial: GlobalState,
}

impl ValidityOracle {
    pub fn initial(&self) -> &GlobalState {
        &self.initial
    }

    pub fn objective_count(&self) -> usize {
        self.index.len()
    }

    pub fn admitted_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Every objective with its verdict, in dense index order.
    pub fn objectives(&self) -> impl Iterator<Item = (Objective, bool)> + '_ {
        (0..self.index.len()).map(|i| (self.index.objective(i), self.valid[i]))
    }
}

impl ValidityPredicate for ValidityOracle {
    fn is_valid(&self, objective: Objective) -> bool {
        self.valid[self.index.index(objective)]
    }
}

/// Computes the feasibility fixed point for `initial`.
pub fn compute_valid(net: &Network, initial: &GlobalState) -> ValidityOracle {
    compute_valid_ordered(net, initial, IterationOrder::default())
}

/// Same fixed point, draining pending automata in the given order.
pub fn compute_valid_ordered(
    net: &Network,
    initial: &GlobalState,
    order: IterationOrder,
) -> ValidityOracle {
    let index = ObjectiveIndex::new(net);
    let mut valid = vec![false; index.len()];

    // State numbering across automata, for guard watcher lists.
    let mut ls_offsets = Vec::with_capacity(net.automaton_count());
    let mut total_ls = 0;
    for a in 0..net.automaton_count() {
        ls_offsets.push(total_ls);
        total_ls += net.state_count(a);
    }
    let ls_index = |ls: LocalState| ls_offsets[ls.automaton] + ls.state;

    // Every automaton reaches its current state by doing nothing.
    for a in 0..net.automaton_count() {
        for k in 0..net.state_count(a) {
            let o = Objective::new(LocalState::new(a, k), LocalState::new(a, k)).unwrap();
            valid[index.index(o)] = true;
        }
    }

    let rooted = |g: LocalState| {
        Objective::new(initial.local_state(g.automaton), g).unwrap()
    };

    let mut watchers: Vec<Vec<TransitionId>> = vec![Vec::new(); total_ls];
    let mut missing: Vec<usize> = vec![0; net.transition_count()];
    let mut usable: Vec<bool> = vec![false; net.transition_count()];
    for (id, t) in net.transitions() {
        let open = t
            .condition()
            .iter()
            .filter(|&&g| !valid[index.index(rooted(g))])
            .count();
        missing[id.0] = open;
        usable[id.0] = open == 0;
        for &g in t.condition() {
            watchers[ls_index(g)].push(id);
        }
    }

    let mut pending = Worklist::new(order);
    let mut queued = vec![false; net.automaton_count()];
    for a in 0..net.automaton_count() {
        pending.push(a);
        queued[a] = true;
    }

    while let Some(a) = pending.pop() {
        queued[a] = false;
        // Forward closure over currently usable transitions of `a`.
        let k = net.state_count(a);
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &id in net.automaton_transitions(a) {
            if usable[id.0] {
                let t = net.transition(id);
                adj[t.origin().state].push(t.destination().state);
            }
        }
        for from in 0..k {
            let mut seen = vec![false; k];
            seen[from] = true;
            let mut stack = vec![from];
            while let Some(s) = stack.pop() {
                for &d in &adj[s] {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
            for to in 0..k {
                if !seen[to] {
                    continue;
                }
                let o = Objective::new(LocalState::new(a, from), LocalState::new(a, to)).unwrap();
                let oi = index.index(o);
                if valid[oi] {
                    continue;
                }
                valid[oi] = true;
                if from != initial.get(a) {
                    continue;
                }
                // A guard on (a, to) just became admitted; wake its watchers.
                for &t in &watchers[ls_index(LocalState::new(a, to))] {
                    missing[t.0] -= 1;
                    if missing[t.0] == 0 {
                        usable[t.0] = true;
                        let b = net.transition(t).automaton();
                        if !queued[b] {
                            queued[b] = true;
                            pending.push(b);
                        }
                    }
                }
            }
        }
    }

    ValidityOracle {
        index,
        valid,
        initial: initial.clone(),
    }
}

/// All acyclic local paths realizing `objective`; a trivial objective has
/// exactly the empty path. Paths come back in lexicographic id order.
pub fn local_paths(net: &Network, objective: Objective) -> Vec<LocalPath> {
    let mut out = Vec::new();
    if objective.is_trivial() {
        out.push(LocalPath(Box::new([])));
        return out;
    }
    walk_paths(net, objective, |_| true, |path| {
        out.push(LocalPath(path.to_vec().into_boxed_slice()))
    });
    out
}

/// The local paths of `objective` every condition of which is admitted for
/// `initial` by `validity`; `None` keeps all paths.
pub fn filtered_local_paths(
    net: &Network,
    initial: &GlobalState,
    validity: Option<&dyn ValidityPredicate>,
    objective: Objective,
) -> Vec<LocalPath> {
    let Some(v) = validity else {
        return local_paths(net, objective);
    };
    let mut out = Vec::new();
    if objective.is_trivial() {
        out.push(LocalPath(Box::new([])));
        return out;
    }
    walk_paths(
        net,
        objective,
        |t| conditions_admitted(initial, v, t),
        |path| out.push(LocalPath(path.to_vec().into_boxed_slice())),
    );
    out
}

/// Union of the transitions on any admitted local path of `objective`.
/// This is what a goal-driven closure needs; the paths themselves are not
/// materialized.
pub fn filtered_path_transitions(
    net: &Network,
    initial: &GlobalState,
    validity: Option<&dyn ValidityPredicate>,
    objective: Objective,
) -> BTreeSet<TransitionId> {
    let mut out = BTreeSet::new();
    if objective.is_trivial() {
        return out;
    }
    let admit = |t: &Transition| match validity {
        None => true,
        Some(v) => conditions_admitted(initial, v, t),
    };
    walk_paths(net, objective, admit, |path| {
        out.extend(path.iter().copied());
    });
    out
}

fn conditions_admitted(
    initial: &GlobalState,
    validity: &dyn ValidityPredicate,
    t: &Transition,
) -> bool {
    t.condition().iter().all(|&g| {
        validity.is_valid(Objective::new(initial.local_state(g.automaton), g).unwrap())
    })
}

/// Depth-first enumeration of the simple paths from `objective.from()` to
/// `objective.to()` over admitted transitions, calling `found` with each.
/// Exponential in the automaton's state count in the worst case, but each
/// automaton is explored in isolation and branches that cannot reach the
/// target any more are cut early.
fn walk_paths(
    net: &Network,
    objective: Objective,
    mut admit: impl FnMut(&Transition) -> bool,
    mut found: impl FnMut(&[TransitionId]),
) {
    let a = objective.automaton();
    let k = net.state_count(a);
    let target = objective.to().state;

    let mut adj: Vec<Vec<TransitionId>> = vec![Vec::new(); k];
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &id in net.automaton_transitions(a) {
        let t = net.transition(id);
        if admit(t) {
            adj[t.origin().state].push(id);
            radj[t.destination().state].push(t.origin().state);
        }
    }

    // States that can still reach the target at all.
    let mut can_reach = vec![false; k];
    can_reach[target] = true;
    let mut stack = vec![target];
    while let Some(s) = stack.pop() {
        for &p in &radj[s] {
            if !can_reach[p] {
                can_reach[p] = true;
                stack.push(p);
            }
        }
    }
    if !can_reach[objective.from().state] {
        return;
    }

    let mut on_path = vec![false; k];
    let mut path: Vec<TransitionId> = Vec::new();
    on_path[objective.from().state] = true;
    dfs(
        net, &adj, &can_reach, target, objective.from().state, &mut on_path, &mut path, &mut found,
    );
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    net: &Network,
    adj: &[Vec<TransitionId>],
    can_reach: &[bool],
    target: usize,
    state: usize,
    on_path: &mut Vec<bool>,
    path: &mut Vec<TransitionId>,
    found: &mut impl FnMut(&[TransitionId]),
) {
    if state == target {
        found(path);
        return;
    }
    for &id in &adj[state] {
        let d = net.transition(id).destination().state;
        if on_path[d] || !can_reach[d] {
            continue;
        }
        on_path[d] = true;
        path.push(id);
        dfs(net, adj, can_reach, target, d, on_path, path, found);
        path.pop();
        on_path[d] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_model;

    const DEMO: &str = include_str!("../models/demo.an");

    fn demo() -> Network {
        parse_model(DEMO).unwrap()
    }

    fn obj(net: &Network, name: &str, from: u32, to: u32) -> Objective {
        let a = net.automaton_index(name).unwrap();
        Objective::new(
            LocalState::new(a, net.state_by_label(a, from).unwrap()),
            LocalState::new(a, net.state_by_label(a, to).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn objective_endpoints_must_share_an_automaton() {
        assert_eq!(
            Objective::new(LocalState::new(0, 0), LocalState::new(1, 0)),
            Err(MismatchedObjective)
        );
        let o = obj(&demo(), "c", 0, 0);
        assert!(o.is_trivial());
    }

    #[test]
    fn local_paths_of_the_demo_climb() {
        let net = demo();
        let paths = local_paths(&net, obj(&net, "c", 0, 2));
        assert_eq!(paths.len(), 2);
        // Two routes: through 1, and directly with the frozen guard.
        assert_eq!(paths[0].len(), 2);
        assert_eq!(paths[1].len(), 1);
        let direct = net.transition(paths[1].transitions()[0]);
        assert_eq!(direct.condition()[0].automaton, net.automaton_index("d").unwrap());
    }

    #[test]
    fn local_paths_trivial_and_impossible() {
        let net = demo();
        let trivial = local_paths(&net, obj(&net, "c", 1, 1));
        assert_eq!(trivial.len(), 1);
        assert!(trivial[0].is_empty());
        assert!(local_paths(&net, obj(&net, "d", 0, 1)).is_empty());
    }

    #[test]
    fn local_paths_are_simple_and_consecutive() {
        let net = demo();
        for from in 0..3 {
            for to in 0..3 {
                let o = obj(&net, "c", from, to);
                for p in local_paths(&net, o) {
                    let mut visited = vec![o.from().state];
                    for &id in p.transitions() {
                        let t = net.transition(id);
                        assert_eq!(t.origin().state, *visited.last().unwrap());
                        assert!(!visited.contains(&t.destination().state));
                        visited.push(t.destination().state);
                    }
                    assert!(p.len() < net.state_count(o.automaton()).max(1));
                    if !p.is_empty() {
                        assert_eq!(
                            net.transition(*p.transitions().last().unwrap())
                                .destination(),
                            o.to()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn validity_fixpoint_on_the_demo() {
        let net = demo();
        let oracle = compute_valid(&net, &net.zero_state());
        assert!(oracle.is_valid(obj(&net, "c", 0, 2)));
        assert!(oracle.is_valid(obj(&net, "a", 0, 1)));
        assert!(oracle.is_valid(obj(&net, "b", 0, 1)));
        assert!(oracle.is_valid(obj(&net, "c", 1, 0)));
        assert!(!oracle.is_valid(obj(&net, "d", 0, 1)));
        assert!(!oracle.is_valid(obj(&net, "d", 1, 0)));
        // Nothing leaves the top of c.
        assert!(!oracle.is_valid(obj(&net, "c", 2, 0)));
        // Reflexive objectives always hold.
        for a in 0..net.automaton_count() {
            for k in 0..net.state_count(a) {
                let o = Objective::new(LocalState::new(a, k), LocalState::new(a, k)).unwrap();
                assert!(oracle.is_valid(o));
            }
        }
    }

    #[test]
    fn validity_does_not_depend_on_drain_order() {
        let net = demo();
        let zero = net.zero_state();
        let orders = [IterationOrder::Queue, IterationOrder::Stack, IterationOrder::Sorted];
        let verdicts: Vec<Vec<bool>> = orders
            .iter()
            .map(|&o| {
                compute_valid_ordered(&net, &zero, o)
                    .objectives()
                    .map(|(_, v)| v)
                    .collect()
            })
            .collect();
        assert_eq!(verdicts[0], verdicts[1]);
        assert_eq!(verdicts[0], verdicts[2]);
    }

    #[test]
    fn filter_drops_the_frozen_route() {
        let net = demo();
        let zero = net.zero_state();
        let oracle = compute_valid(&net, &zero);
        let o = obj(&net, "c", 0, 2);
        let kept = filtered_local_paths(&net, &zero, Some(&oracle), o);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].len(), 2);
        let all = filtered_local_paths(&net, &zero, None, o);
        assert_eq!(all.len(), 2);

        let ids = filtered_path_transitions(&net, &zero, Some(&oracle), o);
        assert_eq!(ids.len(), 2);
        let ids = filtered_path_transitions(&net, &zero, None, o);
        assert_eq!(ids.len(), 3);
    }

    #[test]
    fn initial_state_matters() {
        let net = demo();
        // With d already at 1, the direct route becomes feasible.
        let d1 = net
            .state_with(&[LocalState::new(net.automaton_index("d").unwrap(), 1)])
            .unwrap();
        let oracle = compute_valid(&net, &d1);
        let kept = filtered_local_paths(&net, &d1, Some(&oracle), obj(&net, "c", 0, 2));
        assert_eq!(kept.len(), 2);
    }

    #[test]
    fn objective_index_round_trips() {
        let net = demo();
        let index = ObjectiveIndex::new(&net);
        assert_eq!(index.len(), 4 + 4 + 9 + 4);
        for i in 0..index.len() {
            assert_eq!(index.index(index.objective(i)), i);
        }
    }
}

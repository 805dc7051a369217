//! Concurrent execution: steps, traces, playability, and application.
//!
//! A step fires a set of transitions simultaneously, at most one per
//! automaton. A step whose combined requirements name two local states of
//! one automaton can be represented but is never playable. A trace is a
//! sequence of steps, each playable in the state left by its predecessors.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::network::{GlobalState, LocalState, Network, TransitionId};

/// A set of transitions fired together, at most one per automaton.
///
/// Stored sorted by moving automaton, so equal steps compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Step {
    transitions: Box<[TransitionId]>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("transition id {0} out of range")]
    UnknownTransition(usize),
    #[error("step moves automaton {0:?} more than once")]
    DuplicateAutomaton(String),
}

impl Step {
    /// The empty step; playable everywhere and changing nothing.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a step from transition ids of `net`, rejecting two moves of
    /// one automaton. Duplicate ids collapse.
    pub fn new(net: &Network, ids: impl IntoIterator<Item = TransitionId>) -> Result<Self, StepError> {
        let mut ids: Vec<TransitionId> = ids.into_iter().collect();
        for &id in &ids {
            if id.0 >= net.transition_count() {
                return Err(StepError::UnknownTransition(id.0));
            }
        }
        ids.sort_by_key(|&id| (net.transition(id).automaton(), id));
        ids.dedup();
        for pair in ids.windows(2) {
            let a = net.transition(pair[0]).automaton();
            if a == net.transition(pair[1]).automaton() {
                return Err(StepError::DuplicateAutomaton(
                    net.automaton_name(a).to_owned(),
                ));
            }
        }
        Ok(Self {
            transitions: ids.into_boxed_slice(),
        })
    }

    /// Single-transition step.
    pub fn single(net: &Network, id: TransitionId) -> Self {
        Self::new(net, [id]).expect("one transition is always a step")
    }

    pub fn transitions(&self) -> &[TransitionId] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn contains(&self, id: TransitionId) -> bool {
        self.transitions.contains(&id)
    }

    /// True when every transition of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &Step) -> bool {
        self.transitions.iter().all(|id| other.contains(*id))
    }

    /// Local states required to play the step: the union of its transitions'
    /// requirements. May name two states of one automaton, in which case the
    /// step is unplayable.
    pub fn pre(&self, net: &Network) -> Vec<LocalState> {
        let mut out: Vec<LocalState> = self
            .transitions
            .iter()
            .flat_map(|&id| net.transition(id).pre())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Local states holding right after the step: destinations and read
    /// conditions, minus the origins that were left.
    pub fn post(&self, net: &Network) -> Vec<LocalState> {
        let origins: Vec<LocalState> = self
            .transitions
            .iter()
            .map(|&id| net.transition(id).origin())
            .collect();
        let mut out: Vec<LocalState> = self
            .transitions
            .iter()
            .flat_map(|&id| net.transition(id).post())
            .filter(|ls| !origins.contains(ls))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// A sequence of steps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Trace {
    steps: Vec<Step>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Union of all transitions fired anywhere in the trace.
    pub fn transitions(&self) -> BTreeSet<TransitionId> {
        self.steps
            .iter()
            .flat_map(|s| s.transitions().iter().copied())
            .collect()
    }

    /// Per automaton, the requirement of the first step that involves it:
    /// what must hold before the trace can start. Sorted by automaton.
    pub fn pre(&self, net: &Network) -> Vec<LocalState> {
        let mut touched = vec![false; net.automaton_count()];
        let mut out = Vec::new();
        for step in &self.steps {
            let pre = step.pre(net);
            for &ls in &pre {
                if !touched[ls.automaton] {
                    out.push(ls);
                }
            }
            for &ls in &pre {
                touched[ls.automaton] = true;
            }
        }
        out.sort();
        out
    }

    /// Per automaton, the result of the last step that involves it: what is
    /// guaranteed to hold once the trace ends. Sorted by automaton.
    pub fn post(&self, net: &Network) -> Vec<LocalState> {
        let mut touched = vec![false; net.automaton_count()];
        let mut out = Vec::new();
        for step in self.steps.iter().rev() {
            let post = step.post(net);
            for &ls in &post {
                if !touched[ls.automaton] {
                    out.push(ls);
                }
            }
            for &ls in &post {
                touched[ls.automaton] = true;
            }
        }
        out.sort();
        out
    }
}

/// Error applying a step that is not playable in the given state.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("step is not playable in the given state")]
pub struct NotPlayable;

/// Error validating a trace; `step` is the zero-based index of the first
/// step that is not playable.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("step {} is not playable", step + 1)]
pub struct InvalidTrace {
    pub step: usize,
}

impl Network {
    /// A step is playable in `s` when every local state it requires holds.
    pub fn playable(&self, s: &GlobalState, step: &Step) -> bool {
        step.transitions()
            .iter()
            .all(|&id| self.transition(id).pre().all(|ls| s.contains(ls)))
    }

    /// Applies a playable step: every automaton with a transition in the
    /// step moves to that transition's destination, all others stay.
    pub fn apply(&self, s: &GlobalState, step: &Step) -> Result<GlobalState, NotPlayable> {
        if !self.playable(s, step) {
            return Err(NotPlayable);
        }
        let mut out = s.clone();
        for &id in step.transitions() {
            let d = self.transition(id).destination();
            out.set(d.automaton, d.state);
        }
        Ok(out)
    }

    /// Plays the whole trace from `s`, returning the final state, or the
    /// index of the first step that fails.
    pub fn validate_trace(&self, s: &GlobalState, trace: &Trace) -> Result<GlobalState, InvalidTrace> {
        let mut cur = s.clone();
        for (i, step) in trace.steps().iter().enumerate() {
            cur = self.apply(&cur, step).map_err(|_| InvalidTrace { step: i })?;
        }
        Ok(cur)
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

    fn ls(net: &Network, name: &str, label: u32) -> LocalState {
        let a = net.automaton_index(name).unwrap();
        LocalState::new(a, net.state_by_label(a, label).unwrap())
    }

    /// Transition of `name` moving `from` to `to`, by declared labels.
    fn tid(net: &Network, name: &str, from: u32, to: u32) -> TransitionId {
        let o = ls(net, name, from);
        let d = ls(net, name, to);
        net.transitions()
            .find(|(_, t)| t.origin() == o && t.destination() == d)
            .map(|(id, _)| id)
            .unwrap()
    }

    #[test]
    fn step_rejects_two_moves_of_one_automaton() {
        let net = demo();
        let err = Step::new(&net, [tid(&net, "c", 0, 1), tid(&net, "c", 1, 2)]);
        assert_eq!(err, Err(StepError::DuplicateAutomaton("c".into())));
        assert_eq!(
            Step::new(&net, [TransitionId(99)]),
            Err(StepError::UnknownTransition(99))
        );
    }

    #[test]
    fn step_pre_unions_requirements() {
        let net = demo();
        let s = Step::new(&net, [tid(&net, "a", 0, 1)]).unwrap();
        assert_eq!(s.pre(&net), vec![ls(&net, "a", 0), ls(&net, "b", 0)]);

        // Incompatible requirements are representable; both states appear.
        let s = Step::new(&net, [tid(&net, "a", 0, 1), tid(&net, "c", 0, 1)]).unwrap();
        assert_eq!(
            s.pre(&net),
            vec![
                ls(&net, "a", 0),
                ls(&net, "a", 1),
                ls(&net, "b", 0),
                ls(&net, "c", 0)
            ]
        );
        assert!(!net.playable(&net.zero_state(), &s));
    }

    #[test]
    fn step_post_drops_left_origins_keeps_conditions() {
        let net = demo();
        let s = Step::new(&net, [tid(&net, "a", 0, 1), tid(&net, "b", 0, 1)]).unwrap();
        assert_eq!(s.post(&net), vec![ls(&net, "a", 1), ls(&net, "b", 1)]);

        let s = Step::new(&net, [tid(&net, "a", 0, 1)]).unwrap();
        assert_eq!(s.post(&net), vec![ls(&net, "a", 1), ls(&net, "b", 0)]);
    }

    #[test]
    fn playable_and_apply() {
        let net = demo();
        let zero = net.zero_state();
        let step = Step::new(&net, [tid(&net, "a", 0, 1)]).unwrap();
        assert!(net.playable(&zero, &step));
        let next = net.apply(&zero, &step).unwrap();
        assert!(next.contains(ls(&net, "a", 1)));
        assert!(next.contains(ls(&net, "b", 0)));

        let bad = Step::new(&net, [tid(&net, "c", 1, 2)]).unwrap();
        assert!(!net.playable(&zero, &bad));
        assert_eq!(net.apply(&zero, &bad), Err(NotPlayable));

        // The empty step is playable anywhere and changes nothing.
        assert_eq!(net.apply(&zero, &Step::empty()), Ok(zero.clone()));
    }

    /// The five-step run: a rises, b and c react, a and b fall back, c tops out.
    fn five_step(net: &Network) -> Trace {
        Trace::from_steps(vec![
            Step::new(net, [tid(net, "a", 0, 1)]).unwrap(),
            Step::new(net, [tid(net, "b", 0, 1), tid(net, "c", 0, 1)]).unwrap(),
            Step::new(net, [tid(net, "a", 1, 0)]).unwrap(),
            Step::new(net, [tid(net, "b", 1, 0)]).unwrap(),
            Step::new(net, [tid(net, "c", 1, 2)]).unwrap(),
        ])
    }

    /// The three-step run reaching the same end state of c.
    fn three_step(net: &Network) -> Trace {
        Trace::from_steps(vec![
            Step::new(net, [tid(net, "a", 0, 1)]).unwrap(),
            Step::new(net, [tid(net, "c", 0, 1)]).unwrap(),
            Step::new(net, [tid(net, "c", 1, 2)]).unwrap(),
        ])
    }

    #[test]
    fn traces_validate_and_report_failures() {
        let net = demo();
        let zero = net.zero_state();
        let end = net.validate_trace(&zero, &five_step(&net)).unwrap();
        assert!(end.contains(ls(&net, "c", 2)));
        let end = net.validate_trace(&zero, &three_step(&net)).unwrap();
        assert!(end.contains(ls(&net, "c", 2)));

        let bad = Trace::from_steps(vec![
            Step::new(&net, [tid(&net, "c", 1, 2)]).unwrap(),
        ]);
        assert_eq!(
            net.validate_trace(&zero, &bad),
            Err(InvalidTrace { step: 0 })
        );
        assert_eq!(InvalidTrace { step: 0 }.to_string(), "step 1 is not playable");
    }

    #[test]
    fn trace_pre_takes_first_involvement() {
        let net = demo();
        let t = three_step(&net);
        assert_eq!(
            t.pre(&net),
            vec![ls(&net, "a", 0), ls(&net, "b", 0), ls(&net, "c", 0)]
        );
        assert_eq!(Trace::new().pre(&net), Vec::new());
    }

    #[test]
    fn trace_post_takes_last_involvement() {
        let net = demo();
        let t = three_step(&net);
        assert_eq!(
            t.post(&net),
            vec![ls(&net, "a", 1), ls(&net, "b", 0), ls(&net, "c", 2)]
        );
        assert_eq!(Trace::new().post(&net), Vec::new());

        // b is last involved by the read in the final step, not by its own move.
        let t = five_step(&net);
        assert!(t.post(&net).contains(&ls(&net, "b", 0)));
        assert!(t.post(&net).contains(&ls(&net, "c", 2)));
    }

    #[test]
    fn trace_transitions_unions_steps() {
        let net = demo();
        let t = three_step(&net);
        let ids = t.transitions();
        assert_eq!(ids.len(), 3);
        assert!(ids.contains(&tid(&net, "a", 0, 1)));
        assert!(ids.contains(&tid(&net, "c", 0, 1)));
        assert!(ids.contains(&tid(&net, "c", 1, 2)));
    }
}

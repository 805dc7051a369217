//! Static structure of automata networks.
//!
//! A network is a fixed list of named automata. Each automaton owns a finite
//! list of local states, declared by numeric label and addressed internally
//! by dense ordinals. A transition moves one automaton between two of its
//! local states and may require local states of other automata to hold
//! first, at most one per foreign automaton and never one of its own.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

/// Most local states one automaton may declare; ordinals must fit in a byte.
pub const MAX_LOCAL_STATES: usize = 256;

/// One local state of one automaton, both addressed by dense ordinals.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LocalState {
    pub automaton: usize,
    pub state: usize,
}

impl LocalState {
    pub const fn new(automaton: usize, state: usize) -> Self {
        Self { automaton, state }
    }
}

/// Position of a transition in its network's table.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TransitionId(pub usize);

/// A guarded move of one automaton between two of its local states.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Transition {
    origin: LocalState,
    destination: LocalState,
    condition: Box<[LocalState]>, // sorted by automaton, at most one per automaton
}

impl Transition {
    pub fn origin(&self) -> LocalState {
        self.origin
    }

    pub fn destination(&self) -> LocalState {
        self.destination
    }

    /// The automaton this transition moves.
    pub fn automaton(&self) -> usize {
        self.origin.automaton
    }

    /// Foreign local states that must hold for the transition to fire.
    pub fn condition(&self) -> &[LocalState] {
        &self.condition
    }

    /// Local states required before firing: the origin plus the condition.
    pub fn pre(&self) -> impl Iterator<Item = LocalState> + '_ {
        std::iter::once(self.origin).chain(self.condition.iter().copied())
    }

    /// Local states holding right after firing: the destination plus the
    /// condition (conditions are only read, never changed).
    pub fn post(&self) -> impl Iterator<Item = LocalState> + '_ {
        std::iter::once(self.destination).chain(self.condition.iter().copied())
    }
}

/// A full assignment of one local state per automaton, stored as ordinals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GlobalState(Box<[u8]>);

impl GlobalState {
    /// Ordinal of the given automaton's current local state.
    pub fn get(&self, automaton: usize) -> usize {
        self.0[automaton] as usize
    }

    pub fn local_state(&self, automaton: usize) -> LocalState {
        LocalState::new(automaton, self.get(automaton))
    }

    pub fn contains(&self, ls: LocalState) -> bool {
        self.get(ls.automaton) == ls.state
    }

    /// True when every listed local state currently holds.
    pub fn satisfies(&self, partial: &[LocalState]) -> bool {
        partial.iter().all(|&ls| self.contains(ls))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn set(&mut self, automaton: usize, state: usize) {
        self.0[automaton] = state as u8;
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("network declares no automata")]
    NoAutomata,
    #[error("automaton name is empty")]
    EmptyName,
    #[error("automaton {0:?} declared twice")]
    DuplicateAutomaton(String),
    #[error("automaton {0:?} declares no local states")]
    NoStates(String),
    #[error("automaton {0:?} declares more than {MAX_LOCAL_STATES} local states")]
    TooManyStates(String),
    #[error("automaton {0:?} repeats state label {1}")]
    DuplicateStateLabel(String, u32),
    #[error("automaton index {0} out of range")]
    UnknownAutomaton(usize),
    #[error("state ordinal {state} out of range for automaton {automaton:?}")]
    StateOutOfRange { automaton: String, state: usize },
    #[error("transition origin and destination coincide")]
    SelfLoop,
    #[error("condition tests the transition's own automaton")]
    ConditionOwnAutomaton,
    #[error("condition lists automaton {0:?} twice")]
    DuplicateConditionAutomaton(String),
    #[error("assignment lists automaton {0:?} twice")]
    DuplicateAssignment(String),
}

/// An immutable automata network.
#[derive(Clone, Debug)]
pub struct Network {
    names: Vec<String>,
    labels: Vec<Vec<u32>>,
    label_index: Vec<HashMap<u32, usize>>,
    transitions: Vec<Transition>,
    by_automaton: Vec<Vec<TransitionId>>,
}

impl Network {
    pub fn automaton_count(&self) -> usize {
        self.names.len()
    }

    pub fn automaton_name(&self, automaton: usize) -> &str {
        &self.names[automaton]
    }

    pub fn automaton_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of local states of one automaton.
    pub fn state_count(&self, automaton: usize) -> usize {
        self.labels[automaton].len()
    }

    /// Declared labels of one automaton's local states, in ordinal order.
    pub fn state_labels(&self, automaton: usize) -> &[u32] {
        &self.labels[automaton]
    }

    /// Declared label of a local state.
    pub fn state_label(&self, ls: LocalState) -> u32 {
        self.labels[ls.automaton][ls.state]
    }

    /// Ordinal of the local state declared with `label`, if any.
    pub fn state_by_label(&self, automaton: usize, label: u32) -> Option<usize> {
        self.label_index[automaton].get(&label).copied()
    }

    /// Total number of local states across all automata.
    pub fn local_state_count(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn transition(&self, id: TransitionId) -> &Transition {
        &self.transitions[id.0]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (TransitionId, &Transition)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .map(|(i, t)| (TransitionId(i), t))
    }

    /// Transitions moving one automaton, in declaration order.
    pub fn automaton_transitions(&self, automaton: usize) -> &[TransitionId] {
        &self.by_automaton[automaton]
    }

    /// State with every automaton at its first declared local state.
    pub fn zero_state(&self) -> GlobalState {
        GlobalState(vec![0u8; self.names.len()].into_boxed_slice())
    }

    /// Zero state overridden by the given assignments.
    pub fn state_with(&self, assignments: &[LocalState]) -> Result<GlobalState, ModelError> {
        let mut s = self.zero_state();
        let mut seen = vec![false; self.names.len()];
        for &ls in assignments {
            if ls.automaton >= self.names.len() {
                return Err(ModelError::UnknownAutomaton(ls.automaton));
            }
            if ls.state >= self.state_count(ls.automaton) {
                return Err(ModelError::StateOutOfRange {
                    automaton: self.names[ls.automaton].clone(),
                    state: ls.state,
                });
            }
            if seen[ls.automaton] {
                return Err(ModelError::DuplicateAssignment(
                    self.names[ls.automaton].clone(),
                ));
            }
            seen[ls.automaton] = true;
            s.set(ls.automaton, ls.state);
        }
        Ok(s)
    }

    /// Copy of the network keeping only the transitions the filter accepts.
    /// Automata and local states are preserved unchanged.
    pub fn restrict(&self, mut keep: impl FnMut(TransitionId, &Transition) -> bool) -> Network {
        let mut out = Network {
            names: self.names.clone(),
            labels: self.labels.clone(),
            label_index: self.label_index.clone(),
            transitions: Vec::new(),
            by_automaton: vec![Vec::new(); self.names.len()],
        };
        for (id, t) in self.transitions() {
            if keep(id, t) {
                let new_id = TransitionId(out.transitions.len());
                out.by_automaton[t.automaton()].push(new_id);
                out.transitions.push(t.clone());
            }
        }
        out
    }
}

/// Incremental, validating constructor for [`Network`].
#[derive(Default)]
pub struct NetworkBuilder {
    names: Vec<String>,
    name_index: HashMap<String, usize>,
    labels: Vec<Vec<u32>>,
    label_index: Vec<HashMap<u32, usize>>,
    transitions: Vec<Transition>,
    seen: HashSet<Transition>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn automaton_index(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn automaton_name(&self, automaton: usize) -> &str {
        &self.names[automaton]
    }

    pub fn state_by_label(&self, automaton: usize, label: u32) -> Option<usize> {
        self.label_index[automaton].get(&label).copied()
    }

    /// Declares an automaton with the given state labels; returns its index.
    pub fn automaton(&mut self, name: &str, labels: &[u32]) -> Result<usize, ModelError> {
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if self.name_index.contains_key(name) {
            return Err(ModelError::DuplicateAutomaton(name.to_owned()));
        }
        if labels.is_empty() {
            return Err(ModelError::NoStates(name.to_owned()));
        }
        if labels.len() > MAX_LOCAL_STATES {
            return Err(ModelError::TooManyStates(name.to_owned()));
        }
        let mut index = HashMap::new();
        for (ordinal, &label) in labels.iter().enumerate() {
            if index.insert(label, ordinal).is_some() {
                return Err(ModelError::DuplicateStateLabel(name.to_owned(), label));
            }
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.name_index.insert(name.to_owned(), id);
        self.labels.push(labels.to_vec());
        self.label_index.push(index);
        Ok(id)
    }

    /// Adds a transition by ordinals. Exact duplicates collapse silently;
    /// the transition table is a set.
    pub fn transition(
        &mut self,
        automaton: usize,
        origin: usize,
        destination: usize,
        condition: &[LocalState],
    ) -> Result<(), ModelError> {
        self.check_state(automaton, origin)?;
        self.check_state(automaton, destination)?;
        if origin == destination {
            return Err(ModelError::SelfLoop);
        }
        let mut cond = condition.to_vec();
        cond.sort();
        for (i, &ls) in cond.iter().enumerate() {
            self.check_state(ls.automaton, ls.state)?;
            if ls.automaton == automaton {
                return Err(ModelError::ConditionOwnAutomaton);
            }
            if i > 0 && cond[i - 1].automaton == ls.automaton {
                return Err(ModelError::DuplicateConditionAutomaton(
                    self.names[ls.automaton].clone(),
                ));
            }
        }
        let t = Transition {
            origin: LocalState::new(automaton, origin),
            destination: LocalState::new(automaton, destination),
            condition: cond.into_boxed_slice(),
        };
        if self.seen.insert(t.clone()) {
            self.transitions.push(t);
        }
        Ok(())
    }

    fn check_state(&self, automaton: usize, state: usize) -> Result<(), ModelError> {
        if automaton >= self.names.len() {
            return Err(ModelError::UnknownAutomaton(automaton));
        }
        if state >= self.labels[automaton].len() {
            return Err(ModelError::StateOutOfRange {
                automaton: self.names[automaton].clone(),
                state,
            });
        }
        Ok(())
    }

    pub fn build(self) -> Result<Network, ModelError> {
        if self.names.is_empty() {
            return Err(ModelError::NoAutomata);
        }
        let mut by_automaton = vec![Vec::new(); self.names.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            by_automaton[t.automaton()].push(TransitionId(i));
        }
        Ok(Network {
            names: self.names,
            labels: self.labels,
            label_index: self.label_index,
            transitions: self.transitions,
            by_automaton,
        })
    }
}

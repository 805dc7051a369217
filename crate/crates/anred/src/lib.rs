//! Goal-driven reduction of automata networks.
//!
//! A network is a set of finite automata that move one local transition at
//! a time, each move optionally conditioned on the current local states of
//! other automata. Given an initial global state and a local state to reach,
//! this crate removes the transitions that cannot take part in any minimal
//! run to that goal, without losing reachability of the goal itself.
//!
//! The pruning is driven by objectives (single-automaton state changes) and
//! their acyclic local paths; a least fixed point over objectives filters
//! out paths whose conditions can never be met from the initial state. The
//! result is checked against explicit-state reachability in [`reach`] and a
//! brute-force minimal-trace enumerator in [`oracle`].
//!
//! The `examples/` directory is the guided tour; each file is runnable with
//! `cargo run --example <name>`:
//!
//! - `parse_and_inspect`: read a model, walk its automata and transitions
//! - `reduce_for_goal`: prune a network for one goal, with and without the
//!   feasibility filter
//! - `reachability_witness`: find a shortest run to a goal under both
//!   semantics
//! - `state_counts`: count reachable states before and after pruning
//! - `cut_sets`: check that a set of local states is unavoidable
//! - `local_causality`: objectives, local paths, and the validity fixpoint
//! - `sequential_goal`: reach several local states in a fixed order
//! - `minimal_traces`: enumerate minimal goal-reaching runs by brute force
//! - `random_sweep`: cross-validate pruning against the oracles on random
//!   networks
//!
//! The same functionality is exposed by the `anred` binary; see the README.

pub mod causality;
pub mod cli;
pub mod format;
pub mod network;
pub mod oracle;
pub mod reach;
pub mod reduction;
pub mod report;
pub mod semantics;

pub use causality::{
    compute_valid, compute_valid_ordered, filtered_local_paths, filtered_path_transitions,
    local_paths, IterationOrder, LocalPath, Objective, ValidityOracle, ValidityPredicate,
};
pub use format::{parse_initial_state, parse_model, parse_objective, serialize_model, ParseError};
pub use network::{
    GlobalState, LocalState, ModelError, Network, NetworkBuilder, Transition, TransitionId,
};
pub use oracle::{
    enumerate_minimal_traces, is_minimal, minimality, random_network, sweep, EnumerationAborted,
    GeneratorError, GeneratorParams, MinimalityError, MinimalityVerdict, SweepConfig,
    SweepOutcome,
};
pub use reach::{
    count_states, explore, reachable, verify_cut_set, CutSetError, Exploration, Limits,
    ReachResult, Semantics, StateCount, Verdict,
};
pub use reduction::{
    encode_sequential_goal, prune_isolated, reduce, reduce_with, ReductionResult, SchedulingOrder,
    SequentialGoalError,
};
pub use report::Report;
pub use semantics::{InvalidTrace, NotPlayable, Step, Trace};

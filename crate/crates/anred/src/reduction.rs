//! Goal-driven pruning of a network's transitions.
//!
//! Starting from the single objective "take the goal automaton from its
//! initial state to the goal state", a worklist closure collects every
//! objective that could contribute to some minimal run: conditions read by
//! kept transitions pull in their own initial-rooted objectives, and kept
//! transitions of an automaton chain onto the targets that automaton is
//! already asked to reach. The transitions kept are exactly those on
//! admitted local paths of collected objectives; everything else provably
//! takes part in no minimal run to the goal.
//!
//! The closure is a least fixed point: processing order never changes the
//! outcome, which [`SchedulingOrder`] exists to exercise. Pruning the
//! network never loses goal reachability, and a run can optionally drop
//! automata the pruned network no longer mentions.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::causality::{
    compute_valid, filtered_path_transitions, Objective, ObjectiveIndex, ValidityPredicate,
};
use crate::network::{GlobalState, LocalState, ModelError, Network, NetworkBuilder, TransitionId};

/// Which worklist to drain first when both hold work. The result is the
/// same either way; the knob exists so tests can prove that.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum SchedulingOrder {
    #[default]
    ObjectivesFirst,
    TransitionsFirst,
    Alternating,
}

/// Outcome of pruning one network for one goal.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    objectives: Vec<Objective>,
    kept: BTreeSet<TransitionId>,
    reduced: Network,
    trivially_satisfied: bool,
    statically_refuted: bool,
}

impl ReductionResult {
    /// The collected objectives, sorted.
    pub fn objectives(&self) -> &[Objective] {
        &self.objectives
    }

    /// Ids of the surviving transitions, relative to the input network.
    pub fn kept(&self) -> &BTreeSet<TransitionId> {
        &self.kept
    }

    /// The input network restricted to the kept transitions. Automata and
    /// local states are preserved so state counts compare like for like.
    pub fn reduced(&self) -> &Network {
        &self.reduced
    }

    /// The goal already held in the initial state; nothing was kept
    /// because nothing needs to move.
    pub fn trivially_satisfied(&self) -> bool {
        self.trivially_satisfied
    }

    /// Nothing was kept although the goal does not hold initially: the
    /// goal is provably unreachable.
    pub fn statically_refuted(&self) -> bool {
        self.statically_refuted
    }
}

/// Prunes `net` for reaching `goal` from `initial`. With `filter` set the
/// feasibility fixed point discards local paths whose conditions cannot be
/// met; without it every local path counts, which keeps more transitions
/// but needs no fixed point.
pub fn reduce(net: &Network, initial: &GlobalState, goal: LocalState, filter: bool) -> ReductionResult {
    if filter {
        let oracle = compute_valid(net, initial);
        reduce_with(net, initial, goal, Some(&oracle), SchedulingOrder::default())
    } else {
        reduce_with(net, initial, goal, None, SchedulingOrder::default())
    }
}

/// Same pruning with an explicit feasibility judgement (`None` keeps every
/// local path) and an explicit drain order.
pub fn reduce_with(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    validity: Option<&dyn ValidityPredicate>,
    order: SchedulingOrder,
) -> ReductionResult {
    let index = ObjectiveIndex::new(net);
    let mut in_objectives = vec![false; index.len()];
    let mut in_kept = vec![false; net.transition_count()];
    let mut pending_objectives: VecDeque<Objective> = VecDeque::new();
    let mut pending_transitions: VecDeque<TransitionId> = VecDeque::new();

    // Rule-three bookkeeping per automaton: which target states some
    // collected objective asks for, and which kept transitions have been
    // processed. Pairing happens once per pair: at objective insertion
    // against processed transitions, and at transition processing against
    // inserted targets.
    let mut targets: Vec<Vec<bool>> = (0..net.automaton_count())
        .map(|a| vec![false; net.state_count(a)])
        .collect();
    let mut processed: Vec<Vec<TransitionId>> = vec![Vec::new(); net.automaton_count()];

    let seed = Objective::new(initial.local_state(goal.automaton), goal)
        .expect("goal state is rooted in its own automaton");

    let insert_objective = |o: Objective,
                                in_objectives: &mut Vec<bool>,
                                pending_objectives: &mut VecDeque<Objective>,
                                targets: &mut Vec<Vec<bool>>,
                                processed: &Vec<Vec<TransitionId>>,
                                later: &mut Vec<Objective>| {
        let oi = index.index(o);
        if in_objectives[oi] {
            return;
        }
        in_objectives[oi] = true;
        pending_objectives.push_back(o);
        let a = o.automaton();
        let target = o.to().state;
        if !targets[a][target] {
            targets[a][target] = true;
            for &t in &processed[a] {
                let from = net.transition(t).destination();
                later.push(Objective::new(from, o.to()).expect("same automaton"));
            }
        }
    };

    // Chained insertions discovered while inserting; drained in the loop.
    let mut later: Vec<Objective> = Vec::new();
    insert_objective(
        seed,
        &mut in_objectives,
        &mut pending_objectives,
        &mut targets,
        &processed,
        &mut later,
    );

    let mut flip = false;
    loop {
        while let Some(o) = later.pop() {
            insert_objective(
                o,
                &mut in_objectives,
                &mut pending_objectives,
                &mut targets,
                &processed,
                &mut later,
            );
        }
        let take_objective = match order {
            SchedulingOrder::ObjectivesFirst => !pending_objectives.is_empty(),
            SchedulingOrder::TransitionsFirst => pending_transitions.is_empty(),
            SchedulingOrder::Alternating => {
                flip = !flip;
                if flip {
                    !pending_objectives.is_empty()
                } else {
                    pending_transitions.is_empty()
                }
            }
        };
        if take_objective {
            let Some(o) = pending_objectives.pop_front() else {
                if pending_transitions.is_empty() {
                    break;
                }
                continue;
            };
            for t in filtered_path_transitions(net, initial, validity, o) {
                if !in_kept[t.0] {
                    in_kept[t.0] = true;
                    pending_transitions.push_back(t);
                }
            }
        } else {
            let Some(t) = pending_transitions.pop_front() else {
                if pending_objectives.is_empty() {
                    break;
                }
                continue;
            };
            let tr = net.transition(t);
            for &g in tr.condition() {
                insert_objective(
                    Objective::new(initial.local_state(g.automaton), g).expect("rooted"),
                    &mut in_objectives,
                    &mut pending_objectives,
                    &mut targets,
                    &processed,
                    &mut later,
                );
            }
            let a = tr.automaton();
            for (state, asked) in targets[a].iter().enumerate() {
                if *asked {
                    later.push(
                        Objective::new(tr.destination(), LocalState::new(a, state))
                            .expect("same automaton"),
                    );
                }
            }
            processed[a].push(t);
        }
    }

    let objectives: Vec<Objective> = (0..index.len())
        .filter(|&i| in_objectives[i])
        .map(|i| index.objective(i))
        .collect();
    let kept: BTreeSet<TransitionId> =
        (0..net.transition_count()).filter(|&i| in_kept[i]).map(TransitionId).collect();
    let reduced = net.restrict(|id, _| in_kept[id.0]);
    let trivially_satisfied = initial.contains(goal);
    let statically_refuted = !trivially_satisfied && kept.is_empty();

    ReductionResult {
        objectives,
        kept,
        reduced,
        trivially_satisfied,
        statically_refuted,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequentialGoalError {
    #[error("no stages given")]
    NoStages,
    #[error("stage {0} is empty")]
    EmptyStage(usize),
    #[error("stage {stage} names state {state} of unknown automaton {automaton}")]
    UnknownLocalState {
        stage: usize,
        automaton: usize,
        state: usize,
    },
    #[error("the network already has an automaton named {0:?}")]
    NameCollision(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Name of the automaton added by [`encode_sequential_goal`].
pub const STAGE_AUTOMATON: &str = "_goal";

/// Extends the network with one fresh automaton that advances a stage each
/// time the corresponding assignment holds, in order. Reaching its last
/// state means every stage held at some point, in sequence; returns that
/// state as the goal.
pub fn encode_sequential_goal(
    net: &Network,
    stages: &[Vec<LocalState>],
) -> Result<(Network, LocalState), SequentialGoalError> {
    if stages.is_empty() {
        return Err(SequentialGoalError::NoStages);
    }
    for (k, stage) in stages.iter().enumerate() {
        if stage.is_empty() {
            return Err(SequentialGoalError::EmptyStage(k));
        }
        for &ls in stage {
            if ls.automaton >= net.automaton_count()
                || ls.state >= net.state_count(ls.automaton)
            {
                return Err(SequentialGoalError::UnknownLocalState {
                    stage: k,
                    automaton: ls.automaton,
                    state: ls.state,
                });
            }
        }
    }
    if net.automaton_index(STAGE_AUTOMATON).is_some() {
        return Err(SequentialGoalError::NameCollision(STAGE_AUTOMATON.to_owned()));
    }

    let mut builder = NetworkBuilder::new();
    for a in 0..net.automaton_count() {
        builder.automaton(net.automaton_name(a), net.state_labels(a))?;
    }
    let stage_labels: Vec<u32> = (0..=stages.len() as u32).collect();
    let stage_automaton = builder.automaton(STAGE_AUTOMATON, &stage_labels)?;
    for (_, t) in net.transitions() {
        builder.transition(
            t.automaton(),
            t.origin().state,
            t.destination().state,
            t.condition(),
        )?;
    }
    for (k, stage) in stages.iter().enumerate() {
        builder.transition(stage_automaton, k, k + 1, stage)?;
    }
    let extended = builder.build()?;
    Ok((extended, LocalState::new(stage_automaton, stages.len())))
}

/// Drops every automaton that has no transitions, appears in no condition,
/// and is not protected. Remaining automata are renumbered densely; names
/// and labels are preserved. Fails only if nothing at all would remain.
pub fn prune_isolated(net: &Network, protect: &[LocalState]) -> Result<Network, ModelError> {
    let mut keep = vec![false; net.automaton_count()];
    for &ls in protect {
        keep[ls.automaton] = true;
    }
    for (_, t) in net.transitions() {
        keep[t.automaton()] = true;
        for &g in t.condition() {
            keep[g.automaton] = true;
        }
    }

    let mut remap = vec![usize::MAX; net.automaton_count()];
    let mut builder = NetworkBuilder::new();
    for a in 0..net.automaton_count() {
        if keep[a] {
            remap[a] = builder.automaton(net.automaton_name(a), net.state_labels(a))?;
        }
    }
    for (_, t) in net.transitions() {
        let condition: Vec<LocalState> = t
            .condition()
            .iter()
            .map(|&g| LocalState::new(remap[g.automaton], g.state))
            .collect();
        builder.transition(
            remap[t.automaton()],
            t.origin().state,
            t.destination().state,
            &condition,
        )?;
    }
    builder.build()
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

    fn tid(net: &Network, name: &str, from: u32, to: u32) -> TransitionId {
        let a = net.automaton_index(name).unwrap();
        net.transitions()
            .find(|(_, t)| {
                t.automaton() == a
                    && net.state_label(t.origin()) == from
                    && net.state_label(t.destination()) == to
            })
            .map(|(id, _)| id)
            .unwrap()
    }

    fn objective(net: &Network, name: &str, from: u32, to: u32) -> Objective {
        Objective::new(ls(net, name, from), ls(net, name, to)).unwrap()
    }

    #[test]
    fn filtered_reduction_keeps_the_climb_only() {
        let net = demo();
        let r = reduce(&net, &net.zero_state(), ls(&net, "c", 2), true);
        let expected: BTreeSet<TransitionId> = [
            tid(&net, "a", 0, 1),
            tid(&net, "c", 0, 1),
            tid(&net, "c", 1, 2),
        ]
        .into_iter()
        .collect();
        assert_eq!(r.kept(), &expected);
        assert_eq!(r.reduced().transition_count(), 3);
        assert_eq!(r.reduced().automaton_count(), net.automaton_count());
        assert!(!r.trivially_satisfied());
        assert!(!r.statically_refuted());

        let objs = r.objectives();
        assert_eq!(objs.len(), 6);
        assert!(objs.contains(&objective(&net, "c", 0, 2)));
        assert!(objs.contains(&objective(&net, "c", 1, 2)));
        assert!(objs.contains(&objective(&net, "a", 0, 1)));
        assert!(!objs.contains(&objective(&net, "b", 0, 1)));
        assert!(!objs.contains(&objective(&net, "d", 0, 1)));
    }

    #[test]
    fn unfiltered_reduction_keeps_everything_here() {
        let net = demo();
        let r = reduce(&net, &net.zero_state(), ls(&net, "c", 2), false);
        assert_eq!(r.kept().len(), net.transition_count());
        // The frozen-guard route survives without the filter, and it drags
        // the whole b machinery back in.
        assert!(r.kept().contains(&tid(&net, "c", 0, 2)));
        assert!(r.kept().contains(&tid(&net, "b", 0, 1)));
        assert!(r.objectives().contains(&objective(&net, "d", 0, 1)));
    }

    #[test]
    fn filter_never_keeps_more() {
        let net = demo();
        for goal in [ls(&net, "c", 2), ls(&net, "b", 1), ls(&net, "a", 1)] {
            let on = reduce(&net, &net.zero_state(), goal, true);
            let off = reduce(&net, &net.zero_state(), goal, false);
            assert!(on.kept().is_subset(off.kept()));
        }
    }

    #[test]
    fn goal_already_holding_keeps_nothing() {
        let net = demo();
        let r = reduce(&net, &net.zero_state(), ls(&net, "a", 0), true);
        assert!(r.trivially_satisfied());
        assert!(!r.statically_refuted());
        assert!(r.kept().is_empty());
        assert_eq!(r.reduced().transition_count(), 0);
    }

    #[test]
    fn frozen_goal_is_refuted() {
        let net = demo();
        let r = reduce(&net, &net.zero_state(), ls(&net, "d", 1), true);
        assert!(r.statically_refuted());
        assert!(!r.trivially_satisfied());
        assert!(r.kept().is_empty());
        // Even without the filter there is no local path for d.
        let r = reduce(&net, &net.zero_state(), ls(&net, "d", 1), false);
        assert!(r.statically_refuted());
    }

    #[test]
    fn drain_order_does_not_matter() {
        let net = demo();
        let zero = net.zero_state();
        let oracle = compute_valid(&net, &zero);
        for goal in [ls(&net, "c", 2), ls(&net, "c", 1), ls(&net, "b", 1)] {
            for validity in [Some(&oracle as &dyn ValidityPredicate), None] {
                let a = reduce_with(&net, &zero, goal, validity, SchedulingOrder::ObjectivesFirst);
                let b = reduce_with(&net, &zero, goal, validity, SchedulingOrder::TransitionsFirst);
                let c = reduce_with(&net, &zero, goal, validity, SchedulingOrder::Alternating);
                assert_eq!(a.kept(), b.kept());
                assert_eq!(a.kept(), c.kept());
                assert_eq!(a.objectives(), b.objectives());
                assert_eq!(a.objectives(), c.objectives());
            }
        }
    }

    #[test]
    fn sequential_goal_builds_the_stage_automaton() {
        let net = demo();
        let stages = vec![
            vec![ls(&net, "a", 1), ls(&net, "b", 1)],
            vec![ls(&net, "c", 1)],
        ];
        let (extended, goal) = encode_sequential_goal(&net, &stages).unwrap();
        assert_eq!(extended.automaton_count(), net.automaton_count() + 1);
        let g = extended.automaton_index(STAGE_AUTOMATON).unwrap();
        assert_eq!(goal, LocalState::new(g, 2));
        assert_eq!(extended.state_count(g), 3);
        assert_eq!(extended.automaton_transitions(g).len(), 2);
        let first = extended.transition(extended.automaton_transitions(g)[0]);
        assert_eq!(first.condition().len(), 2);
        assert_eq!(
            extended.transition_count(),
            net.transition_count() + stages.len()
        );
    }

    #[test]
    fn sequential_goal_rejects_bad_stages() {
        let net = demo();
        assert!(matches!(
            encode_sequential_goal(&net, &[]),
            Err(SequentialGoalError::NoStages)
        ));
        assert!(matches!(
            encode_sequential_goal(&net, &[vec![]]),
            Err(SequentialGoalError::EmptyStage(0))
        ));
        assert!(matches!(
            encode_sequential_goal(&net, &[vec![LocalState::new(9, 0)]]),
            Err(SequentialGoalError::UnknownLocalState { stage: 0, .. })
        ));
        let (extended, _) =
            encode_sequential_goal(&net, &[vec![ls(&net, "c", 2)]]).unwrap();
        assert!(matches!(
            encode_sequential_goal(&extended, &[vec![ls(&net, "c", 2)]]),
            Err(SequentialGoalError::NameCollision(_))
        ));
    }

    #[test]
    fn pruning_drops_unmentioned_automata() {
        let net = demo();
        let goal = ls(&net, "c", 2);
        let r = reduce(&net, &net.zero_state(), goal, true);
        let pruned = prune_isolated(r.reduced(), &[goal]).unwrap();
        // d has no kept transitions and no kept condition mentions it.
        assert_eq!(pruned.automaton_count(), 3);
        assert!(pruned.automaton_index("d").is_none());
        assert!(pruned.automaton_index("b").is_some());
        assert_eq!(pruned.transition_count(), 3);
    }
}

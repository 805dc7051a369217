//! Brute-force ground truth for the rest of the crate.
//!
//! Everything here trades time for trustworthiness: minimality of a trace
//! is decided by exhaustive search over embedded candidates, minimal
//! traces are enumerated outright, and networks are drawn at random from
//! a seeded generator. The [`sweep`] harness wires these into
//! cross-checks of the pruning pipeline: every enumerated minimal trace
//! must survive reduction, reachability verdicts must agree before and
//! after pruning, and the feasibility fixed point must never refuse an
//! objective some run realizes.

use std::collections::{BTreeSet, HashMap};
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::causality::{
    compute_valid, compute_valid_ordered, IterationOrder, Objective, ValidityPredicate,
};
use crate::format::{parse_model, serialize_model};
use crate::network::{
    GlobalState, LocalState, Network, NetworkBuilder, TransitionId, MAX_LOCAL_STATES,
};
use crate::reach::{enabled, explore, for_each_successor, reachable, Limits, Semantics, Verdict};
use crate::reduction::{reduce_with, SchedulingOrder};
use crate::semantics::{InvalidTrace, Step, Trace};

/// How a trace fares under the two readings of "nothing can be dropped".
///
/// A candidate witness is any goal-reaching trace, no longer than the
/// judged one, whose steps map order-preservingly into subsets of the
/// judged trace's steps. The strict reading disqualifies the trace as
/// soon as any distinct witness exists; the lenient one only when some
/// witness makes do with a proper subset of the transitions.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct MinimalityVerdict {
    /// No distinct witness embeds at all, not even one rearranging the
    /// same transitions over fewer steps.
    pub strict: bool,
    /// No embedded witness loses a transition. Implied by `strict`.
    pub lenient: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinimalityError {
    #[error(transparent)]
    Invalid(#[from] InvalidTrace),
    #[error("the trace does not reach the goal")]
    GoalNotReached,
}

/// Judges `trace` under both readings by exhaustive witness search.
/// Exponential in trace length and step width; keep traces short.
pub fn minimality(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    trace: &Trace,
) -> Result<MinimalityVerdict, MinimalityError> {
    net.validate_trace(initial, trace)?;
    if !reaches_goal(net, initial, goal, trace) {
        return Err(MinimalityError::GoalNotReached);
    }
    let mut search = WitnessSearch {
        net,
        steps: trace.steps(),
        goal,
        trace_transitions: trace.transitions(),
        strict_broken: false,
        lenient_broken: false,
    };
    let mut chosen = BTreeSet::new();
    search.at(0, initial, false, &mut chosen);
    Ok(MinimalityVerdict {
        strict: !search.strict_broken,
        lenient: !search.lenient_broken,
    })
}

/// The lenient verdict of [`minimality`]: the reading under which pruning
/// guarantees are stated and checked.
pub fn is_minimal(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    trace: &Trace,
) -> Result<bool, MinimalityError> {
    Ok(minimality(net, initial, goal, trace)?.lenient)
}

fn reaches_goal(net: &Network, initial: &GlobalState, goal: LocalState, trace: &Trace) -> bool {
    initial.contains(goal) || trace.post(net).contains(&goal)
}

/// Depth-first search over witness candidates. At each step of the judged
/// trace a witness may skip it or play any non-empty playable subset;
/// witnesses that keep going after first covering the goal add nothing,
/// so branches stop there.
struct WitnessSearch<'a> {
    net: &'a Network,
    steps: &'a [Step],
    goal: LocalState,
    trace_transitions: BTreeSet<TransitionId>,
    strict_broken: bool,
    lenient_broken: bool,
}

impl WitnessSearch<'_> {
    fn done(&self) -> bool {
        self.strict_broken && self.lenient_broken
    }

    fn at(&mut self, i: usize, s: &GlobalState, differs: bool, chosen: &mut BTreeSet<TransitionId>) {
        if self.done() {
            return;
        }
        if s.contains(self.goal) {
            // The witness stops here; it differs from the judged trace if
            // any choice differed or steps remain unconsumed.
            if differs || i != self.steps.len() {
                self.strict_broken = true;
                if chosen.len() < self.trace_transitions.len() {
                    self.lenient_broken = true;
                }
            }
            return;
        }
        if i == self.steps.len() {
            return;
        }
        self.at(i + 1, s, true, chosen);
        if self.done() {
            return;
        }
        let ids = self.steps[i].transitions();
        for mask in 1u32..(1 << ids.len()) {
            let subset: Vec<TransitionId> = ids
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &id)| id)
                .collect();
            let full = subset.len() == ids.len();
            let step = Step::new(self.net, subset).expect("subset of a step");
            if !self.net.playable(s, &step) {
                continue;
            }
            let next = self.net.apply(s, &step).expect("playable step applies");
            let added: Vec<TransitionId> = step
                .transitions()
                .iter()
                .filter(|&&t| chosen.insert(t))
                .copied()
                .collect();
            self.at(i + 1, &next, differs || !full, chosen);
            for t in added {
                chosen.remove(&t);
            }
            if self.done() {
                return;
            }
        }
    }
}

/// The enumeration walked more nodes than allowed and gave up.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("trace enumeration exceeded its budget of {budget} nodes")]
pub struct EnumerationAborted {
    pub budget: usize,
}

/// Enumerates the minimal goal-reaching traces of length at most
/// `max_len`, by exhaustive depth-first search followed by a minimality
/// check of every candidate. `budget` caps the search tree size.
///
/// Candidates stop at their first goal-covering state. A minimal trace
/// that keeps moving afterwards (possible when the extra moves reuse
/// transitions already played) is not listed, but its transition set
/// always equals that of a listed one, so consumers of kept-transition
/// unions lose nothing. The result is sorted and deterministic.
pub fn enumerate_minimal_traces(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    semantics: Semantics,
    max_len: usize,
    budget: usize,
) -> Result<Vec<Trace>, EnumerationAborted> {
    let mut candidates = Vec::new();
    let mut prefix = Vec::new();
    let mut nodes = 0usize;
    if !collect(
        net,
        initial,
        goal,
        semantics,
        max_len,
        budget,
        &mut nodes,
        &mut prefix,
        &mut candidates,
    ) {
        return Err(EnumerationAborted { budget });
    }
    candidates.retain(|t| {
        minimality(net, initial, goal, t)
            .expect("enumerated traces are valid and goal-reaching")
            .lenient
    });
    candidates.sort();
    Ok(candidates)
}

#[allow(clippy::too_many_arguments)]
fn collect(
    net: &Network,
    s: &GlobalState,
    goal: LocalState,
    semantics: Semantics,
    depth_left: usize,
    budget: usize,
    nodes: &mut usize,
    prefix: &mut Vec<Step>,
    out: &mut Vec<Trace>,
) -> bool {
    *nodes += 1;
    if *nodes > budget {
        return false;
    }
    if s.contains(goal) {
        out.push(Trace::from_steps(prefix.clone()));
        return true;
    }
    if depth_left == 0 {
        return true;
    }
    let mut successors: Vec<(Step, GlobalState)> = Vec::new();
    for_each_successor(net, s, semantics, |step, next| {
        successors.push((step, next));
        true
    });
    for (step, next) in successors {
        prefix.push(step);
        let ok = collect(net, &next, goal, semantics, depth_left - 1, budget, nodes, prefix, out);
        prefix.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Shape of the networks [`random_network`] draws. All ranges are
/// inclusive. The transition count is per automaton and clamps to the
/// number of distinct ordered state pairs the drawn automaton offers;
/// the condition size is per transition and clamps to the number of
/// other automata.
#[derive(Clone, Debug)]
pub struct GeneratorParams {
    pub automata: RangeInclusive<usize>,
    pub states: RangeInclusive<usize>,
    pub transitions: RangeInclusive<usize>,
    pub conditions: RangeInclusive<usize>,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            automata: 2..=4,
            states: 2..=3,
            transitions: 0..=5,
            conditions: 0..=2,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("range for {0} is empty")]
    EmptyRange(&'static str),
    #[error("at least one automaton is required")]
    NoAutomata,
    #[error("automata need at least one state")]
    NoStates,
    #[error("state counts above {MAX_LOCAL_STATES} are not supported")]
    TooManyStates,
    #[error("no {states}-state automaton can host {demand} transitions over {capacity} distinct ordered pairs")]
    Infeasible {
        states: usize,
        demand: usize,
        capacity: usize,
    },
}

/// Draws a well-formed network, deterministically for a fixed seed.
pub fn random_network(params: &GeneratorParams) -> Result<Network, GeneratorError> {
    for (range, name) in [
        (&params.automata, "automata"),
        (&params.states, "states"),
        (&params.transitions, "transitions"),
        (&params.conditions, "conditions"),
    ] {
        if range.is_empty() {
            return Err(GeneratorError::EmptyRange(name));
        }
    }
    if *params.automata.start() == 0 {
        return Err(GeneratorError::NoAutomata);
    }
    if *params.states.start() == 0 {
        return Err(GeneratorError::NoStates);
    }
    if *params.states.end() > MAX_LOCAL_STATES {
        return Err(GeneratorError::TooManyStates);
    }
    let roomiest = *params.states.end();
    let capacity = roomiest * (roomiest - 1);
    if *params.transitions.start() > capacity {
        return Err(GeneratorError::Infeasible {
            states: roomiest,
            demand: *params.transitions.start(),
            capacity,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = rng.gen_range(params.automata.clone());
    let mut builder = NetworkBuilder::new();
    let mut state_counts = Vec::with_capacity(n);
    for a in 0..n {
        let k = rng.gen_range(params.states.clone());
        let labels: Vec<u32> = (0..k as u32).collect();
        builder
            .automaton(&format!("v{a}"), &labels)
            .expect("fresh name and non-empty labels");
        state_counts.push(k);
    }
    for a in 0..n {
        let k = state_counts[a];
        let pairs = k * (k - 1);
        let lo = (*params.transitions.start()).min(pairs);
        let hi = (*params.transitions.end()).min(pairs);
        let count = rng.gen_range(lo..=hi);
        for p in rand::seq::index::sample(&mut rng, pairs, count) {
            let origin = p / (k - 1);
            let rest = p % (k - 1);
            let destination = rest + usize::from(rest >= origin);
            let cond_hi = (*params.conditions.end()).min(n - 1);
            let cond_lo = (*params.conditions.start()).min(cond_hi);
            let picks = rng.gen_range(cond_lo..=cond_hi);
            let condition: Vec<LocalState> = rand::seq::index::sample(&mut rng, n - 1, picks)
                .iter()
                .map(|x| {
                    let b = x + usize::from(x >= a);
                    LocalState::new(b, rng.gen_range(0..state_counts[b]))
                })
                .collect();
            builder
                .transition(a, origin, destination, &condition)
                .expect("generated transition is well formed");
        }
    }
    Ok(builder.build().expect("at least one automaton"))
}

/// Workload of one cross-validation sweep.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Network shape; the seed field is overridden per draw.
    pub params: GeneratorParams,
    pub seeds: RangeInclusive<u64>,
    /// Goals tried per network, beyond one trivially satisfied goal.
    pub goals_per_network: usize,
    /// Trace-length caps for enumeration under each discipline.
    pub max_len_single: usize,
    pub max_len_step: usize,
    /// Node budget per enumeration; overruns are counted, not fatal.
    pub budget: usize,
    /// Draw the initial state per seed instead of all-zeroes.
    pub random_initial: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            params: GeneratorParams::default(),
            seeds: 1..=100,
            goals_per_network: 4,
            max_len_single: 6,
            max_len_step: 4,
            budget: 200_000,
            random_initial: true,
        }
    }
}

/// Tally of one sweep. Every violated cross-check lands in `violations`
/// with its seed and goal; a healthy pipeline produces none.
#[derive(Clone, Debug, Default)]
pub struct SweepOutcome {
    pub networks: usize,
    pub instances: usize,
    pub checks: usize,
    pub violation_count: usize,
    /// First hundred violation descriptions.
    pub violations: Vec<String>,
    /// Enumerations that blew their node budget and were skipped.
    pub skipped_enumerations: usize,
}

impl SweepOutcome {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < 100 {
                self.violations.push(describe());
            }
        }
    }
}

/// Runs every cross-check over a seeded family of random networks:
/// transitions of enumerated minimal traces survive pruning under both
/// filter settings, reachability verdicts and state spaces are preserved,
/// the feasibility fixed point is sound and order-independent, pruning is
/// order-independent and dominated by its unfiltered variant, and models
/// round-trip through their text form.
pub fn sweep(config: &SweepConfig) -> Result<SweepOutcome, GeneratorError> {
    let mut out = SweepOutcome::default();
    let limits = Limits {
        max_states: 500_000,
        max_depth: None,
    };
    for seed in config.seeds.clone() {
        let mut params = config.params.clone();
        params.seed = seed;
        let net = random_network(&params)?;
        out.networks += 1;

        let round = serialize_model(&net);
        let reparsed = parse_model(&round).expect("serialized model parses");
        out.check(serialize_model(&reparsed) == round, || {
            format!("seed {seed}: model does not round-trip through text")
        });

        let initial = draw_initial(&net, seed, config.random_initial);
        for goal in pick_goals(&net, &initial, config.goals_per_network) {
            out.instances += 1;
            check_instance(&net, &initial, goal, seed, config, limits, &mut out);
        }
    }
    Ok(out)
}

fn draw_initial(net: &Network, seed: u64, random: bool) -> GlobalState {
    let mut initial = net.zero_state();
    if random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        for a in 0..net.automaton_count() {
            initial.set(a, rng.gen_range(0..net.state_count(a)));
        }
    }
    initial
}

/// One trivially satisfied goal, then non-initial local states round-robin
/// across automata.
fn pick_goals(net: &Network, initial: &GlobalState, wanted: usize) -> Vec<LocalState> {
    let mut goals = vec![initial.local_state(0)];
    let widest = (0..net.automaton_count())
        .map(|a| net.state_count(a))
        .max()
        .unwrap_or(1);
    for offset in 1..widest {
        for a in 0..net.automaton_count() {
            if goals.len() > wanted {
                return goals;
            }
            let k = net.state_count(a);
            if offset < k {
                goals.push(LocalState::new(a, (initial.get(a) + offset) % k));
            }
        }
    }
    goals
}

#[allow(clippy::too_many_arguments)]
fn check_instance(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    seed: u64,
    config: &SweepConfig,
    limits: Limits,
    out: &mut SweepOutcome,
) {
    let ctx = |net: &Network| {
        format!(
            "seed {seed} goal {}={}",
            net.automaton_name(goal.automaton),
            net.state_label(goal)
        )
    };
    let ctx = ctx(net);

    // The fixed point itself, identically under every drain order.
    let validity = compute_valid(net, initial);
    for order in [IterationOrder::Stack, IterationOrder::Sorted] {
        let again = compute_valid_ordered(net, initial, order);
        let same = validity
            .objectives()
            .zip(again.objectives())
            .all(|((o1, v1), (o2, v2))| o1 == o2 && v1 == v2);
        out.check(same, || format!("{ctx}: validity differs under {order:?} order"));
    }

    // Pruning under both filter settings and all drain orders.
    let on = reduce_with(net, initial, goal, Some(&validity), SchedulingOrder::default());
    let off = reduce_with(net, initial, goal, None, SchedulingOrder::default());
    out.check(on.kept().is_subset(off.kept()), || {
        format!("{ctx}: filtered pruning kept a transition the unfiltered one dropped")
    });
    for order in [SchedulingOrder::TransitionsFirst, SchedulingOrder::Alternating] {
        let v: Option<&dyn ValidityPredicate> = Some(&validity);
        for (base, validity) in [(&on, v), (&off, None)] {
            let again = reduce_with(net, initial, goal, validity, order);
            out.check(
                again.kept() == base.kept() && again.objectives() == base.objectives(),
                || format!("{ctx}: pruning differs under {order:?} order"),
            );
        }
    }

    // Reachability is preserved by pruning, under both disciplines, and
    // pruned state spaces shrink or stay.
    for semantics in [Semantics::Async, Semantics::Step] {
        let original = reachable(net, initial, &[goal], semantics, limits, false);
        for (label, reduced) in [("filtered", &on), ("unfiltered", &off)] {
            let pruned = reachable(reduced.reduced(), initial, &[goal], semantics, limits, false);
            out.check(pruned.verdict == original.verdict, || {
                format!(
                    "{ctx}: {label} pruning changed the {semantics:?} verdict {:?} -> {:?}",
                    original.verdict, pruned.verdict
                )
            });
            let full_space = explore(net, initial, semantics, limits);
            let pruned_space = explore(reduced.reduced(), initial, semantics, limits);
            out.check(
                pruned_space.states.is_subset(&full_space.states),
                || format!("{ctx}: {label} pruning reached a new state under {semantics:?}"),
            );
        }
        if on.statically_refuted() {
            out.check(original.verdict == Verdict::Unreachable, || {
                format!("{ctx}: refuted statically but {semantics:?} search reaches the goal")
            });
        }
    }

    // The fixed point never refuses an objective some run realizes.
    check_validity_soundness(net, initial, &validity, limits, &ctx, out);

    // Minimal traces survive pruning; single-move minimality carries over
    // to the step discipline; fattening a step breaks minimality.
    let mut single_minimal: Option<Vec<Trace>> = None;
    let mut step_minimal: Option<Vec<Trace>> = None;
    for (semantics, max_len) in [
        (Semantics::Async, config.max_len_single),
        (Semantics::Step, config.max_len_step),
    ] {
        match enumerate_minimal_traces(net, initial, goal, semantics, max_len, config.budget) {
            Err(_) => out.skipped_enumerations += 1,
            Ok(minimal) => {
                for trace in &minimal {
                    let tr = trace.transitions();
                    out.check(tr.iter().all(|t| on.kept().contains(t)), || {
                        format!("{ctx}: filtered pruning dropped a minimal trace ({semantics:?})")
                    });
                    out.check(tr.iter().all(|t| off.kept().contains(t)), || {
                        format!("{ctx}: unfiltered pruning dropped a minimal trace ({semantics:?})")
                    });
                }
                check_fattening(net, initial, goal, &minimal, &ctx, out);
                match semantics {
                    Semantics::Async => single_minimal = Some(minimal),
                    Semantics::Step => step_minimal = Some(minimal),
                }
            }
        }
    }
    if let (Some(single), Some(step)) = (&single_minimal, &step_minimal) {
        let step_set: BTreeSet<&Trace> = step.iter().collect();
        for trace in single {
            if trace.len() <= config.max_len_step {
                out.check(step_set.contains(trace), || {
                    format!("{ctx}: a minimal single-move trace is not step-minimal")
                });
            }
        }
    }
}

/// Confirms by exhaustive search that refused objectives are realized by
/// no run: whenever some reachable state has automaton `a` at `i` and a
/// continuation reaches `a` at `j`, the objective i to j must be admitted.
fn check_validity_soundness(
    net: &Network,
    initial: &GlobalState,
    validity: &dyn ValidityPredicate,
    limits: Limits,
    ctx: &str,
    out: &mut SweepOutcome,
) {
    let space = explore(net, initial, Semantics::Step, limits);
    if !space.exact {
        return;
    }
    let states: Vec<GlobalState> = space.states.into_iter().collect();
    let index: HashMap<&GlobalState, usize> =
        states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
    for (i, s) in states.iter().enumerate() {
        for_each_successor(net, s, Semantics::Step, |_, next| {
            successors[i].push(index[&next]);
            true
        });
    }
    for (start, s) in states.iter().enumerate() {
        let mut seen = vec![false; states.len()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &successors[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        for a in 0..net.automaton_count() {
            let from = s.local_state(a);
            let mut realizable = vec![false; net.state_count(a)];
            for (y, reached) in seen.iter().enumerate() {
                if *reached {
                    realizable[states[y].get(a)] = true;
                }
            }
            for (to, realized) in realizable.iter().enumerate() {
                if !realized {
                    continue;
                }
                let o = Objective::new(from, LocalState::new(a, to)).expect("same automaton");
                out.check(validity.is_valid(o), || {
                    format!(
                        "{ctx}: a run realizes {}={}..{} but the fixed point refuses it",
                        net.automaton_name(a),
                        net.state_label(from),
                        net.state_label(LocalState::new(a, to)),
                    )
                });
            }
        }
    }
}

/// Widening any step of a minimal trace with one more enabled transition,
/// when the result is still a valid goal-reaching trace, must destroy
/// strict minimality; and lenient minimality too when the added transition
/// is new to the trace.
fn check_fattening(
    net: &Network,
    initial: &GlobalState,
    goal: LocalState,
    minimal: &[Trace],
    ctx: &str,
    out: &mut SweepOutcome,
) {
    for trace in minimal.iter().take(3) {
        let mut state = initial.clone();
        for (m, step) in trace.steps().iter().enumerate() {
            let moved: BTreeSet<usize> = step
                .transitions()
                .iter()
                .map(|&t| net.transition(t).automaton())
                .collect();
            for t in enabled(net, &state) {
                if step.contains(t) || moved.contains(&net.transition(t).automaton()) {
                    continue;
                }
                let mut ids: Vec<TransitionId> = step.transitions().to_vec();
                ids.push(t);
                let wide = Step::new(net, ids).expect("one move per automaton");
                let mut steps = trace.steps().to_vec();
                steps[m] = wide;
                let fat = Trace::from_steps(steps);
                if net.validate_trace(initial, &fat).is_err() || !reaches_goal(net, initial, goal, &fat)
                {
                    continue;
                }
                let verdict = minimality(net, initial, goal, &fat).expect("validated");
                out.check(!verdict.strict, || {
                    format!("{ctx}: widening a step left a trace strictly minimal")
                });
                if !trace.transitions().contains(&t) {
                    out.check(!verdict.lenient, || {
                        format!("{ctx}: widening with a fresh transition left a trace minimal")
                    });
                }
            }
            state = net.apply(&state, step).expect("minimal trace plays");
        }
    }
}

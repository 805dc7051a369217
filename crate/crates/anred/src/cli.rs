//! Command-line driver.
//!
//! Every subcommand loads its inputs, runs one library entry point, prints
//! a short human summary on standard error, and writes a machine-readable
//! key/value report to standard output exactly once. Exit status encodes
//! the outcome: 0 for a definitive verdict, 1 when an asserted property
//! does not hold, 2 for usage or input errors, 3 when a budget ran out
//! before a verdict was reached.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read as _, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::causality::{compute_valid, local_paths};
use crate::format;
use crate::network::{GlobalState, LocalState, Network};
use crate::oracle::{sweep, SweepConfig};
use crate::reach::{count_states, reachable, verify_cut_set, CutSetError, Limits, Semantics, Verdict};
use crate::reduction::{encode_sequential_goal, prune_isolated, reduce};
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "anred",
    version,
    about = "Goal-driven reduction and analysis of automata networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Remove transitions that cannot serve a reachability goal
    Reduce(ReduceArgs),
    /// Decide whether a goal is reachable from the initial state
    Reach(ReachArgs),
    /// Count the reachable states
    Count(CountArgs),
    /// Check that a set of local states blocks every route to a goal
    Cutset(CutsetArgs),
    /// List the acyclic local paths realizing an objective
    Paths(PathsArgs),
    /// Show which objectives the validity fixed point admits
    Valid(ValidArgs),
    /// Cross-check reduction and reachability on random networks
    Oracle(OracleArgs),
    /// Print model dimensions
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct ModelOpts {
    /// Model file; `-` reads standard input
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
    /// Initial state, e.g. '"a"=0,"b"=1'; unlisted automata take their
    /// first declared state
    #[arg(long, default_value = "")]
    initial: String,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    model: ModelOpts,
    /// Goal as a partial state, e.g. '"c"=2'; repeat the flag for a
    /// sequence of stages to traverse in order
    #[arg(long = "goal", required = true)]
    goal: Vec<String>,
    /// Keep every local path, skipping the feasibility filter
    #[arg(long)]
    no_filter: bool,
    /// Drop automata left without transitions, unless the goal needs them
    #[arg(long)]
    prune_isolated: bool,
    /// Write the reduced model to this file
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReachArgs {
    #[command(flatten)]
    model: ModelOpts,
    /// Goal as a partial state, e.g. '"c"=2'
    #[arg(long)]
    goal: String,
    /// Stepping discipline
    #[arg(long, value_enum, default_value_t = SemanticsArg::Async)]
    semantics: SemanticsArg,
    /// Most states to visit before giving up
    #[arg(long, default_value_t = Limits::default().max_states)]
    max_states: usize,
    /// Also report a shortest goal-reaching trace
    #[arg(long)]
    witness: bool,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    model: ModelOpts,
    /// Most states to visit before giving up
    #[arg(long, default_value_t = Limits::default().max_states)]
    max_states: usize,
}

#[derive(Args, Debug)]
struct CutsetArgs {
    #[command(flatten)]
    model: ModelOpts,
    /// Goal local state, e.g. '"c"=2'
    #[arg(long)]
    goal: String,
    /// Candidate cut: local states whose joint removal should sever the
    /// goal, e.g. '"a"=1,"b"=1'
    #[arg(long)]
    cut: String,
    /// Most states to visit before giving up
    #[arg(long, default_value_t = Limits::default().max_states)]
    max_states: usize,
}

#[derive(Args, Debug)]
struct PathsArgs {
    /// Model file; `-` reads standard input
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
    /// Objective, e.g. '"a"=0..2'
    #[arg(long)]
    objective: String,
}

#[derive(Args, Debug)]
struct ValidArgs {
    #[command(flatten)]
    model: ModelOpts,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// How many generator seeds to sweep, starting from 1
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    /// Longest minimal trace the enumeration searches for
    #[arg(long, default_value_t = 6)]
    max_len: usize,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// Model file; `-` reads standard input
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum SemanticsArg {
    /// One transition per step
    Async,
    /// Any nonempty compatible set of transitions per step
    Step,
}

impl SemanticsArg {
    fn name(self) -> &'static str {
        match self {
            Self::Async => "async",
            Self::Step => "step",
        }
    }
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Async => Semantics::Async,
            SemanticsArg::Step => Semantics::Step,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{name}: {source}")]
    Read { name: String, source: io::Error },
    #[error("{name}: {source}")]
    Write { name: String, source: io::Error },
    #[error("{name}: {source}")]
    Parse {
        name: String,
        source: format::ParseError,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Parses `args` and runs one subcommand, writing the machine report to
/// `stdout` and diagnostics plus a human summary to `stderr`. Returns the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            let rendered = e.render();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                2
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match dispatch(cli.command, stderr) {
        Ok((report, status)) => {
            if report.write_to(stdout).is_err() {
                return 2;
            }
            status
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    match command {
        Command::Reduce(args) => cmd_reduce(args, stderr),
        Command::Reach(args) => cmd_reach(args, stderr),
        Command::Count(args) => cmd_count(args, stderr),
        Command::Cutset(args) => cmd_cutset(args, stderr),
        Command::Paths(args) => cmd_paths(args, stderr),
        Command::Valid(args) => cmd_valid(args, stderr),
        Command::Oracle(args) => cmd_oracle(args, stderr),
        Command::Stats(args) => cmd_stats(args, stderr),
    }
}

fn cmd_reduce(args: ReduceArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("reduce");
    let model = load_model(&args.model.model)?;
    describe_model(&mut report, &model);
    let initial = parse_initial(&model.net, &args.model.initial)?;
    let mut stages = Vec::new();
    for text in &args.goal {
        stages.push(parse_flag(&model.net, text, "--goal", format::parse_partial_state)?);
    }

    // A single one-state goal reduces the model as given; anything else
    // tracks progress through the stages with one extra automaton.
    let direct = stages.len() == 1 && stages[0].len() == 1;
    let work = Instant::now();
    let (work_net, work_initial, goal) = if direct {
        (model.net.clone(), initial.clone(), stages[0][0])
    } else {
        let (extended, goal) = encode_sequential_goal(&model.net, &stages)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        let mut extended_initial = extended.zero_state();
        for a in 0..model.net.automaton_count() {
            extended_initial.set(a, initial.get(a));
        }
        (extended, extended_initial, goal)
    };
    let result = reduce(&work_net, &work_initial, goal, !args.no_filter);
    let mut output = result.reduced().clone();
    if args.prune_isolated {
        output = prune_isolated(&output, &[goal]).map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    let run_ms = work.elapsed().as_millis();

    report.push("reduce.goal", args.goal.join(" ; "));
    report.push("reduce.filter", !args.no_filter);
    report.push("reduce.sequential", !direct);
    report.push("reduce.input_transitions", work_net.transition_count());
    report.push("reduce.kept", result.kept().len());
    report.push(
        "reduce.removed",
        work_net.transition_count() - result.kept().len(),
    );
    report.push("reduce.objectives", result.objectives().len());
    report.push("reduce.trivially_satisfied", result.trivially_satisfied());
    report.push("reduce.statically_refuted", result.statically_refuted());
    if let Some(path) = &args.output {
        fs::write(path, format::serialize_model(&output)).map_err(|e| CliError::Write {
            name: path.display().to_string(),
            source: e,
        })?;
        report.push("output.file", path.display());
    }
    report.push("output.automata", output.automaton_count());
    report.push("output.transitions", output.transition_count());
    let verdict = if result.trivially_satisfied() {
        "trivial"
    } else if result.statically_refuted() {
        "refuted"
    } else {
        "reduced"
    };
    report.push("verdict", verdict);
    report.push("time.run_ms", run_ms);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "kept {} of {} transitions for goal {}",
        result.kept().len(),
        work_net.transition_count(),
        args.goal.join(" then ")
    );
    if result.trivially_satisfied() {
        let _ = writeln!(stderr, "the goal already holds in the initial state");
    }
    if result.statically_refuted() {
        let _ = writeln!(stderr, "the goal is statically refuted: no transition can serve it");
    }
    if let Some(path) = &args.output {
        let _ = writeln!(stderr, "wrote {}", path.display());
    }
    Ok((report, 0))
}

fn cmd_reach(args: ReachArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("reach");
    let model = load_model(&args.model.model)?;
    describe_model(&mut report, &model);
    let initial = parse_initial(&model.net, &args.model.initial)?;
    let goal = parse_flag(&model.net, &args.goal, "--goal", format::parse_partial_state)?;
    if goal.is_empty() {
        return Err(CliError::Invalid(
            "--goal must name at least one local state".to_owned(),
        ));
    }
    let limits = Limits {
        max_states: args.max_states,
        max_depth: None,
    };
    let work = Instant::now();
    let result = reachable(
        &model.net,
        &initial,
        &goal,
        args.semantics.into(),
        limits,
        args.witness,
    );
    let run_ms = work.elapsed().as_millis();

    report.push("reach.goal", format::render_partial_state(&model.net, &goal));
    report.push("reach.semantics", args.semantics.name());
    report.push("reach.states_explored", result.states_explored);
    report.push("reach.frontier_peak", result.frontier_peak);
    if let Some(witness) = &result.witness {
        report.push("witness.length", witness.len());
        for (i, step) in witness.steps().iter().enumerate() {
            report.push(&format!("witness.step.{i}"), format::render_step(&model.net, step));
        }
    }
    report.push("verdict", verdict_str(result.verdict));
    report.push("time.run_ms", run_ms);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "{} is {} ({} states explored)",
        format::render_partial_state(&model.net, &goal),
        verdict_str(result.verdict),
        result.states_explored
    );
    if let Some(witness) = &result.witness {
        let _ = writeln!(
            stderr,
            "witness ({} steps): {}",
            witness.len(),
            format::render_trace(&model.net, witness)
        );
    }
    let status = match result.verdict {
        Verdict::Reachable | Verdict::Unreachable => 0,
        Verdict::Inconclusive => 3,
    };
    Ok((report, status))
}

fn cmd_count(args: CountArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("count");
    let model = load_model(&args.model.model)?;
    describe_model(&mut report, &model);
    let initial = parse_initial(&model.net, &args.model.initial)?;
    let limits = Limits {
        max_states: args.max_states,
        max_depth: None,
    };
    let work = Instant::now();
    let count = count_states(&model.net, &initial, limits);
    let run_ms = work.elapsed().as_millis();

    report.push("count.states", count.states);
    report.push("count.exact", count.exact);
    report.push("verdict", if count.exact { "exact" } else { "truncated" });
    report.push("time.run_ms", run_ms);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "{}{} reachable states",
        if count.exact { "" } else { "at least " },
        count.states
    );
    Ok((report, if count.exact { 0 } else { 3 }))
}

fn cmd_cutset(args: CutsetArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("cutset");
    let model = load_model(&args.model.model)?;
    describe_model(&mut report, &model);
    let initial = parse_initial(&model.net, &args.model.initial)?;
    let goal = parse_single_local(&model.net, &args.goal, "--goal")?;
    let cut = parse_flag(&model.net, &args.cut, "--cut", format::parse_local_states)?;
    if cut.is_empty() {
        return Err(CliError::Invalid(
            "--cut must name at least one local state".to_owned(),
        ));
    }
    let limits = Limits {
        max_states: args.max_states,
        max_depth: None,
    };
    report.push("cutset.goal", format::render_local_state(&model.net, goal));
    report.push("cutset.cut", format::render_partial_state(&model.net, &cut));
    let work = Instant::now();
    let holds = match verify_cut_set(&model.net, &initial, goal, &cut, limits) {
        Ok(holds) => holds,
        Err(CutSetError::Inconclusive) => {
            report.push("verdict", "inconclusive");
            report.push("time.run_ms", work.elapsed().as_millis());
            report.push("time.total_ms", total.elapsed().as_millis());
            let _ = writeln!(stderr, "state budget exhausted before a verdict");
            return Ok((report, 3));
        }
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    let run_ms = work.elapsed().as_millis();

    report.push("cutset.holds", holds);
    report.push("verdict", if holds { "holds" } else { "fails" });
    report.push("time.run_ms", run_ms);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "cut {{{}}} {} every route to {}",
        format::render_partial_state(&model.net, &cut),
        if holds { "blocks" } else { "does not block" },
        format::render_local_state(&model.net, goal)
    );
    Ok((report, if holds { 0 } else { 1 }))
}

fn cmd_paths(args: PathsArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("paths");
    let model = load_model(&args.model)?;
    describe_model(&mut report, &model);
    let objective = parse_flag(&model.net, &args.objective, "--objective", format::parse_objective)?;
    let work = Instant::now();
    let paths = local_paths(&model.net, objective);
    let run_ms = work.elapsed().as_millis();

    report.push("paths.objective", format::render_objective(&model.net, objective));
    report.push("paths.count", paths.len());
    for (i, path) in paths.iter().enumerate() {
        let rendered = if path.is_empty() {
            "<empty>".to_owned()
        } else {
            path.transitions()
                .iter()
                .map(|&t| format::render_transition(&model.net, model.net.transition(t)))
                .collect::<Vec<_>>()
                .join(" ; ")
        };
        report.push(&format!("paths.{i}"), rendered);
    }
    report.push("time.run_ms", run_ms);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "{} acyclic local paths realize {}",
        paths.len(),
        format::render_objective(&model.net, objective)
    );
    Ok((report, 0))
}

fn cmd_valid(args: ValidArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("valid");
    let model = load_model(&args.model.model)?;
    describe_model(&mut report, &model);
    let initial = parse_initial(&model.net, &args.model.initial)?;
    let work = Instant::now();
    let oracle = compute_valid(&model.net, &initial);
    let run_ms = work.elapsed().as_millis();

    report.push("valid.objectives", oracle.objective_count());
    report.push("valid.admitted", oracle.admitted_count());
    // The refused objectives rooted at the initial state are the ones the
    // reduction will refuse to rely on; list them.
    let mut refused = 0usize;
    for (objective, ok) in oracle.objectives() {
        let rooted = initial.local_state(objective.automaton()) == objective.from();
        if !ok && rooted {
            report.push(
                &format!("valid.refused.{refused}"),
                format::render_objective(&model.net, objective),
            );
            refused += 1;
        }
    }
    report.push("valid.refused", refused);
    report.push("time.run_ms", run_ms);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "{} of {} objectives admitted; {} rooted at the initial state refused",
        oracle.admitted_count(),
        oracle.objective_count(),
        refused
    );
    Ok((report, 0))
}

fn cmd_oracle(args: OracleArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("oracle");
    let config = SweepConfig {
        seeds: 1..=args.seeds,
        max_len_single: args.max_len,
        max_len_step: args.max_len.min(4),
        ..SweepConfig::default()
    };
    report.push("oracle.seeds", args.seeds);
    report.push("oracle.max_len", args.max_len);
    let work = Instant::now();
    let outcome = sweep(&config).map_err(|e| CliError::Invalid(e.to_string()))?;
    let run_ms = work.elapsed().as_millis();

    report.push("oracle.networks", outcome.networks);
    report.push("oracle.instances", outcome.instances);
    report.push("oracle.checks", outcome.checks);
    report.push("oracle.violations", outcome.violation_count);
    report.push("oracle.skipped_enumerations", outcome.skipped_enumerations);
    for (i, violation) in outcome.violations.iter().take(20).enumerate() {
        report.push(&format!("oracle.violation.{i}"), violation);
    }
    let pass = outcome.violation_count == 0;
    report.push("verdict", if pass { "pass" } else { "fail" });
    report.push("time.run_ms", run_ms);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "{} checks over {} goal instances on {} networks: {} violations",
        outcome.checks, outcome.instances, outcome.networks, outcome.violation_count
    );
    Ok((report, if pass { 0 } else { 1 }))
}

fn cmd_stats(args: StatsArgs, stderr: &mut dyn Write) -> Result<(Report, i32), CliError> {
    let total = Instant::now();
    let mut report = Report::new("stats");
    let model = load_model(&args.model)?;
    describe_model(&mut report, &model);
    let net = &model.net;
    let conditions: usize = net.transitions().map(|(_, t)| t.condition().len()).sum();
    let largest = (0..net.automaton_count())
        .map(|a| net.state_count(a))
        .max()
        .unwrap_or(0);

    report.push("stats.automata", net.automaton_count());
    report.push("stats.local_states", net.local_state_count());
    report.push("stats.transitions", net.transition_count());
    report.push("stats.conditions", conditions);
    report.push("stats.largest_automaton", largest);
    report.push("time.total_ms", total.elapsed().as_millis());

    let _ = writeln!(
        stderr,
        "{} automata, {} local states, {} transitions, {} conditions",
        net.automaton_count(),
        net.local_state_count(),
        net.transition_count(),
        conditions
    );
    Ok((report, 0))
}

struct LoadedModel {
    net: Network,
    name: String,
    sha256: String,
}

fn load_model(path: &Path) -> Result<LoadedModel, CliError> {
    let (name, text) = if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Read {
                name: "<stdin>".to_owned(),
                source: e,
            })?;
        ("<stdin>".to_owned(), text)
    } else {
        let name = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| CliError::Read {
            name: name.clone(),
            source: e,
        })?;
        (name, text)
    };
    let net = format::parse_model(&text).map_err(|e| CliError::Parse {
        name: name.clone(),
        source: e,
    })?;
    let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(LoadedModel { net, name, sha256 })
}

fn describe_model(report: &mut Report, model: &LoadedModel) {
    report.push("model.file", &model.name);
    report.push("model.sha256", &model.sha256);
    report.push("model.automata", model.net.automaton_count());
    report.push("model.local_states", model.net.local_state_count());
    report.push("model.transitions", model.net.transition_count());
}

fn parse_initial(net: &Network, text: &str) -> Result<GlobalState, CliError> {
    format::parse_initial_state(net, text).map_err(|e| CliError::Parse {
        name: "--initial".to_owned(),
        source: e,
    })
}

fn parse_flag<T>(
    net: &Network,
    text: &str,
    flag: &str,
    parse: impl Fn(&Network, &str) -> Result<T, format::ParseError>,
) -> Result<T, CliError> {
    parse(net, text).map_err(|e| CliError::Parse {
        name: flag.to_owned(),
        source: e,
    })
}

fn parse_single_local(net: &Network, text: &str, flag: &str) -> Result<LocalState, CliError> {
    let states = parse_flag(net, text, flag, format::parse_partial_state)?;
    match states.as_slice() {
        [ls] => Ok(*ls),
        _ => Err(CliError::Invalid(format!(
            "{flag} must name exactly one local state"
        ))),
    }
}

fn verdict_str(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Reachable => "reachable",
        Verdict::Unreachable => "unreachable",
        Verdict::Inconclusive => "inconclusive",
    }
}

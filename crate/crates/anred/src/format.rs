//! Text format for networks, state assignments, and objectives.
//!
//! A model document is line oriented. `#` starts a comment running to the
//! end of the line, blank lines are skipped, and every remaining line is
//! either a state declaration or a transition:
//!
//! ```text
//! "a" [0, 1]
//! "a" 0 -> 1 when "b"=0 and "c"=2
//! ```
//!
//! Automaton names may contain any character except a double quote or a
//! newline. State labels are non-negative integers; they need not be
//! contiguous and are mapped to dense ordinals in declaration order.
//! Declarations and transitions may be interleaved.
//!
//! Assignments are written `"a"=0,"b"=1` and objectives `"a"=0..2`, both
//! over declared labels.

use std::fmt::Write as _;

use thiserror::Error;

use crate::causality::Objective;
use crate::network::{GlobalState, LocalState, ModelError, Network, NetworkBuilder, Transition};
use crate::semantics::{Step, Trace};

/// A parse or validation failure, located in the input text.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("name is never closed")]
    UnterminatedName,
    #[error("name is empty")]
    EmptyName,
    #[error("integer literal out of range")]
    IntOutOfRange,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unknown keyword {0:?}")]
    UnknownKeyword(String),
    #[error("no automata declared")]
    NoAutomata,
    #[error("unknown automaton {0:?}")]
    UnknownAutomaton(String),
    #[error("automaton {automaton:?} has no state labelled {label}")]
    UnknownState { automaton: String, label: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn err(line: usize, col: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Name(String),
    Int(u32),
    LBracket,
    RBracket,
    Comma,
    Arrow,
    Eq,
    DotDot,
    When,
    And,
}

impl Tok {
    fn describe(&self) -> &'static str {
        match self {
            Tok::Name(_) => "a quoted name",
            Tok::Int(_) => "an integer",
            Tok::LBracket => "'['",
            Tok::RBracket => "']'",
            Tok::Comma => "','",
            Tok::Arrow => "'->'",
            Tok::Eq => "'='",
            Tok::DotDot => "'..'",
            Tok::When => "'when'",
            Tok::And => "'and'",
        }
    }
}

/// Tokenizes one logical line; `#` outside quotes cuts the rest off.
fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(err(line_no, col, ParseErrorKind::UnterminatedName));
                }
                if j == start {
                    return Err(err(line_no, col, ParseErrorKind::EmptyName));
                }
                out.push((Tok::Name(chars[start..j].iter().collect()), col));
                i = j + 1;
            }
            '0'..='9' => {
                let mut j = i;
                let mut value: u64 = 0;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    value = value * 10 + chars[j].to_digit(10).unwrap() as u64;
                    if value > u32::MAX as u64 {
                        return Err(err(line_no, col, ParseErrorKind::IntOutOfRange));
                    }
                    j += 1;
                }
                out.push((Tok::Int(value as u32), col));
                i = j;
            }
            '[' => {
                out.push((Tok::LBracket, col));
                i += 1;
            }
            ']' => {
                out.push((Tok::RBracket, col));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, col));
                i += 1;
            }
            '=' => {
                out.push((Tok::Eq, col));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, col));
                i += 2;
            }
            '.' if chars.get(i + 1) == Some(&'.') => {
                out.push((Tok::DotDot, col));
                i += 2;
            }
            c if c.is_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_alphanumeric() {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                match word.as_str() {
                    "when" => out.push((Tok::When, col)),
                    "and" => out.push((Tok::And, col)),
                    _ => return Err(err(line_no, col, ParseErrorKind::UnknownKeyword(word))),
                }
                i = j;
            }
            c => return Err(err(line_no, col, ParseErrorKind::UnexpectedChar(c))),
        }
    }
    Ok(out)
}

/// Cursor over one tokenized line.
struct Line<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
}

impl<'a> Line<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |(_, c)| *c)
    }

    fn next(&mut self, what: &'static str) -> Result<&'a Tok, ParseError> {
        match self.toks.get(self.pos) {
            Some((t, _)) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(err(self.line, self.end_col(), ParseErrorKind::Expected(what))),
        }
    }

    fn end_col(&self) -> usize {
        self.toks.last().map_or(1, |(_, c)| *c + 1)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        let col = self.col();
        let got = self.next(tok.describe())?;
        if *got == tok {
            Ok(())
        } else {
            Err(err(self.line, col, ParseErrorKind::Expected(tok.describe())))
        }
    }

    fn name(&mut self) -> Result<(String, usize), ParseError> {
        let col = self.col();
        match self.next("a quoted name")? {
            Tok::Name(n) => Ok((n.clone(), col)),
            _ => Err(err(self.line, col, ParseErrorKind::Expected("a quoted name"))),
        }
    }

    fn int(&mut self) -> Result<(u32, usize), ParseError> {
        let col = self.col();
        match self.next("an integer")? {
            Tok::Int(v) => Ok((*v, col)),
            _ => Err(err(self.line, col, ParseErrorKind::Expected("an integer"))),
        }
    }

    fn done(&mut self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(err(self.line, self.col(), ParseErrorKind::Expected("end of line")))
        }
    }
}

/// Parses a model document into a network.
pub fn parse_model(text: &str) -> Result<Network, ParseError> {
    let mut builder = NetworkBuilder::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks = tokenize(raw, i + 1)?;
        if !toks.is_empty() {
            lines.push((i + 1, toks));
        }
    }

    // Declarations first so transitions may reference automata in any order.
    for (line_no, toks) in &lines {
        if toks.get(1).map(|(t, _)| t) != Some(&Tok::LBracket) {
            continue;
        }
        let mut cur = Line { toks, pos: 0, line: *line_no };
        let (name, name_col) = cur.name()?;
        cur.expect(Tok::LBracket)?;
        let mut labels = vec![cur.int()?.0];
        while cur.peek() == Some(&Tok::Comma) {
            cur.expect(Tok::Comma)?;
            labels.push(cur.int()?.0);
        }
        cur.expect(Tok::RBracket)?;
        cur.done()?;
        builder
            .automaton(&name, &labels)
            .map_err(|e| err(*line_no, name_col, e.into()))?;
    }

    for (line_no, toks) in &lines {
        if toks.get(1).map(|(t, _)| t) == Some(&Tok::LBracket) {
            continue;
        }
        let mut cur = Line { toks, pos: 0, line: *line_no };
        let (name, name_col) = cur.name()?;
        let automaton = builder
            .automaton_index(&name)
            .ok_or_else(|| err(*line_no, name_col, ParseErrorKind::UnknownAutomaton(name.clone())))?;
        let (origin_label, origin_col) = cur.int()?;
        let origin = resolve_state(&builder, automaton, origin_label)
            .map_err(|kind| err(*line_no, origin_col, kind))?;
        cur.expect(Tok::Arrow)?;
        let (dest_label, dest_col) = cur.int()?;
        let destination = resolve_state(&builder, automaton, dest_label)
            .map_err(|kind| err(*line_no, dest_col, kind))?;
        let mut condition = Vec::new();
        if cur.peek() == Some(&Tok::When) {
            cur.expect(Tok::When)?;
            condition.push(parse_cond(&builder, &mut cur)?);
            while cur.peek() == Some(&Tok::And) {
                cur.expect(Tok::And)?;
                condition.push(parse_cond(&builder, &mut cur)?);
            }
        }
        cur.done()?;
        builder
            .transition(automaton, origin, destination, &condition)
            .map_err(|e| err(*line_no, name_col, e.into()))?;
    }

    builder.build().map_err(|e| match e {
        ModelError::NoAutomata => err(1, 1, ParseErrorKind::NoAutomata),
        other => err(1, 1, other.into()),
    })
}

fn resolve_state(
    builder: &NetworkBuilder,
    automaton: usize,
    label: u32,
) -> Result<usize, ParseErrorKind> {
    builder
        .state_by_label(automaton, label)
        .ok_or(ParseErrorKind::UnknownState {
            automaton: builder.automaton_name(automaton).to_owned(),
            label,
        })
}

fn parse_cond(builder: &NetworkBuilder, cur: &mut Line<'_>) -> Result<LocalState, ParseError> {
    let (name, name_col) = cur.name()?;
    let automaton = builder
        .automaton_index(&name)
        .ok_or_else(|| err(cur.line, name_col, ParseErrorKind::UnknownAutomaton(name)))?;
    cur.expect(Tok::Eq)?;
    let (label, label_col) = cur.int()?;
    let state = resolve_state(builder, automaton, label).map_err(|k| err(cur.line, label_col, k))?;
    Ok(LocalState::new(automaton, state))
}

/// Parses `"a"=0,"b"=1` into distinct local states, sorted by automaton.
pub fn parse_partial_state(net: &Network, text: &str) -> Result<Vec<LocalState>, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Line { toks: &toks, pos: 0, line: 1 };
    let mut out: Vec<LocalState> = Vec::new();
    if cur.peek().is_some() {
        loop {
            let ls = parse_net_cond(net, &mut cur)?;
            if out.iter().any(|o| o.automaton == ls.automaton) {
                return Err(err(
                    1,
                    1,
                    ModelError::DuplicateAssignment(net.automaton_name(ls.automaton).to_owned())
                        .into(),
                ));
            }
            out.push(ls);
            if cur.peek() != Some(&Tok::Comma) {
                break;
            }
            cur.expect(Tok::Comma)?;
        }
    }
    cur.done()?;
    out.sort();
    Ok(out)
}

/// Parses `"a"=0,"a"=1,"b"=1` into a set of local states. Unlike a partial
/// state, several states of the same automaton are welcome; exact repeats
/// collapse.
pub fn parse_local_states(net: &Network, text: &str) -> Result<Vec<LocalState>, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Line { toks: &toks, pos: 0, line: 1 };
    let mut out: Vec<LocalState> = Vec::new();
    if cur.peek().is_some() {
        loop {
            out.push(parse_net_cond(net, &mut cur)?);
            if cur.peek() != Some(&Tok::Comma) {
                break;
            }
            cur.expect(Tok::Comma)?;
        }
    }
    cur.done()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Parses an assignment into a full state; unlisted automata take their
/// first declared state.
pub fn parse_initial_state(net: &Network, text: &str) -> Result<GlobalState, ParseError> {
    let partial = parse_partial_state(net, text)?;
    net.state_with(&partial).map_err(|e| err(1, 1, e.into()))
}

/// Parses `"a"=0..2` into an objective over one automaton.
pub fn parse_objective(net: &Network, text: &str) -> Result<Objective, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Line { toks: &toks, pos: 0, line: 1 };
    let (name, name_col) = cur.name()?;
    let automaton = net
        .automaton_index(&name)
        .ok_or_else(|| err(1, name_col, ParseErrorKind::UnknownAutomaton(name.clone())))?;
    cur.expect(Tok::Eq)?;
    let (from_label, from_col) = cur.int()?;
    let from = net
        .state_by_label(automaton, from_label)
        .ok_or_else(|| err(1, from_col, unknown_state(net, automaton, from_label)))?;
    cur.expect(Tok::DotDot)?;
    let (to_label, to_col) = cur.int()?;
    let to = net
        .state_by_label(automaton, to_label)
        .ok_or_else(|| err(1, to_col, unknown_state(net, automaton, to_label)))?;
    cur.done()?;
    Ok(Objective::new(
        LocalState::new(automaton, from),
        LocalState::new(automaton, to),
    )
    .expect("endpoints share an automaton"))
}

fn parse_net_cond(net: &Network, cur: &mut Line<'_>) -> Result<LocalState, ParseError> {
    let (name, name_col) = cur.name()?;
    let automaton = net
        .automaton_index(&name)
        .ok_or_else(|| err(cur.line, name_col, ParseErrorKind::UnknownAutomaton(name)))?;
    cur.expect(Tok::Eq)?;
    let (label, label_col) = cur.int()?;
    let state = net
        .state_by_label(automaton, label)
        .ok_or_else(|| err(cur.line, label_col, unknown_state(net, automaton, label)))?;
    Ok(LocalState::new(automaton, state))
}

fn unknown_state(net: &Network, automaton: usize, label: u32) -> ParseErrorKind {
    ParseErrorKind::UnknownState {
        automaton: net.automaton_name(automaton).to_owned(),
        label,
    }
}

/// Serializes a network: declarations in automaton order, then transitions
/// sorted by automaton, origin, destination, and condition.
pub fn serialize_model(net: &Network) -> String {
    let mut out = String::new();
    for a in 0..net.automaton_count() {
        let labels: Vec<String> = net.state_labels(a).iter().map(u32::to_string).collect();
        let _ = writeln!(out, "\"{}\" [{}]", net.automaton_name(a), labels.join(", "));
    }
    let mut transitions: Vec<&Transition> = net.transitions().map(|(_, t)| t).collect();
    transitions.sort();
    if !transitions.is_empty() {
        out.push('\n');
    }
    for t in transitions {
        let _ = writeln!(out, "{}", render_transition(net, t));
    }
    out
}

/// `"a" 0 -> 1 when "b"=0 and "c"=2`, using declared labels.
pub fn render_transition(net: &Network, t: &Transition) -> String {
    let mut s = format!(
        "\"{}\" {} -> {}",
        net.automaton_name(t.automaton()),
        net.state_label(t.origin()),
        net.state_label(t.destination()),
    );
    for (i, &ls) in t.condition().iter().enumerate() {
        let _ = write!(
            s,
            "{}{}",
            if i == 0 { " when " } else { " and " },
            render_local_state(net, ls)
        );
    }
    s
}

/// `"a"=1`, using the declared label.
pub fn render_local_state(net: &Network, ls: LocalState) -> String {
    format!(
        "\"{}\"={}",
        net.automaton_name(ls.automaton),
        net.state_label(ls)
    )
}

/// `"a"=0,"b"=1` over all automata, in automaton order.
pub fn render_state(net: &Network, s: &GlobalState) -> String {
    (0..net.automaton_count())
        .map(|a| render_local_state(net, s.local_state(a)))
        .collect::<Vec<_>>()
        .join(",")
}

/// `"a"=0,"b"=1` over the listed local states only.
pub fn render_partial_state(net: &Network, partial: &[LocalState]) -> String {
    partial
        .iter()
        .map(|&ls| render_local_state(net, ls))
        .collect::<Vec<_>>()
        .join(",")
}

/// `"a"=0..2`, using declared labels.
pub fn render_objective(net: &Network, o: Objective) -> String {
    format!(
        "\"{}\"={}..{}",
        net.automaton_name(o.automaton()),
        net.state_label(o.from()),
        net.state_label(o.to())
    )
}

/// `["a" 0 -> 1 when "b"=0, "c" 0 -> 1 when "a"=1]`.
pub fn render_step(net: &Network, step: &Step) -> String {
    let inner: Vec<String> = step
        .transitions()
        .iter()
        .map(|&id| render_transition(net, net.transition(id)))
        .collect();
    format!("[{}]", inner.join(", "))
}

/// The rendered steps in order, `::`-separated on one line.
pub fn render_trace(net: &Network, trace: &Trace) -> String {
    trace
        .steps()
        .iter()
        .map(|s| render_step(net, s))
        .collect::<Vec<_>>()
        .join(" :: ")
}

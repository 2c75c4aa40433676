//! Stack machines: definition, validation and single-step semantics.
//!
//! A machine has a one-way input tape and a working tape used in stack
//! mode. The working tape is always framed by a bottom marker `BOT` and a
//! top marker `TOP`; the head scans the symbol directly before its position.
//! Writes (`wstay`, `push`, `pop`) are only defined while the head scans the
//! topmost symbol. Reads (`left`, `rstay`, `right`) move the head inside the
//! fixed stack.

mod parse;
mod step;
mod transform;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::parse_machine;
pub(crate) use step::store_tape;
pub use step::{apply, initial_configuration, step, Configuration, Tape};
pub use transform::{all_states_final, partition_states};

pub type StateId = usize;
pub type InputSym = usize;
pub type StackSymId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MachineClass {
    #[serde(rename = "SA")]
    Sa,
    #[serde(rename = "NESA")]
    Nesa,
    #[serde(rename = "CSA")]
    Csa,
}

impl fmt::Display for MachineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineClass::Sa => "SA",
            MachineClass::Nesa => "NESA",
            MachineClass::Csa => "CSA",
        })
    }
}

/// Write or read mode of a state in a machine with partitioned states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Write,
    Read,
}

/// A working-tape symbol as seen by a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StackSym {
    Bottom,
    Top,
    Sym(StackSymId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    WStay,
    Push(StackSymId),
    Pop,
    Left,
    RStay,
    Right,
}

impl Action {
    pub fn is_write(self) -> bool {
        matches!(self, Action::WStay | Action::Push(_) | Action::Pop)
    }

    pub fn is_read(self) -> bool {
        !self.is_write()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: StateId,
    /// `None` is a λ-move.
    pub input: Option<InputSym>,
    pub stack: StackSym,
    pub to: StateId,
    pub action: Action,
}

/// A validated stack automaton. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackMachine {
    name: String,
    class: MachineClass,
    states: Vec<String>,
    input_alphabet: Vec<String>,
    stack_alphabet: Vec<String>,
    transitions: Vec<Transition>,
    initial: StateId,
    finals: BTreeSet<StateId>,
    partition: Option<Vec<Mode>>,
    by_state: Vec<Vec<usize>>,
}

/// Raw parts of a machine, checked by [`StackMachine::new`].
#[derive(Debug, Clone, Default)]
pub struct MachineParts {
    pub name: String,
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub stack_alphabet: Vec<String>,
    pub transitions: Vec<Transition>,
    pub initial: StateId,
    pub finals: BTreeSet<StateId>,
    pub partition: Option<Vec<Mode>>,
}

pub(crate) const RESERVED: &[&str] = &["_", "BOT", "TOP", "HEAD", "▷", "◁"];

impl StackMachine {
    /// Builds a machine and checks every invariant of its declared class.
    pub fn new(class: MachineClass, parts: MachineParts) -> Result<Self> {
        let m = Self::assemble(class, parts)?;
        m.check_class()?;
        Ok(m)
    }

    /// Builds a machine checking only structural well-formedness. Used for
    /// derived machines (e.g. a checking machine with final write states)
    /// that the analyses accept but the file format does not.
    pub(crate) fn new_relaxed(class: MachineClass, parts: MachineParts) -> Result<Self> {
        Self::assemble(class, parts)
    }

    fn assemble(class: MachineClass, parts: MachineParts) -> Result<Self> {
        let MachineParts {
            name,
            states,
            input_alphabet,
            stack_alphabet,
            transitions,
            initial,
            finals,
            partition,
        } = parts;
        if states.is_empty() {
            return Err(Error::InvalidMachine("no states".into()));
        }
        check_unique("state", &states)?;
        check_unique("input symbol", &input_alphabet)?;
        check_unique("stack symbol", &stack_alphabet)?;
        for s in &stack_alphabet {
            if RESERVED.contains(&s.as_str()) {
                return Err(Error::InvalidMachine(format!("reserved stack symbol `{s}`")));
            }
        }
        for s in &input_alphabet {
            if RESERVED.contains(&s.as_str()) {
                return Err(Error::InvalidMachine(format!("reserved input symbol `{s}`")));
            }
        }
        if initial >= states.len() {
            return Err(Error::InvalidMachine("initial state out of range".into()));
        }
        if let Some(&f) = finals.iter().find(|&&f| f >= states.len()) {
            return Err(Error::InvalidMachine(format!("final state {f} out of range")));
        }
        if let Some(p) = &partition {
            if p.len() != states.len() {
                return Err(Error::InvalidMachine("partition does not cover all states".into()));
            }
        }
        let mut by_state = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            if t.from >= states.len() || t.to >= states.len() {
                return Err(Error::InvalidMachine(format!(
                    "transition {i} references unknown state"
                )));
            }
            if matches!(t.input, Some(a) if a >= input_alphabet.len()) {
                return Err(Error::InvalidMachine(format!(
                    "transition {i} references unknown input symbol"
                )));
            }
            if matches!(t.stack, StackSym::Sym(x) if x >= stack_alphabet.len()) {
                return Err(Error::InvalidMachine(format!(
                    "transition {i} references unknown stack symbol"
                )));
            }
            match t.action {
                Action::Push(x) if x >= stack_alphabet.len() => {
                    return Err(Error::InvalidMachine(format!("transition {i} pushes unknown symbol")));
                }
                Action::Pop if t.stack == StackSym::Bottom => {
                    return Err(Error::InvalidMachine(format!("transition {i} pops the bottom marker")));
                }
                _ => {}
            }
            by_state[t.from].push(i);
        }
        Ok(StackMachine {
            name,
            class,
            states,
            input_alphabet,
            stack_alphabet,
            transitions,
            initial,
            finals,
            partition,
            by_state,
        })
    }

    fn check_class(&self) -> Result<()> {
        let violation = |message: String| Error::ClassViolation {
            class: self.class.to_string(),
            message,
        };
        if self.class == MachineClass::Sa {
            return Ok(());
        }
        for t in &self.transitions {
            if t.action == Action::Pop {
                return Err(violation(format!("pop in a non-erasing machine: {}", self.describe(t))));
            }
        }
        if self.class == MachineClass::Nesa {
            return Ok(());
        }
        let Some(partition) = &self.partition else {
            return Err(violation("checking stack automaton without a state partition".into()));
        };
        for &f in &self.finals {
            if partition[f] != Mode::Read {
                return Err(violation(format!("final state `{}` is a write state", self.states[f])));
            }
        }
        for t in &self.transitions {
            match partition[t.from] {
                Mode::Write if t.action.is_read() => {
                    return Err(violation(format!("read action from write state: {}", self.describe(t))));
                }
                Mode::Read if t.action.is_write() => {
                    return Err(violation(format!("write action from read state: {}", self.describe(t))));
                }
                Mode::Read if partition[t.to] == Mode::Write => {
                    return Err(violation(format!(
                        "read state leads to write state: {}",
                        self.describe(t)
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> MachineClass {
        self.class
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn input_alphabet(&self) -> &[String] {
        &self.input_alphabet
    }

    pub fn stack_alphabet(&self) -> &[String] {
        &self.stack_alphabet
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transitions leaving `q`, in declaration order.
    pub fn transitions_from(&self, q: StateId) -> impl Iterator<Item = &Transition> + '_ {
        self.by_state[q].iter().map(move |&i| &self.transitions[i])
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn partition(&self) -> Option<&[Mode]> {
        self.partition.as_deref()
    }

    pub fn mode(&self, q: StateId) -> Option<Mode> {
        self.partition.as_ref().map(|p| p[q])
    }

    pub fn is_read_state(&self, q: StateId) -> bool {
        self.mode(q) == Some(Mode::Read)
    }

    pub fn is_write_state(&self, q: StateId) -> bool {
        self.mode(q) == Some(Mode::Write)
    }

    pub fn is_non_erasing(&self) -> bool {
        self.transitions.iter().all(|t| t.action != Action::Pop)
    }

    /// A checking stack automaton in the structural sense: partitioned,
    /// non-erasing, with no read-to-write transitions. Final write states
    /// are tolerated here (they arise when every state is made final).
    pub fn is_checking(&self) -> bool {
        let Some(p) = &self.partition else { return false };
        self.class == MachineClass::Csa
            && self.is_non_erasing()
            && self.transitions.iter().all(|t| match p[t.from] {
                Mode::Write => t.action.is_write(),
                Mode::Read => t.action.is_read() && p[t.to] == Mode::Read,
            })
    }

    pub(crate) fn require_checking(&self) -> Result<()> {
        if self.is_checking() {
            Ok(())
        } else {
            Err(Error::NotCsa(format!("{} `{}`", self.class, self.name)))
        }
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn input_id(&self, name: &str) -> Result<InputSym> {
        self.input_alphabet
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn stack_id(&self, name: &str) -> Result<StackSymId> {
        self.stack_alphabet
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Parses an input word. When every input symbol is a single character
    /// the word may be written without separators (`111`); otherwise symbols
    /// are separated by whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Vec<InputSym>> {
        let text = text.trim();
        if text.is_empty() || text == "_" {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) || !self.single_char_input() {
            text.split_whitespace().map(|s| self.input_id(s)).collect()
        } else {
            text.chars().map(|c| self.input_id(&c.to_string())).collect()
        }
    }

    pub fn format_word(&self, word: &[InputSym]) -> String {
        if word.is_empty() {
            return String::new();
        }
        let sep = if self.single_char_input() { "" } else { " " };
        word.iter()
            .map(|&a| self.input_alphabet[a].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn format_stack(&self, stack: &[StackSymId]) -> String {
        let single = self.stack_alphabet.iter().all(|s| s.chars().count() == 1);
        let sep = if single { "" } else { " " };
        stack
            .iter()
            .map(|&x| self.stack_alphabet[x].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    fn single_char_input(&self) -> bool {
        self.input_alphabet.iter().all(|s| s.chars().count() == 1)
    }

    pub fn stack_sym_name(&self, s: StackSym) -> &str {
        match s {
            StackSym::Bottom => "BOT",
            StackSym::Top => "TOP",
            StackSym::Sym(x) => &self.stack_alphabet[x],
        }
    }

    /// Renders a transition in the line syntax of the machine file format.
    pub fn describe(&self, t: &Transition) -> String {
        let input = t.input.map_or("_", |a| self.input_alphabet[a].as_str());
        let action = match t.action {
            Action::WStay => "wstay".to_string(),
            Action::Push(x) => format!("push {}", quote(&self.stack_alphabet[x])),
            Action::Pop => "pop".to_string(),
            Action::Left => "left".to_string(),
            Action::RStay => "rstay".to_string(),
            Action::Right => "right".to_string(),
        };
        format!(
            "{} , {} / {} -> {} {}",
            self.states[t.from],
            quote(input),
            quote(self.stack_sym_name(t.stack)),
            self.states[t.to],
            action
        )
    }

    pub(crate) fn parts(&self) -> MachineParts {
        MachineParts {
            name: self.name.clone(),
            states: self.states.clone(),
            input_alphabet: self.input_alphabet.clone(),
            stack_alphabet: self.stack_alphabet.clone(),
            transitions: self.transitions.clone(),
            initial: self.initial,
            finals: self.finals.clone(),
            partition: self.partition.clone(),
        }
    }
}

fn check_unique(what: &str, names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::InvalidMachine(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(())
}

fn quote(s: &str) -> String {
    if s.contains('#') || s.contains(char::is_whitespace) || s.contains('\'') {
        format!("'{s}'")
    } else {
        s.to_string()
    }
}

impl fmt::Display for StackMachine {
    /// Serializes back to the machine file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "machine {} name={}", self.class, self.name)?;
        let list = |v: &[String]| v.iter().map(|s| quote(s)).collect::<Vec<_>>().join(" ");
        writeln!(f, "input: {}", list(&self.input_alphabet))?;
        writeln!(f, "stack: {}", list(&self.stack_alphabet))?;
        let states: Vec<String> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| match self.mode(i) {
                Some(Mode::Write) => format!("{s}/w"),
                Some(Mode::Read) => format!("{s}/r"),
                None => s.clone(),
            })
            .collect();
        writeln!(f, "states: {}", states.join(" "))?;
        writeln!(f, "initial: {}", self.states[self.initial])?;
        let finals: Vec<&str> = self.finals.iter().map(|&q| self.states[q].as_str()).collect();
        writeln!(f, "final: {}", finals.join(" "))?;
        for t in &self.transitions {
            writeln!(f, "{}", self.describe(t))?;
        }
        Ok(())
    }
}

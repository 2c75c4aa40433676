//! Exact regular-language analyses for checking stack automata.
//!
//! A checking machine writes its whole stack first (head always on the
//! top), then only reads. The write phase is a finite-state process over
//! pushed symbols; the read phase is a two-way automaton running over the
//! finished stack. Pairing the write-phase state with the crossing behavior
//! of the read phase on the stack written so far gives a one-way automaton
//! over stack words, which is what every analysis here is built on.

mod critical;
mod product;
mod store;

use product::write_product;

use serde::Serialize;

use crate::error::Result;
use crate::model::{InputSym, StackMachine};
use crate::nfa::{LengthBound, Nfa};

pub use critical::{critical_language, n0_nfa, nk_twoway, CriticalCase};
pub use store::{
    final_stack_language, final_stack_language_direct, store_alphabet, store_language, write_prefix_language, StoreWord,
};

/// How the input of a computation is constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSpec<'a> {
    /// Exactly this word.
    Word(&'a [InputSym]),
    /// Some word of this length; letters are chosen freely at each read.
    Length(usize),
    /// Any input at all.
    Free,
}

impl InputSpec<'_> {
    pub(crate) fn slots(&self) -> usize {
        self.last() + 1
    }

    /// Input position that counts as fully consumed.
    pub(crate) fn last(&self) -> usize {
        match self {
            InputSpec::Word(w) => w.len(),
            InputSpec::Length(n) => *n,
            InputSpec::Free => 0,
        }
    }

    /// Position after reading `a` (or λ) at position `i`.
    pub(crate) fn consume(&self, i: usize, a: Option<InputSym>) -> Option<usize> {
        match (self, a) {
            (_, None) => Some(i),
            (InputSpec::Word(w), Some(a)) => (w.get(i) == Some(&a)).then_some(i + 1),
            (InputSpec::Length(n), Some(_)) => (i < *n).then_some(i + 1),
            (InputSpec::Free, Some(_)) => Some(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StackSetKind {
    AcceptingOn(Vec<InputSym>),
    ReachableOn(Vec<InputSym>),
    AcceptingOfLength(usize),
    ReachableOfLength(usize),
    FinalStacks,
}

/// A regular set of pure stack contents over the machine's stack alphabet.
#[derive(Debug, Clone)]
pub struct StackSet {
    pub nfa: Nfa,
    pub kind: StackSetKind,
}

impl StackSet {
    pub fn is_empty(&self) -> bool {
        self.nfa.is_empty()
    }

    pub fn min_size(&self) -> Option<usize> {
        self.nfa.min_word_length()
    }

    pub fn max_size(&self) -> Option<LengthBound> {
        self.nfa.max_word_length()
    }

    pub fn contains(&self, stack: &[usize]) -> bool {
        self.nfa.accepts(stack)
    }
}

/// Stacks at the end of some accepting computation under `input`.
pub fn accepting_stacks(m: &StackMachine, input: InputSpec<'_>) -> Result<Nfa> {
    m.require_checking()?;
    Ok(write_product(m, input).to_nfa(m))
}

/// Stacks reached by some partial computation under `input`. For
/// `Length(n)` this covers computations consuming at most `n` letters.
pub fn reachable_stacks(m: &StackMachine, input: InputSpec<'_>) -> Result<Nfa> {
    m.require_checking()?;
    Ok(product::write_reach(m, input))
}

/// Pure stack contents with which some accepting computation on `u` ends.
pub fn accepting_stack_set(m: &StackMachine, u: &[InputSym]) -> Result<StackSet> {
    Ok(StackSet {
        nfa: accepting_stacks(m, InputSpec::Word(u))?,
        kind: StackSetKind::AcceptingOn(u.to_vec()),
    })
}

/// Pure stack contents reached by some partial computation on `u`.
pub fn reachable_stack_set(m: &StackMachine, u: &[InputSym]) -> Result<StackSet> {
    Ok(StackSet {
        nfa: reachable_stacks(m, InputSpec::Word(u))?,
        kind: StackSetKind::ReachableOn(u.to_vec()),
    })
}

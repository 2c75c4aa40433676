//! One-way stack automata, their non-erasing and checking restrictions,
//! space-complexity measures, and exact regular-language analyses for
//! checking stack automata, backed by a brute-force configuration oracle.

pub mod check;
pub mod corpus;
pub mod csa;
pub mod deciders;
pub mod error;
pub mod measures;
pub mod model;
pub mod nfa;
pub mod oracle;

pub use error::{Error, Result};
pub use measures::{Measure, MeasureValue};
pub use model::{parse_machine, Action, Configuration, MachineClass, Mode, StackMachine, StackSym, Tape, Transition};

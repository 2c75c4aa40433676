use std::fmt;

use super::{Action, InputSym, StackMachine, StackSym, StackSymId, StateId, Transition};

/// Working tape `▷ cells ◁` with a head position: 0 scans `▷`, `1..=len`
/// scan a cell, `len + 1` rests right of `◁` and scans it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Tape {
    pub cells: Vec<StackSymId>,
    pub head: usize,
}

impl Tape {
    pub fn new(cells: Vec<StackSymId>, head: usize) -> Self {
        assert!(head <= cells.len() + 1, "head outside the tape");
        Tape { cells, head }
    }

    /// Tape with the head on the topmost symbol, as left by the write phase.
    pub fn at_top(cells: Vec<StackSymId>) -> Self {
        let head = cells.len();
        Tape { cells, head }
    }

    pub fn scanned(&self) -> StackSym {
        if self.head == 0 {
            StackSym::Bottom
        } else if self.head > self.cells.len() {
            StackSym::Top
        } else {
            StackSym::Sym(self.cells[self.head - 1])
        }
    }

    pub fn at_top_symbol(&self) -> bool {
        self.head == self.cells.len()
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    /// Applies an action, or `None` when the move is undefined.
    pub fn act(&self, action: Action) -> Option<Tape> {
        let len = self.cells.len();
        match action {
            Action::WStay if self.at_top_symbol() => Some(self.clone()),
            Action::Push(x) if self.at_top_symbol() => {
                let mut cells = self.cells.clone();
                cells.push(x);
                Some(Tape { head: len + 1, cells })
            }
            Action::Pop if self.at_top_symbol() && len > 0 => {
                let mut cells = self.cells.clone();
                cells.pop();
                Some(Tape { head: len - 1, cells })
            }
            Action::Left if self.head > 0 => Some(Tape {
                cells: self.cells.clone(),
                head: self.head - 1,
            }),
            Action::RStay => Some(self.clone()),
            Action::Right if self.head <= len => Some(Tape {
                cells: self.cells.clone(),
                head: self.head + 1,
            }),
            _ => None,
        }
    }
}

/// `(state, consumed input, tape)`. Remaining input is the suffix from `pos`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub pos: usize,
    pub tape: Tape,
}

impl Configuration {
    pub fn stack_size(&self) -> usize {
        self.tape.size()
    }
}

pub fn initial_configuration(m: &StackMachine) -> Configuration {
    Configuration {
        state: m.initial(),
        pos: 0,
        tape: Tape::default(),
    }
}

/// Fires one transition if it is enabled in `c` on input `word`.
pub fn apply(word: &[InputSym], c: &Configuration, t: &Transition) -> Option<Configuration> {
    if t.from != c.state || t.stack != c.tape.scanned() {
        return None;
    }
    let pos = match t.input {
        None => c.pos,
        Some(a) if word.get(c.pos) == Some(&a) => c.pos + 1,
        Some(_) => return None,
    };
    let tape = c.tape.act(t.action)?;
    Some(Configuration { state: t.to, pos, tape })
}

/// All successors of `c`, in transition declaration order.
pub fn step(m: &StackMachine, word: &[InputSym], c: &Configuration) -> Vec<Configuration> {
    m.transitions_from(c.state).filter_map(|t| apply(word, c, t)).collect()
}

pub struct DisplayConfig<'a> {
    m: &'a StackMachine,
    word: &'a [InputSym],
    c: &'a Configuration,
}

impl Configuration {
    pub fn display<'a>(&'a self, m: &'a StackMachine, word: &'a [InputSym]) -> DisplayConfig<'a> {
        DisplayConfig { m, word, c: self }
    }
}

impl fmt::Display for DisplayConfig<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rest = self.m.format_word(&self.word[self.c.pos.min(self.word.len())..]);
        let rest = if rest.is_empty() { "λ".to_string() } else { rest };
        write!(
            f,
            "({}, {}, {})",
            self.m.states()[self.c.state],
            rest,
            store_tape(self.m, &self.c.tape)
        )
    }
}

/// Renders a tape as `▷ x y HEAD z ◁` style tokens separated by spaces.
pub(crate) fn store_tape(m: &StackMachine, tape: &Tape) -> String {
    let mut parts = vec!["BOT".to_string()];
    if tape.head == 0 {
        parts.push("HEAD".into());
    }
    for (i, &x) in tape.cells.iter().enumerate() {
        parts.push(m.stack_alphabet()[x].clone());
        if tape.head == i + 1 {
            parts.push("HEAD".into());
        }
    }
    parts.push("TOP".into());
    if tape.head == tape.cells.len() + 1 {
        parts.push("HEAD".into());
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_machine;

    fn machine() -> StackMachine {
        parse_machine(
            "machine SA name=s\ninput: 1\nstack: a b\nstates: q p\ninitial: q\nfinal: p\n\
             q , 1 / a -> p push b\nq , _ / a -> p pop\nq , _ / a -> p wstay\nq , _ / BOT -> p left\n",
        )
        .unwrap()
    }

    #[test]
    fn push_at_top() {
        let m = machine();
        let c = Configuration {
            state: 0,
            pos: 0,
            tape: Tape::at_top(vec![0]),
        };
        let next = step(&m, &[0], &c);
        assert_eq!(
            next[0],
            Configuration {
                state: 1,
                pos: 1,
                tape: Tape::at_top(vec![0, 1])
            }
        );
        assert_eq!(
            next[1],
            Configuration {
                state: 1,
                pos: 0,
                tape: Tape::at_top(vec![])
            }
        );
        assert_eq!(next.len(), 3);
    }

    #[test]
    fn writes_need_the_head_at_the_top() {
        let m = machine();
        let c = Configuration {
            state: 0,
            pos: 0,
            tape: Tape::new(vec![0], 0),
        };
        // scanning ▷ below a nonempty stack: no write, and left on ▷ is undefined
        assert!(step(&m, &[0], &c).is_empty());
    }

    #[test]
    fn head_bounds() {
        let t = Tape::new(vec![0], 2);
        assert_eq!(t.scanned(), StackSym::Top);
        assert!(t.act(Action::Right).is_none());
        assert!(t.act(Action::WStay).is_none());
        assert!(Tape::default().act(Action::Pop).is_none());
        assert!(Tape::default().act(Action::Left).is_none());
        assert_eq!(Tape::default().act(Action::Push(0)).unwrap(), Tape::at_top(vec![0]));
    }
}

use crate::error::{Error, Result};
use crate::model::{Action, StackMachine, StackSym, StateId};
use crate::nfa::{Move, Nfa, Side, TwSym, TwoWayNfa};

/// One constraint on a stack section that is only touched by λ-moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalCase {
    /// Pushed by λ write moves from `from` (first symbol already on top)
    /// to `to` (last symbol on top).
    Write { from: StateId, to: StateId },
    /// Crossed by λ read moves, entering at `entry` in `from`, leaving
    /// through `exit` in `to`.
    Read {
        from: StateId,
        to: StateId,
        entry: Side,
        exit: Side,
    },
}

/// Words `v` over the stack alphabet such that, with the first symbol of
/// `v` on top in state `qi`, λ write moves can push the rest of `v` and end
/// in `qj`. The automaton remembers the last symbol written.
pub fn n0_nfa(m: &StackMachine, qi: StateId, qj: StateId) -> Result<Nfa> {
    m.require_checking()?;
    check_state(m, qi)?;
    check_state(m, qj)?;
    let g = m.stack_alphabet().len();
    let n = m.num_states();
    // state (p, d) = 1 + p * g + d, 0 is the fresh start
    let id = |p: usize, d: usize| 1 + p * g + d;
    let mut a = Nfa::new(m.stack_alphabet().to_vec());
    a.add_states(1 + n * g);
    a.set_initial(0);
    for d in 0..g {
        a.add_edge(0, Some(d), id(qi, d));
        a.set_final(id(qj, d));
    }
    for t in m.transitions() {
        if t.input.is_some() {
            continue;
        }
        let StackSym::Sym(d) = t.stack else { continue };
        match t.action {
            Action::Push(c) => a.add_edge(id(t.from, d), Some(c), id(t.to, c)),
            Action::WStay => a.add_edge(id(t.from, d), None, id(t.to, d)),
            _ => {}
        }
    }
    Ok(a)
}

/// Two-way automaton over a section `v` (framed by end markers standing for
/// the surrounding stack) accepting iff λ read moves can take the head from
/// entering `v` at `entry` in `qi` to leaving through `exit` in `qj`.
pub fn nk_twoway(m: &StackMachine, qi: StateId, qj: StateId, entry: Side, exit: Side) -> Result<TwoWayNfa> {
    m.require_checking()?;
    check_state(m, qi)?;
    check_state(m, qj)?;
    let n = m.num_states();
    let g = m.stack_alphabet().len();
    let init = n;
    let seek = n + 1;
    let acc = n + 2;
    let mut t = TwoWayNfa::new(m.stack_alphabet().to_vec(), n + 3, init);
    t.set_final(acc);
    match entry {
        Side::Left => t.add_edge(init, TwSym::LeftEnd, qi, Move::R)?,
        Side::Right => {
            t.add_edge(init, TwSym::LeftEnd, seek, Move::R)?;
            for y in 0..g {
                t.add_edge(seek, TwSym::Sym(y), seek, Move::R)?;
            }
            t.add_edge(seek, TwSym::RightEnd, qi, Move::L)?;
        }
    }
    for tr in m.transitions() {
        if tr.input.is_some() || !m.is_read_state(tr.from) {
            continue;
        }
        let StackSym::Sym(c) = tr.stack else { continue };
        let mv = match tr.action {
            Action::Left => Move::L,
            Action::RStay => Move::S,
            Action::Right => Move::R,
            _ => continue,
        };
        t.add_edge(tr.from, TwSym::Sym(c), tr.to, mv)?;
    }
    let end = match exit {
        Side::Left => TwSym::LeftEnd,
        Side::Right => TwSym::RightEnd,
    };
    t.add_edge(qj, end, acc, Move::S)?;
    Ok(t)
}

/// Intersection of the languages of the given cases.
pub fn critical_language(m: &StackMachine, cases: &[CriticalCase]) -> Result<Nfa> {
    let mut langs = Vec::with_capacity(cases.len());
    for c in cases {
        langs.push(match *c {
            CriticalCase::Write { from, to } => n0_nfa(m, from, to)?,
            CriticalCase::Read { from, to, entry, exit } => nk_twoway(m, from, to, entry, exit)?.to_one_way(),
        });
    }
    let mut it = langs.into_iter();
    let first = it.next().ok_or(Error::EmptyCases)?;
    it.try_fold(first, |acc, l| Ok(acc.product(&l)?.trim()))
}

fn check_state(m: &StackMachine, q: StateId) -> Result<()> {
    if q < m.num_states() {
        Ok(())
    } else {
        Err(Error::UnknownState(q.to_string()))
    }
}

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::Nfa;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    S,
    R,
}

/// A tape symbol of a two-way automaton: an input symbol or an end marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwSym {
    LeftEnd,
    RightEnd,
    Sym(usize),
}

/// Boundary through which the head enters or leaves a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    ExitLeft(usize),
    ExitRight(usize),
    Accept,
}

/// Crossing behavior of a two-way automaton on a factor of its tape.
///
/// For each way of entering the factor (side and state) it lists the ways
/// of leaving it, plus `Accept` if a final state is visited inside.
/// Behaviors compose associatively, so the behavior of a word is the fold
/// of its letters' behaviors.
///
/// Each entry row is a bitset laid out as `[exit left | exit right | accept]`,
/// the first two parts `words` machine words wide.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Behavior {
    n: usize,
    table: Vec<u64>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

fn bits(slice: &[u64]) -> impl Iterator<Item = usize> + '_ {
    slice.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

fn set_bit(slice: &mut [u64], i: usize) {
    slice[i / 64] |= 1 << (i % 64);
}

impl Behavior {
    fn words(&self) -> usize {
        words_for(self.n)
    }

    fn row_len(&self) -> usize {
        2 * self.words() + 1
    }

    fn row(&self, side: Side, s: usize) -> &[u64] {
        let r = self.row_len();
        let e = match side {
            Side::Left => s,
            Side::Right => self.n + s,
        };
        &self.table[e * r..(e + 1) * r]
    }

    fn blank(n: usize) -> Self {
        let w = words_for(n);
        Behavior {
            n,
            table: vec![0; 2 * n * (2 * w + 1)],
        }
    }

    fn row_mut(&mut self, e: usize) -> &mut [u64] {
        let r = self.row_len();
        &mut self.table[e * r..(e + 1) * r]
    }

    /// Behavior of the empty factor: the head passes straight through.
    pub fn identity(n: usize) -> Self {
        let mut b = Self::blank(n);
        let w = b.words();
        for s in 0..n {
            set_bit(&mut b.row_mut(s)[w..2 * w], s);
            set_bit(&mut b.row_mut(n + s)[..w], s);
        }
        b
    }

    /// Behavior of a single cell whose moves are `(from, to, move)`.
    pub fn cell(n: usize, moves: &[(usize, usize, Move)], finals: &[bool]) -> Self {
        let mut by_from = vec![Vec::new(); n];
        for &(p, q, m) in moves {
            by_from[p].push((q, m));
        }
        let mut b = Self::blank(n);
        let w = b.words();
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            let mut row = vec![0u64; 2 * w + 1];
            while let Some(p) = stack.pop() {
                if finals[p] {
                    row[2 * w] = 1;
                }
                for &(q, m) in &by_from[p] {
                    match m {
                        Move::S => {
                            if !seen[q] {
                                seen[q] = true;
                                stack.push(q);
                            }
                        }
                        Move::L => set_bit(&mut row[..w], q),
                        Move::R => set_bit(&mut row[w..2 * w], q),
                    }
                }
            }
            b.row_mut(s).copy_from_slice(&row);
            b.row_mut(n + s).copy_from_slice(&row);
        }
        b
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn outcomes(&self, side: Side, s: usize) -> impl Iterator<Item = Outcome> + '_ {
        let w = self.words();
        let row = self.row(side, s);
        let acc = (row[2 * w] != 0).then_some(Outcome::Accept);
        bits(&row[..w])
            .map(Outcome::ExitLeft)
            .chain(bits(&row[w..2 * w]).map(Outcome::ExitRight))
            .chain(acc)
    }

    pub fn accepts_from(&self, side: Side, s: usize) -> bool {
        self.row(side, s)[2 * self.words()] != 0
    }

    /// Behavior of the concatenation `self · other`.
    pub fn compose(&self, other: &Behavior) -> Behavior {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let w = self.words();
        let mut result = Self::blank(n);
        for e in 0..2 * n {
            let (side, s) = if e < n { (Side::Left, e) } else { (Side::Right, e - n) };
            let out = junction_run(self, other, side, s, None);
            result.row_mut(e).copy_from_slice(&out[..2 * w + 1]);
        }
        result
    }

    /// Whether a run started inside `left · right` accepts. The head starts
    /// entering `left` from its right side in state `s`, i.e. on the last
    /// cell of `left`.
    pub fn accepts_at_junction(left: &Behavior, right: &Behavior, s: usize) -> bool {
        let w = left.words();
        junction_run(left, right, Side::Right, s, Some(0))[2 * w] != 0
    }
}

/// Runs the two-part crossing search. `start_part` forces the starting part
/// (0 = left, 1 = right); by default the side decides it as for an entry of
/// the concatenation.
fn junction_run(u: &Behavior, v: &Behavior, side: Side, s: usize, start_part: Option<usize>) -> Vec<u64> {
    let w = u.words();
    let mut out = vec![0u64; 2 * w + 1];
    let mut seen_vl = vec![0u64; w];
    let mut seen_ur = vec![0u64; w];
    // pending: (part, state) meaning "enter u from the right" / "enter v from the left"
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let part = start_part.unwrap_or(match side {
        Side::Left => 0,
        Side::Right => 1,
    });
    let mut first = Some((part, side, s));
    loop {
        let (part, side, s) = match first.take() {
            Some(x) => x,
            None => match pending.pop() {
                Some((0, t)) => (0, Side::Right, t),
                Some((_, t)) => (1, Side::Left, t),
                None => break,
            },
        };
        let row = if part == 0 { u.row(side, s) } else { v.row(side, s) };
        out[2 * w] |= row[2 * w];
        if part == 0 {
            for i in 0..w {
                out[i] |= row[i];
                let new = row[w + i] & !seen_vl[i];
                seen_vl[i] |= new;
                for b in bits(&[new]) {
                    pending.push((1, i * 64 + b));
                }
            }
        } else {
            for i in 0..w {
                out[w + i] |= row[w + i];
                let new = row[i] & !seen_ur[i];
                seen_ur[i] |= new;
                for b in bits(&[new]) {
                    pending.push((0, i * 64 + b));
                }
            }
        }
    }
    out
}

/// A two-way NFA over `▷ w ◁`. It starts on `▷` in its initial state and
/// accepts as soon as it visits a final state anywhere on the tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoWayNfa {
    alphabet: Vec<String>,
    num_states: usize,
    edges: Vec<(usize, TwSym, usize, Move)>,
    initial: usize,
    finals: BTreeSet<usize>,
}

impl TwoWayNfa {
    pub fn new(alphabet: Vec<String>, num_states: usize, initial: usize) -> Self {
        assert!(initial < num_states);
        TwoWayNfa {
            alphabet,
            num_states,
            edges: Vec::new(),
            initial,
            finals: BTreeSet::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, sym: TwSym, to: usize, mv: Move) -> Result<()> {
        if from >= self.num_states || to >= self.num_states {
            return Err(Error::InvalidMachine("two-way edge references unknown state".into()));
        }
        match (sym, mv) {
            (TwSym::LeftEnd, Move::L) => Err(Error::InvalidMachine("left move on the left end marker".into())),
            (TwSym::RightEnd, Move::R) => Err(Error::InvalidMachine("right move on the right end marker".into())),
            (TwSym::Sym(a), _) if a >= self.alphabet.len() => {
                Err(Error::InvalidMachine("two-way edge references unknown symbol".into()))
            }
            _ => {
                if !self.edges.contains(&(from, sym, to, mv)) {
                    self.edges.push((from, sym, to, mv));
                }
                Ok(())
            }
        }
    }

    pub fn set_final(&mut self, q: usize) {
        assert!(q < self.num_states);
        self.finals.insert(q);
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn edges(&self) -> &[(usize, TwSym, usize, Move)] {
        &self.edges
    }

    pub fn cell_behavior(&self, sym: TwSym) -> Behavior {
        let moves: Vec<(usize, usize, Move)> = self
            .edges
            .iter()
            .filter(|e| e.1 == sym)
            .map(|&(p, _, q, m)| (p, q, m))
            .collect();
        let finals: Vec<bool> = (0..self.num_states).map(|q| self.finals.contains(&q)).collect();
        Behavior::cell(self.num_states, &moves, &finals)
    }

    /// Behavior of the factor `word` (without end markers).
    pub fn behavior(&self, word: &[usize]) -> Behavior {
        let cells: Vec<Behavior> = (0..self.alphabet.len())
            .map(|a| self.cell_behavior(TwSym::Sym(a)))
            .collect();
        word.iter()
            .fold(Behavior::identity(self.num_states), |b, &a| b.compose(&cells[a]))
    }

    /// Acceptance of `▷ word ◁` by behavior composition.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let b = self
            .cell_behavior(TwSym::LeftEnd)
            .compose(&self.behavior(word))
            .compose(&self.cell_behavior(TwSym::RightEnd));
        b.accepts_from(Side::Left, self.initial)
    }

    /// Acceptance of `▷ word ◁` by direct search over (state, head position).
    pub fn accepts_direct(&self, word: &[usize]) -> bool {
        let len = word.len() + 2;
        let sym_at = |i: usize| {
            if i == 0 {
                TwSym::LeftEnd
            } else if i == len - 1 {
                TwSym::RightEnd
            } else {
                TwSym::Sym(word[i - 1])
            }
        };
        let mut seen = vec![false; self.num_states * len];
        let mut queue = VecDeque::from([(self.initial, 0usize)]);
        seen[self.initial * len] = true;
        while let Some((q, i)) = queue.pop_front() {
            if self.finals.contains(&q) {
                return true;
            }
            for &(p, s, r, m) in &self.edges {
                if p != q || s != sym_at(i) {
                    continue;
                }
                let j = match m {
                    Move::L => i - 1,
                    Move::S => i,
                    Move::R => i + 1,
                };
                if !seen[r * len + j] {
                    seen[r * len + j] = true;
                    queue.push_back((r, j));
                }
            }
        }
        false
    }

    /// Equivalent one-way automaton whose states are behaviors of `▷ w`.
    pub fn to_one_way(&self) -> Nfa {
        let cells: Vec<Behavior> = (0..self.alphabet.len())
            .map(|a| self.cell_behavior(TwSym::Sym(a)))
            .collect();
        let right_end = self.cell_behavior(TwSym::RightEnd);
        let mut index: HashMap<Behavior, usize> = HashMap::new();
        let mut order: Vec<Behavior> = Vec::new();
        let mut nfa = Nfa::new(self.alphabet.clone());
        let start = self.cell_behavior(TwSym::LeftEnd);
        index.insert(start.clone(), nfa.add_state());
        order.push(start);
        nfa.set_initial(0);
        let mut i = 0;
        while i < order.len() {
            let b = order[i].clone();
            if b.compose(&right_end).accepts_from(Side::Left, self.initial) {
                nfa.set_final(i);
            }
            for (a, cell) in cells.iter().enumerate() {
                let next = b.compose(cell);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = nfa.add_state();
                        index.insert(next.clone(), id);
                        order.push(next);
                        id
                    }
                };
                nfa.add_edge(i, Some(a), id);
            }
            i += 1;
        }
        nfa
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_right_then_accepts_at_the_end() {
        let mut t = TwoWayNfa::new(vec!["a".into()], 2, 0);
        t.add_edge(0, TwSym::LeftEnd, 0, Move::R).unwrap();
        t.add_edge(0, TwSym::Sym(0), 0, Move::R).unwrap();
        t.add_edge(0, TwSym::RightEnd, 1, Move::S).unwrap();
        t.set_final(1);
        assert!(t.accepts(&[0, 0]));
        assert!(t.accepts_direct(&[0, 0]));
        assert!(t.to_one_way().accepts(&[0, 0]));
    }

    #[test]
    fn end_marker_moves_are_checked() {
        let mut t = TwoWayNfa::new(vec!["a".into()], 1, 0);
        assert!(t.add_edge(0, TwSym::LeftEnd, 0, Move::L).is_err());
        assert!(t.add_edge(0, TwSym::RightEnd, 0, Move::R).is_err());
    }

    #[test]
    fn identity_is_neutral() {
        let mut t = TwoWayNfa::new(vec!["a".into(), "b".into()], 2, 0);
        t.add_edge(0, TwSym::Sym(0), 1, Move::R).unwrap();
        t.add_edge(1, TwSym::Sym(1), 0, Move::L).unwrap();
        let b = t.behavior(&[0, 1]);
        assert_eq!(Behavior::identity(2).compose(&b), b);
        assert_eq!(b.compose(&Behavior::identity(2)), b);
    }
}

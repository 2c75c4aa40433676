//! λ-NFAs and the regular-language operations built on them.

mod twoway;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use twoway::{Behavior, Move, Outcome, Side, TwSym, TwoWayNfa};

pub type Edge = (usize, Option<usize>, usize);

/// Longest accepted word length of a non-empty language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LengthBound {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<String>,
    out: Vec<Vec<(Option<usize>, usize)>>,
    initial: BTreeSet<usize>,
    finals: BTreeSet<usize>,
}

impl Nfa {
    pub fn new(alphabet: Vec<String>) -> Self {
        Nfa {
            alphabet,
            out: Vec::new(),
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
        }
    }

    /// Builds an automaton from explicit parts. Panics on out-of-range ids.
    pub fn from_parts(
        alphabet: Vec<String>,
        num_states: usize,
        edges: impl IntoIterator<Item = Edge>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut a = Nfa::new(alphabet);
        a.add_states(num_states);
        for (p, s, q) in edges {
            a.add_edge(p, s, q);
        }
        for q in initial {
            a.set_initial(q);
        }
        for q in finals {
            a.set_final(q);
        }
        a
    }

    /// `{ word }` over `alphabet`.
    pub fn word(alphabet: Vec<String>, word: &[usize]) -> Self {
        let n = word.len();
        Nfa::from_parts(
            alphabet,
            n + 1,
            word.iter().enumerate().map(|(i, &a)| (i, Some(a), i + 1)),
            [0],
            [n],
        )
    }

    pub fn empty(alphabet: Vec<String>) -> Self {
        Nfa::new(alphabet)
    }

    pub fn add_state(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_states(&mut self, k: usize) {
        self.out.resize(self.out.len() + k, Vec::new());
    }

    pub fn add_edge(&mut self, p: usize, sym: Option<usize>, q: usize) {
        assert!(
            p < self.out.len() && q < self.out.len(),
            "edge references unknown state"
        );
        if let Some(a) = sym {
            assert!(a < self.alphabet.len(), "edge references unknown symbol");
        }
        if !self.out[p].contains(&(sym, q)) {
            self.out[p].push((sym, q));
        }
    }

    pub fn set_initial(&mut self, q: usize) {
        assert!(q < self.out.len());
        self.initial.insert(q);
    }

    pub fn set_final(&mut self, q: usize) {
        assert!(q < self.out.len());
        self.finals.insert(q);
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(p, v)| v.iter().map(move |&(s, q)| (p, s, q)))
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Parses space-separated symbol names.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        text.split_whitespace()
            .map(|s| self.symbol(s).ok_or_else(|| Error::UnknownSymbol(s.to_string())))
            .collect()
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&a| self.alphabet[a].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for &(s, q) in &self.out[p] {
                if s.is_none() && set.insert(q) {
                    stack.push(q);
                }
            }
        }
    }

    fn start_set(&self) -> BTreeSet<usize> {
        let mut s = self.initial.clone();
        self.closure(&mut s);
        s
    }

    fn advance(&self, set: &BTreeSet<usize>, a: usize) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &p in set {
            for &(s, q) in &self.out[p] {
                if s == Some(a) {
                    next.insert(q);
                }
            }
        }
        self.closure(&mut next);
        next
    }

    pub fn closure_of(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut s = set.clone();
        self.closure(&mut s);
        s
    }

    /// States reachable from `set` by one `a` edge followed by λ edges.
    pub fn step_set(&self, set: &BTreeSet<usize>, a: usize) -> BTreeSet<usize> {
        self.advance(set, a)
    }

    pub fn out_edges(&self, q: usize) -> &[(Option<usize>, usize)] {
        &self.out[q]
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut cur = self.start_set();
        for &a in word {
            if cur.is_empty() {
                return false;
            }
            cur = self.advance(&cur, a);
        }
        cur.iter().any(|q| self.finals.contains(q))
    }

    /// Intersection. Both automata must share the same alphabet.
    pub fn product(&self, other: &Nfa) -> Result<Nfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        let mut result = Nfa::new(self.alphabet.clone());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |p: usize, q: usize, result: &mut Nfa, queue: &mut VecDeque<(usize, usize)>| {
            *index.entry((p, q)).or_insert_with(|| {
                queue.push_back((p, q));
                result.add_state()
            })
        };
        for &p in &self.initial {
            for &q in &other.initial {
                let id = intern(p, q, &mut result, &mut queue);
                result.set_initial(id);
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let id = intern(p, q, &mut result, &mut queue);
            if self.finals.contains(&p) && other.finals.contains(&q) {
                result.set_final(id);
            }
            for &(s, p2) in &self.out[p] {
                match s {
                    None => {
                        let t = intern(p2, q, &mut result, &mut queue);
                        result.add_edge(id, None, t);
                    }
                    Some(a) => {
                        for &(s2, q2) in &other.out[q] {
                            if s2 == Some(a) {
                                let t = intern(p2, q2, &mut result, &mut queue);
                                result.add_edge(id, Some(a), t);
                            }
                        }
                    }
                }
            }
            for &(s2, q2) in &other.out[q] {
                if s2.is_none() {
                    let t = intern(p, q2, &mut result, &mut queue);
                    result.add_edge(id, None, t);
                }
            }
        }
        Ok(result)
    }

    /// Disjoint union of two automata over the same alphabet.
    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        let mut r = self.clone();
        let off = r.num_states();
        r.add_states(other.num_states());
        for (p, s, q) in other.edges() {
            r.add_edge(p + off, s, q + off);
        }
        for &q in &other.initial {
            r.set_initial(q + off);
        }
        for &q in &other.finals {
            r.set_final(q + off);
        }
        Ok(r)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = self.initial.iter().copied().collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(p) = stack.pop() {
            for &(_, q) in &self.out[p] {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let mut rev = vec![Vec::new(); self.num_states()];
        for (p, _, q) in self.edges() {
            rev[q].push(p);
        }
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = self.finals.iter().copied().collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only states that are both reachable and co-reachable.
    pub fn trim(&self) -> Nfa {
        let r = self.reachable();
        let c = self.coreachable();
        let keep: Vec<bool> = r.iter().zip(&c).map(|(a, b)| *a && *b).collect();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut result = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = result.add_state();
            }
        }
        for (p, s, q) in self.edges() {
            if keep[p] && keep[q] {
                result.add_edge(map[p], s, map[q]);
            }
        }
        for &q in &self.initial {
            if keep[q] {
                result.set_initial(map[q]);
            }
        }
        for &q in &self.finals {
            if keep[q] {
                result.set_final(map[q]);
            }
        }
        result
    }

    pub fn is_empty(&self) -> bool {
        let r = self.reachable();
        !self.finals.iter().any(|&q| r[q])
    }

    pub fn is_finite(&self) -> bool {
        self.max_word_length() != Some(LengthBound::Infinite)
    }

    /// `None` for the empty language.
    pub fn max_word_length(&self) -> Option<LengthBound> {
        let t = self.trim();
        if t.finals.is_empty() {
            return None;
        }
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..t.num_states()).map(|_| g.add_node(())).collect();
        for (p, _, q) in t.edges() {
            g.add_edge(nodes[p], nodes[q], ());
        }
        // tarjan_scc yields components in reverse topological order
        let sccs = tarjan_scc(&g);
        let mut comp = vec![0; t.num_states()];
        for (i, c) in sccs.iter().enumerate() {
            for n in c {
                comp[n.index()] = i;
            }
        }
        for (p, s, q) in t.edges() {
            if comp[p] == comp[q] && s.is_some() {
                return Some(LengthBound::Infinite);
            }
        }
        // longest path from each component to a final state, sinks first
        let mut best: Vec<Option<usize>> = vec![None; sccs.len()];
        for (i, c) in sccs.iter().enumerate() {
            let mut b: Option<usize> = None;
            for n in c {
                let p = n.index();
                if t.finals.contains(&p) {
                    b = b.max(Some(0));
                }
                for &(s, q) in &t.out[p] {
                    if comp[q] != i {
                        if let Some(v) = best[comp[q]] {
                            b = b.max(Some(v + usize::from(s.is_some())));
                        }
                    }
                }
            }
            best[i] = b;
        }
        t.initial
            .iter()
            .filter_map(|&q| best[comp[q]])
            .max()
            .map(LengthBound::Finite)
    }

    /// Length of a shortest accepted word, `None` for the empty language.
    pub fn min_word_length(&self) -> Option<usize> {
        self.shortest_word().map(|w| w.len())
    }

    /// A shortest accepted word; among those the one found first by a 0-1
    /// breadth-first search in edge order.
    pub fn shortest_word(&self) -> Option<Vec<usize>> {
        let n = self.num_states();
        let mut dist = vec![usize::MAX; n];
        let mut parent: Vec<Option<(usize, Option<usize>)>> = vec![None; n];
        let mut dq = VecDeque::new();
        for &q in &self.initial {
            dist[q] = 0;
            dq.push_back(q);
        }
        while let Some(p) = dq.pop_front() {
            for &(s, q) in &self.out[p] {
                let w = usize::from(s.is_some());
                if dist[p] + w < dist[q] {
                    dist[q] = dist[p] + w;
                    parent[q] = Some((p, s));
                    if w == 0 {
                        dq.push_front(q);
                    } else {
                        dq.push_back(q);
                    }
                }
            }
        }
        let f = self
            .finals
            .iter()
            .copied()
            .filter(|&q| dist[q] != usize::MAX)
            .min_by_key(|&q| dist[q])?;
        let mut word = Vec::new();
        let mut q = f;
        while let Some((p, s)) = parent[q] {
            if let Some(a) = s {
                word.push(a);
            }
            q = p;
        }
        word.reverse();
        Some(word)
    }

    /// A longest accepted word when the language is finite and non-empty.
    pub fn longest_word(&self) -> Option<Vec<usize>> {
        let LengthBound::Finite(k) = self.max_word_length()? else {
            return None;
        };
        self.words_of_length(k).into_iter().next()
    }

    /// `pref(L)`.
    pub fn prefix_closure(&self) -> Nfa {
        let mut t = self.trim();
        for q in 0..t.num_states() {
            t.set_final(q);
        }
        t
    }

    /// Maps every symbol through `f`; `None` erases it to λ.
    pub fn relabel(&self, alphabet: Vec<String>, f: impl Fn(usize) -> Option<usize>) -> Nfa {
        let mut r = Nfa::new(alphabet);
        r.add_states(self.num_states());
        for (p, s, q) in self.edges() {
            r.add_edge(p, s.and_then(&f), q);
        }
        r.initial = self.initial.clone();
        r.finals = self.finals.clone();
        r
    }

    /// Image under the homomorphism that keeps symbols satisfying `keep`
    /// and erases the rest. The result alphabet lists the kept symbols in
    /// their original order.
    pub fn erase_symbols(&self, keep: impl Fn(usize) -> bool) -> Nfa {
        let kept: Vec<usize> = (0..self.alphabet.len()).filter(|&a| keep(a)).collect();
        let mut map = vec![None; self.alphabet.len()];
        for (i, &a) in kept.iter().enumerate() {
            map[a] = Some(i);
        }
        let alphabet = kept.iter().map(|&a| self.alphabet[a].clone()).collect();
        self.relabel(alphabet, |a| map[a])
    }

    /// Same language over a larger alphabet given as an index map.
    pub fn widen(&self, alphabet: Vec<String>, map: &[usize]) -> Nfa {
        self.relabel(alphabet, |a| Some(map[a]))
    }

    /// All accepted words of length at most `max_len`, shortest first, then
    /// lexicographic by symbol index.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..=max_len {
            out.extend(self.words_of_length(k));
        }
        out
    }

    pub fn words_of_length(&self, len: usize) -> Vec<Vec<usize>> {
        let t = self.trim();
        let mut out = Vec::new();
        let mut word = Vec::new();
        let start = t.start_set();
        if !start.is_empty() {
            t.collect_words(&start, len, &mut word, &mut out);
        }
        out
    }

    fn collect_words(&self, cur: &BTreeSet<usize>, left: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.iter().any(|q| self.finals.contains(q)) {
                out.push(word.clone());
            }
            return;
        }
        for a in 0..self.alphabet.len() {
            let next = self.advance(cur, a);
            if !next.is_empty() {
                word.push(a);
                self.collect_words(&next, left - 1, word, out);
                word.pop();
            }
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nfa {\n  rankdir=LR;\n");
        for q in 0..self.num_states() {
            let shape = if self.finals.contains(&q) {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(s, "  {q} [shape={shape}];");
        }
        for &q in &self.initial {
            let _ = writeln!(s, "  start{q} [shape=point];\n  start{q} -> {q};");
        }
        for (p, sym, q) in self.edges() {
            let label = sym.map_or("λ".to_string(), |a| self.alphabet[a].replace('"', "\\\""));
            let _ = writeln!(s, "  {p} -> {q} [label=\"{label}\"];");
        }
        s.push_str("}\n");
        s
    }

    /// Plain text: header lines then one `p symbol q` line per edge, `_` for λ.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet: {}", self.alphabet.join(" "));
        let _ = writeln!(s, "states: {}", self.num_states());
        let list = |set: &BTreeSet<usize>| set.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "initial: {}", list(&self.initial));
        let _ = writeln!(s, "final: {}", list(&self.finals));
        for (p, sym, q) in self.edges() {
            let _ = writeln!(s, "{p} {} {q}", sym.map_or("_", |a| self.alphabet[a].as_str()));
        }
        s
    }
}

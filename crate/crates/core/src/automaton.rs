use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::alphabet::{Alphabet, Label, Symbol};
use crate::error::{Error, Result};

/// Dense state identifier in `0..n_states`.
pub type StateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: StateId,
    pub to: StateId,
    pub label: Symbol,
}

impl Edge {
    pub fn new(from: StateId, to: StateId, label: Symbol) -> Self {
        Edge { from, to, label }
    }
}

/// Finite automaton with a single source and no epsilon moves.
///
/// Construction validates the structural invariants: the source is the
/// only state without incoming edges, every state is reachable from it, and
/// edges are a set. Edges are kept sorted by `(from, to, label)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    source: StateId,
    accepting: Vec<bool>,
    edges: Vec<Edge>,
    // CSR over `edges` by source state.
    out_start: Vec<usize>,
    // Edge indices grouped by destination.
    in_start: Vec<usize>,
    in_edges: Vec<usize>,
}

impl Automaton {
    pub fn new<A, E>(
        alphabet: Alphabet,
        n_states: usize,
        source: StateId,
        accepting: A,
        edges: E,
    ) -> Result<Self>
    where
        A: IntoIterator<Item = StateId>,
        E: IntoIterator<Item = Edge>,
    {
        if n_states == 0 {
            return Err(Error::NoStates);
        }
        let check = |id: usize| {
            if id < n_states {
                Ok(())
            } else {
                Err(Error::StateOutOfRange { id, n_states })
            }
        };
        check(source)?;
        let mut acc = vec![false; n_states];
        for f in accepting {
            check(f)?;
            acc[f] = true;
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            check(e.from)?;
            check(e.to)?;
            if e.label.index() >= alphabet.len() {
                return Err(Error::UnknownLabel(format!("symbol #{}", e.label.0)));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let e = w[0];
            return Err(Error::DuplicateEdge {
                from: e.from,
                to: e.to,
                label: alphabet.name(e.label).to_string(),
            });
        }
        let a = Self::assemble(alphabet, n_states, source, acc, edges);
        a.validate()?;
        Ok(a)
    }

    fn assemble(
        alphabet: Alphabet,
        n: usize,
        source: StateId,
        accepting: Vec<bool>,
        edges: Vec<Edge>,
    ) -> Self {
        let mut out_start = vec![0; n + 1];
        let mut in_start = vec![0; n + 1];
        for e in &edges {
            out_start[e.from + 1] += 1;
            in_start[e.to + 1] += 1;
        }
        for i in 0..n {
            out_start[i + 1] += out_start[i];
            in_start[i + 1] += in_start[i];
        }
        let mut fill = in_start.clone();
        let mut in_edges = vec![0; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            in_edges[fill[e.to]] = i;
            fill[e.to] += 1;
        }
        Automaton {
            alphabet,
            source,
            accepting,
            edges,
            out_start,
            in_start,
            in_edges,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_states();
        if self.in_degree(self.source) > 0 {
            return Err(Error::SourceHasIncoming(self.source));
        }
        if let Some(v) = (0..n).find(|&v| v != self.source && self.in_degree(v) == 0) {
            let (a, b) = if v < self.source { (v, self.source) } else { (self.source, v) };
            return Err(Error::MultipleSources(a, b));
        }
        let seen = self.reachable_from_source();
        if let Some(v) = seen.iter().position(|&r| !r) {
            return Err(Error::UnreachableState(v));
        }
        Ok(())
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n_states()];
        seen[self.source] = true;
        let mut stack = vec![self.source];
        while let Some(u) = stack.pop() {
            for e in self.out_edges(u) {
                if !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }

    /// The automaton with one accepting state and no edges.
    pub fn source_only(alphabet: Alphabet, accepting: bool) -> Self {
        let acc = if accepting { vec![0] } else { vec![] };
        Self::new(alphabet, 1, 0, acc, []).expect("single state automaton is valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn is_accepting(&self, v: StateId) -> bool {
        self.accepting[v]
    }

    pub fn accepting(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.n_states()).filter(|&v| self.accepting[v])
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, u: StateId) -> &[Edge] {
        &self.edges[self.out_start[u]..self.out_start[u + 1]]
    }

    pub fn in_edges(&self, v: StateId) -> impl Iterator<Item = &Edge> + '_ {
        self.in_edges[self.in_start[v]..self.in_start[v + 1]]
            .iter()
            .map(|&i| &self.edges[i])
    }

    pub fn in_degree(&self, v: StateId) -> usize {
        self.in_start[v + 1] - self.in_start[v]
    }

    pub fn out_degree(&self, u: StateId) -> usize {
        self.out_start[u + 1] - self.out_start[u]
    }

    /// All `c`-successors of `u`.
    pub fn successors(&self, u: StateId, c: Symbol) -> impl Iterator<Item = StateId> + '_ {
        self.out_edges(u)
            .iter()
            .filter(move |e| e.label == c)
            .map(|e| e.to)
    }

    /// First `c`-successor of `u`; the only one when the automaton is deterministic.
    pub fn succ(&self, u: StateId, c: Symbol) -> Option<StateId> {
        self.successors(u, c).next()
    }

    /// Symbols that label at least one edge, in alphabet order.
    pub fn used_symbols(&self) -> Vec<Symbol> {
        let mut used = vec![false; self.alphabet.len()];
        for e in &self.edges {
            used[e.label.index()] = true;
        }
        self.alphabet.symbols().filter(|s| used[s.index()]).collect()
    }

    /// Incoming label of every state, `#` for the source.
    pub fn check_input_consistency(&self) -> Result<Vec<Label>> {
        let mut lambda = vec![Label::Hash; self.n_states()];
        for v in 0..self.n_states() {
            let mut it = self.in_edges(v);
            if let Some(first) = it.next() {
                if let Some(other) = it.find(|e| e.label != first.label) {
                    return Err(Error::NotInputConsistent {
                        state: v,
                        first: self.alphabet.name(first.label).to_string(),
                        second: self.alphabet.name(other.label).to_string(),
                    });
                }
                lambda[v] = Label::Sym(first.label);
            }
        }
        Ok(lambda)
    }

    pub fn is_input_consistent(&self) -> bool {
        self.check_input_consistency().is_ok()
    }

    /// Largest number of equally labeled edges leaving one state (at least 1).
    pub fn nondeterminism_degree(&self) -> usize {
        let mut d = 1;
        for u in 0..self.n_states() {
            let mut labels: Vec<Symbol> = self.out_edges(u).iter().map(|e| e.label).collect();
            labels.sort_unstable();
            for run in labels.chunk_by(|a, b| a == b) {
                d = d.max(run.len());
            }
        }
        d
    }

    pub fn is_deterministic(&self) -> bool {
        self.nondeterminism_degree() == 1
    }

    /// Kahn's algorithm; ready states are taken in ascending id order.
    pub fn topological_order(&self) -> Result<Vec<StateId>> {
        let n = self.n_states();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_degree(v)).collect();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(self.source));
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(u)) = heap.pop() {
            order.push(u);
            for e in self.out_edges(u) {
                indeg[e.to] -= 1;
                if indeg[e.to] == 0 {
                    heap.push(Reverse(e.to));
                }
            }
        }
        if order.len() < n {
            return Err(Error::Cyclic);
        }
        Ok(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Subset simulation of `w` from the source.
    pub fn naive_accepts(&self, w: &[Symbol]) -> bool {
        let reached = self.reach(&[self.source], w);
        reached.iter().any(|&v| self.accepting[v])
    }

    /// States reached from any of `from` by paths labeled `w`, sorted.
    pub fn reach(&self, from: &[StateId], w: &[Symbol]) -> Vec<StateId> {
        let mut mark = vec![false; self.n_states()];
        let mut cur: Vec<StateId> = from.to_vec();
        cur.sort_unstable();
        cur.dedup();
        for &c in w {
            let mut next = Vec::new();
            for &u in &cur {
                for v in self.successors(u, c) {
                    if !mark[v] {
                        mark[v] = true;
                        next.push(v);
                    }
                }
            }
            for &v in &next {
                mark[v] = false;
            }
            next.sort_unstable();
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// States from which some accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<StateId> = self.accepting().collect();
        while let Some(v) = queue.pop_front() {
            for e in self.in_edges(v) {
                if !live[e.from] {
                    live[e.from] = true;
                    queue.push_back(e.from);
                }
            }
        }
        live
    }

    /// Relabels states: state `v` becomes `new_id[v]`. `new_id` must be a permutation.
    pub fn renumber(&self, new_id: &[StateId]) -> Automaton {
        assert_eq!(new_id.len(), self.n_states());
        let mut acc = vec![false; self.n_states()];
        for v in self.accepting() {
            acc[new_id[v]] = true;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge::new(new_id[e.from], new_id[e.to], e.label))
            .collect();
        edges.sort_unstable();
        Self::assemble(
            self.alphabet.clone(),
            self.n_states(),
            new_id[self.source],
            acc,
            edges,
        )
    }

    /// Moves the source to id 0, keeping the relative order of the others.
    pub fn canonical(&self) -> Automaton {
        let s = self.source;
        let new_id: Vec<StateId> = (0..self.n_states())
            .map(|v| match v.cmp(&s) {
                std::cmp::Ordering::Less => v + 1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => v,
            })
            .collect();
        self.renumber(&new_id)
    }

    /// Sub-automaton on the states with `keep[v]`, renumbered densely in id order.
    /// The kept set must contain the source and stay reachable.
    pub fn restrict(&self, keep: &[bool]) -> Result<(Automaton, Vec<Option<StateId>>)> {
        let mut map = vec![None; self.n_states()];
        let mut next = 0;
        for v in 0..self.n_states() {
            if keep[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let source = map[self.source].ok_or(Error::NoStates)?;
        let acc = self.accepting().filter_map(|v| map[v]);
        let edges = self.edges.iter().filter_map(|e| {
            Some(Edge::new(map[e.from]?, map[e.to]?, e.label))
        });
        let a = Automaton::new(self.alphabet.clone(), next, source, acc, edges)?;
        Ok((a, map))
    }
}

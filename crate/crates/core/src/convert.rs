//! Minimum Wheeler DFA of an acyclic DFA, built by online conflict
//! resolution with state splitting.
//!
//! After Hopcroft minimization the states are consumed in topological order
//! and placed in LEX as in the online sorter. Where the sorter would fail,
//! states are split instead:
//!
//! * a state whose predecessors for one letter are interrupted by foreign
//!   sources of that letter gets one copy per uninterrupted run;
//! * a placed state `z` whose predecessor range would be cut by such a run
//!   is split in two, the second half taking the predecessors after the run.
//!
//! Copies keep the outgoing edges and the equivalence class of their origin,
//! so the language never changes. Edges are redirected but never removed.

use crate::alphabet::{Label, Symbol};
use crate::automaton::{Automaton, Edge, StateId};
use crate::dyntriple::{DynTriple, NodeId};
use crate::error::{Error, Result};
use crate::minimize::{hopcroft, state_equivalence};
use crate::wheeler_check::{verify_wheeler_order, WheelerOrder};

const NONE: usize = usize::MAX;

struct Work {
    sigma: usize,
    /// `out[x * sigma + c]`: target of the `c`-edge of `x`, or `NONE`.
    out: Vec<usize>,
    /// Incoming edges `(source, letter)`.
    preds: Vec<Vec<(StateId, usize)>>,
    class: Vec<usize>,
    accepting: Vec<bool>,
    node: Vec<Option<NodeId>>,
    dt: DynTriple,
    edges: usize,
    max_states: Option<usize>,
}

impl Work {
    fn new_state(&mut self, class: usize, accepting: bool) -> StateId {
        let x = self.class.len();
        self.out.extend(std::iter::repeat_n(NONE, self.sigma));
        self.preds.push(Vec::new());
        self.class.push(class);
        self.accepting.push(accepting);
        self.node.push(None);
        x
    }

    fn succ(&self, x: StateId, c: usize) -> usize {
        self.out[x * self.sigma + c]
    }

    fn pos(&self, x: StateId) -> usize {
        self.dt.position(self.node[x].expect("placed state"))
    }

    fn nd(&self, x: StateId) -> NodeId {
        self.node[x].expect("placed state")
    }

    fn place(&mut self, x: StateId, pos: usize, label: Label, p: usize) -> Result<()> {
        if let Some(max) = self.max_states {
            if self.dt.len() >= max {
                return Err(Error::OutputLimitExceeded(max));
            }
        }
        self.node[x] = Some(self.dt.insert(pos, x, label.dense(), p as u32));
        Ok(())
    }

    /// Gives `x` the outgoing edges of `from`. Placed targets gain one IN
    /// entry and their predecessor range grows to include `x`, which must sit
    /// right after `from` in LEX when `from` is placed.
    fn copy_out_edges(&mut self, from: StateId, x: StateId) {
        for c in 0..self.sigma {
            let y = self.succ(from, c);
            if y == NONE {
                continue;
            }
            self.out[x * self.sigma + c] = y;
            self.preds[y].push((x, c));
            self.edges += 1;
            if let Some(ny) = self.node[y] {
                let (nf, nx) = (self.nd(from), self.nd(x));
                let single = self.dt.p(ny) == 1;
                self.dt.add_p(ny, 1);
                self.dt.set_out(nx, c);
                if single {
                    self.dt.reserve(nf, nx, c);
                } else if self.dt.has_close(nf, c) {
                    self.dt.set_close(nf, c, false);
                    self.dt.set_close(nx, c, true);
                }
            }
        }
    }

    /// Splits placed state `z` (incoming letter `a`): predecessors up to
    /// `wl` stay, those from `wr` on move to a new copy placed right after `z`.
    fn split(&mut self, z: StateId, a: usize, wl: StateId, wr: StateId) -> Result<()> {
        let (pl, pr) = (self.pos(wl), self.pos(wr));
        let mut ps: Vec<(usize, StateId)> = self.preds[z]
            .iter()
            .map(|&(u, c)| {
                debug_assert_eq!(c, a);
                (self.pos(u), u)
            })
            .collect();
        ps.sort_unstable();
        let cut = ps.partition_point(|&(p, _)| p <= pl);
        if ps[cut..].first().map(|x| x.0) != Some(pr) {
            return Err(Error::Internal("split point is not between adjacent sources".into()));
        }
        let (first, last) = (ps[0].1, ps[ps.len() - 1].1);
        let right: Vec<StateId> = ps[cut..].iter().map(|x| x.1).collect();
        let z2 = self.new_state(self.class[z], self.accepting[z]);
        let nz = self.nd(z);
        self.dt.add_p(nz, -(right.len() as i64));
        let at = self.dt.position(nz) + 1;
        self.place(z2, at, Label::Sym(Symbol(a as u32)), right.len())?;
        // The reservation of z's predecessors splits in two.
        let (nfirst, nlast, nwl, nwr) = (self.nd(first), self.nd(last), self.nd(wl), self.nd(wr));
        if first == wl {
            self.dt.set_open(nfirst, a, false);
        } else {
            self.dt.set_close(nwl, a, true);
        }
        if wr == last {
            self.dt.set_close(nlast, a, false);
        } else {
            self.dt.set_open(nwr, a, true);
        }
        self.preds[z] = ps[..cut].iter().map(|x| (x.1, a)).collect();
        for &u in &right {
            self.out[u * self.sigma + a] = z2;
        }
        self.preds[z2] = right.iter().map(|&u| (u, a)).collect();
        self.copy_out_edges(z, z2);
        Ok(())
    }

    /// Places every copy of the unplaced state `v`.
    fn process(&mut self, v: StateId) -> Result<()> {
        let a_dense = |a: usize| Label::Sym(Symbol(a as u32));
        while let Some(a) = self.preds[v].iter().map(|x| x.1).min() {
            let mut us: Vec<(usize, StateId)> = self.preds[v]
                .iter()
                .filter(|x| x.1 == a)
                .map(|&(u, _)| (self.pos(u), u))
                .collect();
            us.sort_unstable();
            // First maximal run not interrupted by another a-source.
            let mut end = 1;
            while end < us.len() && self.dt.out_rank(a, us[end].0) == self.dt.out_rank(a, us[end - 1].0 + 1) {
                end += 1;
            }
            let run = &us[..end];
            let (lo, hi) = (run[0].0, run[end - 1].0);
            let before = self.dt.out_rank(a, lo);
            let wl = before.checked_sub(1).and_then(|k| self.dt.out_select(a, k));
            let wr = self.dt.out_select(a, self.dt.out_rank(a, hi + 1));
            if let (Some(wl), Some(wr)) = (wl, wr) {
                let (sl, sr) = (self.dt.state(wl), self.dt.state(wr));
                let z = self.succ(sl, a);
                if z == self.succ(sr, a) {
                    self.split(z, a, sl, sr)?;
                    continue;
                }
            }
            let run: Vec<StateId> = run.iter().map(|x| x.1).collect();
            let x = self.new_state(self.class[v], self.accepting[v]);
            let k = self.dt.in_start(a_dense(a).dense()) + before as u64;
            let at = self
                .dt
                .lex_from_in(k)
                .ok_or_else(|| Error::Internal("insertion point splits an IN block".into()))?;
            self.place(x, at, a_dense(a), run.len())?;
            for c in 0..self.sigma {
                let y = self.succ(v, c);
                if y != NONE {
                    self.out[x * self.sigma + c] = y;
                    self.preds[y].push((x, c));
                    self.edges += 1;
                }
            }
            for &u in &run {
                self.out[u * self.sigma + a] = x;
                self.preds[x].push((u, a));
                let nu = self.nd(u);
                self.dt.set_out(nu, a);
            }
            if run.len() > 1 {
                let (n0, n1) = (self.nd(run[0]), self.nd(run[run.len() - 1]));
                self.dt.reserve(n0, n1, a);
            }
            self.preds[v].retain(|&(u, c)| !(c == a && run.contains(&u)));
        }
        // v itself is replaced by its copies.
        for c in 0..self.sigma {
            let y = self.succ(v, c);
            if y != NONE {
                self.preds[y].retain(|&(u, _)| u != v);
                self.out[v * self.sigma + c] = NONE;
                self.edges -= 1;
            }
        }
        Ok(())
    }

    fn placed_automaton(&self, h: &Automaton) -> Result<(Automaton, WheelerOrder)> {
        let order: Vec<StateId> = self.dt.states();
        let mut rank = vec![NONE; self.class.len()];
        for (r, &x) in order.iter().enumerate() {
            rank[x] = r;
        }
        let mut edges = Vec::new();
        for &x in &order {
            for c in 0..self.sigma {
                let y = self.succ(x, c);
                if y != NONE && rank[y] != NONE {
                    edges.push(Edge::new(rank[x], rank[y], Symbol(c as u32)));
                }
            }
        }
        let accepting: Vec<StateId> = order
            .iter()
            .enumerate()
            .filter(|&(_, &x)| self.accepting[x])
            .map(|(r, _)| r)
            .collect();
        let a = Automaton::new(h.alphabet().clone(), order.len(), 0, accepting, edges)?;
        Ok((a, WheelerOrder::identity(order.len())))
    }

    /// Placed states are Wheeler ordered with no mergeable neighbours, and
    /// the treap aggregates are consistent.
    fn check(&self, h: &Automaton) -> Result<()> {
        self.dt.check_invariants().map_err(Error::Internal)?;
        let (a, ord) = self.placed_automaton(h)?;
        if !verify_wheeler_order(&a, &ord) {
            return Err(Error::Internal("placed states are not Wheeler ordered".into()));
        }
        let order = self.dt.states();
        let lambda = a.check_input_consistency()?;
        for r in 1..order.len() {
            if self.class[order[r - 1]] == self.class[order[r]] && lambda[r - 1] == lambda[r] {
                return Err(Error::Internal("mergeable neighbours in LEX".into()));
            }
        }
        Ok(())
    }
}

/// Minimum Wheeler DFA equivalent to the acyclic DFA `a`, with its order
/// (state ids equal ranks). The output can be exponentially larger than the
/// input; `max_states` bounds it.
pub fn min_wdfa_from_acyclic_dfa(a: &Automaton, max_states: Option<usize>) -> Result<(Automaton, WheelerOrder)> {
    convert(a, max_states, false)
}

/// As [`min_wdfa_from_acyclic_dfa`], checking the invariants after every
/// processed state. Quadratic; meant for tests.
pub fn min_wdfa_from_acyclic_dfa_checked(a: &Automaton, max_states: Option<usize>) -> Result<(Automaton, WheelerOrder)> {
    convert(a, max_states, true)
}

fn convert(a: &Automaton, max_states: Option<usize>, check: bool) -> Result<(Automaton, WheelerOrder)> {
    if !a.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    a.topological_order()?;
    let h = hopcroft(a)?;
    let eq = state_equivalence(&h)?;
    let topo = h.topological_order()?;
    let sigma = h.alphabet().len();
    let n = h.n_states();
    let mut w = Work {
        sigma,
        out: vec![NONE; n * sigma],
        preds: vec![Vec::new(); n],
        class: (0..n).map(|v| eq.class_of(v)).collect(),
        accepting: (0..n).map(|v| h.is_accepting(v)).collect(),
        node: vec![None; n],
        dt: DynTriple::new(sigma),
        edges: h.n_edges(),
        max_states,
    };
    for e in h.edges() {
        w.out[e.from * sigma + e.label.index()] = e.to;
        w.preds[e.to].push((e.from, e.label.index()));
    }
    let mut edges_seen = w.edges;
    for &v in &topo {
        if v == h.source() {
            w.place(v, 0, Label::Hash, 1)?;
        } else {
            w.process(v)?;
        }
        if w.edges < edges_seen {
            return Err(Error::Internal("edge count decreased".into()));
        }
        edges_seen = w.edges;
        if check {
            w.check(&h)?;
        }
    }
    w.placed_automaton(&h)
}

//! Wheeler recognition for automata of nondeterminism degree at most two,
//! through a 2-SAT encoding with one variable `x(u<v)` per ordered pair.

use crate::alphabet::Label;
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::wheeler_check::{verify_wheeler_order, WheelerOrder};

/// A literal: variable `i` is `2i`, its negation `2i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit(2 * var as u32)
    }

    pub fn neg(var: usize) -> Self {
        Lit(2 * var as u32 + 1)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    fn node(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// Conjunction of clauses with at most two literals. A unary clause is
/// stored with its literal repeated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoSatInstance {
    pub n_vars: usize,
    pub clauses: Vec<(Lit, Lit)>,
    /// Number of states of the encoded automaton (0 for hand-built instances).
    pub n_states: usize,
}

impl TwoSatInstance {
    pub fn new(n_vars: usize) -> Self {
        TwoSatInstance {
            n_vars,
            clauses: Vec::new(),
            n_states: 0,
        }
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        debug_assert!(a.var() < self.n_vars && b.var() < self.n_vars);
        self.clauses.push((a, b));
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.add_clause(a, a);
    }

    /// Variable encoding `u < v` for the states of the encoded automaton.
    pub fn pair_var(&self, u: StateId, v: StateId) -> usize {
        pair_var(self.n_states, u, v)
    }
}

fn pair_var(n: usize, u: StateId, v: StateId) -> usize {
    debug_assert!(u != v && u < n && v < n);
    u * (n - 1) + if v < u { v } else { v - 1 }
}

fn check_degree(a: &Automaton) -> Result<Vec<Label>> {
    let d = a.nondeterminism_degree();
    if d > 2 {
        return Err(Error::DegreeTooHigh(d));
    }
    a.check_input_consistency()
}

/// Encodes the Wheeler conditions. Families of clauses:
/// label clauses `x(u<v)` when `λ(u) ≺ λ(v)`; propagation clauses
/// `x(u'<v') → x(u<v)` for equally labeled edges `u'→u`, `v'→v` with
/// `u ≠ v`, `u' ≠ v'`; antisymmetry; completeness. Transitivity is not
/// encoded.
pub fn build_2sat(a: &Automaton) -> Result<TwoSatInstance> {
    let lambda = check_degree(a)?;
    let n = a.n_states();
    let mut inst = TwoSatInstance::new(n * n.saturating_sub(1));
    inst.n_states = n;
    for u in 0..n {
        for v in 0..n {
            if u != v && lambda[u] < lambda[v] {
                inst.add_unit(Lit::pos(pair_var(n, u, v)));
            }
        }
    }
    // Group edges by label to pair up only equally labeled ones.
    let mut by_label: Vec<Vec<(StateId, StateId)>> = vec![Vec::new(); a.alphabet().len()];
    for e in a.edges() {
        by_label[e.label.index()].push((e.from, e.to));
    }
    for group in &by_label {
        for &(u1, u) in group {
            for &(v1, v) in group {
                if u != v && u1 != v1 {
                    inst.add_clause(Lit::neg(pair_var(n, u1, v1)), Lit::pos(pair_var(n, u, v)));
                }
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let (x, y) = (pair_var(n, u, v), pair_var(n, v, u));
            inst.add_clause(Lit::neg(x), Lit::neg(y));
            inst.add_clause(Lit::pos(x), Lit::pos(y));
        }
    }
    Ok(inst)
}

/// Strongly connected components of the implication graph, numbered in the
/// order Tarjan's algorithm completes them (sinks first).
fn tarjan(n_nodes: usize, adj_start: &[usize], adj: &[usize]) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n_nodes];
    let mut low = vec![0; n_nodes];
    let mut comp = vec![NONE; n_nodes];
    let mut on_stack = vec![false; n_nodes];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let (mut next_index, mut next_comp) = (0, 0);
    for root in 0..n_nodes {
        if index[root] != NONE {
            continue;
        }
        call.push((root, adj_start[root]));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut it)) = call.last_mut() {
            if *it < adj_start[v + 1] {
                let w = adj[*it];
                *it += 1;
                if index[w] == NONE {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, adj_start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Satisfying assignment via the implication graph, or `None`.
pub fn solve_2sat(inst: &TwoSatInstance) -> Option<Vec<bool>> {
    let nodes = 2 * inst.n_vars;
    let mut deg = vec![0usize; nodes + 1];
    for &(a, b) in &inst.clauses {
        deg[(!a).node() + 1] += 1;
        deg[(!b).node() + 1] += 1;
    }
    for i in 0..nodes {
        deg[i + 1] += deg[i];
    }
    let mut fill = deg.clone();
    let mut adj = vec![0; deg[nodes]];
    for &(a, b) in &inst.clauses {
        adj[fill[(!a).node()]] = b.node();
        fill[(!a).node()] += 1;
        adj[fill[(!b).node()]] = a.node();
        fill[(!b).node()] += 1;
    }
    let comp = tarjan(nodes, &deg, &adj);
    let mut value = Vec::with_capacity(inst.n_vars);
    for x in 0..inst.n_vars {
        let (p, q) = (comp[Lit::pos(x).node()], comp[Lit::neg(x).node()]);
        if p == q {
            return None;
        }
        // Components finish in reverse topological order; take the literal
        // that comes later topologically.
        value.push(p < q);
    }
    Some(value)
}

/// Decides whether an automaton of degree at most two is Wheeler and, if so,
/// returns an order. The extracted order is verified before it is returned.
pub fn sort_2nfa(a: &Automaton) -> Result<Option<WheelerOrder>> {
    let inst = build_2sat(a)?;
    let Some(value) = solve_2sat(&inst) else {
        return Ok(None);
    };
    let n = a.n_states();
    let mut rank = vec![0usize; n];
    for u in 0..n {
        rank[u] = (0..n).filter(|&v| v != u && value[pair_var(n, v, u)]).count();
    }
    let ord = WheelerOrder::from_ranks(rank)
        .map_err(|_| Error::Internal("2-SAT assignment does not encode a total order".into()))?;
    if !verify_wheeler_order(a, &ord) {
        return Err(Error::Internal(
            "order extracted from the 2-SAT assignment fails verification".into(),
        ));
    }
    Ok(Some(ord))
}

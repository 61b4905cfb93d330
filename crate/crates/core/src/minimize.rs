//! State equivalence, Wheeler DFA minimization and language equivalence.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::Symbol;
use crate::automaton::{Automaton, Edge, StateId};
use crate::error::{Error, Reason, Result};
use crate::wheeler_check::{verify_wheeler_order, WheelerOrder};

/// Partition of the states into classes numbered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePartition {
    class: Vec<usize>,
    reps: Vec<StateId>,
}

impl StatePartition {
    /// Builds a partition from arbitrary class labels, renumbering classes
    /// by their smallest member.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut class = Vec::with_capacity(labels.len());
        let mut reps = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let id = *seen.entry(l).or_insert_with(|| {
                reps.push(v);
                reps.len() - 1
            });
            class.push(id);
        }
        StatePartition { class, reps }
    }

    pub fn class_of(&self, v: StateId) -> usize {
        self.class[v]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    pub fn representative(&self, class: usize) -> StateId {
        self.reps[class]
    }

    pub fn n_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn equivalent(&self, u: StateId, v: StateId) -> bool {
        self.class[u] == self.class[v]
    }
}

/// Hopcroft refinement on the automaton completed with a rejecting sink.
/// Returns the block of every state; the sink is index `n`.
fn hopcroft_blocks(a: &Automaton) -> Vec<usize> {
    let n = a.n_states();
    let sink = n;
    let total = n + 1;
    let sigma = a.alphabet().len();
    // Inverse transitions per letter, sink included.
    let mut inv_start = vec![0usize; sigma * total + 1];
    let mut delta = vec![sink; sigma * total];
    for e in a.edges() {
        delta[e.from * sigma + e.label.index()] = e.to;
    }
    for q in 0..total {
        for c in 0..sigma {
            inv_start[c * total + delta[q * sigma + c] + 1] += 1;
        }
    }
    for i in 0..sigma * total {
        inv_start[i + 1] += inv_start[i];
    }
    let mut fill = inv_start.clone();
    let mut inv = vec![0usize; sigma * total];
    for q in 0..total {
        for c in 0..sigma {
            let k = c * total + delta[q * sigma + c];
            inv[fill[k]] = q;
            fill[k] += 1;
        }
    }

    // Refinable partition: `elems` is grouped by block, block b owns
    // elems[start[b]..end[b]].
    let mut elems: Vec<usize> = Vec::with_capacity(total);
    elems.extend((0..n).filter(|&v| a.is_accepting(v)));
    let n_final = elems.len();
    elems.extend((0..total).filter(|&v| v == sink || !a.is_accepting(v)));
    let mut pos = vec![0usize; total];
    for (i, &q) in elems.iter().enumerate() {
        pos[q] = i;
    }
    let mut block = vec![0usize; total];
    let mut start = Vec::new();
    let mut end = Vec::new();
    if n_final > 0 {
        start.push(0);
        end.push(n_final);
    }
    start.push(n_final);
    end.push(total);
    let nb = start.len();
    for b in 0..nb {
        for i in start[b]..end[b] {
            block[elems[i]] = b;
        }
    }
    let mut in_work: Vec<Vec<bool>> = Vec::new();
    let mut work: Vec<(usize, usize)> = Vec::new();
    for _ in 0..nb {
        in_work.push(vec![false; sigma]);
    }
    if nb == 2 {
        let small = if end[0] - start[0] <= end[1] - start[1] { 0 } else { 1 };
        for c in 0..sigma {
            work.push((small, c));
            in_work[small][c] = true;
        }
    }
    let mut marked = vec![0usize; 0];
    let mut touched: Vec<usize> = Vec::new();
    let mut is_marked = vec![false; total];
    let mut xs: Vec<usize> = Vec::new();
    while let Some((b, c)) = work.pop() {
        in_work[b][c] = false;
        xs.clear();
        for i in start[b]..end[b] {
            let q = elems[i];
            let k = c * total + q;
            xs.extend_from_slice(&inv[inv_start[k]..inv_start[k + 1]]);
        }
        touched.clear();
        for &p in &xs {
            if is_marked[p] {
                continue;
            }
            is_marked[p] = true;
            let y = block[p];
            if marked.len() <= y {
                marked.resize(y + 1, 0);
            }
            if marked[y] == 0 {
                touched.push(y);
            }
            // Move p to the front of its block's unmarked part.
            let dst = start[y] + marked[y];
            let other = elems[dst];
            elems.swap(dst, pos[p]);
            pos[other] = pos[p];
            pos[p] = dst;
            marked[y] += 1;
        }
        for &p in &xs {
            is_marked[p] = false;
        }
        for &y in &touched {
            let m = marked[y];
            marked[y] = 0;
            let size = end[y] - start[y];
            if m == size {
                continue;
            }
            let nb = start.len();
            start.push(start[y]);
            end.push(start[y] + m);
            start[y] += m;
            for i in start[nb]..end[nb] {
                block[elems[i]] = nb;
            }
            in_work.push(vec![false; sigma]);
            let smaller = if m <= size - m { nb } else { y };
            for d in 0..sigma {
                if in_work[y][d] {
                    in_work[nb][d] = true;
                    work.push((nb, d));
                } else {
                    in_work[smaller][d] = true;
                    work.push((smaller, d));
                }
            }
        }
    }
    block
}

/// Myhill-Nerode equivalence of the states of a DFA, missing transitions
/// going to an implicit rejecting sink. States that accept nothing form one
/// class.
pub fn state_equivalence(a: &Automaton) -> Result<StatePartition> {
    if !a.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let block = hopcroft_blocks(a);
    Ok(StatePartition::from_labels(&block[..a.n_states()]))
}

/// Minimal DFA by Hopcroft's algorithm. States accepting nothing are dropped
/// and the source always keeps a class of its own, so that it has no
/// incoming edges. State ids follow the smallest original member.
pub fn hopcroft(a: &Automaton) -> Result<Automaton> {
    if !a.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let n = a.n_states();
    let block = hopcroft_blocks(a);
    let dead = block[n];
    let s = a.source();
    if block[s] == dead {
        return Ok(Automaton::source_only(a.alphabet().clone(), false));
    }
    // Label n + 1 is free: reserve it for the source's singleton class.
    let labels: Vec<Option<usize>> = (0..n)
        .map(|v| {
            if v == s {
                Some(n + 1)
            } else if block[v] == dead {
                None
            } else {
                Some(block[v])
            }
        })
        .collect();
    let mut ids: HashMap<usize, usize> = HashMap::from([(n + 1, 0)]);
    let mut new_id = vec![None; n];
    new_id[s] = Some(0);
    for v in 0..n {
        if let Some(l) = labels[v] {
            let next = ids.len();
            new_id[v] = Some(*ids.entry(l).or_insert(next));
        }
    }
    let k = ids.len();
    let accepting: Vec<StateId> = a.accepting().filter_map(|v| new_id[v]).collect();
    let mut edges: Vec<Edge> = a
        .edges()
        .iter()
        .filter_map(|e| Some(Edge::new(new_id[e.from]?, new_id[e.to]?, e.label)))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Automaton::new(a.alphabet().clone(), k, 0, accepting, edges)
}

fn lambda_and_eq(a: &Automaton, ord: &WheelerOrder) -> Result<(Vec<crate::alphabet::Label>, StatePartition)> {
    if !verify_wheeler_order(a, ord) {
        return Err(Error::NotWheeler(Reason::Verification));
    }
    let eq = state_equivalence(a)?;
    let lambda = a.check_input_consistency()?;
    Ok((lambda, eq))
}

/// Minimum Wheeler DFA of a Wheeler DFA: merges every maximal run of
/// order-adjacent states that are equivalent and share their incoming
/// label. The result has state ids equal to ranks.
pub fn wheeler_minimize(a: &Automaton, ord: &WheelerOrder) -> Result<(Automaton, WheelerOrder)> {
    let (lambda, eq) = lambda_and_eq(a, ord)?;
    let n = a.n_states();
    let mut class = vec![0usize; n];
    let mut k = 0;
    for r in 1..n {
        let (u, v) = (ord.state_at(r - 1), ord.state_at(r));
        if !(eq.equivalent(u, v) && lambda[u] == lambda[v]) {
            k += 1;
        }
        class[v] = k;
    }
    let accepting: Vec<StateId> = a.accepting().map(|v| class[v]).collect();
    let mut edges: Vec<Edge> = a
        .edges()
        .iter()
        .map(|e| Edge::new(class[e.from], class[e.to], e.label))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let m = Automaton::new(a.alphabet().clone(), k + 1, class[a.source()], accepting, edges)?;
    Ok((m, WheelerOrder::identity(k + 1)))
}

/// True when no two order-adjacent states are equivalent with the same
/// incoming label.
pub fn is_minimum_wdfa(a: &Automaton, ord: &WheelerOrder) -> Result<bool> {
    let (lambda, eq) = lambda_and_eq(a, ord)?;
    Ok(ord.sequence().windows(2).all(|w| {
        let (u, v) = (w[0], w[1]);
        !(eq.equivalent(u, v) && lambda[u] == lambda[v])
    }))
}

/// Language equality of two DFAs. Symbols are matched by name, so the
/// alphabets may differ.
pub fn language_equivalent(a: &Automaton, b: &Automaton) -> Result<bool> {
    if !a.is_deterministic() || !b.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let mut names: Vec<&str> = a.alphabet().tokens().iter().map(String::as_str).collect();
    for t in b.alphabet().tokens() {
        if a.alphabet().get(t).is_none() {
            names.push(t);
        }
    }
    let sa: Vec<Option<Symbol>> = names.iter().map(|t| a.alphabet().get(t)).collect();
    let sb: Vec<Option<Symbol>> = names.iter().map(|t| b.alphabet().get(t)).collect();
    type P = (Option<StateId>, Option<StateId>);
    let acc = |p: P| (p.0.is_some_and(|x| a.is_accepting(x)), p.1.is_some_and(|y| b.is_accepting(y)));
    let start: P = (Some(a.source()), Some(b.source()));
    let mut seen: HashMap<P, ()> = HashMap::from([(start, ())]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let (x, y) = acc(p);
        if x != y {
            return Ok(false);
        }
        for i in 0..names.len() {
            let nx = p.0.zip(sa[i]).and_then(|(u, c)| a.succ(u, c));
            let ny = p.1.zip(sb[i]).and_then(|(u, c)| b.succ(u, c));
            if nx.is_none() && ny.is_none() {
                continue;
            }
            let q = (nx, ny);
            if seen.insert(q, ()).is_none() {
                queue.push_back(q);
            }
        }
    }
    Ok(true)
}

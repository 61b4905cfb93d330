//! Prefix sorting of Wheeler DFAs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::alphabet::Label;
use crate::automaton::{Automaton, StateId};
use crate::dyntriple::{DynTriple, NodeId};
use crate::error::{Error, Reason, Result};
use crate::wheeler_check::{verify_wheeler_order, WheelerOrder};

fn fail(r: Reason) -> Error {
    Error::NotWheeler(r)
}

/// Online sorter for acyclic DFAs. States are consumed in Kahn order
/// (smallest ready id first) and each one is placed in `O(log n)` time per
/// incoming edge.
///
/// Fails with [`Error::NotWheeler`] carrying the kind of inconsistency
/// met, or [`Reason::Cycle`] when the automaton is cyclic.
pub fn sort_online(a: &Automaton) -> Result<WheelerOrder> {
    sort_online_checked(a, false)
}

/// As [`sort_online`], checking the full structure invariants after every step.
pub fn sort_online_checked(a: &Automaton, check: bool) -> Result<WheelerOrder> {
    if !a.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let n = a.n_states();
    let sigma = a.alphabet().len();
    let mut dt = DynTriple::new(sigma);
    let mut node: Vec<NodeId> = vec![NodeId::MAX; n];
    let mut indeg: Vec<usize> = (0..n).map(|v| a.in_degree(v)).collect();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(a.source()));
    let mut done = 0;
    let mut preds: Vec<(usize, NodeId)> = Vec::new();
    while let Some(Reverse(u)) = heap.pop() {
        if u == a.source() {
            node[u] = dt.insert(0, u, Label::Hash.dense(), 1);
        } else {
            let mut edges = a.in_edges(u);
            let b = edges.next().expect("non-source states have predecessors").label;
            preds.clear();
            for e in a.in_edges(u) {
                if e.label != b {
                    return Err(fail(Reason::InputConsistency { state: u }));
                }
                let x = node[e.from];
                preds.push((dt.position(x), x));
            }
            preds.sort_unstable();
            let c = b.index();
            let (vmin, xmin) = preds[0];
            let (vmax, xmax) = *preds.last().unwrap();
            if dt.out_count(c, vmin, vmax) > 0 {
                return Err(fail(Reason::Type1 { state: u }));
            }
            if preds.iter().any(|&(pos, _)| dt.is_reserved(pos, c)) {
                return Err(fail(Reason::Type2 { state: u }));
            }
            let k = dt.in_start(Label::Sym(b).dense()) + dt.out_rank(c, vmin) as u64;
            let pos = dt
                .lex_from_in(k)
                .ok_or_else(|| Error::Internal("insertion point splits an IN block".into()))?;
            node[u] = dt.insert(pos, u, Label::Sym(b).dense(), preds.len() as u32);
            for &(_, x) in &preds {
                dt.set_out(x, c);
            }
            if xmin != xmax {
                dt.reserve(xmin, xmax, c);
            }
        }
        if check {
            dt.check_invariants().map_err(Error::Internal)?;
        }
        done += 1;
        for e in a.out_edges(u) {
            indeg[e.to] -= 1;
            if indeg[e.to] == 0 {
                heap.push(Reverse(e.to));
            }
        }
    }
    if done < n {
        return Err(fail(Reason::Cycle));
    }
    WheelerOrder::from_sequence(dt.states(), n)
}

/// Offline sorter for DFAs, cyclic or not: colex-sorts the labels of the
/// paths in a BFS spanning tree by prefix doubling, then verifies the
/// candidate order. `O(n log² n + m)`.
pub fn sort_offline(a: &Automaton) -> Result<WheelerOrder> {
    if !a.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let lambda = a.check_input_consistency().map_err(|e| match e {
        Error::NotInputConsistent { state, .. } => fail(Reason::InputConsistency { state }),
        e => e,
    })?;
    let ord = spanning_tree_order(a, &lambda);
    if verify_wheeler_order(a, &ord) {
        Ok(ord)
    } else {
        Err(fail(Reason::Verification))
    }
}

fn spanning_tree_order(a: &Automaton, lambda: &[Label]) -> WheelerOrder {
    let n = a.n_states();
    const ROOT: usize = usize::MAX;
    let mut parent = vec![ROOT; n];
    let mut seen = vec![false; n];
    seen[a.source()] = true;
    let mut queue = VecDeque::from([a.source()]);
    while let Some(u) = queue.pop_front() {
        for e in a.out_edges(u) {
            if !seen[e.to] {
                seen[e.to] = true;
                parent[e.to] = u;
                queue.push_back(e.to);
            }
        }
    }
    // rank[v] orders the first 2^k symbols of the string read from v up to
    // the root; anc[v] is the 2^k-th ancestor.
    let mut rank: Vec<i64> = lambda.iter().map(|l| l.dense() as i64).collect();
    let mut anc = parent.clone();
    let mut keys: Vec<(i64, i64, usize)> = Vec::with_capacity(n);
    loop {
        keys.clear();
        keys.extend((0..n).map(|v| {
            let up = if anc[v] == ROOT { -1 } else { rank[anc[v]] };
            (rank[v], up, v)
        }));
        keys.sort_unstable();
        let mut next = vec![0i64; n];
        let mut r = 0;
        for i in 0..n {
            if i > 0 && (keys[i].0, keys[i].1) != (keys[i - 1].0, keys[i - 1].1) {
                r += 1;
            }
            next[keys[i].2] = r;
        }
        rank = next;
        if r as usize == n - 1 || anc.iter().all(|&x| x == ROOT) {
            break;
        }
        anc = anc
            .iter()
            .map(|&x| if x == ROOT { ROOT } else { anc[x] })
            .collect();
    }
    let seq: Vec<StateId> = keys.iter().map(|k| k.2).collect();
    WheelerOrder::from_sequence(seq, n).expect("permutation")
}

use crate::alphabet::Label;
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};

/// Total order on the states of an automaton, stored both ways.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WheelerOrder {
    order: Vec<StateId>,
    rank: Vec<usize>,
}

impl WheelerOrder {
    /// `seq` lists the states by increasing rank.
    pub fn from_sequence(seq: Vec<StateId>, n: usize) -> Result<Self> {
        if seq.len() != n {
            return Err(Error::InvalidOrder(format!(
                "expected {n} states, got {}",
                seq.len()
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (r, &v) in seq.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrder(format!("state {v} out of range")));
            }
            if rank[v] != usize::MAX {
                return Err(Error::InvalidOrder(format!("state {v} listed twice")));
            }
            rank[v] = r;
        }
        Ok(WheelerOrder { order: seq, rank })
    }

    /// `ranks[v]` is the position of state `v`.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut order = vec![usize::MAX; n];
        for (v, &r) in ranks.iter().enumerate() {
            if r >= n || order[r] != usize::MAX {
                return Err(Error::InvalidOrder(format!("rank vector is not a permutation at state {v}")));
            }
            order[r] = v;
        }
        Ok(WheelerOrder { order, rank: ranks })
    }

    /// The order `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Self {
        WheelerOrder {
            order: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank(&self, v: StateId) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn state_at(&self, r: usize) -> StateId {
        self.order[r]
    }

    pub fn sequence(&self) -> &[StateId] {
        &self.order
    }
}

fn counting_sort_by<T: Copy>(items: &[T], buckets: usize, key: impl Fn(&T) -> usize) -> Vec<T> {
    let mut start = vec![0usize; buckets + 1];
    for it in items {
        start[key(it) + 1] += 1;
    }
    for i in 0..buckets {
        start[i + 1] += start[i];
    }
    let mut out = items.to_vec();
    for it in items {
        let k = key(it);
        out[start[k]] = *it;
        start[k] += 1;
    }
    out
}

/// Checks both Wheeler properties in `O(n + m)` by radix sorting edges as
/// `(label, rank(from), rank(to))` and scanning once.
///
/// Returns false for automata that are not input-consistent and for orders
/// not placing the source first.
pub fn verify_wheeler_order(a: &Automaton, ord: &WheelerOrder) -> bool {
    let n = a.n_states();
    if ord.len() != n || ord.rank(a.source()) != 0 {
        return false;
    }
    let lambda = match a.check_input_consistency() {
        Ok(l) => l,
        Err(_) => return false,
    };
    // Property (i) on states: labels never decrease along the order.
    if ord.sequence().windows(2).any(|w| lambda[w[0]] > lambda[w[1]]) {
        return false;
    }
    let triples: Vec<(usize, usize, usize)> = a
        .edges()
        .iter()
        .map(|e| (e.label.index(), ord.rank(e.from), ord.rank(e.to)))
        .collect();
    let t = counting_sort_by(&triples, n, |t| t.2);
    let t = counting_sort_by(&t, n, |t| t.1);
    let t = counting_sort_by(&t, a.alphabet().len(), |t| t.0);
    t.windows(2).all(|w| {
        let ((la, _, va), (lb, _, vb)) = (w[0], w[1]);
        if la == lb {
            va <= vb
        } else {
            va < vb
        }
    })
}

/// Direct pairwise evaluation of the two Wheeler properties, quadratic in
/// the number of edges. Kept independent of [`verify_wheeler_order`].
pub(crate) fn pairwise_wheeler(a: &Automaton, rank: &[usize]) -> bool {
    if rank[a.source()] != 0 {
        return false;
    }
    let edges = a.edges();
    for e1 in edges {
        for e2 in edges {
            if e1.label < e2.label && rank[e1.to] >= rank[e2.to] {
                return false;
            }
            if e1.label == e2.label && rank[e1.from] < rank[e2.from] && rank[e1.to] > rank[e2.to] {
                return false;
            }
        }
    }
    true
}

/// Exhaustive search over orders with the source first. Only feasible for
/// tiny automata; limited to 10 states.
///
/// Candidates are enumerated in lexicographic order of their state sequence,
/// so the result is deterministic.
pub fn brute_force_wheeler_order(a: &Automaton) -> Result<Option<WheelerOrder>> {
    let n = a.n_states();
    if n > 10 {
        return Err(Error::TooLarge(n));
    }
    // Incoming label sets prune candidates: a state with two labels can
    // never be placed, and labels must not decrease along the order.
    let mut lam: Vec<Option<Label>> = vec![None; n];
    lam[a.source()] = Some(Label::Hash);
    for e in a.edges() {
        match lam[e.to] {
            None => lam[e.to] = Some(Label::Sym(e.label)),
            Some(l) if l != Label::Sym(e.label) => return Ok(None),
            _ => {}
        }
    }
    let mut seq = vec![a.source()];
    let mut used = vec![false; n];
    used[a.source()] = true;
    let mut rank = vec![0usize; n];
    fn go(
        a: &Automaton,
        lam: &[Option<Label>],
        seq: &mut Vec<StateId>,
        used: &mut [bool],
        rank: &mut [usize],
    ) -> bool {
        let n = used.len();
        if seq.len() == n {
            for (r, &v) in seq.iter().enumerate() {
                rank[v] = r;
            }
            return pairwise_wheeler(a, rank);
        }
        let last = lam[*seq.last().unwrap()];
        for v in 0..n {
            if used[v] || lam[v] < last {
                continue;
            }
            used[v] = true;
            seq.push(v);
            if go(a, lam, seq, used, rank) {
                return true;
            }
            seq.pop();
            used[v] = false;
        }
        false
    }
    if go(a, &lam, &mut seq, &mut used, &mut rank) {
        Ok(Some(WheelerOrder::from_sequence(seq, n)?))
    } else {
        Ok(None)
    }
}

//! Automaton generators. All randomness comes from caller-provided RNGs or
//! explicit seeds.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Label, Symbol, Word};
use crate::automaton::{Automaton, Edge, StateId};
use crate::wheeler_check::WheelerOrder;

/// Alphabet `a, b, c, ...` of the given size (at most 26).
pub fn letters(sigma: usize) -> Alphabet {
    assert!((1..=26).contains(&sigma), "alphabet size must be in 1..=26");
    Alphabet::new((b'a'..b'a' + sigma as u8).map(|c| (c as char).to_string()))
        .expect("distinct letters")
}

/// DFA for `{c α e : α ∈ {a,b}^m} ∪ {d α f : α ∈ {a,b}^m}` with `4m + 5` states.
///
/// Layout: source 0, c-state 1, d-state 2, then for each branch `m` levels
/// of an (a-state, b-state) pair, fully connected level to level, then the
/// accepting e-sink and f-sink.
pub fn gen_worst_case(m: usize) -> Automaton {
    assert!(m >= 1);
    let sigma = letters(6);
    let [a, b, c, d, e, f] = [0, 1, 2, 3, 4, 5].map(Symbol);
    let e_sink = 3 + 4 * m;
    let f_sink = e_sink + 1;
    let mut edges = Vec::new();
    for (branch, head, sink, last) in [(0, 1, e_sink, e), (1, 2, f_sink, f)] {
        let level = |i: usize| 3 + 2 * m * branch + 2 * i;
        edges.push(Edge::new(0, head, if branch == 0 { c } else { d }));
        let mut prev = vec![head];
        for i in 0..m {
            let (xa, xb) = (level(i), level(i) + 1);
            for &p in &prev {
                edges.push(Edge::new(p, xa, a));
                edges.push(Edge::new(p, xb, b));
            }
            prev = vec![xa, xb];
        }
        for &p in &prev {
            edges.push(Edge::new(p, sink, last));
        }
    }
    Automaton::new(sigma, 4 * m + 5, 0, [e_sink, f_sink], edges).expect("valid construction")
}

/// Tree-shaped DFA accepting exactly `words`. States are numbered in
/// creation order while inserting the words in sorted order.
pub fn trie_from_strings(alphabet: Alphabet, words: &[Word]) -> Automaton {
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort();
    sorted.dedup();
    let mut children: Vec<Vec<(Symbol, StateId)>> = vec![Vec::new()];
    let mut accepting = Vec::new();
    let mut edges = Vec::new();
    for w in sorted {
        let mut cur = 0;
        for &c in w {
            cur = match children[cur].iter().find(|x| x.0 == c) {
                Some(&(_, v)) => v,
                None => {
                    let v = children.len();
                    children.push(Vec::new());
                    children[cur].push((c, v));
                    edges.push(Edge::new(cur, v, c));
                    v
                }
            };
        }
        accepting.push(cur);
    }
    Automaton::new(alphabet, children.len(), 0, accepting, edges).expect("tries are valid")
}

/// Colex order of a tree-shaped automaton rooted at its source, computed
/// directly from the root-to-node strings.
pub fn trie_order(t: &Automaton) -> WheelerOrder {
    let n = t.n_states();
    let mut path: Vec<Vec<Symbol>> = vec![Vec::new(); n];
    for v in t.topological_order().expect("trees are acyclic") {
        for e in t.out_edges(v) {
            let mut p = path[v].clone();
            p.push(e.label);
            path[e.to] = p;
        }
    }
    let mut seq: Vec<StateId> = (0..n).collect();
    seq.sort_by(|&x, &y| path[x].iter().rev().cmp(path[y].iter().rev()));
    WheelerOrder::from_sequence(seq, n).expect("permutation")
}

/// Random trie with `n` states: each new state hangs off a uniformly chosen
/// earlier state under a label that state does not use yet.
pub fn random_trie<R: Rng>(rng: &mut R, n: usize, sigma: usize, p_accept: f64) -> Automaton {
    assert!(n >= 1 && sigma >= 1);
    let mut used: Vec<Vec<bool>> = vec![vec![false; sigma]];
    // States that still have a free outgoing label.
    let mut open: Vec<StateId> = vec![0];
    let mut edges = Vec::with_capacity(n - 1);
    for v in 1..n {
        let i = rng.gen_range(0..open.len());
        let u = open[i];
        let free: Vec<usize> = (0..sigma).filter(|&c| !used[u][c]).collect();
        let c = free[rng.gen_range(0..free.len())];
        used[u][c] = true;
        if free.len() == 1 {
            open.swap_remove(i);
        }
        edges.push(Edge::new(u, v, Symbol(c as u32)));
        used.push(vec![false; sigma]);
        open.push(v);
    }
    let mut accepting: Vec<StateId> = (0..n).filter(|_| rng.gen_bool(p_accept)).collect();
    // Leaves must accept, otherwise they are dead weight.
    let mut has_child = vec![false; n];
    for e in &edges {
        has_child[e.from] = true;
    }
    accepting.extend((0..n).filter(|&v| !has_child[v]));
    accepting.sort_unstable();
    accepting.dedup();
    Automaton::new(letters(sigma), n, 0, accepting, edges).expect("valid trie")
}

/// Random acyclic DFA on `states` states over `sigma` letters: ids are a
/// topological order, every state past the source gets a random incoming
/// label and a random earlier parent, then extra forward edges are added
/// while keeping the automaton deterministic and input-consistent.
pub fn random_dfa(states: usize, sigma: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_dfa_with(&mut rng, states, sigma, true)
}

/// As [`random_dfa`]; when `acyclic` is false extra edges may also point backwards.
pub fn random_dfa_with<R: Rng>(rng: &mut R, states: usize, sigma: usize, acyclic: bool) -> Automaton {
    random_nfa_with(rng, states, sigma, 1, acyclic)
}

/// Random input-consistent automaton in which every state has at most `d`
/// equally labeled outgoing edges.
pub fn random_nfa_with<R: Rng>(
    rng: &mut R,
    states: usize,
    sigma: usize,
    d: usize,
    acyclic: bool,
) -> Automaton {
    assert!(states >= 1 && sigma >= 1 && d >= 1);
    let mut lambda = vec![usize::MAX; states];
    let mut outc = vec![vec![0usize; sigma]; states];
    let mut edges: Vec<Edge> = Vec::new();
    for v in 1..states {
        let c = rng.gen_range(0..sigma);
        let cands: Vec<StateId> = (0..v).filter(|&u| outc[u][c] < d).collect();
        let (c, cands) = if cands.is_empty() {
            // Every earlier state is saturated on c; another label has room.
            let c2 = (0..sigma)
                .find(|&c2| (0..v).any(|u| outc[u][c2] < d))
                .expect("capacity left");
            (c2, (0..v).filter(|&u| outc[u][c2] < d).collect())
        } else {
            (c, cands)
        };
        let u = *cands.choose(rng).unwrap();
        lambda[v] = c;
        outc[u][c] += 1;
        edges.push(Edge::new(u, v, Symbol(c as u32)));
    }
    if states > 1 {
        let extra = rng.gen_range(0..=states * d);
        for _ in 0..extra {
            let v = rng.gen_range(1..states);
            let u = if acyclic {
                rng.gen_range(0..v)
            } else {
                rng.gen_range(0..states)
            };
            let c = lambda[v];
            let e = Edge::new(u, v, Symbol(c as u32));
            if outc[u][c] < d && !edges.contains(&e) {
                outc[u][c] += 1;
                edges.push(e);
            }
        }
    }
    let mut accepting: Vec<StateId> = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
    if accepting.is_empty() {
        accepting.push(states - 1);
    }
    Automaton::new(letters(sigma), states, 0, accepting, edges).expect("valid construction")
}

/// Random Wheeler NFA together with a valid order.
///
/// Starts from a random trie in colex order and merges random runs of
/// order-adjacent states sharing an incoming label. Such quotients keep both
/// Wheeler properties under the induced order, and may introduce
/// nondeterminism and cycles.
pub fn random_wnfa<R: Rng>(
    rng: &mut R,
    trie_states: usize,
    sigma: usize,
    p_merge: f64,
) -> (Automaton, WheelerOrder) {
    let t = random_trie(rng, trie_states, sigma, 0.3);
    let ord = trie_order(&t);
    let lambda = t.check_input_consistency().expect("tries are input-consistent");
    let n = t.n_states();
    let mut class = vec![0usize; n];
    let mut k = 0;
    for r in 1..n {
        let (prev, v) = (ord.state_at(r - 1), ord.state_at(r));
        let same = lambda[prev] == lambda[v] && lambda[v] != Label::Hash;
        if !(same && rng.gen_bool(p_merge)) {
            k += 1;
        }
        class[v] = k;
    }
    let mut edges: Vec<Edge> = t
        .edges()
        .iter()
        .map(|e| Edge::new(class[e.from], class[e.to], e.label))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let accepting: Vec<StateId> = t.accepting().map(|v| class[v]).collect();
    let a = Automaton::new(t.alphabet().clone(), k + 1, 0, accepting, edges)
        .expect("quotient of a trie by order runs is valid");
    let ord = WheelerOrder::identity(k + 1);
    (a, ord)
}

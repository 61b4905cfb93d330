//! Interval powerset construction for Wheeler NFAs.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Automaton, Edge, StateId};
use crate::error::{Error, Reason, Result};
use crate::wheeler_check::{verify_wheeler_order, WheelerOrder};

/// Closed rank interval `[lo, hi]` of the input order.
pub type Interval = (usize, usize);

#[derive(Debug, Clone)]
pub struct Determinized {
    /// Deterministic automaton whose state ids equal their Wheeler ranks.
    pub automaton: Automaton,
    pub order: WheelerOrder,
    /// For every output state, the rank interval of input states it stands for.
    pub family: Vec<Interval>,
}

/// Determinizes a Wheeler NFA given with a Wheeler order.
///
/// Every subset reached by the powerset construction is an interval of the
/// order; the output states are ordered by `(min rank, max rank)`, which is
/// a Wheeler order of the result.
pub fn determinize(a: &Automaton, ord: &WheelerOrder) -> Result<Determinized> {
    if !verify_wheeler_order(a, ord) {
        return Err(Error::NotWheeler(Reason::Verification));
    }
    let sigma = a.alphabet().len();
    // Subsets as sorted rank lists.
    let mut subsets: Vec<Vec<usize>> = vec![vec![0]];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(vec![0], 0)]);
    let mut trans: Vec<(usize, usize, usize)> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut mark = vec![false; a.n_states()];
    while let Some(i) = queue.pop_front() {
        for c in 0..sigma {
            let mut next: Vec<usize> = Vec::new();
            for &r in &subsets[i] {
                for e in a.out_edges(ord.state_at(r)) {
                    let t = ord.rank(e.to);
                    if e.label.index() == c && !mark[t] {
                        mark[t] = true;
                        next.push(t);
                    }
                }
            }
            if next.is_empty() {
                continue;
            }
            for &t in &next {
                mark[t] = false;
            }
            next.sort_unstable();
            if next[next.len() - 1] - next[0] + 1 != next.len() {
                return Err(Error::IntervalViolation);
            }
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = subsets.len();
                    index.insert(next.clone(), j);
                    subsets.push(next);
                    queue.push_back(j);
                    j
                }
            };
            trans.push((i, j, c));
        }
    }
    let k = subsets.len();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.sort_by(|&x, &y| {
        let (sx, sy) = (&subsets[x], &subsets[y]);
        (sx[0], sx[sx.len() - 1], sx).cmp(&(sy[0], sy[sy.len() - 1], sy))
    });
    for w in perm.windows(2) {
        let (sx, sy) = (&subsets[w[0]], &subsets[w[1]]);
        assert!(
            (sx[0], sx[sx.len() - 1]) != (sy[0], sy[sy.len() - 1]),
            "distinct subsets share both endpoints"
        );
    }
    let mut new_id = vec![0usize; k];
    for (r, &x) in perm.iter().enumerate() {
        new_id[x] = r;
    }
    let accepting: Vec<StateId> = (0..k)
        .filter(|&x| subsets[x].iter().any(|&r| a.is_accepting(ord.state_at(r))))
        .map(|x| new_id[x])
        .collect();
    let edges = trans
        .iter()
        .map(|&(i, j, c)| Edge::new(new_id[i], new_id[j], crate::alphabet::Symbol(c as u32)));
    let automaton = Automaton::new(a.alphabet().clone(), k, new_id[0], accepting, edges)?;
    let family = perm
        .iter()
        .map(|&x| (subsets[x][0], subsets[x][subsets[x].len() - 1]))
        .collect();
    Ok(Determinized {
        automaton,
        order: WheelerOrder::identity(k),
        family,
    })
}

/// True when no interval nested in another is strictly inside it (each
/// nested pair shares an endpoint) and there are at most `2n - 1` distinct
/// intervals over `0..n`.
pub fn check_prefix_suffix_family(fam: &[Interval], n: usize) -> bool {
    let mut f: Vec<Interval> = fam.to_vec();
    f.sort_unstable();
    f.dedup();
    if f.iter().any(|&(lo, hi)| lo > hi || hi >= n) {
        return false;
    }
    if f.len() > (2 * n).saturating_sub(1) {
        return false;
    }
    for &(lo, hi) in &f {
        for &(lo2, hi2) in &f {
            let inside = lo2 <= lo && hi <= hi2 && (lo, hi) != (lo2, hi2);
            if inside && lo != lo2 && hi != hi2 {
                return false;
            }
        }
    }
    true
}

/// The whole range, all its proper prefixes and all its proper suffixes:
/// `2n - 1` intervals, the most a prefix/suffix family over `n` elements can have.
pub fn tight_family(n: usize) -> Vec<Interval> {
    if n == 0 {
        return Vec::new();
    }
    let mut f = vec![(0, n - 1)];
    f.extend((0..n - 1).map(|i| (0, i)));
    f.extend((1..n).map(|i| (i, n - 1)));
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, Symbol};
    use crate::gen::random_wnfa;
    use crate::sorter::sort_offline;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families() {
        for n in 1..=20 {
            let f = tight_family(n);
            assert_eq!(f.len(), 2 * n - 1);
            assert!(check_prefix_suffix_family(&f, n));
            // One more interval breaks the bound or the property.
            if n >= 3 {
                let mut g = f.clone();
                g.push((1, 1));
                assert!(!check_prefix_suffix_family(&g, n));
            }
        }
        assert!(check_prefix_suffix_family(&[(2, 4)], 5));
        assert!(!check_prefix_suffix_family(&[(0, 2), (1, 1)], 3));
        assert!(check_prefix_suffix_family(&[(0, 2), (1, 2), (0, 0), (0, 0)], 3));
    }

    #[test]
    fn dfa_input_is_reproduced() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let a = Automaton::new(ab, 3, 0, [2], [
            Edge::new(0, 1, Symbol(1)),
            Edge::new(1, 1, Symbol(1)),
            Edge::new(1, 2, Symbol(0)),
        ])
        .unwrap();
        let ord = sort_offline(&a).unwrap();
        let d = determinize(&a, &ord).unwrap();
        assert_eq!(d.automaton.n_states(), 3);
        assert_eq!(d.family, vec![(0, 0), (1, 1), (2, 2)]);
        assert!(crate::minimize::language_equivalent(&a, &d.automaton).unwrap());
    }

    #[test]
    fn five_state_2nfa_bound() {
        // 0 -a-> {1, 2}, 1 -b-> 3, 2 -b-> {3, 4}; order 0 1 2 3 4.
        let ab = Alphabet::from_chars("ab").unwrap();
        let (a_, b) = (Symbol(0), Symbol(1));
        let x = Automaton::new(ab, 5, 0, [3, 4], [
            Edge::new(0, 1, a_),
            Edge::new(0, 2, a_),
            Edge::new(1, 3, b),
            Edge::new(2, 3, b),
            Edge::new(2, 4, b),
        ])
        .unwrap();
        let ord = WheelerOrder::identity(5);
        let d = determinize(&x, &ord).unwrap();
        assert!(d.automaton.n_states() <= 2 * 5 - 1 - 2);
        assert!(d.automaton.is_deterministic());
        assert!(verify_wheeler_order(&d.automaton, &d.order));
    }

    #[test]
    fn rejects_bad_order() {
        let a = crate::automaton::tests::bplus_a();
        assert!(matches!(
            determinize(&a, &WheelerOrder::identity(3)),
            Err(Error::NotWheeler(_))
        ));
    }

    #[test]
    fn random_wnfas() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let (s, size) = (rng.gen_range(1..=4), rng.gen_range(1..40));
            let (a, ord) = random_wnfa(&mut rng, size, s, 0.6);
            let d = determinize(&a, &ord).unwrap();
            let n = a.n_states();
            let sig = a.used_symbols().len();
            assert!(d.automaton.n_states() + sig < 2 * n, "{} {}", d.automaton.n_states(), n);
            assert!(check_prefix_suffix_family(&d.family, n));
            assert!(verify_wheeler_order(&d.automaton, &d.order));
        }
    }
}

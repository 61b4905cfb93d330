//! FM-index style index over a Wheeler automaton.
//!
//! States are identified by rank. A query walks a rank range through one
//! letter at a time: the `c`-edges leaving a range are consecutive among all
//! `c`-edges, and their targets form a range again (path coherence).
//!
//! Several edges can enter one state, so edges and states are counted
//! separately. Edges are laid out sorted by target rank (the IN order) and
//! `in_first` marks the first edge entering each state; with it an edge
//! interval maps to a state interval.

use std::fmt::Write as _;

use crate::alphabet::{Alphabet, Label, Symbol};
use crate::automaton::Automaton;
use crate::error::{Error, Reason, Result};
use crate::wheeler_check::{verify_wheeler_order, WheelerOrder};

/// Inclusive range of ranks, `None` when empty.
pub type RankRange = Option<(usize, usize)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryMode {
    /// `w` is accepted.
    Membership,
    /// `w` occurs inside some accepted word.
    SubstringClosure,
    /// `w` ends some accepted word.
    SuffixClosure,
}

/// Bitvector with rank support: one cumulative count per 64-bit word.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RankBits {
    words: Vec<u64>,
    before: Vec<u32>,
    len: usize,
}

impl RankBits {
    fn new(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let mut before = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u32;
        for w in &words {
            before.push(acc);
            acc += w.count_ones();
        }
        before.push(acc);
        RankBits { words, before, len: bits.len() }
    }

    /// Ones in `[0, i)`.
    fn rank(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let (w, b) = (i / 64, i % 64);
        let mut r = self.before[w] as usize;
        if b > 0 {
            r += (self.words[w] & ((1u64 << b) - 1)).count_ones() as usize;
        }
        r
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WheelerIndex {
    alphabet: Alphabet,
    n_states: usize,
    /// Outgoing labels of all states, by rank; state `r` owns
    /// `labels[out_start[r]..out_start[r + 1]]`.
    labels: Vec<u32>,
    out_start: Vec<usize>,
    /// `occ[c][i]`: occurrences of `c` in `labels[..i]`.
    occ: Vec<Vec<u32>>,
    /// First rank whose incoming label is `c`, for `#` and every letter
    /// (dense label order), plus `n_states` at the end.
    letter_starts: Vec<usize>,
    /// First edge labeled `c` in IN order.
    edge_starts: Vec<usize>,
    in_first: RankBits,
    accepting: RankBits,
}

impl WheelerIndex {
    /// Builds the index of `a` under the Wheeler order `ord`. States that
    /// cannot reach an accepting state are dropped first.
    pub fn build(a: &Automaton, ord: &WheelerOrder) -> Result<Self> {
        if !verify_wheeler_order(a, ord) {
            return Err(Error::NotWheeler(Reason::Verification));
        }
        let live = a.coreachable();
        let alphabet = a.alphabet().clone();
        if !live[a.source()] {
            return Ok(Self::assemble(alphabet, 0, Vec::new(), vec![0], Vec::new(), Vec::new()));
        }
        // Live states by rank.
        let seq: Vec<usize> = ord.sequence().iter().copied().filter(|&v| live[v]).collect();
        let mut rank = vec![usize::MAX; a.n_states()];
        for (r, &v) in seq.iter().enumerate() {
            rank[v] = r;
        }
        let mut labels = Vec::new();
        let mut out_start = vec![0];
        let mut in_deg = vec![0usize; seq.len()];
        for &v in &seq {
            let mut out: Vec<(u32, usize)> = a
                .out_edges(v)
                .iter()
                .filter(|e| live[e.to])
                .map(|e| (e.label.0, rank[e.to]))
                .collect();
            out.sort_unstable();
            for &(c, t) in &out {
                labels.push(c);
                in_deg[t] += 1;
            }
            out_start.push(labels.len());
        }
        let mut in_first = Vec::with_capacity(labels.len());
        for &d in &in_deg[1..] {
            in_first.push(true);
            in_first.extend(std::iter::repeat_n(false, d - 1));
        }
        let accepting = seq.iter().map(|&v| a.is_accepting(v)).collect();
        Ok(Self::assemble(alphabet, seq.len(), labels, out_start, in_first, accepting))
    }

    fn assemble(
        alphabet: Alphabet,
        n_states: usize,
        labels: Vec<u32>,
        out_start: Vec<usize>,
        in_first: Vec<bool>,
        accepting: Vec<bool>,
    ) -> Self {
        let sigma = alphabet.len();
        let mut occ = vec![vec![0u32; labels.len() + 1]; sigma];
        for (i, &c) in labels.iter().enumerate() {
            for (d, row) in occ.iter_mut().enumerate() {
                row[i + 1] = row[i] + (d == c as usize) as u32;
            }
        }
        let mut edge_starts = vec![0usize; sigma + 1];
        for c in 0..sigma {
            edge_starts[c + 1] = edge_starts[c] + occ[c][labels.len()] as usize;
        }
        let in_first = RankBits::new(&in_first);
        // Letter c's block starts after the states entered by smaller letters;
        // rank 0 is the source.
        let mut letter_starts = vec![0usize; sigma + 2];
        if n_states > 0 {
            for c in 0..sigma {
                letter_starts[c + 1] = 1 + in_first.rank(edge_starts[c]);
            }
        }
        letter_starts[sigma + 1] = n_states;
        WheelerIndex {
            alphabet,
            n_states,
            labels,
            out_start,
            occ,
            letter_starts,
            edge_starts,
            in_first,
            accepting: RankBits::new(&accepting),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_edges(&self) -> usize {
        self.labels.len()
    }

    /// First rank whose incoming label is `l`.
    pub fn letter_start(&self, l: Label) -> usize {
        self.letter_starts[l.dense()]
    }

    pub fn is_accepting(&self, r: usize) -> bool {
        self.accepting.get(r)
    }

    pub fn accepting_bits(&self) -> Vec<bool> {
        self.accepting.to_bits()
    }

    /// Whole rank range, or `None` for an empty index.
    pub fn full_range(&self) -> RankRange {
        (self.n_states > 0).then(|| (0, self.n_states - 1))
    }

    /// Range of the source alone.
    pub fn source_range(&self) -> RankRange {
        (self.n_states > 0).then_some((0, 0))
    }

    /// States reached by one `c`-edge from the states in `r`.
    pub fn follow(&self, r: RankRange, c: Symbol) -> RankRange {
        let (lo, hi) = r?;
        let row = self.occ.get(c.index())?;
        let base = self.edge_starts[c.index()];
        let e1 = base + row[self.out_start[lo]] as usize;
        let e2 = base + row[self.out_start[hi + 1]] as usize;
        if e1 == e2 {
            return None;
        }
        // The state entered by edge e has rank 1 + (first-edge marks in [0, e]) - 1.
        Some((self.in_first.rank(e1 + 1), self.in_first.rank(e2)))
    }

    /// Range reached by reading `w` from `start`.
    pub fn search(&self, start: RankRange, w: &[Symbol]) -> RankRange {
        w.iter().try_fold(start?, |r, &c| self.follow(Some(r), c))
    }

    pub fn has_accepting(&self, r: RankRange) -> bool {
        r.is_some_and(|(lo, hi)| self.accepting.rank(hi + 1) > self.accepting.rank(lo))
    }

    pub fn query(&self, w: &[Symbol], mode: QueryMode) -> bool {
        match mode {
            QueryMode::Membership => self.has_accepting(self.search(self.source_range(), w)),
            QueryMode::SubstringClosure => self.search(self.full_range(), w).is_some(),
            QueryMode::SuffixClosure => self.has_accepting(self.search(self.full_range(), w)),
        }
    }

    /// Parses `w` with the index alphabet and queries it.
    pub fn query_str(&self, w: &str, mode: QueryMode) -> Result<bool> {
        Ok(self.query(&self.alphabet.parse_word(w)?, mode))
    }

    /// Text form: `index v1`, `alphabet`, `labels` (tokens, `|` closes each
    /// state), `starts`, `inbits`, `accepting`.
    pub fn serialize(&self) -> String {
        let mut out = String::from("index v1\nalphabet");
        for t in self.alphabet.tokens() {
            write!(out, " {t}").unwrap();
        }
        out.push_str("\nlabels");
        for r in 0..self.n_states {
            for &c in &self.labels[self.out_start[r]..self.out_start[r + 1]] {
                write!(out, " {}", self.alphabet.name(Symbol(c))).unwrap();
            }
            out.push_str(" |");
        }
        out.push_str("\nstarts");
        for d in 0..=self.alphabet.len() {
            let name = if d == 0 { "#" } else { self.alphabet.name(Symbol(d as u32 - 1)) };
            write!(out, " {name}:{}", self.letter_starts[d]).unwrap();
        }
        out.push_str("\ninbits ");
        out.extend(self.in_first.to_bits().iter().map(|&b| if b { '1' } else { '0' }));
        out.push_str("\naccepting ");
        out.extend(self.accepting.to_bits().iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::MalformedIndex(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut section = |key: &str| -> Result<Vec<&str>> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing `{key}` line")))?;
            let mut toks = line.split_whitespace();
            if toks.next() != Some(key) {
                return Err(bad(&format!("expected `{key}` line")));
            }
            Ok(toks.collect())
        };
        if section("index")? != ["v1"] {
            return Err(bad("unsupported version"));
        }
        let alphabet = Alphabet::new(section("alphabet")?)?;
        let mut labels = Vec::new();
        let mut out_start = vec![0];
        for t in section("labels")? {
            if t == "|" {
                out_start.push(labels.len());
            } else {
                labels.push(alphabet.get(t).ok_or_else(|| bad(&format!("unknown label `{t}`")))?.0);
            }
        }
        if out_start.last() != Some(&labels.len()) {
            return Err(bad("labels must end with `|`"));
        }
        let n = out_start.len() - 1;
        let starts = section("starts")?;
        let bits = |toks: Vec<&str>| -> Result<Vec<bool>> {
            match toks.as_slice() {
                [] => Ok(Vec::new()),
                [s] => s
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(bad("bitstrings hold only 0 and 1")),
                    })
                    .collect(),
                _ => Err(bad("bitstring must be one token")),
            }
        };
        let in_first = bits(section("inbits")?)?;
        let accepting = bits(section("accepting")?)?;
        if lines.next().is_some() {
            return Err(bad("trailing content"));
        }
        if accepting.len() != n || in_first.len() != labels.len() {
            return Err(bad("section lengths disagree"));
        }
        if n > 0 && (in_first.iter().filter(|&&b| b).count() != n - 1 || in_first.first() == Some(&false)) {
            return Err(bad("inbits must mark one first edge per non-source state"));
        }
        if n == 0 && !labels.is_empty() {
            return Err(bad("edges without states"));
        }
        let ix = Self::assemble(alphabet, n, labels, out_start, in_first, accepting);
        let want: Vec<String> = (0..=ix.alphabet.len())
            .map(|d| {
                let name = if d == 0 { "#" } else { ix.alphabet.name(Symbol(d as u32 - 1)) };
                format!("{name}:{}", ix.letter_starts[d])
            })
            .collect();
        if starts != want {
            return Err(bad("letter starts disagree with the labels"));
        }
        ix.check_path_coherence()?;
        Ok(ix)
    }

    /// Every state's successor ranges are nondecreasing along ranks, which
    /// is what makes `follow` sound.
    fn check_path_coherence(&self) -> Result<()> {
        let mut last = vec![0usize; self.alphabet.len()];
        for r in 0..self.n_states {
            let mut prev: Option<u32> = None;
            for i in self.out_start[r]..self.out_start[r + 1] {
                let c = self.labels[i];
                if prev.is_some_and(|p| p > c) {
                    return Err(Error::MalformedIndex("labels of a state must be sorted".into()));
                }
                prev = Some(c);
                let (t, _) = self.follow(Some((r, r)), Symbol(c)).expect("edge exists");
                if t < last[c as usize] {
                    return Err(Error::MalformedIndex("not path coherent".into()));
                }
                last[c as usize] = t;
            }
        }
        Ok(())
    }
}

/// Builds the index of `a` under `ord`.
pub fn build_index(a: &Automaton, ord: &WheelerOrder) -> Result<WheelerIndex> {
    WheelerIndex::build(a, ord)
}

/// Closure queries answered directly on the automaton, by set simulation.
pub fn naive_query(a: &Automaton, w: &[Symbol], mode: QueryMode) -> bool {
    let live = a.coreachable();
    let start: Vec<usize> = match mode {
        QueryMode::Membership => vec![a.source()],
        _ => (0..a.n_states()).collect(),
    };
    let mut cur = start;
    for &c in w {
        let mut next: Vec<usize> = cur.iter().flat_map(|&u| a.successors(u, c)).collect();
        next.sort_unstable();
        next.dedup();
        cur = next;
    }
    match mode {
        QueryMode::SubstringClosure => cur.iter().any(|&v| live[v]),
        _ => cur.iter().any(|&v| a.is_accepting(v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::bplus_a;
    use crate::automaton::Edge;
    use crate::gen::{random_trie, random_wnfa, trie_order};
    use crate::sorter::sort_offline;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn word(ix: &WheelerIndex, s: &str) -> Vec<Symbol> {
        ix.alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn rank_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for len in [0, 1, 63, 64, 65, 200] {
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.3)).collect();
            let rb = RankBits::new(&bits);
            for i in 0..=len {
                assert_eq!(rb.rank(i), bits[..i].iter().filter(|&&b| b).count());
            }
            assert_eq!(rb.to_bits(), bits);
        }
    }

    #[test]
    fn source_only() {
        let a = Automaton::source_only(Alphabet::from_chars("a").unwrap(), true);
        let ix = build_index(&a, &WheelerOrder::identity(1)).unwrap();
        assert_eq!(ix.n_states(), 1);
        assert_eq!(ix.accepting_bits(), vec![true]);
        assert!(ix.query(&[], QueryMode::Membership));
        assert!(!ix.query(&word(&ix, "a"), QueryMode::SubstringClosure));
    }

    #[test]
    fn bplus_a_index() {
        let a = bplus_a();
        let ix = build_index(&a, &sort_offline(&a).unwrap()).unwrap();
        assert_eq!(ix.n_states(), 3);
        let (sa, sb) = (Symbol(0), Symbol(1));
        assert_eq!(ix.letter_start(Label::Hash), 0);
        assert_eq!(ix.letter_start(Label::Sym(sa)), 1);
        assert_eq!(ix.letter_start(Label::Sym(sb)), 2);
        assert_eq!(ix.follow(None, sb), None);
        assert_eq!(ix.follow(Some((0, 0)), sb), Some((2, 2)));
        assert_eq!(ix.follow(Some((0, 0)), sa), None);
        assert_eq!(ix.follow(Some((0, 2)), sb), Some((2, 2)));
        for (w, mode, want) in [
            ("bba", QueryMode::Membership, true),
            ("b", QueryMode::Membership, false),
            ("", QueryMode::Membership, false),
            ("bb", QueryMode::SubstringClosure, true),
            ("ab", QueryMode::SubstringClosure, false),
            ("a", QueryMode::SuffixClosure, true),
            ("b", QueryMode::SuffixClosure, false),
        ] {
            assert_eq!(ix.query(&word(&ix, w), mode), want, "{w} {mode:?}");
        }
    }

    #[test]
    fn dead_states_pruned() {
        // b⁺a with a dead a-branch from the source.
        let ab = Alphabet::from_chars("ab").unwrap();
        let (sa, sb) = (Symbol(0), Symbol(1));
        let a = Automaton::new(ab, 4, 0, [2], [
            Edge::new(0, 1, sb),
            Edge::new(1, 1, sb),
            Edge::new(1, 2, sa),
            Edge::new(0, 3, sa),
        ])
        .unwrap();
        let ord = sort_offline(&a).unwrap();
        let ix = build_index(&a, &ord).unwrap();
        assert_eq!(ix.n_states(), 3);
        assert!(!ix.query(&[sa], QueryMode::Membership));
        assert!(ix.query(&[sb, sa], QueryMode::Membership));
    }

    #[test]
    fn empty_language() {
        let ab = Alphabet::from_chars("a").unwrap();
        let a = Automaton::new(ab, 2, 0, [], [Edge::new(0, 1, Symbol(0))]).unwrap();
        let ix = build_index(&a, &WheelerOrder::identity(2)).unwrap();
        assert_eq!(ix.n_states(), 0);
        assert_eq!(ix.full_range(), None);
        for mode in [QueryMode::Membership, QueryMode::SubstringClosure, QueryMode::SuffixClosure] {
            assert!(!ix.query(&[], mode));
        }
        assert_eq!(WheelerIndex::parse(&ix.serialize()).unwrap(), ix);
    }

    #[test]
    fn rejects_bad_order() {
        let a = bplus_a();
        assert!(matches!(build_index(&a, &WheelerOrder::identity(3)), Err(Error::NotWheeler(_))));
    }

    fn corpus(rng: &mut ChaCha8Rng) -> Vec<(Automaton, WheelerOrder)> {
        let mut out = Vec::new();
        for _ in 0..40 {
            let (n, s) = (rng.gen_range(1..40), rng.gen_range(1..4));
            let t = random_trie(rng, n, s, 0.3);
            let o = trie_order(&t);
            out.push((t, o));
            let (s, n) = (rng.gen_range(1..4), rng.gen_range(1..40));
            out.push(random_wnfa(rng, n, s, 0.6));
        }
        out
    }

    #[test]
    fn follow_matches_successor_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (a, ord) in corpus(&mut rng) {
            let ix = build_index(&a, &ord).unwrap();
            let live = a.coreachable();
            let seq: Vec<usize> = ord.sequence().iter().copied().filter(|&v| live[v]).collect();
            let n = seq.len();
            for lo in 0..n {
                for hi in lo..n {
                    for c in a.alphabet().symbols() {
                        let mut ts: Vec<usize> = (lo..=hi)
                            .flat_map(|r| a.successors(seq[r], c))
                            .filter(|&v| live[v])
                            .map(|v| seq.iter().position(|&x| x == v).unwrap())
                            .collect();
                        ts.sort_unstable();
                        ts.dedup();
                        let want = ts.first().map(|&f| (f, *ts.last().unwrap()));
                        if let Some((f, l)) = want {
                            assert_eq!(l - f + 1, ts.len(), "successor set not contiguous");
                        }
                        assert_eq!(ix.follow(Some((lo, hi)), c), want);
                    }
                }
            }
        }
    }

    #[test]
    fn queries_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (a, ord) in corpus(&mut rng) {
            let ix = build_index(&a, &ord).unwrap();
            assert_eq!(WheelerIndex::parse(&ix.serialize()).unwrap(), ix);
            let sigma = a.alphabet().len() as u32;
            for _ in 0..200 {
                let len = rng.gen_range(0..=6);
                let w: Vec<Symbol> = (0..len).map(|_| Symbol(rng.gen_range(0..sigma))).collect();
                for mode in [QueryMode::Membership, QueryMode::SubstringClosure, QueryMode::SuffixClosure] {
                    assert_eq!(ix.query(&w, mode), naive_query(&a, &w, mode), "{w:?} {mode:?}");
                }
            }
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        let a = bplus_a();
        let ix = build_index(&a, &sort_offline(&a).unwrap()).unwrap();
        let text = ix.serialize();
        assert_eq!(text, "index v1\nalphabet a b\nlabels b | | a b |\nstarts #:0 a:1 b:2\ninbits 110\naccepting 010\n");
        for bad in [
            text.replace("v1", "v2"),
            text.replace("starts #:0 a:1 b:2", "starts #:0 a:2 b:2"),
            text.replace("inbits 110", "inbits 111"),
            text.replace("accepting 010", "accepting 01"),
            text.replace("| a b |", "| b a |"),
            text.replace("labels b | | a b |", "labels b | a b |"),
            format!("{text}extra\n"),
        ] {
            assert!(matches!(WheelerIndex::parse(&bad), Err(Error::MalformedIndex(_)) | Err(Error::UnknownLabel(_))), "{bad}");
        }
    }
}

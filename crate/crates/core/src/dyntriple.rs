//! Synchronized dynamic sequences LEX / IN / OUT plus per-letter
//! reservation parentheses.
//!
//! One implicit treap over LEX carries everything: each entry is a state
//! with its incoming label, its multiplicity in IN (the in-degree, 1 for the
//! source), the set of letters it has in OUT, and at most one open and one
//! close parenthesis per letter. Subtrees aggregate sizes, IN lengths and
//! per-letter counts, so every query below is `O(σ log n)` worst case per
//! touched node and `O(log n)` expected tree depth.

use crate::automaton::StateId;

const NIL: u32 = u32::MAX;

const OUT: u8 = 1;
const OPEN: u8 = 2;
const CLOSE: u8 = 4;

/// Handle to an entry of LEX. Stable across insertions.
pub type NodeId = u32;

#[derive(Debug, Clone, Copy)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    prio: u32,
    size: u32,
    /// Dense label: 0 is `#`, symbol `c` is `c + 1`.
    label: u32,
    p: u32,
    psum: u64,
    state: StateId,
}

#[derive(Debug, Clone)]
pub struct DynTriple {
    sigma: usize,
    nodes: Vec<Node>,
    /// Own flags per (node, letter).
    flags: Vec<u8>,
    /// Subtree counts per (node, letter) for OUT, open and close.
    cnt_out: Vec<u32>,
    cnt_open: Vec<u32>,
    cnt_close: Vec<u32>,
    root: u32,
    /// Fenwick tree over dense labels holding IN lengths.
    fen: Vec<u64>,
    seed: u64,
}

#[derive(Clone, Copy)]
enum Kind {
    Out,
    Open,
    Close,
}

impl Kind {
    fn bit(self) -> u8 {
        match self {
            Kind::Out => OUT,
            Kind::Open => OPEN,
            Kind::Close => CLOSE,
        }
    }
}

impl DynTriple {
    /// Empty structure over `sigma` letters.
    pub fn new(sigma: usize) -> Self {
        DynTriple {
            sigma,
            nodes: Vec::new(),
            flags: Vec::new(),
            cnt_out: Vec::new(),
            cnt_open: Vec::new(),
            cnt_close: Vec::new(),
            root: NIL,
            fen: vec![0; sigma + 2],
            seed: 0x9e37_79b9_7f4a_7c15,
        }
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.size(self.root) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    fn next_prio(&mut self) -> u32 {
        // xorshift64*
        self.seed ^= self.seed >> 12;
        self.seed ^= self.seed << 25;
        self.seed ^= self.seed >> 27;
        (self.seed.wrapping_mul(0x2545_f491_4f6c_dd1d) >> 32) as u32
    }

    #[inline]
    fn size(&self, t: u32) -> u32 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size
        }
    }

    #[inline]
    fn psum(&self, t: u32) -> u64 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].psum
        }
    }

    #[inline]
    fn cnt(&self, kind: Kind, t: u32, c: usize) -> u32 {
        if t == NIL {
            return 0;
        }
        let i = t as usize * self.sigma + c;
        match kind {
            Kind::Out => self.cnt_out[i],
            Kind::Open => self.cnt_open[i],
            Kind::Close => self.cnt_close[i],
        }
    }

    #[inline]
    fn own(&self, kind: Kind, t: u32, c: usize) -> u32 {
        (self.flags[t as usize * self.sigma + c] & kind.bit() != 0) as u32
    }

    fn pull(&mut self, t: u32) {
        let Node { left: l, right: r, p, .. } = self.nodes[t as usize];
        let size = 1 + self.size(l) + self.size(r);
        let psum = p as u64 + self.psum(l) + self.psum(r);
        let s = self.sigma;
        let base = t as usize * s;
        for c in 0..s {
            let f = self.flags[base + c];
            let sum = |v: &Vec<u32>, bit: u8| {
                (f & bit != 0) as u32
                    + if l == NIL { 0 } else { v[l as usize * s + c] }
                    + if r == NIL { 0 } else { v[r as usize * s + c] }
            };
            let (o, op, cl) = (sum(&self.cnt_out, OUT), sum(&self.cnt_open, OPEN), sum(&self.cnt_close, CLOSE));
            self.cnt_out[base + c] = o;
            self.cnt_open[base + c] = op;
            self.cnt_close[base + c] = cl;
        }
        let n = &mut self.nodes[t as usize];
        n.size = size;
        n.psum = psum;
        if l != NIL {
            self.nodes[l as usize].parent = t;
        }
        if r != NIL {
            self.nodes[r as usize].parent = t;
        }
    }

    /// Splits into the first `k` entries and the rest.
    fn split(&mut self, t: u32, k: u32) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let l = self.nodes[t as usize].left;
        if k <= self.size(l) {
            let (a, b) = self.split(l, k);
            self.nodes[t as usize].left = b;
            self.pull(t);
            if a != NIL {
                self.nodes[a as usize].parent = NIL;
            }
            self.nodes[t as usize].parent = NIL;
            (a, t)
        } else {
            let r = self.nodes[t as usize].right;
            let (a, b) = self.split(r, k - self.size(l) - 1);
            self.nodes[t as usize].right = a;
            self.pull(t);
            if b != NIL {
                self.nodes[b as usize].parent = NIL;
            }
            self.nodes[t as usize].parent = NIL;
            (t, b)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let r = self.nodes[a as usize].right;
            let m = self.merge(r, b);
            self.nodes[a as usize].right = m;
            self.pull(a);
            a
        } else {
            let l = self.nodes[b as usize].left;
            let m = self.merge(a, l);
            self.nodes[b as usize].left = m;
            self.pull(b);
            b
        }
    }

    fn fen_add(&mut self, label: usize, delta: i64) {
        let mut i = label + 1;
        while i < self.fen.len() {
            self.fen[i] = (self.fen[i] as i64 + delta) as u64;
            i += i & i.wrapping_neg();
        }
    }

    /// Total IN length of labels strictly below `label` (dense).
    fn fen_prefix(&self, label: usize) -> u64 {
        let mut i = label.min(self.fen.len() - 1);
        let mut s = 0;
        while i > 0 {
            s += self.fen[i];
            i &= i - 1;
        }
        s
    }

    /// Inserts a state at LEX position `pos` with dense label `label` and
    /// IN multiplicity `p`.
    pub fn insert(&mut self, pos: usize, state: StateId, label: usize, p: u32) -> NodeId {
        assert!(pos <= self.len() && label <= self.sigma && p >= 1);
        let id = self.nodes.len() as u32;
        let prio = self.next_prio();
        self.nodes.push(Node {
            left: NIL,
            right: NIL,
            parent: NIL,
            prio,
            size: 1,
            label: label as u32,
            p,
            psum: p as u64,
            state,
        });
        self.flags.extend(std::iter::repeat_n(0, self.sigma));
        self.cnt_out.extend(std::iter::repeat_n(0, self.sigma));
        self.cnt_open.extend(std::iter::repeat_n(0, self.sigma));
        self.cnt_close.extend(std::iter::repeat_n(0, self.sigma));
        let (a, b) = self.split(self.root, pos as u32);
        let m = self.merge(a, id);
        self.root = self.merge(m, b);
        self.nodes[self.root as usize].parent = NIL;
        self.fen_add(label, p as i64);
        id
    }

    /// Re-aggregates from `t` up to the root.
    fn pull_up(&mut self, mut t: u32) {
        while t != NIL {
            self.pull(t);
            t = self.nodes[t as usize].parent;
        }
    }

    fn set_flag(&mut self, x: NodeId, c: usize, kind: Kind, on: bool) {
        let i = x as usize * self.sigma + c;
        let before = self.flags[i];
        if on {
            self.flags[i] |= kind.bit();
        } else {
            self.flags[i] &= !kind.bit();
        }
        if self.flags[i] != before {
            self.pull_up(x);
        }
    }

    pub fn has_out(&self, x: NodeId, c: usize) -> bool {
        self.own(Kind::Out, x, c) == 1
    }

    pub fn set_out(&mut self, x: NodeId, c: usize) {
        self.set_flag(x, c, Kind::Out, true);
    }

    pub fn has_open(&self, x: NodeId, c: usize) -> bool {
        self.own(Kind::Open, x, c) == 1
    }

    pub fn has_close(&self, x: NodeId, c: usize) -> bool {
        self.own(Kind::Close, x, c) == 1
    }

    pub fn set_open(&mut self, x: NodeId, c: usize, on: bool) {
        self.set_flag(x, c, Kind::Open, on);
    }

    pub fn set_close(&mut self, x: NodeId, c: usize, on: bool) {
        self.set_flag(x, c, Kind::Close, on);
    }

    /// Reserves the LEX range from `lo` to `hi` (`lo` before `hi`) for letter `c`.
    pub fn reserve(&mut self, lo: NodeId, hi: NodeId, c: usize) {
        debug_assert!(self.position(lo) < self.position(hi));
        self.set_open(lo, c, true);
        self.set_close(hi, c, true);
    }

    /// Adds `delta` to the IN multiplicity of `x`, which must stay positive.
    pub fn add_p(&mut self, x: NodeId, delta: i64) {
        let p = self.nodes[x as usize].p as i64 + delta;
        assert!(p >= 1, "IN multiplicity must stay positive");
        self.nodes[x as usize].p = p as u32;
        let label = self.nodes[x as usize].label as usize;
        self.fen_add(label, delta);
        self.pull_up(x);
    }

    pub fn state(&self, x: NodeId) -> StateId {
        self.nodes[x as usize].state
    }

    pub fn label(&self, x: NodeId) -> usize {
        self.nodes[x as usize].label as usize
    }

    pub fn p(&self, x: NodeId) -> u32 {
        self.nodes[x as usize].p
    }

    /// LEX position of `x`.
    pub fn position(&self, x: NodeId) -> usize {
        let mut t = x;
        let mut pos = self.size(self.nodes[t as usize].left);
        loop {
            let par = self.nodes[t as usize].parent;
            if par == NIL {
                break;
            }
            if self.nodes[par as usize].right == t {
                pos += self.size(self.nodes[par as usize].left) + 1;
            }
            t = par;
        }
        pos as usize
    }

    /// Entry at LEX position `pos`.
    pub fn at(&self, pos: usize) -> NodeId {
        assert!(pos < self.len());
        let mut t = self.root;
        let mut k = pos as u32;
        loop {
            let l = self.nodes[t as usize].left;
            let sl = self.size(l);
            if k < sl {
                t = l;
            } else if k == sl {
                return t;
            } else {
                k -= sl + 1;
                t = self.nodes[t as usize].right;
            }
        }
    }

    fn prefix(&self, kind: Kind, c: usize, pos: usize) -> usize {
        let mut t = self.root;
        let mut k = pos as u32;
        let mut acc = 0;
        while t != NIL && k > 0 {
            let l = self.nodes[t as usize].left;
            let sl = self.size(l);
            if k <= sl {
                t = l;
            } else {
                acc += self.cnt(kind, l, c) + self.own(kind, t, c);
                k -= sl + 1;
                t = self.nodes[t as usize].right;
            }
        }
        acc as usize
    }

    /// Number of entries in LEX positions `0..pos` with `c` in OUT.
    pub fn out_rank(&self, c: usize, pos: usize) -> usize {
        self.prefix(Kind::Out, c, pos)
    }

    /// Number of `c` letters in OUT over LEX positions `lo..=hi`.
    pub fn out_count(&self, c: usize, lo: usize, hi: usize) -> usize {
        self.out_rank(c, hi + 1) - self.out_rank(c, lo)
    }

    /// The entry holding the `k`-th (0-based) `c` of OUT.
    pub fn out_select(&self, c: usize, k: usize) -> Option<NodeId> {
        if k as u32 >= self.cnt(Kind::Out, self.root, c) {
            return None;
        }
        let mut t = self.root;
        let mut k = k as u32;
        loop {
            let l = self.nodes[t as usize].left;
            let cl = self.cnt(Kind::Out, l, c);
            if k < cl {
                t = l;
                continue;
            }
            let own = self.own(Kind::Out, t, c);
            if own == 1 && k == cl {
                return Some(t);
            }
            k -= cl + own;
            t = self.nodes[t as usize].right;
        }
    }

    /// True when LEX position `pos` lies strictly inside a range reserved for `c`.
    pub fn is_reserved(&self, pos: usize, c: usize) -> bool {
        self.prefix(Kind::Open, c, pos) > self.prefix(Kind::Close, c, pos + 1)
    }

    /// First IN position of letter blocks at or above dense label `label`.
    pub fn in_start(&self, label: usize) -> u64 {
        self.fen_prefix(label)
    }

    /// Number of LEX entries whose whole IN block lies before IN position `k`,
    /// or `None` when `k` falls strictly inside some entry's block.
    pub fn lex_from_in(&self, k: u64) -> Option<usize> {
        let mut t = self.root;
        let mut k = k;
        let mut base = 0u32;
        while t != NIL {
            let l = self.nodes[t as usize].left;
            let lp = self.psum(l);
            let p = self.nodes[t as usize].p as u64;
            if k <= lp {
                t = l;
            } else if k >= lp + p {
                base += self.size(l) + 1;
                k -= lp + p;
                t = self.nodes[t as usize].right;
            } else {
                return None;
            }
        }
        Some(base as usize)
    }

    /// States in LEX order.
    pub fn states(&self) -> Vec<StateId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut t = self.root;
        while t != NIL || !stack.is_empty() {
            while t != NIL {
                stack.push(t);
                t = self.nodes[t as usize].left;
            }
            let x = stack.pop().unwrap();
            out.push(self.nodes[x as usize].state);
            t = self.nodes[x as usize].right;
        }
        out
    }

    /// Entries in LEX order.
    pub fn entries(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut t = self.root;
        while t != NIL || !stack.is_empty() {
            while t != NIL {
                stack.push(t);
                t = self.nodes[t as usize].left;
            }
            let x = stack.pop().unwrap();
            out.push(x);
            t = self.nodes[x as usize].right;
        }
        out
    }

    /// Full consistency check, linear in the size. Returns a description of
    /// the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let entries = self.entries();
        for &x in &entries {
            let n = self.nodes[x as usize];
            if n.size != 1 + self.size(n.left) + self.size(n.right) {
                return Err(format!("size aggregate broken at {x}"));
            }
            if n.psum != n.p as u64 + self.psum(n.left) + self.psum(n.right) {
                return Err(format!("IN length aggregate broken at {x}"));
            }
            for c in 0..self.sigma {
                for kind in [Kind::Out, Kind::Open, Kind::Close] {
                    let want = self.own(kind, x, c) + self.cnt(kind, n.left, c) + self.cnt(kind, n.right, c);
                    if self.cnt(kind, x, c) != want {
                        return Err(format!("letter aggregate broken at {x}"));
                    }
                }
            }
            for ch in [n.left, n.right] {
                if ch != NIL && self.nodes[ch as usize].parent != x {
                    return Err(format!("parent link broken below {x}"));
                }
            }
        }
        if entries.windows(2).any(|w| self.label(w[0]) > self.label(w[1])) {
            return Err("labels decrease along LEX".into());
        }
        let mut per_label = vec![0u64; self.sigma + 1];
        for &x in &entries {
            per_label[self.label(x)] += self.p(x) as u64;
        }
        for l in 0..=self.sigma {
            if self.in_start(l + 1) - self.in_start(l) != per_label[l] {
                return Err(format!("IN partial sums broken at label {l}"));
            }
        }
        for c in 0..self.sigma {
            let mut depth = 0i32;
            for &x in &entries {
                if self.has_close(x, c) {
                    depth -= 1;
                }
                if depth < 0 {
                    return Err(format!("unmatched close for letter {c}"));
                }
                if self.has_open(x, c) {
                    depth += 1;
                }
                if depth > 1 {
                    return Err(format!("overlapping reservations for letter {c}"));
                }
            }
            if depth != 0 {
                return Err(format!("unclosed reservation for letter {c}"));
            }
        }
        Ok(())
    }
}

//! Text formats: `.wnfa` automata and order files.

use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::automaton::{Automaton, Edge, StateId};
use crate::error::{Error, Result};
use crate::wheeler_check::WheelerOrder;

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
}

/// Splits a line into tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct Lines<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: Box::new(content_lines(text)),
            last: 0,
        }
    }

    /// Next line, which must start with `keyword`; returns the remaining tokens.
    fn header(&mut self, keyword: &str) -> Result<(usize, Vec<(usize, &'a str)>)> {
        let (no, line) = self
            .inner
            .next()
            .ok_or_else(|| syntax(self.last + 1, 1, format!("expected `{keyword}` line")))?;
        self.last = no;
        let toks = tokens(line);
        match toks.first() {
            Some(&(_, k)) if k == keyword => Ok((no, toks[1..].to_vec())),
            Some(&(col, k)) => Err(syntax(no, col, format!("expected `{keyword}`, found `{k}`"))),
            None => Err(syntax(no, 1, format!("expected `{keyword}`"))),
        }
    }
}

fn number(line: usize, (col, tok): (usize, &str)) -> Result<usize> {
    tok.parse()
        .map_err(|_| syntax(line, col, format!("expected a non-negative integer, found `{tok}`")))
}

fn state(line: usize, tok: (usize, &str), n: usize) -> Result<StateId> {
    let v = number(line, tok)?;
    if v >= n {
        return Err(syntax(line, tok.0, format!("state {v} out of range 0..{n}")));
    }
    Ok(v)
}

fn exactly(line: usize, toks: &[(usize, &str)], k: usize) -> Result<()> {
    if toks.len() != k {
        let col = toks.get(k).map_or(1, |t| t.0);
        return Err(syntax(line, col, format!("expected {k} argument(s), found {}", toks.len())));
    }
    Ok(())
}

/// Parses and validates a `.wnfa` document.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut lines = Lines::new(text);
    let (no, toks) = lines.header("wnfa")?;
    if toks.len() != 1 || toks[0].1 != "v1" {
        return Err(syntax(no, toks.first().map_or(5, |t| t.0), "unsupported version, expected `v1`"));
    }
    let (no, toks) = lines.header("alphabet")?;
    for &(col, t) in &toks {
        if t.contains('#') {
            return Err(Error::HashInAlphabet(t.to_string()));
        }
        if toks.iter().filter(|x| x.1 == t).count() > 1 {
            return Err(syntax(no, col, format!("duplicate alphabet symbol `{t}`")));
        }
    }
    let alphabet = Alphabet::new(toks.iter().map(|t| t.1))?;
    let (no, toks) = lines.header("states")?;
    exactly(no, &toks, 1)?;
    let n = number(no, toks[0])?;
    if n == 0 {
        return Err(syntax(no, toks[0].0, "automaton must have at least one state"));
    }
    let (no, toks) = lines.header("source")?;
    exactly(no, &toks, 1)?;
    let source = state(no, toks[0], n)?;
    let (no, toks) = lines.header("accepting")?;
    let accepting = toks
        .iter()
        .map(|&t| state(no, t, n))
        .collect::<Result<Vec<_>>>()?;
    let mut edges = Vec::new();
    for (no, line) in lines.inner {
        let toks = tokens(line);
        if toks[0].1 != "edge" {
            return Err(syntax(no, toks[0].0, format!("expected `edge`, found `{}`", toks[0].1)));
        }
        let toks = &toks[1..];
        exactly(no, toks, 3)?;
        let from = state(no, toks[0], n)?;
        let to = state(no, toks[1], n)?;
        let label = alphabet
            .get(toks[2].1)
            .ok_or_else(|| Error::UnknownLabel(toks[2].1.to_string()))?;
        edges.push(Edge::new(from, to, label));
    }
    Automaton::new(alphabet, n, source, accepting, edges)
}

/// Canonical text: source renumbered to 0, edges sorted by `(from, to, label)`.
pub fn serialize_automaton(a: &Automaton) -> String {
    let c;
    let a = if a.source() == 0 {
        a
    } else {
        c = a.canonical();
        &c
    };
    let mut out = String::new();
    out.push_str("wnfa v1\n");
    out.push_str("alphabet");
    for t in a.alphabet().tokens() {
        out.push(' ');
        out.push_str(t);
    }
    out.push('\n');
    writeln!(out, "states {}", a.n_states()).unwrap();
    writeln!(out, "source {}", a.source()).unwrap();
    out.push_str("accepting");
    for f in a.accepting() {
        write!(out, " {f}").unwrap();
    }
    out.push('\n');
    for e in a.edges() {
        writeln!(out, "edge {} {} {}", e.from, e.to, a.alphabet().name(e.label)).unwrap();
    }
    out
}

/// Parses `order <id> ... <id>` (states by increasing rank) for an automaton with `n` states.
pub fn parse_order(text: &str, n: usize) -> Result<WheelerOrder> {
    let mut lines = Lines::new(text);
    let (no, toks) = lines.header("order")?;
    let ids = toks
        .iter()
        .map(|&t| state(no, t, n))
        .collect::<Result<Vec<_>>>()?;
    if let Some((extra, _)) = lines.inner.next() {
        return Err(syntax(extra, 1, "unexpected content after order line"));
    }
    WheelerOrder::from_sequence(ids, n)
}

pub fn serialize_order(ord: &WheelerOrder) -> String {
    let mut out = String::from("order");
    for &v in ord.sequence() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    out
}

/// Order of the canonical renumbering used by [`serialize_automaton`].
pub fn canonical_order(a: &Automaton, ord: &WheelerOrder) -> WheelerOrder {
    let s = a.source();
    let map = |v: StateId| match v.cmp(&s) {
        std::cmp::Ordering::Less => v + 1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => v,
    };
    WheelerOrder::from_sequence(ord.sequence().iter().map(|&v| map(v)).collect(), a.n_states())
        .expect("renumbering preserves permutations")
}

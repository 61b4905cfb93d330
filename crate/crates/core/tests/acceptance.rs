//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach stdout.
//!
//! Criteria 1 to 7 are hard; criterion 8 (timings) is informational and
//! printed but never fails the run.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wheelix::determinize::tight_family;
use wheelix::gen::{gen_worst_case, letters, random_dfa_with, random_nfa_with, random_trie, random_wnfa, trie_from_strings, trie_order};
use wheelix::sorter::sort_online;
use wheelix::{
    brute_force_wheeler_order, build_index, check_prefix_suffix_family, determinize, hopcroft, is_minimum_wdfa,
    language_equivalent, min_wdfa_from_acyclic_dfa, sort_2nfa, sort_offline, verify_wheeler_order, wheeler_minimize,
    Automaton, Edge, QueryMode, Symbol, WheelerOrder,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Criterion 1: exact blowup on the worst-case family.
fn exact_blowup() -> Outcome {
    let mut slowest = Duration::ZERO;
    for m in 1..=6 {
        let a = gen_worst_case(m);
        ensure(a.n_states() == 4 * m + 5, || format!("m={m}: input has {} states", a.n_states()))?;
        let t = Instant::now();
        let (w, ord) = min_wdfa_from_acyclic_dfa(&a, None).map_err(|e| format!("m={m}: {e}"))?;
        let el = t.elapsed();
        slowest = slowest.max(el);
        ensure(el < Duration::from_secs(2), || format!("m={m}: took {el:?}"))?;
        let want = 1 + (1usize << (m + 2));
        ensure(w.n_states() == want, || format!("m={m}: {} states, want {want}", w.n_states()))?;
        ensure(verify_wheeler_order(&w, &ord), || format!("m={m}: output order fails"))?;
        ensure(is_minimum_wdfa(&w, &ord).unwrap(), || format!("m={m}: output not minimum"))?;
        ensure(language_equivalent(&a, &w).unwrap(), || format!("m={m}: language changed"))?;
    }
    Ok(format!("m=1..6 exact, slowest run {slowest:?}"))
}

/// Every word up to `max_len` is accepted by both or by neither. Branches
/// where both automata are stuck are cut: every extension is rejected by both.
fn agree_up_to(nfa: &Automaton, dfa: &Automaton, max_len: usize) -> Result<u64, Vec<Symbol>> {
    fn go(
        nfa: &Automaton,
        dfa: &Automaton,
        set: Vec<usize>,
        d: Option<usize>,
        w: &mut Vec<Symbol>,
        left: usize,
        seen: &mut u64,
    ) -> Result<(), Vec<Symbol>> {
        *seen += 1;
        let acc_n = set.iter().any(|&v| nfa.is_accepting(v));
        let acc_d = d.is_some_and(|v| dfa.is_accepting(v));
        if acc_n != acc_d {
            return Err(w.clone());
        }
        if left == 0 || (set.is_empty() && d.is_none()) {
            return Ok(());
        }
        for c in nfa.alphabet().symbols() {
            let mut next: Vec<usize> = set.iter().flat_map(|&u| nfa.successors(u, c)).collect();
            next.sort_unstable();
            next.dedup();
            let dn = d.and_then(|v| dfa.succ(v, c));
            w.push(c);
            go(nfa, dfa, next, dn, w, left - 1, seen)?;
            w.pop();
        }
        Ok(())
    }
    let mut seen = 0;
    go(nfa, dfa, vec![nfa.source()], Some(dfa.source()), &mut Vec::new(), max_len, &mut seen)?;
    Ok(seen)
}

/// A random word: uniform letters, or the labels of a random walk from the
/// source (so that accepted words are likely).
fn random_word(rng: &mut ChaCha8Rng, a: &Automaton, max_len: usize) -> Vec<Symbol> {
    let len = rng.gen_range(0..=max_len);
    let sigma = a.alphabet().len() as u32;
    if rng.gen_bool(0.5) {
        return (0..len).map(|_| Symbol(rng.gen_range(0..sigma))).collect();
    }
    let mut w = Vec::new();
    let mut u = a.source();
    for _ in 0..len {
        let out = a.out_edges(u);
        if out.is_empty() {
            break;
        }
        let e = out[rng.gen_range(0..out.len())];
        w.push(e.label);
        u = e.to;
    }
    w
}

/// Criteria 2 and 3 share the corpus of determinized WNFAs.
fn determinization() -> (Outcome, Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD17E);
    let (mut exhaustive, mut sampled, mut max_ratio) = (0u64, 0u64, 0.0f64);
    let mut crit3: Result<usize, String> = Ok(0);
    let mut run = || -> Result<(), String> {
        for i in 0..1200 {
            let sigma = rng.gen_range(1..=4);
            let trie_states = rng.gen_range(1..=50);
            let p_merge = rng.gen_range(0.2..0.9);
            let (a, ord) = random_wnfa(&mut rng, trie_states, sigma, p_merge);
            let n = a.n_states();
            ensure(n <= 50, || format!("instance {i}: {n} states"))?;
            ensure(a.is_input_consistent(), || format!("instance {i}: not input-consistent"))?;
            ensure(verify_wheeler_order(&a, &ord), || format!("instance {i}: order fails"))?;
            let d = determinize(&a, &ord).map_err(|e| format!("instance {i}: {e}"))?;
            let used = a.used_symbols().len();
            let k = d.automaton.n_states();
            ensure(k + used < 2 * n, || format!("instance {i}: {k} states from n={n}, |Σ|={used}"))?;
            max_ratio = max_ratio.max(k as f64 / (2 * n - 1 - used).max(1) as f64);
            if n <= 12 {
                exhaustive += agree_up_to(&a, &d.automaton, 8)
                    .map_err(|w| format!("instance {i}: disagreement on {w:?}"))?;
            } else {
                for _ in 0..10_000 {
                    let w = random_word(&mut rng, &a, 16);
                    ensure(a.naive_accepts(&w) == d.automaton.naive_accepts(&w), || {
                        format!("instance {i}: disagreement on {w:?}")
                    })?;
                }
                sampled += 10_000;
            }
            if crit3.is_ok() && !check_prefix_suffix_family(&d.family, n) {
                crit3 = Err(format!("instance {i}: interval family is not prefix/suffix"));
            }
            if let Ok(c) = crit3.as_mut() {
                *c += 1;
            }
        }
        Ok(())
    };
    let crit2 = run().map(|()| {
        format!(
            "1200 WNFAs, bound held (max size/bound {max_ratio:.2}), {exhaustive} exhaustive + {sampled} sampled words"
        )
    });
    let crit3 = crit3.and_then(|families| {
        for n in 1..=20 {
            let f = tight_family(n);
            ensure(f.len() == 2 * n - 1, || format!("tight family for n={n} has {}", f.len()))?;
            ensure(check_prefix_suffix_family(&f, n), || format!("tight family for n={n} rejected"))?;
        }
        Ok(format!("{families} recorded families valid; tight family reaches 2n-1 for n=1..20"))
    });
    (crit2, crit3)
}

/// All input-consistent DFAs on `n` states over two letters in which every
/// state is reachable and the source has no incoming edge.
fn all_small_dfas(n: usize, mut f: impl FnMut(Automaton)) {
    let ab = letters(2);
    for lam in 0..(1u32 << (n - 1)) {
        // lambda of state v >= 1 is bit v-1.
        let by_label: [Vec<usize>; 2] =
            [0, 1].map(|c| (1..n).filter(|&v| (lam >> (v - 1) & 1) as usize == c).collect());
        // Choice per (state, letter): 0 = no edge, i = edge to by_label[c][i-1].
        let radix: Vec<usize> = (0..2 * n).map(|k| by_label[k % 2].len() + 1).collect();
        let mut digits = vec![0usize; 2 * n];
        loop {
            let mut edges = Vec::new();
            for (k, &dg) in digits.iter().enumerate() {
                if dg > 0 {
                    edges.push(Edge::new(k / 2, by_label[k % 2][dg - 1], Symbol((k % 2) as u32)));
                }
            }
            if let Ok(a) = Automaton::new(ab.clone(), n, 0, [], edges) {
                f(a);
            }
            let mut i = 0;
            while i < digits.len() && digits[i] + 1 == radix[i] {
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
            digits[i] += 1;
        }
    }
}

fn compare_sorters(a: &Automaton) -> Result<bool, String> {
    let bf = brute_force_wheeler_order(a).map_err(|e| e.to_string())?;
    let off = sort_offline(a).ok();
    ensure(off == bf, || format!("offline {off:?} vs brute force {bf:?} on {a:?}"))?;
    if a.is_acyclic() {
        let on = sort_online(a).ok();
        ensure(on == bf, || format!("online {on:?} vs brute force {bf:?} on {a:?}"))?;
    }
    Ok(bf.is_some())
}

/// Criterion 4: sorters against brute force.
fn sorting_oracle() -> Outcome {
    let (mut total, mut wheeler, mut acyclic) = (0usize, 0usize, 0usize);
    let mut err = None;
    for n in 1..=5 {
        all_small_dfas(n, |a| {
            if err.is_some() {
                return;
            }
            total += 1;
            acyclic += a.is_acyclic() as usize;
            match compare_sorters(&a) {
                Ok(w) => wheeler += w as usize,
                Err(e) => err = Some(e),
            }
        });
    }
    if let Some(e) = err {
        return Err(e);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5047);
    for _ in 0..20_000 {
        let n = rng.gen_range(1..=6);
        let sigma = rng.gen_range(1..=3);
        let cyclic = rng.gen_bool(0.5);
        let a = random_dfa_with(&mut rng, n, sigma, !cyclic);
        compare_sorters(&a)?;
    }
    Ok(format!(
        "exhaustive: {total} DFAs with n<=5 ({wheeler} Wheeler, {acyclic} acyclic); 20000 random with n<=6"
    ))
}

/// Criterion 5: 2-SAT recognizer against brute force.
fn two_sat_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x25A7);
    let (mut yes, mut nondet) = (0, 0);
    for i in 0..12_000 {
        let n = rng.gen_range(1..=7);
        let sigma = rng.gen_range(1..=3);
        let acyclic = rng.gen_bool(0.5);
        let a = random_nfa_with(&mut rng, n, sigma, 2, acyclic);
        nondet += (a.nondeterminism_degree() == 2) as usize;
        let got = sort_2nfa(&a).map_err(|e| format!("instance {i}: {e}"))?;
        let bf = brute_force_wheeler_order(&a).map_err(|e| e.to_string())?;
        ensure(got.is_some() == bf.is_some(), || format!("instance {i}: 2-SAT {} vs brute force {}", got.is_some(), bf.is_some()))?;
        if let Some(o) = got {
            ensure(verify_wheeler_order(&a, &o), || format!("instance {i}: returned order fails"))?;
            yes += 1;
        }
    }
    Ok(format!("12000 2-NFAs ({nondet} with d=2), {yes} Wheeler, all agree"))
}

/// Criterion 6: two routes to the minimum WDFA of a finite language.
fn minimization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x313);
    for i in 0..600 {
        let sigma = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=10);
        let words: Vec<Vec<Symbol>> = (0..k)
            .map(|_| {
                let len = rng.gen_range(0..=5);
                (0..len).map(|_| Symbol(rng.gen_range(0..sigma as u32))).collect()
            })
            .collect();
        let t = trie_from_strings(letters(sigma), &words);
        let (m1, o1) = wheeler_minimize(&t, &trie_order(&t)).map_err(|e| format!("language {i}: {e}"))?;
        let h = hopcroft(&t).map_err(|e| format!("language {i}: {e}"))?;
        let (m2, o2) = min_wdfa_from_acyclic_dfa(&h, None).map_err(|e| format!("language {i}: {e}"))?;
        for (m, o) in [(&m1, &o1), (&m2, &o2)] {
            ensure(is_minimum_wdfa(m, o).unwrap(), || format!("language {i}: not minimum"))?;
            ensure(language_equivalent(&t, m).unwrap(), || format!("language {i}: language changed"))?;
        }
        let (c1, c2) = (m1.renumber(o1.ranks()), m2.renumber(o2.ranks()));
        ensure(c1 == c2, || format!("language {i}: routes differ on {words:?}"))?;
    }
    Ok("600 random finite languages, identical results from both routes".into())
}

/// Closure oracles evaluated directly on the automaton.
fn oracle(a: &Automaton, w: &[Symbol], mode: QueryMode) -> bool {
    match mode {
        QueryMode::Membership => a.naive_accepts(w),
        _ => {
            // Reachable states, then all states reading w from one of them.
            let mut seen = vec![false; a.n_states()];
            let mut stack = vec![a.source()];
            seen[a.source()] = true;
            while let Some(u) = stack.pop() {
                for e in a.out_edges(u) {
                    if !seen[e.to] {
                        seen[e.to] = true;
                        stack.push(e.to);
                    }
                }
            }
            let live = a.coreachable();
            (0..a.n_states()).filter(|&p| seen[p]).any(|p| {
                let end = a.reach(&[p], w);
                match mode {
                    QueryMode::SubstringClosure => end.iter().any(|&v| live[v]),
                    _ => end.iter().any(|&v| a.is_accepting(v)),
                }
            })
        }
    }
}

fn index_corpus() -> Vec<(String, Automaton, WheelerOrder)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1DE8);
    let mut out = Vec::new();
    for m in 1..=4 {
        let (a, o) = min_wdfa_from_acyclic_dfa(&gen_worst_case(m), None).unwrap();
        out.push((format!("worst case {m} converted"), a, o));
    }
    for i in 0..15 {
        let (n, s) = (rng.gen_range(2..60), rng.gen_range(1..=4));
        let t = random_trie(&mut rng, n, s, 0.3);
        let o = trie_order(&t);
        let (m, mo) = wheeler_minimize(&t, &o).unwrap();
        out.push((format!("trie {i}"), t, o));
        out.push((format!("minimized trie {i}"), m, mo));
    }
    for i in 0..15 {
        let (n, s) = (rng.gen_range(2..40), rng.gen_range(1..=3));
        let (a, o) = random_wnfa(&mut rng, n, s, 0.6);
        let d = determinize(&a, &o).unwrap();
        out.push((format!("determinized WNFA {i}"), d.automaton, d.order));
    }
    for i in 0..15 {
        let (n, s) = (rng.gen_range(2..12), rng.gen_range(1..=3));
        let a = random_dfa_with(&mut rng, n, s, true);
        let (m, o) = min_wdfa_from_acyclic_dfa(&a, None).unwrap();
        out.push((format!("converted DFA {i}"), m, o));
    }
    let mut cyclic = 0;
    while cyclic < 15 {
        let (n, s) = (rng.gen_range(2..30), rng.gen_range(1..=3));
        let a = random_dfa_with(&mut rng, n, s, false);
        if a.is_acyclic() {
            continue;
        }
        if let Ok(o) = sort_offline(&a) {
            out.push((format!("cyclic WDFA {cyclic}"), a, o));
            cyclic += 1;
        }
    }
    out
}

/// Criterion 7: index queries against direct oracles.
fn index_oracle() -> Outcome {
    let corpus = index_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1D7);
    let mut positives = [0usize; 3];
    for (name, a, o) in &corpus {
        let ix = build_index(a, o).map_err(|e| format!("{name}: {e}"))?;
        for (k, mode) in [QueryMode::Membership, QueryMode::SubstringClosure, QueryMode::SuffixClosure]
            .into_iter()
            .enumerate()
        {
            for _ in 0..10_000 {
                let w = random_word(&mut rng, a, 8);
                let want = oracle(a, &w, mode);
                ensure(ix.query(&w, mode) == want, || format!("{name}: {mode:?} on {w:?}, want {want}"))?;
                positives[k] += want as usize;
            }
        }
    }
    Ok(format!(
        "{} WDFAs x 3 modes x 10000 words; positives {:?}",
        corpus.len(),
        positives
    ))
}

fn best_of(runs: usize, mut f: impl FnMut()) -> f64 {
    (0..runs)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Criterion 8: timings on random Wheeler tries.
fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9E7F);
    let t = random_trie(&mut rng, 100_001, 4, 0.2);
    let off = best_of(3, || {
        sort_offline(&t).unwrap();
    });
    let on = best_of(3, || {
        sort_online(&t).unwrap();
    });
    let mut detail = format!("1e5 edges: offline {off:.3}s, online {on:.3}s");
    let mut ok = off < 1.0 && on < 3.0;
    // Scaling: fit time = k * E log2 V over doubling sizes.
    for (name, online) in [("offline", false), ("online", true)] {
        let mut pts = Vec::new();
        for e in [25_000usize, 50_000, 100_000, 200_000] {
            let t = random_trie(&mut rng, e + 1, 4, 0.2);
            let s = best_of(3, || {
                if online {
                    sort_online(&t).unwrap();
                } else {
                    sort_offline(&t).unwrap();
                }
            });
            pts.push((e as f64 * ((e + 1) as f64).log2(), s));
        }
        let k = pts.iter().map(|p| p.0 * p.1).sum::<f64>() / pts.iter().map(|p| p.0 * p.0).sum::<f64>();
        let worst = pts.iter().map(|p| (p.1 / (k * p.0)).max(k * p.0 / p.1)).fold(0.0, f64::max);
        ok &= worst <= 2.0;
        let times: Vec<String> = pts.iter().map(|p| format!("{:.3}", p.1)).collect();
        detail.push_str(&format!(
            "; {name} at 25k/50k/100k/200k edges {}s, worst deviation from E log V fit {worst:.2}x",
            times.join("/")
        ));
    }
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let (c2, c3) = determinization();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "exact blowup reproduction", exact_blowup()),
        (2, "determinization bound", c2),
        (3, "prefix/suffix family bound", c3),
        (4, "sorting oracle equivalence", sorting_oracle()),
        (5, "2-SAT recognizer equivalence", two_sat_oracle()),
        (6, "minimization correctness", minimization()),
        (7, "index oracle", index_oracle()),
        (8, "performance (informational)", performance()),
    ];
    let mut hard_failures = Vec::new();
    for (n, name, r) in &results {
        match r {
            Ok(d) => println!("PASS criterion {n} {name}: {d}"),
            Err(d) => {
                println!("FAIL criterion {n} {name}: {d}");
                if *n != 8 {
                    hard_failures.push(*n);
                }
            }
        }
    }
    if !hard_failures.is_empty() {
        eprintln!("failed criteria: {hard_failures:?}");
        std::process::exit(1);
    }
}

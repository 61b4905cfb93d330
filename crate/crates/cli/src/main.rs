//! `wheelix`: command line front end for the wheelix library.
//!
//! Exit codes: 0 success, 1 negative answer (not Wheeler, not equivalent,
//! word rejected), 2 usage or input error, 3 resource limit.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wheelix::format::{canonical_order, parse_automaton, parse_order, serialize_automaton, serialize_order};
use wheelix::gen::{gen_worst_case, random_dfa, random_nfa_with, trie_from_strings};
use wheelix::sorter::sort_online;
use wheelix::{
    build_index, determinize, hopcroft, language_equivalent, min_wdfa_from_acyclic_dfa, sort_2nfa, sort_offline,
    verify_wheeler_order, wheeler_minimize, Alphabet, Automaton, Error, QueryMode, Reason, WheelerIndex, WheelerOrder,
};

#[derive(Parser)]
#[command(name = "wheelix", version, about = "Wheeler automata: recognition, sorting, minimization, indexing")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether an automaton (DFA or 2-NFA) is Wheeler.
    Check {
        input: PathBuf,
        /// Verify this order instead of searching for one.
        #[arg(long)]
        order: Option<PathBuf>,
        /// Write the order found here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the Wheeler order of a DFA.
    Sort {
        input: PathBuf,
        /// Online sorter (acyclic DFAs only).
        #[arg(long, conflicts_with = "offline")]
        online: bool,
        /// Spanning-tree sorter (default).
        #[arg(long)]
        offline: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Determinize a Wheeler NFA given with its order.
    Determinize {
        input: PathBuf,
        order: PathBuf,
        /// Output automaton; the order goes next to it with extension `.order`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimum Wheeler DFA of a Wheeler DFA given with its order.
    Minimize {
        input: PathBuf,
        order: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Plain minimization of a DFA.
    Hopcroft {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimum Wheeler DFA of an acyclic DFA.
    Dfa2wdfa {
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build or query an index.
    Index {
        #[command(subcommand)]
        cmd: IndexCmd,
    },
    /// Compare the languages of two DFAs.
    Equiv { a: PathBuf, b: PathBuf },
    /// Generate automata.
    Gen {
        #[command(subcommand)]
        cmd: GenCmd,
    },
}

#[derive(Subcommand)]
enum IndexCmd {
    Build {
        input: PathBuf,
        order: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    Query {
        index: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Membership)]
        mode: Mode,
        /// Word; symbols separated by spaces or commas, or plain characters
        /// when every symbol is one character. Empty for the empty word.
        word: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Membership,
    Substr,
    Suffix,
}

#[derive(Subcommand)]
enum GenCmd {
    /// The 4m+5 state DFA whose minimum Wheeler DFA has 1 + 2^(m+2) states.
    WorstCase {
        m: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Trie of the words in a file, one per line.
    Trie {
        words: PathBuf,
        /// Alphabet tokens in order; defaults to the characters used.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random DFA over the first `sigma` letters.
    RandomDfa {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random NFA with at most `d` equally labeled edges per state.
    RandomNfa {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        acyclic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A finished command: text for stdout and the exit code.
enum Failure {
    /// Negative answer, printed on stdout.
    Negative(String),
    /// Negative outcome of a command that produces data; reported on stderr.
    Refused(String),
    Error(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Run = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Run {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> std::result::Result<Automaton, Failure> {
    parse_automaton(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_order(path: &Path, a: &Automaton) -> std::result::Result<WheelerOrder, Failure> {
    parse_order(&read(path)?, a.n_states()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path`, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> Run {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes an automaton and its order: to `path` and `path.order`, or both to stdout.
fn emit_with_order(path: Option<&Path>, a: &Automaton, ord: &WheelerOrder) -> Run {
    let ord = canonical_order(a, ord);
    match path {
        Some(p) => {
            write(p, &serialize_automaton(a))?;
            write(&p.with_extension("order"), &serialize_order(&ord))
        }
        None => {
            print!("{}{}", serialize_automaton(a), serialize_order(&ord));
            Ok(())
        }
    }
}

fn not_wheeler(r: &Reason) -> Failure {
    Failure::Negative(format!("NOT-WHEELER({})", r.tag()))
}

fn refused(e: Error) -> Failure {
    match e {
        Error::NotWheeler(r) => Failure::Refused(format!("NOT-WHEELER({})", r.tag())),
        e => e.into(),
    }
}

/// The offline sorter only reports a failed verification; on acyclic
/// inputs the online sorter names the inconsistency.
fn classify(a: &Automaton, r: Reason) -> Reason {
    match r {
        Reason::Verification if a.is_acyclic() => match sort_online(a) {
            Err(Error::NotWheeler(r2)) => r2,
            _ => r,
        },
        r => r,
    }
}

fn check(input: &Path, order: Option<&Path>, output: Option<&Path>) -> Run {
    let a = load(input)?;
    if let Some(o) = order {
        let ord = load_order(o, &a)?;
        return if verify_wheeler_order(&a, &ord) {
            println!("WHEELER");
            Ok(())
        } else {
            Err(not_wheeler(&Reason::Verification))
        };
    }
    let d = a.nondeterminism_degree();
    let found = match d {
        1 => match sort_offline(&a) {
            Ok(ord) => Some(ord),
            Err(Error::NotWheeler(r)) => return Err(not_wheeler(&classify(&a, r))),
            Err(e) => return Err(e.into()),
        },
        2 => match sort_2nfa(&a) {
            Ok(o) => o,
            Err(Error::NotInputConsistent { state, .. }) => {
                return Err(not_wheeler(&Reason::InputConsistency { state }))
            }
            Err(e) => return Err(e.into()),
        },
        _ => return Err(Failure::Usage(format!("UNSUPPORTED d={d}"))),
    };
    match found {
        Some(ord) => {
            println!("WHEELER");
            emit(output, &serialize_order(&canonical_order(&a, &ord)))
        }
        None => Err(not_wheeler(&Reason::Unsatisfiable)),
    }
}

fn sort(input: &Path, online: bool, output: Option<&Path>) -> Run {
    let a = load(input)?;
    let res = if online { sort_online(&a) } else { sort_offline(&a) };
    match res {
        Ok(ord) => emit(output, &serialize_order(&canonical_order(&a, &ord))),
        Err(Error::NotWheeler(r)) => {
            let r = if online { r } else { classify(&a, r) };
            Err(refused(Error::NotWheeler(r)))
        }
        Err(e) => Err(e.into()),
    }
}

fn run(cli: Cli) -> Run {
    match cli.cmd {
        Cmd::Check { input, order, output } => check(&input, order.as_deref(), output.as_deref()),
        Cmd::Sort { input, online, offline: _, output } => sort(&input, online, output.as_deref()),
        Cmd::Determinize { input, order, output } => {
            let a = load(&input)?;
            let ord = load_order(&order, &a)?;
            let d = determinize(&a, &ord).map_err(refused)?;
            emit_with_order(output.as_deref(), &d.automaton, &d.order)
        }
        Cmd::Minimize { input, order, output } => {
            let a = load(&input)?;
            let ord = load_order(&order, &a)?;
            if !a.is_deterministic() {
                return Err(Error::NotDeterministic.into());
            }
            let (m, mo) = wheeler_minimize(&a, &ord).map_err(refused)?;
            emit_with_order(output.as_deref(), &m, &mo)
        }
        Cmd::Hopcroft { input, output } => {
            let a = load(&input)?;
            emit(output.as_deref(), &serialize_automaton(&hopcroft(&a)?))
        }
        Cmd::Dfa2wdfa { input, max_states, output } => {
            let a = load(&input)?;
            let (m, ord) = min_wdfa_from_acyclic_dfa(&a, Some(max_states))?;
            emit_with_order(output.as_deref(), &m, &ord)
        }
        Cmd::Index { cmd: IndexCmd::Build { input, order, output } } => {
            let a = load(&input)?;
            let ord = load_order(&order, &a)?;
            let ix = build_index(&a, &ord).map_err(refused)?;
            write(&output, &ix.serialize())
        }
        Cmd::Index { cmd: IndexCmd::Query { index, mode, word } } => {
            let ix = WheelerIndex::parse(&read(&index)?)?;
            let mode = match mode {
                Mode::Membership => QueryMode::Membership,
                Mode::Substr => QueryMode::SubstringClosure,
                Mode::Suffix => QueryMode::SuffixClosure,
            };
            if ix.query_str(&word, mode)? {
                println!("ACCEPT");
                Ok(())
            } else {
                Err(Failure::Negative("REJECT".into()))
            }
        }
        Cmd::Equiv { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            if language_equivalent(&a, &b)? {
                println!("EQUIVALENT");
                Ok(())
            } else {
                Err(Failure::Negative("NOT-EQUIVALENT".into()))
            }
        }
        Cmd::Gen { cmd } => gen(cmd),
    }
}

fn gen(cmd: GenCmd) -> Run {
    match cmd {
        GenCmd::WorstCase { m, output } => {
            if m == 0 {
                return Err(Failure::Usage("m must be at least 1".into()));
            }
            emit(output.as_deref(), &serialize_automaton(&gen_worst_case(m)))
        }
        GenCmd::Trie { words, alphabet, output } => {
            let text = read(&words)?;
            let lines: Vec<&str> = text.lines().map(str::trim).collect();
            let alphabet = match alphabet {
                Some(s) => Alphabet::new(s.split_whitespace())?,
                None => {
                    let mut cs: Vec<char> = lines.iter().flat_map(|l| l.chars()).filter(|c| !c.is_whitespace()).collect();
                    cs.sort_unstable();
                    cs.dedup();
                    Alphabet::from_chars(&cs.into_iter().collect::<String>())?
                }
            };
            let ws = lines.iter().map(|l| alphabet.parse_word(l)).collect::<wheelix::Result<Vec<_>>>()?;
            emit(output.as_deref(), &serialize_automaton(&trie_from_strings(alphabet, &ws)))
        }
        GenCmd::RandomDfa { states, sigma, seed, output } => {
            if states == 0 || sigma == 0 {
                return Err(Failure::Usage("states and sigma must be positive".into()));
            }
            emit(output.as_deref(), &serialize_automaton(&random_dfa(states, sigma, seed)))
        }
        GenCmd::RandomNfa { states, sigma, d, acyclic, seed, output } => {
            if states == 0 || sigma == 0 || d == 0 {
                return Err(Failure::Usage("states, sigma and d must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            emit(output.as_deref(), &serialize_automaton(&random_nfa_with(&mut rng, states, sigma, d, acyclic)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = run(cli);
    std::io::stdout().flush().ok();
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("wheelix: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("wheelix: {e}");
            match e {
                Error::OutputLimitExceeded(_) => ExitCode::from(3),
                Error::NotWheeler(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

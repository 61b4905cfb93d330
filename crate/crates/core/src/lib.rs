//! Wheeler (prefix-sortable) finite automata.
//!
//! Recognition, sorting, determinization, minimization, conversion of acyclic
//! DFAs into minimum Wheeler DFAs, and an FM-index style query structure.

pub mod alphabet;
pub mod automaton;
pub mod convert;
pub mod determinize;
pub mod dyntriple;
pub mod error;
pub mod format;
pub mod gen;
pub mod index;
pub mod minimize;
pub mod recognizer;
pub mod sorter;
pub mod wheeler_check;

pub use alphabet::{Alphabet, Label, Symbol, Word};
pub use automaton::{Automaton, Edge, StateId};
pub use error::{Error, Reason, Result};
pub use wheeler_check::{brute_force_wheeler_order, verify_wheeler_order, WheelerOrder};
pub use recognizer::{build_2sat, solve_2sat, sort_2nfa, TwoSatInstance};
pub use sorter::{sort_offline, sort_online};
pub use convert::min_wdfa_from_acyclic_dfa;
pub use index::{build_index, naive_query, QueryMode, RankRange, WheelerIndex};
pub use determinize::{check_prefix_suffix_family, determinize, Determinized};
pub use minimize::{hopcroft, is_minimum_wdfa, language_equivalent, state_equivalence, wheeler_minimize, StatePartition};

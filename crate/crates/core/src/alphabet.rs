use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol in its [`Alphabet`]; comparison follows the alphabet order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Incoming label of a state. The source carries the sentinel `#`, which
/// orders before every alphabet symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Hash,
    Sym(Symbol),
}

impl Label {
    pub fn symbol(self) -> Option<Symbol> {
        match self {
            Label::Hash => None,
            Label::Sym(s) => Some(s),
        }
    }

    /// Dense index with `#` at 0 and symbol `c` at `c + 1`.
    #[inline]
    pub fn dense(self) -> usize {
        match self {
            Label::Hash => 0,
            Label::Sym(s) => s.index() + 1,
        }
    }
}

/// A word over an alphabet.
pub type Word = Vec<Symbol>;

/// Ordered, finite set of whitespace-free tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    lookup: HashMap<String, Symbol>,
}

impl Alphabet {
    /// Builds an alphabet whose order is the iteration order of `tokens`.
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols = Vec::new();
        let mut lookup = HashMap::new();
        for tok in tokens {
            let tok: String = tok.into();
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(Error::Syntax {
                    line: 0,
                    column: 0,
                    message: format!("invalid alphabet token `{tok}`"),
                });
            }
            if tok.contains('#') {
                return Err(Error::HashInAlphabet(tok));
            }
            let sym = Symbol(symbols.len() as u32);
            if lookup.insert(tok.clone(), sym).is_some() {
                return Err(Error::DuplicateSymbol(tok));
            }
            symbols.push(tok);
        }
        Ok(Alphabet { symbols, lookup })
    }

    /// Alphabet of single characters, in the given order.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.symbols.len() as u32).map(Symbol)
    }

    pub fn tokens(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.symbols[sym.index()]
    }

    pub fn label_name(&self, label: Label) -> &str {
        match label {
            Label::Hash => "#",
            Label::Sym(s) => self.name(s),
        }
    }

    pub fn get(&self, token: &str) -> Option<Symbol> {
        self.lookup.get(token).copied()
    }

    pub fn symbol(&self, token: &str) -> Result<Symbol> {
        self.get(token)
            .ok_or_else(|| Error::UnknownSymbol(token.to_string()))
    }

    /// True when every token is a single character, so words can be written
    /// without separators.
    pub fn is_char_alphabet(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word. Tokens are separated by whitespace or commas; when no
    /// separator is present and every token is a single character, each
    /// character is a symbol. The empty string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let separated = text.contains(|c: char| c.is_whitespace() || c == ',');
        if !separated && self.is_char_alphabet() {
            let mut buf = [0u8; 4];
            return text
                .chars()
                .map(|c| self.symbol(c.encode_utf8(&mut buf)))
                .collect();
        }
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| self.symbol(t))
            .collect()
    }

    /// Renders a word in the form accepted by [`Alphabet::parse_word`].
    pub fn format_word(&self, word: &[Symbol]) -> String {
        let sep = if self.is_char_alphabet() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbols.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_minimum() {
        assert!(Label::Hash < Label::Sym(Symbol(0)));
        assert!(Label::Sym(Symbol(0)) < Label::Sym(Symbol(1)));
    }

    #[test]
    fn rejects_reserved_and_duplicate_tokens() {
        assert_eq!(
            Alphabet::new(["a", "#"]).unwrap_err(),
            Error::HashInAlphabet("#".into())
        );
        assert!(matches!(
            Alphabet::new(["a", "a"]),
            Err(Error::DuplicateSymbol(_))
        ));
    }

    #[test]
    fn parse_words() {
        let ab = Alphabet::from_chars("ab").unwrap();
        assert_eq!(ab.parse_word("bba").unwrap(), vec![Symbol(1), Symbol(1), Symbol(0)]);
        assert_eq!(ab.parse_word("").unwrap(), Vec::<Symbol>::new());
        assert_eq!(ab.parse_word("a, b").unwrap(), vec![Symbol(0), Symbol(1)]);
        assert!(matches!(ab.parse_word("xyz"), Err(Error::UnknownSymbol(_))));

        let multi = Alphabet::new(["foo", "bar"]).unwrap();
        assert_eq!(multi.parse_word("bar foo").unwrap(), vec![Symbol(1), Symbol(0)]);
        assert_eq!(multi.format_word(&[Symbol(1), Symbol(0)]), "bar foo");
    }
}

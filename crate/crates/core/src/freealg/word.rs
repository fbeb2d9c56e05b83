use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FreeAlgError;

/// A generator, identified by its rank in the total order (0 = smallest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub u16);

impl Letter {
    pub fn rank(self) -> usize {
        self.0 as usize
    }
}

/// A word over the generators, ordered deg-lex: shorter words first, equal
/// lengths compared letter by letter by rank.
///
/// The empty word stands for the external unit of the augmented algebra and
/// only ever appears as a left or right coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(x: Letter) -> Self {
        Word(vec![x])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self[start..end]` as a new word.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn split_at(&self, mid: usize) -> (Word, Word) {
        (self.slice(0, mid), self.slice(mid, self.len()))
    }

    /// Position of the first occurrence of `needle`, if any.
    pub fn find(&self, needle: &Word) -> Option<usize> {
        if needle.len() > self.len() {
            return None;
        }
        (0..=self.len() - needle.len()).find(|&i| self.0[i..i + needle.len()] == needle.0[..])
    }

    pub fn contains(&self, needle: &Word) -> bool {
        self.find(needle).is_some()
    }
}

pub fn compare_deglex(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_deglex(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Generator names, indexed by rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Build from names listed greatest first, the order used by the JSON
    /// schema and by the showcase fixtures.
    pub fn from_greatest_first<I, T>(names: I) -> Result<Self, FreeAlgError>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.reverse();
        Self::from_smallest_first(names)
    }

    pub fn from_smallest_first(names: Vec<String>) -> Result<Self, FreeAlgError> {
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || "[]|.*+-".contains(c)) {
                return Err(FreeAlgError::BadGeneratorName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(FreeAlgError::DuplicateGenerator(n.clone()));
            }
        }
        if names.len() > u16::MAX as usize {
            return Err(FreeAlgError::BadGeneratorName("too many generators".into()));
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: Letter) -> &str {
        &self.names[x.rank()]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| Letter(i as u16))
    }

    /// All letters, smallest first.
    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        (0..self.names.len()).map(|i| Letter(i as u16))
    }

    /// Names greatest first.
    pub fn names_greatest_first(&self) -> Vec<String> {
        self.names.iter().rev().cloned().collect()
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parse a word. Letters may be separated by spaces or dots; runs without
    /// separators are split greedily by longest generator name.
    pub fn parse_word(&self, s: &str) -> Result<Word, FreeAlgError> {
        let mut out = Vec::new();
        for piece in s.split(|c: char| c.is_whitespace() || c == '.') {
            let mut rest = piece;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, n)) => {
                        out.push(Letter(i as u16));
                        rest = &rest[n.len()..];
                    }
                    None => return Err(FreeAlgError::UnknownGenerator(rest.to_string())),
                }
            }
        }
        Ok(Word(out))
    }

    pub fn format_word(&self, w: &Word) -> String {
        let sep = if self.single_char() { "" } else { " " };
        w.letters().iter().map(|&x| self.name(x)).collect::<Vec<_>>().join(sep)
    }

    /// Formatter that renders `w` with these names.
    pub fn show<'a>(&'a self, w: &'a Word) -> impl fmt::Display + 'a {
        ShowWord { alphabet: self, word: w }
    }
}

struct ShowWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for ShowWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&self.alphabet.format_word(self.word))
        }
    }
}

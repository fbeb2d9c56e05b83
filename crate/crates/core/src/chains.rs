//! Anick chains.
//!
//! A 0-chain is a generator. An n-chain extends an (n−1)-chain with tail
//! `t'` by a word `t` such that `t't` ends with an obstruction starting
//! inside `t'` and `t't` with its last letter removed is normal. The new tail
//! is `t`. For quadratic obstruction sets this is a path `x_0 → … → x_n` in
//! the graph with edges `x → y` iff `xy` is an obstruction.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use crate::freealg::{Alphabet, Letter, RewriteSystem, Word};
use crate::Scalar;

/// A chain with its marked division. The empty division is the generator
/// `1 ⊗ 1` of `A_0 = Λ ⊗ Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnickChain {
    entries: Vec<Word>,
}

impl AnickChain {
    /// Wrap a division without checking it; see [`is_chain`].
    pub fn from_entries_unchecked(entries: Vec<Word>) -> Self {
        AnickChain { entries }
    }

    /// The basis element of `A_0`.
    pub fn unit() -> Self {
        AnickChain { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    /// n such that the chain lies in `V^(n)`; `None` for the `A_0` generator.
    pub fn degree(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    /// Homological degree of the free module the chain generates (`A_{n+1}`).
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn word(&self) -> Word {
        self.entries.iter().fold(Word::empty(), |acc, w| acc.concat(w))
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        bracket(&self.entries, alphabet)
    }

    /// Parse `[a|b|c]`.
    pub fn parse(s: &str, alphabet: &Alphabet) -> Option<Self> {
        parse_bracket(s, alphabet).map(|entries| AnickChain { entries })
    }
}

impl Ord for AnickChain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries
            .len()
            .cmp(&other.entries.len())
            .then_with(|| self.word().cmp(&other.word()))
            .then_with(|| {
                let a: Vec<usize> = self.entries.iter().map(Word::len).collect();
                let b: Vec<usize> = other.entries.iter().map(Word::len).collect();
                a.cmp(&b)
            })
    }
}

impl PartialOrd for AnickChain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn bracket(entries: &[Word], alphabet: &Alphabet) -> String {
    let parts: Vec<String> = entries.iter().map(|w| alphabet.format_word(w)).collect();
    format!("[{}]", parts.join("|"))
}

pub(crate) fn parse_bracket(s: &str, alphabet: &Alphabet) -> Option<Vec<Word>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split('|').map(|part| alphabet.parse_word(part.trim()).ok().filter(|w| !w.is_empty())).collect()
}

impl crate::bimodule::BasisLabel for AnickChain {
    fn label(&self, alphabet: &Alphabet) -> String {
        self.display(alphabet)
    }
}

/// True iff `next` may follow an entry ending in `tail`: `tail·next` ends
/// with an obstruction that starts inside `tail`, and dropping the last letter
/// of `tail·next` leaves a normal word.
pub fn extends<S: Scalar>(sys: &RewriteSystem<S>, tail: &Word, next: &Word) -> bool {
    if next.is_empty() {
        return false;
    }
    let joined = tail.concat(next);
    let ends_ok = (next.len() + 1..=sys.max_obstruction_len().min(joined.len()))
        .any(|l| sys.is_obstruction(&joined.slice(joined.len() - l, joined.len())));
    ends_ok && sys.is_normal(&joined.slice(0, joined.len() - 1))
}

/// All words `t` with `extends(tail, t)`, ascending.
pub fn extensions<S: Scalar>(sys: &RewriteSystem<S>, tail: &Word) -> Vec<Word> {
    let mut out = BTreeSet::new();
    for v in sys.obstructions() {
        for overlap in 1..v.len().min(tail.len() + 1) {
            if tail.slice(tail.len() - overlap, tail.len()) != v.slice(0, overlap) {
                continue;
            }
            let t = v.slice(overlap, v.len());
            if extends(sys, tail, &t) {
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}

/// Membership test for a division; returns the chain degree on success.
pub fn is_chain<S: Scalar>(sys: &RewriteSystem<S>, entries: &[Word]) -> Option<usize> {
    let first = entries.first()?;
    if first.len() != 1 || first.letters()[0].rank() >= sys.alphabet().len() {
        return None;
    }
    entries.windows(2).all(|pair| extends(sys, &pair[0], &pair[1])).then(|| entries.len() - 1)
}

/// `V^(n)` in the canonical order (deg-lex on the word, then division).
pub fn enumerate_chains<S: Scalar>(sys: &RewriteSystem<S>, degree: usize) -> Vec<AnickChain> {
    let mut out = if sys.is_quadratic() {
        quadratic_chains(sys, degree)
    } else {
        general_chains(sys, degree)
    };
    out.sort();
    out
}

fn general_chains<S: Scalar>(sys: &RewriteSystem<S>, degree: usize) -> Vec<AnickChain> {
    let mut layer: Vec<Vec<Word>> = sys.alphabet().letters().map(|x| vec![Word::letter(x)]).collect();
    for _ in 0..degree {
        let mut next = Vec::new();
        for entries in &layer {
            for t in extensions(sys, entries.last().expect("nonempty")) {
                let mut e = entries.clone();
                e.push(t);
                next.push(e);
            }
        }
        layer = next;
    }
    layer.into_iter().map(AnickChain::from_entries_unchecked).collect()
}

/// Paths in the obstruction graph.
fn quadratic_chains<S: Scalar>(sys: &RewriteSystem<S>, degree: usize) -> Vec<AnickChain> {
    let n = sys.alphabet().len();
    let mut succ: Vec<Vec<Letter>> = vec![Vec::new(); n];
    for v in sys.obstructions() {
        let l = v.letters();
        succ[l[0].rank()].push(l[1]);
    }
    let mut layer: Vec<Vec<Letter>> = sys.alphabet().letters().map(|x| vec![x]).collect();
    for _ in 0..degree {
        layer = layer
            .iter()
            .flat_map(|path| {
                let last = *path.last().expect("nonempty");
                succ[last.rank()].iter().map(move |&y| {
                    let mut p = path.clone();
                    p.push(y);
                    p
                })
            })
            .collect();
    }
    layer
        .into_iter()
        .map(|p| AnickChain::from_entries_unchecked(p.into_iter().map(Word::letter).collect()))
        .collect()
}

/// Number of chains of each degree via path counting (quadratic case only).
pub fn quadratic_path_counts<S: Scalar>(sys: &RewriteSystem<S>, max_degree: usize) -> Option<Vec<usize>> {
    if !sys.is_quadratic() {
        return None;
    }
    let n = sys.alphabet().len();
    let mut adj = vec![vec![0usize; n]; n];
    for v in sys.obstructions() {
        let l = v.letters();
        adj[l[0].rank()][l[1].rank()] += 1;
    }
    let mut ends = vec![1usize; n];
    let mut counts = vec![n];
    for _ in 0..max_degree {
        let mut next = vec![0usize; n];
        for (x, &c) in ends.iter().enumerate() {
            for (y, &a) in adj[x].iter().enumerate() {
                next[y] += c * a;
            }
        }
        ends = next;
        counts.push(ends.iter().sum());
    }
    Some(counts)
}

/// Memo of `V^(n)` per degree for one rewrite system.
#[derive(Debug, Default)]
pub struct ChainCache {
    sets: Mutex<Vec<Arc<Vec<AnickChain>>>>,
}

impl ChainCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get<S: Scalar>(&self, sys: &RewriteSystem<S>, degree: usize) -> Arc<Vec<AnickChain>> {
        let mut sets = self.sets.lock().expect("chain cache poisoned");
        while sets.len() <= degree {
            let d = sets.len();
            sets.push(Arc::new(enumerate_chains(sys, d)));
        }
        Arc::clone(&sets[degree])
    }
}

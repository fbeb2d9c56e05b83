//! Elements of free Λ-bimodules `Λ ⊗ kB ⊗ Λ` with Λ-coefficients held as
//! normal words (the empty word is the external unit).

use std::collections::btree_map::{self, BTreeMap};


use crate::freealg::{split_sign, Alphabet, RewriteSystem, Word};
use crate::{Rational, Scalar};

/// Basis labels that know how to print themselves.
pub trait BasisLabel: Clone + Ord + std::hash::Hash + std::fmt::Debug {
    fn label(&self, alphabet: &Alphabet) -> String;
}

/// `Σ coef · left ⊗ basis ⊗ right`, sorted by (basis, left, right), no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BimoduleElement<B, S = Rational> {
    terms: BTreeMap<(B, Word, Word), S>,
}

impl<B: BasisLabel, S: Scalar> Default for BimoduleElement<B, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<B: BasisLabel, S: Scalar> BimoduleElement<B, S> {
    pub fn zero() -> Self {
        BimoduleElement { terms: BTreeMap::new() }
    }

    /// `1 ⊗ b ⊗ 1`
    pub fn basis(b: B) -> Self {
        Self::term(S::one(), Word::empty(), b, Word::empty())
    }

    pub fn term(coef: S, left: Word, b: B, right: Word) -> Self {
        let mut out = Self::zero();
        out.add_term(coef, left, b, right);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (left, basis, right, coef).
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &B, &Word, &S)> {
        self.terms.iter().map(|((b, l, r), c)| (l, b, r, c))
    }

    pub fn coefficient(&self, left: &Word, b: &B, right: &Word) -> S {
        self.terms.get(&(b.clone(), left.clone(), right.clone())).cloned().unwrap_or_else(S::zero)
    }

    /// Caller guarantees `left` and `right` are normal words.
    pub fn add_term(&mut self, coef: S, left: Word, b: B, right: Word) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry((b, left, right)) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coef;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        for ((b, l, r), a) in other.terms.iter() {
            self.add_term(a.clone() * c.clone(), l.clone(), b.clone(), r.clone());
        }
    }

    pub fn scaled(&self, c: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one());
        out
    }

    /// `self += c · left · other · right`, normalizing the Λ-coefficients.
    pub fn add_sandwiched(&mut self, sys: &RewriteSystem<S>, c: &S, left: &Word, other: &Self, right: &Word) {
        for ((b, l, r), a) in other.terms.iter() {
            let ll = sys.multiply_words(left, l);
            let rr = sys.multiply_words(r, right);
            let base = a.clone() * c.clone();
            for (lw, lc) in ll.iter() {
                for (rw, rc) in rr.iter() {
                    self.add_term(base.clone() * lc.clone() * rc.clone(), lw.clone(), b.clone(), rw.clone());
                }
            }
        }
    }

    /// Apply a bimodule map given on basis elements: `Σ c·l·f(b)·r`.
    pub fn expand<B2, F, E>(&self, sys: &RewriteSystem<S>, mut f: F) -> Result<BimoduleElement<B2, S>, E>
    where
        B2: BasisLabel,
        F: FnMut(&B) -> Result<BimoduleElement<B2, S>, E>,
    {
        let mut out = BimoduleElement::zero();
        for ((b, l, r), c) in self.terms.iter() {
            let image = f(b)?;
            out.add_sandwiched(sys, c, l, &image, r);
        }
        Ok(out)
    }

    /// Keep only the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Word, &B, &Word) -> bool) -> Self {
        BimoduleElement {
            terms: self.terms.iter().filter(|((b, l, r), _)| keep(l, b, r)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Terms written `coef*left[chain]right` with unit coefficients elided.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, ((b, l, r), c)) in self.terms.iter().enumerate() {
            let (neg, mag) = split_sign(c);
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(&alphabet.format_word(l));
            s.push_str(&b.label(alphabet));
            s.push_str(&alphabet.format_word(r));
        }
        s
    }

    /// Parse the `display` notation, e.g. `q[p|e] - 2*[e|e]q`. Words are
    /// taken as given and must already be normal.
    pub fn parse(s: &str, alphabet: &Alphabet, mut basis: impl FnMut(&str) -> Option<B>) -> Option<Self> {
        let mut out = Self::zero();
        let s = s.trim();
        if s == "0" {
            return Some(out);
        }
        let mut rest = s;
        let mut sign = S::one();
        loop {
            rest = rest.trim_start();
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r.trim_start();
            }
            let open = rest.find('[')?;
            let close = open + rest[open..].find(']')?;
            let end = rest[close..].find([' ', '+', '-']).map_or(rest.len(), |i| close + i);
            let (mut coef, mut left) = (S::one(), &rest[..open]);
            if let Some((c, l)) = left.split_once('*') {
                coef = S::parse_decimal(c)?;
                left = l;
            }
            let b = basis(&rest[open..=close])?;
            let l = alphabet.parse_word(left.trim()).ok()?;
            let r = alphabet.parse_word(&rest[close + 1..end]).ok()?;
            out.add_term(sign.clone() * coef, l, b, r);
            rest = rest[end..].trim_start();
            if rest.is_empty() {
                return Some(out);
            }
            sign = match rest.as_bytes()[0] {
                b'+' => S::one(),
                b'-' => -S::one(),
                _ => return None,
            };
            rest = &rest[1..];
        }
    }
}

use std::collections::btree_map::{self, BTreeMap};


use super::{Alphabet, Word};
use crate::{Rational, Scalar};

/// A finite linear combination of words. Terms are kept sorted by the
/// deg-lex order and zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FreePoly<S = Rational> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for FreePoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> FreePoly<S> {
    pub fn zero() -> Self {
        FreePoly { terms: BTreeMap::new() }
    }

    pub fn monomial(w: Word) -> Self {
        Self::term(w, S::one())
    }

    pub fn term(w: Word, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, S)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
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

    /// Terms in ascending monomial order.
    pub fn iter(&self) -> btree_map::Iter<'_, Word, S> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &FreePoly<S>, c: &S) {
        for (w, a) in other.iter() {
            self.add_term(w.clone(), a.clone() * c.clone());
        }
    }

    pub fn scaled(&self, c: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &FreePoly<S>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn sub(&self, other: &FreePoly<S>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one());
        out
    }

    /// Product in the free algebra (concatenation, no reduction).
    pub fn mul(&self, other: &FreePoly<S>) -> Self {
        let mut out = Self::zero();
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                out.add_term(a.concat(b), x.clone() * y.clone());
            }
        }
        out
    }

    /// `left * self * right` for words, without reduction.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Self {
        Self::from_terms(self.iter().map(|(w, c)| (left.concat(w).concat(right), c.clone())))
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.iter().rev().enumerate() {
            let (neg, mag) = split_sign(c);
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let word = alphabet.show(w).to_string();
            if mag.is_one() {
                s.push_str(&word);
            } else {
                s.push_str(&format!("{mag}*{word}"));
            }
        }
        s
    }
}

/// Split a scalar into (is_negative, magnitude) for pretty printing.
pub(crate) fn split_sign<S: Scalar>(c: &S) -> (bool, S) {
    let text = c.to_string();
    if text.starts_with('-') {
        (true, -c.clone())
    } else {
        (false, c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Letter;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn cancellation_removes_terms() {
        let w = Word::letter(Letter(0));
        let mut p = FreePoly::term(w.clone(), q(2));
        p.add_term(w, q(-2));
        assert!(p.is_zero());
    }

    #[test]
    fn terms_sorted_deglex() {
        let a = Alphabet::from_greatest_first(["q", "p", "e"]).unwrap();
        let p = FreePoly::<Rational>::from_terms([
            (a.parse_word("qp").unwrap(), q(1)),
            (a.parse_word("e").unwrap(), q(-3)),
            (a.parse_word("pq").unwrap(), q(1)),
        ]);
        let words: Vec<String> = p.iter().map(|(w, _)| a.format_word(w)).collect();
        assert_eq!(words, ["e", "pq", "qp"]);
        assert_eq!(p.display(&a), "qp + pq - 3*e");
    }
}

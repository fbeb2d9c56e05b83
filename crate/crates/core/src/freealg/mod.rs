//! Free associative algebras over an exact field, deg-lex rewriting and
//! Gröbner–Shirshov basis verification.

mod gsb;
mod json;
mod poly;
mod word;

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use dashmap::DashMap;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use gsb::{verify_gsb, Ambiguity, GsbReport};
pub use json::{PresentationJson, RelationJson, TermJson};
pub use poly::FreePoly;
pub(crate) use poly::split_sign;
pub use word::{compare_deglex, Alphabet, Letter, Word};

use crate::{Rational, Scalar};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("bad generator name `{0}`")]
    BadGeneratorName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator in `{0}`")]
    UnknownGenerator(String),
    #[error("invalid coefficient `{0}`")]
    BadCoefficient(String),
    #[error("obstruction `{0}` must have length at least 2")]
    ShortObstruction(String),
    #[error("obstruction `{0}` appears in more than one rule")]
    DuplicateObstruction(String),
    #[error("rule for `{0}` has a constant term; the algebra must be augmented with ε(A) = 0")]
    ConstantTerm(String),
    #[error("rule for `{lhs}`: monomial `{monomial}` is not smaller than the obstruction")]
    NotDecreasing { lhs: String, monomial: String },
    #[error("obstruction `{inner}` occurs inside obstruction `{outer}`")]
    NotReduced { inner: String, outer: String },
    #[error("not a Gröbner–Shirshov basis: `{word}` reduces to `{left}` and to `{right}`")]
    NotAGsb { word: String, left: String, right: String },
    #[error("idempotent `{0}` is not a generator")]
    UnknownIdempotent(String),
    #[error("malformed presentation JSON: {0}")]
    Json(String),
}

/// `lhs -> rhs`, with every monomial of `rhs` smaller than `lhs` and no
/// constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule<S = Rational> {
    pub lhs: Word,
    pub rhs: FreePoly<S>,
}

impl<S: Scalar> RewriteRule<S> {
    pub fn new(lhs: Word, rhs: FreePoly<S>) -> Self {
        RewriteRule { lhs, rhs }
    }
}

/// Generators plus a structurally valid, inter-reduced rule set. Rewriting
/// is available, but confluence has not been checked; see [`Presentation`].
pub struct RewriteSystem<S = Rational> {
    alphabet: Alphabet,
    rules: Vec<RewriteRule<S>>,
    by_lhs: HashMap<Word, usize>,
    max_lhs: usize,
    nf_cache: DashMap<Word, Arc<FreePoly<S>>>,
}

impl<S: Scalar> Clone for RewriteSystem<S> {
    fn clone(&self) -> Self {
        RewriteSystem {
            alphabet: self.alphabet.clone(),
            rules: self.rules.clone(),
            by_lhs: self.by_lhs.clone(),
            max_lhs: self.max_lhs,
            nf_cache: DashMap::new(),
        }
    }
}

impl<S: Scalar> fmt::Debug for RewriteSystem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("generators", &self.alphabet.names_greatest_first())
            .field("rules", &self.rules.len())
            .finish()
    }
}

impl<S: Scalar> RewriteSystem<S> {
    pub fn new(alphabet: Alphabet, rules: Vec<RewriteRule<S>>) -> Result<Self, FreeAlgError> {
        let show = |w: &Word| alphabet.format_word(w);
        let mut by_lhs = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.len() < 2 {
                return Err(FreeAlgError::ShortObstruction(show(&r.lhs)));
            }
            if r.lhs.letters().iter().any(|x| x.rank() >= alphabet.len()) {
                return Err(FreeAlgError::UnknownGenerator(format!("{:?}", r.lhs)));
            }
            for (m, _) in r.rhs.iter() {
                if m.is_empty() {
                    return Err(FreeAlgError::ConstantTerm(show(&r.lhs)));
                }
                if m.letters().iter().any(|x| x.rank() >= alphabet.len()) {
                    return Err(FreeAlgError::UnknownGenerator(format!("{:?}", m)));
                }
                if *m >= r.lhs {
                    return Err(FreeAlgError::NotDecreasing { lhs: show(&r.lhs), monomial: show(m) });
                }
            }
            if by_lhs.insert(r.lhs.clone(), i).is_some() {
                return Err(FreeAlgError::DuplicateObstruction(show(&r.lhs)));
            }
        }
        for a in &rules {
            for b in &rules {
                if a.lhs != b.lhs && b.lhs.contains(&a.lhs) {
                    return Err(FreeAlgError::NotReduced { inner: show(&a.lhs), outer: show(&b.lhs) });
                }
            }
        }
        let max_lhs = rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0);
        let mut sys = RewriteSystem { alphabet, rules, by_lhs, max_lhs, nf_cache: DashMap::new() };
        // Inter-reduce right-hand sides once; terminates since rhs < lhs.
        let reduced: Vec<FreePoly<S>> = sys.rules.iter().map(|r| sys.normal_form(&r.rhs)).collect();
        for (r, rhs) in sys.rules.iter_mut().zip(reduced) {
            r.rhs = rhs;
        }
        sys.nf_cache.clear();
        Ok(sys)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[RewriteRule<S>] {
        &self.rules
    }

    pub fn obstructions(&self) -> impl Iterator<Item = &Word> {
        self.rules.iter().map(|r| &r.lhs)
    }

    pub fn is_obstruction(&self, w: &Word) -> bool {
        self.by_lhs.contains_key(w)
    }

    pub fn max_obstruction_len(&self) -> usize {
        self.max_lhs
    }

    /// True iff every obstruction has length 2.
    pub fn is_quadratic(&self) -> bool {
        self.rules.iter().all(|r| r.lhs.len() == 2)
    }

    /// Leftmost occurrence of an obstruction in `w` as (position, rule index).
    /// Rules are reduced, so at most one obstruction starts at each position.
    pub fn leftmost_obstruction(&self, w: &Word) -> Option<(usize, usize)> {
        let letters = w.letters();
        for start in 0..letters.len() {
            for len in 2..=self.max_lhs.min(letters.len() - start) {
                let candidate = Word::new(letters[start..start + len].to_vec());
                if let Some(&i) = self.by_lhs.get(&candidate) {
                    return Some((start, i));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.leftmost_obstruction(w).is_none()
    }

    /// Normal form of a single word, memoized.
    pub fn normal_form_word(&self, w: &Word) -> Arc<FreePoly<S>> {
        if let Some(hit) = self.nf_cache.get(w) {
            return Arc::clone(hit.value());
        }
        let result = match self.leftmost_obstruction(w) {
            None => FreePoly::monomial(w.clone()),
            Some((pos, rule)) => {
                let r = &self.rules[rule];
                let prefix = w.slice(0, pos);
                let suffix = w.slice(pos + r.lhs.len(), w.len());
                let mut out = FreePoly::zero();
                for (m, c) in r.rhs.iter() {
                    let rewritten = prefix.concat(m).concat(&suffix);
                    out.add_scaled(&self.normal_form_word(&rewritten), c);
                }
                out
            }
        };
        let result = Arc::new(result);
        self.nf_cache.insert(w.clone(), Arc::clone(&result));
        result
    }

    pub fn normal_form(&self, f: &FreePoly<S>) -> FreePoly<S> {
        let mut out = FreePoly::zero();
        for (w, c) in f.iter() {
            out.add_scaled(&self.normal_form_word(w), c);
        }
        out
    }

    /// Normal form of the product of two words. The empty word is the unit.
    pub fn multiply_words(&self, a: &Word, b: &Word) -> Arc<FreePoly<S>> {
        self.normal_form_word(&a.concat(b))
    }

    /// Normal form of `f * g`.
    pub fn multiply(&self, f: &FreePoly<S>, g: &FreePoly<S>) -> FreePoly<S> {
        self.normal_form(&f.mul(g))
    }

    /// Reduce `w` at a specific position using the rule whose obstruction
    /// starts there, without normalizing further.
    pub(crate) fn rewrite_at(&self, w: &Word, pos: usize, rule: usize) -> FreePoly<S> {
        let r = &self.rules[rule];
        let prefix = w.slice(0, pos);
        let suffix = w.slice(pos + r.lhs.len(), w.len());
        r.rhs.sandwich(&prefix, &suffix)
    }

    /// Normal words of exactly the given length, ascending.
    pub fn normal_words_of_length(&self, len: usize) -> Vec<Word> {
        let mut layer = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                for x in self.alphabet.letters() {
                    let cand = w.concat(&Word::letter(x));
                    if !self.has_obstruction_suffix(&cand) {
                        next.push(cand);
                    }
                }
            }
            layer = next;
        }
        layer.sort();
        layer
    }

    /// True iff some obstruction is a suffix of `w`.
    pub fn has_obstruction_suffix(&self, w: &Word) -> bool {
        (2..=self.max_lhs.min(w.len())).any(|l| self.by_lhs.contains_key(&w.slice(w.len() - l, w.len())))
    }

    pub fn format_poly(&self, f: &FreePoly<S>) -> String {
        f.display(&self.alphabet)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.alphabet.format_word(w)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, FreeAlgError> {
        self.alphabet.parse_word(s)
    }
}

/// A rewrite system that passed the Gröbner–Shirshov check, optionally with
/// a designated idempotent generator.
pub struct Presentation<S = Rational> {
    system: RewriteSystem<S>,
    idempotent: Option<Letter>,
    hash: String,
}

impl<S: Scalar> Clone for Presentation<S> {
    fn clone(&self) -> Self {
        Presentation { system: self.system.clone(), idempotent: self.idempotent, hash: self.hash.clone() }
    }
}

impl<S: Scalar> fmt::Debug for Presentation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("system", &self.system)
            .field("idempotent", &self.idempotent)
            .field("hash", &self.hash)
            .finish()
    }
}

impl<S: Scalar> Deref for Presentation<S> {
    type Target = RewriteSystem<S>;

    fn deref(&self) -> &RewriteSystem<S> {
        &self.system
    }
}

impl<S: Scalar> Presentation<S> {
    /// Build and verify. Fails with [`FreeAlgError::NotAGsb`] on the first
    /// unresolved ambiguity.
    pub fn new(system: RewriteSystem<S>, idempotent: Option<Letter>) -> Result<Self, FreeAlgError> {
        let report = verify_gsb(&system);
        if let Some(bad) = report.failures().next() {
            return Err(FreeAlgError::NotAGsb {
                word: system.format_word(&bad.word),
                left: system.format_poly(&bad.first_nf),
                right: system.format_poly(&bad.second_nf),
            });
        }
        if let Some(e) = idempotent {
            if e.rank() >= system.alphabet.len() {
                return Err(FreeAlgError::UnknownIdempotent(format!("{e:?}")));
            }
        }
        let hash = content_hash(&system, idempotent);
        Ok(Presentation { system, idempotent, hash })
    }

    /// Convenience constructor from generator names (greatest first) and
    /// rules written as `("qp", &[("1", "pq"), ("1", "e")])`.
    pub fn from_strs(
        generators: &[&str],
        rules: &[(&str, &[(&str, &str)])],
    ) -> Result<Self, FreeAlgError> {
        let json = PresentationJson {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relations: rules
                .iter()
                .map(|(lhs, rhs)| RelationJson {
                    lhs: lhs.to_string(),
                    rhs: rhs
                        .iter()
                        .map(|(c, w)| TermJson { coef: c.to_string(), word: w.to_string() })
                        .collect(),
                })
                .collect(),
            idempotent: None,
        };
        json.build()
    }

    pub fn with_idempotent(mut self, e: Letter) -> Self {
        self.idempotent = Some(e);
        self.hash = content_hash(&self.system, self.idempotent);
        self
    }

    pub fn system(&self) -> &RewriteSystem<S> {
        &self.system
    }

    pub fn idempotent(&self) -> Option<Letter> {
        self.idempotent
    }

    /// Hex SHA-256 of the canonical rule listing; stable across runs.
    pub fn content_hash(&self) -> &str {
        &self.hash
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.system.alphabet.letter(name)
    }

    pub fn word(&self, s: &str) -> Word {
        self.parse_word(s).unwrap_or_else(|e| panic!("bad word `{s}`: {e}"))
    }

    pub fn from_json_str(s: &str) -> Result<Self, FreeAlgError> {
        let parsed: PresentationJson =
            serde_json::from_str(s).map_err(|e| FreeAlgError::Json(e.to_string()))?;
        parsed.build()
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson::from_presentation(self)
    }
}

fn content_hash<S: Scalar>(sys: &RewriteSystem<S>, idempotent: Option<Letter>) -> String {
    let mut h = Sha256::new();
    for name in sys.alphabet.names_greatest_first() {
        h.update(name.as_bytes());
        h.update(b",");
    }
    h.update(b";");
    for r in &sys.rules {
        h.update(sys.format_word(&r.lhs).as_bytes());
        h.update(b"->");
        for (w, c) in r.rhs.iter() {
            h.update(format!("{c}*{}+", sys.format_word(w)).as_bytes());
        }
        h.update(b";");
    }
    if let Some(e) = idempotent {
        h.update(b"idempotent=");
        h.update(sys.alphabet.name(e).as_bytes());
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::w1_presentation;
    use crate::Rational;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn w1_rewrites_qp() {
        let w1 = w1_presentation();
        let nf = w1.normal_form_word(&w1.word("qp"));
        assert_eq!(w1.format_poly(&nf), "pq + e");
    }

    #[test]
    fn normal_words_are_fixpoints() {
        let w1 = w1_presentation();
        for s in ["e", "p", "pq", "ppqq", "q"] {
            let w = w1.word(s);
            assert_eq!(*w1.normal_form_word(&w), FreePoly::monomial(w));
        }
    }

    #[test]
    fn qqp_matches_hand_rewriting() {
        // qqp -> q(pq + e) = qpq + qe -> (pq + e)q + q = pqq + eq + q -> pqq + 2q
        let w1 = w1_presentation();
        let expected = FreePoly::from_terms([
            (w1.word("pqq"), Rational::one()),
            (w1.word("q"), Rational::from_integer(2.into())),
        ]);
        assert_eq!(*w1.normal_form_word(&w1.word("qqp")), expected);
    }

    #[test]
    fn rejects_constant_terms() {
        let err = Presentation::<Rational>::from_strs(&["x"], &[("xx", &[("1", "")])]).unwrap_err();
        assert!(matches!(err, FreeAlgError::ConstantTerm(_)));
    }

    #[test]
    fn rejects_increasing_rules() {
        let err = Presentation::<Rational>::from_strs(&["y", "x"], &[("xy", &[("1", "yx")])]).unwrap_err();
        assert!(matches!(err, FreeAlgError::NotDecreasing { .. }));
    }

    #[test]
    fn rejects_non_reduced_obstructions() {
        let err = Presentation::<Rational>::from_strs(&["x"], &[("xx", &[]), ("xxx", &[])]).unwrap_err();
        assert!(matches!(err, FreeAlgError::NotReduced { .. }));
    }

    #[test]
    fn rhs_inter_reduced_at_construction() {
        // z > y > x; zz -> yy is stored as zz -> x because yy -> x
        let a = Alphabet::from_greatest_first(["z", "y", "x"]).unwrap();
        let sys = RewriteSystem::<Rational>::new(
            a.clone(),
            vec![
                RewriteRule::new(a.parse_word("zz").unwrap(), FreePoly::monomial(a.parse_word("yy").unwrap())),
                RewriteRule::new(a.parse_word("yy").unwrap(), FreePoly::monomial(a.parse_word("x").unwrap())),
            ],
        )
        .unwrap();
        assert_eq!(sys.format_poly(&sys.rules()[0].rhs), "x");
    }

    #[test]
    fn w1_normal_words_enumerated() {
        let w1 = w1_presentation();
        let (e, p, q) = (w1.letter("e").unwrap(), w1.letter("p").unwrap(), w1.letter("q").unwrap());
        for len in 1..=5 {
            let got = w1.normal_words_of_length(len);
            let mut expected: Vec<Word> = Vec::new();
            if len == 1 {
                expected.push(Word::letter(e));
            }
            for a in 0..=len {
                let mut v = vec![p; a];
                v.extend(std::iter::repeat_n(q, len - a));
                expected.push(Word::new(v));
            }
            expected.sort();
            assert_eq!(got, expected, "length {len}");
            // brute force over all words agrees
            let brute = all_words(3, len).into_iter().filter(|w| w1.is_normal(w)).count();
            assert_eq!(brute, expected.len());
        }
    }

    fn all_words(n: u16, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (0..n).map(move |x| w.concat(&Word::letter(Letter(x)))))
                .collect();
        }
        out
    }

    fn small_poly() -> impl Strategy<Value = FreePoly<Rational>> {
        proptest::collection::vec((proptest::collection::vec(0u16..3, 1..4), -3i64..4), 0..4).prop_map(|ts| {
            FreePoly::from_terms(ts.into_iter().map(|(w, c)| {
                (Word::new(w.into_iter().map(Letter).collect()), Rational::from_integer(c.into()))
            }))
        })
    }

    proptest! {
        #[test]
        fn normal_form_respects_products(f in small_poly(), g in small_poly()) {
            let w1 = w1_presentation();
            let direct = w1.normal_form(&f.mul(&g));
            let staged = w1.normal_form(&w1.normal_form(&f).mul(&w1.normal_form(&g)));
            prop_assert_eq!(&direct, &staged);
            prop_assert_eq!(w1.normal_form(&direct), direct.clone());
            prop_assert!(direct.iter().all(|(w, _)| w1.is_normal(w)));
        }
    }
}

//! Algebraic discrete Morse theory on the two-sided bar resolution.
//!
//! Vertices of the bar graph are tensors `[a_1|…|a_n]` of nonempty normal
//! words; an edge `v → w` of weight `c` records a term `c·l[w]r` of the bar
//! differential `d(v)`. The matching pairs vertices along edges with unit
//! Λ-coefficients and invertible weight, and its critical vertices are
//! exactly the Anick chains. The Anick differential of a chain is the sum of
//! weights of all paths in the graph with matched edges inverted (weight
//! `c ↦ −1/c`) that end at a critical vertex one dimension lower.
//!
//! The matching, for `v = [w_1|…|w_n]`: let `k` be the length of the longest
//! prefix `[w_1|…|w_k]` that is an Anick chain.
//! - `k = n`: critical.
//! - `k = 0`: `w_1` has length ≥ 2; `v` is matched with the split
//!   `[y|w'|w_2|…]` where `w_1 = y·w'`.
//! - otherwise, if some proper prefix `p` of `w_{k+1}` extends the chain
//!   (take the shortest), `v` is matched with the split of `w_{k+1}` into
//!   `[p|p']`; if none exists then `w_k·w_{k+1}` is normal and `v` is matched
//!   with the merge of entries `k` and `k+1`.
//!
//! In the quadratic case this reduces to: a single letter `y = w_{k+1}` merges,
//! a longer `w_{k+1} = y·w'` splits when `x_k y` is an obstruction and merges
//! otherwise.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use dashmap::DashMap;
use thiserror::Error;

use crate::bimodule::{BasisLabel, BimoduleElement};
use crate::chains::{bracket, enumerate_chains, extends, is_chain, AnickChain};
use crate::freealg::{Alphabet, Presentation, RewriteSystem, Word};
use crate::{Rational, Scalar};

/// Element of the Anick resolution: a Λ-bimodule combination of chains.
pub type ChainElement<S = Rational> = BimoduleElement<AnickChain, S>;
/// Element of the bar resolution.
pub type BarElement<S = Rational> = BimoduleElement<BarVertex, S>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error("invalid matching: {reason} (witness: {})", witness.join(" -> "))]
    InvalidMatching { reason: String, witness: Vec<String> },
    #[error("path tracking revisited {0} while it was still being evaluated")]
    CycleDetected(String),
    #[error("{0} is not an Anick chain")]
    NotAChain(String),
    #[error("the differential of the A_0 generator is the augmentation, not a bimodule element")]
    AugmentationDegree,
}

/// Basis tensor `[a_1|…|a_n]` of `B_n`; `n = 0` is the generator of `B_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarVertex {
    entries: Vec<Word>,
}

impl BarVertex {
    pub fn new(entries: Vec<Word>) -> Self {
        BarVertex { entries }
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        bracket(&self.entries, alphabet)
    }

    fn merged(&self, i: usize, w: Word) -> BarVertex {
        let mut e = Vec::with_capacity(self.entries.len() - 1);
        e.extend_from_slice(&self.entries[..i]);
        e.push(w);
        e.extend_from_slice(&self.entries[i + 2..]);
        BarVertex { entries: e }
    }

    fn split(&self, i: usize, at: usize) -> BarVertex {
        let (a, b) = self.entries[i].split_at(at);
        let mut e = Vec::with_capacity(self.entries.len() + 1);
        e.extend_from_slice(&self.entries[..i]);
        e.push(a);
        e.push(b);
        e.extend_from_slice(&self.entries[i + 1..]);
        BarVertex { entries: e }
    }
}

impl From<&AnickChain> for BarVertex {
    fn from(c: &AnickChain) -> Self {
        BarVertex { entries: c.entries().to_vec() }
    }
}

impl Ord for BarVertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.len().cmp(&other.entries.len()).then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for BarVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BasisLabel for BarVertex {
    fn label(&self, alphabet: &Alphabet) -> String {
        self.display(alphabet)
    }
}

/// Status of a vertex under the matching.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchStatus<S = Rational> {
    Critical,
    /// Matched with the lower-dimensional `partner`; `coef` is the weight of
    /// the matched edge `self → partner`. Paths die here.
    LowerOf { partner: BarVertex, coef: S },
    /// Matched with the higher-dimensional `partner`; `coef` is the weight of
    /// the matched edge `partner → self`, which path tracking inverts.
    UpperOf { partner: BarVertex, coef: S },
}

/// The bar differential with inner products reduced to normal form.
/// `d[a] = a[] − []a`; the `B_0` generator maps to zero here (its image is the
/// augmentation, outside the bimodule complex).
pub fn bar_differential<S: Scalar>(sys: &RewriteSystem<S>, v: &BarVertex) -> BarElement<S> {
    let n = v.dim();
    let mut out = BarElement::zero();
    if n == 0 {
        return out;
    }
    let e = &v.entries;
    out.add_term(S::one(), e[0].clone(), BarVertex { entries: e[1..].to_vec() }, Word::empty());
    for i in 0..n - 1 {
        let sign = if (i + 1) % 2 == 0 { S::one() } else { -S::one() };
        let product = sys.multiply_words(&e[i], &e[i + 1]);
        for (m, c) in product.iter() {
            out.add_term(sign.clone() * c.clone(), Word::empty(), v.merged(i, m.clone()), Word::empty());
        }
    }
    let sign = if n.is_multiple_of(2) { S::one() } else { -S::one() };
    out.add_term(sign, Word::empty(), BarVertex { entries: e[..n - 1].to_vec() }, e[n - 1].clone());
    out
}

/// Length of the longest prefix of `v` that is an Anick chain.
pub fn chain_prefix_len<S: Scalar>(sys: &RewriteSystem<S>, v: &BarVertex) -> usize {
    let e = &v.entries;
    if e.is_empty() || e[0].len() != 1 {
        return 0;
    }
    let mut k = 1;
    while k < e.len() && extends(sys, &e[k - 1], &e[k]) {
        k += 1;
    }
    k
}

/// Weight of the edge `from → (1, to, 1)`.
fn edge_weight<S: Scalar>(sys: &RewriteSystem<S>, from: &BarVertex, to: &BarVertex) -> S {
    bar_differential(sys, from).coefficient(&Word::empty(), to, &Word::empty())
}

/// The matching rule described in the module docs.
pub fn match_vertex<S: Scalar>(sys: &RewriteSystem<S>, v: &BarVertex) -> MatchStatus<S> {
    let n = v.dim();
    let k = chain_prefix_len(sys, v);
    if k == n {
        return MatchStatus::Critical;
    }
    let next = &v.entries[k];
    let split_at = if k == 0 {
        Some(1)
    } else {
        let tail = &v.entries[k - 1];
        (1..next.len()).find(|&j| extends(sys, tail, &next.slice(0, j)))
    };
    match split_at {
        Some(j) => {
            let partner = v.split(k, j);
            let coef = edge_weight(sys, &partner, v);
            MatchStatus::UpperOf { partner, coef }
        }
        None => {
            let partner = v.merged(k - 1, v.entries[k - 1].concat(next));
            let coef = edge_weight(sys, v, &partner);
            MatchStatus::LowerOf { partner, coef }
        }
    }
}

/// Path tracking with a shared memo of per-vertex values.
///
/// `value(v)` is `v` for a critical vertex, zero for a vertex matched
/// downward, and for `v` matched with an upper partner `u` along an edge of
/// weight `c` it is `−c⁻¹ Σ c'·l·value(w)·r` over the terms `c'·l[w]r` of
/// `d(u)` other than the matched one.
pub struct MorseEngine<'p, S = Rational> {
    pres: &'p Presentation<S>,
    memo: Option<DashMap<BarVertex, Arc<ChainElement<S>>>>,
}

impl<'p, S: Scalar> MorseEngine<'p, S> {
    pub fn new(pres: &'p Presentation<S>) -> Self {
        MorseEngine { pres, memo: Some(DashMap::new()) }
    }

    /// Same results, recomputed from scratch on every call.
    pub fn without_memo(pres: &'p Presentation<S>) -> Self {
        MorseEngine { pres, memo: None }
    }

    pub fn presentation(&self) -> &'p Presentation<S> {
        self.pres
    }

    pub fn memo_len(&self) -> usize {
        self.memo.as_ref().map_or(0, DashMap::len)
    }

    pub fn bar_differential(&self, v: &BarVertex) -> BarElement<S> {
        bar_differential(self.pres, v)
    }

    pub fn match_vertex(&self, v: &BarVertex) -> MatchStatus<S> {
        match_vertex(self.pres, v)
    }

    /// Anick differential of a chain of dimension ≥ 1.
    pub fn anick_differential(&self, chain: &AnickChain) -> Result<ChainElement<S>, MorseError> {
        if chain.dim() == 0 {
            return Err(MorseError::AugmentationDegree);
        }
        if is_chain(self.pres, chain.entries()).is_none() {
            return Err(MorseError::NotAChain(chain.display(self.pres.alphabet())));
        }
        let d = self.bar_differential(&BarVertex::from(chain));
        let mut stack = HashSet::new();
        d.expand(self.pres, |w| self.value(w, &mut stack).map(|x| (*x).clone()))
    }

    /// Image of a bar vertex under the comparison map onto the Anick complex.
    pub fn vertex_value(&self, v: &BarVertex) -> Result<Arc<ChainElement<S>>, MorseError> {
        self.value(v, &mut HashSet::new())
    }

    fn value(&self, v: &BarVertex, stack: &mut HashSet<BarVertex>) -> Result<Arc<ChainElement<S>>, MorseError> {
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.get(v) {
                return Ok(Arc::clone(hit.value()));
            }
        }
        let result = match match_vertex(self.pres, v) {
            MatchStatus::Critical => {
                ChainElement::basis(AnickChain::from_entries_unchecked(v.entries.clone()))
            }
            MatchStatus::LowerOf { .. } => ChainElement::zero(),
            MatchStatus::UpperOf { partner, coef } => {
                if coef.is_zero() {
                    return Err(MorseError::InvalidMatching {
                        reason: "matched edge has zero weight".into(),
                        witness: vec![self.show(&partner), self.show(v)],
                    });
                }
                if !stack.insert(v.clone()) {
                    return Err(MorseError::CycleDetected(self.show(v)));
                }
                let du = self.bar_differential(&partner);
                let mut acc = ChainElement::zero();
                for (l, w, r, c) in du.iter() {
                    if w == v && l.is_empty() && r.is_empty() {
                        continue;
                    }
                    let image = self.value(w, stack)?;
                    acc.add_sandwiched(self.pres, c, l, &image, r);
                }
                stack.remove(v);
                acc.scaled(&(-S::one() / coef))
            }
        };
        let result = Arc::new(result);
        if let Some(memo) = &self.memo {
            memo.insert(v.clone(), Arc::clone(&result));
        }
        Ok(result)
    }

    fn show(&self, v: &BarVertex) -> String {
        v.display(self.pres.alphabet())
    }
}

/// Summary of a successful matching validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingReport {
    pub max_dim: usize,
    pub vertices: usize,
    pub critical: usize,
    /// Vertices matched with a higher partner (path continues through it).
    pub matched_upward: usize,
    /// Vertices matched with a lower partner (paths end there).
    pub matched_downward: usize,
    pub tracking_edges: usize,
}

/// Check the matching on the part of the bar graph reachable by path
/// tracking from all chains of dimension `1..=max_dim`: the pairing is an
/// involution, matched weights are invertible, critical vertices are chains,
/// and the graph of tracking steps is acyclic.
pub fn validate_matching<S: Scalar>(pres: &Presentation<S>, max_dim: usize) -> Result<MatchingReport, MorseError> {
    let show = |v: &BarVertex| v.display(pres.alphabet());
    let invalid = |reason: &str, witness: Vec<String>| MorseError::InvalidMatching { reason: reason.into(), witness };

    let mut queue = VecDeque::new();
    for dim in 1..=max_dim {
        for c in enumerate_chains(pres, dim - 1) {
            let v = BarVertex::from(&c);
            if !matches!(match_vertex(pres, &v), MatchStatus::Critical) {
                return Err(invalid("chain is not critical", vec![show(&v)]));
            }
            for (_, w, _, _) in bar_differential(pres, &v).iter() {
                queue.push_back(w.clone());
            }
        }
    }

    let mut seen: HashSet<BarVertex> = HashSet::new();
    let mut edges: HashMap<BarVertex, Vec<BarVertex>> = HashMap::new();
    let mut report = MatchingReport {
        max_dim,
        vertices: 0,
        critical: 0,
        matched_upward: 0,
        matched_downward: 0,
        tracking_edges: 0,
    };
    while let Some(v) = queue.pop_front() {
        if !seen.insert(v.clone()) {
            continue;
        }
        report.vertices += 1;
        match match_vertex(pres, &v) {
            MatchStatus::Critical => {
                if v.dim() > 0 && is_chain(pres, v.entries()).is_none() {
                    return Err(invalid("critical vertex is not an Anick chain", vec![show(&v)]));
                }
                report.critical += 1;
            }
            MatchStatus::LowerOf { partner, coef } => {
                check_pair(pres, &v, &partner, &coef, true).map_err(|r| invalid(&r, vec![show(&v), show(&partner)]))?;
                report.matched_downward += 1;
            }
            MatchStatus::UpperOf { partner, coef } => {
                check_pair(pres, &v, &partner, &coef, false).map_err(|r| invalid(&r, vec![show(&partner), show(&v)]))?;
                report.matched_upward += 1;
                let targets = edges.entry(v.clone()).or_default();
                for (l, w, r, _) in bar_differential(pres, &partner).iter() {
                    if w == &v && l.is_empty() && r.is_empty() {
                        continue;
                    }
                    targets.push(w.clone());
                    queue.push_back(w.clone());
                }
                report.tracking_edges += targets.len();
            }
        }
    }

    if let Some(cycle) = find_cycle(&edges) {
        return Err(invalid("path tracking graph has a cycle", cycle.iter().map(show).collect()));
    }
    Ok(report)
}

fn check_pair<S: Scalar>(
    pres: &Presentation<S>,
    v: &BarVertex,
    partner: &BarVertex,
    coef: &S,
    partner_is_lower: bool,
) -> Result<(), String> {
    if coef.is_zero() {
        return Err("matched edge weight is not invertible".into());
    }
    if partner.entries.iter().any(|w| w.is_empty() || !pres.is_normal(w)) {
        return Err("partner has a non-normal entry".into());
    }
    let back = match_vertex(pres, partner);
    let ok = match (&back, partner_is_lower) {
        (MatchStatus::UpperOf { partner: p, coef: c }, true) => p == v && c == coef,
        (MatchStatus::LowerOf { partner: p, coef: c }, false) => p == v && c == coef,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err("matching is not an involution".into())
    }
}

/// A directed cycle, if any, by iterative three-colour DFS.
fn find_cycle(edges: &HashMap<BarVertex, Vec<BarVertex>>) -> Option<Vec<BarVertex>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        Grey,
        Black,
    }
    let mut colour: HashMap<&BarVertex, Colour> = HashMap::new();
    let mut roots: Vec<&BarVertex> = edges.keys().collect();
    roots.sort();
    for root in roots {
        if colour.contains_key(root) {
            continue;
        }
        let mut path: Vec<(&BarVertex, usize)> = vec![(root, 0)];
        colour.insert(root, Colour::Grey);
        while let Some((v, i)) = path.last_mut() {
            let succ = edges.get(*v).map(Vec::as_slice).unwrap_or(&[]);
            if *i < succ.len() {
                let w = &succ[*i];
                *i += 1;
                match colour.get(w) {
                    Some(Colour::Grey) => {
                        let start = path.iter().position(|(u, _)| *u == w).expect("grey vertex on path");
                        return Some(path[start..].iter().map(|(u, _)| (*u).clone()).collect());
                    }
                    Some(Colour::Black) => {}
                    None => {
                        colour.insert(w, Colour::Grey);
                        path.push((w, 0));
                    }
                }
            } else {
                colour.insert(*v, Colour::Black);
                path.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{heisenberg_presentation, w1_presentation};
    use crate::Rational;

    fn one() -> Rational {
        Rational::from_integer(1.into())
    }

    fn vertex(p: &Presentation, s: &str) -> BarVertex {
        BarVertex::new(crate::chains::parse_bracket(s, p.alphabet()).unwrap())
    }

    fn chain(p: &Presentation, s: &str) -> AnickChain {
        AnickChain::parse(s, p.alphabet()).unwrap()
    }

    fn bar(p: &Presentation, s: &str) -> BarElement {
        BarElement::parse(s, p.alphabet(), |b| Some(vertex(p, b))).unwrap()
    }

    fn anick(p: &Presentation, s: &str) -> ChainElement {
        ChainElement::parse(s, p.alphabet(), |b| Some(chain(p, b))).unwrap()
    }

    fn dual() -> Presentation {
        Presentation::from_strs(&["x"], &[("xx", &[])]).unwrap()
    }

    #[test]
    fn bar_differential_examples() {
        let w1 = w1_presentation();
        let d = bar_differential(&w1, &vertex(&w1, "[p|q]"));
        assert_eq!(d, bar(&w1, "p[q] - [pq] + [p]q"));
        let d = bar_differential(&w1, &vertex(&w1, "[q|p]"));
        assert_eq!(d, bar(&w1, "q[p] - [pq] - [e] + [q]p"));

        let dual = dual();
        let d = bar_differential(&dual, &vertex(&dual, "[x|x]"));
        assert_eq!(d, bar(&dual, "x[x] + [x]x"));
    }

    #[test]
    fn d1_is_left_minus_right() {
        let w1 = w1_presentation();
        let d = bar_differential(&w1, &vertex(&w1, "[q]"));
        assert_eq!(d, bar(&w1, "q[] - []q"));
    }

    #[test]
    fn matching_examples() {
        let w1 = w1_presentation();
        assert_eq!(
            match_vertex(&w1, &vertex(&w1, "[p|q|e]")),
            MatchStatus::LowerOf { partner: vertex(&w1, "[pq|e]"), coef: -one() }
        );
        assert_eq!(match_vertex(&w1, &vertex(&w1, "[q|p|e]")), MatchStatus::Critical);
        assert_eq!(
            match_vertex(&w1, &vertex(&w1, "[pq|e]")),
            MatchStatus::UpperOf { partner: vertex(&w1, "[p|q|e]"), coef: -one() }
        );
        assert_eq!(
            match_vertex(&w1, &vertex(&w1, "[p|q]")),
            MatchStatus::LowerOf { partner: vertex(&w1, "[pq]"), coef: -one() }
        );
        assert!(matches!(match_vertex(&w1, &vertex(&w1, "[e|p|q]")), MatchStatus::LowerOf { .. }));
    }

    #[test]
    fn heisenberg_delta3() {
        let h = heisenberg_presentation();
        let engine = MorseEngine::new(&h);
        let d = engine.anick_differential(&chain(&h, "[x|y|z]")).unwrap();
        assert_eq!(d, anick(&h, "x[y|z] - [y|z]x + [x|z]y - y[x|z] + z[x|y] - [x|y]z"));
    }

    #[test]
    fn w1_delta3_qpe() {
        let w1 = w1_presentation();
        let engine = MorseEngine::new(&w1);
        let d = engine.anick_differential(&chain(&w1, "[q|p|e]")).unwrap();
        assert_eq!(d, anick(&w1, "q[p|e] - p[q|e] - [e|e] + [q|p] - [q|p]e"));
        let d = engine.anick_differential(&chain(&w1, "[q|p|e|e]")).unwrap();
        assert_eq!(d, anick(&w1, "q[p|e|e] - p[q|e|e] - [e|e|e] + [q|p|e]e"));
    }

    #[test]
    fn memo_does_not_change_results() {
        let w1 = w1_presentation();
        let with = MorseEngine::new(&w1);
        let without = MorseEngine::without_memo(&w1);
        for c in enumerate_chains(&w1, 3) {
            assert_eq!(with.anick_differential(&c).unwrap(), without.anick_differential(&c).unwrap());
        }
        assert!(with.memo_len() > 0);
    }

    #[test]
    fn validation_passes_on_corpus() {
        assert!(validate_matching(&w1_presentation(), 4).is_ok());
        assert!(validate_matching(&heisenberg_presentation(), 3).is_ok());
        assert!(validate_matching(&dual(), 6).is_ok());
    }

    #[test]
    fn non_chains_rejected() {
        let w1 = w1_presentation();
        let engine = MorseEngine::new(&w1);
        assert!(matches!(
            engine.anick_differential(&AnickChain::from_entries_unchecked(vec![w1.word("p"), w1.word("q")])),
            Err(MorseError::NotAChain(_))
        ));
        assert_eq!(engine.anick_differential(&AnickChain::unit()), Err(MorseError::AugmentationDegree));
    }

    #[test]
    fn cycle_finder() {
        let a = BarVertex::new(vec![Word::empty()]);
        let b = BarVertex::new(vec![]);
        let mut edges = HashMap::new();
        edges.insert(a.clone(), vec![b.clone()]);
        assert!(find_cycle(&edges).is_none());
        edges.insert(b.clone(), vec![a.clone()]);
        assert_eq!(find_cycle(&edges).map(|c| c.len()), Some(2));
    }
}

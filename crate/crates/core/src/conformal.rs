//! The conformal algebra `Cend_k` as `k×k` matrices over `𝕜[∂, x]`, its
//! positive coefficient algebra `𝒜₊`, and the identification
//! `𝒜₊(Cend_k) ≅ M_k(W₁)` checked on finite windows.
//!
//! The λ-product is `f(∂, x) ∘_λ g(∂, x) = f(−λ, x) g(∂+λ, x+λ)` extended to
//! matrices by the row-column rule, and `a ∘_s b` is `s!` times its
//! `λ^s` coefficient. In `𝒜₊` the symbol `a(n)` stands for `t^n ⊗ a`; since
//! `∂` acts on `t^n` as `−d/dt`, `(∂a)(n) = −n·a(n−1)`, so every element has
//! a unique expansion in the `∂`-free basis `x^m E_ij (n)`, written
//! `x^m t^n E_ij`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freealg::Presentation;
use crate::Rational;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConformalError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("term {term} has negative index {index} and leaves the positive part")]
    LeftPositivePart { term: String, index: i64 },
    #[error("coefficient algebra and W1 disagree on {left} * {right}: {coefficient} vs {weyl}")]
    IsoFailure { left: String, right: String, coefficient: String, weyl: String },
    #[error("associativity fails on ({a})({b})({c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("bimodule compatibility fails on {0}")]
    NotCompatible(String),
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn binom(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    (0..k).fold(Rational::one(), |acc, i| acc * int((n - i) as i64) / int((i + 1) as i64))
}

fn factorial(n: u64) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// Polynomial in `∂, x`, keyed by `(∂-exponent, x-exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DxPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl DxPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Rational::one())
    }

    /// `c ∂^d x^m`
    pub fn monomial(d: u32, m: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(d, m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(d, m), c)| (d, m, c))
    }

    pub fn add_term(&mut self, d: u32, m: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((d, m)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(d, m));
        }
    }

    pub fn add_scaled(&mut self, other: &DxPoly, c: &Rational) {
        for (d, m, v) in other.iter() {
            self.add_term(d, m, v * c);
        }
    }

    /// `∂^s · self`
    pub fn mul_partial(&self, s: u32) -> Self {
        DxPoly { terms: self.terms.iter().map(|(&(d, m), c)| ((d + s, m), c.clone())).collect() }
    }
}

impl fmt::Display for DxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (d, m, c)) in self.iter().enumerate() {
            let mono = [power("∂", d), power("x", m)].concat();
            write!(f, "{}", signed_term(i == 0, c, &mono))?;
        }
        Ok(())
    }
}

fn power(v: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    }
}

fn signed_term(first: bool, c: &Rational, mono: &str) -> String {
    let sign = match (first, c.is_negative()) {
        (true, false) => "",
        (true, true) => "-",
        (false, false) => " + ",
        (false, true) => " - ",
    };
    let mag = c.abs();
    match (mono.is_empty(), mag.is_one()) {
        (true, _) => format!("{sign}{mag}"),
        (false, true) => format!("{sign}{mono}"),
        (false, false) => format!("{sign}{mag}{mono}"),
    }
}

/// An element of `Cend_k`: a `k×k` matrix over `𝕜[∂, x]`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalElement {
    k: usize,
    entries: Vec<DxPoly>,
}

impl ConformalElement {
    pub fn zero(k: usize) -> Self {
        assert!(k >= 1, "rank must be positive");
        ConformalElement { k, entries: vec![DxPoly::zero(); k * k] }
    }

    /// Rank one element from a polynomial.
    pub fn scalar(p: DxPoly) -> Self {
        ConformalElement { k: 1, entries: vec![p] }
    }

    /// `c ∂^d x^m E_ij`
    pub fn monomial(k: usize, i: usize, j: usize, d: u32, m: u32, c: Rational) -> Self {
        let mut out = Self::zero(k);
        out.entries[i * k + j].add_term(d, m, c);
        out
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &DxPoly {
        &self.entries[i * self.k + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(DxPoly::is_zero)
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        assert_eq!(self.k, other.k, "rank mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_scaled(b, c);
        }
    }

    /// `∂^s · self`, the `H`-module action.
    pub fn mul_partial(&self, s: u32) -> Self {
        ConformalElement { k: self.k, entries: self.entries.iter().map(|p| p.mul_partial(s)).collect() }
    }
}

impl fmt::Display for ConformalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            return write!(f, "{}", self.entries[0]);
        }
        let rows: Vec<String> = (0..self.k)
            .map(|i| (0..self.k).map(|j| self.entry(i, j).to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Polynomial in `∂, x, λ`, keyed by `(∂, x, λ)` exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LambdaPoly {
    terms: BTreeMap<(u32, u32, u32), Rational>,
}

impl LambdaPoly {
    fn add_term(&mut self, key: (u32, u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32, u32), &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn lambda_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.2).max()
    }

    /// Coefficient of `λ^s` as a polynomial in `∂, x`.
    pub fn coefficient(&self, s: u32) -> DxPoly {
        let mut out = DxPoly::zero();
        for ((d, m, l), c) in self.iter() {
            if l == s {
                out.add_term(d, m, c.clone());
            }
        }
        out
    }
}

/// `k×k` matrix over `𝕜[∂, x, λ]`, the value of a λ-product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaMatrix {
    k: usize,
    entries: Vec<LambdaPoly>,
}

impl LambdaMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &LambdaPoly {
        &self.entries[i * self.k + j]
    }

    pub fn lambda_degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(LambdaPoly::lambda_degree).max()
    }

    pub fn coefficient(&self, s: u32) -> ConformalElement {
        ConformalElement { k: self.k, entries: self.entries.iter().map(|p| p.coefficient(s)).collect() }
    }
}

/// `∂^a x^b ∘_λ ∂^c x^d = (−λ)^a x^b (∂+λ)^c (x+λ)^d`, accumulated into `out`.
fn monomial_lambda(out: &mut LambdaPoly, (a, b): (u32, u32), (c, d): (u32, u32), coef: &Rational) {
    let sign = if a % 2 == 0 { coef.clone() } else { -coef.clone() };
    for i in 0..=c {
        for j in 0..=d {
            let k = binom(c.into(), i.into()) * binom(d.into(), j.into());
            out.add_term((c - i, b + d - j, a + i + j), sign.clone() * k);
        }
    }
}

pub fn lambda_product(f: &ConformalElement, g: &ConformalElement) -> Result<LambdaMatrix, ConformalError> {
    if f.k != g.k {
        return Err(ConformalError::RankMismatch(f.k, g.k));
    }
    let k = f.k;
    let mut entries = vec![LambdaPoly::default(); k * k];
    for i in 0..k {
        for l in 0..k {
            for j in 0..k {
                for (a, b, x) in f.entry(i, l).iter() {
                    for (c, d, y) in g.entry(l, j).iter() {
                        monomial_lambda(&mut entries[i * k + j], (a, b), (c, d), &(x * y));
                    }
                }
            }
        }
    }
    Ok(LambdaMatrix { k, entries })
}

/// `f ∘_s g`. Panics on rank mismatch.
pub fn s_product(f: &ConformalElement, g: &ConformalElement, s: u32) -> ConformalElement {
    let lp = lambda_product(f, g).expect("s_product needs equal ranks");
    let mut out = ConformalElement::zero(f.k);
    out.add_scaled(&lp.coefficient(s), &factorial(s.into()));
    out
}

/// Element of `𝒜₊(Cend_k)` in the basis `x^m t^n E_ij`, keyed `(i, j, m, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffElement {
    k: usize,
    terms: BTreeMap<(usize, usize, u32, u64), Rational>,
}

impl CoeffElement {
    pub fn zero(k: usize) -> Self {
        CoeffElement { k, terms: BTreeMap::new() }
    }

    /// `x^m t^n E_ij`
    pub fn basis(k: usize, i: usize, j: usize, m: u32, n: u64) -> Self {
        let mut out = Self::zero(k);
        out.add_term((i, j, m, n), Rational::one());
        out
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, u32, u64), &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, key: (usize, usize, u32, u64), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (key, v) in other.iter() {
            self.add_term(key, v * c);
        }
    }

    /// `a(n)` rewritten in the `∂`-free basis through `(∂a)(n) = −n·a(n−1)`.
    pub fn from_conformal(a: &ConformalElement, n: i64) -> Result<Self, ConformalError> {
        let mut out = Self::zero(a.k);
        for i in 0..a.k {
            for j in 0..a.k {
                for (d, m, c) in a.entry(i, j).iter() {
                    // (∂^d b)(n) = (−1)^d n(n−1)…(n−d+1) b(n−d)
                    let falling = (0..i64::from(d)).fold(Rational::one(), |acc, r| acc * int(n - r));
                    let coef = if d % 2 == 0 { falling } else { -falling } * c;
                    if coef.is_zero() {
                        continue;
                    }
                    let index = n - i64::from(d);
                    if index < 0 {
                        return Err(ConformalError::LeftPositivePart {
                            term: format!("{}", ConformalElement::monomial(a.k, i, j, d, m, c.clone())),
                            index,
                        });
                    }
                    out.add_term((i, j, m, index as u64), coef);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ConformalError> {
        if self.k != other.k {
            return Err(ConformalError::RankMismatch(self.k, other.k));
        }
        let mut out = Self::zero(self.k);
        for ((i, j, m, n), x) in self.iter() {
            for ((l, r, m2, n2), y) in other.iter() {
                if j != l {
                    continue;
                }
                let a = ConformalElement::monomial(self.k, i, j, 0, m, Rational::one());
                let b = ConformalElement::monomial(self.k, l, r, 0, m2, Rational::one());
                out.add_scaled(&coeff_product(&a, n, &b, n2)?, &(x * y));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for CoeffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, ((i, j, m, n), c)) in self.iter().enumerate() {
            let mut mono = [power("x", m), power("t", n as u32)].concat();
            if self.k > 1 {
                mono.push_str(&format!("E{}{}", i + 1, j + 1));
            }
            write!(f, "{}", signed_term(idx == 0, c, &mono))?;
        }
        Ok(())
    }
}

/// `a(n) b(m) = Σ_s C(n, s) (a ∘_s b)(n+m−s)`.
pub fn coeff_product(a: &ConformalElement, n: u64, b: &ConformalElement, m: u64) -> Result<CoeffElement, ConformalError> {
    let lp = lambda_product(a, b)?;
    let mut out = CoeffElement::zero(a.k);
    let Some(top) = lp.lambda_degree() else { return Ok(out) };
    for s in 0..=top.min(n as u32) {
        let mut prod = ConformalElement::zero(a.k);
        prod.add_scaled(&lp.coefficient(s), &factorial(s.into()));
        let term = CoeffElement::from_conformal(&prod, (n + m) as i64 - i64::from(s))?;
        out.add_scaled(&term, &binom(n, s.into()));
    }
    Ok(out)
}

/// `x^a t^b` in `W₁` under `x ↦ p`, `t ↦ q`: the normal word `p^a q^b`
/// (`e` for `a = b = 0`).
fn weyl_word(a: u32, b: u32) -> String {
    if a == 0 && b == 0 {
        "e".into()
    } else {
        "p".repeat(a as usize) + &"q".repeat(b as usize)
    }
}

/// Result of [`weyl_iso_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsoCertificate {
    pub rank: usize,
    pub window: u32,
    pub monomials: usize,
    pub pairs_checked: usize,
    /// `t·x` computed in the coefficient algebra.
    pub tx: String,
}

impl fmt::Display for IsoCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t*x = {}   (W1: qp = pq + e)", self.tx)?;
        writeln!(
            f,
            "A+(Cend_{}) vs M_{}(W1): {} basis monomials with x-degree + t-degree <= {}, {} products agree",
            self.rank, self.rank, self.monomials, self.window, self.pairs_checked
        )
    }
}

/// Compare products of `x^a t^b E_ij` (`a + b ≤ window`) with `M_k(W₁)`.
pub fn weyl_iso_check(w1: &Presentation<Rational>, window: u32, k: usize) -> Result<IsoCertificate, ConformalError> {
    let mut basis = Vec::new();
    for i in 0..k {
        for j in 0..k {
            for a in 0..=window {
                for b in 0..=window - a {
                    basis.push((i, j, a, b));
                }
            }
        }
    }
    let to_coeff = |i: usize, j: usize, w1_poly: &crate::freealg::FreePoly<Rational>| {
        let mut out = CoeffElement::zero(k);
        let (p, q, e) = (w1.letter("p"), w1.letter("q"), w1.letter("e"));
        for (w, c) in w1_poly.iter() {
            let letters = w.letters();
            let a = letters.iter().filter(|&&l| Some(l) == p).count() as u32;
            let b = letters.iter().filter(|&&l| Some(l) == q).count() as u32;
            debug_assert!(letters.iter().all(|&l| Some(l) != e) || letters.len() == 1);
            out.add_term((i, j, a, u64::from(b)), c.clone());
        }
        out
    };
    let mut pairs = 0;
    for &(i, j, a, b) in &basis {
        let left = CoeffElement::basis(k, i, j, a, b.into());
        for &(l, r, c, d) in &basis {
            let right = CoeffElement::basis(k, l, r, c, d.into());
            let got = left.mul(&right)?;
            let want = if j == l {
                to_coeff(i, r, &w1.multiply_words(&w1.word(&weyl_word(a, b)), &w1.word(&weyl_word(c, d))))
            } else {
                CoeffElement::zero(k)
            };
            if got != want {
                return Err(ConformalError::IsoFailure {
                    left: left.to_string(),
                    right: right.to_string(),
                    coefficient: got.to_string(),
                    weyl: want.to_string(),
                });
            }
            pairs += 1;
        }
    }
    let t = CoeffElement::basis(1, 0, 0, 0, 1);
    let x = CoeffElement::basis(1, 0, 0, 1, 0);
    let tx = t.mul(&x)?.to_string();
    Ok(IsoCertificate { rank: k, window, monomials: basis.len(), pairs_checked: pairs, tx })
}

/// Check `(uv)w = u(vw)` on all triples of `x^a t^b` in rank one whose
/// degrees add up to at most `max_total`. Returns the number of triples.
pub fn check_associativity(max_total: u32) -> Result<usize, ConformalError> {
    let monos: Vec<(u32, u32)> = (0..=max_total).flat_map(|a| (0..=max_total - a).map(move |b| (a, b))).collect();
    let el = |(a, b): (u32, u32)| CoeffElement::basis(1, 0, 0, a, b.into());
    let mut count = 0;
    for &u in &monos {
        for &v in &monos {
            for &w in &monos {
                if u.0 + u.1 + v.0 + v.1 + w.0 + w.1 > max_total {
                    continue;
                }
                let (u, v, w) = (el(u), el(v), el(w));
                if u.mul(&v)?.mul(&w)? != u.mul(&v.mul(&w)?)? {
                    return Err(ConformalError::NotAssociative { a: u.to_string(), b: v.to_string(), c: w.to_string() });
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `a(n)·u = a ∘_n u`.
pub fn left_action(a: &ConformalElement, n: u64, u: &ConformalElement) -> ConformalElement {
    s_product(a, u, n as u32)
}

/// `u·a(n) = Σ_s (−1)^{n+s} (1/s!) ∂^s (u ∘_{n+s} a)`.
pub fn right_action(u: &ConformalElement, a: &ConformalElement, n: u64) -> ConformalElement {
    let lp = lambda_product(u, a).expect("right_action needs equal ranks");
    let mut out = ConformalElement::zero(u.k);
    let Some(top) = lp.lambda_degree() else { return out };
    let n = n as u32;
    for s in 0..=top.saturating_sub(n) {
        let mut circ = ConformalElement::zero(u.k);
        circ.add_scaled(&lp.coefficient(n + s), &factorial((n + s).into()));
        let sign = if (n + s).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        out.add_scaled(&circ.mul_partial(s), &(sign / factorial(s.into())));
    }
    out
}

/// `(a(n)·u, u·a(n))` in the regular bimodule `Cend_k`.
pub fn coeff_actions(u: &ConformalElement, a: &ConformalElement, n: u64) -> (ConformalElement, ConformalElement) {
    (left_action(a, n, u), right_action(u, a, n))
}

fn act_left(c: &CoeffElement, u: &ConformalElement) -> ConformalElement {
    let mut out = ConformalElement::zero(u.k);
    for ((i, j, m, n), x) in c.iter() {
        out.add_scaled(&left_action(&ConformalElement::monomial(c.k, i, j, 0, m, Rational::one()), n, u), x);
    }
    out
}

fn act_right(u: &ConformalElement, c: &CoeffElement) -> ConformalElement {
    let mut out = ConformalElement::zero(u.k);
    for ((i, j, m, n), x) in c.iter() {
        out.add_scaled(&right_action(u, &ConformalElement::monomial(c.k, i, j, 0, m, Rational::one()), n), x);
    }
    out
}

/// Rank-one monomials `∂^d x^m` with `d + m ≤ deg`.
fn dx_monomials(deg: u32) -> Vec<ConformalElement> {
    let mut out = Vec::new();
    for d in 0..=deg {
        for m in 0..=deg - d {
            out.push(ConformalElement::monomial(1, 0, 0, d, m, Rational::one()));
        }
    }
    out
}

/// On `u = ∂^d x^m` and `a, b = x^i` with all degrees and indices up to
/// `window`, check `(a(n)·u)·b(m) = a(n)·(u·b(m))` together with the left and
/// right module laws. Returns the number of instances checked.
pub fn check_bimodule_compatibility(window: u32) -> Result<usize, ConformalError> {
    let us = dx_monomials(window);
    let gens: Vec<(u32, u64)> = (0..=window).flat_map(|m| (0..=u64::from(window)).map(move |n| (m, n))).collect();
    let el = |m: u32| ConformalElement::monomial(1, 0, 0, 0, m, Rational::one());
    let mut count = 0;
    for u in &us {
        for &(ma, na) in &gens {
            for &(mb, nb) in &gens {
                let (a, b) = (el(ma), el(mb));
                let ab = CoeffElement::basis(1, 0, 0, ma, na).mul(&CoeffElement::basis(1, 0, 0, mb, nb))?;
                let tag = |law: &str| format!("{law}: a = x^{ma}({na}), b = x^{mb}({nb}), u = {u}");
                if right_action(&left_action(&a, na, u), &b, nb) != left_action(&a, na, &right_action(u, &b, nb)) {
                    return Err(ConformalError::NotCompatible(tag("(a.u).b = a.(u.b)")));
                }
                if left_action(&a, na, &left_action(&b, nb, u)) != act_left(&ab, u) {
                    return Err(ConformalError::NotCompatible(tag("a.(b.u) = (ab).u")));
                }
                if right_action(&right_action(u, &a, na), &b, nb) != act_right(u, &ab) {
                    return Err(ConformalError::NotCompatible(tag("(u.a).b = u.(ab)")));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::w1_presentation;

    fn x_pow(m: u32) -> ConformalElement {
        ConformalElement::monomial(1, 0, 0, 0, m, Rational::one())
    }

    fn partial() -> ConformalElement {
        ConformalElement::monomial(1, 0, 0, 1, 0, Rational::one())
    }

    fn one() -> ConformalElement {
        x_pow(0)
    }

    #[test]
    fn lambda_products() {
        // x ∘_λ x = x² + λx
        let p = lambda_product(&x_pow(1), &x_pow(1)).unwrap();
        assert_eq!(p.entry(0, 0).iter().count(), 2);
        assert_eq!(p.coefficient(1), x_pow(1));
        assert_eq!(p.coefficient(0), x_pow(2));
        assert_eq!(lambda_product(&one(), &one()).unwrap().coefficient(0), one());
        // x ∘_λ ∂ = x∂ + λx
        let q = lambda_product(&x_pow(1), &partial()).unwrap();
        assert_eq!(q.coefficient(0), ConformalElement::monomial(1, 0, 0, 1, 1, Rational::one()));
        assert_eq!(q.coefficient(1), x_pow(1));
        let two = ConformalElement::zero(2);
        assert!(matches!(lambda_product(&one(), &two), Err(ConformalError::RankMismatch(1, 2))));
    }

    #[test]
    fn s_products() {
        assert_eq!(s_product(&one(), &x_pow(1), 0), x_pow(1));
        assert_eq!(s_product(&one(), &x_pow(1), 1), one());
        assert!(s_product(&x_pow(3), &x_pow(2), 3).is_zero());
        let mut two_x2 = ConformalElement::zero(1);
        two_x2.add_scaled(&x_pow(2), &int(2));
        assert_eq!(s_product(&x_pow(1), &x_pow(2), 1), two_x2);
    }

    #[test]
    fn lambda_is_sum_of_s_products() {
        let els: Vec<ConformalElement> = dx_monomials(3);
        for f in &els {
            for g in &els {
                let lp = lambda_product(f, g).unwrap();
                for s in 0..=lp.lambda_degree().unwrap_or(0) + 1 {
                    let mut back = ConformalElement::zero(1);
                    back.add_scaled(&s_product(f, g, s), &(Rational::one() / factorial(s.into())));
                    assert_eq!(back, lp.coefficient(s));
                }
            }
        }
    }

    #[test]
    fn coefficient_products() {
        let t = CoeffElement::basis(1, 0, 0, 0, 1);
        let x = CoeffElement::basis(1, 0, 0, 1, 0);
        let mut xt_plus_1 = CoeffElement::basis(1, 0, 0, 1, 1);
        xt_plus_1.add_term((0, 0, 0, 0), Rational::one());
        assert_eq!(t.mul(&x).unwrap(), xt_plus_1);
        assert_eq!(t.mul(&x).unwrap().to_string(), "1 + xt");
        assert_eq!(coeff_product(&one(), 2, &one(), 3).unwrap(), CoeffElement::basis(1, 0, 0, 0, 5));
        // x(n)x(m) = x²(n+m) + n·x(n+m−1)
        let got = coeff_product(&x_pow(1), 3, &x_pow(1), 2).unwrap();
        let mut want = CoeffElement::basis(1, 0, 0, 2, 5);
        want.add_term((0, 0, 1, 4), int(3));
        assert_eq!(got, want);
        // (∂x)(0) = 0·x(−1) vanishes, so no error
        let dx = ConformalElement::monomial(1, 0, 0, 1, 1, Rational::one());
        assert!(CoeffElement::from_conformal(&dx, 0).unwrap().is_zero());
        assert!(matches!(CoeffElement::from_conformal(&x_pow(1), -1), Err(ConformalError::LeftPositivePart { .. })));
    }

    #[test]
    fn isomorphism_windows() {
        let w1 = w1_presentation();
        let cert = weyl_iso_check(&w1, 6, 1).unwrap();
        assert_eq!(cert.monomials, 28);
        assert_eq!(cert.pairs_checked, 28 * 28);
        assert_eq!(cert.tx, "1 + xt");
        weyl_iso_check(&w1, 3, 2).unwrap();
    }

    #[test]
    fn associativity_window() {
        assert!(check_associativity(5).unwrap() > 0);
    }

    #[test]
    fn actions() {
        assert_eq!(coeff_actions(&x_pow(1), &one(), 0), (x_pow(1), x_pow(1)));
        let (l, r) = coeff_actions(&x_pow(1), &one(), 1);
        assert_eq!(l, one());
        assert!(r.is_zero());
        assert_eq!(coeff_actions(&one(), &one(), 0), (one(), one()));
        assert!(check_bimodule_compatibility(2).unwrap() > 0);
    }
}

//! Assembled Anick resolutions `… → A_2 → A_1 → A_0 → k`, the `δδ = 0`
//! check, and a JSON export keyed by the presentation hash.

use std::collections::BTreeMap;
use std::convert::Infallible;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bimodule::BimoduleElement;
use crate::chains::{enumerate_chains, AnickChain};
use crate::freealg::{Alphabet, Presentation, RewriteSystem};
use crate::morse::{ChainElement, MorseEngine, MorseError};
use crate::{Rational, Scalar};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ResolutionError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("delta_{degree} o delta_{} does not vanish on {chain}: residue {residue}", degree + 1)]
    CompositionNonzero { degree: usize, chain: String, residue: String },
    #[error("artifact was built for presentation {found}, expected {expected}")]
    StaleHash { expected: String, found: String },
    #[error("malformed resolution file: {0}")]
    Malformed(String),
}

/// `δ_n : A_n → A_{n−1}` on the basis `V^(n−1)` of `A_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionSlice<S = Rational> {
    degree: usize,
    basis: Vec<AnickChain>,
    differential: BTreeMap<AnickChain, ChainElement<S>>,
}

impl<S: Scalar> ResolutionSlice<S> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `V^(degree−1)` in the slice's basis order.
    pub fn basis(&self) -> &[AnickChain] {
        &self.basis
    }

    pub fn differential(&self, chain: &AnickChain) -> Option<&ChainElement<S>> {
        self.differential.get(chain)
    }

    /// `(chain, δ(chain))` in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&AnickChain, &ChainElement<S>)> {
        self.basis.iter().map(move |c| (c, &self.differential[c]))
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Slices for degrees `1..=max_degree`; `slices()[n−1]` holds `δ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolution<S = Rational> {
    hash: String,
    max_degree: usize,
    slices: Vec<ResolutionSlice<S>>,
}

impl<S: Scalar> Resolution<S> {
    pub fn presentation_hash(&self) -> &str {
        &self.hash
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn slices(&self) -> &[ResolutionSlice<S>] {
        &self.slices
    }

    /// The slice holding `δ_n`, for `1 ≤ n ≤ max_degree`.
    pub fn slice(&self, n: usize) -> Option<&ResolutionSlice<S>> {
        n.checked_sub(1).and_then(|i| self.slices.get(i))
    }

    /// Same differentials with every slice's basis listed in reverse.
    pub fn with_reversed_bases(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.slices {
            s.basis.reverse();
        }
        out
    }
}

/// Per-chain residues of `δ_n ∘ δ_{n+1}` (`degree` is `n`).
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport<S = Rational> {
    pub degree: usize,
    pub residues: Vec<(AnickChain, ChainElement<S>)>,
}

impl<S: Scalar> CompositionReport<S> {
    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|(_, r)| r.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &(AnickChain, ChainElement<S>)> {
        self.residues.iter().filter(|(_, r)| !r.is_zero())
    }
}

/// `δ_n ∘ δ_{n+1}` on every chain of `upper`.
pub fn check_composition<S: Scalar>(
    sys: &RewriteSystem<S>,
    upper: &ResolutionSlice<S>,
    lower: &ResolutionSlice<S>,
) -> CompositionReport<S> {
    debug_assert_eq!(upper.degree, lower.degree + 1);
    let residues = upper
        .iter()
        .map(|(c, d)| {
            let r: Result<ChainElement<S>, Infallible> =
                d.expand(sys, |v| Ok(lower.differential.get(v).cloned().unwrap_or_else(BimoduleElement::zero)));
            let Ok(r) = r;
            (c.clone(), r)
        })
        .collect();
    CompositionReport { degree: lower.degree, residues }
}

/// `ε ∘ δ_1`, where `ε(l ⊗ r) = ε(l)ε(r)` kills every nonempty word.
pub fn augmentation_residues<S: Scalar>(first: &ResolutionSlice<S>) -> Vec<(AnickChain, S)> {
    first
        .iter()
        .map(|(c, d)| {
            let s = d.iter().filter(|(l, _, r, _)| l.is_empty() && r.is_empty()).fold(S::zero(), |a, (_, _, _, k)| a + k.clone());
            (c.clone(), s)
        })
        .collect()
}

/// Build `δ_1, …, δ_N` and verify every composition.
pub fn build_resolution<S: Scalar>(pres: &Presentation<S>, max_degree: usize) -> Result<Resolution<S>, ResolutionError> {
    let engine = MorseEngine::new(pres);
    let mut slices: Vec<ResolutionSlice<S>> = Vec::with_capacity(max_degree);
    for n in 1..=max_degree {
        let basis = enumerate_chains(pres, n - 1);
        let images: Result<Vec<ChainElement<S>>, MorseError> =
            basis.par_iter().map(|c| engine.anick_differential(c)).collect();
        let differential = basis.iter().cloned().zip(images?).collect();
        let slice = ResolutionSlice { degree: n, basis, differential };
        if let Some(lower) = slices.last() {
            let report = check_composition(pres, &slice, lower);
            let failure = report.nonzero().next().map(|(c, r)| ResolutionError::CompositionNonzero {
                degree: n - 1,
                chain: c.display(pres.alphabet()),
                residue: r.display(pres.alphabet()),
            });
            if let Some(err) = failure {
                return Err(err);
            }
        } else if let Some((c, s)) = augmentation_residues(&slice).into_iter().find(|(_, s)| !s.is_zero()) {
            return Err(ResolutionError::CompositionNonzero {
                degree: 0,
                chain: c.display(pres.alphabet()),
                residue: s.to_string(),
            });
        }
        slices.push(slice);
    }
    Ok(Resolution { hash: pres.content_hash().to_string(), max_degree, slices })
}

/// On-disk form: one record per chain, each term as `{coef, left, chain, right}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionJson {
    pub presentation_hash: String,
    pub max_degree: usize,
    pub slices: Vec<SliceJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceJson {
    pub degree: usize,
    pub chains: Vec<ChainJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub chain: String,
    pub differential: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coef: String,
    pub left: String,
    pub chain: String,
    pub right: String,
}

impl<S: Scalar> Resolution<S> {
    pub fn to_json(&self, alphabet: &Alphabet) -> ResolutionJson {
        ResolutionJson {
            presentation_hash: self.hash.clone(),
            max_degree: self.max_degree,
            slices: self
                .slices
                .iter()
                .map(|s| SliceJson {
                    degree: s.degree,
                    chains: s
                        .iter()
                        .map(|(c, d)| ChainJson {
                            chain: c.display(alphabet),
                            differential: d
                                .iter()
                                .map(|(l, v, r, k)| TermRecord {
                                    coef: k.to_string(),
                                    left: alphabet.format_word(l),
                                    chain: v.display(alphabet),
                                    right: alphabet.format_word(r),
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self, alphabet: &Alphabet) -> String {
        serde_json::to_string_pretty(&self.to_json(alphabet)).expect("resolution serializes")
    }

    /// Load an export; the embedded hash must match `pres`.
    pub fn from_json(pres: &Presentation<S>, json: &ResolutionJson) -> Result<Self, ResolutionError> {
        if json.presentation_hash != pres.content_hash() {
            return Err(ResolutionError::StaleHash {
                expected: pres.content_hash().to_string(),
                found: json.presentation_hash.clone(),
            });
        }
        let a = pres.alphabet();
        let bad = |what: &str| ResolutionError::Malformed(what.to_string());
        let chain = |s: &str| AnickChain::parse(s, a).ok_or_else(|| bad(s));
        let word = |s: &str| a.parse_word(s).map_err(|e| bad(&e.to_string()));
        let mut slices = Vec::with_capacity(json.slices.len());
        for (i, s) in json.slices.iter().enumerate() {
            if s.degree != i + 1 {
                return Err(bad("slices out of order"));
            }
            let mut basis = Vec::with_capacity(s.chains.len());
            let mut differential = BTreeMap::new();
            for c in &s.chains {
                let key = chain(&c.chain)?;
                let mut d = ChainElement::zero();
                for t in &c.differential {
                    let k = S::parse_decimal(&t.coef).ok_or_else(|| bad(&t.coef))?;
                    d.add_term(k, word(&t.left)?, chain(&t.chain)?, word(&t.right)?);
                }
                basis.push(key.clone());
                differential.insert(key, d);
            }
            slices.push(ResolutionSlice { degree: s.degree, basis, differential });
        }
        if slices.len() != json.max_degree {
            return Err(bad("slice count differs from max_degree"));
        }
        Ok(Resolution { hash: json.presentation_hash.clone(), max_degree: json.max_degree, slices })
    }

    pub fn from_json_str(pres: &Presentation<S>, s: &str) -> Result<Self, ResolutionError> {
        let json: ResolutionJson = serde_json::from_str(s).map_err(|e| ResolutionError::Malformed(e.to_string()))?;
        Self::from_json(pres, &json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{heisenberg_presentation, w1_presentation};

    #[test]
    fn w1_slices_and_compositions() {
        let w1 = w1_presentation();
        let res = build_resolution(&w1, 4).unwrap();
        let sizes: Vec<usize> = res.slices().iter().map(|s| s.basis().len()).collect();
        assert_eq!(sizes, [3, 6, 13, 28]);
        for n in 1..4 {
            let report = check_composition(&w1, res.slice(n + 1).unwrap(), res.slice(n).unwrap());
            assert!(report.is_zero());
            assert_eq!(report.residues.len(), sizes[n]);
        }
    }

    #[test]
    fn heisenberg_slices() {
        let h = heisenberg_presentation();
        let res = build_resolution(&h, 4).unwrap();
        let sizes: Vec<usize> = res.slices().iter().map(|s| s.basis().len()).collect();
        assert_eq!(sizes, [3, 3, 1, 0]);
        assert!(res.slice(4).unwrap().is_empty());
    }

    #[test]
    fn dual_numbers_one_chain_each() {
        let d = Presentation::<Rational>::from_strs(&["x"], &[("xx", &[])]).unwrap();
        let res = build_resolution(&d, 6).unwrap();
        assert!(res.slices().iter().all(|s| s.basis().len() == 1));
    }

    #[test]
    fn json_round_trip_and_stale_hash() {
        let w1 = w1_presentation();
        let res = build_resolution(&w1, 3).unwrap();
        let text = res.to_json_string(w1.alphabet());
        let back = Resolution::from_json_str(&w1, &text).unwrap();
        assert_eq!(back, res);

        let h = heisenberg_presentation();
        assert!(matches!(Resolution::from_json_str(&h, &text), Err(ResolutionError::StaleHash { .. })));
    }
}

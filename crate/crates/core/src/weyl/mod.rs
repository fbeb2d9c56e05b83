//! The first Weyl algebra `W₁` on `q > p > e` with `e` an internal unit, and
//! the enveloping algebra of the Heisenberg Lie algebra on `x > y > z`.

use std::fmt;

use thiserror::Error;

use crate::chains::AnickChain;
use crate::freealg::{Alphabet, Presentation};
use crate::morse::ChainElement;
use crate::resolution::{check_composition, CompositionReport, Resolution, ResolutionError};
use crate::Rational;

pub mod formal;
pub mod heisenberg;

pub use formal::{coboundary_witness, generic_cocycle_relations, CocycleSolution, FormalBimodule, FormalElement, PeirceType, Symbol, WitnessCertificate};
pub use heisenberg::{heisenberg_fixture, HeisenbergCheck};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum WeylError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("resolution is for presentation {0}, not W1")]
    WrongPresentation(String),
    #[error("resolution stops at degree {have}, need {need}")]
    ResolutionTooShort { have: usize, need: usize },
    #[error("cannot parse reference row {0}")]
    BadTableRow(String),
    #[error("generic cocycle system for type {ty} has unresolved relations: {residual:?}")]
    InconsistentSystem { ty: PeirceType, residual: Vec<String> },
    #[error("coboundary witness for type {ty} fails on {chain}: residue {residue}")]
    WitnessFailed { ty: PeirceType, chain: String, residue: String },
}

/// `qp → pq + e`, `pe → p`, `qe → q`, `eq → q`, `ep → p`, `ee → e`, with `e`
/// designated as the idempotent.
pub fn w1_presentation() -> Presentation<Rational> {
    let pres = Presentation::from_strs(
        &["q", "p", "e"],
        &[
            ("qp", &[("1", "pq"), ("1", "e")]),
            ("pe", &[("1", "p")]),
            ("qe", &[("1", "q")]),
            ("eq", &[("1", "q")]),
            ("ep", &[("1", "p")]),
            ("ee", &[("1", "e")]),
        ],
    )
    .expect("W1 presentation is a Groebner-Shirshov basis");
    let e = pres.letter("e").expect("generator e");
    pres.with_idempotent(e)
}

/// `U(H₃)`: `xy → yx + z`, `xz → zx`, `yz → zy`.
pub fn heisenberg_presentation() -> Presentation<Rational> {
    Presentation::from_strs(
        &["x", "y", "z"],
        &[("xy", &[("1", "yx"), ("1", "z")]), ("xz", &[("1", "zx")]), ("yz", &[("1", "zy")])],
    )
    .expect("U(H3) presentation is a Groebner-Shirshov basis")
}

/// Reference differential tables for `W₁` in bracket shorthand (`[qpe]` is
/// the chain `[q|p|e]`), one `(chain, image)` pair per row.
pub const REFERENCE_DELTA3: &[(&str, &str)] = &[
    ("[qpe]", "q[pe]-p[qe]-[ee]+[qp]-[qp]e"),
    ("[eqp]", "e[qp]-[qp]+[ep]q+[ee]-[eq]p"),
    ("[qep]", "q[ep]-[qe]p"),
    ("[peq]", "p[eq]-[pe]q"),
    ("[qee]", "q[ee]-[qe]e"),
    ("[pee]", "p[ee]-[pe]e"),
    ("[eeq]", "e[eq]-[ee]q"),
    ("[eep]", "e[ep]-[ee]q"),
    ("[eqe]", "e[qe]-[qe]+[eq]-[eq]e"),
    ("[epe]", "e[pe]-[pe]+[pe]-[ep]e"),
    ("[qeq]", "q[eq]-[qe]q"),
    ("[pep]", "p[ep]-[pe]p"),
    ("[eee]", "e[ee]-[ee]e"),
];

/// See [`REFERENCE_DELTA3`].
pub const REFERENCE_DELTA4: &[(&str, &str)] = &[
    ("[qpee]", "q[pee]-p[qee]-[eee]+[qpe]e"),
    ("[qeep]", "q[eep]-[qep]+[qee]p"),
    ("[peeq]", "p[eeq]-[peq]+[pee]q"),
    ("[qeee]", "q[eee]-[qee]+[qee]e"),
    ("[peee]", "p[eee]-[pee]+[pee]e"),
    ("[eeeq]", "e[eeq]-[eeq]+[eee]q"),
    ("[eeep]", "e[eep]-[eep]+[eee]p"),
    ("[eeqe]", "e[eqe]-[eeq]+[eeq]e"),
    ("[eepe]", "e[epe]-[eep]+[eep]e"),
    ("[qeeq]", "q[eeq]-[qeq]+[qee]q"),
    ("[peep]", "p[eep]-[pep]+[pee]p"),
    ("[eeqp]", "e[eqp]-[eep]q-[eee]+[eeq]p"),
    ("[eqpe]", "e[qpe]-[qpe]+[eee]-[eqp]+[eqp]e"),
    ("[qepe]", "q[epe]-[qep]+[qep]e"),
    ("[peqe]", "p[eqe]-[peq]+[peq]e"),
    ("[eqee]", "e[qee]-[qee]+[eqe]e"),
    ("[epee]", "e[pee]-[pee]+[epe]e"),
    ("[qeqe]", "q[eqe]-[qeq]+[qeq]e"),
    ("[pepe]", "p[epe]-[pep]+[pep]e"),
    ("[eeee]", "e[eee]-[eee]+[eee]e"),
    ("[eqep]", "e[qep]-[qep]+[eqe]p"),
    ("[epeq]", "e[peq]-[peq]+[epe]q"),
    ("[epep]", "e[pep]-[pep]+[epe]p"),
    ("[eqeq]", "e[qeq]-[qeq]+[eqe]q"),
    ("[qpeq]", "q[peq]-[eeq]-p[qeq]+[qpe]q"),
    ("[qpep]", "q[pep]-[eep]-p[qep]+[qpe]p"),
];

/// Parse a reference image such as `e[qp]-[ee]q`, splitting each bracket into
/// single-letter entries.
pub fn parse_shorthand(s: &str, alphabet: &Alphabet) -> Option<ChainElement<Rational>> {
    ChainElement::parse(s, alphabet, |b| shorthand_chain(b, alphabet))
}

/// `[qpe]` → `[q|p|e]`; bracket contents with bars are read as usual.
pub fn shorthand_chain(s: &str, alphabet: &Alphabet) -> Option<AnickChain> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.contains('|') {
        return AnickChain::parse(s, alphabet);
    }
    let entries = inner.chars().map(|c| alphabet.letter(&c.to_string()).map(crate::Word::letter)).collect::<Option<Vec<_>>>()?;
    Some(AnickChain::from_entries_unchecked(entries))
}

/// Bracket notation without bars when every entry is a single letter.
pub fn shorthand(chain: &AnickChain, alphabet: &Alphabet) -> String {
    if chain.entries().iter().all(|w| w.len() == 1) {
        let inner: String = chain.entries().iter().map(|w| alphabet.format_word(w)).collect();
        format!("[{inner}]")
    } else {
        chain.display(alphabet)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Match,
    Discrepancy { computed: ChainElement<Rational>, printed: ChainElement<Rational> },
    /// A computed chain with no row in the reference table.
    NotPrinted { computed: ChainElement<Rational> },
    /// A reference row whose chain is not in the computed basis.
    NotComputed { printed: ChainElement<Rational> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// `n` for rows of `δ_n`.
    pub degree: usize,
    pub chain: AnickChain,
    pub status: RowStatus,
}

/// Computed `δ₃`, `δ₄` of `W₁` compared row by row with the reference tables,
/// together with the `δ₂δ₃` and `δ₃δ₄` residues that certify the computed side.
#[derive(Debug, Clone)]
pub struct DifferentialReport {
    pub rows: Vec<ReportRow>,
    pub compositions: Vec<CompositionReport<Rational>>,
    alphabet: Alphabet,
}

impl DifferentialReport {
    pub fn matches(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RowStatus::Match).count()
    }

    /// Rows that are not `Match`.
    pub fn deviations(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status != RowStatus::Match)
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Discrepancy { .. }))
    }

    pub fn composition_residue_count(&self) -> usize {
        self.compositions.iter().map(|c| c.residues.len()).sum()
    }

    pub fn compositions_vanish(&self) -> bool {
        self.compositions.iter().all(CompositionReport::is_zero)
    }
}

impl fmt::Display for DifferentialReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alphabet;
        for c in &self.compositions {
            let bad = c.nonzero().count();
            writeln!(f, "delta_{}delta_{}: {} residues, {} nonzero", c.degree, c.degree + 1, c.residues.len(), bad)?;
        }
        for row in &self.rows {
            let name = format!("delta_{}{}", row.degree, shorthand(&row.chain, a));
            match &row.status {
                RowStatus::Match => writeln!(f, "{name}: MATCH")?,
                RowStatus::Discrepancy { computed, printed } => writeln!(
                    f,
                    "{name}: DISCREPANCY computed = {} ; printed = {}",
                    computed.display(a),
                    printed.display(a)
                )?,
                RowStatus::NotPrinted { computed } => {
                    writeln!(f, "{name}: NOT PRINTED computed = {}", computed.display(a))?
                }
                RowStatus::NotComputed { printed } => {
                    writeln!(f, "{name}: NOT A COMPUTED CHAIN printed = {}", printed.display(a))?
                }
            }
        }
        Ok(())
    }
}

/// Compare a `W₁` resolution (built to degree ≥ 4) with the reference
/// `δ₃` and `δ₄` tables.
pub fn differential_report(w1: &Presentation<Rational>, res: &Resolution<Rational>) -> Result<DifferentialReport, WeylError> {
    if res.presentation_hash() != w1.content_hash() {
        return Err(WeylError::WrongPresentation(res.presentation_hash().to_string()));
    }
    if res.max_degree() < 4 {
        return Err(WeylError::ResolutionTooShort { have: res.max_degree(), need: 4 });
    }
    let a = w1.alphabet();
    let slice = |n: usize| res.slice(n).expect("degree checked above");
    let compositions = vec![check_composition(w1, slice(3), slice(2)), check_composition(w1, slice(4), slice(3))];

    let mut rows = Vec::new();
    for (degree, table) in [(3, REFERENCE_DELTA3), (4, REFERENCE_DELTA4)] {
        let computed = slice(degree);
        let mut seen = std::collections::BTreeSet::new();
        for (chain, image) in table.iter() {
            let bad = || WeylError::BadTableRow(format!("{chain} = {image}"));
            let chain = shorthand_chain(chain, a).ok_or_else(bad)?;
            let printed = parse_shorthand(image, a).ok_or_else(bad)?;
            let status = match computed.differential(&chain) {
                None => RowStatus::NotComputed { printed },
                Some(d) if *d == printed => RowStatus::Match,
                Some(d) => RowStatus::Discrepancy { computed: d.clone(), printed },
            };
            seen.insert(chain.clone());
            rows.push(ReportRow { degree, chain, status });
        }
        for (chain, d) in computed.iter() {
            if !seen.contains(chain) {
                rows.push(ReportRow { degree, chain: chain.clone(), status: RowStatus::NotPrinted { computed: d.clone() } });
            }
        }
    }
    Ok(DifferentialReport { rows, compositions, alphabet: a.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::build_resolution;

    #[test]
    fn report_against_reference_tables() {
        let w1 = w1_presentation();
        let res = build_resolution(&w1, 4).unwrap();
        let report = differential_report(&w1, &res).unwrap();
        print!("{report}");
        assert!(report.compositions_vanish());
        assert_eq!(report.composition_residue_count(), 13 + 28);
        let a = w1.alphabet();
        let deviating: Vec<String> = report.deviations().map(|r| shorthand(&r.chain, a)).collect();
        assert_eq!(deviating, ["[eep]", "[epe]", "[peqp]", "[qeqp]"]);
        let qpe = report.rows.iter().find(|r| shorthand(&r.chain, a) == "[qpe]").unwrap();
        assert_eq!(qpe.status, RowStatus::Match);
    }

    #[test]
    fn shorthand_round_trip() {
        let w1 = w1_presentation();
        let a = w1.alphabet();
        let c = shorthand_chain("[qpe]", a).unwrap();
        assert_eq!(c.display(a), "[q|p|e]");
        assert_eq!(shorthand(&c, a), "[qpe]");
        let x = parse_shorthand("q[pe]-p[qe]-[ee]", a).unwrap();
        assert_eq!(x.len(), 3);
    }
}

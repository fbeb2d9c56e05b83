//! `U(H₃)` and a Chevalley–Eilenberg cross-check of its Anick resolution.

use crate::chains::AnickChain;
use crate::freealg::{Letter, Presentation, Word};
use crate::morse::ChainElement;
use crate::resolution::{build_resolution, Resolution};
use crate::Rational;

use super::{heisenberg_presentation, WeylError};

/// Reference `δ₃[x|y|z]`.
pub const REFERENCE_XYZ: &str = "x[y|z] - [y|z]x + [x|z]y - y[x|z] + z[x|y] - [x|y]z";

/// Outcome of [`heisenberg_fixture`].
#[derive(Debug, Clone)]
pub struct HeisenbergCheck {
    pub presentation: Presentation<Rational>,
    pub resolution: Resolution<Rational>,
    /// `|V^(k)|` for `k = 0..=3`.
    pub chain_counts: Vec<usize>,
    pub delta3_xyz: ChainElement<Rational>,
    pub printed_xyz: ChainElement<Rational>,
    /// `(chain, left restriction of δ, CE differential)` for every chain.
    pub ce_rows: Vec<(AnickChain, ChainElement<Rational>, ChainElement<Rational>)>,
}

impl HeisenbergCheck {
    pub fn delta3_matches_printed(&self) -> bool {
        self.delta3_xyz == self.printed_xyz
    }

    pub fn counts_are_binomial(&self) -> bool {
        self.chain_counts == [3, 3, 1, 0]
    }

    pub fn ce_agrees(&self) -> bool {
        self.ce_rows.iter().all(|(_, a, b)| a == b)
    }
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `[a, b]` in `H₃`, with `[x, y] = z` the only nonzero bracket.
fn bracket(x: Letter, y: Letter, z: Letter, a: Letter, b: Letter) -> Option<(Letter, i64)> {
    if (a, b) == (x, y) {
        Some((z, 1))
    } else if (a, b) == (y, x) {
        Some((z, -1))
    } else {
        None
    }
}

/// Sort a wedge of generators greatest-first; `None` if a factor repeats.
fn canonical_wedge(mut gs: Vec<Letter>) -> Option<(Vec<Letter>, i64)> {
    let mut sign = 1;
    for i in 0..gs.len() {
        for j in 0..gs.len() - 1 - i {
            match gs[j].cmp(&gs[j + 1]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {
                    gs.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    Some((gs, sign))
}

fn wedge_chain(gs: &[Letter]) -> AnickChain {
    AnickChain::from_entries_unchecked(gs.iter().map(|&g| Word::letter(g)).collect())
}

/// Chevalley–Eilenberg differential of `g₁ ∧ … ∧ gₙ` in `U(H₃) ⊗ ∧H₃`,
/// written with wedges as chains.
pub fn ce_differential(pres: &Presentation<Rational>, wedge: &[Letter]) -> ChainElement<Rational> {
    let l = |s| pres.letter(s).expect("H3 generator");
    let (x, y, z) = (l("x"), l("y"), l("z"));
    let mut out = ChainElement::zero();
    let n = wedge.len();
    for i in 0..n {
        let rest: Vec<Letter> = wedge.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &g)| g).collect();
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out.add_term(rat(sign), Word::letter(wedge[i]), wedge_chain(&rest), Word::empty());
    }
    for i in 0..n {
        for j in i + 1..n {
            let Some((g, c)) = bracket(x, y, z, wedge[i], wedge[j]) else { continue };
            let mut gs = vec![g];
            gs.extend(wedge.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &h)| h));
            let Some((sorted, s)) = canonical_wedge(gs) else { continue };
            // 1-based (−1)^{i+j} equals 0-based (−1)^{i+j}
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            out.add_term(rat(sign * s * c), Word::empty(), wedge_chain(&sorted), Word::empty());
        }
    }
    out
}

/// Build `U(H₃)` to degree 4 and run the reference-formula and
/// Chevalley–Eilenberg comparisons.
pub fn heisenberg_fixture() -> Result<HeisenbergCheck, WeylError> {
    let pres = heisenberg_presentation();
    let resolution = build_resolution(&pres, 4)?;
    let a = pres.alphabet();
    let chain_counts = resolution.slices().iter().map(|s| s.basis().len()).collect();
    let xyz = AnickChain::parse("[x|y|z]", a).expect("chain");
    let delta3_xyz = resolution.slice(3).and_then(|s| s.differential(&xyz)).cloned().unwrap_or_default();
    let printed_xyz =
        ChainElement::parse(REFERENCE_XYZ, a, |b| AnickChain::parse(b, a)).ok_or_else(|| WeylError::BadTableRow(REFERENCE_XYZ.into()))?;
    let mut ce_rows = Vec::new();
    for slice in resolution.slices() {
        for (c, d) in slice.iter() {
            let wedge: Vec<Letter> = c.entries().iter().map(|w| w.letters()[0]).collect();
            let left = d.filter(|_, _, r| r.is_empty());
            ce_rows.push((c.clone(), left, ce_differential(&pres, &wedge)));
        }
    }
    Ok(HeisenbergCheck { presentation: pres, resolution, chain_counts, delta3_xyz, printed_xyz, ce_rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_checks() {
        let h = heisenberg_fixture().unwrap();
        assert!(h.counts_are_binomial());
        assert!(h.delta3_matches_printed(), "{}", h.delta3_xyz.display(h.presentation.alphabet()));
        for (c, l, ce) in &h.ce_rows {
            let a = h.presentation.alphabet();
            assert_eq!(l, ce, "{}: {} vs {}", c.display(a), l.display(a), ce.display(a));
        }
        assert_eq!(h.ce_rows.len(), 7);
    }

    #[test]
    fn ce_squares_to_zero_on_top_wedge() {
        let pres = heisenberg_presentation();
        let l = |s| pres.letter(s).unwrap();
        let d = ce_differential(&pres, &[l("x"), l("y")]);
        assert_eq!(d.len(), 3);
        assert!(canonical_wedge(vec![l("x"), l("x")]).is_none());
        assert_eq!(canonical_wedge(vec![l("z"), l("x")]).unwrap().1, -1);
    }
}

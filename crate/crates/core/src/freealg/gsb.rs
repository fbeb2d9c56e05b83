use super::{FreePoly, RewriteSystem, Word};
use crate::{Rational, Scalar};

/// An overlap ambiguity `w = u·s·v` where `u·s` and `s·v` are obstructions,
/// together with the normal forms reached by rewriting either one first.
#[derive(Debug, Clone)]
pub struct Ambiguity<S = Rational> {
    pub word: Word,
    pub first_rule: usize,
    pub second_rule: usize,
    /// Length of the shared middle part `s`.
    pub overlap: usize,
    pub first_nf: FreePoly<S>,
    pub second_nf: FreePoly<S>,
}

impl<S: Scalar> Ambiguity<S> {
    pub fn resolves(&self) -> bool {
        self.first_nf == self.second_nf
    }
}

#[derive(Debug, Clone)]
pub struct GsbReport<S = Rational> {
    pub ambiguities: Vec<Ambiguity<S>>,
}

impl<S: Scalar> GsbReport<S> {
    pub fn is_gsb(&self) -> bool {
        self.ambiguities.iter().all(Ambiguity::resolves)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Ambiguity<S>> {
        self.ambiguities.iter().filter(|a| !a.resolves())
    }
}

/// Overlap check. Inclusion ambiguities cannot occur because
/// [`RewriteSystem::new`] rejects non-reduced obstruction sets, so only
/// overlaps are enumerated.
pub fn verify_gsb<S: Scalar>(sys: &RewriteSystem<S>) -> GsbReport<S> {
    let mut ambiguities = Vec::new();
    for (i, a) in sys.rules().iter().enumerate() {
        for (j, b) in sys.rules().iter().enumerate() {
            let max_overlap = a.lhs.len().min(b.lhs.len()) - 1;
            for k in 1..=max_overlap {
                let a_tail = a.lhs.slice(a.lhs.len() - k, a.lhs.len());
                let b_head = b.lhs.slice(0, k);
                if a_tail != b_head {
                    continue;
                }
                let word = a.lhs.concat(&b.lhs.slice(k, b.lhs.len()));
                let first = sys.rewrite_at(&word, 0, i);
                let second = sys.rewrite_at(&word, a.lhs.len() - k, j);
                ambiguities.push(Ambiguity {
                    first_nf: sys.normal_form(&first),
                    second_nf: sys.normal_form(&second),
                    word,
                    first_rule: i,
                    second_rule: j,
                    overlap: k,
                });
            }
        }
    }
    GsbReport { ambiguities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{Alphabet, FreeAlgError, Presentation, RewriteRule};
    use crate::weyl::{heisenberg_presentation, w1_presentation};
    use crate::Rational;

    #[test]
    fn w1_is_gsb() {
        let w1 = w1_presentation();
        let report = verify_gsb(w1.system());
        assert!(report.is_gsb());
        // six quadratic rules, overlaps xyz with xy, yz both obstructions
        assert!(!report.ambiguities.is_empty() && report.ambiguities.len() <= 36);
    }

    #[test]
    fn heisenberg_is_gsb() {
        assert!(verify_gsb(heisenberg_presentation().system()).is_gsb());
    }

    #[test]
    fn inconsistent_overlap_detected() {
        // x > y, xx -> y, xy -> x: xxx reduces to x and to yx
        let a = Alphabet::from_greatest_first(["x", "y"]).unwrap();
        let rules = vec![
            RewriteRule::new(a.parse_word("xx").unwrap(), FreePoly::monomial(a.parse_word("y").unwrap())),
            RewriteRule::new(a.parse_word("xy").unwrap(), FreePoly::monomial(a.parse_word("x").unwrap())),
        ];
        let sys = RewriteSystem::<Rational>::new(a.clone(), rules).unwrap();
        let report = verify_gsb(&sys);
        assert!(!report.is_gsb());
        let xxx = a.parse_word("xxx").unwrap();
        assert!(report.failures().any(|f| f.word == xxx));
        assert!(matches!(Presentation::new(sys, None), Err(FreeAlgError::NotAGsb { .. })));
    }
}

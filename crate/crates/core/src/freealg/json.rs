use serde::{Deserialize, Serialize};

use super::{Alphabet, FreeAlgError, FreePoly, Presentation, RewriteRule, RewriteSystem};
use crate::Scalar;

/// On-disk presentation. Generators are listed greatest first; words are
/// strings of generator names; coefficients are decimal rationals such as
/// `"3/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relations: Vec<RelationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub lhs: String,
    pub rhs: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub word: String,
}

impl PresentationJson {
    pub fn build<S: Scalar>(&self) -> Result<Presentation<S>, FreeAlgError> {
        let alphabet = Alphabet::from_greatest_first(self.generators.iter().cloned())?;
        let mut rules = Vec::with_capacity(self.relations.len());
        for rel in &self.relations {
            let lhs = alphabet.parse_word(&rel.lhs)?;
            let mut rhs = FreePoly::zero();
            for t in &rel.rhs {
                let c = S::parse_decimal(&t.coef).ok_or_else(|| FreeAlgError::BadCoefficient(t.coef.clone()))?;
                rhs.add_term(alphabet.parse_word(&t.word)?, c);
            }
            rules.push(RewriteRule::new(lhs, rhs));
        }
        let idempotent = match &self.idempotent {
            None => None,
            Some(name) => {
                Some(alphabet.letter(name).ok_or_else(|| FreeAlgError::UnknownIdempotent(name.clone()))?)
            }
        };
        Presentation::new(RewriteSystem::new(alphabet, rules)?, idempotent)
    }

    pub fn from_presentation<S: Scalar>(p: &Presentation<S>) -> Self {
        let a = p.alphabet();
        PresentationJson {
            generators: a.names_greatest_first(),
            relations: p
                .rules()
                .iter()
                .map(|r| RelationJson {
                    lhs: a.format_word(&r.lhs),
                    rhs: r
                        .rhs
                        .iter()
                        .rev()
                        .map(|(w, c)| TermJson { coef: c.to_string(), word: a.format_word(w) })
                        .collect(),
                })
                .collect(),
            idempotent: p.idempotent().map(|e| a.name(e).to_string()),
        }
    }
}

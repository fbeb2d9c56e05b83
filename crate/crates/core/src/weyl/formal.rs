//! Free `W₁`-bimodules of a fixed Peirce type on formal symbols `φ[w]`, and
//! the symbolic solution of the generic 3-cocycle equations.
//!
//! A Peirce type `(i, j)` fixes how `e` acts: on a side with index 1 the
//! idempotent is the unit, on a side with index 0 it acts as zero, and then
//! so does every word of `W₁` (each normal word is `e`-absorbing). The
//! external unit of the augmented algebra always acts as the identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bimodule::{BasisLabel, BimoduleElement};
use crate::chains::AnickChain;
use crate::freealg::{Alphabet, FreePoly, Presentation, Word};
use crate::linalg::Matrix;
use crate::morse::ChainElement;
use crate::resolution::{Resolution, ResolutionSlice};
use crate::Rational;

use super::{shorthand, shorthand_chain, WeylError};

/// Peirce type `(i, j)`: `e·u = i·u` and `u·e = j·u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeirceType {
    pub left_unital: bool,
    pub right_unital: bool,
}

impl PeirceType {
    pub const ALL: [PeirceType; 4] =
        [PeirceType::new(true, true), PeirceType::new(true, false), PeirceType::new(false, true), PeirceType::new(false, false)];

    pub const fn new(left_unital: bool, right_unital: bool) -> Self {
        PeirceType { left_unital, right_unital }
    }
}

impl fmt::Display for PeirceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", u8::from(self.left_unital), u8::from(self.right_unital))
    }
}

/// The formal value `φ[chain]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub AnickChain);

impl BasisLabel for Symbol {
    fn label(&self, alphabet: &Alphabet) -> String {
        format!("φ{}", shorthand(&self.0, alphabet))
    }
}

pub type FormalElement = BimoduleElement<Symbol, Rational>;

/// Arithmetic in the free bimodule of one Peirce type.
#[derive(Debug, Clone)]
pub struct FormalBimodule<'a> {
    pres: &'a Presentation<Rational>,
    ty: PeirceType,
    e: Word,
}

impl<'a> FormalBimodule<'a> {
    /// Panics if `pres` has no designated idempotent.
    pub fn new(pres: &'a Presentation<Rational>, ty: PeirceType) -> Self {
        let e = Word::letter(pres.idempotent().expect("presentation with an idempotent"));
        FormalBimodule { pres, ty, e }
    }

    pub fn ty(&self) -> PeirceType {
        self.ty
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pres.alphabet()
    }

    fn side(&self, poly: &FreePoly<Rational>, unital: bool) -> Vec<(Word, Rational)> {
        poly.iter()
            .filter_map(|(w, c)| {
                if w.is_empty() {
                    Some((Word::empty(), c.clone()))
                } else if !unital {
                    None
                } else if *w == self.e {
                    Some((Word::empty(), c.clone()))
                } else {
                    Some((w.clone(), c.clone()))
                }
            })
            .collect()
    }

    /// `out += c · l · x · r`.
    pub fn add_sandwiched(&self, out: &mut FormalElement, c: &Rational, l: &Word, x: &FormalElement, r: &Word) {
        for (xl, s, xr, a) in x.iter() {
            let left = self.side(&self.pres.multiply_words(l, xl), self.ty.left_unital);
            let right = self.side(&self.pres.multiply_words(xr, r), self.ty.right_unital);
            for (lw, lc) in &left {
                for (rw, rc) in &right {
                    out.add_term(c.clone() * a.clone() * lc.clone() * rc.clone(), lw.clone(), s.clone(), rw.clone());
                }
            }
        }
    }

    /// `l · φ[s] · r` reduced in this type.
    pub fn sandwich(&self, l: &Word, s: &AnickChain, r: &Word) -> FormalElement {
        let mut out = FormalElement::zero();
        self.add_sandwiched(&mut out, &Rational::from_integer(1.into()), l, &FormalElement::basis(Symbol(s.clone())), r);
        out
    }

    /// Push a resolution element through a bimodule map given on chains.
    pub fn apply(&self, x: &ChainElement<Rational>, mut f: impl FnMut(&AnickChain) -> FormalElement) -> FormalElement {
        let mut out = FormalElement::zero();
        for (l, v, r, c) in x.iter() {
            self.add_sandwiched(&mut out, c, l, &f(v), r);
        }
        out
    }

    /// Replace every symbol that has an entry in `values`.
    pub fn substitute(&self, x: &FormalElement, values: &BTreeMap<AnickChain, FormalElement>) -> FormalElement {
        let mut out = FormalElement::zero();
        for (l, s, r, c) in x.iter() {
            match values.get(&s.0) {
                Some(v) => self.add_sandwiched(&mut out, c, l, v, r),
                None => out.add_term(c.clone(), l.clone(), s.clone(), r.clone()),
            }
        }
        out
    }
}

/// How a symbol came to be determined.
#[derive(Debug, Clone, PartialEq)]
pub enum Derivation {
    /// Solved from the relation `φ(δ₄ chain) = 0`.
    Pivot { relation: AnickChain },
    /// `φ[s] = e·φ[s] = q(pφ[s]) − p(qφ[s]) = 0` (or its right-hand mirror)
    /// from single-term relations killing `qφ[s]` and `pφ[s]`.
    Commutator { left_side: bool, relations: [AnickChain; 2] },
}

/// The generic 3-cocycle of one Peirce type in solved form.
#[derive(Debug, Clone)]
pub struct CocycleSolution {
    pub ty: PeirceType,
    /// `φ(δ₄ c)` for every `c ∈ V^(3)`, before solving.
    pub relations: Vec<(AnickChain, FormalElement)>,
    /// Symbols left undetermined.
    pub free: Vec<AnickChain>,
    /// Determined symbols in the order they were solved.
    pub derivations: Vec<(AnickChain, Derivation)>,
    /// Every `φ[w]`, `w ∈ V^(2)`, as an expression in the free symbols.
    pub values: BTreeMap<AnickChain, FormalElement>,
    /// Leftover relations, each a single annihilator condition on a free
    /// symbol such as `qφ[s] = 0`.
    pub constraints: Vec<(AnickChain, FormalElement)>,
    alphabet: Alphabet,
}

impl CocycleSolution {
    pub fn free_labels(&self) -> BTreeSet<String> {
        self.free.iter().map(|c| shorthand(c, &self.alphabet)).collect()
    }

    pub fn value(&self, chain: &AnickChain) -> Option<&FormalElement> {
        self.values.get(chain)
    }
}

impl fmt::Display for CocycleSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alphabet;
        let names: Vec<String> = self.free.iter().map(|c| format!("φ{}", shorthand(c, a))).collect();
        writeln!(f, "type {}: {} relations, free symbols {{{}}}", self.ty, self.relations.len(), names.join(", "))?;
        for (c, how) in &self.derivations {
            let why = match how {
                Derivation::Pivot { relation } => format!("from φδ₄{}", shorthand(relation, a)),
                Derivation::Commutator { left_side, relations: [x, y] } => format!(
                    "{} commutator from φδ₄{}, φδ₄{}",
                    if *left_side { "left" } else { "right" },
                    shorthand(x, a),
                    shorthand(y, a)
                ),
            };
            writeln!(f, "  φ{} = {}   ({why})", shorthand(c, a), self.values[c].display(a))?;
        }
        for (c, r) in &self.constraints {
            writeln!(f, "  constraint {} = 0   (from φδ₄{})", r.display(a), shorthand(c, a))?;
        }
        Ok(())
    }
}

fn degree_slices(res: &Resolution<Rational>, need: usize) -> Result<(), WeylError> {
    if res.max_degree() < need {
        return Err(WeylError::ResolutionTooShort { have: res.max_degree(), need });
    }
    Ok(())
}

/// Only term of `x` carrying symbol `s` is `c·(1, s, 1)`: returns `c`.
fn isolated_unit_coefficient(x: &FormalElement, s: &Symbol) -> Option<Rational> {
    let mut found = None;
    for (l, t, r, c) in x.iter() {
        if t == s {
            if found.is_some() || !l.is_empty() || !r.is_empty() {
                return None;
            }
            found = Some(c.clone());
        }
    }
    found
}

/// Solve `φ∘δ₄ = 0` for a generic `φ : A₃ → M` with `M` free of type `ty`.
///
/// Each step isolates a symbol occurring only as `c·φ[s]` in a relation,
/// preferring the shortest relation and then the greatest chain, and
/// substitutes the solution everywhere. When no such relation remains, a
/// pair of single-term relations `qφ[s] = 0 = pφ[s]` on a unital side forces
/// `φ[s] = 0` through `e = qp − pq`.
pub fn generic_cocycle_relations(
    w1: &Presentation<Rational>,
    res: &Resolution<Rational>,
    ty: PeirceType,
) -> Result<CocycleSolution, WeylError> {
    degree_slices(res, 4)?;
    let fm = FormalBimodule::new(w1, ty);
    let symbols: Vec<AnickChain> = res.slice(3).expect("checked").basis().to_vec();
    let relations: Vec<(AnickChain, FormalElement)> = res
        .slice(4)
        .expect("checked")
        .iter()
        .map(|(c, d)| (c.clone(), fm.apply(d, |v| FormalElement::basis(Symbol(v.clone())))))
        .collect();

    let mut values: BTreeMap<AnickChain, FormalElement> = BTreeMap::new();
    let mut derivations = Vec::new();
    let mut live: Vec<(AnickChain, FormalElement)> = relations.iter().filter(|(_, r)| !r.is_zero()).cloned().collect();
    let (q, p) = (w1.word("q"), w1.word("p"));

    loop {
        let mut best: Option<(usize, AnickChain, usize, Rational)> = None;
        for (i, (_, eq)) in live.iter().enumerate() {
            let syms: BTreeSet<&Symbol> = eq.iter().map(|(_, s, _, _)| s).collect();
            for s in syms {
                let Some(c) = isolated_unit_coefficient(eq, s) else { continue };
                let better = match &best {
                    None => true,
                    Some((len, chain, _, _)) => eq.len() < *len || (eq.len() == *len && s.0 > *chain),
                };
                if better {
                    best = Some((eq.len(), s.0.clone(), i, c));
                }
            }
        }
        let step = if let Some((_, s, i, c)) = best {
            let eq = &live[i].1;
            let mut rest = eq.clone();
            rest.add_term(-c.clone(), Word::empty(), Symbol(s.clone()), Word::empty());
            let value = rest.scaled(&(-Rational::from_integer(1.into()) / c));
            Some((s, value, Derivation::Pivot { relation: live[i].0.clone() }))
        } else {
            commutator_step(&live, &q, &p, ty).map(|(s, d)| (s, FormalElement::zero(), d))
        };
        let Some((s, value, how)) = step else { break };

        let single: BTreeMap<AnickChain, FormalElement> = [(s.clone(), value.clone())].into();
        for v in values.values_mut() {
            *v = fm.substitute(v, &single);
        }
        values.insert(s.clone(), value);
        derivations.push((s, how));
        live = live.into_iter().map(|(c, eq)| (c, fm.substitute(&eq, &single))).filter(|(_, eq)| !eq.is_zero()).collect();
    }

    let free: Vec<AnickChain> = symbols.iter().filter(|s| !values.contains_key(*s)).cloned().collect();
    for s in &free {
        values.insert(s.clone(), FormalElement::basis(Symbol(s.clone())));
    }
    if live.iter().any(|(_, eq)| eq.len() != 1) {
        return Err(WeylError::InconsistentSystem {
            ty,
            residual: live.iter().map(|(c, eq)| format!("φδ₄{} = {}", shorthand(c, w1.alphabet()), eq.display(w1.alphabet()))).collect(),
        });
    }
    Ok(CocycleSolution { ty, relations, free, derivations, values, constraints: live, alphabet: w1.alphabet().clone() })
}

fn commutator_step(
    live: &[(AnickChain, FormalElement)],
    q: &Word,
    p: &Word,
    ty: PeirceType,
) -> Option<(AnickChain, Derivation)> {
    let singles: Vec<(&AnickChain, &Word, &Symbol, &Word)> = live
        .iter()
        .filter(|(_, eq)| eq.len() == 1)
        .map(|(c, eq)| {
            let (l, s, r, _) = eq.iter().next().expect("one term");
            (c, l, s, r)
        })
        .collect();
    let empty = Word::empty();
    for left_side in [true, false] {
        if (left_side && !ty.left_unital) || (!left_side && !ty.right_unital) {
            continue;
        }
        let find = |x: &Word, s: &Symbol| {
            singles.iter().find(|(_, l, t, r)| {
                let (here, there) = if left_side { (*l, *r) } else { (*r, *l) };
                *t == s && here == x && *there == empty
            })
        };
        for (_, _, s, _) in &singles {
            if let (Some(a), Some(b)) = (find(q, s), find(p, s)) {
                return Some((s.0.clone(), Derivation::Commutator { left_side, relations: [a.0.clone(), b.0.clone()] }));
            }
        }
    }
    None
}

/// How `ψ` was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessMethod {
    /// The explicit assignment for types `(1,1)` and `(1,0)`.
    Recipe,
    /// Solved by linear algebra with `ψ[v]` ranging over `l·φ[s]·r`,
    /// `|l|, |r| ≤ word_len`.
    Ansatz { word_len: usize },
}

/// `ψ : A₂ → M` with `ψ∘δ₃ = φ`, together with the per-chain residues.
#[derive(Debug, Clone)]
pub struct WitnessCertificate {
    pub ty: PeirceType,
    pub method: WitnessMethod,
    pub psi: Vec<(AnickChain, FormalElement)>,
    /// `(ψδ₃)[c] − φ[c]` for every `c ∈ V^(2)`.
    pub residues: Vec<(AnickChain, FormalElement)>,
    alphabet: Alphabet,
}

impl WitnessCertificate {
    pub fn is_exact(&self) -> bool {
        self.residues.iter().all(|(_, r)| r.is_zero())
    }
}

impl fmt::Display for WitnessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alphabet;
        let method = match &self.method {
            WitnessMethod::Recipe => "explicit recipe".to_string(),
            WitnessMethod::Ansatz { word_len } => format!("linear ansatz, words of length <= {word_len}"),
        };
        writeln!(f, "type {}: psi by {method}", self.ty)?;
        for (v, x) in &self.psi {
            writeln!(f, "  ψ{} = {}", shorthand(v, a), x.display(a))?;
        }
        let zero = self.residues.iter().filter(|(_, r)| r.is_zero()).count();
        writeln!(f, "  (ψδ₃ − φ): {zero}/{} residues zero", self.residues.len())
    }
}

/// `(ψ chain, sign, φ chain)`; rows absent from the table mean `ψ = 0`.
const RECIPE_11: &[(&str, i64, &str)] =
    &[("[eq]", 1, "[eeq]"), ("[ep]", 1, "[eep]"), ("[qe]", -1, "[qee]"), ("[pe]", -1, "[pee]")];
const RECIPE_10: &[(&str, i64, &str)] = &[
    ("[eq]", 1, "[eeq]"),
    ("[ep]", 1, "[eep]"),
    ("[qe]", 1, "[qee]"),
    ("[pe]", 1, "[pee]"),
    ("[ee]", 1, "[eee]"),
    ("[qp]", 1, "[qpe]"),
];

/// Build `ψ` on `V^(1)` and check `ψ∘δ₃ = φ` on all of `V^(2)`.
pub fn coboundary_witness(
    w1: &Presentation<Rational>,
    res: &Resolution<Rational>,
    solution: &CocycleSolution,
) -> Result<WitnessCertificate, WeylError> {
    degree_slices(res, 3)?;
    let fm = FormalBimodule::new(w1, solution.ty);
    let a = w1.alphabet();
    let basis1 = res.slice(2).expect("checked").basis().to_vec();
    let delta3 = res.slice(3).expect("checked");

    let recipe = match (solution.ty.left_unital, solution.ty.right_unital) {
        (true, true) => Some(RECIPE_11),
        (true, false) => Some(RECIPE_10),
        _ => None,
    };
    let (psi, method) = match recipe {
        Some(rows) => {
            let mut psi: BTreeMap<AnickChain, FormalElement> = basis1.iter().map(|v| (v.clone(), FormalElement::zero())).collect();
            for (v, sign, w) in rows {
                let v = shorthand_chain(v, a).expect("recipe chain");
                let w = shorthand_chain(w, a).expect("recipe chain");
                let value = solution.values.get(&w).cloned().unwrap_or_default();
                psi.insert(v, value.scaled(&Rational::from_integer((*sign).into())));
            }
            (psi, WitnessMethod::Recipe)
        }
        None => solve_ansatz(&fm, &basis1, delta3, solution)?,
    };

    let residues: Vec<(AnickChain, FormalElement)> = delta3
        .iter()
        .map(|(c, d)| {
            let image = fm.apply(d, |v| psi.get(v).cloned().unwrap_or_default());
            (c.clone(), image.sub(&solution.values[c]))
        })
        .collect();
    if let Some((c, r)) = residues.iter().find(|(_, r)| !r.is_zero()) {
        return Err(WeylError::WitnessFailed { ty: solution.ty, chain: shorthand(c, a), residue: r.display(a) });
    }
    let psi = basis1.iter().map(|v| (v.clone(), psi[v].clone())).collect();
    Ok(WitnessCertificate { ty: solution.ty, method, psi, residues, alphabet: a.clone() })
}

const MAX_ANSATZ_LEN: usize = 2;

fn side_words(fm: &FormalBimodule<'_>, unital: bool, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    if unital {
        for n in 1..=len {
            out.extend(fm.pres.normal_words_of_length(n).into_iter().filter(|w| *w != fm.e));
        }
    }
    out
}

fn solve_ansatz(
    fm: &FormalBimodule<'_>,
    basis1: &[AnickChain],
    delta3: &ResolutionSlice<Rational>,
    solution: &CocycleSolution,
) -> Result<(BTreeMap<AnickChain, FormalElement>, WitnessMethod), WeylError> {
    for word_len in 0..=MAX_ANSATZ_LEN {
        let lefts = side_words(fm, fm.ty.left_unital, word_len);
        let rights = side_words(fm, fm.ty.right_unital, word_len);
        let mut unknowns = Vec::new();
        for v in basis1 {
            for s in &solution.free {
                for l in &lefts {
                    for r in &rights {
                        unknowns.push((v.clone(), l.clone(), s.clone(), r.clone()));
                    }
                }
            }
        }
        let mut keys: BTreeMap<(AnickChain, Word, Symbol, Word), usize> = BTreeMap::new();
        let mut key = |k: (AnickChain, Word, Symbol, Word)| {
            let n = keys.len();
            *keys.entry(k).or_insert(n)
        };
        let mut entries = Vec::new();
        for (j, (v, l, s, r)) in unknowns.iter().enumerate() {
            let atom = fm.sandwich(l, s, r);
            for (c, d) in delta3.iter() {
                let image = fm.apply(d, |u| if u == v { atom.clone() } else { FormalElement::zero() });
                for (il, is, ir, x) in image.iter() {
                    entries.push((key((c.clone(), il.clone(), is.clone(), ir.clone())), j, x.clone()));
                }
            }
        }
        let mut rhs = Vec::new();
        for (c, _) in delta3.iter() {
            for (l, s, r, x) in solution.values[c].iter() {
                rhs.push((key((c.clone(), l.clone(), s.clone(), r.clone())), x.clone()));
            }
        }
        let mut m = Matrix::zeros(keys.len(), unknowns.len());
        for (i, j, x) in entries {
            m.add_at(i, j, x);
        }
        let mut b = vec![Rational::from_integer(0.into()); keys.len()];
        for (i, x) in rhs {
            b[i] += x;
        }
        if let Some(x) = m.solve(&b) {
            let mut psi: BTreeMap<AnickChain, FormalElement> = basis1.iter().map(|v| (v.clone(), FormalElement::zero())).collect();
            for ((v, l, s, r), c) in unknowns.iter().zip(x) {
                let entry = psi.get_mut(v).expect("basis chain");
                entry.add_scaled(&fm.sandwich(l, s, r), &c);
            }
            return Ok((psi, WitnessMethod::Ansatz { word_len }));
        }
    }
    Err(WeylError::WitnessFailed {
        ty: fm.ty,
        chain: "(all)".into(),
        residue: format!("no ψ with words of length <= {MAX_ANSATZ_LEN}"),
    })
}

//! Hochschild cohomology with coefficients in finite-dimensional bimodules,
//! computed from the cochain complex `Hom_{Λ-Λ}(A_•, M)` of an Anick
//! resolution.
//!
//! Vectors of `M` are columns; `x·m = L_x m` and `m·x = R_x m`. A cochain
//! `φ ∈ C^n` assigns a vector of `M` to each chain of `V^(n−1)` (the unit
//! chain for `n = 0`) and is stored chain-major: coordinates
//! `[φ(c_0); φ(c_1); …]` in the basis order of the resolution slice.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::AnickChain;
use crate::freealg::{Alphabet, Letter, Presentation, Word};
use crate::linalg::{Matrix, SparseEchelon};
use crate::resolution::Resolution;
use crate::{Rational, Scalar};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("matrix for {generator} ({side}) is not {dim}x{dim}")]
    DimensionMismatch { generator: String, side: Side, dim: usize },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("bad matrix entry {0}")]
    BadEntry(String),
    #[error("relation {rule} fails for the {side} action")]
    RelationViolated { rule: String, side: Side },
    #[error("left action of {left} does not commute with right action of {right}")]
    ActionsDontCommute { left: String, right: String },
    #[error("{generator} does not act idempotently on the {side}")]
    NotIdempotent { generator: String, side: Side },
    #[error("component {component:?} is not stable under the action of {generator}")]
    NotInvariant { component: (u8, u8), generator: String },
    #[error("resolution covers degrees up to {have}, need {need}")]
    ResolutionTooShort { have: usize, need: usize },
    #[error("resolution belongs to another presentation")]
    WrongPresentation,
    #[error("malformed bimodule file: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A bimodule of dimension `dim` with one left and one right action matrix
/// per generator (indexed by letter rank).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBimodule<S = Rational> {
    dim: usize,
    left: Vec<Matrix<S>>,
    right: Vec<Matrix<S>>,
}

impl<S: Scalar> FiniteBimodule<S> {
    /// Matrices per letter rank; every matrix must be `dim × dim`.
    pub fn new(alphabet: &Alphabet, dim: usize, left: Vec<Matrix<S>>, right: Vec<Matrix<S>>) -> Result<Self, BimoduleError> {
        for (side, ms) in [(Side::Left, &left), (Side::Right, &right)] {
            if ms.len() != alphabet.len() {
                return Err(BimoduleError::UnknownGenerator(format!("{} matrices for {} generators", ms.len(), alphabet.len())));
            }
            for (i, m) in ms.iter().enumerate() {
                if m.rows() != dim || m.cols() != dim {
                    return Err(BimoduleError::DimensionMismatch {
                        generator: alphabet.name(Letter(i as u16)).to_string(),
                        side,
                        dim,
                    });
                }
            }
        }
        Ok(FiniteBimodule { dim, left, right })
    }

    /// All generators act by zero.
    pub fn trivial(alphabet: &Alphabet, dim: usize) -> Self {
        let zeros = vec![Matrix::zeros(dim, dim); alphabet.len()];
        FiniteBimodule { dim, left: zeros.clone(), right: zeros }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, x: Letter) -> &Matrix<S> {
        &self.left[x.rank()]
    }

    pub fn right(&self, x: Letter) -> &Matrix<S> {
        &self.right[x.rank()]
    }

    /// Matrix of `m ↦ w·m`.
    pub fn left_word(&self, w: &Word) -> Matrix<S> {
        w.letters().iter().fold(Matrix::identity(self.dim), |acc, &x| acc.mul(self.left(x)))
    }

    /// Matrix of `m ↦ m·w`.
    pub fn right_word(&self, w: &Word) -> Matrix<S> {
        w.letters().iter().fold(Matrix::identity(self.dim), |acc, &x| self.right(x).mul(&acc))
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let sum = |a: &Matrix<S>, b: &Matrix<S>| {
            let n = a.rows() + b.rows();
            let mut m = Matrix::zeros(n, n);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                }
            }
            m
        };
        FiniteBimodule {
            dim: self.dim + other.dim,
            left: self.left.iter().zip(&other.left).map(|(a, b)| sum(a, b)).collect(),
            right: self.right.iter().zip(&other.right).map(|(a, b)| sum(a, b)).collect(),
        }
    }
}

/// Checks every rule under both actions and that the actions commute.
pub fn validate_bimodule<S: Scalar>(m: &FiniteBimodule<S>, pres: &Presentation<S>) -> Result<(), BimoduleError> {
    let a = pres.alphabet();
    for rule in pres.rules() {
        let show = || format!("{} -> {}", pres.format_word(&rule.lhs), pres.format_poly(&rule.rhs));
        for side in [Side::Left, Side::Right] {
            let act = |w: &Word| match side {
                Side::Left => m.left_word(w),
                Side::Right => m.right_word(w),
            };
            let rhs = rule.rhs.iter().fold(Matrix::zeros(m.dim, m.dim), |acc, (w, c)| acc.add(&act(w).scaled(c)));
            if act(&rule.lhs) != rhs {
                return Err(BimoduleError::RelationViolated { rule: show(), side });
            }
        }
    }
    for x in a.letters() {
        for y in a.letters() {
            if m.left(x).mul(m.right(y)) != m.right(y).mul(m.left(x)) {
                return Err(BimoduleError::ActionsDontCommute {
                    left: a.name(x).to_string(),
                    right: a.name(y).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Chains indexing `C^n`.
pub fn cochain_basis<S: Scalar>(res: &Resolution<S>, n: usize) -> Vec<AnickChain> {
    if n == 0 {
        vec![AnickChain::unit()]
    } else {
        res.slice(n).map(|s| s.basis().to_vec()).unwrap_or_default()
    }
}

/// Matrix of `Δ^n : C^n → C^{n+1}`, `(Δ^n φ)(c) = φ(δ_{n+1} c)`.
pub fn coboundary_matrix<S: Scalar>(res: &Resolution<S>, n: usize, m: &FiniteBimodule<S>) -> Result<Matrix<S>, BimoduleError> {
    let upper = res.slice(n + 1).ok_or(BimoduleError::ResolutionTooShort { have: res.max_degree(), need: n + 1 })?;
    let cols = cochain_basis(res, n);
    let index: BTreeMap<&AnickChain, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let d = m.dim;
    let blocks: Vec<Vec<(usize, Matrix<S>)>> = upper
        .basis()
        .par_iter()
        .map(|c| {
            let mut acc: BTreeMap<usize, Matrix<S>> = BTreeMap::new();
            for (l, v, r, coef) in upper.differential(c).expect("slice basis chain").iter() {
                let block = m.left_word(l).mul(&m.right_word(r)).scaled(coef);
                let j = index[v];
                let slot = acc.entry(j).or_insert_with(|| Matrix::zeros(d, d));
                *slot = slot.add(&block);
            }
            acc.into_iter().collect()
        })
        .collect();
    let mut out = Matrix::zeros(upper.basis().len() * d, cols.len() * d);
    for (i, row) in blocks.into_iter().enumerate() {
        for (j, block) in row {
            for a in 0..d {
                for b in 0..d {
                    out.set(i * d + a, j * d + b, block.get(a, b).clone());
                }
            }
        }
    }
    Ok(out)
}

/// Dimensions and ranks behind a cohomology computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    /// `dim H^n` for `n = 0..=max_degree`.
    pub dims: Vec<usize>,
    pub cochain_dims: Vec<usize>,
    /// `rank Δ^n` for `n = 0..=max_degree`.
    pub ranks: Vec<usize>,
}

/// `dim H^n = dim C^n − rank Δ^n − rank Δ^{n−1}` for `n ≤ max_degree`; needs
/// the resolution through degree `max_degree + 1`.
pub fn cohomology<S: Scalar>(res: &Resolution<S>, m: &FiniteBimodule<S>, max_degree: usize) -> Result<CohomologyReport, BimoduleError> {
    cohomology_with(res, m, max_degree, Matrix::rank)
}

/// As [`cohomology`], with a caller-supplied rank routine.
pub fn cohomology_with<S: Scalar>(
    res: &Resolution<S>,
    m: &FiniteBimodule<S>,
    max_degree: usize,
    rank: impl Fn(&Matrix<S>) -> usize,
) -> Result<CohomologyReport, BimoduleError> {
    let mut ranks = Vec::with_capacity(max_degree + 1);
    let mut cochain_dims = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let delta = coboundary_matrix(res, n, m)?;
        cochain_dims.push(delta.cols());
        ranks.push(rank(&delta));
    }
    let dims = (0..=max_degree)
        .map(|n| cochain_dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
        .collect();
    Ok(CohomologyReport { dims, cochain_dims, ranks })
}

/// Build a resolution and return `dim H^n(A, M)` for `n = 0..=max_degree`.
pub fn cohomology_dims<S: Scalar>(pres: &Presentation<S>, m: &FiniteBimodule<S>, max_degree: usize) -> Result<Vec<usize>, crate::resolution::ResolutionError> {
    let res = crate::resolution::build_resolution(pres, max_degree + 1)?;
    Ok(cohomology(&res, m, max_degree).expect("resolution is long enough").dims)
}

/// Cocycles in `C^n` whose classes form a basis of `H^n`.
pub fn cohomology_representatives<S: Scalar>(res: &Resolution<S>, m: &FiniteBimodule<S>, n: usize) -> Result<Vec<Vec<S>>, BimoduleError> {
    let kernel = coboundary_matrix(res, n, m)?.nullspace();
    let mut span = SparseEchelon::new();
    if n > 0 {
        let prev = coboundary_matrix(res, n - 1, m)?;
        for j in 0..prev.cols() {
            span.insert(sparse(&prev.column(j)));
        }
    }
    Ok(kernel.into_iter().filter(|v| span.insert(sparse(v))).collect())
}

fn sparse<S: Scalar>(v: &[S]) -> BTreeMap<usize, S> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// `Δ^{n+1} Δ^n = 0` for `n < max_degree`.
pub fn coboundaries_square_to_zero<S: Scalar>(res: &Resolution<S>, m: &FiniteBimodule<S>, max_degree: usize) -> Result<bool, BimoduleError> {
    for n in 0..max_degree {
        let a = coboundary_matrix(res, n, m)?;
        let b = coboundary_matrix(res, n + 1, m)?;
        if !b.mul(&a).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Split `M` by a generator acting idempotently on both sides. Components
/// are returned in the order `(1,1), (0,1), (1,0), (0,0)`, where `(i,j)`
/// means `e·u = i·u` and `u·e = j·u`.
pub fn peirce_decompose<S: Scalar>(m: &FiniteBimodule<S>, alphabet: &Alphabet, e: Letter) -> Result<[FiniteBimodule<S>; 4], BimoduleError> {
    let name = alphabet.name(e).to_string();
    let (le, re) = (m.left(e), m.right(e));
    for (side, p) in [(Side::Left, le), (Side::Right, re)] {
        if &p.mul(p) != p {
            return Err(BimoduleError::NotIdempotent { generator: name, side });
        }
    }
    let id = Matrix::identity(m.dim);
    let proj = |on: bool, p: &Matrix<S>| if on { p.clone() } else { id.sub(p) };
    let mut out = Vec::with_capacity(4);
    for (i, j) in [(1u8, 1u8), (0, 1), (1, 0), (0, 0)] {
        let q = proj(i == 1, le).mul(&proj(j == 1, re));
        let basis = column_basis(&q);
        let restrict = |a: &Matrix<S>, g: Letter| -> Result<Matrix<S>, BimoduleError> {
            let k = basis.len();
            let b = Matrix::from_rows((0..m.dim).map(|r| basis.iter().map(|v| v[r].clone()).collect()).collect());
            let mut out = Matrix::zeros(k, k);
            for (col, v) in basis.iter().enumerate() {
                let image = a.apply(v);
                let coords = if k == 0 { Some(Vec::new()) } else { b.solve(&image) };
                let coords = coords.ok_or_else(|| BimoduleError::NotInvariant {
                    component: (i, j),
                    generator: alphabet.name(g).to_string(),
                })?;
                for (row, c) in coords.into_iter().enumerate() {
                    out.set(row, col, c);
                }
            }
            Ok(out)
        };
        let left = alphabet.letters().map(|g| restrict(m.left(g), g)).collect::<Result<Vec<_>, _>>()?;
        let right = alphabet.letters().map(|g| restrict(m.right(g), g)).collect::<Result<Vec<_>, _>>()?;
        out.push(FiniteBimodule { dim: basis.len(), left, right });
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
}

/// Basis of the column space, as columns of `m` itself.
fn column_basis<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    let (_, pivots) = m.rref();
    pivots.into_iter().map(|j| m.column(j)).collect()
}

/// `{"dim": d, "left": {"x": [["0","1"],…]}, "right": {…}}`; absent
/// generators act by zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleJson {
    pub dim: usize,
    #[serde(default)]
    pub left: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub right: BTreeMap<String, Vec<Vec<String>>>,
}

impl BimoduleJson {
    pub fn build<S: Scalar>(&self, alphabet: &Alphabet) -> Result<FiniteBimodule<S>, BimoduleError> {
        let side = |given: &BTreeMap<String, Vec<Vec<String>>>, which: Side| -> Result<Vec<Matrix<S>>, BimoduleError> {
            let mut ms = vec![Matrix::zeros(self.dim, self.dim); alphabet.len()];
            for (name, rows) in given {
                let x = alphabet.letter(name).ok_or_else(|| BimoduleError::UnknownGenerator(name.clone()))?;
                if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                    return Err(BimoduleError::DimensionMismatch { generator: name.clone(), side: which, dim: self.dim });
                }
                let parsed = rows
                    .iter()
                    .map(|r| r.iter().map(|e| S::parse_decimal(e).ok_or_else(|| BimoduleError::BadEntry(e.clone()))).collect())
                    .collect::<Result<Vec<Vec<S>>, _>>()?;
                ms[x.rank()] = if self.dim == 0 { Matrix::zeros(0, 0) } else { Matrix::from_rows(parsed) };
            }
            Ok(ms)
        };
        FiniteBimodule::new(alphabet, self.dim, side(&self.left, Side::Left)?, side(&self.right, Side::Right)?)
    }

    pub fn from_bimodule<S: Scalar>(m: &FiniteBimodule<S>, alphabet: &Alphabet) -> Self {
        let side = |ms: &[Matrix<S>]| {
            alphabet
                .letters()
                .filter(|x| !ms[x.rank()].is_zero())
                .map(|x| {
                    let mat = &ms[x.rank()];
                    let rows = (0..m.dim).map(|i| mat.row(i).iter().map(|v| v.to_string()).collect()).collect();
                    (alphabet.name(x).to_string(), rows)
                })
                .collect()
        };
        BimoduleJson { dim: m.dim, left: side(&m.left), right: side(&m.right) }
    }
}

impl<S: Scalar> FiniteBimodule<S> {
    pub fn from_json_str(s: &str, alphabet: &Alphabet) -> Result<Self, BimoduleError> {
        let json: BimoduleJson = serde_json::from_str(s).map_err(|e| BimoduleError::Json(e.to_string()))?;
        json.build(alphabet)
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> BimoduleJson {
        BimoduleJson::from_bimodule(self, alphabet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_fraction_free;
    use crate::resolution::build_resolution;
    use crate::weyl::w1_presentation;

    fn dual() -> Presentation {
        Presentation::from_strs(&["x"], &[("xx", &[])]).unwrap()
    }

    const DUAL_REG: &str = r#"{"dim": 2, "left": {"x": [["0","0"],["1","0"]]}, "right": {"x": [["0","0"],["1","0"]]}}"#;

    #[test]
    fn validation() {
        let w1 = w1_presentation();
        assert!(validate_bimodule(&FiniteBimodule::trivial(w1.alphabet(), 3), &w1).is_ok());
        let d = dual();
        let reg = FiniteBimodule::<Rational>::from_json_str(DUAL_REG, d.alphabet()).unwrap();
        assert!(validate_bimodule(&reg, &d).is_ok());

        // e acting as the identity with q, p nonzero cannot satisfy qp - pq = e
        let bad = r#"{"dim": 1, "left": {"e": [["1"]], "p": [["1"]], "q": [["1"]]},
                      "right": {"e": [["1"]], "p": [["1"]], "q": [["1"]]}}"#;
        let m = FiniteBimodule::<Rational>::from_json_str(bad, w1.alphabet()).unwrap();
        assert!(matches!(validate_bimodule(&m, &w1), Err(BimoduleError::RelationViolated { .. })));

        // nilpotent x on the left and a non-commuting right action
        let skew = r#"{"dim": 2, "left": {"x": [["0","0"],["1","0"]]}, "right": {"x": [["0","1"],["0","0"]]}}"#;
        let m = FiniteBimodule::<Rational>::from_json_str(skew, d.alphabet()).unwrap();
        assert!(matches!(validate_bimodule(&m, &d), Err(BimoduleError::ActionsDontCommute { .. })));
    }

    #[test]
    fn json_errors() {
        let d = dual();
        assert!(matches!(
            FiniteBimodule::<Rational>::from_json_str(r#"{"dim": 1, "left": {"y": [["0"]]}}"#, d.alphabet()),
            Err(BimoduleError::UnknownGenerator(_))
        ));
        assert!(matches!(
            FiniteBimodule::<Rational>::from_json_str(r#"{"dim": 2, "left": {"x": [["0"]]}}"#, d.alphabet()),
            Err(BimoduleError::DimensionMismatch { .. })
        ));
        let reg = FiniteBimodule::<Rational>::from_json_str(DUAL_REG, d.alphabet()).unwrap();
        assert_eq!(reg.to_json(d.alphabet()).build::<Rational>(d.alphabet()).unwrap(), reg);
    }

    #[test]
    fn w1_trivial_coboundary_keeps_coefficient_free_terms() {
        let w1 = w1_presentation();
        let res = build_resolution(&w1, 4).unwrap();
        let m = FiniteBimodule::trivial(w1.alphabet(), 1);
        let delta = coboundary_matrix(&res, 3, &m).unwrap();
        let rows = res.slice(4).unwrap().basis();
        let cols = res.slice(3).unwrap().basis();
        let chain = |s: &str| AnickChain::parse(s, w1.alphabet()).unwrap();
        let i = rows.iter().position(|c| *c == chain("[q|e|e|p]")).unwrap();
        let j = cols.iter().position(|c| *c == chain("[q|e|p]")).unwrap();
        let row: Vec<String> = delta.row(i).iter().map(|v| v.to_string()).collect();
        let mut expected = vec!["0".to_string(); cols.len()];
        expected[j] = "-1".into();
        assert_eq!(row, expected);
    }

    #[test]
    fn empty_chain_sets_give_zero_row_matrices() {
        let h = crate::weyl::heisenberg_presentation();
        let res = build_resolution(&h, 4).unwrap();
        let m = FiniteBimodule::trivial(h.alphabet(), 2);
        let delta = coboundary_matrix(&res, 3, &m).unwrap();
        assert_eq!((delta.rows(), delta.cols()), (0, 2));
    }

    #[test]
    fn dual_numbers_regular() {
        let d = dual();
        let reg = FiniteBimodule::<Rational>::from_json_str(DUAL_REG, d.alphabet()).unwrap();
        let res = build_resolution(&d, 5).unwrap();
        let report = cohomology(&res, &reg, 4).unwrap();
        // centre of k[x]/(x^2) is the whole algebra
        assert_eq!(report.dims[0], 2);
        let ff = cohomology_with(&res, &reg, 4, rank_fraction_free).unwrap();
        assert_eq!(report, ff);
        let reversed = cohomology(&res.with_reversed_bases(), &reg, 4).unwrap();
        assert_eq!(report.dims, reversed.dims);
        assert!(coboundaries_square_to_zero(&res, &reg, 4).unwrap());
        for n in 0..=3 {
            assert_eq!(cohomology_representatives(&res, &reg, n).unwrap().len(), report.dims[n]);
        }
        // derivations of k[x]/(x^2) into itself: x -> a x; inner ones vanish
        let delta1 = coboundary_matrix(&res, 1, &reg).unwrap();
        assert_eq!((delta1.rows(), delta1.cols()), (2, 2));
    }

    #[test]
    fn w1_trivial_modules() {
        let w1 = w1_presentation();
        let res = build_resolution(&w1, 4).unwrap();
        for d in 1..=3 {
            let m = FiniteBimodule::trivial(w1.alphabet(), d);
            let report = cohomology(&res, &m, 3).unwrap();
            assert_eq!(report.dims[3], 0, "dim {d}");
        }
    }

    #[test]
    fn peirce() {
        let w1 = w1_presentation();
        let e = w1.letter("e").unwrap();
        let parts = peirce_decompose(&FiniteBimodule::<Rational>::trivial(w1.alphabet(), 2), w1.alphabet(), e).unwrap();
        assert_eq!(parts.iter().map(FiniteBimodule::dim).collect::<Vec<_>>(), [0, 0, 0, 2]);

        let d = dual();
        let reg = FiniteBimodule::<Rational>::from_json_str(DUAL_REG, d.alphabet()).unwrap();
        assert!(matches!(
            peirce_decompose(&reg, d.alphabet(), d.letter("x").unwrap()),
            Err(BimoduleError::NotIdempotent { .. })
        ));

        let idem = Presentation::from_strs(&["e"], &[("ee", &[("1", "e")])]).unwrap();
        let unital = FiniteBimodule::<Rational>::from_json_str(r#"{"dim": 1, "left": {"e": [["1"]]}, "right": {"e": [["1"]]}}"#, idem.alphabet()).unwrap();
        let left_only = FiniteBimodule::<Rational>::from_json_str(r#"{"dim": 1, "left": {"e": [["1"]]}}"#, idem.alphabet()).unwrap();
        let sum = FiniteBimodule::trivial(idem.alphabet(), 2).direct_sum(&unital).direct_sum(&left_only);
        assert!(validate_bimodule(&sum, &idem).is_ok());
        let parts = peirce_decompose(&sum, idem.alphabet(), idem.letter("e").unwrap()).unwrap();
        assert_eq!(parts.iter().map(FiniteBimodule::dim).collect::<Vec<_>>(), [1, 0, 1, 2]);
        for p in &parts {
            assert!(validate_bimodule(p, &idem).is_ok());
        }
    }
}

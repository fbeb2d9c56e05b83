//! Brute-force Hochschild cohomology of a finite-dimensional algebra through
//! the normalized bar complex `Hom(A^{⊗n}, M)`. Nothing here uses chains or
//! the Morse matching.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::freealg::{Presentation, Word};
use crate::hochschild::FiniteBimodule;
use crate::linalg::{Matrix, SparseEchelon};
use crate::{Rational, Scalar};

/// Default bound on the number of rows of a single coboundary matrix.
pub const DEFAULT_ROW_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("the algebra is infinite dimensional (normal words of length {0} exist)")]
    InfiniteDimensional(usize),
    #[error("coboundary matrix would have {rows} rows, above the cap of {cap}")]
    ResourceLimit { rows: u128, cap: usize },
    #[error("structure constants are not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
}

/// Basis of `A` (nonempty normal words) with structure constants.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra<S = Rational> {
    basis: Vec<Word>,
    index: BTreeMap<Word, usize>,
    /// `products[i][j]` is `b_i b_j` as sparse coordinates.
    products: Vec<Vec<Vec<(usize, S)>>>,
}

/// Enumerate normal words by length. The normal words form a regular
/// language whose states are the normal words of length `m − 1` (`m` the
/// longest obstruction); a normal word long enough to revisit a state can be
/// pumped, so finding one proves infinite dimension.
pub fn finite_basis<S: Scalar>(pres: &Presentation<S>) -> Result<FiniteAlgebra<S>, OracleError> {
    let m = pres.max_obstruction_len().max(2);
    let states = pres.normal_words_of_length(m - 1).len();
    let pump_len = states + m - 1;
    let mut basis = Vec::new();
    for len in 1.. {
        let words = pres.normal_words_of_length(len);
        if words.is_empty() {
            break;
        }
        if len >= pump_len {
            return Err(OracleError::InfiniteDimensional(len));
        }
        basis.extend(words);
    }
    let index: BTreeMap<Word, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let products = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| pres.multiply_words(a, b).iter().map(|(w, c)| (index[w], c.clone())).collect())
                .collect()
        })
        .collect();
    Ok(FiniteAlgebra { basis, index, products })
}

impl<S: Scalar> FiniteAlgebra<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.products[i][j]
    }

    fn mul_vec(&self, a: &BTreeMap<usize, S>, j: usize) -> BTreeMap<usize, S> {
        let mut out: BTreeMap<usize, S> = BTreeMap::new();
        for (i, c) in a {
            for (k, d) in &self.products[*i][j] {
                let v = out.remove(k).unwrap_or_else(S::zero) + c.clone() * d.clone();
                if !v.is_zero() {
                    out.insert(*k, v);
                }
            }
        }
        out
    }

    fn vec_mul(&self, i: usize, b: &BTreeMap<usize, S>) -> BTreeMap<usize, S> {
        let mut out: BTreeMap<usize, S> = BTreeMap::new();
        for (j, c) in b {
            for (k, d) in &self.products[i][*j] {
                let v = out.remove(k).unwrap_or_else(S::zero) + c.clone() * d.clone();
                if !v.is_zero() {
                    out.insert(*k, v);
                }
            }
        }
        out
    }

    /// `(b_i b_j) b_k = b_i (b_j b_k)` for all basis triples.
    pub fn check_associative(&self, show: impl Fn(&Word) -> String) -> Result<(), OracleError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij: BTreeMap<usize, S> = self.products[i][j].iter().cloned().collect();
                for k in 0..n {
                    let jk: BTreeMap<usize, S> = self.products[j][k].iter().cloned().collect();
                    if self.mul_vec(&ij, k) != self.vec_mul(i, &jk) {
                        return Err(OracleError::NotAssociative(
                            show(&self.basis[i]),
                            show(&self.basis[j]),
                            show(&self.basis[k]),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Λ = k·1 ⊕ A` as a bimodule over itself; basis `1, b_0, b_1, …`.
    pub fn regular_bimodule(&self, pres: &Presentation<S>) -> FiniteBimodule<S> {
        let d = self.dim() + 1;
        let coords = |w: &Word| -> Vec<(usize, S)> {
            if w.is_empty() {
                return vec![(0, S::one())];
            }
            pres.normal_form_word(w).iter().map(|(u, c)| (self.index[u] + 1, c.clone())).collect()
        };
        let action = |left: bool| -> Vec<Matrix<S>> {
            pres.alphabet()
                .letters()
                .map(|x| {
                    let x = Word::letter(x);
                    let mut m = Matrix::zeros(d, d);
                    let cols = std::iter::once(Word::empty()).chain(self.basis.iter().cloned());
                    for (j, b) in cols.enumerate() {
                        let w = if left { x.concat(&b) } else { b.concat(&x) };
                        for (i, c) in coords(&w) {
                            m.add_at(i, j, c);
                        }
                    }
                    m
                })
                .collect()
        };
        FiniteBimodule::new(pres.alphabet(), d, action(true), action(false)).expect("square action matrices")
    }
}

/// Sparse rows of `Δ^n : Hom(A^{⊗n}, M) → Hom(A^{⊗(n+1)}, M)`. Coordinates
/// are tuple-major (tuples in lexicographic order of basis indices), then
/// the coordinate of `M`.
pub fn bar_coboundary_rows<S: Scalar>(alg: &FiniteAlgebra<S>, m: &FiniteBimodule<S>, n: usize) -> Vec<BTreeMap<usize, S>> {
    let a = alg.dim();
    let d = m.dim();
    let left: Vec<Matrix<S>> = alg.basis.iter().map(|w| m.left_word(w)).collect();
    let right: Vec<Matrix<S>> = alg.basis.iter().map(|w| m.right_word(w)).collect();
    let tuple_index = |t: &[usize]| t.iter().fold(0usize, |acc, &i| acc * a + i);
    let sign = |k: usize| if k.is_multiple_of(2) { S::one() } else { -S::one() };
    let rows_total = a.pow(n as u32 + 1);
    let mut rows = Vec::with_capacity(rows_total * d);
    let mut t = vec![0usize; n + 1];
    for _ in 0..rows_total {
        let mut block: BTreeMap<usize, Matrix<S>> = BTreeMap::new();
        let mut add = |col: usize, mat: Matrix<S>| {
            let e = block.entry(col).or_insert_with(|| Matrix::zeros(d, d));
            *e = e.add(&mat);
        };
        add(tuple_index(&t[1..]), left[t[0]].clone());
        for i in 0..n {
            for (k, c) in alg.product(t[i], t[i + 1]) {
                let mut u = Vec::with_capacity(n);
                u.extend_from_slice(&t[..i]);
                u.push(*k);
                u.extend_from_slice(&t[i + 2..]);
                add(tuple_index(&u), Matrix::identity(d).scaled(&(sign(i + 1) * c.clone())));
            }
        }
        add(tuple_index(&t[..n]), right[t[n]].scaled(&sign(n + 1)));
        for alpha in 0..d {
            let mut row = BTreeMap::new();
            for (col, mat) in &block {
                for beta in 0..d {
                    let v = mat.get(alpha, beta);
                    if !v.is_zero() {
                        row.insert(col * d + beta, v.clone());
                    }
                }
            }
            rows.push(row);
        }
        // next tuple, lexicographic
        for pos in (0..=n).rev() {
            t[pos] += 1;
            if t[pos] < a {
                break;
            }
            t[pos] = 0;
        }
    }
    rows
}

/// `dim H^n(A, M)` for `n = 0..=max_degree` from the normalized bar complex.
pub fn bar_cohomology<S: Scalar>(
    alg: &FiniteAlgebra<S>,
    m: &FiniteBimodule<S>,
    max_degree: usize,
    row_cap: usize,
) -> Result<Vec<usize>, OracleError> {
    let a = alg.dim() as u128;
    let rows = a.pow(max_degree as u32 + 1) * m.dim() as u128;
    if rows > row_cap as u128 {
        return Err(OracleError::ResourceLimit { rows, cap: row_cap });
    }
    let ranks: Vec<usize> = (0..=max_degree)
        .map(|n| {
            let mut e = SparseEchelon::new();
            for row in bar_coboundary_rows(alg, m, n) {
                e.insert(row);
            }
            e.rank()
        })
        .collect();
    Ok((0..=max_degree)
        .map(|n| alg.dim().pow(n as u32) * m.dim() - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::w1_presentation;

    fn dense<S: Scalar>(rows: &[BTreeMap<usize, S>], cols: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    fn truncated(k: usize) -> Presentation {
        let lhs = "x".repeat(k);
        Presentation::from_strs(&["x"], &[(lhs.as_str(), &[])]).unwrap()
    }

    #[test]
    fn bases() {
        assert_eq!(finite_basis(&truncated(2)).unwrap().dim(), 1);
        let cubic = truncated(3);
        let alg = finite_basis(&cubic).unwrap();
        assert_eq!(alg.basis(), [cubic.word("x"), cubic.word("xx")]);
        assert!(matches!(finite_basis(&w1_presentation()), Err(OracleError::InfiniteDimensional(_))));
    }

    #[test]
    fn structure_constants_match_normal_forms() {
        let cubic = truncated(3);
        let alg = finite_basis(&cubic).unwrap();
        alg.check_associative(|w| cubic.format_word(w)).unwrap();
        for (i, a) in alg.basis().iter().enumerate() {
            for (j, b) in alg.basis().iter().enumerate() {
                let nf = cubic.multiply_words(a, b);
                let got: Vec<(Word, Rational)> =
                    alg.product(i, j).iter().map(|(k, c)| (alg.basis()[*k].clone(), c.clone())).collect();
                let want: Vec<(Word, Rational)> = nf.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn dual_numbers_regular_centre() {
        let dual = truncated(2);
        let alg = finite_basis(&dual).unwrap();
        let reg = alg.regular_bimodule(&dual);
        crate::hochschild::validate_bimodule(&reg, &dual).unwrap();
        let dims = bar_cohomology(&alg, &reg, 3, DEFAULT_ROW_CAP).unwrap();
        assert_eq!(dims[0], 2);
    }

    #[test]
    fn bar_coboundaries_square_to_zero() {
        let cubic = truncated(3);
        let alg = finite_basis(&cubic).unwrap();
        let reg = alg.regular_bimodule(&cubic);
        for n in 0..3 {
            let d = reg.dim();
            let a = dense(&bar_coboundary_rows(&alg, &reg, n), alg.dim().pow(n as u32) * d);
            let b = dense(&bar_coboundary_rows(&alg, &reg, n + 1), alg.dim().pow(n as u32 + 1) * d);
            assert!(b.mul(&a).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn resource_cap() {
        let cubic = truncated(3);
        let alg = finite_basis(&cubic).unwrap();
        let m = FiniteBimodule::trivial(cubic.alphabet(), 1);
        assert!(matches!(bar_cohomology(&alg, &m, 10, 1000), Err(OracleError::ResourceLimit { .. })));
    }
}

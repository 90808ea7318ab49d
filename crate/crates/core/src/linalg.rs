//! Small dense matrices over either algebra, with elimination restricted to
//! unit pivots.
//!
//! Over a field every nonzero entry is a unit, so unit-pivot elimination
//! computes exact rank. Over the ring a matrix can be invertible while no
//! single entry is a unit, so elimination that stalls on a nonzero non-unit
//! residue reports [`RankCertificate::Inconclusive`] instead of guessing.
//! All arithmetic is exact; there is no floating point anywhere.

use crate::algebra::{Algebra, Symbol};
use crate::construction::{CodeError, CodeParams, CodeVariant};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("no unit pivot available; the system is singular for unit-pivot elimination")]
    SingularSystem,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Row-major dense matrix of symbols from one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Symbol>,
    algebra: Algebra,
}

impl AlgMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Symbol>, algebra: Algebra) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        assert!(
            entries.iter().all(|s| s.algebra() == algebra),
            "all entries must come from the matrix algebra"
        );
        AlgMatrix {
            rows,
            cols,
            entries,
            algebra,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        algebra: Algebra,
        mut f: impl FnMut(usize, usize) -> Symbol,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self::new(rows, cols, entries, algebra)
    }

    pub fn identity(n: usize, algebra: Algebra) -> Self {
        Self::from_fn(n, n, algebra, |r, c| {
            if r == c {
                algebra.one()
            } else {
                algebra.zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn at(&self, r: usize, c: usize) -> &Symbol {
        &self.entries[r * self.cols + c]
    }

    /// The submatrix keeping only the given columns, in the given order.
    pub fn column_submatrix(&self, cols: &[usize]) -> AlgMatrix {
        Self::from_fn(self.rows, cols.len(), self.algebra, |r, c| {
            *self.at(r, cols[c])
        })
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Symbol]) -> Vec<Symbol> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.algebra.zero();
                for c in 0..self.cols {
                    acc += self.at(r, c).mul(&v[c]);
                }
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankCertificate {
    /// Elimination found `cols` unit pivots: the columns are independent.
    FullColumnRank,
    /// Elimination terminated with an all-zero residue short of `cols`
    /// pivots: the columns are dependent.
    Deficient,
    /// Ring only: elimination stalled on a nonzero residue with no unit
    /// entry. No verdict is possible from unit pivots alone.
    Inconclusive,
}

/// Gaussian elimination choosing only unit pivots (searched over the whole
/// remaining submatrix). Returns the number of pivots found and the verdict.
pub fn rank_via_unit_pivots(m: &AlgMatrix) -> (usize, RankCertificate) {
    let mut work: Vec<Vec<Symbol>> = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| *m.at(r, c)).collect())
        .collect();
    let mut col_perm: Vec<usize> = (0..m.cols).collect();
    let mut piv = 0;

    while piv < m.rows.min(m.cols) {
        let found = find_unit_pivot(&work, &col_perm, piv, m.rows, m.cols);
        match found {
            Some((pr, pc)) => {
                work.swap(piv, pr);
                col_perm.swap(piv, pc);
                eliminate_below(&mut work, &col_perm, piv, m.rows, m.cols);
                piv += 1;
            }
            None => {
                let residue_zero =
                    (piv..m.rows).all(|r| (piv..m.cols).all(|c| work[r][col_perm[c]].is_zero()));
                let cert = if residue_zero {
                    deficiency_cert(piv, m.cols)
                } else {
                    // Over a field every nonzero entry is a unit, so a stall
                    // with nonzero residue can only happen over the ring.
                    RankCertificate::Inconclusive
                };
                return (piv, cert);
            }
        }
    }
    (piv, deficiency_cert(piv, m.cols))
}

fn deficiency_cert(rank: usize, cols: usize) -> RankCertificate {
    if rank == cols {
        RankCertificate::FullColumnRank
    } else {
        RankCertificate::Deficient
    }
}

fn find_unit_pivot(
    work: &[Vec<Symbol>],
    col_perm: &[usize],
    piv: usize,
    rows: usize,
    cols: usize,
) -> Option<(usize, usize)> {
    for r in piv..rows {
        for c in piv..cols {
            if work[r][col_perm[c]].is_unit() {
                return Some((r, c));
            }
        }
    }
    None
}

fn eliminate_below(
    work: &mut [Vec<Symbol>],
    col_perm: &[usize],
    piv: usize,
    rows: usize,
    cols: usize,
) {
    let pc = col_perm[piv];
    let inv = work[piv][pc].inv().expect("pivot is a unit");
    for r in piv + 1..rows {
        if work[r][pc].is_zero() {
            continue;
        }
        let factor = work[r][pc].mul(&inv);
        for c in piv..cols {
            let cc = col_perm[c];
            let sub = factor.mul(&work[piv][cc]);
            work[r][cc] += sub;
        }
    }
}

/// Solve the square system `M x = rhs` by unit-pivot elimination and back
/// substitution. Exact over both algebras whenever it succeeds; a step with
/// no unit pivot yields [`LinalgError::SingularSystem`] (during decoding
/// that signals an uncorrectable erasure pattern).
pub fn solve_with_unit_pivots(m: &AlgMatrix, rhs: &[Symbol]) -> Result<Vec<Symbol>, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::DimensionMismatch(format!(
            "matrix is {}x{}, expected square",
            m.rows, m.cols
        )));
    }
    if rhs.len() != m.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "rhs length {} != {} rows",
            rhs.len(),
            m.rows
        )));
    }
    let n = m.rows;
    let alg = m.algebra;
    let mut work: Vec<Vec<Symbol>> = (0..n)
        .map(|r| (0..n).map(|c| *m.at(r, c)).collect())
        .collect();
    let mut b: Vec<Symbol> = rhs.to_vec();
    let mut col_perm: Vec<usize> = (0..n).collect();

    for piv in 0..n {
        let (pr, pc) =
            find_unit_pivot(&work, &col_perm, piv, n, n).ok_or(LinalgError::SingularSystem)?;
        work.swap(piv, pr);
        b.swap(piv, pr);
        col_perm.swap(piv, pc);

        let pcol = col_perm[piv];
        let inv = work[piv][pcol].inv().expect("pivot is a unit");
        for r in piv + 1..n {
            if work[r][pcol].is_zero() {
                continue;
            }
            let factor = work[r][pcol].mul(&inv);
            for c in piv..n {
                let cc = col_perm[c];
                let sub = factor.mul(&work[piv][cc]);
                work[r][cc] += sub;
            }
            let sub = factor.mul(&b[piv]);
            b[r] += sub;
        }
    }

    // Back substitution in permuted column order.
    let mut y = vec![alg.zero(); n];
    for piv in (0..n).rev() {
        let mut acc = b[piv];
        for c in piv + 1..n {
            acc += work[piv][col_perm[c]].mul(&y[c]);
        }
        let inv = work[piv][col_perm[piv]].inv().expect("pivot is a unit");
        y[piv] = acc.mul(&inv);
    }
    let mut x = vec![alg.zero(); n];
    for (k, &c) in col_perm.iter().enumerate() {
        x[c] = y[k];
    }
    Ok(x)
}

/// Determinant by cofactor expansion; the correctability checks only need
/// sizes up to 4.
pub(crate) fn det_cofactor(m: &AlgMatrix) -> Symbol {
    assert_eq!(m.rows, m.cols, "determinant of a square matrix");
    let n = m.rows;
    match n {
        0 => m.algebra.one(),
        1 => *m.at(0, 0),
        _ => {
            // Characteristic 2: every cofactor sign is +.
            let mut acc = m.algebra.zero();
            for c in 0..n {
                if m.at(0, c).is_zero() {
                    continue;
                }
                let minor = AlgMatrix::from_fn(n - 1, n - 1, m.algebra, |r2, c2| {
                    let cc = if c2 < c { c2 } else { c2 + 1 };
                    *m.at(r2 + 1, cc)
                });
                acc += m.at(0, c).mul(&det_cofactor(&minor));
            }
            acc
        }
    }
}

/// Check that the 3x3 correctability determinant for three erasures in row
/// `i` at columns `j0 < j1 < j2` is a unit.
///
/// The determinant is computed by direct cofactor expansion and asserted
/// equal to its closed form: a power of `alpha` times the product of the
/// pairwise differences `alpha^jb + alpha^ja` (a Vandermonde determinant).
pub fn det3_vandermonde_check(
    i: usize,
    j0: usize,
    j1: usize,
    j2: usize,
    params: &CodeParams,
) -> Result<bool, CodeError> {
    let n = params.n();
    if !(j0 < j1 && j1 < j2 && j2 < n) {
        return Err(CodeError::ParameterViolation(format!(
            "column indices must satisfy j0 < j1 < j2 < n, got ({j0}, {j1}, {j2}) with n = {n}"
        )));
    }
    if i >= params.m() {
        return Err(CodeError::ParameterViolation(format!(
            "row index {i} out of range for m = {}",
            params.m()
        )));
    }
    let alg = params.algebra();
    let js = [j0, j1, j2];
    let mat = AlgMatrix::from_fn(3, 3, alg, |r, c| {
        let (g1, g2) = params.global_exponents(i, js[c]);
        match r {
            0 => alg.one(),
            1 => alg.alpha_pow(g1),
            _ => alg.alpha_pow(g2),
        }
    });
    let det = det_cofactor(&mat);

    let power = match params.variant() {
        CodeVariant::Sd => 3 * (i * n) as i64 - (j0 + j1 + j2) as i64,
        CodeVariant::Pmds => 6 * (i * n) as i64 - (j0 + j1 + j2) as i64,
    };
    let mut closed = alg.alpha_pow_i(power);
    for (a, b) in [(j0, j1), (j0, j2), (j1, j2)] {
        let diff = alg.alpha_pow_i(a as i64).add(&alg.alpha_pow_i(b as i64));
        closed = closed.mul(&diff);
    }
    assert_eq!(
        det, closed,
        "direct 3x3 expansion must match the Vandermonde closed form"
    );
    Ok(det.is_unit())
}

//! Construction of the `(m+2) x mn` parity-check matrices.
//!
//! Codewords are `m x n` arrays flattened row-wise. Column `in + j` of the
//! parity-check matrix (block `i`, offset `j`) is the indicator `e_i` on its
//! first `m` coordinates, followed by two powers of `alpha`:
//!
//! * SD construction:   `alpha^(in + j)`  over `alpha^(2in - j)`
//! * PMDS construction: `alpha^(2in + j)` over `alpha^(4in - j)`
//!
//! Negative shifts reduce modulo the generator order, so the second global
//! row of block 0 reads `1, alpha^(ord-1), alpha^(ord-2), ...`.

use crate::algebra::{Algebra, Exponent, Symbol};
use crate::linalg::AlgMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
    #[error("data length {got} does not match code dimension {expected}")]
    DataLength { expected: usize, got: usize },
    #[error("symbol does not belong to the code's algebra")]
    ForeignSymbol,
}

/// Which of the two constructions a code instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeVariant {
    /// Sector-disk guarantee; requires `mn <= order(alpha)`.
    Sd,
    /// Partial-MDS guarantee; requires `2mn <= order(alpha)`.
    Pmds,
}

impl std::fmt::Display for CodeVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CodeVariant::Sd => write!(f, "sd"),
            CodeVariant::Pmds => write!(f, "pmds"),
        }
    }
}

/// The full identity of a code instance: stripe shape, construction variant
/// and symbol algebra. The code has length `mn` and dimension `m(n-1) - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    m: usize,
    n: usize,
    variant: CodeVariant,
    algebra: Algebra,
}

impl CodeParams {
    pub fn new(
        m: usize,
        n: usize,
        variant: CodeVariant,
        algebra: Algebra,
    ) -> Result<Self, CodeError> {
        if m < 1 {
            return Err(CodeError::ParameterViolation("m must be at least 1".into()));
        }
        if n < 2 {
            return Err(CodeError::ParameterViolation("n must be at least 2".into()));
        }
        let order = algebra.order() as usize;
        let needed = match variant {
            CodeVariant::Sd => m * n,
            CodeVariant::Pmds => 2 * m * n,
        };
        if needed > order {
            return Err(CodeError::ParameterViolation(format!(
                "variant {variant} requires {needed} <= order(alpha) = {order} for m = {m}, n = {n}"
            )));
        }
        Ok(CodeParams {
            m,
            n,
            variant,
            algebra,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> CodeVariant {
        self.variant
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    /// Code length `mn`.
    pub fn len(&self) -> usize {
        self.m * self.n
    }

    /// Exponents of the two global-parity entries at block `i`, offset `j`,
    /// reduced modulo the generator order.
    pub fn global_exponents(&self, i: usize, j: usize) -> (Exponent, Exponent) {
        debug_assert!(i < self.m && j < self.n);
        let (i, j, n) = (i as i64, j as i64, self.n as i64);
        let (g1, g2) = match self.variant {
            CodeVariant::Sd => (i * n + j, 2 * i * n - j),
            CodeVariant::Pmds => (2 * i * n + j, 4 * i * n - j),
        };
        (self.algebra.exponent(g1), self.algebra.exponent(g2))
    }
}

/// The built `(m+2) x mn` parity-check matrix together with the exponent
/// tables that generated its two global rows. The tables are
/// algebra-independent, which makes golden-matrix comparisons exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    params: CodeParams,
    matrix: AlgMatrix,
    g1: Vec<Exponent>,
    g2: Vec<Exponent>,
}

impl ParityCheckMatrix {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn matrix(&self) -> &AlgMatrix {
        &self.matrix
    }

    /// Exponent of the row-`m` entry at block `i`, offset `j`.
    pub fn g1(&self, i: usize, j: usize) -> Exponent {
        self.g1[i * self.params.n + j]
    }

    /// Exponent of the row-`m+1` entry at block `i`, offset `j`.
    pub fn g2(&self, i: usize, j: usize) -> Exponent {
        self.g2[i * self.params.n + j]
    }

    /// Submatrix of the columns covering the given flattened cell indices.
    pub fn column_submatrix(&self, columns: &[usize]) -> AlgMatrix {
        self.matrix.column_submatrix(columns)
    }
}

/// Build the parity-check matrix for validated parameters. Deterministic:
/// identical parameters yield a bit-identical matrix.
pub fn build_parity_check(params: &CodeParams) -> ParityCheckMatrix {
    let alg = params.algebra();
    let (m, n) = (params.m(), params.n());
    let mut g1 = Vec::with_capacity(m * n);
    let mut g2 = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let (e1, e2) = params.global_exponents(i, j);
            g1.push(e1);
            g2.push(e2);
        }
    }
    let matrix = AlgMatrix::from_fn(m + 2, m * n, alg, |r, c| {
        let block = c / n;
        if r < m {
            if r == block {
                alg.one()
            } else {
                alg.zero()
            }
        } else if r == m {
            alg.alpha_pow(g1[c])
        } else {
            alg.alpha_pow(g2[c])
        }
    });
    ParityCheckMatrix {
        params: *params,
        matrix,
        g1,
        g2,
    }
}

/// The `n` columns of block `i`, each of length `m + 2`.
pub fn effective_block(params: &CodeParams, i: usize) -> Vec<Vec<Symbol>> {
    assert!(i < params.m(), "block index out of range");
    let alg = params.algebra();
    (0..params.n())
        .map(|j| {
            let (g1, g2) = params.global_exponents(i, j);
            let mut col = Vec::with_capacity(params.m() + 2);
            for r in 0..params.m() {
                col.push(if r == i { alg.one() } else { alg.zero() });
            }
            col.push(alg.alpha_pow(g1));
            col.push(alg.alpha_pow(g2));
            col
        })
        .collect()
}

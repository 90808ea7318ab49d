//! Systematic encoding and structured erasure decoding.
//!
//! Decoding runs in two stages. Stage 1 recovers every row with a single
//! erasure from its row parity. Stage 2 updates the two global syndromes and
//! solves the remaining heavy rows:
//!
//! * one row with two erasures: a 2x2 system from the row parity and the
//!   first global row (always a unit Vandermonde determinant);
//! * one row with three erasures: the 3x3 system whose eliminated pivots
//!   have the guaranteed-unit shape `alpha^u (1 + alpha^v)`;
//! * two rows with two erasures each: substitute the two row parities and
//!   solve the residual 2x2 system; when its determinant is not a unit the
//!   pattern is uncorrectable (this arises only for the SD construction on
//!   patterns outside its guarantee).
//!
//! Encoding places data into the non-parity cells and runs the decoder with
//! the parity cells marked erased; that pattern (three erasures in row 0,
//! one in every other row) is always correctable, so encoding never fails.

use crate::algebra::Symbol;
use crate::construction::{CodeError, CodeParams};
use std::collections::BTreeSet;
use thiserror::Error;

/// A set of erased (row, column) positions within one stripe.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ErasurePattern {
    cells: BTreeSet<(usize, usize)>,
}

impl ErasurePattern {
    /// Build a pattern, rejecting out-of-range and duplicate coordinates.
    pub fn new(
        cells: impl IntoIterator<Item = (usize, usize)>,
        m: usize,
        n: usize,
    ) -> Result<Self, CodeError> {
        let mut set = BTreeSet::new();
        for (r, c) in cells {
            if r >= m || c >= n {
                return Err(CodeError::ParameterViolation(format!(
                    "erasure ({r}, {c}) out of range for an {m}x{n} stripe"
                )));
            }
            if !set.insert((r, c)) {
                return Err(CodeError::ParameterViolation(format!(
                    "duplicate erasure coordinate ({r}, {c})"
                )));
            }
        }
        Ok(ErasurePattern { cells: set })
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().copied()
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.cells.contains(&(r, c))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Erasure count per row, `e_0 .. e_(m-1)`.
    pub fn row_counts(&self, m: usize) -> Vec<usize> {
        let mut counts = vec![0; m];
        for &(r, _) in &self.cells {
            counts[r] += 1;
        }
        counts
    }

    /// The erased columns of one row, ascending.
    pub fn row_cols(&self, row: usize) -> Vec<usize> {
        self.cells
            .iter()
            .filter(|&&(r, _)| r == row)
            .map(|&(_, c)| c)
            .collect()
    }
}

impl std::fmt::Display for ErasurePattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (r, c) in &self.cells {
            if !first {
                write!(f, ";")?;
            }
            write!(f, "{r},{c}")?;
            first = false;
        }
        Ok(())
    }
}

/// Structural classification of an erasure pattern, following the per-row
/// erasure counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Every row has at most one erasure: plain row parity suffices.
    RowParityOnly,
    /// Exactly one row with two or three erasures, at most one elsewhere.
    OneHeavyRow { row: usize, cols: Vec<usize> },
    /// Exactly two rows with two erasures each, at most one elsewhere.
    TwoHeavyRows {
        first: (usize, [usize; 2]),
        second: (usize, [usize; 2]),
    },
    /// Outside what two global parities can repair: a row with four or more
    /// erasures, a three-erasure row next to another heavy row, or three or
    /// more heavy rows.
    BeyondCapability,
}

pub fn classify(pattern: &ErasurePattern, params: &CodeParams) -> Classification {
    let counts = pattern.row_counts(params.m());
    let heavy: Vec<usize> = (0..params.m()).filter(|&r| counts[r] >= 2).collect();
    if counts.iter().any(|&e| e >= 4) {
        return Classification::BeyondCapability;
    }
    match heavy.len() {
        0 => Classification::RowParityOnly,
        1 => Classification::OneHeavyRow {
            row: heavy[0],
            cols: pattern.row_cols(heavy[0]),
        },
        2 => {
            if counts[heavy[0]] == 2 && counts[heavy[1]] == 2 {
                let a = pattern.row_cols(heavy[0]);
                let b = pattern.row_cols(heavy[1]);
                Classification::TwoHeavyRows {
                    first: (heavy[0], [a[0], a[1]]),
                    second: (heavy[1], [b[0], b[1]]),
                }
            } else {
                Classification::BeyondCapability
            }
        }
        _ => Classification::BeyondCapability,
    }
}

/// The designated parity cells of the systematic layout: column `n-1` of
/// every row plus `(0, n-3)` and `(0, n-2)`. Three erasures in row 0 and one
/// in every other row is always correctable, so the encoding system is
/// always solvable.
pub fn parity_positions(params: &CodeParams) -> Result<ErasurePattern, CodeError> {
    let (m, n) = (params.m(), params.n());
    let min_n = if m == 1 { 4 } else { 3 };
    if n < min_n {
        return Err(CodeError::ParameterViolation(format!(
            "n = {n} is too small to host three parity cells in row 0 (need n >= {min_n} for m = {m})"
        )));
    }
    let mut cells = vec![(0, n - 3), (0, n - 2)];
    for r in 0..m {
        cells.push((r, n - 1));
    }
    ErasurePattern::new(cells, m, n)
}

/// One `m x n` stripe: a grid of symbols plus an erasure mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripeArray {
    params: CodeParams,
    cells: Vec<Symbol>,
    erased: Vec<bool>,
}

impl StripeArray {
    pub fn zero(params: CodeParams) -> Self {
        let len = params.len();
        StripeArray {
            params,
            cells: vec![params.algebra().zero(); len],
            erased: vec![false; len],
        }
    }

    pub fn from_cells(params: CodeParams, cells: Vec<Symbol>) -> Result<Self, CodeError> {
        if cells.len() != params.len() {
            return Err(CodeError::ParameterViolation(format!(
                "expected {} cells, got {}",
                params.len(),
                cells.len()
            )));
        }
        if cells.iter().any(|s| s.algebra() != params.algebra()) {
            return Err(CodeError::ForeignSymbol);
        }
        Ok(StripeArray {
            params,
            cells,
            erased: vec![false; params.len()],
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn cell(&self, r: usize, c: usize) -> &Symbol {
        &self.cells[r * self.params.n() + c]
    }

    pub fn set_cell(&mut self, r: usize, c: usize, s: Symbol) {
        assert_eq!(s.algebra(), self.params.algebra(), "foreign symbol");
        self.cells[r * self.params.n() + c] = s;
    }

    pub fn is_erased(&self, r: usize, c: usize) -> bool {
        self.erased[r * self.params.n() + c]
    }

    /// Mark cells erased. The stored content of an erased cell is ignored by
    /// decoding, never read.
    pub fn erase(&mut self, pattern: &ErasurePattern) {
        for (r, c) in pattern.cells() {
            self.erased[r * self.params.n() + c] = true;
        }
    }

    /// Convenience wrapper validating coordinates first.
    pub fn erase_cells(
        &mut self,
        cells: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(), CodeError> {
        let pattern = ErasurePattern::new(cells, self.params.m(), self.params.n())?;
        self.erase(&pattern);
        Ok(())
    }

    pub fn erased_pattern(&self) -> ErasurePattern {
        let n = self.params.n();
        ErasurePattern {
            cells: self
                .erased
                .iter()
                .enumerate()
                .filter(|(_, &e)| e)
                .map(|(idx, _)| (idx / n, idx % n))
                .collect(),
        }
    }

    fn clear_mask(&mut self) {
        self.erased.fill(false);
    }
}

/// Inner products of the stripe with the parity-check rows: one per row
/// parity plus the two global rows. All zero for an erasure-free codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndromes {
    pub row: Vec<Symbol>,
    pub global1: Symbol,
    pub global2: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("erasure pattern {pattern} is beyond the capability of two global parities")]
    BeyondCapability { pattern: ErasurePattern },
    #[error(
        "erasure pattern {pattern} is uncorrectable: the reduced system has a non-unit determinant"
    )]
    UncorrectablePattern { pattern: ErasurePattern },
}

/// Encoder/decoder for one set of code parameters, with the global-parity
/// coefficient tables precomputed.
#[derive(Debug, Clone)]
pub struct StripeCodec {
    params: CodeParams,
    g1_pow: Vec<Symbol>,
    g2_pow: Vec<Symbol>,
}

impl StripeCodec {
    pub fn new(params: CodeParams) -> Self {
        let alg = params.algebra();
        let mut g1_pow = Vec::with_capacity(params.len());
        let mut g2_pow = Vec::with_capacity(params.len());
        for i in 0..params.m() {
            for j in 0..params.n() {
                let (g1, g2) = params.global_exponents(i, j);
                g1_pow.push(alg.alpha_pow(g1));
                g2_pow.push(alg.alpha_pow(g2));
            }
        }
        StripeCodec {
            params,
            g1_pow,
            g2_pow,
        }
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    /// Number of data symbols per stripe: `m(n-1) - 2`.
    pub fn data_len(&self) -> usize {
        (self.params.m() * (self.params.n() - 1)).saturating_sub(2)
    }

    /// Syndromes of the stripe, with erased cells contributing zero. For a
    /// codeword with erasures this equals the contribution of the erased
    /// true values, which is what stage 2 of the decoder consumes.
    pub fn syndromes(&self, arr: &StripeArray) -> Syndromes {
        let alg = self.params.algebra();
        let n = self.params.n();
        let mut row = vec![alg.zero(); self.params.m()];
        let mut global1 = alg.zero();
        let mut global2 = alg.zero();
        for r in 0..self.params.m() {
            for c in 0..n {
                if arr.is_erased(r, c) {
                    continue;
                }
                let v = *arr.cell(r, c);
                row[r] += v;
                global1 += self.g1_pow[r * n + c].mul(&v);
                global2 += self.g2_pow[r * n + c].mul(&v);
            }
        }
        Syndromes {
            row,
            global1,
            global2,
        }
    }

    /// Systematic encode: data fills the non-parity cells row-major; parity
    /// cells are computed by decoding with the parity positions erased.
    pub fn encode(&self, data: &[Symbol]) -> Result<StripeArray, CodeError> {
        let parity = parity_positions(&self.params)?;
        let expected = self.data_len();
        if data.len() != expected {
            return Err(CodeError::DataLength {
                expected,
                got: data.len(),
            });
        }
        if data.iter().any(|s| s.algebra() != self.params.algebra()) {
            return Err(CodeError::ForeignSymbol);
        }
        let mut arr = StripeArray::zero(self.params);
        let mut it = data.iter();
        for r in 0..self.params.m() {
            for c in 0..self.params.n() {
                if !parity.contains(r, c) {
                    arr.set_cell(r, c, *it.next().expect("data length checked"));
                }
            }
        }
        arr.erase(&parity);
        Ok(self
            .decode(&arr)
            .expect("the parity pattern is guaranteed correctable"))
    }

    /// Recover every erased cell, or report why the pattern cannot be
    /// corrected. Non-erased cells are never modified; a successful result
    /// has an empty erasure mask and zero syndromes.
    pub fn decode(&self, arr: &StripeArray) -> Result<StripeArray, DecodeFailure> {
        assert_eq!(
            arr.params(),
            &self.params,
            "stripe/codec parameter mismatch"
        );
        let pattern = arr.erased_pattern();
        let class = classify(&pattern, &self.params);
        if class == Classification::BeyondCapability {
            return Err(DecodeFailure::BeyondCapability { pattern });
        }

        let mut out = arr.clone();
        let n = self.params.n();
        let alg = self.params.algebra();

        // Stage 1: every row with a single erasure is the sum of its known
        // cells, independent of the rest of the stripe.
        let counts = pattern.row_counts(self.params.m());
        for r in 0..self.params.m() {
            if counts[r] != 1 {
                continue;
            }
            let c = pattern.row_cols(r)[0];
            let mut acc = alg.zero();
            for cc in 0..n {
                if cc != c {
                    acc += *out.cell(r, cc);
                }
            }
            out.set_cell(r, c, acc);
            out.erased[r * n + c] = false;
        }

        // Stage 2: solve the heavy rows from the updated syndromes.
        match class {
            Classification::RowParityOnly => {}
            Classification::OneHeavyRow { row, cols } => {
                let s = self.syndromes(&out);
                match cols.len() {
                    2 => self.solve_one_row_two(&mut out, &s, row, cols[0], cols[1], &pattern)?,
                    3 => self.solve_one_row_three(
                        &mut out, &s, row, cols[0], cols[1], cols[2], &pattern,
                    )?,
                    _ => unreachable!("heavy row has 2 or 3 erasures"),
                }
            }
            Classification::TwoHeavyRows { first, second } => {
                let s = self.syndromes(&out);
                self.solve_two_rows(&mut out, &s, first, second, &pattern)?;
            }
            Classification::BeyondCapability => unreachable!("rejected above"),
        }

        out.clear_mask();
        Ok(out)
    }

    fn g1(&self, r: usize, c: usize) -> Symbol {
        self.g1_pow[r * self.params.n() + c]
    }

    fn g2(&self, r: usize, c: usize) -> Symbol {
        self.g2_pow[r * self.params.n() + c]
    }

    /// Row parity plus the first global row; the determinant is a single
    /// Vandermonde difference and therefore always a unit.
    fn solve_one_row_two(
        &self,
        out: &mut StripeArray,
        s: &Syndromes,
        row: usize,
        c0: usize,
        c1: usize,
        pattern: &ErasurePattern,
    ) -> Result<(), DecodeFailure> {
        let r = s.row[row];
        let b0 = self.g1(row, c0);
        let b1 = self.g1(row, c1);
        let det = b0.add(&b1);
        let inv = det.inv().map_err(|_| DecodeFailure::UncorrectablePattern {
            pattern: pattern.clone(),
        })?;
        let v1 = inv.mul(&s.global1.add(&b0.mul(&r)));
        let v0 = r.add(&v1);
        out.set_cell(row, c0, v0);
        out.set_cell(row, c1, v1);
        Ok(())
    }

    /// Eliminate the row parity, then solve the residual 2x2 by Cramer. The
    /// residual coefficients have the shape `alpha^u (1 + alpha^v)`, and the
    /// determinant reduces to a Vandermonde product times a power of alpha.
    fn solve_one_row_three(
        &self,
        out: &mut StripeArray,
        s: &Syndromes,
        row: usize,
        c0: usize,
        c1: usize,
        c2: usize,
        pattern: &ErasurePattern,
    ) -> Result<(), DecodeFailure> {
        let r = s.row[row];
        let (b0, b1, b2) = (self.g1(row, c0), self.g1(row, c1), self.g1(row, c2));
        let (g0, g1, g2) = (self.g2(row, c0), self.g2(row, c1), self.g2(row, c2));

        let b11 = b1.add(&b0);
        let b12 = b2.add(&b0);
        let b21 = g1.add(&g0);
        let b22 = g2.add(&g0);
        let u = s.global1.add(&b0.mul(&r));
        let w = s.global2.add(&g0.mul(&r));

        let det = b11.mul(&b22).add(&b12.mul(&b21));
        let inv = det.inv().map_err(|_| DecodeFailure::UncorrectablePattern {
            pattern: pattern.clone(),
        })?;
        let v1 = inv.mul(&u.mul(&b22).add(&b12.mul(&w)));
        let v2 = inv.mul(&b11.mul(&w).add(&u.mul(&b21)));
        let v0 = r.add(&v1).add(&v2);
        out.set_cell(row, c0, v0);
        out.set_cell(row, c1, v1);
        out.set_cell(row, c2, v2);
        Ok(())
    }

    /// Substitute both row parities, leaving a 2x2 system in the first
    /// unknown of each heavy row. Its determinant carries the two unit
    /// factors `(1 + alpha^(j-i))`; after factoring them out, a non-unit
    /// residual determinant is exactly the uncorrectable case.
    fn solve_two_rows(
        &self,
        out: &mut StripeArray,
        s: &Syndromes,
        first: (usize, [usize; 2]),
        second: (usize, [usize; 2]),
        pattern: &ErasurePattern,
    ) -> Result<(), DecodeFailure> {
        let (ra, [i, j]) = first;
        let (rb, [i2, j2]) = second;
        let pa = s.row[ra];
        let pb = s.row[rb];

        let a_i = self.g1(ra, i);
        let a_j = self.g1(ra, j);
        let a2_i = self.g1(rb, i2);
        let a2_j = self.g1(rb, j2);
        let b_i = self.g2(ra, i);
        let b_j = self.g2(ra, j);
        let b2_i = self.g2(rb, i2);
        let b2_j = self.g2(rb, j2);

        let a1 = a_i.add(&a_j);
        let a2 = a2_i.add(&a2_j);
        let b1 = b_i.add(&b_j);
        let b2 = b2_i.add(&b2_j);
        let u = s.global1.add(&a_j.mul(&pa)).add(&a2_j.mul(&pb));
        let w = s.global2.add(&b_j.mul(&pa)).add(&b2_j.mul(&pb));

        let det = a1.mul(&b2).add(&a2.mul(&b1));
        let inv = det.inv().map_err(|_| DecodeFailure::UncorrectablePattern {
            pattern: pattern.clone(),
        })?;
        let x_i = inv.mul(&u.mul(&b2).add(&a2.mul(&w)));
        let y_i = inv.mul(&a1.mul(&w).add(&u.mul(&b1)));
        out.set_cell(ra, i, x_i);
        out.set_cell(ra, j, pa.add(&x_i));
        out.set_cell(rb, i2, y_i);
        out.set_cell(rb, j2, pb.add(&y_i));
        Ok(())
    }
}

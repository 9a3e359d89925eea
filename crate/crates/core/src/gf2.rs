//! Dense GF(2) matrices with bit-packed rows, plus Gaussian elimination
//! with transform tracking.
//!
//! Rows are stored as contiguous `u64` words; bits beyond the column
//! count are kept zero so whole-word XOR implements row addition.

use std::fmt;
use std::ops::Range;

const WORD_BITS: usize = 64;

/// Dense bit matrix over GF(2). A `0 x c` or `r x 0` matrix is legal
/// and has rank 0.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

/// Outcome of [`BitMatrix::row_echelon`] on an active column block.
///
/// `transform * original == echelon` over GF(2), `transform` is
/// invertible, and `rank + zero_row_indices.len()` equals the row
/// count. Zero rows (in the active block) sit at the bottom of the
/// echelon form; `zero_row_indices` are their positions there.
#[derive(Clone, Debug)]
pub struct EliminationResult {
    pub echelon: BitMatrix,
    pub rank: usize,
    pub transform: BitMatrix,
    pub zero_row_indices: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(WORD_BITS);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Parses rows like `"1010"`; all rows must have equal length.
    pub fn from_binary_rows(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_fn(rows.len(), cols, |r, c| {
            rows[r].as_bytes()[c] == b'1'
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.words + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words + c / WORD_BITS;
        let bit = 1u64 << (c % WORD_BITS);
        if value {
            self.data[w] |= bit;
        } else {
            self.data[w] &= !bit;
        }
    }

    /// Packed words of row `r`.
    pub fn row_bits(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_bits(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of shared set columns between rows `r1` and `r2`.
    pub fn row_overlap(&self, r1: usize, r2: usize) -> usize {
        self.row_bits(r1)
            .iter()
            .zip(self.row_bits(r2))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn rows_equal(&self, r1: usize, r2: usize) -> bool {
        self.row_bits(r1) == self.row_bits(r2)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_bits(r).iter().all(|&w| w == 0)
    }

    pub fn row_is_zero_in(&self, r: usize, range: Range<usize>) -> bool {
        range.clone().all(|c| !self.get(r, c))
    }

    pub fn col_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| !self.get(r, c))
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (s, d) = (src * self.words, dst * self.words);
        for i in 0..self.words {
            let v = self.data[s + i];
            self.data[d + i] ^= v;
        }
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for i in 0..self.words {
            self.data.swap(r1 * self.words + i, r2 * self.words + i);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        BitMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        })
    }

    /// Copies the column slice `range` out of every row.
    pub fn columns(&self, range: Range<usize>) -> BitMatrix {
        assert!(range.end <= self.cols);
        let start = range.start;
        BitMatrix::from_fn(self.rows, range.len(), |r, c| self.get(r, start + c))
    }

    /// Copies the row slice `range`.
    pub fn row_slice(&self, range: Range<usize>) -> BitMatrix {
        assert!(range.end <= self.rows);
        let start = range.start;
        BitMatrix::from_fn(range.len(), self.cols, |r, c| self.get(start + r, c))
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "mul dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (o, s) = (r * out.words, k * other.words);
                    for i in 0..out.words {
                        out.data[o + i] ^= other.data[s + i];
                    }
                }
            }
        }
        out
    }

    /// Row echelon form of the `active_cols` block, carrying the
    /// complementary columns along and recording the row operations.
    ///
    /// Pivots are chosen scanning active columns left to right, taking
    /// the first row with a set bit at or below the current pivot row,
    /// so the result is deterministic. Rows that are zero in the
    /// active block end up compacted at the bottom.
    pub fn row_echelon(&self, active_cols: Range<usize>) -> EliminationResult {
        assert!(active_cols.end <= self.cols, "active block out of range");
        let mut echelon = self.clone();
        let mut transform = BitMatrix::identity(self.rows);
        let mut pivot = 0usize;
        for c in active_cols {
            let Some(r) = (pivot..self.rows).find(|&r| echelon.get(r, c)) else {
                continue;
            };
            echelon.swap_rows(pivot, r);
            transform.swap_rows(pivot, r);
            for below in pivot + 1..self.rows {
                if echelon.get(below, c) {
                    echelon.xor_row_into(pivot, below);
                    transform.xor_row_into(pivot, below);
                }
            }
            pivot += 1;
            if pivot == self.rows {
                break;
            }
        }
        EliminationResult {
            echelon,
            rank: pivot,
            transform,
            zero_row_indices: (pivot..self.rows).collect(),
        }
    }

    /// GF(2) rank (row rank, which equals column rank).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut pivot = 0usize;
        for c in 0..m.cols {
            let Some(r) = (pivot..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(pivot, r);
            for below in pivot + 1..m.rows {
                if m.get(below, c) {
                    m.xor_row_into(pivot, below);
                }
            }
            pivot += 1;
            if pivot == m.rows {
                break;
            }
        }
        pivot
    }

    /// Drops all-zero columns. Returns the trimmed matrix together
    /// with the original indices of the kept columns.
    pub fn trim_zero_columns(&self) -> (BitMatrix, Vec<usize>) {
        let kept: Vec<usize> = (0..self.cols).filter(|&c| !self.col_is_zero(c)).collect();
        let trimmed = BitMatrix::from_fn(self.rows, kept.len(), |r, c| self.get(r, kept[c]));
        (trimmed, kept)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force rank oracle: count the distinct vectors in the row
    /// span by enumerating all 2^rows row subsets.
    fn span_rank(m: &BitMatrix) -> usize {
        let mut span = std::collections::BTreeSet::new();
        for subset in 0u32..1 << m.rows() {
            let mut acc = vec![0u64; m.row_bits(0).len()];
            for r in 0..m.rows() {
                if (subset >> r) & 1 == 1 {
                    for (a, b) in acc.iter_mut().zip(m.row_bits(r)) {
                        *a ^= b;
                    }
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn identity_block_eliminates_trivially() {
        let m = BitMatrix::identity(2);
        let res = m.row_echelon(0..2);
        assert_eq!(res.rank, 2);
        assert!(res.zero_row_indices.is_empty());
        assert_eq!(res.transform, BitMatrix::identity(2));
        assert_eq!(res.echelon, m);
    }

    #[test]
    fn six_qubit_example_side_b_elimination() {
        // G_AB of the 6-qubit worked example, transposed, with the
        // identity block carried along; eliminating the first two
        // columns leaves X3X4X5 and X4X6 as the carried zero rows.
        let gab = BitMatrix::from_binary_rows(&["1010", "1101"]);
        let ext = gab.transpose().hstack(&BitMatrix::identity(4));
        let res = ext.row_echelon(0..2);
        assert_eq!(res.rank, 2);
        assert_eq!(res.zero_row_indices, vec![2, 3]);
        let carried = res.echelon.columns(2..6);
        let row = |r: usize| {
            (0..4)
                .map(|c| if carried.get(r, c) { '1' } else { '0' })
                .collect::<String>()
        };
        assert_eq!(row(2), "1110");
        assert_eq!(row(3), "0101");
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(BitMatrix::from_fn(5, 4, |_, _| true).rank(), 1);
        let m = BitMatrix::from_binary_rows(&["1110", "1111", "0001", "1001", "0111"]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn trim_zero_columns_examples() {
        let id = BitMatrix::identity(3);
        let (t, kept) = id.trim_zero_columns();
        assert_eq!(t, id);
        assert_eq!(kept, vec![0, 1, 2]);

        let m = BitMatrix::from_binary_rows(&["0100", "0001"]);
        let (t, kept) = m.trim_zero_columns();
        assert_eq!(kept, vec![1, 3]);
        assert_eq!(t, BitMatrix::from_binary_rows(&["10", "01"]));
    }

    #[test]
    fn zero_sized_matrices_are_legal() {
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(4, 0).rank(), 0);
        let res = BitMatrix::zeros(4, 0).row_echelon(0..0);
        assert_eq!(res.rank, 0);
        assert_eq!(res.zero_row_indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn random_rank_matches_span_oracle() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let bits = next();
            let m = BitMatrix::from_fn(6, 5, |r, c| (bits >> (r * 5 + c)) & 1 == 1);
            assert_eq!(m.rank(), span_rank(&m));
        }
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn transform_certificate_holds(m in arb_matrix(16)) {
            let res = m.row_echelon(0..m.cols());
            prop_assert_eq!(res.transform.mul(&m), res.echelon.clone());
            prop_assert_eq!(res.transform.rank(), m.rows());
            prop_assert_eq!(res.rank + res.zero_row_indices.len(), m.rows());
        }

        #[test]
        fn row_rank_equals_column_rank(m in arb_matrix(16)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn elimination_is_idempotent_on_active_block(m in arb_matrix(12)) {
            let once = m.row_echelon(0..m.cols());
            let twice = once.echelon.row_echelon(0..m.cols());
            prop_assert_eq!(once.echelon, twice.echelon);
        }
    }
}

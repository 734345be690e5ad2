//! Dense GF(2) matrices stored as packed 64-bit words, one word slice per row.

use std::fmt;

use crate::error::CodeError;

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// Dense binary matrix with row-major packed storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Result of a reduced row echelon computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Row-equivalent matrix; the first `pivots.len()` rows are the nonzero ones,
    /// row `t` carrying the pivot in column `pivots[t]`.
    pub matrix: BitMatrix,
    /// Pivot columns in the order they were found.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BitMatrix {
    /// All-zero `rows x cols` matrix. Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "BitMatrix needs at least one row and column");
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, CodeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        if r == 0 || c == 0 {
            return Err(CodeError::EmptyMatrix);
        }
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != c {
                return Err(CodeError::RaggedRows { row: i, expected: c, found: row.len() });
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => return Err(CodeError::NotBinary { row: i, col: j, value: other }),
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from the column supports of each row.
    pub fn from_supports(cols: usize, supports: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(supports.len(), cols);
        for (i, s) in supports.iter().enumerate() {
            for &j in s {
                m.set(i, j, true);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, x) in b.iter_mut().zip(a) {
            *d ^= *x;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        lo[a.min(b) * s..(a.min(b) + 1) * s].swap_with_slice(&mut hi[..s]);
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        support_of(self.row_words(r))
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Copy of row `r` as a 0/1 vector.
    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in support_of(self.row_words(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M * v` over GF(2) for a 0/1 vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        let packed = pack_bits(v);
        (0..self.rows)
            .map(|r| {
                let ones: u32 = self.row_words(r).iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
                (ones & 1) as u8
            })
            .collect()
    }

    /// `self * other^T` over GF(2).
    pub fn mul_transpose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = BitMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                let ones: u32 = self
                    .row_words(i)
                    .iter()
                    .zip(other.row_words(j))
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                out.set(i, j, ones & 1 == 1);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Reduced row echelon form, visiting columns in `order`.
    ///
    /// `order` must be a permutation of `0..cols` (a prefix is also accepted, in
    /// which case only the listed columns are eliminated).
    pub fn rref(&self, order: &[usize]) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(order);
        Rref { matrix: m, pivots }
    }

    pub fn rref_natural(&self) -> Rref {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref(&order)
    }

    pub(crate) fn rref_in_place(&mut self, order: &[usize]) -> Vec<usize> {
        let mut pivots = Vec::with_capacity(self.rows.min(self.cols));
        let mut rank = 0;
        for &col in order {
            if rank == self.rows {
                break;
            }
            let (w, mask) = (col / WORD, 1u64 << (col % WORD));
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * self.stride + w] & mask != 0) else {
                continue;
            };
            self.swap_rows(p, rank);
            for r in 0..self.rows {
                if r != rank && self.data[r * self.stride + w] & mask != 0 {
                    self.xor_row_into(rank, r);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref_natural().rank()
    }

    /// Copy of the first `count` rows.
    pub fn top_rows(&self, count: usize) -> BitMatrix {
        assert!(count >= 1 && count <= self.rows);
        BitMatrix {
            rows: count,
            cols: self.cols,
            stride: self.stride,
            data: self.data[..count * self.stride].to_vec(),
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn pack_bits(v: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; words_for(v.len()).max(1)];
    for (i, &b) in v.iter().enumerate() {
        if b & 1 == 1 {
            out[i / WORD] |= 1 << (i % WORD);
        }
    }
    out
}

pub(crate) fn support_of(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            out.push(wi * WORD + b);
            w &= w - 1;
        }
    }
    out
}

#[inline]
pub(crate) fn bit_of(words: &[u64], i: usize) -> bool {
    (words[i / WORD] >> (i % WORD)) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity() {
        let r = BitMatrix::identity(2).rref_natural();
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.matrix, BitMatrix::identity(2));
    }

    #[test]
    fn rref_custom_order() {
        let m = BitMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let r = m.rref(&[2, 1, 0]);
        assert_eq!(r.pivots, vec![2, 1]);
        let mut rows: Vec<Vec<u8>> = (0..2).map(|i| r.matrix.row_bits(i)).collect();
        rows.sort();
        assert_eq!(rows, vec![vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn rref_zero_matrix_has_no_pivots() {
        let r = BitMatrix::zeros(3, 5).rref_natural();
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn pivot_columns_are_unit_vectors() {
        let m = BitMatrix::from_rows(&[
            vec![1, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 1, 1, 0],
            vec![1, 0, 1, 0, 1, 1],
            vec![1, 1, 1, 1, 0, 0],
        ])
        .unwrap();
        let r = m.rref(&[5, 3, 1, 0, 2, 4]);
        for (t, &p) in r.pivots.iter().enumerate() {
            for row in 0..m.rows() {
                assert_eq!(r.matrix.get(row, p), row == t);
            }
        }
    }

    #[test]
    fn transpose_and_products() {
        let m = BitMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.mul_vec(&[1, 1, 1]), vec![0, 0]);
        assert_eq!(m.mul_vec(&[1, 0, 0]), vec![1, 0]);
        let p = m.mul_transpose(&m);
        assert_eq!(p.row_bits(0), vec![0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BitMatrix::from_rows::<Vec<u8>>(&[]).is_err());
        assert!(BitMatrix::from_rows(&[vec![1, 2]]).is_err());
        assert!(BitMatrix::from_rows(&[vec![1, 0], vec![1]]).is_err());
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 63, true);
        m.set(0, 64, true);
        m.set(1, 129, true);
        m.set(1, 64, true);
        assert_eq!(m.row_support(0), vec![63, 64]);
        m.xor_row_into(0, 1);
        assert_eq!(m.row_support(1), vec![63, 129]);
        m.swap_rows(0, 1);
        assert_eq!(m.row_support(0), vec![63, 129]);
    }
}

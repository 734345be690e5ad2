//! Binary linear codes given by a parity-check matrix, and constraint sets
//! (partial assignments of code positions) used by the branch-and-bound search.

use crate::error::CodeError;
use crate::gf2::{bit_of, BitMatrix};

/// A binary linear code of length `n` and dimension `k`.
#[derive(Clone, Debug)]
pub struct LinearCode {
    name: String,
    h: BitMatrix,
    g: BitMatrix,
    neighborhoods: Vec<Vec<usize>>,
}

impl LinearCode {
    /// Builds the code `{c : H c^T = 0}`. Fails for codes of dimension zero.
    pub fn from_parity_check(name: impl Into<String>, h: BitMatrix) -> Result<Self, CodeError> {
        let g = derive_generator(&h)?;
        let neighborhoods = (0..h.rows()).map(|j| h.row_support(j)).collect();
        Ok(LinearCode { name: name.into(), h, g, neighborhoods })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Dimension.
    pub fn k(&self) -> usize {
        self.g.rows()
    }

    /// Number of parity checks (rows of `H`, possibly more than `n - k`).
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    /// `N(j)`: the positions checked by row `j`.
    pub fn neighborhood(&self, j: usize) -> &[usize] {
        &self.neighborhoods[j]
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.neighborhoods
    }

    /// True iff `H c^T = 0`.
    pub fn is_codeword(&self, c: &[u8]) -> Result<bool, CodeError> {
        if c.len() != self.n() {
            return Err(CodeError::LengthMismatch { expected: self.n(), found: c.len() });
        }
        Ok(self.h.mul_vec(c).iter().all(|&s| s == 0))
    }

    /// Encodes `k` information bits with the derived generator matrix.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, CodeError> {
        if info.len() != self.k() {
            return Err(CodeError::LengthMismatch { expected: self.k(), found: info.len() });
        }
        let mut acc = vec![0u64; self.g.row_words(0).len()];
        for (r, &b) in info.iter().enumerate() {
            if b & 1 == 1 {
                for (a, w) in acc.iter_mut().zip(self.g.row_words(r)) {
                    *a ^= *w;
                }
            }
        }
        Ok((0..self.n()).map(|i| bit_of(&acc, i) as u8).collect())
    }

    /// Whether some codeword agrees with every assignment in `f`.
    ///
    /// Solves the affine system `H_free c_free = H_fixed v` from scratch.
    pub fn is_valid(&self, f: &ConstraintSet) -> bool {
        let n = self.n();
        let m = self.m();
        // Column n of the augmented matrix holds the right-hand side.
        let mut aug = BitMatrix::zeros(m, n + 1);
        for j in 0..m {
            let mut rhs = false;
            for &i in &self.neighborhoods[j] {
                match f.value(i) {
                    Some(v) => rhs ^= v == 1,
                    None => aug.set(j, i, true),
                }
            }
            aug.set(j, n, rhs);
        }
        let order: Vec<usize> = (0..n).filter(|&i| f.value(i).is_none()).collect();
        let rank = aug.rref_in_place(&order).len();
        (rank..m).all(|r| !aug.get(r, n))
    }

    /// All `2^k` codewords. Intended for small codes only.
    pub fn enumerate_codewords(&self) -> Vec<Vec<u8>> {
        assert!(self.k() <= 24, "refusing to enumerate 2^{} codewords", self.k());
        let k = self.k();
        let rows: Vec<Vec<u64>> = (0..k).map(|r| self.g.row_words(r).to_vec()).collect();
        let mut out = Vec::with_capacity(1 << k);
        let mut cur = vec![0u64; rows.first().map_or(1, |r| r.len())];
        // Gray-code walk: consecutive codewords differ by one generator row.
        for idx in 0u64..(1u64 << k) {
            if idx > 0 {
                let flip = idx.trailing_zeros() as usize;
                for (a, w) in cur.iter_mut().zip(&rows[flip]) {
                    *a ^= *w;
                }
            }
            out.push((0..self.n()).map(|i| bit_of(&cur, i) as u8).collect());
        }
        out
    }
}

/// Generator matrix of the null space of `h`: `k = n - rank(h)` rows with `G H^T = 0`.
pub fn derive_generator(h: &BitMatrix) -> Result<BitMatrix, CodeError> {
    let n = h.cols();
    let rref = h.rref_natural();
    let rank = rref.rank();
    if rank == n {
        return Err(CodeError::TrivialCode);
    }
    let mut is_pivot = vec![false; n];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut g = BitMatrix::zeros(free.len(), n);
    for (r, &f) in free.iter().enumerate() {
        g.set(r, f, true);
        for (t, &p) in rref.pivots.iter().enumerate() {
            if rref.matrix.get(t, f) {
                g.set(r, p, true);
            }
        }
    }
    Ok(g)
}

/// Partial assignment of code positions to bit values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstraintSet {
    // Sorted by position.
    entries: Vec<(usize, u8)>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a constraint set, rejecting duplicates and out-of-range positions.
    pub fn from_pairs(pairs: &[(usize, u8)], n: usize) -> Result<Self, CodeError> {
        let mut f = ConstraintSet::new();
        for &(p, v) in pairs {
            f.insert(p, v, n)?;
        }
        Ok(f)
    }

    pub fn insert(&mut self, position: usize, value: u8, n: usize) -> Result<(), CodeError> {
        if position >= n {
            return Err(CodeError::PositionOutOfRange { position, n });
        }
        match self.entries.binary_search_by_key(&position, |e| e.0) {
            Ok(_) => Err(CodeError::DuplicateConstraint(position)),
            Err(at) => {
                self.entries.insert(at, (position, value & 1));
                Ok(())
            }
        }
    }

    /// `self ∪ {(position, value)}`; the position must be unconstrained.
    pub fn with(&self, position: usize, value: u8) -> Self {
        let mut f = self.clone();
        let at = f
            .entries
            .binary_search_by_key(&position, |e| e.0)
            .expect_err("branching on a constrained position");
        f.entries.insert(at, (position, value & 1));
        f
    }

    pub fn value(&self, position: usize) -> Option<u8> {
        self.entries.binary_search_by_key(&position, |e| e.0).ok().map(|i| self.entries[i].1)
    }

    pub fn is_constrained(&self, position: usize) -> bool {
        self.value(position).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.entries.iter().copied()
    }

    /// Whether `c` agrees with every assignment.
    pub fn admits(&self, c: &[u8]) -> bool {
        self.entries.iter().all(|&(p, v)| c[p] == v)
    }
}

/// Hamming weight of a 0/1 vector.
pub fn weight(c: &[u8]) -> usize {
    c.iter().filter(|&&b| b == 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn repetition_code_generator() {
        let h = BitMatrix::from_rows(&[vec![1, 1]]).unwrap();
        let g = derive_generator(&h).unwrap();
        assert_eq!(g.rows(), 1);
        assert_eq!(g.row_bits(0), vec![1, 1]);
    }

    #[test]
    fn full_rank_h_is_trivial() {
        let h = BitMatrix::identity(3);
        assert_eq!(derive_generator(&h), Err(CodeError::TrivialCode));
        assert!(LinearCode::from_parity_check("id", h).is_err());
    }

    #[test]
    fn hamming_generator_is_orthogonal() {
        let code = builtin::hamming_7_4();
        assert_eq!(code.k(), 4);
        assert!(code.generator().mul_transpose(code.parity_check()).is_zero());
        assert_eq!(code.generator().rank(), 4);
        for r in 0..4 {
            assert!(code.is_codeword(&code.generator().row_bits(r)).unwrap());
        }
    }

    #[test]
    fn codeword_membership() {
        let code = builtin::hamming_7_4();
        assert!(code.is_codeword(&[0; 7]).unwrap());
        assert!(!code.is_codeword(&[1, 0, 0, 0, 0, 0, 0]).unwrap());
        assert!(matches!(code.is_codeword(&[0; 6]), Err(CodeError::LengthMismatch { .. })));
    }

    #[test]
    fn neighborhoods_match_h() {
        let code = builtin::hamming_15_11();
        for j in 0..code.m() {
            let expect: Vec<usize> = (0..code.n()).filter(|&i| code.parity_check().get(j, i)).collect();
            assert_eq!(code.neighborhood(j), expect.as_slice());
        }
    }

    #[test]
    fn validity_basics() {
        let code = builtin::hamming_7_4();
        assert!(code.is_valid(&ConstraintSet::new()));
        let single = LinearCode::from_parity_check("spc", BitMatrix::from_rows(&[vec![1, 1]]).unwrap()).unwrap();
        let f = ConstraintSet::from_pairs(&[(0, 1), (1, 0)], 2).unwrap();
        assert!(!single.is_valid(&f));
        let f = ConstraintSet::from_pairs(&[(0, 1), (1, 1)], 2).unwrap();
        assert!(single.is_valid(&f));
    }

    #[test]
    fn information_set_assignments_are_valid() {
        let code = builtin::hamming_7_4();
        // Free columns of the natural RREF form an information set.
        let rref = code.parity_check().rref_natural();
        let info: Vec<usize> = (0..7).filter(|c| !rref.pivots.contains(c)).collect();
        for bits in 0..16u8 {
            let pairs: Vec<(usize, u8)> = info.iter().enumerate().map(|(t, &p)| (p, (bits >> t) & 1)).collect();
            assert!(code.is_valid(&ConstraintSet::from_pairs(&pairs, 7).unwrap()));
        }
    }

    #[test]
    fn constraint_set_rejects_duplicates_and_range() {
        let mut f = ConstraintSet::new();
        f.insert(2, 1, 4).unwrap();
        assert_eq!(f.insert(2, 0, 4), Err(CodeError::DuplicateConstraint(2)));
        assert_eq!(f.insert(4, 0, 4), Err(CodeError::PositionOutOfRange { position: 4, n: 4 }));
        let g = f.with(0, 0);
        assert_eq!(g.iter().collect::<Vec<_>>(), vec![(0, 0), (2, 1)]);
    }

    #[test]
    fn enumeration_counts() {
        let code = builtin::hamming_7_4();
        let words = code.enumerate_codewords();
        assert_eq!(words.len(), 16);
        let mut sorted = words.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 16);
        assert!(words.iter().all(|c| code.is_codeword(c).unwrap()));
    }
}

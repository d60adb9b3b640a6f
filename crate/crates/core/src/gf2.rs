//! Linear algebra over the two-element field.
//!
//! Vectors are packed 64 bits to a word. Matrices are lists of row vectors,
//! which is the natural layout for check matrices: one row per stabilizer
//! generator, one column per qubit.

use std::fmt;

use crate::error::{Error, Result};

/// Default limit on the number of elements [`enumerate_span`] will produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length packed binary vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector { len, words: vec![u64::MAX; words_for(len)] };
        v.clear_tail();
        v
    }

    /// Indicator vector of `indices`. Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    /// Little-endian: bit `i` of `value` becomes entry `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_tail();
        }
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    /// Size of the intersection of the two supports.
    pub fn overlap(&self, other: &BitVector) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(wi, w)| wi * WORD + w.trailing_zeros() as usize)
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Entries `range.start..range.end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        BitVector::from_indices(end - start, self.iter_ones().filter(|&i| i >= start && i < end).map(|i| i - start))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense binary matrix stored as rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVector::from_indices(n, [i])).collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, actual: bad.len() });
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, actual: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `M · v`, one output bit per row.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, actual: v.len() });
        }
        Ok(BitVector::from_indices(self.rows.len(), self.rows.iter().enumerate().filter(|(_, r)| r.dot(v)).map(|(i, _)| i)))
    }

    /// `self · otherᵀ`; entry (i, j) is the parity of row i of `self` against row j of `other`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if other.cols != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, actual: other.cols });
        }
        let rows = self
            .rows
            .iter()
            .map(|a| BitVector::from_indices(other.rows.len(), other.rows.iter().enumerate().filter(|(_, b)| a.dot(b)).map(|(j, _)| j)))
            .collect();
        Ok(BitMatrix { cols: other.rows.len(), rows })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Block-diagonal `[self 0; 0 other]`.
    pub fn direct_sum(&self, other: &BitMatrix) -> BitMatrix {
        let left = BitVector::zeros(self.cols);
        let right = BitVector::zeros(other.cols);
        let mut rows: Vec<BitVector> = self.rows.iter().map(|r| r.concat(&right)).collect();
        rows.extend(other.rows.iter().map(|r| left.concat(r)));
        BitMatrix { cols: self.cols + other.cols, rows }
    }
}

/// Incrementally maintained echelon basis of a row space.
///
/// Each stored vector has a distinct pivot (its lowest set bit) and no other
/// stored vector has that bit set, so reduction is a single pass.
#[derive(Clone, Debug)]
pub struct RowSpace {
    len: usize,
    basis: Vec<(usize, BitVector)>,
}

impl RowSpace {
    pub fn new(len: usize) -> Self {
        RowSpace { len, basis: Vec::new() }
    }

    pub fn from_matrix(m: &BitMatrix) -> Self {
        let mut rs = RowSpace::new(m.n_cols());
        for r in m.rows() {
            rs.insert(r);
        }
        rs
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// The residual of `v` after eliminating every pivot of the basis.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (pivot, b) in &self.basis {
            if r.get(*pivot) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the space. Returns `true` when the dimension grew.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let r = self.reduce(v);
        let Some(pivot) = r.first_one() else {
            return false;
        };
        for (_, b) in self.basis.iter_mut() {
            if b.get(pivot) {
                b.xor_assign(&r);
            }
        }
        self.basis.push((pivot, r));
        true
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVector> {
        self.basis.iter().map(|(_, b)| b)
    }

    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix { cols: self.len, rows: self.basis().cloned().collect() }
    }
}

/// Rank over GF(2).
pub fn rank(m: &BitMatrix) -> usize {
    RowSpace::from_matrix(m).dim()
}

/// Whether `v` is a sum of rows of `m`.
pub fn in_row_space(m: &BitMatrix, v: &BitVector) -> Result<bool> {
    if v.len() != m.n_cols() {
        return Err(Error::LengthMismatch { expected: m.n_cols(), actual: v.len() });
    }
    Ok(RowSpace::from_matrix(m).contains(v))
}

/// Coefficients `c` (one per row of `m`) with `Σ c_i · row_i = v`, if any.
pub fn solve_row_combination(m: &BitMatrix, v: &BitVector) -> Result<Option<BitVector>> {
    if v.len() != m.n_cols() {
        return Err(Error::LengthMismatch { expected: m.n_cols(), actual: v.len() });
    }
    let nr = m.n_rows();
    // Echelon rows paired with the combination of original rows that produced them.
    let mut basis: Vec<(usize, BitVector, BitVector)> = Vec::new();
    for (i, row) in m.rows().iter().enumerate() {
        let mut r = row.clone();
        let mut c = BitVector::from_indices(nr, [i]);
        for (p, b, bc) in &basis {
            if r.get(*p) {
                r.xor_assign(b);
                c.xor_assign(bc);
            }
        }
        if let Some(p) = r.first_one() {
            basis.push((p, r, c));
        }
    }
    let mut r = v.clone();
    let mut c = BitVector::zeros(nr);
    for (p, b, bc) in &basis {
        if r.get(*p) {
            r.xor_assign(b);
            c.xor_assign(bc);
        }
    }
    Ok(r.is_zero().then_some(c))
}

/// A basis of `{v : M·v = 0}`, one vector per free column of the reduced row echelon form.
pub fn kernel_basis(m: &BitMatrix) -> BitMatrix {
    let n = m.n_cols();
    let rs = RowSpace::from_matrix(m);
    // After full reduction every basis vector has exactly one pivot and zeros in all other pivots.
    let pivots: Vec<usize> = rs.basis.iter().map(|(p, _)| *p).collect();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = BitMatrix::new(n);
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = BitVector::from_indices(n, [free]);
        for (p, row) in &rs.basis {
            if row.get(free) {
                v.set(*p, true);
            }
        }
        out.rows.push(v);
    }
    out
}

/// Gray-code enumeration of the span of a set of independent vectors.
///
/// The first element is the zero vector (or `offset`, if one was supplied);
/// each later element differs from its predecessor by exactly one basis row.
#[derive(Clone, Debug)]
pub struct SpanIter {
    basis: Vec<BitVector>,
    current: BitVector,
    index: u64,
    total: u64,
}

impl SpanIter {
    /// Index of the basis row flipped to produce the most recently yielded element.
    pub fn last_flipped(&self) -> Option<usize> {
        (self.index > 1).then(|| (self.index - 1).trailing_zeros() as usize)
    }
}

impl Iterator for SpanIter {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index >= self.total {
            return None;
        }
        if self.index > 0 {
            let bit = self.index.trailing_zeros() as usize;
            self.current.xor_assign(&self.basis[bit]);
        }
        self.index += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.total - self.index) as usize;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for SpanIter {}

/// Enumerates all `2^rows` elements of the span of `basis`.
pub fn enumerate_span(basis: &BitMatrix, cap: u64) -> Result<SpanIter> {
    enumerate_coset(basis, &BitVector::zeros(basis.n_cols()), cap)
}

/// Enumerates `offset + span(basis)`.
pub fn enumerate_coset(basis: &BitMatrix, offset: &BitVector, cap: u64) -> Result<SpanIter> {
    let dim = basis.n_rows();
    if dim >= 64 || (1u64 << dim) > cap {
        return Err(Error::CapExceeded { dim, cap });
    }
    if rank(basis) != dim {
        return Err(Error::DependentRows);
    }
    if offset.len() != basis.n_cols() {
        return Err(Error::LengthMismatch { expected: basis.n_cols(), actual: offset.len() });
    }
    Ok(SpanIter { basis: basis.rows().to_vec(), current: offset.clone(), index: 0, total: 1u64 << dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(cols: usize, rows: &[&[usize]]) -> BitMatrix {
        BitMatrix::from_rows(cols, rows.iter().map(|r| BitVector::from_indices(cols, r.iter().copied())).collect()).unwrap()
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(rank(&BitMatrix::zeros(3, 3)), 0);
    }

    #[test]
    fn membership_basics() {
        let id = BitMatrix::identity(3);
        assert!(in_row_space(&id, &BitVector::zeros(3)).unwrap());
        assert!(in_row_space(&id, &BitVector::from_bools(&[true, true, false])).unwrap());
        let m = mat(3, &[&[0, 1]]);
        assert!(!in_row_space(&m, &BitVector::from_indices(3, [0])).unwrap());
        assert!(matches!(in_row_space(&id, &BitVector::zeros(4)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn kernel_sizes() {
        assert_eq!(kernel_basis(&BitMatrix::identity(3)).n_rows(), 0);
        assert_eq!(kernel_basis(&BitMatrix::zeros(2, 3)).n_rows(), 3);
    }

    #[test]
    fn span_enumeration() {
        let empty = BitMatrix::new(2);
        let all: Vec<_> = enumerate_span(&empty, DEFAULT_ENUMERATION_CAP).unwrap().collect();
        assert_eq!(all, vec![BitVector::zeros(2)]);
        let all: Vec<_> = enumerate_span(&BitMatrix::identity(2), DEFAULT_ENUMERATION_CAP).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert!(all[0].is_zero());
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn span_cap_and_dependence() {
        assert!(matches!(enumerate_span(&BitMatrix::identity(5), 16), Err(Error::CapExceeded { dim: 5, cap: 16 })));
        let dep = mat(3, &[&[0], &[0]]);
        assert!(matches!(enumerate_span(&dep, 16), Err(Error::DependentRows)));
    }

    #[test]
    fn solve_gives_certificate() {
        let m = mat(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        let target = BitVector::from_indices(4, [0, 3]);
        let c = solve_row_combination(&m, &target).unwrap().unwrap();
        let mut acc = BitVector::zeros(4);
        for i in c.iter_ones() {
            acc.xor_assign(m.row(i));
        }
        assert_eq!(acc, target);
        assert!(solve_row_combination(&m, &BitVector::from_indices(4, [0])).unwrap().is_none());
    }

    #[test]
    fn tail_bits_are_masked() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(BitVector::from_u64(3, 0xff).weight(), 3);
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_cols, 0..=max_rows).prop_flat_map(|(cols, rows)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), cols), rows)
                .prop_map(move |rs| BitMatrix::from_rows(cols, rs.iter().map(|r| BitVector::from_bools(r)).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(m in arb_matrix(10, 10)) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in arb_matrix(8, 10)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(k.n_rows(), m.n_cols() - rank(&m));
            for v in enumerate_span(&k, DEFAULT_ENUMERATION_CAP).unwrap() {
                prop_assert!(m.mul_vec(&v).unwrap().is_zero());
            }
        }

        #[test]
        fn membership_matches_subset_sum(m in arb_matrix(12, 8), bits in proptest::collection::vec(any::<bool>(), 8)) {
            let v = BitVector::from_bools(&bits[..m.n_cols()]);
            let mut brute = false;
            for mask in 0u32..(1 << m.n_rows()) {
                let mut acc = BitVector::zeros(m.n_cols());
                for (i, r) in m.rows().iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc.xor_assign(r);
                    }
                }
                if acc == v {
                    brute = true;
                    break;
                }
            }
            prop_assert_eq!(in_row_space(&m, &v).unwrap(), brute);
        }

        #[test]
        fn weight_parity_is_additive(a in proptest::collection::vec(any::<bool>(), 1..130), seed in any::<u64>()) {
            let u = BitVector::from_bools(&a);
            let flips: Vec<bool> = (0..a.len()).map(|i| (seed.rotate_left(i as u32) ^ i as u64) & 1 == 1).collect();
            let v = BitVector::from_bools(&flips);
            prop_assert_eq!(u.xor(&u).weight(), 0);
            prop_assert_eq!(u.xor(&v).weight() % 2, (u.weight() + v.weight()) % 2);
        }
    }
}

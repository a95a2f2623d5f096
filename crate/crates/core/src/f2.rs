//! Dense matrices over F_2 packed into `u64` words.

use std::fmt;

const WORD: usize = 64;

/// A vector over F_2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
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

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major matrix over F_2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Self { rows, cols }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r].flip(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows());
        let mut out = BitMatrix::zeros(self.rows(), other.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for k in row.ones() {
                out.rows[r].xor_assign(&other.rows[k]);
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns in row order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        let mut col = 0;
        while next_row < self.rows() && col < self.cols {
            let found = (next_row..self.rows()).find(|&r| self.rows[r].get(col));
            match found {
                None => col += 1,
                Some(r) => {
                    self.rows.swap(next_row, r);
                    let pivot_row = self.rows[next_row].clone();
                    for (i, row) in self.rows.iter_mut().enumerate() {
                        if i != next_row && row.get(col) {
                            row.xor_assign(&pivot_row);
                        }
                    }
                    pivots.push(col);
                    next_row += 1;
                    col += 1;
                }
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (row, &p) in pivots.iter().enumerate() {
                    if reduced.get(row, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Target coordinates whose unit vectors span a complement of the image.
    pub fn cokernel_coordinates(&self) -> Vec<usize> {
        let mut t = self.transpose();
        let pivots = t.rref();
        let mut is_pivot = vec![false; self.rows()];
        for p in pivots {
            is_pivot[p] = true;
        }
        (0..self.rows()).filter(|&r| !is_pivot[r]).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_kernel_size(m: &BitMatrix) -> usize {
        (0u64..1 << m.cols())
            .filter(|&bits| {
                let mut v = BitVec::zeros(m.cols());
                for i in 0..m.cols() {
                    v.set(i, bits >> i & 1 == 1);
                }
                m.mul_vec(&v).is_zero()
            })
            .count()
    }

    fn brute_image_size(m: &BitMatrix) -> usize {
        let mut seen = std::collections::HashSet::new();
        for bits in 0u64..1 << m.cols() {
            let mut v = BitVec::zeros(m.cols());
            for i in 0..m.cols() {
                v.set(i, bits >> i & 1 == 1);
            }
            seen.insert(m.mul_vec(&v));
        }
        seen.len()
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn kernel_matches_exhaustive_search(m in arb_matrix()) {
            let kernel = m.kernel();
            prop_assert_eq!(1usize << kernel.len(), brute_kernel_size(&m));
            for v in &kernel {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            // kernel vectors are independent
            let basis = BitMatrix::from_rows(kernel.clone(), m.cols());
            prop_assert_eq!(basis.rank(), kernel.len());
        }

        #[test]
        fn rank_nullity_and_cokernel(m in arb_matrix()) {
            let rank = m.rank();
            prop_assert_eq!(rank + m.kernel().len(), m.cols());
            prop_assert_eq!(1usize << rank, brute_image_size(&m));
            let coker = m.cokernel_coordinates();
            prop_assert_eq!(coker.len() + rank, m.rows());
            // image together with the complement coordinates spans the target
            let mut spanning: Vec<BitVec> = m.transpose().rows.clone();
            spanning.extend(coker.iter().map(|&r| BitVec::unit(m.rows(), r)));
            let n = spanning.len();
            prop_assert_eq!(BitMatrix::from_rows(spanning, m.rows()).rank(), m.rows().min(n));
        }
    }

    #[test]
    fn identity_and_zero() {
        let id = BitMatrix::identity(3);
        assert!(id.kernel().is_empty());
        assert!(id.cokernel_coordinates().is_empty());
        let z = BitMatrix::zeros(2, 2);
        assert_eq!(z.kernel().len(), 2);
        assert_eq!(z.cokernel_coordinates(), vec![0, 1]);
    }

    #[test]
    fn ones_iterates_across_words() {
        let mut v = BitVec::zeros(130);
        for i in [0, 63, 64, 129] {
            v.set(i, true);
        }
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
    }
}

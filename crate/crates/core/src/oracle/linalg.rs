//! Dense matrices over F2 with rows stored as bit vectors.

use std::fmt;

const WORD: usize = 64;

fn words(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    data: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            data: vec![0; words(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.data[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % WORD);
        if value {
            self.data[i / WORD] |= mask;
        } else {
            self.data[i / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        self.data[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit.
    pub fn leading(&self) -> Option<usize> {
        self.data
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.data.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + bit)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.data
            .iter()
            .zip(&other.data)
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

/// An `rows x cols` matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.num_rows(), "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows.len(), other.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones() {
                out.rows[i].xor_assign(&other.rows[k]);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.num_rows(), self.cols),
            (other.num_rows(), other.cols),
            "dimension mismatch in sum"
        );
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
        out
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut basis = Echelon::new(self.cols);
        self.rows.iter().filter(|&r| basis.insert(r.clone())).count()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows.len() == self.cols && self.rank() == self.cols
    }

    /// Columns forming a basis of the column space.
    pub fn column_space(&self) -> Matrix {
        let t = self.transpose();
        let mut basis = Echelon::new(self.rows.len());
        for r in &t.rows {
            basis.insert(r.clone());
        }
        let vectors: Vec<BitVec> = basis.rows().cloned().collect();
        Matrix::from_columns(self.rows.len(), &vectors)
    }

    /// Some `X` with `self * X = b`, if one exists.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows.len(), b.num_rows(), "dimension mismatch in solve");
        let (k, c) = (self.cols, b.cols);
        // rows of [A | B], eliminated on the A part
        let mut rows: Vec<BitVec> = (0..self.rows.len())
            .map(|i| {
                let mut r = BitVec::zeros(k + c);
                for j in self.rows[i].ones() {
                    r.set(j, true);
                }
                for j in b.rows[i].ones() {
                    r.set(k + j, true);
                }
                r
            })
            .collect();
        let mut pivot_row_of = vec![usize::MAX; k];
        let mut next = 0;
        for (col, slot) in pivot_row_of.iter_mut().enumerate() {
            let Some(p) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot = rows[next].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != next && r.get(col) {
                    r.xor_assign(&pivot);
                }
            }
            *slot = next;
            next += 1;
        }
        if rows[next..].iter().any(|r| !r.is_zero()) {
            return None;
        }
        let mut x = Matrix::zeros(k, c);
        for (col, &pr) in pivot_row_of.iter().enumerate() {
            if pr == usize::MAX {
                continue;
            }
            for j in 0..c {
                if rows[pr].get(k + j) {
                    x.set(col, j, true);
                }
            }
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

/// Rows in echelon form keyed by their leading bit.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    by_leading: std::collections::BTreeMap<usize, BitVec>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            by_leading: Default::default(),
        }
    }

    pub fn rank(&self) -> usize {
        self.by_leading.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &BitVec> {
        self.by_leading.values()
    }

    /// Reduces `v` by the stored rows; the result has no leading bit of a
    /// stored row set.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        for (&l, r) in self.by_leading.iter().rev() {
            if v.get(l) {
                v.xor_assign(r);
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v;
        while let Some(l) = v.leading() {
            match self.by_leading.get(&l) {
                Some(r) => v.xor_assign(r),
                None => {
                    self.by_leading.insert(l, v);
                    return true;
                }
            }
        }
        false
    }

    /// Basis of `{x : r . x = 0 for every stored row r}`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        // fully reduce so every leading bit appears in one row only
        let mut rows: Vec<(usize, BitVec)> = self.by_leading.iter().map(|(&l, r)| (l, r.clone())).collect();
        for i in 0..rows.len() {
            let (li, ri) = (rows[i].0, rows[i].1.clone());
            for (j, (_, rj)) in rows.iter_mut().enumerate() {
                if j != i && rj.get(li) {
                    rj.xor_assign(&ri);
                }
            }
        }
        let mut is_pivot = vec![false; self.len];
        for (l, _) in &rows {
            is_pivot[*l] = true;
        }
        (0..self.len)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVec::zeros(self.len);
                x.set(f, true);
                for (l, r) in &rows {
                    if r.get(f) {
                        x.set(*l, true);
                    }
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in r.chars().enumerate() {
                m.set(i, j, c == '1');
            }
        }
        m
    }

    #[test]
    fn rank_and_product() {
        let a = mat(&["110", "011", "101"]);
        assert_eq!(a.rank(), 2);
        assert!(!a.is_invertible());
        let b = mat(&["10", "01", "11"]);
        assert_eq!(a.mul(&b), mat(&["11", "10", "01"]));
        assert!(Matrix::identity(70).is_invertible());
        assert_eq!(Matrix::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn solve_recovers_coefficients() {
        let a = mat(&["10", "11", "01"]);
        let x = mat(&["1", "1"]);
        let b = a.mul(&x);
        assert_eq!(a.solve(&b), Some(x));
        assert_eq!(a.solve(&mat(&["1", "0", "0"])), None);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let mut e = Echelon::new(4);
        let a = mat(&["1100", "0110"]);
        for i in 0..2 {
            e.insert(a.row(i).clone());
        }
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.apply(v).is_zero());
        }
    }

    #[test]
    fn column_space_has_rank_many_columns() {
        let a = mat(&["110", "110", "001"]);
        let c = a.column_space();
        assert_eq!(c.num_cols(), 2);
        assert_eq!(c.rank(), 2);
        assert!(c.solve(&a).is_some());
    }

    #[test]
    fn reduce_leaves_no_pivot_bits() {
        let mut e = Echelon::new(3);
        e.insert(mat(&["011"]).row(0).clone());
        let v = e.reduce(mat(&["111"]).row(0).clone());
        assert_eq!(v, mat(&["100"]).row(0).clone());
    }
}

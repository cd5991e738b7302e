//! Sparse columns over the field with two elements.

use std::fmt;

/// A sparse F2 vector stored as the strictly increasing list of its nonzero
/// row indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Column {
    entries: Vec<u32>,
}

impl F2Column {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a column from arbitrary indices. Repeated indices cancel in
    /// pairs, so `[1, 1, 2]` is the column `{2}`.
    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Self {
        let mut entries: Vec<u32> = indices.into_iter().collect();
        entries.sort_unstable();
        let mut out = Vec::with_capacity(entries.len());
        let mut i = 0;
        while i < entries.len() {
            let mut j = i;
            while j < entries.len() && entries[j] == entries[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(entries[i]);
            }
            i = j;
        }
        Self { entries: out }
    }

    /// Wraps an already sorted, duplicate-free index list.
    ///
    /// Returns `None` if the list is not strictly increasing.
    pub fn from_sorted(entries: Vec<u32>) -> Option<Self> {
        if entries.windows(2).all(|w| w[0] < w[1]) {
            Some(Self { entries })
        } else {
            None
        }
    }

    pub fn unit(index: u32) -> Self {
        Self {
            entries: vec![index],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn contains(&self, index: u32) -> bool {
        self.entries.binary_search(&index).is_ok()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().copied()
    }

    /// Largest row index, i.e. the lowest nonzero row when rows are drawn
    /// top to bottom by increasing index.
    pub fn pivot(&self) -> Option<u32> {
        self.entries.last().copied()
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &F2Column) {
        if other.is_empty() {
            return;
        }
        let merged = symmetric_difference(&self.entries, &other.entries);
        self.entries = merged;
    }

    /// Flips a single entry.
    pub fn toggle(&mut self, index: u32) {
        match self.entries.binary_search(&index) {
            Ok(pos) => {
                self.entries.remove(pos);
            }
            Err(pos) => self.entries.insert(pos, index),
        }
    }

    /// Maps every index through `f`; the image must again be injective.
    pub fn map_indices(&self, f: impl Fn(u32) -> u32) -> F2Column {
        F2Column::from_indices(self.entries.iter().map(|&i| f(i)))
    }
}

/// `a + b` over F2.
pub fn add_columns(a: &F2Column, b: &F2Column) -> F2Column {
    F2Column {
        entries: symmetric_difference(&a.entries, &b.entries),
    }
}

/// Pivot of a column, `None` for the zero column.
pub fn pivot(a: &F2Column) -> Option<u32> {
    a.pivot()
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl fmt::Debug for F2Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.entries.iter()).finish()
    }
}

impl FromIterator<u32> for F2Column {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        F2Column::from_indices(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn col(v: &[u32]) -> F2Column {
        F2Column::from_indices(v.iter().copied())
    }

    #[test]
    fn addition_cancels() {
        assert_eq!(add_columns(&col(&[1, 3]), &col(&[3, 5])), col(&[1, 5]));
        assert_eq!(add_columns(&col(&[]), &col(&[2])), col(&[2]));
        assert!(add_columns(&col(&[1, 2, 3]), &col(&[1, 2, 3])).is_empty());
    }

    #[test]
    fn pivot_is_largest_index() {
        assert_eq!(pivot(&col(&[1, 4, 2])), Some(4));
        assert_eq!(pivot(&col(&[])), None);
        assert_eq!(pivot(&col(&[7])), Some(7));
    }

    #[test]
    fn repeated_indices_cancel_on_construction() {
        assert_eq!(col(&[2, 1, 1, 2, 2]), col(&[2]));
        assert!(F2Column::from_sorted(vec![1, 1]).is_none());
        assert!(F2Column::from_sorted(vec![3, 1]).is_none());
    }

    #[test]
    fn toggle_flips() {
        let mut c = col(&[1, 5]);
        c.toggle(3);
        assert_eq!(c, col(&[1, 3, 5]));
        c.toggle(5);
        assert_eq!(c, col(&[1, 3]));
    }

    fn arb_col() -> impl Strategy<Value = F2Column> {
        proptest::collection::vec(0u32..40, 0..20).prop_map(F2Column::from_indices)
    }

    proptest! {
        #[test]
        fn addition_is_a_group(a in arb_col(), b in arb_col(), c in arb_col()) {
            prop_assert_eq!(add_columns(&a, &b), add_columns(&b, &a));
            prop_assert_eq!(
                add_columns(&add_columns(&a, &b), &c),
                add_columns(&a, &add_columns(&b, &c))
            );
            prop_assert!(add_columns(&a, &a).is_empty());
            let mut d = a.clone();
            d.add_assign(&b);
            prop_assert_eq!(d, add_columns(&a, &b));
        }

        #[test]
        fn sum_holds_exactly_the_odd_indices(a in arb_col(), b in arb_col()) {
            let s = add_columns(&a, &b);
            for i in 0..40 {
                prop_assert_eq!(s.contains(i), a.contains(i) ^ b.contains(i));
            }
            prop_assert!(s.entries().windows(2).all(|w| w[0] < w[1]));
        }
    }
}

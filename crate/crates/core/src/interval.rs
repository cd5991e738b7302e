//! Interval-decomposability via simultaneous normal forms of the slice maps.
//!
//! A module is stored slicewise: the lex-sorted bars at every height and, for
//! each pair of consecutive heights, the matrix `eta^i` whose rows are the bars
//! at height `i + 1` and whose columns are the bars at height `i`. Column and
//! row additions are changes of barcode basis; the decision procedure tries to
//! bring every `eta^i` to normal form (at most one entry per row and column)
//! while keeping the matrices to its left in normal form.

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::grade::{bar_order, entangled, Bar};
use crate::graphcode::{Graphcode, GraphcodeError};
use crate::oracle::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("bar {bar} occurs twice at height {height}")]
    DuplicateBars { height: u32, bar: Bar },
    #[error("bars at height {height} are not in strict lexicographic order")]
    NotSorted { height: u32 },
    #[error("bar {bar} is stored at height {height}")]
    WrongHeight { height: u32, bar: Bar },
    #[error("eta^{index} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        index: u32,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("eta^{index} has an entry at ({row}, {col}) between bars that are not entangled")]
    SupportViolated { index: u32, row: usize, col: usize },
    #[error("{operation} at height {height} from {from} to {to} is not allowed")]
    PreconditionViolated {
        operation: &'static str,
        height: u32,
        from: usize,
        to: usize,
    },
    #[error(transparent)]
    InvalidGraphcode(#[from] GraphcodeError),
}

/// Bars per height together with the matrices `eta^1, ..., eta^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaSequence {
    m: u32,
    n: u32,
    bars: Vec<Vec<Bar>>,
    maps: Vec<Matrix>,
}

impl EtaSequence {
    /// `bars[h - 1]` holds the bars at height `h`; `maps[i - 1]` is `eta^i`.
    pub fn new(m: u32, n: u32, bars: Vec<Vec<Bar>>, maps: Vec<Matrix>) -> Result<Self, IntervalError> {
        let eta = Self { m, n, bars, maps };
        eta.validate()?;
        Ok(eta)
    }

    /// Shapes, strict lex order per height, and the support constraint.
    pub fn validate(&self) -> Result<(), IntervalError> {
        let (n, bars, maps) = (self.n, &self.bars, &self.maps);
        if bars.len() != n as usize || maps.len() != (n as usize).saturating_sub(1) {
            return Err(IntervalError::ShapeMismatch {
                index: 0,
                rows: bars.len(),
                cols: maps.len(),
                expected_rows: n as usize,
                expected_cols: (n as usize).saturating_sub(1),
            });
        }
        for (h, layer) in (1..).zip(bars) {
            if let Some(&bar) = layer.iter().find(|b| b.height != h) {
                return Err(IntervalError::WrongHeight { height: h, bar });
            }
            for w in layer.windows(2) {
                match bar_order(&w[0], &w[1]) {
                    std::cmp::Ordering::Less => {}
                    std::cmp::Ordering::Equal => {
                        return Err(IntervalError::DuplicateBars { height: h, bar: w[0] })
                    }
                    std::cmp::Ordering::Greater => return Err(IntervalError::NotSorted { height: h }),
                }
            }
        }
        for (i, eta) in (1..).zip(maps) {
            let (rows, cols) = (bars[i as usize].len(), bars[i as usize - 1].len());
            if eta.num_rows() != rows || eta.num_cols() != cols {
                return Err(IntervalError::ShapeMismatch {
                    index: i,
                    rows: eta.num_rows(),
                    cols: eta.num_cols(),
                    expected_rows: rows,
                    expected_cols: cols,
                });
            }
            for row in 0..rows {
                for col in eta.row(row).ones() {
                    if !entangled(&bars[i as usize][row], &bars[i as usize - 1][col]) {
                        return Err(IntervalError::SupportViolated { index: i, row, col });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Bars at `height`, lex-sorted.
    pub fn bars(&self, height: u32) -> &[Bar] {
        &self.bars[height as usize - 1]
    }

    /// `eta^i`, for `1 <= i < n`.
    pub fn eta(&self, i: u32) -> &Matrix {
        &self.maps[i as usize - 1]
    }

    /// Number of bars over all heights.
    pub fn total_bars(&self) -> usize {
        self.bars.iter().map(Vec::len).sum()
    }

    /// Largest number of bars at a single height.
    pub fn max_bars(&self) -> usize {
        self.bars.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The strict graphcode with one vertex per bar, by height then lex
    /// order, and one edge per nonzero entry.
    pub fn to_graphcode(&self) -> Graphcode {
        let mut offsets = Vec::with_capacity(self.bars.len() + 1);
        let mut vertices = Vec::with_capacity(self.total_bars());
        for layer in &self.bars {
            offsets.push(vertices.len() as u32);
            vertices.extend_from_slice(layer);
        }
        let mut edges = Vec::new();
        for (i, eta) in self.maps.iter().enumerate() {
            for row in 0..eta.num_rows() {
                for col in eta.row(row).ones() {
                    edges.push((offsets[i] + col as u32, offsets[i + 1] + row as u32));
                }
            }
        }
        Graphcode::new(self.m, self.n, vertices, edges).expect("the support constraint gives a strict graphcode")
    }

    fn check_height(&self, i: u32, operation: &'static str, from: usize, to: usize) -> Result<(), IntervalError> {
        if i == 0 || i >= self.n {
            return Err(IntervalError::PreconditionViolated {
                operation,
                height: i,
                from,
                to,
            });
        }
        Ok(())
    }
}

/// Expands `g` to strict form and transcribes its edges per height.
pub fn eta_from_graphcode(g: &Graphcode) -> Result<EtaSequence, IntervalError> {
    g.validate()?;
    let g = g.expand();
    let n = g.n() as usize;
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (v, bar) in g.vertices().iter().enumerate() {
        layers[bar.height as usize - 1].push(v as u32);
    }
    let mut position = vec![0usize; g.num_vertices()];
    let mut bars = Vec::with_capacity(n);
    for (h, layer) in (1..).zip(layers.iter_mut()) {
        layer.sort_by(|&a, &b| bar_order(&g.vertices()[a as usize], &g.vertices()[b as usize]));
        for (k, &v) in layer.iter().enumerate() {
            position[v as usize] = k;
        }
        let sorted: Vec<Bar> = layer.iter().map(|&v| g.vertices()[v as usize]).collect();
        if let Some(w) = sorted.windows(2).find(|w| w[0].same_interval(&w[1])) {
            return Err(IntervalError::DuplicateBars { height: h, bar: w[0] });
        }
        bars.push(sorted);
    }
    let mut maps: Vec<Matrix> = (1..n).map(|i| Matrix::zeros(bars[i].len(), bars[i - 1].len())).collect();
    for &(s, t) in g.edges() {
        let i = g.vertices()[s as usize].height as usize;
        maps[i - 1].set(position[t as usize], position[s as usize], true);
    }
    EtaSequence::new(g.m(), g.n(), bars, maps)
}

/// Adds column `k` of `eta^i` to column `l`, then drops entries of column
/// `l` whose row bar is not entangled with its column bar.
pub fn apply_column_add(eta: &mut EtaSequence, i: u32, k: usize, l: usize) -> Result<(), IntervalError> {
    eta.check_height(i, "column addition", k, l)?;
    let cols = &eta.bars[i as usize - 1];
    if k >= l || l >= cols.len() || !entangled(&cols[k], &cols[l]) {
        return Err(IntervalError::PreconditionViolated {
            operation: "column addition",
            height: i,
            from: k,
            to: l,
        });
    }
    column_add_unchecked(eta, i, k, l);
    Ok(())
}

fn column_add_unchecked(eta: &mut EtaSequence, i: u32, k: usize, l: usize) {
    let target = eta.bars[i as usize - 1][l];
    let rows = &eta.bars[i as usize];
    let matrix = &mut eta.maps[i as usize - 1];
    for (r, row) in rows.iter().enumerate() {
        if matrix.get(r, k) && entangled(row, &target) {
            let value = matrix.get(r, l);
            matrix.set(r, l, !value);
        }
    }
}

/// Adds row `q` of `eta^i` to row `p`, truncated to the support of row `p`,
/// together with the matching addition of column `p` to column `q` in
/// `eta^(i+1)` when it exists.
pub fn apply_row_add(eta: &mut EtaSequence, i: u32, q: usize, p: usize) -> Result<(), IntervalError> {
    eta.check_height(i, "row addition", q, p)?;
    let rows = &eta.bars[i as usize];
    if p >= q || q >= rows.len() || !entangled(&rows[p], &rows[q]) {
        return Err(IntervalError::PreconditionViolated {
            operation: "row addition",
            height: i,
            from: q,
            to: p,
        });
    }
    row_add_unchecked(eta, i, q, p);
    Ok(())
}

fn row_add_unchecked(eta: &mut EtaSequence, i: u32, q: usize, p: usize) {
    let target = eta.bars[i as usize][p];
    let cols = &eta.bars[i as usize - 1];
    let matrix = &mut eta.maps[i as usize - 1];
    let source: Vec<usize> = matrix.row(q).ones().collect();
    for c in source {
        if entangled(&target, &cols[c]) {
            let value = matrix.get(p, c);
            matrix.set(p, c, !value);
        }
    }
    if i + 1 < eta.n {
        column_add_unchecked(eta, i + 1, p, q);
    }
}

/// Replaces bar `l` at `height` by its sum with bar `k`, an isomorphism of
/// the module: a row addition in `eta^(height-1)` with its companion column
/// addition in `eta^height`.
pub fn apply_basis_change(eta: &mut EtaSequence, height: u32, k: usize, l: usize) -> Result<(), IntervalError> {
    let bars = eta.bars.get(height.wrapping_sub(1) as usize);
    let allowed = bars.is_some_and(|b| k < l && l < b.len() && entangled(&b[k], &b[l]));
    if !allowed {
        return Err(IntervalError::PreconditionViolated {
            operation: "basis change",
            height,
            from: k,
            to: l,
        });
    }
    if height > 1 {
        row_add_unchecked(eta, height - 1, l, k);
    } else if height < eta.n {
        column_add_unchecked(eta, height, k, l);
    }
    Ok(())
}

/// At most one nonzero entry in every row and every column of every `eta^i`.
pub fn normal_form_check(eta: &EtaSequence) -> bool {
    eta.maps.iter().all(|matrix| {
        (0..matrix.num_rows()).all(|r| matrix.row(r).ones().nth(1).is_none())
            && (0..matrix.num_cols()).all(|c| matrix.column(c).ones().nth(1).is_none())
    })
}

/// Which column additions are allowed in `eta^height`, given that the
/// matrices to its left are in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidOpTable {
    height: u32,
    size: usize,
    valid: Vec<bool>,
}

impl ValidOpTable {
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Column `k` may be added to column `l`.
    pub fn get(&self, k: usize, l: usize) -> bool {
        k < l && l < self.size && self.valid[k * self.size + l]
    }
}

/// The unique column holding the entry of each row, if any.
fn row_pivots(matrix: &Matrix) -> Vec<Option<usize>> {
    (0..matrix.num_rows())
        .map(|r| {
            let mut ones = matrix.row(r).ones();
            let first = ones.next();
            assert!(ones.next().is_none(), "matrix to the left is not in normal form");
            first
        })
        .collect()
}

/// Column `k` may be added to column `l` at `height` if the bars are
/// entangled and the addition extends along the paths to the left: the path
/// through `l` starts here, or its predecessor misses bar `k`, or the
/// predecessors themselves admit the addition in `previous`.
///
/// # Panics
/// If `eta^(height-1)` is not in normal form, or `previous` is missing or
/// belongs to another height when `height > 1`.
pub fn update_valid_ops(eta: &EtaSequence, height: u32, previous: Option<&ValidOpTable>) -> ValidOpTable {
    let bars = eta.bars(height);
    let size = bars.len();
    let mut valid = vec![false; size * size];
    let left = (height > 1).then(|| {
        let table = previous.expect("a table for the previous height");
        assert_eq!(table.height + 1, height, "table belongs to another height");
        (row_pivots(eta.eta(height - 1)), eta.bars(height - 1), table)
    });
    for l in 0..size {
        for k in 0..l {
            if !entangled(&bars[k], &bars[l]) {
                continue;
            }
            valid[k * size + l] = match &left {
                None => true,
                Some((pivots, below, table)) => match pivots[l] {
                    None => true,
                    Some(t) => !bars[k].intersects(&below[t]) || pivots[k].is_some_and(|s| table.get(s, t)),
                },
            };
        }
    }
    ValidOpTable { height, size, valid }
}

/// An interval module given by one bar per height on a contiguous range,
/// each entangled with the one below.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StaircaseInterval {
    slices: Vec<Bar>,
}

impl StaircaseInterval {
    /// `None` unless the slices are nonempty, nonzero, on consecutive heights
    /// and entangled upwards.
    pub fn new(slices: Vec<Bar>) -> Option<Self> {
        let ok = !slices.is_empty()
            && slices.iter().all(|b| b.birth < b.death)
            && slices
                .windows(2)
                .all(|w| w[1].height == w[0].height + 1 && entangled(&w[1], &w[0]));
        ok.then_some(Self { slices })
    }

    pub fn slices(&self) -> &[Bar] {
        &self.slices
    }

    pub fn first_height(&self) -> u32 {
        self.slices[0].height
    }

    pub fn last_height(&self) -> u32 {
        self.slices[self.slices.len() - 1].height
    }

    fn sort_key(&self) -> Vec<(u32, u32, u32)> {
        self.slices.iter().map(|b| (b.height, b.birth, b.death)).collect()
    }
}

/// Sorts intervals into the canonical output order.
pub fn sort_intervals(intervals: &mut [StaircaseInterval]) {
    intervals.sort_by_cached_key(StaircaseInterval::sort_key);
}

/// The graphcode of a direct sum of intervals: one path per interval.
pub fn intervals_to_graphcode(m: u32, n: u32, intervals: &[StaircaseInterval]) -> Result<Graphcode, GraphcodeError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for interval in intervals {
        let start = vertices.len() as u32;
        vertices.extend_from_slice(&interval.slices);
        edges.extend((start..start + interval.slices.len() as u32 - 1).map(|v| (v, v + 1)));
    }
    Graphcode::new(m, n, vertices, edges)
}

/// One block per interval: an `interval` line, then `h b d` per slice.
pub fn write_intervals(intervals: &[StaircaseInterval]) -> String {
    let mut out = String::new();
    for interval in intervals {
        out.push_str("interval\n");
        for bar in &interval.slices {
            let _ = writeln!(out, "{} {} {}", bar.height, bar.birth, bar.death);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureStep {
    /// An earlier column of the same matrix already owns the pivot row.
    PivotConflict,
    /// A required row addition joins bars that are not entangled.
    RowEliminationFailed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionResult {
    /// The intervals of the decomposition, in canonical order.
    Decomposed { intervals: Vec<StaircaseInterval> },
    /// `involved` lists the column bar being reduced, then the bars at the
    /// next height or the earlier column that block it.
    NotIntervalDecomposable {
        height: u32,
        step: FailureStep,
        involved: Vec<Bar>,
    },
}

impl DecisionResult {
    pub fn is_decomposed(&self) -> bool {
        matches!(self, Self::Decomposed { .. })
    }
}

/// Outcome of the decision together with the work it took and the matrices
/// it ended with.
#[derive(Clone, Debug)]
pub struct Decision {
    pub result: DecisionResult,
    pub column_additions: u64,
    pub row_additions: u64,
    pub reduced: EtaSequence,
}

impl Decision {
    pub fn operations(&self) -> u64 {
        self.column_additions + self.row_additions
    }
}

pub fn decide_interval_decomposition(eta: EtaSequence) -> DecisionResult {
    decide_interval_decomposition_with_stats(eta).result
}

/// Normalizes `eta^1, ..., eta^(n-1)` from left to right. Each column is
/// first reduced by valid additions of earlier columns; a remaining pivot
/// must be new in its row, and the entries above it are cleared by row
/// additions of the pivot row.
pub fn decide_interval_decomposition_with_stats(mut eta: EtaSequence) -> Decision {
    let mut column_additions = 0u64;
    let mut row_additions = 0u64;
    let mut previous: Option<ValidOpTable> = None;
    for i in 1..eta.n {
        let table = update_valid_ops(&eta, i, previous.as_ref());
        let cols = eta.bars(i).len();
        let rows = eta.bars(i + 1).len();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
        let mut col_of_pivot: Vec<Option<usize>> = vec![None; rows];
        for j in 0..cols {
            // earlier columns are single entries
            for (k, pivot) in pivot_of_col.iter().enumerate().take(j) {
                if let Some(r) = *pivot {
                    if table.get(k, j) && eta.eta(i).get(r, j) {
                        column_add_unchecked(&mut eta, i, k, j);
                        column_additions += 1;
                    }
                }
            }
            let column = eta.eta(i).column(j);
            let Some(k) = column.ones().last() else {
                continue;
            };
            if let Some(owner) = col_of_pivot[k] {
                return Decision {
                    result: DecisionResult::NotIntervalDecomposable {
                        height: i,
                        step: FailureStep::PivotConflict,
                        involved: vec![eta.bars(i)[j], eta.bars(i)[owner], eta.bars(i + 1)[k]],
                    },
                    column_additions,
                    row_additions,
                    reduced: eta,
                };
            }
            let above: Vec<usize> = column.ones().filter(|&p| p < k).collect();
            for &p in above.iter().rev() {
                let (lower, upper) = (eta.bars(i + 1)[p], eta.bars(i + 1)[k]);
                if !entangled(&lower, &upper) {
                    return Decision {
                        result: DecisionResult::NotIntervalDecomposable {
                            height: i,
                            step: FailureStep::RowEliminationFailed,
                            involved: vec![eta.bars(i)[j], lower, upper],
                        },
                        column_additions,
                        row_additions,
                        reduced: eta,
                    };
                }
                row_add_unchecked(&mut eta, i, k, p);
                row_additions += 1;
                if i + 1 < eta.n {
                    column_additions += 1;
                }
            }
            pivot_of_col[j] = Some(k);
            col_of_pivot[k] = Some(j);
        }
        previous = Some(table);
    }
    debug_assert!(normal_form_check(&eta));
    let intervals = paths(&eta);
    Decision {
        result: DecisionResult::Decomposed { intervals },
        column_additions,
        row_additions,
        reduced: eta,
    }
}

/// The directed paths of a sequence in normal form.
fn paths(eta: &EtaSequence) -> Vec<StaircaseInterval> {
    let mut intervals = Vec::new();
    for h in 1..=eta.n {
        let starts: Vec<usize> = if h == 1 {
            (0..eta.bars(1).len()).collect()
        } else {
            let pivots = row_pivots(eta.eta(h - 1));
            (0..eta.bars(h).len()).filter(|&r| pivots[r].is_none()).collect()
        };
        for start in starts {
            let mut slices = vec![eta.bars(h)[start]];
            let (mut height, mut index) = (h, start);
            while height < eta.n {
                match eta.eta(height).column(index).ones().next() {
                    Some(next) => {
                        height += 1;
                        index = next;
                        slices.push(eta.bars(height)[index]);
                    }
                    None => break,
                }
            }
            intervals.push(StaircaseInterval::new(slices).expect("normal-form paths are staircases"));
        }
    }
    sort_intervals(&mut intervals);
    intervals
}

/// Random sum of up to `max_intervals` staircases with pairwise distinct bars
/// at every height, in canonical order.
pub fn random_interval_sum<R: Rng>(rng: &mut R, m: u32, n: u32, max_intervals: usize) -> Vec<StaircaseInterval> {
    let count = rng.gen_range(1..=max_intervals);
    let mut intervals: Vec<StaircaseInterval> = Vec::with_capacity(count);
    let mut attempts = 0;
    while intervals.len() < count && attempts < 16 * count {
        attempts += 1;
        let slices = crate::random::random_staircase(rng, m, n);
        let clash = intervals.iter().any(|other| {
            other
                .slices
                .iter()
                .any(|a| slices.iter().any(|b| a.height == b.height && a.same_interval(b)))
        });
        if !clash {
            intervals.push(StaircaseInterval::new(slices).expect("random staircases are entangled upwards"));
        }
    }
    sort_intervals(&mut intervals);
    intervals
}

/// Applies up to `steps` random basis changes; returns how many were applied.
/// Heights without an entangled pair are skipped.
pub fn scramble<R: Rng>(rng: &mut R, eta: &mut EtaSequence, steps: usize) -> usize {
    let mut applied = 0;
    for _ in 0..steps {
        let height = rng.gen_range(1..=eta.n);
        let bars = eta.bars(height);
        let pairs: Vec<(usize, usize)> = (0..bars.len())
            .flat_map(|l| (0..l).map(move |k| (k, l)))
            .filter(|&(k, l)| entangled(&bars[k], &bars[l]))
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let (k, l) = pairs[rng.gen_range(0..pairs.len())];
        apply_basis_change(eta, height, k, l).expect("pair is entangled");
        applied += 1;
    }
    applied
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_graphcode, BuildMode};
    use crate::grade::Bigrade;
    use crate::presentation::{Presentation, Relation};
    use crate::random::rng_from_seed;

    fn bar(b: u32, d: u32, h: u32) -> Bar {
        Bar::new(b, d, h)
    }

    fn gc(m: u32, n: u32, v: &[(u32, u32, u32)], e: &[(u32, u32)]) -> Graphcode {
        Graphcode::new(m, n, v.iter().map(|&(b, d, h)| bar(b, d, h)).collect(), e.to_vec()).unwrap()
    }

    fn entries(matrix: &Matrix) -> Vec<Vec<bool>> {
        (0..matrix.num_rows())
            .map(|r| (0..matrix.num_cols()).map(|c| matrix.get(r, c)).collect())
            .collect()
    }

    #[test]
    fn empty_and_path_transcriptions() {
        let eta = eta_from_graphcode(&Graphcode::empty(3, 1)).unwrap();
        assert_eq!(eta.total_bars(), 0);
        let eta = eta_from_graphcode(&gc(3, 2, &[(1, 3, 1), (1, 2, 2)], &[(0, 1)])).unwrap();
        assert_eq!(entries(eta.eta(1)), vec![vec![true]]);
    }

    #[test]
    fn two_sources_into_one_row() {
        let g = gc(4, 2, &[(2, 4, 1), (1, 3, 1), (1, 3, 2)], &[(0, 2), (1, 2)]);
        let eta = eta_from_graphcode(&g).unwrap();
        assert_eq!(eta.bars(1), &[bar(1, 3, 1), bar(2, 4, 1)]);
        assert_eq!(entries(eta.eta(1)), vec![vec![true, true]]);
    }

    #[test]
    fn duplicate_bars_are_rejected() {
        let g = gc(3, 1, &[(1, 3, 1), (1, 3, 1)], &[]);
        assert_eq!(
            eta_from_graphcode(&g),
            Err(IntervalError::DuplicateBars { height: 1, bar: bar(1, 3, 1) })
        );
    }

    #[test]
    fn column_addition_truncates() {
        // [1,4) into [2,5) with the target row [1,2): 2 < 2 fails, so the
        // entry does not survive
        let bars = vec![vec![bar(1, 4, 1), bar(2, 5, 1)], vec![bar(1, 2, 2)]];
        let mut m = Matrix::zeros(1, 2);
        m.set(0, 0, true);
        let mut eta = EtaSequence::new(6, 2, bars, vec![m]).unwrap();
        apply_column_add(&mut eta, 1, 0, 1).unwrap();
        assert_eq!(entries(eta.eta(1)), vec![vec![true, false]]);
        assert!(matches!(
            apply_column_add(&mut eta, 1, 1, 1),
            Err(IntervalError::PreconditionViolated { .. })
        ));
        assert!(apply_column_add(&mut eta, 1, 1, 0).is_err());
    }

    #[test]
    fn row_addition_updates_next_matrix() {
        let g = gc(
            5,
            3,
            &[(2, 5, 1), (1, 4, 2), (2, 5, 2), (1, 3, 3), (2, 4, 3)],
            &[(0, 2), (1, 3), (2, 4)],
        );
        let mut eta = eta_from_graphcode(&g).unwrap();
        apply_row_add(&mut eta, 1, 1, 0).unwrap();
        assert_eq!(entries(eta.eta(1)), vec![vec![true], vec![true]]);
        assert_eq!(entries(eta.eta(2)), vec![vec![true, true], vec![false, true]]);
    }

    #[test]
    fn first_height_allows_every_entangled_pair() {
        let g = gc(6, 1, &[(1, 4, 1), (2, 5, 1), (4, 6, 1)], &[]);
        let eta = eta_from_graphcode(&g).unwrap();
        let table = update_valid_ops(&eta, 1, None);
        assert!(table.get(0, 1));
        assert!(!table.get(0, 2));
        assert!(table.get(1, 2) == entangled(&bar(2, 5, 1), &bar(4, 6, 1)));
        assert!(!table.get(1, 0));
    }

    #[test]
    fn validity_through_the_left_neighbors() {
        // height 2 holds [2,6), [3,5), [5,7); height 3 holds [1,4), [2,4),
        // [3,6), each fed by the bar at the same position
        let g = gc(
            7,
            3,
            &[(2, 6, 2), (3, 5, 2), (5, 7, 2), (1, 4, 3), (2, 4, 3), (3, 6, 3)],
            &[(0, 3), (1, 4), (2, 5)],
        );
        let eta = eta_from_graphcode(&g).unwrap();
        let t1 = update_valid_ops(&eta, 1, None);
        let t2 = update_valid_ops(&eta, 2, Some(&t1));
        let t3 = update_valid_ops(&eta, 3, Some(&t2));
        // [2,6) does not map onto [3,5) one height down
        assert!(!t3.get(0, 1));
        // [1,4) misses [5,7)
        assert!(t3.get(0, 2));
    }

    #[test]
    fn validity_propagates_along_paths() {
        let chained = gc(
            4,
            3,
            &[(1, 3, 1), (2, 4, 1), (1, 3, 2), (2, 4, 2), (1, 3, 3), (2, 4, 3)],
            &[(0, 2), (1, 3), (2, 4), (3, 5)],
        );
        let broken = gc(
            4,
            3,
            &[(1, 4, 1), (2, 3, 1), (1, 3, 2), (2, 3, 2), (1, 3, 3), (2, 3, 3)],
            &[(0, 2), (1, 3), (2, 4), (3, 5)],
        );
        for (g, expected) in [(chained, true), (broken, false)] {
            let eta = eta_from_graphcode(&g).unwrap();
            let t1 = update_valid_ops(&eta, 1, None);
            let t2 = update_valid_ops(&eta, 2, Some(&t1));
            let t3 = update_valid_ops(&eta, 3, Some(&t2));
            assert_eq!(t1.get(0, 1), expected);
            assert_eq!(t2.get(0, 1), expected);
            assert_eq!(t3.get(0, 1), expected);
        }
    }

    #[test]
    fn normal_form_examples() {
        let bars = vec![vec![bar(1, 3, 1), bar(2, 4, 1)], vec![bar(1, 3, 2), bar(2, 4, 2)]];
        let eta = EtaSequence::new(4, 2, bars.clone(), vec![Matrix::identity(2)]).unwrap();
        assert!(normal_form_check(&eta));
        let mut full = Matrix::zeros(2, 2);
        full.set(0, 1, true);
        full.set(1, 1, true);
        let eta = EtaSequence::new(4, 2, bars, vec![full]).unwrap();
        assert!(!normal_form_check(&eta));
    }

    #[test]
    fn single_path_is_one_interval() {
        let g = gc(3, 2, &[(1, 3, 1), (1, 2, 2)], &[(0, 1)]);
        let result = decide_interval_decomposition(eta_from_graphcode(&g).unwrap());
        let expected = StaircaseInterval::new(vec![bar(1, 3, 1), bar(1, 2, 2)]).unwrap();
        assert_eq!(result, DecisionResult::Decomposed { intervals: vec![expected] });
    }

    #[test]
    fn mixed_basis_is_undone() {
        let a = StaircaseInterval::new(vec![bar(1, 3, 1), bar(1, 3, 2)]).unwrap();
        let b = StaircaseInterval::new(vec![bar(2, 4, 1), bar(2, 4, 2)]).unwrap();
        let g = intervals_to_graphcode(4, 2, &[a.clone(), b.clone()]).unwrap();
        let mut eta = eta_from_graphcode(&g).unwrap();
        apply_basis_change(&mut eta, 1, 0, 1).unwrap();
        assert_eq!(entries(eta.eta(1)), vec![vec![true, true], vec![false, true]]);
        let decision = decide_interval_decomposition_with_stats(eta);
        assert_eq!(decision.result, DecisionResult::Decomposed { intervals: vec![a, b] });
        assert!(normal_form_check(&decision.reduced));
    }

    #[test]
    fn three_lines_in_a_plane_are_rejected() {
        let gens = vec![Bigrade::new(1, 3), Bigrade::new(2, 2), Bigrade::new(3, 1)];
        let rel = Relation::new(Bigrade::new(3, 3), [0, 1, 2].into_iter().collect());
        let p = Presentation::new(gens, vec![rel]).unwrap();
        let g = build_graphcode(&p, BuildMode::Uncompressed);
        let result = decide_interval_decomposition(eta_from_graphcode(&g).unwrap());
        assert!(!result.is_decomposed(), "{result:?}");
    }

    #[test]
    fn scrambled_sums_are_recovered() {
        let mut rng = rng_from_seed(21);
        for _ in 0..200 {
            let intervals = random_interval_sum(&mut rng, 5, 5, 5);
            let g = intervals_to_graphcode(5, 5, &intervals).unwrap();
            let mut eta = eta_from_graphcode(&g).unwrap();
            scramble(&mut rng, &mut eta, 10);
            let result = decide_interval_decomposition(eta);
            assert_eq!(result, DecisionResult::Decomposed { intervals });
        }
    }

    #[test]
    fn interval_text_format() {
        let a = StaircaseInterval::new(vec![bar(1, 3, 1), bar(1, 2, 2)]).unwrap();
        assert_eq!(write_intervals(&[a]), "interval\n1 1 3\n2 1 2\n");
    }

    #[test]
    fn staircases_must_be_entangled() {
        assert!(StaircaseInterval::new(vec![]).is_none());
        assert!(StaircaseInterval::new(vec![bar(1, 2, 1), bar(1, 3, 2)]).is_none());
        assert!(StaircaseInterval::new(vec![bar(1, 3, 1), bar(1, 2, 3)]).is_none());
    }
}

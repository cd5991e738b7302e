//! Modules written out explicitly on every point of the grid.

use std::collections::VecDeque;

use super::linalg::{BitVec, Echelon, Matrix};
use super::{OracleError, MAX_GRID_POINTS, MAX_TOTAL_DIMENSION};
use crate::graphcode::Graphcode;
use crate::presentation::Presentation;

/// A module on `{1..m} x {1..n}`: a vector space per point and a matrix per
/// unit arrow, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridModule {
    m: u32,
    n: u32,
    dims: Vec<usize>,
    /// `(x, y) -> (x + 1, y)`, stored at the source; empty when `x = m`.
    horizontal: Vec<Matrix>,
    /// `(x, y) -> (x, y + 1)`, stored at the source; empty when `y = n`.
    vertical: Vec<Matrix>,
}

/// Dimensions at every grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionFunction {
    pub m: u32,
    pub n: u32,
    /// Row-major by height: `(x, y)` sits at `(y - 1) * m + (x - 1)`.
    pub dims: Vec<usize>,
}

impl DimensionFunction {
    pub fn get(&self, x: u32, y: u32) -> usize {
        self.dims[((y - 1) * self.m + (x - 1)) as usize]
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Pointwise sum; `None` if the grids differ.
    pub fn add(&self, other: &DimensionFunction) -> Option<DimensionFunction> {
        ((self.m, self.n) == (other.m, other.n)).then(|| DimensionFunction {
            m: self.m,
            n: self.n,
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Rank of `M(p) -> M(q)` for every pair `p <= q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankInvariant {
    pub m: u32,
    pub n: u32,
    ranks: Vec<usize>,
}

impl RankInvariant {
    /// `None` unless `(x1, y1) <= (x2, y2)`.
    pub fn get(&self, (x1, y1): (u32, u32), (x2, y2): (u32, u32)) -> Option<usize> {
        if x1 > x2 || y1 > y2 {
            return None;
        }
        let points = (self.m * self.n) as usize;
        let p = ((y1 - 1) * self.m + (x1 - 1)) as usize;
        let q = ((y2 - 1) * self.m + (x2 - 1)) as usize;
        Some(self.ranks[p * points + q])
    }
}

impl GridModule {
    pub fn zero(m: u32, n: u32) -> Self {
        let points = m as usize * n as usize;
        Self {
            m,
            n,
            dims: vec![0; points],
            horizontal: vec![Matrix::zeros(0, 0); points],
            vertical: vec![Matrix::zeros(0, 0); points],
        }
    }

    /// Assembles a module from explicit data, checking shapes and
    /// commutativity. Arrow lists are indexed like the points; entries for
    /// arrows leaving the grid are ignored.
    pub fn from_parts(
        m: u32,
        n: u32,
        dims: Vec<usize>,
        horizontal: Vec<Matrix>,
        vertical: Vec<Matrix>,
    ) -> Result<Self, String> {
        let points = m as usize * n as usize;
        if dims.len() != points || horizontal.len() != points || vertical.len() != points {
            return Err("one entry per grid point expected".into());
        }
        let mut module = Self {
            m,
            n,
            dims,
            horizontal,
            vertical,
        };
        for y in 1..=n {
            for x in 1..=m {
                let p = module.index(x, y);
                if x == m {
                    module.horizontal[p] = Matrix::zeros(0, module.dims[p]);
                } else {
                    let q = module.index(x + 1, y);
                    let a = &module.horizontal[p];
                    if (a.num_rows(), a.num_cols()) != (module.dims[q], module.dims[p]) {
                        return Err(format!("horizontal map at ({x}, {y}) has the wrong shape"));
                    }
                }
                if y == n {
                    module.vertical[p] = Matrix::zeros(0, module.dims[p]);
                } else {
                    let q = module.index(x, y + 1);
                    let a = &module.vertical[p];
                    if (a.num_rows(), a.num_cols()) != (module.dims[q], module.dims[p]) {
                        return Err(format!("vertical map at ({x}, {y}) has the wrong shape"));
                    }
                }
            }
        }
        if !module.is_commutative() {
            return Err("the maps do not commute".into());
        }
        Ok(module)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub(crate) fn index(&self, x: u32, y: u32) -> usize {
        ((y - 1) * self.m + (x - 1)) as usize
    }

    pub fn num_points(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, x: u32, y: u32) -> usize {
        self.dims[self.index(x, y)]
    }

    pub fn total_dimension(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn horizontal(&self, x: u32, y: u32) -> Option<&Matrix> {
        (x < self.m).then(|| &self.horizontal[self.index(x, y)])
    }

    pub fn vertical(&self, x: u32, y: u32) -> Option<&Matrix> {
        (y < self.n).then(|| &self.vertical[self.index(x, y)])
    }

    pub(crate) fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Every unit arrow as `(source, target, horizontal, matrix)`.
    pub(crate) fn arrows(&self) -> Vec<(usize, usize, bool, &Matrix)> {
        let mut out = Vec::new();
        for y in 1..=self.n {
            for x in 1..=self.m {
                let p = self.index(x, y);
                if x < self.m {
                    out.push((p, self.index(x + 1, y), true, &self.horizontal[p]));
                }
                if y < self.n {
                    out.push((p, self.index(x, y + 1), false, &self.vertical[p]));
                }
            }
        }
        out
    }

    /// Every unit square commutes.
    pub fn is_commutative(&self) -> bool {
        for y in 1..self.n {
            for x in 1..self.m {
                let p = self.index(x, y);
                let right_then_up = self.vertical[self.index(x + 1, y)].mul(&self.horizontal[p]);
                let up_then_right = self.horizontal[self.index(x, y + 1)].mul(&self.vertical[p]);
                if right_then_up != up_then_right {
                    return false;
                }
            }
        }
        true
    }

    /// The structure map `M(p) -> M(q)` for `p <= q`.
    pub fn map_between(&self, (x1, y1): (u32, u32), (x2, y2): (u32, u32)) -> Matrix {
        assert!(x1 <= x2 && y1 <= y2, "points are not comparable");
        let mut acc = Matrix::identity(self.dim(x1, y1));
        for x in x1..x2 {
            acc = self.horizontal[self.index(x, y1)].mul(&acc);
        }
        for y in y1..y2 {
            acc = self.vertical[self.index(x2, y)].mul(&acc);
        }
        acc
    }

    pub fn dimension_function(&self) -> DimensionFunction {
        DimensionFunction {
            m: self.m,
            n: self.n,
            dims: self.dims.clone(),
        }
    }

    pub fn rank_invariant(&self) -> Result<RankInvariant, OracleError> {
        let points = self.num_points();
        let pairs = points * points;
        if pairs > super::MAX_RANK_PAIRS {
            return Err(OracleError::BudgetExceeded {
                what: "rank invariant point pairs",
                limit: super::MAX_RANK_PAIRS,
                actual: pairs,
            });
        }
        let mut ranks = vec![usize::MAX; pairs];
        for y1 in 1..=self.n {
            for x1 in 1..=self.m {
                let p = self.index(x1, y1);
                // walk up first, then right along each row
                let mut column = Matrix::identity(self.dims[p]);
                for y2 in y1..=self.n {
                    if y2 > y1 {
                        column = self.vertical[self.index(x1, y2 - 1)].mul(&column);
                    }
                    let mut acc = column.clone();
                    for x2 in x1..=self.m {
                        if x2 > x1 {
                            acc = self.horizontal[self.index(x2 - 1, y2)].mul(&acc);
                        }
                        ranks[p * points + self.index(x2, y2)] = acc.rank();
                    }
                }
            }
        }
        Ok(RankInvariant {
            m: self.m,
            n: self.n,
            ranks,
        })
    }

    pub fn direct_sum(&self, other: &GridModule) -> Result<GridModule, OracleError> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(OracleError::ExtentMismatch {
                left: (self.m, self.n),
                right: (other.m, other.n),
            });
        }
        let block = |a: &Matrix, b: &Matrix| {
            let mut out = Matrix::zeros(a.num_rows() + b.num_rows(), a.num_cols() + b.num_cols());
            for i in 0..a.num_rows() {
                for j in a.row(i).ones() {
                    out.set(i, j, true);
                }
            }
            for i in 0..b.num_rows() {
                for j in b.row(i).ones() {
                    out.set(a.num_rows() + i, a.num_cols() + j, true);
                }
            }
            out
        };
        Ok(GridModule {
            m: self.m,
            n: self.n,
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            horizontal: self
                .horizontal
                .iter()
                .zip(&other.horizontal)
                .map(|(a, b)| block(a, b))
                .collect(),
            vertical: self
                .vertical
                .iter()
                .zip(&other.vertical)
                .map(|(a, b)| block(a, b))
                .collect(),
        })
    }

    /// The submodule spanned at each point by the columns of `bases[p]`,
    /// which must be linearly independent and closed under the maps.
    pub(crate) fn submodule(&self, bases: &[Matrix]) -> GridModule {
        let mut out = GridModule::zero(self.m, self.n);
        out.dims = bases.iter().map(Matrix::num_cols).collect();
        for (p, q, horizontal, a) in self.arrows() {
            let image = a.mul(&bases[p]);
            let restricted = bases[q]
                .solve(&image)
                .expect("submodule is closed under the structure maps");
            if horizontal {
                out.horizontal[p] = restricted;
            } else {
                out.vertical[p] = restricted;
            }
        }
        for y in 1..=self.n {
            for x in 1..=self.m {
                let p = self.index(x, y);
                if x == self.m {
                    out.horizontal[p] = Matrix::zeros(0, out.dims[p]);
                }
                if y == self.n {
                    out.vertical[p] = Matrix::zeros(0, out.dims[p]);
                }
            }
        }
        out
    }

    pub fn is_thin(&self) -> bool {
        self.dims.iter().all(|&d| d <= 1)
    }

    /// Points with nonzero dimension as `(x, y)`.
    pub fn support(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for y in 1..=self.n {
            for x in 1..=self.m {
                if self.dim(x, y) > 0 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// For `p <= q <= r` with `p` and `r` in the support, `q` is too.
    pub fn support_is_convex(&self) -> bool {
        let support = self.support();
        for &(x1, y1) in &support {
            for &(x2, y2) in &support {
                if x1 > x2 || y1 > y2 {
                    continue;
                }
                for y in y1..=y2 {
                    for x in x1..=x2 {
                        if self.dim(x, y) == 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn support_is_connected(&self) -> bool {
        let support = self.support();
        let Some(&start) = support.first() else {
            return true;
        };
        let mut seen = vec![false; self.num_points()];
        seen[self.index(start.0, start.1)] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some((x, y)) = queue.pop_front() {
            let candidates = [
                (x.wrapping_sub(1), y),
                (x + 1, y),
                (x, y.wrapping_sub(1)),
                (x, y + 1),
            ];
            for (a, b) in candidates {
                if a >= 1 && a <= self.m && b >= 1 && b <= self.n {
                    let q = self.index(a, b);
                    if !seen[q] && self.dims[q] > 0 {
                        seen[q] = true;
                        count += 1;
                        queue.push_back((a, b));
                    }
                }
            }
        }
        count == support.len()
    }

    /// Thin, with convex connected support, and every arrow inside the
    /// support is nonzero.
    pub fn is_interval_module(&self) -> bool {
        if !self.is_thin() || self.support().is_empty() {
            return false;
        }
        if !self.support_is_convex() || !self.support_is_connected() {
            return false;
        }
        self.arrows()
            .into_iter()
            .all(|(p, q, _, a)| self.dims[p] == 0 || self.dims[q] == 0 || !a.is_zero())
    }
}

fn check_grid(m: u32, n: u32) -> Result<(), OracleError> {
    let points = m as usize * n as usize;
    if points > MAX_GRID_POINTS {
        return Err(OracleError::BudgetExceeded {
            what: "grid points",
            limit: MAX_GRID_POINTS,
            actual: points,
        });
    }
    Ok(())
}

fn check_total(total: usize) -> Result<(), OracleError> {
    if total > MAX_TOTAL_DIMENSION {
        return Err(OracleError::BudgetExceeded {
            what: "total dimension",
            limit: MAX_TOTAL_DIMENSION,
            actual: total,
        });
    }
    Ok(())
}

/// `coker(p)` on the grid of `p`, with a basis of non-pivot generators at
/// every point.
pub fn module_from_presentation(p: &Presentation) -> Result<GridModule, OracleError> {
    let (m, n) = (p.m(), p.n());
    check_grid(m, n)?;
    let g = p.num_generators();
    let mut module = GridModule::zero(m, n);
    let mut echelons = Vec::with_capacity(module.num_points());
    let mut coords: Vec<Vec<usize>> = Vec::with_capacity(module.num_points());
    let mut total = 0;
    for y in 1..=n {
        for x in 1..=m {
            let mut ech = Echelon::new(g);
            for rel in p.relations() {
                if rel.grade.scale <= x && rel.grade.height <= y {
                    let mut v = BitVec::zeros(g);
                    for i in rel.column.iter() {
                        v.set(i as usize, true);
                    }
                    ech.insert(v);
                }
            }
            let mut leading = vec![false; g];
            for r in ech.rows() {
                leading[r.leading().expect("stored rows are nonzero")] = true;
            }
            let mut coord = vec![usize::MAX; g];
            let mut dim = 0;
            for (i, grade) in p.generators().iter().enumerate() {
                if grade.scale <= x && grade.height <= y && !leading[i] {
                    coord[i] = dim;
                    dim += 1;
                }
            }
            total += dim;
            check_total(total)?;
            let idx = module.index(x, y);
            module.dims[idx] = dim;
            echelons.push(ech);
            coords.push(coord);
        }
    }
    let basis_of = |coord: &Vec<usize>| -> Vec<usize> {
        let mut b: Vec<(usize, usize)> = coord
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != usize::MAX)
            .map(|(i, &c)| (c, i))
            .collect();
        b.sort_unstable();
        b.into_iter().map(|(_, i)| i).collect()
    };
    let induced = |src: usize, dst: usize| -> Matrix {
        let basis = basis_of(&coords[src]);
        let mut a = Matrix::zeros(module.dims[dst], basis.len());
        for (j, &gen) in basis.iter().enumerate() {
            let mut v = BitVec::zeros(g);
            v.set(gen, true);
            let reduced = echelons[dst].reduce(v);
            for i in reduced.ones() {
                let c = coords[dst][i];
                debug_assert_ne!(c, usize::MAX, "reduced vector leaves the active generators");
                a.set(c, j, true);
            }
        }
        a
    };
    let mut horizontal = Vec::with_capacity(module.num_points());
    let mut vertical = Vec::with_capacity(module.num_points());
    for y in 1..=n {
        for x in 1..=m {
            let p = module.index(x, y);
            horizontal.push(if x < m {
                induced(p, module.index(x + 1, y))
            } else {
                Matrix::zeros(0, module.dims[p])
            });
            vertical.push(if y < n {
                induced(p, module.index(x, y + 1))
            } else {
                Matrix::zeros(0, module.dims[p])
            });
        }
    }
    module.horizontal = horizontal;
    module.vertical = vertical;
    debug_assert!(module.is_commutative());
    Ok(module)
}

/// The module of a graphcode: at `(x, y)` one basis vector per bar of height
/// `y` containing `x`; bars continue to the right while alive, and go up
/// along edges.
pub fn module_from_graphcode(g: &Graphcode) -> Result<GridModule, OracleError> {
    let (m, n) = (g.m(), g.n());
    check_grid(m, n)?;
    let g = g.expand();
    let mut module = GridModule::zero(m, n);
    // basis of each point: vertex ids, in increasing order
    let mut basis: Vec<Vec<u32>> = vec![Vec::new(); module.num_points()];
    for (v, bar) in g.vertices().iter().enumerate() {
        for x in bar.birth..bar.death.min(m + 1) {
            basis[module.index(x, bar.height)].push(v as u32);
        }
    }
    let total = basis.iter().map(Vec::len).sum();
    check_total(total)?;
    module.dims = basis.iter().map(Vec::len).collect();
    let (offsets, targets) = g.out_adjacency();
    let position = |b: &Vec<u32>, v: u32| b.binary_search(&v).ok();
    for y in 1..=n {
        for x in 1..=m {
            let p = module.index(x, y);
            module.horizontal[p] = if x < m {
                let q = module.index(x + 1, y);
                let mut a = Matrix::zeros(module.dims[q], module.dims[p]);
                for (j, &v) in basis[p].iter().enumerate() {
                    if let Some(i) = position(&basis[q], v) {
                        a.set(i, j, true);
                    }
                }
                a
            } else {
                Matrix::zeros(0, module.dims[p])
            };
            module.vertical[p] = if y < n {
                let q = module.index(x, y + 1);
                let mut a = Matrix::zeros(module.dims[q], module.dims[p]);
                for (j, &v) in basis[p].iter().enumerate() {
                    for &w in &targets[offsets[v as usize]..offsets[v as usize + 1]] {
                        if let Some(i) = position(&basis[q], w) {
                            a.set(i, j, true);
                        }
                    }
                }
                a
            } else {
                Matrix::zeros(0, module.dims[p])
            };
        }
    }
    debug_assert!(module.is_commutative());
    Ok(module)
}

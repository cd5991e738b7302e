//! Graphcode construction by a single out-of-order reduction of the top slice.
//!
//! Generators (rows) and relations (columns) are placed once, in the order of
//! their scale, with higher heights first among equal scales. Batch `h` activates the generators and relations of height
//! `h` and restores the reduced form. Every column is only ever modified by
//! adding columns to its left, so the pivot pairing at height `h` is the
//! persistence pairing of the slice at `h`.
//!
//! The barcode basis at a height is: the reduced column for each pair with
//! positive persistence and the unit vector for each unpaired row. When a
//! basis vector changes, its old value is rewritten in the new basis. The
//! terms whose bars still live at the old birth give the edges.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::column::F2Column;
use crate::grade::{bar_order, Bar};
use crate::graphcode::Graphcode;
use crate::presentation::Presentation;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BuildMode {
    /// Only vertices that change, are created, or feed a change.
    #[default]
    Compressed,
    /// One vertex per bar per height; edges between consecutive heights only.
    Uncompressed,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Column additions plus unit-vector rewriting steps.
    pub column_additions: u64,
    pub vertices: usize,
    pub edges: usize,
}

/// A basis vector of the current slice: a reduced column or an unpaired row,
/// both identified by their position in the global order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Key {
    Col(u32),
    Row(u32),
}

#[derive(Default)]
struct BatchOutcome {
    /// Basis vectors alive before the batch whose value changed, with the
    /// basis vectors their old value is rewritten into.
    changed: Vec<(Key, Vec<Key>)>,
    /// New interval of every changed or created key; `None` once dead.
    updates: Vec<(Key, Option<(u32, u32)>)>,
    /// Keys involved in the batch: created, changed, or edge targets.
    touched: Vec<Key>,
}

struct Reducer {
    m: u32,
    row_scale: Vec<u32>,
    col_scale: Vec<u32>,
    rows_at: Vec<Vec<u32>>,
    cols_at: Vec<Vec<u32>>,
    /// Columns in row positions, filled when the column becomes active.
    columns: Vec<F2Column>,
    initial: Vec<F2Column>,
    owner: Vec<u32>,
    row_active: Vec<bool>,
    additions: u64,
}

impl Reducer {
    fn new(p: &Presentation) -> Self {
        let n = p.n() as usize;
        let mut row_order: Vec<u32> = (0..p.num_generators() as u32).collect();
        // at equal scale, newer heights first: a generator then pivots the
        // relation that identifies it with its successors
        row_order.sort_by_key(|&i| {
            let g = p.generators()[i as usize];
            (g.scale, Reverse(g.height), i)
        });
        let mut row_pos = vec![0u32; row_order.len()];
        for (pos, &i) in row_order.iter().enumerate() {
            row_pos[i as usize] = pos as u32;
        }
        let mut col_order: Vec<u32> = (0..p.num_relations() as u32).collect();
        col_order.sort_by_key(|&j| {
            let g = p.relations()[j as usize].grade;
            (g.scale, Reverse(g.height), j)
        });

        let mut rows_at = vec![Vec::new(); n + 1];
        let row_scale = row_order
            .iter()
            .enumerate()
            .map(|(pos, &i)| {
                let g = p.generators()[i as usize];
                rows_at[g.height as usize].push(pos as u32);
                g.scale
            })
            .collect();
        let mut cols_at = vec![Vec::new(); n + 1];
        let mut col_scale = Vec::with_capacity(col_order.len());
        let mut initial = Vec::with_capacity(col_order.len());
        for (pos, &j) in col_order.iter().enumerate() {
            let rel = &p.relations()[j as usize];
            cols_at[rel.grade.height as usize].push(pos as u32);
            col_scale.push(rel.grade.scale);
            initial.push(rel.column.map_indices(|i| row_pos[i as usize]));
        }
        Self {
            m: p.m(),
            row_scale,
            col_scale,
            rows_at,
            cols_at,
            columns: vec![F2Column::new(); col_order.len()],
            initial,
            owner: vec![NONE; row_order.len()],
            row_active: vec![false; row_order.len()],
            additions: 0,
        }
    }

    fn interval(&self, key: Key) -> Option<(u32, u32)> {
        match key {
            Key::Col(x) => {
                let p = self.columns[x as usize].pivot()?;
                let (b, d) = (self.row_scale[p as usize], self.col_scale[x as usize]);
                (b < d).then_some((b, d))
            }
            Key::Row(p) => (self.row_active[p as usize] && self.owner[p as usize] == NONE)
                .then_some((self.row_scale[p as usize], self.m + 1)),
        }
    }

    /// Activates height `h` and reduces. `alive` is the interval of every
    /// basis vector before the batch.
    fn batch(&mut self, h: usize, alive: &BTreeMap<Key, (u32, u32)>) -> BatchOutcome {
        let mut created = Vec::new();
        for &p in &self.rows_at[h] {
            self.row_active[p as usize] = true;
        }
        let mut queue: BTreeSet<u32> = BTreeSet::new();
        for &x in &self.cols_at[h] {
            self.columns[x as usize] = std::mem::take(&mut self.initial[x as usize]);
            queue.insert(x);
        }
        let mut adds: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut paired_rows = Vec::new();
        let mut popped = Vec::new();
        while let Some(x) = queue.pop_first() {
            popped.push(x);
            while let Some(p) = self.columns[x as usize].pivot() {
                let o = self.owner[p as usize];
                debug_assert_ne!(o, x);
                if o == NONE {
                    self.owner[p as usize] = x;
                    paired_rows.push(p);
                    break;
                } else if o < x {
                    let (src, dst) = two_mut(&mut self.columns, o as usize, x as usize);
                    dst.add_assign(src);
                    adds.entry(x).or_default().push(o);
                    self.additions += 1;
                } else {
                    self.owner[p as usize] = x;
                    queue.insert(o);
                    break;
                }
            }
        }

        let mut outcome = BatchOutcome::default();
        for &p in &self.rows_at[h] {
            created.push(Key::Row(p));
        }
        for &x in &popped {
            let key = Key::Col(x);
            match alive.get(&key) {
                Some(&(birth, _)) => {
                    let mut terms = vec![key];
                    terms.extend(adds.get(&x).into_iter().flatten().map(|&o| Key::Col(o)));
                    let targets = self.filter_targets(terms, birth);
                    outcome.changed.push((key, targets));
                }
                None => created.push(key),
            }
        }
        for &p in &paired_rows {
            let key = Key::Row(p);
            if let Some(&(birth, _)) = alive.get(&key) {
                let terms = self.rewrite_unit_vector(p);
                let targets = self.filter_targets(terms, birth);
                outcome.changed.push((key, targets));
            }
        }
        created.retain(|&k| self.interval(k).is_some());
        created.sort_unstable();
        created.dedup();

        for (key, targets) in &outcome.changed {
            outcome.updates.push((*key, self.interval(*key)));
            outcome.touched.push(*key);
            outcome.touched.extend_from_slice(targets);
        }
        for &key in &created {
            outcome.updates.push((key, self.interval(key)));
            outcome.touched.push(key);
        }
        outcome.changed.sort_unstable();
        outcome.touched.sort_unstable();
        outcome.touched.dedup();
        outcome
    }

    /// Writes `e_p` as a sum of current basis vectors and zero-persistence
    /// columns by repeatedly cancelling the pivot.
    fn rewrite_unit_vector(&mut self, p: u32) -> Vec<Key> {
        let mut v = F2Column::unit(p);
        let mut terms = Vec::new();
        while let Some(q) = v.pivot() {
            let o = self.owner[q as usize];
            if o == NONE {
                v.toggle(q);
                terms.push(Key::Row(q));
            } else {
                v.add_assign(&self.columns[o as usize]);
                terms.push(Key::Col(o));
            }
            self.additions += 1;
        }
        terms
    }

    /// Keeps the terms that are nonzero at the old birth `birth`.
    fn filter_targets(&self, mut terms: Vec<Key>, birth: u32) -> Vec<Key> {
        terms.retain(|&k| matches!(self.interval(k), Some((_, d)) if d > birth));
        terms.sort_unstable();
        terms
    }
}

fn two_mut<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    debug_assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

/// Computes a graphcode of `coker(p)`.
pub fn build_graphcode(p: &Presentation, mode: BuildMode) -> Graphcode {
    build_graphcode_with_stats(p, mode).0
}

pub fn build_graphcode_with_stats(p: &Presentation, mode: BuildMode) -> (Graphcode, BuildStats) {
    let n = p.n() as usize;
    let mut reducer = Reducer::new(p);
    let mut alive: BTreeMap<Key, (u32, u32)> = BTreeMap::new();
    let mut rep: HashMap<Key, u32> = HashMap::new();
    let mut vertices: Vec<Bar> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();

    if n == 0 {
        return (Graphcode::empty(p.m(), 0), BuildStats::default());
    }
    let mut current = reducer.batch(1, &alive);
    apply(&mut alive, &current);
    for h in 1..=n {
        let next = (h < n).then(|| reducer.batch(h + 1, &alive));
        let keep: Vec<Key> = match mode {
            BuildMode::Uncompressed => alive.keys().copied().collect(),
            BuildMode::Compressed if h == n => alive.keys().copied().collect(),
            BuildMode::Compressed => {
                let mut k: Vec<Key> = current
                    .touched
                    .iter()
                    .chain(next.iter().flat_map(|o| o.touched.iter()))
                    .copied()
                    .filter(|k| alive.contains_key(k))
                    .collect();
                k.sort_unstable();
                k.dedup();
                k
            }
        };
        let mut vid: HashMap<Key, u32> = HashMap::with_capacity(keep.len());
        for &key in &keep {
            let (b, d) = alive[&key];
            vid.insert(key, vertices.len() as u32);
            vertices.push(Bar::new(b, d, h as u32));
        }
        let mut changed_keys = BTreeSet::new();
        for (u, targets) in &current.changed {
            changed_keys.insert(*u);
            let src = rep[u];
            for t in targets {
                debug_assert!(crate::grade::entangled(
                    &vertices[vid[t] as usize],
                    &vertices[src as usize]
                ));
                edges.push((src, vid[t]));
            }
        }
        for &key in &keep {
            if changed_keys.contains(&key) {
                continue;
            }
            if let Some(&src) = rep.get(&key) {
                edges.push((src, vid[&key]));
            }
        }
        for u in &changed_keys {
            rep.remove(u);
        }
        rep.extend(vid);
        if let Some(next) = next {
            apply(&mut alive, &next);
            current = next;
        }
    }
    let stats = BuildStats {
        column_additions: reducer.additions,
        vertices: vertices.len(),
        edges: edges.len(),
    };
    (Graphcode::from_parts(p.m(), p.n(), vertices, edges), stats)
}

fn apply(alive: &mut BTreeMap<Key, (u32, u32)>, outcome: &BatchOutcome) {
    for &(key, interval) in &outcome.updates {
        match interval {
            Some(iv) => alive.insert(key, iv),
            None => alive.remove(&key),
        };
    }
}

/// Standard left-to-right reduction of the slice at `height`, from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceReduction {
    /// Bars with positive persistence, sorted by `(birth, death)`.
    pub bars: Vec<Bar>,
    /// Relation indices in the column order of the slice matrix.
    pub relation_order: Vec<usize>,
    /// Reduced columns over generator indices, in `relation_order`.
    pub reduced: Vec<F2Column>,
}

pub fn reduce_slice(p: &Presentation, height: u32) -> SliceReduction {
    let mut gens: Vec<usize> = (0..p.num_generators())
        .filter(|&i| p.generators()[i].height <= height)
        .collect();
    gens.sort_by_key(|&i| (p.generators()[i].scale, i));
    let mut pos_of = vec![NONE; p.num_generators()];
    for (pos, &i) in gens.iter().enumerate() {
        pos_of[i] = pos as u32;
    }
    let mut relation_order: Vec<usize> = (0..p.num_relations())
        .filter(|&j| p.relations()[j].grade.height <= height)
        .collect();
    relation_order.sort_by_key(|&j| (p.relations()[j].grade.scale, j));

    let mut owner: Vec<Option<usize>> = vec![None; gens.len()];
    let mut reduced: Vec<F2Column> = Vec::with_capacity(relation_order.len());
    let mut bars = Vec::new();
    for (c, &j) in relation_order.iter().enumerate() {
        let mut col = p.relations()[j].column.map_indices(|i| pos_of[i as usize]);
        while let Some(piv) = col.pivot() {
            match owner[piv as usize] {
                Some(o) => {
                    let other = reduced[o].clone();
                    col.add_assign(&other);
                }
                None => {
                    owner[piv as usize] = Some(c);
                    let b = p.generators()[gens[piv as usize]].scale;
                    let d = p.relations()[j].grade.scale;
                    if b < d {
                        bars.push(Bar::new(b, d, height));
                    }
                    break;
                }
            }
        }
        reduced.push(col);
    }
    for (pos, &i) in gens.iter().enumerate() {
        if owner[pos].is_none() {
            bars.push(Bar::new(p.generators()[i].scale, p.m() + 1, height));
        }
    }
    bars.sort_by(bar_order);
    let reduced = reduced
        .into_iter()
        .map(|c| c.map_indices(|pos| gens[pos as usize] as u32))
        .collect();
    SliceReduction {
        bars,
        relation_order,
        reduced,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grade::Bigrade;
    use crate::presentation::Relation;

    fn pres(gens: &[(u32, u32)], rels: &[(u32, u32, &[u32])]) -> Presentation {
        Presentation::new(
            gens.iter().map(|&(s, h)| Bigrade::new(s, h)).collect(),
            rels.iter()
                .map(|&(s, h, c)| Relation::new(Bigrade::new(s, h), c.iter().copied().collect()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn slice_examples() {
        let p = pres(&[(1, 1), (3, 1)], &[]).extended_to(3, 1).unwrap();
        assert_eq!(reduce_slice(&p, 1).bars, vec![Bar::new(1, 4, 1), Bar::new(3, 4, 1)]);
        let p = pres(&[(1, 1)], &[(3, 1, &[0])]);
        assert_eq!(reduce_slice(&p, 1).bars, vec![Bar::new(1, 3, 1)]);
        let p = pres(&[(1, 1), (2, 1)], &[(2, 1, &[0, 1])]).extended_to(3, 1).unwrap();
        assert_eq!(reduce_slice(&p, 1).bars, vec![Bar::new(1, 4, 1)]);
    }

    #[test]
    fn empty_presentation_gives_empty_graphcode() {
        let p = Presentation::empty(3, 4);
        for mode in [BuildMode::Compressed, BuildMode::Uncompressed] {
            let g = build_graphcode(&p, mode);
            assert_eq!(g.num_vertices(), 0);
            assert_eq!((g.m(), g.n()), (3, 4));
        }
    }

    #[test]
    fn one_generator_dying_at_height_two() {
        let p = pres(&[(1, 1)], &[(3, 2, &[0])]);
        let g = build_graphcode(&p, BuildMode::Uncompressed);
        assert_eq!(g.vertices(), &[Bar::new(1, 4, 1), Bar::new(1, 3, 2)]);
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(build_graphcode(&p, BuildMode::Compressed), g);
    }

    #[test]
    fn compressed_mode_bridges_unchanged_heights() {
        let p = pres(&[(1, 1)], &[(3, 4, &[0])]);
        let u = build_graphcode(&p, BuildMode::Uncompressed);
        assert_eq!(u.num_vertices(), 4);
        assert!(u.is_strict());
        let c = build_graphcode(&p, BuildMode::Compressed);
        assert_eq!(
            c.vertices(),
            &[Bar::new(1, 4, 1), Bar::new(1, 4, 3), Bar::new(1, 3, 4)]
        );
        assert_eq!(c.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(c.expand().num_vertices(), 4);
    }

    #[test]
    fn merging_generators_produce_fork() {
        // two generators identified at height 2: [1,4) and [2,4) merge
        let p = pres(&[(1, 1), (2, 1)], &[(2, 2, &[0, 1])]);
        let g = build_graphcode(&p, BuildMode::Uncompressed);
        g.validate().unwrap();
        assert_eq!(g.num_vertices(), 3);
        let top: Vec<Bar> = g.vertices().iter().filter(|b| b.height == 2).copied().collect();
        assert_eq!(top, vec![Bar::new(1, 3, 2)]);
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn addition_counter_counts_reduction_steps() {
        let p = pres(&[(1, 1), (2, 1)], &[(3, 1, &[0, 1]), (4, 1, &[1])]);
        let (_, stats) = build_graphcode_with_stats(&p, BuildMode::Compressed);
        assert_eq!(stats.column_additions, 1);
    }
}

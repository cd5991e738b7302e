//! Isomorphism of graphcodes that respects vertex labels.
//!
//! Colour refinement on the disjoint union of both graphs prunes the search;
//! a backtracking search then fixes a bijection class by class.

use std::collections::{BTreeMap, HashSet};

use crate::graphcode::Graphcode;

/// True iff some bijection of vertices preserves labels, edges and the grid.
pub fn label_isomorphic(a: &Graphcode, b: &Graphcode) -> bool {
    if a.m() != b.m()
        || a.n() != b.n()
        || a.num_vertices() != b.num_vertices()
        || a.num_edges() != b.num_edges()
    {
        return false;
    }
    let na = a.num_vertices();
    let colors = refine(a, b);
    let (ca, cb) = colors.split_at(na);
    let mut hist_a = ca.to_vec();
    let mut hist_b = cb.to_vec();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return false;
    }

    let adj_a = Adjacency::new(a);
    let adj_b = Adjacency::new(b);
    // rare colours first so that forced choices are made early
    let mut class_size: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in ca {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<u32> = (0..na as u32).collect();
    order.sort_by_key(|&v| (class_size[&ca[v as usize]], ca[v as usize], v));
    let mut candidates: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (v, &c) in cb.iter().enumerate() {
        candidates.entry(c).or_default().push(v as u32);
    }
    let mut search = Search {
        adj_a: &adj_a,
        adj_b: &adj_b,
        map: vec![u32::MAX; na],
        used: vec![false; na],
    };
    search.extend(&order, 0, ca, &candidates)
}

struct Adjacency {
    out: Vec<Vec<u32>>,
    inc: Vec<Vec<u32>>,
    edges: HashSet<(u32, u32)>,
}

impl Adjacency {
    fn new(g: &Graphcode) -> Self {
        let mut out = vec![Vec::new(); g.num_vertices()];
        let mut inc = vec![Vec::new(); g.num_vertices()];
        for &(s, t) in g.edges() {
            out[s as usize].push(t);
            inc[t as usize].push(s);
        }
        Self {
            out,
            inc,
            edges: g.edges().iter().copied().collect(),
        }
    }
}

struct Search<'a> {
    adj_a: &'a Adjacency,
    adj_b: &'a Adjacency,
    map: Vec<u32>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(
        &mut self,
        order: &[u32],
        depth: usize,
        colors_a: &[u32],
        candidates: &BTreeMap<u32, Vec<u32>>,
    ) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        for &w in &candidates[&colors_a[v as usize]] {
            if self.used[w as usize] || !self.consistent(v, w) {
                continue;
            }
            self.map[v as usize] = w;
            self.used[w as usize] = true;
            if self.extend(order, depth + 1, colors_a, candidates) {
                return true;
            }
            self.map[v as usize] = u32::MAX;
            self.used[w as usize] = false;
        }
        false
    }

    /// Edges between `v` and already mapped vertices have images at `w`, and
    /// `w` has no further edges to mapped vertices.
    fn consistent(&self, v: u32, w: u32) -> bool {
        let mut mapped_out = 0;
        for &x in &self.adj_a.out[v as usize] {
            let y = self.map[x as usize];
            if y != u32::MAX {
                if !self.adj_b.edges.contains(&(w, y)) {
                    return false;
                }
                mapped_out += 1;
            }
        }
        let mut mapped_in = 0;
        for &x in &self.adj_a.inc[v as usize] {
            let y = self.map[x as usize];
            if y != u32::MAX {
                if !self.adj_b.edges.contains(&(y, w)) {
                    return false;
                }
                mapped_in += 1;
            }
        }
        let used_out = self.adj_b.out[w as usize]
            .iter()
            .filter(|&&y| self.used[y as usize])
            .count();
        let used_in = self.adj_b.inc[w as usize]
            .iter()
            .filter(|&&y| self.used[y as usize])
            .count();
        used_out == mapped_out && used_in == mapped_in
    }
}

/// Stable colouring of the disjoint union `a + b`; vertices of `b` follow
/// those of `a`.
fn refine(a: &Graphcode, b: &Graphcode) -> Vec<u32> {
    let na = a.num_vertices() as u32;
    let total = a.num_vertices() + b.num_vertices();
    let mut out = vec![Vec::new(); total];
    let mut inc = vec![Vec::new(); total];
    for &(s, t) in a.edges() {
        out[s as usize].push(t);
        inc[t as usize].push(s);
    }
    for &(s, t) in b.edges() {
        out[(s + na) as usize].push(t + na);
        inc[(t + na) as usize].push(s + na);
    }
    let labels: Vec<(u32, u32, u32)> = a
        .vertices()
        .iter()
        .chain(b.vertices())
        .map(|bar| (bar.height, bar.birth, bar.death))
        .collect();
    let mut colors = canonical_ids(&labels);
    let mut classes = count_classes(&colors);
    loop {
        let signatures: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..total)
            .map(|v| {
                let mut o: Vec<u32> = out[v].iter().map(|&x| colors[x as usize]).collect();
                let mut i: Vec<u32> = inc[v].iter().map(|&x| colors[x as usize]).collect();
                o.sort_unstable();
                i.sort_unstable();
                (colors[v], o, i)
            })
            .collect();
        let next = canonical_ids(&signatures);
        let next_classes = count_classes(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn canonical_ids<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut ids: BTreeMap<T, u32> = keys.iter().map(|k| (k.clone(), 0)).collect();
    for (i, id) in ids.values_mut().enumerate() {
        *id = i as u32;
    }
    keys.iter().map(|k| ids[k]).collect()
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |c| c as usize + 1)
}

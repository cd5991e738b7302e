//! Graphcodes: directed graphs whose vertices are bars and whose edges record
//! the structure maps between consecutive one-parameter slices.
//!
//! A *generalized* graphcode lets an edge skip heights as long as all
//! out-neighbors of a vertex sit at one common height. A *strict* graphcode
//! only has edges between consecutive heights. Compression removes
//! superfluous vertices; expansion re-inserts them.

use thiserror::Error;

use crate::grade::{entangled, Bar};
use crate::union_find::UnionFind;

type Edge = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphcodeError {
    #[error("vertex {vertex} has label {bar}, which violates 1 <= b < d <= {max_death} and 1 <= h <= {n}")]
    LabelInvariantViolated {
        vertex: usize,
        bar: Bar,
        max_death: u32,
        n: u32,
    },
    #[error("edge {from}->{to} refers to a vertex that does not exist")]
    DanglingEdge { from: u32, to: u32 },
    #[error("edge {from}->{to} occurs more than once")]
    DuplicateEdge { from: u32, to: u32 },
    #[error("edge {from}->{to} does not point to a strictly greater height")]
    NotUpward { from: u32, to: u32 },
    #[error("edge {from}->{to} joins bars that are not entangled")]
    NotEntangled { from: u32, to: u32 },
    #[error("out-neighbors of vertex {vertex} sit at different heights")]
    MixedOutHeights { vertex: u32 },
    #[error("edge {from}->{to} skips a height in a strict graphcode")]
    SkipsHeight { from: u32, to: u32 },
}

/// A (generalized) graphcode on the grid `{1..m} x {1..n}`.
///
/// Vertices are indexed by their position in `vertices()`; edges are kept as
/// a sorted, duplicate-free list of `(source, target)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graphcode {
    m: u32,
    n: u32,
    vertices: Vec<Bar>,
    edges: Vec<(u32, u32)>,
}

impl Graphcode {
    /// Validates the generalized-graphcode conditions. Edges may be given in
    /// any order but must not repeat.
    pub fn new(
        m: u32,
        n: u32,
        vertices: Vec<Bar>,
        mut edges: Vec<(u32, u32)>,
    ) -> Result<Self, GraphcodeError> {
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphcodeError::DuplicateEdge {
                from: w[0].0,
                to: w[0].1,
            });
        }
        let g = Self {
            m,
            n,
            vertices,
            edges,
        };
        g.validate()?;
        Ok(g)
    }

    /// Skips validation. Callers guarantee sorted unique edges and valid labels.
    pub(crate) fn from_parts(m: u32, n: u32, vertices: Vec<Bar>, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let g = Self {
            m,
            n,
            vertices,
            edges,
        };
        debug_assert_eq!(g.validate(), Ok(()));
        g
    }

    pub fn empty(m: u32, n: u32) -> Self {
        Self {
            m,
            n,
            ..Self::default()
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> &[Bar] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn validate(&self) -> Result<(), GraphcodeError> {
        for (v, bar) in self.vertices.iter().enumerate() {
            let ok = bar.birth >= 1
                && bar.birth < bar.death
                && bar.death <= self.m + 1
                && bar.height >= 1
                && bar.height <= self.n;
            if !ok {
                return Err(GraphcodeError::LabelInvariantViolated {
                    vertex: v,
                    bar: *bar,
                    max_death: self.m + 1,
                    n: self.n,
                });
            }
        }
        let nv = self.vertices.len() as u32;
        let mut out_height: Vec<Option<u32>> = vec![None; self.vertices.len()];
        for &(s, t) in &self.edges {
            if s >= nv || t >= nv {
                return Err(GraphcodeError::DanglingEdge {
                    from: s,
                    to: t,
                });
            }
            let (bs, bt) = (self.vertices[s as usize], self.vertices[t as usize]);
            if bt.height <= bs.height {
                return Err(GraphcodeError::NotUpward {
                    from: s,
                    to: t,
                });
            }
            if !entangled(&bt, &bs) {
                return Err(GraphcodeError::NotEntangled {
                    from: s,
                    to: t,
                });
            }
            match out_height[s as usize] {
                None => out_height[s as usize] = Some(bt.height),
                Some(h) if h != bt.height => {
                    return Err(GraphcodeError::MixedOutHeights { vertex: s })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Every edge joins consecutive heights.
    pub fn is_strict(&self) -> bool {
        self.strict_violation().is_none()
    }

    pub fn strict_violation(&self) -> Option<GraphcodeError> {
        self.edges.iter().find_map(|&(s, t)| {
            let (hs, ht) = (
                self.vertices[s as usize].height,
                self.vertices[t as usize].height,
            );
            (ht != hs + 1).then_some(GraphcodeError::SkipsHeight {
                from: s,
                to: t,
            })
        })
    }

    /// Out-neighbor lists in compressed-row form: the neighbors of `v` are
    /// `targets[offsets[v]..offsets[v + 1]]`.
    pub fn out_adjacency(&self) -> (Vec<usize>, Vec<u32>) {
        let mut offsets = vec![0usize; self.vertices.len() + 1];
        for &(s, _) in &self.edges {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..self.vertices.len() {
            offsets[i + 1] += offsets[i];
        }
        // edges are sorted by source, so targets come out grouped already
        let targets = self.edges.iter().map(|&(_, t)| t).collect();
        (offsets, targets)
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.vertices.len()];
        for &(_, t) in &self.edges {
            deg[t as usize] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.vertices.len()];
        for &(s, _) in &self.edges {
            deg[s as usize] += 1;
        }
        deg
    }

    /// Vertices `w` with exactly one incoming edge `(v, w)` where `v` and `w`
    /// carry the same interval, `w` has an outgoing edge and `v` has no other
    /// outgoing edge.
    pub fn superfluous_vertices(&self) -> Vec<u32> {
        let indeg = self.in_degrees();
        let outdeg = self.out_degrees();
        let mut pred = vec![u32::MAX; self.vertices.len()];
        for &(s, t) in &self.edges {
            pred[t as usize] = s;
        }
        (0..self.vertices.len() as u32)
            .filter(|&w| {
                let wi = w as usize;
                if indeg[wi] != 1 || outdeg[wi] == 0 {
                    return false;
                }
                let v = pred[wi] as usize;
                outdeg[v] == 1 && self.vertices[v].same_interval(&self.vertices[wi])
            })
            .collect()
    }

    /// Removes every superfluous vertex, rewiring its predecessor to its
    /// out-neighbors. The result is fully compressed. Surviving vertices keep
    /// their relative order.
    pub fn compress(&self) -> Graphcode {
        let superfluous = {
            let mut flag = vec![false; self.vertices.len()];
            for w in self.superfluous_vertices() {
                flag[w as usize] = true;
            }
            flag
        };
        let (offsets, targets) = self.out_adjacency();
        let mut new_index = vec![u32::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (v, bar) in self.vertices.iter().enumerate() {
            if !superfluous[v] {
                new_index[v] = vertices.len() as u32;
                vertices.push(*bar);
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for v in 0..self.vertices.len() {
            if superfluous[v] {
                continue;
            }
            // a superfluous out-neighbor is the only out-neighbor of its
            // predecessor, so follow the chain until it ends
            let mut cur = v;
            loop {
                let outs = &targets[offsets[cur]..offsets[cur + 1]];
                if outs.len() == 1 && superfluous[outs[0] as usize] {
                    cur = outs[0] as usize;
                    continue;
                }
                for &t in outs {
                    edges.push((new_index[v], new_index[t as usize]));
                }
                break;
            }
        }
        Graphcode::from_parts(self.m, self.n, vertices, edges)
    }

    /// Inserts chain vertices so that every edge spans exactly one height.
    /// Existing vertices keep their indices; new vertices are appended.
    pub fn expand(&self) -> Graphcode {
        let (offsets, targets) = self.out_adjacency();
        let mut vertices = self.vertices.clone();
        let mut edges = Vec::with_capacity(self.edges.len());
        for v in 0..self.vertices.len() {
            let outs = &targets[offsets[v]..offsets[v + 1]];
            let Some(&first) = outs.first() else {
                continue;
            };
            let bar = self.vertices[v];
            let target_height = self.vertices[first as usize].height;
            let mut last = v as u32;
            for h in bar.height + 1..target_height {
                let id = vertices.len() as u32;
                vertices.push(Bar::new(bar.birth, bar.death, h));
                edges.push((last, id));
                last = id;
            }
            edges.extend(outs.iter().map(|&t| (last, t)));
        }
        Graphcode::from_parts(self.m, self.n, vertices, edges)
    }

    /// Weak-component index of every vertex, numbered by smallest member.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(s, t) in &self.edges {
            uf.union(s, t);
        }
        let mut label_of_root = vec![usize::MAX; self.vertices.len()];
        let mut labels = Vec::with_capacity(self.vertices.len());
        let mut count = 0;
        for v in 0..self.vertices.len() as u32 {
            let r = uf.find(v) as usize;
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = count;
                count += 1;
            }
            labels.push(label_of_root[r]);
        }
        (count, labels)
    }

    /// Splits into weakly connected components, ordered by their smallest
    /// vertex index. Each part keeps the grid extents.
    pub fn connected_components(&self) -> Vec<Graphcode> {
        let (count, labels) = self.component_labels();
        let mut local = vec![0u32; self.vertices.len()];
        let mut parts: Vec<(Vec<Bar>, Vec<Edge>)> = vec![(Vec::new(), Vec::new()); count];
        for (v, &c) in labels.iter().enumerate() {
            local[v] = parts[c].0.len() as u32;
            parts[c].0.push(self.vertices[v]);
        }
        for &(s, t) in &self.edges {
            let c = labels[s as usize];
            parts[c].1.push((local[s as usize], local[t as usize]));
        }
        parts
            .into_iter()
            .map(|(vertices, edges)| Graphcode::from_parts(self.m, self.n, vertices, edges))
            .collect()
    }

    /// Disjoint union; the vertices of `other` are shifted behind ours.
    pub fn disjoint_union(&self, other: &Graphcode) -> Graphcode {
        let offset = self.vertices.len() as u32;
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(s, t)| (s + offset, t + offset)));
        Graphcode::from_parts(self.m.max(other.m), self.n.max(other.n), vertices, edges)
    }

    /// Every vertex has in- and out-degree at most one.
    pub fn is_disjoint_path_union(&self) -> bool {
        self.in_degrees().iter().all(|&d| d <= 1) && self.out_degrees().iter().all(|&d| d <= 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::label_isomorphic;

    fn gc(m: u32, n: u32, v: &[(u32, u32, u32)], e: &[(u32, u32)]) -> Graphcode {
        Graphcode::new(
            m,
            n,
            v.iter().map(|&(b, d, h)| Bar::new(b, d, h)).collect(),
            e.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn validation_rejects_bad_labels_and_edges() {
        let bad = Graphcode::new(3, 1, vec![Bar::new(2, 2, 1)], vec![]);
        assert!(matches!(bad, Err(GraphcodeError::LabelInvariantViolated { .. })));
        let bad = Graphcode::new(3, 1, vec![Bar::new(1, 5, 1)], vec![]);
        assert!(matches!(bad, Err(GraphcodeError::LabelInvariantViolated { .. })));
        let v = vec![Bar::new(1, 4, 1), Bar::new(1, 3, 2)];
        assert!(matches!(
            Graphcode::new(3, 2, v.clone(), vec![(0, 2)]),
            Err(GraphcodeError::DanglingEdge { .. })
        ));
        assert!(matches!(
            Graphcode::new(3, 2, v.clone(), vec![(1, 0)]),
            Err(GraphcodeError::NotUpward { .. })
        ));
        assert!(matches!(
            Graphcode::new(3, 2, v.clone(), vec![(0, 1), (0, 1)]),
            Err(GraphcodeError::DuplicateEdge { .. })
        ));
        // [2,4) at h1 -> [1,2) at h2 is not entangled: 2 < 2 fails
        let v2 = vec![Bar::new(2, 4, 1), Bar::new(1, 2, 2)];
        assert!(matches!(
            Graphcode::new(3, 2, v2, vec![(0, 1)]),
            Err(GraphcodeError::NotEntangled { .. })
        ));
        let v3 = vec![Bar::new(1, 4, 1), Bar::new(1, 4, 2), Bar::new(1, 4, 3)];
        assert!(matches!(
            Graphcode::new(3, 3, v3, vec![(0, 1), (0, 2)]),
            Err(GraphcodeError::MixedOutHeights { vertex: 0 })
        ));
    }

    #[test]
    fn compress_removes_middle_of_same_label_path() {
        let g = gc(3, 3, &[(1, 4, 1), (1, 4, 2), (1, 3, 3)], &[(0, 1), (1, 2)]);
        assert_eq!(g.superfluous_vertices(), vec![1]);
        let c = g.compress();
        assert_eq!(c, gc(3, 3, &[(1, 4, 1), (1, 3, 3)], &[(0, 1)]));
        assert!(c.superfluous_vertices().is_empty());
    }

    #[test]
    fn compress_keeps_single_vertex_and_multiply_reached_vertices() {
        let single = gc(3, 1, &[(1, 4, 1)], &[]);
        assert_eq!(single.compress(), single);
        // w = vertex 2 has two incoming edges
        let g = gc(
            4,
            3,
            &[(1, 5, 1), (2, 5, 1), (1, 5, 2), (1, 4, 3)],
            &[(0, 2), (1, 2), (2, 3)],
        );
        assert!(g.superfluous_vertices().is_empty());
        assert_eq!(g.compress(), g);
    }

    #[test]
    fn compress_collapses_long_chains() {
        let g = gc(
            3,
            5,
            &[(1, 4, 1), (1, 4, 2), (1, 4, 3), (1, 4, 4), (1, 3, 5)],
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
        );
        let c = g.compress();
        assert_eq!(c, gc(3, 5, &[(1, 4, 1), (1, 3, 5)], &[(0, 1)]));
        assert!(label_isomorphic(&c.expand(), &g));
    }

    #[test]
    fn expand_inserts_chain_vertices() {
        let g = gc(3, 3, &[(1, 4, 1), (1, 3, 3)], &[(0, 1)]);
        let e = g.expand();
        assert_eq!(e, gc(3, 3, &[(1, 4, 1), (1, 3, 3), (1, 4, 2)], &[(0, 2), (2, 1)]));
        assert!(e.is_strict());
        assert!(!g.is_strict());
        let strict = gc(3, 2, &[(1, 4, 1), (1, 3, 2)], &[(0, 1)]);
        assert_eq!(strict.expand(), strict);
    }

    #[test]
    fn components_and_paths() {
        let two = gc(3, 1, &[(1, 4, 1), (2, 3, 1)], &[]);
        assert_eq!(two.connected_components().len(), 2);
        let path = gc(3, 3, &[(1, 4, 1), (1, 4, 2), (1, 3, 3)], &[(0, 1), (1, 2)]);
        let comps = path.connected_components();
        assert_eq!(comps, vec![path.clone()]);
        assert!(path.is_disjoint_path_union());
        assert!(Graphcode::empty(0, 0).is_disjoint_path_union());

        let paths = path.disjoint_union(&path);
        assert!(paths.is_disjoint_path_union());
        assert_eq!(paths.connected_components().len(), 2);

        let fork = gc(4, 2, &[(2, 5, 1), (1, 4, 2), (2, 3, 2)], &[(0, 1), (0, 2)]);
        assert!(!fork.is_disjoint_path_union());
    }
}

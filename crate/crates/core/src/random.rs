//! Seeded random instances for property tests and the `gen` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::column::F2Column;
use crate::grade::{bar_order, entangled, Bar, Bigrade};
use crate::graphcode::Graphcode;
use crate::presentation::{Presentation, Relation};

/// Reproducible generator used throughout.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PresentationShape {
    pub max_generators: usize,
    pub max_relations: usize,
    pub m: u32,
    pub n: u32,
    /// Chance that an admissible generator enters a relation, in percent.
    pub density: u32,
}

impl Default for PresentationShape {
    fn default() -> Self {
        Self {
            max_generators: 12,
            max_relations: 16,
            m: 8,
            n: 8,
            density: 40,
        }
    }
}

/// Random homogeneous presentation on exactly the grid `m x n`.
pub fn random_presentation<R: Rng>(rng: &mut R, shape: &PresentationShape) -> Presentation {
    let g = rng.gen_range(0..=shape.max_generators);
    let r = rng.gen_range(0..=shape.max_relations);
    let generators: Vec<Bigrade> = (0..g)
        .map(|_| Bigrade::new(rng.gen_range(1..=shape.m), rng.gen_range(1..=shape.n)))
        .collect();
    let mut relations = Vec::with_capacity(r);
    for _ in 0..r {
        let grade = Bigrade::new(rng.gen_range(1..=shape.m), rng.gen_range(1..=shape.n));
        let admissible: Vec<u32> = (0..g as u32)
            .filter(|&i| generators[i as usize].le(&grade))
            .collect();
        let column: F2Column = admissible
            .iter()
            .copied()
            .filter(|_| rng.gen_range(0..100) < shape.density)
            .collect();
        relations.push(Relation::new(grade, column));
    }
    Presentation::with_extents(shape.m, shape.n, generators, relations)
        .expect("grades are drawn inside the grid below each relation")
}

/// A random bar in a grid with `m` scales; infinite with some probability.
fn random_bar<R: Rng>(rng: &mut R, m: u32, height: u32) -> Bar {
    let b = rng.gen_range(1..=m);
    let d = if rng.gen_bool(0.25) {
        m + 1
    } else {
        rng.gen_range(b + 1..=m + 1)
    };
    Bar::new(b, d, height)
}

/// Random strict graphcode with pairwise distinct bars at each height.
/// Every entangled pair between consecutive heights becomes an edge with
/// probability `edge_percent`.
pub fn random_strict_graphcode<R: Rng>(
    rng: &mut R,
    m: u32,
    n: u32,
    max_bars_per_height: usize,
    edge_percent: u32,
) -> Graphcode {
    let mut vertices: Vec<Bar> = Vec::new();
    let mut layers: Vec<std::ops::Range<usize>> = Vec::new();
    for h in 1..=n {
        let count = rng.gen_range(0..=max_bars_per_height);
        let mut bars: Vec<Bar> = (0..count).map(|_| random_bar(rng, m, h)).collect();
        bars.sort_by(bar_order);
        bars.dedup_by(|a, b| a.same_interval(b));
        bars.shuffle(rng);
        let start = vertices.len();
        vertices.extend(bars);
        layers.push(start..vertices.len());
    }
    let mut edges = Vec::new();
    for h in 1..n as usize {
        for v in layers[h - 1].clone() {
            for w in layers[h].clone() {
                if entangled(&vertices[w], &vertices[v]) && rng.gen_range(0..100) < edge_percent {
                    edges.push((v as u32, w as u32));
                }
            }
        }
    }
    Graphcode::new(m, n, vertices, edges).expect("edges join entangled bars one height apart")
}

/// A staircase: one bar per height on `first..=last`, each entangled with
/// the bar below it.
pub fn random_staircase<R: Rng>(rng: &mut R, m: u32, n: u32) -> Vec<Bar> {
    let first = rng.gen_range(1..=n);
    let last = rng.gen_range(first..=n);
    let mut bar = random_bar(rng, m, first);
    let mut out = vec![bar];
    for h in first + 1..=last {
        // b' <= b < d' <= d
        let b = rng.gen_range(1..=bar.birth);
        let d = rng.gen_range(bar.birth + 1..=bar.death);
        bar = Bar::new(b, d, h);
        out.push(bar);
    }
    out
}

/// Presentations whose compressed graphcode has linear size while the
/// uncompressed one is quadratic: generator `h` sits at `(size - h + 1, h)`
/// and at height `h >= 2` a relation merges it with generator `h - 1`.
pub fn nested_family(size: u32) -> Presentation {
    let generators = (1..=size).map(|h| Bigrade::new(size - h + 1, h)).collect();
    let relations = (2..=size)
        .map(|h| {
            Relation::new(
                Bigrade::new(size + h, h),
                [h - 2, h - 1].into_iter().collect(),
            )
        })
        .collect();
    Presentation::with_extents(2 * size, size, generators, relations)
        .expect("each relation lies above both of its generators")
}

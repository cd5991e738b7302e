//! Presentations read off a graphcode, and same-grade minimization.

use crate::builder::{build_graphcode, BuildMode};
use crate::column::F2Column;
use crate::grade::Bigrade;
use crate::graphcode::{Graphcode, GraphcodeError};
use crate::isomorphism::label_isomorphic;
use crate::presentation::{Presentation, Relation};

/// One generator per vertex at `(b, h)`; a relation killing it at `(d, h)`
/// for finite `d`; and below the top height a relation at `(b, h')`
/// identifying it with the sum of its out-neighbors at their height `h'`
/// (`h + 1` if there are none). Relations are ordered by height, then scale.
pub fn presentation_from_graphcode(g: &Graphcode) -> Result<Presentation, GraphcodeError> {
    g.validate()?;
    let (offsets, targets) = g.out_adjacency();
    let generators: Vec<Bigrade> = g
        .vertices()
        .iter()
        .map(|bar| Bigrade::new(bar.birth, bar.height))
        .collect();
    let mut relations = Vec::new();
    for (v, bar) in g.vertices().iter().enumerate() {
        if bar.death <= g.m() {
            relations.push(Relation::new(
                Bigrade::new(bar.death, bar.height),
                F2Column::unit(v as u32),
            ));
        }
        if bar.height < g.n() {
            let outs = &targets[offsets[v]..offsets[v + 1]];
            let next = outs
                .first()
                .map_or(bar.height + 1, |&w| g.vertices()[w as usize].height);
            let column = std::iter::once(v as u32).chain(outs.iter().copied()).collect();
            relations.push(Relation::new(Bigrade::new(bar.birth, next), column));
        }
    }
    relations.sort_by_key(|r| (r.grade.height, r.grade.scale));
    Ok(Presentation::with_extents(g.m(), g.n(), generators, relations)
        .expect("graphcode invariants give a homogeneous presentation"))
}

/// Rebuilds a strict graphcode from its own presentation and compares.
pub fn roundtrip_check(g: &Graphcode) -> bool {
    match presentation_from_graphcode(g) {
        Ok(p) => label_isomorphic(&build_graphcode(&p, BuildMode::Uncompressed), g),
        Err(_) => false,
    }
}

/// Cancels generator/relation pairs of equal grade joined by a nonzero entry,
/// then drops zero relations and repeated relations at the same grade.
pub fn minimize(p: &Presentation) -> Presentation {
    let mut generators: Vec<Option<Bigrade>> = p.generators().iter().copied().map(Some).collect();
    let mut relations: Vec<Option<Relation>> = p.relations().iter().cloned().map(Some).collect();

    let mut changed = true;
    while changed {
        changed = false;
        for j in 0..relations.len() {
            let Some(rel) = &relations[j] else { continue };
            let grade = rel.grade;
            let Some(i) = rel
                .column
                .entries()
                .iter()
                .rev()
                .copied()
                .find(|&i| generators[i as usize] == Some(grade))
            else {
                continue;
            };
            // generator i becomes the sum of the other entries of relation j
            let pivot_column = relations[j].take().expect("checked above").column;
            for other in relations.iter_mut().flatten() {
                if other.column.contains(i) {
                    other.column.add_assign(&pivot_column);
                }
            }
            generators[i as usize] = None;
            changed = true;
        }
    }

    let mut new_index = vec![u32::MAX; generators.len()];
    let mut kept_generators = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if let Some(g) = g {
            new_index[i] = kept_generators.len() as u32;
            kept_generators.push(*g);
        }
    }
    let mut kept_relations: Vec<Relation> = Vec::new();
    for rel in relations.into_iter().flatten() {
        if rel.column.is_empty() {
            continue;
        }
        let rel = Relation::new(rel.grade, rel.column.map_indices(|i| new_index[i as usize]));
        if kept_relations.iter().any(|r| r == &rel) {
            continue;
        }
        kept_relations.push(rel);
    }
    Presentation::with_extents(p.m(), p.n(), kept_generators, kept_relations)
        .expect("cancellation keeps the presentation homogeneous")
}

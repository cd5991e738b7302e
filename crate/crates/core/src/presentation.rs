//! Bigraded F2 presentations: generators are rows, relations are columns.

use thiserror::Error;

use crate::column::F2Column;
use crate::grade::Bigrade;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub grade: Bigrade,
    /// Nonzero generator indices.
    pub column: F2Column,
}

impl Relation {
    pub fn new(grade: Bigrade, column: F2Column) -> Self {
        Self { grade, column }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relation {relation} refers to generator {index}, but there are only {generators} generators")]
    IndexOutOfRange {
        relation: usize,
        index: u32,
        generators: usize,
    },
    #[error("relation {relation} at {relation_grade} contains generator {generator} at {generator_grade}, which is not below it")]
    NonHomogeneous {
        relation: usize,
        generator: u32,
        relation_grade: Bigrade,
        generator_grade: Bigrade,
    },
    #[error("grade {grade} lies outside the grid {m}x{n}")]
    GradeOutOfRange { grade: Bigrade, m: u32, n: u32 },
}

/// A presentation of a module on the grid `{1..m} x {1..n}`.
///
/// The extents are explicit so that a presentation can describe a module whose
/// top rows or columns carry no generators or relations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Presentation {
    m: u32,
    n: u32,
    generators: Vec<Bigrade>,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Builds a presentation whose extents are the maxima of the occurring
    /// coordinates.
    pub fn new(
        generators: Vec<Bigrade>,
        relations: Vec<Relation>,
    ) -> Result<Self, PresentationError> {
        let m = generators
            .iter()
            .map(|g| g.scale)
            .chain(relations.iter().map(|r| r.grade.scale))
            .max()
            .unwrap_or(0);
        let n = generators
            .iter()
            .map(|g| g.height)
            .chain(relations.iter().map(|r| r.grade.height))
            .max()
            .unwrap_or(0);
        Self::with_extents(m, n, generators, relations)
    }

    pub fn with_extents(
        m: u32,
        n: u32,
        generators: Vec<Bigrade>,
        relations: Vec<Relation>,
    ) -> Result<Self, PresentationError> {
        let p = Self {
            m,
            n,
            generators,
            relations,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn empty(m: u32, n: u32) -> Self {
        Self {
            m,
            n,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), PresentationError> {
        let in_grid = |g: &Bigrade| g.scale >= 1 && g.scale <= self.m && g.height >= 1 && g.height <= self.n;
        for g in &self.generators {
            if !in_grid(g) {
                return Err(PresentationError::GradeOutOfRange {
                    grade: *g,
                    m: self.m,
                    n: self.n,
                });
            }
        }
        for (j, rel) in self.relations.iter().enumerate() {
            if !in_grid(&rel.grade) {
                return Err(PresentationError::GradeOutOfRange {
                    grade: rel.grade,
                    m: self.m,
                    n: self.n,
                });
            }
            for i in rel.column.iter() {
                let Some(g) = self.generators.get(i as usize) else {
                    return Err(PresentationError::IndexOutOfRange {
                        relation: j,
                        index: i,
                        generators: self.generators.len(),
                    });
                };
                if !g.le(&rel.grade) {
                    return Err(PresentationError::NonHomogeneous {
                        relation: j,
                        generator: i,
                        relation_grade: rel.grade,
                        generator_grade: *g,
                    });
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

    pub fn generators(&self) -> &[Bigrade] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty() && self.relations.is_empty()
    }

    /// Block-diagonal sum. Extents are the componentwise maxima.
    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        let offset = self.generators.len() as u32;
        let mut generators = self.generators.clone();
        generators.extend_from_slice(&other.generators);
        let mut relations = self.relations.clone();
        relations.extend(
            other
                .relations
                .iter()
                .map(|r| Relation::new(r.grade, r.column.map_indices(|i| i + offset))),
        );
        Presentation {
            m: self.m.max(other.m),
            n: self.n.max(other.n),
            generators,
            relations,
        }
    }

    /// Same generators and relations on a larger grid.
    pub fn extended_to(&self, m: u32, n: u32) -> Result<Presentation, PresentationError> {
        Presentation::with_extents(m, n, self.generators.clone(), self.relations.clone())
    }
}

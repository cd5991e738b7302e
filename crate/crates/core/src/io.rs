//! Text formats for presentations (`scc2020` dialect) and graphcodes.
//!
//! Presentation file:
//!
//! ```text
//! scc2020
//! 2
//! <r> <g>
//! <scale> <height> ; <i1> <i2> ...     (r relation lines)
//! <scale> <height> ;                   (g generator lines)
//! ```
//!
//! Graphcode file:
//!
//! ```text
//! graphcode
//! <m> <n>
//! <V>
//! <b> <d> <h>                          (V label lines)
//! <E>
//! <u> <v>                              (E edge lines, zero-based)
//! ```
//!
//! Lines starting with `#` and blank lines are ignored; CRLF line endings are
//! accepted. Every error carries the one-based line number it refers to.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::column::F2Column;
use crate::grade::{Bar, Bigrade};
use crate::graphcode::{Graphcode, GraphcodeError};
use crate::presentation::{Presentation, PresentationError, Relation};

pub const PRESENTATION_HEADER: &str = "scc2020";
pub const GRAPHCODE_HEADER: &str = "graphcode";

/// Largest accepted grid coordinate or extent.
pub const MAX_COORDINATE: u32 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected header `{expected}`, found `{found}`")]
    BadHeader {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: expected parameter count 2, found `{found}`")]
    BadParameterCount { line: usize, found: String },
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("line {line}: unexpected end of input, expected {expected}")]
    UnexpectedEnd { line: usize, expected: &'static str },
    #[error("line {line}: generator index {index} out of range (there are {generators} generators)")]
    IndexOutOfRange {
        line: usize,
        index: u32,
        generators: usize,
    },
    #[error("line {line}: generator {generator} at {generator_grade} is not below relation grade {relation_grade}")]
    NonHomogeneous {
        line: usize,
        generator: u32,
        generator_grade: Bigrade,
        relation_grade: Bigrade,
    },
    #[error("line {line}: label {bar} violates 1 <= b < d <= {max_death}, 1 <= h <= {n}")]
    LabelInvariantViolated {
        line: usize,
        bar: Bar,
        max_death: u32,
        n: u32,
    },
    #[error("line {line}: edge {from}->{to} refers to a missing vertex (there are {vertices})")]
    DanglingEdge {
        line: usize,
        from: u32,
        to: u32,
        vertices: usize,
    },
    #[error("line {line}: edge {from}->{to} is repeated")]
    DuplicateEdge { line: usize, from: u32, to: u32 },
    #[error("line {line}: {source}")]
    InvalidGraphcode {
        line: usize,
        #[source]
        source: GraphcodeError,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            Self::BadHeader { line, .. }
            | Self::BadParameterCount { line, .. }
            | Self::MalformedLine { line, .. }
            | Self::UnexpectedEnd { line, .. }
            | Self::IndexOutOfRange { line, .. }
            | Self::NonHomogeneous { line, .. }
            | Self::LabelInvariantViolated { line, .. }
            | Self::DanglingEdge { line, .. }
            | Self::DuplicateEdge { line, .. }
            | Self::InvalidGraphcode { line, .. } => *line,
        }
    }

    /// Errors about well-formed text describing an invalid structure.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Self::IndexOutOfRange { .. }
                | Self::NonHomogeneous { .. }
                | Self::LabelInvariantViolated { .. }
                | Self::DanglingEdge { .. }
                | Self::DuplicateEdge { .. }
                | Self::InvalidGraphcode { .. }
        )
    }
}

/// Either kind of input file, detected by its header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Presentation(Presentation),
    Graphcode(Graphcode),
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next content line with its one-based number.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((i + 1, line));
        }
        None
    }

    fn expect(&mut self, expected: &'static str) -> Result<(usize, &'a str), ParseError> {
        self.next_line().ok_or(ParseError::UnexpectedEnd {
            line: self.last + 1,
            expected,
        })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.next_line() {
            None => Ok(()),
            Some((line, text)) => Err(malformed(line, format!("unexpected trailing content `{text}`"))),
        }
    }
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::MalformedLine {
        line,
        message: message.into(),
    }
}

fn parse_numbers<T: std::str::FromStr>(line: usize, text: &str, count: usize, what: &str) -> Result<Vec<T>, ParseError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != count {
        return Err(malformed(line, format!("expected {count} integers ({what}), found `{text}`")));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<T>()
                .map_err(|_| malformed(line, format!("`{f}` is not a valid integer ({what})")))
        })
        .collect()
}

fn coordinate(line: usize, value: u32, what: &str) -> Result<u32, ParseError> {
    if value == 0 || value > MAX_COORDINATE {
        return Err(malformed(line, format!("{what} {value} is outside 1..={MAX_COORDINATE}")));
    }
    Ok(value)
}

/// Reads `<scale> <height> ; <indices...>` and returns the grade and indices.
fn parse_graded_line(line: usize, text: &str) -> Result<(Bigrade, Vec<u32>), ParseError> {
    let Some((grade, rest)) = text.split_once(';') else {
        return Err(malformed(line, format!("missing `;` in `{text}`")));
    };
    let g: Vec<u32> = parse_numbers(line, grade, 2, "scale and height")?;
    let grade = Bigrade::new(coordinate(line, g[0], "scale")?, coordinate(line, g[1], "height")?);
    let indices = rest
        .split_whitespace()
        .map(|f| {
            f.parse::<u32>()
                .map_err(|_| malformed(line, format!("`{f}` is not a valid generator index")))
        })
        .collect::<Result<Vec<u32>, _>>()?;
    Ok((grade, indices))
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.expect("header")?;
    if header != PRESENTATION_HEADER {
        return Err(ParseError::BadHeader {
            line,
            expected: PRESENTATION_HEADER,
            found: header.to_string(),
        });
    }
    parse_presentation_body(&mut lines)
}

fn parse_presentation_body(lines: &mut Lines<'_>) -> Result<Presentation, ParseError> {
    let (line, params) = lines.expect("parameter count")?;
    if params != "2" {
        return Err(ParseError::BadParameterCount {
            line,
            found: params.to_string(),
        });
    }
    let (line, counts) = lines.expect("relation and generator counts")?;
    let counts: Vec<usize> = parse_numbers(line, counts, 2, "relation and generator counts")?;
    let (r, g) = (counts[0], counts[1]);

    let mut relations = Vec::with_capacity(r.min(1 << 16));
    let mut relation_lines = Vec::with_capacity(r.min(1 << 16));
    for _ in 0..r {
        let (line, text) = lines.expect("relation line")?;
        let (grade, indices) = parse_graded_line(line, text)?;
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(malformed(line, format!("generator index {} repeated", w[0])));
        }
        let column = F2Column::from_sorted(sorted).expect("indices are sorted and distinct");
        relations.push(Relation::new(grade, column));
        relation_lines.push(line);
    }
    let mut generators = Vec::with_capacity(g.min(1 << 16));
    for _ in 0..g {
        let (line, text) = lines.expect("generator line")?;
        let (grade, indices) = parse_graded_line(line, text)?;
        if !indices.is_empty() {
            return Err(malformed(line, "generator lines take no entries after `;`"));
        }
        generators.push(grade);
    }
    lines.finish()?;
    Presentation::new(generators, relations).map_err(|e| match e {
        PresentationError::IndexOutOfRange {
            relation,
            index,
            generators,
        } => ParseError::IndexOutOfRange {
            line: relation_lines[relation],
            index,
            generators,
        },
        PresentationError::NonHomogeneous {
            relation,
            generator,
            relation_grade,
            generator_grade,
        } => ParseError::NonHomogeneous {
            line: relation_lines[relation],
            generator,
            generator_grade,
            relation_grade,
        },
        PresentationError::GradeOutOfRange { .. } => {
            unreachable!("extents are inferred from the grades")
        }
    })
}

pub fn write_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{PRESENTATION_HEADER}\n2\n{} {}", p.num_relations(), p.num_generators());
    for rel in p.relations() {
        let _ = write!(out, "{} {} ;", rel.grade.scale, rel.grade.height);
        for i in rel.column.iter() {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    for g in p.generators() {
        let _ = writeln!(out, "{} {} ;", g.scale, g.height);
    }
    out
}

pub fn parse_graphcode(text: &str) -> Result<Graphcode, ParseError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.expect("header")?;
    if header != GRAPHCODE_HEADER {
        return Err(ParseError::BadHeader {
            line,
            expected: GRAPHCODE_HEADER,
            found: header.to_string(),
        });
    }
    parse_graphcode_body(&mut lines)
}

fn parse_graphcode_body(lines: &mut Lines<'_>) -> Result<Graphcode, ParseError> {
    let (line, extents) = lines.expect("grid extents")?;
    let extents: Vec<u32> = parse_numbers(line, extents, 2, "m and n")?;
    let (m, n) = (extents[0], extents[1]);
    if m > MAX_COORDINATE || n > MAX_COORDINATE {
        return Err(malformed(line, format!("grid extents exceed {MAX_COORDINATE}")));
    }
    let (line, count) = lines.expect("vertex count")?;
    let v: usize = parse_numbers(line, count, 1, "vertex count")?[0];
    let mut vertices = Vec::with_capacity(v.min(1 << 16));
    for _ in 0..v {
        let (line, text) = lines.expect("vertex label")?;
        let l: Vec<u32> = parse_numbers(line, text, 3, "birth, death and height")?;
        let bar = Bar::new(l[0], l[1], l[2]);
        let ok = bar.birth >= 1 && bar.birth < bar.death && bar.death <= m + 1 && bar.height >= 1 && bar.height <= n;
        if !ok {
            return Err(ParseError::LabelInvariantViolated {
                line,
                bar,
                max_death: m + 1,
                n,
            });
        }
        vertices.push(bar);
    }
    let (line, count) = lines.expect("edge count")?;
    let e: usize = parse_numbers(line, count, 1, "edge count")?[0];
    let mut edges = Vec::with_capacity(e.min(1 << 16));
    let mut edge_lines: HashMap<(u32, u32), usize> = HashMap::new();
    for _ in 0..e {
        let (line, text) = lines.expect("edge line")?;
        let uv: Vec<u32> = parse_numbers(line, text, 2, "source and target")?;
        let (from, to) = (uv[0], uv[1]);
        if from as usize >= vertices.len() || to as usize >= vertices.len() {
            return Err(ParseError::DanglingEdge {
                line,
                from,
                to,
                vertices: vertices.len(),
            });
        }
        if edge_lines.insert((from, to), line).is_some() {
            return Err(ParseError::DuplicateEdge { line, from, to });
        }
        edges.push((from, to));
    }
    lines.finish()?;
    Graphcode::new(m, n, vertices, edges).map_err(|source| {
        let line = match &source {
            GraphcodeError::NotUpward { from, to }
            | GraphcodeError::NotEntangled { from, to }
            | GraphcodeError::DanglingEdge { from, to }
            | GraphcodeError::DuplicateEdge { from, to }
            | GraphcodeError::SkipsHeight { from, to } => edge_lines[&(*from, *to)],
            GraphcodeError::MixedOutHeights { vertex } => edge_lines
                .iter()
                .filter(|((s, _), _)| s == vertex)
                .map(|(_, &l)| l)
                .max()
                .unwrap_or(0),
            GraphcodeError::LabelInvariantViolated { .. } => 0,
        };
        ParseError::InvalidGraphcode { line, source }
    })
}

pub fn write_graphcode(g: &Graphcode) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{GRAPHCODE_HEADER}\n{} {}\n{}", g.m(), g.n(), g.num_vertices());
    for bar in g.vertices() {
        let _ = writeln!(out, "{} {} {}", bar.birth, bar.death, bar.height);
    }
    let _ = writeln!(out, "{}", g.num_edges());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses either format, chosen by the first content line.
pub fn parse_any(text: &str) -> Result<Input, ParseError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.expect("header")?;
    match header {
        PRESENTATION_HEADER => parse_presentation_body(&mut lines).map(Input::Presentation),
        GRAPHCODE_HEADER => parse_graphcode_body(&mut lines).map(Input::Graphcode),
        other => Err(ParseError::BadHeader {
            line,
            expected: "scc2020` or `graphcode",
            found: other.to_string(),
        }),
    }
}

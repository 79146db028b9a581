//! Topological and directional interlock tests.
//!
//! Each component is the rectangular permutation of the same layout under
//! one key, refolded row-major into the layout's shape. Components are then
//! compared row by row.

use std::fmt;

use crate::corpus::SymbolText;
use crate::engine::{PermutationPass, SkipKey};
use crate::error::{Error, Result};
use crate::layout::{Direction, Grid, GridShape, ReadDirections, Topology, Traversal};

/// Horizontal (East) and vertical (South) components under one key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlockComponents {
    pub horizontal: Grid,
    pub vertical: Grid,
    pub key: SkipKey,
}

/// The four directional components under one key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionalComponents {
    pub north: Grid,
    pub south: Grid,
    pub east: Grid,
    pub west: Grid,
    pub key: SkipKey,
}

impl DirectionalComponents {
    pub fn get(&self, direction: Direction) -> &Grid {
        match direction {
            Direction::North => &self.north,
            Direction::South => &self.south,
            Direction::East => &self.east,
            Direction::West => &self.west,
        }
    }
}

/// Row-by-row comparison of two equally shaped grids.
#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    pub rows: usize,
    /// Rows equal position for position.
    pub exact_row_matches: usize,
    /// Rows equal to the other grid's same row read backwards.
    pub reversed_row_matches: usize,
    /// Per-row fraction of agreeing positions.
    pub row_similarity: Vec<f64>,
    /// Fraction of agreeing cells over the whole grid.
    pub similarity: f64,
}

impl PairReport {
    pub fn best_row_similarity(&self) -> f64 {
        self.row_similarity.iter().copied().fold(0.0, f64::max)
    }
}

/// Divergence of each directional component from the other three.
#[derive(Clone, Debug, PartialEq)]
pub struct OutlierReport {
    /// `1 - mean similarity to the other three`, per direction.
    pub scores: Vec<(Direction, f64)>,
    /// The uniquely most divergent direction, if there is one.
    pub candidate: Option<Direction>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchReport {
    pub rows: usize,
    /// Largest exact-row-match count over the compared pairs.
    pub exact_row_matches: usize,
    /// Largest single-row similarity over the compared pairs.
    pub best_row_similarity: f64,
    /// Largest reversed-row-match count over the compared pairs.
    pub reversed_row_matches: usize,
    pub pairs: Vec<((Direction, Direction), PairReport)>,
    pub outlier: Option<OutlierReport>,
    /// One-row layouts make East = South and West = North.
    pub degenerate: bool,
}

impl MatchReport {
    fn from_pairs(rows: usize, pairs: Vec<((Direction, Direction), PairReport)>, outlier: Option<OutlierReport>) -> Self {
        MatchReport {
            rows,
            exact_row_matches: pairs.iter().map(|(_, p)| p.exact_row_matches).max().unwrap_or(0),
            best_row_similarity: pairs.iter().map(|(_, p)| p.best_row_similarity()).fold(0.0, f64::max),
            reversed_row_matches: pairs.iter().map(|(_, p)| p.reversed_row_matches).max().unwrap_or(0),
            pairs,
            outlier,
            degenerate: rows == 1,
        }
    }
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degenerate {
            writeln!(f, "degenerate layout: one row, so East = South and West = North")?;
        }
        writeln!(f, "exact row matches: {} of {}", self.exact_row_matches, self.rows)?;
        writeln!(f, "best row similarity: {:.3}", self.best_row_similarity)?;
        writeln!(f, "reversed row matches: {}", self.reversed_row_matches)?;
        for ((a, b), p) in &self.pairs {
            writeln!(
                f,
                "  {a}/{b}: exact={} reversed={} similarity={:.3}",
                p.exact_row_matches, p.reversed_row_matches, p.similarity
            )?;
        }
        if let Some(outlier) = &self.outlier {
            for (d, s) in &outlier.scores {
                writeln!(f, "  outlier score {d}: {s:.3}")?;
            }
            match outlier.candidate {
                Some(d) => writeln!(f, "candidate read direction: {d}")?,
                None => writeln!(f, "candidate read direction: none")?,
            }
        }
        Ok(())
    }
}

/// Compares two grids of the same shape row by row.
pub fn compare_grids(a: &Grid, b: &Grid) -> Result<PairReport> {
    if a.shape() != b.shape() {
        return Err(Error::Comparison(format!(
            "cannot compare a {} grid with a {} grid",
            a.shape(),
            b.shape()
        )));
    }
    let rows = a.rows();
    let cols = a.shape().cols();
    let mut exact = 0;
    let mut reversed = 0;
    let mut agree_total = 0;
    let mut row_similarity = Vec::with_capacity(rows);
    for r in 0..rows {
        let (ra, rb) = (a.row(r), b.row(r));
        let agree = ra.iter().zip(rb).filter(|(x, y)| x == y).count();
        agree_total += agree;
        row_similarity.push(agree as f64 / cols as f64);
        if agree == cols {
            exact += 1;
        }
        if ra.iter().eq(rb.iter().rev()) {
            reversed += 1;
        }
    }
    Ok(PairReport {
        rows,
        exact_row_matches: exact,
        reversed_row_matches: reversed,
        row_similarity,
        similarity: agree_total as f64 / (rows * cols) as f64,
    })
}

/// Single-pair [`MatchReport`].
pub fn score_match(a: &Grid, b: &Grid) -> Result<MatchReport> {
    let pair = compare_grids(a, b)?;
    Ok(MatchReport::from_pairs(
        a.rows(),
        vec![((Direction::East, Direction::South), pair)],
        None,
    ))
}

fn component(
    text: &SymbolText,
    shape: &GridShape,
    topology: &Topology,
    dirs: &ReadDirections,
    direction: Direction,
    key: SkipKey,
) -> Result<Grid> {
    let pass = PermutationPass {
        shape: shape.clone(),
        topology: topology.clone(),
        dirs: dirs.clone(),
        traversal: Traversal::Planar(direction),
        key,
    };
    let out = pass.apply(text)?;
    Grid::from_cells(shape.clone(), out.as_slice().to_vec())
}

fn planar_shape(shape: &GridShape) -> Result<GridShape> {
    let (r, c) = shape.planar()?;
    GridShape::rect(r, c)
}

/// Horizontal and vertical components of one layout under one key.
pub fn topological_interlock(
    text: &SymbolText,
    shape: &GridShape,
    topology: &Topology,
    dirs: &ReadDirections,
    key: SkipKey,
) -> Result<(InterlockComponents, MatchReport)> {
    let shape = planar_shape(shape)?;
    let horizontal = component(text, &shape, topology, dirs, Direction::East, key)?;
    let vertical = component(text, &shape, topology, dirs, Direction::South, key)?;
    let report = score_match(&horizontal, &vertical)?;
    Ok((
        InterlockComponents {
            horizontal,
            vertical,
            key,
        },
        report,
    ))
}

/// North, South, East and West components of one layout under one key.
///
/// The outlier score of a component is one minus its mean cell similarity to
/// the other three; the candidate read direction is the unique maximum.
pub fn directional_interlock(
    text: &SymbolText,
    shape: &GridShape,
    topology: &Topology,
    dirs: &ReadDirections,
    key: SkipKey,
) -> Result<(DirectionalComponents, MatchReport)> {
    let shape = planar_shape(shape)?;
    let make = |d| component(text, &shape, topology, dirs, d, key);
    let comps = DirectionalComponents {
        north: make(Direction::North)?,
        south: make(Direction::South)?,
        east: make(Direction::East)?,
        west: make(Direction::West)?,
        key,
    };

    let mut pairs = Vec::new();
    let all = Direction::ALL;
    for (i, &a) in all.iter().enumerate() {
        for &b in &all[i + 1..] {
            pairs.push(((a, b), compare_grids(comps.get(a), comps.get(b))?));
        }
    }
    let rows = shape.rows();
    let outlier = if rows == 1 {
        None
    } else {
        let scores: Vec<(Direction, f64)> = all
            .iter()
            .map(|&d| {
                let mean = pairs
                    .iter()
                    .filter(|((a, b), _)| *a == d || *b == d)
                    .map(|(_, p)| p.similarity)
                    .sum::<f64>()
                    / 3.0;
                (d, 1.0 - mean)
            })
            .collect();
        let max = scores.iter().map(|(_, s)| *s).fold(f64::MIN, f64::max);
        let top: Vec<Direction> = scores.iter().filter(|(_, s)| *s == max).map(|(d, _)| *d).collect();
        Some(OutlierReport {
            candidate: (top.len() == 1).then(|| top[0]),
            scores,
        })
    };
    Ok((comps, MatchReport::from_pairs(rows, pairs, outlier)))
}

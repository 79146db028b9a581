//! Grid shapes, row topologies, read directions and traversal orders.
//!
//! Cells are always addressed by their row-major index in the grid. A
//! [`Linearization`] maps linear positions to cell indices; the permutation
//! engine walks that sequence with an ELS key.

use std::fmt;
use std::str::FromStr;

use crate::corpus::{Symbol, SymbolText};
use crate::error::{Error, Result};

/// Largest row count whose `R!` fits in a `u64`.
pub const MAX_TOPOLOGY_ROWS: usize = 20;
/// Largest row count whose `2^R` fits in a `u64`.
pub const MAX_DIRECTION_ROWS: usize = 63;

/// Axis lengths of a 1-, 2- or 3-dimensional layout, slowest axis first.
///
/// Two-dimensional shapes are `(rows, columns)` with `rows <= columns`: text
/// is laid out in the smaller number of longer rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridShape {
    extents: Vec<usize>,
}

impl GridShape {
    pub fn new(extents: Vec<usize>) -> Result<Self> {
        if extents.is_empty() || extents.len() > 3 {
            return Err(Error::Layout(format!(
                "grid rank must be 1, 2 or 3, got {}",
                extents.len()
            )));
        }
        if extents.iter().any(|&e| e == 0) {
            return Err(Error::Layout("grid extents must be positive".into()));
        }
        if let [r, c] = extents[..] {
            if r > c {
                return Err(Error::Layout(format!(
                    "rectangular layouts use fewer, longer rows: {r}x{c} has more rows than columns"
                )));
            }
        }
        if extents.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e)).is_none() {
            return Err(Error::Layout("grid size overflows".into()));
        }
        Ok(GridShape { extents })
    }

    pub fn linear(len: usize) -> Result<Self> {
        GridShape::new(vec![len])
    }

    pub fn rect(rows: usize, cols: usize) -> Result<Self> {
        GridShape::new(vec![rows, cols])
    }

    pub fn cuboid(a: usize, b: usize, c: usize) -> Result<Self> {
        GridShape::new(vec![a, b, c])
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn rank(&self) -> usize {
        self.extents.len()
    }

    pub fn cell_count(&self) -> usize {
        self.extents.iter().product()
    }

    /// Length of a row: the fastest (last) axis.
    pub fn cols(&self) -> usize {
        *self.extents.last().unwrap()
    }

    /// Number of rows along the fastest axis; a linear shape is one row.
    pub fn rows(&self) -> usize {
        self.cell_count() / self.cols()
    }

    /// Rows and columns of a planar reading. Rank-1 shapes read as `1 x L`.
    pub fn planar(&self) -> Result<(usize, usize)> {
        match self.extents[..] {
            [l] => Ok((1, l)),
            [r, c] => Ok((r, c)),
            _ => Err(Error::Layout(format!(
                "expected a 1- or 2-dimensional shape, got {self}"
            ))),
        }
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if self.cell_count() != len {
            return Err(Error::Layout(format!(
                "shape {self} holds {} cells but the text has {len} symbols",
                self.cell_count()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.extents.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for GridShape {
    type Err = Error;

    /// Parses `L`, `RxC` or `PxQxR`.
    fn from_str(s: &str) -> Result<Self> {
        let extents = s
            .split(['x', 'X', '*'])
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad shape `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        GridShape::new(extents)
    }
}

/// Candidate layouts for a text length: the linear layout, every `R x C`
/// with `1 < R <= C`, and every `A x B x C` with `1 < A <= B <= C`.
pub fn candidate_shapes(len: usize) -> Vec<GridShape> {
    let mut shapes = vec![GridShape { extents: vec![len] }];
    let divisors: Vec<usize> = (2..).take_while(|d| d * d <= len).filter(|d| len % d == 0).collect();
    for &r in &divisors {
        shapes.push(GridShape {
            extents: vec![r, len / r],
        });
    }
    for &a in &divisors {
        let rest = len / a;
        for &b in divisors.iter().filter(|&&b| b >= a && b * b <= rest && rest % b == 0) {
            shapes.push(GridShape {
                extents: vec![a, b, rest / b],
            });
        }
    }
    shapes
}

/// An ordering of the rows of a layout: grid row `r` holds text row `row_order[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    row_order: Vec<usize>,
}

impl Topology {
    pub fn new(row_order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; row_order.len()];
        for &r in &row_order {
            if r >= seen.len() || std::mem::replace(&mut seen[r], true) {
                return Err(Error::Layout(format!(
                    "topology {row_order:?} is not a permutation of 0..{}",
                    row_order.len()
                )));
            }
        }
        Ok(Topology { row_order })
    }

    pub fn identity(rows: usize) -> Self {
        Topology {
            row_order: (0..rows).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.row_order.len()
    }

    pub fn row_order(&self) -> &[usize] {
        &self.row_order
    }

    pub fn is_identity(&self) -> bool {
        self.row_order.iter().enumerate().all(|(i, &r)| i == r)
    }

    /// The `index`-th permutation of `rows` rows in lexicographic order.
    pub fn unrank(rows: usize, mut index: u64) -> Result<Self> {
        let total = factorial(rows)?;
        if index >= total {
            return Err(Error::Range(format!(
                "topology index {index} out of range for {rows} rows ({total} topologies)"
            )));
        }
        let mut pool: Vec<usize> = (0..rows).collect();
        let mut order = Vec::with_capacity(rows);
        for k in (0..rows).rev() {
            let block = factorial(k)?;
            let pick = (index / block) as usize;
            index %= block;
            order.push(pool.remove(pick));
        }
        Ok(Topology { row_order: order })
    }

    /// Lexicographic index of this permutation.
    pub fn rank(&self) -> u64 {
        let n = self.row_order.len();
        let mut index = 0u64;
        for i in 0..n {
            let smaller_after = self.row_order[i + 1..]
                .iter()
                .filter(|&&x| x < self.row_order[i])
                .count() as u64;
            index += smaller_after * factorial(n - 1 - i).expect("rank of a constructed topology");
        }
        index
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.row_order.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Topology {
    type Err = Error;

    /// Parses a permutation literal such as `2,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad topology `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Topology::new(order)
    }
}

pub(crate) fn factorial(n: usize) -> Result<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).ok_or_else(|| {
        Error::Tractability(format!("{n}! row topologies overflow the enumeration counter"))
    })
}

/// All `rows!` topologies in lexicographic order.
pub fn enumerate_topologies(rows: usize) -> Result<impl Iterator<Item = Topology>> {
    if rows == 0 {
        return Err(Error::Layout("a layout needs at least one row".into()));
    }
    let total = factorial(rows)?;
    let mut current = Some(Topology::identity(rows));
    Ok((0..total).map(move |_| {
        let out = current.take().expect("iterator yields exactly rows! items");
        let mut next = out.row_order.clone();
        if next_permutation(&mut next) {
            current = Some(Topology { row_order: next });
        }
        out
    }))
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (0..a.len().saturating_sub(1)).rfind(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = a.iter().rposition(|x| *x > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// Per-row read direction: bit `r` set means grid row `r` reads right to left.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReadDirections {
    reversed: Vec<bool>,
}

impl ReadDirections {
    pub fn new(reversed: Vec<bool>) -> Self {
        ReadDirections { reversed }
    }

    pub fn forward(rows: usize) -> Self {
        ReadDirections {
            reversed: vec![false; rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.reversed.len()
    }

    pub fn is_reversed(&self, row: usize) -> bool {
        self.reversed[row]
    }

    pub fn bits(&self) -> &[bool] {
        &self.reversed
    }

    /// Index in `0..2^rows`; row 0 is the most significant bit, so index
    /// order matches the order of the bit strings.
    pub fn index(&self) -> u64 {
        self.reversed.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn from_index(rows: usize, index: u64) -> Result<Self> {
        if rows > MAX_DIRECTION_ROWS {
            return Err(Error::Tractability(format!(
                "2^{rows} read directions overflow the enumeration counter"
            )));
        }
        if index >> rows != 0 {
            return Err(Error::Range(format!(
                "read-direction index {index} out of range for {rows} rows"
            )));
        }
        Ok(ReadDirections {
            reversed: (0..rows).map(|r| (index >> (rows - 1 - r)) & 1 == 1).collect(),
        })
    }
}

impl fmt::Display for ReadDirections {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.reversed
            .iter()
            .try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl FromStr for ReadDirections {
    type Err = Error;

    /// Parses a bit string such as `01011`.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad read-direction bits `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ReadDirections::new)
    }
}

/// A grid of symbols stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    shape: GridShape,
    cells: Vec<Symbol>,
}

impl Grid {
    /// Folds `cells` row-major into `shape`.
    pub fn from_cells(shape: GridShape, cells: Vec<Symbol>) -> Result<Self> {
        shape.check_len(cells.len())?;
        Ok(Grid { shape, cells })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn rows(&self) -> usize {
        self.shape.rows()
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        let c = self.shape.cols();
        &self.cells[r * c..(r + 1) * c]
    }

    pub fn row_string(&self, r: usize) -> String {
        self.row(r).iter().collect()
    }

    pub fn to_text(&self) -> SymbolText {
        SymbolText::new(self.cells.clone())
    }

    /// Aligned rendering: symbols separated by spaces, one row per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows() {
            let row: Vec<String> = self.row(r).iter().map(char::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Lays `text` out on `shape`, permuting rows by `topology` and reversing
/// rows flagged in `dirs`.
///
/// Grid row `r` is text row `topology[r]`, read right to left when
/// `dirs[r]` is set. For rank-3 shapes a "row" is a line along the last axis.
pub fn make_grid(
    text: &SymbolText,
    shape: &GridShape,
    topology: &Topology,
    dirs: &ReadDirections,
) -> Result<Grid> {
    shape.check_len(text.len())?;
    check_row_params(shape, topology, dirs)?;
    let cells = (0..text.len())
        .map(|cell| text[layout_source(shape.cols(), topology, dirs, cell)])
        .collect();
    Ok(Grid {
        shape: shape.clone(),
        cells,
    })
}

pub(crate) fn check_row_params(shape: &GridShape, topology: &Topology, dirs: &ReadDirections) -> Result<()> {
    let rows = shape.rows();
    if topology.rows() != rows || dirs.rows() != rows {
        return Err(Error::Layout(format!(
            "shape {shape} has {rows} rows but topology has {} and read directions have {}",
            topology.rows(),
            dirs.rows()
        )));
    }
    Ok(())
}

/// Text index shown at grid cell `cell` under the given row arrangement.
#[inline]
pub(crate) fn layout_source(cols: usize, topology: &Topology, dirs: &ReadDirections, cell: usize) -> usize {
    let (r, c) = (cell / cols, cell % cols);
    let c = if dirs.reversed[r] { cols - 1 - c } else { c };
    topology.row_order[r] * cols + c
}

/// The four planar reading directions, each starting at cell (0, 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Row-major, left to right then top to bottom.
    East,
    /// Column-major, top to bottom then left to right.
    South,
    /// East reversed, rotated so cell (0, 0) comes first.
    West,
    /// South reversed, rotated so cell (0, 0) comes first.
    North,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::North, Direction::South, Direction::East, Direction::West];

    pub fn name(self) -> &'static str {
        match self {
            Direction::East => "east",
            Direction::South => "south",
            Direction::West => "west",
            Direction::North => "north",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "east" | "e" => Ok(Direction::East),
            "south" | "s" => Ok(Direction::South),
            "west" | "w" => Ok(Direction::West),
            "north" | "n" => Ok(Direction::North),
            _ => Err(Error::Parse(format!("unknown direction `{s}`"))),
        }
    }
}

/// Starting corner of a cuboid walk: bit `a` set means axis `a` runs from
/// its far end.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Corner(pub [bool; 3]);

impl Corner {
    pub fn all() -> impl Iterator<Item = Corner> {
        (0..8u8).map(|bits| Corner([bits & 4 != 0, bits & 2 != 0, bits & 1 != 0]))
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl FromStr for Corner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: ReadDirections = s.parse()?;
        match bits.bits() {
            &[a, b, c] => Ok(Corner([a, b, c])),
            _ => Err(Error::Parse(format!("corner needs three bits, got `{s}`"))),
        }
    }
}

/// Nesting order of the three cuboid axes, slowest first. The natural order
/// `[0, 1, 2]` is plain row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AxisOrder([usize; 3]);

impl AxisOrder {
    pub const NATURAL: AxisOrder = AxisOrder([0, 1, 2]);

    pub fn new(order: [usize; 3]) -> Result<Self> {
        let mut sorted = order;
        sorted.sort_unstable();
        if sorted != [0, 1, 2] {
            return Err(Error::Layout(format!("axis order {order:?} is not a permutation of 0,1,2")));
        }
        Ok(AxisOrder(order))
    }

    pub fn axes(&self) -> [usize; 3] {
        self.0
    }
}

impl Default for AxisOrder {
    fn default() -> Self {
        AxisOrder::NATURAL
    }
}

impl fmt::Display for AxisOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for AxisOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: Topology = s.parse()?;
        match t.row_order() {
            &[a, b, c] => AxisOrder::new([a, b, c]),
            _ => Err(Error::Parse(format!("axis order needs three axes, got `{s}`"))),
        }
    }
}

/// How a grid is read into a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Traversal {
    Planar(Direction),
    Cuboid { corner: Corner, axis_order: AxisOrder },
}

impl fmt::Display for Traversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Traversal::Planar(d) => write!(f, "{d}"),
            Traversal::Cuboid { corner, axis_order } => write!(f, "corner={corner} axes={axis_order}"),
        }
    }
}

/// A bijection from linear positions to cell indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linearization {
    order: Vec<usize>,
    traversal: Traversal,
}

impl Linearization {
    /// Builds the traversal order of `traversal` over `shape`.
    pub fn new(shape: &GridShape, traversal: Traversal) -> Result<Self> {
        match traversal {
            Traversal::Planar(direction) => Self::planar(shape, direction),
            Traversal::Cuboid { corner, axis_order } => Self::cuboid(shape, corner, axis_order),
        }
    }

    pub fn planar(shape: &GridShape, direction: Direction) -> Result<Self> {
        let (rows, cols) = shape.planar()?;
        let len = rows * cols;
        let east = |p: usize| p;
        let south = |p: usize| (p % rows) * cols + p / rows;
        let order: Vec<usize> = match direction {
            Direction::East => (0..len).map(east).collect(),
            Direction::South => (0..len).map(south).collect(),
            Direction::West => (0..len).map(|p| east((len - p) % len)).collect(),
            Direction::North => (0..len).map(|p| south((len - p) % len)).collect(),
        };
        Ok(Linearization {
            order,
            traversal: Traversal::Planar(direction),
        })
    }

    pub fn cuboid(shape: &GridShape, corner: Corner, axis_order: AxisOrder) -> Result<Self> {
        let &[e0, e1, e2] = shape.extents() else {
            return Err(Error::Layout(format!("cuboid traversal needs a 3-dimensional shape, got {shape}")));
        };
        let extents = [e0, e1, e2];
        let strides = [e1 * e2, e2, 1];
        let [slow, mid, fast] = axis_order.0;
        let coord = |axis: usize, k: usize| if corner.0[axis] { extents[axis] - 1 - k } else { k };
        let mut order = Vec::with_capacity(shape.cell_count());
        for i in 0..extents[slow] {
            for j in 0..extents[mid] {
                for k in 0..extents[fast] {
                    order.push(
                        coord(slow, i) * strides[slow] + coord(mid, j) * strides[mid] + coord(fast, k) * strides[fast],
                    );
                }
            }
        }
        Ok(Linearization {
            order,
            traversal: Traversal::Cuboid { corner, axis_order },
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn traversal(&self) -> Traversal {
        self.traversal
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The grid's symbols in traversal order.
    pub fn read(&self, grid: &Grid) -> SymbolText {
        SymbolText::new(self.order.iter().map(|&c| grid.cells[c]).collect())
    }
}

/// Planar linearization of a grid.
pub fn linearize(grid: &Grid, direction: Direction) -> Result<Linearization> {
    Linearization::planar(grid.shape(), direction)
}

/// Cuboid linearization of a rank-3 grid.
pub fn linearize_cuboid(grid: &Grid, corner: Corner, axis_order: AxisOrder) -> Result<Linearization> {
    Linearization::cuboid(grid.shape(), corner, axis_order)
}

/// Spreadsheet-style label of a planar cell: column letters then 1-based row.
pub fn cell_label(cols: usize, cell: usize) -> String {
    let (r, mut c) = (cell / cols, cell % cols);
    let mut letters = Vec::new();
    loop {
        letters.push((b'A' + (c % 26) as u8) as char);
        if c < 26 {
            break;
        }
        c = c / 26 - 1;
    }
    letters.reverse();
    format!("{}{}", letters.into_iter().collect::<String>(), r + 1)
}

//! ELS permutation: the linear walk, rectangular and cubic passes, recursive
//! plans, and exact counting of the parameter space.
//!
//! Every pass is expressed as a gather map: output position `i` takes the
//! input symbol at `source[i]`. Plans compose those maps.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::corpus::SymbolText;
use crate::error::{Error, Result};
use crate::layout::{
    check_row_params, factorial, layout_source, make_grid, AxisOrder, Corner, Direction, GridShape, Linearization,
    ReadDirections, Topology, Traversal,
};

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Multiplicative inverse of `d` modulo `m`, if `gcd(d, m) = 1`.
pub fn mod_inverse(d: usize, m: usize) -> Option<usize> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (d as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as usize)
}

/// Skip distance and starting offset of an ELS walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SkipKey {
    pub skip: usize,
    pub offset: usize,
}

impl SkipKey {
    pub fn new(skip: usize, offset: usize) -> Self {
        SkipKey { skip, offset }
    }

    pub fn skip(skip: usize) -> Self {
        SkipKey { skip, offset: 0 }
    }

    /// Checks the key against a text length: `1 <= skip < len` (or `skip = 1`
    /// for a single symbol), `gcd(skip, len) = 1`, `offset < len`.
    pub fn validate(&self, len: usize) -> Result<()> {
        if len == 0 {
            return Err(Error::EmptyText);
        }
        if self.skip == 0 || (self.skip >= len && !(len == 1 && self.skip == 1)) {
            return Err(Error::InvalidKey(format!(
                "skip {} outside [1, {}] for length {len}",
                self.skip,
                len.saturating_sub(1).max(1)
            )));
        }
        let g = gcd(self.skip, len);
        if g != 1 {
            return Err(Error::NonCoprimeKey {
                skip: self.skip,
                length: len,
                gcd: g,
            });
        }
        if self.offset >= len {
            return Err(Error::InvalidKey(format!("offset {} outside [0, {}]", self.offset, len - 1)));
        }
        Ok(())
    }

    /// Position read at step `i`: `(offset + skip * i) mod len`.
    #[inline]
    pub fn position(&self, i: usize, len: usize) -> usize {
        ((self.offset as u128 + self.skip as u128 * i as u128) % len as u128) as usize
    }
}

impl fmt::Display for SkipKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D={} offset={}", self.skip, self.offset)
    }
}

/// Linear ELS permutation: `out[i] = text[(offset + skip * i) mod L]`.
pub fn algorithm_one(text: &SymbolText, key: SkipKey) -> Result<SymbolText> {
    let len = text.len();
    key.validate(len)?;
    let s = text.as_slice();
    let mut out = Vec::with_capacity(len);
    let mut pos = key.offset;
    for _ in 0..len {
        out.push(s[pos]);
        pos += key.skip;
        if pos >= len {
            pos -= len;
        }
    }
    Ok(SymbolText::new(out))
}

/// Cell indices visited by an ELS walk over `linearization`.
pub fn els_visit_order(linearization: &Linearization, key: SkipKey) -> Result<Vec<usize>> {
    let len = linearization.len();
    key.validate(len)?;
    Ok((0..len).map(|i| linearization.order()[key.position(i, len)]).collect())
}

/// One rectangular, linear or cubic permutation step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationPass {
    pub shape: GridShape,
    pub topology: Topology,
    pub dirs: ReadDirections,
    pub traversal: Traversal,
    pub key: SkipKey,
}

impl PermutationPass {
    /// A pass on the `1 x L` layout, equivalent to [`algorithm_one`].
    pub fn linear(len: usize, key: SkipKey) -> Result<Self> {
        Ok(PermutationPass {
            shape: GridShape::linear(len)?,
            topology: Topology::identity(1),
            dirs: ReadDirections::forward(1),
            traversal: Traversal::Planar(Direction::East),
            key,
        })
    }

    /// A rectangular pass with the natural row arrangement.
    pub fn planar(shape: GridShape, direction: Direction, key: SkipKey) -> Self {
        let rows = shape.rows();
        PermutationPass {
            shape,
            topology: Topology::identity(rows),
            dirs: ReadDirections::forward(rows),
            traversal: Traversal::Planar(direction),
            key,
        }
    }

    pub fn len(&self) -> usize {
        self.shape.cell_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        self.shape.check_len(len)?;
        check_row_params(&self.shape, &self.topology, &self.dirs)?;
        self.key.validate(len)
    }

    /// Gather map of this pass, given its precomputed linearization.
    pub(crate) fn fill_source(&self, linearization: &Linearization, out: &mut Vec<usize>) {
        fill_pass_source(self.shape.cols(), &self.topology, &self.dirs, linearization, self.key, out)
    }

    /// Gather map: output position `i` reads input position `source[i]`.
    pub fn source_indices(&self) -> Result<Vec<usize>> {
        self.validate(self.len())?;
        let lin = Linearization::new(&self.shape, self.traversal)?;
        let mut out = Vec::new();
        self.fill_source(&lin, &mut out);
        Ok(out)
    }

    pub fn apply(&self, text: &SymbolText) -> Result<SymbolText> {
        self.validate(text.len())?;
        Ok(text.gather(&self.source_indices()?))
    }
}

impl fmt::Display for PermutationPass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "shape={} topology={} dirs={} traversal={} {}",
            self.shape, self.topology, self.dirs, self.traversal, self.key
        )
    }
}

/// Writes the gather map of one pass into `out`. The caller has validated
/// every parameter against the linearization's length.
pub(crate) fn fill_pass_source(
    cols: usize,
    topology: &Topology,
    dirs: &ReadDirections,
    linearization: &Linearization,
    key: SkipKey,
    out: &mut Vec<usize>,
) {
    let len = linearization.len();
    let order = linearization.order();
    out.clear();
    out.reserve(len);
    let mut pos = key.offset;
    for _ in 0..len {
        out.push(layout_source(cols, topology, dirs, order[pos]));
        pos += key.skip;
        if pos >= len {
            pos -= len;
        }
    }
}

/// Rectangular permutation: lay out, linearize, then walk with the key.
pub fn rectangular_permute(text: &SymbolText, pass: &PermutationPass) -> Result<SymbolText> {
    pass.apply(text)
}

/// Same result as [`rectangular_permute`], computed step by step through an
/// explicit grid and linearized string. Kept as an independent route.
pub fn rectangular_permute_staged(text: &SymbolText, pass: &PermutationPass) -> Result<SymbolText> {
    let grid = make_grid(text, &pass.shape, &pass.topology, &pass.dirs)?;
    let lin = Linearization::new(&pass.shape, pass.traversal)?;
    algorithm_one(&lin.read(&grid), pass.key)
}

/// ELS walk over a cuboid read from `corner` with the given axis nesting.
pub fn cubic_permute(
    text: &SymbolText,
    shape: &GridShape,
    corner: Corner,
    axis_order: AxisOrder,
    key: SkipKey,
) -> Result<SymbolText> {
    if shape.rank() != 3 {
        return Err(Error::Layout(format!("cubic permutation needs a 3-dimensional shape, got {shape}")));
    }
    let rows = shape.rows();
    let pass = PermutationPass {
        shape: shape.clone(),
        topology: Topology::identity(rows),
        dirs: ReadDirections::forward(rows),
        traversal: Traversal::Cuboid { corner, axis_order },
        key,
    };
    pass.apply(text)
}

/// An ordered list of passes; its length is the recursion level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursionPlan {
    pub passes: Vec<PermutationPass>,
}

impl RecursionPlan {
    pub fn new(passes: Vec<PermutationPass>) -> Self {
        RecursionPlan { passes }
    }

    pub fn level(&self) -> usize {
        self.passes.len()
    }

    /// Composite gather map of the whole plan for a text of length `len`.
    pub fn source_indices(&self, len: usize) -> Result<Vec<usize>> {
        let mut composite: Vec<usize> = (0..len).collect();
        for pass in &self.passes {
            pass.validate(len)?;
            let step = pass.source_indices()?;
            composite = step.iter().map(|&j| composite[j]).collect();
        }
        Ok(composite)
    }
}

/// Applies the passes left to right, each consuming the previous output.
pub fn apply_plan(text: &SymbolText, plan: &RecursionPlan) -> Result<SymbolText> {
    plan.passes
        .iter()
        .try_fold(text.clone(), |acc, pass| rectangular_permute(&acc, pass))
}

/// Which skip distances a layout admits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SkipRule {
    /// `D` in `[2, L-1]` with `gcd(D, L) = 1`.
    #[default]
    Full,
    /// `D` in `[1, floor(L/2)]` with `gcd(D, L) = 1`.
    HalfRange,
}

impl SkipRule {
    pub fn name(self) -> &'static str {
        match self {
            SkipRule::Full => "full",
            SkipRule::HalfRange => "half",
        }
    }
}

impl fmt::Display for SkipRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SkipRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" | "default" => Ok(SkipRule::Full),
            "half" | "half-range" => Ok(SkipRule::HalfRange),
            _ => Err(Error::Parse(format!("unknown skip rule `{s}` (expected full or half)"))),
        }
    }
}

/// Admissible skip distances for length `len`, ascending.
pub fn enumerate_skips(len: usize, rule: SkipRule) -> Vec<usize> {
    let range = match rule {
        SkipRule::Full => 2..len,
        SkipRule::HalfRange => 1..len / 2 + 1,
    };
    range.filter(|&d| gcd(d, len) == 1).collect()
}

/// Per-level factor counts of the search space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceFactors {
    pub topologies: u64,
    pub read_directions: u64,
    pub skips: u64,
    pub offsets: u64,
}

impl SpaceFactors {
    pub fn new(topologies: u64, read_directions: u64, skips: u64, offsets: u64) -> Self {
        SpaceFactors {
            topologies,
            read_directions,
            skips,
            offsets,
        }
    }

    /// Factors of a layout: `R!` topologies, `2^R` directions, the rule's
    /// skips and `L` offsets.
    pub fn for_layout(shape: &GridShape, rule: SkipRule) -> Result<Self> {
        let rows = shape.rows();
        let len = shape.cell_count();
        if rows > crate::layout::MAX_DIRECTION_ROWS {
            return Err(Error::Tractability(format!("2^{rows} read directions overflow")));
        }
        Ok(SpaceFactors {
            topologies: factorial(rows)?,
            read_directions: 1u64 << rows,
            skips: enumerate_skips(len, rule).len() as u64,
            offsets: len as u64,
        })
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.topologies, self.read_directions, self.skips, self.offsets]
    }

    pub fn per_level(&self) -> BigUint {
        self.as_array().iter().map(|&f| BigUint::from(f)).product()
    }
}

/// Factor counts raised to a recursion level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParamSpace {
    pub factors: SpaceFactors,
    pub level: u32,
}

impl ParamSpace {
    pub fn new(factors: SpaceFactors, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Config("recursion level must be at least 1".into()));
        }
        if factors.as_array().contains(&0) {
            return Err(Error::Config(format!("every factor count must be at least 1, got {factors:?}")));
        }
        Ok(ParamSpace { factors, level })
    }

    pub fn total(&self) -> BigUint {
        Pow::pow(self.factors.per_level(), self.level)
    }
}

/// Exact size of the parameter space at `level`.
pub fn count_space(factors: SpaceFactors, level: u32) -> Result<BigUint> {
    Ok(ParamSpace::new(factors, level)?.total())
}

/// Scientific rendering with `sig` significant figures, e.g. `2.85E+14`.
/// Rounds half up.
pub fn scientific(n: &BigUint, sig: usize) -> String {
    let sig = sig.max(1);
    let digits = n.to_string();
    let mut exp = digits.len() as i64 - 1;
    if digits.len() <= sig {
        let padded = format!("{digits:0<sig$}");
        return format_mantissa(&padded, exp);
    }
    let head: BigUint = digits[..sig].parse().expect("decimal digits");
    let round_up = digits.as_bytes()[sig] >= b'5';
    let mut mantissa = if round_up { head + BigUint::one() } else { head }.to_string();
    if mantissa.len() > sig {
        mantissa.truncate(sig);
        exp += 1;
    }
    format_mantissa(&mantissa, exp)
}

fn format_mantissa(m: &str, exp: i64) -> String {
    let (lead, rest) = m.split_at(1);
    let sign = if exp < 0 { '-' } else { '+' };
    if rest.is_empty() {
        format!("{lead}E{sign}{:02}", exp.abs())
    } else {
        format!("{lead}.{rest}E{sign}{:02}", exp.abs())
    }
}

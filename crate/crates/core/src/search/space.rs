//! The ranked parameter space: a mixed-radix order over per-level
//! (topology, read directions, skip, offset) digits.

use std::borrow::Cow;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::engine::{
    enumerate_skips, fill_pass_source, ParamSpace, PermutationPass, RecursionPlan, SkipKey, SkipRule, SpaceFactors,
};
use crate::error::{Error, Result};
use crate::layout::{Direction, GridShape, Linearization, ReadDirections, Topology, Traversal};

const TOPOLOGY_CACHE_LIMIT: u64 = 5040;
const DIRECTION_CACHE_LIMIT: u64 = 4096;

/// Digits of one recursion level, each an index into its factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LevelParams {
    pub topology: u64,
    pub dirs: u64,
    pub skip_index: u64,
    pub offset: u64,
}

impl LevelParams {
    fn digits(&self) -> [u64; 4] {
        [self.topology, self.dirs, self.skip_index, self.offset]
    }

    fn from_digits(d: [u64; 4]) -> Self {
        LevelParams {
            topology: d[0],
            dirs: d[1],
            skip_index: d[2],
            offset: d[3],
        }
    }
}

/// A point of the space; level 1 comes first and is most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamTuple {
    pub rank: BigUint,
    pub levels: Vec<LevelParams>,
}

/// A fixed layout, traversal direction and skip rule raised to a level.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    shape: GridShape,
    direction: Direction,
    skip_rule: SkipRule,
    skips: Vec<usize>,
    params: ParamSpace,
    linearization: Linearization,
    topologies: Option<Vec<Topology>>,
    directions: Option<Vec<ReadDirections>>,
}

impl SearchSpace {
    pub fn new(shape: GridShape, direction: Direction, skip_rule: SkipRule, level: u32) -> Result<Self> {
        let linearization = Linearization::planar(&shape, direction)?;
        let factors = SpaceFactors::for_layout(&shape, skip_rule)?;
        let skips = enumerate_skips(shape.cell_count(), skip_rule);
        if skips.is_empty() {
            return Err(Error::Config(format!(
                "no admissible skips for length {} under the {skip_rule} rule",
                shape.cell_count()
            )));
        }
        let params = ParamSpace::new(factors, level)?;
        let rows = shape.rows();
        let topologies = (factors.topologies <= TOPOLOGY_CACHE_LIMIT)
            .then(|| (0..factors.topologies).map(|i| Topology::unrank(rows, i)).collect::<Result<_>>())
            .transpose()?;
        let directions = (factors.read_directions <= DIRECTION_CACHE_LIMIT)
            .then(|| {
                (0..factors.read_directions)
                    .map(|i| ReadDirections::from_index(rows, i))
                    .collect::<Result<_>>()
            })
            .transpose()?;
        Ok(SearchSpace {
            shape,
            direction,
            skip_rule,
            skips,
            params,
            linearization,
            topologies,
            directions,
        })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn skip_rule(&self) -> SkipRule {
        self.skip_rule
    }

    pub fn skips(&self) -> &[usize] {
        &self.skips
    }

    pub fn factors(&self) -> SpaceFactors {
        self.params.factors
    }

    pub fn level(&self) -> u32 {
        self.params.level
    }

    pub fn rows(&self) -> usize {
        self.shape.rows()
    }

    pub fn len(&self) -> usize {
        self.shape.cell_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total(&self) -> BigUint {
        self.params.total()
    }

    fn radices(&self) -> [u64; 4] {
        self.params.factors.as_array()
    }

    /// Mixed-radix decomposition of `rank`.
    pub fn rank_to_tuple(&self, rank: &BigUint) -> Result<ParamTuple> {
        let total = self.total();
        if rank >= &total {
            return Err(Error::Range(format!("rank {rank} outside [0, {total})")));
        }
        let radices = self.radices();
        let level = self.level() as usize;
        let mut levels = vec![LevelParams::default(); level];
        let mut rest = rank.clone();
        for l in (0..level).rev() {
            let mut digits = [0u64; 4];
            for k in (0..4).rev() {
                let radix = BigUint::from(radices[k]);
                digits[k] = (&rest % &radix).to_u64().expect("digit below a u64 radix");
                rest /= radix;
            }
            levels[l] = LevelParams::from_digits(digits);
        }
        debug_assert!(rest.is_zero());
        Ok(ParamTuple {
            rank: rank.clone(),
            levels,
        })
    }

    /// Inverse of [`SearchSpace::rank_to_tuple`]; ignores `tuple.rank`.
    pub fn tuple_to_rank(&self, tuple: &ParamTuple) -> Result<BigUint> {
        self.rank_of(&tuple.levels)
    }

    pub fn rank_of(&self, levels: &[LevelParams]) -> Result<BigUint> {
        self.check_levels(levels)?;
        let radices = self.radices();
        let mut rank = BigUint::zero();
        for lp in levels {
            for (digit, radix) in lp.digits().into_iter().zip(radices) {
                rank = rank * radix + digit;
            }
        }
        Ok(rank)
    }

    fn check_levels(&self, levels: &[LevelParams]) -> Result<()> {
        if levels.len() != self.level() as usize {
            return Err(Error::Range(format!(
                "tuple has {} levels, space has {}",
                levels.len(),
                self.level()
            )));
        }
        let radices = self.radices();
        for lp in levels {
            if lp.digits().iter().zip(radices).any(|(d, r)| *d >= r) {
                return Err(Error::Range(format!("tuple digits {lp:?} exceed factors {radices:?}")));
            }
        }
        Ok(())
    }

    /// Advances `levels` to the next rank; false when it wraps past the end.
    pub fn increment(&self, levels: &mut [LevelParams]) -> bool {
        let radices = self.radices();
        for lp in levels.iter_mut().rev() {
            let mut digits = lp.digits();
            for k in (0..4).rev() {
                digits[k] += 1;
                if digits[k] < radices[k] {
                    *lp = LevelParams::from_digits(digits);
                    return true;
                }
                digits[k] = 0;
            }
            *lp = LevelParams::from_digits(digits);
        }
        false
    }

    pub fn topology(&self, index: u64) -> Result<Cow<'_, Topology>> {
        match &self.topologies {
            Some(all) => all
                .get(index as usize)
                .map(Cow::Borrowed)
                .ok_or_else(|| Error::Range(format!("topology index {index}"))),
            None => Topology::unrank(self.rows(), index).map(Cow::Owned),
        }
    }

    pub fn read_directions(&self, index: u64) -> Result<Cow<'_, ReadDirections>> {
        match &self.directions {
            Some(all) => all
                .get(index as usize)
                .map(Cow::Borrowed)
                .ok_or_else(|| Error::Range(format!("read-direction index {index}"))),
            None => ReadDirections::from_index(self.rows(), index).map(Cow::Owned),
        }
    }

    pub fn key(&self, lp: &LevelParams) -> SkipKey {
        SkipKey::new(self.skips[lp.skip_index as usize], lp.offset as usize)
    }

    pub fn skip_index(&self, skip: usize) -> Option<u64> {
        self.skips.binary_search(&skip).ok().map(|i| i as u64)
    }

    pub fn pass(&self, lp: &LevelParams) -> Result<PermutationPass> {
        Ok(PermutationPass {
            shape: self.shape.clone(),
            topology: self.topology(lp.topology)?.into_owned(),
            dirs: self.read_directions(lp.dirs)?.into_owned(),
            traversal: Traversal::Planar(self.direction),
            key: self.key(lp),
        })
    }

    /// The recursion plan a tuple denotes.
    pub fn plan(&self, levels: &[LevelParams]) -> Result<RecursionPlan> {
        self.check_levels(levels)?;
        levels.iter().map(|lp| self.pass(lp)).collect::<Result<_>>().map(RecursionPlan::new)
    }

    /// Composite gather map of a tuple, using `step` as scratch.
    pub(crate) fn fill_composite(
        &self,
        levels: &[LevelParams],
        composite: &mut Vec<usize>,
        step: &mut Vec<usize>,
        next: &mut Vec<usize>,
    ) -> Result<()> {
        let cols = self.shape.cols();
        composite.clear();
        composite.extend(0..self.len());
        for lp in levels {
            let topology = self.topology(lp.topology)?;
            let dirs = self.read_directions(lp.dirs)?;
            fill_pass_source(cols, &topology, &dirs, &self.linearization, self.key(lp), step);
            next.clear();
            next.extend(step.iter().map(|&j| composite[j]));
            std::mem::swap(composite, next);
        }
        Ok(())
    }
}

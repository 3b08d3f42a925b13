//! Factor maps of finite systems onto odometer truncations.
//!
//! A coherent chain `P_1, ..., P_L` of periodic partitions labels every
//! point `x` by the indices `(a_1(x), ..., a_L(x))` of the blocks containing
//! it. The labels form an element of the odometer with levels
//! `len(P_1) | ... | len(P_L)` and `F(f(x)) = F(x) + e`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynsys::{partition_from_return, FinSystem, PartitionChain, PeriodicPartition};
use crate::error::{Error, Result};
use crate::odometer::{AdicInt, BaseSequence};
use crate::supernat::{RegularSeq, Supernatural};

/// Shifts every level of `chain` so that `x` lies in block 0 of each.
pub fn normalize_coherent<'a>(chain: &PartitionChain<'a>, x: usize) -> Result<PartitionChain<'a>> {
    chain.normalize_at(x)
}

/// The labeling induced by a coherent partition chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorMap<'a> {
    chain: PartitionChain<'a>,
    target: BaseSequence,
    labels: Vec<AdicInt>,
}

impl<'a> FactorMap<'a> {
    /// Builds the labeling. A chain that is not coherent is first normalized
    /// at point 0.
    pub fn build(chain: &PartitionChain<'a>) -> Result<Self> {
        let chain = if chain.is_coherent() { chain.clone() } else { chain.normalize_at(0)? };
        let target = BaseSequence::new(chain.lengths())?;
        let labels = (0..chain.system().size())
            .map(|x| {
                let residues = chain.levels().iter().map(|p| p.label(x) as u64).collect();
                AdicInt::from_residues(&target, residues)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorMap { chain, target, labels })
    }

    pub fn source(&self) -> &'a FinSystem {
        self.chain.system()
    }

    pub fn chain(&self) -> &PartitionChain<'a> {
        &self.chain
    }

    pub fn target(&self) -> &BaseSequence {
        &self.target
    }

    /// `F(x)`.
    pub fn label(&self, x: usize) -> &AdicInt {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[AdicInt] {
        &self.labels
    }

    /// `F(f(x)) = F(x) + e` for every point.
    pub fn is_equivariant(&self) -> bool {
        let f = self.source();
        (0..f.size()).all(|x| self.labels[f.apply(x)] == self.labels[x].translate())
    }

    /// The image is the whole depth-`L` truncation.
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.last() as usize];
        for a in &self.labels {
            hit[a.index() as usize] = true;
        }
        hit.iter().all(|&h| h)
    }

    /// Preimage of a residue vector; errors if the vector is not a point of
    /// the target.
    pub fn fiber(&self, residues: &[u64]) -> Result<Vec<usize>> {
        let a = AdicInt::from_residues(&self.target, residues.to_vec())?;
        Ok((0..self.labels.len()).filter(|&x| self.labels[x] == a).collect())
    }

    /// The fiber `H(x)` through `x`.
    pub fn fiber_of(&self, x: usize) -> Vec<usize> {
        let a = &self.labels[x];
        (0..self.labels.len()).filter(|&y| &self.labels[y] == a).collect()
    }

    /// Nonempty fibers ordered by label.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut by_label: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (x, a) in self.labels.iter().enumerate() {
            by_label.entry(a.index()).or_default().push(x);
        }
        by_label.into_values().collect()
    }

    /// Points whose fiber is the point itself.
    pub fn singleton_fibers(&self) -> Vec<usize> {
        let mut count: BTreeMap<u64, usize> = BTreeMap::new();
        for a in &self.labels {
            *count.entry(a.index()).or_default() += 1;
        }
        (0..self.labels.len()).filter(|&x| count[&self.labels[x].index()] == 1).collect()
    }

    /// Every fiber of `self` lies inside a fiber of `other`, i.e. `other`
    /// factors through `self`.
    pub fn refines(&self, other: &FactorMap<'_>) -> Result<bool> {
        if self.source() != other.source() {
            return Err(Error::SourceMismatch);
        }
        let mut image: BTreeMap<u64, u64> = BTreeMap::new();
        for (a, b) in self.labels.iter().zip(&other.labels) {
            if *image.entry(a.index()).or_insert(b.index()) != b.index() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Compares the target ess with the top of the system's down-set at the
    /// working depth.
    pub fn maximality(&self) -> Maximality {
        let top = sigma_of_system(self.source()).top;
        Maximality {
            maximal: self.target.ess() == top,
            depth: self.target.depth(),
            exact: top.to_u64().is_some(),
        }
    }

    pub fn is_maximal(&self) -> bool {
        self.maximality().maximal
    }
}

/// Maximality of a factor map relative to its working depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Maximality {
    pub maximal: bool,
    /// Number of levels of the target.
    pub depth: usize,
    /// The top of the down-set is finite, so a finite depth can reach it
    /// and the verdict does not depend on the truncation.
    pub exact: bool,
}

/// How two factor maps of one source relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionOrder {
    Equivalent,
    /// The first map factors through the second: the second's fibers refine
    /// the first's.
    FirstFactorsThroughSecond,
    SecondFactorsThroughFirst,
    Incomparable,
}

/// Classifies two factor maps by mutual refinement of their fibers.
pub fn compare_projections(first: &FactorMap<'_>, second: &FactorMap<'_>) -> Result<ProjectionOrder> {
    let fine_first = first.refines(second)?;
    let fine_second = second.refines(first)?;
    Ok(match (fine_first, fine_second) {
        (true, true) => ProjectionOrder::Equivalent,
        (false, true) => ProjectionOrder::FirstFactorsThroughSecond,
        (true, false) => ProjectionOrder::SecondFactorsThroughFirst,
        (false, false) => ProjectionOrder::Incomparable,
    })
}

/// The down-set `{N : N <= top}` of odometer ess values a system projects to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaDownSet {
    pub top: Supernatural,
}

impl SigmaDownSet {
    pub fn contains(&self, n: &Supernatural) -> bool {
        n.leq(&self.top)
    }
}

pub fn sigma_of_system(system: &FinSystem) -> SigmaDownSet {
    SigmaDownSet { top: system.ess_periods().phi }
}

/// Whether `system` projects onto the odometer with levels `base`.
pub fn projection_exists(system: &FinSystem, base: &BaseSequence) -> bool {
    sigma_of_system(system).contains(&base.ess())
}

/// Builds a chain with the levels of `base` and its factor map.
pub fn project<'a>(system: &'a FinSystem, base: &BaseSequence) -> Result<FactorMap<'a>> {
    let lengths = RegularSeq::new(base.levels().to_vec())?;
    FactorMap::build(&PartitionChain::build(system, &lengths)?)
}

/// Default working depth: support size of the top plus its largest exponent.
pub fn default_depth(system: &FinSystem) -> usize {
    let top = sigma_of_system(system).top;
    let support = top.support().map(|s| s.len()).unwrap_or(0);
    (support + top.max_finite_exponent() as usize).max(1)
}

/// The factor map onto the regular sequence of the top of the down-set.
pub fn max_odometer_factor(system: &FinSystem, depth: Option<usize>) -> Result<FactorMap<'_>> {
    let depth = depth.unwrap_or_else(|| default_depth(system));
    let lengths = sigma_of_system(system).top.regular_sequence(depth)?;
    FactorMap::build(&PartitionChain::build(system, &lengths)?)
}

/// All factor maps with the given level lengths, grouped by equivalence.
#[derive(Debug, Clone)]
pub struct FactorFamily<'a> {
    pub maps: Vec<FactorMap<'a>>,
    /// Class index of each map, in order of first appearance.
    pub classes: Vec<usize>,
    pub class_count: usize,
}

/// Every chain reachable by levelwise [`PeriodicPartition::enumerate_compatible`]
/// and its factor map, classified by mutual fiber refinement.
pub fn enumerate_factor_maps<'a>(system: &'a FinSystem, lengths: &RegularSeq) -> Result<FactorFamily<'a>> {
    for &n in lengths.terms() {
        if !system.is_period(n) {
            return Err(Error::NotAPeriod(n));
        }
    }
    let mut prefixes: Vec<Vec<PeriodicPartition<'a>>> = vec![Vec::new()];
    for &n in lengths.terms() {
        let mut next = Vec::new();
        for prefix in &prefixes {
            let prev = prefix.last().cloned().unwrap_or_else(|| PeriodicPartition::trivial(system));
            for member in prev.enumerate_compatible(n as usize)?.members {
                let mut chain = prefix.clone();
                chain.push(member.partition);
                next.push(chain);
            }
        }
        prefixes = next;
    }
    let mut maps: Vec<FactorMap<'a>> = Vec::with_capacity(prefixes.len());
    let mut classes = Vec::with_capacity(prefixes.len());
    let mut representatives: Vec<usize> = Vec::new();
    for levels in prefixes {
        let map = FactorMap::build(&PartitionChain::new(levels)?)?;
        let mut class = None;
        for (c, &r) in representatives.iter().enumerate() {
            if compare_projections(&maps[r], &map)? == ProjectionOrder::Equivalent {
                class = Some(c);
                break;
            }
        }
        let class = match class {
            Some(c) => c,
            None => {
                representatives.push(maps.len());
                representatives.len() - 1
            }
        };
        classes.push(class);
        maps.push(map);
    }
    Ok(FactorFamily { maps, classes, class_count: representatives.len() })
}

/// Points `x` such that every neighbourhood `U` of `x` admits `n` with
/// `f^{kn}(x) ∈ U` for all `k`. On a discrete space it is enough to test
/// `U = {x}`.
pub fn almost_periodic_points(system: &FinSystem) -> Vec<usize> {
    (0..system.size())
        .filter(|&x| partition_from_return(system, x, &[x]).is_ok())
        .collect()
}

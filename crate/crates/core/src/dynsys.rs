//! Finite cascades and their periodic partitions.
//!
//! A [`FinSystem`] is a permutation of the points `0..N`. A periodic
//! partition of length `m` is an ordered family of blocks `W_0, ..., W_{m-1}`
//! that covers the points, is pairwise disjoint and is cyclically permuted by
//! the map: `f(W_{i-1}) = W_i` and `f(W_{m-1}) = W_0`. Every subset of a
//! finite discrete space is clopen, so the topological clause of the
//! definition always holds.
//!
//! Partitions are stored as a label per point (the index of its block),
//! which makes the cyclic condition a local check:
//! `label(f(x)) = label(x) + 1 (mod m)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::supernat::{RegularSeq, Supernatural};

/// A finite discrete dynamical system: a permutation of `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSystem {
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl FinSystem {
    /// Builds a system from the image of every point.
    pub fn from_permutation(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("no points".into()));
        }
        let mut backward = vec![usize::MAX; n];
        for (x, &y) in forward.iter().enumerate() {
            if y >= n {
                return Err(Error::PointOutOfRange { point: y, size: n });
            }
            if backward[y] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("{y} is the image of two points")));
            }
            backward[y] = x;
        }
        Ok(FinSystem { forward, backward })
    }

    /// Builds a system of `size` points from disjoint cycles; points that
    /// appear in no cycle are fixed.
    pub fn from_cycles(size: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut forward: Vec<usize> = (0..size).collect();
        let mut seen = vec![false; size];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= size {
                    return Err(Error::PointOutOfRange { point: x, size });
                }
                if seen[x] {
                    return Err(Error::InvalidPermutation(format!("{x} appears twice")));
                }
                seen[x] = true;
                forward[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_permutation(forward)
    }

    /// The cycle `i -> i + 1 (mod n)`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn cycle(n: usize) -> Self {
        assert!(n > 0, "a system needs at least one point");
        Self::from_permutation((0..n).map(|i| (i + 1) % n).collect()).expect("valid cycle")
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "a system needs at least one point");
        Self::from_permutation((0..n).collect()).expect("valid identity")
    }

    pub fn size(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn apply(&self, x: usize) -> usize {
        self.forward[x]
    }

    pub fn apply_inverse(&self, x: usize) -> usize {
        self.backward[x]
    }

    /// `f^t(x)` for any integer `t`.
    pub fn iterate(&self, mut x: usize, t: i64) -> usize {
        if t >= 0 {
            for _ in 0..t {
                x = self.forward[x];
            }
        } else {
            for _ in 0..t.unsigned_abs() {
                x = self.backward[x];
            }
        }
        x
    }

    /// Cycles in orbit order, each starting at its smallest point, ordered
    /// by that smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.forward[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    /// Cycle lengths sorted ascending; two systems are conjugate exactly
    /// when these agree.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t = self.cycle_lengths();
        t.sort_unstable();
        t
    }

    /// Minimal invariant subsets (the cycles) as ascending point sets.
    pub fn invariant_components(&self) -> Vec<Vec<usize>> {
        self.cycles()
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// No splitting into two nonempty disjoint invariant sets: a single cycle.
    pub fn is_indecomposable(&self) -> bool {
        self.invariant_components().len() == 1
    }

    /// The set of periods: `m` is a period iff `m` divides every cycle
    /// length. Cross-checked against [`all_partitions`] in the tests.
    pub fn ess_periods(&self) -> EssPeriods {
        let gcd = self.cycle_lengths().into_iter().fold(0u64, |g, c| num_integer::gcd(g, c as u64));
        EssPeriods {
            gcd,
            periods: arith::divisors(gcd),
            phi: Supernatural::phi0(gcd).expect("gcd of positive lengths is positive"),
        }
    }

    pub fn is_period(&self, m: u64) -> bool {
        m > 0 && self.ess_periods().gcd % m == 0
    }

    /// The conjugate system `s f s^-1` under the relabeling `x -> s[x]`.
    pub fn relabel(&self, s: &[usize]) -> Result<FinSystem> {
        let perm = FinSystem::from_permutation(s.to_vec())?;
        if perm.size() != self.size() {
            return Err(Error::SystemMismatch);
        }
        let mut forward = vec![0; self.size()];
        for x in 0..self.size() {
            forward[s[x]] = s[self.forward[x]];
        }
        FinSystem::from_permutation(forward)
    }
}

/// Cycle notation listing every cycle, fixed points included: `(0 1 2)(3)`.
impl fmt::Display for FinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Set of periods of a finite system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssPeriods {
    /// gcd of the cycle lengths.
    pub gcd: u64,
    /// Every period, ascending: the divisors of `gcd`.
    pub periods: Vec<u64>,
    /// `phi` of the period set.
    pub phi: Supernatural,
}

/// Outcome of checking a raw block list against the definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    /// Clause (i), clopen blocks. Always true on a finite discrete space.
    pub clopen: ClauseStatus,
    /// Every point id is in range.
    pub in_range: bool,
    /// Every block is nonempty.
    pub nonempty: bool,
    /// Clause (ii): `f(W_{i-1}) = W_i` cyclically.
    pub cyclic: bool,
    /// Clause (iii): blocks pairwise disjoint.
    pub disjoint: bool,
    /// Clause (iv): blocks cover the space.
    pub covering: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    Holds,
    Fails,
    Vacuous,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.clopen != ClauseStatus::Fails
            && self.in_range
            && self.nonempty
            && self.cyclic
            && self.disjoint
            && self.covering
    }

    fn describe(&self) -> String {
        let mut failed = Vec::new();
        if !self.in_range {
            failed.push("point out of range");
        }
        if !self.nonempty {
            failed.push("empty block");
        }
        if !self.cyclic {
            failed.push("blocks are not cyclically permuted");
        }
        if !self.disjoint {
            failed.push("blocks overlap");
        }
        if !self.covering {
            failed.push("blocks do not cover the space");
        }
        failed.join(", ")
    }
}

/// Checks every clause of the definition of a periodic partition.
pub fn validate_partition(system: &FinSystem, blocks: &[Vec<usize>]) -> ValidationReport {
    let n = system.size();
    let in_range = blocks.iter().flatten().all(|&x| x < n);
    let nonempty = !blocks.is_empty() && blocks.iter().all(|b| !b.is_empty());
    let mut count = vec![0usize; n];
    for &x in blocks.iter().flatten().filter(|&&x| x < n) {
        count[x] += 1;
    }
    let disjoint = count.iter().all(|&c| c <= 1);
    let covering = count.iter().all(|&c| c >= 1);
    let sorted = |v: &[usize]| {
        let mut v: Vec<usize> = v.iter().copied().filter(|&x| x < n).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let m = blocks.len();
    let cyclic = in_range
        && (0..m).all(|i| {
            let image: Vec<usize> = blocks[i].iter().map(|&x| system.apply(x)).collect();
            sorted(&image) == sorted(&blocks[(i + 1) % m])
        });
    ValidationReport { clopen: ClauseStatus::Vacuous, in_range, nonempty, cyclic, disjoint, covering }
}

/// A valid periodic partition of a [`FinSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicPartition<'a> {
    system: &'a FinSystem,
    labels: Vec<usize>,
    len: usize,
}

impl<'a> PeriodicPartition<'a> {
    /// Builds a partition from the block index of every point.
    pub fn from_labels(system: &'a FinSystem, labels: Vec<usize>, len: usize) -> Result<Self> {
        if labels.len() != system.size() {
            return Err(Error::InvalidPartition(format!(
                "{} labels for {} points",
                labels.len(),
                system.size()
            )));
        }
        if len == 0 {
            return Err(Error::InvalidPartition("length 0".into()));
        }
        let mut used = vec![false; len];
        for (x, &l) in labels.iter().enumerate() {
            if l >= len {
                return Err(Error::BlockOutOfRange { index: l, length: len });
            }
            used[l] = true;
            if labels[system.apply(x)] != (l + 1) % len {
                return Err(Error::InvalidPartition("blocks are not cyclically permuted".into()));
            }
        }
        if used.contains(&false) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        Ok(PeriodicPartition { system, labels, len })
    }

    /// Builds a partition from an ordered block list.
    pub fn from_blocks(system: &'a FinSystem, blocks: &[Vec<usize>]) -> Result<Self> {
        let report = validate_partition(system, blocks);
        if !report.is_valid() {
            return Err(Error::InvalidPartition(report.describe()));
        }
        let mut labels = vec![0; system.size()];
        for (i, block) in blocks.iter().enumerate() {
            for &x in block {
                labels[x] = i;
            }
        }
        Self::from_labels(system, labels, blocks.len())
    }

    /// The length-1 partition `{X}`.
    pub fn trivial(system: &'a FinSystem) -> Self {
        PeriodicPartition { system, labels: vec![0; system.size()], len: 1 }
    }

    /// The length-`m` partition that puts the smallest point of every cycle
    /// in block 0.
    pub fn canonical(system: &'a FinSystem, m: usize) -> Result<Self> {
        if !system.is_period(m as u64) {
            return Err(Error::NotAPeriod(m as u64));
        }
        let mut labels = vec![0; system.size()];
        for cycle in system.cycles() {
            for (i, &x) in cycle.iter().enumerate() {
                labels[x] = i % m;
            }
        }
        Self::from_labels(system, labels, m)
    }

    pub fn system(&self) -> &'a FinSystem {
        self.system
    }

    /// Length `m`, the number of blocks.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the block containing `x`.
    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Points of block `i`, ascending.
    pub fn block(&self, i: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&x| self.labels[x] == i).collect()
    }

    /// All blocks in index order, each ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    fn same_system(&self, other: &PeriodicPartition<'_>) -> Result<()> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        Ok(())
    }

    /// Reindexing `W(k)_j = W_i` for `j = i + k (mod m)`.
    pub fn cyclic_shift(&self, k: i64) -> Self {
        let m = self.len as i64;
        let labels = self
            .labels
            .iter()
            .map(|&l| (l as i64 + k).rem_euclid(m) as usize)
            .collect();
        PeriodicPartition { system: self.system, labels, len: self.len }
    }

    /// The equivalent partition whose block 0 contains point 0.
    pub fn normalized(&self) -> Self {
        self.cyclic_shift(-(self.labels[0] as i64))
    }

    /// Whether `other` is a cyclic reindexing of `self`.
    pub fn is_equivalent(&self, other: &PeriodicPartition<'_>) -> Result<bool> {
        self.same_system(other)?;
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        let m = self.len;
        let shift = (other.labels[0] + m - self.labels[0]) % m;
        Ok(self.labels.iter().zip(&other.labels).all(|(&a, &b)| (a + shift) % m == b))
    }

    /// The length-`d` partition `V_j = union of W_i with i = j (mod d)`.
    pub fn coarsen(&self, d: usize) -> Result<Self> {
        if d == 0 || self.len % d != 0 {
            return Err(Error::NotDivisor { divisor: d, length: self.len });
        }
        let labels = self.labels.iter().map(|&l| l % d).collect();
        Ok(PeriodicPartition { system: self.system, labels, len: d })
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &PeriodicPartition<'_>) -> Result<bool> {
        self.same_system(coarser)?;
        let mut image = vec![usize::MAX; self.len];
        for (x, &l) in self.labels.iter().enumerate() {
            let c = coarser.labels[x];
            if image[l] == usize::MAX {
                image[l] = c;
            } else if image[l] != c {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The invariant set `A(k, l) = union over s < D of f^s(W1_k ∩ W2_l)`,
    /// `D = lcm(m1, m2)`, as ascending point ids.
    pub fn saturation(&self, k: usize, other: &PeriodicPartition<'_>, l: usize) -> Result<Vec<usize>> {
        self.same_system(other)?;
        if k >= self.len {
            return Err(Error::BlockOutOfRange { index: k, length: self.len });
        }
        if l >= other.len {
            return Err(Error::BlockOutOfRange { index: l, length: other.len });
        }
        let d = num_integer::lcm(self.len, other.len);
        let mut inside = vec![false; self.system.size()];
        for x in 0..self.system.size() {
            if self.labels[x] == k && other.labels[x] == l {
                let mut y = x;
                for _ in 0..d {
                    inside[y] = true;
                    y = self.system.apply(y);
                }
            }
        }
        Ok((0..inside.len()).filter(|&x| inside[x]).collect())
    }

    /// Every `A(k, l)` is empty or the whole space.
    pub fn is_compatible(&self, other: &PeriodicPartition<'_>) -> Result<bool> {
        self.same_system(other)?;
        let n = self.system.size();
        for k in 0..self.len {
            for l in 0..other.len {
                let a = self.saturation(k, other, l)?;
                if !a.is_empty() && a.len() != n {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The common refinement of two compatible partitions, of length
    /// `lcm(m1, m2)`: block `s` is `f^s(W1_0 ∩ W2_l)` for the smallest `l`
    /// making the intersection nonempty.
    pub fn lcm_partition(&self, other: &PeriodicPartition<'a>) -> Result<Self> {
        self.same_system(other)?;
        if !self.is_compatible(other)? {
            return Err(Error::Incompatible);
        }
        let d = num_integer::lcm(self.len, other.len);
        let l = (0..other.len)
            .find(|&l| (0..self.labels.len()).any(|x| self.labels[x] == 0 && other.labels[x] == l))
            .expect("block 0 meets some block of a covering partition");
        let seeds: Vec<usize> = (0..self.labels.len())
            .filter(|&x| self.labels[x] == 0 && other.labels[x] == l)
            .collect();
        self.spread(&seeds, d, d)
    }

    /// Labels `f^s(x) -> s mod m` for every seed `x` and `s < period`.
    fn spread(&self, seeds: &[usize], period: usize, m: usize) -> Result<Self> {
        let mut labels = vec![usize::MAX; self.system.size()];
        for &x in seeds {
            let mut y = x;
            for s in 0..period {
                labels[y] = s % m;
                y = self.system.apply(y);
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::InvalidPartition("construction does not cover the space".into()));
        }
        Self::from_labels(self.system, labels, m)
    }

    /// A length-`m2` partition compatible with `self`, built by the
    /// `A(0, j)` decomposition against the canonical length-`m2` partition
    /// with every free shift set to zero.
    pub fn make_compatible(&self, m2: usize) -> Result<Self> {
        self.compatible_family_seed(m2)?.build(&vec![0; self.system.cycles().len()])
    }

    /// Every length-`m2` partition compatible with `self`, parametrized by
    /// one shift per cycle of the system plus a global reindexing, and
    /// grouped into equivalence classes.
    pub fn enumerate_compatible(&self, m2: usize) -> Result<CompatibleFamily<'a>> {
        let seed = self.compatible_family_seed(m2)?;
        let cycles = self.system.cycles().len();
        let choices = seed.d / self.len;
        // every per-cycle shift vector over multiples of m1, odometer order
        let mut combos = Vec::new();
        let mut shifts = vec![0usize; cycles];
        'outer: loop {
            combos.push(shifts.clone());
            let mut i = cycles;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                shifts[i] += self.len;
                if shifts[i] < choices * self.len {
                    break;
                }
                shifts[i] = 0;
            }
        }
        let mut members = Vec::new();
        let mut classes: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for phase in 0..num_integer::gcd(self.len, m2) {
            for shifts in &combos {
                let partition = seed.build(shifts)?.cyclic_shift(phase as i64);
                let normalized: Vec<usize> = shifts.iter().map(|&t| (t + seed.d - shifts[0]) % seed.d).collect();
                let next = classes.len();
                let class = *classes.entry(normalized).or_insert(next);
                members.push(CompatibleMember { shifts: shifts.clone(), phase, class, partition });
            }
        }
        Ok(CompatibleFamily { members, class_count: classes.len() })
    }

    fn compatible_family_seed(&self, m2: usize) -> Result<FamilySeed<'a>> {
        let reference = PeriodicPartition::canonical(self.system, m2)?;
        let gcd = num_integer::gcd(self.len, m2);
        let d = num_integer::lcm(self.len, m2);
        // W1_0 ∩ W2_j for the j < gcd with nonempty A(0, j); together they
        // form block 0 of a length-D partition.
        let mut seeds = Vec::new();
        for j in 0..gcd {
            if self.saturation(0, &reference, j)?.is_empty() {
                continue;
            }
            seeds.extend((0..self.labels.len()).filter(|&x| self.labels[x] == 0 && reference.labels[x] == j));
        }
        Ok(FamilySeed { base: self.clone(), seeds, d, m2 })
    }
}

struct FamilySeed<'a> {
    base: PeriodicPartition<'a>,
    seeds: Vec<usize>,
    d: usize,
    m2: usize,
}

impl<'a> FamilySeed<'a> {
    fn build(&self, shifts: &[usize]) -> Result<PeriodicPartition<'a>> {
        let system = self.base.system;
        let mut cycle_of = vec![0; system.size()];
        for (c, cycle) in system.cycles().iter().enumerate() {
            for &x in cycle {
                cycle_of[x] = c;
            }
        }
        let seeds: Vec<usize> = self
            .seeds
            .iter()
            .map(|&x| system.iterate(x, shifts[cycle_of[x]] as i64))
            .collect();
        self.base.spread(&seeds, self.d, self.m2)
    }
}

/// Result of [`PeriodicPartition::enumerate_compatible`].
#[derive(Debug, Clone)]
pub struct CompatibleFamily<'a> {
    pub members: Vec<CompatibleMember<'a>>,
    /// Number of equivalence classes among the members.
    pub class_count: usize,
}

#[derive(Debug, Clone)]
pub struct CompatibleMember<'a> {
    /// Shift `t_c` per cycle, a multiple of the base length below
    /// `lcm(m1, m2)`.
    pub shifts: Vec<usize>,
    /// Equivalence class index; members share a class iff their shifts
    /// agree after subtracting the first one.
    pub class: usize,
    /// Reindexing applied on top of the shifts, below `gcd(m1, m2)`.
    pub phase: usize,
    pub partition: PeriodicPartition<'a>,
}

/// Limits for [`all_partitions_with_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBound {
    pub max_points: usize,
    pub max_length: usize,
}

impl Default for OracleBound {
    fn default() -> Self {
        OracleBound { max_points: 12, max_length: 12 }
    }
}

/// Every periodic partition of length `m`, by exhaustive search over block
/// assignments, sorted by label vector.
pub fn all_partitions(system: &FinSystem, m: usize) -> Result<Vec<PeriodicPartition<'_>>> {
    all_partitions_with_bound(system, m, OracleBound::default())
}

pub fn all_partitions_with_bound(
    system: &FinSystem,
    m: usize,
    bound: OracleBound,
) -> Result<Vec<PeriodicPartition<'_>>> {
    if system.size() > bound.max_points {
        return Err(Error::OracleBoundExceeded { what: "points", value: system.size(), bound: bound.max_points });
    }
    if m > bound.max_length {
        return Err(Error::OracleBoundExceeded { what: "length", value: m, bound: bound.max_length });
    }
    if m == 0 {
        return Err(Error::Zero);
    }
    let mut out = Vec::new();
    let mut labels = vec![usize::MAX; system.size()];
    search(system, m, 0, &mut labels, &mut out);
    Ok(out)
}

// Depth-first over points in id order; a label is pruned only when it
// contradicts an already-labelled neighbour. Complete assignments are
// checked against the full definition.
fn search<'a>(
    system: &'a FinSystem,
    m: usize,
    x: usize,
    labels: &mut Vec<usize>,
    out: &mut Vec<PeriodicPartition<'a>>,
) {
    let n = system.size();
    if x == n {
        let mut blocks = vec![Vec::new(); m];
        for (y, &l) in labels.iter().enumerate() {
            blocks[l].push(y);
        }
        if validate_partition(system, &blocks).is_valid() {
            out.push(PeriodicPartition { system, labels: labels.clone(), len: m });
        }
        return;
    }
    for l in 0..m {
        let next = system.apply(x);
        let prev = system.apply_inverse(x);
        if next < x && labels[next] != (l + 1) % m {
            continue;
        }
        if next == x && (l + 1) % m != l {
            continue;
        }
        if prev < x && (labels[prev] + 1) % m != l {
            continue;
        }
        labels[x] = l;
        search(system, m, x + 1, labels, out);
        labels[x] = usize::MAX;
    }
}

/// A regular sequence of periodic partitions `P_1, ..., P_L`: lengths form a
/// divisibility chain and each partition refines the previous one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionChain<'a> {
    partitions: Vec<PeriodicPartition<'a>>,
}

impl<'a> PartitionChain<'a> {
    pub fn new(partitions: Vec<PeriodicPartition<'a>>) -> Result<Self> {
        let first = partitions.first().ok_or(Error::EmptyLevels)?;
        if partitions.iter().any(|p| p.system != first.system) {
            return Err(Error::SystemMismatch);
        }
        let lengths: Vec<u64> = partitions.iter().map(|p| p.len as u64).collect();
        crate::supernat::check_chain(&lengths)?;
        for (k, w) in partitions.windows(2).enumerate() {
            if !w[0].is_compatible(&w[1])? {
                return Err(Error::InvalidChain(format!(
                    "levels {} and {} are not compatible",
                    k + 1,
                    k + 2
                )));
            }
        }
        Ok(PartitionChain { partitions })
    }

    /// Iterated [`PeriodicPartition::make_compatible`] starting from the
    /// trivial partition. The result is coherent: block 0 of every level
    /// contains block 0 of the next.
    pub fn build(system: &'a FinSystem, lengths: &RegularSeq) -> Result<Self> {
        for &n in lengths.terms() {
            if !system.is_period(n) {
                return Err(Error::NotAPeriod(n));
            }
        }
        let mut partitions: Vec<PeriodicPartition<'a>> = Vec::with_capacity(lengths.len());
        let mut prev = PeriodicPartition::trivial(system);
        for &n in lengths.terms() {
            let next = prev.make_compatible(n as usize)?;
            partitions.push(next.clone());
            prev = next;
        }
        Self::new(partitions)
    }

    /// Inserts a level of length `m` compatible with every existing level.
    /// `m` must be a period and fit into the divisibility chain.
    pub fn extend(&self, m: usize) -> Result<Self> {
        let system = self.system();
        if !system.is_period(m as u64) {
            return Err(Error::NotAPeriod(m as u64));
        }
        let pos = self.partitions.iter().position(|p| p.len % m == 0);
        let (pos, level) = match pos {
            Some(i) => (i, self.partitions[i].coarsen(m)?),
            None => {
                let last = &self.partitions[self.partitions.len() - 1];
                (self.partitions.len(), last.make_compatible(m)?)
            }
        };
        if pos > 0 && m % self.partitions[pos - 1].len != 0 {
            return Err(Error::NotDivisibilityChain {
                prev: self.partitions[pos - 1].len as u64,
                next: m as u64,
            });
        }
        let mut partitions = self.partitions.clone();
        partitions.insert(pos, level);
        Self::new(partitions)
    }

    pub fn system(&self) -> &'a FinSystem {
        self.partitions[0].system
    }

    pub fn levels(&self) -> &[PeriodicPartition<'a>] {
        &self.partitions
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.partitions.iter().map(|p| p.len as u64).collect()
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points lying in block 0 of every level.
    pub fn anchors(&self) -> Vec<usize> {
        (0..self.system().size())
            .filter(|&x| self.partitions.iter().all(|p| p.labels[x] == 0))
            .collect()
    }

    /// Block 0 of all levels have a common point.
    pub fn is_coherent(&self) -> bool {
        !self.anchors().is_empty()
    }

    /// Shifts every level so that `x` lies in block 0.
    pub fn normalize_at(&self, x: usize) -> Result<Self> {
        let size = self.system().size();
        if x >= size {
            return Err(Error::PointOutOfRange { point: x, size });
        }
        let partitions = self
            .partitions
            .iter()
            .map(|p| p.cyclic_shift(-(p.labels[x] as i64)))
            .collect();
        Ok(PartitionChain { partitions })
    }
}

/// Periodic partition of the cycle through `x` obtained from a return
/// neighbourhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnPartition {
    /// Smallest `n` with `f^{kn}(x)` in the neighbourhood for every `k`.
    pub period: usize,
    /// The cycle of `x` in orbit order starting at `x`; local point `i` of
    /// [`subsystem`](Self::subsystem) is `orbit[i]`.
    pub orbit: Vec<usize>,
    pub subsystem: FinSystem,
}

impl ReturnPartition {
    /// The partition on the cycle subsystem, in local ids; block 0 holds `x`.
    pub fn partition(&self) -> PeriodicPartition<'_> {
        let labels = (0..self.orbit.len()).map(|i| i % self.period).collect();
        PeriodicPartition::from_labels(&self.subsystem, labels, self.period).expect("period divides the cycle length")
    }

    /// Blocks in the ids of the original system.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.partition()
            .blocks()
            .into_iter()
            .map(|b| {
                let mut b: Vec<usize> = b.into_iter().map(|i| self.orbit[i]).collect();
                b.sort_unstable();
                b
            })
            .collect()
    }
}

/// Finds the least `n` whose `f^n`-orbit of `x` stays in `neighbourhood`
/// and the matching partition of the cycle of `x` with `x ∈ W_0 ⊆ U`.
pub fn partition_from_return(system: &FinSystem, x: usize, neighbourhood: &[usize]) -> Result<ReturnPartition> {
    let size = system.size();
    if let Some(&y) = neighbourhood.iter().find(|&&y| y >= size) {
        return Err(Error::PointOutOfRange { point: y, size });
    }
    if x >= size {
        return Err(Error::PointOutOfRange { point: x, size });
    }
    if !neighbourhood.contains(&x) {
        return Err(Error::PointNotInSet(x));
    }
    let mut orbit = vec![x];
    let mut y = system.apply(x);
    while y != x {
        orbit.push(y);
        y = system.apply(y);
    }
    let c = orbit.len();
    let period = (1..=c)
        .find(|&n| {
            let step = num_integer::gcd(n, c);
            (0..c).step_by(step).all(|i| neighbourhood.contains(&orbit[i]))
        })
        .expect("n = c always returns to x");
    Ok(ReturnPartition { period, orbit, subsystem: FinSystem::cycle(c) })
}

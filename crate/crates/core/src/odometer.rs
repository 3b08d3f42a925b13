//! Adic groups over divisibility chains and their odometers at finite depth.
//!
//! A point of the inverse limit of `Z/n_1 <- Z/n_2 <- ...` is a coherent
//! residue vector; at working depth `K` it is determined by its last residue,
//! so the depth-`K` truncation is the cyclic group `Z/n_K` and the odometer
//! `x -> x + e` becomes the cycle `z -> z + 1 (mod n_K)`.
//!
//! Levels are numbered from 1, matching the usual `n_1 | n_2 | ...` indexing.

use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::dynsys::{FinSystem, PeriodicPartition};
use crate::error::{Error, Result};
use crate::supernat::{self, Supernatural};

/// Levels `n_1 | n_2 | ... | n_K`. Constant tails are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseSequence {
    levels: Vec<u64>,
}

impl BaseSequence {
    pub fn new(levels: Vec<u64>) -> Result<Self> {
        supernat::check_chain(&levels)?;
        Ok(BaseSequence { levels })
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    /// Working depth `K`.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `n_K`, the number of points of the full-depth truncation.
    pub fn last(&self) -> u64 {
        self.levels[self.levels.len() - 1]
    }

    /// Modulus `n_k` of the 1-based level `k`.
    pub fn modulus(&self, level: usize) -> Result<u64> {
        self.check_level(level)?;
        Ok(self.levels[level - 1])
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.depth() {
            return Err(Error::LevelOutOfRange { level, depth: self.depth() });
        }
        Ok(())
    }

    /// Every point of the depth-`K` truncation, in the order `0, e, 2e, ...`.
    pub fn points(&self) -> impl Iterator<Item = AdicInt> + '_ {
        (0..self.last()).map(move |z| AdicInt::from_residue_index(self, z))
    }

    /// Supernatural value of the set of periods of the odometer, which is
    /// `phi` of the level set and hence `phi0(n_K)`.
    pub fn ess(&self) -> Supernatural {
        Supernatural::phi_of_set(&self.levels).expect("levels are positive")
    }

    /// The odometer truncated at `level`: the cycle `i -> i + 1 (mod n_level)`.
    pub fn truncate(&self, level: usize) -> Result<FinSystem> {
        let n = self.modulus(level)?;
        let n = usize::try_from(n).map_err(|_| Error::Overflow)?;
        Ok(FinSystem::cycle(n))
    }

    /// The partition of the full-depth truncation into level-`level`
    /// cylinders, block `i` being the cylinder of residue `i`.
    ///
    /// `truncation` must be `self.truncate(self.depth())`.
    pub fn level_partition<'a>(&self, truncation: &'a FinSystem, level: usize) -> Result<PeriodicPartition<'a>> {
        let n = self.modulus(level)?;
        if *truncation != self.truncate(self.depth())? {
            return Err(Error::SystemMismatch);
        }
        let labels = (0..truncation.size()).map(|z| (z as u64 % n) as usize).collect();
        PeriodicPartition::from_labels(truncation, labels, n as usize)
    }
}

/// A coherent residue vector `(a_1, ..., a_K)` with `a_{k+1} = a_k (mod n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdicInt {
    base: BaseSequence,
    residues: Vec<u64>,
}

impl AdicInt {
    /// Image of the integer `z`; `from_integer(base, 1)` is the generator.
    pub fn from_integer(base: &BaseSequence, z: i64) -> Self {
        let residues = base
            .levels
            .iter()
            .map(|&n| (i128::from(z).rem_euclid(i128::from(n))) as u64)
            .collect();
        AdicInt { base: base.clone(), residues }
    }

    fn from_residue_index(base: &BaseSequence, z: u64) -> Self {
        let residues = base.levels.iter().map(|&n| z % n).collect();
        AdicInt { base: base.clone(), residues }
    }

    pub fn zero(base: &BaseSequence) -> Self {
        Self::from_integer(base, 0)
    }

    /// The generator `e = (1, 1, ...)`.
    pub fn generator(base: &BaseSequence) -> Self {
        Self::from_integer(base, 1)
    }

    /// Validates range and coherence of explicit residues.
    pub fn from_residues(base: &BaseSequence, residues: Vec<u64>) -> Result<Self> {
        if residues.len() != base.depth() {
            return Err(Error::DepthMismatch { expected: base.depth(), got: residues.len() });
        }
        for (&r, &n) in residues.iter().zip(&base.levels) {
            if r >= n {
                return Err(Error::ResidueOutOfRange { residue: r, modulus: n });
            }
        }
        for k in 1..residues.len() {
            if residues[k] % base.levels[k - 1] != residues[k - 1] {
                return Err(Error::Incoherent { level: k + 1 });
            }
        }
        Ok(AdicInt { base: base.clone(), residues })
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Position of this point in the full-depth truncation.
    pub fn index(&self) -> u64 {
        self.residues[self.residues.len() - 1]
    }

    fn check_base(&self, other: &AdicInt) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &AdicInt) -> Result<AdicInt> {
        self.check_base(other)?;
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(&self.base.levels)
            .map(|((&a, &b), &n)| ((u128::from(a) + u128::from(b)) % u128::from(n)) as u64)
            .collect();
        Ok(AdicInt { base: self.base.clone(), residues })
    }

    pub fn neg(&self) -> AdicInt {
        let residues = self
            .residues
            .iter()
            .zip(&self.base.levels)
            .map(|(&a, &n)| (n - a) % n)
            .collect();
        AdicInt { base: self.base.clone(), residues }
    }

    /// The odometer map `x -> x + e`.
    pub fn translate(&self) -> AdicInt {
        self.translate_by(1)
    }

    /// `x + t e` for any integer `t`.
    pub fn translate_by(&self, t: i64) -> AdicInt {
        self.add(&AdicInt::from_integer(&self.base, t)).expect("same base")
    }

    /// Natural metric `1 / n_m`, `m` the first level where the residues
    /// differ. Points that agree on every level get distance zero with
    /// [`Distance::agrees_to_depth`] set: they are only known to be close
    /// at the working depth.
    pub fn metric(&self, other: &AdicInt) -> Result<Distance> {
        self.check_base(other)?;
        let first_diff = self.residues.iter().zip(&other.residues).position(|(a, b)| a != b);
        Ok(match first_diff {
            Some(m) => Distance { value: Ratio::new(1, self.base.levels[m]), agrees_to_depth: false },
            None => Distance { value: Ratio::from_integer(0), agrees_to_depth: true },
        })
    }
}

/// Result of [`AdicInt::metric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Distance {
    pub value: Ratio<u64>,
    /// Residues coincide on every level of the working depth.
    pub agrees_to_depth: bool,
}

/// The cylinder `{a : a_level = residue}`, a basic clopen set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cylinder {
    base: BaseSequence,
    level: usize,
    residue: u64,
}

impl Cylinder {
    pub fn new(base: &BaseSequence, level: usize, residue: u64) -> Result<Self> {
        let n = base.modulus(level)?;
        if residue >= n {
            return Err(Error::ResidueOutOfRange { residue, modulus: n });
        }
        Ok(Cylinder { base: base.clone(), level, residue })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn contains(&self, x: &AdicInt) -> Result<bool> {
        if x.base != self.base {
            return Err(Error::BaseMismatch);
        }
        Ok(x.residues[self.level - 1] == self.residue)
    }

    /// Truncation indices of the members, ascending.
    pub fn members(&self) -> Vec<u64> {
        let n = self.base.levels[self.level - 1];
        (0..self.base.last()).filter(|z| z % n == self.residue).collect()
    }
}

/// Comma-separated levels, e.g. `2,4,8`.
impl fmt::Display for BaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.levels)
    }
}

/// Bracketed residues, e.g. `[1,1,5]`.
impl fmt::Display for AdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_joined(f, &self.residues)?;
        f.write_str("]")
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, values: &[u64]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

//! Exact computations with periodic partitions of finite cascades,
//! supernatural numbers and odometers.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure:
//! values are immutable once built and every operation returns a new value.
//!
//! * [`supernat`]: the lattice and multiplicative semigroup of supernatural
//!   numbers, the embedding of the naturals and regular sequences.
//! * [`odometer`]: adic integers over a divisibility chain, the translation
//!   map, the natural metric and finite truncations.
//! * [`dynsys`]: finite permutation systems and the calculus of periodic
//!   partitions, including the brute-force partition oracle.
//! * [`projection`]: factor maps onto odometers built from coherent chains of
//!   partitions, their fibers and their order.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod arith;
pub mod dynsys;
pub mod error;
pub mod odometer;
pub mod projection;
pub mod supernat;

pub use dynsys::{FinSystem, PartitionChain, PeriodicPartition};
pub use error::{Error, Result};
pub use odometer::{AdicInt, BaseSequence};
pub use projection::FactorMap;
pub use supernat::{Exponent, RegularSeq, Supernatural};

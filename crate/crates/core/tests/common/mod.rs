#![allow(dead_code)]

use adic_core::FinSystem;
use rand::seq::SliceRandom;
use rand::Rng;

/// Partitions of `n` into positive parts, parts descending.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One representative per cycle type on `1..=max_points` points.
pub fn cycle_types(max_points: usize) -> Vec<Vec<usize>> {
    (1..=max_points).flat_map(integer_partitions).collect()
}

/// Cycles of the given lengths on consecutive points.
pub fn system_of_type(lengths: &[usize]) -> FinSystem {
    let mut forward = Vec::new();
    let mut start = 0;
    for &len in lengths {
        for i in 0..len {
            forward.push(start + (i + 1) % len);
        }
        start += len;
    }
    FinSystem::from_permutation(forward).unwrap()
}

pub fn random_system<R: Rng>(rng: &mut R, max_points: usize) -> FinSystem {
    let n = rng.gen_range(1..=max_points);
    let mut forward: Vec<usize> = (0..n).collect();
    forward.shuffle(rng);
    FinSystem::from_permutation(forward).unwrap()
}

/// A random system whose cycle lengths share a common factor, so that it
/// has periods beyond 1.
pub fn random_periodic_system<R: Rng>(rng: &mut R, max_points: usize) -> FinSystem {
    let g = rng.gen_range(1..=max_points / 2).max(1);
    let mut lengths = Vec::new();
    let mut total = 0;
    loop {
        let len = g * rng.gen_range(1..=(max_points / g).max(1));
        if total + len > max_points {
            break;
        }
        lengths.push(len);
        total += len;
        if rng.gen_bool(0.4) {
            break;
        }
    }
    if lengths.is_empty() {
        lengths.push(g);
    }
    let mut ids: Vec<usize> = (0..lengths.iter().sum()).collect();
    ids.shuffle(rng);
    let base = system_of_type(&lengths);
    base.relabel(&ids).unwrap()
}

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adic_core::dynsys::{all_partitions, validate_partition, FinSystem, PeriodicPartition};
use adic_core::projection::{enumerate_factor_maps, max_odometer_factor, project, projection_exists};
use adic_core::supernat::Tail;
use adic_core::{AdicInt, BaseSequence, Exponent, FactorMap, RegularSeq, Supernatural};
use common::{cycle_types, random_periodic_system, system_of_type};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn periods(s: &FinSystem) -> Vec<usize> {
    s.ess_periods().periods.iter().map(|&p| p as usize).collect()
}

/// Strictly increasing divisibility chains with every term in `1..=max`.
fn chains_up_to(max: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = *prefix.last().unwrap();
        let mut next = last * 2;
        while next <= max {
            prefix.push(next);
            extend(prefix, max, out);
            prefix.pop();
            next += last;
        }
    }
    let mut out = Vec::new();
    for first in 1..=max {
        extend(&mut vec![first], max, &mut out);
    }
    out
}

fn ess_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for lengths in cycle_types(8) {
        let s = system_of_type(&lengths);
        let ess = periods(&s);
        for m in 1..=8 {
            let found = !all_partitions(&s, m).map_err(|e| e.to_string())?.is_empty();
            check(found == ess.contains(&m), || format!("cycle type {lengths:?}, m = {m}"))?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} (type, m) pairs in {elapsed:.2?}"))
}

fn closure_under_coarsen_and_lcm() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut pairs = 0;
    for _ in 0..500 {
        let s = random_periodic_system(&mut rng, 12);
        let ess = periods(&s);
        let m1 = *ess.choose(&mut rng).unwrap();
        let all = all_partitions(&s, m1).map_err(|e| e.to_string())?;
        let p = all.choose(&mut rng).unwrap();
        for d in (1..=m1).filter(|d| m1 % d == 0) {
            let q = p.coarsen(d).map_err(|e| e.to_string())?;
            check(validate_partition(&s, &q.blocks()).is_valid(), || format!("coarsen({d}) of {:?}", p.blocks()))?;
        }
        let m2 = *ess.choose(&mut rng).unwrap();
        for q in all_partitions(&s, m2).map_err(|e| e.to_string())? {
            if !p.is_compatible(&q).map_err(|e| e.to_string())? {
                continue;
            }
            let joined = p.lcm_partition(&q).map_err(|e| e.to_string())?;
            check(joined.len() == num_integer::lcm(m1, m2), || format!("lcm length {}", joined.len()))?;
            check(validate_partition(&s, &joined.blocks()).is_valid(), || {
                format!("lcm of {:?} and {:?}", p.blocks(), q.blocks())
            })?;
            pairs += 1;
        }
    }
    Ok(format!("500 instances, {pairs} compatible pairs joined"))
}

fn uniqueness_dichotomy() -> Outcome {
    let mut systems = 0;
    for lengths in cycle_types(10) {
        let s = system_of_type(&lengths);
        let ess = periods(&s);
        if ess == [1] {
            continue;
        }
        systems += 1;
        let single = s.is_indecomposable();
        for &m in ess.iter().filter(|&&m| m > 1) {
            let all = all_partitions(&s, m).map_err(|e| e.to_string())?;
            let one_class = all.iter().all(|p| p.is_equivalent(&all[0]).unwrap());
            check(one_class == single, || format!("partition classes, type {lengths:?}, m = {m}"))?;
            let lengths_seq = RegularSeq::new(vec![m as u64]).unwrap();
            let family = enumerate_factor_maps(&s, &lengths_seq).map_err(|e| e.to_string())?;
            check((family.class_count == 1) == single, || {
                format!("factor map classes {}, type {lengths:?}, m = {m}", family.class_count)
            })?;
        }
    }
    Ok(format!("{systems} cycle types with a period > 1"))
}

fn congruence_structure() -> Outcome {
    let mut pairs = 0u64;
    for lengths in cycle_types(10) {
        let s = system_of_type(&lengths);
        let ess = periods(&s);
        let by_length: Vec<Vec<PeriodicPartition<'_>>> =
            ess.iter().map(|&m| all_partitions(&s, m).unwrap()).collect();
        for p1 in by_length.iter().flatten() {
            for p2 in by_length.iter().flatten() {
                if !p1.is_compatible(p2).unwrap() {
                    continue;
                }
                pairs += 1;
                congruence_pair(&s, p1, p2).map_err(|e| format!("type {lengths:?}: {e}"))?;
            }
        }
    }
    Ok(format!("{pairs} compatible pairs"))
}

fn congruence_pair(s: &FinSystem, p1: &PeriodicPartition<'_>, p2: &PeriodicPartition<'_>) -> Result<(), String> {
    let (m1, m2) = (p1.len(), p2.len());
    let d = num_integer::gcd(m1, m2);
    let big = num_integer::lcm(m1, m2);
    let meet = |i: usize, j: usize| -> Vec<usize> {
        (0..s.size()).filter(|&x| p1.label(x) == i && p2.label(x) == j).collect()
    };
    for k in 0..m1 {
        for l in 0..m2 {
            let base = meet(k, l);
            if base.is_empty() {
                continue;
            }
            for i in 0..m1 {
                for j in 0..m2 {
                    let block = meet(i, j);
                    let congruent = (j as i64 - i as i64 - (l as i64 - k as i64)).rem_euclid(d as i64) == 0;
                    check(!block.is_empty() == congruent, || format!("W1_{i} ∩ W2_{j} against base ({k},{l})"))?;
                    if congruent {
                        let t = (0..big).find(|&t| (k + t) % m1 == i && (l + t) % m2 == j).unwrap();
                        let mut image: Vec<usize> = base.iter().map(|&x| s.iterate(x, t as i64)).collect();
                        image.sort_unstable();
                        check(image == block, || format!("block ({i},{j}) differs from f^{t} of ({k},{l})"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn factor_map_corpus(s: &FinSystem) -> Vec<FactorMap<'_>> {
    let ess: Vec<u64> = s.ess_periods().periods;
    let mut maps = Vec::new();
    for chain in chains_up_to(*ess.last().unwrap()) {
        if chain.len() > 3 || !chain.iter().all(|m| ess.contains(m)) {
            continue;
        }
        let lengths = RegularSeq::new(chain).unwrap();
        maps.extend(enumerate_factor_maps(s, &lengths).unwrap().maps);
    }
    maps.push(max_odometer_factor(s, None).unwrap());
    maps
}

fn equivariance() -> Outcome {
    let mut count = 0;
    for lengths in cycle_types(9) {
        let s = system_of_type(&lengths);
        for map in factor_map_corpus(&s) {
            for x in 0..s.size() {
                check(map.label(s.apply(x)) == &map.label(x).translate(), || {
                    format!("type {lengths:?}, target {}, point {x}", map.target())
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} factor maps"))
}

fn existence_matches_construction() -> Outcome {
    let bases: Vec<BaseSequence> = chains_up_to(12).into_iter().map(|c| BaseSequence::new(c).unwrap()).collect();
    let mut pairs = 0;
    for lengths in cycle_types(12) {
        let s = system_of_type(&lengths);
        for base in &bases {
            let exists = projection_exists(&s, base);
            let built = match project(&s, base) {
                Ok(map) => map.is_surjective() && map.is_equivariant() && map.target() == base,
                Err(_) => false,
            };
            check(exists == built, || format!("type {lengths:?}, base {base}: exists {exists}, built {built}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (system, base) pairs"))
}

fn random_supernatural(rng: &mut StdRng) -> Supernatural {
    let primes = [2u64, 3, 5, 7, 11, 13];
    let mut factors = Vec::new();
    for &p in &primes {
        if rng.gen_bool(0.5) {
            let e = if rng.gen_bool(0.2) { Exponent::Infinite } else { Exponent::Finite(rng.gen_range(0..5)) };
            factors.push((p, e));
        }
    }
    let tail = if rng.gen_bool(0.15) { Tail::Infinite } else { Tail::Zero };
    Supernatural::from_factors(factors, tail).unwrap()
}

fn lattice_laws() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let e = Supernatural::one();
    for _ in 0..10_000 {
        let (a, b, c) = (random_supernatural(&mut rng), random_supernatural(&mut rng), random_supernatural(&mut rng));
        let ctx = || format!("a = {a}, b = {b}, c = {c}");
        check(a.gcd(&b) == b.gcd(&a) && a.lcm(&b) == b.lcm(&a), ctx)?;
        check(a.gcd(&b).gcd(&c) == a.gcd(&b.gcd(&c)), ctx)?;
        check(a.lcm(&b).lcm(&c) == a.lcm(&b.lcm(&c)), ctx)?;
        check(a.gcd(&a) == a && a.lcm(&a) == a, ctx)?;
        check(a.gcd(&a.lcm(&b)) == a && a.lcm(&a.gcd(&b)) == a, ctx)?;
        check(a.gcd(&b).leq(&a) && a.leq(&a.lcm(&b)), ctx)?;
        check(a.leq(&a), ctx)?;
        check(!(a.leq(&b) && b.leq(&a)) || a == b, ctx)?;
        check(!(a.leq(&b) && b.leq(&c)) || a.leq(&c), ctx)?;
        check(a.mul(&b) == b.mul(&a) && a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), ctx)?;
        check(a.mul(&e) == a && a.leq(&a.mul(&b)), ctx)?;

        let small: Vec<u64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(1..200)).collect();
        let mut bigger = small.clone();
        bigger.extend((0..rng.gen_range(0..4)).map(|_| rng.gen_range(1..200)));
        let (pa, pb) = (Supernatural::phi_of_set(&small).unwrap(), Supernatural::phi_of_set(&bigger).unwrap());
        check(pa.leq(&pb), || format!("phi isotonic: {small:?} ⊆ {bigger:?}"))?;
        let (m, n) = (rng.gen_range(1..3000u64), rng.gen_range(1..3000u64));
        let (pm, pn) = (Supernatural::phi0(m).unwrap(), Supernatural::phi0(n).unwrap());
        check(Supernatural::phi0(m * n).unwrap() == pm.mul(&pn), || format!("phi0 product {m} {n}"))?;
        check(Supernatural::phi0(num_integer::gcd(m, n)).unwrap() == pm.gcd(&pn), || format!("phi0 gcd {m} {n}"))?;
        check(Supernatural::phi0(num_integer::lcm(m, n)).unwrap() == pm.lcm(&pn), || format!("phi0 lcm {m} {n}"))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("10000 triples in {elapsed:.2?}"))
}

fn odometer_isometry_and_minimality() -> Outcome {
    let mut bases = 0;
    for chain in chains_up_to(64) {
        let base = BaseSequence::new(chain).unwrap();
        let points: Vec<AdicInt> = base.points().collect();
        let moved: Vec<AdicInt> = points.iter().map(AdicInt::translate).collect();
        for (x, tx) in points.iter().zip(&moved) {
            for (y, ty) in points.iter().zip(&moved) {
                let (d, td) = (x.metric(y).unwrap(), tx.metric(ty).unwrap());
                check(d == td, || format!("base {base}: d({x}, {y}) changes under translation"))?;
            }
        }
        let n = base.last() as usize;
        for x in &points {
            let mut seen = BTreeSet::new();
            let mut y = x.clone();
            for _ in 0..n {
                seen.insert(y.index());
                y = y.translate();
            }
            check(seen.len() == n && &y == x, || format!("base {base}: orbit of {x} misses points"))?;
        }
        for level in 1..=base.depth() {
            let t = base.truncate(level).unwrap();
            check(t.is_indecomposable(), || format!("base {base}: level {level} truncation splits"))?;
        }
        bases += 1;
    }
    Ok(format!("{bases} bases"))
}

fn singleton_fiber_dichotomy() -> Outcome {
    let mut maps = 0;
    for n in 1..=12usize {
        let s = FinSystem::cycle(n);
        let top = s.ess_periods().phi;
        for chain in chains_up_to(n as u64) {
            if n as u64 % chain.last().unwrap() != 0 {
                continue;
            }
            let base = BaseSequence::new(chain).unwrap();
            let map = project(&s, &base).map_err(|e| e.to_string())?;
            let q = map.singleton_fibers();
            let expected: Vec<usize> = if base.ess() == top { (0..n).collect() } else { Vec::new() };
            check(q == expected, || format!("cycle {n}, base {base}: Q = {q:?}"))?;
            maps += 1;
        }
    }
    Ok(format!("{maps} factor maps of single cycles"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("ess agrees with the partition oracle", ess_oracle),
        ("coarsen and lcm_partition stay valid", closure_under_coarsen_and_lcm),
        ("unique classes iff single cycle", uniqueness_dichotomy),
        ("block intersections follow the congruences", congruence_structure),
        ("factor maps are equivariant", equivariance),
        ("projection exists iff it can be built", existence_matches_construction),
        ("supernatural lattice, semigroup and order laws", lattice_laws),
        ("odometer isometry and minimality", odometer_isometry_and_minimality),
        ("singleton fibers all or nothing on cycles", singleton_fiber_dichotomy),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: {name} ... PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: {name} ... FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Supernatural (ultranatural) numbers.
//!
//! A supernatural number assigns to every prime an exponent in
//! `{0, 1, 2, ...} ∪ {∞}`. Only values with finitely many exceptions to a
//! uniform tail exponent of `0` or `∞` are representable; that family
//! contains every natural number, every `p^∞` and the top element and is
//! closed under multiplication, `gcd` and `lcm`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::arith;
use crate::error::{Error, Result};

/// Exponent of a prime in a supernatural number.
///
/// The derived order puts every finite exponent below [`Exponent::Infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent::Finite(0);

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// `k + ∞ = ∞`; finite sums are exact.
    ///
    /// # Panics
    ///
    /// Panics if the finite sum overflows `u64`.
    pub fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => {
                Exponent::Finite(a.checked_add(b).expect("exponent overflow"))
            }
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent shared by every prime that is not listed explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tail {
    Zero,
    Infinite,
}

impl Tail {
    pub fn exponent(self) -> Exponent {
        match self {
            Tail::Zero => Exponent::ZERO,
            Tail::Infinite => Exponent::Infinite,
        }
    }

    // Only called with results of min/max/add applied to tail exponents,
    // which stay inside {0, ∞}.
    fn from_exponent(e: Exponent) -> Tail {
        match e {
            Exponent::Finite(0) => Tail::Zero,
            Exponent::Infinite => Tail::Infinite,
            Exponent::Finite(_) => unreachable!("tail exponent must be 0 or inf"),
        }
    }
}

/// A supernatural number in canonical form.
///
/// Exceptions equal to the tail exponent are never stored, so structural
/// equality coincides with equality of the exponent functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Supernatural {
    exceptions: BTreeMap<u64, Exponent>,
    tail: Tail,
}

impl Supernatural {
    /// The unit `E`: every exponent is zero.
    pub fn one() -> Self {
        Supernatural { exceptions: BTreeMap::new(), tail: Tail::Zero }
    }

    /// The greatest element: every exponent is infinite.
    pub fn top() -> Self {
        Supernatural { exceptions: BTreeMap::new(), tail: Tail::Infinite }
    }

    /// Builds a value from explicit `(prime, exponent)` pairs and a tail.
    pub fn from_factors<I>(factors: I, tail: Tail) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Exponent)>,
    {
        let mut exceptions = BTreeMap::new();
        for (p, e) in factors {
            if !arith::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if exceptions.insert(p, e).is_some() {
                return Err(Error::DuplicatePrime(p));
            }
        }
        Ok(Self::canonical(exceptions, tail))
    }

    /// `p^e` with every other exponent zero.
    pub fn prime_power(p: u64, e: Exponent) -> Result<Self> {
        Self::from_factors([(p, e)], Tail::Zero)
    }

    /// The embedding of a positive integer by its prime factorization.
    pub fn phi0(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        let exceptions = arith::factorize(n)
            .into_iter()
            .map(|(p, e)| (p, Exponent::Finite(e)))
            .collect();
        Ok(Supernatural { exceptions, tail: Tail::Zero })
    }

    /// Componentwise supremum of `phi0` over a finite nonempty set; this is
    /// `phi0` of the least common multiple of the set.
    pub fn phi_of_set(values: &[u64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut acc = Supernatural::one();
        for &a in values {
            acc = acc.lcm(&Supernatural::phi0(a)?);
        }
        Ok(acc)
    }

    fn canonical(mut exceptions: BTreeMap<u64, Exponent>, tail: Tail) -> Self {
        let t = tail.exponent();
        exceptions.retain(|_, e| *e != t);
        Supernatural { exceptions, tail }
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Explicitly listed primes and their exponents, ascending by prime.
    pub fn exceptions(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.exceptions.iter().map(|(&p, &e)| (p, e))
    }

    /// Exponent of the prime `p`.
    pub fn exponent(&self, p: u64) -> Exponent {
        self.exceptions.get(&p).copied().unwrap_or(self.tail.exponent())
    }

    /// The natural number this value represents, if it is finite.
    pub fn to_u64(&self) -> Option<u64> {
        if self.tail != Tail::Zero {
            return None;
        }
        self.exceptions.iter().try_fold(1u64, |acc, (&p, &e)| match e {
            Exponent::Finite(e) => arith::checked_pow(p, e).ok().and_then(|v| acc.checked_mul(v)),
            Exponent::Infinite => None,
        })
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Exponent, Exponent) -> Exponent) -> Self {
        let tail = Tail::from_exponent(op(self.tail.exponent(), other.tail.exponent()));
        let exceptions = self
            .exceptions
            .keys()
            .chain(other.exceptions.keys())
            .map(|&p| (p, op(self.exponent(p), other.exponent(p))))
            .collect();
        Self::canonical(exceptions, tail)
    }

    /// Product: exponents add, with `k + ∞ = ∞`.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, Exponent::add)
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Self) -> Self {
        self.zip_with(other, core::cmp::min)
    }

    /// Componentwise maximum of exponents.
    pub fn lcm(&self, other: &Self) -> Self {
        self.zip_with(other, core::cmp::max)
    }

    /// Divisibility order: every exponent of `self` is at most the matching
    /// exponent of `other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.tail <= other.tail
            && self
                .exceptions
                .keys()
                .chain(other.exceptions.keys())
                .all(|&p| self.exponent(p) <= other.exponent(p))
    }

    /// Membership of `a` in the regular set of naturals represented by
    /// `self`, i.e. `phi0(a) <= self`.
    pub fn contains(&self, a: u64) -> Result<bool> {
        Ok(Supernatural::phi0(a)?.leq(self))
    }

    /// Primes with nonzero exponent, ascending. Fails for an infinite tail.
    pub fn support(&self) -> Result<Vec<u64>> {
        match self.tail {
            Tail::Zero => Ok(self.exceptions.keys().copied().collect()),
            Tail::Infinite => Err(Error::InfiniteSupport),
        }
    }

    /// Largest finite exponent that occurs, `0` if none does.
    pub fn max_finite_exponent(&self) -> u64 {
        self.exceptions
            .values()
            .filter_map(|e| match e {
                Exponent::Finite(k) => Some(*k),
                Exponent::Infinite => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// A regular sequence `b_1 | b_2 | ... | b_depth` approaching `self`,
    /// with `b_k` the product over the first `k` support primes of
    /// `p^min(e_p, k)`.
    ///
    /// Only defined for a zero tail; see
    /// [`regular_sequence_with_horizon`](Self::regular_sequence_with_horizon)
    /// for the infinite-tail case.
    pub fn regular_sequence(&self, depth: usize) -> Result<RegularSeq> {
        let support = self.support()?;
        self.ramp(&support, depth)
    }

    /// Like [`regular_sequence`](Self::regular_sequence) but the support is
    /// cut to primes `<= prime_bound`, which makes an infinite tail usable.
    pub fn regular_sequence_with_horizon(&self, depth: usize, prime_bound: u64) -> Result<RegularSeq> {
        let support: Vec<u64> = (2..=prime_bound)
            .filter(|&p| arith::is_prime(p) && self.exponent(p) != Exponent::ZERO)
            .collect();
        self.ramp(&support, depth)
    }

    fn ramp(&self, support: &[u64], depth: usize) -> Result<RegularSeq> {
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        let mut terms = Vec::with_capacity(depth);
        for k in 1..=depth {
            let mut b = 1u64;
            for &p in support.iter().take(k) {
                let e = match self.exponent(p) {
                    Exponent::Finite(e) => e.min(k as u64),
                    Exponent::Infinite => k as u64,
                };
                b = b.checked_mul(arith::checked_pow(p, e)?).ok_or(Error::Overflow)?;
            }
            terms.push(b);
        }
        RegularSeq::new(terms)
    }
}

impl PartialOrd for Supernatural {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.leq(other), other.leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl core::ops::Mul for &Supernatural {
    type Output = Supernatural;

    fn mul(self, rhs: &Supernatural) -> Supernatural {
        Supernatural::mul(self, rhs)
    }
}

/// Canonical text form: `p^e` factors joined by `*` with primes ascending,
/// `p` for exponent one, `inf` for an infinite exponent, `1` for the empty
/// product and a `;default=inf` suffix for an infinite tail.
impl fmt::Display for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exceptions.is_empty() && self.tail == Tail::Zero {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.exceptions.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match e {
                Exponent::Finite(1) => write!(f, "{p}")?,
                e => write!(f, "{p}^{e}")?,
            }
        }
        if self.tail == Tail::Infinite {
            f.write_str(";default=inf")?;
        }
        Ok(())
    }
}

/// A divisibility chain `b_1 | b_2 | ... | b_K` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularSeq {
    terms: Vec<u64>,
}

impl RegularSeq {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        check_chain(&terms)?;
        Ok(RegularSeq { terms })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn last(&self) -> u64 {
        *self.terms.last().expect("regular sequences are nonempty")
    }

    pub fn phi(&self) -> Supernatural {
        Supernatural::phi_of_set(&self.terms).expect("terms are positive and nonempty")
    }

    /// Every term of `self` divides some term of `other`.
    pub fn dominated_by(&self, other: &RegularSeq) -> bool {
        self.terms.iter().all(|a| other.terms.iter().any(|b| b % a == 0))
    }
}

/// Nonempty, positive and each term divides the next.
pub(crate) fn check_chain(terms: &[u64]) -> Result<()> {
    if terms.is_empty() {
        return Err(Error::EmptyLevels);
    }
    if terms.contains(&0) {
        return Err(Error::Zero);
    }
    for w in terms.windows(2) {
        if w[1] % w[0] != 0 {
            return Err(Error::NotDivisibilityChain { prev: w[0], next: w[1] });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn sn(factors: &[(u64, Exponent)], tail: Tail) -> Supernatural {
        Supernatural::from_factors(factors.iter().copied(), tail).unwrap()
    }

    const INF: Exponent = Exponent::Infinite;
    const fn fin(e: u64) -> Exponent {
        Exponent::Finite(e)
    }

    #[test]
    fn phi0_examples() {
        assert_eq!(Supernatural::phi0(1).unwrap(), Supernatural::one());
        assert_eq!(Supernatural::phi0(12).unwrap(), sn(&[(2, fin(2)), (3, fin(1))], Tail::Zero));
        assert_eq!(
            Supernatural::phi0(216).unwrap(),
            Supernatural::phi0(12).unwrap().mul(&Supernatural::phi0(18).unwrap())
        );
        assert_eq!(Supernatural::phi0(0), Err(Error::Zero));
    }

    #[test]
    fn constructor_rejects_bad_primes() {
        assert_eq!(Supernatural::prime_power(4, fin(1)), Err(Error::NotPrime(4)));
        assert_eq!(
            Supernatural::from_factors([(2, fin(1)), (2, fin(3))], Tail::Zero),
            Err(Error::DuplicatePrime(2))
        );
    }

    #[test]
    fn canonical_form_strips_default() {
        let a = sn(&[(2, fin(0)), (3, fin(1))], Tail::Zero);
        assert_eq!(a, Supernatural::phi0(3).unwrap());
        let b = sn(&[(5, INF)], Tail::Infinite);
        assert_eq!(b, Supernatural::top());
    }

    #[test]
    fn mul_examples() {
        let n = Supernatural::phi0(30).unwrap();
        assert_eq!(Supernatural::one().mul(&n), n);
        let two_inf = Supernatural::prime_power(2, INF).unwrap();
        for k in 0..10 {
            let two_k = Supernatural::prime_power(2, fin(k)).unwrap();
            assert_eq!(two_inf.mul(&two_k), two_inf);
        }
        assert_eq!(
            Supernatural::phi0(6).unwrap().mul(&Supernatural::phi0(10).unwrap()),
            Supernatural::phi0(60).unwrap()
        );
    }

    #[test]
    fn leq_examples() {
        let top = Supernatural::top();
        assert!(Supernatural::one().leq(&top));
        assert!(Supernatural::phi0(6).unwrap().leq(&Supernatural::phi0(12).unwrap()));
        assert!(!Supernatural::phi0(12).unwrap().leq(&Supernatural::phi0(6).unwrap()));
        assert!(Supernatural::prime_power(2, INF).unwrap().leq(&top));
        assert!(!top.leq(&Supernatural::prime_power(2, INF).unwrap()));
        assert_eq!(
            Supernatural::phi0(2).unwrap().partial_cmp(&Supernatural::phi0(3).unwrap()),
            None
        );
    }

    #[test]
    fn gcd_lcm_examples() {
        let a = Supernatural::phi0(12).unwrap();
        let b = Supernatural::phi0(18).unwrap();
        assert_eq!(a.gcd(&b), Supernatural::phi0(6).unwrap());
        assert_eq!(a.lcm(&b), Supernatural::phi0(36).unwrap());
        assert_eq!(a.gcd(&a), a);
        assert_eq!(a.lcm(&a), a);
    }

    #[test]
    fn gcd_mixed_infinite() {
        let a = sn(&[(2, INF), (3, fin(1))], Tail::Zero);
        let b = sn(&[(2, fin(2)), (3, INF)], Tail::Zero);
        let g = a.gcd(&b);
        assert_eq!(g, Supernatural::phi0(12).unwrap());
        // cross-check through membership: x | g  <=>  x in both regular sets
        for x in 1..=200u64 {
            let both = a.contains(x).unwrap() && b.contains(x).unwrap();
            assert_eq!(g.contains(x).unwrap(), both, "x = {x}");
        }
    }

    #[test]
    fn phi_of_set_examples() {
        assert_eq!(Supernatural::phi_of_set(&[7]).unwrap(), Supernatural::phi0(7).unwrap());
        assert_eq!(Supernatural::phi_of_set(&[4, 6, 10]).unwrap(), Supernatural::phi0(60).unwrap());
        assert_eq!(Supernatural::phi_of_set(&[]), Err(Error::EmptySet));
        assert_eq!(Supernatural::phi_of_set(&[3, 0]), Err(Error::Zero));
    }

    #[test]
    fn contains_examples() {
        let two_inf = Supernatural::prime_power(2, INF).unwrap();
        assert!(two_inf.contains(1).unwrap());
        assert!(two_inf.contains(8).unwrap());
        assert!(!two_inf.contains(6).unwrap());
        assert_eq!(two_inf.contains(0), Err(Error::Zero));
        let twelve = Supernatural::phi0(12).unwrap();
        let members: Vec<u64> = (1..=12).filter(|&a| twelve.contains(a).unwrap()).collect();
        assert_eq!(members, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn regular_sequence_examples() {
        let two_inf = Supernatural::prime_power(2, INF).unwrap();
        assert_eq!(two_inf.regular_sequence(4).unwrap().terms(), &[2, 4, 8, 16]);
        let twelve = Supernatural::phi0(12).unwrap();
        let seq = twelve.regular_sequence(4).unwrap();
        assert_eq!(seq.terms(), &[2, 12, 12, 12]);
        assert_eq!(seq.phi(), twelve);
        assert_eq!(Supernatural::one().regular_sequence(3).unwrap().terms(), &[1, 1, 1]);
        assert_eq!(twelve.regular_sequence(0), Err(Error::ZeroDepth));
        assert_eq!(Supernatural::top().regular_sequence(2), Err(Error::InfiniteSupport));
        let top = Supernatural::top().regular_sequence_with_horizon(3, 5).unwrap();
        assert_eq!(top.terms(), &[2, 2 * 2 * 3 * 3, 8 * 27 * 125]);
    }

    #[test]
    fn regular_sequence_is_monotone() {
        let r = sn(&[(2, fin(3)), (3, INF), (7, fin(1))], Tail::Zero);
        let seq = r.regular_sequence(6).unwrap();
        let mut prev = Supernatural::one();
        for k in 1..=seq.len() {
            let cur = Supernatural::phi_of_set(&seq.terms()[..k]).unwrap();
            assert!(prev.leq(&cur));
            assert!(cur.leq(&r));
            prev = cur;
        }
    }

    #[test]
    fn dominance_examples() {
        let a = RegularSeq::new(vec![2, 4, 8]).unwrap();
        let b = RegularSeq::new(vec![6, 24, 48]).unwrap();
        let c = RegularSeq::new(vec![3, 9]).unwrap();
        assert!(a.dominated_by(&a));
        assert!(a.dominated_by(&b));
        assert!(!c.dominated_by(&a));
        assert_eq!(
            RegularSeq::new(vec![2, 3]),
            Err(Error::NotDivisibilityChain { prev: 2, next: 3 })
        );
    }

    #[test]
    fn display() {
        assert_eq!(Supernatural::one().to_string(), "1");
        assert_eq!(Supernatural::top().to_string(), ";default=inf");
        assert_eq!(sn(&[(2, INF), (3, fin(1))], Tail::Zero).to_string(), "2^inf*3");
        assert_eq!(sn(&[(3, fin(0))], Tail::Infinite).to_string(), "3^0;default=inf");
    }

    #[test]
    fn divisors_round_trip_exhaustive() {
        for g in 1..=10_000u64 {
            let r = Supernatural::phi0(g).unwrap();
            for a in 1..=g {
                assert_eq!(r.contains(a).unwrap(), g % a == 0, "g = {g}, a = {a}");
            }
        }
    }

    proptest! {
        #[test]
        fn phi0_is_a_homomorphism(m in 1u64..5000, n in 1u64..5000) {
            let (pm, pn) = (Supernatural::phi0(m).unwrap(), Supernatural::phi0(n).unwrap());
            prop_assert_eq!(Supernatural::phi0(m * n).unwrap(), pm.mul(&pn));
            prop_assert_eq!(Supernatural::phi0(num_integer::gcd(m, n)).unwrap(), pm.gcd(&pn));
            prop_assert_eq!(Supernatural::phi0(num_integer::lcm(m, n)).unwrap(), pm.lcm(&pn));
        }

        #[test]
        fn subsequence_through_last_term(seed in proptest::collection::vec(1u64..6, 1..6), mask in any::<u32>()) {
            let mut terms = Vec::new();
            let mut acc = 1u64;
            for s in seed {
                acc *= s;
                terms.push(acc);
            }
            let full = RegularSeq::new(terms.clone()).unwrap().phi();
            let sub: Vec<u64> = terms
                .iter()
                .enumerate()
                .filter(|(i, _)| *i + 1 == terms.len() || mask & (1 << i) != 0)
                .map(|(_, &t)| t)
                .collect();
            prop_assert_eq!(Supernatural::phi_of_set(&sub).unwrap(), full);
        }

        #[test]
        fn phi_of_union_is_lcm(a in proptest::collection::vec(1u64..500, 1..5), b in proptest::collection::vec(1u64..500, 1..5)) {
            let mut union = a.clone();
            union.extend(&b);
            let pa = Supernatural::phi_of_set(&a).unwrap();
            let pb = Supernatural::phi_of_set(&b).unwrap();
            prop_assert_eq!(Supernatural::phi_of_set(&union).unwrap(), pa.lcm(&pb));
            prop_assert!(pa.leq(&Supernatural::phi_of_set(&union).unwrap()));
        }
    }

    #[test]
    fn to_u64() {
        assert_eq!(Supernatural::phi0(360).unwrap().to_u64(), Some(360));
        assert_eq!(Supernatural::prime_power(2, INF).unwrap().to_u64(), None);
        assert_eq!(Supernatural::top().to_u64(), None);
        assert_eq!("1", Supernatural::phi0(1).unwrap().to_string());
    }
}

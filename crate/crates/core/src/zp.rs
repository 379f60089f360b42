//! Arithmetic in F_p and (F_p)^n.
//!
//! Residues are always held as canonical representatives in `[0, p)`. Products
//! are formed in `u64`, so any prime that fits in a `u32` is supported.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Deterministic primality test by trial division. Adequate for `u32`-sized
/// moduli, which is all this crate accepts.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut d = 3u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// An odd prime `p >= 3` that fits in 32 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.0 as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let m = self.0 as u64;
        let mut b = base as u64 % m;
        let mut acc = 1u64 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse via Fermat. Returns `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

/// An element of (F_p)^n. Coordinate 0 is the least significant digit of the
/// rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    p: Prime,
    coords: Vec<u32>,
}

impl FpVector {
    pub fn new(p: Prime, coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= p.get()) {
            return Err(Error::CoordinateOutOfRange {
                value: bad as u64,
                p: p.get(),
            });
        }
        Ok(FpVector { p, coords })
    }

    /// Reduces arbitrary integers into canonical residues.
    pub fn from_signed(p: Prime, coords: &[i64]) -> Result<Self> {
        FpVector::new(p, coords.iter().map(|&c| p.reduce(c)).collect())
    }

    pub fn zero(p: Prime, n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        FpVector {
            p,
            coords: vec![0; n],
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> FpVector {
        FpVector {
            p: self.p,
            coords: self.coords.iter().map(|&c| self.p.neg(c)).collect(),
        }
    }

    fn check_compatible(&self, other: &FpVector) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.check_compatible(other)?;
        let p = self.p;
        Ok(FpVector {
            p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        })
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Coordinatewise `a - b`, reduced to `[0, p)`.
pub fn vec_diff(a: &FpVector, b: &FpVector) -> Result<FpVector> {
    a.check_compatible(b)?;
    let p = a.p;
    Ok(FpVector {
        p,
        coords: a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| p.sub(x, y))
            .collect(),
    })
}

pub fn negate_set<'a, I>(set: I) -> BTreeSet<FpVector>
where
    I: IntoIterator<Item = &'a FpVector>,
{
    set.into_iter().map(FpVector::neg).collect()
}

/// The ambient group (F_p)^n together with its base-p ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    p: Prime,
    n: usize,
    size: u64,
}

impl Space {
    /// Fails when `p^n` does not fit in a `u64`.
    pub fn new(p: Prime, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let size = (p.get() as u64)
            .checked_pow(n as u32)
            .filter(|_| n <= u32::MAX as usize)
            .ok_or(Error::Capacity {
                p: p.get(),
                n,
                limit: u64::MAX,
            })?;
        Ok(Space { p, n, size })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of points, `p^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Little-endian base-p rank: `sum v_i p^i`.
    pub fn rank(&self, v: &FpVector) -> Result<u64> {
        if v.p != self.p {
            return Err(Error::ModulusMismatch(self.p.get(), v.p.get()));
        }
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.dim(),
            });
        }
        Ok(self.rank_digits(&v.coords))
    }

    pub(crate) fn rank_digits(&self, digits: &[u32]) -> u64 {
        let p = self.p.get() as u64;
        digits.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64)
    }

    pub fn unrank(&self, rank: u64) -> Result<FpVector> {
        if rank >= self.size {
            return Err(Error::RankOutOfRange {
                rank,
                size: self.size,
            });
        }
        let mut coords = vec![0u32; self.n];
        self.unrank_into(rank, &mut coords);
        Ok(FpVector { p: self.p, coords })
    }

    pub(crate) fn unrank_into(&self, mut rank: u64, out: &mut [u32]) {
        let p = self.p.get() as u64;
        for d in out.iter_mut() {
            *d = (rank % p) as u32;
            rank /= p;
        }
    }

    /// Rank of `unrank(a) + unrank(b)`, computed digit by digit.
    pub(crate) fn add_ranks(&self, a: u64, b: u64) -> u64 {
        let p = self.p.get() as u64;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n {
            let d = (a % p + b % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }

    pub(crate) fn neg_rank(&self, a: u64) -> u64 {
        let p = self.p.get() as u64;
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n {
            let d = (p - a % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            a /= p;
        }
        out
    }

    pub(crate) fn sub_ranks(&self, a: u64, b: u64) -> u64 {
        self.add_ranks(a, self.neg_rank(b))
    }

    pub fn vectors(&self) -> impl Iterator<Item = FpVector> + '_ {
        (0..self.size).map(move |r| self.unrank(r).expect("rank in range"))
    }
}

/// Free-function form of [`Space::rank`].
pub fn vec_rank(v: &FpVector, p: Prime, n: usize) -> Result<u64> {
    Space::new(p, n)?.rank(v)
}

/// The set `K` of allowed-to-forbid residues, with `0 ∈ K`, and its
/// complement `N = F_p \ K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenBox {
    p: Prime,
    members: Vec<u32>,
    avoided: Vec<u32>,
}

impl ForbiddenBox {
    /// Accepts residues in any order; duplicates are merged. Values are
    /// required to lie in `[0, p)`.
    pub fn new<I: IntoIterator<Item = u32>>(p: Prime, residues: I) -> Result<Self> {
        let mut present = vec![false; p.get() as usize];
        for r in residues {
            if r >= p.get() {
                return Err(Error::CoordinateOutOfRange {
                    value: r as u64,
                    p: p.get(),
                });
            }
            present[r as usize] = true;
        }
        if !present[0] {
            return Err(Error::MissingZero);
        }
        let (members, avoided): (Vec<u32>, Vec<u32>) =
            (0..p.get()).partition(|&x| present[x as usize]);
        Ok(ForbiddenBox {
            p,
            members,
            avoided,
        })
    }

    /// `K = F_p`.
    pub fn full(p: Prime) -> Self {
        ForbiddenBox {
            p,
            members: (0..p.get()).collect(),
            avoided: Vec::new(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Sorted residues of `K`.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    /// Sorted residues of `N = F_p \ K`.
    pub fn avoided(&self) -> &[u32] {
        &self.avoided
    }

    /// `t = |K|`.
    pub fn t(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Whether `v ∈ K^n`.
    pub fn contains_vector(&self, v: &FpVector) -> bool {
        v.coords().iter().all(|&c| self.contains(c))
    }
}

/// `Q(k) = { x^k mod p : x ∈ F_p }`, including 0.
pub fn power_residues(p: Prime, k: u64) -> Result<ForbiddenBox> {
    if k < 2 {
        return Err(Error::ExponentTooSmall(k));
    }
    ForbiddenBox::new(p, (0..p.get()).map(|x| p.pow(x, k)))
}

/// `(p - 1) / gcd(k, p - 1) + 1`, the size of `Q(k)`.
pub fn residue_count_formula(p: Prime, k: u64) -> u64 {
    let pm1 = p.get() as u64 - 1;
    pm1 / gcd(k, pm1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert_eq!(Prime::new(4_294_967_291).unwrap().get(), 4_294_967_291);
        assert!(Prime::new(4_294_967_311).is_err());
    }

    #[test]
    fn power_residue_examples() {
        assert_eq!(power_residues(pr(7), 2).unwrap().members(), &[0, 1, 2, 4]);
        assert_eq!(power_residues(pr(7), 3).unwrap().members(), &[0, 1, 6]);
        assert_eq!(power_residues(pr(5), 2).unwrap().members(), &[0, 1, 4]);
        // gcd(3, 10) = 1: cubing is a bijection on F_11
        assert_eq!(power_residues(pr(11), 3).unwrap().t(), 11);
        assert_eq!(power_residues(pr(7), 6).unwrap().members(), &[0, 1]);
    }

    #[test]
    fn power_residue_errors() {
        assert_eq!(power_residues(pr(7), 1), Err(Error::ExponentTooSmall(1)));
        assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn box_invariants() {
        let k = ForbiddenBox::new(pr(7), [4, 0, 2, 2]).unwrap();
        assert_eq!(k.members(), &[0, 2, 4]);
        assert_eq!(k.avoided(), &[1, 3, 5, 6]);
        assert_eq!(k.t() + k.avoided().len(), 7);
        assert_eq!(ForbiddenBox::new(pr(7), [1, 2]), Err(Error::MissingZero));
        assert!(ForbiddenBox::new(pr(7), [0, 7]).is_err());
        assert!(ForbiddenBox::full(pr(5)).avoided().is_empty());
    }

    #[test]
    fn rank_examples() {
        let s = Space::new(pr(5), 2).unwrap();
        assert_eq!(s.rank(&FpVector::zero(pr(5), 2)).unwrap(), 0);
        assert_eq!(
            s.rank(&FpVector::new(pr(5), vec![3, 2]).unwrap()).unwrap(),
            13
        );
        let s3 = Space::new(pr(3), 2).unwrap();
        assert_eq!(
            s3.rank(&FpVector::new(pr(3), vec![2, 2]).unwrap()).unwrap(),
            8
        );
        assert!(FpVector::new(pr(3), vec![3, 0]).is_err());
        assert!(s3.unrank(9).is_err());
        assert!(s3.rank(&FpVector::zero(pr(3), 3)).is_err());
    }

    #[test]
    fn diff_examples() {
        let p = pr(5);
        let a = FpVector::new(p, vec![1, 0]).unwrap();
        let b = FpVector::new(p, vec![3, 4]).unwrap();
        assert!(vec_diff(&a, &a).unwrap().is_zero());
        assert_eq!(vec_diff(&a, &b).unwrap().coords(), &[3, 1]);
        let sum = vec_diff(&a, &b)
            .unwrap()
            .add(&vec_diff(&b, &a).unwrap())
            .unwrap();
        assert!(sum.is_zero());
        let other = FpVector::new(pr(7), vec![1, 0]).unwrap();
        assert_eq!(vec_diff(&a, &other), Err(Error::ModulusMismatch(5, 7)));
        assert!(vec_diff(&a, &FpVector::zero(p, 3)).is_err());
    }

    #[test]
    fn negation_examples() {
        let p5 = pr(5);
        let zero = FpVector::zero(p5, 1);
        assert_eq!(negate_set([&zero]), BTreeSet::from([zero.clone()]));
        let v = FpVector::new(p5, vec![1, 0]).unwrap();
        let got: Vec<_> = negate_set([&v]).into_iter().collect();
        assert_eq!(got[0].coords(), &[4, 0]);

        let p13 = pr(13);
        let qr: BTreeSet<FpVector> = [1, 3, 4, 9, 10, 12]
            .iter()
            .map(|&x| FpVector::new(p13, vec![x]).unwrap())
            .collect();
        assert_eq!(negate_set(&qr), qr);
    }

    #[test]
    fn rank_arith_matches_vector_arith() {
        let s = Space::new(pr(5), 3).unwrap();
        for a in (0..s.size()).step_by(7) {
            for b in (0..s.size()).step_by(11) {
                let va = s.unrank(a).unwrap();
                let vb = s.unrank(b).unwrap();
                assert_eq!(s.add_ranks(a, b), s.rank(&va.add(&vb).unwrap()).unwrap());
                assert_eq!(s.neg_rank(a), s.rank(&va.neg()).unwrap());
            }
        }
    }

    #[test]
    fn field_ops() {
        let p = pr(13);
        for a in 1..13 {
            assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
        }
        assert_eq!(p.inv(0), None);
        assert_eq!(p.reduce(-1), 12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_prime() -> impl Strategy<Value = Prime> {
            prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 97])
                .prop_map(|p| Prime::new(p).unwrap())
        }

        proptest! {
            #[test]
            fn residue_sets_depend_only_on_gcd(p in small_prime(), k in 2u64..40) {
                let d = gcd(k, p.get() as u64 - 1);
                let a = power_residues(p, k).unwrap();
                prop_assert_eq!(a.t() as u64, residue_count_formula(p, k));
                if d >= 2 {
                    prop_assert_eq!(a, power_residues(p, d).unwrap());
                } else {
                    prop_assert_eq!(a, ForbiddenBox::full(p));
                }
            }

            #[test]
            fn unrank_rank_roundtrip(p in small_prime(), n in 1usize..5, seed in any::<u64>()) {
                let s = Space::new(p, n).unwrap();
                let r = seed % s.size();
                let v = s.unrank(r).unwrap();
                prop_assert_eq!(s.rank(&v).unwrap(), r);
                prop_assert_eq!(s.unrank(s.rank(&v).unwrap()).unwrap(), v);
            }

            #[test]
            fn diff_zero_iff_equal(p in small_prime(), a in prop::collection::vec(0u32..1000, 3), b in prop::collection::vec(0u32..1000, 3)) {
                let a = FpVector::new(p, a.into_iter().map(|x| x % p.get()).collect()).unwrap();
                let b = FpVector::new(p, b.into_iter().map(|x| x % p.get()).collect()).unwrap();
                prop_assert_eq!(vec_diff(&a, &b).unwrap().is_zero(), a == b);
            }
        }
    }
}

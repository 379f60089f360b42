//! Brute-force oracles. Nothing here goes through the graph, the solver or
//! the certificate code; only plain integer arithmetic and `FpVector`s.

#![allow(dead_code)]

use diffavoid::{ForbiddenBox, FpVector, Prime, Space};
use rand::Rng;

pub fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    (3..=limit)
        .filter(|&m| (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0))
        .collect()
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// `{x^k mod p}` by repeated multiplication.
pub fn residues_by_enumeration(p: u64, k: u64) -> Vec<u32> {
    let mut seen = vec![false; p as usize];
    for x in 0..p {
        let mut y = 1 % p;
        for _ in 0..k {
            y = y * x % p;
        }
        seen[y as usize] = true;
    }
    (0..p as u32).filter(|&r| seen[r as usize]).collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether `a - b ∈ K^n`, coordinate by coordinate with signed arithmetic.
pub fn diff_in_box(p: u32, a: &[u32], b: &[u32], k: &[u32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| {
        let d = (x as i64 - y as i64).rem_euclid(p as i64) as u32;
        k.contains(&d)
    })
}

/// Pairwise check over ordered pairs: no `a ≠ b` with `a - b ∈ K^n`.
pub fn avoids(p: u32, set: &[Vec<u32>], k: &[u32]) -> bool {
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate() {
            if i != j && diff_in_box(p, a, b, k) {
                return false;
            }
        }
    }
    true
}

pub fn all_points(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut pts = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    pts
}

/// Largest difference-avoiding set by enumerating every subset of the
/// `p^n <= 25` points. Conflicts are found with [`diff_in_box`]; the
/// enumeration walks all `2^V` masks, each checked against its lowest element
/// and the already-decided mask without it.
pub fn brute_force_max(p: u32, n: usize, k: &[u32]) -> usize {
    let pts = all_points(p, n);
    let v = pts.len();
    assert!(v <= 25, "brute force limited to 25 points");
    let mut conflict = vec![0u32; v];
    for i in 0..v {
        for j in 0..v {
            if i != j
                && (diff_in_box(p, &pts[i], &pts[j], k) || diff_in_box(p, &pts[j], &pts[i], k))
            {
                conflict[i] |= 1 << j;
            }
        }
    }
    let total = 1usize << v;
    let mut ok = vec![false; total];
    ok[0] = true;
    let mut best = 0;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if ok[rest] && conflict[low] & rest as u32 == 0 {
            ok[mask] = true;
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

pub fn vectors(p: Prime, set: &[Vec<u32>]) -> Vec<FpVector> {
    set.iter()
        .map(|c| FpVector::new(p, c.clone()).unwrap())
        .collect()
}

pub fn coords(set: &[FpVector]) -> Vec<Vec<u32>> {
    set.iter().map(|v| v.coords().to_vec()).collect()
}

/// Random `K` containing 0.
pub fn random_box<R: Rng>(rng: &mut R, p: Prime) -> ForbiddenBox {
    let members = (1..p.get()).filter(|_| rng.gen_bool(0.5));
    ForbiddenBox::new(p, std::iter::once(0).chain(members)).unwrap()
}

/// Every `K ⊆ F_p` with `0 ∈ K`.
pub fn all_boxes(p: Prime) -> impl Iterator<Item = ForbiddenBox> {
    let others = p.get() - 1;
    (0u64..1 << others).map(move |mask| {
        let members = (1..p.get()).filter(|&x| mask >> (x - 1) & 1 == 1);
        ForbiddenBox::new(p, std::iter::once(0).chain(members)).unwrap()
    })
}

/// Distinct random points of `(F_p)^n`.
pub fn random_set<R: Rng>(rng: &mut R, space: &Space, size: usize) -> Vec<FpVector> {
    let size = size.min(space.size() as usize);
    let mut ranks = Vec::with_capacity(size);
    while ranks.len() < size {
        let r = rng.gen_range(0..space.size());
        if !ranks.contains(&r) {
            ranks.push(r);
        }
    }
    ranks
        .into_iter()
        .map(|r| space.unrank(r).unwrap())
        .collect()
}

/// Dense expansion of `Q(x) = ∏_i ∏_{α∈N} (x_i − α)` as a map from exponent
/// vectors to coefficients, by multiplying out linear factors one at a time.
pub fn dense_q(p: u32, n: usize, avoided: &[u32]) -> std::collections::BTreeMap<Vec<usize>, u32> {
    let mut poly = std::collections::BTreeMap::new();
    poly.insert(vec![0usize; n], 1u32);
    for i in 0..n {
        for &alpha in avoided {
            let mut next = std::collections::BTreeMap::new();
            for (exp, &c) in &poly {
                let mut up = exp.clone();
                up[i] += 1;
                *next.entry(up).or_insert(0u64) += c as u64;
                let neg = (p - alpha) % p;
                *next.entry(exp.clone()).or_insert(0u64) += c as u64 * neg as u64;
            }
            poly = next
                .into_iter()
                .map(|(e, c)| (e, (c % p as u64) as u32))
                .filter(|&(_, c)| c != 0)
                .collect();
        }
    }
    poly
}

pub fn eval_dense(p: u32, poly: &std::collections::BTreeMap<Vec<usize>, u32>, x: &[u32]) -> u32 {
    let p64 = p as u64;
    let mut acc = 0u64;
    for (exp, &c) in poly {
        let mut term = c as u64;
        for (&xi, &e) in x.iter().zip(exp) {
            for _ in 0..e {
                term = term * xi as u64 % p64;
            }
        }
        acc = (acc + term) % p64;
    }
    acc as u32
}

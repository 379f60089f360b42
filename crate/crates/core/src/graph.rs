//! Cayley graphs on (F_p)^n whose edges are forbidden differences.
//!
//! Vertex `i` is the point of rank `i`. Two points are adjacent when their
//! difference lies in the connection set `(K^n ∪ (−K)^n) \ {0}`; the
//! independent sets are exactly the sets whose ordered differences avoid
//! `K^n`. Rows are not stored: the neighbourhood of `u` is the connection set
//! translated by `u`.

use std::io::{self, Write};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::zp::{ForbiddenBox, FpVector, Prime, Space};

pub const DEFAULT_VERTEX_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone)]
pub struct CayleyGraph {
    space: Space,
    forbidden: Option<ForbiddenBox>,
    connection: Vec<u64>,
    connection_mask: Bitset,
}

/// Builds the graph with the default vertex limit.
pub fn build_graph(p: Prime, n: usize, forbidden: &ForbiddenBox) -> Result<CayleyGraph> {
    CayleyGraph::new(p, n, forbidden, DEFAULT_VERTEX_LIMIT)
}

fn check_capacity(p: Prime, n: usize, limit: u64) -> Result<Space> {
    let cap_err = Error::Capacity {
        p: p.get(),
        n,
        limit,
    };
    let space = Space::new(p, n).map_err(|_| cap_err.clone())?;
    if space.size() > limit || space.size() > usize::MAX as u64 {
        return Err(cap_err);
    }
    Ok(space)
}

impl CayleyGraph {
    pub fn new(p: Prime, n: usize, forbidden: &ForbiddenBox, vertex_limit: u64) -> Result<Self> {
        if forbidden.prime() != p {
            return Err(Error::ModulusMismatch(p.get(), forbidden.prime().get()));
        }
        let space = check_capacity(p, n, vertex_limit)?;

        // Odometer over K^n.
        let members = forbidden.members();
        let mut idx = vec![0usize; n];
        let mut digits = vec![0u32; n];
        let mut gens = Vec::new();
        loop {
            for (d, &i) in digits.iter_mut().zip(&idx) {
                *d = members[i];
            }
            gens.push(space.rank_digits(&digits));
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < members.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }

        let mut g = Self::from_generators(space, gens);
        g.forbidden = Some(forbidden.clone());
        Ok(g)
    }

    /// Cayley graph with connection set `(S ∪ −S) \ {0}` for arbitrary ranks
    /// `S`. Ranks outside the space are rejected.
    pub fn with_generators<I>(p: Prime, n: usize, gens: I, vertex_limit: u64) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let space = check_capacity(p, n, vertex_limit)?;
        let gens: Vec<u64> = gens.into_iter().collect();
        if let Some(&bad) = gens.iter().find(|&&g| g >= space.size()) {
            return Err(Error::RankOutOfRange {
                rank: bad,
                size: space.size(),
            });
        }
        Ok(Self::from_generators(space, gens))
    }

    fn from_generators(space: Space, gens: Vec<u64>) -> Self {
        let v = space.size() as usize;
        let mut mask = Bitset::new(v);
        for g in gens {
            if g != 0 {
                mask.insert(g as usize);
                mask.insert(space.neg_rank(g) as usize);
            }
        }
        let connection = mask.iter().map(|r| r as u64).collect();
        CayleyGraph {
            space,
            forbidden: None,
            connection,
            connection_mask: mask,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn forbidden(&self) -> Option<&ForbiddenBox> {
        self.forbidden.as_ref()
    }

    pub fn vertex_count(&self) -> usize {
        self.space.size() as usize
    }

    /// Sorted ranks of the (symmetric, zero-free) connection set.
    pub fn connection_set(&self) -> &[u64] {
        &self.connection
    }

    pub fn connection_vectors(&self) -> Vec<FpVector> {
        self.connection
            .iter()
            .map(|&r| self.space.unrank(r).expect("rank in range"))
            .collect()
    }

    /// Every vertex has this degree.
    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.space.size() * self.connection.len() as u64 / 2
    }

    #[inline]
    pub fn is_adjacent(&self, u: u64, v: u64) -> bool {
        self.connection_mask
            .contains(self.space.sub_ranks(u, v) as usize)
    }

    /// Neighbours of `u`, in connection-set order (not sorted by rank).
    pub fn neighbors(&self, u: u64) -> impl Iterator<Item = u64> + '_ {
        self.connection
            .iter()
            .map(move |&c| self.space.add_ranks(u, c))
    }

    pub fn adjacency_row(&self, u: u64) -> Bitset {
        let mut row = Bitset::new(self.vertex_count());
        for w in self.neighbors(u) {
            row.insert(w as usize);
        }
        row
    }

    pub fn is_independent(&self, ranks: &[u64]) -> bool {
        ranks.iter().enumerate().all(|(i, &a)| {
            ranks[i + 1..]
                .iter()
                .all(|&b| a != b && !self.is_adjacent(a, b))
        })
    }

    /// DIMACS `p edge V E` format; vertex `i + 1` is the point of rank `i`.
    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        let p = self.space.prime();
        let n = self.space.dim();
        writeln!(
            out,
            "c Cayley graph on (F_{p})^{n}, vertex i+1 = rank i (little-endian base p)"
        )?;
        if let Some(k) = &self.forbidden {
            let list: Vec<String> = k.members().iter().map(u32::to_string).collect();
            writeln!(out, "c K = {{{}}}", list.join(","))?;
        }
        writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count())?;
        let mut row = Vec::with_capacity(self.degree());
        for u in 0..self.space.size() {
            row.clear();
            row.extend(self.neighbors(u).filter(|&w| w > u));
            row.sort_unstable();
            for &w in &row {
                writeln!(out, "e {} {}", u + 1, w + 1)?;
            }
        }
        Ok(())
    }
}

/// A linear map of (F_p)^n that fixes the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearMap {
    /// Multiply one coordinate, or all of them when `coord` is `None`.
    Scale {
        coord: Option<usize>,
        unit: u32,
    },
    Swap(usize, usize),
    /// Cyclic shift of coordinates: `x_i -> x_{i+1}`.
    Rotate,
}

impl LinearMap {
    fn apply(self, p: Prime, digits: &mut [u32]) {
        match self {
            LinearMap::Scale {
                coord: Some(i),
                unit,
            } => digits[i] = p.mul(digits[i], unit),
            LinearMap::Scale { coord: None, unit } => {
                for d in digits.iter_mut() {
                    *d = p.mul(*d, unit);
                }
            }
            LinearMap::Swap(i, j) => digits.swap(i, j),
            LinearMap::Rotate => digits.rotate_right(1),
        }
    }
}

// Upper limit on connection-set lookups spent discovering automorphisms.
const SYMMETRY_WORK_CAP: u64 = 20_000_000;

impl CayleyGraph {
    pub fn apply_map(&self, map: LinearMap, rank: u64) -> u64 {
        let mut digits = vec![0u32; self.space.dim()];
        self.space.unrank_into(rank, &mut digits);
        map.apply(self.space.prime(), &mut digits);
        self.space.rank_digits(&digits)
    }

    /// Whether `map` sends the connection set onto itself, i.e. is a graph
    /// automorphism. `work` counts lookups and is charged even on failure.
    fn preserves(&self, map: LinearMap, work: &mut u64) -> bool {
        let mut digits = vec![0u32; self.space.dim()];
        for &c in &self.connection {
            *work += 1;
            self.space.unrank_into(c, &mut digits);
            map.apply(self.space.prime(), &mut digits);
            if !self
                .connection_mask
                .contains(self.space.rank_digits(&digits) as usize)
            {
                return false;
            }
        }
        true
    }

    /// Generators of a group of origin-fixing automorphisms: coordinate
    /// permutations and unit scalings (per coordinate or global) that
    /// preserve the connection set. Not necessarily the full stabiliser.
    pub fn linear_automorphisms(&self) -> Vec<LinearMap> {
        let p = self.space.prime();
        let n = self.space.dim();
        let mut candidates = Vec::new();
        if n >= 2 {
            candidates.push(LinearMap::Swap(0, 1));
            if n >= 3 {
                candidates.push(LinearMap::Rotate);
            }
        }
        for unit in 2..p.get() {
            candidates.push(LinearMap::Scale { coord: None, unit });
            if n >= 2 {
                candidates.extend((0..n).map(|i| LinearMap::Scale {
                    coord: Some(i),
                    unit,
                }));
            }
        }
        let mut work = 0u64;
        let mut out = Vec::new();
        for map in candidates {
            if work > SYMMETRY_WORK_CAP {
                break;
            }
            if self.preserves(map, &mut work) {
                out.push(map);
            }
        }
        out
    }

    /// Orbit label of every vertex under the group generated by
    /// [`Self::linear_automorphisms`]. The label is the smallest rank in the
    /// orbit.
    pub fn stabilizer_orbits(&self) -> Vec<u64> {
        let v = self.vertex_count();
        let mut parent: Vec<u64> = (0..v as u64).collect();
        fn find(parent: &mut [u64], mut x: u64) -> u64 {
            while parent[x as usize] != x {
                let up = parent[parent[x as usize] as usize];
                parent[x as usize] = up;
                x = up;
            }
            x
        }
        for map in self.linear_automorphisms() {
            for u in 0..v as u64 {
                let w = self.apply_map(map, u);
                let (a, b) = (find(&mut parent, u), find(&mut parent, w));
                if a != b {
                    // keep the smaller rank as root
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
        (0..v as u64).map(|u| find(&mut parent, u)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zp::power_residues;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn five_cycle() {
        let k = ForbiddenBox::new(pr(5), [0, 1, 4]).unwrap();
        let g = build_graph(pr(5), 1, &k).unwrap();
        assert_eq!(g.connection_set(), &[1, 4]);
        assert_eq!(g.degree(), 2);
        assert_eq!(g.edge_count(), 5);
        for u in 0..5u64 {
            assert!(g.is_adjacent(u, (u + 1) % 5));
            assert!(!g.is_adjacent(u, (u + 2) % 5));
        }
    }

    #[test]
    fn qr7_gives_complete_graph() {
        let k = power_residues(pr(7), 2).unwrap();
        let g = build_graph(pr(7), 1, &k).unwrap();
        assert_eq!(g.connection_set(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(g.edge_count(), 21);
    }

    #[test]
    fn box_in_dimension_two() {
        let k = ForbiddenBox::new(pr(3), [0, 1]).unwrap();
        let g = build_graph(pr(3), 2, &k).unwrap();
        let got: Vec<Vec<u32>> = g
            .connection_vectors()
            .iter()
            .map(|v| v.coords().to_vec())
            .collect();
        let mut want = vec![
            vec![0, 1],
            vec![0, 2],
            vec![1, 0],
            vec![2, 0],
            vec![1, 1],
            vec![2, 2],
        ];
        want.sort_by_key(|c| c[0] + 3 * c[1]);
        assert_eq!(got, want);
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.degree(), 6);
    }

    #[test]
    fn symmetric_and_irreflexive() {
        let k = power_residues(pr(7), 3).unwrap();
        let g = build_graph(pr(7), 2, &k).unwrap();
        for u in 0..49 {
            assert!(!g.is_adjacent(u, u));
            for v in 0..49 {
                assert_eq!(g.is_adjacent(u, v), g.is_adjacent(v, u));
            }
            assert_eq!(g.adjacency_row(u).count(), g.degree());
        }
    }

    #[test]
    fn capacity_error_names_size() {
        let k = ForbiddenBox::new(pr(3), [0, 1]).unwrap();
        let err = CayleyGraph::new(pr(3), 5, &k, 100).unwrap_err();
        assert_eq!(
            err,
            Error::Capacity {
                p: 3,
                n: 5,
                limit: 100
            }
        );
        assert!(err.to_string().contains("3^5"));
        assert!(build_graph(pr(3), 40, &k).is_err());
    }

    #[test]
    fn automorphisms_preserve_adjacency() {
        for (p, n, k) in [(13u64, 2usize, 3u64), (7, 3, 2), (5, 2, 2), (17, 1, 2)] {
            let kbox = power_residues(pr(p), k).unwrap();
            let g = build_graph(pr(p), n, &kbox).unwrap();
            let maps = g.linear_automorphisms();
            assert!(!maps.is_empty());
            let v = g.vertex_count() as u64;
            for map in maps {
                for u in (0..v).step_by(3) {
                    for w in (0..v).step_by(5) {
                        assert_eq!(
                            g.is_adjacent(u, w),
                            g.is_adjacent(g.apply_map(map, u), g.apply_map(map, w)),
                            "{map:?}"
                        );
                    }
                }
            }
            let orbits = g.stabilizer_orbits();
            assert_eq!(orbits[0], 0);
            assert!(orbits.iter().enumerate().all(|(u, &o)| o <= u as u64));
        }
    }

    #[test]
    fn q3_mod_13_orbits() {
        let kbox = power_residues(pr(13), 3).unwrap();
        let g = build_graph(pr(13), 2, &kbox).unwrap();
        let mut reps = g.stabilizer_orbits();
        reps.sort_unstable();
        reps.dedup();
        // 169 points fall into far fewer classes under the stabiliser of 0
        assert!(reps.len() < 20, "{}", reps.len());
    }

    #[test]
    fn dimacs_five_cycle() {
        let k = ForbiddenBox::new(pr(5), [0, 1, 4]).unwrap();
        let g = build_graph(pr(5), 1, &k).unwrap();
        let mut buf = Vec::new();
        g.write_dimacs(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('c')).collect();
        assert_eq!(
            body,
            vec!["p edge 5 5", "e 1 2", "e 1 5", "e 2 3", "e 3 4", "e 4 5"]
        );
    }
}

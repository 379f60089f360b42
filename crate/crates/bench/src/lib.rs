//! Shared fixtures for the criterion benchmarks.

use diffavoid::{build_graph, power_residues, CayleyGraph, Prime};

/// Cayley graph for `K = Q(k)` on `(F_p)^n`.
pub fn residue_graph(p: u64, n: usize, k: u64) -> CayleyGraph {
    let p = Prime::new(p).expect("prime");
    let forbidden = power_residues(p, k).expect("k >= 2");
    build_graph(p, n, &forbidden).expect("within vertex limit")
}

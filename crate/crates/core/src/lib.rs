//! Difference-avoiding sets in (F_p)^n.
//!
//! A set `A ⊆ (F_p)^n` avoids a forbidden box `K^n` (with `0 ∈ K`) when no
//! difference `a − b` of distinct elements lies in `K^n`. Such a set has at
//! most `(p − |K| + 1)^n` elements. This crate provides:
//!
//! * [`zp`]: arithmetic in F_p and (F_p)^n, power-residue sets;
//! * [`bounds`]: the closed-form bounds as exact big integers;
//! * [`graph`] and [`search`]: the Cayley graph of forbidden differences and an
//!   exact maximum independent set solver (including Paley clique numbers);
//! * [`cert`]: the polynomial `Q` and the diagonal evaluation matrix that
//!   certify the bound on a concrete set.

pub mod bitset;
pub mod bounds;
pub mod cert;
mod error;
pub mod graph;
pub mod search;
pub mod witness;
pub mod zp;

pub use bounds::{cor3_bound, thm2_bound, BoundReport, BoxSpec, LogBase, ReportOptions};
pub use cert::{
    build_matrix, build_q, eval_q, monomial_box_dimension, rank_mod_p, verify_certificate,
    Certificate, Matrix, QPolynomial, Verdict,
};
pub use error::{Error, Result};
pub use graph::{build_graph, CayleyGraph};
pub use search::{
    greedy_lower_bound, max_avoiding_set, paley_clique_number, SearchLimits, SearchResult,
    SearchStatus,
};
pub use witness::{Point, WitnessFile};
pub use zp::{
    negate_set, power_residues, vec_diff, vec_rank, ForbiddenBox, FpVector, Prime, Space,
};

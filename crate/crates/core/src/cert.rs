//! Polynomial certificates for the linear-algebra bound.
//!
//! For a forbidden box `K` with complement `N`, let `q(x) = ∏_{α∈N} (x − α)`
//! and `Q(x_1..x_n) = ∏ q(x_i)`. If every ordered difference of a set `A`
//! leaves `K^n`, then `Q(a − b) = 0` for `a ≠ b` while `Q(0) ≠ 0`, so the
//! matrix `B[a][b] = Q(a − b)` is diagonal and nonsingular. The translates
//! `x ↦ Q(a − x)` are then linearly independent inside the span of monomials
//! with every exponent at most `|N|`, which has dimension `(|N| + 1)^n`.
//!
//! `Q` is kept in tensor form: only the univariate `q` is stored.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::zp::{vec_diff, ForbiddenBox, FpVector, Prime, Space};

pub const DEFAULT_DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    p: Prime,
    n: usize,
    coeffs: Vec<u32>,
    avoided: Vec<u32>,
}

pub fn build_q(p: Prime, forbidden: &ForbiddenBox, n: usize) -> Result<QPolynomial> {
    if forbidden.prime() != p {
        return Err(Error::ModulusMismatch(p.get(), forbidden.prime().get()));
    }
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut coeffs = vec![1u32];
    for &alpha in forbidden.avoided() {
        // multiply by (x - alpha)
        let neg_alpha = p.neg(alpha);
        let mut next = vec![0u32; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] = p.add(next[i + 1], c);
            next[i] = p.add(next[i], p.mul(c, neg_alpha));
        }
        coeffs = next;
    }
    Ok(QPolynomial {
        p,
        n,
        coeffs,
        avoided: forbidden.avoided().to_vec(),
    })
}

impl QPolynomial {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficients of the univariate factor `q`, ascending degree.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn avoided(&self) -> &[u32] {
        &self.avoided
    }

    /// Degree of `q`, i.e. `|N|`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn total_degree(&self) -> usize {
        self.n * self.degree()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Horner evaluation of `q`.
    pub fn eval_univariate(&self, x: u32) -> u32 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| p.add(p.mul(acc, x), c))
    }

    fn eval_coords(&self, coords: &[u32]) -> u32 {
        let p = self.p;
        coords
            .iter()
            .fold(1, |acc, &c| p.mul(acc, self.eval_univariate(c)))
    }

    /// `Q(v) = ∏ q(v_i)`.
    pub fn eval(&self, v: &FpVector) -> Result<u32> {
        if v.prime() != self.p {
            return Err(Error::ModulusMismatch(self.p.get(), v.prime().get()));
        }
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.dim(),
            });
        }
        Ok(self.eval_coords(v.coords()))
    }

    /// `Q(0)`, the common diagonal entry of every certificate matrix.
    pub fn value_at_zero(&self) -> u32 {
        self.p.pow(self.coeffs[0], self.n as u64)
    }
}

pub fn eval_q(q: &QPolynomial, v: &FpVector) -> Result<u32> {
    q.eval(v)
}

/// `(deg q + 1)^n`: the number of monomials with every exponent at most
/// `deg q`, which contains every translate `x ↦ Q(a − x)`.
pub fn monomial_box_dimension(q: &QPolynomial) -> BigUint {
    BigUint::from(q.degree() as u64 + 1).pow(q.n as u32)
}

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len(), "shape does not match data");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix::new(rows.len(), cols, rows.concat())
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Matrix::new(m, m, vec![0; m * m]);
        for i in 0..m {
            out.data[i * m + i] = 1;
        }
        out
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

fn check_set(set: &[FpVector], p: Prime, n: usize) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut seen: HashMap<&FpVector, usize> = HashMap::with_capacity(set.len());
    for (i, v) in set.iter().enumerate() {
        if v.prime() != p {
            return Err(Error::ModulusMismatch(p.get(), v.prime().get()));
        }
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: v.dim(),
            });
        }
        if let Some(j) = seen.insert(v, i) {
            return Err(Error::Duplicate(j, i));
        }
    }
    Ok(())
}

/// `B[i][j] = Q(A[i] − A[j])`.
pub fn build_matrix(set: &[FpVector], q: &QPolynomial) -> Result<Matrix> {
    check_set(set, q.p, q.n)?;
    let m = set.len();
    let mut data = Vec::with_capacity(m * m);
    for a in set {
        for b in set {
            data.push(q.eval_coords(vec_diff(a, b)?.coords()));
        }
    }
    Ok(Matrix::new(m, m, data))
}

/// Rank over F_p by Gaussian elimination.
pub fn rank_mod_p(m: &Matrix, p: Prime) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<u32>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x % p.get()).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = p.inv(a[rank][col]).expect("pivot is nonzero");
        for x in a[rank][col..].iter_mut() {
            *x = p.mul(*x, inv);
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = p.sub(*x, p.mul(f, y));
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// `first − second ∈ K^n` with `first ≠ second`.
    Violation(FpVector, FpVector),
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub p: Prime,
    pub n: usize,
    pub forbidden: ForbiddenBox,
    /// The candidate set in ascending rank order; rows and columns of the
    /// matrix follow this order.
    pub set: Vec<FpVector>,
    pub ranks: Vec<u64>,
    /// Present only when `|A|` is within the dense limit.
    pub matrix: Option<Matrix>,
    pub is_diagonal: bool,
    pub diagonal_nonzero: bool,
    pub diagonal_value: u32,
    /// Skipped (None) for streamed verification.
    pub rank: Option<usize>,
    pub bound: BigUint,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

pub fn verify_certificate(
    set: &[FpVector],
    p: Prime,
    n: usize,
    forbidden: &ForbiddenBox,
) -> Result<Certificate> {
    verify_certificate_with(set, p, n, forbidden, DEFAULT_DENSE_LIMIT)
}

/// As [`verify_certificate`], but `B` is only materialised (and its rank only
/// computed) when `|A| <= dense_limit`.
pub fn verify_certificate_with(
    set: &[FpVector],
    p: Prime,
    n: usize,
    forbidden: &ForbiddenBox,
    dense_limit: usize,
) -> Result<Certificate> {
    check_set(set, p, n)?;
    let q = build_q(p, forbidden, n)?;
    let space = Space::new(p, n)?;

    let mut ranked: Vec<(u64, FpVector)> = set
        .iter()
        .map(|v| Ok((space.rank(v)?, v.clone())))
        .collect::<Result<_>>()?;
    ranked.sort_unstable_by_key(|(r, _)| *r);
    let (ranks, set): (Vec<u64>, Vec<FpVector>) = ranked.into_iter().unzip();

    let diagonal_value = q.value_at_zero();
    let mut is_diagonal = true;
    let mut offender = None;
    let matrix = if set.len() <= dense_limit {
        let b = build_matrix(&set, &q)?;
        'scan: for i in 0..set.len() {
            for j in 0..set.len() {
                if i != j && b.get(i, j) != 0 {
                    offender = Some((i, j));
                    break 'scan;
                }
            }
        }
        Some(b)
    } else {
        'stream: for (i, a) in set.iter().enumerate() {
            for (j, b) in set.iter().enumerate() {
                if i != j && q.eval_coords(vec_diff(a, b)?.coords()) != 0 {
                    offender = Some((i, j));
                    break 'stream;
                }
            }
        }
        None
    };
    if offender.is_some() {
        is_diagonal = false;
    }
    let diagonal_nonzero = diagonal_value != 0;
    let rank = matrix.as_ref().map(|b| rank_mod_p(b, p));
    let bound = monomial_box_dimension(&q);

    let verdict = match offender {
        None if diagonal_nonzero => Verdict::Valid,
        Some((i, j)) => Verdict::Violation(set[i].clone(), set[j].clone()),
        None => unreachable!("Q(0) is a product of nonzero residues"),
    };
    if verdict == Verdict::Valid {
        if let Some(r) = rank {
            assert_eq!(
                r,
                set.len(),
                "diagonal matrix with nonzero diagonal must have full rank"
            );
        }
        assert!(
            BigUint::from(set.len()) <= bound,
            "independent translates exceed the monomial box dimension"
        );
    }

    Ok(Certificate {
        p,
        n,
        forbidden: forbidden.clone(),
        set,
        ranks,
        matrix,
        is_diagonal,
        diagonal_nonzero,
        diagonal_value,
        rank,
        bound,
        verdict,
    })
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let space = Space::new(self.p, self.n).expect("space was valid at construction");
        let violating_pair = match &self.verdict {
            Verdict::Valid => None,
            Verdict::Violation(a, b) => Some([
                space.rank(a).expect("same space"),
                space.rank(b).expect("same space"),
            ]),
        };
        let len = if violating_pair.is_some() { 9 } else { 8 };
        let mut st = s.serialize_struct("Certificate", len)?;
        st.serialize_field("p", &self.p.get())?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("K", self.forbidden.members())?;
        st.serialize_field("A", &self.ranks)?;
        st.serialize_field(
            "verdict",
            match self.verdict {
                Verdict::Valid => "valid",
                Verdict::Violation(..) => "violation",
            },
        )?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("bound", &self.bound.to_string())?;
        st.serialize_field("diagonal_value", &self.diagonal_value)?;
        if let Some(pair) = violating_pair {
            st.serialize_field("violating_pair", &pair)?;
        }
        st.end()
    }
}

//! JSON witness files: `{"p": .., "n": .., "K": [..], "A": [[coords], ..]}`.
//!
//! Coordinates are little-endian, matching the rank convention. An element of
//! `A` may also be given as a bare rank, which is how certificates list it.
//! Unknown fields are ignored, so richer documents (search output,
//! certificates) that carry these fields are accepted as witness files too.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zp::{ForbiddenBox, FpVector, Prime, Space};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Coords(Vec<u32>),
    Rank(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<u32>>,
    #[serde(rename = "A")]
    pub a: Vec<Point>,
}

impl WitnessFile {
    pub fn new(forbidden: &ForbiddenBox, n: usize, set: &[FpVector]) -> Self {
        WitnessFile {
            p: Some(forbidden.prime().get() as u64),
            n: Some(n),
            k: Some(forbidden.members().to_vec()),
            a: set
                .iter()
                .map(|v| Point::Coords(v.coords().to_vec()))
                .collect(),
        }
    }

    /// The dimension: `n` if present, otherwise the length of the first
    /// coordinate list.
    pub fn dim(&self) -> Option<usize> {
        self.n.or_else(|| {
            self.a.iter().find_map(|pt| match pt {
                Point::Coords(c) => Some(c.len()),
                Point::Rank(_) => None,
            })
        })
    }

    /// Converts the elements of `A` into vectors of `(F_p)^n`.
    pub fn vectors(&self, p: Prime, n: usize) -> Result<Vec<FpVector>> {
        let space = Space::new(p, n)?;
        self.a
            .iter()
            .map(|pt| match pt {
                Point::Coords(c) if c.len() != n => Err(Error::DimensionMismatch {
                    expected: n,
                    actual: c.len(),
                }),
                Point::Coords(c) => FpVector::new(p, c.clone()),
                Point::Rank(r) => space.unrank(*r),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_and_extended_documents() {
        let p = Prime::new(5).unwrap();
        let w: WitnessFile =
            serde_json::from_str(r#"{"p":5,"n":1,"K":[0,1,4],"A":[[0],[2]]}"#).unwrap();
        assert_eq!(w.k.as_deref(), Some(&[0, 1, 4][..]));
        assert_eq!(w.vectors(p, 1).unwrap().len(), 2);

        let w: WitnessFile =
            serde_json::from_str(r#"{"A":[[1,2]],"max_size":1,"status":"exact"}"#).unwrap();
        assert_eq!(w.p, None);
        assert_eq!(w.dim(), Some(2));
        assert!(w.vectors(p, 2).is_ok());
        assert!(w.vectors(p, 3).is_err());
        let w: WitnessFile = serde_json::from_str(r#"{"A":[[7]]}"#).unwrap();
        assert!(w.vectors(p, 1).is_err());
    }

    #[test]
    fn ranks_unrank_little_endian() {
        let p = Prime::new(5).unwrap();
        let w: WitnessFile = serde_json::from_str(r#"{"n":2,"A":[0,7,[3,4]]}"#).unwrap();
        let coords: Vec<Vec<u32>> = w
            .vectors(p, 2)
            .unwrap()
            .iter()
            .map(|v| v.coords().to_vec())
            .collect();
        assert_eq!(coords, vec![vec![0, 0], vec![2, 1], vec![3, 4]]);
        assert!(w.vectors(p, 1).is_err());
    }
}

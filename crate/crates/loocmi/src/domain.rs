//! Finite input domains and labeled examples.

use crate::error::{Error, Result};
use crate::num::{format_rat, Rat};
use serde::{Deserialize, Serialize};

/// Index of a point inside its [`FiniteDomain`]; the opaque token the rest
/// of the crate passes around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointIdx(pub usize);

/// A finite, totally ordered input space. Every point carries a rational
/// coordinate so threshold and margin semantics are available everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteDomain {
    coords: Vec<Rat>,
}

impl FiniteDomain {
    /// Coordinates must be strictly increasing; that fixes both distinctness
    /// and the construction-time order.
    pub fn new(coords: Vec<Rat>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Input("domain must contain at least one point".into()));
        }
        for w in coords.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Input(format!(
                    "domain coordinates must be strictly increasing, got {} then {}",
                    format_rat(w[0]),
                    format_rat(w[1])
                )));
            }
        }
        Ok(Self { coords })
    }

    /// Integer grid `{1, …, m}`.
    pub fn grid(m: usize) -> Self {
        Self {
            coords: (1..=m as i64).map(Rat::from_integer).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, p: PointIdx) -> Rat {
        self.coords[p.0]
    }

    pub fn points(&self) -> impl Iterator<Item = PointIdx> + '_ {
        (0..self.coords.len()).map(PointIdx)
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Look a point up by exact coordinate.
    pub fn index_of(&self, coord: Rat) -> Option<PointIdx> {
        self.coords.binary_search(&coord).ok().map(PointIdx)
    }

    pub fn contains(&self, p: PointIdx) -> bool {
        p.0 < self.coords.len()
    }
}

/// An `(input, label)` pair. Labels are rationals: binary problems use 0/1,
/// experiments may declare richer finite label sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabeledExample {
    pub point: PointIdx,
    pub label: Rat,
}

impl LabeledExample {
    pub fn new(point: PointIdx, label: Rat) -> Self {
        Self { point, label }
    }
}

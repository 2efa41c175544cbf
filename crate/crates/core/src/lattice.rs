//! Mixed-radix keys for bounded integer points.
//!
//! Every point set and objective table in this crate lives inside a box
//! `[0, b_0] x ... x [0, b_{n-1}]`. Points are encoded as a single `u64` so
//! that unit exchanges become additions of strides.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Boxes up to this many cells use a flat vector for lookups.
const DENSE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    bounds: Vec<u32>,
    strides: Vec<u64>,
    size: u64,
}

impl Grid {
    /// A box with inclusive upper bounds `bounds`.
    pub fn new(bounds: Vec<u32>) -> Result<Self> {
        let mut strides = vec![0u64; bounds.len()];
        let mut size: u64 = 1;
        for i in (0..bounds.len()).rev() {
            strides[i] = size;
            size = size
                .checked_mul(u64::from(bounds[i]) + 1)
                .ok_or(Error::BudgetExceeded {
                    what: "lattice box",
                    required: u128::MAX,
                    limit: u64::MAX,
                })?;
        }
        Ok(Grid {
            bounds,
            strides,
            size,
        })
    }

    /// Smallest box containing every point.
    pub fn enclosing<'a, I>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        let mut bounds = vec![0u32; dim];
        for p in points {
            for (b, &v) in bounds.iter_mut().zip(p) {
                *b = (*b).max(v);
            }
        }
        Grid::new(bounds)
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn stride(&self, coord: usize) -> u64 {
        self.strides[coord]
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Key of `point`, or `None` when it lies outside the box.
    pub fn key(&self, point: &[u32]) -> Option<u64> {
        if point.len() != self.bounds.len() {
            return None;
        }
        let mut k = 0u64;
        for ((&v, &b), &s) in point.iter().zip(&self.bounds).zip(&self.strides) {
            if v > b {
                return None;
            }
            k += u64::from(v) * s;
        }
        Some(k)
    }
}

/// `u32` scores keyed by grid keys, defaulting to zero.
#[derive(Debug, Clone)]
pub(crate) enum ScoreMap {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl ScoreMap {
    pub(crate) fn new(grid: &Grid) -> Self {
        if grid.size() <= DENSE_LIMIT {
            ScoreMap::Dense(vec![0; grid.size() as usize])
        } else {
            ScoreMap::Sparse(HashMap::new())
        }
    }

    pub(crate) fn insert(&mut self, key: u64, score: u32) {
        match self {
            ScoreMap::Dense(v) => v[key as usize] = score,
            ScoreMap::Sparse(m) => {
                m.insert(key, score);
            }
        }
    }

    #[inline]
    pub(crate) fn get(&self, key: u64) -> u32 {
        match self {
            ScoreMap::Dense(v) => v[key as usize],
            ScoreMap::Sparse(m) => m.get(&key).copied().unwrap_or(0),
        }
    }
}

//! Metric utilities for the hexagonal lattice underlying the restricted
//! lattices.
//!
//! Sites are addressed by three redundant integer axes `(x0, x2, x4)` with
//! `x0 + x2 + x4 = 0`; the redundancy makes the three lattice directions
//! symmetric. Graph distance is the largest per-axis displacement, and the
//! number of distinct shortest paths has a closed binomial form. The path
//! count is deliberately not folded into the decoder edge weights; it is
//! exposed for degeneracy diagnostics only.

use crate::{Error, Result};

/// A site of the hexagonal lattice in three-axis coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HexCoord {
    pub x0: i64,
    pub x2: i64,
    pub x4: i64,
}

impl HexCoord {
    /// Builds a coordinate, rejecting triples off the lattice.
    pub fn new(x0: i64, x2: i64, x4: i64) -> Result<Self> {
        if x0 + x2 + x4 != 0 {
            return Err(Error::InvalidHexCoord(x0, x2, x4));
        }
        Ok(HexCoord { x0, x2, x4 })
    }

    /// Two free axes; the third is implied.
    pub fn from_axial(x0: i64, x2: i64) -> Self {
        HexCoord { x0, x2, x4: -x0 - x2 }
    }

    /// The six nearest neighbours.
    pub fn neighbors(self) -> [HexCoord; 6] {
        let d = [(1, -1, 0), (1, 0, -1), (0, 1, -1), (-1, 1, 0), (-1, 0, 1), (0, -1, 1)];
        d.map(|(a, b, c)| HexCoord { x0: self.x0 + a, x2: self.x2 + b, x4: self.x4 + c })
    }
}

fn sorted_abs_deltas(x: HexCoord, y: HexCoord) -> [u64; 3] {
    let mut d = [
        (y.x0 - x.x0).unsigned_abs(),
        (y.x2 - x.x2).unsigned_abs(),
        (y.x4 - x.x4).unsigned_abs(),
    ];
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Graph distance between two sites: the largest per-axis displacement.
pub fn hex_distance(x: HexCoord, y: HexCoord) -> u64 {
    sorted_abs_deltas(x, y)[0]
}

/// Number of distinct shortest paths between two sites.
///
/// With the displacements sorted as max >= med >= min, the count is
/// `C(r, s)` where `r = 2*max - med - min` and `s = max - med`.
pub fn hex_path_count(x: HexCoord, y: HexCoord) -> u64 {
    let [dmax, dmed, dmin] = sorted_abs_deltas(x, y);
    let r = 2 * dmax - dmed - dmin;
    let s = dmax - dmed;
    binomial_u128(r, s)
        .try_into()
        .expect("path count exceeds u64; coordinates are far outside the supported range")
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    acc
}

//! Locality-sensitive orderings in three flavours.
//!
//! * classic: the points strictly between `x` and `y` split into a prefix
//!   near `x` and a suffix near `y`;
//! * triangle: every pair between `x` and `y` (inclusive) is within
//!   `rho * d(x, y)`;
//! * left: orderings may be partial, and every pair of points at or before
//!   `x` and `y` is within `rho * d(x, y)`.

mod hst_orders;
mod separator;
mod spd;
mod verify;
mod walecki;

pub use hst_orders::{
    classic_as_triangle, cover_to_classic_lso, cover_to_triangle_lso, hst_classic_lso,
    hst_preorder, triangle_as_classic,
};
pub use separator::{
    separator_left_lso, CentroidOracle, SeparatorOracle, TreeDecomposition, TreeDecompositionOracle,
};
pub use spd::{
    landmarks, spd_decompose, spd_left_lso, LandmarkSet, PathPolicy, SpDecomposition, SpdLeftLso,
    SpdNode,
};
pub use verify::{verify_lso, LsoReport};
pub use walecki::walecki_orderings;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::PointId;

/// A linear order on some of the points.
pub type Ordering = Vec<PointId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LsoKind {
    Classic,
    Triangle,
    Left,
}

/// Orderings with their declared stretch. `tau` bounds the number of
/// orderings (classic, triangle) or the per-point membership (left).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLso", into = "RawLso")]
pub struct LsoCollection {
    pub kind: LsoKind,
    pub rho: f64,
    pub tau: usize,
    pub orderings: Vec<Ordering>,
}

#[derive(Serialize, Deserialize)]
struct RawLso {
    kind: LsoKind,
    rho: f64,
    orderings: Vec<Ordering>,
}

impl TryFrom<RawLso> for LsoCollection {
    type Error = Error;
    fn try_from(raw: RawLso) -> Result<Self> {
        if !(raw.rho.is_finite() && raw.rho >= 0.0) {
            return Err(Error::Schema(format!("lso rho {} is invalid", raw.rho)));
        }
        let mut lso = LsoCollection {
            kind: raw.kind,
            rho: raw.rho,
            tau: 0,
            orderings: raw.orderings,
        };
        for o in &lso.orderings {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Schema("ordering repeats a point".into()));
            }
        }
        lso.tau = lso.measured_tau();
        Ok(lso)
    }
}

impl From<LsoCollection> for RawLso {
    fn from(l: LsoCollection) -> Self {
        RawLso {
            kind: l.kind,
            rho: l.rho,
            orderings: l.orderings,
        }
    }
}

impl LsoCollection {
    /// Number of orderings containing each point of `0..n`.
    pub fn membership(&self, n: usize) -> Vec<usize> {
        let mut count = vec![0; n];
        for o in &self.orderings {
            for &x in o {
                count[x] += 1;
            }
        }
        count
    }

    /// Ordering count, or maximum membership for left-sided collections.
    pub fn measured_tau(&self) -> usize {
        match self.kind {
            LsoKind::Classic | LsoKind::Triangle => self.orderings.len(),
            LsoKind::Left => {
                let n = self.orderings.iter().flatten().max().map_or(0, |&x| x + 1);
                self.membership(n).into_iter().max().unwrap_or(0)
            }
        }
    }
}

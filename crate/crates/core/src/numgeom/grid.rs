//! Sample-point grids.
//!
//! ```json
//! {"ranges": [[-2, 2], [0, 0], …], "counts": [5, 1, …], "guard_radius": 0.1}
//! ```
//!
//! `counts` gives a lattice (count 1 takes the midpoint). Alternatively
//! `"samples": N` draws `N` uniform points from the box using the run seed,
//! and `"points"` lists explicit points, which are appended.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_guard() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    #[serde(default)]
    pub ranges: Vec<[f64; 2]>,
    #[serde(default)]
    pub counts: Vec<usize>,
    #[serde(default = "default_guard")]
    pub guard_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
}

/// A point with its position in the enumeration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub index: usize,
    pub x: Vec<f64>,
}

impl Grid {
    pub fn from_json(text: &str) -> Result<Self> {
        let g: Grid = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ranges.iter().any(|[lo, hi]| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::Spec("grid ranges must be finite with lo <= hi".into()));
        }
        if self.samples.is_none() && !self.ranges.is_empty() && self.counts.len() != self.ranges.len() {
            return Err(Error::Spec(format!(
                "grid has {} ranges but {} counts",
                self.ranges.len(),
                self.counts.len()
            )));
        }
        if !(self.guard_radius >= 0.0) {
            return Err(Error::Spec("guard_radius must be non-negative".into()));
        }
        if let Some(d) = self.points.iter().map(Vec::len).find(|&l| !self.ranges.is_empty() && l != self.ranges.len()) {
            return Err(Error::Spec(format!("explicit point of dimension {d} does not match the grid")));
        }
        Ok(())
    }

    /// Enumerate the points deterministically.
    pub fn points(&self, seed: u64) -> Vec<GridPoint> {
        let mut xs: Vec<Vec<f64>> = Vec::new();
        if let Some(n) = self.samples {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                xs.push(
                    self.ranges
                        .iter()
                        .map(|&[lo, hi]| if hi > lo { rng.gen_range(lo..hi) } else { lo })
                        .collect(),
                );
            }
        } else if !self.ranges.is_empty() {
            let mut cur = vec![0usize; self.ranges.len()];
            if self.counts.iter().all(|&c| c > 0) {
                loop {
                    xs.push(
                        cur.iter()
                            .zip(&self.ranges)
                            .zip(&self.counts)
                            .map(|((&i, &[lo, hi]), &c)| {
                                if c == 1 {
                                    0.5 * (lo + hi)
                                } else {
                                    lo + (hi - lo) * i as f64 / (c - 1) as f64
                                }
                            })
                            .collect(),
                    );
                    let mut d = 0;
                    loop {
                        if d == cur.len() {
                            break;
                        }
                        cur[d] += 1;
                        if cur[d] < self.counts[d] {
                            break;
                        }
                        cur[d] = 0;
                        d += 1;
                    }
                    if d == cur.len() {
                        break;
                    }
                }
            }
        }
        xs.extend(self.points.iter().cloned());
        xs.into_iter().enumerate().map(|(index, x)| GridPoint { index, x }).collect()
    }
}

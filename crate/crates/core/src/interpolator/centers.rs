use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned cube `corner + [0, side]^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cube {
    pub corner: Vec<f64>,
    pub side: f64,
}

impl Cube {
    pub fn new(corner: Vec<f64>, side: f64) -> Result<Self> {
        if corner.is_empty() {
            return Err(Error::domain("cube needs dimension at least 1"));
        }
        if !(side > 0.0) || !side.is_finite() || corner.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("cube side must be positive and finite, got {side}")));
        }
        Ok(Cube { corner, side })
    }

    /// `[0, side]^n`.
    pub fn origin(n: usize, side: f64) -> Result<Self> {
        Cube::new(vec![0.0; n], side)
    }

    pub fn dim(&self) -> usize {
        self.corner.len()
    }

    pub fn diameter(&self) -> f64 {
        self.side * (self.dim() as f64).sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let tol = 1e-12 * self.side;
        x.len() == self.dim()
            && x.iter().zip(&self.corner).all(|(v, a)| *v >= a - tol && *v <= a + self.side + tol)
    }

    /// Tensor grid with `per_axis` equispaced nodes per axis, last axis fastest.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let n = self.dim();
        let step = if per_axis > 1 { self.side / (per_axis - 1) as f64 } else { 0.0 };
        let total = per_axis.pow(n as u32);
        (0..total)
            .map(|mut k| {
                let mut p = vec![0.0; n];
                for d in (0..n).rev() {
                    p[d] = self.corner[d] + (k % per_axis) as f64 * step;
                    k /= per_axis;
                }
                p
            })
            .collect()
    }

    /// Tensor grid of cell midpoints, strictly inside the cube.
    pub fn interior_grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let n = self.dim();
        let step = self.side / per_axis as f64;
        let total = per_axis.pow(n as u32);
        (0..total)
            .map(|mut k| {
                let mut p = vec![0.0; n];
                for d in (0..n).rev() {
                    p[d] = self.corner[d] + ((k % per_axis) as f64 + 0.5) * step;
                    k /= per_axis;
                }
                p
            })
            .collect()
    }
}

/// Distinct interpolation centers inside a cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterSet {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub cube: Cube,
}

impl CenterSet {
    pub fn new(points: Vec<Vec<f64>>, cube: Cube) -> Result<Self> {
        let n = cube.dim();
        if points.is_empty() {
            return Err(Error::InvalidCenters("empty center set".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(Error::InvalidCenters(format!("center {i} has dimension {}, expected {n}", p.len())));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidCenters(format!("center {i} is not finite")));
            }
            if !cube.contains(p) {
                return Err(Error::InvalidCenters(format!("center {i} = {p:?} lies outside the cube")));
            }
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            points[a].iter().zip(&points[b]).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(Error::InvalidCenters(format!("duplicate centers at indices {} and {}", w[0], w[1])));
            }
        }
        Ok(CenterSet { n, points, cube })
    }

    /// Smallest cube `[lo, lo + side]^n` holding all points.
    pub fn with_bounding_cube(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.first().map(Vec::len).ok_or_else(|| Error::InvalidCenters("empty center set".into()))?;
        let mut lo = vec![f64::INFINITY; n];
        let mut side: f64 = 0.0;
        for p in &points {
            for d in 0..n.min(p.len()) {
                lo[d] = lo[d].min(p[d]);
            }
        }
        for p in &points {
            for d in 0..n.min(p.len()) {
                side = side.max(p[d] - lo[d]);
            }
        }
        let side = if side > 0.0 { side } else { 1.0 };
        CenterSet::new(points, Cube::new(lo, side)?)
    }

    pub fn grid(cube: Cube, per_axis: usize) -> Result<Self> {
        if per_axis < 2 {
            return Err(Error::InvalidCenters("grid needs at least 2 points per axis".into()));
        }
        let pts = cube.grid(per_axis);
        CenterSet::new(pts, cube)
    }

    /// `count` uniform random points, deterministic in `seed`.
    pub fn random(cube: Cube, count: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..count)
            .map(|_| cube.corner.iter().map(|a| a + rng.gen::<f64>() * cube.side).collect())
            .collect();
        CenterSet::new(pts, cube)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A grid estimate of the fill distance and the grid slack bounding its error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FillDistance {
    pub estimate: f64,
    /// The true value lies in `[estimate, estimate + slack]`.
    pub slack: f64,
}

impl FillDistance {
    pub fn upper(&self) -> f64 {
        self.estimate + self.slack
    }
}

/// `sup_{y∈E} min_{x∈X} |y − x|` by scanning a `resolution^n` grid on `E`.
pub fn fill_distance(points: &[Vec<f64>], cube: &Cube, resolution: usize) -> Result<FillDistance> {
    if points.is_empty() {
        return Err(Error::domain("fill distance of an empty center set"));
    }
    if resolution < 2 {
        return Err(Error::domain("fill distance needs at least 2 grid points per axis"));
    }
    let n = cube.dim();
    let step = cube.side / (resolution - 1) as f64;
    let total = resolution
        .checked_pow(n as u32)
        .ok_or_else(|| Error::domain("fill distance grid too large"))?;
    let estimate = (0..total)
        .into_par_iter()
        .map(|mut k| {
            let mut y = vec![0.0; n];
            for d in (0..n).rev() {
                y[d] = cube.corner[d] + (k % resolution) as f64 * step;
                k /= resolution;
            }
            points
                .iter()
                .map(|x| x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
        .sqrt();
    Ok(FillDistance { estimate, slack: 0.5 * (n as f64).sqrt() * step })
}

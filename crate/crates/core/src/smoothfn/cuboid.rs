use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed axis-aligned box `[a₁,b₁] × … × [a_d,b_d]`. A box of dimension 0 is
/// the single point of `ℝ⁰`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cuboid {
    bounds: Vec<(f64, f64)>,
}

impl Cuboid {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &bounds {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(Error::InvalidBox { lower: a, upper: b });
            }
        }
        Ok(Self { bounds })
    }

    /// The cube `[c − r, c + r]^d` around `center`.
    pub fn around(center: &[f64], half_width: f64) -> Result<Self> {
        Self::new(center.iter().map(|&c| (c - half_width, c + half_width)).collect())
    }

    /// The cube `[−L/2, L/2]^d`.
    pub fn centered_cube(dim: usize, side: f64) -> Result<Self> {
        Self::new(vec![(-side / 2.0, side / 2.0); dim])
    }

    pub fn point() -> Self {
        Self { bounds: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn center(&self) -> Vec<f64> {
        self.bounds.iter().map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.bounds.iter().map(|(a, b)| 0.5 * (b - a)).collect()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && self.bounds.iter().zip(p).all(|(&(a, b), &x)| a <= x && x <= b)
    }

    /// Whether `other` lies inside `self`.
    pub fn includes(&self, other: &Cuboid) -> bool {
        self.dim() == other.dim()
            && self
                .bounds
                .iter()
                .zip(&other.bounds)
                .all(|(&(a, b), &(c, d))| a <= c && d <= b)
    }

    pub fn intersect(&self, other: &Cuboid) -> Option<Cuboid> {
        let mut out = Vec::with_capacity(self.dim());
        for (&(a, b), &(c, d)) in self.bounds.iter().zip(&other.bounds) {
            let (lo, hi) = (a.max(c), b.min(d));
            if lo > hi {
                return None;
            }
            out.push((lo, hi));
        }
        Some(Cuboid { bounds: out })
    }

    pub fn hull(&self, other: &Cuboid) -> Cuboid {
        Cuboid {
            bounds: self
                .bounds
                .iter()
                .zip(&other.bounds)
                .map(|(&(a, b), &(c, d))| (a.min(c), b.max(d)))
                .collect(),
        }
    }

    /// Smallest box containing all `points`.
    pub fn bounding(points: &[Vec<f64>]) -> Option<Cuboid> {
        let first = points.first()?;
        let mut bounds: Vec<(f64, f64)> = first.iter().map(|&x| (x, x)).collect();
        for p in &points[1..] {
            for (b, &x) in bounds.iter_mut().zip(p) {
                b.0 = b.0.min(x);
                b.1 = b.1.max(x);
            }
        }
        Cuboid::new(bounds).ok()
    }

    /// Grows every side by `fraction` of its half-width plus `absolute`.
    pub fn padded(&self, fraction: f64, absolute: f64) -> Cuboid {
        Cuboid {
            bounds: self
                .bounds
                .iter()
                .map(|&(a, b)| {
                    let pad = fraction * 0.5 * (b - a) + absolute;
                    (a - pad, b + pad)
                })
                .collect(),
        }
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|i| {
                        let (a, b) = self.bounds[i];
                        if mask >> i & 1 == 1 {
                            b
                        } else {
                            a
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Tensor grid with `per_axis` equispaced points per coordinate
    /// (endpoints included). A degenerate side contributes one point.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .bounds
            .iter()
            .map(|&(a, b)| {
                if a == b || per_axis < 2 {
                    vec![0.5 * (a + b)]
                } else {
                    (0..per_axis)
                        .map(|j| a + (b - a) * j as f64 / (per_axis - 1) as f64)
                        .collect()
                }
            })
            .collect();
        tensor(&axes)
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &Cuboid) -> Cuboid {
        let mut bounds = self.bounds.clone();
        bounds.extend_from_slice(&other.bounds);
        Cuboid { bounds }
    }
}

/// All points of the tensor product of per-axis coordinate lists.
pub(crate) fn tensor(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for p in &points {
            for &x in axis {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

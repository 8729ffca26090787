//! Uniform spatial grids for the spectral solvers.
//!
//! Point counts are powers of two. 2D grids may carry a rotated frame so that
//! an anisotropic grid can be aligned with a guide axis; grid coordinates
//! `(xi1, xi2)` map to plane coordinates through an orthonormal basis.

use crate::error::{Error, Result};

fn check_axis(min: f64, max: f64, n: usize) -> Result<()> {
    if !(max > min) {
        return Err(Error::Grid(format!("empty extent [{min}, {max}]")));
    }
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::Grid(format!(
            "point count {n} must be a power of two and at least 8"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1d {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid1d {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        check_axis(min, max, n)?;
        Ok(Self { min, max, n })
    }

    /// Smallest power-of-two grid with spacing at most `dx_max`.
    pub fn with_max_spacing(min: f64, max: f64, dx_max: f64) -> Result<Self> {
        if !(dx_max > 0.0) {
            return Err(Error::Grid(format!("non-positive spacing bound {dx_max}")));
        }
        let raw = ((max - min) / dx_max).ceil() as usize;
        let n = raw.next_power_of_two().max(8);
        Self::new(min, max, n)
    }

    pub fn dx(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.min + (i as f64 + 0.5) * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Index of the grid point nearest to `x` (clamped to the grid).
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.min) / self.dx() - 0.5).round();
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

/// Orientation of a 2D grid in the (x, z) plane. Grid coordinates map as
/// `r = origin + xi1 * e1 + xi2 * e2` with `e1 ⟂ e2` unit vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame2d {
    pub origin: [f64; 2],
    pub e1: [f64; 2],
    pub e2: [f64; 2],
}

impl Frame2d {
    pub fn axis_aligned() -> Self {
        Self {
            origin: [0.0, 0.0],
            e1: [1.0, 0.0],
            e2: [0.0, 1.0],
        }
    }

    /// Basis with `e1` transverse to a guide axis tilted by `angle` from the
    /// vertical and `e2` along it (pointing downhill).
    pub fn guide_aligned(angle: f64, origin: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            origin,
            e1: [c, s],
            e2: [s, -c],
        }
    }

    pub fn to_plane(&self, xi1: f64, xi2: f64) -> [f64; 2] {
        [
            self.origin[0] + xi1 * self.e1[0] + xi2 * self.e2[0],
            self.origin[1] + xi1 * self.e1[1] + xi2 * self.e2[1],
        ]
    }

    pub fn from_plane(&self, x: f64, z: f64) -> [f64; 2] {
        let dx = x - self.origin[0];
        let dz = z - self.origin[1];
        [
            dx * self.e1[0] + dz * self.e1[1],
            dx * self.e2[0] + dz * self.e2[1],
        ]
    }
}

/// Uniform 2D grid. Amplitudes are stored row-major with axis 1 contiguous:
/// index `j * n1 + i` addresses `(xi1_i, xi2_j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2d {
    pub axis1: Grid1d,
    pub axis2: Grid1d,
    pub frame: Frame2d,
}

impl Grid2d {
    pub fn new(axis1: Grid1d, axis2: Grid1d) -> Self {
        Self {
            axis1,
            axis2,
            frame: Frame2d::axis_aligned(),
        }
    }

    pub fn with_frame(axis1: Grid1d, axis2: Grid1d, frame: Frame2d) -> Self {
        Self { axis1, axis2, frame }
    }

    pub fn len(&self) -> usize {
        self.axis1.n * self.axis2.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_area(&self) -> f64 {
        self.axis1.dx() * self.axis2.dx()
    }

    /// Plane coordinates of the point `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        self.frame.to_plane(self.axis1.x(i), self.axis2.x(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_counts() {
        assert!(Grid1d::new(0.0, 1.0, 100).is_err());
        assert!(Grid1d::new(0.0, 1.0, 4).is_err());
        assert!(Grid1d::new(1.0, 1.0, 16).is_err());
        assert!(Grid1d::new(0.0, 1.0, 16).is_ok());
    }

    #[test]
    fn spacing_bound_rounds_up() {
        let g = Grid1d::with_max_spacing(-1.0, 1.0, 0.011).unwrap();
        assert_eq!(g.n, 256);
        assert!(g.dx() <= 0.011);
    }

    #[test]
    fn rotated_frame_round_trip() {
        let f = Frame2d::guide_aligned(0.3, [1.0, -2.0]);
        let p = f.to_plane(0.7, -0.4);
        let back = f.from_plane(p[0], p[1]);
        assert!((back[0] - 0.7).abs() < 1e-14);
        assert!((back[1] + 0.4).abs() < 1e-14);
    }
}

//! Discretized complex wavefunctions with norm bookkeeping.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid1d, Grid2d};

/// Laboratory vs free-fall comoving representation of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameTag {
    Lab,
    Falling,
}

#[derive(Clone, Debug)]
pub struct Field1d {
    pub grid: Grid1d,
    pub amp: Vec<Complex64>,
}

impl Field1d {
    pub fn zeros(grid: Grid1d) -> Self {
        Self {
            grid,
            amp: vec![Complex64::ZERO; grid.n],
        }
    }

    /// Normalized Gaussian packet centered at `x0` with rms width `sigma`
    /// and mean wavenumber `k0`.
    pub fn gaussian(grid: Grid1d, x0: f64, sigma: f64, k0: f64) -> Self {
        let mut f = Self::zeros(grid);
        for (i, a) in f.amp.iter_mut().enumerate() {
            let x = grid.x(i);
            let env = (-(x - x0) * (x - x0) / (4.0 * sigma * sigma)).exp();
            *a = Complex64::from_polar(env, k0 * x);
        }
        f.normalize();
        f
    }

    pub fn from_real(grid: Grid1d, values: &[f64]) -> Self {
        assert_eq!(values.len(), grid.n);
        Self {
            grid,
            amp: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let s = 1.0 / n.sqrt();
            self.amp.iter_mut().for_each(|a| *a *= s);
        }
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.grid, other.grid);
        self.amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.dx()
    }

    pub fn mean_position(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, a) in self.amp.iter().enumerate() {
            let w = a.norm_sqr();
            num += w * self.grid.x(i);
            den += w;
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }

    /// Position spread sqrt(<x²> - <x>²).
    pub fn position_spread(&self) -> f64 {
        let mean = self.mean_position();
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, a) in self.amp.iter().enumerate() {
            let w = a.norm_sqr();
            let d = self.grid.x(i) - mean;
            num += w * d * d;
            den += w;
        }
        (num / den).sqrt()
    }

    /// Mean wavenumber from the lag-one phase slope,
    /// `<k> = arg(Σ psi_i* psi_{i+1}) / dx`. Exact for plane waves and free
    /// of the finite-difference bias at large `k dx`.
    pub fn mean_wavenumber(&self) -> f64 {
        let dx = self.grid.dx();
        let mut corr = Complex64::ZERO;
        for w in self.amp.windows(2) {
            corr += w[0].conj() * w[1];
        }
        if corr.norm_sqr() > 0.0 {
            corr.arg() / dx
        } else {
            0.0
        }
    }

    pub fn assert_finite(&self, context: &str) -> Result<()> {
        for (i, a) in self.amp.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite amplitude at index {i} ({context})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Field2d {
    pub grid: Grid2d,
    pub amp: Vec<Complex64>,
    pub frame: FrameTag,
}

impl Field2d {
    pub fn zeros(grid: Grid2d) -> Self {
        Self {
            grid,
            amp: vec![Complex64::ZERO; grid.len()],
            frame: FrameTag::Falling,
        }
    }

    /// Normalized Gaussian with rms widths (s1, s2) in grid coordinates.
    pub fn gaussian(grid: Grid2d, center: [f64; 2], sigma: [f64; 2]) -> Self {
        let mut f = Self::zeros(grid);
        let n1 = grid.axis1.n;
        for j in 0..grid.axis2.n {
            let u2 = grid.axis2.x(j) - center[1];
            let g2 = (-u2 * u2 / (4.0 * sigma[1] * sigma[1])).exp();
            for i in 0..n1 {
                let u1 = grid.axis1.x(i) - center[0];
                let g1 = (-u1 * u1 / (4.0 * sigma[0] * sigma[0])).exp();
                f.amp[j * n1 + i] = Complex64::new(g1 * g2, 0.0);
            }
        }
        f.normalize();
        f
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let s = 1.0 / n.sqrt();
            self.amp.iter_mut().for_each(|a| *a *= s);
        }
    }

    /// Density-weighted mean of the grid coordinates.
    pub fn centroid(&self) -> [f64; 2] {
        let n1 = self.grid.axis1.n;
        let mut c1 = 0.0;
        let mut c2 = 0.0;
        let mut den = 0.0;
        for j in 0..self.grid.axis2.n {
            let x2 = self.grid.axis2.x(j);
            for i in 0..n1 {
                let w = self.amp[j * n1 + i].norm_sqr();
                c1 += w * self.grid.axis1.x(i);
                c2 += w * x2;
                den += w;
            }
        }
        if den > 0.0 {
            [c1 / den, c2 / den]
        } else {
            [0.0, 0.0]
        }
    }

    pub fn assert_finite(&self, context: &str) -> Result<()> {
        for (i, a) in self.amp.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite amplitude at flat index {i} ({context})"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_normalized() {
        let g = Grid1d::new(-1.0, 1.0, 512).unwrap();
        let f = Field1d::gaussian(g, 0.1, 0.05, 40.0);
        assert!((f.norm() - 1.0).abs() < 1e-12);
        assert!((f.mean_position() - 0.1).abs() < 1e-6);
        assert!((f.mean_wavenumber() - 40.0).abs() < 0.1);
        assert!((f.position_spread() - 0.05).abs() < 1e-4);
    }

    #[test]
    fn gaussian_2d_norm_and_centroid() {
        let g = Grid2d::new(
            Grid1d::new(-1.0, 1.0, 64).unwrap(),
            Grid1d::new(-2.0, 2.0, 128).unwrap(),
        );
        let f = Field2d::gaussian(g, [0.2, -0.3], [0.1, 0.2]);
        assert!((f.norm() - 1.0).abs() < 1e-12);
        let c = f.centroid();
        assert!((c[0] - 0.2).abs() < 1e-6 && (c[1] + 0.3).abs() < 1e-6);
    }
}

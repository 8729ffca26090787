//! Absorbing boundaries: cos²-ramp amplitude masks at the grid edges and an
//! optional momentum-space filter that removes amplitude approaching the
//! Nyquist wavenumber before it aliases.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::grid::Grid1d;

/// Position-space amplitude mask: identically one in the interior, falling
/// as cos² to zero at the boundary points.
#[derive(Clone, Debug)]
pub struct AbsorberMask {
    pub mask: Vec<f64>,
    pub margin: usize,
}

impl AbsorberMask {
    /// `margin_fraction` of the domain is ramped down on each side.
    pub fn cos2(n: usize, margin_fraction: f64) -> Self {
        let margin = ((n as f64 * margin_fraction).round() as usize).min(n / 2);
        let mut mask = vec![1.0; n];
        for k in 0..margin {
            // k = 0 is the boundary point (mask 0), ramping to 1 inward
            let u = FRAC_PI_2 * k as f64 / margin as f64;
            let v = u.sin() * u.sin();
            mask[k] = v;
            mask[n - 1 - k] = v;
        }
        Self { mask, margin }
    }

    pub fn none(n: usize) -> Self {
        Self {
            mask: vec![1.0; n],
            margin: 0,
        }
    }

    /// Multiplies the amplitudes and returns the norm removed (uses `dx` as
    /// the integration weight).
    pub fn apply(&self, amp: &mut [Complex64], dx: f64) -> f64 {
        debug_assert_eq!(amp.len(), self.mask.len());
        if self.margin == 0 {
            return 0.0;
        }
        let n = amp.len();
        let mut removed = 0.0;
        for k in 0..self.margin {
            for i in [k, n - 1 - k] {
                let m = self.mask[i];
                let w = amp[i].norm_sqr();
                removed += w * (1.0 - m * m);
                amp[i] *= m;
            }
        }
        removed * dx
    }
}

/// Momentum-space mask over the FFT-ordered wavenumbers of a 1D axis:
/// unity for |k| below `cut_fraction` of the Nyquist wavenumber, cos²-ramp
/// to zero at Nyquist. Removing such amplitude is an open boundary in
/// momentum space; any removed norm is reported by the stepper.
pub fn momentum_mask(grid: &Grid1d, cut_fraction: f64) -> Vec<f64> {
    let n = grid.n;
    let dk = 2.0 * std::f64::consts::PI / (grid.max - grid.min);
    let k_nyquist = dk * (n as f64) / 2.0;
    let k_cut = cut_fraction * k_nyquist;
    (0..n)
        .map(|i| {
            let k = if i <= n / 2 {
                i as f64 * dk
            } else {
                (i as f64 - n as f64) * dk
            };
            let a = k.abs();
            if a <= k_cut {
                1.0
            } else {
                let u = FRAC_PI_2 * (a - k_cut) / (k_nyquist - k_cut);
                u.cos() * u.cos()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_shape() {
        let m = AbsorberMask::cos2(64, 0.1);
        assert_eq!(m.margin, 6);
        assert_eq!(m.mask[0], 0.0);
        assert_eq!(m.mask[63], 0.0);
        assert_eq!(m.mask[10], 1.0);
        for k in 1..m.margin {
            assert!(m.mask[k] > m.mask[k - 1], "ramp must increase inward");
        }
    }

    #[test]
    fn identity_mask_removes_nothing() {
        let m = AbsorberMask::none(32);
        let mut amp = vec![Complex64::new(0.3, -0.4); 32];
        let removed = m.apply(&mut amp, 0.5);
        assert_eq!(removed, 0.0);
        assert_eq!(amp[7], Complex64::new(0.3, -0.4));
    }

    #[test]
    fn interior_packet_untouched() {
        let g = Grid1d::new(-1.0, 1.0, 256).unwrap();
        let f = crate::field::Field1d::gaussian(g, 0.0, 0.05, 0.0);
        let m = AbsorberMask::cos2(g.n, 0.1);
        let mut amp = f.amp.clone();
        let removed = m.apply(&mut amp, g.dx());
        assert!(removed < 1e-14);
    }

    #[test]
    fn momentum_mask_plateau() {
        let g = Grid1d::new(-1.0, 1.0, 128).unwrap();
        let m = momentum_mask(&g, 0.75);
        assert_eq!(m[0], 1.0);
        // Nyquist bin fully quenched
        assert!(m[64] < 1e-12);
        // low-|k| bins untouched, including negative wavenumbers
        assert_eq!(m[10], 1.0);
        assert_eq!(m[118], 1.0);
    }
}

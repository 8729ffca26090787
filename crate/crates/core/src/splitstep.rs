//! Strang split-operator propagation in one dimension.
//!
//! The kinetic factor is applied exactly in momentum space; the potential
//! factor is a pointwise phase restricted to the window where the potential
//! is nonzero. Real-time steps are unitary up to roundoff; imaginary-time
//! steps decay and are renormalized by the relaxation drivers.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::absorber::{momentum_mask, AbsorberMask};
use crate::error::Result;
use crate::field::Field1d;
use crate::grid::Grid1d;
use crate::units::HBAR;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeAxis {
    Real,
    Imaginary,
}

/// Time-dependent potential sampled onto a grid. `fill` writes V(x, t) into
/// `buf` and returns the half-open index range outside of which the entries
/// are zero, so steppers can skip the identity phase.
pub trait Potential1d {
    fn fill(&self, t: f64, grid: &Grid1d, buf: &mut [f64]) -> (usize, usize);
}

/// Adapter for closures `V(x, t)` with no sparsity information.
pub struct FnPotential1d<F: Fn(f64, f64) -> f64>(pub F);

impl<F: Fn(f64, f64) -> f64> Potential1d for FnPotential1d<F> {
    fn fill(&self, t: f64, grid: &Grid1d, buf: &mut [f64]) -> (usize, usize) {
        for (i, v) in buf.iter_mut().enumerate() {
            *v = (self.0)(grid.x(i), t);
        }
        (0, grid.n)
    }
}

/// The assembled time-dependent potential of the semi-classical model.
pub struct SemiclassicalPotential {
    pub vertical: crate::model::GuideSpec,
    pub oblique: crate::model::GuideSpec,
    pub timing: crate::model::TimingSequence,
}

impl Potential1d for SemiclassicalPotential {
    fn fill(&self, t: f64, grid: &Grid1d, buf: &mut [f64]) -> (usize, usize) {
        crate::potential::fill_semiclassical(buf, grid, t, &self.vertical, &self.oblique, &self.timing)
    }
}

/// Statistics of one propagation interval.
#[derive(Clone, Copy, Debug, Default)]
pub struct PropagationStats {
    pub steps: usize,
    pub dt_used: f64,
    /// Norm removed by the position-space absorber.
    pub absorbed_position: f64,
    /// Norm removed by the momentum-space filter.
    pub absorbed_momentum: f64,
}

pub struct Stepper1d {
    pub grid: Grid1d,
    pub mass: f64,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    /// Kinetic energy per FFT bin, ħ²k²/2m.
    kinetic_energy: Vec<f64>,
    kin_factor: Vec<Complex64>,
    kin_dt: f64,
    kin_axis: TimeAxis,
    kmask: Option<Vec<f64>>,
    vbuf: Vec<f64>,
}

impl Stepper1d {
    pub fn new(grid: Grid1d, mass: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(grid.n);
        let ifft = planner.plan_fft_inverse(grid.n);
        let scratch_len = fft
            .get_inplace_scratch_len()
            .max(ifft.get_inplace_scratch_len());
        let dk = 2.0 * PI / (grid.max - grid.min);
        let kinetic_energy = (0..grid.n)
            .map(|i| {
                let k = if i <= grid.n / 2 {
                    i as f64 * dk
                } else {
                    (i as f64 - grid.n as f64) * dk
                };
                HBAR * HBAR * k * k / (2.0 * mass)
            })
            .collect();
        Self {
            grid,
            mass,
            fft,
            ifft,
            scratch: vec![Complex64::ZERO; scratch_len],
            kinetic_energy,
            kin_factor: Vec::new(),
            kin_dt: f64::NAN,
            kin_axis: TimeAxis::Real,
            kmask: None,
            vbuf: vec![0.0; grid.n],
        }
    }

    /// Install a momentum-space open boundary at `cut_fraction` of Nyquist.
    pub fn set_momentum_filter(&mut self, cut_fraction: f64) {
        self.kmask = Some(momentum_mask(&self.grid, cut_fraction));
        self.kin_dt = f64::NAN; // forces factor rebuild
    }

    fn ensure_kinetic_factor(&mut self, dt: f64, axis: TimeAxis) {
        if self.kin_dt == dt && self.kin_axis == axis && !self.kin_factor.is_empty() {
            return;
        }
        let inv_n = 1.0 / self.grid.n as f64;
        self.kin_factor = self
            .kinetic_energy
            .iter()
            .enumerate()
            .map(|(i, &t_e)| {
                let f = match axis {
                    TimeAxis::Real => Complex64::from_polar(1.0, -t_e * dt / HBAR),
                    TimeAxis::Imaginary => Complex64::new((-t_e * dt / HBAR).exp(), 0.0),
                };
                let m = self.kmask.as_ref().map_or(1.0, |mm| mm[i]);
                f * m * inv_n
            })
            .collect();
        self.kin_dt = dt;
        self.kin_axis = axis;
    }

    /// Momentum-space kinetic sweep; returns norm removed by the k-filter.
    fn kinetic_sweep(&mut self, amp: &mut [Complex64]) -> f64 {
        self.fft.process_with_scratch(amp, &mut self.scratch);
        let mut removed = 0.0;
        if let Some(mask) = &self.kmask {
            let w = self.grid.dx() / self.grid.n as f64;
            for (a, &m) in amp.iter().zip(mask) {
                removed += a.norm_sqr() * (1.0 - m * m) * w;
            }
        }
        for (a, f) in amp.iter_mut().zip(&self.kin_factor) {
            *a *= f;
        }
        self.ifft.process_with_scratch(amp, &mut self.scratch);
        removed
    }

    fn apply_potential(
        &mut self,
        amp: &mut [Complex64],
        pot: &impl Potential1d,
        t: f64,
        dt_eff: f64,
        axis: TimeAxis,
    ) {
        let (lo, hi) = pot.fill(t, &self.grid, &mut self.vbuf);
        match axis {
            TimeAxis::Real => {
                for i in lo..hi {
                    let v = self.vbuf[i];
                    if v != 0.0 {
                        amp[i] *= Complex64::from_polar(1.0, -v * dt_eff / HBAR);
                    }
                }
            }
            TimeAxis::Imaginary => {
                for i in lo..hi {
                    let v = self.vbuf[i];
                    if v != 0.0 {
                        amp[i] *= (-v * dt_eff / HBAR).exp();
                    }
                }
            }
        }
    }

    /// One Strang step `exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2)` with the
    /// potential sampled at the two step endpoints.
    pub fn split_step(
        &mut self,
        field: &mut Field1d,
        pot: &impl Potential1d,
        t: f64,
        dt: f64,
        axis: TimeAxis,
    ) {
        self.ensure_kinetic_factor(dt, axis);
        let mut amp = std::mem::take(&mut field.amp);
        self.apply_potential(&mut amp, pot, t, dt / 2.0, axis);
        self.kinetic_sweep(&mut amp);
        self.apply_potential(&mut amp, pot, t + dt, dt / 2.0, axis);
        field.amp = amp;
    }

    /// Propagates from `t0` to `t1` with steps of roughly `dt` (adjusted so
    /// the interval divides evenly). Consecutive potential half-steps are
    /// merged; the absorber applies once per step. `observer` is called after
    /// each step with the current time.
    pub fn propagate(
        &mut self,
        field: &mut Field1d,
        pot: &impl Potential1d,
        t0: f64,
        t1: f64,
        dt: f64,
        absorber: Option<&AbsorberMask>,
        mut observer: impl FnMut(usize, f64, &Field1d),
    ) -> Result<PropagationStats> {
        let span = t1 - t0;
        if span <= 0.0 {
            return Ok(PropagationStats::default());
        }
        let n_steps = ((span / dt - 1e-9).ceil() as usize).max(1);
        let dt_used = span / n_steps as f64;
        self.ensure_kinetic_factor(dt_used, TimeAxis::Real);

        let mut stats = PropagationStats {
            steps: n_steps,
            dt_used,
            ..Default::default()
        };
        let dx = self.grid.dx();
        let mut amp = std::mem::take(&mut field.amp);
        self.apply_potential(&mut amp, pot, t0, dt_used / 2.0, TimeAxis::Real);
        for s in 0..n_steps {
            stats.absorbed_momentum += self.kinetic_sweep(&mut amp);
            let t_next = t0 + span * (s + 1) as f64 / n_steps as f64;
            let dt_eff = if s + 1 == n_steps {
                dt_used / 2.0
            } else {
                dt_used
            };
            self.apply_potential(&mut amp, pot, t_next, dt_eff, TimeAxis::Real);
            if let Some(mask) = absorber {
                stats.absorbed_position += mask.apply(&mut amp, dx);
            }
            field.amp = amp;
            if s % 512 == 511 {
                field.assert_finite("propagation")?;
            }
            observer(s, t_next, field);
            amp = std::mem::take(&mut field.amp);
        }
        field.amp = amp;
        field.assert_finite("propagation end")?;
        Ok(stats)
    }

    /// Energy expectation ⟨T⟩ + ⟨V(t)⟩ for a normalized field.
    pub fn energy(&mut self, field: &Field1d, pot: &impl Potential1d, t: f64) -> f64 {
        let mut hat = field.amp.clone();
        self.fft.process_with_scratch(&mut hat, &mut self.scratch);
        let w = self.grid.dx() / self.grid.n as f64;
        let kinetic: f64 = hat
            .iter()
            .zip(&self.kinetic_energy)
            .map(|(a, &t_e)| a.norm_sqr() * t_e)
            .sum::<f64>()
            * w;
        pot.fill(t, &self.grid, &mut self.vbuf);
        let potential: f64 = field
            .amp
            .iter()
            .zip(&self.vbuf)
            .map(|(a, &v)| a.norm_sqr() * v)
            .sum::<f64>()
            * self.grid.dx();
        kinetic + potential
    }
}

/// Imaginary-time relaxation to the lowest state of a (static) potential,
/// renormalizing every step and stopping when the relative energy change per
/// step drops below `tol`.
pub fn imaginary_time_relax(
    stepper: &mut Stepper1d,
    initial: &Field1d,
    pot: &impl Potential1d,
    dt_imag: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(Field1d, Vec<f64>)> {
    let mut field = initial.clone();
    field.normalize();
    let mut trace = Vec::new();
    let mut last = f64::INFINITY;
    for it in 0..max_iter {
        stepper.split_step(&mut field, pot, 0.0, dt_imag, TimeAxis::Imaginary);
        field.normalize();
        let e = stepper.energy(&field, pot, 0.0);
        trace.push(e);
        let scale = e.abs().max(1e-300);
        if it > 2 && (last - e).abs() / scale < tol {
            return Ok((field, trace));
        }
        last = e;
    }
    Err(crate::error::Error::NoConvergence {
        iterations: max_iter,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field1d;
    use crate::units::HBAR;

    struct NoPotential;
    impl Potential1d for NoPotential {
        fn fill(&self, _t: f64, _g: &Grid1d, _b: &mut [f64]) -> (usize, usize) {
            (0, 0)
        }
    }

    const M: f64 = 1.44315790e-25;

    #[test]
    fn free_gaussian_spreading() {
        // sigma(t) = sigma0 sqrt(1 + (ħ t / 2 m sigma0²)²)
        let grid = Grid1d::new(-4e-5, 4e-5, 2048).unwrap();
        let mut stepper = Stepper1d::new(grid, M);
        let sigma0 = 1.2e-6;
        let mut f = Field1d::gaussian(grid, 0.0, sigma0, 0.0);
        let t_final = 2e-3;
        stepper
            .propagate(&mut f, &NoPotential, 0.0, t_final, 1e-6, None, |_, _, _| {})
            .unwrap();
        let expect = sigma0 * (1.0 + (HBAR * t_final / (2.0 * M * sigma0 * sigma0)).powi(2)).sqrt();
        let got = f.position_spread();
        assert!(
            ((got - expect) / expect).abs() < 1e-6,
            "sigma {got:.6e} vs {expect:.6e}"
        );
        assert!((f.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_state_revival() {
        // displaced oscillator ground state returns after one period
        let omega = 2.0e3;
        let pot = FnPotential1d(move |x: f64, _t| 0.5 * M * omega * omega * x * x);
        let a_ho = (HBAR / (M * omega)).sqrt();
        let grid = Grid1d::new(-40.0 * a_ho, 40.0 * a_ho, 2048).unwrap();
        let mut stepper = Stepper1d::new(grid, M);
        let x0 = 5.0 * a_ho;
        let psi0 = Field1d::gaussian(grid, x0, a_ho / std::f64::consts::SQRT_2, 0.0);
        let mut f = psi0.clone();
        let period = 2.0 * PI / omega;
        stepper
            .propagate(&mut f, &pot, 0.0, period, period / 4096.0, None, |_, _, _| {})
            .unwrap();
        let fidelity = f.overlap(&psi0).norm_sqr();
        assert!(fidelity > 1.0 - 1e-8, "fidelity {fidelity}");
    }

    #[test]
    fn energy_drift_static_potential() {
        let omega = 1.5e3;
        let pot = FnPotential1d(move |x: f64, _t| 0.5 * M * omega * omega * x * x);
        let a_ho = (HBAR / (M * omega)).sqrt();
        let grid = Grid1d::new(-30.0 * a_ho, 30.0 * a_ho, 1024).unwrap();
        let mut stepper = Stepper1d::new(grid, M);
        let mut f = Field1d::gaussian(grid, 2.0 * a_ho, a_ho, 0.4 / a_ho);
        f.normalize();
        let e0 = stepper.energy(&f, &pot, 0.0);
        let dt = 2.0 * PI / omega / 1000.0;
        stepper
            .propagate(&mut f, &pot, 0.0, 1e4 * dt, dt, None, |_, _, _| {})
            .unwrap();
        let e1 = stepper.energy(&f, &pot, 0.0);
        assert!(
            ((e1 - e0) / e0).abs() < 1e-8,
            "energy drift {:.3e}",
            (e1 - e0) / e0
        );
        assert!((f.norm() - 1.0).abs() < 1e-10, "norm drift {}", f.norm() - 1.0);
    }

    #[test]
    fn imaginary_time_ground_state() {
        let omega = 2.0e3;
        let pot = FnPotential1d(move |x: f64, _t| 0.5 * M * omega * omega * x * x);
        let a_ho = (HBAR / (M * omega)).sqrt();
        let grid = Grid1d::new(-20.0 * a_ho, 20.0 * a_ho, 512).unwrap();
        let mut stepper = Stepper1d::new(grid, M);
        let seed = Field1d::gaussian(grid, 3.0 * a_ho, 2.0 * a_ho, 0.0);
        let (gs, trace) =
            imaginary_time_relax(&mut stepper, &seed, &pot, 1e-6, 1e-12, 200_000).unwrap();
        let e = stepper.energy(&gs, &pot, 0.0);
        assert!(((e - 0.5 * HBAR * omega) / (0.5 * HBAR * omega)).abs() < 1e-6);
        // variational descent
        assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-16));
        // width of the analytic ground state
        assert!(((gs.position_spread() - a_ho / std::f64::consts::SQRT_2)
            / a_ho)
            .abs()
            < 1e-6);
    }
}

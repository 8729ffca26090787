//! Bound states of the sin² guide wells.
//!
//! The transverse Schrödinger operator is discretized as a symmetric
//! tridiagonal matrix with hard walls at the grid edges. Eigenvalue counts
//! and individual eigenvalues come from Sturm-sequence bisection; eigenvectors
//! from shifted inverse iteration. An independent imaginary-time route with
//! Gram-Schmidt deflation cross-checks the lowest states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field1d;
use crate::grid::Grid1d;
use crate::model::{AtomSpecies, GuideSpec};
use crate::potential::transverse_profile;
use crate::splitstep::{FnPotential1d, Stepper1d, TimeAxis};
use crate::units::HBAR;

/// Bound states of one guide well. Energies are measured from the well
/// bottom, `0 <= E_v <= depth`; the absolute eigenvalue is `E_v - depth`.
#[derive(Clone, Debug)]
pub struct BoundStateSet {
    pub grid: Grid1d,
    pub depth: f64,
    /// State indices actually materialized (ascending).
    pub indices: Vec<usize>,
    /// Energies from the well bottom for the materialized states.
    pub energies: Vec<f64>,
    /// Real normalized wavefunctions, one per materialized state.
    pub states: Vec<Vec<f64>>,
    /// Total number of bound states of the well on this grid.
    pub total_bound: usize,
}

impl BoundStateSet {
    pub fn count(&self) -> usize {
        self.total_bound
    }

    /// Position of `index` within the materialized set, if present.
    pub fn slot(&self, index: usize) -> Option<usize> {
        self.indices.iter().position(|&i| i == index)
    }

    pub fn max_orthonormality_error(&self) -> f64 {
        let dx = self.grid.dx();
        let mut worst: f64 = 0.0;
        for (a, sa) in self.states.iter().enumerate() {
            for (b, sb) in self.states.iter().enumerate() {
                let dot: f64 = sa.iter().zip(sb).map(|(x, y)| x * y).sum::<f64>() * dx;
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).abs());
            }
        }
        worst
    }
}

struct Tridiag {
    diag: Vec<f64>,
    off: f64,
}

fn hamiltonian(guide: &GuideSpec, species: &AtomSpecies, grid: &Grid1d) -> Tridiag {
    let dx = grid.dx();
    let t = HBAR * HBAR / (2.0 * species.mass * dx * dx);
    let diag = (0..grid.n)
        .map(|i| 2.0 * t + transverse_profile(guide, grid.x(i)))
        .collect();
    Tridiag { diag, off: -t }
}

/// Number of eigenvalues strictly below `lambda` (Sturm sequence).
fn sturm_count(h: &Tridiag, lambda: f64) -> usize {
    let off2 = h.off * h.off;
    let mut count = 0usize;
    let mut q = h.diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..h.diag.len() {
        if q == 0.0 {
            q = 1e-300;
        }
        q = h.diag[i] - lambda - off2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Absolute eigenvalue of index `k` (0-based) by bisection.
fn eigenvalue(h: &Tridiag, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(h, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * (lo.abs() + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Tridiagonal solve of `(H - lambda) y = rhs` with partial pivoting
/// (the matrix is nearly singular by construction).
fn shifted_solve(h: &Tridiag, lambda: f64, rhs: &mut Vec<f64>) {
    let n = h.diag.len();
    let e = h.off;
    let mut a = vec![0.0; n]; // sub
    let mut b: Vec<f64> = h.diag.iter().map(|d| d - lambda).collect();
    let mut c = vec![e; n]; // super
    let mut c2 = vec![0.0; n]; // second super (fill-in from pivoting)
    for i in 0..n - 1 {
        a[i + 1] = e;
        // pivot between rows i and i+1
        if a[i + 1].abs() > b[i].abs() {
            rhs.swap(i, i + 1);
            std::mem::swap(&mut b[i], &mut a[i + 1]);
            let t = c[i];
            c[i] = b[i + 1];
            b[i + 1] = t;
            if i + 2 < n {
                c2[i] = c[i + 1];
                c[i + 1] = 0.0;
            }
        }
        let mut piv = b[i];
        if piv == 0.0 {
            piv = 1e-300;
            b[i] = piv;
        }
        let m = a[i + 1] / piv;
        b[i + 1] -= m * c[i];
        if i + 2 < n {
            c[i + 1] -= m * c2[i];
        }
        rhs[i + 1] -= m * rhs[i];
    }
    // back substitution
    if b[n - 1] == 0.0 {
        b[n - 1] = 1e-300;
    }
    rhs[n - 1] /= b[n - 1];
    if n >= 2 {
        let mut piv = b[n - 2];
        if piv == 0.0 {
            piv = 1e-300;
        }
        rhs[n - 2] = (rhs[n - 2] - c[n - 2] * rhs[n - 1]) / piv;
    }
    for i in (0..n.saturating_sub(2)).rev() {
        let mut piv = b[i];
        if piv == 0.0 {
            piv = 1e-300;
        }
        rhs[i] = (rhs[i] - c[i] * rhs[i + 1] - c2[i] * rhs[i + 2]) / piv;
    }
}

fn inverse_iteration(h: &Tridiag, lambda: f64, dx: f64) -> Vec<f64> {
    let n = h.diag.len();
    // deterministic start with broad spectral content
    let mut y: Vec<f64> = (0..n)
        .map(|i| {
            let u = (i as f64 + 0.7) / n as f64;
            (7.3 * u).sin() + 0.37 * (41.0 * u + 1.1).sin()
        })
        .collect();
    for _ in 0..3 {
        shifted_solve(h, lambda, &mut y);
        let norm = (y.iter().map(|v| v * v).sum::<f64>() * dx).sqrt();
        let s = 1.0 / norm;
        y.iter_mut().for_each(|v| *v *= s);
    }
    // sign convention: largest-magnitude component positive
    let mut peak = 0.0f64;
    let mut sign = 1.0;
    for &v in &y {
        if v.abs() > peak {
            peak = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        y.iter_mut().for_each(|v| *v *= sign);
    }
    y
}

/// Residual ‖H chi - lambda_abs chi‖ (discrete L²) for a normalized state.
pub fn hamiltonian_residual(
    guide: &GuideSpec,
    species: &AtomSpecies,
    grid: &Grid1d,
    state: &[f64],
    energy_from_bottom: f64,
) -> f64 {
    let h = hamiltonian(guide, species, grid);
    let lambda = energy_from_bottom - guide.depth;
    let n = grid.n;
    let mut acc = 0.0;
    for i in 0..n {
        let mut v = (h.diag[i] - lambda) * state[i];
        if i > 0 {
            v += h.off * state[i - 1];
        }
        if i + 1 < n {
            v += h.off * state[i + 1];
        }
        acc += v * v;
    }
    (acc * grid.dx()).sqrt()
}

/// Total number of bound states (absolute energy below zero).
pub fn count_bound_states(guide: &GuideSpec, species: &AtomSpecies, grid: &Grid1d) -> usize {
    let h = hamiltonian(guide, species, grid);
    sturm_count(&h, 0.0)
}

/// Highest state index the grid can represent with at least four points per
/// local de Broglie wavelength at the well bottom.
pub fn resolvable_bound_states(guide: &GuideSpec, species: &AtomSpecies, grid: &Grid1d) -> usize {
    let k_grid = std::f64::consts::PI / grid.dx() / 2.0; // quarter-wavelength rule
    let e_res = (HBAR * k_grid).powi(2) / (2.0 * species.mass);
    if e_res >= guide.depth {
        usize::MAX
    } else {
        // semiclassical count below e_res
        let count = wkb_count_below(guide, species, e_res);
        count as usize
    }
}

/// Phase-space estimate of the number of states below `energy` (from the
/// bottom), by midpoint quadrature of the classical action.
fn wkb_count_below(guide: &GuideSpec, species: &AtomSpecies, energy: f64) -> f64 {
    let l = guide.half_width;
    let n = 20_000;
    let dx = 2.0 * l / n as f64;
    let mut action = 0.0;
    for i in 0..n {
        let x = -l + (i as f64 + 0.5) * dx;
        let v = transverse_profile(guide, x) + guide.depth; // from bottom
        if v < energy {
            action += (2.0 * species.mass * (energy - v)).sqrt() * dx;
        }
    }
    action / (std::f64::consts::PI * HBAR)
}

#[derive(Clone, Debug)]
pub enum StateSelection {
    Lowest(usize),
    Indices(Vec<usize>),
    All,
}

/// Solve for bound states of the guide's transverse well.
///
/// Errors when an requested index is not bound on this grid, or when the grid
/// is too coarse to resolve it (the error carries the resolvable count).
pub fn solve_bound_states(
    guide: &GuideSpec,
    species: &AtomSpecies,
    grid: &Grid1d,
    selection: StateSelection,
) -> Result<BoundStateSet> {
    if grid.min > -guide.half_width || grid.max < guide.half_width {
        return Err(Error::Grid(format!(
            "grid [{:.3e}, {:.3e}] does not cover the well window ±{:.3e}",
            grid.min, grid.max, guide.half_width
        )));
    }
    let h = hamiltonian(guide, species, grid);
    let total = sturm_count(&h, 0.0);
    let indices: Vec<usize> = match selection {
        StateSelection::Lowest(k) => (0..k.min(total)).collect(),
        StateSelection::Indices(mut v) => {
            v.sort_unstable();
            v.dedup();
            v
        }
        StateSelection::All => (0..total).collect(),
    };
    if let Some(&max) = indices.iter().max() {
        if max >= total {
            return Err(Error::Domain(format!(
                "state {max} requested but only {total} bound states exist"
            )));
        }
        let resolvable = resolvable_bound_states(guide, species, grid);
        if max >= resolvable {
            return Err(Error::Grid(format!(
                "grid resolves about {resolvable} of {total} bound states; state {max} requested"
            )));
        }
    }
    let dx = grid.dx();
    let mut energies = Vec::with_capacity(indices.len());
    let mut states = Vec::with_capacity(indices.len());
    for &k in &indices {
        let lambda = eigenvalue(&h, k, -guide.depth, 0.0);
        energies.push(lambda + guide.depth);
        states.push(inverse_iteration(&h, lambda, dx));
    }
    Ok(BoundStateSet {
        grid: *grid,
        depth: guide.depth,
        indices,
        energies,
        states,
        total_bound: total,
    })
}

/// Energies (from the bottom) of every bound state, by inverting the
/// eigenvalue-count function on an energy mesh. Accurate to a fraction of the
/// mesh bin; intended for thermal weights, not for spectroscopy.
pub fn all_bound_energies(
    guide: &GuideSpec,
    species: &AtomSpecies,
    grid: &Grid1d,
    mesh: usize,
) -> Vec<f64> {
    let h = hamiltonian(guide, species, grid);
    let total = sturm_count(&h, 0.0);
    if total == 0 {
        return Vec::new();
    }
    let mesh = mesh.max(16);
    let counts: Vec<(f64, usize)> = (0..=mesh)
        .map(|j| {
            let lambda = -guide.depth + guide.depth * j as f64 / mesh as f64;
            (lambda, sturm_count(&h, lambda))
        })
        .collect();
    let mut energies = Vec::with_capacity(total);
    let mut bin = 0usize;
    for v in 0..total {
        while counts[bin + 1].1 <= v {
            bin += 1;
        }
        let (e0, c0) = counts[bin];
        let (e1, c1) = counts[bin + 1];
        let frac = (v as f64 - c0 as f64 + 0.5) / (c1 - c0) as f64;
        energies.push(e0 + frac * (e1 - e0) + guide.depth);
    }
    energies
}

/// Lowest `k` states by imaginary-time relaxation with Gram-Schmidt
/// deflation. Slower than the tridiagonal route; used as a cross-check.
pub fn imaginary_time_lowest(
    guide: &GuideSpec,
    species: &AtomSpecies,
    grid: &Grid1d,
    k: usize,
    tol: f64,
) -> Result<BoundStateSet> {
    let g = *guide;
    let pot = FnPotential1d(move |x: f64, _| transverse_profile(&g, x));
    let mut stepper = Stepper1d::new(*grid, species.mass);
    let omega = guide.bottom_frequency(species);
    let dt = 0.01 / omega.max(1.0);
    let mut states: Vec<Vec<f64>> = Vec::new();
    let mut energies = Vec::new();
    let dx = grid.dx();
    for v in 0..k {
        // seed with the harmonic state shape of matching parity
        let a_ho = (HBAR / (species.mass * omega)).sqrt();
        let mut seed = Field1d::gaussian(*grid, 0.0, (1.0 + v as f64) * a_ho, 0.0);
        if v % 2 == 1 {
            for (i, a) in seed.amp.iter_mut().enumerate() {
                *a *= grid.x(i) / a_ho;
            }
        }
        let mut field = seed;
        field.normalize();
        let mut last = f64::INFINITY;
        let mut energy = f64::INFINITY;
        for it in 0..200_000 {
            stepper.split_step(&mut field, &pot, 0.0, dt, TimeAxis::Imaginary);
            // deflate converged lower states
            for s in &states {
                let overlap: Complex64 =
                    field.amp.iter().zip(s).map(|(a, &x)| a * x).sum::<Complex64>() * dx;
                for (a, &x) in field.amp.iter_mut().zip(s) {
                    *a -= overlap * x;
                }
            }
            field.normalize();
            if it % 16 == 15 {
                energy = stepper.energy(&field, &pot, 0.0);
                if (last - energy).abs() < tol * energy.abs().max(1e-32) {
                    break;
                }
                last = energy;
            }
        }
        energies.push(energy + guide.depth);
        states.push(field.amp.iter().map(|a| a.re).collect());
    }
    Ok(BoundStateSet {
        grid: *grid,
        depth: guide.depth,
        indices: (0..k).collect(),
        energies,
        states,
        total_bound: count_bound_states(guide, species, grid),
    })
}

/// How a propagated field maps onto the transverse axis of a guide before
/// projection: `x' = (x - center) * rotation_cos - offset`, with the phase
/// `exp(i boost x')` removed.
///
/// [`ProjectionFrame::comoving`] measures `offset` and `boost` from the
/// windowed field itself, which makes the projection the internal vibrational
/// distribution of the captured packet (its classical riding motion removed).
#[derive(Clone, Copy, Debug, Default)]
pub struct ProjectionFrame {
    pub center: f64,
    pub rotation_cos: f64,
    pub offset: f64,
    pub boost: f64,
}

impl ProjectionFrame {
    pub fn identity() -> Self {
        Self {
            center: 0.0,
            rotation_cos: 1.0,
            offset: 0.0,
            boost: 0.0,
        }
    }

    /// Frame that removes the centroid and mean wavenumber of the part of
    /// `field` inside the window `|x'| <= half_width`.
    pub fn comoving(field: &Field1d, center: f64, rotation_cos: f64, half_width: f64) -> Self {
        let grid = field.grid;
        let dx = grid.dx();
        let mut w_norm = 0.0;
        let mut x_mean = 0.0;
        let mut corr = Complex64::ZERO;
        for i in 0..grid.n - 1 {
            let u = (grid.x(i) - center) * rotation_cos;
            if u.abs() <= half_width {
                let w = field.amp[i].norm_sqr();
                w_norm += w;
                x_mean += w * u;
                corr += field.amp[i].conj() * field.amp[i + 1];
            }
        }
        if w_norm == 0.0 {
            return Self {
                center,
                rotation_cos,
                offset: 0.0,
                boost: 0.0,
            };
        }
        // lag-one phase slope in x, converted to the x' axis
        let k_mean = if corr.norm_sqr() > 0.0 { corr.arg() / dx } else { 0.0 };
        Self {
            center,
            rotation_cos,
            offset: x_mean / w_norm,
            boost: k_mean / rotation_cos,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Projection {
    /// p_v for every materialized basis state, in basis order.
    pub populations: Vec<f64>,
    pub total: f64,
    /// 1 - total: unbound or escaped fraction (plus truncation remainder).
    pub deficit: f64,
    /// Set when the basis grid had to be interpolated onto the field grid.
    pub resampled: bool,
}

/// Populations |<chi_v | psi>|² in the projection frame.
pub fn project_onto_states(
    field: &Field1d,
    basis: &BoundStateSet,
    frame: &ProjectionFrame,
) -> Projection {
    let grid = field.grid;
    let dx = grid.dx();
    let bgrid = basis.grid;
    let bdx = bgrid.dx();
    let c = frame.rotation_cos;
    let scale = c.abs().sqrt();
    // detect whether the map is a pure index shift on an identical grid
    let resampled = (c - 1.0).abs() > 1e-12
        || (bdx - dx).abs() > 1e-12 * dx
        || frame.offset != 0.0
        || ((grid.min - frame.center - bgrid.min) / dx).fract().abs() > 1e-9;

    let mut populations = Vec::with_capacity(basis.states.len());
    for chi in &basis.states {
        let mut acc = Complex64::ZERO;
        for i in 0..grid.n {
            let u = (grid.x(i) - frame.center) * c - frame.offset;
            // linear interpolation of chi at u
            let pos = (u - bgrid.min) / bdx - 0.5;
            if pos < 0.0 || pos > (bgrid.n - 1) as f64 {
                continue;
            }
            let j = pos.floor() as usize;
            let frac = pos - j as f64;
            let chi_u = if j + 1 < bgrid.n {
                chi[j] * (1.0 - frac) + chi[j + 1] * frac
            } else {
                chi[j]
            };
            if chi_u != 0.0 {
                let phase = Complex64::from_polar(1.0, -frame.boost * u);
                acc += scale * chi_u * phase * field.amp[i];
            }
        }
        populations.push((acc * dx).norm_sqr());
    }
    let total: f64 = populations.iter().sum();
    Projection {
        populations,
        total,
        deficit: 1.0 - total,
        resampled,
    }
}

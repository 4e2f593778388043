//! Periodic grids on `[−L, L)^n`, grid functions and spectral transforms.
//!
//! Flat indices run with axis 0 fastest. The momentum lattice of a grid is
//! `ζ_k = ħ·θ_k` with wavenumbers `θ_k = 2π k / 2L`, `k` taken in the signed
//! FFT order.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::NumericError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    points: usize,
    half_length: f64,
    hbar: f64,
}

impl Grid {
    pub fn new(
        dim: usize,
        points: usize,
        half_length: f64,
        hbar: f64,
    ) -> Result<Self, NumericError> {
        if !(1..=2).contains(&dim) {
            return Err(NumericError::BadGrid(format!(
                "dimension {dim} not in 1..=2"
            )));
        }
        if points < 4 || !points.is_power_of_two() {
            return Err(NumericError::BadGrid(format!(
                "{points} points per axis is not a power of two ≥ 4"
            )));
        }
        if !(half_length > 0.0 && hbar > 0.0) {
            return Err(NumericError::BadGrid(
                "half-length and ħ must be positive".into(),
            ));
        }
        Ok(Grid {
            dim,
            points,
            half_length,
            hbar,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Same grid at another ħ.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self, NumericError> {
        Grid::new(self.dim, self.points, self.half_length, hbar)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    /// Number of grid points, `points^dim`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis indices of flat index `i`.
    pub fn split(&self, i: usize) -> [usize; 2] {
        [
            i % self.points,
            if self.dim == 2 { i / self.points } else { 0 },
        ]
    }

    pub fn position(&self, i: usize) -> [f64; 2] {
        let s = self.split(i);
        let x = |k: usize| -self.half_length + k as f64 * self.spacing();
        [x(s[0]), if self.dim == 2 { x(s[1]) } else { 0.0 }]
    }

    /// Signed FFT index of per-axis index `k`.
    pub fn signed(&self, k: usize) -> i64 {
        signed(k, self.points)
    }

    /// Wavenumber vector `θ_k` of flat index `k`.
    pub fn wavenumber(&self, k: usize) -> [f64; 2] {
        let s = self.split(k);
        let t = |k: usize| std::f64::consts::PI * self.signed(k) as f64 / self.half_length;
        [t(s[0]), if self.dim == 2 { t(s[1]) } else { 0.0 }]
    }

    /// Momentum `ζ_k = ħ θ_k`.
    pub fn momentum(&self, k: usize) -> [f64; 2] {
        let t = self.wavenumber(k);
        [self.hbar * t[0], self.hbar * t[1]]
    }

    /// Spacing of the momentum lattice.
    pub fn momentum_spacing(&self) -> f64 {
        self.hbar * std::f64::consts::PI / self.half_length
    }

    pub(crate) fn check(&self, o: &Grid) -> Result<(), NumericError> {
        if self == o {
            Ok(())
        } else {
            Err(NumericError::GridMismatch)
        }
    }
}

pub(crate) fn signed(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Forward and inverse plans for one side length, applied along any axis
/// of a cube stored with axis 0 fastest.
#[derive(Clone)]
pub struct Transform {
    side: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Transform {
    pub fn new(side: usize) -> Self {
        let mut planner = FftPlanner::new();
        Transform {
            side,
            fwd: planner.plan_fft_forward(side),
            inv: planner.plan_fft_inverse(side),
        }
    }

    /// Unnormalized DFT along `axis` (`e^{−2πi jk/N}` forward); the inverse
    /// includes the `1/N` factor.
    pub fn along(&self, buf: &mut [C64], ndim: usize, axis: usize, inverse: bool) {
        let n = self.side;
        debug_assert_eq!(buf.len(), n.pow(ndim as u32));
        let plan = if inverse { &self.inv } else { &self.fwd };
        if axis == 0 {
            plan.process(buf);
        } else {
            let stride = n.pow(axis as u32);
            let block = stride * n;
            let mut lines = vec![C64::new(0.0, 0.0); buf.len()];
            let mut l = 0;
            for b in (0..buf.len()).step_by(block) {
                for s in 0..stride {
                    for j in 0..n {
                        lines[l * n + j] = buf[b + s + j * stride];
                    }
                    l += 1;
                }
            }
            plan.process(&mut lines);
            l = 0;
            for b in (0..buf.len()).step_by(block) {
                for s in 0..stride {
                    for j in 0..n {
                        buf[b + s + j * stride] = lines[l * n + j];
                    }
                    l += 1;
                }
            }
        }
        if inverse {
            let w = 1.0 / n as f64;
            buf.iter_mut().for_each(|z| *z *= w);
        }
    }

    pub fn all(&self, buf: &mut [C64], ndim: usize, inverse: bool) {
        for a in 0..ndim {
            self.along(buf, ndim, a, inverse);
        }
    }
}

/// Complex samples of a function on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> C64) -> Self {
        let values = (0..grid.len())
            .map(|i| f(&grid.position(i)[..grid.dim()]))
            .collect();
        GridFunction {
            grid: *grid,
            values,
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<C64>) -> Result<Self, NumericError> {
        if values.len() != grid.len() {
            return Err(NumericError::GridMismatch);
        }
        Ok(GridFunction {
            grid: *grid,
            values,
        })
    }

    pub fn zero(grid: &Grid) -> Self {
        GridFunction {
            grid: *grid,
            values: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    /// `e^{−|x − c|²/2}`.
    pub fn gaussian(grid: &Grid, center: &[f64]) -> Self {
        GridFunction::from_fn(grid, |x| {
            let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
            C64::new((-r2 / 2.0).exp(), 0.0)
        })
    }

    /// `H_k(x_1 − c_1) e^{−|x − c|²/2}` with the physicists' Hermite polynomial.
    pub fn hermite(grid: &Grid, k: u32, center: &[f64]) -> Self {
        let g = GridFunction::gaussian(grid, center);
        let mut out = g.clone();
        for (i, v) in out.values.iter_mut().enumerate() {
            *v *= hermite(k, grid.position(i)[0] - center[0]);
        }
        out
    }

    /// Fixed probe set: shifted Gaussians and Hermite-windowed variants.
    pub fn probes(grid: &Grid) -> Vec<GridFunction> {
        let n = grid.dim();
        let c = |a: f64, b: f64| [a, b][..n].to_vec();
        vec![
            GridFunction::gaussian(grid, &c(0.0, 0.0)),
            GridFunction::gaussian(grid, &c(0.7, -0.4)),
            GridFunction::hermite(grid, 1, &c(-0.5, 0.3)),
            GridFunction::hermite(grid, 3, &c(0.2, 0.0)),
        ]
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn sub(&self, o: &GridFunction) -> Result<GridFunction, NumericError> {
        self.grid.check(&o.grid)?;
        Ok(GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&o.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add(&self, o: &GridFunction) -> Result<GridFunction, NumericError> {
        self.grid.check(&o.grid)?;
        Ok(GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&o.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: C64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete `L²` norm `(hⁿ Σ|u|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        (self.cell() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `⟨self, o⟩ = hⁿ Σ conj(self)·o`.
    pub fn inner(&self, o: &GridFunction) -> Result<C64, NumericError> {
        self.grid.check(&o.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.cell())
    }

    fn cell(&self) -> f64 {
        self.grid.spacing().powi(self.grid.dim() as i32)
    }

    /// Spectral `∂^α`; odd orders drop the Nyquist mode.
    pub fn derivative(&self, alpha: &[u32]) -> GridFunction {
        if alpha.iter().all(|a| *a == 0) {
            return self.clone();
        }
        let g = &self.grid;
        let t = Transform::new(g.points());
        let mut buf = self.values.clone();
        t.all(&mut buf, g.dim(), false);
        // Krasny filter: modes at roundoff level would only be amplified.
        let floor = KRASNY * buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (k, z) in buf.iter_mut().enumerate() {
            *z = if z.norm() < floor {
                C64::new(0.0, 0.0)
            } else {
                *z * spectral_factor(g, k, alpha)
            };
        }
        t.all(&mut buf, g.dim(), true);
        GridFunction {
            grid: *g,
            values: buf,
        }
    }
}

/// Relative size below which Fourier modes are treated as roundoff.
pub(crate) const KRASNY: f64 = 1e-14;

/// Multiplier `Π (iθ_a)^{α_a}` of `∂^α` at flat wavenumber index `k`.
pub(crate) fn spectral_factor(g: &Grid, k: usize, alpha: &[u32]) -> C64 {
    let th = g.wavenumber(k);
    let s = g.split(k);
    let mut f = C64::new(1.0, 0.0);
    for (a, &e) in alpha.iter().enumerate().take(g.dim()) {
        if e == 0 {
            continue;
        }
        if e % 2 == 1 && s[a] == g.points() / 2 {
            return C64::new(0.0, 0.0);
        }
        f *= C64::new(0.0, th[a]).powu(e);
    }
    f
}

fn hermite(k: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if k == 0 {
        return h0;
    }
    for n in 1..k {
        let h2 = 2.0 * x * h1 - 2.0 * n as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

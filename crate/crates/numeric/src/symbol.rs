//! Symbols sampled on `grid × momentum lattice`.
//!
//! Samples form a `2n`-dimensional cube with the position axes first:
//! entry `k·Q + i` holds `a(x_i, ζ_k)` where `Q` is the number of grid
//! points. Both directions are treated as periodic, so spectral operations
//! are only accurate for symbols that decay towards the edges of the box in
//! `q` and of the lattice in `ζ`.

use std::fmt;
use std::sync::Arc;

use fiberstar::exec::Exec;
use fiberstar::field::WindowedSymbol;
use num_complex::Complex64 as C64;

use crate::compiled::Windowed;
use crate::grid::{signed, Grid, Transform};
use crate::NumericError;

/// Closed-form symbol `(q, ζ) ↦ a(q, ζ)`.
pub type SymbolFn = Arc<dyn Fn(&[f64], &[f64]) -> C64 + Send + Sync>;

#[derive(Clone)]
pub struct GridSymbol {
    grid: Grid,
    order: f64,
    data: Vec<C64>,
    analytic: Option<SymbolFn>,
}

impl fmt::Debug for GridSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSymbol")
            .field("grid", &self.grid)
            .field("order", &self.order)
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

impl GridSymbol {
    /// Samples `f`; `order` is the declared Hörmander order `m`.
    pub fn from_fn(grid: &Grid, order: f64, f: SymbolFn) -> Self {
        let q = grid.len();
        let n = grid.dim();
        let rows = Exec::default().map_range(q, |k| {
            let z = grid.momentum(k);
            (0..q)
                .map(|i| f(&grid.position(i)[..n], &z[..n]))
                .collect::<Vec<_>>()
        });
        GridSymbol {
            grid: *grid,
            order,
            data: rows.concat(),
            analytic: Some(f),
        }
    }

    /// Exact windowed symbol with `λ = ħ`.
    pub fn from_windowed(grid: &Grid, w: &WindowedSymbol, order: f64) -> Self {
        let c = Windowed::at_lambda(w, grid.hbar());
        GridSymbol::from_fn(grid, order, Arc::new(move |q, p| c.eval(q, p)))
    }

    pub fn from_samples(grid: &Grid, order: f64, data: Vec<C64>) -> Result<Self, NumericError> {
        if data.len() != grid.len() * grid.len() {
            return Err(NumericError::GridMismatch);
        }
        Ok(GridSymbol {
            grid: *grid,
            order,
            data,
            analytic: None,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn analytic(&self) -> Option<&SymbolFn> {
        self.analytic.as_ref()
    }

    /// `a(x_i, ζ_k)`.
    pub fn value(&self, i: usize, k: usize) -> C64 {
        self.data[k * self.grid.len() + i]
    }

    fn with_data(&self, data: Vec<C64>, order: f64) -> Self {
        GridSymbol {
            grid: self.grid,
            order,
            data,
            analytic: None,
        }
    }

    pub fn add(&self, o: &GridSymbol) -> Result<GridSymbol, NumericError> {
        self.grid.check(&o.grid)?;
        Ok(self.with_data(
            self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
            self.order.max(o.order),
        ))
    }

    pub fn mul(&self, o: &GridSymbol) -> Result<GridSymbol, NumericError> {
        self.grid.check(&o.grid)?;
        Ok(self.with_data(
            self.data.iter().zip(&o.data).map(|(a, b)| a * b).collect(),
            self.order + o.order,
        ))
    }

    pub fn scale(&self, c: C64) -> GridSymbol {
        GridSymbol {
            data: self.data.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn ndim(&self) -> usize {
        2 * self.grid.dim()
    }

    /// Conjugate wavenumbers along axis `axis` of the sample cube at index `j`.
    fn axis_wavenumber(&self, axis: usize, j: usize) -> f64 {
        let g = &self.grid;
        let n = g.points();
        let period = if axis < g.dim() {
            2.0 * g.half_length()
        } else {
            n as f64 * g.momentum_spacing()
        };
        2.0 * std::f64::consts::PI * signed(j, n) as f64 / period
    }

    fn axis_index(&self, idx: usize, axis: usize) -> usize {
        (idx / self.grid.points().pow(axis as u32)) % self.grid.points()
    }

    /// Spectral transform of the samples along the given axes, pointwise
    /// multiplier, and back.
    fn spectral(&self, axes: &[usize], factor: impl Fn(&[f64]) -> C64) -> Vec<C64> {
        let t = Transform::new(self.grid.points());
        let nd = self.ndim();
        let mut buf = self.data.clone();
        for &a in axes {
            t.along(&mut buf, nd, a, false);
        }
        let mut th = [0.0; 4];
        for (idx, z) in buf.iter_mut().enumerate() {
            for (a, slot) in th.iter_mut().enumerate().take(nd) {
                *slot = if axes.contains(&a) {
                    self.axis_wavenumber(a, self.axis_index(idx, a))
                } else {
                    0.0
                };
            }
            *z *= factor(&th[..nd]);
        }
        for &a in axes {
            t.along(&mut buf, nd, a, true);
        }
        buf
    }

    /// `∂_q^α ∂_ζ^β a` by spectral differentiation; odd orders drop the
    /// Nyquist mode.
    pub fn derivative(&self, alpha: &[u32], beta: &[u32]) -> GridSymbol {
        let n = self.grid.dim();
        let mut orders = [0u32; 4];
        for j in 0..n {
            orders[j] = alpha.get(j).copied().unwrap_or(0);
            orders[n + j] = beta.get(j).copied().unwrap_or(0);
        }
        let axes: Vec<usize> = (0..2 * n).filter(|a| orders[*a] > 0).collect();
        if axes.is_empty() {
            return self.clone();
        }
        let nyq = std::f64::consts::PI * self.grid.points() as f64;
        let data = self.spectral(&axes, |th| {
            let mut f = C64::new(1.0, 0.0);
            for &a in &axes {
                let e = orders[a];
                let period = if a < n {
                    2.0 * self.grid.half_length()
                } else {
                    self.grid.points() as f64 * self.grid.momentum_spacing()
                };
                if e % 2 == 1 && (th[a] * period + nyq).abs() < 1e-9 * nyq {
                    return C64::new(0.0, 0.0);
                }
                f *= C64::new(0.0, th[a]).powu(e);
            }
            f
        });
        let lost: u32 = orders[n..2 * n].iter().sum();
        self.with_data(data, self.order - lost as f64)
    }

    /// Seminorm `sup |∂_q^α ∂_ζ^β a| (1 + |ζ|²)^{−(m − |β|)/2}` over the
    /// lattice; finite values for every `(α, β)` are the sampled symbol
    /// estimate for order `m`.
    pub fn hormander_seminorm(&self, alpha: &[u32], beta: &[u32]) -> f64 {
        let d = self.derivative(alpha, beta);
        let q = self.grid.len();
        let weight = self.order - beta.iter().sum::<u32>() as f64;
        let n = self.grid.dim();
        let mut sup: f64 = 0.0;
        for (idx, v) in d.data.iter().enumerate() {
            let z = self.grid.momentum(idx / q);
            let r2: f64 = z[..n].iter().map(|x| x * x).sum();
            sup = sup.max(v.norm() * (1.0 + r2).powf(-weight / 2.0));
        }
        sup
    }
}

/// `N_κ^{±1} = exp(∓iκħΔ)` with `Δ = Σ ∂_{q_j} ∂_{ζ_j}`, realized as a
/// shift in the doubly transformed samples.
pub fn n_op_apply(a: &GridSymbol, kappa: f64, direction: i32) -> GridSymbol {
    let n = a.grid.dim();
    let s = direction.signum() as f64 * kappa * a.grid.hbar();
    let axes: Vec<usize> = (0..2 * n).collect();
    // Δ ↦ −Σ θ_j η_j, so exp(−isħκΔ) ↦ exp(isħκ Σ θ_j η_j).
    let data = a.spectral(&axes, |th| {
        let dot: f64 = (0..n).map(|j| th[j] * th[n + j]).sum();
        C64::from_polar(1.0, s * dot)
    });
    a.with_data(data, a.order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fiberstar::expr::parse_symbol;
    use fiberstar::scalars::rat;
    use fiberstar::starcore::StarContext;

    fn gauss_grid(points: usize, hbar: f64) -> Grid {
        Grid::new(1, points, 8.0, hbar).unwrap()
    }

    fn windowed(amp: &str, order: i32) -> WindowedSymbol {
        WindowedSymbol::new(
            parse_symbol(amp, 1).unwrap(),
            parse_symbol("(1/2)*q1^2 + (1/2)*p1^2", 1).unwrap(),
            order,
        )
    }

    #[test]
    fn spectral_derivatives_match_closed_form() {
        let g = gauss_grid(128, 0.5);
        let a = GridSymbol::from_windowed(&g, &windowed("q1 + p1^2", 6), 0.0);
        let da = a.derivative(&[1], &[0]);
        let db = a.derivative(&[0], &[1]);
        let exact_q = GridSymbol::from_windowed(&g, &windowed("1 - q1^2 - q1*p1^2", 6), 0.0);
        let exact_p = GridSymbol::from_windowed(&g, &windowed("2*p1 - q1*p1 - p1^3", 6), 0.0);
        let err = |x: &GridSymbol, y: &GridSymbol| {
            x.data()
                .iter()
                .zip(y.data())
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max)
        };
        assert!(err(&da, &exact_q) < 1e-10);
        assert!(err(&db, &exact_p) < 1e-10);
        assert_eq!(db.order(), -1.0);
    }

    #[test]
    fn n_operator_matches_formal_taylor_series() {
        // exp(−iκħΔ) on a windowed symbol against the exact layer through λ^10.
        let hbar = 0.2;
        let g = gauss_grid(256, hbar);
        let w = windowed("q1*p1", 10);
        let a = GridSymbol::from_windowed(&g, &w, 0.0);
        for kappa in [rat(1, 2), rat(1, 4)] {
            let ctx = StarContext::flat(1)
                .with_kappa(kappa.clone())
                .unwrap()
                .with_order(10);
            let formal = GridSymbol::from_windowed(&g, &ctx.n_kappa(&w, 1), 0.0);
            let k = crate::rat_f64(&kappa);
            let num = n_op_apply(&a, k, 1);
            let err = num
                .data()
                .iter()
                .zip(formal.data())
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "κ = {kappa}: {err}");
            let back = n_op_apply(&num, k, -1);
            let err = back
                .data()
                .iter()
                .zip(a.data())
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn base_functions_are_unchanged() {
        let g = gauss_grid(64, 0.3);
        let a = GridSymbol::from_fn(
            &g,
            0.0,
            Arc::new(|q: &[f64], _: &[f64]| C64::new((-q[0] * q[0]).exp(), 0.0)),
        );
        let b = n_op_apply(&a, 0.5, 1);
        assert!(b
            .data()
            .iter()
            .zip(a.data())
            .all(|(u, v)| (u - v).norm() < 1e-13));
    }

    #[test]
    fn symbol_estimates_are_finite() {
        let g = gauss_grid(64, 0.5);
        let a = GridSymbol::from_windowed(&g, &windowed("1 + p1", 4), 0.0);
        for (al, be) in [([0], [0]), ([1], [0]), ([0], [2]), ([2], [1])] {
            let s = a.hormander_seminorm(&al, &be);
            assert!(s.is_finite() && s < 10.0);
        }
    }
}

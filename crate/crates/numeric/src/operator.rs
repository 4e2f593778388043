//! κ-ordered quantization `Op_{ħ,κ}(a)` on a grid.
//!
//! `(Op(a)u)(x) = (2πħ)^{-n} ∬ e^{−(i/ħ)⟨ζ,v⟩} a(x + κv, ζ) T(x, x+v) u(x+v) dv dζ`
//! with `T` the connection phase `e^{(i/ħ)∫A}` along the segment (trivial
//! without a potential). Three discretizations are provided:
//!
//! * sampled symbols use a mode split: `a` is expanded in position modes
//!   `e^{iθ·z}`, and each mode turns into a modulated Fourier multiplier;
//! * polynomial symbols use exact spectral stencils for `ζ^β` on a doubled
//!   lattice, with the function extended by zero outside the box;
//! * small grids can build the full kernel matrix from a closed-form symbol.
//!
//! The first and third are periodic; the second is the whole-space operator
//! restricted to functions supported in the box.

use fiberstar::exec::Exec;
use fiberstar::poly::{PhaseSymbol, MAX_DIM};
use fiberstar::starcore::FormalOneForm;
use num_complex::Complex64 as C64;

use crate::compiled::Poly;
use crate::grid::{signed, Grid, GridFunction, Transform};
use crate::symbol::GridSymbol;
use crate::NumericError;

/// Largest grid (total points) for which a dense kernel is built.
pub const DENSE_MAX: usize = 256;

/// Modes of the position expansion below this fraction of the largest one
/// are dropped.
const MODE_CUTOFF: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct GridOperator {
    grid: Grid,
    kind: Kind,
    exec: Exec,
}

#[derive(Clone, Debug)]
enum Kind {
    Modes { kappa: f64, modes: Vec<Mode> },
    Fiberwise(Box<Fiberwise>),
    Dense { matrix: Vec<C64> },
}

#[derive(Clone, Debug)]
struct Mode {
    theta: [f64; 2],
    multiplier: Vec<C64>,
}

#[derive(Clone, Debug)]
struct Fiberwise {
    kappa: f64,
    terms: Vec<([u8; MAX_DIM], Poly)>,
    /// `stencils[b][j]`: kernel of `ζ^b` on one axis of the doubled lattice.
    stencils: Vec<Vec<C64>>,
    /// `A_ħ / ħ`, component by component.
    potential: Option<Vec<Poly>>,
    nodes: Vec<(f64, f64)>,
}

/// Mode-split quantization of a sampled symbol.
pub fn op_quantize(a: &GridSymbol, kappa: f64) -> GridOperator {
    let g = *a.grid();
    let q = g.len();
    let n = g.dim();
    let t = Transform::new(g.points());
    let mut buf = a.data().to_vec();
    for row in buf.chunks_mut(q) {
        t.all(row, n, false);
    }
    let energy: Vec<f64> = (0..q)
        .map(|m| (0..q).map(|k| buf[k * q + m].norm()).fold(0.0, f64::max))
        .collect();
    let top = energy.iter().cloned().fold(0.0, f64::max);
    let modes = (0..q)
        .filter(|&m| energy[m] > MODE_CUTOFF * top)
        .map(|m| Mode {
            theta: g.wavenumber(m),
            multiplier: (0..q).map(|k| buf[k * q + m]).collect(),
        })
        .collect();
    GridOperator {
        grid: g,
        kind: Kind::Modes { kappa, modes },
        exec: Exec::default(),
    }
}

/// Quantization of a polynomial symbol with `λ = ħ`, optionally coupled to
/// a vector potential `A` through the phase `e^{(i/ħ)∫A_ħ}`.
pub fn op_quantize_poly(
    a: &PhaseSymbol,
    grid: &Grid,
    kappa: f64,
    potential: Option<&FormalOneForm>,
) -> Result<GridOperator, NumericError> {
    let n = grid.dim();
    if a.dim() != n {
        return Err(NumericError::Dimension(a.dim()));
    }
    let hbar = grid.hbar();
    let terms: Vec<_> = a
        .p_coeffs()
        .into_iter()
        .map(|(b, c)| (b, Poly::at_lambda(&c, hbar)))
        .collect();
    let max_b = terms
        .iter()
        .flat_map(|(b, _)| b[..n].iter().copied())
        .max()
        .unwrap_or(0) as usize;
    let m = 2 * grid.points();
    let stencils = (0..=max_b)
        .map(|b| stencil(b as u32, m, grid.spacing(), hbar))
        .collect();
    let (potential, nodes) = match potential {
        Some(f) => {
            if f.components().len() != n {
                return Err(NumericError::Dimension(f.components().len()));
            }
            let deg = f
                .components()
                .iter()
                .map(|c| c.q_degree())
                .max()
                .unwrap_or(0) as usize;
            let comps = f
                .components()
                .iter()
                .map(|c| Poly::at_lambda(c, hbar).scaled(1.0 / hbar))
                .collect();
            (Some(comps), gauss_legendre(deg / 2 + 1))
        }
        None => (None, Vec::new()),
    };
    let fw = Fiberwise {
        kappa,
        terms,
        stencils,
        potential,
        nodes,
    };
    Ok(GridOperator {
        grid: *grid,
        kind: Kind::Fiberwise(Box::new(fw)),
        exec: Exec::default(),
    })
}

impl GridOperator {
    /// Full kernel matrix from the closed form of `a`; a cross-check for the
    /// mode split on grids with at most [`DENSE_MAX`] points.
    pub fn dense(a: &GridSymbol, kappa: f64) -> Result<GridOperator, NumericError> {
        let g = *a.grid();
        let q = g.len();
        if q > DENSE_MAX {
            return Err(NumericError::DenseTooLarge {
                max: DENSE_MAX,
                got: q,
            });
        }
        let f = a.analytic().ok_or(NumericError::MissingAnalytic)?;
        let n = g.dim();
        let (np, h) = (g.points() as i64, g.spacing());
        let rows = Exec::default().map_range(q, |i| {
            let (si, xi) = (g.split(i), g.position(i));
            let mut row = vec![C64::new(0.0, 0.0); q];
            for (j, slot) in row.iter_mut().enumerate() {
                let sj = g.split(j);
                let mut d = [0i64; 2];
                let mut z = [0.0; 2];
                for a in 0..n {
                    d[a] = signed(
                        (sj[a] as i64 - si[a] as i64).rem_euclid(np) as usize,
                        np as usize,
                    );
                    z[a] = xi[a] + kappa * d[a] as f64 * h;
                }
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..q {
                    let sk = g.split(k);
                    let ph: f64 = (0..n)
                        .map(|a| signed(sk[a], np as usize) as f64 * d[a] as f64)
                        .sum();
                    let zeta = g.momentum(k);
                    acc += C64::from_polar(1.0, -2.0 * std::f64::consts::PI * ph / np as f64)
                        * f(&z[..n], &zeta[..n]);
                }
                *slot = acc / q as f64;
            }
            row
        });
        Ok(GridOperator {
            grid: g,
            kind: Kind::Dense {
                matrix: rows.concat(),
            },
            exec: Exec::default(),
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction, NumericError> {
        Ok(self.apply_many(std::slice::from_ref(u))?.remove(0))
    }

    /// `Op u` for several functions; the fiberwise kernel is evaluated once
    /// for all of them.
    pub fn apply_many(&self, us: &[GridFunction]) -> Result<Vec<GridFunction>, NumericError> {
        for u in us {
            self.grid.check(u.grid())?;
        }
        let columns: Vec<Vec<C64>> = match &self.kind {
            Kind::Fiberwise(fw) => self.apply_fiberwise(fw, us),
            Kind::Modes { kappa, modes } => us
                .iter()
                .map(|u| self.apply_modes(*kappa, modes, u))
                .collect(),
            Kind::Dense { matrix } => {
                let q = self.grid.len();
                us.iter()
                    .map(|u| {
                        self.exec.map_range(q, |i| {
                            matrix[i * q..(i + 1) * q]
                                .iter()
                                .zip(u.values())
                                .map(|(k, v)| k * v)
                                .sum()
                        })
                    })
                    .collect()
            }
        };
        columns
            .into_iter()
            .map(|v| GridFunction::from_values(&self.grid, v))
            .collect()
    }

    fn apply_modes(&self, kappa: f64, modes: &[Mode], u: &GridFunction) -> Vec<C64> {
        let g = &self.grid;
        let (q, n, l) = (g.len(), g.dim(), g.half_length());
        let t = Transform::new(g.points());
        let parts = self.exec.map(modes, |mode| {
            let dot = |x: [f64; 2]| (0..n).map(|a| mode.theta[a] * x[a]).sum::<f64>();
            let mut w: Vec<C64> = (0..q)
                .map(|j| u.values()[j] * C64::from_polar(1.0, kappa * dot(g.position(j))))
                .collect();
            t.all(&mut w, n, false);
            w.iter_mut()
                .zip(&mode.multiplier)
                .for_each(|(z, m)| *z *= m);
            t.all(&mut w, n, true);
            for (i, z) in w.iter_mut().enumerate() {
                let x = g.position(i);
                let shifted = [(1.0 - kappa) * x[0] + l, (1.0 - kappa) * x[1] + l];
                *z *= C64::from_polar(1.0 / q as f64, dot(shifted));
            }
            w
        });
        let mut out = vec![C64::new(0.0, 0.0); q];
        for p in parts {
            out.iter_mut().zip(p).for_each(|(o, z)| *o += z);
        }
        out
    }

    fn apply_fiberwise(&self, fw: &Fiberwise, us: &[GridFunction]) -> Vec<Vec<C64>> {
        let g = &self.grid;
        let (q, n, np) = (g.len(), g.dim(), g.points() as i64);
        let m = 2 * np;
        let zero = C64::new(0.0, 0.0);
        let support: Vec<usize> = (0..q)
            .filter(|&j| us.iter().any(|u| u.values()[j] != zero))
            .collect();
        let rows = self.exec.map_range(q, |i| {
            let (si, xi) = (g.split(i), g.position(i));
            let mut acc = vec![zero; us.len()];
            let mut z = [0.0; 2];
            let mut v = [0.0; 2];
            for &j in &support {
                let (sj, xj) = (g.split(j), g.position(j));
                let mut idx = [0usize; 2];
                for a in 0..n {
                    idx[a] = (sj[a] as i64 - si[a] as i64).rem_euclid(m) as usize;
                    v[a] = xj[a] - xi[a];
                    z[a] = xi[a] + fw.kappa * v[a];
                }
                let mut k = zero;
                for (b, c) in &fw.terms {
                    let mut s = fw.stencils[b[0] as usize][idx[0]];
                    if n == 2 {
                        s *= fw.stencils[b[1] as usize][idx[1]];
                    }
                    if s != zero {
                        k += s * c.eval(&z[..n], &[]);
                    }
                }
                if k == zero {
                    continue;
                }
                if let Some(a) = &fw.potential {
                    let mut phi = zero;
                    for &(t, w) in &fw.nodes {
                        let y = [xi[0] + t * v[0], xi[1] + t * v[1]];
                        for (c, comp) in a.iter().enumerate() {
                            phi += comp.eval(&y[..n], &[]) * (w * v[c]);
                        }
                    }
                    k *= (C64::i() * phi).exp();
                }
                for (o, u) in acc.iter_mut().zip(us) {
                    *o += k * u.values()[j];
                }
            }
            acc
        });
        (0..us.len())
            .map(|c| rows.iter().map(|r| r[c]).collect())
            .collect()
    }
}

/// Kernel `s(k) = m⁻¹ Σ_j (ħθ_j)^b e^{−2πijk/m}` of `ζ^b` on a periodic
/// lattice of `m` points, the Nyquist mode dropped for odd `b`.
fn stencil(b: u32, m: usize, h: f64, hbar: f64) -> Vec<C64> {
    let t = Transform::new(m);
    let mut s: Vec<C64> = (0..m)
        .map(|k| {
            if b % 2 == 1 && k == m / 2 {
                return C64::new(0.0, 0.0);
            }
            C64::new(
                (hbar * 2.0 * std::f64::consts::PI * signed(k, m) as f64 / (m as f64 * h))
                    .powi(b as i32),
                0.0,
            )
        })
        .collect();
    t.along(&mut s, 1, 0, false);
    s.iter_mut().for_each(|z| *z /= m as f64);
    s
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre(k: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push(((1.0 - x) / 2.0, 1.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

//! Phase-space integrals of star commutators.

use fiberstar::exec::Exec;
use fiberstar::field::{PhaseField, WindowedSymbol};
use fiberstar::starcore::StarContext;
use num_complex::Complex64 as C64;

use crate::compiled::Windowed;
use crate::NumericError;

/// Trapezoid rule on `[−L, L)^{2n}` for Gaussian-windowed integrands.
#[derive(Clone, Copy, Debug)]
pub struct PhaseQuadrature {
    pub points: usize,
    pub half_length: f64,
    pub exec: Exec,
}

impl Default for PhaseQuadrature {
    fn default() -> Self {
        PhaseQuadrature {
            points: 32,
            half_length: 6.0,
            exec: Exec::default(),
        }
    }
}

impl PhaseQuadrature {
    fn node(&self, i: usize) -> f64 {
        -self.half_length + i as f64 * self.step()
    }

    fn step(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    fn point(&self, mut idx: usize, n: usize) -> [f64; 2] {
        let mut x = [0.0; 2];
        for slot in x.iter_mut().take(n) {
            *slot = self.node(idx % self.points);
            idx /= self.points;
        }
        x
    }

    /// `∫ w dq dp` for each λ-power `lo..=hi`.
    pub fn integrate(&self, w: &WindowedSymbol, lo: i32, hi: i32) -> Vec<C64> {
        let c = Windowed::by_order(w, lo, hi);
        let n = w.dim();
        let len = (hi - lo + 1).max(0) as usize;
        let m = self.points;
        let cube = m.pow(n as u32);
        // Outer sweep over q; each row collapses the amplitudes to p alone.
        let rows = self.exec.map_range(cube, |i| {
            let mut acc = vec![C64::new(0.0, 0.0); len];
            let q = self.point(i, n);
            let row = c.fix_q(&q[..n]);
            for r in 0..cube {
                let p = self.point(r, n);
                row.accumulate(&q[..n], &p[..n], &mut acc);
            }
            acc
        });
        let vol = self.step().powi(2 * n as i32);
        let mut out = vec![C64::new(0.0, 0.0); len];
        for row in rows {
            out.iter_mut().zip(row).for_each(|(o, r)| *o += r * vol);
        }
        out
    }
}

/// `|∫ (C_k(f, g) − C_k(g, f)) dq dp|` for `k = 0..=N`, with the cochains
/// of the magnetic product of `ctx` (flat chart, Liouville volume).
pub fn trace_defect(
    ctx: &StarContext,
    f: &WindowedSymbol,
    g: &WindowedSymbol,
    quad: &PhaseQuadrature,
) -> Result<Vec<f64>, NumericError> {
    let c = ctx.star_b(f, g)?.minus(&ctx.star_b(g, f)?);
    Ok(quad
        .integrate(&c, 0, ctx.order())
        .into_iter()
        .map(|z| z.norm())
        .collect())
}

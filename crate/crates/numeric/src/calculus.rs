//! Agreement between the numeric calculus and the exact layer.

use fiberstar::exec::Exec;
use fiberstar::poly::PhaseSymbol;
use fiberstar::scalars::Rat;
use fiberstar::starcore::{kappa_bidiff_terms, FormalOneForm, StarContext};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::compiled::Poly;
use crate::grid::{Grid, GridFunction};
use crate::operator::{op_quantize, op_quantize_poly};
use crate::symbol::{GridSymbol, SymbolFn};
use crate::{rat_f64, NumericError};

/// `sup |ρ^A_κ(a)|_{λ=ħ} u − Op^A_{ħ,κ}(a) u|` for a polynomial symbol.
///
/// The left side applies the exact representation coefficient by
/// coefficient with spectral derivatives; the right side is the kernel
/// quantization with the connection phase of `A`.
pub fn formal_vs_numeric(
    a: &PhaseSymbol,
    u: &GridFunction,
    kappa: &Rat,
    potential: Option<&FormalOneForm>,
) -> Result<f64, NumericError> {
    formal_vs_numeric_all(a, std::slice::from_ref(u), kappa, potential)
}

/// [`formal_vs_numeric`] maximized over several functions on one grid.
pub fn formal_vs_numeric_all(
    a: &PhaseSymbol,
    us: &[GridFunction],
    kappa: &Rat,
    potential: Option<&FormalOneForm>,
) -> Result<f64, NumericError> {
    let Some(grid) = us.first().map(|u| *u.grid()) else {
        return Ok(0.0);
    };
    let n = grid.dim();
    let lam_a = potential.map_or(1, |f| {
        f.components()
            .iter()
            .filter_map(|c| c.max_lambda())
            .max()
            .unwrap_or(1)
            .max(1)
    });
    let order = a.max_lambda().unwrap_or(0).max(0) + (a.p_degree() as i32 + 1) * lam_a + 1;
    let mut ctx = StarContext::flat(n)
        .with_kappa(kappa.clone())?
        .with_order(order);
    if let Some(f) = potential {
        ctx = ctx.with_potential(f.clone())?;
    }
    let op = ctx.rho_a(&a.clone().with_order(order));
    let coeffs: Vec<(Vec<u32>, Vec<C64>)> = op
        .terms()
        .iter()
        .map(|(alpha, c)| {
            let c = Poly::at_lambda(c, grid.hbar());
            let vals = (0..grid.len())
                .map(|i| c.eval(&grid.position(i)[..n], &[]))
                .collect();
            (alpha[..n].iter().map(|e| *e as u32).collect(), vals)
        })
        .collect();
    let numeric = op_quantize_poly(a, &grid, rat_f64(kappa), potential)?.apply_many(us)?;
    let mut worst: f64 = 0.0;
    for (u, got) in us.iter().zip(numeric) {
        let mut formal = GridFunction::zero(&grid);
        for (alpha, vals) in &coeffs {
            let d = u.derivative(alpha);
            for ((v, c), x) in formal.values_mut().iter_mut().zip(vals).zip(d.values()) {
                *v += c * x;
            }
        }
        worst = worst.max(got.sub(&formal)?.sup_norm());
    }
    Ok(worst)
}

/// `C_k(a, b)` of the flat κ-ordered product on sampled symbols, with
/// spectral derivatives.
pub fn grid_cochain(
    a: &GridSymbol,
    b: &GridSymbol,
    kappa: &Rat,
    k: u32,
) -> Result<GridSymbol, NumericError> {
    let n = a.grid().dim();
    let mut out: Option<GridSymbol> = None;
    for (beta, gamma, c) in kappa_bidiff_terms(n, kappa, k) {
        let idx = |m: &[u8; 3]| m[..n].iter().map(|e| *e as u32).collect::<Vec<_>>();
        let (beta, gamma) = (idx(&beta), idx(&gamma));
        let (re, im) = c.to_c64();
        let term = a
            .derivative(&gamma, &beta)
            .mul(&b.derivative(&beta, &gamma))?
            .scale(C64::new(re, im));
        out = Some(match out {
            Some(acc) => acc.add(&term)?,
            None => term,
        });
    }
    Ok(out.unwrap_or_else(|| a.scale(C64::new(0.0, 0.0))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComposeDefect {
    pub hbar: f64,
    pub norm: f64,
}

/// `max_u ‖Op(a)Op(b)u − Σ_{k≤K} ħ^k Op(C_k(a,b))u‖ / ‖u‖` over the probe
/// set, one grid per ħ.
pub fn op_compose_defect(
    a: &SymbolFn,
    b: &SymbolFn,
    kappa: &Rat,
    k_max: u32,
    grids: &[Grid],
    exec: Exec,
) -> Result<Vec<ComposeDefect>, NumericError> {
    let kf = rat_f64(kappa);
    let rows = exec.map(grids, |g| -> Result<ComposeDefect, NumericError> {
        let sa = GridSymbol::from_fn(g, 0.0, a.clone());
        let sb = GridSymbol::from_fn(g, 0.0, b.clone());
        let mut sum = sa.mul(&sb)?;
        for k in 1..=k_max {
            sum = sum.add(
                &grid_cochain(&sa, &sb, kappa, k)?.scale(C64::new(g.hbar().powi(k as i32), 0.0)),
            )?;
        }
        let (oa, ob, os) = (
            op_quantize(&sa, kf),
            op_quantize(&sb, kf),
            op_quantize(&sum, kf),
        );
        let mut worst: f64 = 0.0;
        for u in GridFunction::probes(g) {
            let lhs = oa.apply(&ob.apply(&u)?)?;
            worst = worst.max(lhs.sub(&os.apply(&u)?)?.norm() / u.norm());
        }
        Ok(ComposeDefect {
            hbar: g.hbar(),
            norm: worst,
        })
    });
    rows.into_iter().collect()
}

/// The same defect for polynomial symbols, with the exact `★_κ` truncated
/// after `λ^K`.
pub fn op_compose_defect_poly(
    a: &PhaseSymbol,
    b: &PhaseSymbol,
    kappa: &Rat,
    k_max: u32,
    grid: &Grid,
) -> Result<f64, NumericError> {
    let n = grid.dim();
    let order = (a.p_degree().max(b.p_degree()) + k_max + 1) as i32
        + a.max_lambda().unwrap_or(0).max(0)
        + b.max_lambda().unwrap_or(0).max(0);
    let ctx = StarContext::flat(n)
        .with_kappa(kappa.clone())?
        .with_order(order);
    let prod = ctx
        .star(&a.clone().with_order(order), &b.clone().with_order(order))?
        .truncate(k_max as i32);
    let kf = rat_f64(kappa);
    let (oa, ob, os) = (
        op_quantize_poly(a, grid, kf, None)?,
        op_quantize_poly(b, grid, kf, None)?,
        op_quantize_poly(&prod, grid, kf, None)?,
    );
    let probes = GridFunction::probes(grid);
    let lhs = oa.apply_many(&ob.apply_many(&probes)?)?;
    let rhs = os.apply_many(&probes)?;
    let mut worst: f64 = 0.0;
    for ((u, l), r) in probes.iter().zip(&lhs).zip(&rhs) {
        worst = worst.max(l.sub(r)?.norm() / u.norm());
    }
    Ok(worst)
}

/// Least-squares slope of `ln(norm)` against `ln(ħ)`.
pub fn loglog_slope(points: &[ComposeDefect]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.hbar.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.norm.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Grid for the composition study at `hbar`: half-length 6 and enough
/// points that the momentum lattice reaches `|ζ| ≥ 6.5`.
pub fn compose_grid(hbar: f64) -> Result<Grid, NumericError> {
    let l = 6.0;
    let need = 6.5 * 2.0 * l / (hbar * std::f64::consts::PI);
    Grid::new(
        1,
        (need.ceil() as usize).next_power_of_two().max(64),
        l,
        hbar,
    )
}

/// The fixed pair used for the ħ-scaling study.
pub fn gaussian_pair() -> (SymbolFn, SymbolFn) {
    let a: SymbolFn = std::sync::Arc::new(|q: &[f64], p: &[f64]| {
        C64::new((-(q[0] * q[0] + p[0] * p[0]) / 2.0).exp(), 0.0)
    });
    let b: SymbolFn = std::sync::Arc::new(|q: &[f64], p: &[f64]| {
        let w = (-(q[0] - 0.3) * (q[0] - 0.3) / 2.0 - (p[0] - 0.5) * (p[0] - 0.5)).exp();
        C64::new(q[0] * w, p[0] * w)
    });
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fiberstar::expr::parse_symbol;
    use fiberstar::scalars::rat;

    fn s(t: &str, n: usize) -> PhaseSymbol {
        parse_symbol(t, n).unwrap()
    }

    #[test]
    fn base_functions_need_no_corrections() {
        let g = Grid::new(1, 512, 8.0, 0.1).unwrap();
        assert_eq!(
            formal_vs_numeric(
                &s("q1^2 - 3", 1),
                &GridFunction::gaussian(&g, &[0.0]),
                &rat(1, 2),
                None
            )
            .unwrap(),
            0.0
        );
        assert!(
            op_compose_defect_poly(&s("q1^2", 1), &s("q1 + 1", 1), &rat(0, 1), 0, &g).unwrap()
                < 1e-15
        );
    }

    #[test]
    fn kinetic_and_weyl_examples() {
        let g = Grid::new(1, 1024, 10.0, 0.1).unwrap();
        let u = GridFunction::gaussian(&g, &[0.0]);
        assert!(formal_vs_numeric(&s("p1^2", 1), &u, &rat(0, 1), None).unwrap() < 1e-8);
        assert!(formal_vs_numeric(&s("q1*p1", 1), &u, &rat(1, 2), None).unwrap() < 1e-8);
    }

    #[test]
    fn polynomial_expansion_is_exact() {
        let g = Grid::new(1, 1024, 10.0, 0.2).unwrap();
        let d = op_compose_defect_poly(&s("p1", 1), &s("q1", 1), &rat(0, 1), 1, &g).unwrap();
        assert!(d < 1e-12, "{d}");
        // Degree-six product on |q| ≤ 10: roundoff alone is ~1e-16 · 10^6.
        let d = op_compose_defect_poly(&s("q1*p1^2", 1), &s("q1^2*p1 + p1", 1), &rat(1, 4), 3, &g)
            .unwrap();
        assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn first_order_cochain_is_poisson_bracket() {
        // C_1 − C_1^{op} = i{a, b} for every κ.
        let g = Grid::new(1, 128, 8.0, 0.5).unwrap();
        let (fa, fb) = gaussian_pair();
        let (a, b) = (
            GridSymbol::from_fn(&g, 0.0, fa),
            GridSymbol::from_fn(&g, 0.0, fb),
        );
        let pb = a
            .derivative(&[0], &[1])
            .mul(&b.derivative(&[1], &[0]))
            .unwrap()
            .add(
                &a.derivative(&[1], &[0])
                    .mul(&b.derivative(&[0], &[1]))
                    .unwrap()
                    .scale(C64::new(-1.0, 0.0)),
            )
            .unwrap();
        for kappa in [rat(0, 1), rat(1, 4), rat(1, 2)] {
            let c = grid_cochain(&a, &b, &kappa, 1)
                .unwrap()
                .add(
                    &grid_cochain(&b, &a, &kappa, 1)
                        .unwrap()
                        .scale(C64::new(-1.0, 0.0)),
                )
                .unwrap();
            let want = pb.scale(C64::new(0.0, -1.0));
            let err = c
                .data()
                .iter()
                .zip(want.data())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10);
        }
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<ComposeDefect> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&h: &f64| ComposeDefect {
                hbar: h,
                norm: 3.0 * h.powi(3),
            })
            .collect();
        assert!((loglog_slope(&pts) - 3.0).abs() < 1e-12);
        assert_eq!(compose_grid(0.025).unwrap().points(), 1024);
        assert_eq!(compose_grid(0.2).unwrap().points(), 128);
    }
}

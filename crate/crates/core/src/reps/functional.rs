//! Positive functionals, the Cauchy-Schwarz inequality and the adjoint
//! defect of the representations, evaluated by quadrature on exact
//! Gaussian-windowed data.
//!
//! The symbolic side stays exact: products, evolutions and operators act on
//! [`WindowedSymbol`]s, and only the final integrals over the base are
//! sampled.  Integrands are compiled to flat coefficient tables first so a
//! 1024-point grid costs one pass per λ-order.

use super::RepError;
use crate::exec::Exec;
use crate::field::{PhaseField, WindowedSymbol};
use crate::poly::{PhaseSymbol, EXACT, MAX_DIM};
use crate::scalars::{rat, LambdaScalar};
use crate::starcore::half::{b_mu, n_half_unimodular};
use crate::starcore::{FormalOneForm, StarContext, StarError};

/// Trapezoid rule on the box `[−L, L)^n` with `points` nodes per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub points: usize,
    pub half_length: f64,
    pub exec: Exec,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            points: 1024,
            half_length: 10.0,
            exec: Exec::Parallel,
        }
    }
}

impl Quadrature {
    pub fn new(points: usize, half_length: f64) -> Self {
        Quadrature {
            points,
            half_length,
            ..Self::default()
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    fn step(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    fn node(&self, i: usize) -> f64 {
        -self.half_length + self.step() * i as f64
    }
}

/// Which state is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    /// `ω_μ(f) = ∫ ι*f μ` for the product of the context.
    OmegaMu,
    /// `ω_A = ω_μ ∘ 𝒜^{-1}` for the magnetic product `★^B`.
    OmegaA,
    /// `ω_ν = ω_μ ∘ ℬ_μ` for the half-density product `★̂_W`.
    OmegaNu,
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    /// `ω(f̄ ★ f)` coefficient by coefficient, before snapping.
    pub values: Vec<f64>,
    pub scalar: LambdaScalar,
    pub nonnegative: bool,
}

#[derive(Clone, Debug)]
struct Compiled {
    terms: Vec<([u8; MAX_DIM], f64, f64)>,
}

impl Compiled {
    fn new(p: &PhaseSymbol) -> Self {
        Compiled {
            terms: p
                .terms()
                .map(|(m, c)| {
                    let (re, im) = c.to_c64();
                    (m.q_exps(), re, im)
                })
                .collect(),
        }
    }

    fn eval(&self, q: &[f64]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, cr, ci) in &self.terms {
            let mut w = 1.0;
            for (j, x) in q.iter().enumerate() {
                w *= x.powi(e[j] as i32);
            }
            re += cr * w;
            im += ci * w;
        }
        (re, im)
    }
}

/// One window with its amplitude split by λ-power.
struct CompiledPart {
    window: Compiled,
    orders: Vec<Compiled>,
}

/// `∫ ι*w dq` for every λ-power in `lo..=hi`.
fn integrate(w: &WindowedSymbol, lo: i32, hi: i32, quad: &Quadrature) -> Vec<(f64, f64)> {
    let w = w.iota();
    let n = w.dim();
    let len = (hi - lo + 1).max(0) as usize;
    let parts: Vec<CompiledPart> = w
        .parts()
        .iter()
        .map(|(a, e)| CompiledPart {
            window: Compiled::new(e),
            orders: (lo..=hi)
                .map(|k| Compiled::new(&a.lambda_coeff(k)))
                .collect(),
        })
        .collect();
    let m = quad.points;
    let rows = quad.exec.map_range(m, |i| {
        let mut acc = vec![(0.0, 0.0); len];
        let mut q = [0.0; MAX_DIM];
        q[0] = quad.node(i);
        let inner = if n == 1 { 1 } else { m.pow(n as u32 - 1) };
        for r in 0..inner {
            let mut rest = r;
            for x in q.iter_mut().take(n).skip(1) {
                *x = quad.node(rest % m);
                rest /= m;
            }
            for part in &parts {
                let (er, ei) = part.window.eval(&q[..n]);
                let mag = (-er).exp();
                if mag == 0.0 {
                    continue;
                }
                let (c, s) = ((-ei).cos() * mag, (-ei).sin() * mag);
                for (k, amp) in part.orders.iter().enumerate() {
                    let (ar, ai) = amp.eval(&q[..n]);
                    acc[k].0 += ar * c - ai * s;
                    acc[k].1 += ar * s + ai * c;
                }
            }
        }
        acc
    });
    let vol = quad.step().powi(n as i32);
    let mut out = vec![(0.0, 0.0); len];
    for row in rows {
        for (o, r) in out.iter_mut().zip(row) {
            o.0 += r.0 * vol;
            o.1 += r.1 * vol;
        }
    }
    out
}

/// `μ = e^φ dq` with `dφ = α_μ + tr Γ`.
fn density(ctx: &StarContext) -> Result<WindowedSymbol, RepError> {
    let g = ctx.geometry();
    let n = g.dim();
    let comps = (0..n)
        .map(|k| (0..n).fold(g.alpha(k).clone(), |acc, j| &acc + g.christoffel(j, j, k)))
        .collect();
    let phi = FormalOneForm::new(comps)
        .primitive()
        .ok_or(StarError::NotClosed)?;
    Ok(WindowedSymbol::new(PhaseSymbol::one(n), -phi, EXACT))
}

fn lambda_range(w: &WindowedSymbol, order: i32) -> (i32, i32) {
    let lo = w.valuation().unwrap_or(0).min(0);
    (lo, order)
}

/// `ω(g)` for λ-powers `0..=N`, `N` the context order.
pub fn omega(
    ctx: &StarContext,
    functional: Functional,
    g: &WindowedSymbol,
    quad: &Quadrature,
) -> Result<Vec<(f64, f64)>, RepError> {
    let mu = density(ctx)?;
    let h = match functional {
        Functional::OmegaMu => g.clone(),
        Functional::OmegaA => match ctx.potential() {
            Some(a) => ctx.evolve(a, &-rat(1, 1), g),
            None => g.clone(),
        },
        Functional::OmegaNu => b_mu(ctx, g),
    };
    let h = h.times(&mu);
    let (lo, hi) = lambda_range(&h, ctx.order());
    let vals = integrate(&h, lo, hi, quad);
    Ok(vals.into_iter().skip((-lo) as usize).collect())
}

/// The product the functional is positive for.
fn product(
    ctx: &StarContext,
    functional: Functional,
    f: &WindowedSymbol,
    g: &WindowedSymbol,
) -> Result<WindowedSymbol, RepError> {
    if !ctx.geometry().is_flat() {
        return Err(RepError::NeedsFlatChart);
    }
    Ok(match functional {
        Functional::OmegaMu | Functional::OmegaA => ctx.star_b(f, g)?,
        Functional::OmegaNu => {
            let h = ctx.star0(&n_half_unimodular(ctx, f, 1), &n_half_unimodular(ctx, g, 1))?;
            n_half_unimodular(ctx, &h, -1)
        }
    })
}

fn scale_of(v: &[(f64, f64)]) -> f64 {
    v.iter().map(|(a, b)| a.hypot(*b)).fold(1.0, f64::max)
}

fn real_values(v: &[(f64, f64)], tol: f64) -> Result<Vec<f64>, RepError> {
    let s = scale_of(v);
    v.iter()
        .enumerate()
        .map(|(k, (re, im))| {
            if im.abs() > tol * s {
                Err(RepError::NonRealResult { order: k as i32 })
            } else {
                Ok(*re)
            }
        })
        .collect()
}

fn snap(v: &[f64], tol: f64) -> Vec<f64> {
    let s = v.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    v.iter()
        .map(|x| if x.abs() <= tol * s { 0.0 } else { *x })
        .collect()
}

/// `ω(f̄ ★ f)` as an element of the ordered ring; coefficients below
/// `tol` (relative) count as zero.
pub fn positivity_check(
    ctx: &StarContext,
    functional: Functional,
    f: &WindowedSymbol,
    quad: &Quadrature,
    tol: f64,
) -> Result<PositivityReport, RepError> {
    let g = product(ctx, functional, &f.conj(), f)?;
    let values = real_values(&omega(ctx, functional, &g, quad)?, tol)?;
    let scalar = LambdaScalar::from_f64(&snap(&values, tol), ctx.order());
    let nonnegative = scalar
        .is_nonnegative()
        .map_err(|_| RepError::NonRealResult { order: 0 })?;
    Ok(PositivityReport {
        values,
        scalar,
        nonnegative,
    })
}

/// `ω(f̄★f)·ω(ḡ★g) − |ω(f̄★g)|²` in the ordered ring, with the verdict
/// whether it is nonnegative.
pub fn cauchy_schwarz_check(
    ctx: &StarContext,
    functional: Functional,
    f: &WindowedSymbol,
    g: &WindowedSymbol,
    quad: &Quadrature,
    tol: f64,
) -> Result<(LambdaScalar, bool), RepError> {
    let ff = real_values(
        &omega(
            ctx,
            functional,
            &product(ctx, functional, &f.conj(), f)?,
            quad,
        )?,
        tol,
    )?;
    let gg = real_values(
        &omega(
            ctx,
            functional,
            &product(ctx, functional, &g.conj(), g)?,
            quad,
        )?,
        tol,
    )?;
    let fg = omega(
        ctx,
        functional,
        &product(ctx, functional, &f.conj(), g)?,
        quad,
    )?;
    let n = ff.len().min(gg.len()).min(fg.len());
    let mut gap = vec![0.0; n];
    for i in 0..n {
        for j in 0..n - i {
            let (ar, ai) = fg[i];
            let (br, bi) = fg[j];
            gap[i + j] += ff[i] * gg[j] - (ar * br + ai * bi);
        }
    }
    let scalar = LambdaScalar::from_f64(&snap(&gap, tol), ctx.order());
    let ok = scalar
        .is_nonnegative()
        .map_err(|_| RepError::NonRealResult { order: 0 })?;
    Ok((scalar, ok))
}

/// `⟨u, ρ^A_κ(f) v⟩ − ⟨ρ^A_κ(N_{1−2κ} f̄) u, v⟩` per λ-power `0..=N`, with
/// `⟨u, v⟩ = ∫ ū v μ`.  `u`, `v` are base functions.
pub fn adjoint_defect(
    ctx: &StarContext,
    f: &PhaseSymbol,
    u: &WindowedSymbol,
    v: &WindowedSymbol,
    quad: &Quadrature,
) -> Result<Vec<(i32, f64)>, RepError> {
    let mu = density(ctx)?;
    let l = ctx.rho_a(f);
    let s = rat(1, 1) - ctx.kappa() * rat(2, 1);
    let m = ctx.rho_a(&ctx.n_at(&s, &f.conj(), 1));
    let order = ctx.order();
    let lo = [&l, &m]
        .iter()
        .flat_map(|op| op.terms().values().filter_map(|c| c.valuation()))
        .min()
        .unwrap_or(0)
        .min(0);
    let ks: Vec<i32> = (lo..=order).collect();
    let rows = ks
        .iter()
        .map(|&k| {
            let lv = l.lambda_coeff(k).apply_field(v);
            let mu_k = m.lambda_coeff(k).apply_field(u);
            let integrand = u.conj().times(&lv).minus(&mu_k.conj().times(v)).times(&mu);
            let (re, im) = integrate(&integrand, 0, 0, quad)[0];
            (k, re.hypot(im))
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::{BaseGeometry, GeometryBuilder};
    use crate::random::SymbolGen;

    fn s(t: &str, d: usize) -> PhaseSymbol {
        parse_symbol(t, d).unwrap()
    }

    fn quad1() -> Quadrature {
        Quadrature::new(1024, 10.0)
    }

    #[test]
    fn gaussian_integral() {
        let ctx = StarContext::flat(1).with_order(2);
        let w = WindowedSymbol::new(s("1 + l*q1^2", 1), s("q1^2", 1), 2);
        let v = omega(&ctx, Functional::OmegaMu, &w, &quad1()).unwrap();
        let pi = std::f64::consts::PI;
        assert!((v[0].0 - pi.sqrt()).abs() < 1e-12);
        assert!((v[1].0 - pi.sqrt() / 2.0).abs() < 1e-12);
        assert!(v[2].0.abs() < 1e-12);
    }

    #[test]
    fn zero_has_zero_state() {
        let ctx = StarContext::flat(1)
            .with_kappa(rat(1, 2))
            .unwrap()
            .with_order(4);
        let r = positivity_check(
            &ctx,
            Functional::OmegaMu,
            &WindowedSymbol::zero(1, 4),
            &quad1(),
            1e-10,
        )
        .unwrap();
        assert!(r.nonnegative && r.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn weyl_state_is_positive() {
        let ctx = StarContext::flat(1)
            .with_kappa(rat(1, 2))
            .unwrap()
            .with_order(4);
        let mut gen = SymbolGen::new(5, 1);
        for _ in 0..4 {
            let f = WindowedSymbol::new(gen.symbol(2, 2, 4), s("q1^2 + p1^2 + q1*p1", 1), 4);
            let r = positivity_check(&ctx, Functional::OmegaMu, &f, &quad1(), 1e-10).unwrap();
            assert!(r.nonnegative, "{:?}", r.values);
        }
    }

    #[test]
    fn cauchy_schwarz_on_random_pairs() {
        let ctx = StarContext::flat(1)
            .with_kappa(rat(1, 2))
            .unwrap()
            .with_order(3);
        let mut gen = SymbolGen::new(9, 1);
        for _ in 0..3 {
            let f = WindowedSymbol::new(gen.symbol(2, 1, 3), s("q1^2 + p1^2", 1), 3);
            let g = WindowedSymbol::new(gen.symbol(2, 1, 3), s("2*q1^2 + p1^2 - q1", 1), 3);
            let (_, ok) =
                cauchy_schwarz_check(&ctx, Functional::OmegaMu, &f, &g, &quad1(), 1e-10).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn magnetic_and_half_density_states_are_positive() {
        let geom = BaseGeometry::flat(2)
            .with_alpha(vec![s("q1", 2), s("0", 2)])
            .unwrap();
        let ctx = StarContext::new(geom)
            .with_kappa(rat(1, 2))
            .unwrap()
            .with_order(2)
            .with_potential(FormalOneForm::new(vec![s("0", 2), s("l*q1", 2)]))
            .unwrap();
        let quad = Quadrature::new(96, 7.0);
        let f = WindowedSymbol::new(s("1 + p1 + q2*p2", 2), s("q1^2 + q2^2 + p1^2 + p2^2", 2), 2);
        for func in [Functional::OmegaA, Functional::OmegaNu] {
            let r = positivity_check(&ctx, func, &f, &quad, 1e-9).unwrap();
            assert!(r.nonnegative, "{func:?}: {:?}", r.values);
        }
    }

    #[test]
    fn weyl_representation_is_symmetric() {
        let quad = quad1();
        let u = WindowedSymbol::new(s("1 + q1", 1), s("q1^2", 1), EXACT);
        let v = WindowedSymbol::new(s("q1^2 - 2", 1), s("q1^2/2 + q1", 1), EXACT);
        let geom = BaseGeometry::flat(1)
            .with_alpha(vec![s("2*q1", 1)])
            .unwrap();
        for kappa in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            let ctx = StarContext::new(geom.clone())
                .with_kappa(kappa)
                .unwrap()
                .with_order(3)
                .with_potential(FormalOneForm::new(vec![s("l*q1^2", 1)]))
                .unwrap();
            for f in ["p1^3*q1 + p1", "q1^2", "p1^2*q1^2 + q1*p1"] {
                for (k, r) in adjoint_defect(&ctx, &s(f, 1), &u, &v, &quad).unwrap() {
                    assert!(r < 1e-8, "κ={} f={f} k={k}: {r}", ctx.kappa());
                }
            }
        }
    }

    #[test]
    fn defect_without_n_correction_is_visible() {
        // at κ = 0, ρ_0(f)† differs from ρ_0(f̄) by the N_1-correction
        let ctx = StarContext::flat(1).with_order(2);
        let u = WindowedSymbol::new(s("1", 1), s("q1^2", 1), EXACT);
        let v = WindowedSymbol::new(s("1 + q1", 1), s("q1^2", 1), EXACT);
        let f = s("q1*p1", 1);
        let naive = ctx.rho_a(&f);
        let lv = naive.lambda_coeff(1).apply_field(&v);
        let mu = naive.lambda_coeff(1).apply_field(&u);
        let (re, im) = integrate(
            &u.conj().times(&lv).minus(&mu.conj().times(&v)),
            0,
            0,
            &quad1(),
        )[0];
        assert!(re.hypot(im) > 0.1);
        assert!(adjoint_defect(&ctx, &f, &u, &v, &quad1())
            .unwrap()
            .iter()
            .all(|(_, r)| *r < 1e-8));
    }

    #[test]
    fn curved_density_charts() {
        // Γ^1_{12} = q2, Γ^2_{22} = 1 + q1, α = (q2, −q2 − 1): μ = e^{−q2} dq
        let g = GeometryBuilder::new(2)
            .christoffel(0, 0, 1, s("q2", 2))
            .christoffel(1, 1, 1, s("1 + q1", 2))
            .alpha(0, s("q2", 2))
            .alpha(1, s("-q2 - 1", 2))
            .build()
            .unwrap();
        let ctx = StarContext::new(g)
            .with_kappa(rat(1, 2))
            .unwrap()
            .with_order(2);
        let quad = Quadrature::new(128, 8.0);
        let u = WindowedSymbol::new(s("1 + q2", 2), s("q1^2 + q2^2", 2), EXACT);
        let v = WindowedSymbol::new(s("q1", 2), s("q1^2 + q2^2", 2), EXACT);
        for f in ["p1*p2 + q1*p1", "p2^2*q1"] {
            for (k, r) in adjoint_defect(&ctx, &s(f, 2), &u, &v, &quad).unwrap() {
                assert!(r < 1e-8, "f={f} k={k}: {r}");
            }
        }
        let bad = GeometryBuilder::new(2)
            .alpha(0, s("q2", 2))
            .build()
            .unwrap();
        let ctx = StarContext::new(bad);
        assert!(matches!(
            adjoint_defect(&ctx, &s("p1", 2), &u, &v, &quad),
            Err(RepError::Star(StarError::NotClosed))
        ));
        assert!(matches!(
            positivity_check(&ctx.clone(), Functional::OmegaMu, &u, &quad, 1e-9),
            Err(RepError::Star(StarError::NotClosed))
        ));
    }
}

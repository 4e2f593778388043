//! Chart contexts bundling geometry, ordering parameter, magnetic field and
//! vector potential, plus multi-chart atlases.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use super::evolution::{delta, evolve};
use super::products::{n_kappa, star0_flat};
use super::{FormalOneForm, StandardRep, StarError};
use crate::field::PhaseField;
use crate::geometry::{AtlasConfig, BaseGeometry, ConfigError, LinDiffOp, TwoForm};
use crate::poly::{PhaseSymbol, EXACT};
use crate::scalars::{Gauss, Rat, DEFAULT_ORDER};

/// Everything needed to multiply symbols on one chart.
#[derive(Clone)]
pub struct StarContext {
    geom: Arc<BaseGeometry>,
    kappa: Rat,
    order: i32,
    magnetic: Option<TwoForm>,
    potential: Option<FormalOneForm>,
    rep0: Arc<StandardRep>,
    rep_a: Arc<OnceLock<Arc<StandardRep>>>,
}

impl std::fmt::Debug for StarContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StarContext")
            .field("chart", &self.geom.id())
            .field("kappa", &self.kappa.to_string())
            .field("order", &self.order)
            .finish()
    }
}

impl StarContext {
    /// Context with κ = 0, no magnetic field and the default order.
    pub fn new(geom: BaseGeometry) -> Self {
        let geom = Arc::new(geom);
        let order = DEFAULT_ORDER;
        StarContext {
            rep0: Arc::new(StandardRep::new(geom.clone(), None, order)),
            geom,
            kappa: Rat::zero(),
            order,
            magnetic: None,
            potential: None,
            rep_a: Arc::new(OnceLock::new()),
        }
    }

    pub fn flat(dim: usize) -> Self {
        Self::new(BaseGeometry::flat(dim))
    }

    pub fn with_kappa(mut self, kappa: Rat) -> Result<Self, StarError> {
        if kappa < Rat::zero() || kappa > Rat::one() {
            return Err(StarError::KappaOutOfRange(kappa.to_string()));
        }
        self.kappa = kappa;
        Ok(self)
    }

    pub fn with_order(mut self, order: i32) -> Self {
        self.order = order;
        self.rep0 = Arc::new(StandardRep::new(self.geom.clone(), None, order));
        self.rep_a = Arc::new(OnceLock::new());
        self
    }

    /// Attaches a closed magnetic field and optionally a potential for it.
    pub fn with_magnetic(
        mut self,
        b: TwoForm,
        potential: Option<FormalOneForm>,
    ) -> Result<Self, StarError> {
        if !b.is_closed() {
            return Err(StarError::MagneticNotClosed);
        }
        if b.valuation().is_some_and(|v| v < 0) {
            return Err(StarError::BNotFirstOrder);
        }
        if !b.lambda_coeff(0).components().all(|(_, c)| c.is_real()) {
            return Err(StarError::NonRealLeadingOrder { what: "B" });
        }
        if let Some(a) = &potential {
            check_potential(&b, a, self.geom.id())?;
        }
        self.magnetic = Some(b);
        self.potential = potential;
        self.rep_a = Arc::new(OnceLock::new());
        Ok(self)
    }

    /// Attaches `A` with `B = dA`.
    pub fn with_potential(self, a: FormalOneForm) -> Result<Self, StarError> {
        let b = a.d();
        self.with_magnetic(b, Some(a))
    }

    pub fn id(&self) -> &str {
        self.geom.id()
    }

    pub fn dim(&self) -> usize {
        self.geom.dim()
    }

    pub fn geometry(&self) -> &BaseGeometry {
        &self.geom
    }

    pub fn kappa(&self) -> &Rat {
        &self.kappa
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn magnetic(&self) -> Option<&TwoForm> {
        self.magnetic.as_ref()
    }

    pub fn potential(&self) -> Option<&FormalOneForm> {
        self.potential.as_ref()
    }

    fn has_field(&self) -> bool {
        self.magnetic.as_ref().is_some_and(|b| !b.is_zero())
    }

    pub fn standard_rep(&self) -> &StandardRep {
        &self.rep0
    }

    /// `ρ^A_0`, minimally coupled to the attached potential (or `ρ_0`).
    pub fn coupled_rep(&self) -> &StandardRep {
        self.rep_a.get_or_init(|| {
            Arc::new(StandardRep::new(
                self.geom.clone(),
                self.potential.as_ref(),
                self.order,
            ))
        })
    }

    // ---- symbol products -------------------------------------------------

    /// Standard-order product `★_0`.
    pub fn star0<F: PhaseField>(&self, f: &F, g: &F) -> Result<F, StarError> {
        if self.geom.is_flat() {
            Ok(star0_flat(f, g, self.order))
        } else {
            F::star0_curved(&self.rep0, f, g)
        }
    }

    /// `N_κ^{±1}`.
    pub fn n_kappa<F: PhaseField>(&self, f: &F, direction: i32) -> F {
        n_kappa(&self.geom, &self.kappa, f, direction, self.order)
    }

    /// `N_s^{±1}` for an arbitrary ordering parameter `s`.
    pub fn n_at<F: PhaseField>(&self, s: &Rat, f: &F, direction: i32) -> F {
        n_kappa(&self.geom, s, f, direction, self.order)
    }

    /// `f ★_κ g = N_κ^{-1}(N_κ f ★_0 N_κ g)`.
    pub fn star<F: PhaseField>(&self, f: &F, g: &F) -> Result<F, StarError> {
        if self.kappa.is_zero() {
            return self.star0(f, g);
        }
        if self.geom.is_flat() && self.geom.is_unimodular() {
            return Ok(super::products::star_kappa_flat(
                f,
                g,
                &self.kappa,
                self.order,
            ));
        }
        let h = self.star0(&self.n_kappa(f, 1), &self.n_kappa(g, 1))?;
        Ok(self.n_kappa(&h, -1))
    }

    /// `δ_κ[A]`.
    pub fn delta<F: PhaseField>(&self, a: &FormalOneForm, f: &F) -> F {
        delta(&self.geom, &self.kappa, a, f, self.order)
    }

    /// `𝒜_κ(t)` for the one-form `a`.
    pub fn evolve<F: PhaseField>(&self, a: &FormalOneForm, t: &Rat, f: &F) -> F {
        evolve(&self.geom, &self.kappa, a, t, f, self.order)
    }

    fn require_potential(&self) -> Result<&FormalOneForm, StarError> {
        self.potential
            .as_ref()
            .ok_or_else(|| StarError::PotentialMissing {
                chart: self.geom.id().to_string(),
            })
    }

    /// `f ★^B_κ g = 𝒜(𝒜^{-1} f ★_κ 𝒜^{-1} g)` with `𝒜 = 𝒜_κ(1)` built from
    /// the chart potential.
    pub fn star_b<F: PhaseField>(&self, f: &F, g: &F) -> Result<F, StarError> {
        if !self.has_field() {
            return self.star(f, g);
        }
        let a = self.require_potential()?;
        let one = Rat::one();
        let fi = self.evolve(a, &-one.clone(), f);
        let gi = self.evolve(a, &-one.clone(), g);
        Ok(self.evolve(a, &one, &self.star(&fi, &gi)?))
    }

    /// `f ★^B g − g ★^B f`.
    pub fn commutator<F: PhaseField>(&self, f: &F, g: &F) -> Result<F, StarError> {
        Ok(self.star_b(f, g)?.minus(&self.star_b(g, f)?))
    }

    // ---- representations --------------------------------------------------

    /// `ρ_0(f)`.
    pub fn rho0(&self, f: &PhaseSymbol) -> LinDiffOp {
        self.rep0.rho(f)
    }

    /// `ρ_κ(f) = ρ_0(N_κ f)`.
    pub fn rho_kappa(&self, f: &PhaseSymbol) -> LinDiffOp {
        self.rep0.rho(&self.n_kappa(f, 1))
    }

    /// `ρ^A_κ(f) = ρ^A_0(N_κ f)`, a representation of `★^B_κ`.
    pub fn rho_a(&self, f: &PhaseSymbol) -> LinDiffOp {
        self.coupled_rep().rho(&self.n_kappa(f, 1))
    }

    // ---- extracted data ---------------------------------------------------

    /// Coefficient `C_k(f, g)` of `λ^k` in `f ★^B g` (inputs taken λ-free).
    pub fn cochain<F: PhaseField>(&self, k: i32, f: &F, g: &F) -> Result<F, StarError> {
        Ok(self.star_b(f, g)?.lambda_coeff(k))
    }

    /// Antisymmetric part of the second-order cochain, `(C₂(f,g) − C₂(g,f))/2`.
    pub fn c2_minus(&self, f: &PhaseSymbol, g: &PhaseSymbol) -> Result<PhaseSymbol, StarError> {
        if let Some(b) = &self.magnetic {
            if !b.lambda_coeff(0).is_zero() {
                return Err(StarError::BNotFirstOrder);
            }
        }
        let a = self.cochain(2, f, g)?;
        let b = self.cochain(2, g, f)?;
        Ok((&a - &b).scale(&Gauss::frac(1, 2)))
    }

    /// `−(i/2)(π*B₁)(X_f, X_g)` with Hamiltonian fields of `ω + π*B₀`.
    pub fn c2_minus_oracle(&self, f: &PhaseSymbol, g: &PhaseSymbol) -> PhaseSymbol {
        let n = self.dim();
        let b1 = self
            .magnetic
            .as_ref()
            .map(|b| b.lambda_coeff(1))
            .unwrap_or_else(|| TwoForm::zero(n));
        let xf = self.hamiltonian_field(f);
        let xg = self.hamiltonian_field(g);
        let mut acc = PhaseSymbol::zero(n, EXACT);
        for i in 0..n {
            for j in 0..n {
                let bij = b1.get(i, j);
                if !bij.is_zero() {
                    acc = &acc + &(&(&bij * &xf[i]) * &xg[j]);
                }
            }
        }
        acc.scale(&Gauss::new(Rat::zero(), -Rat::new(1.into(), 2.into())))
    }

    /// Poisson tensor `P = −Ω^{-1}` of `ω + π*B₀` in the coordinates
    /// `(q¹…qⁿ, p₁…p_n)`, normalized so that `{q, p} = 1`.
    pub fn poisson_tensor(&self) -> Vec<Vec<PhaseSymbol>> {
        let n = self.dim();
        let b0 = self
            .magnetic
            .as_ref()
            .map(|b| b.lambda_coeff(0))
            .unwrap_or_else(|| TwoForm::zero(n));
        let z = || PhaseSymbol::zero(n, EXACT);
        let mut omega = vec![vec![z(); 2 * n]; 2 * n];
        for i in 0..n {
            omega[i][n + i] = PhaseSymbol::one(n);
            omega[n + i][i] = -PhaseSymbol::one(n);
            for j in 0..n {
                omega[i][j] = b0.get(i, j);
            }
        }
        let inv =
            invert_unimodular(omega).expect("symplectic matrix has a constant pivot structure");
        inv.into_iter()
            .map(|row| row.into_iter().map(|x| -x).collect())
            .collect()
    }

    /// Components `X_f^a = P^{ab} ∂_b f` (first `n` are the base directions).
    pub fn hamiltonian_field(&self, f: &PhaseSymbol) -> Vec<PhaseSymbol> {
        let n = self.dim();
        let p = self.poisson_tensor();
        let grad: Vec<PhaseSymbol> = (0..n)
            .map(|j| f.d_q(j))
            .chain((0..n).map(|j| f.d_p(j)))
            .collect();
        (0..2 * n)
            .map(|a| {
                (0..2 * n).fold(PhaseSymbol::zero(n, EXACT), |acc, b| {
                    &acc + &(&p[a][b] * &grad[b])
                })
            })
            .collect()
    }

    /// `{f, g}` for `ω + π*B₀`.
    pub fn poisson_bracket(&self, f: &PhaseSymbol, g: &PhaseSymbol) -> PhaseSymbol {
        let n = self.dim();
        let xf = self.hamiltonian_field(f);
        let grad: Vec<PhaseSymbol> = (0..n)
            .map(|j| g.d_q(j))
            .chain((0..n).map(|j| g.d_p(j)))
            .collect();
        // {f, g} = X_g f = −X_f g
        -(0..2 * n).fold(PhaseSymbol::zero(n, EXACT), |acc, a| {
            &acc + &(&xf[a] * &grad[a])
        })
    }

    /// Terms `u^k/k!` of `Exp(t π*u) = Σ_k t^k u^k/k!` for `k < terms`.
    pub fn star_exponential_base(&self, u: &PhaseSymbol, terms: usize) -> Vec<PhaseSymbol> {
        assert!(
            u.is_base(),
            "star exponential is only formed for base functions"
        );
        let mut out = vec![PhaseSymbol::one(self.dim())];
        for k in 1..terms {
            let next =
                (&out[k - 1] * u).scale_rat(&(Rat::one() / Rat::from_integer((k as i64).into())));
            out.push(next);
        }
        out
    }
}

fn check_potential(b: &TwoForm, a: &FormalOneForm, chart: &str) -> Result<(), StarError> {
    if !a.is_real_at_order_zero() {
        return Err(StarError::NonRealLeadingOrder { what: "A" });
    }
    if a.valuation().is_some_and(|v| v < 0) {
        return Err(StarError::LaurentRequired);
    }
    if a.d().add(&b.neg()).is_zero() {
        Ok(())
    } else {
        Err(StarError::PotentialMismatch {
            chart: chart.to_string(),
        })
    }
}

/// Gauss-Jordan inversion for matrices whose pivots can always be chosen as
/// nonzero constants.
fn invert_unimodular(mut m: Vec<Vec<PhaseSymbol>>) -> Option<Vec<Vec<PhaseSymbol>>> {
    let k = m.len();
    let n = m[0][0].dim();
    let mut inv: Vec<Vec<PhaseSymbol>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        PhaseSymbol::one(n)
                    } else {
                        PhaseSymbol::zero(n, EXACT)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| {
            m[r][col].to_scalar().is_some_and(|s| !s.is_zero()) && m[r][col].is_base()
        })?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let c = m[col][col].to_scalar()?.coeff(0);
        let ci = c.inv()?;
        for j in 0..k {
            m[col][j] = m[col][j].scale(&ci);
            inv[col][j] = inv[col][j].scale(&ci);
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..k {
                    m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    Some(inv)
}

/// Several charts sharing coordinates, with potentials that differ by closed
/// forms on the overlaps.
#[derive(Clone, Debug)]
pub struct Atlas {
    charts: Vec<StarContext>,
    overlaps: Vec<(usize, usize, Option<PhaseSymbol>)>,
}

impl Atlas {
    pub fn new(charts: Vec<StarContext>) -> Self {
        Atlas {
            charts,
            overlaps: Vec::new(),
        }
    }

    /// Declares an overlap with an optional phase `S`, `dS = A_a − A_b`.
    pub fn with_overlap(
        mut self,
        a: &str,
        b: &str,
        phase: Option<PhaseSymbol>,
    ) -> Result<Self, StarError> {
        let ia = self.index(a)?;
        let ib = self.index(b)?;
        let diff = self.potential_difference(ia, ib);
        if !diff.is_closed() {
            return Err(StarError::OverlapNotClosed {
                a: a.into(),
                b: b.into(),
            });
        }
        if let Some(s) = &phase {
            if FormalOneForm::differential(s) != diff {
                return Err(StarError::OverlapNotClosed {
                    a: a.into(),
                    b: b.into(),
                });
            }
        }
        self.overlaps.push((ia, ib, phase));
        Ok(self)
    }

    pub fn from_config(cfg: &AtlasConfig, kappa: Rat, order: i32) -> Result<Self, AtlasError> {
        let mut charts = Vec::new();
        for c in &cfg.chart {
            let mut ctx = StarContext::new(c.geometry(cfg.dim)?)
                .with_kappa(kappa.clone())?
                .with_order(order);
            let pot = c.potential(cfg.dim)?.map(FormalOneForm::new);
            match (c.magnetic(cfg.dim)?, pot) {
                (Some(b), pot) => ctx = ctx.with_magnetic(b, pot)?,
                (None, Some(a)) => ctx = ctx.with_potential(a)?,
                (None, None) => {}
            }
            charts.push(ctx);
        }
        let mut atlas = Atlas::new(charts);
        for o in &cfg.overlap {
            let phase = cfg.overlap_phase(&o.charts[0], &o.charts[1])?;
            atlas = atlas.with_overlap(&o.charts[0], &o.charts[1], phase)?;
        }
        Ok(atlas)
    }

    fn index(&self, id: &str) -> Result<usize, StarError> {
        self.charts
            .iter()
            .position(|c| c.id() == id)
            .ok_or_else(|| StarError::UnknownChart(id.to_string()))
    }

    pub fn chart(&self, id: &str) -> Result<&StarContext, StarError> {
        Ok(&self.charts[self.index(id)?])
    }

    pub fn charts(&self) -> &[StarContext] {
        &self.charts
    }

    pub fn overlaps(&self) -> impl Iterator<Item = (&str, &str, Option<&PhaseSymbol>)> {
        self.overlaps
            .iter()
            .map(|(a, b, s)| (self.charts[*a].id(), self.charts[*b].id(), s.as_ref()))
    }

    fn potential_difference(&self, a: usize, b: usize) -> FormalOneForm {
        let n = self.charts[a].dim();
        let pa = self.charts[a]
            .potential()
            .cloned()
            .unwrap_or_else(|| FormalOneForm::zero(n));
        let pb = self.charts[b]
            .potential()
            .cloned()
            .unwrap_or_else(|| FormalOneForm::zero(n));
        pa.sub(&pb)
    }

    /// Both chart products of `f` and `g` on an overlap.
    pub fn overlap_products(
        &self,
        a: &str,
        b: &str,
        f: &PhaseSymbol,
        g: &PhaseSymbol,
    ) -> Result<(PhaseSymbol, PhaseSymbol), StarError> {
        Ok((self.chart(a)?.star_b(f, g)?, self.chart(b)?.star_b(f, g)?))
    }

    /// Both sides of `D_a − D_b = (1/λ) ad(−i(λ∂_λ − id) π*c)` with
    /// `D_j = 𝒜^j ∘ H ∘ (𝒜^j)^{-1}` and `dc = A^a − A^b`.
    pub fn euler_derivation_check(
        &self,
        a: &str,
        b: &str,
        c: &PhaseSymbol,
        f: &PhaseSymbol,
    ) -> Result<(PhaseSymbol, PhaseSymbol), StarError> {
        let (ca, cb) = (self.chart(a)?, self.chart(b)?);
        let one = Rat::one();
        let d = |ctx: &StarContext| -> Result<PhaseSymbol, StarError> {
            let pot = ctx.require_potential()?;
            Ok(ctx.evolve(
                pot,
                &one,
                &super::homogeneity(&ctx.evolve(pot, &-one.clone(), f)),
            ))
        };
        let lhs = (&d(ca)? - &d(cb)?).truncate(ca.order() - 1);
        let psi = (&c.lambda_euler() - c).scale(&Gauss::one().mul_i_pow(3));
        let ad = ca.commutator(&psi, f)?;
        let rhs = ad.shift_lambda(-1).truncate(ca.order() - 1);
        Ok((lhs, rhs))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AtlasError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Star(#[from] StarError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::GeometryBuilder;
    use crate::random::SymbolGen;
    use crate::scalars::rat;

    fn s(t: &str, d: usize) -> PhaseSymbol {
        parse_symbol(t, d).unwrap()
    }

    // α_μ = d(q¹q²) − tr Γ, so μ is a genuine density; dα_μ ≠ 0.
    fn curved() -> BaseGeometry {
        GeometryBuilder::new(2)
            .christoffel(0, 0, 1, s("q2", 2))
            .christoffel(1, 1, 1, s("1 + q1", 2))
            .alpha(0, s("q2", 2))
            .alpha(1, s("-q2 - 1", 2))
            .build()
            .unwrap()
    }

    fn magnetic(ctx: StarContext) -> StarContext {
        // A = λb q¹ dq², B = λb dq¹∧dq²
        let a = FormalOneForm::new(vec![s("0", 2), s("3*l*q1", 2)]);
        ctx.with_potential(a).unwrap()
    }

    #[test]
    fn canonical_commutator_all_orderings() {
        for k in [rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1)] {
            let ctx = StarContext::flat(1).with_kappa(k).unwrap();
            let c = ctx.commutator(&s("q1", 1), &s("p1", 1)).unwrap();
            assert_eq!(c, s("i*l", 1).truncate(6));
        }
        let weyl = StarContext::flat(1).with_kappa(rat(1, 2)).unwrap();
        assert_eq!(
            weyl.star(&s("q1", 1), &s("p1", 1)).unwrap(),
            s("q1*p1 + (1/2)*i*l", 1).truncate(6)
        );
        assert_eq!(
            weyl.star(&s("p1", 1), &s("q1", 1)).unwrap(),
            s("q1*p1 - (1/2)*i*l", 1).truncate(6)
        );
    }

    #[test]
    fn flat_formula_matches_representation() {
        let ctx = StarContext::flat(2);
        let mut gen = SymbolGen::new(11, 2);
        for _ in 0..5 {
            let f = gen.symbol(3, 2, 3);
            let g = gen.symbol(3, 2, 3);
            assert_eq!(ctx.star0(&f, &g).unwrap(), ctx.standard_rep().star(&f, &g));
        }
    }

    #[test]
    fn standard_order_on_curved_chart() {
        let ctx = StarContext::new(curved());
        let mut gen = SymbolGen::new(5, 2);
        let u = gen.base(2, 3);
        let f = gen.symbol(3, 2, 3);
        assert_eq!(ctx.star0(&u, &f).unwrap(), (&u * &f).truncate(6));
    }

    #[test]
    fn curved_magnetic_associativity() {
        let mut gen = SymbolGen::new(1, 2);
        for k in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            let ctx = magnetic(StarContext::new(curved()).with_kappa(k).unwrap());
            let f = gen.symbol(3, 2, 3);
            let g = gen.symbol(3, 2, 3);
            let h = gen.symbol(3, 2, 3);
            let l = ctx.star_b(&ctx.star_b(&f, &g).unwrap(), &h).unwrap();
            let r = ctx.star_b(&f, &ctx.star_b(&g, &h).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn weyl_conjugation_and_first_order_bracket() {
        let ctx = magnetic(StarContext::new(curved()).with_kappa(rat(1, 2)).unwrap());
        let mut gen = SymbolGen::new(2, 2);
        let f = gen.symbol(2, 2, 3);
        let g = gen.symbol(2, 2, 3);
        assert_eq!(
            ctx.star_b(&f, &g).unwrap().conj(),
            ctx.star_b(&g.conj(), &f.conj()).unwrap()
        );
        let c1 = &ctx.cochain(1, &f, &g).unwrap() - &ctx.cochain(1, &g, &f).unwrap();
        assert_eq!(
            c1,
            ctx.poisson_bracket(&f, &g)
                .scale(&Gauss::i())
                .with_order(c1.order())
        );
    }

    #[test]
    fn magnetic_golden_value() {
        let ctx = StarContext::flat(2)
            .with_potential(FormalOneForm::new(vec![s("0", 2), s("3*l*q1", 2)]))
            .unwrap();
        let c = ctx.commutator(&s("p1", 2), &s("p2", 2)).unwrap();
        assert_eq!(c, s("-3*i*l^2", 2).truncate(6));
        let c2 = ctx.c2_minus(&s("p1", 2), &s("p2", 2)).unwrap();
        assert_eq!(c2, s("-(3/2)*i", 2).truncate(c2.order()));
        assert_eq!(
            ctx.c2_minus_oracle(&s("p1", 2), &s("p2", 2)),
            s("-(3/2)*i", 2)
        );
    }

    #[test]
    fn base_functions_multiply_pointwise() {
        let ctx = magnetic(StarContext::new(curved()).with_kappa(rat(1, 2)).unwrap());
        let u = s("q1^2 + q2", 2);
        let v = s("q1*q2 - 1", 2);
        assert_eq!(ctx.star_b(&u, &v).unwrap(), (&u * &v).truncate(6));
        let e = ctx.star_exponential_base(&u, 4);
        assert_eq!(e[2], (&u * &u).scale(&Gauss::frac(1, 2)));
    }

    #[test]
    fn rejects_bad_data() {
        let bad = TwoForm::zero(2).with(0, 1, s("q1", 2));
        assert!(StarContext::flat(2)
            .with_magnetic(bad.clone(), None)
            .is_ok());
        let nonclosed = TwoForm::zero(3).with(0, 1, s("q3", 3));
        assert!(matches!(
            StarContext::flat(3).with_magnetic(nonclosed, None),
            Err(StarError::MagneticNotClosed)
        ));
        let ctx = StarContext::flat(2)
            .with_magnetic(TwoForm::zero(2).with(0, 1, s("l", 2)), None)
            .unwrap();
        assert!(matches!(
            ctx.star_b(&s("p1", 2), &s("p2", 2)),
            Err(StarError::PotentialMissing { .. })
        ));
        assert!(StarContext::flat(1).with_kappa(rat(3, 2)).is_err());
    }
}

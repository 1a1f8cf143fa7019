//! Mappings `F(z) = z f(z)` on the Euclidean ball and the polydisk of `ℂⁿ`.
//!
//! Every seed has the form `f(z) = φ(π(z))` for a one-variable profile `φ`
//! with `φ(0) = 1` and a norm-one linear functional `π`. Along a direction
//! `z` the restriction `ζ ↦ f(ζz)` has coefficients `bₖ = φₖ π(z)ᵏ`, and
//! `D^{k+1}F(0)(z^{k+1})/(k+1)! = bₖ z`. No multivariate derivative tensor is
//! ever formed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{hypothesis_ok, region_member, r_params, sharp_bound_t23, RegionPoint};
use crate::coeffs::solve_convex_ode;
use crate::error::{Error, Result};
use crate::psi::PsiTarget;
use crate::schwarz::{indexed_rng, jet_from_schur, sample_disk, SchurParams, SchwarzJet};
use crate::series::TruncatedSeries;

/// Largest jet order [`directional_jet`] will build.
pub const MAX_JET_ORDER: usize = 512;
/// Slack on the theorem inequalities.
pub const INEQUALITY_TOL: f64 = 1e-9;
/// Tolerance on `‖u‖ = 1` for seed directions.
pub const UNIT_TOL: f64 = 1e-12;
/// Relative tolerance below which two coordinate moduli count as tied.
pub const TIE_TOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L2,
    Linf,
}

impl Norm {
    pub fn of(&self, z: &[Complex64]) -> f64 {
        match self {
            Norm::L2 => z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
            Norm::Linf => z.iter().map(|c| c.norm()).fold(0.0, f64::max),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

/// Index of the unique coordinate of maximal modulus.
pub fn max_coordinate(z: &[Complex64]) -> Result<usize> {
    let (k, m) = z
        .iter()
        .map(|c| c.norm())
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::ZeroVector)?;
    if m == 0.0 {
        return Err(Error::ZeroVector);
    }
    let tied = z
        .iter()
        .enumerate()
        .any(|(j, c)| j != k && (m - c.norm()) <= TIE_TOL * m);
    if tied {
        return Err(Error::TiedMaximum);
    }
    Ok(k)
}

/// The supporting functional `l_z` applied to `w`.
///
/// `ℓ²`: `⟨w, z⟩/‖z‖`. `ℓ^∞`: `w_k conj(z_k)/|z_k|` at the unique
/// coordinate where `|z_k| = ‖z‖`.
pub fn functional_lz(norm: Norm, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if z.len() != w.len() {
        return Err(Error::Dimension { expected: z.len(), got: w.len() });
    }
    match norm {
        Norm::L2 => {
            let nz = norm.of(z);
            if nz == 0.0 {
                return Err(Error::ZeroVector);
            }
            Ok(w.iter().zip(z).map(|(a, b)| a * b.conj()).sum::<Complex64>() / nz)
        }
        Norm::Linf => {
            let k = max_coordinate(z)?;
            Ok(w[k] * z[k].conj() / z[k].norm())
        }
    }
}

/// Coefficients `bₖ` of `ζ ↦ f(ζz)` for a fixed direction `z`.
#[derive(Debug, Clone)]
pub struct DirectionalJet {
    pub direction: Vec<Complex64>,
    pub fjet: TruncatedSeries,
}

impl DirectionalJet {
    pub fn new(direction: Vec<Complex64>, fjet: TruncatedSeries) -> Result<Self> {
        if (fjet.coeff(0) - ONE).norm() > 1e-12 {
            return Err(Error::Unsupported("directional jet must satisfy f(0) = 1"));
        }
        Ok(Self { direction, fjet })
    }

    pub fn order(&self) -> usize {
        self.fjet.order()
    }

    /// `D^kF(0)(z^k)/k! = b_{k−1} z` for `k ≥ 1`.
    pub fn frechet_term(&self, k: usize) -> Vec<Complex64> {
        assert!(k >= 1);
        let b = self.fjet.coeff(k - 1);
        self.direction.iter().map(|c| b * c).collect()
    }

    /// `(f(z), Df(z)z, D²f(z)(z²))` from the jet evaluated at `ζ = 1`.
    pub fn point_values(&self) -> (Complex64, Complex64, Complex64) {
        self.fjet
            .coeffs()
            .iter()
            .enumerate()
            .fold((ZERO, ZERO, ZERO), |(f, df, d2f), (k, b)| {
                let k = k as f64;
                (f + b, df + b * k, d2f + b * k * (k - 1.0))
            })
    }

    /// `(D²f(z)(z²) + 3Df(z)z + f(z)) / (f(z) + Df(z)z)`.
    pub fn quasi_convex_scalar(&self) -> Complex64 {
        let (f, df, d2f) = self.point_values();
        (d2f + 3.0 * df + f) / (f + df)
    }
}

#[derive(Debug, Clone)]
pub enum SeedKind {
    /// `F(z) = z φ(l_u(z))` with `φ(w) = f_Ψ(w)/w` and
    /// `f_Ψ′(w) = exp ∫₀^w (Ψ(it) − 1)/t dt`.
    ExtremalBall { u: Vec<Complex64> },
    /// The same profile along the first coordinate.
    ExtremalPolydisk,
    /// `F(z) = z φ(l_u(z))` with `wφ(w)` the member of `C(Ψ)` subordinate
    /// through the jet's Schwarz function.
    SchwarzSeed { jet: SchwarzJet, u: Vec<Complex64> },
}

#[derive(Debug, Clone)]
pub struct SeedMapping {
    kind: SeedKind,
    psi: PsiTarget,
    norm: Norm,
    dim: usize,
}

fn check_unit(norm: Norm, u: &[Complex64]) -> Result<()> {
    if u.is_empty() {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    let nu = norm.of(u);
    if (nu - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit(nu));
    }
    if norm == Norm::Linf {
        max_coordinate(u)?;
    }
    Ok(())
}

impl SeedMapping {
    pub fn extremal_ball(psi: PsiTarget, u: Vec<Complex64>, norm: Norm) -> Result<Self> {
        check_unit(norm, &u)?;
        Ok(Self {
            dim: u.len(),
            kind: SeedKind::ExtremalBall { u },
            psi,
            norm,
        })
    }

    pub fn extremal_polydisk(psi: PsiTarget, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        Ok(Self {
            kind: SeedKind::ExtremalPolydisk,
            psi,
            norm: Norm::Linf,
            dim,
        })
    }

    pub fn schwarz_seed(psi: PsiTarget, jet: SchwarzJet, u: Vec<Complex64>, norm: Norm) -> Result<Self> {
        check_unit(norm, &u)?;
        Ok(Self {
            dim: u.len(),
            kind: SeedKind::SchwarzSeed { jet, u },
            psi,
            norm,
        })
    }

    pub fn kind(&self) -> &SeedKind {
        &self.kind
    }

    pub fn psi(&self) -> &PsiTarget {
        &self.psi
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The linear functional `π` through which `f` depends on `z`.
    pub fn projection(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: z.len() });
        }
        match &self.kind {
            SeedKind::ExtremalBall { u } | SeedKind::SchwarzSeed { u, .. } => functional_lz(self.norm, u, z),
            SeedKind::ExtremalPolydisk => Ok(z[0]),
        }
    }

    /// The one-variable profile `φ` through `w^order`.
    pub fn profile(&self, order: usize) -> Result<TruncatedSeries> {
        if order > MAX_JET_ORDER {
            return Err(Error::OrderTooLarge { requested: order, capacity: MAX_JET_ORDER });
        }
        match &self.kind {
            SeedKind::ExtremalBall { .. } | SeedKind::ExtremalPolydisk => Ok(extremal_profile(&self.psi, order)),
            SeedKind::SchwarzSeed { jet, .. } => {
                let big_p = self.psi.series(order).compose(&jet.omega_series(order))?;
                Ok(solve_convex_ode(&big_p).shift_down())
            }
        }
    }
}

/// `φ = f_Ψ(w)/w` with `f_Ψ′ = exp ∫₀^w (Ψ(it) − 1)/t dt`.
pub fn extremal_profile(psi: &PsiTarget, order: usize) -> TruncatedSeries {
    let rotated = psi.series(order).dilate(I);
    let integrand = (&rotated - &TruncatedSeries::one(order)).shift_down();
    let derivative = integrand
        .integrate0()
        .exp_series()
        .expect("antiderivative vanishes at 0");
    derivative.integrate0().shift_down()
}

/// Jet of `ζ ↦ f(ζz)` through `ζ^order`.
pub fn directional_jet(m: &SeedMapping, z: &[Complex64], order: usize) -> Result<DirectionalJet> {
    let profile = m.profile(order)?;
    jet_along(m, &profile, z)
}

fn jet_along(m: &SeedMapping, profile: &TruncatedSeries, z: &[Complex64]) -> Result<DirectionalJet> {
    let w = m.projection(z)?;
    DirectionalJet::new(z.to_vec(), profile.dilate(w))
}

/// `l_z(D³F(0)(z³))/(3!‖z‖³)` and `l_z(D⁴F(0)(z⁴))/(4!‖z‖⁴)`.
pub fn t41_functionals(m: &SeedMapping, z: &[Complex64]) -> Result<(Complex64, Complex64)> {
    let jet = directional_jet(m, z, 3)?;
    t41_functionals_from_jet(m.norm, &jet)
}

pub fn t41_functionals_from_jet(norm: Norm, jet: &DirectionalJet) -> Result<(Complex64, Complex64)> {
    let z = &jet.direction;
    let nz = norm.of(z);
    if nz == 0.0 {
        return Err(Error::ZeroVector);
    }
    let a3 = functional_lz(norm, z, &jet.frechet_term(3))? / nz.powi(3);
    let a4 = functional_lz(norm, z, &jet.frechet_term(4))? / nz.powi(4);
    Ok((a3, a4))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: lhs <= rhs + INEQUALITY_TOL }
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// `|A₃² − A₄²|` against the one-variable sharp bound.
pub fn t41_check(m: &SeedMapping, z: &[Complex64]) -> Result<InequalityCheck> {
    let (a3, a4) = t41_functionals(m, z)?;
    let rhs = sharp_bound_t23(&m.psi)?.bound;
    Ok(InequalityCheck::new((a3 * a3 - a4 * a4).norm(), rhs))
}

/// `max_k |D⁴F_k(0)(z³, D⁴F(0)(z⁴)/4!)/4! − D³F_k(0)(z², D³F(0)(z³)/3!)/3!|`.
///
/// The inner vectors are `b₃z` and `b₂z`, so by linearity in the last slot
/// each mixed term is `bⱼ · D^{j+1}F_k(0)(z^{j+1})/(j+1)! = bⱼ² z_k`.
pub fn t42_lhs(jet: &DirectionalJet) -> f64 {
    let s4 = jet.fjet.coeff(3);
    let s3 = jet.fjet.coeff(2);
    let d4 = jet.frechet_term(4);
    let d3 = jet.frechet_term(3);
    d4.iter()
        .zip(&d3)
        .map(|(t4, t3)| (s4 * t4 - s3 * t3).norm())
        .fold(0.0, f64::max)
}

/// Right-hand side of the polydisk inequality at radius `‖z‖`.
pub fn t42_rhs(psi: &PsiTarget, radius: f64) -> Result<f64> {
    let j = psi.jet();
    if !(j.d1 > 0.0) {
        return Err(Error::DegenerateDerivative(j.d1));
    }
    let cubic = j.d1.powi(3) + 1.5 * j.d1 * j.d2 + j.d3 / 3.0;
    let quad = j.d2 / (2.0 * j.d1) + j.d1;
    Ok(radius.powi(7) / 576.0 * cubic * cubic + radius.powi(5) * j.d1 * j.d1 / 36.0 * quad * quad)
}

pub fn t42_sides(m: &SeedMapping, z: &[Complex64]) -> Result<InequalityCheck> {
    if m.norm != Norm::Linf {
        return Err(Error::Unsupported("the polydisk inequality needs the sup norm"));
    }
    max_coordinate(z)?;
    let jet = directional_jet(m, z, 3)?;
    Ok(InequalityCheck::new(t42_lhs(&jet), t42_rhs(&m.psi, Norm::Linf.of(z))?))
}

/// A uniform point of the ball of the given radius.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: Norm, radius: f64) -> Vec<Complex64> {
    match norm {
        Norm::L2 => {
            let dir = random_unit_vector(rng, n, Norm::L2);
            let r = radius * rng.random::<f64>().powf(1.0 / (2.0 * n as f64));
            dir.into_iter().map(|c| c * r).collect()
        }
        Norm::Linf => (0..n).map(|_| sample_disk(rng) * radius).collect(),
    }
}

/// A random vector of unit norm; for `ℓ^∞` the maximal coordinate is unique
/// with probability one.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: Norm) -> Vec<Complex64> {
    match norm {
        Norm::L2 => {
            let g: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let s = Norm::L2.of(&g);
            g.into_iter().map(|c| c / s).collect()
        }
        Norm::Linf => {
            let v: Vec<Complex64> = (0..n).map(|_| sample_disk(rng)).collect();
            let k = max_coordinate(&v).unwrap_or(0);
            let m = v[k].norm();
            v.into_iter()
                .enumerate()
                .map(|(j, c)| if j == k { c / m } else { c / m * 0.999_999 })
                .collect()
        }
    }
}

/// Settings for [`mpsi_sample_check_with`].
#[derive(Debug, Clone, Copy)]
pub struct MpsiOptions {
    /// Jet order used to evaluate `f` and its derivatives at a point.
    pub order: usize,
    /// Samples are drawn from the ball of this radius.
    pub max_radius: f64,
}

impl Default for MpsiOptions {
    fn default() -> Self {
        Self { order: 320, max_radius: 0.9 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MpsiReport {
    pub samples: usize,
    pub violations: usize,
    /// Smallest `1 − |Ψ⁻¹(value)|` seen; negative means outside `Ψ(𝕌)`.
    pub worst_margin: f64,
}

pub fn mpsi_sample_check(m: &SeedMapping, samples: usize, seed: u64) -> Result<MpsiReport> {
    mpsi_sample_check_with(m, samples, seed, &MpsiOptions::default())
}

/// Samples `z`, evaluates `l_z(h(z))/‖z‖` for
/// `h(z) = (DF(z))⁻¹(D²F(z)(z²) + DF(z)z)`, which for `F = zf` equals the
/// quasi-convex scalar times `z`, and tests membership in `Ψ(𝕌)`.
pub fn mpsi_sample_check_with(m: &SeedMapping, samples: usize, seed: u64, opts: &MpsiOptions) -> Result<MpsiReport> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    if !m.psi.has_evaluator() {
        return Err(Error::MissingEvaluator);
    }
    let profile = m.profile(opts.order)?;
    let margins: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = indexed_rng(seed, i);
            let z = loop {
                let z = random_point(&mut rng, m.dim, m.norm, opts.max_radius);
                if m.norm.of(&z) > 0.0 && (m.norm == Norm::L2 || max_coordinate(&z).is_ok()) {
                    break z;
                }
            };
            let jet = jet_along(m, &profile, &z)?;
            let scalar = jet.quasi_convex_scalar();
            let h: Vec<Complex64> = z.iter().map(|c| c * scalar).collect();
            let value = functional_lz(m.norm, &z, &h)? / m.norm.of(&z);
            membership_margin(&m.psi, value)
        })
        .collect::<Result<_>>()?;
    Ok(MpsiReport {
        samples,
        violations: margins.iter().filter(|&&g| !(g > 0.0)).count(),
        worst_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

const CONTINUATION_STEPS: usize = 100;
const NEWTON_ITERS: usize = 60;

/// `1 − |ζ|` for the solution of `Ψ(ζ) = v` reached by continuation along
/// the segment from `Ψ(0) = 1` to `v`.
///
/// `Ψ(𝕌)` is starlike with respect to 1, so `v ∈ Ψ(𝕌)` exactly when the
/// whole segment lifts inside the disk; the walk stops at the first lifted
/// point with `|ζ| ≥ 1` and reports its (non-positive) margin. A Newton
/// failure reports `−∞`.
pub fn membership_margin(psi: &PsiTarget, v: Complex64) -> Result<f64> {
    let mut zeta = ZERO;
    for step in 1..=CONTINUATION_STEPS {
        let t = step as f64 / CONTINUATION_STEPS as f64;
        let target = ONE + (v - ONE) * t;
        let mut converged = false;
        for _ in 0..NEWTON_ITERS {
            let r = psi.eval(zeta)? - target;
            if r.norm() <= 1e-14 * target.norm().max(1.0) {
                converged = true;
                break;
            }
            let d = four_point_derivative(psi, zeta)?;
            zeta -= r / d;
            if !zeta.is_finite() {
                return Ok(f64::NEG_INFINITY);
            }
        }
        if !converged {
            return Ok(f64::NEG_INFINITY);
        }
        if zeta.norm() >= 1.0 {
            return Ok(1.0 - zeta.norm());
        }
    }
    Ok(1.0 - zeta.norm())
}

fn four_point_derivative(psi: &PsiTarget, z: Complex64) -> Result<Complex64> {
    const RHO: f64 = 1e-5;
    let mut acc = ZERO;
    for k in 0..4 {
        let e = Complex64::from_polar(1.0, PI / 2.0 * k as f64);
        acc += psi.eval(z + RHO * e)? * e.conj();
    }
    Ok(acc / (4.0 * RHO))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepReport {
    pub checks: usize,
    pub violations: usize,
    /// Smallest `rhs − lhs` over all checks.
    pub worst_margin: f64,
}

impl SweepReport {
    fn absorb(&mut self, c: &InequalityCheck) {
        self.checks += 1;
        if !c.holds {
            self.violations += 1;
        }
        self.worst_margin = self.worst_margin.min(c.margin());
    }
}

/// Draws a target from the catalog whose bound is certified: the
/// half-plane, `α ∈ [0, 1)` or `β ∈ [0.34, 1]`.
pub fn random_certified_psi<R: Rng + ?Sized>(rng: &mut R) -> PsiTarget {
    match rng.random_range(0..3) {
        0 => PsiTarget::halfplane(),
        1 => PsiTarget::order_alpha(rng.random_range(0.0..1.0)).unwrap(),
        _ => PsiTarget::strong_beta(rng.random_range(0.34..=1.0)).unwrap(),
    }
}

/// Random Schwarz seeds against the theorem inequalities. Each draw picks
/// (unless `psi` is fixed) a certified target, depth-3 Schur parameters, a
/// unit direction `u` and a point `z` with `0 < ‖z‖ < 1`; it checks the ball
/// inequality and, under the sup norm, also the polydisk one.
pub fn soundness_sweep(psi: Option<&PsiTarget>, norm: Norm, n: usize, draws: usize, seed: u64) -> Result<SweepReport> {
    if let Some(p) = psi {
        let (r1, r2) = r_params(p)?;
        if !hypothesis_ok(p) || region_member(&RegionPoint::real(r1, r2)).is_none() {
            return Err(Error::Unsupported("target does not meet the theorem hypotheses"));
        }
    }
    let checks: Vec<Vec<InequalityCheck>> = (0..draws as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<InequalityCheck>> {
            let mut rng = indexed_rng(seed, i);
            let target = match psi {
                Some(p) => p.clone(),
                None => random_certified_psi(&mut rng),
            };
            let gamma = [sample_disk(&mut rng), sample_disk(&mut rng), sample_disk(&mut rng)];
            let jet = jet_from_schur(&SchurParams::new(&gamma)?);
            let u = random_unit_vector(&mut rng, n, norm);
            let z = loop {
                let z = random_point(&mut rng, n, norm, 1.0);
                if norm.of(&z) > 0.0 && (norm == Norm::L2 || max_coordinate(&z).is_ok()) {
                    break z;
                }
            };
            let m = SeedMapping::schwarz_seed(target, jet, u, norm)?;
            let mut out = vec![t41_check(&m, &z)?];
            if norm == Norm::Linf {
                out.push(t42_sides(&m, &z)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = SweepReport { checks: 0, violations: 0, worst_margin: f64::INFINITY };
    for c in checks.iter().flatten() {
        report.absorb(c);
    }
    Ok(report)
}

/// Largest `|lhs − rhs|` at the extremal over `r ∈ radii`: the ball
/// inequality at `z = ru` for `ℓ²`, the polydisk one at `z = (r, 0, …)` for
/// `ℓ^∞`.
pub fn equality_gap_at_extremal(psi: &PsiTarget, norm: Norm, n: usize, radii: &[f64]) -> Result<f64> {
    let mut gap: f64 = 0.0;
    for &r in radii {
        let mut e1 = vec![ZERO; n];
        e1[0] = ONE;
        let z: Vec<Complex64> = e1.iter().map(|c| c * r).collect();
        let check = match norm {
            Norm::L2 => {
                // a direction off the coordinate axes exercises the inner product
                let s = (n as f64).sqrt();
                let u: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0 / s, 0.3 * k as f64)).collect();
                let z: Vec<Complex64> = u.iter().map(|c| c * r).collect();
                t41_check(&SeedMapping::extremal_ball(psi.clone(), u, Norm::L2)?, &z)?
            }
            Norm::Linf => t42_sides(&SeedMapping::extremal_polydisk(psi.clone(), n)?, &z)?,
        };
        gap = gap.max((check.lhs - check.rhs).abs());
    }
    Ok(gap)
}

//! Ma–Minda targets `Ψ` and their jets at the origin.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

pub type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiKind {
    /// `(1+z)/(1−z)`: convex functions.
    HalfPlane,
    /// `(1+(1−2α)z)/(1−z)`: convex of order α.
    OrderAlpha(f64),
    /// `((1+z)/(1−z))^β`: strongly convex of order β.
    StrongBeta(f64),
    /// A bare jet; higher Taylor coefficients are taken as zero.
    CustomJet,
}

/// `(Ψ′(0), Ψ″(0), Ψ‴(0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiJet {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl PsiJet {
    pub fn new(d1: f64, d2: f64, d3: f64) -> Self {
        Self { d1, d2, d3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.d1, self.d2, self.d3]
    }
}

#[derive(Clone)]
pub struct PsiTarget {
    kind: PsiKind,
    jet: PsiJet,
    evaluator: Option<Evaluator>,
}

impl fmt::Debug for PsiTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiTarget")
            .field("kind", &self.kind)
            .field("jet", &self.jet)
            .field("evaluator", &self.evaluator.is_some())
            .finish()
    }
}

fn mobius(a: f64) -> Evaluator {
    Arc::new(move |z: Complex64| (1.0 + a * z) / (1.0 - z))
}

/// Taylor series of `log((1+z)/(1−z)) = 2 artanh z`.
fn log_mobius_series(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_real(
        &(0..=order)
            .map(|n| if n % 2 == 1 { 2.0 / n as f64 } else { 0.0 })
            .collect::<Vec<_>>(),
        order,
    )
}

impl PsiTarget {
    pub fn halfplane() -> Self {
        Self {
            kind: PsiKind::HalfPlane,
            jet: PsiJet::new(2.0, 4.0, 12.0),
            evaluator: Some(mobius(1.0)),
        }
    }

    pub fn order_alpha(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::ParameterDomain {
                name: "alpha",
                value: alpha,
                domain: "[0, 1)",
            });
        }
        let s = 1.0 - alpha;
        Ok(Self {
            kind: PsiKind::OrderAlpha(alpha),
            jet: PsiJet::new(2.0 * s, 4.0 * s, 12.0 * s),
            evaluator: Some(mobius(1.0 - 2.0 * alpha)),
        })
    }

    /// The jet is read off `exp(β · log((1+z)/(1−z)))`.
    pub fn strong_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::ParameterDomain {
                name: "beta",
                value: beta,
                domain: "(0, 1]",
            });
        }
        let s = log_mobius_series(3)
            .scale(Complex64::new(beta, 0.0))
            .exp_series()?;
        let jet = PsiJet::new(s.coeff(1).re, 2.0 * s.coeff(2).re, 6.0 * s.coeff(3).re);
        let evaluator: Evaluator = Arc::new(move |z: Complex64| ((1.0 + z) / (1.0 - z)).powf(beta));
        Ok(Self {
            kind: PsiKind::StrongBeta(beta),
            jet,
            evaluator: Some(evaluator),
        })
    }

    pub fn custom_jet(d1: f64, d2: f64, d3: f64) -> Result<Self> {
        if !(d1 > 0.0) {
            return Err(Error::DegenerateDerivative(d1));
        }
        Ok(Self {
            kind: PsiKind::CustomJet,
            jet: PsiJet::new(d1, d2, d3),
            evaluator: None,
        })
    }

    /// An arbitrary evaluator with a caller-supplied jet. Nothing is
    /// validated here; run [`PsiTarget::admissibility_report`].
    pub fn from_evaluator(jet: PsiJet, evaluator: Evaluator) -> Self {
        Self {
            kind: PsiKind::CustomJet,
            jet,
            evaluator: Some(evaluator),
        }
    }

    pub fn kind(&self) -> PsiKind {
        self.kind
    }

    pub fn jet(&self) -> PsiJet {
        self.jet
    }

    pub fn has_evaluator(&self) -> bool {
        self.evaluator.is_some()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.evaluator
            .as_ref()
            .map(|f| f(z))
            .ok_or(Error::MissingEvaluator)
    }

    /// Taylor series of `Ψ` to any order. Custom jets contribute only
    /// their three stored derivatives.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        match self.kind {
            PsiKind::HalfPlane => Self::mobius_series(1.0, order),
            PsiKind::OrderAlpha(a) => Self::mobius_series(1.0 - a, order),
            PsiKind::StrongBeta(b) => log_mobius_series(order)
                .scale(Complex64::new(b, 0.0))
                .exp_series()
                .expect("log series vanishes at 0"),
            PsiKind::CustomJet => TruncatedSeries::from_real(
                &[1.0, self.jet.d1, self.jet.d2 / 2.0, self.jet.d3 / 6.0],
                order,
            ),
        }
    }

    fn mobius_series(s: f64, order: usize) -> TruncatedSeries {
        let mut c = vec![2.0 * s; order + 1];
        c[0] = 1.0;
        TruncatedSeries::from_real(&c, order)
    }

    /// Sampled checks of the standing hypotheses on `Ψ` over a polar grid
    /// in `|z| ≤ 0.99`.
    pub fn admissibility_report(&self, samples: usize) -> Result<AdmissibilityReport> {
        let f = self.evaluator.as_ref().ok_or(Error::MissingEvaluator)?;
        if samples == 0 {
            return Err(Error::NoSamples);
        }
        let rings = (samples as f64).sqrt().ceil() as usize;
        let spokes = samples.div_ceil(rings);
        let grid: Vec<Complex64> = (0..rings)
            .flat_map(|i| {
                let r = 0.99 * (i + 1) as f64 / rings as f64;
                (0..spokes).map(move |k| Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / spokes as f64))
            })
            .take(samples)
            .collect();

        let mut re_pos = Extremum::min();
        let mut symmetry = Extremum::max();
        let mut starlike = Extremum::min();
        for &z in &grid {
            let v = f(z);
            re_pos.offer(v.re, z);
            let asym = (f(z.conj()) - v.conj()).norm() / v.norm().max(1.0);
            symmetry.offer(asym, z);
            let dv = cauchy_derivative(f.as_ref(), z, (1.0 - z.norm()) / 2.0);
            starlike.offer((z * dv / (v - 1.0)).re, z);
        }

        let origin = (f(Complex64::new(0.0, 0.0)) - 1.0).norm();
        let checks = vec![
            PropertyCheck::new("psi(0) = 1", origin <= 1e-12, origin, None),
            PropertyCheck::new("psi'(0) > 0", self.jet.d1 > 0.0, self.jet.d1, None),
            re_pos.check("re psi > 0", |w| w > 0.0),
            symmetry.check("psi(conj z) = conj psi(z)", |w| w <= 1e-12),
            starlike.check("starlike w.r.t. 1", |w| w > 0.0),
        ];
        Ok(AdmissibilityReport {
            passed: checks.iter().all(|c| c.passed),
            samples: grid.len(),
            checks,
        })
    }

    /// Spec string accepted by [`FromStr`].
    pub fn label(&self) -> String {
        match self.kind {
            PsiKind::HalfPlane => "halfplane".to_string(),
            PsiKind::OrderAlpha(a) => format!("alpha:{a}"),
            PsiKind::StrongBeta(b) => format!("beta:{b}"),
            PsiKind::CustomJet => format!("custom:{},{},{}", self.jet.d1, self.jet.d2, self.jet.d3),
        }
    }
}

/// `Ψ′(z)` from a discrete Cauchy integral on a circle of radius `rho`.
fn cauchy_derivative(f: &(dyn Fn(Complex64) -> Complex64 + Send + Sync), z: Complex64, rho: f64) -> Complex64 {
    const M: usize = 48;
    let sum: Complex64 = (0..M)
        .map(|k| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / M as f64);
            f(z + rho * e) * e.conj()
        })
        .sum();
    sum / (M as f64 * rho)
}

struct Extremum {
    value: f64,
    at: Option<Complex64>,
    minimize: bool,
}

impl Extremum {
    fn min() -> Self {
        Self { value: f64::INFINITY, at: None, minimize: true }
    }

    fn max() -> Self {
        Self { value: f64::NEG_INFINITY, at: None, minimize: false }
    }

    fn offer(&mut self, v: f64, z: Complex64) {
        let better = if self.minimize { v < self.value } else { v > self.value };
        if better || v.is_nan() {
            self.value = v;
            self.at = Some(z);
        }
    }

    fn check(&self, name: &'static str, ok: impl Fn(f64) -> bool) -> PropertyCheck {
        PropertyCheck::new(name, ok(self.value), self.value, self.at)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst sampled value of the property's test quantity.
    pub worst: f64,
    pub worst_at: Option<[f64; 2]>,
}

impl PropertyCheck {
    fn new(name: &'static str, passed: bool, worst: f64, at: Option<Complex64>) -> Self {
        Self {
            name,
            passed,
            worst,
            worst_at: at.map(|z| [z.re, z.im]),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub passed: bool,
    pub samples: usize,
    pub checks: Vec<PropertyCheck>,
}

impl AdmissibilityReport {
    pub fn check(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn parse_number(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
        None => s.trim().parse().ok(),
    }
}

impl FromStr for PsiTarget {
    type Err = Error;

    /// `halfplane`, `alpha:<v>` or `beta:<v>`; `<v>` may be a fraction `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::PsiSpec(s.to_string());
        match s.trim().split_once(':') {
            None if s.trim() == "halfplane" => Ok(Self::halfplane()),
            Some(("alpha", v)) => Self::order_alpha(parse_number(v).ok_or_else(bad)?),
            Some(("beta", v)) => Self::strong_beta(parse_number(v).ok_or_else(bad)?),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// `((1+z)/(1−z))^β` through division, the log-derivative integral and exp.
    fn power_oracle(beta: f64, order: usize) -> TruncatedSeries {
        let num = TruncatedSeries::from_real(&[1.0, 1.0], order + 1);
        let den = TruncatedSeries::from_real(&[1.0, -1.0], order + 1);
        let m = num.div(&den).unwrap();
        let log = m.derivative().div(&m.truncate(order)).unwrap().integrate0();
        log.scale(Complex64::new(beta, 0.0)).exp_series().unwrap().truncate(order)
    }

    fn jet_of(s: &TruncatedSeries) -> [f64; 3] {
        [s.coeff(1).re, 2.0 * s.coeff(2).re, 6.0 * s.coeff(3).re]
    }

    #[test]
    fn halfplane_jet() {
        assert_eq!(PsiTarget::halfplane().jet().as_array(), [2.0, 4.0, 12.0]);
    }

    #[test]
    fn order_alpha_jets() {
        assert_eq!(PsiTarget::order_alpha(0.0).unwrap().jet(), PsiTarget::halfplane().jet());
        assert_eq!(PsiTarget::order_alpha(0.5).unwrap().jet().as_array(), [1.0, 2.0, 6.0]);
        assert!(close(PsiTarget::order_alpha(0.9).unwrap().jet().d1, 0.2, 1e-15));
        assert!(PsiTarget::order_alpha(1.0).is_err());
        assert!(PsiTarget::order_alpha(-0.1).is_err());
    }

    #[test]
    fn strong_beta_jets() {
        let j = PsiTarget::strong_beta(1.0).unwrap().jet().as_array();
        for (a, b) in j.iter().zip([2.0, 4.0, 12.0]) {
            assert!(close(*a, b, 1e-14));
        }
        let j = PsiTarget::strong_beta(2.0 / 3.0).unwrap().jet();
        assert!(close(j.d1, 4.0 / 3.0, 1e-14));
        assert!(close(j.d2, 16.0 / 9.0, 1e-14));
        assert!(close(j.d3, 136.0 / 27.0, 1e-13));
        assert!(close(PsiTarget::strong_beta(0.5).unwrap().jet().d2, 1.0, 1e-14));
        assert!(PsiTarget::strong_beta(0.0).is_err());
        assert!(PsiTarget::strong_beta(1.01).is_err());
    }

    #[test]
    fn jets_match_series_oracle_on_grids() {
        let halfplane_oracle = |s: f64| {
            let num = TruncatedSeries::from_real(&[1.0, 1.0 - 2.0 * (1.0 - s)], 8);
            let den = TruncatedSeries::from_real(&[1.0, -1.0], 8);
            num.div(&den).unwrap()
        };
        for i in 0..10 {
            let alpha = i as f64 / 10.0;
            let p = PsiTarget::order_alpha(alpha).unwrap();
            let oracle = halfplane_oracle(1.0 - alpha);
            for (a, b) in p.jet().as_array().iter().zip(jet_of(&oracle)) {
                assert!(close(*a, b, 1e-12), "alpha {alpha}");
            }
            assert!(p.series(8).max_abs_diff(&oracle) < 1e-12);
        }
        for i in 1..=10 {
            let beta = i as f64 / 10.0;
            let p = PsiTarget::strong_beta(beta).unwrap();
            let oracle = power_oracle(beta, 8);
            let closed = [2.0 * beta, 4.0 * beta * beta, 4.0 * beta + 8.0 * beta.powi(3)];
            for ((a, b), c) in p.jet().as_array().iter().zip(jet_of(&oracle)).zip(closed) {
                assert!(close(*a, b, 1e-12) && close(*a, c, 1e-12), "beta {beta}");
            }
            assert!(p.series(8).max_abs_diff(&oracle) < 1e-12);
        }
    }

    #[test]
    fn evaluators_agree_with_series_inside_disk() {
        let z = Complex64::new(0.1, -0.2);
        for p in [
            PsiTarget::halfplane(),
            PsiTarget::order_alpha(0.3).unwrap(),
            PsiTarget::strong_beta(0.4).unwrap(),
        ] {
            let v = p.eval(z).unwrap();
            assert!((v - p.series(60).eval(z)).norm() < 1e-13, "{p:?}");
        }
    }

    #[test]
    fn admissibility_of_catalog() {
        for p in [PsiTarget::halfplane(), PsiTarget::strong_beta(0.5).unwrap()] {
            let r = p.admissibility_report(1000).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.samples, 1000);
        }
    }

    #[test]
    fn admissibility_flags_vanishing_derivative() {
        let p = PsiTarget::from_evaluator(
            PsiJet::new(0.0, 2.0, 0.0),
            Arc::new(|z: Complex64| 1.0 + z * z),
        );
        let r = p.admissibility_report(1000).unwrap();
        assert!(!r.passed);
        assert!(!r.check("psi'(0) > 0").unwrap().passed);
        assert!(r.check("re psi > 0").unwrap().passed);
    }

    #[test]
    fn admissibility_flags_asymmetric_target() {
        let p = PsiTarget::from_evaluator(
            PsiJet::new(2.0, 4.0, 12.0),
            Arc::new(|z: Complex64| {
                let i = Complex64::new(0.0, 1.0);
                (1.0 + i * z) / (1.0 - i * z)
            }),
        );
        let r = p.admissibility_report(400).unwrap();
        assert!(!r.check("psi(conj z) = conj psi(z)").unwrap().passed);
    }

    #[test]
    fn custom_targets_have_no_evaluator() {
        let p = PsiTarget::custom_jet(1.0, -2.5, 0.0).unwrap();
        assert_eq!(p.admissibility_report(10).unwrap_err(), Error::MissingEvaluator);
        assert!(PsiTarget::custom_jet(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn parse_specs() {
        assert_eq!("halfplane".parse::<PsiTarget>().unwrap().kind(), PsiKind::HalfPlane);
        assert_eq!("alpha:0.25".parse::<PsiTarget>().unwrap().kind(), PsiKind::OrderAlpha(0.25));
        let b = "beta:2/3".parse::<PsiTarget>().unwrap();
        assert_eq!(b.kind(), PsiKind::StrongBeta(2.0 / 3.0));
        assert_eq!(b.label().parse::<PsiTarget>().unwrap().kind(), b.kind());
        for bad in ["", "disk", "alpha:", "alpha:x", "beta:1.5", "gamma:0.1"] {
            assert!(bad.parse::<PsiTarget>().is_err(), "{bad}");
        }
    }
}

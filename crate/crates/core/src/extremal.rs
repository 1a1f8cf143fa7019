//! The extremal function `f_Ψ` with `1 + z f_Ψ″/f_Ψ′ = Ψ(iz)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::sharp_bound_t23;
use crate::coeffs::{solve_convex_ode, t23, CoefficientVector};
use crate::error::Result;
use crate::psi::PsiTarget;
use crate::series::{TruncatedSeries, DEFAULT_ORDER};

#[derive(Debug, Clone)]
pub struct ExtremalFunction {
    pub series: TruncatedSeries,
    pub psi: PsiTarget,
}

impl ExtremalFunction {
    pub fn coefficients(&self) -> CoefficientVector {
        CoefficientVector::new(self.series.coeff(2), self.series.coeff(3), self.series.coeff(4))
    }
}

/// Builds `f_Ψ` through `z^{DEFAULT_ORDER}`.
pub fn build_extremal(p: &PsiTarget) -> ExtremalFunction {
    build_extremal_to(p, DEFAULT_ORDER)
}

/// `f_Ψ` through `z^order` (at least 4). Only `Ψ`'s Taylor coefficients up
/// to `order − 1` enter.
pub fn build_extremal_to(p: &PsiTarget, order: usize) -> ExtremalFunction {
    let order = order.max(4);
    let rotated = p.series(order - 1).dilate(Complex64::new(0.0, 1.0));
    ExtremalFunction {
        series: solve_convex_ode(&rotated),
        psi: p.clone(),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Attainment {
    pub bound: f64,
    pub attained: f64,
    pub gap: f64,
}

pub fn verify_attainment(p: &PsiTarget) -> Result<Attainment> {
    let bound = sharp_bound_t23(p)?.bound;
    let attained = t23(&build_extremal(p).coefficients());
    Ok(Attainment {
        bound,
        attained,
        gap: bound - attained,
    })
}

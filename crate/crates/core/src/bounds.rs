//! The seven parameter regions, hypothesis gates, the sharp `|T₂,₃|` bound
//! and a derivative-free search that tries to attain it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{coeffs_from_subordination, t23};
use crate::error::{Error, Result};
use crate::psi::PsiTarget;
use crate::schwarz::{indexed_rng, jet_from_schur, SchurParams};

/// Slack allowed on every region inequality.
pub const REGION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub nu1: Complex64,
    pub nu2: f64,
}

impl RegionPoint {
    pub fn new(nu1: Complex64, nu2: f64) -> Self {
        Self { nu1, nu2 }
    }

    pub fn real(nu1: f64, nu2: f64) -> Self {
        Self::new(Complex64::new(nu1, 0.0), nu2)
    }

    /// Rejects a `ν₂` with nonzero imaginary part.
    pub fn from_complex(nu1: Complex64, nu2: Complex64) -> Result<Self> {
        if nu2.im != 0.0 {
            return Err(Error::ComplexNu2(nu2.im));
        }
        Ok(Self::new(nu1, nu2.re))
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + REGION_TOL
}

/// Membership in region `i` (1..=7), each inequality taken as printed.
/// Region 6 reads `ν₁²` as `|ν₁|²`.
pub fn in_region(i: u8, pt: &RegionPoint) -> bool {
    let m = pt.nu1.norm();
    let v = pt.nu2;
    match i {
        1 => le(m, 0.5) && le(v.abs(), 1.0),
        2 => {
            le(0.5, m)
                && le(m, 2.0)
                && le(4.0 / 27.0 * (m + 1.0).powi(3) - (m + 1.0), v)
                && le(v, 1.0)
        }
        3 => le(m, 0.5) && le(v, -1.0),
        4 => le(0.5, m) && le(v, -2.0 / 3.0 * (m + 1.0)),
        5 => le(m, 2.0) && le(1.0, v),
        6 => le(2.0, m) && le(m, 4.0) && le((m * m + 8.0) / 12.0, v),
        7 => le(4.0, m) && le(2.0 / 3.0 * (m - 1.0), v),
        _ => false,
    }
}

/// Smallest region index containing the point.
pub fn region_member(pt: &RegionPoint) -> Option<u8> {
    (1..=7).find(|&i| in_region(i, pt))
}

fn require_positive_slope(p: &PsiTarget) -> Result<(f64, f64, f64)> {
    let j = p.jet();
    if !(j.d1 > 0.0) {
        return Err(Error::DegenerateDerivative(j.d1));
    }
    Ok((j.d1, j.d2, j.d3))
}

/// `r₁ = (3Ψ′² + 2Ψ″)/(2Ψ′)`, `r₂ = (6Ψ′³ + 9Ψ′Ψ″ + 2Ψ‴)/(12Ψ′)`.
pub fn r_params(p: &PsiTarget) -> Result<(f64, f64)> {
    let (d1, d2, d3) = require_positive_slope(p)?;
    let r1 = (3.0 * d1 * d1 + 2.0 * d2) / (2.0 * d1);
    let r2 = (6.0 * d1.powi(3) + 9.0 * d1 * d2 + 2.0 * d3) / (12.0 * d1);
    Ok((r1, r2))
}

/// The same pair written as `(1/(2Ψ′))·(…)`.
pub fn r_params_factored(p: &PsiTarget) -> Result<(f64, f64)> {
    let (d1, d2, d3) = require_positive_slope(p)?;
    let r1 = (3.0 * d1 * d1 + 2.0 * d2) / (2.0 * d1);
    let r2 = (d1.powi(3) + 1.5 * d1 * d2 + d3 / 3.0) / (2.0 * d1);
    Ok((r1, r2))
}

/// `|Ψ″(0) + 2Ψ′(0)²| ≥ 2Ψ′(0)`.
pub fn hypothesis_ok(p: &PsiTarget) -> bool {
    let j = p.jet();
    (j.d2 + 2.0 * j.d1 * j.d1).abs() >= 2.0 * j.d1
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub r1: f64,
    pub r2: f64,
    pub region_index: Option<u8>,
    pub hypothesis_ok: bool,
    /// Bounds on `|a₃|` and `|a₄|` whose squares sum to `bound`.
    pub a3_bound: f64,
    pub a4_bound: f64,
    pub notes: String,
}

impl BoundReport {
    /// Both gates pass, so the bound is certified and sharp.
    pub fn certified(&self) -> bool {
        self.hypothesis_ok && self.region_index.is_some()
    }
}

/// `(2Ψ′² + Ψ″)²/144 + (Ψ′³ + 3Ψ′Ψ″/2 + Ψ‴/3)²/576`, with its gates.
pub fn sharp_bound_t23(p: &PsiTarget) -> Result<BoundReport> {
    let (d1, d2, d3) = require_positive_slope(p)?;
    let (r1, r2) = r_params(p)?;
    let a3_bound = (2.0 * d1 * d1 + d2).abs() / 12.0;
    let a4_bound = (d1.powi(3) + 1.5 * d1 * d2 + d3 / 3.0).abs() / 24.0;
    let bound = (2.0 * d1 * d1 + d2).powi(2) / 144.0
        + (d1.powi(3) + 1.5 * d1 * d2 + d3 / 3.0).powi(2) / 576.0;
    let region_index = region_member(&RegionPoint::real(r1, r2));
    let hyp = hypothesis_ok(p);
    let mut notes = Vec::new();
    if !hyp {
        notes.push("|psi''(0) + 2 psi'(0)^2| < 2 psi'(0)");
    }
    if region_index.is_none() {
        notes.push("(r1, r2) outside all regions");
    }
    let notes = if notes.is_empty() {
        "hypotheses met; bound is sharp".to_string()
    } else {
        format!("hypotheses not met: {}; bound not certified", notes.join("; "))
    };
    Ok(BoundReport {
        bound,
        r1,
        r2,
        region_index,
        hypothesis_ok: hyp,
        a3_bound,
        a4_bound,
        notes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub bound: f64,
    pub best: f64,
    pub gap: f64,
    pub best_gamma: Vec<[f64; 2]>,
    pub evaluations: usize,
    pub certified: bool,
}

/// Six real coordinates `(ρ₀, θ₀, ρ₁, θ₁, ρ₂, θ₂)` of the Schur parameters.
type Point = [f64; 6];

const STEP_SCALE: Point = [0.25, 0.5, 0.25, 0.5, 0.25, 0.5];
const MIN_STEP: f64 = 1e-9;
const MAX_STARTS: usize = 16;

fn params_of(x: &Point) -> SchurParams {
    SchurParams::from_polar(&[(x[0], x[1]), (x[2], x[3]), (x[4], x[5])])
        .expect("radii are clamped into the disk")
}

fn objective(p: &PsiTarget, x: &Point) -> f64 {
    t23(&coeffs_from_subordination(p, &jet_from_schur(&params_of(x))))
}

fn random_point(seed: u64, index: u64) -> Point {
    let mut rng = indexed_rng(seed, index);
    let mut x = [0.0; 6];
    for k in 0..3 {
        x[2 * k] = rng.random::<f64>().sqrt();
        x[2 * k + 1] = 2.0 * PI * rng.random::<f64>();
    }
    x
}

/// Coordinate-wise pattern search with step halving. Returns the final
/// point, its value and the number of objective calls spent.
fn refine(p: &PsiTarget, mut x: Point, mut fx: f64, budget: usize) -> (Point, f64, usize) {
    let mut step = 1.0;
    let mut used = 0;
    while step * 0.5 >= MIN_STEP && used < budget {
        let mut improved = false;
        for i in 0..6 {
            for dir in [1.0, -1.0] {
                let mut y = x;
                y[i] += dir * step * STEP_SCALE[i];
                if i % 2 == 0 {
                    y[i] = y[i].clamp(0.0, 1.0);
                }
                if y[i] == x[i] {
                    continue;
                }
                if used >= budget {
                    return (x, fx, used);
                }
                let fy = objective(p, &y);
                used += 1;
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx, used)
}

/// Maximizes `|T₂,₃|` over Schur parameters: half the budget on uniform
/// random draws, the rest on pattern-search refinement of the best draws.
/// Every draw and start is a pure function of `(seed, index)`.
pub fn sharpness_search(p: &PsiTarget, budget: usize, seed: u64) -> Result<SearchReport> {
    if budget == 0 {
        return Err(Error::EmptyBudget);
    }
    let report = sharp_bound_t23(p)?;
    let draws = (budget / 2).max(1);
    let mut sampled: Vec<(f64, u64)> = (0..draws as u64)
        .into_par_iter()
        .map(|i| (objective(p, &random_point(seed, i)), i))
        .collect();
    sampled.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let starts = MAX_STARTS.min(draws);
    let per_start = (budget - draws) / starts;
    let refined: Vec<(Point, f64, usize)> = sampled[..starts]
        .par_iter()
        .map(|&(fx, i)| refine(p, random_point(seed, i), fx, per_start))
        .collect();

    let evaluations = draws + refined.iter().map(|r| r.2).sum::<usize>();
    // first maximum wins on ties
    let (x, best, _) = refined
        .iter()
        .copied()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("at least one start");
    let best_gamma = params_of(&x)
        .gamma()
        .iter()
        .map(|g| [g.re, g.im])
        .collect();
    Ok(SearchReport {
        bound: report.bound,
        best,
        gap: report.bound - best,
        best_gamma,
        evaluations,
        certified: report.certified(),
    })
}

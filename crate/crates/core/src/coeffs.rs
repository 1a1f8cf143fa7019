//! Taylor coefficients of `f ∈ C(Ψ)` from the subordination
//! `1 + z f″/f′ = Ψ∘ω`, and Toeplitz determinants built from them.

use num_complex::Complex64;

use crate::bounds::r_params;
use crate::error::{Error, Result};
use crate::psi::PsiTarget;
use crate::schwarz::SchwarzJet;
use crate::series::TruncatedSeries;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(a₂, a₃, a₄)` of `f(z) = z + a₂z² + a₃z³ + a₄z⁴ + …`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientVector {
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
}

impl CoefficientVector {
    pub fn new(a2: Complex64, a3: Complex64, a4: Complex64) -> Self {
        Self { a2, a3, a4 }
    }

    /// `[a₁, a₂, a₃, a₄]` with `a₁ = 1`, the layout [`toeplitz_det`] takes.
    pub fn sequence(&self) -> [Complex64; 4] {
        [ONE, self.a2, self.a3, self.a4]
    }
}

/// Solves `1 + z f″/f′ = P` for `f = z + a₂z² + …` given `P = 1 + Σ pₙzⁿ`
/// of order `N`; the result has order `N + 1`.
///
/// Uses `n(n−1)aₙ = Σ_{k<n} k aₖ p_{n−k}` with `a₁ = 1`.
pub fn solve_convex_ode(p: &TruncatedSeries) -> TruncatedSeries {
    let order = p.order() + 1;
    let mut a = vec![ZERO; order + 1];
    a[1] = ONE;
    for n in 2..=order {
        let s: Complex64 = (1..n).map(|k| a[k] * (k as f64) * p.coeff(n - k)).sum();
        a[n] = s / ((n * (n - 1)) as f64);
    }
    TruncatedSeries::new(a, order)
}

/// Reference route: compose `Ψ` with `ω` through order 3 and run the
/// coefficient recurrence.
pub fn coeffs_from_subordination(p: &PsiTarget, j: &SchwarzJet) -> CoefficientVector {
    let psi = p.jet();
    let p1 = psi.d1 * j.c1;
    let p2 = psi.d1 * j.c2 + psi.d2 * j.c1 * j.c1 / 2.0;
    let p3 = psi.d1 * j.c3 + psi.d2 * j.c1 * j.c2 + psi.d3 * j.c1 * j.c1 * j.c1 / 6.0;
    let f = solve_convex_ode(&TruncatedSeries::new([ONE, p1, p2, p3], 3));
    CoefficientVector::new(f.coeff(2), f.coeff(3), f.coeff(4))
}

/// `a₃ = (Ψ′(0)/6)(c₂ + (Ψ′(0) + Ψ″(0)/(2Ψ′(0)))c₁²)`.
pub fn a3_closed_form(p: &PsiTarget, j: &SchwarzJet) -> Result<Complex64> {
    let psi = p.jet();
    if !(psi.d1 > 0.0) {
        return Err(Error::DegenerateDerivative(psi.d1));
    }
    let lambda = psi.d1 + psi.d2 / (2.0 * psi.d1);
    Ok(psi.d1 / 6.0 * (j.c2 + lambda * j.c1 * j.c1))
}

/// `a₄ = (Ψ′(0)/12)(c₃ + r₁c₁c₂ + r₂c₁³)`.
pub fn a4_closed_form(p: &PsiTarget, j: &SchwarzJet) -> Result<Complex64> {
    let (r1, r2) = r_params(p)?;
    Ok(p.jet().d1 / 12.0 * (j.c3 + r1 * j.c1 * j.c2 + r2 * j.c1 * j.c1 * j.c1))
}

/// Determinant of the `m × m` symmetric Toeplitz matrix with first row
/// `(aₙ, …, a_{n+m−1})`. `a[k]` holds `a_{k+1}`, so `a[0]` is `a₁ = 1`.
pub fn toeplitz_det(a: &[Complex64], m: usize, n: usize) -> Result<Complex64> {
    let needed = n + m - 1;
    if n == 0 || m == 0 || a.len() < needed {
        return Err(Error::InsufficientCoefficients {
            needed,
            got: a.len(),
        });
    }
    let t = |d: usize| a[n - 1 + d];
    Ok(match m {
        1 => t(0),
        2 => t(0) * t(0) - t(1) * t(1),
        3 => {
            let (x, y, w) = (t(0), t(1), t(2));
            x * (x * x - y * y) - y * (y * x - y * w) + w * (y * y - x * w)
        }
        _ => {
            let mut mat: Vec<Vec<Complex64>> = (0..m)
                .map(|i| (0..m).map(|j| t(i.abs_diff(j))).collect())
                .collect();
            lu_det(&mut mat)
        }
    })
}

/// Determinant by LU with partial pivoting; consumes the matrix.
fn lu_det(mat: &mut [Vec<Complex64>]) -> Complex64 {
    let m = mat.len();
    let mut det = ONE;
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| mat[i][col].norm().total_cmp(&mat[j][col].norm()))
            .unwrap();
        if mat[pivot][col] == ZERO {
            return ZERO;
        }
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        let d = mat[col][col];
        det *= d;
        for row in col + 1..m {
            let factor = mat[row][col] / d;
            if factor == ZERO {
                continue;
            }
            for k in col..m {
                let v = mat[col][k];
                mat[row][k] -= factor * v;
            }
        }
    }
    det
}

/// `|T₂,₃(f)| = |a₃² − a₄²|`.
pub fn t23(v: &CoefficientVector) -> f64 {
    (v.a3 * v.a3 - v.a4 * v.a4).norm()
}

//! Schwarz functions `ω: 𝕌 → 𝕌`, `ω(0) = 0`, parametrized by Schur parameters.
//!
//! A depth-`d` parameter list `(γ₀, …, γ_{d-1})` defines the rational
//! self-map obtained by running the Schur recursion backwards from the
//! constant `ψ_{d-1} ≡ γ_{d-1}`:
//!
//! ```text
//! ψ_k(z) = (γ_k + z ψ_{k+1}(z)) / (1 + conj(γ_k) z ψ_{k+1}(z)),   ω(z) = z ψ_0(z)
//! ```
//!
//! Every triple `(c₁, c₂, c₃)` of Taylor coefficients reachable by a Schwarz
//! function is produced by some depth-3 parameter list.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Moduli within this distance of 1 are treated as unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-15;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurParams {
    gamma: [Complex64; 3],
    depth: usize,
}

impl SchurParams {
    pub fn new(gamma: &[Complex64]) -> Result<Self> {
        if gamma.is_empty() || gamma.len() > 3 {
            return Err(Error::SchurDepth(gamma.len()));
        }
        for (index, g) in gamma.iter().enumerate() {
            let modulus = g.norm();
            if !(modulus <= 1.0 + UNIMODULAR_TOL) {
                return Err(Error::SchurOutOfDisk { index, modulus });
            }
        }
        let mut out = [ZERO; 3];
        out[..gamma.len()].copy_from_slice(gamma);
        let mut params = Self {
            gamma: out,
            depth: gamma.len(),
        };
        // a unimodular parameter determines the function; drop the tail
        if let Some(k) = (0..params.depth).find(|&k| params.gamma[k].norm() >= 1.0 - UNIMODULAR_TOL) {
            params.gamma[k] /= params.gamma[k].norm();
            for g in &mut params.gamma[k + 1..] {
                *g = ZERO;
            }
            params.depth = k + 1;
        }
        Ok(params)
    }

    /// Builds parameters from polar coordinates `(ρ_k, θ_k)`, clamping
    /// each radius into `[0, 1]`.
    pub fn from_polar(polar: &[(f64, f64)]) -> Result<Self> {
        let gamma: Vec<_> = polar
            .iter()
            .map(|&(r, t)| Complex64::from_polar(r.clamp(0.0, 1.0), t))
            .collect();
        Self::new(&gamma)
    }

    pub fn gamma(&self) -> &[Complex64] {
        &self.gamma[..self.depth]
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn padded(&self) -> [Complex64; 3] {
        self.gamma
    }

    /// Taylor series of the Schwarz function to the given order.
    pub fn omega_series(&self, order: usize) -> TruncatedSeries {
        let z = TruncatedSeries::identity(order);
        let mut psi = TruncatedSeries::constant(self.gamma[self.depth - 1], order);
        for k in (0..self.depth - 1).rev() {
            let g = self.gamma[k];
            let zpsi = &z * &psi;
            let num = &TruncatedSeries::constant(g, order) + &zpsi;
            let den = &TruncatedSeries::one(order) + &zpsi.scale(g.conj());
            // |g| <= 1 and z psi vanishes at 0, so den(0) = 1
            psi = num.div(&den).expect("Schur denominator has unit constant term");
        }
        &z * &psi
    }

    /// Pointwise evaluation of the Schwarz function.
    pub fn omega_eval(&self, z: Complex64) -> Complex64 {
        let mut psi = self.gamma[self.depth - 1];
        for k in (0..self.depth - 1).rev() {
            let g = self.gamma[k];
            psi = (g + z * psi) / (1.0 + g.conj() * z * psi);
        }
        z * psi
    }
}

/// The coefficients `c₁, c₂, c₃` of a Schwarz function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzJet {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub source: Option<SchurParams>,
}

impl SchwarzJet {
    /// A bare jet with no generating parameters.
    pub fn from_coeffs(c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        Self {
            c1,
            c2,
            c3,
            source: None,
        }
    }

    pub fn zero() -> Self {
        Self::from_coeffs(ZERO, ZERO, ZERO)
    }

    /// Jet of the rotation `ω(z) = e^{iθ} z`.
    pub fn rotation(theta: f64) -> Self {
        jet_from_schur(&SchurParams::new(&[Complex64::from_polar(1.0, theta)]).unwrap())
    }

    /// Checks `|c₁| ≤ 1` and `|c₂| ≤ 1 − |c₁|²` up to `tol`.
    pub fn satisfies_schur_bounds(&self, tol: f64) -> bool {
        let m1 = self.c1.norm();
        m1 <= 1.0 + tol && self.c2.norm() <= 1.0 - m1 * m1 + tol
    }

    /// Rotation action `c_n -> c_n e^{inθ}`, i.e. the jet of `ω(e^{iθ} z)`.
    pub fn rotate(&self, theta: f64) -> Self {
        let e = Complex64::from_polar(1.0, theta);
        Self::from_coeffs(self.c1 * e, self.c2 * e * e, self.c3 * e * e * e)
    }

    /// Multiplies every coefficient by `k`; the result is generally not a
    /// Schwarz jet, so the parameter source is dropped.
    pub fn scaled(&self, k: f64) -> Self {
        Self::from_coeffs(self.c1 * k, self.c2 * k, self.c3 * k)
    }

    /// Taylor series of the underlying function: the Schur rational map
    /// when parameters are known, otherwise the cubic `c₁z + c₂z² + c₃z³`.
    pub fn omega_series(&self, order: usize) -> TruncatedSeries {
        match &self.source {
            Some(p) => p.omega_series(order),
            None => TruncatedSeries::new([ZERO, self.c1, self.c2, self.c3], order),
        }
    }

    pub fn omega_eval(&self, z: Complex64) -> Complex64 {
        match &self.source {
            Some(p) => p.omega_eval(z),
            None => z * (self.c1 + z * (self.c2 + z * self.c3)),
        }
    }
}

/// Closed-form jet of the Schur map.
pub fn jet_from_schur(p: &SchurParams) -> SchwarzJet {
    let [g0, g1, g2] = p.padded();
    let w0 = 1.0 - g0.norm_sqr();
    let w1 = 1.0 - g1.norm_sqr();
    SchwarzJet {
        c1: g0,
        c2: w0 * g1,
        c3: w0 * (g2 * w1 - g0.conj() * g1 * g1),
        source: Some(*p),
    }
}

/// A point drawn uniformly from the closed unit disk.
pub fn sample_disk<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let x: f64 = rng.random_range(-1.0..=1.0);
        let y: f64 = rng.random_range(-1.0..=1.0);
        if x * x + y * y <= 1.0 {
            return Complex64::new(x, y);
        }
    }
}

/// The generator used for draw `index` under `seed`; independent of how
/// draws are sharded.
pub fn indexed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Depth-3 Schur parameters with each `γ_k` uniform on the closed disk.
pub fn sample_params(seed: u64, index: u64) -> SchurParams {
    let mut rng = indexed_rng(seed, index);
    let gamma = [sample_disk(&mut rng), sample_disk(&mut rng), sample_disk(&mut rng)];
    SchurParams::new(&gamma).expect("disk samples are admissible")
}

pub fn sample_random(seed: u64, count: usize) -> Vec<SchwarzJet> {
    (0..count as u64)
        .map(|i| jet_from_schur(&sample_params(seed, i)))
        .collect()
}

/// `|c₂ + λc₁²|`.
pub fn lemma1_functional(j: &SchwarzJet, lambda: Complex64) -> f64 {
    (j.c2 + lambda * j.c1 * j.c1).norm()
}

/// The sharp upper bound `max{1, |λ|}` for [`lemma1_functional`].
pub fn lemma1_bound(lambda: Complex64) -> f64 {
    lambda.norm().max(1.0)
}

/// `|c₃ + ν₁c₁c₂ + ν₂c₁³|`.
pub fn lemma2_functional(j: &SchwarzJet, nu1: Complex64, nu2: f64) -> f64 {
    (j.c3 + nu1 * j.c1 * j.c2 + nu2 * j.c1 * j.c1 * j.c1).norm()
}

/// Sharp upper bound for [`lemma2_functional`] at real `(ν₁, ν₂)` in one
/// of the seven regions: `max{1, |ν₂|}`. On regions 3–7 this is `|ν₂|`;
/// on regions 1–2 it is 1 (attained by `ω(z) = z³`).
pub fn lemma2_bound(nu2: f64) -> f64 {
    nu2.abs().max(1.0)
}

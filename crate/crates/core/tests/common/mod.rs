//! Brute-force symmetric multilinear forms for `F(z) = z f(z)` on `ℂ²` with
//! `f` a polynomial of degree at most 3 and `f(0) = 1`.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use toeplitz_core::schwarz::sample_disk;

pub type C = Complex64;

pub struct PolySeed {
    /// `f_{(a,b)}` multiplies `z₁ᵃ z₂ᵇ`.
    pub coeffs: Vec<((usize, usize), C)>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).product::<usize>() as f64
}

impl PolySeed {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut coeffs = vec![((0, 0), C::new(1.0, 0.0))];
        for d in 1..=3 {
            for a in 0..=d {
                coeffs.push(((a, d - a), sample_disk(rng) * 2.0));
            }
        }
        Self { coeffs }
    }

    fn f(&self, a: usize, b: usize) -> C {
        self.coeffs
            .iter()
            .find(|(m, _)| *m == (a, b))
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    /// Coefficient of `z^α` in `F_k = z_k f`.
    fn h(&self, k: usize, a: usize, b: usize) -> C {
        match k {
            0 if a >= 1 => self.f(a - 1, b),
            1 if b >= 1 => self.f(a, b - 1),
            _ => C::default(),
        }
    }

    /// `bⱼ` of `ζ ↦ f(ζz)`.
    pub fn directional_coeffs(&self, z: &[C; 2]) -> Vec<C> {
        (0..=3)
            .map(|j| (0..=j).map(|a| self.f(a, j - a) * z[0].powu(a as u32) * z[1].powu((j - a) as u32)).sum())
            .collect()
    }

    /// `D^mF_k(0)(v₁, …, v_m)` summed over all index tuples.
    pub fn multilinear(&self, k: usize, vs: &[[C; 2]]) -> C {
        let m = vs.len();
        let mut total = C::default();
        for mask in 0..(1usize << m) {
            let b = mask.count_ones() as usize;
            let a = m - b;
            let mut prod = C::new(1.0, 0.0);
            for (j, v) in vs.iter().enumerate() {
                prod *= v[(mask >> j) & 1];
            }
            total += self.h(k, a, b) * factorial(a) * factorial(b) * prod;
        }
        total
    }

    /// `D^mF(0)(v₁, …, v_m)` as a vector.
    pub fn multilinear_vec(&self, vs: &[[C; 2]]) -> [C; 2] {
        [self.multilinear(0, vs), self.multilinear(1, vs)]
    }

    /// Left side of the polydisk inequality straight from the forms.
    pub fn t42_lhs_oracle(&self, z: &[C; 2]) -> f64 {
        let inner4 = self.multilinear_vec(&[*z; 4]).map(|c| c / 24.0);
        let inner3 = self.multilinear_vec(&[*z; 3]).map(|c| c / 6.0);
        (0..2)
            .map(|k| {
                let t4 = self.multilinear(k, &[*z, *z, *z, inner4]) / 24.0;
                let t3 = self.multilinear(k, &[*z, *z, inner3]) / 6.0;
                (t4 - t3).norm()
            })
            .fold(0.0, f64::max)
    }
}

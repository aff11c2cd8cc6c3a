//! Test functions on sl(2,R) with their Fourier transforms
//! `phi_hat(Y) = int exp(tr(Y x)) phi(x) dx`, Lebesgue measure in `(x, y, z)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::quad;
use crate::sl2::{self, Mat2, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TestFnError {
    #[error("width must be positive, got {0}")]
    BadWidth(f64),
    #[error("polynomial factor has degree {0} > 2")]
    DegreeTooHigh(u32),
    #[error("p(d) is only closed-form on the gaussian families")]
    NotClosed,
}

/// Polynomial in `(x, y, z)` with real coefficients, keyed by exponents.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Poly {
    pub terms: BTreeMap<[u32; 3], f64>,
}

impl Poly {
    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly::default();
        p.add_term([0, 0, 0], c);
        p
    }

    pub fn monomial(exp: [u32; 3], c: f64) -> Self {
        let mut p = Poly::default();
        p.add_term(exp, c);
        p
    }

    pub fn add_term(&mut self, exp: [u32; 3], c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&exp);
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = *e;
                ne[i] -= 1;
                out.add_term(ne, c * f64::from(e[i]));
            }
        }
        out
    }

    /// Multiply by `(v_i - a)`.
    pub fn mul_shifted(&self, i: usize, a: f64) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            let mut ne = *e;
            ne[i] += 1;
            out.add_term(ne, *c);
            out.add_term(*e, -a * c);
        }
        out
    }

    pub fn eval(&self, v: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * v[0].powi(e[0] as i32) * v[1].powi(e[1] as i32) * v[2].powi(e[2] as i32)
            })
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    PolyGaussian,
    Bump,
}

/// `P(v) exp(-|v - c|^2 / (2 w^2))` for the gaussian families;
/// `exp(1 - 1/(1 - |v - c|^2/w^2))` on `|v - c| < w` for the bump.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestFunction {
    pub id: String,
    pub family: Family,
    pub center: [f64; 3],
    pub width: f64,
    pub poly: Poly,
}

/// Gaussian tail beyond this many widths is below 1e-16 relative.
const GAUSS_CUTOFF: f64 = 8.6;

fn dist2(v: [f64; 3], c: [f64; 3]) -> f64 {
    (0..3).map(|i| (v[i] - c[i]).powi(2)).sum()
}

fn double_factorial_odd(j: u32) -> f64 {
    // (j-1)!! for even j
    (1..j).step_by(2).map(f64::from).product()
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

impl TestFunction {
    pub fn gaussian(center: [f64; 3], width: f64) -> Result<Self, TestFnError> {
        if width.is_nan() || width <= 0.0 {
            return Err(TestFnError::BadWidth(width));
        }
        Ok(Self {
            id: format!("gauss(c={center:?},w={width})"),
            family: Family::Gaussian,
            center,
            width,
            poly: Poly::one(),
        })
    }

    pub fn poly_gaussian(center: [f64; 3], width: f64, poly: Poly) -> Result<Self, TestFnError> {
        if poly.degree() > 2 {
            return Err(TestFnError::DegreeTooHigh(poly.degree()));
        }
        let mut t = Self::gaussian(center, width)?;
        t.family = Family::PolyGaussian;
        t.id = format!("polygauss(c={center:?},w={width},deg={})", poly.degree());
        t.poly = poly;
        Ok(t)
    }

    pub fn bump(center: [f64; 3], radius: f64) -> Result<Self, TestFnError> {
        if radius.is_nan() || radius <= 0.0 {
            return Err(TestFnError::BadWidth(radius));
        }
        Ok(Self {
            id: format!("bump(c={center:?},r={radius})"),
            family: Family::Bump,
            center,
            width: radius,
            poly: Poly::one(),
        })
    }

    pub fn zero() -> Self {
        let mut t = Self::gaussian([0.0; 3], 1.0).unwrap();
        t.poly = Poly::default();
        t.family = Family::PolyGaussian;
        t.id = "zero".into();
        t
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn center_norm(&self) -> f64 {
        dist2(self.center, [0.0; 3]).sqrt()
    }

    /// Radius about the origin outside of which `phi` is negligible (exactly
    /// zero for the bump).
    pub fn support_radius(&self) -> f64 {
        match self.family {
            Family::Bump => self.center_norm() + self.width,
            Family::Gaussian => self.center_norm() + GAUSS_CUTOFF * self.width,
            Family::PolyGaussian => {
                let extra = 0.6 * f64::from(self.poly.degree());
                self.center_norm() + (GAUSS_CUTOFF + extra) * self.width
            }
        }
    }

    pub fn eval(&self, v: [f64; 3]) -> f64 {
        let d2 = dist2(v, self.center);
        match self.family {
            Family::Bump => {
                let t = d2 / (self.width * self.width);
                if t >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - t)).exp()
                }
            }
            _ => self.poly.eval(v) * (-d2 / (2.0 * self.width * self.width)).exp(),
        }
    }

    /// Fourier transform at a coadjoint vector `Y`.
    pub fn fourier(&self, y: &Mat2) -> C {
        self.fourier_w(sl2::dual(y))
    }

    /// Fourier transform at the dual vector `w`, `int exp(w . v) phi(v) dv`.
    pub fn fourier_w(&self, w: [C; 3]) -> C {
        let wc: C = (0..3).map(|i| w[i] * self.center[i]).sum();
        match self.family {
            Family::Bump => bump_fourier(self.width, w) * wc.exp(),
            _ => {
                let s2 = self.width * self.width;
                let ww: C = (0..3).map(|i| w[i] * w[i]).sum();
                let g = (2.0 * PI).powf(1.5) * self.width.powi(3) * (wc + ww * (s2 / 2.0)).exp();
                let m: [C; 3] = std::array::from_fn(|i| w[i] * s2 + self.center[i]);
                g * self.moment(m)
            }
        }
    }

    /// `E[P(m + w Z)]`, `Z` standard normal in R^3, analytically continued in `m`.
    fn moment(&self, m: [C; 3]) -> C {
        let s = self.width;
        self.poly
            .terms
            .iter()
            .map(|(e, coef)| {
                let mut prod = C::new(*coef, 0.0);
                for i in 0..3 {
                    let k = e[i];
                    let mut acc = C::default();
                    let mut j = 0;
                    while j <= k {
                        acc += m[i].powu(k - j)
                            * (binom(k, j) * s.powi(j as i32) * double_factorial_odd(j));
                        j += 2;
                    }
                    prod *= acc;
                }
                prod
            })
            .sum()
    }

    /// `p(d) phi` for `p(d) = (1/4) d_x^2 + d_y d_z`.
    pub fn apply_p(&self) -> Result<TestFunction, TestFnError> {
        if self.family == Family::Bump {
            return Err(TestFnError::NotClosed);
        }
        let s2 = self.width * self.width;
        // d_i (P g) = (d_i P - (v_i - c_i)/s2 P) g
        let d = |p: &Poly, i: usize| -> Poly {
            p.derivative(i)
                .add(&p.mul_shifted(i, self.center[i]).scale(-1.0 / s2))
        };
        let xx = d(&d(&self.poly, 0), 0).scale(0.25);
        let yz = d(&d(&self.poly, 2), 1);
        let mut out = self.clone();
        out.family = Family::PolyGaussian;
        out.poly = xx.add(&yz);
        out.id = format!("p(d){}", self.id);
        Ok(out)
    }

    /// Deterministic battery of `n` gaussians with assorted centres and widths.
    pub fn battery(n: usize, seed: u64) -> Vec<TestFunction> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let c = [
                    rng.gen_range(-0.8..0.8),
                    rng.gen_range(-0.8..0.8),
                    rng.gen_range(-0.8..0.8),
                ];
                let w = rng.gen_range(0.6..1.1);
                TestFunction::gaussian(c, w)
                    .unwrap()
                    .with_id(format!("gauss{i}"))
            })
            .collect()
    }
}

fn sinhc(x: C) -> C {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        C::new(1.0, 0.0) + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// Radial reduction of `int_{|u|<R} exp(w . u) b(|u|) du`: the sphere average
/// of `exp(rho w . n)` is `sinh(rho k)/(rho k)` with `k^2 = w . w`.
fn bump_fourier(radius: f64, w: [C; 3]) -> C {
    let kappa = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    let (v, _) = quad::adaptive_1d(0.0, radius, 1e-11, |rho| {
        let t = rho * rho / (radius * radius);
        let b = if t >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - t)).exp()
        };
        sinhc(kappa * rho) * (4.0 * PI * rho * rho * b)
    });
    v
}

pub fn complex(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct 3D Gauss rule for `int exp(w.v) phi(v) dv`, as an oracle.
    fn brute_fourier(phi: &TestFunction, w: [C; 3]) -> C {
        let r = phi.support_radius();
        let rule = quad::composite(-r, r, 12, 12);
        let mut acc = C::default();
        for (x, wx) in rule.iter() {
            for (y, wy) in rule.iter() {
                for (z, wz) in rule.iter() {
                    let v = [x, y, z];
                    let e: C = (0..3).map(|i| w[i] * v[i]).sum();
                    acc += e.exp() * (phi.eval(v) * wx * wy * wz);
                }
            }
        }
        acc
    }

    #[test]
    fn unit_gaussian_mass() {
        let g = TestFunction::gaussian([0.0; 3], 1.0).unwrap();
        let v = g.fourier_w([C::default(); 3]);
        assert!((v.re - (2.0 * PI).powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn fourier_matches_brute_force() {
        let w = [C::new(0.3, 0.9), C::new(-0.2, -0.4), C::new(0.1, 0.6)];
        let g = TestFunction::gaussian([0.3, -0.2, 0.5], 0.8).unwrap();
        let b = brute_fourier(&g, w);
        assert!((g.fourier_w(w) - b).norm() < 1e-9 * b.norm());

        let mut p = Poly::constant(0.5);
        p.add_term([1, 1, 0], 1.3);
        p.add_term([0, 0, 2], -0.7);
        p.add_term([1, 0, 0], 0.2);
        let pg = TestFunction::poly_gaussian([0.1, 0.0, -0.3], 0.7, p).unwrap();
        let b = brute_fourier(&pg, w);
        assert!((pg.fourier_w(w) - b).norm() < 1e-9 * b.norm());

        let bump = TestFunction::bump([0.2, -0.1, 0.3], 1.5).unwrap();
        let b = brute_fourier(&bump, w);
        assert!((bump.fourier_w(w) - b).norm() < 1e-6 * b.norm());
    }

    #[test]
    fn shift_covariance() {
        let w = [C::new(0.0, 1.1), C::new(0.0, -0.3), C::new(0.0, 0.5)];
        let g0 = TestFunction::gaussian([0.0; 3], 0.9).unwrap();
        let c = [0.4, -0.7, 0.2];
        let g1 = TestFunction::gaussian(c, 0.9).unwrap();
        let phase: C = (0..3).map(|i| w[i] * c[i]).sum::<C>().exp();
        assert!((g1.fourier_w(w) - g0.fourier_w(w) * phase).norm() < 1e-12);
    }

    #[test]
    fn imaginary_argument_decays() {
        let g = TestFunction::gaussian([0.2, 0.1, -0.3], 0.8).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..12 {
            let t = k as f64 * 0.5;
            let v = g
                .fourier_w([C::new(0.0, t), C::new(0.0, t), C::default()])
                .norm();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn apply_p_matches_finite_differences() {
        let g = TestFunction::gaussian([0.3, -0.2, 0.5], 0.8).unwrap();
        let pg = g.apply_p().unwrap();
        let h = 1e-3;
        let v = [0.1, 0.4, -0.2];
        let at = |dx: f64, dy: f64, dz: f64| g.eval([v[0] + dx, v[1] + dy, v[2] + dz]);
        let dxx = (at(h, 0.0, 0.0) - 2.0 * at(0.0, 0.0, 0.0) + at(-h, 0.0, 0.0)) / (h * h);
        let dyz =
            (at(0.0, h, h) - at(0.0, h, -h) - at(0.0, -h, h) + at(0.0, -h, -h)) / (4.0 * h * h);
        assert!((pg.eval(v) - (0.25 * dxx + dyz)).abs() < 1e-6);
    }

    #[test]
    fn degree_limit() {
        let p = Poly::monomial([3, 0, 0], 1.0);
        assert_eq!(
            TestFunction::poly_gaussian([0.0; 3], 1.0, p),
            Err(TestFnError::DegreeTooHigh(3))
        );
    }
}

//! Integrals of `mu_lambda^* phi_hat (-sigma + pi^* tau_lambda)` over
//! parameterized cycles, with fibre truncation and tail reports, and the
//! compact and elliptic orbit-integral checks.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::compact_char::{weyl_character, CharError};
use crate::eigendist::{pair_algebra_with, EigenError, LocalExpression, PairingOptions};
use crate::lie_core::{build_root_system, Weight};
use crate::orbit_geom::{
    omega_orbit_cycle, real_part, su2_sphere_cycle, Cycle, CycleShape, GeomError, SCHEDULE,
};
use crate::quad;
use crate::real_structure::OrbitLabel;
use crate::sl2::{self, Mat2, C, I};

pub use crate::testfn::{Family, Poly, TestFnError, TestFunction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CycleError {
    #[error("real part of mu grows on the cycle ({small:.3e} -> {large:.3e})")]
    UnboundedRealPart { small: f64, large: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Char(#[from] CharError),
}

/// `phi_hat(Y) = int exp(tr(Y x)) phi(x) dx`.
pub fn fourier(phi: &TestFunction, y: &Mat2) -> C {
    phi.fourier(y)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleOptions {
    pub schedule: Vec<f64>,
    /// Relative tolerance of each truncated integral.
    pub rel_tol: f64,
}

impl Default for CycleOptions {
    fn default() -> Self {
        Self {
            schedule: SCHEDULE.to_vec(),
            rel_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleIntegral {
    pub value: C,
    /// Truncated values along the schedule.
    pub values: Vec<C>,
    /// `|I(r_j) - I(r_{j-1})|`.
    pub tails: Vec<f64>,
    pub tail_estimate: f64,
    pub quadrature_error: f64,
    /// Tails decrease along the schedule (up to round-off).
    pub converged: bool,
}

/// Tensor Gauss-Legendre rule on the parameter rectangle of `D(r)`,
/// refined by panel doubling. Returns `(value, change at last refinement)`.
/// The form constant `(2 pi i)^{-1}` and the orientation are included.
pub fn integrate_cycle_with<F>(cycle: &Cycle, r: f64, rel_tol: f64, f: F) -> (C, f64)
where
    F: Fn(&Mat2) -> C + Sync,
{
    let d = cycle.domain(r);
    let order = 16;
    let level = |panels: usize| -> C {
        let ru = quad::composite(d[0].0, d[0].1, panels, order);
        let rv = quad::composite(d[1].0, d[1].1, panels, order);
        let rows: Vec<C> = ru
            .nodes
            .par_iter()
            .zip(ru.weights.par_iter())
            .map(|(&u, &wu)| {
                let mut acc = C::default();
                for (v, wv) in rv.iter() {
                    let s = cycle.sample(u, v);
                    acc += f(&s.value) * s.density * wv;
                }
                acc * wu
            })
            .collect();
        rows.into_iter().sum::<C>() * cycle.orientation / (2.0 * std::f64::consts::PI * I)
    };
    let mut panels = 4;
    let mut prev = level(panels);
    loop {
        panels *= 2;
        let cur = level(panels);
        let err = (cur - prev).norm();
        if err <= rel_tol * cur.norm() || err < 1e-300 || panels >= 64 {
            return (cur, err);
        }
        prev = cur;
    }
}

/// Largest `|Re mu|` over a sample grid of `D(r)`.
pub fn max_real_part(cycle: &Cycle, r: f64) -> f64 {
    cycle
        .samples(r, 24, 24)
        .iter()
        .map(|s| sl2::norm(&real_part(cycle.group(), &s.value)))
        .fold(0.0, f64::max)
}

/// Refuse cycles on which `Re mu` keeps growing with the truncation radius.
pub fn check_real_part(cycle: &Cycle, schedule: &[f64]) -> Result<(), CycleError> {
    let (Some(&r0), Some(&r1)) = (schedule.first(), schedule.last()) else {
        return Ok(());
    };
    let small = max_real_part(cycle, r0);
    let large = max_real_part(cycle, r1);
    if large > 1.01 * small + 1e-9 {
        return Err(CycleError::UnboundedRealPart { small, large });
    }
    Ok(())
}

fn tails_decrease(tails: &[f64], scale: f64) -> bool {
    let floor = 1e-12 * scale.max(1e-300);
    tails.windows(2).all(|w| w[1] <= w[0] || w[1] <= floor)
}

pub fn integrate_character_cycle(
    cycle: &Cycle,
    phi: &TestFunction,
    opts: &CycleOptions,
) -> Result<CycleIntegral, CycleError> {
    integrate_cycle_fn(cycle, opts, |y| phi.fourier(y))
}

/// As [`integrate_character_cycle`] for any entire integrand of `mu`.
pub fn integrate_cycle_fn<F>(
    cycle: &Cycle,
    opts: &CycleOptions,
    f: F,
) -> Result<CycleIntegral, CycleError>
where
    F: Fn(&Mat2) -> C + Sync,
{
    check_real_part(cycle, &opts.schedule)?;
    let mut values = Vec::new();
    let mut qerr: f64 = 0.0;
    for &r in &opts.schedule {
        let (v, e) = integrate_cycle_with(cycle, r, opts.rel_tol, &f);
        values.push(v);
        qerr = qerr.max(e);
    }
    let tails: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let value = *values.last().unwrap_or(&C::default());
    Ok(CycleIntegral {
        value,
        tail_estimate: tails.last().copied().unwrap_or(0.0),
        converged: tails_decrease(&tails, value.norm()),
        values,
        tails,
        quadrature_error: qerr,
    })
}

/// `(2 pi i)^{-1} int_{Omega(S, lambda)} phi_hat sigma_lambda`.
pub fn rossmann_orbit_integral(
    label: OrbitLabel,
    l: C,
    phi: &TestFunction,
) -> Result<CycleIntegral, CycleError> {
    let cyc = omega_orbit_cycle(label, l)?;
    integrate_character_cycle(&cyc, phi, &CycleOptions::default())
}

/// Point on the maximal torus of SU(2), `x = i theta H`.
pub fn su2_torus_point(theta: f64) -> Mat2 {
    sl2::h() * C::new(0.0, theta)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KirillovRow {
    pub theta: f64,
    /// `j^{1/2}(x) chi_m(exp x)`
    pub lhs: f64,
    /// `(2 pi)^{-1} int_{orbit} e^{<zeta, x>} sigma`
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KirillovReport {
    pub m: u32,
    pub rows: Vec<KirillovRow>,
    pub max_deviation: f64,
    /// Symplectic volume over `2 pi`.
    pub volume: f64,
}

/// Orbit side of the pointwise Kirillov formula on SU(2).
pub fn su2_orbit_side(m: u32, theta: f64) -> C {
    let cyc = su2_sphere_cycle(m);
    let x = su2_torus_point(theta);
    integrate_cycle_with(&cyc, 1.0, 1e-13, |y| sl2::pair(y, &x).exp()).0
}

pub fn kirillov_su2_check(m: u32, thetas: &[f64]) -> Result<KirillovReport, CycleError> {
    let a1 = build_root_system("A1").expect("A1");
    let lambda = Weight::from_ints(&[i64::from(m)]);
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let chi = weyl_character(&a1, &lambda, &[theta])?;
        let lhs = chi.re * theta.sin() / theta;
        let rhs = su2_orbit_side(m, theta).re;
        rows.push(KirillovRow { theta, lhs, rhs });
    }
    let cyc = su2_sphere_cycle(m);
    let volume = integrate_cycle_with(&cyc, 1.0, 1e-13, |_| C::new(1.0, 0.0))
        .0
        .re;
    Ok(KirillovReport {
        m,
        max_deviation: rows
            .iter()
            .map(|r| (r.lhs - r.rhs).abs())
            .fold(0.0, f64::max),
        rows,
        volume,
    })
}

/// `n` points of `[0.05, 3.05]`, clear of the singular set `pi Z`.
pub fn kirillov_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.05 + 3.0 * i as f64 / (n.max(2) - 1) as f64)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphyProbe {
    pub h: f64,
    pub quotient_h: C,
    pub quotient_half: C,
    pub stable: bool,
}

/// Difference quotients of `l -> int_{C(l)}` at steps `h` and `h / 2`.
pub fn holomorphy_probe<B>(
    build: B,
    phi: &TestFunction,
    l: C,
    h: f64,
) -> Result<HolomorphyProbe, CycleError>
where
    B: Fn(C) -> Cycle,
{
    let opts = CycleOptions {
        schedule: vec![*SCHEDULE.last().unwrap()],
        rel_tol: 1e-13,
    };
    let at = |ll: C| integrate_character_cycle(&build(ll), phi, &opts).map(|r| r.value);
    let v0 = at(l)?;
    let q1 = (at(l + h)? - v0) / h;
    let q2 = (at(l + h / 2.0)? - v0) / (h / 2.0);
    Ok(HolomorphyProbe {
        h,
        quotient_h: q1,
        quotient_half: q2,
        stable: (q1 - q2).norm() <= 1e-2 * q1.norm().max(1e-12),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub case: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub rel_error: f64,
    pub tail_estimate: f64,
    pub runtime_ms: u128,
}

/// Compare `int theta phi` by direct quadrature with the cycle integral.
pub fn compare_with_pairing(
    case: impl Into<String>,
    theta: &LocalExpression,
    cycle: &Cycle,
    phi: &TestFunction,
) -> Result<VerificationRecord, CycleError> {
    let t0 = Instant::now();
    let lhs = pair_algebra_with(
        theta,
        phi,
        PairingOptions {
            rel_tol: 1e-7,
            parallel: true,
        },
    )?;
    let rhs = integrate_character_cycle(cycle, phi, &CycleOptions::default())?;
    Ok(VerificationRecord {
        case: case.into(),
        lhs: [lhs.value.re, lhs.value.im],
        rhs: [rhs.value.re, rhs.value.im],
        rel_error: (lhs.value - rhs.value).norm() / lhs.value.norm().max(1e-300),
        tail_estimate: rhs.tail_estimate,
        runtime_ms: t0.elapsed().as_millis(),
    })
}

/// Whether the cycle is one of the shipped elliptic or conormal sheets.
pub fn is_noncompact(cycle: &Cycle) -> bool {
    !matches!(cycle.shape, CycleShape::Su2Sphere)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit_geom::{conormal_circle_cycle, dlogf_graph_cycle, rotated_conormal_cycle};
    use std::f64::consts::PI;

    #[test]
    fn zero_function() {
        let cyc = conormal_circle_cycle(C::new(0.0, 0.5));
        let r = integrate_cycle_fn(&cyc, &CycleOptions::default(), |_| C::default()).unwrap();
        assert_eq!(r.value, C::default());
    }

    #[test]
    fn kirillov_spot_values() {
        let r0 = kirillov_su2_check(0, &[PI / 2.0]).unwrap();
        assert!((r0.rows[0].rhs - 2.0 / PI).abs() < 1e-9);
        assert!((r0.rows[0].lhs - 2.0 / PI).abs() < 1e-12);
        let r2 = kirillov_su2_check(2, &[PI / 2.0]).unwrap();
        assert!((r2.rows[0].rhs + 2.0 / PI).abs() < 1e-9);
        let r1 = kirillov_su2_check(1, &[1e-4]).unwrap();
        assert!((r1.rows[0].rhs - 2.0).abs() < 1e-6);
        assert!((r1.volume - 2.0).abs() < 1e-10);
    }

    #[test]
    fn flipping_orientation_flips_sign() {
        let phi = TestFunction::gaussian([0.1, 0.2, -0.3], 0.9).unwrap();
        let cyc = dlogf_graph_cycle(OrbitLabel::UpperHalfPlane, C::new(-1.0, 0.0)).unwrap();
        let opts = CycleOptions {
            schedule: vec![8.0],
            rel_tol: 1e-10,
        };
        let a = integrate_character_cycle(&cyc, &phi, &opts).unwrap().value;
        let b = integrate_character_cycle(&cyc.flipped(), &phi, &opts)
            .unwrap()
            .value;
        assert_eq!(a, -b);
    }

    #[test]
    fn rotated_fibre_refused() {
        let phi = TestFunction::gaussian([0.0; 3], 1.0).unwrap();
        let cyc = rotated_conormal_cycle(C::default(), 0.3);
        assert!(matches!(
            integrate_character_cycle(&cyc, &phi, &CycleOptions::default()),
            Err(CycleError::UnboundedRealPart { .. })
        ));
    }

    #[test]
    fn tails_decrease_for_gaussians() {
        let phi = TestFunction::gaussian([0.2, -0.1, 0.1], 0.8).unwrap();
        for cyc in [
            conormal_circle_cycle(C::new(0.0, 0.5)),
            dlogf_graph_cycle(OrbitLabel::UpperHalfPlane, C::new(-2.0, 0.0)).unwrap(),
            omega_orbit_cycle(OrbitLabel::UpperHalfPlane, C::new(-1.0, 0.0)).unwrap(),
        ] {
            let r = integrate_character_cycle(&cyc, &phi, &CycleOptions::default()).unwrap();
            assert!(r.converged, "{:?}: {:?}", cyc.shape, r.tails);
        }
    }
}

//! Verification batteries shared by the command line and the benches.
//! Every report carries its tolerance and a `pass` flag.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coherent::{
    antidominant_mismatches, regular_samples, su2_family, su2_samples, verify_coherence,
    verify_coherence_by, verify_translates_eigen, weights_of_findim, CoherenceReport,
    CoherentError, CoherentFamily,
};
use crate::cycle_integral::{
    compare_with_pairing, kirillov_grid, kirillov_su2_check, CycleError, KirillovReport,
    VerificationRecord,
};
use crate::eigendist::{verify_eigendistribution, EigenError, ResidualReport};
use crate::fixed_point::{
    discrete_series, induced_expression, mobius, mobius_fixed_points, same_point,
    weyl_representative, FixedPointError,
};
use crate::lie_core::{build_root_system, Weight};
use crate::orbit_geom::{
    boundary_probe, conormal_circle_cycle, d_log_f, dlogf_graph_cycle, omega_orbit_cycle,
    orbit_sheet_residual, pullback_residual, CotangentPoint, GeomError, Tangent,
};
use crate::real_structure::{CartanKind, Component, FixedPoint, OrbitLabel};
use crate::testfn::TestFunction;

type C = Complex64;

pub const SCHEMA: &str = "1";

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    FixedPoint(#[from] FixedPointError),
    #[error(transparent)]
    Coherent(#[from] CoherentError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesCase {
    Ds,
    Ps,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PullbackReport {
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const PULLBACK_TOL: f64 = 1e-10;

/// Random cotangent points, parameters and tangent pairs.
pub fn pullback_suite(n: usize, seed: u64) -> PullbackReport {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut rc = |s: f64| C::new(r.gen_range(-s..s), r.gen_range(-s..s));
    let mut max: f64 = 0.0;
    for _ in 0..n {
        let p = CotangentPoint::z(rc(2.0), rc(2.0));
        let mut l = rc(2.0);
        if l.norm() < 0.1 {
            l += 0.1;
        }
        let u = Tangent {
            dz: rc(1.0),
            dxi: rc(1.0),
        };
        let v = Tangent {
            dz: rc(1.0),
            dxi: rc(1.0),
        };
        max = max.max(pullback_residual(&p, l, u, v));
    }
    PullbackReport {
        samples: n,
        max_residual: max,
        tolerance: PULLBACK_TOL,
        pass: max <= PULLBACK_TOL,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KirillovSuite {
    pub reports: Vec<KirillovReport>,
    pub tolerance: f64,
    pub pass: bool,
}

pub const KIRILLOV_TOL: f64 = 1e-6;

pub fn kirillov_suite(ms: &[u32], grid: usize) -> Result<KirillovSuite, SuiteError> {
    let thetas = kirillov_grid(grid);
    let reports = ms
        .iter()
        .map(|&m| kirillov_su2_check(m, &thetas))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.max_deviation <= KIRILLOV_TOL);
    Ok(KirillovSuite {
        reports,
        tolerance: KIRILLOV_TOL,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub case: String,
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralSuite {
    pub records: Vec<VerificationRecord>,
    pub cross: Vec<CrossCheck>,
    pub tolerance: f64,
    pub pass: bool,
}

pub const INTEGRAL_TOL: f64 = 1e-3;

fn finish(records: Vec<VerificationRecord>, cross: Vec<CrossCheck>) -> IntegralSuite {
    let pass = records.iter().all(|r| r.rel_error <= INTEGRAL_TOL)
        && cross.iter().all(|c| c.rel_error <= INTEGRAL_TOL);
    IntegralSuite {
        records,
        cross,
        tolerance: INTEGRAL_TOL,
        pass,
    }
}

/// Character pairing against cycle integrals. Discrete series use both the
/// `d log f` graph and the orbit sheet, principal series the conormal cycle.
pub fn integral_formula_suite(
    case: SeriesCase,
    battery: &[TestFunction],
) -> Result<IntegralSuite, SuiteError> {
    let up = OrbitLabel::UpperHalfPlane;
    let mut records = Vec::new();
    let mut cross = Vec::new();
    match case {
        SeriesCase::Ds => {
            for k in 1..=2u32 {
                let l = C::new(-f64::from(k), 0.0);
                let e = discrete_series(up, k)?;
                let graph = dlogf_graph_cycle(up, l)?;
                let orbit = omega_orbit_cycle(up, l)?;
                for phi in battery {
                    let g = compare_with_pairing(
                        format!("ds k={k} graph {}", phi.id),
                        &e,
                        &graph,
                        phi,
                    )?;
                    let o = compare_with_pairing(
                        format!("ds k={k} orbit {}", phi.id),
                        &e,
                        &orbit,
                        phi,
                    )?;
                    let (gv, ov) = (C::new(g.rhs[0], g.rhs[1]), C::new(o.rhs[0], o.rhs[1]));
                    cross.push(CrossCheck {
                        case: format!("ds k={k} graph/orbit {}", phi.id),
                        rel_error: (gv - ov).norm() / ov.norm().max(1e-300),
                    });
                    records.push(g);
                    records.push(o);
                }
            }
        }
        SeriesCase::Ps => {
            for nu in [C::new(0.0, 0.0), C::new(0.0, 0.5), C::new(0.0, 1.0)] {
                let e = induced_expression(1, nu)?;
                let cyc = conormal_circle_cycle(nu);
                for phi in battery {
                    records.push(compare_with_pairing(
                        format!("ps nu={nu} {}", phi.id),
                        &e,
                        &cyc,
                        phi,
                    )?);
                }
            }
        }
    }
    Ok(finish(records, cross))
}

/// Discrete-series pairings against the integral over the orbit sheet alone.
pub fn rossmann_suite(ks: &[u32], battery: &[TestFunction]) -> Result<IntegralSuite, SuiteError> {
    let up = OrbitLabel::UpperHalfPlane;
    let mut records = Vec::new();
    for &k in ks {
        let l = C::new(-f64::from(k), 0.0);
        let e = discrete_series(up, k)?;
        let orbit = omega_orbit_cycle(up, l)?;
        for phi in battery {
            records.push(compare_with_pairing(
                format!("k={k} {}", phi.id),
                &e,
                &orbit,
                phi,
            )?);
        }
    }
    Ok(finish(records, Vec::new()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenSuite {
    pub cases: Vec<(String, ResidualReport)>,
    pub pass: bool,
}

pub fn eigen_suite(case: SeriesCase, battery: &[TestFunction]) -> Result<EigenSuite, SuiteError> {
    let mut cases = Vec::new();
    match case {
        SeriesCase::Ds => {
            for k in 1..=3 {
                let e = discrete_series(OrbitLabel::UpperHalfPlane, k)?;
                cases.push((
                    format!("ds k={k}"),
                    verify_eigendistribution(&e, e.l, battery)?,
                ));
            }
        }
        SeriesCase::Ps => {
            for nu in [C::new(0.0, 0.0), C::new(0.0, 0.5), C::new(0.0, 1.0)] {
                let e = induced_expression(1, nu)?;
                cases.push((
                    format!("ps nu={nu}"),
                    verify_eigendistribution(&e, nu, battery)?,
                ));
            }
        }
    }
    Ok(EigenSuite {
        pass: cases.iter().all(|(_, r)| r.pass),
        cases,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherentSuite {
    pub clebsch_gordan: Vec<CoherenceReport>,
    pub ds_translation: Vec<CoherenceReport>,
    pub antidominant_mismatches: Vec<i64>,
    pub lattice_compatible: bool,
    pub corrupted_detected: bool,
    pub eigen: Vec<(i64, ResidualReport)>,
    pub pass: bool,
}

/// Coherence checks; `eigen_battery` may be empty to skip the
/// infinitesimal-character tracking of translates.
pub fn coherent_suite(eigen_battery: &[TestFunction]) -> Result<CoherentSuite, SuiteError> {
    let a1 = build_root_system("A1").expect("A1");
    let w = |j: i64| weights_of_findim(&a1, &Weight::from_ints(&[j]));
    let w1 = w(1)?;
    let clebsch_gordan = (1..=5)
        .map(|m| verify_coherence(&su2_family(m), &w1, &su2_samples(100, 3)))
        .collect::<Result<Vec<_>, _>>()?;
    let fam = CoherentFamily::new(discrete_series(OrbitLabel::UpperHalfPlane, 1)?);
    let samples = regular_samples(50, 9);
    let ds_translation = (0..=2)
        .map(|j| Ok(verify_coherence(&fam, &w(j)?, &samples)?))
        .collect::<Result<Vec<_>, SuiteError>>()?;
    let anti = antidominant_mismatches(&fam, OrbitLabel::UpperHalfPlane, &[0, -1, -2, -3, -4])?;
    let lattice_compatible =
        (-3..=3).all(|a| (-3..=3).all(|b| fam.member(a + b) == fam.rebased(a).member(b)));
    let corrupted = verify_coherence_by(
        |n| {
            let mut e = fam.member(n);
            if n == 1 {
                let c = Component::Split {
                    eps: 1,
                    positive: true,
                };
                e.set(
                    c,
                    FixedPoint::Infinity,
                    e.get(c, FixedPoint::Infinity) + 0.5,
                );
            }
            e
        },
        &w1,
        &samples,
    )?;
    let eigen = if eigen_battery.is_empty() {
        Vec::new()
    } else {
        verify_translates_eigen(&fam, &[-1, 1, 2], eigen_battery)?
    };
    let pass = clebsch_gordan.iter().all(|r| r.pass)
        && ds_translation.iter().all(|r| r.pass)
        && anti.is_empty()
        && lattice_compatible
        && !corrupted.pass
        && eigen.iter().all(|(_, r)| r.pass);
    Ok(CoherentSuite {
        clebsch_gordan,
        ds_translation,
        antidominant_mismatches: anti,
        lattice_compatible,
        corrupted_detected: !corrupted.pass,
        eigen,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometrySuite {
    pub dlogf_at_i: f64,
    pub samples: usize,
    pub max_sheet_residual: f64,
    pub probe: Vec<(f64, f64, f64)>,
    pub probe_pass: bool,
    pub pass: bool,
}

/// `d log f` at the base point, graph points landing on the orbit sheet and
/// decay of `f` at the circle.
pub fn geometry_suite(k: u32, n: usize) -> Result<GeometrySuite, SuiteError> {
    let up = OrbitLabel::UpperHalfPlane;
    let kf = f64::from(k);
    let l = C::new(-kf, 0.0);
    let dlogf_at_i = d_log_f(up, C::new(0.0, 1.0), kf)?.norm();
    let cyc = dlogf_graph_cycle(up, l)?;
    let side = (n as f64).sqrt().ceil() as usize;
    let pts = cyc.samples(6.0, side, side);
    let samples = pts.len().min(n);
    let max_sheet_residual = pts
        .iter()
        .take(n)
        .map(|s| orbit_sheet_residual(up, l, &s.value))
        .fold(0.0, f64::max);
    let x = 0.4;
    let probe = boundary_probe(x, kf, 8);
    let limit = (2.0 / (1.0 + x * x)).powf(kf);
    let decreasing = probe.windows(2).all(|w| w[1].1 < w[0].1);
    let last = probe.last().expect("depth > 0");
    let probe_pass = decreasing && (last.2 - limit).abs() <= 1e-6 * limit;
    Ok(GeometrySuite {
        dlogf_at_i,
        samples,
        max_sheet_residual,
        pass: dlogf_at_i <= 1e-10 && max_sheet_residual <= 1e-8 && probe_pass,
        probe,
        probe_pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringSuite {
    pub elements: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Every regular Cartan element has two fixed points on the projective line,
/// exchanged by the Weyl representative.
pub fn covering_suite(n: usize, seed: u64) -> CoveringSuite {
    let mut failures = Vec::new();
    let samples = regular_samples(n, seed);
    for t in &samples {
        let g = t.matrix();
        let fps = mobius_fixed_points(&g);
        let kind = t.kind();
        let w = weyl_representative(kind);
        let ok = fps.len() == 2
            && !same_point(fps[0], fps[1])
            && fps.iter().all(|&p| same_point(mobius(&g, p), p))
            && same_point(mobius(&w, fps[0]), fps[1])
            && same_point(mobius(&w, fps[1]), fps[0])
            && expected_points(kind)
                .iter()
                .all(|q| fps.iter().any(|&p| same_point(p, *q)));
        if !ok {
            failures.push(format!("{t:?}: {fps:?}"));
        }
    }
    CoveringSuite {
        elements: samples.len(),
        pass: failures.is_empty(),
        failures,
    }
}

fn expected_points(kind: CartanKind) -> Vec<Option<C>> {
    FixedPoint::for_cartan(kind)
        .iter()
        .map(|x| x.coordinate())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites() {
        assert!(pullback_suite(200, 1).pass);
        assert!(covering_suite(60, 2).pass);
        let g = geometry_suite(2, 100).unwrap();
        assert!(g.pass, "{g:?}");
        assert!(coherent_suite(&[]).unwrap().pass);
    }
}

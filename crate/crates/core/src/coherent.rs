//! Coherent families of local expressions and translation by
//! finite-dimensional characters.
//!
//! A member at `l + n` keeps the coefficients on the compact Cartan and on
//! the identity-side split components and picks up `e^{n omega}(-I) =
//! (-1)^n` on `eps = -1`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::compact_char::{weight_multiplicities, weight_sum, CharError};
use crate::eigendist::{verify_eigendistribution, EigenError, LocalExpression, ResidualReport};
use crate::fixed_point::{discrete_series_expression, FixedPointError};
use crate::lie_core::{RootSystem, Weight};
use crate::real_structure::{CartanElement, Component, Group, OrbitLabel};
use crate::testfn::TestFunction;

type C = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoherentError {
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    FixedPoint(#[from] FixedPointError),
    #[error("weights of rank {got} do not match the rank-one family")]
    Rank { got: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherentFamily {
    pub base: LocalExpression,
}

impl CoherentFamily {
    pub fn new(base: LocalExpression) -> Self {
        Self { base }
    }

    pub fn base_l(&self) -> C {
        self.base.l
    }

    fn shifted(&self, n: i64) -> LocalExpression {
        let mut e = self.base.clone();
        e.l = self.base.l + n as f64;
        if n.rem_euclid(2) == 1 {
            for ((comp, _), d) in e.coeffs.iter_mut() {
                if matches!(comp, Component::Split { eps: -1, .. }) {
                    *d = -*d;
                }
            }
        }
        e
    }

    /// Member at `l_0 + n`; at the singular parameter only the
    /// antisymmetrized part is kept.
    pub fn member(&self, n: i64) -> LocalExpression {
        let e = self.shifted(n);
        if e.l == C::default() {
            e.symmetrized()
        } else {
            e
        }
    }

    /// Family re-based at `l_0 + n`.
    pub fn rebased(&self, n: i64) -> CoherentFamily {
        CoherentFamily::new(self.shifted(n))
    }
}

/// Weight multiset of the irreducible representation of highest weight `lambda_f`.
pub fn weights_of_findim(
    rs: &RootSystem,
    lambda_f: &Weight,
) -> Result<BTreeMap<Weight, u64>, CoherentError> {
    Ok(weight_multiplicities(rs, lambda_f)?)
}

/// `sum_mu n_mu member(l + mu)` as a list of `(n_mu, member)`.
pub fn translate(
    family: &CoherentFamily,
    weights: &BTreeMap<Weight, u64>,
) -> Result<Vec<(u64, LocalExpression)>, CoherentError> {
    let mut out = Vec::with_capacity(weights.len());
    for (mu, n) in weights {
        if mu.rank() != 1 {
            return Err(CoherentError::Rank { got: mu.rank() });
        }
        let shift = mu.coords[0].to_integer();
        out.push((*n, family.member(shift)));
    }
    Ok(out)
}

/// Finite-dimensional character `sum_mu n_mu e^{mu}` at a Cartan element.
pub fn findim_character(weights: &BTreeMap<Weight, u64>, t: CartanElement) -> C {
    match t {
        CartanElement::Compact { theta } => weight_sum(weights, &[theta]),
        CartanElement::Split { eps, s } => weights
            .iter()
            .map(|(mu, n)| {
                let m = mu.coords[0].to_integer();
                let sign = if eps < 0 && m.rem_euclid(2) == 1 {
                    -1.0
                } else {
                    1.0
                };
                C::new(*n as f64 * sign * (m as f64 * s).exp(), 0.0)
            })
            .sum(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceFailure {
    pub sample: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub failures: Vec<CoherenceFailure>,
    pub pass: bool,
}

pub const COHERENCE_TOL: f64 = 1e-9;

/// Check `phi_f Theta(l) = sum_mu n_mu Theta(l + mu)` pointwise, with
/// members supplied by `member` (normally [`CoherentFamily::member`]).
pub fn verify_coherence_by<M>(
    member: M,
    weights: &BTreeMap<Weight, u64>,
    samples: &[CartanElement],
) -> Result<CoherenceReport, CoherentError>
where
    M: Fn(i64) -> LocalExpression,
{
    let base = member(0);
    let mut failures = Vec::new();
    let mut max_dev: f64 = 0.0;
    for &t in samples {
        let lhs = findim_character(weights, t) * base.evaluate_group(t)?;
        let mut rhs = C::default();
        for (mu, n) in weights {
            rhs += *n as f64 * member(mu.coords[0].to_integer()).evaluate_group(t)?;
        }
        let dev = (lhs - rhs).norm() / (1.0 + lhs.norm());
        max_dev = max_dev.max(dev);
        if dev > COHERENCE_TOL {
            failures.push(CoherenceFailure {
                sample: format!("{t:?}"),
                lhs: [lhs.re, lhs.im],
                rhs: [rhs.re, rhs.im],
                deviation: dev,
            });
        }
    }
    Ok(CoherenceReport {
        samples: samples.len(),
        max_deviation: max_dev,
        tolerance: COHERENCE_TOL,
        pass: failures.is_empty(),
        failures,
    })
}

pub fn verify_coherence(
    family: &CoherentFamily,
    weights: &BTreeMap<Weight, u64>,
    samples: &[CartanElement],
) -> Result<CoherenceReport, CoherentError> {
    verify_coherence_by(|n| family.member(n), weights, samples)
}

/// Members at antidominant parameters `l_0 + n < 0` against independently
/// built discrete-series expressions; returns the mismatching `n`.
pub fn antidominant_mismatches(
    family: &CoherentFamily,
    label: OrbitLabel,
    shifts: &[i64],
) -> Result<Vec<i64>, CoherentError> {
    let mut bad = Vec::new();
    for &n in shifts {
        let m = family.member(n);
        if m.l.re >= 0.0 {
            continue;
        }
        if discrete_series_expression(label, m.l)? != m {
            bad.push(n);
        }
    }
    Ok(bad)
}

/// `verify_eigendistribution` for each translate at eigenvalue `p_norm(l_0 + n)`.
pub fn verify_translates_eigen(
    family: &CoherentFamily,
    shifts: &[i64],
    battery: &[TestFunction],
) -> Result<Vec<(i64, ResidualReport)>, CoherentError> {
    shifts
        .iter()
        .map(|&n| {
            let m = family.member(n);
            Ok((n, verify_eigendistribution(&m, m.l, battery)?))
        })
        .collect()
}

/// Regular sample points on every component of both Cartans.
pub fn regular_samples(n: usize, seed: u64) -> Vec<CartanElement> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| match i % 3 {
            0 => CartanElement::Compact {
                theta: rng.gen_range(0.05..3.09) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            },
            _ => CartanElement::Split {
                eps: if rng.gen_bool(0.5) { 1 } else { -1 },
                s: rng.gen_range(0.05..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            },
        })
        .collect()
}

/// Compact-torus samples for SU(2).
pub fn su2_samples(n: usize, seed: u64) -> Vec<CartanElement> {
    regular_samples(3 * n, seed)
        .into_iter()
        .filter(|t| matches!(t, CartanElement::Compact { .. }))
        .take(n)
        .collect()
}

/// SU(2) family through `chi_m`.
pub fn su2_family(m: u32) -> CoherentFamily {
    CoherentFamily::new(LocalExpression::su2_character(m))
}

pub fn is_su2(family: &CoherentFamily) -> bool {
    family.base.group == Group::SU2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::discrete_series;
    use crate::lie_core::build_root_system;

    fn a1() -> RootSystem {
        build_root_system("A1").unwrap()
    }

    #[test]
    fn findim_weights() {
        let rs = a1();
        let w0 = weights_of_findim(&rs, &Weight::from_ints(&[0])).unwrap();
        assert_eq!(w0.len(), 1);
        let w1 = weights_of_findim(&rs, &Weight::from_ints(&[1])).unwrap();
        assert_eq!(
            w1.keys().cloned().collect::<Vec<_>>(),
            vec![Weight::from_ints(&[-1]), Weight::from_ints(&[1])]
        );
        let w2 = weights_of_findim(&rs, &Weight::from_ints(&[2])).unwrap();
        assert_eq!(w2.len(), 3);
    }

    #[test]
    fn trivial_translation_is_identity() {
        let fam = CoherentFamily::new(discrete_series(OrbitLabel::UpperHalfPlane, 1).unwrap());
        let w0 = weights_of_findim(&a1(), &Weight::from_ints(&[0])).unwrap();
        let t = translate(&fam, &w0).unwrap();
        assert_eq!(t, vec![(1, fam.base.clone())]);
        assert!(
            verify_coherence(&fam, &w0, &regular_samples(30, 1))
                .unwrap()
                .pass
        );
    }

    #[test]
    fn clebsch_gordan() {
        let w1 = weights_of_findim(&a1(), &Weight::from_ints(&[1])).unwrap();
        for m in 1..6 {
            let fam = su2_family(m);
            let r = verify_coherence(&fam, &w1, &su2_samples(100, 3)).unwrap();
            assert!(r.pass && r.max_deviation < 1e-9, "{r:?}");
            let chi = |j: u32, th: f64| ((j as f64 + 1.0) * th).sin() / th.sin();
            for t in su2_samples(20, 4) {
                let CartanElement::Compact { theta } = t else {
                    unreachable!()
                };
                let v = fam.member(1).evaluate_group(t).unwrap().re
                    + fam.member(-1).evaluate_group(t).unwrap().re;
                assert!((v - chi(m + 1, theta) - chi(m - 1, theta)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn discrete_series_family() {
        let fam = CoherentFamily::new(discrete_series(OrbitLabel::UpperHalfPlane, 1).unwrap());
        let w1 = weights_of_findim(&a1(), &Weight::from_ints(&[1])).unwrap();
        let r = verify_coherence(&fam, &w1, &regular_samples(50, 9)).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(
            antidominant_mismatches(&fam, OrbitLabel::UpperHalfPlane, &[-1, -2, -3])
                .unwrap()
                .is_empty()
        );
        // lattice compatibility
        for (a, b) in [(1, 2), (-2, 3), (-1, -1)] {
            assert_eq!(fam.member(a + b), fam.rebased(a).member(b));
        }
        assert!(fam.member(1).check_symmetry());
    }

    #[test]
    fn corrupted_member_is_localized() {
        let fam = CoherentFamily::new(discrete_series(OrbitLabel::UpperHalfPlane, 2).unwrap());
        let w1 = weights_of_findim(&a1(), &Weight::from_ints(&[1])).unwrap();
        let bad = |n: i64| {
            let mut e = fam.member(n);
            if n == 1 {
                let comp = Component::Split {
                    eps: 1,
                    positive: true,
                };
                let x = crate::real_structure::FixedPoint::Infinity;
                e.set(comp, x, e.get(comp, x) + 0.5);
            }
            e
        };
        let r = verify_coherence_by(bad, &w1, &regular_samples(30, 2)).unwrap();
        assert!(!r.pass);
        assert!(r.failures.iter().all(|f| f.sample.contains("Split")));
    }
}

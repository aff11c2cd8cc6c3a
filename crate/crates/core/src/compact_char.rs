//! Characters of compact connected groups: the Weyl formula as a
//! fixed-point sum, Freudenthal multiplicities and the dimension formula.
//!
//! Torus points are given in coroot coordinates, so `e^mu(theta)` is
//! `exp(i sum_j mu_j theta_j)` for `mu` in fundamental coordinates.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lie_core::{to_f64, LieError, RootSystem, Weight, WeylGroup, Q};

/// Denominator factors smaller than this are treated as vanishing.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharError {
    #[error("weight {0} is not dominant integral")]
    NotDominantIntegral(Weight),
    #[error("torus point is singular: root {root:?} has e^alpha = 1")]
    Singular { root: Vec<i64> },
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn check_dominant(rs: &RootSystem, lambda: &Weight) -> Result<(), CharError> {
    rs.check_rank(lambda)?;
    if !(lambda.is_integral() && lambda.is_dominant()) {
        return Err(CharError::NotDominantIntegral(lambda.clone()));
    }
    Ok(())
}

fn check_regular(rs: &RootSystem, theta: &[f64]) -> Result<(), CharError> {
    if theta.len() != rs.rank() {
        return Err(LieError::RankMismatch {
            expected: rs.rank(),
            got: theta.len(),
        }
        .into());
    }
    for r in &rs.positive_roots {
        let a = rs.root_to_weight(r).eval_f64(theta);
        if (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -a)).norm() < SINGULAR_TOL {
            return Err(CharError::Singular { root: r.clone() });
        }
    }
    Ok(())
}

fn e(mu: &Weight, theta: &[f64]) -> Complex64 {
    Complex64::from_polar(1.0, mu.eval_f64(theta))
}

/// Atiyah-Bott sum `sum_w e^{w lambda} / prod_{alpha>0} (1 - e^{-w alpha})`
/// for any integral `lambda`; for dominant `lambda` this is the character.
pub fn fixed_point_sum(
    rs: &RootSystem,
    weyl: &WeylGroup,
    lambda: &Weight,
    theta: &[f64],
) -> Result<Complex64, CharError> {
    rs.check_rank(lambda)?;
    check_regular(rs, theta)?;
    let pos: Vec<Weight> = rs
        .positive_roots
        .iter()
        .map(|r| rs.root_to_weight(r))
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::zero();
    for w in &weyl.elements {
        let num = e(&w.act(lambda)?, theta);
        let mut den = one;
        for a in &pos {
            den *= one - e(&w.act(a)?.neg(), theta);
        }
        acc += num / den;
    }
    Ok(acc)
}

pub fn weyl_character(
    rs: &RootSystem,
    lambda: &Weight,
    theta: &[f64],
) -> Result<Complex64, CharError> {
    check_dominant(rs, lambda)?;
    let weyl = WeylGroup::new(rs);
    fixed_point_sum(rs, &weyl, lambda, theta)
}

/// Quotient of alternating sums, `A_{lambda+rho} / A_rho`.
pub fn weyl_quotient(
    rs: &RootSystem,
    weyl: &WeylGroup,
    lambda: &Weight,
    theta: &[f64],
) -> Result<Complex64, CharError> {
    check_dominant(rs, lambda)?;
    check_regular(rs, theta)?;
    let lr = lambda.add(&rs.rho);
    let mut num = Complex64::zero();
    let mut den = Complex64::zero();
    for w in &weyl.elements {
        let s = f64::from(w.sign());
        num += s * e(&w.act(&lr)?, theta);
        den += s * e(&w.act(&rs.rho)?, theta);
    }
    Ok(num / den)
}

/// Freudenthal recursion on dominant weights, then expansion over W-orbits.
pub fn weight_multiplicities(
    rs: &RootSystem,
    lambda: &Weight,
) -> Result<BTreeMap<Weight, u64>, CharError> {
    check_dominant(rs, lambda)?;
    let weyl = WeylGroup::new(rs);
    let n = rs.rank();

    let lowest = weyl.longest().act(lambda)?;
    let depth_max: Vec<i64> = rs
        .weight_to_root_coords(&lambda.sub(&lowest))
        .iter()
        .map(|q| q.to_integer())
        .collect();
    let alphas: Vec<Weight> = (0..n)
        .map(|i| rs.root_to_weight(&rs.simple_roots[i]))
        .collect();

    // Dominant candidates lambda - sum n_i alpha_i inside the box, by height.
    let mut candidates: Vec<(i64, Weight)> = Vec::new();
    let mut idx = vec![0i64; n];
    loop {
        let mut mu = lambda.clone();
        for (i, k) in idx.iter().enumerate() {
            mu = mu.sub(&alphas[i].scale(Q::from_integer(*k)));
        }
        if mu.is_dominant() {
            candidates.push((idx.iter().sum(), mu));
        }
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            idx[i] += 1;
            if idx[i] <= depth_max[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    candidates.sort_by_key(|(h, _)| *h);

    let pos: Vec<Weight> = rs
        .positive_roots
        .iter()
        .map(|r| rs.root_to_weight(r))
        .collect();
    let lr = lambda.add(&rs.rho);
    let top = rs.inner(&lr, &lr);
    let mut dom: BTreeMap<Weight, u64> = BTreeMap::new();
    for (_, mu) in &candidates {
        if mu == lambda {
            dom.insert(mu.clone(), 1);
            continue;
        }
        let mut num = Q::zero();
        for a in &pos {
            let mut k = 1;
            loop {
                let nu = mu.add(&a.scale(Q::from_integer(k)));
                let m = dom.get(&rs.dominant_rep(&nu)).copied().unwrap_or(0);
                if m == 0 {
                    break;
                }
                num += Q::from_integer(m as i64) * rs.inner(&nu, a);
                k += 1;
            }
        }
        let mr = mu.add(&rs.rho);
        let den = top - rs.inner(&mr, &mr);
        debug_assert!(den.is_positive());
        let m = Q::from_integer(2) * num / den;
        debug_assert!(m.is_integer());
        dom.insert(mu.clone(), m.to_integer().max(0) as u64);
    }

    let mut out = BTreeMap::new();
    for (mu, m) in dom {
        if m == 0 {
            continue;
        }
        for w in &weyl.elements {
            out.insert(w.act(&mu)?, m);
        }
    }
    Ok(out)
}

/// Weyl dimension formula, `prod_{alpha>0} <lambda+rho, alpha^vee> / <rho, alpha^vee>`.
pub fn dimension(rs: &RootSystem, lambda: &Weight) -> Result<u64, CharError> {
    check_dominant(rs, lambda)?;
    let lr = lambda.add(&rs.rho);
    let mut d = Q::from_integer(1);
    for a in &rs.positive_roots {
        d = d * rs.coroot_pairing(&lr, a) / rs.coroot_pairing(&rs.rho, a);
    }
    Ok(d.to_integer() as u64)
}

/// `sum_mu mult(mu) e^{i<mu,theta>}`.
pub fn weight_sum(mults: &BTreeMap<Weight, u64>, theta: &[f64]) -> Complex64 {
    mults.iter().map(|(mu, m)| *m as f64 * e(mu, theta)).sum()
}

/// Squared norm `(lambda, lambda)` as f64, for eigenvalue bookkeeping.
pub fn norm2_f64(rs: &RootSystem, lambda: &Weight) -> f64 {
    to_f64(rs.inner(lambda, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::build_root_system;
    use std::f64::consts::PI;

    #[test]
    fn a1_examples() {
        let rs = build_root_system("A1").unwrap();
        let c0 = weyl_character(&rs, &Weight::from_ints(&[0]), &[0.9]).unwrap();
        assert!((c0 - 1.0).norm() < 1e-12);
        let c1 = weyl_character(&rs, &Weight::from_ints(&[1]), &[PI / 3.0]).unwrap();
        assert!((c1 - 1.0).norm() < 1e-12);
        let c2 = weyl_character(&rs, &Weight::from_ints(&[2]), &[PI / 2.0]).unwrap();
        assert!((c2 + 1.0).norm() < 1e-12);
    }

    #[test]
    fn singular_point_names_root() {
        let rs = build_root_system("A2").unwrap();
        let err = weyl_character(&rs, &Weight::from_ints(&[1, 0]), &[0.35, 0.7]).unwrap_err();
        assert_eq!(err, CharError::Singular { root: vec![1, 0] });
    }

    #[test]
    fn rejects_non_dominant() {
        let rs = build_root_system("A1").unwrap();
        assert!(matches!(
            weyl_character(&rs, &Weight::from_ints(&[-1]), &[0.3]),
            Err(CharError::NotDominantIntegral(_))
        ));
        assert!(matches!(
            dimension(&rs, &Weight::new(vec![Q::new(1, 2)])),
            Err(CharError::NotDominantIntegral(_))
        ));
    }

    #[test]
    fn multiplicity_examples() {
        let rs = build_root_system("A1").unwrap();
        let m = weight_multiplicities(&rs, &Weight::from_ints(&[2])).unwrap();
        let want: BTreeMap<Weight, u64> = [2, 0, -2]
            .iter()
            .map(|&c| (Weight::from_ints(&[c]), 1))
            .collect();
        assert_eq!(m, want);

        let a2 = build_root_system("A2").unwrap();
        let m = weight_multiplicities(&a2, &Weight::from_ints(&[1, 1])).unwrap();
        assert_eq!(m[&Weight::from_ints(&[0, 0])], 2);
        assert_eq!(m.values().sum::<u64>(), 8);
        assert_eq!(dimension(&a2, &Weight::from_ints(&[1, 1])).unwrap(), 8);

        for label in ["A1", "B2", "G2"] {
            let rs = build_root_system(label).unwrap();
            let z = Weight::zero(rs.rank());
            let m = weight_multiplicities(&rs, &z).unwrap();
            assert_eq!(m.len(), 1);
            assert_eq!(m[&z], 1);
        }
    }

    #[test]
    fn known_dimensions() {
        let g2 = build_root_system("G2").unwrap();
        // short fundamental: 7, long fundamental (adjoint): 14
        assert_eq!(dimension(&g2, &Weight::from_ints(&[1, 0])).unwrap(), 7);
        assert_eq!(dimension(&g2, &Weight::from_ints(&[0, 1])).unwrap(), 14);
        let b2 = build_root_system("B2").unwrap();
        assert_eq!(dimension(&b2, &Weight::from_ints(&[1, 0])).unwrap(), 5);
        assert_eq!(dimension(&b2, &Weight::from_ints(&[0, 1])).unwrap(), 4);
        let a1 = build_root_system("A1").unwrap();
        for m in 0..6 {
            assert_eq!(
                dimension(&a1, &Weight::from_ints(&[m])).unwrap(),
                m as u64 + 1
            );
        }
    }

    #[test]
    fn g2_adjoint_zero_weight() {
        let g2 = build_root_system("G2").unwrap();
        let m = weight_multiplicities(&g2, &Weight::from_ints(&[0, 1])).unwrap();
        assert_eq!(m[&Weight::zero(2)], 2);
        assert_eq!(m.values().sum::<u64>(), 14);
    }
}

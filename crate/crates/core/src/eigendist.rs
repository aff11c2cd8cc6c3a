//! Invariant eigendistributions on SL(2,R) and SU(2) through their local
//! expressions on Cartan subgroups, and their pairing with test functions on
//! the Lie algebra.
//!
//! Branches: on the identity-side components the coefficient multiplies the
//! branch of `e^{(lambda - rho)_x}` equal to 1 at the identity. On the
//! `eps = -1` split components the sign of `-I` is folded into the
//! coefficient, so the same exponential is used there.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lie_core::{build_root_system, to_f64, Weight, Q};
use crate::quad;
use crate::real_structure::{
    classify_element, CartanElement, CartanKind, Component, FixedPoint, Group, RealError,
};
use crate::testfn::{TestFnError, TestFunction};

pub type C = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("element is singular")]
    Singular,
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    TestFn(#[from] TestFnError),
    #[error("algebra evaluation is only implemented for SL2R")]
    AlgebraUnsupported,
}

pub type Key = (Component, FixedPoint);

/// Coefficients `d_{E,x}` against `e^{(lambda-rho)_x}` (group) or
/// `e^{lambda_x}` (algebra), with `lambda = l * omega`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalExpression {
    pub group: Group,
    pub l: C,
    #[serde(serialize_with = "ser_coeffs")]
    pub coeffs: BTreeMap<Key, C>,
}

fn ser_coeffs<S: serde::Serializer>(m: &BTreeMap<Key, C>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for ((comp, x), d) in m {
        seq.serialize_element(&(comp.to_string(), x.to_string(), [d.re, d.im]))?;
    }
    seq.end()
}

fn components(group: Group) -> Vec<Component> {
    match group {
        Group::SL2R => Component::all().to_vec(),
        Group::SU2 => vec![
            Component::Compact { upper: true },
            Component::Compact { upper: false },
        ],
    }
}

impl LocalExpression {
    pub fn zero(group: Group, l: C) -> Self {
        let mut coeffs = BTreeMap::new();
        for comp in components(group) {
            for x in FixedPoint::for_cartan(comp.kind()) {
                coeffs.insert((comp, x), C::default());
            }
        }
        Self { group, l, coeffs }
    }

    /// SU(2) character of dimension `m + 1`.
    pub fn su2_character(m: u32) -> Self {
        let mut e = Self::zero(Group::SU2, C::new(f64::from(m) + 1.0, 0.0));
        for d in e.coeffs.values_mut() {
            *d = C::new(1.0, 0.0);
        }
        e
    }

    pub fn get(&self, comp: Component, x: FixedPoint) -> C {
        self.coeffs.get(&(comp, x)).copied().unwrap_or_default()
    }

    /// Panics if `(comp, x)` is not a key of this group's table.
    pub fn set(&mut self, comp: Component, x: FixedPoint, d: C) {
        let slot = self
            .coeffs
            .get_mut(&(comp, x))
            .unwrap_or_else(|| panic!("no coefficient slot ({comp}, {x})"));
        *slot = d;
    }

    /// `lambda` as a rational weight when `l` is real rational.
    pub fn infinitesimal_character(&self) -> Option<Weight> {
        if self.l.im != 0.0 {
            return None;
        }
        let q = Q::approximate_float(self.l.re)?;
        Some(Weight::new(vec![q]))
    }

    /// Coefficientwise `self + s * other`; `l` and group must agree.
    pub fn add_scaled(&self, other: &LocalExpression, s: C) -> LocalExpression {
        assert_eq!(self.group, other.group);
        let mut out = self.clone();
        for (k, d) in out.coeffs.iter_mut() {
            *d += s * other.coeffs[k];
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|d| *d == C::default())
    }

    /// `Theta(t) = sum_x d e^{(lambda-rho)_x}(t) / (1 - e^{-alpha_x}(t))`.
    pub fn evaluate_group(&self, t: CartanElement) -> Result<C, EigenError> {
        let comp = t.component().ok_or(EigenError::Singular)?;
        let param = match t {
            CartanElement::Compact { theta } => CartanElement::reduced_theta(theta),
            CartanElement::Split { s, .. } => s,
        };
        let one = C::new(1.0, 0.0);
        let half = (self.l - 1.0) / 2.0;
        Ok(FixedPoint::for_cartan(comp.kind())
            .iter()
            .map(|&x| {
                let d = self.get(comp, x);
                if d == C::default() {
                    return C::default();
                }
                let a = x.alpha_log(param);
                d * (half * a).exp() / (one - (-a).exp())
            })
            .sum())
    }

    /// Terms `(x, d e^{lambda_x(zeta)}, alpha_x(zeta))` at a regular `zeta`.
    pub fn algebra_terms(&self, zeta: [f64; 3]) -> Result<Vec<(FixedPoint, C, C)>, EigenError> {
        if self.group != Group::SL2R {
            return Err(EigenError::AlgebraUnsupported);
        }
        let cls = classify_element(zeta)?;
        Ok(self.class_terms(cls.kind, cls.component, cls.param))
    }

    /// Terms at the conjugacy class `nu J` (`kind` compact, `nu = sign * param`)
    /// or `s H` (`kind` split, `s = param > 0`).
    pub fn class_terms(&self, kind: CartanKind, sign: i8, param: f64) -> Vec<(FixedPoint, C, C)> {
        let (comp, p) = match kind {
            CartanKind::Compact => (
                Component::Compact { upper: sign > 0 },
                f64::from(sign) * param,
            ),
            CartanKind::Split => (
                Component::Split {
                    eps: 1,
                    positive: true,
                },
                param,
            ),
        };
        FixedPoint::for_cartan(kind)
            .iter()
            .map(|&x| {
                let a = x.alpha_log(p);
                (x, self.get(comp, x) * (self.l / 2.0 * a).exp(), a)
            })
            .collect()
    }

    /// `theta` on the class, see [`Self::class_terms`].
    pub fn evaluate_class(&self, kind: CartanKind, sign: i8, param: f64) -> C {
        sum_terms(self.class_terms(kind, sign, param))
    }

    /// `theta(zeta) = sum_x d e^{lambda_x(zeta)} / alpha_x(zeta)`.
    pub fn evaluate_algebra(&self, zeta: [f64; 3]) -> Result<C, EigenError> {
        Ok(sum_terms(self.algebra_terms(zeta)?))
    }

    /// `d_{E, s x} = -d_{E, x}` whenever `lambda` is singular (`l = 0`).
    pub fn check_symmetry(&self) -> bool {
        if self.l != C::default() {
            return true;
        }
        self.coeffs
            .iter()
            .all(|(&(comp, x), d)| self.get(comp, x.weyl_partner()) == -d)
    }

    /// Antisymmetrized coefficients `(d_x - d_{sx}) / 2`.
    pub fn symmetrized(&self) -> Self {
        let mut out = self.clone();
        for (&(comp, x), d) in out.coeffs.iter_mut() {
            *d = (self.get(comp, x) - self.get(comp, x.weyl_partner())) / 2.0;
        }
        out
    }
}

fn sum_terms(t: Vec<(FixedPoint, C, C)>) -> C {
    t.into_iter()
        .map(|(_, num, den)| if num == C::default() { num } else { num / den })
        .sum()
}

/// `p(zeta) = x^2 + y z` on `[[x, y], [z, -x]]`, and the eigenvalue scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvariantPolynomial {
    /// `p(d) theta = norm_constant * (lambda, lambda) * theta`.
    pub norm_constant: f64,
}

/// Frozen value of [`calibrate_p_norm`].
pub const P_NORM_CONSTANT: f64 = 0.5;

/// Symmetric coefficient matrix of `p(d) = (1/4) d_x^2 + d_y d_z`.
const P_QUADRATIC: [[f64; 3]; 3] = [[0.25, 0.0, 0.0], [0.0, 0.0, 0.5], [0.0, 0.5, 0.0]];

impl Default for InvariantPolynomial {
    fn default() -> Self {
        Self {
            norm_constant: P_NORM_CONSTANT,
        }
    }
}

impl InvariantPolynomial {
    pub fn eval(&self, zeta: [f64; 3]) -> f64 {
        zeta[0] * zeta[0] + zeta[1] * zeta[2]
    }

    pub fn eval_complex(&self, z: [C; 3]) -> C {
        z[0] * z[0] + z[1] * z[2]
    }

    pub fn quadratic_form(&self) -> [[f64; 3]; 3] {
        P_QUADRATIC
    }

    /// Eigenvalue of `p(d)` at infinitesimal character `lambda = l * omega`.
    pub fn p_norm(&self, l: C) -> C {
        let a1 = build_root_system("A1").expect("A1");
        let w = Weight::from_ints(&[1]);
        self.norm_constant * to_f64(a1.inner(&w, &w)) * l * l
    }
}

pub fn p_norm(l: C) -> C {
    InvariantPolynomial::default().p_norm(l)
}

/// Eigenvalue scale read off from the SU(2) character of dimension `m + 1`:
/// `j^{1/2} chi_m` on `su(2)` is `sin(l r)/r` in the coordinates
/// `x = i a`, `y = b + i c`, `z = -b + i c`. `p(d)` is pulled back to
/// `(a, b, c)` and applied by central differences at `point`.
pub fn calibrate_p_norm(m: u32, point: [f64; 3]) -> f64 {
    let l = f64::from(m) + 1.0;
    let f = |v: [f64; 3]| {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        (l * r).sin() / r
    };
    // d/d(x, y, z) in terms of d/d(a, b, c)
    let i = C::new(0.0, 1.0);
    let o = C::default();
    let h = |re: f64| C::new(re, 0.0);
    let m_hol: [[C; 3]; 3] = [[-i, o, o], [o, h(0.5), -i * 0.5], [o, h(-0.5), -i * 0.5]];
    let step = 1e-3;
    let hess = |k: usize, l2: usize| -> f64 {
        let at = |dk: f64, dl: f64| {
            let mut v = point;
            v[k] += dk;
            v[l2] += dl;
            f(v)
        };
        (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step))
            / (4.0 * step * step)
    };
    let mut val = C::default();
    for a in 0..3 {
        for b in 0..3 {
            if P_QUADRATIC[a][b] == 0.0 {
                continue;
            }
            for k in 0..3 {
                for l2 in 0..3 {
                    val += P_QUADRATIC[a][b] * m_hol[a][k] * m_hol[b][l2] * hess(k, l2);
                }
            }
        }
    }
    let eig = val.re / f(point);
    let a1 = build_root_system("A1").expect("A1");
    let w = Weight::from_ints(&[1]);
    eig / (l * l * to_f64(a1.inner(&w, &w)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairingOptions {
    pub rel_tol: f64,
    /// Parallel over radial nodes.
    pub parallel: bool,
}

impl Default for PairingOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pairing {
    pub value: C,
    pub error: f64,
    pub converged: bool,
}

/// One refinement level: `(radial/hyperbolic nodes, angular nodes)`.
const LEVELS: [(usize, usize); 4] = [(24, 32), (40, 48), (64, 64), (96, 96)];

/// `int theta(zeta) f(zeta) dzeta` over `|zeta| <= radius`.
///
/// Coordinates `x = rho cos a`, `u = rho sin a`, `y = u + v`, `z = u - v`
/// make `p = rho^2 - v^2` and `dx dy dz = 2 rho d rho da dv`. The
/// `(rho, v)` quarter-planes are swept by hyperbolic polar coordinates
/// about the cone, so `theta` depends only on `(r, eta)` and the `1/r`
/// singularity is absorbed by the Jacobian `r dr deta`.
pub fn pair_fn<F>(
    theta: &LocalExpression,
    radius: f64,
    opts: PairingOptions,
    f: F,
) -> Result<Pairing, EigenError>
where
    F: Fn([f64; 3]) -> C + Sync,
{
    if theta.group != Group::SL2R {
        return Err(EigenError::AlgebraUnsupported);
    }
    if theta.is_zero() {
        return Ok(Pairing {
            value: C::default(),
            error: 0.0,
            converged: true,
        });
    }
    let mut prev: Option<C> = None;
    let mut last_err = f64::INFINITY;
    for &(n, na) in LEVELS.iter() {
        let v = pair_level(theta, radius, n, na, opts.parallel, &f)?;
        if let Some(p) = prev {
            last_err = (v - p).norm();
            if last_err <= opts.rel_tol * v.norm() || last_err < 1e-300 {
                return Ok(Pairing {
                    value: v,
                    error: last_err,
                    converged: true,
                });
            }
        }
        prev = Some(v);
    }
    Ok(Pairing {
        value: prev.unwrap(),
        error: last_err,
        converged: false,
    })
}

fn pair_level<F>(
    theta: &LocalExpression,
    radius: f64,
    n: usize,
    na: usize,
    parallel: bool,
    f: &F,
) -> Result<C, EigenError>
where
    F: Fn([f64; 3]) -> C + Sync,
{
    let t_rule = quad::composite(0.0, 1.0, 1, n);
    let gl = quad::composite(0.0, 1.0, 1, n);
    let ang = quad::periodic(0.0, 2.0 * std::f64::consts::PI, na);
    let nodes: Vec<(f64, f64)> = t_rule.iter().collect();

    let radial = |&(t, wt): &(f64, f64)| -> Result<C, EigenError> {
        let r = radius * t * t;
        let dr = 2.0 * radius * t * wt;
        let emax = (radius / r).max(1.0).acosh();
        let mut acc = C::default();
        for (u, wu) in gl.iter() {
            let eta = emax * u;
            let we = emax * wu;
            let (ch, sh) = (eta.cosh(), eta.sinh());
            // (rho, |v|) for the split and elliptic sheets
            let sheets = [
                (CartanKind::Split, r * ch, r * sh),
                (CartanKind::Compact, r * sh, r * ch),
            ];
            for (kind, rho, vabs) in sheets {
                for sgn in [1i8, -1] {
                    let v = f64::from(sgn) * vabs;
                    let th = theta.evaluate_class(kind, sgn, r);
                    if th == C::default() {
                        continue;
                    }
                    let mut s = C::default();
                    for (a, wa) in ang.iter() {
                        let (sa, ca) = a.sin_cos();
                        let uu = rho * sa;
                        s += f([rho * ca, uu + v, uu - v]) * wa;
                    }
                    acc += th * s * (2.0 * rho * r * dr * we);
                }
            }
        }
        Ok(acc)
    };
    let parts: Vec<Result<C, EigenError>> = if parallel {
        nodes.par_iter().map(radial).collect()
    } else {
        nodes.iter().map(radial).collect()
    };
    let mut total = C::default();
    for p in parts {
        total += p?;
    }
    Ok(total)
}

pub fn pair_algebra(theta: &LocalExpression, phi: &TestFunction) -> Result<Pairing, EigenError> {
    pair_algebra_with(theta, phi, PairingOptions::default())
}

pub fn pair_algebra_with(
    theta: &LocalExpression,
    phi: &TestFunction,
    opts: PairingOptions,
) -> Result<Pairing, EigenError> {
    pair_fn(theta, phi.support_radius(), opts, |v| {
        C::new(phi.eval(v), 0.0)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRecord {
    pub phi_id: String,
    /// `|<theta, p(d) phi - p_norm phi>| / scale`.
    pub residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub eigenvalue: C,
    pub records: Vec<ResidualRecord>,
    pub max_residual: f64,
    pub pass: bool,
}

pub const EIGEN_TOL: f64 = 1e-3;

/// Pair `theta` with `p(d) phi - p_norm(l) phi` for each `phi` of the battery.
/// The scale is `max(|<theta, p(d) phi>|, max(|p_norm|, 1) |<theta, phi>|)`.
pub fn verify_eigendistribution(
    theta: &LocalExpression,
    l: C,
    battery: &[TestFunction],
) -> Result<ResidualReport, EigenError> {
    let eig = p_norm(l);
    let opts = PairingOptions {
        rel_tol: 1e-7,
        parallel: true,
    };
    let mut records = Vec::with_capacity(battery.len());
    for phi in battery {
        let pphi = phi.apply_p()?;
        let radius = pphi.support_radius().max(phi.support_radius());
        let lhs = pair_fn(theta, radius, opts, |v| C::new(pphi.eval(v), 0.0))?;
        let base = pair_fn(theta, radius, opts, |v| C::new(phi.eval(v), 0.0))?;
        let diff = pair_fn(theta, radius, opts, |v| pphi.eval(v) - eig * phi.eval(v))?;
        let scale = lhs
            .value
            .norm()
            .max(eig.norm().max(1.0) * base.value.norm());
        let residual = if scale > 0.0 {
            diff.value.norm() / scale
        } else {
            0.0
        };
        records.push(ResidualRecord {
            phi_id: phi.id.clone(),
            residual,
            scale,
            tolerance: EIGEN_TOL,
            pass: residual <= EIGEN_TOL,
        });
    }
    let max_residual = records.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(ResidualReport {
        eigenvalue: eig,
        pass: records.iter().all(|r| r.pass),
        records,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2;
    use std::f64::consts::PI;

    fn ds1() -> LocalExpression {
        let mut e = LocalExpression::zero(Group::SL2R, C::new(-1.0, 0.0));
        e.set(
            Component::Compact { upper: true },
            FixedPoint::PlusI,
            C::new(1.0, 0.0),
        );
        e.set(
            Component::Compact { upper: false },
            FixedPoint::PlusI,
            C::new(1.0, 0.0),
        );
        for eps in [1, -1] {
            e.set(
                Component::Split {
                    eps,
                    positive: true,
                },
                FixedPoint::Zero,
                C::new(1.0, 0.0),
            );
            e.set(
                Component::Split {
                    eps,
                    positive: false,
                },
                FixedPoint::Infinity,
                C::new(1.0, 0.0),
            );
        }
        e
    }

    #[test]
    fn zero_expression() {
        let z = LocalExpression::zero(Group::SL2R, C::new(0.3, 0.0));
        assert_eq!(z.coeffs.len(), 12);
        assert_eq!(
            z.evaluate_group(CartanElement::Compact { theta: 0.4 })
                .unwrap(),
            C::default()
        );
        assert_eq!(z.evaluate_algebra([0.3, 0.2, 0.1]).unwrap(), C::default());
        let phi = TestFunction::gaussian([0.0; 3], 1.0).unwrap();
        assert_eq!(pair_algebra(&z, &phi).unwrap().value, C::default());
    }

    #[test]
    fn single_term_values() {
        let e = ds1();
        let g = e
            .evaluate_group(CartanElement::Compact { theta: PI / 2.0 })
            .unwrap();
        assert!((g - C::new(-0.5, 0.0)).norm() < 1e-14);
        let a = e.evaluate_algebra([0.0, PI / 2.0, -PI / 2.0]).unwrap();
        assert!((a - C::new(-1.0 / PI, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_inputs() {
        let e = ds1();
        assert_eq!(
            e.evaluate_group(CartanElement::Split { eps: 1, s: 0.0 }),
            Err(EigenError::Singular)
        );
        assert!(matches!(
            e.evaluate_algebra([1.0, 1.0, -1.0]),
            Err(EigenError::Real(RealError::NotRegular))
        ));
    }

    #[test]
    fn su2_character_is_weyl_quotient() {
        for m in 0..5u32 {
            let e = LocalExpression::su2_character(m);
            for theta in [0.3, 1.1, -2.0, 2.9] {
                let v = e.evaluate_group(CartanElement::Compact { theta }).unwrap();
                let want = ((m as f64 + 1.0) * theta).sin() / theta.sin();
                assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetry_rule() {
        assert!(ds1().check_symmetry());
        let mut e = LocalExpression::zero(Group::SL2R, C::default());
        let comp = Component::Split {
            eps: 1,
            positive: true,
        };
        e.set(comp, FixedPoint::Zero, C::new(1.0, 0.0));
        e.set(comp, FixedPoint::Infinity, C::new(1.0, 0.0));
        assert!(!e.check_symmetry());
        let mut e2 = e.clone();
        e2.set(comp, FixedPoint::Infinity, C::new(2.0, 0.0));
        assert!(e2.symmetrized().check_symmetry());
    }

    #[test]
    fn denominator_homogeneity() {
        let e = ds1();
        for zeta in [[0.3, 0.9, -0.7], [0.8, 0.1, 0.2]] {
            let c = 2.5;
            let t1 = e.algebra_terms(zeta).unwrap();
            let t2 = e.algebra_terms(zeta.map(|v| v * c)).unwrap();
            for ((_, _, d1), (_, _, d2)) in t1.iter().zip(&t2) {
                assert!((*d2 - *d1 * c).norm() < 1e-12 * d2.norm());
            }
        }
    }

    #[test]
    fn conjugation_invariance() {
        let e = ds1();
        for (t, s) in [(0.3, 0.2), (1.7, -0.5), (-2.2, 0.9)] {
            let g = sl2::k(t) * sl2::a(s);
            for zeta in [[0.2, 0.7, -0.9], [0.6, 0.3, 0.4], [-0.1, -1.2, 0.5]] {
                let m = sl2::ad(&g, &sl2::real_traceless(zeta));
                let z2 = sl2::coords(&m).map(|c| c.re);
                let a = e.evaluate_algebra(zeta).unwrap();
                let b = e.evaluate_algebra(z2).unwrap();
                assert!((a - b).norm() < 1e-9 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn calibration_reproduces_frozen_constant() {
        for m in 0..4 {
            let c = calibrate_p_norm(m, [0.31, -0.22, 0.47]);
            assert!((c - P_NORM_CONSTANT).abs() < 1e-5, "m={m}: {c}");
        }
        assert!((p_norm(C::new(-2.0, 0.0)).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pairing_is_linear() {
        let a = ds1();
        let mut b = LocalExpression::zero(Group::SL2R, C::new(-1.0, 0.0));
        b.set(
            Component::Split {
                eps: 1,
                positive: true,
            },
            FixedPoint::Infinity,
            C::new(0.4, -0.3),
        );
        let phi = TestFunction::gaussian([0.2, -0.1, 0.3], 0.8).unwrap();
        let s = C::new(1.5, 0.5);
        let pa = pair_algebra(&a, &phi).unwrap().value;
        let pb = pair_algebra(&b, &phi).unwrap().value;
        let pab = pair_algebra(&a.add_scaled(&b, s), &phi).unwrap().value;
        assert!((pab - (pa + s * pb)).norm() < 1e-6 * pab.norm());
    }

    /// Split-only coefficient `e^{lambda_0}/alpha_0` paired with a gaussian
    /// centred on the split axis: cross-check with a brute 3D rule away
    /// from the cone.
    #[test]
    fn pairing_matches_brute_force_oracle() {
        let mut e = LocalExpression::zero(Group::SL2R, C::new(-1.0, 0.0));
        let comp = Component::Split {
            eps: 1,
            positive: true,
        };
        e.set(comp, FixedPoint::Zero, C::new(1.0, 0.0));
        // theta = e^{-s}/(2s) on p > 0, 0 elsewhere; smooth test function
        let phi = TestFunction::gaussian([0.5, 0.1, -0.2], 0.7).unwrap();
        let got = pair_algebra(&e, &phi).unwrap();
        assert!(got.converged);
        // oracle: iterated rule in (x, y, z) with y = +-t^2 and
        // z = z0 +- u^2 along each line, z0 the cone crossing
        let rmax = phi.support_radius();
        let xr = quad::composite(-rmax, rmax, 10, 20);
        let tr = quad::composite(0.0, rmax.sqrt(), 10, 20);
        let mut acc = 0.0;
        for (x, wx) in xr.iter() {
            for sg in [1.0, -1.0] {
                for (t, wt) in tr.iter() {
                    let y = sg * t * t;
                    let z0 = -x * x / y;
                    let (lo, hi) = {
                        let (p, q) = (sg * (-rmax - z0), sg * (rmax - z0));
                        (p.min(q).max(0.0), p.max(q))
                    };
                    if hi <= 0.0 {
                        continue;
                    }
                    for (u, wu) in quad::composite(lo.sqrt(), hi.sqrt(), 4, 20).iter() {
                        let z = z0 + sg * u * u;
                        let s = t * u;
                        let f = (-s).exp() / (2.0 * s) * phi.eval([x, y, z]);
                        acc += f * 2.0 * u * 2.0 * t * wx * wt * wu;
                    }
                }
            }
        }
        assert!(
            (got.value.re - acc).abs() < 1e-4 * acc.abs(),
            "{} vs {acc}",
            got.value.re
        );
    }
}

//! Local-expression coefficients of standard sheaves on `P^1` by the
//! fixed-point recipe: compact-support Euler characteristics of germ cells
//! at each fixed point, weighted by stalk Euler characteristics.
//!
//! Near a fixed point `x` the disc `D` is cut into cells. The N' recipe
//! takes `chi_c(N' cap D, F)`, the N'' recipe `chi_c(N'' cap D, DF)`, where
//! `N'` (`N''`) is the whole germ when `alpha_x` lies in `Psi'` (`Psi''`)
//! and `{x}` otherwise.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::eigendist::LocalExpression;
use crate::real_structure::{
    integral_shift, orbit_of_point, CartanElement, CartanKind, Component, FixedPoint, Group,
    OrbitLabel, RealError, StandardSheafDescriptor,
};
use crate::sl2::{self, Mat2, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixedPointError {
    #[error("lambda = {0} is not regular antidominant with integral lambda - rho")]
    NotAntidominant(Complex64),
    #[error("discrete series live on the open orbits, not {0}")]
    NotOpenOrbit(OrbitLabel),
    #[error("{x} is not fixed by the {kind} Cartan")]
    NotFixed { x: FixedPoint, kind: CartanKind },
    #[error("contraction choice {0:?} is not admissible here")]
    Inadmissible(ContractionChoice),
    #[error("coefficient depends on the contraction choice: {0:?}")]
    ChoiceDependence(Vec<(ContractionChoice, i64, i64)>),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Rank one: the only positive root is `alpha`, so `Psi'` and `Psi''` are
/// recorded by membership of `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ContractionChoice {
    pub alpha_in_psi1: bool,
    pub alpha_in_psi2: bool,
}

/// Tolerance for `|e^{alpha_x}| = 1`.
const MODULUS_TOL: f64 = 1e-12;

/// Modulus of `e^{alpha_x}` at a Cartan element.
pub fn root_modulus(t: CartanElement, x: FixedPoint) -> f64 {
    let param = match t {
        CartanElement::Compact { theta } => theta,
        CartanElement::Split { s, .. } => s,
    };
    x.alpha_log(param).exp().norm()
}

fn check_fixed(t: CartanElement, x: FixedPoint) -> Result<(), FixedPointError> {
    if FixedPoint::for_cartan(t.kind()).contains(&x) {
        Ok(())
    } else {
        Err(FixedPointError::NotFixed { x, kind: t.kind() })
    }
}

/// Every `(Psi', Psi'')` with contracting roots in `Psi'` and expanding
/// roots in `Psi''`. Sums of positive roots are never roots in rank one,
/// so closure under addition holds for all subsets.
pub fn admissible_contraction_choices(
    t: CartanElement,
    x: FixedPoint,
) -> Result<Vec<ContractionChoice>, FixedPointError> {
    if !t.regular() {
        return Err(RealError::NotRegular.into());
    }
    check_fixed(t, x)?;
    let m = root_modulus(t, x);
    let mut out = Vec::new();
    for alpha_in_psi1 in [true, false] {
        for alpha_in_psi2 in [true, false] {
            let ok = if m < 1.0 - MODULUS_TOL {
                alpha_in_psi1 && !alpha_in_psi2
            } else if m > 1.0 + MODULUS_TOL {
                !alpha_in_psi1 && alpha_in_psi2
            } else {
                true
            };
            if ok {
                out.push(ContractionChoice {
                    alpha_in_psi1,
                    alpha_in_psi2,
                });
            }
        }
    }
    Ok(out)
}

/// `Psi'' = {alpha real on t with e^alpha > 1}`, `Psi' = Phi+ \ Psi''`.
pub fn canonical_choice(t: CartanElement, x: FixedPoint) -> ContractionChoice {
    let expanding = t.kind() == CartanKind::Split && root_modulus(t, x) > 1.0;
    ContractionChoice {
        alpha_in_psi1: !expanding,
        alpha_in_psi2: expanding,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellShape {
    Point,
    /// Open arc ending at `x`.
    Ray,
    /// Open 2-cell: a slit disc or a half disc.
    Sector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub shape: CellShape,
    pub dim: u8,
    pub stratum: OrbitLabel,
}

impl Cell {
    fn new(shape: CellShape, stratum: OrbitLabel) -> Self {
        let dim = match shape {
            CellShape::Point => 0,
            CellShape::Ray => 1,
            CellShape::Sector => 2,
        };
        Self {
            shape,
            dim,
            stratum,
        }
    }

    /// `chi_c` of an open cell of dimension `d` is `(-1)^d`.
    pub fn chi_c(&self) -> i64 {
        if self.dim.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Germ of the orbit stratification at a fixed point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumTable {
    pub x: FixedPoint,
    /// `{x}` followed by a partition of the punctured disc.
    pub cells: Vec<Cell>,
}

impl StratumTable {
    pub fn at(x: FixedPoint) -> Self {
        use OrbitLabel::*;
        let home = orbit_of_point(x.coordinate());
        let cells = match home {
            RealCircle => vec![
                Cell::new(CellShape::Point, RealCircle),
                Cell::new(CellShape::Ray, RealCircle),
                Cell::new(CellShape::Ray, RealCircle),
                Cell::new(CellShape::Sector, UpperHalfPlane),
                Cell::new(CellShape::Sector, LowerHalfPlane),
            ],
            open => vec![
                Cell::new(CellShape::Point, open),
                Cell::new(CellShape::Ray, open),
                Cell::new(CellShape::Sector, open),
            ],
        };
        Self { x, cells }
    }

    /// `{x}` when `full` is false, else every cell.
    pub fn germ(&self, full: bool) -> &[Cell] {
        if full {
            &self.cells
        } else {
            &self.cells[..1]
        }
    }
}

/// Stalk Euler characteristic of a standard sheaf (`dual = false`) or its
/// Verdier dual on a stratum. The standard sheaf is the direct image of a
/// rank one local system: on an open orbit its stalks are 1 on the
/// closure; the dual is extended by zero. On the circle the dual carries a
/// shift by one.
pub fn stalk_euler(orbit: OrbitLabel, stratum: OrbitLabel, dual: bool) -> i64 {
    use OrbitLabel::*;
    match (orbit, dual) {
        (RealCircle, false) => i64::from(stratum == RealCircle),
        (RealCircle, true) => -i64::from(stratum == RealCircle),
        (open, false) => i64::from(stratum == open || stratum == RealCircle),
        (open, true) => i64::from(stratum == open),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `chi_c(N' cap D, F)`
    Contracting,
    /// `chi_c(N'' cap D, DF)`
    Expanding,
}

/// `chi_c` of the germ selected by `choice` under `route`.
pub fn germ_euler(
    orbit: OrbitLabel,
    x: FixedPoint,
    choice: ContractionChoice,
    route: Route,
) -> i64 {
    let table = StratumTable::at(x);
    let (full, dual) = match route {
        Route::Contracting => (choice.alpha_in_psi1, false),
        Route::Expanding => (choice.alpha_in_psi2, true),
    };
    table
        .germ(full)
        .iter()
        .map(|c| c.chi_c() * stalk_euler(orbit, c.stratum, dual))
        .sum()
}

/// Action of `-I` on the stalks: `(-1)^{l-1}` on the open orbits,
/// `chi_F(-1)` on the circle.
pub fn central_sign(sheaf: &StandardSheafDescriptor) -> i64 {
    match sheaf.local_system.chi_f {
        Some(chi) => i64::from(chi),
        None => {
            let n = integral_shift(sheaf.twist).expect("open-orbit sheaves have integral shift");
            if n.rem_euclid(2) == 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// A representative element of a component.
pub fn component_representative(comp: Component) -> CartanElement {
    match comp {
        Component::Compact { upper } => CartanElement::Compact {
            theta: if upper { FRAC_PI_2 } else { -FRAC_PI_2 },
        },
        Component::Split { eps, positive } => CartanElement::Split {
            eps,
            s: if positive { 1.0 } else { -1.0 },
        },
    }
}

/// Coefficient `d_{E,x}`: the germ Euler characteristic, agreed by both
/// routes over every admissible contraction choice, times the central sign
/// on `eps = -1`.
pub fn euler_coefficient(
    sheaf: &StandardSheafDescriptor,
    comp: Component,
    x: FixedPoint,
) -> Result<i64, FixedPointError> {
    let t = component_representative(comp);
    let choices = admissible_contraction_choices(t, x)?;
    let orbit = sheaf.orbit.label;
    let results: Vec<(ContractionChoice, i64, i64)> = choices
        .iter()
        .map(|&c| {
            (
                c,
                germ_euler(orbit, x, c, Route::Contracting),
                germ_euler(orbit, x, c, Route::Expanding),
            )
        })
        .collect();
    let first = results[0].1;
    if results.iter().any(|&(_, a, b)| a != first || b != first) {
        return Err(FixedPointError::ChoiceDependence(results));
    }
    let sign = match comp {
        Component::Split { eps: -1, .. } => central_sign(sheaf),
        _ => 1,
    };
    Ok(first * sign)
}

/// Euler coefficient under one explicit choice, rejecting inadmissible ones.
pub fn euler_coefficient_with(
    sheaf: &StandardSheafDescriptor,
    comp: Component,
    x: FixedPoint,
    choice: ContractionChoice,
    route: Route,
) -> Result<i64, FixedPointError> {
    let t = component_representative(comp);
    if !admissible_contraction_choices(t, x)?.contains(&choice) {
        return Err(FixedPointError::Inadmissible(choice));
    }
    let sign = match comp {
        Component::Split { eps: -1, .. } => central_sign(sheaf),
        _ => 1,
    };
    Ok(germ_euler(sheaf.orbit.label, x, choice, route) * sign)
}

fn expression_from_sheaf(
    sheaf: &StandardSheafDescriptor,
) -> Result<LocalExpression, FixedPointError> {
    let mut e = LocalExpression::zero(Group::SL2R, sheaf.twist);
    for comp in Component::all() {
        for x in FixedPoint::for_cartan(comp.kind()) {
            let d = euler_coefficient(sheaf, comp, x)?;
            e.set(comp, x, C::new(d as f64, 0.0));
        }
    }
    Ok(e)
}

/// Character of the discrete series attached to the open orbit `label` at
/// `lambda = l omega`, `l` a negative integer.
pub fn discrete_series_expression(
    label: OrbitLabel,
    l: C,
) -> Result<LocalExpression, FixedPointError> {
    if label == OrbitLabel::RealCircle {
        return Err(FixedPointError::NotOpenOrbit(label));
    }
    if integral_shift(l).is_none() || l.re >= 0.0 {
        return Err(FixedPointError::NotAntidominant(l));
    }
    let sheaf = StandardSheafDescriptor::new(label, l, 1)?;
    let e = expression_from_sheaf(&sheaf)?;
    debug_assert!(temperedness_violations(&e).is_empty());
    Ok(e)
}

/// `discrete_series_expression(label, -k)`.
pub fn discrete_series(label: OrbitLabel, k: u32) -> Result<LocalExpression, FixedPointError> {
    discrete_series_expression(label, C::new(-f64::from(k), 0.0))
}

/// Character of the principal series induced from `(chi_F, nu)` on the
/// split Cartan, written down from the induction formula: zero on the
/// compact Cartan, `(-1)^{k_x}` on the split Cartan with `k_x` the number
/// of contracting positive roots at `x`, twisted by `chi_F` on `eps = -1`.
pub fn induced_expression(chi_f: i8, nu: C) -> Result<LocalExpression, FixedPointError> {
    if chi_f != 1 && chi_f != -1 {
        return Err(RealError::BadChiF(i32::from(chi_f)).into());
    }
    let mut e = LocalExpression::zero(Group::SL2R, nu);
    for comp in Component::all() {
        let Component::Split { eps, .. } = comp else {
            continue;
        };
        let t = component_representative(comp);
        for x in FixedPoint::for_cartan(CartanKind::Split) {
            let k_x = i32::from(root_modulus(t, x) < 1.0);
            let mut d = if k_x % 2 == 0 { 1.0 } else { -1.0 };
            if eps == -1 {
                d *= f64::from(chi_f);
            }
            e.set(comp, x, C::new(d, 0.0));
        }
    }
    Ok(e)
}

/// Whether `nu` lies on the unitary axis `i R`.
pub fn is_unitary_axis(nu: C) -> bool {
    nu.re.abs() < 1e-12
}

/// Split-Cartan slots with a nonzero coefficient and `|e^{lambda_x}| > 1`.
pub fn temperedness_violations(e: &LocalExpression) -> Vec<(Component, FixedPoint)> {
    let mut out = Vec::new();
    for (&(comp, x), d) in &e.coeffs {
        if comp.kind() != CartanKind::Split || *d == C::default() {
            continue;
        }
        let CartanElement::Split { s, .. } = component_representative(comp) else {
            unreachable!()
        };
        if (e.l / 2.0 * x.alpha_log(s)).exp().norm() > 1.0 + 1e-12 {
            out.push((comp, x));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientRecord {
    pub sheaf: String,
    pub cartan: CartanKind,
    pub component: String,
    pub fixed_point: String,
    pub coefficient: i64,
    pub branch: String,
}

/// Table of all coefficients of a standard sheaf.
pub fn coefficient_table(
    sheaf: &StandardSheafDescriptor,
) -> Result<Vec<CoefficientRecord>, FixedPointError> {
    let name = match sheaf.local_system.chi_f {
        Some(chi) => format!(
            "{}(l={},chi_F={chi:+})",
            sheaf.orbit.label,
            fmt_c(sheaf.twist)
        ),
        None => format!("{}(l={})", sheaf.orbit.label, fmt_c(sheaf.twist)),
    };
    let mut out = Vec::new();
    for comp in Component::all() {
        for x in FixedPoint::for_cartan(comp.kind()) {
            let branch = match comp {
                Component::Split { eps: -1, .. } => {
                    "e^{(lambda-rho)_x}(a_s), sign of -I in coefficient"
                }
                _ => "e^{(lambda-rho)_x}, value 1 at identity",
            };
            out.push(CoefficientRecord {
                sheaf: name.clone(),
                cartan: comp.kind(),
                component: comp.to_string(),
                fixed_point: x.to_string(),
                coefficient: euler_coefficient(sheaf, comp, x)?,
                branch: branch.into(),
            });
        }
    }
    Ok(out)
}

fn fmt_c(z: C) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Fixed points of the Moebius map of `g` on `P^1`, `None` standing for
/// infinity.
pub fn mobius_fixed_points(g: &Mat2) -> Vec<Option<C>> {
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let scale = sl2::norm(g);
    if c.norm() <= 1e-14 * scale {
        let mut v = vec![None];
        if (d - a).norm() > 1e-14 * scale {
            v.push(Some(b / (d - a)));
        }
        return v;
    }
    // c z^2 + (d - a) z - b = 0
    let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
    let z1 = (a - d + disc) / (2.0 * c);
    let z2 = (a - d - disc) / (2.0 * c);
    if (z1 - z2).norm() <= 1e-10 * (1.0 + z1.norm()) {
        vec![Some(z1)]
    } else {
        vec![Some(z1), Some(z2)]
    }
}

pub fn mobius(g: &Mat2, z: Option<C>) -> Option<C> {
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    match z {
        None => {
            if c.norm() < 1e-300 {
                None
            } else {
                Some(a / c)
            }
        }
        Some(z) => {
            let den = c * z + d;
            if den.norm() < 1e-300 {
                None
            } else {
                Some((a * z + b) / den)
            }
        }
    }
}

/// A representative of the nontrivial Weyl element for the Cartan:
/// `diag(i, -i)` normalizes `SO(2)`, `J` normalizes the diagonal torus.
pub fn weyl_representative(kind: CartanKind) -> Mat2 {
    match kind {
        CartanKind::Compact => sl2::mat(sl2::I, C::default(), C::default(), -sl2::I),
        CartanKind::Split => sl2::j(),
    }
}

pub fn same_point(a: Option<C>, b: Option<C>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).norm() < 1e-9 * (1.0 + x.norm()),
        (Some(x), None) | (None, Some(x)) => x.norm() > 1e12,
    }
}

//! Cartan subgroups, flag-variety orbits and local-system data for SL(2,R),
//! with SU(2) as the compact comparison group.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::sl2::{self, Mat2, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealError {
    #[error("unsupported group `{0}` (expected SL2R or SU2)")]
    UnsupportedGroup(String),
    #[error("element is not regular semisimple")]
    NotRegular,
    #[error("no local system on {orbit} for lambda = {lambda}")]
    NoLocalSystem {
        orbit: OrbitLabel,
        lambda: Complex64,
    },
    #[error("chi_F must be +1 or -1, got {0}")]
    BadChiF(i32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    SL2R,
    SU2,
}

impl FromStr for Group {
    type Err = RealError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s
            .to_ascii_uppercase()
            .replace(['(', ')', ',', ' '], "")
            .as_str()
        {
            "SL2R" => Ok(Group::SL2R),
            "SU2" => Ok(Group::SU2),
            _ => Err(RealError::UnsupportedGroup(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanKind {
    Compact,
    Split,
}

impl fmt::Display for CartanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CartanKind::Compact => "compact",
            CartanKind::Split => "split",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CartanSubgroup {
    pub kind: CartanKind,
    /// Order of the component group `F`.
    pub component_group_order: u32,
}

pub fn classify_cartans(group: Group) -> Vec<CartanSubgroup> {
    let compact = CartanSubgroup {
        kind: CartanKind::Compact,
        component_group_order: 1,
    };
    match group {
        Group::SU2 => vec![compact],
        Group::SL2R => vec![
            compact,
            CartanSubgroup {
                kind: CartanKind::Split,
                component_group_order: 2,
            },
        ],
    }
}

/// Connected component of the regular set of a Cartan subgroup.
///
/// On the Lie algebra only `eps = 1` occurs, and the split components
/// `s > 0`, `s < 0` are exchanged by the real Weyl group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Component {
    /// `theta` in `(0, pi)` (`upper`) or `(-pi, 0)`; on the algebra, the sign of `nu`.
    Compact { upper: bool },
    /// `eps * a_s` with `eps = +-1`, `positive` iff `s > 0`.
    Split { eps: i8, positive: bool },
}

impl Component {
    pub fn kind(&self) -> CartanKind {
        match self {
            Component::Compact { .. } => CartanKind::Compact,
            Component::Split { .. } => CartanKind::Split,
        }
    }

    pub fn all() -> [Component; 6] {
        [
            Component::Compact { upper: true },
            Component::Compact { upper: false },
            Component::Split {
                eps: 1,
                positive: true,
            },
            Component::Split {
                eps: 1,
                positive: false,
            },
            Component::Split {
                eps: -1,
                positive: true,
            },
            Component::Split {
                eps: -1,
                positive: false,
            },
        ]
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Compact { upper } => {
                write!(f, "compact:{}", if *upper { "+" } else { "-" })
            }
            Component::Split { eps, positive } => write!(
                f,
                "split:eps={}:{}",
                eps,
                if *positive { "s>0" } else { "s<0" }
            ),
        }
    }
}

/// An element of one of the two Cartan subgroups of SL(2,R).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CartanElement {
    /// `k(theta) = exp(theta J)`.
    Compact { theta: f64 },
    /// `eps * diag(e^s, e^-s)`.
    Split { eps: i8, s: f64 },
}

/// Regularity threshold for group and algebra elements.
pub const REGULAR_TOL: f64 = 1e-12;

impl CartanElement {
    pub fn kind(&self) -> CartanKind {
        match self {
            CartanElement::Compact { .. } => CartanKind::Compact,
            CartanElement::Split { .. } => CartanKind::Split,
        }
    }

    /// `theta` reduced to `(-pi, pi]`.
    pub fn reduced_theta(theta: f64) -> f64 {
        let t = theta.rem_euclid(2.0 * PI);
        if t > PI {
            t - 2.0 * PI
        } else {
            t
        }
    }

    pub fn regular(&self) -> bool {
        match *self {
            CartanElement::Compact { theta } => theta.sin().abs() > REGULAR_TOL,
            CartanElement::Split { s, .. } => s.abs() > REGULAR_TOL,
        }
    }

    pub fn component(&self) -> Option<Component> {
        if !self.regular() {
            return None;
        }
        Some(match *self {
            CartanElement::Compact { theta } => Component::Compact {
                upper: Self::reduced_theta(theta) > 0.0,
            },
            CartanElement::Split { eps, s } => Component::Split {
                eps: eps.signum(),
                positive: s > 0.0,
            },
        })
    }

    pub fn matrix(&self) -> Mat2 {
        match *self {
            CartanElement::Compact { theta } => sl2::k(theta),
            CartanElement::Split { eps, s } => sl2::a(s) * sl2::c(f64::from(eps)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElementClass {
    pub kind: CartanKind,
    /// Sign of `y` on the elliptic set; `+1` on the split set.
    pub component: i8,
    /// `nu = sqrt(-p) >= 0` (compact) or `s = sqrt(p) > 0` (split).
    pub param: f64,
}

impl ElementClass {
    /// Conjugate representative `nu J` or `s H` in the Cartan subalgebra.
    pub fn representative(&self) -> [f64; 3] {
        match self.kind {
            CartanKind::Compact => {
                let nu = f64::from(self.component) * self.param;
                [0.0, nu, -nu]
            }
            CartanKind::Split => [self.param, 0.0, 0.0],
        }
    }

    pub fn algebra_component(&self) -> Component {
        match self.kind {
            CartanKind::Compact => Component::Compact {
                upper: self.component > 0,
            },
            CartanKind::Split => Component::Split {
                eps: 1,
                positive: true,
            },
        }
    }
}

/// Classify `zeta = [[x, y], [z, -x]]` by the sign of `p = x^2 + y z`.
pub fn classify_element(zeta: [f64; 3]) -> Result<ElementClass, RealError> {
    let [x, y, z] = zeta;
    let p = x * x + y * z;
    let scale = x * x + y * y + z * z;
    if !(p.is_finite() && scale.is_finite()) || p.abs() <= REGULAR_TOL * scale || scale == 0.0 {
        return Err(RealError::NotRegular);
    }
    if p > 0.0 {
        Ok(ElementClass {
            kind: CartanKind::Split,
            component: 1,
            param: p.sqrt(),
        })
    } else {
        Ok(ElementClass {
            kind: CartanKind::Compact,
            component: if y > 0.0 { 1 } else { -1 },
            param: (-p).sqrt(),
        })
    }
}

/// The four points of P^1 fixed by the standard Cartan subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FixedPoint {
    /// `i`, fixed by the compact Cartan.
    PlusI,
    /// `-i`
    MinusI,
    /// `0`, fixed by the split Cartan.
    Zero,
    /// `infinity`
    Infinity,
}

impl FixedPoint {
    pub fn for_cartan(kind: CartanKind) -> [FixedPoint; 2] {
        match kind {
            CartanKind::Compact => [FixedPoint::PlusI, FixedPoint::MinusI],
            CartanKind::Split => [FixedPoint::Zero, FixedPoint::Infinity],
        }
    }

    /// The Weyl-conjugate fixed point `s_alpha x`.
    pub fn weyl_partner(self) -> FixedPoint {
        match self {
            FixedPoint::PlusI => FixedPoint::MinusI,
            FixedPoint::MinusI => FixedPoint::PlusI,
            FixedPoint::Zero => FixedPoint::Infinity,
            FixedPoint::Infinity => FixedPoint::Zero,
        }
    }

    /// Coordinate in the `z`-chart, `None` for infinity.
    pub fn coordinate(self) -> Option<C> {
        match self {
            FixedPoint::PlusI => Some(sl2::I),
            FixedPoint::MinusI => Some(-sl2::I),
            FixedPoint::Zero => Some(C::default()),
            FixedPoint::Infinity => None,
        }
    }

    /// `log e^{alpha_x}` at a Cartan parameter: `2i theta`, `-2i theta`,
    /// `2s`, `-2s`. On the Lie algebra this is `alpha_x(zeta)` itself.
    pub fn alpha_log(self, param: f64) -> C {
        match self {
            FixedPoint::PlusI => C::new(0.0, 2.0 * param),
            FixedPoint::MinusI => C::new(0.0, -2.0 * param),
            FixedPoint::Zero => C::new(2.0 * param, 0.0),
            FixedPoint::Infinity => C::new(-2.0 * param, 0.0),
        }
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixedPoint::PlusI => "i",
            FixedPoint::MinusI => "-i",
            FixedPoint::Zero => "0",
            FixedPoint::Infinity => "inf",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrbitLabel {
    UpperHalfPlane,
    LowerHalfPlane,
    RealCircle,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitLabel::UpperHalfPlane => "upper",
            OrbitLabel::LowerHalfPlane => "lower",
            OrbitLabel::RealCircle => "circle",
        })
    }
}

impl FromStr for OrbitLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upper" => Ok(OrbitLabel::UpperHalfPlane),
            "lower" => Ok(OrbitLabel::LowerHalfPlane),
            "circle" => Ok(OrbitLabel::RealCircle),
            _ => Err(format!("unknown orbit `{s}` (upper|lower|circle)")),
        }
    }
}

/// Classification of a root relative to the real form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootType {
    Real,
    Imaginary,
    Complex,
}

/// A positive root of the orbit's positive system, with the positivity of
/// its complex conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRoot {
    pub kind: RootType,
    pub simple: bool,
    pub conjugate_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlagOrbit {
    pub label: OrbitLabel,
    pub attached_cartan: CartanKind,
    pub base_point: FixedPoint,
    /// `+1` if the positive root pulls back to the root with character
    /// `e^{2i theta}` (compact) or `e^{2s}` (split) at the base point.
    pub tau_sign: i8,
    pub positive_roots: Vec<OrbitRoot>,
    pub maximally_real: bool,
    pub c_invariant: i32,
}

/// Maximal reality: every complex simple positive root has positive conjugate.
pub fn is_maximally_real(roots: &[OrbitRoot]) -> bool {
    roots
        .iter()
        .filter(|r| r.kind == RootType::Complex && r.simple)
        .all(|r| r.conjugate_positive)
}

fn count_complex(roots: &[OrbitRoot]) -> i32 {
    roots.iter().filter(|r| r.kind == RootType::Complex).count() as i32
}

fn orbit(label: OrbitLabel) -> FlagOrbit {
    let (cartan, base, sign, kind) = match label {
        OrbitLabel::UpperHalfPlane => (
            CartanKind::Compact,
            FixedPoint::PlusI,
            1,
            RootType::Imaginary,
        ),
        OrbitLabel::LowerHalfPlane => (
            CartanKind::Compact,
            FixedPoint::MinusI,
            -1,
            RootType::Imaginary,
        ),
        OrbitLabel::RealCircle => (CartanKind::Split, FixedPoint::Zero, 1, RootType::Real),
    };
    let roots = vec![OrbitRoot {
        kind,
        simple: true,
        conjugate_positive: kind == RootType::Real,
    }];
    FlagOrbit {
        label,
        attached_cartan: cartan,
        base_point: base,
        tau_sign: sign,
        maximally_real: is_maximally_real(&roots),
        c_invariant: count_complex(&roots),
        positive_roots: roots,
    }
}

pub fn enumerate_orbits(group: Group) -> Result<Vec<FlagOrbit>, RealError> {
    match group {
        Group::SL2R => Ok(vec![
            orbit(OrbitLabel::UpperHalfPlane),
            orbit(OrbitLabel::LowerHalfPlane),
            orbit(OrbitLabel::RealCircle),
        ]),
        Group::SU2 => Err(RealError::UnsupportedGroup(
            "SU2 acts transitively on P^1; orbit data are for SL2R".into(),
        )),
    }
}

pub fn flag_orbit(label: OrbitLabel) -> FlagOrbit {
    orbit(label)
}

/// Orbit of a point of P^1 under the Mobius action of SL(2,R).
pub fn orbit_of_point(z: Option<C>) -> OrbitLabel {
    match z {
        None => OrbitLabel::RealCircle,
        Some(z) if z.im > 0.0 => OrbitLabel::UpperHalfPlane,
        Some(z) if z.im < 0.0 => OrbitLabel::LowerHalfPlane,
        Some(_) => OrbitLabel::RealCircle,
    }
}

/// `lambda = l * omega` with `omega = alpha / 2`.
pub fn integral_shift(l: Complex64) -> Option<i64> {
    let r = (l.re - 1.0).round();
    if l.im.abs() < 1e-12 && (l.re - 1.0 - r).abs() < 1e-12 {
        Some(r as i64)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalSystemParam {
    pub twist: Complex64,
    /// `tau*(lambda - rho)` evaluated on the generator (`J` or `H`).
    pub d_chi: Complex64,
    /// Character of `F = {+-1}` on the split Cartan, `None` when `F` is trivial.
    pub chi_f: Option<i8>,
}

pub fn local_system_params(orbit: &FlagOrbit, l: Complex64) -> Vec<LocalSystemParam> {
    let d_chi = (l - 1.0) * f64::from(orbit.tau_sign);
    match orbit.attached_cartan {
        CartanKind::Compact => match integral_shift(l) {
            Some(_) => vec![LocalSystemParam {
                twist: l,
                d_chi,
                chi_f: None,
            }],
            None => vec![],
        },
        CartanKind::Split => [1i8, -1]
            .into_iter()
            .map(|chi| LocalSystemParam {
                twist: l,
                d_chi,
                chi_f: Some(chi),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StandardSheafDescriptor {
    pub orbit: FlagOrbit,
    pub local_system: LocalSystemParam,
    pub twist: Complex64,
}

impl StandardSheafDescriptor {
    /// `chi_f` is required on the circle and ignored on the open orbits.
    pub fn new(label: OrbitLabel, l: Complex64, chi_f: i32) -> Result<Self, RealError> {
        let orbit = flag_orbit(label);
        let params = local_system_params(&orbit, l);
        let ls = match orbit.attached_cartan {
            CartanKind::Compact => params.into_iter().next(),
            CartanKind::Split => {
                if chi_f != 1 && chi_f != -1 {
                    return Err(RealError::BadChiF(chi_f));
                }
                params.into_iter().find(|p| p.chi_f == Some(chi_f as i8))
            }
        }
        .ok_or(RealError::NoLocalSystem {
            orbit: label,
            lambda: l,
        })?;
        Ok(Self {
            orbit,
            local_system: ls,
            twist: l,
        })
    }
}

//! Geometry of `T*P^1`: vector fields, moment maps, the twisted moment map,
//! the forms `sigma`, `tau_lambda`, `sigma_lambda`, the function `f_lambda`
//! on the open orbits, and parameterized integration cycles.
//!
//! `P^1` carries the charts `z` and `w = 1/z`; fibre coordinates transform
//! as `eta = -z^2 xi`. Coadjoint vectors are matrices under the trace
//! pairing. The fibre norm is `|xi| (1 + |z|^2)`, which makes `mu` an
//! isometry on each fibre for the Frobenius norm.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::real_structure::{FixedPoint, Group, OrbitLabel};
use crate::sl2::{self, Mat2, C, I};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("point z = {0} is not in the open orbit")]
    OutsideOrbit(C),
    #[error("lambda must be regular for orbit cycles")]
    SingularLambda,
    #[error("f_lambda needs k > 0, got {0}")]
    BadK(f64),
    #[error("cycle is defined for {0}, not this orbit")]
    WrongOrbit(OrbitLabel),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Z,
    W,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CotangentPoint {
    pub chart: Chart,
    pub base: C,
    pub fiber: C,
}

impl CotangentPoint {
    pub fn z(base: C, fiber: C) -> Self {
        Self {
            chart: Chart::Z,
            base,
            fiber,
        }
    }

    pub fn w(base: C, fiber: C) -> Self {
        Self {
            chart: Chart::W,
            base,
            fiber,
        }
    }

    /// Same point in the other chart, `None` off the overlap.
    pub fn to_chart(&self, chart: Chart) -> Option<CotangentPoint> {
        if chart == self.chart {
            return Some(*self);
        }
        if self.base == C::default() {
            return None;
        }
        let b = self.base.inv();
        // eta = -z^2 xi, and symmetrically xi = -w^2 eta
        Some(CotangentPoint {
            chart,
            base: b,
            fiber: -self.base * self.base * self.fiber,
        })
    }

    /// Base point in the `z`-chart, `None` for infinity.
    pub fn z_coordinate(&self) -> Option<C> {
        match self.chart {
            Chart::Z => Some(self.base),
            Chart::W => (self.base != C::default()).then(|| self.base.inv()),
        }
    }

    /// `|xi| (1 + |z|^2)`, chart independent.
    pub fn fiber_norm(&self) -> f64 {
        self.fiber.norm() * (1.0 + self.base.norm_sqr())
    }
}

/// Value of the field generated by `Y` at `coord`: `d/dt exp(tY) z` at 0.
pub fn vector_field(y: &Mat2, chart: Chart, coord: C) -> C {
    let (a, b, c) = (y[(0, 0)], y[(0, 1)], y[(1, 0)]);
    match chart {
        Chart::Z => b + 2.0 * a * coord - c * coord * coord,
        Chart::W => c - 2.0 * a * coord - b * coord * coord,
    }
}

/// `M(z)` with `mu = xi M(z)` in the `z`-chart (and the `w`-chart analogue).
fn moment_matrix(chart: Chart, q: C) -> Mat2 {
    let one = C::new(1.0, 0.0);
    match chart {
        Chart::Z => sl2::mat(q, -q * q, one, -q),
        Chart::W => sl2::mat(-q, one, -q * q, q),
    }
}

/// `<mu(p), Y> = xi * vector_field(Y, p)`.
pub fn moment(p: &CotangentPoint) -> Mat2 {
    moment_matrix(p.chart, p.base) * p.fiber
}

/// Coadjoint vector stored as its trace-pairing partner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoadjointVector(pub Mat2);

impl CoadjointVector {
    pub fn pair(&self, x: &Mat2) -> C {
        sl2::pair(&self.0, x)
    }

    /// Component in the real dual of the real form: entrywise real part for
    /// SL(2,R), anti-Hermitian part for SU(2).
    pub fn real_part(&self, group: Group) -> Mat2 {
        real_part(group, &self.0)
    }

    pub fn imag_part(&self, group: Group) -> Mat2 {
        (self.0 - real_part(group, &self.0)) * (-I)
    }

    pub fn invariant(&self) -> C {
        sl2::p(&self.0)
    }
}

pub fn real_part(group: Group, y: &Mat2) -> Mat2 {
    match group {
        Group::SL2R => y.map(|c| C::new(c.re, 0.0)),
        Group::SU2 => (y - y.adjoint()) * C::new(0.5, 0.0),
    }
}

/// `lambda_z` for `lambda = l omega`: the functional vanishing on
/// `[t_z, g]` for the compact torus fixing `z`, equal to `lambda` on `t_z`.
pub fn lambda_x(chart: Chart, coord: C, l: C) -> Mat2 {
    let n = 1.0 + coord.norm_sqr();
    let one = C::new(1.0, 0.0);
    let r2 = C::new(coord.norm_sqr(), 0.0);
    let m = match chart {
        Chart::Z => sl2::mat(one - r2, -2.0 * coord, -2.0 * coord.conj(), r2 - one),
        Chart::W => sl2::mat(r2 - one, -2.0 * coord.conj(), -2.0 * coord, one - r2),
    };
    m * (l / (2.0 * n))
}

pub fn lambda_at(x: FixedPoint, l: C) -> Mat2 {
    match x.coordinate() {
        Some(z) => lambda_x(Chart::Z, z, l),
        None => lambda_x(Chart::W, C::default(), l),
    }
}

/// `mu_lambda = lambda_x + mu`.
pub fn twisted_moment(p: &CotangentPoint, l: C) -> Mat2 {
    lambda_x(p.chart, p.base, l) + moment(p)
}

/// Real tangent vector to `T*P^1` in a chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tangent {
    pub dz: C,
    pub dxi: C,
}

/// `sigma = d xi ^ d z`.
pub fn sigma(u: Tangent, v: Tangent) -> C {
    u.dxi * v.dz - v.dxi * u.dz
}

/// `tau_lambda` on `P^1`: `(2 i l / N^2) Im(conj(u) v)` in the `z`-chart.
pub fn tau_form(z: C, l: C, u: C, v: C) -> C {
    let n = 1.0 + z.norm_sqr();
    l * C::new(0.0, 2.0) / (n * n) * (u.conj() * v).im
}

/// `lambda_x([u, v])` for `u, v` in `su(2)`, through the infinitesimal action.
pub fn tau_lambda(z: C, l: C, u: &Mat2, v: &Mat2) -> C {
    sl2::pair(&lambda_x(Chart::Z, z, l), &sl2::bracket(u, v))
}

/// Kirillov form at a regular `Y`: `sigma_Y([Z1, Y], [Z2, Y]) = tr(Y [Z1, Z2])`,
/// written intrinsically in the tangent vectors.
pub fn sigma_kks(y: &Mat2, v1: &Mat2, v2: &Mat2) -> C {
    let q = sl2::p(y);
    let z2 = -sl2::bracket(y, v2) / (4.0 * q);
    -sl2::tr(&(v1 * z2))
}

/// `sigma_lambda(Z1, Z2) = <Y, [Z1, Z2]>` at the orbit point `Y`.
pub fn sigma_orbit(y: &Mat2, z1: &Mat2, z2: &Mat2) -> C {
    sl2::pair(y, &sl2::bracket(z1, z2))
}

/// Differential of `mu_lambda` at `p` (z-chart) applied to `u`.
pub fn d_twisted_moment(p: &CotangentPoint, l: C, u: Tangent) -> Mat2 {
    assert_eq!(p.chart, Chart::Z);
    let z = p.base;
    let zb = z.conj();
    let n = 1.0 + z.norm_sqr();
    let one = C::new(1.0, 0.0);
    let r2 = C::new(z.norm_sqr(), 0.0);
    let a = sl2::mat(one - r2, -2.0 * z, -2.0 * zb, r2 - one);
    let da = sl2::mat(-zb, C::new(-2.0, 0.0), C::default(), zb);
    let dba = sl2::mat(-z, C::default(), C::new(-2.0, 0.0), z);
    let dl = (da * C::new(n, 0.0) - a * zb) * (l / (2.0 * n * n));
    let dbl = (dba * C::new(n, 0.0) - a * z) * (l / (2.0 * n * n));
    let dm = sl2::mat(one, -2.0 * z, C::default(), -one);
    dl * u.dz + dbl * u.dz.conj() + moment_matrix(Chart::Z, z) * u.dxi + dm * (p.fiber * u.dz)
}

/// `|mu_lambda^* sigma_lambda - (-sigma + pi^* tau_lambda)|` on `(u, v)`,
/// relative to the size of the terms.
pub fn pullback_residual(p: &CotangentPoint, l: C, u: Tangent, v: Tangent) -> f64 {
    let y = twisted_moment(p, l);
    let du = d_twisted_moment(p, l, u);
    let dv = d_twisted_moment(p, l, v);
    let lhs = sigma_kks(&y, &du, &dv);
    let rhs = -sigma(u, v) + tau_form(p.base, l, u.dz, v.dz);
    (lhs - rhs).norm() / (1.0 + lhs.norm().max(rhs.norm()))
}

fn orbit_sign(label: OrbitLabel) -> Result<f64, GeomError> {
    match label {
        OrbitLabel::UpperHalfPlane => Ok(1.0),
        OrbitLabel::LowerHalfPlane => Ok(-1.0),
        OrbitLabel::RealCircle => Err(GeomError::WrongOrbit(label)),
    }
}

/// `f_lambda(z) = (2 |Im z| / (1 + |z|^2))^k` on the open orbit `label`,
/// `lambda = -k omega`; extends by 0 to the circle.
pub fn f_lambda(label: OrbitLabel, z: C, k: f64) -> Result<f64, GeomError> {
    if k <= 0.0 {
        return Err(GeomError::BadK(k));
    }
    let s = orbit_sign(label)?;
    if s * z.im <= 0.0 {
        return Err(GeomError::OutsideOrbit(z));
    }
    Ok((2.0 * s * z.im / (1.0 + z.norm_sqr())).powf(k))
}

/// `d log f_lambda = xi dz + conj`, returning `xi = k (1/(2 i y) - conj(z)/N)`.
pub fn d_log_f(label: OrbitLabel, z: C, k: f64) -> Result<C, GeomError> {
    f_lambda(label, z, k)?;
    let n = 1.0 + z.norm_sqr();
    Ok(k * ((2.0 * I * z.im).inv() - z.conj() / n))
}

/// `(d xi/dx, d xi/dy)` along the graph of `d_log_f`.
pub fn d_log_f_derivatives(z: C, k: f64) -> (C, C) {
    let n = 1.0 + z.norm_sqr();
    let (x, y) = (z.re, z.im);
    let zb = z.conj();
    let dx = -k * (n - 2.0 * x * zb) / (n * n);
    let dy = k * (-(2.0 * I * y * y).inv() + (I * n + 2.0 * y * zb) / (n * n));
    (dx, dy)
}

/// `(y, f, f / y^k)` at `z = x + i y` for `y = 10^-1 .. 10^-depth`.
pub fn boundary_probe(x: f64, k: f64, depth: u32) -> Vec<(f64, f64, f64)> {
    (1..=depth)
        .map(|j| {
            let y = 10f64.powi(-(j as i32));
            let f = f_lambda(OrbitLabel::UpperHalfPlane, C::new(x, y), k).unwrap();
            (y, f, f / y.powf(k))
        })
        .collect()
}

/// Residual of `Y` lying on the sheet `Omega(S, lambda)`: invariant match,
/// vanishing real part and the right nappe.
pub fn orbit_sheet_residual(label: OrbitLabel, l: C, y: &Mat2) -> f64 {
    let y0 = lambda_at(base_fixed_point(label), l);
    let inv = (sl2::p(y) - sl2::p(&y0)).norm();
    let re = sl2::norm(&real_part(Group::SL2R, y));
    // on an elliptic sheet i M, sign of M's (0,1) entry picks the nappe
    let nappe = (y[(0, 1)] / y0[(0, 1)]).re;
    inv + re + if nappe > 0.0 { 0.0 } else { 1.0 }
}

pub fn base_fixed_point(label: OrbitLabel) -> FixedPoint {
    match label {
        OrbitLabel::UpperHalfPlane => FixedPoint::PlusI,
        OrbitLabel::LowerHalfPlane => FixedPoint::MinusI,
        OrbitLabel::RealCircle => FixedPoint::Zero,
    }
}

/// Upper half-plane point at hyperbolic polar coordinates about `i`.
fn hyperbolic_point(h: f64, phi: f64) -> (C, C, C) {
    let t = (h / 2.0).tanh();
    let d = C::from_polar(t, phi);
    let one = C::new(1.0, 0.0);
    let z = I * (one + d) / (one - d);
    // dz/dd = 2i/(1-d)^2
    let dzdd = 2.0 * I / ((one - d) * (one - d));
    let dd_dh = C::from_polar(0.5 / (h / 2.0).cosh().powi(2), phi);
    let dd_dphi = I * d;
    (z, dzdd * dd_dh, dzdd * dd_dphi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CycleShape {
    /// `Omega(S, lambda)` by `(theta, s)`, `Y = Ad(k(theta) a(s)) lambda_x0`.
    OmegaOrbit { label: OrbitLabel },
    /// Conormal bundle of the circle by `(psi, r)`, `z = tan psi`,
    /// `xi = i e^{i phase} r cos^2 psi`.
    Conormal { fiber_phase: f64 },
    /// Graph of `d log f_lambda` over `S` by hyperbolic polar `(h, phi)`.
    DlogfGraph { label: OrbitLabel },
    /// SU(2) orbit of `(l/2) H` by spherical `(beta, phi)`.
    Su2Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cycle {
    pub shape: CycleShape,
    pub l: C,
    /// `+-1`, fixed at construction by the orientation rule of the shape.
    pub orientation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CycleSample {
    pub params: [f64; 2],
    pub point: Option<CotangentPoint>,
    /// `mu_lambda` of the point, or the orbit point itself.
    #[serde(skip)]
    pub value: Mat2,
    /// Integrand form evaluated on `(d/du, d/dv)`, before orientation.
    pub density: C,
}

/// Truncation schedule for the fibre radius.
pub const SCHEDULE: [f64; 4] = [4.0, 8.0, 16.0, 32.0];

/// Overall orientation sign, calibrated on the `k = 1` discrete series.
pub const ORIENTATION_CALIBRATION: f64 = 1.0;

impl Cycle {
    fn with_rule(shape: CycleShape, l: C) -> Self {
        let mut c = Cycle {
            shape,
            l,
            orientation: 1.0,
        };
        let (u0, v0) = {
            let d = c.domain(SCHEDULE[0]);
            (
                0.37 * (d[0].0 + d[0].1) + 0.1,
                0.5 * (d[1].0 + d[1].1) + 0.2,
            )
        };
        let s = c.sample(u0, v0);
        let sign = match shape {
            // -i sigma_lambda positive
            CycleShape::OmegaOrbit { .. } | CycleShape::Su2Sphere => (-I * s.density).re.signum(),
            // -Im sigma positive; the density is -sigma here
            CycleShape::Conormal { .. } => (s.density).im.signum(),
            // complex orientation of S
            CycleShape::DlogfGraph { label } => {
                let (_, zh, zp) = hyperbolic_point(v0.max(0.3), u0);
                let det = (zh.conj() * zp).im;
                det.signum() * orbit_sign(label).unwrap()
            }
        };
        c.orientation = sign * ORIENTATION_CALIBRATION;
        c
    }

    pub fn flipped(&self) -> Cycle {
        Cycle {
            orientation: -self.orientation,
            ..*self
        }
    }

    /// Parameter rectangle of `D(r)`.
    pub fn domain(&self, r: f64) -> [(f64, f64); 2] {
        match self.shape {
            CycleShape::OmegaOrbit { .. } => {
                let k2 = self.l.norm_sqr();
                let smax = (2.0 * r * r / k2).max(1.0).acosh() / 4.0;
                [(0.0, PI), (0.0, smax)]
            }
            CycleShape::Conormal { .. } => [(-PI / 2.0, PI / 2.0), (-r, r)],
            CycleShape::DlogfGraph { .. } => [(0.0, 2.0 * PI), (0.0, (r / self.l.norm()).asinh())],
            CycleShape::Su2Sphere => [(0.0, 2.0 * PI), (0.0, PI)],
        }
    }

    pub fn sample(&self, u: f64, v: f64) -> CycleSample {
        let l = self.l;
        match self.shape {
            CycleShape::OmegaOrbit { label } => {
                let y0 = lambda_at(base_fixed_point(label), l);
                let kk = sl2::k(u);
                let g = kk * sl2::a(v);
                let y = sl2::ad(&g, &y0);
                let hk = sl2::ad(&kk, &sl2::h());
                CycleSample {
                    params: [u, v],
                    point: None,
                    value: y,
                    density: sigma_orbit(&y, &sl2::j(), &hk),
                }
            }
            CycleShape::Conormal { fiber_phase } => {
                let (s, c) = u.sin_cos();
                let ph = C::from_polar(1.0, fiber_phase);
                let p = CotangentPoint::z(C::new(u.tan(), 0.0), I * ph * (v * c * c));
                let tu = Tangent {
                    dz: C::new(1.0 / (c * c), 0.0),
                    dxi: -2.0 * I * ph * (v * c * s),
                };
                let tv = Tangent {
                    dz: C::default(),
                    dxi: I * ph * (c * c),
                };
                CycleSample {
                    params: [u, v],
                    point: Some(p),
                    value: twisted_moment(&p, l),
                    density: -sigma(tu, tv) + tau_form(p.base, l, tu.dz, tv.dz),
                }
            }
            CycleShape::DlogfGraph { label } => {
                let k = -l.re;
                let (mut z, mut zh, mut zp) = hyperbolic_point(v, u);
                if label == OrbitLabel::LowerHalfPlane {
                    z = z.conj();
                    zh = zh.conj();
                    zp = zp.conj();
                }
                let xi = d_log_f(label, z, k).unwrap_or_default();
                let (dx, dy) = d_log_f_derivatives(z, k);
                let t = |dz: C| Tangent {
                    dz,
                    dxi: dx * dz.re + dy * dz.im,
                };
                let (th, tp) = (t(zh), t(zp));
                let p = CotangentPoint::z(z, xi);
                CycleSample {
                    params: [u, v],
                    point: Some(p),
                    value: twisted_moment(&p, l),
                    density: -sigma(th, tp) + tau_form(z, l, th.dz, tp.dz),
                }
            }
            CycleShape::Su2Sphere => {
                // Y = (l/2)(sin b cos p sx + sin b sin p sy + cos b sz)
                let (sb, cb) = v.sin_cos();
                let (sp, cp) = u.sin_cos();
                let half = l / 2.0;
                let pauli = |x: C, y: C, z: C| sl2::mat(z, x - I * y, x + I * y, -z);
                let y = pauli(C::new(sb * cp, 0.0), C::new(sb * sp, 0.0), C::new(cb, 0.0)) * half;
                let dy_du = pauli(C::new(-sb * sp, 0.0), C::new(sb * cp, 0.0), C::default()) * half;
                let dy_dv =
                    pauli(C::new(cb * cp, 0.0), C::new(cb * sp, 0.0), C::new(-sb, 0.0)) * half;
                CycleSample {
                    params: [u, v],
                    point: None,
                    value: y,
                    density: sigma_kks(&y, &dy_du, &dy_dv),
                }
            }
        }
    }

    /// `n_u x n_v` midpoint samples of `D(r)`.
    pub fn samples(&self, r: f64, n_u: usize, n_v: usize) -> Vec<CycleSample> {
        let d = self.domain(r);
        let mut out = Vec::with_capacity(n_u * n_v);
        for i in 0..n_u {
            let u = d[0].0 + (d[0].1 - d[0].0) * (i as f64 + 0.5) / n_u as f64;
            for j in 0..n_v {
                let v = d[1].0 + (d[1].1 - d[1].0) * (j as f64 + 0.5) / n_v as f64;
                out.push(self.sample(u, v));
            }
        }
        out
    }

    pub fn group(&self) -> Group {
        match self.shape {
            CycleShape::Su2Sphere => Group::SU2,
            _ => Group::SL2R,
        }
    }
}

/// Sheet of the elliptic orbit of `lambda = l omega` over `S`.
pub fn omega_orbit_cycle(label: OrbitLabel, l: C) -> Result<Cycle, GeomError> {
    if l.norm() < 1e-12 {
        return Err(GeomError::SingularLambda);
    }
    orbit_sign(label)?;
    Ok(Cycle::with_rule(CycleShape::OmegaOrbit { label }, l))
}

pub fn conormal_circle_cycle(l: C) -> Cycle {
    Cycle::with_rule(CycleShape::Conormal { fiber_phase: 0.0 }, l)
}

/// Conormal parameterization with the fibre rotated by `phase`; off the
/// real-structure locus when `phase != 0`.
pub fn rotated_conormal_cycle(l: C, phase: f64) -> Cycle {
    Cycle::with_rule(CycleShape::Conormal { fiber_phase: phase }, l)
}

/// Graph of `d log f_lambda` over `S`; `lambda = l omega` with `l < 0`.
pub fn dlogf_graph_cycle(label: OrbitLabel, l: C) -> Result<Cycle, GeomError> {
    if l.re.is_nan() || l.re >= 0.0 || l.im != 0.0 {
        return Err(GeomError::BadK(-l.re));
    }
    orbit_sign(label)?;
    Ok(Cycle::with_rule(CycleShape::DlogfGraph { label }, l))
}

/// Coadjoint SU(2) orbit attached to the representation of dimension `m + 1`.
pub fn su2_sphere_cycle(m: u32) -> Cycle {
    Cycle::with_rule(CycleShape::Su2Sphere, C::new(f64::from(m) + 1.0, 0.0))
}

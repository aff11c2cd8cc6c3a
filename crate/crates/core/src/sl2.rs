//! 2x2 complex matrices for sl(2): basis, trace pairing, invariant polynomial.
//!
//! A point of sl(2,R) is written `[[x, y], [z, -x]]`. Coadjoint vectors are
//! stored as matrices `Y` acting by `X -> tr(Y X)`; in `(x, y, z)`
//! coordinates of `X` this is the dot product with `w(Y) = (2a, c, b)` for
//! `Y = [[a, b], [c, -a]]`.

use nalgebra::Matrix2;
use num_complex::Complex64;

pub type C = Complex64;
pub type Mat2 = Matrix2<C>;

pub const I: C = C::new(0.0, 1.0);

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn mat(a: C, b: C, cc: C, d: C) -> Mat2 {
    Mat2::new(a, b, cc, d)
}

pub fn traceless(x: C, y: C, z: C) -> Mat2 {
    mat(x, y, z, -x)
}

pub fn real_traceless(v: [f64; 3]) -> Mat2 {
    traceless(c(v[0]), c(v[1]), c(v[2]))
}

pub fn h() -> Mat2 {
    real_traceless([1.0, 0.0, 0.0])
}

pub fn e() -> Mat2 {
    real_traceless([0.0, 1.0, 0.0])
}

pub fn f() -> Mat2 {
    real_traceless([0.0, 0.0, 1.0])
}

/// `J = E - F`, generator of the compact Cartan.
pub fn j() -> Mat2 {
    real_traceless([0.0, 1.0, -1.0])
}

/// `exp(theta J) = [[cos, sin], [-sin, cos]]`.
pub fn k(theta: f64) -> Mat2 {
    let (s, co) = theta.sin_cos();
    mat(c(co), c(s), c(-s), c(co))
}

/// `exp(s H) = diag(e^s, e^-s)`.
pub fn a(s: f64) -> Mat2 {
    mat(c(s.exp()), C::default(), C::default(), c((-s).exp()))
}

pub fn tr(m: &Mat2) -> C {
    m[(0, 0)] + m[(1, 1)]
}

pub fn det(m: &Mat2) -> C {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

pub fn pair(y: &Mat2, x: &Mat2) -> C {
    tr(&(y * x))
}

pub fn bracket(a: &Mat2, b: &Mat2) -> Mat2 {
    a * b - b * a
}

/// Inverse of a matrix with determinant one.
pub fn inv_sl(g: &Mat2) -> Mat2 {
    mat(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)])
}

pub fn inv(g: &Mat2) -> Mat2 {
    inv_sl(g) / det(g)
}

pub fn ad(g: &Mat2, y: &Mat2) -> Mat2 {
    g * y * inv(g)
}

/// Invariant quadratic `p(Y) = a^2 + b c = -det Y = tr(Y^2)/2`.
pub fn p(y: &Mat2) -> C {
    -det(y)
}

/// Coordinates `(x, y, z)` of a traceless matrix.
pub fn coords(m: &Mat2) -> [C; 3] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)]]
}

/// Dual vector `w` with `tr(Y X) = w . (x, y, z)(X)`.
pub fn dual(y: &Mat2) -> [C; 3] {
    [c(2.0) * y[(0, 0)], y[(1, 0)], y[(0, 1)]]
}

/// Inverse of [`dual`].
pub fn from_dual(w: [C; 3]) -> Mat2 {
    traceless(w[0] / 2.0, w[2], w[1])
}

/// Frobenius norm `sqrt(tr(Y Y*))`.
pub fn norm(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

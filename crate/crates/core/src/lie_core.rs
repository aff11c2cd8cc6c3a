//! Root systems, weights and Weyl groups in exact rational arithmetic.
//!
//! Roots are stored in simple-root coordinates, weights in the
//! fundamental-weight basis. The Cartan matrix follows the convention
//! `a_ij = <alpha_i^vee, alpha_j>`, so the fundamental coordinates of
//! `alpha_j` form column `j`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub type Q = Rational64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("unsupported series `{0}` (expected A1, A2, B2, G2 or a product of A1)")]
    UnsupportedSeries(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Simple {
    A1,
    A2,
    B2,
    G2,
}

impl Simple {
    fn cartan(self) -> Vec<Vec<i64>> {
        match self {
            Simple::A1 => vec![vec![2]],
            Simple::A2 => vec![vec![2, -1], vec![-1, 2]],
            // alpha_1 long, alpha_2 short
            Simple::B2 => vec![vec![2, -1], vec![-2, 2]],
            // alpha_1 short, alpha_2 long
            Simple::G2 => vec![vec![2, -3], vec![-1, 2]],
        }
    }

    /// Half squared lengths of the simple roots, `d_i = (alpha_i, alpha_i)/2`.
    fn half_norms(self) -> Vec<Q> {
        match self {
            Simple::A1 => vec![Q::one()],
            Simple::A2 => vec![Q::one(), Q::one()],
            Simple::B2 => vec![Q::one(), Q::new(1, 2)],
            Simple::G2 => vec![Q::one(), Q::from_integer(3)],
        }
    }
}

/// A weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    pub coords: Vec<Q>,
}

impl Weight {
    pub fn new(coords: Vec<Q>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self {
            coords: coords.iter().map(|&c| Q::from_integer(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            coords: vec![Q::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: Q) -> Weight {
        Weight::new(self.coords.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-Q::one())
    }

    /// `<mu, theta>` for a torus point given in coroot coordinates.
    pub fn eval_f64(&self, theta: &[f64]) -> f64 {
        self.coords
            .iter()
            .zip(theta)
            .map(|(c, t)| to_f64(*c) * t)
            .sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| to_f64(*c)).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub type QMatrix = Vec<Vec<Q>>;

fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, l| acc + a[i][l] * b[l][j]))
                .collect()
        })
        .collect()
}

fn mat_vec(a: &QMatrix, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse; the matrices met here are always invertible.
fn mat_inv(a: &QMatrix) -> QMatrix {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("singular matrix");
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot = m[col].clone();
                for (x, v) in m[r].iter_mut().zip(pivot) {
                    *x -= f * v;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Indices of simple reflections, `s_{w[0]} s_{w[1]} ...`.
    pub word: Vec<usize>,
    /// Action on fundamental-weight coordinates.
    pub matrix: QMatrix,
}

impl WeylElement {
    pub fn sign(&self) -> i32 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn act(&self, lambda: &Weight) -> Result<Weight, LieError> {
        if lambda.rank() != self.matrix.len() {
            return Err(LieError::RankMismatch {
                expected: self.matrix.len(),
                got: lambda.rank(),
            });
        }
        Ok(Weight::new(mat_vec(&self.matrix, &lambda.coords)))
    }

    /// Product `self * other`. The word is the concatenation, which need
    /// not be reduced; look the matrix up in [`WeylGroup`] for a reduced one.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement {
            word,
            matrix: mat_mul(&self.matrix, &other.matrix),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub type_label: String,
    pub components: Vec<Simple>,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// All roots in simple-root coordinates, lexicographically sorted.
    pub roots: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub simple_roots: Vec<Vec<i64>>,
    pub rho: Weight,
    half_norms: Vec<Q>,
    gram: QMatrix,
}

fn parse_label(label: &str) -> Result<Vec<Simple>, LieError> {
    let bad = || LieError::UnsupportedSeries(label.to_string());
    let norm = label.trim().to_ascii_uppercase().replace(' ', "");
    let parts: Vec<&str> = norm.split(['X', '*', '×']).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(bad());
    }
    let comps: Vec<Simple> = parts
        .iter()
        .map(|p| match *p {
            "A1" => Ok(Simple::A1),
            "A2" => Ok(Simple::A2),
            "B2" => Ok(Simple::B2),
            "G2" => Ok(Simple::G2),
            _ => Err(bad()),
        })
        .collect::<Result<_, _>>()?;
    if comps.len() > 1 && comps.iter().any(|c| *c != Simple::A1) {
        return Err(bad());
    }
    Ok(comps)
}

pub fn build_root_system(type_label: &str) -> Result<RootSystem, LieError> {
    let components = parse_label(type_label)?;
    let rank: usize = components.iter().map(|c| c.cartan().len()).sum();
    let mut cartan = vec![vec![0i64; rank]; rank];
    let mut half_norms = Vec::with_capacity(rank);
    let mut off = 0;
    for c in &components {
        let block = c.cartan();
        for (i, row) in block.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                cartan[off + i][off + j] = *v;
            }
        }
        half_norms.extend(c.half_norms());
        off += block.len();
    }

    let simple_roots: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
        .collect();
    let reflect = |beta: &[i64], i: usize| -> Vec<i64> {
        let c: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
        let mut out = beta.to_vec();
        out[i] -= c;
        out
    };
    let mut seen: BTreeSet<Vec<i64>> = simple_roots.iter().cloned().collect();
    let mut queue: VecDeque<Vec<i64>> = simple_roots.iter().cloned().collect();
    while let Some(beta) = queue.pop_front() {
        for i in 0..rank {
            let next = reflect(&beta, i);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let roots: Vec<Vec<i64>> = seen.into_iter().collect();
    let positive_roots: Vec<Vec<i64>> = roots
        .iter()
        .filter(|r| r.iter().all(|&c| c >= 0))
        .cloned()
        .collect();

    let c_q: QMatrix = cartan
        .iter()
        .map(|r| r.iter().map(|&v| Q::from_integer(v)).collect())
        .collect();
    // (alpha_i, alpha_j) = d_i a_ij; (omega_i, omega_j) = C^{-T} B C^{-1}.
    let b: QMatrix = (0..rank)
        .map(|i| (0..rank).map(|j| half_norms[i] * c_q[i][j]).collect())
        .collect();
    let c_inv = mat_inv(&c_q);
    let c_inv_t: QMatrix = (0..rank)
        .map(|i| (0..rank).map(|j| c_inv[j][i]).collect())
        .collect();
    let gram = mat_mul(&mat_mul(&c_inv_t, &b), &c_inv);

    let mut rs = RootSystem {
        type_label: type_label.trim().to_string(),
        components,
        cartan_matrix: cartan,
        roots,
        positive_roots,
        simple_roots,
        rho: Weight::zero(rank),
        half_norms,
        gram,
    };
    let mut sum = Weight::zero(rank);
    for r in &rs.positive_roots {
        sum = sum.add(&rs.root_to_weight(r));
    }
    rs.rho = sum.scale(Q::new(1, 2));
    Ok(rs)
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan_matrix.len()
    }

    /// Fundamental-weight coordinates of a root given in simple-root coordinates.
    pub fn root_to_weight(&self, beta: &[i64]) -> Weight {
        let n = self.rank();
        Weight::new(
            (0..n)
                .map(|i| Q::from_integer((0..n).map(|j| self.cartan_matrix[i][j] * beta[j]).sum()))
                .collect(),
        )
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn weight_to_root_coords(&self, lambda: &Weight) -> Vec<Q> {
        let c_q: QMatrix = self
            .cartan_matrix
            .iter()
            .map(|r| r.iter().map(|&v| Q::from_integer(v)).collect())
            .collect();
        mat_vec(&mat_inv(&c_q), &lambda.coords)
    }

    pub fn root_norm2(&self, beta: &[i64]) -> Q {
        let n = self.rank();
        let mut acc = Q::zero();
        for i in 0..n {
            for j in 0..n {
                acc += Q::from_integer(beta[i] * beta[j] * self.cartan_matrix[i][j])
                    * self.half_norms[i];
            }
        }
        acc
    }

    /// `2(lambda, beta)/(beta, beta)`.
    pub fn coroot_pairing(&self, lambda: &Weight, beta: &[i64]) -> Q {
        let two = Q::from_integer(2);
        let norm = self.root_norm2(beta);
        beta.iter()
            .zip(&self.half_norms)
            .zip(&lambda.coords)
            .fold(Q::zero(), |acc, ((&n, d), l)| {
                acc + Q::from_integer(n) * two * d / norm * l
            })
    }

    /// Invariant form `(lambda, mu)`, with simple-root lengths as in
    /// `Simple::half_norms` (A1: `(alpha, alpha) = 2`).
    pub fn inner(&self, a: &Weight, b: &Weight) -> Q {
        let n = self.rank();
        let mut acc = Q::zero();
        for i in 0..n {
            for j in 0..n {
                acc += a.coords[i] * self.gram[i][j] * b.coords[j];
            }
        }
        acc
    }

    pub fn simple_reflection_matrix(&self, i: usize) -> QMatrix {
        let n = self.rank();
        let mut m = identity(n);
        for (j, row) in m.iter_mut().enumerate() {
            row[i] -= Q::from_integer(self.cartan_matrix[j][i]);
        }
        m
    }

    pub fn simple_reflect(&self, i: usize, lambda: &Weight) -> Weight {
        Weight::new(mat_vec(&self.simple_reflection_matrix(i), &lambda.coords))
    }

    /// Dominant representative of the Weyl orbit of `lambda`.
    pub fn dominant_rep(&self, lambda: &Weight) -> Weight {
        let mut mu = lambda.clone();
        while let Some(i) = mu.coords.iter().position(|c| c.is_negative()) {
            mu = self.simple_reflect(i, &mu);
        }
        mu
    }

    pub fn check_rank(&self, lambda: &Weight) -> Result<(), LieError> {
        if lambda.rank() != self.rank() {
            Err(LieError::RankMismatch {
                expected: self.rank(),
                got: lambda.rank(),
            })
        } else {
            Ok(())
        }
    }
}

pub fn rho(rs: &RootSystem) -> Weight {
    rs.rho.clone()
}

/// Enumerate W by breadth-first closure of the simple reflections.
/// BFS order makes each stored word reduced; the identity comes first.
pub fn enumerate_weyl(rs: &RootSystem) -> Vec<WeylElement> {
    let n = rs.rank();
    let gens: Vec<QMatrix> = (0..n).map(|i| rs.simple_reflection_matrix(i)).collect();
    let mut seen: BTreeMap<QMatrix, ()> = BTreeMap::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = WeylElement {
        word: vec![],
        matrix: identity(n),
    };
    seen.insert(id.matrix.clone(), ());
    queue.push_back(id);
    while let Some(w) = queue.pop_front() {
        for (i, g) in gens.iter().enumerate() {
            let m = mat_mul(&w.matrix, g);
            if !seen.contains_key(&m) {
                seen.insert(m.clone(), ());
                let mut word = w.word.clone();
                word.push(i);
                queue.push_back(WeylElement { word, matrix: m });
            }
        }
        out.push(w);
    }
    out
}

pub fn act(w: &WeylElement, lambda: &Weight) -> Result<Weight, LieError> {
    w.act(lambda)
}

pub fn sign(w: &WeylElement) -> i32 {
    w.sign()
}

/// The full Weyl group with lookup by matrix.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    index: BTreeMap<QMatrix, usize>,
}

impl WeylGroup {
    pub fn new(rs: &RootSystem) -> Self {
        let elements = enumerate_weyl(rs);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.matrix.clone(), i))
            .collect();
        Self { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, matrix: &QMatrix) -> Option<usize> {
        self.index.get(matrix).copied()
    }

    /// Reduced representative of `a * b`.
    pub fn product(&self, a: &WeylElement, b: &WeylElement) -> &WeylElement {
        let m = mat_mul(&a.matrix, &b.matrix);
        &self.elements[self.index[&m]]
    }

    pub fn longest(&self) -> &WeylElement {
        self.elements
            .iter()
            .max_by_key(|w| w.len())
            .expect("W is never empty")
    }

    /// Stabiliser `W_lambda`.
    pub fn stabilizer(&self, lambda: &Weight) -> Vec<&WeylElement> {
        self.elements
            .iter()
            .filter(|w| w.act(lambda).map(|m| &m == lambda).unwrap_or(false))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force closure oracle independent of the BFS above: iterate
    /// reflections in every root until the set stops growing.
    fn closure_count(cartan: &[Vec<i64>]) -> usize {
        let n = cartan.len();
        let mut set: BTreeSet<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        loop {
            let before = set.len();
            let cur: Vec<_> = set.iter().cloned().collect();
            for b in &cur {
                for i in 0..n {
                    let c: i64 = (0..n).map(|j| cartan[i][j] * b[j]).sum();
                    let mut nb = b.clone();
                    nb[i] -= c;
                    set.insert(nb);
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn root_counts() {
        for (label, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A1xA1", 4)] {
            let rs = build_root_system(label).unwrap();
            assert_eq!(rs.roots.len(), n, "{label}");
            assert_eq!(rs.roots.len(), closure_count(&rs.cartan_matrix));
            assert_eq!(rs.positive_roots.len() * 2, n);
        }
    }

    #[test]
    fn roots_are_sorted_and_symmetric() {
        let rs = build_root_system("G2").unwrap();
        let mut sorted = rs.roots.clone();
        sorted.sort();
        assert_eq!(sorted, rs.roots);
        for r in &rs.positive_roots {
            let neg: Vec<i64> = r.iter().map(|c| -c).collect();
            assert!(rs.roots.contains(&neg));
        }
    }

    #[test]
    fn unsupported_series() {
        assert!(matches!(
            build_root_system("E8"),
            Err(LieError::UnsupportedSeries(_))
        ));
        assert!(build_root_system("A2xA1").is_err());
    }

    #[test]
    fn rho_is_sum_of_fundamentals() {
        for label in ["A1", "A2", "B2", "G2", "A1xA1xA1"] {
            let rs = build_root_system(label).unwrap();
            assert_eq!(rho(&rs), Weight::from_ints(&vec![1; rs.rank()]), "{label}");
            for s in &rs.simple_roots {
                assert_eq!(rs.coroot_pairing(&rs.rho, s), Q::one());
            }
        }
    }

    #[test]
    fn weyl_orders() {
        for (label, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A1xA1", 4)] {
            let rs = build_root_system(label).unwrap();
            let w = enumerate_weyl(&rs);
            assert_eq!(w.len(), n, "{label}");
            assert!(w[0].is_empty());
        }
    }

    #[test]
    fn a1_reflection_negates_omega() {
        let rs = build_root_system("A1").unwrap();
        let w = enumerate_weyl(&rs);
        let om = Weight::from_ints(&[1]);
        assert_eq!(w[0].act(&om).unwrap(), om);
        assert_eq!(w[1].act(&om).unwrap(), om.neg());
        assert_eq!(w[1].sign(), -1);
    }

    #[test]
    fn a2_longest_element() {
        let rs = build_root_system("A2").unwrap();
        let g = WeylGroup::new(&rs);
        assert_eq!(g.longest().len(), 3);
        assert_eq!(g.longest().sign(), -1);
        let lam = Weight::from_ints(&[2, 1]);
        assert_eq!(g.longest().act(&lam).unwrap(), Weight::from_ints(&[-1, -2]));
    }

    #[test]
    fn rank_mismatch() {
        let rs = build_root_system("A2").unwrap();
        let w = enumerate_weyl(&rs);
        assert_eq!(
            w[1].act(&Weight::from_ints(&[1])),
            Err(LieError::RankMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn inner_product_normalisation() {
        let rs = build_root_system("A1").unwrap();
        let om = Weight::from_ints(&[1]);
        assert_eq!(rs.inner(&om, &om), Q::new(1, 2));
        let a = rs.root_to_weight(&[1]);
        assert_eq!(rs.inner(&a, &a), Q::from_integer(2));
    }

    #[test]
    fn stabilizer_of_singular_weight() {
        let rs = build_root_system("A1").unwrap();
        let g = WeylGroup::new(&rs);
        assert_eq!(g.stabilizer(&Weight::from_ints(&[0])).len(), 2);
        assert_eq!(g.stabilizer(&Weight::from_ints(&[3])).len(), 1);
    }
}

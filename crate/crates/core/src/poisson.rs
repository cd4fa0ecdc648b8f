//! Bivectors `P^{ij}` with polynomial entries, and affine changes of coordinates.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::poly::{Poly, PolyError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoissonError {
    #[error("entry matrix must be {dim}x{dim}")]
    Shape { dim: usize },
    #[error("entry ({i},{j}) has dimension {found}, expected {dim}")]
    EntryDimension { i: usize, j: usize, found: usize, dim: usize },
    #[error("entries ({i},{j}) and ({j},{i}) are not antisymmetric")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("entry index ({i},{j}) invalid for dimension {dim}: need 1 <= i < j <= dim")]
    BadIndex { i: usize, j: usize, dim: usize },
    #[error("entry ({i},{j}) listed twice")]
    Duplicate { i: usize, j: usize },
    #[error("entry ({i},{j}): {source}")]
    Poly { i: usize, j: usize, source: PolyError },
    #[error("invalid Poisson JSON: {0}")]
    Json(String),
    #[error("affine map is singular")]
    Singular,
    #[error("affine map has dimension {found}, expected {dim}")]
    AffineDimension { found: usize, dim: usize },
}

/// Antisymmetric `n×n` matrix of polynomials in `u1..un`. The Jacobi identity
/// is checked once at construction and recorded, not enforced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    dim: usize,
    entries: Vec<Poly>,
    jacobi_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoissonJson {
    pub dim: usize,
    pub entries: Vec<EntryJson>,
}

/// One upper-triangular entry, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub poly: String,
}

impl PoissonStructure {
    /// Full matrix form; antisymmetry (including a zero diagonal) is required.
    pub fn new(dim: usize, rows: Vec<Vec<Poly>>) -> Result<Self, PoissonError> {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(PoissonError::Shape { dim });
        }
        let entries: Vec<Poly> = rows.into_iter().flatten().collect();
        for (idx, p) in entries.iter().enumerate() {
            if p.dim() != dim {
                return Err(PoissonError::EntryDimension { i: idx / dim, j: idx % dim, found: p.dim(), dim });
            }
        }
        for i in 0..dim {
            for j in i..dim {
                if entries[i * dim + j] != -&entries[j * dim + i] {
                    return Err(PoissonError::NotAntisymmetric { i, j });
                }
            }
        }
        let mut s = PoissonStructure { dim, entries, jacobi_verified: false };
        s.jacobi_verified = s.jacobiator_components().iter().all(|(_, p)| p.is_zero());
        Ok(s)
    }

    /// Builds from zero-based upper entries `(i, j, P^{ij})` with `i < j`; the
    /// rest is completed by antisymmetry.
    pub fn from_upper(dim: usize, upper: impl IntoIterator<Item = (usize, usize, Poly)>) -> Result<Self, PoissonError> {
        let mut rows = vec![vec![Poly::zero(dim); dim]; dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, p) in upper {
            if i >= j || j >= dim {
                return Err(PoissonError::BadIndex { i: i + 1, j: j + 1, dim });
            }
            if std::mem::replace(&mut seen[i * dim + j], true) {
                return Err(PoissonError::Duplicate { i: i + 1, j: j + 1 });
            }
            if p.dim() != dim {
                return Err(PoissonError::EntryDimension { i, j, found: p.dim(), dim });
            }
            rows[j][i] = -&p;
            rows[i][j] = p;
        }
        Self::new(dim, rows)
    }

    /// The Lie–Poisson structure of so(3): `P¹² = u3, P²³ = u1, P³¹ = u2`.
    pub fn so3() -> Self {
        let v = |i| Poly::var(3, i);
        Self::from_upper(3, [(0, 1, v(2)), (1, 2, v(0)), (0, 2, -&v(1))]).expect("so(3) is well formed")
    }

    /// A bivector that fails Jacobi: `P¹² = u3, P¹³ = u1·u2, P²³ = 0`.
    pub fn non_poisson_witness() -> Self {
        let v = |i| Poly::var(3, i);
        Self::from_upper(3, [(0, 1, v(2)), (0, 2, &v(0) * &v(1))]).expect("witness is well formed")
    }

    /// Random structure on the plane; any `P¹²` is Poisson in dimension 2.
    pub fn random_planar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let p = Poly::random(rng, 2, 3, 3);
            if !p.is_zero() {
                return Self::from_upper(2, [(0, 1, p)]).expect("planar structure is well formed");
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `P^{ij}`, zero-based.
    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.dim + j]
    }

    pub fn jacobi_verified(&self) -> bool {
        self.jacobi_verified
    }

    /// `J^{abc} = Σ_l P^{la}∂_l P^{bc} + P^{lb}∂_l P^{ca} + P^{lc}∂_l P^{ab}`, zero-based indices.
    pub fn jacobiator(&self, a: usize, b: usize, c: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for l in 0..self.dim {
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                let lhs = self.entry(l, x);
                if !lhs.is_zero() {
                    out += &(lhs * &self.entry(y, z).diff(l));
                }
            }
        }
        out
    }

    /// `J^{abc}` for all `a < b < c`.
    pub fn jacobiator_components(&self) -> Vec<((usize, usize, usize), Poly)> {
        let n = self.dim;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    out.push(((a, b, c), self.jacobiator(a, b, c)));
                }
            }
        }
        out
    }

    pub fn from_json(json: &PoissonJson) -> Result<Self, PoissonError> {
        let dim = json.dim;
        let mut upper = Vec::with_capacity(json.entries.len());
        for e in &json.entries {
            if e.i == 0 || e.i >= e.j || e.j > dim {
                return Err(PoissonError::BadIndex { i: e.i, j: e.j, dim });
            }
            let p = Poly::parse(&e.poly, dim).map_err(|source| PoissonError::Poly { i: e.i, j: e.j, source })?;
            upper.push((e.i - 1, e.j - 1, p));
        }
        Self::from_upper(dim, upper)
    }

    pub fn parse_json(text: &str) -> Result<Self, PoissonError> {
        let json: PoissonJson = serde_json::from_str(text).map_err(|e| PoissonError::Json(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> PoissonJson {
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let p = self.entry(i, j);
                if !p.is_zero() {
                    entries.push(EntryJson { i: i + 1, j: j + 1, poly: p.to_string() });
                }
            }
        }
        PoissonJson { dim: self.dim, entries }
    }

    /// The structure in coordinates `ũ = A·u + c`:
    /// `P̃^{ab}(ũ) = A_{ai} A_{bj} P^{ij}(A⁻¹(ũ − c))`.
    pub fn pushforward(&self, map: &AffineMap) -> Result<Self, PoissonError> {
        if map.dim() != self.dim {
            return Err(PoissonError::AffineDimension { found: map.dim(), dim: self.dim });
        }
        let n = self.dim;
        let pulled: Vec<Poly> = self.entries.iter().map(|p| map.transport(p)).collect();
        let mut rows = vec![vec![Poly::zero(n); n]; n];
        for (a, row) in rows.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                let mut acc = Poly::zero(n);
                for i in 0..n {
                    let ai = &map.linear[(a, i)];
                    if ai.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let c = ai * &map.linear[(b, j)];
                        if !c.is_zero() {
                            acc += &pulled[i * n + j].scale(&c);
                        }
                    }
                }
                *slot = acc;
            }
        }
        Self::new(n, rows)
    }
}

/// Invertible affine map `ũ = A·u + c` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    linear: Matrix,
    shift: Vec<Rational>,
    inverse: Matrix,
}

impl AffineMap {
    pub fn new(linear: Matrix, shift: Vec<Rational>) -> Result<Self, PoissonError> {
        if linear.rows() != linear.cols() || shift.len() != linear.rows() {
            return Err(PoissonError::AffineDimension { found: shift.len(), dim: linear.rows() });
        }
        let inverse = linear.inverse().ok_or(PoissonError::Singular)?;
        Ok(AffineMap { linear, shift, inverse })
    }

    /// Integer matrix with entries in `-2..=2` (redrawn until invertible) and shift in `-3..=3`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        let int = |x: i64| Rational::from_integer(BigInt::from(x));
        loop {
            let rows: Vec<Vec<Rational>> =
                (0..dim).map(|_| (0..dim).map(|_| int(rng.random_range(-2..=2))).collect()).collect();
            let shift: Vec<Rational> = (0..dim).map(|_| int(rng.random_range(-3..=3))).collect();
            if let Ok(map) = Self::new(Matrix::from_rows(rows), shift) {
                return map;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn shift(&self) -> &[Rational] {
        &self.shift
    }

    /// Rewrites a function of `u` as a function of `ũ`: `f̃(ũ) = f(A⁻¹(ũ − c))`.
    pub fn transport(&self, f: &Poly) -> Poly {
        let n = self.dim();
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let mut img = Poly::zero(n);
                let mut constant = Rational::zero();
                for j in 0..n {
                    let a = &self.inverse[(i, j)];
                    if !a.is_zero() {
                        img += &Poly::var(n, j).scale(a);
                        constant -= a * &self.shift[j];
                    }
                }
                &img + &Poly::constant(n, constant)
            })
            .collect();
        f.compose(&images)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim), vec![Rational::zero(); dim]).expect("identity is invertible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn so3_is_poisson_and_witness_is_not() {
        assert!(PoissonStructure::so3().jacobi_verified());
        let w = PoissonStructure::non_poisson_witness();
        assert!(!w.jacobi_verified());
        // hand computation: only the middle cyclic term survives, P^{12} ∂_1 P^{31}
        assert_eq!(w.jacobiator(0, 1, 2), p("-u2*u3", 3));
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let z = Poly::zero(2);
        let one = Poly::one(2);
        let bad = PoissonStructure::new(2, vec![vec![z.clone(), one.clone()], vec![one, z]]);
        assert_eq!(bad, Err(PoissonError::NotAntisymmetric { i: 0, j: 1 }));
        let diag = PoissonStructure::new(1, vec![vec![Poly::one(1)]]);
        assert_eq!(diag, Err(PoissonError::NotAntisymmetric { i: 0, j: 0 }));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text =
            r#"{"dim":3,"entries":[{"i":1,"j":2,"poly":"u3"},{"i":2,"j":3,"poly":"u1"},{"i":1,"j":3,"poly":"-u2"}]}"#;
        let s = PoissonStructure::parse_json(text).unwrap();
        assert_eq!(s, PoissonStructure::so3());
        assert_eq!(PoissonStructure::from_json(&s.to_json()).unwrap(), s);
        let swapped = r#"{"dim":3,"entries":[{"i":2,"j":1,"poly":"u3"}]}"#;
        assert!(matches!(PoissonStructure::parse_json(swapped), Err(PoissonError::BadIndex { .. })));
        let bad_poly = r#"{"dim":2,"entries":[{"i":1,"j":2,"poly":"u3"}]}"#;
        assert!(matches!(PoissonStructure::parse_json(bad_poly), Err(PoissonError::Poly { .. })));
        assert!(matches!(PoissonStructure::parse_json("{"), Err(PoissonError::Json(_))));
    }

    #[test]
    fn affine_transport_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let map = AffineMap::random(&mut rng, 3);
        let f = p("u1^2*u3 - 2*u2 + 5", 3);
        let tf = map.transport(&f);
        // f̃(A u + c) = f(u)
        let forward: Vec<Poly> = (0..3)
            .map(|a| {
                let mut img = Poly::constant(3, map.shift()[a].clone());
                for i in 0..3 {
                    img += &Poly::var(3, i).scale(&map.linear()[(a, i)]);
                }
                img
            })
            .collect();
        assert_eq!(tf.compose(&forward), f);
    }

    #[test]
    fn pushforward_preserves_poisson_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let map = AffineMap::random(&mut rng, 3);
        assert!(PoissonStructure::so3().pushforward(&map).unwrap().jacobi_verified());
        assert!(!PoissonStructure::non_poisson_witness().pushforward(&map).unwrap().jacobi_verified());
    }
}

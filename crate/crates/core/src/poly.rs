//! Exact multivariate polynomials over the rationals.
//!
//! Variables are `u1..un`; in code they are addressed by zero-based index, so
//! `Poly::var(3, 0)` is `u1`. A [`Poly`] never stores a zero coefficient, so
//! structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use smallvec::SmallVec;

use crate::Rational;

mod parse;

pub use parse::PolyError;

/// Exponent vector `(α₁, …, αₙ)`; doubles as a derivative multi-index `∂_L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    pub fn unit(dim: usize, var: usize) -> Self {
        let mut m = Self::zero(dim);
        m.0[var] = 1;
        m
    }

    pub fn from_exponents(exponents: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exponents))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total order `|L| = α₁ + … + αₙ`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn increment(&mut self, var: usize) {
        self.0[var] += 1;
    }

    pub fn decrement(&mut self, var: usize) {
        self.0[var] -= 1;
    }

    pub fn sum(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Every multi-index of total order at most `max_order`, graded then lexicographic.
    pub fn all_up_to(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for order in 0..=max_order {
            let mut current = vec![0u32; dim];
            fill_order(&mut current, 0, order, &mut out);
        }
        out
    }
}

fn fill_order(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if current.is_empty() {
        if remaining == 0 {
            out.push(MultiIndex::from_exponents(current));
        }
        return;
    }
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex::from_exponents(current));
        current[pos] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        fill_order(current, pos + 1, remaining - a, out);
    }
    current[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, c, MultiIndex::zero(dim))
    }

    /// The coordinate function `u_{var+1}`.
    pub fn var(dim: usize, var: usize) -> Self {
        assert!(var < dim, "variable index {var} out of range for dimension {dim}");
        Self::monomial(dim, Rational::one(), MultiIndex::unit(dim, var))
    }

    pub fn monomial(dim: usize, c: Rational, exponents: MultiIndex) -> Self {
        assert_eq!(exponents.dim(), dim);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Poly { dim, terms }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut p = Poly::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim);
            p.add_term(m, c);
        }
        p
    }

    /// Parses the `u1..un` expression grammar; see [`PolyError`] for failures.
    pub fn parse(text: &str, dim: usize) -> Result<Self, PolyError> {
        parse::parse(text, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    /// Constant term, meaningful when [`Poly::is_constant`] holds.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&MultiIndex::zero(self.dim))
    }

    fn add_term(&mut self, m: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly { dim: self.dim, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Partial derivative `∂/∂u_{var+1}`.
    pub fn diff(&self, var: usize) -> Poly {
        assert!(var < self.dim, "variable index {var} out of range for dimension {}", self.dim);
        let mut out = Poly::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.terms.insert(m2, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Mixed derivative `∂_L = ∂₁^{α₁} ∘ ⋯ ∘ ∂ₙ^{αₙ}`.
    pub fn diff_multi(&self, index: &MultiIndex) -> Poly {
        assert_eq!(index.dim(), self.dim);
        if index.is_zero() {
            return self.clone();
        }
        let mut out = Poly::zero(self.dim);
        'terms: for (m, c) in &self.terms {
            let mut factor = BigInt::one();
            let mut m2 = m.clone();
            for (v, &a) in index.0.iter().enumerate() {
                let e = m.0[v];
                if a > e {
                    continue 'terms;
                }
                for t in 0..a {
                    factor *= e - t;
                }
                m2.0[v] = e - a;
            }
            out.terms.insert(m2, c * Rational::from_integer(factor));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one(self.dim);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitutes `u_i ↦ images[i]`; all images share the target dimension.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.dim, "need one image per variable");
        let target_dim = images.first().map_or(0, Poly::dim);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.dim)]).collect();
        let mut out = Poly::zero(target_dim);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_dim, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap() * &images[v];
                    powers[v].push(next);
                }
                if e > 0 {
                    term = &term * &powers[v][e as usize];
                }
            }
            out += &term;
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.dim);
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    v *= x;
                }
            }
            total += v;
        }
        total
    }

    /// Random polynomial of total degree at most `max_degree` with integer
    /// coefficients drawn uniformly from `-bound..=bound`, one draw per monomial
    /// in graded-lexicographic order.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_degree: u32, bound: i64) -> Poly {
        let mut p = Poly::zero(dim);
        for m in MultiIndex::all_up_to(dim, max_degree) {
            let c: i64 = rng.random_range(-bound..=bound);
            p.add_term(m, Rational::from_integer(BigInt::from(c)));
        }
        p
    }

    fn check_dim(&self, other: &Poly) {
        assert_eq!(self.dim, other.dim, "polynomial dimension mismatch");
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded, highest degree first
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| b.order().cmp(&a.order()).then_with(|| b.cmp(a)));
        for (pos, (m, c)) in ordered.into_iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (pos, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !magnitude.is_one() || m.is_zero() {
                factors.push(magnitude.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("u{}", v + 1)),
                    _ => factors.push(format!("u{}^{}", v + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.check_dim(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.check_dim(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { dim: self.dim, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_dim(rhs);
        let mut out = Poly::zero(self.dim);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.sum(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul<&Rational> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Rational) -> Poly {
        self.scale(rhs)
    }
}

/// Small helper for tests and fixtures: `p/q` as a [`Rational`].
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn diff_examples() {
        assert_eq!(p("u1^2*u2", 2).diff(0), p("2*u1*u2", 2));
        assert!(p("u1", 2).diff(1).is_zero());
        assert_eq!(p("u1*u2*u3", 3).diff(2), p("u1*u2", 3));
    }

    #[test]
    fn diff_multi_matches_repeated_diff() {
        let q = p("3*u1^3*u2^2 - u1*u2 + 7", 2);
        let idx = MultiIndex::from_exponents(&[2, 1]);
        assert_eq!(q.diff_multi(&idx), q.diff(0).diff(0).diff(1));
    }

    #[test]
    fn display_round_trip() {
        let q = p("1/2*u1^2 - u2", 2);
        assert_eq!(q.len(), 2);
        assert_eq!(q.to_string(), "1/2*u1^2 - u2");
        assert_eq!(p(&q.to_string(), 2), q);
        assert_eq!(Poly::zero(3).to_string(), "0");
        assert_eq!(p("-3", 1).to_string(), "-3");
    }

    #[test]
    fn compose_with_affine_images() {
        // (u1 + u2)^2 with u1 -> u1 + 1, u2 -> -u2
        let q = p("u1^2 + 2*u1*u2 + u2^2", 2);
        let images = [p("u1 + 1", 2), p("-u2", 2)];
        assert_eq!(q.compose(&images), p("(u1 + 1 - u2)^2", 2));
    }

    #[test]
    fn monomial_enumeration_counts() {
        // binomial(n + d, d)
        assert_eq!(MultiIndex::all_up_to(3, 3).len(), 20);
        assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
        assert_eq!(MultiIndex::all_up_to(0, 3).len(), 1);
    }

    #[test]
    fn random_is_seed_deterministic() {
        let a = Poly::random(&mut ChaCha8Rng::seed_from_u64(7), 3, 3, 3);
        let b = Poly::random(&mut ChaCha8Rng::seed_from_u64(7), 3, 3, 3);
        assert_eq!(a, b);
        assert!(a.degree().unwrap_or(0) <= 3);
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((0u32..3, 0u32..3, -4i64..5), 0..5).prop_map(|ts| {
            Poly::from_terms(2, ts.into_iter().map(|(a, b, c)| (MultiIndex::from_exponents(&[a, b]), rat(c, 1))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn partials_commute(a in small_poly(), i in 0usize..2, j in 0usize..2) {
            prop_assert_eq!(a.diff(i).diff(j), a.diff(j).diff(i));
        }

        #[test]
        fn leibniz_rule(a in small_poly(), b in small_poly(), i in 0usize..2) {
            let lhs = (&a * &b).diff(i);
            let rhs = &(&a.diff(i) * &b) + &(&a * &b.diff(i));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn parse_display_round_trip(a in small_poly()) {
            prop_assert_eq!(Poly::parse(&a.to_string(), 2).unwrap(), a);
        }
    }
}

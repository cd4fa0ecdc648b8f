//! The Jacobiator, its differential consequences, and the order-by-order
//! reduction of the `ħ³` associator.
//!
//! All sums live on three sinks `f = 0`, `g = 1`, `h = 2`. Jacobiator
//! vertices are 3 and 4; a consequence adds vertex 5.

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eval::evaluate_series;
use crate::graph::{classify, Graph};
use crate::linalg::{Matrix, Solution};
use crate::poisson::PoissonStructure;
use crate::poly::{rat, Poly};
use crate::series::{GraphSeries, Term};
use crate::Rational;

/// One of the three argument slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    F,
    G,
    H,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::F, Slot::G, Slot::H];

    pub fn sink(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Slot::F => "f",
            Slot::G => "g",
            Slot::H => "h",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConsequenceLabel {
    Jac,
    S(Slot),
    I(Slot),
    Eq3(Slot),
}

impl fmt::Display for ConsequenceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConsequenceLabel::Jac => write!(f, "Jac"),
            ConsequenceLabel::S(s) => write!(f, "S_{}", s.name()),
            ConsequenceLabel::I(s) => write!(f, "I_{}", s.name()),
            ConsequenceLabel::Eq3(s) => write!(f, "Eq3_{}", s.name()),
        }
    }
}

/// A labelled graph sum that vanishes whenever `P` satisfies Jacobi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequenceSum {
    pub label: ConsequenceLabel,
    pub series: GraphSeries,
}

impl ConsequenceSum {
    fn new(label: ConsequenceLabel, terms: Vec<Term>) -> Self {
        let series = GraphSeries::from_terms(3, terms).expect("three sinks throughout").reduce_skew();
        ConsequenceSum { label, series }
    }

    /// Terms containing a tadpole.
    pub fn tadpole_subsum(&self) -> GraphSeries {
        self.series.filtered(|t| t.graph.has_tadpole())
    }

    pub fn without_tadpoles(&self) -> GraphSeries {
        self.series.filtered(|t| !t.graph.has_tadpole())
    }

    pub fn restrict(&self, order: [usize; 3]) -> GraphSeries {
        self.series.restrict(&order)
    }
}

/// `{{f,g},h} − {{f,h},g} − {{g,h},f}` in graph form, as raw terms.
fn jacobiator_terms() -> Vec<Term> {
    let g = |t: Vec<[usize; 2]>| Graph::new_strict(3, t).expect("Jacobiator graphs are strict");
    vec![
        Term::new(rat(1, 1), g(vec![[0, 1], [3, 2]])),
        Term::new(rat(-1, 1), g(vec![[0, 2], [3, 1]])),
        Term::new(rat(-1, 1), g(vec![[1, 2], [0, 3]])),
    ]
}

pub fn jacobiator() -> ConsequenceSum {
    ConsequenceSum::new(ConsequenceLabel::Jac, jacobiator_terms())
}

fn with_new_vertex(term: &Term, pair: [usize; 2]) -> Term {
    let mut targets = term.graph.targets().to_vec();
    targets.push(pair);
    Term::new(term.coeff.clone(), Graph::new(3, targets).expect("labels in range"))
}

/// `P^{ij} ∂_j Jac(∂_i f, g, h)` and its analogues: a new vertex whose Left
/// edge lands on the slot's sink and whose Right edge runs over every vertex
/// of each Jacobiator graph (the three sinks and both internal vertices).
pub fn s_consequence(slot: Slot) -> ConsequenceSum {
    let mut terms = Vec::new();
    for t in jacobiator_terms() {
        for target in 0..t.graph.vertex_count() {
            terms.push(with_new_vertex(&t, [slot.sink(), target]));
        }
    }
    ConsequenceSum::new(ConsequenceLabel::S(slot), terms)
}

/// `∂_j Jac(P^{ij}, ·, ·) ∂_i s` with `P^{ij}` placed in the slot: the slot's
/// sink becomes a new vertex `X` whose Left edge lands on the old sink and
/// whose Right edge runs over `X` itself (tadpole), the two Jacobiator
/// vertices and the two other sinks.
pub fn i_consequence(slot: Slot) -> ConsequenceSum {
    let s = slot.sink();
    let x = 5;
    let mut terms = Vec::new();
    for t in jacobiator_terms() {
        let replaced: Vec<[usize; 2]> =
            t.graph.targets().iter().map(|p| p.map(|v| if v == s { x } else { v })).collect();
        let others = (0..3).filter(|&o| o != s);
        for target in [x, 3, 4].into_iter().chain(others) {
            let mut targets = replaced.clone();
            targets.push([s, target]);
            terms.push(Term::new(t.coeff.clone(), Graph::new(3, targets).expect("labels in range")));
        }
    }
    ConsequenceSum::new(ConsequenceLabel::I(slot), terms)
}

/// The Jacobiator with one extra bracket between two arguments:
/// `(f,g)` for `F`, `(g,h)` for `G`, `(f,h)` for `H`.
pub fn eq3(slot: Slot) -> ConsequenceSum {
    let pair = match slot {
        Slot::F => [0, 1],
        Slot::G => [1, 2],
        Slot::H => [0, 2],
    };
    let terms = jacobiator_terms().iter().map(|t| with_new_vertex(t, pair)).collect();
    ConsequenceSum::new(ConsequenceLabel::Eq3(slot), terms)
}

pub fn consequence(label: ConsequenceLabel) -> ConsequenceSum {
    match label {
        ConsequenceLabel::Jac => jacobiator(),
        ConsequenceLabel::S(s) => s_consequence(s),
        ConsequenceLabel::I(s) => i_consequence(s),
        ConsequenceLabel::Eq3(s) => eq3(s),
    }
}

/// The part of a consequence used in the `ħ³` reduction. Tadpole terms of the
/// I-sums are dropped: the associator has none, and each tadpole subsum
/// vanishes on its own for Poisson `P`.
pub fn reduction_part(label: ConsequenceLabel) -> GraphSeries {
    let c = consequence(label);
    match label {
        ConsequenceLabel::I(_) => c.without_tadpoles(),
        _ => c.series,
    }
}

/// One order-`(i,j,k)` identity: `A_{ijk} = Σ c · X_{ijk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimIdentity {
    pub order: [usize; 3],
    pub combination: Vec<(Rational, ConsequenceLabel)>,
    /// Number of associator terms this identity accounts for.
    pub eliminated: usize,
}

impl ClaimIdentity {
    pub fn labels(&self) -> Vec<ConsequenceLabel> {
        self.combination.iter().map(|(_, l)| *l).collect()
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.combination.iter().map(|(c, _)| c.clone()).collect()
    }
}

/// The seven identities that reduce the `ħ³` associator.
pub fn claim_identities() -> Vec<ClaimIdentity> {
    use ConsequenceLabel::{I, S};
    use Slot::{F, G, H};
    let id = |order, combination: Vec<((i64, i64), ConsequenceLabel)>, eliminated| ClaimIdentity {
        order,
        combination: combination.into_iter().map(|((p, q), l)| (rat(p, q), l)).collect(),
        eliminated,
    };
    vec![
        id([2, 2, 1], vec![((2, 3), S(F))], 3),
        id([1, 2, 2], vec![((2, 3), S(G))], 3),
        id([2, 1, 2], vec![((-2, 3), S(H))], 3),
        id([1, 1, 1], vec![((1, 6), I(F)), ((-1, 6), I(H))], 8),
        id([1, 1, 2], vec![((1, 6), I(F)), ((1, 6), I(G)), ((-1, 3), S(H))], 9),
        id([1, 2, 1], vec![((1, 3), I(F)), ((-1, 3), I(H))], 4),
        id([2, 1, 1], vec![((1, 3), S(F)), ((-1, 6), I(G)), ((-1, 6), I(H))], 9),
    ]
}

/// `Σ c · X`, reduced.
pub fn linear_combination(parts: &[(Rational, &GraphSeries)], sinks: usize) -> GraphSeries {
    let mut acc = GraphSeries::new(sinks);
    for (c, s) in parts {
        acc = acc.plus(&s.scaled(c)).expect("sink counts agree");
    }
    acc.reduce_skew()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCheck {
    pub identity: ClaimIdentity,
    /// Terms of the associator at this order.
    pub associator_terms: usize,
    /// `A_{ijk} − Σ c·X_{ijk}`; empty when the identity holds as graph sums.
    pub residual: GraphSeries,
    /// Whether both sides also agree after evaluation with a fixed non-Poisson
    /// bivector on seeded arguments. Weaker than the graph-level check.
    pub evaluation_agrees: bool,
}

impl OrderCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_empty() && self.associator_terms == self.identity.eliminated
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub checks: Vec<OrderCheck>,
    pub total_terms: usize,
    /// Non-empty restrictions at orders outside the seven identities.
    pub uncovered: Vec<([usize; 3], usize)>,
}

impl ClaimReport {
    pub fn eliminated_counts(&self) -> Vec<usize> {
        self.checks.iter().map(|c| c.associator_terms).collect()
    }

    pub fn eliminated_total(&self) -> usize {
        self.eliminated_counts().iter().sum()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(OrderCheck::passed)
            && self.uncovered.is_empty()
            && self.eliminated_total() == self.total_terms
    }

    pub fn failing_orders(&self) -> Vec<[usize; 3]> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.identity.order).collect()
    }
}

/// Checks every identity of [`claim_identities`] against `a3` (the reduced
/// `ħ³` associator) as exact graph-sum equalities, plus an evaluation cross-check.
pub fn verify_claim(a3: &GraphSeries) -> ClaimReport {
    let a3 = a3.reduce_skew();
    let witness = PoissonStructure::non_poisson_witness();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let args: Vec<Poly> = (0..3).map(|_| Poly::random(&mut rng, 3, 2, 3)).collect();
    let identities = claim_identities();
    let mut checks = Vec::new();
    for identity in identities.iter().cloned() {
        let part = a3.restrict(&identity.order);
        let restricted: Vec<(Rational, GraphSeries)> = identity
            .combination
            .iter()
            .map(|(c, l)| (c.clone(), reduction_part(*l).restrict(&identity.order)))
            .collect();
        let refs: Vec<(Rational, &GraphSeries)> = restricted.iter().map(|(c, s)| (c.clone(), s)).collect();
        let rhs = linear_combination(&refs, 3);
        let residual = part.minus(&rhs).expect("three sinks").reduce_skew();
        let eval = |s: &GraphSeries| evaluate_series(s, &witness, &args, 3).expect("three arguments");
        let evaluation_agrees = eval(&part) == eval(&rhs);
        checks.push(OrderCheck { associator_terms: part.len(), identity, residual, evaluation_agrees });
    }
    let mut uncovered = std::collections::BTreeMap::new();
    for t in a3.terms() {
        let d = t.graph.sink_in_degrees();
        let order = [d[0], d[1], d[2]];
        if !identities.iter().any(|i| i.order == order) {
            *uncovered.entry(order).or_insert(0) += 1;
        }
    }
    ClaimReport { checks, total_terms: a3.len(), uncovered: uncovered.into_iter().collect() }
}

/// Result of expressing a graph sum in a span of graph sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Combination {
    /// `target = Σ coefficients[i] · basis[i]`; `kernel` spans the other solutions.
    Solved { coefficients: Vec<Rational>, kernel: Vec<Vec<Rational>> },
    /// A functional on canonical graphs that kills every basis element but not the target.
    Infeasible { certificate: Vec<(Graph, Rational)> },
}

impl Combination {
    /// The coefficients when they are the only solution.
    pub fn unique(&self) -> Option<&[Rational]> {
        match self {
            Combination::Solved { coefficients, kernel } if kernel.is_empty() => Some(coefficients),
            _ => None,
        }
    }
}

/// Solves `target = Σ x_i basis_i` over the canonical graphs exactly.
pub fn solve_combination(target: &GraphSeries, basis: &[GraphSeries]) -> Combination {
    let target = target.reduce_skew();
    let basis: Vec<GraphSeries> = basis.iter().map(GraphSeries::reduce_skew).collect();
    let mut keys: Vec<Graph> =
        target.terms().chain(basis.iter().flat_map(GraphSeries::terms)).map(|t| t.graph.clone()).collect();
    keys.sort();
    keys.dedup();
    let lookup =
        |s: &GraphSeries, g: &Graph| s.terms().find(|t| &t.graph == g).map_or_else(Rational::zero, |t| t.coeff.clone());
    let rows: Vec<Vec<Rational>> = keys.iter().map(|g| basis.iter().map(|b| lookup(b, g)).collect()).collect();
    let rhs: Vec<Rational> = keys.iter().map(|g| lookup(&target, g)).collect();
    let matrix = if keys.is_empty() { Matrix::zeros(0, basis.len()) } else { Matrix::from_rows(rows) };
    match matrix.solve(&rhs) {
        Solution::Solved { particular, kernel } => Combination::Solved { coefficients: particular, kernel },
        Solution::Infeasible { certificate } => Combination::Infeasible {
            certificate: keys.into_iter().zip(certificate).filter(|(_, c)| !c.is_zero()).collect(),
        },
    }
}

/// Per-order solve against the consequences named by each identity, without
/// using its coefficients.
pub fn solve_claim(a3: &GraphSeries) -> Vec<(ClaimIdentity, Combination)> {
    claim_identities()
        .into_iter()
        .map(|identity| {
            let basis: Vec<GraphSeries> =
                identity.labels().iter().map(|l| reduction_part(*l).restrict(&identity.order)).collect();
            let result = solve_combination(&a3.restrict(&identity.order), &basis);
            (identity, result)
        })
        .collect()
}

/// True when some term of the series has an eye.
pub fn has_eye_term(series: &GraphSeries) -> bool {
    series.terms().any(|t| classify(&t.graph).has_eye)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobiator_shape() {
        let j = jacobiator();
        assert_eq!(j.series.len(), 3);
        assert_eq!(j.restrict([1, 1, 1]), j.series);
    }

    #[test]
    fn s_f_double_edge_dies() {
        assert!(s_consequence(Slot::F).restrict([3, 1, 1]).is_empty());
    }

    #[test]
    fn eq3_is_the_221_part_of_s_f() {
        assert_eq!(s_consequence(Slot::F).restrict([2, 2, 1]), eq3(Slot::F).series);
        assert_eq!(s_consequence(Slot::G).restrict([1, 2, 2]), eq3(Slot::G).series);
    }

    #[test]
    fn i_sums_have_eyes_and_tadpoles() {
        for s in Slot::ALL {
            let i = i_consequence(s);
            assert!(has_eye_term(&i.series));
            assert_eq!(i.tadpole_subsum().len(), 3);
            assert!(!i.restrict([1, 1, 1]).is_empty());
        }
    }

    #[test]
    fn i_111_not_in_span_of_s() {
        let basis: Vec<GraphSeries> = Slot::ALL.iter().map(|&s| s_consequence(s).restrict([1, 1, 1])).collect();
        let target = i_consequence(Slot::F).without_tadpoles().restrict(&[1, 1, 1]);
        assert!(matches!(solve_combination(&target, &basis), Combination::Infeasible { .. }));
    }

    #[test]
    fn solve_trivial_cases() {
        let basis = vec![jacobiator().series];
        let r = solve_combination(&GraphSeries::new(3), &basis);
        assert_eq!(r.unique(), Some(&[Rational::zero()][..]));
        let r = solve_combination(&jacobiator().series.scaled(&rat(5, 7)), &basis);
        assert_eq!(r.unique(), Some(&[rat(5, 7)][..]));
    }
}

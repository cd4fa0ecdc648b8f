//! Graphs as polydifferential operators.
//!
//! Every internal vertex holds a copy of `P^{ij}`, with `i` carried by its Left
//! edge and `j` by its Right edge. Every edge differentiates the content of
//! the vertex it lands on by its own index, and all indices run over `1..n`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::poisson::PoissonStructure;
use crate::poly::{MultiIndex, Poly};
use crate::series::{GraphSeries, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("graph has {expected} sinks but {found} arguments were given")]
    ArgumentCount { expected: usize, found: usize },
    #[error("argument {index} has dimension {found}, Poisson structure has {expected}")]
    Dimension { index: usize, expected: usize, found: usize },
    #[error("operator needs {expected} sinks, series has {found}")]
    SinkCount { expected: usize, found: usize },
}

/// Memoizes `∂_L P^{ij}` for one Poisson structure.
struct ContentCache<'a> {
    poisson: &'a PoissonStructure,
    derivatives: HashMap<(usize, MultiIndex), Poly>,
    nonzero_pairs: Vec<(usize, usize)>,
}

impl<'a> ContentCache<'a> {
    fn new(poisson: &'a PoissonStructure) -> Self {
        let n = poisson.dim();
        let nonzero_pairs =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !poisson.entry(i, j).is_zero()).collect();
        ContentCache { poisson, derivatives: HashMap::new(), nonzero_pairs }
    }

    fn content(&mut self, (i, j): (usize, usize), d: &MultiIndex) -> &Poly {
        let key = (i * self.poisson.dim() + j, d.clone());
        let p = self.poisson;
        self.derivatives.entry(key).or_insert_with(|| p.entry(i, j).diff_multi(d))
    }
}

/// Walks every index assignment with nonzero vertex contents, passing the
/// per-vertex incoming multi-indices and the product of vertex contents.
fn for_each_assignment(graph: &Graph, cache: &mut ContentCache<'_>, visit: &mut dyn FnMut(&[MultiIndex], Poly)) {
    let n = cache.poisson.dim();
    let mut incoming = vec![MultiIndex::zero(n); graph.vertex_count()];
    let mut chosen = vec![(0usize, 0usize); graph.internal_count()];
    let pairs = cache.nonzero_pairs.clone();
    recurse(graph, cache, &pairs, 0, &mut incoming, &mut chosen, visit);
}

fn recurse(
    graph: &Graph,
    cache: &mut ContentCache<'_>,
    pairs: &[(usize, usize)],
    pos: usize,
    incoming: &mut Vec<MultiIndex>,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[MultiIndex], Poly),
) {
    let k = graph.internal_count();
    let m = graph.sink_count();
    if pos == k {
        let mut product = Poly::one(cache.poisson.dim());
        for v in 0..k {
            let c = cache.content(chosen[v], &incoming[m + v]);
            if c.is_zero() {
                return;
            }
            product = &product * c;
        }
        visit(incoming, product);
        return;
    }
    let [l, r] = graph.targets()[pos];
    for &(i, j) in pairs {
        incoming[l].increment(i);
        incoming[r].increment(j);
        chosen[pos] = (i, j);
        recurse(graph, cache, pairs, pos + 1, incoming, chosen, visit);
        incoming[l].decrement(i);
        incoming[r].decrement(j);
    }
}

fn check_args(sinks: usize, poisson: &PoissonStructure, args: &[Poly]) -> Result<(), EvalError> {
    if args.len() != sinks {
        return Err(EvalError::ArgumentCount { expected: sinks, found: args.len() });
    }
    for (index, a) in args.iter().enumerate() {
        if a.dim() != poisson.dim() {
            return Err(EvalError::Dimension { index, expected: poisson.dim(), found: a.dim() });
        }
    }
    Ok(())
}

/// Reusable evaluation context for one `(P, args)` pair.
pub struct Evaluator<'a> {
    cache: ContentCache<'a>,
    args: &'a [Poly],
    arg_derivatives: HashMap<(usize, MultiIndex), Poly>,
}

impl<'a> Evaluator<'a> {
    pub fn new(poisson: &'a PoissonStructure, args: &'a [Poly]) -> Result<Self, EvalError> {
        for (index, a) in args.iter().enumerate() {
            if a.dim() != poisson.dim() {
                return Err(EvalError::Dimension { index, expected: poisson.dim(), found: a.dim() });
            }
        }
        Ok(Evaluator { cache: ContentCache::new(poisson), args, arg_derivatives: HashMap::new() })
    }

    pub fn graph(&mut self, graph: &Graph) -> Result<Poly, EvalError> {
        if graph.sink_count() != self.args.len() {
            return Err(EvalError::ArgumentCount { expected: graph.sink_count(), found: self.args.len() });
        }
        let n = self.cache.poisson.dim();
        let m = graph.sink_count();
        let args = self.args;
        let arg_derivatives = &mut self.arg_derivatives;
        let mut total = Poly::zero(n);
        for_each_assignment(graph, &mut self.cache, &mut |incoming, content| {
            let mut value = content;
            for s in 0..m {
                let d =
                    arg_derivatives.entry((s, incoming[s].clone())).or_insert_with(|| args[s].diff_multi(&incoming[s]));
                if d.is_zero() {
                    return;
                }
                value = &value * &*d;
            }
            total += &value;
        });
        Ok(total)
    }
}

pub fn evaluate_graph(graph: &Graph, poisson: &PoissonStructure, args: &[Poly]) -> Result<Poly, EvalError> {
    check_args(graph.sink_count(), poisson, args)?;
    Evaluator::new(poisson, args)?.graph(graph)
}

/// Coefficients of `ħ⁰..ħ^order`, each the coefficient-weighted sum over that grade.
///
/// Each grade is first collected into its [`PolyDiffOperator`], so the argument
/// derivatives are multiplied once per distinct multi-index tuple rather than
/// once per graph and index assignment.
pub fn evaluate_series(
    series: &GraphSeries,
    poisson: &PoissonStructure,
    args: &[Poly],
    order: usize,
) -> Result<Vec<Poly>, EvalError> {
    check_args(series.sink_count(), poisson, args)?;
    (0..=order)
        .map(|k| PolyDiffOperator::from_terms(series.grade(k), series.sink_count(), poisson).apply(args))
        .collect()
}

/// `Σ c^{L₁…L_m} ∂_{L₁} ⊗ ⋯ ⊗ ∂_{L_m}` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDiffOperator {
    dim: usize,
    sinks: usize,
    coeffs: BTreeMap<Vec<MultiIndex>, Poly>,
}

/// The three-argument case.
pub type TriDiffOperator = PolyDiffOperator;

impl PolyDiffOperator {
    pub fn zero(dim: usize, sinks: usize) -> Self {
        PolyDiffOperator { dim, sinks, coeffs: BTreeMap::new() }
    }

    /// Expands every graph with the concrete `P`, keeping sink derivatives symbolic.
    pub fn from_series(series: &GraphSeries, poisson: &PoissonStructure) -> Self {
        let terms: Vec<Term> = series.terms().cloned().collect();
        Self::from_terms(&terms, series.sink_count(), poisson)
    }

    fn from_terms(terms: &[Term], sinks: usize, poisson: &PoissonStructure) -> Self {
        terms
            .par_iter()
            .fold(
                || (Self::zero(poisson.dim(), sinks), ContentCache::new(poisson)),
                |(mut op, mut cache), t| {
                    for_each_assignment(&t.graph, &mut cache, &mut |incoming, content| {
                        op.add(incoming[..sinks].to_vec(), &content.scale(&t.coeff));
                    });
                    (op, cache)
                },
            )
            .map(|(op, _)| op)
            .reduce(|| Self::zero(poisson.dim(), sinks), Self::merged)
    }

    fn merged(mut self, other: Self) -> Self {
        for (k, v) in other.coeffs {
            self.add(k, &v);
        }
        self
    }

    fn add(&mut self, key: Vec<MultiIndex>, value: &Poly) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(key) {
            Entry::Vacant(e) => {
                if !value.is_zero() {
                    e.insert(value.clone());
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sink_count(&self) -> usize {
        self.sinks
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&[MultiIndex], &Poly)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, key: &[MultiIndex]) -> Poly {
        self.coeffs.get(key).cloned().unwrap_or_else(|| Poly::zero(self.dim))
    }

    /// `Σ c^{L…} ∂_{L₁}a₁ ⋯ ∂_{L_m}a_m`.
    pub fn apply(&self, args: &[Poly]) -> Result<Poly, EvalError> {
        if args.len() != self.sinks {
            return Err(EvalError::ArgumentCount { expected: self.sinks, found: args.len() });
        }
        for (index, a) in args.iter().enumerate() {
            if a.dim() != self.dim {
                return Err(EvalError::Dimension { index, expected: self.dim, found: a.dim() });
            }
        }
        let mut derivatives: HashMap<(usize, &MultiIndex), Poly> = HashMap::new();
        let mut total = Poly::zero(self.dim);
        for (key, c) in &self.coeffs {
            let mut v = c.clone();
            for (s, l) in key.iter().enumerate() {
                let d = derivatives.entry((s, l)).or_insert_with(|| args[s].diff_multi(l));
                v = &v * &*d;
                if v.is_zero() {
                    break;
                }
            }
            total += &v;
        }
        Ok(total)
    }
}

/// Tri-differential coefficients of a 3-sink series.
pub fn to_tridiff(series: &GraphSeries, poisson: &PoissonStructure) -> Result<TriDiffOperator, EvalError> {
    if series.sink_count() != 3 {
        return Err(EvalError::SinkCount { expected: 3, found: series.sink_count() });
    }
    Ok(PolyDiffOperator::from_series(series, poisson))
}

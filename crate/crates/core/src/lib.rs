//! Exact symbolic engine for the Kontsevich star-product through `ħ³`.
//!
//! Graphs ([`graph`]) are combined into formal series ([`series`]), composed by
//! Leibniz insertion, and reduced modulo the antisymmetry of `P`. The
//! associator of the star-product ([`star`]) is reduced order by order with
//! differential consequences of the Jacobi identity ([`jacobi`]). Any series
//! can be evaluated exactly for a concrete bivector and polynomial arguments
//! ([`eval`]). Gauge transformations live in [`gauge`].

pub mod eval;
pub mod gauge;
pub mod graph;
pub mod jacobi;
pub mod linalg;
pub mod poisson;
pub mod poly;
pub mod series;
pub mod star;

/// Arbitrary-precision rational number used for every coefficient.
pub type Rational = num_rational::BigRational;

pub use eval::{evaluate_graph, evaluate_series, to_tridiff, EvalError, Evaluator, PolyDiffOperator, TriDiffOperator};
pub use gauge::{gauge_invert, gauge_star, GaugeCoefficients, GaugeError, GaugeTransform};
pub use graph::{classify, generate_graphs, parse_encoding, Graph, GraphError, SignedGraph, StructureReport};
pub use jacobi::{
    i_consequence, jacobiator, s_consequence, solve_combination, verify_claim, ClaimReport, Combination,
    ConsequenceLabel, ConsequenceSum, Slot,
};
pub use poisson::{AffineMap, PoissonError, PoissonStructure};
pub use poly::{rat, MultiIndex, Poly, PolyError};
pub use series::{compose, GraphSeries, SeriesError, Term};
pub use star::{associator, star_oh3, star_oh3_with, EyeOrientation};

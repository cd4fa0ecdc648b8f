//! Gauge transformations `t = id + ħ(…) + ħ²(…) + ħ³(…)` built from
//! one-sink graphs, and the gauged product `t⁻¹(t(f) ⋆ t(g))`.
//!
//! One-sink graphs put the sink at 0 and internal vertices from 1:
//!
//! | constant | graph | encoding |
//! |---|---|---|
//! | `I_empty` | `∂_i∂_j P^{ij}` times the argument | `1 1 ; 1 1` |
//! | `I_loop` | `∂_i P^{ij} ∂_j` | `1 1 ; 1 0` |
//! | `I0` | eye on the sink, `a = (s, b)`, `b = (a, s)` | `1 2 ; 0 2 ; 1 0` |
//! | `I1` | closed triangle, sink untouched | `1 3 ; 3 2 ; 3 1 ; 1 2` |
//! | `I2` | `a = (s, b)`, `b = (c, a)`, `c = (a, b)` | `1 3 ; 0 2 ; 3 1 ; 1 2` |
//! | `I3` | `a, b = (s, t)`, `t = (a, b)` | `1 3 ; 0 3 ; 0 3 ; 1 2` |
//! | `I4` | `a = (t, s)`, `b = (a, s)`, `t = (a, b)` | `1 3 ; 3 0 ; 1 0 ; 1 2` |
//! | `I5` | eye plus `t = (a, b)` | `1 3 ; 0 2 ; 1 0 ; 1 2` |
//! | `I6` | eye `v, w` plus `x = (s, v)` | `1 3 ; 0 2 ; 1 0 ; 0 1` |
//! | `I7` | `p = (s, r)`, `l = (p, s)`, `r = (l, s)` | `1 3 ; 0 3 ; 1 0 ; 2 0` |
//!
//! `I_empty`, `I1`, `I3` and `I5` are graphs equal to their own negative and
//! contribute nothing.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::poly::rat;
use crate::series::{compose, parse_rational, GraphSeries, SeriesError, Term};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaugeError {
    #[error("gauge series must have one sink, found {0}")]
    SinkCount(usize),
    #[error("gauge series must start with the identity at grade 0")]
    NotUnipotent,
    #[error("coefficient {key}: {message}")]
    Coefficient { key: String, message: String },
    #[error("invalid gauge JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Encodings of the gauge graphs in the order `I_empty, I_loop, I0..I7`.
pub const GAUGE_GRAPHS: [&str; 10] = [
    "1 1 ; 1 1",
    "1 1 ; 1 0",
    "1 2 ; 0 2 ; 1 0",
    "1 3 ; 3 2 ; 3 1 ; 1 2",
    "1 3 ; 0 2 ; 3 1 ; 1 2",
    "1 3 ; 0 3 ; 0 3 ; 1 2",
    "1 3 ; 3 0 ; 1 0 ; 1 2",
    "1 3 ; 0 2 ; 1 0 ; 1 2",
    "1 3 ; 0 2 ; 1 0 ; 0 1",
    "1 3 ; 0 3 ; 1 0 ; 2 0",
];

/// Names of the free constants, matching [`GAUGE_GRAPHS`].
pub const GAUGE_KEYS: [&str; 10] = ["I_empty", "I_loop", "I0", "I1", "I2", "I3", "I4", "I5", "I6", "I7"];

/// The free constants of a gauge transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeCoefficients {
    pub values: [Rational; 10],
}

/// JSON form: every key optional, values as `"p/q"` strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeJson {
    #[serde(rename = "I_empty", default, skip_serializing_if = "Option::is_none")]
    pub i_empty: Option<String>,
    #[serde(rename = "I_loop", default, skip_serializing_if = "Option::is_none")]
    pub i_loop: Option<String>,
    #[serde(rename = "I0", default, skip_serializing_if = "Option::is_none")]
    pub i0: Option<String>,
    #[serde(rename = "I1", default, skip_serializing_if = "Option::is_none")]
    pub i1: Option<String>,
    #[serde(rename = "I2", default, skip_serializing_if = "Option::is_none")]
    pub i2: Option<String>,
    #[serde(rename = "I3", default, skip_serializing_if = "Option::is_none")]
    pub i3: Option<String>,
    #[serde(rename = "I4", default, skip_serializing_if = "Option::is_none")]
    pub i4: Option<String>,
    #[serde(rename = "I5", default, skip_serializing_if = "Option::is_none")]
    pub i5: Option<String>,
    #[serde(rename = "I6", default, skip_serializing_if = "Option::is_none")]
    pub i6: Option<String>,
    #[serde(rename = "I7", default, skip_serializing_if = "Option::is_none")]
    pub i7: Option<String>,
}

impl GaugeJson {
    fn fields(&self) -> [&Option<String>; 10] {
        [&self.i_empty, &self.i_loop, &self.i0, &self.i1, &self.i2, &self.i3, &self.i4, &self.i5, &self.i6, &self.i7]
    }
}

impl GaugeCoefficients {
    pub fn zero() -> Self {
        GaugeCoefficients { values: std::array::from_fn(|_| Rational::zero()) }
    }

    pub fn from_json(json: &GaugeJson) -> Result<Self, GaugeError> {
        let mut out = Self::zero();
        for (i, field) in json.fields().into_iter().enumerate() {
            if let Some(text) = field {
                out.values[i] = parse_rational(text.trim())
                    .map_err(|message| GaugeError::Coefficient { key: GAUGE_KEYS[i].to_string(), message })?;
            }
        }
        Ok(out)
    }

    pub fn parse_json(text: &str) -> Result<Self, GaugeError> {
        let json: GaugeJson = serde_json::from_str(text).map_err(|e| GaugeError::Json(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> GaugeJson {
        let s = |i: usize| (!self.values[i].is_zero()).then(|| self.values[i].to_string());
        GaugeJson {
            i_empty: s(0),
            i_loop: s(1),
            i0: s(2),
            i1: s(3),
            i2: s(4),
            i3: s(5),
            i4: s(6),
            i5: s(7),
            i6: s(8),
            i7: s(9),
        }
    }

    /// Each constant `p/q` with `p ∈ -3..=3`, `q ∈ 1..=4`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        GaugeCoefficients {
            values: std::array::from_fn(|_| {
                let p: i64 = rng.random_range(-3..=3);
                let q: i64 = rng.random_range(1..=4);
                Rational::new(BigInt::from(p), BigInt::from(q))
            }),
        }
    }
}

/// A one-sink graph series whose grade-0 part is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransform {
    series: GraphSeries,
}

impl GaugeTransform {
    pub fn identity() -> Self {
        GaugeTransform { series: identity_series() }
    }

    pub fn new(series: GraphSeries) -> Result<Self, GaugeError> {
        if series.sink_count() != 1 {
            return Err(GaugeError::SinkCount(series.sink_count()));
        }
        let grade0 = series.grade(0).to_vec();
        let reduced0 = GraphSeries::from_terms(1, grade0)?.reduce_skew();
        if reduced0 != identity_series() {
            return Err(GaugeError::NotUnipotent);
        }
        Ok(GaugeTransform { series })
    }

    /// `id + Σ I^α · ħ^{|α|} Γ_α`, with the graphs kept as listed (unreduced).
    pub fn from_coefficients(c: &GaugeCoefficients) -> Self {
        let mut series = identity_series();
        for (coeff, enc) in c.values.iter().zip(GAUGE_GRAPHS) {
            let graph: Graph = enc.parse().expect("gauge encodings are valid");
            series.push(Term::new(coeff.clone(), graph)).expect("one sink");
        }
        GaugeTransform { series }
    }

    /// `id + ħ²/12 · eye`.
    pub fn loop_removal() -> Self {
        let mut c = GaugeCoefficients::zero();
        c.values[2] = rat(1, 12);
        Self::from_coefficients(&c)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_coefficients(&GaugeCoefficients::random(rng))
    }

    pub fn series(&self) -> &GraphSeries {
        &self.series
    }

    /// `t − id`.
    fn increment(&self) -> GraphSeries {
        self.series.minus(&identity_series()).expect("one sink").reduce_skew()
    }
}

fn identity_series() -> GraphSeries {
    GraphSeries::from_terms(1, [Term::new(Rational::one(), Graph::empty(1))]).expect("one sink")
}

/// `t⁻¹ = Σ_n (−T)^n` with `T = t − id`, truncated at `ħ^order`.
pub fn gauge_invert(t: &GaugeTransform, order: usize) -> GaugeTransform {
    let inc = t.increment().truncated(order);
    let mut inverse = identity_series();
    let mut power = identity_series();
    for n in 1..=order {
        power = compose(&inc, &power, 0, order).expect("one sink").reduce_skew();
        if power.is_empty() {
            break;
        }
        let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
        inverse = inverse.plus(&power.scaled(&sign)).expect("one sink");
    }
    GaugeTransform { series: inverse.reduce_skew() }
}

/// `t₁ ∘ t₂` truncated at `ħ^order`.
pub fn gauge_compose(outer: &GaugeTransform, inner: &GaugeTransform, order: usize) -> GaugeTransform {
    let s = compose(&outer.series, &inner.series, 0, order).expect("one sink").reduce_skew();
    GaugeTransform { series: s }
}

/// `f ⋆′ g = t⁻¹(t(f) ⋆ t(g))`, reduced and truncated at the star's top grade.
pub fn gauge_star(star: &GraphSeries, t: &GaugeTransform) -> Result<GraphSeries, GaugeError> {
    if star.sink_count() != 2 {
        return Err(SeriesError::SinkMismatch { expected: 2, found: star.sink_count() }.into());
    }
    let order = star.max_grade().unwrap_or(0);
    let inner = compose(star, &t.series, 0, order)?;
    let inner = compose(&inner, &t.series, 1, order)?.reduce_skew();
    let inverse = gauge_invert(t, order);
    Ok(compose(&inverse.series, &inner, 0, order)?.reduce_skew())
}

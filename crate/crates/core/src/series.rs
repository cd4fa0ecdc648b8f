//! Formal series `Σ_k ħ^k Σ c·Γ` of graphs on a fixed number of sinks.
//!
//! The grade of a term is its number of internal vertices. A series built by
//! composition is "raw": one term per (outer term, inner term, Leibniz choice),
//! without merging. [`GraphSeries::reduce_skew`] brings it to normal form.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{parse_encoding, Graph, GraphError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("term has {found} sinks, series has {expected}")]
    SinkMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Encoding { line: usize, source: GraphError },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub graph: Graph,
}

impl Term {
    pub fn new(coeff: Rational, graph: Graph) -> Self {
        Term { coeff, graph }
    }

    pub fn grade(&self) -> usize {
        self.graph.internal_count()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.coeff, self.graph)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSeries {
    sinks: usize,
    grades: BTreeMap<usize, Vec<Term>>,
}

impl GraphSeries {
    pub fn new(sinks: usize) -> Self {
        GraphSeries { sinks, grades: BTreeMap::new() }
    }

    pub fn from_terms(sinks: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self, SeriesError> {
        let mut s = Self::new(sinks);
        for t in terms {
            s.push(t)?;
        }
        Ok(s)
    }

    /// Appends a term without merging; zero coefficients are dropped.
    pub fn push(&mut self, term: Term) -> Result<(), SeriesError> {
        if term.graph.sink_count() != self.sinks {
            return Err(SeriesError::SinkMismatch { expected: self.sinks, found: term.graph.sink_count() });
        }
        if !term.coeff.is_zero() {
            self.grades.entry(term.grade()).or_default().push(term);
        }
        Ok(())
    }

    pub fn sink_count(&self) -> usize {
        self.sinks
    }

    pub fn grade(&self, k: usize) -> &[Term] {
        self.grades.get(&k).map_or(&[], Vec::as_slice)
    }

    /// Non-empty grades in increasing order.
    pub fn grades(&self) -> impl Iterator<Item = (usize, &[Term])> {
        self.grades.iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.grades.values().flatten()
    }

    pub fn max_grade(&self) -> Option<usize> {
        self.grades().map(|(k, _)| k).last()
    }

    pub fn len(&self) -> usize {
        self.grades.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of terms at each grade `0..=max`.
    pub fn term_counts(&self, max: usize) -> Vec<usize> {
        (0..=max).map(|k| self.grade(k).len()).collect()
    }

    /// Drops every grade above `order`.
    pub fn truncated(&self, order: usize) -> GraphSeries {
        GraphSeries { sinks: self.sinks, grades: self.grades.range(..=order).map(|(k, v)| (*k, v.clone())).collect() }
    }

    /// Only grade `k`.
    pub fn grade_part(&self, k: usize) -> GraphSeries {
        GraphSeries { sinks: self.sinks, grades: self.grades.get(&k).map(|v| (k, v.clone())).into_iter().collect() }
    }

    pub fn filtered(&self, mut keep: impl FnMut(&Term) -> bool) -> GraphSeries {
        let mut out = Self::new(self.sinks);
        for t in self.terms() {
            if keep(t) {
                out.grades.entry(t.grade()).or_default().push(t.clone());
            }
        }
        out
    }

    /// Terms whose sinks receive exactly `orders[i]` edges each.
    pub fn restrict(&self, orders: &[usize]) -> GraphSeries {
        self.filtered(|t| t.graph.sink_in_degrees() == orders)
    }

    pub fn scaled(&self, c: &Rational) -> GraphSeries {
        let mut out = Self::new(self.sinks);
        if c.is_zero() {
            return out;
        }
        for t in self.terms() {
            out.grades.entry(t.grade()).or_default().push(Term::new(&t.coeff * c, t.graph.clone()));
        }
        out
    }

    /// Concatenation of terms, no merging.
    pub fn plus(&self, other: &GraphSeries) -> Result<GraphSeries, SeriesError> {
        self.combine(other, &Rational::one())
    }

    pub fn minus(&self, other: &GraphSeries) -> Result<GraphSeries, SeriesError> {
        self.combine(other, &-Rational::one())
    }

    fn combine(&self, other: &GraphSeries, factor: &Rational) -> Result<GraphSeries, SeriesError> {
        if other.sinks != self.sinks {
            return Err(SeriesError::SinkMismatch { expected: self.sinks, found: other.sinks });
        }
        let mut out = self.clone();
        for t in other.terms() {
            out.grades.entry(t.grade()).or_default().push(Term::new(&t.coeff * factor, t.graph.clone()));
        }
        Ok(out)
    }

    /// Canonicalizes every graph, merges like terms, and drops zeros and
    /// self-negative graphs. Terms are sorted by canonical encoding.
    pub fn reduce_skew(&self) -> GraphSeries {
        let mut out = Self::new(self.sinks);
        for (k, terms) in &self.grades {
            let mut acc: BTreeMap<Graph, Rational> = BTreeMap::new();
            for t in terms {
                let c = t.graph.canonical_form();
                if c.sign == 0 {
                    continue;
                }
                let entry = acc.entry(c.graph).or_insert_with(Rational::zero);
                if c.sign > 0 {
                    *entry += &t.coeff;
                } else {
                    *entry -= &t.coeff;
                }
            }
            let reduced: Vec<Term> =
                acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(g, c)| Term::new(c, g)).collect();
            if !reduced.is_empty() {
                out.grades.insert(*k, reduced);
            }
        }
        out
    }

    /// True when the series is already in reduced normal form.
    pub fn is_reduced(&self) -> bool {
        self.reduce_skew() == *self
    }

    /// `Σ coeff * encoding`, one term per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in self.terms() {
            s.push_str(&t.to_string());
            s.push('\n');
        }
        s
    }

    /// Reads the line format written by [`GraphSeries::to_text`]. Blank lines and
    /// lines starting with `#` are skipped. The sink count comes from `sinks`
    /// when given, otherwise from the first term (0 for an empty file).
    pub fn parse_text(text: &str, sinks: Option<usize>) -> Result<GraphSeries, SeriesError> {
        let mut out: Option<GraphSeries> = sinks.map(GraphSeries::new);
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (coeff, enc) = line.split_once('*').ok_or_else(|| SeriesError::Format {
                line: line_no,
                message: "expected 'coefficient * encoding'".into(),
            })?;
            let coeff =
                parse_rational(coeff.trim()).map_err(|message| SeriesError::Format { line: line_no, message })?;
            let graph =
                parse_encoding(enc.trim(), false).map_err(|source| SeriesError::Encoding { line: line_no, source })?;
            let series = out.get_or_insert_with(|| GraphSeries::new(graph.sink_count()));
            series
                .push(Term::new(coeff, graph))
                .map_err(|e| SeriesError::Format { line: line_no, message: e.to_string() })?;
        }
        Ok(out.unwrap_or_else(|| GraphSeries::new(0)))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            sinks: self.sinks,
            terms: self
                .terms()
                .map(|t| TermJson { grade: t.grade(), coeff: t.coeff.to_string(), graph: t.graph.encoding() })
                .collect(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Result<GraphSeries, SeriesError> {
        let mut out = GraphSeries::new(json.sinks);
        for (i, t) in json.terms.iter().enumerate() {
            let coeff = parse_rational(&t.coeff).map_err(|m| SeriesError::Json(format!("term {i}: {m}")))?;
            let graph = parse_encoding(&t.graph, false).map_err(|e| SeriesError::Json(format!("term {i}: {e}")))?;
            out.push(Term::new(coeff, graph))?;
        }
        Ok(out)
    }
}

impl fmt::Display for GraphSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, terms) in self.grades() {
            writeln!(f, "# grade {k}: {} terms", terms.len())?;
            for t in terms {
                writeln!(f, "{t}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub sinks: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub grade: usize,
    pub coeff: String,
    pub graph: String,
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let r: Rational = s.parse().map_err(|_| format!("invalid rational '{s}'"))?;
    Ok(r)
}

/// Inserts every term of `inner` into sink `sink` of every term of `outer`,
/// keeping grades up to `max_grade`. The result is raw.
pub fn compose(
    outer: &GraphSeries,
    inner: &GraphSeries,
    sink: usize,
    max_grade: usize,
) -> Result<GraphSeries, SeriesError> {
    if sink >= outer.sinks {
        return Err(GraphError::NoSuchSink { sink, sinks: outer.sinks }.into());
    }
    let mut out = GraphSeries::new(outer.sinks - 1 + inner.sinks);
    for (ko, outer_terms) in outer.grades() {
        for (ki, inner_terms) in inner.grades() {
            if ko + ki > max_grade {
                continue;
            }
            for a in outer_terms {
                for b in inner_terms {
                    let c = &a.coeff * &b.coeff;
                    for g in a.graph.insert(sink, &b.graph)? {
                        out.push(Term::new(c.clone(), g))?;
                    }
                }
            }
        }
    }
    Ok(out)
}

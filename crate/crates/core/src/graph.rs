//! Kontsevich graphs: `m` ordered sinks and `k` internal vertices, each internal
//! vertex carrying an ordered (Left, Right) pair of outgoing edges.
//!
//! Labels `0..m` are sinks and `m..m+k` are internal vertices. The text
//! encoding is `m k ; a0 b0 ; a1 b1 ; …` where `(a_i, b_i)` are the targets of
//! vertex `m + i`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("at byte {pos}: expected {expected} edge pairs, found {found}")]
    PairCount { pos: usize, expected: usize, found: usize },
    #[error("vertex {vertex}: target {target} out of range (graph has {vertices} vertices)")]
    TargetOutOfRange { vertex: Vertex, target: Vertex, vertices: usize },
    #[error("vertex {vertex}: tadpole edge not allowed in a strict graph")]
    Tadpole { vertex: Vertex },
    #[error("vertex {vertex}: both edges go to {target}, not allowed in a strict graph")]
    DoubleEdge { vertex: Vertex, target: Vertex },
    #[error("sink {sink} out of range for a graph with {sinks} sinks")]
    NoSuchSink { sink: Vertex, sinks: usize },
    #[error("{requested} exceeds the supported limit of {limit}")]
    TooLarge { requested: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Graph {
    sinks: usize,
    targets: Vec<[Vertex; 2]>,
}

/// A graph with a sign in `{-1, 0, +1}`; sign 0 marks a graph equal to its own negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedGraph {
    pub sign: i8,
    pub graph: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub has_tadpole: bool,
    pub has_double_edge: bool,
    /// Two internal vertices pointing at each other.
    pub has_eye: bool,
    /// Any directed cycle through internal vertices, including tadpoles and eyes.
    pub has_loop: bool,
    pub sink_in_degrees: Vec<usize>,
}

impl Graph {
    /// Builds a non-strict graph; only target ranges are checked.
    pub fn new(sinks: usize, targets: Vec<[Vertex; 2]>) -> Result<Self, GraphError> {
        let vertices = sinks + targets.len();
        for (i, pair) in targets.iter().enumerate() {
            for &t in pair {
                if t >= vertices {
                    return Err(GraphError::TargetOutOfRange { vertex: sinks + i, target: t, vertices });
                }
            }
        }
        Ok(Graph { sinks, targets })
    }

    /// Builds a graph and rejects tadpoles and double edges.
    pub fn new_strict(sinks: usize, targets: Vec<[Vertex; 2]>) -> Result<Self, GraphError> {
        let g = Self::new(sinks, targets)?;
        g.check_strict()?;
        Ok(g)
    }

    pub fn check_strict(&self) -> Result<(), GraphError> {
        for (v, [a, b]) in self.internal_pairs() {
            if a == v || b == v {
                return Err(GraphError::Tadpole { vertex: v });
            }
            if a == b {
                return Err(GraphError::DoubleEdge { vertex: v, target: a });
            }
        }
        Ok(())
    }

    /// The graph with no internal vertices on `m` sinks.
    pub fn empty(sinks: usize) -> Self {
        Graph { sinks, targets: Vec::new() }
    }

    pub fn sink_count(&self) -> usize {
        self.sinks
    }

    pub fn internal_count(&self) -> usize {
        self.targets.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.sinks + self.targets.len()
    }

    pub fn is_sink(&self, v: Vertex) -> bool {
        v < self.sinks
    }

    /// Target pairs indexed by internal position (`vertex - sinks`).
    pub fn targets(&self) -> &[[Vertex; 2]] {
        &self.targets
    }

    /// Targets of internal vertex `v` (absolute label).
    pub fn target(&self, v: Vertex) -> [Vertex; 2] {
        self.targets[v - self.sinks]
    }

    /// `(label, [left, right])` for each internal vertex.
    pub fn internal_pairs(&self) -> impl Iterator<Item = (Vertex, [Vertex; 2])> + '_ {
        self.targets.iter().enumerate().map(move |(i, &p)| (self.sinks + i, p))
    }

    pub fn is_strict(&self) -> bool {
        self.check_strict().is_ok()
    }

    pub fn has_tadpole(&self) -> bool {
        self.internal_pairs().any(|(v, [a, b])| a == v || b == v)
    }

    pub fn has_double_edge(&self) -> bool {
        self.targets.iter().any(|[a, b]| a == b)
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for [a, b] in &self.targets {
            deg[*a] += 1;
            deg[*b] += 1;
        }
        deg
    }

    /// Number of edges landing on each sink: the differential order in each argument.
    pub fn sink_in_degrees(&self) -> Vec<usize> {
        let mut deg = self.in_degrees();
        deg.truncate(self.sinks);
        deg
    }

    /// Same graph with the Left and Right edges of internal vertex `v` exchanged.
    pub fn swapped(&self, v: Vertex) -> Graph {
        let mut g = self.clone();
        g.targets[v - self.sinks].swap(0, 1);
        g
    }

    /// Renames internal vertex at position `i` to position `perm[i]`; sinks are fixed.
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.targets.len());
        let m = self.sinks;
        let map = |x: Vertex| if x < m { x } else { m + perm[x - m] };
        let mut targets = vec![[0, 0]; self.targets.len()];
        for (i, [a, b]) in self.targets.iter().enumerate() {
            targets[perm[i]] = [map(*a), map(*b)];
        }
        Graph { sinks: m, targets }
    }

    /// Normal form under internal relabelings and edge swaps, with the sign
    /// picked up along the way (`-1` per swap; the relabeling itself is even
    /// because each vertex's edge pair moves as a block).
    ///
    /// Each vertex's pair is sorted, which is the unique best choice for that
    /// slot, so minimizing over the `k!` relabelings finds the minimum over all
    /// `k!·2^k` images. Sign 0 when a vertex has both edges on one target or
    /// when the minimum is reached with both parities.
    pub fn canonical_form(&self) -> SignedGraph {
        let k = self.targets.len();
        let m = self.sinks;
        let mut best: Option<(Vec<[Vertex; 2]>, bool)> = None;
        let mut ambiguous = false;
        let mut candidate = vec![[0usize; 2]; k];
        let mut visit = |perm: &[usize]| {
            let map = |x: Vertex| if x < m { x } else { m + perm[x - m] };
            let mut odd = false;
            for (i, [a, b]) in self.targets.iter().enumerate() {
                let (x, y) = (map(*a), map(*b));
                if x > y {
                    odd = !odd;
                    candidate[perm[i]] = [y, x];
                } else {
                    candidate[perm[i]] = [x, y];
                }
            }
            match &mut best {
                None => best = Some((candidate.clone(), odd)),
                Some((enc, parity)) => match candidate.cmp(enc) {
                    std::cmp::Ordering::Less => {
                        enc.clone_from(&candidate);
                        *parity = odd;
                        ambiguous = false;
                    }
                    std::cmp::Ordering::Equal => {
                        if *parity != odd {
                            ambiguous = true;
                        }
                    }
                    std::cmp::Ordering::Greater => {}
                },
            }
        };
        for_each_permutation(k, &mut visit);
        let (targets, odd) = best.expect("at least one permutation");
        let sign = if ambiguous || self.has_double_edge() {
            0
        } else if odd {
            -1
        } else {
            1
        };
        SignedGraph { sign, graph: Graph { sinks: m, targets } }
    }

    pub fn structure(&self) -> StructureReport {
        classify(self)
    }

    /// Leibniz-rule insertion of `inner` into sink `sink` of `self`.
    ///
    /// In the result the sinks are: the outer sinks below `sink`, then the
    /// inner sinks, then the outer sinks above `sink`. Inner internal vertices
    /// come before outer ones. Each outer edge that landed on `sink` is
    /// redirected to every vertex of `inner` in turn, so the output has
    /// `(inner vertices)^(in-degree of sink)` graphs, ordered lexicographically
    /// by those choices.
    pub fn insert(&self, sink: Vertex, inner: &Graph) -> Result<Vec<Graph>, GraphError> {
        if sink >= self.sinks {
            return Err(GraphError::NoSuchSink { sink, sinks: self.sinks });
        }
        let mi = inner.sinks;
        let ki = inner.targets.len();
        let m = self.sinks - 1 + mi;
        let inner_map = |x: Vertex| if x < mi { sink + x } else { m + (x - mi) };
        let outer_map = |x: Vertex| {
            if x < sink {
                x
            } else if x < self.sinks {
                // x == sink handled by the caller
                x - 1 + mi
            } else {
                m + ki + (x - self.sinks)
            }
        };
        let mut base = Vec::with_capacity(ki + self.targets.len());
        for [a, b] in &inner.targets {
            base.push([inner_map(*a), inner_map(*b)]);
        }
        let mut slots = Vec::new();
        for (i, [a, b]) in self.targets.iter().enumerate() {
            let pair = [*a, *b];
            let mut mapped = [0; 2];
            for side in 0..2 {
                if pair[side] == sink {
                    slots.push((ki + i, side));
                } else {
                    mapped[side] = outer_map(pair[side]);
                }
            }
            base.push(mapped);
        }
        let choices: Vec<Vertex> = (0..inner.vertex_count()).map(inner_map).collect();
        if choices.is_empty() && !slots.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut odometer = vec![0usize; slots.len()];
        loop {
            let mut targets = base.clone();
            for (&(pos, side), &c) in slots.iter().zip(&odometer) {
                targets[pos][side] = choices[c];
            }
            out.push(Graph { sinks: m, targets });
            let mut i = odometer.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                odometer[i] += 1;
                if odometer[i] < choices.len() {
                    break;
                }
                odometer[i] = 0;
            }
        }
    }

    /// The encoding string `m k ; a b ; …`.
    pub fn encoding(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.sinks, self.targets.len())?;
        for [a, b] in &self.targets {
            write!(f, " ; {a} {b}")?;
        }
        Ok(())
    }
}

impl fmt::Display for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            1 => "+",
            -1 => "-",
            _ => "0",
        };
        write!(f, "{s} {}", self.graph)
    }
}

impl FromStr for Graph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_encoding(s, false)
    }
}

/// Parses `m k ; a0 b0 ; …`. With `strict`, tadpoles and double edges are errors.
pub fn parse_encoding(text: &str, strict: bool) -> Result<Graph, GraphError> {
    let mut segments = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == ';' {
            segments.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    segments.push((start, &text[start..]));

    let (head_pos, head) = segments[0];
    let header = parse_numbers(head, head_pos)?;
    if header.len() != 2 {
        return Err(GraphError::Syntax {
            pos: head_pos,
            message: format!("header needs 2 numbers (sinks, internal vertices), found {}", header.len()),
        });
    }
    let (m, k) = (header[0].1, header[1].1);
    let pairs = &segments[1..];
    if pairs.len() != k {
        let pos = pairs.get(k).map_or(text.len(), |(p, _)| *p);
        return Err(GraphError::PairCount { pos, expected: k, found: pairs.len() });
    }
    let mut targets = Vec::with_capacity(k);
    for &(pos, seg) in pairs {
        let nums = parse_numbers(seg, pos)?;
        if nums.len() != 2 {
            return Err(GraphError::Syntax {
                pos,
                message: format!("edge pair needs 2 targets, found {}", nums.len()),
            });
        }
        targets.push([nums[0].1, nums[1].1]);
    }
    let g = Graph::new(m, targets)?;
    if strict {
        g.check_strict()?;
    }
    Ok(g)
}

fn parse_numbers(seg: &str, offset: usize) -> Result<Vec<(usize, usize)>, GraphError> {
    let mut out = Vec::new();
    let bytes = seg.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = seg[s..i]
                .parse()
                .map_err(|_| GraphError::Syntax { pos: offset + s, message: "number too large".into() })?;
            out.push((offset + s, v));
        } else {
            return Err(GraphError::Syntax {
                pos: offset + i,
                message: format!("unexpected '{}'", seg[i..].chars().next().unwrap_or('?')),
            });
        }
    }
    Ok(out)
}

/// Structural features of a graph.
pub fn classify(g: &Graph) -> StructureReport {
    let has_tadpole = g.has_tadpole();
    let has_eye =
        g.internal_pairs().any(|(v, pair)| pair.iter().any(|&w| w != v && !g.is_sink(w) && g.target(w).contains(&v)));
    StructureReport {
        has_tadpole,
        has_double_edge: g.has_double_edge(),
        has_eye,
        has_loop: has_cycle(g),
        sink_in_degrees: g.sink_in_degrees(),
    }
}

fn has_cycle(g: &Graph) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let n = g.vertex_count();
    let mut state = vec![0u8; n];
    fn dfs(g: &Graph, v: Vertex, state: &mut [u8]) -> bool {
        state[v] = 1;
        if !g.is_sink(v) {
            for w in g.target(v) {
                if state[w] == 1 || (state[w] == 0 && dfs(g, w, state)) {
                    return true;
                }
            }
        }
        state[v] = 2;
        false
    }
    (g.sinks..n).any(|v| state[v] == 0 && dfs(g, v, &mut state))
}

pub const MAX_GENERATED_INTERNAL: usize = 4;
pub const MAX_GENERATED_SINKS: usize = 3;

/// All graphs with `k` internal vertices on `m` sinks, up to relabeling and
/// sign, as canonical representatives with sign +1. Graphs equal to their own
/// negative vanish and are left out. With `strict`, tadpoles and double edges
/// are skipped.
pub fn generate_graphs(k: usize, m: usize, strict: bool) -> Result<BTreeSet<SignedGraph>, GraphError> {
    if k > MAX_GENERATED_INTERNAL {
        return Err(GraphError::TooLarge { requested: k, limit: MAX_GENERATED_INTERNAL });
    }
    if m > MAX_GENERATED_SINKS {
        return Err(GraphError::TooLarge { requested: m, limit: MAX_GENERATED_SINKS });
    }
    let n = m + k;
    let mut pair_choices: Vec<Vec<[Vertex; 2]>> = Vec::with_capacity(k);
    for i in 0..k {
        let v = m + i;
        let mut options = Vec::new();
        for a in 0..n {
            for b in a..n {
                if strict && (a == b || a == v || b == v) {
                    continue;
                }
                options.push([a, b]);
            }
        }
        pair_choices.push(options);
    }
    let mut out = BTreeSet::new();
    if pair_choices.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut odometer = vec![0usize; k];
    loop {
        let targets = odometer.iter().enumerate().map(|(i, &c)| pair_choices[i][c]).collect();
        let g = Graph { sinks: m, targets };
        let c = g.canonical_form();
        if c.sign != 0 {
            out.insert(SignedGraph { sign: 1, graph: c.graph });
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            odometer[i] += 1;
            if odometer[i] < pair_choices[i].len() {
                break;
            }
            odometer[i] = 0;
        }
    }
}

const MAX_CACHED_PERM: usize = 7;

fn permutations(k: usize) -> &'static [Vec<usize>] {
    static CACHE: [OnceLock<Vec<Vec<usize>>>; MAX_CACHED_PERM + 1] = [const { OnceLock::new() }; MAX_CACHED_PERM + 1];
    CACHE[k].get_or_init(|| {
        let mut out = Vec::new();
        let mut items: Vec<usize> = (0..k).collect();
        heap_permutations(&mut items, k, &mut |p| out.push(p.to_vec()));
        out
    })
}

fn for_each_permutation(k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= MAX_CACHED_PERM {
        for p in permutations(k) {
            visit(p);
        }
    } else {
        let mut items: Vec<usize> = (0..k).collect();
        heap_permutations(&mut items, k, visit);
    }
}

fn heap_permutations(items: &mut [usize], n: usize, visit: &mut dyn FnMut(&[usize])) {
    if n <= 1 {
        visit(items);
        return;
    }
    for i in 0..n - 1 {
        heap_permutations(items, n - 1, visit);
        if n % 2 == 0 {
            items.swap(i, n - 1);
        } else {
            items.swap(0, n - 1);
        }
    }
    heap_permutations(items, n - 1, visit);
}

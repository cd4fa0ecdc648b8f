//! The star-product up to `ħ³` and its associator.
//!
//! Sinks are `f = 0`, `g = 1`; internal vertices are numbered from 2. The eye
//! graph at `ħ²` has vertices `A = 2`, `B = 3` with `A = (f, B)` and
//! `B = (A, g)` ([`EyeOrientation::Drawn`]).
//!
//! The orientation is fixed by [`calibrate_eye`]. The reduced `ħ²` associator
//! equals `2/3` of the Jacobiator for either orientation, because the eye is a
//! biderivation and biderivations drop out of the associator at that order.
//! The sign of the eye first matters at `ħ³`, where only the drawn
//! orientation lets the Jacobi identities absorb the associator.

use crate::graph::Graph;
use crate::jacobi::{jacobiator, verify_claim};
use crate::poly::rat;
use crate::series::{compose, GraphSeries, SeriesError, Term};

/// Left/right convention for the `ħ²` eye graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EyeOrientation {
    /// `A = (f, B)`, `B = (A, g)`.
    Drawn,
    /// `A = (f, B)`, `B = (g, A)`: one edge swap away, so the eye changes sign.
    Flipped,
}

impl EyeOrientation {
    pub const ALL: [EyeOrientation; 2] = [EyeOrientation::Drawn, EyeOrientation::Flipped];

    fn targets(self) -> Vec<[usize; 2]> {
        match self {
            EyeOrientation::Drawn => vec![[0, 3], [2, 1]],
            EyeOrientation::Flipped => vec![[0, 3], [1, 2]],
        }
    }
}

/// `(numerator, denominator, targets of vertices 2, 3, 4)` for the `ħ³` part.
const GRADE_THREE: [(i64, i64, [[usize; 2]; 3]); 13] = [
    (1, 6, [[0, 1], [0, 1], [0, 1]]),
    (1, 6, [[0, 3], [2, 1], [2, 3]]),
    (1, 6, [[0, 3], [2, 1], [0, 1]]),
    (1, 6, [[0, 3], [0, 1], [2, 3]]),
    (1, 6, [[0, 1], [2, 1], [2, 3]]),
    (1, 6, [[0, 1], [0, 2], [0, 2]]),
    (1, 6, [[0, 1], [2, 1], [2, 1]]),
    (1, 3, [[0, 1], [0, 2], [0, 1]]),
    (1, 3, [[0, 1], [2, 1], [0, 1]]),
    (1, 6, [[0, 3], [2, 1], [0, 3]]),
    (1, 6, [[0, 3], [2, 1], [2, 1]]),
    (1, 6, [[0, 1], [2, 1], [0, 3]]),
    (1, 6, [[0, 1], [0, 2], [3, 1]]),
];

/// The star-product series through `ħ³` with the given eye convention, as
/// transcribed (not reduced). Grade sizes are 1, 1, 4, 13.
pub fn star_oh3_with(eye: EyeOrientation) -> GraphSeries {
    let graph = |targets: Vec<[usize; 2]>| Graph::new_strict(2, targets).expect("star graphs are strict");
    let mut terms = vec![
        Term::new(rat(1, 1), Graph::empty(2)),
        Term::new(rat(1, 1), graph(vec![[0, 1]])),
        Term::new(rat(1, 2), graph(vec![[0, 1], [0, 1]])),
        Term::new(rat(1, 3), graph(vec![[0, 1], [0, 2]])),
        Term::new(rat(1, 3), graph(vec![[0, 1], [2, 1]])),
        Term::new(rat(1, 6), graph(eye.targets())),
    ];
    for (p, q, t) in GRADE_THREE {
        terms.push(Term::new(rat(p, q), graph(t.to_vec())));
    }
    GraphSeries::from_terms(2, terms).expect("two sinks throughout")
}

/// The star-product through `ħ³` in reduced canonical form.
pub fn star_oh3() -> GraphSeries {
    star_oh3_with(EyeOrientation::Drawn).reduce_skew()
}

/// `(star ∘₁ star) − (star ∘₂ star)` truncated at the star's top grade, raw.
///
/// Counting rule: one term for each (outer term, inner term, Leibniz choice),
/// nothing merged. The transcribed series gives 2, 6, 38, 218 terms at grades
/// 0 to 3.
pub fn associator(star: &GraphSeries) -> Result<GraphSeries, SeriesError> {
    if star.sink_count() != 2 {
        return Err(SeriesError::SinkMismatch { expected: 2, found: star.sink_count() });
    }
    let top = star.max_grade().unwrap_or(0);
    let left = compose(star, star, 0, top)?;
    let right = compose(star, star, 1, top)?;
    left.minus(&right)
}

/// How one eye orientation fares against the two associator gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EyeCalibration {
    pub eye: EyeOrientation,
    /// Reduced `ħ²` associator equals `2/3` of the Jacobiator.
    pub grade_two: bool,
    /// Reduced `ħ³` associator is absorbed by the Jacobi consequences.
    pub grade_three: bool,
}

impl EyeCalibration {
    pub fn passed(&self) -> bool {
        self.grade_two && self.grade_three
    }
}

/// Runs both gates for every orientation.
pub fn calibrate_eye() -> Vec<EyeCalibration> {
    let target = jacobiator().series.scaled(&rat(2, 3)).reduce_skew();
    EyeOrientation::ALL
        .into_iter()
        .map(|eye| {
            let reduced = associator(&star_oh3_with(eye)).expect("two sinks").reduce_skew();
            EyeCalibration {
                eye,
                grade_two: reduced.grade_part(2) == target,
                grade_three: verify_claim(&reduced.grade_part(3)).passed(),
            }
        })
        .collect()
}

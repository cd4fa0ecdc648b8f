//! Seeded fixtures shared by the benchmarks.

use kontsevich_core::{associator, star_oh3, Graph, GraphSeries, PoissonStructure, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Three seeded arguments of degree at most 3 with coefficients in −3..3.
pub fn arguments(dim: usize, seed: u64) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..3).map(|_| Poly::random(&mut rng, dim, 3, 3)).collect()
}

/// The raw associator of the star-product through `ħ³`.
pub fn raw_associator() -> GraphSeries {
    associator(&star_oh3()).expect("two sinks")
}

/// Every raw `ħ³` associator graph, for canonicalization timing.
pub fn grade_three_graphs() -> Vec<Graph> {
    raw_associator().grade(3).iter().map(|t| t.graph.clone()).collect()
}

/// so(3) and one seeded planar structure.
pub fn structures() -> Vec<(&'static str, PoissonStructure)> {
    vec![
        ("so3", PoissonStructure::so3()),
        ("planar", PoissonStructure::random_planar(&mut ChaCha8Rng::seed_from_u64(1000))),
    ]
}

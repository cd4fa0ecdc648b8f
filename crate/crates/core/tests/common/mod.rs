//! Independent oracles shared by the integration tests. Nothing here calls the
//! evaluator or the canonicalizer it is meant to check.

#![allow(dead_code)]

use kontsevich_core::{Graph, PoissonStructure, Poly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Literal index sum: every edge gets an index in `0..n`, each vertex content
/// is differentiated once per incoming edge, and the products are added.
pub fn brute_force_eval(g: &Graph, p: &PoissonStructure, args: &[Poly]) -> Poly {
    let n = p.dim();
    let m = g.sink_count();
    let k = g.internal_count();
    let edges: Vec<(usize, usize)> =
        (0..k).flat_map(|i| g.targets()[i].iter().map(move |&t| (i, t)).collect::<Vec<_>>()).collect();
    let mut total = Poly::zero(n);
    let mut idx = vec![0usize; edges.len()];
    loop {
        let mut contents: Vec<Poly> = args.to_vec();
        for i in 0..k {
            contents.push(p.entry(idx[2 * i], idx[2 * i + 1]).clone());
        }
        for (e, &(_, t)) in edges.iter().enumerate() {
            contents[t] = contents[t].diff(idx[e]);
        }
        let mut product = Poly::one(n);
        for c in &contents[..m + k] {
            product = &product * c;
        }
        total += &product;
        let mut e = 0;
        loop {
            if e == idx.len() {
                return total;
            }
            idx[e] += 1;
            if idx[e] < n {
                break;
            }
            idx[e] = 0;
            e += 1;
        }
    }
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// All `k!·2^k` images of `g` with the parity of the swaps used.
pub fn symmetry_images(g: &Graph) -> Vec<(Graph, bool)> {
    let m = g.sink_count();
    let k = g.internal_count();
    let mut out = Vec::new();
    for perm in permutations(k) {
        let map = |x: usize| if x < m { x } else { m + perm[x - m] };
        for mask in 0u32..(1 << k) {
            let mut targets = vec![[0usize; 2]; k];
            for (i, [a, b]) in g.targets().iter().enumerate() {
                let pair = [map(*a), map(*b)];
                targets[perm[i]] = if mask >> i & 1 == 1 { [pair[1], pair[0]] } else { pair };
            }
            out.push((Graph::new(m, targets).unwrap(), mask.count_ones() % 2 == 1));
        }
    }
    out
}

/// Minimum symmetry image and its sign, 0 when both parities reach it.
pub fn brute_force_canonical(g: &Graph) -> (i8, Graph) {
    let images = symmetry_images(g);
    let min = images.iter().map(|(h, _)| h).min().unwrap().clone();
    let parities: Vec<bool> = images.iter().filter(|(h, _)| *h == min).map(|&(_, odd)| odd).collect();
    let sign = if parities.contains(&true) && parities.contains(&false) {
        0
    } else if parities[0] {
        -1
    } else {
        1
    };
    (sign, min)
}

/// Antisymmetric 3-dimensional `P` with random entries; usually not Poisson.
pub fn random_bivector(seed: u64) -> PoissonStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| (i, j, Poly::random(&mut rng, 3, 2, 2)));
    PoissonStructure::from_upper(3, upper).unwrap()
}

/// so(3), the witness, two planar structures, and two random bivectors.
pub fn structure(choice: u8, seed: u64) -> PoissonStructure {
    match choice % 6 {
        0 => PoissonStructure::so3(),
        1 => PoissonStructure::non_poisson_witness(),
        2 | 3 => PoissonStructure::random_planar(&mut ChaCha8Rng::seed_from_u64(seed)),
        _ => random_bivector(seed),
    }
}

pub fn random_polys(dim: usize, count: usize, seed: u64, max_degree: u32) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Poly::random(&mut rng, dim, max_degree, 3)).collect()
}

/// Non-strict graphs with up to `max_k` internal vertices on `m` sinks.
pub fn arb_graph(m: usize, max_k: usize) -> impl Strategy<Value = Graph> {
    (0..=max_k).prop_flat_map(move |k| {
        let n = m + k;
        prop::collection::vec([0..n, 0..n], k).prop_map(move |t| Graph::new(m, t).unwrap())
    })
}

pub fn random_graph(rng: &mut impl Rng, m: usize, k: usize) -> Graph {
    let n = m + k;
    Graph::new(m, (0..k).map(|_| [rng.random_range(0..n), rng.random_range(0..n)]).collect()).unwrap()
}

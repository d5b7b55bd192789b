//! Seeded random generators for complexes, posets, and order-preserving
//! maps, shared by the property suites.

use super::complex::SimplicialComplex;
use super::poset::FinitePoset;
use rand::Rng;

/// Random complex on at most `max_vertices` vertices (possibly with unused
/// vertices dropped from the space).
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize) -> SimplicialComplex {
    let v = rng.gen_range(1..=max_vertices.max(1));
    let labels: Vec<String> = (0..v).map(|i| format!("r{i}")).collect();
    let facet_count = rng.gen_range(1..=2 * v);
    let mut facets = Vec::new();
    for _ in 0..facet_count {
        let size = rng.gen_range(1..=v.min(4));
        let mut f: Vec<usize> = (0..v).collect();
        for i in (1..f.len()).rev() {
            let j = rng.gen_range(0..=i);
            f.swap(i, j);
        }
        f.truncate(size);
        facets.push(f);
    }
    SimplicialComplex::from_facets(labels, facets).expect("facets are in range")
}

/// Random poset on at most `max_elements` elements: relations only point
/// from smaller to larger index, so antisymmetry holds by construction.
pub fn random_poset<R: Rng>(rng: &mut R, max_elements: usize) -> FinitePoset {
    let n = rng.gen_range(1..=max_elements.max(1));
    let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.35) {
                relations.push((i, j));
            }
        }
    }
    FinitePoset::new(labels, &relations).expect("index-increasing relations form a poset")
}

/// Random order-preserving assignment `X -> Y`, built along a linear
/// extension of `X`. Falls back to a constant map when the greedy choice
/// corners itself.
pub fn random_monotone_map<R: Rng>(
    rng: &mut R,
    source: &FinitePoset,
    target: &FinitePoset,
) -> Vec<usize> {
    let n = source.len();
    let m = target.len();
    assert!(m > 0, "target must be nonempty");
    'attempt: for _ in 0..32 {
        // linear extension by height
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| source.height(x));
        let mut assignment = vec![usize::MAX; n];
        for &x in &order {
            let candidates: Vec<usize> = (0..m)
                .filter(|&y| {
                    (0..n).all(|x2| {
                        assignment[x2] == usize::MAX
                            || !source.lt(x2, x)
                            || target.leq(assignment[x2], y)
                    })
                })
                .collect();
            if candidates.is_empty() {
                continue 'attempt;
            }
            assignment[x] = candidates[rng.gen_range(0..candidates.len())];
        }
        return assignment;
    }
    // constant maps are always order preserving
    let y = rng.gen_range(0..m);
    vec![y; n]
}

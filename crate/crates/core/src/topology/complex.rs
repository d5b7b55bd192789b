//! Finite abstract simplicial complexes over a totally ordered vertex set.
//!
//! Vertices are indexed `0..n` with the index order as the global
//! orientation order; labels are kept for I/O and for tagging joins.
//! Simplices are stored as sorted index vectors, and the family is closed
//! downward by construction.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub type Simplex = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    /// Empty complex on a fixed (possibly empty) vertex pool. Vertices not
    /// contained in any simplex are not part of the space.
    pub fn empty() -> SimplicialComplex {
        SimplicialComplex {
            labels: Vec::new(),
            simplices: BTreeSet::new(),
        }
    }

    /// Build from maximal (or any generating) simplices; the downward
    /// closure is computed. Facet entries index into `labels`.
    pub fn from_facets(labels: Vec<String>, facets: Vec<Vec<usize>>) -> Result<SimplicialComplex> {
        let n = labels.len();
        let mut simplices = BTreeSet::new();
        for facet in facets {
            let mut f: Vec<usize> = facet;
            for &v in &f {
                if v >= n {
                    return Err(Error::InvalidParameters(format!(
                        "facet vertex {v} out of range 0..{n}"
                    )));
                }
            }
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            // all nonempty subsets
            let k = f.len();
            for mask in 1u64..(1 << k) {
                let sub: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| f[i]).collect();
                simplices.insert(sub);
            }
        }
        Ok(SimplicialComplex { labels, simplices })
    }

    pub fn from_facet_labels(facets: Vec<Vec<&str>>) -> Result<SimplicialComplex> {
        let mut labels: Vec<String> = facets
            .iter()
            .flatten()
            .map(|s| s.to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        labels.sort();
        let index = |s: &str| labels.iter().position(|l| l == s).unwrap();
        let facet_ids = facets
            .iter()
            .map(|f| f.iter().map(|s| index(s)).collect())
            .collect();
        SimplicialComplex::from_facets(labels, facet_ids)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    pub fn is_empty_space(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Vertex indices that actually occur in the complex.
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        for s in &self.simplices {
            seen.extend(s.iter().copied());
        }
        seen.into_iter().collect()
    }

    /// `dim(K)`; the empty complex has dimension -1.
    pub fn dim(&self) -> isize {
        self.simplices
            .iter()
            .map(|s| s.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    /// Simplices of one dimension in canonical (lexicographic) order.
    pub fn simplices_of_dim(&self, k: isize) -> Vec<Simplex> {
        if k < 0 {
            return Vec::new();
        }
        self.simplices
            .iter()
            .filter(|s| s.len() as isize == k + 1)
            .cloned()
            .collect()
    }

    /// The `k`-skeleton.
    pub fn skeleton(&self, k: isize) -> SimplicialComplex {
        SimplicialComplex {
            labels: self.labels.clone(),
            simplices: self
                .simplices
                .iter()
                .filter(|s| s.len() as isize <= k + 1)
                .cloned()
                .collect(),
        }
    }

    /// `lk(σ, K)`: all simplices disjoint from `σ` whose union with `σ` is a
    /// simplex. The result keeps this complex's vertex pool and order.
    pub fn link(&self, s: &[usize]) -> Result<SimplicialComplex> {
        let mut key = s.to_vec();
        key.sort_unstable();
        if !self.contains(&key) {
            return Err(Error::ElementNotFound(format!("simplex {key:?}")));
        }
        let mut simplices = BTreeSet::new();
        for t in &self.simplices {
            if t.iter().any(|v| key.contains(v)) {
                continue;
            }
            let mut union: Vec<usize> = key.iter().chain(t.iter()).copied().collect();
            union.sort_unstable();
            if self.contains(&union) {
                simplices.insert(t.clone());
            }
        }
        Ok(SimplicialComplex {
            labels: self.labels.clone(),
            simplices,
        })
    }

    /// Restrict to the simplices entirely inside `keep` (an induced
    /// subcomplex on a vertex subset).
    pub fn full_subcomplex(&self, keep: &BTreeSet<usize>) -> SimplicialComplex {
        SimplicialComplex {
            labels: self.labels.clone(),
            simplices: self
                .simplices
                .iter()
                .filter(|s| s.iter().all(|v| keep.contains(v)))
                .cloned()
                .collect(),
        }
    }

    /// Keep only the given simplices (which must already be downward closed).
    pub fn from_simplex_family(
        labels: Vec<String>,
        simplices: BTreeSet<Simplex>,
    ) -> SimplicialComplex {
        SimplicialComplex { labels, simplices }
    }
}

/// Join of complexes: tagged disjoint union of vertices (all of `k1` before
/// all of `k2` in the global order), simplices `σ ∪ τ` with `σ ∈ K_1` or
/// empty and `τ ∈ K_2` or empty, not both empty.
pub fn complex_join(k1: &SimplicialComplex, k2: &SimplicialComplex) -> SimplicialComplex {
    let off = k1.labels.len();
    let mut labels: Vec<String> = k1.labels.iter().map(|l| format!("1:{l}")).collect();
    labels.extend(k2.labels.iter().map(|l| format!("2:{l}")));

    let mut simplices: BTreeSet<Simplex> = BTreeSet::new();
    let left: Vec<Simplex> = k1.simplices.iter().cloned().collect();
    let right: Vec<Simplex> = k2
        .simplices
        .iter()
        .map(|s| s.iter().map(|v| v + off).collect())
        .collect();
    for s in &left {
        simplices.insert(s.clone());
    }
    for t in &right {
        simplices.insert(t.clone());
    }
    for s in &left {
        for t in &right {
            let mut u = s.clone();
            u.extend(t.iter().copied());
            simplices.insert(u);
        }
    }
    SimplicialComplex { labels, simplices }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

impl SimplicialComplex {
    pub fn to_json(&self) -> ComplexJson {
        // facets = maximal simplices
        let facets: Vec<Vec<String>> = self
            .simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .map(|s| s.iter().map(|&v| self.labels[v].clone()).collect())
            .collect();
        ComplexJson {
            vertices: self.labels.clone(),
            facets,
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<SimplicialComplex> {
        let index = |s: &str| -> Result<usize> {
            j.vertices
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::ElementNotFound(format!("vertex `{s}`")))
        };
        let facets = j
            .facets
            .iter()
            .map(|f| f.iter().map(|s| index(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SimplicialComplex::from_facets(j.vertices.clone(), facets)
    }
}

// ---------------------------------------------------------------------------
// Stock complexes used all over the test suites
// ---------------------------------------------------------------------------

/// Boundary of the `d`-simplex on `d+1` vertices (a combinatorial `(d-1)`-sphere).
pub fn boundary_of_simplex(d: usize) -> SimplicialComplex {
    let labels: Vec<String> = (0..=d).map(|i| format!("p{i}")).collect();
    let all: Vec<usize> = (0..=d).collect();
    let facets: Vec<Vec<usize>> = (0..=d)
        .map(|skip| all.iter().copied().filter(|&v| v != skip).collect())
        .collect();
    SimplicialComplex::from_facets(labels, facets).expect("valid facets")
}

/// The full `d`-simplex.
pub fn full_simplex(d: usize) -> SimplicialComplex {
    let labels: Vec<String> = (0..=d).map(|i| format!("p{i}")).collect();
    let facets = vec![(0..=d).collect()];
    SimplicialComplex::from_facets(labels, facets).expect("valid facets")
}

/// `k` isolated points.
pub fn discrete_points(k: usize) -> SimplicialComplex {
    let labels: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let facets = (0..k).map(|i| vec![i]).collect();
    SimplicialComplex::from_facets(labels, facets).expect("valid facets")
}

/// Cycle with `k >= 3` vertices.
pub fn cycle_complex(k: usize) -> SimplicialComplex {
    let labels: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let facets = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    SimplicialComplex::from_facets(labels, facets).expect("valid facets")
}

/// The octahedron boundary: join of three pairs of points.
pub fn octahedron() -> SimplicialComplex {
    let s0 = discrete_points(2);
    complex_join(&complex_join(&s0, &s0), &s0)
}

/// The 6-vertex real projective plane.
pub fn projective_plane_rp2() -> SimplicialComplex {
    let labels: Vec<String> = (1..=6).map(|i| format!("p{i}")).collect();
    let faces = [
        [1, 2, 4],
        [1, 2, 5],
        [1, 3, 4],
        [1, 3, 6],
        [1, 5, 6],
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 6],
        [3, 4, 5],
        [4, 5, 6],
    ];
    let facets = faces
        .iter()
        .map(|f| f.iter().map(|v| v - 1).collect())
        .collect();
    SimplicialComplex::from_facets(labels, facets).expect("valid facets")
}

/// The 7-vertex torus (faces `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7).
pub fn torus_7() -> SimplicialComplex {
    let labels: Vec<String> = (0..7).map(|i| format!("p{i}")).collect();
    let mut facets = Vec::new();
    for i in 0..7usize {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets(labels, facets).expect("valid facets")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_dim() {
        let k = SimplicialComplex::from_facet_labels(vec![vec!["a", "b", "c"]]).unwrap();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.simplex_count(), 7); // 3 + 3 + 1
        assert!(k.contains(&[0, 1]));
    }

    #[test]
    fn boundary_counts() {
        let k = boundary_of_simplex(3);
        assert_eq!(k.dim(), 2);
        assert_eq!(k.simplices_of_dim(2).len(), 4);
        assert_eq!(k.simplices_of_dim(1).len(), 6);
        assert_eq!(k.simplices_of_dim(0).len(), 4);
    }

    #[test]
    fn link_examples() {
        // lk(vertex, ∂Δ²) is two points
        let k = boundary_of_simplex(2);
        let lk = k.link(&[0]).unwrap();
        assert_eq!(lk.dim(), 0);
        assert_eq!(lk.simplices_of_dim(0).len(), 2);
        // lk(edge, ∂Δ³) is two points
        let k = boundary_of_simplex(3);
        let lk = k.link(&[0, 1]).unwrap();
        assert_eq!(lk.dim(), 0);
        assert_eq!(lk.simplices_of_dim(0).len(), 2);
        // missing simplex errors
        assert!(k.link(&[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn join_of_point_pairs_is_square() {
        let s0 = discrete_points(2);
        let square = complex_join(&s0, &s0);
        assert_eq!(square.dim(), 1);
        assert_eq!(square.simplices_of_dim(1).len(), 4);
        assert_eq!(square.simplices_of_dim(0).len(), 4);
        // join with the empty complex changes nothing but the labels
        let j = complex_join(&s0, &SimplicialComplex::empty());
        assert_eq!(j.simplex_count(), s0.simplex_count());
        assert_eq!(j.dim(), 0);
    }

    #[test]
    fn octahedron_counts() {
        let o = octahedron();
        assert_eq!(o.dim(), 2);
        assert_eq!(o.simplices_of_dim(0).len(), 6);
        assert_eq!(o.simplices_of_dim(1).len(), 12);
        assert_eq!(o.simplices_of_dim(2).len(), 8);
    }

    #[test]
    fn surfaces_are_closed() {
        for k in [projective_plane_rp2(), torus_7()] {
            for edge in k.simplices_of_dim(1) {
                let cofaces = k
                    .simplices_of_dim(2)
                    .into_iter()
                    .filter(|f| edge.iter().all(|v| f.contains(v)))
                    .count();
                assert_eq!(cofaces, 2, "edge {edge:?} not in exactly two faces");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let k = boundary_of_simplex(2);
        let j = k.to_json();
        assert_eq!(j.facets.len(), 3);
        let back = SimplicialComplex::from_json(&j).unwrap();
        assert_eq!(k, back);
    }
}

//! Bounded truncations of the partial-basis complex, free-factor handles
//! with extension certificates, and the desk-scale sphericity experiments.
//!
//! Truncation is by word length of the vertices, never by simplex count, so
//! the truncated complex is invariant under letter permutations and
//! monotone in the length bound. Every simplex test is memoized by its
//! canonical sorted-word key and shared between the full build and links.

use crate::autos::Automorphism;
use crate::error::{Error, Result};
use crate::freegroup::{words_up_to_length, ReducedWord};
use crate::topology::{homology_of_complex, HomologyResult, SimplicialComplex};
use crate::whitehead::{extend_to_basis, is_partial_basis};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// Build limits: the default envelope keeps full builds to desk scale.
/// Out-of-envelope parameters are an error unless explicitly overridden.
#[derive(Clone, Copy, Debug, Default)]
pub struct PbBudget {
    pub allow_large: bool,
}

fn check_budget(rank: usize, length_bound: usize, budget: PbBudget) -> Result<()> {
    if budget.allow_large {
        return Ok(());
    }
    let ok = match rank {
        0 => false,
        1..=3 => length_bound <= 4,
        4 => length_bound <= 2,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::BudgetExceeded {
            what: format!("truncated build at rank {rank}, length bound {length_bound}"),
            cap: 4,
        })
    }
}

/// Shared memo table for partial-basis tests, keyed by the canonical sorted
/// word tuple.
#[derive(Default)]
pub struct PbTester {
    memo: HashMap<Vec<ReducedWord>, bool>,
}

impl PbTester {
    pub fn new() -> PbTester {
        PbTester::default()
    }

    pub fn is_partial_basis(&mut self, words: &[ReducedWord], rank: usize) -> Result<bool> {
        let mut key = words.to_vec();
        key.sort();
        key.dedup();
        if key.len() != words.len() {
            return Ok(false); // repeated words never form a simplex
        }
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let verdict = is_partial_basis(&key, rank)?;
        self.memo.insert(key, verdict);
        Ok(verdict)
    }
}

/// All primitive elements (singleton partial bases) of length at most
/// `length_bound`, in the canonical word order used for vertex numbering.
pub fn enumerate_primitives(rank: usize, length_bound: usize) -> Result<Vec<ReducedWord>> {
    enumerate_primitives_with(rank, length_bound, &mut PbTester::new())
}

pub fn enumerate_primitives_with(
    rank: usize,
    length_bound: usize,
    tester: &mut PbTester,
) -> Result<Vec<ReducedWord>> {
    if length_bound == 0 {
        return Err(Error::InvalidParameters("length bound must be >= 1".into()));
    }
    let mut out = Vec::new();
    for w in words_up_to_length(rank, length_bound) {
        if tester.is_partial_basis(std::slice::from_ref(&w), rank)? {
            out.push(w);
        }
    }
    Ok(out)
}

/// A bounded truncation of the partial-basis complex: vertices are the
/// primitives of length at most `length_bound`, simplices the subsets that
/// are partial bases.
#[derive(Clone, Debug)]
pub struct TruncatedPb {
    pub rank: usize,
    pub length_bound: usize,
    pub words: Vec<ReducedWord>,
    pub complex: SimplicialComplex,
}

impl TruncatedPb {
    pub fn word_of_vertex(&self, v: usize) -> &ReducedWord {
        &self.words[v]
    }

    pub fn vertex_of_word(&self, w: &ReducedWord) -> Option<usize> {
        self.words.iter().position(|x| x == w)
    }

    /// Words of one simplex.
    pub fn simplex_words(&self, s: &[usize]) -> Vec<ReducedWord> {
        s.iter().map(|&v| self.words[v].clone()).collect()
    }
}

/// Build the truncation. A candidate set is tested only when all of its
/// facets already passed.
pub fn build_truncated_pb(rank: usize, length_bound: usize, budget: PbBudget) -> Result<TruncatedPb> {
    let mut tester = PbTester::new();
    build_truncated_pb_with(rank, length_bound, budget, &mut tester)
}

pub fn build_truncated_pb_with(
    rank: usize,
    length_bound: usize,
    budget: PbBudget,
    tester: &mut PbTester,
) -> Result<TruncatedPb> {
    check_budget(rank, length_bound, budget)?;
    let words = enumerate_primitives_with(rank, length_bound, tester)?;
    let labels: Vec<String> = words.iter().map(|w| w.to_string()).collect();

    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut layer: Vec<Vec<usize>> = (0..words.len()).map(|v| vec![v]).collect();
    for s in &layer {
        simplices.insert(s.clone());
    }
    // grow one dimension at a time, up to sets of size `rank`
    for size in 2..=rank {
        let prev: BTreeSet<&Vec<usize>> = layer.iter().collect();
        let mut next = Vec::new();
        for s in &layer {
            let &last = s.last().expect("nonempty");
            'candidate: for v in last + 1..words.len() {
                // all facets containing v must already be simplices
                for skip in 0..s.len() {
                    let mut facet: Vec<usize> =
                        s.iter().copied().filter(|&u| u != s[skip]).collect();
                    facet.push(v);
                    facet.sort_unstable();
                    if !prev.contains(&facet) {
                        continue 'candidate;
                    }
                }
                let mut candidate = s.clone();
                candidate.push(v);
                let candidate_words = candidate
                    .iter()
                    .map(|&u| words[u].clone())
                    .collect::<Vec<_>>();
                if tester.is_partial_basis(&candidate_words, rank)? {
                    next.push(candidate);
                }
            }
        }
        for s in &next {
            simplices.insert(s.clone());
        }
        if next.is_empty() {
            break;
        }
        layer = next;
        let _ = size;
    }

    Ok(TruncatedPb {
        rank,
        length_bound,
        words,
        complex: SimplicialComplex::from_simplex_family(labels, simplices),
    })
}

/// The truncated link of a partial basis: vertices are primitives `w` of
/// bounded length with `B ∪ {w}` a partial basis, simplices the sets `S`
/// with `B ∪ S` a partial basis.
pub fn link_in_pb(
    basis: &[ReducedWord],
    rank: usize,
    length_bound: usize,
    budget: PbBudget,
) -> Result<SimplicialComplex> {
    let mut tester = PbTester::new();
    link_in_pb_with(basis, rank, length_bound, budget, &mut tester)
}

pub fn link_in_pb_with(
    basis: &[ReducedWord],
    rank: usize,
    length_bound: usize,
    budget: PbBudget,
    tester: &mut PbTester,
) -> Result<SimplicialComplex> {
    check_budget(rank, length_bound, budget)?;
    if !tester.is_partial_basis(basis, rank)? {
        return Err(Error::NotPartialBasis {
            reason: "link basepoint is not a partial basis".into(),
        });
    }
    let base: Vec<ReducedWord> = {
        let mut b = basis.to_vec();
        b.sort();
        b.dedup();
        b
    };
    let mut vertices = Vec::new();
    for w in words_up_to_length(rank, length_bound) {
        if base.contains(&w) {
            continue;
        }
        let mut joined = base.clone();
        joined.push(w.clone());
        if joined.len() > rank {
            break; // |B| = n: the link is empty
        }
        if tester.is_partial_basis(&joined, rank)? {
            vertices.push(w);
        }
    }
    let labels: Vec<String> = vertices.iter().map(|w| w.to_string()).collect();

    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut layer: Vec<Vec<usize>> = (0..vertices.len()).map(|v| vec![v]).collect();
    for s in &layer {
        simplices.insert(s.clone());
    }
    let max_size = rank - base.len();
    for _size in 2..=max_size {
        let prev: BTreeSet<&Vec<usize>> = layer.iter().collect();
        let mut next = Vec::new();
        for s in &layer {
            let &last = s.last().expect("nonempty");
            'candidate: for v in last + 1..vertices.len() {
                for skip in 0..s.len() {
                    let mut facet: Vec<usize> =
                        s.iter().copied().filter(|&u| u != s[skip]).collect();
                    facet.push(v);
                    facet.sort_unstable();
                    if !prev.contains(&facet) {
                        continue 'candidate;
                    }
                }
                let mut candidate = s.clone();
                candidate.push(v);
                let mut joined = base.clone();
                joined.extend(candidate.iter().map(|&u| vertices[u].clone()));
                if tester.is_partial_basis(&joined, rank)? {
                    next.push(candidate);
                }
            }
        }
        for s in &next {
            simplices.insert(s.clone());
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }

    Ok(SimplicialComplex::from_simplex_family(labels, simplices))
}

// ---------------------------------------------------------------------------
// Free factors
// ---------------------------------------------------------------------------

/// A free factor `⟨B⟩` presented by a partial basis together with its
/// basis-extension certificate (an automorphism carrying `B` to the first
/// `|B|` standard generators).
#[derive(Clone, Debug)]
pub struct FreeFactorHandle {
    ambient_rank: usize,
    basis: Vec<ReducedWord>,
    certificate: Automorphism,
}

impl FreeFactorHandle {
    pub fn new(basis: &[ReducedWord], rank: usize) -> Result<FreeFactorHandle> {
        let mut sorted = basis.to_vec();
        sorted.sort();
        sorted.dedup();
        let certificate = extend_to_basis(&sorted, rank)?;
        Ok(FreeFactorHandle {
            ambient_rank: rank,
            basis: sorted,
            certificate,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn basis(&self) -> &[ReducedWord] {
        &self.basis
    }

    pub fn certificate(&self) -> &Automorphism {
        &self.certificate
    }

    /// `w ∈ ⟨B⟩` iff the certificate image of `w` uses only the first
    /// `rank(B)` generator orbits.
    pub fn contains_word(&self, w: &ReducedWord) -> Result<bool> {
        if w.rank() != self.ambient_rank {
            return Err(Error::RankMismatch {
                left: self.ambient_rank,
                right: w.rank(),
            });
        }
        let image = self.certificate.apply(w);
        Ok(image.letters().iter().all(|l| l.index() <= self.rank()))
    }

    /// `⟨other⟩ ⊆ ⟨self⟩`.
    pub fn contains_factor(&self, other: &FreeFactorHandle) -> Result<bool> {
        for w in &other.basis {
            if !self.contains_word(w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of factors: mutual containment and equal rank.
    pub fn same_factor(&self, other: &FreeFactorHandle) -> Result<bool> {
        Ok(self.rank() == other.rank()
            && self.contains_factor(other)?
            && other.contains_factor(self)?)
    }
}

/// The map sending a simplex of the truncated complex (of size at most
/// `n - 1`, so the factor is proper) to the free factor it generates.
pub fn g_map(simplex_words: &[ReducedWord], rank: usize) -> Result<FreeFactorHandle> {
    let mut sorted = simplex_words.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() >= rank {
        return Err(Error::InvalidParameters(format!(
            "a simplex of size {} does not generate a proper free factor of rank-{} ambient",
            sorted.len(),
            rank
        )));
    }
    FreeFactorHandle::new(&sorted, rank)
}

// ---------------------------------------------------------------------------
// Sphericity experiments
// ---------------------------------------------------------------------------

/// Observed truncated data next to the untruncated predictions. The note
/// field spells out that this is truncated evidence only.
#[derive(Clone, Debug, Serialize)]
pub struct SphericityExperiment {
    pub rank: usize,
    pub length_bound: usize,
    pub basis: Vec<String>,
    pub note: String,
    pub vertices: usize,
    pub simplices: usize,
    pub observed_dim: isize,
    /// `n - |B| - 1`, the dimension of the untruncated link
    pub predicted_dim: isize,
    pub homology: HomologyResult,
    pub observed_connected: bool,
    /// connectivity predicted for the untruncated link when `n - |B| >= 2`
    pub predicted_connected: bool,
    pub top_torsion_free: bool,
    /// no contradiction between the observations and the predictions that
    /// the truncation is able to probe
    pub consistent: bool,
}

pub fn experiment_sphericity(
    rank: usize,
    length_bound: usize,
    basis: &[ReducedWord],
    budget: PbBudget,
) -> Result<SphericityExperiment> {
    let mut tester = PbTester::new();
    let complex = if basis.is_empty() {
        build_truncated_pb_with(rank, length_bound, budget, &mut tester)?.complex
    } else {
        link_in_pb_with(basis, rank, length_bound, budget, &mut tester)?
    };
    let codim = rank - basis.len();
    let predicted_dim = codim as isize - 1;
    let homology = homology_of_complex(&complex);
    let observed_connected = !complex.is_empty_space() && homology.rank(0) == 0;
    let predicted_connected = codim >= 2;
    let top = homology.group(predicted_dim);
    let top_torsion_free = top.torsion.is_empty();
    // the truncation can only refute: a disconnected truncation of a
    // predicted-connected link, or torsion in the top degree, would be an
    // inconsistency; missing cells in low degrees are expected
    let consistent = (!predicted_connected || observed_connected) && top_torsion_free;
    Ok(SphericityExperiment {
        rank,
        length_bound,
        basis: basis.iter().map(|w| w.to_string()).collect(),
        note: "truncated evidence — the untruncated complex is the theorem's subject".into(),
        vertices: complex.simplices_of_dim(0).len(),
        simplices: complex.simplex_count(),
        observed_dim: complex.dim(),
        predicted_dim,
        homology,
        observed_connected,
        predicted_connected,
        top_torsion_free,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::parse_word;

    fn w(text: &str, rank: usize) -> ReducedWord {
        parse_word(text, rank).unwrap()
    }

    #[test]
    fn primitives_small_cases() {
        assert_eq!(enumerate_primitives(2, 1).unwrap().len(), 4);
        // 4 letters + 8 mixed two-letter words; a^{±2}, b^{±2} excluded
        assert_eq!(enumerate_primitives(2, 2).unwrap().len(), 12);
        // the commutator is not primitive
        let prims = enumerate_primitives(2, 4).unwrap();
        assert!(!prims.contains(&w("a b a^-1 b^-1", 2)));
        assert!(!prims.contains(&w("a b a b", 2))); // (ab)^2 is not primitive
        assert!(prims.contains(&w("a b b", 2))); // ab^2 is primitive
    }

    #[test]
    fn truncated_pb_rank2_len1() {
        let pb = build_truncated_pb(2, 1, PbBudget::default()).unwrap();
        assert_eq!(pb.complex.simplices_of_dim(0).len(), 4);
        assert_eq!(pb.complex.simplices_of_dim(1).len(), 4); // distinct-orbit pairs
        assert_eq!(pb.complex.dim(), 1);
    }

    #[test]
    fn truncated_pb_rank2_len2_connected() {
        let pb = build_truncated_pb(2, 2, PbBudget::default()).unwrap();
        let h = homology_of_complex(&pb.complex);
        assert_eq!(h.rank(0), 0, "truncated complex should be connected");
    }

    #[test]
    fn truncated_pb_rank3_len1_is_octahedron() {
        let pb = build_truncated_pb(3, 1, PbBudget::default()).unwrap();
        assert_eq!(pb.complex.simplices_of_dim(0).len(), 6);
        assert_eq!(pb.complex.simplices_of_dim(1).len(), 12);
        assert_eq!(pb.complex.simplices_of_dim(2).len(), 8);
        let h = homology_of_complex(&pb.complex);
        assert_eq!(h.rank(2), 1);
        assert!(h.is_trivial_below(2));
    }

    #[test]
    fn budget_is_loud() {
        assert!(matches!(
            build_truncated_pb(5, 1, PbBudget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            build_truncated_pb(2, 9, PbBudget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn link_examples() {
        // B = {v1, ..., v_{n-1}}, L = 1: v_n is a vertex
        let b: Vec<ReducedWord> = vec![w("a", 3), w("b", 3)];
        let lk = link_in_pb(&b, 3, 1, PbBudget::default()).unwrap();
        assert!(lk.simplices_of_dim(0).len() >= 2); // v3 and v3^{-1}
        assert_eq!(lk.dim(), 0);

        // B = {v1} in F_3, L = 1: 4-cycle on the letters of orbits 2, 3
        let lk = link_in_pb(&[w("a", 3)], 3, 1, PbBudget::default()).unwrap();
        assert_eq!(lk.simplices_of_dim(0).len(), 4);
        assert_eq!(lk.simplices_of_dim(1).len(), 4);
        let h = homology_of_complex(&lk);
        assert_eq!(h.rank(0), 0);
        assert_eq!(h.rank(1), 1);

        // B = {v1} in F_2, L = 3: 0-dimensional, nonempty
        let lk = link_in_pb(&[w("a", 2)], 2, 3, PbBudget::default()).unwrap();
        assert_eq!(lk.dim(), 0);
        assert!(lk.simplices_of_dim(0).len() >= 2);

        // invalid basepoint
        assert!(link_in_pb(&[w("a a", 2)], 2, 1, PbBudget::default()).is_err());
    }

    #[test]
    fn factor_membership_examples() {
        let ab = FreeFactorHandle::new(&[w("a b", 2)], 2).unwrap();
        assert!(ab.contains_word(&w("a b a b", 2)).unwrap()); // (ab)^2
        assert!(!ab.contains_word(&w("a", 2)).unwrap());
        let a = FreeFactorHandle::new(&[w("a", 2)], 2).unwrap();
        assert!(!a.contains_word(&w("a b", 2)).unwrap());
        // ⟨{a, b}⟩ = ⟨{ab, b}⟩ in F_3
        let f1 = FreeFactorHandle::new(&[w("a", 3), w("b", 3)], 3).unwrap();
        let f2 = FreeFactorHandle::new(&[w("a b", 3), w("b", 3)], 3).unwrap();
        assert!(f1.same_factor(&f2).unwrap());
        assert!(!f1.same_factor(&FreeFactorHandle::new(&[w("a", 3)], 3).unwrap()).unwrap());
    }

    #[test]
    fn membership_invariant_under_presentation_change() {
        // factor_membership(w, B) only depends on ⟨B⟩
        let f1 = FreeFactorHandle::new(&[w("a", 3), w("b", 3)], 3).unwrap();
        let f2 = FreeFactorHandle::new(&[w("a b", 3), w("b", 3)], 3).unwrap();
        for probe in ["a", "b b a", "c", "a c", "b a^-1"] {
            let word = w(probe, 3);
            assert_eq!(
                f1.contains_word(&word).unwrap(),
                f2.contains_word(&word).unwrap(),
                "probe {probe}"
            );
        }
    }

    #[test]
    fn g_map_examples() {
        let h = g_map(&[w("a", 3)], 3).unwrap();
        assert_eq!(h.rank(), 1);
        // g({ab, b}) = g({a, b}) in F_3
        let h1 = g_map(&[w("a b", 3), w("b", 3)], 3).unwrap();
        let h2 = g_map(&[w("a", 3), w("b", 3)], 3).unwrap();
        assert!(h1.same_factor(&h2).unwrap());
        // full-size simplices are rejected
        assert!(g_map(&[w("a", 2), w("b", 2)], 2).is_err());
    }

    #[test]
    fn g_map_is_order_preserving() {
        // σ ⊆ τ implies ⟨σ⟩ ⊆ ⟨τ⟩ through the certificates
        let sigma = vec![w("a b", 3)];
        let tau = vec![w("a b", 3), w("c", 3)];
        let hs = g_map(&sigma, 3).unwrap();
        let ht = g_map(&tau, 3).unwrap();
        assert!(ht.contains_factor(&hs).unwrap());
        assert!(!hs.contains_factor(&ht).unwrap());
    }

    #[test]
    fn monotone_in_length_bound() {
        let small = build_truncated_pb(2, 1, PbBudget::default()).unwrap();
        let large = build_truncated_pb(2, 2, PbBudget::default()).unwrap();
        for word in &small.words {
            assert!(large.words.contains(word));
        }
        // simplices embed under the word -> vertex reindexing
        for s in small.complex.simplices() {
            let words = small.simplex_words(s);
            let mapped: Vec<usize> = words
                .iter()
                .map(|x| large.vertex_of_word(x).expect("monotone vertices"))
                .collect();
            let mut key = mapped.clone();
            key.sort_unstable();
            assert!(large.complex.contains(&key));
        }
    }

    #[test]
    fn omega_invariance() {
        // letter permutations preserve word length, so they act on the
        // truncation; vertex and simplex counts are orbit-invariant
        use crate::autos::{enumerate_omega, Automorphism};
        let pb = build_truncated_pb(2, 2, PbBudget::default()).unwrap();
        for sigma in enumerate_omega(2) {
            let auto = Automorphism::from_perm(&sigma);
            // vertices map to vertices
            for word in &pb.words {
                let image = auto.apply(word);
                assert!(pb.words.contains(&image), "vertex set not invariant");
            }
            // simplices map to simplices
            for s in pb.complex.simplices() {
                let mapped: Vec<usize> = pb
                    .simplex_words(s)
                    .iter()
                    .map(|x| pb.vertex_of_word(&auto.apply(x)).expect("vertex"))
                    .collect();
                let mut key = mapped.clone();
                key.sort_unstable();
                assert!(pb.complex.contains(&key), "simplex set not invariant");
            }
        }
    }

    #[test]
    fn full_size_simplices_are_bases() {
        let pb = build_truncated_pb(2, 2, PbBudget::default()).unwrap();
        for s in pb.complex.simplices_of_dim(1) {
            let words = pb.simplex_words(&s);
            let cert = extend_to_basis(&words, 2).unwrap();
            assert!(cert.compose(&cert.invert().unwrap()).unwrap().is_identity());
        }
    }

    #[test]
    fn experiments() {
        // n = 2, B = ∅: connected, torsion-free top
        let e = experiment_sphericity(2, 3, &[], PbBudget::default()).unwrap();
        assert!(e.observed_connected);
        assert!(e.top_torsion_free);
        assert!(e.consistent);
        assert_eq!(e.predicted_dim, 1);
        // n = 3, B = {v1}, L = 1: the 4-cycle link
        let e = experiment_sphericity(3, 1, &[w("a", 3)], PbBudget::default()).unwrap();
        assert!(e.observed_connected);
        assert_eq!(e.predicted_dim, 1);
        assert_eq!(e.homology.rank(1), 1);
        assert!(e.consistent);
        // n = 3, B = ∅, L = 1: octahedron
        let e = experiment_sphericity(3, 1, &[], PbBudget::default()).unwrap();
        assert_eq!(e.homology.rank(2), 1);
        assert!(e.homology.is_trivial_below(2));
        assert!(e.consistent);
    }
}

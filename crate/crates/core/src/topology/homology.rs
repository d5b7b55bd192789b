//! Exact reduced homology with integer coefficients via Smith normal form,
//! plus the homological/connectivity sphericity verdicts.

use super::chains::IntegerChainComplex;
use super::complex::SimplicialComplex;
use super::poset::FinitePoset;
use crate::zmatrix::{smith_normal_form, ZMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn trivial() -> HomologyGroup {
        HomologyGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> HomologyGroup {
        HomologyGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Reduced homology per degree (degrees `-1..=dim`; absent degrees are
/// trivial, and equality is degreewise with that convention). Serializes
/// as the bare degree -> {rank, torsion} map.
#[derive(Clone, Debug, Eq, Serialize)]
#[serde(transparent)]
pub struct HomologyResult {
    pub groups: BTreeMap<isize, HomologyGroup>,
}

impl PartialEq for HomologyResult {
    fn eq(&self, other: &Self) -> bool {
        let degrees: std::collections::BTreeSet<isize> = self
            .groups
            .keys()
            .chain(other.groups.keys())
            .copied()
            .collect();
        degrees.iter().all(|&d| self.group(d) == other.group(d))
    }
}

impl HomologyResult {
    pub fn group(&self, degree: isize) -> HomologyGroup {
        self.groups
            .get(&degree)
            .cloned()
            .unwrap_or_else(HomologyGroup::trivial)
    }

    pub fn rank(&self, degree: isize) -> usize {
        self.group(degree).rank
    }

    pub fn is_trivial_below(&self, n: isize) -> bool {
        self.groups
            .iter()
            .filter(|(d, _)| **d < n)
            .all(|(_, g)| g.is_trivial())
    }

    pub fn all_trivial(&self) -> bool {
        self.groups.values().all(|g| g.is_trivial())
    }
}

/// Reduced homology of an augmented chain complex:
/// `H_d = ker d_d / im d_{d+1}` with free rank
/// `dim C_d - rank d_d - rank d_{d+1}` and torsion from the Smith form of
/// `d_{d+1}`.
pub fn homology(cc: &IntegerChainComplex) -> HomologyResult {
    let mut groups = BTreeMap::new();
    let dim = cc.dim();
    let mut rank_next = 0usize; // rank of d_{d+1}, starting from d = dim
    let mut torsion_next: Vec<BigInt> = Vec::new();
    for d in (-1..=dim).rev() {
        let snf = smith_normal_form(&cc.boundary_matrix(d));
        let rank_d = snf.rank();
        let free = cc.rank_of_degree(d) - rank_d - rank_next;
        groups.insert(
            d,
            HomologyGroup {
                rank: free,
                torsion: torsion_next.clone(),
            },
        );
        rank_next = rank_d;
        torsion_next = snf.torsion();
    }
    HomologyResult { groups }
}

pub fn homology_of_complex(k: &SimplicialComplex) -> HomologyResult {
    homology(&IntegerChainComplex::from_complex(k))
}

/// Homology of a poset is the homology of its order complex.
pub fn homology_of_poset(x: &FinitePoset) -> HomologyResult {
    homology_of_complex(&x.order_complex())
}

/// Both sides of the Euler-characteristic identity over the augmented
/// complex: alternating simplex count and alternating Betti sum.
pub fn euler_characteristics(k: &SimplicialComplex) -> (i64, i64) {
    let cc = IntegerChainComplex::from_complex(k);
    let h = homology(&cc);
    let mut by_cells = 0i64;
    let mut by_betti = 0i64;
    for d in -1..=cc.dim() {
        let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
        by_cells += sign * cc.rank_of_degree(d) as i64;
        by_betti += sign * h.rank(d) as i64;
    }
    (by_cells, by_betti)
}

// ---------------------------------------------------------------------------
// Sphericity
// ---------------------------------------------------------------------------

/// Three-valued verdict for properties that are only semi-decidable at a
/// budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No(String),
    UnknownAtBudget(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Yes)
    }
}

/// `dim K = n` and `H̃_i(K) = 0` for every `i < n`. Exact.
pub fn is_homologically_spherical(k: &SimplicialComplex, n: isize) -> bool {
    k.dim() == n && homology_of_complex(k).is_trivial_below(n)
}

pub fn poset_is_homologically_spherical(x: &FinitePoset, n: isize) -> bool {
    is_homologically_spherical(&x.order_complex(), n)
}

/// Connectivity variant: dimension, vanishing reduced homology below `n`,
/// and for `n >= 2` a budgeted simple-connectivity check. The homological
/// part is exact; only the fundamental-group part can come back unknown.
pub fn is_spherical(k: &SimplicialComplex, n: isize, pi1_budget: usize) -> Verdict {
    if k.dim() != n {
        return Verdict::No(format!("dimension {} != {}", k.dim(), n));
    }
    let h = homology_of_complex(k);
    if !h.is_trivial_below(n) {
        return Verdict::No("reduced homology below the top degree".into());
    }
    if n < 2 {
        return Verdict::Yes;
    }
    pi1_trivial(k, pi1_budget)
}

/// Budgeted triviality check for the edge-path group: spanning-tree
/// presentation plus Tietze-style eliminations of length-1 and length-2
/// relators. Never answers `No` (a nontrivial perfect group is
/// indistinguishable at this budget; nontrivial abelianizations are already
/// excluded by homology).
pub fn pi1_trivial(k: &SimplicialComplex, budget: usize) -> Verdict {
    let verts = k.vertex_set();
    if verts.is_empty() {
        return Verdict::Yes;
    }
    let edges = k.simplices_of_dim(1);
    // spanning tree by BFS (the complex is connected here: H̃_0 = 0)
    let mut tree: BTreeMap<usize, usize> = BTreeMap::new(); // vertex -> parent edge idx
    let mut seen: std::collections::BTreeSet<usize> = [verts[0]].into();
    let mut queue = std::collections::VecDeque::from([verts[0]]);
    let mut in_tree = vec![false; edges.len()];
    while let Some(v) = queue.pop_front() {
        for (ei, e) in edges.iter().enumerate() {
            let other = if e[0] == v {
                e[1]
            } else if e[1] == v {
                e[0]
            } else {
                continue;
            };
            if seen.insert(other) {
                in_tree[ei] = true;
                tree.insert(other, ei);
                queue.push_back(other);
            }
        }
    }

    // generators: non-tree edges
    let mut gen_id: BTreeMap<usize, i32> = BTreeMap::new();
    for (ei, t) in in_tree.iter().enumerate() {
        if !t {
            let id = gen_id.len() as i32 + 1;
            gen_id.insert(ei, id);
        }
    }
    let symbol = |u: usize, v: usize| -> Option<i32> {
        // generator symbol for the directed edge u -> v (None for tree edges)
        let key = if u < v { vec![u, v] } else { vec![v, u] };
        let ei = edges.iter().position(|e| **e == key[..])?;
        gen_id.get(&ei).map(|&g| if u < v { g } else { -g })
    };

    // relators from 2-simplices: [a<b<c] gives (a->b)(b->c)(c->a)
    let mut relators: Vec<Vec<i32>> = Vec::new();
    for t in k.simplices_of_dim(2) {
        let (a, b, c) = (t[0], t[1], t[2]);
        let word: Vec<i32> = [symbol(a, b), symbol(b, c), symbol(c, a)]
            .into_iter()
            .flatten()
            .collect();
        relators.push(word);
    }

    let mut generators: std::collections::BTreeSet<i32> =
        gen_id.values().copied().collect();
    if generators.is_empty() {
        return Verdict::Yes;
    }

    let reduce = |w: &[i32]| -> Vec<i32> {
        // free + cyclic reduction
        let mut out: Vec<i32> = Vec::new();
        for &x in w {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        while out.len() >= 2 && out.first().copied() == out.last().map(|x| -x) {
            out.pop();
            out.remove(0);
        }
        out
    };

    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > budget {
            return Verdict::UnknownAtBudget(format!(
                "{} generators remain after {} simplification passes",
                generators.len(),
                budget
            ));
        }
        relators = relators.iter().map(|w| reduce(w)).filter(|w| !w.is_empty()).collect();
        // length-1 relator: the generator dies
        if let Some(&g) = relators.iter().find(|w| w.len() == 1).map(|w| &w[0]) {
            let g = g.abs();
            generators.remove(&g);
            for w in &mut relators {
                w.retain(|x| x.abs() != g);
            }
            continue;
        }
        // length-2 relator over two distinct generators: substitute
        let sub = relators
            .iter()
            .find(|w| w.len() == 2 && w[0].abs() != w[1].abs())
            .map(|w| (w[0], w[1]));
        if let Some((x, y)) = sub {
            // x y = 1  =>  x = y^{-1}
            let g = x.abs();
            let rep = if x > 0 { -y } else { y }; // g = rep
            generators.remove(&g);
            relators = relators
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|&s| {
                            if s == g {
                                rep
                            } else if s == -g {
                                -rep
                            } else {
                                s
                            }
                        })
                        .collect()
                })
                .collect();
            continue;
        }
        break;
    }
    if generators.is_empty() {
        Verdict::Yes
    } else {
        Verdict::UnknownAtBudget(format!(
            "{} generators and {} relators remain",
            generators.len(),
            relators.len()
        ))
    }
}

/// Unimodularity helper used by certificate checks.
pub fn is_unimodular(m: &ZMatrix) -> bool {
    m.rows() == m.cols() && m.det().abs() == BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::complex::*;
    use crate::topology::poset::{face_poset, poset_join, FinitePoset};

    fn free(r: usize) -> HomologyGroup {
        HomologyGroup::free(r)
    }

    #[test]
    fn spheres() {
        // ∂Δ²: circle
        let h = homology_of_complex(&boundary_of_simplex(2));
        assert_eq!(h.group(1), free(1));
        assert!(h.group(0).is_trivial());
        // ∂Δ³: 2-sphere
        let h = homology_of_complex(&boundary_of_simplex(3));
        assert_eq!(h.group(2), free(1));
        assert!(h.group(1).is_trivial());
        assert!(h.group(0).is_trivial());
        // octahedron
        let h = homology_of_complex(&octahedron());
        assert_eq!(h.group(2), free(1));
        assert!(h.is_trivial_below(2));
    }

    #[test]
    fn projective_plane_torsion() {
        let h = homology_of_complex(&projective_plane_rp2());
        assert_eq!(h.group(0), HomologyGroup::trivial());
        assert_eq!(h.group(1).rank, 0);
        assert_eq!(h.group(1).torsion, vec![BigInt::from(2)]);
        assert!(h.group(2).is_trivial());
    }

    #[test]
    fn torus_homology() {
        let h = homology_of_complex(&torus_7());
        assert_eq!(h.group(1), free(2));
        assert_eq!(h.group(2), free(1));
        assert!(h.group(0).is_trivial());
    }

    #[test]
    fn empty_complex_has_reduced_minus_one() {
        let h = homology_of_complex(&SimplicialComplex::empty());
        assert_eq!(h.group(-1), free(1));
    }

    #[test]
    fn hexagon_from_poset_and_cones() {
        // 6-cycle via the face poset of ∂Δ²
        let p = face_poset(&boundary_of_simplex(2)).poset;
        let h = homology_of_poset(&p);
        assert_eq!(h.group(1), free(1));
        // a full simplex is acyclic
        let h = homology_of_complex(&full_simplex(3));
        assert!(h.all_trivial());
    }

    #[test]
    fn join_examples() {
        // S^0 * S^0: 4-cycle
        let s0a = FinitePoset::antichain(vec!["x".into(), "y".into()]);
        let j = poset_join(&s0a, &s0a);
        assert_eq!(homology_of_poset(&j).group(1), free(1));
        // S^0 * S^0 * S^0: octahedron boundary
        let h = homology_of_complex(&octahedron());
        assert_eq!(h.group(2), free(1));
    }

    #[test]
    fn opposite_preserves_homology() {
        let p = face_poset(&boundary_of_simplex(2)).poset;
        assert_eq!(homology_of_poset(&p), homology_of_poset(&p.opposite()));
        // and on random posets
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let p = crate::topology::gen::random_poset(&mut rng, 10);
            assert_eq!(homology_of_poset(&p), homology_of_poset(&p.opposite()));
        }
    }

    #[test]
    fn subdivision_invariance_on_random_complexes() {
        // order_complex(face_poset(K)) has the homology of K
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let k = crate::topology::gen::random_complex(&mut rng, 8);
            let subdivided = face_poset(&k).poset.order_complex();
            assert_eq!(
                homology_of_complex(&k),
                homology_of_complex(&subdivided),
                "subdivision changed homology of {k:?}"
            );
        }
    }

    #[test]
    fn subdivided_generator_still_generates() {
        // z generates H~_1(∂Δ²); λ(z) must generate H~_1 of the hexagon
        use crate::topology::chains::SubdivisionOperator;
        use crate::zmatrix::{express_in_columns, kernel_basis, left_inverse, ZMatrix};
        use crate::topology::chains::IntegerChainComplex;
        use num_traits::Signed;

        let k = boundary_of_simplex(2);
        let cc = IntegerChainComplex::from_complex(&k);
        let z_vec = kernel_basis(&cc.boundary_matrix(1)).pop().unwrap();
        let z = cc.vec_to_chain(1, &z_vec);

        let fp = face_poset(&k);
        let lambda = SubdivisionOperator::new(&fp);
        let image = lambda.on_chain(&z).unwrap();
        assert!(image.boundary().is_zero());

        let hex = fp.poset.order_complex();
        let hex_cc = IntegerChainComplex::from_complex(&hex);
        let hex_kernel = kernel_basis(&hex_cc.boundary_matrix(1));
        assert_eq!(hex_kernel.len(), 1);
        let mut columns = ZMatrix::zero(hex_cc.rank_of_degree(1), 1);
        for (i, v) in hex_kernel[0].iter().enumerate() {
            columns.set(i, 0, v.clone());
        }
        let l = left_inverse(&columns).unwrap();
        let coords =
            express_in_columns(&columns, &l, &hex_cc.chain_to_vec(&image).unwrap()).unwrap();
        // a generator maps to ± the generator
        assert_eq!(coords.len(), 1);
        assert_eq!(coords[0].abs(), BigInt::one());
    }

    #[test]
    fn euler_identity_on_known_complexes() {
        for k in [
            boundary_of_simplex(2),
            boundary_of_simplex(3),
            octahedron(),
            projective_plane_rp2(),
            torus_7(),
            full_simplex(4),
            discrete_points(5),
            cycle_complex(6),
        ] {
            let (cells, betti) = euler_characteristics(&k);
            assert_eq!(cells, betti);
        }
    }

    #[test]
    fn sphericity_verdicts() {
        // ∂Δ³ is homologically 2-spherical, and simply connected
        assert!(is_homologically_spherical(&boundary_of_simplex(3), 2));
        assert_eq!(is_spherical(&boundary_of_simplex(3), 2, 1000), Verdict::Yes);
        // hexagon is 1-spherical
        assert!(is_homologically_spherical(
            &face_poset(&boundary_of_simplex(2)).poset.order_complex(),
            1
        ));
        // a cone satisfies the homological definition in its own dimension
        assert!(is_homologically_spherical(&full_simplex(2), 2));
        // wrong dimension
        assert!(!is_homologically_spherical(&full_simplex(2), 1));
        // the empty complex is (-1)-spherical
        assert!(is_homologically_spherical(&SimplicialComplex::empty(), -1));
        // RP² has H_1 torsion: not 1-trivial below 2
        assert!(!is_homologically_spherical(&projective_plane_rp2(), 2));
        assert!(matches!(
            is_spherical(&projective_plane_rp2(), 2, 1000),
            Verdict::No(_)
        ));
    }

    #[test]
    fn pi1_budget_exhaustion_is_reported() {
        let v = pi1_trivial(&torus_7(), 1);
        assert!(matches!(v, Verdict::UnknownAtBudget(_)));
    }

    #[test]
    fn snf_homology_agree_on_2x2_example() {
        use crate::zmatrix::{smith_normal_form, ZMatrix};
        let m = ZMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.s.get(0, 0), &BigInt::from(2));
        assert_eq!(s.s.get(1, 1), &BigInt::from(4));
    }
}

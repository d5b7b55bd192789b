//! Spherical-map checking for order-preserving poset maps, the non-Hausdorff
//! mapping cylinder, and the constructive top-homology basis obtained from a
//! homologically spherical map onto a homologically spherical target.
//!
//! The basis pipeline is fully effective: the lifted classes `γ_i` and the
//! fiber/upper-set classes `α_i`, `β_j` are found by solving integer linear
//! systems through Smith normal form, the candidate set is expressed in an
//! independently computed kernel basis of the top chain group, and the
//! change-of-basis determinant (±1 on success) is the certificate. The
//! chain identity `φ((α*β)') = α' * f̃(β')` is checked degreewise, exactly,
//! for every pair used.

use crate::error::{Error, Result};
use crate::topology::chains::{chain_join, Chain, IntegerChainComplex, SubdivisionOperator};
use crate::topology::complex::{Simplex, SimplicialComplex};
use crate::topology::homology::{homology_of_poset, poset_is_homologically_spherical, Verdict};
use crate::topology::poset::{face_poset, FacePoset, FinitePoset};
use crate::zmatrix::{express_in_columns, is_surjective, left_inverse, right_inverse, ZMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

// ---------------------------------------------------------------------------
// Poset maps and fibers
// ---------------------------------------------------------------------------

/// An order-preserving map between finite posets, stored elementwise.
#[derive(Clone, Debug)]
pub struct PosetMap {
    pub source: FinitePoset,
    pub target: FinitePoset,
    assignment: Vec<usize>,
}

impl PosetMap {
    pub fn new(source: FinitePoset, target: FinitePoset, assignment: Vec<usize>) -> Result<PosetMap> {
        if assignment.len() != source.len() {
            return Err(Error::InvalidParameters(format!(
                "assignment covers {} of {} elements",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= target.len()) {
            return Err(Error::ElementNotFound(format!("target element {bad}")));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) && !target.leq(assignment[a], assignment[b]) {
                    return Err(Error::NotOrderPreserving(format!(
                        "{} <= {} but {} !<= {}",
                        source.label(a),
                        source.label(b),
                        target.label(assignment[a]),
                        target.label(assignment[b])
                    )));
                }
            }
        }
        Ok(PosetMap {
            source,
            target,
            assignment,
        })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Indices of the source elements in the fiber `f/y = {x : f(x) <= y}`.
    pub fn fiber_indices(&self, y: usize) -> Vec<usize> {
        (0..self.source.len())
            .filter(|&x| self.target.leq(self.assignment[x], y))
            .collect()
    }

    /// The fiber as an induced subposet.
    pub fn fiber(&self, y: usize) -> Result<FinitePoset> {
        if y >= self.target.len() {
            return Err(Error::ElementNotFound(format!("target element {y}")));
        }
        Ok(self.source.subposet(&self.fiber_indices(y)).0)
    }
}

// ---------------------------------------------------------------------------
// Non-Hausdorff mapping cylinder
// ---------------------------------------------------------------------------

/// `M(f)` with the two inclusions tracked by index.
#[derive(Clone, Debug)]
pub struct MappingCylinder {
    pub poset: FinitePoset,
    /// index in `M(f)` of each source element (the inclusion `j`)
    pub from_source: Vec<usize>,
    /// index in `M(f)` of each target element (the inclusion `i`)
    pub from_target: Vec<usize>,
}

/// Disjoint union of source and target with `x <= y` iff `f(x) <= y`.
/// The partial-order axioms are re-verified on construction.
pub fn mapping_cylinder(f: &PosetMap) -> Result<MappingCylinder> {
    let nx = f.source.len();
    let ny = f.target.len();
    let mut labels: Vec<String> = f.source.labels().iter().map(|l| format!("X:{l}")).collect();
    labels.extend(f.target.labels().iter().map(|l| format!("Y:{l}")));
    let mut relations = Vec::new();
    for a in 0..nx {
        for b in 0..nx {
            if f.source.leq(a, b) {
                relations.push((a, b));
            }
        }
    }
    for a in 0..ny {
        for b in 0..ny {
            if f.target.leq(a, b) {
                relations.push((nx + a, nx + b));
            }
        }
    }
    for x in 0..nx {
        for y in 0..ny {
            if f.target.leq(f.apply(x), y) {
                relations.push((x, nx + y));
            }
        }
    }
    let poset = FinitePoset::new(labels, &relations)?;
    Ok(MappingCylinder {
        poset,
        from_source: (0..nx).collect(),
        from_target: (nx..nx + ny).collect(),
    })
}

// ---------------------------------------------------------------------------
// Spherical-map checking
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct PerElementCheck {
    pub element: String,
    pub height: usize,
    /// `Y_{>y}` is homologically `(n - h(y) - 1)`-spherical
    pub upper_spherical: bool,
    /// `f/y` is homologically `h(y)`-spherical
    pub fiber_spherical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphericalMapReport {
    pub n: isize,
    pub per_element: Vec<PerElementCheck>,
    /// `h(f(x)) >= h(x)` for every source element
    pub heights_monotone: bool,
    pub surjective: bool,
    pub missed_element: Option<String>,
    /// `dim X = dim Y = n`
    pub dims_match: bool,
    pub pass: bool,
}

/// Check Definition "homologically n-spherical map" elementwise, with the
/// height/surjectivity/dimension side checks asserted alongside.
pub fn check_spherical_map(f: &PosetMap, n: isize) -> SphericalMapReport {
    let mut per_element = Vec::new();
    for y in 0..f.target.len() {
        let h = f.target.height(y) as isize;
        let upper = f.target.strict_upper(y);
        let fiber = f.fiber(y).expect("y in range");
        per_element.push(PerElementCheck {
            element: f.target.label(y).to_string(),
            height: h as usize,
            upper_spherical: poset_is_homologically_spherical(&upper, n - h - 1),
            fiber_spherical: poset_is_homologically_spherical(&fiber, h),
        });
    }
    let heights_monotone = (0..f.source.len())
        .all(|x| f.target.height(f.apply(x)) >= f.source.height(x));
    let missed = (0..f.target.len()).find(|y| !f.assignment.contains(y));
    let dims_match = f.source.dim() == n && f.target.dim() == n;
    let pass = per_element
        .iter()
        .all(|c| c.upper_spherical && c.fiber_spherical)
        && heights_monotone
        && missed.is_none()
        && dims_match;
    SphericalMapReport {
        n,
        per_element,
        heights_monotone,
        surjective: missed.is_none(),
        missed_element: missed.map(|y| f.target.label(y).to_string()),
        dims_match,
        pass,
    }
}

// ---------------------------------------------------------------------------
// Rank-level decomposition over a spherical map
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SummandRank {
    pub element: String,
    pub fiber_rank: usize,
    pub upper_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: isize,
    pub target_rank: usize,
    pub summands: Vec<SummandRank>,
    pub combined: usize,
    pub source_rank: usize,
    pub identity_holds: bool,
}

/// Rank identity: `rank H̃_n(X) = rank H̃_n(Y) + Σ_y fiber·upper`, all sides
/// computed independently by Smith normal form.
pub fn top_homology_decomposition(f: &PosetMap, n: isize) -> Result<DecompositionReport> {
    let report = check_spherical_map(f, n);
    if !report.pass {
        return Err(Error::HypothesisFailed(
            "map is not homologically spherical".into(),
        ));
    }
    if !poset_is_homologically_spherical(&f.target, n) {
        return Err(Error::HypothesisFailed(
            "target is not homologically spherical".into(),
        ));
    }
    let target_rank = homology_of_poset(&f.target).rank(n);
    let mut summands = Vec::new();
    for y in 0..f.target.len() {
        let h = f.target.height(y) as isize;
        let fiber_rank = homology_of_poset(&f.fiber(y)?).rank(h);
        let upper_rank = homology_of_poset(&f.target.strict_upper(y)).rank(n - h - 1);
        summands.push(SummandRank {
            element: f.target.label(y).to_string(),
            fiber_rank,
            upper_rank,
        });
    }
    let combined = target_rank
        + summands
            .iter()
            .map(|s| s.fiber_rank * s.upper_rank)
            .sum::<usize>();
    let source_rank = homology_of_poset(&f.source).rank(n);
    Ok(DecompositionReport {
        n,
        target_rank,
        summands,
        combined,
        source_rank,
        identity_holds: combined == source_rank,
    })
}

// ---------------------------------------------------------------------------
// Chain-level machinery for the basis construction
// ---------------------------------------------------------------------------

/// Push a chain forward along a vertex map between complexes (simplicial
/// map on order complexes): degenerate simplices die, the rest are sorted
/// with the permutation sign.
fn push_chain(c: &Chain, map: impl Fn(usize) -> usize) -> Chain {
    let mut out = Chain::zero(c.degree);
    'simplex: for (s, coeff) in &c.coeffs {
        let imgs: Vec<usize> = s.iter().map(|&v| map(v)).collect();
        // degeneracy check
        let set: BTreeSet<usize> = imgs.iter().copied().collect();
        if set.len() != imgs.len() {
            continue 'simplex;
        }
        // sort with sign
        let mut perm: Vec<usize> = (0..imgs.len()).collect();
        perm.sort_by_key(|&i| imgs[i]);
        let mut sorted: Vec<usize> = perm.iter().map(|&i| imgs[i]).collect();
        let mut inversions = 0;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let signed = if inversions % 2 == 0 {
            coeff.clone()
        } else {
            -coeff.clone()
        };
        sorted.shrink_to_fit();
        out.add_term(sorted, signed);
    }
    out
}

/// Kernel basis of the top boundary map as chains, with the matrix of
/// column vectors and its left inverse.
struct TopCycles {
    cc: IntegerChainComplex,
    degree: isize,
    chains: Vec<Chain>,
    columns: ZMatrix,
    left_inv: Option<ZMatrix>,
}

fn top_cycles(k: &SimplicialComplex, degree: isize) -> Result<TopCycles> {
    let cc = IntegerChainComplex::from_complex(k);
    let d = cc.boundary_matrix(degree);
    let kernel = crate::zmatrix::kernel_basis(&d);
    let rows = cc.rank_of_degree(degree);
    let mut columns = ZMatrix::zero(rows, kernel.len());
    for (j, col) in kernel.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                columns.set(i, j, v.clone());
            }
        }
    }
    let chains = kernel
        .iter()
        .map(|v| cc.vec_to_chain(degree, v))
        .collect();
    let left_inv = left_inverse(&columns);
    Ok(TopCycles {
        cc,
        degree,
        chains,
        columns,
        left_inv,
    })
}

impl TopCycles {
    fn rank(&self) -> usize {
        self.chains.len()
    }

    fn express(&self, c: &Chain) -> Result<Vec<BigInt>> {
        let w = self.cc.chain_to_vec(c)?;
        let l = self
            .left_inv
            .as_ref()
            .ok_or_else(|| Error::HypothesisFailed("kernel basis is not saturated".into()))?;
        express_in_columns(&self.columns, l, &w).ok_or_else(|| {
            Error::NotABasis(format!("a degree-{} chain is not a cycle combination", self.degree))
        })
    }

    fn combine(&self, coeffs: &[BigInt]) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (c, z) in coeffs.iter().zip(&self.chains) {
            out = out.add(&z.scale(c));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Hypotheses (i)-(iii)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct HypothesesReport {
    /// (i): f(σ1) <= f(σ2) implies lk(σ2, K) ⊆ lk(σ1, K)
    pub link_reversal: Verdict,
    /// (ii): unions map compatibly
    pub union_compat: Verdict,
    /// (iii): the upper maps are epimorphisms in the relevant degree
    pub upper_epi: Verdict,
}

impl HypothesesReport {
    pub fn all_pass(&self) -> bool {
        self.link_reversal.passed() && self.union_compat.passed() && self.upper_epi.passed()
    }
}

// ---------------------------------------------------------------------------
// Constructive top-homology basis certificate
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct BasisCertificate {
    pub n: isize,
    pub gamma_count: usize,
    /// per target element: (label, |I_y|, |J_y|)
    pub summand_counts: Vec<(String, usize, usize)>,
    pub rank: usize,
    /// coordinates of the candidate classes in the kernel basis (row per
    /// candidate)
    pub matrix: Vec<Vec<BigInt>>,
    pub determinant: BigInt,
    pub unimodular: bool,
    /// number of (y, i, j) pairs whose chain identity was verified exactly
    pub chain_identity_pairs: usize,
    pub hypotheses: HypothesesReport,
    pub epimorphism: bool,
}

/// Budget for the exhaustive hypothesis (ii) scan.
const UNION_CHECK_BUDGET: usize = 50_000_000;

/// Run the full constructive pipeline for a spherical map
/// `f: X(K) -> Y`. `f.source` must be the face poset of `k` (same element
/// order as [`face_poset`] produces).
pub fn top_homology_basis(k: &SimplicialComplex, f: &PosetMap, n: isize) -> Result<BasisCertificate> {
    let fp = face_poset(k);
    if fp.poset.labels() != f.source.labels() {
        return Err(Error::InvalidParameters(
            "map source is not the face poset of the complex".into(),
        ));
    }
    let spherical = check_spherical_map(f, n);
    if !spherical.pass {
        return Err(Error::HypothesisFailed(
            "map is not homologically spherical".into(),
        ));
    }
    if !poset_is_homologically_spherical(&f.target, n) {
        return Err(Error::HypothesisFailed(
            "target is not homologically spherical".into(),
        ));
    }

    let hypotheses = check_hypotheses(k, &fp, f, n)?;
    if !hypotheses.all_pass() {
        return Err(Error::HypothesisFailed(format!(
            "hypotheses not verified: {:?}",
            hypotheses
        )));
    }

    // top cycles of K and of K(Y)
    let x_cycles = top_cycles(k, n)?;
    let y_complex = f.target.order_complex();
    let y_cycles = top_cycles(&y_complex, n)?;
    let lambda = SubdivisionOperator::new(&fp);

    // f_* on top homology: subdivide, push along f, express in Y's cycles
    let push_f = |c: &Chain| -> Result<Chain> {
        Ok(push_chain(&lambda.on_chain(c)?, |p| f.apply(p)))
    };
    let mut a = ZMatrix::zero(y_cycles.rank(), x_cycles.rank());
    for (j, z) in x_cycles.chains.iter().enumerate() {
        let w = y_cycles.express(&push_f(z)?)?;
        for (i, v) in w.iter().enumerate() {
            if !v.is_zero() {
                a.set(i, j, v.clone());
            }
        }
    }
    let epimorphism = is_surjective(&a);
    if !epimorphism {
        return Err(Error::HypothesisFailed(
            "induced map on top homology is not an epimorphism".into(),
        ));
    }

    // γ lifts: columns of Z·Γ with A·Γ = I
    let gamma_coeffs = right_inverse(&a).ok_or_else(|| {
        Error::HypothesisFailed("no integral right inverse for the induced map".into())
    })?;
    let gammas: Vec<Chain> = (0..y_cycles.rank())
        .map(|i| x_cycles.combine(&gamma_coeffs.column(i)))
        .collect();

    // per-element summands
    let mut candidates: Vec<Chain> = gammas.clone();
    let mut summand_counts = Vec::new();
    let mut chain_identity_pairs = 0usize;
    for y in 0..f.target.len() {
        let summand = summand_classes(k, &fp, f, n, y, &lambda)?;
        summand_counts.push((
            f.target.label(y).to_string(),
            summand.fiber_rank,
            summand.upper_rank,
        ));
        chain_identity_pairs += summand.pairs_checked;
        for alpha in &summand.alphas {
            for beta in &summand.betas {
                candidates.push(chain_join(alpha, beta)?);
            }
        }
    }

    // change of basis against the SNF kernel basis of H̃_n(K)
    let rank = x_cycles.rank();
    if candidates.len() != rank {
        return Err(Error::NotABasis(format!(
            "{} candidates for rank {}",
            candidates.len(),
            rank
        )));
    }
    let mut matrix = Vec::new();
    for c in &candidates {
        matrix.push(x_cycles.express(c)?);
    }
    let m = ZMatrix::from_rows(matrix.clone());
    let determinant = if rank == 0 { BigInt::one() } else { m.det() };
    let unimodular = determinant.abs() == BigInt::one();
    if !unimodular {
        return Err(Error::NotABasis(format!(
            "certificate determinant {determinant}; matrix {matrix:?}"
        )));
    }

    Ok(BasisCertificate {
        n,
        gamma_count: gammas.len(),
        summand_counts,
        rank,
        matrix,
        determinant,
        unimodular,
        chain_identity_pairs,
        hypotheses,
        epimorphism,
    })
}

/// Hypotheses (i)-(iii) of the basis construction, checked exhaustively
/// (with a budget on the quadratic union scan).
fn check_hypotheses(
    k: &SimplicialComplex,
    fp: &FacePoset,
    f: &PosetMap,
    n: isize,
) -> Result<HypothesesReport> {
    let nx = fp.poset.len();
    // links once per element
    let links: Vec<SimplicialComplex> = fp
        .simplices
        .iter()
        .map(|s| k.link(s))
        .collect::<Result<Vec<_>>>()?;

    // (i)
    let mut link_reversal = Verdict::Yes;
    'outer_i: for s1 in 0..nx {
        for s2 in 0..nx {
            if f.target.leq(f.apply(s1), f.apply(s2)) {
                let ok = links[s2].simplices().all(|t| links[s1].contains(t));
                if !ok {
                    link_reversal = Verdict::No(format!(
                        "lk({}) ⊄ lk({})",
                        fp.poset.label(s2),
                        fp.poset.label(s1)
                    ));
                    break 'outer_i;
                }
            }
        }
    }

    // (ii): over pairs (σ1 <=_f σ2), (τ1 <=_f τ2) with both unions simplices
    let comparable: Vec<(usize, usize)> = (0..nx)
        .flat_map(|a| (0..nx).map(move |b| (a, b)))
        .filter(|&(a, b)| f.target.leq(f.apply(a), f.apply(b)))
        .collect();
    let mut union_compat = Verdict::Yes;
    let mut ops = 0usize;
    'outer_ii: for &(s1, s2) in &comparable {
        for &(t1, t2) in &comparable {
            ops += 1;
            if ops > UNION_CHECK_BUDGET {
                union_compat = Verdict::UnknownAtBudget(format!(
                    "union compatibility scan stopped after {UNION_CHECK_BUDGET} checks"
                ));
                break 'outer_ii;
            }
            let u1 = sorted_union(&fp.simplices[s1], &fp.simplices[t1]);
            let u2 = sorted_union(&fp.simplices[s2], &fp.simplices[t2]);
            if let (Some(i1), Some(i2)) = (fp.index_of(&u1), fp.index_of(&u2)) {
                if !f.target.leq(f.apply(i1), f.apply(i2)) {
                    union_compat = Verdict::No(format!(
                        "f({}) !<= f({})",
                        fp.poset.label(i1),
                        fp.poset.label(i2)
                    ));
                    break 'outer_ii;
                }
            }
        }
    }

    // (iii): for every y and every σ in the preimage, the upper map is epi
    // in degree n - h(y) - 1 (checked at cycle level, which covers homology)
    let lambda = SubdivisionOperator::new(fp);
    let mut upper_epi = Verdict::Yes;
    'outer_iii: for y in 0..f.target.len() {
        let h = f.target.height(y) as isize;
        let m = n - h - 1;
        for sigma in (0..nx).filter(|&s| f.apply(s) == y) {
            let a = upper_map_matrix(k, fp, f, y, sigma, m, &lambda)?;
            if !is_surjective(&a) {
                upper_epi = Verdict::No(format!(
                    "upper map at ({}, {}) not epi in degree {}",
                    f.target.label(y),
                    fp.poset.label(sigma),
                    m
                ));
                break 'outer_iii;
            }
        }
    }

    Ok(HypothesesReport {
        link_reversal,
        union_compat,
        upper_epi,
    })
}

fn sorted_union(a: &[usize], b: &[usize]) -> Simplex {
    let mut u: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Matrix of `τ ↦ f(σ ∪ τ)` from the degree-`m` cycles of `lk(σ, K)` to the
/// top cycles of `Y_{>y}`.
fn upper_map_matrix(
    k: &SimplicialComplex,
    fp: &FacePoset,
    f: &PosetMap,
    y: usize,
    sigma: usize,
    m: isize,
    lambda: &SubdivisionOperator,
) -> Result<ZMatrix> {
    let link = k.link(&fp.simplices[sigma])?;
    let link_cycles = top_cycles(&link, m)?;
    let keep: Vec<usize> = (0..f.target.len()).filter(|&z| f.target.lt(y, z)).collect();
    let upper = f.target.subposet(&keep).0;
    let upper_complex = upper.order_complex();
    let upper_cycles = top_cycles(&upper_complex, m)?;
    let pos_in_upper = |z: usize| keep.iter().position(|&w| w == z).expect("z above y");

    let sigma_simplex = &fp.simplices[sigma];
    let mut a = ZMatrix::zero(upper_cycles.rank(), link_cycles.rank());
    for (j, z) in link_cycles.chains.iter().enumerate() {
        // f̃(τ) = f(σ ∪ τ): subdivide in K, push via the union
        let subdivided = lambda.on_chain(z)?;
        let pushed = push_chain(&subdivided, |p| {
            let union = sorted_union(sigma_simplex, &fp.simplices[p]);
            let idx = fp.index_of(&union).expect("union is a simplex by (i)");
            pos_in_upper(f.apply(idx))
        });
        let w = upper_cycles.express(&pushed)?;
        for (i, v) in w.iter().enumerate() {
            if !v.is_zero() {
                a.set(i, j, v.clone());
            }
        }
    }
    Ok(a)
}

/// The per-element summand data: `{α_i}` (basis of the top homology of
/// `K_y`), `{β_j}` (cycles of `lk(x, K)` hitting a basis of the top
/// homology of `Y_{>y}`), the two factor ranks, and the number of pairs
/// whose chain identity was verified in `M_{h(y)+1}`.
struct SummandClasses {
    alphas: Vec<Chain>,
    betas: Vec<Chain>,
    fiber_rank: usize,
    upper_rank: usize,
    pairs_checked: usize,
}

fn summand_classes(
    k: &SimplicialComplex,
    fp: &FacePoset,
    f: &PosetMap,
    n: isize,
    y: usize,
    lambda: &SubdivisionOperator,
) -> Result<SummandClasses> {
    let h = f.target.height(y) as isize;
    let m = n - h - 1;

    // K_y = {σ : f(σ) <= y}
    let ky_simplices: BTreeSet<Simplex> = (0..fp.poset.len())
        .filter(|&s| f.target.leq(f.apply(s), y))
        .map(|s| fp.simplices[s].clone())
        .collect();
    let ky = SimplicialComplex::from_simplex_family(k.labels().to_vec(), ky_simplices);
    let ky_cycles = top_cycles(&ky, h)?;
    let alphas = ky_cycles.chains.clone();

    let keep: Vec<usize> = (0..f.target.len()).filter(|&z| f.target.lt(y, z)).collect();
    let upper = f.target.subposet(&keep).0;
    let upper_cycles = top_cycles(&upper.order_complex(), m)?;
    let fiber_rank = alphas.len();
    let upper_rank = upper_cycles.rank();
    if fiber_rank == 0 || upper_rank == 0 {
        // the summand is trivial; no pairs to build or verify
        return Ok(SummandClasses {
            alphas,
            betas: Vec::new(),
            fiber_rank,
            upper_rank,
            pairs_checked: 0,
        });
    }

    // choice of x in the preimage (the link is independent of it by (i))
    let x = (0..fp.poset.len())
        .find(|&s| f.apply(s) == y)
        .ok_or_else(|| Error::HypothesisFailed("empty preimage".into()))?;
    let x_simplex = fp.simplices[x].clone();
    let link = k.link(&x_simplex)?;
    let link_cycles = top_cycles(&link, m)?;
    let pos_in_upper = |z: usize| keep.iter().position(|&w| w == z).expect("z above y");

    // solve for β: upper map applied to link cycles hits the basis
    let f_tilde = |c: &Chain| -> Result<Chain> {
        let subdivided = lambda.on_chain(c)?;
        Ok(push_chain(&subdivided, |p| {
            let union = sorted_union(&x_simplex, &fp.simplices[p]);
            let idx = fp.index_of(&union).expect("union is a simplex by (i)");
            pos_in_upper(f.apply(idx))
        }))
    };
    let mut a = ZMatrix::zero(upper_cycles.rank(), link_cycles.rank());
    for (j, z) in link_cycles.chains.iter().enumerate() {
        let w = upper_cycles.express(&f_tilde(z)?)?;
        for (i, v) in w.iter().enumerate() {
            if !v.is_zero() {
                a.set(i, j, v.clone());
            }
        }
    }
    let beta_coeffs = right_inverse(&a).ok_or_else(|| {
        Error::HypothesisFailed(format!(
            "no integral lift for the upper classes at {}",
            f.target.label(y)
        ))
    })?;
    let betas: Vec<Chain> = (0..upper_cycles.rank())
        .map(|i| link_cycles.combine(&beta_coeffs.column(i)))
        .collect();

    // chain identity in M_{h+1} for every pair used
    let pairs_checked = verify_chain_identity(k, fp, f, y, &x_simplex, &alphas, &betas, lambda)?;
    Ok(SummandClasses {
        alphas,
        betas,
        fiber_rank,
        upper_rank,
        pairs_checked,
    })
}

/// The identity `φ((α*β)') = α' * f̃(β')` in the cycles of `K(M_{r+1})`,
/// `r = h(y)`: both sides are computed as explicit chains over the elements
/// of the subposet `M_{r+1} = X ∪ {y' : h(y') >= r+1}` of the mapping
/// cylinder and compared exactly.
#[allow(clippy::too_many_arguments)]
fn verify_chain_identity(
    k: &SimplicialComplex,
    fp: &FacePoset,
    f: &PosetMap,
    y: usize,
    x_simplex: &Simplex,
    alphas: &[Chain],
    betas: &[Chain],
    lambda: &SubdivisionOperator,
) -> Result<usize> {
    let r = f.target.height(y) as isize;
    let nx = fp.poset.len();
    // element indices of M_{r+1}: X elements keep their index; the kept
    // target elements follow
    let kept_targets: Vec<usize> = (0..f.target.len())
        .filter(|&z| f.target.height(z) as isize > r)
        .collect();
    let pos_of_target =
        |z: usize| nx + kept_targets.iter().position(|&w| w == z).expect("kept");

    // φ: height < r+1 stays in X, otherwise drops to f
    let phi = |p: usize| -> usize {
        if (fp.simplices[p].len() as isize - 1) < r + 1 {
            p
        } else {
            pos_of_target(f.apply(p))
        }
    };

    let mut checked = 0usize;
    for alpha in alphas {
        for beta in betas {
            let joined = chain_join(alpha, beta)?;
            for s in joined.coeffs.keys() {
                if !k.contains(s) {
                    return Err(Error::HypothesisFailed(format!(
                        "join simplex {s:?} is not in the complex"
                    )));
                }
            }
            let lhs = push_chain(&lambda.on_chain(&joined)?, phi);

            let alpha_sub = lambda.on_chain(alpha)?; // chains of X-part elements
            let beta_pushed = push_chain(&lambda.on_chain(beta)?, |p| {
                let union = sorted_union(x_simplex, &fp.simplices[p]);
                let idx = fp.index_of(&union).expect("union is a simplex by (i)");
                pos_of_target(f.apply(idx))
            });
            let rhs = chain_join(&alpha_sub, &beta_pushed)?;

            if lhs != rhs {
                return Err(Error::HypothesisFailed(format!(
                    "chain identity fails at {} (pair degrees {}, {})",
                    f.target.label(y),
                    alpha.degree,
                    beta.degree
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

// ---------------------------------------------------------------------------
// Admissible instance generator
// ---------------------------------------------------------------------------

pub mod gen {
    //! Seeded generator of admissible spherical maps: inflations of small
    //! Cohen-Macaulay base complexes (joins of points, simplex boundaries,
    //! simplices and cycles), mapped onto the face poset of the base by
    //! forgetting copies. Fibers are joins of discrete sets (octahedral
    //! spheres when every multiplicity is 2); upper sets are links in the
    //! base, spherical because the blocks are.

    use super::*;
    use crate::topology::complex::{
        boundary_of_simplex, complex_join, cycle_complex, discrete_points, full_simplex,
    };
    use rand::Rng;

    #[derive(Clone, Debug)]
    pub struct AdmissibleInstance {
        pub complex: SimplicialComplex,
        pub map: PosetMap,
        pub n: isize,
    }

    fn random_block<R: Rng>(rng: &mut R) -> SimplicialComplex {
        match rng.gen_range(0..5) {
            0 => discrete_points(rng.gen_range(1..=3)),
            1 => boundary_of_simplex(2),
            2 => full_simplex(rng.gen_range(0..=1)),
            3 => cycle_complex(rng.gen_range(3..=4)),
            _ => discrete_points(2),
        }
    }

    /// Base complex: a join of blocks, capped in dimension and size.
    fn random_base<R: Rng>(rng: &mut R) -> SimplicialComplex {
        let mut q = random_block(rng);
        for _ in 0..2 {
            if q.dim() >= 2 || q.labels().len() >= 5 {
                break;
            }
            if rng.gen_bool(0.5) {
                let b = discrete_points(rng.gen_range(1..=2));
                q = complex_join(&q, &b);
            }
        }
        q
    }

    /// Inflation: every vertex `v` of the base becomes `c_v >= 1` copies;
    /// a simplex is a copy-choice over a base simplex.
    fn inflate<R: Rng>(rng: &mut R, base: &SimplicialComplex) -> (SimplicialComplex, Vec<usize>) {
        let nv = base.labels().len();
        let mut mult = Vec::with_capacity(nv);
        for _ in 0..nv {
            mult.push(if rng.gen_bool(0.45) { 2 } else { 1 });
        }
        // bias: make sure at least one vertex is inflated
        if mult.iter().all(|&c| c == 1) {
            let i = rng.gen_range(0..nv);
            mult[i] = 2;
        }
        let mut labels = Vec::new();
        let mut first_copy = vec![0usize; nv];
        for (v, &m) in mult.iter().enumerate() {
            first_copy[v] = labels.len();
            for c in 0..m {
                labels.push(format!("{}@{}", base.labels()[v], c));
            }
        }
        // lift every base facet to all copy choices
        let base_facets: Vec<Simplex> = base
            .simplices()
            .filter(|s| {
                !base
                    .simplices()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .cloned()
            .collect();
        let mut facets = Vec::new();
        for bf in &base_facets {
            let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
            for &v in bf {
                let mut next = Vec::new();
                for partial in &choices {
                    for c in 0..mult[v] {
                        let mut p = partial.clone();
                        p.push(first_copy[v] + c);
                        next.push(p);
                    }
                }
                choices = next;
            }
            facets.extend(choices);
        }
        let k = SimplicialComplex::from_facets(labels, facets).expect("facets in range");
        // copy -> base vertex
        let mut owner = Vec::new();
        for (v, &m) in mult.iter().enumerate() {
            owner.extend(std::iter::repeat_n(v, m));
        }
        (k, owner)
    }

    /// One admissible instance: inflated base with the copy-forgetting map
    /// onto the base's face poset.
    pub fn random_admissible_instance<R: Rng>(rng: &mut R) -> AdmissibleInstance {
        let base = random_base(rng);
        let n = base.dim();
        let (k, owner) = inflate(rng, &base);
        let fp_k = face_poset(&k);
        let fp_q = face_poset(&base);
        let assignment: Vec<usize> = fp_k
            .simplices
            .iter()
            .map(|s| {
                let mut blocks: Simplex = s.iter().map(|&v| owner[v]).collect();
                blocks.sort_unstable();
                blocks.dedup();
                fp_q.index_of(&blocks).expect("block set is a base simplex")
            })
            .collect();
        let map = PosetMap::new(fp_k.poset, fp_q.poset.clone(), assignment)
            .expect("block map is order preserving");
        AdmissibleInstance {
            complex: k,
            map,
            n,
        }
    }
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

#[derive(serde::Deserialize)]
pub struct PosetMapJson {
    pub source: crate::topology::PosetJson,
    pub target: crate::topology::PosetJson,
    pub assignment: std::collections::BTreeMap<String, String>,
}

impl PosetMap {
    pub fn from_json(j: &PosetMapJson) -> Result<PosetMap> {
        let source = FinitePoset::from_json(&j.source)?;
        let target = FinitePoset::from_json(&j.target)?;
        let mut assignment = Vec::with_capacity(source.len());
        for x in 0..source.len() {
            let label = source.label(x);
            let image = j
                .assignment
                .get(label)
                .ok_or_else(|| Error::ElementNotFound(format!("assignment for `{label}`")))?;
            let yi = target
                .index_of(image)
                .ok_or_else(|| Error::ElementNotFound(format!("target element `{image}`")))?;
            assignment.push(yi);
        }
        PosetMap::new(source, target, assignment)
    }
}

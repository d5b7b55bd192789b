//! Augmented integer chain complexes of simplicial complexes, formal chains,
//! the barycentric subdivision operator, and the join of chains.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * a `k`-simplex is its sorted vertex list; `∂[u_0..u_k] = Σ (-1)^i` faces,
//!   `∂[v] = ∅` (degree -1 is first class: the empty simplex generates it);
//! * the barycentric subdivision of a simplex is oriented by increasing face
//!   dimension; `λ(σ) = (-1)^{dim σ} (λ(∂σ) coned with the barycenter)`,
//!   which makes `λ` a chain map on the nose;
//! * the join of a `p`-chain and a `q`-chain multiplies by `(-1)^{q+1}` and
//!   by the parity of the merge into sorted order, which yields
//!   `d(α*β) = dα*β + (-1)^p α*dβ` for all `p, q >= -1`.

use super::complex::{Simplex, SimplicialComplex};
use super::poset::FacePoset;
use crate::error::{Error, Result};
use crate::zmatrix::ZMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A formal integer combination of simplices of one degree (`degree = -1`
/// allows only the empty simplex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: isize,
    pub coeffs: BTreeMap<Simplex, BigInt>,
}

impl Chain {
    pub fn zero(degree: isize) -> Chain {
        Chain {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_simplex(s: Simplex) -> Chain {
        let degree = s.len() as isize - 1;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(s, BigInt::from(1));
        Chain { degree, coeffs }
    }

    /// The generator of degree -1.
    pub fn empty_simplex() -> Chain {
        Chain::from_simplex(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, s: Simplex, c: BigInt) {
        debug_assert_eq!(s.len() as isize - 1, self.degree);
        let entry = self.coeffs.entry(s).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            // remove the key again; re-borrowing is simplest
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Chain {
        if c.is_zero() {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, x)| (s.clone(), x * c))
                .collect(),
        }
    }

    pub fn neg(&self) -> Chain {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.neg())
    }

    /// Augmented simplicial boundary.
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero(self.degree - 1);
        for (s, c) in &self.coeffs {
            if s.is_empty() {
                continue; // ∂∅ = 0
            }
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { c.clone() } else { -c.clone() };
                out.add_term(face, sign);
            }
        }
        out
    }

    /// All vertices in the support.
    pub fn support_vertices(&self) -> std::collections::BTreeSet<usize> {
        self.coeffs.keys().flatten().copied().collect()
    }
}

/// Join of two chains with disjoint supports inside a common ambient vertex
/// order. Satisfies `d(α*β) = dα*β + (-1)^{deg α} α*dβ`, with the empty
/// simplex as a legal factor (`α * ∅ = α`).
pub fn chain_join(alpha: &Chain, beta: &Chain) -> Result<Chain> {
    let out_degree = alpha.degree + beta.degree + 1;
    let mut out = Chain::zero(out_degree);
    for (s, cs) in &alpha.coeffs {
        for (t, ct) in &beta.coeffs {
            // merge sign: parity of moving each t-vertex past larger s-vertices
            let mut inversions = 0usize;
            for &u in s {
                for &w in t {
                    if u == w {
                        return Err(Error::InvalidParameters(format!(
                            "chain join with overlapping supports at vertex {u}"
                        )));
                    }
                    if u > w {
                        inversions += 1;
                    }
                }
            }
            let mut merged: Simplex = s.iter().chain(t.iter()).copied().collect();
            merged.sort_unstable();
            // total sign: (-1)^{deg β + 1} = (-1)^{len(t)} times the merge parity
            let sign_positive = (t.len() % 2 == 0) ^ (inversions % 2 == 1);
            let coeff = if sign_positive {
                cs * ct
            } else {
                -(cs * ct)
            };
            out.add_term(merged, coeff);
        }
    }
    Ok(out)
}

/// The augmented integer chain complex of a simplicial complex, with ordered
/// simplex bases per degree and one boundary matrix per degree.
#[derive(Clone, Debug)]
pub struct IntegerChainComplex {
    dim: isize,
    /// `bases[(d + 1) as usize]` is the basis in degree `d`, `d = -1..=dim`.
    bases: Vec<Vec<Simplex>>,
    /// `boundaries[(d + 1) as usize]` is the matrix of `d_d: C_d -> C_{d-1}`.
    boundaries: Vec<ZMatrix>,
}

impl IntegerChainComplex {
    pub fn from_complex(k: &SimplicialComplex) -> IntegerChainComplex {
        let dim = k.dim();
        let mut bases: Vec<Vec<Simplex>> = vec![vec![Vec::new()]]; // degree -1
        for d in 0..=dim {
            bases.push(k.simplices_of_dim(d));
        }
        let mut boundaries = Vec::new();
        for d in -1..=dim {
            let cols = &bases[(d + 1) as usize];
            let rows = if d == -1 {
                0
            } else {
                bases[d as usize].len()
            };
            let mut m = ZMatrix::zero(rows, cols.len());
            if d >= 0 {
                let row_index: BTreeMap<&Simplex, usize> = bases[d as usize]
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s, i))
                    .collect();
                for (j, s) in cols.iter().enumerate() {
                    let b = Chain::from_simplex(s.clone()).boundary();
                    for (face, c) in &b.coeffs {
                        let i = row_index[face];
                        m.set(i, j, c.clone());
                    }
                }
            }
            boundaries.push(m);
        }
        IntegerChainComplex {
            dim,
            bases,
            boundaries,
        }
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn basis(&self, degree: isize) -> &[Simplex] {
        static EMPTY: Vec<Simplex> = Vec::new();
        if degree < -1 || degree > self.dim {
            return &EMPTY;
        }
        &self.bases[(degree + 1) as usize]
    }

    pub fn rank_of_degree(&self, degree: isize) -> usize {
        self.basis(degree).len()
    }

    /// Matrix of `d_degree: C_degree -> C_{degree-1}`. Out of range gives an
    /// appropriately shaped zero matrix.
    pub fn boundary_matrix(&self, degree: isize) -> ZMatrix {
        if degree < -1 || degree > self.dim {
            let rows = self.rank_of_degree(degree - 1);
            let cols = self.rank_of_degree(degree);
            return ZMatrix::zero(rows, cols);
        }
        self.boundaries[(degree + 1) as usize].clone()
    }

    pub fn chain_to_vec(&self, c: &Chain) -> Result<Vec<BigInt>> {
        let basis = self.basis(c.degree);
        let mut v = vec![BigInt::zero(); basis.len()];
        for (s, coeff) in &c.coeffs {
            match basis.iter().position(|b| b == s) {
                Some(i) => v[i] = coeff.clone(),
                None => {
                    return Err(Error::ElementNotFound(format!(
                        "simplex {s:?} not in degree {}",
                        c.degree
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn vec_to_chain(&self, degree: isize, v: &[BigInt]) -> Chain {
        let basis = self.basis(degree);
        let mut c = Chain::zero(degree);
        for (s, coeff) in basis.iter().zip(v) {
            if !coeff.is_zero() {
                c.add_term(s.clone(), coeff.clone());
            }
        }
        c
    }

    /// `d ∘ d = 0` in every degree.
    pub fn verify_dd_zero(&self) -> bool {
        (0..=self.dim).all(|d| {
            self.boundary_matrix(d - 1)
                .mul(&self.boundary_matrix(d))
                .is_zero_matrix()
        })
    }
}

// ---------------------------------------------------------------------------
// Barycentric subdivision operator
// ---------------------------------------------------------------------------

/// The subdivision operator `λ : C(K) -> C(K')`, where `K'` is the order
/// complex of the face poset. Vertices of `K'` are face-poset element
/// indices (ordered by increasing dimension, so chains are ascending).
pub struct SubdivisionOperator<'a> {
    fp: &'a FacePoset,
    memo: std::cell::RefCell<BTreeMap<Simplex, Chain>>,
}

impl<'a> SubdivisionOperator<'a> {
    pub fn new(fp: &'a FacePoset) -> SubdivisionOperator<'a> {
        SubdivisionOperator {
            fp,
            memo: std::cell::RefCell::new(BTreeMap::new()),
        }
    }

    /// Cone a chain of `K'` on the barycenter vertex `b` (which has higher
    /// dimension, hence higher index, than everything in the chain).
    fn cone(&self, c: &Chain, b: usize) -> Chain {
        let mut out = Chain::zero(c.degree + 1);
        for (s, coeff) in &c.coeffs {
            debug_assert!(s.last().is_none_or(|&last| last < b));
            let mut t = s.clone();
            t.push(b);
            out.add_term(t, coeff.clone());
        }
        out
    }

    /// `λ` on a single simplex of `K` (including the empty simplex).
    pub fn on_simplex(&self, s: &Simplex) -> Result<Chain> {
        if s.is_empty() {
            return Ok(Chain::empty_simplex());
        }
        if let Some(hit) = self.memo.borrow().get(s) {
            return Ok(hit.clone());
        }
        let b = self
            .fp
            .index_of(s)
            .ok_or_else(|| Error::ElementNotFound(format!("simplex {s:?} in face poset")))?;
        let boundary = Chain::from_simplex(s.clone()).boundary();
        let mut acc = Chain::zero(s.len() as isize - 1);
        for (face, coeff) in &boundary.coeffs {
            let sub = self.on_simplex(face)?;
            acc = acc.add(&self.cone(&sub, b).scale(coeff));
        }
        let k = s.len() as isize - 1;
        let result = if k % 2 == 0 { acc } else { acc.neg() };
        self.memo.borrow_mut().insert(s.clone(), result.clone());
        Ok(result)
    }

    /// `λ` on a chain.
    pub fn on_chain(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(c.degree);
        for (s, coeff) in &c.coeffs {
            out = out.add(&self.on_simplex(s)?.scale(coeff));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::complex::{boundary_of_simplex, full_simplex};
    use crate::topology::poset::face_poset;

    #[test]
    fn boundary_squares_to_zero() {
        for k in [boundary_of_simplex(3), full_simplex(3)] {
            let cc = IntegerChainComplex::from_complex(&k);
            assert!(cc.verify_dd_zero());
        }
    }

    #[test]
    fn vertex_boundary_is_augmentation() {
        let c = Chain::from_simplex(vec![3]);
        let b = c.boundary();
        assert_eq!(b.degree, -1);
        assert_eq!(b.coeffs.len(), 1);
        assert_eq!(b.coeffs[&Vec::new()], BigInt::from(1));
        assert!(Chain::empty_simplex().boundary().is_zero());
    }

    #[test]
    fn subdivision_of_edge() {
        // λ[u,v] = [u, uv] + [uv, v]: as sorted chains, [u,uv] - [v,uv]
        let k = SimplicialComplex::from_facet_labels(vec![vec!["u", "v"]]).unwrap();
        let fp = face_poset(&k);
        let lambda = SubdivisionOperator::new(&fp);
        let c = lambda.on_simplex(&vec![0, 1]).unwrap();
        let iu = fp.index_of(&[0]).unwrap();
        let iv = fp.index_of(&[1]).unwrap();
        let iuv = fp.index_of(&[0, 1]).unwrap();
        assert_eq!(c.coeffs.len(), 2);
        assert_eq!(c.coeffs[&vec![iu, iuv]], BigInt::from(1));
        assert_eq!(c.coeffs[&vec![iv, iuv]], BigInt::from(-1));
    }

    #[test]
    fn subdivision_is_chain_map() {
        // λ(∂σ) = ∂λ(σ) for every simplex of ∂Δ² and of Δ³
        for k in [boundary_of_simplex(2), full_simplex(3)] {
            let fp = face_poset(&k);
            let lambda = SubdivisionOperator::new(&fp);
            for s in k.simplices() {
                let lhs = lambda.on_chain(&Chain::from_simplex(s.clone()).boundary()).unwrap();
                let rhs = lambda.on_simplex(s).unwrap().boundary();
                assert_eq!(lhs, rhs, "chain map fails on {s:?}");
            }
        }
    }

    #[test]
    fn chain_join_signs() {
        // point * point = oriented edge (with the (-1)^{q+1} convention)
        let p = Chain::from_simplex(vec![0]);
        let q = Chain::from_simplex(vec![5]);
        let e = chain_join(&p, &q).unwrap();
        assert_eq!(e.degree, 1);
        assert_eq!(e.coeffs[&vec![0, 5]], BigInt::from(-1));
        // empty simplex is a right identity
        let alpha = Chain::from_simplex(vec![2, 4]);
        assert_eq!(chain_join(&alpha, &Chain::empty_simplex()).unwrap(), alpha);
        // overlap is an error
        assert!(chain_join(&p, &p).is_err());
    }

    #[test]
    fn chain_join_leibniz() {
        // d(α*β) = dα*β + (-1)^{|α|} α*dβ on assorted degree pairs,
        // including the degree -1 factor
        let cases: Vec<(Chain, Chain)> = vec![
            (Chain::from_simplex(vec![0]), Chain::from_simplex(vec![3])),
            (
                Chain::from_simplex(vec![0, 1]),
                Chain::from_simplex(vec![3, 7]),
            ),
            (
                Chain::from_simplex(vec![0, 2, 4]),
                Chain::from_simplex(vec![5, 7]),
            ),
            (Chain::empty_simplex(), Chain::from_simplex(vec![1, 2])),
            (Chain::from_simplex(vec![1, 2]), Chain::empty_simplex()),
            (
                Chain::from_simplex(vec![1, 4]).add(&Chain::from_simplex(vec![2, 4]).neg()),
                Chain::from_simplex(vec![0]).add(&Chain::from_simplex(vec![3])),
            ),
        ];
        for (alpha, beta) in cases {
            let lhs = chain_join(&alpha, &beta).unwrap().boundary();
            let mut rhs = chain_join(&alpha.boundary(), &beta).unwrap();
            let second = chain_join(&alpha, &beta.boundary()).unwrap();
            rhs = if alpha.degree % 2 == 0 {
                rhs.add(&second)
            } else {
                rhs.sub(&second)
            };
            assert_eq!(lhs, rhs, "Leibniz fails for degrees {} , {}", alpha.degree, beta.degree);
        }
    }
}

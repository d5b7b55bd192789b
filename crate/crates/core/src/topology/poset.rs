//! Finite posets: order complexes, face posets, joins, links, heights,
//! opposites. The order relation is stored as the full reflexive-transitive
//! comparability matrix, validated at construction.

use super::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    /// `leq[i][j]` iff element `i <= j`.
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Build from generating relation pairs `(a, b)` meaning `a <= b`.
    /// The reflexive-transitive closure is computed; antisymmetry is checked.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<FinitePoset> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidParameters(format!(
                    "relation ({a}, {b}) out of range 0..{n}"
                )));
            }
            leq[a][b] = true;
        }
        // Floyd-Warshall style transitive closure
        for k in 0..n {
            let through_k = leq[k].clone();
            for row in leq.iter_mut() {
                if row[k] {
                    for (j, &reach) in through_k.iter().enumerate() {
                        if reach {
                            row[j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::NotPartialOrder(format!(
                        "antisymmetry fails: {} <= {} <= {}",
                        labels[i], labels[j], labels[i]
                    )));
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn antichain(labels: Vec<String>) -> FinitePoset {
        FinitePoset::new(labels, &[]).expect("antichain is a poset")
    }

    pub fn chain(k: usize) -> FinitePoset {
        let labels = (0..k).map(|i| format!("c{i}")).collect();
        let rels: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
        FinitePoset::new(labels, &rels).expect("chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Induced subposet; elements keep their relative order and labels.
    /// Returns the new poset and the kept original indices in order.
    pub fn subposet(&self, keep: &[usize]) -> (FinitePoset, Vec<usize>) {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let m = keep.len();
        let mut leq = vec![vec![false; m]; m];
        for (i2, row) in leq.iter_mut().enumerate() {
            for (j2, val) in row.iter_mut().enumerate() {
                *val = self.leq[keep[i2]][keep[j2]];
            }
        }
        (FinitePoset { labels, leq }, keep.to_vec())
    }

    /// `X_{>x}`.
    pub fn strict_upper(&self, x: usize) -> FinitePoset {
        let keep: Vec<usize> = (0..self.len()).filter(|&y| self.lt(x, y)).collect();
        self.subposet(&keep).0
    }

    /// `X_{<x}`.
    pub fn strict_lower(&self, x: usize) -> FinitePoset {
        let keep: Vec<usize> = (0..self.len()).filter(|&y| self.lt(y, x)).collect();
        self.subposet(&keep).0
    }

    /// `X_{<=x}`.
    pub fn weak_lower(&self, x: usize) -> FinitePoset {
        let keep: Vec<usize> = (0..self.len()).filter(|&y| self.leq[y][x]).collect();
        self.subposet(&keep).0
    }

    /// `lk(x, X) = X_{<x} * X_{>x}`, realized as the induced subposet on the
    /// elements comparable with (and different from) `x`.
    pub fn link(&self, x: usize) -> FinitePoset {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&y| y != x && (self.leq[y][x] || self.leq[x][y]))
            .collect();
        self.subposet(&keep).0
    }

    /// The opposite poset.
    pub fn opposite(&self) -> FinitePoset {
        let n = self.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            for (j, val) in row.iter_mut().enumerate() {
                *val = self.leq[j][i];
            }
        }
        FinitePoset {
            labels: self.labels.clone(),
            leq,
        }
    }

    /// Height `h(x)`: the dimension of the order complex of `X_{<=x}`,
    /// i.e. the length of the longest chain ending at `x`.
    pub fn height(&self, x: usize) -> usize {
        fn go(p: &FinitePoset, x: usize, memo: &mut [Option<usize>]) -> usize {
            if let Some(h) = memo[x] {
                return h;
            }
            let h = (0..p.len())
                .filter(|&y| p.lt(y, x))
                .map(|y| go(p, y, memo) + 1)
                .max()
                .unwrap_or(0);
            memo[x] = Some(h);
            h
        }
        let mut memo = vec![None; self.len()];
        go(self, x, &mut memo)
    }

    /// `dim K(X)`: length of the longest chain minus one, -1 when empty.
    pub fn dim(&self) -> isize {
        (0..self.len())
            .map(|x| self.height(x) as isize)
            .max()
            .unwrap_or(-1)
    }

    /// All nonempty chains, as sorted index vectors (the simplices of the
    /// order complex).
    fn chains(&self) -> BTreeSet<Simplex> {
        let n = self.len();
        let mut out = BTreeSet::new();
        // grow chains upward; every chain's sorted index vector is recorded
        fn extend(
            p: &FinitePoset,
            chain: &mut Vec<usize>,
            top: usize,
            out: &mut BTreeSet<Simplex>,
        ) {
            let mut sorted = chain.clone();
            sorted.sort_unstable();
            out.insert(sorted);
            for y in 0..p.len() {
                if p.lt(top, y) {
                    chain.push(y);
                    extend(p, chain, y, out);
                    chain.pop();
                }
            }
        }
        for x in 0..n {
            let mut chain = vec![x];
            extend(self, &mut chain, x, &mut out);
        }
        out
    }

    /// The order complex `K(X)`: vertices are the elements, simplices the
    /// nonempty chains.
    pub fn order_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplex_family(self.labels.clone(), self.chains())
    }
}

/// Join of posets: disjoint union with every element of `x1` below every
/// element of `x2`. Labels are tagged `1:`/`2:` exactly as in the complex
/// join, so `K(X1 * X2) = K(X1) * K(X2)` holds on the nose.
pub fn poset_join(x1: &FinitePoset, x2: &FinitePoset) -> FinitePoset {
    let n1 = x1.len();
    let n2 = x2.len();
    let mut labels: Vec<String> = x1.labels.iter().map(|l| format!("1:{l}")).collect();
    labels.extend(x2.labels.iter().map(|l| format!("2:{l}")));
    let n = n1 + n2;
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        for (j, val) in row.iter_mut().enumerate() {
            *val = if i < n1 && j < n1 {
                x1.leq[i][j]
            } else if i >= n1 && j >= n1 {
                x2.leq[i - n1][j - n1]
            } else {
                // every element of the first factor sits below the second
                i < n1 && j >= n1
            };
        }
    }
    FinitePoset { labels, leq }
}

/// The face poset `X(K)`: simplices ordered by inclusion. Elements are
/// sorted by (dimension, lexicographic), so barycentric orientation by
/// increasing face dimension coincides with the element order.
pub struct FacePoset {
    pub poset: FinitePoset,
    /// the simplex of `K` behind each poset element
    pub simplices: Vec<Simplex>,
}

pub fn face_poset(k: &SimplicialComplex) -> FacePoset {
    let mut simplices: Vec<Simplex> = k.simplices().cloned().collect();
    simplices.sort_by_key(|s| (s.len(), s.clone()));
    let labels: Vec<String> = simplices
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.iter().map(|&v| k.labels()[v].as_str()).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let n = simplices.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = simplices[i].iter().all(|v| simplices[j].contains(v));
        }
    }
    FacePoset {
        poset: FinitePoset { labels, leq },
        simplices,
    }
}

impl FacePoset {
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let mut key = s.to_vec();
        key.sort_unstable();
        self.simplices.iter().position(|t| *t == key)
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
}

impl FinitePoset {
    pub fn to_json(&self) -> PosetJson {
        let mut relations = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.lt(i, j) {
                    // only covering relations, to keep files small
                    let covers = (0..self.len())
                        .all(|k| k == i || k == j || !(self.lt(i, k) && self.lt(k, j)));
                    if covers {
                        relations.push((self.labels[i].clone(), self.labels[j].clone()));
                    }
                }
            }
        }
        PosetJson {
            elements: self.labels.clone(),
            relations,
        }
    }

    pub fn from_json(j: &PosetJson) -> Result<FinitePoset> {
        let index = |s: &str| -> Result<usize> {
            j.elements
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::ElementNotFound(format!("element `{s}`")))
        };
        let relations = j
            .relations
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        FinitePoset::new(j.elements.clone(), &relations)
    }
}

//! Dense matrices over arbitrary-precision integers: determinants, Smith
//! normal form with unimodular transforms, integer kernels and right inverses.
//!
//! Entries are `BigInt` throughout; intermediate values in elimination can
//! outgrow any fixed width even for small inputs, so no fixed-width fast path
//! is offered.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ZMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ZMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ZMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ZMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        ZMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut t = ZMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.get(i, j).is_zero() {
                    t.set(j, i, self.get(i, j).clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = ZMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc += a * vj;
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j).clone();
            if s.is_zero() {
                continue;
            }
            let idx = dst * self.cols + j;
            self.data[idx] += q * &s;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src).clone();
            if s.is_zero() {
                continue;
            }
            let idx = i * self.cols + dst;
            self.data[idx] += q * &s;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            if !self.data[idx].is_zero() {
                let v = std::mem::take(&mut self.data[idx]);
                self.data[idx] = -v;
            }
        }
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }
}

/// Result of a Smith normal form computation: `u * m * v = s` with `u`, `v`
/// unimodular and `s` diagonal with each invariant factor dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: ZMatrix,
    pub u: ZMatrix,
    pub v: ZMatrix,
}

impl Snf {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).filter(|&i| !self.s.get(i, i).is_zero()).count()
    }

    /// Diagonal entries > 1 (the torsion coefficients of the cokernel).
    pub fn torsion(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s.get(i, i).clone())
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }
}

/// Nearest-integer quotient: minimises |a - q*b|.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let mut q = a.div_floor(b);
    let r = a - &q * b; // 0 <= r < |b|
    if &r * 2 > b.abs() {
        q += b.signum();
    }
    q
}

/// Smith normal form with transform tracking. Pivot selection follows the
/// least-absolute-value rule to control entry growth.
pub fn smith_normal_form(m: &ZMatrix) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = ZMatrix::identity(rows);
    let mut v = ZMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // Select the nonzero entry of least absolute value in a[t.., t..].
        let mut pivot: Option<(usize, usize)>;
        'outer: loop {
            pivot = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if a.get(pi, pj).abs() <= x.abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => break 'outer, // remaining submatrix is zero
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if !a.get(i, t).is_zero() {
                    let q = -div_round(a.get(i, t), &p);
                    a.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if !a.get(t, j).is_zero() {
                    let q = -div_round(a.get(t, j), &p);
                    a.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Row and column of the pivot are clear; enforce divisibility of
            // the remaining block by folding a bad row into row t.
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(a.get(i, j) % &p).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if pivot.is_none() {
            break;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { s: a, u, v }
}

/// Basis of the integer kernel of `m` (as a saturated direct summand):
/// the columns of `v` matching the zero columns of the Smith form.
pub fn kernel_basis(m: &ZMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// A right inverse `x` with `m * x = I`, if one exists over the integers
/// (all invariant factors 1 and full row rank).
pub fn right_inverse(m: &ZMatrix) -> Option<ZMatrix> {
    let snf = smith_normal_form(m);
    let rk = snf.rank();
    if rk < m.rows() {
        return None;
    }
    if (0..rk).any(|i| !snf.s.get(i, i).is_one()) {
        return None;
    }
    // x = v * s' * u with s'[i][i] = 1 for i < rows.
    let mut sp = ZMatrix::zero(m.cols(), m.rows());
    for i in 0..m.rows() {
        sp.set(i, i, BigInt::one());
    }
    Some(snf.v.mul(&sp).mul(&snf.u))
}

/// True iff the map `Z^cols -> Z^rows` given by `m` is surjective.
pub fn is_surjective(m: &ZMatrix) -> bool {
    let snf = smith_normal_form(m);
    snf.rank() == m.rows() && (0..m.rows()).all(|i| snf.s.get(i, i).is_one())
}

/// A left inverse `x` with `x * m = I` (columns independent and spanning a
/// saturated sublattice), if one exists.
pub fn left_inverse(m: &ZMatrix) -> Option<ZMatrix> {
    let snf = smith_normal_form(m);
    let rk = snf.rank();
    if rk < m.cols() {
        return None;
    }
    if (0..rk).any(|i| !snf.s.get(i, i).is_one()) {
        return None;
    }
    // x = v * s' * u with s'[i][i] = 1 for i < cols.
    let mut sp = ZMatrix::zero(m.cols(), m.rows());
    for i in 0..m.cols() {
        sp.set(i, i, BigInt::one());
    }
    Some(snf.v.mul(&sp).mul(&snf.u))
}

/// Coordinates of `w` in the column lattice of `b` (which must admit a left
/// inverse); `None` when `w` is outside the span.
pub fn express_in_columns(b: &ZMatrix, l: &ZMatrix, w: &[BigInt]) -> Option<Vec<BigInt>> {
    let x = l.mul_vec(w);
    let back = b.mul_vec(&x);
    if back == w {
        Some(x)
    } else {
        None
    }
}

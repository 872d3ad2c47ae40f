//! Dense exact linear algebra over `ℚ(i)`.
//!
//! Vectors are plain `Vec<GR>` coordinate columns; subspaces are lists of
//! spanning vectors. Rank goes through fraction-free elimination over `ℤ[i]`,
//! while kernels and solutions use reduced row echelon form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::scalar::{GaussInt, Rational, GR};
use crate::error::{Error, Result};

pub type Vector = Vec<GR>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GR>,
}

impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GR::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GR::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GR>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| GR::from_int(x)).collect()).collect())
    }

    pub fn diagonal(d: &[GR]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GR] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GR::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn conj_transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(GR::conj).collect() }
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GR]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &GR) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `[self; below]`
    pub fn vstack(&self, below: &Matrix) -> Matrix {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Matrix { rows: self.rows + below.rows, cols: self.cols, data }
    }

    /// `[self | right]`
    pub fn hstack(&self, right: &Matrix) -> Matrix {
        assert_eq!(self.rows, right.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + right.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..right.cols {
                m[(i, self.cols + j)] = right[(i, j)].clone();
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_rows(
            rows.iter().map(|&i| cols.iter().map(|&j| self[(i, j)].clone()).collect()).collect(),
        )
    }

    /// Exact rank by fraction-free (Bareiss) elimination over `ℤ[i]`.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<GaussInt>> = (0..self.rows).map(|i| integral_row(self.row(i))).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = GaussInt { re: BigInt::one(), im: BigInt::zero() };
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (top, rest) = a.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pivot = &pivot_row[c];
            for row in rest.iter_mut() {
                let lead = row[c].clone();
                for j in c + 1..cols {
                    let num = pivot.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                    row[j] = num
                        .exact_div(&prev)
                        .expect("fraction-free elimination: inexact division");
                }
                row[c] = GaussInt { re: BigInt::zero(), im: BigInt::zero() };
            }
            prev = pivot.clone();
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and the list of pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                let x = &m[(r, j)] * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let delta = &f * &m[(r, j)];
                    m[(i, j)] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of `{v : Mv = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![GR::zero(); self.cols];
                v[f] = GR::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Some `x` with `Mx = y`, or `None` when `y` is outside the column space.
    pub fn solve(&self, y: &[GR]) -> Option<Vector> {
        assert_eq!(y.len(), self.rows, "right-hand side length");
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[y.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![GR::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        assert_eq!(self.mul_vec(&x), y, "solve: residual check failed");
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.submatrix(&(0..n).collect::<Vec<_>>(), &cols))
    }

    pub fn determinant(&self) -> GR {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = GR::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return GR::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let delta = &f * &m[(c, j)];
                    m[(i, j)] -= &delta;
                }
            }
        }
        det
    }

    pub fn trace(&self) -> GR {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Leading principal minors `det M[0..k, 0..k]` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<GR> {
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).determinant()
            })
            .collect()
    }

    /// Strict positive-definiteness of a Hermitian matrix via leading principal minors.
    pub fn is_pos_def_hermitian(&self) -> Result<bool> {
        if !self.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        Ok(self.leading_minors().iter().all(|m| {
            debug_assert!(m.is_real());
            m.re.is_positive()
        }))
    }

    /// Coefficients `c_0..c_n` of `det(x·I − M) = Σ c_k x^k` (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<GR> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![GR::zero(); n + 1];
        coeffs[n] = GR::one();
        let mut m_k = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I ; c_{n-k} = -tr(A·M_k)/k
            let mut next = self.mul(&m_k);
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let c = -(self.mul(&next).trace().scale(&Rational::new(BigInt::one(), BigInt::from(k))));
            coeffs[n - k] = c;
            m_k = next;
        }
        coeffs
    }

    /// Positive semi-definiteness of a Hermitian matrix: the characteristic
    /// polynomial `Σ c_k x^k` has `(-1)^{n-k} c_k ≥ 0` for all `k`.
    pub fn is_pos_semidef_hermitian(&self) -> Result<bool> {
        if !self.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let n = self.rows;
        Ok(self.char_poly().iter().enumerate().all(|(k, c)| {
            debug_assert!(c.is_real());
            if (n - k) % 2 == 0 {
                !c.re.is_negative()
            } else {
                !c.re.is_positive()
            }
        }))
    }
}

fn integral_row(row: &[GR]) -> Vec<GaussInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, &x.denom_lcm()));
    let lr = Rational::from_integer(l);
    row.iter()
        .map(|x| {
            let re = &x.re * &lr;
            let im = &x.im * &lr;
            GaussInt { re: re.to_integer(), im: im.to_integer() }
        })
        .collect()
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = GR;
    fn index(&self, (i, j): (usize, usize)) -> &GR {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GR {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Subspaces given by spanning lists.

/// Dimension of `span(vs)` inside `k^dim`.
pub fn span_dim(dim: usize, vs: &[Vector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs.to_vec()).rank().min(dim)
}

/// `dim(span A + span B)`.
pub fn subspace_sum_dim(dim: usize, a: &[Vector], b: &[Vector]) -> usize {
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    span_dim(dim, &all)
}

/// A linearly independent sublist spanning the same space, kept in input order.
pub fn independent_subset(dim: usize, vs: &[Vector]) -> Vec<Vector> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (_, pivots) = Matrix::from_columns(dim, vs).rref();
    pivots.into_iter().map(|j| vs[j].clone()).collect()
}

/// Whether `v ∈ span(vs)`.
pub fn in_span(dim: usize, vs: &[Vector], v: &[GR]) -> bool {
    if v.iter().all(GR::is_zero) {
        return true;
    }
    if vs.is_empty() {
        return false;
    }
    Matrix::from_columns(dim, vs).solve(v).is_some()
}

/// `span A ⊆ span B`.
pub fn contained_in(dim: usize, a: &[Vector], b: &[Vector]) -> bool {
    a.iter().all(|v| in_span(dim, b, v))
}

/// Exact subspace equality by double inclusion.
pub fn same_span(dim: usize, a: &[Vector], b: &[Vector]) -> bool {
    contained_in(dim, a, b) && contained_in(dim, b, a)
}

/// Basis of `span A ∩ span B` (Zassenhaus-free: kernel of `[A | -B]`).
pub fn intersection(dim: usize, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let a = independent_subset(dim, a);
    let b = independent_subset(dim, b);
    let neg_b: Vec<Vector> = b.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    let m = Matrix::from_columns(dim, &a).hstack(&Matrix::from_columns(dim, &neg_b));
    let out: Vec<Vector> = m
        .kernel()
        .into_iter()
        .map(|k| lin_comb(dim, &a, &k[..a.len()]))
        .collect();
    independent_subset(dim, &out)
}

pub fn lin_comb(dim: usize, vs: &[Vector], coeffs: &[GR]) -> Vector {
    let mut out = vec![GR::zero(); dim];
    for (v, c) in vs.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += &(c * x);
            }
        }
    }
    out
}

pub fn vec_add(a: &[GR], b: &[GR]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[GR], b: &[GR]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[GR], c: &GR) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vec(v: &[GR]) -> bool {
    v.iter().all(GR::is_zero)
}

/// `⟨x, y⟩_G = yᴴ G x`; linear in the first slot, conjugate-linear in the second.
pub fn inner(g: &Matrix, x: &[GR], y: &[GR]) -> GR {
    let gx = g.mul_vec(x);
    y.iter().zip(&gx).map(|(a, b)| a.conj() * b).sum()
}

/// G-orthogonal projection of `v` onto `span W`.
pub fn orth_project(v: &[GR], w: &[Vector], g: &Matrix) -> Result<Vector> {
    if !g.is_pos_def_hermitian()? {
        return Err(Error::NotPositiveDefinite);
    }
    let dim = v.len();
    let w = independent_subset(dim, w);
    if w.is_empty() {
        return Ok(vec![GR::zero(); dim]);
    }
    // Normal equations: Σ_b c_b ⟨w_b, w_a⟩ = ⟨v, w_a⟩.
    let k = w.len();
    let gram = Matrix::from_rows(
        (0..k).map(|a| (0..k).map(|b| inner(g, &w[b], &w[a])).collect()).collect(),
    );
    let rhs: Vector = (0..k).map(|a| inner(g, v, &w[a])).collect();
    let c = gram.solve(&rhs).ok_or_else(|| Error::Inconsistent("singular Gram system".into()))?;
    Ok(lin_comb(dim, &w, &c))
}

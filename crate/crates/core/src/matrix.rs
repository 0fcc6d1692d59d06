//! Dense matrices over a [`Scalar`] backend.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{CopeError, Result};
use crate::field::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds for {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds for {}x{}", self.rows, self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc + &(x.clone() * y);
    }
    acc
}

pub fn axpy<T: Scalar>(alpha: &T, x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(a, b)| alpha.clone() * a + b).collect()
}

pub fn sub_vec<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn add_vec<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn scale_vec<T: Scalar>(alpha: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| alpha.clone() * x).collect()
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match {rows}x{cols}");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if let Some((i, bad)) = rows.iter().enumerate().find(|(_, x)| x.len() != c) {
            return Err(CopeError::Dimension(format!("row {i} has {} entries, expected {c}", bad.len())));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map(|x| x.len()).unwrap_or(0);
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.data[i * self.cols + j].clone()).collect()
    }
    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }
    pub fn col_vecs(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn column_vector(v: &[T]) -> Self {
        Matrix::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(CopeError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + &(a.clone() * b);
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    /// Product for shapes already known to agree.
    pub fn mm(&self, other: &Self) -> Self {
        self.mul(other).expect("matrix shapes agree")
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(&self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + &other[(i, j)])
    }
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - &other[(i, j)])
    }
    pub fn scale(&self, alpha: &T) -> Self {
        self.map(|x| alpha.clone() * x)
    }

    /// Entrywise comparison with the backend's notion of zero.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn col_sums(&self) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |acc, i| acc + &self[(i, j)]))
            .collect()
    }
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + &self[(i, j)]))
            .collect()
    }

    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(|x| x.bit_size()).max().unwrap_or(0)
    }

    fn pick_pivot(&self, col: usize, from: usize) -> Option<usize> {
        if T::is_exact() {
            (from..self.rows).find(|&i| !self[(i, col)].is_zero())
        } else {
            let mut best: Option<(usize, f64)> = None;
            for i in from..self.rows {
                let v = self[(i, col)].to_f64().abs();
                if !self[(i, col)].is_zero() && best.map_or(true, |(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
            best.map(|(i, _)| i)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = T::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(c, r) else { continue };
            m.swap_rows(r, p);
            let piv = m[(r, c)].clone();
            for i in r + 1..m.rows {
                let lead = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = (piv.clone() * &m[(i, j)] - &(lead.clone() * &m[(r, j)])) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = piv;
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and pivot columns (first independent columns, left to right).
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(c, r) else {
                for i in r..m.rows {
                    m[(i, c)] = T::zero();
                }
                continue;
            };
            m.swap_rows(r, p);
            let piv = m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() / &piv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    if i != r {
                        m[(i, c)] = T::zero();
                    }
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - &(f.clone() * &m[(r, j)]);
                    m[(i, j)] = v;
                }
                m[(i, c)] = T::zero();
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel {x : M x = 0}, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &p) in piv.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solve A X = B for square invertible A.
    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.rows != self.cols || rhs.rows != self.rows {
            return Err(CopeError::Dimension(format!(
                "solve needs a square system, got {}x{} with rhs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let n = self.rows;
        let (r, piv) = self.hstack(rhs).rref();
        if piv.len() < n || piv[n - 1] >= n {
            let dep = (0..n).find(|c| !piv.contains(c)).unwrap_or(n - 1);
            return Err(CopeError::RankDeficient(format!("column {dep} is linearly dependent")));
        }
        Ok(r.block(0, n, n, rhs.cols))
    }

    pub fn inverse(&self) -> Result<Matrix<T>> {
        self.solve(&Matrix::identity(self.rows))
    }

    /// Solve the square system for one right-hand side, or None if singular.
    pub fn solve_vec(&self, b: &[T]) -> Option<Vec<T>> {
        self.solve(&Matrix::column_vector(b)).ok().map(|x| x.col(0))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && self.approx_eq(&Matrix::identity(self.rows))
    }
}

/// Left pseudoinverse (G^T G)^{-1} G^T of a full-column-rank matrix.
pub fn pseudoinverse_full_col_rank<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>> {
    let (_, piv) = g.rref();
    if piv.len() < g.cols() {
        let dep = (0..g.cols()).find(|c| !piv.contains(c)).unwrap_or(0);
        return Err(CopeError::RankDeficient(format!(
            "column {dep} depends on the columns before it"
        )));
    }
    let gt = g.transpose();
    gt.mm(g).solve(&gt)
}

/// Right pseudoinverse G^T (G G^T)^{-1} of a full-row-rank matrix, via the transpose.
pub fn pseudoinverse_full_row_rank<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(pseudoinverse_full_col_rank(&g.transpose())?.transpose())
}

/// Gram-Schmidt without normalization; dependent vectors are dropped.
pub fn gram_schmidt<T: Scalar>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    let mut norms: Vec<T> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (b, nb) in basis.iter().zip(&norms) {
            let c = dot(&w, b) / nb;
            if !c.is_zero() {
                w = axpy(&-c, b, &w);
            }
        }
        let nw = dot(&w, &w);
        if !nw.is_zero() {
            basis.push(w);
            norms.push(nw);
        }
    }
    basis
}

/// Orthogonal (not normalized) bases of the row space and the right kernel.
pub fn orthogonal_bases<T: Scalar>(g: &Matrix<T>) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let rows = gram_schmidt(&g.row_vecs());
    let kernel = gram_schmidt(&g.kernel());
    (rows, kernel)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankSeparation {
    EqualRanks(usize),
    Separated { rank_r: usize, rank_e: usize },
}

/// Compares rank R and rank E of a factorization.
pub fn check_rank_separation<T: Scalar>(r_factor: &Matrix<T>, e_factor: &Matrix<T>) -> Result<RankSeparation> {
    if r_factor.cols() != e_factor.rows() {
        return Err(CopeError::Dimension(format!(
            "R is {}x{} but E is {}x{}",
            r_factor.rows(),
            r_factor.cols(),
            e_factor.rows(),
            e_factor.cols()
        )));
    }
    let (a, b) = (r_factor.rank(), e_factor.rank());
    Ok(if a == b { RankSeparation::EqualRanks(a) } else { RankSeparation::Separated { rank_r: a, rank_e: b } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticScalar as Q;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Q::int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn ranks() {
        let bw = m(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        assert_eq!(bw.rank(), 3);
        assert_eq!(Matrix::<Q>::identity(4).rank(), 4);
        assert_eq!(Matrix::<Q>::zeros(2, 3).rank(), 0);
    }

    #[test]
    fn rref_pivots_are_leftmost() {
        let a = m(&[&[1, 2, 1], &[2, 4, 0]]);
        let (_, piv) = a.rref();
        assert_eq!(piv, vec![0, 2]);
    }

    #[test]
    fn pseudoinverse_examples() {
        let i3 = Matrix::<Q>::identity(3);
        assert_eq!(pseudoinverse_full_col_rank(&i3).unwrap(), i3);
        let v = m(&[&[1], &[1]]);
        let p = pseudoinverse_full_col_rank(&v).unwrap();
        assert_eq!(p, Matrix::from_rows(vec![vec![Q::frac(1, 2), Q::frac(1, 2)]]).unwrap());
        let dep = m(&[&[1, 2], &[1, 2]]);
        assert!(matches!(pseudoinverse_full_col_rank(&dep), Err(CopeError::RankDeficient(_))));
    }

    #[test]
    fn bases() {
        let (r, k) = orthogonal_bases(&Matrix::<Q>::identity(3));
        assert_eq!(r.len(), 3);
        assert!(k.is_empty());
        let (r, k) = orthogonal_bases(&m(&[&[1, 1]]));
        assert_eq!(r, vec![vec![Q::int(1), Q::int(1)]]);
        assert_eq!(k.len(), 1);
        assert!(dot(&k[0], &r[0]).is_zero());
    }

    #[test]
    fn separation() {
        let bw = m(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        assert_eq!(
            check_rank_separation(&bw, &Matrix::identity(4)).unwrap(),
            RankSeparation::Separated { rank_r: 3, rank_e: 4 }
        );
        let i = Matrix::<Q>::identity(2);
        assert_eq!(check_rank_separation(&i, &i).unwrap(), RankSeparation::EqualRanks(2));
    }
}

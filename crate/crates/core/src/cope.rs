//! COPE matrices, their two normal forms and rank factorizations.

use crate::error::{CopeError, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// One column-stochastic block per measurement.
    A,
    /// Globally column-stochastic.
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CopeMatrix<T: Scalar> {
    data: Matrix<T>,
    block_heights: Vec<usize>,
    form: Form,
}

impl<T: Scalar> CopeMatrix<T> {
    pub fn data(&self) -> &Matrix<T> {
        &self.data
    }
    pub fn block_heights(&self) -> &[usize] {
        &self.block_heights
    }
    pub fn form(&self) -> Form {
        self.form
    }
    /// Number of measurements.
    pub fn l(&self) -> usize {
        self.block_heights.len()
    }
    pub fn rows(&self) -> usize {
        self.data.rows()
    }
    pub fn cols(&self) -> usize {
        self.data.cols()
    }
    /// Column sum in A-form: l; in B-form: 1.
    pub fn column_total(&self) -> T {
        match self.form {
            Form::A => T::from_int(self.l() as i64),
            Form::B => T::one(),
        }
    }
    pub fn rank(&self) -> usize {
        self.data.rank()
    }
}

/// Checks nonnegativity, block stochasticity and the absence of zero rows/columns.
pub fn validate_cope<T: Scalar>(data: Matrix<T>, block_heights: &[usize]) -> Result<CopeMatrix<T>> {
    let (m, n) = data.shape();
    if m == 0 || n == 0 {
        return Err(CopeError::Invalid("empty matrix".into()));
    }
    if block_heights.is_empty() || block_heights.iter().any(|&h| h == 0) {
        return Err(CopeError::Invalid("block heights must be positive".into()));
    }
    let total: usize = block_heights.iter().sum();
    if total != m {
        return Err(CopeError::Invalid(format!("block heights sum to {total} but the matrix has {m} rows")));
    }
    for i in 0..m {
        for j in 0..n {
            if data[(i, j)].is_negative() {
                return Err(CopeError::Invalid(format!("negative entry {} at row {i}, column {j}", data[(i, j)])));
            }
        }
    }
    let mut start = 0;
    for (b, &h) in block_heights.iter().enumerate() {
        for j in 0..n {
            let s = (start..start + h).fold(T::zero(), |acc, i| acc + &data[(i, j)]);
            if !s.approx_eq(&T::one()) {
                return Err(CopeError::Invalid(format!(
                    "block {b} column {j} sums to {s}, not 1"
                )));
            }
        }
        start += h;
    }
    for i in 0..m {
        if data.row(i).iter().all(|x| x.is_zero()) {
            return Err(CopeError::Invalid(format!("row {i} is zero")));
        }
    }
    for j in 0..n {
        if data.col(j).iter().all(|x| x.is_zero()) {
            return Err(CopeError::Invalid(format!("column {j} is zero")));
        }
    }
    Ok(CopeMatrix { data, block_heights: block_heights.to_vec(), form: Form::A })
}

/// Divides by the number of measurements so that every column sums to one.
pub fn to_b_form<T: Scalar>(c: &CopeMatrix<T>) -> CopeMatrix<T> {
    if c.form == Form::B {
        return c.clone();
    }
    let l = T::from_int(c.l() as i64);
    CopeMatrix {
        data: c.data.map(|x| x.clone() / &l),
        block_heights: vec![c.rows()],
        form: Form::B,
    }
}

/// C = left * right with inner dimension rank C and column-stochastic right factor.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFactorization<T: Scalar> {
    pub left: Matrix<T>,
    pub right: Matrix<T>,
    pub inner_dim: usize,
    /// Vector u with 1^T left = l u^T.
    pub unit_effect: Vec<T>,
}

pub fn rank_factorize<T: Scalar>(c: &CopeMatrix<T>) -> RankFactorization<T> {
    let data = c.data();
    let (rref, pivots) = data.rref();
    let r = pivots.len();
    let a = data.select_cols(&pivots);
    let b = rref.block(0, 0, r, data.cols());
    // diagonal rescale by the unit effect so that the right factor is column stochastic
    let total = c.column_total();
    let u: Vec<T> = a.col_sums().into_iter().map(|s| s / &total).collect();
    let left = Matrix::from_fn(a.rows(), r, |i, j| a[(i, j)].clone() / &u[j]);
    let right = Matrix::from_fn(r, b.cols(), |i, j| u[i].clone() * &b[(i, j)]);
    let unit_effect = left.col_sums().into_iter().map(|s| s / &total).collect();
    RankFactorization { left, right, inner_dim: r, unit_effect }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticScalar as Q;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Q::int(v)).collect()).collect()).unwrap()
    }

    fn boxworld() -> CopeMatrix<Q> {
        validate_cope(m(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]), &[2, 2]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(boxworld().l(), 2);
        assert!(validate_cope(Matrix::<Q>::identity(2), &[2]).is_ok());
        let neg = Matrix::from_rows(vec![vec![Q::frac(11, 10), Q::int(1)], vec![Q::frac(-1, 10), Q::int(0)]]).unwrap();
        let err = validate_cope(neg, &[2]).unwrap_err();
        assert!(err.to_string().contains("negative entry"), "{err}");
        let bad = m(&[&[1, 1], &[1, 0]]);
        assert!(validate_cope(bad, &[2]).unwrap_err().to_string().contains("block 0 column 0"));
        assert!(validate_cope(m(&[&[1, 0], &[0, 1]]), &[1]).is_err());
    }

    #[test]
    fn b_form() {
        let b = to_b_form(&boxworld());
        assert_eq!(b.data()[(0, 0)], Q::frac(1, 2));
        assert!(b.data().col_sums().iter().all(|s| *s == Q::int(1)));
        let id = validate_cope(Matrix::<Q>::identity(3), &[3]).unwrap();
        assert_eq!(to_b_form(&id).data(), id.data());
    }

    #[test]
    fn factorization_round_trip() {
        let c = boxworld();
        let f = rank_factorize(&c);
        assert_eq!(f.inner_dim, 3);
        assert_eq!(f.left.mm(&f.right), *c.data());
        assert!(f.right.col_sums().iter().all(|s| *s == Q::int(1)));
        let id = validate_cope(Matrix::<Q>::identity(3), &[3]).unwrap();
        let f = rank_factorize(&id);
        assert!(f.left.is_identity() && f.right.is_identity());
    }
}

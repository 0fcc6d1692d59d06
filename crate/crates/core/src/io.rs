//! JSON and CSV file formats for matrices and COPE matrices.
//!
//! Entries use the scalar text grammar. A row or column may carry a shared
//! radical factor sqrt(w) (`scaled_rows` / `scaled_cols`), which keeps matrices
//! such as rotation-based factors inside Q(sqrt d) entry by entry.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cope::{validate_cope, CopeMatrix};
use crate::error::{CopeError, Result};
use crate::field::{parse_float, Float, QuadraticScalar, Scalar, DEFAULT_RADICAND};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledLine {
    pub index: usize,
    /// w, the line is multiplied by sqrt(w)
    pub radical: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default = "default_radicand")]
    pub radicand: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_heights: Option<Vec<usize>>,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scaled_rows: Vec<ScaledLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scaled_cols: Vec<ScaledLine>,
}

fn default_radicand() -> u32 {
    DEFAULT_RADICAND
}

/// Exact matrix whose rows/columns may be multiplied by square roots of field elements.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalMatrix {
    pub base: Matrix<QuadraticScalar>,
    pub row_radicals: Vec<Option<QuadraticScalar>>,
    pub col_radicals: Vec<Option<QuadraticScalar>>,
}

impl RadicalMatrix {
    pub fn plain(base: Matrix<QuadraticScalar>) -> Self {
        let (r, c) = base.shape();
        RadicalMatrix { base, row_radicals: vec![None; r], col_radicals: vec![None; c] }
    }

    pub fn is_plain(&self) -> bool {
        self.row_radicals.iter().chain(&self.col_radicals).all(|x| x.is_none())
    }

    pub fn into_plain(self) -> Result<Matrix<QuadraticScalar>> {
        if !self.is_plain() {
            return Err(CopeError::Invalid(
                "matrix has radical-scaled lines and no exact representation; use the float backend".into(),
            ));
        }
        Ok(self.base)
    }

    /// Numerical values with every radical applied.
    pub fn to_float(&self) -> Matrix<Float> {
        let rad = |w: &Option<QuadraticScalar>| w.as_ref().map_or(1.0, |w| w.to_f64().sqrt());
        Matrix::from_fn(self.base.rows(), self.base.cols(), |i, j| {
            Float(self.base[(i, j)].to_f64() * rad(&self.row_radicals[i]) * rad(&self.col_radicals[j]))
        })
    }

    pub fn to_backend<T: Scalar>(&self) -> Result<Matrix<T>> {
        if T::is_exact() {
            let exact = self.clone().into_plain()?;
            Ok(exact.map(T::from_quadratic))
        } else {
            Ok(self.to_float().map(|x| T::from_f64_lossy(x.0).expect("float backend")))
        }
    }

    /// Exact product: for each inner index the two radicals must multiply to a square in the field.
    pub fn product(&self, other: &RadicalMatrix) -> Result<RadicalMatrix> {
        if self.base.cols() != other.base.rows() {
            return Err(CopeError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.base.rows(),
                self.base.cols(),
                other.base.rows(),
                other.base.cols()
            )));
        }
        let mut right = other.base.clone();
        for k in 0..self.base.cols() {
            let factor = inner_factor(&self.col_radicals[k], &other.row_radicals[k])
                .ok_or_else(|| CopeError::Invalid(format!("radicals at inner index {k} do not combine exactly")))?;
            if let Some(f) = factor {
                for j in 0..right.cols() {
                    right[(k, j)] = right[(k, j)].clone() * &f;
                }
            }
        }
        Ok(RadicalMatrix {
            base: self.base.mm(&right),
            row_radicals: self.row_radicals.clone(),
            col_radicals: other.col_radicals.clone(),
        })
    }

    /// Moves matching radicals of a factor pair (A col k, B row k) into B, keeping A*B fixed.
    pub fn absorb_pair(a: &RadicalMatrix, b: &RadicalMatrix) -> Result<(Matrix<QuadraticScalar>, Matrix<QuadraticScalar>)> {
        if !a.row_radicals.iter().all(|x| x.is_none()) || !b.col_radicals.iter().all(|x| x.is_none()) {
            return Err(CopeError::Invalid("outer radicals cannot be absorbed".into()));
        }
        let prod_b = RadicalMatrix::plain(Matrix::identity(a.base.cols()));
        let prod_b = RadicalMatrix { col_radicals: a.col_radicals.clone(), ..prod_b };
        let b_new = prod_b.product(b)?.into_plain()?;
        Ok((a.base.clone(), b_new))
    }
}

fn inner_factor(a: &Option<QuadraticScalar>, b: &Option<QuadraticScalar>) -> Option<Option<QuadraticScalar>> {
    match (a, b) {
        (None, None) => Some(None),
        (Some(w), None) | (None, Some(w)) => w.sqrt_exact().map(Some),
        (Some(w1), Some(w2)) => (w1.clone() * w2).sqrt_exact().map(Some),
    }
}

/// Strips identical row radicals shared by G and B; GE = B is unchanged by a common row scaling.
pub fn strip_common_row_radicals(g: &RadicalMatrix, b: &RadicalMatrix) -> Result<(Matrix<QuadraticScalar>, Matrix<QuadraticScalar>)> {
    if g.row_radicals != b.row_radicals {
        return Err(CopeError::Invalid("row radicals of the two matrices differ".into()));
    }
    if !g.col_radicals.iter().chain(&b.col_radicals).all(|x| x.is_none()) {
        return Err(CopeError::Invalid("column radicals cannot be stripped".into()));
    }
    Ok((g.base.clone(), b.base.clone()))
}

impl MatrixFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| CopeError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CopeError::Parse {
            column: e.column(),
            message: format!("line {}: {e}", e.line()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn radical_matrix(&self) -> Result<RadicalMatrix> {
        let mut rows = Vec::with_capacity(self.entries.len());
        for (i, row) in self.entries.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, s) in row.iter().enumerate() {
                let v = QuadraticScalar::parse(s, self.radicand).map_err(|e| match e {
                    CopeError::Parse { column, message } => CopeError::Parse {
                        column,
                        message: format!("entry ({i},{j}): {message}"),
                    },
                    other => other,
                })?;
                out.push(v);
            }
            rows.push(out);
        }
        let base = Matrix::from_rows(rows)?;
        let mut rm = RadicalMatrix::plain(base);
        for s in &self.scaled_rows {
            let w = QuadraticScalar::parse(&s.radical, self.radicand)?;
            *rm.row_radicals
                .get_mut(s.index)
                .ok_or_else(|| CopeError::Invalid(format!("scaled row {} out of range", s.index)))? = Some(w);
        }
        for s in &self.scaled_cols {
            let w = QuadraticScalar::parse(&s.radical, self.radicand)?;
            *rm.col_radicals
                .get_mut(s.index)
                .ok_or_else(|| CopeError::Invalid(format!("scaled column {} out of range", s.index)))? = Some(w);
        }
        Ok(rm)
    }

    pub fn matrix<T: Scalar>(&self) -> Result<Matrix<T>> {
        self.radical_matrix()?.to_backend()
    }

    /// Interprets the file as a COPE matrix; a missing block list means one measurement.
    pub fn cope<T: Scalar>(&self) -> Result<CopeMatrix<T>> {
        let data = self.matrix::<T>()?;
        let blocks = self.block_heights.clone().unwrap_or_else(|| vec![data.rows()]);
        if let Some(l) = self.l {
            if l != blocks.len() {
                return Err(CopeError::Invalid(format!("l = {l} but {} blocks are listed", blocks.len())));
            }
        }
        validate_cope(data, &blocks)
    }

    pub fn from_matrix(m: &Matrix<QuadraticScalar>, description: Option<String>) -> Self {
        let radicand = m.entries().iter().find_map(|x| x.radicand()).unwrap_or(DEFAULT_RADICAND);
        MatrixFile {
            description,
            radicand,
            l: None,
            block_heights: None,
            entries: m.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            scaled_rows: vec![],
            scaled_cols: vec![],
        }
    }

    pub fn from_cope(c: &CopeMatrix<QuadraticScalar>, description: Option<String>) -> Self {
        let mut f = Self::from_matrix(c.data(), description);
        f.l = Some(c.l());
        f.block_heights = Some(c.block_heights().to_vec());
        f
    }
}

/// Float matrix from comma-separated rows; blank lines and lines starting with '#' are skipped.
pub fn parse_csv(text: &str) -> Result<Matrix<Float>> {
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            row.push(parse_float(cell).map_err(|e| CopeError::Parse {
                column: 0,
                message: format!("line {}: {e}", ln + 1),
            })?);
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

/// Matrix entries in the scalar grammar (exact) or as decimals (float).
pub fn entries_as_strings<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_json() {
        let f = MatrixFile::from_json(
            r#"{"radicand": 5, "l": 2, "block_heights": [2,2],
                "entries": [["1","1","0","0"],["0","0","1","1"],["1","0","1","0"],["0","1","0","1"]]}"#,
        )
        .unwrap();
        let c = f.cope::<QuadraticScalar>().unwrap();
        assert_eq!(c.l(), 2);
        let back = MatrixFile::from_cope(&c, None);
        assert_eq!(back.entries, f.entries);
    }

    #[test]
    fn parse_errors_name_the_entry() {
        let f = MatrixFile::from_json(r#"{"entries": [["1","2x"]]}"#).unwrap();
        let e = f.matrix::<QuadraticScalar>().unwrap_err().to_string();
        assert!(e.contains("entry (0,1)"), "{e}");
        assert!(MatrixFile::from_json("{").is_err());
    }

    #[test]
    fn csv() {
        let m = parse_csv("# c\n0.5, 0.5\n0.5,0.5\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert!(parse_csv("1,a").is_err());
    }
}

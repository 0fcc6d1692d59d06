//! Nonnegative rank decisions: exact for rank 3, heuristic otherwise, plus the stable-NMF checker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cope::{rank_factorize, validate_cope};
use crate::error::{CopeError, Result};
use crate::field::{Float, Scalar};
use crate::matrix::Matrix;
use crate::nested2d::min_nested_polygon_2d;
use crate::polytope::{convex_coefficients, convex_hull_2d, vec_eq, VPolytope};

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_ITERATIONS: usize = 5000;
pub const DEFAULT_RESIDUAL: f64 = 1e-8;
pub const STABLE_CHECK_MAX_COLS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    Exact,
    Heuristic,
    Auto,
}

impl std::str::FromStr for Oracle {
    type Err = CopeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Oracle::Exact),
            "heuristic" => Ok(Oracle::Heuristic),
            "auto" => Ok(Oracle::Auto),
            other => Err(CopeError::Invalid(format!("unknown oracle '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NnrAnswer<T: Scalar> {
    /// Exact nonnegative factors with inner dimension k.
    Yes { r_factor: Matrix<T>, e_factor: Matrix<T> },
    /// Floating-point factors found by the heuristic, with their relative residual.
    YesApprox { r_factor: Matrix<Float>, e_factor: Matrix<Float>, residual: f64 },
    /// Only produced by the exact planar path.
    No { reason: String },
    Unknown { restarts: usize, best_residual: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NnrVerdict<T: Scalar> {
    pub digest: String,
    pub k: usize,
    pub answer: NnrAnswer<T>,
}

impl<T: Scalar> NnrVerdict<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self.answer, NnrAnswer::Yes { .. } | NnrAnswer::YesApprox { .. })
    }
    pub fn is_no(&self) -> bool {
        matches!(self.answer, NnrAnswer::No { .. })
    }
}

pub fn digest<T: Scalar>(c: &Matrix<T>) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}x{}", c.rows(), c.cols()));
    for x in c.entries() {
        h.update(b";");
        h.update(x.to_string().as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn seed_from_digest(d: &str) -> u64 {
    u64::from_str_radix(&d[..16], 16).unwrap_or(0)
}

/// Planar picture of a rank-3 nonnegative matrix: inner polygon of normalized columns inside
/// the outer polygon cut out by the rows.
#[derive(Clone, Debug)]
pub struct PlanarPair<T: Scalar> {
    pub inner: VPolytope<T>,
    pub outer: VPolytope<T>,
    /// Row-space factor of the normalized matrix (zero rows removed).
    left: Matrix<T>,
    unit: Vec<T>,
    keep: [usize; 2],
    drop: usize,
    /// positions of the nonzero rows / columns and the column sums
    rows: Vec<usize>,
    cols: Vec<usize>,
    col_scale: Vec<T>,
    shape: (usize, usize),
    inner_points: Vec<Vec<T>>,
}

impl<T: Scalar> PlanarPair<T> {
    pub fn lift(&self, p: &[T]) -> Vec<T> {
        let mut x = vec![T::zero(); 3];
        x[self.keep[0]] = p[0].clone();
        x[self.keep[1]] = p[1].clone();
        let rest = T::one() - &(self.unit[self.keep[0]].clone() * &p[0]) - &(self.unit[self.keep[1]].clone() * &p[1]);
        x[self.drop] = rest / &self.unit[self.drop];
        x
    }

    /// NMF factors of the original matrix from a nested polygon (padded with zeros up to `k`).
    pub fn factors_from_polygon(&self, g: &VPolytope<T>, k: usize) -> Result<(Matrix<T>, Matrix<T>)> {
        let verts = g.vertex_list();
        let kk = verts.len().max(k);
        let lifted: Vec<Vec<T>> = verts.iter().map(|v| self.lift(v)).collect();
        let (m, n) = self.shape;
        let mut r = Matrix::zeros(m, kk);
        for (a, &i) in self.rows.iter().enumerate() {
            for (j, x) in lifted.iter().enumerate() {
                r[(i, j)] = crate::matrix::dot(&self.left.row(a), x);
            }
        }
        let mut e = Matrix::zeros(kk, n);
        for (b, &j) in self.cols.iter().enumerate() {
            let coef = convex_coefficients(&verts, &self.inner_points[b])?
                .ok_or_else(|| CopeError::Domain("inner point outside the nested polygon".into()))?;
            for (i, c) in coef.iter().enumerate() {
                e[(i, j)] = c.clone() * &self.col_scale[b];
            }
        }
        Ok((r, e))
    }
}

/// 2-D inner/outer polygons of a nonnegative rank-3 matrix.
pub fn planar_pair<T: Scalar>(c: &Matrix<T>) -> Result<PlanarPair<T>> {
    if c.entries().iter().any(|x| x.is_negative()) {
        return Err(CopeError::Invalid("matrix has negative entries".into()));
    }
    let rank = c.rank();
    if rank != 3 {
        return Err(CopeError::Domain(format!("planar geometry needs rank 3, got rank {rank}")));
    }
    let rows: Vec<usize> = (0..c.rows()).filter(|&i| c.row(i).iter().any(|x| !x.is_zero())).collect();
    let cols: Vec<usize> = (0..c.cols()).filter(|&j| c.col(j).iter().any(|x| !x.is_zero())).collect();
    let sub = c.select_rows(&rows).select_cols(&cols);
    let col_scale = sub.col_sums();
    let normalized = Matrix::from_fn(sub.rows(), sub.cols(), |i, j| sub[(i, j)].clone() / &col_scale[j]);
    let cope = validate_cope(normalized, &[rows.len()])?;
    let f = rank_factorize(&cope);
    let unit = f.unit_effect.clone();
    let drop = (0..3).rev().find(|&i| !unit[i].is_zero()).expect("unit effect is nonzero");
    let keep = {
        let k: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
        [k[0], k[1]]
    };
    let inner_points: Vec<Vec<T>> = f.right.col_vecs().iter().map(|x| vec![x[keep[0]].clone(), x[keep[1]].clone()]).collect();
    // rows of A as half-planes alpha p + beta q >= -gamma
    let half: Vec<(T, T, T)> = (0..f.left.rows())
        .map(|i| {
            let a = f.left.row(i);
            let g = a[drop].clone() / &unit[drop];
            (
                a[keep[0]].clone() - &(g.clone() * &unit[keep[0]]),
                a[keep[1]].clone() - &(g.clone() * &unit[keep[1]]),
                g,
            )
        })
        .collect();
    let outer_pts = polygon_from_halfplanes(&half)?;
    let inner = VPolytope::from_vertices_unchecked(Matrix::from_cols(&convex_hull_2d(&inner_points)));
    let outer = VPolytope::from_vertices_unchecked(Matrix::from_cols(&outer_pts));
    Ok(PlanarPair {
        inner,
        outer,
        left: f.left,
        unit,
        keep,
        drop,
        rows,
        cols,
        col_scale,
        shape: c.shape(),
        inner_points,
    })
}

/// Vertices of {(p, q) : alpha p + beta q + gamma >= 0} (bounded), counter-clockwise.
fn polygon_from_halfplanes<T: Scalar>(half: &[(T, T, T)]) -> Result<Vec<Vec<T>>> {
    let mut pts: Vec<Vec<T>> = Vec::new();
    for i in 0..half.len() {
        for j in i + 1..half.len() {
            let (a1, b1, c1) = &half[i];
            let (a2, b2, c2) = &half[j];
            let det = a1.clone() * b2 - &(a2.clone() * b1);
            if det.is_zero() {
                continue;
            }
            let p = (b1.clone() * c2 - &(b2.clone() * c1)) / &det;
            let q = (a2.clone() * c1 - &(a1.clone() * c2)) / &det;
            let ok = half.iter().all(|(a, b, c)| !(a.clone() * &p + &(b.clone() * &q) + c).is_negative());
            let v = vec![p, q];
            if ok && !pts.iter().any(|w| vec_eq(w, &v)) {
                pts.push(v);
            }
        }
    }
    let hull = convex_hull_2d(&pts);
    if hull.len() < 3 {
        return Err(CopeError::Unbounded);
    }
    Ok(hull)
}

/// Minimum inner dimension of an NMF of a rank-3 matrix, with exact factors.
pub fn nnr_rank3<T: Scalar>(c: &Matrix<T>) -> Result<(usize, Matrix<T>, Matrix<T>)> {
    let pair = planar_pair(c)?;
    let (k, g) = min_nested_polygon_2d(&pair.inner, &pair.outer)?;
    let (r, e) = pair.factors_from_polygon(&g, k)?;
    if !r.mm(&e).approx_eq(c) || !r.is_nonnegative() || !e.is_nonnegative() {
        return Err(CopeError::Domain("planar witness failed to reproduce the matrix".into()));
    }
    Ok((k, r, e))
}

/// Exact decision of NNR(c) <= k for rank-3 matrices.
pub fn nnr_exact_rank3<T: Scalar>(c: &Matrix<T>, k: usize) -> Result<NnrVerdict<T>> {
    let (kmin, r, e) = nnr_rank3(c)?;
    let answer = if kmin <= k {
        let (r, e) = pad_factors(r, e, k);
        NnrAnswer::Yes { r_factor: r, e_factor: e }
    } else {
        NnrAnswer::No { reason: format!("minimal nested polygon has {kmin} vertices") }
    };
    Ok(NnrVerdict { digest: digest(c), k, answer })
}

fn pad_factors<T: Scalar>(r: Matrix<T>, e: Matrix<T>, k: usize) -> (Matrix<T>, Matrix<T>) {
    let extra = k.saturating_sub(r.cols());
    if extra == 0 {
        return (r, e);
    }
    (r.hstack(&Matrix::zeros(r.rows(), extra)), e.vstack(&Matrix::zeros(extra, e.cols())))
}

fn frob(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn matmul(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        for p in 0..k {
            let x = a[i * k + p];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[p * n + j];
            }
        }
    }
    out
}

fn transpose(a: &[f64], m: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            out[j * m + i] = a[i * n + j];
        }
    }
    out
}

fn relative_residual(v: &[f64], w: &[f64], h: &[f64], m: usize, k: usize, n: usize) -> f64 {
    let wh = matmul(w, h, m, k, n);
    let diff: Vec<f64> = v.iter().zip(&wh).map(|(a, b)| a - b).collect();
    frob(&diff) / frob(v).max(f64::MIN_POSITIVE)
}

fn hals_sweep(v: &[f64], w: &mut [f64], h: &mut [f64], m: usize, k: usize, n: usize) {
    let ht = transpose(h, k, n);
    let vht = matmul(v, &ht, m, n, k);
    let hht = matmul(h, &ht, k, n, k);
    for p in 0..k {
        let d = hht[p * k + p];
        if d <= 0.0 {
            continue;
        }
        for i in 0..m {
            let mut s = vht[i * k + p];
            for q in 0..k {
                s -= w[i * k + q] * hht[q * k + p];
            }
            w[i * k + p] = (w[i * k + p] + s / d).max(0.0);
        }
    }
    let wt = transpose(w, m, k);
    let wtv = matmul(&wt, v, k, m, n);
    let wtw = matmul(&wt, w, k, m, k);
    for p in 0..k {
        let d = wtw[p * k + p];
        if d <= 0.0 {
            continue;
        }
        for j in 0..n {
            let mut s = wtv[p * n + j];
            for q in 0..k {
                s -= wtw[p * k + q] * h[q * n + j];
            }
            h[p * n + j] = (h[p * n + j] + s / d).max(0.0);
        }
    }
}

/// Multiplicative-update NMF with random restarts. Never answers "no".
pub fn nnr_heuristic(c: &Matrix<Float>, k: usize, restarts: usize, iterations: usize, seed: Option<u64>) -> Result<NnrVerdict<Float>> {
    if c.entries().iter().any(|x| x.0 < -crate::field::tolerance()) {
        return Err(CopeError::Invalid("matrix has negative entries".into()));
    }
    let d = digest(c);
    let (m, n) = c.shape();
    let v: Vec<f64> = c.entries().iter().map(|x| x.0.max(0.0)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or_else(|| seed_from_digest(&d)));
    let scale = (v.iter().sum::<f64>() / (m * n) as f64 / k as f64).sqrt().max(1e-3);
    let eps = 1e-300;
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let mut w: Vec<f64> = (0..m * k).map(|_| rng.gen_range(0.0..1.0) * scale + 1e-6).collect();
        let mut h: Vec<f64> = (0..k * n).map(|_| rng.gen_range(0.0..1.0) * scale + 1e-6).collect();
        let mut res = f64::INFINITY;
        for it in 0..iterations {
            let wt = transpose(&w, m, k);
            let num = matmul(&wt, &v, k, m, n);
            let den = matmul(&matmul(&wt, &w, k, m, k), &h, k, k, n);
            for i in 0..k * n {
                h[i] *= num[i] / (den[i] + eps);
            }
            let ht = transpose(&h, k, n);
            let num = matmul(&v, &ht, m, n, k);
            let den = matmul(&w, &matmul(&h, &ht, k, n, k), m, k, k);
            for i in 0..m * k {
                w[i] *= num[i] / (den[i] + eps);
            }
            if it % 25 == 24 || it + 1 == iterations {
                res = relative_residual(&v, &w, &h, m, k, n);
                if res <= DEFAULT_RESIDUAL {
                    break;
                }
            }
        }
        if res > DEFAULT_RESIDUAL && res < 1e-1 {
            // multiplicative updates stall near zero entries; finish with HALS sweeps
            for it in 0..iterations {
                hals_sweep(&v, &mut w, &mut h, m, k, n);
                if it % 25 == 24 {
                    res = relative_residual(&v, &w, &h, m, k, n);
                    if res <= DEFAULT_RESIDUAL {
                        break;
                    }
                }
            }
            res = relative_residual(&v, &w, &h, m, k, n);
        }
        best = best.min(res);
        if res <= DEFAULT_RESIDUAL {
            // independent re-check of the witness
            let r = Matrix::from_vec(m, k, w.iter().map(|&x| Float(x)).collect());
            let e = Matrix::from_vec(k, n, h.iter().map(|&x| Float(x)).collect());
            let check = relative_residual(&v, &w, &h, m, k, n);
            if check <= DEFAULT_RESIDUAL && r.entries().iter().chain(e.entries()).all(|x| x.0 >= 0.0) {
                return Ok(NnrVerdict { digest: d, k, answer: NnrAnswer::YesApprox { r_factor: r, e_factor: e, residual: check } });
            }
        }
    }
    Ok(NnrVerdict { digest: d, k, answer: NnrAnswer::Unknown { restarts, best_residual: best } })
}

/// Decides NNR(c) <= k with the chosen strategy; rank-3 inputs use the exact path under `Auto`.
pub fn decide_nnr<T: Scalar>(c: &Matrix<T>, k: usize, oracle: Oracle, seed: Option<u64>) -> Result<NnrVerdict<T>> {
    let rank = c.rank();
    let d = digest(c);
    if k < rank {
        return Ok(NnrVerdict { digest: d, k, answer: NnrAnswer::No { reason: format!("rank {rank} exceeds {k}") } });
    }
    if k >= c.rows().min(c.cols()) {
        let (r, e) = if c.rows() <= c.cols() {
            (Matrix::identity(c.rows()), c.clone())
        } else {
            (c.clone(), Matrix::identity(c.cols()))
        };
        let (r, e) = pad_factors(r, e, k);
        return Ok(NnrVerdict { digest: d, k, answer: NnrAnswer::Yes { r_factor: r, e_factor: e } });
    }
    match oracle {
        Oracle::Exact | Oracle::Auto if rank == 3 => nnr_exact_rank3(c, k),
        Oracle::Exact => Ok(NnrVerdict {
            digest: d,
            k,
            answer: NnrAnswer::Unknown { restarts: 0, best_residual: f64::NAN },
        }),
        _ => {
            let f = c.map(|x| Float(x.to_f64()));
            let v = nnr_heuristic(&f, k, DEFAULT_RESTARTS, DEFAULT_ITERATIONS, seed)?;
            let answer = match v.answer {
                NnrAnswer::YesApprox { r_factor, e_factor, residual } => NnrAnswer::YesApprox { r_factor, e_factor, residual },
                NnrAnswer::Unknown { restarts, best_residual } => NnrAnswer::Unknown { restarts, best_residual },
                _ => unreachable!("heuristic answers yes or unknown"),
            };
            Ok(NnrVerdict { digest: d, k, answer })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NnrBounds {
    pub lower: usize,
    pub upper: Option<usize>,
    /// lower == upper is proved
    pub exact: bool,
}

/// Rank lower bound, tightened to the exact value for rank-3 (and trivially full-rank) inputs.
pub fn nnr_bounds<T: Scalar>(c: &Matrix<T>, oracle: Oracle, seed: Option<u64>) -> Result<NnrBounds> {
    if c.entries().iter().any(|x| x.is_negative()) {
        return Err(CopeError::Invalid("matrix has negative entries".into()));
    }
    let rank = c.rank();
    let trivial = c.rows().min(c.cols());
    if rank == trivial || rank <= 2 {
        return Ok(NnrBounds { lower: rank, upper: Some(rank), exact: true });
    }
    if rank == 3 && oracle != Oracle::Heuristic {
        let (k, _, _) = nnr_rank3(c)?;
        return Ok(NnrBounds { lower: k, upper: Some(k), exact: true });
    }
    if oracle == Oracle::Exact {
        return Ok(NnrBounds { lower: rank, upper: Some(trivial), exact: false });
    }
    for k in rank..trivial {
        if decide_nnr(c, k, Oracle::Heuristic, seed)?.is_yes() {
            return Ok(NnrBounds { lower: rank, upper: Some(k), exact: k == rank });
        }
    }
    Ok(NnrBounds { lower: rank, upper: Some(trivial), exact: false })
}

/// Size first, then the elementwise rule on sorted multisets.
pub fn lexicographic_before(s: &[usize], t: &[usize]) -> bool {
    if s.len() != t.len() {
        return s.len() < t.len();
    }
    for i in 0..s.len() {
        if s[..i].iter().zip(&t[..i]).all(|(a, b)| a <= b) && s[i] < t[i] {
            return true;
        }
    }
    false
}

/// Subsets of 0..n ordered by `lexicographic_before`.
fn ordered_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    all.sort_by(|a, b| {
        if lexicographic_before(a, b) {
            std::cmp::Ordering::Less
        } else if lexicographic_before(b, a) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    all
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Column { index: usize, support: Vec<usize>, first_admissible: Vec<usize> },
    Row { index: usize, support: Vec<usize>, first_admissible: Vec<usize> },
}

fn in_cone<T: Scalar>(gens: &[Vec<T>], v: &[T]) -> Result<bool> {
    if gens.is_empty() {
        return Ok(v.iter().all(|x| x.is_zero()));
    }
    let a = Matrix::from_cols(gens);
    Ok(crate::lp::find_nonnegative_solution(&a, v)?.is_some())
}

fn first_admissible<T: Scalar>(gens: &[Vec<T>], v: &[T], order: &[Vec<usize>]) -> Result<Vec<usize>> {
    if v.iter().all(|x| x.is_zero()) {
        return Ok(vec![]);
    }
    for s in order {
        let sub: Vec<Vec<T>> = s.iter().map(|&i| gens[i].clone()).collect();
        if in_cone(&sub, v)? {
            return Ok(s.clone());
        }
    }
    Ok((0..gens.len()).collect())
}

fn support<T: Scalar>(v: &[T]) -> Vec<usize> {
    (0..v.len()).filter(|&i| !v[i].is_zero()).collect()
}

/// Checks both stability conditions; returns the first violation found (columns before rows).
pub fn is_stable_nmf<T: Scalar>(r: &Matrix<T>, e: &Matrix<T>, c: &Matrix<T>) -> Result<(bool, Option<Violation>)> {
    let k = r.cols();
    if k > STABLE_CHECK_MAX_COLS {
        return Err(CopeError::Resource(format!(
            "stability check enumerates subsets of at most {STABLE_CHECK_MAX_COLS} factors, got {k}"
        )));
    }
    if e.rows() != k || !r.mm(e).approx_eq(c) {
        return Err(CopeError::Invalid("factors do not multiply to the matrix".into()));
    }
    let order = ordered_subsets(k);
    let rcols = r.col_vecs();
    for i in 0..c.cols() {
        let first = first_admissible(&rcols, &c.col(i), &order)?;
        let sup = support(&e.col(i));
        if sup != first {
            return Ok((false, Some(Violation::Column { index: i, support: sup, first_admissible: first })));
        }
    }
    let erows = e.row_vecs();
    for j in 0..c.rows() {
        let first = first_admissible(&erows, &c.row(j), &order)?;
        let sup = support(&r.row(j));
        if sup != first {
            return Ok((false, Some(Violation::Row { index: j, support: sup, first_admissible: first })));
        }
    }
    Ok((true, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticScalar as Q;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Q::int(v)).collect()).collect()).unwrap()
    }

    fn boxworld() -> Matrix<Q> {
        m(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]])
    }

    #[test]
    fn lexicographic_examples() {
        assert!(lexicographic_before(&[1, 3], &[1, 2, 4]));
        assert!(lexicographic_before(&[1, 2], &[1, 3]));
        assert!(!lexicographic_before(&[2, 3], &[2, 3]));
        assert!(!lexicographic_before(&[1, 3], &[1, 2]));
    }

    #[test]
    fn boxworld_needs_four() {
        let c = boxworld();
        assert!(nnr_exact_rank3(&c, 3).unwrap().is_no());
        let v = nnr_exact_rank3(&c, 4).unwrap();
        match v.answer {
            NnrAnswer::Yes { r_factor, e_factor } => {
                assert_eq!(r_factor.mm(&e_factor), c);
                assert_eq!(r_factor.cols(), 4);
            }
            other => panic!("{other:?}"),
        }
        let b = nnr_bounds(&c, Oracle::Auto, None).unwrap();
        assert_eq!((b.lower, b.upper), (4, Some(4)));
    }

    #[test]
    fn rank3_with_triangle() {
        // columns inside a triangle of a 3x3 identity outer: NNR 3
        let c = m(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(nnr_rank3(&c).unwrap().0, 3);
    }

    #[test]
    fn identity_bounds() {
        let b = nnr_bounds(&Matrix::<Q>::identity(4), Oracle::Auto, None).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (4, Some(4), true));
    }

    #[test]
    fn heuristic_finds_boxworld_model() {
        let c = boxworld().map(|x| Float(x.to_f64()));
        let v = nnr_heuristic(&c, 4, 16, 5000, Some(1)).unwrap();
        assert!(v.is_yes(), "{:?}", v.answer);
        let v = nnr_heuristic(&c, 3, 2, 500, Some(1)).unwrap();
        assert!(!v.is_yes() && !v.is_no());
    }

    #[test]
    fn stability() {
        let i = Matrix::<Q>::identity(3);
        assert_eq!(is_stable_nmf(&i, &i, &i).unwrap(), (true, None));
        // column 0 = e0, but E uses both e0 and a redundant copy
        let r = m(&[&[1, 1], &[0, 0]]);
        let e = Matrix::from_rows(vec![vec![Q::frac(1, 2)], vec![Q::frac(1, 2)]]).unwrap();
        let c = r.mm(&e);
        let (ok, v) = is_stable_nmf(&r, &e, &c).unwrap();
        assert!(!ok);
        assert_eq!(v, Some(Violation::Column { index: 0, support: vec![0, 1], first_admissible: vec![0] }));
    }

    fn pentagon<T: Scalar>() -> Matrix<T> {
        let text = include_str!("../fixtures/pentagon.json");
        crate::io::MatrixFile::from_json(text).unwrap().matrix().unwrap()
    }

    #[test]
    fn pentagon_nnr_is_four() {
        let c = pentagon::<Q>();
        let (k, r, e) = nnr_rank3(&c).unwrap();
        assert_eq!(k, 4);
        assert_eq!(r.mm(&e), c);
        assert!(nnr_exact_rank3(&c, 3).unwrap().is_no());
        let f = pentagon::<Float>();
        assert_eq!(nnr_rank3(&f).unwrap().0, 4);
    }
}

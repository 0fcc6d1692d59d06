//! Convex polytopes in vertex and inequality form.

use crate::error::{CopeError, Result};
use crate::field::{Float, Scalar};
use crate::lp::{find_nonnegative_solution, solve_general, LpStatus, RowKind};
use crate::matrix::{dot, gram_schmidt, sub_vec, Matrix};

pub const MAX_ENUM_DIM: usize = 6;
pub const MAX_ENUM_FACETS: usize = 24;

/// Convex hull of finitely many points, stored one vertex per column.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope<T: Scalar> {
    dim: usize,
    vertices: Matrix<T>,
}

/// {x : A x >= b, e_i . x = f_i}.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope<T: Scalar> {
    pub dim: usize,
    pub inequality_matrix: Matrix<T>,
    pub offsets: Vec<T>,
    pub equalities: Vec<(Vec<T>, T)>,
}

/// A V-polytope whose vertices are affinely independent.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexBody<T: Scalar>(pub VPolytope<T>);

impl<T: Scalar> SimplexBody<T> {
    pub fn vertices(&self) -> Vec<Vec<T>> {
        self.0.vertex_list()
    }
}

impl<T: Scalar> VPolytope<T> {
    /// Keeps only the extreme points of the given columns (duplicates and interior points removed).
    pub fn new(points: &Matrix<T>) -> Result<Self> {
        let dim = points.rows();
        let mut pts: Vec<Vec<T>> = Vec::new();
        for p in points.col_vecs() {
            if !pts.iter().any(|q| vec_eq(q, &p)) {
                pts.push(p);
            }
        }
        let mut keep: Vec<Vec<T>> = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            let others: Vec<Vec<T>> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
            if others.is_empty() || !in_hull(&others, p)? {
                keep.push(p.clone());
            }
        }
        Ok(VPolytope { dim, vertices: Matrix::from_cols(&keep) })
    }

    /// Takes the columns as given, without redundancy removal.
    pub fn from_vertices_unchecked(vertices: Matrix<T>) -> Self {
        VPolytope { dim: vertices.rows(), vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn vertices(&self) -> &Matrix<T> {
        &self.vertices
    }
    pub fn vertex_list(&self) -> Vec<Vec<T>> {
        self.vertices.col_vecs()
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.cols()
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        affine_hull(&self.vertex_list()).1.len()
    }

    pub fn contains(&self, x: &[T]) -> Result<bool> {
        in_hull(&self.vertex_list(), x)
    }

    pub fn same_vertex_set(&self, other: &VPolytope<T>) -> bool {
        let a = self.vertex_list();
        let b = other.vertex_list();
        a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| vec_eq(p, q)))
    }

    pub fn translate(&self, shift: &[T]) -> VPolytope<T> {
        let cols: Vec<Vec<T>> = self.vertex_list().iter().map(|v| crate::matrix::add_vec(v, shift)).collect();
        VPolytope { dim: self.dim, vertices: Matrix::from_cols(&cols) }
    }
}

pub fn vec_eq<T: Scalar>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}

/// Convex-coefficient feasibility: is x in conv(points)?
pub fn in_hull<T: Scalar>(points: &[Vec<T>], x: &[T]) -> Result<bool> {
    Ok(convex_coefficients(points, x)?.is_some())
}

/// lambda >= 0 with sum 1 and sum lambda_i p_i = x, if any.
pub fn convex_coefficients<T: Scalar>(points: &[Vec<T>], x: &[T]) -> Result<Option<Vec<T>>> {
    if points.is_empty() {
        return Ok(None);
    }
    let d = x.len();
    let k = points.len();
    let a = Matrix::from_fn(d + 1, k, |i, j| if i < d { points[j][i].clone() } else { T::one() });
    let mut b = x.to_vec();
    b.push(T::one());
    find_nonnegative_solution(&a, &b)
}

/// A point of the affine hull and an orthogonal (unnormalized) basis of its direction space.
pub fn affine_hull<T: Scalar>(points: &[Vec<T>]) -> (Vec<T>, Vec<Vec<T>>) {
    let base = points[0].clone();
    let diffs: Vec<Vec<T>> = points[1..].iter().map(|p| sub_vec(p, &base)).collect();
    (base, gram_schmidt(&diffs))
}

impl<T: Scalar> HPolytope<T> {
    pub fn new(inequality_matrix: Matrix<T>, offsets: Vec<T>, equalities: Vec<(Vec<T>, T)>) -> Result<Self> {
        let dim = inequality_matrix.cols();
        if offsets.len() != inequality_matrix.rows() || equalities.iter().any(|(e, _)| e.len() != dim) {
            return Err(CopeError::Dimension("inequality system shapes disagree".into()));
        }
        let keep: Vec<usize> = (0..inequality_matrix.rows())
            .filter(|&i| inequality_matrix.row(i).iter().any(|x| !x.is_zero()))
            .collect();
        for i in 0..inequality_matrix.rows() {
            if !keep.contains(&i) && offsets[i].is_positive() {
                return Err(CopeError::Invalid(format!("inequality row {i} reads 0 >= positive")));
            }
        }
        let inequality_matrix = inequality_matrix.select_rows(&keep);
        let offsets = keep.iter().map(|&i| offsets[i].clone()).collect();
        Ok(HPolytope { dim, inequality_matrix, offsets, equalities })
    }

    pub fn num_facets(&self) -> usize {
        self.offsets.len()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        let slack_ok = (0..self.num_facets())
            .all(|i| !(dot(&self.inequality_matrix.row(i), x) - &self.offsets[i]).is_negative());
        slack_ok && self.equalities.iter().all(|(e, f)| dot(e, x).approx_eq(f))
    }

    /// Minimizes c . x over the polytope (free variables).
    pub fn minimize(&self, c: &[T]) -> Result<(LpStatus, Option<Vec<T>>)> {
        let d = self.dim;
        let m = self.num_facets();
        let rows = m + self.equalities.len();
        let a = Matrix::from_fn(rows, 2 * d, |i, j| {
            let (jj, s) = if j < d { (j, T::one()) } else { (j - d, -T::one()) };
            let v = if i < m { self.inequality_matrix[(i, jj)].clone() } else { self.equalities[i - m].0[jj].clone() };
            s * &v
        });
        let mut b = self.offsets.clone();
        b.extend(self.equalities.iter().map(|(_, f)| f.clone()));
        let mut kinds = vec![RowKind::Ge; m];
        kinds.extend(vec![RowKind::Eq; self.equalities.len()]);
        let mut cc = c.to_vec();
        cc.extend(c.iter().map(|v| -v.clone()));
        let sol = solve_general(&cc, &a, &b, &kinds)?;
        let x = (sol.status == LpStatus::Optimal)
            .then(|| (0..d).map(|j| sol.primal_point[j].clone() - &sol.primal_point[j + d]).collect());
        Ok((sol.status, x))
    }

    /// Bounded (and nonempty) check by LPs along every coordinate direction.
    pub fn is_bounded(&self) -> Result<bool> {
        for i in 0..self.dim {
            for s in [1, -1] {
                let mut c = vec![T::zero(); self.dim];
                c[i] = T::from_int(s);
                match self.minimize(&c)?.0 {
                    LpStatus::Unbounded => return Ok(false),
                    LpStatus::Infeasible => return Err(CopeError::Invalid("empty polytope".into())),
                    LpStatus::Optimal => {}
                }
            }
        }
        Ok(true)
    }
}

/// {x : A x >= 0, 1^T A x = l}.
pub fn outer_from_effects<T: Scalar>(a: &Matrix<T>, l: usize) -> Result<HPolytope<T>> {
    if a.rank() < a.cols() {
        return Err(CopeError::RankDeficient(format!("effect matrix has rank {} < {}", a.rank(), a.cols())));
    }
    let sums = a.col_sums();
    HPolytope::new(a.clone(), vec![T::zero(); a.rows()], vec![(sums, T::from_int(l as i64))])
}

/// Convex hull of the columns of B.
pub fn inner_from_states<T: Scalar>(b: &Matrix<T>) -> Result<VPolytope<T>> {
    VPolytope::new(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All vertices by brute force over facet subsets, after an unboundedness check.
pub fn enumerate_vertices<T: Scalar>(h: &HPolytope<T>) -> Result<VPolytope<T>> {
    if h.dim > MAX_ENUM_DIM || h.num_facets() > MAX_ENUM_FACETS {
        return Err(CopeError::Resource(format!(
            "vertex enumeration limited to dimension {MAX_ENUM_DIM} and {MAX_ENUM_FACETS} facets, got {} and {}",
            h.dim,
            h.num_facets()
        )));
    }
    if !h.is_bounded()? {
        return Err(CopeError::Unbounded);
    }
    // independent equality rows
    let eq_rows: Vec<Vec<T>> = h.equalities.iter().map(|(e, f)| {
        let mut r = e.clone();
        r.push(f.clone());
        r
    }).collect();
    let eq_indep: Vec<Vec<T>> = if eq_rows.is_empty() {
        vec![]
    } else {
        let (rr, piv) = Matrix::from_rows(eq_rows)?.rref();
        (0..piv.len()).map(|i| rr.row(i)).collect()
    };
    let need = h.dim - eq_indep.len();
    let mut found: Vec<Vec<T>> = Vec::new();
    for subset in combinations(h.num_facets(), need) {
        let mut rows: Vec<Vec<T>> = subset.iter().map(|&i| h.inequality_matrix.row(i)).collect();
        let mut rhs: Vec<T> = subset.iter().map(|&i| h.offsets[i].clone()).collect();
        for e in &eq_indep {
            rows.push(e[..h.dim].to_vec());
            rhs.push(e[h.dim].clone());
        }
        let sys = Matrix::from_rows(rows)?;
        let Some(x) = sys.solve_vec(&rhs) else { continue };
        if h.contains(&x) && !found.iter().any(|p| vec_eq(p, &x)) {
            found.push(x);
        }
    }
    Ok(VPolytope { dim: h.dim, vertices: Matrix::from_cols(&found) })
}

/// Polar {y : <y, v> <= 1 for all vertices v}; the origin must be interior.
pub fn polar_of_vertices<T: Scalar>(p: &VPolytope<T>) -> Result<HPolytope<T>> {
    let verts = p.vertex_list();
    let a = Matrix::from_fn(verts.len(), p.dim, |i, j| -verts[i][j].clone());
    let h = HPolytope::new(a, vec![-T::one(); verts.len()], vec![])?;
    if p.affine_dim() < p.dim || !h.is_bounded()? {
        return Err(CopeError::Domain("origin is not interior to the polytope".into()));
    }
    Ok(h)
}

/// Polar of {x : A x >= b} with b < 0: conv{a_i / b_i}.
pub fn polar_of_inequalities<T: Scalar>(h: &HPolytope<T>) -> Result<VPolytope<T>> {
    if !h.equalities.is_empty() || h.offsets.iter().any(|b| !b.is_negative()) {
        return Err(CopeError::Domain("origin is not interior to the polytope".into()));
    }
    let cols: Vec<Vec<T>> = (0..h.num_facets())
        .map(|i| h.inequality_matrix.row(i).iter().map(|a| a.clone() / &h.offsets[i]).collect())
        .collect();
    let v = VPolytope::new(&Matrix::from_cols(&cols))?;
    if v.affine_dim() < h.dim {
        return Err(CopeError::Domain("polytope is unbounded, its polar is degenerate".into()));
    }
    Ok(v)
}

pub fn barycenter<T: Scalar>(p: &VPolytope<T>) -> Vec<T> {
    barycenter_of(&p.vertex_list())
}

pub fn barycenter_of<T: Scalar>(points: &[Vec<T>]) -> Vec<T> {
    let n = T::from_int(points.len() as i64);
    (0..points[0].len())
        .map(|i| points.iter().fold(T::zero(), |acc, p| acc + &p[i]) / &n)
        .collect()
}

/// s+1 directions summing exactly to zero: a regular simplex rounded to denominators 2^16.
pub fn simplex_directions<T: Scalar>(s: usize) -> Vec<Vec<T>> {
    if s == 0 {
        return vec![vec![]];
    }
    // regular simplex in R^s: project e_i - centroid of R^{s+1} onto an orthonormal basis of the sum-zero plane
    let n = s + 1;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..s {
        // Helmert basis vector
        let mut v = vec![0.0; n];
        for item in v.iter_mut().take(k + 1) {
            *item = 1.0;
        }
        v[k + 1] = -((k + 1) as f64);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        basis.push(v.iter().map(|x| x / norm).collect());
    }
    let denom = 65536i64;
    let mut dirs: Vec<Vec<T>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|k| {
                    let coord = basis[k][i] - basis[k].iter().sum::<f64>() / n as f64;
                    T::from_rational(&crate::field::rat((coord * denom as f64).round() as i64, denom))
                })
                .collect()
        })
        .collect();
    let last: Vec<T> = (0..s).map(|k| -dirs.iter().fold(T::zero(), |acc, d| acc + &d[k])).collect();
    dirs.push(last);
    dirs
}

/// Simplex center + f_i d_i inside p, one power-of-two extent per direction.
pub fn inscribed_simplex<T: Scalar>(p: &VPolytope<T>, center: &[T]) -> Result<SimplexBody<T>> {
    let verts = p.vertex_list();
    if !p.contains(center)? {
        return Err(CopeError::Domain("center is not inside the polytope".into()));
    }
    let (_, basis) = affine_hull(&verts);
    let s = basis.len();
    let dirs_local = simplex_directions::<T>(s);
    // scale each basis vector to roughly unit length so the directions are spread evenly
    let unit: Vec<Vec<T>> = basis
        .iter()
        .map(|b| {
            let len = dot(b, b).to_f64().sqrt();
            let q = T::from_rational(&rational_approx(1.0 / len));
            b.iter().map(|x| x.clone() * &q).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(s + 1);
    for d in &dirs_local {
        let dir: Vec<T> = (0..center.len())
            .map(|i| unit.iter().zip(d).fold(T::zero(), |acc, (u, c)| acc + &(u[i].clone() * c)))
            .collect();
        let f = largest_pow2_extent(&verts, center, &dir)?;
        out.push(center.iter().zip(&dir).map(|(c, d)| c.clone() + &(f.clone() * d)).collect::<Vec<T>>());
    }
    Ok(SimplexBody(VPolytope::from_vertices_unchecked(Matrix::from_cols(&out))))
}

fn rational_approx(v: f64) -> num_rational::BigRational {
    let denom = 1i64 << 16;
    let n = (v * denom as f64).round().max(1.0) as i64;
    crate::field::rat(n, denom)
}

/// Largest 2^z (z >= -512) with center + 2^z dir in conv(verts); the search brackets the
/// extent between consecutive powers of two and keeps the lower one.
fn largest_pow2_extent<T: Scalar>(verts: &[Vec<T>], center: &[T], dir: &[T]) -> Result<T> {
    let at = |z: i64| -> Result<bool> {
        let f = T::from_rational(&crate::field::pow2(z));
        let x: Vec<T> = center.iter().zip(dir).map(|(c, d)| c.clone() + &(f.clone() * d)).collect();
        in_hull(verts, &x)
    };
    let mut z = 0i64;
    if at(z)? {
        while at(z + 1)? {
            z += 1;
            if z > 512 {
                return Err(CopeError::Unbounded);
            }
        }
    } else {
        loop {
            z -= 1;
            if z < -512 {
                return Err(CopeError::Domain("center is not in the relative interior".into()));
            }
            if at(z)? {
                break;
            }
        }
    }
    Ok(T::from_rational(&crate::field::pow2(z)))
}

/// Vertices of the simplex {y : <t_j, y> <= 1} for an origin-containing simplex with vertices t_j.
fn polar_simplex<T: Scalar>(t: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let s = t.len() - 1;
    let mut out = Vec::with_capacity(s + 1);
    for i in 0..=s {
        let rows: Vec<Vec<T>> = t.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        let m = Matrix::from_rows(rows)?;
        let y = m
            .solve_vec(&vec![T::one(); s])
            .ok_or_else(|| CopeError::Domain("inscribed simplex is degenerate".into()))?;
        out.push(y);
    }
    Ok(out)
}

/// Simplex containing {x : A x >= b} (full-dimensional, `center` strictly inside), built as the
/// polar of a simplex inscribed in the polar.
pub fn circumscribed_simplex_h<T: Scalar>(h: &HPolytope<T>, center: &[T]) -> Result<SimplexBody<T>> {
    if !h.equalities.is_empty() {
        return Err(CopeError::Domain("expected a full-dimensional inequality system".into()));
    }
    let shifted: Vec<T> = (0..h.num_facets())
        .map(|i| h.offsets[i].clone() - &dot(&h.inequality_matrix.row(i), center))
        .collect();
    let local = HPolytope::new(h.inequality_matrix.clone(), shifted, vec![])?;
    let polar = polar_of_inequalities(&local)?;
    let zero = vec![T::zero(); h.dim];
    let inner = inscribed_simplex(&polar, &zero)?;
    let verts = polar_simplex(&inner.vertices())?;
    let cols: Vec<Vec<T>> = verts.iter().map(|v| crate::matrix::add_vec(v, center)).collect();
    Ok(SimplexBody(VPolytope::from_vertices_unchecked(Matrix::from_cols(&cols))))
}

/// Simplex containing a full-dimensional V-polytope.
pub fn circumscribed_simplex_v<T: Scalar>(p: &VPolytope<T>) -> Result<SimplexBody<T>> {
    let c = barycenter(p);
    let neg: Vec<T> = c.iter().map(|x| -x.clone()).collect();
    let local = p.translate(&neg);
    let polar_h = polar_of_vertices(&local)?;
    let polar_v = enumerate_vertices(&polar_h)?;
    let zero = vec![T::zero(); p.dim];
    let inner = inscribed_simplex(&polar_v, &zero)?;
    let verts = polar_simplex(&inner.vertices())?;
    let cols: Vec<Vec<T>> = verts.iter().map(|v| crate::matrix::add_vec(v, &c)).collect();
    Ok(SimplexBody(VPolytope::from_vertices_unchecked(Matrix::from_cols(&cols))))
}

/// Squared distance from x to the affine hull of the points.
pub fn squared_distance_to_affine_hull<T: Scalar>(points: &[Vec<T>], x: &[T]) -> T {
    let base = &points[0];
    let m: Vec<Vec<T>> = points[1..].iter().map(|p| sub_vec(p, base)).collect();
    let r0 = sub_vec(x, base);
    let ortho = gram_schmidt(&m);
    let mut r = r0;
    for b in &ortho {
        let c = dot(&r, b) / &dot(b, b);
        r = crate::matrix::axpy(&-c, b, &r);
    }
    dot(&r, &r)
}

/// (d1^2, d2^2): squared distance from center to the nearest facet hull of s1, squared diameter of s2.
pub fn distances<T: Scalar>(s1: &SimplexBody<T>, s2: &SimplexBody<T>, center: &[T]) -> (T, T) {
    let v1 = s1.vertices();
    let mut d1: Option<T> = None;
    for skip in 0..v1.len() {
        let facet: Vec<Vec<T>> = v1.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, v)| v.clone()).collect();
        let d = squared_distance_to_affine_hull(&facet, center);
        d1 = Some(match d1 {
            None => d,
            Some(cur) => if d.cmp_to(&cur).is_lt() { d } else { cur },
        });
    }
    let v2 = s2.vertices();
    let mut d2 = T::zero();
    for i in 0..v2.len() {
        for j in i + 1..v2.len() {
            let diff = sub_vec(&v2[i], &v2[j]);
            let d = dot(&diff, &diff);
            if d.cmp_to(&d2).is_gt() {
                d2 = d;
            }
        }
    }
    (d1.unwrap_or_else(T::zero), d2)
}

/// Orthogonal projection of every vertex onto the affine span of the columns of `span_points`.
pub fn project_affine<T: Scalar>(p: &VPolytope<T>, span_points: &Matrix<T>) -> Result<VPolytope<T>> {
    let pts = span_points.col_vecs();
    let (base, basis) = affine_hull(&pts);
    if basis.len() + 1 != pts.len() {
        return Err(CopeError::RankDeficient("span points are affinely dependent".into()));
    }
    let cols: Vec<Vec<T>> = p
        .vertex_list()
        .iter()
        .map(|v| {
            let r = sub_vec(v, &base);
            let mut out = base.clone();
            for b in &basis {
                let c = dot(&r, b) / &dot(b, b);
                out = crate::matrix::axpy(&c, b, &out);
            }
            out
        })
        .collect();
    Ok(VPolytope::from_vertices_unchecked(Matrix::from_cols(&cols)))
}

/// 2-D cross product (b - a) x (c - a).
pub fn orient<T: Scalar>(a: &[T], b: &[T], c: &[T]) -> T {
    (b[0].clone() - &a[0]) * &(c[1].clone() - &a[1]) - (b[1].clone() - &a[1]) * &(c[0].clone() - &a[0])
}

/// Counter-clockwise convex hull of planar points (monotone chain, collinear points dropped).
pub fn convex_hull_2d<T: Scalar>(points: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut pts: Vec<Vec<T>> = Vec::new();
    for p in points {
        if !pts.iter().any(|q| vec_eq(q, p)) {
            pts.push(p.clone());
        }
    }
    pts.sort_by(|a, b| a[0].cmp_to(&b[0]).then(a[1].cmp_to(&b[1])));
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Vec<T>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<T>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Float copy of an exact polytope, for cross-checks.
pub fn to_float<T: Scalar>(p: &VPolytope<T>) -> VPolytope<Float> {
    VPolytope::from_vertices_unchecked(p.vertices.map(|x| Float(x.to_f64())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticScalar as Q;

    fn q(v: i64) -> Q {
        Q::int(v)
    }
    fn cols(c: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_cols(&c.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn standard_simplex_round_trip() {
        let h = outer_from_effects(&Matrix::<Q>::identity(3), 1).unwrap();
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.num_vertices(), 3);
        assert!(v.same_vertex_set(&inner_from_states(&Matrix::identity(3)).unwrap()));
        assert!(h.contains(&[Q::frac(1, 3), Q::frac(1, 3), Q::frac(1, 3)]));
        assert!(!v.contains(&[q(2), q(0), q(0)]).unwrap());
        assert_eq!(barycenter(&v), vec![Q::frac(1, 3); 3]);
    }

    #[test]
    fn redundant_points_removed() {
        let seg = inner_from_states(&cols(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap();
        assert_eq!(seg.num_vertices(), 2);
    }

    #[test]
    fn half_space_is_unbounded() {
        let h = HPolytope::new(Matrix::from_rows(vec![vec![q(1), q(0)]]).unwrap(), vec![q(0)], vec![]).unwrap();
        assert_eq!(enumerate_vertices(&h).unwrap_err(), CopeError::Unbounded);
    }

    #[test]
    fn polar_of_square_is_cross() {
        let sq = VPolytope::new(&cols(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])).unwrap();
        let h = polar_of_vertices(&sq).unwrap();
        let cross = enumerate_vertices(&h).unwrap();
        let expect = VPolytope::new(&cols(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])).unwrap();
        assert!(cross.same_vertex_set(&expect));
        let back = polar_of_inequalities(&h).unwrap();
        assert!(back.same_vertex_set(&sq));
        let off = VPolytope::new(&cols(&[&[1, 1], &[2, 1], &[1, 2]])).unwrap();
        assert!(polar_of_vertices(&off).is_err());
    }

    #[test]
    fn simplices_inside_and_around() {
        let sq = VPolytope::new(&cols(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])).unwrap();
        let s1 = inscribed_simplex(&sq, &[q(0), q(0)]).unwrap();
        assert_eq!(s1.vertices().len(), 3);
        for v in s1.vertices() {
            assert!(sq.contains(&v).unwrap());
        }
        assert!(s1.0.contains(&[q(0), q(0)]).unwrap());
        let s2 = circumscribed_simplex_v(&sq).unwrap();
        for v in sq.vertex_list() {
            assert!(s2.0.contains(&v).unwrap());
        }
        let seg = VPolytope::new(&cols(&[&[0, 0], &[2, 0]])).unwrap();
        let s = inscribed_simplex(&seg, &[q(1), q(0)]).unwrap();
        assert_eq!(s.vertices().len(), 2);
    }

    #[test]
    fn distance_examples() {
        let seg = SimplexBody(VPolytope::from_vertices_unchecked(cols(&[&[0, 0], &[2, 0]])));
        let tri = SimplexBody(VPolytope::from_vertices_unchecked(cols(&[&[0, 0], &[1, 0], &[0, 1]])));
        let c = [Q::frac(1, 3), Q::frac(1, 3)];
        let (d1, d2) = distances(&tri, &seg, &c);
        assert_eq!(d1, Q::frac(1, 18));
        assert_eq!(d2, q(4));
    }

    #[test]
    fn projection_onto_own_span() {
        let tri = VPolytope::new(&cols(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let p = project_affine(&tri, tri.vertices()).unwrap();
        assert!(p.same_vertex_set(&tri));
        let origin = VPolytope::from_vertices_unchecked(cols(&[&[0, 0, 0]]));
        let p = project_affine(&origin, tri.vertices()).unwrap();
        assert_eq!(p.vertex_list()[0], vec![Q::frac(1, 3); 3]);
    }

    #[test]
    fn hull_2d_ccw() {
        let pts: Vec<Vec<Q>> = [[0, 0], [2, 0], [1, 1], [2, 2], [0, 2], [1, 0]]
            .iter()
            .map(|p| vec![q(p[0]), q(p[1])])
            .collect();
        let h = convex_hull_2d(&pts);
        assert_eq!(h.len(), 4);
        assert!(orient(&h[0], &h[1], &h[2]).is_positive());
    }
}

//! Equirank nonnegative matrix factorizations: the shear LP, the all-dimension test from the
//! outer polytope's vertices, the cone embedding and reduction to a plain NNR question, and the
//! ENNR search loop.

use serde::Serialize;
use serde_json::{json, Value};

use crate::cope::{rank_factorize, validate_cope, CopeMatrix, Form};
use crate::error::{CopeError, Result};
use crate::field::{pow2, round_pow2_exponent, Float, Round, Scalar};
use crate::io::entries_as_strings;
use crate::lp::{self, LinearProgram, LpStatus};
use crate::matrix::{dot, orthogonal_bases, pseudoinverse_full_col_rank, pseudoinverse_full_row_rank, Matrix};
use crate::nested2d::min_nested_polygon_2d;
use crate::nnr::{decide_nnr, planar_pair, NnrAnswer, Oracle};
use crate::polytope::{
    barycenter, circumscribed_simplex_h, convex_hull_2d, distances, enumerate_vertices, inscribed_simplex,
    outer_from_effects, vec_eq, HPolytope, SimplexBody, VPolytope,
};

/// Shear LP for G E = B with G (r x k, full row rank) and B (r x n).
///
/// Variables: S (k x n, column-major), then D+ and D- ((k-r) x r, row-major).
/// E = L E_bar with L = I + sum D_ij b^i a^j^T and D = D- - D+.
#[derive(Clone, Debug, PartialEq)]
pub struct ShearProblem<T: Scalar> {
    pub g: Matrix<T>,
    pub b: Matrix<T>,
    pub e_bar: Matrix<T>,
    pub row_basis: Vec<Vec<T>>,
    pub kernel_basis: Vec<Vec<T>>,
    pub lp: LinearProgram<T>,
}

impl<T: Scalar> ShearProblem<T> {
    pub fn k(&self) -> usize {
        self.g.cols()
    }
    pub fn r(&self) -> usize {
        self.g.rows()
    }
    pub fn n(&self) -> usize {
        self.b.cols()
    }
    fn num_s(&self) -> usize {
        self.k() * self.n()
    }
    fn num_d(&self) -> usize {
        (self.k() - self.r()) * self.r()
    }

    /// L E_bar for a shear coefficient matrix D ((k-r) x r).
    pub fn apply_shear(&self, d: &Matrix<T>) -> Matrix<T> {
        let k = self.k();
        let mut l = Matrix::<T>::identity(k);
        for (i, bi) in self.kernel_basis.iter().enumerate() {
            for (j, aj) in self.row_basis.iter().enumerate() {
                let dij = &d[(i, j)];
                if dij.is_zero() {
                    continue;
                }
                for p in 0..k {
                    for q in 0..k {
                        l[(p, q)] = l[(p, q)].clone() + &(dij.clone() * &bi[p] * &aj[q]);
                    }
                }
            }
        }
        l.mm(&self.e_bar)
    }

    pub fn shear_from_primal(&self, x: &[T]) -> Matrix<T> {
        let (s, nd) = (self.num_s(), self.num_d());
        let r = self.r();
        Matrix::from_fn(self.k() - r, r, |i, j| {
            let u = i * r + j;
            x[s + nd + u].clone() - &x[s + u]
        })
    }
}

pub fn build_shear_lp<T: Scalar>(g: &Matrix<T>, b: &Matrix<T>) -> Result<ShearProblem<T>> {
    let r = g.rows();
    if b.rows() != r {
        return Err(CopeError::Dimension(format!("G has {r} rows but B has {}", b.rows())));
    }
    if g.rank() != r {
        return Err(CopeError::RankDeficient(format!("G has rank {} < {r}", g.rank())));
    }
    let (row_basis, kernel_basis) = orthogonal_bases(g);
    build_shear_lp_with_bases(g, b, row_basis, kernel_basis)
}

/// Same LP with caller-supplied bases of the row space and kernel of G (any scaling).
pub fn build_shear_lp_with_bases<T: Scalar>(
    g: &Matrix<T>,
    b: &Matrix<T>,
    row_basis: Vec<Vec<T>>,
    kernel_basis: Vec<Vec<T>>,
) -> Result<ShearProblem<T>> {
    let (r, k) = g.shape();
    if row_basis.len() != r || kernel_basis.len() != k - r {
        return Err(CopeError::Dimension(format!(
            "expected {r} row-space and {} kernel vectors, got {} and {}",
            k - r,
            row_basis.len(),
            kernel_basis.len()
        )));
    }
    let n = b.cols();
    let e_bar = pseudoinverse_full_row_rank(g)?.mm(b);
    let nd = (k - r) * r;
    let ns = k * n;
    // projections a^j . E_bar_:s
    let proj: Vec<Vec<T>> = (0..n).map(|s| {
        let col = e_bar.col(s);
        row_basis.iter().map(|a| dot(a, &col)).collect()
    }).collect();
    let a = Matrix::from_fn(ns, ns + 2 * nd, |t, v| {
        if v < ns {
            return if v == t { T::one() } else { T::zero() };
        }
        let (u, sign) = if v < ns + nd { (v - ns, -T::one()) } else { (v - ns - nd, T::one()) };
        let (s, p) = (t / k, t % k);
        let (i, j) = (u / r, u % r);
        sign * &(proj[s][j].clone() * &kernel_basis[i][p])
    });
    let rhs: Vec<T> = (0..ns).map(|t| -e_bar[(t % k, t / k)].clone()).collect();
    let mut objective = vec![T::one(); ns];
    objective.extend(vec![T::zero(); 2 * nd]);
    let lp = LinearProgram::new(objective, a, rhs)?;
    Ok(ShearProblem { g: g.clone(), b: b.clone(), e_bar, row_basis, kernel_basis, lp })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate<T: Scalar> {
    pub lp: LinearProgram<T>,
    pub dual_point: Vec<T>,
    pub dual_value: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapOutcome<T: Scalar> {
    /// E >= 0 with G E = B and rank E = rank B.
    Exists { e: Matrix<T> },
    NotExists(DualCertificate<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapDecision<T: Scalar> {
    pub problem: ShearProblem<T>,
    pub outcome: MapOutcome<T>,
}

impl<T: Scalar> MapDecision<T> {
    pub fn exists(&self) -> bool {
        matches!(self.outcome, MapOutcome::Exists { .. })
    }
}

/// Decides whether a nonnegative rank-preserving E with G E = B exists.
pub fn decide_nonneg_map<T: Scalar>(g: &Matrix<T>, b: &Matrix<T>) -> Result<MapDecision<T>> {
    let problem = build_shear_lp(g, b)?;
    let e = if problem.e_bar.is_nonnegative() {
        Some(problem.e_bar.clone())
    } else {
        let sol = lp::solve(&problem.lp)?;
        if sol.status != LpStatus::Optimal {
            return Err(CopeError::Domain(format!("shear LP ended {:?}", sol.status)));
        }
        if sol.primal_value.is_zero() {
            Some(problem.apply_shear(&problem.shear_from_primal(&sol.primal_point)))
        } else {
            let (feasible, value) = lp::verify_certificate(&problem.lp, &sol.dual_point)?;
            if !feasible || !value.is_positive() || !value.approx_eq(&sol.primal_value) {
                return Err(CopeError::Domain("dual certificate of the shear LP failed verification".into()));
            }
            let cert = DualCertificate { lp: problem.lp.clone(), dual_point: sol.dual_point, dual_value: value };
            return Ok(MapDecision { problem, outcome: MapOutcome::NotExists(cert) });
        }
    };
    let e = e.expect("set above");
    if !g.mm(&e).approx_eq(b) || !e.is_nonnegative() || e.rank() != b.rank() {
        return Err(CopeError::Domain("reconstructed map failed verification".into()));
    }
    Ok(MapDecision { problem, outcome: MapOutcome::Exists { e } })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Trivial,
    FixedRank,
    Rank3Exact,
    CornerCertificate,
    #[serde(rename = "reduction+oracle")]
    ReductionOracle,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Trivial => "trivial",
            Route::FixedRank => "fixed-rank",
            Route::Rank3Exact => "rank3-exact",
            Route::CornerCertificate => "corner-certificate",
            Route::ReductionOracle => "reduction+oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EnmfVerdict<T: Scalar> {
    /// Verified model C = R E with rank R = rank E = rank C.
    Exists { r_factor: Matrix<T>, e_factor: Matrix<T> },
    /// The NNR oracle accepted the reduced matrix but no exact model could be extracted.
    OracleAccepted { residual: f64 },
    NotExists { reason: String, certificates: Vec<DualCertificate<T>> },
    Unknown { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnmfCertificate<T: Scalar> {
    pub verdict: EnmfVerdict<T>,
    pub inner_dim: usize,
    pub route: Route,
}

impl<T: Scalar> EnmfCertificate<T> {
    pub fn accepts(&self) -> bool {
        matches!(self.verdict, EnmfVerdict::Exists { .. } | EnmfVerdict::OracleAccepted { .. })
    }
    pub fn rejects(&self) -> bool {
        matches!(self.verdict, EnmfVerdict::NotExists { .. })
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self.verdict, EnmfVerdict::Unknown { .. })
    }
    pub fn dual_value(&self) -> Option<&T> {
        match &self.verdict {
            EnmfVerdict::NotExists { certificates, .. } => certificates.first().map(|c| &c.dual_value),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "k": self.inner_dim, "route": self.route.name() });
        match &self.verdict {
            EnmfVerdict::Exists { r_factor, e_factor } => {
                v["verdict"] = json!("exists");
                v["r_factor"] = json!(entries_as_strings(r_factor));
                v["e_factor"] = json!(entries_as_strings(e_factor));
            }
            EnmfVerdict::OracleAccepted { residual } => {
                v["verdict"] = json!("exists");
                v["oracle_residual"] = json!(residual);
            }
            EnmfVerdict::NotExists { reason, certificates } => {
                v["verdict"] = json!("not_exists");
                v["reason"] = json!(reason);
                v["certificates"] = certificates
                    .iter()
                    .map(|c| {
                        json!({
                            "dual_value": c.dual_value.to_string(),
                            "dual_certificate": c.dual_point.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "lp": {
                                "objective": c.lp.objective.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "constraint_matrix": entries_as_strings(&c.lp.constraint_matrix),
                                "rhs": c.lp.rhs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            }
                        })
                    })
                    .collect();
            }
            EnmfVerdict::Unknown { reason } => {
                v["verdict"] = json!("unknown");
                v["reason"] = json!(reason);
            }
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelCheck {
    pub passed: bool,
    pub failure: Option<String>,
    pub rank_c: usize,
    pub rank_r: usize,
    pub rank_e: usize,
}

/// Checks C = R E, nonnegativity, stochasticity and (optionally) equal ranks.
pub fn verify_model<T: Scalar>(c: &CopeMatrix<T>, r: &Matrix<T>, e: &Matrix<T>, require_noncontextual: bool) -> ModelCheck {
    let data = c.data();
    let mut out = ModelCheck { passed: false, failure: None, rank_c: data.rank(), rank_r: 0, rank_e: 0 };
    let fail = |mut out: ModelCheck, msg: String| {
        out.failure = Some(msg);
        out
    };
    if r.rows() != data.rows() || e.cols() != data.cols() || r.cols() != e.rows() {
        return fail(out, format!(
            "shapes {}x{} * {}x{} do not give {}x{}",
            r.rows(), r.cols(), e.rows(), e.cols(), data.rows(), data.cols()
        ));
    }
    out.rank_r = r.rank();
    out.rank_e = e.rank();
    if !r.mm(e).approx_eq(data) {
        return fail(out, "R E differs from C".into());
    }
    if !r.is_nonnegative() {
        return fail(out, "R has a negative entry".into());
    }
    if !e.is_nonnegative() {
        return fail(out, "E has a negative entry".into());
    }
    if let Some(j) = e.col_sums().iter().position(|s| !s.approx_eq(&T::one())) {
        return fail(out, format!("column {j} of E does not sum to 1"));
    }
    let total = c.column_total();
    if let Some(j) = r.col_sums().iter().position(|s| !s.approx_eq(&total)) {
        return fail(out, format!("column {j} of R does not sum to {total}"));
    }
    if require_noncontextual && !(out.rank_r == out.rank_c && out.rank_e == out.rank_c) {
        let msg = format!("rank-separated: rank R = {}, rank E = {}, rank C = {}", out.rank_r, out.rank_e, out.rank_c);
        return fail(out, msg);
    }
    out.passed = true;
    out
}

/// Every model the engine reports goes through here.
fn checked_exists<T: Scalar>(c: &CopeMatrix<T>, r: Matrix<T>, e: Matrix<T>) -> Result<EnmfVerdict<T>> {
    let check = verify_model(c, &r, &e, true);
    if !check.passed {
        return Err(CopeError::Domain(format!(
            "internal soundness check failed: {}",
            check.failure.unwrap_or_default()
        )));
    }
    Ok(EnmfVerdict::Exists { r_factor: r, e_factor: e })
}

/// Outer polytope data shared by the exact routes.
struct Outer<T: Scalar> {
    left: Matrix<T>,
    right: Matrix<T>,
    vertices: Matrix<T>,
}

fn outer_vertices<T: Scalar>(c: &CopeMatrix<T>) -> Result<Outer<T>> {
    let f = rank_factorize(c);
    let l = match c.form() {
        Form::A => c.l(),
        Form::B => 1,
    };
    let h = outer_from_effects(&f.left, l)?;
    let v = enumerate_vertices(&h)?;
    Ok(Outer { left: f.left, right: f.right, vertices: v.vertices().clone() })
}

/// Whether a model of any inner dimension exists, using the outer polytope's vertices as G.
pub fn enmf_exists_fixed_rank<T: Scalar>(c: &CopeMatrix<T>) -> Result<EnmfCertificate<T>> {
    let outer = outer_vertices(c)?;
    fixed_rank_model(c, &outer)
}

fn fixed_rank_model<T: Scalar>(c: &CopeMatrix<T>, outer: &Outer<T>) -> Result<EnmfCertificate<T>> {
    let k = outer.vertices.cols();
    let d = decide_nonneg_map(&outer.vertices, &outer.right)?;
    let verdict = match d.outcome {
        MapOutcome::Exists { e } => checked_exists(c, outer.left.mm(&outer.vertices), e)?,
        MapOutcome::NotExists(cert) => EnmfVerdict::NotExists {
            reason: format!("no rank-preserving map onto the {k} outer vertices"),
            certificates: vec![cert],
        },
    };
    Ok(EnmfCertificate { verdict, inner_dim: k, route: Route::FixedRank })
}

/// Zero padding: A_bar = [0 | A], B_bar = [0; B].
pub fn embed_cone<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, k: usize) -> Result<(Matrix<T>, Matrix<T>)> {
    let r = a.cols();
    if b.rows() != r {
        return Err(CopeError::Dimension(format!("A has {r} columns but B has {} rows", b.rows())));
    }
    if k < r {
        return Err(CopeError::Domain(format!("k = {k} is below the rank {r}")));
    }
    if k == r {
        return Ok((a.clone(), b.clone()));
    }
    Ok((
        Matrix::zeros(a.rows(), k - r).hstack(a),
        Matrix::zeros(k - r, b.cols()).vstack(b),
    ))
}

/// Appends the dichotomic rows (u - h^i)/2, (u + h^i)/2 for each padded coordinate i.
pub fn bound_outer<T: Scalar>(a_bar: &Matrix<T>, k: usize, r: usize, l: usize) -> Result<Matrix<T>> {
    if a_bar.cols() != k || k < r {
        return Err(CopeError::Dimension(format!("A_bar has {} columns, expected {k}", a_bar.cols())));
    }
    let lt = T::from_int(l as i64);
    let u: Vec<T> = a_bar.col_sums().into_iter().map(|s| s / &lt).collect();
    let half = T::from_rational(&crate::field::rat(1, 2));
    let mut rows = a_bar.row_vecs();
    for i in 0..k - r {
        for sign in [-1, 1] {
            let mut row: Vec<T> = u.iter().map(|x| x.clone() * &half).collect();
            row[i] = row[i].clone() + &(T::from_int(sign) * &half);
            rows.push(row);
        }
    }
    Matrix::from_rows(rows)
}

fn kernel_of_row<T: Scalar>(u: &[T]) -> Result<Vec<Vec<T>>> {
    Ok(Matrix::from_rows(vec![u.to_vec()])?.kernel())
}

/// Adds one vertex per padded coordinate, lifting the inner polytope into full dimension while
/// staying inside {A_b x >= 0}. Returns the extended vertex matrix and the heights.
pub fn extend_inner<T: Scalar>(b_bar: &Matrix<T>, a_h: &HPolytope<T>, k: usize, r: usize) -> Result<(Matrix<T>, Vec<T>)> {
    let a_b = &a_h.inequality_matrix;
    for j in 0..b_bar.cols() {
        if !a_h.contains(&b_bar.col(j)) {
            return Err(CopeError::Domain(format!("inner point {j} lies outside the outer polytope")));
        }
    }
    let u: Vec<T> = {
        let col = b_bar.col(0);
        // unit effect restricted to the original coordinates: any row combination works, take the column sums
        let sums = a_b.col_sums();
        let total = dot(&sums, &col);
        sums.into_iter().map(|s| s / &total).collect()
    };
    let x_dirs: Vec<Vec<T>> = kernel_of_row(&u[k - r..])?
        .into_iter()
        .map(|v| {
            let mut z = vec![T::zero(); k - r];
            z.extend(v);
            z
        })
        .collect();
    let mut points = b_bar.col_vecs();
    let mut heights = Vec::with_capacity(k - r);
    for i in 0..k - r {
        let body = VPolytope::new(&Matrix::from_cols(&points))?;
        let c = barycenter(&body);
        let s1 = inscribed_simplex(&body, &c)?;
        // local coordinates of span(B_i): earlier padded axes plus the x-plane directions
        let mut dirs: Vec<Vec<T>> = (0..i)
            .map(|j| {
                let mut e = vec![T::zero(); k];
                e[j] = T::one();
                e
            })
            .collect();
        dirs.extend(x_dirs.iter().cloned());
        let m = Matrix::from_cols(&dirs);
        let offsets: Vec<T> = a_b.mul_vec(&c).into_iter().map(|x| -x).collect();
        let local = HPolytope::new(a_b.mm(&m), offsets, vec![])?;
        let s2_local = circumscribed_simplex_h(&local, &vec![T::zero(); dirs.len()])?;
        let s2_cols: Vec<Vec<T>> = s2_local
            .vertices()
            .iter()
            .map(|w| crate::matrix::add_vec(&c, &m.mul_vec(w)))
            .collect();
        let s2 = SimplexBody(VPolytope::from_vertices_unchecked(Matrix::from_cols(&s2_cols)));
        let (d1, d2) = distances(&s1, &s2, &c);
        let z1 = round_pow2_exponent(&d1, Round::Down)?;
        let z2 = round_pow2_exponent(&d2, Round::Up)?;
        let h = T::from_rational(&pow2(z1.div_euclid(2) + (-z2).div_euclid(2)));
        let mut v = c.clone();
        v[i] = v[i].clone() + &h;
        if !a_h.contains(&v) {
            return Err(CopeError::Domain(format!("lifted vertex {i} left the outer polytope")));
        }
        points.push(v);
        heights.push(h);
    }
    Ok((Matrix::from_cols(&points), heights))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput<T: Scalar> {
    pub c_bar: Matrix<T>,
    pub a_bar_b: Matrix<T>,
    pub b_bar_b: Matrix<T>,
    pub heights: Vec<T>,
    pub block_heights: Vec<usize>,
    pub k: usize,
    pub r: usize,
    /// measurements of the input (1 for B-form)
    pub l: usize,
}

impl<T: Scalar> ReductionOutput<T> {
    pub fn c_bar_cope(&self) -> Result<CopeMatrix<T>> {
        validate_cope(self.c_bar.clone(), &self.block_heights)
    }
}

/// Builds C_bar whose nonnegative rank is k exactly when C has a model of inner dimension k.
pub fn reduce_to_nnr<T: Scalar>(c: &CopeMatrix<T>, k: usize) -> Result<ReductionOutput<T>> {
    let r = c.rank();
    if k < r || k > r * r {
        return Err(CopeError::Domain(format!("k = {k} outside [{r}, {}]", r * r)));
    }
    let f = rank_factorize(c);
    let l = match c.form() {
        Form::A => c.l(),
        Form::B => 1,
    };
    let (a_bar, b_bar) = embed_cone(&f.left, &f.right, k)?;
    let a_bar_b = bound_outer(&a_bar, k, r, l)?;
    let h = HPolytope::new(a_bar_b.clone(), vec![T::zero(); a_bar_b.rows()], vec![])?;
    let (b_bar_b, heights) = extend_inner(&b_bar, &h, k, r)?;
    let c_bar = a_bar_b.mm(&b_bar_b);
    let mut block_heights = match c.form() {
        Form::A => c.block_heights().to_vec(),
        Form::B => vec![c.rows()],
    };
    block_heights.extend(vec![2; k - r]);
    // rank C_bar = rank B_bar_b because A_bar_b has full column rank; the factors keep float pivots large
    let full = a_bar_b.rank() == k && b_bar_b.rank() == k;
    if !full || !c_bar.is_nonnegative() || !c_bar.block(0, 0, c.rows(), c.cols()).approx_eq(c.data()) {
        return Err(CopeError::Domain("reduced matrix failed its rank / sign / embedding checks".into()));
    }
    Ok(ReductionOutput { c_bar, a_bar_b, b_bar_b, heights, block_heights, k, r, l })
}

/// Planar outer vertices in cyclic order (indices into the vertex matrix).
fn cyclic_order<T: Scalar>(vertices: &Matrix<T>, u: &[T]) -> Option<Vec<usize>> {
    let drop = (0..u.len()).rev().find(|&i| !u[i].is_zero())?;
    let keep: Vec<usize> = (0..u.len()).filter(|&i| i != drop).collect();
    if keep.len() != 2 {
        return None;
    }
    let pts: Vec<Vec<T>> = vertices.col_vecs().iter().map(|v| vec![v[keep[0]].clone(), v[keep[1]].clone()]).collect();
    let hull = convex_hull_2d(&pts);
    if hull.len() != pts.len() {
        return None;
    }
    hull.iter().map(|h| pts.iter().position(|p| vec_eq(p, h))).collect()
}

/// Rejects inner dimension 4 for rank 3 with a pentagonal outer polygon: any quadrilateral in a
/// pentagon misses one corner triangle cut at the edge midpoints, so it suffices that none of the
/// five cut hexagons admits a rank-preserving map.
fn corner_certificate<T: Scalar>(c: &CopeMatrix<T>, outer: &Outer<T>) -> Result<EnmfCertificate<T>> {
    let unknown = |reason: &str| EnmfCertificate {
        verdict: EnmfVerdict::Unknown { reason: reason.into() },
        inner_dim: 4,
        route: Route::CornerCertificate,
    };
    let u = rank_factorize(c).unit_effect;
    let Some(order) = cyclic_order(&outer.vertices, &u) else {
        return Ok(unknown("outer polygon vertices could not be ordered"));
    };
    let v = outer.vertices.col_vecs();
    let half = T::from_rational(&crate::field::rat(1, 2));
    let mid = |a: &[T], b: &[T]| -> Vec<T> { a.iter().zip(b).map(|(x, y)| (x.clone() + y) * &half).collect() };
    let mut certificates = Vec::new();
    for pos in 0..5 {
        let prev = &v[order[(pos + 4) % 5]];
        let cur = &v[order[pos]];
        let next = &v[order[(pos + 1) % 5]];
        let mut cols: Vec<Vec<T>> = (1..5).map(|s| v[order[(pos + s) % 5]].clone()).collect();
        cols.push(mid(cur, next));
        cols.push(mid(prev, cur));
        let d = decide_nonneg_map(&Matrix::from_cols(&cols), &outer.right)?;
        match d.outcome {
            MapOutcome::NotExists(cert) => certificates.push(cert),
            MapOutcome::Exists { .. } => return Ok(unknown("a corner-cut hexagon admits a map")),
        }
    }
    Ok(EnmfCertificate {
        verdict: EnmfVerdict::NotExists {
            reason: "every corner-cut hexagon of the outer pentagon has a positive shear-LP optimum".into(),
            certificates,
        },
        inner_dim: 4,
        route: Route::CornerCertificate,
    })
}

/// Nested triangle test for rank 3: a triangle model is unique once its vertices are fixed.
fn rank3_triangle<T: Scalar>(c: &CopeMatrix<T>) -> Result<EnmfCertificate<T>> {
    let pair = planar_pair(c.data())?;
    let (kmin, g) = min_nested_polygon_2d(&pair.inner, &pair.outer)?;
    let verdict = if kmin == 3 {
        let (r, e) = pair.factors_from_polygon(&g, 3)?;
        checked_exists(c, r, e)?
    } else {
        EnmfVerdict::NotExists {
            reason: format!("the smallest polygon nested between inner and outer has {kmin} vertices"),
            certificates: vec![],
        }
    };
    Ok(EnmfCertificate { verdict, inner_dim: 3, route: Route::Rank3Exact })
}

/// Tries to turn an NMF of C_bar into an exact model of C; `None` if that fails.
fn extract_model<T: Scalar>(c: &CopeMatrix<T>, red: &ReductionOutput<T>, r_bar: &Matrix<T>) -> Option<(Matrix<T>, Matrix<T>)> {
    let w = pseudoinverse_full_col_rank(&red.a_bar_b).ok()?.mm(r_bar);
    let (k, r) = (red.k, red.r);
    let f = rank_factorize(c);
    let mut cols = Vec::new();
    for j in 0..w.cols() {
        let x: Vec<T> = w.col(j)[k - r..].to_vec();
        let s = dot(&f.unit_effect, &x);
        if s.is_positive() {
            cols.push(x.into_iter().map(|v| v / &s).collect::<Vec<T>>());
        }
    }
    if cols.len() < r {
        return None;
    }
    let g = Matrix::from_cols(&cols);
    let rf = f.left.mm(&g);
    if !rf.is_nonnegative() {
        return None;
    }
    match decide_nonneg_map(&g, &f.right).ok()?.outcome {
        MapOutcome::Exists { e } => {
            let (rf, e) = pad(rf, e, k);
            verify_model(c, &rf, &e, true).passed.then_some((rf, e))
        }
        MapOutcome::NotExists(_) => None,
    }
}

fn pad<T: Scalar>(r: Matrix<T>, e: Matrix<T>, k: usize) -> (Matrix<T>, Matrix<T>) {
    if r.cols() >= k {
        return (r, e);
    }
    let extra = k - r.cols();
    (r.hstack(&Matrix::zeros(r.rows(), extra)), e.vstack(&Matrix::zeros(extra, e.cols())))
}

fn reduction_step<T: Scalar>(c: &CopeMatrix<T>, k: usize, oracle: Oracle, seed: Option<u64>) -> Result<EnmfCertificate<T>> {
    let cert = |verdict| EnmfCertificate { verdict, inner_dim: k, route: Route::ReductionOracle };
    let red = match reduce_to_nnr(c, k) {
        Ok(red) => red,
        Err(e @ CopeError::Resource(_)) | Err(e @ CopeError::Domain(_)) => {
            return Ok(cert(EnmfVerdict::Unknown { reason: format!("reduction failed: {e}") }))
        }
        Err(e) => return Err(e),
    };
    let v = decide_nnr(&red.c_bar, k, oracle, seed)?;
    let verdict = match v.answer {
        NnrAnswer::Yes { r_factor, .. } => match extract_model(c, &red, &r_factor) {
            Some((r, e)) => checked_exists(c, r, e)?,
            None => EnmfVerdict::OracleAccepted { residual: 0.0 },
        },
        NnrAnswer::YesApprox { r_factor, residual, .. } => {
            let lifted: Option<Matrix<T>> = r_factor
                .entries()
                .iter()
                .map(|x: &Float| T::from_f64_lossy(x.0))
                .collect::<Option<Vec<T>>>()
                .map(|d| Matrix::from_vec(r_factor.rows(), r_factor.cols(), d));
            match lifted.and_then(|rf| extract_model(c, &red, &rf)) {
                Some((r, e)) => checked_exists(c, r, e)?,
                None => EnmfVerdict::OracleAccepted { residual },
            }
        }
        NnrAnswer::No { reason } => EnmfVerdict::NotExists {
            reason: format!("reduced matrix has nonnegative rank above {k}: {reason}"),
            certificates: vec![],
        },
        NnrAnswer::Unknown { restarts, best_residual } => EnmfVerdict::Unknown {
            reason: format!("oracle undecided after {restarts} restarts (best residual {best_residual:e})"),
        },
    };
    Ok(cert(verdict))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnnrOptions {
    pub max_k: Option<usize>,
    pub oracle: Oracle,
    pub seed: Option<u64>,
}

impl Default for EnnrOptions {
    fn default() -> Self {
        EnnrOptions { max_k: None, oracle: Oracle::Auto, seed: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnnrReport<T: Scalar> {
    pub rank: usize,
    /// Proven minimum inner dimension.
    pub value: Option<usize>,
    /// Smallest accepted k when earlier ones were left undecided.
    pub upper_bound: Option<usize>,
    pub unknown_at: Vec<usize>,
    /// No model of any inner dimension.
    pub no_model: bool,
    pub outer_vertex_count: Option<usize>,
    pub transcript: Vec<EnmfCertificate<T>>,
}

impl<T: Scalar> EnnrReport<T> {
    pub fn model(&self) -> Option<(&Matrix<T>, &Matrix<T>)> {
        self.transcript.iter().rev().find_map(|c| match &c.verdict {
            EnmfVerdict::Exists { r_factor, e_factor } if c.accepts() => Some((r_factor, e_factor)),
            _ => None,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "ennr": self.value,
            "upper_bound": self.upper_bound,
            "unknown_at": self.unknown_at,
            "no_model": self.no_model,
            "outer_vertices": self.outer_vertex_count,
            "transcript": self.transcript.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Smallest inner dimension of a model with rank R = rank E = rank C, scanning k = r..r^2.
pub fn ennr<T: Scalar>(c: &CopeMatrix<T>, opts: &EnnrOptions) -> Result<EnnrReport<T>> {
    let r = c.rank();
    let mut report = EnnrReport {
        rank: r,
        value: None,
        upper_bound: None,
        unknown_at: vec![],
        no_model: false,
        outer_vertex_count: None,
        transcript: vec![],
    };
    if r == 1 {
        let data = c.data();
        let rf = Matrix::from_cols(&[data.col(0)]);
        let e = Matrix::from_fn(1, data.cols(), |_, _| T::one());
        let verdict = checked_exists(c, rf, e)?;
        report.transcript.push(EnmfCertificate { verdict, inner_dim: 1, route: Route::Trivial });
        report.value = Some(1);
        report.upper_bound = Some(1);
        return Ok(report);
    }
    let (outer, global) = match outer_vertices(c) {
        Ok(outer) => {
            let cert = fixed_rank_model(c, &outer)?;
            (Some(outer), Some(cert))
        }
        Err(CopeError::Resource(msg)) => {
            report.transcript.push(EnmfCertificate {
                verdict: EnmfVerdict::Unknown { reason: msg },
                inner_dim: 0,
                route: Route::FixedRank,
            });
            (None, None)
        }
        Err(e) => return Err(e),
    };
    if let Some(g) = &global {
        report.outer_vertex_count = Some(g.inner_dim);
        if g.rejects() {
            report.transcript.push(g.clone());
            report.no_model = true;
            return Ok(report);
        }
    }
    let kmax = opts.max_k.map_or(r * r, |m| m.min(r * r));
    let big_k = report.outer_vertex_count;
    for k in r..=kmax {
        let cert = if big_k.is_some_and(|kk| k >= kk) {
            global.clone().expect("set with the vertex count")
        } else if r == 3 && k == 3 {
            rank3_triangle(c)?
        } else if r == 3 && k == 4 && big_k == Some(5) {
            corner_certificate(c, outer.as_ref().expect("vertex count known"))?
        } else {
            reduction_step(c, k, opts.oracle, opts.seed)?
        };
        let accepted = cert.accepts();
        if cert.is_unknown() {
            report.unknown_at.push(k);
        }
        report.transcript.push(cert);
        if accepted {
            report.upper_bound = Some(k);
            if report.unknown_at.is_empty() {
                report.value = Some(k);
            }
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticScalar as Q;
    use crate::io::MatrixFile;

    fn fixture(name: &str) -> MatrixFile {
        let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        MatrixFile::load(path).unwrap()
    }

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Q::int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn identity_map() {
        let g = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let d = decide_nonneg_map(&g, &g).unwrap();
        assert_eq!(d.outcome, MapOutcome::Exists { e: Matrix::identity(3) });
    }

    #[test]
    fn cut_corner_value() {
        let g = fixture("cut_corner_g2").radical_matrix().unwrap();
        let b = fixture("cut_corner_inner").radical_matrix().unwrap();
        let (g, b) = crate::io::strip_common_row_radicals(&g, &b).unwrap();
        let d = decide_nonneg_map(&g, &b).unwrap();
        let expected = Q::parse("(7/2)+(-3/2)*sqrt(5)", 5).unwrap();
        match d.outcome {
            MapOutcome::NotExists(cert) => assert_eq!(cert.dual_value, expected),
            other => panic!("{other:?}"),
        }
        let ebar: Matrix<Q> = fixture("cut_corner_ebar").matrix().unwrap();
        assert_eq!(d.problem.e_bar, ebar);
    }

    #[test]
    fn pentagon_pipeline() {
        let c: CopeMatrix<Q> = fixture("pentagon").cope().unwrap();
        let g = enmf_exists_fixed_rank(&c).unwrap();
        assert!(g.accepts());
        assert_eq!(g.inner_dim, 5);
        let rep = ennr(&c, &EnnrOptions::default()).unwrap();
        assert_eq!(rep.value, Some(5));
        let routes: Vec<Route> = rep.transcript.iter().map(|c| c.route).collect();
        assert_eq!(routes, vec![Route::Rank3Exact, Route::CornerCertificate, Route::FixedRank]);
        let expected = Q::parse("(7/2)+(-3/2)*sqrt(5)", 5).unwrap();
        match &rep.transcript[1].verdict {
            EnmfVerdict::NotExists { certificates, .. } => {
                assert_eq!(certificates.len(), 5);
                assert!(certificates.iter().all(|c| c.dual_value == expected));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pentagon_reduction_shape() {
        let c: CopeMatrix<Q> = fixture("pentagon").cope().unwrap();
        let red = reduce_to_nnr(&c, 5).unwrap();
        assert_eq!(red.c_bar.shape(), (9, 7));
        assert_eq!(red.a_bar_b.shape(), (9, 5));
        assert_eq!(red.heights.len(), 2);
        assert!(red.heights.iter().all(|h| h.is_positive()));
        let cc = red.c_bar_cope().unwrap();
        assert_eq!(cc.l(), 3);
        let same = reduce_to_nnr(&c, 3).unwrap();
        assert_eq!(&same.c_bar, c.data());
    }

    #[test]
    fn boxworld_has_no_model() {
        let c: CopeMatrix<Q> = fixture("boxworld").cope().unwrap();
        let rep = ennr(&c, &EnnrOptions::default()).unwrap();
        assert!(rep.no_model);
        assert!(rep.transcript[0].dual_value().unwrap().is_positive());
        let check = verify_model(&c, c.data(), &Matrix::identity(4), true);
        assert!(!check.passed);
        assert_eq!((check.rank_r, check.rank_e), (3, 4));
        assert!(verify_model(&c, c.data(), &Matrix::identity(4), false).passed);
    }

    #[test]
    fn pentagon_models() {
        let c: CopeMatrix<Q> = fixture("pentagon").cope().unwrap();
        let a2: Matrix<Q> = fixture("pentagon_a2").matrix().unwrap();
        let b2: Matrix<Q> = fixture("pentagon_b2").matrix().unwrap();
        assert!(verify_model(&c, &a2, &b2, false).passed);
        assert!(!verify_model(&c, &a2, &b2, true).passed);
        let a1: Matrix<Q> = fixture("pentagon_a1").matrix().unwrap();
        let b1: Matrix<Q> = fixture("pentagon_b1").matrix().unwrap();
        assert!(verify_model(&c, &a1, &b1, true).passed);
    }

    #[test]
    fn identity_cope() {
        let c = validate_cope(Matrix::<Q>::identity(4), &[4]).unwrap();
        let rep = ennr(&c, &EnnrOptions::default()).unwrap();
        assert_eq!(rep.value, Some(4));
    }

    #[test]
    fn float_pentagon() {
        let c: CopeMatrix<Float> = fixture("pentagon").cope().unwrap();
        let rep = ennr(&c, &EnnrOptions::default()).unwrap();
        assert_eq!(rep.value, Some(5));
        let v = rep.transcript[1].dual_value().unwrap().0;
        assert!((v - (7.0 - 3.0 * 5f64.sqrt()) / 2.0).abs() < 1e-9);
        let red = reduce_to_nnr(&c, 5).unwrap();
        assert_eq!(red.b_bar_b.rank(), 5);
    }

    #[test]
    fn oracle_path_never_rejects() {
        let c: CopeMatrix<Q> = fixture("pentagon").cope().unwrap();
        let cert = reduction_step(&c, 4, Oracle::Heuristic, Some(7)).unwrap();
        assert!(!cert.accepts(), "{:?}", cert.verdict);
        assert!(cert.is_unknown());
    }
}

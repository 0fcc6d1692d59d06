//! Report building and SVG rendering behind the `cope` binary.

use std::path::Path;

use cope_core::enmf::{ennr, reduce_to_nnr, verify_model, EnnrOptions, EnnrReport, ModelCheck};
use cope_core::io::{entries_as_strings, parse_csv, MatrixFile};
use cope_core::matrix::{check_rank_separation, RankSeparation};
use cope_core::nested2d::min_nested_polygon_2d;
use cope_core::nnr::{decide_nnr, digest, nnr_bounds, nnr_rank3, planar_pair, NnrAnswer, NnrVerdict, Oracle};
use cope_core::polytope::VPolytope;
use cope_core::{validate_cope, CopeError, CopeMatrix, Float, Matrix, QuadraticScalar, Result, Scalar};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl std::str::FromStr for Backend {
    type Err = CopeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(CopeError::Invalid(format!("unknown backend '{other}'"))),
        }
    }
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => QuadraticScalar::backend_name(),
            Backend::Float => Float::backend_name(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Flags {
    pub backend: Backend,
    pub max_k: Option<usize>,
    pub seed: Option<u64>,
    pub oracle: Oracle,
    /// Block heights for CSV input.
    pub blocks: Option<Vec<usize>>,
}

impl Default for Flags {
    fn default() -> Self {
        Flags { backend: Backend::Exact, max_k: None, seed: None, oracle: Oracle::Auto, blocks: None }
    }
}

impl Flags {
    fn ennr_options(&self) -> EnnrOptions {
        EnnrOptions { max_k: self.max_k, oracle: self.oracle, seed: self.seed }
    }
}

/// Source of a matrix: a file path or a shipped fixture (`fixture:NAME`).
pub fn load_file(source: &str) -> Result<MatrixFile> {
    match source.strip_prefix("fixture:") {
        Some(name) => cope_core::fixtures::fixture(name),
        None => MatrixFile::load(source),
    }
}

fn is_csv(source: &str) -> bool {
    Path::new(source).extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn from_float<T: Scalar>(m: &Matrix<Float>) -> Result<Matrix<T>> {
    let data = m
        .entries()
        .iter()
        .map(|x| T::from_f64_lossy(x.0).ok_or_else(|| CopeError::Invalid(format!("entry {x} is not representable"))))
        .collect::<Result<Vec<T>>>()?;
    Ok(Matrix::from_vec(m.rows(), m.cols(), data))
}

pub fn load_matrix<T: Scalar>(source: &str, flags: &Flags) -> Result<Matrix<T>> {
    if is_csv(source) {
        if flags.backend != Backend::Float {
            return Err(CopeError::Invalid("CSV input needs --backend float".into()));
        }
        let text = std::fs::read_to_string(source).map_err(|e| CopeError::Io(format!("{source}: {e}")))?;
        return from_float(&parse_csv(&text)?);
    }
    load_file(source)?.matrix()
}

pub fn load_cope<T: Scalar>(source: &str, flags: &Flags) -> Result<CopeMatrix<T>> {
    if is_csv(source) {
        let m = load_matrix::<T>(source, flags)?;
        let blocks = flags.blocks.clone().unwrap_or_else(|| vec![m.rows()]);
        return validate_cope(m, &blocks);
    }
    let file = load_file(source)?;
    let mut c = file.cope::<T>();
    if let (Some(blocks), Ok(_)) = (&flags.blocks, &c) {
        c = validate_cope(file.matrix()?, blocks);
    }
    c
}

pub fn matrix_json<T: Scalar>(m: &Matrix<T>) -> Value {
    json!(entries_as_strings(m))
}

pub fn nnr_verdict_json<T: Scalar>(v: &NnrVerdict<T>) -> Value {
    let mut out = json!({ "digest": v.digest, "k": v.k });
    match &v.answer {
        NnrAnswer::Yes { r_factor, e_factor } => {
            out["answer"] = json!("yes");
            out["r_factor"] = matrix_json(r_factor);
            out["e_factor"] = matrix_json(e_factor);
        }
        NnrAnswer::YesApprox { r_factor, e_factor, residual } => {
            out["answer"] = json!("yes");
            out["approximate"] = json!(true);
            out["residual"] = json!(residual);
            out["r_factor"] = matrix_json(r_factor);
            out["e_factor"] = matrix_json(e_factor);
        }
        NnrAnswer::No { reason } => {
            out["answer"] = json!("no");
            out["reason"] = json!(reason);
        }
        NnrAnswer::Unknown { restarts, best_residual } => {
            out["answer"] = json!("unknown");
            out["restarts"] = json!(restarts);
            out["best_residual"] = json!(best_residual);
        }
    }
    out
}

pub fn nnr_json<T: Scalar>(c: &Matrix<T>, k: Option<usize>, flags: &Flags) -> Result<Value> {
    if let Some(k) = k {
        return Ok(nnr_verdict_json(&decide_nnr(c, k, flags.oracle, flags.seed)?));
    }
    let b = nnr_bounds(c, flags.oracle, flags.seed)?;
    let mut out = json!({
        "digest": digest(c),
        "rank": c.rank(),
        "lower": b.lower,
        "upper": b.upper,
        "exact": b.exact,
        "nnr": if b.exact { json!(b.lower) } else { Value::Null },
    });
    if c.rank() == 3 && flags.oracle != Oracle::Heuristic {
        let (_, r, e) = nnr_rank3(c)?;
        out["method"] = json!("exact rank-3 geometry");
        out["r_factor"] = matrix_json(&r);
        out["e_factor"] = matrix_json(&e);
    } else if b.exact {
        out["method"] = json!("rank bound");
    } else {
        out["method"] = json!("rank bound and heuristic");
    }
    Ok(out)
}

fn separation_json(s: &RankSeparation) -> Value {
    match s {
        RankSeparation::EqualRanks(r) => json!({ "separated": false, "rank_r": r, "rank_e": r }),
        RankSeparation::Separated { rank_r, rank_e } => json!({ "separated": true, "rank_r": rank_r, "rank_e": rank_e }),
    }
}

/// Full report: rank, NNR, ENNR with transcript and the contextuality verdict.
pub fn analyze<T: Scalar>(c: &CopeMatrix<T>, flags: &Flags) -> Result<Value> {
    let data = c.data();
    let rank = c.rank();
    let nnr = nnr_json(data, None, flags)?;
    let report: EnnrReport<T> = ennr(c, &flags.ennr_options())?;
    let trivial = check_rank_separation(data, &Matrix::identity(data.cols()))?;
    let contextuality = if report.no_model {
        json!({
            "verdict": "contextual",
            "certificate": report.transcript.last().map(|t| t.to_json()),
        })
    } else if let Some((r, e)) = report.model() {
        json!({
            "verdict": "noncontextual",
            "model": { "r_factor": matrix_json(r), "e_factor": matrix_json(e) },
        })
    } else {
        json!({ "verdict": "undetermined" })
    };
    let nnr_value = nnr["nnr"].as_u64().map(|v| v as usize);
    let gap = match (nnr_value, report.value) {
        (Some(a), Some(b)) => json!(b > a),
        _ => Value::Null,
    };
    Ok(json!({
        "digest": digest(data),
        "backend": T::backend_name(),
        "tolerance": if T::is_exact() { Value::Null } else { json!(cope_core::field::tolerance()) },
        "rows": data.rows(),
        "cols": data.cols(),
        "l": c.l(),
        "rank": rank,
        "nnr": nnr,
        "ennr": report.to_json(),
        "contextuality": contextuality,
        "contextuality_gap": gap,
        "trivial_model": separation_json(&trivial),
    }))
}

pub fn summary(report: &Value) -> String {
    let ennr = &report["ennr"];
    let ennr_text = match (ennr["ennr"].as_u64(), ennr["upper_bound"].as_u64()) {
        (Some(v), _) => v.to_string(),
        (None, Some(u)) => format!("unknown (at most {u})"),
        (None, None) if ennr["no_model"] == json!(true) => "none (no noncontextual model)".into(),
        _ => "unknown".into(),
    };
    let nnr = &report["nnr"];
    let nnr_text = match nnr["nnr"].as_u64() {
        Some(v) => v.to_string(),
        None => format!("between {} and {}", nnr["lower"], nnr["upper"]),
    };
    let mut lines = vec![
        format!("digest   {}", report["digest"].as_str().unwrap_or("")),
        format!("backend  {}", report["backend"].as_str().unwrap_or("")),
        format!("size     {}x{}, {} measurement(s)", report["rows"], report["cols"], report["l"]),
        format!("rank     {}", report["rank"]),
        format!("NNR      {nnr_text}"),
        format!("ENNR     {ennr_text}"),
        format!("verdict  {}", report["contextuality"]["verdict"].as_str().unwrap_or("")),
    ];
    if report["contextuality_gap"] == json!(true) {
        lines.push("gap      every minimum-size model is contextual".into());
    }
    let t = &report["trivial_model"];
    lines.push(format!(
        "trivial  (C, I): rank R = {}, rank E = {}{}",
        t["rank_r"],
        t["rank_e"],
        if t["separated"] == json!(true) { ", rank-separated" } else { "" }
    ));
    for step in ennr["transcript"].as_array().into_iter().flatten() {
        lines.push(format!(
            "  k = {:<3} {:<20} {}",
            step["k"],
            step["route"].as_str().unwrap_or(""),
            step["verdict"].as_str().unwrap_or("")
        ));
    }
    lines.join("\n")
}

pub fn verify_json<T: Scalar>(c: &CopeMatrix<T>, r: &Matrix<T>, e: &Matrix<T>, noncontextual: bool) -> Result<(ModelCheck, Value)> {
    if r.rows() != c.rows() {
        return Err(CopeError::Dimension(format!("R has {} rows but C has {}", r.rows(), c.rows())));
    }
    if e.cols() != c.cols() {
        return Err(CopeError::Dimension(format!("E has {} columns but C has {}", e.cols(), c.cols())));
    }
    if r.cols() != e.rows() {
        return Err(CopeError::Dimension(format!("R has {} columns but E has {} rows", r.cols(), e.rows())));
    }
    let check = verify_model(c, r, e, noncontextual);
    let v = json!({
        "passed": check.passed,
        "failure": check.failure,
        "rank_c": check.rank_c,
        "rank_r": check.rank_r,
        "rank_e": check.rank_e,
        "inner_dim": r.cols(),
    });
    Ok((check, v))
}

pub fn reduce_file<T: Scalar>(c: &CopeMatrix<T>, k: usize) -> Result<MatrixFile> {
    let red = reduce_to_nnr(c, k)?;
    Ok(MatrixFile {
        description: Some(format!("reduced matrix for inner dimension {k} (rank {}, heights {})", red.r,
            red.heights.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", "))),
        radicand: red.c_bar.entries().iter().find_map(|x| x.to_quadratic().and_then(|q| q.radicand())).unwrap_or(5),
        l: Some(red.block_heights.len()),
        block_heights: Some(red.block_heights.clone()),
        entries: entries_as_strings(&red.c_bar),
        scaled_rows: vec![],
        scaled_cols: vec![],
    })
}

const SVG_SIZE: f64 = 400.0;
const SVG_MARGIN: f64 = 20.0;

fn polygon_points(p: &VPolytope<Float>) -> Vec<(f64, f64)> {
    p.vertex_list().iter().map(|v| (v[0].0, v[1].0)).collect()
}

/// Inner (green), outer (black) and minimal nested witness (red) polygons of a rank-3 matrix.
pub fn render_svg<T: Scalar>(c: &Matrix<T>) -> Result<String> {
    let rank = c.rank();
    if rank != 3 {
        return Err(CopeError::Domain(format!("rendering needs a rank-3 matrix (planar geometry), this one has rank {rank}")));
    }
    let pair = planar_pair(c)?;
    let (_, witness) = min_nested_polygon_2d(&pair.inner, &pair.outer)?;
    let layers = [
        (cope_core::polytope::to_float(&pair.outer), "black"),
        (cope_core::polytope::to_float(&witness), "red"),
        (cope_core::polytope::to_float(&pair.inner), "green"),
    ];
    // whiten by the outer polygon's vertex covariance: affine maps preserve nesting, and
    // affinely regular polygons come out regular
    let outer_pts = polygon_points(&layers[0].0);
    let nv = outer_pts.len() as f64;
    let (mx, my) = outer_pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / nv, b + y / nv));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &outer_pts {
        sxx += (x - mx) * (x - mx) / nv;
        sxy += (x - mx) * (y - my) / nv;
        syy += (y - my) * (y - my) / nv;
    }
    // inverse Cholesky factor of [[sxx, sxy], [sxy, syy]]
    let l11 = sxx.sqrt().max(1e-300);
    let l21 = sxy / l11;
    let l22 = (syy - l21 * l21).max(0.0).sqrt().max(1e-300);
    let whiten = |(x, y): (f64, f64)| {
        let u = (x - mx) / l11;
        (u, ((y - my) - l21 * u) / l22)
    };
    let layers: Vec<(Vec<(f64, f64)>, &str)> =
        layers.iter().map(|(p, c)| (polygon_points(p).into_iter().map(whiten).collect(), *c)).collect();
    let all: Vec<(f64, f64)> = layers.iter().flat_map(|(p, _)| p.iter().copied()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SVG_SIZE - 2.0 * SVG_MARGIN) / span;
    let map = |(x, y): (f64, f64)| {
        let px = SVG_MARGIN + (x - x0) * scale;
        let py = SVG_SIZE - SVG_MARGIN - (y - y0) * scale;
        // avoid "-0.000"
        (if px.abs() < 5e-4 { 0.0 } else { px }, if py.abs() < 5e-4 { 0.0 } else { py })
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
        s = SVG_SIZE
    );
    out.push_str(&format!("<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n", s = SVG_SIZE));
    for (pts, color) in &layers {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = map(*p);
            d.push_str(&format!("{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" }));
        }
        d.push('Z');
        out.push_str(&format!(
            "<path class=\"{color}\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

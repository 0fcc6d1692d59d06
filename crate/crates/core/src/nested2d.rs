//! Minimum-vertex convex polygon nested between two convex polygons.
//!
//! Start from a point x on the outer boundary and repeatedly follow the tangent to the
//! inner polygon (inner on the left) until the outer boundary: this greedy chain reaches
//! as far as any nested chain from x can. A k-gon exists iff some start closes up within
//! k steps. The k-fold map is piecewise Moebius in the boundary parameter, so it is enough
//! to test the breakpoints of the pieces and, inside a piece, the vertex of one quadratic.

use crate::error::{CopeError, Result};
use crate::field::Scalar;
use crate::matrix::{dot, sub_vec, Matrix};
use crate::polytope::{convex_hull_2d, orient, vec_eq, VPolytope};

#[derive(Clone, Debug)]
struct Pos<T: Scalar> {
    /// lap * N + edge
    lifted_edge: i64,
    t: T,
}

impl<T: Scalar> Pos<T> {
    fn cmp(&self, other: &Pos<T>) -> std::cmp::Ordering {
        self.lifted_edge.cmp(&other.lifted_edge).then(self.t.cmp_to(&other.t))
    }
}

/// (tangent vertex, exit edge) per step.
type Signature = Vec<(usize, usize)>;

struct Annulus<T: Scalar> {
    outer: Vec<Vec<T>>,
    inner: Vec<Vec<T>>,
}

impl<T: Scalar> Annulus<T> {
    fn n(&self) -> usize {
        self.outer.len()
    }

    fn edge(&self, e: usize) -> (&Vec<T>, &Vec<T>) {
        let n = self.n();
        (&self.outer[e % n], &self.outer[(e + 1) % n])
    }

    fn point(&self, edge: usize, t: &T) -> Vec<T> {
        let (a, b) = self.edge(edge);
        a.iter().zip(b).map(|(x, y)| x.clone() + &(t.clone() * &(y.clone() - x))).collect()
    }

    fn locate(&self, y: &[T]) -> Option<(usize, T)> {
        for e in 0..self.n() {
            let (a, b) = self.edge(e);
            if !orient(a, b, y).is_zero() {
                continue;
            }
            let d = sub_vec(b, a);
            let t = dot(&sub_vec(y, a), &d) / &dot(&d, &d);
            if !t.is_negative() && t.cmp_to(&T::one()).is_lt() {
                return Some((e, t));
            }
        }
        None
    }

    /// Inner vertex v with every inner vertex on the left (dir = 1) or right (dir = -1) of x -> v.
    fn tangent(&self, x: &[T], dir: i8) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (i, v) in self.inner.iter().enumerate() {
            if vec_eq(v, x) {
                continue;
            }
            if self.inner.iter().all(|w| {
                let s = orient(x, v, w).signum();
                s == 0 || s == dir
            }) {
                let diff = sub_vec(v, x);
                let dist = dot(&diff, &diff);
                if best.as_ref().is_none_or(|(_, d)| dist.cmp_to(d).is_gt()) {
                    best = Some((i, dist));
                }
            }
        }
        best.map(|(i, _)| i)
    }

    /// Farthest point of the outer polygon along the ray x + s d.
    fn exit(&self, x: &[T], d: &[T]) -> Option<Vec<T>> {
        let mut lam: Option<T> = None;
        for e in 0..self.n() {
            let (a, b) = self.edge(e);
            let ed = sub_vec(b, a);
            let rate = ed[0].clone() * &d[1] - ed[1].clone() * &d[0];
            if rate.is_negative() {
                let slack = orient(a, b, x);
                let s = slack / &(-rate);
                if lam.as_ref().is_none_or(|l| s.cmp_to(l).is_lt()) {
                    lam = Some(s);
                }
            }
        }
        let lam = lam?;
        Some(x.iter().zip(d).map(|(xi, di)| xi.clone() + &(lam.clone() * di)).collect())
    }

    fn step(&self, p: &Pos<T>, dir: i8) -> Option<(Pos<T>, (usize, usize))> {
        let n = self.n() as i64;
        let edge = p.lifted_edge.rem_euclid(n) as usize;
        let x = self.point(edge, &p.t);
        let v = self.tangent(&x, dir)?;
        let d = sub_vec(&self.inner[v], &x);
        let y = self.exit(&x, &d)?;
        let (e2, t2) = self.locate(&y)?;
        let base = p.lifted_edge - edge as i64;
        let cand = Pos { lifted_edge: base + e2 as i64, t: t2 };
        let here = Pos { lifted_edge: p.lifted_edge, t: p.t.clone() };
        let moved = match (dir > 0, cand.cmp(&here)) {
            (true, std::cmp::Ordering::Greater) | (false, std::cmp::Ordering::Less) => cand,
            (true, _) => Pos { lifted_edge: cand.lifted_edge + n, t: cand.t },
            (false, _) => Pos { lifted_edge: cand.lifted_edge - n, t: cand.t },
        };
        Some((moved, (v, e2)))
    }

    /// Greedy chain of k steps: visited points, end position and combinatorial signature.
    fn chain(&self, edge: usize, t: &T, k: usize) -> Option<(Vec<Vec<T>>, Pos<T>, Signature)> {
        let mut p = Pos { lifted_edge: edge as i64, t: t.clone() };
        let mut pts = Vec::with_capacity(k);
        let mut sig = Vec::with_capacity(k);
        for _ in 0..k {
            pts.push(self.point(p.lifted_edge.rem_euclid(self.n() as i64) as usize, &p.t));
            let (q, s) = self.step(&p, 1)?;
            sig.push(s);
            p = q;
        }
        Some((pts, p, sig))
    }

    fn closes(&self, edge: usize, t: &T, k: usize) -> Option<Vec<Vec<T>>> {
        let (pts, end, _) = self.chain(edge, t, k)?;
        let target = Pos { lifted_edge: edge as i64 + self.n() as i64, t: t.clone() };
        (!end.cmp(&target).is_lt()).then_some(pts)
    }

    /// Points where a line meets the outer boundary.
    fn line_hits(&self, a: &[T], b: &[T]) -> Vec<(usize, T)> {
        let d = sub_vec(b, a);
        let mut out = Vec::new();
        for e in 0..self.n() {
            let (p, q) = self.edge(e);
            let ed = sub_vec(q, p);
            let den = d[0].clone() * &ed[1] - d[1].clone() * &ed[0];
            if den.is_zero() {
                continue;
            }
            // a + s d = p + t ed
            let ap = sub_vec(p, a);
            let t = (ap[1].clone() * &d[0] - ap[0].clone() * &d[1]) / &den;
            if !t.is_negative() && t.cmp_to(&T::one()).is_lt() {
                out.push((e, t));
            }
        }
        out
    }

    fn base_breakpoints(&self) -> Vec<(usize, T)> {
        let mut out: Vec<(usize, T)> = (0..self.n()).map(|e| (e, T::zero())).collect();
        let m = self.inner.len();
        for j in 0..m {
            let (a, b) = (&self.inner[j], &self.inner[(j + 1) % m]);
            out.extend(self.line_hits(a, b));
            if let Some(p) = self.locate(a) {
                out.push(p);
            }
        }
        for q in &self.outer {
            for p in &self.inner {
                if !vec_eq(p, q) {
                    out.extend(self.line_hits(q, p));
                }
            }
        }
        out
    }
}

fn sort_dedup<T: Scalar>(mut v: Vec<(usize, T)>) -> Vec<(usize, T)> {
    v.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp_to(&b.1)));
    v.dedup_by(|a, b| a.0 == b.0 && a.1.approx_eq(&b.1));
    v
}

/// Moebius map through three samples, normalized so that c t + d > 0 at `probe`.
fn fit_moebius<T: Scalar>(samples: &[(T, T)], probe: &T) -> Option<[T; 4]> {
    let rows: Vec<Vec<T>> = samples
        .iter()
        .map(|(t, y)| vec![t.clone(), T::one(), -(t.clone() * y), -y.clone()])
        .collect();
    let ker = Matrix::from_rows(rows).ok()?.kernel();
    if ker.len() != 1 {
        return None;
    }
    let mut k = ker[0].clone();
    if (k[2].clone() * probe + &k[3]).is_negative() {
        k = k.into_iter().map(|x| -x).collect();
    }
    Some([k[0].clone(), k[1].clone(), k[2].clone(), k[3].clone()])
}

fn ccw_hull<T: Scalar>(p: &VPolytope<T>) -> Result<Vec<Vec<T>>> {
    if p.dim() != 2 {
        return Err(CopeError::Dimension(format!("expected planar polygons, got dimension {}", p.dim())));
    }
    let h = convex_hull_2d(&p.vertex_list());
    if h.len() < 3 {
        return Err(CopeError::Domain("polygon is not full-dimensional".into()));
    }
    Ok(h)
}

/// Minimum k and a k-gon G with inner ⊆ G ⊆ outer.
pub fn min_nested_polygon_2d<T: Scalar>(inner: &VPolytope<T>, outer: &VPolytope<T>) -> Result<(usize, VPolytope<T>)> {
    let outer = ccw_hull(outer)?;
    let inner = ccw_hull(inner)?;
    let no = outer.len();
    for p in &inner {
        for e in 0..no {
            if orient(&outer[e], &outer[(e + 1) % no], p).is_negative() {
                return Err(CopeError::Domain("inner polygon is not contained in the outer polygon".into()));
            }
        }
    }
    let ann = Annulus { outer, inner };
    let kmax = ann.inner.len().min(no);
    // breakpoints of the k-fold map: preimages of the base breakpoints under up to k-1 steps
    let mut layer = sort_dedup(ann.base_breakpoints());
    let mut cands = layer.clone();
    for _ in 1..kmax {
        layer = sort_dedup(
            layer
                .iter()
                .filter_map(|(e, t)| ann.step(&Pos { lifted_edge: *e as i64, t: t.clone() }, -1))
                .map(|(p, _)| (p.lifted_edge.rem_euclid(no as i64) as usize, p.t))
                .collect(),
        );
        cands.extend(layer.iter().cloned());
    }
    let cands = sort_dedup(cands);
    for k in 3..=kmax {
        if let Some(g) = search_k(&ann, &cands, k) {
            let hull = convex_hull_2d(&g);
            let poly = VPolytope::from_vertices_unchecked(Matrix::from_cols(&hull));
            return Ok((hull.len(), poly));
        }
    }
    let best = if ann.inner.len() <= no { ann.inner.clone() } else { ann.outer.clone() };
    Ok((best.len(), VPolytope::from_vertices_unchecked(Matrix::from_cols(&best))))
}

fn search_k<T: Scalar>(ann: &Annulus<T>, cands: &[(usize, T)], k: usize) -> Option<Vec<Vec<T>>> {
    for (e, t) in cands {
        if let Some(g) = ann.closes(*e, t, k) {
            return Some(g);
        }
    }
    let quarter = T::one() / &T::from_int(4);
    for (i, (e, ta)) in cands.iter().enumerate() {
        let tb = match cands.get(i + 1) {
            Some((e2, t2)) if e2 == e => t2.clone(),
            _ => T::one(),
        };
        let width = tb.clone() - ta;
        if !width.is_positive() {
            continue;
        }
        let ts: Vec<T> = (1..4).map(|j| ta.clone() + &(width.clone() * &quarter * &T::from_int(j))).collect();
        let mut samples = Vec::new();
        let mut sig0: Option<Signature> = None;
        let mut ok = true;
        for t in &ts {
            let Some((_, end, sig)) = ann.chain(*e, t, k) else {
                ok = false;
                break;
            };
            if end.lifted_edge != *e as i64 + ann.n() as i64 || sig0.as_ref().is_some_and(|s| *s != sig) {
                ok = false;
                break;
            }
            sig0 = Some(sig);
            samples.push((t.clone(), end.t));
        }
        if !ok {
            continue;
        }
        let Some([a, _b, c, d]) = fit_moebius(&samples, &ts[1]) else { continue };
        if !c.is_positive() {
            continue;
        }
        let tstar = (a - &d) / &(c * &T::from_int(2));
        if tstar.cmp_to(ta).is_gt() && tstar.cmp_to(&tb).is_lt() {
            if let Some(g) = ann.closes(*e, &tstar, k) {
                return Some(g);
            }
        }
    }
    None
}

/// Every inner vertex in G and every G vertex in the outer polygon.
pub fn is_nested<T: Scalar>(inner: &VPolytope<T>, g: &VPolytope<T>, outer: &VPolytope<T>) -> Result<bool> {
    for v in inner.vertex_list() {
        if !g.contains(&v)? {
            return Ok(false);
        }
    }
    for v in g.vertex_list() {
        if !outer.contains(&v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticScalar as Q;

    fn poly(pts: &[(i64, i64)], den: i64) -> VPolytope<Q> {
        let cols: Vec<Vec<Q>> = pts.iter().map(|&(x, y)| vec![Q::frac(x, den), Q::frac(y, den)]).collect();
        VPolytope::from_vertices_unchecked(Matrix::from_cols(&cols))
    }

    #[test]
    fn self_nesting_square() {
        let sq = poly(&[(0, 0), (1, 0), (1, 1), (0, 1)], 1);
        let (k, g) = min_nested_polygon_2d(&sq, &sq).unwrap();
        assert_eq!(k, 4);
        assert!(is_nested(&sq, &g, &sq).unwrap());
    }

    #[test]
    fn small_square_in_big_triangle_room() {
        let inner = poly(&[(4, 4), (6, 4), (6, 6), (4, 6)], 1);
        let outer = poly(&[(0, 0), (10, 0), (10, 10), (0, 10)], 1);
        let (k, g) = min_nested_polygon_2d(&inner, &outer).unwrap();
        assert_eq!(k, 3);
        assert!(is_nested(&inner, &g, &outer).unwrap());
    }

    #[test]
    fn tight_square_needs_four() {
        // box-world geometry: the inner square touches the midpoints of the outer square
        let inner = poly(&[(1, 0), (2, 1), (1, 2), (0, 1)], 1);
        let outer = poly(&[(0, 0), (2, 0), (2, 2), (0, 2)], 1);
        let (k, g) = min_nested_polygon_2d(&inner, &outer).unwrap();
        assert_eq!(k, 4);
        assert!(is_nested(&inner, &g, &outer).unwrap());
    }

    #[test]
    fn rejects_non_nested_input() {
        let a = poly(&[(0, 0), (1, 0), (0, 1)], 1);
        let b = poly(&[(0, 0), (3, 0), (0, 3)], 1);
        assert!(min_nested_polygon_2d(&b, &a).is_err());
    }
}

use cope_core::enmf::{build_shear_lp, decide_nonneg_map, reduce_to_nnr, verify_model, MapOutcome};
use cope_core::fixtures::fixture;
use cope_core::io::strip_common_row_radicals;
use cope_core::lp::{solve, verify_certificate, LpStatus};
use cope_core::matrix::{check_rank_separation, RankSeparation};
use cope_core::nnr::nnr_rank3;
use cope_core::polytope::{barycenter, project_affine, vec_eq, HPolytope, VPolytope};
use cope_core::{CopeMatrix, Float, Matrix, QuadraticScalar as Q, Scalar};

fn q(s: &str) -> Q {
    Q::parse(s, 5).unwrap()
}

fn golden_value() -> Q {
    q("(7/2)+(-3/2)*sqrt(5)")
}

fn cut_corner() -> (Matrix<Q>, Matrix<Q>) {
    let g = fixture("cut_corner_g2").unwrap().radical_matrix().unwrap();
    let b = fixture("cut_corner_inner").unwrap().radical_matrix().unwrap();
    strip_common_row_radicals(&g, &b).unwrap()
}

#[test]
fn cut_corner_lp_optimum_and_dual() {
    let (g, b) = cut_corner();
    let p = build_shear_lp(&g, &b).unwrap();
    let ebar: Matrix<Q> = fixture("cut_corner_ebar").unwrap().matrix().unwrap();
    assert_eq!(p.e_bar, ebar);
    let sol = solve(&p.lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert_eq!(sol.primal_value, golden_value());
    assert_eq!(sol.dual_value, golden_value());
    let (ok, v) = verify_certificate(&p.lp, &sol.dual_point).unwrap();
    assert!(ok);
    assert_eq!(v, golden_value());
}

#[test]
fn published_dual_point_is_feasible() {
    let (g, b) = cut_corner();
    let p = build_shear_lp(&g, &b).unwrap();
    let y: Matrix<Q> = fixture("cut_corner_dual").unwrap().matrix().unwrap();
    // column-major, matching the S variables
    let flat: Vec<Q> = (0..y.cols()).flat_map(|s| y.col(s)).collect();
    let (ok, v) = verify_certificate(&p.lp, &flat).unwrap();
    assert!(ok);
    assert_eq!(v, golden_value());
}

#[test]
fn cut_corner_in_float() {
    let (g, b) = cut_corner();
    let gf = g.map(|x| Float(x.to_f64()));
    let bf = b.map(|x| Float(x.to_f64()));
    match decide_nonneg_map(&gf, &bf).unwrap().outcome {
        MapOutcome::NotExists(c) => assert!((c.dual_value.0 - 0.145898033750315).abs() < 1e-9),
        other => panic!("{other:?}"),
    }
}

#[test]
fn explicit_models() {
    let c: CopeMatrix<Q> = fixture("pentagon").unwrap().cope().unwrap();
    let a1: Matrix<Q> = fixture("pentagon_a1").unwrap().matrix().unwrap();
    let b1: Matrix<Q> = fixture("pentagon_b1").unwrap().matrix().unwrap();
    assert_eq!(&a1.mm(&b1), c.data());
    assert_eq!((a1.rank(), b1.rank(), c.rank()), (3, 3, 3));
    assert!(verify_model(&c, &a1, &b1, true).passed);

    let a2: Matrix<Q> = fixture("pentagon_a2").unwrap().matrix().unwrap();
    let b2: Matrix<Q> = fixture("pentagon_b2").unwrap().matrix().unwrap();
    assert_eq!(&a2.mm(&b2), c.data());
    assert!(!verify_model(&c, &a2, &b2, true).passed);
    assert!(matches!(check_rank_separation(&a2, &b2).unwrap(), RankSeparation::Separated { .. }));

    let qa = fixture("pentagon_quantum_a").unwrap().radical_matrix().unwrap();
    let qb = fixture("pentagon_quantum_b").unwrap().radical_matrix().unwrap();
    let prod = qa.product(&qb).unwrap().into_plain().unwrap();
    assert_eq!(&prod, c.data());
    assert_eq!((qa.base.rows(), qa.base.cols()), (5, 3));
}

#[test]
fn outer_pentagon_product() {
    let a = fixture("pentagon_outer_effects").unwrap().radical_matrix().unwrap();
    let b = fixture("pentagon_inner_states").unwrap().radical_matrix().unwrap();
    let c: Matrix<Q> = fixture("pentagon").unwrap().matrix().unwrap();
    assert_eq!(a.product(&b).unwrap().into_plain().unwrap(), c);
}

#[test]
fn projected_simplex_is_scaled_inner_pentagon() {
    let y: Matrix<Q> = fixture("pentagon_embedded_inner").unwrap().matrix().unwrap();
    let u: Matrix<Q> = fixture("pentagon_embedded_outer").unwrap().matrix().unwrap();
    let inner = VPolytope::new(&y).unwrap();
    let span = Matrix::from_cols(&y.col_vecs()[..3]);
    let proj = project_affine(&VPolytope::from_vertices_unchecked(u), &span).unwrap();
    let c = barycenter(&inner);
    let ratio = q("(-1/2)+(1/2)*sqrt(5)");
    let pv = proj.vertex_list();
    let iv = inner.vertex_list();
    let mut used = vec![false; 5];
    for p in &pv {
        let d: Vec<Q> = p.iter().zip(&c).map(|(a, b)| a.clone() - b).collect();
        // the inner vertex in the same direction, at ratio times the distance
        let hit = (0..5).find(|&j| {
            let e: Vec<Q> = iv[j].iter().zip(&c).map(|(a, b)| a.clone() - b).collect();
            vec_eq(&e, &d.iter().map(|x| x.clone() * &ratio).collect::<Vec<_>>())
        });
        let j = hit.expect("projected vertex is a scaled inner vertex");
        assert!(!used[j]);
        used[j] = true;
    }
}

#[test]
fn reduction_integrity() {
    let c: CopeMatrix<Q> = fixture("pentagon").unwrap().cope().unwrap();
    let red = reduce_to_nnr(&c, 5).unwrap();
    assert!(red.c_bar.is_nonnegative());
    assert_eq!(red.c_bar.rank(), 5);
    assert_eq!(&red.c_bar.block(0, 0, 5, 5), c.data());
    let outer = HPolytope::new(red.a_bar_b.clone(), vec![Q::zero(); red.a_bar_b.rows()], vec![]).unwrap();
    for v in red.b_bar_b.col_vecs() {
        assert!(outer.contains(&v));
    }
    for h in &red.heights {
        assert!(h.is_positive());
        let z = cope_core::field::round_pow2_exponent(h, cope_core::Round::Down).unwrap();
        assert_eq!(Q::from_rational(&cope_core::field::pow2(z)), *h);
    }
    let cc = red.c_bar_cope().unwrap();
    for s in cc.data().col_sums() {
        assert_eq!(s, Q::int(3));
    }
}

#[test]
fn boxworld_geometry() {
    let c: Matrix<Q> = fixture("boxworld").unwrap().matrix().unwrap();
    assert_eq!(c.rank(), 3);
    let (k, r, e) = nnr_rank3(&c).unwrap();
    assert_eq!(k, 4);
    assert_eq!(r.mm(&e), c);
    assert_eq!(
        check_rank_separation(&c, &Matrix::identity(4)).unwrap(),
        RankSeparation::Separated { rank_r: 3, rank_e: 4 }
    );
}

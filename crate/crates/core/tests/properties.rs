use cope_core::cope::{rank_factorize, validate_cope};
use cope_core::enmf::{build_shear_lp_with_bases, decide_nonneg_map, enmf_exists_fixed_rank, MapOutcome};
use cope_core::fixtures::fixture;
use cope_core::io::MatrixFile;
use cope_core::lp::{solve, verify_certificate, LinearProgram, LpStatus};
use cope_core::matrix::orthogonal_bases;
use cope_core::nnr::nnr_rank3;
use cope_core::polytope::convex_hull_2d;
use cope_core::{CopeMatrix, Float, Matrix, QuadraticScalar as Q, Scalar};
use proptest::prelude::*;

fn qm(rows: usize, cols: usize, v: &[i64]) -> Matrix<Q> {
    Matrix::from_fn(rows, cols, |i, j| Q::int(v[i * cols + j]))
}

fn cope_strategy() -> impl Strategy<Value = (Vec<usize>, usize, Vec<i64>)> {
    (prop::collection::vec(2usize..4, 1..4), 1usize..6).prop_flat_map(|(heights, n)| {
        let len = heights.iter().sum::<usize>() * n;
        (Just(heights), Just(n), prop::collection::vec(0i64..6, len))
    })
}

fn stochastic_blocks(heights: &[usize], n: usize, raw: &[i64]) -> Matrix<Q> {
    let rows: usize = heights.iter().sum();
    let mut m = qm(rows, n, raw);
    let mut top = 0;
    for &h in heights {
        for j in 0..n {
            // no zero rows, no zero column sums
            m[(top + j % h, j)] = m[(top + j % h, j)].clone() + &Q::int(1);
        }
        for i in top..top + h {
            m[(i, i % n)] = m[(i, i % n)].clone() + &Q::int(1);
        }
        for j in 0..n {
            let s = (top..top + h).fold(Q::zero(), |a, i| a + &m[(i, j)]);
            for i in top..top + h {
                m[(i, j)] = m[(i, j)].clone() / &s;
            }
        }
        top += h;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cope_round_trip((heights, n, raw) in cope_strategy()) {
        let data = stochastic_blocks(&heights, n, &raw);
        let c = validate_cope(data, &heights).unwrap();
        let text = MatrixFile::from_cope(&c, None).to_json();
        let back: CopeMatrix<Q> = MatrixFile::from_json(&text).unwrap().cope().unwrap();
        prop_assert_eq!(&back, &c);
        let f = rank_factorize(&c);
        prop_assert_eq!(f.left.mm(&f.right), c.data().clone());
        prop_assert_eq!(f.inner_dim, c.rank());
        prop_assert!(f.right.col_sums().iter().all(|s| *s == Q::one()));
    }

    #[test]
    fn lp_strong_duality(
        (m, n) in (1usize..5, 1usize..5),
        a in prop::collection::vec(-4i64..5, 16),
        x0 in prop::collection::vec(0i64..4, 4),
        slack in prop::collection::vec(0i64..3, 4),
        c in prop::collection::vec(0i64..5, 4),
    ) {
        let am = qm(m, n, &a[..m * n]);
        let x: Vec<Q> = x0[..n].iter().map(|&v| Q::int(v)).collect();
        let b: Vec<Q> = (0..m).map(|i| {
            (0..n).fold(Q::int(-slack[i]), |acc, j| acc + &(am[(i, j)].clone() * &x[j]))
        }).collect();
        let lp = LinearProgram::new(c[..n].iter().map(|&v| Q::int(v)).collect(), am.clone(), b.clone()).unwrap();
        let sol = solve(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert_eq!(&sol.primal_value, &sol.dual_value);
        let (ok, v) = verify_certificate(&lp, &sol.dual_point).unwrap();
        prop_assert!(ok);
        prop_assert_eq!(v, sol.primal_value.clone());
        prop_assert!(sol.primal_point.iter().all(|v| !v.is_negative()));
        for i in 0..m {
            let lhs = (0..n).fold(Q::zero(), |acc, j| acc + &(am[(i, j)].clone() * &sol.primal_point[j]));
            prop_assert!(!(lhs - &b[i]).is_negative());
        }
    }
}

fn planted_strategy() -> impl Strategy<Value = (usize, usize, usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (2usize..4, 1usize..3, 3usize..6).prop_flat_map(|(r, extra, n)| {
        let k = r + extra;
        (
            Just(r),
            Just(k),
            Just(n),
            prop::collection::vec(-3i64..4, r * k),
            prop::collection::vec(0i64..4, k * r),
            prop::collection::vec(0i64..4, r * n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn planted_nonnegative_map_is_found((r, k, n, g, p, w) in planted_strategy()) {
        let g = qm(r, k, &g);
        prop_assume!(g.rank() == r);
        let e0 = qm(k, r, &p).mm(&qm(r, n, &w));
        prop_assume!(e0.rank() == r);
        let b = g.mm(&e0);
        prop_assume!(b.rank() == r);
        let d = decide_nonneg_map(&g, &b).unwrap();
        match d.outcome {
            MapOutcome::Exists { e } => {
                prop_assert_eq!(g.mm(&e), b);
                prop_assert!(e.is_nonnegative());
                prop_assert_eq!(e.rank(), r);
            }
            MapOutcome::NotExists(c) => prop_assert!(false, "rejected with value {}", c.dual_value),
        }
    }

    #[test]
    fn random_map_decisions_carry_valid_certificates((r, k, n, g, _p, _w) in planted_strategy(), bsign in prop::collection::vec(-2i64..4, 3 * 5)) {
        let g = qm(r, k, &g);
        prop_assume!(g.rank() == r);
        let b = qm(r, n, &bsign[..r * n]);
        prop_assume!(b.rank() == r);
        let d = decide_nonneg_map(&g, &b).unwrap();
        if let MapOutcome::NotExists(c) = d.outcome {
            let (ok, v) = verify_certificate(&c.lp, &c.dual_point).unwrap();
            prop_assert!(ok);
            prop_assert!(v.is_positive());
        }
    }

    #[test]
    fn polygon_nnr_matches_planted_geometry(
        pts in prop::collection::vec((-8i64..9, -8i64..9), 3..8),
        triangle in any::<bool>(),
    ) {
        let pts: Vec<Vec<Q>> = pts.iter().map(|&(x, y)| vec![Q::int(x), Q::int(y)]).collect();
        let outer = convex_hull_2d(&pts);
        prop_assume!((3..=5).contains(&outer.len()));
        let centroid: Vec<Q> = (0..2).map(|d| outer.iter().fold(Q::zero(), |a, p| a + &p[d]) / &Q::int(outer.len() as i64)).collect();
        let mut inner: Vec<Vec<Q>> = if triangle {
            // midpoints of three consecutive vertices towards the centroid
            outer[..3].iter().map(|p| (0..2).map(|d| (p[d].clone() + &centroid[d]) / &Q::int(2)).collect()).collect()
        } else {
            outer.clone()
        };
        inner.push(centroid.clone());
        let m = outer.len();
        let c = Matrix::from_fn(m, inner.len(), |i, j| {
            let (a, b) = (&outer[i], &outer[(i + 1) % m]);
            let q = &inner[j];
            (b[0].clone() - &a[0]) * &(q[1].clone() - &a[1]) - (b[1].clone() - &a[1]) * &(q[0].clone() - &a[0])
        });
        prop_assert!(c.is_nonnegative());
        prop_assert_eq!(c.rank(), 3);
        let (k, rf, ef) = nnr_rank3(&c).unwrap();
        prop_assert_eq!(k, if triangle { 3 } else { m });
        prop_assert_eq!(rf.mm(&ef), c);
        prop_assert!(rf.is_nonnegative() && ef.is_nonnegative());
    }

    #[test]
    fn shear_lp_value_ignores_basis_scaling(
        (r, k, n, g, _p, _w) in planted_strategy(),
        b in prop::collection::vec(-3i64..5, 15),
        scales in prop::collection::vec(1u32..40, 8),
    ) {
        let gq = qm(r, k, &g);
        prop_assume!(gq.rank() == r);
        let bq = qm(r, n, &b[..r * n]);
        let gf = gq.map(|x| Float(x.to_f64()));
        let bf = bq.map(|x| Float(x.to_f64()));
        let (rows, kernel) = orthogonal_bases(&gf);
        let mut s = scales.iter().map(|&v| Float(v as f64 / 7.0));
        let scaled = |v: &Vec<Float>, a: Float| v.iter().map(|x| *x * a).collect::<Vec<_>>();
        let rows2: Vec<_> = rows.iter().map(|v| scaled(v, s.next().unwrap())).collect();
        let kernel2: Vec<_> = kernel.iter().map(|v| scaled(v, s.next().unwrap())).collect();
        let p1 = build_shear_lp_with_bases(&gf, &bf, rows, kernel).unwrap();
        let p2 = build_shear_lp_with_bases(&gf, &bf, rows2, kernel2).unwrap();
        let v1 = solve(&p1.lp).unwrap();
        let v2 = solve(&p2.lp).unwrap();
        prop_assert_eq!(v1.status, LpStatus::Optimal);
        prop_assert_eq!(v2.status, LpStatus::Optimal);
        prop_assert!((v1.primal_value.0 - v2.primal_value.0).abs() < 1e-7, "{} vs {}", v1.primal_value, v2.primal_value);
    }
}

#[test]
fn backends_agree_on_examples() {
    for name in ["boxworld", "identity4", "pentagon"] {
        let file = fixture(name).unwrap();
        let cq: CopeMatrix<Q> = file.cope().unwrap();
        let cf: CopeMatrix<Float> = file.cope().unwrap();
        assert_eq!(cq.rank(), cf.rank(), "{name}");
        let eq = enmf_exists_fixed_rank(&cq).unwrap();
        let ef = enmf_exists_fixed_rank(&cf).unwrap();
        assert_eq!((eq.accepts(), eq.rejects()), (ef.accepts(), ef.rejects()), "{name}");
        if cq.rank() == 3 {
            assert_eq!(nnr_rank3(cq.data()).unwrap().0, nnr_rank3(cf.data()).unwrap().0, "{name}");
        }
    }
}

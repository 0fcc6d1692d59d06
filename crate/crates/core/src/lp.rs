//! Dense two-phase simplex with Bland's rule, exact over any [`Scalar`] backend.
//!
//! Standard form: minimize c^T x subject to A x >= b, x >= 0, with dual
//! maximize b^T y subject to A^T y <= c, y >= 0.

use serde::Serialize;

use crate::error::{CopeError, Result};
use crate::field::Scalar;
use crate::matrix::{dot, Matrix};

/// Numerator bit limit for tableau entries (2^16 bits).
pub const MAX_ENTRY_BITS: u64 = 1 << 16;
const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T: Scalar> {
    pub objective: Vec<T>,
    pub constraint_matrix: Matrix<T>,
    pub rhs: Vec<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T: Scalar> {
    pub status: LpStatus,
    pub primal_point: Vec<T>,
    pub primal_value: T,
    pub dual_point: Vec<T>,
    pub dual_value: T,
    /// Farkas vector y (y >= 0, A^T y <= 0, b^T y > 0) when infeasible; ray d (A d >= 0, d >= 0, c^T d < 0) when unbounded.
    pub certificate: Vec<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Ge,
    Eq,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(objective: Vec<T>, constraint_matrix: Matrix<T>, rhs: Vec<T>) -> Result<Self> {
        if objective.len() != constraint_matrix.cols() || rhs.len() != constraint_matrix.rows() {
            return Err(CopeError::Dimension(format!(
                "objective {} / matrix {}x{} / rhs {}",
                objective.len(),
                constraint_matrix.rows(),
                constraint_matrix.cols(),
                rhs.len()
            )));
        }
        Ok(LinearProgram { objective, constraint_matrix, rhs })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }
}

pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
    let kinds = vec![RowKind::Ge; lp.num_constraints()];
    solve_general(&lp.objective, &lp.constraint_matrix, &lp.rhs, &kinds)
}

/// Checks A^T y <= c and y >= 0; returns (feasible, b^T y).
pub fn verify_certificate<T: Scalar>(lp: &LinearProgram<T>, candidate_dual: &[T]) -> Result<(bool, T)> {
    if candidate_dual.len() != lp.num_constraints() {
        return Err(CopeError::Dimension(format!(
            "dual vector has length {}, expected {}",
            candidate_dual.len(),
            lp.num_constraints()
        )));
    }
    let value = dot(&lp.rhs, candidate_dual);
    if candidate_dual.iter().any(|y| y.is_negative()) {
        return Ok((false, value));
    }
    let a = &lp.constraint_matrix;
    for j in 0..a.cols() {
        let s = (0..a.rows()).fold(T::zero(), |acc, i| {
            if candidate_dual[i].is_zero() || a[(i, j)].is_zero() {
                acc
            } else {
                acc + &(a[(i, j)].clone() * &candidate_dual[i])
            }
        });
        if (s - &lp.objective[j]).is_positive() {
            return Ok((false, value));
        }
    }
    Ok((true, value))
}

/// Feasibility of {x >= 0 : A x = b}; returns a point if one exists.
pub fn find_nonnegative_solution<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Option<Vec<T>>> {
    let kinds = vec![RowKind::Eq; a.rows()];
    let c = vec![T::zero(); a.cols()];
    let sol = solve_general(&c, a, b, &kinds)?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.primal_point),
        _ => None,
    })
}

struct Tableau<T: Scalar> {
    rows: usize,
    cols: usize,
    t: Vec<T>,
    rhs: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    fn at(&self, i: usize, j: usize) -> &T {
        &self.t[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        let piv = self.at(r, c).clone();
        let cols = self.cols;
        for j in 0..cols {
            if !self.t[r * cols + j].is_zero() {
                self.t[r * cols + j] = self.t[r * cols + j].clone() / &piv;
            }
        }
        self.rhs[r] = self.rhs[r].clone() / &piv;
        let prow: Vec<(usize, T)> = (0..cols)
            .filter(|&j| !self.t[r * cols + j].is_zero())
            .map(|j| (j, self.t[r * cols + j].clone()))
            .collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * cols + c].clone();
            if f.is_zero() {
                continue;
            }
            for (j, v) in &prow {
                let idx = i * cols + j;
                self.t[idx] = self.t[idx].clone() - &(f.clone() * v);
            }
            self.t[i * cols + c] = T::zero();
            self.rhs[i] = self.rhs[i].clone() - &(f * &prhs);
        }
        self.basis[r] = c;
        if T::is_exact() {
            let bits = self.t.iter().chain(&self.rhs).map(|x| x.bit_size()).max().unwrap_or(0);
            if bits > MAX_ENTRY_BITS {
                return Err(CopeError::Resource(format!(
                    "simplex tableau entry grew to {bits} bits (limit {MAX_ENTRY_BITS})"
                )));
            }
        }
        Ok(())
    }

    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        (0..self.cols)
            .map(|j| {
                let mut z = cost[j].clone();
                for i in 0..self.rows {
                    let a = self.at(i, j);
                    if !a.is_zero() && !cost[self.basis[i]].is_zero() {
                        z = z - &(cost[self.basis[i]].clone() * a);
                    }
                }
                z
            })
            .collect()
    }

    /// Runs Bland's rule; Err(col) reports an unbounded entering column.
    fn optimize(&mut self, cost: &[T], allowed: &[bool]) -> Result<std::result::Result<(), usize>> {
        for _ in 0..MAX_PIVOTS {
            let z = self.reduced_costs(cost);
            let Some(enter) = (0..self.cols).find(|&j| allowed[j] && z[j].is_negative()) else {
                return Ok(Ok(()));
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows {
                let a = self.at(i, enter);
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => match ratio.cmp_to(&lr) {
                        std::cmp::Ordering::Less => Some((i, ratio)),
                        std::cmp::Ordering::Equal if self.basis[i] < self.basis[li] => Some((i, ratio)),
                        _ => Some((li, lr)),
                    },
                };
            }
            match leave {
                None => return Ok(Err(enter)),
                Some((r, _)) => self.pivot(r, enter)?,
            }
        }
        Err(CopeError::Resource(format!("simplex exceeded {MAX_PIVOTS} pivots")))
    }
}

/// Minimize c^T x subject to rows of kind Ge (A_i x >= b_i) or Eq (A_i x = b_i), x >= 0.
pub fn solve_general<T: Scalar>(c: &[T], a: &Matrix<T>, b: &[T], kinds: &[RowKind]) -> Result<LpSolution<T>> {
    let (m, n) = a.shape();
    assert_eq!(c.len(), n);
    assert_eq!(b.len(), m);
    assert_eq!(kinds.len(), m);
    // columns: x (n), surplus for Ge rows, artificial per row
    let surplus_of: Vec<Option<usize>> = {
        let mut next = n;
        kinds
            .iter()
            .map(|k| match k {
                RowKind::Ge => {
                    next += 1;
                    Some(next - 1)
                }
                RowKind::Eq => None,
            })
            .collect()
    };
    let n_surplus = surplus_of.iter().filter(|s| s.is_some()).count();
    let art0 = n + n_surplus;
    let cols = art0 + m;
    let sigma: Vec<T> = b.iter().map(|v| if v.is_negative() { -T::one() } else { T::one() }).collect();
    let mut t = vec![T::zero(); m * cols];
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        for j in 0..n {
            if !a[(i, j)].is_zero() {
                t[i * cols + j] = sigma[i].clone() * &a[(i, j)];
            }
        }
        if let Some(s) = surplus_of[i] {
            t[i * cols + s] = -sigma[i].clone();
        }
        t[i * cols + art0 + i] = T::one();
        rhs.push(sigma[i].clone() * &b[i]);
    }
    let mut tab = Tableau { rows: m, cols, t, rhs, basis: (art0..art0 + m).collect() };

    // phase 1
    let mut cost1 = vec![T::zero(); cols];
    for c1 in cost1.iter_mut().skip(art0) {
        *c1 = T::one();
    }
    let all = vec![true; cols];
    tab.optimize(&cost1, &all)?.expect("phase 1 is bounded");
    let phase1_value = (0..m).fold(T::zero(), |acc, i| acc + &(cost1[tab.basis[i]].clone() * &tab.rhs[i]));
    if phase1_value.is_positive() {
        let z = tab.reduced_costs(&cost1);
        let y: Vec<T> = (0..m).map(|i| sigma[i].clone() * &(T::one() - &z[art0 + i])).collect();
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            primal_point: vec![],
            primal_value: T::zero(),
            dual_point: vec![],
            dual_value: T::zero(),
            certificate: y,
        });
    }
    // drive zero-level artificials out of the basis
    for r in 0..m {
        if tab.basis[r] >= art0 {
            if let Some(j) = (0..art0).find(|&j| !tab.at(r, j).is_zero()) {
                tab.pivot(r, j)?;
            }
        }
    }

    // phase 2
    let mut cost2 = vec![T::zero(); cols];
    cost2[..n].clone_from_slice(c);
    let mut allowed = vec![true; cols];
    for al in allowed.iter_mut().skip(art0) {
        *al = false;
    }
    let outcome = tab.optimize(&cost2, &allowed)?;
    let mut x = vec![T::zero(); cols];
    for i in 0..m {
        x[tab.basis[i]] = tab.rhs[i].clone();
    }
    let primal_point: Vec<T> = x[..n].to_vec();
    if let Err(enter) = outcome {
        let mut d = vec![T::zero(); cols];
        d[enter] = T::one();
        for i in 0..m {
            d[tab.basis[i]] = -tab.at(i, enter).clone();
        }
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            primal_value: dot(c, &primal_point),
            primal_point,
            dual_point: vec![],
            dual_value: T::zero(),
            certificate: d[..n].to_vec(),
        });
    }
    let z = tab.reduced_costs(&cost2);
    let y: Vec<T> = (0..m).map(|i| sigma[i].clone() * &(-z[art0 + i].clone())).collect();
    let primal_value = dot(c, &primal_point);
    let dual_value = dot(b, &y);
    if T::is_exact() {
        assert!(primal_value == dual_value, "strong duality violated: {primal_value} vs {dual_value}");
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal_point,
        primal_value,
        dual_point: y,
        dual_value,
        certificate: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadraticScalar as Q;

    fn q(v: i64) -> Q {
        Q::int(v)
    }

    #[test]
    fn trivial_optimum() {
        let lp = LinearProgram::new(vec![q(1)], Matrix::from_rows(vec![vec![q(1)]]).unwrap(), vec![q(1)]).unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.primal_value, q(1));
        assert_eq!(s.dual_value, q(1));
    }

    #[test]
    fn infeasible_with_farkas() {
        let a = Matrix::from_rows(vec![vec![q(1)], vec![q(-1)]]).unwrap();
        let lp = LinearProgram::new(vec![q(0)], a.clone(), vec![q(1), q(0)]).unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        let y = &s.certificate;
        assert!(y.iter().all(|v| !v.is_negative()));
        assert!(a.transpose().mul_vec(y).iter().all(|v| !v.is_positive()));
        assert!(dot(&lp.rhs, y).is_positive());
    }

    #[test]
    fn unbounded_with_ray() {
        let lp = LinearProgram::new(vec![q(-1)], Matrix::from_rows(vec![vec![q(1)]]).unwrap(), vec![q(0)]).unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        assert_eq!(s.certificate, vec![q(1)]);
    }

    #[test]
    fn certificate_checks() {
        let lp = LinearProgram::new(vec![q(1)], Matrix::from_rows(vec![vec![q(1)]]).unwrap(), vec![q(-1)]).unwrap();
        assert_eq!(verify_certificate(&lp, &[q(0)]).unwrap(), (true, q(0)));
        assert!(!verify_certificate(&lp, &[q(2)]).unwrap().0);
        assert!(!verify_certificate(&lp, &[q(-1)]).unwrap().0);
    }

    #[test]
    fn beale_cycling_instance_terminates() {
        // classic cycling example, written as min with >= rows
        let f = |n: i64, d: i64| Q::frac(n, d);
        let c = vec![f(-3, 4), q(150), f(-1, 50), q(6)];
        let a = Matrix::from_rows(vec![
            vec![f(-1, 4), q(60), f(1, 25), q(-9)],
            vec![f(-1, 2), q(90), f(1, 50), q(-3)],
            vec![q(0), q(0), q(-1), q(0)],
        ])
        .unwrap();
        let lp = LinearProgram::new(c, a, vec![q(0), q(0), q(-1)]).unwrap();
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.primal_value, f(-1, 20));
    }

    #[test]
    fn equality_feasibility() {
        let a = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(-1)]]).unwrap();
        let x = find_nonnegative_solution(&a, &[q(2), q(0)]).unwrap().unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(find_nonnegative_solution(&a, &[q(-2), q(0)]).unwrap().is_none());
    }
}

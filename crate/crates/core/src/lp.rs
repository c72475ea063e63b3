//! Exact rational linear programming.
//!
//! Dense two-phase tableau simplex with Bland's rule. Every variable is
//! implicitly non-negative, which is all the core polytope needs.

use std::fmt;

use serde::Serialize;

use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        LinearConstraint { coeffs, relation, rhs }
    }

    pub fn lhs(&self, x: &[Rat]) -> Rat {
        self.coeffs.iter().zip(x).filter(|(c, _)| !c.is_zero()).map(|(c, v)| c * v).sum()
    }

    pub fn is_satisfied(&self, x: &[Rat]) -> bool {
        let l = self.lhs(x);
        match self.relation {
            Relation::Ge => l >= self.rhs,
            Relation::Le => l <= self.rhs,
            Relation::Eq => l == self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[Rat]) -> bool {
        self.lhs(x) == self.rhs
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}*v{i}"))
            .collect();
        let rel = match self.relation {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        write!(f, "{} {rel} {}", terms.join(" + "), self.rhs)
    }
}

/// Linear constraints over `num_vars` non-negative variables.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ConstraintSystem {
    pub num_vars: usize,
    pub constraints: Vec<LinearConstraint>,
}

impl ConstraintSystem {
    pub fn new(num_vars: usize) -> Self {
        ConstraintSystem { num_vars, constraints: Vec::new() }
    }

    pub fn push(&mut self, c: LinearConstraint) {
        assert_eq!(c.coeffs.len(), self.num_vars, "constraint arity");
        self.constraints.push(c);
    }

    /// Adds `sum(vars) rel rhs` with unit coefficients.
    pub fn push_sum(&mut self, vars: &[usize], relation: Relation, rhs: Rat) {
        let mut coeffs = vec![Rat::zero(); self.num_vars];
        for &v in vars {
            coeffs[v] += Rat::one();
        }
        self.push(LinearConstraint::new(coeffs, relation, rhs));
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn is_feasible_point(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// rows x (cols + 1); last column is the right-hand side.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        if piv != Rat::one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = &*v / &piv;
                }
            }
        }
        let prow = self.rows[r].clone();
        for (ri, row) in self.rows.iter_mut().enumerate() {
            if ri == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced cost `c_j - c_B B^-1 A_j` for a maximisation objective.
    fn reduced_costs(&self, obj: &[Rat], allowed: usize) -> Vec<Rat> {
        (0..allowed)
            .map(|j| {
                let mut rc = obj[j].clone();
                for (ri, row) in self.rows.iter().enumerate() {
                    let cb = &obj[self.basis[ri]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        rc -= cb * &row[j];
                    }
                }
                rc
            })
            .collect()
    }

    /// Maximises `obj` over columns `< allowed` with Bland's rule.
    fn optimize(&mut self, obj: &[Rat], allowed: usize) -> bool {
        loop {
            let rc = self.reduced_costs(obj, allowed);
            let entering = (0..allowed).find(|&j| rc[j].is_positive() && !self.basis.contains(&j));
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for (ri, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &leave {
                        None => true,
                        Some((lr, lv)) => {
                            ratio < *lv || (ratio == *lv && self.basis[ri] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((ri, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn objective_value(&self, obj: &[Rat]) -> Rat {
        self.basis
            .iter()
            .zip(&self.rows)
            .map(|(&b, row)| &obj[b] * &row[self.cols])
            .sum()
    }
}

/// Maximises `objective . x` subject to `sys` and `x >= 0`.
pub fn maximize(sys: &ConstraintSystem, objective: &[Rat]) -> LpOutcome {
    let n = sys.num_vars;
    assert_eq!(objective.len(), n, "objective arity");
    let m = sys.constraints.len();

    // Normalise to non-negative right-hand sides.
    let norm: Vec<(Vec<Rat>, Relation, Rat)> = sys
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let rel = match c.relation {
                    Relation::Ge => Relation::Le,
                    Relation::Le => Relation::Ge,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), rel, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let n_slack = norm.iter().filter(|c| c.1 != Relation::Eq).count();
    let n_art = norm.iter().filter(|c| c.1 != Relation::Le).count();
    let art_start = n + n_slack;
    let cols = art_start + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, art_start);
    for (coeffs, rel, rhs) in &norm {
        let mut row = vec![Rat::zero(); cols + 1];
        row[..n].clone_from_slice(coeffs);
        row[cols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[s] = Rat::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Rat::one();
                s += 1;
                row[a] = Rat::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = Rat::one();
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, cols };

    if n_art > 0 {
        let mut phase1 = vec![Rat::zero(); cols];
        for v in phase1.iter_mut().skip(art_start) {
            *v = -Rat::one();
        }
        t.optimize(&phase1, cols);
        if t.objective_value(&phase1).is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_start {
                match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let mut phase2 = vec![Rat::zero(); cols];
    phase2[..n].clone_from_slice(objective);
    if !t.optimize(&phase2, art_start) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![Rat::zero(); n];
    for (ri, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = t.rows[ri][cols].clone();
        }
    }
    let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    LpOutcome::Optimal { value, point }
}

/// Any feasible point of `sys`, if one exists.
pub fn feasible_point(sys: &ConstraintSystem) -> Option<Vec<Rat>> {
    match maximize(sys, &vec![Rat::zero(); sys.num_vars]) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

//! Vertex enumeration for small polytopes `{x >= 0 : constraints}`.
//!
//! Double description method on the homogenised cone `{(x, t) >= 0}`, with
//! the combinatorial adjacency test. Exact throughout; intended for a handful
//! of dimensions and at most a few thousand constraints.

use std::collections::BTreeSet;

use crate::lp::{ConstraintSystem, Relation};
use crate::rational::Rat;

#[derive(Clone)]
struct Ray {
    v: Vec<Rat>,
    zero: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn intersect(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn is_superset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == *y)
}

fn dot(h: &[Rat], v: &[Rat]) -> Rat {
    h.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
}

fn normalise(v: Vec<Rat>) -> Vec<Rat> {
    let s: Rat = v.iter().sum();
    if s.is_zero() || s == Rat::one() {
        v
    } else {
        v.iter().map(|x| x / &s).collect()
    }
}

/// Vertices of a bounded polytope. Returns `None` when the polytope is
/// unbounded; an infeasible system yields an empty list.
pub fn enumerate_vertices(sys: &ConstraintSystem) -> Option<Vec<Vec<Rat>>> {
    let n = sys.num_vars;
    let d = n + 1;
    // Homogenised constraint rows h . (x, t) {>=, =} 0, equalities first.
    let mut rows: Vec<(Vec<Rat>, bool)> = Vec::new();
    for eq_pass in [true, false] {
        for c in &sys.constraints {
            if (c.relation == Relation::Eq) != eq_pass {
                continue;
            }
            let (sign, is_eq) = match c.relation {
                Relation::Ge => (Rat::one(), false),
                Relation::Le => (-Rat::one(), false),
                Relation::Eq => (Rat::one(), true),
            };
            let mut h: Vec<Rat> = c.coeffs.iter().map(|a| a * &sign).collect();
            h.push(-(&c.rhs * &sign));
            rows.push((h, is_eq));
        }
    }
    let total = d + rows.len();
    let words = total.div_ceil(64);

    // Start from the non-negative orthant; coordinate constraints are 0..d.
    let mut rays: Vec<Ray> = (0..d)
        .map(|i| {
            let mut v = vec![Rat::zero(); d];
            v[i] = Rat::one();
            let mut zero = vec![0u64; words];
            for c in (0..d).filter(|&c| c != i) {
                bit_set(&mut zero, c);
            }
            Ray { v, zero }
        })
        .collect();

    for (ci, (h, is_eq)) in rows.iter().enumerate() {
        let cid = d + ci;
        let vals: Vec<Rat> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if vals[i].is_zero() {
                let mut r = r.clone();
                bit_set(&mut r.zero, cid);
                next.push(r);
            } else if vals[i].is_positive() && !is_eq {
                next.push(r.clone());
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = intersect(&rays[p].zero, &rays[q].zero);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(o, r)| o == p || o == q || !is_superset(&r.zero, &common));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (&vals[p], &vals[q]);
                let v: Vec<Rat> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(vq, vp)| sp * vq - sq * vp)
                    .collect();
                let mut zero = common;
                bit_set(&mut zero, cid);
                next.push(Ray { v: normalise(v), zero });
            }
        }
        rays = next;
        if rays.is_empty() {
            return Some(Vec::new());
        }
    }

    let mut out = BTreeSet::new();
    for r in rays {
        let t = &r.v[n];
        if t.is_zero() {
            return None;
        }
        out.insert(r.v[..n].iter().map(|x| x / t).collect::<Vec<_>>());
    }
    Some(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LinearConstraint;
    use crate::rational::r;

    fn c(coeffs: &[i64], rel: Relation, rhs: i64) -> LinearConstraint {
        LinearConstraint::new(coeffs.iter().map(|&v| r(v)).collect(), rel, r(rhs))
    }

    #[test]
    fn unit_square() {
        let mut sys = ConstraintSystem::new(2);
        sys.push(c(&[1, 0], Relation::Le, 1));
        sys.push(c(&[0, 1], Relation::Le, 1));
        let v = enumerate_vertices(&sys).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.contains(&vec![r(1), r(1)]));
        assert!(v.contains(&vec![r(0), r(0)]));
    }

    #[test]
    fn simplex_slice_with_equality() {
        // x + y + z = 6, x >= 1 -> vertices (6,0,0), (1,5,0), (1,0,5)
        let mut sys = ConstraintSystem::new(3);
        sys.push(c(&[1, 1, 1], Relation::Eq, 6));
        sys.push(c(&[1, 0, 0], Relation::Ge, 1));
        let v = enumerate_vertices(&sys).unwrap();
        assert_eq!(v, vec![vec![r(1), r(0), r(5)], vec![r(1), r(5), r(0)], vec![r(6), r(0), r(0)]]);
    }

    #[test]
    fn degenerate_pyramid() {
        // Square pyramid: 5 vertices, apex on 4 facets.
        let mut sys = ConstraintSystem::new(3);
        sys.push(c(&[1, 0, 1], Relation::Le, 2));
        sys.push(c(&[0, 1, 1], Relation::Le, 2));
        sys.push(c(&[-1, 0, 1], Relation::Le, 0));
        sys.push(c(&[0, -1, 1], Relation::Le, 0));
        let v = enumerate_vertices(&sys).unwrap();
        assert_eq!(v.len(), 5, "{v:?}");
        assert!(v.contains(&vec![r(1), r(1), r(1)]));
    }

    #[test]
    fn unbounded_and_empty() {
        let mut sys = ConstraintSystem::new(1);
        sys.push(c(&[1], Relation::Ge, 1));
        assert!(enumerate_vertices(&sys).is_none());
        let mut sys = ConstraintSystem::new(1);
        sys.push(c(&[1], Relation::Ge, 2));
        sys.push(c(&[1], Relation::Le, 1));
        assert_eq!(enumerate_vertices(&sys), Some(vec![]));
    }
}

//! Exact maximum-weight assignment (Hungarian method with potentials).

use crate::rational::Rat;

/// Maximum-weight assignment of rows to columns for a non-negative matrix.
///
/// The matrix is padded to a square with zero entries. Returns, for each row,
/// the assigned column, with zero-weight and dummy assignments reported as
/// `None`, together with the optimum value.
pub fn max_weight_assignment(weights: &[Vec<Rat>]) -> (Vec<Option<usize>>, Rat) {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return (vec![None; rows], Rat::zero());
    }
    let n = rows.max(cols);
    let cost = |i: usize, j: usize| -> Rat {
        if i < rows && j < cols {
            -&weights[i][j]
        } else {
            Rat::zero()
        }
    };

    // 1-based potentials; p[j] is the row matched to column j (0 = none).
    let mut u = vec![Rat::zero(); n + 1];
    let mut v = vec![Rat::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<Rat>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rat> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column always remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![None; rows];
    let mut total = Rat::zero();
    for j in 1..=n {
        let i = p[j];
        if i == 0 || i > rows || j > cols {
            continue;
        }
        let w = &weights[i - 1][j - 1];
        if w.is_positive() {
            assignment[i - 1] = Some(j - 1);
            total += w;
        }
    }
    (assignment, total)
}

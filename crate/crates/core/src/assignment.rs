//! Min-cost assignment of rows to distinct columns over exact integers.
//!
//! Shortest augmenting paths with potentials (Hungarian method), `O(k^2 m)`
//! for `k` rows and `m >= k` columns. Missing edges are priced above any
//! feasible assignment and rejected afterwards.

/// Cost matrix with optional (forbidden) entries; `rows <= cols`.
pub fn min_cost_assignment(costs: &[Vec<Option<i64>>]) -> Option<(i64, Vec<usize>)> {
    let k = costs.len();
    if k == 0 {
        return Some((0, Vec::new()));
    }
    let m = costs[0].len();
    if m < k {
        return None;
    }
    let max_cost = costs.iter().flatten().flatten().map(|c| c.abs()).max().unwrap_or(0);
    let big = (k as i64 + 1) * (max_cost + 1) * 2;
    let cost = |i: usize, j: usize| costs[i][j].unwrap_or(big);

    // 1-indexed arrays; column 0 is the virtual start
    let mut u = vec![0i64; k + 1];
    let mut v = vec![0i64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=k {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; k];
    for j in 1..=m {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    let mut total = 0;
    for (i, &j) in assignment.iter().enumerate() {
        total += costs[i][j]?;
    }
    Some((total, assignment))
}

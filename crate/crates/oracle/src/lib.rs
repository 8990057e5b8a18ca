//! Naive reference implementations for cross-checking the optimized paths.
//!
//! Everything here favors obviousness over speed: Kronecker products are
//! materialized in full, linear systems go through textbook Gaussian
//! elimination, cliques come from exhaustive subset checks, and shortest
//! paths from Floyd–Warshall. Nothing in this crate is shared with the
//! implementations under test.

/// Matrix-vector product for a dense row-major nested-vec matrix.
pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Dense matrix product.
pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![0.0; p]; n];
    for i in 0..n {
        for (k, b_row) in b.iter().enumerate() {
            let a_ik = a[i][k];
            if a_ik == 0.0 {
                continue;
            }
            for j in 0..p {
                out[i][j] += a_ik * b_row[j];
            }
        }
    }
    out
}

/// Full Kronecker product: entry `(i·n+k, j·n+l) = A[i][j]·B[k][l]`.
pub fn dense_kron(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = a.len();
    let n = b.len();
    let mut out = vec![vec![0.0; m * n]; m * n];
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[i * n + k][j * n + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `(A ⊗ B)·v` by materializing the product matrix first.
pub fn dense_kron_apply(a: &[Vec<f64>], b: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    mat_vec(&dense_kron(a, b), v)
}

/// Solve `A·x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot collapses (singular system).
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&r, &s| {
            a[r][col]
                .abs()
                .partial_cmp(&a[s][col].abs())
                .expect("finite entries")
        })?;
        if a[pivot_row][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Solve `(I − μ·(A ⊗ B))·y = v` directly on the materialized system.
pub fn dense_resolvent_solve(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    mu: f64,
    v: &[f64],
) -> Option<Vec<f64>> {
    let kron = dense_kron(a, b);
    let n = kron.len();
    let mut system = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            system[i][j] = if i == j { 1.0 } else { 0.0 } - mu * kron[i][j];
        }
    }
    gauss_solve(system, v.to_vec())
}

fn diag_to_dense(d: &[f64]) -> Vec<Vec<f64>> {
    let n = d.len();
    let mut m = vec![vec![0.0; n]; n];
    for (i, &e) in d.iter().enumerate() {
        m[i][i] = e;
    }
    m
}

/// Replacement score computed the slow way.
///
/// `skills_old[j]` / `skills_new[j]` are the diagonals of the j-th skill
/// indicator (the caller includes the j = 0 identity), `f_old` / `f_new` the
/// familiarity diagonals. The right-hand side Σ_j (F·S_j ⊗ F'·S'_j)·x2 is
/// assembled from fully materialized products, the resolvent system is solved
/// directly, and the result is the dot product with x1.
#[allow(clippy::too_many_arguments)]
pub fn dense_omr_score(
    a_old: &[Vec<f64>],
    a_new: &[Vec<f64>],
    f_old: &[f64],
    f_new: &[f64],
    skills_old: &[Vec<f64>],
    skills_new: &[Vec<f64>],
    mu: f64,
    x1: &[f64],
    x2: &[f64],
) -> Option<f64> {
    assert_eq!(skills_old.len(), skills_new.len());
    let t2 = x2.len();
    let mut rhs = vec![0.0; t2];
    let f_old_m = diag_to_dense(f_old);
    let f_new_m = diag_to_dense(f_new);
    for (s_old, s_new) in skills_old.iter().zip(skills_new) {
        let left = mat_mul(&f_old_m, &diag_to_dense(s_old));
        let right = mat_mul(&f_new_m, &diag_to_dense(s_new));
        let term = dense_kron_apply(&left, &right, x2);
        for (acc, t) in rhs.iter_mut().zip(&term) {
            *acc += t;
        }
    }
    let y = dense_resolvent_solve(a_old, a_new, mu, &rhs)?;
    Some(x1.iter().zip(&y).map(|(a, b)| a * b).sum())
}

/// Truncated expansion `Σ_{k=0}^{terms} μ^k·(A⊗B)^k·v` of the resolvent.
pub fn series_resolvent(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    mu: f64,
    v: &[f64],
    terms: usize,
) -> Vec<f64> {
    let kron = dense_kron(a, b);
    let mut total = v.to_vec();
    let mut power_term = v.to_vec();
    for _ in 1..=terms {
        power_term = mat_vec(&kron, &power_term);
        for x in &mut power_term {
            *x *= mu;
        }
        for (acc, x) in total.iter_mut().zip(&power_term) {
            *acc += x;
        }
    }
    total
}

/// Hop that means "unreachable" in [`floyd_warshall`] output.
pub const UNREACHABLE: usize = usize::MAX / 4;

/// All-pairs unweighted shortest paths over an undirected edge list.
pub fn floyd_warshall(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut dist = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        dist[a][b] = 1;
        dist[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = dist[i][k].saturating_add(dist[k][j]);
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    dist
}

/// Every k-subset of vertices that is pairwise connected, members ascending,
/// subsets in lexicographic order.
pub fn brute_force_cliques(n: usize, edges: &[(usize, usize)], k: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut found = Vec::new();
    let mut current = Vec::with_capacity(k);
    subsets(n, k, 0, &adj, &mut current, &mut found);
    found
}

fn subsets(
    n: usize,
    k: usize,
    start: usize,
    adj: &[Vec<bool>],
    current: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if current.len() == k {
        found.push(current.clone());
        return;
    }
    for v in start..n {
        if current.iter().all(|&u| adj[u][v]) {
            current.push(v);
            subsets(n, k, v + 1, adj, current, found);
            current.pop();
        }
    }
}

/// Triangle count as `trace(A³)/6` over the 0/1 adjacency matrix.
pub fn triangle_count_trace(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut a = vec![vec![0.0; n]; n];
    for &(i, j) in edges {
        a[i][j] = 1.0;
        a[j][i] = 1.0;
    }
    let a3 = mat_mul(&mat_mul(&a, &a), &a);
    let trace: f64 = (0..n).map(|i| a3[i][i]).sum();
    (trace / 6.0).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_two_by_two_matches_hand_result() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let b = vec![vec![0.0, 5.0], vec![6.0, 7.0]];
        let k = dense_kron(&a, &b);
        assert_eq!(k[0], vec![0.0, 5.0, 0.0, 10.0]);
        assert_eq!(k[1], vec![6.0, 7.0, 12.0, 14.0]);
        assert_eq!(k[2], vec![0.0, 15.0, 0.0, 20.0]);
        assert_eq!(k[3], vec![18.0, 21.0, 24.0, 28.0]);
    }

    #[test]
    fn gauss_solves_known_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = gauss_solve(a, vec![5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_detects_singular_system() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(gauss_solve(a, vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn resolvent_solution_satisfies_equation() {
        let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let v = vec![1.0, 2.0, 3.0, 4.0];
        let mu = 0.2;
        let y = dense_resolvent_solve(&a, &a, mu, &v).unwrap();
        let ky = dense_kron_apply(&a, &a, &y);
        for i in 0..4 {
            assert!((y[i] - mu * ky[i] - v[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn series_approaches_direct_solve() {
        let a = vec![vec![0.0, 0.5], vec![0.5, 0.0]];
        let v = vec![1.0, 0.5, 0.25, 0.75];
        let mu = 0.3;
        let direct = dense_resolvent_solve(&a, &a, mu, &v).unwrap();
        let series = series_resolvent(&a, &a, mu, &v, 200);
        for i in 0..4 {
            assert!((direct[i] - series[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn floyd_warshall_on_path() {
        let dist = floyd_warshall(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(dist[0][3], 3);
        assert_eq!(dist[1][3], 2);
        assert_eq!(dist[0][0], 0);
        let disconnected = floyd_warshall(3, &[(0, 1)]);
        assert_eq!(disconnected[0][2], UNREACHABLE);
    }

    #[test]
    fn cliques_on_k4() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let triangles = brute_force_cliques(4, &edges, 3);
        assert_eq!(triangles.len(), 4);
        let quads = brute_force_cliques(4, &edges, 4);
        assert_eq!(quads, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn trace_triangle_count_on_known_graphs() {
        let k4 = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(triangle_count_trace(4, &k4), 4);
        assert_eq!(triangle_count_trace(3, &[(0, 1), (1, 2)]), 0);
    }
}

//! Maximum-weight bipartite assignment (Kuhn-Munkres with potentials).

/// A one-to-one row to column matching.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `(row, column)` pairs sorted by row.
    pub pairs: Vec<(usize, usize)>,
    pub total: f64,
}

/// Matches `min(n, m)` rows and columns of an `n × m` matrix of finite,
/// non-negative weights so that the summed weight is maximal.
pub fn optimal_assignment(weights: &[Vec<f64>]) -> Assignment {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Assignment {
            pairs: Vec::new(),
            total: 0.0,
        };
    }
    debug_assert!(weights.iter().all(|r| r.len() == cols));

    let transposed = rows > cols;
    let (n, m) = if transposed { (cols, rows) } else { (rows, cols) };
    let w = |i: usize, j: usize| if transposed { weights[j][i] } else { weights[i][j] };
    let max = weights
        .iter()
        .flatten()
        .copied()
        .fold(0.0_f64, f64::max);
    let cost = |i: usize, j: usize| max - w(i, j);

    // 1-based potentials; column 0 is a virtual sink.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
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

    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| owner[j] != 0)
        .map(|j| {
            let (i, j) = (owner[j] - 1, j - 1);
            if transposed {
                (j, i)
            } else {
                (i, j)
            }
        })
        .collect();
    pairs.sort_unstable();
    let total = pairs.iter().map(|&(i, j)| weights[i][j]).sum();
    Assignment { pairs, total }
}

//! Small dense linear algebra: pivoted elimination and a cyclic Jacobi
//! eigensolver for symmetric matrices.
//!
//! Everything here targets the tiny dimensions this crate works at
//! (k ≤ ~16), where a hand-rolled O(n³) routine is simpler and fully
//! deterministic.

// elimination and rotation kernels index in the conventional style
#![allow(clippy::needless_range_loop)]

/// Matrix-vector product. Panics on shape mismatch.
pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), x.len(), "matrix/vector shape mismatch");
            row.iter().zip(x).map(|(r, v)| r * v).sum()
        })
        .collect()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .unwrap();
        if m[pivot_row][col] == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            m.swap(pivot_row, col);
            d = -d;
        }
        d *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for j in col..n {
                m[row][j] -= f * m[col][j];
            }
        }
    }
    d
}

/// True when pivoted elimination finds a pivot below `rel_tol` times the
/// largest entry magnitude of `a`.
pub fn is_singular(a: &[Vec<f64>], rel_tol: f64) -> bool {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return true;
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() <= rel_tol * scale {
            return true;
        }
        m.swap(pivot_row, col);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for j in col..n {
                m[row][j] -= f * m[col][j];
            }
        }
    }
    false
}

/// Solve `a x = b` by LU with partial pivoting. `None` when singular to
/// working precision.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    assert_eq!(b.len(), n, "rhs length mismatch");
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .unwrap();
        if m[pivot_row][col] == 0.0 {
            return None;
        }
        m.swap(pivot_row, col);
        rhs.swap(pivot_row, col);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            rhs[row] -= f * rhs[col];
            for j in col..n {
                m[row][j] -= f * m[col][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for j in row + 1..n {
            acc -= m[row][j] * x[j];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Row rank by pivoted elimination, with pivots compared against
/// `rel_tol` times the largest entry magnitude.
pub fn rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let pivot_row = (r..m.len())
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() <= rel_tol * scale {
            continue;
        }
        m.swap(pivot_row, r);
        for row in r + 1..m.len() {
            let f = m[row][col] / m[r][col];
            for j in col..ncols {
                m[row][j] -= f * m[r][j];
            }
        }
        r += 1;
    }
    r
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching unit
/// eigenvectors (`vectors[i]` pairs with `values[i]`). The input is
/// copied; only the lower/upper symmetric part is trusted.
pub fn jacobi_eigen(a_in: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a_in.len();
    let mut a: Vec<Vec<f64>> = a_in.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if n > 1 {
        let fro: f64 = a
            .iter()
            .flat_map(|r| r.iter())
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt();
        for _sweep in 0..100 {
            let off: f64 = (0..n - 1)
                .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
                .map(|(p, q)| a[p][q] * a[p][q])
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * fro.max(f64::MIN_POSITIVE) {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[p][q];
                    let g = 100.0 * apq.abs();
                    // classic negligibility test: rotation would not change a thing
                    if a[p][p].abs() + g == a[p][p].abs() && a[q][q].abs() + g == a[q][q].abs() {
                        a[p][q] = 0.0;
                        a[q][p] = 0.0;
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    let h = t * apq;
                    a[p][p] -= h;
                    a[q][q] += h;
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    for i in 0..n {
                        if i != p && i != q {
                            let aip = a[i][p];
                            let aiq = a[i][q];
                            a[i][p] = aip - s * (aiq + aip * tau);
                            a[p][i] = a[i][p];
                            a[i][q] = aiq + s * (aip - aiq * tau);
                            a[q][i] = a[i][q];
                        }
                    }
                    for row in v.iter_mut() {
                        let vip = row[p];
                        let viq = row[q];
                        row[p] = vip - s * (viq + vip * tau);
                        row[q] = viq + s * (vip - viq * tau);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_singularity() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert!((det(&a) - (-2.0)).abs() < 1e-12);
        assert!(!is_singular(&a, 1e-12));
        let s = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(is_singular(&s, 1e-12));
    }

    #[test]
    fn solve_roundtrip() {
        let a = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ];
        let x = vec![1.0, -2.0, 0.5];
        let b = mat_vec(&a, &x);
        let got = solve(&a, &b).unwrap();
        for (u, v) in got.iter().zip(&x) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ];
        assert_eq!(rank(&rows, 1e-12), 2);
        let full = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ];
        assert_eq!(rank(&full, 1e-12), 3);
    }

    #[test]
    fn jacobi_2x2_known() {
        // [[2,1],[1,2]] has eigenvalues 3 and 1
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let (vals, vecs) = jacobi_eigen(&a);
        assert!((vals[0] - 3.0).abs() < 1e-13);
        assert!((vals[1] - 1.0).abs() < 1e-13);
        // eigenvector of 3 is the diagonal direction
        assert!((vecs[0][0].abs() - vecs[0][1].abs()).abs() < 1e-12);
    }

    #[test]
    fn jacobi_reconstructs_matrix() {
        let a = vec![
            vec![4.0, 1.0, -2.0, 0.5],
            vec![1.0, 3.0, 0.0, 1.0],
            vec![-2.0, 0.0, 1.0, -1.0],
            vec![0.5, 1.0, -1.0, 2.0],
        ];
        let (vals, vecs) = jacobi_eigen(&a);
        let n = a.len();
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for (lam, v) in vals.iter().zip(&vecs) {
                    acc += lam * v[i] * v[j];
                }
                assert!(
                    (acc - a[i][j]).abs() < 1e-10,
                    "reconstruction off at ({i},{j}): {acc} vs {}",
                    a[i][j]
                );
            }
        }
        // orthonormality
        for p in 0..n {
            for q in 0..n {
                let dot: f64 = (0..n).map(|i| vecs[p][i] * vecs[q][i]).sum();
                let expect = if p == q { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_diagonal_passthrough() {
        let a = vec![vec![5.0, 0.0], vec![0.0, -1.0]];
        let (vals, _) = jacobi_eigen(&a);
        assert_eq!(vals, vec![5.0, -1.0]);
    }
}

//! Exact linear algebra: integer systems via column Hermite reduction, and
//! rational feasibility of `A x = 0, x >= 0, sum x = 1` via simplex.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer solution set of `A c = b`: one particular solution and a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSolution {
    pub particular: Vec<i64>,
    pub kernel: Vec<Vec<i64>>,
}

/// Column-style Hermite reduction `A U = H` with `U` unimodular.
struct ColumnEchelon {
    h: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    /// `(row, col)` of each pivot, in increasing row and column order.
    pivots: Vec<(usize, usize)>,
}

fn column_echelon(rows: &[Vec<i64>], ncols: usize) -> ColumnEchelon {
    let nrows = rows.len();
    let mut h: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..ncols).map(|i| (0..ncols).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivots = Vec::new();
    let mut col = 0;
    let swap_cols = |m: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for r in m.iter_mut() {
            r.swap(a, b);
        }
    };
    // c_a <- c_a - q c_b
    let sub_col = |m: &mut Vec<Vec<i128>>, a: usize, b: usize, q: i128| {
        for r in m.iter_mut() {
            r[a] -= q * r[b];
        }
    };
    for row in 0..nrows {
        if col == ncols {
            break;
        }
        loop {
            // Smallest nonzero entry among columns col.. becomes the pivot candidate.
            let best = (col..ncols).filter(|&j| h[row][j] != 0).min_by_key(|&j| h[row][j].abs());
            let Some(j) = best else { break };
            swap_cols(&mut h, col, j);
            swap_cols(&mut u, col, j);
            let mut done = true;
            for j in col + 1..ncols {
                if h[row][j] != 0 {
                    let q = h[row][j].div_euclid(h[row][col]);
                    sub_col(&mut h, j, col, q);
                    sub_col(&mut u, j, col, q);
                    if h[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[row][col] != 0 {
            pivots.push((row, col));
            col += 1;
        }
    }
    ColumnEchelon { h, u, pivots }
}

/// Solves `A c = b` over the integers. `rows` are the rows of `A`, each of length `ncols`.
pub fn solve_integer(rows: &[Vec<i64>], ncols: usize, b: &[i64]) -> Option<IntSolution> {
    assert_eq!(rows.len(), b.len(), "right-hand side length");
    let ce = column_echelon(rows, ncols);
    // Forward substitution on H y = b; pivot columns are 0..rank.
    let rank = ce.pivots.len();
    let mut y = vec![0i128; ncols];
    let mut residual: Vec<i128> = b.iter().map(|&x| x as i128).collect();
    let mut next = 0;
    for row in 0..rows.len() {
        if next < rank && ce.pivots[next].0 == row {
            let c = ce.pivots[next].1;
            let p = ce.h[row][c];
            if residual[row] % p != 0 {
                return None;
            }
            y[c] = residual[row] / p;
            for (r, res) in residual.iter_mut().enumerate() {
                *res -= y[c] * ce.h[r][c];
            }
            next += 1;
        } else if residual[row] != 0 {
            return None;
        }
    }
    let to_i64 = |v: i128| i64::try_from(v).expect("integer solution overflows i64");
    let particular = (0..ncols).map(|i| to_i64((0..ncols).map(|j| ce.u[i][j] * y[j]).sum())).collect();
    let kernel = (rank..ncols).map(|j| (0..ncols).map(|i| to_i64(ce.u[i][j])).collect()).collect();
    Some(IntSolution { particular, kernel })
}

/// Kernel basis of `A` over the integers.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    solve_integer(rows, ncols, &vec![0; rows.len()]).expect("homogeneous system is solvable").kernel
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    column_echelon(rows, ncols).pivots.len()
}

/// Finds `x >= 0` with `A x = 0` and `sum x = 1`, or `None` if there is none.
pub fn nonnegative_kernel_vector(rows: &[Vec<i64>], ncols: usize) -> Option<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut b: Vec<BigRational> = vec![BigRational::zero(); rows.len()];
    a.push(vec![BigRational::one(); ncols]);
    b.push(BigRational::one());
    phase_one(a, b, ncols)
}

/// Phase-one simplex with Bland's rule for `A x = b, x >= 0`.
fn phase_one(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>, n: usize) -> Option<Vec<BigRational>> {
    let m = a.len();
    for i in 0..m {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for x in a[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    // Columns 0..n are real, n..n+m artificial.
    let total = n + m;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..total).collect();
    // Objective: minimize the sum of artificials, as reduced costs over all columns.
    loop {
        let mut cost = vec![BigRational::zero(); total + 1];
        for (i, row) in t.iter().enumerate() {
            if basis[i] >= n {
                for (c, v) in row.iter().enumerate() {
                    cost[c] -= v;
                }
            }
        }
        for (j, c) in cost.iter_mut().enumerate().take(total).skip(n) {
            if basis.contains(&j) {
                *c = BigRational::zero();
            } else {
                *c += BigRational::one();
            }
        }
        let entering = (0..total).find(|&j| !basis.contains(&j) && cost[j].is_negative());
        let Some(e) = entering else {
            if cost[total].is_zero() {
                break;
            }
            return None;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[e].is_positive() {
                let ratio = &row[total] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase one objective is bounded below");
        let piv = t[r][e].clone();
        for v in t[r].iter_mut() {
            *v = &*v / &piv;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[e].is_zero() {
                let f = row[e].clone();
                for (c, v) in row.iter_mut().enumerate() {
                    *v -= &f * &prow[c];
                }
            }
        }
        basis[r] = e;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][total].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // 2x + 4y = 6 has solutions; 2x + 4y = 5 does not.
        let rows = vec![vec![2, 4]];
        let s = solve_integer(&rows, 2, &[6]).unwrap();
        assert_eq!(2 * s.particular[0] + 4 * s.particular[1], 6);
        assert_eq!(s.kernel.len(), 1);
        let k = &s.kernel[0];
        assert_eq!(2 * k[0] + 4 * k[1], 0);
        assert_eq!(k[0].abs(), 2);
        assert!(solve_integer(&rows, 2, &[5]).is_none());
    }

    #[test]
    fn nonnegative_kernel() {
        // x - y = 0 has x = y = 1/2.
        let x = nonnegative_kernel_vector(&[vec![1, -1]], 2).unwrap();
        assert_eq!(x[0], x[1]);
        // x + y = 0 with x, y >= 0 forces zero.
        assert!(nonnegative_kernel_vector(&[vec![1, 1]], 2).is_none());
    }
}

//! Integer matrix normal forms: Smith (with both transforms) and a row-style
//! Hermite form used for membership solves in finitely generated abelian
//! groups. All arithmetic is exact; overflow panics rather than wrapping.

use serde::Serialize;

pub type IntMat = Vec<Vec<i64>>;

fn mul(a: i64, b: i64) -> i64 {
    let r = (a as i128) * (b as i128);
    i64::try_from(r).expect("integer overflow in matrix arithmetic")
}

fn addmul(a: i64, b: i64, c: i64) -> i64 {
    let r = (a as i128) + (b as i128) * (c as i128);
    i64::try_from(r).expect("integer overflow in matrix arithmetic")
}

pub fn identity(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = addmul(out[i][j], aik, b[k][j]);
            }
        }
    }
    out
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn det(m: &IntMat) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    assert!(m.iter().all(|r| r.len() == n), "det of non-square matrix");
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0);
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
}

#[derive(Debug, Clone, Serialize)]
pub struct Snf {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Diagonal entries of D, in order (including zeros).
    pub fn diagonal(&self) -> Vec<i64> {
        let rows = self.d.len();
        let cols = if rows > 0 { self.d[0].len() } else { 0 };
        (0..rows.min(cols)).map(|i| self.d[i][i]).collect()
    }
}

/// Smith normal form: returns (U, D, V) with U*m*V = D, D diagonal with a
/// nonnegative divisibility chain, and U, V unimodular.
pub fn smith_normal_form(m: &IntMat) -> Snf {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        // move a nonzero entry of minimal absolute value into the pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            if d[i][t] != 0 {
                let q = div_round(d[i][t], d[t][t]);
                row_op(&mut d, i, t, -q);
                row_op(&mut u, i, t, -q);
                if d[i][t] != 0 {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if d[t][j] != 0 {
                let q = div_round(d[t][j], d[t][t]);
                col_op(&mut d, j, t, -q);
                col_op(&mut v, j, t, -q);
                if d[t][j] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // smaller remainders appeared; re-pivot
        }
        // divisibility: pivot must divide the whole remaining block
        let p = d[t][t];
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if d[i][j] % p != 0 {
                    // fold row i into row t and restart this pivot
                    row_op(&mut d, t, i, 1);
                    row_op(&mut u, t, i, 1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if d[t][t] < 0 {
                scale_row(&mut d, t, -1);
                scale_row(&mut u, t, -1);
            }
            t += 1;
        }
    }
    Snf { u, d, v }
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_op(m: &mut IntMat, dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    let cols = m[dst].len();
    for j in 0..cols {
        m[dst][j] = addmul(m[dst][j], k, m[src][j]);
    }
}

fn col_op(m: &mut IntMat, dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[dst] = addmul(row[dst], k, row[src]);
    }
}

fn scale_row(m: &mut IntMat, r: usize, k: i64) {
    for x in m[r].iter_mut() {
        *x = mul(*x, k);
    }
}

fn div_round(a: i64, b: i64) -> i64 {
    // quotient minimizing |a - q*b|
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + r.signum() * b.signum()
    } else {
        q
    }
}

/// Row Hermite form: returns (H, U) with U*m = H, U unimodular, H in row
/// echelon form with nonnegative pivots and entries above a pivot reduced.
pub fn hermite(m: &IntMat) -> (IntMat, IntMat) {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if h[i][col] != 0 && best.map_or(true, |b| h[i][col].abs() < h[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if h[i][col] != 0 {
                    let q = h[i][col] / h[pivot_row][col];
                    row_op(&mut h, i, pivot_row, -q);
                    row_op(&mut u, i, pivot_row, -q);
                    if h[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][col] != 0 {
            if h[pivot_row][col] < 0 {
                scale_row(&mut h, pivot_row, -1);
                scale_row(&mut u, pivot_row, -1);
            }
            let p = h[pivot_row][col];
            for i in 0..pivot_row {
                let q = h[i][col].div_euclid(p);
                row_op(&mut h, i, pivot_row, -q);
                row_op(&mut u, i, pivot_row, -q);
            }
            pivot_row += 1;
        }
    }
    (h, u)
}

/// Solve y * m = t over the integers. Returns one solution if any exists.
pub fn solve_left(m: &IntMat, t: &[i64]) -> Option<Vec<i64>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { t.len() };
    if t.len() != cols {
        return None;
    }
    let (h, u) = hermite(m);
    let mut residual: Vec<i64> = t.to_vec();
    let mut coeffs = vec![0i64; rows];
    for (r, row) in h.iter().enumerate() {
        let Some(col) = row.iter().position(|&x| x != 0) else { break };
        if residual[col] % row[col] != 0 {
            // pivot does not divide: earlier columns already zeroed, so no solution
            if residual[..col].iter().any(|&x| x != 0) {
                return None;
            }
            return None;
        }
        let q = residual[col] / row[col];
        for j in 0..cols {
            residual[j] = addmul(residual[j], -q, row[j]);
        }
        coeffs[r] = q;
    }
    if residual.iter().any(|&x| x != 0) {
        return None;
    }
    // y = coeffs * U
    let mut y = vec![0i64; rows];
    for (r, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            for j in 0..rows {
                y[j] = addmul(y[j], c, u[r][j]);
            }
        }
    }
    Some(y)
}

/// Index of the row lattice of `m` inside Z^cols: absolute value of the
/// product of Hermite pivots, or None when the lattice has lower rank.
pub fn lattice_index(m: &IntMat) -> Option<u64> {
    let cols = if m.is_empty() { return None } else { m[0].len() };
    let (h, _) = hermite(m);
    let mut idx: i128 = 1;
    let mut pivots = 0;
    for row in &h {
        if let Some(col) = row.iter().position(|&x| x != 0) {
            idx *= row[col] as i128;
            pivots += 1;
            let _ = col;
        }
    }
    if pivots < cols {
        None
    } else {
        Some(idx.unsigned_abs() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_identity() {
        let m = identity(2);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, identity(2));
    }

    #[test]
    fn snf_example_2x2() {
        let m = vec![vec![2, 4], vec![6, 8]];
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![2, 4]);
        assert_eq!(mat_mul(&mat_mul(&s.u, &m), &s.v), s.d);
        assert_eq!(det(&s.u).abs(), 1);
        assert_eq!(det(&s.v).abs(), 1);
    }

    #[test]
    fn snf_zero() {
        let m = vec![vec![0, 0], vec![0, 0]];
        let s = smith_normal_form(&m);
        assert_eq!(s.d, m);
    }

    #[test]
    fn hermite_solve() {
        // subgroup of Z^2 generated by (1,1): is (2,2) in it?
        let m = vec![vec![1, 1]];
        assert_eq!(solve_left(&m, &[2, 2]), Some(vec![2]));
        assert_eq!(solve_left(&m, &[1, 2]), None);
    }

    #[test]
    fn lattice_index_of_2a_b() {
        // <(2,0), (0,1)> has index 2 in Z^2
        let m = vec![vec![2, 0], vec![0, 1]];
        assert_eq!(lattice_index(&m), Some(2));
        let m2 = vec![vec![1, 0]];
        assert_eq!(lattice_index(&m2), None);
    }
}

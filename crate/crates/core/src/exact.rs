//! Exact rational linear algebra for small integer matrices (ranks, kernels,
//! lattice surjectivity). Entries stay small in every caller, so `i128`
//! rationals are sufficient.

use num_rational::Ratio;

pub type Rational = Ratio<i128>;

fn to_rational(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| Rational::from_integer(v as i128)).collect())
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != Rational::from_integer(0)) else {
            continue;
        };
        m.swap(r, p);
        let lead = m[r][c];
        for v in m[r].iter_mut() {
            *v /= lead;
        }
        for i in 0..rows {
            if i != r && m[i][c] != Rational::from_integer(0) {
                let factor = m[i][c];
                let pivot = m[r].clone();
                for (a, p) in m[i].iter_mut().zip(&pivot) {
                    *a -= factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m = to_rational(rows);
    rref(&mut m).len()
}

/// Basis of `{v : A v = 0}` for the matrix with the given rows.
pub fn nullspace(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = to_rational(rows);
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::from_integer(0); cols];
            v[f] = Rational::from_integer(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f];
            }
            v
        })
        .collect()
}

/// Rank of a set of rational vectors.
pub fn rank_rational(vectors: &[Vec<Rational>]) -> usize {
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether the integer columns span all of `ℤ^rows`: the gcd of the maximal
/// minors must be one.
pub fn columns_span_lattice(columns: &[Vec<i64>], rows: usize) -> bool {
    if rows == 0 {
        return true;
    }
    if columns.len() < rows {
        return false;
    }
    let mut g = 0i128;
    let mut chosen = Vec::with_capacity(rows);
    fn visit(
        columns: &[Vec<i64>],
        rows: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        g: &mut i128,
    ) {
        if *g == 1 {
            return;
        }
        if chosen.len() == rows {
            let m: Vec<Vec<i64>> = (0..rows).map(|r| chosen.iter().map(|&c| columns[c][r]).collect()).collect();
            *g = gcd(*g, determinant(&m));
            return;
        }
        for c in start..columns.len() {
            chosen.push(c);
            visit(columns, rows, c + 1, chosen, g);
            chosen.pop();
        }
    }
    visit(columns, rows, 0, &mut chosen, &mut g);
    g == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let rows = vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]];
        assert_eq!(rank(&rows), 2);
        let ker = nullspace(&rows, 4);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in &rows {
                let s: Rational = r.iter().zip(v).map(|(&a, b)| Rational::from_integer(a as i128) * b).sum();
                assert_eq!(s, Rational::from_integer(0));
            }
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
    }

    #[test]
    fn lattice_spanning() {
        assert!(columns_span_lattice(&[vec![2], vec![3]], 1));
        assert!(!columns_span_lattice(&[vec![2], vec![4]], 1));
        assert!(columns_span_lattice(&[vec![1, 0], vec![0, 1]], 2));
        assert!(!columns_span_lattice(&[vec![1, 1], vec![1, -1]], 2));
    }
}

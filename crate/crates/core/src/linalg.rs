//! Exact Gauss-Jordan elimination over any field with exact equality
//! (rationals, Gaussian rationals).

use num_traits::Num;

use crate::error::{Error, Result};

/// Solve `a · x = b` for a possibly overdetermined system. Returns the
/// unique solution, or `Inconsistent` if none exists. Free variables
/// (rank deficiency) are also reported as `Inconsistent`.
pub fn solve<T: Clone + Num>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::Inconsistent);
        };
        m.swap(pivot_row, p);
        eliminate(&mut m, pivot_row, col);
        pivot_row += 1;
    }
    if m[cols..].iter().any(|r| !r[cols].is_zero()) {
        return Err(Error::Inconsistent);
    }
    Ok(m[..cols].iter().map(|r| r[cols].clone()).collect())
}

/// Inverse of a square matrix.
pub fn invert<T: Clone + Num>(a: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::Inconsistent);
        };
        m.swap(col, p);
        eliminate(&mut m, col, col);
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn eliminate<T: Clone + Num>(m: &mut [Vec<T>], prow: usize, col: usize) {
    let inv = T::one() / m[prow][col].clone();
    for v in m[prow].iter_mut().skip(col) {
        if !v.is_zero() {
            *v = v.clone() * inv.clone();
        }
    }
    let pivot = m[prow].clone();
    for (r, row) in m.iter_mut().enumerate() {
        if r == prow || row[col].is_zero() {
            continue;
        }
        let f = row[col].clone();
        for (v, p) in row.iter_mut().zip(&pivot).skip(col) {
            if !p.is_zero() {
                *v = v.clone() - f.clone() * p.clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    #[test]
    fn inverse_roundtrip() {
        let a: Vec<Vec<BigRational>> = vec![
            vec![int(0), int(2), int(1)],
            vec![int(1), int(0), int(0)],
            vec![int(3), int(1), int(4)],
        ];
        let inv = invert(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: BigRational = (0..3).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(v, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn overdetermined() {
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)], vec![int(2), int(0)]];
        assert_eq!(solve(&a, &[int(3), int(1), int(4)]).unwrap(), vec![int(2), int(1)]);
        assert!(solve(&a, &[int(3), int(1), int(5)]).is_err());
        let b = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(&b, &[rat(1, 2), int(1)]).is_err());
    }
}

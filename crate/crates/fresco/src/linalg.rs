//! Exact Gaussian elimination over ℚ and over power series with unit pivots.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{PowerSeries, Rational};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{ w : rows · w = 0 }`, one vector per free column.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut w = vec![Rational::zero(); ncols];
            w[free] = Rational::from_integer(1.into());
            for (r, &pc) in pivots.iter().enumerate() {
                w[pc] = -m[r][free].clone();
            }
            w
        })
        .collect()
}

/// Solves the square system `A x = rhs` over ℚ (A invertible).
pub fn solve(a: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rhs.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Solves `A x = rhs` over power series by elimination with pivots whose
/// constant term is nonzero. `a[i][j]` is row `i`, column `j`.
pub fn solve_series(a: &[Vec<PowerSeries>], rhs: &[PowerSeries]) -> Result<Vec<PowerSeries>> {
    let n = rhs.len();
    let mut m: Vec<Vec<PowerSeries>> = a.to_vec();
    let mut r: Vec<PowerSeries> = rhs.to_vec();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !m[i][c].constant_term().is_zero())
            .ok_or(Error::NotMonogenic("singular system over the series ring".into()))?;
        m.swap(c, p);
        r.swap(c, p);
        let inv = m[c][c].invert()?;
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        r[c] = &r[c] * &inv;
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for cc in 0..n {
                let d = &f * &m[c][cc];
                m[i][cc] = &m[i][cc] - &d;
            }
            let d = &f * &r[c];
            r[i] = &r[i] - &d;
        }
    }
    Ok(r)
}

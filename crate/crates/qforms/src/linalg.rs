//! Linear algebra over truncated Laurent series in q.
//!
//! Elimination pivots on the entry of lowest valuation. Division by a series
//! of valuation `v` costs `2v` of certified order; the cost is carried by the
//! series truncation bookkeeping, never assumed away.

use crate::error::{Error, Result};
use crate::series::QSeries;

/// Solve `A x = b` for a `K × J` system (`K >= J`). Rows that do not become
/// pivots are left untouched; callers verify them through residuals.
/// Returns the solution and the indices of the pivot rows.
pub fn solve(a: &[Vec<QSeries>], b: &[QSeries]) -> Result<(Vec<QSeries>, Vec<usize>)> {
    let k = a.len();
    let j = if k == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<QSeries>> = a.to_vec();
    let mut rhs: Vec<QSeries> = b.to_vec();
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(j);
    let mut used = vec![false; k];
    for col in 0..j {
        let mut best: Option<usize> = None;
        for row in 0..k {
            if used[row] || m[row][col].is_zero() {
                continue;
            }
            let v = m[row][col].valuation().unwrap();
            if best.is_none_or(|br| v < m[br][col].valuation().unwrap()) {
                best = Some(row);
            }
        }
        let p = best.ok_or_else(|| Error::SingularSystem(format!("no certified pivot in column {col}")))?;
        used[p] = true;
        pivot_rows.push(p);
        let inv = m[p][col].try_inv()?;
        for c in 0..j {
            m[p][c] = m[p][c].try_mul(&inv)?;
        }
        rhs[p] = rhs[p].try_mul(&inv)?;
        for row in 0..k {
            if row == p || m[row][col].is_zero() && m[row][col].trunc().is_none() {
                continue;
            }
            let f = m[row][col].clone();
            for c in 0..j {
                let t = f.try_mul(&m[p][c])?;
                m[row][c] = m[row][c].try_sub(&t)?;
            }
            let t = f.try_mul(&rhs[p])?;
            rhs[row] = rhs[row].try_sub(&t)?;
        }
    }
    let x: Vec<QSeries> = (0..j).map(|c| rhs[pivot_rows[c]].clone()).collect();
    Ok((x, pivot_rows))
}

/// Determinant by cofactor expansion (sizes here stay below 5).
pub fn det(a: &[Vec<QSeries>]) -> Result<QSeries> {
    let n = a.len();
    match n {
        0 => Ok(QSeries::one(None)),
        1 => Ok(a[0][0].clone()),
        _ => {
            let mut acc: Option<QSeries> = None;
            for c in 0..n {
                let minor: Vec<Vec<QSeries>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(i, _)| *i != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let mut t = a[0][c].try_mul(&det(&minor)?)?;
                if c % 2 == 1 {
                    t = t.neg();
                }
                acc = Some(match acc {
                    None => t,
                    Some(s) => s.try_add(&t)?,
                });
            }
            Ok(acc.unwrap())
        }
    }
}

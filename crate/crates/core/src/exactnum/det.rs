use super::{int, Coeff, Rational};
use crate::error::{Error, Result};

/// Determinant by Bareiss single-step fraction-free elimination.
///
/// Every division is exact; a failed division means an arithmetic bug and
/// is reported as [`Error::Internal`].
pub fn bareiss_det<R: Coeff>(ctx: &R::Ctx, matrix: &[Vec<R>]) -> Result<R> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("bareiss_det: matrix is not square".into()));
    }
    if n == 0 {
        return Ok(R::constant(ctx, int(1)));
    }
    let mut m: Vec<Vec<R>> = matrix.to_vec();
    let mut sign = int(1);
    let mut prev = R::constant(ctx, int(1));
    for k in 0..n - 1 {
        if m[k][k].vanishes() {
            match (k + 1..n).find(|&i| !m[i][k].vanishes()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(R::constant(ctx, Rational::from_integer(0.into()))),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul_ref(&m[k][k]).sub_ref(&m[i][k].mul_ref(&m[k][j]));
                m[i][j] = num.div_exact(&prev).ok_or_else(|| {
                    Error::Internal(format!("bareiss_det: inexact division at step {k}"))
                })?;
            }
            m[i][k] = R::constant(ctx, int(0));
        }
        prev = m[k][k].clone();
    }
    Ok(m[n - 1][n - 1].scale(&sign))
}

/// Laplace expansion along the first row. Exponential; for small oracles.
pub fn cofactor_det<R: Coeff>(ctx: &R::Ctx, matrix: &[Vec<R>]) -> R {
    let n = matrix.len();
    if n == 0 {
        return R::constant(ctx, int(1));
    }
    let mut total = R::constant(ctx, int(0));
    for j in 0..n {
        let minor: Vec<Vec<R>> = matrix[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = matrix[0][j].mul_ref(&cofactor_det(ctx, &minor));
        total = if j % 2 == 0 {
            total.add_ref(&term)
        } else {
            total.sub_ref(&term)
        };
    }
    total
}

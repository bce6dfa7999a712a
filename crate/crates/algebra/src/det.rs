//! Determinants over exact rings.

use crate::{AlgebraError, ExactRing};

fn check_square<R>(m: &[Vec<R>]) -> Result<usize, AlgebraError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(AlgebraError::NotSquare);
    }
    Ok(n)
}

/// Fraction-free Gaussian elimination (Bareiss). Every division is exact.
///
/// `one` supplies the ring identity for the empty matrix.
pub fn det_bareiss<R: ExactRing>(mut m: Vec<Vec<R>>, one: &R) -> Result<R, AlgebraError> {
    let n = check_square(&m)?;
    if n == 0 {
        return Ok(one.one_like());
    }
    let mut negate = false;
    let mut prev = one.one_like();
    for k in 0..n - 1 {
        // Smallest nonzero entry of the column as pivot keeps intermediates small.
        let pivot = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].size());
        match pivot {
            Some(i) if i != k => {
                m.swap(k, i);
                negate = !negate;
            }
            Some(_) => {}
            None => return Ok(one.zero_like()),
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let update = |row: &mut Vec<R>| -> Result<(), AlgebraError> {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = pivot_row[k].mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = v.div_exact(&prev)?;
            }
            row[k] = lead.zero_like();
            Ok(())
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            rest.par_iter_mut().try_for_each(update)?;
        }
        #[cfg(not(feature = "parallel"))]
        {
            rest.iter_mut().try_for_each(update)?;
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// Division-free determinant by Laplace expansion over column subsets.
///
/// Costs `O(2^n n)` ring multiplications and never divides, so it is an
/// independent check on [`det_bareiss`]. Minors of the same size are
/// independent and are computed in parallel under the `parallel` feature.
pub fn det_expansion<R: ExactRing>(m: &[Vec<R>], one: &R) -> Result<R, AlgebraError> {
    let n = check_square(m)?;
    if n > 20 {
        return Err(AlgebraError::NotSquare);
    }
    // minors[mask]: determinant of the first popcount(mask) rows restricted to the
    // columns in mask.
    let mut minors: Vec<R> = vec![one.zero_like(); 1 << n];
    minors[0] = one.one_like();
    for size in 1..=n {
        let masks: Vec<usize> = (1usize..(1 << n)).filter(|x| x.count_ones() as usize == size).collect();
        let row = size - 1;
        let compute = |&mask: &usize| -> R {
            let mut acc = one.zero_like();
            let mut sign_neg = row % 2 == 1;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &m[row][col];
                let minor = &minors[mask & !(1 << col)];
                if !entry.is_zero() && !minor.is_zero() {
                    let t = entry.mul(minor);
                    acc = if sign_neg { acc.sub(&t) } else { acc.add(&t) };
                }
                // Expansion sign (-1)^(row + position of col within mask).
                sign_neg = !sign_neg;
            }
            acc
        };
        #[cfg(feature = "parallel")]
        let values: Vec<R> = {
            use rayon::prelude::*;
            masks.par_iter().map(compute).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let values: Vec<R> = masks.iter().map(compute).collect();
        for (mask, v) in masks.into_iter().zip(values) {
            minors[mask] = v;
        }
    }
    Ok(minors.pop().expect("nonempty"))
}

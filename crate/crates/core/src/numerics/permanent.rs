use super::{CMatrix, C64};
use crate::{Error, Result};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::ops::{AddAssign, Mul, Neg, SubAssign};

/// Largest matrix size accepted by [`permanent`].
pub const PERMANENT_CAP: usize = 30;
/// Largest matrix size accepted by [`permanent_naive`].
pub const NAIVE_CAP: usize = 9;

// Below this size the Gray-code walk runs on one thread.
const PARALLEL_MIN: usize = 18;

pub trait Scalar:
    Copy + Zero + One + AddAssign + SubAssign + Mul<Output = Self> + Neg<Output = Self> + Send + Sync
{
}
impl<T> Scalar for T where
    T: Copy + Zero + One + AddAssign + SubAssign + Mul<Output = T> + Neg<Output = T> + Send + Sync
{
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "permanent of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

fn row_major(m: &CMatrix) -> Vec<C64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub fn permanent(m: &CMatrix) -> Result<C64> {
    permanent_with_cap(m, PERMANENT_CAP)
}

pub fn permanent_with_cap(m: &CMatrix, cap: usize) -> Result<C64> {
    let n = check_square(m)?;
    if n > cap {
        return Err(Error::Capacity(format!("permanent of size {n} exceeds cap {cap}")));
    }
    Ok(ryser(&row_major(m), n))
}

/// Permanent of a real matrix given row-major.
pub fn permanent_real(a: &[f64], n: usize) -> Result<f64> {
    if a.len() != n * n {
        return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", a.len())));
    }
    if n > PERMANENT_CAP {
        return Err(Error::Capacity(format!("permanent of size {n} exceeds cap {PERMANENT_CAP}")));
    }
    Ok(ryser(a, n))
}

/// Ryser's formula over Gray-code ordered column subsets, `O(2ⁿ·n)`.
///
/// `a` is row-major `n×n`. Large sizes split the Gray sequence into chunks
/// evaluated in parallel.
pub fn ryser<T: Scalar>(a: &[T], n: usize) -> T {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return T::one();
    }
    let total: u64 = 1u64 << n;
    let sum = if n < PARALLEL_MIN {
        ryser_range(a, n, 1, total)
    } else {
        let chunks = (rayon::current_num_threads() as u64 * 8).next_power_of_two().min(total);
        let step = total / chunks;
        (0..chunks)
            .into_par_iter()
            .map(|c| ryser_range(a, n, (c * step).max(1), (c + 1) * step))
            .reduce(T::zero, |mut x, y| {
                x += y;
                x
            })
    };
    if n % 2 == 1 {
        -sum
    } else {
        sum
    }
}

// Sum of (−1)^{|S|} ∏_i Σ_{j∈S} a_ij over Gray codes g(k), k in [start, end).
fn ryser_range<T: Scalar>(a: &[T], n: usize, start: u64, end: u64) -> T {
    let mut row_sums = vec![T::zero(); n];
    let mut gray = (start - 1) ^ ((start - 1) >> 1);
    for j in 0..n {
        if gray >> j & 1 == 1 {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs += a[i * n + j];
            }
        }
    }
    let mut acc = T::zero();
    for k in start..end {
        let j = k.trailing_zeros() as usize;
        gray ^= 1 << j;
        if gray >> j & 1 == 1 {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs += a[i * n + j];
            }
        } else {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs -= a[i * n + j];
            }
        }
        let mut prod = T::one();
        for &r in &row_sums {
            prod = prod * r;
        }
        if gray.count_ones() % 2 == 1 {
            acc += -prod;
        } else {
            acc += prod;
        }
    }
    acc
}

/// Sum over all `n!` permutations (Heap's algorithm); the oracle for [`ryser`].
pub fn permanent_naive(m: &CMatrix) -> Result<C64> {
    let n = check_square(m)?;
    if n > NAIVE_CAP {
        return Err(Error::Capacity(format!("naive permanent of size {n} exceeds cap {NAIVE_CAP}")));
    }
    if n == 0 {
        return Ok(C64::one());
    }
    let term = |p: &[usize]| -> C64 { (0..n).map(|i| m[(i, p[i])]).product() };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sum = term(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sum += term(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_matrix_has_unit_permanent() {
        assert_eq!(ryser::<f64>(&[], 0), 1.0);
    }

    #[test]
    fn parallel_chunks_agree_with_serial() {
        let n = PARALLEL_MIN;
        let a: Vec<f64> = (0..n * n).map(|k| ((k * 7919) % 13) as f64 / 13.0 - 0.4).collect();
        let serial = {
            let s = ryser_range(&a, n, 1, 1u64 << n);
            if n % 2 == 1 { -s } else { s }
        };
        let par = ryser(&a, n);
        assert!((serial - par).abs() <= 1e-9 * serial.abs().max(1.0));
    }
}

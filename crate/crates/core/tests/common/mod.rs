//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's polynomial or linear-algebra code; inputs
//! and outputs are plain coefficient vectors indexed by the power of `y`.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn binom(n: usize, k: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Coefficients of `Re (x+iy)^p` and `Im (x+iy)^p` by expanding the
/// binomial over the Gaussian integers.
pub fn re_im_zp(p: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut re = vec![BigInt::zero(); p + 1];
    let mut im = vec![BigInt::zero(); p + 1];
    for j in 0..=p {
        // i^j cycles through 1, i, -1, -i
        let c = binom(p, j);
        match j % 4 {
            0 => re[j] = c,
            1 => im[j] = c,
            2 => re[j] = -c,
            _ => im[j] = -c,
        }
    }
    (re, im)
}

/// `(x² + y²)^q`.
pub fn r2_pow(q: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); 2 * q + 1];
    for a in 0..=q {
        out[2 * a] = binom(q, a);
    }
    out
}

pub fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn scale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * c).collect()
}

/// Flat Laplacian of a homogeneous polynomial of degree `n >= 2`.
pub fn laplacian(coeffs: &[BigRational]) -> Vec<BigRational> {
    let n = coeffs.len() - 1;
    let mut out = vec![BigRational::zero(); n - 1];
    for (j, c) in coeffs.iter().enumerate() {
        let i = n - j;
        if i >= 2 {
            out[j] += c * BigRational::from_integer(BigInt::from(i * (i - 1)));
        }
        if j >= 2 {
            out[j - 2] += c * BigRational::from_integer(BigInt::from(j * (j - 1)));
        }
    }
    out
}

pub fn to_rationals(a: &[BigInt]) -> Vec<BigRational> {
    a.iter().cloned().map(BigRational::from_integer).collect()
}

/// Rank by fraction-free (Bareiss) elimination over the integers.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                let v = &a[rank][c] * &a[r][cc] - &a[r][c] * &a[rank][cc];
                a[r][cc] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Scales a rational matrix by the lcm of its denominators.
pub fn clear_denominators(rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigInt>> {
    use num_integer::Integer;
    let l = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    rows.into_iter()
        .map(|r| r.into_iter().map(|x| (x * &l).to_integer()).collect())
        .collect()
}

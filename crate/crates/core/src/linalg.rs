//! Exact dense matrix routines over ℤ, ℚ and ℤ/p^kℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intpoly::IntPoly;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let m = a.first().map_or(0, |r| r.len());
    (0..m)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Fraction-free Gaussian elimination determinant.
pub fn det_bareiss(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Characteristic polynomial det(X·I − M) by Berkowitz's division-free
/// algorithm. With `modulus` set, intermediate values are reduced.
pub fn charpoly_berkowitz(m: &IntMatrix, modulus: Option<&BigInt>) -> IntPoly {
    let n = m.len();
    let red = |x: BigInt| -> BigInt {
        match modulus {
            Some(q) => x.mod_floor(q),
            None => x,
        }
    };
    // v holds coefficients of the char poly of the leading r×r block,
    // highest degree first.
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        let a = &m[r][r];
        let row: Vec<BigInt> = (0..r).map(|j| m[r][j].clone()).collect();
        let col: Vec<BigInt> = (0..r).map(|i| m[i][r].clone()).collect();
        // Toeplitz column: 1, -a, -R C, -R A C, -R A^2 C, ...
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(red(-a.clone()));
        let mut ac = col.clone();
        for _ in 0..r {
            let s: BigInt = row.iter().zip(&ac).map(|(x, y)| x * y).sum();
            t.push(red(-s));
            let next: Vec<BigInt> = (0..r)
                .map(|i| red((0..r).map(|j| &m[i][j] * &ac[j]).sum()))
                .collect();
            ac = next;
        }
        let mut w = vec![BigInt::zero(); r + 2];
        for (i, wi) in w.iter_mut().enumerate() {
            let mut s = BigInt::zero();
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    s += &t[i - j] * vj;
                }
            }
            *wi = red(s);
        }
        v = w;
    }
    v.reverse();
    IntPoly::new(v)
}

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Basis of the right kernel of a rational matrix with `ncols` columns.
pub fn kernel_rational(m: &RatMatrix, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].recip();
        for j in 0..ncols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); ncols];
            v[fc] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][fc].clone();
            }
            v
        })
        .collect()
}

pub fn rank_rational(m: &RatMatrix, ncols: usize) -> usize {
    ncols - kernel_rational(m, ncols).len()
}

/// Signature (positive, negative, zero) of a symmetric rational matrix by
/// congruence diagonalization.
pub fn signature_rational(m: &RatMatrix) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.clone();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // find a nonzero diagonal pivot, or create one
        let piv = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    None => {
                        zero += active.len();
                        break;
                    }
                    Some((i, j)) => {
                        // e_i <- e_i + e_j makes a[i][i] = 2 a[i][j] != 0
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += v;
                        }
                        i
                    }
                }
            }
        };
        let d = a[piv][piv].clone();
        for &i in &active {
            if i == piv || a[i][piv].is_zero() {
                continue;
            }
            let f = &a[i][piv] / &d;
            for k in 0..n {
                let v = &f * &a[piv][k];
                a[i][k] -= v;
            }
            for k in 0..n {
                let v = &f * &a[k][piv];
                a[k][i] -= v;
            }
        }
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != piv);
    }
    (pos, neg, zero)
}

pub fn rat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .map(|(x, brow)| x * &brow[j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn rat_transpose(a: &RatMatrix) -> RatMatrix {
    let m = a.first().map_or(0, |r| r.len());
    (0..m)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse_rational(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, pr);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// g(M) by Horner's rule.
pub fn eval_poly_at_matrix(g: &IntPoly, m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    let mut acc = vec![vec![BigInt::zero(); n]; n];
    for c in g.coeffs().iter().rev() {
        acc = mat_mul(&acc, m);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

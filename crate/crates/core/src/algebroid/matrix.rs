//! Dense square matrices of scalars with exact elimination.

use crate::expr::{ComplexRational, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = Scalar::zero();
            for l in 0..k {
                if !a[i][l].is_zero() && !b[l][j].is_zero() {
                    acc = acc.add(&a[i][l].mul(&b[l][j]));
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn transpose(a: &Matrix) -> Matrix {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn map(a: &Matrix, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

pub fn is_zero(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(Scalar::is_zero))
}

/// Row vector times matrix.
pub fn row_times(v: &[Scalar], a: &Matrix) -> Vec<Scalar> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m)
        .map(|j| {
            v.iter()
                .zip(a)
                .filter(|(x, r)| !x.is_zero() && !r[j].is_zero())
                .map(|(x, r)| x.mul(&r[j]))
                .sum()
        })
        .collect()
}

/// Matrix times column vector.
pub fn times_col(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|r| {
            r.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .map(|(x, y)| x.mul(y))
                .sum()
        })
        .collect()
}

/// Gauss-Jordan inverse; `None` when a pivot column is structurally zero.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| (m[r][col].num().len() + m[r][col].den().len(), r))?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].inv().ok()?;
        for j in 0..n {
            m[col][j] = m[col][j].mul(&p);
            inv[col][j] = inv[col][j].mul(&p);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                if !m[col][j].is_zero() {
                    m[r][j] = m[r][j].sub(&f.mul(&m[col][j]));
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    Some(inv)
}

/// Determinant by fraction-valued elimination.
pub fn determinant(a: &Matrix) -> Scalar {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = det.neg();
        }
        let p = m[col][col].clone();
        det = det.mul(&p);
        let pinv = p.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].mul(&pinv);
            for j in col..n {
                if !m[col][j].is_zero() {
                    m[r][j] = m[r][j].sub(&f.mul(&m[col][j]));
                }
            }
        }
    }
    det
}

/// Rank of a constant matrix over the complex rationals.
pub fn constant_rank(rows: &[Vec<ComplexRational>]) -> usize {
    let mut m: Vec<Vec<ComplexRational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for j in col..cols {
                    let t = &f * &m[rank][j];
                    m[r][j] = &m[r][j] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a scalar matrix over the field of rational functions.
pub fn symbolic_rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        for r in rank + 1..m.len() {
            if !m[r][col].is_zero() {
                let f = m[r][col].mul(&inv);
                for j in col..cols {
                    let t = f.mul(&m[rank][j]);
                    m[r][j] = m[r][j].sub(&t);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_with_coords;

    fn s(t: &str) -> Scalar {
        parse_with_coords(t, &["x".to_string(), "y".to_string()]).unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![s("x"), s("1")], vec![s("y"), s("x+y")]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(2));
        assert_eq!(determinant(&a), s("x^2 + x*y - y"));
    }

    #[test]
    fn singular_is_detected() {
        let a = vec![vec![s("x"), s("y")], vec![s("2*x"), s("2*y")]];
        assert!(inverse(&a).is_none());
        assert!(determinant(&a).is_zero());
        assert_eq!(symbolic_rank(&a), 1);
    }
}

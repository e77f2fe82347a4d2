use super::metric::Metric;
use super::{Connection, ConnectionError, Curvature};
use crate::algebroid::Section;
use crate::check::NumericCheck;
use crate::expr::{eval, sample_points, ExprError, Point, Scalar};
use crate::jstruct::EndoField;
use num_complex::Complex64;

/// `R4(s1,s2,s3,s4) = g(R(s3,s4)s2, s1)`.
pub fn riemann4(r: &Curvature, g: &Metric, s: [&Section; 4]) -> Scalar {
    g.pair(&r.apply(s[2], s[3], s[1]), s[0])
}

/// `R4(s1,s2,s1,s2) / (g(s1,s1)g(s2,s2) − g(s1,s2)²)`.
pub fn sectional_curvature(r: &Curvature, g: &Metric, s1: &Section, s2: &Section) -> Result<Scalar, ConnectionError> {
    let num = riemann4(r, g, [s1, s2, s1, s2]);
    let g12 = g.pair(s1, s2);
    let den = g.pair(s1, s1).mul(&g.pair(s2, s2)).sub(&g12.mul(&g12));
    if den.is_zero() {
        return Err(ConnectionError::DegeneratePlane);
    }
    Ok(num.checked_div(&den)?)
}

/// Sectional curvature of the plane spanned by `s` and `J s`.
pub fn holomorphic_sectional(
    r: &Curvature,
    g: &Metric,
    j: &EndoField,
    s: &Section,
) -> Result<Scalar, ConnectionError> {
    sectional_curvature(r, g, s, &j.apply(s))
}

fn numeric(s: &Scalar, p: &Point) -> Result<Option<Complex64>, ConnectionError> {
    match eval(s, p) {
        Ok(v) => Ok(Some(v.to_complex64())),
        Err(ExprError::Pole { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Lower-triangular `L` with `G = L Lᵀ`, or `None` if `G` is not positive.
fn cholesky(g: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..=i {
            let s: f64 = (0..k).map(|p| l[i][p] * l[k][p]).sum();
            if i == k {
                let d = g[i][i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][k] = (g[i][k] - s) / l[k][k];
            }
        }
    }
    Some(l)
}

/// Inverse of a lower-triangular matrix.
fn lower_inverse(l: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = l.len();
    let mut inv = vec![vec![0.0; n]; n];
    for col in 0..n {
        for i in 0..n {
            let rhs = if i == col { 1.0 } else { 0.0 };
            let s: f64 = (0..i).map(|k| l[i][k] * inv[k][col]).sum();
            inv[i][col] = (rhs - s) / l[i][i];
        }
    }
    inv
}

/// Curvature matrices `R^b_a(e_x, e_y)` are skew in an orthonormal frame,
/// checked pointwise after Gram–Schmidt (Cholesky) at sampled points.
pub fn curvature_skew_check(
    conn: &Connection,
    g: &Metric,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<NumericCheck, ConnectionError> {
    let r = conn.rank();
    let curv = conn.curvature();
    let mut check = NumericCheck::new("curvature_skew_orthonormal", tol);
    for p in sample_points(conn.structure().coords(), samples, seed) {
        let mut gm = vec![vec![0.0; r]; r];
        let mut pole = false;
        for a in 0..r {
            for b in 0..r {
                match numeric(g.get(a, b), &p)? {
                    Some(v) => gm[a][b] = v.re,
                    None => pole = true,
                }
            }
        }
        if pole {
            continue;
        }
        let Some(l) = cholesky(&gm) else { continue };
        let li = lower_inverse(&l);
        for x in 0..r {
            for y in x + 1..r {
                let mut rm = vec![vec![Complex64::new(0.0, 0.0); r]; r];
                for b in 0..r {
                    for a in 0..r {
                        match numeric(curv.get(b, x, y, a), &p)? {
                            Some(v) => rm[b][a] = v,
                            None => pole = true,
                        }
                    }
                }
                if pole {
                    break;
                }
                // Orthonormal frame u_k = Σ_a (L⁻ᵀ)[a][k] e_a; in it R' = Lᵀ R L⁻ᵀ.
                let mut out = vec![vec![Complex64::new(0.0, 0.0); r]; r];
                for i in 0..r {
                    for k in 0..r {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for b in 0..r {
                            for a in 0..r {
                                acc += l[b][i] * rm[b][a] * li[k][a];
                            }
                        }
                        out[i][k] = acc;
                    }
                }
                let mut worst: f64 = 0.0;
                for i in 0..r {
                    for k in 0..r {
                        worst = worst.max((out[i][k] + out[k][i].conj()).norm());
                    }
                }
                check.record(worst);
            }
        }
    }
    Ok(check)
}

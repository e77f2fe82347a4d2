use super::ConstructionError;
use crate::algebroid::matrix::{self, Matrix};
use crate::algebroid::{Algebroid, Chart, Section, Structure};
use crate::check::Check;
use crate::connections::{Connection, Metric};
use crate::expr::Scalar;
use crate::jstruct::{nijenhuis_of, EndoField};

/// The prolongation of an algebroid of rank `r` over its own total space.
///
/// Frame index `a < r` is `X_a`, index `r + a` is `V_a`.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub base: Algebroid,
    pub algebroid: Algebroid,
    /// Fiber coordinates `y^a`.
    pub fiber: Vec<String>,
    /// Row `K` expresses the lift basis `(e_a^c, e_a^v)` in the `(X, V)` frame.
    lift_rows: Matrix,
    lift_inverse: Matrix,
    /// Structure functions in the lift basis.
    lift_structure: Structure,
}

fn fiber_names(base: &[String], r: usize) -> Vec<String> {
    (1..=r)
        .map(|a| {
            let mut name = format!("y{a}");
            while base.contains(&name) {
                name.push('_');
            }
            name
        })
        .collect()
}

/// Builds the prolongation. Structure functions come from the lift laws
/// `[s^v,t^v] = 0`, `[s^v,t^c] = [s,t]^v`, `[s^c,t^c] = [s,t]^c` together
/// with `(f s)^c = f s^c + f^c s^v`, then are moved to the `(X, V)` frame.
pub fn prolong(base: &Algebroid) -> Result<Prolongation, ConstructionError> {
    let st = base.structure();
    let r = st.rank();
    let n = st.dim();
    let fiber = fiber_names(st.coords(), r);
    let mut coords = st.coords().to_vec();
    coords.extend(fiber.iter().cloned());
    let y: Vec<Scalar> = fiber.iter().map(|c| Scalar::coord(c)).collect();

    // Anchor of the (X, V) frame.
    let mut anchor_xv = vec![vec![Scalar::zero(); n + r]; 2 * r];
    for a in 0..r {
        for i in 0..n {
            anchor_xv[a][i] = st.rho(a, i).clone();
        }
        anchor_xv[r + a][n + a] = Scalar::one();
    }

    // Lift basis rows in the (X, V) frame: e_a^c = X_a − C^b_ac y^c V_b, e_a^v = V_a.
    let mut lift_rows = matrix::zeros(2 * r, 2 * r);
    for a in 0..r {
        lift_rows[a][a] = Scalar::one();
        lift_rows[r + a][r + a] = Scalar::one();
        for b in 0..r {
            let v: Scalar = (0..r).map(|c| st.c(b, a, c).mul(&y[c])).sum();
            lift_rows[a][r + b] = v.neg();
        }
    }
    let lift_inverse = matrix::inverse(&lift_rows).ok_or_else(|| ConstructionError::Shape("lift basis".into()))?;

    let anchor_lift = matrix::mul(&lift_rows, &anchor_xv);
    let f_c = |f: &Scalar| -> Scalar { (0..r).map(|d| y[d].mul(&st.derive(d, f))).sum() };
    let mut bracket = vec![vec![vec![Scalar::zero(); 2 * r]; 2 * r]; 2 * r];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let k = st.c(c, a, b);
                if k.is_zero() {
                    continue;
                }
                // [e_a^c, e_b^c] = C^c_ab e_c^c + (C^c_ab)^c e_c^v
                bracket[c][a][b] = k.clone();
                bracket[r + c][a][b] = f_c(k);
                // [e_a^v, e_b^c] = C^c_ab e_c^v
                bracket[r + c][r + a][b] = k.clone();
                bracket[r + c][b][r + a] = k.neg();
            }
        }
    }
    let lift_structure = Structure::new(coords.clone(), anchor_lift, bracket)?;
    let (xv, _) = lift_structure.reframe(&lift_inverse)?;
    let chart = Chart::new(&format!("prolong({})", base.chart().name()), &coords)?;
    let mut labels: Vec<String> = (1..=r).map(|a| format!("X{a}")).collect();
    labels.extend((1..=r).map(|a| format!("V{a}")));
    let algebroid = Algebroid::from_structure(chart, xv)?.with_labels(labels)?;
    Ok(Prolongation {
        base: base.clone(),
        algebroid,
        fiber,
        lift_rows,
        lift_inverse,
        lift_structure,
    })
}

impl Prolongation {
    pub fn base_rank(&self) -> usize {
        self.base.rank()
    }

    fn y(&self, a: usize) -> Scalar {
        Scalar::coord(&self.fiber[a])
    }

    /// Rows of the lift basis `(e_a^c, e_a^v)` in the `(X, V)` frame.
    pub fn lift_rows(&self) -> &Matrix {
        &self.lift_rows
    }

    /// `f^v = f ∘ p`.
    pub fn vertical_fn(&self, f: &Scalar) -> Scalar {
        f.clone()
    }

    /// `f^c(u) = ρ(u) f = y^a ρ_a(f)`.
    pub fn complete_fn(&self, f: &Scalar) -> Scalar {
        let st = self.base.structure();
        (0..self.base_rank()).map(|a| self.y(a).mul(&st.derive(a, f))).sum()
    }

    /// `s^v = s^a V_a`.
    pub fn vertical(&self, s: &Section) -> Section {
        let mut v = vec![Scalar::zero(); self.base_rank()];
        v.extend(s.0.iter().cloned());
        Section(v)
    }

    /// `s^c = s^a X_a + (ρ(e_c)(s^a) − C^a_bc s^b) y^c V_a`.
    pub fn complete(&self, s: &Section) -> Section {
        let st = self.base.structure();
        let r = self.base_rank();
        let mut v = s.0.clone();
        for a in 0..r {
            let mut acc = Scalar::zero();
            for c in 0..r {
                let mut coeff = st.derive(c, &s.0[a]);
                for b in 0..r {
                    coeff = coeff.sub(&st.c(a, b, c).mul(&s.0[b]));
                }
                acc = acc.add(&coeff.mul(&self.y(c)));
            }
            v.push(acc);
        }
        Section(v)
    }

    /// `s^h = s^a (X_a − Γ^b_ac y^c V_b)`.
    pub fn horizontal(&self, conn: &Connection, s: &Section) -> Section {
        let r = self.base_rank();
        let mut v = s.0.clone();
        for b in 0..r {
            let mut acc = Scalar::zero();
            for a in 0..r {
                for c in 0..r {
                    acc = acc.add(&s.0[a].mul(conn.gamma(b, a, c)).mul(&self.y(c)));
                }
            }
            v.push(acc.neg());
        }
        Section(v)
    }

    fn transfer(&self, images_rows: &Matrix, basis_rows: &Matrix) -> Result<Matrix, ConstructionError> {
        let inv = matrix::inverse(basis_rows).ok_or_else(|| ConstructionError::Shape("lift basis".into()))?;
        Ok(matrix::transpose(&matrix::mul(&inv, images_rows)))
    }

    /// `J^c` with `J^c s^c = (Js)^c` and `J^c s^v = (Js)^v`.
    pub fn complete_lift_endo(&self, t: &EndoField) -> Result<EndoField, ConstructionError> {
        let r = self.base_rank();
        let mut images = Vec::with_capacity(2 * r);
        for a in 0..r {
            images.push(self.complete(&t.image(a)).0);
        }
        for a in 0..r {
            images.push(self.vertical(&t.image(a)).0);
        }
        Ok(EndoField::new(self.transfer(&images, &self.lift_rows)?)?)
    }

    /// `g^c` with `g^c(s^c,t^c) = g(s,t)^c`, `g^c(s^v,t^c) = g(s,t)^v`,
    /// `g^c(s^v,t^v) = 0`, in the `(X, V)` frame.
    pub fn complete_lift_metric(&self, g: &Matrix) -> Matrix {
        let r = self.base_rank();
        let mut gl = matrix::zeros(2 * r, 2 * r);
        for a in 0..r {
            for b in 0..r {
                gl[a][b] = self.complete_fn(&g[a][b]);
                gl[a][r + b] = self.vertical_fn(&g[a][b]);
                gl[r + a][b] = self.vertical_fn(&g[a][b]);
            }
        }
        let li = &self.lift_inverse;
        matrix::mul(&matrix::mul(li, &gl), &matrix::transpose(li))
    }

    fn horizontal_rows(&self, conn: &Connection) -> Matrix {
        let r = self.base_rank();
        let mut rows: Matrix = (0..r).map(|a| self.horizontal(conn, &Section::basis(r, a)).0).collect();
        rows.extend((0..r).map(|a| self.vertical(&Section::basis(r, a)).0));
        rows
    }

    /// `J_L(s^h) = −s^v`, `J_L(s^v) = s^h` for the splitting induced by `conn`.
    pub fn sasaki_endo(&self, conn: &Connection) -> Result<EndoField, ConstructionError> {
        let r = self.base_rank();
        let rows = self.horizontal_rows(conn);
        let mut images: Matrix = rows[r..].iter().map(|row| row.iter().map(Scalar::neg).collect()).collect();
        images.extend(rows[..r].iter().cloned());
        Ok(EndoField::new(self.transfer(&images, &rows)?)?)
    }

    /// Sasaki metric: `g(s^h,t^h) = g(s^v,t^v) = g(s,t)^v`, `g(s^h,t^v) = 0`.
    pub fn sasaki_metric(&self, conn: &Connection, g: &Matrix) -> Result<Matrix, ConstructionError> {
        let r = self.base_rank();
        let rows = self.horizontal_rows(conn);
        let inv = matrix::inverse(&rows).ok_or_else(|| ConstructionError::Shape("horizontal frame".into()))?;
        let mut gh = matrix::zeros(2 * r, 2 * r);
        for a in 0..r {
            for b in 0..r {
                gh[a][b] = self.vertical_fn(&g[a][b]);
                gh[r + a][r + b] = self.vertical_fn(&g[a][b]);
            }
        }
        Ok(matrix::mul(&matrix::mul(&inv, &gh), &matrix::transpose(&inv)))
    }

    /// Complete lift `D^c` of a base connection: `D^c_{s^c} t^c = (D_s t)^c`,
    /// `D^c_{s^c} t^v = D^c_{s^v} t^c = (D_s t)^v`, `D^c_{s^v} t^v = 0`.
    pub fn complete_connection(&self, conn: &Connection) -> Connection {
        let r = self.base_rank();
        let mut gamma = vec![vec![vec![Scalar::zero(); 2 * r]; 2 * r]; 2 * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let k = conn.gamma(c, a, b);
                    if k.is_zero() {
                        continue;
                    }
                    gamma[c][a][b] = k.clone();
                    gamma[r + c][a][b] = self.complete_fn(k);
                    gamma[r + c][a][r + b] = k.clone();
                    gamma[r + c][r + a][b] = k.clone();
                }
            }
        }
        let on_lift = Connection::new(self.lift_structure.clone(), gamma).expect("square");
        on_lift.reframe(&self.lift_inverse, &self.lift_rows, self.algebroid.structure())
    }

    /// Lift homomorphism laws on the given base sections and functions.
    pub fn lift_laws(&self, sections: &[Section], functions: &[Scalar]) -> Result<Check, ConstructionError> {
        let pro = &self.algebroid;
        let mut check = Check::new("lift_laws");
        for (x, s) in sections.iter().enumerate() {
            for (z, t) in sections.iter().enumerate() {
                let st = self.base.bracket(s, t)?;
                let vv = pro.bracket(&self.vertical(s), &self.vertical(t))?;
                let vc = pro
                    .bracket(&self.vertical(s), &self.complete(t))?
                    .sub(&self.vertical(&st));
                let cc = pro
                    .bracket(&self.complete(s), &self.complete(t))?
                    .sub(&self.complete(&st));
                for (law, v) in [vv, vc, cc].into_iter().enumerate() {
                    for (k, w) in v.0.into_iter().enumerate() {
                        check.record(&[law, x, z, k], w);
                    }
                }
            }
            for (z, f) in functions.iter().enumerate() {
                let rf = self.base.derive_along(s, f);
                let laws = [
                    pro.derive_along(&self.complete(s), &self.complete_fn(f)).sub(&self.complete_fn(&rf)),
                    pro.derive_along(&self.complete(s), &self.vertical_fn(f)).sub(&self.vertical_fn(&rf)),
                    pro.derive_along(&self.vertical(s), &self.complete_fn(f)).sub(&self.vertical_fn(&rf)),
                    pro.derive_along(&self.vertical(s), &self.vertical_fn(f)),
                ];
                for (law, v) in laws.into_iter().enumerate() {
                    check.record(&[3 + law, x, z], v);
                }
            }
        }
        Ok(check)
    }

    /// `J^c s^v = (Js)^v`, `J^c s^c = (Js)^c` and `N_{J^c}(e_a^c, e_b^c) = N_J(e_a,e_b)^c`.
    pub fn complete_j_checks(&self, j: &EndoField) -> Result<Check, ConstructionError> {
        let r = self.base_rank();
        let jc = self.complete_lift_endo(j)?;
        let mut check = Check::new("complete_lift_j");
        let pro = self.algebroid.structure();
        let base = self.base.structure();
        for a in 0..r {
            let e = Section::basis(r, a);
            let v = jc.apply(&self.vertical(&e)).sub(&self.vertical(&j.apply(&e)));
            let c = jc.apply(&self.complete(&e)).sub(&self.complete(&j.apply(&e)));
            for (k, w) in v.0.into_iter().chain(c.0).enumerate() {
                check.record(&[0, a, k], w);
            }
            for b in 0..r {
                let f = Section::basis(r, b);
                let lhs = nijenhuis_of(pro, &jc, &self.complete(&e), &self.complete(&f))?;
                let rhs = self.complete(&nijenhuis_of(base, j, &e, &f)?);
                for (k, w) in lhs.sub(&rhs).0.into_iter().enumerate() {
                    check.record(&[1, a, b, k], w);
                }
            }
        }
        Ok(check)
    }

    /// `g^c` as a metric, when it is nondegenerate.
    pub fn complete_metric(&self, g: &Matrix) -> Result<Metric, ConstructionError> {
        Ok(Metric::new(self.complete_lift_metric(g))?)
    }
}

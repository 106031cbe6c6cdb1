//! Height reduction on `H^2` for `PSL_2(O_E)`.
//!
//! The height of `z` is `y_1 y_2`; `g = (a b; c d)` changes it by the factor
//! `|c_1 z_1 + d_1|^-2 |c_2 z_2 + d_2|^-2`. A point is reduced when no bottom
//! row `(c, d)` with `c != 0` increases the height. Two reduced points in the
//! same orbit differ by a stabiliser of infinity after at most one step
//! through a bottom row of value exactly one.

use num_complex::Complex64;

use super::matrix::{Mat2, Point};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

const TOL: f64 = 1e-9;
const MATCH_TOL: f64 = 1e-7;
const MAX_STEPS: usize = 200;

#[derive(Clone, Debug)]
pub struct Reducer {
    disc: i64,
    eps: FieldElement,
    eps_inv: FieldElement,
    eps_emb: (f64, f64),
    sqrt_d: f64,
    omega_emb: (f64, f64),
}

/// Result of reducing a point: `gamma * z = point`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub gamma: Mat2,
    pub point: Point,
}

pub fn height(z: &Point) -> f64 {
    z.0.im * z.1.im
}

impl Reducer {
    pub fn new(field: &FieldContext) -> Self {
        let disc = field.disc();
        let eps = field.fundamental_unit().clone();
        let n = FieldElement::from_int(disc, field.unit_norm());
        let eps_inv = &eps.conj() * &n;
        Reducer {
            disc,
            eps_emb: eps.embeddings(),
            eps,
            eps_inv,
            sqrt_d: (disc as f64).sqrt(),
            omega_emb: FieldElement::omega(disc).embeddings(),
        }
    }

    fn unit_pow(&self, k: i64) -> FieldElement {
        if k >= 0 {
            self.eps.pow(k as u32)
        } else {
            self.eps_inv.pow((-k) as u32)
        }
    }

    /// `(s, r)` with `x = s + r omega` in both embeddings.
    fn basis_solve(&self, x1: f64, x2: f64) -> (f64, f64) {
        let r = (x1 - x2) / (self.omega_emb.0 - self.omega_emb.1);
        (x1 - r * self.omega_emb.0, r)
    }

    /// Element of the stabiliser of infinity acting as `z -> eps^{2k} z + mu`.
    fn stab_matrix(&self, k: i64, mu: &FieldElement) -> Mat2 {
        let ek = self.unit_pow(k);
        let ek_inv = self.unit_pow(-k);
        Mat2::new(ek, mu * &ek_inv, FieldElement::zero(self.disc), ek_inv)
    }

    /// Balance `y_1 / y_2` and translate `x` near zero.
    fn normalize(&self, z: &Point) -> (Mat2, Point) {
        let step = 2.0 * (self.eps_emb.0.abs().ln() - self.eps_emb.1.abs().ln());
        let k = (-(z.0.im / z.1.im).ln() / step).round() as i64;
        let scale = self.stab_matrix(k, &FieldElement::zero(self.disc));
        let w = scale.apply(z);
        let (s, r) = self.basis_solve(w.0.re, w.1.re);
        let mu = FieldElement::from_basis(self.disc, -(s.round() as i64), -(r.round() as i64));
        let shift =
            Mat2::new(FieldElement::one(self.disc), mu, FieldElement::zero(self.disc), FieldElement::one(self.disc));
        let m = shift.mul(&scale);
        let w = m.apply(z);
        (m, w)
    }

    /// Bottom rows `(c, d)`, `c != 0` up to units, with
    /// `|c_1 z_1 + d_1|^2 |c_2 z_2 + d_2|^2 <= vmax`.
    pub fn bottom_rows(&self, z: &Point, vmax: f64) -> Vec<(FieldElement, FieldElement, f64)> {
        let (y1, y2) = (z.0.im, z.1.im);
        let (x1, x2) = (z.0.re, z.1.re);
        let nmax = vmax.sqrt() / (y1 * y2);
        let e1 = self.eps_emb.0.abs().max(self.eps_emb.1.abs());
        let bound = (nmax * e1).sqrt() * (1.0 + TOL);
        let umax = (2.0 * bound).floor() as i64;
        let vmax_c = (2.0 * bound / self.sqrt_d).floor() as i64;
        let mut out = vec![];
        for cv in -vmax_c..=vmax_c {
            for cu in -umax..=umax {
                if (cu - cv * self.disc).rem_euclid(2) != 0 || (cu == 0 && cv == 0) {
                    continue;
                }
                let c1 = (cu as f64 + cv as f64 * self.sqrt_d) / 2.0;
                let c2 = (cu as f64 - cv as f64 * self.sqrt_d) / 2.0;
                // one representative for c up to sign
                if c1 < 0.0 || (c1 == 0.0 && c2 < 0.0) {
                    continue;
                }
                if c1 == 0.0 || c2 == 0.0 {
                    continue;
                }
                let ratio = (c1 / c2).abs();
                if ratio * e1 < 1.0 - TOL || ratio > e1 * (1.0 + TOL) {
                    continue;
                }
                if (c1 * c2).abs() > nmax * (1.0 + TOL) {
                    continue;
                }
                let r1sq = vmax / (c2 * c2 * y2 * y2) - c1 * c1 * y1 * y1;
                let r2sq = vmax / (c1 * c1 * y1 * y1) - c2 * c2 * y2 * y2;
                if r1sq < -TOL || r2sq < -TOL {
                    continue;
                }
                let (r1, r2) = (r1sq.max(0.0).sqrt() + TOL, r2sq.max(0.0).sqrt() + TOL);
                let (m1, m2) = (-c1 * x1, -c2 * x2);
                let (lo1, hi1, lo2, hi2) = (m1 - r1, m1 + r1, m2 - r2, m2 + r2);
                let ulo = (lo1 + lo2).floor() as i64;
                let uhi = (hi1 + hi2).ceil() as i64;
                let vlo = ((lo1 - hi2) / self.sqrt_d).floor() as i64;
                let vhi = ((hi1 - lo2) / self.sqrt_d).ceil() as i64;
                for dv in vlo..=vhi {
                    for du in ulo..=uhi {
                        if (du - dv * self.disc).rem_euclid(2) != 0 {
                            continue;
                        }
                        let d1 = (du as f64 + dv as f64 * self.sqrt_d) / 2.0;
                        let d2 = (du as f64 - dv as f64 * self.sqrt_d) / 2.0;
                        let f1 = (z.0 * c1 + d1).norm_sqr();
                        let f2 = (z.1 * c2 + d2).norm_sqr();
                        let v = f1 * f2;
                        if v <= vmax {
                            out.push((FieldElement::new(self.disc, cu, cv), FieldElement::new(self.disc, du, dv), v));
                        }
                    }
                }
            }
        }
        out
    }

    /// A matrix in `SL_2(O)` with bottom row `(c, d)`, if the row is coprime.
    pub fn complete_row(&self, c: &FieldElement, d: &FieldElement) -> Option<Mat2> {
        let n = c.norm();
        let n: i64 = num_traits::ToPrimitive::to_i64(&num_traits::Signed::abs(&n))?;
        let one = FieldElement::one(self.disc);
        for y in 0..n.max(1) {
            for x in 0..n.max(1) {
                let a = FieldElement::from_basis(self.disc, x, y);
                let num = &(&a * d) - &one;
                if let Some(b) = num.div_exact(c) {
                    return Some(Mat2::new(a, b, c.clone(), d.clone()));
                }
            }
        }
        None
    }

    pub fn reduce(&self, z: &Point) -> Result<Reduced> {
        let mut gamma = Mat2::identity(self.disc);
        let mut z = *z;
        for _ in 0..MAX_STEPS {
            let (m, w) = self.normalize(&z);
            gamma = m.mul(&gamma);
            z = w;
            let rows = self.bottom_rows(&z, 1.0 - TOL);
            let best = rows.into_iter().min_by(|a, b| a.2.partial_cmp(&b.2).unwrap());
            let Some((c, d, _)) = best else {
                return Ok(Reduced { gamma, point: z });
            };
            let sigma = self
                .complete_row(&c, &d)
                .ok_or_else(|| Error::Internal(format!("bottom row ({c}, {d}) is not coprime")))?;
            z = sigma.apply(&z);
            gamma = sigma.mul(&gamma);
        }
        Err(Error::Internal("height reduction did not terminate".into()))
    }

    /// Images of a reduced point under the matrices with bottom rows of
    /// value one, together with the point itself.
    pub fn neighbours(&self, z: &Point) -> Vec<(Mat2, Point)> {
        let mut out = vec![(Mat2::identity(self.disc), *z)];
        for (c, d, v) in self.bottom_rows(z, 1.0 + MATCH_TOL) {
            if (v - 1.0).abs() > MATCH_TOL {
                continue;
            }
            if let Some(s) = self.complete_row(&c, &d) {
                let w = s.apply(z);
                out.push((s, w));
            }
        }
        out
    }

    /// `tau` in the stabiliser of infinity with `tau p = w`.
    pub fn stab_match(&self, p: &Point, w: &Point) -> Option<Mat2> {
        let close = |a: f64, b: f64| (a - b).abs() <= MATCH_TOL * a.abs().max(b.abs()).max(1.0);
        let s1 = self.eps_emb.0 * self.eps_emb.0;
        let s2 = self.eps_emb.1 * self.eps_emb.1;
        let k0 = ((w.0.im / p.0.im).ln() / s1.ln()).round() as i64;
        for k in [k0, k0 - 1, k0 + 1] {
            let (f1, f2) = (s1.powi(k as i32), s2.powi(k as i32));
            if !close(w.0.im, f1 * p.0.im) || !close(w.1.im, f2 * p.1.im) {
                continue;
            }
            let (s, r) = self.basis_solve(w.0.re - f1 * p.0.re, w.1.re - f2 * p.1.re);
            if (s - s.round()).abs() > 1e-6 || (r - r.round()).abs() > 1e-6 {
                continue;
            }
            let mu = FieldElement::from_basis(self.disc, s.round() as i64, r.round() as i64);
            return Some(self.stab_matrix(k, &mu));
        }
        None
    }

    /// For reduced points with precomputed neighbours of `z`: a matrix `m`
    /// with `m z = w`.
    pub fn match_reduced(&self, z_neigh: &[(Mat2, Point)], w: &Point) -> Option<Mat2> {
        for (s, p) in z_neigh {
            if let Some(tau) = self.stab_match(p, w) {
                return Some(tau.mul(s));
            }
        }
        None
    }
}

pub fn points_close(a: &Point, b: &Point) -> bool {
    let c = |x: Complex64, y: Complex64| (x - y).norm() <= 1e-6 * x.norm().max(1.0);
    c(a.0, b.0) && c(a.1, b.1)
}

pub fn is_identity_action(m: &Mat2) -> bool {
    m.b.is_zero() && m.c.is_zero() && m.a == m.d
}

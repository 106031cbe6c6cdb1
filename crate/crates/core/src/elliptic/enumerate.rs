//! Enumeration of `PSL_2(O_E)`-classes of elliptic points, their
//! `Gamma_0(p)`-classes and the Atkin-Lehner involution on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cosets::{bottom_row, coset_matrix, fixed_cosets, orbit_min};
use super::matrix::{Mat2, Point};
use super::reduce::{height, points_close, Reducer};
use super::residue::{ProjPoint, ResidueField};
use super::rotation::{rotation_type, RotationType};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, PrimeIdealData};
use crate::fixtures;
use crate::forms;

/// A class of elliptic points with a generator of its isotropy group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EllipticClassRep {
    pub matrix: Mat2,
    pub rotation: RotationType,
    #[serde(skip)]
    pub point: Point,
}

impl EllipticClassRep {
    pub fn order(&self) -> u32 {
        self.rotation.n
    }
}

#[derive(Clone, Debug)]
pub struct Catalogue {
    pub disc: i64,
    pub height_bound: u32,
    pub classes: Vec<EllipticClassRep>,
    neighbours: Vec<Vec<(Mat2, Point)>>,
    reducer: Reducer,
}

/// Traces of elliptic elements of `PSL_2(O)`, one per sign.
pub fn elliptic_traces(disc: i64) -> Vec<FieldElement> {
    let s = (disc as f64).sqrt();
    let mut out = vec![];
    let vmax = (4.0 / s).ceil() as i64;
    for v in -vmax..=vmax {
        for u in -4i64..=4 {
            if (u - v * disc).rem_euclid(2) != 0 {
                continue;
            }
            if u < 0 || (u == 0 && v < 0) {
                continue;
            }
            let t = FieldElement::new(disc, u, v);
            let four = FieldElement::from_int(disc, 4);
            if (&four - &(&t * &t)).is_totally_positive() {
                out.push(t);
            }
        }
    }
    out
}

fn box_elements(disc: i64, h: i64) -> Vec<FieldElement> {
    let mut v = vec![];
    for y in -h..=h {
        for x in -h..=h {
            v.push(FieldElement::from_basis(disc, x, y));
        }
    }
    v
}

/// Elliptic elements `(a b; c d)` of determinant one with `a, c` of height at
/// most `h`.
pub fn elliptic_candidates(disc: i64, h: u32) -> Vec<Mat2> {
    let els = box_elements(disc, h as i64);
    let one = FieldElement::one(disc);
    let mut out = vec![];
    for t in elliptic_traces(disc) {
        for a in &els {
            let d = &t - a;
            let ad1 = &(a * &d) - &one;
            for c in &els {
                if c.is_zero() {
                    continue;
                }
                if let Some(b) = ad1.div_exact(c) {
                    out.push(Mat2::new(a.clone(), b, c.clone(), d.clone()));
                }
            }
        }
    }
    out.sort_by_key(|m| (m.height(), format!("{m:?}")));
    out
}

impl Catalogue {
    fn class_point_match(&self, w: &Point) -> Option<(usize, Mat2)> {
        let hw = height(w);
        self.classes.iter().enumerate().find_map(|(i, cls)| {
            let hz = height(&cls.point);
            if (hz - hw).abs() > 1e-7 * hz.max(hw) {
                return None;
            }
            self.reducer.match_reduced(&self.neighbours[i], w).map(|m| (i, m))
        })
    }

    /// Class of an arbitrary point of `H^2` and `h` in `PSL_2(O)` with
    /// `x = h z_k`, or `None` when `x` is not elliptic for the classes found.
    pub fn locate(&self, x: &Point) -> Result<Option<(usize, Mat2)>> {
        let red = self.reducer.reduce(x)?;
        Ok(self.class_point_match(&red.point).map(|(k, m)| {
            // m z_k = gamma x
            (k, red.gamma.adjugate().mul(&m))
        }))
    }

    pub fn count_by_type(&self) -> Vec<(RotationType, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.rotation).or_insert(0usize) += 1;
        }
        m.into_iter().collect()
    }

    pub fn count_of_order(&self, n: u32) -> usize {
        self.classes.iter().filter(|c| c.order() == n).count()
    }
}

/// All classes reached by elements of height at most `height_bound`,
/// without a completeness check.
pub fn scan_elliptic_classes(field: &FieldContext, height_bound: u32) -> Result<Catalogue> {
    let disc = field.disc();
    let reducer = Reducer::new(field);
    let cands = elliptic_candidates(disc, height_bound);
    let reduced: Vec<Result<(Mat2, Point)>> = cands
        .par_iter()
        .map(|g| {
            let z = g.fixed_point().ok_or_else(|| Error::NotElliptic(format!("{g}")))?;
            let r = reducer.reduce(&z)?;
            Ok((r.gamma.conjugate(g), r.point))
        })
        .collect();
    let mut cat = Catalogue { disc, height_bound, classes: vec![], neighbours: vec![], reducer: reducer.clone() };
    for item in reduced {
        let (g, w) = item?;
        match cat.class_point_match(&w) {
            Some((i, m)) => {
                // m z_i = w, so m^-1 g m fixes z_i
                let h = m.adjugate().mul(&g).mul(&m);
                let rot = rotation_type(&h)?;
                if rot.n > cat.classes[i].rotation.n {
                    cat.classes[i].matrix = h;
                    cat.classes[i].rotation = rot;
                }
            }
            None => {
                let rot = rotation_type(&g)?;
                cat.neighbours.push(reducer.neighbours(&w));
                cat.classes.push(EllipticClassRep { matrix: g, rotation: rot, point: w });
            }
        }
    }
    Ok(cat)
}

/// Per-order totals expected for `PSL_2(O_E)`, `D > 12`.
pub fn expected_totals(disc: i64) -> Result<Vec<(u32, u64)>> {
    if disc <= 12 {
        return Err(Error::Hypothesis(format!("no class-number totals for D = {disc}")));
    }
    Ok(vec![(2, forms::h_definite(4 * disc)?), (3, forms::h_definite(3 * disc)?)])
}

/// Check a catalogue for completeness.
pub fn certify(field: &FieldContext, cat: &Catalogue) -> Result<()> {
    let disc = field.disc();
    let fail = |detail: String| Error::Certificate { height: cat.height_bound, detail };
    if disc == 5 {
        let prime = crate::field::split_prime(field, 2)?.remove(0);
        let g0 = gamma0_elliptic_points(field, cat, &prime)?;
        let mut got: Vec<RotationType> = g0.points.iter().map(|p| p.rotation).collect();
        let mut want: Vec<RotationType> = fixtures::d5_p2_gamma0().into_iter().map(|(t, _)| t).collect();
        got.sort();
        want.sort();
        return if got == want { Ok(()) } else { Err(fail(format!("Gamma_0((2)) types {got:?}, expected {want:?}"))) };
    }
    let totals = expected_totals(disc)?;
    for (n, want) in &totals {
        let got = cat.count_of_order(*n) as u64;
        if got != *want {
            return Err(fail(format!("found {got} classes of order {n}, expected {want}")));
        }
    }
    if let Some(c) = cat.classes.iter().find(|c| c.order() != 2 && c.order() != 3) {
        return Err(fail(format!("unexpected order {} at {}", c.order(), c.matrix)));
    }
    Ok(())
}

pub fn enumerate_catalogue(field: &FieldContext, height_bound: u32) -> Result<Catalogue> {
    let cat = scan_elliptic_classes(field, height_bound)?;
    certify(field, &cat)?;
    Ok(cat)
}

/// Certified list of `PSL_2(O_E)`-inequivalent elliptic classes.
pub fn enumerate_elliptic_reps(field: &FieldContext, height_bound: u32) -> Result<Vec<EllipticClassRep>> {
    enumerate_catalogue(field, height_bound).map(|c| c.classes)
}

/// A `Gamma_0(p)`-class of elliptic points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gamma0Point {
    pub class_index: usize,
    pub coset: ProjPoint,
    pub coset_matrix: Mat2,
    pub generator: Mat2,
    pub rotation: RotationType,
    #[serde(skip)]
    pub point: Point,
}

#[derive(Clone, Debug)]
pub struct Gamma0Data {
    pub prime: PrimeIdealData,
    pub residue: ResidueField,
    pub points: Vec<Gamma0Point>,
}

pub fn gamma0_elliptic_points(field: &FieldContext, cat: &Catalogue, prime: &PrimeIdealData) -> Result<Gamma0Data> {
    let k = ResidueField::new(field, prime);
    let mut points = vec![];
    for (i, cls) in cat.classes.iter().enumerate() {
        for pt in fixed_cosets(field, &cls.matrix, prime)? {
            let delta = coset_matrix(field, &k, pt);
            let gen = delta.conjugate(&cls.matrix);
            if !prime.contains(&gen.c) {
                return Err(Error::Internal(format!("{gen} is not in Gamma_0")));
            }
            points.push(Gamma0Point {
                class_index: i,
                coset: pt,
                rotation: cls.rotation,
                generator: gen,
                point: delta.apply(&cls.point),
                coset_matrix: delta,
            });
        }
    }
    Ok(Gamma0Data { prime: prime.clone(), residue: k, points })
}

impl Gamma0Data {
    /// `Gamma_0(p)`-label `(class, orbit of cosets)` of a point, and `h` with
    /// `x = h z_k`.
    pub fn label(&self, cat: &Catalogue, x: &Point) -> Result<Option<(usize, ProjPoint, Mat2)>> {
        Ok(cat.locate(x)?.map(|(k, h)| {
            let (pt, _) = orbit_min(&self.residue, bottom_row(&self.residue, &h), &cat.classes[k].matrix);
            (k, pt, h)
        }))
    }

    pub fn index_of(&self, class: usize, coset: ProjPoint) -> Option<usize> {
        self.points.iter().position(|p| p.class_index == class && p.coset == coset)
    }

    pub fn count_type(&self, t: RotationType) -> usize {
        self.points.iter().filter(|p| p.rotation == t).count()
    }
}

/// Atkin-Lehner involution on the `Gamma_0(p)`-elliptic classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtkinLehnerData {
    /// `images[i]` is the class that `W` sends class `i` to.
    pub images: Vec<usize>,
    /// Fixed classes with the rotation type of the enlarged isotropy group.
    pub fixed: Vec<(usize, RotationType, Mat2)>,
}

impl AtkinLehnerData {
    pub fn fixed_of_type(&self, t: RotationType) -> u64 {
        self.fixed.iter().filter(|f| f.1 == t).count() as u64
    }
}

pub fn atkin_lehner_action(cat: &Catalogue, g0: &Gamma0Data) -> Result<AtkinLehnerData> {
    let disc = cat.disc;
    let varpi = g0.prime.generator.clone();
    let w = Mat2::new(FieldElement::zero(disc), FieldElement::one(disc), -&varpi, FieldElement::zero(disc));
    let mut images = vec![];
    let mut fixed = vec![];
    for (i, p) in g0.points.iter().enumerate() {
        let y = w.apply(&p.point);
        let (k, pt, h2) =
            g0.label(cat, &y)?.ok_or_else(|| Error::InconsistentCounts("Atkin-Lehner image is not elliptic".into()))?;
        let j = g0
            .index_of(k, pt)
            .ok_or_else(|| Error::InconsistentCounts("Atkin-Lehner image has trivial isotropy".into()))?;
        images.push(j);
        if j == i {
            // y = h2 z_k, x = delta z_k: alpha = delta h2^-1 W fixes x
            let alpha = p.coset_matrix.mul(&h2.adjugate()).mul(&w);
            if !points_close(&alpha.apply(&p.point), &p.point) {
                return Err(Error::Internal("Atkin-Lehner fixed point check failed".into()));
            }
            let n = p.rotation.n;
            let mut cand = alpha.clone();
            let mut found = None;
            for _ in 0..n {
                let t = rotation_type(&cand)?;
                if t.n == 2 * n {
                    found = Some((t, cand.clone()));
                    break;
                }
                cand = cand.mul(&p.generator);
            }
            let (t, gen) = found.ok_or_else(|| {
                Error::InconsistentCounts(format!("no generator of order {} at a fixed class", 2 * n))
            })?;
            fixed.push((i, t, gen));
        }
    }
    for (i, &j) in images.iter().enumerate() {
        if images[j] != i {
            return Err(Error::InconsistentCounts("Atkin-Lehner action is not an involution".into()));
        }
    }
    Ok(AtkinLehnerData { images, fixed })
}

//! Exact cohomology of a cdga, with representatives and ring structure.
//!
//! For each degree `k` the differential is assembled as a matrix from the
//! degree-`k` monomial basis to the degree-`k+1` basis; classes are the
//! kernel modulo the image, computed by exact elimination. Representatives
//! are the reduced-echelon complement of the coboundary row space, so golden
//! outputs are reproducible; nothing semantic depends on the choice.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::basis::{basis_index, monomial_basis};
use crate::cdga::Cdga;
use crate::error::{Error, Result};
use crate::generators::Generators;
use crate::linalg::{inertia_of_symmetric, kernel_basis, solve, QMatrix, RowSpace};
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;
use crate::scalar::{self, Scalar};

/// One degree of a computed complex: monomial basis, coboundary row space,
/// and the canonical class representatives (rows reduced against the
/// coboundaries and against each other).
#[derive(Debug, Clone)]
pub(crate) struct DegreeSlot {
    pub basis: Vec<Monomial>,
    pub index: BTreeMap<Monomial, usize>,
    pub boundaries: RowSpace,
    pub classes: RowSpace,
}

impl DegreeSlot {
    pub fn betti(&self) -> usize {
        self.classes.rank()
    }
}

/// A cochain complex materialized through degree `top` (bases are built one
/// degree further so the top differential is available).
#[derive(Debug, Clone)]
pub(crate) struct ComplexData {
    pub top: u32,
    pub slots: Vec<DegreeSlot>,
    pub dmats: Vec<QMatrix>,
    #[allow(dead_code)]
    pub basis_above: Vec<Monomial>,
}

pub(crate) fn build_complex(
    gens: &Generators,
    d: &dyn Fn(&Monomial) -> Result<Polynomial>,
    top: u32,
    max_word_length: Option<u32>,
) -> Result<ComplexData> {
    let nslots = top as usize + 1;
    let mut bases: Vec<Vec<Monomial>> = Vec::with_capacity(nslots + 1);
    for k in 0..=top + 1 {
        bases.push(monomial_basis(gens, k, None, max_word_length));
    }
    let indices: Vec<BTreeMap<Monomial, usize>> = bases.iter().map(|b| basis_index(b)).collect();

    let mut dmats: Vec<QMatrix> = Vec::with_capacity(nslots);
    for k in 0..nslots {
        let mut m = QMatrix::zeros(bases[k + 1].len(), bases[k].len());
        for (j, mono) in bases[k].iter().enumerate() {
            let image = d(mono)?;
            for (im, c) in image.terms() {
                let &row = indices[k + 1].get(im).ok_or(Error::NotInBasis)?;
                m.set(row, j, c.clone());
            }
        }
        dmats.push(m);
    }

    let mut slots: Vec<DegreeSlot> = Vec::with_capacity(nslots);
    for k in 0..nslots {
        let dim = bases[k].len();
        let mut boundaries = RowSpace::new(dim);
        if k > 0 {
            for j in 0..bases[k - 1].len() {
                boundaries.insert(&dmats[k - 1].column(j));
            }
        }
        let mut classes = RowSpace::new(dim);
        for v in kernel_basis(&dmats[k]) {
            let reduced = boundaries.reduce(&v);
            classes.insert(&reduced);
        }
        slots.push(DegreeSlot {
            basis: bases[k].clone(),
            index: indices[k].clone(),
            boundaries,
            classes,
        });
    }

    Ok(ComplexData {
        top,
        slots,
        dmats,
        basis_above: bases[nslots].clone(),
    })
}

impl ComplexData {
    pub fn slot(&self, k: u32) -> Result<&DegreeSlot> {
        self.slots.get(k as usize).ok_or(Error::DegreeOutOfRange {
            degree: k,
            max: self.top,
        })
    }

    pub fn betti(&self, k: u32) -> usize {
        self.slots.get(k as usize).map_or(0, |s| s.betti())
    }

    /// Coordinates of a degree-`k` cocycle vector in the class basis.
    pub fn class_coords(&self, k: u32, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let slot = self.slot(k)?;
        let reduced = slot.boundaries.reduce(v);
        let (coeffs, residual) = slot.classes.reduce_with_coeffs(&reduced);
        if residual.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInBasis);
        }
        Ok(coeffs)
    }

    pub fn is_cocycle_vec(&self, k: u32, v: &[Scalar]) -> Result<bool> {
        let m = &self.dmats[k as usize];
        Ok(m.apply(v)?.iter().all(|x| x.is_zero()))
    }

    /// Class coefficients of any vector (residuals ignored). Agrees with
    /// `class_coords` on cocycles and is linear on the whole degree, which is
    /// what lift searches need.
    pub fn class_coords_lenient(&self, k: u32, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let slot = self.slot(k)?;
        let reduced = slot.boundaries.reduce(v);
        let (coeffs, _residual) = slot.classes.reduce_with_coeffs(&reduced);
        Ok(coeffs)
    }
}

/// A cohomology class, as coordinates in the stored class basis of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCoords {
    pub degree: u32,
    pub coords: Vec<Scalar>,
}

impl ClassCoords {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn unit(degree: u32, len: usize, i: usize) -> Self {
        let mut coords = vec![scalar::zero(); len];
        coords[i] = scalar::one();
        ClassCoords { degree, coords }
    }
}

/// `H^*(Lambda V, d)` through a chosen degree bound, with cocycle
/// representatives and exact class arithmetic.
#[derive(Debug, Clone)]
pub struct CohomologyRing {
    cdga: Cdga,
    data: ComplexData,
}

impl CohomologyRing {
    /// Compute cohomology of a validated cdga through `max_degree`.
    pub fn compute(cdga: &Cdga, max_degree: u32) -> Result<Self> {
        cdga.require_verified()?;
        let c = cdga.clone();
        let d = move |m: &Monomial| c.apply_d(&Polynomial::from_term(scalar::one(), m.clone()));
        let data = build_complex(cdga.generators(), &d, max_degree, None)?;
        Ok(CohomologyRing {
            cdga: cdga.clone(),
            data,
        })
    }

    pub fn cdga(&self) -> &Cdga {
        &self.cdga
    }

    pub fn generators(&self) -> &Generators {
        self.cdga.generators()
    }

    pub fn max_degree(&self) -> u32 {
        self.data.top
    }

    pub fn betti(&self, k: u32) -> usize {
        self.data.betti(k)
    }

    pub fn betti_vector(&self) -> Vec<usize> {
        (0..=self.data.top).map(|k| self.betti(k)).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.betti_vector().iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti_vector()
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn basis(&self, k: u32) -> Result<&[Monomial]> {
        Ok(&self.data.slot(k)?.basis)
    }

    /// The `i`-th class representative in degree `k`.
    pub fn representative(&self, k: u32, i: usize) -> Result<Polynomial> {
        let slot = self.data.slot(k)?;
        let row = slot.classes.rows().get(i).ok_or(Error::NoSuchClass {
            degree: k,
            index: i,
        })?;
        Ok(Polynomial::from_vector(&slot.basis, row))
    }

    pub fn representatives(&self, k: u32) -> Result<Vec<Polynomial>> {
        (0..self.betti(k))
            .map(|i| self.representative(k, i))
            .collect()
    }

    /// A cocycle polynomial for given class coordinates.
    pub fn class_polynomial(&self, cls: &ClassCoords) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (i, c) in cls.coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.representative(cls.degree, i)?.scaled(c));
            }
        }
        Ok(out)
    }

    fn vector_of(&self, k: u32, p: &Polynomial) -> Result<Vec<Scalar>> {
        let slot = self.data.slot(k)?;
        p.to_vector(&slot.index, slot.basis.len())
    }

    pub fn is_cocycle(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.cdga.apply_d(p)?.is_zero())
    }

    /// Coordinates of the class of a cocycle. Errors when `p` is not a
    /// cocycle or its degree exceeds the computed range.
    pub fn reduce_to_class(&self, p: &Polynomial) -> Result<ClassCoords> {
        let Some(degree) = p.homogeneous_degree()? else {
            return Ok(ClassCoords {
                degree: 0,
                coords: vec![scalar::zero(); self.betti(0)],
            });
        };
        let dp = self.cdga.apply_d(p)?;
        if !dp.is_zero() {
            return Err(Error::NotACocycle {
                dp: dp.display(self.generators()).to_string(),
            });
        }
        let v = self.vector_of(degree, p)?;
        let coords = self.data.class_coords(degree, &v)?;
        Ok(ClassCoords { degree, coords })
    }

    /// Solve `d(sigma) = p` exactly; `None` when `p` is not a coboundary.
    pub fn coboundary_witness(&self, p: &Polynomial) -> Result<Option<Polynomial>> {
        let Some(degree) = p.homogeneous_degree()? else {
            return Ok(Some(Polynomial::zero()));
        };
        if degree == 0 {
            return Ok(if p.is_zero() {
                Some(Polynomial::zero())
            } else {
                None
            });
        }
        if degree > self.data.top {
            return Err(Error::DegreeOutOfRange {
                degree,
                max: self.data.top,
            });
        }
        let v = self.vector_of(degree, p)?;
        let dmat = &self.data.dmats[(degree - 1) as usize];
        let below = self.data.slot(degree - 1)?;
        match solve(dmat, &v)? {
            None => Ok(None),
            Some(x) => Ok(Some(Polynomial::from_vector(&below.basis, &x))),
        }
    }

    /// Product of two classes, reduced back to class coordinates.
    pub fn multiply_classes(&self, a: &ClassCoords, b: &ClassCoords) -> Result<ClassCoords> {
        let pa = self.class_polynomial(a)?;
        let pb = self.class_polynomial(b)?;
        let prod = pa.mul(self.generators(), &pb)?;
        if prod.is_zero() {
            let degree = a.degree + b.degree;
            let betti = if degree <= self.data.top {
                self.betti(degree)
            } else {
                0
            };
            return Ok(ClassCoords {
                degree,
                coords: vec![scalar::zero(); betti],
            });
        }
        self.reduce_to_class(&prod)
    }

    /// Largest `k` with a nonzero `k`-fold product of positive-degree
    /// classes, computed by iterated subspace products within the window
    /// `degree <= formal_bound`.
    pub fn cup_length(&self, formal_bound: u32) -> Result<(u32, Option<Polynomial>)> {
        let bound = formal_bound.min(self.data.top);
        let mut plus: Vec<ClassCoords> = Vec::new();
        for k in 1..=bound {
            for i in 0..self.betti(k) {
                plus.push(ClassCoords::unit(k, self.betti(k), i));
            }
        }
        if plus.is_empty() {
            return Ok((0, None));
        }

        let mut level: BTreeMap<u32, RowSpace> = BTreeMap::new();
        for cls in &plus {
            level
                .entry(cls.degree)
                .or_insert_with(|| RowSpace::new(self.betti(cls.degree)))
                .insert(&cls.coords);
        }
        let mut length = 1u32;
        let mut witness = self.class_polynomial(&plus[0])?;
        loop {
            let mut next: BTreeMap<u32, RowSpace> = BTreeMap::new();
            let mut next_witness: Option<Polynomial> = None;
            for (&deg, space) in &level {
                for row in space.rows() {
                    let cls = ClassCoords {
                        degree: deg,
                        coords: row.clone(),
                    };
                    for gen_cls in &plus {
                        let target = deg + gen_cls.degree;
                        if target > bound {
                            continue;
                        }
                        let prod = self.multiply_classes(&cls, gen_cls)?;
                        if prod.is_zero() {
                            continue;
                        }
                        let entry = next
                            .entry(target)
                            .or_insert_with(|| RowSpace::new(self.betti(target)));
                        if entry.insert(&prod.coords) && next_witness.is_none() {
                            next_witness = Some(self.class_polynomial(&prod)?);
                        }
                    }
                }
            }
            if next.values().all(|s| s.rank() == 0) {
                return Ok((length, Some(witness)));
            }
            length += 1;
            if let Some(w) = next_witness {
                witness = w;
            }
            level = next;
        }
    }

    /// Matrix of the linear projection from degree-`k` cochain coordinates
    /// onto class coordinates (rows = classes, cols = monomial basis).
    pub fn class_projection_matrix(&self, k: u32) -> Result<QMatrix> {
        let slot = self.data.slot(k)?;
        let dim = slot.basis.len();
        let betti = slot.betti();
        let mut m = QMatrix::zeros(betti, dim);
        for j in 0..dim {
            let mut e = vec![scalar::zero(); dim];
            e[j] = scalar::one();
            let coords = self.data.class_coords_lenient(k, &e)?;
            for (i, c) in coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    pub(crate) fn data(&self) -> &ComplexData {
        &self.data
    }
}

/// Solve `d(sigma) = p` in a cdga without a precomputed cohomology ring,
/// materializing only the two bases involved.
pub fn d_preimage(c: &Cdga, p: &Polynomial) -> Result<Option<Polynomial>> {
    let Some(degree) = p.homogeneous_degree()? else {
        return Ok(Some(Polynomial::zero()));
    };
    if degree == 0 {
        return Ok(if p.is_zero() {
            Some(Polynomial::zero())
        } else {
            None
        });
    }
    let gens = c.generators();
    let below = monomial_basis(gens, degree - 1, None, None);
    let here = monomial_basis(gens, degree, None, None);
    let index = basis_index(&here);
    let mut dmat = QMatrix::zeros(here.len(), below.len());
    for (j, mono) in below.iter().enumerate() {
        let image = c.apply_d(&Polynomial::from_term(scalar::one(), mono.clone()))?;
        for (im, coeff) in image.terms() {
            let &row = index.get(im).ok_or(Error::NotInBasis)?;
            dmat.set(row, j, coeff.clone());
        }
    }
    let rhs = p.to_vector(&index, here.len())?;
    match solve(&dmat, &rhs)? {
        None => Ok(None),
        Some(x) => Ok(Some(Polynomial::from_vector(&below, &x))),
    }
}

/// Verified Poincare duality data: formal dimension, top class, and the
/// cup-product pairing matrices into the top degree.
#[derive(Debug, Clone)]
pub struct PoincareStructure {
    pub formal_dim: u32,
    pub top_rep: Polynomial,
    pub pairings: Vec<QMatrix>,
}

/// Poincare duality either verifies or fails at a witnessed degree.
#[derive(Debug, Clone)]
pub enum PdOutcome {
    Valid(PoincareStructure),
    Failed { degree: u32, reason: String },
}

impl PdOutcome {
    pub fn ok(self) -> Result<PoincareStructure> {
        match self {
            PdOutcome::Valid(ps) => Ok(ps),
            PdOutcome::Failed { degree, reason } => Err(Error::Precondition(format!(
                "Poincare duality fails in degree {degree}: {reason}"
            ))),
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, PdOutcome::Valid(_))
    }
}

/// Check Poincare duality with formal dimension `m` against everything the
/// ring has computed: `dim H^m = 1`, vanishing above `m` up to the computed
/// bound, matching ranks, and nondegenerate pairings.
pub fn poincare_structure(h: &CohomologyRing, m: u32) -> Result<PdOutcome> {
    if m > h.max_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            max: h.max_degree(),
        });
    }
    if h.betti(m) != 1 {
        return Ok(PdOutcome::Failed {
            degree: m,
            reason: format!("dim H^{m} = {} != 1", h.betti(m)),
        });
    }
    for k in m + 1..=h.max_degree() {
        if h.betti(k) != 0 {
            return Ok(PdOutcome::Failed {
                degree: k,
                reason: format!("H^{k} != 0 above the formal dimension"),
            });
        }
    }
    for k in 0..=m {
        if h.betti(k) != h.betti(m - k) {
            return Ok(PdOutcome::Failed {
                degree: k,
                reason: format!(
                    "dim H^{k} = {} != {} = dim H^{}",
                    h.betti(k),
                    h.betti(m - k),
                    m - k
                ),
            });
        }
    }

    let mut pairings = Vec::with_capacity(m as usize + 1);
    for k in 0..=m {
        let rows = h.betti(k);
        let cols = h.betti(m - k);
        let mut mat = QMatrix::zeros(rows, cols);
        for i in 0..rows {
            let a = ClassCoords::unit(k, rows, i);
            for j in 0..cols {
                let b = ClassCoords::unit(m - k, cols, j);
                let prod = h.multiply_classes(&a, &b)?;
                let entry = prod.coords.first().cloned().unwrap_or_else(scalar::zero);
                mat.set(i, j, entry);
            }
        }
        if mat.rank() != rows {
            return Ok(PdOutcome::Failed {
                degree: k,
                reason: format!("pairing H^{k} x H^{} is degenerate", m - k),
            });
        }
        pairings.push(mat);
    }

    Ok(PdOutcome::Valid(PoincareStructure {
        formal_dim: m,
        top_rep: h.representative(m, 0)?,
        pairings,
    }))
}

/// Signature of the middle-degree intersection form, zero by definition when
/// the formal dimension is not a positive multiple of 4.
pub fn signature(ps: &PoincareStructure) -> Result<i64> {
    if ps.formal_dim == 0 || !ps.formal_dim.is_multiple_of(4) {
        return Ok(0);
    }
    let mid = &ps.pairings[(ps.formal_dim / 2) as usize];
    let inertia = inertia_of_symmetric(mid)?;
    if inertia.zero != 0 {
        return Err(Error::Precondition(
            "middle pairing is degenerate on a verified Poincare structure".into(),
        ));
    }
    Ok(inertia.signature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generators;

    fn torus(n: usize) -> Cdga {
        let gens = Generators::new((1..=n).map(|i| (format!("v{i}"), 1)).collect()).unwrap();
        Cdga::new(gens, vec![]).unwrap()
    }

    fn heis3() -> Cdga {
        let gens = Generators::new(vec![("v1", 1), ("v2", 1), ("v3", 1)]).unwrap();
        let v1v2 = Polynomial::generator(&gens, 0)
            .unwrap()
            .mul(&gens, &Polynomial::generator(&gens, 1).unwrap())
            .unwrap();
        Cdga::new(gens, vec![(2, v1v2)]).unwrap()
    }

    fn kt() -> Cdga {
        let gens = Generators::new(vec![("u1", 1), ("u2", 1), ("u3", 1), ("u4", 1)]).unwrap();
        let u1u2 = Polynomial::generator(&gens, 0)
            .unwrap()
            .mul(&gens, &Polynomial::generator(&gens, 1).unwrap())
            .unwrap();
        Cdga::new(gens, vec![(2, u1u2)]).unwrap()
    }

    #[test]
    fn torus_betti() {
        let h = CohomologyRing::compute(&torus(2), 2).unwrap();
        assert_eq!(h.betti_vector(), vec![1, 2, 1]);
    }

    #[test]
    fn heisenberg_betti() {
        let h = CohomologyRing::compute(&heis3(), 3).unwrap();
        assert_eq!(h.betti_vector(), vec![1, 2, 2, 1]);
        assert_eq!(h.euler_characteristic(), 0);
    }

    #[test]
    fn kt_betti() {
        let h = CohomologyRing::compute(&kt(), 4).unwrap();
        assert_eq!(h.betti_vector(), vec![1, 3, 4, 3, 1]);
    }

    #[test]
    fn heisenberg_coboundary_witness() {
        let c = heis3();
        let h = CohomologyRing::compute(&c, 3).unwrap();
        let g = c.generators();
        let v1v2 = Polynomial::generator(g, 0)
            .unwrap()
            .mul(g, &Polynomial::generator(g, 1).unwrap())
            .unwrap();
        let sigma = h.coboundary_witness(&v1v2).unwrap().unwrap();
        assert_eq!(c.apply_d(&sigma).unwrap(), v1v2);
        let v1v3 = Polynomial::generator(g, 0)
            .unwrap()
            .mul(g, &Polynomial::generator(g, 2).unwrap())
            .unwrap();
        assert!(h.coboundary_witness(&v1v3).unwrap().is_none());
        assert!(!h.reduce_to_class(&v1v3).unwrap().is_zero());
    }

    #[test]
    fn cup_length_examples() {
        let h = CohomologyRing::compute(&torus(3), 3).unwrap();
        assert_eq!(h.cup_length(3).unwrap().0, 3);

        let h = CohomologyRing::compute(&heis3(), 3).unwrap();
        assert_eq!(h.cup_length(3).unwrap().0, 2);

        let gens = Generators::new(vec![("x", 2), ("y", 3)]).unwrap();
        let x2 = Polynomial::generator(&gens, 0)
            .unwrap()
            .pow(&gens, 2)
            .unwrap();
        let s2 = Cdga::new(gens, vec![(1, x2)]).unwrap();
        let h = CohomologyRing::compute(&s2, 2).unwrap();
        assert_eq!(h.cup_length(2).unwrap().0, 1);
    }

    #[test]
    fn kt_poincare_and_signature() {
        let h = CohomologyRing::compute(&kt(), 4).unwrap();
        let ps = poincare_structure(&h, 4).unwrap().ok().unwrap();
        assert_eq!(ps.formal_dim, 4);
        assert_eq!(signature(&ps).unwrap(), 0);
    }

    #[test]
    fn cp2_signature_is_one() {
        let gens = Generators::new(vec![("x", 2), ("y", 5)]).unwrap();
        let x3 = Polynomial::generator(&gens, 0)
            .unwrap()
            .pow(&gens, 3)
            .unwrap();
        let cp2 = Cdga::new(gens, vec![(1, x3)]).unwrap();
        let h = CohomologyRing::compute(&cp2, 4).unwrap();
        assert_eq!(h.betti_vector(), vec![1, 0, 1, 0, 1]);
        let ps = poincare_structure(&h, 4).unwrap().ok().unwrap();
        assert_eq!(signature(&ps).unwrap(), 1);
    }

    #[test]
    fn free_even_algebra_fails_pd_above() {
        let gens = Generators::new(vec![("v", 2)]).unwrap();
        let c = Cdga::new(gens, vec![]).unwrap();
        let h = CohomologyRing::compute(&c, 4).unwrap();
        match poincare_structure(&h, 2).unwrap() {
            PdOutcome::Failed { degree, .. } => assert_eq!(degree, 4),
            PdOutcome::Valid(_) => panic!("expected failure"),
        }
    }

    #[test]
    fn empty_algebra_has_point_cohomology() {
        let c = Cdga::new(
            Generators::new(Vec::<(String, u32)>::new()).unwrap(),
            vec![],
        )
        .unwrap();
        let h = CohomologyRing::compute(&c, 3).unwrap();
        assert_eq!(h.betti_vector(), vec![1, 0, 0, 0]);
        let ps = poincare_structure(&h, 0).unwrap().ok().unwrap();
        assert_eq!(signature(&ps).unwrap(), 0);
    }
}

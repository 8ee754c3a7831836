//! Word-length filtration and the Toomer invariant.
//!
//! `rho_s` projects a free cdga onto the quotient by words of length > s.
//! Word length never decreases under a Sullivan differential, so the
//! quotient inherits a differential and `rho_s` is a cochain map. The
//! invariant `e0` is the smallest `s` making `H(rho_s)` injective; on a
//! Poincare duality model it is also the largest word length achievable by a
//! cocycle representative of the top class.

use crate::cdga::Cdga;
use crate::cohomology::{
    build_complex, ClassCoords, CohomologyRing, ComplexData, PoincareStructure,
};
use crate::error::{Error, Result};
use crate::generators::Generators;
use crate::linalg::{solve, QMatrix};
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;
use crate::scalar::{self, Scalar};

/// The quotient complex `Lambda V / Lambda^{>s} V` through a degree bound.
#[derive(Debug, Clone)]
pub struct TruncatedModel {
    cutoff: u32,
    gens: Generators,
    data: ComplexData,
}

/// Build the truncated quotient: bases are monomials of word length <= s,
/// the differential applies `d` and discards longer words.
pub fn truncate_model(c: &Cdga, s: u32, max_degree: u32) -> Result<TruncatedModel> {
    c.require_verified()?;
    let model = c.clone();
    let d = move |m: &Monomial| {
        let image = model.apply_d(&Polynomial::from_term(scalar::one(), m.clone()))?;
        Ok(image.truncate_word_length(s))
    };
    let data = build_complex(c.generators(), &d, max_degree, Some(s))?;
    Ok(TruncatedModel {
        cutoff: s,
        gens: c.generators().clone(),
        data,
    })
}

impl TruncatedModel {
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn max_degree(&self) -> u32 {
        self.data.top
    }

    pub fn betti(&self, k: u32) -> usize {
        self.data.betti(k)
    }

    /// Apply the quotient differential to an already-truncated polynomial.
    pub fn apply_d_bar(&self, c: &Cdga, p: &Polynomial) -> Result<Polynomial> {
        Ok(c.apply_d(p)?.truncate_word_length(self.cutoff))
    }

    /// `rho_s` on cochains.
    pub fn project(&self, p: &Polynomial) -> Polynomial {
        p.truncate_word_length(self.cutoff)
    }

    /// Class coordinates of a truncated cocycle in the quotient cohomology.
    pub fn class_coords(&self, degree: u32, p: &Polynomial) -> Result<Vec<Scalar>> {
        let slot = self.data.slot(degree)?;
        let v = p.to_vector(&slot.index, slot.basis.len())?;
        if !self.data.is_cocycle_vec(degree, &v)? {
            return Err(Error::NotACocycle {
                dp: format!("projection of degree {degree} element"),
            });
        }
        self.data.class_coords(degree, &v)
    }

    /// Matrix of `H^k(rho_s)`: columns are images of the full-model class
    /// representatives in the quotient class basis.
    pub fn induced_map(&self, h: &CohomologyRing, k: u32) -> Result<QMatrix> {
        let cols = h.betti(k);
        let rows = self.betti(k);
        let mut m = QMatrix::zeros(rows, cols);
        for j in 0..cols {
            let rep = h.representative(k, j)?;
            let coords = self.class_coords(k, &self.project(&rep))?;
            for (i, c) in coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    /// Is `H^k(rho_s)` injective for every `k <= bound`?
    pub fn injective_through(&self, h: &CohomologyRing, bound: u32) -> Result<bool> {
        for k in 0..=bound {
            let m = self.induced_map(h, k)?;
            if m.rank() != h.betti(k) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }
}

/// How an `e0` value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E0Method {
    InjectivityScan,
    TopClassRepresentative,
}

/// Result of an `e0` computation.
#[derive(Debug, Clone)]
pub struct ToomerReport {
    pub e0: u32,
    pub method: E0Method,
    /// True when the caller certified that all nonzero cohomology lies
    /// within the computed degree window (verified Poincare duality or an
    /// asserted bound); otherwise the value is only a lower bound.
    pub certified: bool,
    /// False when the input is not a minimal Sullivan presentation; the
    /// word-length filtration is then presentation dependent.
    pub minimal_presentation: bool,
    /// For the scan: a class killed by `rho_{e0 - 1}`.
    pub killed_witness: Option<Polynomial>,
    /// For the top-class method: the representative of maximal word length.
    pub representative: Option<Polynomial>,
}

/// `e0` of a single class: the smallest `s` with `rho_s^*(cls) != 0`.
pub fn e0_of_class(c: &Cdga, h: &CohomologyRing, cls: &ClassCoords) -> Result<u32> {
    if cls.is_zero() {
        return Err(Error::Precondition(
            "e0 of the zero class is undefined".into(),
        ));
    }
    let rep = h.class_polynomial(cls)?;
    for s in 0..=cls.degree {
        let trunc = truncate_model(c, s, cls.degree)?;
        let coords = trunc.class_coords(cls.degree, &trunc.project(&rep))?;
        if coords.iter().any(|x| !num_traits::Zero::is_zero(x)) {
            return Ok(s);
        }
    }
    // unreachable: rho_k is the identity in degrees <= k
    Err(Error::Precondition(
        "projection scan exhausted without detecting the class".into(),
    ))
}

/// `e0` of the model by the injectivity scan: smallest `s` such that
/// `H(rho_s)` is injective in every degree up to the computed bound.
/// Injectivity is monotone in `s` (the projections factor through each
/// other), so the first injective level is the answer.
pub fn e0_of_space(
    c: &Cdga,
    h: &CohomologyRing,
    cohomology_exhausted: bool,
) -> Result<ToomerReport> {
    let bound = h.max_degree();
    let minimal_presentation = c.validate()?.is_minimal;
    for s in 0..=bound {
        let trunc = truncate_model(c, s, bound)?;
        if trunc.injective_through(h, bound)? {
            let killed_witness = if s == 0 {
                None
            } else {
                kernel_class_witness(c, h, s - 1, bound)?
            };
            return Ok(ToomerReport {
                e0: s,
                method: E0Method::InjectivityScan,
                certified: cohomology_exhausted,
                minimal_presentation,
                killed_witness,
                representative: None,
            });
        }
    }
    Err(Error::Precondition(format!(
        "H(rho_s) not injective for any s <= {bound}; cohomology not exhausted by the window"
    )))
}

/// A nonzero class killed by `rho_s`, as a cocycle polynomial.
fn kernel_class_witness(
    c: &Cdga,
    h: &CohomologyRing,
    s: u32,
    bound: u32,
) -> Result<Option<Polynomial>> {
    let trunc = truncate_model(c, s, bound)?;
    for k in 0..=bound {
        let m = trunc.induced_map(h, k)?;
        let kernel = crate::linalg::kernel_basis(&m);
        if let Some(v) = kernel.first() {
            let cls = ClassCoords {
                degree: k,
                coords: v.clone(),
            };
            return Ok(Some(h.class_polynomial(&cls)?));
        }
    }
    Ok(None)
}

/// `e0` via the top class of a verified Poincare duality model: the largest
/// `k` such that `top + d(sigma)` can be supported on words of length >= k.
/// Feasibility in `k` is monotone, so the scan from above stops at the
/// maximum; the found representative is returned as a witness.
pub fn e0_top_class(c: &Cdga, h: &CohomologyRing, ps: &PoincareStructure) -> Result<ToomerReport> {
    c.require_verified()?;
    let m = ps.formal_dim;
    let minimal_presentation = c.validate()?.is_minimal;
    let data = h.data();
    let slot = data.slot(m)?;
    let rep_vec = ps.top_rep.to_vector(&slot.index, slot.basis.len())?;
    let dmat = if m == 0 {
        QMatrix::zeros(slot.basis.len(), 0)
    } else {
        data.dmats[(m - 1) as usize].clone()
    };

    for k in (0..=m).rev() {
        // constrain every coordinate on a word shorter than k to vanish
        let short_rows: Vec<usize> = slot
            .basis
            .iter()
            .enumerate()
            .filter(|(_, mono)| mono.word_length() < k)
            .map(|(i, _)| i)
            .collect();
        let solution = if short_rows.is_empty() {
            Some(vec![scalar::zero(); dmat.ncols()])
        } else {
            let mut sub = QMatrix::zeros(short_rows.len(), dmat.ncols());
            let mut rhs = Vec::with_capacity(short_rows.len());
            for (r, &row) in short_rows.iter().enumerate() {
                for col in 0..dmat.ncols() {
                    sub.set(r, col, dmat.get(row, col).clone());
                }
                rhs.push(-rep_vec[row].clone());
            }
            solve(&sub, &rhs)?
        };
        if let Some(y) = solution {
            let correction = dmat.apply(&y)?;
            let mut vec = rep_vec.clone();
            for (v, c) in vec.iter_mut().zip(correction.iter()) {
                *v += c;
            }
            let representative = Polynomial::from_vector(&slot.basis, &vec);
            debug_assert!(representative.min_word_length().is_none_or(|wl| wl >= k));
            return Ok(ToomerReport {
                e0: k,
                method: E0Method::TopClassRepresentative,
                certified: true,
                minimal_presentation,
                killed_witness: None,
                representative: Some(representative),
            });
        }
    }
    Err(Error::Precondition(
        "top class representative search failed at every level (degenerate top class)".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::poincare_structure;

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

    fn s2() -> Cdga {
        let gens = Generators::new(vec![("x", 2), ("y", 3)]).unwrap();
        let x2 = Polynomial::generator(&gens, 0)
            .unwrap()
            .pow(&gens, 2)
            .unwrap();
        Cdga::new(gens, vec![(1, x2)]).unwrap()
    }

    #[test]
    fn truncation_of_torus_is_free() {
        let c = torus(2);
        let t = truncate_model(&c, 1, 2).unwrap();
        assert_eq!(t.betti(0), 1);
        assert_eq!(t.betti(1), 2);
        // v1v2 truncated away
        assert_eq!(t.betti(2), 0);
    }

    #[test]
    fn heisenberg_truncation_kills_the_relation() {
        let c = heis3();
        let g = c.generators();
        let v3 = Polynomial::generator(g, 2).unwrap();
        let t1 = truncate_model(&c, 1, 3).unwrap();
        // d-bar v3 = 0 at cutoff 1: v1v2 is truncated
        assert!(t1.apply_d_bar(&c, &v3).unwrap().is_zero());
        let t2 = truncate_model(&c, 2, 3).unwrap();
        assert!(!t2.apply_d_bar(&c, &v3).unwrap().is_zero());
    }

    #[test]
    fn s2_top_class_e0_is_one() {
        let c = s2();
        let h = CohomologyRing::compute(&c, 2).unwrap();
        let cls = h
            .reduce_to_class(&Polynomial::generator(c.generators(), 0).unwrap())
            .unwrap();
        assert_eq!(e0_of_class(&c, &h, &cls).unwrap(), 1);
    }

    #[test]
    fn heisenberg_top_class_e0_is_three() {
        let c = heis3();
        let h = CohomologyRing::compute(&c, 3).unwrap();
        let g = c.generators();
        let top = Polynomial::generator(g, 0)
            .unwrap()
            .mul(g, &Polynomial::generator(g, 1).unwrap())
            .unwrap()
            .mul(g, &Polynomial::generator(g, 2).unwrap())
            .unwrap();
        let cls = h.reduce_to_class(&top).unwrap();
        assert_eq!(e0_of_class(&c, &h, &cls).unwrap(), 3);
    }

    #[test]
    fn unit_class_has_e0_zero() {
        let c = torus(2);
        let h = CohomologyRing::compute(&c, 2).unwrap();
        let cls = h.reduce_to_class(&Polynomial::one()).unwrap();
        assert_eq!(e0_of_class(&c, &h, &cls).unwrap(), 0);
    }

    #[test]
    fn e0_of_tori_is_dimension() {
        for n in 1..=4 {
            let c = torus(n);
            let h = CohomologyRing::compute(&c, n as u32).unwrap();
            let report = e0_of_space(&c, &h, true).unwrap();
            assert_eq!(report.e0, n as u32);
            assert!(report.certified);
        }
    }

    #[test]
    fn e0_of_s2_is_one_by_both_methods() {
        let c = s2();
        let h = CohomologyRing::compute(&c, 2).unwrap();
        let scan = e0_of_space(&c, &h, true).unwrap();
        assert_eq!(scan.e0, 1);
        let ps = poincare_structure(&h, 2).unwrap().ok().unwrap();
        let top = e0_top_class(&c, &h, &ps).unwrap();
        assert_eq!(top.e0, 1);
        // x^2 is exact, so no length-2 representative of [x] exists
        let rep = top.representative.unwrap();
        assert_eq!(rep.min_word_length(), Some(1));
    }

    #[test]
    fn heisenberg_e0_three_with_witness() {
        let c = heis3();
        let h = CohomologyRing::compute(&c, 3).unwrap();
        let report = e0_of_space(&c, &h, true).unwrap();
        assert_eq!(report.e0, 3);
        let witness = report.killed_witness.unwrap();
        // the witness is a nonzero class killed by rho_2
        assert!(!h.reduce_to_class(&witness).unwrap().is_zero());
        assert!(
            witness.min_word_length().unwrap() >= 3 || {
                let t = truncate_model(&c, 2, 3).unwrap();
                t.class_coords(3, &t.project(&witness))
                    .map(|v| v.iter().all(num_traits::Zero::is_zero))
                    .unwrap_or(true)
            }
        );
    }

    #[test]
    fn injectivity_is_monotone_in_s() {
        let c = heis3();
        let h = CohomologyRing::compute(&c, 3).unwrap();
        let profile: Vec<bool> = (0..=3)
            .map(|s| {
                truncate_model(&c, s, 3)
                    .unwrap()
                    .injective_through(&h, 3)
                    .unwrap()
            })
            .collect();
        for w in profile.windows(2) {
            assert!(!w[0] || w[1], "injectivity must be monotone: {profile:?}");
        }
    }
}

//! Sparse polynomials: exact-rational linear combinations of normalized
//! monomials. The universal value type of the engine.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::generators::{GenId, Generators};
use crate::monomial::{normalize_product, Monomial, Sign};
use crate::scalar::{self, Scalar};

/// Homogeneity of a polynomial, as a queryable property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial is homogeneous of every degree.
    Zero,
    Degree(u32),
    Mixed,
}

/// A graded-commutative polynomial. Terms are kept in canonical monomial
/// order; zero coefficients are never stored, so equality of term maps is
/// equality of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Polynomial::from_term(scalar::one(), Monomial::unit())
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::from_term(c, Monomial::unit())
    }

    pub fn from_term(coeff: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        Polynomial { terms }
    }

    pub fn generator(gens: &Generators, id: GenId) -> Result<Self> {
        Ok(Polynomial::from_term(
            scalar::one(),
            Monomial::generator(gens, id)?,
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn add_term(&mut self, coeff: Scalar, m: Monomial) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scaled(&scalar::int(-1))
    }

    pub fn scaled(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Graded-commutative product, the bilinear extension of monomial
    /// normalization.
    pub fn mul(&self, gens: &Generators, other: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let mut factors = ma.factors().to_vec();
                factors.extend_from_slice(mb.factors());
                let (sign, m) = normalize_product(gens, &factors)?;
                match sign {
                    Sign::Zero => {}
                    Sign::Plus => out.add_term(ca * cb, m),
                    Sign::Minus => out.add_term(-(ca * cb), m),
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, gens: &Generators, k: u32) -> Result<Polynomial> {
        let mut out = Polynomial::one();
        for _ in 0..k {
            out = out.mul(gens, self)?;
        }
        Ok(out)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        match degrees.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degrees.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// Degree of a homogeneous polynomial; `Err` on mixed terms, `None` on zero.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        match self.homogeneity() {
            Homogeneity::Zero => Ok(None),
            Homogeneity::Degree(d) => Ok(Some(d)),
            Homogeneity::Mixed => Err(Error::NotHomogeneous),
        }
    }

    pub fn min_word_length(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.word_length()).min()
    }

    pub fn max_word_length(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.word_length()).max()
    }

    /// Drop every term of word length greater than `s` (the projection onto
    /// the word-length quotient).
    pub fn truncate_word_length(&self, s: u32) -> Polynomial {
        self.filter_terms(|m| m.word_length() <= s)
    }

    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reindex generators through `map`; `None` sends the generator to zero,
    /// killing every term that contains it. The map must be strictly
    /// increasing on kept ids so normal forms and signs are preserved.
    pub fn map_gen_ids(
        &self,
        target: &Generators,
        map: impl Fn(GenId) -> Option<GenId>,
    ) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        'term: for (m, c) in self.terms() {
            let mut factors = Vec::with_capacity(m.factors().len());
            let mut last: Option<GenId> = None;
            for &(id, exp) in m.factors() {
                match map(id) {
                    None => continue 'term,
                    Some(new_id) => {
                        if let Some(prev) = last {
                            if prev >= new_id {
                                return Err(Error::Dimension(
                                    "generator map is not strictly increasing".into(),
                                ));
                            }
                        }
                        last = Some(new_id);
                        factors.push((new_id, exp));
                    }
                }
            }
            out.add_term(c.clone(), Monomial::from_sorted_factors(target, factors)?);
        }
        Ok(out)
    }

    /// Relabel generators through the bijection `new_of_old`, re-normalizing
    /// each monomial in the target declaration order. Koszul signs from the
    /// reordering are accumulated into the coefficients.
    pub fn permute_gens(&self, target: &Generators, new_of_old: &[GenId]) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            let factors: Vec<(GenId, u32)> = m
                .factors()
                .iter()
                .map(|&(id, e)| (new_of_old[id], e))
                .collect();
            let (sign, nm) = normalize_product(target, &factors)?;
            match sign {
                Sign::Zero => {}
                Sign::Plus => out.add_term(c.clone(), nm),
                Sign::Minus => out.add_term(-c.clone(), nm),
            }
        }
        Ok(out)
    }

    /// Coordinates with respect to an ordered monomial basis.
    pub fn to_vector(&self, index: &BTreeMap<Monomial, usize>, len: usize) -> Result<Vec<Scalar>> {
        let mut v = vec![scalar::zero(); len];
        for (m, c) in self.terms() {
            match index.get(m) {
                Some(&i) => v[i] = c.clone(),
                None => return Err(Error::NotInBasis),
            }
        }
        Ok(v)
    }

    pub fn from_vector(basis: &[Monomial], coords: &[Scalar]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in basis.iter().zip(coords.iter()) {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    /// Render against a generator set, in canonical monomial order with
    /// explicit signs: e.g. `v2^2 - 2*x*w1 + 1/2*y`.
    pub fn display<'a>(&'a self, gens: &'a Generators) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, gens }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    gens: &'a Generators,
}

fn write_monomial(f: &mut fmt::Formatter<'_>, gens: &Generators, m: &Monomial) -> fmt::Result {
    for (k, &(id, exp)) in m.factors().iter().enumerate() {
        if k > 0 {
            write!(f, "*")?;
        }
        write!(f, "{}", gens.name(id))?;
        if exp > 1 {
            write!(f, "^{exp}")?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms().enumerate() {
            let abs = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if scalar::is_one(&abs) {
                write_monomial(f, self.gens, m)?;
            } else {
                write!(f, "{abs}*")?;
                write_monomial(f, self.gens, m)?;
            }
        }
        Ok(())
    }
}

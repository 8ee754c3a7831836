//! Monomials in graded-commutative normal form.
//!
//! A monomial is a product of generator powers with strictly increasing
//! generator ids. Odd-degree generators square to zero, so their exponent is
//! always exactly 1. Normalization of an arbitrary factor sequence sorts it
//! into declaration order and accumulates the Koszul sign of the odd-odd
//! transpositions performed by the (stable) sort.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::generators::{GenId, Generators};

/// A normalized monomial. `degree` is cached at construction time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(GenId, u32)>,
    degree: u32,
}

impl Monomial {
    /// The empty monomial `1`.
    pub fn unit() -> Self {
        Monomial {
            factors: Vec::new(),
            degree: 0,
        }
    }

    /// The monomial consisting of a single generator.
    pub fn generator(gens: &Generators, id: GenId) -> Result<Self> {
        gens.check_id(id)?;
        Ok(Monomial {
            factors: vec![(id, 1)],
            degree: gens.degree(id),
        })
    }

    /// Build from factors that are already sorted by strictly increasing id.
    /// Rejects unsorted input, odd squares, and cap violations.
    pub fn from_sorted_factors(gens: &Generators, factors: Vec<(GenId, u32)>) -> Result<Self> {
        let cap = gens.degree_cap();
        let mut degree: u64 = 0;
        for (k, &(id, exp)) in factors.iter().enumerate() {
            gens.check_id(id)?;
            if exp == 0 || (k > 0 && factors[k - 1].0 >= id) {
                return Err(Error::Dimension(format!(
                    "factor list not in strictly increasing order at generator {id}"
                )));
            }
            if gens.is_odd(id) && exp > 1 {
                return Err(Error::Dimension(format!(
                    "odd generator `{}` with exponent {exp}",
                    gens.name(id)
                )));
            }
            if exp > cap {
                return Err(Error::DegreeCapExceeded {
                    cap,
                    requested: exp,
                });
            }
            degree += exp as u64 * gens.degree(id) as u64;
        }
        if degree > cap as u64 {
            return Err(Error::DegreeCapExceeded {
                cap,
                requested: degree.min(u32::MAX as u64) as u32,
            });
        }
        Ok(Monomial {
            factors,
            degree: degree as u32,
        })
    }

    pub fn factors(&self) -> &[(GenId, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Word length: total number of generator letters, counted with exponents.
    pub fn word_length(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Word length counting only generators with `id < split`. Used to slice
    /// relative-model differentials by base word length.
    pub fn word_length_below(&self, split: GenId) -> u32 {
        self.factors
            .iter()
            .filter(|&&(id, _)| id < split)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, id: GenId) -> u32 {
        self.factors
            .iter()
            .find(|&&(g, _)| g == id)
            .map_or(0, |&(_, e)| e)
    }

    /// True when every generator appearing in the monomial satisfies `pred`.
    pub fn uses_only(&self, pred: impl Fn(GenId) -> bool) -> bool {
        self.factors.iter().all(|&(id, _)| pred(id))
    }
}

/// Canonical monomial order: by degree, then lexicographically on the factor
/// list with ids ascending and, at equal ids, higher exponents first. For
/// generators of equal degree this lists e.g. `v1*v2 < v1*v3 < v2*v3` and
/// `a^2 < a*b < b^2`, matching graded-lex on exponent vectors.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (&(ida, ea), &(idb, eb)) in self.factors.iter().zip(other.factors.iter()) {
                match ida.cmp(&idb).then(eb.cmp(&ea)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of a normalization: products of odd generators may pick up a sign or
/// vanish outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Zero,
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Zero => 0,
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Sort an arbitrary factor sequence into normal form, accumulating the
/// Koszul sign from odd-odd transpositions. Returns `(Zero, 1)` whenever an
/// odd generator ends up with exponent >= 2.
pub fn normalize_product(gens: &Generators, factors: &[(GenId, u32)]) -> Result<(Sign, Monomial)> {
    let mut fs: Vec<(GenId, u32)> = Vec::with_capacity(factors.len());
    for &(id, exp) in factors {
        gens.check_id(id)?;
        if exp == 0 {
            continue;
        }
        if gens.is_odd(id) && exp > 1 {
            return Ok((Sign::Zero, Monomial::unit()));
        }
        fs.push((id, exp));
    }

    // Stable insertion sort by id; a swap of two factors of odd total degree
    // flips the sign.
    let mut negative = false;
    for i in 1..fs.len() {
        let mut j = i;
        while j > 0 && fs[j - 1].0 > fs[j].0 {
            let p = (fs[j - 1].1 as u64 * gens.degree(fs[j - 1].0) as u64) % 2;
            let q = (fs[j].1 as u64 * gens.degree(fs[j].0) as u64) % 2;
            if p == 1 && q == 1 {
                negative = !negative;
            }
            fs.swap(j - 1, j);
            j -= 1;
        }
    }

    // Merge equal ids; an odd generator repeated means the product is zero.
    let mut merged: Vec<(GenId, u32)> = Vec::with_capacity(fs.len());
    for (id, exp) in fs {
        match merged.last_mut() {
            Some(&mut (last, ref mut e)) if last == id => {
                if gens.is_odd(id) {
                    return Ok((Sign::Zero, Monomial::unit()));
                }
                *e = e.checked_add(exp).ok_or(Error::DegreeCapExceeded {
                    cap: gens.degree_cap(),
                    requested: u32::MAX,
                })?;
            }
            _ => merged.push((id, exp)),
        }
    }

    let m = Monomial::from_sorted_factors(gens, merged)?;
    Ok((if negative { Sign::Minus } else { Sign::Plus }, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens3() -> Generators {
        // x1 odd(1), v2 even(2), y3 odd(3), x3 odd(3)
        Generators::new(vec![("x1", 1), ("v2", 2), ("y3", 3), ("x3", 3)]).unwrap()
    }

    #[test]
    fn odd_odd_transposition_flips_sign() {
        let g = gens3();
        // y3 then x3, both odd: one transposition
        let (s, m) = normalize_product(&g, &[(2, 1), (3, 1)]).unwrap();
        assert_eq!(s, Sign::Plus);
        assert_eq!(m.factors(), &[(2, 1), (3, 1)]);
        let (s, m) = normalize_product(&g, &[(3, 1), (2, 1)]).unwrap();
        assert_eq!(s, Sign::Minus);
        assert_eq!(m.factors(), &[(2, 1), (3, 1)]);
    }

    #[test]
    fn even_factor_commutes_freely() {
        let g = gens3();
        let (s, m) = normalize_product(&g, &[(1, 1), (0, 1)]).unwrap();
        assert_eq!(s, Sign::Plus);
        assert_eq!(m.factors(), &[(0, 1), (1, 1)]);
    }

    #[test]
    fn odd_square_vanishes() {
        let g = gens3();
        let (s, m) = normalize_product(&g, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(s, Sign::Zero);
        assert!(m.is_unit());
        let (s, _) = normalize_product(&g, &[(0, 2)]).unwrap();
        assert_eq!(s, Sign::Zero);
    }

    #[test]
    fn normalization_is_idempotent() {
        let g = gens3();
        let (s, m) = normalize_product(&g, &[(0, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(s, Sign::Plus);
        let (s2, m2) = normalize_product(&g, m.factors()).unwrap();
        assert_eq!(s2, Sign::Plus);
        assert_eq!(m, m2);
    }

    #[test]
    fn canonical_order_examples() {
        let g = Generators::new(vec![("v1", 1), ("v2", 1), ("v3", 1)]).unwrap();
        let m12 = Monomial::from_sorted_factors(&g, vec![(0, 1), (1, 1)]).unwrap();
        let m13 = Monomial::from_sorted_factors(&g, vec![(0, 1), (2, 1)]).unwrap();
        let m23 = Monomial::from_sorted_factors(&g, vec![(1, 1), (2, 1)]).unwrap();
        assert!(m12 < m13 && m13 < m23);

        let h = Generators::new(vec![("a", 2), ("b", 2)]).unwrap();
        let a2 = Monomial::from_sorted_factors(&h, vec![(0, 2)]).unwrap();
        let ab = Monomial::from_sorted_factors(&h, vec![(0, 1), (1, 1)]).unwrap();
        let b2 = Monomial::from_sorted_factors(&h, vec![(1, 2)]).unwrap();
        assert!(a2 < ab && ab < b2);
    }

    #[test]
    fn cap_violation_is_an_error() {
        let g = Generators::with_cap(vec![("v", 2)], 8).unwrap();
        assert!(Monomial::from_sorted_factors(&g, vec![(0, 4)]).is_ok());
        assert!(matches!(
            Monomial::from_sorted_factors(&g, vec![(0, 5)]),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }
}

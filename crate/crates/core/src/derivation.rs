//! Graded derivations and algebra morphisms, given on generators and
//! extended by the Leibniz rule (resp. multiplicatively).

use crate::error::{Error, Result};
use crate::generators::{GenId, Generators};
use crate::polynomial::Polynomial;
use crate::scalar;

/// A derivation of degree `shift`, determined by its generator images.
/// Extension obeys `theta(ab) = theta(a)b + (-1)^{shift*|a|} a theta(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    images: Vec<Polynomial>,
    shift: i32,
}

impl Derivation {
    /// Build from a sparse image list; absent generators map to zero. Every
    /// image must be zero or homogeneous of degree `deg(gen) + shift`.
    pub fn new(
        gens: &Generators,
        images: impl IntoIterator<Item = (GenId, Polynomial)>,
        shift: i32,
    ) -> Result<Self> {
        let mut table = vec![Polynomial::zero(); gens.len()];
        for (id, poly) in images {
            gens.check_id(id)?;
            table[id] = poly;
        }
        for (id, poly) in table.iter().enumerate() {
            let expected = gens.degree(id) as i64 + shift as i64;
            match poly.homogeneous_degree() {
                Ok(None) => {}
                Ok(Some(d)) if d as i64 == expected => {}
                _ => {
                    return Err(Error::NonHomogeneousImage {
                        gen: gens.name(id).to_string(),
                        expected,
                    })
                }
            }
        }
        Ok(Derivation {
            images: table,
            shift,
        })
    }

    pub fn zero(gens: &Generators, shift: i32) -> Self {
        Derivation {
            images: vec![Polynomial::zero(); gens.len()],
            shift,
        }
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn image_of(&self, id: GenId) -> &Polynomial {
        &self.images[id]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|p| p.is_zero())
    }

    /// Apply the Leibniz extension term by term.
    pub fn apply(&self, gens: &Generators, p: &Polynomial) -> Result<Polynomial> {
        let odd_shift = self.shift.rem_euclid(2) == 1;
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let factors = m.factors();
            let mut prefix_degree: u64 = 0;
            for (i, &(id, exp)) in factors.iter().enumerate() {
                let image = &self.images[id];
                if !image.is_zero() {
                    // prefix * g^{exp-1} * theta(g) * suffix
                    let mut prefix = factors[..i].to_vec();
                    if exp > 1 {
                        prefix.push((id, exp - 1));
                    }
                    let prefix_poly = Polynomial::from_term(
                        scalar::one(),
                        crate::monomial::Monomial::from_sorted_factors(gens, prefix)?,
                    );
                    let suffix_poly = Polynomial::from_term(
                        scalar::one(),
                        crate::monomial::Monomial::from_sorted_factors(
                            gens,
                            factors[i + 1..].to_vec(),
                        )?,
                    );
                    let mut piece = prefix_poly.mul(gens, image)?.mul(gens, &suffix_poly)?;
                    let mut coeff = c * scalar::int(exp as i64);
                    if odd_shift && prefix_degree % 2 == 1 {
                        coeff = -coeff;
                    }
                    piece = piece.scaled(&coeff);
                    out = out.add(&piece);
                }
                prefix_degree += exp as u64 * gens.degree(id) as u64;
            }
        }
        Ok(out)
    }
}

/// An algebra endomorphism determined by generator images, extended
/// multiplicatively. Images must be zero or homogeneous of the generator's
/// own degree, which keeps the map degree-preserving and well defined on the
/// graded-commutative quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    images: Vec<Polynomial>,
}

impl Substitution {
    pub fn identity(gens: &Generators) -> Result<Self> {
        let images = (0..gens.len())
            .map(|id| Polynomial::generator(gens, id))
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution { images })
    }

    pub fn new(gens: &Generators, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != gens.len() {
            return Err(Error::Dimension(format!(
                "{} images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        for (id, poly) in images.iter().enumerate() {
            match poly.homogeneous_degree() {
                Ok(None) => {}
                Ok(Some(d)) if d == gens.degree(id) => {}
                _ => {
                    return Err(Error::NonHomogeneousImage {
                        gen: gens.name(id).to_string(),
                        expected: gens.degree(id) as i64,
                    })
                }
            }
        }
        Ok(Substitution { images })
    }

    /// Identity on all generators except the listed ones.
    pub fn from_overrides(
        gens: &Generators,
        overrides: impl IntoIterator<Item = (GenId, Polynomial)>,
    ) -> Result<Self> {
        let mut sub = Substitution::identity(gens)?;
        for (id, poly) in overrides {
            gens.check_id(id)?;
            sub.images[id] = poly;
        }
        Substitution::new(gens, sub.images)
    }

    pub fn image_of(&self, id: GenId) -> &Polynomial {
        &self.images[id]
    }

    pub fn apply(&self, gens: &Generators, p: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let mut acc = Polynomial::constant(c.clone());
            for &(id, exp) in m.factors() {
                acc = acc.mul(gens, &self.images[id].pow(gens, exp)?)?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use crate::scalar::int;

    /// KT-style setup: d(u3) = u1*u2 as a degree +1 derivation on degree-1
    /// generators.
    #[test]
    fn differential_on_word() {
        let g = Generators::new(vec![("u1", 1), ("u2", 1), ("u3", 1), ("u4", 1)]).unwrap();
        let u1u2 = Polynomial::generator(&g, 0)
            .unwrap()
            .mul(&g, &Polynomial::generator(&g, 1).unwrap())
            .unwrap();
        let d = Derivation::new(&g, vec![(2, u1u2.clone())], 1).unwrap();
        let u3u4 = Polynomial::from_term(
            int(1),
            Monomial::from_sorted_factors(&g, vec![(2, 1), (3, 1)]).unwrap(),
        );
        let got = d.apply(&g, &u3u4).unwrap();
        let expected = Polynomial::from_term(
            int(1),
            Monomial::from_sorted_factors(&g, vec![(0, 1), (1, 1), (3, 1)]).unwrap(),
        );
        assert_eq!(got, expected);
    }

    /// theta(v2) = v1 with shift 0 applied to v2^2 gives 2*v1*v2.
    #[test]
    fn degree_zero_derivation_on_square() {
        let g = Generators::new(vec![("v1", 2), ("v2", 2)]).unwrap();
        let v1 = Polynomial::generator(&g, 0).unwrap();
        let theta = Derivation::new(&g, vec![(1, v1)], 0).unwrap();
        let v2sq = Polynomial::generator(&g, 1).unwrap().pow(&g, 2).unwrap();
        let got = theta.apply(&g, &v2sq).unwrap();
        let expected = Polynomial::from_term(
            int(2),
            Monomial::from_sorted_factors(&g, vec![(0, 1), (1, 1)]).unwrap(),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn derivation_kills_the_unit() {
        let g = Generators::new(vec![("x", 2), ("y", 3)]).unwrap();
        let x = Polynomial::generator(&g, 0).unwrap();
        let d = Derivation::new(&g, vec![(1, x.pow(&g, 2).unwrap())], 1).unwrap();
        assert!(d.apply(&g, &Polynomial::one()).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_homogeneous_image() {
        let g = Generators::new(vec![("x", 2), ("y", 3)]).unwrap();
        let x = Polynomial::generator(&g, 0).unwrap();
        // d(y) must have degree 4, x has degree 2
        assert!(Derivation::new(&g, vec![(1, x)], 1).is_err());
    }

    #[test]
    fn substitution_is_multiplicative() {
        let g = Generators::new(vec![("v", 1), ("x", 2), ("y", 3)]).unwrap();
        let v = Polynomial::generator(&g, 0).unwrap();
        let x = Polynomial::generator(&g, 1).unwrap();
        let y = Polynomial::generator(&g, 2).unwrap();
        // y -> y + v*x
        let sub =
            Substitution::from_overrides(&g, vec![(2, y.add(&v.mul(&g, &x).unwrap()))]).unwrap();
        let p = x.mul(&g, &y).unwrap();
        let got = sub.apply(&g, &p).unwrap();
        let expected = x.mul(&g, &y.add(&v.mul(&g, &x).unwrap())).unwrap();
        assert_eq!(got, expected);
    }
}

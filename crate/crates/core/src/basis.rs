//! Per-degree monomial bases.
//!
//! Because every generator has degree >= 1, each degree has a finite basis.

use std::collections::BTreeMap;

use crate::generators::Generators;
use crate::monomial::Monomial;

/// All monomials of the given degree whose word length lies in the optional
/// window, in canonical order.
pub fn monomial_basis(
    gens: &Generators,
    degree: u32,
    min_word_length: Option<u32>,
    max_word_length: Option<u32>,
) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut factors: Vec<(usize, u32)> = Vec::new();
    enumerate(gens, 0, degree, &mut factors, &mut out);
    out.retain(|m| {
        let wl = m.word_length();
        min_word_length.is_none_or(|lo| wl >= lo) && max_word_length.is_none_or(|hi| wl <= hi)
    });
    out.sort();
    out
}

fn enumerate(
    gens: &Generators,
    next: usize,
    remaining: u32,
    factors: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        // within-cap by construction: total degree equals the requested degree
        out.push(Monomial::from_sorted_factors(gens, factors.clone()).expect("sorted factors"));
        return;
    }
    if next >= gens.len() {
        return;
    }
    let d = gens.degree(next);
    let max_exp = if gens.is_odd(next) {
        (remaining / d).min(1)
    } else {
        remaining / d
    };
    for exp in 0..=max_exp {
        if exp > 0 {
            factors.push((next, exp));
        }
        enumerate(gens, next + 1, remaining - exp * d, factors, out);
        if exp > 0 {
            factors.pop();
        }
    }
}

/// Index map from monomial to basis position.
pub fn basis_index(basis: &[Monomial]) -> BTreeMap<Monomial, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_degree_two() {
        let g = Generators::new(vec![("v1", 1), ("v2", 1), ("v3", 1)]).unwrap();
        let b = monomial_basis(&g, 2, None, None);
        let names: Vec<Vec<(usize, u32)>> = b.iter().map(|m| m.factors().to_vec()).collect();
        assert_eq!(
            names,
            vec![
                vec![(0, 1), (1, 1)],
                vec![(0, 1), (2, 1)],
                vec![(1, 1), (2, 1)]
            ]
        );
    }

    #[test]
    fn mixed_degrees() {
        let g = Generators::new(vec![("v2", 2), ("v3", 3)]).unwrap();
        let b6 = monomial_basis(&g, 6, None, None);
        assert_eq!(b6.len(), 1);
        assert_eq!(b6[0].factors(), &[(0, 3)]);
        let b5 = monomial_basis(&g, 5, None, None);
        assert_eq!(b5.len(), 1);
        assert_eq!(b5[0].factors(), &[(0, 1), (1, 1)]);
    }

    #[test]
    fn degree_zero_is_the_unit() {
        let g = Generators::new(vec![("v2", 2), ("v3", 3)]).unwrap();
        let b = monomial_basis(&g, 0, None, None);
        assert_eq!(b, vec![Monomial::unit()]);
    }

    #[test]
    fn word_length_window() {
        let g = Generators::new(vec![("x", 1), ("v", 2)]).unwrap();
        // degree 4: x*v*? candidates: v^2 (wl 2), x... degree 4 monomials: v^2
        // and x-free only; with window wl <= 1 nothing remains.
        let b = monomial_basis(&g, 4, None, Some(1));
        assert!(b.is_empty());
        let b = monomial_basis(&g, 3, Some(2), None);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].factors(), &[(0, 1), (1, 1)]);
    }
}

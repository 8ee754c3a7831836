//! Commutative differential graded algebras with validation.

use std::sync::OnceLock;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::generators::{GenId, Generators};
use crate::polynomial::Polynomial;

/// A free CDGA `(Lambda V, d)` given by a generator set and the differential
/// images of the generators (absent means zero). Construction checks that
/// every image is homogeneous of degree `deg + 1`; `d^2 = 0` is checked by
/// [`Cdga::validate`] and cached.
#[derive(Debug)]
pub struct Cdga {
    gens: Generators,
    diff: Derivation,
    verified: OnceLock<bool>,
}

impl Clone for Cdga {
    fn clone(&self) -> Self {
        Cdga {
            gens: self.gens.clone(),
            diff: self.diff.clone(),
            verified: self.verified.clone(),
        }
    }
}

impl PartialEq for Cdga {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.diff == other.diff
    }
}
impl Eq for Cdga {}

/// Everything `validate` finds out about a cdga.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Generators with `d(d(gen)) != 0`, together with the offending value.
    pub d_squared_failures: Vec<(GenId, Polynomial)>,
    /// True when some reordering of the generators is triangular
    /// (each differential lies in the span of earlier generators).
    pub is_sullivan: bool,
    /// A witness ordering when `is_sullivan`, found by stagewise peeling.
    pub sullivan_order: Option<Vec<GenId>>,
    /// True when every differential image has word length >= 2.
    pub is_minimal: bool,
    /// Generators whose differential has a term of word length < 2.
    pub non_minimal_witnesses: Vec<GenId>,
}

impl ValidationReport {
    pub fn d_squared_zero(&self) -> bool {
        self.d_squared_failures.is_empty()
    }
}

/// Outcome of the F0-shape test: closed even generators, odd generators with
/// differentials in the even subalgebra, and equally many of each.
#[derive(Debug, Clone)]
pub struct F0ShapeReport {
    pub ok: bool,
    pub evens: Vec<GenId>,
    pub odds: Vec<GenId>,
    pub failures: Vec<String>,
}

impl Cdga {
    pub fn new(
        gens: Generators,
        images: impl IntoIterator<Item = (GenId, Polynomial)>,
    ) -> Result<Self> {
        let diff = Derivation::new(&gens, images, 1)?;
        Ok(Cdga {
            gens,
            diff,
            verified: OnceLock::new(),
        })
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn differential(&self) -> &Derivation {
        &self.diff
    }

    pub fn d_of(&self, id: GenId) -> &Polynomial {
        self.diff.image_of(id)
    }

    pub fn apply_d(&self, p: &Polynomial) -> Result<Polynomial> {
        self.diff.apply(&self.gens, p)
    }

    /// `d^2 = 0` on every generator, cached after the first call.
    pub fn is_verified(&self) -> bool {
        *self
            .verified
            .get_or_init(|| self.d_squared_failures().is_ok_and(|f| f.is_empty()))
    }

    fn d_squared_failures(&self) -> Result<Vec<(GenId, Polynomial)>> {
        let mut failures = Vec::new();
        for id in 0..self.gens.len() {
            let dd = self.apply_d(self.d_of(id))?;
            if !dd.is_zero() {
                failures.push((id, dd));
            }
        }
        Ok(failures)
    }

    /// Full structural report: `d^2`, Sullivan triangularity (up to
    /// reordering, found by peeling generators whose differential lies in
    /// the span of already-peeled ones), and minimality.
    pub fn validate(&self) -> Result<ValidationReport> {
        let d_squared_failures = self.d_squared_failures()?;
        let _ = self.verified.get_or_init(|| d_squared_failures.is_empty());

        let n = self.gens.len();
        let mut peeled = vec![false; n];
        let mut order = Vec::with_capacity(n);
        loop {
            let stage: Vec<GenId> = (0..n)
                .filter(|&id| {
                    !peeled[id]
                        && self
                            .d_of(id)
                            .terms()
                            .all(|(m, _)| m.uses_only(|g| peeled[g]))
                })
                .collect();
            if stage.is_empty() {
                break;
            }
            for id in stage {
                peeled[id] = true;
                order.push(id);
            }
        }
        let is_sullivan = order.len() == n;

        let non_minimal_witnesses: Vec<GenId> = (0..n)
            .filter(|&id| self.d_of(id).min_word_length().is_some_and(|wl| wl < 2))
            .collect();

        Ok(ValidationReport {
            d_squared_failures,
            is_sullivan,
            sullivan_order: if is_sullivan { Some(order) } else { None },
            is_minimal: non_minimal_witnesses.is_empty(),
            non_minimal_witnesses,
        })
    }

    /// Shape test for models of F0-spaces: `d(V_even) = 0`,
    /// `d(V_odd)` inside the length->=2 part of the even subalgebra, and
    /// equally many even and odd generators.
    pub fn f0_shape(&self) -> F0ShapeReport {
        let evens = self.gens.even_ids();
        let odds = self.gens.odd_ids();
        let mut failures = Vec::new();
        for &id in &evens {
            if !self.d_of(id).is_zero() {
                failures.push(format!(
                    "even generator `{}` is not closed",
                    self.gens.name(id)
                ));
            }
        }
        for &id in &odds {
            let image = self.d_of(id);
            let inside = image
                .terms()
                .all(|(m, _)| m.word_length() >= 2 && m.uses_only(|g| !self.gens.is_odd(g)));
            if !inside {
                failures.push(format!(
                    "d({}) does not lie in the even subalgebra in length >= 2",
                    self.gens.name(id)
                ));
            }
        }
        if evens.len() != odds.len() {
            failures.push(format!(
                "{} even generators vs {} odd",
                evens.len(),
                odds.len()
            ));
        }
        F0ShapeReport {
            ok: failures.is_empty(),
            evens,
            odds,
            failures,
        }
    }

    /// Tensor product `A (x) B`: generators concatenated, differentials
    /// extended. Generator names must be disjoint.
    pub fn tensor(&self, other: &Cdga) -> Result<Cdga> {
        let gens = self.gens.concat(&other.gens)?;
        let offset = self.gens.len();
        let mut images: Vec<(GenId, Polynomial)> = Vec::new();
        for id in 0..self.gens.len() {
            if !self.d_of(id).is_zero() {
                images.push((id, self.d_of(id).clone()));
            }
        }
        for id in 0..other.gens.len() {
            let img = other.d_of(id);
            if !img.is_zero() {
                images.push((id + offset, img.map_gen_ids(&gens, |g| Some(g + offset))?));
            }
        }
        Cdga::new(gens, images)
    }

    /// The same cdga with renamed generators.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Result<Cdga> {
        let gens = self.gens.renamed(f)?;
        let images: Vec<(GenId, Polynomial)> = (0..self.gens.len())
            .filter(|&id| !self.d_of(id).is_zero())
            .map(|id| self.d_of(id).map_gen_ids(&gens, Some).map(|p| (id, p)))
            .collect::<Result<_>>()?;
        Cdga::new(gens, images)
    }

    /// The same cdga with generators declared in a new order. Signs in the
    /// differentials are recomputed for the new normal form.
    pub fn permuted(&self, order: &[GenId]) -> Result<Cdga> {
        let gens = self.gens.permuted(order)?;
        let mut new_of_old = vec![0usize; order.len()];
        for (new_id, &old_id) in order.iter().enumerate() {
            new_of_old[old_id] = new_id;
        }
        let images: Vec<(GenId, Polynomial)> = (0..self.gens.len())
            .filter(|&old| !self.d_of(old).is_zero())
            .map(|old| {
                let p = self.d_of(old).permute_gens(&gens, &new_of_old)?;
                Ok((new_of_old[old], p))
            })
            .collect::<Result<_>>()?;
        Cdga::new(gens, images)
    }

    /// Require `d^2 = 0`; used as a precondition by the analyses.
    pub fn require_verified(&self) -> Result<()> {
        if self.is_verified() {
            Ok(())
        } else {
            Err(Error::InvalidCdga("d^2 != 0 on some generator".into()))
        }
    }
}

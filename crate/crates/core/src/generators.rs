//! Graded generator sets.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Default bound on degrees and exponents. Exceeding the cap is an error,
/// never silent wraparound.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Index of a generator inside its `Generators` set, dense in declaration order.
pub type GenId = usize;

/// A named generator with a positive degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSymbol {
    pub name: String,
    pub degree: u32,
}

/// An ordered set of graded generators. Declaration order fixes the monomial
/// normal order, so two `Generators` with the same symbols in the same order
/// define the same algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    symbols: Vec<GeneratorSymbol>,
    by_name: HashMap<String, GenId>,
    degree_cap: u32,
}

impl Generators {
    /// Build a generator set from `(name, degree)` pairs. Degree-0 generators
    /// and duplicate names are rejected.
    pub fn new<S: Into<String>>(items: Vec<(S, u32)>) -> Result<Self> {
        Self::with_cap(items, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap<S: Into<String>>(items: Vec<(S, u32)>, degree_cap: u32) -> Result<Self> {
        let mut symbols = Vec::with_capacity(items.len());
        let mut by_name = HashMap::new();
        for (name, degree) in items {
            let name = name.into();
            if degree == 0 {
                return Err(Error::ZeroDegreeGenerator { name });
            }
            if degree > degree_cap {
                return Err(Error::DegreeCapExceeded {
                    cap: degree_cap,
                    requested: degree,
                });
            }
            if by_name.insert(name.clone(), symbols.len()).is_some() {
                return Err(Error::DuplicateGenerator(name));
            }
            symbols.push(GeneratorSymbol { name, degree });
        }
        Ok(Generators {
            symbols,
            by_name,
            degree_cap,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.symbols
    }

    pub fn check_id(&self, id: GenId) -> Result<()> {
        if id < self.symbols.len() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(id))
        }
    }

    pub fn degree(&self, id: GenId) -> u32 {
        self.symbols[id].degree
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.symbols[id].name
    }

    pub fn is_odd(&self, id: GenId) -> bool {
        self.symbols[id].degree % 2 == 1
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    /// Ids of the generators of even degree, in declaration order.
    pub fn even_ids(&self) -> Vec<GenId> {
        (0..self.len()).filter(|&i| !self.is_odd(i)).collect()
    }

    /// Ids of the generators of odd degree, in declaration order.
    pub fn odd_ids(&self) -> Vec<GenId> {
        (0..self.len()).filter(|&i| self.is_odd(i)).collect()
    }

    /// Concatenate two generator sets (used for tensor products and relative
    /// models). Name clashes are rejected; the cap is the larger of the two.
    pub fn concat(&self, other: &Generators) -> Result<Generators> {
        let mut items: Vec<(String, u32)> = self
            .symbols
            .iter()
            .map(|s| (s.name.clone(), s.degree))
            .collect();
        items.extend(other.symbols.iter().map(|s| (s.name.clone(), s.degree)));
        Generators::with_cap(items, self.degree_cap.max(other.degree_cap))
    }

    /// The same generators with every name passed through `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Result<Generators> {
        Generators::with_cap(
            self.symbols
                .iter()
                .map(|s| (f(&s.name), s.degree))
                .collect(),
            self.degree_cap,
        )
    }

    /// The same generator symbols listed in a new order. `order` must be a
    /// permutation of `0..len`.
    pub fn permuted(&self, order: &[GenId]) -> Result<Generators> {
        if order.len() != self.len() {
            return Err(Error::Dimension(format!(
                "permutation length {} != generator count {}",
                order.len(),
                self.len()
            )));
        }
        let mut seen = vec![false; self.len()];
        for &id in order {
            self.check_id(id)?;
            if seen[id] {
                return Err(Error::Dimension(format!("id {id} repeated in permutation")));
            }
            seen[id] = true;
        }
        Generators::with_cap(
            order
                .iter()
                .map(|&id| (self.symbols[id].name.clone(), self.symbols[id].degree))
                .collect(),
            self.degree_cap,
        )
    }
}

//! Nilpotent Lie algebras over Q and their Chevalley-Eilenberg models.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cdga::Cdga;
use crate::error::{Error, Result};
use crate::generators::Generators;
use crate::linalg::RowSpace;
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;
use crate::scalar::{self, Scalar};

/// A Lie algebra given by rational structure constants
/// `[X_i, X_j] = sum_k c_ij^k X_k`. Brackets are stored only for `i < j`
/// (0-based); the other half is determined by antisymmetry and diagonal
/// brackets are forced to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<Scalar>>,
}

/// Result of the lower-central-series computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent { stable_dim: usize },
}

/// Validation output: Jacobi status with a witness triple, the lower central
/// series, and the first Betti number `n - dim[g,g]`.
#[derive(Debug, Clone)]
pub struct LieReport {
    pub jacobi_ok: bool,
    pub jacobi_witness: Option<(usize, usize, usize, Vec<Scalar>)>,
    pub nilpotency: Nilpotency,
    pub lcs_dims: Vec<usize>,
    /// Row bases of the chain `g = g_1 >= g_2 >= ...`, one entry per term,
    /// ending with the last nonzero term (or the stable one).
    pub lcs_chain: Vec<Vec<Vec<Scalar>>>,
    pub b1: usize,
}

impl LieReport {
    pub fn is_nilpotent(&self) -> bool {
        matches!(self.nilpotency, Nilpotency::Class(_))
    }
}

impl LieAlgebraSpec {
    /// The abelian Lie algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        LieAlgebraSpec {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn brackets(&self) -> &BTreeMap<(usize, usize), Vec<Scalar>> {
        &self.brackets
    }

    /// Set `[X_i, X_j]` for `i < j` (0-based) from sparse coefficients.
    pub fn set_bracket(
        &mut self,
        i: usize,
        j: usize,
        rhs: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> Result<()> {
        if i >= j {
            return Err(Error::Precondition(format!(
                "brackets are stored for i < j only, got ({i}, {j})"
            )));
        }
        if j >= self.dim {
            return Err(Error::BracketIndexOutOfRange {
                index: j,
                dim: self.dim,
            });
        }
        let mut v = vec![scalar::zero(); self.dim];
        for (k, c) in rhs {
            if k >= self.dim {
                return Err(Error::BracketIndexOutOfRange {
                    index: k,
                    dim: self.dim,
                });
            }
            v[k] += c;
        }
        if v.iter().all(|c| c.is_zero()) {
            self.brackets.remove(&(i, j));
        } else {
            self.brackets.insert((i, j), v);
        }
        Ok(())
    }

    /// `[X_i, X_j]` as a coefficient vector, for any `i, j`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        if i == j {
            return vec![scalar::zero(); self.dim];
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.brackets.get(&(a, b)) {
            None => vec![scalar::zero(); self.dim],
            Some(v) => {
                if flip {
                    v.iter().map(|c| -c.clone()).collect()
                } else {
                    v.clone()
                }
            }
        }
    }

    /// Bilinear extension of the bracket to coefficient vectors.
    pub fn bracket(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.dim];
        for i in 0..self.dim {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if b[j].is_zero() {
                    continue;
                }
                let base = self.bracket_basis(i, j);
                let f = &a[i] * &b[j];
                for (o, c) in out.iter_mut().zip(base.iter()) {
                    *o += &f * c;
                }
            }
        }
        out
    }

    /// Direct sum, the second summand's indices shifted.
    pub fn direct_sum(&self, other: &LieAlgebraSpec) -> LieAlgebraSpec {
        let mut out = LieAlgebraSpec::abelian(self.dim + other.dim);
        for ((i, j), v) in &self.brackets {
            let mut w = v.clone();
            w.resize(out.dim, scalar::zero());
            out.brackets.insert((*i, *j), w);
        }
        for ((i, j), v) in &other.brackets {
            let mut w = vec![scalar::zero(); out.dim];
            for (k, c) in v.iter().enumerate() {
                w[self.dim + k] = c.clone();
            }
            out.brackets.insert((self.dim + i, self.dim + j), w);
        }
        out
    }
}

fn unit_vec(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![scalar::zero(); dim];
    v[i] = scalar::one();
    v
}

/// Jacobi check on all triples, lower central series by iterated bracket
/// spans, and `b1 = n - dim[g,g]`. Failures are report values, not errors.
pub fn validate_lie(l: &LieAlgebraSpec) -> LieReport {
    let n = l.dim();
    let mut jacobi_ok = true;
    let mut jacobi_witness = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut defect = l.bracket(&l.bracket_basis(i, j), &unit_vec(n, k));
                let t2 = l.bracket(&l.bracket_basis(j, k), &unit_vec(n, i));
                let t3 = l.bracket(&l.bracket_basis(k, i), &unit_vec(n, j));
                for (d, (a, b)) in defect.iter_mut().zip(t2.iter().zip(t3.iter())) {
                    *d += a;
                    *d += b;
                }
                if defect.iter().any(|c| !c.is_zero()) {
                    jacobi_ok = false;
                    jacobi_witness = Some((i, j, k, defect));
                    break 'outer;
                }
            }
        }
    }

    // lower central series: g_{s+1} = [g, g_s]; the terms are nested, so
    // equal consecutive dimensions mean the chain has stabilized
    let mut lcs_dims = vec![n];
    let mut current = RowSpace::new(n);
    for i in 0..n {
        current.insert(&unit_vec(n, i));
    }
    let mut lcs_chain = vec![current.rows().to_vec()];
    let nilpotency = loop {
        let mut next = RowSpace::new(n);
        for i in 0..n {
            for row in current.rows() {
                let v = l.bracket(&unit_vec(n, i), row);
                if v.iter().any(|c| !c.is_zero()) {
                    next.insert(&v);
                }
            }
        }
        let dim_next = next.rank();
        if dim_next == 0 {
            break Nilpotency::Class(lcs_dims.len());
        }
        if dim_next == *lcs_dims.last().unwrap() {
            // next == current by nesting; the stable term is already stored
            break Nilpotency::NotNilpotent {
                stable_dim: dim_next,
            };
        }
        lcs_dims.push(dim_next);
        lcs_chain.push(next.rows().to_vec());
        current = next;
    };

    // dim[g,g]
    let mut derived = RowSpace::new(n);
    for (i, j) in l.brackets().keys() {
        derived.insert(&l.bracket_basis(*i, *j));
    }
    let b1 = n - derived.rank();

    LieReport {
        jacobi_ok,
        jacobi_witness,
        nilpotency,
        lcs_dims,
        lcs_chain,
        b1,
    }
}

/// The Chevalley-Eilenberg differential `d v_k = - sum_{i<j} c_ij^k v_i v_j`
/// on an exterior algebra of degree-1 generators, built without any
/// validation. `d^2 = 0` holds exactly when Jacobi does.
pub fn ce_cdga_unchecked(l: &LieAlgebraSpec) -> Result<Cdga> {
    let n = l.dim();
    let gens = Generators::new((1..=n).map(|i| (format!("v{i}"), 1)).collect())?;
    let mut images: Vec<Polynomial> = vec![Polynomial::zero(); n];
    for ((i, j), coeffs) in l.brackets() {
        let m = Monomial::from_sorted_factors(&gens, vec![(*i, 1), (*j, 1)])?;
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                images[k].add_term(-c.clone(), m.clone());
            }
        }
    }
    Cdga::new(
        gens,
        images
            .into_iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .collect::<Vec<_>>(),
    )
}

fn triangular_as_declared(c: &Cdga) -> bool {
    (0..c.generators().len()).all(|k| c.d_of(k).terms().all(|(m, _)| m.uses_only(|g| g < k)))
}

/// Chevalley-Eilenberg model of a validated nilpotent Lie algebra. The
/// output passes validation and is Sullivan; generators are reordered
/// stagewise when the declared order is not already triangular.
pub fn chevalley_eilenberg(l: &LieAlgebraSpec) -> Result<Cdga> {
    let report = validate_lie(l);
    if !report.jacobi_ok {
        let (i, j, k, _) = report.jacobi_witness.unwrap();
        return Err(Error::JacobiFailure { i, j, k });
    }
    let Nilpotency::Class(_) = report.nilpotency else {
        let Nilpotency::NotNilpotent { stable_dim } = report.nilpotency else {
            unreachable!()
        };
        return Err(Error::NotNilpotent { stable_dim });
    };
    let cdga = ce_cdga_unchecked(l)?;
    let cdga = if triangular_as_declared(&cdga) {
        cdga
    } else {
        let validation = cdga.validate()?;
        let order = validation.sullivan_order.ok_or_else(|| {
            Error::InvalidCdga("nilpotent CE model failed the Sullivan peel".into())
        })?;
        cdga.permuted(&order)?
    };
    if !cdga.is_verified() {
        return Err(Error::InvalidCdga(
            "CE differential fails d^2 = 0 despite Jacobi".into(),
        ));
    }
    Ok(cdga)
}

/// Torus recognition: `b1 = dim`, no brackets, zero CE differential. The
/// three characterizations are computed independently and must agree.
pub fn torus_test(l: &LieAlgebraSpec) -> Result<bool> {
    let report = validate_lie(l);
    if !report.jacobi_ok {
        let (i, j, k, _) = report.jacobi_witness.unwrap();
        return Err(Error::JacobiFailure { i, j, k });
    }
    if !report.is_nilpotent() {
        return Err(Error::Precondition(
            "torus test needs a nilpotent input".into(),
        ));
    }
    let by_b1 = report.b1 == l.dim();
    let by_brackets = l.brackets().is_empty();
    let by_ce = ce_cdga_unchecked(l)?.differential().is_zero();
    if by_b1 != by_brackets || by_brackets != by_ce {
        return Err(Error::Precondition(
            "torus characterizations disagree (engine bug)".into(),
        ));
    }
    Ok(by_b1)
}

/// The 3-dimensional Heisenberg algebra `[X1, X2] = X3`.
pub fn heisenberg3() -> LieAlgebraSpec {
    let mut l = LieAlgebraSpec::abelian(3);
    l.set_bracket(0, 1, vec![(2, scalar::one())]).unwrap();
    l
}

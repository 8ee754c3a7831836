//! Relative models of quasi-nilpotent fibrations over nilmanifolds.
//!
//! A relative model is `(Lambda V (x) Lambda W, D)` with `V` the base
//! nilmanifold model (all generators of degree 1), `W` a simply connected
//! fiber model (generators of degree >= 2), `D = d_V` on the base, and
//!
//! `D(w) = d_W(w) + sum_i v_i theta_i(w) + chi_2(w)`
//!
//! with `chi_2` of base word length >= 2. The `theta_i` are degree-zero
//! derivations of the fiber commuting with `d_W`; their induced maps on
//! fiber cohomology encode the rational action of the fundamental group.

use crate::cdga::Cdga;
use crate::cohomology::{d_preimage, ClassCoords, CohomologyRing, PoincareStructure};
use crate::derivation::{Derivation, Substitution};
use crate::error::{Error, Result};
use crate::generators::GenId;
use crate::linalg::{kernel_basis, solve, QMatrix};
use crate::polynomial::Polynomial;
use crate::scalar;
use crate::toomer::{e0_top_class, E0Method, ToomerReport};

/// A relative model. The total cdga lists the base generators first, then
/// the fiber generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeModel {
    base: Cdga,
    fiber: Cdga,
    total: Cdga,
}

impl RelativeModel {
    /// Assemble from a base model, fiber model, and the total differential
    /// on fiber generators (fiber-local ids, polynomials in total
    /// coordinates). Fiber generators without an override keep the lifted
    /// fiber differential, i.e. the product extension.
    pub fn new(
        base: Cdga,
        fiber: Cdga,
        overrides: impl IntoIterator<Item = (GenId, Polynomial)>,
    ) -> Result<Self> {
        for id in 0..base.generators().len() {
            if base.generators().degree(id) != 1 {
                return Err(Error::InvalidRelativeModel(format!(
                    "base generator `{}` has degree {}; a nilmanifold model has only degree-1 generators",
                    base.generators().name(id),
                    base.generators().degree(id)
                )));
            }
        }
        for id in 0..fiber.generators().len() {
            if fiber.generators().degree(id) < 2 {
                return Err(Error::InvalidRelativeModel(format!(
                    "fiber generator `{}` has degree {}; the fiber must be simply connected",
                    fiber.generators().name(id),
                    fiber.generators().degree(id)
                )));
            }
        }
        let gens = base.generators().concat(fiber.generators())?;
        let nb = base.generators().len();
        let mut images: Vec<Polynomial> = Vec::with_capacity(gens.len());
        for id in 0..nb {
            images.push(base.d_of(id).map_gen_ids(&gens, Some)?);
        }
        for id in 0..fiber.generators().len() {
            images.push(fiber.d_of(id).map_gen_ids(&gens, |g| Some(g + nb))?);
        }
        for (fiber_id, poly) in overrides {
            fiber.generators().check_id(fiber_id)?;
            images[nb + fiber_id] = poly;
        }
        let total = Cdga::new(
            gens,
            images
                .into_iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .collect::<Vec<_>>(),
        )?;
        Ok(RelativeModel { base, fiber, total })
    }

    /// The trivial (product) relative model.
    pub fn product(base: Cdga, fiber: Cdga) -> Result<Self> {
        RelativeModel::new(base, fiber, vec![])
    }

    pub fn base(&self) -> &Cdga {
        &self.base
    }

    pub fn fiber(&self) -> &Cdga {
        &self.fiber
    }

    pub fn total(&self) -> &Cdga {
        &self.total
    }

    pub fn base_count(&self) -> usize {
        self.base.generators().len()
    }

    /// Total differential of a fiber generator (fiber-local id).
    pub fn d_total_of_fiber(&self, fiber_id: GenId) -> &Polynomial {
        self.total.d_of(self.base_count() + fiber_id)
    }

    /// Inclusion of base cochains into the total model.
    pub fn base_to_total(&self, p: &Polynomial) -> Result<Polynomial> {
        p.map_gen_ids(self.total.generators(), Some)
    }

    /// Inclusion of fiber cochains into the total model.
    pub fn fiber_to_total(&self, p: &Polynomial) -> Result<Polynomial> {
        let nb = self.base_count();
        p.map_gen_ids(self.total.generators(), |g| Some(g + nb))
    }

    /// The projection `rho`: kill base generators, keep fiber words.
    pub fn total_to_fiber(&self, p: &Polynomial) -> Result<Polynomial> {
        let nb = self.base_count();
        p.map_gen_ids(self.fiber.generators(), |g| g.checked_sub(nb))
    }

    /// Restrict to the sub-fibration over a single closed degree-1 base
    /// generator: every other base generator is sent to zero.
    pub fn restrict_to_circle(&self, base_id: GenId) -> Result<RelativeModel> {
        self.base.generators().check_id(base_id)?;
        if !self.base.d_of(base_id).is_zero() {
            return Err(Error::Precondition(format!(
                "base generator `{}` is not closed",
                self.base.generators().name(base_id)
            )));
        }
        let name = self.base.generators().name(base_id).to_string();
        let new_base = Cdga::new(crate::generators::Generators::new(vec![(name, 1)])?, vec![])?;
        let nb = self.base_count();
        let map = |g: GenId| {
            if g == base_id {
                Some(0)
            } else if g < nb {
                None
            } else {
                Some(g - nb + 1)
            }
        };
        let mut overrides = Vec::new();
        for fiber_id in 0..self.fiber.generators().len() {
            let image = self.d_total_of_fiber(fiber_id);
            // the new total generators: restricted base then fiber
            let target = new_base.generators().concat(self.fiber.generators())?;
            overrides.push((fiber_id, image.map_gen_ids(&target, map)?));
        }
        RelativeModel::new(new_base, self.fiber.clone(), overrides)
    }
}

/// Validation output for a relative model.
#[derive(Debug, Clone)]
pub struct RelativeReport {
    /// Total generators where `D^2 != 0`.
    pub d_squared_failures: Vec<(GenId, Polynomial)>,
    /// Fiber generators whose base-length-0 part differs from `d_W`
    /// (fiber-local id, expected, found).
    pub fiber_part_failures: Vec<(GenId, Polynomial, Polynomial)>,
    /// True when every base-length-0 part lies in words of length >= 2
    /// (the relative minimality window).
    pub relative_minimal: bool,
}

impl RelativeReport {
    pub fn is_valid(&self) -> bool {
        self.d_squared_failures.is_empty() && self.fiber_part_failures.is_empty()
    }
}

pub fn validate_relative_model(m: &RelativeModel) -> Result<RelativeReport> {
    let total = m.total();
    let nb = m.base_count();
    let mut d_squared_failures = Vec::new();
    for id in 0..total.generators().len() {
        let dd = total.apply_d(total.d_of(id))?;
        if !dd.is_zero() {
            d_squared_failures.push((id, dd));
        }
    }
    let mut fiber_part_failures = Vec::new();
    let mut relative_minimal = true;
    for fiber_id in 0..m.fiber().generators().len() {
        let image = m.d_total_of_fiber(fiber_id);
        let length_zero = image.filter_terms(|mono| mono.word_length_below(nb) == 0);
        let found = m.total_to_fiber(&length_zero)?;
        let expected = m.fiber().d_of(fiber_id).clone();
        if found != expected {
            fiber_part_failures.push((fiber_id, expected.clone(), found.clone()));
        }
        if found.min_word_length().is_some_and(|wl| wl < 2) {
            relative_minimal = false;
        }
    }
    Ok(RelativeReport {
        d_squared_failures,
        fiber_part_failures,
        relative_minimal,
    })
}

/// The twisting data extracted from a relative model: one degree-zero fiber
/// derivation per base generator and the length->=2 remainders.
#[derive(Debug, Clone)]
pub struct FiberDerivationSet {
    /// `theta_i` on the fiber algebra, indexed like the base generators.
    pub thetas: Vec<Derivation>,
    /// `chi_2` per fiber generator, in total coordinates.
    pub remainders: Vec<Polynomial>,
    /// `(base index, fiber generator, defect)` where
    /// `theta_i d_W - d_W theta_i != 0`; empty on any valid model.
    pub commutation_failures: Vec<(usize, GenId, Polynomial)>,
}

impl FiberDerivationSet {
    pub fn all_trivial(&self) -> bool {
        self.thetas.iter().all(|t| t.is_zero())
    }
}

/// Slice each `D(w)` by base word length: length 0 must reproduce `d_W(w)`,
/// length 1 defines the `theta_i` on generators, the rest is `chi_2(w)`.
pub fn extract_fiber_derivations(m: &RelativeModel) -> Result<FiberDerivationSet> {
    let nb = m.base_count();
    let nf = m.fiber().generators().len();
    let fiber_gens = m.fiber().generators();

    let mut theta_images: Vec<Vec<(GenId, Polynomial)>> = vec![Vec::new(); nb];
    let mut remainders: Vec<Polynomial> = Vec::with_capacity(nf);
    for fiber_id in 0..nf {
        let image = m.d_total_of_fiber(fiber_id);
        let length_zero = image.filter_terms(|mono| mono.word_length_below(nb) == 0);
        let expected = m.fiber().d_of(fiber_id);
        if &m.total_to_fiber(&length_zero)? != expected {
            return Err(Error::InvalidRelativeModel(format!(
                "base-length-0 part of D({}) differs from the fiber differential",
                fiber_gens.name(fiber_id)
            )));
        }
        // length-1 terms: strip the single leading base generator
        let mut per_base: Vec<Polynomial> = vec![Polynomial::zero(); nb];
        let length_one = image.filter_terms(|mono| mono.word_length_below(nb) == 1);
        for (mono, coeff) in length_one.terms() {
            let &(vi, _) = mono
                .factors()
                .iter()
                .find(|&&(g, _)| g < nb)
                .expect("length-1 term has a base factor");
            let rest = Polynomial::from_term(
                coeff.clone(),
                crate::monomial::Monomial::from_sorted_factors(
                    m.total().generators(),
                    mono.factors()
                        .iter()
                        .filter(|&&(g, _)| g != vi)
                        .cloned()
                        .collect(),
                )?,
            );
            per_base[vi] = per_base[vi].add(&m.total_to_fiber(&rest)?);
        }
        for (vi, poly) in per_base.into_iter().enumerate() {
            if !poly.is_zero() {
                theta_images[vi].push((fiber_id, poly));
            }
        }
        remainders.push(image.filter_terms(|mono| mono.word_length_below(nb) >= 2));
    }

    let thetas: Vec<Derivation> = theta_images
        .into_iter()
        .map(|images| Derivation::new(fiber_gens, images, 0))
        .collect::<Result<_>>()?;

    let mut commutation_failures = Vec::new();
    for (i, theta) in thetas.iter().enumerate() {
        for w in 0..nf {
            let lhs = theta.apply(fiber_gens, m.fiber().d_of(w))?;
            let rhs = m.fiber().apply_d(theta.image_of(w))?;
            let defect = lhs.sub(&rhs);
            if !defect.is_zero() {
                commutation_failures.push((i, w, defect));
            }
        }
    }

    Ok(FiberDerivationSet {
        thetas,
        remainders,
        commutation_failures,
    })
}

/// The induced action of one twisting derivation on fiber cohomology.
#[derive(Debug, Clone)]
pub struct ThetaAction {
    pub base_gen: GenId,
    /// One matrix per degree `0..=bound` of the fiber cohomology.
    pub matrices: Vec<QMatrix>,
    pub trivial: bool,
    pub nilpotent: bool,
    /// Smallest `t` with `(theta^*)^t = 0`, when nilpotent.
    pub nilpotency_index: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionVerdict {
    Trivial,
    NilpotentNontrivial,
    NonNilpotent,
}

/// The rational fundamental-group-action report.
#[derive(Debug, Clone)]
pub struct ActionReport {
    pub per_theta: Vec<ThetaAction>,
    pub verdict: ActionVerdict,
}

/// Build every `theta_i^*` on `H^*(fiber)` by mapping representatives and
/// reducing. Triviality and nilpotency are decided exactly; for a verified
/// Poincare duality fiber, a nilpotent action must kill the top class and
/// that is checked outright.
pub fn action_report(
    m: &RelativeModel,
    fds: &FiberDerivationSet,
    fiber_h: &CohomologyRing,
    fiber_ps: Option<&PoincareStructure>,
) -> Result<ActionReport> {
    if !fds.commutation_failures.is_empty() {
        return Err(Error::InvalidRelativeModel(
            "theta does not commute with the fiber differential".into(),
        ));
    }
    let fiber_gens = m.fiber().generators();
    let bound = fiber_h.max_degree();
    let mut per_theta = Vec::with_capacity(fds.thetas.len());
    let mut all_trivial = true;
    let mut all_nilpotent = true;
    for (i, theta) in fds.thetas.iter().enumerate() {
        let mut matrices = Vec::with_capacity(bound as usize + 1);
        for k in 0..=bound {
            let betti = fiber_h.betti(k);
            let mut mat = QMatrix::zeros(betti, betti);
            for j in 0..betti {
                let rep = fiber_h.representative(k, j)?;
                let image = theta.apply(fiber_gens, &rep)?;
                let coords = fiber_h.reduce_to_class(&image)?;
                if !coords.is_zero() {
                    for (r, c) in coords.coords.into_iter().enumerate() {
                        mat.set(r, j, c);
                    }
                }
            }
            matrices.push(mat);
        }
        let trivial = matrices.iter().all(|m| m.is_zero());
        let (nilpotent, nilpotency_index) = nilpotency_of_blocks(&matrices)?;
        if let (Some(ps), true) = (fiber_ps, nilpotent) {
            let top = &matrices[ps.formal_dim as usize];
            if !top.is_zero() {
                return Err(Error::InvalidRelativeModel(
                    "nilpotent theta* fails to kill the top class".into(),
                ));
            }
        }
        all_trivial &= trivial;
        all_nilpotent &= nilpotent;
        per_theta.push(ThetaAction {
            base_gen: i,
            matrices,
            trivial,
            nilpotent,
            nilpotency_index,
        });
    }
    let verdict = if !all_nilpotent {
        ActionVerdict::NonNilpotent
    } else if all_trivial {
        ActionVerdict::Trivial
    } else {
        ActionVerdict::NilpotentNontrivial
    };
    Ok(ActionReport { per_theta, verdict })
}

use crate::linalg::nilpotency_of_blocks;

/// Outcome of the cup-product action probe: look for a `D`-cocycle lift of a
/// fiber class and test whether multiplying by a base class kills it.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub a_nonzero: bool,
    pub omega_nonzero: bool,
    pub lift_found: bool,
    pub lift: Option<Polynomial>,
    pub product_class_zero: Option<bool>,
    pub detects_nontrivial_action: bool,
}

/// Search for a total cocycle restricting to `omega`, then evaluate
/// `[a * lift]` in the total cohomology. A missing lift leaves the probe
/// inconclusive (the restriction map is not surjective onto `omega`).
pub fn prop53_probe(
    m: &RelativeModel,
    a: &Polynomial,
    omega: &Polynomial,
    base_h: &CohomologyRing,
    fiber_h: &CohomologyRing,
    total_h: &CohomologyRing,
) -> Result<ProbeReport> {
    let a_degree = a
        .homogeneous_degree()?
        .ok_or_else(|| Error::Precondition("the base class a must be nonzero".into()))?;
    if a_degree != 1 {
        return Err(Error::Precondition(format!(
            "a must have degree 1, got {a_degree}"
        )));
    }
    let k = omega
        .homogeneous_degree()?
        .ok_or_else(|| Error::Precondition("omega must be nonzero".into()))?;
    for id in 0..m.fiber().generators().len() {
        if m.fiber().generators().degree(id) < k {
            return Err(Error::Precondition(format!(
                "fiber is not ({}-1)-connected: generator `{}` has degree {}",
                k,
                m.fiber().generators().name(id),
                m.fiber().generators().degree(id)
            )));
        }
    }

    let a_cls = base_h.reduce_to_class(a)?;
    let omega_cls = fiber_h.reduce_to_class(omega)?;
    let a_nonzero = !a_cls.is_zero();
    let omega_nonzero = !omega_cls.is_zero();

    // lift search: D x = 0 and [rho(x)] = [omega], solved jointly
    let data = total_h.data();
    let slot = data.slot(k)?;
    let dim = slot.basis.len();
    let dmat = &data.dmats[k as usize];
    let proj = fiber_class_of_total_matrix(m, fiber_h, k, &slot.basis)?;
    let nrows = dmat.nrows() + proj.nrows();
    let mut system = QMatrix::zeros(nrows, dim);
    let mut rhs = vec![scalar::zero(); nrows];
    for r in 0..dmat.nrows() {
        for c in 0..dim {
            system.set(r, c, dmat.get(r, c).clone());
        }
    }
    for r in 0..proj.nrows() {
        for c in 0..dim {
            system.set(dmat.nrows() + r, c, proj.get(r, c).clone());
        }
        rhs[dmat.nrows() + r] = omega_cls.coords[r].clone();
    }
    let lift_vec = solve(&system, &rhs)?;

    let (lift_found, lift, product_class_zero) = match lift_vec {
        None => (false, None, None),
        Some(x) => {
            let lift = Polynomial::from_vector(&slot.basis, &x);
            let a_total = m.base_to_total(a)?;
            let product = a_total.mul(m.total().generators(), &lift)?;
            let zero = total_h.reduce_to_class(&product)?.is_zero();
            (true, Some(lift), Some(zero))
        }
    };

    let detects = a_nonzero && omega_nonzero && product_class_zero == Some(true);
    Ok(ProbeReport {
        a_nonzero,
        omega_nonzero,
        lift_found,
        lift,
        product_class_zero,
        detects_nontrivial_action: detects,
    })
}

/// Matrix taking total degree-`k` cochain coordinates to fiber class
/// coordinates through `rho`.
fn fiber_class_of_total_matrix(
    m: &RelativeModel,
    fiber_h: &CohomologyRing,
    k: u32,
    total_basis: &[crate::monomial::Monomial],
) -> Result<QMatrix> {
    let proj = fiber_h.class_projection_matrix(k)?;
    let fiber_slot_basis = fiber_h.basis(k)?;
    let fiber_index = crate::basis::basis_index(fiber_slot_basis);
    let mut out = QMatrix::zeros(proj.nrows(), total_basis.len());
    for (j, mono) in total_basis.iter().enumerate() {
        let p = Polynomial::from_term(scalar::one(), mono.clone());
        let projected = m.total_to_fiber(&p)?;
        if projected.is_zero() {
            continue;
        }
        let v = projected.to_vector(&fiber_index, fiber_slot_basis.len())?;
        let coords = proj.apply(&v)?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// TNCZ verdict: is `H(rho): H^*(total) -> H^*(fiber)` surjective degreewise,
/// and does the vector-space tensor decomposition of ranks hold?
#[derive(Debug, Clone)]
pub struct TnczReport {
    pub surjective_per_degree: Vec<(u32, bool)>,
    pub tncz: bool,
    pub dimension_identity: bool,
    pub total_sum: usize,
    pub base_sum: usize,
    pub fiber_sum: usize,
}

pub fn tncz_check(
    m: &RelativeModel,
    base_h: &CohomologyRing,
    fiber_h: &CohomologyRing,
    total_h: &CohomologyRing,
) -> Result<TnczReport> {
    let bound = fiber_h.max_degree();
    let mut surjective_per_degree = Vec::with_capacity(bound as usize + 1);
    let mut tncz = true;
    for k in 0..=bound {
        let betti_f = fiber_h.betti(k);
        let mut image = crate::linalg::RowSpace::new(betti_f);
        for j in 0..total_h.betti(k) {
            let rep = total_h.representative(k, j)?;
            let projected = m.total_to_fiber(&rep)?;
            if projected.is_zero() {
                continue;
            }
            let cls = fiber_h.reduce_to_class(&projected)?;
            image.insert(&cls.coords);
        }
        let surjective = image.rank() == betti_f;
        tncz &= surjective;
        surjective_per_degree.push((k, surjective));
    }
    let total_sum = total_h.total_rank();
    let base_sum = base_h.total_rank();
    let fiber_sum = fiber_h.total_rank();
    Ok(TnczReport {
        surjective_per_degree,
        tncz,
        dimension_identity: total_sum == base_sum * fiber_sum,
        total_sum,
        base_sum,
        fiber_sum,
    })
}

/// Injectivity of `p^*: H^k(base) -> H^k(total)`, with a kernel witness.
#[derive(Debug, Clone)]
pub struct PstarReport {
    pub degree: u32,
    pub injective: bool,
    pub kernel_witness: Option<Polynomial>,
}

pub fn pstar_injectivity(
    m: &RelativeModel,
    k: u32,
    base_h: &CohomologyRing,
    total_h: &CohomologyRing,
) -> Result<PstarReport> {
    let betti_b = base_h.betti(k);
    let betti_t = total_h.betti(k);
    let mut mat = QMatrix::zeros(betti_t, betti_b);
    for j in 0..betti_b {
        let rep = base_h.representative(k, j)?;
        let total_rep = m.base_to_total(&rep)?;
        let cls = total_h.reduce_to_class(&total_rep)?;
        for (i, c) in cls.coords.into_iter().enumerate() {
            mat.set(i, j, c);
        }
    }
    let injective = mat.rank() == betti_b;
    let kernel_witness = if injective {
        None
    } else {
        kernel_basis(&mat).first().map(|v| {
            let cls = ClassCoords {
                degree: k,
                coords: v.clone(),
            };
            base_h.class_polynomial(&cls)
        })
    }
    .transpose()?;
    Ok(PstarReport {
        degree: k,
        injective,
        kernel_witness,
    })
}

/// The constructive lower-bound certificate: a fiber top representative of
/// maximal word length multiplied by the base volume word is a total cocycle
/// that is provably not exact, certifying `e0(total) >= e0(fiber) + dim(base)`
/// and that the total space carries a nonzero top class.
#[derive(Debug, Clone)]
pub struct E0Certificate {
    pub fiber_e0: u32,
    pub base_dim: u32,
    pub bound: u32,
    pub witness: Polynomial,
    pub fiber_top_representative: Polynomial,
    pub certified: bool,
}

pub fn e0_lower_bound_certificate(
    m: &RelativeModel,
    fiber_h: &CohomologyRing,
    fiber_ps: &PoincareStructure,
) -> Result<E0Certificate> {
    let top_report: ToomerReport = e0_top_class(m.fiber(), fiber_h, fiber_ps)?;
    debug_assert_eq!(top_report.method, E0Method::TopClassRepresentative);
    let mu = top_report
        .representative
        .clone()
        .ok_or_else(|| Error::Precondition("top-class search returned no representative".into()))?;
    let n = m.base_count();

    // volume word v_1 ... v_n of the base
    let total_gens = m.total().generators();
    let volume = Polynomial::from_term(
        scalar::one(),
        crate::monomial::Monomial::from_sorted_factors(
            total_gens,
            (0..n).map(|i| (i, 1)).collect(),
        )?,
    );
    let witness = volume.mul(total_gens, &m.fiber_to_total(&mu)?)?;

    let d_witness = m.total().apply_d(&witness)?;
    if !d_witness.is_zero() {
        return Err(Error::InvalidRelativeModel(
            "certificate witness is not a cocycle".into(),
        ));
    }
    if d_preimage(m.total(), &witness)?.is_some() {
        return Err(Error::InvalidRelativeModel(
            "certificate witness is exact; the model contradicts the lower bound".into(),
        ));
    }
    Ok(E0Certificate {
        fiber_e0: top_report.e0,
        base_dim: n as u32,
        bound: top_report.e0 + n as u32,
        witness,
        fiber_top_representative: mu,
        certified: true,
    })
}

/// Result of the circle untwisting algorithm.
#[derive(Debug, Clone)]
pub enum UntwistOutcome {
    /// An explicit isomorphism from the product model onto the given model.
    Untwisted(UntwistIsomorphism),
    /// A twist survives: `theta(gen)` is a non-exact fiber cocycle.
    Obstructed {
        fiber_gen: GenId,
        obstruction: Polynomial,
    },
}

#[derive(Debug, Clone)]
pub struct UntwistIsomorphism {
    /// Image of each total generator under the isomorphism
    /// `(Lambda(v) (x) Lambda W, 1 (x) d_W) -> (Lambda(v) (x) Lambda W, D)`.
    pub images: Vec<Polynomial>,
    /// Stage-1 solutions `d_W(eta_i) = theta(x_i)` per even fiber generator.
    pub etas: Vec<(GenId, Polynomial)>,
    /// Stage-3 solutions `d_W(zeta_j) = theta'(y_j)` per odd fiber generator.
    pub zetas: Vec<(GenId, Polynomial)>,
}

/// Untwist a relative model over the circle with an F0-shaped fiber by two
/// unipotent changes of basis `x_i -> x_i + v eta_i`, `y_j -> y_j + v zeta_j`.
/// Stage 1 can obstruct (a genuinely twisted model); stage 3 is solvable
/// whenever the fiber has no odd cohomology in the relevant degrees.
pub fn untwist_over_circle(m: &RelativeModel) -> Result<UntwistOutcome> {
    if m.base_count() != 1 {
        return Err(Error::Precondition(format!(
            "untwisting needs a circle base, got {} base generators",
            m.base_count()
        )));
    }
    let shape = m.fiber().f0_shape();
    if !shape.ok {
        return Err(Error::Precondition(format!(
            "fiber is not F0-shaped: {}",
            shape.failures.join("; ")
        )));
    }
    let report = validate_relative_model(m)?;
    if !report.is_valid() {
        return Err(Error::InvalidRelativeModel(
            "model fails validation before untwisting".into(),
        ));
    }

    let fds = extract_fiber_derivations(m)?;
    let theta = &fds.thetas[0];
    let fiber = m.fiber();

    // Stage 1: eta_i with d_W(eta_i) = theta(x_i) for the even generators.
    let mut etas: Vec<(GenId, Polynomial)> = Vec::new();
    for &x in &shape.evens {
        let tx = theta.image_of(x);
        if tx.is_zero() {
            continue;
        }
        match d_preimage(fiber, tx)? {
            Some(eta) => etas.push((x, eta)),
            None => {
                return Ok(UntwistOutcome::Obstructed {
                    fiber_gen: x,
                    obstruction: tx.clone(),
                })
            }
        }
    }

    // Stage 2: conjugate by phi(x_i) = x_i + v eta_i.
    let total_gens = m.total().generators().clone();
    let v = Polynomial::generator(&total_gens, 0)?;
    let to_total = |fiber_id: GenId| fiber_id + 1;
    let phi = Substitution::from_overrides(
        &total_gens,
        etas.iter()
            .map(|(x, eta)| {
                let xt = Polynomial::generator(&total_gens, to_total(*x))?;
                Ok((
                    to_total(*x),
                    xt.add(&v.mul(&total_gens, &m.fiber_to_total(eta)?)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let phi_inv = Substitution::from_overrides(
        &total_gens,
        etas.iter()
            .map(|(x, eta)| {
                let xt = Polynomial::generator(&total_gens, to_total(*x))?;
                Ok((
                    to_total(*x),
                    xt.sub(&v.mul(&total_gens, &m.fiber_to_total(eta)?)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let conjugated = conjugate_differential(m, &phi, &phi_inv)?;
    for &x in &shape.evens {
        if !conjugated.d_total_of_fiber(x).is_zero() {
            return Err(Error::InvalidRelativeModel(format!(
                "stage 2 failed: D'({}) != 0 after untwisting the even part",
                fiber.generators().name(x)
            )));
        }
    }

    // Stage 3: zeta_j with d_W(zeta_j) = theta'(y_j) for the odd generators.
    let fds2 = extract_fiber_derivations(&conjugated)?;
    let theta2 = &fds2.thetas[0];
    let mut zetas: Vec<(GenId, Polynomial)> = Vec::new();
    for &y in &shape.odds {
        let ty = theta2.image_of(y);
        if ty.is_zero() {
            continue;
        }
        match d_preimage(fiber, ty)? {
            Some(zeta) => zetas.push((y, zeta)),
            None => {
                // only possible when the fiber has odd cohomology, i.e. it
                // was F0-shaped but not an F0 model
                return Ok(UntwistOutcome::Obstructed {
                    fiber_gen: y,
                    obstruction: ty.clone(),
                });
            }
        }
    }

    // Stage 4: conjugate by phi'(y_j) = y_j + v zeta_j and verify the result
    // is exactly the product differential.
    let phi2 = Substitution::from_overrides(
        &total_gens,
        zetas
            .iter()
            .map(|(y, zeta)| {
                let yt = Polynomial::generator(&total_gens, to_total(*y))?;
                Ok((
                    to_total(*y),
                    yt.add(&v.mul(&total_gens, &m.fiber_to_total(zeta)?)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let phi2_inv = Substitution::from_overrides(
        &total_gens,
        zetas
            .iter()
            .map(|(y, zeta)| {
                let yt = Polynomial::generator(&total_gens, to_total(*y))?;
                Ok((
                    to_total(*y),
                    yt.sub(&v.mul(&total_gens, &m.fiber_to_total(zeta)?)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let final_model = conjugate_differential(&conjugated, &phi2, &phi2_inv)?;
    let product = RelativeModel::product(m.base().clone(), fiber.clone())?;
    if final_model.total() != product.total() {
        return Err(Error::InvalidRelativeModel(
            "stage 4 failed: conjugated differential is not the product differential".into(),
        ));
    }

    // composed isomorphism psi = phi . phi'
    let mut images = Vec::with_capacity(total_gens.len());
    for id in 0..total_gens.len() {
        let g = Polynomial::generator(&total_gens, id)?;
        images.push(phi.apply(&total_gens, &phi2.apply(&total_gens, &g)?)?);
    }
    // cochain map check: D(psi(g)) = psi(d_product(g)) on every generator
    let psi = Substitution::new(&total_gens, images.clone())?;
    for id in 0..total_gens.len() {
        let lhs = m
            .total()
            .apply_d(&psi.apply(&total_gens, &Polynomial::generator(&total_gens, id)?)?)?;
        let rhs = psi.apply(&total_gens, product.total().d_of(id))?;
        if lhs != rhs {
            return Err(Error::InvalidRelativeModel(
                "composed untwisting map is not a cochain map".into(),
            ));
        }
    }

    Ok(UntwistOutcome::Untwisted(UntwistIsomorphism {
        images,
        etas,
        zetas,
    }))
}

/// Build the relative model with differential `phi_inv . D . phi`.
fn conjugate_differential(
    m: &RelativeModel,
    phi: &Substitution,
    phi_inv: &Substitution,
) -> Result<RelativeModel> {
    let total_gens = m.total().generators();
    let nb = m.base_count();
    let mut overrides = Vec::new();
    for fiber_id in 0..m.fiber().generators().len() {
        let g = Polynomial::generator(total_gens, nb + fiber_id)?;
        let image = phi_inv.apply(total_gens, &m.total().apply_d(&phi.apply(total_gens, &g)?)?)?;
        overrides.push((fiber_id, image));
    }
    RelativeModel::new(m.base().clone(), m.fiber().clone(), overrides)
}

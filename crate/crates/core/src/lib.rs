//! Exact-arithmetic engine for finite commutative differential graded
//! algebras: graded-commutative polynomial arithmetic over Q, cohomology with
//! representatives, Chevalley-Eilenberg models of nilpotent Lie algebras, the
//! word-length (Toomer) filtration, and twisting analysis of relative models
//! of fibrations over nilmanifolds.

pub mod basis;
pub mod cdga;
pub mod cohomology;
pub mod corpus;
pub mod derivation;
pub mod error;
pub mod fibration;
pub mod generators;
pub mod lie;
pub mod linalg;
pub mod monomial;
pub mod polynomial;
pub mod presented;
pub mod scalar;
pub mod toomer;

pub use basis::{basis_index, monomial_basis};
pub use cdga::{Cdga, F0ShapeReport, ValidationReport};
pub use cohomology::{
    d_preimage, poincare_structure, signature, ClassCoords, CohomologyRing, PdOutcome,
    PoincareStructure,
};
pub use derivation::{Derivation, Substitution};
pub use error::{Error, Result};
pub use fibration::{
    action_report, e0_lower_bound_certificate, extract_fiber_derivations, prop53_probe,
    pstar_injectivity, tncz_check, untwist_over_circle, validate_relative_model, ActionReport,
    ActionVerdict, E0Certificate, FiberDerivationSet, ProbeReport, PstarReport, RelativeModel,
    RelativeReport, ThetaAction, TnczReport, UntwistIsomorphism, UntwistOutcome,
};
pub use generators::{GenId, GeneratorSymbol, Generators};
pub use lie::{
    ce_cdga_unchecked, chevalley_eilenberg, torus_test, validate_lie, LieAlgebraSpec, LieReport,
    Nilpotency,
};
pub use monomial::{normalize_product, Monomial, Sign};
pub use polynomial::{Homogeneity, Polynomial};
pub use presented::{
    derivation_space, nilpotent_derivation_decision, DerivationDecision, PresentedRing,
    RingDerivation,
};
pub use scalar::Scalar;
pub use toomer::{
    e0_of_class, e0_of_space, e0_top_class, truncate_model, E0Method, ToomerReport, TruncatedModel,
};

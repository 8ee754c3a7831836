//! Subcommand implementations over a resolved document.

use cdga_core::{
    self as core, action_report, chevalley_eilenberg, e0_lower_bound_certificate, e0_of_class,
    e0_of_space, e0_top_class, extract_fiber_derivations, nilpotent_derivation_decision,
    poincare_structure, prop53_probe, pstar_injectivity, tncz_check, torus_test,
    untwist_over_circle, validate_lie, validate_relative_model, Cdga, CohomologyRing,
    DerivationDecision, Nilpotency, PdOutcome, PoincareStructure, RelativeModel, UntwistOutcome,
};

use crate::dsl::{parse_poly_expr, print_algebra, Item, SpecDocument};
use crate::report::{OutputFormat, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Rendered output plus process exit code.
pub struct Outcome {
    pub text: String,
    pub exit: i32,
}

#[derive(Debug)]
pub struct CmdError {
    pub message: String,
    pub exit: i32,
}

impl CmdError {
    fn new(message: impl Into<String>, exit: i32) -> Self {
        CmdError {
            message: message.into(),
            exit,
        }
    }
}

impl From<core::Error> for CmdError {
    fn from(e: core::Error) -> Self {
        CmdError::new(e.to_string(), EXIT_VALIDATION)
    }
}

impl From<crate::dsl::ParseError> for CmdError {
    fn from(e: crate::dsl::ParseError) -> Self {
        CmdError::new(e.to_string(), EXIT_PARSE)
    }
}

type CmdResult = Result<Outcome, CmdError>;

fn select<'a>(
    doc: &'a SpecDocument,
    item: Option<&str>,
    kinds: &[&str],
) -> Result<(&'a str, &'a Item), CmdError> {
    if let Some(name) = item {
        let found = doc
            .items
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| CmdError::new(format!("no item named `{name}`"), EXIT_PARSE))?;
        if !kinds.contains(&found.1.kind()) {
            return Err(CmdError::new(
                format!(
                    "item `{name}` has kind {} but this command needs {}",
                    found.1.kind(),
                    kinds.join(" or ")
                ),
                EXIT_PARSE,
            ));
        }
        return Ok((found.0.as_str(), &found.1));
    }
    let candidates: Vec<&(String, Item)> = doc
        .items
        .iter()
        .filter(|(_, i)| kinds.contains(&i.kind()))
        .collect();
    if candidates.len() == 1 {
        return Ok((candidates[0].0.as_str(), &candidates[0].1));
    }
    // constituents of a fibration defer to the fibration itself
    let referenced: Vec<&str> = doc
        .items
        .iter()
        .filter_map(|(_, i)| match i {
            Item::Fibration {
                base_name,
                fiber_name,
                ..
            } => Some([base_name.as_str(), fiber_name.as_str()]),
            _ => None,
        })
        .flatten()
        .collect();
    let top_level: Vec<&&(String, Item)> = candidates
        .iter()
        .filter(|(n, _)| !referenced.contains(&n.as_str()))
        .collect();
    if top_level.len() == 1 {
        return Ok((top_level[0].0.as_str(), &top_level[0].1));
    }
    match candidates.len() {
        0 => Err(CmdError::new(
            format!("the document has no {} item", kinds.join("/")),
            EXIT_PARSE,
        )),
        _ => Err(CmdError::new(
            format!(
                "several candidate items ({}); pick one with --item",
                candidates
                    .iter()
                    .map(|(n, _)| n.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            EXIT_PARSE,
        )),
    }
}

/// The cdga a space-level command operates on: an algebra itself, the CE
/// model of a Lie item, or the total model of a fibration.
fn model_of(name: &str, item: &Item) -> Result<(Cdga, String), CmdError> {
    match item {
        Item::Algebra(c) => Ok((c.clone(), name.to_string())),
        Item::Lie(l) => {
            let c = chevalley_eilenberg(l)?;
            Ok((c, format!("{name} (Chevalley-Eilenberg model)")))
        }
        Item::Fibration { model, .. } => {
            Ok((model.total().clone(), format!("{name} (total model)")))
        }
        Item::Ring(_) => Err(CmdError::new(
            "this command applies to algebra, lie, or fibration items",
            EXIT_PARSE,
        )),
    }
}

/// Formal-dimension candidate: the generator count for a nilmanifold model,
/// otherwise the elliptic-model degree count
/// `sum |odd| - sum (|even| - 1)`. Always verified before use.
fn infer_formal_dim(c: &Cdga) -> u32 {
    let gens = c.generators();
    if gens.is_empty() {
        return 0;
    }
    let mut sum_odd: i64 = 0;
    let mut sum_even: i64 = 0;
    for id in 0..gens.len() {
        let d = gens.degree(id) as i64;
        if d % 2 == 1 {
            sum_odd += d;
        } else {
            sum_even += d - 1;
        }
    }
    (sum_odd - sum_even).max(0) as u32
}

struct PdContext {
    h: CohomologyRing,
    formal_dim: u32,
    ps: Option<PoincareStructure>,
    pd_reason: Option<String>,
}

/// Compute cohomology through a window covering the (given or inferred)
/// formal dimension and verify Poincare duality against it.
fn pd_context(
    c: &Cdga,
    formal_dim: Option<u32>,
    max_degree: Option<u32>,
) -> Result<PdContext, CmdError> {
    let m = formal_dim.unwrap_or_else(|| infer_formal_dim(c));
    let bound = max_degree.unwrap_or(m).max(m);
    let h = CohomologyRing::compute(c, bound)?;
    match poincare_structure(&h, m)? {
        PdOutcome::Valid(ps) => Ok(PdContext {
            h,
            formal_dim: m,
            ps: Some(ps),
            pd_reason: None,
        }),
        PdOutcome::Failed { degree, reason } => Ok(PdContext {
            h,
            formal_dim: m,
            ps: None,
            pd_reason: Some(format!("degree {degree}: {reason}")),
        }),
    }
}

// ---- check ----

pub fn cmd_check(doc: &SpecDocument, item: Option<&str>, format: OutputFormat) -> CmdResult {
    let (name, item) = select(doc, item, &["algebra", "lie", "fibration", "ring"])?;
    let mut r = Report::new("check");
    r.push("item", name);
    r.push("kind", item.kind());
    let exit = match item {
        Item::Algebra(c) => {
            let v = c.validate()?;
            r.push("d_squared_zero", v.d_squared_zero());
            for (id, poly) in &v.d_squared_failures {
                r.push(
                    format!("d_squared.{}", c.generators().name(*id)),
                    poly.display(c.generators()),
                );
            }
            r.push("sullivan", v.is_sullivan);
            if let Some(order) = &v.sullivan_order {
                let names: Vec<&str> = order.iter().map(|&id| c.generators().name(id)).collect();
                r.push("sullivan_order", names.join(" "));
            }
            r.push("minimal", v.is_minimal);
            for id in &v.non_minimal_witnesses {
                r.push("non_minimal_generator", c.generators().name(*id));
            }
            let f0 = c.f0_shape();
            r.push("f0_shape", f0.ok);
            if v.d_squared_zero() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Item::Lie(l) => {
            let v = validate_lie(l);
            r.push("jacobi", v.jacobi_ok);
            if let Some((i, j, k, defect)) = &v.jacobi_witness {
                r.push(
                    "jacobi_witness",
                    format!(
                        "(X{}, X{}, X{}) defect {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        lie_vector(defect)
                    ),
                );
            }
            match &v.nilpotency {
                Nilpotency::Class(c) => r.push("nilpotency_class", c),
                Nilpotency::NotNilpotent { stable_dim } => {
                    r.push("nilpotency_class", "not nilpotent");
                    r.push("lcs_stable_dim", stable_dim);
                }
            }
            r.push("lcs_dims", join(&v.lcs_dims));
            r.push("b1", v.b1);
            if v.jacobi_ok && v.is_nilpotent() {
                r.push("torus", torus_test(l)?);
            }
            if v.jacobi_ok {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Item::Fibration { model, .. } => {
            let v = validate_relative_model(model)?;
            r.push("valid", v.is_valid());
            let gens = model.total().generators();
            for (id, poly) in &v.d_squared_failures {
                r.push(format!("d_squared.{}", gens.name(*id)), poly.display(gens));
            }
            for (fiber_id, expected, found) in &v.fiber_part_failures {
                r.push(
                    format!("fiber_part.{}", model.fiber().generators().name(*fiber_id)),
                    format!(
                        "expected {} found {}",
                        expected.display(model.fiber().generators()),
                        found.display(model.fiber().generators())
                    ),
                );
            }
            r.push("relative_minimal", v.relative_minimal);
            if v.is_valid() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Item::Ring(ring) => {
            r.push("dims", join(&ring.dims()));
            match ring.poincare_check()? {
                Ok(()) => r.push("poincare_duality", true),
                Err(reason) => {
                    r.push("poincare_duality", false);
                    r.push("poincare_failure", reason);
                }
            }
            EXIT_OK
        }
    };
    Ok(Outcome {
        text: r.render(format),
        exit,
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn lie_vector(coeffs: &[core::Scalar]) -> String {
    use num_traits::Zero;
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("{}*X{}", c, k + 1))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---- cohomology ----

pub fn cmd_cohomology(
    doc: &SpecDocument,
    item: Option<&str>,
    max_degree: u32,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["algebra", "lie", "fibration"])?;
    let (c, label) = model_of(name, item)?;
    let h = CohomologyRing::compute(&c, max_degree)?;
    let mut r = Report::new("cohomology");
    r.push("item", label);
    r.push("max_degree", max_degree);
    r.push("betti", join(&h.betti_vector()));
    r.push("total_rank", h.total_rank());
    r.push("euler_characteristic", h.euler_characteristic());
    for k in 0..=max_degree {
        for i in 0..h.betti(k) {
            r.push(
                format!("class.{k}.{i}"),
                h.representative(k, i)?.display(c.generators()),
            );
        }
    }
    Ok(Outcome {
        text: r.render(format),
        exit: EXIT_OK,
    })
}

// ---- e0 ----

pub fn cmd_e0(
    doc: &SpecDocument,
    item: Option<&str>,
    formal_dim: Option<u32>,
    max_degree: Option<u32>,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["algebra", "lie", "fibration"])?;
    let (c, label) = model_of(name, item)?;
    let ctx = pd_context(&c, formal_dim, max_degree)?;
    let mut r = Report::new("e0");
    r.push("item", label);
    r.push("formal_dim", ctx.formal_dim);
    r.push("betti", join(&ctx.h.betti_vector()));

    match &ctx.ps {
        Some(ps) => {
            r.push("pd_verified", true);
            let scan = e0_of_space(&c, &ctx.h, true)?;
            let top = e0_top_class(&c, &ctx.h, ps)?;
            let top_cls = ctx.h.reduce_to_class(&ps.top_rep)?;
            let by_class = e0_of_class(&c, &ctx.h, &top_cls)?;
            r.push("e0", scan.e0);
            r.push("e0_injectivity_scan", scan.e0);
            r.push("e0_top_class", top.e0);
            r.push("e0_of_top_class", by_class);
            if let Some(rep) = &top.representative {
                r.push("top_class_representative", rep.display(c.generators()));
            }
            if let Some(w) = &scan.killed_witness {
                r.push("killed_by_previous_level", w.display(c.generators()));
            }
            r.push(
                "cat_sandwich",
                format!("{} <= cat <= {} = dim", scan.e0, ctx.formal_dim),
            );
            if !scan.minimal_presentation {
                r.warn(
                    "input is not a minimal presentation; the word-length filtration is \
                     presentation dependent",
                );
            }
            let exit = if scan.e0 == top.e0 && top.e0 == by_class {
                EXIT_OK
            } else {
                r.warn("the two e0 characterizations disagree (engine inconsistency)");
                EXIT_VALIDATION
            };
            Ok(Outcome {
                text: r.render(format),
                exit,
            })
        }
        None => {
            r.push("pd_verified", false);
            if let Some(reason) = &ctx.pd_reason {
                r.push("pd_failure", reason);
            }
            let scan = e0_of_space(&c, &ctx.h, false)?;
            r.push("e0_lower_bound", scan.e0);
            r.warn(format!(
                "e0 >= {} within the degree window 0..={}; not certified (no verified \
                 Poincare duality)",
                scan.e0,
                ctx.h.max_degree()
            ));
            Ok(Outcome {
                text: r.render(format),
                exit: EXIT_INCONCLUSIVE,
            })
        }
    }
}

// ---- cuplength ----

pub fn cmd_cuplength(
    doc: &SpecDocument,
    item: Option<&str>,
    formal_dim: Option<u32>,
    max_degree: Option<u32>,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["algebra", "lie", "fibration"])?;
    let (c, label) = model_of(name, item)?;
    let ctx = pd_context(&c, formal_dim, max_degree)?;
    let (length, witness) = ctx.h.cup_length(ctx.h.max_degree())?;
    let mut r = Report::new("cuplength");
    r.push("item", label);
    r.push("bound", ctx.h.max_degree());
    r.push("cup_length", length);
    if let Some(w) = witness {
        r.push("witness", w.display(c.generators()));
    }
    let exit = if ctx.ps.is_some() {
        r.push("pd_verified", true);
        EXIT_OK
    } else {
        r.push("pd_verified", false);
        r.warn("cup length within the computed window only");
        EXIT_INCONCLUSIVE
    };
    Ok(Outcome {
        text: r.render(format),
        exit,
    })
}

// ---- ce ----

pub fn cmd_ce(doc: &SpecDocument, item: Option<&str>, format: OutputFormat) -> CmdResult {
    let (name, item) = select(doc, item, &["lie"])?;
    let Item::Lie(l) = item else { unreachable!() };
    let report = validate_lie(l);
    if !report.jacobi_ok {
        return Err(CmdError::new(
            "Jacobi identity fails; no Chevalley-Eilenberg model",
            EXIT_VALIDATION,
        ));
    }
    if !report.is_nilpotent() {
        return Err(CmdError::new(
            "Lie algebra is not nilpotent; it does not model a nilmanifold",
            EXIT_VALIDATION,
        ));
    }
    let c = chevalley_eilenberg(l)?;
    let text = print_algebra(&format!("{name}_ce"), &c);
    let _ = format;
    Ok(Outcome {
        text,
        exit: EXIT_OK,
    })
}

// ---- signature ----

pub fn cmd_signature(
    doc: &SpecDocument,
    item: Option<&str>,
    formal_dim: Option<u32>,
    max_degree: Option<u32>,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["algebra", "lie", "fibration"])?;
    let (c, label) = model_of(name, item)?;
    let ctx = pd_context(&c, formal_dim, max_degree)?;
    let mut r = Report::new("signature");
    r.push("item", label);
    r.push("formal_dim", ctx.formal_dim);
    match &ctx.ps {
        Some(ps) => {
            r.push("pd_verified", true);
            r.push("signature", core::signature(ps)?);
            Ok(Outcome {
                text: r.render(format),
                exit: EXIT_OK,
            })
        }
        None => {
            r.push("pd_verified", false);
            if let Some(reason) = &ctx.pd_reason {
                r.push("pd_failure", reason);
            }
            r.warn("signature needs a verified Poincare duality structure");
            Ok(Outcome {
                text: r.render(format),
                exit: EXIT_VALIDATION,
            })
        }
    }
}

// ---- fibration helpers ----

fn fibration_of(item: &Item) -> &RelativeModel {
    match item {
        Item::Fibration { model, .. } => model,
        _ => unreachable!("select() filtered on kind"),
    }
}

fn fiber_pd(
    model: &RelativeModel,
    fiber_dim: Option<u32>,
) -> Result<(CohomologyRing, u32, Option<PoincareStructure>), CmdError> {
    let mf = fiber_dim.unwrap_or_else(|| infer_formal_dim(model.fiber()));
    let fiber_h = CohomologyRing::compute(model.fiber(), mf)?;
    let ps = match poincare_structure(&fiber_h, mf)? {
        PdOutcome::Valid(ps) => Some(ps),
        PdOutcome::Failed { .. } => None,
    };
    Ok((fiber_h, mf, ps))
}

// ---- action ----

pub fn cmd_action(
    doc: &SpecDocument,
    item: Option<&str>,
    fiber_dim: Option<u32>,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["fibration"])?;
    let model = fibration_of(item);
    let v = validate_relative_model(model)?;
    if !v.is_valid() {
        return Err(CmdError::new(
            "model fails validation; run `check` for details",
            EXIT_VALIDATION,
        ));
    }
    let (fiber_h, mf, ps) = fiber_pd(model, fiber_dim)?;
    let fds = extract_fiber_derivations(model)?;
    let report = action_report(model, &fds, &fiber_h, ps.as_ref())?;
    let mut r = Report::new("action");
    r.push("item", name);
    r.push("fiber_formal_dim", mf);
    r.push("fiber_pd_verified", ps.is_some());
    let base_gens = model.base().generators();
    let fiber_gens = model.fiber().generators();
    for (i, theta) in fds.thetas.iter().enumerate() {
        let base_name = base_gens.name(i);
        for w in 0..fiber_gens.len() {
            let image = theta.image_of(w);
            if !image.is_zero() {
                r.push(
                    format!("theta.{base_name}.{}", fiber_gens.name(w)),
                    image.display(fiber_gens),
                );
            }
        }
        let action = &report.per_theta[i];
        r.push(format!("theta.{base_name}.trivial"), action.trivial);
        r.push(format!("theta.{base_name}.nilpotent"), action.nilpotent);
        if let Some(idx) = action.nilpotency_index {
            r.push(format!("theta.{base_name}.nilpotency_index"), idx);
        }
    }
    for (fiber_id, rem) in fds.remainders.iter().enumerate() {
        if !rem.is_zero() {
            r.push(
                format!("chi2.{}", fiber_gens.name(fiber_id)),
                rem.display(model.total().generators()),
            );
        }
    }
    r.push(
        "verdict",
        match report.verdict {
            core::ActionVerdict::Trivial => "trivial",
            core::ActionVerdict::NilpotentNontrivial => "nilpotent-nontrivial",
            core::ActionVerdict::NonNilpotent => "non-nilpotent",
        },
    );
    Ok(Outcome {
        text: r.render(format),
        exit: EXIT_OK,
    })
}

// ---- probe ----

pub fn cmd_probe(
    doc: &SpecDocument,
    item: Option<&str>,
    a_text: &str,
    omega_text: &str,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["fibration"])?;
    let model = fibration_of(item);
    let a = parse_poly_expr(a_text, model.base().generators())?;
    let omega = parse_poly_expr(omega_text, model.fiber().generators())?;
    let k = omega
        .homogeneous_degree()
        .map_err(CmdError::from)?
        .ok_or_else(|| CmdError::new("omega must be nonzero", EXIT_PARSE))?;
    let base_h = CohomologyRing::compute(model.base(), 2)?;
    let fiber_h = CohomologyRing::compute(model.fiber(), k + 1)?;
    let total_h = CohomologyRing::compute(model.total(), k + 1)?;
    let probe = prop53_probe(model, &a, &omega, &base_h, &fiber_h, &total_h)?;
    let mut r = Report::new("probe");
    r.push("item", name);
    r.push("a", a.display(model.base().generators()));
    r.push("omega", omega.display(model.fiber().generators()));
    r.push("a_class_nonzero", probe.a_nonzero);
    r.push("omega_class_nonzero", probe.omega_nonzero);
    r.push("lift_found", probe.lift_found);
    if let Some(lift) = &probe.lift {
        r.push("lift", lift.display(model.total().generators()));
    }
    if let Some(zero) = probe.product_class_zero {
        r.push("product_class_zero", zero);
    }
    r.push("detects_nontrivial_action", probe.detects_nontrivial_action);
    let exit = if probe.lift_found {
        EXIT_OK
    } else {
        r.warn(
            "no D-cocycle lift of omega exists; the probe is inconclusive and the \
                restriction map is not surjective onto omega",
        );
        EXIT_INCONCLUSIVE
    };
    Ok(Outcome {
        text: r.render(format),
        exit,
    })
}

// ---- tncz ----

pub fn cmd_tncz(
    doc: &SpecDocument,
    item: Option<&str>,
    fiber_dim: Option<u32>,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["fibration"])?;
    let model = fibration_of(item);
    let (fiber_h, mf, ps) = fiber_pd(model, fiber_dim)?;
    let n = model.base_count() as u32;
    let base_h = CohomologyRing::compute(model.base(), n)?;
    let total_h = CohomologyRing::compute(model.total(), n + mf)?;
    let report = tncz_check(model, &base_h, &fiber_h, &total_h)?;
    let mut r = Report::new("tncz");
    r.push("item", name);
    r.push("fiber_formal_dim", mf);
    r.push("fiber_pd_verified", ps.is_some());
    for (k, surjective) in &report.surjective_per_degree {
        r.push(format!("surjective.{k}"), surjective);
    }
    r.push("tncz", report.tncz);
    r.push(
        "dimension_identity",
        format!(
            "{} ({} = {} * {})",
            report.dimension_identity, report.total_sum, report.base_sum, report.fiber_sum
        ),
    );
    // p* injectivity in every degree through the base dimension
    for k in 0..=n {
        let p = pstar_injectivity(model, k, &base_h, &total_h)?;
        r.push(format!("pstar_injective.{k}"), p.injective);
    }
    Ok(Outcome {
        text: r.render(format),
        exit: EXIT_OK,
    })
}

// ---- e0bound ----

pub fn cmd_e0bound(
    doc: &SpecDocument,
    item: Option<&str>,
    fiber_dim: Option<u32>,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["fibration"])?;
    let model = fibration_of(item);
    let v = validate_relative_model(model)?;
    if !v.is_valid() {
        return Err(CmdError::new(
            "model fails validation; run `check` for details",
            EXIT_VALIDATION,
        ));
    }
    let (fiber_h, mf, ps) = fiber_pd(model, fiber_dim)?;
    let Some(ps) = ps else {
        return Err(CmdError::new(
            format!("fiber is not a verified Poincare duality model at dimension {mf}"),
            EXIT_VALIDATION,
        ));
    };
    let cert = e0_lower_bound_certificate(model, &fiber_h, &ps)?;
    let mut r = Report::new("e0bound");
    r.push("item", name);
    r.push("fiber_formal_dim", mf);
    r.push("fiber_e0", cert.fiber_e0);
    r.push("base_dim", cert.base_dim);
    r.push("bound", cert.bound);
    r.push("certified", cert.certified);
    r.push(
        "fiber_top_representative",
        cert.fiber_top_representative
            .display(model.fiber().generators()),
    );
    r.push(
        "witness_cocycle",
        cert.witness.display(model.total().generators()),
    );
    r.push(
        "e0_inequality",
        format!("e0(total) >= e0(fiber) + dim(base) = {}", cert.bound),
    );
    r.push(
        "cat_inequality",
        format!("cat(total) >= e0(fiber) + dim(base) = {}", cert.bound),
    );
    Ok(Outcome {
        text: r.render(format),
        exit: EXIT_OK,
    })
}

// ---- untwist ----

fn untwist_one(model: &RelativeModel, r: &mut Report, prefix: &str) -> Result<(), CmdError> {
    match untwist_over_circle(model)? {
        UntwistOutcome::Untwisted(iso) => {
            r.push(format!("{prefix}outcome"), "untwisted");
            let gens = model.total().generators();
            for (id, image) in iso.images.iter().enumerate() {
                r.push(
                    format!("{prefix}psi.{}", gens.name(id)),
                    image.display(gens),
                );
            }
            for (x, eta) in &iso.etas {
                r.push(
                    format!("{prefix}eta.{}", model.fiber().generators().name(*x)),
                    eta.display(model.fiber().generators()),
                );
            }
            for (y, zeta) in &iso.zetas {
                r.push(
                    format!("{prefix}zeta.{}", model.fiber().generators().name(*y)),
                    zeta.display(model.fiber().generators()),
                );
            }
        }
        UntwistOutcome::Obstructed {
            fiber_gen,
            obstruction,
        } => {
            r.push(format!("{prefix}outcome"), "obstructed");
            r.push(
                format!("{prefix}obstruction_generator"),
                model.fiber().generators().name(fiber_gen),
            );
            r.push(
                format!("{prefix}obstruction_class"),
                obstruction.display(model.fiber().generators()),
            );
        }
    }
    Ok(())
}

pub fn cmd_untwist(doc: &SpecDocument, item: Option<&str>, format: OutputFormat) -> CmdResult {
    let (name, item) = select(doc, item, &["fibration"])?;
    let model = fibration_of(item);
    let mut r = Report::new("untwist");
    r.push("item", name);
    if model.base_count() == 1 {
        untwist_one(model, &mut r, "")?;
    } else {
        // general base: restrict to each closed degree-1 direction
        r.push("base_generators", model.base_count());
        for id in 0..model.base_count() {
            let gname = model.base().generators().name(id).to_string();
            if !model.base().d_of(id).is_zero() {
                r.push(format!("{gname}.outcome"), "skipped (generator not closed)");
                continue;
            }
            let restricted = model.restrict_to_circle(id)?;
            untwist_one(&restricted, &mut r, &format!("{gname}."))?;
        }
    }
    Ok(Outcome {
        text: r.render(format),
        exit: EXIT_OK,
    })
}

// ---- derivations ----

pub fn cmd_derivations(
    doc: &SpecDocument,
    item: Option<&str>,
    shift: i32,
    nilpotent: bool,
    format: OutputFormat,
) -> CmdResult {
    let (name, item) = select(doc, item, &["ring"])?;
    let Item::Ring(ring) = item else {
        unreachable!()
    };
    let mut r = Report::new("derivations");
    r.push("item", name);
    r.push("shift", shift);
    let space = core::derivation_space(ring, shift)?;
    r.push("dimension", space.len());
    let gens = ring.generators();
    for (i, d) in space.iter().enumerate() {
        for (g, image) in d.images.iter().enumerate() {
            if !image.is_zero() {
                r.push(format!("basis.{i}.{}", gens.name(g)), image.display(gens));
            }
        }
    }
    let mut exit = EXIT_OK;
    if nilpotent {
        if shift != 0 {
            return Err(CmdError::new(
                "--nilpotent applies to degree-zero derivations (shift 0)",
                EXIT_PARSE,
            ));
        }
        match nilpotent_derivation_decision(ring)? {
            DerivationDecision::NoneCertified { reason } => {
                r.push("nilpotent_verdict", "none_certified");
                r.push("reason", reason);
            }
            DerivationDecision::Exists {
                witness,
                nilpotency_index,
            } => {
                r.push("nilpotent_verdict", "exists");
                r.push("nilpotency_index", nilpotency_index);
                for (g, image) in witness.images.iter().enumerate() {
                    if !image.is_zero() {
                        r.push(format!("witness.{}", gens.name(g)), image.display(gens));
                    }
                }
            }
            DerivationDecision::UnknownWithBasis { basis_dim } => {
                r.push("nilpotent_verdict", "unknown");
                r.push("basis_dimension", basis_dim);
                r.warn(
                    "outside the certified shapes; the scan found no nilpotent witness \
                     and the general decision is not attempted",
                );
                exit = EXIT_INCONCLUSIVE;
            }
        }
    }
    Ok(Outcome {
        text: r.render(format),
        exit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_document;

    fn doc(text: &str) -> SpecDocument {
        parse_document(text).unwrap()
    }

    #[test]
    fn check_reports_kt_valid() {
        let d = doc("algebra kt { gen u1:1; gen u2:1; gen u3:1; gen u4:1; d u3 = u1*u2; }");
        let out = cmd_check(&d, None, OutputFormat::Machine).unwrap();
        assert_eq!(out.exit, EXIT_OK);
        assert!(out.text.contains("d_squared_zero = true"));
        assert!(out.text.contains("sullivan = true"));
        assert!(out.text.contains("minimal = true"));
    }

    #[test]
    fn e0_on_heisenberg() {
        let d = doc("algebra h { gen v1:1; gen v2:1; gen v3:1; d v3 = v1*v2; }");
        let out = cmd_e0(&d, None, None, None, OutputFormat::Machine).unwrap();
        assert_eq!(out.exit, EXIT_OK, "{}", out.text);
        assert!(out.text.contains("e0 = 3"), "{}", out.text);
        assert!(out.text.contains("cat_sandwich = 3 <= cat <= 3 = dim"));
    }

    #[test]
    fn e0_window_mode_is_inconclusive() {
        // free even generator: never PD
        let d = doc("algebra a { gen v: 2; }");
        let out = cmd_e0(&d, None, None, Some(4), OutputFormat::Machine).unwrap();
        assert_eq!(out.exit, EXIT_INCONCLUSIVE);
        assert!(out.text.contains("pd_verified = false"));
    }

    #[test]
    fn signature_of_cp2() {
        let d = doc("algebra cp2 { gen x:2; gen y:5; d y = x^3; }");
        let out = cmd_signature(&d, None, None, None, OutputFormat::Machine).unwrap();
        assert_eq!(out.exit, EXIT_OK);
        assert!(out.text.contains("signature = 1"), "{}", out.text);
    }

    #[test]
    fn ce_emits_parseable_dsl() {
        let d = doc("lie heis3 { dim 3; [X1, X2] = X3; }");
        let out = cmd_ce(&d, None, OutputFormat::Machine).unwrap();
        assert_eq!(out.exit, EXIT_OK);
        let reparsed = parse_document(&out.text).unwrap();
        assert_eq!(reparsed.items.len(), 1);
        assert!(out.text.contains("d v3 = -v1*v2"), "{}", out.text);
    }

    #[test]
    fn derivations_nilpotent_on_cp2_ring() {
        let d = doc("ring cp2h { gen x: 2; rel x^3; top 4; }");
        let out = cmd_derivations(&d, None, 0, true, OutputFormat::Machine).unwrap();
        assert_eq!(out.exit, EXIT_OK);
        assert!(out.text.contains("nilpotent_verdict = none_certified"));
    }
}

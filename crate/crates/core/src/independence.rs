//! Epistemic independence of two variables and the independent natural
//! extension of two marginal models.
//!
//! The joint cone of the independent natural extension is generated by
//! `g(X₂)·I_{B₁}(X₁)` for every generator `g` of the second marginal and
//! every `B₁` in the first family or equal to `X₁`, together with the
//! symmetric products. An open generator with support `S` yields an open
//! product generator with support `B₁ × S`.

use crate::cone::{DesirCone, Generator};
use crate::error::{Error, Result};
use crate::family::{EventFamily, FamilyKind};
use crate::lowprev::{CondLowerPrevision, LinearPrevision, LowerPrevision};
use crate::measurability::measurability_witness;
use crate::rational::{format_rational, Rational};
use crate::space::{indicator, Event, Gamble, ProductSpace, Side, SpaceRef};
use num_traits::{Signed, Zero};

fn check_factor(prod: &ProductSpace, side: Side, space: &SpaceRef) -> Result<()> {
    let expected = prod.factor(side);
    if expected != space {
        return Err(Error::SpaceMismatch(
            expected.id().to_string(),
            space.id().to_string(),
        ));
    }
    Ok(())
}

/// Conditioning events on one factor as used to build generators: the
/// family itself plus the whole space. An all-subsets family is replaced by
/// its atoms, which give the same joint model, unless `materialize` is set.
fn conditioning_events(family: &EventFamily, materialize: bool) -> Vec<Event> {
    let space = family.space();
    let mut events = match (family.kind(), materialize) {
        (FamilyKind::AllNonempty, false) => EventFamily::atoms(space).events().to_vec(),
        _ => family.events().to_vec(),
    };
    let full = Event::full(space);
    if !events.contains(&full) {
        events.push(full);
    }
    events
}

/// A queryable restriction of a joint cone to one factor, optionally
/// conditional on an event of the other factor.
#[derive(Debug, Clone, Copy)]
pub struct ConeView<'a> {
    joint: &'a DesirCone,
    prod: &'a ProductSpace,
    side: Side,
    given: Option<&'a Event>,
}

impl ConeView<'_> {
    fn lift(&self, f: &Gamble) -> Result<Gamble> {
        check_factor(self.prod, self.side, f.space())?;
        let ext = self.prod.cylindrical_extension(f, self.side)?;
        match self.given {
            None => Ok(ext),
            Some(b) => ext.mul(
                &self
                    .prod
                    .cylindrical_extension(&indicator(b), self.side.other())?,
            ),
        }
    }

    /// `f(X_i)·I_{B_j}(X_j) ∈ D`.
    pub fn member(&self, f: &Gamble) -> Result<bool> {
        self.joint.member(&self.lift(f)?)
    }
}

/// `marg_i(D) = {f : f(X_i) ∈ D}`.
pub fn marginal_cone<'a>(joint: &'a DesirCone, prod: &'a ProductSpace, side: Side) -> ConeView<'a> {
    ConeView {
        joint,
        prod,
        side,
        given: None,
    }
}

/// `marg_i(D|B_j) = {f : f(X_i)·I_{B_j}(X_j) ∈ D}`.
pub fn conditional_cone<'a>(
    joint: &'a DesirCone,
    prod: &'a ProductSpace,
    side: Side,
    given: &'a Event,
) -> Result<ConeView<'a>> {
    check_factor(prod, side.other(), given.space())?;
    given.require_nonempty()?;
    Ok(ConeView {
        joint,
        prod,
        side,
        given: Some(given),
    })
}

/// The independent natural extension of two marginal cones.
#[derive(Debug, Clone)]
pub struct IndependentProductCone {
    prod: ProductSpace,
    marginals: [DesirCone; 2],
    families: [EventFamily; 2],
    joint: DesirCone,
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
    }
}

/// Products `g(X_target)·I_B(X_other)` for every generator of `cone` and
/// every conditioning event of `family`.
fn product_generators(
    prod: &ProductSpace,
    target: Side,
    cone: &DesirCone,
    family: &EventFamily,
    materialize: bool,
    out: &mut Vec<Generator>,
) -> Result<()> {
    let other = target.other();
    for b in conditioning_events(family, materialize) {
        let on_b = prod.cylindrical_extension(&indicator(&b), other)?;
        let b_ext = prod.extend_event(&b, other)?;
        for g in cone.generators() {
            let gamble = prod.cylindrical_extension(g.gamble(), target)?.mul(&on_b)?;
            let generator = if g.is_exact() {
                Generator::exact(gamble)
            } else {
                let support = prod
                    .extend_event(g.strict_support(), target)?
                    .intersection(&b_ext)?;
                Generator::open(gamble, support)?
            };
            out.push(generator);
        }
    }
    Ok(())
}

impl IndependentProductCone {
    fn build(
        d1: &DesirCone,
        d2: &DesirCone,
        b1: &EventFamily,
        b2: &EventFamily,
        materialize: bool,
    ) -> Result<IndependentProductCone> {
        let prod = ProductSpace::new(d1.space(), d2.space());
        check_factor(&prod, Side::Left, b1.space())?;
        check_factor(&prod, Side::Right, b2.space())?;
        if !d1.is_coherent() || !d2.is_coherent() {
            return Err(Error::IncoherentCone);
        }
        let mut generators = Vec::new();
        product_generators(&prod, Side::Right, d2, b1, materialize, &mut generators)?;
        product_generators(&prod, Side::Left, d1, b2, materialize, &mut generators)?;
        let joint = DesirCone::new(prod.joint(), generators)?;
        Ok(IndependentProductCone {
            prod,
            marginals: [d1.clone(), d2.clone()],
            families: [b1.clone(), b2.clone()],
            joint,
        })
    }

    pub fn prod(&self) -> &ProductSpace {
        &self.prod
    }

    pub fn joint(&self) -> &DesirCone {
        &self.joint
    }

    pub fn marginal_input(&self, side: Side) -> &DesirCone {
        &self.marginals[side_index(side)]
    }

    pub fn family(&self, side: Side) -> &EventFamily {
        &self.families[side_index(side)]
    }

    pub fn marginal(&self, side: Side) -> ConeView<'_> {
        marginal_cone(&self.joint, &self.prod, side)
    }

    pub fn conditional<'a>(&'a self, side: Side, given: &'a Event) -> Result<ConeView<'a>> {
        conditional_cone(&self.joint, &self.prod, side, given)
    }
}

/// `D₁ ⊗ D₂` for the given families. All-subsets families are delegated to
/// atoms.
pub fn ine_cone(
    d1: &DesirCone,
    d2: &DesirCone,
    b1: &EventFamily,
    b2: &EventFamily,
) -> Result<IndependentProductCone> {
    IndependentProductCone::build(d1, d2, b1, b2, false)
}

/// Like [`ine_cone`] but uses every member of an all-subsets family.
pub fn ine_cone_materialized(
    d1: &DesirCone,
    d2: &DesirCone,
    b1: &EventFamily,
    b2: &EventFamily,
) -> Result<IndependentProductCone> {
    IndependentProductCone::build(d1, d2, b1, b2, true)
}

/// `P̲₁ ⊗ P̲₂`: lower previsions of the independent natural extension cone
/// of the two marginal natural extensions.
#[derive(Debug, Clone)]
pub struct IndependentNaturalExtension {
    cone: IndependentProductCone,
}

impl IndependentNaturalExtension {
    pub fn new(
        p1: &CondLowerPrevision,
        p2: &CondLowerPrevision,
        b1: &EventFamily,
        b2: &EventFamily,
    ) -> Result<IndependentNaturalExtension> {
        Ok(IndependentNaturalExtension {
            cone: ine_cone(p1.cone(), p2.cone(), b1, b2)?,
        })
    }

    pub fn from_cone(cone: IndependentProductCone) -> IndependentNaturalExtension {
        IndependentNaturalExtension { cone }
    }

    pub fn cone(&self) -> &IndependentProductCone {
        &self.cone
    }

    pub fn prod(&self) -> &ProductSpace {
        &self.cone.prod
    }
}

impl LowerPrevision for IndependentNaturalExtension {
    fn space(&self) -> &SpaceRef {
        self.cone.prod.joint()
    }

    fn lower(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        Ok(self.cone.joint.lower_prev_unchecked(f, cond)?.value)
    }
}

/// `(P̲₁ ⊗ P̲₂)(f|B)`.
pub fn ine_lowprev(
    p1: &CondLowerPrevision,
    p2: &CondLowerPrevision,
    b1: &EventFamily,
    b2: &EventFamily,
    f: &Gamble,
    cond: &Event,
) -> Result<Rational> {
    IndependentNaturalExtension::new(p1, p2, b1, b2)?.lower(f, cond)
}

/// A local query `(f_i, B_i)` on one factor.
#[derive(Debug, Clone)]
pub struct LocalQuery {
    pub side: Side,
    pub gamble: Gamble,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IndependenceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each local query and each `B_j` in the other factor's family, checks
/// `P̲(f_i|B_i) = P̲(f_i|B_i ∩ B_j)`.
pub fn check_epistemic_independence<P: LowerPrevision + ?Sized>(
    joint: &P,
    prod: &ProductSpace,
    b1: &EventFamily,
    b2: &EventFamily,
    samples: &[LocalQuery],
) -> Result<IndependenceReport> {
    let mut report = IndependenceReport {
        checked: 0,
        failures: Vec::new(),
    };
    for q in samples {
        let other = q.side.other();
        let family = match other {
            Side::Left => b1,
            Side::Right => b2,
        };
        let f = prod.cylindrical_extension(&q.gamble, q.side)?;
        let given = prod.extend_event(&q.event, q.side)?;
        let base = joint.lower(&f, &given)?;
        for bj in family.events() {
            let narrowed = given.intersection(&prod.extend_event(bj, other)?)?;
            let value = joint.lower(&f, &narrowed)?;
            report.checked += 1;
            if value != base {
                report.failures.push(format!(
                    "P̲({}|{}) = {} but conditioning further on {} gives {}",
                    q.gamble,
                    q.event,
                    format_rational(&base),
                    bj,
                    format_rational(&value)
                ));
            }
        }
    }
    Ok(report)
}

/// `E̲_i(g·E̲_j(h))`, evaluated as `E̲_i(g)·E̲_j(h)` when `E̲_j(h) ≥ 0` and as
/// `E̅_i(g)·E̲_j(h)` otherwise.
pub fn factorisation_closed_form<Pi, Pj>(
    ei: &Pi,
    ej: &Pj,
    g: &Gamble,
    h: &Gamble,
) -> Result<Rational>
where
    Pi: LowerPrevision + ?Sized,
    Pj: LowerPrevision + ?Sized,
{
    if !g.is_nonneg() {
        return Err(Error::NegativeGamble);
    }
    let lh = ej.lower(h, &Event::full(h.space()))?;
    let full = Event::full(g.space());
    if lh.is_zero() {
        return Ok(Rational::zero());
    }
    let factor = if lh.is_positive() {
        ei.lower(g, &full)?
    } else {
        ei.upper(g, &full)?
    };
    Ok(factor * lh)
}

/// Right-hand side `E̲_i(f + g·E̲_j(h))` of the factorisation identity for
/// `f + g·h`, which requires `g ≥ 0` to be measurable for the family on `X_i`.
pub fn fact_add_general<Pi, Pj>(
    ei: &Pi,
    ej: &Pj,
    family_i: &EventFamily,
    f: &Gamble,
    g: &Gamble,
    h: &Gamble,
) -> Result<Rational>
where
    Pi: LowerPrevision + ?Sized,
    Pj: LowerPrevision + ?Sized,
{
    if let Err(level) = measurability_witness(g, family_i)? {
        return Err(Error::NotMeasurable {
            level: format_rational(&level),
        });
    }
    let lh = ej.lower(h, &Event::full(h.space()))?;
    let inner = f.add(&g.scale(&lh))?;
    ei.lower(&inner, &Event::full(f.space()))
}

/// `P₂(f)(x₁) = P₂(f(x₁, ·))`, and symmetrically.
pub fn nested_prevision(
    prod: &ProductSpace,
    inner: &LinearPrevision,
    inner_side: Side,
    f: &Gamble,
) -> Result<Gamble> {
    check_factor(prod, inner_side, inner.space())?;
    let outer = inner_side.other();
    let values = (0..prod.factor(outer).len())
        .map(|x| Ok(inner.expectation(&prod.section(f, outer, x)?)))
        .collect::<Result<Vec<_>>>()?;
    Gamble::new(prod.factor(outer), values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichReport {
    pub lower: Rational,
    /// `P₁(P₂(f))`.
    pub nested_left_outer: Rational,
    /// `P₂(P₁(f))`.
    pub nested_right_outer: Rational,
    pub upper: Rational,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower <= self.nested_left_outer
            && self.nested_left_outer <= self.upper
            && self.lower <= self.nested_right_outer
            && self.nested_right_outer <= self.upper
    }
}

/// Evaluates both nested previsions of `f` and the lower and upper
/// independent natural extension of two linear marginals.
pub fn nested_sandwich_check(
    p1: &LinearPrevision,
    p2: &LinearPrevision,
    b1: &EventFamily,
    b2: &EventFamily,
    f: &Gamble,
) -> Result<SandwichReport> {
    let m1 = CondLowerPrevision::new_unchecked(p1.to_assessment());
    let m2 = CondLowerPrevision::new_unchecked(p2.to_assessment());
    let ine = IndependentNaturalExtension::new(&m1, &m2, b1, b2)?;
    let prod = ine.prod().clone();
    let full = Event::full(prod.joint());
    let nested_left_outer = p1.expectation(&nested_prevision(&prod, p2, Side::Right, f)?);
    let nested_right_outer = p2.expectation(&nested_prevision(&prod, p1, Side::Left, f)?);
    Ok(SandwichReport {
        lower: ine.lower(f, &full)?,
        nested_left_outer,
        nested_right_outer,
        upper: ine.upper(f, &full)?,
    })
}

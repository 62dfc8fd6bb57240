//! Measurability of non-negative gambles with respect to a family of events.
//!
//! On a finite space the cone of simple gambles `c₀ + Σ c_i I_{B_i}` is
//! polyhedral and therefore closed, so a gamble is a uniform limit of such
//! gambles exactly when it is one. Membership is an LP feasibility question.

use crate::error::{Error, Result};
use crate::family::EventFamily;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::Rational;
use crate::space::{indicator, Event, Gamble};
use num_traits::{One, Zero};

/// `g = constant + Σ c_i I_{B_i}` with every coefficient non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleRepresentation {
    pub constant: Rational,
    pub terms: Vec<(Event, Rational)>,
}

impl SimpleRepresentation {
    pub fn reconstruct(&self, family: &EventFamily) -> Gamble {
        let mut g = Gamble::constant(family.space(), self.constant.clone());
        for (event, c) in &self.terms {
            g = g
                .add(&indicator(event).scale(c))
                .expect("family events share the space");
        }
        g
    }
}

fn require_nonneg(g: &Gamble) -> Result<()> {
    if g.is_nonneg() {
        Ok(())
    } else {
        Err(Error::NegativeGamble)
    }
}

fn check_space(g: &Gamble, family: &EventFamily) -> Result<()> {
    if g.space() != family.space() {
        return Err(Error::SpaceMismatch(
            g.space().id().to_string(),
            family.space().id().to_string(),
        ));
    }
    Ok(())
}

/// Non-negative coefficients writing `g` over the family, if any exist.
pub fn simple_representation(
    g: &Gamble,
    family: &EventFamily,
) -> Result<Option<SimpleRepresentation>> {
    check_space(g, family)?;
    require_nonneg(g)?;
    let events = family.events();
    let mut lp = LinearProgram::new(events.len() + 1);
    for x in 0..g.space().len() {
        let mut row = Vec::with_capacity(events.len() + 1);
        row.push(Rational::one());
        row.extend(events.iter().map(|e| {
            if e.contains(x) {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        lp.add_row(row, Relation::Eq, g.value(x).clone());
    }
    Ok(match lp.solve() {
        LpOutcome::Optimal { point, .. } => {
            let mut it = point.into_iter();
            let constant = it.next().expect("constant column");
            let terms = events
                .iter()
                .cloned()
                .zip(it)
                .filter(|(_, c)| !c.is_zero())
                .collect();
            Some(SimpleRepresentation { constant, terms })
        }
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective"),
    })
}

pub fn is_b_measurable(g: &Gamble, family: &EventFamily) -> Result<bool> {
    Ok(simple_representation(g, family)?.is_some())
}

/// Whether `target` is a union of pairwise disjoint members of
/// `family ∪ {X, ∅}`.
pub fn is_disjoint_union(target: &Event, family: &EventFamily) -> bool {
    if target.is_empty() || target.is_full() {
        return true;
    }
    let candidates: Vec<&Event> = family
        .events()
        .iter()
        .filter(|e| e.is_subset_of(target))
        .collect();
    fn cover(uncovered: &Event, candidates: &[&Event]) -> bool {
        let Some(x) = uncovered.indices().next() else {
            return true;
        };
        candidates
            .iter()
            .filter(|c| c.contains(x) && c.is_subset_of(uncovered))
            .any(|c| {
                cover(
                    &uncovered.intersection(&c.complement()).expect("same space"),
                    candidates,
                )
            })
    }
    cover(target, &candidates)
}

/// The first level `r` among the values of `g` whose level set `{g ≥ r}`
/// is not a finite disjoint union of family events.
pub fn level_set_obstruction(
    g: &Gamble,
    family: &EventFamily,
) -> Result<Option<(Rational, Event)>> {
    check_space(g, family)?;
    require_nonneg(g)?;
    Ok(g.distinct_values()
        .into_iter()
        .map(|r| {
            let set = g.level_set(&r);
            (r, set)
        })
        .find(|(_, set)| !is_disjoint_union(set, family)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Approximation {
    /// `g_n = (α/n) Σ_{k=1}^{n−1} I_{A_k}` with `max |g − g_n| ≤ α/n`.
    Simple {
        approximant: Gamble,
        alpha: Rational,
        bound: Rational,
    },
    /// The level set at `level` breaks the construction.
    Failure { level: Rational, level_set: Event },
}

/// The staircase approximation `g_n` built from the level sets
/// `A_k = {g ≥ kα/n}` with `α = max g + 1`.
pub fn level_set_approximation(g: &Gamble, family: &EventFamily, n: u32) -> Result<Approximation> {
    check_space(g, family)?;
    require_nonneg(g)?;
    assert!(n >= 1, "the number of levels must be positive");
    let alpha = g.max() + Rational::one();
    let step = &alpha / Rational::from_integer(n.into());
    let mut approximant = Gamble::zero(g.space());
    for k in 1..n {
        let level = &step * Rational::from_integer(k.into());
        let set = g.level_set(&level);
        if !is_disjoint_union(&set, family) {
            return Ok(Approximation::Failure {
                level,
                level_set: set,
            });
        }
        approximant = approximant.add(&indicator(&set).scale(&step))?;
    }
    Ok(Approximation::Simple {
        approximant,
        alpha,
        bound: step,
    })
}

/// Whether `family ∪ {∅}` is closed under complement and intersection.
/// The complement of `∅` forces the whole space to be a member.
pub fn is_field(family: &EventFamily) -> bool {
    let contains = |e: &Event| e.is_empty() || family.events().contains(e);
    contains(&Event::full(family.space()))
        && family.events().iter().all(|a| {
            contains(&a.complement())
                && family
                    .events()
                    .iter()
                    .all(|b| contains(&a.intersection(b).expect("same space")))
        })
}

/// For a field: measurability holds iff every level set is in the field.
/// `None` when the family is not a field.
pub fn field_criterion(g: &Gamble, family: &EventFamily) -> Result<Option<bool>> {
    check_space(g, family)?;
    require_nonneg(g)?;
    if !is_field(family) {
        return Ok(None);
    }
    Ok(Some(g.distinct_values().iter().all(|r| {
        let set = g.level_set(r);
        set.is_empty() || family.events().contains(&set)
    })))
}

/// `Ok(())` when measurable, otherwise the first level whose level set
/// does not decompose.
pub fn measurability_witness(
    g: &Gamble,
    family: &EventFamily,
) -> Result<std::result::Result<(), Rational>> {
    if is_b_measurable(g, family)? {
        return Ok(Ok(()));
    }
    let (level, _) = level_set_obstruction(g, family)?
        .expect("a gamble whose level sets all decompose is measurable");
    Ok(Err(level))
}

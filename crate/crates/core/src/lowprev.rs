//! Conditional lower previsions: assessments, their natural extension,
//! Williams coherence, linear previsions and dominating mass functions.

use crate::cone::DesirCone;
use crate::cone::Generator;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{max_of, Rational};
use crate::space::{indicator, Event, Gamble, SpaceRef};
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// Anything that answers conditional lower prevision queries.
pub trait LowerPrevision {
    fn space(&self) -> &SpaceRef;

    fn lower(&self, f: &Gamble, cond: &Event) -> Result<Rational>;

    fn upper(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        Ok(-self.lower(&f.negate(), cond)?)
    }
}

impl LowerPrevision for DesirCone {
    fn space(&self) -> &SpaceRef {
        DesirCone::space(self)
    }

    fn lower(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        self.lower_prev(f, cond)
    }
}

/// One assessed value `P̲(f|B) = value`. A linear entry also fixes the
/// conjugate value `P̲(−f|B) = −value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub gamble: Gamble,
    pub event: Event,
    pub value: Rational,
    pub linear: bool,
}

impl Entry {
    /// `[f − value]·I_B`, or its negation for the conjugate side.
    pub fn marginal_gain(&self, conjugate: bool) -> Gamble {
        let gain = self
            .gamble
            .shift(&-&self.value)
            .restrict(&self.event)
            .expect("entry parts share a space");
        if conjugate {
            gain.negate()
        } else {
            gain
        }
    }
}

/// Which assessed price a cone generator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Source {
    pub entry: usize,
    /// The selling side `P̲(−f|B) = −value` of a linear entry.
    pub conjugate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assessment {
    space: SpaceRef,
    entries: Vec<Entry>,
}

impl Assessment {
    pub fn new(space: &SpaceRef) -> Assessment {
        Assessment {
            space: Arc::clone(space),
            entries: Vec::new(),
        }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `P̲(f|B) = value`. Repeating a pair with the same value is a
    /// no-op; repeating it with another value is an error.
    pub fn push(&mut self, gamble: Gamble, event: Event, value: Rational) -> Result<()> {
        self.push_entry(Entry {
            gamble,
            event,
            value,
            linear: false,
        })
    }

    /// Adds `P(f|B) = value` together with its conjugate.
    pub fn push_linear(&mut self, gamble: Gamble, event: Event, value: Rational) -> Result<()> {
        self.push_entry(Entry {
            gamble,
            event,
            value,
            linear: true,
        })
    }

    pub fn push_entry(&mut self, entry: Entry) -> Result<()> {
        for part in [entry.gamble.space(), entry.event.space()] {
            if part != &self.space {
                return Err(Error::SpaceMismatch(
                    self.space.id().to_string(),
                    part.id().to_string(),
                ));
            }
        }
        entry.event.require_nonempty()?;
        if let Some(existing) = self
            .entries
            .iter_mut()
            .find(|e| e.gamble == entry.gamble && e.event == entry.event)
        {
            if existing.value != entry.value {
                return Err(Error::ConflictingEntries);
            }
            existing.linear |= entry.linear;
            return Ok(());
        }
        self.entries.push(entry);
        Ok(())
    }

    /// The sub-assessment on the given entry indices.
    pub fn restrict(&self, keep: &[usize]) -> Assessment {
        Assessment {
            space: Arc::clone(&self.space),
            entries: keep.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }

    /// Generator provenance, aligned with [`Assessment::cone`].
    pub fn sources(&self) -> Vec<Source> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            out.push(Source {
                entry: i,
                conjugate: false,
            });
            if e.linear {
                out.push(Source {
                    entry: i,
                    conjugate: true,
                });
            }
        }
        out
    }

    /// `E(A_P̲)`: every assessed price `v` of `f` given `B` contributes the
    /// gambles `[f − μ]·I_B` for all `μ < v`.
    pub fn cone(&self) -> DesirCone {
        let generators = self
            .sources()
            .into_iter()
            .map(|s| {
                let e = &self.entries[s.entry];
                Generator::open(e.marginal_gain(s.conjugate), e.event.clone()).expect("same space")
            })
            .collect();
        DesirCone::new(&self.space, generators).expect("entries live on the assessment space")
    }
}

/// One term `λ·I_B[f − P̲(f|B)]` of a coherence certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub source: Source,
    pub multiplier: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Some positive combination of acceptable buying transactions is never
    /// a gain on the union of their events.
    SureLoss,
    /// The entry is not reproduced by the natural extension, which is
    /// strictly higher there.
    NotReproduced,
}

/// A finite choice of multipliers for which
/// `sup_{x∈B} (Σ buy − λ₀·sell)(x) < 0`, `B` the union of the events used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub buy: Vec<Term>,
    /// The `λ₀` term, absent (`λ₀ = 0`) for a sure loss.
    pub sell: Option<Term>,
    pub sup_value: Rational,
    /// The natural extension at the offending entry, for [`ViolationKind::NotReproduced`].
    pub natural_extension: Option<Rational>,
}

impl Violation {
    /// Recomputes the supremum from the assessment.
    pub fn recompute_sup(&self, assessment: &Assessment) -> Rational {
        let n = assessment.space.len();
        let mut total = vec![Rational::zero(); n];
        let mut union = vec![false; n];
        let mut add = |term: &Term, sign: &Rational| {
            let e = &assessment.entries[term.source.entry];
            let gain = e.marginal_gain(term.source.conjugate);
            for x in 0..n {
                total[x] += sign * &term.multiplier * gain.value(x);
                union[x] |= e.event.contains(x);
            }
        };
        for t in &self.buy {
            add(t, &Rational::one());
        }
        if let Some(t) = &self.sell {
            add(t, &-Rational::one());
        }
        max_of((0..n).filter(|&x| union[x]).map(|x| &total[x])).unwrap_or_else(Rational::zero)
    }

    /// Whether the certificate is well formed and really has a negative supremum.
    pub fn verify(&self, assessment: &Assessment) -> bool {
        let uses_something = !self.buy.is_empty() || self.sell.is_some();
        let signs_ok = self
            .buy
            .iter()
            .chain(self.sell.iter())
            .all(|t| t.multiplier.is_positive() && t.source.entry < assessment.len());
        uses_something
            && signs_ok
            && self.sup_value.is_negative()
            && self.recompute_sup(assessment) == self.sup_value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Coherent,
    Violation(Violation),
}

impl Verdict {
    pub fn is_coherent(&self) -> bool {
        matches!(self, Verdict::Coherent)
    }
}

fn terms_from(sources: &[Source], lambda: &[Rational]) -> Vec<Term> {
    sources
        .iter()
        .zip(lambda)
        .filter(|(_, l)| l.is_positive())
        .map(|(s, l)| Term {
            source: *s,
            multiplier: l.clone(),
        })
        .collect()
}

/// Decides Williams coherence.
///
/// The assessment is coherent iff its cone avoids non-positive gambles and
/// the natural extension gives back every assessed value. The first failure
/// found (sure loss first, then entries in order) is turned into explicit
/// multipliers.
pub fn check_williams_coherence(assessment: &Assessment) -> Verdict {
    let cone = assessment.cone();
    let sources = assessment.sources();
    if let Some(lambda) = cone.sure_loss_certificate() {
        let mut v = Violation {
            kind: ViolationKind::SureLoss,
            buy: terms_from(&sources, &lambda),
            sell: None,
            sup_value: Rational::zero(),
            natural_extension: None,
        };
        v.sup_value = v.recompute_sup(assessment);
        return Verdict::Violation(v);
    }
    for (g, source) in sources.iter().enumerate() {
        let entry = &assessment.entries[source.entry];
        let (f, assessed) = if source.conjugate {
            (entry.gamble.negate(), -&entry.value)
        } else {
            (entry.gamble.clone(), entry.value.clone())
        };
        let sol = cone
            .lower_prev_unchecked(&f, &entry.event)
            .expect("coherent cones give bounded queries");
        if sol.value <= assessed {
            continue;
        }
        // λ = λ° + t·λ*, with t small enough that the strictness added
        // outside B costs at most half the gap inside B.
        let gap = &sol.value - &assessed;
        let direction = cone.combination(&sol.slack_direction);
        let worst = max_of(entry.event.indices().map(|x| &direction[x]))
            .unwrap_or_else(Rational::zero)
            .max(Rational::zero());
        let t = if worst.is_zero() {
            Rational::one()
        } else {
            &gap / (Rational::from_integer(2.into()) * &worst)
        };
        let lambda: Vec<Rational> = sol
            .multipliers
            .iter()
            .zip(&sol.slack_direction)
            .map(|(a, b)| a + &t * b)
            .collect();
        let mut v = Violation {
            kind: ViolationKind::NotReproduced,
            buy: terms_from(&sources, &lambda),
            sell: Some(Term {
                source: sources[g],
                multiplier: Rational::one(),
            }),
            sup_value: Rational::zero(),
            natural_extension: Some(sol.value),
        };
        v.sup_value = v.recompute_sup(assessment);
        return Verdict::Violation(v);
    }
    Verdict::Coherent
}

/// A coherent assessment together with its natural extension.
#[derive(Debug, Clone)]
pub struct CondLowerPrevision {
    assessment: Assessment,
    cone: DesirCone,
}

impl CondLowerPrevision {
    /// Fails with [`Error::IncoherentAssessment`] unless Williams-coherent.
    pub fn new(assessment: Assessment) -> Result<CondLowerPrevision> {
        if !check_williams_coherence(&assessment).is_coherent() {
            return Err(Error::IncoherentAssessment);
        }
        Ok(Self::new_unchecked(assessment))
    }

    /// Skips the coherence check; queries on an incoherent assessment are
    /// meaningless.
    pub fn new_unchecked(assessment: Assessment) -> CondLowerPrevision {
        let cone = assessment.cone();
        CondLowerPrevision { assessment, cone }
    }

    pub fn vacuous(space: &SpaceRef) -> CondLowerPrevision {
        Self::new_unchecked(Assessment::new(space))
    }

    pub fn assessment(&self) -> &Assessment {
        &self.assessment
    }

    pub fn cone(&self) -> &DesirCone {
        &self.cone
    }

    pub fn space(&self) -> &SpaceRef {
        &self.assessment.space
    }

    /// `E̲(f|B)`, the least committal coherent extension.
    pub fn natural_extension(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        Ok(self.cone.lower_prev_unchecked(f, cond)?.value)
    }

    pub fn upper_prev(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        Ok(-self.natural_extension(&f.negate(), cond)?)
    }
}

impl LowerPrevision for CondLowerPrevision {
    fn space(&self) -> &SpaceRef {
        &self.assessment.space
    }

    fn lower(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        self.natural_extension(f, cond)
    }
}

pub fn natural_extension(p: &CondLowerPrevision, f: &Gamble, cond: &Event) -> Result<Rational> {
    p.natural_extension(f, cond)
}

pub fn upper_prev(p: &CondLowerPrevision, f: &Gamble, cond: &Event) -> Result<Rational> {
    p.upper_prev(f, cond)
}

/// An expectation operator given by a mass function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPrevision {
    space: SpaceRef,
    masses: Vec<Rational>,
}

impl LinearPrevision {
    pub fn new(space: &SpaceRef, masses: Vec<Rational>) -> Result<LinearPrevision> {
        if masses.len() != space.len()
            || masses.iter().any(Signed::is_negative)
            || masses.iter().sum::<Rational>() != Rational::one()
        {
            return Err(Error::InvalidMassFunction);
        }
        Ok(LinearPrevision {
            space: Arc::clone(space),
            masses,
        })
    }

    pub fn uniform(space: &SpaceRef) -> LinearPrevision {
        let share = Rational::new(1.into(), space.len().into());
        LinearPrevision {
            space: Arc::clone(space),
            masses: vec![share; space.len()],
        }
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn probability(&self, event: &Event) -> Rational {
        event.indices().map(|x| &self.masses[x]).sum()
    }

    pub fn expectation(&self, f: &Gamble) -> Rational {
        self.masses.iter().zip(f.values()).map(|(p, v)| p * v).sum()
    }

    /// `P(f|B)` by Bayes' rule; refused when `P(B) = 0`.
    pub fn conditional(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        cond.require_nonempty()?;
        let mass = self.probability(cond);
        if mass.is_zero() {
            return Err(Error::ZeroProbability);
        }
        let num: Rational = cond.indices().map(|x| &self.masses[x] * f.value(x)).sum();
        Ok(num / mass)
    }

    /// `P(I_{x}) = p(x)` for every outcome, as linear entries.
    pub fn to_assessment(&self) -> Assessment {
        let mut a = Assessment::new(&self.space);
        let full = Event::full(&self.space);
        for x in 0..self.space.len() {
            let ind = indicator(&Event::singleton(&self.space, x));
            a.push_linear(ind, full.clone(), self.masses[x].clone())
                .expect("singletons are distinct");
        }
        a
    }
}

impl LowerPrevision for LinearPrevision {
    fn space(&self) -> &SpaceRef {
        &self.space
    }

    fn lower(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        self.conditional(f, cond)
    }
}

/// Mass functions attaining `min` and `max` of `P(f|B)` over the dominating
/// mass functions that give `B` positive probability.
///
/// Solved on `q = p / p(B)`: `q ≥ 0`, `Σ_B q = 1`, `q·[g − v]I_A ≥ 0` per
/// entry, where the objective `q·(f I_B)` becomes linear.
pub fn dominating_linear_previsions(
    p: &CondLowerPrevision,
    f: &Gamble,
    cond: &Event,
) -> Result<(LinearPrevision, LinearPrevision)> {
    cond.require_nonempty()?;
    let space = p.space();
    let n = space.len();
    let constraints: Vec<Gamble> = p
        .assessment
        .sources()
        .iter()
        .map(|s| p.assessment.entries[s.entry].marginal_gain(s.conjugate))
        .collect();
    let solve = |sign: Rational| -> Result<LinearPrevision> {
        let mut lp = LinearProgram::new(n);
        lp.maximize(
            (0..n)
                .map(|x| {
                    if cond.contains(x) {
                        &sign * f.value(x)
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
        lp.add_row(
            (0..n)
                .map(|x| {
                    if cond.contains(x) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
            Relation::Eq,
            Rational::one(),
        );
        for g in &constraints {
            lp.add_row(g.values().to_vec(), Relation::Ge, Rational::zero());
        }
        match lp.solve() {
            LpOutcome::Optimal { point, .. } => {
                let total: Rational = point.iter().sum();
                LinearPrevision::new(space, point.iter().map(|v| v / &total).collect())
            }
            LpOutcome::Infeasible => Err(Error::ConditioningBeyondSupport),
            // The objective is bounded by f on B; `q` off B can only grow
            // along directions the objective ignores.
            LpOutcome::Unbounded => unreachable!("objective bounded on Σ_B q = 1"),
        }
    };
    Ok((solve(-Rational::one())?, solve(Rational::one())?))
}

/// Inputs over which property checks quantify.
#[derive(Debug, Clone, Default)]
pub struct PropertySamples {
    pub gambles: Vec<Gamble>,
    pub events: Vec<Event>,
    pub scalars: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl PropertyCheck {
    fn new(name: &'static str) -> PropertyCheck {
        PropertyCheck {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(PropertyCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn sup_abs_on(f: &Gamble, g: &Gamble, cond: &Event) -> Rational {
    max_of(
        cond.indices()
            .map(|x| (f.value(x) - g.value(x)).abs())
            .collect::<Vec<_>>()
            .iter(),
    )
    .expect("non-empty event")
}

/// Checks LP1–LP8 on every combination of the sampled inputs.
///
/// Uniform continuity is checked through its finite form
/// `|P̲(f|B) − P̲(g|B)| ≤ max_B |f − g|`.
pub fn check_axioms_lp1_to_lp8<P: LowerPrevision + ?Sized>(
    p: &P,
    samples: &PropertySamples,
) -> Result<PropertyReport> {
    let mut lp1 = PropertyCheck::new("LP1");
    let mut lp2 = PropertyCheck::new("LP2");
    let mut lp3 = PropertyCheck::new("LP3");
    let mut lp4 = PropertyCheck::new("LP4");
    let mut lp5 = PropertyCheck::new("LP5");
    let mut lp6 = PropertyCheck::new("LP6");
    let mut lp7 = PropertyCheck::new("LP7");
    let mut lp8 = PropertyCheck::new("LP8");
    let space = p.space().clone();
    let zero = Gamble::zero(&space);
    for b in samples.events.iter().filter(|b| !b.is_empty()) {
        let lz = p.lower(&zero, b)?;
        lp2.record(lz.is_zero(), || format!("P̲(0|{b}) = {lz}"));
        let values: Vec<Rational> = samples
            .gambles
            .iter()
            .map(|f| p.lower(f, b))
            .collect::<Result<_>>()?;
        for (f, lf) in samples.gambles.iter().zip(&values) {
            let inf = f.min_over(b)?;
            lp1.record(*lf >= inf, || format!("P̲({f}|{b}) = {lf} < {inf}"));
            let uf = p.upper(f, b)?;
            lp8.record(*lf <= uf, || format!("P̲({f}|{b}) = {lf} > {uf}"));
            for c in &samples.scalars {
                if !c.is_negative() {
                    let scaled = p.lower(&f.scale(c), b)?;
                    lp2.record(scaled == c * lf, || {
                        format!("P̲({c}·{f}|{b}) = {scaled} ≠ {}", c * lf)
                    });
                }
                let shifted = p.lower(&f.shift(c), b)?;
                lp6.record(shifted == lf + c, || {
                    format!("P̲({f}+{c}|{b}) = {shifted} ≠ {}", lf + c)
                });
            }
            for (g, lg) in samples.gambles.iter().zip(&values) {
                let sum = p.lower(&f.add(g)?, b)?;
                lp3.record(sum >= lf + lg, || {
                    format!("P̲({f}+{g}|{b}) = {sum} < {}", lf + lg)
                });
                let bound = sup_abs_on(f, g, b);
                let diff = (lf - lg).abs();
                lp5.record(diff <= bound, || {
                    format!("|P̲({f}|{b}) − P̲({g}|{b})| = {diff} > {bound}")
                });
                if f.dominates_on(g, b)? {
                    lp7.record(lf >= lg, || format!("{f} ≥ {g} on {b} but {lf} < {lg}"));
                }
            }
        }
        for a in samples.events.iter().filter(|a| !a.is_empty()) {
            let ab = a.intersection(b)?;
            if ab.is_empty() {
                continue;
            }
            for f in &samples.gambles {
                let inner = p.lower(f, &ab)?;
                let h = f.shift(&-&inner).restrict(b)?;
                let value = p.lower(&h, a)?;
                lp4.record(value.is_zero(), || {
                    format!("P̲(I_{b}[{f} − {inner}] | {a}) = {value}")
                });
            }
        }
    }
    Ok(PropertyReport {
        checks: vec![lp1, lp2, lp3, lp4, lp5, lp6, lp7, lp8],
    })
}

/// Checks P1–P7 for a linear prevision on inputs where `P(B) > 0`.
pub fn check_linear_properties(
    p: &LinearPrevision,
    samples: &PropertySamples,
) -> Result<PropertyReport> {
    let mut checks: Vec<PropertyCheck> = ["P1", "P2", "P3", "P4", "P5", "P6", "P7"]
        .into_iter()
        .map(PropertyCheck::new)
        .collect();
    let positive: Vec<&Event> = samples
        .events
        .iter()
        .filter(|b| !b.is_empty() && p.probability(b).is_positive())
        .collect();
    for b in &positive {
        for f in &samples.gambles {
            let pf = p.conditional(f, b)?;
            let inf = f.min_over(b)?;
            checks[0].record(pf >= inf, || format!("P({f}|{b}) = {pf} < {inf}"));
            for c in &samples.scalars {
                let scaled = p.conditional(&f.scale(c), b)?;
                checks[1].record(scaled == c * &pf, || format!("P({c}·{f}|{b}) = {scaled}"));
                let shifted = p.conditional(&f.shift(c), b)?;
                checks[5].record(shifted == &pf + c, || format!("P({f}+{c}|{b}) = {shifted}"));
            }
            for g in &samples.gambles {
                let pg = p.conditional(g, b)?;
                let sum = p.conditional(&f.add(g)?, b)?;
                checks[2].record(sum == &pf + &pg, || {
                    format!("P({f}+{g}|{b}) = {sum} ≠ {}", &pf + &pg)
                });
                let bound = sup_abs_on(f, g, b);
                checks[4].record((&pf - &pg).abs() <= bound, || {
                    format!("continuity at {f}, {g} on {b}")
                });
                if f.dominates_on(g, b)? {
                    checks[6].record(pf >= pg, || format!("{f} ≥ {g} on {b} but {pf} < {pg}"));
                }
            }
            for a in &positive {
                let ab = a.intersection(b)?;
                if ab.is_empty() || !p.probability(&ab).is_positive() {
                    continue;
                }
                let lhs = p.conditional(&f.restrict(b)?, a)?;
                let rhs = p.conditional(f, &ab)? * p.conditional(&indicator(b), a)?;
                checks[3].record(lhs == rhs, || {
                    format!("Bayes rule fails for {f}, A = {a}, B = {b}")
                });
            }
        }
    }
    Ok(PropertyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::space::Space;

    fn ab() -> SpaceRef {
        Space::from_labels("X", &["a", "b"]).unwrap()
    }

    fn quarter_bounds() -> Assessment {
        let x = ab();
        let mut a = Assessment::new(&x);
        let full = Event::full(&x);
        a.push(
            indicator(&Event::singleton(&x, 0)),
            full.clone(),
            ratio(1, 4),
        )
        .unwrap();
        a.push(indicator(&Event::singleton(&x, 1)), full, ratio(1, 4))
            .unwrap();
        a
    }

    #[test]
    fn vacuous_entry_is_coherent() {
        let x = Space::from_labels("X", &["x1", "x2", "x3"]).unwrap();
        let f = Gamble::from_ints(&x, &[3, -1, 2]).unwrap();
        let b = Event::from_labels(&x, &["x1", "x3"]).unwrap();
        let mut a = Assessment::new(&x);
        a.push(f.clone(), b.clone(), int(2)).unwrap();
        assert!(check_williams_coherence(&a).is_coherent());
    }

    #[test]
    fn above_maximum_is_a_sure_loss() {
        let x = Space::from_labels("X", &["x1", "x2", "x3"]).unwrap();
        let f = Gamble::from_ints(&x, &[3, -1, 2]).unwrap();
        let b = Event::from_labels(&x, &["x1", "x3"]).unwrap();
        let mut a = Assessment::new(&x);
        a.push(f, b, int(4)).unwrap();
        let Verdict::Violation(v) = check_williams_coherence(&a) else {
            panic!("expected a violation");
        };
        assert_eq!(v.kind, ViolationKind::SureLoss);
        assert_eq!(v.sell, None);
        assert_eq!(v.buy.len(), 1);
        assert_eq!(v.buy[0].multiplier, int(1));
        assert_eq!(v.sup_value, int(-1));
        assert!(v.verify(&a));
    }

    #[test]
    fn two_thirds_twice_is_a_sure_loss() {
        let x = ab();
        let mut a = Assessment::new(&x);
        let full = Event::full(&x);
        a.push(
            indicator(&Event::singleton(&x, 0)),
            full.clone(),
            ratio(2, 3),
        )
        .unwrap();
        a.push(indicator(&Event::singleton(&x, 1)), full, ratio(2, 3))
            .unwrap();
        let Verdict::Violation(v) = check_williams_coherence(&a) else {
            panic!("expected a violation");
        };
        assert_eq!(v.kind, ViolationKind::SureLoss);
        assert_eq!(
            v.buy
                .iter()
                .map(|t| t.multiplier.clone())
                .collect::<Vec<_>>(),
            vec![int(1), int(1)]
        );
        assert_eq!(v.sup_value, ratio(-1, 3));
        assert!(v.verify(&a));
    }

    #[test]
    fn not_reproduced_entry() {
        // P̲(I_a) = 1/2 and P̲(I_a + I_b) = 0 on {a, b, c}: the second is
        // implied to be at least 1/2.
        let x = Space::from_labels("X", &["a", "b", "c"]).unwrap();
        let full = Event::full(&x);
        let mut a = Assessment::new(&x);
        a.push(
            indicator(&Event::singleton(&x, 0)),
            full.clone(),
            ratio(1, 2),
        )
        .unwrap();
        a.push(indicator(&Event::from_indices(&x, &[0, 1])), full, int(0))
            .unwrap();
        let Verdict::Violation(v) = check_williams_coherence(&a) else {
            panic!("expected a violation");
        };
        assert_eq!(v.kind, ViolationKind::NotReproduced);
        assert_eq!(v.natural_extension, Some(ratio(1, 2)));
        assert_eq!(v.sell.as_ref().unwrap().source.entry, 1);
        assert!(v.verify(&a));
        assert_eq!(
            CondLowerPrevision::new(a).unwrap_err(),
            Error::IncoherentAssessment
        );
    }

    #[test]
    fn credal_quarter_bounds() {
        let p = CondLowerPrevision::new(quarter_bounds()).unwrap();
        let x = p.space().clone();
        let ia = indicator(&Event::singleton(&x, 0));
        let full = Event::full(&x);
        assert_eq!(p.natural_extension(&ia, &full).unwrap(), ratio(1, 4));
        assert_eq!(p.upper_prev(&ia, &full).unwrap(), ratio(3, 4));
        let (lo, hi) = dominating_linear_previsions(&p, &ia, &full).unwrap();
        assert_eq!(lo.masses(), &[ratio(1, 4), ratio(3, 4)]);
        assert_eq!(hi.masses(), &[ratio(3, 4), ratio(1, 4)]);
        let c = Gamble::constant(&x, ratio(5, 7));
        assert_eq!(
            p.natural_extension(&c, &Event::singleton(&x, 1)).unwrap(),
            ratio(5, 7)
        );
    }

    #[test]
    fn linear_prevision_queries() {
        let x = ab();
        let lin = LinearPrevision::new(&x, vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        let p = CondLowerPrevision::new(lin.to_assessment()).unwrap();
        let ia = indicator(&Event::singleton(&x, 0));
        let full = Event::full(&x);
        assert_eq!(p.natural_extension(&ia, &full).unwrap(), ratio(1, 3));
        assert_eq!(p.upper_prev(&ia, &full).unwrap(), ratio(1, 3));
        let (lo, hi) = dominating_linear_previsions(&p, &ia, &full).unwrap();
        assert_eq!(lo, lin);
        assert_eq!(hi, lin);
        assert_eq!(lin.expectation(&Gamble::constant(&x, int(1))), int(1));
        let degenerate = LinearPrevision::new(&x, vec![int(1), int(0)]).unwrap();
        assert_eq!(
            degenerate.conditional(&ia, &Event::singleton(&x, 1)),
            Err(Error::ZeroProbability)
        );
        assert_eq!(
            LinearPrevision::new(&x, vec![int(1), int(1)]),
            Err(Error::InvalidMassFunction)
        );
    }

    #[test]
    fn zero_lower_probability_conditioning() {
        // P̲(I_b − I_c) = 0, P̲(I_a) = 1/2: conditional on {b, c} the natural
        // extension is vacuous, while every dominating mass function that
        // charges {b, c} puts at least half of it on b.
        let x = Space::from_labels("X", &["a", "b", "c"]).unwrap();
        let full = Event::full(&x);
        let ia = indicator(&Event::singleton(&x, 0));
        let ib = indicator(&Event::singleton(&x, 1));
        let ic = indicator(&Event::singleton(&x, 2));
        let mut a = Assessment::new(&x);
        a.push(ib.sub(&ic).unwrap(), full.clone(), int(0)).unwrap();
        a.push(ia, full, ratio(1, 2)).unwrap();
        let p = CondLowerPrevision::new(a).unwrap();
        let bc = Event::from_indices(&x, &[1, 2]);
        assert_eq!(p.natural_extension(&ib, &bc).unwrap(), int(0));
        let (lo, _) = dominating_linear_previsions(&p, &ib, &bc).unwrap();
        assert_eq!(lo.conditional(&ib, &bc).unwrap(), ratio(1, 2));
    }

    #[test]
    fn conflicting_duplicates() {
        let x = ab();
        let mut a = Assessment::new(&x);
        let f = Gamble::from_ints(&x, &[1, 0]).unwrap();
        a.push(f.clone(), Event::full(&x), ratio(1, 2)).unwrap();
        a.push(f.clone(), Event::full(&x), ratio(1, 2)).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(
            a.push(f.clone(), Event::full(&x), ratio(1, 3)),
            Err(Error::ConflictingEntries)
        );
        assert_eq!(
            a.push(f, Event::empty(&x), ratio(1, 3)),
            Err(Error::EmptyEvent)
        );
    }
}

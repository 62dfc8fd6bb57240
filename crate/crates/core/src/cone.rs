//! Finitely generated sets of desirable gambles.
//!
//! A [`DesirCone`] stands for `posi(A ∪ G>0)` where every generator in `A`
//! carries a *strict support*. An exact generator (empty support) is itself
//! desirable. An open generator `g` with support `S` stands for the family
//! `{g + ε·I_S : ε > 0}`; this is how an assessed buying price `[f − v]·I_B`
//! enters as the set of all `[f − μ]·I_B` with `μ < v`.
//!
//! Elements of the cone are therefore exactly the gambles
//! `Σ λ_k g_k + R` with `λ ≥ 0`, `R ≥ 0`, `R > 0` on the union of the
//! supports of the generators used, and `(λ, R) ≠ 0`.
//!
//! Whether a set of multipliers can be made strict is a combinatorial
//! question on top of the usual LP. It is answered by a support fixpoint:
//! one LP finds the largest support and the largest strict region at once,
//! generators whose support is not covered are dropped, and the loop repeats
//! until nothing changes.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::Rational;
use crate::space::{Event, Gamble, SpaceRef};
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    gamble: Gamble,
    strict_on: Event,
}

impl Generator {
    pub fn exact(gamble: Gamble) -> Generator {
        let strict_on = Event::empty(gamble.space());
        Generator { gamble, strict_on }
    }

    /// `gamble + ε·I_support` for every `ε > 0`.
    pub fn open(gamble: Gamble, support: Event) -> Result<Generator> {
        if gamble.space() != support.space() {
            return Err(Error::SpaceMismatch(
                gamble.space().id().to_string(),
                support.space().id().to_string(),
            ));
        }
        Ok(Generator {
            gamble,
            strict_on: support,
        })
    }

    pub fn gamble(&self) -> &Gamble {
        &self.gamble
    }

    pub fn strict_support(&self) -> &Event {
        &self.strict_on
    }

    pub fn is_exact(&self) -> bool {
        self.strict_on.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmfWitness {
    space: SpaceRef,
    masses: Vec<Rational>,
}

impl PmfWitness {
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn expectation(&self, g: &Gamble) -> Rational {
        self.masses.iter().zip(g.values()).map(|(p, v)| p * v).sum()
    }
}

/// Result of a lower prevision query against a cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerPrevSolution {
    pub value: Rational,
    /// Optimal LP multipliers, one per generator (zero outside the admissible set).
    pub multipliers: Vec<Rational>,
    /// Multipliers with the largest admissible support; adding a small
    /// multiple of these to `multipliers` makes every off-event constraint strict.
    pub slack_direction: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesirCone {
    space: SpaceRef,
    generators: Vec<Generator>,
}

/// Outcome of the support fixpoint on `Σ λ g ≤ 0` over a region.
struct Admissible {
    lambda: Vec<Rational>,
    active: Vec<usize>,
}

impl DesirCone {
    /// `E(∅) = G>0`.
    pub fn vacuous(space: &SpaceRef) -> DesirCone {
        DesirCone {
            space: Arc::clone(space),
            generators: Vec::new(),
        }
    }

    /// `E(A)` for a finite set of exact generators.
    pub fn from_gambles(space: &SpaceRef, gambles: Vec<Gamble>) -> Result<DesirCone> {
        Self::new(space, gambles.into_iter().map(Generator::exact).collect())
    }

    pub fn new(space: &SpaceRef, generators: Vec<Generator>) -> Result<DesirCone> {
        for g in &generators {
            if g.gamble.space() != space {
                return Err(Error::SpaceMismatch(
                    space.id().to_string(),
                    g.gamble.space().id().to_string(),
                ));
            }
        }
        Ok(DesirCone {
            space: Arc::clone(space),
            generators,
        })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(Generator::is_exact)
    }

    /// The cone generated by the current generators and `f`.
    pub fn extend_with(&self, f: Gamble) -> Result<DesirCone> {
        self.extend_with_generator(Generator::exact(f))
    }

    pub fn extend_with_generator(&self, g: Generator) -> Result<DesirCone> {
        let mut generators = self.generators.clone();
        generators.push(g);
        Self::new(&self.space, generators)
    }

    fn check_space(&self, f: &Gamble) -> Result<()> {
        if f.space() != &self.space {
            return Err(Error::SpaceMismatch(
                self.space.id().to_string(),
                f.space().id().to_string(),
            ));
        }
        Ok(())
    }

    /// Largest admissible multipliers for `Σ λ_k g_k ≤ 0` on `region`: the
    /// combination must be strictly negative on every point of `region`
    /// covered by the support of a generator it uses.
    fn admissible_on(&self, region: &Event) -> Admissible {
        let mut active: Vec<usize> = (0..self.generators.len()).collect();
        let rows: Vec<usize> = region.indices().collect();
        loop {
            if active.is_empty() {
                return Admissible {
                    lambda: vec![Rational::zero(); self.generators.len()],
                    active,
                };
            }
            let k = active.len();
            // columns: τ_j, ν_j (λ_j = τ_j + ν_j), s_x
            let mut lp = LinearProgram::new(2 * k + rows.len());
            for j in 0..k {
                lp.set_objective(j, Rational::one());
            }
            for r in 0..rows.len() {
                lp.set_objective(2 * k + r, Rational::one());
            }
            for (r, &x) in rows.iter().enumerate() {
                let mut terms = Vec::with_capacity(2 * k + 1);
                for (j, &gen) in active.iter().enumerate() {
                    let v = self.generators[gen].gamble.value(x);
                    if !v.is_zero() {
                        terms.push((j, v.clone()));
                        terms.push((k + j, v.clone()));
                    }
                }
                terms.push((2 * k + r, Rational::one()));
                lp.add_sparse_row(&terms, Relation::Le, Rational::zero());
            }
            for j in 0..k {
                lp.add_sparse_row(&[(j, Rational::one())], Relation::Le, Rational::one());
            }
            for r in 0..rows.len() {
                lp.add_sparse_row(
                    &[(2 * k + r, Rational::one())],
                    Relation::Le,
                    Rational::one(),
                );
            }
            let point = match lp.solve() {
                LpOutcome::Optimal { point, .. } => point,
                other => unreachable!("bounded feasible program, got {other:?}"),
            };
            let mut lambda = vec![Rational::zero(); self.generators.len()];
            for (j, &gen) in active.iter().enumerate() {
                lambda[gen] = &point[j] + &point[k + j];
            }
            let combo = self.combination(&lambda);
            let negative: Vec<bool> = (0..self.space.len())
                .map(|x| region.contains(x) && combo[x].is_negative())
                .collect();
            let next: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&gen| {
                    lambda[gen].is_positive()
                        && self.generators[gen]
                            .strict_on
                            .indices()
                            .all(|x| !region.contains(x) || negative[x])
                })
                .collect();
            if next == active {
                return Admissible { lambda, active };
            }
            active = next;
        }
    }

    /// `Σ λ_k g_k` as a raw value vector.
    pub(crate) fn combination(&self, lambda: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.space.len()];
        for (l, gen) in lambda.iter().zip(&self.generators) {
            if l.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(gen.gamble.values()) {
                if !v.is_zero() {
                    *o += l * v;
                }
            }
        }
        out
    }

    /// Multipliers `λ ≠ 0` whose combination is a non-positive element of
    /// the cone, normalised so the smallest positive multiplier is one.
    /// `None` exactly when the cone is coherent.
    pub fn sure_loss_certificate(&self) -> Option<Vec<Rational>> {
        let adm = self.admissible_on(&Event::full(&self.space));
        if adm.active.is_empty() {
            return None;
        }
        let smallest = adm
            .lambda
            .iter()
            .filter(|l| l.is_positive())
            .min()
            .cloned()
            .expect("active set is non-empty");
        Some(adm.lambda.iter().map(|l| l / &smallest).collect())
    }

    /// No element of the cone is `≤ 0`.
    pub fn is_coherent(&self) -> bool {
        self.sure_loss_certificate().is_none()
    }

    /// Feasibility of `{λ ≥ 0, Σλ = 1, Σ λ_i f_i ≤ 0}`, the direct test for
    /// cones of exact generators: coherent iff infeasible.
    pub fn is_coherent_by_simplex(&self) -> Result<bool> {
        if !self.is_exact() {
            return Err(Error::NeedsExactGenerators);
        }
        let k = self.generators.len();
        if k == 0 {
            return Ok(true);
        }
        let mut lp = LinearProgram::new(k);
        lp.add_row(vec![Rational::one(); k], Relation::Eq, Rational::one());
        for x in 0..self.space.len() {
            let row = self
                .generators
                .iter()
                .map(|g| g.gamble.value(x).clone())
                .collect();
            lp.add_row(row, Relation::Le, Rational::zero());
        }
        Ok(lp.solve().is_infeasible())
    }

    /// `f ∈ posi(A ∪ G>0)`.
    pub fn member(&self, f: &Gamble) -> Result<bool> {
        self.check_space(f)?;
        if f.is_positive() {
            return Ok(true);
        }
        Ok(self.member_through_generators(f))
    }

    /// Whether `f = (Σ λ_k g_k + R)` for some admissible `λ ≠ 0`.
    ///
    /// Works on the homogenised system `κ·f − Σ λ g ≥ 0` so that the
    /// fixpoint can also decide whether `κ` can be positive.
    fn member_through_generators(&self, f: &Gamble) -> bool {
        let n = self.space.len();
        let mut active: Vec<usize> = (0..self.generators.len()).collect();
        loop {
            if active.is_empty() {
                return false;
            }
            let k = active.len() + 1;
            // columns 0 and k split κ; j and k + j split generator active[j - 1]
            let mut lp = LinearProgram::new(2 * k + n);
            for j in 0..k {
                lp.set_objective(j, Rational::one());
            }
            for x in 0..n {
                lp.set_objective(2 * k + x, Rational::one());
            }
            for x in 0..n {
                let mut terms = Vec::with_capacity(2 * k + 1);
                let fx = f.value(x);
                if !fx.is_zero() {
                    terms.push((0, -fx));
                    terms.push((k, -fx));
                }
                for (j, &gen) in active.iter().enumerate() {
                    let v = self.generators[gen].gamble.value(x);
                    if !v.is_zero() {
                        terms.push((j + 1, v.clone()));
                        terms.push((k + j + 1, v.clone()));
                    }
                }
                terms.push((2 * k + x, Rational::one()));
                lp.add_sparse_row(&terms, Relation::Le, Rational::zero());
            }
            for j in 0..k {
                lp.add_sparse_row(&[(j, Rational::one())], Relation::Le, Rational::one());
            }
            for x in 0..n {
                lp.add_sparse_row(
                    &[(2 * k + x, Rational::one())],
                    Relation::Le,
                    Rational::one(),
                );
            }
            let point = match lp.solve() {
                LpOutcome::Optimal { point, .. } => point,
                other => unreachable!("bounded feasible program, got {other:?}"),
            };
            let kappa = &point[0] + &point[k];
            let mut lambda = vec![Rational::zero(); self.generators.len()];
            for (j, &gen) in active.iter().enumerate() {
                lambda[gen] = &point[j + 1] + &point[k + j + 1];
            }
            let combo = self.combination(&lambda);
            let positive: Vec<bool> = (0..n)
                .map(|x| (&kappa * f.value(x) - &combo[x]).is_positive())
                .collect();
            let next: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&gen| {
                    lambda[gen].is_positive()
                        && self.generators[gen]
                            .strict_on
                            .indices()
                            .all(|x| positive[x])
                })
                .collect();
            if next == active {
                return kappa.is_positive();
            }
            active = next;
        }
    }

    /// Membership through `max Σλ s.t. Σ λ_i f_i ≤ f`: for exact generators
    /// `f` is a member iff it is positive or the optimum is positive or unbounded.
    pub fn member_by_simplex(&self, f: &Gamble) -> Result<bool> {
        self.check_space(f)?;
        if !self.is_exact() {
            return Err(Error::NeedsExactGenerators);
        }
        if f.is_positive() {
            return Ok(true);
        }
        let k = self.generators.len();
        if k == 0 {
            return Ok(false);
        }
        let mut lp = LinearProgram::new(k);
        lp.maximize(vec![Rational::one(); k]);
        for x in 0..self.space.len() {
            let row = self
                .generators
                .iter()
                .map(|g| g.gamble.value(x).clone())
                .collect();
            lp.add_row(row, Relation::Le, f.value(x).clone());
        }
        Ok(match lp.solve() {
            LpOutcome::Optimal { value, .. } => value.is_positive(),
            LpOutcome::Unbounded => true,
            LpOutcome::Infeasible => false,
        })
    }

    /// A strictly positive pmf giving every generator positive expectation.
    ///
    /// Maximises `t` subject to `p ≥ t`, `Σp = 1`, `p·f_i ≥ t`; a witness
    /// exists iff the optimum is positive.
    pub fn positive_pmf_witness(&self) -> Result<Option<PmfWitness>> {
        if !self.is_exact() {
            return Err(Error::NeedsExactGenerators);
        }
        let n = self.space.len();
        let t = n;
        let mut lp = LinearProgram::new(n + 1);
        lp.set_free(t);
        lp.set_objective(t, Rational::one());
        for x in 0..n {
            lp.add_sparse_row(
                &[(x, Rational::one()), (t, -Rational::one())],
                Relation::Ge,
                Rational::zero(),
            );
        }
        let mut total = vec![Rational::one(); n + 1];
        total[t] = Rational::zero();
        lp.add_row(total, Relation::Eq, Rational::one());
        for g in &self.generators {
            let mut row = g.gamble.values().to_vec();
            row.push(-Rational::one());
            lp.add_row(row, Relation::Ge, Rational::zero());
        }
        match lp.solve() {
            LpOutcome::Optimal { value, mut point } if value.is_positive() => {
                point.truncate(n);
                Ok(Some(PmfWitness {
                    space: Arc::clone(&self.space),
                    masses: point,
                }))
            }
            LpOutcome::Optimal { .. } => Ok(None),
            other => unreachable!("witness program is feasible and bounded, got {other:?}"),
        }
    }

    /// `sup{μ : [f − μ]·I_B ∈ D}` without checking coherence first.
    ///
    /// On an incoherent cone the answer may be meaningless; an unbounded
    /// program is still reported as [`Error::IncoherentCone`].
    pub fn lower_prev_unchecked(&self, f: &Gamble, cond: &Event) -> Result<LowerPrevSolution> {
        self.check_space(f)?;
        if cond.space() != &self.space {
            return Err(Error::SpaceMismatch(
                self.space.id().to_string(),
                cond.space().id().to_string(),
            ));
        }
        cond.require_nonempty()?;
        let outside = cond.complement();
        let adm = self.admissible_on(&outside);
        let k = adm.active.len();
        let mu = k;
        let mut lp = LinearProgram::new(k + 1);
        lp.set_free(mu);
        lp.set_objective(mu, Rational::one());
        for x in 0..self.space.len() {
            let mut terms: Vec<(usize, Rational)> = adm
                .active
                .iter()
                .enumerate()
                .filter_map(|(j, &gen)| {
                    let v = self.generators[gen].gamble.value(x);
                    (!v.is_zero()).then(|| (j, v.clone()))
                })
                .collect();
            if cond.contains(x) {
                terms.push((mu, Rational::one()));
                lp.add_sparse_row(&terms, Relation::Le, f.value(x).clone());
            } else {
                lp.add_sparse_row(&terms, Relation::Le, Rational::zero());
            }
        }
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                let mut multipliers = vec![Rational::zero(); self.generators.len()];
                for (j, &gen) in adm.active.iter().enumerate() {
                    multipliers[gen] = point[j].clone();
                }
                Ok(LowerPrevSolution {
                    value,
                    multipliers,
                    slack_direction: adm.lambda,
                })
            }
            LpOutcome::Unbounded => Err(Error::IncoherentCone),
            LpOutcome::Infeasible => unreachable!("λ = 0 with μ = min f is feasible"),
        }
    }

    /// `sup{μ : [f − μ]·I_B ∈ D}` for a coherent cone.
    pub fn lower_prev(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        if !self.is_coherent() {
            return Err(Error::IncoherentCone);
        }
        Ok(self.lower_prev_unchecked(f, cond)?.value)
    }

    /// `−sup{μ : [−f − μ]·I_B ∈ D}`.
    pub fn upper_prev(&self, f: &Gamble, cond: &Event) -> Result<Rational> {
        Ok(-self.lower_prev(&f.negate(), cond)?)
    }
}

/// The lower prevision induced by a coherent cone.
pub fn lower_prev_from_cone(cone: &DesirCone, f: &Gamble, cond: &Event) -> Result<Rational> {
    cone.lower_prev(f, cond)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::space::{indicator, Space};

    fn ab() -> SpaceRef {
        Space::from_labels("X", &["a", "b"]).unwrap()
    }

    fn g(space: &SpaceRef, v: &[Rational]) -> Gamble {
        Gamble::new(space, v.to_vec()).unwrap()
    }

    #[test]
    fn vacuous_membership() {
        let x = ab();
        let cone = DesirCone::vacuous(&x);
        assert!(cone
            .member(&Gamble::from_ints(&x, &[1, 0]).unwrap())
            .unwrap());
        assert!(!cone.member(&Gamble::zero(&x)).unwrap());
        assert!(cone.is_coherent());
    }

    #[test]
    fn single_generator_membership() {
        let x = ab();
        let cone =
            DesirCone::from_gambles(&x, vec![Gamble::from_ints(&x, &[-1, 2]).unwrap()]).unwrap();
        let half = g(&x, &[ratio(-1, 2), int(1)]);
        assert!(cone.member(&half).unwrap());
        assert!(cone.member_by_simplex(&half).unwrap());
        let out = Gamble::from_ints(&x, &[-1, 1]).unwrap();
        assert!(!cone.member(&out).unwrap());
        assert!(!cone.member_by_simplex(&out).unwrap());
        assert!(cone.is_coherent());
        assert!(cone.is_coherent_by_simplex().unwrap());
    }

    #[test]
    fn opposite_generators_are_incoherent() {
        let x = ab();
        let cone = DesirCone::from_gambles(
            &x,
            vec![
                Gamble::from_ints(&x, &[1, -1]).unwrap(),
                Gamble::from_ints(&x, &[-1, 1]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!cone.is_coherent());
        assert!(!cone.is_coherent_by_simplex().unwrap());
        assert_eq!(cone.sure_loss_certificate(), Some(vec![int(1), int(1)]));
        assert_eq!(cone.positive_pmf_witness().unwrap(), None);
        assert!(cone.member(&Gamble::zero(&x)).unwrap());
    }

    #[test]
    fn witnesses() {
        let x = ab();
        let vac = DesirCone::vacuous(&x)
            .positive_pmf_witness()
            .unwrap()
            .unwrap();
        assert!(vac.masses().iter().all(|p| p.is_positive()));
        let cone =
            DesirCone::from_gambles(&x, vec![Gamble::from_ints(&x, &[-1, 2]).unwrap()]).unwrap();
        let w = cone.positive_pmf_witness().unwrap().unwrap();
        assert!(w.expectation(cone.generators()[0].gamble()).is_positive());
        assert!(w.masses().iter().all(|p| p.is_positive()));
        assert_eq!(w.masses().iter().sum::<Rational>(), int(1));
        let by_hand = g(&x, &[ratio(1, 3), ratio(2, 3)]);
        assert_eq!(
            by_hand.values()[0].clone() * int(-1) + by_hand.values()[1].clone() * int(2),
            int(1)
        );
    }

    #[test]
    fn extension() {
        let x = ab();
        let f = Gamble::from_ints(&x, &[-1, 2]).unwrap();
        let cone = DesirCone::vacuous(&x).extend_with(f.clone()).unwrap();
        assert_eq!(cone.generators().len(), 1);
        assert!(cone.member(&f).unwrap());
        let bad = DesirCone::vacuous(&x)
            .extend_with(Gamble::from_ints(&x, &[-1, -1]).unwrap())
            .unwrap();
        assert!(!bad.is_coherent());
    }

    #[test]
    fn lower_prev_vacuous() {
        let x = Space::from_labels("X", &["x1", "x2", "x3"]).unwrap();
        let cone = DesirCone::vacuous(&x);
        let f = Gamble::from_ints(&x, &[3, -1, 2]).unwrap();
        assert_eq!(cone.lower_prev(&f, &Event::full(&x)).unwrap(), int(-1));
        let b = Event::from_labels(&x, &["x1", "x3"]).unwrap();
        assert_eq!(cone.lower_prev(&f, &b).unwrap(), int(2));
        assert_eq!(cone.upper_prev(&f, &Event::full(&x)).unwrap(), int(3));
        assert_eq!(
            cone.lower_prev(&f, &Event::empty(&x)),
            Err(Error::EmptyEvent)
        );
    }

    #[test]
    fn open_generators_at_the_boundary() {
        // a precise assessment P(I_a) = 1/3 enters as two open generators
        // that sum to zero; the cone stays coherent.
        let x = ab();
        let ia = indicator(&Event::from_labels(&x, &["a"]).unwrap());
        let up = ia.shift(&ratio(-1, 3));
        let full = Event::full(&x);
        let cone = DesirCone::new(
            &x,
            vec![
                Generator::open(up.clone(), full.clone()).unwrap(),
                Generator::open(up.negate(), full.clone()).unwrap(),
            ],
        )
        .unwrap();
        assert!(cone.is_coherent());
        assert_eq!(cone.lower_prev(&ia, &full).unwrap(), ratio(1, 3));
        assert_eq!(cone.upper_prev(&ia, &full).unwrap(), ratio(1, 3));
        // but the boundary gamble itself is not desirable
        assert!(!cone.member(&up).unwrap());
        assert!(cone.member(&ia.shift(&ratio(-1, 4))).unwrap());

        // P(I_a) = 1 forces I_a − 1 ≤ 0 as an open generator: still coherent
        let sure = Generator::open(ia.shift(&int(-1)), full.clone()).unwrap();
        let cone = DesirCone::new(&x, vec![sure]).unwrap();
        assert!(cone.is_coherent());
        assert_eq!(cone.lower_prev(&ia, &full).unwrap(), int(1));
    }
}

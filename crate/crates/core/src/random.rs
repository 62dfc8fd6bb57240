//! Seeded generators of random spaces, gambles, mass functions and
//! coherent models, shared by the property suite, tests and benches.

use crate::cone::DesirCone;
use crate::lowprev::{Assessment, LinearPrevision};
use crate::rational::{min_of, Rational};
use crate::space::{Event, Gamble, Space, SpaceRef};
use num_traits::Zero;
use rand::Rng;

/// `num/den` with `num` uniform in `lo..=hi`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=hi).into(), den.into())
}

/// A space `id` with outcomes `a, b, c, …`.
pub fn space(id: &str, size: usize) -> SpaceRef {
    assert!((1..=26).contains(&size));
    let labels = (0..size)
        .map(|i| char::from(b'a' + i as u8).to_string())
        .collect();
    Space::new(id, labels).expect("distinct single-letter labels")
}

pub fn gamble<R: Rng + ?Sized>(
    rng: &mut R,
    space: &SpaceRef,
    lo: i64,
    hi: i64,
    den: i64,
) -> Gamble {
    let values = (0..space.len())
        .map(|_| rational(rng, lo, hi, den))
        .collect();
    Gamble::new(space, values).expect("length matches")
}

pub fn nonneg_gamble<R: Rng + ?Sized>(rng: &mut R, space: &SpaceRef, hi: i64, den: i64) -> Gamble {
    gamble(rng, space, 0, hi, den)
}

/// A uniformly chosen non-empty event.
pub fn event<R: Rng + ?Sized>(rng: &mut R, space: &SpaceRef) -> Event {
    let n = space.len();
    let bits = rng.gen_range(1..(1u64 << n));
    Event::from_bits(space, bits)
}

/// A mass function with integer weights in `0..=max_weight` (at least one
/// positive), or `1..=max_weight` when `allow_zeros` is unset.
pub fn pmf<R: Rng + ?Sized>(
    rng: &mut R,
    space: &SpaceRef,
    max_weight: i64,
    allow_zeros: bool,
) -> LinearPrevision {
    let lo = if allow_zeros { 0 } else { 1 };
    loop {
        let weights: Vec<i64> = (0..space.len())
            .map(|_| rng.gen_range(lo..=max_weight))
            .collect();
        let total: i64 = weights.iter().sum();
        if total > 0 {
            let masses = weights
                .iter()
                .map(|&w| Rational::new(w.into(), total.into()))
                .collect();
            return LinearPrevision::new(space, masses).expect("normalised weights");
        }
    }
}

/// A mass function together with a strictly positive fallback used for
/// conditioning events it gives probability zero: a two-level
/// lexicographic system, hence a full conditional probability.
#[derive(Debug, Clone)]
pub struct LexicographicPmf {
    pub primary: LinearPrevision,
    pub fallback: LinearPrevision,
}

impl LexicographicPmf {
    pub fn conditional(&self, f: &Gamble, cond: &Event) -> Rational {
        let level = if self.primary.probability(cond).is_zero() {
            &self.fallback
        } else {
            &self.primary
        };
        level
            .conditional(f, cond)
            .expect("fallback is strictly positive")
    }
}

/// A coherent assessment as the lower envelope of `pmfs` on `entries`
/// randomly drawn `(gamble, event)` pairs; an entry becomes a linear one
/// when all pmfs agree on it.
#[derive(Debug, Clone)]
pub struct EnvelopeModel {
    pub pmfs: Vec<LexicographicPmf>,
    pub assessment: Assessment,
}

#[derive(Debug, Clone, Copy)]
pub struct EnvelopeConfig {
    pub pmfs: usize,
    pub entries: usize,
    /// Probability that an entry is conditional on a proper event.
    pub conditional_rate: f64,
    /// Allow zero masses in the primary pmfs.
    pub allow_zeros: bool,
}

pub fn envelope_model<R: Rng + ?Sized>(
    rng: &mut R,
    space: &SpaceRef,
    config: EnvelopeConfig,
) -> EnvelopeModel {
    assert!(config.pmfs >= 1);
    let pmfs: Vec<LexicographicPmf> = (0..config.pmfs)
        .map(|_| LexicographicPmf {
            primary: pmf(rng, space, 4, config.allow_zeros),
            fallback: pmf(rng, space, 4, false),
        })
        .collect();
    let mut assessment = Assessment::new(space);
    let mut attempts = 0;
    while assessment.len() < config.entries && attempts < 8 * config.entries {
        attempts += 1;
        let f = gamble(rng, space, -3, 3, 1);
        let cond = if rng.gen_bool(config.conditional_rate) {
            event(rng, space)
        } else {
            Event::full(space)
        };
        let values: Vec<Rational> = pmfs.iter().map(|p| p.conditional(&f, &cond)).collect();
        let lower = min_of(values.iter()).expect("at least one pmf").clone();
        // a repeated pair carries the same value and is merged
        if values.iter().all(|v| *v == lower) {
            assessment.push_linear(f, cond, lower)
        } else {
            assessment.push(f, cond, lower)
        }
        .expect("envelope values are consistent");
    }
    EnvelopeModel { pmfs, assessment }
}

/// `count` exact generators with integer values in `-range..=range`.
pub fn generator_set<R: Rng + ?Sized>(
    rng: &mut R,
    space: &SpaceRef,
    count: usize,
    range: i64,
) -> DesirCone {
    let gambles = (0..count)
        .map(|_| gamble(rng, space, -range, range, 1))
        .collect();
    DesirCone::from_gambles(space, gambles).expect("gambles share the space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowprev::CondLowerPrevision;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn envelopes_are_coherent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = space("X", rng.gen_range(2..=4));
            let model = envelope_model(
                &mut rng,
                &x,
                EnvelopeConfig {
                    pmfs: 3,
                    entries: 3,
                    conditional_rate: 0.5,
                    allow_zeros: true,
                },
            );
            assert!(CondLowerPrevision::new(model.assessment).is_ok());
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = space("X", 3);
            (gamble(&mut rng, &x, -5, 5, 2), event(&mut rng, &x))
        };
        assert_eq!(draw(1), draw(1));
    }
}

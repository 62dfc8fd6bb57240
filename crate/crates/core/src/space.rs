//! Finite possibility spaces, events, gambles and binary product spaces.
//!
//! Outcome order is the declaration order and fixes the coordinate order of
//! every vector built on a space (LP columns, serialization).

use crate::error::{Error, Result};
use crate::rational::{max_of, min_of, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

/// Separator between the two coordinates of a product-space outcome label.
pub const PRODUCT_SEPARATOR: char = '|';

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Space {
    id: String,
    outcomes: Vec<String>,
}

pub type SpaceRef = Arc<Space>;

impl Space {
    pub fn new<S: Into<String>>(id: S, outcomes: Vec<String>) -> Result<SpaceRef> {
        for label in &outcomes {
            if label.contains(PRODUCT_SEPARATOR) {
                return Err(Error::ReservedSeparator(label.clone()));
            }
        }
        Self::build(id.into(), outcomes)
    }

    /// Convenience constructor from string slices.
    pub fn from_labels(id: &str, outcomes: &[&str]) -> Result<SpaceRef> {
        Self::new(id, outcomes.iter().map(|s| s.to_string()).collect())
    }

    fn build(id: String, outcomes: Vec<String>) -> Result<SpaceRef> {
        if outcomes.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = std::collections::HashSet::new();
        for label in &outcomes {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateOutcome(label.clone()));
            }
        }
        Ok(Arc::new(Space { id, outcomes }))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::UnknownOutcome {
                space: self.id.clone(),
                outcome: label.to_string(),
            })
    }
}

fn same_space(a: &SpaceRef, b: &SpaceRef) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(a.id.clone(), b.id.clone()))
    }
}

/// A subset of a space's outcomes, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    space: SpaceRef,
    members: Vec<bool>,
}

impl Event {
    pub fn from_mask(space: &SpaceRef, members: Vec<bool>) -> Result<Event> {
        if members.len() != space.len() {
            return Err(Error::LengthMismatch {
                space: space.id.clone(),
                expected: space.len(),
                got: members.len(),
            });
        }
        Ok(Event {
            space: Arc::clone(space),
            members,
        })
    }

    pub fn from_labels<S: AsRef<str>>(space: &SpaceRef, labels: &[S]) -> Result<Event> {
        let mut members = vec![false; space.len()];
        for label in labels {
            members[space.index_of(label.as_ref())?] = true;
        }
        Ok(Event {
            space: Arc::clone(space),
            members,
        })
    }

    pub fn from_indices(space: &SpaceRef, indices: &[usize]) -> Event {
        let mut members = vec![false; space.len()];
        for &i in indices {
            members[i] = true;
        }
        Event {
            space: Arc::clone(space),
            members,
        }
    }

    /// The event with bit `i` of `bits` marking outcome `i`.
    pub fn from_bits(space: &SpaceRef, bits: u64) -> Event {
        let members = (0..space.len()).map(|i| bits >> i & 1 == 1).collect();
        Event {
            space: Arc::clone(space),
            members,
        }
    }

    pub fn full(space: &SpaceRef) -> Event {
        Event {
            space: Arc::clone(space),
            members: vec![true; space.len()],
        }
    }

    pub fn empty(space: &SpaceRef) -> Event {
        Event {
            space: Arc::clone(space),
            members: vec![false; space.len()],
        }
    }

    pub fn singleton(space: &SpaceRef, index: usize) -> Event {
        Self::from_indices(space, &[index])
    }

    /// Every non-empty subset of the space, in increasing bitmask order.
    pub fn all_nonempty(space: &SpaceRef) -> Vec<Event> {
        assert!(
            space.len() < 64,
            "subset enumeration needs fewer than 64 outcomes"
        );
        (1u64..(1u64 << space.len()))
            .map(|bits| Self::from_bits(space, bits))
            .collect()
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members[index]
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&m| m)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices()
            .map(|i| self.space.outcomes[i].as_str())
            .collect()
    }

    pub fn intersection(&self, other: &Event) -> Result<Event> {
        same_space(&self.space, &other.space)?;
        Ok(self.zip_with(other, |a, b| a && b))
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        same_space(&self.space, &other.space)?;
        Ok(self.zip_with(other, |a, b| a || b))
    }

    pub fn complement(&self) -> Event {
        Event {
            space: Arc::clone(&self.space),
            members: self.members.iter().map(|&m| !m).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Event) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    pub fn is_disjoint_from(&self, other: &Event) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !(a && b))
    }

    fn zip_with(&self, other: &Event, op: impl Fn(bool, bool) -> bool) -> Event {
        Event {
            space: Arc::clone(&self.space),
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyEvent)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

/// A total map from outcomes to rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gamble {
    space: SpaceRef,
    values: Vec<Rational>,
}

impl Gamble {
    pub fn new(space: &SpaceRef, values: Vec<Rational>) -> Result<Gamble> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                space: space.id.clone(),
                expected: space.len(),
                got: values.len(),
            });
        }
        Ok(Gamble {
            space: Arc::clone(space),
            values,
        })
    }

    pub fn from_ints(space: &SpaceRef, values: &[i64]) -> Result<Gamble> {
        Self::new(
            space,
            values.iter().map(|&v| crate::rational::int(v)).collect(),
        )
    }

    pub fn constant(space: &SpaceRef, c: Rational) -> Gamble {
        Gamble {
            space: Arc::clone(space),
            values: vec![c; space.len()],
        }
    }

    pub fn zero(space: &SpaceRef) -> Gamble {
        Self::constant(space, Rational::zero())
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    fn zip_with(
        &self,
        other: &Gamble,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Gamble> {
        same_space(&self.space, &other.space)?;
        Ok(Gamble {
            space: Arc::clone(&self.space),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    pub fn map(&self, op: impl Fn(&Rational) -> Rational) -> Gamble {
        Gamble {
            space: Arc::clone(&self.space),
            values: self.values.iter().map(op).collect(),
        }
    }

    pub fn add(&self, other: &Gamble) -> Result<Gamble> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Gamble) -> Result<Gamble> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Gamble) -> Result<Gamble> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Gamble {
        self.map(|v| v * c)
    }

    pub fn negate(&self) -> Gamble {
        self.map(|v| -v)
    }

    pub fn shift(&self, c: &Rational) -> Gamble {
        self.map(|v| v + c)
    }

    pub fn abs(&self) -> Gamble {
        self.map(|v| v.abs())
    }

    /// `self · I_B`.
    pub fn restrict(&self, event: &Event) -> Result<Gamble> {
        same_space(&self.space, &event.space)?;
        Ok(Gamble {
            space: Arc::clone(&self.space),
            values: self
                .values
                .iter()
                .zip(&event.members)
                .map(|(v, &m)| if m { v.clone() } else { Rational::zero() })
                .collect(),
        })
    }

    pub fn min_over(&self, event: &Event) -> Result<Rational> {
        same_space(&self.space, &event.space)?;
        min_of(event.indices().map(|i| &self.values[i])).ok_or(Error::EmptyEvent)
    }

    pub fn max_over(&self, event: &Event) -> Result<Rational> {
        same_space(&self.space, &event.space)?;
        max_of(event.indices().map(|i| &self.values[i])).ok_or(Error::EmptyEvent)
    }

    pub fn min(&self) -> Rational {
        min_of(&self.values).expect("spaces are non-empty")
    }

    pub fn max(&self) -> Rational {
        max_of(&self.values).expect("spaces are non-empty")
    }

    pub fn is_nonneg(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_nonpos(&self) -> bool {
        self.values.iter().all(|v| !v.is_positive())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `f ≥ 0` and `f ≠ 0`.
    pub fn is_positive(&self) -> bool {
        self.is_nonneg() && !self.is_zero()
    }

    /// `f(x) ≥ g(x)` for every `x` in `event`.
    pub fn dominates_on(&self, other: &Gamble, event: &Event) -> Result<bool> {
        same_space(&self.space, &other.space)?;
        same_space(&self.space, &event.space)?;
        Ok(event.indices().all(|i| self.values[i] >= other.values[i]))
    }

    /// The level set `{x : f(x) ≥ r}`.
    pub fn level_set(&self, r: &Rational) -> Event {
        Event {
            space: Arc::clone(&self.space),
            members: self.values.iter().map(|v| v >= r).collect(),
        }
    }

    /// Distinct values in increasing order.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let mut values = self.values.clone();
        values.sort();
        values.dedup();
        values
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn indicator(event: &Event) -> Gamble {
    Gamble {
        space: Arc::clone(&event.space),
        values: event
            .members
            .iter()
            .map(|&m| if m { Rational::one() } else { Rational::zero() })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// The logically independent product `X₁ × X₂` of two spaces.
///
/// Joint outcomes are ordered left-major: `(x₁, x₂)` sits at
/// `index(x₁) · |X₂| + index(x₂)` and is labelled `"x₁|x₂"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    left: SpaceRef,
    right: SpaceRef,
    joint: SpaceRef,
}

impl ProductSpace {
    pub fn new(left: &SpaceRef, right: &SpaceRef) -> ProductSpace {
        let mut labels = Vec::with_capacity(left.len() * right.len());
        for a in &left.outcomes {
            for b in &right.outcomes {
                labels.push(format!("{a}{PRODUCT_SEPARATOR}{b}"));
            }
        }
        let id = format!("{}*{}", left.id, right.id);
        let joint = Space::build(id, labels).expect("product of valid spaces is valid");
        ProductSpace {
            left: Arc::clone(left),
            right: Arc::clone(right),
            joint,
        }
    }

    pub fn left(&self) -> &SpaceRef {
        &self.left
    }

    pub fn right(&self) -> &SpaceRef {
        &self.right
    }

    pub fn factor(&self, side: Side) -> &SpaceRef {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn joint(&self) -> &SpaceRef {
        &self.joint
    }

    pub fn index(&self, left: usize, right: usize) -> usize {
        left * self.right.len() + right
    }

    /// Coordinates `(x₁, x₂)` of a joint index.
    pub fn coords(&self, joint: usize) -> (usize, usize) {
        (joint / self.right.len(), joint % self.right.len())
    }

    fn coord(&self, joint: usize, side: Side) -> usize {
        let (a, b) = self.coords(joint);
        match side {
            Side::Left => a,
            Side::Right => b,
        }
    }

    pub fn swapped(&self) -> ProductSpace {
        ProductSpace::new(&self.right, &self.left)
    }

    /// `f(X_i)`: the joint gamble that only looks at coordinate `side`.
    pub fn cylindrical_extension(&self, g: &Gamble, side: Side) -> Result<Gamble> {
        same_space(self.factor(side), &g.space)?;
        let values = (0..self.joint.len())
            .map(|k| g.values[self.coord(k, side)].clone())
            .collect();
        Ok(Gamble {
            space: Arc::clone(&self.joint),
            values,
        })
    }

    /// `B × X₂` or `X₁ × B`.
    pub fn extend_event(&self, event: &Event, side: Side) -> Result<Event> {
        same_space(self.factor(side), &event.space)?;
        let members = (0..self.joint.len())
            .map(|k| event.members[self.coord(k, side)])
            .collect();
        Ok(Event {
            space: Arc::clone(&self.joint),
            members,
        })
    }

    /// `B₁ × B₂`.
    pub fn rectangle(&self, left: &Event, right: &Event) -> Result<Event> {
        self.extend_event(left, Side::Left)?
            .intersection(&self.extend_event(right, Side::Right)?)
    }

    /// `f(x, X_other)` as a gamble on the other factor, for a fixed outcome
    /// index `at` on `side`.
    pub fn section(&self, f: &Gamble, side: Side, at: usize) -> Result<Gamble> {
        same_space(&self.joint, &f.space)?;
        let other = side.other();
        let values = (0..self.factor(other).len())
            .map(|j| {
                let k = match side {
                    Side::Left => self.index(at, j),
                    Side::Right => self.index(j, at),
                };
                f.values[k].clone()
            })
            .collect();
        Ok(Gamble {
            space: Arc::clone(self.factor(other)),
            values,
        })
    }

    /// Relabels a joint gamble on `X₁ × X₂` as a gamble on `X₂ × X₁`.
    pub fn transpose(&self, f: &Gamble, swapped: &ProductSpace) -> Result<Gamble> {
        same_space(&self.joint, &f.space)?;
        let values = (0..swapped.joint.len())
            .map(|k| {
                let (b, a) = swapped.coords(k);
                f.values[self.index(a, b)].clone()
            })
            .collect();
        Ok(Gamble {
            space: Arc::clone(&swapped.joint),
            values,
        })
    }

    pub fn transpose_event(&self, e: &Event, swapped: &ProductSpace) -> Result<Event> {
        same_space(&self.joint, &e.space)?;
        let members = (0..swapped.joint.len())
            .map(|k| {
                let (b, a) = swapped.coords(k);
                e.members[self.index(a, b)]
            })
            .collect();
        Ok(Event {
            space: Arc::clone(&swapped.joint),
            members,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ab() -> SpaceRef {
        Space::from_labels("X", &["a", "b"]).unwrap()
    }

    #[test]
    fn rejects_bad_spaces() {
        assert_eq!(Space::from_labels("X", &[]), Err(Error::EmptySpace));
        assert_eq!(
            Space::from_labels("X", &["a", "a"]),
            Err(Error::DuplicateOutcome("a".into()))
        );
        assert_eq!(
            Space::from_labels("X", &["a|b"]),
            Err(Error::ReservedSeparator("a|b".into()))
        );
    }

    #[test]
    fn indicators() {
        let x = ab();
        assert_eq!(indicator(&Event::empty(&x)).values(), &[int(0), int(0)]);
        assert_eq!(
            indicator(&Event::from_labels(&x, &["a"]).unwrap()).values(),
            &[int(1), int(0)]
        );
        let xyz = Space::from_labels("Y", &["a", "b", "c"]).unwrap();
        assert_eq!(
            indicator(&Event::full(&xyz)),
            Gamble::constant(&xyz, int(1))
        );
    }

    #[test]
    fn pointwise_algebra() {
        let x = ab();
        let f = Gamble::from_ints(&x, &[1, 2]).unwrap();
        let g = Gamble::from_ints(&x, &[0, -2]).unwrap();
        assert_eq!(f.add(&g).unwrap(), Gamble::from_ints(&x, &[1, 0]).unwrap());
        let h = Gamble::from_ints(&x, &[2, 4]).unwrap();
        assert_eq!(h.scale(&ratio(1, 2)), f);
        let s3 = Space::from_labels("S", &["x1", "x2", "x3"]).unwrap();
        let k = Gamble::from_ints(&s3, &[3, -1, 2]).unwrap();
        let b = Event::from_labels(&s3, &["x2", "x3"]).unwrap();
        assert_eq!(k.min_over(&b).unwrap(), int(-1));
        assert_eq!(k.max_over(&b).unwrap(), int(2));
        assert_eq!(k.min_over(&Event::empty(&s3)), Err(Error::EmptyEvent));
        assert!(matches!(f.add(&k), Err(Error::SpaceMismatch(..))));
        assert!(Gamble::zero(&x).is_zero() && Gamble::zero(&x).is_nonneg());
        assert!(!Gamble::zero(&x).is_positive());
    }

    #[test]
    fn cylindrical_extension_examples() {
        let x1 = ab();
        let x2 = Space::from_labels("U", &["u"]).unwrap();
        let prod = ProductSpace::new(&x1, &x2);
        let g = Gamble::from_ints(&x1, &[1, 2]).unwrap();
        let ext = prod.cylindrical_extension(&g, Side::Left).unwrap();
        assert_eq!(ext.values(), &[int(1), int(2)]);
        assert_eq!(
            prod.joint().outcomes(),
            &["a|u".to_string(), "b|u".to_string()]
        );
        assert!(prod.cylindrical_extension(&g, Side::Right).is_err());

        let uv = Space::from_labels("V", &["u", "v"]).unwrap();
        let prod = ProductSpace::new(&x1, &uv);
        let h = Gamble::from_ints(&uv, &[1, 0]).unwrap();
        let ext = prod.cylindrical_extension(&h, Side::Right).unwrap();
        for k in 0..4 {
            let (_, j) = prod.coords(k);
            assert_eq!(ext.value(k), h.value(j));
        }
        let b1 = Event::from_labels(&x1, &["a"]).unwrap();
        let b2 = Event::from_labels(&uv, &["v"]).unwrap();
        let product = prod
            .cylindrical_extension(&indicator(&b1), Side::Left)
            .unwrap()
            .mul(
                &prod
                    .cylindrical_extension(&indicator(&b2), Side::Right)
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(product, indicator(&prod.rectangle(&b1, &b2).unwrap()));
    }

    #[test]
    fn sections_and_transpose() {
        let x1 = ab();
        let x2 = Space::from_labels("V", &["u", "v", "w"]).unwrap();
        let prod = ProductSpace::new(&x1, &x2);
        let f = Gamble::from_ints(prod.joint(), &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(
            prod.section(&f, Side::Left, 1).unwrap().values(),
            &[int(4), int(5), int(6)]
        );
        assert_eq!(
            prod.section(&f, Side::Right, 2).unwrap().values(),
            &[int(3), int(6)]
        );
        let swapped = prod.swapped();
        let t = prod.transpose(&f, &swapped).unwrap();
        assert_eq!(
            t.values(),
            &[int(1), int(4), int(2), int(5), int(3), int(6)]
        );
        assert_eq!(swapped.transpose(&t, &prod).unwrap(), f);
    }
}

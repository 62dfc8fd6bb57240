//! Families of conditioning events.

use crate::error::{Error, Result};
use crate::space::{Event, SpaceRef};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Atoms,
    AllNonempty,
    Custom,
}

/// A finite set of non-empty events on one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventFamily {
    space: SpaceRef,
    kind: FamilyKind,
    events: Vec<Event>,
}

impl EventFamily {
    /// `{{x} : x ∈ X}`.
    pub fn atoms(space: &SpaceRef) -> EventFamily {
        EventFamily {
            space: Arc::clone(space),
            kind: FamilyKind::Atoms,
            events: (0..space.len())
                .map(|x| Event::singleton(space, x))
                .collect(),
        }
    }

    /// Every non-empty subset of the space.
    pub fn all_nonempty(space: &SpaceRef) -> EventFamily {
        EventFamily {
            space: Arc::clone(space),
            kind: FamilyKind::AllNonempty,
            events: Event::all_nonempty(space),
        }
    }

    /// Taken literally: duplicates are dropped, nothing is added.
    pub fn custom(space: &SpaceRef, events: Vec<Event>) -> Result<EventFamily> {
        let mut kept: Vec<Event> = Vec::with_capacity(events.len());
        for e in events {
            if e.space() != space {
                return Err(Error::SpaceMismatch(
                    space.id().to_string(),
                    e.space().id().to_string(),
                ));
            }
            e.require_nonempty()?;
            if !kept.contains(&e) {
                kept.push(e);
            }
        }
        Ok(EventFamily {
            space: Arc::clone(space),
            kind: FamilyKind::Custom,
            events: kept,
        })
    }

    pub fn empty(space: &SpaceRef) -> EventFamily {
        EventFamily {
            space: Arc::clone(space),
            kind: FamilyKind::Custom,
            events: Vec::new(),
        }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn contains(&self, e: &Event) -> bool {
        self.events.contains(e)
    }

    /// Every union of pairwise disjoint members, as a custom family.
    pub fn disjoint_union_closure(&self) -> EventFamily {
        let mut closed = self.events.clone();
        let mut grew = true;
        while grew {
            grew = false;
            let snapshot = closed.clone();
            for a in &snapshot {
                for b in &self.events {
                    if a.is_disjoint_from(b) {
                        let u = a.union(b).expect("same space");
                        if !closed.contains(&u) {
                            closed.push(u);
                            grew = true;
                        }
                    }
                }
            }
        }
        EventFamily {
            space: Arc::clone(&self.space),
            kind: FamilyKind::Custom,
            events: closed,
        }
    }
}

//! JSON model files.
//!
//! A file lists spaces, gambles, events, assessments and event families by
//! id. Rationals are strings in canonical `p/q` form. Gambles and events may
//! live on the product `A*B` of two declared (or externally supplied)
//! spaces, with compound outcome keys `a|b`.

use desir_core::{
    format_rational, parse_canonical, Assessment, Entry, Event, EventFamily, Gamble, ProductSpace,
    Space, SpaceRef,
};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

pub const ALL: &str = "ALL";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpace {
    pub id: String,
    pub outcomes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGamble {
    pub id: String,
    pub space: String,
    pub values: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEvent {
    pub id: String,
    pub space: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAssessment {
    pub gamble: String,
    pub event: String,
    pub lower: String,
    #[serde(default)]
    pub linear: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawFamilyKind {
    Atoms,
    All,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFamily {
    pub id: String,
    pub space: String,
    pub kind: RawFamilyKind,
    #[serde(default)]
    pub events: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default)]
    pub spaces: Vec<RawSpace>,
    #[serde(default)]
    pub gambles: Vec<RawGamble>,
    #[serde(default)]
    pub events: Vec<RawEvent>,
    #[serde(default)]
    pub assessments: Vec<RawAssessment>,
    #[serde(default)]
    pub families: Vec<RawFamily>,
}

/// Anything wrong with the input file: syntax, references or values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

macro_rules! bail {
    ($($arg:tt)*) => { return Err(InputError(format!($($arg)*))) };
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, InputError> {
        serde_json::from_str(text).map_err(|e| InputError(format!("malformed model: {e}")))
    }

    pub fn read(path: &Path) -> Result<ModelFile, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
        ModelFile::parse(&text)
    }

    /// Pretty JSON with two-space indentation and a final newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Resolves every reference. `external` spaces (from another model)
    /// can be named by the file and combined into products.
    pub fn resolve(&self, external: &[SpaceRef]) -> Result<Model, InputError> {
        let mut spaces: IndexMap<String, SpaceRef> = IndexMap::new();
        for s in external {
            spaces.insert(s.id().to_string(), s.clone());
        }
        for raw in &self.spaces {
            if raw.id.contains('*') {
                bail!("space id {:?} may not contain '*'", raw.id);
            }
            let space = Space::new(raw.id.clone(), raw.outcomes.clone())
                .map_err(|e| InputError(format!("space {}: {e}", raw.id)))?;
            if spaces.insert(raw.id.clone(), space).is_some() {
                bail!("duplicate space id {:?}", raw.id);
            }
        }
        let mut model = Model {
            spaces,
            products: IndexMap::new(),
            gambles: IndexMap::new(),
            events: IndexMap::new(),
            assessments: Vec::new(),
            families: IndexMap::new(),
        };
        for raw in &self.gambles {
            let space = model.space_for(&raw.space)?;
            let mut values = vec![None; space.len()];
            for (label, text) in &raw.values {
                let x = space.index_of(label).map_err(|_| {
                    InputError(format!("gamble {}: unknown outcome {label:?}", raw.id))
                })?;
                let v = parse_canonical(text)
                    .map_err(|e| InputError(format!("gamble {}: {e}", raw.id)))?;
                values[x] = Some(v);
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(x, v)| {
                    v.ok_or_else(|| {
                        InputError(format!(
                            "gamble {}: no value for {:?}",
                            raw.id,
                            space.outcomes()[x]
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let g = Gamble::new(&space, values).expect("one value per outcome");
            if model.gambles.insert(raw.id.clone(), g).is_some() {
                bail!("duplicate gamble id {:?}", raw.id);
            }
        }
        for raw in &self.events {
            if raw.id == ALL {
                bail!("event id {ALL:?} is reserved");
            }
            let space = model.space_for(&raw.space)?;
            let e = Event::from_labels(&space, &raw.members)
                .map_err(|e| InputError(format!("event {}: {e}", raw.id)))?;
            if model.events.insert(raw.id.clone(), e).is_some() {
                bail!("duplicate event id {:?}", raw.id);
            }
        }
        for (i, raw) in self.assessments.iter().enumerate() {
            let g = model.gamble(&raw.gamble)?.clone();
            let e = model.event_on(&raw.event, g.space())?;
            let value = parse_canonical(&raw.lower)
                .map_err(|e| InputError(format!("assessment {i}: {e}")))?;
            model.assessments.push(Entry {
                gamble: g,
                event: e,
                value,
                linear: raw.linear,
            });
        }
        for raw in &self.families {
            let space = model.space_for(&raw.space)?;
            let family = match raw.kind {
                RawFamilyKind::Atoms => EventFamily::atoms(&space),
                RawFamilyKind::All => EventFamily::all_nonempty(&space),
                RawFamilyKind::Custom => {
                    let events = raw
                        .events
                        .iter()
                        .map(|id| model.event_on(id, &space))
                        .collect::<Result<Vec<_>, _>>()?;
                    EventFamily::custom(&space, events)
                        .map_err(|e| InputError(format!("family {}: {e}", raw.id)))?
                }
            };
            if raw.kind != RawFamilyKind::Custom && !raw.events.is_empty() {
                bail!("family {}: only custom families list events", raw.id);
            }
            if model.families.insert(raw.id.clone(), family).is_some() {
                bail!("duplicate family id {:?}", raw.id);
            }
        }
        Ok(model)
    }
}

/// A resolved model file.
#[derive(Debug, Clone)]
pub struct Model {
    spaces: IndexMap<String, SpaceRef>,
    products: IndexMap<String, ProductSpace>,
    gambles: IndexMap<String, Gamble>,
    events: IndexMap<String, Event>,
    assessments: Vec<Entry>,
    families: IndexMap<String, EventFamily>,
}

impl Model {
    fn space_for(&mut self, id: &str) -> Result<SpaceRef, InputError> {
        if let Some(s) = self.spaces.get(id) {
            return Ok(s.clone());
        }
        if let Some(p) = self.products.get(id) {
            return Ok(p.joint().clone());
        }
        let Some((l, r)) = id.split_once('*') else {
            bail!("unknown space {id:?}");
        };
        let (Some(left), Some(right)) = (self.spaces.get(l), self.spaces.get(r)) else {
            bail!("unknown factor in product space {id:?}");
        };
        let prod = ProductSpace::new(left, right);
        let joint = prod.joint().clone();
        self.products.insert(id.to_string(), prod);
        Ok(joint)
    }

    pub fn spaces(&self) -> impl Iterator<Item = &SpaceRef> {
        self.spaces.values()
    }

    pub fn gamble(&self, id: &str) -> Result<&Gamble, InputError> {
        self.gambles
            .get(id)
            .ok_or_else(|| InputError(format!("unknown gamble {id:?}")))
    }

    /// The event `id`, or the whole of `space` for `ALL`.
    pub fn event_on(&self, id: &str, space: &SpaceRef) -> Result<Event, InputError> {
        if id == ALL {
            return Ok(Event::full(space));
        }
        let e = self
            .events
            .get(id)
            .ok_or_else(|| InputError(format!("unknown event {id:?}")))?;
        if e.space() != space {
            bail!(
                "event {id:?} is on {} but {} is needed",
                e.space().id(),
                space.id()
            );
        }
        Ok(e.clone())
    }

    pub fn family(&self, id: &str) -> Result<&EventFamily, InputError> {
        self.families
            .get(id)
            .ok_or_else(|| InputError(format!("unknown family {id:?}")))
    }

    /// The space carrying the assessments. Without assessments the model
    /// must have exactly one declared space.
    pub fn assessment_space(&self) -> Result<SpaceRef, InputError> {
        if let Some(e) = self.assessments.first() {
            let space = e.gamble.space().clone();
            if self.assessments.iter().any(|e| e.gamble.space() != &space) {
                bail!("assessments span more than one space");
            }
            return Ok(space);
        }
        let mut it = self.spaces.values();
        match (it.next(), it.next()) {
            (Some(s), None) => Ok(s.clone()),
            _ => bail!("a model without assessments must declare exactly one space"),
        }
    }

    pub fn assessment(&self) -> Result<Assessment, InputError> {
        let space = self.assessment_space()?;
        let mut a = Assessment::new(&space);
        for e in &self.assessments {
            a.push_entry(e.clone())
                .map_err(|err| InputError(format!("assessment on {}: {err}", e.gamble)))?;
        }
        Ok(a)
    }

    /// Converts back to file form, listing gamble values in outcome order.
    pub fn to_file(&self, source: &ModelFile) -> ModelFile {
        let gambles = source
            .gambles
            .iter()
            .map(|raw| {
                let g = &self.gambles[&raw.id];
                RawGamble {
                    id: raw.id.clone(),
                    space: raw.space.clone(),
                    values: g
                        .space()
                        .outcomes()
                        .iter()
                        .zip(g.values())
                        .map(|(l, v)| (l.clone(), format_rational(v)))
                        .collect(),
                }
            })
            .collect();
        let events = source
            .events
            .iter()
            .map(|raw| RawEvent {
                id: raw.id.clone(),
                space: raw.space.clone(),
                members: self.events[&raw.id]
                    .labels()
                    .into_iter()
                    .map(String::from)
                    .collect(),
            })
            .collect();
        let assessments = source
            .assessments
            .iter()
            .zip(&self.assessments)
            .map(|(raw, e)| RawAssessment {
                gamble: raw.gamble.clone(),
                event: raw.event.clone(),
                lower: format_rational(&e.value),
                linear: e.linear,
            })
            .collect();
        ModelFile {
            spaces: source.spaces.clone(),
            gambles,
            events,
            assessments,
            families: source.families.clone(),
        }
    }
}

/// A model file holding one assessment, with generated ids `f0, f1, …`
/// for gambles and `B0, B1, …` for events.
pub fn from_assessment(assessment: &Assessment) -> ModelFile {
    let space = assessment.space();
    let mut file = ModelFile {
        spaces: vec![RawSpace {
            id: space.id().to_string(),
            outcomes: space.outcomes().to_vec(),
        }],
        ..ModelFile::default()
    };
    let mut gambles: Vec<&Gamble> = Vec::new();
    let mut events: Vec<&Event> = Vec::new();
    for e in assessment.entries() {
        let gi = gambles
            .iter()
            .position(|g| **g == e.gamble)
            .unwrap_or_else(|| {
                gambles.push(&e.gamble);
                gambles.len() - 1
            });
        let event = if e.event.is_full() {
            ALL.to_string()
        } else {
            let bi = events
                .iter()
                .position(|b| **b == e.event)
                .unwrap_or_else(|| {
                    events.push(&e.event);
                    events.len() - 1
                });
            format!("B{bi}")
        };
        file.assessments.push(RawAssessment {
            gamble: format!("f{gi}"),
            event,
            lower: format_rational(&e.value),
            linear: e.linear,
        });
    }
    file.gambles = gambles
        .iter()
        .enumerate()
        .map(|(i, g)| RawGamble {
            id: format!("f{i}"),
            space: space.id().to_string(),
            values: space
                .outcomes()
                .iter()
                .cloned()
                .zip(g.values().iter().map(format_rational))
                .collect(),
        })
        .collect();
    file.events = events
        .iter()
        .enumerate()
        .map(|(i, b)| RawEvent {
            id: format!("B{i}"),
            space: space.id().to_string(),
            members: b.labels().into_iter().map(String::from).collect(),
        })
        .collect();
    file
}

/// Parses, resolves and re-serializes: the identity on canonical files.
pub fn normalize(text: &str) -> Result<String, InputError> {
    let file = ModelFile::parse(text)?;
    let model = file.resolve(&[])?;
    Ok(model.to_file(&file).to_canonical_string())
}

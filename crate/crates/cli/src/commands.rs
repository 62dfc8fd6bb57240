//! The query commands, as functions from parsed inputs to a [`Report`].

use crate::model::{InputError, Model, ModelFile, RawAssessment, ALL};
use desir_core::{
    check_williams_coherence, dominating_linear_previsions, field_criterion, format_rational,
    level_set_approximation, measurability_witness, simple_representation, Approximation,
    Assessment, CondLowerPrevision, Error, Event, EventFamily, Gamble, IndependentNaturalExtension,
    LowerPrevision, ProductSpace, Rational, Side, SpaceRef, Term, Verdict, Violation,
    ViolationKind,
};
use serde_json::{json, Value};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    SuiteFailure = 1,
    Incoherent = 2,
    InputError = 3,
}

/// What a command prints, in both output formats, and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub status: ExitStatus,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn input_error(err: &InputError) -> Report {
        Report {
            status: ExitStatus::InputError,
            text: format!("error: {err}\n"),
            json: json!({ "error": err.to_string() }),
        }
    }

    pub fn render(&self, json_output: bool) -> String {
        if json_output {
            let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

impl From<InputError> for Report {
    fn from(err: InputError) -> Report {
        Report::input_error(&err)
    }
}

fn input(err: Error) -> InputError {
    InputError(err.to_string())
}

/// Human names for assessment entries: `gamble|event` ids from the file.
fn entry_names(file: &ModelFile, assessment: &Assessment, model: &Model) -> Vec<String> {
    assessment
        .entries()
        .iter()
        .map(|e| {
            file.assessments
                .iter()
                .find(|raw: &&RawAssessment| {
                    model.gamble(&raw.gamble).is_ok_and(|g| *g == e.gamble)
                        && model
                            .event_on(&raw.event, e.gamble.space())
                            .is_ok_and(|b| b == e.event)
                })
                .map(|raw| format!("{}|{}", raw.gamble, raw.event))
                .unwrap_or_else(|| format!("{}|{}", e.gamble, e.event))
        })
        .collect()
}

fn term_json(t: &Term, names: &[String]) -> Value {
    json!({
        "entry": names[t.source.entry],
        "conjugate": t.source.conjugate,
        "multiplier": format_rational(&t.multiplier),
    })
}

fn term_text(out: &mut String, role: &str, t: &Term, names: &[String]) {
    let conj = if t.source.conjugate {
        " (conjugate)"
    } else {
        ""
    };
    let _ = writeln!(
        out,
        "  {role} {}{conj} x {}",
        names[t.source.entry],
        format_rational(&t.multiplier)
    );
}

fn violation_report(v: &Violation, names: &[String]) -> Report {
    let kind = match v.kind {
        ViolationKind::SureLoss => "sure-loss",
        ViolationKind::NotReproduced => "not-reproduced",
    };
    let mut text = format!("violation: {kind}\n");
    for t in &v.buy {
        term_text(&mut text, "buy", t, names);
    }
    if let Some(t) = &v.sell {
        term_text(&mut text, "sell", t, names);
    }
    if let Some(ne) = &v.natural_extension {
        let _ = writeln!(text, "  natural extension {}", format_rational(ne));
    }
    let _ = writeln!(text, "  sup {}", format_rational(&v.sup_value));
    Report {
        status: ExitStatus::Incoherent,
        text,
        json: json!({
            "verdict": "incoherent",
            "kind": kind,
            "buy": v.buy.iter().map(|t| term_json(t, names)).collect::<Vec<_>>(),
            "sell": v.sell.as_ref().map(|t| term_json(t, names)),
            "natural_extension": v.natural_extension.as_ref().map(format_rational),
            "sup": format_rational(&v.sup_value),
        }),
    }
}

/// Loads the model's assessment and checks it; `Err` carries the report
/// for an incoherent model.
fn coherent_model(
    file: &ModelFile,
    model: &Model,
) -> Result<Result<CondLowerPrevision, Report>, InputError> {
    let assessment = model.assessment()?;
    Ok(match check_williams_coherence(&assessment) {
        Verdict::Coherent => Ok(CondLowerPrevision::new_unchecked(assessment)),
        Verdict::Violation(v) => Err(violation_report(&v, &entry_names(file, &assessment, model))),
    })
}

pub fn check(file: &ModelFile) -> Report {
    let run = || -> Result<Report, InputError> {
        let model = file.resolve(&[])?;
        Ok(match coherent_model(file, &model)? {
            Ok(_) => Report {
                status: ExitStatus::Ok,
                text: "coherent\n".into(),
                json: json!({ "verdict": "coherent" }),
            },
            Err(report) => report,
        })
    };
    run().unwrap_or_else(Report::from)
}

fn value_report(value: &Rational, certificate: Value) -> Report {
    let v = format_rational(value);
    Report {
        status: ExitStatus::Ok,
        text: format!("{v}\n"),
        json: json!({ "value": v, "certificate": certificate }),
    }
}

fn incoherent_value(mut report: Report) -> Report {
    report.json = json!({ "value": "incoherent", "certificate": report.json });
    report.text = format!("incoherent\n{}", report.text);
    report
}

pub struct NatexQuery<'a> {
    pub gamble: &'a str,
    pub event: &'a str,
    pub upper: bool,
}

pub fn natex(file: &ModelFile, q: &NatexQuery<'_>) -> Report {
    let run = || -> Result<Report, InputError> {
        let model = file.resolve(&[])?;
        let f = model.gamble(q.gamble)?.clone();
        let b = model.event_on(q.event, f.space())?;
        let p = match coherent_model(file, &model)? {
            Ok(p) => p,
            Err(report) => return Ok(incoherent_value(report)),
        };
        if f.space() != p.space() {
            return Err(InputError(format!(
                "gamble {:?} is on {} but the assessments are on {}",
                q.gamble,
                f.space().id(),
                p.space().id()
            )));
        }
        let target = if q.upper { f.negate() } else { f.clone() };
        let sol = p.cone().lower_prev_unchecked(&target, &b).map_err(input)?;
        let value = if q.upper {
            -&sol.value
        } else {
            sol.value.clone()
        };
        let names = entry_names(file, p.assessment(), &model);
        let sources = p.assessment().sources();
        let multipliers: Vec<Value> = sources
            .iter()
            .zip(&sol.multipliers)
            .filter(|(_, m)| **m != Rational::from_integer(0.into()))
            .map(|(s, m)| {
                json!({
                    "entry": names[s.entry],
                    "conjugate": s.conjugate,
                    "multiplier": format_rational(m),
                })
            })
            .collect();
        // an attaining mass function, when one exists
        let pmf = match dominating_linear_previsions(&p, &f, &b) {
            Ok((lo, hi)) => {
                let chosen = if q.upper { hi } else { lo };
                (chosen.conditional(&f, &b).ok() == Some(value.clone())).then(|| {
                    let masses: serde_json::Map<String, Value> = p
                        .space()
                        .outcomes()
                        .iter()
                        .zip(chosen.masses())
                        .map(|(l, m)| (l.clone(), Value::String(format_rational(m))))
                        .collect();
                    Value::Object(masses)
                })
            }
            Err(Error::ConditioningBeyondSupport) => None,
            Err(e) => return Err(input(e)),
        };
        Ok(value_report(
            &value,
            json!({ "multipliers": multipliers, "pmf": pmf }),
        ))
    };
    run().unwrap_or_else(Report::from)
}

/// `atoms`, `all`, `empty`, or the id of a family declared in the model.
pub fn family_for(name: &str, model: &Model, space: &SpaceRef) -> Result<EventFamily, InputError> {
    let family = match name {
        "atoms" => EventFamily::atoms(space),
        "all" => EventFamily::all_nonempty(space),
        "empty" => EventFamily::empty(space),
        id => model.family(id)?.clone(),
    };
    if family.space() != space {
        return Err(InputError(format!(
            "family {name:?} is not on {}",
            space.id()
        )));
    }
    Ok(family)
}

pub struct IneQuery<'a> {
    pub family1: &'a str,
    pub family2: &'a str,
    pub gamble: &'a str,
    pub event: &'a str,
    pub upper: bool,
}

/// Looks `id` up in the joint file, then as a marginal on either side.
fn joint_gamble(
    id: &str,
    prod: &ProductSpace,
    joint: Option<&Model>,
    m1: &Model,
    m2: &Model,
) -> Result<Gamble, InputError> {
    if let Some(g) = joint.and_then(|j| j.gamble(id).ok()) {
        if g.space() != prod.joint() {
            return Err(InputError(format!(
                "gamble {id:?} is not on {}",
                prod.joint().id()
            )));
        }
        return Ok(g.clone());
    }
    for (model, side) in [(m1, Side::Left), (m2, Side::Right)] {
        if let Ok(g) = model.gamble(id) {
            return prod.cylindrical_extension(g, side).map_err(input);
        }
    }
    Err(InputError(format!("unknown gamble {id:?}")))
}

fn joint_event(
    id: &str,
    prod: &ProductSpace,
    joint: Option<&Model>,
    m1: &Model,
    m2: &Model,
) -> Result<Event, InputError> {
    if id == ALL {
        return Ok(Event::full(prod.joint()));
    }
    if let Some(j) = joint {
        if let Ok(e) = j.event_on(id, prod.joint()) {
            return Ok(e);
        }
    }
    for (model, side) in [(m1, Side::Left), (m2, Side::Right)] {
        if let Ok(e) = model.event_on(id, prod.factor(side)) {
            return prod.extend_event(&e, side).map_err(input);
        }
    }
    Err(InputError(format!("unknown event {id:?}")))
}

pub fn ine(
    file1: &ModelFile,
    file2: &ModelFile,
    joint: Option<&ModelFile>,
    q: &IneQuery<'_>,
) -> Report {
    let run = || -> Result<Report, InputError> {
        let m1 = file1.resolve(&[])?;
        let m2 = file2.resolve(&[])?;
        let (x1, x2) = (m1.assessment_space()?, m2.assessment_space()?);
        if x1.id() == x2.id() {
            return Err(InputError(format!(
                "both marginal models use the space id {:?}",
                x1.id()
            )));
        }
        let jm = joint
            .map(|j| j.resolve(&[x1.clone(), x2.clone()]))
            .transpose()?;
        let prod = ProductSpace::new(&x1, &x2);
        let f = joint_gamble(q.gamble, &prod, jm.as_ref(), &m1, &m2)?;
        let b = joint_event(q.event, &prod, jm.as_ref(), &m1, &m2)?;
        let b1 = family_for(q.family1, &m1, &x1)?;
        let b2 = family_for(q.family2, &m2, &x2)?;
        let p1 = match coherent_model(file1, &m1)? {
            Ok(p) => p,
            Err(report) => return Ok(incoherent_value(report)),
        };
        let p2 = match coherent_model(file2, &m2)? {
            Ok(p) => p,
            Err(report) => return Ok(incoherent_value(report)),
        };
        let ine = IndependentNaturalExtension::new(&p1, &p2, &b1, &b2).map_err(input)?;
        let value = if q.upper {
            ine.upper(&f, &b)
        } else {
            ine.lower(&f, &b)
        }
        .map_err(input)?;
        Ok(value_report(&value, Value::Null))
    };
    run().unwrap_or_else(Report::from)
}

pub struct MeasurableQuery<'a> {
    pub gamble: &'a str,
    pub family: &'a str,
    pub levels: u32,
}

pub fn measurable(file: &ModelFile, q: &MeasurableQuery<'_>) -> Report {
    let run = || -> Result<Report, InputError> {
        let model = file.resolve(&[])?;
        let g = model.gamble(q.gamble)?.clone();
        let family = family_for(q.family, &model, g.space())?;
        let witness = measurability_witness(&g, &family).map_err(input)?;
        let representation = simple_representation(&g, &family).map_err(input)?;
        let field = field_criterion(&g, &family).map_err(input)?;
        let approximation = level_set_approximation(&g, &family, q.levels).map_err(input)?;
        let mut text = String::new();
        let rep_json = representation.as_ref().map(|rep| {
            json!({
                "constant": format_rational(&rep.constant),
                "terms": rep.terms.iter().map(|(e, c)| json!({
                    "event": e.labels(),
                    "coefficient": format_rational(c),
                })).collect::<Vec<_>>(),
            })
        });
        match (&witness, &representation) {
            (Ok(()), Some(rep)) => {
                let _ = write!(text, "measurable\n  {}", format_rational(&rep.constant));
                for (e, c) in &rep.terms {
                    let _ = write!(text, " + {}·I{}", format_rational(c), e);
                }
                text.push('\n');
            }
            (Err(level), _) => {
                let _ = writeln!(
                    text,
                    "not measurable\n  level set at {} does not decompose",
                    format_rational(level)
                );
            }
            (Ok(()), None) => unreachable!("a measurable gamble has a representation"),
        }
        let approx_json = match &approximation {
            Approximation::Simple {
                approximant,
                alpha,
                bound,
            } => {
                let _ = writeln!(
                    text,
                    "  staircase n={}: alpha {} bound {} approximant {}",
                    q.levels,
                    format_rational(alpha),
                    format_rational(bound),
                    approximant
                );
                json!({
                    "levels": q.levels,
                    "alpha": format_rational(alpha),
                    "bound": format_rational(bound),
                    "approximant": approximant.values().iter().map(format_rational).collect::<Vec<_>>(),
                })
            }
            Approximation::Failure { level, level_set } => {
                let _ = writeln!(
                    text,
                    "  staircase n={}: level {} gives {} which is no disjoint union",
                    q.levels,
                    format_rational(level),
                    level_set
                );
                json!({
                    "levels": q.levels,
                    "failure_level": format_rational(level),
                    "level_set": level_set.labels(),
                })
            }
        };
        if let Some(verdict) = field {
            let _ = writeln!(
                text,
                "  field criterion {}",
                if verdict { "holds" } else { "fails" }
            );
        }
        Ok(Report {
            status: ExitStatus::Ok,
            text,
            json: json!({
                "measurable": witness.is_ok(),
                "witness_level": witness.err().as_ref().map(format_rational),
                "representation": rep_json,
                "field_criterion": field,
                "approximation": approx_json,
            }),
        })
    };
    run().unwrap_or_else(Report::from)
}

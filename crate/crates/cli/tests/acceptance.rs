//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails when any criterion fails, except the envelope attainment
//! criterion as literally stated, which is false when the conditioning
//! event has lower probability zero; that line is printed as FAIL and the
//! run instead asserts the documented shape of the failure.

use std::time::{Duration, Instant};

use desir_cli::commands::{natex, NatexQuery};
use desir_cli::model::{from_assessment, ModelFile};
use desir_cli::suite::{self, gap_instance, gap_values, SuiteName};
use desir_core::random::{self, EnvelopeConfig};
use desir_core::{
    field_criterion, indicator, ine_cone, ine_cone_materialized, is_b_measurable, is_field,
    level_set_approximation, nested_sandwich_check, Approximation, Assessment, CondLowerPrevision,
    DesirCone, Event, EventFamily, Gamble, IndependentNaturalExtension, LowerPrevision,
    ProductSpace, Rational, Side, Space, SpaceRef,
};
use desir_oracle::{self as oracle, OpenGenerator};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Line {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
    /// A failure the analysis predicts; does not fail the run.
    expected_failure: bool,
}

fn line(id: &'static str, title: &'static str, passed: bool, detail: String) -> Line {
    Line {
        id,
        title,
        passed,
        detail,
        expected_failure: false,
    }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn values(g: &Gamble) -> Vec<Rational> {
    g.values().to_vec()
}

/// Every gamble with values in {-1, 0, 1}.
fn ternary_gambles(space: &SpaceRef) -> Vec<Gamble> {
    let n = space.len() as u32;
    (0..3usize.pow(n))
        .map(|mut code| {
            let v = (0..n)
                .map(|_| {
                    let d = (code % 3) as i64 - 1;
                    code /= 3;
                    Rational::from_integer(d.into())
                })
                .collect();
            Gamble::new(space, v).unwrap()
        })
        .collect()
}

fn nonempty_events(space: &SpaceRef) -> Vec<Event> {
    (1..(1u64 << space.len()))
        .map(|bits| Event::from_bits(space, bits))
        .collect()
}

fn c1() -> Vec<Line> {
    let mut rng = rng(1);
    let (mut sets, mut coherent, mut bad) = (0, 0, Vec::new());
    while sets < 240 {
        let n = rng.gen_range(1..=5);
        let count = rng.gen_range(1..=6);
        let x = random::space("X", n);
        let cone = random::generator_set(&mut rng, &x, count, 3);
        sets += 1;
        let verdict = cone.is_coherent();
        let witness = cone.positive_pmf_witness().unwrap();
        // the witness is checked from scratch, not trusted
        let valid = witness.as_ref().is_some_and(|w| {
            let total: Rational = w.masses().iter().sum();
            total.is_one()
                && w.masses().iter().all(|m| *m > Rational::zero())
                && cone
                    .generators()
                    .iter()
                    .all(|g| w.expectation(g.gamble()) > Rational::zero())
        });
        if verdict {
            coherent += 1;
        }
        if verdict != witness.is_some() || witness.is_some() != valid {
            bad.push(format!("set {sets}"));
        }
    }
    vec![line(
        "C1",
        "coherence iff strictly positive witness",
        bad.is_empty(),
        format!(
            "{sets} sets, {coherent} coherent, {} incoherent, {} mismatches",
            sets - coherent,
            bad.len()
        ),
    )]
}

fn c2() -> Vec<Line> {
    let mut rng = rng(2);
    let (mut entries, mut bad) = (0, 0);
    for _ in 0..120 {
        let model = suite::random_envelope(&mut rng, 0.4);
        let text = from_assessment(&model.assessment).to_canonical_string();
        let file = ModelFile::parse(&text).unwrap();
        for raw in &file.assessments {
            let sides: &[bool] = if raw.linear { &[false, true] } else { &[false] };
            for &upper in sides {
                entries += 1;
                let report = natex(
                    &file,
                    &NatexQuery {
                        gamble: &raw.gamble,
                        event: &raw.event,
                        upper,
                    },
                );
                if report.json["value"] != raw.lower.as_str() {
                    bad += 1;
                }
            }
        }
    }
    vec![line(
        "C2",
        "natural extension reproduces assessed values",
        bad == 0,
        format!("120 assessments, {entries} values, {bad} not reproduced"),
    )]
}

fn c3() -> Vec<Line> {
    let report = suite::run(SuiteName::Axioms, SEED, 120);
    let names = ["LP1", "LP2", "LP3", "LP4", "LP5", "LP6", "LP7", "LP8"];
    let mut missing = Vec::new();
    let mut checks = 0;
    for name in names {
        match report.property(name) {
            Some(p) if p.checked > 0 && p.passed() => checks += p.checked,
            _ => missing.push(name),
        }
    }
    let williams = report
        .property("williams-coherent")
        .is_some_and(|p| p.passed());
    vec![line(
        "C3",
        "LP1 to LP8 on random coherent models",
        missing.is_empty() && williams && report.passed(),
        format!("120 models, {checks} checks, failing: {missing:?}"),
    )]
}

/// A lower probability zero instance: `P̲(I_b − I_c) = 0`, `P̲(I_a) = 1/2`.
fn committed_zero_instance() -> Assessment {
    let x = Space::from_labels("X", &["a", "b", "c"]).unwrap();
    let full = Event::full(&x);
    let mut a = Assessment::new(&x);
    let ib = indicator(&Event::singleton(&x, 1));
    let ic = indicator(&Event::singleton(&x, 2));
    a.push(ib.sub(&ic).unwrap(), full.clone(), Rational::zero())
        .unwrap();
    a.push(indicator(&Event::singleton(&x, 0)), full, q(1, 2))
        .unwrap();
    a
}

fn credal_constraints(a: &Assessment) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for e in a.entries() {
        out.push(values(&e.marginal_gain(false)));
        if e.linear {
            out.push(values(&e.marginal_gain(true)));
        }
    }
    out
}

fn c4() -> Vec<Line> {
    let mut rng = rng(4);
    let mut instances = vec![committed_zero_instance()];
    for _ in 0..80 {
        let n = rng.gen_range(2..=4);
        let config = EnvelopeConfig {
            pmfs: rng.gen_range(2..=4),
            entries: rng.gen_range(1..=4),
            conditional_rate: 0.4,
            allow_zeros: true,
        };
        instances.push(random::envelope_model(&mut rng, &random::space("X", n), config).assessment);
    }
    let (mut queries, mut restricted, mut differ, mut differ_positive) = (0, 0, 0, 0);
    for a in &instances {
        let x = a.space().clone();
        let p = CondLowerPrevision::new(a.clone()).unwrap();
        let verts = oracle::pmf_vertices(x.len(), &credal_constraints(a));
        let mut gambles: Vec<Gamble> = a.entries().iter().map(|e| e.gamble.clone()).collect();
        gambles.push(random::gamble(&mut rng, &x, -3, 3, 1));
        for b in nonempty_events(&x) {
            let cond: Vec<bool> = b.mask().to_vec();
            let ib = values(&indicator(&b));
            let upper_b = verts
                .iter()
                .map(|v| oracle::dot(v, &ib))
                .max()
                .unwrap_or_else(Rational::zero);
            if upper_b <= Rational::zero() {
                continue;
            }
            let positive = p
                .natural_extension(&indicator(&b), &Event::full(&x))
                .unwrap()
                > Rational::zero();
            for f in &gambles {
                let (lo, hi) = oracle::conditional_range(&verts, &values(f), &cond).unwrap();
                let agree =
                    p.natural_extension(f, &b).unwrap() == lo && p.upper_prev(f, &b).unwrap() == hi;
                queries += 1;
                if positive {
                    restricted += 1;
                }
                if !agree {
                    differ += 1;
                    if positive {
                        differ_positive += 1;
                    }
                }
            }
        }
    }
    let as_stated = line(
        "C4",
        "envelope attainment for events of positive upper probability",
        differ == 0,
        format!(
            "{} instances, {queries} queries, {differ} differ from the dominating pmfs, \
             all with conditioning events of lower probability zero: {}",
            instances.len(),
            differ_positive == 0
        ),
    );
    // the committed instance guarantees at least one difference
    let shape_holds = differ > 0 && differ_positive == 0;
    let expected_failure = !as_stated.passed && shape_holds;
    let restricted_line = line(
        "C4",
        "envelope attainment for events of positive lower probability",
        differ_positive == 0 && restricted > 0,
        format!("{restricted} queries, {differ_positive} differ"),
    );
    vec![
        Line {
            expected_failure,
            ..as_stated
        },
        restricted_line,
    ]
}

/// The vacuous cone and every single mixed-sign generator in {-1, 0, 1}^n.
fn small_cones(space: &SpaceRef) -> Vec<DesirCone> {
    let mut out = vec![DesirCone::vacuous(space)];
    for g in ternary_gambles(space) {
        if !g.is_nonneg() && !g.is_nonpos() {
            out.push(DesirCone::from_gambles(space, vec![g]).unwrap());
        }
    }
    out
}

fn family_by_index(space: &SpaceRef, k: usize) -> EventFamily {
    match k % 4 {
        0 => EventFamily::atoms(space),
        1 => EventFamily::all_nonempty(space),
        2 => EventFamily::empty(space),
        _ => EventFamily::custom(space, vec![Event::singleton(space, 0)]).unwrap(),
    }
}

fn c5() -> Vec<Line> {
    let (mut products, mut queries, mut bad) = (0, 0, Vec::new());
    for (n1, n2) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let x1 = random::space("L", n1);
        let x2 = random::space("R", n2);
        let (c1, c2) = (small_cones(&x1), small_cones(&x2));
        let (s1, s2) = (ternary_gambles(&x1), ternary_gambles(&x2));
        for (i, d1) in c1.iter().enumerate() {
            for (j, d2) in c2.iter().enumerate() {
                let b1 = family_by_index(&x1, i + j);
                let b2 = family_by_index(&x2, i + 2 * j + 1);
                let ine = ine_cone(d1, d2, &b1, &b2).unwrap();
                products += 1;
                if !ine.joint().is_coherent() {
                    bad.push(format!("{n1}x{n2} #{i},{j} incoherent"));
                    continue;
                }
                for (side, input, samples) in [(Side::Left, d1, &s1), (Side::Right, d2, &s2)] {
                    let view = ine.marginal(side);
                    for f in samples.iter() {
                        queries += 1;
                        if view.member(f).unwrap() != input.member(f).unwrap() {
                            bad.push(format!("{n1}x{n2} #{i},{j} {side:?} {f}"));
                        }
                    }
                }
            }
        }
    }
    vec![line(
        "C5",
        "independent products are coherent and keep their marginals",
        bad.is_empty(),
        format!(
            "{products} products, {queries} marginal queries, {} failures",
            bad.len()
        ),
    )]
}

fn c6() -> Vec<Line> {
    let mut rng = rng(6);
    let (mut queries, mut bad) = (0, 0);
    for (n1, n2) in [(2, 2), (2, 3), (3, 3)] {
        for _ in 0..2 {
            let p1 = suite::random_marginal(&mut rng, "L", n1);
            let p2 = suite::random_marginal(&mut rng, "R", n2);
            let (x1, x2) = (p1.space().clone(), p2.space().clone());
            let atoms = IndependentNaturalExtension::new(
                &p1,
                &p2,
                &EventFamily::atoms(&x1),
                &EventFamily::atoms(&x2),
            )
            .unwrap();
            let every = IndependentNaturalExtension::from_cone(
                ine_cone_materialized(
                    p1.cone(),
                    p2.cone(),
                    &EventFamily::all_nonempty(&x1),
                    &EventFamily::all_nonempty(&x2),
                )
                .unwrap(),
            );
            let prod = atoms.prod().clone();
            let full = Event::full(prod.joint());
            let mut conds = vec![full.clone()];
            for a in nonempty_events(&x1) {
                for b in nonempty_events(&x2) {
                    conds.push(prod.rectangle(&a, &b).unwrap());
                }
            }
            // every joint event unconditionally, and a ternary gamble
            // sample under every rectangle
            let mut work: Vec<(Gamble, Event)> = nonempty_events(prod.joint())
                .iter()
                .map(|e| (indicator(e), full.clone()))
                .collect();
            for b in &conds {
                for _ in 0..2 {
                    work.push((random::gamble(&mut rng, prod.joint(), -1, 1, 1), b.clone()));
                }
            }
            for (f, b) in work {
                queries += 1;
                if atoms.lower(&f, &b).unwrap() != every.lower(&f, &b).unwrap() {
                    bad += 1;
                }
            }
        }
    }
    vec![line(
        "C6",
        "atoms and all events give the same product",
        bad == 0,
        format!("6 marginal pairs, {queries} queries, {bad} differ"),
    )]
}

/// A non-negative gamble built from the family's events, hence measurable.
fn measurable_gamble(rng: &mut ChaCha8Rng, family: &EventFamily) -> Gamble {
    let x = family.space().clone();
    let mut g = Gamble::constant(&x, random::rational(rng, 0, 2, 1));
    for e in family.events() {
        if rng.gen_bool(0.5) {
            g = g
                .add(&indicator(e).scale(&random::rational(rng, 0, 2, 1)))
                .unwrap();
        }
    }
    g
}

fn c7() -> Vec<Line> {
    let mut rng = rng(7);
    let (mut fact, mut additive, mut skipped, mut bad) = (0, 0, 0, 0);
    for trial in 0..160 {
        let n1 = rng.gen_range(2..=3);
        let n2 = rng.gen_range(2..=3);
        let p1 = suite::random_marginal(&mut rng, "L", n1);
        let p2 = suite::random_marginal(&mut rng, "R", n2);
        let b1 = suite::random_family(&mut rng, p1.space());
        let b2 = suite::random_family(&mut rng, p2.space());
        let ine = IndependentNaturalExtension::new(&p1, &p2, &b1, &b2).unwrap();
        let prod = ine.prod().clone();
        let full = Event::full(prod.joint());
        let side = if trial % 2 == 0 {
            Side::Left
        } else {
            Side::Right
        };
        let (pi, pj, bi) = match side {
            Side::Left => (&p1, &p2, &b1),
            Side::Right => (&p2, &p1, &b2),
        };
        let (xi, xj) = (prod.factor(side).clone(), prod.factor(side.other()).clone());
        let f = random::gamble(&mut rng, &xi, -2, 2, 1);
        let g = if rng.gen_bool(0.5) {
            measurable_gamble(&mut rng, bi)
        } else {
            random::nonneg_gamble(&mut rng, &xi, 2, 1)
        };
        let h = random::gamble(&mut rng, &xj, -2, 2, 1);
        let lift = |v: &Gamble, s| prod.cylindrical_extension(v, s).unwrap();
        if is_b_measurable(&g, bi).unwrap() {
            let joint = lift(&f, side)
                .add(&lift(&g, side).mul(&lift(&h, side.other())).unwrap())
                .unwrap();
            let lhs = ine.lower(&joint, &full).unwrap();
            let lh = pj.natural_extension(&h, &Event::full(&xj)).unwrap();
            let rhs = pi
                .natural_extension(&f.add(&g.scale(&lh)).unwrap(), &Event::full(&xi))
                .unwrap();
            fact += 1;
            if lhs != rhs {
                bad += 1;
            }
        } else {
            skipped += 1;
        }
        let sum = lift(&f, side).add(&lift(&h, side.other())).unwrap();
        let lhs = ine.lower(&sum, &full).unwrap();
        let rhs = pi.natural_extension(&f, &Event::full(&xi)).unwrap()
            + pj.natural_extension(&h, &Event::full(&xj)).unwrap();
        additive += 1;
        if lhs != rhs {
            bad += 1;
        }
    }
    vec![line(
        "C7",
        "factorisation and external additivity",
        bad == 0 && fact >= 100,
        format!(
            "{fact} factorisation checks ({skipped} non-measurable draws skipped), \
             {additive} additivity checks, {bad} failures"
        ),
    )]
}

/// Generators of the product of two linear marginals, as seen by the
/// oracle: `±[I_y − p(y)]` times the indicator of each conditioning event
/// on the other side, strict on that event. One indicator per block is
/// implied by the others and left out.
fn linear_product_generators(
    p1: &[Rational],
    p2: &[Rational],
    fam1: &[Vec<bool>],
    fam2: &[Vec<bool>],
) -> Vec<OpenGenerator> {
    let (n1, n2) = (p1.len(), p2.len());
    let mut out = Vec::new();
    let mut push = |values: Vec<Rational>, strict_on: Vec<bool>| {
        out.push(OpenGenerator {
            values: values.iter().map(|v| -v).collect(),
            strict_on: strict_on.clone(),
        });
        out.push(OpenGenerator { values, strict_on });
    };
    let full1 = vec![true; n1];
    let full2 = vec![true; n2];
    for b1 in fam1.iter().chain(std::iter::once(&full1)) {
        for y in 0..n2 - 1 {
            let (mut v, mut s) = (Vec::new(), Vec::new());
            for i in 0..n1 {
                for j in 0..n2 {
                    let ind = if j == y { q(1, 1) } else { q(0, 1) };
                    v.push(if b1[i] { ind - &p2[y] } else { q(0, 1) });
                    s.push(b1[i]);
                }
            }
            push(v, s);
        }
    }
    for b2 in fam2.iter().chain(std::iter::once(&full2)) {
        for y in 0..n1 - 1 {
            let (mut v, mut s) = (Vec::new(), Vec::new());
            for i in 0..n1 {
                for j in 0..n2 {
                    let ind = if i == y { q(1, 1) } else { q(0, 1) };
                    v.push(if b2[j] { ind - &p1[y] } else { q(0, 1) });
                    s.push(b2[j]);
                }
            }
            push(v, s);
        }
    }
    out
}

fn atom_masks(n: usize) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()
}

fn c8() -> Vec<Line> {
    let inst = gap_instance();
    let (restricted, rich) = gap_values(&inst).unwrap();
    let masses = |p: &CondLowerPrevision| -> Vec<Rational> {
        let x = p.space().clone();
        (0..x.len())
            .map(|i| {
                p.natural_extension(&indicator(&Event::singleton(&x, i)), &Event::full(&x))
                    .unwrap()
            })
            .collect()
    };
    let (p1, p2) = (masses(&inst.left), masses(&inst.right));
    let masks = |f: &EventFamily| -> Vec<Vec<bool>> {
        f.events().iter().map(|e| e.mask().to_vec()).collect()
    };
    let f = values(&inst.product);
    let full = vec![true; f.len()];
    let eps = q(1, 1000);
    let narrow = linear_product_generators(
        &p1,
        &p2,
        &masks(&inst.restricted),
        &masks(&inst.right_family),
    );
    // atoms generate a smaller cone than all events, so their perturbed
    // value is still a lower bound for the all-events side
    let wide =
        linear_product_generators(&p1, &p2, &atom_masks(p1.len()), &masks(&inst.right_family));
    // exact generators give an upper bound, perturbed ones a lower bound
    let narrow_above = oracle::perturbed_lower_prevision(&narrow, &f, &full, &q(0, 1)).unwrap();
    let narrow_below = oracle::perturbed_lower_prevision(&narrow, &f, &full, &eps).unwrap();
    let wide_below = oracle::perturbed_lower_prevision(&wide, &f, &full, &eps).unwrap();
    let consistent = narrow_below <= restricted && restricted <= narrow_above && wide_below <= rich;
    vec![line(
        "C8",
        "restricted family loses information on a non-measurable factor",
        restricted < rich && narrow_above < wide_below && consistent,
        format!(
            "restricted {restricted} (oracle {narrow_below}..{narrow_above}), \
             all events {rich} (oracle at least {wide_below})"
        ),
    )]
}

fn c9() -> Vec<Line> {
    let mut rng = rng(9);
    let mut bad = 0;
    for _ in 0..120 {
        let n1 = rng.gen_range(2..=3);
        let n2 = rng.gen_range(2..=3);
        let x1 = random::space("L", n1);
        let x2 = random::space("R", n2);
        let l1 = random::pmf(&mut rng, &x1, 4, true);
        let l2 = random::pmf(&mut rng, &x2, 4, true);
        let b1 = suite::random_family(&mut rng, &x1);
        let b2 = suite::random_family(&mut rng, &x2);
        let prod = ProductSpace::new(&x1, &x2);
        let f = random::gamble(&mut rng, prod.joint(), -3, 3, 1);
        let direct = nested_sandwich_check(&l1, &l2, &b1, &b2, &f).unwrap();
        // the same product with the factors swapped
        let swapped = prod.swapped();
        let g = prod.transpose(&f, &swapped).unwrap();
        let flipped = nested_sandwich_check(&l2, &l1, &b2, &b1, &g).unwrap();
        if !direct.holds() || !flipped.holds() {
            bad += 1;
        }
    }
    vec![line(
        "C9",
        "nested previsions lie between lower and upper product",
        bad == 0,
        format!("120 linear instances and their swaps, {bad} failures"),
    )]
}

/// All non-empty unions of the blocks of a random partition.
fn partition_field(rng: &mut ChaCha8Rng, x: &SpaceRef) -> EventFamily {
    let blocks = rng.gen_range(1..=x.len());
    let label: Vec<usize> = (0..x.len()).map(|_| rng.gen_range(0..blocks)).collect();
    let mut members = Vec::new();
    for bits in 1u64..(1 << blocks) {
        let idx: Vec<usize> = (0..x.len())
            .filter(|&i| bits >> label[i] & 1 == 1)
            .collect();
        let e = Event::from_indices(x, &idx);
        if !e.is_empty() && !members.contains(&e) {
            members.push(e);
        }
    }
    EventFamily::custom(x, members).unwrap()
}

fn c10() -> Vec<Line> {
    let mut rng = rng(10);
    let (mut bounds, mut fields, mut bad) = (0, 0, 0);
    let mut per_level = [0; 4];
    for _ in 0..60 {
        let n = rng.gen_range(2..=6);
        let x = random::space("X", n);
        let field = partition_field(&mut rng, &x);
        for family in [
            EventFamily::atoms(&x),
            EventFamily::all_nonempty(&x),
            field.clone(),
            EventFamily::custom(&x, vec![random::event(&mut rng, &x)]).unwrap(),
        ] {
            let g = if rng.gen_bool(0.5) {
                measurable_gamble(&mut rng, &family)
            } else {
                random::nonneg_gamble(&mut rng, &x, 6, 3)
            };
            for (k, levels) in [2u32, 4, 8, 16].into_iter().enumerate() {
                if let Approximation::Simple {
                    approximant, alpha, ..
                } = level_set_approximation(&g, &family, levels).unwrap()
                {
                    let err = g.sub(&approximant).unwrap().abs().max();
                    bounds += 1;
                    per_level[k] += 1;
                    if err > alpha / Rational::from_integer(levels.into()) {
                        bad += 1;
                    }
                }
            }
        }
        // two gambles per field: one from its events, one arbitrary
        assert!(is_field(&field));
        for g in [
            measurable_gamble(&mut rng, &field),
            random::nonneg_gamble(&mut rng, &x, 6, 3),
        ] {
            match field_criterion(&g, &field).unwrap() {
                Some(verdict) => {
                    fields += 1;
                    if verdict != is_b_measurable(&g, &field).unwrap() {
                        bad += 1;
                    }
                }
                None => bad += 1,
            }
        }
    }
    vec![line(
        "C10",
        "staircase bound and field criterion",
        bad == 0 && per_level.iter().all(|&c| c > 0),
        format!(
            "{bounds} staircase checks (per level {per_level:?}), {fields} field checks, \
             {bad} failures"
        ),
    )]
}

fn main() {
    let criteria: [(fn() -> Vec<Line>, Duration); 10] = [
        (c1, Duration::from_secs(10)),
        (c2, Duration::from_secs(10)),
        (c3, Duration::from_secs(30)),
        (c4, Duration::from_secs(60)),
        (c5, Duration::from_secs(60)),
        (c6, Duration::from_secs(60)),
        (c7, Duration::from_secs(60)),
        (c8, Duration::from_secs(5)),
        (c9, Duration::from_secs(30)),
        (c10, Duration::from_secs(10)),
    ];
    let mut unexpected = 0;
    for (run, limit) in criteria {
        let start = Instant::now();
        let lines = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        for l in lines {
            let passed = l.passed && in_time;
            let verdict = if passed { "PASS" } else { "FAIL" };
            let note = if !passed && l.expected_failure {
                " [expected]"
            } else {
                ""
            };
            println!(
                "{verdict} {} {}: {} ({:.2}s of {}s){note}",
                l.id,
                l.title,
                l.detail,
                elapsed.as_secs_f64(),
                limit.as_secs()
            );
            if !passed && !(l.expected_failure && in_time) {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}

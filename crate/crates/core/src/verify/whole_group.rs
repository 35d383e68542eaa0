//! Census of the total matchings of whole finite groups.
//!
//! On every corpus case whose group ball closes, the suite extends every
//! matching family over every base across the full group. A closed ball
//! leaves nothing unresolved, so each extension either is a total special
//! matching or carries an explicit exclusion. Which families come out total
//! depends only on the shape of the bond table:
//!
//! - when some generator b commutes, together with the base a, with every
//!   remaining generator, the complement is invisible to the matchings:
//!   every family over a extends totally, is regular on both sides for each
//!   commuting generator, the total count is 2^(m_ab − 2), and the
//!   restrictions to ⟨a,b⟩ are pairwise distinct;
//! - in every other shape exactly two extensions are total, multiplication
//!   by the base from the left and from the right.

use std::collections::BTreeSet;

use crate::coxeter::{Bond, CoxeterMatrix, ElementId, Generator, GroupBall, Side};
use crate::matchings::{extend_maximal, MatchingFamily, PartialMatching};
use crate::verify::report::{CaseReport, Recorder};
use crate::verify::support::expected_tables;
use crate::verify::CorpusCase;

pub fn run(case: &CorpusCase) -> CaseReport {
    let mut rec = Recorder::new(&case.name, &case.matrix);
    let Some(bound) = case.group_bound else {
        return rec.finish();
    };
    let ball = match GroupBall::build(case.matrix.clone(), bound) {
        Ok(ball) => ball,
        Err(e) => {
            rec.error("build_ball", None, &e);
            return rec.finish();
        }
    };
    rec.check("group_ball_closed", None, None, ball.closed(), || {
        format!("bound {bound} does not close the group")
    });
    if !ball.closed() {
        return rec.finish();
    }

    for base in ball.matrix().generators() {
        survey_base(&mut rec, &ball, base);
    }
    rec.finish()
}

/// Extends every family over `base` and checks the census against the shape
/// of the bond table.
fn survey_base(rec: &mut Recorder, ball: &GroupBall, base: Generator) {
    let matrix = ball.matrix();
    let context = format!("base={}", matrix.name(base));
    let families = match MatchingFamily::enumerate(matrix, base, ball.bound()) {
        Ok(families) => families,
        Err(e) => {
            rec.error("enumerate_families", Some(&context), &e);
            return;
        }
    };

    let mut totals: Vec<(&MatchingFamily, PartialMatching<'_>)> = Vec::new();
    for family in &families {
        let label = family.label(matrix);
        let pm = match extend_maximal(family, ball) {
            Ok(pm) => pm,
            Err(e) => {
                rec.error("extend_maximal", Some(&label), &e);
                continue;
            }
        };
        rec.check(
            "closed_ball_fully_resolved",
            Some(&label),
            None,
            pm.unresolved().is_empty(),
            || format!("{} unresolved elements on a closed ball", pm.unresolved().len()),
        );
        if pm.excluded().is_empty() && pm.unresolved().is_empty() {
            totals.push((family, pm));
        }
    }

    match degenerate_partner(matrix, base) {
        Some(partner) => {
            degenerate_census(rec, ball, base, partner, &families, &totals);
        }
        None => {
            multiplication_census(rec, ball, base, &context, &totals);
        }
    }
}

/// A generator b such that every remaining generator commutes with both the
/// base and b; ties go to the largest bond m_ab. `None` when no generator
/// qualifies (in particular for rank 1).
fn degenerate_partner(matrix: &CoxeterMatrix, base: Generator) -> Option<Generator> {
    let mut best: Option<(u32, Generator)> = None;
    for b in matrix.generators().filter(|&b| b != base) {
        let commuting = matrix
            .generators()
            .filter(|&c| c != base && c != b)
            .all(|c| {
                matrix.bond(base, c) == Bond::Finite(2) && matrix.bond(b, c) == Bond::Finite(2)
            });
        if !commuting {
            continue;
        }
        let Some(m) = matrix.bond(base, b).finite() else { continue };
        if best.map(|(best_m, _)| m > best_m).unwrap_or(true) {
            best = Some((m, b));
        }
    }
    best.map(|(_, b)| b)
}

/// The census when the group splits as ⟨a,b⟩ times a commuting complement:
/// every family is total, regular for the complement, counted by the level
/// choices of the a–b bond, and distinguished by its a–b table.
fn degenerate_census(
    rec: &mut Recorder,
    ball: &GroupBall,
    base: Generator,
    partner: Generator,
    families: &[MatchingFamily],
    totals: &[(&MatchingFamily, PartialMatching<'_>)],
) {
    let matrix = ball.matrix();
    let context = format!("base={}", matrix.name(base));
    rec.check(
        "split_group_all_families_total",
        Some(&context),
        None,
        totals.len() == families.len(),
        || format!("{} of {} families total", totals.len(), families.len()),
    );
    let expected = expected_tables(matrix.bond(base, partner), ball.bound());
    rec.check(
        "split_group_total_count",
        Some(&context),
        None,
        totals.len() as u64 == expected,
        || format!("{} totals, expected {expected}", totals.len()),
    );

    let complement: Vec<Generator> = matrix
        .generators()
        .filter(|&c| c != base && c != partner)
        .collect();
    let mut restrictions = BTreeSet::new();
    for (family, pm) in totals {
        let label = family.label(matrix);
        for &c in &complement {
            for side in [Side::Left, Side::Right] {
                rec.check(
                    "split_group_complement_regular",
                    Some(&label),
                    Some(format!("{} on the {side:?}", matrix.name(c))),
                    pm.is_regular(c, side),
                    || "matching does not commute with the complement".into(),
                );
            }
        }
        if let Some(table) = family.member(partner) {
            restrictions.insert(table.describe(matrix));
        }
    }
    rec.check(
        "split_group_restrictions_distinct",
        Some(&context),
        None,
        restrictions.len() == totals.len(),
        || {
            format!(
                "{} distinct a–b tables among {} total matchings",
                restrictions.len(),
                totals.len()
            )
        },
    );
}

/// The census for every other shape: the total matchings are exactly the two
/// multiplications by the base.
fn multiplication_census(
    rec: &mut Recorder,
    ball: &GroupBall,
    base: Generator,
    context: &str,
    totals: &[(&MatchingFamily, PartialMatching<'_>)],
) {
    let matrix = ball.matrix();
    let mut expected: BTreeSet<Vec<(ElementId, ElementId)>> = BTreeSet::new();
    for build in [MatchingFamily::left_mult, MatchingFamily::right_mult] {
        let family = match build(matrix, base, ball.bound()) {
            Ok(family) => family,
            Err(e) => {
                rec.error("multiplication_family", Some(context), &e);
                return;
            }
        };
        let label = family.label(matrix);
        match extend_maximal(&family, ball) {
            Ok(pm) => {
                rec.check(
                    "multiplication_total",
                    Some(&label),
                    None,
                    pm.excluded().is_empty() && pm.unresolved().is_empty(),
                    || "multiplication by the base is not total".into(),
                );
                expected.insert(pm.pairs());
            }
            Err(e) => rec.error("multiplication_total", Some(&label), &e),
        }
    }

    let actual: BTreeSet<Vec<(ElementId, ElementId)>> =
        totals.iter().map(|(_, pm)| pm.pairs()).collect();
    rec.check(
        "totals_are_the_two_multiplications",
        Some(context),
        None,
        actual == expected,
        || {
            format!(
                "{} total matchings, expected the {} multiplication(s)",
                actual.len(),
                expected.len()
            )
        },
    );
}

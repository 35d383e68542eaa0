//! Existence, uniqueness, and shape of maximal matching extensions.
//!
//! The cartesian parametrization says maximal matchings with a fixed base
//! correspond exactly to free choices of one dihedral table per non-base
//! generator. This suite pins that down on every corpus group:
//!
//! - the family count per base is the product of the per-bond table counts;
//! - every family extends, deterministically, to a partial matching that
//!   passes the full definition re-check;
//! - restricting the extension back to the principal dihedrals returns the
//!   family it came from;
//! - principal dihedral subgroups are settled and stable under the
//!   extension, while elements of non-principal dihedral parabolics are
//!   always raised out of their parabolic;
//! - malformed families are rejected before any extension is attempted.
//!
//! It also checks the two coatom facts the extension machinery leans on:
//! an element is dihedral exactly when it has at most two coatoms, and
//! elements with three or more coatoms are determined by their coatom set.

use std::collections::HashMap;

use crate::coxeter::{ElementId, GenSet, GroupBall};
use crate::matchings::{extend_maximal, restrict_to_principal, DihedralMatching, MatchingFamily};
use crate::verify::report::{CaseReport, Recorder};
use crate::verify::support::{each_matching, expected_tables, parabolic_members};
use crate::verify::CorpusCase;

pub fn run(case: &CorpusCase) -> CaseReport {
    let mut rec = Recorder::new(&case.name, &case.matrix);
    let ball = match GroupBall::build(case.matrix.clone(), case.match_bound) {
        Ok(ball) => ball,
        Err(e) => {
            rec.error("build_ball", None, &e);
            return rec.finish();
        }
    };
    let matrix = ball.matrix();

    coatom_facts(&ball, &mut rec);

    for base in matrix.generators() {
        let families = match MatchingFamily::enumerate(matrix, base, ball.bound()) {
            Ok(families) => families,
            Err(e) => {
                rec.error("enumerate_families", None, &e);
                continue;
            }
        };
        let expected: u64 = matrix
            .generators()
            .filter(|&s| s != base)
            .map(|s| expected_tables(matrix.bond(base, s), ball.bound()))
            .product();
        rec.check(
            "family_count",
            None,
            Some(format!("base={}", matrix.name(base))),
            families.len() as u64 == expected,
            || format!("enumerated {} families, expected {expected}", families.len()),
        );
    }

    each_matching(&ball, &mut rec, |rec, family, pm| {
        let label = family.label(matrix);

        rec.check(
            "extension_is_special",
            Some(&label),
            None,
            pm.validate().is_ok(),
            || format!("definition re-check failed: {:?}", pm.validate()),
        );

        match extend_maximal(family, &ball) {
            Ok(again) => rec.check(
                "extension_deterministic",
                Some(&label),
                None,
                again.pairs() == pm.pairs()
                    && again.excluded() == pm.excluded()
                    && again.unresolved() == pm.unresolved(),
                || "second extension differs from the first".into(),
            ),
            Err(e) => rec.error("extension_deterministic", Some(&label), &e),
        }

        match restrict_to_principal(pm) {
            Ok(back) => rec.check(
                "restriction_round_trip",
                Some(&label),
                None,
                back == *family,
                || format!("restriction gives {}", back.label(matrix)),
            ),
            Err(e) => rec.error("restriction_round_trip", Some(&label), &e),
        }

        principal_and_foreign_dihedrals(rec, pm, family, &label, &ball);
    });

    malformed_families(&ball, &mut rec);
    rec.finish()
}

/// Dihedral ⟺ at most two coatoms; three or more coatoms determine the
/// element. Both are exact inside the ball, coatoms being shorter elements.
fn coatom_facts(ball: &GroupBall, rec: &mut Recorder) {
    let mut buckets: HashMap<(usize, Vec<ElementId>), u32> = HashMap::new();
    for w in ball.ids() {
        let coatoms = ball.coatoms(w);
        let dihedral = ball.support(w).len() <= 2;
        rec.check(
            "dihedral_iff_two_coatoms",
            None,
            Some(ball.display(w)),
            dihedral == (coatoms.len() <= 2),
            || format!("support {} generators, {} coatoms", ball.support(w).len(), coatoms.len()),
        );
        if coatoms.len() >= 3 {
            *buckets
                .entry((ball.len(w), coatoms.to_vec()))
                .or_insert(0) += 1;
            rec.check(
                "coatom_set_lookup",
                None,
                Some(ball.display(w)),
                ball.elements_with_coatom_set(coatoms) == [w],
                || "coatom index does not resolve to the element itself".into(),
            );
        }
    }
    for ((len, coatoms), count) in buckets {
        rec.check(
            "large_coatom_sets_determine",
            None,
            Some(format!(
                "length {len}, coatoms {}",
                coatoms
                    .iter()
                    .map(|&c| ball.display(c))
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
            count == 1,
            || format!("{count} elements share this coatom set"),
        );
    }
}

/// Principal dihedrals are settled and φ-stable; non-principal dihedral
/// parabolic members are raised out of their parabolic.
fn principal_and_foreign_dihedrals(
    rec: &mut Recorder,
    pm: &crate::matchings::PartialMatching<'_>,
    family: &MatchingFamily,
    label: &str,
    ball: &GroupBall,
) {
    let matrix = ball.matrix();
    let base = family.base();
    let reliable = pm.reliable_bound();
    let gens: Vec<_> = matrix.generators().collect();
    for (i, &s) in gens.iter().enumerate() {
        for &t in &gens[i + 1..] {
            let pair = GenSet::pair(s, t);
            let principal = s == base || t == base;
            for w in parabolic_members(ball, pair) {
                if ball.len(w) as u32 >= reliable {
                    continue;
                }
                if principal {
                    let image = pm.image(w);
                    rec.check(
                        "principal_dihedral_settled",
                        Some(label),
                        Some(ball.display(w)),
                        image.is_some_and(|v| ball.support(v).is_subset(pair)),
                        || match image {
                            Some(v) => format!("image {} leaves the parabolic", ball.display(v)),
                            None => "element of a principal dihedral is unmatched".into(),
                        },
                    );
                } else if pm.in_domain(w) {
                    let image = pm.image(w).expect("matched element has an image");
                    rec.check(
                        "foreign_dihedral_raised_out",
                        Some(label),
                        Some(ball.display(w)),
                        pm.raised(w) && !ball.support(image).is_subset(pair),
                        || {
                            format!(
                                "image {} stays dihedral or drops",
                                ball.display(image)
                            )
                        },
                    );
                }
            }
        }
    }
}

/// Families that do not describe one table per non-base generator must be
/// rejected at construction.
fn malformed_families(ball: &GroupBall, rec: &mut Recorder) {
    let matrix = ball.matrix();
    if matrix.rank() < 2 {
        return;
    }
    let base = matrix.generators().next().expect("rank ≥ 2");
    let families = match MatchingFamily::enumerate(matrix, base, ball.bound()) {
        Ok(f) => f,
        Err(e) => {
            rec.error("malformed_family_setup", None, &e);
            return;
        }
    };
    let family = &families[0];
    let members = family.members();

    let mut doubled: Vec<DihedralMatching> = members.to_vec();
    doubled.push(members[0].clone());
    rec.check(
        "duplicate_table_rejected",
        None,
        None,
        MatchingFamily::new(base, doubled).is_err(),
        || "a family with two tables for one generator was accepted".into(),
    );

    if matrix.rank() >= 3 {
        // Constructing an undersized family is legal in isolation (`new`
        // cannot see the matrix), but the extension entry gate must refuse
        // it before doing any work.
        let missing = MatchingFamily::new(base, members[1..].to_vec())
            .expect("fewer tables are structurally fine");
        rec.check(
            "missing_table_rejected",
            None,
            None,
            extend_maximal(&missing, ball).is_err(),
            || "an extension ran with a generator uncovered".into(),
        );
    }

    let other = members[0].other();
    let bond = matrix.bond(base, other);
    let table_bound = match bond.finite() {
        Some(m) => m.min(ball.bound()),
        None => ball.bound(),
    };
    if table_bound > 2 {
        rec.check(
            "short_choice_vector_rejected",
            None,
            None,
            DihedralMatching::from_choices(base, other, bond, table_bound, vec![base]).is_err(),
            || "a truncated raise vector was accepted".into(),
        );
    }
}

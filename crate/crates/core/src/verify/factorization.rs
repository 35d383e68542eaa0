//! Domain factorization. With a = φ(e), C the atoms commuting with a,
//! U the atoms sent to s·a and V those sent to a·s, set G = {a} ∪ C ∪ U and
//! D = {a} ∪ C ∪ V. The suite pins, exactly within each ball:
//!
//! - Q ⊆ ⟨G⟩⟨D⟩ for every maximal matching;
//! - images never pick up generators outside supp(w) ∪ {a};
//! - for crossed matchings (U, V both nonempty) whose tables satisfy the
//!   product-formula hypotheses in one orientation, the matching factors:
//!   products ⟨G⟩ × (⟨D⟩ ∩ Q) stay in Q with φ(x·y) = x·φ(y), or the
//!   mirrored statement. Every *full* crossed matching satisfies one of the
//!   two orientations, which yields the equality Q = ⟨G⟩(⟨D⟩ ∩ Q); without
//!   fullness the equality can genuinely fail, so the suite asserts the
//!   orientation dichotomy for full matchings and the factorization wherever
//!   its hypotheses hold;
//! - a crossed matching on a rank-3 group whose non-base bond exceeds 2, or
//!   with an infinite bond anywhere, is never full.

use crate::coxeter::{Bond, Generator, GroupBall, Side};
use crate::matchings::{gd_membership, MatchingFamily, PartialMatching};
use crate::verify::report::{CaseReport, Recorder};
use crate::verify::support::{each_matching, product_transport, TransportNames};
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

    each_matching(&ball, &mut rec, |rec, family, pm| {
        let label = family.label(matrix);
        gd_inclusion(rec, pm, &label);
        image_support(rec, pm, &label);
        crossed_factorization(rec, family, pm, &label);
    });
    rec.finish()
}

/// Q ⊆ ⟨G⟩⟨D⟩: every matched element splits as g·d.
fn gd_inclusion(rec: &mut Recorder, pm: &PartialMatching<'_>, label: &str) {
    let ball = pm.ball();
    let classification = pm.classify_cross();
    let reliable = pm.reliable_bound();
    for w in ball.ids() {
        if !pm.in_domain(w) || ball.len(w) as u32 > reliable {
            continue;
        }
        rec.check(
            "domain_in_gd_product",
            Some(label),
            Some(ball.display(w)),
            gd_membership(ball, w, classification.g_set, classification.d_set),
            || "matched element admits no g·d factorization".into(),
        );
    }
}

/// φ never introduces a generator outside supp(w) ∪ {a}: parabolics
/// containing the base are stable under the matching.
fn image_support(rec: &mut Recorder, pm: &PartialMatching<'_>, label: &str) {
    let ball = pm.ball();
    let base = pm.base();
    let reliable = pm.reliable_bound();
    for w in ball.ids() {
        if ball.len(w) as u32 > reliable {
            continue;
        }
        let Some(image) = pm.image(w) else { continue };
        let mut allowed = ball.support(w);
        allowed.insert(base);
        rec.check(
            "images_stay_in_base_parabolic",
            Some(label),
            Some(ball.display(w)),
            ball.support(image).is_subset(allowed),
            || format!("φ(w) = {} uses a fresh generator", ball.display(image)),
        );
    }
}

/// Crossed matchings factor through one of the two product-formula
/// orientations; fullness forces at least one to apply.
fn crossed_factorization(
    rec: &mut Recorder,
    family: &MatchingFamily,
    pm: &PartialMatching<'_>,
    label: &str,
) {
    let classification = pm.classify_cross();
    if !classification.crossed() {
        return;
    }
    let ball = pm.ball();
    let base = pm.base();
    let table = |s: Generator| family.member(s).expect("family covers every generator");

    // Orientation A: U-tables are right multiplication, V-tables commute
    // with the base on the left; products ⟨G⟩ × (⟨D⟩ ∩ Q).
    let orientation_a = classification.u_set.iter().all(|u| table(u).is_right_mult())
        && classification.v_set.iter().all(|v| table(v).left_regular_for(base));
    // Orientation B is the mirror: products (⟨G⟩ ∩ Q) × ⟨D⟩.
    let orientation_b = classification.v_set.iter().all(|v| table(v).is_left_mult())
        && classification.u_set.iter().all(|u| table(u).right_regular_for(base));

    let full = match pm.is_full_matching() {
        Ok(full) => full,
        Err(e) => {
            rec.error("full_crossed_has_orientation", Some(label), &e);
            return;
        }
    };
    rec.check(
        "full_crossed_has_orientation",
        Some(label),
        None,
        !full || orientation_a || orientation_b,
        || "full crossed matching fits neither product orientation".into(),
    );

    if orientation_a {
        product_transport(
            rec,
            pm,
            label,
            classification.g_set,
            classification.d_set,
            Side::Left,
            TransportNames {
                stay: "crossed_left_products_stay_matched",
                commute: "crossed_left_products_commute",
            },
        );
    }
    if orientation_b {
        product_transport(
            rec,
            pm,
            label,
            classification.d_set,
            classification.g_set,
            Side::Right,
            TransportNames {
                stay: "crossed_right_products_stay_matched",
                commute: "crossed_right_products_commute",
            },
        );
    }

    // Rank 3: fullness of a crossed matching requires the non-base bond to
    // be exactly 2 and both base bonds finite.
    let matrix = ball.matrix();
    if matrix.rank() == 3 {
        let u = classification.u_set.iter().next().expect("crossed has a U atom");
        let v = classification.v_set.iter().next().expect("crossed has a V atom");
        let unreachable = matrix.bond(u, v) != Bond::Finite(2)
            || matrix.bond(base, u) == Bond::Infinite
            || matrix.bond(base, v) == Bond::Infinite;
        if unreachable {
            rec.check(
                "crossed_wide_bond_not_full",
                Some(label),
                None,
                !full,
                || "crossed matching is full despite a wide or infinite bond".into(),
            );
        }
    }
}

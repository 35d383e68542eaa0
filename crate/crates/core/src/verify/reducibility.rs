//! Every maximal matching is reducible: each orbit whose top is full admits
//! a generator s and a side such that s is a descent of the orbit bottom and
//! the matching is s-regular on that side. The suite runs the library's
//! search on every matching over the corpus ball and re-verifies each
//! returned witness from first principles.
//!
//! On simply-laced groups it additionally pins the classification corollary:
//! a non-crossed matching there is plain multiplication by the base on one
//! side, depending on which of the two atom camps is empty.

use crate::coxeter::{GroupBall, Side};
use crate::matchings::PartialMatching;
use crate::verify::report::{CaseReport, Recorder};
use crate::verify::support::each_matching;
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
    let simply_laced = matrix.is_simply_laced();

    each_matching(&ball, &mut rec, |rec, family, pm| {
        let label = family.label(matrix);
        orbit_witnesses(rec, pm, &label);
        if simply_laced {
            simply_laced_shape(rec, pm, &label);
        }
    });
    rec.finish()
}

/// The reducibility search succeeds, and every witness it returns actually
/// works: the generator is a descent of the orbit bottom on the claimed side
/// and the matching commutes with it there.
fn orbit_witnesses(rec: &mut Recorder, pm: &PartialMatching<'_>, label: &str) {
    let ball = pm.ball();
    let assessment = match pm.is_reducible() {
        Ok(a) => a,
        Err(e) => {
            rec.error("matching_is_reducible", Some(label), &e);
            return;
        }
    };
    rec.check("matching_is_reducible", Some(label), None, assessment.reducible, || {
        "a full orbit admits no descent the matching is regular for".into()
    });
    for orbit in &assessment.full_orbits {
        let witness_text = format!(
            "orbit {}—{}",
            ball.display(orbit.bottom),
            ball.display(orbit.top)
        );
        let Some((s, side)) = orbit.witness else {
            rec.check("full_orbit_has_witness", Some(label), Some(witness_text), false, || {
                "full orbit reported without a witness".into()
            });
            continue;
        };
        let is_descent = ball.descents(orbit.bottom, side).contains(s);
        let is_regular = pm.is_regular(s, side);
        rec.check(
            "full_orbit_has_witness",
            Some(label),
            Some(format!("{witness_text} via s={} {side:?}", ball.matrix().name(s))),
            is_descent && is_regular,
            || format!("descent: {is_descent}, regular: {is_regular}"),
        );
    }
}

/// On a simply-laced group a non-crossed matching is multiplication: with no
/// atom mapped to base·s the extension is x ↦ x·base, with no atom mapped to
/// s·base it is x ↦ base·x.
fn simply_laced_shape(rec: &mut Recorder, pm: &PartialMatching<'_>, label: &str) {
    let classification = pm.classify_cross();
    if classification.crossed() {
        return;
    }
    let ball = pm.ball();
    let base = pm.base();
    let reliable = pm.reliable_bound();
    let side = if classification.is_right_type() { Side::Right } else { Side::Left };
    for w in ball.ids() {
        if ball.len(w) as u32 > reliable {
            continue;
        }
        rec.check(
            "simply_laced_noncrossed_is_multiplication",
            Some(label),
            Some(ball.display(w)),
            pm.image(w) == ball.mult(w, base, side).id(),
            || format!("extension is not multiplication by the base on the {side:?}"),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Bond, CoxeterMatrix};

    #[test]
    fn reducibility_suite_passes_on_a_simply_laced_triangle() {
        let case = CorpusCase {
            name: "triangle-3.3.3".into(),
            matrix: CoxeterMatrix::new(&[vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]).unwrap(),
            poly_bound: 5,
            match_bound: 5,
            group_bound: None,
        };
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
        assert!(report.checks > 50, "suite actually ran: {}", report.checks);
    }

    #[test]
    fn reducibility_suite_passes_on_a_bonded_triangle() {
        let case = CorpusCase {
            name: "triangle-4.3.2".into(),
            matrix: CoxeterMatrix::new(&[vec![1, 4, 3], vec![4, 1, 2], vec![3, 2, 1]]).unwrap(),
            poly_bound: 6,
            match_bound: 7,
            group_bound: None,
        };
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
    }

    #[test]
    fn reducibility_suite_passes_with_an_infinite_bond() {
        let inf = Bond::Infinite.to_code();
        let case = CorpusCase {
            name: "inf-3".into(),
            matrix: CoxeterMatrix::new(&[vec![1, inf, 2], vec![inf, 1, 3], vec![2, 3, 1]]).unwrap(),
            poly_bound: 4,
            match_bound: 5,
            group_bound: None,
        };
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
    }
}

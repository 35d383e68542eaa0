//! Regularity criteria and the product formula they feed.
//!
//! A matching φ is s-regular on a side when it commutes with multiplication
//! by s on that side. The library exposes three views of this property and
//! the suite pins them against each other on every corpus group:
//!
//! - the definitional scan over the extended domain (`is_regular`);
//! - the per-table criterion: φ is s-left-regular iff its table on ⟨a,s⟩ is
//!   (for s ≠ a), and a-left-regular iff every table is;
//! - the dihedral deviation scan on raw tables (`left_regular_for`), checked
//!   against the definitional scan on a standalone two-generator ball.
//!
//! On top of that it verifies the product formula: with X the generators
//! whose tables are plain right multiplication and Y those whose tables are
//! a-left-regular, every product x·y with x ∈ ⟨X⟩ and y ∈ ⟨Y⟩ ∩ Q lies in Q
//! and satisfies φ(x·y) = x·φ(y) — and the mirrored statement. Finally, the
//! commutation-transfer fact: whenever φ fails to commute with s at some w,
//! it already fails below w on the principal dihedrals.

use crate::coxeter::{Bond, CoxeterMatrix, ElementId, GenSet, Generator, GroupBall, Side};
use crate::matchings::{extend_maximal, MatchingFamily, PartialMatching};
use crate::verify::report::{CaseReport, Recorder};
use crate::verify::support::{each_matching, product_transport, TransportNames};
use crate::verify::CorpusCase;

pub fn run(case: &CorpusCase) -> CaseReport {
    let mut rec = Recorder::new(&case.name, &case.matrix);
    // Product pairs are quadratic in the ball, so the polynomial bound is
    // plenty; every criterion is scale-free.
    let ball = match GroupBall::build(case.matrix.clone(), case.poly_bound) {
        Ok(ball) => ball,
        Err(e) => {
            rec.error("build_ball", None, &e);
            return rec.finish();
        }
    };
    let matrix = ball.matrix();

    dihedral_criterion(case, &mut rec);

    each_matching(&ball, &mut rec, |rec, family, pm| {
        let label = family.label(matrix);
        criterion_equivalence(rec, family, pm, &label);
        product_formula(rec, family, pm, &label);
        commutation_transfer(rec, pm, &label);
        multiplication_families(rec, family, pm, &label);
    });
    rec.finish()
}

/// For every bond order in the case, every dihedral table: the raw deviation
/// scan must agree with the definitional regularity of the table extended
/// over its own two-generator group.
fn dihedral_criterion(case: &CorpusCase, rec: &mut Recorder) {
    let mut bonds: Vec<Bond> = Vec::new();
    let gens: Vec<Generator> = case.matrix.generators().collect();
    for (i, &s) in gens.iter().enumerate() {
        for &t in &gens[i + 1..] {
            let bond = case.matrix.bond(s, t);
            if !bonds.contains(&bond) {
                bonds.push(bond);
            }
        }
    }
    for bond in bonds {
        let bound = match bond.finite() {
            Some(m) => m,
            None => case.match_bound,
        };
        let code = bond.to_code();
        let sub = CoxeterMatrix::new(&[vec![1, code], vec![code, 1]]).expect("rank-2 table");
        let sub_ball = match GroupBall::build(sub, bound) {
            Ok(b) => b,
            Err(e) => {
                rec.error("dihedral_criterion_ball", None, &e);
                continue;
            }
        };
        let base = Generator(0);
        let families = match MatchingFamily::enumerate(sub_ball.matrix(), base, bound) {
            Ok(f) => f,
            Err(e) => {
                rec.error("dihedral_criterion_enumerate", None, &e);
                continue;
            }
        };
        for family in &families {
            let table = &family.members()[0];
            let pm = match extend_maximal(family, &sub_ball) {
                Ok(pm) => pm,
                Err(e) => {
                    rec.error("dihedral_criterion_extend", None, &e);
                    continue;
                }
            };
            let label = format!("bond {bond}: {}", family.label(sub_ball.matrix()));
            for g in [Generator(0), Generator(1)] {
                let scan_left = table.left_regular_for(g);
                let scan_right = table.right_regular_for(g);
                rec.check(
                    "table_scan_matches_left_regularity",
                    Some(&label),
                    None,
                    scan_left == pm.is_regular(g, Side::Left),
                    || format!("scan says {scan_left}, domain walk disagrees"),
                );
                rec.check(
                    "table_scan_matches_right_regularity",
                    Some(&label),
                    None,
                    scan_right == pm.is_regular(g, Side::Right),
                    || format!("scan says {scan_right}, domain walk disagrees"),
                );
            }
        }
    }
}

/// The global regularity of the extension is read off the family tables.
fn criterion_equivalence(
    rec: &mut Recorder,
    family: &MatchingFamily,
    pm: &PartialMatching<'_>,
    label: &str,
) {
    let ball = pm.ball();
    let base = family.base();
    for s in ball.matrix().generators() {
        for side in [Side::Left, Side::Right] {
            let from_tables = if s == base {
                family.members().iter().all(|t| match side {
                    Side::Left => t.left_regular_for(base),
                    Side::Right => t.right_regular_for(base),
                })
            } else {
                let table = family.member(s).expect("family covers every generator");
                match side {
                    Side::Left => table.left_regular_for(s),
                    Side::Right => table.right_regular_for(s),
                }
            };
            let definitional = pm.is_regular(s, side);
            rec.check(
                "tables_decide_regularity",
                Some(label),
                Some(format!("s={} {side:?}", ball.matrix().name(s))),
                from_tables == definitional,
                || format!("tables say {from_tables}, domain walk says {definitional}"),
            );
        }
    }
}

/// Products from ⟨X⟩ × (⟨Y⟩ ∩ Q) stay in Q and commute with φ; mirrored for
/// right products.
fn product_formula(
    rec: &mut Recorder,
    family: &MatchingFamily,
    pm: &PartialMatching<'_>,
    label: &str,
) {
    let base = family.base();

    let mut x_left = GenSet::single(base);
    let mut y_left = GenSet::single(base);
    let mut x_right = GenSet::single(base);
    let mut y_right = GenSet::single(base);
    for table in family.members() {
        let s = table.other();
        if table.is_right_mult() {
            x_left.insert(s);
        }
        if table.left_regular_for(base) {
            y_left.insert(s);
        }
        if table.is_left_mult() {
            x_right.insert(s);
        }
        if table.right_regular_for(base) {
            y_right.insert(s);
        }
    }

    product_transport(
        rec,
        pm,
        label,
        x_left,
        y_left,
        Side::Left,
        TransportNames {
            stay: "left_products_stay_matched",
            commute: "left_products_commute",
        },
    );
    product_transport(
        rec,
        pm,
        label,
        x_right,
        y_right,
        Side::Right,
        TransportNames {
            stay: "right_products_stay_matched",
            commute: "right_products_commute",
        },
    );
}

/// Wherever φ fails to commute with s at w, it already fails on a principal
/// dihedral element below w (below-w elements of P for s = base).
fn commutation_transfer(rec: &mut Recorder, pm: &PartialMatching<'_>, label: &str) {
    let ball = pm.ball();
    let base = pm.base();
    let reliable = pm.reliable_bound();
    let in_scope = |v: ElementId, s: Generator| {
        let supp = ball.support(v);
        if supp.len() > 2 || !pm.in_domain(v) {
            return false;
        }
        if s == base {
            // P is the union of the principal dihedrals: dihedral support
            // together with the base.
            supp.len() < 2 || supp.contains(base)
        } else {
            supp.is_subset(GenSet::pair(base, s))
        }
    };
    let commutes_at = |v: ElementId, s: Generator, side: Side| -> Option<bool> {
        let sv = ball.mult(v, s, side).id()?;
        if ball.len(sv) as u32 > reliable {
            return None;
        }
        if !pm.in_domain(sv) {
            return Some(false);
        }
        let fv = pm.image(v)?;
        let fsv = pm.image(sv)?;
        Some(ball.mult(fv, s, side).id() == Some(fsv))
    };
    for s in ball.matrix().generators() {
        for side in [Side::Left, Side::Right] {
            for w in ball.ids() {
                if !pm.in_domain(w) || ball.len(w) as u32 >= reliable {
                    continue;
                }
                if commutes_at(w, s, side) != Some(false) {
                    continue;
                }
                // φ breaks at w; some principal dihedral element below w
                // (possibly w itself) must break too.
                let witnessed = ball
                    .interval_below(w)
                    .into_iter()
                    .any(|v| in_scope(v, s) && commutes_at(v, s, side) == Some(false));
                rec.check(
                    "commutation_breaks_on_dihedrals_first",
                    Some(label),
                    Some(format!("s={} {side:?} w={}", ball.matrix().name(s), ball.display(w))),
                    witnessed,
                    || "no principal dihedral witness below the break".into(),
                );
            }
        }
    }
}

/// The all-right-multiplication family extends to x ↦ x·a, the mirrored one
/// to x ↦ a·x.
fn multiplication_families(
    rec: &mut Recorder,
    family: &MatchingFamily,
    pm: &PartialMatching<'_>,
    label: &str,
) {
    let ball = pm.ball();
    let base = family.base();
    let reliable = pm.reliable_bound();
    let sides: &[(&str, Side, bool)] = &[
        ("right_mult_family_is_right_mult", Side::Right, family.is_right_mult()),
        ("left_mult_family_is_left_mult", Side::Left, family.is_left_mult()),
    ];
    for &(name, side, applies) in sides {
        if !applies {
            continue;
        }
        for w in ball.ids() {
            if ball.len(w) as u32 > reliable {
                continue;
            }
            rec.check(
                name,
                Some(label),
                Some(ball.display(w)),
                pm.image(w) == ball.mult(w, base, side).id(),
                || "extension of the multiplication family is not multiplication".into(),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularity_suite_passes_on_a_bonded_triangle() {
        let case = CorpusCase {
            name: "triangle-4.3.2".into(),
            matrix: CoxeterMatrix::new(&[vec![1, 4, 3], vec![4, 1, 2], vec![3, 2, 1]]).unwrap(),
            poly_bound: 6,
            match_bound: 6,
            group_bound: None,
        };
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
        assert!(report.checks > 200, "suite actually ran: {}", report.checks);
    }

    #[test]
    fn regularity_suite_passes_with_an_infinite_bond() {
        let inf = Bond::Infinite.to_code();
        let case = CorpusCase {
            name: "inf-3".into(),
            matrix: CoxeterMatrix::new(&[vec![1, inf, 2], vec![inf, 1, 3], vec![2, 3, 1]]).unwrap(),
            poly_bound: 4,
            match_bound: 4,
            group_bound: None,
        };
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
    }
}

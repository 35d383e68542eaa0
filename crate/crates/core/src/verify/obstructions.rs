//! Rank-3 obstruction predictions and fullness classification.
//!
//! On every rank-3 corpus group the suite runs every prediction scenario
//! against every maximal matching and both role assignments, then confirms
//! each predicted element against the actual extension: the element must be
//! excluded while all of its coatoms are matched, i.e. it is a minimal
//! element of the complement of the domain.
//!
//! Independently it pins the fullness classification. Writing a for the
//! base and b, b′ for the others, with Γ, Γ′ the two extremal elements of
//! ⟨a,b′⟩⟨a,b⟩ (defined when b and b′ commute and both base bonds are
//! finite):
//!
//! - the full elements of the ball lying in ⟨a,b′⟩⟨a,b⟩ are exactly Γ, Γ′
//!   (just Γ′ when a base bond is 2 — Γ is then one letter short of the
//!   ⟨a,b⟩ top);
//! - crossed matchings (φ(b) = ab, φ(b′) = b′a, both bonds ≥ 3, m_bb′ = 2)
//!   are full iff one table is plain multiplication and the opposite table
//!   is base-regular on the matching side;
//! - non-crossed matchings (both atoms raised away from the base on the
//!   same side, both bonds ≥ 3) are full iff: for m_bb′ > 2 the whole
//!   matching is multiplication by the base; for m_bb′ = 2 either the whole
//!   matching is that multiplication, or one table is the multiplication
//!   and the other is base-regular — and then the full elements of the
//!   domain are exactly Γ, Γ′;
//! - an atom commuting with everything leaves every matching regular for it
//!   and defined everywhere.
//!
//! Fullness of a matching always requires every bond finite; the explicit
//! conditions above are stated under that proviso.

use crate::coxeter::{Bond, ElementId, GenSet, Generator, GroupBall, Side};
use crate::matchings::{
    gamma_elements, gd_membership, predict_obstructions, MatchingFamily, PartialMatching,
    Rank3Roles, ScenarioKind,
};
use crate::verify::report::{CaseReport, Recorder};
use crate::verify::support::each_matching;
use crate::verify::CorpusCase;
use crate::Error;

pub fn run(case: &CorpusCase) -> CaseReport {
    let mut rec = Recorder::new(&case.name, &case.matrix);
    if case.matrix.rank() != 3 {
        return rec.finish();
    }
    let ball = match GroupBall::build(case.matrix.clone(), case.match_bound) {
        Ok(ball) => ball,
        Err(e) => {
            rec.error("build_ball", None, &e);
            return rec.finish();
        }
    };
    let matrix = ball.matrix();

    gamma_products(&ball, &mut rec);

    each_matching(&ball, &mut rec, |rec, family, pm| {
        let label = family.label(matrix);
        predicted_exclusions(rec, family, pm, &label);
        fullness_classification(rec, family, pm, &label);
    });
    rec.finish()
}

/// The full elements of the ball inside the set product ⟨a,b′⟩⟨a,b⟩ are
/// exactly the two extremal elements, for every role assignment admitting
/// them.
fn gamma_products(ball: &GroupBall, rec: &mut Recorder) {
    let matrix = ball.matrix();
    let everyone = matrix.generator_set();
    for base in matrix.generators() {
        let assignments = match Rank3Roles::assignments(ball, base) {
            Ok(a) => a,
            Err(e) => {
                rec.error("role_assignments", None, &e);
                continue;
            }
        };
        for roles in assignments {
            let (plain, pinched) = match gamma_elements(ball, roles) {
                Ok(pair) => pair,
                Err(Error::ScenarioNotCovered(_)) => continue,
                Err(Error::BallTooSmall(_)) => {
                    rec.skip();
                    continue;
                }
                Err(e) => {
                    rec.error("gamma_elements", None, &e);
                    continue;
                }
            };
            let g = GenSet::pair(roles.base, roles.b_prime);
            let d = GenSet::pair(roles.base, roles.b);
            let mut fulls: Vec<ElementId> = Vec::new();
            let mut failed = false;
            for w in ball.ids() {
                if !gd_membership(ball, w, g, d) {
                    continue;
                }
                match ball.is_full(w, everyone) {
                    Ok(true) => fulls.push(w),
                    Ok(false) => {}
                    Err(e) => {
                        rec.error("g_product_fulls_are_extremal", None, &e);
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                continue;
            }
            // The plain element Γ spends one letter on b′, so it can only
            // dominate the ⟨a,b⟩ top when both base bonds are ≥ 3; with a
            // degenerate base bond only the pinched element Γ′ is full.
            let degenerate = matrix.bond(roles.base, roles.b).finite() == Some(2)
                || matrix.bond(roles.base, roles.b_prime).finite() == Some(2);
            let mut expected = if degenerate { vec![pinched] } else { vec![plain, pinched] };
            expected.sort_unstable();
            let witness = format!(
                "a={} b={} b'={}",
                matrix.name(roles.base),
                matrix.name(roles.b),
                matrix.name(roles.b_prime)
            );
            rec.check(
                "g_product_fulls_are_extremal",
                None,
                Some(witness),
                fulls == expected,
                || {
                    let shown: Vec<String> = fulls.iter().map(|&w| ball.display(w)).collect();
                    format!("full product elements: [{}]", shown.join(", "))
                },
            );
        }
    }
}

/// Every applicable prediction scenario names elements that the extension
/// excludes, minimally so: all their coatoms stay matched.
fn predicted_exclusions(
    rec: &mut Recorder,
    family: &MatchingFamily,
    pm: &PartialMatching<'_>,
    label: &str,
) {
    let ball = pm.ball();
    let reliable = pm.reliable_bound();
    let assignments = match Rank3Roles::assignments(ball, family.base()) {
        Ok(a) => a,
        Err(e) => {
            rec.error("role_assignments", Some(label), &e);
            return;
        }
    };
    for roles in assignments {
        for kind in ScenarioKind::ALL {
            let prediction = match predict_obstructions(ball, family, roles, kind) {
                Ok(p) => p,
                Err(Error::ScenarioNotCovered(_)) => continue,
                Err(Error::BallTooSmall(_)) => {
                    rec.skip();
                    continue;
                }
                Err(e) => {
                    rec.error("predict_obstructions", Some(label), &e);
                    continue;
                }
            };
            for &x in &prediction.excluded {
                if ball.len(x) as u32 > reliable {
                    rec.skip();
                    continue;
                }
                let witness = || format!("{kind:?} predicts {}", ball.display(x));
                rec.check(
                    "predicted_element_excluded",
                    Some(label),
                    Some(witness()),
                    !pm.in_domain(x),
                    || "predicted obstruction is matched anyway".into(),
                );
                let minimal = ball.coatoms(x).iter().all(|&c| pm.in_domain(c));
                rec.check(
                    "predicted_exclusion_minimal",
                    Some(label),
                    Some(witness()),
                    minimal,
                    || "a coatom of the predicted obstruction is excluded too".into(),
                );
            }
        }
    }
}

/// Where an atom is raised, relative to the base: to atom·base, base·atom,
/// or both (commuting).
struct AtomMove {
    gen: Generator,
    away: bool,
    toward: bool,
}

fn atom_move(pm: &PartialMatching<'_>, s: Generator) -> AtomMove {
    let ball = pm.ball();
    let base = pm.base();
    let s_id = ball
        .mult(ball.identity(), s, Side::Left)
        .id()
        .expect("atoms are in every ball");
    let image = pm.image(s_id).expect("atoms are always matched");
    let away = ball.mult(s_id, base, Side::Right).id() == Some(image);
    let toward = ball.mult(s_id, base, Side::Left).id() == Some(image);
    AtomMove { gen: s, away, toward }
}

/// The fullness biconditionals, per matching.
fn fullness_classification(
    rec: &mut Recorder,
    family: &MatchingFamily,
    pm: &PartialMatching<'_>,
    label: &str,
) {
    let ball = pm.ball();
    let matrix = ball.matrix();
    let base = family.base();
    let atoms: Vec<AtomMove> = matrix
        .generators()
        .filter(|&s| s != base)
        .map(|s| atom_move(pm, s))
        .collect();
    let [x, y] = [&atoms[0], &atoms[1]];
    let bond_x = matrix.bond(base, x.gen);
    let bond_y = matrix.bond(base, y.gen);
    let bond_xy = matrix.bond(x.gen, y.gen);
    let finite_all = [bond_x, bond_y, bond_xy].iter().all(|b| b.finite().is_some());
    let table = |s: Generator| family.member(s).expect("family covers every generator");

    let full = match pm.is_full_matching() {
        Ok(f) => f,
        Err(e) => {
            rec.error("fullness_classification", Some(label), &e);
            return;
        }
    };

    central_atoms(rec, pm, &atoms, bond_xy, finite_all, full, label);

    // Everything below concerns atoms genuinely bonded to the base.
    if bond_x == Bond::Finite(2) || bond_y == Bond::Finite(2) {
        return;
    }

    let crossed = (x.toward && y.away) || (y.toward && x.away);
    if crossed {
        // One atom to base·atom, the other to atom·base. Fullness needs the
        // atoms to commute; then exactly one of the two mixed table shapes.
        if bond_xy != Bond::Finite(2) || !finite_all {
            return; // never full; the factorization suite asserts that.
        }
        let (b, b_prime) = if x.toward { (x.gen, y.gen) } else { (y.gen, x.gen) };
        let beta = table(b);
        let beta_prime = table(b_prime);
        let expected = (beta.left_regular_for(base) && beta_prime.is_right_mult())
            || (beta_prime.right_regular_for(base) && beta.is_left_mult());
        rec.check("crossed_fullness_equivalence", Some(label), None, full == expected, || {
            format!("tables predict full = {expected}, extension says {full}")
        });
        return;
    }

    let away_side = x.away && y.away;
    let toward_side = x.toward && y.toward;
    if !away_side && !toward_side {
        return;
    }
    // Both atoms move on the same side. The toward case is the mirror image
    // of the away case: swap the multiplication direction and the
    // regularity side.
    let is_mult: fn(&crate::matchings::DihedralMatching) -> bool =
        if away_side { |t| t.is_right_mult() } else { |t| t.is_left_mult() };
    let is_reg = |t: &crate::matchings::DihedralMatching| {
        if away_side {
            t.left_regular_for(base)
        } else {
            t.right_regular_for(base)
        }
    };

    if bond_xy != Bond::Finite(2) {
        let expected = is_mult(table(x.gen)) && is_mult(table(y.gen)) && finite_all;
        rec.check("separated_fullness_equivalence", Some(label), None, full == expected, || {
            format!("tables predict full = {expected}, extension says {full}")
        });
        return;
    }

    if is_mult(table(x.gen)) && is_mult(table(y.gen)) {
        // The matching is multiplication by the base outright.
        rec.check("multiplication_fullness", Some(label), None, full == finite_all, || {
            format!("multiplication matching should be full iff bonds are finite ({finite_all})")
        });
        return;
    }

    let orientations = [(x, y), (y, x)];
    let oriented = orientations
        .iter()
        .find(|(mult, dev)| is_mult(table(mult.gen)) && is_reg(table(dev.gen)));
    let expected = oriented.is_some() && finite_all;
    rec.check("mixed_fullness_equivalence", Some(label), None, full == expected, || {
        format!("tables predict full = {expected}, extension says {full}")
    });
    if !(full && expected) {
        return;
    }

    // Full non-crossed deviant matchings: the full elements of the domain
    // are exactly the two extremal product elements (reversed in the
    // mirrored case).
    let (mult_atom, deviating) = oriented.expect("full implies an orientation");
    let roles = Rank3Roles { base, b: deviating.gen, b_prime: mult_atom.gen };
    let gammas = match gamma_elements(ball, roles) {
        Ok(pair) => pair,
        Err(e) => {
            rec.error("domain_fulls_are_extremal", Some(label), &e);
            return;
        }
    };
    let mut expected_fulls = if away_side {
        vec![gammas.0, gammas.1]
    } else {
        let reverse = |g: ElementId| match ball.locate(&ball.word(g).reversed()) {
            Ok(Some(id)) => id,
            _ => unreachable!("reversal preserves length, hence ball membership"),
        };
        vec![reverse(gammas.0), reverse(gammas.1)]
    };
    let reliable = pm.reliable_bound();
    // An extremal element past the reliable bound cannot be confirmed as
    // part of the domain, so the comparison holds below it.
    expected_fulls.retain(|&g| {
        let inside = ball.len(g) as u32 <= reliable;
        if !inside {
            rec.skip();
        }
        inside
    });
    expected_fulls.sort_unstable();
    let mut fulls: Vec<ElementId> = Vec::new();
    for w in ball.ids() {
        if ball.len(w) as u32 > reliable || !pm.in_domain(w) {
            continue;
        }
        match ball.is_full(w, matrix.generator_set()) {
            Ok(true) => fulls.push(w),
            Ok(false) => {}
            Err(e) => {
                rec.error("domain_fulls_are_extremal", Some(label), &e);
                return;
            }
        }
    }
    rec.check("domain_fulls_are_extremal", Some(label), None, fulls == expected_fulls, || {
        let shown: Vec<String> = fulls.iter().map(|&w| ball.display(w)).collect();
        format!("full domain elements: [{}]", shown.join(", "))
    });
}

/// An atom commuting with the base and the other atom: every matching is
/// regular for it and defined everywhere, and full when the bonds allow
/// full elements at all.
fn central_atoms(
    rec: &mut Recorder,
    pm: &PartialMatching<'_>,
    atoms: &[AtomMove],
    bond_xy: Bond,
    finite_all: bool,
    full: bool,
    label: &str,
) {
    if bond_xy != Bond::Finite(2) {
        return;
    }
    let matrix = pm.ball().matrix();
    let base = pm.base();
    for atom in atoms {
        if matrix.bond(base, atom.gen) != Bond::Finite(2) {
            continue;
        }
        rec.check(
            "central_atom_regular",
            Some(label),
            Some(matrix.name(atom.gen).to_string()),
            pm.is_regular(atom.gen, Side::Left),
            || "matching fails to commute with a central atom".into(),
        );
        rec.check(
            "central_atom_total",
            Some(label),
            Some(matrix.name(atom.gen).to_string()),
            pm.excluded().is_empty(),
            || "matching with a central atom excludes an element".into(),
        );
        rec.check("central_atom_full", Some(label), None, full == finite_all, || {
            format!("central-atom matching should be full iff bonds are finite ({finite_all})")
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;

    fn triangle(p: u32, q: u32, r: u32, bound: u32) -> CorpusCase {
        CorpusCase {
            name: format!("triangle-{p}.{q}.{r}"),
            matrix: CoxeterMatrix::new(&[vec![1, p, q], vec![p, 1, r], vec![q, r, 1]]).unwrap(),
            poly_bound: bound,
            match_bound: bound,
            group_bound: None,
        }
    }

    #[test]
    fn obstruction_suite_passes_where_deviant_matchings_are_full() {
        // m_ab = 5 admits base-regular tables that are not multiplication,
        // so the full-element scan for deviant matchings actually fires.
        let case = triangle(5, 3, 2, 8);
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
        assert!(report.checks > 30, "suite actually ran: {}", report.checks);
    }

    #[test]
    fn deviant_full_matching_has_exactly_the_two_extremal_elements() {
        use crate::matchings::{
            enumerate_dihedral_matchings, extend_maximal, DiElt, DihedralMatching,
        };

        let case = triangle(5, 3, 2, 8);
        let ball = GroupBall::build(case.matrix.clone(), case.match_bound).unwrap();
        let (a, b, c) = (Generator(0), Generator(1), Generator(2));

        // The table on ⟨a,b⟩ that raises b away from the base (b ↦ ba), stays
        // a-regular on the left, and is not plain right multiplication.
        let tables = enumerate_dihedral_matchings(ball.matrix(), a, b, ball.bound()).unwrap();
        let mut deviant: Vec<DihedralMatching> = tables
            .into_iter()
            .filter(|t| {
                let atom = t.apply(DiElt::new(1, b)).unwrap();
                atom.first == b && t.left_regular_for(a) && !t.is_right_mult()
            })
            .collect();
        assert_eq!(deviant.len(), 1, "m = 5 has one away-side deviant regular table");

        let rho_c =
            DihedralMatching::right_mult(a, c, ball.matrix().bond(a, c), ball.bound()).unwrap();
        let family = MatchingFamily::new(a, vec![deviant.pop().unwrap(), rho_c]).unwrap();
        let pm = extend_maximal(&family, &ball).unwrap();
        assert_eq!(pm.is_full_matching().unwrap(), true, "deviant matching is full");

        let roles = Rank3Roles { base: a, b, b_prime: c };
        let (plain, pinched) = gamma_elements(&ball, roles).unwrap();
        let mut expected = vec![plain, pinched];
        expected.sort_unstable();

        let everything = ball.matrix().generator_set();
        let fulls: Vec<ElementId> = ball
            .ids()
            .filter(|&w| {
                ball.len(w) <= pm.reliable_bound() as usize
                    && pm.in_domain(w)
                    && ball.is_full(w, everything).unwrap()
            })
            .collect();
        assert_eq!(fulls, expected);
    }

    #[test]
    fn obstruction_suite_passes_on_a_wide_middle_bond() {
        let case = triangle(4, 4, 3, 7);
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
    }

    #[test]
    fn obstruction_suite_passes_on_a_central_atom_group() {
        let case = triangle(5, 2, 2, 7);
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
    }

    #[test]
    fn obstruction_suite_passes_with_an_infinite_bond() {
        let inf = crate::coxeter::Bond::Infinite.to_code();
        let case = triangle(inf, 3, 2, 5);
        let report = run(&case);
        assert!(report.failures.is_empty(), "{:#?}", report.failures);
    }

    #[test]
    fn non_rank3_cases_produce_empty_reports() {
        let case = CorpusCase {
            name: "a1".into(),
            matrix: CoxeterMatrix::new(&[vec![1]]).unwrap(),
            poly_bound: 1,
            match_bound: 1,
            group_bound: None,
        };
        let report = run(&case);
        assert_eq!(report.checks, 0);
        assert!(report.failures.is_empty());
    }
}

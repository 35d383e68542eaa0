//! The unique maximal extension of a family of dihedral tables.
//!
//! Processing elements by increasing length, an unmatched element w whose
//! coatoms are all matched can only rise to an element whose coatom set
//! equals Z(φ, w); the ball's coatom-set index finds that candidate directly,
//! and when none exists w is certainly outside the domain of every matching
//! extending the family. The candidate is also unique: two same-length
//! elements sharing a coatom set of size ≥ 3 coincide, and smaller Z-sets
//! cannot collide here because their members would already be matched by the
//! family tables. A duplicate therefore signals a bug and errors out loudly
//! rather than picking a side.

use crate::bitset::BitSet;
use crate::coxeter::{dihedral_word, AltSide, Element, ElementId, Generator, GroupBall, Side};
use crate::poset::LowerSet;
use crate::{Error, Result};

use super::dihedral::{DiElt, DihedralMatching, MatchingFamily};
use super::{MatchStatus, PartialMatching};

/// Extends a family of dihedral tables to the whole ball. Every generator
/// other than the base needs a table built for the matrix's actual bond;
/// finite-bond tables must be total, and infinite-bond tables must reach the
/// ball bound exactly (a shorter table would turn unknowable matches into
/// false exclusions).
pub fn extend_maximal<'a>(
    family: &MatchingFamily,
    ball: &'a GroupBall,
) -> Result<PartialMatching<'a>> {
    let matrix = ball.matrix();
    let base = family.base();
    if base.index() >= matrix.rank() {
        return Err(Error::Input("family base is not a generator of the matrix".into()));
    }
    if ball.bound() == 0 {
        return Err(Error::BallTooSmall("extension needs a ball of bound ≥ 1".into()));
    }
    for s in matrix.generators().filter(|&s| s != base) {
        let member = family.member(s).ok_or_else(|| {
            Error::Input(format!(
                "family has no table for generator `{}`",
                matrix.name(s)
            ))
        })?;
        if member.bond() != matrix.bond(base, s) {
            return Err(Error::Input(format!(
                "table for `{}` was built for bond {}, the matrix has {}",
                matrix.name(s),
                member.bond(),
                matrix.bond(base, s)
            )));
        }
        if member.bound() > ball.bound() {
            return Err(Error::BallTooSmall(format!(
                "table for `{}` reaches length {}, ball bound is {}",
                matrix.name(s),
                member.bound(),
                ball.bound()
            )));
        }
        if !member.is_total() && member.bound() != ball.bound() {
            return Err(Error::Input(format!(
                "truncated table for `{}` stops at length {}; it must reach the ball bound {}",
                matrix.name(s),
                member.bound(),
                ball.bound()
            )));
        }
    }

    let n = ball.size();
    let mut partner: Vec<Option<ElementId>> = vec![None; n];
    let mut status = vec![MatchStatus::Unresolved; n];
    let pair = |partner: &mut Vec<Option<ElementId>>,
                    status: &mut Vec<MatchStatus>,
                    u: ElementId,
                    v: ElementId| {
        debug_assert!(partner[u.index()].is_none() && partner[v.index()].is_none());
        partner[u.index()] = Some(v);
        partner[v.index()] = Some(u);
        status[u.index()] = MatchStatus::Matched;
        status[v.index()] = MatchStatus::Matched;
    };

    // seed: the identity rises to the base, and each table pins its ⟨base,s⟩
    let e = ball.identity();
    let a_id = ball
        .mult(e, base, Side::Right)
        .id()
        .expect("atoms are in any ball of bound ≥ 1");
    pair(&mut partner, &mut status, e, a_id);
    for member in family.members() {
        for (lo, hi) in member.pairs() {
            let lo = ball.require(&member.element(matrix, lo)?)?;
            let hi = ball.require(&member.element(matrix, hi)?)?;
            if partner[lo.index()] == Some(hi) {
                continue; // the shared pair (e, base)
            }
            pair(&mut partner, &mut status, lo, hi);
        }
    }

    let bound = ball.bound();
    let mut excluded = Vec::new();
    let mut unresolved = Vec::new();
    for len in 1..=bound as usize {
        for &w in ball.layer(len) {
            if partner[w.index()].is_some() {
                continue;
            }
            let coats = ball.coatoms(w);
            if coats
                .iter()
                .any(|c| status[c.index()] == MatchStatus::Excluded)
            {
                status[w.index()] = MatchStatus::Excluded;
                excluded.push(w);
                continue;
            }
            if coats.iter().any(|c| partner[c.index()].is_none()) {
                status[w.index()] = MatchStatus::Unresolved;
                unresolved.push(w);
                continue;
            }
            if len as u32 + 1 > bound {
                // the candidate would live past the ball's edge
                status[w.index()] = MatchStatus::Unresolved;
                unresolved.push(w);
                continue;
            }
            let mut z = vec![w];
            for &c in coats {
                let img = partner[c.index()].expect("checked above");
                if ball.len(img) > ball.len(c) {
                    z.push(img);
                }
            }
            z.sort_by_key(|id| id.0);
            match ball.elements_with_coatom_set(&z) {
                [] => {
                    status[w.index()] = MatchStatus::Excluded;
                    excluded.push(w);
                }
                [cand] => {
                    assert!(
                        partner[cand.index()].is_none(),
                        "candidate above `{}` is already matched",
                        ball.display(w)
                    );
                    pair(&mut partner, &mut status, w, *cand);
                }
                many => {
                    return Err(Error::AmbiguousCandidate {
                        element: ball.display(w),
                        candidates: many.iter().map(|&c| ball.display(c)).collect(),
                    });
                }
            }
        }
    }

    let mut bits = BitSet::new(n);
    for id in ball.ids() {
        if partner[id.index()].is_some() {
            bits.insert(id.index());
        } else {
            debug_assert!(status[id.index()] != MatchStatus::Matched);
        }
    }
    let domain = LowerSet::from_bits(bits);
    debug_assert!(domain
        .members()
        .iter()
        .all(|&w| ball.coatoms(w).iter().all(|&c| domain.contains(c))));
    let reliable_bound = if ball.closed() { bound + 1 } else { bound.saturating_sub(1) };
    Ok(PartialMatching::new(
        ball,
        base,
        partner,
        status,
        domain,
        excluded,
        unresolved,
        reliable_bound,
    ))
}

/// Reads the family of dihedral tables back off a computed matching. The
/// principal parts of a maximal matching are always stable, so this inverts
/// [`extend_maximal`]; a pairing that is not stable on some ⟨base,s⟩ is
/// rejected.
pub fn restrict_to_principal(pm: &PartialMatching<'_>) -> Result<MatchingFamily> {
    let ball = pm.ball();
    let matrix = ball.matrix();
    let base = pm.base();
    let mut members = Vec::new();
    for s in matrix.generators().filter(|&s| s != base) {
        let bond = matrix.bond(base, s);
        let member = DihedralMatching::from_raises(base, s, bond, ball.bound(), |x| {
            let el = alt_element(matrix, base, s, x)?;
            let id = ball.id_of(&el)?;
            let img = pm.image(id)?;
            as_dielt(base, s, ball.element(img))
        })
        .map_err(|_| {
            Error::Input(format!(
                "matching is not stable on the dihedral part over `{}` and `{}`",
                matrix.name(base),
                matrix.name(s)
            ))
        })?;
        members.push(member);
    }
    MatchingFamily::new(base, members)
}

fn alt_element(
    matrix: &crate::coxeter::CoxeterMatrix,
    base: Generator,
    s: Generator,
    x: DiElt,
) -> Option<Element> {
    if x.len == 0 {
        return Some(Element::identity());
    }
    let second = if x.first == base { s } else { base };
    dihedral_word(matrix, x.first, second, x.len, AltSide::Prefix).ok()
}

fn as_dielt(base: Generator, s: Generator, el: &Element) -> Option<DiElt> {
    let letters = el.word().letters();
    if letters.is_empty() {
        return Some(DiElt::new(0, base));
    }
    for (i, &g) in letters.iter().enumerate() {
        if g != base && g != s {
            return None;
        }
        if i > 0 && letters[i - 1] == g {
            return None;
        }
    }
    Some(DiElt::new(letters.len() as u32, letters[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Bond, CoxeterMatrix, Mult, Word};
    use crate::matchings::MatchStatus;

    fn named(rows: &[Vec<u32>], names: &[&str]) -> CoxeterMatrix {
        CoxeterMatrix::with_names(rows, names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn id_for(ball: &GroupBall, text: &str) -> ElementId {
        let w = Word::parse(ball.matrix(), text).unwrap();
        ball.locate(&w).unwrap().expect("element in ball")
    }

    #[test]
    fn multiplication_family_extends_to_multiplication() {
        let matrix = named(
            &[vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]],
            &["a", "b", "c"],
        );
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        assert!(ball.closed());
        for (family, side) in [
            (MatchingFamily::right_mult(&matrix, Generator(0), 6).unwrap(), Side::Right),
            (MatchingFamily::left_mult(&matrix, Generator(0), 6).unwrap(), Side::Left),
        ] {
            let pm = extend_maximal(&family, &ball).unwrap();
            assert_eq!(pm.excluded(), &[]);
            assert_eq!(pm.unresolved(), &[]);
            assert_eq!(pm.reliable_bound(), 7);
            for w in ball.ids() {
                let expected = match ball.mult(w, Generator(0), side) {
                    Mult::Up(v) | Mult::Down(v) => v,
                    Mult::OutOfBall => unreachable!("closed ball"),
                };
                assert_eq!(pm.image(w), Some(expected));
            }
            assert_eq!(pm.validate(), Ok(()));
            assert_eq!(restrict_to_principal(&pm).unwrap(), family);
        }
    }

    #[test]
    fn every_family_round_trips_through_extension() {
        // bonds 3, 4, 2 around base a: 2·4 families
        let matrix = named(
            &[vec![1, 3, 4], vec![3, 1, 2], vec![4, 2, 1]],
            &["a", "b", "c"],
        );
        let ball = GroupBall::build(matrix.clone(), 5).unwrap();
        let families = MatchingFamily::enumerate(&matrix, Generator(0), 5).unwrap();
        assert_eq!(families.len(), 8);
        let mut images = Vec::new();
        for family in &families {
            let pm = extend_maximal(&family, &ball).unwrap();
            assert_eq!(pm.validate(), Ok(()));
            assert_eq!(&restrict_to_principal(&pm).unwrap(), family);
            images.push(pm.pairs());
        }
        images.sort();
        images.dedup();
        assert_eq!(images.len(), families.len(), "extensions stay distinct");
    }

    #[test]
    fn unresolved_appears_only_at_the_edge_of_infinite_tables() {
        let matrix = named(&[vec![1, 0], vec![0, 1]], &["a", "s"]);
        let ball = GroupBall::build(matrix.clone(), 4).unwrap();
        let families = MatchingFamily::enumerate(&matrix, Generator(0), 4).unwrap();
        assert_eq!(families.len(), 8);
        for family in &families {
            let pm = extend_maximal(family, &ball).unwrap();
            assert_eq!(pm.excluded(), &[]);
            assert_eq!(pm.unresolved().len(), 1);
            assert_eq!(ball.len(pm.unresolved()[0]), 4);
            assert_eq!(pm.reliable_bound(), 3);
        }
    }

    #[test]
    fn deviating_prime_table_excludes_the_predicted_element() {
        // bonds: a–b = 3, a–b' = 5, b–b' = 2; the ⟨a,b'⟩ table leaves right
        // multiplication at ab' (image b'ab') and returns at ab'a (image
        // ab'ab'), which forces ab'ba out of every extension
        let matrix = named(
            &[vec![1, 3, 5], vec![3, 1, 2], vec![5, 2, 1]],
            &["a", "b", "bp"],
        );
        let (a, b, bp) = (Generator(0), Generator(1), Generator(2));
        let beta = DihedralMatching::from_choices(a, b, Bond::Finite(3), 3, vec![a, a]).unwrap();
        let beta_p =
            DihedralMatching::from_choices(a, bp, Bond::Finite(5), 5, vec![bp, bp, a, a]).unwrap();
        let family = MatchingFamily::new(a, vec![beta, beta_p]).unwrap();
        let ball = GroupBall::build(matrix, 5).unwrap();
        let pm = extend_maximal(&family, &ball).unwrap();
        let target = id_for(&ball, "a.bp.b.a");
        assert_eq!(pm.status(target), MatchStatus::Excluded);
        for &c in ball.coatoms(target) {
            assert_eq!(pm.status(c), MatchStatus::Matched, "coatoms stay matched");
        }
        assert_eq!(pm.validate(), Ok(()));
    }

    #[test]
    fn crossed_family_excludes_the_mixed_product() {
        // φ(b) = ba and φ(c) = ac pull in opposite directions; c·a·b then
        // has no candidate above it
        let matrix = named(
            &[vec![1, 3, 3], vec![3, 1, 2], vec![3, 2, 1]],
            &["a", "b", "c"],
        );
        let (a, b, c) = (Generator(0), Generator(1), Generator(2));
        let beta = DihedralMatching::from_choices(a, b, Bond::Finite(3), 3, vec![b, a]).unwrap();
        let gamma = DihedralMatching::left_mult(a, c, Bond::Finite(3), 3).unwrap();
        let family = MatchingFamily::new(a, vec![beta, gamma]).unwrap();
        let ball = GroupBall::build(matrix, 5).unwrap();
        let pm = extend_maximal(&family, &ball).unwrap();
        assert_eq!(pm.status(id_for(&ball, "c.a.b")), MatchStatus::Excluded);
        assert_eq!(pm.validate(), Ok(()));
    }

    #[test]
    fn families_must_fit_the_ball_and_the_matrix() {
        let matrix = named(
            &[vec![1, 3, 4], vec![3, 1, 2], vec![4, 2, 1]],
            &["a", "b", "c"],
        );
        let (a, b, c) = (Generator(0), Generator(1), Generator(2));
        let small = GroupBall::build(matrix.clone(), 3).unwrap();
        let family = MatchingFamily::enumerate(&matrix, a, 4).unwrap().remove(0);
        assert!(matches!(
            extend_maximal(&family, &small),
            Err(Error::BallTooSmall(_))
        ));

        // missing table for c
        let beta = DihedralMatching::left_mult(a, b, Bond::Finite(3), 3).unwrap();
        let partial = MatchingFamily::new(a, vec![beta.clone()]).unwrap();
        let ball = GroupBall::build(matrix.clone(), 4).unwrap();
        assert!(matches!(extend_maximal(&partial, &ball), Err(Error::Input(_))));

        // wrong bond for c
        let wrong = DihedralMatching::left_mult(a, c, Bond::Finite(3), 3).unwrap();
        let mismatched = MatchingFamily::new(a, vec![beta, wrong]).unwrap();
        assert!(matches!(extend_maximal(&mismatched, &ball), Err(Error::Input(_))));

        // infinite-bond table shorter than the ball
        let inf = named(&[vec![1, 0], vec![0, 1]], &["a", "s"]);
        let ball = GroupBall::build(inf.clone(), 5).unwrap();
        let short = MatchingFamily::new(
            a,
            vec![DihedralMatching::left_mult(a, Generator(1), Bond::Infinite, 3).unwrap()],
        )
        .unwrap();
        assert!(matches!(extend_maximal(&short, &ball), Err(Error::Input(_))));
    }

    #[test]
    fn rank_one_group_matches_identity_with_its_atom() {
        let matrix = named(&[vec![1]], &["a"]);
        let ball = GroupBall::build(matrix, 1).unwrap();
        let family = MatchingFamily::new(Generator(0), Vec::new()).unwrap();
        let pm = extend_maximal(&family, &ball).unwrap();
        assert_eq!(pm.image(ball.identity()), Some(ElementId(1)));
        assert_eq!(pm.excluded(), &[]);
        assert_eq!(pm.unresolved(), &[]);
        assert_eq!(pm.validate(), Ok(()));
    }
}

//! Shared plumbing for the suites: matching enumeration over a ball, word
//! products along ball edges, parabolic membership.

use crate::coxeter::{Bond, ElementId, GenSet, GroupBall, Side};
use crate::matchings::{extend_maximal, MatchingFamily, PartialMatching};
use crate::verify::report::Recorder;

/// Runs `body` for every maximal matching of the ball: every base generator,
/// every family over it. Enumeration and extension errors are filed on the
/// recorder instead of aborting the case.
pub fn each_matching(
    ball: &GroupBall,
    rec: &mut Recorder,
    mut body: impl FnMut(&mut Recorder, &MatchingFamily, &PartialMatching<'_>),
) {
    let matrix = ball.matrix();
    for base in matrix.generators() {
        let families = match MatchingFamily::enumerate(matrix, base, ball.bound()) {
            Ok(families) => families,
            Err(e) => {
                rec.error("enumerate_families", None, &e);
                continue;
            }
        };
        for family in &families {
            match extend_maximal(family, ball) {
                Ok(pm) => body(rec, family, &pm),
                Err(e) => rec.error("extend_maximal", Some(&family.label(matrix)), &e),
            }
        }
    }
}

/// x·y computed along ball edges, feeding the letters of x to the left of y
/// one at a time. `None` when any intermediate product leaves the ball.
pub fn left_mul(ball: &GroupBall, x: ElementId, y: ElementId) -> Option<ElementId> {
    let letters = ball.word(x).letters().to_vec();
    let mut cur = y;
    for &s in letters.iter().rev() {
        cur = ball.mult(cur, s, Side::Left).id()?;
    }
    Some(cur)
}

/// x·y computed along ball edges, feeding the letters of y to the right of x
/// one at a time. `None` when any intermediate product leaves the ball.
pub fn right_mul(ball: &GroupBall, x: ElementId, y: ElementId) -> Option<ElementId> {
    let letters = ball.word(y).letters().to_vec();
    let mut cur = x;
    for &s in letters.iter() {
        cur = ball.mult(cur, s, Side::Right).id()?;
    }
    Some(cur)
}

/// The members of the standard parabolic ⟨J⟩ within the ball, ascending.
pub fn parabolic_members(ball: &GroupBall, j: GenSet) -> Vec<ElementId> {
    ball.ids().filter(|&w| ball.support(w).is_subset(j)).collect()
}

/// x·y via ball edges, trying both feeding orders before falling back to
/// word reduction when the intermediate steps leave the ball. `Ok(None)`
/// means the product itself is outside.
pub fn product(ball: &GroupBall, x: ElementId, y: ElementId) -> crate::Result<Option<ElementId>> {
    if let Some(p) = left_mul(ball, x, y) {
        return Ok(Some(p));
    }
    if let Some(p) = right_mul(ball, x, y) {
        return Ok(Some(p));
    }
    ball.locate(&ball.word(x).concat(ball.word(y)))
}

/// Check names for [`product_transport`].
#[derive(Clone, Copy)]
pub struct TransportNames {
    /// Products of the two factors must stay in the domain.
    pub stay: &'static str,
    /// The matching must commute with the outer factor on such products.
    pub commute: &'static str,
}

/// Verifies that products of `outer`-parabolic elements with matched
/// `inner`-parabolic elements stay in the domain and commute with the
/// matching: for `side == Left` the outer factor multiplies from the left
/// (φ(x·y) = x·φ(y)), for `side == Right` from the right (φ(y·x) = φ(y)·x).
/// Products that escape the ball or land past the reliable bound are skipped.
pub fn product_transport(
    rec: &mut Recorder,
    pm: &PartialMatching<'_>,
    label: &str,
    outer: GenSet,
    inner: GenSet,
    side: Side,
    names: TransportNames,
) {
    let ball = pm.ball();
    let reliable = pm.reliable_bound();
    let outer_members = parabolic_members(ball, outer);
    let inner_members: Vec<ElementId> = parabolic_members(ball, inner)
        .into_iter()
        .filter(|&y| pm.in_domain(y) && (ball.len(y) as u32) <= reliable)
        .collect();
    for &x in &outer_members {
        if x == ball.identity() {
            continue;
        }
        for &y in &inner_members {
            let prod = match side {
                Side::Left => product(ball, x, y),
                Side::Right => product(ball, y, x),
            };
            let prod = match prod {
                Ok(Some(p)) => p,
                Ok(None) => {
                    rec.skip();
                    continue;
                }
                Err(e) => {
                    rec.error(names.stay, Some(label), &e);
                    continue;
                }
            };
            if ball.len(prod) as u32 > reliable {
                rec.skip();
                continue;
            }
            let witness = || format!("x={} y={}", ball.display(x), ball.display(y));
            rec.check(names.stay, Some(label), Some(witness()), pm.in_domain(prod), || {
                format!("product {} fell out of the domain", ball.display(prod))
            });
            let Some(image) = pm.image(prod) else { continue };
            let fy = pm.image(y).expect("y is matched");
            let expected = match side {
                Side::Left => product(ball, x, fy),
                Side::Right => product(ball, fy, x),
            };
            match expected {
                Ok(expected) => rec.check(
                    names.commute,
                    Some(label),
                    Some(witness()),
                    Some(image) == expected,
                    || format!("φ(product) = {}, commuted image differs", ball.display(image)),
                ),
                Err(e) => rec.error(names.commute, Some(label), &e),
            }
        }
    }
}

/// How many dihedral tables a single bond admits within `bound`: one raise
/// choice per level with two elements, with the top of a finite group forced.
pub fn expected_tables(bond: Bond, bound: u32) -> u64 {
    match bond.finite() {
        Some(m) => 1u64 << (m.min(bound).saturating_sub(2)),
        None => 1u64 << bound.saturating_sub(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterMatrix, Generator, GroupBall};

    fn a3_ball() -> GroupBall {
        let matrix = CoxeterMatrix::new(&[vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]]).unwrap();
        GroupBall::build(matrix, 6).unwrap()
    }

    #[test]
    fn edge_products_agree_with_word_reduction() {
        let ball = a3_ball();
        for x in ball.ids() {
            for y in ball.ids() {
                let by_word = ball
                    .locate(&ball.word(x).concat(ball.word(y)))
                    .expect("closed ball resolves every word");
                assert_eq!(left_mul(&ball, x, y), by_word);
                assert_eq!(right_mul(&ball, x, y), by_word);
            }
        }
    }

    #[test]
    fn parabolic_members_match_support_filtering() {
        let ball = a3_ball();
        let j = GenSet::pair(Generator(0), Generator(1));
        let members = parabolic_members(&ball, j);
        // ⟨a,b⟩ is a copy of the 6-element dihedral group.
        assert_eq!(members.len(), 6);
        assert!(members.iter().all(|&w| ball.support(w).is_subset(j)));
    }

    #[test]
    fn table_counts_follow_the_level_choices() {
        assert_eq!(expected_tables(Bond::Finite(2), 9), 1);
        assert_eq!(expected_tables(Bond::Finite(3), 9), 2);
        assert_eq!(expected_tables(Bond::Finite(5), 9), 8);
        assert_eq!(expected_tables(Bond::Infinite, 5), 16);
    }
}

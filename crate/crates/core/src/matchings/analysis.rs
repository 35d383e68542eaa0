//! Regularity, orbits, reducibility, fullness, and factorization tests for
//! computed matchings.
//!
//! All of these read a [`PartialMatching`] below its reliable bound, where
//! every membership verdict is certain. Parabolic factorization questions
//! (is w a product of an element over G and an element over D?) reduce to
//! coset minima, which a ball computes exactly because stripping descents
//! only ever moves downward.

use crate::coxeter::{ElementId, GenSet, Generator, GroupBall, Mult, Side};
use crate::Result;

use super::PartialMatching;

/// A matched pair listed bottom-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orbit {
    pub bottom: ElementId,
    pub top: ElementId,
}

/// A full orbit together with the regular descent found for it, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitAssessment {
    pub bottom: ElementId,
    pub top: ElementId,
    /// A generator that is a descent of the bottom on the given side and
    /// acts regularly on the matching.
    pub witness: Option<(Generator, Side)>,
}

/// The verdict of [`PartialMatching::is_reducible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reducibility {
    pub reducible: bool,
    /// Every orbit whose top is a full element, with its witness.
    pub full_orbits: Vec<OrbitAssessment>,
}

impl<'a> PartialMatching<'a> {
    /// Whether multiplication by `s` on the given side commutes with the
    /// matching on the reliably known part of the domain: for every matched
    /// x of length below the reliable bound, s·x must be matched and go to
    /// s·φ(x). (For a total matching on a closed ball this is plain
    /// regularity; on an open ball it is the strongest statement the ball
    /// can certify.)
    pub fn is_regular(&self, s: Generator, side: Side) -> bool {
        let ball = self.ball;
        for x in ball.ids() {
            if !self.in_domain(x) || ball.len(x) as u32 >= self.reliable_bound {
                continue;
            }
            let sx = match ball.mult(x, s, side) {
                Mult::Up(v) | Mult::Down(v) => v,
                Mult::OutOfBall => unreachable!("reliable bound keeps s·x inside the ball"),
            };
            if !self.in_domain(sx) {
                return false;
            }
            let fx = self.image(x).expect("x is matched");
            let fsx = self.image(sx).expect("s·x is matched");
            if ball.mult(fx, s, side).id() != Some(fsx) {
                return false;
            }
        }
        true
    }

    /// The matched pairs as orbits {bottom, top}, ascending by bottom.
    pub fn orbits(&self) -> Vec<Orbit> {
        self.pairs()
            .into_iter()
            .map(|(bottom, top)| Orbit { bottom, top })
            .collect()
    }

    /// Whether the matching admits a regular descent on every full orbit:
    /// for each orbit whose top dominates the longest element of every
    /// dihedral parabolic, some descent s of the bottom must act regularly
    /// on the corresponding side. Rank ≤ 2 is reducible outright. Errors
    /// when the ball is too small to test fullness.
    pub fn is_reducible(&self) -> Result<Reducibility> {
        let ball = self.ball;
        if ball.rank() <= 2 {
            return Ok(Reducibility { reducible: true, full_orbits: Vec::new() });
        }
        let all = ball.matrix().generator_set();
        let mut memo = [vec![None; ball.rank()], vec![None; ball.rank()]];
        let mut regular = |pm: &PartialMatching<'_>, s: Generator, side: Side| -> bool {
            let slot = &mut memo[match side {
                Side::Left => 0,
                Side::Right => 1,
            }][s.index()];
            *slot.get_or_insert_with(|| pm.is_regular(s, side))
        };
        let mut full_orbits = Vec::new();
        let mut reducible = true;
        for (bottom, top) in self.pairs() {
            if !ball.is_full(top, all)? {
                continue;
            }
            let mut witness = None;
            'search: for side in [Side::Left, Side::Right] {
                for s in ball.descents(bottom, side).iter() {
                    if regular(self, s, side) {
                        witness = Some((s, side));
                        break 'search;
                    }
                }
            }
            reducible &= witness.is_some();
            full_orbits.push(OrbitAssessment { bottom, top, witness });
        }
        Ok(Reducibility { reducible, full_orbits })
    }

    /// Whether the domain contains a full element — one dominating the
    /// longest element of every dihedral parabolic. Fullness only goes up,
    /// so checking orbit tops suffices.
    pub fn is_full_matching(&self) -> Result<bool> {
        let all = self.ball.matrix().generator_set();
        for (_, top) in self.pairs() {
            if self.ball.is_full(top, all)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Sorts the generators by how the matching moves them, and derives the
    /// factorization sets G and D.
    pub fn classify_cross(&self) -> CrossClassification {
        let ball = self.ball;
        let matrix = ball.matrix();
        let base = self.base();
        let e = ball.identity();
        let mut commuting = GenSet::EMPTY;
        let mut u_set = GenSet::EMPTY;
        let mut v_set = GenSet::EMPTY;
        for s in matrix.generators().filter(|&s| s != base) {
            let s_id = ball
                .mult(e, s, Side::Right)
                .id()
                .expect("atoms are in the ball");
            let img = self.image(s_id).expect("atoms are always matched");
            let right = ball.mult(s_id, base, Side::Right).id();
            let left = ball.mult(s_id, base, Side::Left).id();
            if right == left {
                commuting.insert(s);
            } else if Some(img) == right {
                u_set.insert(s);
            } else {
                debug_assert_eq!(Some(img), left, "an atom can only move to sa or as");
                v_set.insert(s);
            }
        }
        let shared = commuting.union(GenSet::single(base));
        CrossClassification {
            base,
            commuting,
            u_set,
            v_set,
            g_set: shared.union(u_set),
            d_set: shared.union(v_set),
        }
    }
}

/// How a matching moves the atoms, relative to its base a: generators
/// commuting with a are neutral; the rest split into U (moved to s·a, the
/// right-multiplication direction) and V (moved to a·s). G and D are the
/// factorization alphabets built from these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossClassification {
    pub base: Generator,
    /// Generators other than the base commuting with it.
    pub commuting: GenSet,
    /// Non-commuting generators s with φ(s) = s·base.
    pub u_set: GenSet,
    /// Non-commuting generators s with φ(s) = base·s.
    pub v_set: GenSet,
    /// base ∪ commuting ∪ U.
    pub g_set: GenSet,
    /// base ∪ commuting ∪ V.
    pub d_set: GenSet,
}

impl CrossClassification {
    /// Both deviation directions occur.
    pub fn crossed(&self) -> bool {
        !self.u_set.is_empty() && !self.v_set.is_empty()
    }

    /// No atom moves in the right-multiplication direction.
    pub fn is_left_type(&self) -> bool {
        self.u_set.is_empty()
    }

    /// No atom moves in the left-multiplication direction.
    pub fn is_right_type(&self) -> bool {
        self.v_set.is_empty()
    }

    /// Splits the commuting set by bond order against `b`: generators with
    /// a bond ≥ 3 to `b` first, then those commuting with `b` as well.
    pub fn split_commuting(
        &self,
        matrix: &crate::coxeter::CoxeterMatrix,
        b: Generator,
    ) -> (GenSet, GenSet) {
        let mut tied = GenSet::EMPTY;
        let mut free = GenSet::EMPTY;
        for c in self.commuting.iter() {
            if matrix.bond(c, b) == crate::coxeter::Bond::Finite(2) {
                free.insert(c);
            } else {
                tied.insert(c);
            }
        }
        (tied, free)
    }
}

/// The shortest element of the coset ⟨J⟩·w, reached by stripping left
/// descents lying in J. Every other coset element is w' = x·(min) with the
/// lengths adding, so the minimum is Bruhat-below all of them.
pub fn coset_min_left(ball: &GroupBall, w: ElementId, j: GenSet) -> ElementId {
    strip(ball, w, j, Side::Left)
}

/// The shortest element of the coset w·⟨J⟩; the mirror of
/// [`coset_min_left`].
pub fn coset_min_right(ball: &GroupBall, w: ElementId, j: GenSet) -> ElementId {
    strip(ball, w, j, Side::Right)
}

fn strip(ball: &GroupBall, w: ElementId, j: GenSet, side: Side) -> ElementId {
    let mut cur = w;
    loop {
        match ball.descents(cur, side).intersection(j).iter().next() {
            Some(s) => {
                cur = ball
                    .mult(cur, s, side)
                    .id()
                    .expect("descents stay inside the ball");
            }
            None => return cur,
        }
    }
}

/// Whether w lies in the parabolic product ⟨G⟩·⟨D⟩. The coset w·⟨D⟩ has a
/// unique shortest representative r, Bruhat-below every representative; w
/// factors exactly when r lands in ⟨G⟩, i.e. when its support is contained
/// in G.
pub fn gd_membership(ball: &GroupBall, w: ElementId, g_set: GenSet, d_set: GenSet) -> bool {
    ball.support(coset_min_right(ball, w, d_set)).is_subset(g_set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Bond, CoxeterMatrix, GroupBall, Word};
    use crate::matchings::{extend_maximal, DihedralMatching, MatchingFamily};

    fn named(rows: &[Vec<u32>], names: &[&str]) -> CoxeterMatrix {
        CoxeterMatrix::with_names(rows, names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn a3() -> CoxeterMatrix {
        named(&[vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]], &["a", "b", "c"])
    }

    fn id_for(ball: &GroupBall, text: &str) -> ElementId {
        let w = Word::parse(ball.matrix(), text).unwrap();
        ball.locate(&w).unwrap().expect("element in ball")
    }

    #[test]
    fn right_multiplication_is_left_regular_everywhere() {
        let matrix = a3();
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        let family = MatchingFamily::right_mult(&matrix, Generator(0), 6).unwrap();
        let pm = extend_maximal(&family, &ball).unwrap();
        for s in matrix.generators() {
            assert!(pm.is_regular(s, Side::Left), "left mult always commutes");
            // on the right, x·s·a = x·a·s needs s to commute with the base
            let expected =
                s == Generator(0) || matrix.bond(s, Generator(0)) == Bond::Finite(2);
            assert_eq!(pm.is_regular(s, Side::Right), expected, "generator {s:?}");
        }
    }

    #[test]
    fn table_criterion_agrees_with_direct_regularity_on_dihedral_groups() {
        let matrix = named(&[vec![1, 4], vec![4, 1]], &["a", "s"]);
        let ball = GroupBall::build(matrix.clone(), 4).unwrap();
        for table in
            crate::matchings::enumerate_dihedral_matchings(&matrix, Generator(0), Generator(1), 4)
                .unwrap()
        {
            let family = MatchingFamily::new(Generator(0), vec![table.clone()]).unwrap();
            let pm = extend_maximal(&family, &ball).unwrap();
            for x in matrix.generators() {
                assert_eq!(pm.is_regular(x, Side::Left), table.left_regular_for(x));
                assert_eq!(pm.is_regular(x, Side::Right), table.right_regular_for(x));
            }
        }
    }

    #[test]
    fn orbits_partition_the_domain() {
        let matrix = a3();
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        let family = MatchingFamily::right_mult(&matrix, Generator(0), 6).unwrap();
        let pm = extend_maximal(&family, &ball).unwrap();
        let orbits = pm.orbits();
        assert_eq!(orbits.len() * 2, pm.domain().len());
        assert_eq!(orbits[0].bottom, ball.identity());
        for orbit in &orbits {
            assert_eq!(ball.len(orbit.top), ball.len(orbit.bottom) + 1);
        }
    }

    #[test]
    fn multiplication_matchings_are_reducible_and_full() {
        let matrix = a3();
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        let family = MatchingFamily::right_mult(&matrix, Generator(0), 6).unwrap();
        let pm = extend_maximal(&family, &ball).unwrap();
        assert!(pm.is_full_matching().unwrap(), "the longest element is matched");
        let verdict = pm.is_reducible().unwrap();
        assert!(verdict.reducible);
        assert!(!verdict.full_orbits.is_empty());
        assert!(verdict.full_orbits.iter().all(|o| o.witness.is_some()));
        // the longest element sits in some orbit's top position
        let w0 = ball.layer(6)[0];
        assert!(verdict.full_orbits.iter().any(|o| o.top == w0));
    }

    #[test]
    fn rank_two_matchings_are_reducible_by_convention() {
        let matrix = named(&[vec![1, 0], vec![0, 1]], &["a", "s"]);
        let ball = GroupBall::build(matrix.clone(), 4).unwrap();
        let family = MatchingFamily::enumerate(&matrix, Generator(0), 4)
            .unwrap()
            .remove(5);
        let pm = extend_maximal(&family, &ball).unwrap();
        let verdict = pm.is_reducible().unwrap();
        assert!(verdict.reducible);
        assert!(verdict.full_orbits.is_empty());
        assert!(!pm.is_full_matching().unwrap(), "infinite bond has no full element");
    }

    #[test]
    fn classification_sorts_atoms_by_their_image() {
        let matrix = named(
            &[vec![1, 3, 3, 2], vec![3, 1, 2, 2], vec![3, 2, 1, 2], vec![2, 2, 2, 1]],
            &["a", "b", "c", "d"],
        );
        let (a, b, c, d) = (Generator(0), Generator(1), Generator(2), Generator(3));
        let ball = GroupBall::build(matrix.clone(), 4).unwrap();

        let rho = MatchingFamily::right_mult(&matrix, a, 4).unwrap();
        let cls = extend_maximal(&rho, &ball).unwrap().classify_cross();
        assert_eq!(cls.commuting, GenSet::single(d));
        assert_eq!(cls.u_set, GenSet::pair(b, c));
        assert_eq!(cls.v_set, GenSet::EMPTY);
        assert!(cls.is_right_type() && !cls.crossed());
        assert_eq!(cls.g_set, matrix.generator_set());
        assert_eq!(cls.d_set, GenSet::pair(a, d));

        let lam = MatchingFamily::left_mult(&matrix, a, 4).unwrap();
        let cls = extend_maximal(&lam, &ball).unwrap().classify_cross();
        assert!(cls.is_left_type() && !cls.crossed());
        assert_eq!(cls.v_set, GenSet::pair(b, c));

        // mixed directions: φ(b) = ba but φ(c) = ac
        let beta = DihedralMatching::from_choices(a, b, Bond::Finite(3), 3, vec![b, a]).unwrap();
        let gamma = DihedralMatching::left_mult(a, c, Bond::Finite(3), 3).unwrap();
        let delta = DihedralMatching::left_mult(a, d, Bond::Finite(2), 2).unwrap();
        let family = MatchingFamily::new(a, vec![beta, gamma, delta]).unwrap();
        let cls = extend_maximal(&family, &ball).unwrap().classify_cross();
        assert!(cls.crossed());
        assert_eq!(cls.u_set, GenSet::single(b));
        assert_eq!(cls.v_set, GenSet::single(c));
        let (tied, free) = cls.split_commuting(&matrix, b);
        assert_eq!((tied, free), (GenSet::EMPTY, GenSet::single(d)));
    }

    #[test]
    fn coset_minima_match_brute_force_products() {
        let matrix = a3();
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        let g_set = GenSet::pair(Generator(0), Generator(1));
        let d_set = GenSet::pair(Generator(0), Generator(2));
        // brute force: every product of a ⟨G⟩ element and a ⟨D⟩ element
        let over = |j: GenSet| -> Vec<ElementId> {
            ball.ids().filter(|&w| ball.support(w).is_subset(j)).collect()
        };
        let mut product = vec![false; ball.size()];
        for &g in &over(g_set) {
            for &d in &over(d_set) {
                let joined = ball.element(g).word().concat(ball.element(d).word());
                let w = crate::coxeter::reduce(&matrix, &joined).unwrap();
                if let Some(id) = ball.id_of(&w) {
                    product[id.index()] = true;
                }
            }
        }
        for w in ball.ids() {
            assert_eq!(
                gd_membership(&ball, w, g_set, d_set),
                product[w.index()],
                "disagreement at {}",
                ball.display(w)
            );
        }
        // spot checks: the stripped representative is minimal and coherent
        let w = id_for(&ball, "c.a.b");
        let r = coset_min_right(&ball, w, d_set);
        assert!(ball.leq(r, w));
        assert!(ball
            .descents(r, Side::Right)
            .intersection(d_set)
            .is_empty());
        let l = coset_min_left(&ball, w, g_set);
        assert!(ball
            .descents(l, Side::Left)
            .intersection(g_set)
            .is_empty());
    }
}

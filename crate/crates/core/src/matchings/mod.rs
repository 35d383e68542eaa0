//! Special matchings of Bruhat balls.
//!
//! A special matching pairs each element with a Hasse-diagram neighbor so
//! that covers are preserved: whenever u ⋖ φ(u), the coatoms of φ(u) are
//! exactly u together with the images of the raised coatoms of u. Left and
//! right multiplication by a generator are the fundamental examples, and the
//! machinery here measures how far an arbitrary matching can stray from
//! them: enumeration of the dihedral building blocks ([`dihedral`]),
//! the unique extension of a family of blocks to a whole ball ([`extend`]),
//! regularity, reducibility, fullness and factorization analysis
//! ([`analysis`]), and the rank-3 obstruction catalogue ([`rank3`]).
//!
//! [`dihedral`]: enumerate_dihedral_matchings
//! [`extend`]: extend_maximal
//! [`analysis`]: PartialMatching::is_regular
//! [`rank3`]: predict_obstructions

mod analysis;
mod dihedral;
mod extend;
mod rank3;

use std::fmt;

use serde_json::{json, Value};

use crate::coxeter::{ElementId, Generator, GroupBall};
use crate::poset::LowerSet;
use crate::{Error, Result};

pub use analysis::{
    coset_min_left, coset_min_right, gd_membership, CrossClassification, Orbit, OrbitAssessment,
    Reducibility,
};
pub use dihedral::{
    enumerate_dihedral_matchings, DiElt, DihedralMatching, MatchingFamily,
};
pub use extend::{extend_maximal, restrict_to_principal};
pub use rank3::{
    detect_obstructions, gamma_elements, predict_obstructions, Prediction, Rank3Roles,
    ScenarioKind,
};

/// Where an element stands relative to a computed matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchStatus {
    /// In the domain, with a definite partner.
    Matched,
    /// Certainly outside the domain of any matching extending the family.
    Excluded,
    /// Membership cannot be decided inside this ball.
    Unresolved,
}

/// A maximal matching computed on a ball: the unique extension of a family
/// of dihedral tables, together with per-element verdicts. The domain is the
/// matched part and is downward closed; exclusions are intrinsic (no
/// candidate cover exists), and the only elements whose membership the ball
/// cannot settle sit at the very edge.
pub struct PartialMatching<'a> {
    ball: &'a GroupBall,
    base: Generator,
    partner: Vec<Option<ElementId>>,
    status: Vec<MatchStatus>,
    domain: LowerSet,
    excluded: Vec<ElementId>,
    unresolved: Vec<ElementId>,
    reliable_bound: u32,
}

impl<'a> PartialMatching<'a> {
    pub(crate) fn new(
        ball: &'a GroupBall,
        base: Generator,
        partner: Vec<Option<ElementId>>,
        status: Vec<MatchStatus>,
        domain: LowerSet,
        excluded: Vec<ElementId>,
        unresolved: Vec<ElementId>,
        reliable_bound: u32,
    ) -> PartialMatching<'a> {
        PartialMatching {
            ball,
            base,
            partner,
            status,
            domain,
            excluded,
            unresolved,
            reliable_bound,
        }
    }

    pub fn ball(&self) -> &'a GroupBall {
        self.ball
    }

    /// The image of the identity.
    pub fn base(&self) -> Generator {
        self.base
    }

    /// Lengths strictly below this are fully resolved: matched or excluded
    /// with certainty, never unresolved.
    pub fn reliable_bound(&self) -> u32 {
        self.reliable_bound
    }

    pub fn status(&self, w: ElementId) -> MatchStatus {
        self.status[w.index()]
    }

    /// The partner of `w`, if `w` is in the domain.
    pub fn image(&self, w: ElementId) -> Option<ElementId> {
        self.partner[w.index()]
    }

    pub fn in_domain(&self, w: ElementId) -> bool {
        self.status[w.index()] == MatchStatus::Matched
    }

    /// The matched part of the ball, always a lower set.
    pub fn domain(&self) -> &LowerSet {
        &self.domain
    }

    /// Elements certainly outside the domain, ascending.
    pub fn excluded(&self) -> &[ElementId] {
        &self.excluded
    }

    /// Elements the ball cannot settle, ascending.
    pub fn unresolved(&self) -> &[ElementId] {
        &self.unresolved
    }

    /// Whether `w` is matched upward.
    pub fn raised(&self, w: ElementId) -> bool {
        match self.partner[w.index()] {
            Some(v) => self.ball.len(v) > self.ball.len(w),
            None => false,
        }
    }

    /// All matched pairs (u, φ(u)) with u ⋖ φ(u), ascending by lower id.
    pub fn pairs(&self) -> Vec<(ElementId, ElementId)> {
        self.ball
            .ids()
            .filter(|&u| self.raised(u))
            .map(|u| (u, self.partner[u.index()].unwrap()))
            .collect()
    }

    /// Z(φ, u): u together with the images of its raised coatoms — the
    /// coatom set any upward match of u must have.
    pub fn z_set(&self, u: ElementId) -> Result<Vec<ElementId>> {
        let mut out = vec![u];
        for &v in self.ball.coatoms(u) {
            match self.partner[v.index()] {
                None => return Err(Error::UnresolvedCoatom(self.ball.display(v))),
                Some(w) if self.ball.len(w) > self.ball.len(v) => out.push(w),
                Some(_) => {}
            }
        }
        out.sort_by_key(|id| id.0);
        out.dedup();
        Ok(out)
    }

    /// Re-checks the matching definition on the computed pairs.
    pub fn validate(&self) -> std::result::Result<(), MatchingViolation> {
        is_special_matching(self.ball, &self.pairs(), &self.domain)
    }

    /// JSON report: the family, the verdict lists, and every matched pair,
    /// all as canonical words.
    pub fn to_json(&self) -> Result<Value> {
        let matrix = self.ball.matrix();
        let family = restrict_to_principal(self)?;
        let family_pairs: serde_json::Map<String, Value> = family
            .members()
            .iter()
            .map(|t| {
                let pairs: Vec<Value> = t
                    .pairs()
                    .into_iter()
                    .map(|(lo, hi)| {
                        let lo = t.element(matrix, lo).expect("table element");
                        let hi = t.element(matrix, hi).expect("table element");
                        json!([lo.display(matrix), hi.display(matrix)])
                    })
                    .collect();
                (matrix.name(t.other()).to_string(), Value::Array(pairs))
            })
            .collect();
        let words = |ids: &[ElementId]| -> Vec<String> {
            ids.iter().map(|&id| self.ball.display(id)).collect()
        };
        let pairs: Vec<Value> = self
            .pairs()
            .into_iter()
            .map(|(u, v)| json!([self.ball.display(u), self.ball.display(v)]))
            .collect();
        Ok(json!({
            "base": matrix.name(self.base),
            "family": family_pairs,
            "family_choices": family.to_json(matrix)["choices"],
            "domain_bound": self.ball.bound(),
            "reliable_bound": self.reliable_bound,
            "pairs": pairs,
            "excluded": words(&self.excluded),
            "unresolved": words(&self.unresolved),
        }))
    }
}

/// The clause of the matching definition a candidate map violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MatchingClause {
    /// The pairing is not an involution defined exactly on the carrier.
    Involution,
    /// A pair is not a cover relation.
    Cover,
    /// For some raised u, the coatoms of φ(u) differ from Z(φ, u).
    CoatomSet,
}

impl fmt::Display for MatchingClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            MatchingClause::Involution => "not an involution on the carrier",
            MatchingClause::Cover => "pair is not a cover relation",
            MatchingClause::CoatomSet => "coatoms of the image differ from the Z-set",
        };
        f.write_str(text)
    }
}

/// The least-length offence found by [`is_special_matching`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingViolation {
    pub element: ElementId,
    pub clause: MatchingClause,
}

/// Checks the special-matching definition for a candidate pairing given as
/// raised pairs (u, φ(u)), which must carve the carrier into partners
/// exactly. On failure reports the least-length violating element and the
/// clause it breaks: the pairing must be an involution on the carrier, move
/// every element along a cover, and give each raised u an image whose
/// coatoms are exactly Z(φ, u).
pub fn is_special_matching(
    ball: &GroupBall,
    pairs: &[(ElementId, ElementId)],
    over: &LowerSet,
) -> std::result::Result<(), MatchingViolation> {
    let mut defects: Vec<MatchingViolation> = Vec::new();
    let defect = |defects: &mut Vec<MatchingViolation>, element: ElementId, clause| {
        defects.push(MatchingViolation { element, clause });
    };
    let mut partner: Vec<Option<ElementId>> = vec![None; ball.size()];
    for &(x, y) in pairs {
        for (u, v) in [(x, y), (y, x)] {
            if !over.contains(u) {
                defect(&mut defects, u, MatchingClause::Involution);
            }
            match partner[u.index()] {
                Some(old) if old != v => defect(&mut defects, u, MatchingClause::Involution),
                _ => partner[u.index()] = Some(v),
            }
        }
    }
    for u in over.members() {
        match partner[u.index()] {
            None => defect(&mut defects, u, MatchingClause::Involution),
            Some(v) => {
                let (lo, hi) = if ball.len(u) <= ball.len(v) { (u, v) } else { (v, u) };
                if ball.len(hi) != ball.len(lo) + 1 || !ball.coatoms(hi).contains(&lo) {
                    defect(&mut defects, lo, MatchingClause::Cover);
                }
            }
        }
    }
    // clause (iii) only makes sense on pairs that survived (i) and (ii)
    if defects.is_empty() {
        for u in over.members() {
            let v = partner[u.index()].expect("checked above");
            if ball.len(v) != ball.len(u) + 1 {
                continue;
            }
            let mut z = vec![u];
            for &c in ball.coatoms(u) {
                match partner[c.index()] {
                    Some(img) if ball.len(img) > ball.len(c) => z.push(img),
                    _ => {}
                }
            }
            z.sort_by_key(|id| id.0);
            z.dedup();
            let mut coat = ball.coatoms(v).to_vec();
            coat.sort_by_key(|id| id.0);
            if z != coat {
                defect(&mut defects, u, MatchingClause::CoatomSet);
            }
        }
    }
    match defects
        .into_iter()
        .min_by_key(|d| (ball.len(d.element), d.element.0, d.clause))
    {
        None => Ok(()),
        Some(d) => Err(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterMatrix, Side};
    use crate::poset::lower_closure;

    fn rho_pairs(ball: &GroupBall, a: Generator) -> Vec<(ElementId, ElementId)> {
        ball.ids()
            .filter_map(|w| match ball.mult(w, a, Side::Right) {
                crate::coxeter::Mult::Up(v) => Some((w, v)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn multiplication_is_a_special_matching() {
        let matrix = CoxeterMatrix::with_names(
            &[vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let ball = GroupBall::build(matrix, 6).unwrap();
        assert!(ball.closed());
        let all = lower_closure(&ball, &ball.layer(6).to_vec());
        let pairs = rho_pairs(&ball, Generator(0));
        assert_eq!(is_special_matching(&ball, &pairs, &all), Ok(()));
    }

    #[test]
    fn tampered_pairings_report_the_offending_clause() {
        let matrix = CoxeterMatrix::with_names(
            &[vec![1, 3], vec![3, 1]],
            vec!["a".into(), "s".into()],
        )
        .unwrap();
        let ball = GroupBall::build(matrix, 3).unwrap();
        let all = lower_closure(&ball, &ball.layer(3).to_vec());
        let good = rho_pairs(&ball, Generator(0));
        assert_eq!(is_special_matching(&ball, &good, &all), Ok(()));

        // pair e with a non-atom: not a cover
        let mut broken = good.clone();
        let e = ball.identity();
        let far = ball.layer(2)[0];
        broken[0] = (e, far);
        let report = is_special_matching(&ball, &broken, &all).unwrap_err();
        assert_eq!(report.clause, MatchingClause::Cover);
        assert_eq!(report.element, e);

        // drop a pair: the involution is no longer defined everywhere
        let shorter = &good[..good.len() - 1];
        let report = is_special_matching(&ball, shorter, &all).unwrap_err();
        assert_eq!(report.clause, MatchingClause::Involution);

        // a cover-respecting involution that still fails the coatom clause:
        // on the crown ac, bc ⋖ abc, bac the pairing below sends c to bc,
        // but Z(φ, c) = {c, φ(e)} = {c, a} while coat(bc) = {b, c}
        let matrix3 = CoxeterMatrix::with_names(
            &[vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let ball3 = GroupBall::build(matrix3.clone(), 6).unwrap();
        let id_for = |text: &str| {
            let w = crate::coxeter::Word::parse(&matrix3, text).unwrap();
            ball3.locate(&w).unwrap().unwrap()
        };
        let carrier = lower_closure(&ball3, &[id_for("a.b.c"), id_for("b.a.c")]);
        assert_eq!(carrier.len(), 10);
        let pairing = vec![
            (id_for("e"), id_for("a")),
            (id_for("b"), id_for("a.b")),
            (id_for("c"), id_for("b.c")),
            (id_for("b.a"), id_for("b.a.c")),
            (id_for("a.c"), id_for("a.b.c")),
        ];
        let report = is_special_matching(&ball3, &pairing, &carrier).unwrap_err();
        assert_eq!(report.clause, MatchingClause::CoatomSet);
        assert_eq!(report.element, id_for("c"));
    }
}

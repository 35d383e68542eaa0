//! Where a rank-3 matching first fails, predicted from its dihedral tables.
//!
//! For generators a, b, b′ with base a, the catalogue below locates elements
//! that cannot belong to the domain of any matching extending the given
//! family, reading only the two tables and the three bond orders. Every
//! scenario has a hypothesis — which table entries deviate from plain
//! multiplication and which bond orders leave room for them — and a
//! conclusion: a single excluded element, a pair, or a whole level. The
//! names describe the configuration: `General*` assumes nothing about
//! m(b,b′); `Crossed*` has the two tables deviating on opposite sides of the
//! base; `NonCrossed*` has both deviating on the same side; `Degenerate*`
//! has m(a,b′) = 2. Predictions are detected, never guessed: when a
//! hypothesis does not hold the scenario reports itself as not covered.

use crate::coxeter::{Bond, ElementId, Generator, GroupBall, Mult, Side, Word};
use crate::{Error, Result};

use super::dihedral::{DiElt, DihedralMatching, MatchingFamily};

/// Which generator plays which part in a rank-3 analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rank3Roles {
    pub base: Generator,
    pub b: Generator,
    pub b_prime: Generator,
}

impl Rank3Roles {
    /// The two ways of casting the non-base generators as (b, b′).
    pub fn assignments(ball: &GroupBall, base: Generator) -> Result<[Rank3Roles; 2]> {
        if ball.rank() != 3 {
            return Err(Error::Input(format!(
                "rank-3 analysis on a rank-{} matrix",
                ball.rank()
            )));
        }
        let mut rest = ball.matrix().generators().filter(|&s| s != base);
        let (s1, s2) = match (rest.next(), rest.next()) {
            (Some(s1), Some(s2)) => (s1, s2),
            _ => return Err(Error::Input("base is not a generator of the matrix".into())),
        };
        Ok([
            Rank3Roles { base, b: s1, b_prime: s2 },
            Rank3Roles { base, b: s2, b_prime: s1 },
        ])
    }
}

/// The hypothesis shapes under which an obstruction is known in advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// The b′ table is right multiplication up to length 3 and the b table
    /// is not base-regular on the left; needs m(a,b′) ≥ 3. Excludes
    /// ab′·[b,a,t⟩ at the regularity deviation t.
    BaseIrregular,
    /// The b′ table starts as right multiplication and the b table is not
    /// b-regular on the left; needs m(b,b′) ≥ 3. Excludes bb′·[a,b,t⟩.
    SideIrregular,
    /// Crossed (φ(b) = ab, φ(b′) = b′a, m(b,b′) = 2, finite bonds) with
    /// φ(ab′) = ab′a and the b table not base-regular on the left.
    /// Excludes ab′·[b,a,t⟩.
    CrossedBaseIrregular,
    /// Crossed with the b′ table leaving right multiplication at ab′
    /// (image b′ab′) and continuing up that chain (φ(ab′a) = b′ab′a);
    /// needs m(a,b′) ≥ 4 and a b table other than left multiplication.
    /// Excludes ab′·[b,a,t⟩ at the left-multiplication deviation t.
    CrossedPrimeDeviation,
    /// Crossed with the b′ table leaving right multiplication at ab′ and
    /// folding back (φ(ab′a) = ab′ab′); needs m(a,b′) ≥ 5. Excludes ab′ba.
    CrossedPrimeReturn,
    /// Crossed with both tables regular but neither equal to its
    /// multiplication map: the two deviations t and t′ bound the excluded
    /// element ⟨t′,a,b′]·[b,a,t⟩.
    CrossedTwoSided,
    /// Non-crossed (φ(b) = ba, φ(b′) = b′a, bonds to the base ≥ 3) with the
    /// b table deviating from right multiplication at t and φ(ab′) = ab′a.
    /// Excludes every element of length t+1 above both b′ and ⟨t,a,b]
    /// except b′⟨t,a,b] itself.
    NonCrossedLevel,
    /// Non-crossed with the b table deviating and φ(ab′) ≠ ab′a. Excludes
    /// abb′ and ab′b.
    NonCrossedPair,
    /// Degenerate (m(a,b′) = 2, m(b,b′) ≥ 3) with the b table deviating
    /// from right multiplication at t ≥ 2. Excludes every element of length
    /// t+1 above both b′ and ⟨t,a,b] except b′⟨t,a,b] and ⟨t,a,b]b′.
    DegenerateLevel,
    /// Degenerate with m(b,b′) ≥ 4, φ(ab) = bab and m(a,b) ≥ 4. Excludes
    /// abb′b.
    DegenerateQuartic,
    /// Degenerate with m(b,b′) = 3, φ(ab) = bab and m(a,b) ≥ 4. Excludes
    /// abb′ab.
    DegenerateCubic,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 11] = [
        ScenarioKind::BaseIrregular,
        ScenarioKind::SideIrregular,
        ScenarioKind::CrossedBaseIrregular,
        ScenarioKind::CrossedPrimeDeviation,
        ScenarioKind::CrossedPrimeReturn,
        ScenarioKind::CrossedTwoSided,
        ScenarioKind::NonCrossedLevel,
        ScenarioKind::NonCrossedPair,
        ScenarioKind::DegenerateLevel,
        ScenarioKind::DegenerateQuartic,
        ScenarioKind::DegenerateCubic,
    ];
}

/// A certified obstruction: under the scenario's hypothesis, every listed
/// element lies outside the domain of every matching extending the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub kind: ScenarioKind,
    pub roles: Rank3Roles,
    /// Excluded elements, ascending by id; never empty.
    pub excluded: Vec<ElementId>,
    /// The deviation level t of the b table, when the scenario uses one.
    pub deviation: Option<u32>,
    /// The deviation level t′ of the b′ table, when the scenario uses one.
    pub prime_deviation: Option<u32>,
}

struct Tables<'f> {
    beta: &'f DihedralMatching,
    beta_p: &'f DihedralMatching,
    m_ab: Bond,
    m_abp: Bond,
    m_bbp: Bond,
}

fn tables<'f>(
    ball: &GroupBall,
    family: &'f MatchingFamily,
    roles: Rank3Roles,
) -> Result<Tables<'f>> {
    let matrix = ball.matrix();
    if family.base() != roles.base {
        return Err(Error::Input("family base disagrees with the cast roles".into()));
    }
    let member = |s: Generator| -> Result<&'f DihedralMatching> {
        let t = family.member(s).ok_or_else(|| {
            Error::Input(format!("family has no table for generator `{}`", matrix.name(s)))
        })?;
        if t.bond() != matrix.bond(roles.base, s) {
            return Err(Error::Input(format!(
                "table for `{}` was built for bond {}, the matrix has {}",
                matrix.name(s),
                t.bond(),
                matrix.bond(roles.base, s)
            )));
        }
        Ok(t)
    };
    Ok(Tables {
        beta: member(roles.b)?,
        beta_p: member(roles.b_prime)?,
        m_ab: matrix.bond(roles.base, roles.b),
        m_abp: matrix.bond(roles.base, roles.b_prime),
        m_bbp: matrix.bond(roles.b, roles.b_prime),
    })
}

/// Whether the table provably sends `from` to `to` (false when `from` lies
/// past a truncated table's knowledge).
fn maps(t: &DihedralMatching, from: DiElt, to: DiElt) -> bool {
    from.len <= t.bound() && t.apply(from) == Some(t.normalize(to))
}

fn at_least(bond: Bond, k: u32) -> bool {
    match bond {
        Bond::Infinite => true,
        Bond::Finite(m) => m >= k,
    }
}

/// The alternating letters of length `n` starting with `first`.
fn alt_from(first: Generator, second: Generator, n: u32) -> Vec<Generator> {
    (0..n).map(|i| if i % 2 == 0 { first } else { second }).collect()
}

/// The alternating letters of length `n` ending with `last`.
fn alt_to(last: Generator, second: Generator, n: u32) -> Vec<Generator> {
    (0..n)
        .map(|i| if (n - 1 - i) % 2 == 0 { last } else { second })
        .collect()
}

fn locate_reduced(ball: &GroupBall, letters: Vec<Generator>) -> Result<ElementId> {
    let n = letters.len();
    let word = Word::new(letters);
    let id = ball.locate(&word)?.ok_or_else(|| {
        Error::BallTooSmall(format!(
            "predicted element `{}` lies beyond the ball bound {}",
            word.display(ball.matrix()),
            ball.bound()
        ))
    })?;
    assert_eq!(ball.len(id), n, "predicted words are reduced");
    Ok(id)
}

/// The two longest elements of the parabolic product ⟨a,b′⟩⟨a,b⟩: the
/// concatenation of the longest b′-coset word ending in b′ with the longest
/// b-coset word starting in b, without and with an extra base letter in
/// between. These exist (and are the only candidates for full elements of
/// the product) exactly when b and b′ commute and both bonds to the base
/// are finite.
pub fn gamma_elements(ball: &GroupBall, roles: Rank3Roles) -> Result<(ElementId, ElementId)> {
    let matrix = ball.matrix();
    let Rank3Roles { base, b, b_prime } = roles;
    if matrix.bond(b, b_prime) != Bond::Finite(2) {
        return Err(Error::ScenarioNotCovered(
            "the two extremal product elements exist only when b and b' commute".into(),
        ));
    }
    let (m, m_p) = match (matrix.bond(base, b).finite(), matrix.bond(base, b_prime).finite()) {
        (Some(m), Some(m_p)) => (m, m_p),
        _ => {
            return Err(Error::ScenarioNotCovered(
                "the extremal product elements need finite bonds to the base".into(),
            ))
        }
    };
    let head = alt_to(b_prime, base, m_p - 1);
    let tail = alt_from(b, base, m - 1);
    let plain = [head.clone(), tail.clone()].concat();
    let pinched = [head, vec![base], tail].concat();
    Ok((locate_reduced(ball, plain)?, locate_reduced(ball, pinched)?))
}

/// Finds the minimal level t in `lo..` where `beta` raises the alternating
/// element starting with `first_low` into its own chain and raises the
/// opposite-start element of the next level back across; this is the
/// regularity deviation shape. The scan is capped by the table's reach and
/// by the bond order minus 3.
fn regularity_deviation(beta: &DihedralMatching, first_low: Generator, lo: u32) -> Option<u32> {
    let other_first = if first_low == beta.base() { beta.other() } else { beta.base() };
    let mut hi = beta.bound().saturating_sub(1);
    if let Some(m) = beta.bond().finite() {
        hi = hi.min(m.saturating_sub(3));
    }
    (lo..=hi).find(|&t| {
        maps(beta, DiElt::new(t, first_low), DiElt::new(t + 1, first_low))
            && maps(beta, DiElt::new(t + 1, other_first), DiElt::new(t + 2, first_low))
    })
}

/// Elements of length t+1 lying above both `b_prime` and the chain element
/// ⟨t,a,b], minus the listed exceptions.
fn level_above_both(
    ball: &GroupBall,
    roles: Rank3Roles,
    t: u32,
    exceptions: &[ElementId],
) -> Result<Vec<ElementId>> {
    if t + 1 > ball.bound() {
        return Err(Error::BallTooSmall(format!(
            "obstruction level {} lies beyond the ball bound {}",
            t + 1,
            ball.bound()
        )));
    }
    let chain = locate_reduced(ball, alt_to(roles.b, roles.base, t))?;
    let bp = ball
        .mult(ball.identity(), roles.b_prime, Side::Right)
        .id()
        .expect("atom in ball");
    let level: Vec<ElementId> = ball
        .layer(t as usize + 1)
        .iter()
        .copied()
        .filter(|&w| ball.leq(bp, w) && ball.leq(chain, w) && !exceptions.contains(&w))
        .collect();
    Ok(level)
}

/// The neighbor of `id` under multiplication by `s`; the product must stay
/// in the ball.
fn shift(ball: &GroupBall, id: ElementId, s: Generator, side: Side) -> Result<ElementId> {
    match ball.mult(id, s, side) {
        Mult::Up(v) | Mult::Down(v) => Ok(v),
        Mult::OutOfBall => Err(Error::BallTooSmall(format!(
            "neighbor of `{}` lies beyond the ball bound",
            ball.display(id)
        ))),
    }
}

/// Tests one scenario's hypothesis against the family and, when it holds,
/// returns the elements it certifies as excluded. A failed hypothesis is a
/// `ScenarioNotCovered` error naming the missing condition; a ball too
/// small to carry the conclusion is reported as such.
pub fn predict_obstructions(
    ball: &GroupBall,
    family: &MatchingFamily,
    roles: Rank3Roles,
    kind: ScenarioKind,
) -> Result<Prediction> {
    if ball.rank() != 3 {
        return Err(Error::Input(format!(
            "rank-3 analysis on a rank-{} matrix",
            ball.rank()
        )));
    }
    let t = tables(ball, family, roles)?;
    let Rank3Roles { base: a, b, b_prime: bp } = roles;
    let fail = |msg: &str| Error::ScenarioNotCovered(format!("{kind:?}: {msg}"));
    let done = |excluded: Vec<ElementId>, dev: Option<u32>, prime: Option<u32>| {
        debug_assert!(!excluded.is_empty());
        let mut excluded = excluded;
        excluded.sort_by_key(|id| id.0);
        excluded.dedup();
        Ok(Prediction { kind, roles, excluded, deviation: dev, prime_deviation: prime })
    };

    // shorthands for the table entries the hypotheses read
    let beta_maps = |l1, f1, l2, f2| maps(t.beta, DiElt::new(l1, f1), DiElt::new(l2, f2));
    let prime_maps = |l1, f1, l2, f2| maps(t.beta_p, DiElt::new(l1, f1), DiElt::new(l2, f2));
    // the crossed setting: deviations point through the base in both tables
    let crossed = || -> std::result::Result<(), Error> {
        if !at_least(t.m_ab, 3) || !at_least(t.m_abp, 3) {
            return Err(fail("both bonds to the base must be at least 3"));
        }
        if t.m_bbp != Bond::Finite(2) {
            return Err(fail("b and b' must commute"));
        }
        if t.m_ab.finite().is_none() || t.m_abp.finite().is_none() {
            return Err(fail("both bonds to the base must be finite"));
        }
        if !beta_maps(1, b, 2, a) {
            return Err(fail("the b table must send b to ab"));
        }
        if !prime_maps(1, bp, 2, bp) {
            return Err(fail("the b' table must send b' to b'a"));
        }
        Ok(())
    };

    match kind {
        ScenarioKind::BaseIrregular => {
            if !at_least(t.m_abp, 3) {
                return Err(fail("m(a,b') must be at least 3"));
            }
            if !prime_maps(1, bp, 2, bp) || !prime_maps(2, a, 3, a) {
                return Err(fail("the b' table must be right multiplication up to ab'a"));
            }
            let dev = regularity_deviation(t.beta, b, 1)
                .ok_or_else(|| fail("the b table is base-regular on the left"))?;
            let w = [vec![a, bp], alt_from(b, a, dev)].concat();
            done(vec![locate_reduced(ball, w)?], Some(dev), None)
        }
        ScenarioKind::SideIrregular => {
            if !at_least(t.m_bbp, 3) {
                return Err(fail("m(b,b') must be at least 3"));
            }
            if !prime_maps(1, bp, 2, bp) {
                return Err(fail("the b' table must send b' to b'a"));
            }
            if !beta_maps(1, b, 2, b) {
                return Err(fail("the b table must send b to ba"));
            }
            let dev = regularity_deviation(t.beta, a, 2)
                .ok_or_else(|| fail("the b table is b-regular on the left"))?;
            let w = [vec![b, bp], alt_from(a, b, dev)].concat();
            done(vec![locate_reduced(ball, w)?], Some(dev), None)
        }
        ScenarioKind::CrossedBaseIrregular => {
            crossed()?;
            if !prime_maps(2, a, 3, a) {
                return Err(fail("the b' table must send ab' to ab'a"));
            }
            let dev = regularity_deviation(t.beta, b, 1)
                .ok_or_else(|| fail("the b table is base-regular on the left"))?;
            let w = [vec![a, bp], alt_from(b, a, dev)].concat();
            done(vec![locate_reduced(ball, w)?], Some(dev), None)
        }
        ScenarioKind::CrossedPrimeDeviation => {
            crossed()?;
            if !at_least(t.m_abp, 4) {
                return Err(fail("m(a,b') must be at least 4"));
            }
            if !prime_maps(2, a, 3, bp) || !prime_maps(3, a, 4, bp) {
                return Err(fail("the b' table must climb b'ab' and b'ab'a"));
            }
            if t.beta.is_left_mult() {
                return Err(fail("the b table equals left multiplication"));
            }
            let dev = t
                .beta
                .left_mult_deviation()
                .ok_or_else(|| fail("no left-multiplication deviation is visible"))?;
            let w = [vec![a, bp], alt_from(b, a, dev)].concat();
            done(vec![locate_reduced(ball, w)?], Some(dev), None)
        }
        ScenarioKind::CrossedPrimeReturn => {
            crossed()?;
            if !at_least(t.m_abp, 5) {
                return Err(fail("m(a,b') must be at least 5"));
            }
            if !prime_maps(2, a, 3, bp) || !prime_maps(3, a, 4, a) {
                return Err(fail("the b' table must step to b'ab' and fold back to ab'ab'"));
            }
            done(vec![locate_reduced(ball, vec![a, bp, b, a])?], None, None)
        }
        ScenarioKind::CrossedTwoSided => {
            crossed()?;
            if !t.beta.left_regular_for(a) {
                return Err(fail("the b table must be base-regular on the left"));
            }
            if !t.beta_p.right_regular_for(a) {
                return Err(fail("the b' table must be base-regular on the right"));
            }
            if t.beta.is_left_mult() {
                return Err(fail("the b table equals left multiplication"));
            }
            if t.beta_p.is_right_mult() {
                return Err(fail("the b' table equals right multiplication"));
            }
            let dev = t
                .beta
                .left_mult_deviation()
                .ok_or_else(|| fail("no left-multiplication deviation is visible"))?;
            let prime = t
                .beta_p
                .right_mult_deviation()
                .ok_or_else(|| fail("no right-multiplication deviation is visible"))?;
            let w = [alt_to(bp, a, prime), alt_from(b, a, dev)].concat();
            done(vec![locate_reduced(ball, w)?], Some(dev), Some(prime))
        }
        ScenarioKind::NonCrossedLevel | ScenarioKind::NonCrossedPair => {
            if !at_least(t.m_ab, 3) || !at_least(t.m_abp, 3) {
                return Err(fail("both bonds to the base must be at least 3"));
            }
            if !beta_maps(1, b, 2, b) || !prime_maps(1, bp, 2, bp) {
                return Err(fail("both tables must move their atom to the right"));
            }
            let dev = t
                .beta
                .right_mult_deviation()
                .ok_or_else(|| fail("the b table never leaves right multiplication"))?;
            let straight = prime_maps(2, a, 3, a);
            if kind == ScenarioKind::NonCrossedLevel {
                if !straight {
                    return Err(fail("the b' table must send ab' to ab'a"));
                }
                let chain = locate_reduced(ball, alt_to(b, a, dev))?;
                let exception = shift(ball, chain, bp, Side::Left)?;
                done(level_above_both(ball, roles, dev, &[exception])?, Some(dev), None)
            } else {
                if straight {
                    return Err(fail("the b' table must not send ab' to ab'a"));
                }
                let first = locate_reduced(ball, vec![a, b, bp])?;
                let second = locate_reduced(ball, vec![a, bp, b])?;
                done(vec![first, second], Some(dev), None)
            }
        }
        ScenarioKind::DegenerateLevel => {
            if t.m_abp != Bond::Finite(2) {
                return Err(fail("b' must commute with the base"));
            }
            if !at_least(t.m_bbp, 3) {
                return Err(fail("m(b,b') must be at least 3"));
            }
            if !beta_maps(1, b, 2, b) {
                return Err(fail("the b table must send b to ba"));
            }
            let dev = t
                .beta
                .right_mult_deviation()
                .ok_or_else(|| fail("the b table never leaves right multiplication"))?;
            debug_assert!(dev >= 2, "level-1 agreement pins the deviation higher");
            let chain = locate_reduced(ball, alt_to(b, a, dev))?;
            let exceptions = [
                shift(ball, chain, bp, Side::Left)?,
                shift(ball, chain, bp, Side::Right)?,
            ];
            let level = level_above_both(ball, roles, dev, &exceptions)?;
            if level.is_empty() {
                return Err(fail("the obstruction level holds exceptions only"));
            }
            done(level, Some(dev), None)
        }
        ScenarioKind::DegenerateQuartic | ScenarioKind::DegenerateCubic => {
            if t.m_abp != Bond::Finite(2) {
                return Err(fail("b' must commute with the base"));
            }
            let wanted_bond = kind == ScenarioKind::DegenerateQuartic;
            if wanted_bond && !at_least(t.m_bbp, 4) {
                return Err(fail("m(b,b') must be at least 4"));
            }
            if !wanted_bond && t.m_bbp != Bond::Finite(3) {
                return Err(fail("m(b,b') must be exactly 3"));
            }
            if !at_least(t.m_ab, 4) {
                return Err(fail("m(a,b) must be at least 4"));
            }
            if !beta_maps(2, a, 3, b) {
                return Err(fail("the b table must send ab to bab"));
            }
            let w = if wanted_bond { vec![a, b, bp, b] } else { vec![a, b, bp, a, b] };
            done(vec![locate_reduced(ball, w)?], Some(2), None)
        }
    }
}

/// Runs every scenario under both role assignments and collects the
/// predictions whose hypotheses hold. Errors other than an unfulfilled
/// hypothesis (a ball too small to carry a conclusion, a malformed family)
/// propagate.
pub fn detect_obstructions(
    ball: &GroupBall,
    family: &MatchingFamily,
) -> Result<Vec<Prediction>> {
    let mut out = Vec::new();
    for roles in Rank3Roles::assignments(ball, family.base())? {
        for kind in ScenarioKind::ALL {
            match predict_obstructions(ball, family, roles, kind) {
                Ok(prediction) => out.push(prediction),
                Err(Error::ScenarioNotCovered(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterMatrix, GenSet};
    use crate::matchings::{extend_maximal, gd_membership, MatchStatus, MatchingFamily};

    fn named(rows: &[Vec<u32>], names: &[&str]) -> CoxeterMatrix {
        CoxeterMatrix::with_names(rows, names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn id_for(ball: &GroupBall, text: &str) -> ElementId {
        let w = Word::parse(ball.matrix(), text).unwrap();
        ball.locate(&w).unwrap().expect("element in ball")
    }

    fn table(
        base: Generator,
        other: Generator,
        m: u32,
        choices: &[Generator],
    ) -> DihedralMatching {
        DihedralMatching::from_choices(base, other, Bond::Finite(m), m, choices.to_vec()).unwrap()
    }

    /// Every predicted element must come out excluded by the actual
    /// extension, with all its coatoms matched (so it is a least failure).
    fn confirm(ball: &GroupBall, family: &MatchingFamily, prediction: &Prediction) {
        let pm = extend_maximal(family, ball).unwrap();
        for &w in &prediction.excluded {
            assert_eq!(pm.status(w), MatchStatus::Excluded, "at {}", ball.display(w));
            for &c in ball.coatoms(w) {
                assert_eq!(pm.status(c), MatchStatus::Matched, "coatom {}", ball.display(c));
            }
        }
    }

    #[test]
    fn irregular_base_table_excludes_a_small_element() {
        // bonds a–b = 5, a–b' = 3, b–b' = 2; the b table raises b to ba but
        // then ab to bab, breaking base regularity at t = 1
        let matrix = named(&[vec![1, 5, 3], vec![5, 1, 2], vec![3, 2, 1]], &["a", "b", "bp"]);
        let (a, b, bp) = (Generator(0), Generator(1), Generator(2));
        let ball = GroupBall::build(matrix.clone(), 5).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 5, &[b, b, a, a]), table(a, bp, 3, &[bp, a])],
        )
        .unwrap();
        let roles = Rank3Roles { base: a, b, b_prime: bp };
        let p = predict_obstructions(&ball, &family, roles, ScenarioKind::BaseIrregular).unwrap();
        assert_eq!(p.deviation, Some(1));
        assert_eq!(p.excluded, vec![id_for(&ball, "a.bp.b")]);
        confirm(&ball, &family, &p);
        let found = detect_obstructions(&ball, &family).unwrap();
        assert!(found.iter().any(|q| q == &p), "detection finds the scenario");
        assert!(found
            .iter()
            .all(|q| q.kind != ScenarioKind::CrossedBaseIrregular));
    }

    #[test]
    fn irregular_side_table_excludes_through_the_third_generator() {
        // bonds a–b = 5, a–b' = 3, b–b' = 3; the b table is b-irregular at
        // t = 2 (ab rises to aba but bab crosses to abab)
        let matrix = named(&[vec![1, 5, 3], vec![5, 1, 3], vec![3, 3, 1]], &["a", "b", "bp"]);
        let (a, b, bp) = (Generator(0), Generator(1), Generator(2));
        let ball = GroupBall::build(matrix.clone(), 5).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 5, &[b, a, a, a]), table(a, bp, 3, &[bp, a])],
        )
        .unwrap();
        let roles = Rank3Roles { base: a, b, b_prime: bp };
        let p = predict_obstructions(&ball, &family, roles, ScenarioKind::SideIrregular).unwrap();
        assert_eq!(p.deviation, Some(2));
        assert_eq!(p.excluded, vec![id_for(&ball, "b.bp.a.b")]);
        confirm(&ball, &family, &p);
    }

    #[test]
    fn crossed_scenarios_cover_their_catalogue() {
        let (a, b, bp) = (Generator(0), Generator(1), Generator(2));

        // fold-back: a–b = 3, a–b' = 5; the b' table climbs b'ab' then
        // returns to ab'ab'
        let matrix = named(&[vec![1, 3, 5], vec![3, 1, 2], vec![5, 2, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(matrix.clone(), 5).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 3, &[a, a]), table(a, bp, 5, &[bp, bp, a, a])],
        )
        .unwrap();
        let roles = Rank3Roles { base: a, b, b_prime: bp };
        let p =
            predict_obstructions(&ball, &family, roles, ScenarioKind::CrossedPrimeReturn).unwrap();
        assert_eq!(p.excluded, vec![id_for(&ball, "a.bp.b.a")]);
        confirm(&ball, &family, &p);

        // deviation that keeps climbing: a–b' = 4 forces φ(ab'a) onto the
        // top, and the b table leaves left multiplication at t = 2
        let matrix = named(&[vec![1, 4, 4], vec![4, 1, 2], vec![4, 2, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 4, &[a, b, a]), table(a, bp, 4, &[bp, bp, a])],
        )
        .unwrap();
        let p = predict_obstructions(&ball, &family, roles, ScenarioKind::CrossedPrimeDeviation)
            .unwrap();
        assert_eq!(p.deviation, Some(2));
        assert_eq!(p.excluded, vec![id_for(&ball, "a.bp.b.a")]);
        confirm(&ball, &family, &p);

        // irregular b table under a right-multiplication b' table
        let matrix = named(&[vec![1, 5, 3], vec![5, 1, 2], vec![3, 2, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 5, &[a, b, b, a]), table(a, bp, 3, &[bp, a])],
        )
        .unwrap();
        let p = predict_obstructions(&ball, &family, roles, ScenarioKind::CrossedBaseIrregular)
            .unwrap();
        assert_eq!(p.deviation, Some(2));
        assert_eq!(p.excluded, vec![id_for(&ball, "a.bp.b.a")]);
        confirm(&ball, &family, &p);

        // both tables regular, neither equal to its multiplication map
        let matrix = named(&[vec![1, 5, 5], vec![5, 1, 2], vec![5, 2, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(matrix.clone(), 7).unwrap();
        let mirror = table(a, bp, 5, &[a, a, bp, a]);
        let beta_p = mirror.reversed();
        assert!(beta_p.right_regular_for(a));
        let family =
            MatchingFamily::new(a, vec![table(a, b, 5, &[a, a, b, a]), beta_p]).unwrap();
        let p =
            predict_obstructions(&ball, &family, roles, ScenarioKind::CrossedTwoSided).unwrap();
        assert_eq!((p.deviation, p.prime_deviation), (Some(3), Some(3)));
        assert_eq!(p.excluded, vec![id_for(&ball, "bp.a.bp.b.a.b")]);
        confirm(&ball, &family, &p);
    }

    #[test]
    fn non_crossed_scenarios_exclude_levels_and_pairs() {
        let (a, b, bp) = (Generator(0), Generator(1), Generator(2));

        // level shape: deviation at t = 2 with a right-multiplication b'
        // table; the level {w : l(w) = 3, w ≥ b', w ≥ ab} minus b'·ab
        let matrix = named(&[vec![1, 4, 3], vec![4, 1, 2], vec![3, 2, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(matrix.clone(), 5).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 4, &[b, b, a]), table(a, bp, 3, &[bp, a])],
        )
        .unwrap();
        let roles = Rank3Roles { base: a, b, b_prime: bp };
        let p =
            predict_obstructions(&ball, &family, roles, ScenarioKind::NonCrossedLevel).unwrap();
        assert_eq!(p.deviation, Some(2));
        assert_eq!(p.excluded, vec![id_for(&ball, "a.b.bp")]);
        confirm(&ball, &family, &p);

        // pair shape: the b' table leaves right multiplication at ab', and
        // commuting b, b' merge the two predictions into one element
        let matrix = named(&[vec![1, 4, 4], vec![4, 1, 2], vec![4, 2, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(matrix.clone(), 5).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 4, &[b, b, a]), table(a, bp, 4, &[bp, bp, a])],
        )
        .unwrap();
        let p =
            predict_obstructions(&ball, &family, roles, ScenarioKind::NonCrossedPair).unwrap();
        assert_eq!(p.excluded, vec![id_for(&ball, "a.b.bp")]);
        assert_eq!(id_for(&ball, "a.b.bp"), id_for(&ball, "a.bp.b"));
        confirm(&ball, &family, &p);
    }

    #[test]
    fn degenerate_scenarios_exclude_levels_and_single_elements() {
        let (a, b, bp) = (Generator(0), Generator(1), Generator(2));

        // level shape needs a deviation at t ≥ 3 to leave room beside the
        // two exceptions
        let matrix = named(&[vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 5, &[b, a, a, a]), table(a, bp, 2, &[a])],
        )
        .unwrap();
        let roles = Rank3Roles { base: a, b, b_prime: bp };
        let p =
            predict_obstructions(&ball, &family, roles, ScenarioKind::DegenerateLevel).unwrap();
        assert_eq!(p.deviation, Some(3));
        assert_eq!(p.excluded, vec![id_for(&ball, "b.bp.a.b")]);
        confirm(&ball, &family, &p);

        // φ(ab) = bab with m(b,b') = 4 and with m(b,b') = 3
        let quartic = named(&[vec![1, 4, 2], vec![4, 1, 4], vec![2, 4, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(quartic.clone(), 5).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 4, &[b, b, a]), table(a, bp, 2, &[a])],
        )
        .unwrap();
        let p =
            predict_obstructions(&ball, &family, roles, ScenarioKind::DegenerateQuartic).unwrap();
        assert_eq!(p.excluded, vec![id_for(&ball, "a.b.bp.b")]);
        confirm(&ball, &family, &p);

        let cubic = named(&[vec![1, 4, 2], vec![4, 1, 3], vec![2, 3, 1]], &["a", "b", "bp"]);
        let ball = GroupBall::build(cubic.clone(), 6).unwrap();
        let family = MatchingFamily::new(
            a,
            vec![table(a, b, 4, &[b, b, a]), table(a, bp, 2, &[a])],
        )
        .unwrap();
        let p =
            predict_obstructions(&ball, &family, roles, ScenarioKind::DegenerateCubic).unwrap();
        assert_eq!(p.excluded, vec![id_for(&ball, "a.b.bp.a.b")]);
        confirm(&ball, &family, &p);
    }

    #[test]
    fn extremal_product_elements_are_the_full_ones() {
        // path b–a–b' with both bonds 3: the product ⟨a,b'⟩⟨a,b⟩ holds
        // exactly two full elements
        let matrix = named(&[vec![1, 3, 3], vec![3, 1, 2], vec![3, 2, 1]], &["a", "b", "bp"]);
        let (a, b, bp) = (Generator(0), Generator(1), Generator(2));
        let ball = GroupBall::build(matrix.clone(), 6).unwrap();
        assert!(ball.closed());
        let roles = Rank3Roles { base: a, b, b_prime: bp };
        let (plain, pinched) = gamma_elements(&ball, roles).unwrap();
        assert_eq!(plain, id_for(&ball, "a.bp.b.a"));
        assert_eq!(pinched, id_for(&ball, "a.bp.a.b.a"));
        let all = matrix.generator_set();
        let g_set = GenSet::pair(a, bp);
        let d_set = GenSet::pair(a, b);
        for w in ball.ids() {
            let product = gd_membership(&ball, w, g_set, d_set);
            let full = ball.is_full(w, all).unwrap();
            assert_eq!(product && full, w == plain || w == pinched, "at {}", ball.display(w));
        }
    }
}

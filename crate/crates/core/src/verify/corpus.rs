//! The groups the verification suites run over, with their ball bounds.
//!
//! The standard corpus covers every rank-2 bond in {2,3,4,5,∞}, every rank-3
//! bond triangle over {2,3,4,5,∞} short of the all-infinite one, and the
//! rank-4 symmetric group as a simply-laced witness. Bounds are chosen so
//! that every check in the suites has room: polynomial checks need a ball
//! past the longest dihedral element, matching checks need the two-sided
//! product elements of each base pair, and the whole-group checks need the
//! full (finite) group.

use serde::{Deserialize, Serialize};

use crate::coxeter::{Bond, CoxeterMatrix};
use crate::{Error, Result};

/// One group in the corpus, with the ball bounds the suites use.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusCase {
    /// Stable display name, unique within the corpus.
    pub name: String,
    pub matrix: CoxeterMatrix,
    /// Ball bound for polynomial checks: past the longest dihedral element.
    pub poly_bound: u32,
    /// Ball bound for matching checks: at least `poly_bound`, and large
    /// enough to settle the extremal product elements of every base pair.
    pub match_bound: u32,
    /// Ball bound that closes the whole group, when it is finite and small
    /// enough to enumerate.
    pub group_bound: Option<u32>,
}

/// An ordered list of corpus cases. Suites run cases independently and
/// report them in corpus order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    pub cases: Vec<CorpusCase>,
}

/// Ball bound used for groups with an infinite bond, where no finite ball
/// closes anything: big enough to exercise truncated tables, small enough to
/// keep the exponential growth in check.
const INFINITE_BOUND: u32 = 5;

impl Corpus {
    /// The default corpus described in the module docs.
    pub fn standard() -> Corpus {
        let mut cases = Vec::new();

        cases.push(CorpusCase {
            name: "A1".into(),
            matrix: CoxeterMatrix::new(&[vec![1]]).expect("valid rank-1 table"),
            poly_bound: 1,
            match_bound: 1,
            group_bound: Some(1),
        });

        for m in [2u32, 3, 4, 5, 6] {
            cases.push(CorpusCase {
                name: format!("dihedral-{m}"),
                matrix: dihedral_matrix(Bond::Finite(m)),
                poly_bound: m + 2,
                match_bound: m + 2,
                group_bound: Some(m),
            });
        }
        cases.push(CorpusCase {
            name: "dihedral-inf".into(),
            matrix: dihedral_matrix(Bond::Infinite),
            poly_bound: INFINITE_BOUND,
            match_bound: INFINITE_BOUND,
            group_bound: None,
        });

        // Every multiset {p, q, r} over {2,3,4,5,∞} except the all-infinite
        // triangle, assigned as m_ab = p, m_ac = q, m_bc = r with
        // p ≥ q ≥ r (infinity sorting first).
        let menu = [Bond::Infinite, Bond::Finite(5), Bond::Finite(4), Bond::Finite(3), Bond::Finite(2)];
        for (i, &p) in menu.iter().enumerate() {
            for (j, &q) in menu.iter().enumerate().skip(i) {
                for &r in &menu[j..] {
                    if [p, q, r].iter().all(|b| *b == Bond::Infinite) {
                        continue;
                    }
                    cases.push(triangle_case(p, q, r));
                }
            }
        }

        cases.push(CorpusCase {
            name: "A4".into(),
            matrix: path_matrix(4),
            poly_bound: 5,
            match_bound: 5,
            group_bound: Some(10),
        });

        Corpus { cases }
    }

    pub fn case(&self, name: &str) -> Option<&CorpusCase> {
        self.cases.iter().find(|c| c.name == name)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Corpus> {
        let corpus: Corpus = serde_json::from_str(text)?;
        let mut names: Vec<&str> = corpus.cases.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != corpus.cases.len() {
            return Err(Error::Input("corpus case names must be distinct".into()));
        }
        for case in &corpus.cases {
            if case.match_bound < case.poly_bound {
                return Err(Error::Input(format!(
                    "case {}: match_bound below poly_bound",
                    case.name
                )));
            }
        }
        Ok(corpus)
    }
}

fn dihedral_matrix(bond: Bond) -> CoxeterMatrix {
    let m = bond.to_code();
    CoxeterMatrix::new(&[vec![1, m], vec![m, 1]]).expect("valid rank-2 table")
}

/// Straight path with all bonds 3: the symmetric group on rank+1 letters.
fn path_matrix(rank: usize) -> CoxeterMatrix {
    let rows: Vec<Vec<u32>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| match i.abs_diff(j) {
                    0 => 1,
                    1 => 3,
                    _ => 2,
                })
                .collect()
        })
        .collect();
    CoxeterMatrix::new(&rows).expect("valid path table")
}

fn triangle_case(p: Bond, q: Bond, r: Bond) -> CorpusCase {
    let name = format!("rank3-{}.{}.{}", bond_tag(p), bond_tag(q), bond_tag(r));
    let matrix = CoxeterMatrix::new(&[
        vec![1, p.to_code(), q.to_code()],
        vec![p.to_code(), 1, r.to_code()],
        vec![q.to_code(), r.to_code(), 1],
    ])
    .expect("valid rank-3 table");
    if [p, q, r].iter().any(|b| b.finite().is_none()) {
        return CorpusCase {
            name,
            matrix,
            poly_bound: INFINITE_BOUND,
            match_bound: INFINITE_BOUND,
            group_bound: None,
        };
    }
    let bonds = [p, q, r].map(|b| b.finite().expect("checked finite"));
    let longest = bonds.iter().copied().max().expect("three bonds");
    // For each base generator, the extremal product elements of its two
    // dihedral parabolics reach one short of the summed bond orders.
    let pair_reach = (bonds[0] + bonds[1] - 1)
        .max(bonds[0] + bonds[2] - 1)
        .max(bonds[1] + bonds[2] - 1);
    let poly_bound = longest + 2;
    CorpusCase {
        name,
        matrix,
        poly_bound,
        match_bound: poly_bound.max(pair_reach),
        group_bound: triangle_group_length(bonds),
    }
}

/// Length of the longest element for the finite triangle groups, `None` for
/// the affine and hyperbolic ones. Finite means {2,2,m} or {2,3,m} with
/// m ≤ 5 as a bond multiset.
fn triangle_group_length(bonds: [u32; 3]) -> Option<u32> {
    let mut sorted = bonds;
    sorted.sort_unstable();
    match sorted {
        [2, 2, m] => Some(m + 1),
        [2, 3, 3] => Some(6),
        [2, 3, 4] => Some(9),
        [2, 3, 5] => Some(15),
        _ => None,
    }
}

fn bond_tag(b: Bond) -> String {
    match b.finite() {
        Some(m) => m.to_string(),
        None => "inf".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Generator, GroupBall};

    #[test]
    fn standard_corpus_has_the_advertised_shape() {
        let corpus = Corpus::standard();
        assert_eq!(corpus.cases.len(), 1 + 6 + 34 + 1);
        let names: std::collections::BTreeSet<_> =
            corpus.cases.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names.len(), corpus.cases.len(), "names are unique");
        assert!(corpus.case("rank3-5.3.2").is_some());
        assert!(corpus.case("rank3-inf.inf.2").is_some());
        assert!(corpus.case("rank3-inf.inf.inf").is_none());
        for case in &corpus.cases {
            assert!(case.match_bound >= case.poly_bound, "{}", case.name);
        }
    }

    #[test]
    fn group_bounds_close_their_groups() {
        let corpus = Corpus::standard();
        let expected_orders: &[(&str, usize)] = &[
            ("A1", 2),
            ("dihedral-5", 10),
            ("rank3-2.2.2", 8),
            ("rank3-3.2.2", 12),
            ("rank3-3.3.2", 24),
            ("rank3-4.3.2", 48),
            ("rank3-5.3.2", 120),
            ("A4", 120),
        ];
        for &(name, order) in expected_orders {
            let case = corpus.case(name).expect(name);
            let bound = case.group_bound.expect("finite case");
            let ball = GroupBall::build(case.matrix.clone(), bound).expect(name);
            assert!(ball.closed(), "{name} closes at {bound}");
            assert_eq!(ball.size(), order, "{name} order");
            if bound > 0 {
                assert!(
                    !ball.layer(bound as usize).is_empty(),
                    "{name} really needs bound {bound}"
                );
            }
        }
    }

    #[test]
    fn corpus_round_trips_through_json() {
        let corpus = Corpus::standard();
        let text = corpus.to_json_string();
        let back = Corpus::from_json_str(&text).expect("parses");
        assert_eq!(back.cases.len(), corpus.cases.len());
        let a4 = back.case("A4").expect("A4 kept");
        assert_eq!(a4.group_bound, Some(10));
        assert_eq!(a4.matrix.bond(Generator(0), Generator(1)), Bond::Finite(3));
        assert_eq!(a4.matrix.bond(Generator(0), Generator(2)), Bond::Finite(2));
    }

    #[test]
    fn malformed_corpus_json_is_rejected() {
        let mut corpus = Corpus::standard();
        corpus.cases[3].name = corpus.cases[2].name.clone();
        let text = corpus.to_json_string();
        assert!(Corpus::from_json_str(&text).is_err(), "duplicate names");

        let mut corpus = Corpus::standard();
        corpus.cases[3].match_bound = 0;
        let text = corpus.to_json_string();
        assert!(Corpus::from_json_str(&text).is_err(), "bad bounds");
    }
}

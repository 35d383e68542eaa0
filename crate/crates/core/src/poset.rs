//! Graded posets abstracted away from group elements, and isomorphism search.
//!
//! Bruhat intervals are exported here as plain graded posets (node labels,
//! levels, cover lists) so that intervals drawn from *different* groups can be
//! compared. The isomorphism search is a level-by-level backtracking over
//! degree signatures; it can return the first witness or enumerate all of
//! them under a node budget.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::coxeter::{Element, ElementId, GroupBall};
use crate::{Error, Result};

/// A finite graded poset given by its cover relation. Nodes are indexed
/// `0..len`; `covers[i]` lists the nodes directly above node `i`.
#[derive(Debug, Clone)]
pub struct GradedPoset {
    ids: Vec<String>,
    level: Vec<u32>,
    covers: Vec<Vec<u32>>,
    under: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct NodeRepr<'a> {
    id: &'a str,
    level: u32,
    covers: Vec<&'a str>,
}

impl GradedPoset {
    /// Validates grading (every cover one level up, a unique bottom at
    /// level 0) and builds the down-cover lists.
    pub fn new(ids: Vec<String>, level: Vec<u32>, covers: Vec<Vec<u32>>) -> Result<GradedPoset> {
        let n = ids.len();
        if level.len() != n || covers.len() != n {
            return Err(Error::Input(
                "poset fields must all have one entry per node".into(),
            ));
        }
        if ids.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::Input("poset node ids must be distinct".into()));
        }
        let bottoms = level.iter().filter(|&&l| l == 0).count();
        if n > 0 && bottoms != 1 {
            return Err(Error::Input(format!(
                "graded poset needs exactly one bottom node, found {bottoms}"
            )));
        }
        let mut under = vec![Vec::new(); n];
        for (i, ups) in covers.iter().enumerate() {
            for &u in ups {
                let u = u as usize;
                if u >= n {
                    return Err(Error::Input(format!("cover target {u} out of range")));
                }
                if level[u] != level[i] + 1 {
                    return Err(Error::Input(format!(
                        "cover {} -> {} skips a level",
                        ids[i], ids[u]
                    )));
                }
                under[u].push(i as u32);
            }
        }
        Ok(GradedPoset {
            ids,
            level,
            covers,
            under,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn level(&self, node: usize) -> u32 {
        self.level[node]
    }

    pub fn covers(&self, node: usize) -> &[u32] {
        &self.covers[node]
    }

    pub fn covered_by(&self, node: usize) -> &[u32] {
        &self.under[node]
    }

    /// Number of nodes per level, bottom first.
    pub fn level_sizes(&self) -> Vec<usize> {
        let top = self.level.iter().copied().max().unwrap_or(0) as usize;
        let mut sizes = vec![0usize; top + 1];
        for &l in &self.level {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// JSON export: one record per node with its id, level, and the ids of
    /// the nodes covering it. Node order is the internal index order.
    pub fn to_json_string(&self) -> Result<String> {
        let nodes: Vec<NodeRepr> = (0..self.len())
            .map(|i| NodeRepr {
                id: &self.ids[i],
                level: self.level[i],
                covers: self.covers[i].iter().map(|&u| self.id(u as usize)).collect(),
            })
            .collect();
        Ok(serde_json::to_string_pretty(&serde_json::json!({ "nodes": nodes }))?)
    }
}

/// A downward-closed subset of a ball: `x ≤ q ∈ carrier ⇒ x ∈ carrier`.
pub struct LowerSet {
    bits: BitSet,
}

impl LowerSet {
    pub(crate) fn from_bits(bits: BitSet) -> LowerSet {
        LowerSet { bits }
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.bits.get(id.index())
    }

    pub fn members(&self) -> Vec<ElementId> {
        self.bits.iter_ones().map(|i| ElementId(i as u32)).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The smallest lower set containing the seeds: the union of their lower
/// Bruhat intervals.
pub fn lower_closure(ball: &GroupBall, seeds: &[ElementId]) -> LowerSet {
    let mut bits = BitSet::new(ball.size());
    for &seed in seeds {
        bits.union_with(ball.leq_row(seed));
    }
    LowerSet { bits }
}

/// The Bruhat interval `[u, v]` as a graded poset, levels shifted so `u` sits
/// at level 0. Node ids are canonical words; node order is by id within the
/// ball (length-major, then lexicographic).
pub fn interval(ball: &GroupBall, u: &Element, v: &Element) -> Result<GradedPoset> {
    let vid = ball.require(v)?;
    let uid = match ball.id_of(u) {
        Some(id) => id,
        None => {
            // Longer than the bound, hence longer than v: incomparable.
            return Err(Error::EmptyInterval {
                low: u.display(ball.matrix()),
                high: v.display(ball.matrix()),
            });
        }
    };
    interval_by_id(ball, uid, vid)
}

pub fn interval_by_id(ball: &GroupBall, u: ElementId, v: ElementId) -> Result<GradedPoset> {
    if !ball.leq(u, v) {
        return Err(Error::EmptyInterval {
            low: ball.display(u),
            high: ball.display(v),
        });
    }
    let members: Vec<ElementId> = ball
        .interval_below(v)
        .into_iter()
        .filter(|&z| ball.leq(u, z))
        .collect();
    let mut position = std::collections::HashMap::new();
    for (i, &z) in members.iter().enumerate() {
        position.insert(z, i as u32);
    }
    let base = ball.len(u) as u32;
    let ids = members.iter().map(|&z| ball.display(z)).collect();
    let level = members.iter().map(|&z| ball.len(z) as u32 - base).collect();
    let covers = members
        .iter()
        .map(|&z| {
            ball.covers_above(z)
                .iter()
                .filter_map(|w| position.get(w).copied())
                .collect()
        })
        .collect();
    GradedPoset::new(ids, level, covers)
}

/// A level- and cover-preserving bijection, as a map from P1 node indices to
/// P2 node indices.
pub type NodeMap = Vec<u32>;

/// First isomorphism in deterministic order, or `None`.
pub fn poset_isomorphism(p1: &GradedPoset, p2: &GradedPoset) -> Option<NodeMap> {
    let mut found = None;
    let _ = search(p1, p2, u64::MAX, &mut |map| {
        found = Some(map.to_vec());
        false // stop at the first witness
    });
    found
}

/// Every isomorphism, in deterministic order. Fails if the backtracking
/// search would exceed `budget` nodes.
pub fn poset_isomorphisms_all(
    p1: &GradedPoset,
    p2: &GradedPoset,
    budget: u64,
) -> Result<Vec<NodeMap>> {
    let mut all = Vec::new();
    let within = search(p1, p2, budget, &mut |map| {
        all.push(map.to_vec());
        true
    });
    if within {
        Ok(all)
    } else {
        Err(Error::SearchBudget { limit: budget })
    }
}

/// Backtracking core. Calls `emit` on each complete witness; `emit` returns
/// whether to keep searching. Returns false iff the node budget ran out.
fn search(
    p1: &GradedPoset,
    p2: &GradedPoset,
    budget: u64,
    emit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    let n = p1.len();
    if n != p2.len() {
        return true;
    }
    if n == 0 {
        return emit(&[]);
    }
    // Quick screens: level sizes, then per-level signature multisets.
    if p1.level_sizes() != p2.level_sizes() {
        return true;
    }
    let sig = |p: &GradedPoset, i: usize| (p.level(i), p.covers(i).len(), p.covered_by(i).len());
    let mut sig1: Vec<_> = (0..n).map(|i| sig(p1, i)).collect();
    let mut sig2: Vec<_> = (0..n).map(|i| sig(p2, i)).collect();
    sig1.sort_unstable();
    sig2.sort_unstable();
    if sig1 != sig2 {
        return true;
    }

    // Assign P1 nodes in (level, index) order so that when a node is reached,
    // all nodes below it already have images; matching its down-covers
    // exactly onto the image's down-covers then forces cover preservation in
    // both directions once every level is complete.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (p1.level(i), i));
    let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); p1.level_sizes().len()];
    for i in 0..n {
        by_level[p2.level(i) as usize].push(i as u32);
    }

    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    let mut nodes_left = budget;

    fn descend(
        p1: &GradedPoset,
        p2: &GradedPoset,
        order: &[usize],
        by_level: &[Vec<u32>],
        depth: usize,
        map: &mut [u32],
        used: &mut [bool],
        nodes_left: &mut u64,
        emit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> Option<bool> {
        if depth == order.len() {
            return Some(emit(map));
        }
        let x = order[depth];
        for &y in &by_level[p1.level(x) as usize] {
            let yi = y as usize;
            if used[yi]
                || p2.covers(yi).len() != p1.covers(x).len()
                || p2.covered_by(yi).len() != p1.covered_by(x).len()
            {
                continue;
            }
            if !p1
                .covered_by(x)
                .iter()
                .all(|&d| p2.covered_by(yi).contains(&map[d as usize]))
            {
                continue;
            }
            if *nodes_left == 0 {
                return None;
            }
            *nodes_left -= 1;
            map[x] = y;
            used[yi] = true;
            let keep = descend(p1, p2, order, by_level, depth + 1, map, used, nodes_left, emit);
            used[yi] = false;
            map[x] = u32::MAX;
            match keep {
                Some(true) => {}
                stop => return stop,
            }
        }
        Some(true)
    }

    descend(
        p1,
        p2,
        &order,
        &by_level,
        0,
        &mut map,
        &mut used,
        &mut nodes_left,
        emit,
    )
    .is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterMatrix, Word};

    fn dihedral_ball(m: u32, bound: u32) -> GroupBall {
        let mat =
            CoxeterMatrix::with_names(&[vec![1, m], vec![m, 1]], vec!["s".into(), "t".into()])
                .unwrap();
        GroupBall::build(mat, bound).unwrap()
    }

    fn elt(ball: &GroupBall, text: &str) -> Element {
        let id = ball
            .locate(&Word::parse(ball.matrix(), text).unwrap())
            .unwrap()
            .expect("in ball");
        ball.element(id).clone()
    }

    fn chain(n: u32) -> GradedPoset {
        let ids = (0..n).map(|i| i.to_string()).collect();
        let level = (0..n).collect();
        let covers = (0..n)
            .map(|i| if i + 1 < n { vec![i + 1] } else { vec![] })
            .collect();
        GradedPoset::new(ids, level, covers).unwrap()
    }

    #[test]
    fn point_interval() {
        let ball = dihedral_ball(3, 3);
        let e = Element::identity();
        let p = interval(&ball, &e, &e).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.level_sizes(), vec![1]);
        assert_eq!(p.id(0), "e");
    }

    #[test]
    fn full_dihedral_interval_shape() {
        let ball = dihedral_ball(3, 3);
        let p = interval(&ball, &Element::identity(), &elt(&ball, "s.t.s")).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.level_sizes(), vec![1, 2, 2, 1]);
        // Bottom covers both atoms; each atom covers both coatoms.
        assert_eq!(p.covers(0).len(), 2);
        assert_eq!(p.covers(1).len(), 2);
        assert_eq!(p.covers(2).len(), 2);
    }

    #[test]
    fn upper_interval_is_a_diamond() {
        let ball = dihedral_ball(3, 3);
        let p = interval(&ball, &elt(&ball, "s"), &elt(&ball, "s.t.s")).unwrap();
        assert_eq!(p.level_sizes(), vec![1, 2, 1]);
        assert_eq!(p.id(0), "s");
        assert_eq!(p.level(0), 0);
    }

    #[test]
    fn incomparable_endpoints_error() {
        let ball = dihedral_ball(3, 3);
        let err = interval(&ball, &elt(&ball, "s"), &elt(&ball, "t")).unwrap_err();
        assert!(matches!(err, Error::EmptyInterval { .. }));
    }

    #[test]
    fn lower_closure_basics() {
        let ball = dihedral_ball(3, 3);
        assert!(lower_closure(&ball, &[]).is_empty());
        let s = ball
            .locate(&Word::parse(ball.matrix(), "s").unwrap())
            .unwrap()
            .unwrap();
        let below_s = lower_closure(&ball, &[s]);
        assert_eq!(below_s.len(), 2);
        assert!(below_s.contains(ball.identity()));
        let top = ball.layer(3)[0];
        assert_eq!(lower_closure(&ball, &[top]).len(), 6);
        // Union of two incomparable seeds.
        let layer1 = ball.layer(1);
        assert_eq!(lower_closure(&ball, layer1).len(), 3);
    }

    #[test]
    fn isomorphic_intervals_across_different_bonds() {
        let b3 = dihedral_ball(3, 3);
        let b4 = dihedral_ball(4, 4);
        let p = interval(&b3, &Element::identity(), &elt(&b3, "s.t.s")).unwrap();
        let q = interval(&b4, &Element::identity(), &elt(&b4, "s.t.s")).unwrap();
        let map = poset_isomorphism(&p, &q).expect("isomorphic");
        for x in 0..p.len() {
            assert_eq!(p.level(x), q.level(map[x] as usize));
            for &c in p.covers(x) {
                assert!(q.covers(map[x] as usize).contains(&map[c as usize]));
            }
        }
        assert!(poset_isomorphism(&q, &p).is_some());
    }

    #[test]
    fn identity_isomorphism_on_self() {
        let ball = dihedral_ball(4, 4);
        let p = interval(&ball, &Element::identity(), &elt(&ball, "s.t.s.t")).unwrap();
        let map = poset_isomorphism(&p, &p).expect("self-isomorphic");
        assert_eq!(map, (0..p.len() as u32).collect::<Vec<_>>());
    }

    #[test]
    fn chain_vs_square_has_no_isomorphism() {
        let square = {
            let ball = dihedral_ball(2, 2);
            interval(&ball, &Element::identity(), &elt(&ball, "s.t")).unwrap()
        };
        assert_eq!(square.level_sizes(), vec![1, 2, 1]);
        assert!(poset_isomorphism(&chain(4), &square).is_none());
        assert!(poset_isomorphism(&square, &chain(4)).is_none());
    }

    #[test]
    fn all_witnesses_on_the_square() {
        let ball = dihedral_ball(2, 2);
        let p = interval(&ball, &Element::identity(), &elt(&ball, "s.t")).unwrap();
        let all = poset_isomorphisms_all(&p, &p, 10_000).unwrap();
        // The square has exactly the identity and the atom swap.
        assert_eq!(all.len(), 2);
        assert_eq!(all[0], vec![0, 1, 2, 3]);
        assert_eq!(all[1], vec![0, 2, 1, 3]);
    }

    #[test]
    fn witness_budget_is_enforced() {
        let ball = dihedral_ball(3, 3);
        let p = interval(&ball, &Element::identity(), &elt(&ball, "s.t.s")).unwrap();
        let err = poset_isomorphisms_all(&p, &p, 1).unwrap_err();
        assert!(matches!(err, Error::SearchBudget { limit: 1 }));
    }

    #[test]
    fn json_export_lists_nodes_with_covers() {
        let ball = dihedral_ball(2, 2);
        let p = interval(&ball, &Element::identity(), &elt(&ball, "s.t")).unwrap();
        let text = p.to_json_string().unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        let nodes = parsed["nodes"].as_array().unwrap();
        assert_eq!(nodes.len(), 4);
        assert_eq!(nodes[0]["id"], "e");
        assert_eq!(nodes[0]["covers"].as_array().unwrap().len(), 2);
    }
}

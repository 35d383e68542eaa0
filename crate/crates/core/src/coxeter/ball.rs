//! The finite universe of computation: all elements of length at most `L`.
//!
//! A ball is built once by breadth-first right multiplication from the
//! identity, then frozen. It carries multiplication tables against single
//! generators on both sides, coatom sets, an index from coatom sets back to
//! elements, and the full Bruhat order restricted to the ball as one bitset
//! row per element. Everything downstream (polynomials, matchings, suites)
//! reads these tables instead of re-running word arithmetic.

use std::collections::{BTreeSet, HashMap};

use crate::bitset::BitSet;
use crate::coxeter::matrix::{Bond, CoxeterMatrix, GenSet, Generator};
use crate::coxeter::reduce::{reduce_with_limit, DEFAULT_NODE_BUDGET};
use crate::coxeter::word::{Element, Word};
use crate::coxeter::Side;
use crate::{Error, Result};

/// Index of an element inside its ball. Ids are assigned layer by layer and,
/// within a layer, in lexicographic order of canonical words, so they are
/// deterministic for a given matrix and bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Result of multiplying a ball element by a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mult {
    /// Length went up by one and the product is in the ball.
    Up(ElementId),
    /// Length went down by one (always in the ball).
    Down(ElementId),
    /// Length went up by one but the product exceeds the bound.
    OutOfBall,
}

impl Mult {
    pub fn id(self) -> Option<ElementId> {
        match self {
            Mult::Up(id) | Mult::Down(id) => Some(id),
            Mult::OutOfBall => None,
        }
    }

    pub fn is_down(self) -> bool {
        matches!(self, Mult::Down(_))
    }
}

/// Whether an alternating word starts or ends with the named generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltSide {
    Prefix,
    Suffix,
}

/// All elements of length at most `bound`, with order and multiplication
/// tables. Immutable once built; safe to share across threads for reads.
pub struct GroupBall {
    matrix: CoxeterMatrix,
    bound: u32,
    node_limit: u64,
    elements: Vec<Element>,
    index: HashMap<Word, ElementId>,
    layers: Vec<Vec<ElementId>>,
    left: Vec<Mult>,
    right: Vec<Mult>,
    inverse: Vec<ElementId>,
    coatoms: Vec<Box<[ElementId]>>,
    ups: Vec<Box<[ElementId]>>,
    coatom_index: HashMap<Box<[ElementId]>, Vec<ElementId>>,
    supports: Vec<GenSet>,
    leq: Vec<BitSet>,
    closed: bool,
}

impl GroupBall {
    /// Builds the ball of the given radius with the default reduction budget.
    pub fn build(matrix: CoxeterMatrix, bound: u32) -> Result<GroupBall> {
        Self::build_with_limit(matrix, bound, DEFAULT_NODE_BUDGET)
    }

    pub fn build_with_limit(matrix: CoxeterMatrix, bound: u32, node_limit: u64) -> Result<GroupBall> {
        let rank = matrix.rank();
        let mut elements = vec![Element::identity()];
        let mut index = HashMap::new();
        index.insert(Word::empty(), ElementId(0));
        let mut layers: Vec<Vec<ElementId>> = vec![vec![ElementId(0)]];

        // Discovery: every element of length l+1 is some (length-l element)·s.
        for len in 0..bound as usize {
            if layers[len].is_empty() {
                break; // the whole group has been enumerated
            }
            let mut next: BTreeSet<Word> = BTreeSet::new();
            for &id in &layers[len] {
                let word = elements[id.index()].word().clone();
                for s in matrix.generators() {
                    let product = reduce_with_limit(&matrix, &word.with_pushed(s), node_limit)?;
                    if product.len() == len + 1 {
                        next.insert(product.word().clone());
                    }
                }
            }
            let mut layer = Vec::with_capacity(next.len());
            for word in next {
                let id = ElementId(elements.len() as u32);
                index.insert(word.clone(), id);
                elements.push(Element::from_canonical(word));
                layer.push(id);
            }
            layers.push(layer);
        }
        while layers.len() <= bound as usize {
            layers.push(Vec::new());
        }

        let n = elements.len();
        let mut left = vec![Mult::OutOfBall; n * rank];
        let mut right = vec![Mult::OutOfBall; n * rank];
        let mut closed = true;
        for (i, element) in elements.iter().enumerate() {
            for s in matrix.generators() {
                for (side, table) in [(Side::Right, &mut right), (Side::Left, &mut left)] {
                    let word = match side {
                        Side::Right => element.word().with_pushed(s),
                        Side::Left => element.word().with_prepended(s),
                    };
                    let product = reduce_with_limit(&matrix, &word, node_limit)?;
                    let entry = match index.get(product.word()) {
                        Some(&id) if product.len() < element.len() => Mult::Down(id),
                        Some(&id) => Mult::Up(id),
                        None => {
                            debug_assert!(product.len() == bound as usize + 1);
                            closed = false;
                            Mult::OutOfBall
                        }
                    };
                    table[i * rank + s.index()] = entry;
                }
            }
        }

        let mut inverse = Vec::with_capacity(n);
        for element in &elements {
            let inv = reduce_with_limit(&matrix, &element.word().reversed(), node_limit)?;
            inverse.push(index[inv.word()]);
        }

        // Coatoms by the delete-one-letter rule: exactly the results of
        // length len−1 are covered, and every cover arises this way.
        let mut coatoms: Vec<Box<[ElementId]>> = Vec::with_capacity(n);
        for element in &elements {
            let letters = element.word().letters();
            let mut below: BTreeSet<ElementId> = BTreeSet::new();
            for skip in 0..letters.len() {
                let mut sub = Vec::with_capacity(letters.len() - 1);
                sub.extend_from_slice(&letters[..skip]);
                sub.extend_from_slice(&letters[skip + 1..]);
                let reduced = reduce_with_limit(&matrix, &Word::new(sub), node_limit)?;
                if reduced.len() + 1 == element.len() {
                    below.insert(index[reduced.word()]);
                }
            }
            coatoms.push(below.into_iter().collect());
        }

        let mut ups: Vec<Vec<ElementId>> = vec![Vec::new(); n];
        for (i, co) in coatoms.iter().enumerate() {
            for &c in co.iter() {
                ups[c.index()].push(ElementId(i as u32));
            }
        }
        let ups: Vec<Box<[ElementId]>> = ups.into_iter().map(Vec::into_boxed_slice).collect();

        let mut coatom_index: HashMap<Box<[ElementId]>, Vec<ElementId>> = HashMap::new();
        for (i, co) in coatoms.iter().enumerate() {
            coatom_index
                .entry(co.clone())
                .or_default()
                .push(ElementId(i as u32));
        }

        let supports: Vec<GenSet> = elements.iter().map(|e| e.support()).collect();

        // Bruhat order, one layer at a time. With s a left descent of y:
        // x ≤ y iff (sx ≤ sy when sx < x, else x ≤ sy).
        let mut leq: Vec<BitSet> = Vec::with_capacity(n);
        for (i, element) in elements.iter().enumerate() {
            let mut row = BitSet::new(n);
            if element.is_identity() {
                row.insert(0);
            } else {
                let s = (0..rank)
                    .map(|j| Generator(j as u8))
                    .find(|&s| left[i * rank + s.index()].is_down())
                    .expect("non-identity element has a left descent");
                let sy = left[i * rank + s.index()].id().unwrap().index();
                for x in 0..=i {
                    let bit = match left[x * rank + s.index()] {
                        Mult::Down(sx) => leq[sy].get(sx.index()),
                        Mult::Up(_) | Mult::OutOfBall => leq[sy].get(x),
                    };
                    row.set(x, bit);
                }
            }
            leq.push(row);
        }

        Ok(GroupBall {
            matrix,
            bound,
            node_limit,
            elements,
            index,
            layers,
            left,
            right,
            inverse,
            coatoms,
            ups,
            coatom_index,
            supports,
            leq,
            closed,
        })
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn node_limit(&self) -> u64 {
        self.node_limit
    }

    /// True when the ball is the whole (finite) group: no product of a ball
    /// element with a generator ever left the ball.
    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> ElementId {
        ElementId(0)
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> {
        (0..self.elements.len() as u32).map(ElementId)
    }

    pub fn element(&self, id: ElementId) -> &Element {
        &self.elements[id.index()]
    }

    pub fn word(&self, id: ElementId) -> &Word {
        self.elements[id.index()].word()
    }

    pub fn len(&self, id: ElementId) -> usize {
        self.elements[id.index()].len()
    }

    pub fn display(&self, id: ElementId) -> String {
        self.elements[id.index()].display(&self.matrix)
    }

    pub fn layer(&self, len: usize) -> &[ElementId] {
        self.layers.get(len).map_or(&[], Vec::as_slice)
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let top = self
            .layers
            .iter()
            .rposition(|l| !l.is_empty())
            .unwrap_or(0);
        self.layers[..=top].iter().map(Vec::len).collect()
    }

    /// Looks up an element already in canonical form.
    pub fn id_of(&self, element: &Element) -> Option<ElementId> {
        self.index.get(element.word()).copied()
    }

    /// Reduces an arbitrary word and looks the result up.
    pub fn locate(&self, word: &Word) -> Result<Option<ElementId>> {
        let element = reduce_with_limit(&self.matrix, word, self.node_limit)?;
        Ok(self.id_of(&element))
    }

    pub fn require(&self, element: &Element) -> Result<ElementId> {
        self.id_of(element)
            .ok_or_else(|| Error::OutOfBall(element.display(&self.matrix)))
    }

    #[inline]
    pub fn mult(&self, id: ElementId, s: Generator, side: Side) -> Mult {
        let table = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        table[id.index() * self.rank() + s.index()]
    }

    pub fn inverse(&self, id: ElementId) -> ElementId {
        self.inverse[id.index()]
    }

    pub fn descents(&self, id: ElementId, side: Side) -> GenSet {
        self.matrix
            .generators()
            .filter(|&s| self.mult(id, s, side).is_down())
            .collect()
    }

    pub fn first_descent(&self, id: ElementId, side: Side) -> Option<Generator> {
        self.matrix
            .generators()
            .find(|&s| self.mult(id, s, side).is_down())
    }

    /// Bruhat order within the ball.
    #[inline]
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.leq[y.index()].get(x.index())
    }

    pub(crate) fn leq_row(&self, y: ElementId) -> &BitSet {
        &self.leq[y.index()]
    }

    /// The elements of `[e, y]`, ascending by id (hence by length, then word).
    pub fn interval_below(&self, y: ElementId) -> Vec<ElementId> {
        self.leq[y.index()]
            .iter_ones()
            .map(|i| ElementId(i as u32))
            .collect()
    }

    /// The elements covered by `y`, ascending.
    pub fn coatoms(&self, id: ElementId) -> &[ElementId] {
        &self.coatoms[id.index()]
    }

    /// The elements covering `y` inside the ball, ascending.
    pub fn covers_above(&self, id: ElementId) -> &[ElementId] {
        &self.ups[id.index()]
    }

    /// All elements whose coatom set is exactly the given sorted set.
    pub fn elements_with_coatom_set(&self, coatoms: &[ElementId]) -> &[ElementId] {
        self.coatom_index
            .get(coatoms)
            .map_or(&[], Vec::as_slice)
    }

    pub fn support(&self, id: ElementId) -> GenSet {
        self.supports[id.index()]
    }

    /// The greatest element of `[e, w] ∩ ⟨J⟩`. Existence and uniqueness is a
    /// structural fact; violation is asserted as a bug, not reported.
    pub fn parabolic_max(&self, w: ElementId, j: GenSet) -> ElementId {
        let mut members: Vec<ElementId> = self.leq[w.index()]
            .iter_ones()
            .map(|i| ElementId(i as u32))
            .filter(|&x| self.supports[x.index()].is_subset(j))
            .collect();
        let top = members
            .pop()
            .expect("the identity is always a member of [e,w] ∩ ⟨J⟩");
        assert!(
            members.iter().all(|&x| self.leq(x, top)),
            "no unique maximum in [e,{}] ∩ {:?}: {} is not above all members",
            self.display(w),
            j,
            self.display(top),
        );
        top
    }

    /// Whether every pair in `J` has a finite bond with its longest
    /// alternating element below `w`. Empty and singleton `J` are vacuously
    /// full. An infinite bond makes the answer `false`; a finite bond whose
    /// longest element exceeds the ball is an error.
    pub fn is_full(&self, w: ElementId, j: GenSet) -> Result<bool> {
        let gens: Vec<Generator> = j.iter().collect();
        for (i, &s) in gens.iter().enumerate() {
            for &t in &gens[i + 1..] {
                let m = match self.matrix.bond(s, t) {
                    Bond::Infinite => return Ok(false),
                    Bond::Finite(m) => m,
                };
                if m as usize > self.bound as usize {
                    return Err(Error::BallTooSmall(format!(
                        "longest element of <{},{}> has length {m}, ball bound is {}",
                        self.matrix.name(s),
                        self.matrix.name(t),
                        self.bound
                    )));
                }
                let top = dihedral_word(&self.matrix, s, t, m, AltSide::Prefix)?;
                let top_id = self.id_of(&top).expect("length ≤ bound, hence in ball");
                if !self.leq(top_id, w) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Replaces each bond by the length of the top of `[e,w] ∩ ⟨s,t⟩`,
    /// producing the smallest system in which the image of `w` dominates all
    /// its dihedral tops, along with the induced re-reading map on `[e,w]`.
    pub fn flatten(&self, w: ElementId) -> Result<Flattening> {
        let rank = self.rank();
        let supp = self.supports[w.index()];
        let mut codes = vec![vec![1u32; rank]; rank];
        for i in 0..rank {
            for k in (i + 1)..rank {
                let s = Generator(i as u8);
                let t = Generator(k as u8);
                // Pairs not inside the support never occur in words below the
                // image, so any legal bond works; 2 is the smallest.
                let code = if supp.contains(s) && supp.contains(t) {
                    let top = self.parabolic_max(w, GenSet::pair(s, t));
                    let len = self.len(top) as u32;
                    debug_assert!(len >= 2, "both generators lie below w");
                    len
                } else {
                    2
                };
                codes[i][k] = code;
                codes[k][i] = code;
            }
        }
        let flat = CoxeterMatrix::with_names(&codes, self.matrix.names().to_vec())?;
        let mut map = Vec::new();
        for x in self.interval_below(w) {
            let image = reduce_with_limit(&flat, self.word(x), self.node_limit)?;
            map.push((x, image));
        }
        let image = map
            .last()
            .map(|(_, img)| img.clone())
            .expect("interval contains w");
        Ok(Flattening {
            matrix: flat,
            image,
            map,
        })
    }
}

/// Output of [`GroupBall::flatten`].
pub struct Flattening {
    /// The flattened Coxeter matrix (same names, same rank).
    pub matrix: CoxeterMatrix,
    /// The image of the flattened element in the new system.
    pub image: Element,
    /// The re-reading map on `[e, w]`, ascending by source id. The last entry
    /// is `(w, image)`.
    pub map: Vec<(ElementId, Element)>,
}

/// The alternating word on `s`, `t` with `n` letters, starting with `s`
/// (`Prefix`) or ending with `s` (`Suffix`), as a canonical element.
/// Rejects `n` beyond a finite bond order, where the word is not reduced.
pub fn dihedral_word(
    matrix: &CoxeterMatrix,
    s: Generator,
    t: Generator,
    n: u32,
    side: AltSide,
) -> Result<Element> {
    if s == t && n > 1 {
        return Err(Error::Input(
            "alternating word needs two distinct generators".into(),
        ));
    }
    if let Bond::Finite(m) = matrix.bond(s, t) {
        if n > m {
            return Err(Error::Input(format!(
                "alternating word of length {n} exceeds the bond order {m}"
            )));
        }
    }
    let letters: Vec<Generator> = match side {
        AltSide::Prefix => (0..n).map(|k| if k % 2 == 0 { s } else { t }).collect(),
        AltSide::Suffix => (0..n)
            .map(|k| if (n - 1 - k) % 2 == 0 { s } else { t })
            .collect(),
    };
    reduce_with_limit(matrix, &Word::new(letters), DEFAULT_NODE_BUDGET)
}

//! Matchings of principal dihedral balls.
//!
//! A maximal matching φ with φ(e) = a restricts to every principal dihedral
//! subgroup ⟨a,s⟩, and the family of those restrictions determines φ
//! uniquely, so dihedral tables are both the input format and the complete
//! classification of matchings. Inside the ball of ⟨a,s⟩ the structure is
//! rigid: levels 1..m−1 hold two elements each, and walking up from e one
//! finds at every level exactly one element not already matched downward.
//! Choosing, level by level, which of the two elements above receives that
//! element pins the whole table, and every choice sequence works. A table is
//! therefore stored as one generator letter per level — the first letter of
//! each chosen image — giving 2^(m−2) matchings when the bond m is finite
//! (the two top-level choices name the same element) and 2^(B−1) truncated
//! tables at bound B < m, each with a single unresolved element of length B.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::coxeter::{dihedral_word, AltSide, Bond, CoxeterMatrix, Element, Generator};
use crate::{Error, Result};

/// An element of a dihedral group on two generators: the alternating word
/// with `len` letters starting at `first`. The identity and, in a finite
/// group, the top element each have two spellings; [`DihedralMatching`]
/// normalizes both to the base-first one, and comparisons assume that form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiElt {
    pub len: u32,
    pub first: Generator,
}

impl DiElt {
    pub fn new(len: u32, first: Generator) -> DiElt {
        DiElt { len, first }
    }
}

/// A special matching of the radius-`bound` ball of ⟨base, other⟩ with
/// φ(e) = base, stored as its raise choices: `raise_first[k−1]` is the first
/// letter of the image of the unique length-`k` element not already matched
/// downward. When the table reaches the top of a finite group the last entry
/// is normalized to `base`, making distinct vectors distinct matchings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DihedralMatching {
    base: Generator,
    other: Generator,
    bond: Bond,
    bound: u32,
    raise_first: Vec<Generator>,
}

/// Number of raise entries a table of the given bond and bound carries.
fn table_len(bond: Bond, bound: u32) -> usize {
    match bond.finite() {
        Some(m) if bound == m => (m - 1) as usize,
        _ => (bound - 1) as usize,
    }
}

impl DihedralMatching {
    /// Builds a table from its raise choices. The bound must not exceed a
    /// finite bond order (a larger ball adds no elements), and each entry
    /// must be one of the two generators. The final entry of a table
    /// reaching a finite top is normalized to `base`.
    pub fn from_choices(
        base: Generator,
        other: Generator,
        bond: Bond,
        bound: u32,
        mut raise_first: Vec<Generator>,
    ) -> Result<DihedralMatching> {
        if base == other {
            return Err(Error::Input(
                "a dihedral matching needs two distinct generators".into(),
            ));
        }
        if bound == 0 {
            return Err(Error::Input("dihedral table bound must be positive".into()));
        }
        if let Some(m) = bond.finite() {
            if bound > m {
                return Err(Error::Input(format!(
                    "dihedral table bound {bound} exceeds the bond order {m}"
                )));
            }
        }
        let expected = table_len(bond, bound);
        if raise_first.len() != expected {
            return Err(Error::Input(format!(
                "dihedral table needs {expected} raise choices, found {}",
                raise_first.len()
            )));
        }
        if raise_first.iter().any(|&g| g != base && g != other) {
            return Err(Error::Input(
                "raise choices must name one of the table's two generators".into(),
            ));
        }
        if bond.finite() == Some(bound) && bound >= 2 {
            // both choices at the last level name the single top element
            raise_first[expected - 1] = base;
        }
        Ok(DihedralMatching {
            base,
            other,
            bond,
            bound,
            raise_first,
        })
    }

    /// The table of x ↦ x·base (right multiplication).
    pub fn right_mult(
        base: Generator,
        other: Generator,
        bond: Bond,
        bound: u32,
    ) -> Result<DihedralMatching> {
        let capped = top_cap(bond, bound);
        let n = table_len(bond, capped);
        let choices = (0..n).map(|i| if i % 2 == 0 { other } else { base }).collect();
        DihedralMatching::from_choices(base, other, bond, capped, choices)
    }

    /// The table of x ↦ base·x (left multiplication).
    pub fn left_mult(
        base: Generator,
        other: Generator,
        bond: Bond,
        bound: u32,
    ) -> Result<DihedralMatching> {
        let capped = top_cap(bond, bound);
        let n = table_len(bond, capped);
        DihedralMatching::from_choices(base, other, bond, capped, vec![base; n])
    }

    /// Reads a table off a raising function: `raise` is queried at the
    /// successive unmatched elements and must return the cover each is sent
    /// to, or `None` once the table runs past its own knowledge.
    pub(crate) fn from_raises(
        base: Generator,
        other: Generator,
        bond: Bond,
        bound: u32,
        raise: impl Fn(DiElt) -> Option<DiElt>,
    ) -> Result<DihedralMatching> {
        let capped = top_cap(bond, bound);
        let n = table_len(bond, capped);
        let mut raise_first: Vec<Generator> = Vec::with_capacity(n);
        for k in 1..=n as u32 {
            let first = if k == 1 {
                other
            } else {
                partner(base, other, raise_first[k as usize - 2])
            };
            let image = raise(DiElt::new(k, first)).ok_or_else(|| {
                Error::Input(format!("dihedral table ends at length {k}, bound is {capped}"))
            })?;
            if image.len != k + 1 || (image.first != base && image.first != other) {
                return Err(Error::Input(format!(
                    "element of length {k} is not raised to a cover"
                )));
            }
            raise_first.push(image.first);
        }
        DihedralMatching::from_choices(base, other, bond, capped, raise_first)
    }

    pub fn base(&self) -> Generator {
        self.base
    }

    pub fn other(&self) -> Generator {
        self.other
    }

    pub fn bond(&self) -> Bond {
        self.bond
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// The raise choices, one per level starting at length 1.
    pub fn choices(&self) -> &[Generator] {
        &self.raise_first
    }

    /// Whether the table covers its whole group (finite bond, full ball).
    pub fn is_total(&self) -> bool {
        self.bond.finite() == Some(self.bound)
    }

    /// The other generator of the pair.
    fn partner_of(&self, g: Generator) -> Generator {
        partner(self.base, self.other, g)
    }

    /// First letter of the alternating word of length `len` ending in `last`.
    fn ending_first(&self, len: u32, last: Generator) -> Generator {
        debug_assert!(len >= 1);
        if len % 2 == 1 {
            last
        } else {
            self.partner_of(last)
        }
    }

    /// The alternating element of length `len` ending in `last`, normalized.
    pub fn ending_in(&self, len: u32, last: Generator) -> DiElt {
        if len == 0 {
            return self.normalize(DiElt::new(0, self.base));
        }
        self.normalize(DiElt::new(len, self.ending_first(len, last)))
    }

    /// Maps the two spellings of the identity and of a finite top element to
    /// the base-first one.
    pub fn normalize(&self, x: DiElt) -> DiElt {
        debug_assert!(
            x.first == self.base || x.first == self.other,
            "element of a different dihedral pair"
        );
        if x.len == 0 || self.bond.finite() == Some(x.len) {
            DiElt::new(x.len, self.base)
        } else {
            x
        }
    }

    /// First letter of the element of length `k` that is matched downward.
    fn hit_first(&self, k: u32) -> Generator {
        debug_assert!(k >= 1);
        if k == 1 {
            self.base
        } else {
            self.raise_first[k as usize - 2]
        }
    }

    /// First letter of the element of length `k` not matched downward.
    /// Meaningless at a finite top, which has a single element.
    fn free_first(&self, k: u32) -> Generator {
        debug_assert!(k >= 1 && self.bond.finite() != Some(k));
        if k == 1 {
            self.other
        } else {
            self.partner_of(self.raise_first[k as usize - 2])
        }
    }

    /// The image of `x`, or `None` for the single element whose match lies
    /// past the bound of a truncated table.
    pub fn apply(&self, x: DiElt) -> Option<DiElt> {
        let x = self.normalize(x);
        assert!(x.len <= self.bound, "element beyond the table bound");
        if x.len == 0 {
            return Some(DiElt::new(1, self.base));
        }
        if x.first == self.hit_first(x.len) {
            let first = if x.len == 1 {
                self.base
            } else {
                self.free_first(x.len - 1)
            };
            return Some(self.normalize(DiElt::new(x.len - 1, first)));
        }
        if (x.len as usize) <= self.raise_first.len() {
            let target = self.raise_first[x.len as usize - 1];
            Some(self.normalize(DiElt::new(x.len + 1, target)))
        } else {
            None
        }
    }

    /// Whether `x` is raised by the table (its image is defined and longer).
    pub fn raises(&self, x: DiElt) -> bool {
        matches!(self.apply(x), Some(y) if y.len > self.normalize(x).len)
    }

    /// The matched pairs (u, φ(u)) with u ⋖ φ(u), ascending by length.
    pub fn pairs(&self) -> Vec<(DiElt, DiElt)> {
        let mut out = vec![(
            self.normalize(DiElt::new(0, self.base)),
            DiElt::new(1, self.base),
        )];
        for k in 1..=self.raise_first.len() as u32 {
            let low = DiElt::new(k, self.free_first(k));
            let high = self.normalize(DiElt::new(k + 1, self.raise_first[k as usize - 1]));
            out.push((low, high));
        }
        out
    }

    /// The single element whose match lies past the bound, if the table is
    /// truncated.
    pub fn unresolved(&self) -> Option<DiElt> {
        if self.is_total() {
            None
        } else {
            Some(DiElt::new(self.bound, self.free_first(self.bound)))
        }
    }

    pub fn is_right_mult(&self) -> bool {
        DihedralMatching::right_mult(self.base, self.other, self.bond, self.bound)
            .map(|t| t.raise_first == self.raise_first)
            .unwrap_or(false)
    }

    pub fn is_left_mult(&self) -> bool {
        self.raise_first.iter().all(|&g| g == self.base)
    }

    /// The table of x ↦ φ(x⁻¹)⁻¹, again a matching of the same ball.
    pub fn reversed(&self) -> DihedralMatching {
        // the inverse of an alternating word flips its first letter exactly
        // when the length is even
        let invert = |x: DiElt| -> DiElt {
            if x.len >= 1 && x.len % 2 == 0 {
                self.normalize(DiElt::new(x.len, self.partner_of(x.first)))
            } else {
                x
            }
        };
        DihedralMatching::from_raises(self.base, self.other, self.bond, self.bound, |x| {
            self.apply(invert(x)).map(invert)
        })
        .expect("the reversal of a matching is a matching of the same ball")
    }

    /// The least length at which the table departs from right multiplication:
    /// the alternating element of that length ending in `other` is no longer
    /// sent to its extension by `base`. `None` when no departure is certified
    /// within the table. When `Some(t)`, the departing element is forced onto
    /// the alternating extension ending in `other` instead.
    pub fn right_mult_deviation(&self) -> Option<u32> {
        let limit = match self.bond.finite() {
            Some(m) => self.bound.min(m - 1),
            None => self.bound,
        };
        for j in 1..=limit {
            let x = self.ending_in(j, self.other);
            let expected = self.normalize(DiElt::new(j + 1, x.first));
            match self.apply(x) {
                None => return None,
                Some(y) if y == expected => {}
                Some(_) => return Some(j),
            }
        }
        None
    }

    /// Mirror of [`Self::right_mult_deviation`]: the least length at which an
    /// alternating element starting with `other` is no longer sent to its
    /// extension by `base` on the left.
    pub fn left_mult_deviation(&self) -> Option<u32> {
        let limit = match self.bond.finite() {
            Some(m) => self.bound.min(m - 1),
            None => self.bound,
        };
        for j in 1..=limit {
            let x = DiElt::new(j, self.other);
            let expected = self.normalize(DiElt::new(j + 1, self.base));
            match self.apply(x) {
                None => return None,
                Some(y) if y == expected => {}
                Some(_) => return Some(j),
            }
        }
        None
    }

    /// Whether the table commutes with left multiplication by `x` (one of
    /// its two generators) everywhere it is defined. Decided from the table
    /// alone: commutation fails somewhere iff for some j the alternating
    /// element [y,x,j⟩ is raised to [y,x,j+1⟩ while x·[y,x,j⟩ is not raised
    /// to x·[y,x,j+1⟩, and such j need only be scanned below the bond order
    /// minus two. A truncated table certifies regularity as far as it can
    /// see.
    pub fn left_regular_for(&self, x: Generator) -> bool {
        assert!(x == self.base || x == self.other, "generator of another pair");
        let y = self.partner_of(x);
        let mut j = 0u32;
        loop {
            if let Some(m) = self.bond.finite() {
                if j + 3 > m {
                    return true;
                }
            }
            if j + 2 > self.bound {
                return true;
            }
            let yj = self.ascending(j, y);
            let yj1 = self.ascending(j + 1, y);
            let xyj = self.ascending(j + 1, x);
            let xyj1 = self.normalize(DiElt::new(j + 2, x));
            let first = self.apply(yj).expect("level below the bound");
            if first == yj1 {
                let second = self.apply(xyj).expect("level below the bound");
                if second != xyj1 {
                    return false;
                }
            }
            j += 1;
        }
    }

    /// Right-handed mirror of [`Self::left_regular_for`].
    pub fn right_regular_for(&self, x: Generator) -> bool {
        self.reversed().left_regular_for(x)
    }

    /// The normalized alternating element of length `len` starting with
    /// `first` (identity when `len` is 0, whatever `first` says).
    fn ascending(&self, len: u32, first: Generator) -> DiElt {
        self.normalize(DiElt::new(len, if len == 0 { self.base } else { first }))
    }

    /// The canonical group element a table entry names.
    pub fn element(&self, matrix: &CoxeterMatrix, x: DiElt) -> Result<Element> {
        let x = self.normalize(x);
        if x.len == 0 {
            return Ok(Element::identity());
        }
        dihedral_word(matrix, x.first, self.partner_of(x.first), x.len, AltSide::Prefix)
    }

    /// Reads an alternating word back into the table's coordinates.
    pub fn from_element(&self, el: &Element) -> Result<DiElt> {
        let letters = el.word().letters();
        if letters.is_empty() {
            return Ok(self.normalize(DiElt::new(0, self.base)));
        }
        for (i, &g) in letters.iter().enumerate() {
            let ok = (g == self.base || g == self.other)
                && (i == 0 || letters[i - 1] != g);
            if !ok {
                return Err(Error::Input(format!(
                    "not an alternating word on the table's generators"
                )));
            }
        }
        Ok(self.normalize(DiElt::new(letters.len() as u32, letters[0])))
    }

    /// The raise choices as a dot-joined string of generator names, `-` when
    /// there are none.
    pub fn describe(&self, matrix: &CoxeterMatrix) -> String {
        if self.raise_first.is_empty() {
            return "-".into();
        }
        self.raise_first
            .iter()
            .map(|&g| matrix.name(g))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses the output of [`Self::describe`]. The number of choices fixes
    /// the bound; `max_bound` caps how far a truncated table may reach.
    pub fn parse_choices(
        matrix: &CoxeterMatrix,
        base: Generator,
        other: Generator,
        max_bound: u32,
        text: &str,
    ) -> Result<DihedralMatching> {
        let bond = matrix.bond(base, other);
        let choices: Vec<Generator> = if text == "-" {
            Vec::new()
        } else {
            text.split('.')
                .map(|name| matrix.generator_named(name))
                .collect::<Result<_>>()?
        };
        let n = choices.len() as u32;
        let bound = match bond.finite() {
            Some(m) if n + 1 == m => m,
            _ => n + 1,
        };
        if bound > max_bound {
            return Err(Error::Input(format!(
                "dihedral table of bound {bound} exceeds the ball bound {max_bound}"
            )));
        }
        DihedralMatching::from_choices(base, other, bond, bound, choices)
    }
}

/// Caps a requested bound at a finite bond order.
fn top_cap(bond: Bond, bound: u32) -> u32 {
    match bond.finite() {
        Some(m) => m.min(bound),
        None => bound,
    }
}

fn partner(base: Generator, other: Generator, g: Generator) -> Generator {
    debug_assert!(g == base || g == other);
    if g == base {
        other
    } else {
        base
    }
}

/// All matching tables of the radius-`bound` ball of ⟨base, other⟩ with
/// φ(e) = base, in lexicographic order of their choice vectors with `base`
/// before `other` (so left multiplication comes first). A finite bond must
/// fit inside the bound.
pub fn enumerate_dihedral_matchings(
    matrix: &CoxeterMatrix,
    base: Generator,
    other: Generator,
    bound: u32,
) -> Result<Vec<DihedralMatching>> {
    let bond = matrix.bond(base, other);
    if bound < 2 {
        return Err(Error::Input("dihedral enumeration needs bound ≥ 2".into()));
    }
    if let Some(m) = bond.finite() {
        if m > bound {
            return Err(Error::BallTooSmall(format!(
                "dihedral group on {} and {} has bond order {m}, bound is {bound}",
                matrix.name(base),
                matrix.name(other)
            )));
        }
    }
    let eff = top_cap(bond, bound);
    let n = table_len(bond, eff);
    let free = if bond.finite() == Some(eff) { n - 1 } else { n };
    assert!(free < 62, "dihedral table too deep to enumerate");
    let mut out = Vec::with_capacity(1usize << free);
    for mask in 0..(1u64 << free) {
        let mut choices = Vec::with_capacity(n);
        for i in 0..free {
            let bit = (mask >> (free - 1 - i)) & 1;
            choices.push(if bit == 0 { base } else { other });
        }
        if n > free {
            choices.push(base);
        }
        out.push(DihedralMatching::from_choices(base, other, bond, eff, choices)?);
    }
    Ok(out)
}

/// One matching table per generator s ≠ base, all sending e to `base`. Such
/// a family determines at most one maximal matching of the ambient group,
/// and every maximal matching restricts to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingFamily {
    base: Generator,
    members: Vec<DihedralMatching>,
}

impl MatchingFamily {
    /// Assembles a family after checking it is one table per non-base
    /// generator, all sharing the base.
    pub fn new(base: Generator, mut members: Vec<DihedralMatching>) -> Result<MatchingFamily> {
        members.sort_by_key(|t| t.other().index());
        for pair in members.windows(2) {
            if pair[0].other() == pair[1].other() {
                return Err(Error::Input("two tables for one generator".into()));
            }
        }
        if members.iter().any(|t| t.base() != base || t.other() == base) {
            return Err(Error::Input("family member on the wrong generator pair".into()));
        }
        Ok(MatchingFamily { base, members })
    }

    /// The family of right-multiplication tables: extends to x ↦ x·base.
    pub fn right_mult(matrix: &CoxeterMatrix, base: Generator, bound: u32) -> Result<MatchingFamily> {
        let members = matrix
            .generators()
            .filter(|&s| s != base)
            .map(|s| DihedralMatching::right_mult(base, s, matrix.bond(base, s), bound))
            .collect::<Result<_>>()?;
        MatchingFamily::new(base, members)
    }

    /// The family of left-multiplication tables: extends to x ↦ base·x.
    pub fn left_mult(matrix: &CoxeterMatrix, base: Generator, bound: u32) -> Result<MatchingFamily> {
        let members = matrix
            .generators()
            .filter(|&s| s != base)
            .map(|s| DihedralMatching::left_mult(base, s, matrix.bond(base, s), bound))
            .collect::<Result<_>>()?;
        MatchingFamily::new(base, members)
    }

    /// Every family over the given base: the cartesian product of the
    /// per-generator enumerations, odometer order with the last generator
    /// fastest. Finite bonds must fit inside the bound.
    pub fn enumerate(
        matrix: &CoxeterMatrix,
        base: Generator,
        bound: u32,
    ) -> Result<Vec<MatchingFamily>> {
        let per_gen: Vec<Vec<DihedralMatching>> = matrix
            .generators()
            .filter(|&s| s != base)
            .map(|s| enumerate_dihedral_matchings(matrix, base, s, bound))
            .collect::<Result<_>>()?;
        let total: usize = per_gen.iter().map(|v| v.len()).product();
        let mut out = Vec::with_capacity(total);
        let mut index = vec![0usize; per_gen.len()];
        loop {
            let members: Vec<DihedralMatching> = per_gen
                .iter()
                .zip(&index)
                .map(|(list, &i)| list[i].clone())
                .collect();
            out.push(MatchingFamily::new(base, members)?);
            let mut pos = per_gen.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                index[pos] += 1;
                if index[pos] < per_gen[pos].len() {
                    break;
                }
                index[pos] = 0;
            }
        }
    }

    pub fn base(&self) -> Generator {
        self.base
    }

    /// Members ascending by their non-base generator.
    pub fn members(&self) -> &[DihedralMatching] {
        &self.members
    }

    /// The table on ⟨base, s⟩.
    pub fn member(&self, s: Generator) -> Option<&DihedralMatching> {
        self.members.iter().find(|t| t.other() == s)
    }

    /// The family of the reversed matching x ↦ φ(x⁻¹)⁻¹.
    pub fn reversed(&self) -> MatchingFamily {
        MatchingFamily {
            base: self.base,
            members: self.members.iter().map(|t| t.reversed()).collect(),
        }
    }

    pub fn is_right_mult(&self) -> bool {
        self.members.iter().all(|t| t.is_right_mult())
    }

    pub fn is_left_mult(&self) -> bool {
        self.members.iter().all(|t| t.is_left_mult())
    }

    /// A compact readable form: `base=a;b=a.b;c=a`, members in generator
    /// order, each listing its raise choices.
    pub fn label(&self, matrix: &CoxeterMatrix) -> String {
        let mut parts = vec![format!("base={}", matrix.name(self.base))];
        for t in &self.members {
            parts.push(format!("{}={}", matrix.name(t.other()), t.describe(matrix)));
        }
        parts.join(";")
    }

    /// Parses the output of [`Self::label`]. Every non-base generator must
    /// get exactly one table; truncated tables may not exceed `max_bound`.
    pub fn parse(matrix: &CoxeterMatrix, max_bound: u32, text: &str) -> Result<MatchingFamily> {
        let mut base = None;
        let mut tables: BTreeMap<usize, &str> = BTreeMap::new();
        for part in text.split(';') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("expected `name=value` in `{part}`")))?;
            if key == "base" {
                if base.replace(matrix.generator_named(value)?).is_some() {
                    return Err(Error::Input("base named twice".into()));
                }
            } else {
                let s = matrix.generator_named(key)?;
                if tables.insert(s.index(), value).is_some() {
                    return Err(Error::Input(format!("generator `{key}` named twice")));
                }
            }
        }
        let base = base.ok_or_else(|| Error::Input("family spec names no base".into()))?;
        let mut members = Vec::new();
        for s in matrix.generators().filter(|&s| s != base) {
            let text = tables.remove(&s.index()).ok_or_else(|| {
                Error::Input(format!("family spec misses generator `{}`", matrix.name(s)))
            })?;
            members.push(DihedralMatching::parse_choices(matrix, base, s, max_bound, text)?);
        }
        if let Some((&idx, _)) = tables.iter().next() {
            return Err(Error::Input(format!(
                "family spec lists a table for the base `{}`",
                matrix.name(Generator(idx as u8))
            )));
        }
        MatchingFamily::new(base, members)
    }

    /// JSON form `{"base": "a", "choices": {"b": "a.b", "c": "a"}}`.
    pub fn to_json(&self, matrix: &CoxeterMatrix) -> Value {
        let choices: BTreeMap<String, String> = self
            .members
            .iter()
            .map(|t| (matrix.name(t.other()).to_string(), t.describe(matrix)))
            .collect();
        json!({ "base": matrix.name(self.base), "choices": choices })
    }

    /// Parses the output of [`Self::to_json`].
    pub fn from_json(matrix: &CoxeterMatrix, max_bound: u32, value: &Value) -> Result<MatchingFamily> {
        let base_name = value
            .get("base")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Input("family JSON misses `base`".into()))?;
        let base = matrix.generator_named(base_name)?;
        let choices = value
            .get("choices")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Input("family JSON misses `choices`".into()))?;
        let mut members = Vec::new();
        let mut seen = 0usize;
        for s in matrix.generators().filter(|&s| s != base) {
            let text = choices
                .get(matrix.name(s))
                .and_then(Value::as_str)
                .ok_or_else(|| {
                    Error::Input(format!("family JSON misses generator `{}`", matrix.name(s)))
                })?;
            members.push(DihedralMatching::parse_choices(matrix, base, s, max_bound, text)?);
            seen += 1;
        }
        if choices.len() != seen {
            return Err(Error::Input(
                "family JSON lists a table for the base or an unknown generator".into(),
            ));
        }
        MatchingFamily::new(base, members)
    }

    /// Orders families by their choice vectors, generator by generator.
    pub fn cmp_by_choices(&self, other: &MatchingFamily) -> Ordering {
        let key = |f: &MatchingFamily| -> Vec<(usize, Vec<u8>)> {
            f.members
                .iter()
                .map(|t| (t.other().index(), t.choices().iter().map(|g| g.0).collect()))
                .collect()
        };
        key(self).cmp(&key(other))
    }
}

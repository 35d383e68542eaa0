//! Words in the generators and canonical-form group elements.

use std::cmp::Ordering;

use crate::coxeter::matrix::{CoxeterMatrix, GenSet, Generator};
use crate::Result;

/// A finite sequence of generators, not necessarily reduced.
///
/// Ordering is lexicographic on generator indices; among words of equal
/// length this is exactly the tie-break used for canonical forms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Generator>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with_pushed(&self, s: Generator) -> Word {
        let mut letters = self.0.clone();
        letters.push(s);
        Word(letters)
    }

    pub fn with_prepended(&self, s: Generator) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(s);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// The set of letters occurring in the word.
    pub fn support(&self) -> GenSet {
        self.0.iter().copied().collect()
    }

    /// Compares by length first, then lexicographically.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }

    /// Parses a dot-joined word such as `"a.b.a"`. The empty string denotes
    /// the identity, and so does `"e"` unless a generator is named `e`.
    pub fn parse(matrix: &CoxeterMatrix, text: &str) -> Result<Word> {
        if text.is_empty() || (text == "e" && !matrix.has_generator_named_e()) {
            return Ok(Word::empty());
        }
        let letters = text
            .split('.')
            .map(|name| matrix.generator_named(name))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(letters))
    }

    /// Renders the word as dot-joined generator names. The identity prints as
    /// `"e"` unless a generator is named `e`, in which case it prints empty.
    pub fn display(&self, matrix: &CoxeterMatrix) -> String {
        if self.is_empty() {
            return if matrix.has_generator_named_e() {
                String::new()
            } else {
                "e".into()
            };
        }
        self.0
            .iter()
            .map(|&g| matrix.name(g))
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// A group element in canonical reduced-word form.
///
/// The canonical word is the ShortLex-least reduced expression: among all
/// reduced words for the element (necessarily of equal length), the
/// lexicographically least under the matrix's generator index order. Two
/// elements are equal exactly when their canonical words are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(Word);

impl Element {
    pub fn identity() -> Element {
        Element(Word::empty())
    }

    /// Wraps a word already known to be canonical. Only reduction and ball
    /// construction may certify that, hence the crate-private visibility.
    pub(crate) fn from_canonical(word: Word) -> Element {
        Element(word)
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> GenSet {
        self.0.support()
    }

    /// Compares by length first, then lexicographically.
    pub fn shortlex_cmp(&self, other: &Element) -> Ordering {
        self.0.shortlex_cmp(&other.0)
    }

    pub fn display(&self, matrix: &CoxeterMatrix) -> String {
        self.0.display(matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::matrix::Bond;

    fn ab() -> CoxeterMatrix {
        CoxeterMatrix::dihedral_named(Bond::Finite(3), "a", "b").unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let m = ab();
        let w = Word::parse(&m, "a.b.a").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.display(&m), "a.b.a");
        assert_eq!(Word::parse(&m, "").unwrap(), Word::empty());
        assert_eq!(Word::parse(&m, "e").unwrap(), Word::empty());
        assert_eq!(Word::empty().display(&m), "e");
        assert!(Word::parse(&m, "a.x").is_err());
    }

    #[test]
    fn identity_text02_respects_generator_named_e() {
        let m = CoxeterMatrix::with_names(&[vec![1, 2], vec![2, 1]], vec!["e".into(), "f".into()])
            .unwrap();
        let w = Word::parse(&m, "e").unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(Word::empty().display(&m), "");
    }

    #[test]
    fn word_helpers() {
        let m = ab();
        let w = Word::parse(&m, "a.b").unwrap();
        assert_eq!(w.reversed().display(&m), "b.a");
        assert_eq!(w.with_pushed(Generator(0)).display(&m), "a.b.a");
        assert_eq!(w.with_prepended(Generator(1)).display(&m), "b.a.b");
        assert_eq!(w.support(), GenSet::pair(Generator(0), Generator(1)));
        let shorter = Word::parse(&m, "b").unwrap();
        assert_eq!(shorter.shortlex_cmp(&w), Ordering::Less);
        assert!(shorter > w); // plain lexicographic order differs from ShortLex
    }
}

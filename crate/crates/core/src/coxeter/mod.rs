//! Coxeter systems: matrices, words, canonical forms, and bounded balls.

pub mod ball;
pub mod matrix;
pub mod reduce;
pub mod word;

pub use ball::{dihedral_word, AltSide, ElementId, Flattening, GroupBall, Mult};
pub use matrix::{Bond, CoxeterMatrix, GenSet, Generator, MAX_RANK};
pub use reduce::{multiply, multiply_with_limit, reduce, reduce_with_limit, DEFAULT_NODE_BUDGET};
pub use word::{Element, Word};

/// Which side of an element a generator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

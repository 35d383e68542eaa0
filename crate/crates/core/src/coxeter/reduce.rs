//! Exact word reduction to canonical form.
//!
//! Reduction alternates two phases. First, adjacent equal letters are
//! cancelled (a single stack pass removes nested pairs). Then the braid
//! closure — every word reachable by replacing an alternating factor
//! `stst…` of length `m_st` with `tsts…` — is explored breadth-first. If any
//! word in the closure exposes an adjacent equal pair, the word shortens and
//! the process restarts; otherwise the input was reduced and the closure is
//! precisely the set of its reduced expressions, of which the
//! lexicographically least is the canonical form. Exactness holds for
//! arbitrary bond orders, including infinite ones, and uses no numerics.

use std::collections::{HashSet, VecDeque};

use crate::coxeter::matrix::{Bond, CoxeterMatrix, Generator};
use crate::coxeter::word::{Element, Word};
use crate::coxeter::Side;
use crate::{Error, Result};

/// Default cap on the number of braid-closure nodes a single reduction may
/// explore before giving up.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// Reduces a word to its canonical element under the default node budget.
pub fn reduce(matrix: &CoxeterMatrix, word: &Word) -> Result<Element> {
    reduce_with_limit(matrix, word, DEFAULT_NODE_BUDGET)
}

/// Reduces a word to its canonical element, exploring at most `limit`
/// braid-closure nodes across all restarts.
pub fn reduce_with_limit(matrix: &CoxeterMatrix, word: &Word, limit: u64) -> Result<Element> {
    let mut spent: u64 = 0;
    let mut current = cancel_adjacent(word.letters());
    'restart: loop {
        if current.len() <= 1 {
            return Ok(Element::from_canonical(Word::new(current)));
        }
        let mut best = current.clone();
        let mut seen: HashSet<Vec<Generator>> = HashSet::new();
        seen.insert(current.clone());
        let mut queue: VecDeque<Vec<Generator>> = VecDeque::new();
        queue.push_back(current.clone());
        while let Some(w) = queue.pop_front() {
            for neighbor in braid_neighbors(matrix, &w) {
                if seen.contains(&neighbor) {
                    continue;
                }
                if has_adjacent_pair(&neighbor) {
                    current = cancel_adjacent(&neighbor);
                    continue 'restart;
                }
                spent += 1;
                if spent > limit {
                    return Err(Error::BudgetExceeded { limit });
                }
                if neighbor < best {
                    best = neighbor.clone();
                }
                seen.insert(neighbor.clone());
                queue.push_back(neighbor);
            }
        }
        // No word in the closure shortens, so the word is reduced and the
        // closure holds every reduced expression of the element.
        return Ok(Element::from_canonical(Word::new(best)));
    }
}

/// Multiplies an element by a generator on the given side.
pub fn multiply(
    matrix: &CoxeterMatrix,
    x: &Element,
    s: Generator,
    side: Side,
) -> Result<Element> {
    multiply_with_limit(matrix, x, s, side, DEFAULT_NODE_BUDGET)
}

pub fn multiply_with_limit(
    matrix: &CoxeterMatrix,
    x: &Element,
    s: Generator,
    side: Side,
    limit: u64,
) -> Result<Element> {
    let word = match side {
        Side::Left => x.word().with_prepended(s),
        Side::Right => x.word().with_pushed(s),
    };
    let product = reduce_with_limit(matrix, &word, limit)?;
    debug_assert!(product.len().abs_diff(x.len()) == 1);
    Ok(product)
}

/// Removes all adjacent equal pairs, including those revealed by earlier
/// removals, in one stack pass.
fn cancel_adjacent(letters: &[Generator]) -> Vec<Generator> {
    let mut stack: Vec<Generator> = Vec::with_capacity(letters.len());
    for &g in letters {
        if stack.last() == Some(&g) {
            stack.pop();
        } else {
            stack.push(g);
        }
    }
    stack
}

fn has_adjacent_pair(letters: &[Generator]) -> bool {
    letters.windows(2).any(|w| w[0] == w[1])
}

/// All words obtained from `w` by one braid move: an alternating factor
/// `stst…` of length exactly `m_st` replaced by `tsts…`.
fn braid_neighbors(matrix: &CoxeterMatrix, w: &[Generator]) -> Vec<Vec<Generator>> {
    let mut out = Vec::new();
    let n = w.len();
    for i in 0..n.saturating_sub(1) {
        let s = w[i];
        let t = w[i + 1];
        if s == t {
            continue;
        }
        let Bond::Finite(m) = matrix.bond(s, t) else {
            continue;
        };
        let m = m as usize;
        if i + m > n {
            continue;
        }
        let alternates = (0..m).all(|k| w[i + k] == if k % 2 == 0 { s } else { t });
        if !alternates {
            continue;
        }
        let mut neighbor = w.to_vec();
        for k in 0..m {
            neighbor[i + k] = if k % 2 == 0 { t } else { s };
        }
        out.push(neighbor);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(m: u32) -> CoxeterMatrix {
        CoxeterMatrix::with_names(
            &[vec![1, m], vec![m, 1]],
            vec!["s".into(), "t".into()],
        )
        .unwrap()
    }

    fn red(matrix: &CoxeterMatrix, text: &str) -> String {
        let w = Word::parse(matrix, text).unwrap();
        reduce(matrix, &w).unwrap().display(matrix)
    }

    #[test]
    fn involution_cancels() {
        let m = st(3);
        assert_eq!(red(&m, "s.s"), "e");
        assert_eq!(red(&m, "s.t.t.s"), "e");
        assert_eq!(red(&m, "t.s.s.t.t"), "t");
    }

    #[test]
    fn braid_move_gives_shortlex_canonical() {
        let m = st(3);
        assert_eq!(red(&m, "t.s.t"), "s.t.s");
        assert_eq!(red(&m, "s.t.s"), "s.t.s");
    }

    #[test]
    fn deletion_found_through_braid_closure() {
        let m = st(3);
        // stst = s(tst) = s(sts) = ts.
        assert_eq!(red(&m, "s.t.s.t"), "t.s");
        // The longest element times s.
        assert_eq!(red(&m, "s.t.s.s"), "s.t");
    }

    #[test]
    fn bond_four_words_stay_put_until_length_four() {
        let m = st(4);
        assert_eq!(red(&m, "s.t.s"), "s.t.s");
        assert_eq!(red(&m, "t.s.t.s"), "s.t.s.t");
        assert_eq!(red(&m, "s.t.s.t.s"), "t.s.t");
    }

    #[test]
    fn infinite_bond_has_no_braid_moves() {
        let m = st(0);
        assert_eq!(red(&m, "t.s.t.s.t"), "t.s.t.s.t");
        assert_eq!(red(&m, "t.s.s.t"), "e");
    }

    #[test]
    fn budget_is_enforced() {
        let m = st(3);
        let w = Word::parse(&m, "s.t.s").unwrap();
        match reduce_with_limit(&m, &w, 0) {
            Err(Error::BudgetExceeded { limit: 0 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn multiply_adjusts_length_by_one() {
        let m = st(4);
        let sts = reduce(&m, &Word::parse(&m, "s.t.s").unwrap()).unwrap();
        let s = Generator(0);
        let t = Generator(1);
        let left = multiply(&m, &sts, s, Side::Left).unwrap();
        assert_eq!(left.display(&m), "t.s");
        let right = multiply(&m, &sts, t, Side::Right).unwrap();
        assert_eq!(right.len(), 4);
        assert_eq!(right.display(&m), "s.t.s.t");
    }

    #[test]
    fn reduce_is_idempotent_on_samples() {
        for bond in [2, 3, 4, 5, 0] {
            let m = st(bond);
            for text in ["s.t.s.t.s.t", "t.t.s.t.s.s.t", "t.s.t.s.t.s.t.s"] {
                let w = Word::parse(&m, text).unwrap();
                let e1 = reduce(&m, &w).unwrap();
                let e2 = reduce(&m, e1.word()).unwrap();
                assert_eq!(e1, e2);
            }
        }
    }
}

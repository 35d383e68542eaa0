//! Coxeter matrices, generators, and generator sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported rank; generator sets are packed into a `u64` bitmask.
pub const MAX_RANK: usize = 64;

/// A generator of a Coxeter system, identified by its index into the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(pub u8);

impl Generator {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The order of `st` for two distinct generators `s`, `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl Bond {
    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, Bond::Finite(_))
    }

    /// The bond order if finite.
    #[inline]
    pub fn finite(self) -> Option<u32> {
        match self {
            Bond::Finite(m) => Some(m),
            Bond::Infinite => None,
        }
    }

    /// File encoding: infinity is stored as 0 (no finite bond order is 0).
    pub fn to_code(self) -> u32 {
        match self {
            Bond::Finite(m) => m,
            Bond::Infinite => 0,
        }
    }

    pub fn from_code(code: u32) -> Bond {
        if code == 0 {
            Bond::Infinite
        } else {
            Bond::Finite(code)
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{m}"),
            Bond::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of generators, packed as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GenSet(u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(rank: usize) -> GenSet {
        debug_assert!(rank <= MAX_RANK);
        if rank == 64 {
            GenSet(u64::MAX)
        } else {
            GenSet((1u64 << rank) - 1)
        }
    }

    pub fn single(g: Generator) -> GenSet {
        GenSet(1u64 << g.0)
    }

    pub fn pair(s: Generator, t: Generator) -> GenSet {
        GenSet((1u64 << s.0) | (1u64 << t.0))
    }

    #[inline]
    pub fn contains(self, g: Generator) -> bool {
        self.0 & (1u64 << g.0) != 0
    }

    #[inline]
    pub fn insert(&mut self, g: Generator) {
        self.0 |= 1u64 << g.0;
    }

    pub fn with(mut self, g: Generator) -> GenSet {
        self.insert(g);
        self
    }

    pub fn remove(&mut self, g: Generator) {
        self.0 &= !(1u64 << g.0);
    }

    pub fn without(mut self, g: Generator) -> GenSet {
        self.remove(g);
        self
    }

    pub fn union(self, other: GenSet) -> GenSet {
        GenSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GenSet) -> GenSet {
        GenSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in index order.
    pub fn iter(self) -> impl Iterator<Item = Generator> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as u8;
                bits &= bits - 1;
                Some(Generator(i))
            }
        })
    }
}

impl FromIterator<Generator> for GenSet {
    fn from_iter<T: IntoIterator<Item = Generator>>(iter: T) -> Self {
        let mut set = GenSet::EMPTY;
        for g in iter {
            set.insert(g);
        }
        set
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|g| g.0)).finish()
    }
}

/// The symmetric matrix of bond orders defining a Coxeter system `(W, S)`.
///
/// The diagonal is 1, off-diagonal entries are at least 2 or infinite. The
/// generator order used for all canonical (ShortLex) choices is the index
/// order of this matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    names: Vec<String>,
    bonds: Vec<Bond>, // row-major rank × rank
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rank: usize,
    m: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl CoxeterMatrix {
    /// Builds a matrix from bond codes (0 encodes an infinite bond), with
    /// default generator names `s0`, `s1`, ...
    pub fn new(m: &[Vec<u32>]) -> Result<Self> {
        let names = (0..m.len()).map(|i| format!("s{i}")).collect();
        Self::with_names(m, names)
    }

    /// Builds a matrix from bond codes with explicit generator names.
    pub fn with_names(m: &[Vec<u32>], names: Vec<String>) -> Result<Self> {
        let rank = m.len();
        if rank == 0 {
            return Err(Error::InvalidMatrix("rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::InvalidMatrix(format!(
                "rank {rank} exceeds the supported maximum {MAX_RANK}"
            )));
        }
        if names.len() != rank {
            return Err(Error::InvalidMatrix(format!(
                "{} names given for rank {rank}",
                names.len()
            )));
        }
        for name in &names {
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
            {
                return Err(Error::InvalidMatrix(format!(
                    "generator name `{name}` must be nonempty and use only \
                     letters, digits, `_`, or `'`"
                )));
            }
        }
        if names
            .iter()
            .enumerate()
            .any(|(i, n)| names[..i].contains(n))
        {
            return Err(Error::InvalidMatrix("duplicate generator name".into()));
        }
        let mut bonds = vec![Bond::Finite(1); rank * rank];
        for (i, row) in m.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {rank}",
                    row.len()
                )));
            }
            for (j, &code) in row.iter().enumerate() {
                if i == j && code != 1 {
                    return Err(Error::InvalidMatrix(format!(
                        "diagonal entry ({i},{i}) must be 1, found {code}"
                    )));
                }
                if i != j && code == 1 {
                    return Err(Error::InvalidMatrix(format!(
                        "off-diagonal entry ({i},{j}) must be at least 2 or 0 (infinite)"
                    )));
                }
                if m[j][i] != code {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
                bonds[i * rank + j] = Bond::from_code(code);
            }
        }
        Ok(CoxeterMatrix { names, bonds })
    }

    /// The rank-2 matrix with the given bond between the two generators.
    pub fn dihedral(m: Bond) -> Self {
        let c = m.to_code();
        CoxeterMatrix::new(&[vec![1, c], vec![c, 1]]).expect("valid dihedral matrix")
    }

    /// Like [`CoxeterMatrix::dihedral`] but with chosen generator names.
    pub fn dihedral_named(m: Bond, a: &str, b: &str) -> Result<Self> {
        let c = m.to_code();
        CoxeterMatrix::with_names(&[vec![1, c], vec![c, 1]], vec![a.into(), b.into()])
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn bond(&self, s: Generator, t: Generator) -> Bond {
        self.bonds[s.index() * self.rank() + t.index()]
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> {
        (0..self.rank() as u8).map(Generator)
    }

    pub fn generator_set(&self) -> GenSet {
        GenSet::full(self.rank())
    }

    pub fn name(&self, g: Generator) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_named(&self, name: &str) -> Result<Generator> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Generator(i as u8))
            .ok_or_else(|| Error::UnknownGenerator(name.into()))
    }

    /// Whether some generator is literally named "e" (this disables the use
    /// of "e" as the identity word in the text syntax).
    pub fn has_generator_named_e(&self) -> bool {
        self.names.iter().any(|n| n == "e")
    }

    pub fn max_finite_bond(&self) -> Option<u32> {
        let rank = self.rank();
        let mut max = None;
        for i in 0..rank {
            for j in (i + 1)..rank {
                if let Bond::Finite(m) = self.bonds[i * rank + j] {
                    max = Some(max.map_or(m, |x: u32| x.max(m)));
                }
            }
        }
        max
    }

    pub fn has_infinite_bond(&self) -> bool {
        self.bonds.iter().any(|b| !b.is_finite())
    }

    /// All off-diagonal bonds are 2 or 3.
    pub fn is_simply_laced(&self) -> bool {
        let rank = self.rank();
        (0..rank).all(|i| {
            (0..rank).all(|j| i == j || matches!(self.bonds[i * rank + j], Bond::Finite(2 | 3)))
        })
    }

    /// The matrix obtained by renaming generator `i` to position `perm[i]`.
    ///
    /// Names stay attached to positions, so the same word string denotes a
    /// different group element after relabeling; the map `word ↦ permuted
    /// word` is a group isomorphism onto the relabeled system.
    pub fn relabel(&self, perm: &[usize]) -> Result<CoxeterMatrix> {
        let rank = self.rank();
        let mut seen = vec![false; rank];
        if perm.len() != rank || perm.iter().any(|&p| p >= rank || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Input(format!(
                "relabeling must be a permutation of 0..{rank}"
            )));
        }
        let mut m = vec![vec![1u32; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                m[perm[i]][perm[j]] = self.bonds[i * rank + j].to_code();
            }
        }
        CoxeterMatrix::with_names(&m, self.names.clone())
    }

    fn repr(&self) -> MatrixRepr {
        let rank = self.rank();
        MatrixRepr {
            rank,
            m: (0..rank)
                .map(|i| (0..rank).map(|j| self.bonds[i * rank + j].to_code()).collect())
                .collect(),
            names: Some(self.names.clone()),
        }
    }

    /// Canonical JSON form: fixed field order, names always present. Used both
    /// for files and as the hashing preimage for cache versioning.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.repr()).expect("matrix serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let repr: MatrixRepr = serde_json::from_str(text)?;
        if repr.m.len() != repr.rank {
            return Err(Error::InvalidMatrix(format!(
                "declared rank {} but matrix has {} rows",
                repr.rank,
                repr.m.len()
            )));
        }
        match repr.names {
            Some(names) => CoxeterMatrix::with_names(&repr.m, names),
            None => CoxeterMatrix::new(&repr.m),
        }
    }
}

impl Serialize for CoxeterMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoxeterMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let built = match repr.names {
            Some(names) => CoxeterMatrix::with_names(&repr.m, names),
            None => CoxeterMatrix::new(&repr.m),
        };
        built.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_reads_bonds() {
        let m = CoxeterMatrix::new(&[vec![1, 3, 2], vec![3, 1, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.bond(Generator(0), Generator(1)), Bond::Finite(3));
        assert_eq!(m.bond(Generator(1), Generator(2)), Bond::Infinite);
        assert_eq!(m.bond(Generator(2), Generator(2)), Bond::Finite(1));
        assert_eq!(m.max_finite_bond(), Some(3));
        assert!(m.has_infinite_bond());
        assert!(!m.is_simply_laced());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CoxeterMatrix::new(&[]).is_err());
        assert!(CoxeterMatrix::new(&[vec![2]]).is_err());
        assert!(CoxeterMatrix::new(&[vec![1, 1], vec![1, 1]]).is_err());
        assert!(CoxeterMatrix::new(&[vec![1, 3], vec![4, 1]]).is_err());
        assert!(CoxeterMatrix::new(&[vec![1, 3]]).is_err());
        assert!(
            CoxeterMatrix::with_names(&[vec![1, 2], vec![2, 1]], vec!["a".into(), "a".into()])
                .is_err()
        );
        assert!(
            CoxeterMatrix::with_names(&[vec![1, 2], vec![2, 1]], vec!["a.b".into(), "c".into()])
                .is_err()
        );
    }

    #[test]
    fn json_round_trip_and_infinity_encoding() {
        let m = CoxeterMatrix::with_names(
            &[vec![1, 0], vec![0, 1]],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let text = m.to_json_string();
        assert!(text.contains("\"m\":[[1,0],[0,1]]"));
        let back = CoxeterMatrix::from_json_str(&text).unwrap();
        assert_eq!(back, m);

        let default_names = CoxeterMatrix::from_json_str(r#"{"rank":2,"m":[[1,3],[3,1]]}"#).unwrap();
        assert_eq!(default_names.name(Generator(0)), "s0");
        assert_eq!(default_names.bond(Generator(0), Generator(1)), Bond::Finite(3));
    }

    #[test]
    fn relabeling_permutes_bonds() {
        let m = CoxeterMatrix::with_names(
            &[vec![1, 3, 4], vec![3, 1, 2], vec![4, 2, 1]],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        // Send 0 -> 1, 1 -> 2, 2 -> 0.
        let r = m.relabel(&[1, 2, 0]).unwrap();
        assert_eq!(r.bond(Generator(1), Generator(2)), Bond::Finite(3));
        assert_eq!(r.bond(Generator(1), Generator(0)), Bond::Finite(4));
        assert_eq!(r.bond(Generator(2), Generator(0)), Bond::Finite(2));
        assert!(m.relabel(&[0, 0, 1]).is_err());
    }

    #[test]
    fn genset_operations() {
        let a = Generator(0);
        let c = Generator(2);
        let set = GenSet::pair(a, c);
        assert!(set.contains(a) && set.contains(c) && !set.contains(Generator(1)));
        assert_eq!(set.len(), 2);
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![a, c]);
        assert!(set.is_subset(GenSet::full(3)));
        assert!(!GenSet::full(3).is_subset(set));
        assert_eq!(set.without(a), GenSet::single(c));
    }
}

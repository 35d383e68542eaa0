//! Exact polynomials in `q` and the R-/Kazhdan–Lusztig computations.
//!
//! R-polynomials are primary: they follow the two-case descent recursion
//! directly. KL polynomials are derived from them through the inversion
//! relation — the unique family with bounded degree whose reversal residual
//! reproduces the R-sums. After solving, the relation is re-substituted and
//! asserted, so a silently wrong table cannot escape this module.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coxeter::{ElementId, Element, GroupBall, Side};
use crate::{Error, Result};

/// Integer polynomial in `q`, coefficients low degree first, no trailing
/// zeros; the zero polynomial is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly(Vec::new())
    }

    pub fn one() -> IntPoly {
        IntPoly(vec![BigInt::from(1)])
    }

    /// `q − 1`, the workhorse of the R-recursion.
    pub fn q_minus_one() -> IntPoly {
        IntPoly::from_i64s(&[-1, 1])
    }

    /// `c·q^deg`.
    pub fn monomial(c: i64, deg: usize) -> IntPoly {
        if c == 0 {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::from(0); deg + 1];
        coeffs[deg] = BigInt::from(c);
        IntPoly(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> IntPoly {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> IntPoly {
        let mut p = IntPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// Value at `q = 1` (the coefficient sum).
    pub fn eval_one(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut coeffs = vec![BigInt::from(0); self.0.len().max(other.0.len())];
        for (k, c) in self.0.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.0.iter().enumerate() {
            coeffs[k] += c;
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut coeffs = vec![BigInt::from(0); self.0.len().max(other.0.len())];
        for (k, c) in self.0.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.0.iter().enumerate() {
            coeffs[k] -= c;
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::from(0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    /// Multiplication by `q^k`.
    pub fn shifted(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::from(0); k];
        coeffs.extend(self.0.iter().cloned());
        IntPoly(coeffs)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Keeps only the coefficients of degree ≤ `bound`.
    pub fn truncated(&self, bound: usize) -> IntPoly {
        IntPoly::from_coeffs(self.0.iter().take(bound + 1).cloned().collect())
    }

    /// `q^d · p(1/q)`: reverses the coefficients over degree `d`. Requires
    /// `deg p ≤ d` so the result stays polynomial.
    pub fn reversed_over(&self, d: usize) -> IntPoly {
        assert!(
            self.0.len() <= d + 1,
            "degree {:?} exceeds the reversal window {d}",
            self.degree()
        );
        let mut coeffs = vec![BigInt::from(0); d + 1];
        for (k, c) in self.0.iter().enumerate() {
            coeffs[d - k] = c.clone();
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for k in (0..self.0.len()).rev() {
            let c = &self.0[k];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
            let show_coeff = k == 0 || mag != BigInt::from(1);
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            // Numbers when they fit, decimal strings beyond i64 range.
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<CoeffRepr>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(raw.len());
        for c in raw {
            coeffs.push(match c {
                CoeffRepr::Small(v) => BigInt::from(v),
                CoeffRepr::Big(text) => text
                    .parse::<BigInt>()
                    .map_err(|e| D::Error::custom(format!("bad coefficient `{text}`: {e}")))?,
            });
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }
}

/// Memoized polynomial computations over one ball. Single writer; create
/// separate contexts for concurrent work over the same ball.
pub struct PolyCtx<'a> {
    ball: &'a GroupBall,
    r_left: HashMap<(u32, u32), IntPoly>,
    r_right: HashMap<(u32, u32), IntPoly>,
    kl: HashMap<(u32, u32), IntPoly>,
}

impl<'a> PolyCtx<'a> {
    pub fn new(ball: &'a GroupBall) -> PolyCtx<'a> {
        PolyCtx {
            ball,
            r_left: HashMap::new(),
            r_right: HashMap::new(),
            kl: HashMap::new(),
        }
    }

    pub fn ball(&self) -> &'a GroupBall {
        self.ball
    }

    /// R_{x,y}, via the left-descent recursion.
    pub fn r_polynomial(&mut self, x: ElementId, y: ElementId) -> IntPoly {
        self.r_polynomial_via(Side::Left, x, y)
    }

    /// R_{x,y} computed with descents taken on the chosen side. Both sides
    /// give the same family; the verification suites check that.
    pub fn r_polynomial_via(&mut self, side: Side, x: ElementId, y: ElementId) -> IntPoly {
        if x == y {
            return IntPoly::one();
        }
        if !self.ball.leq(x, y) {
            return IntPoly::zero();
        }
        let key = (x.0, y.0);
        let memo = match side {
            Side::Left => &self.r_left,
            Side::Right => &self.r_right,
        };
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let s = self
            .ball
            .first_descent(y, side)
            .expect("y is above x, hence not the identity");
        let sy = self.ball.mult(y, s, side).id().unwrap();
        let value = if self.ball.mult(x, s, side).is_down() {
            let sx = self.ball.mult(x, s, side).id().unwrap();
            self.r_polynomial_via(side, sx, sy)
        } else {
            // x < y bounds len(x·s) by len(y) ≤ bound, so the raise is in the ball.
            let sx = self
                .ball
                .mult(x, s, side)
                .id()
                .expect("raised x stays within the ball below y");
            let lower = self.r_polynomial_via(side, x, sy);
            let inner = self.r_polynomial_via(side, sx, sy);
            IntPoly::q_minus_one().mul(&lower).add(&inner.shifted(1))
        };
        match side {
            Side::Left => self.r_left.insert(key, value.clone()),
            Side::Right => self.r_right.insert(key, value.clone()),
        };
        value
    }

    /// P_{x,y}: zero when incomparable, one on the diagonal, otherwise the
    /// unique polynomial of degree ≤ (len y − len x − 1)/2 with
    /// q^(len y − len x)·P(1/q) − P = Σ_{x<z≤y} R_{x,z}·P_{z,y}.
    pub fn kl_polynomial(&mut self, x: ElementId, y: ElementId) -> IntPoly {
        if x == y {
            return IntPoly::one();
        }
        if !self.ball.leq(x, y) {
            return IntPoly::zero();
        }
        let key = (x.0, y.0);
        if let Some(hit) = self.kl.get(&key) {
            return hit.clone();
        }
        let d = self.ball.len(y) - self.ball.len(x);
        let mut sum = IntPoly::zero();
        for z in self.ball.interval_below(y) {
            if z == x || !self.ball.leq(x, z) {
                continue;
            }
            let r = self.r_polynomial(x, z);
            let p = self.kl_polynomial(z, y);
            sum = sum.add(&r.mul(&p));
        }
        let value = sum.truncated((d - 1) / 2).neg();
        // The low-degree half determines P; re-substitute to certify that the
        // high half matches too. A failure here is a bug, never user input.
        let residual = value.reversed_over(d).sub(&value);
        assert!(
            residual == sum,
            "inversion relation failed at ({}, {}): residual {residual} vs sum {sum}",
            self.ball.display(x),
            self.ball.display(y),
        );
        self.kl.insert(key, value.clone());
        value
    }

    pub fn r_of_elements(&mut self, x: &Element, y: &Element) -> Result<IntPoly> {
        let x = self.ball.require(x)?;
        let y = self.ball.require(y)?;
        Ok(self.r_polynomial(x, y))
    }

    pub fn kl_of_elements(&mut self, x: &Element, y: &Element) -> Result<IntPoly> {
        let x = self.ball.require(x)?;
        let y = self.ball.require(y)?;
        Ok(self.kl_polynomial(x, y))
    }

    /// In a dihedral group R_{x,y} depends only on len(y) − len(x); this
    /// returns that common value for distance `d` and asserts the pairs
    /// agree. Errors on non-dihedral balls or when no pair realizes `d`.
    pub fn dihedral_r(&mut self, d: u32) -> Result<IntPoly> {
        if self.ball.rank() > 2 {
            return Err(Error::Input(format!(
                "dihedral R-value needs a rank ≤ 2 ball, got rank {}",
                self.ball.rank()
            )));
        }
        if d > self.ball.bound() {
            return Err(Error::Input(format!(
                "distance {d} exceeds the ball bound {}",
                self.ball.bound()
            )));
        }
        let mut common: Option<(IntPoly, ElementId, ElementId)> = None;
        for y in self.ball.ids() {
            let ly = self.ball.len(y);
            if ly < d as usize {
                continue;
            }
            for x in self.ball.interval_below(y) {
                if self.ball.len(x) + d as usize != ly {
                    continue;
                }
                let r = self.r_polynomial(x, y);
                match &common {
                    None => common = Some((r, x, y)),
                    Some((first, fx, fy)) => assert!(
                        *first == r,
                        "dihedral R at distance {d} disagrees: ({}, {}) gives {first}, ({}, {}) gives {r}",
                        self.ball.display(*fx),
                        self.ball.display(*fy),
                        self.ball.display(x),
                        self.ball.display(y),
                    ),
                }
            }
        }
        common.map(|(r, _, _)| r).ok_or_else(|| {
            Error::Input(format!("no comparable pair at distance {d} in this ball"))
        })
    }

    /// Snapshot of the memo tables with canonical-word keys, for the on-disk
    /// cache. Only left-recursion R values are persisted.
    pub fn export_tables(&self) -> (BTreeMap<String, IntPoly>, BTreeMap<String, IntPoly>) {
        let key = |&(x, y): &(u32, u32)| {
            format!(
                "{}|{}",
                self.ball.display(ElementId(x)),
                self.ball.display(ElementId(y))
            )
        };
        let r = self.r_left.iter().map(|(k, v)| (key(k), v.clone())).collect();
        let kl = self.kl.iter().map(|(k, v)| (key(k), v.clone())).collect();
        (r, kl)
    }

    /// Seeds the memo tables from a cache snapshot; unknown words are
    /// rejected as corrupt input.
    pub fn import_tables(
        &mut self,
        r: &BTreeMap<String, IntPoly>,
        kl: &BTreeMap<String, IntPoly>,
    ) -> Result<()> {
        for (table, source) in [(&mut self.r_left, r), (&mut self.kl, kl)] {
            for (pair, poly) in source {
                let (x, y) = pair
                    .split_once('|')
                    .ok_or_else(|| Error::Input(format!("bad cache key `{pair}`")))?;
                let xid = locate_display(self.ball, x)?;
                let yid = locate_display(self.ball, y)?;
                table.insert((xid.0, yid.0), poly.clone());
            }
        }
        Ok(())
    }
}

fn locate_display(ball: &GroupBall, text: &str) -> Result<ElementId> {
    let word = crate::coxeter::Word::parse(ball.matrix(), text)?;
    ball.locate(&word)?
        .ok_or_else(|| Error::OutOfBall(text.to_string()))
}

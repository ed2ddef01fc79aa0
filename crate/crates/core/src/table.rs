//! Bit-packed truth tables.
//!
//! A Boolean function on `n` variables is stored as its full list of `2^n`
//! output bits. The bit for the assignment `(b_1, …, b_n)` lives at index
//! `Σ b_i · 2^(n−i)`, so `x_1` is the most significant position: `F…F` is
//! index 0, `T…T` is index `2^n − 1`, and ascending index order is
//! lexicographic order on `(x_1, …, x_n)` with `F < T`.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on the arity of a table (2^24 bits = 2 MiB).
pub const DEFAULT_MAX_ARITY: usize = 24;

/// Largest cap that [`set_max_arity`] accepts.
pub const HARD_MAX_ARITY: usize = 32;

static MAX_ARITY: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_ARITY);

// Word count above which pointwise operations are split across the rayon pool.
const PAR_WORDS: usize = 1 << 14;

/// Current process-wide arity cap.
pub fn max_arity() -> usize {
    MAX_ARITY.load(Ordering::Relaxed)
}

/// Replace the process-wide arity cap.
pub fn set_max_arity(cap: usize) -> Result<()> {
    if cap == 0 || cap > HARD_MAX_ARITY {
        return Err(Error::InvalidCap(cap));
    }
    MAX_ARITY.store(cap, Ordering::Relaxed);
    Ok(())
}

/// Checks `min <= n <= max_arity()`.
pub fn check_arity(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::ArityTooSmall { n, min });
    }
    let cap = max_arity();
    if n > cap {
        return Err(Error::ArityOverCap { n, cap });
    }
    Ok(())
}

/// A 1-based variable index, `x_1`, `x_2`, ….
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::VarOutOfRange { index, n: 0 });
        }
        Ok(VarId(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Fails unless this variable exists in an `n`-variable function.
    pub fn check(self, n: usize) -> Result<()> {
        if self.0 as usize > n {
            return Err(Error::VarOutOfRange { index: self.0, n });
        }
        Ok(())
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A complete truth assignment to `x_1 … x_n`, `x_1` first.
///
/// The derived ordering is lexicographic with `false < true`, which matches
/// ascending table index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidAssignment(String::new()));
        }
        Ok(Assignment(values))
    }

    /// Decodes a table index. `index` must be below `2^n`.
    pub fn from_index(n: usize, index: u64) -> Self {
        debug_assert!(n >= 1 && (n >= 64 || index >> n == 0));
        Assignment((0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn all(n: usize, value: bool) -> Self {
        Assignment(vec![value; n])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, var: VarId) -> Result<bool> {
        var.check(self.arity())?;
        Ok(self.0[var.index() as usize - 1])
    }

    /// Table index of this assignment.
    pub fn index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "T" } else { "F" })?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                'T' => Ok(true),
                'F' => Ok(false),
                _ => Err(Error::InvalidAssignment(s.to_owned())),
            })
            .collect::<Result<Vec<_>>>()?;
        Assignment::new(values).map_err(|_| Error::InvalidAssignment(s.to_owned()))
    }
}

/// Exhaustive truth table of an `n`-variable Boolean function.
///
/// Tables are immutable; every operation returns a new table. Bits beyond
/// `2^n` in the last word are kept at zero so that derived equality and
/// hashing are semantic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

// Within-word patterns for the index bit `s < 6`: bit i of the word is set
// iff bit s of i is set.
const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl TruthTable {
    /// The constant function.
    pub fn constant(n: usize, value: bool) -> Result<Self> {
        check_arity(n, 1)?;
        let fill = if value { u64::MAX } else { 0 };
        let mut words = vec![fill; word_count(n)];
        words[0] &= tail_mask(n);
        Ok(TruthTable { n, words })
    }

    /// The projection onto `x_v`.
    pub fn var(n: usize, v: VarId) -> Result<Self> {
        check_arity(n, 1)?;
        v.check(n)?;
        let shift = n - v.index() as usize;
        let words = if shift < 6 {
            vec![LOW_PATTERNS[shift] & tail_mask(n); word_count(n)]
        } else {
            (0..word_count(n))
                .map(|w| if (w >> (shift - 6)) & 1 == 1 { u64::MAX } else { 0 })
                .collect()
        };
        Ok(TruthTable { n, words })
    }

    /// Builds a table by evaluating `f` at every index.
    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool + Sync) -> Result<Self> {
        check_arity(n, 1)?;
        let len = 1u64 << n;
        let words = (0..word_count(n))
            .into_par_iter()
            .map(|w| {
                let base = (w as u64) << 6;
                let mut word = 0u64;
                for bit in 0..64u64 {
                    let index = base + bit;
                    if index < len && f(index) {
                        word |= 1 << bit;
                    }
                }
                word
            })
            .collect();
        Ok(TruthTable { n, words })
    }

    /// Builds a table that is true exactly on the given indices.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut table = TruthTable::constant(n, false)?;
        for index in indices {
            if index >> n != 0 {
                return Err(Error::InvalidTable(format!(
                    "index {index} out of range for arity {n}"
                )));
            }
            table.words[(index >> 6) as usize] |= 1 << (index & 63);
        }
        Ok(table)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Number of rows, `2^n`.
    pub fn len(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Raw bit at `index`; panics if `index >= 2^n`.
    pub fn bit(&self, index: u64) -> bool {
        assert!(index < self.len(), "index {index} out of range");
        (self.words[(index >> 6) as usize] >> (index & 63)) & 1 == 1
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        self.same_arity(a.arity())?;
        Ok(self.bit(a.index()))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self, value: bool) -> bool {
        if value {
            self.count_ones() == self.len()
        } else {
            self.words.iter().all(|&w| w == 0)
        }
    }

    /// Indices of the true rows, ascending.
    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let base = (w as u64) << 6;
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(base + bit)
            })
        })
    }

    /// All satisfying assignments in ascending index order.
    pub fn truth_set(&self) -> Vec<Assignment> {
        self.ones().map(|i| Assignment::from_index(self.n, i)).collect()
    }

    /// First index where the two tables differ.
    pub fn first_difference(&self, other: &TruthTable) -> Result<Option<u64>> {
        self.same_arity(other.n)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .position(|(a, b)| a != b)
            .map(|w| ((w as u64) << 6) + (self.words[w] ^ other.words[w]).trailing_zeros() as u64))
    }

    /// Reinterprets this table over `n` variables, ignoring the new trailing
    /// variables `x_{arity+1} … x_n`.
    pub fn extend_to(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: n,
            });
        }
        let shift = n - self.n;
        TruthTable::from_fn(n, |index| self.bit(index >> shift))
    }

    pub fn and(&self, other: &TruthTable) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &TruthTable) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &TruthTable) -> Result<Self> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn negate(&self) -> Self {
        let mask = tail_mask(self.n);
        let words = if self.words.len() >= PAR_WORDS {
            self.words.par_iter().map(|w| !w & mask).collect()
        } else {
            self.words.iter().map(|w| !w & mask).collect()
        };
        TruthTable { n: self.n, words }
    }

    fn same_arity(&self, other: usize) -> Result<()> {
        if self.n != other {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: other,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &TruthTable, op: impl Fn(u64, u64) -> u64 + Sync) -> Result<Self> {
        self.same_arity(other.n)?;
        let words = if self.words.len() >= PAR_WORDS {
            self.words
                .par_iter()
                .zip(other.words.par_iter())
                .map(|(&a, &b)| op(a, b))
                .collect()
        } else {
            self.words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect()
        };
        Ok(TruthTable { n: self.n, words })
    }

    /// The bits as a `0`/`1` string in ascending index order.
    pub fn to_bit_string(&self) -> String {
        (0..self.len())
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(n: usize, bits: &str) -> Result<Self> {
        check_arity(n, 1)?;
        if bits.len() as u64 != 1u64 << n {
            return Err(Error::InvalidTable(format!(
                "expected {} bits for arity {n}, found {}",
                1u64 << n,
                bits.len()
            )));
        }
        let mut table = TruthTable::constant(n, false)?;
        for (i, c) in bits.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => table.words[i >> 6] |= 1 << (i & 63),
                _ => {
                    return Err(Error::InvalidTable(format!(
                        "unexpected character {:?} at bit {i}",
                        c as char
                    )))
                }
            }
        }
        Ok(table)
    }

    /// Two-line text form: `n=<arity>` then the bit string.
    pub fn to_text(&self) -> String {
        format!("n={}\n{}\n", self.n, self.to_bit_string())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidTable("missing header line".into()))?;
        let n = header
            .trim()
            .strip_prefix("n=")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::InvalidTable(format!("bad header {header:?}")))?;
        let bits = lines
            .next()
            .ok_or_else(|| Error::InvalidTable("missing bit line".into()))?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::InvalidTable("trailing content".into()));
        }
        TruthTable::from_bit_string(n, bits.trim())
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 8 {
            write!(f, "TruthTable(n={}, {})", self.n, self.to_bit_string())
        } else {
            write!(f, "TruthTable(n={}, ones={})", self.n, self.count_ones())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    n: usize,
    bits: String,
}

impl Serialize for TruthTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            n: self.n,
            bits: self.to_bit_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruthTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = TableRepr::deserialize(deserializer)?;
        TruthTable::from_bit_string(repr.n, &repr.bits).map_err(serde::de::Error::custom)
    }
}

impl Not for &TruthTable {
    type Output = TruthTable;

    fn not(self) -> TruthTable {
        self.negate()
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $inner:ident) => {
        /// Panics on arity mismatch; use the named method for a `Result`.
        impl $trait for &TruthTable {
            type Output = TruthTable;

            fn $method(self, rhs: &TruthTable) -> TruthTable {
                self.$inner(rhs).expect("arity mismatch")
            }
        }
    };
}

binary_op!(BitAnd, bitand, and);
binary_op!(BitOr, bitor, or);
binary_op!(BitXor, bitxor, xor);

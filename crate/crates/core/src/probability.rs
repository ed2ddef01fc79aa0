//! Exact satisfaction probabilities under independent product measures.
//!
//! Every value is an exact [`Rational`]; decimals appear only when a value
//! is rendered with [`Rational::to_decimal`].

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::{Assignment, TruthTable};

/// Significant digits used when no precision is requested.
pub const DEFAULT_DIGITS: usize = 7;

/// Arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let (numer, denom) = (numer.into(), denom.into());
        if denom.is_zero() {
            return Err(Error::InvalidRational(format!("{numer}/0")));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(Pow::pow(&self.0, exp))
    }

    pub fn is_probability(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Positional decimal with `digits` significant digits, rounded half
    /// away from zero. Zero renders as `0`.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_owned();
        }
        let x = self.0.abs();
        let ten = BigInt::from(10);
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(Pow::pow(&ten, e as u64))
            } else {
                BigRational::new(BigInt::one(), Pow::pow(&ten, (-e) as u64))
            }
        };
        // 10^e <= x < 10^(e+1)
        let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
        while pow10(e) > x {
            e -= 1;
        }
        while pow10(e + 1) <= x {
            e += 1;
        }
        let scaled = &x * pow10(digits as i64 - 1 - e);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut mantissa = (scaled + half).floor().to_integer();
        if mantissa == Pow::pow(&ten, digits as u64) {
            mantissa /= &ten;
            e += 1;
        }
        let body = mantissa.to_string();
        let mut out = String::new();
        if self.0.is_negative() {
            out.push('-');
        }
        if e < 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
            out.push_str(&body);
        } else if (e as usize) + 1 >= body.len() {
            out.push_str(&body);
            out.extend(std::iter::repeat_n('0', e as usize + 1 - body.len()));
        } else {
            let (int, frac) = body.split_at(e as usize + 1);
            out.push_str(int);
            out.push('.');
            out.push_str(frac);
        }
        out
    }
}

/// Always `numer/denom`, including `1/1` and `0/1`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Accepts `a/b` or a bare integer.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRational(s.to_owned());
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
        match s.split_once('/') {
            Some((n, d)) => Rational::new(int(n)?, int(d)?).map_err(|_| bad()),
            None => Ok(Rational::from_integer(int(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

macro_rules! rational_op {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }

        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

rational_op!(Add, add);
rational_op!(Sub, sub);
rational_op!(Mul, mul);

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), Add::add)
    }
}

impl std::iter::Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), Mul::mul)
    }
}

/// Independent per-variable probabilities of being true, `x_1` first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductMeasure {
    probs: Vec<Rational>,
}

impl ProductMeasure {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::ArityTooSmall { n: 0, min: 1 });
        }
        if let Some(p) = probs.iter().find(|p| !p.is_probability()) {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        Ok(ProductMeasure { probs })
    }

    /// Every variable true with probability `p`.
    pub fn uniform(n: usize, p: Rational) -> Result<Self> {
        ProductMeasure::new(vec![p; n])
    }

    pub fn arity(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.arity() != n {
            return Err(Error::ArityMismatch {
                left: n,
                right: self.arity(),
            });
        }
        Ok(())
    }
}

/// `∏ (p_i if a_i else 1 − p_i)`.
pub fn assignment_weight(m: &ProductMeasure, a: &Assignment) -> Result<Rational> {
    m.check(a.arity())?;
    Ok(m.probs
        .iter()
        .zip(a.values())
        .map(|(p, &b)| if b { p.clone() } else { &Rational::one() - p })
        .product())
}

/// Per-variable integer weights over the common denominator `∏ d_i`:
/// `P(x_i) = a_i / d_i`, so a row weighs `∏ (a_i or d_i − a_i)` over `∏ d_i`.
struct IntegerWeights {
    when_true: Vec<BigInt>,
    when_false: Vec<BigInt>,
    /// `suffix[j] = ∏_{i >= j} d_i`.
    suffix: Vec<BigInt>,
}

impl IntegerWeights {
    fn new(m: &ProductMeasure) -> Self {
        let when_true: Vec<BigInt> = m.probs.iter().map(|p| p.numer().clone()).collect();
        let when_false = m.probs.iter().map(|p| p.denom() - p.numer()).collect();
        let mut suffix = vec![BigInt::one(); m.arity() + 1];
        for i in (0..m.arity()).rev() {
            suffix[i] = &suffix[i + 1] * m.probs[i].denom();
        }
        IntegerWeights {
            when_true,
            when_false,
            suffix,
        }
    }

    fn row(&self, n: usize, index: u64) -> BigInt {
        (0..n)
            .map(|i| {
                if (index >> (n - 1 - i)) & 1 == 1 {
                    &self.when_true[i]
                } else {
                    &self.when_false[i]
                }
            })
            .product()
    }
}

/// Exact probability that `t` is true when its inputs are drawn from `m`.
///
/// Sparse tables are summed row by row over the truth set; dense ones by a
/// variable-by-variable split that skips constant blocks. Both give the
/// same exact value.
pub fn sat_probability(t: &TruthTable, m: &ProductMeasure) -> Result<Rational> {
    m.check(t.arity())?;
    let n = t.arity();
    let weights = IntegerWeights::new(m);
    let numer = if t.count_ones() <= t.len() / 64 {
        t.ones().map(|i| weights.row(n, i)).sum()
    } else {
        let low_vars = n.min(6);
        let low_rows: Vec<BigInt> = (0..1u64 << low_vars)
            .map(|j| {
                (n - low_vars..n)
                    .map(|i| {
                        if (j >> (n - 1 - i)) & 1 == 1 {
                            &weights.when_true[i]
                        } else {
                            &weights.when_false[i]
                        }
                    })
                    .product()
            })
            .collect();
        split_weight(t, &weights, &low_rows, 0, 0, n)
    };
    Rational::new(numer, weights.suffix[0].clone())
}

// Weighted count of the rows in [offset, offset + 2^(n - depth)), with
// x_1..x_depth already fixed and their weights factored out.
fn split_weight(
    t: &TruthTable,
    w: &IntegerWeights,
    low_rows: &[BigInt],
    depth: usize,
    offset: u64,
    n: usize,
) -> BigInt {
    let span = 1u64 << (n - depth);
    if n - depth <= 6 {
        return (0..span)
            .filter(|j| t.bit(offset + j))
            .map(|j| &low_rows[j as usize])
            .sum();
    }
    let (first_word, word_span) = ((offset >> 6) as usize, (span >> 6) as usize);
    let mut zeros = true;
    let mut ones = true;
    for &word in &t.words()[first_word..first_word + word_span] {
        zeros &= word == 0;
        ones &= word == u64::MAX;
        if !zeros && !ones {
            break;
        }
    }
    if zeros {
        return BigInt::zero();
    }
    if ones {
        return w.suffix[depth].clone();
    }
    let half = span / 2;
    let left = split_weight(t, w, low_rows, depth + 1, offset, n);
    let right = split_weight(t, w, low_rows, depth + 1, offset + half, n);
    &w.when_false[depth] * left + &w.when_true[depth] * right
}

/// Reference sum of [`assignment_weight`] over the truth set.
pub fn sat_probability_by_enumeration(t: &TruthTable, m: &ProductMeasure) -> Result<Rational> {
    m.check(t.arity())?;
    t.truth_set().iter().map(|a| assignment_weight(m, a)).sum()
}

/// Probability that `D_n` fails when each variable is true with
/// probability `p`: the sum of `p^k (1 − p)^(n−k)` over the `n + 1`
/// staircase vectors. At `p = 1/2` this is `(n + 1) / 2^n`.
pub fn dayenu_fail_closed_form(n: usize, p: &Rational) -> Result<Rational> {
    if n < 2 {
        return Err(Error::ArityTooSmall { n, min: 2 });
    }
    if !p.is_probability() {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    let q = &Rational::one() - p;
    Ok((0..=n as u32).map(|k| p.pow(k) * q.pow(n as u32 - k)).sum())
}

/// Probability that `G_n` holds: `p^n`.
pub fn god_closed_form(n: usize, p: &Rational) -> Result<Rational> {
    if n < 1 {
        return Err(Error::ArityTooSmall { n, min: 1 });
    }
    if !p.is_probability() {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(p.pow(n as u32))
}

/// Samples per independently seeded shard of a Monte Carlo run.
pub const MC_SHARD: u64 = 1 << 16;

/// A Monte Carlo estimate of a satisfaction probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
}

/// The generator for shard `shard` of a run seeded with `seed`:
/// xoshiro256++ initialised through `seed_from_u64` (SplitMix64 expansion)
/// from `seed + shard · 0x9E3779B97F4A7C15` (wrapping).
pub fn shard_rng(seed: u64, shard: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed.wrapping_add(shard.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// `ceil(p · 2^64)`: a uniform 64-bit draw `r` sets the variable iff
/// `r < threshold`, which happens with probability exactly `p`.
fn threshold(p: &Rational) -> u128 {
    let numer = p.numer().to_biguint().expect("probabilities are non-negative");
    let denom = p.denom().to_biguint().expect("denominators are positive");
    let (q, r) = (numer << 64u32).div_rem(&denom);
    let ceil = if r.is_zero() { q } else { q + BigUint::one() };
    ceil.to_u128().expect("p <= 1 keeps the threshold within 2^64")
}

/// Seeded estimate of `sat_probability(t, m)`.
///
/// Samples are split into shards of [`MC_SHARD`], each driven by
/// [`shard_rng`]; variables are drawn `x_1` first. The result depends only
/// on `(t, m, samples, seed)`, never on thread scheduling.
pub fn monte_carlo_sat(t: &TruthTable, m: &ProductMeasure, samples: u64, seed: u64) -> Result<McEstimate> {
    m.check(t.arity())?;
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let thresholds: Vec<u128> = m.probs.iter().map(threshold).collect();
    let shards = samples.div_ceil(MC_SHARD);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = shard_rng(seed, shard);
            let count = MC_SHARD.min(samples - shard * MC_SHARD);
            (0..count)
                .filter(|_| {
                    let index = thresholds.iter().fold(0u64, |acc, &th| {
                        (acc << 1) | ((rng.next_u64() as u128) < th) as u64
                    });
                    t.bit(index)
                })
                .count() as u64
        })
        .sum();
    let q = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: q,
        std_error: (q * (1.0 - q) / samples as f64).sqrt(),
        hits,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{dayenu, god_function};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_parsing_and_display() {
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r("3").to_string(), "3/1");
        assert_eq!(r("0").to_string(), "0/1");
        assert_eq!(r("-2/-6").to_string(), "1/3");
        assert_eq!(r("1/-2").to_string(), "-1/2");
        assert_eq!(r(" 4 / 8 ").to_string(), "1/2");
        for bad in ["", "1/0", "a/2", "1/2/3", "0.5"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(r("2047/2048").to_decimal(7), "0.9995117");
        assert_eq!(r("1/1").to_decimal(7), "1.000000");
        assert_eq!(r("0").to_decimal(7), "0");
        assert_eq!(r("1/32768").to_decimal(7), "0.00003051758");
        assert_eq!(r("2/3").to_decimal(3), "0.667");
        assert_eq!(r("9999/10000").to_decimal(2), "1.0");
        assert_eq!(r("12345/1").to_decimal(3), "12300");
        assert_eq!(r("-1/8").to_decimal(2), "-0.13");
        assert_eq!(r("1/10").to_decimal(1), "0.1");
    }

    #[test]
    fn measures() {
        let m = ProductMeasure::uniform(15, r("1/2")).unwrap();
        assert_eq!(m.arity(), 15);
        assert!(m.probs().iter().all(|p| *p == r("1/2")));
        assert!(ProductMeasure::uniform(3, r("0")).is_ok());
        assert!(ProductMeasure::uniform(3, r("1")).is_ok());
        assert!(matches!(
            ProductMeasure::uniform(3, r("3/2")),
            Err(Error::ProbabilityOutOfRange(_))
        ));
        assert!(ProductMeasure::uniform(3, r("-1/2")).is_err());
        assert!(ProductMeasure::new(vec![]).is_err());
    }

    #[test]
    fn weights() {
        let half = ProductMeasure::uniform(2, r("1/2")).unwrap();
        assert_eq!(
            assignment_weight(&half, &"TF".parse().unwrap()).unwrap(),
            r("1/4")
        );
        let p = r("2/7");
        let m = ProductMeasure::uniform(15, p.clone()).unwrap();
        assert_eq!(
            assignment_weight(&m, &Assignment::all(15, true)).unwrap(),
            p.pow(15)
        );
        let mixed = ProductMeasure::new(vec![r("1/3"), r("1/2")]).unwrap();
        assert_eq!(
            assignment_weight(&mixed, &"TT".parse().unwrap()).unwrap(),
            r("1/6")
        );
        assert!(assignment_weight(&mixed, &"T".parse().unwrap()).is_err());
    }

    #[test]
    fn sat_probability_examples() {
        let half = |n| ProductMeasure::uniform(n, r("1/2")).unwrap();
        assert_eq!(
            sat_probability(&dayenu(15).unwrap(), &half(15)).unwrap(),
            r("2047/2048")
        );
        assert_eq!(
            sat_probability(&god_function(3).unwrap(), &half(3)).unwrap(),
            r("1/8")
        );
        let m = ProductMeasure::new(vec![r("1/3"), r("0"), r("5/7"), r("1")]).unwrap();
        assert_eq!(
            sat_probability(&TruthTable::constant(4, true).unwrap(), &m).unwrap(),
            Rational::one()
        );
        assert!(sat_probability(&god_function(3).unwrap(), &half(4)).is_err());
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        let m = ProductMeasure::new((1..=10).map(|i| r(&format!("{i}/11"))).collect()).unwrap();
        let tables = [
            dayenu(10).unwrap(),
            dayenu(10).unwrap().negate(),
            TruthTable::from_fn(10, |i| i % 3 == 0).unwrap(),
            TruthTable::from_fn(10, |i| i >= 512 || i % 5 == 1).unwrap(),
            TruthTable::constant(10, true).unwrap(),
            TruthTable::constant(10, false).unwrap(),
        ];
        for t in &tables {
            assert_eq!(
                sat_probability(t, &m).unwrap(),
                sat_probability_by_enumeration(t, &m).unwrap(),
                "{t:?}"
            );
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(dayenu_fail_closed_form(15, &r("1/2")).unwrap(), r("1/2048"));
        assert_eq!(dayenu_fail_closed_form(2, &r("1/2")).unwrap(), r("3/4"));
        // weighted brute force over 8 rows: (8 + 4 + 2 + 1) / 27
        assert_eq!(dayenu_fail_closed_form(3, &r("1/3")).unwrap(), r("5/9"));
        assert_eq!(dayenu_fail_closed_form(9, &r("0")).unwrap(), Rational::one());
        assert_eq!(dayenu_fail_closed_form(9, &r("1")).unwrap(), Rational::one());
        assert!(dayenu_fail_closed_form(1, &r("1/2")).is_err());
        assert!(dayenu_fail_closed_form(4, &r("2")).is_err());
        assert_eq!(god_closed_form(15, &r("1/2")).unwrap(), r("1/32768"));
    }

    #[test]
    fn thresholds_are_exact() {
        assert_eq!(threshold(&r("0")), 0);
        assert_eq!(threshold(&r("1")), 1u128 << 64);
        assert_eq!(threshold(&r("1/2")), 1u128 << 63);
        assert_eq!(threshold(&r("1/3")), (1u128 << 64) / 3 + 1);
    }

    #[test]
    fn monte_carlo_degenerate_cases() {
        let m = ProductMeasure::new(vec![r("1/3"), r("1/2"), r("9/10")]).unwrap();
        let yes = monte_carlo_sat(&TruthTable::constant(3, true).unwrap(), &m, 1000, 7).unwrap();
        assert_eq!((yes.estimate, yes.std_error, yes.hits), (1.0, 0.0, 1000));
        let no = monte_carlo_sat(&TruthTable::constant(3, false).unwrap(), &m, 1000, 7).unwrap();
        assert_eq!((no.estimate, no.std_error), (0.0, 0.0));
        assert_eq!(
            monte_carlo_sat(&TruthTable::constant(3, false).unwrap(), &m, 0, 7),
            Err(Error::ZeroSamples)
        );
        let certain = ProductMeasure::new(vec![r("1"), r("0")]).unwrap();
        let only_tf = TruthTable::from_bit_string(2, "0010").unwrap();
        assert_eq!(monte_carlo_sat(&only_tf, &certain, 500, 1).unwrap().hits, 500);
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let t = dayenu(8).unwrap();
        let m = ProductMeasure::uniform(8, r("1/3")).unwrap();
        let a = monte_carlo_sat(&t, &m, 200_000, 42).unwrap();
        let b = monte_carlo_sat(&t, &m, 200_000, 42).unwrap();
        let c = monte_carlo_sat(&t, &m, 200_000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.hits, c.hits);
        let exact = sat_probability(&t, &m).unwrap().to_f64();
        assert!((a.estimate - exact).abs() < 4.0 * a.std_error);
    }
}

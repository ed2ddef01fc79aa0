#![allow(dead_code)]

use dayenu_core::{Expr, ProductMeasure, Rational, TruthTable};
use proptest::prelude::*;

/// Random formulas over `x_1 ..= x_max_var`.
pub fn arb_expr(max_var: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => Just(Expr::True),
        1 => Just(Expr::False),
        6 => (1..=max_var).prop_map(Expr::var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::xor(a, b)),
        ]
    })
}

/// Random formulas without xor.
pub fn arb_expr_no_xor(max_var: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => Just(Expr::True),
        1 => Just(Expr::False),
        6 => (1..=max_var).prop_map(Expr::var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::or(a, b)),
        ]
    })
}

pub fn arb_table_of(n: usize) -> impl Strategy<Value = TruthTable> {
    prop::collection::vec(any::<bool>(), 1usize << n).prop_map(move |bits| {
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        TruthTable::from_bit_string(n, &s).unwrap()
    })
}

pub fn arb_table(max_n: usize) -> impl Strategy<Value = TruthTable> {
    (1..=max_n).prop_flat_map(arb_table_of)
}

pub fn arb_probability() -> impl Strategy<Value = Rational> {
    (1u32..=12)
        .prop_flat_map(|den| (0..=den, Just(den)))
        .prop_map(|(num, den)| Rational::new(num, den).unwrap())
}

pub fn arb_measure_of(n: usize) -> impl Strategy<Value = ProductMeasure> {
    prop::collection::vec(arb_probability(), n).prop_map(|p| ProductMeasure::new(p).unwrap())
}

pub fn arb_table_and_measure(max_n: usize) -> impl Strategy<Value = (TruthTable, ProductMeasure)> {
    (1..=max_n).prop_flat_map(|n| (arb_table_of(n), arb_measure_of(n)))
}

/// Decodes a row index with `x_1` as the most significant bit.
pub fn row(n: usize, index: u64) -> Vec<bool> {
    (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect()
}

pub fn tf(values: &[bool]) -> String {
    values.iter().map(|&b| if b { 'T' } else { 'F' }).collect()
}

/// Brute-force `D_n`: some x_i = T with x_{i+1} = F.
pub fn dayenu_holds(values: &[bool]) -> bool {
    (0..values.len().saturating_sub(1)).any(|i| values[i] && !values[i + 1])
}

/// Brute-force list of rows where `D_n` fails, as T/F strings.
pub fn dayenu_failures(n: usize) -> Vec<String> {
    (0..1u64 << n)
        .map(|i| row(n, i))
        .filter(|v| !dayenu_holds(v))
        .map(|v| tf(&v))
        .collect()
}

/// `F^(n-k) T^k` for k = 0..=n, written out directly.
pub fn staircase_strings(n: usize) -> Vec<String> {
    (0..=n).map(|k| "F".repeat(n - k) + &"T".repeat(k)).collect()
}

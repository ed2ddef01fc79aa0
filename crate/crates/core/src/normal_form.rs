//! Full disjunctive normal forms, De Morgan negation, and mechanical checks
//! of the Dayenu theorem and its inductive proof.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::families::{dayenu, dayenu_formula, staircase_set};
use crate::table::{check_arity, Assignment, TruthTable, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Negated,
    Plain,
}

/// A full product term: one literal for each of `x_1 … x_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Minterm {
    polarities: Vec<Polarity>,
}

impl Minterm {
    pub fn new(polarities: Vec<Polarity>) -> Result<Self> {
        if polarities.is_empty() {
            return Err(Error::InvalidDnf("a minterm needs at least one literal".into()));
        }
        Ok(Minterm { polarities })
    }

    /// The unique minterm satisfied by `a`.
    pub fn from_assignment(a: &Assignment) -> Self {
        let polarities = a
            .values()
            .iter()
            .map(|&b| if b { Polarity::Plain } else { Polarity::Negated })
            .collect();
        Minterm { polarities }
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::new(self.polarities.iter().map(|&p| p == Polarity::Plain).collect())
            .expect("minterms are non-empty")
    }

    pub fn arity(&self) -> usize {
        self.polarities.len()
    }

    pub fn polarities(&self) -> &[Polarity] {
        &self.polarities
    }

    pub fn index(&self) -> u64 {
        self.to_assignment().index()
    }

    /// Left-associated conjunction of the literals.
    pub fn to_expr(&self) -> Expr {
        Expr::and_all(self.polarities.iter().enumerate().map(|(i, p)| {
            let v = Expr::var(i as u32 + 1);
            match p {
                Polarity::Plain => v,
                Polarity::Negated => Expr::not(v),
            }
        }))
    }
}

impl fmt::Display for Minterm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_expr().fmt(f)
    }
}

/// A disjunction of distinct full minterms over a common arity, kept in
/// ascending assignment order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dnf {
    n: usize,
    minterms: Vec<Minterm>,
}

impl Dnf {
    pub fn new(n: usize, minterms: Vec<Minterm>) -> Result<Self> {
        check_arity(n, 1)?;
        if let Some(m) = minterms.iter().find(|m| m.arity() != n) {
            return Err(Error::ArityMismatch {
                left: n,
                right: m.arity(),
            });
        }
        if minterms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDnf("minterms must be strictly ascending".into()));
        }
        Ok(Dnf { n, minterms })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn minterms(&self) -> &[Minterm] {
        &self.minterms
    }

    pub fn len(&self) -> usize {
        self.minterms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minterms.is_empty()
    }

    pub fn assignments(&self) -> Vec<Assignment> {
        self.minterms.iter().map(Minterm::to_assignment).collect()
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        dnf_to_expr(self).fmt(f)
    }
}

/// One minterm per satisfying row of `t`.
pub fn full_dnf(t: &TruthTable) -> Dnf {
    Dnf {
        n: t.arity(),
        minterms: t.truth_set().iter().map(Minterm::from_assignment).collect(),
    }
}

/// `m_1 | m_2 | …`, or `F` when empty.
pub fn dnf_to_expr(d: &Dnf) -> Expr {
    Expr::or_all(d.minterms.iter().map(Minterm::to_expr))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NegateOptions {
    /// Rewrite `a ^ b` as `a & ~b | ~a & b` instead of failing.
    pub expand_xor: bool,
}

/// Negation normal form of `¬e`.
pub fn demorgan_negate(e: &Expr) -> Result<Expr> {
    demorgan_negate_with(e, NegateOptions::default())
}

pub fn demorgan_negate_with(e: &Expr, opts: NegateOptions) -> Result<Expr> {
    nnf(e, true, opts)
}

/// Negation normal form of `e` itself.
pub fn negation_normal_form(e: &Expr, opts: NegateOptions) -> Result<Expr> {
    nnf(e, false, opts)
}

fn nnf(e: &Expr, negate: bool, opts: NegateOptions) -> Result<Expr> {
    Ok(match e {
        Expr::True => {
            if negate {
                Expr::False
            } else {
                Expr::True
            }
        }
        Expr::False => {
            if negate {
                Expr::True
            } else {
                Expr::False
            }
        }
        Expr::Var(v) => {
            if negate {
                Expr::not(Expr::Var(*v))
            } else {
                Expr::Var(*v)
            }
        }
        Expr::Not(inner) => nnf(inner, !negate, opts)?,
        Expr::And(a, b) => {
            let (a, b) = (nnf(a, negate, opts)?, nnf(b, negate, opts)?);
            if negate {
                Expr::or(a, b)
            } else {
                Expr::and(a, b)
            }
        }
        Expr::Or(a, b) => {
            let (a, b) = (nnf(a, negate, opts)?, nnf(b, negate, opts)?);
            if negate {
                Expr::and(a, b)
            } else {
                Expr::or(a, b)
            }
        }
        Expr::Xor(a, b) => {
            if !opts.expand_xor {
                return Err(Error::XorUnsupported);
            }
            let expanded = Expr::or(
                Expr::and((**a).clone(), Expr::not((**b).clone())),
                Expr::and(Expr::not((**a).clone()), (**b).clone()),
            );
            nnf(&expanded, negate, opts)?
        }
    })
}

/// Outcome of checking the full-DNF statement at one arity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub minterm_count: usize,
    pub expected_count: usize,
    /// The minterms of `¬D_n` decode to the staircase set, in order.
    pub staircase_match: bool,
    /// The De Morgan rewrite of the `D_n` formula compiles to `¬D_n`.
    pub demorgan_match: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

pub fn verify_dayenu_theorem(n: usize) -> Result<TheoremReport> {
    check_arity(n, 2)?;
    let negated = dayenu(n)?.negate();
    let dnf = full_dnf(&negated);
    let staircase = staircase_set(n)?;
    let staircase_match = dnf.assignments() == staircase;

    let rewritten = demorgan_negate(&dayenu_formula(n)?)?.compile(n)?;
    let demorgan_diff = rewritten.first_difference(&negated)?;

    let expected_count = n + 1;
    let counterexample = if staircase_match {
        demorgan_diff
    } else {
        let reference = TruthTable::from_indices(n, staircase.iter().map(Assignment::index))?;
        negated.first_difference(&reference)?
    }
    .map(|i| Assignment::from_index(n, i).to_string());

    let minterm_count = dnf.len();
    let demorgan_match = demorgan_diff.is_none();
    Ok(TheoremReport {
        n,
        minterm_count,
        expected_count,
        staircase_match,
        demorgan_match,
        pass: minterm_count == expected_count && staircase_match && demorgan_match,
        counterexample,
    })
}

/// Outcome of checking the inductive step from `n − 1` to `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionReport {
    pub n: usize,
    /// `¬D_n = ¬D_{n−1} ∧ (¬x_{n−1} ∨ x_n)`.
    pub identity_match: bool,
    /// `¬D_n = ¬D_{n−1} ∧ ¬x_{n−1} ∨ ¬D_{n−1} ∧ x_n`.
    pub distributed_match: bool,
    /// The DNF of `¬D_{n−1} ∧ ¬x_{n−1}` is the single all-negated term.
    pub absorption_match: bool,
    /// The all-negated `(n−1)`-term splits into `F^n ∨ F^(n−1)T`, and the
    /// second of those is the duplicate shared with `¬D_{n−1} ∧ x_n`.
    pub split_match: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

pub fn verify_induction_step(n: usize) -> Result<InductionReport> {
    check_arity(n, 3)?;
    let prev_n = n - 1;
    let lhs = dayenu(n)?.negate();
    let prev_short = dayenu(prev_n)?.negate();
    let prev = prev_short.extend_to(n)?;
    let x = |i: usize| TruthTable::var(n, VarId::new(i as u32).expect("i >= 1"));
    let not_penultimate = x(prev_n)?.negate();
    let last = x(n)?;

    let identity = prev.and(&not_penultimate.or(&last)?)?;
    let left_part = prev.and(&not_penultimate)?;
    let right_part = prev.and(&last)?;
    let distributed = left_part.or(&right_part)?;

    let identity_diff = lhs.first_difference(&identity)?;
    let distributed_diff = lhs.first_difference(&distributed)?;

    // Absorption happens over n - 1 variables: x_{n-1} ∧ ¬x_{n-1} kills
    // every term but the all-negated one.
    let short_penultimate = TruthTable::var(prev_n, VarId::new(prev_n as u32).expect("n >= 3"))?;
    let absorbed = full_dnf(&prev_short.and(&short_penultimate.negate())?);
    let all_negated_short = Assignment::all(prev_n, false);
    let absorption_match = absorbed.assignments() == [all_negated_short.clone()];

    let split = full_dnf(&TruthTable::from_indices(prev_n, [0])?.extend_to(n)?);
    let f_n = Assignment::all(n, false);
    let f_then_t = Assignment::from_index(n, 1);
    let shared: Vec<Assignment> = {
        let right = full_dnf(&right_part).assignments();
        split
            .assignments()
            .into_iter()
            .filter(|a| right.contains(a))
            .collect()
    };
    let split_match = split.assignments() == [f_n, f_then_t.clone()] && shared == [f_then_t];

    let identity_match = identity_diff.is_none();
    let distributed_match = distributed_diff.is_none();
    Ok(InductionReport {
        n,
        identity_match,
        distributed_match,
        absorption_match,
        split_match,
        pass: identity_match && distributed_match && absorption_match && split_match,
        counterexample: identity_diff
            .or(distributed_diff)
            .map(|i| Assignment::from_index(n, i).to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn strings(v: &[Assignment]) -> Vec<String> {
        v.iter().map(Assignment::to_string).collect()
    }

    #[test]
    fn full_dnf_examples() {
        let d = full_dnf(&dayenu(2).unwrap().negate());
        let rendered: Vec<String> = d.minterms().iter().map(Minterm::to_string).collect();
        assert_eq!(rendered, ["~x1 & ~x2", "~x1 & x2", "x1 & x2"]);
        assert!(full_dnf(&TruthTable::constant(3, false).unwrap()).is_empty());
        let d4 = full_dnf(&dayenu(4).unwrap().negate());
        assert_eq!(
            strings(&d4.assignments()),
            ["FFFF", "FFFT", "FFTT", "FTTT", "TTTT"]
        );
    }

    #[test]
    fn dnf_to_expr_examples() {
        let single = Dnf::new(2, vec![Minterm::from_assignment(&"TF".parse().unwrap())]).unwrap();
        assert_eq!(dnf_to_expr(&single).to_string(), "x1 & ~x2");
        assert_eq!(dnf_to_expr(&Dnf::new(2, vec![]).unwrap()).to_string(), "F");
        let d = full_dnf(&dayenu(2).unwrap().negate());
        assert_eq!(d.to_string(), "~x1 & ~x2 | ~x1 & x2 | x1 & x2");
    }

    #[test]
    fn dnf_validation() {
        let m = |s: &str| Minterm::from_assignment(&s.parse().unwrap());
        assert!(Dnf::new(2, vec![m("TF"), m("FT")]).is_err());
        assert!(Dnf::new(2, vec![m("FT"), m("FT")]).is_err());
        assert!(Dnf::new(2, vec![m("FTT")]).is_err());
        assert!(Dnf::new(2, vec![m("FT"), m("TF")]).is_ok());
        assert!(Minterm::new(vec![]).is_err());
    }

    #[test]
    fn demorgan_examples() {
        let n3 = demorgan_negate(&dayenu_formula(3).unwrap()).unwrap();
        assert_eq!(n3.to_string(), "(~x1 | x2) & (~x2 | x3)");
        assert_eq!(demorgan_negate(&Expr::var(1)).unwrap().to_string(), "~x1");
        assert_eq!(
            demorgan_negate(&Expr::not(Expr::var(1))).unwrap().to_string(),
            "x1"
        );
        assert_eq!(
            demorgan_negate(&parse("T | ~F").unwrap()).unwrap(),
            parse("F & F").unwrap()
        );
    }

    #[test]
    fn demorgan_xor_gate() {
        let e = parse("x1 ^ ~x2").unwrap();
        assert_eq!(demorgan_negate(&e), Err(Error::XorUnsupported));
        let expanded = demorgan_negate_with(&e, NegateOptions { expand_xor: true }).unwrap();
        assert_eq!(expanded.compile(2).unwrap(), e.compile(2).unwrap().negate());
        let nnf = negation_normal_form(&parse("~(x1 & ~(x2 | x3))").unwrap(), Default::default());
        assert_eq!(nnf.unwrap().to_string(), "~x1 | (x2 | x3)");
    }

    #[test]
    fn theorem_reports() {
        for (n, count) in [(2, 3), (15, 16), (20, 21)] {
            let r = verify_dayenu_theorem(n).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.minterm_count, count);
            assert_eq!(r.counterexample, None);
        }
        assert!(matches!(
            verify_dayenu_theorem(1),
            Err(Error::ArityTooSmall { .. })
        ));
    }

    #[test]
    fn induction_reports() {
        for n in [3, 4, 15, 16] {
            let r = verify_induction_step(n).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(matches!(
            verify_induction_step(2),
            Err(Error::ArityTooSmall { n: 2, min: 3 })
        ));
    }

    #[test]
    fn report_json_shape() {
        let r = verify_dayenu_theorem(3).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "n": 3, "minterm_count": 4, "expected_count": 4,
                "staircase_match": true, "demorgan_match": true, "pass": true
            })
        );
    }
}

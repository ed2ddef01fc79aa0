//! The all-miracles function `G_n`, the Dayenu function `D_n`, and the
//! staircase vectors `F^(n−k) T^k` that make up the truth set of `¬D_n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::table::{check_arity, Assignment, TruthTable};

/// `G_n = x_1 ∧ … ∧ x_n`, true only on `T^n`.
pub fn god_function(n: usize) -> Result<TruthTable> {
    check_arity(n, 1)?;
    TruthTable::from_indices(n, [(1u64 << n) - 1])
}

/// `D_n = ⋁_{i=1}^{n−1} x_i ∧ ¬x_{i+1}`, true iff some adjacent pair reads
/// `(T, F)`. Requires `n >= 2`; see [`dayenu_or_false`] for `n = 1`.
pub fn dayenu(n: usize) -> Result<TruthTable> {
    check_arity(n, 2)?;
    // Bit j of (!idx & idx >> 1) is set iff x_{n-j-1} = T and x_{n-j} = F.
    let pairs_mask = (1u64 << (n - 1)) - 1;
    TruthTable::from_fn(n, |idx| (!idx & (idx >> 1)) & pairs_mask != 0)
}

/// [`dayenu`], but reading `D_1` as the empty disjunction (constant false).
pub fn dayenu_or_false(n: usize) -> Result<TruthTable> {
    if n == 1 {
        TruthTable::constant(1, false)
    } else {
        dayenu(n)
    }
}

/// The defining formula of `D_n` as a syntax tree.
pub fn dayenu_formula(n: usize) -> Result<Expr> {
    check_arity(n, 2)?;
    Ok(Expr::or_all(
        (1..n as u32).map(|i| Expr::and(Expr::var(i), Expr::not(Expr::var(i + 1)))),
    ))
}

/// The defining formula of `G_n` as a syntax tree.
pub fn god_formula(n: usize) -> Result<Expr> {
    check_arity(n, 1)?;
    Ok(Expr::and_all((1..=n as u32).map(Expr::var)))
}

/// The assignment `F^(n−k) T^k`, stored compactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StaircaseVector {
    n: usize,
    k: usize,
}

impl StaircaseVector {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ArityTooSmall { n, min: 1 });
        }
        if k > n {
            return Err(Error::StaircaseOutOfRange { n, k });
        }
        Ok(StaircaseVector { n, k })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Number of trailing trues.
    pub fn trues(&self) -> usize {
        self.k
    }

    pub fn index(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::from_index(self.n, self.index())
    }

    /// Recognizes a staircase assignment.
    pub fn from_assignment(a: &Assignment) -> Option<Self> {
        if !no_fall(a) {
            return None;
        }
        let k = a.values().iter().filter(|&&b| b).count();
        Some(StaircaseVector { n: a.arity(), k })
    }
}

impl fmt::Display for StaircaseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_assignment().fmt(f)
    }
}

/// `F^(n−k) T^k`.
pub fn staircase_assignment(n: usize, k: usize) -> Result<Assignment> {
    Ok(StaircaseVector::new(n, k)?.to_assignment())
}

/// All `n + 1` staircase vectors, `k = 0..=n`.
pub fn staircase_vectors(n: usize) -> Result<Vec<StaircaseVector>> {
    check_arity(n, 1)?;
    Ok((0..=n).map(|k| StaircaseVector { n, k }).collect())
}

/// All `n + 1` staircase assignments in ascending `k`, which is also
/// ascending index order.
pub fn staircase_set(n: usize) -> Result<Vec<Assignment>> {
    Ok(staircase_vectors(n)?
        .iter()
        .map(StaircaseVector::to_assignment)
        .collect())
}

/// True iff no `F` immediately follows a `T`.
pub fn no_fall(a: &Assignment) -> bool {
    !a.values().windows(2).any(|w| w[0] && !w[1])
}

/// CLI selector for the named families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    God,
    Dayenu,
}

impl Family {
    pub fn table(self, n: usize) -> Result<TruthTable> {
        match self {
            Family::God => god_function(n),
            Family::Dayenu => dayenu(n),
        }
    }

    pub fn formula(self, n: usize) -> Result<Expr> {
        match self {
            Family::God => god_formula(n),
            Family::Dayenu => dayenu_formula(n),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "god" => Ok(Family::God),
            "dayenu" => Ok(Family::Dayenu),
            _ => Err(format!("unknown family {s:?} (expected god or dayenu)")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::God => "god",
            Family::Dayenu => "dayenu",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[Assignment]) -> Vec<String> {
        v.iter().map(Assignment::to_string).collect()
    }

    #[test]
    fn god_examples() {
        assert_eq!(god_function(2).unwrap().to_bit_string(), "0001");
        assert_eq!(strings(&god_function(15).unwrap().truth_set()), ["T".repeat(15)]);
        assert_eq!(
            god_function(1).unwrap(),
            TruthTable::var(1, crate::table::VarId::new(1).unwrap()).unwrap()
        );
    }

    #[test]
    fn dayenu_examples() {
        assert_eq!(dayenu(2).unwrap().to_bit_string(), "0010");
        assert!(!dayenu(15).unwrap().eval(&Assignment::all(15, true)).unwrap());
        // 16 assignments minus the 5 staircases FFFF, FFFT, FFTT, FTTT, TTTT
        assert_eq!(dayenu(4).unwrap().count_ones(), 11);
        assert!(matches!(dayenu(1), Err(Error::ArityTooSmall { n: 1, min: 2 })));
        assert!(dayenu_or_false(1).unwrap().is_constant(false));
        assert_eq!(dayenu_or_false(3).unwrap(), dayenu(3).unwrap());
    }

    #[test]
    fn dayenu_matches_brute_force_definition() {
        for n in 2..=10 {
            let brute = TruthTable::from_fn(n, |i| {
                let a = Assignment::from_index(n, i);
                a.values().windows(2).any(|w| w[0] && !w[1])
            })
            .unwrap();
            assert_eq!(dayenu(n).unwrap(), brute, "n={n}");
        }
    }

    #[test]
    fn formulas_agree_with_tables() {
        assert_eq!(dayenu_formula(3).unwrap().to_string(), "x1 & ~x2 | x2 & ~x3");
        for n in 2..=12 {
            assert_eq!(dayenu_formula(n).unwrap().compile(n).unwrap(), dayenu(n).unwrap());
            assert_eq!(
                god_formula(n).unwrap().compile(n).unwrap(),
                god_function(n).unwrap()
            );
        }
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase_assignment(4, 0).unwrap().to_string(), "FFFF");
        assert_eq!(staircase_assignment(4, 4).unwrap().to_string(), "TTTT");
        assert_eq!(staircase_assignment(4, 2).unwrap().to_string(), "FFTT");
        assert!(matches!(
            staircase_assignment(4, 5),
            Err(Error::StaircaseOutOfRange { n: 4, k: 5 })
        ));
        assert_eq!(strings(&staircase_set(2).unwrap()), ["FF", "FT", "TT"]);
        assert_eq!(staircase_set(15).unwrap().len(), 16);
        assert_eq!(strings(&staircase_set(1).unwrap()), ["F", "T"]);
    }

    #[test]
    fn staircase_vector_recognition() {
        let a: Assignment = "FFTT".parse().unwrap();
        let v = StaircaseVector::from_assignment(&a).unwrap();
        assert_eq!((v.arity(), v.trues()), (4, 2));
        assert_eq!(v.to_string(), "FFTT");
        assert!(StaircaseVector::from_assignment(&"TFTT".parse().unwrap()).is_none());
    }

    #[test]
    fn no_fall_examples() {
        assert!(no_fall(&"FFTT".parse().unwrap()));
        assert!(!no_fall(&"TFTT".parse().unwrap()));
        for n in 1..=20 {
            assert!(no_fall(&Assignment::all(n, true)));
        }
    }

    #[test]
    fn family_selectors() {
        assert_eq!("god".parse::<Family>().unwrap(), Family::God);
        assert_eq!("dayenu".parse::<Family>().unwrap().to_string(), "dayenu");
        assert!("G".parse::<Family>().is_err());
    }
}

//! Monomials in the grid variables `x[k,j]`.
//!
//! Variables are ordered row-major: `x[k,j] < x[k',j']` iff `k < k'`, or
//! `k = k'` and `j < j'`. A monomial stores its exponent map keyed by that
//! order, so iteration is canonical and zero exponents never appear.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One variable `x[k,j]`, with `row = k` and `col = j`, both 1-based.
///
/// The derived ordering (row first, then column) is the variable order used
/// throughout this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex {
    pub row: u32,
    pub col: u32,
}

impl VarIndex {
    pub fn new(row: u32, col: u32) -> Self {
        assert!(row >= 1 && col >= 1, "variable indices are 1-based");
        VarIndex { row, col }
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.row, self.col)
    }
}

/// A monomial: finitely many variables with positive exponents.
///
/// The default value is the monomial `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<VarIndex, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(row: u32, col: u32) -> Self {
        Monomial::from_pairs([(VarIndex::new(row, col), 1)])
    }

    /// Builds a monomial from `(variable, exponent)` pairs. Zero exponents
    /// are dropped; duplicate variables accumulate.
    pub fn from_pairs<I: IntoIterator<Item = (VarIndex, u32)>>(pairs: I) -> Self {
        let mut exps = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *exps.entry(v).or_insert(0) += e;
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.exps.values().map(|&e| e as u64).sum()
    }

    pub fn exponent(&self, v: VarIndex) -> u32 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    /// `(variable, exponent)` pairs in ascending variable order.
    pub fn exps(&self) -> impl DoubleEndedIterator<Item = (VarIndex, u32)> + '_ {
        self.exps.iter().map(|(&v, &e)| (v, e))
    }

    pub fn support(&self) -> impl Iterator<Item = VarIndex> + '_ {
        self.exps.keys().copied()
    }

    pub fn support_set(&self) -> BTreeSet<VarIndex> {
        self.exps.keys().copied().collect()
    }

    /// Columns that carry at least one variable of this monomial.
    pub fn support_cols(&self) -> BTreeSet<u32> {
        self.exps.keys().map(|v| v.col).collect()
    }

    /// Largest column in the support, or 0 for the monomial `1`.
    pub fn max_col(&self) -> u32 {
        self.exps.keys().map(|v| v.col).max().unwrap_or(0)
    }

    /// Largest row in the support, or 0 for the monomial `1`.
    pub fn max_row(&self) -> u32 {
        self.exps.keys().map(|v| v.row).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            *exps.entry(v).or_insert(0) += e;
        }
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|(v, &e)| other.exponent(*v) >= e)
    }

    /// Exact quotient `self / other`, or `None` when not divisible.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            let slot = exps.get_mut(&v).expect("divisor support is contained");
            *slot -= e;
            if *slot == 0 {
                exps.remove(&v);
            }
        }
        Some(Monomial { exps })
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .filter_map(|(&v, &e)| {
                let m = e.min(other.exponent(v));
                (m > 0).then_some((v, m))
            })
            .collect();
        Monomial { exps }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (&v, &e) in &other.exps {
            let slot = exps.entry(v).or_insert(0);
            *slot = (*slot).max(e);
        }
        Monomial { exps }
    }

    /// True when some variable occurs and all occurring variables are equal,
    /// i.e. the monomial is `x^e` for a single variable `x`.
    pub fn is_pure_power(&self) -> bool {
        self.exps.len() == 1
    }

    /// Renders with factors in ascending variable order, e.g.
    /// `x[1,2]^3*x[2,1]`. Single-row monomials drop the row index:
    /// `x[2]^4*x[3]`. `rows` is the ambient row count.
    pub fn render(&self, rows: u32) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let factor = |(v, e): (VarIndex, u32)| {
            let name = if rows == 1 {
                format!("x[{}]", v.col)
            } else {
                format!("x[{},{}]", v.row, v.col)
            };
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        };
        self.exps().map(factor).collect::<Vec<_>>().join("*")
    }
}

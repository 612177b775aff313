//! The ambient rings: variables on a `c x n` grid, monomials, polynomials,
//! term orders, and the column actions that tie different widths together.

pub mod action;
pub mod field;
pub mod monomial;
pub mod order;
pub mod poly;

pub use action::{ColumnMapped, IncMap, Permutation};
pub use field::{Coeff, Field};
pub use monomial::{Monomial, VarIndex};
pub use order::{order_by_name, order_names, GradedLex, GradedRevLex, Lex, MonomialOrder};
pub use poly::Polynomial;

use crate::error::{Error, Result};

/// Ambient ring descriptor: `rows` variable rows, an optional column bound,
/// and the coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingContext {
    pub rows: u32,
    /// `Some(n)` for `K[x[k,j] : j <= n]`, `None` for the union over all widths.
    pub width: Option<u32>,
    pub field: Field,
}

impl RingContext {
    pub fn new(rows: u32, width: Option<u32>, field: Field) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidSpec("ring needs at least one row".into()));
        }
        if width == Some(0) {
            return Err(Error::InvalidSpec("bounded ring width must be positive".into()));
        }
        Ok(RingContext { rows, width, field })
    }

    /// Total number of variables; requires a bounded width.
    pub fn num_vars(&self, op: &'static str) -> Result<u32> {
        match self.width {
            Some(n) => Ok(self.rows * n),
            None => Err(Error::UnboundedAmbient { op }),
        }
    }

    /// Checks that a variable lies on this ring's grid.
    pub fn check_var(&self, v: VarIndex) -> Result<()> {
        let ok = v.row >= 1
            && v.row <= self.rows
            && v.col >= 1
            && self.width.is_none_or(|n| v.col <= n);
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                row: v.row,
                col: v.col,
                rows: self.rows,
                width: self.width,
            })
        }
    }

    /// Same ring with a different column bound.
    pub fn with_width(&self, width: Option<u32>) -> Self {
        RingContext { width, ..*self }
    }
}

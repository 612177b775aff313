//! Column actions: permutations of `1..=n` and strictly increasing maps
//! `1..=m -> 1..=n`. Both act on monomials and polynomials by relabeling
//! column indices, leaving rows and coefficients alone.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ring::monomial::{Monomial, VarIndex};
use crate::ring::poly::Polynomial;

/// Anything whose column indices can be relabeled by an injective map.
pub trait ColumnMapped: Sized {
    /// Applies `f` to every column index. `f` must be injective on the
    /// columns that actually occur.
    fn map_columns<F: Fn(u32) -> u32>(&self, f: F) -> Self;
    /// Largest column index that occurs (0 if none).
    fn max_column(&self) -> u32;
}

impl ColumnMapped for Monomial {
    fn map_columns<F: Fn(u32) -> u32>(&self, f: F) -> Self {
        let image = Monomial::from_pairs(
            self.exps().map(|(v, e)| (VarIndex::new(v.row, f(v.col)), e)),
        );
        debug_assert_eq!(image.degree(), self.degree(), "column map must be injective");
        image
    }

    fn max_column(&self) -> u32 {
        self.max_col()
    }
}

impl ColumnMapped for Polynomial {
    fn map_columns<F: Fn(u32) -> u32>(&self, f: F) -> Self {
        self.map_monomials(|m| m.map_columns(&f))
    }

    fn max_column(&self) -> u32 {
        self.monomials().map(|m| m.max_col()).max().unwrap_or(0)
    }
}

/// A strictly increasing map `pi: 1..=m -> 1..=n`, stored by its images.
/// Strict growth forces `pi(i) >= i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IncMap {
    images: Vec<u32>,
    target: u32,
}

impl IncMap {
    pub fn new(images: Vec<u32>, target: u32) -> Result<Self> {
        let increasing = images.windows(2).all(|w| w[0] < w[1]);
        let in_range = images.first().is_none_or(|&f| f >= 1)
            && images.last().is_none_or(|&l| l <= target);
        if !increasing || !in_range {
            return Err(Error::InvalidSpec(format!(
                "images {images:?} do not form a strictly increasing map into 1..={target}"
            )));
        }
        Ok(IncMap { images, target })
    }

    pub fn identity(m: u32) -> Self {
        IncMap { images: (1..=m).collect(), target: m }
    }

    /// Domain width `m`.
    pub fn width(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn image_of(&self, i: u32) -> u32 {
        assert!(i >= 1 && i <= self.width(), "column {i} outside domain");
        self.images[(i - 1) as usize]
    }

    /// Applies the map to anything column-indexed. The input may only use
    /// columns `<= m`.
    pub fn apply<T: ColumnMapped>(&self, t: &T) -> Result<T> {
        if t.max_column() > self.width() {
            return Err(Error::HorizonTooShort {
                op: "apply_inc",
                needed: t.max_column(),
                got: self.width(),
            });
        }
        Ok(t.map_columns(|j| self.image_of(j)))
    }

    /// All strictly increasing maps `1..=m -> 1..=n`.
    pub fn all(m: u32, n: u32) -> Vec<IncMap> {
        assert!(m <= n, "increasing maps need m <= n");
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(m as usize);
        fn rec(next_min: u32, left: u32, n: u32, current: &mut Vec<u32>, out: &mut Vec<IncMap>) {
            if left == 0 {
                out.push(IncMap { images: current.clone(), target: n });
                return;
            }
            for v in next_min..=(n - left + 1) {
                current.push(v);
                rec(v + 1, left - 1, n, current, out);
                current.pop();
            }
        }
        rec(1, m, n, &mut current, &mut out);
        out
    }

    /// Extends this map to a permutation of `1..=n` that agrees with it on
    /// the given columns; remaining columns are matched up in ascending
    /// order. Any monomial supported on `cols` has the same image under the
    /// returned permutation as under `self`.
    pub fn extend_to_permutation(&self, cols: &BTreeSet<u32>, n: u32) -> Result<Permutation> {
        if n < self.target {
            return Err(Error::HorizonTooShort { op: "extend_to_permutation", needed: self.target, got: n });
        }
        if cols.iter().any(|&j| j < 1 || j > self.width()) {
            return Err(Error::InvalidSpec("support columns outside the map's domain".into()));
        }
        let mut images = vec![0u32; n as usize];
        let used: BTreeSet<u32> = cols.iter().map(|&j| self.image_of(j)).collect();
        for &j in cols {
            images[(j - 1) as usize] = self.image_of(j);
        }
        let mut free = (1..=n).filter(|v| !used.contains(v));
        for j in 1..=n {
            if !cols.contains(&j) {
                images[(j - 1) as usize] = free.next().expect("counts match");
            }
        }
        Permutation::from_images(images)
    }
}

/// A permutation of `1..=n`, stored by its images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len() as u32;
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v < 1 || v > n || seen[(v - 1) as usize] {
                return Err(Error::InvalidSpec(format!(
                    "images {images:?} are not a permutation of 1..={n}"
                )));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u32) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn image_of(&self, i: u32) -> u32 {
        assert!(i >= 1 && i <= self.n(), "column {i} outside domain");
        self.images[(i - 1) as usize]
    }

    /// Applies the permutation to anything column-indexed. The input may
    /// only use columns `<= n`.
    pub fn apply<T: ColumnMapped>(&self, t: &T) -> Result<T> {
        if t.max_column() > self.n() {
            return Err(Error::HorizonTooShort {
                op: "apply_perm",
                needed: t.max_column(),
                got: self.n(),
            });
        }
        Ok(t.map_columns(|j| self.image_of(j)))
    }

    /// All `n!` permutations of `1..=n`, in lexicographic image order.
    /// Intended for small `n` only.
    pub fn all(n: u32) -> Vec<Permutation> {
        assert!(n <= 9, "full symmetric group enumeration is desk-scale only");
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n as usize);
        let mut used = vec![false; n as usize];
        fn rec(n: u32, current: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            if current.len() == n as usize {
                out.push(Permutation { images: current.clone() });
                return;
            }
            for v in 1..=n {
                if !used[(v - 1) as usize] {
                    used[(v - 1) as usize] = true;
                    current.push(v);
                    rec(n, current, used, out);
                    current.pop();
                    used[(v - 1) as usize] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }
}

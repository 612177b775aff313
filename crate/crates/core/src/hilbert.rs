//! Exact Hilbert series of quotients by monomial ideals.
//!
//! The numerator of `H(R/I; t)` over the standard denominator `(1-t)^N`
//! is computed by a pivot recursion: splitting along a well-chosen
//! variable `x` gives `N(I) = t * N(I:x) + N(I + <x>)`, with closed forms
//! once every generator is a pure power. Reducing the fraction yields the
//! dimension, the degree, and the codimension. A width-indexed table of
//! series coefficients supports checking closed bivariate forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chain::ChainSnapshot;
use crate::error::{Error, Result};
use crate::ideal::{minimalize, MonomialIdeal};
use crate::ring::monomial::{Monomial, VarIndex};

/// Dense integer polynomial in one variable `t`, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs<I: Into<BigInt>>(coeffs: Vec<I>) -> Self {
        let mut p = IntPoly { coeffs: coeffs.into_iter().map(Into::into).collect() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(k) + other.coeff(k);
        }
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(k) - other.coeff(k);
        }
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// `1 - t^e`.
    pub fn one_minus_t_pow(e: u32) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); e as usize + 1];
        coeffs[0] = BigInt::one();
        coeffs[e as usize] = -BigInt::one();
        IntPoly { coeffs }
    }

    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact quotient by `1 - t`, or `None` when `1` is not a root.
    pub fn div_exact_one_minus_t(&self) -> Option<IntPoly> {
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        // p = (1-t) q  <=>  q_k = p_0 + ... + p_k, with the full sum zero
        let mut acc = BigInt::zero();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            acc += c;
            coeffs.push(acc.clone());
        }
        if !coeffs.pop().expect("nonzero polynomial").is_zero() {
            return None;
        }
        let mut q = IntPoly { coeffs };
        q.trim();
        Some(q)
    }

    /// First `upto + 1` coefficients of `self / (1-t)^power` as a power
    /// series: each division by `1-t` is a running prefix sum.
    pub fn series_coeffs(&self, power: u32, upto: usize) -> Vec<BigInt> {
        let mut c: Vec<BigInt> =
            (0..=upto).map(|k| self.coeff(k)).collect();
        for _ in 0..power {
            let mut acc = BigInt::zero();
            for v in c.iter_mut() {
                acc += &*v;
                *v = acc.clone();
            }
        }
        c
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if k > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Hilbert series data of `R/I` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    /// Number of ambient variables.
    pub num_vars: u32,
    /// Numerator over `(1-t)^num_vars`.
    pub raw_numerator: IntPoly,
    /// Numerator of the reduced form `Q(t) / (1-t)^dim`, with `Q(1) != 0`.
    pub reduced_numerator: IntPoly,
    pub dim: u32,
    /// Multiplicity `Q(1)`; `0` exactly for the unit ideal.
    pub degree: BigInt,
    pub codim: u32,
    pub is_unit_ideal: bool,
}

/// How the recursion picks its splitting variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// The variable occurring in the most generators of degree at least 2,
    /// restricted to variables with some exponent >= 2 or shared support;
    /// ties go to the smallest variable.
    MostShared,
    /// Always the smallest variable of the first non-pure-power generator.
    SmallestVar,
}

fn pick_pivot(gens: &[Monomial], rule: PivotRule) -> VarIndex {
    let mixed: Vec<&Monomial> = gens.iter().filter(|g| !g.is_pure_power()).collect();
    debug_assert!(!mixed.is_empty(), "pivot requested on pure powers");
    match rule {
        PivotRule::SmallestVar => mixed[0]
            .support()
            .next()
            .expect("nonconstant generator"),
        PivotRule::MostShared => {
            let mut counts: BTreeMap<VarIndex, usize> = BTreeMap::new();
            for g in gens.iter().filter(|g| g.degree() >= 2) {
                for v in g.support() {
                    *counts.entry(v).or_insert(0) += 1;
                }
            }
            // restrict to variables that occur in some mixed generator,
            // so the split makes progress
            let allowed: std::collections::BTreeSet<VarIndex> =
                mixed.iter().flat_map(|g| g.support()).collect();
            counts
                .into_iter()
                .filter(|(v, _)| allowed.contains(v))
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|(v, _)| v)
                .expect("mixed generator provides a pivot")
        }
    }
}

fn numerator(gens: &[Monomial], rule: PivotRule) -> IntPoly {
    if gens.is_empty() {
        return IntPoly::one();
    }
    if gens.iter().any(Monomial::is_one) {
        return IntPoly::zero();
    }
    if gens.iter().all(|g| g.is_pure_power()) {
        let mut acc = IntPoly::one();
        for g in gens {
            acc = acc.mul(&IntPoly::one_minus_t_pow(g.degree() as u32));
        }
        return acc;
    }
    let pivot = pick_pivot(gens, rule);
    let x = Monomial::var(pivot.row, pivot.col);
    // N(I) = t * N(I : x) + N(I + <x>)
    let colon: Vec<Monomial> =
        minimalize(gens.iter().map(|g| g.try_div(&g.gcd(&x)).expect("gcd divides")));
    let mut plus: Vec<Monomial> = gens.to_vec();
    plus.push(x);
    let plus = minimalize(plus);
    numerator(&colon, rule).shift(1).add(&numerator(&plus, rule))
}

/// Hilbert series of `R/I` with the default pivot rule.
pub fn hilbert_series(ideal: &MonomialIdeal) -> Result<HilbertData> {
    hilbert_series_with(ideal, PivotRule::MostShared)
}

/// Hilbert series of `R/I`; the ambient width must be bounded.
pub fn hilbert_series_with(ideal: &MonomialIdeal, rule: PivotRule) -> Result<HilbertData> {
    let num_vars = ideal.ambient().num_vars("hilbert_series")?;
    let raw = numerator(ideal.gens(), rule);
    let mut q = raw.clone();
    let mut stripped = 0u32;
    while !q.is_zero() && q.eval_one().is_zero() {
        q = q.div_exact_one_minus_t().expect("eval at 1 vanished");
        stripped += 1;
    }
    if stripped > num_vars {
        return Err(Error::Internal(format!(
            "numerator divisible by (1-t)^{stripped} in {num_vars} variables"
        )));
    }
    let is_unit = q.is_zero();
    let dim = if is_unit { 0 } else { num_vars - stripped };
    let degree = q.eval_one();
    Ok(HilbertData {
        num_vars,
        raw_numerator: raw,
        reduced_numerator: q,
        dim,
        degree,
        codim: num_vars - dim,
        is_unit_ideal: is_unit,
    })
}

/// Series data for every width of a monomial chain, truncated at a total
/// degree bound.
#[derive(Debug, Clone)]
pub struct SeriesTable {
    /// Truncation: coefficients are kept for `n + u <= bound`.
    pub bound: u32,
    pub per_n: Vec<(u32, HilbertData)>,
    /// Coefficient of `s^n t^u` in `sum_n H(R_n/I_n; t) s^n`, with the
    /// width-zero term equal to 1.
    pub coefficients: BTreeMap<(u32, u32), BigInt>,
}

/// Tabulates `H(R_n/I_n; t)` for all materialized widths.
pub fn series_table(snaps: &[ChainSnapshot], bound: u32) -> Result<SeriesTable> {
    let mut per_n = Vec::new();
    let mut coefficients = BTreeMap::new();
    coefficients.insert((0, 0), BigInt::one());
    for snap in snaps {
        let ideal = snap.ideal_as_monomial("series_table")?;
        let data = hilbert_series(ideal)?;
        if snap.n <= bound {
            let upto = (bound - snap.n) as usize;
            let coeffs = data.raw_numerator.series_coeffs(data.num_vars, upto);
            for (u, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    coefficients.insert((snap.n, u as u32), c);
                }
            }
        }
        per_n.push((snap.n, data));
    }
    Ok(SeriesTable { bound, per_n, coefficients })
}

/// Integer polynomial in the width marker `s` and the degree marker `t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    /// `(s_exponent, t_exponent) -> coefficient`, zeros omitted.
    pub terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivariatePoly {
    pub fn from_terms<I: Into<BigInt>>(terms: Vec<(u32, u32, I)>) -> Self {
        let mut map: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (a, b, c) in terms {
            let c = c.into();
            let entry = map.entry((a, b)).or_insert_with(BigInt::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        BivariatePoly { terms: map }
    }
}

/// Outcome of checking a closed rational form against a series table.
#[derive(Debug, Clone, PartialEq)]
pub enum BivariateCheck {
    Pass {
        compared: usize,
    },
    Mismatch {
        n: u32,
        u: u32,
        table: BigRational,
        form: BigRational,
    },
}

/// Expands `numer / denom` as a power series in `s, t` and compares every
/// coefficient with `n + u <= bound` against the table.
pub fn verify_bivariate_form(
    table: &SeriesTable,
    numer: &BivariatePoly,
    denom: &BivariatePoly,
    bound: u32,
) -> Result<BivariateCheck> {
    if bound > table.bound {
        return Err(Error::HorizonTooShort {
            op: "verify_bivariate_form",
            needed: bound,
            got: table.bound,
        });
    }
    let max_n = table.per_n.last().map(|(n, _)| *n).unwrap_or(0);
    if bound > max_n {
        return Err(Error::HorizonTooShort {
            op: "verify_bivariate_form",
            needed: bound,
            got: max_n,
        });
    }
    let d00 = denom.terms.get(&(0, 0)).cloned().unwrap_or_else(BigInt::zero);
    if d00.is_zero() {
        return Err(Error::Unsupported(
            "denominator needs a nonzero constant term to expand as a series".into(),
        ));
    }
    let d00 = BigRational::from_integer(d00);
    let mut series: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
    let mut compared = 0usize;
    for total in 0..=bound {
        for n in 0..=total {
            let u = total - n;
            let mut acc = numer
                .terms
                .get(&(n, u))
                .map(|c| BigRational::from_integer(c.clone()))
                .unwrap_or_else(BigRational::zero);
            for (&(a, b), c) in &denom.terms {
                if (a, b) == (0, 0) || a > n || b > u {
                    continue;
                }
                acc -= BigRational::from_integer(c.clone()) * &series[&(n - a, u - b)];
            }
            let value = acc / &d00;
            let expected = table
                .coefficients
                .get(&(n, u))
                .map(|c| BigRational::from_integer(c.clone()))
                .unwrap_or_else(BigRational::zero);
            if value != expected {
                return Ok(BivariateCheck::Mismatch { n, u, table: expected, form: value });
            }
            compared += 1;
            series.insert((n, u), value);
        }
    }
    Ok(BivariateCheck::Pass { compared })
}

/// Degrees along the chain and their exact consecutive ratios.
#[derive(Debug, Clone)]
pub struct DegreeGrowth {
    pub per_n: Vec<(u32, BigInt)>,
    /// Ratio `degree(n) / degree(n-1)`, keyed by `n`; skips zero degrees.
    pub ratios: Vec<(u32, BigRational)>,
    /// The final ratio, when the last two ratios agree exactly.
    pub limit_candidate: Option<BigRational>,
}

/// Tracks multiplicity growth along the chain.
pub fn degree_growth(table: &SeriesTable) -> Result<DegreeGrowth> {
    if table.per_n.len() < 4 {
        return Err(Error::TooFewPoints {
            op: "degree_growth",
            needed: 4,
            got: table.per_n.len(),
        });
    }
    let per_n: Vec<(u32, BigInt)> =
        table.per_n.iter().map(|(n, d)| (*n, d.degree.clone())).collect();
    let mut ratios = Vec::new();
    for w in per_n.windows(2) {
        let (_, ref prev) = w[0];
        let (n, ref next) = w[1];
        if !prev.is_zero() {
            ratios.push((
                n,
                BigRational::new(next.clone(), prev.clone()),
            ));
        }
    }
    let limit_candidate = match ratios.as_slice() {
        [.., (_, a), (_, b)] if a == b => Some(b.clone()),
        _ => None,
    };
    Ok(DegreeGrowth { per_n, ratios, limit_candidate })
}

impl ChainSnapshot {
    /// The snapshot's monomial ideal, or an error naming the operation.
    pub fn ideal_as_monomial(&self, op: &'static str) -> Result<&MonomialIdeal> {
        self.monomial()
            .ok_or_else(|| Error::Unsupported(format!("{op}: needs a monomial chain")))
    }
}

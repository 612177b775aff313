//! Eventual laws along a chain: exact linear fits and their verdicts.
//!
//! Every function here consumes per-width data that the other modules
//! computed exactly, so fits are integer equalities, never regressions.
//! Verdicts distinguish a confirmed law, a bound that held, a genuine
//! mismatch, and a horizon too short to tell.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;

use crate::betti::{betti_table, BettiTable};
use crate::chain::{ChainSnapshot, ChainSpec};
use crate::error::{Error, Result};
use crate::ring::monomial::{Monomial, VarIndex};

/// An exact eventual-linear law `value(n) = slope * n + intercept` holding
/// from `onset` through `end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinearFit {
    pub slope: i64,
    pub intercept: i64,
    pub onset: u32,
    pub end: u32,
}

impl LinearFit {
    pub fn at(&self, n: u32) -> i64 {
        self.slope * n as i64 + self.intercept
    }
}

/// Finds the minimal onset from which the data is exactly linear through
/// the horizon, requiring at least 3 points on the line. `None` when no
/// such tail exists.
pub fn fit_eventual_linear(values: &BTreeMap<u32, i64>) -> Result<Option<LinearFit>> {
    let pts: Vec<(u32, i64)> = values.iter().map(|(&n, &v)| (n, v)).collect();
    if pts.len() < 4 {
        return Err(Error::TooFewPoints {
            op: "fit_eventual_linear",
            needed: 4,
            got: pts.len(),
        });
    }
    if pts.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
        return Err(Error::Unsupported(
            "eventual-linear fits need consecutive widths".into(),
        ));
    }
    let diffs: Vec<i64> = pts.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let slope = *diffs.last().expect("at least three diffs");
    let mut start = diffs.len();
    while start > 0 && diffs[start - 1] == slope {
        start -= 1;
    }
    // diffs[start..] are constant; the line holds on pts[start..]
    if pts.len() - start < 3 {
        return Ok(None);
    }
    let (onset, value) = pts[start];
    Ok(Some(LinearFit {
        slope,
        intercept: value - slope * onset as i64,
        onset,
        end: pts.last().expect("nonempty").0,
    }))
}

/// How observed data relates to a predicted law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The eventual law equals the prediction exactly.
    Match,
    /// An inequality-style prediction held at every point.
    BoundHolds,
    /// Data contradicts the prediction.
    Mismatch,
    /// Not enough stabilized data within the horizon to decide.
    InconclusiveHorizon,
}

/// A prediction checked against per-width data.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionReport {
    pub quantity: String,
    pub predicted_slope: Option<i64>,
    pub predicted_intercept: Option<i64>,
    pub observed: Option<LinearFit>,
    pub per_n: Vec<(u32, i64)>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Codimension should eventually grow by the stabilized minimal cover
/// size per width.
pub fn predict_codim(
    min_cover: u32,
    codims: &BTreeMap<u32, i64>,
) -> Result<PredictionReport> {
    let fit = fit_eventual_linear(codims)?;
    let verdict = match &fit {
        None => Verdict::InconclusiveHorizon,
        Some(f) if f.slope == min_cover as i64 => Verdict::Match,
        Some(_) => Verdict::Mismatch,
    };
    let mut notes = Vec::new();
    match &fit {
        Some(f) => notes.push(format!(
            "codim(n) = {}n + {} from n = {}",
            f.slope, f.intercept, f.onset
        )),
        None => notes.push("no linear tail with 3 points within the horizon".into()),
    }
    Ok(PredictionReport {
        quantity: "codim".into(),
        predicted_slope: Some(min_cover as i64),
        predicted_intercept: None,
        observed: fit,
        per_n: codims.iter().map(|(&n, &v)| (n, v)).collect(),
        verdict,
        notes,
    })
}

/// For single-row partition chains: regularity is eventually the line with
/// slope `omega - 1` through the regularity of `I_r : (x_1...x_r)^{omega-1}`.
pub fn predict_reg_c1(
    spec: &ChainSpec,
    snaps: &[ChainSnapshot],
    regs: &BTreeMap<u32, i64>,
) -> Result<PredictionReport> {
    let (_, r, omega) = spec.partition_data().ok_or_else(|| {
        Error::Unsupported(
            "regularity prediction needs a single-row permutation-invariant \
             chain generated by partitions"
                .into(),
        )
    })?;
    let snap = snaps.iter().find(|s| s.n == r).ok_or(Error::HorizonTooShort {
        op: "predict_reg_c1",
        needed: r,
        got: snaps.iter().map(|s| s.n).max().unwrap_or(0),
    })?;
    let ideal = snap.ideal_as_monomial("predict_reg_c1")?;
    let alpha = Monomial::from_pairs((1..=r).map(|j| (VarIndex::new(1, j), omega - 1)));
    let colon = ideal.colon(&alpha);
    let table = betti_table(&colon)?;
    let intercept = table.reg().ok_or_else(|| {
        Error::Internal("colon ideal of a proper ideal has a Betti table".into())
    })? as i64;
    let slope = omega as i64 - 1;
    let fit = fit_eventual_linear(regs)?;
    let verdict = match &fit {
        None => Verdict::InconclusiveHorizon,
        Some(f) if f.slope == slope && f.intercept == intercept => Verdict::Match,
        Some(_) => Verdict::Mismatch,
    };
    let notes = vec![format!(
        "predicted reg(n) = {slope}n + {intercept}; the intercept is the \
         regularity of the width-{r} colon ideal {}",
        colon.render()
    )];
    Ok(PredictionReport {
        quantity: "reg".into(),
        predicted_slope: Some(slope),
        predicted_intercept: Some(intercept),
        observed: fit,
        per_n: regs.iter().map(|(&n, &v)| (n, v)).collect(),
        verdict,
        notes,
    })
}

/// Linear upper bound for regularity from the stabilized weights: slope
/// `max(omega - 1, 0) + max_l sum_{k != l} w_k`, intercept chosen to make
/// the bound tight at the first data point.
pub fn reg_upper_bound(
    row_weights: &[u32],
    omega: u32,
    regs: &BTreeMap<u32, i64>,
) -> Result<PredictionReport> {
    if regs.len() < 2 {
        return Err(Error::TooFewPoints {
            op: "reg_upper_bound",
            needed: 2,
            got: regs.len(),
        });
    }
    let total: i64 = row_weights.iter().map(|&w| w as i64).sum();
    let max_excluded = row_weights
        .iter()
        .map(|&w| total - w as i64)
        .max()
        .ok_or_else(|| Error::InvalidSpec("weights need at least one row".into()))?;
    let slope = (omega as i64 - 1).max(0) + max_excluded;
    let (&first_n, &first_reg) = regs.first_key_value().expect("nonempty");
    let intercept = first_reg - slope * first_n as i64;
    let mut verdict = Verdict::BoundHolds;
    let mut notes = vec![format!(
        "bound reg(n) <= {slope}n + {intercept}, tight at n = {first_n}"
    )];
    for (&n, &reg) in regs {
        let bound = slope * n as i64 + intercept;
        if reg > bound {
            verdict = Verdict::Mismatch;
            notes.push(format!("violated at n = {n}: reg {reg} > bound {bound}"));
            break;
        }
    }
    Ok(PredictionReport {
        quantity: "reg upper bound".into(),
        predicted_slope: Some(slope),
        predicted_intercept: Some(intercept),
        observed: None,
        per_n: regs.iter().map(|(&n, &v)| (n, v)).collect(),
        verdict,
        notes,
    })
}

/// One width of the projective-dimension sandwich.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PdBoundsRow {
    pub n: u32,
    pub pd: i64,
    pub lower: i64,
    pub upper: i64,
}

/// The sandwich `codim - 1 <= pd <= rows*n - 1`, plus the single-row
/// refinement `pd(n) = n - b` for an eventually constant `b`.
#[derive(Debug, Clone, Serialize)]
pub struct PdBoundsReport {
    pub per_n: Vec<PdBoundsRow>,
    pub bounds_hold: bool,
    pub one_row_fit: Option<LinearFit>,
    /// For single-row chains with a slope-1 fit: `b` in `pd(n) = n - b`.
    pub offset: Option<i64>,
    pub verdict: Verdict,
}

/// Checks the projective-dimension bounds at every width.
pub fn pd_bounds_check(
    rows: u32,
    pds: &BTreeMap<u32, i64>,
    codims: &BTreeMap<u32, i64>,
) -> Result<PdBoundsReport> {
    let mut per_n = Vec::new();
    let mut bounds_hold = true;
    for (&n, &pd) in pds {
        let codim = *codims.get(&n).ok_or_else(|| {
            Error::Internal(format!("pd data at width {n} lacks a codim partner"))
        })?;
        let row = PdBoundsRow {
            n,
            pd,
            lower: codim - 1,
            upper: (rows * n) as i64 - 1,
        };
        bounds_hold &= row.lower <= pd && pd <= row.upper;
        per_n.push(row);
    }
    let mut one_row_fit = None;
    let mut offset = None;
    let verdict = if !bounds_hold {
        Verdict::Mismatch
    } else if rows == 1 {
        match fit_eventual_linear(pds)? {
            Some(f) if f.slope == 1 => {
                offset = Some(-f.intercept);
                one_row_fit = Some(f);
                Verdict::Match
            }
            Some(f) => {
                one_row_fit = Some(f);
                Verdict::Mismatch
            }
            None => Verdict::InconclusiveHorizon,
        }
    } else {
        Verdict::BoundHolds
    };
    Ok(PdBoundsReport { per_n, bounds_hold, one_row_fit, offset, verdict })
}

/// The internal degrees seen in one homological column across widths.
#[derive(Debug, Clone, Serialize)]
pub struct ColumnStability {
    pub column: u32,
    pub per_n: Vec<(u32, Vec<u32>)>,
    pub stabilized: bool,
    /// The stabilized degree set (empty unless stabilized).
    pub degrees: Vec<u32>,
    pub onset: Option<u32>,
}

/// For each column up to `max_column`, reports whether the set of internal
/// degrees with nonzero entries is constant on a tail of length >= 2.
pub fn betti_column_stability(
    tables: &BTreeMap<u32, BettiTable>,
    max_column: u32,
) -> Vec<ColumnStability> {
    (0..=max_column)
        .map(|column| {
            let per_n: Vec<(u32, Vec<u32>)> = tables
                .iter()
                .map(|(&n, t)| (n, t.column_degrees(column).into_iter().collect()))
                .collect();
            let last = per_n.last().map(|(_, s)| s.clone()).unwrap_or_default();
            let mut onset = None;
            if !last.is_empty() {
                for (n, s) in per_n.iter().rev() {
                    if *s == last {
                        onset = Some(*n);
                    } else {
                        break;
                    }
                }
            }
            // a tail of length 1 is no evidence of stability
            let stabilized =
                onset.is_some_and(|o| per_n.last().is_some_and(|(n, _)| o < *n));
            ColumnStability {
                column,
                per_n,
                stabilized,
                degrees: if stabilized { last } else { Vec::new() },
                onset: if stabilized { onset } else { None },
            }
        })
        .collect()
}

/// A line of Betti support points: start `(column, row)` at the stability
/// index, advancing one column and `slope` rows per extra width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Segment {
    pub start: (u32, u32),
    pub slope: u32,
}

impl Segment {
    /// Points covered after `len` widths beyond the stability index.
    pub fn points(&self, len: u32) -> BTreeSet<(u32, u32)> {
        let (i, row) = self.start;
        (0..=len).map(|k| (i + k, row + self.slope * k)).collect()
    }
}

/// Outcome of the segment search.
#[derive(Debug, Clone, Serialize)]
pub enum SegmentOutcome {
    /// Betti support at width `n >= r` equals `base` plus the segments
    /// grown to length `n - r`; the segment set is cardinality-minimal.
    Decomposition {
        r: u32,
        base: BTreeSet<(u32, u32)>,
        segments: Vec<Segment>,
    },
    /// No decomposition exists; the earliest unexplained point.
    Failure {
        n: u32,
        point: (u32, u32),
        reason: String,
    },
}

/// Decomposes Betti support `(column, row)` points into a base plus
/// linearly growing segments started at width `r`. Slope candidates are
/// read off the data: a segment from row `row` can climb at most to the
/// top row of the final width.
pub fn segment_decomposition(
    supports: &BTreeMap<u32, BTreeSet<(u32, u32)>>,
    r: u32,
) -> Result<SegmentOutcome> {
    if r == 0 {
        return Err(Error::InvalidSpec("stability index must be positive".into()));
    }
    let horizon = supports.keys().next_back().copied().unwrap_or(0);
    if supports.keys().next().copied() != Some(r - 1)
        || supports.len() as u32 != horizon - (r - 1) + 1
        || horizon < r + 2
    {
        return Err(Error::HorizonTooShort {
            op: "segment_decomposition",
            needed: r + 2,
            got: horizon,
        });
    }
    let base = supports[&(r - 1)].clone();
    for (&n, support) in supports.range(r..) {
        if let Some(&point) = base.iter().find(|p| !support.contains(p)) {
            return Ok(SegmentOutcome::Failure {
                n,
                point,
                reason: "base point from below the stability index disappeared".into(),
            });
        }
    }
    let top_row = supports[&horizon]
        .iter()
        .map(|&(_, row)| row)
        .max()
        .unwrap_or(0);
    let mut candidates: Vec<Segment> = Vec::new();
    for &(i, row) in &supports[&r] {
        let max_slope = if row > top_row { 0 } else { (top_row - row) / (horizon - r) };
        for slope in 0..=max_slope {
            let seg = Segment { start: (i, row), slope };
            let valid = supports
                .range(r..)
                .all(|(&n, support)| seg.points(n - r).is_subset(support));
            if valid {
                candidates.push(seg);
            }
        }
    }
    if candidates.len() > 20 {
        return Err(Error::Unsupported(format!(
            "{} candidate segments exceed the search cap of 20",
            candidates.len()
        )));
    }
    let covers = |chosen: &[&Segment]| -> bool {
        supports.range(r..).all(|(&n, support)| {
            support.iter().all(|p| {
                base.contains(p) || chosen.iter().any(|seg| seg.points(n - r).contains(p))
            })
        })
    };
    for size in 0..=candidates.len() {
        if let Some(chosen) = candidates
            .iter()
            .combinations(size)
            .find(|chosen| covers(chosen))
        {
            return Ok(SegmentOutcome::Decomposition {
                r,
                base,
                segments: chosen.into_iter().cloned().collect(),
            });
        }
    }
    let all: Vec<&Segment> = candidates.iter().collect();
    let (n, point) = supports
        .range(r..)
        .find_map(|(&n, support)| {
            support
                .iter()
                .find(|p| {
                    !base.contains(p) && !all.iter().any(|s| s.points(n - r).contains(p))
                })
                .map(|&p| (n, p))
        })
        .ok_or_else(|| Error::Internal("cover failed yet every point is covered".into()))?;
    Ok(SegmentOutcome::Failure {
        n,
        point,
        reason: "no candidate segment reaches this point".into(),
    })
}

/// Three independent Cohen-Macaulay verdicts at one width.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CmWidthVerdict {
    pub n: u32,
    /// Homological: projective dimension equals codimension minus one.
    pub cm: bool,
    /// All associated primes share the codimension (embedded ones count).
    pub unmixed: bool,
    /// Each partition has its first `dim + 1` parts equal.
    pub partition_condition: bool,
}

/// The per-width verdicts and whether all three tests agree everywhere.
#[derive(Debug, Clone, Serialize)]
pub struct CmChainReport {
    pub per_n: Vec<CmWidthVerdict>,
    pub all_agree: bool,
}

/// Runs the three Cohen-Macaulay tests on every width at or above the
/// largest partition length. `pds` and `dims` are the precomputed
/// projective dimensions and quotient dimensions.
pub fn cm_criterion(
    spec: &ChainSpec,
    snaps: &[ChainSnapshot],
    pds: &BTreeMap<u32, u32>,
    dims: &BTreeMap<u32, u32>,
) -> Result<CmChainReport> {
    let (partitions, r, _) = spec.partition_data().ok_or_else(|| {
        Error::Unsupported(
            "the Cohen-Macaulay criterion needs a single-row \
             permutation-invariant chain generated by partitions"
                .into(),
        )
    })?;
    let min_len = partitions.iter().map(Vec::len).min().expect("nonempty") as u32;
    let mut per_n = Vec::new();
    for snap in snaps.iter().filter(|s| s.n >= r) {
        let ideal = snap.ideal_as_monomial("cm_criterion")?;
        if ideal.is_zero() || ideal.is_unit() {
            continue;
        }
        let (Some(&pd), Some(&dim)) = (pds.get(&snap.n), dims.get(&snap.n)) else {
            continue;
        };
        if dim + 1 != min_len {
            return Err(Error::Internal(format!(
                "width {}: quotient dimension {dim} does not match the \
                 shortest partition length {min_len}",
                snap.n
            )));
        }
        let p = (dim + 1) as usize;
        let partition_condition = partitions
            .iter()
            .all(|parts| parts.len() >= p && parts[..p].iter().all(|&a| a == parts[0]));
        per_n.push(CmWidthVerdict {
            n: snap.n,
            cm: pd == ideal.codim()? - 1,
            unmixed: ideal.is_unmixed_with_embedded()?,
            partition_condition,
        });
    }
    let all_agree = per_n
        .iter()
        .all(|v| v.cm == v.unmixed && v.unmixed == v.partition_condition);
    Ok(CmChainReport { per_n, all_agree })
}

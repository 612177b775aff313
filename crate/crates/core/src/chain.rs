//! Chains of ideals linked by column symmetries.
//!
//! A [`ChainSpec`] names the ambient rows, the coefficient field, the
//! symmetry type (full column permutations or increasing maps), finitely
//! many orbit generators with their home widths, and a horizon.
//! [`materialize`] turns it into one concrete ideal per width `n`, and the
//! functions below measure how the resulting chain stabilizes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ideal::{minimalize, CoverReport, MonomialIdeal, WeightReport};
use crate::ring::action::{ColumnMapped, IncMap, Permutation};
use crate::ring::monomial::{Monomial, VarIndex};
use crate::ring::poly::Polynomial;
use crate::ring::{Field, RingContext};

/// Which column action links the widths of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// Full symmetric group on columns.
    Sym,
    /// Strictly increasing maps between column ranges.
    Inc,
}

/// One orbit generator together with its home width.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Shorthand for a single-row monomial `x[1,1]^a1 * ... * x[1,k]^ak`
    /// given by a weakly decreasing exponent list; home width is the length.
    Partition(Vec<u32>),
    Monomial { width: u32, monomial: Monomial },
    Polynomial { width: u32, polynomial: Polynomial },
}

impl Generator {
    pub fn home_width(&self) -> u32 {
        match self {
            Generator::Partition(parts) => parts.len() as u32,
            Generator::Monomial { width, .. } | Generator::Polynomial { width, .. } => *width,
        }
    }

    /// The partition generators denote plain monomials.
    pub fn as_monomial(&self) -> Option<Monomial> {
        match self {
            Generator::Partition(parts) => Some(Monomial::from_pairs(
                parts
                    .iter()
                    .enumerate()
                    .map(|(idx, &e)| (VarIndex::new(1, idx as u32 + 1), e)),
            )),
            Generator::Monomial { monomial, .. } => Some(monomial.clone()),
            Generator::Polynomial { .. } => None,
        }
    }
}

/// A chain description, usually read from a JSON file.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub name: String,
    pub rows: u32,
    pub field: Field,
    pub symmetry: Symmetry,
    pub generators: Vec<Generator>,
    pub horizon: u32,
}

// Wire format. Unknown fields are rejected everywhere so typos in spec
// files fail loudly.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainSpecFile {
    name: String,
    rows: u32,
    field: FieldFile,
    symmetry: String,
    generators: Vec<GeneratorFile>,
    horizon: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    #[serde(rename = "char")]
    characteristic: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    #[serde(default)]
    partition: Option<Vec<u32>>,
    #[serde(default)]
    width: Option<u32>,
    #[serde(default)]
    monomial: Option<Vec<(u32, u32, u32)>>,
    #[serde(default)]
    polynomial: Option<Vec<TermFile>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    coeff: String,
    monomial: Vec<(u32, u32, u32)>,
}

fn monomial_from_entries(entries: &[(u32, u32, u32)]) -> Result<Monomial> {
    for &(k, j, e) in entries {
        if k < 1 || j < 1 || e < 1 {
            return Err(Error::InvalidSpec(format!(
                "monomial entry [{k},{j},{e}] must have row, column, exponent >= 1"
            )));
        }
    }
    Ok(Monomial::from_pairs(
        entries.iter().map(|&(k, j, e)| (VarIndex::new(k, j), e)),
    ))
}

impl ChainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChainSpecFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let field = Field::new(file.field.characteristic)?;
        let symmetry = match file.symmetry.as_str() {
            "sym" => Symmetry::Sym,
            "inc" => Symmetry::Inc,
            other => {
                return Err(Error::InvalidSpec(format!(
                    "symmetry must be \"sym\" or \"inc\", got {other:?}"
                )))
            }
        };
        let mut generators = Vec::new();
        for (idx, g) in file.generators.iter().enumerate() {
            let gen = match (&g.partition, &g.monomial, &g.polynomial) {
                (Some(parts), None, None) => {
                    if g.width.is_some() {
                        return Err(Error::InvalidSpec(format!(
                            "generator {idx}: partition generators carry no width field"
                        )));
                    }
                    Generator::Partition(parts.clone())
                }
                (None, Some(entries), None) => Generator::Monomial {
                    width: g.width.ok_or_else(|| {
                        Error::InvalidSpec(format!("generator {idx}: monomial needs a width"))
                    })?,
                    monomial: monomial_from_entries(entries)?,
                },
                (None, None, Some(terms)) => {
                    let poly = Polynomial::from_terms(
                        &field,
                        terms
                            .iter()
                            .map(|t| {
                                Ok((monomial_from_entries(&t.monomial)?, field.parse(&t.coeff)?))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                    Generator::Polynomial {
                        width: g.width.ok_or_else(|| {
                            Error::InvalidSpec(format!("generator {idx}: polynomial needs a width"))
                        })?,
                        polynomial: poly,
                    }
                }
                _ => {
                    return Err(Error::InvalidSpec(format!(
                        "generator {idx}: use exactly one of partition, monomial, polynomial"
                    )))
                }
            };
            generators.push(gen);
        }
        let spec = ChainSpec {
            name: file.name,
            rows: file.rows,
            field,
            symmetry,
            generators,
            horizon: file.horizon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidSpec("chain needs a name".into()));
        }
        if self.rows == 0 {
            return Err(Error::InvalidSpec("chain needs at least one row".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::InvalidSpec("chain needs at least one generator".into()));
        }
        for (idx, g) in self.generators.iter().enumerate() {
            match g {
                Generator::Partition(parts) => {
                    if parts.is_empty() || parts.contains(&0) {
                        return Err(Error::InvalidSpec(format!(
                            "generator {idx}: partition parts must be positive"
                        )));
                    }
                    if parts.windows(2).any(|w| w[0] < w[1]) {
                        return Err(Error::InvalidSpec(format!(
                            "generator {idx}: partition parts must be weakly decreasing"
                        )));
                    }
                }
                Generator::Monomial { width, monomial } => {
                    if monomial.is_one() {
                        return Err(Error::InvalidSpec(format!(
                            "generator {idx}: the monomial 1 generates the unit ideal"
                        )));
                    }
                    self.check_grid(idx, monomial.max_row(), monomial.max_col(), *width)?;
                }
                Generator::Polynomial { width, polynomial } => {
                    if polynomial.is_zero() {
                        return Err(Error::InvalidSpec(format!(
                            "generator {idx}: zero polynomial generator"
                        )));
                    }
                    let max_row = polynomial.monomials().map(|m| m.max_row()).max().unwrap_or(0);
                    let max_col = polynomial.max_column();
                    self.check_grid(idx, max_row, max_col, *width)?;
                }
            }
        }
        let max_width = self.max_home_width();
        if self.horizon < max_width {
            return Err(Error::InvalidSpec(format!(
                "horizon {} is below the widest generator ({max_width})",
                self.horizon
            )));
        }
        Ok(())
    }

    fn check_grid(&self, idx: usize, max_row: u32, max_col: u32, width: u32) -> Result<()> {
        if width == 0 {
            return Err(Error::InvalidSpec(format!("generator {idx}: width must be positive")));
        }
        if max_row > self.rows {
            return Err(Error::InvalidSpec(format!(
                "generator {idx}: uses row {max_row} but the chain has {} rows",
                self.rows
            )));
        }
        if max_col > width {
            return Err(Error::InvalidSpec(format!(
                "generator {idx}: uses column {max_col} beyond its width {width}"
            )));
        }
        Ok(())
    }

    pub fn max_home_width(&self) -> u32 {
        self.generators.iter().map(|g| g.home_width()).max().unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        self.generators
            .iter()
            .all(|g| !matches!(g, Generator::Polynomial { .. }))
    }

    /// For single-row permutation-invariant chains generated entirely by
    /// partitions, returns the partition list, the largest length, and the
    /// smallest leading part.
    pub fn partition_data(&self) -> Option<(Vec<Vec<u32>>, u32, u32)> {
        if self.rows != 1 || self.symmetry != Symmetry::Sym {
            return None;
        }
        let mut parts = Vec::new();
        for g in &self.generators {
            match g {
                Generator::Partition(p) => parts.push(p.clone()),
                _ => return None,
            }
        }
        let r = parts.iter().map(|p| p.len() as u32).max()?;
        let omega = parts.iter().map(|p| p[0]).min()?;
        Some((parts, r, omega))
    }

    pub fn ambient(&self, n: u32) -> RingContext {
        RingContext { rows: self.rows, width: Some(n), field: self.field }
    }
}

/// One materialized width.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSnapshot {
    pub n: u32,
    pub ideal: SnapshotIdeal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SnapshotIdeal {
    Monomial(MonomialIdeal),
    Polynomial { ambient: RingContext, gens: Vec<Polynomial> },
}

impl ChainSnapshot {
    pub fn monomial(&self) -> Option<&MonomialIdeal> {
        match &self.ideal {
            SnapshotIdeal::Monomial(i) => Some(i),
            SnapshotIdeal::Polynomial { .. } => None,
        }
    }

    pub fn num_gens(&self) -> usize {
        match &self.ideal {
            SnapshotIdeal::Monomial(i) => i.num_gens(),
            SnapshotIdeal::Polynomial { gens, .. } => gens.len(),
        }
    }
}

/// Orbit of a monomial under all column permutations of `1..=n`, computed by
/// placing the distinct column patterns onto the available columns rather
/// than enumerating `n!` permutations.
pub fn sym_orbit(u: &Monomial, n: u32) -> Result<BTreeSet<Monomial>> {
    if u.max_col() > n {
        return Err(Error::HorizonTooShort { op: "sym_orbit", needed: u.max_col(), got: n });
    }
    // group support columns by their exponent pattern down the rows
    let mut patterns: BTreeMap<Vec<(u32, u32)>, u32> = BTreeMap::new();
    for col in u.support_cols() {
        let pat: Vec<(u32, u32)> = u
            .exps()
            .filter(|(v, _)| v.col == col)
            .map(|(v, e)| (v.row, e))
            .collect();
        *patterns.entry(pat).or_insert(0) += 1;
    }
    let patterns: Vec<(Vec<(u32, u32)>, u32)> = patterns.into_iter().collect();
    let mut out = BTreeSet::new();
    let mut placed: Vec<(usize, Vec<u32>)> = Vec::new();
    fn rec(
        patterns: &[(Vec<(u32, u32)>, u32)],
        idx: usize,
        free: &[u32],
        placed: &mut Vec<(usize, Vec<u32>)>,
        out: &mut BTreeSet<Monomial>,
    ) {
        if idx == patterns.len() {
            let pairs = placed.iter().flat_map(|(p, cols)| {
                cols.iter().flat_map(move |&col| {
                    patterns[*p].0.iter().map(move |&(row, e)| (VarIndex::new(row, col), e))
                })
            });
            out.insert(Monomial::from_pairs(pairs));
            return;
        }
        let count = patterns[idx].1 as usize;
        // choose `count` of the free columns for this pattern
        let mut combo: Vec<usize> = (0..count).collect();
        loop {
            let cols: Vec<u32> = combo.iter().map(|&i| free[i]).collect();
            let rest: Vec<u32> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| !combo.contains(i))
                .map(|(_, &c)| c)
                .collect();
            placed.push((idx, cols));
            rec(patterns, idx + 1, &rest, placed, out);
            placed.pop();
            // next combination of indices into `free`
            let k = combo.len();
            let nfree = free.len();
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if combo[i] != i + nfree - k {
                    combo[i] += 1;
                    for j in (i + 1)..k {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    let free: Vec<u32> = (1..=n).collect();
    rec(&patterns, 0, &free, &mut placed, &mut out);
    Ok(out)
}

/// Orbit of a polynomial under all column permutations of `1..=n`.
/// Enumerates the symmetric group, so it is limited to small `n`.
pub fn sym_orbit_poly(f: &Polynomial, n: u32) -> Result<BTreeSet<Polynomial>> {
    if f.max_column() > n {
        return Err(Error::HorizonTooShort { op: "sym_orbit", needed: f.max_column(), got: n });
    }
    if n > 8 {
        return Err(Error::Unsupported(
            "polynomial orbits enumerate the symmetric group; width capped at 8".into(),
        ));
    }
    let mut out = BTreeSet::new();
    for sigma in Permutation::all(n) {
        out.insert(sigma.apply(f)?);
    }
    Ok(out)
}

/// All images of `f` under strictly increasing maps `1..=m -> 1..=n`.
/// `f` must live within width `m`.
pub fn inc_images<T: ColumnMapped + Ord>(f: &T, m: u32, n: u32) -> Result<BTreeSet<T>> {
    if f.max_column() > m {
        return Err(Error::HorizonTooShort { op: "inc_images", needed: f.max_column(), got: m });
    }
    if m > n {
        return Err(Error::HorizonTooShort { op: "inc_images", needed: m, got: n });
    }
    let mut out = BTreeSet::new();
    for pi in IncMap::all(m, n) {
        out.insert(pi.apply(f)?);
    }
    Ok(out)
}

/// Materializes the chain at widths `1..=upto`. Generators wider than `n`
/// are absent from the width-`n` ideal.
pub fn materialize(spec: &ChainSpec, upto: u32) -> Result<Vec<ChainSnapshot>> {
    spec.validate()?;
    if upto == 0 {
        return Err(Error::InvalidSpec("materialization needs a positive width".into()));
    }
    let mut snaps = Vec::with_capacity(upto as usize);
    for n in 1..=upto {
        let ambient = spec.ambient(n);
        if spec.is_monomial() {
            let mut gens: BTreeSet<Monomial> = BTreeSet::new();
            for g in &spec.generators {
                let m = g.home_width();
                if m > n {
                    continue;
                }
                let u = g.as_monomial().expect("monomial chain");
                match spec.symmetry {
                    Symmetry::Sym => gens.extend(sym_orbit(&u, n)?),
                    Symmetry::Inc => gens.extend(inc_images(&u, m, n)?),
                }
            }
            snaps.push(ChainSnapshot {
                n,
                ideal: SnapshotIdeal::Monomial(MonomialIdeal::new(ambient, gens)?),
            });
        } else {
            let mut gens: BTreeSet<Polynomial> = BTreeSet::new();
            for g in &spec.generators {
                let m = g.home_width();
                if m > n {
                    continue;
                }
                let f = match g {
                    Generator::Polynomial { polynomial, .. } => polynomial.clone(),
                    _ => {
                        let u = g.as_monomial().expect("partition or monomial");
                        Polynomial::monomial(u, &spec.field)
                    }
                };
                match spec.symmetry {
                    Symmetry::Sym => gens.extend(sym_orbit_poly(&f, n)?),
                    Symmetry::Inc => gens.extend(inc_images(&f, m, n)?),
                }
            }
            snaps.push(ChainSnapshot {
                n,
                ideal: SnapshotIdeal::Polynomial { ambient, gens: gens.into_iter().collect() },
            });
        }
    }
    Ok(snaps)
}

/// Outcome of the stabilization scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// Least `r` such that for all `r <= m <= n` within the horizon, the
    /// width-`n` ideal is generated by the increasing-map images of the
    /// width-`m` ideal.
    Stabilized { index: u32 },
    NotWithinHorizon,
}

fn monomial_snaps<'a>(
    snaps: &'a [ChainSnapshot],
    op: &'static str,
) -> Result<Vec<(u32, &'a MonomialIdeal)>> {
    snaps
        .iter()
        .map(|s| {
            s.monomial()
                .map(|i| (s.n, i))
                .ok_or_else(|| Error::Unsupported(format!("{op}: needs a monomial chain")))
        })
        .collect()
}

/// Scans all width pairs for generation by increasing-map images and
/// returns the least stabilization index, if it is visible at this horizon.
pub fn stability_index(snaps: &[ChainSnapshot]) -> Result<StabilityVerdict> {
    let snaps = monomial_snaps(snaps, "stability_index")?;
    if snaps.len() < 2 {
        return Err(Error::TooFewPoints { op: "stability_index", needed: 2, got: snaps.len() });
    }
    let by_n: BTreeMap<u32, &MonomialIdeal> = snaps.iter().copied().collect();
    let (&first, _) = by_n.first_key_value().expect("nonempty");
    let (&last, _) = by_n.last_key_value().expect("nonempty");
    let generates = |m: u32, n: u32| -> Result<bool> {
        let im = by_n[&m];
        let imgs: BTreeSet<Monomial> = im
            .gens()
            .iter()
            .map(|g| inc_images(g, m, n))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(minimalize(imgs) == by_n[&n].gens())
    };
    'outer: for r in first..last {
        for m in r..=last {
            for n in m..=last {
                if !generates(m, n)? {
                    continue 'outer;
                }
            }
        }
        return Ok(StabilityVerdict::Stabilized { index: r });
    }
    Ok(StabilityVerdict::NotWithinHorizon)
}

/// Per-width cover and weight data for a monomial chain, plus the values
/// that have become constant at the tail of the horizon.
#[derive(Debug, Clone)]
pub struct ChainInvariants {
    pub per_n: Vec<PerWidthInvariants>,
    /// `(value, onset)` pairs; `None` means not constant on a tail of
    /// length at least 2.
    pub stable_min_cover: Option<(u32, u32)>,
    pub stable_row_weights: Option<(Vec<u32>, u32)>,
    pub stable_min_weight: Option<(u32, u32)>,
}

#[derive(Debug, Clone)]
pub struct PerWidthInvariants {
    pub n: u32,
    pub num_gens: usize,
    pub covers: CoverReport,
    pub weights: WeightReport,
}

impl ChainInvariants {
    /// The stabilized minimal cover size, or a horizon error.
    pub fn min_cover_or_err(&self) -> Result<u32> {
        self.stable_min_cover
            .map(|(v, _)| v)
            .ok_or_else(|| Error::NotStabilized { what: "minimal cover size".into() })
    }

    pub fn weights_or_err(&self) -> Result<(Vec<u32>, u32)> {
        match (&self.stable_row_weights, self.stable_min_weight) {
            (Some((w, _)), Some((omega, _))) => Ok((w.clone(), omega)),
            _ => Err(Error::NotStabilized { what: "chain weights".into() }),
        }
    }
}

/// Longest constant suffix of `(n, value)` data; `Some((value, onset))` when
/// that suffix has length at least 2.
fn stable_tail<T: Eq + Clone>(values: &[(u32, T)]) -> Option<(T, u32)> {
    let (last_n, last) = values.last()?;
    let mut onset = *last_n;
    for (n, v) in values.iter().rev().skip(1) {
        if v == last {
            onset = *n;
        } else {
            break;
        }
    }
    (onset < *last_n).then(|| (last.clone(), onset))
}

/// Computes covers and weights per width (proper nonzero widths only) and
/// extracts their stabilized tail values.
pub fn chain_invariants(snaps: &[ChainSnapshot]) -> Result<ChainInvariants> {
    let snaps = monomial_snaps(snaps, "chain_invariants")?;
    let mut per_n = Vec::new();
    for (n, ideal) in &snaps {
        if ideal.is_zero() || ideal.is_unit() {
            continue;
        }
        per_n.push(PerWidthInvariants {
            n: *n,
            num_gens: ideal.num_gens(),
            covers: ideal.covers()?,
            weights: ideal.weights()?,
        });
    }
    let gammas: Vec<(u32, u32)> = per_n.iter().map(|p| (p.n, p.covers.min_size)).collect();
    let row_w: Vec<(u32, Vec<u32>)> =
        per_n.iter().map(|p| (p.n, p.weights.per_row.clone())).collect();
    let omegas: Vec<(u32, u32)> = per_n.iter().map(|p| (p.n, p.weights.min_weight)).collect();
    Ok(ChainInvariants {
        stable_min_cover: stable_tail(&gammas),
        stable_row_weights: stable_tail(&row_w),
        stable_min_weight: stable_tail(&omegas),
        per_n,
    })
}

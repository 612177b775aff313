//! Task registry: every analysis sits behind the [`Task`] trait and is
//! selected by name at runtime, so `--tasks` strings map one-to-one onto
//! registry entries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use equichain_core::asymptotics::{
    betti_column_stability, cm_criterion, pd_bounds_check, predict_codim, predict_reg_c1,
    segment_decomposition, CmChainReport, ColumnStability, PdBoundsReport, PredictionReport,
    SegmentOutcome, Verdict,
};
use equichain_core::betti::{BettiEngine, BettiTable};
use equichain_core::chain::{
    chain_invariants, stability_index, ChainSnapshot, ChainSpec, SnapshotIdeal, StabilityVerdict,
};
use equichain_core::groebner::{buchberger, initial_chain};
use equichain_core::hilbert::{degree_growth, hilbert_series, series_table, IntPoly};
use equichain_core::ring::MonomialOrder;
use equichain_core::{Error, Result};

use crate::artifacts::{csv_table, text_table, Artifacts, Format};

/// Everything a task needs: the materialized chain plus the configured
/// strategy objects.
pub struct TaskContext<'a> {
    pub spec: &'a ChainSpec,
    pub snaps: &'a [ChainSnapshot],
    pub order: &'static dyn MonomialOrder,
    pub engine: &'static dyn BettiEngine,
    pub upto: u32,
    pub format: Format,
    initial: OnceLock<Result<Vec<ChainSnapshot>>>,
}

impl<'a> TaskContext<'a> {
    pub fn new(
        spec: &'a ChainSpec,
        snaps: &'a [ChainSnapshot],
        order: &'static dyn MonomialOrder,
        engine: &'static dyn BettiEngine,
        upto: u32,
        format: Format,
    ) -> Self {
        TaskContext { spec, snaps, order, engine, upto, format, initial: OnceLock::new() }
    }

    /// The monomial snapshots ideal-theoretic tasks consume: the chain
    /// itself, or its initial chain when the generators are polynomials.
    pub fn monomial_view(&self) -> Result<&[ChainSnapshot]> {
        if self.spec.is_monomial() {
            return Ok(self.snaps);
        }
        match self.initial.get_or_init(|| initial_chain(self.snaps, self.order)) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn view_label(&self) -> String {
        if self.spec.is_monomial() {
            "chain".into()
        } else {
            format!("initial chain under {}", self.order.name())
        }
    }
}

/// One runnable analysis; implementations are registered in [`TASKS`].
pub trait Task: Sync {
    /// Registry name, also accepted by the CLI `--tasks` flag.
    fn name(&self) -> &'static str;
    /// One-line description for the `list` command.
    fn summary(&self) -> &'static str;
    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()>;
}

static TASKS: [&dyn Task; 7] = [
    &MaterializeTask,
    &InvariantsTask,
    &HilbertTask,
    &BettiTask,
    &GroebnerTask,
    &AsymptoticsTask,
    &ReportTask,
];

pub fn task_by_name(name: &str) -> Option<&'static dyn Task> {
    TASKS.iter().copied().find(|t| t.name() == name)
}

pub fn tasks() -> &'static [&'static dyn Task] {
    &TASKS
}

/// Whether an error means "more widths would settle it" rather than "the
/// input or the code is wrong".
pub fn is_horizon_class(e: &Error) -> bool {
    matches!(
        e,
        Error::HorizonTooShort { .. }
            | Error::NotStabilized { .. }
            | Error::TooFewPoints { .. }
            | Error::GeneratorCapExceeded { .. }
    )
}

fn render_generators(ctx: &TaskContext, snap: &ChainSnapshot) -> Vec<String> {
    match &snap.ideal {
        SnapshotIdeal::Monomial(i) => {
            i.gens().iter().map(|g| g.render(ctx.spec.rows)).collect()
        }
        SnapshotIdeal::Polynomial { gens, .. } => gens
            .iter()
            .map(|p| p.render(ctx.spec.rows, ctx.order, &ctx.spec.field))
            .collect(),
    }
}

fn render_intpoly(p: &IntPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = c < &BigInt::zero();
        let magnitude = if negative { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let coeff_part = if magnitude.is_one() && k > 0 {
            String::new()
        } else {
            magnitude.to_string()
        };
        let var_part = match k {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{k}"),
        };
        if !coeff_part.is_empty() && !var_part.is_empty() {
            let _ = write!(out, "{coeff_part}*{var_part}");
        } else {
            let _ = write!(out, "{coeff_part}{var_part}");
        }
    }
    out
}

// ---------------------------------------------------------------------------
// materialize

struct MaterializeTask;

impl Task for MaterializeTask {
    fn name(&self) -> &'static str {
        "materialize"
    }

    fn summary(&self) -> &'static str {
        "per-width minimal generator listings"
    }

    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()> {
        let ext = ctx.format.extension();
        match ctx.format {
            Format::Table => {
                let mut out = String::new();
                for snap in ctx.snaps {
                    let gens = render_generators(ctx, snap);
                    let _ = writeln!(out, "I_{} ({} generators)", snap.n, gens.len());
                    for g in &gens {
                        let _ = writeln!(out, "  {g}");
                    }
                }
                sink.emit(format!("materialize.{ext}"), out);
            }
            Format::Csv => {
                let mut rows = Vec::new();
                for snap in ctx.snaps {
                    for (idx, g) in render_generators(ctx, snap).iter().enumerate() {
                        rows.push(vec![snap.n.to_string(), idx.to_string(), g.clone()]);
                    }
                }
                sink.emit(
                    format!("materialize.{ext}"),
                    csv_table(&["n", "index", "generator"], &rows),
                );
            }
            Format::Json => {
                let widths: Vec<Value> = ctx
                    .snaps
                    .iter()
                    .map(|snap| {
                        json!({ "n": snap.n, "generators": render_generators(ctx, snap) })
                    })
                    .collect();
                sink.emit(format!("materialize.{ext}"), pretty(&json!({ "widths": widths })));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// invariants

/// Per-width numeric summary; `None` cells belong to zero or unit ideals
/// or to widths where an engine cap was hit.
struct WidthRow {
    n: u32,
    num_gens: usize,
    codim: Option<u32>,
    min_cover: Option<u32>,
    min_weight: Option<u32>,
    row_weights: Option<Vec<u32>>,
    dim: Option<u32>,
    degree: Option<BigInt>,
    reg: Option<u32>,
    pd: Option<u32>,
}

/// Computes the per-width rows in parallel; cap overruns degrade single
/// cells to blanks and come back as notes instead of failing the task.
fn width_rows(ctx: &TaskContext) -> Result<(Vec<WidthRow>, Vec<String>)> {
    let snaps = ctx.monomial_view()?;
    let computed: Vec<Result<(WidthRow, Vec<String>)>> = snaps
        .par_iter()
        .map(|s| {
            let ideal = s.monomial().expect("monomial view");
            let mut row = WidthRow {
                n: s.n,
                num_gens: ideal.num_gens(),
                codim: None,
                min_cover: None,
                min_weight: None,
                row_weights: None,
                dim: None,
                degree: None,
                reg: None,
                pd: None,
            };
            let mut notes = Vec::new();
            if !ideal.is_zero() && !ideal.is_unit() {
                row.codim = Some(ideal.codim()?);
                let covers = ideal.covers()?;
                row.min_cover = Some(covers.min_size);
                let weights = ideal.weights()?;
                row.min_weight = Some(weights.min_weight);
                row.row_weights = Some(weights.per_row);
                let h = hilbert_series(ideal)?;
                row.dim = Some(h.dim);
                row.degree = Some(h.degree);
                match ctx.engine.compute(ideal) {
                    Ok(table) => {
                        row.reg = table.reg();
                        row.pd = table.pd();
                    }
                    Err(e) if matches!(e, Error::GeneratorCapExceeded { .. }) => {
                        notes.push(format!("width {}: Betti columns skipped — {e}", s.n));
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok((row, notes))
        })
        .collect();
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for item in computed {
        let (row, mut n) = item?;
        rows.push(row);
        notes.append(&mut n);
    }
    Ok((rows, notes))
}

fn opt_str<T: ToString>(v: &Option<T>, blank: &str) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| blank.to_string())
}

fn weights_str(v: &Option<Vec<u32>>, blank: &str) -> String {
    v.as_ref()
        .map(|w| w.iter().map(u32::to_string).collect::<Vec<_>>().join("|"))
        .unwrap_or_else(|| blank.to_string())
}

const INVARIANT_COLUMNS: [&str; 10] = [
    "n",
    "num_gens",
    "codim",
    "min_cover",
    "min_weight",
    "row_weights",
    "dim",
    "degree",
    "reg",
    "pd",
];

fn invariant_cells(rows: &[WidthRow], blank: &str) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.num_gens.to_string(),
                opt_str(&r.codim, blank),
                opt_str(&r.min_cover, blank),
                opt_str(&r.min_weight, blank),
                weights_str(&r.row_weights, blank),
                opt_str(&r.dim, blank),
                opt_str(&r.degree, blank),
                opt_str(&r.reg, blank),
                opt_str(&r.pd, blank),
            ]
        })
        .collect()
}

fn invariants_json(rows: &[WidthRow]) -> Value {
    let items: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "num_gens": r.num_gens,
                "codim": r.codim,
                "min_cover": r.min_cover,
                "min_weight": r.min_weight,
                "row_weights": r.row_weights,
                "dim": r.dim,
                "degree": r.degree.as_ref().map(|d| d.to_string()),
                "reg": r.reg,
                "pd": r.pd,
            })
        })
        .collect();
    json!(items)
}

struct InvariantsTask;

impl Task for InvariantsTask {
    fn name(&self) -> &'static str {
        "invariants"
    }

    fn summary(&self) -> &'static str {
        "per-width table: generators, codim, covers, weights, degree, reg, pd"
    }

    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()> {
        let (rows, notes) = width_rows(ctx)?;
        let ext = ctx.format.extension();
        let content = match ctx.format {
            Format::Table => {
                let mut out = format!("view: {}\n", ctx.view_label());
                out.push_str(&text_table(&INVARIANT_COLUMNS, &invariant_cells(&rows, "-")));
                for note in &notes {
                    let _ = writeln!(out, "note: {note}");
                }
                out
            }
            Format::Csv => csv_table(&INVARIANT_COLUMNS, &invariant_cells(&rows, "")),
            Format::Json => pretty(&json!({
                "view": ctx.view_label(),
                "widths": invariants_json(&rows),
                "notes": notes,
            })),
        };
        sink.emit(format!("invariants.{ext}"), content);
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// hilbert

struct HilbertTask;

impl Task for HilbertTask {
    fn name(&self) -> &'static str {
        "hilbert"
    }

    fn summary(&self) -> &'static str {
        "per-width Hilbert series and the width/degree coefficient table"
    }

    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()> {
        let snaps = ctx.monomial_view()?;
        let table = series_table(snaps, ctx.upto)?;
        let ext = ctx.format.extension();
        match ctx.format {
            Format::Table => {
                let mut out = format!("view: {}\n", ctx.view_label());
                let rows: Vec<Vec<String>> = table
                    .per_n
                    .iter()
                    .map(|(n, h)| {
                        vec![
                            n.to_string(),
                            h.dim.to_string(),
                            h.codim.to_string(),
                            h.degree.to_string(),
                            render_intpoly(&h.reduced_numerator),
                        ]
                    })
                    .collect();
                out.push_str(&text_table(
                    &["n", "dim", "codim", "degree", "numerator"],
                    &rows,
                ));
                out.push_str("\ncoefficients (rows n, columns degree):\n");
                let mut grid = Vec::new();
                for n in 0..=ctx.upto {
                    let mut row = vec![n.to_string()];
                    for u in 0..=(ctx.upto - n) {
                        let c = table.coefficients.get(&(n, u)).cloned().unwrap_or_default();
                        row.push(c.to_string());
                    }
                    grid.push(row);
                }
                let mut header: Vec<String> = vec!["n\\u".into()];
                header.extend((0..=ctx.upto).map(|u| u.to_string()));
                let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
                out.push_str(&text_table(&header_refs, &grid));
                sink.emit(format!("hilbert.{ext}"), out);
            }
            Format::Csv => {
                let rows: Vec<Vec<String>> = table
                    .per_n
                    .iter()
                    .map(|(n, h)| {
                        vec![
                            n.to_string(),
                            h.dim.to_string(),
                            h.codim.to_string(),
                            h.degree.to_string(),
                            render_intpoly(&h.reduced_numerator),
                        ]
                    })
                    .collect();
                sink.emit(
                    format!("hilbert.{ext}"),
                    csv_table(&["n", "dim", "codim", "degree", "numerator"], &rows),
                );
                let coeff_rows: Vec<Vec<String>> = table
                    .coefficients
                    .iter()
                    .map(|(&(n, u), c)| vec![n.to_string(), u.to_string(), c.to_string()])
                    .collect();
                sink.emit(
                    "hilbert_coefficients.csv".to_string(),
                    csv_table(&["n", "degree", "dimension"], &coeff_rows),
                );
            }
            Format::Json => {
                let per_n: Vec<Value> = table
                    .per_n
                    .iter()
                    .map(|(n, h)| {
                        json!({
                            "n": n,
                            "dim": h.dim,
                            "codim": h.codim,
                            "degree": h.degree.to_string(),
                            "numerator": render_intpoly(&h.reduced_numerator),
                        })
                    })
                    .collect();
                let coeffs: Vec<Value> = table
                    .coefficients
                    .iter()
                    .map(|(&(n, u), c)| json!([n, u, c.to_string()]))
                    .collect();
                sink.emit(
                    format!("hilbert.{ext}"),
                    pretty(&json!({
                        "view": ctx.view_label(),
                        "per_n": per_n,
                        "coefficients": coeffs,
                    })),
                );
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// betti

/// Betti tables for every proper nonzero width. Cap overruns are reported
/// per width and the remaining widths still get their tables; `capped`
/// lets stability analyses truncate at the first unknown width.
struct BettiSweep {
    tables: BTreeMap<u32, BettiTable>,
    notes: Vec<String>,
    capped: BTreeSet<u32>,
}

fn betti_tables(ctx: &TaskContext) -> Result<BettiSweep> {
    let snaps = ctx.monomial_view()?;
    let computed: Vec<(u32, Result<Option<BettiTable>>)> = snaps
        .par_iter()
        .map(|s| {
            let ideal = s.monomial().expect("monomial view");
            if ideal.is_zero() || ideal.is_unit() {
                return (s.n, Ok(None));
            }
            (s.n, ctx.engine.compute(ideal).map(Some))
        })
        .collect();
    let mut sweep = BettiSweep {
        tables: BTreeMap::new(),
        notes: Vec::new(),
        capped: BTreeSet::new(),
    };
    for (n, item) in computed {
        match item {
            Ok(Some(t)) => {
                sweep.tables.insert(n, t);
            }
            Ok(None) => {}
            Err(e) if matches!(e, Error::GeneratorCapExceeded { .. }) => {
                sweep.notes.push(format!("width {n}: {e}"));
                sweep.capped.insert(n);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(sweep)
}

struct BettiTask;

impl Task for BettiTask {
    fn name(&self) -> &'static str {
        "betti"
    }

    fn summary(&self) -> &'static str {
        "graded Betti tables per width"
    }

    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()> {
        let BettiSweep { tables, notes, .. } = betti_tables(ctx)?;
        let ext = ctx.format.extension();
        for (n, table) in &tables {
            let content = match ctx.format {
                Format::Table => table.render(&format!("I_{n}")),
                Format::Csv => table.to_csv(),
                Format::Json => {
                    let entries: Vec<Value> =
                        table.entries().iter().map(|(&(i, j), &b)| json!([i, j, b])).collect();
                    pretty(&json!({
                        "n": n,
                        "engine": ctx.engine.name(),
                        "entries": entries,
                        "reg": table.reg(),
                        "pd": table.pd(),
                    }))
                }
            };
            sink.emit(format!("betti_n{n}.{ext}"), content);
        }
        if !notes.is_empty() {
            sink.emit("betti_notes.txt".to_string(), notes.join("\n") + "\n");
        }
        if tables.is_empty() {
            return Err(Error::NotStabilized {
                what: format!("no proper nonzero width up to {}", ctx.upto),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// groebner

struct GroebnerTask;

impl Task for GroebnerTask {
    fn name(&self) -> &'static str {
        "groebner"
    }

    fn summary(&self) -> &'static str {
        "reduced bases and initial ideals per width"
    }

    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()> {
        let field = ctx.spec.field;
        let rows = ctx.spec.rows;
        // (n, basis elements, initial ideal generators)
        type WidthBasis = (u32, Vec<String>, Vec<String>);
        let per_width: Vec<WidthBasis> = if ctx.spec.is_monomial() {
            ctx.snaps
                .iter()
                .map(|s| {
                    let gens: Vec<String> =
                        s.monomial().expect("monomial chain").gens().iter()
                            .map(|g| g.render(rows))
                            .collect();
                    (s.n, gens.clone(), gens)
                })
                .collect()
        } else {
            let computed: Vec<Result<WidthBasis>> = ctx
                .snaps
                .par_iter()
                .map(|s| {
                    let gens = match &s.ideal {
                        SnapshotIdeal::Polynomial { gens, .. } => gens,
                        SnapshotIdeal::Monomial(_) => unreachable!("polynomial chain"),
                    };
                    let gb = buchberger(gens, ctx.order, &field)?;
                    let basis: Vec<String> = gb
                        .elements
                        .iter()
                        .map(|p| p.render(rows, ctx.order, &field))
                        .collect();
                    let leading: Vec<String> = gb
                        .leading_monomials(ctx.order)
                        .iter()
                        .map(|m| m.render(rows))
                        .collect();
                    Ok((s.n, basis, leading))
                })
                .collect();
            computed.into_iter().collect::<Result<Vec<_>>>()?
        };
        let ext = ctx.format.extension();
        let order_name = ctx.order.name();
        match ctx.format {
            Format::Table => {
                let mut out = String::new();
                if ctx.spec.is_monomial() {
                    let _ = writeln!(
                        out,
                        "monomial chain: the generators already form a basis under {order_name}"
                    );
                }
                for (n, basis, ini) in &per_width {
                    let _ = writeln!(out, "width {n}: {} basis elements ({order_name})", basis.len());
                    for b in basis {
                        let _ = writeln!(out, "  {b}");
                    }
                    if !ctx.spec.is_monomial() {
                        let _ = writeln!(out, "  initial ideal:");
                        for m in ini {
                            let _ = writeln!(out, "    {m}");
                        }
                    }
                }
                sink.emit(format!("groebner.{ext}"), out);
            }
            Format::Csv => {
                let mut rows_out = Vec::new();
                for (n, basis, ini) in &per_width {
                    for (idx, b) in basis.iter().enumerate() {
                        rows_out.push(vec![
                            n.to_string(),
                            idx.to_string(),
                            b.clone(),
                            ini.get(idx).cloned().unwrap_or_default(),
                        ]);
                    }
                }
                sink.emit(
                    format!("groebner.{ext}"),
                    csv_table(&["n", "index", "element", "leading_monomial"], &rows_out),
                );
            }
            Format::Json => {
                let widths: Vec<Value> = per_width
                    .iter()
                    .map(|(n, basis, ini)| {
                        json!({ "n": n, "basis": basis, "initial_ideal": ini })
                    })
                    .collect();
                sink.emit(
                    format!("groebner.{ext}"),
                    pretty(&json!({ "order": order_name, "widths": widths })),
                );
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// asymptotics

/// A sub-analysis outcome: the value, or the reason it was skipped.
#[derive(Serialize)]
#[serde(untagged)]
enum Sub<T: Serialize> {
    Ok(T),
    Skipped { skipped: String },
}

impl<T: Serialize> Sub<T> {
    fn from_result(r: Result<T>, horizon: &mut Vec<Error>) -> Sub<T> {
        match r {
            Ok(v) => Sub::Ok(v),
            Err(e) => {
                if is_horizon_class(&e) {
                    horizon.push(e.clone());
                }
                Sub::Skipped { skipped: e.to_string() }
            }
        }
    }
}

#[derive(Serialize)]
struct MultiplicityGrowth {
    per_n: Vec<(u32, String)>,
    ratio_limit: Option<String>,
}

/// The full stabilization report; every law the toolkit knows how to
/// check, each independently skippable.
#[derive(Serialize)]
pub struct AsymptoticsReport {
    chain: String,
    view: String,
    upto: u32,
    stability_index: Sub<u32>,
    stable_min_cover: Option<(u32, u32)>,
    stable_row_weights: Option<(Vec<u32>, u32)>,
    stable_min_weight: Option<(u32, u32)>,
    codimension: Sub<PredictionReport>,
    regularity: Sub<PredictionReport>,
    projective_dimension: Sub<PdBoundsReport>,
    betti_columns: Sub<Vec<ColumnStability>>,
    segments: Sub<SegmentOutcome>,
    cohen_macaulay: Sub<CmChainReport>,
    multiplicity: Sub<MultiplicityGrowth>,
    notes: Vec<String>,
}

/// Builds the report; the second value holds horizon-class failures of
/// the two load-bearing checks (stability index and codimension slope).
fn asymptotics_report(ctx: &TaskContext) -> Result<(AsymptoticsReport, Vec<Error>)> {
    let snaps = ctx.monomial_view()?;
    let mut required_failures = Vec::new();
    let mut optional_failures = Vec::new();
    let mut notes = Vec::new();

    let stability = match stability_index(snaps)? {
        StabilityVerdict::Stabilized { index } => Ok(index),
        StabilityVerdict::NotWithinHorizon => Err(Error::NotStabilized {
            what: "generation from earlier widths".into(),
        }),
    };
    let stability_sub = match &stability {
        Ok(index) => Sub::Ok(*index),
        Err(e) => {
            required_failures.push(e.clone());
            Sub::Skipped { skipped: e.to_string() }
        }
    };

    let inv = chain_invariants(snaps)?;
    let codims: BTreeMap<u32, i64> = snaps
        .iter()
        .filter_map(|s| {
            let ideal = s.monomial().expect("monomial view");
            if ideal.is_zero() || ideal.is_unit() {
                return None;
            }
            Some(ideal.codim().map(|c| (s.n, c as i64)))
        })
        .collect::<Result<_>>()?;
    let codim_sub = Sub::from_result(
        inv.min_cover_or_err()
            .and_then(|gamma| predict_codim(gamma, &codims)),
        &mut required_failures,
    );

    let mut sweep = betti_tables(ctx)?;
    notes.append(&mut sweep.notes);
    let mut tables = sweep.tables;
    // Stabilization arguments need contiguous widths; past the first width
    // whose table is unknown nothing can be asserted about tails.
    if let Some(&first_capped) = sweep.capped.iter().next() {
        let before = tables.len();
        tables.retain(|&n, _| n < first_capped);
        if tables.len() != before {
            notes.push(format!(
                "stabilization checks use widths below {first_capped}; later tables are not contiguous"
            ));
        }
    }
    let regs: BTreeMap<u32, i64> =
        tables.iter().filter_map(|(&n, t)| t.reg().map(|r| (n, r as i64))).collect();
    let pds: BTreeMap<u32, i64> =
        tables.iter().filter_map(|(&n, t)| t.pd().map(|p| (n, p as i64))).collect();

    let reg_sub = if ctx.spec.partition_data().is_some() {
        Sub::from_result(predict_reg_c1(ctx.spec, snaps, &regs), &mut optional_failures)
    } else {
        Sub::Skipped {
            skipped: "regularity line prediction needs a single-row partition chain".into(),
        }
    };

    let pd_sub = Sub::from_result(
        pd_bounds_check(ctx.spec.rows, &pds, &codims),
        &mut optional_failures,
    );

    let max_column = tables.values().filter_map(BettiTable::pd).max().unwrap_or(0);
    let columns_sub = if tables.is_empty() {
        Sub::Skipped { skipped: "no Betti tables within the horizon".into() }
    } else {
        Sub::Ok(betti_column_stability(&tables, max_column))
    };

    let segments_sub = match &stability {
        Ok(r) => {
            // Contiguous supports from width r-1 up: zero ideals have empty
            // support, widths without a table end the window.
            let mut supports: BTreeMap<u32, BTreeSet<(u32, u32)>> = BTreeMap::new();
            for s in snaps.iter().filter(|s| s.n + 1 >= *r) {
                let ideal = s.monomial().expect("monomial view");
                if ideal.is_zero() {
                    supports.insert(s.n, BTreeSet::new());
                } else if let Some(t) = tables.get(&s.n) {
                    supports.insert(s.n, t.support_points());
                } else {
                    break;
                }
            }
            Sub::from_result(segment_decomposition(&supports, *r), &mut optional_failures)
        }
        Err(_) => Sub::Skipped {
            skipped: "segment decomposition needs a stability index".into(),
        },
    };

    let cm_sub = if ctx.spec.partition_data().is_some() {
        let pds_u32: BTreeMap<u32, u32> =
            tables.iter().filter_map(|(&n, t)| t.pd().map(|p| (n, p))).collect();
        let dims: BTreeMap<u32, u32> = snaps
            .iter()
            .filter_map(|s| {
                let ideal = s.monomial().expect("monomial view");
                if ideal.is_zero() || ideal.is_unit() {
                    return None;
                }
                Some(hilbert_series(ideal).map(|h| (s.n, h.dim)))
            })
            .collect::<Result<_>>()?;
        Sub::from_result(
            cm_criterion(ctx.spec, snaps, &pds_u32, &dims),
            &mut optional_failures,
        )
    } else {
        Sub::Skipped {
            skipped: "Cohen-Macaulay criterion needs a single-row partition chain".into(),
        }
    };

    let multiplicity_sub = Sub::from_result(
        series_table(snaps, ctx.upto).and_then(|t| degree_growth(&t)).map(|g| {
            MultiplicityGrowth {
                per_n: g.per_n.iter().map(|(n, d)| (*n, d.to_string())).collect(),
                ratio_limit: g.limit_candidate.map(|r| r.to_string()),
            }
        }),
        &mut optional_failures,
    );

    for e in &optional_failures {
        notes.push(format!("inconclusive: {e}"));
    }

    Ok((
        AsymptoticsReport {
            chain: ctx.spec.name.clone(),
            view: ctx.view_label(),
            upto: ctx.upto,
            stability_index: stability_sub,
            stable_min_cover: inv.stable_min_cover,
            stable_row_weights: inv.stable_row_weights.clone(),
            stable_min_weight: inv.stable_min_weight,
            codimension: codim_sub,
            regularity: reg_sub,
            projective_dimension: pd_sub,
            betti_columns: columns_sub,
            segments: segments_sub,
            cohen_macaulay: cm_sub,
            multiplicity: multiplicity_sub,
            notes,
        },
        required_failures,
    ))
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Match => "match",
        Verdict::BoundHolds => "bound holds",
        Verdict::Mismatch => "MISMATCH",
        Verdict::InconclusiveHorizon => "inconclusive",
    }
}

fn prediction_line(what: &str, sub: &Sub<PredictionReport>) -> String {
    match sub {
        Sub::Ok(p) => {
            let mut line = format!("{what}: {}", verdict_str(p.verdict));
            if let (Some(s), Some(b)) = (p.predicted_slope, p.predicted_intercept) {
                let _ = write!(line, "; predicted slope {s}, intercept {b}");
            } else if let Some(s) = p.predicted_slope {
                let _ = write!(line, "; predicted slope {s}");
            }
            if let Some(fit) = &p.observed {
                let _ = write!(
                    line,
                    "; observed slope {}, intercept {} from width {}",
                    fit.slope, fit.intercept, fit.onset
                );
            }
            line
        }
        Sub::Skipped { skipped } => format!("{what}: skipped — {skipped}"),
    }
}

fn report_text(report: &AsymptoticsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "chain: {}", report.chain);
    let _ = writeln!(out, "view: {}", report.view);
    let _ = writeln!(out, "materialized to width {}", report.upto);
    match &report.stability_index {
        Sub::Ok(r) => {
            let _ = writeln!(out, "stability index: {r}");
        }
        Sub::Skipped { skipped } => {
            let _ = writeln!(out, "stability index: not reached — {skipped}");
        }
    }
    match &report.stable_min_cover {
        Some((v, onset)) => {
            let _ = writeln!(out, "minimal cover size: {v} (constant from width {onset})");
        }
        None => {
            let _ = writeln!(out, "minimal cover size: not constant within the horizon");
        }
    }
    match &report.stable_row_weights {
        Some((w, onset)) => {
            let rendered =
                w.iter().map(u32::to_string).collect::<Vec<_>>().join("|");
            let _ = writeln!(out, "row weights: {rendered} (constant from width {onset})");
        }
        None => {
            let _ = writeln!(out, "row weights: not constant within the horizon");
        }
    }
    match &report.stable_min_weight {
        Some((v, onset)) => {
            let _ = writeln!(out, "minimal weight: {v} (constant from width {onset})");
        }
        None => {
            let _ = writeln!(out, "minimal weight: not constant within the horizon");
        }
    }
    let _ = writeln!(out, "{}", prediction_line("codimension", &report.codimension));
    let _ = writeln!(out, "{}", prediction_line("regularity", &report.regularity));
    match &report.projective_dimension {
        Sub::Ok(p) => {
            let mut line = format!("projective dimension: {}", verdict_str(p.verdict));
            if !p.bounds_hold {
                line.push_str("; BOUNDS VIOLATED");
            }
            if let Some(b) = p.offset {
                let _ = write!(line, "; pd(n) = n - {b}");
            }
            let _ = writeln!(out, "{line}");
        }
        Sub::Skipped { skipped } => {
            let _ = writeln!(out, "projective dimension: skipped — {skipped}");
        }
    }
    match &report.betti_columns {
        Sub::Ok(cols) => {
            for col in cols {
                if col.stabilized {
                    let degrees = col
                        .degrees
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    let _ = writeln!(
                        out,
                        "betti column {}: degrees {{{degrees}}} from width {}",
                        col.column,
                        col.onset.expect("stabilized"),
                    );
                } else {
                    let _ =
                        writeln!(out, "betti column {}: not stabilized", col.column);
                }
            }
        }
        Sub::Skipped { skipped } => {
            let _ = writeln!(out, "betti columns: skipped — {skipped}");
        }
    }
    match &report.segments {
        Sub::Ok(SegmentOutcome::Decomposition { r, base, segments }) => {
            let rendered: Vec<String> = segments
                .iter()
                .map(|s| format!("start ({}, {}) slope {}", s.start.0, s.start.1, s.slope))
                .collect();
            let _ = writeln!(
                out,
                "segments: base of {} points plus [{}] from width {r}",
                base.len(),
                rendered.join("; ")
            );
        }
        Sub::Ok(SegmentOutcome::Failure { n, point, reason }) => {
            let _ = writeln!(
                out,
                "segments: no decomposition — width {n}, point ({}, {}): {reason}",
                point.0, point.1
            );
        }
        Sub::Skipped { skipped } => {
            let _ = writeln!(out, "segments: skipped — {skipped}");
        }
    }
    match &report.cohen_macaulay {
        Sub::Ok(cm) => {
            let verdicts: Vec<String> = cm
                .per_n
                .iter()
                .map(|v| format!("{}:{}", v.n, if v.cm { "yes" } else { "no" }))
                .collect();
            let _ = writeln!(
                out,
                "Cohen-Macaulay: {} (three tests {})",
                verdicts.join(" "),
                if cm.all_agree { "agree" } else { "DISAGREE" }
            );
        }
        Sub::Skipped { skipped } => {
            let _ = writeln!(out, "Cohen-Macaulay: skipped — {skipped}");
        }
    }
    match &report.multiplicity {
        Sub::Ok(m) => {
            let _ = writeln!(
                out,
                "multiplicity ratio limit: {}",
                m.ratio_limit.as_deref().unwrap_or("not settled")
            );
        }
        Sub::Skipped { skipped } => {
            let _ = writeln!(out, "multiplicity: skipped — {skipped}");
        }
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

struct AsymptoticsTask;

impl Task for AsymptoticsTask {
    fn name(&self) -> &'static str {
        "asymptotics"
    }

    fn summary(&self) -> &'static str {
        "stabilization laws: stability index, slopes, bounds, segments"
    }

    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()> {
        let (report, required_failures) = asymptotics_report(ctx)?;
        match ctx.format {
            Format::Table => sink.emit("asymptotics.txt".to_string(), report_text(&report)),
            // nested verdicts do not flatten into CSV; JSON carries them
            Format::Csv | Format::Json => {
                sink.emit("asymptotics.json".to_string(), pretty_struct(&report))
            }
        }
        match required_failures.into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

// ---------------------------------------------------------------------------
// report

struct ReportTask;

impl Task for ReportTask {
    fn name(&self) -> &'static str {
        "report"
    }

    fn summary(&self) -> &'static str {
        "one-page summary: header, invariants, stabilization verdicts"
    }

    fn run(&self, ctx: &TaskContext, sink: &mut Artifacts) -> Result<()> {
        let (rows, mut notes) = width_rows(ctx)?;
        let (asym, _) = asymptotics_report(ctx)?;
        match ctx.format {
            Format::Table | Format::Csv => {
                let mut out = String::new();
                let _ = writeln!(
                    out,
                    "chain {} ({} row{}, {}, char {}), horizon {}, materialized to {}",
                    ctx.spec.name,
                    ctx.spec.rows,
                    if ctx.spec.rows == 1 { "" } else { "s" },
                    match ctx.spec.symmetry {
                        equichain_core::chain::Symmetry::Sym => "sym",
                        equichain_core::chain::Symmetry::Inc => "inc",
                    },
                    ctx.spec.field.characteristic(),
                    ctx.spec.horizon,
                    ctx.upto
                );
                let _ = writeln!(out, "view: {}", ctx.view_label());
                out.push('\n');
                out.push_str(&text_table(&INVARIANT_COLUMNS, &invariant_cells(&rows, "-")));
                out.push('\n');
                out.push_str(&report_text(&asym));
                for note in &notes {
                    let _ = writeln!(out, "note: {note}");
                }
                sink.emit("report.txt".to_string(), out);
            }
            Format::Json => {
                let header = json!({
                    "chain": ctx.spec.name,
                    "rows": ctx.spec.rows,
                    "char": ctx.spec.field.characteristic(),
                    "horizon": ctx.spec.horizon,
                    "upto": ctx.upto,
                    "view": ctx.view_label(),
                });
                let mut doc = json!({
                    "header": header,
                    "invariants": invariants_json(&rows),
                });
                let asym_value =
                    serde_json::to_value(&asym).map_err(|e| Error::Internal(e.to_string()))?;
                doc["asymptotics"] = asym_value;
                if !notes.is_empty() {
                    doc["notes"] = json!(std::mem::take(&mut notes));
                }
                sink.emit("report.json".to_string(), pretty(&doc));
            }
        }
        Ok(())
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn pretty_struct<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

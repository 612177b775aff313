//! Graded Betti numbers of monomial ideals by two independent routes.
//!
//! The default engine walks the lcm lattice and takes reduced simplicial
//! homology of upper Koszul complexes; the cross-check engine extracts the
//! multidegree strands of the Taylor complex. Both produce the same
//! [`BettiTable`], from which regularity, projective dimension, and the
//! Cohen-Macaulay test follow.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hilbert::IntPoly;
use crate::ideal::MonomialIdeal;
use crate::linalg::rank;
use crate::ring::monomial::{Monomial, VarIndex};
use crate::ring::Field;

/// A finite simplicial complex over an ordered vertex list, stored by its
/// maximal faces. No faces at all is the void complex; the single empty
/// face is the irrelevant complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<VarIndex>,
    maximal_faces: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds from any face collection, keeping the inclusion-maximal ones.
    pub fn from_faces<I>(vertices: Vec<VarIndex>, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut clean: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut f in faces {
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidSpec(format!(
                    "face {f:?} uses a vertex beyond the {} given",
                    vertices.len()
                )));
            }
            clean.insert(f);
        }
        let maximal_faces: Vec<Vec<usize>> = clean
            .iter()
            .filter(|f| {
                !clean
                    .iter()
                    .any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v)))
            })
            .cloned()
            .collect();
        Ok(SimplicialComplex { vertices, maximal_faces })
    }

    pub fn void(vertices: Vec<VarIndex>) -> Self {
        SimplicialComplex { vertices, maximal_faces: Vec::new() }
    }

    pub fn irrelevant(vertices: Vec<VarIndex>) -> Self {
        SimplicialComplex { vertices, maximal_faces: vec![Vec::new()] }
    }

    pub fn is_void(&self) -> bool {
        self.maximal_faces.is_empty()
    }

    pub fn is_irrelevant(&self) -> bool {
        self.maximal_faces == [Vec::<usize>::new()]
    }

    /// One maximal face containing every vertex.
    pub fn is_full_simplex(&self) -> bool {
        self.maximal_faces.len() == 1 && self.maximal_faces[0].len() == self.vertices.len()
    }

    pub fn vertices(&self) -> &[VarIndex] {
        &self.vertices
    }

    pub fn maximal_faces(&self) -> &[Vec<usize>] {
        &self.maximal_faces
    }

    /// Dimension: `None` when void, `-1` for the irrelevant complex.
    pub fn dim(&self) -> Option<i64> {
        self.maximal_faces
            .iter()
            .map(|f| f.len() as i64 - 1)
            .max()
    }

    /// Downward closure of the maximal faces.
    pub fn all_faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.maximal_faces {
            // subsets via bit masks; maximal faces are small here
            debug_assert!(f.len() < usize::BITS as usize);
            for mask in 0..(1usize << f.len()) {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                out.insert(sub);
            }
        }
        out
    }
}

/// Ranks of the reduced homology groups over the coefficient field,
/// indexed from dimension `-1`: entry `k` is the rank in dimension `k-1`.
/// The void complex yields an empty list.
pub fn reduced_homology_ranks(cx: &SimplicialComplex, field: &Field) -> Vec<u64> {
    let faces = cx.all_faces();
    if faces.is_empty() {
        return Vec::new();
    }
    let max_len = faces.iter().map(Vec::len).max().expect("nonempty");
    let mut by_len: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); max_len + 1];
    for f in &faces {
        by_len[f.len()].push(f);
    }
    let index: Vec<BTreeMap<&Vec<usize>, usize>> = by_len
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, f)| (*f, i)).collect())
        .collect();
    // boundary_rank[l] = rank of the map from faces of l vertices down to
    // faces of l-1 vertices
    let mut boundary_rank = vec![0usize; max_len + 2];
    for l in 1..=max_len {
        let mut mat: Vec<Vec<i64>> = Vec::with_capacity(by_len[l].len());
        for f in &by_len[l] {
            let mut row = vec![0i64; by_len[l - 1].len()];
            for pos in 0..f.len() {
                let mut sub: Vec<usize> = (*f).clone();
                sub.remove(pos);
                let col = index[l - 1][&sub];
                row[col] = if pos % 2 == 0 { 1 } else { -1 };
            }
            mat.push(row);
        }
        boundary_rank[l] = rank(&mat, field);
    }
    (0..=max_len)
        .map(|l| (by_len[l].len() - boundary_rank[l] - boundary_rank[l + 1]) as u64)
        .collect()
}

/// The upper Koszul complex of `ideal` at multidegree `sigma`: vertices
/// are the variables of `sigma`, and a set `S` is a face when `sigma`
/// divided by the product of the variables in `S` stays in the ideal.
pub fn upper_koszul(ideal: &MonomialIdeal, sigma: &Monomial) -> SimplicialComplex {
    let vertices: Vec<VarIndex> = sigma.support().collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    debug_assert!(vertices.len() < usize::BITS as usize);
    for mask in 0..(1usize << vertices.len()) {
        let mut quotient = sigma.clone();
        let mut face = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            if mask >> i & 1 == 1 {
                quotient = quotient
                    .try_div(&Monomial::var(v.row, v.col))
                    .expect("support variables divide");
                face.push(i);
            }
        }
        if ideal.contains(&quotient) {
            faces.push(face);
        }
    }
    SimplicialComplex::from_faces(vertices, faces).expect("indices are in range")
}

/// Closure of the minimal generators under pairwise lcm.
pub fn lcm_lattice(ideal: &MonomialIdeal) -> BTreeSet<Monomial> {
    let mut lattice: BTreeSet<Monomial> = ideal.gens().iter().cloned().collect();
    let mut frontier: Vec<Monomial> = lattice.iter().cloned().collect();
    while let Some(m) = frontier.pop() {
        let fresh: Vec<Monomial> = ideal
            .gens()
            .iter()
            .map(|g| g.lcm(&m))
            .filter(|l| !lattice.contains(l))
            .collect();
        for l in fresh {
            lattice.insert(l.clone());
            frontier.push(l);
        }
    }
    lattice
}

/// Graded Betti numbers `beta_{i,j}` of an ideal, `j` the internal degree,
/// with the multigraded refinement alongside.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    entries: BTreeMap<(u32, u32), u64>,
    multigraded: BTreeMap<(u32, Monomial), u64>,
}

impl BettiTable {
    pub fn from_entries(entries: BTreeMap<(u32, u32), u64>) -> Self {
        let mut t = BettiTable { entries, multigraded: BTreeMap::new() };
        t.entries.retain(|_, b| *b > 0);
        t
    }

    pub fn entry(&self, i: u32, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.entries
    }

    pub fn multigraded(&self) -> &BTreeMap<(u32, Monomial), u64> {
        &self.multigraded
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Projective dimension: the largest homological degree.
    pub fn pd(&self) -> Option<u32> {
        self.entries.keys().map(|&(i, _)| i).max()
    }

    /// Castelnuovo-Mumford regularity: the largest `j - i`.
    pub fn reg(&self) -> Option<u32> {
        self.entries.keys().map(|&(i, j)| j - i).max()
    }

    /// Internal degrees appearing in homological column `i`.
    pub fn column_degrees(&self, i: u32) -> BTreeSet<u32> {
        self.entries
            .keys()
            .filter(|&&(col, _)| col == i)
            .map(|&(_, j)| j)
            .collect()
    }

    /// Support as `(column, row)` points, row meaning `j - i`.
    pub fn support_points(&self) -> BTreeSet<(u32, u32)> {
        self.entries.keys().map(|&(i, j)| (i, j - i)).collect()
    }

    /// Row-layout rendering: columns are homological degrees, rows are
    /// `j - i`, zero entries print as dots.
    pub fn render(&self, label: &str) -> String {
        let mut out = String::new();
        if self.is_empty() {
            let _ = writeln!(out, "{label}: empty table");
            return out;
        }
        let pd = self.pd().expect("nonempty");
        let rows: Vec<u32> = {
            let lo = self.entries.keys().map(|&(i, j)| j - i).min().expect("nonempty");
            let hi = self.entries.keys().map(|&(i, j)| j - i).max().expect("nonempty");
            (lo..=hi).collect()
        };
        let totals: Vec<u64> = (0..=pd)
            .map(|i| self.entries.iter().filter(|(&(c, _), _)| c == i).map(|(_, b)| b).sum())
            .collect();
        let cell = |i: u32, row: u32| -> String {
            let b = self.entry(i, i + row);
            if b == 0 { ".".into() } else { b.to_string() }
        };
        let label_width = label.len().max("total".len()).max(
            rows.iter().map(|r| r.to_string().len()).max().unwrap_or(1),
        );
        let col_width: Vec<usize> = (0..=pd)
            .map(|i| {
                let mut w = i.to_string().len().max(totals[i as usize].to_string().len());
                for &row in &rows {
                    w = w.max(cell(i, row).len());
                }
                w
            })
            .collect();
        let mut line = format!("{:>label_width$}", label);
        for i in 0..=pd {
            let _ = write!(line, "  {:>w$}", i, w = col_width[i as usize]);
        }
        let _ = writeln!(out, "{}", line.trim_end());
        let mut line = format!("{:>label_width$}", "total");
        for i in 0..=pd {
            let _ = write!(line, "  {:>w$}", totals[i as usize], w = col_width[i as usize]);
        }
        let _ = writeln!(out, "{}", line.trim_end());
        for &row in &rows {
            let mut line = format!("{:>label_width$}", row);
            for i in 0..=pd {
                let _ = write!(line, "  {:>w$}", cell(i, row), w = col_width[i as usize]);
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }

    /// Plain `i,j,beta` lines with a header, sorted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,beta\n");
        for (&(i, j), &b) in &self.entries {
            let _ = writeln!(out, "{i},{j},{b}");
        }
        out
    }

    /// Parses [`BettiTable::to_csv`] output; the multigraded part is not
    /// carried by the format.
    pub fn from_csv(text: &str) -> Result<BettiTable> {
        let mut lines = text.lines();
        match lines.next() {
            Some("i,j,beta") => {}
            other => {
                return Err(Error::InvalidSpec(format!(
                    "expected header 'i,j,beta', got {other:?}"
                )))
            }
        }
        let mut entries = BTreeMap::new();
        for (ln, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::InvalidSpec(format!("line {}: need i,j,beta", ln + 2)));
            }
            let parse = |s: &str| -> Result<u64> {
                s.trim()
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("line {}: bad number {s:?}", ln + 2)))
            };
            let (i, j, b) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
            if b > 0 {
                entries.insert((i as u32, j as u32), b);
            }
        }
        Ok(BettiTable::from_entries(entries))
    }
}

/// Alternating sum `1 + sum (-1)^{i+1} beta_{i,j} t^j`; equals the Hilbert
/// series numerator of the quotient over the full denominator.
pub fn k_polynomial(table: &BettiTable) -> IntPoly {
    let top = table.entries.keys().map(|&(_, j)| j).max().unwrap_or(0);
    let mut coeffs = vec![0i64; top as usize + 1];
    coeffs[0] = 1;
    for (&(i, j), &b) in &table.entries {
        let signed = if i % 2 == 0 { -(b as i64) } else { b as i64 };
        coeffs[j as usize] += signed;
    }
    IntPoly::from_coeffs(coeffs)
}

/// A strategy for computing Betti tables, registered by name.
pub trait BettiEngine: Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, ideal: &MonomialIdeal) -> Result<BettiTable>;
}

/// Reduced homology of upper Koszul complexes over the lcm lattice.
pub struct KoszulHomologyEngine;

impl BettiEngine for KoszulHomologyEngine {
    fn name(&self) -> &'static str {
        "koszul"
    }

    fn compute(&self, ideal: &MonomialIdeal) -> Result<BettiTable> {
        ideal.require_proper_nonzero("betti_table")?;
        let field = ideal.ambient().field;
        let mut entries: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let mut multigraded: BTreeMap<(u32, Monomial), u64> = BTreeMap::new();
        for sigma in lcm_lattice(ideal) {
            let cx = upper_koszul(ideal, &sigma);
            if cx.is_full_simplex() {
                continue; // contractible: no homology in any dimension
            }
            for (i, rank) in reduced_homology_ranks(&cx, &field).into_iter().enumerate() {
                if rank == 0 {
                    continue;
                }
                *entries.entry((i as u32, sigma.degree() as u32)).or_insert(0) += rank;
                *multigraded.entry((i as u32, sigma.clone())).or_insert(0) += rank;
            }
        }
        Ok(BettiTable { entries, multigraded })
    }
}

/// Multidegree strands of the Taylor complex; exponential in the number of
/// generators, so capped, and useful as an independent cross-check.
pub struct TaylorComplexEngine {
    pub cap: usize,
}

impl BettiEngine for TaylorComplexEngine {
    fn name(&self) -> &'static str {
        "taylor"
    }

    fn compute(&self, ideal: &MonomialIdeal) -> Result<BettiTable> {
        ideal.require_proper_nonzero("taylor_betti")?;
        let g = ideal.num_gens();
        if g > self.cap {
            return Err(Error::GeneratorCapExceeded { generators: g, cap: self.cap });
        }
        let field = ideal.ambient().field;
        let gens = ideal.gens();
        let mut lcms: Vec<Monomial> = vec![Monomial::one(); 1 << g];
        let mut strands: BTreeMap<Monomial, Vec<usize>> = BTreeMap::new();
        for mask in 1..(1usize << g) {
            let low = mask.trailing_zeros() as usize;
            lcms[mask] = lcms[mask & (mask - 1)].lcm(&gens[low]);
            strands.entry(lcms[mask].clone()).or_default().push(mask);
        }
        let mut entries: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let mut multigraded: BTreeMap<(u32, Monomial), u64> = BTreeMap::new();
        for (sigma, masks) in &strands {
            let mut layers: Vec<Vec<usize>> = vec![Vec::new(); g + 1];
            for &mask in masks {
                layers[mask.count_ones() as usize].push(mask);
            }
            let index: Vec<BTreeMap<usize, usize>> = layers
                .iter()
                .map(|l| l.iter().enumerate().map(|(i, m)| (*m, i)).collect())
                .collect();
            // rank of the strand differential from |S| = k to |S| = k-1
            let mut bd_rank = vec![0usize; g + 2];
            for k in 1..=g {
                if layers[k].is_empty() || layers[k - 1].is_empty() {
                    continue;
                }
                let mut mat = Vec::with_capacity(layers[k].len());
                for &mask in &layers[k] {
                    let mut row = vec![0i64; layers[k - 1].len()];
                    let mut pos = 0i64;
                    for b in 0..g {
                        if mask >> b & 1 == 0 {
                            continue;
                        }
                        let sub = mask ^ (1 << b);
                        if lcms[sub] == *sigma {
                            let col = index[k - 1][&sub];
                            row[col] = if pos % 2 == 0 { 1 } else { -1 };
                        }
                        pos += 1;
                    }
                    mat.push(row);
                }
                bd_rank[k] = rank(&mat, &field);
            }
            for k in 1..=g {
                let h = layers[k].len() - bd_rank[k] - bd_rank[k + 1];
                if h > 0 {
                    let i = (k - 1) as u32;
                    *entries.entry((i, sigma.degree() as u32)).or_insert(0) += h as u64;
                    *multigraded.entry((i, sigma.clone())).or_insert(0) += h as u64;
                }
            }
        }
        Ok(BettiTable { entries, multigraded })
    }
}

static KOSZUL: KoszulHomologyEngine = KoszulHomologyEngine;
static TAYLOR: TaylorComplexEngine = TaylorComplexEngine { cap: 12 };

/// The registered Betti engines.
pub fn betti_engine_names() -> [&'static str; 2] {
    ["koszul", "taylor"]
}

/// Looks a Betti engine up by its registry name.
pub fn betti_engine_by_name(name: &str) -> Option<&'static dyn BettiEngine> {
    match name {
        "koszul" => Some(&KOSZUL),
        "taylor" => Some(&TAYLOR),
        _ => None,
    }
}

/// Betti table via upper Koszul homology (the default engine).
pub fn betti_table(ideal: &MonomialIdeal) -> Result<BettiTable> {
    KOSZUL.compute(ideal)
}

/// Betti table via Taylor strands (the cross-check engine).
pub fn taylor_betti(ideal: &MonomialIdeal) -> Result<BettiTable> {
    TAYLOR.compute(ideal)
}

/// The quotient by the ideal is Cohen-Macaulay iff the ideal's projective
/// dimension is one less than its codimension.
pub fn is_cohen_macaulay(ideal: &MonomialIdeal) -> Result<bool> {
    let table = betti_table(ideal)?;
    let pd = table.pd().ok_or_else(|| {
        Error::Internal("a proper nonzero ideal has a nonempty Betti table".into())
    })?;
    Ok(pd == ideal.codim()? - 1)
}

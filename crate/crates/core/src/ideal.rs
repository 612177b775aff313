//! Monomial ideals and their combinatorial invariants: minimal generators,
//! membership, colon ideals, minimal primes, codimension, row covers,
//! exponent weights, and associated primes.
//!
//! A [`MonomialIdeal`] always stores its unique minimal generating set,
//! sorted canonically, together with its ambient ring.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ring::monomial::{Monomial, VarIndex};
use crate::ring::RingContext;

/// A monomial ideal given by its minimal generators. The zero ideal has no
/// generators; the unit ideal is generated by `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    ambient: RingContext,
    gens: Vec<Monomial>,
}

/// Minimal primes of a monomial ideal. Each prime is recorded by its
/// generating set of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDecomposition {
    pub primes: Vec<BTreeSet<VarIndex>>,
}

/// Row covers: subsets `C` of the rows such that every generator uses a
/// variable from a row in `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub minimal_covers: Vec<BTreeSet<u32>>,
    /// Size of the smallest cover.
    pub min_size: u32,
}

/// Exponent weights: `per_row[k-1]` is the largest exponent any row-`k`
/// variable carries in any generator; `min_weight` is the smallest, over
/// generators, of the generator's largest single-variable exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightReport {
    pub per_row: Vec<u32>,
    pub min_weight: u32,
}

/// Drops duplicates and every monomial strictly divisible by another; if `1`
/// occurs the result is `{1}`.
pub fn minimalize<I: IntoIterator<Item = Monomial>>(gens: I) -> Vec<Monomial> {
    let set: BTreeSet<Monomial> = gens.into_iter().collect();
    if set.contains(&Monomial::one()) {
        return vec![Monomial::one()];
    }
    let mut kept: Vec<Monomial> = Vec::new();
    for g in &set {
        if !set.iter().any(|h| h != g && h.divides(g)) {
            kept.push(g.clone());
        }
    }
    kept
}

impl MonomialIdeal {
    /// Builds an ideal from any generating set; generators are minimalized
    /// and validated against the ambient ring.
    pub fn new<I: IntoIterator<Item = Monomial>>(ambient: RingContext, gens: I) -> Result<Self> {
        let gens = minimalize(gens);
        for g in &gens {
            for (v, _) in g.exps() {
                ambient.check_var(v)?;
            }
        }
        Ok(MonomialIdeal { ambient, gens })
    }

    pub fn zero(ambient: RingContext) -> Self {
        MonomialIdeal { ambient, gens: Vec::new() }
    }

    pub fn unit(ambient: RingContext) -> Self {
        MonomialIdeal { ambient, gens: vec![Monomial::one()] }
    }

    pub fn ambient(&self) -> &RingContext {
        &self.ambient
    }

    /// The minimal generators, sorted canonically.
    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.first().is_some_and(|g| g.is_one())
    }

    /// Proper and nonzero: the case every invariant below is defined for.
    pub(crate) fn require_proper_nonzero(&self, op: &'static str) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroIdeal { op })
        } else if self.is_unit() {
            Err(Error::UnitIdeal { op })
        } else {
            Ok(())
        }
    }

    /// Membership test for a monomial.
    pub fn contains(&self, u: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(u))
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// The colon ideal `self : alpha`.
    pub fn colon(&self, alpha: &Monomial) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| g.try_div(&g.gcd(alpha)).expect("gcd divides"));
        MonomialIdeal { ambient: self.ambient, gens: minimalize(gens) }
    }

    /// This ideal plus extra generators.
    pub fn with_extra_gens<I: IntoIterator<Item = Monomial>>(&self, extra: I) -> MonomialIdeal {
        MonomialIdeal {
            ambient: self.ambient,
            gens: minimalize(self.gens.iter().cloned().chain(extra)),
        }
    }

    /// Minimal primes: the inclusion-minimal sets of variables meeting the
    /// support of every generator.
    pub fn minimal_primes(&self) -> Result<PrimeDecomposition> {
        self.require_proper_nonzero("minimal_primes")?;
        let supports: Vec<BTreeSet<VarIndex>> =
            self.gens.iter().map(|g| g.support_set()).collect();
        let mut found: Vec<BTreeSet<VarIndex>> = Vec::new();
        let mut chosen: BTreeSet<VarIndex> = BTreeSet::new();
        // Branch on the variables of the first generator not yet met. Every
        // transversal shows up (possibly non-minimally); minimality is
        // enforced afterwards.
        fn search(
            supports: &[BTreeSet<VarIndex>],
            chosen: &mut BTreeSet<VarIndex>,
            found: &mut Vec<BTreeSet<VarIndex>>,
        ) {
            match supports.iter().find(|s| s.is_disjoint(chosen)) {
                None => found.push(chosen.clone()),
                Some(unmet) => {
                    for &v in unmet {
                        chosen.insert(v);
                        search(supports, chosen, found);
                        chosen.remove(&v);
                    }
                }
            }
        }
        search(&supports, &mut chosen, &mut found);
        found.sort();
        found.dedup();
        let minimal: Vec<BTreeSet<VarIndex>> = found
            .iter()
            .filter(|p| !found.iter().any(|q| *q != **p && q.is_subset(p)))
            .cloned()
            .collect();
        Ok(PrimeDecomposition { primes: minimal })
    }

    /// Codimension: the smallest size of a minimal prime.
    pub fn codim(&self) -> Result<u32> {
        self.require_proper_nonzero("codim")?;
        let dec = self.minimal_primes()?;
        Ok(dec
            .primes
            .iter()
            .map(|p| p.len() as u32)
            .min()
            .expect("a proper nonzero ideal has a minimal prime"))
    }

    /// Row covers and the minimal cover size.
    pub fn covers(&self) -> Result<CoverReport> {
        self.require_proper_nonzero("covers")?;
        let rows = self.ambient.rows;
        let row_sets: Vec<BTreeSet<u32>> = self
            .gens
            .iter()
            .map(|g| g.support().map(|v| v.row).collect())
            .collect();
        let mut covers: Vec<BTreeSet<u32>> = Vec::new();
        for mask in 1u64..(1 << rows) {
            let c: BTreeSet<u32> = (1..=rows).filter(|k| mask & (1 << (k - 1)) != 0).collect();
            if row_sets.iter().all(|s| !s.is_disjoint(&c)) {
                covers.push(c);
            }
        }
        let minimal: Vec<BTreeSet<u32>> = covers
            .iter()
            .filter(|c| !covers.iter().any(|d| *d != **c && d.is_subset(c)))
            .cloned()
            .collect();
        let min_size = minimal
            .iter()
            .map(|c| c.len() as u32)
            .min()
            .expect("whole row set always covers");
        Ok(CoverReport { minimal_covers: minimal, min_size })
    }

    /// Exponent weights per row, and the minimum generator weight.
    pub fn weights(&self) -> Result<WeightReport> {
        self.require_proper_nonzero("weights")?;
        let rows = self.ambient.rows;
        let mut per_row = vec![0u32; rows as usize];
        for g in &self.gens {
            for (v, e) in g.exps() {
                let slot = &mut per_row[(v.row - 1) as usize];
                *slot = (*slot).max(e);
            }
        }
        let min_weight = self
            .gens
            .iter()
            .map(|g| g.exps().map(|(_, e)| e).max().expect("proper generators are nonconstant"))
            .min()
            .expect("nonzero ideal");
        Ok(WeightReport { per_row, min_weight })
    }

    /// True when all minimal primes have the same size.
    pub fn is_unmixed(&self) -> Result<bool> {
        let dec = self.minimal_primes()?;
        let mut sizes = dec.primes.iter().map(|p| p.len());
        let first = sizes.next().expect("at least one minimal prime");
        Ok(sizes.all(|s| s == first))
    }

    /// Associated primes, including embedded ones: the variable sets `V`
    /// with `self : m = <x : x in V>` for some monomial `m`. Witnesses are
    /// searched with exponents capped at each variable's maximum exponent
    /// among the generators (larger exponents cannot change the colon).
    pub fn associated_primes(&self) -> Result<Vec<BTreeSet<VarIndex>>> {
        self.require_proper_nonzero("associated_primes")?;
        let mut max_exp: Vec<(VarIndex, u32)> = Vec::new();
        {
            let mut m: std::collections::BTreeMap<VarIndex, u32> = Default::default();
            for g in &self.gens {
                for (v, e) in g.exps() {
                    let slot = m.entry(v).or_insert(0);
                    *slot = (*slot).max(e);
                }
            }
            max_exp.extend(m);
        }
        let mut found: BTreeSet<BTreeSet<VarIndex>> = BTreeSet::new();
        let mut exps = vec![0u32; max_exp.len()];
        loop {
            let witness = Monomial::from_pairs(
                max_exp.iter().zip(&exps).map(|(&(v, _), &e)| (v, e)),
            );
            // `self : witness` is a prime of variables exactly when every
            // colon generator is divisible by some degree-one colon
            // generator, and no colon generator is 1 (witness outside self).
            let colon: Vec<Monomial> = self
                .gens
                .iter()
                .map(|g| g.try_div(&g.gcd(&witness)).expect("gcd divides"))
                .collect();
            if !colon.iter().any(|c| c.is_one()) {
                let vars: BTreeSet<VarIndex> = colon
                    .iter()
                    .filter(|c| c.degree() == 1)
                    .map(|c| c.support().next().expect("degree one"))
                    .collect();
                if !vars.is_empty()
                    && colon.iter().all(|c| c.support().any(|v| vars.contains(&v)))
                {
                    found.insert(vars);
                }
            }
            // advance the exponent counter
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return Ok(found.into_iter().collect());
                }
                if exps[i] < max_exp[i].1 {
                    exps[i] += 1;
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// True when all associated primes (embedded ones included) have the
    /// same size.
    pub fn is_unmixed_with_embedded(&self) -> Result<bool> {
        let ass = self.associated_primes()?;
        let mut sizes = ass.iter().map(|p| p.len());
        let first = sizes
            .next()
            .ok_or_else(|| Error::Internal("a proper nonzero ideal has an associated prime".into()))?;
        Ok(sizes.all(|s| s == first))
    }

    /// Renders the generator list, e.g. `<x[1]^2, x[1]*x[2]>`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "<0>".to_string();
        }
        let rows = self.ambient.rows;
        let body: Vec<String> = self.gens.iter().map(|g| g.render(rows)).collect();
        format!("<{}>", body.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;

    fn ctx(rows: u32, width: u32) -> RingContext {
        RingContext::new(rows, Some(width), Field::rationals()).unwrap()
    }

    fn m(pairs: &[(u32, u32, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|&(k, j, e)| (VarIndex::new(k, j), e)))
    }

    /// Brute-force transversal oracle: scan all subsets of the occurring
    /// variables ascending by size, keep inclusion-minimal hitting sets.
    fn transversal_oracle(gens: &[Monomial]) -> Vec<BTreeSet<VarIndex>> {
        let vars: Vec<VarIndex> = {
            let mut s = BTreeSet::new();
            for g in gens {
                s.extend(g.support());
            }
            s.into_iter().collect()
        };
        let mut all: Vec<BTreeSet<VarIndex>> = Vec::new();
        for mask in 0u64..(1 << vars.len()) {
            let set: BTreeSet<VarIndex> = vars
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            if gens.iter().all(|g| g.support().any(|v| set.contains(&v))) {
                all.push(set);
            }
        }
        all.iter()
            .filter(|p| !all.iter().any(|q| *q != **p && q.is_subset(p)))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    #[test]
    fn minimalization_drops_multiples() {
        // {x1^2, x1^2*x2, x2^3} -> {x1^2, x2^3}
        let gens = vec![m(&[(1, 1, 2)]), m(&[(1, 1, 2), (1, 2, 1)]), m(&[(1, 2, 3)])];
        assert_eq!(minimalize(gens), vec![m(&[(1, 1, 2)]), m(&[(1, 2, 3)])]);
        // unit swallows everything
        assert_eq!(
            minimalize(vec![m(&[(1, 1, 1)]), Monomial::one()]),
            vec![Monomial::one()]
        );
        assert_eq!(minimalize(Vec::new()), Vec::new());
    }

    #[test]
    fn membership() {
        let i = MonomialIdeal::new(ctx(1, 3), vec![m(&[(1, 1, 2)]), m(&[(1, 2, 1), (1, 3, 1)])])
            .unwrap();
        assert!(i.contains(&m(&[(1, 1, 3), (1, 2, 1)])));
        assert!(!i.contains(&m(&[(1, 1, 1), (1, 2, 1)])));
        assert!(!i.contains(&Monomial::one()));
        assert!(MonomialIdeal::unit(ctx(1, 3)).contains(&Monomial::one()));
        assert!(!MonomialIdeal::zero(ctx(1, 3)).contains(&m(&[(1, 1, 1)])));
    }

    #[test]
    fn colon_by_monomial() {
        // <x1^2, x1*x2> : x1 = <x1, x2>
        let i =
            MonomialIdeal::new(ctx(1, 2), vec![m(&[(1, 1, 2)]), m(&[(1, 1, 1), (1, 2, 1)])])
                .unwrap();
        let q = i.colon(&m(&[(1, 1, 1)]));
        assert_eq!(q.gens(), &[m(&[(1, 1, 1)]), m(&[(1, 2, 1)])]);
        // colon by something already inside gives the unit ideal
        let u = i.colon(&m(&[(1, 1, 2)]));
        assert!(u.is_unit());
        // zero ideal stays zero
        assert!(MonomialIdeal::zero(ctx(1, 2)).colon(&m(&[(1, 1, 1)])).is_zero());
    }

    #[test]
    fn minimal_primes_of_small_examples() {
        // <x1*x2, x1*x3>: primes {x1}, {x2,x3}
        let i = MonomialIdeal::new(
            ctx(1, 3),
            vec![m(&[(1, 1, 1), (1, 2, 1)]), m(&[(1, 1, 1), (1, 3, 1)])],
        )
        .unwrap();
        let dec = i.minimal_primes().unwrap();
        let expect: Vec<BTreeSet<VarIndex>> = vec![
            [VarIndex::new(1, 1)].into_iter().collect(),
            [VarIndex::new(1, 2), VarIndex::new(1, 3)].into_iter().collect(),
        ];
        assert_eq!(dec.primes, expect);
        assert_eq!(i.codim().unwrap(), 1);
        assert!(!i.is_unmixed().unwrap());

        // triangle <x1x2, x1x3, x2x3>: all pairs, codim 2, unmixed
        let t = MonomialIdeal::new(
            ctx(1, 3),
            vec![
                m(&[(1, 1, 1), (1, 2, 1)]),
                m(&[(1, 1, 1), (1, 3, 1)]),
                m(&[(1, 2, 1), (1, 3, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(t.minimal_primes().unwrap().primes.len(), 3);
        assert_eq!(t.codim().unwrap(), 2);
        assert!(t.is_unmixed().unwrap());
    }

    #[test]
    fn minimal_primes_match_brute_force_on_random_ideals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let rows = rng.random_range(1..=2u32);
            let width = rng.random_range(1..=3u32);
            let gens: Vec<Monomial> = (0..rng.random_range(1..=4))
                .map(|_| {
                    Monomial::from_pairs((0..rng.random_range(1..=3u32)).map(|_| {
                        (
                            VarIndex::new(rng.random_range(1..=rows), rng.random_range(1..=width)),
                            rng.random_range(1..=2u32),
                        )
                    }))
                })
                .filter(|g| !g.is_one())
                .collect();
            if gens.is_empty() {
                continue;
            }
            let i = MonomialIdeal::new(ctx(rows, width), gens.clone()).unwrap();
            let got = i.minimal_primes().unwrap().primes;
            let want = transversal_oracle(i.gens());
            assert_eq!(got, want, "gens {:?}", i.render());
        }
    }

    #[test]
    fn rejects_zero_and_unit_where_undefined() {
        let z = MonomialIdeal::zero(ctx(1, 2));
        let u = MonomialIdeal::unit(ctx(1, 2));
        assert!(matches!(z.codim(), Err(Error::ZeroIdeal { .. })));
        assert!(matches!(u.codim(), Err(Error::UnitIdeal { .. })));
        assert!(matches!(z.weights(), Err(Error::ZeroIdeal { .. })));
        assert!(matches!(u.covers(), Err(Error::UnitIdeal { .. })));
    }

    #[test]
    fn covers_and_weights_on_a_mixed_row_ideal() {
        // gens x[1,2]^2*x[2,3]^3, x[1,1]*x[3,2]^2, x[4,2]^2 in 4 rows
        let i = MonomialIdeal::new(
            ctx(4, 3),
            vec![
                m(&[(1, 2, 2), (2, 3, 3)]),
                m(&[(1, 1, 1), (3, 2, 2)]),
                m(&[(4, 2, 2)]),
            ],
        )
        .unwrap();
        let cov = i.covers().unwrap();
        assert_eq!(cov.min_size, 2);
        let expect: Vec<BTreeSet<u32>> = vec![
            [1, 4].into_iter().collect(),
            [2, 3, 4].into_iter().collect(),
        ];
        assert_eq!(cov.minimal_covers, expect);

        let w = i.weights().unwrap();
        assert_eq!(w.per_row, vec![2, 3, 2, 2]);
        // generator weights: max exps are 3, 2, 2 -> min is 2
        assert_eq!(w.min_weight, 2);
    }

    #[test]
    fn associated_primes_catch_embedded_components() {
        // <x1^2, x1*x2>: minimal prime {x1}, embedded {x1,x2}
        let i =
            MonomialIdeal::new(ctx(1, 2), vec![m(&[(1, 1, 2)]), m(&[(1, 1, 1), (1, 2, 1)])])
                .unwrap();
        let ass = i.associated_primes().unwrap();
        let expect: Vec<BTreeSet<VarIndex>> = vec![
            [VarIndex::new(1, 1)].into_iter().collect(),
            [VarIndex::new(1, 1), VarIndex::new(1, 2)].into_iter().collect(),
        ];
        assert_eq!(ass, expect);
        assert!(!i.is_unmixed_with_embedded().unwrap());
        // whereas by minimal primes alone it looks unmixed
        assert!(i.is_unmixed().unwrap());
    }
}

//! Gröbner bases over exact coefficients via Buchberger's algorithm.
//!
//! Normal forms use full multivariate division. The basis returned is the
//! reduced one — monic elements, no leading monomial dividing another, all
//! tails irreducible — so it is uniquely determined by the ideal and the
//! order, independent of generator order. Initial ideals of whole chains
//! carry the chain structure along, since the registered orders commute
//! with increasing column maps.

use std::collections::BTreeSet;

use crate::chain::{inc_images, ChainSnapshot, SnapshotIdeal};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::ring::monomial::Monomial;
use crate::ring::order::MonomialOrder;
use crate::ring::poly::Polynomial;
use crate::ring::{Field, RingContext};

/// A reduced Gröbner basis together with the order that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    /// Monic, inter-reduced, sorted by ascending leading monomial.
    pub elements: Vec<Polynomial>,
    pub order_name: &'static str,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self, ord: &dyn MonomialOrder) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| g.leading_monomial(ord).expect("basis elements are nonzero").clone())
            .collect()
    }
}

/// Remainder of `f` on full division by `divisors`; zero iff `f` reduces
/// to zero. Divisors are tried in list order at every step.
pub fn normal_form(
    f: &Polynomial,
    divisors: &[Polynomial],
    ord: &dyn MonomialOrder,
    field: &Field,
) -> Polynomial {
    let mut p = f.clone();
    let mut remainder = Polynomial::zero();
    while !p.is_zero() {
        let (lm, lc) = {
            let (m, c) = p.leading_term(ord).expect("nonzero polynomial");
            (m.clone(), c.clone())
        };
        let divisor = divisors.iter().find(|g| {
            g.leading_monomial(ord).is_some_and(|m| m.divides(&lm))
        });
        match divisor {
            Some(g) => {
                let glm = g.leading_monomial(ord).expect("checked nonzero");
                let quot_mono = lm.try_div(glm).expect("divisibility checked");
                let glc = g.coeff_of(glm).expect("leading coefficient");
                let quot_coeff = field.div(&lc, glc).expect("leading coefficients are units");
                p = p.sub(&g.mul_term(&quot_mono, &quot_coeff, field), field);
            }
            None => {
                let t = Polynomial::from_terms(field, [(lm.clone(), lc.clone())]);
                remainder = remainder.add(&t, field);
                p = p.sub(&t, field);
            }
        }
    }
    remainder
}

/// The s-polynomial of `f` and `g`: leading terms scaled to the lcm cancel.
pub fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    ord: &dyn MonomialOrder,
    field: &Field,
) -> Polynomial {
    let fl = f.leading_monomial(ord).expect("nonzero");
    let gl = g.leading_monomial(ord).expect("nonzero");
    let lcm = fl.lcm(gl);
    let fc = f.coeff_of(fl).expect("leading coefficient");
    let gc = g.coeff_of(gl).expect("leading coefficient");
    let left = f.mul_term(
        &lcm.try_div(fl).expect("lcm is divisible"),
        &field.inv(fc).expect("unit"),
        field,
    );
    let right = g.mul_term(
        &lcm.try_div(gl).expect("lcm is divisible"),
        &field.inv(gc).expect("unit"),
        field,
    );
    left.sub(&right, field)
}

/// Buchberger's algorithm. Pairs are processed by ascending lcm degree;
/// pairs with coprime leading monomials are skipped.
pub fn buchberger(
    gens: &[Polynomial],
    ord: &dyn MonomialOrder,
    field: &Field,
) -> Result<GroebnerBasis> {
    let mut basis: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let pair_key = |basis: &[Polynomial], i: usize, j: usize| {
        let li = basis[i].leading_monomial(ord).expect("nonzero");
        let lj = basis[j].leading_monomial(ord).expect("nonzero");
        (li.lcm(lj).degree(), i, j)
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.insert(pair_key(&basis, i, j));
        }
    }
    while let Some((_, i, j)) = pairs.pop_first() {
        let li = basis[i].leading_monomial(ord).expect("nonzero");
        let lj = basis[j].leading_monomial(ord).expect("nonzero");
        if li.gcd(lj).is_one() {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], ord, field);
        let r = normal_form(&s, &basis, ord, field);
        if r.is_zero() {
            continue;
        }
        basis.push(r);
        let k = basis.len() - 1;
        for i in 0..k {
            pairs.insert(pair_key(&basis, i, k));
        }
    }
    Ok(reduce_basis(basis, ord, field))
}

/// Turns any Gröbner basis into the reduced one.
fn reduce_basis(
    mut basis: Vec<Polynomial>,
    ord: &dyn MonomialOrder,
    field: &Field,
) -> GroebnerBasis {
    // ascending leading monomials: any divisor of an element's leading
    // monomial then sits strictly earlier in the list
    basis.sort_by(|f, g| {
        ord.cmp(
            f.leading_monomial(ord).expect("nonzero"),
            g.leading_monomial(ord).expect("nonzero"),
        )
    });
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial(ord).expect("nonzero").clone();
        if kept
            .iter()
            .all(|h| !h.leading_monomial(ord).expect("nonzero").divides(&lm))
        {
            kept.push(g);
        }
    }
    // tail reduction against all other kept elements; leading monomials
    // are untouched because none divides another
    for idx in 0..kept.len() {
        let g = kept[idx].clone();
        let others: Vec<Polynomial> = kept
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, h)| h.clone())
            .collect();
        kept[idx] = normal_form(&g, &others, ord, field).make_monic(ord, field);
    }
    GroebnerBasis { elements: kept, order_name: ord.name() }
}

/// Membership test by reduction to zero against a Gröbner basis.
pub fn ideal_membership(
    f: &Polynomial,
    gb: &GroebnerBasis,
    ord: &dyn MonomialOrder,
    field: &Field,
) -> bool {
    normal_form(f, &gb.elements, ord, field).is_zero()
}

/// The initial ideal: leading monomials of a Gröbner basis.
pub fn initial_ideal(
    gb: &GroebnerBasis,
    ambient: RingContext,
    ord: &dyn MonomialOrder,
) -> Result<MonomialIdeal> {
    MonomialIdeal::new(ambient, gb.leading_monomials(ord))
}

/// Initial ideals of every width of a chain. Monomial snapshots pass
/// through unchanged; polynomial snapshots get a reduced Gröbner basis
/// first. Consecutive widths are checked for containment of increasing-map
/// images, which any chain under an order respecting those maps satisfies.
pub fn initial_chain(
    snaps: &[ChainSnapshot],
    ord: &dyn MonomialOrder,
) -> Result<Vec<ChainSnapshot>> {
    let mut out = Vec::with_capacity(snaps.len());
    for snap in snaps {
        let ideal = match &snap.ideal {
            SnapshotIdeal::Monomial(i) => i.clone(),
            SnapshotIdeal::Polynomial { ambient, gens } => {
                let gb = buchberger(gens, ord, &ambient.field)?;
                initial_ideal(&gb, *ambient, ord)?
            }
        };
        out.push(ChainSnapshot { n: snap.n, ideal: SnapshotIdeal::Monomial(ideal) });
    }
    for w in out.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let (im, ih) = (
            lo.monomial().expect("constructed monomial"),
            hi.monomial().expect("constructed monomial"),
        );
        for g in im.gens() {
            for img in inc_images(g, lo.n, hi.n)? {
                if !ih.contains(&img) {
                    return Err(Error::Internal(format!(
                        "initial ideal at width {} misses an image of width {}: \
                         the input is not an invariant chain for this order",
                        hi.n, lo.n
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Integer-coefficient term spec: `(coefficient, [[row, col, exponent], ..])`.
pub type IntegerTerm<'a> = (i64, &'a [(u32, u32, u32)]);

/// Scales a coefficient list into a polynomial; test and fixture helper.
pub fn poly_from_integer_terms(field: &Field, terms: &[IntegerTerm]) -> Polynomial {
    use crate::ring::monomial::VarIndex;
    Polynomial::from_terms(
        field,
        terms.iter().map(|(c, entries)| {
            let m = Monomial::from_pairs(
                entries.iter().map(|&(k, j, e)| (VarIndex::new(k, j), e)),
            );
            (m, field.from_i64(*c))
        }),
    )
}

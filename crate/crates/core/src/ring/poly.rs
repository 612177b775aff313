//! Polynomials: finite coefficient maps over monomials.
//!
//! Terms are stored keyed by the structural monomial order, which makes
//! equality, hashing, and iteration canonical; term-order questions (leading
//! term, rendering order) take the active [`MonomialOrder`] explicitly.

use std::collections::BTreeMap;

use crate::ring::field::{Coeff, Field};
use crate::ring::monomial::Monomial;
use crate::ring::order::MonomialOrder;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(field: &Field, c: Coeff) -> Self {
        Polynomial::from_terms(field, [(Monomial::one(), c)])
    }

    pub fn monomial(m: Monomial, field: &Field) -> Self {
        Polynomial::from_terms(field, [(m, field.one())])
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(field: &Field, terms: I) -> Self {
        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in terms {
            let entry = map.entry(m).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        Polynomial { terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Option<&Coeff> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial, field: &Field) -> Polynomial {
        Polynomial::from_terms(
            field,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn neg(&self, field: &Field) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial, field: &Field) -> Polynomial {
        self.add(&other.neg(field), field)
    }

    pub fn scale(&self, c: &Coeff, field: &Field) -> Polynomial {
        if field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), field.mul(k, c)))
                .collect(),
        }
    }

    /// Multiplies every term by `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff, field: &Field) -> Polynomial {
        if field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, k)| (t.mul(m), field.mul(k, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial, field: &Field) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c, field), field);
        }
        acc
    }

    /// Applies a map to every monomial. The caller guarantees the map is
    /// injective on the occurring monomials (true for column relabelings),
    /// so coefficients never merge.
    pub fn map_monomials<F: Fn(&Monomial) -> Monomial>(&self, f: F) -> Polynomial {
        let terms: BTreeMap<Monomial, Coeff> = self
            .terms
            .iter()
            .map(|(m, c)| (f(m), c.clone()))
            .collect();
        assert_eq!(terms.len(), self.terms.len(), "monomial map must be injective");
        Polynomial { terms }
    }

    /// Leading term with respect to the given order.
    pub fn leading_term(&self, ord: &dyn MonomialOrder) -> Option<(&Monomial, &Coeff)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| ord.cmp(a, b))
    }

    pub fn leading_monomial(&self, ord: &dyn MonomialOrder) -> Option<&Monomial> {
        self.leading_term(ord).map(|(m, _)| m)
    }

    /// Divides by the leading coefficient so the leading term becomes 1.
    pub fn make_monic(&self, ord: &dyn MonomialOrder, field: &Field) -> Polynomial {
        match self.leading_term(ord) {
            None => Polynomial::zero(),
            Some((_, c)) => {
                let inv = field.inv(c).expect("leading coefficient is nonzero");
                self.scale(&inv, field)
            }
        }
    }

    /// Renders with terms in descending order, e.g. `x[2]*x[3] - 2*x[1]^2`.
    pub fn render(&self, rows: u32, ord: &dyn MonomialOrder, field: &Field) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Coeff)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| ord.cmp(b, a));
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = field.is_negative(c);
            let abs = if neg { field.neg(c) } else { (*c).clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_str = field.render(&abs);
            if m.is_one() {
                out.push_str(&coeff_str);
            } else if field.is_one(&abs) {
                out.push_str(&m.render(rows));
            } else {
                out.push_str(&format!("{}*{}", coeff_str, m.render(rows)));
            }
        }
        out
    }
}

//! Term orders on the grid monomials, as named strategies behind a common
//! trait. All three orders refine the row-major variable order and are
//! compatible with the increasing-map actions on columns; the randomized
//! checker at the bottom probes that compatibility.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::action::IncMap;
use crate::ring::monomial::{Monomial, VarIndex};

/// A total multiplicative order on monomials with `1` as least element.
pub trait MonomialOrder: Sync {
    /// Registry name, also accepted by the CLI `--order` flag.
    fn name(&self) -> &'static str;
    fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering;

    fn max<'a>(&self, u: &'a Monomial, v: &'a Monomial) -> &'a Monomial {
        if self.cmp(u, v) == Ordering::Less {
            v
        } else {
            u
        }
    }
}

/// Compares at the largest variable where the exponents differ; the larger
/// exponent there wins.
fn cmp_at_largest_difference(u: &Monomial, v: &Monomial) -> Ordering {
    let mut iu = u.exps().rev().peekable();
    let mut iv = v.exps().rev().peekable();
    loop {
        match (iu.peek().copied(), iv.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((vu, eu)), Some((vv, ev))) => match vu.cmp(&vv) {
                // iterating downward, so the larger variable comes first
                Ordering::Greater => return Ordering::Greater,
                Ordering::Less => return Ordering::Less,
                Ordering::Equal => {
                    if eu != ev {
                        return eu.cmp(&ev);
                    }
                    iu.next();
                    iv.next();
                }
            },
        }
    }
}

/// Compares at the smallest variable where the exponents differ; the
/// *smaller* exponent there wins. (Equivalently: write the exponent vectors
/// against the descending variable sequence and compare the rightmost
/// nonzero entry of the difference; negative means greater.)
fn cmp_at_smallest_difference_reversed(u: &Monomial, v: &Monomial) -> Ordering {
    let mut iu = u.exps().peekable();
    let mut iv = v.exps().peekable();
    loop {
        match (iu.peek().copied(), iv.peek().copied()) {
            (None, None) => return Ordering::Equal,
            // u has its smallest variable where v has exponent 0, so u has
            // the larger exponent at the smallest difference: u is smaller.
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some((vu, eu)), Some((vv, ev))) => match vu.cmp(&vv) {
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => {
                    if eu != ev {
                        return ev.cmp(&eu);
                    }
                    iu.next();
                    iv.next();
                }
            },
        }
    }
}

/// Pure lexicographic order.
pub struct Lex;

impl MonomialOrder for Lex {
    fn name(&self) -> &'static str {
        "lex"
    }

    fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        cmp_at_largest_difference(u, v)
    }
}

/// Total degree first, ties broken lexicographically.
pub struct GradedLex;

impl MonomialOrder for GradedLex {
    fn name(&self) -> &'static str {
        "glex"
    }

    fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        u.degree()
            .cmp(&v.degree())
            .then_with(|| cmp_at_largest_difference(u, v))
    }
}

/// Total degree first, ties broken reverse-lexicographically.
pub struct GradedRevLex;

impl MonomialOrder for GradedRevLex {
    fn name(&self) -> &'static str {
        "grevlex"
    }

    fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        u.degree()
            .cmp(&v.degree())
            .then_with(|| cmp_at_smallest_difference_reversed(u, v))
    }
}

static LEX: Lex = Lex;
static GLEX: GradedLex = GradedLex;
static GREVLEX: GradedRevLex = GradedRevLex;

/// The registered orders.
pub fn order_names() -> [&'static str; 3] {
    ["lex", "glex", "grevlex"]
}

/// Looks a term order up by its registry name.
pub fn order_by_name(name: &str) -> Option<&'static dyn MonomialOrder> {
    match name {
        "lex" => Some(&LEX),
        "glex" => Some(&GLEX),
        "grevlex" => Some(&GREVLEX),
        _ => None,
    }
}

/// A witness that an order failed to commute with an increasing map:
/// `u <= v` but `pi(u) > pi(v)`.
#[derive(Debug, Clone)]
pub struct IncCounterexample {
    pub u: Monomial,
    pub v: Monomial,
    pub pi: IncMap,
}

/// Randomized probe that an order is compatible with the increasing-map
/// action: for sampled monomials `u <= v` on columns `<= max_col` and
/// sampled maps into `1..=target`, checks `pi(u) <= pi(v)`. Returns the
/// first counterexample found, or `None` after `samples` clean trials.
/// Deterministic for a fixed seed.
pub fn check_order_respects_inc(
    ord: &dyn MonomialOrder,
    rows: u32,
    max_col: u32,
    target: u32,
    samples: u32,
    seed: u64,
) -> Option<IncCounterexample> {
    assert!(max_col <= target && max_col >= 1 && rows >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_monomial = |rng: &mut ChaCha8Rng| {
        let nvars = rng.random_range(0..=4u32);
        Monomial::from_pairs((0..nvars).map(|_| {
            let row = rng.random_range(1..=rows);
            let col = rng.random_range(1..=max_col);
            let exp = rng.random_range(1..=3u32);
            (VarIndex::new(row, col), exp)
        }))
    };
    for _ in 0..samples {
        let a = random_monomial(&mut rng);
        let b = random_monomial(&mut rng);
        let (u, v) = if ord.cmp(&a, &b) == std::cmp::Ordering::Greater {
            (b, a)
        } else {
            (a, b)
        };
        // random strictly increasing map: a sorted sample of target columns
        let mut cols: BTreeSet<u32> = BTreeSet::new();
        while cols.len() < max_col as usize {
            cols.insert(rng.random_range(1..=target));
        }
        let pi = IncMap::new(cols.into_iter().collect(), target).expect("sorted distinct");
        let pu = pi.apply(&u).expect("columns bounded by max_col");
        let pv = pi.apply(&v).expect("columns bounded by max_col");
        if ord.cmp(&pu, &pv) == Ordering::Greater {
            return Some(IncCounterexample { u, v, pi });
        }
    }
    None
}

//! Property-based tests: algebraic laws that must hold on random inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use equichain_core::asymptotics::fit_eventual_linear;
use equichain_core::betti::{betti_engine_by_name, k_polynomial};
use equichain_core::chain::sym_orbit;
use equichain_core::groebner::{buchberger, ideal_membership, normal_form, s_polynomial};
use equichain_core::hilbert::{hilbert_series, hilbert_series_with, IntPoly, PivotRule};
use equichain_core::ideal::{minimalize, MonomialIdeal};
use equichain_core::ring::{
    order_by_name, order_names, Field, IncMap, Monomial, Polynomial, RingContext, VarIndex,
};

fn arb_monomial(rows: u32, width: u32, max_exp: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::btree_map(
        (1..=rows, 1..=width).prop_map(|(r, c)| VarIndex::new(r, c)),
        1..=max_exp,
        0..=4usize,
    )
    .prop_map(Monomial::from_pairs)
}

fn arb_nontrivial(rows: u32, width: u32, max_exp: u32) -> impl Strategy<Value = Monomial> {
    arb_monomial(rows, width, max_exp).prop_filter("not the identity", |m| !m.is_one())
}

fn arb_ideal() -> impl Strategy<Value = MonomialIdeal> {
    (1..=2u32, 2..=3u32).prop_flat_map(|(rows, width)| {
        prop::collection::vec(arb_nontrivial(rows, width, 3), 1..=4).prop_map(move |gens| {
            let ambient = RingContext::new(rows, Some(width), Field::rationals()).unwrap();
            MonomialIdeal::new(ambient, gens).unwrap()
        })
    })
}

fn arb_order_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(order_names().to_vec())
}

fn arb_intpoly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-9i64..=9, 0..=6).prop_map(IntPoly::from_coeffs)
}

fn arb_poly(field: Field, width: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_monomial(1, width, 2), -3i64..=3), 1..=3).prop_map(
        move |terms| {
            Polynomial::from_terms(
                &field,
                terms.into_iter().map(|(m, c)| (m, field.from_i64(c))),
            )
        },
    )
}

proptest! {
    /// Comparison is antisymmetric and places the identity at the bottom.
    #[test]
    fn order_is_antisymmetric_with_minimal_identity(
        name in arb_order_name(),
        a in arb_monomial(2, 3, 4),
        b in arb_monomial(2, 3, 4),
    ) {
        let ord = order_by_name(name).unwrap();
        prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
        prop_assert_ne!(
            ord.cmp(&Monomial::one(), &a),
            std::cmp::Ordering::Greater,
            "the identity is the smallest monomial"
        );
        prop_assert_eq!(ord.cmp(&a, &b).is_eq(), a == b);
    }

    /// Comparison is invariant under multiplication by a common factor.
    #[test]
    fn order_respects_multiplication(
        name in arb_order_name(),
        a in arb_monomial(2, 3, 4),
        b in arb_monomial(2, 3, 4),
        c in arb_monomial(2, 3, 4),
    ) {
        let ord = order_by_name(name).unwrap();
        prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&a.mul(&c), &b.mul(&c)));
    }

    /// Comparison is transitive.
    #[test]
    fn order_is_transitive(
        name in arb_order_name(),
        a in arb_monomial(2, 3, 3),
        b in arb_monomial(2, 3, 3),
        c in arb_monomial(2, 3, 3),
    ) {
        let ord = order_by_name(name).unwrap();
        let mut sorted = [a, b, c];
        sorted.sort_by(|x, y| ord.cmp(x, y));
        prop_assert_ne!(ord.cmp(&sorted[0], &sorted[1]), std::cmp::Ordering::Greater);
        prop_assert_ne!(ord.cmp(&sorted[1], &sorted[2]), std::cmp::Ordering::Greater);
        prop_assert_ne!(ord.cmp(&sorted[0], &sorted[2]), std::cmp::Ordering::Greater);
    }

    /// The graded orders never rank a lower-degree monomial above a
    /// higher-degree one.
    #[test]
    fn graded_orders_sort_by_degree_first(
        name in prop::sample::select(vec!["glex", "grevlex"]),
        a in arb_monomial(2, 3, 4),
        b in arb_monomial(2, 3, 4),
    ) {
        let ord = order_by_name(name).unwrap();
        if a.degree() < b.degree() {
            prop_assert_eq!(ord.cmp(&a, &b), std::cmp::Ordering::Less);
        }
    }

    /// Renaming columns along an increasing map never reorders monomials.
    #[test]
    fn order_commutes_with_increasing_maps(
        name in arb_order_name(),
        a in arb_monomial(2, 4, 4),
        b in arb_monomial(2, 4, 4),
        pick in 0..15usize,
    ) {
        let ord = order_by_name(name).unwrap();
        let maps = IncMap::all(4, 6);
        let map = &maps[pick % maps.len()];
        let fa = map.apply(&a).unwrap();
        let fb = map.apply(&b).unwrap();
        prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&fa, &fb));
    }

    /// Divisibility and exact division tell the same story.
    #[test]
    fn division_agrees_with_divisibility(
        a in arb_monomial(2, 3, 4),
        b in arb_monomial(2, 3, 4),
    ) {
        let product = a.mul(&b);
        prop_assert!(b.divides(&product));
        let q = product.try_div(&b).expect("b divides a*b");
        prop_assert_eq!(&q, &a);
        prop_assert_eq!(a.try_div(&b).is_some(), b.divides(&a));
        prop_assert_eq!(product.degree(), a.degree() + b.degree());
    }

    /// gcd and lcm bound their arguments and multiply back to the product.
    #[test]
    fn gcd_and_lcm_are_lattice_operations(
        a in arb_monomial(2, 3, 4),
        b in arb_monomial(2, 3, 4),
    ) {
        let g = a.gcd(&b);
        let l = a.lcm(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
        prop_assert!(a.divides(&l) && b.divides(&l));
        prop_assert_eq!(g.mul(&l), a.mul(&b));
    }

    /// Minimalization is idempotent and drops dominated generators.
    #[test]
    fn minimalize_is_idempotent(
        gens in prop::collection::vec(arb_monomial(2, 3, 3), 0..=6),
        extra in arb_monomial(2, 3, 2),
    ) {
        let min = minimalize(gens.clone());
        prop_assert_eq!(minimalize(min.clone()), min.clone());
        // appending a multiple of an existing generator changes nothing
        if let Some(first) = gens.first() {
            let mut padded = gens.clone();
            padded.push(first.mul(&extra));
            prop_assert_eq!(minimalize(padded), min);
        }
    }

    /// Membership is unchanged by redundant generators, and ideals grown
    /// from a subset stay contained.
    #[test]
    fn redundant_generators_do_not_change_the_ideal(
        ideal in arb_ideal(),
        extra in arb_monomial(2, 2, 2),
        probe in arb_monomial(2, 2, 4),
    ) {
        let first = ideal.gens()[0].clone();
        let padded = ideal.with_extra_gens(vec![first.mul(&extra)]);
        prop_assert_eq!(padded.gens(), ideal.gens());
        let grown = ideal.with_extra_gens(vec![extra]);
        prop_assert!(grown.contains_ideal(&ideal));
        if ideal.contains(&probe) {
            prop_assert!(grown.contains(&probe));
        }
    }

    /// `g` lies in `I : alpha` exactly when `g * alpha` lies in `I`, and
    /// colon by a product is an iterated colon.
    #[test]
    fn colon_is_adjoint_to_multiplication(
        ideal in arb_ideal(),
        alpha in arb_monomial(2, 2, 3),
        beta in arb_monomial(2, 2, 2),
        probe in arb_monomial(2, 2, 4),
    ) {
        prop_assert_eq!(
            ideal.colon(&alpha).contains(&probe),
            ideal.contains(&probe.mul(&alpha))
        );
        let product = alpha.mul(&beta);
        let at_once = ideal.colon(&product);
        let iterated = ideal.colon(&alpha).colon(&beta);
        prop_assert_eq!(at_once.gens(), iterated.gens());
    }

    /// Orbits contain the seed, preserve the exponent multiset, and are
    /// closed under further column maps.
    #[test]
    fn orbits_preserve_shape_and_absorb_increasing_maps(
        u in arb_monomial(1, 3, 3),
        pick in 0..10usize,
    ) {
        let orbit = sym_orbit(&u, 5).unwrap();
        prop_assert!(orbit.contains(&u));
        let shape = |m: &Monomial| {
            let mut exps: Vec<u32> = m.exps().map(|(_, e)| e).collect();
            exps.sort_unstable();
            exps
        };
        for v in &orbit {
            prop_assert_eq!(v.degree(), u.degree());
            prop_assert_eq!(shape(v), shape(&u));
        }
        let maps = IncMap::all(3, 5);
        let image = maps[pick % maps.len()].apply(&u).unwrap();
        prop_assert!(orbit.contains(&image));
    }

    /// Integer polynomials form a commutative ring.
    #[test]
    fn intpoly_ring_laws(a in arb_intpoly(), b in arb_intpoly(), c in arb_intpoly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), IntPoly::zero());
    }

    /// Dividing by `1 - t` inverts multiplying by it, and evaluation at 1
    /// sums the coefficients.
    #[test]
    fn intpoly_division_and_evaluation(a in arb_intpoly()) {
        let one_minus_t = IntPoly::from_coeffs(vec![1, -1]);
        let recovered = a.mul(&one_minus_t).div_exact_one_minus_t().unwrap();
        prop_assert_eq!(recovered, a.clone());
        let sum: BigInt = a.coeffs().iter().cloned().sum();
        prop_assert_eq!(a.eval_one(), sum);
    }

    /// Both pivot rules compute the same Hilbert data, the numerator
    /// factors as reduced * (1-t)^codim, and the series is nonnegative.
    #[test]
    fn hilbert_series_invariants(ideal in arb_ideal()) {
        let a = hilbert_series(&ideal).unwrap();
        let b = hilbert_series_with(&ideal, PivotRule::SmallestVar).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.dim + a.codim, a.num_vars);
        let mut refactored = a.reduced_numerator.clone();
        let one_minus_t = IntPoly::from_coeffs(vec![1, -1]);
        for _ in 0..a.codim {
            refactored = refactored.mul(&one_minus_t);
        }
        prop_assert_eq!(&refactored, &a.raw_numerator);
        prop_assert_eq!(a.reduced_numerator.eval_one(), a.degree.clone());
        prop_assert!(a.degree > BigInt::zero());
        for c in a.raw_numerator.series_coeffs(a.num_vars, 8) {
            prop_assert!(c >= BigInt::zero(), "series dimensions are counts");
        }
    }

    /// The two resolution engines agree, their alternating sum recovers
    /// the Hilbert numerator, and standard bounds hold.
    #[test]
    fn betti_tables_are_engine_independent(ideal in arb_ideal()) {
        let koszul = betti_engine_by_name("koszul").unwrap();
        let taylor = betti_engine_by_name("taylor").unwrap();
        let a = koszul.compute(&ideal).unwrap();
        let b = taylor.compute(&ideal).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
        prop_assert_eq!(a.multigraded(), b.multigraded());

        let h = hilbert_series(&ideal).unwrap();
        prop_assert_eq!(k_polynomial(&a), h.raw_numerator);
        prop_assert!(a.pd().unwrap() + 1 >= h.codim, "resolution at least codim long");

        // the first column counts minimal generators by degree
        let mut by_degree: BTreeMap<u32, u64> = BTreeMap::new();
        for g in ideal.gens() {
            *by_degree.entry(g.degree() as u32).or_insert(0) += 1;
        }
        let col0: BTreeMap<u32, u64> = a
            .entries()
            .iter()
            .filter(|((i, _), _)| *i == 0)
            .map(|(&(_, j), &v)| (j, v))
            .collect();
        prop_assert_eq!(col0, by_degree);
        let max_gen_degree = ideal.gens().iter().map(|g| g.degree() as u32).max().unwrap();
        prop_assert!(a.reg().unwrap() >= max_gen_degree);
    }

    /// An eventually-linear sequence with a noisy prefix is recovered
    /// exactly from its tail.
    #[test]
    fn linear_fit_recovers_synthetic_tails(
        slope in -4i64..=4,
        intercept in -10i64..=10,
        noise in prop::collection::vec(-20i64..=20, 0..=3),
        tail in 4u32..=8,
    ) {
        let onset = noise.len() as u32 + 1;
        let mut points = BTreeMap::new();
        for (i, &v) in noise.iter().enumerate() {
            let n = i as u32 + 1;
            // keep the prefix off the line so the fit cannot start earlier
            points.insert(n, slope * n as i64 + intercept + 1 + v.abs());
        }
        for n in onset..onset + tail {
            points.insert(n, slope * n as i64 + intercept);
        }
        let fit = fit_eventual_linear(&points).unwrap().expect("tail is long enough");
        prop_assert_eq!(fit.slope, slope);
        prop_assert_eq!(fit.intercept, intercept);
        prop_assert_eq!(fit.onset, onset);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Division by a basis is idempotent and the discarded part is a
    /// member; S-pairs of the computed basis all reduce to zero.
    #[test]
    fn groebner_normal_forms_behave(
        g1 in arb_poly(Field::rationals(), 3),
        g2 in arb_poly(Field::rationals(), 3),
        f in arb_poly(Field::rationals(), 3),
    ) {
        let field = Field::rationals();
        let ord = order_by_name("grevlex").unwrap();
        let gb = buchberger(&[g1, g2], ord, &field).unwrap();
        if gb.elements.is_empty() {
            return Ok(());
        }
        let nf = normal_form(&f, &gb.elements, ord, &field);
        prop_assert_eq!(&normal_form(&nf, &gb.elements, ord, &field), &nf);
        let discarded = f.sub(&nf, &field);
        prop_assert!(ideal_membership(&discarded, &gb, ord, &field));

        // normal form is linear over the ground field
        let sum_nf = normal_form(&f.add(&nf, &field), &gb.elements, ord, &field);
        prop_assert_eq!(sum_nf, nf.add(&nf, &field));

        for i in 0..gb.elements.len() {
            for j in (i + 1)..gb.elements.len() {
                let s = s_polynomial(&gb.elements[i], &gb.elements[j], ord, &field);
                prop_assert!(
                    normal_form(&s, &gb.elements, ord, &field).is_zero(),
                    "S-pair ({i}, {j}) must reduce to zero"
                );
            }
        }

        // products of basis elements with anything stay in the ideal
        let product = f.mul(&gb.elements[0], &field);
        prop_assert!(ideal_membership(&product, &gb, ord, &field));
    }
}

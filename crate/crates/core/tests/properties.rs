//! Property tests for the algebraic substrate: ring axioms, the
//! characteristic-p power rule, evaluation as a homomorphism, parser/printer
//! round trips, the normal-form shape and congruence of equality.

use gakit::algebra::{AsanumaParams, PresentedAlgebra};
use gakit::field::{FieldElement, PrimeField};
use gakit::poly::{Monomial, Polynomial, VarSet};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn vars() -> VarSet {
    VarSet::new(["x", "y", "z", "t"]).unwrap()
}

fn a223() -> PresentedAlgebra {
    PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap()
}

prop_compose! {
    fn arb_field()(p in prop_oneof![Just(2u64), Just(3), Just(5)]) -> PrimeField {
        PrimeField::new(p).unwrap()
    }
}

fn arb_poly(field: PrimeField, universe: VarSet, max_exp: u32, max_terms: usize) -> BoxedStrategy<Polynomial> {
    let n = universe.len();
    let p = field.characteristic() as i64;
    let term = (
        proptest::collection::vec(0..=max_exp, n),
        0..p,
    );
    proptest::collection::vec(term, 0..=max_terms)
        .prop_map(move |terms| {
            let mut out = Polynomial::zero(field, &universe);
            for (exps, c) in terms {
                let t = Polynomial::from_term(
                    field,
                    &universe,
                    Monomial::from_exps(exps),
                    field.element(c),
                );
                out = out.checked_add(&t).unwrap();
            }
            out
        })
        .boxed()
}

prop_compose! {
    fn arb_poly_triple()(field in arb_field())(
        f in arb_poly(field, vars(), 3, 5),
        g in arb_poly(field, vars(), 3, 5),
        h in arb_poly(field, vars(), 3, 5),
    ) -> (Polynomial, Polynomial, Polynomial) {
        (f, g, h)
    }
}

proptest! {
    // 1000 samples per field in {F_2, F_3, F_5}
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn ring_axioms((f, g, h) in arb_poly_triple()) {
        let fg = f.checked_mul(&g).unwrap();
        let gf = g.checked_mul(&f).unwrap();
        prop_assert_eq!(&fg, &gf);
        let sum_fg = f.checked_add(&g).unwrap();
        prop_assert_eq!(&sum_fg, &g.checked_add(&f).unwrap());
        // associativity
        let left = fg.checked_mul(&h).unwrap();
        let right = f.checked_mul(&g.checked_mul(&h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let aleft = sum_fg.checked_add(&h).unwrap();
        let aright = f.checked_add(&g.checked_add(&h).unwrap()).unwrap();
        prop_assert_eq!(&aleft, &aright);
        // distributivity
        let dist_left = f.checked_mul(&g.checked_add(&h).unwrap()).unwrap();
        let dist_right = fg.checked_add(&f.checked_mul(&h).unwrap()).unwrap();
        prop_assert_eq!(&dist_left, &dist_right);
    }
}

prop_compose! {
    fn arb_poly_pair()(field in arb_field())(
        f in arb_poly(field, vars(), 3, 4),
        g in arb_poly(field, vars(), 3, 4),
    ) -> (Polynomial, Polynomial) {
        (f, g)
    }
}

proptest! {
    #[test]
    fn freshmans_dream((f, g) in arb_poly_pair()) {
        let p = f.field().characteristic();
        let sum_pow = f.checked_add(&g).unwrap().pow(p).unwrap();
        let pow_sum = f.pow(p).unwrap().checked_add(&g.pow(p).unwrap()).unwrap();
        prop_assert_eq!(sum_pow, pow_sum);
    }
}

prop_compose! {
    fn arb_poly_pair_with_point()(field in arb_field())(
        f in arb_poly(field, vars(), 3, 4),
        g in arb_poly(field, vars(), 3, 4),
        coords in proptest::collection::vec(0i64..31, 4),
    ) -> (Polynomial, Polynomial, Vec<i64>) {
        (f, g, coords)
    }
}

proptest! {
    #[test]
    fn evaluation_is_a_ring_homomorphism((f, g, coords) in arb_poly_pair_with_point()) {
        let field = f.field();
        let point: BTreeMap<String, FieldElement> = vars()
            .names()
            .iter()
            .zip(&coords)
            .map(|(n, &c)| (n.clone(), field.element(c)))
            .collect();
        let ev = |h: &Polynomial| h.evaluate(&field, &point).unwrap();
        prop_assert_eq!(ev(&f.checked_mul(&g).unwrap()), ev(&f) * ev(&g));
        prop_assert_eq!(ev(&f.checked_add(&g).unwrap()), ev(&f) + ev(&g));
    }
}

prop_compose! {
    fn arb_poly_any_field()(field in arb_field())(
        f in arb_poly(field, vars(), 5, 6),
    ) -> Polynomial {
        f
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printing_then_parsing_is_identity(f in arb_poly_any_field()) {
        let text = f.to_string();
        let back = Polynomial::parse(&text, f.vars(), f.field()).unwrap();
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    // every normal-form monomial satisfies deg_x < m or deg_y = 0
    #[test]
    fn normal_forms_have_the_unique_expression_shape(
        f in arb_poly(PrimeField::new(2).unwrap(), vars(), 4, 6)
    ) {
        let a = a223();
        let nf = a.normalize(&f).unwrap();
        for (m, _) in nf.nf().terms() {
            prop_assert!(m.exp(0) < 2 || m.exp(1) == 0, "monomial breaks the shape");
        }
    }

    // equality is a congruence: representatives of the same class stay
    // equal under addition and multiplication by anything
    #[test]
    fn equality_is_a_congruence(
        f in arb_poly(PrimeField::new(2).unwrap(), vars(), 3, 4),
        c in arb_poly(PrimeField::new(2).unwrap(), vars(), 3, 4),
        mult in arb_poly(PrimeField::new(2).unwrap(), vars(), 2, 3),
    ) {
        let a = a223();
        // g := f + relation * mult represents the same element
        let g = f.checked_add(&a.relation().checked_mul(&mult).unwrap()).unwrap();
        let ea = a.normalize(&f).unwrap();
        let eb = a.normalize(&g).unwrap();
        prop_assert!(ea.equals(&eb).unwrap());
        let ec = a.normalize(&c).unwrap();
        prop_assert!(ea.add(&ec).equals(&eb.add(&ec)).unwrap());
        prop_assert!(ea.mul(&ec).equals(&eb.mul(&ec)).unwrap());
    }
}

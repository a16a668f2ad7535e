use std::sync::Arc;

use ciwb_core::groebner::normal_form;
use ciwb_core::k0_models::a_model;
use ciwb_core::lambda_ring::lambda_series;
use ciwb_core::lattice::{hnf_with_transform, vector, FpGroup, Lattice};
use ciwb_core::matrix::Matrix;
use ciwb_core::poly::{parse_polynomial, rat};
use ciwb_core::{Execution, Ideal, Monomial, MonomialOrder, PolyRing, Polynomial, RingPresentation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ring3() -> Arc<PolyRing> {
    PolyRing::new(&["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5), 0..5).prop_map(|terms| {
        let r = ring3();
        Polynomial::from_terms(
            &r,
            terms.into_iter().map(|((a, b, c), k)| (Monomial::from_exponents(vec![a, b, c]), rat(k))),
        )
    })
}

fn int_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn display_parses_back(a in poly()) {
        let r = ring3();
        prop_assert_eq!(parse_polynomial(&r, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn normal_form_ignores_ideal_elements(f in poly(), h1 in poly(), h2 in poly()) {
        let r = ring3();
        let pres = RingPresentation::free(r.clone());
        let i = Ideal::parse(&pres, &["x^2 - y*z", "y^2 - x + z"]).unwrap();
        let gens = i.generators().to_vec();
        let shifted = &f + &(&(&h1 * &gens[0]) + &(&h2 * &gens[1]));
        let basis = i.basis().unwrap();
        prop_assert_eq!(normal_form(&shifted, basis), normal_form(&f, basis));
        prop_assert!(i.contains(&(&shifted - &f)).unwrap());
    }

    #[test]
    fn hnf_transform_is_exact(rows in prop::collection::vec(int_vec(3), 1..5)) {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| vector(r)).collect();
        let (h, u) = hnf_with_transform(&rows, 3);
        for (hr, ur) in h.iter().zip(&u) {
            let mut combo = vec![BigInt::from(0); 3];
            for (c, row) in ur.iter().zip(&rows) {
                for (o, x) in combo.iter_mut().zip(row) {
                    *o += c * x;
                }
            }
            prop_assert_eq!(&combo, hr);
        }
        let l = Lattice::new(3, &rows);
        for r in &rows {
            prop_assert!(l.contains(r));
            prop_assert!(l.reduce(r).iter().all(|x| *x == BigInt::from(0)));
        }
    }

    #[test]
    fn canonical_forms_are_well_defined(rels in prop::collection::vec(int_vec(2), 0..3), x in int_vec(2), k in -4i64..=4) {
        let rels: Vec<Vec<BigInt>> = rels.iter().map(|r| vector(r)).collect();
        let g = FpGroup::new(2, &rels);
        let x = vector(&x);
        let c = g.canonical(&x);
        prop_assert_eq!(g.canonical(&c), c.clone());
        for r in &rels {
            let moved: Vec<BigInt> = x.iter().zip(r).map(|(a, b)| a + b * BigInt::from(k)).collect();
            prop_assert_eq!(g.canonical(&moved), c.clone());
        }
    }

    #[test]
    fn lambda_series_is_exponential(x in int_vec(2), y in int_vec(2)) {
        let m = a_model(3).unwrap();
        let (a, b) = (m.class(&x).unwrap(), m.class(&y).unwrap());
        let lhs = lambda_series(&(&a + &b), 4).unwrap();
        let rhs = lambda_series(&a, 4).unwrap().mul(&lambda_series(&b, 4).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_is_multiplicative(e in prop::collection::vec(poly(), 8)) {
        let pres = RingPresentation::free(ring3());
        let a = Matrix::from_rows(&pres, vec![vec![e[0].clone(), e[1].clone()], vec![e[2].clone(), e[3].clone()]]).unwrap();
        let b = Matrix::from_rows(&pres, vec![vec![e[4].clone(), e[5].clone()], vec![e[6].clone(), e[7].clone()]]).unwrap();
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
    }

    #[test]
    fn execution_modes_agree(xs in prop::collection::vec(-1000i64..1000, 0..64)) {
        let f = |x: &i64| x * x - 3 * x;
        prop_assert_eq!(Execution::Sequential.map(&xs, f), Execution::Parallel.map(&xs, f));
        prop_assert_eq!(
            Execution::Sequential.all(&xs, |x| *x > -2000),
            Execution::Parallel.all(&xs, |x| *x > -2000)
        );
    }
}

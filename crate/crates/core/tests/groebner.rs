mod common;

use ciwb_core::groebner::{groebner_basis, normal_form, TrackedBasis};
use ciwb_core::poly::rat;
use ciwb_core::{Budget, Colength, Ideal, MonomialOrder, PolyRing, Polynomial, RingPresentation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn free(vars: &[&str]) -> std::sync::Arc<RingPresentation> {
    RingPresentation::free(PolyRing::new(vars, MonomialOrder::GrevLex).unwrap())
}

#[test]
fn agrees_with_span_oracle() {
    let run = common::oracle_equivalence(7, 6, 6, 8);
    assert_eq!(run.ideals, 12);
    assert!(run.disagreements.is_empty(), "{:#?}", run.disagreements);
    assert!(run.members > 0 && run.members < run.probes, "probes should mix members and non-members");
}

#[test]
fn lifts_are_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r = common::ring(3);
    for _ in 0..10 {
        let gens: Vec<Polynomial> = (0..3).map(|_| common::random_poly(&mut rng, &r, 2, 3, false)).collect();
        let tb = TrackedBasis::new(&gens, &Budget::default()).unwrap();
        for f in common::probes(&mut rng, &gens, 6, false) {
            if let Some(coeffs) = tb.lift(&f) {
                let mut sum = Polynomial::zero(&r);
                for (c, g) in coeffs.iter().zip(&gens) {
                    sum = &sum + &(c * g);
                }
                assert_eq!(sum, f);
            } else {
                let gb = groebner_basis(&gens, &Budget::default()).unwrap();
                assert!(!normal_form(&f, &gb).is_zero());
            }
        }
    }
}

#[test]
fn basis_is_reduced_and_order_independent() {
    let p = free(&["x", "y", "z"]);
    let a = Ideal::parse(&p, &["x^2 - y", "x*y - z", "y^2 - x*z"]).unwrap();
    let b = Ideal::parse(&p, &["y^2 - x*z", "x^2 - y", "x*y - z"]).unwrap();
    assert_eq!(a.basis().unwrap(), b.basis().unwrap());
    let basis = a.basis().unwrap();
    for (i, g) in basis.iter().enumerate() {
        assert_eq!(g.leading_coeff(), Some(&rat(1)));
        let others: Vec<Polynomial> = basis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h.clone()).collect();
        assert_eq!(&normal_form(g, &others), g, "{g} is not reduced");
    }
}

#[test]
fn colength_and_dimension() {
    let p = free(&["x", "y"]);
    assert_eq!(Ideal::parse(&p, &["x^2", "y^3"]).unwrap().colength().unwrap(), Colength::Finite(6));
    assert_eq!(Ideal::parse(&p, &["x*y"]).unwrap().colength().unwrap(), Colength::Infinite);
    assert_eq!(Ideal::parse(&p, &["x*y"]).unwrap().krull_dimension().unwrap(), Some(1));
    assert_eq!(Ideal::unit(&p).krull_dimension().unwrap(), None);
}

#[test]
fn lex_and_grevlex_describe_the_same_ideal() {
    let p = free(&["x", "y", "z"]);
    let i = Ideal::parse(&p, &["x + y + z", "x*y + y*z + x*z", "x*y*z - 1"]).unwrap();
    let lex = i.basis_in(MonomialOrder::Lex).unwrap();
    assert!(lex.iter().any(|g| (0..2).all(|v| !g.uses_var(v))), "lex basis should contain an eliminant in z");
    let back = Ideal::new(&p, lex.iter().map(|g| g.reorder(p.ring())).collect()).unwrap();
    assert!(back.equals(&i).unwrap());
}

#[test]
fn ideal_arithmetic() {
    let p = free(&["x", "y"]);
    let i = Ideal::parse(&p, &["x"]).unwrap();
    let j = Ideal::parse(&p, &["y"]).unwrap();
    assert!(i.intersection(&j).unwrap().equals(&Ideal::parse(&p, &["x*y"]).unwrap()).unwrap());
    assert!(i.product(&j).unwrap().equals(&i.intersection(&j).unwrap()).unwrap());
    let k = Ideal::parse(&p, &["x^2", "x*y"]).unwrap();
    assert!(k.colon(&i).unwrap().equals(&Ideal::parse(&p, &["x", "y"]).unwrap()).unwrap());
    assert!(k.radical_contains(&p.parse_poly("x").unwrap()).unwrap());
    assert!(!k.radical_contains(&p.parse_poly("y").unwrap()).unwrap());
}

#[test]
fn quotient_ring_membership() {
    let pres = RingPresentation::parse("Q[x,y]", &["x^2 + y^2 - 1"]).unwrap();
    let i = Ideal::parse(&pres, &["x - 1"]).unwrap();
    assert!(i.contains(&pres.parse_poly("y^2").unwrap()).unwrap());
    assert!(!i.contains(&pres.parse_poly("y").unwrap()).unwrap());
}

#[test]
fn budget_exhaustion_is_reported() {
    let p = free(&["x", "y", "z"]);
    let tight = Budget { max_basis: 2, max_degree: 64, max_reductions: 10 };
    let i = Ideal::parse(&p, &["x^3 - y*z", "y^3 - x*z", "z^3 - x*y"]).unwrap().with_budget(tight);
    match i.basis() {
        Err(e) => assert!(e.is_resource_limit(), "{e}"),
        Ok(_) => panic!("expected the budget to run out"),
    }
}


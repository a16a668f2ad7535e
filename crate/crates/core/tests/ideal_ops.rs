use std::sync::Arc;

use ciwb_core::ideal_ops::{b_ideal, b_pattern, construct_b, coprime_product_b_stability, factorial, recognize_b};
use ciwb_core::{Colength, Error, Ideal, Polynomial, RingPresentation};

fn free(decl: &str) -> Arc<RingPresentation> {
    RingPresentation::parse(decl, &[]).unwrap()
}

fn polys(r: &Arc<RingPresentation>, s: &[&str]) -> Vec<Polynomial> {
    s.iter().map(|p| r.parse_poly(p).unwrap()).collect()
}

fn colength(i: &Ideal) -> u64 {
    match i.colength().unwrap() {
        Colength::Finite(n) => n,
        Colength::Infinite => panic!("{i} has infinite colength"),
    }
}

#[test]
fn colength_scales_by_factorial() {
    for (decl, vars) in [("Q[x,y]", vec!["x", "y"]), ("Q[x,y,z]", vec!["x", "y", "z"]), ("Q[x,y,z,w]", vec!["x", "y", "z", "w"])] {
        let r = free(decl);
        let j = Ideal::parse(&r, &vars).unwrap();
        let b = construct_b(&j, &polys(&r, &vars)).unwrap();
        let k = vars.len();
        assert_eq!(colength(&b.result), factorial(k - 1) * colength(&j), "{decl}");
        assert_eq!(b.exponent(), factorial(k - 1));
    }
}

#[test]
fn colength_law_off_the_origin() {
    // a fat point: J = (x - 1, y^2, z), colength 2; B(J) has colength 4
    let r = free("Q[x,y,z]");
    let j = Ideal::parse(&r, &["x - 1", "y^2", "z"]).unwrap();
    let b = construct_b(&j, &polys(&r, &["x - 1", "y^2", "z"])).unwrap();
    assert_eq!(colength(&j), 2);
    assert_eq!(colength(&b.result), 4);
}

#[test]
fn b_ideal_matches_pattern_plus_square() {
    let r = free("Q[x,y,z]");
    let fs = polys(&r, &["x", "y", "z"]);
    let j = Ideal::parse(&r, &["x", "y", "z"]).unwrap();
    let b = b_ideal(&j, &fs).unwrap();
    let pattern = Ideal::new(&r, b_pattern(&fs)).unwrap();
    assert!(b.equals(&pattern.sum(&b.power(2).unwrap()).unwrap()).unwrap());
    assert_eq!(b_pattern(&fs)[2].to_string(), "z^2");
}

#[test]
fn recognition_round_trip() {
    let r = free("Q[x,y,z]");
    let fs = polys(&r, &["x + y^2", "y - z^2", "z"]);
    let j0 = Ideal::new(&r, fs.clone()).unwrap();
    let built = construct_b(&j0, &fs).unwrap();
    let found = recognize_b(&built.result, &fs).unwrap().expect("recognised");
    assert!(found.result.equals(&built.result).unwrap());
    assert!(found.base.radical_contains_ideal(&j0).unwrap());
}

#[test]
fn empty_pattern_is_rejected() {
    let r = free("Q[x]");
    let j = Ideal::parse(&r, &["x"]).unwrap();
    assert!(matches!(construct_b(&j, &[]), Err(Error::Precondition(_))));
    assert!(matches!(recognize_b(&j, &[]), Err(Error::Precondition(_))));
}

#[test]
fn coprime_products_stay_factorial() {
    let r = free("Q[x,y]");
    let i0 = Ideal::parse(&r, &["x", "y"]).unwrap();
    let j0 = Ideal::parse(&r, &["x - 2", "y - 1"]).unwrap();
    let ci = construct_b(&i0, &polys(&r, &["x", "y"])).unwrap();
    let cj = construct_b(&j0, &polys(&r, &["x - 2", "y - 1"])).unwrap();
    let c = coprime_product_b_stability(&ci.result, &cj.result, &ci, &cj).unwrap();
    assert_eq!(c.r, 2);
    assert_eq!(colength(&c.result), 2);
    let unit = Ideal::unit(&r);
    let cu = construct_b(&unit, &polys(&r, &["1", "0"])).unwrap();
    let same = coprime_product_b_stability(&unit, &ci.result, &cu, &ci).unwrap();
    assert!(same.result.equals(&ci.result).unwrap());
}

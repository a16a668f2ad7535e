//! Multivariate polynomials over the rationals.

mod monomial;
mod order;
mod parse;
mod polynomial;
mod ring;

pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::parse_polynomial;
pub use polynomial::{rat, ratio, Coeff, Polynomial, Term};
pub use ring::PolyRing;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::collections::HashMap;

    #[test]
    fn arithmetic_laws() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::Lex).unwrap();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        let a = &x + &y;
        let b = &x - &y;
        assert_eq!(&a * &b, &x.pow(2) - &y.pow(2));
        assert!((&a - &a).is_zero());
        assert_eq!(a.pow(3).total_degree(), Some(3));
        assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
        assert_eq!(x.div_exact(&y), None);
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let r1 = PolyRing::new(&["x"], MonomialOrder::Lex).unwrap();
        let r2 = PolyRing::new(&["y"], MonomialOrder::Lex).unwrap();
        let x = r1.var("x").unwrap();
        let y = r2.var("y").unwrap();
        assert_eq!(x.checked_add(&y), Err(Error::RingMismatch));
        assert_eq!(x.checked_mul(&y), Err(Error::RingMismatch));
    }

    #[test]
    fn eval_and_substitute() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex).unwrap();
        let p = Polynomial::parse(&r, "x^2 - 3*x*y + 1/2").unwrap();
        let mut pt = HashMap::new();
        pt.insert("x".to_string(), rat(2));
        assert_eq!(p.eval(&pt), Err(Error::MissingAssignment("y".into())));
        pt.insert("y".to_string(), ratio(1, 3));
        assert_eq!(p.eval(&pt).unwrap(), ratio(5, 2));

        let s = PolyRing::new(&["t"], MonomialOrder::Lex).unwrap();
        let t = s.var("t").unwrap();
        let img = p.substitute(&s, &[t.clone(), t.pow(2)]).unwrap();
        assert_eq!(img, Polynomial::parse(&s, "-3*t^3 + t^2 + 1/2").unwrap());
    }

    #[test]
    fn reorder_keeps_value() {
        let r = PolyRing::new(&["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
        let p = Polynomial::parse(&r, "x*z + y^2 + z^3").unwrap();
        let lex = r.with_order(MonomialOrder::Lex).unwrap();
        let q = p.reorder(&lex);
        assert_eq!(q.leading_monomial().unwrap().exponents(), &[1, 0, 1]);
        assert_eq!(p.leading_monomial().unwrap().exponents(), &[0, 0, 3]);
        assert_eq!(q.reorder(&r), p);
    }

    #[test]
    fn primitive_integer_normalises() {
        let r = PolyRing::new(&["x"], MonomialOrder::Lex).unwrap();
        let p = Polynomial::parse(&r, "-1/2*x + 3/4").unwrap();
        assert_eq!(p.primitive_integer().to_string(), "2*x - 3");
    }
}

//! The concrete rings: `K`, the universal rings `A_n`, `B_n`, and the
//! coordinate ring of the real 3-sphere.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{Ideal, RingPresentation};
use crate::poly::{MonomialOrder, PolyRing, Polynomial};

/// `Q[S,T,U,V] / (SU + TV - 1)`.
pub fn k_ring() -> Arc<RingPresentation> {
    RingPresentation::parse("Q[S,T,U,V]", &["S*U + T*V - 1"]).expect("K is well formed").named("K")
}

fn xy_vars(n: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    v.extend((1..=n).map(|i| format!("Y{i}")));
    v
}

fn xy_sum(n: usize) -> String {
    (1..=n).map(|i| format!("X{i}*Y{i}")).collect::<Vec<_>>().join(" + ")
}

/// `A_n = Q[S,T,U,V,X_1..X_n,Y_1..Y_n] / (SU + TV - 1, ΣX_iY_i - ST)`.
pub fn a_n(n: usize) -> Result<Arc<RingPresentation>> {
    if n == 0 {
        return Err(Error::Unsupported("A_0 has no X/Y variables".into()));
    }
    let mut vars: Vec<String> = ["S", "T", "U", "V"].iter().map(|s| s.to_string()).collect();
    vars.extend(xy_vars(n));
    let ring = PolyRing::new(&vars, MonomialOrder::GrevLex)?;
    let rels = vec![
        Polynomial::parse(&ring, "S*U + T*V - 1")?,
        Polynomial::parse(&ring, &format!("{} - S*T", xy_sum(n)))?,
    ];
    Ok(RingPresentation::new(ring, rels)?.named(&format!("A{n}")))
}

/// `B_n = Q[T,X_1..X_n,Y_1..Y_n] / (ΣX_iY_i - T(1+T))`.
pub fn b_n(n: usize) -> Result<Arc<RingPresentation>> {
    if n == 0 {
        return Err(Error::Unsupported("B_0 has no X/Y variables".into()));
    }
    let mut vars = vec!["T".to_string()];
    vars.extend(xy_vars(n));
    let ring = PolyRing::new(&vars, MonomialOrder::GrevLex)?;
    let rels = vec![Polynomial::parse(&ring, &format!("{} - T - T^2", xy_sum(n)))?];
    Ok(RingPresentation::new(ring, rels)?.named(&format!("B{n}")))
}

/// Images of the `A_n` variables under the natural map `A_n → B_n`
/// (`T ↦ T`, `S ↦ 1 + T`, `U ↦ 1`, `V ↦ -1`, `X_i, Y_i` fixed).
pub fn a_to_b_images(n: usize, b: &Arc<RingPresentation>) -> Result<Vec<Polynomial>> {
    let mut images = vec![
        b.parse_poly("1 + T")?,
        b.parse_poly("T")?,
        b.parse_poly("1")?,
        b.parse_poly("-1")?,
    ];
    for name in xy_vars(n) {
        images.push(b.var(&name)?);
    }
    Ok(images)
}

/// `J_n = (X_1, .., X_n, T)`.
pub fn j_n(a: &Arc<RingPresentation>, n: usize) -> Result<Ideal> {
    let mut gens: Vec<Polynomial> = (1..=n).map(|i| a.var(&format!("X{i}"))).collect::<Result<_>>()?;
    gens.push(a.var("T")?);
    Ideal::new(a, gens)
}

/// `J'_n = (X_1, .., X_{n-1}) + J_n^{(n-1)!}`.
pub fn j_prime_n(a: &Arc<RingPresentation>, n: usize) -> Result<Ideal> {
    let k = crate::ideal_ops::factorial(n - 1) as u32;
    let gens: Vec<Polynomial> = (1..n).map(|i| a.var(&format!("X{i}"))).collect::<Result<_>>()?;
    j_n(a, n)?.power(k)?.add_generators(&gens)
}

/// `Q[X0,X1,X2,X3] / (X0² + X1² + X2² + X3² - 1)`.
pub fn sphere3() -> Arc<RingPresentation> {
    RingPresentation::parse("Q[X0,X1,X2,X3]", &["X0^2 + X1^2 + X2^2 + X3^2 - 1"])
        .expect("sphere is well formed")
        .named("sphere3")
}

/// The point ideal `(X0 - 1, X1, X2, X3)` on the sphere.
pub fn sphere_point(s: &Arc<RingPresentation>) -> Result<Ideal> {
    Ideal::parse(s, &["X0 - 1", "X1", "X2", "X3"])
}

/// Looks up a builtin ring by name (`K`, `A<n>`, `B<n>`, `sphere3`).
pub fn builtin_ring(name: &str) -> Result<Arc<RingPresentation>> {
    let parse_n = |s: &str| s.parse::<usize>().map_err(|_| Error::UnknownModel(name.to_string()));
    match name {
        "K" => Ok(k_ring()),
        "sphere3" => Ok(sphere3()),
        _ if name.starts_with('A') || name.starts_with('B') => {
            let digits = name[1..].trim_start_matches('_');
            let n = parse_n(digits)?;
            if name.starts_with('A') {
                a_n(n)
            } else {
                b_n(n)
            }
        }
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

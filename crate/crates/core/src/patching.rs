//! Fiber-product patching of free modules over `D(t)` and `D(s)`.
//!
//! Given `su + tv = 1` and a Suslin certificate for the factorial row of
//! `f` with `Σ f_i g_i = st`, let `G` be the transposed certificate, so the
//! first row of `G` is the factorial row and `det G = (st)^a`. With
//! `s^a α + t^a β = 1` (from the binomial expansion of `(su + tv)^{2a-1}`),
//!
//! ```text
//!     e = [ s^a α · I     α · adj G ]
//!         [ β · G         t^a β · I ]
//! ```
//!
//! is a `2r × 2r` idempotent of trace `r`: its image is the glued module `P`.
//! Over `D(t)` it is conjugate to the standard projection onto the first
//! factor, over `D(s)` to the one onto the second. The row
//! `h = (factorial row, t^a, 0, .., 0)` satisfies `h·e = h`, so `h`
//! restricted to `P` is the map `ψ: P → J` whose image is generated by the
//! entries of `h`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::groebner::{Ideal, RingPresentation};
use crate::ideal_ops::{b_ideal, binomial_split};
use crate::lambda_ring::{K0Class, K0Model};
use crate::matrix::{rank_rational, Matrix};
use crate::poly::Polynomial;
use crate::sample::sample_points;
use crate::suslin::{complete_row, CertificateRecord, SuslinCertificate};
use crate::universal::a_n;

/// Where a gluing came from; drives the K₀ bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GluingOrigin {
    /// The universal instance over `A_n`.
    Universal(usize),
    /// `s = 1`, `t = 0`: nothing is glued.
    Trivial,
    /// Pulled back from the universal instance over `A_n` along a ring map.
    Pullback(usize),
    Custom,
}

#[derive(Clone, Debug)]
pub struct GluingData {
    pub s: Polynomial,
    pub t: Polynomial,
    pub u: Polynomial,
    pub v: Polynomial,
    pub transition: SuslinCertificate,
    pub origin: GluingOrigin,
}

fn identity_defect(pres: &RingPresentation, lhs: &Polynomial, rhs: &Polynomial, equation: String) -> Result<()> {
    let defect = pres.reduce(&(lhs - rhs));
    if defect.is_zero() {
        Ok(())
    } else {
        Err(Error::Identity { equation, defect: defect.to_string() })
    }
}

/// Checks `su + tv = 1` and `Σ f_i g_i = st`, then completes the factorial
/// row of `f` with witness `st`. The degenerate case `t = 0` glues
/// nothing and uses the identity transition.
pub fn build_gluing(
    pres: &Arc<RingPresentation>,
    s: &Polynomial,
    t: &Polynomial,
    u: &Polynomial,
    v: &Polynomial,
    fs: &[Polynomial],
    gs: &[Polynomial],
) -> Result<GluingData> {
    let ring = pres.ring();
    identity_defect(pres, &(&(s * u) + &(t * v)), &Polynomial::one(ring), format!("({s})*({u}) + ({t})*({v}) = 1"))?;
    if fs.len() != gs.len() || fs.is_empty() {
        return Err(Error::Precondition(format!("{} generators but {} cofactors", fs.len(), gs.len())));
    }
    let st = s * t;
    let mut sum = Polynomial::zero(ring);
    for (f, g) in fs.iter().zip(gs) {
        sum = &sum + &(f * g);
    }
    let terms: Vec<String> = fs.iter().zip(gs).map(|(f, g)| format!("({f})*({g})")).collect();
    identity_defect(pres, &sum, &st, format!("{} = ({s})*({t})", terms.join(" + ")))?;

    if pres.is_zero(t) {
        // s is a unit; the transition must be globally invertible, and the
        // identity is the only one whose first column is a standard row
        let e1: Vec<Polynomial> =
            (0..fs.len()).map(|i| if i == 0 { Polynomial::one(ring) } else { Polynomial::zero(ring) }).collect();
        if !fs.iter().zip(&e1).all(|(f, e)| pres.equal(f, e)) {
            return Err(Error::Precondition(
                "degenerate gluing (t = 0) needs the row (1, 0, .., 0) so that the transition is invertible".into(),
            ));
        }
        let transition = SuslinCertificate {
            matrix: Matrix::identity(pres, fs.len()),
            row: e1.clone(),
            row_base: e1,
            cofactors: gs.to_vec(),
            witness: Polynomial::zero(ring),
            exponent: 0,
        };
        return Ok(GluingData {
            s: s.clone(),
            t: t.clone(),
            u: u.clone(),
            v: v.clone(),
            transition,
            origin: GluingOrigin::Trivial,
        });
    }
    if pres.is_zero(s) {
        return Err(Error::Precondition("degenerate gluing must have t = 0, not s = 0".into()));
    }
    let transition = complete_row(pres, fs, gs, &st)?;
    Ok(GluingData { s: s.clone(), t: t.clone(), u: u.clone(), v: v.clone(), transition, origin: GluingOrigin::Custom })
}

/// The universal gluing over `A_n`: `s = S`, `t = T`, `f_i = X_i`, `g_i = Y_i`.
pub fn universal_gluing(n: usize) -> Result<GluingData> {
    let a = a_n(n)?;
    let v = |name: &str| a.var(name);
    let xs: Vec<Polynomial> = (1..=n).map(|i| v(&format!("X{i}"))).collect::<Result<_>>()?;
    let ys: Vec<Polynomial> = (1..=n).map(|i| v(&format!("Y{i}"))).collect::<Result<_>>()?;
    let mut g = build_gluing(&a, &v("S")?, &v("T")?, &v("U")?, &v("V")?, &xs, &ys)?;
    g.origin = GluingOrigin::Universal(n);
    Ok(g)
}

/// Free module of rank `r`: `s = 1`, `t = 0`, identity transition.
pub fn trivial_gluing(pres: &Arc<RingPresentation>, r: usize) -> Result<GluingData> {
    let ring = pres.ring();
    let fs: Vec<Polynomial> =
        (0..r).map(|i| if i == 0 { Polynomial::one(ring) } else { Polynomial::zero(ring) }).collect();
    let gs = vec![Polynomial::zero(ring); r];
    build_gluing(pres, &Polynomial::one(ring), &Polynomial::zero(ring), &Polynomial::one(ring), &Polynomial::zero(ring), &fs, &gs)
}

impl GluingData {
    pub fn presentation(&self) -> &Arc<RingPresentation> {
        self.transition.presentation()
    }

    pub fn r(&self) -> usize {
        self.transition.r()
    }

    /// `J_0 = (f_1, .., f_r, t)`.
    pub fn base_ideal(&self) -> Result<Ideal> {
        let mut gens = self.transition.row_base.clone();
        gens.push(self.t.clone());
        Ideal::new(self.presentation(), gens)
    }

    /// The target `(f_1, .., f_{r-1}) + J_0^{(r-1)!}` of `ψ`.
    pub fn target(&self) -> Result<Ideal> {
        if self.origin == GluingOrigin::Trivial {
            return Ok(Ideal::unit(self.presentation()));
        }
        b_ideal(&self.base_ideal()?, &self.transition.row_base)
    }

    /// Pulls the gluing back along a ring map given by images of this
    /// ring's variables. The identities are rechecked in the target.
    pub fn transport(&self, target: &Arc<RingPresentation>, images: &[Polynomial]) -> Result<GluingData> {
        let map = |p: &Polynomial| -> Result<Polynomial> { Ok(target.reduce(&p.substitute(target.ring(), images)?)) };
        let maps = |ps: &[Polynomial]| ps.iter().map(map).collect::<Result<Vec<_>>>();
        let mut g = build_gluing(
            target,
            &map(&self.s)?,
            &map(&self.t)?,
            &map(&self.u)?,
            &map(&self.v)?,
            &maps(&self.transition.row_base)?,
            &maps(&self.transition.cofactors)?,
        )?;
        g.origin = match (&self.origin, &g.origin) {
            (_, GluingOrigin::Trivial) => GluingOrigin::Trivial,
            (GluingOrigin::Universal(n) | GluingOrigin::Pullback(n), _) => GluingOrigin::Pullback(*n),
            _ => GluingOrigin::Custom,
        };
        Ok(g)
    }
}

#[derive(Clone, Debug)]
pub struct PatchedModule {
    pub gluing: GluingData,
    pub idempotent: Matrix,
    pub rank: usize,
    pub target: Ideal,
    /// The row `h` with `h·e = h`; `ψ(e x) = h·e·x`.
    pub map_row: Vec<Polynomial>,
}

pub fn patch_module(g: &GluingData) -> Result<PatchedModule> {
    patch_module_with(g, Execution::default())
}

pub fn patch_module_with(g: &GluingData, exec: Execution) -> Result<PatchedModule> {
    let pres = g.presentation().clone();
    let ring = pres.ring().clone();
    let r = g.r();
    let zero = Polynomial::zero(&ring);
    let (idempotent, map_row) = if g.origin == GluingOrigin::Trivial {
        let mut e = Matrix::zero(&pres, 2 * r, 2 * r);
        for i in 0..r {
            e.set(i, i, Polynomial::one(&ring));
        }
        let mut h = g.transition.row.clone();
        h.extend(std::iter::repeat(zero.clone()).take(r));
        (e, h)
    } else {
        let a = g.transition.exponent;
        let gm = g.transition.matrix.transpose();
        let adj = gm.adjugate()?;
        let (sa, ta) = (g.s.pow(a), g.t.pow(a));
        let (alpha, beta) = if a == 0 {
            (Polynomial::one(&ring), zero.clone())
        } else {
            let (pa, pb) = binomial_split(&(&g.s * &g.u), &(&g.t * &g.v), a);
            let alpha = pa.div_exact(&sa).ok_or_else(|| Error::Verification("s^a does not divide its share".into()))?;
            let beta = pb.div_exact(&ta).ok_or_else(|| Error::Verification("t^a does not divide its share".into()))?;
            (pres.reduce(&alpha), pres.reduce(&beta))
        };
        let id = Matrix::identity(&pres, r);
        let e = Matrix::block(
            &id.scale(&(&sa * &alpha)),
            &adj.scale(&alpha),
            &gm.scale(&beta),
            &id.scale(&(&ta * &beta)),
        )?
        .reduced();
        let mut h = g.transition.row.clone();
        h.push(pres.reduce(&ta));
        h.extend(std::iter::repeat(zero.clone()).take(r - 1));
        (e, h)
    };
    let square = idempotent.mul_with(&idempotent, exec)?;
    if !square.equals(&idempotent) {
        return Err(Error::Verification("patched matrix is not idempotent".into()));
    }
    if !pres.equal(&idempotent.trace(), &Polynomial::from_int(&ring, r as i64)) {
        return Err(Error::Verification("idempotent trace differs from the rank".into()));
    }
    let p = PatchedModule { gluing: g.clone(), idempotent, rank: r, target: g.target()?, map_row };
    if !verify_surjection(&p) {
        return Err(Error::Verification("ψ does not map onto its target".into()));
    }
    Ok(p)
}

impl PatchedModule {
    /// Size `N` of the idempotent.
    pub fn size(&self) -> usize {
        self.idempotent.rows()
    }

    pub fn presentation(&self) -> &Arc<RingPresentation> {
        self.idempotent.presentation()
    }

    /// The ideal generated by the entries of `h·e`, i.e. `ψ(P)`.
    pub fn image_ideal(&self) -> Result<Ideal> {
        let pres = self.presentation();
        let h = Matrix::from_rows(pres, vec![self.map_row.clone()])?;
        let he = h.mul(&self.idempotent)?;
        Ideal::new(pres, he.row(0).to_vec())
    }

    pub fn record(&self) -> PatchedRecord {
        let g = &self.gluing;
        let s = |p: &Polynomial| p.to_string();
        PatchedRecord {
            ring: self.presentation().to_string(),
            origin: g.origin.clone(),
            s: s(&g.s),
            t: s(&g.t),
            u: s(&g.u),
            v: s(&g.v),
            transition: g.transition.record(),
            rank: self.rank,
            size: self.size(),
            idempotent: self.idempotent.to_strings(),
            map_row: self.map_row.iter().map(s).collect(),
            target: self.target.generators().iter().map(s).collect(),
        }
    }
}

/// Audit form of a patched module: every polynomial as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchedRecord {
    pub ring: String,
    pub origin: GluingOrigin,
    pub s: String,
    pub t: String,
    pub u: String,
    pub v: String,
    pub transition: CertificateRecord,
    pub rank: usize,
    pub size: usize,
    pub idempotent: Vec<Vec<String>>,
    pub map_row: Vec<String>,
    pub target: Vec<String>,
}

pub fn verify_surjection(p: &PatchedModule) -> bool {
    verify_surjection_onto(p, &p.target)
}

/// Whether `ψ(P)` equals `j` by two-sided membership.
pub fn verify_surjection_onto(p: &PatchedModule, j: &Ideal) -> bool {
    p.image_ideal().and_then(|im| im.equals(j)).unwrap_or(false)
}

/// Whether `ψ(P) + I = (1)`, i.e. `P ⊕ I`-type sums still surject.
pub fn verify_sum_surjection(p: &PatchedModule, i: &Ideal) -> Result<bool> {
    p.image_ideal()?.sum(i)?.is_unit()
}

pub fn is_idempotent(p: &PatchedModule) -> bool {
    p.idempotent.mul(&p.idempotent).map(|sq| sq.equals(&p.idempotent)).unwrap_or(false)
}

/// Numeric rank of `e` at `count` seeded points of the variety.
pub fn sampled_ranks(p: &PatchedModule, count: usize, seed: u64, exec: Execution) -> Result<Vec<usize>> {
    let points = sample_points(p.presentation(), count, seed, None)?;
    Ok(exec.map(&points, |pt| rank_rational(&p.idempotent.eval(pt))))
}

/// All `(r+1)×(r+1)` minors of `e` vanish modulo the relations.
pub fn fitting_minors_vanish(p: &PatchedModule, exec: Execution) -> Result<bool> {
    let k = p.rank + 1;
    if k > p.size() {
        return Ok(true);
    }
    Ok(p.idempotent.minors(k, exec)?.iter().all(|m| m.is_zero()))
}

/// `[P] - [A^r]` in `model`, by bookkeeping: the universal gluing over
/// `A_n` has class `-λ_n`, pullbacks carry the registered image of `λ_n`,
/// trivial gluings give 0.
pub fn k0_class_of_patched(p: &PatchedModule, model: &Arc<K0Model>) -> Result<K0Class> {
    let ring_name = p.presentation().name().map(str::to_string);
    let registered = match (&ring_name, model.ring_name()) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    };
    if !registered {
        return Err(Error::UnregisteredRing(ring_name.unwrap_or_else(|| p.presentation().to_string())));
    }
    match &p.gluing.origin {
        GluingOrigin::Trivial => Ok(model.zero()),
        GluingOrigin::Universal(n) | GluingOrigin::Pullback(n) => {
            let lambda = model
                .pullback(&format!("A{n}"))
                .ok_or_else(|| Error::UnregisteredRing(format!("A{n} → {}", ring_name.unwrap_or_default())))?;
            Ok(-&lambda)
        }
        GluingOrigin::Custom => Err(Error::UnregisteredRing("custom gluing has no registered universal source".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universal::j_prime_n;

    #[test]
    fn universal_two() {
        let g = universal_gluing(2).unwrap();
        let p = patch_module(&g).unwrap();
        assert_eq!(p.size(), 4);
        assert!(is_idempotent(&p));
        let a = p.presentation().clone();
        assert!(p.target.equals(&j_prime_n(&a, 2).unwrap()).unwrap());
        let ranks = sampled_ranks(&p, 8, 7, Execution::Sequential).unwrap();
        assert!(ranks.iter().all(|&r| r == 2));
        assert!(fitting_minors_vanish(&p, Execution::default()).unwrap());
        assert!(!verify_surjection_onto(&p, &p.target.power(2).unwrap()));
    }

    #[test]
    fn trivial() {
        let r = RingPresentation::parse("Q[x,y]", &[]).unwrap();
        let p = patch_module(&trivial_gluing(&r, 2).unwrap()).unwrap();
        assert_eq!(p.idempotent.to_strings(), vec![
            vec!["1", "0", "0", "0"],
            vec!["0", "1", "0", "0"],
            vec!["0", "0", "0", "0"],
            vec!["0", "0", "0", "0"],
        ]);
        assert!(p.target.is_unit().unwrap());
        assert!(verify_surjection(&p));
    }

    #[test]
    fn identity_errors_name_the_defect() {
        let a = a_n(2).unwrap();
        let v = |s: &str| a.parse_poly(s).unwrap();
        let err = build_gluing(&a, &v("S"), &v("T"), &v("U"), &v("V"), &[v("X1"), v("X2")], &[v("Y1"), v("2*Y2")])
            .unwrap_err();
        match err {
            Error::Identity { defect, .. } => assert_eq!(defect, v("X2*Y2").to_string()),
            e => panic!("unexpected {e:?}"),
        }
        let err = build_gluing(&a, &v("S"), &v("T"), &v("U"), &v("U"), &[v("X1"), v("X2")], &[v("Y1"), v("Y2")]);
        assert!(matches!(err, Err(Error::Identity { .. })));
    }
}

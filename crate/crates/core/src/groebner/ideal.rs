use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{groebner_basis, normal_form, Budget, RingPresentation, TrackedBasis};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::poly::{MonomialOrder, PolyRing, Polynomial};

/// A finitely generated ideal of a presented ring. The Gröbner basis of its
/// lift (generators plus relations) is computed lazily and published once.
pub struct Ideal {
    pres: Arc<RingPresentation>,
    gens: Vec<Polynomial>,
    budget: Budget,
    basis: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        Ideal { pres: self.pres.clone(), gens: self.gens.clone(), budget: self.budget, basis }
    }
}

/// Dimension of `R/I` over the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{n}"),
            Colength::Infinite => write!(f, "infinite"),
        }
    }
}

const COLENGTH_CAP: u64 = 5_000_000;

/// Intersection of two ideals of the free ring `ring`, by eliminating `t`
/// from `t·A + (1 − t)·B`.
fn intersect_lists(ring: &Arc<PolyRing>, a: &[Polynomial], b: &[Polynomial], budget: &Budget) -> Result<Vec<Polynomial>> {
    let n = ring.nvars();
    let ext = ring.with_leading_vars(&["@t"], MonomialOrder::Elimination { block: 1 })?;
    let shift: Vec<usize> = (1..=n).collect();
    let t = Polynomial::variable(&ext, 0);
    let one_minus_t = &Polynomial::one(&ext) - &t;
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for p in a {
        gens.push(&t * &p.embed(&ext, &shift));
    }
    for p in b {
        gens.push(&one_minus_t * &p.embed(&ext, &shift));
    }
    let gb = groebner_basis(&gens, budget)?;
    let mut images = vec![Polynomial::zero(ring)];
    images.extend((0..n).map(|i| Polynomial::variable(ring, i)));
    gb.iter()
        .filter(|g| !g.uses_var(0))
        .map(|g| g.substitute(ring, &images))
        .collect()
}

impl Ideal {
    pub fn new(pres: &Arc<RingPresentation>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if !PolyRing::same(g.ring(), pres.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(Ideal { pres: pres.clone(), gens, budget: Budget::default(), basis: OnceLock::new() })
    }

    pub fn parse(pres: &Arc<RingPresentation>, gens: &[&str]) -> Result<Self> {
        let gens = gens.iter().map(|g| pres.parse_poly(g)).collect::<Result<Vec<_>>>()?;
        Self::new(pres, gens)
    }

    pub fn unit(pres: &Arc<RingPresentation>) -> Self {
        Self::new(pres, vec![Polynomial::one(pres.ring())]).expect("same ring")
    }

    pub fn zero(pres: &Arc<RingPresentation>) -> Self {
        Self::new(pres, vec![]).expect("same ring")
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self.basis = OnceLock::new();
        self
    }

    fn derived(&self, gens: Vec<Polynomial>) -> Ideal {
        Ideal { pres: self.pres.clone(), gens, budget: self.budget, basis: OnceLock::new() }
    }

    pub fn presentation(&self) -> &Arc<RingPresentation> {
        &self.pres
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.pres.ring()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    fn check(&self, other: &Ideal) -> Result<()> {
        if self.pres.same(&other.pres) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Generators of the lift: own generators followed by the relations.
    pub fn lift_generators(&self) -> Vec<Polynomial> {
        let mut g = self.gens.clone();
        g.extend(self.pres.relations().iter().cloned());
        g
    }

    /// Reduced Gröbner basis of the lift under the ring's order (cached).
    pub fn basis(&self) -> Result<&[Polynomial]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = groebner_basis(&self.lift_generators(), &self.budget)?;
        let _ = self.basis.set(b);
        Ok(self.basis.get().unwrap())
    }

    pub fn is_basis_cached(&self) -> bool {
        self.basis.get().is_some()
    }

    /// Reduced basis under another order; the polynomials live in the
    /// re-ordered ring.
    pub fn basis_in(&self, order: MonomialOrder) -> Result<Vec<Polynomial>> {
        if order == self.ring().order() {
            return Ok(self.basis()?.to_vec());
        }
        let r = self.ring().with_order(order)?;
        let gens: Vec<Polynomial> = self.lift_generators().iter().map(|g| g.reorder(&r)).collect();
        groebner_basis(&gens, &self.budget)
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if !PolyRing::same(p.ring(), self.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(normal_form(p, self.basis()?))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Membership of many elements against one basis.
    pub fn contains_all(&self, ps: &[Polynomial], exec: Execution) -> Result<Vec<bool>> {
        if ps.iter().any(|p| !PolyRing::same(p.ring(), self.ring())) {
            return Err(Error::RingMismatch);
        }
        let basis = self.basis()?;
        Ok(exec.map(ps, |p| normal_form(p, basis).is_zero()))
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as ideals (two-sided generator membership).
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.basis()?.iter().any(|g| g.is_one()))
    }

    /// Expresses `p` as `Σ c_i·gen_i` modulo the relations.
    pub fn lift_membership(&self, p: &Polynomial) -> Result<Option<Vec<Polynomial>>> {
        let tb = TrackedBasis::new(&self.lift_generators(), &self.budget)?;
        Ok(tb.lift(p).map(|mut c| {
            c.truncate(self.gens.len());
            c
        }))
    }

    /// Generators replaced by the reduced basis, minus relation elements.
    pub fn simplified(&self) -> Result<Ideal> {
        let mut gens: Vec<Polynomial> = self
            .basis()?
            .iter()
            .map(|g| self.pres.reduce(g))
            .filter(|g| !g.is_zero())
            .collect();
        // low degree first, then the larger leading monomial: (x, y, z^2)
        let order = self.pres.ring().order();
        gens.sort_by(|a, b| {
            a.total_degree().cmp(&b.total_degree()).then_with(|| {
                match (a.leading_monomial(), b.leading_monomial()) {
                    (Some(x), Some(y)) => order.cmp(y, x),
                    _ => std::cmp::Ordering::Equal,
                }
            })
        });
        Ok(self.derived(gens))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ok(self.derived(g))
    }

    pub fn add_generators(&self, extra: &[Polynomial]) -> Result<Ideal> {
        let other = Ideal::new(&self.pres, extra.to_vec())?;
        self.sum(&other)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut g = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                let p = self.pres.reduce(&(a * b));
                if !p.is_zero() && !g.contains(&p) {
                    g.push(p);
                }
            }
        }
        Ok(self.derived(g))
    }

    /// `I^k` generated by all k-fold products of generators (k ≥ 1; k = 0
    /// gives the unit ideal).
    pub fn power(&self, k: u32) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.pres).with_budget(self.budget);
        for _ in 0..k {
            acc = acc.product(self)?;
        }
        if k == 1 {
            return Ok(self.clone());
        }
        Ok(acc)
    }

    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let g = intersect_lists(self.ring(), &self.lift_generators(), &other.lift_generators(), &self.budget)?;
        let g = g.iter().map(|p| self.pres.reduce(p)).filter(|p| !p.is_zero()).collect();
        Ok(self.derived(g))
    }

    /// `(I : g) = {a : a·g ∈ I}`.
    pub fn colon_element(&self, g: &Polynomial) -> Result<Ideal> {
        let g = self.pres.reduce(g);
        if g.is_zero() {
            return Ok(Ideal::unit(&self.pres).with_budget(self.budget));
        }
        let inter = intersect_lists(self.ring(), &self.lift_generators(), std::slice::from_ref(&g), &self.budget)?;
        let mut out = Vec::with_capacity(inter.len());
        for p in inter {
            let q = p
                .div_exact(&g)
                .ok_or_else(|| Error::Verification(format!("{p} is not divisible by {g}")))?;
            let q = self.pres.reduce(&q);
            if !q.is_zero() {
                out.push(q);
            }
        }
        Ok(self.derived(out))
    }

    /// `(I : J) = {a : a·J ⊆ I}`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            if self.pres.is_zero(g) {
                continue;
            }
            let c = self.colon_element(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersection(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.pres).with_budget(self.budget)))
    }

    /// Whether some power of `p` lies in `I`, via `1 ∈ I + (1 − z·p)`.
    pub fn radical_contains(&self, p: &Polynomial) -> Result<bool> {
        if !PolyRing::same(p.ring(), self.ring()) {
            return Err(Error::RingMismatch);
        }
        let n = self.ring().nvars();
        let ext = self.ring().with_leading_vars(&["@z"], MonomialOrder::GrevLex)?;
        let shift: Vec<usize> = (1..=n).collect();
        let mut gens: Vec<Polynomial> = self.lift_generators().iter().map(|g| g.embed(&ext, &shift)).collect();
        let z = Polynomial::variable(&ext, 0);
        gens.push(&Polynomial::one(&ext) - &(&z * &p.embed(&ext, &shift)));
        let gb = groebner_basis(&gens, &self.budget)?;
        Ok(gb.iter().any(|g| g.is_one()))
    }

    pub fn radical_contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        for g in &other.gens {
            if !self.radical_contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of standard monomials of the leading-term ideal.
    pub fn colength(&self) -> Result<Colength> {
        let basis = self.basis()?;
        if basis.iter().any(|g| g.is_one()) {
            return Ok(Colength::Finite(0));
        }
        let n = self.ring().nvars();
        let lms: Vec<&[u32]> = basis.iter().map(|g| g.leading_monomial().unwrap().exponents()).collect();
        let mut bounds = vec![u32::MAX; n];
        for m in &lms {
            let mono = crate::poly::Monomial::from_exponents(m.to_vec());
            if let Some((i, k)) = mono.as_pure_power() {
                bounds[i] = bounds[i].min(k);
            }
        }
        if bounds.iter().any(|&b| b == u32::MAX) {
            return Ok(Colength::Infinite);
        }
        let mut count = 0u64;
        let mut exp = vec![0u32; n];
        count_standard(&lms, &bounds, &mut exp, 0, &mut count)?;
        Ok(Colength::Finite(count))
    }

    /// Krull dimension of the quotient by `I` (maximal independent sets of
    /// the leading-term ideal); `None` for the unit ideal.
    pub fn krull_dimension(&self) -> Result<Option<usize>> {
        let basis = self.basis()?;
        if basis.iter().any(|g| g.is_one()) {
            return Ok(None);
        }
        let n = self.ring().nvars();
        if n > 30 {
            return Err(Error::Unsupported(format!("dimension over {n} variables")));
        }
        let masks: Vec<u32> = basis
            .iter()
            .map(|g| g.leading_monomial().unwrap().support().fold(0u32, |m, i| m | (1 << i)))
            .collect();
        let mut best = 0usize;
        for s in 0u32..(1u32 << n) {
            let size = s.count_ones() as usize;
            if size > best && masks.iter().all(|m| m & !s != 0) {
                best = size;
            }
        }
        Ok(Some(best))
    }
}

fn count_standard(lms: &[&[u32]], bounds: &[u32], exp: &mut Vec<u32>, var: usize, count: &mut u64) -> Result<()> {
    if var == exp.len() {
        let divisible = lms.iter().any(|m| m.iter().zip(exp.iter()).all(|(a, b)| a <= b));
        if !divisible {
            *count += 1;
            if *count > COLENGTH_CAP {
                return Err(Error::ResourceLimit(format!("colength above {COLENGTH_CAP}")));
            }
        }
        return Ok(());
    }
    for e in 0..bounds[var] {
        exp[var] = e;
        // prune: if the partial exponent is already divisible, deeper ones are too
        let prefix_div = lms.iter().any(|m| {
            m[var + 1..].iter().all(|&x| x == 0) && m[..=var].iter().zip(exp.iter()).all(|(a, b)| a <= b)
        });
        if prefix_div {
            break;
        }
        count_standard(lms, bounds, exp, var + 1, count)?;
    }
    exp[var] = 0;
    Ok(())
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", g.join(", "))
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self} in {}", self.pres)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(decl: &str) -> Arc<RingPresentation> {
        RingPresentation::parse(decl, &[]).unwrap()
    }

    #[test]
    fn membership_basics() {
        let r = free("Q[x,y]");
        let i = Ideal::parse(&r, &["x^2", "y"]).unwrap();
        assert!(i.contains(&r.parse_poly("x^2 + y").unwrap()).unwrap());
        let j = Ideal::parse(&free("Q[x]"), &["x^2"]).unwrap();
        assert!(!j.contains(&j.presentation().parse_poly("x").unwrap()).unwrap());
        assert!(!i.is_basis_cached() || i.basis().is_ok());
    }

    #[test]
    fn intersection_and_colon() {
        let r = free("Q[x,y]");
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let y = Ideal::parse(&r, &["y"]).unwrap();
        let xy = Ideal::parse(&r, &["x*y"]).unwrap();
        assert!(x.intersection(&y).unwrap().equals(&xy).unwrap());
        assert!(x.intersection(&Ideal::unit(&r)).unwrap().equals(&x).unwrap());
        assert!(xy.colon(&x).unwrap().equals(&y).unwrap());
        assert!(x.colon(&Ideal::unit(&r)).unwrap().equals(&x).unwrap());
        let r1 = free("Q[x]");
        let x2 = Ideal::parse(&r1, &["x^2"]).unwrap();
        let x1 = Ideal::parse(&r1, &["x"]).unwrap();
        assert!(x2.colon(&x1).unwrap().equals(&x1).unwrap());
    }

    #[test]
    fn radical_membership() {
        let r = free("Q[x,y,z]");
        let i = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(i.radical_contains(&r.parse_poly("x").unwrap()).unwrap());
        assert!(!i.radical_contains(&r.parse_poly("y").unwrap()).unwrap());
        let j = Ideal::parse(&r, &["x", "y", "x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]).unwrap();
        assert!(j.radical_contains(&r.parse_poly("z").unwrap()).unwrap());
    }

    #[test]
    fn colength_and_dimension() {
        let r = free("Q[x,y,z]");
        assert_eq!(Ideal::parse(&r, &["x", "y", "z^2"]).unwrap().colength().unwrap(), Colength::Finite(2));
        assert_eq!(Ideal::parse(&r, &["x"]).unwrap().colength().unwrap(), Colength::Infinite);
        let r2 = free("Q[x,y]");
        assert_eq!(Ideal::parse(&r2, &["x", "y"]).unwrap().colength().unwrap(), Colength::Finite(1));
        assert_eq!(Ideal::parse(&r2, &["x"]).unwrap().krull_dimension().unwrap(), Some(1));
        assert_eq!(Ideal::parse(&r2, &["x", "y"]).unwrap().krull_dimension().unwrap(), Some(0));
        assert_eq!(Ideal::unit(&r2).krull_dimension().unwrap(), None);
        // two reduced points
        let pts = Ideal::parse(&r2, &["x^2 - 1", "y - x"]).unwrap();
        assert_eq!(pts.colength().unwrap(), Colength::Finite(2));
    }

    #[test]
    fn quotient_ring_membership() {
        let a1 = RingPresentation::parse("Q[S,T,U,V,X1,Y1]", &["S*U + T*V - 1", "X1*Y1 - S*T"]).unwrap();
        let i = Ideal::parse(&a1, &["X1*Y1"]).unwrap();
        assert!(i.contains(&a1.parse_poly("S*T").unwrap()).unwrap());
        assert_eq!(a1.dimension().unwrap(), Some(4));
    }

    #[test]
    fn lift_membership_in_quotient() {
        let r = free("Q[x,y]");
        let i = Ideal::parse(&r, &["x", "y - 1"]).unwrap();
        let c = i.lift_membership(&r.parse_poly("x*y + y - 1").unwrap()).unwrap().unwrap();
        let back = &(&c[0] * &i.generators()[0]) + &(&c[1] * &i.generators()[1]);
        assert_eq!(back, r.parse_poly("x*y + y - 1").unwrap());
    }
}

use std::cmp::Ordering;

use num_traits::One;

use super::Budget;
use crate::error::{Error, Result};
use crate::poly::{Coeff, Monomial, MonomialOrder, Polynomial};

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine<'a> {
    budget: &'a Budget,
    order: MonomialOrder,
    polys: Vec<Polynomial>,
    cofactors: Option<Vec<Vec<Polynomial>>>,
    in_basis: Vec<bool>,
    pairs: Vec<Pair>,
    reductions: usize,
}

fn lm(p: &Polynomial) -> &Monomial {
    p.leading_monomial().expect("nonzero polynomial")
}

impl<'a> Engine<'a> {
    fn tick(&mut self) -> Result<()> {
        self.reductions += 1;
        if self.reductions > self.budget.max_reductions {
            return Err(Error::ResourceLimit(format!(
                "more than {} reduction steps",
                self.budget.max_reductions
            )));
        }
        Ok(())
    }

    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        (0..self.polys.len()).find(|&k| self.in_basis[k] && lm(&self.polys[k]).divides(m))
    }

    /// Full reduction of `p` (with optional cofactor tracking) by the
    /// current basis.
    fn reduce(&mut self, mut p: Polynomial, mut cof: Option<Vec<Polynomial>>) -> Result<(Polynomial, Option<Vec<Polynomial>>)> {
        let ring = p.ring().clone();
        let mut done: Vec<(Monomial, Coeff)> = Vec::new();
        while let Some((m, c)) = p.leading_term().cloned() {
            match self.find_reducer(&m) {
                Some(k) => {
                    self.tick()?;
                    let g = &self.polys[k];
                    let q = lm(g).quotient_of(&m).unwrap();
                    let qc = -(&c / g.leading_coeff().unwrap());
                    p = p.add_scaled(&qc, Some(&q), g);
                    if let (Some(cof), Some(all)) = (cof.as_mut(), self.cofactors.as_ref()) {
                        for (dst, src) in cof.iter_mut().zip(&all[k]) {
                            *dst = dst.add_scaled(&qc, Some(&q), src);
                        }
                    }
                }
                None => {
                    // move the leading term to the finished part
                    let lt = Polynomial::monomial(&ring, m.clone(), c.clone());
                    p = &p - &lt;
                    done.push((m, c));
                }
            }
        }
        Ok((Polynomial::from_terms(&ring, done), cof))
    }

    fn add_to_basis(&mut self, h: Polynomial, cof: Option<Vec<Polynomial>>) -> Result<()> {
        let deg = h.total_degree().unwrap_or(0);
        if deg > self.budget.max_degree {
            return Err(Error::ResourceLimit(format!(
                "basis element of degree {deg} exceeds bound {}",
                self.budget.max_degree
            )));
        }
        if self.polys.len() >= self.budget.max_basis {
            return Err(Error::ResourceLimit(format!("basis larger than {}", self.budget.max_basis)));
        }
        let inv = h.leading_coeff().unwrap().recip();
        let h = h.scale(&inv);
        if let (Some(all), Some(cof)) = (self.cofactors.as_mut(), cof) {
            all.push(cof.iter().map(|c| c.scale(&inv)).collect());
        }
        let hi = self.polys.len();
        let hm = lm(&h).clone();
        self.polys.push(h);
        self.in_basis.push(false);
        self.update(hi, &hm);
        self.in_basis[hi] = true;
        Ok(())
    }

    /// Gebauer–Möller pair update for a new element `h`.
    fn update(&mut self, h: usize, hm: &Monomial) {
        let basis: Vec<usize> = (0..self.polys.len() - 1).filter(|&k| self.in_basis[k]).collect();
        let cands: Vec<(usize, Monomial, bool)> = basis
            .iter()
            .map(|&g| {
                let gm = lm(&self.polys[g]);
                (g, hm.lcm(gm), hm.is_coprime(gm))
            })
            .collect();
        // criteria M and F
        let mut d: Vec<(usize, Monomial, bool)> = Vec::new();
        for (a, (g1, l1, coprime1)) in cands.iter().enumerate() {
            let later = cands[a + 1..].iter().any(|(_, l2, _)| l2.divides(l1));
            let earlier = d.iter().any(|(_, l2, _)| l2.divides(l1));
            if *coprime1 || (!later && !earlier) {
                d.push((*g1, l1.clone(), *coprime1));
            }
        }
        // product criterion
        let fresh: Vec<Pair> =
            d.into_iter().filter(|(_, _, c)| !c).map(|(g, l, _)| Pair { i: g, j: h, lcm: l }).collect();
        // criterion B on old pairs
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let li = hm.lcm(lm(&polys[p.i]));
            let lj = hm.lcm(lm(&polys[p.j]));
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(fresh);
        for k in basis {
            if hm.divides(lm(&self.polys[k])) {
                self.in_basis[k] = false;
            }
        }
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let o = order.cmp(&self.pairs[k].lcm, &self.pairs[best].lcm);
            if o == Ordering::Less || (o == Ordering::Equal && (self.pairs[k].j, self.pairs[k].i) < (self.pairs[best].j, self.pairs[best].i)) {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> (Polynomial, Option<Vec<Polynomial>>) {
        let f = &self.polys[p.i];
        let g = &self.polys[p.j];
        let qf = lm(f).quotient_of(&p.lcm).unwrap();
        let qg = lm(g).quotient_of(&p.lcm).unwrap();
        let zero = Polynomial::zero(f.ring());
        let s = zero.add_scaled(&Coeff::one(), Some(&qf), f).add_scaled(&-Coeff::one(), Some(&qg), g);
        let cof = self.cofactors.as_ref().map(|all| {
            all[p.i]
                .iter()
                .zip(&all[p.j])
                .map(|(a, b)| zero.add_scaled(&Coeff::one(), Some(&qf), a).add_scaled(&-Coeff::one(), Some(&qg), b))
                .collect()
        });
        (s, cof)
    }

    fn run(&mut self, gens: &[Polynomial]) -> Result<()> {
        let n = gens.len();
        for (k, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let cof = self.cofactors.as_ref().map(|_| {
                (0..n)
                    .map(|i| if i == k { Polynomial::one(g.ring()) } else { Polynomial::zero(g.ring()) })
                    .collect::<Vec<_>>()
            });
            let (h, cof) = self.reduce(g.clone(), cof)?;
            if !h.is_zero() {
                self.add_to_basis(h, cof)?;
            }
        }
        while let Some(pair) = self.next_pair() {
            let (s, cof) = self.spoly(&pair);
            let (h, cof) = self.reduce(s, cof)?;
            if !h.is_zero() {
                self.add_to_basis(h, cof)?;
            }
        }
        Ok(())
    }
}

fn check_rings(gens: &[Polynomial]) -> Result<()> {
    if let Some(first) = gens.first() {
        for g in gens {
            if !crate::poly::PolyRing::same(first.ring(), g.ring()) {
                return Err(Error::RingMismatch);
            }
        }
    }
    Ok(())
}

/// Reduced Gröbner basis: monic, interreduced, sorted by decreasing leading
/// monomial. The zero ideal gives an empty basis.
pub fn groebner_basis(gens: &[Polynomial], budget: &Budget) -> Result<Vec<Polynomial>> {
    check_rings(gens)?;
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return Ok(Vec::new());
    };
    let order = first.ring().order();
    let mut eng = Engine {
        budget,
        order,
        polys: Vec::new(),
        cofactors: None,
        in_basis: Vec::new(),
        pairs: Vec::new(),
        reductions: 0,
    };
    eng.run(gens)?;
    let mut g: Vec<Polynomial> = (0..eng.polys.len())
        .filter(|&k| eng.in_basis[k])
        .map(|k| eng.polys[k].clone())
        .collect();
    if g.iter().any(|p| p.is_constant()) {
        return Ok(vec![Polynomial::one(first.ring())]);
    }
    // minimalise (in_basis already excludes divisible leading terms, but
    // equal leading monomials may survive)
    g.sort_by(|a, b| order.cmp(lm(a), lm(b)));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| lm(q).divides(lm(&p))) {
            minimal.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
        let r = normal_form(&minimal[k], &others);
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| order.cmp(lm(b), lm(a)));
    Ok(reduced)
}

/// Fully reduces `p` modulo `basis` (any list of polynomials; the result is
/// the canonical normal form when `basis` is a Gröbner basis).
pub fn normal_form(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let ring = p.ring().clone();
    let mut rem = p.clone();
    let mut done: Vec<(Monomial, Coeff)> = Vec::new();
    while let Some((m, c)) = rem.leading_term().cloned() {
        match basis.iter().find(|g| !g.is_zero() && lm(g).divides(&m)) {
            Some(g) => {
                let q = lm(g).quotient_of(&m).unwrap();
                let qc = -(&c / g.leading_coeff().unwrap());
                rem = rem.add_scaled(&qc, Some(&q), g);
            }
            None => {
                rem = &rem - &Polynomial::monomial(&ring, m.clone(), c.clone());
                done.push((m, c));
            }
        }
    }
    Polynomial::from_terms(&ring, done)
}

/// A Gröbner basis whose elements carry their expression in the original
/// generators; used to lift memberships to explicit combinations.
pub struct TrackedBasis {
    gens_len: usize,
    basis: Vec<Polynomial>,
    cofactors: Vec<Vec<Polynomial>>,
}

impl TrackedBasis {
    pub fn new(gens: &[Polynomial], budget: &Budget) -> Result<Self> {
        check_rings(gens)?;
        let order = gens.first().map(|g| g.ring().order()).unwrap_or_default();
        let mut eng = Engine {
            budget,
            order,
            polys: Vec::new(),
            cofactors: Some(Vec::new()),
            in_basis: Vec::new(),
            pairs: Vec::new(),
            reductions: 0,
        };
        eng.run(gens)?;
        let keep: Vec<usize> = (0..eng.polys.len()).filter(|&k| eng.in_basis[k]).collect();
        let all = eng.cofactors.take().unwrap();
        Ok(TrackedBasis {
            gens_len: gens.len(),
            basis: keep.iter().map(|&k| eng.polys[k].clone()).collect(),
            cofactors: keep.iter().map(|&k| all[k].clone()).collect(),
        })
    }

    /// Coefficients `c` with `p = Σ c_i gens_i`, or `None` if `p` is not in
    /// the ideal.
    pub fn lift(&self, p: &Polynomial) -> Option<Vec<Polynomial>> {
        let ring = p.ring().clone();
        let mut out = vec![Polynomial::zero(&ring); self.gens_len];
        let mut rem = p.clone();
        while let Some((m, c)) = rem.leading_term().cloned() {
            let k = self.basis.iter().position(|g| lm(g).divides(&m))?;
            let g = &self.basis[k];
            let q = lm(g).quotient_of(&m).unwrap();
            let qc = &c / g.leading_coeff().unwrap();
            rem = rem.add_scaled(&-qc.clone(), Some(&q), g);
            for (dst, src) in out.iter_mut().zip(&self.cofactors[k]) {
                *dst = dst.add_scaled(&qc, Some(&q), src);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn polys(ring: &std::sync::Arc<PolyRing>, src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| Polynomial::parse(ring, s).unwrap()).collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex).unwrap();
        let g = groebner_basis(&polys(&r, &["x^2", "x*y"]), &Budget::default()).unwrap();
        assert_eq!(g, polys(&r, &["x^2", "x*y"]));
    }

    #[test]
    fn unit_and_duplicates() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex).unwrap();
        assert_eq!(groebner_basis(&polys(&r, &["x + 1", "x"]), &Budget::default()).unwrap(), polys(&r, &["1"]));
        assert_eq!(groebner_basis(&polys(&r, &["x", "x"]), &Budget::default()).unwrap(), polys(&r, &["x"]));
        assert!(groebner_basis(&polys(&r, &["0"]), &Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn twisted_cubic_lex() {
        let r = PolyRing::new(&["x", "y", "z"], MonomialOrder::Lex).unwrap();
        let g = groebner_basis(&polys(&r, &["x^2 - y", "x^3 - z"]), &Budget::default()).unwrap();
        // reduced lex basis is {x^2 - y, x*y - z, x*z - y^2, y^3 - z^2}
        assert_eq!(g, polys(&r, &["x^2 - y", "x*y - z", "x*z - y^2", "y^3 - z^2"]));
    }

    #[test]
    fn budget_is_reported() {
        let r = PolyRing::new(&["x", "y", "z"], MonomialOrder::Lex).unwrap();
        let tight = Budget { max_reductions: 3, ..Budget::default() };
        let err = groebner_basis(&polys(&r, &["x^2 - y", "x^3 - z", "y*z - x"]), &tight).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn tracked_lift_reconstructs() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex).unwrap();
        let gens = polys(&r, &["x^2 + y", "x*y - 1"]);
        let tb = TrackedBasis::new(&gens, &Budget::default()).unwrap();
        let p = Polynomial::parse(&r, "x^3*y + x*y^2 + 7*x*y - 7").unwrap();
        let c = tb.lift(&p).unwrap();
        let back = &(&c[0] * &gens[0]) + &(&c[1] * &gens[1]);
        assert_eq!(back, p);
        assert!(tb.lift(&Polynomial::parse(&r, "x").unwrap()).is_none());
    }
}

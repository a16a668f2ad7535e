//! Prime avoidance: adjusting generators by elements of `I²` so they leave a
//! finite set of primes, lifting to regular sequences and linking.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{Ideal, RingPresentation};
use crate::ideal_ops::{congruence_holds, is_regular_sequence};
use crate::poly::{rat, Monomial, Polynomial};

/// Ideals asserted prime by the caller. Only properness is checked.
#[derive(Clone, Debug, Default)]
pub struct PrimeList {
    primes: Vec<Ideal>,
}

impl PrimeList {
    pub fn new(primes: Vec<Ideal>) -> Result<Self> {
        for p in &primes {
            if p.is_unit()? {
                return Err(Error::Precondition(format!("{p} is the unit ideal, not a prime")));
            }
        }
        Ok(PrimeList { primes })
    }

    pub fn parse(pres: &Arc<RingPresentation>, primes: &[&[&str]]) -> Result<Self> {
        Self::new(primes.iter().map(|g| Ideal::parse(pres, g)).collect::<Result<_>>()?)
    }

    pub fn empty() -> Self {
        PrimeList::default()
    }

    pub fn primes(&self) -> &[Ideal] {
        &self.primes
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn concat(&self, other: &PrimeList) -> PrimeList {
        let mut primes = self.primes.clone();
        primes.extend(other.primes.iter().cloned());
        PrimeList { primes }
    }

    /// Members not strictly contained in another member (duplicates kept once).
    pub fn maximal(&self) -> Result<PrimeList> {
        let mut keep: Vec<Ideal> = Vec::new();
        for (i, p) in self.primes.iter().enumerate() {
            let mut dominated = false;
            for (j, q) in self.primes.iter().enumerate() {
                if i == j || !q.contains_ideal(p)? {
                    continue;
                }
                // q ⊇ p: p is dropped if strictly smaller, or equal and later
                if !p.contains_ideal(q)? || j < i {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                keep.push(p.clone());
            }
        }
        Ok(PrimeList { primes: keep })
    }
}

/// Supplies associated primes of the ideal generated by a partial sequence.
pub trait AssocPrimeOracle: Sync {
    fn assoc_primes(&self, prefix: &[Polynomial]) -> Result<PrimeList>;
}

impl<F> AssocPrimeOracle for F
where
    F: Fn(&[Polynomial]) -> Result<PrimeList> + Sync,
{
    fn assoc_primes(&self, prefix: &[Polynomial]) -> Result<PrimeList> {
        self(prefix)
    }
}

/// Oracle answering by prefix length (fixtures know the primes of each
/// stage in advance).
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    by_len: BTreeMap<usize, PrimeList>,
}

impl TableOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, len: usize, primes: PrimeList) -> Self {
        self.by_len.insert(len, primes);
        self
    }
}

impl AssocPrimeOracle for TableOracle {
    fn assoc_primes(&self, prefix: &[Polynomial]) -> Result<PrimeList> {
        self.by_len
            .get(&prefix.len())
            .cloned()
            .ok_or_else(|| Error::OracleOmission(format!("no primes recorded for a prefix of length {}", prefix.len())))
    }
}

/// Enumeration bounds for the avoidance element `a ∈ I²`.
#[derive(Clone, Debug)]
pub struct AvoidSearch {
    pub coefficients: Vec<i64>,
    pub multiplier_degree: u32,
    pub max_candidates: usize,
}

impl Default for AvoidSearch {
    fn default() -> Self {
        AvoidSearch { coefficients: vec![1, -1, 2, -2, 3], multiplier_degree: 1, max_candidates: 20_000 }
    }
}

fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(nvars)];
    let mut frontier = out.clone();
    for _ in 0..deg {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.exponents().iter().rposition(|&e| e > 0).unwrap_or(0);
            for v in start..nvars {
                next.push(m.mul(&Monomial::variable(nvars, v, 1)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Deterministic candidates for `a`: 0, then `c·m·g_i·g_j`, then sums of two
/// pair products.
fn candidates(i: &Ideal, search: &AvoidSearch) -> Vec<Polynomial> {
    let ring = i.ring().clone();
    let gens: Vec<&Polynomial> = i.generators().iter().filter(|g| !g.is_zero()).collect();
    let mut products = Vec::new();
    for a in 0..gens.len() {
        for b in a..gens.len() {
            products.push(gens[a] * gens[b]);
        }
    }
    let mut out = vec![Polynomial::zero(&ring)];
    for m in monomials_up_to(ring.nvars(), search.multiplier_degree) {
        for p in &products {
            for &c in &search.coefficients {
                out.push(p.mul_term(&m, &rat(c)));
            }
        }
    }
    for a in 0..products.len() {
        for b in a + 1..products.len() {
            for &c in &search.coefficients {
                out.push(&products[a] + &products[b].scale(&rat(c)));
            }
        }
    }
    out.truncate(search.max_candidates);
    out
}

/// Returns `f' = f + a` with `a ∈ I²` and `f' ∉ P` for every target prime.
///
/// Fails with [`Error::Infeasible`] when some target contains both `f` and
/// `I` (then every element of `f + I²` stays inside it).
pub fn avoid_adjust(f: &Polynomial, i: &Ideal, targets: &PrimeList, search: &AvoidSearch) -> Result<Polynomial> {
    let active = targets.primes();
    for p in active {
        if p.contains(f)? && p.contains_ideal(i)? {
            return Err(Error::Infeasible(format!("{i} ⊆ {p} and the generator lies in {p}")));
        }
    }
    'outer: for a in candidates(i, search) {
        let cand = i.presentation().reduce(&(f + &a));
        for p in active {
            if p.contains(&cand)? {
                continue 'outer;
            }
        }
        return Ok(cand);
    }
    Err(Error::SearchExhausted(format!("no element of {f} + I² avoids all {} targets", active.len())))
}

fn check_ideal_avoids(i: &Ideal, primes: &PrimeList) -> Result<()> {
    for p in primes.primes() {
        if p.contains_ideal(i)? {
            return Err(Error::Infeasible(format!("{i} is contained in the prime {p}")));
        }
    }
    Ok(())
}

/// Builds a regular sequence `f'_1..f'_n` with `I = (f') + I²` from
/// generators `gens` satisfying `I = (gens) + I²`.
pub fn regular_sequence_lift(
    i: &Ideal,
    gens: &[Polynomial],
    oracle: &dyn AssocPrimeOracle,
    search: &AvoidSearch,
) -> Result<Vec<Polynomial>> {
    if !congruence_holds(i, gens)? {
        return Err(Error::Precondition(format!("{i} is not generated by the given elements modulo its square")));
    }
    let pres = i.presentation();
    let mut out: Vec<Polynomial> = Vec::with_capacity(gens.len());
    for f in gens {
        let primes = oracle.assoc_primes(&out)?.maximal()?;
        check_ideal_avoids(i, &primes)?;
        let adjusted = avoid_adjust(f, i, &primes, search)?;
        out.push(adjusted);
        if !is_regular_sequence(&out, pres)? {
            return Err(Error::OracleOmission(format!(
                "sequence fails to be regular at step {}; the oracle missed an associated prime",
                out.len()
            )));
        }
    }
    verify_lift(i, &out)?;
    Ok(out)
}

fn verify_lift(i: &Ideal, fs: &[Polynomial]) -> Result<()> {
    if !congruence_holds(i, fs)? {
        return Err(Error::Verification("I ≠ (f') + I²".into()));
    }
    Ok(())
}

/// Like [`regular_sequence_lift`], additionally readjusting the last element
/// so that no ideal in `avoid` contains the whole sequence.
pub fn avoid_maximal_ideals(
    i: &Ideal,
    gens: &[Polynomial],
    avoid: &PrimeList,
    oracle: &dyn AssocPrimeOracle,
    search: &AvoidSearch,
) -> Result<Vec<Polynomial>> {
    for m in avoid.primes() {
        if m.contains_ideal(i)? {
            return Err(Error::Precondition(format!("{m} contains {i}")));
        }
    }
    let mut fs = regular_sequence_lift(i, gens, oracle, search)?;
    if avoid.is_empty() || fs.is_empty() {
        return Ok(fs);
    }
    let n = fs.len();
    let primes = oracle.assoc_primes(&fs[..n - 1])?.concat(avoid).maximal()?;
    let last = avoid_adjust(&fs[n - 1], i, &primes, search)?;
    fs[n - 1] = last;
    if !is_regular_sequence(&fs, i.presentation())? {
        return Err(Error::OracleOmission("readjusted sequence is not regular".into()));
    }
    verify_lift(i, &fs)?;
    for m in avoid.primes() {
        let all_inside = fs.iter().map(|f| m.contains(f)).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b);
        if all_inside {
            return Err(Error::Verification(format!("the sequence still lies in {m}")));
        }
    }
    Ok(fs)
}

/// The linked ideal `J = ((f') : I)`, verified to satisfy `(f') = I ∩ J`
/// and `I + J = (1)`.
pub fn residual_ideal(ci: &[Polynomial], i: &Ideal) -> Result<Ideal> {
    let pres = i.presentation();
    for f in ci {
        if !i.contains(f)? {
            return Err(Error::Precondition(format!("{f} is not in {i}")));
        }
    }
    if !is_regular_sequence(ci, pres)? {
        return Err(Error::Precondition("the given elements are not a regular sequence".into()));
    }
    let fi = Ideal::new(pres, ci.to_vec())?.with_budget(*i.budget());
    let j = fi.colon(i)?;
    let inter = i.intersection(&j)?;
    for g in inter.generators() {
        if !fi.contains(g)? {
            return Err(Error::Verification(format!("I ∩ J contains {g}, which is not in (f')")));
        }
    }
    if !i.sum(&j)?.is_unit()? {
        return Err(Error::Verification(format!("linkage is not coprime: I + J ≠ (1) with J = {j}")));
    }
    j.simplified()
}

/// Shipped fixtures for the avoidance lemmas.
pub mod fixtures {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};

    pub struct AvoidanceFixture {
        pub name: &'static str,
        pub ideal: Ideal,
        pub gens: Vec<Polynomial>,
        pub oracle: TableOracle,
        pub avoid: PrimeList,
        /// Expected output of the deterministic search, when pinned.
        pub expected: Option<Vec<Polynomial>>,
    }

    fn polys(pres: &Arc<RingPresentation>, s: &[&str]) -> Vec<Polynomial> {
        s.iter().map(|p| pres.parse_poly(p).unwrap()).collect()
    }

    /// Q[x,y], I = (x,y): already regular.
    pub fn plane_origin() -> AvoidanceFixture {
        let r = RingPresentation::free(PolyRing::new(&["x", "y"], MonomialOrder::GrevLex).unwrap());
        AvoidanceFixture {
            name: "plane-origin",
            ideal: Ideal::parse(&r, &["x", "y"]).unwrap(),
            gens: polys(&r, &["x", "y"]),
            oracle: TableOracle::new()
                .with(0, PrimeList::parse(&r, &[&["0"]]).unwrap())
                .with(1, PrimeList::parse(&r, &[&["x"]]).unwrap()),
            avoid: PrimeList::empty(),
            expected: Some(polys(&r, &["x", "y"])),
        }
    }

    /// Q[x,y]/(xy), I = (x-1): the naive generator x² - x kills y.
    pub fn crossing_zerodivisor() -> AvoidanceFixture {
        let ring = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex).unwrap();
        let r = RingPresentation::new(ring.clone(), vec![Polynomial::parse(&ring, "x*y").unwrap()]).unwrap();
        AvoidanceFixture {
            name: "crossing-zerodivisor",
            ideal: Ideal::parse(&r, &["x - 1"]).unwrap(),
            gens: polys(&r, &["x^2 - x"]),
            oracle: TableOracle::new().with(0, PrimeList::parse(&r, &[&["x"], &["y"]]).unwrap()),
            avoid: PrimeList::empty(),
            expected: Some(polys(&r, &["2*x^2 - 3*x + 1"])),
        }
    }

    /// Q[x,y], I = (x,y) with generators (x - x², y), avoiding (x-1, y).
    pub fn avoid_point() -> AvoidanceFixture {
        let r = RingPresentation::free(PolyRing::new(&["x", "y"], MonomialOrder::GrevLex).unwrap());
        AvoidanceFixture {
            name: "avoid-point",
            ideal: Ideal::parse(&r, &["x", "y"]).unwrap(),
            gens: polys(&r, &["x - x^2", "y"]),
            oracle: TableOracle::new()
                .with(0, PrimeList::parse(&r, &[&["0"]]).unwrap())
                .with(1, PrimeList::parse(&r, &[&["x"], &["x - 1"]]).unwrap()),
            avoid: PrimeList::parse(&r, &[&["x - 1", "y"]]).unwrap(),
            expected: Some(polys(&r, &["x - x^2", "x^2 + y"])),
        }
    }

    pub fn all() -> Vec<AvoidanceFixture> {
        vec![plane_origin(), crossing_zerodivisor(), avoid_point()]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn plane() -> Arc<RingPresentation> {
        RingPresentation::parse("Q[x,y]", &[]).unwrap()
    }

    #[test]
    fn adjust_dodges_point() {
        let r = plane();
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let targets = PrimeList::parse(&r, &[&["x", "y - 1"]]).unwrap();
        let f = r.parse_poly("x").unwrap();
        let out = avoid_adjust(&f, &i, &targets, &AvoidSearch::default()).unwrap();
        assert_eq!(out, r.parse_poly("x + y^2").unwrap());
        assert!(i.power(2).unwrap().contains(&(&out - &f)).unwrap());
    }

    #[test]
    fn adjust_is_identity_when_possible() {
        let r = plane();
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let targets = PrimeList::parse(&r, &[&["x - 1", "y"]]).unwrap();
        let f = r.parse_poly("x").unwrap();
        assert_eq!(avoid_adjust(&f, &i, &targets, &AvoidSearch::default()).unwrap(), f);
    }

    #[test]
    fn adjust_reports_infeasible() {
        let r = plane();
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let targets = PrimeList::parse(&r, &[&["x", "y"]]).unwrap();
        let err = avoid_adjust(&r.parse_poly("x").unwrap(), &i, &targets, &AvoidSearch::default()).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
    }

    #[test]
    fn fixtures_produce_expected_sequences() {
        for fx in all() {
            let out = avoid_maximal_ideals(&fx.ideal, &fx.gens, &fx.avoid, &fx.oracle, &AvoidSearch::default()).unwrap();
            assert_eq!(Some(out), fx.expected, "{}", fx.name);
        }
    }

    #[test]
    fn congruence_precondition() {
        let fx = plane_origin();
        let gens = vec![fx.gens[0].clone(), fx.gens[0].clone()];
        let err = regular_sequence_lift(&fx.ideal, &gens, &fx.oracle, &AvoidSearch::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn missing_oracle_entry() {
        let fx = plane_origin();
        let oracle = TableOracle::new().with(0, PrimeList::empty());
        let err = regular_sequence_lift(&fx.ideal, &fx.gens, &oracle, &AvoidSearch::default()).unwrap_err();
        assert!(matches!(err, Error::OracleOmission(_)));
    }

    #[test]
    fn residuals() {
        let r = plane();
        let i = Ideal::parse(&r, &["x", "y"]).unwrap();
        let ci = vec![r.parse_poly("x*(x - 1)").unwrap(), r.parse_poly("y").unwrap()];
        let j = residual_ideal(&ci, &i).unwrap();
        assert!(j.equals(&Ideal::parse(&r, &["x - 1", "y"]).unwrap()).unwrap());

        let same = residual_ideal(&[r.parse_poly("x").unwrap(), r.parse_poly("y").unwrap()], &i).unwrap();
        assert!(same.is_unit().unwrap());

        let err = residual_ideal(&[r.parse_poly("x - 1").unwrap()], &i).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}

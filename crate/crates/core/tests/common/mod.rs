//! Helpers shared by the integration tests: an independent membership
//! oracle by exact linear algebra, and seeded random ideals.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use ciwb_core::poly::rat;
use ciwb_core::{Coeff, Monomial, MonomialOrder, PolyRing, Polynomial};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Row-echelon span of polynomials over Q, keyed by leading monomial.
pub struct Span {
    pivots: BTreeMap<Monomial, Polynomial>,
}

impl Span {
    pub fn new() -> Self {
        Span { pivots: BTreeMap::new() }
    }

    fn top_reduce(&self, p: &Polynomial) -> Polynomial {
        let mut p = p.clone();
        while let Some((m, c)) = p.leading_term().cloned() {
            match self.pivots.get(&m) {
                Some(row) => p = p.add_scaled(&-c, None, row),
                None => break,
            }
        }
        p
    }

    pub fn insert(&mut self, p: &Polynomial) {
        let r = self.top_reduce(p);
        if let Some(m) = r.leading_monomial().cloned() {
            self.pivots.insert(m, r.monic());
        }
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.top_reduce(p).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
}

pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == nvars {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, deg, &mut Vec::new(), &mut out);
    out
}

/// `span{ m·g : deg(m·g) ≤ bound }`. An element of degree ≤ bound lies in
/// it iff it has a membership certificate of degree ≤ bound.
pub fn truncated_span(gens: &[Polynomial], bound: u32) -> Span {
    let mut span = Span::new();
    for g in gens {
        let Some(d) = g.total_degree() else { continue };
        if d > bound {
            continue;
        }
        for m in monomials_up_to(g.ring().nvars(), bound - d) {
            span.insert(&g.mul_term(&m, &rat(1)));
        }
    }
    span
}

pub fn ring(nvars: usize) -> Arc<PolyRing> {
    let names = ["x", "y", "z"];
    PolyRing::new(&names[..nvars], MonomialOrder::GrevLex).unwrap()
}

fn small_coeff(rng: &mut ChaCha8Rng) -> Coeff {
    loop {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            return rat(c);
        }
    }
}

fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, deg: u32) -> Monomial {
    let mut e = vec![0u32; nvars];
    for _ in 0..deg {
        e[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::from_exponents(e)
}

/// A sparse polynomial with up to `terms` terms of degree ≤ `deg`
/// (exactly `deg` when `homogeneous`).
pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Arc<PolyRing>, deg: u32, terms: usize, homogeneous: bool) -> Polynomial {
    let mut p = Polynomial::zero(ring);
    // the first term carries the full degree
    for k in 0..terms {
        let d = if homogeneous || k == 0 { deg } else { rng.gen_range(0..=deg) };
        let m = random_monomial(rng, ring.nvars(), d);
        p = &p + &Polynomial::monomial(ring, m, small_coeff(rng));
    }
    if p.is_zero() {
        Polynomial::monomial(ring, random_monomial(rng, ring.nvars(), deg), rat(1))
    } else {
        p
    }
}

pub fn is_homogeneous(p: &Polynomial) -> bool {
    let mut degs = p.terms().iter().map(|(m, _)| m.degree());
    match degs.next() {
        Some(d) => degs.all(|e| e == d),
        None => true,
    }
}

/// Probe polynomials: half explicit combinations `Σ h_i g_i`, half such a
/// combination plus a random perturbation.
pub fn probes(rng: &mut ChaCha8Rng, gens: &[Polynomial], count: usize, homogeneous: bool) -> Vec<Polynomial> {
    let ring = gens[0].ring().clone();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let target = rng.gen_range(3..=4u32);
        let mut p = Polynomial::zero(&ring);
        for g in gens {
            let d = g.total_degree().unwrap_or(0);
            if d > target || rng.gen_bool(0.3) {
                continue;
            }
            p = &p + &(&random_poly(rng, &ring, target - d, 2, homogeneous) * g);
        }
        if k % 2 == 1 {
            let d = if homogeneous { target } else { rng.gen_range(0..=target) };
            p = &p + &random_poly(rng, &ring, d, 1, true);
        }
        out.push(p);
    }
    out
}

pub fn coeff_is_zero(c: &Coeff) -> bool {
    c.is_zero()
}

/// Outcome of comparing `Ideal::contains` against the span oracle.
#[derive(Debug, Default)]
pub struct OracleRun {
    pub ideals: usize,
    pub probes: usize,
    pub members: usize,
    pub skipped: usize,
    pub disagreements: Vec<String>,
}

/// Largest certificate degree the inhomogeneous oracle is allowed.
pub const ORACLE_CAP: u32 = 9;

/// Random ideals in ≤ 3 variables with generators of degree ≤ 3, each
/// probed `per_ideal` times.
///
/// Homogeneous ideals are decided exactly at the probe degree. For the
/// others the bound is `deg f + D`, where `D` is the least degree at which
/// the span of the generators contains a Gröbner basis; a grevlex standard
/// representation then shows every member has a certificate within the
/// bound. Ideals whose `D` exceeds [`ORACLE_CAP`] are replaced.
pub fn oracle_equivalence(seed: u64, homogeneous: usize, inhomogeneous: usize, per_ideal: usize) -> OracleRun {
    use ciwb_core::{Ideal, RingPresentation};
    use rand::SeedableRng;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = OracleRun::default();
    let mut done = [0usize; 2];
    let wanted = [homogeneous, inhomogeneous];
    while done[0] < wanted[0] || done[1] < wanted[1] {
        let homog = done[0] < wanted[0];
        let nvars = rng.gen_range(1..=3);
        let r = ring(nvars);
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..ngens)
            .map(|_| {
                let deg = rng.gen_range(1..=3);
                let terms = rng.gen_range(1..=3);
                random_poly(&mut rng, &r, deg, terms, homog)
            })
            .collect();
        let pres = RingPresentation::free(r.clone());
        let ideal = Ideal::new(&pres, gens.clone()).unwrap();
        let probes = probes(&mut rng, &gens, per_ideal, homog);

        let slack = if homog {
            0
        } else {
            let basis = ideal.basis().unwrap().to_vec();
            let start = gens.iter().filter_map(|g| g.total_degree()).max().unwrap_or(0);
            match (start..=ORACLE_CAP).find(|&d| {
                let span = truncated_span(&gens, d);
                basis.iter().all(|b| span.contains(b))
            }) {
                Some(d) => d,
                None => {
                    run.skipped += 1;
                    continue;
                }
            }
        };
        let mut spans: BTreeMap<u32, Span> = BTreeMap::new();
        for f in &probes {
            let bound = f.total_degree().unwrap_or(0) + slack;
            let span = spans.entry(bound).or_insert_with(|| truncated_span(&gens, bound));
            let expected = span.contains(f);
            let got = ideal.contains(f).unwrap();
            run.probes += 1;
            run.members += usize::from(expected);
            if expected != got {
                let gs: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                run.disagreements.push(format!("({}) ∋ {f}: engine {got}, oracle {expected}", gs.join(", ")));
            }
        }
        run.ideals += 1;
        done[usize::from(!homog)] += 1;
    }
    run
}

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{self, hnf_with_transform, FpGroup, Lattice, Vector};

use super::model::{format_combination, K0Class, K0Model};
use super::series::gamma_series;

/// The γ-filtration of a model. `levels[k]` is the preimage of `F^k` in
/// `Z^generators` (so it contains the relation lattice), for
/// `k = 0..=n+1`; `graded[k]` presents `Γ^k = F^k / F^{k+1}`.
#[derive(Clone, Debug)]
pub struct FiltrationReport {
    model: Arc<K0Model>,
    levels: Vec<Lattice>,
    graded: Vec<FpGroup>,
}

/// A class in `Γ^degree`, represented canonically modulo `F^{degree+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedClass {
    pub degree: usize,
    pub rep: Vector,
}

fn rank_kernel(model: &K0Model) -> Vec<Vector> {
    let m = model.ngens();
    let rows: Vec<Vector> =
        (0..m).map(|i| vec![model.rank_of(&lattice::unit_vector(m, i))]).collect();
    let (h, u) = hnf_with_transform(&rows, 1);
    h.iter().zip(u).filter(|(r, _)| lattice::is_zero(r)).map(|(_, k)| k).collect()
}

/// Smallest lattice containing `l` and closed under multiplication by the
/// model generators.
fn ideal_closure(model: &K0Model, l: Lattice) -> Lattice {
    let m = model.ngens();
    let mut cur = l;
    loop {
        let mut extra = Vec::new();
        for b in cur.basis() {
            for g in 0..m {
                let p = model.mul(b, &lattice::unit_vector(m, g));
                if !cur.contains(&p) {
                    extra.push(p);
                }
            }
        }
        if extra.is_empty() {
            return cur;
        }
        cur = cur.with(&extra);
    }
}

pub fn gamma_filtration(model: &Arc<K0Model>) -> Result<FiltrationReport> {
    let n = model.dimension();
    let m = model.ngens();
    let rels = model.group().relations().clone();
    let top = model.lambda_bound().min(2 * n + 2);

    let f1 = rels.with(&rank_kernel(model));
    // γ^i(b) for each basis vector b of F^1 and 1 ≤ i ≤ top
    let mut factors: Vec<(usize, Vector)> = Vec::new();
    for b in f1.basis() {
        let x = K0Class::new(model, b.clone())?;
        let g = gamma_series(&x, top)?;
        for i in 1..=top {
            factors.push((i, g.coeff(i).coords().to_vec()));
        }
    }
    // products of factors, weight capped at (n+1) + top - 1: every product
    // of weight ≥ k ≤ n+1 has such a prefix, and the rest is absorbed by
    // the ideal closure
    let cap = n + top;
    let mut products: Vec<(usize, Vector)> = Vec::new();
    fn walk(
        model: &K0Model,
        factors: &[(usize, Vector)],
        start: usize,
        weight: usize,
        value: &Vector,
        cap: usize,
        out: &mut Vec<(usize, Vector)>,
    ) {
        for (idx, (w, f)) in factors.iter().enumerate().skip(start) {
            if weight + w > cap {
                continue;
            }
            let v = model.mul(value, f);
            if model.group().is_zero(&v) {
                continue;
            }
            out.push((weight + w, v.clone()));
            walk(model, factors, idx, weight + w, &v, cap, out);
        }
    }
    walk(model, &factors, 0, 0, model.one_coords(), cap, &mut products);

    let mut levels = vec![Lattice::full(m)];
    for k in 1..=n + 1 {
        let gens: Vec<Vector> = products.iter().filter(|(w, _)| *w >= k).map(|(_, v)| v.clone()).collect();
        levels.push(ideal_closure(model, rels.with(&gens)));
    }
    if !rels.contains_lattice(&levels[n + 1]) {
        return Err(Error::Model(format!("{}: F^{} ≠ 0", model.name(), n + 1)));
    }
    for k in 1..=n + 1 {
        if !levels[k - 1].contains_lattice(&levels[k]) {
            return Err(Error::Model(format!("{}: F^{k} ⊄ F^{}", model.name(), k - 1)));
        }
    }
    let graded = (0..=n).map(|k| FpGroup::quotient(&levels[k], &levels[k + 1])).collect();
    Ok(FiltrationReport { model: model.clone(), levels, graded })
}

impl FiltrationReport {
    pub fn model(&self) -> &Arc<K0Model> {
        &self.model
    }

    pub fn dimension(&self) -> usize {
        self.model.dimension()
    }

    /// Preimage of `F^k`; for `k > n + 1` this is the relation lattice.
    pub fn level(&self, k: usize) -> &Lattice {
        self.levels.get(k).unwrap_or(&self.levels[self.levels.len() - 1])
    }

    pub fn graded(&self, k: usize) -> Option<&FpGroup> {
        self.graded.get(k)
    }

    pub fn contains(&self, x: &K0Class, k: usize) -> bool {
        self.level(k).contains(x.coords())
    }

    /// Generators of `F^k` modulo the relations, as classes.
    pub fn generators(&self, k: usize) -> Vec<K0Class> {
        let rels = self.model.group().relations();
        self.level(k)
            .basis()
            .iter()
            .filter(|b| !rels.contains(b))
            .map(|b| K0Class::new(&self.model, b.clone()).expect("lattice vector has model length"))
            .filter(|c| !c.is_zero())
            .collect()
    }

    pub fn graded_class(&self, x: &[BigInt], degree: usize) -> GradedClass {
        GradedClass { degree, rep: self.level(degree + 1).reduce(x) }
    }

    pub fn graded_one(&self) -> GradedClass {
        self.graded_class(self.model.one_coords(), 0)
    }

    pub fn graded_zero(&self, degree: usize) -> GradedClass {
        GradedClass { degree, rep: vec![BigInt::zero(); self.model.ngens()] }
    }

    pub fn is_graded_zero(&self, c: &GradedClass) -> bool {
        self.level(c.degree + 1).contains(&c.rep)
    }

    pub fn graded_add(&self, a: &GradedClass, b: &GradedClass) -> GradedClass {
        assert_eq!(a.degree, b.degree, "adding classes of different degree");
        self.graded_class(&lattice::add(&a.rep, &b.rep), a.degree)
    }

    pub fn graded_mul(&self, a: &GradedClass, b: &GradedClass) -> GradedClass {
        self.graded_class(&self.model.mul(&a.rep, &b.rep), a.degree + b.degree)
    }

    pub fn graded_scale(&self, a: &GradedClass, k: &BigInt) -> GradedClass {
        self.graded_class(&lattice::scale(&a.rep, k), a.degree)
    }

    /// Equality in `Γ^k ⊗ Q`: the difference has finite order.
    pub fn graded_equal_rational(&self, a: &GradedClass, b: &GradedClass) -> bool {
        if a.degree != b.degree {
            return false;
        }
        let lo = self.level(a.degree);
        let diff = lattice::sub(&a.rep, &b.rep);
        match lo.coords(&diff) {
            Some(c) => self.graded[a.degree.min(self.graded.len() - 1)].order_of(&c).is_some(),
            None => false,
        }
    }

    pub fn format_graded(&self, c: &GradedClass) -> String {
        format!("[{}]_{}", format_combination(self.model.generators(), &c.rep), c.degree)
    }

    /// One line per filtration step: `F^k = <generators>` and `Γ^k`.
    pub fn describe(&self) -> Vec<String> {
        let names = self.model.generators();
        let mut lines = Vec::new();
        for k in 0..self.levels.len() {
            let gens: Vec<String> =
                self.generators(k).iter().map(|c| format_combination(names, c.coords())).collect();
            let span = if gens.is_empty() { "0".to_string() } else { format!("<{}>", gens.join(", ")) };
            match self.graded.get(k) {
                Some(g) => lines.push(format!("F^{k} = {span}; Γ^{k} = {g}")),
                None => lines.push(format!("F^{k} = {span}")),
            }
        }
        lines
    }
}

/// Chern classes `c_0 = 1, c_1, .., c_n` of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernClasses {
    pub classes: Vec<GradedClass>,
}

impl ChernClasses {
    pub fn get(&self, i: usize) -> &GradedClass {
        &self.classes[i]
    }

    pub fn is_trivial(&self, report: &FiltrationReport) -> bool {
        self.classes.iter().skip(1).all(|c| report.is_graded_zero(c))
    }
}

/// `c_i(x) = γ^i(x - rank x) mod F^{i+1}` for `i = 0..=n`.
pub fn chern_total(x: &K0Class, report: &FiltrationReport) -> Result<ChernClasses> {
    let model = report.model();
    let n = model.dimension();
    let shifted = x - &model.one().scale(&x.rank());
    let g = gamma_series(&shifted, n)?;
    let classes = (0..=n).map(|i| report.graded_class(g.coeff(i).coords(), i)).collect();
    Ok(ChernClasses { classes })
}

/// `c_t(x)·c_t(y)` in the graded ring.
pub fn chern_product(a: &ChernClasses, b: &ChernClasses, report: &FiltrationReport) -> ChernClasses {
    let n = a.classes.len() - 1;
    let classes = (0..=n)
        .map(|k| {
            (0..=k).fold(report.graded_zero(k), |acc, i| {
                report.graded_add(&acc, &report.graded_mul(&a.classes[i], &b.classes[k - i]))
            })
        })
        .collect();
    ChernClasses { classes }
}

pub fn chern_equal(a: &ChernClasses, b: &ChernClasses, report: &FiltrationReport) -> bool {
    a.classes.len() == b.classes.len()
        && a.classes.iter().zip(&b.classes).all(|(x, y)| {
            report.is_graded_zero(&GradedClass { degree: x.degree, rep: lattice::sub(&x.rep, &y.rep) })
        })
}

/// `c_t(x + y) = c_t(x) c_t(y)` in `⊕ Γ^i`.
pub fn whitney_holds(x: &K0Class, y: &K0Class, report: &FiltrationReport) -> Result<bool> {
    let lhs = chern_total(&(x + y), report)?;
    let rhs = chern_product(&chern_total(x, report)?, &chern_total(y, report)?, report);
    Ok(chern_equal(&lhs, &rhs, report))
}

/// [`whitney_holds`] over a batch of pairs, in input order.
pub fn whitney_batch(pairs: &[(K0Class, K0Class)], report: &FiltrationReport, exec: Execution) -> Result<Vec<bool>> {
    exec.try_map(pairs, |(x, y)| whitney_holds(x, y, report))
}

/// The image of `x ∈ F^k` in `Γ^k`.
pub fn cycle_of(x: &K0Class, k: usize, report: &FiltrationReport) -> Result<GradedClass> {
    if !report.contains(x, k) {
        return Err(Error::NotInFiltration(k));
    }
    Ok(report.graded_class(x.coords(), k))
}

/// For `x ∈ F^r`: `c_i(x) = 0` for `0 < i < r` and
/// `c_r(x) = (-1)^{r-1} (r-1)! Cycle(x)`.
pub fn top_chern_identity_holds(x: &K0Class, r: usize, report: &FiltrationReport) -> Result<bool> {
    let cycle = cycle_of(x, r, report)?;
    if r > report.dimension() {
        return Ok(true);
    }
    let c = chern_total(x, report)?;
    if !(1..r).all(|i| report.is_graded_zero(c.get(i))) {
        return Ok(false);
    }
    let f: BigInt = (1..r).map(BigInt::from).product::<BigInt>() * if r % 2 == 1 { 1 } else { -1 };
    let expected = report.graded_scale(&cycle, &f);
    Ok(*c.get(r) == expected)
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.rep.iter().map(|x| x.to_string()).collect();
        write!(f, "({})_{}", v.join(", "), self.degree)
    }
}

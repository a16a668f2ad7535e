//! Concrete `K₀` and Chow models of the universal rings and the 3-sphere,
//! with the divisibility and torsion checks built on them.
//!
//! The rings involved are regular, so `G₀` and `K₀` are identified. The
//! sphere's `K₀ = Z` and `CH³ = Z/2` are fixture axioms.

mod chow;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

pub use chow::{ChernEntry, ChowClass, ChowDegreeSpec, ChowModel, ChowModelSpec, ChowProductEntry, CycleEntry};

use crate::error::{Error, Result};
use crate::lambda_ring::{chern_total, FiltrationReport, K0Class, K0Model, K0ModelSpec, LambdaEntry, ProductEntry};
use crate::lattice::{FpGroup, Vector};

/// Largest `n` for the builtin `A_n` / `B_n` models.
pub const DEFAULT_MODEL_BOUND: usize = 4;

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

fn product(left: &str, right: &str, value: &[i64]) -> ProductEntry {
    ProductEntry { left: left.into(), right: right.into(), value: value.to_vec() }
}

/// `K₀ = Zε ⊕ Zλ`, `λ² = 0`, with `λ^k(λ) = (-1)^{k-1} k^{n-1} λ`: the
/// λ-structure of a top-dimensional class.
fn top_class_spec(n: usize, ring: String, gen: &str) -> K0ModelSpec {
    let top = n + 1;
    let eps_powers = (0..=top).map(|k| if k <= 1 { vec![1, 0] } else { vec![0, 0] }).collect();
    let gen_powers = (0..=top)
        .map(|k| match k {
            0 => vec![1, 0],
            _ => {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                vec![0, sign * (k as i64).pow(n as u32 - 1)]
            }
        })
        .collect();
    K0ModelSpec {
        name: ring.clone(),
        ring: Some(ring),
        dimension: n,
        generators: vec!["epsilon".into(), gen.into()],
        one: vec![1, 0],
        relations: vec![],
        rank: vec![1, 0],
        products: vec![product("epsilon", "epsilon", &[1, 0]), product("epsilon", gen, &[0, 1]), product(gen, gen, &[0, 0])],
        lambda: vec![
            LambdaEntry { generator: "epsilon".into(), powers: eps_powers },
            LambdaEntry { generator: gen.into(), powers: gen_powers },
        ],
        top_cycles: vec![vec![0, 1]],
        pullbacks: BTreeMap::from([(format!("A{n}"), vec![0, 1])]),
        classes: BTreeMap::new(),
    }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n == 0 || n > bound {
        return Err(Error::UnknownModel(format!("n = {n} outside 1..={bound}")));
    }
    Ok(())
}

/// `K₀(A_n) = Zε_n ⊕ Zλ_n` with `[A/J_n] = -λ_n`.
pub fn a_model(n: usize) -> Result<Arc<K0Model>> {
    check_bound(n, DEFAULT_MODEL_BOUND)?;
    let mut spec = top_class_spec(n, format!("A{n}"), "lambda");
    spec.classes.insert(format!("A/J{n}"), vec![0, -1]);
    spec.classes.insert(format!("A/J'{n}"), vec![0, -factorial(n - 1)]);
    K0Model::from_spec(spec)
}

/// `K₀(B_n) = Zε ⊕ Zβ_n`; the natural map sends `λ_n ↦ β_n`.
pub fn b_model(n: usize) -> Result<Arc<K0Model>> {
    check_bound(n, DEFAULT_MODEL_BOUND)?;
    K0Model::from_spec(top_class_spec(n, format!("B{n}"), "beta"))
}

/// `K₀ = Z` of the 3-sphere; `[A/I] = 0` for the point ideal.
pub fn sphere3_model() -> Result<Arc<K0Model>> {
    K0Model::from_spec(K0ModelSpec {
        name: "sphere3".into(),
        ring: Some("sphere3".into()),
        dimension: 3,
        generators: vec!["epsilon".into()],
        one: vec![1],
        relations: vec![],
        rank: vec![1],
        products: vec![product("epsilon", "epsilon", &[1])],
        lambda: vec![LambdaEntry {
            generator: "epsilon".into(),
            powers: (0..=4).map(|k| vec![i64::from(k <= 1)]).collect(),
        }],
        top_cycles: vec![],
        pullbacks: BTreeMap::new(),
        classes: BTreeMap::from([("A/I".to_string(), vec![0])]),
    })
}

/// `K₀ = Z` with trivial λ-structure, dimension `n`.
pub fn rank_only_model(n: usize) -> Result<Arc<K0Model>> {
    K0Model::from_spec(K0ModelSpec {
        name: format!("rank_only{n}"),
        ring: None,
        dimension: n,
        generators: vec!["epsilon".into()],
        one: vec![1],
        relations: vec![],
        rank: vec![1],
        products: vec![product("epsilon", "epsilon", &[1])],
        lambda: vec![LambdaEntry {
            generator: "epsilon".into(),
            powers: (0..=n + 1).map(|k| vec![i64::from(k <= 1)]).collect(),
        }],
        top_cycles: vec![],
        pullbacks: BTreeMap::new(),
        classes: BTreeMap::new(),
    })
}

fn top_chow_spec(n: usize, name: String, gen: &str, top: &str) -> ChowModelSpec {
    let mut degrees = vec![ChowDegreeSpec { generators: vec!["unit".into()], relations: vec![] }];
    for k in 1..=n {
        let generators = if k == n { vec![top.to_string()] } else { vec![] };
        degrees.push(ChowDegreeSpec { generators, relations: vec![] });
    }
    let empty = |k: usize| if k == n { vec![0] } else { vec![] };
    let sign = if n % 2 == 1 { 1 } else { -1 };
    ChowModelSpec {
        name,
        dimension: n,
        degrees,
        chern: vec![
            ChernEntry { generator: "epsilon".into(), classes: (1..=n).map(empty).collect() },
            ChernEntry {
                generator: gen.into(),
                classes: (1..=n).map(|k| if k == n { vec![sign * factorial(n - 1)] } else { vec![] }).collect(),
            },
        ],
        products: vec![],
        cycles: vec![CycleEntry { name: gen.into(), degree: n, value: vec![1] }],
    }
}

/// `CH(A_n) = Zε' ⊕ Zλ'` in degrees 0 and `n`, with
/// `C_n(λ_n) = (-1)^{n-1} (n-1)! λ'_n`.
pub fn a_chow_model(n: usize) -> Result<Arc<ChowModel>> {
    check_bound(n, DEFAULT_MODEL_BOUND)?;
    ChowModel::from_spec(top_chow_spec(n, format!("CH(A{n})"), "lambda", "lambda'"))
}

pub fn b_chow_model(n: usize) -> Result<Arc<ChowModel>> {
    check_bound(n, DEFAULT_MODEL_BOUND)?;
    ChowModel::from_spec(top_chow_spec(n, format!("CH(B{n})"), "beta", "beta'"))
}

/// `CH^0 = Z`, `CH^1 = CH^2 = 0`, `CH^3 = Z/2` on the class of a point.
pub fn sphere3_chow_model() -> Result<Arc<ChowModel>> {
    ChowModel::from_spec(ChowModelSpec {
        name: "CH(sphere3)".into(),
        dimension: 3,
        degrees: vec![
            ChowDegreeSpec { generators: vec!["unit".into()], relations: vec![] },
            ChowDegreeSpec { generators: vec![], relations: vec![] },
            ChowDegreeSpec { generators: vec![], relations: vec![] },
            ChowDegreeSpec { generators: vec!["point".into()], relations: vec![vec![2]] },
        ],
        chern: vec![ChernEntry { generator: "epsilon".into(), classes: vec![vec![], vec![], vec![0]] }],
        products: vec![],
        cycles: vec![CycleEntry { name: "A/I".into(), degree: 3, value: vec![1] }],
    })
}

/// Looks up `A<n>`, `B<n>` (also `A_n`, `B_n`) or `sphere3`.
pub fn builtin_model(name: &str) -> Result<(Arc<K0Model>, Arc<ChowModel>)> {
    if name == "sphere3" {
        return Ok((sphere3_model()?, sphere3_chow_model()?));
    }
    let unknown = || Error::UnknownModel(name.to_string());
    let (kind, rest) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
    let n: usize = rest.trim_start_matches('_').parse().map_err(|_| unknown())?;
    match kind {
        "A" => Ok((a_model(n)?, a_chow_model(n)?)),
        "B" => Ok((b_model(n)?, b_chow_model(n)?)),
        _ => Err(unknown()),
    }
}

/// A model file: a K₀ model with an optional Chow companion, in TOML or
/// JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub k0: K0ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chow: Option<ChowModelSpec>,
}

impl ModelFile {
    /// Parses JSON if the text starts with `{`, TOML otherwise.
    pub fn parse(text: &str) -> Result<ModelFile> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Fixture(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Fixture(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Fixture(e.to_string()))
    }

    pub fn build(&self) -> Result<(Arc<K0Model>, Option<Arc<ChowModel>>)> {
        let k0 = K0Model::from_spec(self.k0.clone())?;
        let chow = match &self.chow {
            Some(c) => {
                let c = ChowModel::from_spec(c.clone())?;
                c.check_against(&k0)?;
                Some(c)
            }
            None => None,
        };
        Ok((k0, chow))
    }

    pub fn builtin(name: &str) -> Result<ModelFile> {
        let (k0, chow) = builtin_model(name)?;
        Ok(ModelFile { k0: k0.spec().clone(), chow: Some(chow.spec().clone()) })
    }
}

/// A homomorphism of presented groups, as images of source generators.
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub source: Arc<K0Model>,
    pub target: Arc<K0Model>,
    pub images: Vec<Vector>,
}

impl GroupMap {
    pub fn apply(&self, x: &K0Class) -> Result<K0Class> {
        let m = self.target.ngens();
        let mut out = vec![BigInt::from(0); m];
        for (c, img) in x.coords().iter().zip(&self.images) {
            for (o, v) in out.iter_mut().zip(img) {
                *o += c * v;
            }
        }
        K0Class::new(&self.target, out)
    }

    /// Well defined, compatible with rank and products on generators, and
    /// bijective (for free source and target: a unimodular square matrix).
    pub fn is_isomorphism(&self) -> Result<bool> {
        let (s, t) = (&self.source, &self.target);
        if !s.group().is_free() || !t.group().is_free() || s.ngens() != t.ngens() {
            return Err(Error::Unsupported("isomorphism test needs free groups of equal rank".into()));
        }
        for r in s.group().relations().basis() {
            if !self.apply(&K0Class::new(s, r.clone())?)?.is_zero() {
                return Ok(false);
            }
        }
        let gens: Vec<K0Class> = s.generators().iter().map(|g| s.generator(g)).collect::<Result<_>>()?;
        for a in &gens {
            let fa = self.apply(a)?;
            if fa.rank() != a.rank() {
                return Ok(false);
            }
            for b in &gens {
                if self.apply(&a.mul(b))? != fa.mul(&self.apply(b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(det(&self.images).abs().is_one())
    }
}

fn det(rows: &[Vector]) -> BigInt {
    // fraction-free elimination over the integers
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        if a[k][k] == BigInt::from(0) {
            match (k + 1..n).find(|&i| a[i][k] != BigInt::from(0)) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::from(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

/// The map `K₀(A_n) → K₀(B_n)` induced by the natural ring map.
pub fn natural_map(n: usize) -> Result<GroupMap> {
    let (a, b) = (a_model(n)?, b_model(n)?);
    let images = vec![b.one().coords().to_vec(), b.generator("beta")?.coords().to_vec()];
    Ok(GroupMap { source: a, target: b, images })
}

/// Element-wise access shared by K₀ and Chow classes.
pub trait PresentedClass: Sized {
    fn presented_group(&self) -> &FpGroup;
    fn coordinates(&self) -> &[BigInt];
    fn rebuild(&self, coords: Vector) -> Self;
}

impl PresentedClass for K0Class {
    fn presented_group(&self) -> &FpGroup {
        self.model().group()
    }
    fn coordinates(&self) -> &[BigInt] {
        self.coords()
    }
    fn rebuild(&self, coords: Vector) -> Self {
        K0Class::new(self.model(), coords).expect("same length")
    }
}

impl PresentedClass for ChowClass {
    fn presented_group(&self) -> &FpGroup {
        self.group()
    }
    fn coordinates(&self) -> &[BigInt] {
        self.coords()
    }
    fn rebuild(&self, coords: Vector) -> Self {
        self.with_coords(coords)
    }
}

/// Some `y` with `m·y = x` in the presented group, if one exists.
pub fn divisibility_check<C: PresentedClass>(x: &C, m: u64) -> Option<C> {
    x.presented_group().divide(x.coordinates(), &BigInt::from(m)).map(|y| x.rebuild(y))
}

/// No nonzero element of order dividing `m`.
pub fn torsion_check(model: &K0Model, m: u64) -> bool {
    model.group().has_no_torsion_dividing(&BigInt::from(m))
}

/// Trace of [`theorem81_witness`].
#[derive(Clone, Debug)]
pub struct Theorem81Run {
    /// `y` with `(n-1)!·y = Σ (-1)^i λ^i(Q)`.
    pub witness: K0Class,
    pub alternating_sum: K0Class,
    /// `(r, m_r)`: `m_r·ρ ∈ F^r`, each step checked on the lattice.
    pub chain: Vec<(usize, BigInt)>,
}

/// Runs the divisibility argument inside the model: for `Q` of rank `n`
/// and `Q_0` of rank `n-1` with equal Chern classes below `n`,
/// `ρ = Q - Q_0 - 1` is pushed down the filtration by the factors
/// `(r-1)!`, and `Σ (-1)^i λ^i(Q)` is divided by `(n-1)!`.
///
/// When `chow` is given, torsion in `CH^n` of order sharing a factor with
/// `(n-1)!` makes the argument inapplicable and the call refuses.
pub fn theorem81_witness(
    q: &K0Class,
    q0: &K0Class,
    report: &FiltrationReport,
    chow: Option<&ChowModel>,
) -> Result<Theorem81Run> {
    let model = report.model();
    if !q.same_model(q0) || q.model().name() != model.name() {
        return Err(Error::Precondition("classes and report come from different models".into()));
    }
    let n = model.dimension();
    if q.rank() != BigInt::from(n) || q0.rank() != BigInt::from(n - 1) {
        return Err(Error::Precondition(format!("need rank(Q) = {n} and rank(Q0) = {}", n - 1)));
    }
    let nf = BigInt::from(factorial(n - 1));
    let beta: BigInt = (1..n).map(|i| BigInt::from(factorial(i))).product();
    if let Some(ch) = chow {
        let torsion = ch.group(n).torsion();
        if torsion.iter().any(|d| !num_integer::Integer::gcd(d, &nf).is_one()) {
            return Err(Error::Precondition(format!("CH^{n} = {} has torsion dividing ({})!", ch.group(n), n - 1)));
        }
    }
    if !torsion_check(model, beta.try_into().unwrap_or(u64::MAX)) {
        return Err(Error::Precondition(format!("K0 = {} has torsion dividing the factorial chain", model.group())));
    }
    let cq = chern_total(q, report)?;
    let cq0 = chern_total(q0, report)?;
    for i in 1..n {
        if cq.get(i) != cq0.get(i) {
            return Err(Error::Precondition(format!(
                "Chern hypothesis fails: c_{i}(Q) = {} but c_{i}(Q0) = {}",
                report.format_graded(cq.get(i)),
                report.format_graded(cq0.get(i))
            )));
        }
    }
    let rho = &(q - q0) - &model.one();
    let mut mult = BigInt::one();
    let mut chain = vec![(1, mult.clone())];
    for r in 1..n {
        let y = rho.scale(&mult);
        let c = chern_total(&y, report)?;
        if !report.is_graded_zero(c.get(r)) {
            return Err(Error::Model(format!("c_{r} of {y} is nonzero below the top degree")));
        }
        mult *= BigInt::from(factorial(r - 1));
        if !report.contains(&rho.scale(&mult), r + 1) {
            return Err(Error::Model(format!("{}·ρ ∉ F^{}: model is inconsistent", mult, r + 1)));
        }
        chain.push((r + 1, mult.clone()));
    }
    let x = q.alternating_lambda_sum()?;
    let y = divisibility_check(&x, factorial(n - 1) as u64)
        .ok_or_else(|| Error::Model(format!("{x} is not divisible by ({})!: model is inconsistent", n - 1)))?;
    Ok(Theorem81Run { witness: y, alternating_sum: x, chain })
}

/// Outcome of the sphere computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereReport {
    pub k0_group: String,
    pub quotient_class: String,
    pub quotient_class_is_zero: bool,
    pub chow_top_group: String,
    pub cycle: String,
    pub cycle_is_zero: bool,
    pub cycle_order: Option<String>,
    pub twice_cycle_is_zero: bool,
    pub cycle_divisible_by_two: bool,
    pub top_chern_of_rank3: String,
    pub top_chern_of_rank3_is_zero: bool,
    pub surjection_possible: bool,
    pub lines: Vec<String>,
}

/// `I = (X0 - 1, X1, X2, X3)` on the 3-sphere: `[A/I] = 0` in `K₀`, yet its
/// cycle is the nonzero element of `CH³ = Z/2`. A rank-3 projective `P`
/// mapping onto `I` would force `C_3(P) = ±Cycle(A/I)`, but every rank-3
/// class has `C_3 = 0` since `K₀ = Z`.
pub fn sphere_obstruction_demo() -> Result<SphereReport> {
    let (k0, chow) = builtin_model("sphere3")?;
    let quotient = k0.named_class("A/I").ok_or_else(|| Error::Model("A/I not registered".into()))?;
    let cycle = chow.cycle("A/I").ok_or_else(|| Error::Model("cycle of A/I not registered".into()))?;
    let rank3 = k0.one().scale_int(3);
    let c3 = chow.chern_class(&rank3, 3)?;
    let order = cycle.order();
    let twice = cycle.scale(&BigInt::from(2));
    let divisible = divisibility_check(&cycle, 2).is_some();
    let possible = cycle.is_zero() || !c3.is_zero() || !k0.group().is_free() || k0.ngens() != 1;
    let lines = vec![
        format!("K0(A) = {}", k0.group()),
        format!("[A/I] = {quotient} in K0(A)"),
        format!("CH^3(A) = {}", chow.group(3)),
        format!("Cycle(A/I) = {cycle} (order {})", order.as_ref().map_or("infinite".into(), |o| o.to_string())),
        format!("2·Cycle(A/I) = {twice}"),
        format!("C_3(3·epsilon) = {c3}"),
        format!("Cycle(A/I) divisible by 2: {divisible}"),
        format!("projective of rank 3 onto I possible: {possible}"),
    ];
    Ok(SphereReport {
        k0_group: k0.group().to_string(),
        quotient_class: quotient.to_string(),
        quotient_class_is_zero: quotient.is_zero(),
        chow_top_group: chow.group(3).to_string(),
        cycle: cycle.to_string(),
        cycle_is_zero: cycle.is_zero(),
        cycle_order: order.map(|o| o.to_string()),
        twice_cycle_is_zero: twice.is_zero(),
        cycle_divisible_by_two: divisible,
        top_chern_of_rank3: c3.to_string(),
        top_chern_of_rank3_is_zero: c3.is_zero(),
        surjection_possible: possible,
        lines,
    })
}

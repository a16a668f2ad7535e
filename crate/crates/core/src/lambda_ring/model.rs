use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, FpGroup, Lattice, Vector};

use super::series::lambda_series;

/// File form of a K₀ model. Coordinates are integer vectors over the
/// generators; products missing from the table are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0ModelSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    pub dimension: usize,
    pub generators: Vec<String>,
    pub one: Vec<i64>,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
    pub rank: Vec<i64>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    /// `λ^0 .. λ^L` of each generator, `L ≥ dimension`.
    pub lambda: Vec<LambdaEntry>,
    /// Generators of the top cycle subgroup, when registered.
    #[serde(default)]
    pub top_cycles: Vec<Vec<i64>>,
    /// Images of the universal class `λ_n` of `A_n` (keyed `"A<n>"`).
    #[serde(default)]
    pub pullbacks: BTreeMap<String, Vec<i64>>,
    /// Named classes such as `"A/J3"`.
    #[serde(default)]
    pub classes: BTreeMap<String, Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub generator: String,
    pub powers: Vec<Vec<i64>>,
}

/// A finitely presented λ-ring: `K₀` as an abelian group with rank,
/// multiplication and λ-operations given on generators.
#[derive(Debug)]
pub struct K0Model {
    spec: K0ModelSpec,
    group: FpGroup,
    one: Vector,
    rank: Vec<BigInt>,
    mult: Vec<Vec<Vector>>,
    lambda: Vec<Vec<Vector>>,
}

impl K0Model {
    pub fn from_spec(spec: K0ModelSpec) -> Result<Arc<K0Model>> {
        let m = spec.generators.len();
        let index: BTreeMap<&str, usize> = spec.generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        if index.len() != m {
            return Err(Error::Model("duplicate generator names".into()));
        }
        let coords = |v: &[i64], what: &str| -> Result<Vector> {
            if v.len() != m {
                return Err(Error::Model(format!("{what}: expected {m} coordinates, got {}", v.len())));
            }
            Ok(lattice::vector(v))
        };
        let lookup = |g: &str| index.get(g).copied().ok_or_else(|| Error::Model(format!("unknown generator `{g}`")));
        let relations = spec.relations.iter().map(|r| coords(r, "relation")).collect::<Result<Vec<_>>>()?;
        let group = FpGroup::new(m, &relations);
        let one = coords(&spec.one, "one")?;
        if spec.rank.len() != m {
            return Err(Error::Model("rank needs one value per generator".into()));
        }
        let rank: Vec<BigInt> = spec.rank.iter().map(|&r| BigInt::from(r)).collect();

        let mut mult = vec![vec![vec![BigInt::zero(); m]; m]; m];
        let mut seen = vec![vec![false; m]; m];
        for e in &spec.products {
            let (i, j) = (lookup(&e.left)?, lookup(&e.right)?);
            let v = coords(&e.value, "product")?;
            for (a, b) in [(i, j), (j, i)] {
                if seen[a][b] && !group.equal(&mult[a][b], &v) {
                    return Err(Error::Model(format!("conflicting products for {} * {}", e.left, e.right)));
                }
                seen[a][b] = true;
                mult[a][b] = v.clone();
            }
        }

        let mut lambda = vec![Vec::new(); m];
        for e in &spec.lambda {
            let i = lookup(&e.generator)?;
            lambda[i] = e.powers.iter().map(|p| coords(p, "lambda")).collect::<Result<Vec<_>>>()?;
        }
        let bound = lambda.iter().map(Vec::len).min().unwrap_or(0);
        if m > 0 && bound < spec.dimension + 1 {
            return Err(Error::Model(format!("lambda table must cover λ^0..λ^{} for every generator", spec.dimension)));
        }
        for l in &mut lambda {
            l.truncate(bound);
        }
        let model = K0Model { spec, group, one, rank, mult, lambda };
        model.validate()?;
        Ok(Arc::new(model))
    }

    fn validate(&self) -> Result<()> {
        let m = self.ngens();
        let bad = |msg: String| Err(Error::Model(format!("{}: {msg}", self.spec.name)));
        if self.rank_of(&self.one) != BigInt::one() {
            return bad("rank(1) must be 1".into());
        }
        for r in self.group.relations().basis() {
            if !self.rank_of(r).is_zero() {
                return bad("rank does not vanish on a relation".into());
            }
        }
        for i in 0..m {
            let g = lattice::unit_vector(m, i);
            if !self.group.equal(&self.mul(&self.one, &g), &g) {
                return bad(format!("1 * {} ≠ {}", self.spec.generators[i], self.spec.generators[i]));
            }
            if !self.group.equal(&self.lambda[i][0], &self.one) || !self.group.equal(&self.lambda[i][1], &g) {
                return bad(format!("λ^0, λ^1 of {} must be 1 and the identity", self.spec.generators[i]));
            }
            for r in self.group.relations().basis() {
                if !self.group.is_zero(&self.mul(r, &g)) {
                    return bad("relations are not an ideal".into());
                }
            }
            for j in 0..m {
                let gj = lattice::unit_vector(m, j);
                if self.rank_of(&self.mult[i][j]) != &self.rank[i] * &self.rank[j] {
                    return bad(format!("rank is not multiplicative on {} * {}", self.spec.generators[i], self.spec.generators[j]));
                }
                for k in 0..m {
                    let gk = lattice::unit_vector(m, k);
                    let l = self.mul(&self.mul(&g, &gj), &gk);
                    let r = self.mul(&g, &self.mul(&gj, &gk));
                    if !self.group.equal(&l, &r) {
                        return bad("multiplication is not associative".into());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &K0ModelSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn ring_name(&self) -> Option<&str> {
        self.spec.ring.as_deref()
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn generators(&self) -> &[String] {
        &self.spec.generators
    }

    pub fn ngens(&self) -> usize {
        self.spec.generators.len()
    }

    pub fn group(&self) -> &FpGroup {
        &self.group
    }

    /// Highest `k` with `λ^k` tabulated.
    pub fn lambda_bound(&self) -> usize {
        self.lambda.first().map_or(usize::MAX, |l| l.len() - 1)
    }

    pub(crate) fn lambda_table(&self, gen: usize) -> &[Vector] {
        &self.lambda[gen]
    }

    pub(crate) fn one_coords(&self) -> &Vector {
        &self.one
    }

    pub fn rank_of(&self, x: &[BigInt]) -> BigInt {
        x.iter().zip(&self.rank).map(|(a, r)| a * r).sum()
    }

    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vector {
        let m = self.ngens();
        let mut out = vec![BigInt::zero(); m];
        for i in 0..m {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (o, v) in out.iter_mut().zip(&self.mult[i][j]) {
                    *o += &c * v;
                }
            }
        }
        self.group.canonical(&out)
    }

    pub fn top_cycle_lattice(&self) -> Option<Lattice> {
        if self.spec.top_cycles.is_empty() {
            return None;
        }
        let gens: Vec<Vector> = self.spec.top_cycles.iter().map(|v| lattice::vector(v)).collect();
        Some(self.group.relations().with(&gens))
    }
}

/// An element of a model's `K₀`, kept canonical modulo the relations.
#[derive(Clone)]
pub struct K0Class {
    model: Arc<K0Model>,
    coords: Vector,
}

impl K0Class {
    pub fn new(model: &Arc<K0Model>, coords: Vector) -> Result<K0Class> {
        if coords.len() != model.ngens() {
            return Err(Error::Model(format!("{} coordinates for {} generators", coords.len(), model.ngens())));
        }
        let coords = model.group.canonical(&coords);
        Ok(K0Class { model: model.clone(), coords })
    }

    pub fn from_ints(model: &Arc<K0Model>, coords: &[i64]) -> Result<K0Class> {
        K0Class::new(model, lattice::vector(coords))
    }

    pub fn model(&self) -> &Arc<K0Model> {
        &self.model
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn rank(&self) -> BigInt {
        self.model.rank_of(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        lattice::is_zero(&self.coords)
    }

    pub fn scale(&self, k: &BigInt) -> K0Class {
        self.with(lattice::scale(&self.coords, k))
    }

    pub fn scale_int(&self, k: i64) -> K0Class {
        self.scale(&BigInt::from(k))
    }

    pub fn mul(&self, other: &K0Class) -> K0Class {
        self.with(self.model.mul(&self.coords, &other.coords))
    }

    pub fn same_model(&self, other: &K0Class) -> bool {
        Arc::ptr_eq(&self.model, &other.model) || self.model.name() == other.model.name()
    }

    pub(crate) fn with(&self, coords: Vector) -> K0Class {
        K0Class { model: self.model.clone(), coords: self.model.group.canonical(&coords) }
    }

    /// `Σ (-1)^i λ^i(x)` for `i = 0..=n`.
    pub fn alternating_lambda_sum(&self) -> Result<K0Class> {
        let n = self.model.dimension();
        let s = lambda_series(self, n)?;
        let mut acc = self.model.zero();
        for (i, c) in s.coeffs().iter().enumerate() {
            acc = if i % 2 == 0 { &acc + c } else { &acc - c };
        }
        Ok(acc)
    }
}

impl K0Model {
    pub fn zero(self: &Arc<Self>) -> K0Class {
        K0Class { model: self.clone(), coords: vec![BigInt::zero(); self.ngens()] }
    }

    pub fn one(self: &Arc<Self>) -> K0Class {
        K0Class { model: self.clone(), coords: self.group.canonical(&self.one) }
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<K0Class> {
        let i = self
            .spec
            .generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::Model(format!("unknown generator `{name}`")))?;
        K0Class::new(self, lattice::unit_vector(self.ngens(), i))
    }

    pub fn class(self: &Arc<Self>, coords: &[i64]) -> Result<K0Class> {
        K0Class::from_ints(self, coords)
    }

    /// Image of the universal class of `source` (e.g. `"A3"`).
    pub fn pullback(self: &Arc<Self>, source: &str) -> Option<K0Class> {
        self.spec.pullbacks.get(source).and_then(|v| K0Class::from_ints(self, v).ok())
    }

    pub fn named_class(self: &Arc<Self>, name: &str) -> Option<K0Class> {
        self.spec.classes.get(name).and_then(|v| K0Class::from_ints(self, v).ok())
    }

    /// Parses an integer combination of generators such as
    /// `3*epsilon - 2*lambda`; a bare integer `k` means `k·1`.
    pub fn parse_class(self: &Arc<Self>, text: &str) -> Result<K0Class> {
        let err = |offset: usize, message: String| Error::Parse { offset, message };
        let mut acc = self.zero();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(err(0, "empty class".into()));
        }
        let mut first = true;
        while !rest.is_empty() {
            let offset = text.len() - rest.len();
            let mut sign = BigInt::one();
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r.trim_start();
            } else if !first {
                return Err(err(offset, "expected `+` or `-`".into()));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = rest[..end].trim();
            rest = rest[end..].trim_start();
            let (coeff, name) = match term.split_once('*') {
                Some((c, n)) => (Some(c.trim()), Some(n.trim())),
                None if term.chars().all(|c| c.is_ascii_digit()) => (Some(term), None),
                None => (None, Some(term)),
            };
            let k = match coeff {
                Some(c) => c.parse::<BigInt>().map_err(|_| err(offset, format!("bad coefficient `{c}`")))?,
                None => BigInt::one(),
            } * sign;
            let unit = match name {
                Some(n) if n.is_empty() => return Err(err(offset, "missing generator".into())),
                Some(n) => self.generator(n).map_err(|_| err(offset, format!("unknown generator `{n}`")))?,
                None => self.one(),
            };
            acc = &acc + &unit.scale(&k);
        }
        Ok(acc)
    }
}

impl PartialEq for K0Class {
    fn eq(&self, other: &Self) -> bool {
        self.same_model(other) && self.coords == other.coords
    }
}

impl Eq for K0Class {}

impl<'a> Add<&'a K0Class> for &'a K0Class {
    type Output = K0Class;
    fn add(self, rhs: &'a K0Class) -> K0Class {
        assert!(self.same_model(rhs), "classes from different models");
        self.with(lattice::add(&self.coords, &rhs.coords))
    }
}

impl<'a> Sub<&'a K0Class> for &'a K0Class {
    type Output = K0Class;
    fn sub(self, rhs: &'a K0Class) -> K0Class {
        assert!(self.same_model(rhs), "classes from different models");
        self.with(lattice::sub(&self.coords, &rhs.coords))
    }
}

impl Neg for &K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        self.scale_int(-1)
    }
}

pub(crate) fn format_combination(names: &[String], coords: &[BigInt]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigInt::zero();
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.model.generators(), &self.coords))
    }
}

impl fmt::Debug for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K0Class({}: {self})", self.model.name())
    }
}

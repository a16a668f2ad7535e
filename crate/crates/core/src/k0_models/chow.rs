use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda_ring::{format_combination, K0Class, K0Model};
use crate::lattice::{self, FpGroup, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowDegreeSpec {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernEntry {
    /// A generator of the companion K₀ model.
    pub generator: String,
    /// `C_1 .. C_n`, each in the coordinates of its degree.
    pub classes: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleEntry {
    pub name: String,
    pub degree: usize,
    pub value: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowProductEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<i64>,
}

/// File form of a Chow model. `CH^0` must be `Z` on the unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowModelSpec {
    pub name: String,
    pub dimension: usize,
    pub degrees: Vec<ChowDegreeSpec>,
    #[serde(default)]
    pub chern: Vec<ChernEntry>,
    /// Products of positive-degree generators; missing entries are zero.
    #[serde(default)]
    pub products: Vec<ChowProductEntry>,
    #[serde(default)]
    pub cycles: Vec<CycleEntry>,
}

/// Graded Chow groups with Chern classes registered on K₀ generators.
#[derive(Debug)]
pub struct ChowModel {
    spec: ChowModelSpec,
    groups: Vec<FpGroup>,
    gen_degree: BTreeMap<String, (usize, usize)>,
    products: BTreeMap<(String, String), Vector>,
}

#[derive(Clone)]
pub struct ChowClass {
    model: Arc<ChowModel>,
    degree: usize,
    coords: Vector,
}

/// `Σ_k C_k t^k` as one vector per degree.
type Total = Vec<Vector>;

impl ChowModel {
    pub fn from_spec(spec: ChowModelSpec) -> Result<Arc<ChowModel>> {
        let n = spec.dimension;
        if spec.degrees.len() != n + 1 {
            return Err(Error::Model(format!("{}: need CH^0..CH^{n}", spec.name)));
        }
        let d0 = &spec.degrees[0];
        if d0.generators.len() != 1 || !d0.relations.iter().all(|r| r.iter().all(|&x| x == 0)) {
            return Err(Error::Model("CH^0 must be Z on the unit class".into()));
        }
        let mut groups = Vec::new();
        let mut gen_degree = BTreeMap::new();
        for (k, d) in spec.degrees.iter().enumerate() {
            let m = d.generators.len();
            if d.relations.iter().any(|r| r.len() != m) {
                return Err(Error::Model(format!("CH^{k}: relation length differs from {m}")));
            }
            for (i, g) in d.generators.iter().enumerate() {
                if gen_degree.insert(g.clone(), (k, i)).is_some() {
                    return Err(Error::Model(format!("duplicate Chow generator `{g}`")));
                }
            }
            let rels: Vec<Vector> = d.relations.iter().map(|r| lattice::vector(r)).collect();
            groups.push(FpGroup::new(m, &rels));
        }
        let mut products = BTreeMap::new();
        for p in &spec.products {
            let (Some(&(a, _)), Some(&(b, _))) = (gen_degree.get(&p.left), gen_degree.get(&p.right)) else {
                return Err(Error::Model(format!("unknown Chow generator in {} * {}", p.left, p.right)));
            };
            if a == 0 || b == 0 {
                return Err(Error::Model("products with CH^0 are implicit".into()));
            }
            if a + b <= n {
                if p.value.len() != groups[a + b].ngens() {
                    return Err(Error::Model(format!("product {} * {} has the wrong length", p.left, p.right)));
                }
                let v = lattice::vector(&p.value);
                products.insert((p.left.clone(), p.right.clone()), v.clone());
                products.insert((p.right.clone(), p.left.clone()), v);
            }
        }
        for e in &spec.chern {
            if e.classes.len() != n {
                return Err(Error::Model(format!("Chern entry for {} needs C_1..C_{n}", e.generator)));
            }
            for (i, c) in e.classes.iter().enumerate() {
                if c.len() != groups[i + 1].ngens() {
                    return Err(Error::Model(format!("C_{} of {} has the wrong length", i + 1, e.generator)));
                }
            }
        }
        for c in &spec.cycles {
            if c.degree > n || c.value.len() != groups[c.degree].ngens() {
                return Err(Error::Model(format!("cycle {} does not fit CH^{}", c.name, c.degree)));
            }
        }
        Ok(Arc::new(ChowModel { spec, groups, gen_degree, products }))
    }

    pub fn spec(&self) -> &ChowModelSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn group(&self, degree: usize) -> &FpGroup {
        &self.groups[degree]
    }

    fn mul_total(&self, a: &Total, b: &Total) -> Total {
        let n = self.dimension();
        let mut out: Total = self.groups.iter().map(|g| g.zero()).collect();
        for i in 0..=n {
            for j in 0..=n - i {
                let k = i + j;
                if i == 0 || j == 0 {
                    let (s, v) = if i == 0 { (&a[0][0], &b[j]) } else { (&b[0][0], &a[i]) };
                    out[k] = lattice::add(&out[k], &lattice::scale(v, s));
                    continue;
                }
                for (x, gx) in a[i].iter().zip(&self.spec.degrees[i].generators) {
                    if x.is_zero() {
                        continue;
                    }
                    for (y, gy) in b[j].iter().zip(&self.spec.degrees[j].generators) {
                        if y.is_zero() {
                            continue;
                        }
                        if let Some(v) = self.products.get(&(gx.clone(), gy.clone())) {
                            out[k] = lattice::add(&out[k], &lattice::scale(v, &(x * y)));
                        }
                    }
                }
            }
        }
        out.iter().zip(&self.groups).map(|(v, g)| g.canonical(v)).collect()
    }

    fn inverse_total(&self, a: &Total) -> Total {
        let n = self.dimension();
        // a = 1 + r with r nilpotent: a^{-1} = Σ (-r)^k
        let mut neg_r: Total = a.iter().map(|v| lattice::scale(v, &BigInt::from(-1))).collect();
        neg_r[0] = self.groups[0].zero();
        let mut out = self.one_total();
        let mut pow = self.one_total();
        for _ in 0..n {
            pow = self.mul_total(&pow, &neg_r);
            out = out.iter().zip(&pow).map(|(x, y)| lattice::add(x, y)).collect();
        }
        out
    }

    fn one_total(&self) -> Total {
        let mut t: Total = self.groups.iter().map(|g| g.zero()).collect();
        t[0] = lattice::vector(&[1]);
        t
    }

    fn generator_total(&self, gen: &str) -> Option<Total> {
        let e = self.spec.chern.iter().find(|e| e.generator == gen)?;
        let mut t = self.one_total();
        for (i, c) in e.classes.iter().enumerate() {
            t[i + 1] = lattice::vector(c);
        }
        Some(t)
    }
}

impl ChowModel {
    /// Total Chern class `C_t(x) = Π C_t(g)^{x_g}`.
    pub fn chern_total(self: &Arc<Self>, x: &K0Class) -> Result<Vec<ChowClass>> {
        let n = self.dimension();
        let mut total = self.one_total();
        for (g, c) in x.model().generators().iter().zip(x.coords()) {
            if c.is_zero() {
                continue;
            }
            let base = self
                .generator_total(g)
                .ok_or_else(|| Error::Model(format!("no Chern classes registered for `{g}`")))?;
            let base = if c < &BigInt::zero() { self.inverse_total(&base) } else { base };
            let mut k = c.magnitude().clone();
            while !k.is_zero() {
                total = self.mul_total(&total, &base);
                k -= 1u32;
            }
        }
        Ok((0..=n).map(|d| ChowClass { model: self.clone(), degree: d, coords: total[d].clone() }).collect())
    }

    pub fn chern_class(self: &Arc<Self>, x: &K0Class, i: usize) -> Result<ChowClass> {
        if i > self.dimension() {
            return Ok(self.zero(i.min(self.dimension())));
        }
        Ok(self.chern_total(x)?.swap_remove(i))
    }

    pub fn zero(self: &Arc<Self>, degree: usize) -> ChowClass {
        ChowClass { model: self.clone(), degree, coords: self.groups[degree].zero() }
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<ChowClass> {
        let &(d, i) = self.gen_degree.get(name).ok_or_else(|| Error::Model(format!("unknown Chow generator `{name}`")))?;
        Ok(ChowClass { model: self.clone(), degree: d, coords: lattice::unit_vector(self.groups[d].ngens(), i) })
    }

    pub fn class(self: &Arc<Self>, degree: usize, coords: &[i64]) -> Result<ChowClass> {
        if degree > self.dimension() || coords.len() != self.groups[degree].ngens() {
            return Err(Error::Model(format!("class does not fit CH^{degree}")));
        }
        Ok(ChowClass::new(self, degree, lattice::vector(coords)))
    }

    /// Registered cycle of a named ideal or class.
    pub fn cycle(self: &Arc<Self>, name: &str) -> Option<ChowClass> {
        let c = self.spec.cycles.iter().find(|c| c.name == name)?;
        Some(ChowClass::new(self, c.degree, lattice::vector(&c.value)))
    }

    /// Checks `C_r(x) = (-1)^{r-1} (r-1)! cycle(x)` for K₀ generators with a
    /// registered cycle, and that every generator has Chern classes.
    pub fn check_against(self: &Arc<Self>, k0: &Arc<K0Model>) -> Result<()> {
        for g in k0.generators() {
            if self.generator_total(g).is_none() {
                return Err(Error::Model(format!("{}: no Chern classes for `{g}`", self.name())));
            }
            if let Some(cyc) = self.cycle(g) {
                let r = cyc.degree;
                let f: BigInt = (1..r).map(BigInt::from).product::<BigInt>() * if r % 2 == 1 { 1 } else { -1 };
                let c = self.chern_class(&k0.generator(g)?, r)?;
                if c != cyc.scale(&f) {
                    return Err(Error::Model(format!("{}: C_{r}({g}) disagrees with its cycle", self.name())));
                }
            }
        }
        Ok(())
    }
}

impl ChowClass {
    fn new(model: &Arc<ChowModel>, degree: usize, coords: Vector) -> ChowClass {
        let coords = model.groups[degree].canonical(&coords);
        ChowClass { model: model.clone(), degree, coords }
    }

    pub fn model(&self) -> &Arc<ChowModel> {
        &self.model
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn group(&self) -> &FpGroup {
        &self.model.groups[self.degree]
    }

    pub fn is_zero(&self) -> bool {
        self.group().is_zero(&self.coords)
    }

    pub fn scale(&self, k: &BigInt) -> ChowClass {
        ChowClass::new(&self.model, self.degree, lattice::scale(&self.coords, k))
    }

    pub fn with_coords(&self, coords: Vector) -> ChowClass {
        ChowClass::new(&self.model, self.degree, coords)
    }

    /// Order in `CH^degree`, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.group().order_of(&self.coords)
    }
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        self.model.name() == other.model.name() && self.degree == other.degree && self.coords == other.coords
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(&self.model.spec.degrees[self.degree].generators, &self.coords))
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowClass({}, CH^{}: {self})", self.model.name(), self.degree)
    }
}

use std::fmt;
use std::sync::Arc;

use super::{groebner_basis, normal_form, Budget};
use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};

/// A quotient `Q[vars] / (relations)`. All ideal computations work on lifts
/// to the ambient polynomial ring.
pub struct RingPresentation {
    name: Option<String>,
    ring: Arc<PolyRing>,
    relations: Vec<Polynomial>,
    relation_basis: Vec<Polynomial>,
}

impl RingPresentation {
    pub fn new(ring: Arc<PolyRing>, relations: Vec<Polynomial>) -> Result<Arc<Self>> {
        Self::with_budget(ring, relations, &Budget::default())
    }

    pub fn with_budget(ring: Arc<PolyRing>, relations: Vec<Polynomial>, budget: &Budget) -> Result<Arc<Self>> {
        for r in &relations {
            if !PolyRing::same(r.ring(), &ring) {
                return Err(Error::RingMismatch);
            }
        }
        let relations: Vec<Polynomial> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let relation_basis = groebner_basis(&relations, budget)?;
        if relation_basis.iter().any(|g| g.is_one()) {
            return Err(Error::InvalidRing("relations generate the unit ideal".into()));
        }
        Ok(Arc::new(RingPresentation { name: None, ring, relations, relation_basis }))
    }

    pub fn free(ring: Arc<PolyRing>) -> Arc<Self> {
        Arc::new(RingPresentation { name: None, ring, relations: Vec::new(), relation_basis: Vec::new() })
    }

    /// Parses `Q[x,y]` plus relation strings.
    pub fn parse(decl: &str, relations: &[&str]) -> Result<Arc<Self>> {
        let ring = PolyRing::parse_decl(decl)?;
        let rels = relations.iter().map(|r| Polynomial::parse(&ring, r)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, rels)
    }

    pub fn named(self: Arc<Self>, name: &str) -> Arc<Self> {
        Arc::new(RingPresentation {
            name: Some(name.to_string()),
            ring: self.ring.clone(),
            relations: self.relations.clone(),
            relation_basis: self.relation_basis.clone(),
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn relation_basis(&self) -> &[Polynomial] {
        &self.relation_basis
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn var(&self, name: &str) -> Result<Polynomial> {
        self.ring.var(name)
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(&self.ring, text)
    }

    /// Canonical representative modulo the relations.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.relation_basis)
    }

    pub fn is_zero(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn equal(&self, a: &Polynomial, b: &Polynomial) -> bool {
        self.is_zero(&(a - b))
    }

    pub fn same(&self, other: &RingPresentation) -> bool {
        PolyRing::same(&self.ring, &other.ring) && self.relation_basis == other.relation_basis
    }

    /// Krull dimension of the presented ring.
    pub fn dimension(self: &Arc<Self>) -> Result<Option<usize>> {
        super::Ideal::new(self, vec![])?.krull_dimension()
    }
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            return write!(f, "{n}");
        }
        write!(f, "{}", self.ring)?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

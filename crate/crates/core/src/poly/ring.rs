use std::collections::HashSet;
use std::sync::Arc;

use super::{MonomialOrder, Polynomial};
use crate::error::{Error, Result};

/// An ambient polynomial ring over the rationals: declared variable names
/// plus the order used for the canonical term ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    order: MonomialOrder,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(vars: &[S], order: MonomialOrder) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for v in &vars {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("`{v}` is not a valid variable name")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidRing(format!("variable `{v}` declared twice")));
            }
        }
        Self::new_unchecked(vars, order)
    }

    /// Internal constructor allowing reserved helper names such as `@w`.
    pub(crate) fn new_unchecked(vars: Vec<String>, order: MonomialOrder) -> Result<Arc<Self>> {
        if let MonomialOrder::Elimination { block } = order {
            if block > vars.len() {
                return Err(Error::InvalidRing(format!(
                    "elimination block {block} larger than {} variables",
                    vars.len()
                )));
            }
        }
        Ok(Arc::new(PolyRing { vars, order }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The same variables under a different order.
    pub fn with_order(self: &Arc<Self>, order: MonomialOrder) -> Result<Arc<Self>> {
        if order == self.order {
            return Ok(self.clone());
        }
        Self::new_unchecked(self.vars.clone(), order)
    }

    /// Prepends helper variables (used for elimination).
    pub(crate) fn with_leading_vars(&self, extra: &[&str], order: MonomialOrder) -> Result<Arc<Self>> {
        let mut vars: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        Self::new_unchecked(vars, order)
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<Polynomial> {
        let idx = self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::variable(self, idx))
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    /// Parses `Q[x,y,z]` (optionally with an order suffix `:lex`).
    pub fn parse_decl(text: &str) -> Result<Arc<Self>> {
        let text = text.trim();
        let (body, order) = match text.rsplit_once("]:") {
            Some((b, o)) => (
                format!("{b}]"),
                MonomialOrder::parse(o).ok_or_else(|| Error::InvalidRing(format!("unknown order `{o}`")))?,
            ),
            None => (text.to_string(), MonomialOrder::GrevLex),
        };
        let inner = body
            .strip_prefix("Q[")
            .or_else(|| body.strip_prefix("QQ["))
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidRing(format!("expected `Q[vars]`, got `{text}`")))?;
        let vars: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        PolyRing::new(&vars, order)
    }
}

impl std::fmt::Display for PolyRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Q[{}]", self.vars.join(","))
    }
}

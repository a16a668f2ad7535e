//! Buchberger Gröbner bases and the ideal primitives built on them.

mod buchberger;
mod ideal;
mod presentation;

use serde::{Deserialize, Serialize};

pub use buchberger::{groebner_basis, normal_form, TrackedBasis};
pub use ideal::{Colength, Ideal};
pub use presentation::RingPresentation;

/// Explicit limits on a Gröbner computation. Exceeding any of them yields
/// [`crate::Error::ResourceLimit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_basis: usize,
    pub max_degree: u32,
    pub max_reductions: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_basis: 4000, max_degree: 64, max_reductions: 2_000_000 }
    }
}

pub mod error;
pub mod exec;
pub mod poly;

pub use error::{Error, Result};
pub use exec::Execution;
pub use poly::{Coeff, Monomial, MonomialOrder, PolyRing, Polynomial};
pub mod groebner;
pub mod ideal_ops;
pub mod avoidance;
pub mod matrix;
pub mod suslin;
pub mod universal;

pub use groebner::{Budget, Colength, Ideal, RingPresentation};
pub mod k0_models;
pub mod lambda_ring;
pub mod lattice;
pub mod patching;
pub mod sample;

//! λ-rings over finitely presented `K₀` models: λ- and γ-series, the
//! γ-filtration, Chern classes and cycle classes.

mod filtration;
mod model;
mod series;

pub use filtration::{
    chern_equal, chern_product, chern_total, cycle_of, gamma_filtration, top_chern_identity_holds, whitney_batch, whitney_holds,
    ChernClasses, FiltrationReport, GradedClass,
};
pub use model::{K0Class, K0Model, K0ModelSpec, LambdaEntry, ProductEntry};
pub(crate) use model::format_combination;
pub use series::{gamma, gamma_series, lambda_series, Series};

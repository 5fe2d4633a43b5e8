//! The A∞ formalism in the sign conventions where the relation reads
//! Σ (−1)^{✠ₙ} μ^{d−m+1}(a_d, …, a_{n+m+1}, μᵐ(a_{n+m}, …, a_{n+1}), a_n, …, a_1) = 0
//! with ✠ₙ = Σ_{j≤n} |a_j| − n.
//!
//! Inputs are always passed in the order `a_1, …, a_d`, so `inputs[0]` is the
//! morphism leaving the first object of the chain.

mod category;
mod cohomology;
mod functor;
mod hochschild;
mod massey;
mod relations;
mod tensor;
mod transfer;

pub use category::{chains, for_each_basis_tuple, for_each_tuple, mu_linear, AInfty, ChainIter, TableCategory};
pub use cohomology::{apply_linear, cohomology_category, hom_splitting, vectors_equal, GradedCategory};
pub use functor::{AInftyFunctor, IdentityFunctor, TableFunctor};
pub use hochschild::{hochschild, ChainKey, CochainKey, HochschildChains, HochschildCochain, HochschildComplex, HochschildReport};
pub use massey::{gauge_transform, massey_triple, GaugeFunctor, GaugeTransform, MasseyOutcome};
pub use relations::{
    check_ainfty_relations, check_functor_equations, dagger, describe_residual, functor_residual, relation_residual, functor_terms, relation_terms, FunctorTerm,
    RelationReport, RelationTerm, Residual,
};
pub use tensor::TensorCategory;
pub use transfer::{transfer_minimal_model, InclusionFunctor, TransferredModel};

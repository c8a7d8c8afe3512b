//! Mackey systems and cohomological Mackey functors over F_p.

mod check;
mod constructors;
mod functor;
mod morphism;
mod system;

pub use check::{
    check, double_coset_sum, Axiom, AxiomCoverage, CheckReport, Violation, DEFAULT_AXIOM_BUDGET,
};
pub use constructors::{
    constant, h0_lower, h0_lower_map, h0_upper, h0_upper_map, h_lower, h_lower_on, induced,
    ConstantKind,
};
pub use functor::{Cmf, CmfData, EdgeData};
pub use morphism::{
    cokernel, image, kernel, onto_image, quotient_functor, subfunctor, CmfMorphism, Ses,
};
pub use system::{MackeySystem, SystemFlags, SystemKind};

#[cfg(test)]
mod tests;

//! Exact arithmetic over rational combinations of declared irrationals, and
//! the integer-lattice machinery built on top of it.

mod affine;
mod lattice;
mod symbolic;

pub use affine::AffineForm;
pub use lattice::{
    hermite_normal_form, integer_kernel, kernel_mod_one, lambda_subgroups, rank_conditions, IntegerLattice,
    RankReport,
};
pub use symbolic::{
    continued_fraction_f64, continued_fraction_quadratic, continued_fraction_rational, Symbol, SymbolId,
    SymbolKind, SymbolTable, SymbolicReal,
};
pub(crate) use symbolic::clamp_unit;

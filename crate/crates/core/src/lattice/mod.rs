//! Exact integer lattice algebra: Hermite normal form, kernels, saturation,
//! duals, box enumeration, successive minima and transference.

mod enumerate;
mod int_lattice;
mod matrix;
mod minima;
mod transference;

pub use enumerate::{enumerate_in_box, BoxIter, EchelonBasis};
pub use int_lattice::{
    dual_basis, gram_det, integer_kernel, integer_kernel_rational, orthogonal_integer_complement,
    scaled_dual, sign_normalize, sup_norm, to_i64_vec, IntLattice,
};
pub use matrix::{hnf, rational_inverse, IntMatrix};
pub use minima::{
    minima_with, section_vertices, shortest_vector, successive_minima, DualSupNorm, L1Norm,
    LatticeNorm, NormKind, SuccessiveMinima, SupNorm,
};
pub use transference::{transference_check, TransferenceReport};

//! Deterministic low-level numerical kernels shared by all other modules.

mod matrix;
mod rng;
mod sampling;
mod stats;
mod sylvester;

pub use matrix::{dot, thin_qr, DenseMatrix};
pub use rng::SeededRng;
pub use sampling::{sample_gl_matrix, sample_gl_matrix_with_spectrum, sample_rademacher};
pub use stats::kendall_tau;
pub use sylvester::{sylvester_general, sylvester_residual, sylvester_solve};

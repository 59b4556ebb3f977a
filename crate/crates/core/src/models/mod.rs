//! The analytic model families: a scalar two-parameter net, diagonal
//! linear nets, and a shallow linear net with matrix weights and softmax
//! cross-entropy, together with data generation, training, and
//! symmetry-constraint checks.

mod constraints;
mod data;
mod diagonal;
mod idx;
mod matrixnet;
mod scalar;
mod train;

pub use constraints::{
    check_gl_gradient_constraint, check_gl_gradient_constraint_diag, check_local_constraints,
    ConstraintReport, SymmetryKind,
};
pub use data::{
    generate_classification_batch, generate_sparse_regression, generate_whitened_regression,
};
pub use diagonal::{
    diagonal_grad, diagonal_hessian_at_min, diagonal_loss, DiagonalParams, RegressionData,
};
pub use idx::{
    load_idx_images, load_idx_images_path, load_idx_labels, load_idx_labels_path, IdxImages,
};
pub use matrixnet::{
    matrixnet_grad, matrixnet_hvp, matrixnet_loss, ClassificationBatch, MatrixNetDirection,
    MatrixNetParams,
};
pub use scalar::{
    scalar_dataset_grad, scalar_dataset_hessian, scalar_dataset_loss, scalar_euclidean_grad,
    scalar_euclidean_hessian, scalar_grad_tangent, scalar_loss, ScalarParams,
};
pub use train::{train_diagonal, TrainOutcome};

//! Reproducing kernels, their Gram matrices, finite compressions of the
//! difference-quotient operator and numerical verifiers for the kernel and
//! resolvent identities of the model.

mod compression;
mod gram;
mod kernel;
mod rank;
mod verify;

pub use compression::{compress_difference_quotient, realize_reconstruct, ModelCompression};
pub use gram::{bv_kernel_gram, gram_matrix, KernelGram, INERTIA_REL_TOL};
pub use kernel::{difference_quotient, nevanlinna_kernel, schur_kernel, DIAG_TOL};
pub use rank::{model_space_rank_test, RankTest};
pub use verify::{
    verify_conjugation_identity, verify_dq_identities, verify_dw_symbol_identity, verify_rank_one_resolvent_difference,
    verify_schur_diagonal, verify_sum_decomposition,
};

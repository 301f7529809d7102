//! Quadratic forms over field towers: invariants, isotropy, Witt classes.

pub mod form;
pub mod invariants;
pub mod isotropy;
pub mod kernel;
pub mod pfister;
pub mod rational;
pub mod represent;
pub mod verdict;
pub mod witt;

pub use form::{orth_sum, pfister, scale, tensor, QuadraticForm};
pub use invariants::{clifford_invariant, discriminant, signed_discriminant, BrauerClass};
pub use isotropy::is_isotropic;
pub use kernel::{conic_kernel_membership, ideal_membership};
pub use pfister::{PfisterSum, PfisterTerm};
pub use represent::{represents, similarity_factor_check};
pub use verdict::{Certificate, Obligation, Status, Verdict};
pub use witt::{is_isometric, springer_residues, witt_decompose, ResiduePair, WittClass};

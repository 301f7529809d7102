pub mod base;
pub mod generic;
pub mod involution;
pub mod quaternion;

pub use base::{iso_base, iso_base_analysis, BaseAnalysis, CvpAssumption};
pub use generic::{generic_sum, generic_sum_residues, GenericResidues, GenericSum};
pub use involution::{
    adjoint_presentation, e1_invariant, e2_invariant, e2_trivial, iso_generic, morita_transfer,
    transfer_form, InvolutionPresentation, SkewHermitianForm,
};
pub use quaternion::{is_split, QuaternionAlgebra};

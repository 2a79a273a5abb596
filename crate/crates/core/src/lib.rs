//! Radial/tangential analysis of planar linear systems `X' = A X`.
//!
//! Every real 2x2 matrix splits the vector field on the unit circle into a
//! radial part `R(theta) X` and a tangential part `T(theta) X^perp`, two
//! sinusoids of period `pi` sharing one amplitude. Reactivity, eigen- and
//! orthovectors, standard forms and maximal amplification are all read off
//! these two curves.

pub mod amplification;
pub mod angle;
pub mod dynamics;
pub mod error;
pub mod forms;
pub mod matrix;
pub mod rt;
pub mod spectra;
pub mod synthesis;

pub use amplification::{
    rho_max_bound_eigen, rho_max_bound_ortho, rho_max_closed, rho_max_numeric, AmpMethod,
    AmplificationResult, ComplexPolicy, NumericOptions,
};
pub use angle::AngleModPi;
pub use dynamics::{
    integrate_linear, integrate_nonaut, integrate_polar, matrix_exponential, NonautConfig,
    Trajectory,
};
pub use error::{Error, Result};
pub use forms::{verify_form, FormKind, StandardFormResult};
pub use matrix::Mat2;
pub use rt::{decompose, reconstruct, RTParams};
pub use spectra::{
    angular_phase_line, eigen_structure, ortho_structure, transient_summary, Classification,
    EigenStructure, OrthoStructure, ReactiveSet, TransientSummary,
};

//! Correlation dynamics of qutrit pairs under local Markovian noise.
//!
//! A Bell state of two qutrits is evolved through local Kraus channels
//! (dephasing, trit-flip, trit-phase-flip, depolarizing) and two correlation
//! measures are tracked: the negativity and a lower bound on the geometric
//! discord. An exact, optimizer-based geometric discord and closed-form
//! references for the solvable families serve as independent checks.

pub mod channels;
pub mod cli;
pub mod config;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod measures;
pub mod oracle;
pub mod output;
pub mod random;
pub mod state;
pub mod sweep;
pub mod validation;

pub use channels::{
    apply_local_channels, dephasing_kraus, depolarizing_kraus, evolve, gamma_of, trit_flip_kraus,
    trit_phase_flip_kraus, validate_kraus, ChannelFamily, DecayParams, KrausChannel, KrausDiagnostics,
};
pub use error::{Error, Result};
pub use generators::{su_generators, GeneratorBasis, GeneratorKind};
pub use linalg::{hermitian_eigenvalues, tensor, trace_norm, ComplexMatrix};
pub use measures::{
    bloch_decomposition, gd_lower_bound, isotropic_family, negativity, BlochDecomposition, GdConvention, GdPrefactor,
};
pub use state::{make_bell_state, partial_trace, partial_transpose, validate_density_matrix, DensityMatrix, Subsystem};

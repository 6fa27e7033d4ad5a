//! Single-mode quantum-optics engine for interference of Kerr-squeezed
//! coherent states at a beam splitter.
//!
//! Two independent computational paths evaluate the same output statistics:
//! a truncated state-vector / density-matrix path ([`interferometer`]) and a
//! closed-form combinatorial path ([`closed_form`]). Tuning the relative
//! input phase to the dark-port condition leaves one output port populated
//! exclusively by even Fock states; the [`closed_form`] module also verifies
//! the term-level pair-wise cancellation behind that effect.

pub mod closed_form;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod interferometer;
pub mod numeric;
pub mod state_prep;

pub use error::{Error, Result};
pub use fock::{ComplexAmplitude, DensityMatrix, Distribution, FockVector, Support, TwoModeState};
pub use interferometer::{BeamSplitter, PortLabel};
pub use state_prep::{CoherentParams, KerrConvention, KerrParams};

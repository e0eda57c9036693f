//! Verification backends: dense oracles, statevectors, a noisy shot
//! sampler and post-selection estimators.

pub mod dense;
pub mod estimate;
pub mod sampler;
pub mod statevector;

pub use estimate::{estimate_energy, estimate_occupations, Estimate, Occupations, TermImage};
pub use sampler::{postselect, sample, sample_statevector, NoiseModel, ParityCheck, SampleSet};
pub use statevector::StateVector;

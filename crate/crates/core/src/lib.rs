pub mod error;
pub mod fermion;
pub mod circuits;
pub mod cli;
pub mod encoder;
pub mod gf2;
pub mod graph;
pub mod pauli;
pub mod reduce;
pub mod sim;
pub mod tableau;

pub use error::{Error, Result};
pub use pauli::{pauli, PauliTerm, WeightedPauliSum};

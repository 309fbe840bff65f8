//! Finite frames, POVMs, Gleason functions and CAZAC waveforms.
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigensolver, functional calculus.
//! * [`frames`]: frame analysis and constructions.
//! * [`povm`]: effects, POVMs and density operators; frame/POVM conversion.
//! * [`gleason`]: Gleason functions for orthonormal bases and Parseval frames.
//! * [`waveforms`]: CAZAC sequences, ambiguity functions and Gabor frames.

pub mod exec;
pub mod frames;
pub mod gleason;
pub mod linalg;
pub mod povm;
pub mod rng;
pub mod waveforms;

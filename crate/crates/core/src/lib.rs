pub mod cli;
pub mod diagop;
pub mod error;
pub mod hadamard;
pub mod io;
pub mod perm;
pub mod spectral;
pub mod tensor;
pub mod verify;

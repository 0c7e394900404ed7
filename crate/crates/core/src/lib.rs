pub mod analysis;
pub mod cli;
pub mod detection;
pub mod error;
pub mod fock;
pub mod math;
pub mod optics;
pub mod oracle;
pub mod verify;
